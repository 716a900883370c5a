use ini_core::analytic::{mse_multi_tone, mse_rb_average};
use ini_core::{rejection_db, ToneAllocation};
use rayon::prelude::*;

use super::{echo_pair, emit, gb_cells, pair, GB_COLUMNS};
use crate::cli::SweepArgs;
use crate::error::CliError;
use crate::report::{Cell, Report};

pub fn run(args: &SweepArgs) -> Result<(), CliError> {
    let pair = pair(&args.pair)?;
    let alloc = ToneAllocation::new(pair.mu_i(), 0, args.n_int)?;
    let grid = args.grid.offsets(pair.mu_u())?;

    let mut columns = GB_COLUMNS.to_vec();
    columns.extend([
        ("mse_linear", "interference power over unit symbol power"),
        ("rejection_db", "dB, -10 log10(mse_linear)"),
        ("evaluator", "closed form used"),
    ]);
    let mut report = Report::new("mse-sweep", columns);
    echo_pair(&mut report, &pair);
    report
        .param("n_int", args.n_int)
        .param("gb_start", args.grid.gb_start)
        .param("gb_stop", args.grid.gb_stop)
        .param("gb_step", args.grid.gb_step)
        .param("evaluator", args.evaluator)
        .param("rb_average", args.rb_average);

    let values: Vec<f64> = grid
        .par_iter()
        .map(|&gb| {
            if args.rb_average {
                mse_rb_average(&pair, &alloc, gb, args.evaluator)
            } else {
                mse_multi_tone(&pair, &alloc, gb, args.evaluator)
            }
        })
        .collect::<ini_core::Result<_>>()?;
    for (gb, mse) in grid.iter().zip(values) {
        let mut row = gb_cells(*gb, pair.mu_u()).to_vec();
        row.extend([
            Cell::Sci(mse),
            Cell::Float(rejection_db(mse)),
            Cell::from(args.evaluator.as_str()),
        ]);
        report.push_row(row);
    }
    report.summary.push(("points", Cell::from(report.rows.len() as u64)));
    emit(&report, &args.output)
}
