use std::fs::File;

use ini_core::analytic::mse_multi_tone;
use ini_core::waveform::{batch_seed, place_tones, synthesize};
use ini_core::{Evaluator, MonteCarlo, SymbolStream};
use rayon::prelude::*;

use super::{echo_pair, emit, gb_cells, pair, GB_COLUMNS};
use crate::cli::VerifyArgs;
use crate::dump::write_samples;
use crate::error::CliError;
use crate::parallel::run_monte_carlo;
use crate::report::{Cell, Report};

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    let pair = pair(&args.pair)?;
    let grid = args.grid.offsets(pair.mu_u())?;
    if args.z_limit.is_nan() || args.z_limit <= 0.0 || !(0.0..=1.0).contains(&args.max_outliers) {
        return Err(CliError::Usage(
            "--z-limit must be positive and --max-outliers in [0, 1]".into(),
        ));
    }

    // every grid point must be a realizable tone placement
    let setups = grid
        .iter()
        .map(|gb| {
            let bins = gb.bins();
            if bins.fract() != 0.0 {
                return Err(CliError::Usage(format!(
                    "guard band {bins} bins is not a whole number of bins"
                )));
            }
            let (alloc, victim) = place_tones(&pair, bins as u64, args.n_int)?;
            let analytic = mse_multi_tone(&pair, &alloc, *gb, args.evaluator)?;
            Ok((alloc, victim, analytic))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    if let Some(path) = &args.dump_samples {
        let (alloc, _, _) = &setups[0];
        let stream = SymbolStream::new(*alloc, args.dump_symbols, args.seed);
        write_samples(&synthesize(&stream)?, &mut File::create(path)?)?;
    }

    let estimates = setups
        .par_iter()
        .enumerate()
        .map(|(k, (alloc, victim, _))| {
            let mc = MonteCarlo::new(&pair, alloc, *victim, args.n_symbols, batch_seed(args.seed, k as u64))?
                .with_constellation(args.constellation);
            Ok(run_monte_carlo(&mc))
        })
        .collect::<ini_core::Result<Vec<_>>>()?;

    let mut columns = GB_COLUMNS.to_vec();
    columns.extend([
        ("analytic_mse", "closed form, over unit symbol power"),
        ("mc_mse", "simulated mean of |a_hat|^2"),
        ("std_error", "standard error of mc_mse"),
        ("z", "(mc_mse - analytic_mse) / std_error"),
        ("evaluator", "closed form used"),
    ]);
    let mut report = Report::new("verify", columns);
    report.seed = Some(args.seed);
    echo_pair(&mut report, &pair);
    report
        .param("n_int", args.n_int)
        .param("gb_start", args.grid.gb_start)
        .param("gb_stop", args.grid.gb_stop)
        .param("gb_step", args.grid.gb_step)
        .param("n_symbols", args.n_symbols)
        .param("evaluator", args.evaluator)
        .param("constellation", args.constellation.as_str())
        .param("z_limit", args.z_limit)
        .param("max_outliers", args.max_outliers);

    let mut outliers = 0;
    let mut max_abs_z = 0.0f64;
    for ((gb, (_, _, analytic)), est) in grid.iter().zip(&setups).zip(&estimates) {
        let z = est.z_score(*analytic);
        max_abs_z = max_abs_z.max(z.abs());
        if z.is_nan() || z.abs() > args.z_limit {
            outliers += 1;
        }
        let mut row = gb_cells(*gb, pair.mu_u()).to_vec();
        row.extend([
            Cell::Sci(*analytic),
            Cell::Sci(est.mse),
            Cell::Sci(est.std_error),
            Cell::Float(z),
            Cell::from(args.evaluator.as_str()),
        ]);
        report.push_row(row);
    }
    let points = grid.len();
    let failed = outliers as f64 > args.max_outliers * points as f64;
    report.summary.extend([
        ("points", Cell::from(points as u64)),
        ("victim_symbols_per_point", Cell::from(estimates[0].victim_symbols)),
        ("outliers", Cell::from(outliers as u64)),
        ("max_abs_z", Cell::Float(max_abs_z)),
        ("verdict", Cell::from(if failed { "fail" } else { "pass" })),
    ]);
    if args.evaluator == Evaluator::Literal && pair.q_ratio() < 1.0 {
        report.summary.push((
            "note",
            Cell::from("literal closed form sums more interferer samples than a Q<1 victim window holds; a mismatch here is expected"),
        ));
    }
    emit(&report, &args.output)?;
    if failed {
        return Err(CliError::Verification {
            failed: outliers,
            points,
            limit: args.z_limit,
        });
    }
    Ok(())
}
