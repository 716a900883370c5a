use ini_core::guardband::min_guard_band;
use ini_core::{Error, SearchOptions};
use rayon::prelude::*;

use super::{echo_pair, emit, pair};
use crate::cli::GbCurveArgs;
use crate::error::CliError;
use crate::report::{Cell, Report};

pub fn run(args: &GbCurveArgs) -> Result<(), CliError> {
    let pair = pair(&args.pair)?;
    if args.n_int.is_empty() || args.n_int.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(
            "--n-int must be a nonempty strictly ascending list".into(),
        ));
    }
    let mut opts = SearchOptions {
        refine: args.refine,
        ..SearchOptions::default()
    };
    if let Some(step) = args.step {
        opts.step = Some(step.to_offset(pair.mu_u())?);
    }
    if let Some(h) = args.horizon {
        opts.horizon = h.to_offset(pair.mu_u())?;
    }

    let results: Vec<_> = args
        .n_int
        .par_iter()
        .map(|&n| min_guard_band(&pair, n, args.target_db, &opts))
        .collect();

    let mut report = Report::new(
        "gb-curve",
        vec![
            ("n_int", "interferer subcarriers"),
            (
                "min_gb_user_subcarriers",
                "victim subcarriers (empty if the horizon was exceeded)",
            ),
            ("min_gb_khz", "kHz"),
            (
                "achieved_rejection_db",
                "dB, worst over the tail from min_gb (best found if exceeded)",
            ),
        ],
    );
    echo_pair(&mut report, &pair);
    report
        .param("target_db", args.target_db)
        .param(
            "n_int",
            args.n_int.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
        )
        .param("step", args.step.map_or("1sc".into(), |s| s.to_string()))
        .param("horizon", args.horizon.map_or("2048bins".into(), |h| h.to_string()))
        .param("refine", args.refine);

    let mut exceeded = Vec::new();
    for (&n, r) in args.n_int.iter().zip(results) {
        match r {
            Ok(req) => report.push_row(vec![
                Cell::from(n),
                Cell::Float(req.victim_subcarriers()),
                Cell::Float(req.min_gb.khz()),
                Cell::Float(req.achieved_rejection_db),
            ]),
            Err(Error::HorizonExceeded { best_rejection_db, .. }) => {
                exceeded.push(n);
                report.push_row(vec![
                    Cell::from(n),
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Float(best_rejection_db),
                ]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    report
        .summary
        .push(("horizon_exceeded", Cell::from(exceeded.len() as u64)));
    emit(&report, &args.output)?;
    if !exceeded.is_empty() {
        return Err(CliError::Horizon(format!(
            "{} dB not reachable within the search horizon for n_int = {exceeded:?}",
            args.target_db
        )));
    }
    Ok(())
}
