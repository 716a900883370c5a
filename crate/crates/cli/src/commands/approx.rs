use ini_core::analytic::{scale_invariance_grid, scale_invariance_residual};
use ini_core::numerology::MAX_MU;
use ini_core::InterferencePair;
use rayon::prelude::*;

use super::emit;
use crate::cli::ApproxArgs;
use crate::error::CliError;
use crate::report::{Cell, Report};

struct Case {
    pair: InterferencePair,
    shifted: InterferencePair,
    alpha: i32,
}

fn cases(args: &ApproxArgs) -> Result<Vec<Case>, CliError> {
    let pairs: Vec<InterferencePair> = match (args.mu_i, args.mu_u) {
        (Some(i), Some(u)) => vec![InterferencePair::new(i, u)?],
        _ => (0..=MAX_MU)
            .flat_map(|i| (0..=MAX_MU).map(move |u| (i, u)))
            .filter_map(|(i, u)| InterferencePair::new(i, u).ok())
            .collect(),
    };
    let explicit = !args.alpha.is_empty();
    let alphas: Vec<i32> = if explicit {
        args.alpha.clone()
    } else {
        (-(MAX_MU as i32)..=MAX_MU as i32).filter(|&a| a != 0).collect()
    };
    let mut out = Vec::new();
    for pair in pairs {
        for &alpha in &alphas {
            match pair.shifted(alpha) {
                Ok(shifted) => out.push(Case { pair, shifted, alpha }),
                Err(e) if explicit && args.mu_i.is_some() => return Err(e.into()),
                Err(_) => {}
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage(
            "no (pair, alpha) combination keeps both numerologies in range".into(),
        ));
    }
    Ok(out)
}

pub fn run(args: &ApproxArgs) -> Result<(), CliError> {
    let cases = cases(args)?;
    let results = cases
        .par_iter()
        .map(|c| {
            let grid = scale_invariance_grid(&c.pair, args.n_int, c.alpha, args.points)?;
            let residual = scale_invariance_residual(&c.pair, args.n_int, c.alpha, &grid)?;
            Ok((grid[grid.len() - 1], residual))
        })
        .collect::<ini_core::Result<Vec<_>>>()?;

    let mut report = Report::new(
        "approx-check",
        vec![
            ("mu_i", "interferer numerology"),
            ("mu_u", "victim numerology"),
            ("alpha", "numerology shift"),
            ("shifted_mu_i", "interferer numerology after the shift"),
            ("shifted_mu_u", "victim numerology after the shift"),
            (
                "g_max_user_subcarriers",
                "last grid point, victim subcarriers (grid starts at 1)",
            ),
            ("max_residual_db", "dB, largest |10 log10| MSE ratio over the grid"),
        ],
    );
    report
        .param("mu_i", args.mu_i.map_or("all".into(), |m| m.to_string()))
        .param("mu_u", args.mu_u.map_or("all".into(), |m| m.to_string()))
        .param(
            "alpha",
            if args.alpha.is_empty() {
                "all".into()
            } else {
                args.alpha.iter().map(i32::to_string).collect::<Vec<_>>().join(";")
            },
        )
        .param("n_int", args.n_int)
        .param("points", args.points)
        .param("tolerance_db", args.tolerance_db);

    let mut worst = 0.0f64;
    for (c, (g_max, r)) in cases.iter().zip(&results) {
        worst = worst.max(*r);
        report.push_row(vec![
            Cell::from(c.pair.mu_i()),
            Cell::from(c.pair.mu_u()),
            Cell::from(c.alpha),
            Cell::from(c.shifted.mu_i()),
            Cell::from(c.shifted.mu_u()),
            Cell::Float(*g_max),
            Cell::Float(*r),
        ]);
    }
    let failed = results
        .iter()
        .filter(|(_, r)| r.is_nan() || *r > args.tolerance_db)
        .count();
    report.summary.extend([
        ("cases", Cell::from(cases.len() as u64)),
        ("max_residual_db", Cell::Float(worst)),
        ("beyond_tolerance", Cell::from(failed as u64)),
    ]);
    emit(&report, &args.output)?;
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            points: cases.len(),
            limit: args.tolerance_db,
        });
    }
    Ok(())
}
