use ini_core::scenario::plan_scenario_with;
use ini_core::{PlanOptions, SearchOptions, ServiceSpec};
use rayon::prelude::*;
use serde_json::json;

use super::emit;
use crate::cli::ScenarioArgs;
use crate::error::CliError;
use crate::report::{Cell, Report};
use crate::scenario_file::{khz3, PlanOut, ScenarioFile};

/// Targets and RB counts of the built-in grid; numerologies 0, 1, 2.
pub const GRID_TARGETS_DB: [f64; 3] = [25.0, 30.0, 40.0];
pub const GRID_N_RB: [u64; 3] = [5, 10, 25];
const GRID_MU: [u32; 3] = [0, 1, 2];

struct Job {
    source: String,
    services: Vec<ServiceSpec>,
    target_db: f64,
    options: PlanOptions,
}

fn equal_services(mu: &[u32], n_rb: u64) -> Result<Vec<ServiceSpec>, CliError> {
    Ok(mu
        .iter()
        .map(|&m| ServiceSpec::new(m, n_rb))
        .collect::<ini_core::Result<_>>()?)
}

fn describe(services: &[ServiceSpec]) -> String {
    services
        .iter()
        .map(|s| format!("{}:{}", s.mu, s.n_rb))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn run(args: &ScenarioArgs) -> Result<(), CliError> {
    let defaults = PlanOptions {
        convention: args.convention,
        scaling: args.scaling,
        search: SearchOptions::default(),
    };
    let mut jobs = Vec::new();
    if !args.no_grid {
        for target_db in GRID_TARGETS_DB {
            for n_rb in GRID_N_RB {
                jobs.push(Job {
                    source: "grid".into(),
                    services: equal_services(&GRID_MU, n_rb)?,
                    target_db,
                    options: defaults,
                });
            }
        }
    }
    if args.target_db.is_empty() != args.n_rb.is_empty() {
        return Err(CliError::Usage("--target-db and --n-rb must be given together".into()));
    }
    for &target_db in &args.target_db {
        for &n_rb in &args.n_rb {
            jobs.push(Job {
                source: "args".into(),
                services: equal_services(&args.mu, n_rb)?,
                target_db,
                options: defaults,
            });
        }
    }
    for path in &args.file {
        let file = ScenarioFile::read(path)?;
        jobs.push(Job {
            source: path.display().to_string(),
            services: file.services()?,
            target_db: file.target_db,
            options: file.options(defaults)?,
        });
    }
    if jobs.is_empty() {
        return Err(CliError::Usage(
            "nothing to plan: drop --no-grid or give a scenario".into(),
        ));
    }

    let plans: Vec<_> = jobs
        .par_iter()
        .map(|j| plan_scenario_with(&j.services, j.target_db, &j.options))
        .collect();

    let mut report = Report::new(
        "scenario",
        vec![
            ("source", "grid, args or scenario file"),
            ("services", "mu:n_rb per service, ascending mu"),
            ("target_db", "dB"),
            ("convention", "guarded directions per boundary"),
            ("scaling", "how boundary requirements are solved"),
            ("guard_bands_khz", "kHz per boundary, ';'-separated"),
            ("service_bandwidth_khz", "kHz"),
            ("total_bandwidth_khz", "kHz"),
            ("efficiency", "service bandwidth / total bandwidth"),
            ("status", "ok or the planning error"),
        ],
    );
    report
        .param("convention", args.convention.as_str())
        .param("scaling", args.scaling.as_str())
        .param("no_grid", args.no_grid)
        .param(
            "target_db",
            args.target_db.iter().map(f64::to_string).collect::<Vec<_>>().join(";"),
        )
        .param(
            "n_rb",
            args.n_rb.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
        )
        .param("mu", args.mu.iter().map(u32::to_string).collect::<Vec<_>>().join(";"))
        .param(
            "files",
            args.file
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(";"),
        );

    let mut json_records = Vec::new();
    let mut failures = Vec::new();
    for (job, plan) in jobs.iter().zip(plans) {
        let mut sorted = job.services.clone();
        sorted.sort_by_key(|s| s.mu);
        let head = [
            Cell::from(job.source.as_str()),
            Cell::from(describe(&sorted)),
            Cell::Float(job.target_db),
            Cell::from(job.options.convention.as_str()),
            Cell::from(job.options.scaling.as_str()),
        ];
        let mut row = head.to_vec();
        match plan {
            Ok(plan) => {
                let guards: Vec<String> = plan
                    .guard_bands_khz
                    .iter()
                    .map(|g| format!("{:.3}", khz3(*g)))
                    .collect();
                row.extend([
                    Cell::from(guards.join(";")),
                    Cell::Float(khz3(plan.service_bandwidth_khz)),
                    Cell::Float(khz3(plan.total_bandwidth_khz)),
                    Cell::Float(plan.efficiency),
                    Cell::from("ok"),
                ]);
                json_records.push(json!({ "source": job.source, "status": "ok", "plan": PlanOut::from(&plan) }));
            }
            Err(e @ ini_core::Error::BoundaryHorizonExceeded { .. }) => {
                let msg = e.to_string();
                row.extend([
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                    Cell::from(msg.as_str()),
                ]);
                json_records.push(json!({
                    "source": job.source,
                    "status": msg,
                    "services": describe(&sorted),
                    "target_rejection_db": job.target_db,
                }));
                failures.push(msg);
            }
            Err(e) => return Err(e.into()),
        }
        report.push_row(row);
    }
    report.summary.extend([
        ("plans", Cell::from(jobs.len() as u64)),
        ("horizon_exceeded", Cell::from(failures.len() as u64)),
    ]);
    report.json_records = Some(json_records);
    emit(&report, &args.output)?;
    if !failures.is_empty() {
        return Err(CliError::Horizon(failures.join("; ")));
    }
    Ok(())
}
