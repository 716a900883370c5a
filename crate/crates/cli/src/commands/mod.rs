use std::fs::File;
use std::io::{self, BufWriter, Write};

use ini_core::{FrequencyOffset, InterferencePair};

use crate::cli::{Command, OutputArgs, PairArgs};
use crate::error::CliError;
use crate::report::{Cell, Report};

mod approx;
mod gb_curve;
mod scenario;
mod sweep;
mod verify;

pub fn execute(command: &Command) -> Result<(), CliError> {
    match command {
        Command::MseSweep(a) => sweep::run(a),
        Command::Verify(a) => verify::run(a),
        Command::GbCurve(a) => gb_curve::run(a),
        Command::Scenario(a) => scenario::run(a),
        Command::ApproxCheck(a) => approx::run(a),
    }
}

fn pair(args: &PairArgs) -> Result<InterferencePair, CliError> {
    Ok(InterferencePair::new(args.mu_i, args.mu_u)?)
}

fn echo_pair(report: &mut Report, pair: &InterferencePair) {
    report.param("mu_i", pair.mu_i()).param("mu_u", pair.mu_u());
}

/// The three guard-band columns shared by sweep and verify output.
const GB_COLUMNS: [(&str, &str); 3] = [
    ("gb_bins", "15 kHz bins, victim tone to nearest interferer tone"),
    ("gb_khz", "kHz"),
    ("gb_user_subcarriers", "victim subcarriers"),
];

fn gb_cells(gb: FrequencyOffset, mu_u: u32) -> [Cell; 3] {
    [
        Cell::Float(gb.bins()),
        Cell::Float(gb.khz()),
        Cell::Float(gb.subcarriers(mu_u)),
    ]
}

fn emit(report: &Report, output: &OutputArgs) -> Result<(), CliError> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.write(output.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report.write(output.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}
