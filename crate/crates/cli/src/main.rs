use std::process::ExitCode;

use clap::Parser;
use skewrank_cli::args::{Cli, Command};
use skewrank_cli::{commands, selftest, CliError, EXIT_INPUT, EXIT_SELFTEST};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Curve(a) => commands::curve(a),
        Command::Invert(a) => commands::invert(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Sample(a) => commands::sample(a),
        Command::Selftest(a) => {
            let checks = selftest::run(a.level, selftest::Kernels::with_fault(a.inject_fault));
            print!("{}", selftest::report(&checks));
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                Ok(String::new())
            } else {
                Err(CliError::new(EXIT_SELFTEST, format!("failing checks:\n  {}", failed.join("\n  "))))
            }
        }
    };
    match result {
        Ok(out) => {
            if !out.is_empty() {
                print!("{out}");
                if !out.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
