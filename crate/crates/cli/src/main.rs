mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use forcebench::FitConfig;

use args::{Cli, Command};
use commands::{Context, Failure};

fn main() -> ExitCode {
    // Usage errors exit with 1; 2 is reserved for partial reports.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Context { run: cli.run };
    let outcome = match &cli.command {
        Command::Metrics { zb, zt, name } => commands::metrics(&ctx, zb, zt, name.as_deref()),
        Command::Compare {
            controllers,
            reports,
        } => commands::compare(&ctx, controllers, reports),
        Command::Coupled {
            zb,
            zt,
            load,
            step_out,
        } => commands::coupled(&ctx, zb, zt, load, step_out.as_deref()),
        Command::Fit {
            frd,
            num_order,
            den_order,
            iterations,
            name,
        } => commands::fit(
            &ctx,
            frd,
            &FitConfig::new(*num_order, *den_order, *iterations),
            name.as_deref(),
        ),
        Command::Bode { input } => commands::bode(&ctx, input),
    };
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
