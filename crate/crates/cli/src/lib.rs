//! Library side of the `qallpair` binary, kept separate so commands can be
//! driven from tests.

pub mod args;
pub mod bench;
pub mod commands;
pub mod demo;
pub mod error;
pub mod model_file;

use std::io::Write;

use args::{Cli, Command};
pub use error::{CliError, CliResult};

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Train(a) => commands::train_cmd(a, out),
        Command::Predict(a) => commands::predict_cmd(a, out),
        Command::Evaluate(a) => commands::evaluate_cmd(a, out),
        Command::Demo(a) => demo::demo_cmd(&a.demo, out),
        Command::Bench(a) => bench::bench_cmd(a, out),
    }
}
