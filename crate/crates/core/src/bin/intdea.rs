use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use intdea::report::{run, BigMChoice, ModelKind, RunConfig};

#[derive(Parser)]
#[command(name = "intdea", version, about = "Slacks-based interval DEA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Crisp,
    Idea,
    Eimil,
}

#[derive(Subcommand)]
enum Command {
    /// Assess every DMU of a dataset.
    Assess {
        /// Data CSV: header `dmu,<variables...>`, cells `v` or `lo..hi`.
        #[arg(long)]
        data: PathBuf,
        /// Schema CSV: rows `name,role`.
        #[arg(long)]
        schema: PathBuf,
        #[arg(long, value_enum, default_value = "eimil")]
        model: Model,
        /// Also run super-efficiency on efficient DMUs and rank all DMUs.
        #[arg(long = "super")]
        super_efficiency: bool,
        /// `per_variable`, `global`, or a CSV file of `variable,left,right`.
        #[arg(long)]
        bigm: Option<BigMChoice>,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for per-DMU target comparison CSVs.
        #[arg(long)]
        plot_data: Option<PathBuf>,
        /// Directory for the LP text of every model solved.
        #[arg(long)]
        dump_lp: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let Command::Assess {
        data,
        schema,
        model,
        super_efficiency,
        bigm,
        out,
        plot_data,
        dump_lp,
    } = Cli::parse().command;
    let config = RunConfig {
        data,
        schema,
        model: match model {
            Model::Crisp => ModelKind::Crisp,
            Model::Idea => ModelKind::Idea,
            Model::Eimil => ModelKind::Eimil,
        },
        super_efficiency,
        bigm,
        out,
        plot_data,
        dump_lp,
    };
    match run(&config, &mut io::stdout().lock(), &mut io::stderr()) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
