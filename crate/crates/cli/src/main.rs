use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use levy_smalltime_cli::{exit_code, init_threads, run, Command, Format, RunConfig};

/// Small-time growth of Lévy processes against t^kappa.
///
/// Exit status: 0 for definite verdicts, 2 when a verdict is inconclusive,
/// 1 on errors.
#[derive(Parser, Debug)]
#[command(name = "levy-smalltime", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    /// Process spec (gamma, sigma2, jump) or a bare jump measure, as JSON
    #[arg(long, alias = "measure")]
    spec: PathBuf,
    /// Directory for report files
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// limsup, liminf and lim of X_t / t^kappa with their basis
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kappa: Option<String>,
        /// Grid `a:b:step` or `k1,k2,...`
        #[arg(long)]
        all_kappa: Option<String>,
        /// Side whose W enters J(lambda)
        #[arg(long)]
        w_side: Option<String>,
        /// analytic (default) or numeric
        #[arg(long)]
        engine: Option<String>,
    },
    /// A single integral test
    Test {
        #[command(flatten)]
        common: Common,
        /// cond2, I, J, K, 5.1 or 33b
        #[arg(long)]
        test: Option<String>,
        #[arg(long)]
        kappa: Option<String>,
        /// a for I, lambda for J, d for K
        #[arg(long)]
        param: Option<String>,
        /// positive, negative or both
        #[arg(long)]
        side: Option<String>,
        #[arg(long)]
        engine: Option<String>,
    },
    /// Critical constant of the I, J or K test
    Critical {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        test: Option<String>,
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long)]
        side: Option<String>,
        #[arg(long)]
        engine: Option<String>,
    },
    /// A derived functional on a geometric grid
    Functional {
        #[command(flatten)]
        common: Common,
        /// V, U, W_plus, W_minus, A_plus, A_minus, rho_kappa, U_plus, m_T
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long)]
        x_min: Option<String>,
        #[arg(long)]
        points: Option<String>,
    },
    /// Monte Carlo trend statistics on t_n = r^n
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        depth: Option<String>,
        #[arg(long)]
        paths: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        /// signed or absolute
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        cutoff_scale: Option<String>,
        #[arg(long)]
        gaussian_refinement: Option<String>,
        /// Also write every path grid as CSV
        #[arg(long)]
        dump_paths: bool,
    },
    /// One classification over a kappa grid
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Grid `a:b:step` or `k1,k2,...`
        #[arg(long)]
        kappas: Option<String>,
        /// two_sided, one_sided, liminf or limit
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        w_side: Option<String>,
        #[arg(long)]
        engine: Option<String>,
    },
}

fn params(pairs: &[(&str, &Option<String>)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
        .collect()
}

fn config(cmd: Cmd) -> RunConfig {
    let (command, common, parameters) = match cmd {
        Cmd::Classify {
            common,
            kappa,
            all_kappa,
            w_side,
            engine,
        } => (
            Command::Classify,
            common,
            params(&[
                ("kappa", &kappa),
                ("all_kappa", &all_kappa),
                ("w_side", &w_side),
                ("engine", &engine),
            ]),
        ),
        Cmd::Test {
            common,
            test,
            kappa,
            param,
            side,
            engine,
        } => (
            Command::Test,
            common,
            params(&[
                ("test", &test),
                ("kappa", &kappa),
                ("param", &param),
                ("side", &side),
                ("engine", &engine),
            ]),
        ),
        Cmd::Critical {
            common,
            test,
            kappa,
            side,
            engine,
        } => (
            Command::Critical,
            common,
            params(&[("test", &test), ("kappa", &kappa), ("side", &side), ("engine", &engine)]),
        ),
        Cmd::Functional {
            common,
            name,
            kappa,
            x_min,
            points,
        } => (
            Command::Functional,
            common,
            params(&[
                ("name", &name),
                ("kappa", &kappa),
                ("x_min", &x_min),
                ("points", &points),
            ]),
        ),
        Cmd::Simulate {
            common,
            kappa,
            r,
            depth,
            paths,
            seed,
            mode,
            cutoff_scale,
            gaussian_refinement,
            dump_paths,
        } => {
            let dump = dump_paths.then(|| "true".to_string());
            (
                Command::Simulate,
                common,
                params(&[
                    ("kappa", &kappa),
                    ("r", &r),
                    ("depth", &depth),
                    ("paths", &paths),
                    ("seed", &seed),
                    ("mode", &mode),
                    ("cutoff_scale", &cutoff_scale),
                    ("gaussian_refinement", &gaussian_refinement),
                    ("dump_paths", &dump),
                ]),
            )
        }
        Cmd::Sweep {
            common,
            kappas,
            target,
            w_side,
            engine,
        } => (
            Command::Sweep,
            common,
            params(&[
                ("kappas", &kappas),
                ("target", &target),
                ("w_side", &w_side),
                ("engine", &engine),
            ]),
        ),
    };
    RunConfig {
        command,
        spec_path: common.spec,
        parameters,
        output_dir: common.out,
        format: common.format,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // clap would exit with 2, which is reserved for inconclusive verdicts
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let cfg = config(cli.command);
    let result = run(&cfg);
    match &result {
        Ok(o) => {
            for f in &o.files {
                println!("{}", f.display());
            }
            if o.status.exit_code() == 2 {
                eprintln!(
                    "inconclusive: see {}",
                    o.files.first().map(|f| f.display().to_string()).unwrap_or_default()
                );
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
