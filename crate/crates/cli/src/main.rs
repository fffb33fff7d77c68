mod config;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use config::Config;
use cv_repeater::optimizer::ChiInterval;
use cv_repeater::oracle::{quadrature_metrics, QuadratureGrid};
use cv_repeater::report::{self, GridSpec};
use cv_repeater::{
    compose, gain_tuned, link_metrics, AmplifierKind, AmplifierModel, EcParams, FiberModel,
};

#[derive(Parser, Debug)]
#[command(
    name = "cvrep",
    version,
    about = "Error-corrected CV links and repeater chains"
)]
struct Cli {
    /// Flat `key = value` file supplying defaults for any long option.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fidelity and success probability of one link, optionally chained.
    Link(LinkArgs),
    /// One amplifier configuration across a transmission grid.
    Sweep(SweepArgs),
    /// Maximum two-link fidelity versus transmission for S1, S2, S3 and O2.
    Fig3(GridArgs),
    /// Two-link success probability at a fixed fidelity for 1 to 3 scissors.
    Fig4(Fig4Args),
    /// Chain fidelity versus transmission for 2, 4 and 8 links.
    Fig5(Fig5Args),
    /// 200/400/800 km chains against reference values.
    Table1(Table1Args),
    /// Cross-check engine, closed forms and Fock-space oracle.
    Verify,
}

#[derive(Args, Debug, Default)]
struct AmplifierArgs {
    /// `scissors` or `optimal`.
    #[arg(long)]
    kind: Option<AmplifierKind>,
    /// Truncation order N (number of scissors).
    #[arg(long)]
    order: Option<usize>,
    /// Fixed amplifier gain.
    #[arg(long, conflicts_with = "gain_tuned")]
    gain: Option<f64>,
    /// Gain g = eta^(-1/4) / chi (default when no gain is given).
    #[arg(long)]
    gain_tuned: bool,
}

#[derive(Args, Debug)]
struct LinkArgs {
    /// Per-link transmission.
    #[arg(long, conflicts_with = "distance_km")]
    eta: Option<f64>,
    /// Per-link fibre length instead of a transmission.
    #[arg(long)]
    distance_km: Option<f64>,
    #[arg(long)]
    atten_db_per_km: Option<f64>,
    /// Entanglement strength of the resource state.
    #[arg(long)]
    chi: Option<f64>,
    #[command(flatten)]
    amp: AmplifierArgs,
    /// Number of links in the chain (power of two).
    #[arg(long)]
    links: Option<usize>,
    /// Also integrate the Fock-space simulation over the outcome plane.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Transmission grid `start:stop:points:log|lin`.
    #[arg(long)]
    grid: Option<GridSpec>,
    #[arg(long)]
    chi: Option<f64>,
    #[command(flatten)]
    amp: AmplifierArgs,
    #[arg(long)]
    links: Option<usize>,
    /// CSV output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    grid: Option<GridSpec>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Fig4Args {
    #[command(flatten)]
    grid: GridArgs,
    /// Required two-link fidelity.
    #[arg(long)]
    f_target: Option<f64>,
}

#[derive(Args, Debug)]
struct Fig5Args {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    chi: Option<f64>,
    /// Comma-separated link counts.
    #[arg(long)]
    links: Option<String>,
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args, Debug)]
struct Table1Args {
    #[arg(long)]
    atten_db_per_km: Option<f64>,
    #[arg(long)]
    chi: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

const DEFAULT_F_TARGET: f64 = 0.99;
const DEFAULT_FIG5_CHI: f64 = 0.1;
const DEFAULT_FIG5_LINKS: [usize; 3] = [2, 4, 8];

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Link(args) => link(&cfg, args),
        Command::Sweep(args) => sweep(&cfg, args),
        Command::Fig3(args) => {
            let grid = grid(&cfg, args.grid)?;
            let rows = report::fig3(&grid, ChiInterval::default())?;
            emit(&cfg, args.out, &report::fig3_csv(&rows))
        }
        Command::Fig4(args) => {
            let grid = grid(&cfg, args.grid.grid)?;
            let target = cfg
                .pick(args.f_target, "f-target")?
                .unwrap_or(DEFAULT_F_TARGET);
            let rows = report::fig4(
                &grid,
                AmplifierKind::Scissors,
                &report::FIG4_ORDERS,
                target,
                ChiInterval::default(),
            )?;
            emit(&cfg, args.grid.out, &report::fig4_csv(&rows))
        }
        Command::Fig5(args) => {
            let grid = grid(&cfg, args.grid.grid)?;
            let chi = cfg.pick(args.chi, "chi")?.unwrap_or(DEFAULT_FIG5_CHI);
            let order = cfg.pick(args.order, "order")?.unwrap_or(1);
            let links = match cfg.pick(args.links, "links")? {
                Some(list) => parse_list(&list)?,
                None => DEFAULT_FIG5_LINKS.to_vec(),
            };
            let rows = report::fig5(&grid, chi, AmplifierKind::Scissors, order, &links)?;
            emit(&cfg, args.grid.out, &report::fig5_csv(&rows))
        }
        Command::Table1(args) => {
            let fiber = fiber(&cfg, args.atten_db_per_km)?;
            let chi = cfg.pick(args.chi, "chi")?.unwrap_or(report::TABLE1_CHI);
            let rows = report::table1(&fiber, chi)?;
            print!("{}", report::render_table1(&rows));
            if let Some(path) = cfg.pick(args.out, "out")? {
                write_file(&path, &report::table1_csv(&rows))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify => {
            let checks = report::verify()?;
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {} failed", checks.len(), failed);
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn parse_list(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .with_context(|| format!("bad link count `{s}`"))
        })
        .collect()
}

fn grid(cfg: &Config, cli: Option<GridSpec>) -> Result<Vec<f64>> {
    Ok(cfg.pick(cli, "grid")?.unwrap_or(GridSpec::DEFAULT).values())
}

fn fiber(cfg: &Config, cli: Option<f64>) -> Result<FiberModel> {
    Ok(match cfg.pick(cli, "atten-db-per-km")? {
        Some(a) => FiberModel::new(a)?,
        None => FiberModel::default(),
    })
}

fn required<T>(value: Option<T>, key: &str) -> Result<T> {
    match value {
        Some(v) => Ok(v),
        None => bail!("missing --{key} (on the command line or in the config file)"),
    }
}

struct Amplifier {
    kind: AmplifierKind,
    order: usize,
    gain: Option<f64>,
}

fn amplifier(cfg: &Config, args: AmplifierArgs) -> Result<Amplifier> {
    let kind = cfg
        .pick(args.kind, "kind")?
        .unwrap_or(AmplifierKind::Scissors);
    let order = cfg.pick(args.order, "order")?.unwrap_or(1);
    let tuned = cfg.flag(args.gain_tuned, "gain-tuned")?;
    // a tuned request on the command line beats a gain from the file
    let gain = if args.gain_tuned {
        None
    } else {
        cfg.pick(args.gain, "gain")?
    };
    if tuned && gain.is_some() {
        bail!("--gain and --gain-tuned are mutually exclusive");
    }
    Ok(Amplifier { kind, order, gain })
}

fn link(cfg: &Config, args: LinkArgs) -> Result<ExitCode> {
    let eta = match (
        cfg.pick(args.eta, "eta")?,
        cfg.pick(args.distance_km, "distance-km")?,
    ) {
        (Some(eta), None) => eta,
        (None, Some(km)) => fiber(cfg, args.atten_db_per_km)?.transmission(km)?,
        (Some(_), Some(_)) => bail!("give either --eta or --distance-km, not both"),
        (None, None) => bail!("missing --eta or --distance-km"),
    };
    let chi = required(cfg.pick(args.chi, "chi")?, "chi")?;
    let amp = amplifier(cfg, args.amp)?;
    let gain = match amp.gain {
        Some(g) => g,
        None => gain_tuned(eta, chi)?,
    };
    let params = EcParams::new(eta, chi, AmplifierModel::new(amp.kind, amp.order, gain)?)?;
    let m = link_metrics(&params)?;

    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
    line("eta", report::fmt_num(eta));
    line("chi", report::fmt_num(chi));
    line("kind", amp.kind.to_string());
    line("order", amp.order.to_string());
    line("gain", report::fmt_num(gain));
    line("lambda", report::fmt_num(m.effective_gain));
    line("F", report::fmt_num(m.fidelity));
    line("P", report::fmt_num(m.success_prob));
    if let Some(links) = cfg.pick(args.links, "links")? {
        let chain = compose(&m, links)?;
        line("M", links.to_string());
        line("F_M", report::fmt_num(chain.fidelity_bound));
        line("P_M", report::fmt_num(chain.success_prob));
    }
    if cfg.flag(args.oracle, "oracle")? {
        let alpha = Complex64::new(0.0, 0.0);
        let q = quadrature_metrics(&params, alpha, &QuadratureGrid::covering(&params, alpha))?;
        line("oracle_F", report::fmt_num(q.fidelity));
        line("oracle_P", report::fmt_num(q.success_prob));
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn sweep(cfg: &Config, args: SweepArgs) -> Result<ExitCode> {
    let grid = grid(cfg, args.grid)?;
    let chi = required(cfg.pick(args.chi, "chi")?, "chi")?;
    let amp = amplifier(cfg, args.amp)?;
    let links = cfg.pick(args.links, "links")?.unwrap_or(2);
    let rows = report::sweep(&grid, chi, amp.kind, amp.order, amp.gain, links)?;
    emit(cfg, args.out, &report::sweep_csv(&rows))
}

fn emit(cfg: &Config, out: Option<PathBuf>, text: &str) -> Result<ExitCode> {
    match cfg.pick(out, "out")? {
        Some(path) => write_file(&path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
