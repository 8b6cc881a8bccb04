use std::f64::consts::PI;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use knotscatter::braid::{amplitude, BraidWord, Params};
use knotscatter::families::{FamilySpec, Normalization};
use knotscatter::graph::{cycle_graph, series_graph, GraphSpec};
use knotscatter::sweep::{
    detect_universal, emit, format_sig, parse_angle, parse_config, parse_range, run_sweep, Grid, OutputFormat,
    SweepConfig, Target, UniversalFamily, VERSION,
};
use knotscatter::{Error, Result};

/// Transmission through braid-closure devices and quantum graphs.
///
/// Braid words are written `1^3,2^-2,1`: generator 1 is the non-diagonal
/// R₂, generator 2 the diagonal R₁, and the LAST-listed letter acts first.
#[derive(Parser)]
#[command(name = "knotscatter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Amplitude and |t|² of one word at one phase.
    Eval {
        #[arg(long)]
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// |t|² over a θ grid.
    Sweep(SweepArgs),
    /// |T|² of a quantum graph over a kℓ grid.
    Graph(GraphArgs),
    /// Phases where a whole family shares one |t|².
    Universal(UniversalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Torus,
    Twist,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    PerState,
    PerGenus,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    samples: Option<usize>,
    /// `a:b`, e.g. `0:pi` or `0:2pi`.
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    mask_unitary: bool,
    #[arg(long)]
    pole_guard: Option<f64>,
}

impl GridArgs {
    fn apply(&self, cfg: &mut SweepConfig) -> Result<()> {
        if let Some(s) = self.samples {
            cfg.grid.samples = s;
        }
        if let Some(r) = &self.range {
            (cfg.grid.min, cfg.grid.max) = parse_range(r)?;
        }
        if let Some(f) = self.format {
            cfg.output = f.into();
        }
        if let Some(g) = self.pole_guard {
            cfg.pole_guard = g;
        }
        cfg.mask_unitary |= self.mask_unitary;
        Ok(())
    }
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["family", "word", "pretzel", "config"]))]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i64>,
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    l: i64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    m: i64,
    #[arg(long)]
    word: Option<String>,
    /// Channel windings, e.g. "-100,1,5".
    #[arg(long, allow_hyphen_values = true)]
    pretzel: Option<String>,
    #[arg(long, value_enum, default_value = "per-state")]
    normalization: Norm,
    /// A JSON sweep config, or a JSON document emitted by a previous sweep.
    #[arg(long)]
    config: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("shape").required(true).args(["cycle", "series", "json"]))]
struct GraphArgs {
    #[arg(long)]
    cycle: Option<usize>,
    /// Cycle sizes in series, e.g. "3,4,3".
    #[arg(long)]
    series: Option<String>,
    /// `{"n": 3, "edges": [[0,1],[1,2],[0,2]], "leads": [0,1]}`
    #[arg(long)]
    json: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct UniversalArgs {
    /// Scan `R₂ R₁⁻ⁿ R₂ᵐ` with this m (2 gives the twist knots).
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    m: i64,
    /// Scan the torus family `R₂ⁿ` instead.
    #[arg(long)]
    torus: bool,
    #[arg(long, default_value_t = 1)]
    n_min: i64,
    #[arg(long, default_value_t = 30)]
    n_max: i64,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Config(format!("bad {what} entry {t:?} in {s:?}"))))
        .collect()
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{path}: {e}")))
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig> {
    let target = if let Some(path) = &args.config {
        let mut cfg = parse_config(&read_file(path)?)?;
        args.grid.apply(&mut cfg)?;
        return Ok(cfg);
    } else if let Some(w) = &args.word {
        Target::Word { word: w.parse::<BraidWord>().map_err(|e| Error::Config(e.to_string()))? }
    } else if let Some(p) = &args.pretzel {
        let normalization = match args.normalization {
            Norm::PerState => Normalization::PerState,
            Norm::PerGenus => Normalization::PerGenus,
        };
        Target::Family { family: FamilySpec::Pretzel { ns: parse_list(p, "winding")? }, normalization }
    } else {
        let n = args.n.ok_or_else(|| Error::Config("--family needs --n".into()))?;
        let family = match args.family.unwrap() {
            Family::Torus => FamilySpec::Torus { n },
            Family::Twist => FamilySpec::Twist { l: args.l, n, m: args.m },
        };
        Target::Family { family, normalization: Normalization::PerState }
    };
    let mut cfg = SweepConfig::new(target);
    args.grid.apply(&mut cfg)?;
    Ok(cfg)
}

fn graph_config(args: &GraphArgs) -> Result<SweepConfig> {
    let graph = if let Some(n) = args.cycle {
        cycle_graph(n)?.spec()
    } else if let Some(s) = &args.series {
        series_graph(&parse_list(s, "cycle size")?)?.spec()
    } else {
        let path = args.json.as_ref().unwrap();
        serde_json::from_str::<GraphSpec>(&read_file(path)?).map_err(|e| Error::Config(format!("{path}: {e}")))?
    };
    let mut cfg = SweepConfig::new(Target::Graph { graph });
    cfg.grid = Grid { min: 0.0, max: 2.0 * PI, ..cfg.grid };
    args.grid.apply(&mut cfg)?;
    Ok(cfg)
}

fn sweep(cfg: SweepConfig) -> Result<String> {
    let res = run_sweep(&cfg)?;
    emit(&cfg, &res, cfg.output)
}

fn eval(word: &str, theta: &str, format: Format) -> Result<String> {
    let word: BraidWord = word.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
    let theta = parse_angle(theta)?;
    let p = Params::new(theta);
    let amp = amplitude(&word, &p)?;
    Ok(match format {
        Format::Csv => format!(
            "theta,re,im,t2,unitary\n{:.12},{},{},{},{}\n",
            theta,
            format_sig(amp.re),
            format_sig(amp.im),
            format_sig(amp.norm_sqr()),
            p.unitary
        ),
        Format::Json => {
            let v = json!({"word": word.to_string(), "theta": theta, "re": amp.re, "im": amp.im, "t2": amp.norm_sqr(), "unitary": p.unitary});
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
    })
}

fn universal(args: &UniversalArgs) -> Result<String> {
    let family = if args.torus { UniversalFamily::Torus } else { UniversalFamily::DoubleBraid { m: args.m } };
    let mut grid = Grid::default();
    if let Some(s) = args.samples {
        grid.samples = s;
    }
    if let Some(r) = &args.range {
        (grid.min, grid.max) = parse_range(r)?;
    }
    let hits = detect_universal(family, args.n_min..=args.n_max, &grid, 1e-6)?;
    Ok(match args.format {
        Format::Csv => {
            let mut out = String::from("theta,value,spread\n");
            for h in &hits {
                writeln!(out, "{:.12},{},{}", h.theta, format_sig(h.value), format_sig(h.spread)).unwrap();
            }
            out
        }
        Format::Json => {
            let v = json!({
                "metadata": {"tool": "knotscatter", "version": VERSION, "family": family,
                             "n_min": args.n_min, "n_max": args.n_max, "grid": grid},
                "universal": hits,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
    })
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Eval { word, theta, format } => eval(&word, &theta, format),
        Command::Sweep(args) => sweep(sweep_config(&args)?),
        Command::Graph(args) => sweep(graph_config(&args)?),
        Command::Universal(args) => universal(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
