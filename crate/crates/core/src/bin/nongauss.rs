use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nongauss::input::{parse_coeffs, parse_probs};
use nongauss::measures::{measure_all, Measure, MeasureTriple};
use nongauss::specfun::SeriesControl;
use nongauss::states::StateSpec;
use nongauss::sweep::{
    self, fmt_value, OutputFormat, Pair, RealGrid, SweepConfig, SweepParam, DEFAULT_X_MAX,
};
use nongauss::verify::{self, GridSize, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "nongauss",
    version,
    about = "Non-Gaussianity degrees of one-mode field states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the three degrees for a single state.
    Measure(MeasureArgs),
    /// Sweep photon-added thermal states over x, nbar or M.
    Sweep(SweepArgs),
    /// Emit parametric curves of one degree against another.
    Mutual {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Comma-separated pairs out of hs:re, f:hs, f:re.
        #[arg(long, value_delimiter = ',', default_value = "hs:re,f:hs,f:re")]
        pairs: Vec<String>,
    },
    /// Run the invariant suite against closed forms and the oracle path.
    Verify {
        #[arg(long, value_enum, default_value_t = GridArg::Full)]
        grid: GridArg,
        #[arg(long, default_value_t = SeriesControl::DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Thermal,
    Fock,
    Pats,
    Custom,
    Pure,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridArg {
    Small,
    Full,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long, value_enum)]
    state: StateArg,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    nbar: Option<f64>,
    /// Photon-number probabilities, one per line.
    #[arg(long)]
    probs: Option<PathBuf>,
    /// Fock amplitudes, one `re im` pair per line.
    #[arg(long)]
    coeffs: Option<PathBuf>,
    #[arg(long, default_value_t = SeriesControl::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = SeriesControl::DEFAULT_MAX_TERMS)]
    max_terms: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// pats, or thermal (which fixes M = 0).
    #[arg(long, value_enum, default_value_t = StateArg::Pats)]
    state: StateArg,
    #[arg(long, default_value = "x")]
    param: String,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    /// Defaults to 0.95 for x sweeps of `sweep`, x_max for `mutual`, 1 for nbar sweeps.
    #[arg(long)]
    to: Option<f64>,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Added photons; the grid itself when --param m (default 0..15).
    #[arg(long, value_delimiter = ',')]
    m_list: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,2,5")]
    nbar_list: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "hs,re,fid")]
    measures: Vec<String>,
    #[arg(long, default_value_t = SeriesControl::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = SeriesControl::DEFAULT_MAX_TERMS)]
    max_terms: usize,
    #[arg(long, default_value_t = DEFAULT_X_MAX)]
    x_max: f64,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of a subcommand, mapped to an exit code.
enum Failure {
    Usage(String),
    Verify,
}

impl From<nongauss::Error> for Failure {
    fn from(e: nongauss::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("I/O error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measure(args) => cmd_measure(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Mutual { sweep, pairs } => cmd_mutual(sweep, pairs),
        Command::Verify { grid, tol } => cmd_verify(grid, tol),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn require<T>(v: Option<T>, flag: &str, state: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--state {state} requires {flag}")))
}

fn build_spec(args: &MeasureArgs) -> Result<StateSpec, Failure> {
    let spec = match args.state {
        StateArg::Thermal => StateSpec::Thermal {
            nbar: require(args.nbar, "--nbar", "thermal")?,
        },
        StateArg::Fock => StateSpec::Fock {
            m: require(args.m, "--m", "fock")?,
        },
        StateArg::Pats => StateSpec::Pats {
            m: require(args.m, "--m", "pats")?,
            nbar: require(args.nbar, "--nbar", "pats")?,
        },
        StateArg::Custom => {
            let path = require(args.probs.as_deref(), "--probs", "custom")?;
            StateSpec::custom(parse_probs(&read_file(path)?)?)?
        }
        StateArg::Pure => {
            let path = require(args.coeffs.as_deref(), "--coeffs", "pure")?;
            StateSpec::pure(parse_coeffs(&read_file(path)?)?)?
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn cmd_measure(args: MeasureArgs) -> Result<(), Failure> {
    let ctl = SeriesControl::new(args.tol, args.max_terms)?;
    let spec = build_spec(&args)?;
    let triple = measure_all(&spec, ctl)?;
    let mut w = output(args.out.as_deref())?;
    match args.format {
        FormatArg::Text => write_text(&mut w, &spec, &triple)?,
        FormatArg::Csv => {
            writeln!(w, "state,delta_hs,delta_re,delta_f,err_hs,err_re,err_f")?;
            let cell = |m: Measure, err: bool| {
                triple
                    .get(m)
                    .map(|e| fmt_value(if err { e.err } else { e.value }))
                    .unwrap_or_default()
            };
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                spec.describe(),
                cell(Measure::Hs, false),
                cell(Measure::Re, false),
                cell(Measure::Fid, false),
                cell(Measure::Hs, true),
                cell(Measure::Re, true),
                cell(Measure::Fid, true),
            )?;
        }
        FormatArg::Json => {
            let doc = serde_json::json!({ "state": spec.describe(), "measures": triple });
            serde_json::to_writer_pretty(&mut w, &doc).map_err(io::Error::other)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_text(w: &mut dyn Write, spec: &StateSpec, t: &MeasureTriple) -> io::Result<()> {
    writeln!(w, "state: {}", spec.describe())?;
    for m in Measure::ALL {
        match t.get(m) {
            Some(e) => writeln!(
                w,
                "{:<3} = {:.12}  (err <= {:.1e})",
                m.name(),
                e.value,
                e.err
            )?,
            None => writeln!(w, "{:<3} = unsupported for this state", m.name())?,
        }
    }
    Ok(())
}

fn sweep_config(args: &SweepArgs, default_to: f64) -> Result<(SweepConfig, OutputFormat), Failure> {
    let param: SweepParam = args.param.parse()?;
    let format: OutputFormat = args.format.parse()?;
    let measures = args
        .measures
        .iter()
        .map(|s| s.parse::<Measure>())
        .collect::<nongauss::Result<Vec<_>>>()?;
    let m_list = match args.state {
        StateArg::Pats => args.m_list.clone().unwrap_or_else(|| match param {
            SweepParam::M => (0..=15).collect(),
            _ => vec![1, 3, 5, 10],
        }),
        StateArg::Thermal => {
            if param == SweepParam::M {
                return Err(Failure::Usage("a thermal sweep cannot vary M".into()));
            }
            vec![0]
        }
        _ => {
            return Err(Failure::Usage(
                "sweeps support --state pats or thermal".into(),
            ))
        }
    };
    let to = args.to.unwrap_or(match param {
        SweepParam::Nbar => 1.0,
        _ => default_to,
    });
    let cfg = SweepConfig {
        param,
        grid: RealGrid {
            from: args.from,
            to,
            steps: args.steps,
        },
        m_list,
        nbar_list: args.nbar_list.clone(),
        measures,
        ctl: SeriesControl::new(args.tol, args.max_terms)?,
        x_max: args.x_max,
    };
    cfg.validate()?;
    Ok((cfg, format))
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let (cfg, format) = sweep_config(&args, 0.95)?;
    let rows = sweep::run_sweep(&cfg)?;
    let mut w = output(args.out.as_deref())?;
    match format {
        OutputFormat::Csv => sweep::write_csv(&mut w, &rows)?,
        OutputFormat::Json => sweep::write_json(&mut w, &rows)?,
    }
    w.flush()?;
    Ok(())
}

fn cmd_mutual(args: SweepArgs, pairs: Vec<String>) -> Result<(), Failure> {
    let pairs = pairs
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Pair>())
        .collect::<nongauss::Result<Vec<_>>>()?;
    if pairs.is_empty() {
        return Err(Failure::Usage("--pairs is empty".into()));
    }
    let (cfg, format) = sweep_config(&args, args.x_max)?;
    let rows = sweep::run_mutual(&cfg, &pairs)?;
    let mut w = output(args.out.as_deref())?;
    match format {
        OutputFormat::Csv => sweep::write_mutual_csv(&mut w, &rows)?,
        OutputFormat::Json => sweep::write_json(&mut w, &rows)?,
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(grid: GridArg, tol: f64) -> Result<(), Failure> {
    let opts = VerifyOptions {
        ctl: SeriesControl::default().with_tol(tol)?,
        grid: match grid {
            GridArg::Small => GridSize::Small,
            GridArg::Full => GridSize::Full,
        },
    };
    let start = Instant::now();
    let outcomes = verify::run_all(&opts);
    let mut failed = 0;
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} {:<26} {:>8.3}s  {}",
            o.name,
            o.elapsed.as_secs_f64(),
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    println!(
        "{} of {} checks passed in {:.2}s",
        outcomes.len() - failed,
        outcomes.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        Err(Failure::Verify)
    } else {
        Ok(())
    }
}
