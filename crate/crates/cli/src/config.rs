//! Flag and config-file parsing into a resolved [`RunConfig`].

use crate::CliError;
use clap::{error::ErrorKind, Args, CommandFactory, Parser, Subcommand, ValueEnum};
use owc_core::simulator::{Metric, NoiseMode, SimPlan};
use owc_core::{CEstimator, EbMode, WaveformConfig, WaveformKind};
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "owc",
    version,
    about = "X-OFDM and baseline optical OFDM experiments"
)]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Recompute the two N=8 worked examples and compare every table.
    Golden(Flags),
    /// PAPR CCDF per waveform.
    Papr(Flags),
    /// BER against power per bit.
    Ber(Flags),
    /// Power per bit needed for the target BER.
    Required(Flags),
    /// Required power per bit across waveforms and constellations.
    Sweep(Flags),
}

#[derive(Args, Debug, Clone, Default)]
struct Flags {
    /// Comma list of dco, aco, u, x1, x2.
    #[arg(long)]
    waveform: Option<String>,
    /// Comma list of DCO bias levels in dB (the bias grid for sweep).
    #[arg(long = "mu-db")]
    mu_db: Option<String>,
    /// X-OFDM candidate block order.
    #[arg(long)]
    candidate: Option<usize>,
    #[arg(long = "c-estimator", value_enum)]
    c_estimator: Option<CEstimatorArg>,
    /// Slice odd subcarriers before the type-2 reconstruction.
    #[arg(long, value_enum)]
    slice: Option<OnOff>,
    /// Subcarriers per frame.
    #[arg(long)]
    n: Option<usize>,
    /// Comma list of QAM orders.
    #[arg(long)]
    m: Option<String>,
    #[arg(long, value_enum)]
    noise: Option<NoiseArg>,
    /// Frames per simulation point.
    #[arg(long)]
    symbols: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// 2000 frames of 2048 subcarriers.
    #[arg(long = "paper-scale")]
    paper_scale: bool,
    /// Keep every DCO bias row in sweep output.
    #[arg(long)]
    verbose: bool,
    #[arg(long = "target-ber")]
    target_ber: Option<f64>,
    /// Electrical or optical power per bit.
    #[arg(long, value_enum)]
    metric: Option<PowerArg>,
    /// Comma list of power-per-bit ratios in dB for ber.
    #[arg(long = "eb-db")]
    eb_db: Option<String>,
    /// File of key=value lines using the long flag names.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, hide = true)]
    tolerance: Option<f64>,
    #[arg(long, hide = true)]
    perturb: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum CEstimatorArg {
    A,
    B,
    Avg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OnOff {
    On,
    Off,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseArg {
    Dep,
    Indep,
    Mixed40,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PowerArg {
    Elec,
    Opt,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Golden,
    Papr,
    Ber,
    Required,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Desk,
    Paper,
}

impl Scale {
    pub fn symbols(&self) -> usize {
        match self {
            Scale::Desk => 200,
            Scale::Paper => 2000,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Scale::Desk => 1024,
            Scale::Paper => 2048,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveformName {
    Dco,
    Aco,
    U,
    X1,
    X2,
}

impl WaveformName {
    fn parse(s: &str) -> Result<WaveformName, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dco" => Ok(WaveformName::Dco),
            "aco" => Ok(WaveformName::Aco),
            "u" => Ok(WaveformName::U),
            "x1" => Ok(WaveformName::X1),
            "x2" => Ok(WaveformName::X2),
            other => Err(CliError::Config(format!("unknown waveform '{other}'"))),
        }
    }
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub waveforms: Vec<WaveformName>,
    pub mu_db: Vec<f64>,
    pub candidate: usize,
    pub c_estimator: CEstimator,
    pub slice: bool,
    pub n: usize,
    pub orders: Vec<usize>,
    pub noise: NoiseArg,
    pub symbols: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub scale: Scale,
    pub verbose: bool,
    pub target_ber: f64,
    pub power: EbMode,
    pub eb_db: Vec<f64>,
    pub tolerance: f64,
    pub perturb: Option<String>,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    let items: Vec<T> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Config(format!("invalid {what} '{t}'")))
        })
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(CliError::Config(format!("empty {what} list")));
    }
    Ok(items)
}

/// Reads `key=value` lines and turns them into flags. Blank lines and lines
/// starting with `#` are skipped.
fn config_file_args(path: &PathBuf, subcommand: &str) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let cmd = Cli::command();
    let sub = cmd
        .find_subcommand(subcommand)
        .ok_or_else(|| CliError::Config(format!("unknown command '{subcommand}'")))?;
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{}:{}: expected key=value",
                path.display(),
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key) && key != "config")
            .ok_or_else(|| {
                CliError::Config(format!(
                    "{}:{}: unknown key '{key}'",
                    path.display(),
                    lineno + 1
                ))
            })?;
        if arg.get_action().takes_values() {
            out.push(OsString::from(format!("--{key}")));
            out.push(OsString::from(value));
        } else {
            match value {
                "true" | "on" | "1" | "yes" => out.push(OsString::from(format!("--{key}"))),
                "false" | "off" | "0" | "no" => {}
                _ => {
                    return Err(CliError::Config(format!(
                        "{}:{}: '{key}' expects true or false",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
    }
    Ok(out)
}

fn find_config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Parses a full argument vector. `Ok(None)` means help or version was
/// printed.
pub fn parse_args<I, S>(args: I) -> Result<Option<RunConfig>, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let mut args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if let Some(path) = find_config_path(&args) {
        // File values go right after the subcommand so later flags win.
        if let Some(pos) = args
            .iter()
            .skip(1)
            .position(|a| !a.to_string_lossy().starts_with('-'))
        {
            let pos = pos + 1;
            let sub = args[pos].to_string_lossy().into_owned();
            let extra = config_file_args(&path, &sub)?;
            args.splice(pos + 1..pos + 1, extra);
        }
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(None);
        }
        Err(e) => return Err(CliError::Config(e.to_string().trim_end().to_string())),
    };
    let (command, flags) = match cli.command {
        CliCommand::Golden(f) => (Command::Golden, f),
        CliCommand::Papr(f) => (Command::Papr, f),
        CliCommand::Ber(f) => (Command::Ber, f),
        CliCommand::Required(f) => (Command::Required, f),
        CliCommand::Sweep(f) => (Command::Sweep, f),
    };
    resolve(command, flags).map(Some)
}

fn resolve(command: Command, f: Flags) -> Result<RunConfig, CliError> {
    let scale = if f.paper_scale {
        Scale::Paper
    } else {
        Scale::Desk
    };
    let (waveforms, mu_db, orders) = match command {
        Command::Papr => ("dco,x1,x2,aco,u", "1,3", "16"),
        Command::Ber => ("x2", "7", "16"),
        Command::Required => ("x1,x2", "7", "4096"),
        Command::Sweep | Command::Golden => (
            "dco,aco,u,x1,x2",
            "1,2,3,4,5,6,7,8,9,10,11,12,13",
            "4,16,64,256,1024,4096",
        ),
    };
    let waveforms = f
        .waveform
        .as_deref()
        .unwrap_or(waveforms)
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(WaveformName::parse)
        .collect::<Result<Vec<_>, _>>()?;
    if waveforms.is_empty() {
        return Err(CliError::Config("empty waveform list".into()));
    }
    let mu_db: Vec<f64> = parse_list(f.mu_db.as_deref().unwrap_or(mu_db), "bias level")?;
    if mu_db.iter().any(|&d| !(d.is_finite() && d >= 0.0)) {
        return Err(CliError::Config(
            "bias levels must be finite and >= 0 dB".into(),
        ));
    }
    let orders = parse_list(f.m.as_deref().unwrap_or(orders), "constellation order")?;
    let eb_db = parse_list(
        f.eb_db
            .as_deref()
            .unwrap_or("0,2,4,6,8,10,12,14,16,18,20,22,24,26,28,30,32,34,36,38,40,42,44,46,48,50"),
        "power-per-bit ratio",
    )?;
    let target_ber = f.target_ber.unwrap_or(1e-3);
    if !(target_ber > 0.0 && target_ber < 0.5) {
        return Err(CliError::Config(format!(
            "target BER must lie in (0, 0.5), got {target_ber}"
        )));
    }
    let symbols = f.symbols.unwrap_or(scale.symbols());
    if symbols == 0 {
        return Err(CliError::Config("symbols must be >= 1".into()));
    }
    let tolerance = f.tolerance.unwrap_or(crate::golden::DEFAULT_TOLERANCE);
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(CliError::Config("tolerance must be >= 0".into()));
    }
    let config = RunConfig {
        command,
        waveforms,
        mu_db,
        candidate: f.candidate.unwrap_or(0),
        c_estimator: match f.c_estimator.unwrap_or(CEstimatorArg::Avg) {
            CEstimatorArg::A => CEstimator::FromA,
            CEstimatorArg::B => CEstimator::FromB,
            CEstimatorArg::Avg => CEstimator::Average,
        },
        slice: f.slice.unwrap_or(OnOff::On) == OnOff::On,
        n: f.n.unwrap_or(scale.n()),
        orders,
        noise: f.noise.unwrap_or(NoiseArg::Indep),
        symbols,
        seed: f.seed.unwrap_or(1),
        out: f.out,
        format: f.format.unwrap_or_default(),
        scale,
        verbose: f.verbose,
        target_ber,
        power: match f.metric.unwrap_or(PowerArg::Elec) {
            PowerArg::Elec => EbMode::Elec,
            PowerArg::Opt => EbMode::Opt,
        },
        eb_db,
        tolerance,
        perturb: f.perturb,
    };
    if command != Command::Golden {
        config.plans()?;
    }
    Ok(config)
}

/// One simulated configuration with the labels used in output rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledPlan {
    pub name: &'static str,
    pub bias_db: Option<f64>,
    pub plan: SimPlan,
}

impl RunConfig {
    fn kind(&self, name: WaveformName, bias_db: f64) -> WaveformKind {
        match name {
            WaveformName::Dco => WaveformKind::dco_level_db(bias_db),
            WaveformName::Aco => WaveformKind::Aco,
            WaveformName::U => WaveformKind::U,
            WaveformName::X1 => WaveformKind::x1(self.candidate),
            WaveformName::X2 => WaveformKind::X2 {
                candidate: self.candidate,
                c_estimator: self.c_estimator,
                slice_before_reconstruct: self.slice,
            },
        }
    }

    pub fn noise_mode(&self) -> NoiseMode {
        match self.noise {
            NoiseArg::Dep => NoiseMode::DependentOnly { xi2: 0.0 },
            NoiseArg::Indep => NoiseMode::IndependentOnly { sigma2: 0.0 },
            NoiseArg::Mixed40 => NoiseMode::Mixed {
                xi2: 0.0,
                snr_db: 40.0,
            },
        }
    }

    pub fn noise_label(&self) -> &'static str {
        match self.noise {
            NoiseArg::Dep => "dep",
            NoiseArg::Indep => "indep",
            NoiseArg::Mixed40 => "mixed40",
        }
    }

    pub fn metric(&self) -> Metric {
        match (self.power, self.noise) {
            (EbMode::Elec, NoiseArg::Indep) => Metric::ElecSigma,
            (EbMode::Opt, NoiseArg::Indep) => Metric::OptSigma,
            (EbMode::Elec, _) => Metric::ElecXi,
            (EbMode::Opt, _) => Metric::OptXi,
        }
    }

    /// Plans for every waveform, order and (outside sweep) DCO bias level.
    /// Sweep gets one DCO plan per order; its bias grid is `mu_db`.
    pub fn plans(&self) -> Result<Vec<LabeledPlan>, CliError> {
        let mut plans = Vec::new();
        for &name in &self.waveforms {
            let biases: Vec<Option<f64>> = match name {
                WaveformName::Dco if self.command == Command::Sweep => vec![Some(self.mu_db[0])],
                WaveformName::Dco => self.mu_db.iter().map(|&d| Some(d)).collect(),
                _ => vec![None],
            };
            for &order in &self.orders {
                for &bias in &biases {
                    let kind = self.kind(name, bias.unwrap_or(0.0));
                    let waveform = WaveformConfig::new(kind, self.n, order)?;
                    let plan = SimPlan::new(waveform, self.noise_mode(), self.symbols, self.seed)?;
                    plans.push(LabeledPlan {
                        name: kind.name(),
                        bias_db: bias,
                        plan,
                    });
                }
            }
        }
        Ok(plans)
    }
}
