//! Run configuration: a TOML file merged with command-line overrides.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;
use zitterkit_core::wavepacket::{BranchMix, GridGeometry};
use zitterkit_core::{Axis, Momentum, RepKind, RepSpec, SpinRep};

use crate::Failure;

pub const DEFAULT_SEED: u64 = 0x5eed_2b1d;
pub const SEED_ENV: &str = "ZITTERKIT_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Flags shared by every subcommand. Anything given here wins over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML run configuration
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// dirac | fv | gfv | photon | fw
    #[arg(long)]
    pub rep: Option<String>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Spin as a number or fraction, e.g. 1/2
    #[arg(long)]
    pub spin: Option<String>,
    /// Free GFV parameter N (nonzero)
    #[arg(long = "gfv-n", allow_hyphen_values = true)]
    pub gfv_n: Option<f64>,
    /// Momentum or packet center "px,py,pz"
    #[arg(long, value_name = "PX,PY,PZ", allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Branch amplitudes "positive,negative"
    #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
    pub mix: Option<String>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Momentum samples per packet
    #[arg(long)]
    pub samples: Option<usize>,
    /// Cartesian axis 1, 2 or 3
    #[arg(long)]
    pub axis: Option<usize>,
    /// Operator entry "row,col" for evolve-operator
    #[arg(long, value_name = "ROW,COL")]
    pub entry: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Random momenta drawn by check-algebra
    #[arg(long)]
    pub random_momenta: Option<usize>,
    /// Fault injection for the algebra suite
    #[arg(long, hide = true)]
    pub corrupt_spin: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SpinField {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    rep: Option<String>,
    mass: Option<f64>,
    spin: Option<SpinField>,
    gfv_n: Option<f64>,
    p: Option<[f64; 3]>,
    sigma: Option<f64>,
    mix: Option<[f64; 2]>,
    samples: Option<usize>,
    geometry: Option<String>,
    axis: Option<usize>,
    tmax: Option<f64>,
    steps: Option<usize>,
    entry: Option<[usize; 2]>,
    format: Option<Format>,
    out: Option<PathBuf>,
    tolerance: Option<f64>,
    random_momenta: Option<usize>,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub rep: RepSpec,
    pub center: Momentum,
    pub sigma: f64,
    pub samples: usize,
    pub geometry: GridGeometry,
    pub axis: Axis,
    pub mix: (f64, f64),
    /// `None` means four trembling periods at the center momentum.
    pub tmax: Option<f64>,
    pub steps: usize,
    pub entry: Option<(usize, usize)>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerance: f64,
    pub random_momenta: usize,
    pub seed: u64,
    pub corrupt_spin: bool,
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

pub fn parse_spin(text: &str) -> Result<SpinRep, Failure> {
    let t = text.trim();
    let value = match t.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| config_err(format!("bad spin '{text}'")))?;
            let b: f64 = b.trim().parse().map_err(|_| config_err(format!("bad spin '{text}'")))?;
            a / b
        }
        None => t.parse().map_err(|_| config_err(format!("bad spin '{text}'")))?,
    };
    SpinRep::new(value).map_err(|e| config_err(e.to_string()))
}

fn parse_list<const N: usize>(text: &str, what: &str) -> Result<[f64; N], Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(config_err(format!("{what} needs {N} comma-separated numbers, got '{text}'")));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| config_err(format!("{what}: '{part}' is not a number")))?;
    }
    Ok(out)
}

fn parse_entry(text: &str) -> Result<(usize, usize), Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || config_err(format!("entry needs 'row,col' indices, got '{text}'"));
    if parts.len() != 2 {
        return Err(bad());
    }
    Ok((parts[0].parse().map_err(|_| bad())?, parts[1].parse().map_err(|_| bad())?))
}

fn read_file(path: &Path) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| config_err(format!("config {}: {e}", path.display())))
}

fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| config_err(format!("{SEED_ENV} must be an unsigned integer, got '{s}'"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn positive(name: &str, x: f64) -> Result<f64, Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(config_err(format!("{name} must be positive and finite, got {x}")))
    }
}

impl RunConfig {
    pub fn resolve(flags: &Overrides) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };

        let kind: RepKind = match flags.rep.as_deref().or(file.rep.as_deref()) {
            Some(name) => name.parse().map_err(|e: zitterkit_core::Error| config_err(e.to_string()))?,
            None => RepKind::Dirac,
        };
        let default_mass = match kind {
            RepKind::DiracLikePhoton => 0.0,
            _ => 1.0,
        };
        let mass = flags.mass.or(file.mass).unwrap_or(default_mass);
        let spin = match (&flags.spin, &file.spin) {
            (Some(s), _) => parse_spin(s)?,
            (None, Some(SpinField::Text(s))) => parse_spin(s)?,
            (None, Some(SpinField::Number(x))) => SpinRep::new(*x).map_err(|e| config_err(e.to_string()))?,
            (None, None) => kind.default_spin(),
        };
        let gfv_n = flags.gfv_n.or(file.gfv_n);
        let rep = RepSpec::new(kind, mass, spin, gfv_n).map_err(|e| config_err(e.to_string()))?;

        let p = match &flags.p {
            Some(text) => parse_list::<3>(text, "p")?,
            None => file.p.unwrap_or([0.0, 0.0, 1.0]),
        };
        let center = Momentum::new(p[0], p[1], p[2]).map_err(|e| config_err(e.to_string()))?;

        let sigma = positive("sigma", flags.sigma.or(file.sigma).unwrap_or(0.1))?;
        let samples = flags.samples.or(file.samples).unwrap_or(33);
        if samples == 0 {
            return Err(config_err("samples must be at least 1"));
        }
        let geometry = match file.geometry.as_deref() {
            None | Some("line") => GridGeometry::Line,
            Some("cube") => GridGeometry::Cube,
            Some(other) => return Err(config_err(format!("geometry must be 'line' or 'cube', got '{other}'"))),
        };
        let axis = Axis::from_index(flags.axis.or(file.axis).unwrap_or(1)).map_err(|e| config_err(e.to_string()))?;

        let mix = match &flags.mix {
            Some(text) => parse_list::<2>(text, "mix")?,
            None => file.mix.unwrap_or([std::f64::consts::FRAC_1_SQRT_2; 2]),
        };
        BranchMix::real(mix[0], mix[1]).map_err(|e| config_err(e.to_string()))?;

        let tmax = match flags.tmax.or(file.tmax) {
            Some(t) => Some(positive("tmax", t)?),
            None => None,
        };
        let steps = flags.steps.or(file.steps).unwrap_or(512);
        if steps < 2 {
            return Err(config_err("steps must be at least 2"));
        }
        let entry = match &flags.entry {
            Some(text) => Some(parse_entry(text)?),
            None => file.entry.map(|[r, c]| (r, c)),
        };
        if let Some((r, c)) = entry {
            if r >= rep.dim() || c >= rep.dim() {
                return Err(config_err(format!(
                    "entry ({r},{c}) is outside the {0}x{0} operator",
                    rep.dim()
                )));
            }
        }
        let tolerance = positive("tolerance", flags.tolerance.or(file.tolerance).unwrap_or(1e-12))?;
        let random_momenta = flags.random_momenta.or(file.random_momenta).unwrap_or(100);
        if random_momenta == 0 {
            return Err(config_err("random_momenta must be at least 1"));
        }

        Ok(RunConfig {
            rep,
            center,
            sigma,
            samples,
            geometry,
            axis,
            mix: (mix[0], mix[1]),
            tmax,
            steps,
            entry,
            format: flags.format.or(file.format).unwrap_or(Format::Csv),
            out: flags.out.clone().or(file.out),
            tolerance,
            random_momenta,
            seed: seed_from_env()?,
            corrupt_spin: flags.corrupt_spin,
        })
    }

    pub fn branch_mix(&self) -> BranchMix {
        BranchMix::real(self.mix.0, self.mix.1).expect("validated at parse time")
    }

    /// Operator entry to trace; defaults to the corner coupling the two blocks.
    pub fn entry_or_default(&self) -> (usize, usize) {
        self.entry.unwrap_or((0, self.rep.dim() - 1))
    }
}
