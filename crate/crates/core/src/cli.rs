//! Command-line frontend behind the `duopoly` binary.
//!
//! Every option can come from a flag or from a TOML file given with
//! `--config`; flags win. The file has a `[params]` table for the
//! uncertainty set, an optional top-level `out_dir`, and one table per
//! command named like the command with `_` for `-`:
//!
//! ```toml
//! out_dir = "out"
//!
//! [params]
//! b_hi = 0.3
//! b_lo = 0.1
//! g_hi = 0.25
//! g_lo = 0.0
//!
//! [basins]
//! n = 400
//! ```
//!
//! Unknown keys are rejected. Output files go to `--out-dir`, then
//! `out_dir` from the file, then `$DUOPOLY_OUT_DIR`, then the current
//! directory. Missing initial conditions are drawn uniformly from
//! `[0, x_m)` with `ChaCha8Rng::seed_from_u64(seed)`, `seed` defaulting to 0.
//!
//! On failure one line `error code=<Code> exit=<n> msg=<text>` goes to
//! stderr and the process exits with the code listed by
//! [`Error::exit_code`].

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basins::{check_symmetry, compute_basins, GridSpec};
use crate::dynamics1d::{
    chaotic_intervals, classify_regime, find_two_cycles, fixed_points, iterate_f, lyapunov, FixedPointKind,
    TwoCycle,
};
use crate::dynamics2d::{iterate_t, lift_map_cycles, map_cycles};
use crate::error::{Error, Result};
use crate::model::{BestReplyMap, UncertaintySet};
use crate::output::{
    basin_image, basin_table, bifurcation_table, cycles_table, orbit1d_table, orbit2d_table, profit_table,
    regime_curves_table, regime_image, regime_table,
};
use crate::profit::profit_series;
use crate::sweep::{bifurcation_1d, regime_map, verify_regime_map, BifurcationSpec, SweepParam};

pub const OUT_DIR_ENV: &str = "DUOPOLY_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "duopoly", version, about = "Worst-case best-reply Cournot dynamics")]
pub struct Cli {
    /// TOML file with default option values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kinks, fixed points, regime, two-cycles and chaotic bands of f.
    Analyze {
        #[command(flatten)]
        params: Params,
    },
    /// Orbit of f (dim 1) or of T (dim 2) as CSV.
    Simulate {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        opts: SimulateOpts,
    },
    /// Cycles of T lifted from the fixed point and two-cycles of f.
    Cycles {
        #[command(flatten)]
        params: Params,
    },
    /// Bifurcation diagram over one parameter.
    #[command(name = "bifurcate-1d")]
    Bifurcate1d {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        opts: BifurcateOpts,
    },
    /// Regime map over the (g_hi, b_hi) plane at fixed b_lo, g_lo.
    RegimeMap {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        opts: RegimeMapOpts,
    },
    /// Basins of attraction of T.
    Basins {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        opts: BasinOpts,
    },
    /// Profit-uncertainty series along the diagonal.
    Profits {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        opts: ProfitOpts,
    },
}

/// Copies every field that is unset in `self` from `file`.
macro_rules! options {
    ($(#[$meta:meta])* $name:ident { $($(#[$fmeta:meta])* $field:ident : $ty:ty),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $($(#[$fmeta])* #[arg(long)] pub $field: Option<$ty>,)*
        }

        impl $name {
            pub fn overlay(&mut self, file: &Self) {
                $(if self.$field.is_none() {
                    self.$field = file.$field.clone();
                })*
            }
        }
    };
}

options!(Params {
    b_hi: f64,
    b_lo: f64,
    g_hi: f64,
    g_lo: f64,
    /// Choke price (default 1).
    a: f64,
});

options!(SimulateOpts {
    /// 1 for f, 2 for T (default 1).
    dim: u8,
    x0: f64,
    y0: f64,
    /// Number of recorded steps (default 1000).
    n: usize,
    /// Transient steps discarded first (default 0).
    burn: usize,
    /// Seed for missing initial conditions (default 0).
    seed: u64,
});

options!(BifurcateOpts {
    /// One of b_hi, b_lo, g_hi, g_lo (default b_lo).
    param: String,
    lo: f64,
    hi: f64,
    /// Number of sweep values (default 401).
    steps: usize,
    x0: f64,
    burn: usize,
    samples: usize,
    /// Restart every column from x0 instead of continuing the previous orbit.
    #[arg(num_args = 0..=1, default_missing_value = "true")]
    fixed_start: bool,
});

options!(RegimeMapOpts {
    g_min: f64,
    g_max: f64,
    b_min: f64,
    b_max: f64,
    nx: usize,
    ny: usize,
    /// Number of cells to spot-check by simulation (default 0).
    verify: usize,
    seed: u64,
});

options!(BasinOpts {
    /// Cells per axis (default 400); overridden by nx, ny.
    n: usize,
    nx: usize,
    ny: usize,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    burn: usize,
    tail: usize,
    tol: f64,
});

options!(ProfitOpts {
    x0: f64,
    n: usize,
    burn: usize,
    seed: u64,
});

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    out_dir: Option<PathBuf>,
    #[serde(default)]
    params: Params,
    #[serde(default, rename = "analyze")]
    _analyze: Empty,
    #[serde(default)]
    simulate: SimulateOpts,
    #[serde(default, rename = "cycles")]
    _cycles: Empty,
    #[serde(default)]
    bifurcate_1d: BifurcateOpts,
    #[serde(default)]
    regime_map: RegimeMapOpts,
    #[serde(default)]
    basins: BasinOpts,
    #[serde(default)]
    profits: ProfitOpts,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

impl ConfigFile {
    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::InvalidConfig(e.message().to_string()))
    }
}

impl Params {
    fn require(&self, name: &'static str, v: Option<f64>) -> Result<f64> {
        v.ok_or_else(|| Error::InvalidConfig(format!("missing parameter `{name}`")))
    }

    pub fn set(&self) -> Result<UncertaintySet> {
        UncertaintySet::new(
            self.require("b_hi", self.b_hi)?,
            self.require("b_lo", self.b_lo)?,
            self.require("g_hi", self.g_hi)?,
            self.require("g_lo", self.g_lo)?,
            self.a.unwrap_or(1.0),
        )
    }

    pub fn map(&self) -> Result<BestReplyMap> {
        BestReplyMap::new(self.set()?)
    }
}

fn positive(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        Err(Error::InvalidConfig(format!("`{name}` must be positive")))
    } else {
        Ok(v)
    }
}

fn out_dir(flag: Option<PathBuf>, file: Option<PathBuf>) -> PathBuf {
    flag.or(file)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Parses `args` (program name first), runs the command and returns the
/// written files.
pub fn run<I, T>(args: I) -> Result<Vec<PathBuf>>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::InvalidConfig(e.to_string().trim().to_string()))?;
    dispatch(cli)
}

pub fn dispatch(cli: Cli) -> Result<Vec<PathBuf>> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let dir = out_dir(cli.out_dir, file.out_dir.clone());
    std::fs::create_dir_all(&dir)?;
    let path = |name: &str| dir.join(name);
    let with = |mut p: Params| {
        p.overlay(&file.params);
        p
    };

    match cli.command {
        Command::Analyze { params } => {
            let m = with(params).map()?;
            let report = analyze_report(&m)?;
            let text = toml::to_string(&report).map_err(|e| Error::InvalidConfig(e.to_string()))?;
            let out = path("analyze.toml");
            std::fs::write(&out, &text)?;
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(vec![out])
        }
        Command::Simulate { params, mut opts } => {
            opts.overlay(&file.simulate);
            let m = with(params).map()?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.unwrap_or(0));
            let x0 = opts.x0.unwrap_or_else(|| rng.random_range(0.0..m.x_m()));
            let n = positive("n", opts.n.unwrap_or(1_000))?;
            let burn = opts.burn.unwrap_or(0);
            let out = path("simulate.csv");
            match opts.dim.unwrap_or(1) {
                1 => orbit1d_table(&iterate_f(&m, x0, n, burn)?, burn + 1).write_file(&out)?,
                2 => {
                    let y0 = opts.y0.unwrap_or_else(|| rng.random_range(0.0..m.x_m()));
                    orbit2d_table(&iterate_t(&m, (x0, y0), n, burn)?, burn + 1).write_file(&out)?
                }
                d => return Err(Error::InvalidConfig(format!("dim must be 1 or 2, got {d}"))),
            }
            Ok(vec![out])
        }
        Command::Cycles { params } => {
            let m = with(params).map()?;
            let lifted = lift_map_cycles(&m, &map_cycles(&m))?;
            let out = path("cycles.csv");
            cycles_table(&lifted).write_file(&out)?;
            Ok(vec![out])
        }
        Command::Bifurcate1d { params, mut opts } => {
            opts.overlay(&file.bifurcate_1d);
            let base = with(params).set()?;
            let param: SweepParam = opts.param.as_deref().unwrap_or("b_lo").parse()?;
            let mut spec = BifurcationSpec::new(
                param,
                opts.lo.unwrap_or(0.0),
                opts.hi.unwrap_or(0.4),
                positive("steps", opts.steps.unwrap_or(401))?,
            );
            spec.x0 = opts.x0.unwrap_or(spec.x0);
            spec.burn = opts.burn.unwrap_or(spec.burn);
            spec.samples = positive("samples", opts.samples.unwrap_or(spec.samples))?;
            spec.continuation = !opts.fixed_start.unwrap_or(false);
            let data = bifurcation_1d(&base, &spec)?;
            let out = path("bifurcation.csv");
            bifurcation_table(&data).write_file(&out)?;
            Ok(vec![out])
        }
        Command::RegimeMap { params, mut opts } => {
            opts.overlay(&file.regime_map);
            let p = with(params);
            let b_lo = p.require("b_lo", p.b_lo)?;
            let g_lo = p.require("g_lo", p.g_lo)?;
            let grid = regime_map(
                b_lo,
                g_lo,
                (opts.g_min.unwrap_or(0.0), opts.g_max.unwrap_or(1.0)),
                (opts.b_min.unwrap_or(0.0), opts.b_max.unwrap_or(1.0)),
                positive("nx", opts.nx.unwrap_or(400))?,
                positive("ny", opts.ny.unwrap_or(400))?,
            )?;
            let files = [path("regime_map.csv"), path("regime_curves.csv"), path("regime_map.ppm")];
            regime_table(&grid).write_file(&files[0])?;
            regime_curves_table(&grid).write_file(&files[1])?;
            regime_image(&grid).write_file(&files[2])?;
            let mut files = files.to_vec();
            if let Some(n) = opts.verify.filter(|&n| n > 0) {
                let v = verify_regime_map(&grid, n, opts.seed.unwrap_or(0));
                let verify = path("regime_verify.toml");
                let report = VerifySummary { checked: v.checked, agreed: v.agreed };
                std::fs::write(&verify, toml::to_string(&report).map_err(|e| Error::InvalidConfig(e.to_string()))?)?;
                files.push(verify);
            }
            Ok(files)
        }
        Command::Basins { params, mut opts } => {
            opts.overlay(&file.basins);
            let m = with(params).map()?;
            let n = opts.n.unwrap_or(400);
            let mut spec = GridSpec::square(&m, n);
            spec.nx = opts.nx.unwrap_or(n);
            spec.ny = opts.ny.unwrap_or(n);
            spec.x_range = (opts.x_min.unwrap_or(spec.x_range.0), opts.x_max.unwrap_or(spec.x_range.1));
            spec.y_range = (opts.y_min.unwrap_or(spec.y_range.0), opts.y_max.unwrap_or(spec.y_range.1));
            spec.burn = opts.burn.unwrap_or(spec.burn);
            spec.tail = opts.tail.unwrap_or(spec.tail);
            spec.tol = opts.tol.unwrap_or(spec.tol);
            let grid = compute_basins(&m, &spec)?;
            let files = vec![path("basins.csv"), path("basins.ppm"), path("basins_summary.toml")];
            basin_table(&grid).write_file(&files[0])?;
            basin_image(&grid).write_file(&files[1])?;
            let summary = BasinSummary {
                attractors: grid.catalog.len(),
                counts: grid
                    .counts()
                    .into_iter()
                    .map(|(l, c)| (l.id().map_or("unresolved".to_string(), |id| id.to_string()), c))
                    .collect(),
                symmetric_fraction: check_symmetry(&grid).ok().map(|r| r.fraction()),
            };
            std::fs::write(&files[2], toml::to_string(&summary).map_err(|e| Error::InvalidConfig(e.to_string()))?)?;
            Ok(files)
        }
        Command::Profits { params, mut opts } => {
            opts.overlay(&file.profits);
            let set = with(params).set()?;
            let m = BestReplyMap::new(set)?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.unwrap_or(0));
            let x0 = opts.x0.unwrap_or_else(|| rng.random_range(0.0..m.x_m()));
            let s = profit_series(
                &set,
                x0,
                positive("n", opts.n.unwrap_or(crate::profit::DEFAULT_STEPS))?,
                opts.burn.unwrap_or(crate::profit::DEFAULT_BURN),
            )?;
            let out = path("profits.csv");
            profit_table(&s).write_file(&out)?;
            Ok(vec![out])
        }
    }
}

#[derive(Debug, Serialize)]
struct VerifySummary {
    checked: usize,
    agreed: usize,
}

#[derive(Debug, Serialize)]
struct BasinSummary {
    attractors: usize,
    counts: std::collections::BTreeMap<String, usize>,
    symmetric_fraction: Option<f64>,
}

/// Contents of the `analyze` report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub regime: String,
    pub k: Option<u32>,
    pub lyapunov: Option<f64>,
    pub parameters: ParamReport,
    pub map: MapReport,
    pub fixed_point: FixedPointSummary,
    pub two_cycles: Vec<TwoCycleSummary>,
    pub chaotic_intervals: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamReport {
    pub b_hi: f64,
    pub b_lo: f64,
    pub g_hi: f64,
    pub g_lo: f64,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapReport {
    pub r: f64,
    pub x_l: f64,
    pub x_u: f64,
    pub x_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointSummary {
    pub kind: String,
    pub points: Vec<f64>,
    pub eigenvalue: f64,
    pub stability: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoCycleSummary {
    pub kind: String,
    pub points: Vec<f64>,
    pub eigenvalue: f64,
}

pub fn analyze_report(m: &BestReplyMap) -> Result<AnalyzeReport> {
    let u = m.owner();
    let regime = classify_regime(m);
    let fp = fixed_points(m);
    let (kind, points) = match fp.kind {
        FixedPointKind::UniqueLeft(x) => ("left", vec![x]),
        FixedPointKind::UniqueRight(x) => ("right", vec![x]),
        FixedPointKind::Segment(lo, hi) => ("segment", vec![lo, hi]),
    };
    let two_cycles = find_two_cycles(m)
        .into_iter()
        .map(|c| match c {
            TwoCycle::Isolated(c) => TwoCycleSummary { kind: "isolated".into(), points: c.points, eigenvalue: c.eigenvalue },
            TwoCycle::Continuum { lo, hi, eigenvalue } => {
                TwoCycleSummary { kind: "continuum".into(), points: vec![lo, hi], eigenvalue }
            }
        })
        .collect();
    let chaotic = if regime.is_chaotic() {
        chaotic_intervals(m)?.intervals.iter().map(|&(lo, hi)| [lo, hi]).collect()
    } else {
        Vec::new()
    };
    let lyap = lyapunov(m, 0.5 * (m.x_u() + m.x_m()), 100_000).ok().filter(|v| v.is_finite());
    Ok(AnalyzeReport {
        regime: regime.tag().into(),
        k: regime.pieces_exponent(),
        lyapunov: lyap,
        parameters: ParamReport { b_hi: u.b_hi(), b_lo: u.b_lo(), g_hi: u.g_hi(), g_lo: u.g_lo(), a: u.a() },
        map: MapReport { r: m.r(), x_l: m.x_l(), x_u: m.x_u(), x_m: m.x_m() },
        fixed_point: FixedPointSummary {
            kind: kind.into(),
            points,
            eigenvalue: fp.eigenvalue,
            stability: fp.stability.as_str().into(),
        },
        two_cycles,
        chaotic_intervals: chaotic,
    })
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    match Cli::try_parse() {
        Err(e) => e.exit(),
        Ok(cli) => match dispatch(cli) {
            Ok(_) => ExitCode::SUCCESS,
            Err(e) => {
                let msg = e.to_string().replace('\n', " ");
                eprintln!("error code={} exit={} msg={msg}", e.code(), e.exit_code());
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
