//! θ- and kℓ-sweeps with zero, maximum and universal-point detection, and
//! deterministic CSV/JSON emission.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::braid::{self, in_unitary_domain, BraidWord, Params};
use crate::error::{Error, Result};
use crate::families::{family_transmission, twist_word, torus_word, FamilySpec, Normalization};
use crate::graph::{transmission_graph, GraphSpec, MetricGraph};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Refined zeros must reach this `|t|²`.
pub const ZERO_TOL: f64 = 1e-10;
/// Refined universal points must have this spread across the family.
pub const SPREAD_TOL: f64 = 1e-6;
const REFINE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Target {
    Word {
        word: BraidWord,
    },
    Family {
        family: FamilySpec,
        #[serde(default)]
        normalization: Normalization,
    },
    /// Sweeps `kℓ` between the first two leads.
    Graph {
        graph: GraphSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { min: 0.0, max: PI, samples: 2000 }
    }
}

impl Grid {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let step = (self.max - self.min) / (self.samples - 1) as f64;
        (0..self.samples).map(move |i| if i + 1 == self.samples { self.max } else { self.min + step * i as f64 })
    }

    fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::Config(format!("need at least 2 samples, got {}", self.samples)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::Config(format!("empty range {}:{}", self.min, self.max)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

fn default_pole_guard() -> f64 {
    1e-6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub target: Target,
    #[serde(default)]
    pub grid: Grid,
    /// Points with `|d| < pole_guard` are reported as undefined.
    #[serde(default = "default_pole_guard")]
    pub pole_guard: f64,
    #[serde(default)]
    pub output: OutputFormat,
    /// Drop `|t|²` outside the unitary domain.
    #[serde(default)]
    pub mask_unitary: bool,
}

impl SweepConfig {
    pub fn new(target: Target) -> Self {
        SweepConfig {
            target,
            grid: Grid::default(),
            pole_guard: default_pole_guard(),
            output: OutputFormat::Csv,
            mask_unitary: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.pole_guard.is_nan() || self.pole_guard <= 0.0 {
            return Err(Error::Config(format!("pole_guard must be positive, got {}", self.pole_guard)));
        }
        if let Target::Family { family, .. } = &self.target {
            family.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub x: f64,
    /// `None` when undefined or masked.
    pub t2: Option<f64>,
    pub unitary: bool,
    pub defined: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub x: f64,
    pub t2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalHit {
    pub theta: f64,
    pub value: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<Row>,
    pub zeros: Vec<f64>,
    pub maxima: Vec<Extremum>,
    pub universal: Vec<UniversalHit>,
}

enum Evaluator {
    Braid(BraidWord),
    Pretzel(Vec<i64>, Normalization),
    Graph(MetricGraph, usize, usize),
}

impl Evaluator {
    fn new(target: &Target) -> Result<Self> {
        Ok(match target {
            Target::Word { word } => Evaluator::Braid(word.clone()),
            Target::Family { family: FamilySpec::Pretzel { ns }, normalization } => {
                Evaluator::Pretzel(ns.clone(), *normalization)
            }
            Target::Family { family, .. } => Evaluator::Braid(family.word()?),
            Target::Graph { graph } => {
                let g = MetricGraph::try_from(graph.clone())?;
                let (entry, exit) = g.ports()?;
                Evaluator::Graph(g, entry, exit)
            }
        })
    }

    fn is_graph(&self) -> bool {
        matches!(self, Evaluator::Graph(..))
    }

    /// `Ok(None)` marks a pole (or a singular graph system) at `x`.
    fn eval(&self, x: f64, pole_guard: f64) -> Result<Option<f64>> {
        let value = match self {
            Evaluator::Graph(g, entry, exit) => transmission_graph(g, *entry, *exit, x / g.edge_length()).map(|t| t.norm_sqr()),
            _ if Params::new(x).near_pole(pole_guard) => return Ok(None),
            Evaluator::Braid(word) => braid::transmission(word, &Params::new(x)),
            Evaluator::Pretzel(ns, norm) => family_transmission(&FamilySpec::Pretzel { ns: ns.clone() }, x, *norm),
        };
        match value {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            Ok(_) | Err(Error::Pole { .. } | Error::SingularSystem { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Golden-section search for a minimum of `f` on `[a, b]`; non-finite values
/// count as `+∞`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = g(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, g(x))
}

/// Indices `i` of interior grid points with `v[i−1] ≥ v[i] < v[i+1]`
/// (all three defined).
fn local_minima(values: &[Option<f64>]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| match (values[i - 1], values[i], values[i + 1]) {
            (Some(l), Some(m), Some(r)) => l >= m && m < r,
            _ => false,
        })
        .collect()
}

fn push_distinct(xs: &mut Vec<f64>, x: f64) {
    if xs.last().is_none_or(|&last| (x - last).abs() > 1e-9) {
        xs.push(x);
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let ev = Evaluator::new(&config.target)?;
    let xs: Vec<f64> = config.grid.points().collect();
    let raw = xs.iter().map(|&x| ev.eval(x, config.pole_guard)).collect::<Result<Vec<_>>>()?;

    let rows = xs
        .iter()
        .zip(&raw)
        .map(|(&x, &t2)| {
            let unitary = ev.is_graph() || in_unitary_domain(x);
            let masked = config.mask_unitary && !unitary;
            Row { x, t2: if masked { None } else { t2 }, unitary, defined: t2.is_some() }
        })
        .collect();

    let f = |x: f64| ev.eval(x, config.pole_guard).ok().flatten().unwrap_or(f64::NAN);

    // |t| vanishes linearly at a simple zero, so minimize it rather than |t|²
    let mut zeros = Vec::new();
    for i in local_minima(&raw) {
        let (x, v) = golden_min(|x| f(x).sqrt(), xs[i - 1], xs[i + 1], REFINE_TOL);
        if v * v < ZERO_TOL {
            push_distinct(&mut zeros, x);
        }
    }

    let neg: Vec<Option<f64>> = raw.iter().map(|v| v.map(|v| -v)).collect();
    let mut maxima: Vec<Extremum> = Vec::new();
    for i in local_minima(&neg) {
        let (x, v) = golden_min(|x| -f(x), xs[i - 1], xs[i + 1], REFINE_TOL);
        if maxima.last().is_none_or(|m| (x - m.x).abs() > 1e-9) {
            maxima.push(Extremum { x, t2: -v });
        }
    }

    Ok(SweepResult { rows, zeros, maxima, universal: Vec::new() })
}

/// Families scanned for universal points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum UniversalFamily {
    /// `R₂ⁿ`.
    Torus,
    /// `R₂ R₁⁻ⁿ R₂ᵐ`; `m = 2` gives the twist knots.
    DoubleBraid { m: i64 },
}

impl UniversalFamily {
    pub fn member(&self, n: i64) -> BraidWord {
        match *self {
            UniversalFamily::Torus => torus_word(n),
            UniversalFamily::DoubleBraid { m } => twist_word(1, n, m),
        }
    }
}

/// `(mean, max − min)` of `|t|²` across the family at `theta`, `None` at a pole.
fn family_spread(words: &[BraidWord], theta: f64, pole_guard: f64) -> Option<(f64, f64)> {
    let p = Params::new(theta);
    if p.near_pole(pole_guard) {
        return None;
    }
    let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for w in words {
        let t = braid::transmission(w, &p).ok()?;
        lo = lo.min(t);
        hi = hi.max(t);
        sum += t;
    }
    Some((sum / words.len() as f64, hi - lo))
}

/// Phases at which every member `n ∈ ns` of the family has the same `|t|²`:
/// grid minima of the spread, refined by golden section and accepted below
/// [`SPREAD_TOL`].
pub fn detect_universal(
    family: UniversalFamily,
    ns: RangeInclusive<i64>,
    grid: &Grid,
    pole_guard: f64,
) -> Result<Vec<UniversalHit>> {
    grid.validate()?;
    let words: Vec<BraidWord> = ns.map(|n| family.member(n)).collect();
    if words.len() < 3 {
        return Err(Error::Config(format!("universal search needs at least 3 members, got {}", words.len())));
    }
    let xs: Vec<f64> = grid.points().collect();
    let spread: Vec<Option<f64>> = xs.iter().map(|&x| family_spread(&words, x, pole_guard).map(|s| s.1)).collect();
    let f = |x: f64| family_spread(&words, x, pole_guard).map_or(f64::NAN, |s| s.1);

    let mut candidates: Vec<usize> = local_minima(&spread);
    // a spread that vanishes on the grid edge is not bracketed by neighbours
    for (i, j) in [(0, 1), (xs.len() - 1, xs.len() - 2)] {
        if let (Some(s), Some(next)) = (spread[i], spread[j]) {
            if s < SPREAD_TOL && s <= next {
                candidates.push(i);
            }
        }
    }
    candidates.sort_unstable();

    let mut hits: Vec<UniversalHit> = Vec::new();
    for i in candidates {
        let (a, b) = (xs[i.saturating_sub(1)], xs[(i + 1).min(xs.len() - 1)]);
        let (theta, s) = golden_min(f, a, b, REFINE_TOL);
        if s < SPREAD_TOL && hits.last().is_none_or(|h| (theta - h.theta).abs() > 1e-9) {
            let (value, spread) = family_spread(&words, theta, pole_guard).unwrap();
            hits.push(UniversalHit { theta, value, spread });
        }
    }
    Ok(hits)
}

/// Parses an angle such as `1.5`, `pi`, `-pi/2`, `2pi` or `3*pi/8`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let bad = || Error::Config(format!("cannot parse angle {s:?}"));
    let t = s.trim();
    let Some((coef, rest)) = t.split_once("pi") else {
        return t.parse().map_err(|_| bad());
    };
    let coef = coef.trim().trim_end_matches('*').trim();
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let q = match rest.trim() {
        "" => 1.0,
        r => r.strip_prefix('/').ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * PI / q)
}

/// Parses `a:b` with either end an angle as accepted by [`parse_angle`].
pub fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::Config(format!("range {s:?} is not of the form a:b")))?;
    Ok((parse_angle(a)?, parse_angle(b)?))
}

/// `v` to 12 significant digits; fixed notation where it fits, scientific
/// otherwise.
pub fn format_sig(v: f64) -> String {
    if !v.is_finite() {
        return "nan".into();
    }
    if v == 0.0 {
        return format!("{:.11}", 0.0);
    }
    // exponent after rounding to 12 digits, so 0.9999999999999 prints as 1.0…
    let sci = format!("{v:.11e}");
    let e: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-4..12).contains(&e) {
        format!("{:.*}", (11 - e) as usize, v)
    } else {
        sci
    }
}

#[derive(Serialize, Deserialize)]
struct Metadata {
    tool: String,
    version: String,
    config: SweepConfig,
}

#[derive(Serialize, Deserialize)]
struct Document {
    metadata: Metadata,
    #[serde(flatten)]
    result: SweepResult,
}

pub fn emit(config: &SweepConfig, result: &SweepResult, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("x,t2,unitary,defined\n");
            for r in &result.rows {
                let t2 = r.t2.map_or_else(|| "nan".to_string(), format_sig);
                writeln!(out, "{:.12},{},{},{}", r.x, t2, r.unitary, r.defined).unwrap();
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let doc = Document {
                metadata: Metadata { tool: "knotscatter".into(), version: VERSION.into(), config: config.clone() },
                result: result.clone(),
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Reads a config either bare or from the metadata of an emitted JSON document.
pub fn parse_config(json: &str) -> Result<SweepConfig> {
    let value: serde_json::Value = serde_json::from_str(json).map_err(|e| Error::Config(e.to_string()))?;
    let inner = value.get("metadata").and_then(|m| m.get("config")).cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| Error::Config(e.to_string()))
}
