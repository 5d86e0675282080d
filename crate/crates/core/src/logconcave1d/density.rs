//! One-dimensional log-concave probability densities.
//!
//! Analytic kinds (uniform, Gaussian, exponential) carry closed-form CDF,
//! quantile and moments. Tabulated densities live on a uniform grid and
//! interpolate log-density linearly between nodes, which keeps them
//! log-concave between nodes and closed under conditioning. Conditioning an
//! analytic density produces a `Truncated` wrapper over the same base, so
//! repeated conditioning never loses the closed forms underneath.

use std::sync::Arc;

use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::num::adaptive_simpson;

/// Log-densities below this are treated as zero mass.
const LOG_FLOOR: f64 = -690.0;
/// Inset from {0,1} when integrating in the quantile domain.
const QUANTILE_INSET: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("quantile argument {0} outside (0, 1)")]
    Domain(f64),
    #[error("conditioning interval carries no mass")]
    EmptyConditioning,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("target density vanishes inside its support")]
    UnsupportedTarget,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A closed interval of the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Uniform { half_width: f64 },
    Gaussian { std: f64 },
    Exponential { rate: f64 },
    Tabulated(Arc<Tabulated>),
    Truncated(Arc<Truncated>),
}

#[derive(Debug)]
struct Truncated {
    base: Density1d,
    lo: f64,
    hi: f64,
    mass: f64,
    cdf_lo: f64,
}

/// A 1D log-concave probability density.
#[derive(Debug, Clone)]
pub struct Density1d {
    kind: Kind,
}

impl Density1d {
    /// Uniform density on `[-a, a]`.
    pub fn uniform(half_width: f64) -> Self {
        assert!(half_width > 0.0, "half-width must be positive");
        Density1d { kind: Kind::Uniform { half_width } }
    }

    /// Centered Gaussian with standard deviation `std`.
    pub fn gaussian(std: f64) -> Self {
        assert!(std > 0.0, "std must be positive");
        Density1d { kind: Kind::Gaussian { std } }
    }

    /// Exponential density `rate * exp(-rate t)` on `[0, inf)`.
    pub fn exponential(rate: f64) -> Self {
        assert!(rate > 0.0, "rate must be positive");
        Density1d { kind: Kind::Exponential { rate } }
    }

    /// Tabulated density from node values on a uniform grid. The values must
    /// already integrate to one within `1e-6`.
    pub fn tabulated(t0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        let tab = Tabulated::build(t0, h, values, false)?;
        Ok(Density1d { kind: Kind::Tabulated(Arc::new(tab)) })
    }

    /// Tabulated density from unnormalized node values; mass is rescaled to one.
    pub fn tabulated_unnormalized(t0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        let tab = Tabulated::build(t0, h, values, true)?;
        Ok(Density1d { kind: Kind::Tabulated(Arc::new(tab)) })
    }

    pub fn support(&self) -> Interval {
        match &self.kind {
            Kind::Uniform { half_width } => Interval::new(-half_width, *half_width),
            Kind::Gaussian { .. } => Interval::new(f64::NEG_INFINITY, f64::INFINITY),
            Kind::Exponential { .. } => Interval::new(0.0, f64::INFINITY),
            Kind::Tabulated(tab) => Interval::new(tab.t0, tab.t_end()),
            Kind::Truncated(tr) => Interval::new(tr.lo, tr.hi),
        }
    }

    /// Support clipped to the `[u, 1-u]` quantile range, for quadrature over
    /// unbounded kinds.
    pub fn effective_support(&self, u: f64) -> Interval {
        let s = self.support();
        let lo = if s.lo.is_finite() { s.lo } else { self.quantile(u).expect("u in (0,1)") };
        let hi = if s.hi.is_finite() { s.hi } else { self.quantile(1.0 - u).expect("u in (0,1)") };
        Interval::new(lo, hi)
    }

    pub fn pdf(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Uniform { half_width } => {
                if t.abs() <= *half_width {
                    0.5 / half_width
                } else {
                    0.0
                }
            }
            Kind::Gaussian { std } => {
                let z = t / std;
                (-0.5 * z * z).exp() / (std * (2.0 * std::f64::consts::PI).sqrt())
            }
            Kind::Exponential { rate } => {
                if t >= 0.0 {
                    rate * (-rate * t).exp()
                } else {
                    0.0
                }
            }
            Kind::Tabulated(tab) => tab.pdf(t),
            Kind::Truncated(tr) => {
                if t >= tr.lo && t <= tr.hi {
                    tr.base.pdf(t) / tr.mass
                } else {
                    0.0
                }
            }
        }
    }

    /// Natural log of the density; `-inf` outside the support.
    pub fn log_pdf(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Tabulated(tab) => tab.log_pdf(t),
            Kind::Gaussian { std } => {
                let z = t / std;
                -0.5 * z * z - (std * (2.0 * std::f64::consts::PI).sqrt()).ln()
            }
            _ => {
                let p = self.pdf(t);
                if p > 0.0 {
                    p.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// Distribution function; clamps to `[0, 1]` outside the support.
    pub fn cdf(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Uniform { half_width } => ((t + half_width) / (2.0 * half_width)).clamp(0.0, 1.0),
            Kind::Gaussian { std } => {
                let n = Normal::new(0.0, *std).expect("valid std");
                n.cdf(t)
            }
            Kind::Exponential { rate } => {
                if t <= 0.0 {
                    0.0
                } else {
                    -(-rate * t).exp_m1()
                }
            }
            Kind::Tabulated(tab) => tab.cdf(t),
            Kind::Truncated(tr) => {
                let t = t.clamp(tr.lo, tr.hi);
                ((tr.base.cdf(t) - tr.cdf_lo) / tr.mass).clamp(0.0, 1.0)
            }
        }
    }

    /// Inverse distribution function on `(0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(u));
        }
        Ok(match &self.kind {
            Kind::Uniform { half_width } => 2.0 * half_width * u - half_width,
            Kind::Gaussian { std } => {
                let n = Normal::new(0.0, *std).expect("valid std");
                n.inverse_cdf(u)
            }
            Kind::Exponential { rate } => -(-u).ln_1p() / rate,
            Kind::Tabulated(tab) => tab.quantile(u),
            Kind::Truncated(tr) => {
                let v = tr.cdf_lo + u * tr.mass;
                tr.base.quantile(v.clamp(f64::MIN_POSITIVE, 1.0 - 1e-16))?.clamp(tr.lo, tr.hi)
            }
        })
    }

    /// `I(u) = rho(quantile(u))`, the Bobkov profile of the density.
    pub fn pdf_at_quantile(&self, u: f64) -> f64 {
        match self.quantile(u) {
            Ok(t) => self.pdf(t),
            Err(_) => 0.0,
        }
    }

    pub fn mean(&self) -> f64 {
        match &self.kind {
            Kind::Uniform { .. } | Kind::Gaussian { .. } => 0.0,
            Kind::Exponential { rate } => 1.0 / rate,
            Kind::Tabulated(tab) => tab.moments.1,
            Kind::Truncated(_) => self.integral_against(&|t| t),
        }
    }

    /// Variance of the density. Closed form for analytic kinds, exact
    /// per-segment moments for tabulated kinds, adaptive quadrature otherwise.
    pub fn variance(&self) -> f64 {
        match &self.kind {
            Kind::Uniform { half_width } => half_width * half_width / 3.0,
            Kind::Gaussian { std } => std * std,
            Kind::Exponential { rate } => 1.0 / (rate * rate),
            Kind::Tabulated(tab) => {
                let (_, m1, m2) = tab.moments;
                m2 - m1 * m1
            }
            Kind::Truncated(_) => {
                let m1 = self.integral_against(&|t| t);
                let m2 = self.integral_against(&|t| t * t);
                m2 - m1 * m1
            }
        }
    }

    pub fn std(&self) -> f64 {
        self.variance().sqrt()
    }

    /// `int f dmu` by adaptive Simpson in the t-domain over the effective support.
    pub fn integral_against<F: Fn(f64) -> f64>(&self, f: &F) -> f64 {
        let s = self.effective_support(1e-12);
        adaptive_simpson(&|t| f(t) * self.pdf(t), s.lo, s.hi, 1e-11)
    }

    /// Conditioning `mu|_J`, renormalized to probability.
    pub fn condition(&self, j: Interval) -> Result<Density1d> {
        if j.hi <= j.lo {
            return Err(Error::EmptyConditioning);
        }
        // Flatten nested truncations so the base stays analytic or tabulated.
        if let Kind::Truncated(tr) = &self.kind {
            let lo = j.lo.max(tr.lo);
            let hi = j.hi.min(tr.hi);
            return tr.base.condition(Interval::new(lo, hi));
        }
        let s = self.support();
        let lo = j.lo.max(s.lo);
        let hi = j.hi.min(s.hi);
        if hi <= lo {
            return Err(Error::EmptyConditioning);
        }
        // A centered cut of a uniform is again a uniform; keep it closed-form.
        if let Kind::Uniform { .. } = &self.kind {
            if (lo + hi).abs() <= 1e-15 * hi.abs().max(1.0) {
                return Ok(Density1d::uniform(hi));
            }
        }
        let cdf_lo = self.cdf(lo);
        let mass = self.cdf(hi) - cdf_lo;
        if !(mass > 1e-300) {
            return Err(Error::EmptyConditioning);
        }
        if mass >= 1.0 - 1e-15 {
            return Ok(self.clone());
        }
        Ok(Density1d {
            kind: Kind::Truncated(Arc::new(Truncated { base: self.clone(), lo, hi, mass, cdf_lo })),
        })
    }

    /// Whether the measure is symmetric under `t -> -t`.
    pub fn is_even(&self) -> bool {
        match &self.kind {
            Kind::Uniform { .. } | Kind::Gaussian { .. } => true,
            Kind::Exponential { .. } => false,
            Kind::Tabulated(tab) => tab.is_even(),
            Kind::Truncated(tr) => tr.base.is_even() && (tr.lo + tr.hi).abs() <= 1e-12,
        }
    }

    /// Re-checks the tabulated log-concavity invariant (second differences of
    /// `log rho` at interior nodes). Analytic kinds are log-concave by
    /// construction.
    pub fn validate_log_concave(&self) -> Result<()> {
        match &self.kind {
            Kind::Tabulated(tab) => tab.check_log_concave(),
            Kind::Truncated(tr) => tr.base.validate_log_concave(),
            _ => Ok(()),
        }
    }

    /// Quantile inset used when an operation needs a finite working interval.
    pub(crate) fn quantile_inset() -> f64 {
        QUANTILE_INSET
    }
}

#[derive(Debug)]
struct Tabulated {
    t0: f64,
    h: f64,
    vals: Vec<f64>,
    logs: Vec<f64>,
    /// Cumulative mass up to node i; `cum[m-1] == 1`.
    cum: Vec<f64>,
    /// `(mass, mean, second moment)` from exact per-segment integrals.
    moments: (f64, f64, f64),
}

impl Tabulated {
    fn build(t0: f64, h: f64, mut values: Vec<f64>, normalize: bool) -> Result<Tabulated> {
        if values.len() < 3 {
            return Err(Error::InvalidInput("tabulated density needs at least 3 nodes".into()));
        }
        if !(h > 0.0) || !t0.is_finite() {
            return Err(Error::InvalidInput("tabulated grid must be finite with h > 0".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInput("density values must be finite and nonnegative".into()));
        }
        let max = values.iter().cloned().fold(0.0, f64::max);
        if max <= 0.0 {
            return Err(Error::InvalidInput("density is identically zero".into()));
        }
        // Zero nodes are floored far below everything else so logs stay finite.
        let floor = max * 1e-290;
        for v in values.iter_mut() {
            if *v < floor {
                *v = floor;
            }
        }
        let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
        let m = values.len();
        for i in 1..m - 1 {
            let dd = logs[i - 1] - 2.0 * logs[i] + logs[i + 1];
            if dd > 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "log-density convex at node {i} (second difference {dd:.3e})"
                )));
            }
        }
        let mut mass = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for i in 0..m - 1 {
            let (s0, s1, s2) = exp_linear_moments(values[i], values[i + 1], logs[i], logs[i + 1], h);
            let ti = t0 + i as f64 * h;
            mass += s0;
            m1 += ti * s0 + s1;
            m2 += ti * ti * s0 + 2.0 * ti * s1 + s2;
        }
        if normalize {
            if !(mass > 0.0) {
                return Err(Error::InvalidInput("density mass is zero".into()));
            }
        } else if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidInput(format!("tabulated mass {mass} deviates from 1")));
        }
        let inv = 1.0 / mass;
        for v in values.iter_mut() {
            *v *= inv;
        }
        let shift = inv.ln();
        let logs: Vec<f64> = logs.iter().map(|l| l + shift).collect();
        let mut cum = Vec::with_capacity(m);
        cum.push(0.0);
        let mut acc = 0.0;
        for i in 0..m - 1 {
            let (s0, _, _) = exp_linear_moments(values[i], values[i + 1], logs[i], logs[i + 1], h);
            acc += s0;
            cum.push(acc);
        }
        let total = cum[m - 1];
        for c in cum.iter_mut() {
            *c /= total;
        }
        Ok(Tabulated { t0, h, vals: values, logs, cum, moments: (1.0, m1 * inv, m2 * inv) })
    }

    fn t_end(&self) -> f64 {
        self.t0 + (self.vals.len() - 1) as f64 * self.h
    }

    fn pdf(&self, t: f64) -> f64 {
        let lp = self.log_pdf(t);
        if lp <= LOG_FLOOR {
            0.0
        } else {
            lp.exp()
        }
    }

    fn log_pdf(&self, t: f64) -> f64 {
        let x = (t - self.t0) / self.h;
        if x < 0.0 || x > (self.vals.len() - 1) as f64 {
            return f64::NEG_INFINITY;
        }
        let i = (x.floor() as usize).min(self.vals.len() - 2);
        let w = x - i as f64;
        self.logs[i] * (1.0 - w) + self.logs[i + 1] * w
    }

    fn cdf(&self, t: f64) -> f64 {
        if t <= self.t0 {
            return 0.0;
        }
        if t >= self.t_end() {
            return 1.0;
        }
        let x = (t - self.t0) / self.h;
        let i = (x.floor() as usize).min(self.vals.len() - 2);
        let s = (x - i as f64) * self.h;
        let partial = exp_linear_partial(self.vals[i], self.logs[i], self.logs[i + 1], self.h, s);
        (self.cum[i] + partial).clamp(0.0, 1.0)
    }

    fn quantile(&self, u: f64) -> f64 {
        // Segment by binary search on cumulative mass, then invert the
        // exp-linear primitive in closed form.
        let m = self.vals.len();
        let i = match self.cum.binary_search_by(|c| c.partial_cmp(&u).expect("no NaN")) {
            Ok(i) => i.min(m - 2),
            Err(i) => i.saturating_sub(1).min(m - 2),
        };
        let target = u - self.cum[i];
        let q = (self.logs[i + 1] - self.logs[i]) / self.h;
        let s = if q.abs() < 1e-12 {
            target / self.vals[i]
        } else {
            let arg = self.vals[i] + target * q;
            if arg <= 0.0 {
                self.h
            } else {
                (arg.ln() - self.logs[i]) / q
            }
        };
        self.t0 + i as f64 * self.h + s.clamp(0.0, self.h)
    }

    fn is_even(&self) -> bool {
        let m = self.vals.len();
        if (self.t0 + self.t_end()).abs() > 1e-9 * self.h.max(1.0) {
            return false;
        }
        for i in 0..m / 2 {
            let a = self.vals[i];
            let b = self.vals[m - 1 - i];
            if (a - b).abs() > 1e-9 * (a + b).max(1e-300) {
                return false;
            }
        }
        true
    }

    fn check_log_concave(&self) -> Result<()> {
        for i in 1..self.vals.len() - 1 {
            let dd = self.logs[i - 1] - 2.0 * self.logs[i] + self.logs[i + 1];
            if dd > 1e-9 {
                return Err(Error::InvalidInput(format!("log-density convex at node {i}")));
            }
        }
        Ok(())
    }
}

/// Integrals of `s^k * exp(l0 + (l1 - l0) s / h)` for `s` in `[0, h]`, `k = 0, 1, 2`.
/// `v0 = exp(l0)`, `v1 = exp(l1)` are passed to avoid re-exponentiation.
fn exp_linear_moments(v0: f64, v1: f64, l0: f64, l1: f64, h: f64) -> (f64, f64, f64) {
    if v0 <= 0.0 && v1 <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let d = l1 - l0;
    if d.abs() < 1e-4 {
        // Series in d keeps the q -> 0 limit stable:
        // int_0^1 x^k e^{dx} dx = sum_m d^m / (m! (k + m + 1)).
        let s0 = h * v0 * (1.0 + d * (0.5 + d / 6.0));
        let s1 = h * h * v0 * (0.5 + d * (1.0 / 3.0 + d / 8.0));
        let s2 = h * h * h * v0 * (1.0 / 3.0 + d * (0.25 + d / 10.0));
        return (s0, s1, s2);
    }
    let q = d / h;
    let s0 = (v1 - v0) / q;
    let s1 = (v1 * (d - 1.0) + v0) / (q * q);
    let s2 = (v1 * (d * d - 2.0 * d + 2.0) - 2.0 * v0) / (q * q * q);
    (s0, s1, s2)
}

/// Partial mass `int_0^s exp(l0 + (l1 - l0) u / h) du`.
fn exp_linear_partial(v0: f64, l0: f64, l1: f64, h: f64, s: f64) -> f64 {
    let q = (l1 - l0) / h;
    if q.abs() * h < 1e-12 {
        return v0 * s;
    }
    ((l0 + q * s).exp() - v0) / q
}

/// Rasterizes an arbitrary concave log-density onto a uniform grid. Sampling
/// a concave function at nodes and interpolating linearly preserves concavity,
/// so the result is exactly log-concave as a tabulated density.
pub fn rasterize_log_concave<F: Fn(f64) -> f64>(
    log_density: F,
    lo: f64,
    hi: f64,
    nodes: usize,
) -> Result<Density1d> {
    assert!(nodes >= 3 && hi > lo);
    let h = (hi - lo) / (nodes - 1) as f64;
    let vals: Vec<f64> = (0..nodes)
        .map(|i| {
            let l = log_density(lo + i as f64 * h);
            if l < LOG_FLOOR {
                0.0
            } else {
                l.exp()
            }
        })
        .collect();
    Density1d::tabulated_unnormalized(lo, h, vals)
}

/// Random log-concave test density: `exp(-V)` for a piecewise-linear convex
/// potential `V` with 8 random knots, rasterized and normalized.
pub fn random_log_concave<R: Rng>(rng: &mut R, nodes: usize) -> Density1d {
    let mut knots: Vec<f64> = (0..8).map(|_| rng.gen_range(-3.0..3.0)).collect();
    knots.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    // Increasing slopes across the 9 pieces; negative first, positive last,
    // so the density decays on both sides.
    let mut slopes = Vec::with_capacity(9);
    let mut s = -rng.gen_range(0.5..3.0);
    slopes.push(s);
    for _ in 0..8 {
        s += rng.gen_range(0.05..1.0);
        slopes.push(s);
    }
    if *slopes.last().expect("nonempty") < 0.3 {
        let bump = 0.3 - slopes.last().expect("nonempty");
        let n = slopes.len();
        for (i, sl) in slopes.iter_mut().enumerate() {
            *sl += bump * i as f64 / (n - 1) as f64;
        }
    }
    let potential = |t: f64| -> f64 {
        // V(t) = int_0^t V'(s) ds with V'(s) the piecewise-constant slope.
        let mut v = 0.0;
        let mut prev = 0.0f64;
        if t >= 0.0 {
            for (i, &k) in knots.iter().enumerate() {
                if k <= prev {
                    continue;
                }
                let seg_end = k.min(t);
                if seg_end > prev {
                    v += slopes[i] * (seg_end - prev);
                    prev = seg_end;
                }
                if k >= t {
                    break;
                }
            }
            if t > prev {
                v += slopes[8] * (t - prev);
            }
        } else {
            let mut prev = 0.0f64;
            for (i, &k) in knots.iter().enumerate().rev() {
                if k >= prev {
                    continue;
                }
                let seg_end = k.max(t);
                if seg_end < prev {
                    v += slopes[i + 1] * (seg_end - prev);
                    prev = seg_end;
                }
                if k <= t {
                    break;
                }
            }
            if t < prev {
                v += slopes[0] * (t - prev);
            }
        }
        v
    };
    rasterize_log_concave(|t| -potential(t), -9.0, 9.0, nodes)
        .expect("convex potential rasterizes to a valid density")
}

/// Writes a tabulated view of the density as CSV with header `t,rho`.
pub fn write_density_csv<W: std::io::Write>(d: &Density1d, w: &mut W) -> Result<()> {
    let (t0, h, vals) = match &d.kind {
        Kind::Tabulated(tab) => (tab.t0, tab.h, tab.vals.clone()),
        _ => {
            let s = d.effective_support(1e-9);
            let nodes = 1024usize;
            let h = (s.hi - s.lo) / (nodes - 1) as f64;
            (s.lo, h, (0..nodes).map(|i| d.pdf(s.lo + i as f64 * h)).collect())
        }
    };
    writeln!(w, "t,rho")?;
    for (i, v) in vals.iter().enumerate() {
        writeln!(w, "{:.17e},{:.17e}", t0 + i as f64 * h, v)?;
    }
    Ok(())
}

/// Reads a `t,rho` CSV into a tabulated density, validating uniform spacing
/// to relative `1e-9`.
pub fn read_density_csv<R: std::io::BufRead>(r: R) -> Result<Density1d> {
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (ln, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if ln == 0 {
            if line != "t,rho" {
                return Err(Error::InvalidInput(format!("expected header 't,rho', got '{line}'")));
            }
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| Error::InvalidInput(format!("line {} is not 't,rho'", ln + 1)))?;
        let t: f64 = a.trim().parse().map_err(|_| Error::InvalidInput(format!("bad t at line {}", ln + 1)))?;
        let v: f64 = b.trim().parse().map_err(|_| Error::InvalidInput(format!("bad rho at line {}", ln + 1)))?;
        ts.push(t);
        vs.push(v);
    }
    if ts.len() < 3 {
        return Err(Error::InvalidInput("need at least 3 rows".into()));
    }
    let h = ts[1] - ts[0];
    if !(h > 0.0) {
        return Err(Error::InvalidInput("grid must be increasing".into()));
    }
    for i in 1..ts.len() {
        let step = ts[i] - ts[i - 1];
        if ((step - h) / h).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "non-uniform spacing at row {} ({} vs {})",
                i + 1,
                step,
                h
            )));
        }
    }
    Density1d::tabulated(ts[0], h, vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cdf_examples() {
        assert_relative_eq!(Density1d::uniform(1.0).cdf(0.0), 0.5);
        assert_relative_eq!(Density1d::gaussian(1.0).cdf(0.0), 0.5);
        // Closed form (t + a) / (2a).
        assert_relative_eq!(Density1d::uniform(1.0).cdf(0.5), 0.75);
    }

    #[test]
    fn quantile_examples() {
        assert_relative_eq!(Density1d::uniform(1.0).quantile(0.5).unwrap(), 0.0);
        // Closed form 2au - a.
        assert_relative_eq!(Density1d::uniform(2.0).quantile(0.75).unwrap(), 1.0);
        // Independent oracle for the standard normal quantile: Newton on the
        // erf Taylor series (series converges for this argument range).
        let u = 0.841344746;
        let q = Density1d::gaussian(1.0).quantile(u).unwrap();
        let oracle = normal_quantile_series_oracle(u);
        assert!((q - 1.0).abs() <= 1e-6, "quantile {q}");
        assert!((q - oracle).abs() <= 1e-9, "{q} vs oracle {oracle}");
    }

    /// Standard normal quantile via a Maclaurin series for erf plus Newton
    /// refinement; independent of the statrs implementation path.
    fn normal_quantile_series_oracle(u: f64) -> f64 {
        fn erf_series(x: f64) -> f64 {
            let mut term = x;
            let mut sum = x;
            for n in 1..200 {
                term *= -x * x / n as f64;
                let add = term / (2 * n + 1) as f64;
                sum += add;
                if add.abs() < 1e-18 {
                    break;
                }
            }
            2.0 / std::f64::consts::PI.sqrt() * sum
        }
        let cdf = |t: f64| 0.5 * (1.0 + erf_series(t / std::f64::consts::SQRT_2));
        let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut t = 0.0f64;
        for _ in 0..60 {
            t -= (cdf(t) - u) / pdf(t);
        }
        t
    }

    #[test]
    fn quantile_domain_error() {
        assert!(Density1d::uniform(1.0).quantile(0.0).is_err());
        assert!(Density1d::uniform(1.0).quantile(1.0).is_err());
    }

    #[test]
    fn variance_examples() {
        // Quadrature oracle for the uniform: int t^2/2 over [-1,1].
        let oracle = adaptive_simpson(&|t: f64| t * t * 0.5, -1.0, 1.0, 1e-12);
        assert_relative_eq!(Density1d::uniform(1.0).variance(), oracle, epsilon = 1e-10);
        assert_relative_eq!(Density1d::gaussian(2.0).variance(), 4.0);
        let oracle =
            adaptive_simpson(&|t: f64| t * t * (-t).exp(), 0.0, 60.0, 1e-12) - 1.0;
        assert_relative_eq!(Density1d::exponential(1.0).variance(), 1.0, epsilon = 1e-9);
        assert_relative_eq!(Density1d::exponential(1.0).variance(), oracle, epsilon = 1e-8);
    }

    #[test]
    fn conditioning_examples() {
        let u = Density1d::uniform(1.0);
        let c = u.condition(Interval::new(-0.5, 0.5)).unwrap();
        assert_relative_eq!(c.variance(), 1.0 / 12.0, epsilon = 1e-9);
        assert_relative_eq!(c.cdf(0.0), 0.5, epsilon = 1e-12);
        // Conditioning on the full support is the identity.
        let full = u.condition(Interval::new(-2.0, 2.0)).unwrap();
        assert_relative_eq!(full.variance(), u.variance(), epsilon = 1e-9);
        assert_relative_eq!(full.mean(), u.mean(), epsilon = 1e-9);
        // Half-normal: variance 1 - 2/pi.
        let g = Density1d::gaussian(1.0);
        let half = g.condition(Interval::new(0.0, f64::INFINITY)).unwrap();
        assert_relative_eq!(half.variance(), 1.0 - 2.0 / std::f64::consts::PI, epsilon = 1e-6);
    }

    #[test]
    fn conditioning_empty_errors() {
        let u = Density1d::uniform(1.0);
        assert!(matches!(u.condition(Interval::new(2.0, 3.0)), Err(Error::EmptyConditioning)));
    }

    #[test]
    fn tabulated_roundtrip_and_quantile() {
        let d = rasterize_log_concave(|t| -0.5 * t * t, -8.0, 8.0, 801).unwrap();
        for &u in &[0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
            let q = d.quantile(u).unwrap();
            assert!((d.cdf(q) - u).abs() < 1e-10, "u={u}");
        }
        assert_relative_eq!(d.variance(), 1.0, epsilon = 2e-4);

        let mut buf = Vec::new();
        write_density_csv(&d, &mut buf).unwrap();
        let back = read_density_csv(std::io::BufReader::new(&buf[..])).unwrap();
        assert_relative_eq!(back.variance(), d.variance(), epsilon = 1e-9);
        assert_relative_eq!(back.cdf(0.7), d.cdf(0.7), epsilon = 1e-9);
    }

    #[test]
    fn csv_rejects_nonuniform_spacing() {
        let text = "t,rho\n0.0,1.0\n0.5,1.0\n1.2,1.0\n";
        assert!(read_density_csv(std::io::BufReader::new(text.as_bytes())).is_err());
    }

    #[test]
    fn tabulated_rejects_convex_log_density() {
        // exp(t^2)-shaped values are log-convex.
        let vals: Vec<f64> = (0..9).map(|i| ((i as f64 - 4.0) * (i as f64 - 4.0) * 0.3).exp()).collect();
        assert!(Density1d::tabulated_unnormalized(-1.0, 0.25, vals).is_err());
    }

    #[test]
    fn random_densities_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let d = random_log_concave(&mut rng, 513);
            d.validate_log_concave().unwrap();
            let v = d.variance();
            assert!(v.is_finite() && v > 0.0);
            // Bobkov characterization: u -> rho(quantile(u)) concave on a grid.
            let n = 1000;
            let profile: Vec<f64> =
                (1..n).map(|i| d.pdf_at_quantile(i as f64 / n as f64)).collect();
            for i in 1..profile.len() - 1 {
                let dd = profile[i - 1] - 2.0 * profile[i] + profile[i + 1];
                assert!(dd <= 1e-9 + 1e-6 * profile[i], "profile convex at {i}");
            }
        }
    }
}
