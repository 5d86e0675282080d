//! Volumes: closed forms where the family admits one, Monte Carlo rejection
//! from the per-axis bounding box otherwise (dimension capped at 16).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::gamma::{gamma, ln_gamma};

use super::body::{ConvexBody, Error, Family, Result};
use crate::num::{adaptive_simpson, golden_max};

/// How a volume value was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VolumeMethod {
    Exact,
    MonteCarlo { ci_halfwidth: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Volume {
    pub value: f64,
    pub method: VolumeMethod,
}

impl Volume {
    fn exact(value: f64) -> Volume {
        Volume { value, method: VolumeMethod::Exact }
    }

    /// Relative 99% CI half-width (zero for exact values).
    pub fn relative_ci(&self) -> f64 {
        match self.method {
            VolumeMethod::Exact => 0.0,
            VolumeMethod::MonteCarlo { ci_halfwidth } => ci_halfwidth / self.value,
        }
    }
}

/// Volume of the unit Euclidean ball in dimension `n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let n = n as f64;
    (0.5 * n * std::f64::consts::PI.ln() - ln_gamma(0.5 * n + 1.0)).exp()
}

/// Lebesgue volume with a method tag. Deterministic: the Monte Carlo fallback
/// derives its stream from `seed`.
pub fn volume(body: &ConvexBody, seed: u64) -> Result<Volume> {
    if let Some(v) = exact_volume(body) {
        return Ok(Volume::exact(v));
    }
    monte_carlo_volume(body, seed)
}

fn exact_volume(body: &ConvexBody) -> Option<f64> {
    let n = body.dim();
    match body.family() {
        Family::Box { half_widths } => {
            Some(half_widths.iter().map(|a| 2.0 * a).product())
        }
        Family::Ellipsoid { shape } => {
            let det = shape.clone().lu().determinant().abs();
            Some(unit_ball_volume(n) * det)
        }
        Family::LpBall { p, radius } => {
            if p.is_infinite() {
                Some((2.0 * radius).powi(n as i32))
            } else {
                // (2r)^n Gamma(1 + 1/p)^n / Gamma(1 + n/p)
                let ln_v = n as f64 * ((2.0 * radius).ln() + ln_gamma(1.0 + 1.0 / p))
                    - ln_gamma(1.0 + n as f64 / p);
                Some(ln_v.exp())
            }
        }
        Family::Simplex { vertices } => {
            let v0 = &vertices[0];
            let mut m = nalgebra::DMatrix::zeros(n, n);
            for j in 0..n {
                m.set_column(j, &(&vertices[j + 1] - v0));
            }
            Some(m.lu().determinant().abs() / gamma(n as f64 + 1.0))
        }
        Family::CrossPolytope { scale } => {
            Some(((2.0 * scale).ln() * n as f64 - ln_gamma(n as f64 + 1.0)).exp())
        }
        Family::AffineImage { body, map } => {
            exact_volume(body).map(|v| v * map.det_abs())
        }
        Family::MinkowskiAverage { a, b } => minkowski_exact_volume(a, b),
        _ => None,
    }
}

/// Closed-form-or-quadrature volume of a Minkowski average, available when
/// the factors are homothetic ellipsoids or coaxial ellipsoids that differ in
/// one axis (the average is then a body of revolution and reduces to a 1D
/// profile integral).
fn minkowski_exact_volume(a: &ConvexBody, b: &ConvexBody) -> Option<f64> {
    if a == b {
        return exact_volume(a);
    }
    let da = diagonal_ellipsoid_axes(a)?;
    let db = diagonal_ellipsoid_axes(b)?;
    let n = da.len();
    // Homothetic: (A + sA)/2 = (1+s)/2 A.
    let ratio = db[0] / da[0];
    if da.iter().zip(&db).all(|(x, y)| (y / x - ratio).abs() <= 1e-12 * ratio.abs()) {
        let scale = 0.5 * (1.0 + ratio);
        let det: f64 = da.iter().map(|x| x * scale).product();
        return Some(unit_ball_volume(n) * det);
    }
    if n < 2 {
        return None;
    }
    // Axisymmetric case: all but one shared axis index k with constant radial
    // axes within each body.
    let k = (0..n).find(|&i| {
        let rest_a: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| da[j]).collect();
        let rest_b: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| db[j]).collect();
        all_equal(&rest_a) && all_equal(&rest_b)
    })?;
    let alpha = if k == 0 { da[1] } else { da[0] };
    let beta = if k == 0 { db[1] } else { db[0] };
    Some(axisymmetric_average_volume(da[k], alpha, db[k], beta, n))
}

fn all_equal(v: &[f64]) -> bool {
    v.windows(2).all(|w| (w[0] - w[1]).abs() <= 1e-12 * w[0].abs().max(1.0))
}

fn diagonal_ellipsoid_axes(body: &ConvexBody) -> Option<Vec<f64>> {
    match body.family() {
        Family::Ellipsoid { shape } => {
            for i in 0..shape.nrows() {
                for j in 0..shape.ncols() {
                    if i != j && shape[(i, j)] != 0.0 {
                        return None;
                    }
                }
            }
            Some((0..shape.nrows()).map(|i| shape[(i, i)].abs()).collect())
        }
        Family::LpBall { p, radius } if *p == 2.0 => Some(vec![*radius; body.dim()]),
        _ => None,
    }
}

/// Volume of `(E_a + E_b)/2` for coaxial ellipsoids of revolution with
/// distinguished semi-axes `a1, b1` and radial semi-axes `alpha, beta`.
/// The slice at height `t` along the distinguished axis is an (n-1)-ball of
/// radius `r(t) = sup { (r_a(u) + r_b(v))/2 : (u+v)/2 = t }`.
pub fn axisymmetric_average_volume(a1: f64, alpha: f64, b1: f64, beta: f64, n: usize) -> f64 {
    let half = 0.5 * (a1 + b1);
    let profile = |t: f64| -> f64 {
        let u_lo = (-a1).max(2.0 * t - b1);
        let u_hi = a1.min(2.0 * t + b1);
        if u_hi <= u_lo {
            return 0.0;
        }
        let f = |u: f64| {
            let ra = alpha * (1.0 - (u / a1) * (u / a1)).max(0.0).sqrt();
            let v = 2.0 * t - u;
            let rb = beta * (1.0 - (v / b1) * (v / b1)).max(0.0).sqrt();
            0.5 * (ra + rb)
        };
        let (_, best) = golden_max(&f, u_lo, u_hi, 1e-13 * (u_hi - u_lo).max(1e-12));
        best
    };
    let m = (n - 1) as f64;
    let integrand = |t: f64| profile(t).powf(m);
    let peak = integrand(0.0);
    let integral = adaptive_simpson(&integrand, -half, half, 1e-12 * peak * half.max(1.0));
    unit_ball_volume(n - 1) * integral
}

fn monte_carlo_volume(body: &ConvexBody, seed: u64) -> Result<Volume> {
    let n = body.dim();
    if n > 16 {
        return Err(Error::UnsupportedDimension(n));
    }
    let extents = body.axis_extents();
    let box_volume: f64 = extents.iter().map(|e| 2.0 * e).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut hits = 0u64;
    let mut total = 0u64;
    let mut x = vec![0.0f64; n];
    const BATCH: u64 = 65_536;
    const Z99: f64 = 2.575_829_303_549; // two-sided 99% normal quantile
    for _ in 0..512 {
        for _ in 0..BATCH {
            for (xi, e) in x.iter_mut().zip(&extents) {
                *xi = rng.gen_range(-e..*e);
            }
            if body.contains(&x) {
                hits += 1;
            }
        }
        total += BATCH;
        if hits >= 64 {
            let p = hits as f64 / total as f64;
            let rel = Z99 * ((1.0 - p) / (p * total as f64)).sqrt();
            if rel <= 0.02 {
                let value = p * box_volume;
                return Ok(Volume {
                    value,
                    method: VolumeMethod::MonteCarlo { ci_halfwidth: rel * value },
                });
            }
        }
    }
    Err(Error::MonteCarloAccuracy)
}

/// Brunn-Minkowski ratio `R = Vol((K+T)/2) / sqrt(Vol K Vol T)` with the
/// combined relative CI of the three volume estimates.
#[derive(Debug, Clone, Copy)]
pub struct BmRatio {
    pub value: f64,
    pub relative_ci: f64,
}

pub fn bm_ratio(k: &ConvexBody, t: &ConvexBody, seed: u64) -> Result<BmRatio> {
    if translate_invariant_equal(k, t) {
        return Ok(BmRatio { value: 1.0, relative_ci: 0.0 });
    }
    let avg = ConvexBody::minkowski_average(k.clone(), t.clone())?;
    let vk = volume(k, seed)?;
    let vt = volume(t, seed.wrapping_add(1))?;
    let va = volume(&avg, seed.wrapping_add(2))?;
    let value = va.value / (vk.value * vt.value).sqrt();
    let relative_ci =
        va.relative_ci() + 0.5 * vk.relative_ci() + 0.5 * vt.relative_ci();
    Ok(BmRatio { value, relative_ci })
}

/// K and T coincide up to translation, so the ratio is its equality case.
fn translate_invariant_equal(k: &ConvexBody, t: &ConvexBody) -> bool {
    fn strip(body: &ConvexBody) -> &ConvexBody {
        if let Family::AffineImage { body: inner, map } = body.family() {
            let n = inner.dim();
            if map.linear() == &nalgebra::DMatrix::identity(n, n) {
                return strip(inner);
            }
        }
        body
    }
    strip(k) == strip(t)
}
