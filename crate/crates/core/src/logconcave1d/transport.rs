//! Monotone transport between 1D densities and the exact W2 distance.

use super::density::{Density1d, Error, Result};
use crate::num::adaptive_simpson;

/// Density floor used when the target density underflows at `F(t)`. Flagged
/// nodes are excluded from relative-error checks.
const DERIVATIVE_FLOOR: f64 = 1e-300;

/// The monotone (non-decreasing) map pushing `source` forward to `target`,
/// `F = Phi2^{-1} o Phi1`, together with its derivative and the midpoint map
/// `S = (F + id) / 2`.
#[derive(Debug, Clone)]
pub struct TransportMap1d {
    source: Density1d,
    target: Density1d,
}

impl TransportMap1d {
    pub fn source(&self) -> &Density1d {
        &self.source
    }

    pub fn target(&self) -> &Density1d {
        &self.target
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = self.source.cdf(t).clamp(1e-16, 1.0 - 1e-16);
        self.target.quantile(u).expect("u clamped into (0,1)")
    }

    /// `F'(t) = rho1(t) / rho2(F(t))`; the flag marks nodes where the target
    /// density underflowed and the floor was substituted.
    pub fn derivative_flagged(&self, t: f64) -> (f64, bool) {
        let num = self.source.pdf(t);
        let den = self.target.pdf(self.eval(t));
        if den < DERIVATIVE_FLOOR {
            (num / DERIVATIVE_FLOOR, true)
        } else {
            (num / den, false)
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.derivative_flagged(t).0
    }

    pub fn midpoint(&self, t: f64) -> f64 {
        0.5 * (self.eval(t) + t)
    }
}

/// Builds the monotone transportation map between `d1` and `d2`.
///
/// The target must have connected support with nonvanishing density on it;
/// tabulated targets with interior zeros are rejected.
pub fn monotone_transport(d1: &Density1d, d2: &Density1d) -> Result<TransportMap1d> {
    target_supported(d2)?;
    Ok(TransportMap1d { source: d1.clone(), target: d2.clone() })
}

fn target_supported(d: &Density1d) -> Result<()> {
    // Log-concave supports are intervals, so it is enough to probe the
    // density at interior quantiles; an interior zero means the tabulated
    // values vanished somewhere inside the grid.
    for i in 1..64 {
        let u = i as f64 / 64.0;
        if d.pdf_at_quantile(u) <= 0.0 {
            return Err(Error::UnsupportedTarget);
        }
    }
    Ok(())
}

/// Exact 1D Wasserstein-2 distance via the quantile representation
/// `W2^2 = int_0^1 (Q2(u) - Q1(u))^2 du`.
pub fn w2_1d(d1: &Density1d, d2: &Density1d) -> Result<f64> {
    target_supported(d2)?;
    let delta = Density1d::quantile_inset();
    let scale = d1.std() + d2.std() + (d2.mean() - d1.mean()).abs() + 1e-9;
    let f = |u: f64| {
        let q1 = d1.quantile(u).expect("u in (0,1)");
        let q2 = d2.quantile(u).expect("u in (0,1)");
        (q2 - q1) * (q2 - q1)
    };
    let i = adaptive_simpson(&f, delta, 1.0 - delta, 1e-9 * scale * scale).max(0.0);
    Ok(i.sqrt())
}

/// Which crude Lemma-5.2 bound to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrudeBoundMode {
    /// Both measures even: `W2^2 <= 2 (Var1 + Var2)`.
    Even,
    /// Supports `[A, inf)`, `[B, inf)` with non-increasing densities:
    /// `W2 <= |B - A| + 10 sqrt(Var1 + Var2)`.
    Rays,
}

/// Upper bound on `W2(d1, d2)` from the crude transport lemma.
pub fn crude_w2_bounds(d1: &Density1d, d2: &Density1d, mode: CrudeBoundMode) -> Result<f64> {
    match mode {
        CrudeBoundMode::Even => {
            if !d1.is_even() || !d2.is_even() {
                return Err(Error::InvalidInput("even mode requires even densities".into()));
            }
            Ok((2.0 * (d1.variance() + d2.variance())).sqrt())
        }
        CrudeBoundMode::Rays => {
            let a = ray_start(d1)?;
            let b = ray_start(d2)?;
            Ok((b - a).abs() + 10.0 * (d1.variance() + d2.variance()).sqrt())
        }
    }
}

fn ray_start(d: &Density1d) -> Result<f64> {
    let s = d.support();
    if !s.lo.is_finite() || s.hi.is_finite() {
        return Err(Error::InvalidInput("rays mode requires support [A, inf)".into()));
    }
    // Non-increasing density along the ray, probed at quantiles.
    let mut prev = f64::INFINITY;
    for i in 1..64 {
        let v = d.pdf_at_quantile(i as f64 / 64.0);
        if v > prev * (1.0 + 1e-9) {
            return Err(Error::InvalidInput("rays mode requires a non-increasing density".into()));
        }
        prev = v;
    }
    Ok(s.lo)
}

/// Push-forward residual `|Phi2(F(Phi1^{-1}(u))) - u|` maximized over `n`
/// uniformly spaced thresholds; the transport invariant asserts this is tiny.
pub fn pushforward_residual(map: &TransportMap1d, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 1..=n {
        let u = i as f64 / (n + 1) as f64;
        let t = map.source().quantile(u).expect("u in (0,1)");
        let v = map.target().cdf(map.eval(t));
        worst = worst.max((v - u).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logconcave1d::density::{random_log_concave, Interval as I};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_scaling_map() {
        let m = monotone_transport(&Density1d::uniform(1.0), &Density1d::uniform(2.0)).unwrap();
        for i in 0..20 {
            let t = -0.95 + 0.1 * i as f64;
            assert_relative_eq!(m.eval(t), 2.0 * t, epsilon = 1e-9);
        }
        assert!(pushforward_residual(&m, 100) <= 1e-8);
    }

    #[test]
    fn identity_map() {
        let d = Density1d::gaussian(1.3);
        let m = monotone_transport(&d, &d).unwrap();
        for i in -5..=5 {
            let t = i as f64 / 2.0;
            assert_relative_eq!(m.eval(t), t, epsilon = 1e-9);
        }
    }

    #[test]
    fn gaussian_scaling_map() {
        let m = monotone_transport(&Density1d::gaussian(1.0), &Density1d::gaussian(3.0)).unwrap();
        for i in -8..=8 {
            let t = i as f64 / 4.0;
            assert!((m.eval(t) - 3.0 * t).abs() <= 1e-6, "t={t}");
        }
    }

    #[test]
    fn derivative_matches_change_of_variables() {
        let d1 = Density1d::uniform(1.0);
        let d2 = Density1d::uniform(2.0);
        let m = monotone_transport(&d1, &d2).unwrap();
        for i in 0..50 {
            let t = -0.98 + i as f64 * 0.04;
            let (fp, flagged) = m.derivative_flagged(t);
            assert!(!flagged);
            let lhs = d1.pdf(t);
            let rhs = fp * d2.pdf(m.eval(t));
            assert_relative_eq!(lhs, rhs, max_relative = 1e-6);
        }
    }

    #[test]
    fn w2_uniform_pair() {
        // Quadrature oracle: int_{-1}^{1} t^2 / 2 dt = 1/3.
        let w = w2_1d(&Density1d::uniform(1.0), &Density1d::uniform(2.0)).unwrap();
        assert_relative_eq!(w, (1.0f64 / 3.0).sqrt(), epsilon = 1e-6);
        let d = Density1d::gaussian(0.7);
        assert!(w2_1d(&d, &d).unwrap() <= 1e-9);
        let w = w2_1d(&Density1d::gaussian(1.0), &Density1d::gaussian(2.0)).unwrap();
        assert_relative_eq!(w, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn w2_symmetry_and_triangle_on_random_suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut suite = vec![
            Density1d::uniform(1.0),
            Density1d::uniform(2.5),
            Density1d::gaussian(1.0),
            Density1d::gaussian(0.4),
        ];
        for _ in 0..4 {
            suite.push(random_log_concave(&mut rng, 513));
        }
        for a in &suite {
            for b in &suite {
                let ab = w2_1d(a, b).unwrap();
                let ba = w2_1d(b, a).unwrap();
                assert!((ab - ba).abs() <= 1e-6);
                for c in &suite {
                    let ac = w2_1d(a, c).unwrap();
                    let cb = w2_1d(c, b).unwrap();
                    assert!(ab <= ac + cb + 1e-6, "triangle violated");
                }
            }
        }
    }

    #[test]
    fn crude_bounds_dominate_w2() {
        let d1 = Density1d::uniform(1.0);
        let d2 = Density1d::uniform(2.0);
        let bound = crude_w2_bounds(&d1, &d2, CrudeBoundMode::Even).unwrap();
        assert_relative_eq!(bound, (2.0f64 * 5.0 / 3.0).sqrt(), epsilon = 1e-12);
        assert!(w2_1d(&d1, &d2).unwrap() <= bound);

        let e0 = Density1d::exponential(1.0);
        let e1 = e0.condition(I::new(1.0, f64::INFINITY)).unwrap();
        let bound = crude_w2_bounds(&e0, &e1, CrudeBoundMode::Rays).unwrap();
        assert_relative_eq!(bound, 1.0 + 10.0 * 2.0f64.sqrt(), epsilon = 1e-6);
        assert!(w2_1d(&e0, &e1).unwrap() <= bound);
    }

    #[test]
    fn rays_mode_rejects_even_density() {
        let d = Density1d::gaussian(1.0);
        assert!(crude_w2_bounds(&d, &d, CrudeBoundMode::Rays).is_err());
        let e = Density1d::exponential(1.0);
        assert!(crude_w2_bounds(&e, &e, CrudeBoundMode::Even).is_err());
    }

    #[test]
    fn pushforward_exact_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let a = random_log_concave(&mut rng, 513);
            let b = random_log_concave(&mut rng, 513);
            let m = monotone_transport(&a, &b).unwrap();
            assert!(pushforward_residual(&m, 100) <= 1e-8);
        }
    }
}
