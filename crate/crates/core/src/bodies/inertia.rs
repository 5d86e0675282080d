//! Barycenters, covariance matrices and the inertia forms `q`/`p`, plus
//! isotropic normalization and the covariance comparability witness.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::body::{AffineMap, ConvexBody, Error, Family, Result};
use crate::num::standard_normal;

/// Barycenter, covariance and derived spectral data of a measure on a body.
#[derive(Debug, Clone)]
pub struct InertiaData {
    barycenter: DVector<f64>,
    cov: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    cov_inv: DMatrix<f64>,
}

impl InertiaData {
    pub fn new(barycenter: DVector<f64>, cov: DMatrix<f64>) -> Result<InertiaData> {
        let n = cov.nrows();
        if cov.ncols() != n || barycenter.len() != n {
            return Err(Error::InvalidBody("covariance shape mismatch".into()));
        }
        let asym = (&cov - cov.transpose()).abs().max();
        if asym > 1e-9 * cov.abs().max().max(1.0) {
            return Err(Error::InvalidBody(format!("covariance not symmetric ({asym:.3e})")));
        }
        let sym = 0.5 * (&cov + cov.transpose());
        let eig = sym.clone().symmetric_eigen();
        let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
        if eigenvalues[0] < -1e-9 {
            return Err(Error::InvalidBody(format!(
                "covariance has negative eigenvalue {}",
                eigenvalues[0]
            )));
        }
        let max = eigenvalues[eigenvalues.len() - 1].max(1e-300);
        let mut inv_diag = DMatrix::zeros(n, n);
        for i in 0..n {
            let l = eig.eigenvalues[i];
            inv_diag[(i, i)] = if l > 1e-12 * max { 1.0 / l } else { 0.0 };
        }
        let cov_inv = &eig.eigenvectors * inv_diag * eig.eigenvectors.transpose();
        Ok(InertiaData { barycenter, cov: sym, eigenvalues, cov_inv })
    }

    pub fn barycenter(&self) -> &DVector<f64> {
        &self.barycenter
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Eigenvalues in ascending order, repeated by multiplicity.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// The covariance quadratic form `q(x) = x^T Cov x`.
    pub fn q(&self, x: &DVector<f64>) -> f64 {
        (x.transpose() * &self.cov * x)[(0, 0)]
    }

    /// The dual inertia form `p(x) = x^T Cov^{-1} x`.
    pub fn p(&self, x: &DVector<f64>) -> f64 {
        (x.transpose() * &self.cov_inv * x)[(0, 0)]
    }

    /// `Cov^{-1/2}` by symmetric eigendecomposition, flooring eigenvalues at
    /// `1e-9 * max`; errors on a flat direction.
    pub fn cov_inv_sqrt(&self) -> Result<DMatrix<f64>> {
        let n = self.cov.nrows();
        let eig = self.cov.clone().symmetric_eigen();
        let max = eig.eigenvalues.max();
        let mut d = DMatrix::zeros(n, n);
        for i in 0..n {
            let l = eig.eigenvalues[i];
            if l <= 1e-9 * max {
                return Err(Error::FlatBody);
            }
            d[(i, i)] = 1.0 / l.sqrt();
        }
        Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
    }

    /// Hilbert-Schmidt distance between the covariance matrices.
    pub fn hs_distance(&self, other: &InertiaData) -> f64 {
        (&self.cov - &other.cov).norm()
    }

    /// Max-norm distance of the covariance from the identity.
    pub fn deviation_from_identity(&self) -> f64 {
        let n = self.cov.nrows();
        (&self.cov - DMatrix::identity(n, n)).abs().max()
    }
}

/// Exact inertia for boxes, ellipsoids and affine images of those families.
pub fn inertia_exact(body: &ConvexBody) -> Result<InertiaData> {
    match body.family() {
        Family::Box { half_widths } => {
            let n = half_widths.len();
            let cov = DMatrix::from_diagonal(&DVector::from_iterator(
                n,
                half_widths.iter().map(|a| a * a / 3.0),
            ));
            InertiaData::new(DVector::zeros(n), cov)
        }
        Family::Ellipsoid { shape } => {
            let n = shape.nrows();
            let cov = (shape * shape.transpose()) / (n as f64 + 2.0);
            InertiaData::new(DVector::zeros(n), cov)
        }
        Family::AffineImage { body, map } => {
            let base = inertia_exact(body)?;
            let cov = map.linear() * base.cov() * map.linear().transpose();
            let b = map.apply(base.barycenter());
            InertiaData::new(b, cov)
        }
        _ => Err(Error::UnsupportedExact),
    }
}

/// Empirical inertia from a sample matrix (rows are points).
pub fn inertia_from_points(points: &DMatrix<f64>) -> Result<InertiaData> {
    let n_samples = points.nrows();
    let dim = points.ncols();
    if n_samples < 2 {
        return Err(Error::InvalidBody("need at least 2 points".into()));
    }
    let mut mean = DVector::zeros(dim);
    for i in 0..n_samples {
        mean += points.row(i).transpose();
    }
    mean /= n_samples as f64;
    let mut cov = DMatrix::zeros(dim, dim);
    for i in 0..n_samples {
        let d = points.row(i).transpose() - &mean;
        cov += &d * d.transpose();
    }
    cov /= (n_samples - 1) as f64;
    InertiaData::new(mean, cov)
}

/// Isotropic normalization: the affine image under `x -> Cov^{-1/2}(x - b)`.
pub fn isotropic_normalize(
    body: &ConvexBody,
    inertia: &InertiaData,
) -> Result<(ConvexBody, AffineMap)> {
    let w = inertia.cov_inv_sqrt()?;
    let shift = -(&w * inertia.barycenter());
    let map = AffineMap::new(w, shift)?;
    let image = ConvexBody::affine_image(body.clone(), map.clone())?;
    Ok((image, map))
}

/// Covariance comparability over random directions: returns
/// `(max_ratio, max_ratio / R^4)`. The paper bounds the ratio by `C R^4`
/// with an unspecified `C`; the witness is reported, not asserted.
pub fn covariance_comparability<R: Rng>(
    inertia_k: &InertiaData,
    inertia_t: &InertiaData,
    r: f64,
    directions: usize,
    rng: &mut R,
) -> (f64, f64) {
    let n = inertia_k.cov().nrows();
    let mut max_ratio: f64 = 0.0;
    for _ in 0..directions {
        let mut theta = DVector::from_iterator(n, (0..n).map(|_| standard_normal(rng)));
        let norm = theta.norm();
        if norm < 1e-12 {
            continue;
        }
        theta /= norm;
        let qk = inertia_k.q(&theta);
        let qt = inertia_t.q(&theta);
        if qk <= 0.0 || qt <= 0.0 {
            continue;
        }
        max_ratio = max_ratio.max((qk / qt).max(qt / qk));
    }
    (max_ratio, max_ratio / r.powi(4))
}

/// `#{ i : |lambda_i - 1| >= delta }` over the covariance spectrum.
pub fn eigenvalue_deviation_count(inertia: &InertiaData, delta: f64) -> usize {
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
    inertia.eigenvalues().iter().filter(|l| (**l - 1.0).abs() >= delta).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn box_inertia_exact() {
        let b = ConvexBody::cube(3, 1.0);
        let d = inertia_exact(&b).unwrap();
        let e1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        assert_relative_eq!(d.q(&e1), 1.0 / 3.0, epsilon = 1e-12);
        // Isotropic cube: half-width sqrt(3) gives Cov = Id.
        let iso = inertia_exact(&ConvexBody::cube(3, 3.0f64.sqrt())).unwrap();
        assert!(iso.deviation_from_identity() <= 1e-12);
        assert_relative_eq!(iso.p(&e1), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ellipsoid_inertia_exact() {
        let b = ConvexBody::ball(3, 1.0);
        let d = inertia_exact(&b).unwrap();
        assert_relative_eq!(d.cov()[(0, 0)], 1.0 / 5.0, epsilon = 1e-12);
    }

    #[test]
    fn isotropic_normalize_box() {
        let b = ConvexBody::cube(2, 2.0);
        let inertia = inertia_exact(&b).unwrap();
        let (image, map) = isotropic_normalize(&b, &inertia).unwrap();
        // Map scale is sqrt(3)/2: box(2) -> box(sqrt 3).
        assert_relative_eq!(map.linear()[(0, 0)], 3.0f64.sqrt() / 2.0, epsilon = 1e-12);
        let check = inertia_exact(&image).unwrap();
        assert!(check.deviation_from_identity() <= 1e-9);
    }

    #[test]
    fn isotropic_normalize_diag_ellipsoid() {
        let shape = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0]));
        let b = ConvexBody::ellipsoid(shape).unwrap();
        let inertia = inertia_exact(&b).unwrap();
        let (image, _) = isotropic_normalize(&b, &inertia).unwrap();
        let check = inertia_exact(&image).unwrap();
        assert!(check.deviation_from_identity() <= 1e-9);
    }

    #[test]
    fn already_isotropic_body_maps_by_identity() {
        let b = ConvexBody::cube(3, 3.0f64.sqrt());
        let inertia = inertia_exact(&b).unwrap();
        let (_, map) = isotropic_normalize(&b, &inertia).unwrap();
        let id = DMatrix::identity(3, 3);
        assert!((map.linear() - id).abs().max() <= 1e-9);
        assert!(map.translation().norm() <= 1e-9);
    }

    #[test]
    fn comparability_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let k = inertia_exact(&ConvexBody::cube(2, 1.0)).unwrap();
        let (ratio, _) = covariance_comparability(&k, &k, 1.0, 64, &mut rng);
        assert_relative_eq!(ratio, 1.0, epsilon = 1e-12);

        // box(1) vs box(2) in n = 2: variance ratio 4 in every direction.
        let t = inertia_exact(&ConvexBody::cube(2, 2.0)).unwrap();
        let r = (3.0 / (2.0 * 2.0f64.sqrt())).powi(2);
        let (ratio, witness) = covariance_comparability(&k, &t, r, 64, &mut rng);
        assert_relative_eq!(ratio, 4.0, epsilon = 1e-12);
        assert_relative_eq!(witness, 4.0 / r.powi(4), epsilon = 1e-12);
        assert!((witness - 2.497).abs() < 5e-3);
    }

    #[test]
    fn eigen_count_examples() {
        let id = InertiaData::new(DVector::zeros(4), DMatrix::identity(4, 4)).unwrap();
        assert_eq!(eigenvalue_deviation_count(&id, 0.5), 0);
        let cov = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0, 1.0, 1.0]));
        let d = InertiaData::new(DVector::zeros(4), cov).unwrap();
        assert_eq!(eigenvalue_deviation_count(&d, 0.5), 1);
        // box(3) against the isotropic box(sqrt 3): all eigenvalues 3.
        let t = inertia_exact(&ConvexBody::cube(4, 3.0)).unwrap();
        assert_eq!(eigenvalue_deviation_count(&t, 0.5), 4);
    }

    #[test]
    fn affine_covariance_rule() {
        let base = ConvexBody::cube(2, 1.0);
        let l = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 2.0]);
        let map = AffineMap::new(l.clone(), DVector::from_vec(vec![1.0, -1.0])).unwrap();
        let img = ConvexBody::affine_image(base.clone(), map).unwrap();
        let d = inertia_exact(&img).unwrap();
        let expected = &l * inertia_exact(&base).unwrap().cov() * l.transpose();
        assert!((d.cov() - expected).abs().max() <= 1e-12);
    }
}
