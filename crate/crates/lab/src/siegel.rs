//! Points of the Siegel upper half space, the symplectic action on them,
//! and seeded random sampling of evaluation sites.

use anyhow::{anyhow, bail, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use theta_code_core::symplectic::SymplecticMatrix;

/// Floor on the smallest eigenvalue of `Im(tau)`.
pub const PD_TOL: f64 = 1e-12;

/// A `g x g` complex symmetric matrix with positive definite imaginary
/// part. Symmetry and positive definiteness are validated at construction
/// and after every symplectic action.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    genus: usize,
    tau: DMatrix<Complex64>,
}

impl SiegelPoint {
    pub fn new(tau: DMatrix<Complex64>) -> Result<Self> {
        let g = tau.nrows();
        if g == 0 || tau.ncols() != g {
            bail!("tau must be a nonempty square matrix");
        }
        let scale = tau.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for i in 0..g {
            for j in 0..g {
                if (tau[(i, j)] - tau[(j, i)]).norm() > 1e-12 * scale {
                    bail!("tau is not symmetric at ({i},{j})");
                }
            }
        }
        let lam = min_im_eigenvalue(&tau);
        if lam <= PD_TOL {
            bail!("Im(tau) is not positive definite (min eigenvalue {lam:.3e})");
        }
        Ok(SiegelPoint { genus: g, tau })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn tau(&self) -> &DMatrix<Complex64> {
        &self.tau
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.tau[(i, j)]
    }

    pub fn min_im_eigenvalue(&self) -> f64 {
        min_im_eigenvalue(&self.tau)
    }

    /// `r * tau`, staying in the upper half space for `r > 0`.
    pub fn scaled(&self, r: f64) -> Result<SiegelPoint> {
        if r <= 0.0 {
            bail!("scale factor must be positive");
        }
        SiegelPoint::new(self.tau.map(|z| z * r))
    }

    /// `tau + S` for an integer symmetric matrix `S`.
    pub fn translated(&self, s: &[i64]) -> Result<SiegelPoint> {
        let g = self.genus;
        if s.len() != g * g {
            bail!("S has wrong size");
        }
        let shifted = DMatrix::from_fn(g, g, |i, j| {
            self.tau[(i, j)] + Complex64::new(s[i * g + j] as f64, 0.0)
        });
        SiegelPoint::new(shifted)
    }

    /// `-tau^{-1}` (the action of `J`).
    pub fn j_image(&self) -> Result<SiegelPoint> {
        let inv = self
            .tau
            .clone()
            .try_inverse()
            .ok_or_else(|| anyhow!("tau is numerically singular"))?;
        let neg = inv.map(|z| -z);
        // Symmetrize away inversion roundoff before revalidating.
        let sym = symmetrize(&neg);
        SiegelPoint::new(sym)
    }
}

fn symmetrize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let g = m.nrows();
    DMatrix::from_fn(g, g, |i, j| (m[(i, j)] + m[(j, i)]) * 0.5)
}

/// Smallest eigenvalue of the (symmetrized) imaginary part.
pub fn min_im_eigenvalue(tau: &DMatrix<Complex64>) -> f64 {
    let g = tau.nrows();
    let y = DMatrix::from_fn(g, g, |i, j| 0.5 * (tau[(i, j)].im + tau[(j, i)].im));
    y.symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// `sigma . tau = (A tau + B)(C tau + D)^{-1}`.
pub fn act(m: &SymplecticMatrix, tau: &SiegelPoint) -> Result<SiegelPoint> {
    let g = tau.genus();
    if m.genus() != g {
        bail!("genus mismatch: matrix {} vs point {}", m.genus(), g);
    }
    let to_c = |blk: &[i64]| {
        DMatrix::from_fn(g, g, |i, j| Complex64::new(blk[i * g + j] as f64, 0.0))
    };
    let num = to_c(&m.a) * tau.tau() + to_c(&m.b);
    let den = to_c(&m.c) * tau.tau() + to_c(&m.d);
    let den_inv = den
        .clone()
        .try_inverse()
        .ok_or_else(|| anyhow!("C*tau + D is numerically singular"))?;
    if den.norm() * den_inv.norm() > 1e12 {
        bail!("C*tau + D is too ill conditioned for a trustworthy action");
    }
    SiegelPoint::new(symmetrize(&(num * den_inv)))
}

/// Seeded random point `tau = X + iY`: `X` symmetric with entries uniform
/// in `[-1/2, 1/2] * spread`; `Y = I + ` a symmetric perturbation of the
/// same scale, shifted if needed so the smallest eigenvalue stays above
/// 0.3. `spread = 0` (non-diagonal) gives exactly `i * I`.
///
/// With `diagonal = true` the point is `diag(l_1, .., l_g)` with distinct
/// `l_k` in the genus-1 upper half plane, modelling completely reducible
/// period matrices.
pub fn random_siegel_point(g: usize, seed: u64, spread: f64, diagonal: bool) -> Result<SiegelPoint> {
    if g == 0 {
        bail!("genus must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = |rng: &mut ChaCha8Rng| rng.gen::<f64>() - 0.5;

    if diagonal {
        let mut tau = DMatrix::from_element(g, g, Complex64::new(0.0, 0.0));
        for k in 0..g {
            let x = unit(&mut rng) * spread;
            // Distinct imaginary parts: a fixed ladder plus jitter small
            // enough to keep the rungs separated.
            let y = 1.0 + 0.17 * (k as f64 + 1.0) + 0.05 * unit(&mut rng);
            tau[(k, k)] = Complex64::new(x, y);
        }
        return SiegelPoint::new(tau);
    }

    let mut x = DMatrix::from_element(g, g, 0.0f64);
    let mut p = DMatrix::from_element(g, g, 0.0f64);
    for i in 0..g {
        for j in i..g {
            let xv = unit(&mut rng) * spread;
            x[(i, j)] = xv;
            x[(j, i)] = xv;
            let pv = unit(&mut rng) * spread * 0.5;
            p[(i, j)] = pv;
            p[(j, i)] = pv;
        }
    }
    let mut y = DMatrix::identity(g, g) + p;
    let min_eig = y
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min_eig < 0.3 {
        let shift = 0.3 - min_eig;
        for k in 0..g {
            y[(k, k)] += shift;
        }
    }
    let tau = DMatrix::from_fn(g, g, |i, j| Complex64::new(x[(i, j)], y[(i, j)]));
    SiegelPoint::new(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use theta_code_core::symplectic::{j_matrix, translation};

    fn i_identity(g: usize) -> SiegelPoint {
        SiegelPoint::new(DMatrix::from_fn(g, g, |i, j| {
            Complex64::new(0.0, if i == j { 1.0 } else { 0.0 })
        }))
        .unwrap()
    }

    fn max_diff(a: &SiegelPoint, b: &SiegelPoint) -> f64 {
        (a.tau() - b.tau()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn rejects_bad_points() {
        // Asymmetric.
        let mut m = DMatrix::from_element(2, 2, Complex64::new(0.0, 1.0));
        m[(0, 1)] = Complex64::new(0.5, 1.0);
        assert!(SiegelPoint::new(m).is_err());
        // Imaginary part not positive definite.
        let m = DMatrix::from_fn(2, 2, |i, j| {
            Complex64::new(0.0, if i == j { 1.0 } else { 2.0 })
        });
        assert!(SiegelPoint::new(m).is_err());
    }

    #[test]
    fn identity_and_translation_act_as_expected() {
        let tau = random_siegel_point(2, 7, 0.5, false).unwrap();
        let id = SymplecticMatrix::identity(2);
        assert!(max_diff(&act(&id, &tau).unwrap(), &tau) < 1e-14);

        let s = [1i64, 2, 2, -1];
        let t = translation(2, &s).unwrap();
        let moved = act(&t, &tau).unwrap();
        let shifted = tau.translated(&s).unwrap();
        assert!(max_diff(&moved, &shifted) < 1e-13);
    }

    #[test]
    fn j_fixes_i_identity() {
        for g in 1..=3 {
            let tau = i_identity(g);
            let image = act(&j_matrix(g), &tau).unwrap();
            assert!(max_diff(&image, &tau) < 1e-13, "genus {g}");
        }
    }

    #[test]
    fn action_is_compatible_with_products() {
        let tau = random_siegel_point(2, 11, 0.4, false).unwrap();
        let j = j_matrix(2);
        let t = translation(2, &[1, 0, 0, 2]).unwrap();
        let m = j.matmul(&t).unwrap();
        let lhs = act(&j, &act(&t, &tau).unwrap()).unwrap();
        let rhs = act(&m, &tau).unwrap();
        assert!(max_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn random_points_are_deterministic_and_valid() {
        let a = random_siegel_point(3, 42, 0.6, false).unwrap();
        let b = random_siegel_point(3, 42, 0.6, false).unwrap();
        assert_eq!(a.tau(), b.tau());
        assert!(a.min_im_eigenvalue() > 0.25);

        let flat = random_siegel_point(2, 5, 0.0, false).unwrap();
        assert!(max_diff(&flat, &i_identity(2)) == 0.0);

        let d = random_siegel_point(4, 9, 0.3, true).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(d.entry(i, j), Complex64::new(0.0, 0.0));
                }
            }
        }
        // Distinct diagonal entries.
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert!((d.entry(i, i) - d.entry(j, j)).norm() > 1e-3);
            }
        }
    }
}
