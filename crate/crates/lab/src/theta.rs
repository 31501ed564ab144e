//! Numerical theta functions with rational characteristics: truncated
//! lattice sums with a rigorous Gaussian tail bound, second- and
//! fourth-order theta constants, and the classical identity residuals.

use anyhow::{bail, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::siegel::SiegelPoint;

/// Hard cap on the summation box radius.
pub const RADIUS_CAP: i64 = 64;

/// A truncated theta value together with a bound on the discarded tail.
#[derive(Debug, Clone, Copy)]
pub struct ThetaValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// An integral characteristic `m = (m', m'')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Characteristic {
    pub mprime: Vec<i64>,
    pub mdprime: Vec<i64>,
}

impl Characteristic {
    pub fn new(mprime: Vec<i64>, mdprime: Vec<i64>) -> Result<Self> {
        if mprime.len() != mdprime.len() || mprime.is_empty() {
            bail!("characteristic halves must be nonempty and of equal length");
        }
        Ok(Characteristic { mprime, mdprime })
    }

    pub fn genus(&self) -> usize {
        self.mprime.len()
    }

    /// `e(m) = (-1)^{(m', m'')}`.
    pub fn parity(&self) -> i32 {
        let dot: i64 = self
            .mprime
            .iter()
            .zip(&self.mdprime)
            .map(|(a, b)| a * b)
            .sum();
        if dot.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    /// All characteristics with entries in `{0,1}`, little-endian bit
    /// order in each half.
    pub fn enumerate_binary(g: usize) -> Vec<Characteristic> {
        let mut out = Vec::new();
        for hi in 0..1usize << g {
            for lo in 0..1usize << g {
                let mprime: Vec<i64> = (0..g).map(|k| ((lo >> k) & 1) as i64).collect();
                let mdprime: Vec<i64> = (0..g).map(|k| ((hi >> k) & 1) as i64).collect();
                out.push(Characteristic { mprime, mdprime });
            }
        }
        out
    }
}

/// `e(x) = exp(2 pi i x)` for complex `x`.
fn e_of(x: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * x).exp()
}

/// `theta[a; b](tau, z) = sum_m e( (1/2)(m+a)' tau (m+a) + (m+a)'(z+b) )`,
/// truncated to the box `|m|_inf <= R`.
///
/// `R` is the least radius whose Gaussian tail bound is below `tol`:
/// every summand at `|m|_inf = r` is bounded by
/// `exp(-pi lambda (r - |a|_inf)^2 + 2 pi (r + |a|_inf) |Im(z+b)|_1)`
/// with `lambda` the smallest eigenvalue of `Im(tau)`, and the tail is
/// the sum of these shell bounds. Errors if no `R <= 64` suffices.
pub fn theta(
    a: &[f64],
    b: &[f64],
    tau: &SiegelPoint,
    z: &[Complex64],
    tol: f64,
) -> Result<ThetaValue> {
    let g = tau.genus();
    if a.len() != g || b.len() != g || z.len() != g {
        bail!("characteristic / argument length must equal the genus {g}");
    }
    if !(tol > 0.0) {
        bail!("tolerance must be positive");
    }
    let lam = tau.min_im_eigenvalue();
    let amax = a.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let zb: Vec<Complex64> = (0..g).map(|k| z[k] + Complex64::new(b[k], 0.0)).collect();
    let zb_im: f64 = zb.iter().map(|w| w.im.abs()).sum();

    // Shell bounds out to where they are negligible, then the least R
    // whose suffix sum clears tol.
    let shell = |r: i64| -> f64 {
        let rr = r as f64;
        let count = (2.0 * rr + 1.0).powi(g as i32) - (2.0 * rr - 1.0).powi(g as i32);
        let t = (rr - amax).max(0.0);
        count * (-PI * lam * t * t + 2.0 * PI * (rr + amax) * zb_im).exp()
    };
    let mut shells: Vec<f64> = Vec::new();
    let mut r = 1i64;
    loop {
        let s = shell(r);
        shells.push(s);
        let past_peak = (r as f64) > amax + 2.0 * zb_im / lam.max(1e-300) + 2.0;
        if past_peak && (s < tol * 1e-9 || s < 1e-300) {
            break;
        }
        if r > 4096 {
            bail!("theta tail bound does not converge (Im tau too small)");
        }
        r += 1;
    }
    // suffix[k] = sum of shells for radius > k.
    let mut suffix = vec![0.0f64; shells.len() + 1];
    for k in (0..shells.len()).rev() {
        suffix[k] = suffix[k + 1] + shells[k];
    }
    let radius = (0..shells.len() as i64)
        .find(|&rr| suffix[rr as usize] < tol)
        .ok_or_else(|| anyhow::anyhow!("required box radius exceeds the cap"))?;
    if radius > RADIUS_CAP {
        bail!("required box radius {radius} exceeds the cap {RADIUS_CAP}");
    }
    let tail_bound = suffix[radius as usize];

    // Exact sum over the box.
    let t = tau.tau();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut m = vec![-radius; g];
    loop {
        let n: Vec<f64> = (0..g).map(|k| m[k] as f64 + a[k]).collect();
        let mut quad = Complex64::new(0.0, 0.0);
        for j in 0..g {
            for k in 0..g {
                quad += t[(j, k)] * (n[j] * n[k]);
            }
        }
        let mut lin = Complex64::new(0.0, 0.0);
        for k in 0..g {
            lin += zb[k] * n[k];
        }
        acc += e_of(quad * 0.5 + lin);

        // Advance the odometer.
        let mut k = 0;
        loop {
            if k == g {
                return Ok(ThetaValue {
                    value: acc,
                    tail_bound,
                });
            }
            m[k] += 1;
            if m[k] <= radius {
                break;
            }
            m[k] = -radius;
            k += 1;
        }
    }
}

/// `theta` at `z = 0`.
pub fn theta_constant(a: &[f64], b: &[f64], tau: &SiegelPoint, tol: f64) -> Result<ThetaValue> {
    let z = vec![Complex64::new(0.0, 0.0); tau.genus()];
    theta(a, b, tau, &z, tol)
}

/// The second-order theta constants `theta_2[a](tau) = theta[a/2; 0](2 tau, 0)`
/// for all `a` in `F_2^g`, in the global little-endian index order.
pub fn theta2_vector(tau: &SiegelPoint, tol: f64) -> Result<Vec<ThetaValue>> {
    let g = tau.genus();
    let tau2 = tau.scaled(2.0)?;
    let b = vec![0.0; g];
    let mut out = Vec::with_capacity(1 << g);
    for idx in 0..1usize << g {
        let a: Vec<f64> = (0..g).map(|k| ((idx >> k) & 1) as f64 / 2.0).collect();
        out.push(theta_constant(&a, &b, &tau2, tol)?);
    }
    Ok(out)
}

/// `vartheta_m(tau, z) = theta[m'/2; m''/2](tau, z)`.
pub fn vartheta(
    m: &Characteristic,
    tau: &SiegelPoint,
    z: &[Complex64],
    tol: f64,
) -> Result<ThetaValue> {
    let a: Vec<f64> = m.mprime.iter().map(|&x| x as f64 / 2.0).collect();
    let b: Vec<f64> = m.mdprime.iter().map(|&x| x as f64 / 2.0).collect();
    theta(&a, &b, tau, z, tol)
}

/// `|vartheta_m^2 - sum_a (-1)^{(a, m'')} theta_2[a + m'] theta_2[a]|`
/// with both sides evaluated independently; `a + m'` is taken in `F_2^g`.
pub fn addition_formula_residual(
    m: &Characteristic,
    tau: &SiegelPoint,
    tol: f64,
) -> Result<f64> {
    let g = tau.genus();
    if m.genus() != g {
        bail!("characteristic genus mismatch");
    }
    for x in m.mprime.iter().chain(&m.mdprime) {
        if !(0..=1).contains(x) {
            bail!("addition formula expects a binary characteristic");
        }
    }
    let z = vec![Complex64::new(0.0, 0.0); g];
    let lhs = vartheta(m, tau, &z, tol)?.value.powi(2);

    let t2 = theta2_vector(tau, tol)?;
    let mp_idx: usize = (0..g).map(|k| (m.mprime[k] as usize & 1) << k).sum();
    let mut rhs = Complex64::new(0.0, 0.0);
    for a in 0..1usize << g {
        let dot: i64 = (0..g)
            .map(|k| ((a >> k) & 1) as i64 * m.mdprime[k])
            .sum();
        let sign = if dot.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        rhs += t2[a ^ mp_idx].value * t2[a].value * sign;
    }
    Ok((lhs - rhs).norm())
}

/// `|theta[m'/4; 0](4 tau, 0) - 2^{-g} sum_{m'' in {0,1}^g}
///   i^{-(m', m'')} vartheta_{(m', m'')}(tau, 0)|`.
///
/// The coefficient `i^{-(m', m'')}` is forced by matching lattice cosets:
/// writing the left side over `w in m'/2 + 2Z^g` and the right side over
/// `w in m'/2 + Z^g`, averaging `exp(pi i (m'', w - m'/2))` over
/// `m'' in {0,1}^g` projects onto the even-difference coset. At `z = 0`
/// any coefficient with the same parity works for odd `m'` because the
/// odd-characteristic terms vanish identically.
pub fn fourth_order_residual(mprime: &[i64], tau: &SiegelPoint, tol: f64) -> Result<f64> {
    let g = tau.genus();
    if mprime.len() != g {
        bail!("m' length must equal the genus");
    }
    let a: Vec<f64> = mprime.iter().map(|&x| x as f64 / 4.0).collect();
    let b = vec![0.0; g];
    let tau4 = tau.scaled(4.0)?;
    let lhs = theta_constant(&a, &b, &tau4, tol)?.value;

    let i_unit = Complex64::new(0.0, 1.0);
    let z = vec![Complex64::new(0.0, 0.0); g];
    let mut rhs = Complex64::new(0.0, 0.0);
    for md in 0..1usize << g {
        let mdprime: Vec<i64> = (0..g).map(|k| ((md >> k) & 1) as i64).collect();
        let dot: i64 = mprime.iter().zip(&mdprime).map(|(x, y)| x * y).sum();
        let coeff = i_unit.powi((-dot).rem_euclid(4) as i32);
        let m = Characteristic::new(mprime.to_vec(), mdprime)?;
        rhs += vartheta(&m, tau, &z, tol)?.value * coeff;
    }
    rhs /= (1u64 << g) as f64;
    Ok((lhs - rhs).norm())
}

/// Numeric diagonal entries of `D_S`: `i^{a' S a}` at index `a`.
pub fn d_s_diagonal(s: &[i64], g: usize) -> Result<Vec<Complex64>> {
    if s.len() != g * g {
        bail!("S must be {g} x {g}");
    }
    for i in 0..g {
        for j in 0..g {
            if s[i * g + j] != s[j * g + i] {
                bail!("S must be symmetric");
            }
        }
    }
    let i_unit = Complex64::new(0.0, 1.0);
    Ok((0..1usize << g)
        .map(|a| {
            let mut quad = 0i64;
            for j in 0..g {
                if (a >> j) & 1 == 1 {
                    for k in 0..g {
                        if (a >> k) & 1 == 1 {
                            quad += s[j * g + k];
                        }
                    }
                }
            }
            i_unit.powi(quad.rem_euclid(4) as i32)
        })
        .collect())
}

/// `max_a | theta_2[a](tau + S) - (D_S)_a theta_2[a](tau) |`.
pub fn transform_residual_ts(s: &[i64], tau: &SiegelPoint, tol: f64) -> Result<f64> {
    let g = tau.genus();
    let diag = d_s_diagonal(s, g)?;
    let before = theta2_vector(tau, tol)?;
    let after = theta2_vector(&tau.translated(s)?, tol)?;
    Ok((0..1usize << g)
        .map(|a| (after[a].value - diag[a] * before[a].value).norm())
        .fold(0.0, f64::max))
}

/// Outcome of the `J`-transformation check: the residual
/// `max_a |u_a - c det(tau/i)^{1/2} v_a|` with `u = theta_2(-tau^{-1})`,
/// `v = T_g theta_2(tau)` and `c` a single fitted unimodular scalar.
#[derive(Debug, Clone, Copy)]
pub struct JTransformReport {
    pub residual: f64,
    pub scalar: Complex64,
}

pub fn transform_residual_j(tau: &SiegelPoint, tol: f64) -> Result<JTransformReport> {
    let g = tau.genus();
    let u: Vec<Complex64> = theta2_vector(&tau.j_image()?, tol)?
        .iter()
        .map(|t| t.value)
        .collect();
    let t2: Vec<Complex64> = theta2_vector(tau, tol)?.iter().map(|t| t.value).collect();

    // v = T_g t2 with T_g = ((1+i)/2)^g ((-1)^{(a,b)}).
    let scale = Complex64::new(0.5, 0.5).powi(g as i32);
    let v: Vec<Complex64> = (0..1usize << g)
        .map(|a| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, &tb) in t2.iter().enumerate() {
                if (a & b).count_ones() & 1 == 1 {
                    acc -= tb;
                } else {
                    acc += tb;
                }
            }
            acc * scale
        })
        .collect();

    // Principal branch of det(tau / i)^{1/2}.
    let minus_i = Complex64::new(0.0, -1.0);
    let det = tau.tau().map(|zz| zz * minus_i).determinant();
    let root = det.sqrt();

    let k = (0..v.len())
        .max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm()))
        .unwrap();
    if v[k].norm() < 1e-12 {
        bail!("transformed theta vector is below the noise floor");
    }
    let c = u[k] / (root * v[k]);
    let residual = (0..v.len())
        .map(|a| (u[a] - c * root * v[a]).norm())
        .fold(0.0, f64::max);
    Ok(JTransformReport {
        residual,
        scalar: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::random_siegel_point;
    use nalgebra::DMatrix;

    fn point(entries: &[(f64, f64)], g: usize) -> SiegelPoint {
        SiegelPoint::new(DMatrix::from_fn(g, g, |i, j| {
            let (re, im) = entries[i * g + j];
            Complex64::new(re, im)
        }))
        .unwrap()
    }

    fn tau_i(g: usize) -> SiegelPoint {
        SiegelPoint::new(DMatrix::from_fn(g, g, |i, j| {
            Complex64::new(0.0, if i == j { 1.0 } else { 0.0 })
        }))
        .unwrap()
    }

    #[test]
    fn genus1_reference_values() {
        // theta[0;0](2i) = 1 + 2 e^{-2 pi} + 2 e^{-8 pi} + ...
        let t = point(&[(0.0, 2.0)], 1);
        let v = theta_constant(&[0.0], &[0.0], &t, 1e-12).unwrap();
        let expect = 1.0 + 2.0 * (-2.0 * PI).exp() + 2.0 * (-8.0 * PI).exp();
        assert!((v.value.re - expect).abs() < 1e-12);
        assert!(v.value.im.abs() < 1e-12);
        assert!(v.tail_bound < 1e-12);

        // Classical theta_3(i) = pi^{1/4} / Gamma(3/4) = 1.0864348...
        let ti = tau_i(1);
        let v3 = theta_constant(&[0.0], &[0.0], &ti, 1e-12).unwrap();
        assert!((v3.value.re - 1.0864348112133080).abs() < 1e-10);
    }

    #[test]
    fn odd_characteristic_vanishes() {
        let t = point(&[(0.3, 1.1)], 1);
        let v = theta_constant(&[0.5], &[0.5], &t, 1e-12).unwrap();
        assert!(v.value.norm() <= v.tail_bound + 1e-13);
    }

    #[test]
    fn diagonal_tau_factorizes() {
        let t2 = point(
            &[(0.0, 2.0), (0.0, 0.0), (0.0, 0.0), (0.0, 2.0)],
            2,
        );
        let t1 = point(&[(0.0, 2.0)], 1);
        let v2 = theta_constant(&[0.0, 0.0], &[0.0, 0.0], &t2, 1e-12).unwrap();
        let v1 = theta_constant(&[0.0], &[0.0], &t1, 1e-12).unwrap();
        assert!((v2.value - v1.value * v1.value).norm() < 1e-10);

        // theta_2 entries also factorize entrywise.
        let q2 = theta2_vector(&t2, 1e-12).unwrap();
        let q1 = theta2_vector(&t1, 1e-12).unwrap();
        for a in 0..4usize {
            let prod = q1[a & 1].value * q1[(a >> 1) & 1].value;
            assert!((q2[a].value - prod).norm() < 1e-10, "entry {a}");
        }
    }

    #[test]
    fn theta2_genus1_reference() {
        let q = theta2_vector(&tau_i(1), 1e-12).unwrap();
        assert!((q[0].value.re - 1.0037349).abs() < 1e-6);
        assert!((q[1].value.re - 0.4157616).abs() < 1e-6);
        for t in &q {
            assert!(t.value.re > 0.0 && t.value.im.abs() < 1e-12);
        }
    }

    #[test]
    fn tail_bound_honesty() {
        let t = random_siegel_point(2, 3, 0.5, false).unwrap();
        let loose = theta_constant(&[0.5, 0.0], &[0.0, 0.5], &t, 1e-4).unwrap();
        let tight = theta_constant(&[0.5, 0.0], &[0.0, 0.5], &t, 1e-8).unwrap();
        assert!((loose.value - tight.value).norm() <= loose.tail_bound);
    }

    #[test]
    fn even_characteristic_count() {
        let even = Characteristic::enumerate_binary(2)
            .iter()
            .filter(|m| m.is_even())
            .count();
        assert_eq!(even, 10);
        let all_ones = Characteristic::new(vec![1; 3], vec![1; 3]).unwrap();
        assert_eq!(all_ones.parity(), -1);
    }

    #[test]
    fn addition_formula_small() {
        let m0 = Characteristic::new(vec![0], vec![0]).unwrap();
        let t = random_siegel_point(1, 17, 0.6, false).unwrap();
        assert!(addition_formula_residual(&m0, &t, 1e-12).unwrap() < 1e-9);

        let odd = Characteristic::new(vec![1], vec![1]).unwrap();
        assert!(addition_formula_residual(&odd, &t, 1e-12).unwrap() < 1e-10);

        let t2 = random_siegel_point(2, 18, 0.5, false).unwrap();
        for m in Characteristic::enumerate_binary(2) {
            if m.is_even() {
                assert!(addition_formula_residual(&m, &t2, 1e-12).unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn fourth_order_small() {
        let ti = tau_i(1);
        for mp in 0..4i64 {
            assert!(fourth_order_residual(&[mp], &ti, 1e-12).unwrap() < 1e-9);
        }
        let t2 = random_siegel_point(2, 19, 0.4, false).unwrap();
        assert!(fourth_order_residual(&[0, 0], &t2, 1e-12).unwrap() < 1e-9);
    }

    #[test]
    fn transform_ts_and_j() {
        let t = random_siegel_point(2, 21, 0.4, false).unwrap();
        assert!(transform_residual_ts(&[0, 0, 0, 0], &t, 1e-12).unwrap() < 1e-12);
        assert!(transform_residual_ts(&[1, 0, 0, 0], &t, 1e-12).unwrap() < 1e-9);
        assert!(transform_residual_ts(&[0, 1, 1, 0], &t, 1e-12).unwrap() < 1e-9);

        for g in 1..=2usize {
            let rep = transform_residual_j(&tau_i(g), 1e-12).unwrap();
            assert!(rep.residual < 1e-9, "genus {g}");
            assert!((rep.scalar.norm() - 1.0).abs() < 1e-9);
        }
        let t1 = point(&[(0.0, 2.0)], 1);
        assert!(transform_residual_j(&t1, 1e-12).unwrap().residual < 1e-9);
    }
}
