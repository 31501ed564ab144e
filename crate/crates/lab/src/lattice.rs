//! Even unimodular lattices from binary codes (Construction A) and their
//! theta series at genus 1 and 2, enumerated independently of the theta
//! map for cross-checking.

use anyhow::{bail, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::siegel::SiegelPoint;
use crate::theta::ThetaValue;
use theta_code_core::codes::{is_doubly_even_self_dual, BinaryCode};

/// An even unimodular lattice. Internally the scaled coordinates
/// `w = sqrt(2) v` are integers, so all Gram data is exact.
#[derive(Debug, Clone)]
pub struct EvenLattice {
    rank: usize,
    /// Rows are basis vectors in the scaled integer coordinates `w`.
    basis_w: Vec<Vec<i64>>,
    /// Exact Gram matrix of the unscaled basis: `(w_i . w_j) / 2`.
    gram: Vec<Vec<i64>>,
    code: BinaryCode,
}

impl EvenLattice {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Basis in real coordinates (`w / sqrt(2)`), rows are vectors.
    pub fn basis(&self) -> DMatrix<f64> {
        let n = self.rank;
        DMatrix::from_fn(n, n, |i, j| self.basis_w[i][j] as f64 / 2.0f64.sqrt())
    }

    pub fn gram_determinant(&self) -> i128 {
        det_bareiss(&self.gram)
    }
}

/// Exact integer determinant (fraction-free Gaussian elimination).
fn det_bareiss(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Construction A: the lattice `{ x / sqrt(2) : x in Z^n, x mod 2 in C }`
/// for a doubly-even self-dual code `C`. Validates evenness, integrality
/// and unimodularity of the Gram matrix.
pub fn construction_a(code: &BinaryCode) -> Result<EvenLattice> {
    if !is_doubly_even_self_dual(code) {
        bail!("Construction A requires a doubly-even self-dual code");
    }
    let n = code.length() as usize;

    // Basis: the k generator rows (entries 0/1), then 2 e_j for the
    // non-pivot coordinates. Pivots of the canonical reduced basis are
    // the lowest set bits.
    let mut pivots = vec![false; n];
    let mut basis_w: Vec<Vec<i64>> = Vec::with_capacity(n);
    for &row in code.generator_rows() {
        let piv = row.trailing_zeros() as usize;
        pivots[piv] = true;
        basis_w.push((0..n).map(|j| ((row >> j) & 1) as i64).collect());
    }
    for j in 0..n {
        if !pivots[j] {
            let mut e = vec![0i64; n];
            e[j] = 2;
            basis_w.push(e);
        }
    }
    if basis_w.len() != n {
        bail!("basis construction produced {} rows, expected {n}", basis_w.len());
    }

    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let dot: i64 = (0..n).map(|t| basis_w[i][t] * basis_w[j][t]).sum();
            if dot % 2 != 0 {
                bail!("Gram entry ({i},{j}) is not integral");
            }
            gram[i][j] = dot / 2;
        }
    }
    for (i, row) in gram.iter().enumerate() {
        if row[i] % 2 != 0 {
            bail!("Gram diagonal entry {i} is odd");
        }
    }
    let lat = EvenLattice {
        rank: n,
        basis_w,
        gram,
        code: code.clone(),
    };
    let det = lat.gram_determinant();
    if det != 1 {
        bail!("Gram determinant is {det}, expected 1");
    }
    // The float basis must reproduce the Gram matrix.
    let b = lat.basis();
    let g2 = &b * b.transpose();
    for i in 0..n {
        for j in 0..n {
            if (g2[(i, j)] - lat.gram[i][j] as f64).abs() > 1e-10 {
                bail!("float basis disagrees with the exact Gram matrix");
            }
        }
    }
    Ok(lat)
}

/// Guard on the total number of enumerated vectors.
const ENUM_CAP: usize = 40_000_000;

/// All lattice vectors with `(v, v) <= max_norm`, as scaled integer
/// coordinates `w = sqrt(2) v` (so `|w|^2 <= 2 max_norm`), enumerated by
/// cosets `w = c + 2z` over the codewords `c`.
pub fn enumerate_vectors(lat: &EvenLattice, max_norm: i64) -> Result<Vec<Vec<i8>>> {
    let n = lat.rank;
    let cap_w = 2 * max_norm;
    let mut out: Vec<Vec<i8>> = Vec::new();
    let mut w = vec![0i8; n];
    for &c in lat.code.codewords() {
        rec(c, 0, 0, cap_w, n, &mut w, &mut out)?;
    }
    fn rec(
        c: u32,
        idx: usize,
        norm_so_far: i64,
        cap_w: i64,
        n: usize,
        w: &mut Vec<i8>,
        out: &mut Vec<Vec<i8>>,
    ) -> Result<()> {
        if idx == n {
            out.push(w.clone());
            if out.len() > ENUM_CAP {
                bail!("lattice enumeration cutoff is infeasible");
            }
            return Ok(());
        }
        let parity = ((c >> idx) & 1) as i64;
        // Coordinates congruent to the codeword bit mod 2, within budget.
        let mut x = parity;
        loop {
            let gain = x * x;
            if norm_so_far + gain > cap_w {
                break;
            }
            for v in [x, -x] {
                if v == x || x != 0 {
                    w[idx] = v as i8;
                    rec(c, idx + 1, norm_so_far + gain, cap_w, n, w, out)?;
                }
                if x == 0 {
                    break;
                }
            }
            x += 2;
        }
        Ok(())
    }
    Ok(out)
}

/// Theta series value with an explicit norm cutoff:
/// genus 1: `sum_v e^{pi i tau (v,v)}`; genus 2: the double sum over
/// pairs with `(v_1,v_1) + (v_2,v_2) <= cutoff`.
pub fn lattice_theta_with_cutoff(
    lat: &EvenLattice,
    tau: &SiegelPoint,
    cutoff: i64,
    tail_bound: f64,
) -> Result<ThetaValue> {
    let g = tau.genus();
    if g > 2 {
        bail!("lattice theta series is implemented for genus <= 2");
    }
    let vecs = enumerate_vectors(lat, cutoff)?;
    let n = lat.rank;
    let norm_w = |w: &[i8]| -> i64 { w.iter().map(|&x| (x as i64) * (x as i64)).sum() };

    if g == 1 {
        // Histogram over (v,v) = |w|^2 / 2.
        let mut counts = vec![0u64; cutoff as usize + 1];
        for w in &vecs {
            counts[(norm_w(w) / 2) as usize] += 1;
        }
        let t11 = tau.entry(0, 0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &cnt) in counts.iter().enumerate() {
            if cnt > 0 {
                acc += (Complex64::new(0.0, PI) * t11 * (m as f64)).exp() * (cnt as f64);
            }
        }
        return Ok(ThetaValue {
            value: acc,
            tail_bound,
        });
    }

    // Genus 2. Sort by norm so the inner loop can stop early.
    let mut vecs = vecs;
    vecs.sort_by_key(|w| norm_w(w));
    let norms: Vec<i64> = vecs.iter().map(|w| norm_w(w) / 2).collect();
    let t11 = tau.entry(0, 0);
    let t12 = tau.entry(0, 1);
    let t22 = tau.entry(1, 1);

    // exp(pi i tau_22 m) per vector, and exp(2 pi i tau_12 d) by table.
    let p22: Vec<Complex64> = norms
        .iter()
        .map(|&m| (Complex64::new(0.0, PI) * t22 * (m as f64)).exp())
        .collect();
    let dmax = cutoff;
    let base12 = (Complex64::new(0.0, 2.0 * PI) * t12).exp();
    let mut t12_table = vec![Complex64::new(0.0, 0.0); (2 * dmax + 1) as usize];
    for d in -dmax..=dmax {
        t12_table[(d + dmax) as usize] = base12.powi(d as i32);
    }

    let pair_budget: u128 = 6_000_000_000;
    let mut pairs: u128 = 0;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, w1) in vecs.iter().enumerate() {
        let m1 = norms[i];
        let rem = cutoff - m1;
        // First index whose norm exceeds the remaining budget.
        let stop = norms.partition_point(|&m| m <= rem);
        pairs += stop as u128;
        if pairs > pair_budget {
            bail!("lattice theta pair enumeration exceeds the budget");
        }
        let a1 = (Complex64::new(0.0, PI) * t11 * (m1 as f64)).exp();
        let mut inner = Complex64::new(0.0, 0.0);
        for (j, w2) in vecs.iter().take(stop).enumerate() {
            let mut dot: i64 = 0;
            for t in 0..n {
                dot += (w1[t] as i64) * (w2[t] as i64);
            }
            let d = dot / 2;
            inner += p22[j] * t12_table[(d + dmax) as usize];
        }
        acc += a1 * inner;
    }
    Ok(ThetaValue {
        value: acc,
        tail_bound,
    })
}

/// Theta series value with the cutoff chosen from `Im tau` and `tol`:
/// each discarded tuple is bounded by `exp(-pi lambda * total norm)`, and
/// shell counts are taken from the enumeration itself (a desk-scale
/// heuristic: shell growth is polynomial against the Gaussian decay).
pub fn lattice_theta(lat: &EvenLattice, tau: &SiegelPoint, tol: f64) -> Result<ThetaValue> {
    let g = tau.genus();
    if g > 2 {
        bail!("lattice theta series is implemented for genus <= 2");
    }
    let lam = tau.min_im_eigenvalue();
    // Cutoff on the total norm of the tuple.
    let mut cutoff: i64 = 4;
    loop {
        let count = enumerate_vectors(lat, cutoff)?.len() as f64;
        let tuple_count = count.powi(g as i32);
        let bound = tuple_count * (-PI * lam * (cutoff as f64 + 1.0)).exp()
            / (1.0 - (-PI * lam).exp());
        if bound < tol {
            return lattice_theta_with_cutoff(lat, tau, cutoff, bound);
        }
        cutoff += 2;
        if cutoff > 40 {
            bail!("lattice theta cutoff is infeasible for this tau / tol");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::random_siegel_point;
    use nalgebra::DMatrix;
    use theta_code_core::codes::{named_code, NamedCode};

    fn e8_lattice() -> EvenLattice {
        construction_a(&named_code(NamedCode::E8).unwrap()).unwrap()
    }

    #[test]
    fn e8_invariants_and_kissing_number() {
        let lat = e8_lattice();
        assert_eq!(lat.rank(), 8);
        assert_eq!(lat.gram_determinant(), 1);
        let vecs = enumerate_vectors(&lat, 2).unwrap();
        let norm2 = vecs
            .iter()
            .filter(|w| w.iter().map(|&x| (x as i64).pow(2)).sum::<i64>() == 4)
            .count();
        assert_eq!(norm2, 240);
    }

    #[test]
    fn d16_plus_is_even_unimodular() {
        let lat = construction_a(&named_code(NamedCode::D16Plus).unwrap()).unwrap();
        assert_eq!(lat.rank(), 16);
        assert_eq!(lat.gram_determinant(), 1);
        for (i, row) in lat.gram().iter().enumerate() {
            assert_eq!(row[i] % 2, 0);
        }
    }

    #[test]
    fn rejects_non_self_dual_codes() {
        let code = theta_code_core::codes::make_code(&[0b1111], 8).unwrap();
        assert!(construction_a(&code).is_err());
    }

    #[test]
    fn cutoff_below_shortest_vector_gives_one() {
        let lat = e8_lattice();
        let tau = SiegelPoint::new(DMatrix::from_fn(1, 1, |_, _| Complex64::new(0.0, 2.0)))
            .unwrap();
        let v = lattice_theta_with_cutoff(&lat, &tau, 0, 0.0).unwrap();
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn e8_series_leading_coefficients() {
        // theta_E8 = 1 + 240 q + 2160 q^2 + ... at tau = 2i, q = e^{-4 pi}.
        let lat = e8_lattice();
        let tau = SiegelPoint::new(DMatrix::from_fn(1, 1, |_, _| Complex64::new(0.0, 2.0)))
            .unwrap();
        let v = lattice_theta(&lat, &tau, 1e-12).unwrap();
        let q = (-4.0 * PI).exp();
        let expect = 1.0 + 240.0 * q + 2160.0 * q * q + 6720.0 * q * q * q;
        assert!((v.value.re - expect).abs() < 1e-9);
    }

    #[test]
    fn genus2_diagonal_tau_factorizes() {
        let lat = e8_lattice();
        let t2 = SiegelPoint::new(DMatrix::from_fn(2, 2, |i, j| {
            Complex64::new(0.0, if i == j { 1.5 } else { 0.0 })
        }))
        .unwrap();
        let t1 = SiegelPoint::new(DMatrix::from_fn(1, 1, |_, _| Complex64::new(0.0, 1.5)))
            .unwrap();
        let v2 = lattice_theta(&lat, &t2, 1e-10).unwrap();
        let v1 = lattice_theta(&lat, &t1, 1e-12).unwrap();
        assert!((v2.value - v1.value * v1.value).norm() / v2.value.norm() < 1e-8);
        let _ = random_siegel_point(2, 1, 0.2, false).unwrap();
    }
}
