//! The finite unitary group `H_g` generated by `T_g` and the diagonal
//! matrices `D_S`, its closure up to sign, invariance checking, the
//! Reynolds projection and Molien dimension counts.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::gaussian::GaussianRational;
use crate::matrix::UnitaryAction;
use crate::poly::{
    apply_matrix_substitution, apply_tensor_power_substitution, SparsePolynomial,
};
use crate::{Error, Result};

/// `D_S = diag(i^{a' S a})` for a symmetric integer matrix `S`.
pub fn d_s_matrix(s: &[Vec<i64>]) -> Result<UnitaryAction> {
    let g = s.len();
    for row in s {
        if row.len() != g {
            return Err(Error::DimensionMismatch {
                expected: g,
                got: row.len(),
            });
        }
    }
    for j in 0..g {
        for k in 0..g {
            if s[j][k] != s[k][j] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let dim = 1usize << g;
    let mut entries = vec![GaussianRational::zero(); dim * dim];
    for a in 0..dim {
        let mut quad: i64 = 0;
        for j in 0..g {
            if (a >> j) & 1 == 1 {
                for k in 0..g {
                    if (a >> k) & 1 == 1 {
                        quad += s[j][k];
                    }
                }
            }
        }
        entries[a * dim + a] = GaussianRational::i_pow(quad);
    }
    UnitaryAction::new(g as u32, entries)
}

/// `T_g = ((1+i)/2)^g * ((-1)^{(a,b)})_{a,b}`.
pub fn t_g_matrix(g: u32) -> UnitaryAction {
    let dim = 1usize << g;
    let scale = GaussianRational::from_parts(1, 2, 1, 2).pow(g);
    let mut entries = vec![GaussianRational::zero(); dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let parity = (a & b).count_ones() & 1;
            entries[a * dim + b] = if parity == 1 { -&scale } else { scale.clone() };
        }
    }
    UnitaryAction::new(g, entries).expect("T_g is unitary by construction")
}

/// The generating set of symmetric matrices: the diagonal units `E_ii`
/// and the matrices `E_ij + E_ji` for `i < j`. Every `D_S` is a product
/// of the corresponding `D`'s (the quadratic form `a'Sa` is linear in `S`).
pub fn symmetric_generators(g: u32) -> Vec<(String, Vec<Vec<i64>>)> {
    let g = g as usize;
    let mut out = Vec::new();
    for i in 0..g {
        let mut s = vec![vec![0i64; g]; g];
        s[i][i] = 1;
        out.push((format!("E_{}{}", i + 1, i + 1), s));
    }
    for i in 0..g {
        for j in (i + 1)..g {
            let mut s = vec![vec![0i64; g]; g];
            s[i][j] = 1;
            s[j][i] = 1;
            out.push((format!("E_{}{}+E_{}{}", i + 1, j + 1, j + 1, i + 1), s));
        }
    }
    out
}

/// The generators of `H_g` with display names: `T_g` first, then the `D_S`.
pub fn generators(g: u32) -> Vec<(String, UnitaryAction)> {
    let mut out = vec![(format!("T_{g}"), t_g_matrix(g))];
    for (name, s) in symmetric_generators(g) {
        out.push((
            format!("D[{name}]"),
            d_s_matrix(&s).expect("generator S is symmetric"),
        ));
    }
    out
}

/// The group `H_g` enumerated up to a global sign (`+-M` identified).
#[derive(Debug, Clone)]
pub struct GroupClosure {
    genus: u32,
    elements: Vec<UnitaryAction>,
}

impl GroupClosure {
    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[UnitaryAction] {
        &self.elements
    }
}

const CLOSURE_CAP: usize = 1_000_000;

/// BFS closure of the generators, canonicalized up to sign.
///
/// Restricted to `g <= 2`; at genus 3 the group is too large for dense
/// exact matrices to be worthwhile (and nothing downstream needs it:
/// invariance checking only uses the generators).
pub fn group_closure(g: u32) -> Result<GroupClosure> {
    if g == 0 || g > 2 {
        return Err(Error::SizeGuard(format!(
            "group closure is only supported for genus 1 and 2, got {g}"
        )));
    }
    let gens: Vec<UnitaryAction> = generators(g).into_iter().map(|(_, m)| m).collect();
    let mut seen: HashSet<UnitaryAction> = HashSet::new();
    let mut elements: Vec<UnitaryAction> = Vec::new();
    let mut queue: Vec<UnitaryAction> = Vec::new();

    let id = UnitaryAction::identity(g).canonical_up_to_sign();
    seen.insert(id.clone());
    elements.push(id.clone());
    queue.push(id);

    while let Some(m) = queue.pop() {
        for gen in &gens {
            let next = m.matmul(gen)?.canonical_up_to_sign();
            if seen.insert(next.clone()) {
                if elements.len() >= CLOSURE_CAP {
                    return Err(Error::SizeGuard(format!(
                        "closure exceeded {CLOSURE_CAP} elements"
                    )));
                }
                elements.push(next.clone());
                queue.push(next);
            }
        }
    }
    Ok(GroupClosure { genus: g, elements })
}

/// Check `H_g`-invariance of a homogeneous even-degree polynomial by
/// exact substitution of the generators. Returns the name of the first
/// failing generator, or `None` when invariant.
///
/// Generator invariance implies group invariance, and even degree kills
/// the sign ambiguity of `H_g / +-1`.
pub fn check_invariance_detail(p: &SparsePolynomial) -> Result<Option<String>> {
    if p.is_zero() {
        return Ok(None);
    }
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let d = p.degree();
    if d % 2 == 1 {
        return Err(Error::OddDegree(d as usize));
    }
    // T_g = T_1 ^ (x) g, so use the pairwise tensor substitution, which
    // stays tractable at genus 3+ where the dense path does not.
    let image = apply_tensor_power_substitution(&t_g_matrix(1), p)?;
    if image != *p {
        return Ok(Some(format!("T_{}", p.genus())));
    }
    for (name, s) in symmetric_generators(p.genus()) {
        let m = d_s_matrix(&s)?;
        let image = apply_matrix_substitution(&m, p)?;
        if image != *p {
            return Ok(Some(format!("D[{name}]")));
        }
    }
    Ok(None)
}

pub fn check_invariance(p: &SparsePolynomial) -> Result<bool> {
    Ok(check_invariance_detail(p)?.is_none())
}

/// Reynolds projection `(1/|G|) sum_M apply(M, p)` over the sign-reduced
/// closure. For even-degree input this agrees with averaging over the
/// full group, since `M` and `-M` act identically in even degree.
pub fn reynolds_project(
    p: &SparsePolynomial,
    closure: &GroupClosure,
) -> Result<SparsePolynomial> {
    if p.genus() != closure.genus {
        return Err(Error::GenusMismatch {
            left: p.genus(),
            right: closure.genus,
        });
    }
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let d = p.degree();
    if d % 2 == 1 {
        return Err(Error::OddDegree(d as usize));
    }
    let mut acc = SparsePolynomial::zero(p.genus());
    for m in &closure.elements {
        acc = acc.add(&apply_matrix_substitution(m, p)?)?;
    }
    let inv_order = GaussianRational::from_ratio(1, closure.elements.len() as i64);
    Ok(acc.scale(&inv_order))
}

/// Dimension of the space of `H_g`-invariant homogeneous polynomials of
/// even degree `d`, by exact Molien averaging:
/// `(1/|G|) sum_M [t^d] 1/det(1 - t M)`.
pub fn molien_dimension(closure: &GroupClosure, d: u32) -> Result<u64> {
    if d % 2 == 1 {
        return Err(Error::OddDegree(d as usize));
    }
    let d = d as usize;
    let mut total = GaussianRational::zero();
    for m in &closure.elements {
        let c = m.char_series();
        // Invert the series det(1 - tM) = sum c_k t^k up to order d.
        let n = c.len() - 1;
        let mut q = vec![GaussianRational::zero(); d + 1];
        q[0] = GaussianRational::one();
        for k in 1..=d {
            let mut acc = GaussianRational::zero();
            for j in 1..=k.min(n) {
                acc += &(&c[j] * &q[k - j]);
            }
            q[k] = -acc;
        }
        total += &q[d];
    }
    let inv_order = GaussianRational::from_ratio(1, closure.elements.len() as i64);
    let avg = &total * &inv_order;

    // The average must be a non-negative rational integer.
    use num_traits::{ToPrimitive, Zero};
    if !avg.im.is_zero() || !avg.re.is_integer() {
        return Err(Error::Precondition(format!(
            "Molien average is not an integer: {avg}"
        )));
    }
    avg.re
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Precondition("Molien average out of range".into()))
}

/// All exponent vectors of total degree `d` in `nv` variables,
/// lexicographic order.
pub fn monomials_of_degree(nv: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nv];
    fn rec(cur: &mut Vec<u32>, idx: usize, rem: u32, out: &mut Vec<Vec<u32>>) {
        if idx == cur.len() - 1 {
            cur[idx] = rem;
            out.push(cur.clone());
            return;
        }
        for e in 0..=rem {
            cur[idx] = e;
            rec(cur, idx + 1, rem - e, out);
        }
    }
    rec(&mut cur, 0, d, &mut out);
    out
}

/// Rank of the Reynolds projection restricted to the degree-`d`
/// monomials, i.e. the dimension of the invariant subspace, computed by
/// exact Gaussian elimination. Independent cross-check for
/// `molien_dimension`.
pub fn reynolds_rank(closure: &GroupClosure, d: u32) -> Result<usize> {
    if d % 2 == 1 {
        return Err(Error::OddDegree(d as usize));
    }
    let nv = 1usize << closure.genus;
    let monos = monomials_of_degree(nv, d);
    let col_index: hashbrown::HashMap<Vec<u32>, usize> = monos
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, m)| (m, k))
        .collect();

    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    for mono in &monos {
        let p = SparsePolynomial::monomial(closure.genus, mono.clone(), GaussianRational::one())?;
        let proj = reynolds_project(&p, closure)?;
        let mut row = vec![GaussianRational::zero(); monos.len()];
        for (e, c) in proj.terms() {
            row[col_index[e]] = c.clone();
        }
        rows.push(row);
    }

    // Row echelon over Q(i).
    let mut rank = 0usize;
    let ncols = monos.len();
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inv();
        for c in col..ncols {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let delta = &rows[rank][c] * &factor;
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn d_s_small_cases() {
        // g=1, S=(0): identity.
        let d0 = d_s_matrix(&[vec![0]]).unwrap();
        assert_eq!(d0, UnitaryAction::identity(1));
        // g=1, S=(1): diag(1, i).
        let d1 = d_s_matrix(&[vec![1]]).unwrap();
        assert_eq!(*d1.entry(0, 0), GaussianRational::one());
        assert_eq!(*d1.entry(1, 1), GaussianRational::i());
        // g=2, S=[[0,1],[1,0]]: a'Sa = 2 a1 a2, so diag(1,1,1,-1).
        let d = d_s_matrix(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(*d.entry(0, 0), GaussianRational::one());
        assert_eq!(*d.entry(1, 1), GaussianRational::one());
        assert_eq!(*d.entry(2, 2), GaussianRational::one());
        assert_eq!(*d.entry(3, 3), -GaussianRational::one());
    }

    #[test]
    fn d_s_rejects_asymmetric() {
        assert!(matches!(
            d_s_matrix(&[vec![0, 1], vec![0, 0]]),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn t_g_squares_to_i_power_g() {
        for g in 1..=4u32 {
            let t = t_g_matrix(g);
            let t2 = t.matmul(&t).unwrap();
            let expect = UnitaryAction::identity(g).scale(&GaussianRational::i_pow(g as i64));
            assert_eq!(t2, expect, "T_{g}^2 != i^{g} * 1");
        }
    }

    #[test]
    fn t_1_entries() {
        let t = t_g_matrix(1);
        let c = GaussianRational::from_parts(1, 2, 1, 2);
        assert_eq!(*t.entry(0, 0), c);
        assert_eq!(*t.entry(0, 1), c);
        assert_eq!(*t.entry(1, 0), c);
        assert_eq!(*t.entry(1, 1), -&c);
    }

    #[test]
    fn d_s_depends_on_diag_mod4_offdiag_mod2() {
        // a'Sa = sum s_ii a_i + 2 sum_{i<j} s_ij a_i a_j.
        let a = d_s_matrix(&[vec![1, 3], vec![3, 2]]).unwrap();
        let b = d_s_matrix(&[vec![5, 1], vec![1, 6]]).unwrap();
        assert_eq!(a, b);
        let c = d_s_matrix(&[vec![2, 1], vec![1, 6]]).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn genus1_closure_contains_generators() {
        let cls = group_closure(1).unwrap();
        let t = t_g_matrix(1).canonical_up_to_sign();
        let d = d_s_matrix(&[vec![1]]).unwrap().canonical_up_to_sign();
        assert!(cls.elements().contains(&t));
        assert!(cls.elements().contains(&d));
        assert!(cls.order() > 1);
        // Regression value: recorded after first computation.
        assert_eq!(cls.order(), genus1_order_regression());
    }

    // |H_1 / +-1| as first computed by the BFS closure: a regression
    // pin recorded after the first run, not an external value.
    fn genus1_order_regression() -> usize {
        48
    }

    #[test]
    fn closure_guard_for_genus_3() {
        assert!(matches!(group_closure(3), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn w_e8_is_invariant_and_f0_8_is_not() {
        let w = SparsePolynomial::from_terms(
            1,
            [
                (vec![8, 0], GaussianRational::from_int(1)),
                (vec![4, 4], GaussianRational::from_int(14)),
                (vec![0, 8], GaussianRational::from_int(1)),
            ],
        )
        .unwrap();
        assert_eq!(check_invariance_detail(&w).unwrap(), None);

        let f08 = SparsePolynomial::monomial(1, vec![8, 0], GaussianRational::one()).unwrap();
        let fail = check_invariance_detail(&f08).unwrap();
        assert_eq!(fail.as_deref(), Some("T_1"));

        let zero = SparsePolynomial::zero(1);
        assert!(check_invariance(&zero).unwrap());
    }

    #[test]
    fn tensor_substitution_matches_dense_t2() {
        use crate::poly::apply_tensor_power_substitution;
        let p = SparsePolynomial::from_terms(
            2,
            [
                (vec![3, 1, 0, 0], GaussianRational::from_parts(1, 2, -2, 3)),
                (vec![0, 2, 1, 1], GaussianRational::from_int(5)),
                (vec![1, 1, 1, 1], GaussianRational::i()),
                (vec![0, 0, 0, 4], GaussianRational::from_ratio(-7, 4)),
            ],
        )
        .unwrap();
        let dense = apply_matrix_substitution(&t_g_matrix(2), &p).unwrap();
        let tensor = apply_tensor_power_substitution(&t_g_matrix(1), &p).unwrap();
        assert_eq!(dense, tensor);
    }

    #[test]
    fn odd_degree_rejected() {
        let p = SparsePolynomial::monomial(1, vec![3, 0], GaussianRational::one()).unwrap();
        assert!(matches!(check_invariance(&p), Err(Error::OddDegree(3))));
    }

    #[test]
    fn reynolds_is_idempotent_and_invariant() {
        let cls = group_closure(1).unwrap();
        let f08 = SparsePolynomial::monomial(1, vec![8, 0], GaussianRational::one()).unwrap();
        let proj = reynolds_project(&f08, &cls).unwrap();
        assert!(!proj.is_zero());
        assert!(check_invariance(&proj).unwrap());
        let proj2 = reynolds_project(&proj, &cls).unwrap();
        assert_eq!(proj, proj2);
    }

    #[test]
    fn molien_degree_zero_is_one() {
        let cls = group_closure(1).unwrap();
        assert_eq!(molien_dimension(&cls, 0).unwrap(), 1);
    }

    #[test]
    fn molien_matches_reynolds_rank_small() {
        let cls = group_closure(1).unwrap();
        for d in [2u32, 4, 8] {
            assert_eq!(
                molien_dimension(&cls, d).unwrap() as usize,
                reynolds_rank(&cls, d).unwrap(),
                "degree {d}"
            );
        }
    }
}
