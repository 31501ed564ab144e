//! Integer symplectic matrices and congruence-subgroup membership
//! predicates. All checks here are exact integer arithmetic; the action
//! on the Siegel upper half space lives in the floating-point companion
//! crate.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// An element of `Sp(2g, Z)` in block form `[[A, B], [C, D]]`.
///
/// The symplectic relation `M' J M = J` is verified at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticMatrix {
    genus: usize,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: Vec<i64>,
    pub d: Vec<i64>,
}

fn mat_mul(g: usize, x: &[i64], y: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; g * g];
    for r in 0..g {
        for k in 0..g {
            let xv = x[r * g + k];
            if xv == 0 {
                continue;
            }
            for c in 0..g {
                out[r * g + c] += xv * y[k * g + c];
            }
        }
    }
    out
}

fn mat_transpose(g: usize, x: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; g * g];
    for r in 0..g {
        for c in 0..g {
            out[c * g + r] = x[r * g + c];
        }
    }
    out
}

fn mat_sub(x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn identity(g: usize) -> Vec<i64> {
    let mut out = vec![0i64; g * g];
    for k in 0..g {
        out[k * g + k] = 1;
    }
    out
}

impl SymplecticMatrix {
    pub fn new(genus: usize, a: Vec<i64>, b: Vec<i64>, c: Vec<i64>, d: Vec<i64>) -> Result<Self> {
        let sz = genus * genus;
        for blk in [&a, &b, &c, &d] {
            if blk.len() != sz {
                return Err(Error::DimensionMismatch {
                    expected: sz,
                    got: blk.len(),
                });
            }
        }
        let m = SymplecticMatrix { genus, a, b, c, d };
        if !m.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        Ok(m)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `M' J M = J`, i.e. `A'C = C'A`, `B'D = D'B`, `A'D - C'B = 1`.
    fn is_symplectic(&self) -> bool {
        let g = self.genus;
        let at = mat_transpose(g, &self.a);
        let bt = mat_transpose(g, &self.b);
        let ct = mat_transpose(g, &self.c);
        let atc = mat_mul(g, &at, &self.c);
        if atc != mat_transpose(g, &atc) {
            return false;
        }
        let btd = mat_mul(g, &bt, &self.d);
        if btd != mat_transpose(g, &btd) {
            return false;
        }
        let atd = mat_mul(g, &at, &self.d);
        let ctb = mat_mul(g, &ct, &self.b);
        mat_sub(&atd, &ctb) == identity(g)
    }

    pub fn identity(genus: usize) -> Self {
        SymplecticMatrix {
            genus,
            a: identity(genus),
            b: vec![0; genus * genus],
            c: vec![0; genus * genus],
            d: identity(genus),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::DimensionMismatch {
                expected: self.genus,
                got: other.genus,
            });
        }
        let g = self.genus;
        let add = |x: Vec<i64>, y: Vec<i64>| -> Vec<i64> {
            x.iter().zip(&y).map(|(a, b)| a + b).collect()
        };
        let a = add(
            mat_mul(g, &self.a, &other.a),
            mat_mul(g, &self.b, &other.c),
        );
        let b = add(
            mat_mul(g, &self.a, &other.b),
            mat_mul(g, &self.b, &other.d),
        );
        let c = add(
            mat_mul(g, &self.c, &other.a),
            mat_mul(g, &self.d, &other.c),
        );
        let d = add(
            mat_mul(g, &self.c, &other.b),
            mat_mul(g, &self.d, &other.d),
        );
        SymplecticMatrix::new(g, a, b, c, d)
    }

    pub fn neg(&self) -> Self {
        SymplecticMatrix {
            genus: self.genus,
            a: self.a.iter().map(|x| -x).collect(),
            b: self.b.iter().map(|x| -x).collect(),
            c: self.c.iter().map(|x| -x).collect(),
            d: self.d.iter().map(|x| -x).collect(),
        }
    }
}

/// The generator `J = [[0, -1], [1, 0]]`.
pub fn j_matrix(genus: usize) -> SymplecticMatrix {
    let neg_id: Vec<i64> = identity(genus).iter().map(|x| -x).collect();
    SymplecticMatrix {
        genus,
        a: vec![0; genus * genus],
        b: neg_id,
        c: identity(genus),
        d: vec![0; genus * genus],
    }
}

/// The translation generator `t(S) = [[1, S], [0, 1]]` for symmetric `S`
/// (row-major, `genus x genus`).
pub fn translation(genus: usize, s: &[i64]) -> Result<SymplecticMatrix> {
    if s.len() != genus * genus {
        return Err(Error::DimensionMismatch {
            expected: genus * genus,
            got: s.len(),
        });
    }
    if s.to_vec() != mat_transpose(genus, s) {
        return Err(Error::NotSymmetric);
    }
    Ok(SymplecticMatrix {
        genus,
        a: identity(genus),
        b: s.to_vec(),
        c: vec![0; genus * genus],
        d: identity(genus),
    })
}

/// Membership in `Gamma_g(r)` (`strict2r = false`) or `Gamma_g(r, 2r)`
/// (`strict2r = true`): the matrix is `1 mod r`, and in the strict case
/// the diagonals of `B` and `C` vanish mod `2r`.
pub fn in_gamma(m: &SymplecticMatrix, r: i64, strict2r: bool) -> bool {
    let g = m.genus;
    let id = identity(g);
    let cong = |x: &[i64], y: &[i64], modulus: i64| {
        x.iter().zip(y).all(|(a, b)| (a - b).rem_euclid(modulus) == 0)
    };
    let zero = vec![0i64; g * g];
    if !(cong(&m.a, &id, r) && cong(&m.d, &id, r) && cong(&m.b, &zero, r) && cong(&m.c, &zero, r))
    {
        return false;
    }
    if strict2r {
        for k in 0..g {
            if m.b[k * g + k].rem_euclid(2 * r) != 0 || m.c[k * g + k].rem_euclid(2 * r) != 0 {
                return false;
            }
        }
    }
    true
}

/// Membership in `Gamma*_g(2,4)`: the index-two subgroup of
/// `Gamma_g(2,4)` cut out by `tr(A - 1) = 0 mod 4`.
pub fn in_gamma_star_24(m: &SymplecticMatrix) -> bool {
    if !in_gamma(m, 2, true) {
        return false;
    }
    let g = m.genus;
    let mut tr: i64 = 0;
    for k in 0..g {
        tr += m.a[k * g + k] - 1;
    }
    tr.rem_euclid(4) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_symplectic() {
        for g in 1..=4usize {
            let j = j_matrix(g);
            assert!(j.is_symplectic());
            let mut s = vec![0i64; g * g];
            s[0] = 3;
            if g > 1 {
                s[1] = 1;
                s[g] = 1;
            }
            let t = translation(g, &s).unwrap();
            assert!(t.is_symplectic());
        }
    }

    #[test]
    fn j_squared_is_minus_identity() {
        let j = j_matrix(3);
        let jj = j.matmul(&j).unwrap();
        assert_eq!(jj, SymplecticMatrix::identity(3).neg());
    }

    #[test]
    fn translations_add() {
        let g = 2;
        let s1 = vec![1, 2, 2, 0];
        let s2 = vec![3, -1, -1, 4];
        let sum: Vec<i64> = s1.iter().zip(&s2).map(|(a, b)| a + b).collect();
        let t1 = translation(g, &s1).unwrap();
        let t2 = translation(g, &s2).unwrap();
        assert_eq!(t1.matmul(&t2).unwrap(), translation(g, &sum).unwrap());
        assert_eq!(
            translation(g, &vec![0; 4]).unwrap(),
            SymplecticMatrix::identity(g)
        );
    }

    #[test]
    fn asymmetric_translation_rejected() {
        assert!(matches!(
            translation(2, &[0, 1, 0, 0]),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn gamma_membership() {
        let g = 2;
        let id = SymplecticMatrix::identity(g);
        for r in [2i64, 4, 6] {
            assert!(in_gamma(&id, r, false));
            assert!(in_gamma(&id, r, true));
        }
        // t(2I): in Gamma(2) but diag(B) = 2, not 0 mod 4.
        let t2 = translation(g, &[2, 0, 0, 2]).unwrap();
        assert!(in_gamma(&t2, 2, false));
        assert!(!in_gamma(&t2, 2, true));
        // t(4I): passes the strict condition.
        let t4 = translation(g, &[4, 0, 0, 4]).unwrap();
        assert!(in_gamma(&t4, 2, true));
        // J is not 1 mod 2.
        assert!(!in_gamma(&j_matrix(g), 2, false));
    }

    #[test]
    fn gamma_star_trace_condition() {
        let g = 3;
        assert!(in_gamma_star_24(&SymplecticMatrix::identity(g)));
        // A = D = diag(-1, 1, 1), B = C = 0: in Gamma(2,4) but
        // tr(A - 1) = -2, not 0 mod 4.
        let mut a = identity(g);
        a[0] = -1;
        let m = SymplecticMatrix::new(g, a.clone(), vec![0; 9], vec![0; 9], a).unwrap();
        assert!(in_gamma(&m, 2, true));
        assert!(!in_gamma_star_24(&m));
        // t(4S) always qualifies.
        let s = [4, 8, 0, 8, -4, 4, 0, 4, 12];
        let t = translation(g, &s).unwrap();
        assert!(in_gamma_star_24(&t));
    }
}
