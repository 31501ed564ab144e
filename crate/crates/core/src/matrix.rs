//! Dense `2^g x 2^g` matrices over the Gaussian rationals, used for the
//! generators and elements of the finite group `H_g`.

use alloc::vec;
use alloc::vec::Vec;

use crate::gaussian::GaussianRational;
use crate::{Error, Result};

/// A unitary matrix acting on the variables `F_a`.
///
/// Unitarity (`M * M^dagger = 1`, exactly) is checked at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitaryAction {
    genus: u32,
    dim: usize,
    entries: Vec<GaussianRational>, // row-major
}

impl UnitaryAction {
    /// Build from row-major entries; fails unless the matrix is exactly unitary.
    pub fn new(genus: u32, entries: Vec<GaussianRational>) -> Result<Self> {
        let dim = 1usize << genus;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let m = UnitaryAction {
            genus,
            dim,
            entries,
        };
        if !m.is_unitary() {
            return Err(Error::NotUnitary);
        }
        Ok(m)
    }

    pub fn identity(genus: u32) -> Self {
        let dim = 1usize << genus;
        let mut entries = vec![GaussianRational::zero(); dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = GaussianRational::one();
        }
        UnitaryAction {
            genus,
            dim,
            entries,
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &GaussianRational {
        &self.entries[row * self.dim + col]
    }

    pub fn is_diagonal(&self) -> bool {
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c && !self.entry(r, c).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_unitary(&self) -> bool {
        // M * conj(M)' = 1, exactly.
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut acc = GaussianRational::zero();
                for k in 0..self.dim {
                    acc += &(self.entry(r, k) * &self.entry(c, k).conj());
                }
                let expect = if r == c {
                    GaussianRational::one()
                } else {
                    GaussianRational::zero()
                };
                if acc != expect {
                    return false;
                }
            }
        }
        true
    }

    /// Matrix product `self * other` (no unitarity re-check needed: the
    /// product of unitaries is unitary).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let dim = self.dim;
        let mut entries = vec![GaussianRational::zero(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = GaussianRational::zero();
                for k in 0..dim {
                    let a = self.entry(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc += &(a * other.entry(k, c));
                }
                entries[r * dim + c] = acc;
            }
        }
        Ok(UnitaryAction {
            genus: self.genus,
            dim,
            entries,
        })
    }

    pub fn conj_transpose(&self) -> Self {
        let dim = self.dim;
        let mut entries = vec![GaussianRational::zero(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                entries[c * dim + r] = self.entry(r, c).conj();
            }
        }
        UnitaryAction {
            genus: self.genus,
            dim,
            entries,
        }
    }

    /// For a unitary matrix the inverse is the conjugate transpose.
    pub fn inverse(&self) -> Self {
        self.conj_transpose()
    }

    pub fn negate(&self) -> Self {
        UnitaryAction {
            genus: self.genus,
            dim: self.dim,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        UnitaryAction {
            genus: self.genus,
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    /// Canonical representative of `{M, -M}`: the sign is fixed so the
    /// first nonzero entry in row-major order is not "negative"
    /// (negative real part, or zero real part and negative imaginary part).
    pub fn canonical_up_to_sign(&self) -> Self {
        for e in &self.entries {
            if !e.is_zero() {
                if e.is_canonically_negative() {
                    return self.negate();
                }
                return self.clone();
            }
        }
        self.clone()
    }

    /// Trace, used by the Molien series.
    pub fn trace(&self) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for k in 0..self.dim {
            acc += self.entry(k, k);
        }
        acc
    }

    /// Coefficients of `det(1 - t * M)` as a polynomial in `t`,
    /// degree exactly `dim`, computed by the Faddeev-LeVerrier recurrence
    /// on the exact entries.
    pub fn char_series(&self) -> Vec<GaussianRational> {
        // det(1 - tM) = t^n * p(1/t) where p is the characteristic
        // polynomial; work with power sums instead: use Newton's identities
        // on traces of powers. c_0 = 1, c_k = -(1/k) sum_{j=1}^{k} s_j c_{k-j}
        // with s_j = tr(M^j) gives det(1 - tM) = sum c_k t^k.
        let n = self.dim;
        let mut powers: Vec<GaussianRational> = Vec::with_capacity(n);
        let mut mp = self.clone();
        for j in 0..n {
            if j > 0 {
                mp = mp.matmul(self).expect("same dim");
            }
            powers.push(mp.trace());
        }
        let mut coeffs = vec![GaussianRational::zero(); n + 1];
        coeffs[0] = GaussianRational::one();
        for k in 1..=n {
            let mut acc = GaussianRational::zero();
            for j in 1..=k {
                acc += &(&powers[j - 1] * &coeffs[k - j]);
            }
            let minus_inv_k = GaussianRational::from_ratio(-1, k as i64);
            coeffs[k] = &acc * &minus_inv_k;
        }
        coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_unitary_and_diagonal() {
        let id = UnitaryAction::identity(2);
        assert!(id.is_unitary());
        assert!(id.is_diagonal());
        assert_eq!(id.matmul(&id).unwrap(), id);
    }

    #[test]
    fn non_unitary_rejected() {
        let two = GaussianRational::from_int(2);
        let entries = vec![
            two,
            GaussianRational::zero(),
            GaussianRational::zero(),
            GaussianRational::one(),
        ];
        assert!(matches!(UnitaryAction::new(1, entries), Err(Error::NotUnitary)));
    }

    #[test]
    fn canonical_sign_picks_one_representative() {
        let id = UnitaryAction::identity(1);
        let neg = id.negate();
        assert_eq!(id.canonical_up_to_sign(), neg.canonical_up_to_sign());
    }

    #[test]
    fn char_series_of_identity() {
        // det(1 - t) for the 2x2 identity: (1-t)^2 = 1 - 2t + t^2.
        let id = UnitaryAction::identity(1);
        let c = id.char_series();
        assert_eq!(c[0], GaussianRational::one());
        assert_eq!(c[1], GaussianRational::from_int(-2));
        assert_eq!(c[2], GaussianRational::one());
    }
}
