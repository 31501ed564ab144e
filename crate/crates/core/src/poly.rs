//! Sparse multivariate polynomials over the Gaussian rationals in the
//! `2^g` variables `F_a`, `a` in `F_2^g`.
//!
//! Exponent vectors are stored dense per term (length `2^g`); terms are
//! kept in a `BTreeMap` so iteration order is the lexicographic order on
//! exponent vectors, which doubles as the canonical serialization order.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::{collections::BTreeMap, format};
use core::fmt;

use num_traits::Zero;

use crate::gaussian::GaussianRational;
use crate::matrix::UnitaryAction;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    genus: u32,
    terms: BTreeMap<Vec<u32>, GaussianRational>,
}

impl SparsePolynomial {
    pub fn num_vars(genus: u32) -> usize {
        1usize << genus
    }

    pub fn zero(genus: u32) -> Self {
        SparsePolynomial {
            genus,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(genus: u32, c: GaussianRational) -> Self {
        let mut p = Self::zero(genus);
        if !c.is_zero() {
            p.terms.insert(vec![0; Self::num_vars(genus)], c);
        }
        p
    }

    pub fn one(genus: u32) -> Self {
        Self::constant(genus, GaussianRational::one())
    }

    /// Single term `c * prod F_a^{exps[a]}`.
    pub fn monomial(genus: u32, exps: Vec<u32>, c: GaussianRational) -> Result<Self> {
        if exps.len() != Self::num_vars(genus) {
            return Err(Error::DimensionMismatch {
                expected: Self::num_vars(genus),
                got: exps.len(),
            });
        }
        let mut p = Self::zero(genus);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        Ok(p)
    }

    /// Build from raw term pairs, merging duplicates and dropping zeros.
    pub fn from_terms<I>(genus: u32, iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    {
        let nv = Self::num_vars(genus);
        let mut terms: BTreeMap<Vec<u32>, GaussianRational> = BTreeMap::new();
        for (exps, c) in iter {
            if exps.len() != nv {
                return Err(Error::DimensionMismatch {
                    expected: nv,
                    got: exps.len(),
                });
            }
            if c.is_zero() {
                continue;
            }
            match terms.entry(exps) {
                alloc::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                alloc::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += &c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Ok(SparsePolynomial { genus, terms })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> GaussianRational {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Total degree (max over terms); 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// All terms share the same total degree (vacuously true for zero).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    fn check_genus(&self, other: &Self) -> Result<()> {
        if self.genus != other.genus {
            return Err(Error::GenusMismatch {
                left: self.genus,
                right: other.genus,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_genus(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.entry(e.clone()) {
                alloc::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                alloc::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
        Ok(SparsePolynomial {
            genus: self.genus,
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial {
            genus: self.genus,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.genus);
        }
        SparsePolynomial {
            genus: self.genus,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_genus(other)?;
        let nv = Self::num_vars(self.genus);
        let mut terms: BTreeMap<Vec<u32>, GaussianRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = Vec::with_capacity(nv);
                for k in 0..nv {
                    e.push(ea[k] + eb[k]);
                }
                let c = ca * cb;
                match terms.entry(e) {
                    alloc::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    alloc::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += &c;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
        }
        Ok(SparsePolynomial {
            genus: self.genus,
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.genus);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same genus");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same genus");
            }
        }
        acc
    }

    /// Exact evaluation at a point in `Q(i)^{2^g}`.
    pub fn evaluate_gaussian(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        let nv = Self::num_vars(self.genus);
        if point.len() != nv {
            return Err(Error::DimensionMismatch {
                expected: nv,
                got: point.len(),
            });
        }
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    t *= &point[k].pow(ek);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }
}

/// `p + q` with matching genus.
pub fn poly_add(p: &SparsePolynomial, q: &SparsePolynomial) -> Result<SparsePolynomial> {
    p.add(q)
}

/// Distributive exact product `p * q`.
pub fn poly_mul(p: &SparsePolynomial, q: &SparsePolynomial) -> Result<SparsePolynomial> {
    p.mul(q)
}

/// Replace each variable `F_a` by the linear form `sum_b M[a,b] F_b`
/// and expand exactly.
///
/// The composition convention is
/// `apply(M1, apply(M2, p)) = apply(M2 * M1, p)`.
///
/// Diagonal matrices only rescale terms; the general case eliminates the
/// old variables one at a time into a fresh copy of the variable set,
/// with cached powers of each substituted linear form. This keeps the
/// cost proportional to the size of the intermediate polynomials instead
/// of expanding every monomial from scratch.
pub fn apply_matrix_substitution(
    m: &UnitaryAction,
    p: &SparsePolynomial,
) -> Result<SparsePolynomial> {
    let nv = SparsePolynomial::num_vars(p.genus());
    if m.dim() != nv {
        return Err(Error::DimensionMismatch {
            expected: nv,
            got: m.dim(),
        });
    }
    if p.is_zero() {
        return Ok(SparsePolynomial::zero(p.genus()));
    }

    if m.is_diagonal() {
        let diag: Vec<GaussianRational> = (0..nv).map(|a| m.entry(a, a).clone()).collect();
        let mut out: BTreeMap<Vec<u32>, GaussianRational> = BTreeMap::new();
        for (e, c) in p.terms() {
            let mut cc = c.clone();
            for (a, &ea) in e.iter().enumerate() {
                if ea > 0 {
                    cc *= &diag[a].pow(ea);
                }
            }
            if !cc.is_zero() {
                out.insert(e.clone(), cc);
            }
        }
        return Ok(SparsePolynomial {
            genus: p.genus(),
            terms: out,
        });
    }

    // Mixed keys: indices [0, nv) are the not-yet-substituted old
    // variables, [nv, 2nv) the target variables.
    let mut cur: BTreeMap<Vec<u32>, GaussianRational> = BTreeMap::new();
    for (e, c) in p.terms() {
        let mut key = vec![0u32; 2 * nv];
        key[..nv].copy_from_slice(e);
        cur.insert(key, c.clone());
    }

    for v in 0..nv {
        let max_e = cur.keys().map(|k| k[v]).max().unwrap_or(0);
        if max_e == 0 {
            continue;
        }
        // Cached powers of the linear form for variable v, as polynomials
        // over the target variables only.
        let linear = SparsePolynomial::from_terms(
            p.genus(),
            (0..nv).map(|b| {
                let mut e = vec![0u32; nv];
                e[b] = 1;
                (e, m.entry(v, b).clone())
            }),
        )?;
        let mut powers: Vec<SparsePolynomial> = Vec::with_capacity(max_e as usize + 1);
        powers.push(SparsePolynomial::one(p.genus()));
        for _ in 1..=max_e {
            let next = powers.last().unwrap().mul(&linear)?;
            powers.push(next);
        }

        let mut next: BTreeMap<Vec<u32>, GaussianRational> = BTreeMap::new();
        for (key, c) in cur {
            let e = key[v] as usize;
            if e == 0 {
                merge_term(&mut next, key, c);
                continue;
            }
            let mut base = key;
            base[v] = 0;
            for (pe, pc) in powers[e].terms() {
                let mut k2 = base.clone();
                for b in 0..nv {
                    k2[nv + b] += pe[b];
                }
                merge_term(&mut next, k2, c.clone() * pc);
            }
        }
        cur = next;
    }

    // All old exponents are now zero; strip to the target block.
    let terms = cur
        .into_iter()
        .map(|(k, c)| (k[nv..].to_vec(), c))
        .collect::<Vec<_>>();
    SparsePolynomial::from_terms(p.genus(), terms)
}

/// Apply the `g`-fold tensor power `M = m2 ^ (x) g` of a 2x2 action,
/// i.e. `M[a,b] = prod_k m2[a_k, b_k]` over the bits of `a` and `b`.
///
/// Equivalent to `apply_matrix_substitution` with the dense tensor power,
/// but performed as `g` pairwise stages (one per bit position), which
/// keeps every intermediate expansion local to a single variable pair.
/// This is what makes generator invariance checks feasible at genus 3+:
/// `T_g` is the tensor power of the 2x2 `T_1`.
pub fn apply_tensor_power_substitution(
    m2: &UnitaryAction,
    p: &SparsePolynomial,
) -> Result<SparsePolynomial> {
    if m2.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: m2.dim(),
        });
    }
    let mut cur = p.clone();
    for bit in 0..p.genus() {
        cur = apply_bit_stage(m2, bit, &cur)?;
    }
    Ok(cur)
}

/// One butterfly stage: substitute, for every variable pair
/// `(u, v = u | 1<<bit)`,
/// `F_u -> m[0,0] F_u + m[0,1] F_v`, `F_v -> m[1,0] F_u + m[1,1] F_v`.
fn apply_bit_stage(
    m2: &UnitaryAction,
    bit: u32,
    p: &SparsePolynomial,
) -> Result<SparsePolynomial> {
    let nv = SparsePolynomial::num_vars(p.genus());
    let mask = 1usize << bit;

    // Coefficient tables for (m00 U + m01 V)^pe * (m10 U + m11 V)^qe,
    // indexed by the power of U; keyed by (pe, qe).
    let mut cache: BTreeMap<(u32, u32), Vec<GaussianRational>> = BTreeMap::new();
    let mut table = |pe: u32, qe: u32| -> Vec<GaussianRational> {
        if let Some(t) = cache.get(&(pe, qe)) {
            return t.clone();
        }
        let mut t = vec![GaussianRational::one()];
        let grow = |a: &GaussianRational, b: &GaussianRational, reps: u32, t: &mut Vec<GaussianRational>| {
            for _ in 0..reps {
                let mut next = vec![GaussianRational::zero(); t.len() + 1];
                for (j, c) in t.iter().enumerate() {
                    next[j + 1] += &(c * a);
                    next[j] += &(c * b);
                }
                *t = next;
            }
        };
        grow(m2.entry(0, 0), m2.entry(0, 1), pe, &mut t);
        grow(m2.entry(1, 0), m2.entry(1, 1), qe, &mut t);
        cache.insert((pe, qe), t.clone());
        t
    };

    let pairs: Vec<usize> = (0..nv).filter(|u| u & mask == 0).collect();
    let mut out: BTreeMap<Vec<u32>, GaussianRational> = BTreeMap::new();
    for (e, c) in p.terms() {
        // Tables for the pairs this term actually touches.
        let active: Vec<(usize, Vec<GaussianRational>)> = pairs
            .iter()
            .filter(|&&u| e[u] + e[u | mask] > 0)
            .map(|&u| (u, table(e[u], e[u | mask])))
            .collect();
        // Odometer over the choice of U-power per active pair.
        let mut choice = vec![0usize; active.len()];
        loop {
            let mut coeff = c.clone();
            let mut key = e.clone();
            let mut zero = false;
            for (slot, &(u, ref t)) in active.iter().enumerate() {
                let r = choice[slot];
                if t[r].is_zero() {
                    zero = true;
                    break;
                }
                coeff *= &t[r];
                let total = e[u] + e[u | mask];
                key[u] = r as u32;
                key[u | mask] = total - r as u32;
            }
            if !zero {
                merge_term(&mut out, key, coeff);
            }
            // Advance the odometer.
            let mut slot = 0;
            loop {
                if slot == active.len() {
                    break;
                }
                choice[slot] += 1;
                if choice[slot] < active[slot].1.len() {
                    break;
                }
                choice[slot] = 0;
                slot += 1;
            }
            if slot == active.len() {
                break;
            }
        }
    }
    Ok(SparsePolynomial {
        genus: p.genus(),
        terms: out,
    })
}

fn merge_term(
    map: &mut BTreeMap<Vec<u32>, GaussianRational>,
    key: Vec<u32>,
    c: GaussianRational,
) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        alloc::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        alloc::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl fmt::Display for SparsePolynomial {
    /// Canonical text form: terms sorted lexicographically by exponent
    /// vector, each rendered as `(coeff) * F<a>^<e> * ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (a, &ea) in e.iter().enumerate() {
                if ea == 1 {
                    write!(f, "*F{a}")?;
                } else if ea > 1 {
                    write!(f, "*F{a}^{ea}")?;
                }
            }
        }
        Ok(())
    }
}

impl SparsePolynomial {
    /// Parse the canonical text form produced by `Display`.
    pub fn parse_text(genus: u32, s: &str) -> Result<Self> {
        let nv = Self::num_vars(genus);
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Self::zero(genus));
        }
        let mut terms: Vec<(Vec<u32>, GaussianRational)> = Vec::new();
        for raw in s.split(" + ") {
            let raw = raw.trim();
            let (coeff, rest) = if let Some(r) = raw.strip_prefix('(') {
                let close = r
                    .find(')')
                    .ok_or_else(|| Error::Parse("unbalanced coefficient parens".into()))?;
                (parse_gaussian(&r[..close])?, &r[close + 1..])
            } else {
                (GaussianRational::one(), raw)
            };
            let mut exps = vec![0u32; nv];
            for factor in rest.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    continue;
                }
                let body = factor
                    .strip_prefix('F')
                    .ok_or_else(|| Error::Parse(format!("bad factor: {factor}")))?;
                let (idx_s, e) = match body.split_once('^') {
                    Some((i, p)) => (
                        i,
                        p.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad power: {factor}")))?,
                    ),
                    None => (body, 1),
                };
                let idx: usize = idx_s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad index: {factor}")))?;
                if idx >= nv {
                    return Err(Error::Parse(format!(
                        "variable F{idx} out of range for genus {genus}"
                    )));
                }
                exps[idx] += e;
            }
            terms.push((exps, coeff));
        }
        Self::from_terms(genus, terms)
    }
}

/// Parse a Gaussian rational like "3/4", "-1+2*i", "1/2-1/2*i", "i", "-i".
pub fn parse_gaussian(s: &str) -> Result<GaussianRational> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    // Split at the sign that separates the real and imaginary parts
    // (skip a leading sign and signs inside exponents never occur here).
    let bytes = s.as_bytes();
    let mut split = None;
    for k in 1..bytes.len() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'/' {
            split = Some(k);
        }
    }
    let parse_part = |part: &str, imag: bool| -> Result<num_rational::BigRational> {
        let p = if imag {
            let p = part
                .strip_suffix("*i")
                .or_else(|| part.strip_suffix('i'))
                .ok_or_else(|| Error::Parse(format!("bad imaginary part: {part}")))?;
            if p.is_empty() || p == "+" {
                "1"
            } else if p == "-" {
                "-1"
            } else {
                p
            }
        } else {
            part
        };
        GaussianRational::rational_from_str(p)
    };
    if s.ends_with('i') {
        if let Some(k) = split {
            let re = parse_part(&s[..k], false)?;
            let im = parse_part(&s[k..], true)?;
            Ok(GaussianRational::new(re, im))
        } else {
            let im = parse_part(&s, true)?;
            Ok(GaussianRational::new(num_rational::BigRational::zero(), im))
        }
    } else {
        let re = parse_part(&s, false)?;
        Ok(GaussianRational::new(re, num_rational::BigRational::zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn mono(genus: u32, exps: &[u32]) -> SparsePolynomial {
        SparsePolynomial::monomial(genus, exps.to_vec(), GaussianRational::one()).unwrap()
    }

    #[test]
    fn add_identity_and_cancellation() {
        let p = mono(1, &[8, 0]);
        let z = SparsePolynomial::zero(1);
        assert_eq!(poly_add(&p, &z).unwrap(), p);
        assert!(poly_add(&p, &p.neg()).unwrap().is_zero());
    }

    #[test]
    fn mul_identity_and_monomials() {
        let p = mono(1, &[4, 0]);
        let q = mono(1, &[0, 4]);
        let one = SparsePolynomial::one(1);
        assert_eq!(poly_mul(&p, &one).unwrap(), p);
        assert_eq!(poly_mul(&p, &q).unwrap(), mono(1, &[4, 4]));
    }

    #[test]
    fn genus_mismatch_rejected() {
        let p = SparsePolynomial::one(1);
        let q = SparsePolynomial::one(2);
        assert!(matches!(
            poly_add(&p, &q),
            Err(Error::GenusMismatch { .. })
        ));
    }

    #[test]
    fn e8_enumerator_square_has_198() {
        // (F0^8 + 14 F0^4 F1^4 + F1^8)^2: coefficient at F0^8 F1^8 is 14^2 + 2.
        let w = w_e8_g1();
        let sq = poly_mul(&w, &w).unwrap();
        assert_eq!(sq.coefficient(&[8, 8]), GaussianRational::from_int(198));
        assert_eq!(sq.coefficient(&[16, 0]), GaussianRational::from_int(1));
        assert_eq!(sq.coefficient(&[12, 4]), GaussianRational::from_int(28));
        assert_eq!(sq.num_terms(), 5);
    }

    fn w_e8_g1() -> SparsePolynomial {
        SparsePolynomial::from_terms(
            1,
            [
                (vec![8, 0], GaussianRational::from_int(1)),
                (vec![4, 4], GaussianRational::from_int(14)),
                (vec![0, 8], GaussianRational::from_int(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn display_parse_round_trip() {
        let w = w_e8_g1().scale(&GaussianRational::from_parts(1, 2, -3, 4));
        let text = w.to_string();
        let back = SparsePolynomial::parse_text(1, &text).unwrap();
        assert_eq!(w, back);
    }

    #[test]
    fn parse_gaussian_forms() {
        assert_eq!(parse_gaussian("3/4").unwrap(), GaussianRational::from_ratio(3, 4));
        assert_eq!(
            parse_gaussian("1/2-1/2*i").unwrap(),
            GaussianRational::from_parts(1, 2, -1, 2)
        );
        assert_eq!(parse_gaussian("-i").unwrap(), -GaussianRational::i());
        assert_eq!(parse_gaussian("i").unwrap(), GaussianRational::i());
        assert_eq!(
            parse_gaussian("-2+3*i").unwrap(),
            GaussianRational::from_parts(-2, 1, 3, 1)
        );
    }
}
