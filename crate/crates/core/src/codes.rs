//! Binary linear codes, the canonical doubly-even self-dual
//! constructions `e8`, `e8 + e8` and `d16+`, and genus-`g` weight
//! enumerators (code polynomials).
//!
//! Codewords are bit-packed into `u32` (length is capped at 32);
//! coordinate `j` (1-based in the text format) is bit `j - 1`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::gaussian::GaussianRational;
use crate::poly::SparsePolynomial;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    length: u32,
    dimension: u32,
    generators: Vec<u32>,
    codewords: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedCode {
    E8,
    E8PlusE8,
    D16Plus,
}

impl NamedCode {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "e8" => Ok(NamedCode::E8),
            "e8_plus_e8" | "e8+e8" => Ok(NamedCode::E8PlusE8),
            "d16_plus" | "d16+" => Ok(NamedCode::D16Plus),
            other => Err(Error::UnknownName(other.into())),
        }
    }
}

impl BinaryCode {
    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn generator_rows(&self) -> &[u32] {
        &self.generators
    }

    pub fn codewords(&self) -> &[u32] {
        &self.codewords
    }

    /// Weight distribution as (weight, count) pairs, ascending by weight.
    pub fn weight_distribution(&self) -> Vec<(u32, u64)> {
        let mut counts = vec![0u64; self.length as usize + 1];
        for &w in &self.codewords {
            counts[w.count_ones() as usize] += 1;
        }
        counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(w, c)| (w as u32, c))
            .collect()
    }
}

/// Build a code from generator rows (bit-packed, length `n <= 32`).
/// Dependent rows are silently reduced away; the empty set gives the
/// zero code.
pub fn make_code(rows: &[u32], n: u32) -> Result<BinaryCode> {
    if n > 32 {
        return Err(Error::SizeGuard(format!("code length {n} > 32")));
    }
    let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for (idx, &r) in rows.iter().enumerate() {
        if r & !mask != 0 {
            return Err(Error::Precondition(format!(
                "row {idx} has bits beyond length {n}"
            )));
        }
    }
    // Reduced row echelon form over F_2, keyed on lowest set bit; the
    // basis is canonical for the row span, so rebuilding a code from its
    // own generators is the identity.
    let mut basis: Vec<u32> = Vec::new();
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            let pivot = b & b.wrapping_neg(); // lowest set bit
            if r & pivot != 0 {
                r ^= b;
            }
        }
        if r != 0 {
            basis.push(r);
        }
    }
    for idx in 0..basis.len() {
        let pivot = basis[idx] & basis[idx].wrapping_neg();
        for j in 0..basis.len() {
            if j != idx && basis[j] & pivot != 0 {
                basis[j] ^= basis[idx];
            }
        }
    }
    basis.sort_unstable();
    basis.reverse();

    let k = basis.len() as u32;
    let mut codewords = Vec::with_capacity(1usize << k);
    codewords.push(0u32);
    for &b in &basis {
        let len = codewords.len();
        for idx in 0..len {
            let w = codewords[idx] ^ b;
            codewords.push(w);
        }
    }
    codewords.sort_unstable();
    Ok(BinaryCode {
        length: n,
        dimension: k,
        generators: basis,
        codewords,
    })
}

/// Parse the ASCII code format: one 0/1 generator row per line,
/// `#` starts a comment, blank lines ignored.
pub fn parse_code_text(text: &str) -> Result<BinaryCode> {
    let mut rows: Vec<u32> = Vec::new();
    let mut n: Option<u32> = None;
    for line in text.lines() {
        let line = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let len = line.len() as u32;
        match n {
            None => n = Some(len),
            Some(expected) if expected != len => {
                return Err(Error::Parse(format!(
                    "row length {len} differs from {expected}"
                )))
            }
            _ => {}
        }
        let mut row = 0u32;
        for (j, ch) in line.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => row |= 1 << j,
                other => return Err(Error::Parse(format!("bad symbol '{other}'"))),
            }
        }
        rows.push(row);
    }
    let n = n.ok_or_else(|| Error::Parse("no generator rows found".into()))?;
    make_code(&rows, n)
}

/// Render a code in the ASCII generator format.
pub fn code_to_text(c: &BinaryCode) -> String {
    let mut out = String::new();
    for &row in &c.generators {
        for j in 0..c.length {
            out.push(if (row >> j) & 1 == 1 { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// `true` iff every codeword weight is divisible by 4, the code is
/// self-orthogonal, and `2k = n` (together: doubly-even self-dual).
pub fn is_doubly_even_self_dual(c: &BinaryCode) -> bool {
    if 2 * c.dimension != c.length {
        return false;
    }
    if c.codewords.iter().any(|w| w.count_ones() % 4 != 0) {
        return false;
    }
    // C subset of C-perp: pairwise orthogonality of the generators.
    for &a in &c.generators {
        for &b in &c.generators {
            if (a & b).count_ones() % 2 != 0 {
                return false;
            }
        }
    }
    true
}

/// Number of connected components of the graph on coordinates whose
/// edges join the supports of weight-4 codewords. Distinguishes `d16+`
/// (1 component) from `e8 + e8` (2 components).
pub fn weight4_support_components(c: &BinaryCode) -> usize {
    let n = c.length as usize;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &w in &c.codewords {
        if w.count_ones() == 4 {
            let mut first: Option<usize> = None;
            for j in 0..n {
                if (w >> j) & 1 == 1 {
                    match first {
                        None => first = Some(j),
                        Some(f) => {
                            let (a, b) = (find(&mut parent, f), find(&mut parent, j));
                            parent[a] = b;
                        }
                    }
                }
            }
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Direct sum: `C1` on the low coordinates, `C2` shifted up.
pub fn direct_sum(c1: &BinaryCode, c2: &BinaryCode) -> Result<BinaryCode> {
    let n = c1.length + c2.length;
    if n > 32 {
        return Err(Error::SizeGuard(format!("direct sum length {n} > 32")));
    }
    let mut rows: Vec<u32> = c1.generators.clone();
    rows.extend(c2.generators.iter().map(|&r| r << c1.length));
    make_code(&rows, n)
}

/// Apply a coordinate permutation (`perm[j]` is the new position of
/// coordinate `j`).
pub fn permute_coordinates(c: &BinaryCode, perm: &[u32]) -> Result<BinaryCode> {
    if perm.len() != c.length as usize {
        return Err(Error::DimensionMismatch {
            expected: c.length as usize,
            got: perm.len(),
        });
    }
    let mut rows = Vec::with_capacity(c.generators.len());
    for &r in &c.generators {
        let mut out = 0u32;
        for j in 0..c.length {
            if (r >> j) & 1 == 1 {
                out |= 1 << perm[j as usize];
            }
        }
        rows.push(out);
    }
    make_code(&rows, c.length)
}

/// The canonical named constructions. The `d16+` constructor verifies
/// doubly-even self-duality, the weight distribution `(1,28,198,28,1)`
/// and indecomposability, and fails loudly otherwise: there are exactly
/// two classes of `[16,8]` doubly-even self-dual codes, and
/// indecomposability pins `d16+` against `e8 + e8`.
pub fn named_code(name: NamedCode) -> Result<BinaryCode> {
    match name {
        NamedCode::E8 => {
            // Reed-Muller RM(1,3).
            let rows = [
                0b1111_1111u32,
                0b1010_1010, // 01010101 as a string: bits 1,3,5,7
                0b1100_1100, // 00110011
                0b1111_0000, // 00001111
            ];
            let c = make_code(&rows, 8)?;
            expect_check(c.dimension == 4, "e8 must have dimension 4")?;
            expect_check(
                c.weight_distribution() == vec![(0, 1), (4, 14), (8, 1)],
                "e8 weight distribution must be (1,14,1)",
            )?;
            expect_check(is_doubly_even_self_dual(&c), "e8 must be doubly even self-dual")?;
            Ok(c)
        }
        NamedCode::E8PlusE8 => {
            let e8 = named_code(NamedCode::E8)?;
            let c = direct_sum(&e8, &e8)?;
            expect_check(
                weight4_support_components(&c) == 2,
                "e8+e8 must decompose into two blocks",
            )?;
            Ok(c)
        }
        NamedCode::D16Plus => {
            // Seven sliding windows of 1111 two apart, plus the glue
            // vector 1010101010101010.
            let mut rows: Vec<u32> = (0..7).map(|j| 0b1111u32 << (2 * j)).collect();
            rows.push(0b0101_0101_0101_0101); // glue: coordinates 1,3,...,15
            let c = make_code(&rows, 16)?;
            expect_check(c.dimension == 8, "d16+ must have dimension 8")?;
            expect_check(
                is_doubly_even_self_dual(&c),
                "d16+ must be doubly even self-dual",
            )?;
            expect_check(
                c.weight_distribution()
                    == vec![(0, 1), (4, 28), (8, 198), (12, 28), (16, 1)],
                "d16+ weight distribution must be (1,28,198,28,1)",
            )?;
            expect_check(
                weight4_support_components(&c) == 1,
                "d16+ must be indecomposable",
            )?;
            Ok(c)
        }
    }
}

fn expect_check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ConstructionCheck(msg.into()))
    }
}

/// Genus-`g` weight enumerator
/// `W_C^(g) = sum over (c_1..c_g) in C^g of prod_i F_{(c_1i..c_gi)}`.
///
/// Refuses when `2^{kg} > 2^36` unless `force` is set.
pub fn weight_enumerator_guarded(
    c: &BinaryCode,
    g: u32,
    force: bool,
) -> Result<SparsePolynomial> {
    if g == 0 {
        return Err(Error::Precondition("genus must be positive".into()));
    }
    let kg = (c.dimension as u64) * (g as u64);
    if kg > 36 && !force {
        return Err(Error::SizeGuard(format!(
            "2^{kg} tuples exceed the 2^36 guard (pass the override to force)"
        )));
    }
    let nv = 1usize << g;
    if nv <= 16 {
        weight_enumerator_packed(c, g)
    } else {
        weight_enumerator_generic(c, g)
    }
}

pub fn weight_enumerator(c: &BinaryCode, g: u32) -> Result<SparsePolynomial> {
    weight_enumerator_guarded(c, g, false)
}

/// Fast path for `g <= 4`: exponent vectors packed into a `u128`
/// (16 counts x 8 bits), counts accumulated in machine integers and
/// converted to exact coefficients at the end.
fn weight_enumerator_packed(c: &BinaryCode, g: u32) -> Result<SparsePolynomial> {
    let nv = 1usize << g;
    let n_mask = if c.length == 32 {
        u32::MAX
    } else {
        (1u32 << c.length) - 1
    };
    let words = &c.codewords;
    let mut acc: HashMap<u128, u64> = HashMap::new();

    let g = g as usize;
    let mut tuple = vec![0usize; g];
    loop {
        // Exponent of F_a = number of coordinates whose column reads a.
        let mut key: u128 = 0;
        for a in 0..nv {
            let mut m = n_mask;
            for (k, &ti) in tuple.iter().enumerate() {
                let w = words[ti];
                m &= if (a >> k) & 1 == 1 { w } else { !w };
            }
            let count = m.count_ones() as u128;
            key |= count << (8 * a);
        }
        *acc.entry(key).or_insert(0) += 1;

        // Odometer over C^g.
        let mut pos = 0;
        loop {
            if pos == g {
                break;
            }
            tuple[pos] += 1;
            if tuple[pos] < words.len() {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
        if pos == g {
            break;
        }
    }

    SparsePolynomial::from_terms(
        g as u32,
        acc.into_iter().map(|(key, count)| {
            let exps: Vec<u32> = (0..nv).map(|a| ((key >> (8 * a)) & 0xff) as u32).collect();
            (exps, GaussianRational::from_int(count as i64))
        }),
    )
}

fn weight_enumerator_generic(c: &BinaryCode, g: u32) -> Result<SparsePolynomial> {
    let nv = 1usize << g;
    let words = &c.codewords;
    let g = g as usize;
    let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut tuple = vec![0usize; g];
    loop {
        let mut exps = vec![0u32; nv];
        for i in 0..c.length {
            let mut a = 0usize;
            for (k, &ti) in tuple.iter().enumerate() {
                if (words[ti] >> i) & 1 == 1 {
                    a |= 1 << k;
                }
            }
            exps[a] += 1;
        }
        *acc.entry(exps).or_insert(0) += 1;

        let mut pos = 0;
        loop {
            if pos == g {
                break;
            }
            tuple[pos] += 1;
            if tuple[pos] < words.len() {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
        if pos == g {
            break;
        }
    }
    SparsePolynomial::from_terms(
        g as u32,
        acc.into_iter()
            .map(|(exps, count)| (exps, GaussianRational::from_int(count as i64))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn empty_rows_give_zero_code() {
        let c = make_code(&[], 8).unwrap();
        assert_eq!(c.dimension(), 0);
        assert_eq!(c.codewords(), &[0]);
    }

    #[test]
    fn duplicate_rows_are_reduced() {
        let once = make_code(&[0b1111], 4).unwrap();
        let twice = make_code(&[0b1111, 0b1111], 4).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn e8_is_rm13() {
        let c = named_code(NamedCode::E8).unwrap();
        assert_eq!(c.length(), 8);
        assert_eq!(c.dimension(), 4);
        assert_eq!(c.codewords().len(), 16);
        assert_eq!(c.weight_distribution(), vec![(0, 1), (4, 14), (8, 1)]);
        assert!(is_doubly_even_self_dual(&c));
    }

    #[test]
    fn d16_plus_and_e8e8_share_weights_but_differ() {
        let d = named_code(NamedCode::D16Plus).unwrap();
        let ee = named_code(NamedCode::E8PlusE8).unwrap();
        assert_eq!(d.weight_distribution(), ee.weight_distribution());
        assert_eq!(
            d.weight_distribution(),
            vec![(0, 1), (4, 28), (8, 198), (12, 28), (16, 1)]
        );
        assert_eq!(weight4_support_components(&d), 1);
        assert_eq!(weight4_support_components(&ee), 2);
        assert_ne!(d, ee);
    }

    #[test]
    fn non_self_dual_rejected_by_predicate() {
        let zero8 = make_code(&[], 8).unwrap();
        assert!(!is_doubly_even_self_dual(&zero8));
        let rep2 = make_code(&[0b11], 2).unwrap();
        assert!(!is_doubly_even_self_dual(&rep2)); // weight 2 not divisible by 4
    }

    #[test]
    fn genus1_enumerators() {
        let e8 = named_code(NamedCode::E8).unwrap();
        let w = weight_enumerator(&e8, 1).unwrap();
        assert_eq!(w.coefficient(&[8, 0]), GaussianRational::from_int(1));
        assert_eq!(w.coefficient(&[4, 4]), GaussianRational::from_int(14));
        assert_eq!(w.coefficient(&[0, 8]), GaussianRational::from_int(1));
        assert_eq!(w.num_terms(), 3);

        let zero = make_code(&[], 5).unwrap();
        let wz = weight_enumerator(&zero, 1).unwrap();
        assert_eq!(wz.coefficient(&[5, 0]), GaussianRational::from_int(1));
        assert_eq!(wz.num_terms(), 1);
    }

    #[test]
    fn enumerator_at_all_ones_counts_tuples() {
        let e8 = named_code(NamedCode::E8).unwrap();
        for g in 1..=2u32 {
            let w = weight_enumerator(&e8, g).unwrap();
            let ones = vec![GaussianRational::one(); 1 << g];
            let v = w.evaluate_gaussian(&ones).unwrap();
            assert_eq!(v, GaussianRational::from_int(1 << (4 * g)));
            assert!(w.is_homogeneous());
            assert_eq!(w.degree(), 8);
        }
    }

    #[test]
    fn direct_sum_product_law_genus1() {
        use crate::poly::poly_mul;
        let e8 = named_code(NamedCode::E8).unwrap();
        let ee = direct_sum(&e8, &e8).unwrap();
        assert_eq!(ee.length(), 16);
        assert_eq!(ee.dimension(), 8);
        let left = weight_enumerator(&ee, 1).unwrap();
        let w = weight_enumerator(&e8, 1).unwrap();
        let right = poly_mul(&w, &w).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn direct_sum_with_trivial_code_is_identity() {
        let e8 = named_code(NamedCode::E8).unwrap();
        let empty = make_code(&[], 0).unwrap();
        let sum = direct_sum(&e8, &empty).unwrap();
        assert_eq!(sum, e8);
    }

    #[test]
    fn text_round_trip() {
        let d = named_code(NamedCode::D16Plus).unwrap();
        let text = code_to_text(&d);
        let back = parse_code_text(&text).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let c = parse_code_text("# e8\n11111111\n\n01010101 # row\n00110011\n00001111\n").unwrap();
        let e8 = named_code(NamedCode::E8).unwrap();
        assert_eq!(c, e8);
    }

    #[test]
    fn size_guard_fires() {
        let d = named_code(NamedCode::D16Plus).unwrap();
        assert!(matches!(
            weight_enumerator(&d, 5),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn permutation_preserves_enumerator() {
        let e8 = named_code(NamedCode::E8).unwrap();
        let perm: Vec<u32> = vec![3, 1, 4, 0, 7, 5, 2, 6];
        let p = permute_coordinates(&e8, &perm).unwrap();
        assert_eq!(
            weight_enumerator(&e8, 2).unwrap(),
            weight_enumerator(&p, 2).unwrap()
        );
    }
}
