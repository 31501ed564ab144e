//! Tangent-space combinatorics at a generic completely reducible point:
//! minimal generators of the `K`-invariant monomial ideal in the
//! variables `X_ij`, the closed-form dimension `t_g`, and the
//! projective-embedding obstruction `t_g > 2^g - 1`.
//!
//! Here `K` is the group of diagonal sign matrices acting by
//! `X_ij -> s_i s_j X_ij`; a monomial is invariant iff for every index
//! `i` the total degree in the off-diagonal variables touching `i` is
//! even. The minimal generators are the diagonals `X_ii`, the squares
//! `X_ij^2`, and the squarefree cycle monomials; the printed generator
//! list in the source formula writes cycles with increasing indices,
//! which under-counts against the `(h-1)!/2` term, so the enumeration
//! here takes all dihedral classes per support (matching the formula).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A monomial in the variables `X_ij`, `1 <= i <= j <= g`, stored as the
/// exponent of each unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairMonomial {
    genus: usize,
    /// exponents indexed by (i, j) with i <= j, row-major over the
    /// upper triangle
    exps: Vec<u32>,
}

fn pair_index(g: usize, i: usize, j: usize) -> usize {
    // i <= j, both 0-based; upper-triangle row-major.
    debug_assert!(i <= j && j < g);
    i * g - i * (i + 1) / 2 + j
}

pub fn num_pair_vars(g: usize) -> usize {
    g * (g + 1) / 2
}

impl PairMonomial {
    pub fn new(genus: usize, exps: Vec<u32>) -> Result<Self> {
        if exps.len() != num_pair_vars(genus) {
            return Err(Error::DimensionMismatch {
                expected: num_pair_vars(genus),
                got: exps.len(),
            });
        }
        Ok(PairMonomial { genus, exps })
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn exponent(&self, i: usize, j: usize) -> u32 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.exps[pair_index(self.genus, i, j)]
    }

    /// Invariance under the diagonal sign group: every vertex must meet
    /// the off-diagonal variables an even number of times.
    pub fn is_k_invariant(&self) -> bool {
        for v in 0..self.genus {
            let mut deg = 0u32;
            for u in 0..self.genus {
                if u != v {
                    deg += self.exponent(u, v);
                }
            }
            if deg % 2 != 0 {
                return false;
            }
        }
        true
    }

    pub fn divides(&self, other: &PairMonomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Structural classification used by the completeness check.
    pub fn classify(&self) -> MonomialShape {
        let g = self.genus;
        let deg = self.degree();
        // Single diagonal variable X_ii.
        if deg == 1 {
            for i in 0..g {
                if self.exponent(i, i) == 1 {
                    return MonomialShape::Diagonal;
                }
            }
            return MonomialShape::Other;
        }
        // Square of one off-diagonal variable.
        if deg == 2 {
            for i in 0..g {
                for j in (i + 1)..g {
                    if self.exponent(i, j) == 2 {
                        return MonomialShape::Square;
                    }
                }
            }
        }
        // Squarefree cycle: the support is a single cycle of length deg.
        if self.exps.iter().all(|&e| e <= 1) && (0..g).all(|i| self.exponent(i, i) == 0) {
            let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g];
            let mut edges = 0;
            for i in 0..g {
                for j in (i + 1)..g {
                    if self.exponent(i, j) == 1 {
                        adj[i].push(j);
                        adj[j].push(i);
                        edges += 1;
                    }
                }
            }
            let verts: Vec<usize> = (0..g).filter(|&v| !adj[v].is_empty()).collect();
            if verts.iter().all(|&v| adj[v].len() == 2) && edges == verts.len() {
                // 2-regular with #edges = #vertices; connected iff a walk
                // from any start visits every vertex.
                let start = verts[0];
                let mut visited = vec![false; g];
                let mut cur = start;
                let mut prev = usize::MAX;
                let mut count = 0;
                loop {
                    visited[cur] = true;
                    count += 1;
                    let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
                    prev = cur;
                    cur = next;
                    if cur == start {
                        break;
                    }
                }
                if count == verts.len() {
                    return MonomialShape::Cycle(count);
                }
            }
        }
        MonomialShape::Other
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for i in 0..self.genus {
            for j in i..self.genus {
                let e = self.exponent(i, j);
                if e == 1 {
                    parts.push(format!("X{}{}", i + 1, j + 1));
                } else if e > 1 {
                    parts.push(format!("X{}{}^{}", i + 1, j + 1, e));
                }
            }
        }
        parts.join("*")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialShape {
    Diagonal,
    Square,
    /// Squarefree cycle through `h` vertices.
    Cycle(usize),
    Other,
}

/// The closed-form tangent dimension
/// `t_g = g + C(g,2) + (1/2) sum_{h=3}^{g} C(g,h) (h-1)!`,
/// with the third term read as zero for `g = 1, 2`.
pub fn t_formula(g: u32) -> Result<u128> {
    if g == 0 {
        return Err(Error::Precondition("genus must be positive".into()));
    }
    if g > 30 {
        return Err(Error::SizeGuard(format!(
            "t_formula overflows u128 territory for g = {g}"
        )));
    }
    let g = g as u128;
    let choose = |n: u128, k: u128| -> u128 {
        let mut acc: u128 = 1;
        for t in 0..k {
            acc = acc * (n - t) / (t + 1);
        }
        acc
    };
    let factorial = |n: u128| -> u128 { (1..=n).product::<u128>().max(1) };
    let mut cycles2: u128 = 0; // twice the cycle count
    for h in 3..=g {
        cycles2 += choose(g, h) * factorial(h - 1);
    }
    debug_assert!(cycles2 % 2 == 0);
    Ok(g + choose(g, 2) + cycles2 / 2)
}

const BRUTE_FORCE_MAX_GENUS: u32 = 6;

/// Brute-force minimal generators of the invariant monomial ideal:
/// enumerate every `K`-invariant monomial of total degree up to `g`
/// (the Eulerian cycle decomposition bounds minimal generators by the
/// longest cycle) and keep those divisible by no smaller nonconstant
/// invariant monomial.
pub fn minimal_generators(g: u32) -> Result<Vec<PairMonomial>> {
    if g == 0 || g > BRUTE_FORCE_MAX_GENUS {
        return Err(Error::SizeGuard(format!(
            "brute-force generator enumeration supports 1 <= g <= {BRUTE_FORCE_MAX_GENUS}, got {g}"
        )));
    }
    let g = g as usize;
    let nv = num_pair_vars(g);

    // All invariant monomials of degree 1..=g, grouped by degree.
    let mut invariants: Vec<Vec<PairMonomial>> = vec![Vec::new(); g + 1];
    let mut exps = vec![0u32; nv];
    fn enumerate(
        exps: &mut Vec<u32>,
        idx: usize,
        rem: u32,
        g: usize,
        out: &mut Vec<Vec<PairMonomial>>,
    ) {
        if idx == exps.len() {
            let deg: u32 = exps.iter().sum();
            if deg >= 1 {
                let m = PairMonomial {
                    genus: g,
                    exps: exps.clone(),
                };
                if m.is_k_invariant() {
                    out[deg as usize].push(m);
                }
            }
            return;
        }
        for e in 0..=rem {
            exps[idx] = e;
            enumerate(exps, idx + 1, rem - e, g, out);
        }
        exps[idx] = 0;
    }
    enumerate(&mut exps, 0, g as u32, g, &mut invariants);

    let mut minimal: Vec<PairMonomial> = Vec::new();
    for d in 1..=g {
        'cand: for m in &invariants[d] {
            for lower in 1..d {
                for div in &invariants[lower] {
                    if div.divides(m) {
                        continue 'cand;
                    }
                }
            }
            minimal.push(m.clone());
        }
    }
    minimal.sort();
    Ok(minimal)
}

/// The embedding-obstruction report for genus `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentReport {
    pub genus: u32,
    pub t_formula: u128,
    /// Brute-force count when it ran (`g <= 6`).
    pub t_bruteforce: Option<u128>,
    /// Dimension of the ambient projective space, `2^g - 1`.
    pub ambient: u128,
    pub obstructed: bool,
}

pub fn embedding_report(g: u32) -> Result<TangentReport> {
    let t = t_formula(g)?;
    let brute = if g <= BRUTE_FORCE_MAX_GENUS {
        let gens = minimal_generators(g)?;
        let count = gens.len() as u128;
        if count != t {
            return Err(Error::ConstructionCheck(format!(
                "t_formula({g}) = {t} but brute force found {count} generators"
            )));
        }
        Some(count)
    } else {
        None
    };
    let ambient = (1u128 << g) - 1;
    Ok(TangentReport {
        genus: g,
        t_formula: t,
        t_bruteforce: brute,
        ambient,
        obstructed: t > ambient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_small_values() {
        assert_eq!(t_formula(1).unwrap(), 1);
        assert_eq!(t_formula(2).unwrap(), 3);
        assert_eq!(t_formula(3).unwrap(), 7);
        assert_eq!(t_formula(4).unwrap(), 17);
        assert_eq!(t_formula(5).unwrap(), 52);
    }

    #[test]
    fn formula_is_monotone() {
        let mut prev = 0;
        for g in 1..=12 {
            let t = t_formula(g).unwrap();
            assert!(t > prev, "t_{g} not greater than t_{}", g - 1);
            prev = t;
        }
    }

    #[test]
    fn generators_genus_2() {
        let gens = minimal_generators(2).unwrap();
        let rendered: Vec<String> = gens.iter().map(|m| m.render()).collect();
        assert_eq!(gens.len(), 3);
        assert!(rendered.contains(&"X11".into()));
        assert!(rendered.contains(&"X22".into()));
        assert!(rendered.contains(&"X12^2".into()));
    }

    #[test]
    fn generators_genus_3_include_triangle() {
        let gens = minimal_generators(3).unwrap();
        assert_eq!(gens.len(), 7);
        let rendered: Vec<String> = gens.iter().map(|m| m.render()).collect();
        assert!(rendered.contains(&"X12*X13*X23".into()));
    }

    #[test]
    fn genus_4_counts_cycles() {
        let gens = minimal_generators(4).unwrap();
        assert_eq!(gens.len(), 17);
        let cycles3 = gens
            .iter()
            .filter(|m| m.classify() == MonomialShape::Cycle(3))
            .count();
        let cycles4 = gens
            .iter()
            .filter(|m| m.classify() == MonomialShape::Cycle(4))
            .count();
        assert_eq!(cycles3, 4);
        assert_eq!(cycles4, 3);
    }

    #[test]
    fn every_generator_is_classified() {
        for g in 1..=5u32 {
            for m in minimal_generators(g).unwrap() {
                assert_ne!(
                    m.classify(),
                    MonomialShape::Other,
                    "unclassified generator {} at genus {g}",
                    m.render()
                );
            }
        }
    }

    #[test]
    fn reports_cross_threshold_at_4() {
        let r3 = embedding_report(3).unwrap();
        assert_eq!(r3.t_formula, 7);
        assert_eq!(r3.ambient, 7);
        assert!(!r3.obstructed);

        let r4 = embedding_report(4).unwrap();
        assert_eq!(r4.t_formula, 17);
        assert_eq!(r4.ambient, 15);
        assert!(r4.obstructed);

        let r1 = embedding_report(1).unwrap();
        assert_eq!(r1.t_formula, 1);
        assert!(!r1.obstructed);

        // Beyond brute force: formula only.
        let r8 = embedding_report(8).unwrap();
        assert_eq!(r8.t_bruteforce, None);
        assert!(r8.obstructed);
    }
}
