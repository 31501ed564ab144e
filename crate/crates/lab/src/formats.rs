//! File and JSON interchange: polynomials, Siegel points, symplectic
//! matrices and codes. CLI arguments may be inline JSON (starting with
//! `{`) or a path to a file holding it.

use anyhow::{bail, Context, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;

use crate::siegel::SiegelPoint;
use theta_code_core::codes::{named_code, parse_code_text, BinaryCode, NamedCode};
use theta_code_core::gaussian::{rational_string, GaussianRational};
use theta_code_core::poly::{parse_gaussian, SparsePolynomial};
use theta_code_core::symplectic::SymplecticMatrix;

/// Resolve an argument that is either inline JSON / text or a file path.
pub fn inline_or_file(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub genus: u32,
    pub terms: Vec<TermJson>,
}

pub fn poly_to_json(p: &SparsePolynomial) -> PolyJson {
    PolyJson {
        genus: p.genus(),
        terms: p
            .terms()
            .map(|(e, c)| TermJson {
                exps: e.clone(),
                re: rational_string(&c.re),
                im: rational_string(&c.im),
            })
            .collect(),
    }
}

pub fn poly_from_json(j: &PolyJson) -> Result<SparsePolynomial> {
    let terms: Result<Vec<(Vec<u32>, GaussianRational)>> = j
        .terms
        .iter()
        .map(|t| {
            let re = GaussianRational::rational_from_str(&t.re)?;
            let im = GaussianRational::rational_from_str(&t.im)?;
            Ok((t.exps.clone(), GaussianRational::new(re, im)))
        })
        .collect();
    Ok(SparsePolynomial::from_terms(j.genus, terms?)?)
}

/// Parse a polynomial from JSON (`{"genus": .., "terms": ..}`) or the
/// canonical text form `(coeff)*F0^2*F3 + ..` with a leading
/// `genus: G` line.
pub fn parse_polynomial(text: &str) -> Result<SparsePolynomial> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let j: PolyJson = serde_json::from_str(trimmed).context("polynomial JSON")?;
        return poly_from_json(&j);
    }
    let mut genus: Option<u32> = None;
    let mut body = String::new();
    for line in trimmed.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("genus:") {
            genus = Some(rest.trim().parse().context("genus line")?);
        } else {
            if !body.is_empty() {
                body.push_str(" + ");
            }
            body.push_str(line);
        }
    }
    let g = genus.ok_or_else(|| anyhow::anyhow!("polynomial text needs a 'genus: G' line"))?;
    Ok(SparsePolynomial::parse_text(g, &body)?)
}

pub fn polynomial_to_text(p: &SparsePolynomial) -> String {
    format!("genus: {}\n{}\n", p.genus(), p)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SiegelJson {
    pub genus: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

pub fn siegel_to_json(tau: &SiegelPoint) -> SiegelJson {
    let g = tau.genus();
    SiegelJson {
        genus: g,
        re: (0..g)
            .map(|i| (0..g).map(|j| tau.entry(i, j).re).collect())
            .collect(),
        im: (0..g)
            .map(|i| (0..g).map(|j| tau.entry(i, j).im).collect())
            .collect(),
    }
}

pub fn siegel_from_json(j: &SiegelJson) -> Result<SiegelPoint> {
    let g = j.genus;
    if j.re.len() != g || j.im.len() != g || j.re.iter().chain(&j.im).any(|r| r.len() != g) {
        bail!("Siegel point JSON has inconsistent dimensions");
    }
    SiegelPoint::new(DMatrix::from_fn(g, g, |i, k| {
        Complex64::new(j.re[i][k], j.im[i][k])
    }))
}

pub fn parse_siegel(text: &str) -> Result<SiegelPoint> {
    let j: SiegelJson = serde_json::from_str(text.trim()).context("Siegel point JSON")?;
    siegel_from_json(&j)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SymplecticJson {
    pub genus: usize,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    pub c: Vec<Vec<i64>>,
    pub d: Vec<Vec<i64>>,
}

pub fn parse_symplectic(text: &str) -> Result<SymplecticMatrix> {
    let j: SymplecticJson = serde_json::from_str(text.trim()).context("symplectic JSON")?;
    let flat = |m: &[Vec<i64>], name: &str| -> Result<Vec<i64>> {
        if m.len() != j.genus || m.iter().any(|r| r.len() != j.genus) {
            bail!("block {name} must be {0} x {0}", j.genus);
        }
        Ok(m.iter().flatten().copied().collect())
    };
    Ok(SymplecticMatrix::new(
        j.genus,
        flat(&j.a, "A")?,
        flat(&j.b, "B")?,
        flat(&j.c, "C")?,
        flat(&j.d, "D")?,
    )?)
}

/// A code given by name (`e8`, `e8_plus_e8`, `d16_plus`) or as a path to
/// a generator-row text file.
pub fn load_code(arg: &str) -> Result<BinaryCode> {
    if let Ok(name) = NamedCode::parse(arg) {
        return Ok(named_code(name)?);
    }
    let text = fs::read_to_string(arg).with_context(|| format!("reading code file {arg}"))?;
    Ok(parse_code_text(&text)?)
}

/// Parse a scalar like `1/2-1/2*i` (shared with the polynomial text form).
pub fn parse_scalar(s: &str) -> Result<GaussianRational> {
    Ok(parse_gaussian(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::random_siegel_point;
    use theta_code_core::codes::weight_enumerator;

    #[test]
    fn polynomial_json_round_trip() {
        let e8 = named_code(NamedCode::E8).unwrap();
        let w = weight_enumerator(&e8, 2).unwrap();
        let j = poly_to_json(&w);
        let back = poly_from_json(&j).unwrap();
        assert_eq!(w, back);
        let text = serde_json::to_string(&j).unwrap();
        let p2 = parse_polynomial(&text).unwrap();
        assert_eq!(w, p2);
    }

    #[test]
    fn polynomial_text_round_trip() {
        let e8 = named_code(NamedCode::E8).unwrap();
        let w = weight_enumerator(&e8, 1).unwrap();
        let text = polynomial_to_text(&w);
        assert_eq!(parse_polynomial(&text).unwrap(), w);
    }

    #[test]
    fn siegel_json_round_trip() {
        let tau = random_siegel_point(2, 5, 0.5, false).unwrap();
        let j = siegel_to_json(&tau);
        let back = siegel_from_json(&j).unwrap();
        assert_eq!(tau.tau(), back.tau());
        let inline = serde_json::to_string(&j).unwrap();
        assert!(parse_siegel(&inline).is_ok());
    }

    #[test]
    fn symplectic_json_parses_and_validates() {
        let good = r#"{"genus":1,"a":[[1]],"b":[[2]],"c":[[0]],"d":[[1]]}"#;
        assert!(parse_symplectic(good).is_ok());
        let bad = r#"{"genus":1,"a":[[2]],"b":[[0]],"c":[[0]],"d":[[1]]}"#;
        assert!(parse_symplectic(bad).is_err());
    }

    #[test]
    fn named_codes_load() {
        assert_eq!(load_code("e8").unwrap().length(), 8);
        assert_eq!(load_code("d16+").unwrap().length(), 16);
        assert!(load_code("nonexistent_code_file").is_err());
    }
}
