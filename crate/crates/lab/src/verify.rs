//! The acceptance suite: one check per criterion, runnable as the quick
//! profile (everything but the genus-4 streaming experiment) or the full
//! profile.
//!
//! The JSON report deliberately excludes wall-clock timings so that two
//! runs with the same configuration are byte-identical; timings are
//! carried separately for the human summary.

use anyhow::Result;
use serde_json::Value;
use std::time::Instant;

use crate::lattice::{construction_a, enumerate_vectors, lattice_theta};
use crate::siegel::random_siegel_point;
use crate::theta::{
    addition_formula_residual, fourth_order_residual, transform_residual_j,
    transform_residual_ts, Characteristic,
};
use crate::thetamap::{schottky_polynomial, th2_evaluate, vanishing_experiment};
use theta_code_core::codes::{named_code, weight_enumerator, NamedCode};
use theta_code_core::hgroup::{
    check_invariance, group_closure, molien_dimension, reynolds_rank, symmetric_generators,
};
use theta_code_core::tangent::embedding_report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

impl std::str::FromStr for Profile {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            other => anyhow::bail!("unknown profile '{other}' (expected quick or full)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub elapsed_secs: f64,
}

fn run_check(
    name: &str,
    out: &mut Vec<CheckResult>,
    f: impl FnOnce() -> Result<(bool, String)>,
) {
    let start = Instant::now();
    let (pass, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    out.push(CheckResult {
        name: name.to_string(),
        pass,
        detail,
        elapsed_secs: start.elapsed().as_secs_f64(),
    });
}

pub fn check_tangent_dimensions() -> Result<(bool, String)> {
    let mut pass = true;
    let mut counts = Vec::new();
    for g in 1..=6u32 {
        let rep = embedding_report(g)?;
        let brute = rep.t_bruteforce.ok_or_else(|| anyhow::anyhow!("no brute force at g={g}"))?;
        if rep.t_formula != brute {
            pass = false;
        }
        if rep.obstructed != (g >= 4) {
            pass = false;
        }
        counts.push(rep.t_formula);
    }
    if counts[2] != 7 || counts[3] != 17 {
        pass = false;
    }
    Ok((pass, format!("t_1..t_6 = {counts:?}; threshold crossed at genus 4 (17 > 15)")))
}

pub fn check_invariance_all() -> Result<(bool, String)> {
    let mut pass = true;
    let mut done = Vec::new();
    for name in [NamedCode::E8, NamedCode::E8PlusE8, NamedCode::D16Plus] {
        let code = named_code(name)?;
        for g in 1..=3u32 {
            let w = weight_enumerator(&code, g)?;
            if !check_invariance(&w)? {
                pass = false;
            }
            done.push(format!("{name:?}/g{g}"));
        }
    }
    Ok((pass, format!("generator invariance of {} enumerators", done.len())))
}

pub fn check_kernel_low_genus() -> Result<(bool, String)> {
    let z1 = schottky_polynomial(1)?.is_zero();
    let z2 = schottky_polynomial(2)?.is_zero();
    Ok((z1 && z2, format!("J^(1) zero: {z1}; J^(2) zero: {z2}")))
}

pub fn check_kernel_genus3(seed: u64, tol: f64) -> Result<(bool, String)> {
    let j = schottky_polynomial(3)?;
    let nonzero = !j.is_zero();
    let invariant = check_invariance(&j)?;
    let rep = vanishing_experiment(3, 5, seed, tol)?;
    let max_ratio = rep.points.iter().map(|p| p.ratio).fold(0.0, f64::max);
    let pass = nonzero && invariant && rep.verdict;
    Ok((
        pass,
        format!(
            "J^(3) nonzero: {nonzero} ({} terms), invariant: {invariant}, max ratio {max_ratio:.3e} over {} points",
            j.num_terms(),
            rep.points.len()
        ),
    ))
}

pub fn check_genus4_obstruction(seed: u64, tol: f64) -> Result<(bool, String)> {
    let rep = vanishing_experiment(4, 3, seed, tol)?;
    let max_diag = rep
        .points
        .iter()
        .filter(|p| p.kind == "diagonal")
        .map(|p| p.ratio)
        .fold(0.0, f64::max);
    let min_generic = rep
        .points
        .iter()
        .filter(|p| p.kind == "generic")
        .map(|p| p.ratio)
        .fold(f64::INFINITY, f64::min);
    Ok((
        rep.verdict,
        format!("diagonal ratios <= {max_diag:.3e}; generic ratios >= {min_generic:.3e}"),
    ))
}

pub fn check_theta_identities(seed: u64, tol: f64) -> Result<(bool, String)> {
    let mut max_add = 0.0f64;
    let mut max_fourth = 0.0f64;
    let mut max_ts = 0.0f64;
    let mut max_j = 0.0f64;
    let mut max_unimodular = 0.0f64;
    for (g, n_tau) in [(1usize, 20usize), (2, 20), (3, 5)] {
        for i in 0..n_tau {
            let tau = random_siegel_point(g, seed.wrapping_add(100 * g as u64 + i as u64), 0.4, false)?;
            for m in Characteristic::enumerate_binary(g) {
                if m.is_even() {
                    max_add = max_add.max(addition_formula_residual(&m, &tau, tol)?);
                }
            }
            let mut mp = vec![0i64; g];
            loop {
                max_fourth = max_fourth.max(fourth_order_residual(&mp, &tau, tol)?);
                let mut k = 0;
                loop {
                    if k == g {
                        break;
                    }
                    mp[k] += 1;
                    if mp[k] < 4 {
                        break;
                    }
                    mp[k] = 0;
                    k += 1;
                }
                if k == g {
                    break;
                }
            }
            for (_, s) in symmetric_generators(g as u32) {
                let flat: Vec<i64> = s.iter().flatten().copied().collect();
                max_ts = max_ts.max(transform_residual_ts(&flat, &tau, tol)?);
            }
            let j = transform_residual_j(&tau, tol)?;
            max_j = max_j.max(j.residual);
            max_unimodular = max_unimodular.max((j.scalar.norm() - 1.0).abs());
        }
    }
    let pass = max_add < 1e-8 && max_fourth < 1e-8 && max_ts < 1e-9 && max_j < 1e-8
        && max_unimodular < 1e-8;
    Ok((
        pass,
        format!(
            "max residuals: addition {max_add:.3e}, fourth-order {max_fourth:.3e}, t(S) {max_ts:.3e}, J {max_j:.3e} (| |c|-1 | <= {max_unimodular:.3e})"
        ),
    ))
}

pub fn check_construction_a(seed: u64, _tol: f64) -> Result<(bool, String)> {
    let e8 = named_code(NamedCode::E8)?;
    let lat = construction_a(&e8)?;
    let norm2 = enumerate_vectors(&lat, 2)?
        .iter()
        .filter(|w| w.iter().map(|&x| (x as i64).pow(2)).sum::<i64>() == 4)
        .count();
    let mut pass = norm2 == 240;
    let mut max_rel = 0.0f64;
    for (g, n_tau, spread, lat_tol) in [(1usize, 10usize, 0.5, 1e-12), (2, 3, 0.2, 2e-9)] {
        let w = weight_enumerator(&e8, g as u32)?;
        for i in 0..n_tau {
            let tau = random_siegel_point(g, seed.wrapping_add(700 + 50 * g as u64 + i as u64), spread, false)?;
            let map_side = th2_evaluate(&w, &tau, 1e-12)?;
            let lat_side = lattice_theta(&lat, &tau, lat_tol)?;
            let rel = (map_side.value - lat_side.value).norm() / lat_side.value.norm();
            max_rel = max_rel.max(rel);
        }
    }
    if max_rel >= 1e-8 {
        pass = false;
    }
    Ok((
        pass,
        format!("norm-2 vectors: {norm2}; max relative pipeline gap {max_rel:.3e}"),
    ))
}

pub fn check_molien() -> Result<(bool, String)> {
    let cls = group_closure(1)?;
    let mut pass = true;
    let mut dims = Vec::new();
    for d in [2u32, 4, 6, 8, 10, 12] {
        let m = molien_dimension(&cls, d)?;
        let r = reynolds_rank(&cls, d)? as u64;
        if m != r {
            pass = false;
        }
        dims.push(m);
    }
    Ok((pass, format!("genus-1 invariant dimensions at degrees 2..12: {dims:?}")))
}

/// Run the suite. Returns the per-check results (with timings) and a
/// timing-free JSON report suitable for byte-identical comparison.
pub fn verify_all(profile: Profile, seed: u64, tol: f64) -> (Vec<CheckResult>, Value) {
    let mut results = Vec::new();
    run_check("1 tangent dimensions", &mut results, check_tangent_dimensions);
    run_check("2 enumerator invariance", &mut results, check_invariance_all);
    run_check("3 kernel at genus 1-2", &mut results, check_kernel_low_genus);
    run_check("4 kernel at genus 3", &mut results, || {
        check_kernel_genus3(seed, tol)
    });
    if profile == Profile::Full {
        run_check("5 genus-4 obstruction", &mut results, || {
            check_genus4_obstruction(seed, tol)
        });
    }
    run_check("6 theta identities", &mut results, || {
        check_theta_identities(seed, tol)
    });
    run_check("7 Construction A cross-check", &mut results, || {
        check_construction_a(seed, tol)
    });
    run_check("8 Molien consistency", &mut results, check_molien);

    let report = serde_json::json!({
        "profile": match profile { Profile::Quick => "quick", Profile::Full => "full" },
        "seed": seed,
        "tol": tol,
        "checks": results.iter().map(|r| serde_json::json!({
            "name": r.name,
            "pass": r.pass,
            "detail": r.detail,
        })).collect::<Vec<_>>(),
        "all_pass": results.iter().all(|r| r.pass),
    });
    (results, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_checks_pass() {
        assert!(check_tangent_dimensions().unwrap().0);
        assert!(check_kernel_low_genus().unwrap().0);
        assert!(check_molien().unwrap().0);
    }
}
