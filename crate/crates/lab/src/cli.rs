//! Command-line interface: subcommands per module, a versioned JSON
//! report on standard output (or `--output`), and the exit-code contract
//! 0 = success / expected verdict, 1 = verdict failure, 2 = usage error.

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::path::PathBuf;

use crate::formats;
use crate::lattice::{construction_a, lattice_theta};
use crate::report::{emit, envelope, render, OutputFormat};
use crate::siegel::{act, random_siegel_point};
use crate::theta::{
    addition_formula_residual, fourth_order_residual, theta, transform_residual_j,
    transform_residual_ts, Characteristic,
};
use crate::thetamap::{schottky_polynomial, th2_evaluate, vanishing_experiment};
use crate::verify::{verify_all, Profile};
use theta_code_core::codes::{
    is_doubly_even_self_dual, weight4_support_components, weight_enumerator_guarded,
};
use theta_code_core::hgroup::{check_invariance_detail, group_closure, molien_dimension};
use theta_code_core::symplectic::{in_gamma, in_gamma_star_24};
use theta_code_core::tangent::{embedding_report, minimal_generators};

#[derive(Parser)]
#[command(name = "thetalab", version, about = "Codes, theta constants and the theta map")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for all pseudo-random sampling.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Evaluation tolerance for truncated series.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output format: json, csv or text.
    #[arg(long, global = true, default_value = "json")]
    pub format: String,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for streamed enumerations (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Inspect codes and compute weight enumerators.
    Codes {
        #[command(subcommand)]
        cmd: CodesCmd,
    },
    /// The finite group H_g: order, invariant dimensions, invariance.
    Hgroup {
        #[command(subcommand)]
        cmd: HgroupCmd,
    },
    /// Symplectic matrices: membership predicates and the action on tau.
    Symplectic {
        #[command(subcommand)]
        cmd: SymplecticCmd,
    },
    /// Theta constants, identities and lattice theta series.
    Theta {
        #[command(subcommand)]
        cmd: ThetaCmd,
    },
    /// The theta map, the Schottky difference and vanishing experiments.
    Thetamap {
        #[command(subcommand)]
        cmd: ThetamapCmd,
    },
    /// Tangent-space combinatorics and the embedding obstruction.
    Tangent {
        #[command(subcommand)]
        cmd: TangentCmd,
    },
    /// Run the acceptance suite.
    Verify {
        /// quick (skips the genus-4 streaming experiment) or full.
        #[arg(long, default_value = "quick")]
        profile: String,
    },
}

#[derive(Subcommand)]
pub enum CodesCmd {
    /// Basic data and self-duality checks for a named code or a file.
    Info {
        #[arg(long)]
        code: String,
    },
    /// The genus-g weight enumerator.
    Enumerator {
        #[arg(long)]
        code: String,
        #[arg(long)]
        genus: u32,
        /// Override the enumeration size guard.
        #[arg(long)]
        force: bool,
    },
}

#[derive(Subcommand)]
pub enum HgroupCmd {
    /// Order of H_g up to sign (genus 1 or 2).
    Order {
        #[arg(long)]
        genus: u32,
    },
    /// Dimension of the degree-d invariant subspace (genus 1 or 2).
    InvariantDim {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        degree: u32,
    },
    /// Check generator invariance of a polynomial (inline or file).
    Check {
        #[arg(long)]
        poly: String,
    },
}

#[derive(Subcommand)]
pub enum SymplecticCmd {
    /// Congruence subgroup membership of a matrix (inline JSON or file).
    Member {
        #[arg(long)]
        matrix: String,
        /// Test Gamma_g(r) (with --strict: Gamma_g(r, 2r)).
        #[arg(long, default_value_t = 2)]
        r: i64,
        #[arg(long)]
        strict: bool,
        /// Also test the trace-refined Gamma*_g(2,4).
        #[arg(long)]
        star: bool,
    },
    /// Apply a symplectic matrix to a point of the upper half space.
    Act {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        tau: String,
    },
    /// Sample a seeded random point.
    RandomTau {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 0.5)]
        spread: f64,
        #[arg(long)]
        diagonal: bool,
    },
}

#[derive(Args)]
pub struct ThetaEvalArgs {
    /// Characteristic a, comma-separated rationals (e.g. "1/2,0").
    #[arg(long, default_value = "")]
    pub a: String,
    #[arg(long, default_value = "")]
    pub b: String,
    #[arg(long)]
    pub tau: String,
}

#[derive(Subcommand)]
pub enum ThetaCmd {
    /// Evaluate theta[a; b](tau, 0).
    Eval(ThetaEvalArgs),
    /// Residual of a classical identity over seeded random points.
    Identity {
        /// One of: addition, fourth, tS, J.
        #[arg(long)]
        which: String,
        #[arg(long, default_value_t = 1)]
        genus: usize,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Theta series of the Construction-A lattice of a code.
    Lattice {
        #[arg(long)]
        code: String,
        #[arg(long)]
        tau: String,
    },
}

#[derive(Subcommand)]
pub enum ThetamapCmd {
    /// Evaluate Th_2(p)(tau).
    Eval {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        tau: String,
    },
    /// The Schottky difference polynomial J^(g).
    Schottky {
        #[arg(long)]
        genus: u32,
        /// Include the full polynomial in the report.
        #[arg(long)]
        emit_poly: bool,
    },
    /// The vanishing experiment at genus 3 or 4.
    Vanish {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
}

#[derive(Subcommand)]
pub enum TangentCmd {
    /// The tangent dimension report for one genus.
    Report {
        #[arg(long)]
        genus: u32,
        /// Force the brute-force generator enumeration (genus <= 6).
        #[arg(long)]
        brute_force: bool,
        /// List the minimal generator monomials.
        #[arg(long)]
        list: bool,
    },
}

fn parse_rationals(s: &str, g: usize) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(vec![0.0; g]);
    }
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != g {
        bail!("expected {g} comma-separated entries, got {}", parts.len());
    }
    parts
        .iter()
        .map(|p| {
            let p = p.trim();
            if let Some((n, d)) = p.split_once('/') {
                Ok(n.trim().parse::<f64>()? / d.trim().parse::<f64>()?)
            } else {
                Ok(p.parse::<f64>()?)
            }
        })
        .collect()
}

/// Run a parsed command line. Returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        // Ignore failure if a global pool already exists (e.g. in tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let format: OutputFormat = cli.format.parse()?;
    let seed = cli.seed;
    let tol = cli.tol;

    let (command_name, data, exit): (String, serde_json::Value, i32) = match cli.command {
        Command::Codes { cmd } => match cmd {
            CodesCmd::Info { code } => {
                let c = formats::load_code(&code)?;
                let data = serde_json::json!({
                    "length": c.length(),
                    "dimension": c.dimension(),
                    "weight_distribution": c.weight_distribution(),
                    "doubly_even_self_dual": is_doubly_even_self_dual(&c),
                    "weight4_support_components": weight4_support_components(&c),
                });
                ("codes info".into(), data, 0)
            }
            CodesCmd::Enumerator { code, genus, force } => {
                let c = formats::load_code(&code)?;
                let w = weight_enumerator_guarded(&c, genus, force)?;
                let data = serde_json::json!({
                    "genus": genus,
                    "num_terms": w.num_terms(),
                    "degree": w.degree(),
                    "polynomial": formats::poly_to_json(&w),
                });
                ("codes enumerator".into(), data, 0)
            }
        },
        Command::Hgroup { cmd } => match cmd {
            HgroupCmd::Order { genus } => {
                let cls = group_closure(genus)?;
                let data = serde_json::json!({ "genus": genus, "order": cls.order() });
                ("hgroup order".into(), data, 0)
            }
            HgroupCmd::InvariantDim { genus, degree } => {
                let cls = group_closure(genus)?;
                let dim = molien_dimension(&cls, degree)?;
                let data = serde_json::json!({
                    "genus": genus, "degree": degree, "dimension": dim,
                });
                ("hgroup invariant-dim".into(), data, 0)
            }
            HgroupCmd::Check { poly } => {
                let text = formats::inline_or_file(&poly)?;
                let p = formats::parse_polynomial(&text)?;
                let failing = check_invariance_detail(&p)?;
                let data = serde_json::json!({
                    "invariant": failing.is_none(),
                    "failing_generator": failing,
                });
                ("hgroup check".into(), data, 0)
            }
        },
        Command::Symplectic { cmd } => match cmd {
            SymplecticCmd::Member { matrix, r, strict, star } => {
                let m = formats::parse_symplectic(&formats::inline_or_file(&matrix)?)?;
                let mut data = serde_json::json!({
                    "genus": m.genus(),
                    "r": r,
                    "strict": strict,
                    "member": in_gamma(&m, r, strict),
                });
                if star {
                    data["star_24"] = serde_json::json!(in_gamma_star_24(&m));
                }
                ("symplectic member".into(), data, 0)
            }
            SymplecticCmd::Act { matrix, tau } => {
                let m = formats::parse_symplectic(&formats::inline_or_file(&matrix)?)?;
                let t = formats::parse_siegel(&formats::inline_or_file(&tau)?)?;
                let image = act(&m, &t)?;
                let data = serde_json::to_value(formats::siegel_to_json(&image))?;
                ("symplectic act".into(), data, 0)
            }
            SymplecticCmd::RandomTau { genus, spread, diagonal } => {
                let t = random_siegel_point(genus, seed, spread, diagonal)?;
                let data = serde_json::to_value(formats::siegel_to_json(&t))?;
                ("symplectic random-tau".into(), data, 0)
            }
        },
        Command::Theta { cmd } => match cmd {
            ThetaCmd::Eval(args) => {
                let t = formats::parse_siegel(&formats::inline_or_file(&args.tau)?)?;
                let g = t.genus();
                let a = parse_rationals(&args.a, g)?;
                let b = parse_rationals(&args.b, g)?;
                let z = vec![Complex64::new(0.0, 0.0); g];
                let v = theta(&a, &b, &t, &z, tol)?;
                let data = serde_json::json!({
                    "value": [v.value.re, v.value.im],
                    "tail_bound": v.tail_bound,
                });
                ("theta eval".into(), data, 0)
            }
            ThetaCmd::Identity { which, genus, count } => {
                let mut residuals = Vec::new();
                for i in 0..count {
                    let t = random_siegel_point(genus, seed.wrapping_add(i as u64), 0.4, false)?;
                    let res = match which.as_str() {
                        "addition" => {
                            let mut worst = 0.0f64;
                            for m in Characteristic::enumerate_binary(genus) {
                                if m.is_even() {
                                    worst = worst.max(addition_formula_residual(&m, &t, tol)?);
                                }
                            }
                            worst
                        }
                        "fourth" => {
                            let mut worst = 0.0f64;
                            let mut mp = vec![0i64; genus];
                            loop {
                                worst = worst.max(fourth_order_residual(&mp, &t, tol)?);
                                let mut k = 0;
                                while k < genus {
                                    mp[k] += 1;
                                    if mp[k] < 4 {
                                        break;
                                    }
                                    mp[k] = 0;
                                    k += 1;
                                }
                                if k == genus {
                                    break;
                                }
                            }
                            worst
                        }
                        "tS" => {
                            let mut s = vec![0i64; genus * genus];
                            s[0] = 1;
                            transform_residual_ts(&s, &t, tol)?
                        }
                        "J" => transform_residual_j(&t, tol)?.residual,
                        other => bail!("unknown identity '{other}' (expected addition, fourth, tS or J)"),
                    };
                    residuals.push(res);
                }
                let worst = residuals.iter().cloned().fold(0.0, f64::max);
                let data = serde_json::json!({
                    "which": which,
                    "genus": genus,
                    "residuals": residuals,
                    "max_residual": worst,
                });
                ("theta identity".into(), data, 0)
            }
            ThetaCmd::Lattice { code, tau } => {
                let c = formats::load_code(&code)?;
                let lat = construction_a(&c)?;
                let t = formats::parse_siegel(&formats::inline_or_file(&tau)?)?;
                let v = lattice_theta(&lat, &t, tol)?;
                let data = serde_json::json!({
                    "value": [v.value.re, v.value.im],
                    "tail_bound": v.tail_bound,
                });
                ("theta lattice".into(), data, 0)
            }
        },
        Command::Thetamap { cmd } => match cmd {
            ThetamapCmd::Eval { poly, tau } => {
                let p = formats::parse_polynomial(&formats::inline_or_file(&poly)?)?;
                let t = formats::parse_siegel(&formats::inline_or_file(&tau)?)?;
                let rep = th2_evaluate(&p, &t, tol)?;
                let data = serde_json::json!({
                    "value": [rep.value.re, rep.value.im],
                    "tail_bound": rep.tail_bound,
                    "normalization": rep.normalization,
                    "ratio": rep.value.norm() / rep.normalization,
                });
                ("thetamap eval".into(), data, 0)
            }
            ThetamapCmd::Schottky { genus, emit_poly } => {
                let j = schottky_polynomial(genus)?;
                let mut data = serde_json::json!({
                    "genus": genus,
                    "is_zero": j.is_zero(),
                    "num_terms": j.num_terms(),
                    "degree": j.degree(),
                });
                if emit_poly {
                    data["polynomial"] = serde_json::to_value(formats::poly_to_json(&j))?;
                }
                ("thetamap schottky".into(), data, 0)
            }
            ThetamapCmd::Vanish { genus, points } => {
                let rep = vanishing_experiment(genus, points, seed, tol)?;
                let exit = if rep.verdict { 0 } else { 1 };
                ("thetamap vanish".into(), serde_json::to_value(&rep)?, exit)
            }
        },
        Command::Tangent { cmd } => match cmd {
            TangentCmd::Report { genus, brute_force, list } => {
                let rep = embedding_report(genus)?;
                let mut data = serde_json::json!({
                    "genus": rep.genus,
                    "t_formula": rep.t_formula as u64,
                    "t_bruteforce": rep.t_bruteforce.map(|x| x as u64),
                    "ambient": rep.ambient as u64,
                    "obstructed": rep.obstructed,
                });
                if (brute_force || list) && rep.t_bruteforce.is_none() {
                    bail!("brute force is only available for genus <= 6");
                }
                if list {
                    let gens: Vec<String> = minimal_generators(genus)?
                        .iter()
                        .map(|m| m.render())
                        .collect();
                    data["generators"] = serde_json::to_value(gens)?;
                }
                ("tangent report".into(), data, 0)
            }
        },
        Command::Verify { profile } => {
            let profile: Profile = profile.parse()?;
            let (results, report) = verify_all(profile, seed, tol);
            for r in &results {
                eprintln!(
                    "{}: {} ({:.2}s) - {}",
                    r.name,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.elapsed_secs,
                    r.detail
                );
            }
            let exit = if results.iter().all(|r| r.pass) { 0 } else { 1 };
            ("verify".into(), report, exit)
        }
    };

    let env = envelope(&command_name, &data)?;
    let rendered = render(&env, format)?;
    emit(&rendered, cli.output.as_deref())?;
    Ok(exit)
}
