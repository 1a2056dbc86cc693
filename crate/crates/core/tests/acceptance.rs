//! Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

mod common;

use std::f64::consts::PI;
use std::str::FromStr;
use std::time::{Duration, Instant};

use critlat::enumlat::{hessian_direct, shell_counts};
use critlat::latcat::{self, catalog, LatticeEntry};
use critlat::modforms::{
    eisenstein, jenkins_rouse_constant, round_up_2sig, tail_bound, theta_duality_residual,
};
use critlat::morse::{
    criticality, hessian_spectrum, large_alpha_class, mu_partial_sum, noncritical_certificate,
    rootless_local_max_certificate, Classification, Criticality, DEFAULT_HEAD_TERMS,
};
use critlat::symspace::{design_check, q_spectrum_closed, q_spectrum_numeric};
use critlat::{IrreducibleRootSystem, RootKind, RootSystem, SymMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn get(name: &str) -> LatticeEntry {
    latcat::get(name).unwrap()
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("{what} took {t:?} (limit {limit:?})"))
}

fn c1_dim16_anchors() -> Outcome {
    let start = Instant::now();
    let expect = [
        ("D16+", 8.0, -0.06196),
        ("D16+", 56.0, 0.36093),
        ("E8^2", 0.0, -0.13245),
        ("E8^2", 24.0, 0.07899),
        ("E8^2", 120.0, 0.92480),
    ];
    let d = hessian_spectrum(&get("D16+"), PI, 1e-9).map_err(|e| e.to_string())?;
    let e = hessian_spectrum(&get("E8^2"), PI, 1e-9).map_err(|e| e.to_string())?;
    for (name, lambda, mu) in expect {
        let r = if name == "D16+" { &d } else { &e };
        let got = r.mu_of(lambda).ok_or(format!("{name}: no lambda {lambda}"))?;
        ensure(
            (common::truncate(got.mu, 5) - mu).abs() < 1e-12,
            format!("{name} lambda={lambda}: mu {} vs {mu}", got.mu),
        )?;
        ensure(got.error_radius <= 1e-9, format!("{name}: radius {}", got.error_radius))?;
    }
    ensure(d.entries.len() == 2 && e.entries.len() == 3, "unexpected eigenvalue count")?;
    within(Duration::from_secs(1), start, "dimension-16 spectra")?;
    Ok(format!("5 values matched in {:?}", start.elapsed()))
}

fn c2_table24() -> Outcome {
    let start = Instant::now();
    let mut triples = 0;
    for &(rs, a1, h, rows) in common::TABLE24 {
        let entry = latcat::get(rs).map_err(|e| format!("{rs}: {e}"))?;
        ensure(entry.root_count() == a1 && entry.coxeter() == Some(h), format!("{rs}: a1/h"))?;
        let r = hessian_spectrum(&entry, PI, 1e-9).map_err(|e| format!("{rs}: {e}"))?;
        ensure(r.entries.len() == rows.len(), format!("{rs}: {} eigenvalues", r.entries.len()))?;
        for (got, &(lambda, mult, mu)) in r.entries.iter().zip(rows) {
            ensure(
                (got.lambda - lambda).abs() < 1e-9 && got.multiplicity == mult,
                format!("{rs}: ({}, {}) vs ({lambda}, {mult})", got.lambda, got.multiplicity),
            )?;
            ensure(
                (common::truncate(got.mu, 4) - mu).abs() < 1e-12,
                format!("{rs} lambda={lambda}: mu {} vs {mu}", got.mu),
            )?;
            triples += 1;
        }
    }
    within(Duration::from_secs(10), start, "Niemeier table")?;
    Ok(format!("23 lattices, {triples} triples in {:?}", start.elapsed()))
}

fn c3_q_oracle() -> Outcome {
    let mut systems: Vec<RootSystem> = Vec::new();
    for n in 2..=24 {
        systems.push(RootSystem::from_str(&format!("A{n}")).unwrap());
    }
    for n in 4..=24 {
        systems.push(RootSystem::from_str(&format!("D{n}")).unwrap());
    }
    for n in 6..=8 {
        systems.push(RootSystem::from_str(&format!("E{n}")).unwrap());
    }
    for name in latcat::NIEMEIER {
        systems.push(RootSystem::from_str(name).unwrap());
    }
    for rs in &systems {
        let closed = q_spectrum_closed(rs).map_err(|e| format!("{rs}: {e}"))?;
        let numeric = q_spectrum_numeric(rs);
        ensure(closed.agrees_with(&numeric, 1e-8), format!("{rs}: {:?} vs {:?}", closed.entries, numeric.entries))?;
    }
    Ok(format!("{} root systems agree", systems.len()))
}

fn c4_designs() -> Outcome {
    let mut count = 0;
    let mut all: Vec<IrreducibleRootSystem> = Vec::new();
    for n in 1..=24 {
        all.push(IrreducibleRootSystem::new(RootKind::A, n).unwrap());
    }
    for n in 4..=24 {
        all.push(IrreducibleRootSystem::new(RootKind::D, n).unwrap());
    }
    for n in 6..=8 {
        all.push(IrreducibleRootSystem::new(RootKind::E, n).unwrap());
    }
    for c in &all {
        ensure(c.is_exact_two_design(), format!("{}: exact 2-design identity", c.name()))?;
        count += 1;
    }
    let frame = |k: RootKind, r: usize| IrreducibleRootSystem::new(k, r).unwrap().frame_roots();
    let fours = [
        ("A1", RootKind::A, 1),
        ("A2", RootKind::A, 2),
        ("D4", RootKind::D, 4),
        ("E6", RootKind::E, 6),
        ("E7", RootKind::E, 7),
        ("E8", RootKind::E, 8),
    ];
    for (name, k, r) in fours {
        let d = design_check(&frame(k, r), 4).map_err(|e| e.to_string())?;
        ensure(d.holds && d.residual <= 1e-10, format!("{name}: 4-design residual {}", d.residual))?;
    }
    let d = design_check(&frame(RootKind::A, 3), 4).map_err(|e| e.to_string())?;
    ensure(!d.holds && d.residual > 1e-2, format!("A3 residual {}", d.residual))?;
    Ok(format!("{count} exact 2-designs; 6 4-designs; A3 residual {:.3}", d.residual))
}

fn c5_theta() -> Outcome {
    let e8 = get("E8");
    let d16 = get("D16+");
    let c = shell_counts(&e8.gram().unwrap(), 4).map_err(|e| e.to_string())?;
    let e4 = eisenstein(4, 5).unwrap();
    for m in 0..=4 {
        ensure(c[m] as f64 == e4.coeff_f64(m), format!("E8 shell {m}: {}", c[m]))?;
    }
    let c = shell_counts(&d16.gram().unwrap(), 3).map_err(|e| e.to_string())?;
    let e4sq = eisenstein(4, 4).unwrap().pow(2);
    for m in 0..=3 {
        ensure(c[m] as f64 == e4sq.coeff_f64(m), format!("D16+ shell {m}: {}", c[m]))?;
    }
    let mut worst = 0.0f64;
    for entry in [&e8, &d16, &get("Rootless-32")] {
        let theta = entry.theta_to(64);
        for y in [0.9, 1.2] {
            let r = theta_duality_residual(&theta, entry.dim(), y, 64).map_err(|e| e.to_string())?;
            ensure(r < 1e-10, format!("{} y={y}: residual {r}", entry.name()))?;
            worst = worst.max(r);
        }
    }
    Ok(format!("shell sizes match; worst duality residual {worst:.2e}"))
}

fn c6_hessian_cross_check() -> Outcome {
    let d16 = get("D16+");
    let mut diag = vec![0.0; 16];
    diag[0] = std::f64::consts::FRAC_1_SQRT_2;
    diag[1] = -std::f64::consts::FRAC_1_SQRT_2;
    let h = SymMatrix::diagonal(&diag);
    let q = critlat::symspace::q_apply(d16.root_system(), &h).map_err(|e| e.to_string())?;
    ensure((q - 56.0).abs() < 1e-9, format!("Q[H] = {q}, expected 56"))?;
    let direct = hessian_direct(d16.basis().unwrap(), PI, &h, 3).map_err(|e| e.to_string())?;
    let series = mu_partial_sum(&d16, 56.0, PI, 3).map_err(|e| e.to_string())?;
    ensure((direct - series).abs() < 1e-8, format!("direct {direct} vs series {series}"))?;
    Ok(format!("direct {direct:.12} vs series {series:.12}"))
}

fn c7_noncritical() -> Outcome {
    let k = get("A1^8+A3^8");
    let witness = match criticality(&k).map_err(|e| e.to_string())? {
        Criticality::MomentDefect { second_moment, .. } => second_moment,
        _ => return Err("A1^8+A3^8 reported critical".into()),
    };
    let expect = SymMatrix::scalar_blocks(&[(8, 4.0), (24, 8.0)]);
    ensure(witness.sub(&expect).max_abs() < 1e-12, "second moment is not 4 I_8 + 8 I_24")?;
    let h = SymMatrix::scalar_blocks(&[(8, 24.0), (24, -8.0)]);
    let cert = noncritical_certificate(&k, 14.0, &h, DEFAULT_HEAD_TERMS).map_err(|e| e.to_string())?;
    let root = 768.0 * 14.0 * (-28.0f64).exp();
    ensure((cert.lhs - root).abs() < 1e-9 * root, format!("root term {}", cert.lhs))?;
    ensure(cert.holds() && cert.replay(&k).map_err(|e| e.to_string())?, "certificate does not replay")?;
    let rootless_c = round_up_2sig(
        2.0 * jenkins_rouse_constant(16, &[BigRational::new(BigInt::from(-16320), BigInt::from(3617))]),
    );
    ensure(rootless_c == 1.2e10, format!("rootless cusp constant {rootless_c}"))?;
    Ok(format!("root term {:.4e} > remainder {:.4e}; rootless constant {rootless_c:.1e}", cert.lhs, cert.rhs))
}

fn c8_local_max() -> Outcome {
    let r = get("Rootless-32");
    let cert = rootless_local_max_certificate(&r, PI, 8).map_err(|e| e.to_string())?;
    let partial = cert.constant("partial_sum").unwrap();
    let tail = cert.constant("tail_total").unwrap();
    ensure(partial < -0.00027, format!("partial sum {partial}"))?;
    ensure(tail <= 5.4e-7, format!("tail {tail}"))?;
    ensure(tail_bound(2, 16, 14.0).unwrap() <= 3.3e-20, "tail(2,16,14)")?;
    ensure(tail_bound(9, 17, PI).unwrap() <= 5.8e-9, "tail(9,17,pi)")?;
    ensure(tail_bound(9, 10, PI).unwrap() <= 1.2e-15, "tail(9,10,pi)")?;
    let report = hessian_spectrum(&r, PI, 1e-9).map_err(|e| e.to_string())?;
    ensure(report.classification == Classification::LocalMax, format!("{:?}", report.classification))?;
    Ok(format!("partial {partial:.6e}, tail {tail:.3e}, LocalMax"))
}

fn c9_large_alpha() -> Outcome {
    let minima = ["E8", "D16+", "A24", "D24"];
    let mut saddles = 0;
    for e in catalog().iter().filter(|e| e.root_count() > 0) {
        let c = match large_alpha_class(e) {
            Ok(c) => c,
            Err(critlat::Error::NotCritical) if e.dim() == 32 => continue,
            Err(err) => return Err(format!("{}: {err}", e.name())),
        };
        let want = if minima.contains(&e.name()) { Classification::LocalMin } else { Classification::Saddle };
        ensure(c == want, format!("{}: {c:?}", e.name()))?;
        if c == Classification::Saddle {
            saddles += 1;
        }
    }
    ensure(saddles == 22, format!("{saddles} saddles"))?;
    ensure(
        matches!(large_alpha_class(&get("Rootless-32")), Err(critlat::Error::Inapplicable(_))),
        "rootless lattice not reported inapplicable",
    )?;
    Ok("4 minima, 22 saddles".into())
}

fn c10_properties() -> Outcome {
    let mut spectra = 0;
    for e in catalog() {
        if criticality(e).map_err(|x| x.to_string())?.is_critical() {
            let s = critlat::morse::entry_q_spectrum(e).map_err(|x| x.to_string())?;
            let n = e.dim();
            ensure(s.total_multiplicity() == n * (n + 1) / 2 - 1, format!("{}: multiplicities", e.name()))?;
            spectra += 1;
        }
        let theta = e.theta();
        ensure(theta.is_integral(), format!("{}: non-integral theta", e.name()))?;
        ensure(theta.to_f64_vec().iter().all(|&c| c >= 0.0), format!("{}: negative theta", e.name()))?;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let alpha: f64 = rng.gen_range(0.5..15.0);
        let k: u32 = rng.gen_range(0..25);
        let min_j = ((k as f64 / (2.0 * alpha)).ceil() as u64).max(1);
        let j = min_j + rng.gen_range(0..5);
        let bound = tail_bound(j, k, alpha).map_err(|e| e.to_string())?;
        let partial: f64 = (j..=j + 500).map(|m| (m as f64).powi(k as i32) * (-2.0 * alpha * m as f64).exp()).sum();
        ensure(bound >= partial, format!("tail({j},{k},{alpha}) = {bound} < {partial}"))?;
    }
    Ok(format!("{spectra} spectra, {} theta series, 20 tail triples", catalog().len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 dimension-16 anchors", c1_dim16_anchors),
        ("2 Niemeier table regression", c2_table24),
        ("3 Q-spectrum oracle equivalence", c3_q_oracle),
        ("4 design identities", c4_designs),
        ("5 theta oracles", c5_theta),
        ("6 Hessian formula cross-check", c6_hessian_cross_check),
        ("7 dimension-32 non-criticality", c7_noncritical),
        ("8 dimension-32 local maximum", c8_local_max),
        ("9 large-alpha classification", c9_large_alpha),
        ("10 property suite", c10_properties),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
