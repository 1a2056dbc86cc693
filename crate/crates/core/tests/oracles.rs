mod common;

use std::f64::consts::PI;

use critlat::enumlat::{energy_direct, enumerate_shell, gradient_direct, shell_counts};
use critlat::latcat::{self, catalog};
use critlat::modforms::{bernoulli, discriminant, eisenstein, sigma};
use critlat::morse::{classify, criticality, hessian_spectrum, Criticality};
use critlat::symspace::shell_quartic_sum;
use critlat::{Classification, SymMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;

fn coeffs(name: &str, len: usize) -> Vec<f64> {
    latcat::get(name).unwrap().theta().truncate(len).to_f64_vec()
}

#[test]
fn number_theory_values() {
    let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
    assert_eq!(bernoulli(12), r(-691, 2730));
    assert_eq!(bernoulli(16), r(-3617, 510));
    assert_eq!(sigma(11, 2), BigInt::from(2049));
    let tau = discriminant(6).to_f64_vec();
    assert_eq!(tau, vec![0.0, 1.0, -24.0, 252.0, -1472.0, 4830.0]);
    assert_eq!(eisenstein(6, 3).unwrap().to_f64_vec(), vec![1.0, -504.0, -16632.0]);
}

#[test]
fn theta_series_known_coefficients() {
    assert_eq!(coeffs("E8", 4), vec![1.0, 240.0, 2160.0, 6720.0]);
    assert_eq!(coeffs("D16+", 4), vec![1.0, 480.0, 61920.0, 1050240.0]);
    assert_eq!(coeffs("D16+", 8), coeffs("E8^2", 8));
    assert_eq!(coeffs("Leech", 5), vec![1.0, 0.0, 196560.0, 16773120.0, 398034000.0]);
    assert_eq!(coeffs("Rootless-32", 3), vec![1.0, 0.0, 146880.0]);
}

#[test]
fn enumeration_matches_theta_on_sixteen_dimensions() {
    for name in ["E8", "D16+"] {
        let e = latcat::get(name).unwrap();
        let counts = shell_counts(&e.gram().unwrap(), 3).unwrap();
        let want: Vec<u64> = e.theta().truncate(4).to_f64_vec().iter().map(|&c| c as u64).collect();
        assert_eq!(counts, want, "{name}");
    }
}

#[test]
fn shell_quartic_sum_matches_enumeration() {
    let e = latcat::get("D16+").unwrap();
    let basis = e.basis().unwrap();
    let mut h = SymMatrix::from_fn(16, |i, j| ((3 * i + 5 * j) % 7) as f64 - 3.0);
    h = h.traceless_part();
    let shell = enumerate_shell(&basis.gram(), 2).unwrap();
    let direct: f64 = shell.vectors.iter().map(|v| h.quad(&basis.embed(v)).powi(2)).sum();
    let formula = shell_quartic_sum(&e, &h, 2).unwrap();
    assert!((direct - formula).abs() < 1e-8 * direct, "{direct} vs {formula}");
}

#[test]
fn energy_and_gradient_by_enumeration() {
    let e = latcat::get("D16+").unwrap();
    let (val, tail) = energy_direct(&e.gram().unwrap(), PI, 4).unwrap();
    let series = e.theta().eval((-2.0 * PI).exp()) - 1.0;
    assert!((val - series).abs() <= tail + 1e-14);
    let h = SymMatrix::diagonal(&[1.0, -1.0, 2.0, -2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let g = gradient_direct(e.basis().unwrap(), PI, &h, 3).unwrap();
    assert!(g.abs() < 1e-12, "gradient {g}");
}

#[test]
fn niemeier_anchor_values() {
    let a1 = hessian_spectrum(&latcat::get("A1^24").unwrap(), PI, 1e-9).unwrap();
    assert_eq!(common::truncate(a1.mu_of(0.0).unwrap().mu, 4), 0.0018);
    assert_eq!(common::truncate(a1.mu_of(8.0).unwrap().mu, 4), 0.1044);
    let (class, margin) = classify(&latcat::get("A2^12").unwrap(), PI).unwrap();
    assert_eq!(class, Classification::Saddle);
    assert!(margin > 0.0);
}

#[test]
fn every_spectrum_covers_the_traceless_space() {
    for e in catalog() {
        if !criticality(e).unwrap().is_critical() {
            assert!(matches!(criticality(e).unwrap(), Criticality::MomentDefect { .. }));
            continue;
        }
        let r = hessian_spectrum(e, PI, 1e-9).unwrap();
        let n = e.dim();
        assert_eq!(r.total_multiplicity(), n * (n + 1) / 2 - 1, "{}", e.name());
        assert!(r.entries.iter().all(|s| s.error_radius <= 1e-9), "{}", e.name());
    }
}

#[test]
fn catalog_rows_agree_with_table() {
    for &(rs, a1, h, rows) in common::TABLE24 {
        let e = latcat::get(rs).unwrap();
        assert_eq!((e.root_count(), e.coxeter()), (a1, Some(h)));
        assert_eq!(rows.iter().map(|r| r.1).sum::<usize>(), 299, "{rs}");
    }
}
