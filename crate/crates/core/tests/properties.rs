use std::str::FromStr;

use critlat::linalg::{cluster_sorted, jacobi_eigen};
use critlat::modforms::{round_up_2sig, tail_bound};
use critlat::symspace::{harmonic_components, QForm, TracelessBasis};
use critlat::{QSeries, RootSystem, SymMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;

fn traceless(n: usize, coords: &[f64]) -> SymMatrix {
    let b = TracelessBasis::new(n);
    b.from_coords(&coords[..b.len()])
}

fn reflection(r: &[f64]) -> SymMatrix {
    let rr: f64 = r.iter().map(|x| x * x).sum();
    SymMatrix::identity(r.len()).sub(&SymMatrix::outer(r).scaled(2.0 / rr))
}

fn series(coeffs: &[i64]) -> QSeries {
    QSeries::from_integers(coeffs.iter().map(|&c| BigInt::from(c)).collect(), 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn harmonic_parts_reconstruct_the_square(
        n in 2usize..9,
        coords in prop::collection::vec(-2.0f64..2.0, 44),
        x in prop::collection::vec(-3.0f64..3.0, 8),
    ) {
        let h = traceless(n, &coords);
        let parts = harmonic_components(&h).unwrap();
        let x = &x[..n];
        let want = h.quad(x).powi(2);
        prop_assert!((parts.reconstruct(x) - want).abs() <= 1e-9 * want.max(1.0));
    }

    #[test]
    fn traceless_coordinates_roundtrip(n in 2usize..9, coords in prop::collection::vec(-2.0f64..2.0, 44)) {
        let b = TracelessBasis::new(n);
        let h = b.from_coords(&coords[..b.len()]);
        prop_assert!(h.trace().abs() < 1e-12);
        let back = b.coords(&h);
        for (a, c) in back.iter().zip(&coords) {
            prop_assert!((a - c).abs() < 1e-12);
        }
    }

    #[test]
    fn q_is_weyl_invariant(
        which in 0usize..4,
        root in 0usize..1000,
        coords in prop::collection::vec(-1.0f64..1.0, 44),
    ) {
        let rs = RootSystem::from_str(["A3", "D4", "A2^2+A1", "E6"][which]).unwrap();
        let n = rs.total_rank();
        let roots = rs.roots_in_frame(n);
        let s = reflection(&roots[root % roots.len()]);
        let h = traceless(n, &coords);
        let q = QForm::new(&rs, n);
        let before = q.apply(&h).unwrap();
        let after = q.apply(&h.congruence(&s.to_rows())).unwrap();
        prop_assert!((before - after).abs() <= 1e-9 * before.abs().max(1.0));
    }

    #[test]
    fn q_is_nonnegative(which in 0usize..3, coords in prop::collection::vec(-1.0f64..1.0, 44)) {
        let rs = RootSystem::from_str(["A4", "D5", "A1^3+D4"][which]).unwrap();
        let n = rs.total_rank();
        let h = traceless(n, &coords);
        prop_assert!(QForm::new(&rs, n).apply(&h).unwrap() >= -1e-12);
    }

    #[test]
    fn tail_bound_dominates_partial_sums(alpha in 0.3f64..20.0, k in 0u32..30, extra in 0u64..6) {
        let j = ((k as f64 / (2.0 * alpha)).ceil() as u64).max(1) + extra;
        let bound = tail_bound(j, k, alpha).unwrap();
        let partial: f64 = (j..j + 2000)
            .map(|m| (m as f64).powi(k as i32) * (-2.0 * alpha * m as f64).exp())
            .sum();
        prop_assert!(bound >= partial * (1.0 - 1e-12), "{bound} < {partial}");
    }

    #[test]
    fn round_up_is_tight(x in 1e-20f64..1e20) {
        let r = round_up_2sig(x);
        prop_assert!(r >= x);
        prop_assert!(r <= x * 1.1 + f64::MIN_POSITIVE);
    }

    #[test]
    fn series_ring_laws(
        a in prop::collection::vec(-50i64..50, 1..12),
        b in prop::collection::vec(-50i64..50, 1..12),
        c in prop::collection::vec(-50i64..50, 1..12),
    ) {
        let (a, b, c) = (series(&a), series(&b), series(&c));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).unwrap().mul(&c), a.mul(&c).add(&b.mul(&c)).unwrap());
    }

    #[test]
    fn jacobi_preserves_trace_and_frobenius(n in 1usize..10, seed in prop::collection::vec(-5.0f64..5.0, 100)) {
        let m = SymMatrix::from_fn(n, |i, j| seed[i.min(j) * 10 + i.max(j)]);
        let (vals, _) = jacobi_eigen(&m, false);
        let tr: f64 = vals.iter().sum();
        let fro: f64 = vals.iter().map(|v| v * v).sum();
        prop_assert!((tr - m.trace()).abs() < 1e-9 * m.frobenius_sq().max(1.0));
        prop_assert!((fro - m.frobenius_sq()).abs() < 1e-9 * m.frobenius_sq().max(1.0));
        let clusters = cluster_sorted(&vals, 1e-6);
        prop_assert_eq!(clusters.iter().map(|c| c.1).sum::<usize>(), n);
    }

    #[test]
    fn root_system_display_roundtrips(parts in prop::collection::vec((0usize..3, 1usize..9, 1usize..4), 1..4)) {
        let text: Vec<String> = parts
            .iter()
            .map(|&(k, r, m)| match k {
                0 => format!("A{r}^{m}"),
                1 => format!("D{}^{m}", r + 3),
                _ => format!("E{}^{m}", 6 + r % 3),
            })
            .collect();
        let rs = RootSystem::from_str(&text.join("+")).unwrap();
        let again = RootSystem::from_str(&rs.to_string()).unwrap();
        prop_assert!(rs.same_as(&again));
        prop_assert_eq!(rs.to_string(), again.to_string());
    }
}
