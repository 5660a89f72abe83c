use ere_stab::curves::{degenerate_samples, trace};
use ere_stab::essential::{closed_form_multipliers_e0, monodromy};
use ere_stab::galerkin::{index_pair, kernel_recurrence_test, Omega, RecurrenceVerdict};
use ere_stab::make_params;
use ere_stab::model::{from_tilde, to_tilde};
use ere_stab::regions::{classify_params, Verdict};
use ere_stab::sympl::symplectic_spectrum;
use nalgebra::Complex;
use proptest::prelude::*;

type C64 = Complex<f64>;

fn point() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.1f64..10.0, 0.0f64..1.0, 0.0f64..0.95).prop_map(|(a, s, e)| (a, 0.1 + s * (a - 0.1), e))
}

fn multiset_distance(a: &[C64; 4], b: &[C64; 4]) -> f64 {
    let mut best = f64::INFINITY;
    for p in 0..24usize {
        let mut idx = vec![0, 1, 2, 3];
        let mut k = p;
        let mut perm = Vec::new();
        for r in (1..=4).rev() {
            perm.push(idx.remove(k % r));
            k /= r;
        }
        let d = (0..4).map(|i| (a[i] - b[perm[i]]).norm() / b[perm[i]].norm().max(1.0)).fold(0.0, f64::max);
        best = best.min(d);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn monodromy_is_symplectic((a, b, e) in point()) {
        let r = monodromy(&make_params(a, b, e).unwrap(), 1e-12).unwrap();
        prop_assert!(r.symplectic_residual < 1e-9, "{} at ({a}, {b}, {e})", r.symplectic_residual);
        prop_assert!((r.det - 1.0).abs() < 1e-6);
    }

    #[test]
    fn spectrum_is_reciprocal((a, b, e) in point()) {
        let r = monodromy(&make_params(a, b, e).unwrap(), 1e-12).unwrap();
        for l in r.spectrum {
            let inv = 1.0 / l;
            let d = r.spectrum.iter().map(|m| (m - inv).norm() / inv.norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-7, "1/{l} missing, relative distance {d}");
        }
    }

    #[test]
    fn e0_spectrum_matches_characteristic_polynomial(a in 0.1f64..6.0, s in 0.0f64..1.0) {
        let b = 0.1 + s * (a - 0.1);
        let r = monodromy(&make_params(a, b, 0.0).unwrap(), 1e-12).unwrap();
        let d = multiset_distance(&r.spectrum, &closed_form_multipliers_e0(a, b));
        prop_assert!(d < 1e-8, "distance {d} at ({a}, {b})");
    }

    #[test]
    fn unit_multiplicities_fit_in_dimension((a, b, e) in point(), psi in 0.0f64..std::f64::consts::PI) {
        let r = monodromy(&make_params(a, b, e).unwrap(), 1e-12).unwrap();
        let mut total = 0;
        let mut seen: Vec<C64> = Vec::new();
        for w in r.spectrum.iter().copied().chain([C64::from_polar(1.0, psi)]) {
            if (w.norm() - 1.0).abs() > 1e-6 || seen.iter().any(|s| (s - w).norm() < 1e-6) {
                continue;
            }
            seen.push(w);
            total += r.nullity(w, 1e-8);
        }
        prop_assert!(total <= 4);
    }

    #[test]
    fn plain_and_factored_spectra_agree(a in 0.1f64..3.0, s in 0.0f64..1.0, e in 0.0f64..0.5) {
        let b = 0.1 + s * (a - 0.1);
        let r = monodromy(&make_params(a, b, e).unwrap(), 1e-12).unwrap();
        let plain = symplectic_spectrum(&r.m);
        let tol = 1e-6 * r.m.norm().max(1.0);
        prop_assert!(multiset_distance(&plain, &r.spectrum) < tol);
    }

    #[test]
    fn index_non_decreasing_in_beta(a in 0.5f64..6.0, s in 0.05f64..0.9, ds in 0.01f64..0.1, e in 0.0f64..0.6) {
        let b1 = s * a;
        let b2 = (s + ds) * a;
        for omega in [Omega::Plus1, Omega::Minus1] {
            let r1 = index_pair(&make_params(a, b1, e).unwrap(), omega);
            let r2 = index_pair(&make_params(a, b2, e).unwrap(), omega);
            // Truncations disagree only on a degenerate surface.
            prop_assume!(r1.is_ok() && r2.is_ok());
            let (i1, i2) = (r1.unwrap().index, r2.unwrap().index);
            prop_assert!(i1 <= i2, "{omega:?} at α = {a}, e = {e}: {i1} at β = {b1}, {i2} at β = {b2}");
        }
    }

    #[test]
    fn hyperbolic_verdicts_have_no_unit_kernel((a, b, e) in point()) {
        let v = classify_params(&make_params(a, b, e).unwrap()).unwrap();
        if v.verdict == Verdict::HyperbolicUnstable {
            for w in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0)] {
                prop_assert_eq!(v.monodromy.nullity(w, 1e-8), 0);
            }
            prop_assert_eq!(v.index_plus1.nullity, 0);
            prop_assert_eq!(v.index_minus1.nullity, 0);
        }
    }
}

#[test]
fn tilde_transform_round_trips_on_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for k in 0..10 {
            let (a, b) = (0.1 + i as f64 * 0.9, 0.05 + k as f64 * 0.45);
            let (at, bt) = to_tilde(a, b);
            let (a2, b2) = from_tilde(at, bt);
            worst = worst.max((a2 - a).abs()).max((b2 - b).abs());
        }
    }
    assert!(worst < 1e-14, "{worst}");
}

#[test]
fn degeneracy_tests_agree_on_traced_samples() {
    for (alpha, omega, n) in [(2.0, Omega::Plus1, 1), (2.0, Omega::Minus1, 0), (4.0, Omega::Minus1, 1)] {
        for s in trace(alpha, omega, n, 0.2, 0.1, 1e-10).unwrap() {
            let p = make_params(s.alpha, s.beta, s.e).unwrap();
            let m = monodromy(&p, 1e-12).unwrap();
            let w = C64::new(omega.sign(), 0.0);
            assert!(s.multiplicity >= 1);
            assert!(m.nullity(w, 1e-6) >= 1, "{omega:?} n = {n} at α = {alpha}, e = {}", s.e);
            if omega == Omega::Plus1 && s.e > 0.0 {
                let r = kernel_recurrence_test(&p, 64, 1e-8).unwrap();
                assert_eq!(r.verdict, RecurrenceVerdict::Degenerate, "e = {}", s.e);
            }
        }
    }
}

#[test]
fn one_and_minus_one_curves_do_not_meet() {
    let res = 1e-10;
    for alpha in [1.5, 2.0, 3.0, 5.0] {
        for e in [0.0, 0.15, 0.3] {
            let mut plus: Vec<f64> = Vec::new();
            let mut minus: Vec<f64> = Vec::new();
            for n in 1..=2 {
                plus.extend(degenerate_samples(alpha, Omega::Plus1, e, n, res).unwrap().iter().map(|s| s.beta));
            }
            for n in 0..=1 {
                minus.extend(degenerate_samples(alpha, Omega::Minus1, e, n, res).unwrap().iter().map(|s| s.beta));
            }
            for p in &plus {
                for m in &minus {
                    assert!((p - m).abs() > 2.0 * res, "α = {alpha}, e = {e}: {p} vs {m}");
                }
            }
        }
    }
}
