//! Exact engine against independent enumerations.

mod common;

use common::*;
use num_rational::Ratio;
use proptest::prelude::*;
use stofuzz_core::analysis::oracle;
use stofuzz_core::fuzzy::*;

/// Law of u1 + u2 with u uniform on 0..2^k, by counting pairs exactly.
fn convolution_oracle(k: u32) -> Vec<Ratio<u64>> {
    let n = 1u64 << k;
    let mut counts = vec![0u64; (2 * n - 1) as usize];
    for a in 0..n {
        for b in 0..n {
            counts[(a + b) as usize] += 1;
        }
    }
    counts.into_iter().map(|c| Ratio::new(c, n * n)).collect()
}

#[test]
fn triangles_equal_exact_convolution() {
    for bits in 2..=6u32 {
        let u = universe(bits);
        for k in 0..bits {
            let law = convolution_oracle(k);
            for shift in 0..=(u.max_code() + 2 - (2 << k)) {
                let pdf = make_triangular_pdf(u, shift, (1 << k) - 1).unwrap();
                for code in u.codes() {
                    let want = code
                        .checked_sub(shift)
                        .and_then(|j| law.get(j as usize))
                        .map(|r| *r.numer() as f64 / *r.denom() as f64)
                        .unwrap_or(0.0);
                    assert_eq!(pdf.at(code), want, "bits {bits} k {k} shift {shift} code {code}");
                }
                assert!((pdf.mass().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn product_of_offset_triangles_matches_enumeration() {
    let u = universe(4);
    let p = tri(u, 0, 2);
    let q = tri(u, 2, 2);
    let law = oracle::coincidence_law(&p, &q).unwrap();
    let prod = product_pdf(&p, &q).unwrap().normalized(u).unwrap();
    assert!(l1(&law, prod.mass()) < 1e-15);
    assert!((product_pdf(&p, &q).unwrap().normalizer - 31.0 / 256.0).abs() < 1e-15);
}

/// Rule bases used for exhaustive checks: all combinations of a few
/// triangles and singletons on small universes.
fn small_bases(bits: u32) -> Vec<RuleBase> {
    let u = universe(bits);
    let max = u.max_code();
    let var = |name: &str| {
        Variable::new(name, u)
            .with_term("lo", tri(u, 0, 1))
            .unwrap()
            .with_term("mid", tri(u, max / 2 - 1, 1))
            .unwrap()
            .with_term("hi", tri(u, max - 2, 1))
            .unwrap()
            .with_term("pt", MembershipPdf::point(u, max / 3).unwrap())
            .unwrap()
            .with_term("wide", tri(u, 0, bits - 1))
            .unwrap()
    };
    let r = |a, b, c| Rule::new(TermId(a), TermId(b), TermId(c));
    vec![
        RuleBase::new(var("a"), var("b"), var("y"), vec![r(0, 0, 2)]).unwrap(),
        RuleBase::new(var("a"), var("b"), var("y"), vec![r(0, 0, 0), r(1, 1, 1), r(2, 2, 2), r(4, 3, 4)]).unwrap(),
        RuleBase::new(
            var("a"),
            var("b"),
            var("y"),
            (0..5).flat_map(|i| (0..5).map(move |j| r(i, j, (i + j) % 5))).collect(),
        )
        .unwrap(),
    ]
}

#[test]
fn mixture_identity_exhaustive() {
    for bits in 2..=6 {
        for rb in small_bases(bits) {
            let u = rb.input_a().universe();
            for x1 in u.codes() {
                for x2 in u.codes() {
                    let ws: Vec<f64> = (0..rb.len()).map(|i| fire_strength(&rb, i, x1, x2).unwrap()).collect();
                    let total: f64 = ws.iter().sum();
                    let got = exact_output(&rb, x1, x2, UnionMode::Sum);
                    if total == 0.0 {
                        assert!(matches!(got, Err(stofuzz_core::Error::NoRuleFires { .. })));
                        continue;
                    }
                    let want = ws
                        .iter()
                        .zip(rb.rules())
                        .map(|(w, r)| w * rb.consequent(r).expectation())
                        .sum::<f64>()
                        / total;
                    assert!((got.unwrap() - want).abs() < 1e-12, "bits {bits} ({x1},{x2})");
                }
            }
        }
    }
}

#[test]
fn singleton_reduction_exhaustive() {
    for bits in 2..=5 {
        for rb in small_bases(bits) {
            let u = rb.input_a().universe();
            for mode in [UnionMode::Sum, UnionMode::Max] {
                for x1 in u.codes() {
                    for x2 in u.codes() {
                        let a = MembershipPdf::point(u, x1).unwrap();
                        let b = MembershipPdf::point(u, x2).unwrap();
                        match (compose_fuzzy_inputs(&rb, &a, &b, mode), exact_output(&rb, x1, x2, mode)) {
                            (Ok(c), Ok(y)) => assert!((defuzzify_cog(c.mass()).unwrap() - y).abs() < 1e-12),
                            (Err(_), Err(_)) => {}
                            other => panic!("bits {bits} ({x1},{x2}) {mode:?}: {other:?}"),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn composition_matches_relation_tensor() {
    for bits in 2..=5 {
        let u = universe(bits);
        let inputs = [
            MembershipPdf::uniform(u),
            tri(u, 0, 1),
            tri(u, 1, bits - 1),
            MembershipPdf::point(u, u.max_code()).unwrap(),
        ];
        for rb in small_bases(bits) {
            for mode in [UnionMode::Sum, UnionMode::Max] {
                let rel = oracle::relation(&rb, mode);
                for a in &inputs {
                    for b in &inputs {
                        let brute = oracle::compose(&rb, &rel, a.mass(), b.mass());
                        let total: f64 = brute.iter().sum();
                        match compose_fuzzy_inputs(&rb, a, b, mode) {
                            Ok(c) => {
                                let brute: Vec<f64> = brute.iter().map(|v| v / total).collect();
                                assert!(l1(c.mass(), &brute) < 1e-12, "bits {bits} {mode:?}");
                            }
                            Err(_) => assert_eq!(total, 0.0),
                        }
                    }
                }
                for x1 in u.codes() {
                    for x2 in u.codes() {
                        let brute = oracle::crisp_output(&rb, &rel, x1 as usize, x2 as usize);
                        match (exact_output(&rb, x1, x2, mode), brute) {
                            (Ok(y), Some(b)) => assert!((y - b).abs() < 1e-12),
                            (Err(_), None) => {}
                            other => panic!("{other:?}"),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn two_rule_fuzzy_composition_by_hand_formula() {
    let rb = single_rule();
    let u = universe(5);
    let a = tri(u, 1, 2);
    let c = compose_fuzzy_inputs(&rb, &a, &a, UnionMode::Sum).unwrap();
    // single rule: the weight is constant in y, so C' = C
    assert!(l1(c.mass(), tri(u, 25, 2).mass()) < 1e-12);
}

fn mass_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..10.0, len).prop_filter("non-zero", |v| v.iter().sum::<f64>() > 1e-6)
}

proptest! {
    #[test]
    fn cog_is_scale_invariant(m in mass_vec(16), lambda in 1e-3f64..1e3) {
        let scaled: Vec<f64> = m.iter().map(|v| v * lambda).collect();
        let a = defuzzify_cog(&m).unwrap();
        let b = defuzzify_cog(&scaled).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn cog_of_symmetric_mass_is_centre(half in prop::collection::vec(0.0f64..5.0, 1..8), centre in 8u32..24) {
        let mut m = vec![0.0; 32];
        m[centre as usize] = 1.0;
        for (d, v) in half.iter().enumerate() {
            let d = d as u32 + 1;
            if centre >= d && centre + d < 32 {
                m[(centre - d) as usize] = *v;
                m[(centre + d) as usize] = *v;
            }
        }
        prop_assert!((defuzzify_cog(&m).unwrap() - centre as f64).abs() < 1e-12);
    }

    #[test]
    fn product_commutes(p in mass_vec(16), q in mass_vec(16)) {
        let u = universe(4);
        let p = MembershipPdf::normalized(u, p).unwrap();
        let q = MembershipPdf::normalized(u, q).unwrap();
        prop_assert_eq!(product_pdf(&p, &q).unwrap(), product_pdf(&q, &p).unwrap());
    }

    #[test]
    fn constructors_are_normalized(bits in 2u32..=10, k in 0u32..4, shift_frac in 0.0f64..1.0, code_frac in 0.0f64..1.0) {
        let u = universe(bits);
        prop_assume!(k < bits);
        let room = u.max_code() + 2 - (2 << k);
        let shift = (shift_frac * room as f64) as u32;
        let t = make_triangular_pdf(u, shift, (1 << k) - 1).unwrap();
        prop_assert!((t.mass().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(t.mass().iter().all(|&m| m >= 0.0));
        let (lo, hi) = t.support();
        prop_assert_eq!((lo, hi), (shift, shift + 2 * ((1 << k) - 1)));
        let p = MembershipPdf::point(u, (code_frac * u.max_code() as f64) as u32).unwrap();
        prop_assert!((p.mass().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
