use collide_core::gf::{make_extension, FieldCtx};
use collide_core::iterates::{additive_closed_form, iterate_param_poly, iterate_value, verify_coefficient_lemmas};
use collide_core::orbit::FamilySpec;
use proptest::prelude::*;

const FIELDS: [(u64, u32); 6] = [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (7, 1)];

fn ctx(i: usize) -> FieldCtx {
    let (p, k) = FIELDS[i];
    make_extension(p, k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn evaluation_matches_iteration(i in 0..FIELDS.len(), a: u64, l: u64, d in 2u64..=6, n in 1u32..=5) {
        let c = ctx(i);
        let alpha = c.elem(a % c.q()).unwrap();
        let lambda = c.elem(l % c.q()).unwrap();
        let p = iterate_param_poly(&c, &alpha, d, n).unwrap();
        prop_assert_eq!(p.poly.degree(), Some(d.pow(n - 1) as usize));
        let direct = iterate_value(&FamilySpec::pure(d).unwrap(), &alpha, &lambda, n as u64).unwrap();
        prop_assert_eq!(p.poly.eval(&lambda).unwrap(), direct);
    }
}

#[test]
fn closed_form_matches_recurrence() {
    for p in [2u64, 3, 5] {
        let c = make_extension(p, 2).unwrap();
        for ell in 1..=2u32 {
            for n in 1..=4u32 {
                if p.pow(ell * (n - 1)) > 20_000 {
                    continue;
                }
                for v in (0..c.q()).take(20) {
                    let a = c.elem(v).unwrap();
                    let rec = iterate_param_poly(&c, &a, p.pow(ell), n).unwrap().poly;
                    assert_eq!(additive_closed_form(ell, n, &a).unwrap(), rec, "p={p} l={ell} n={n} a={v}");
                }
            }
        }
    }
}

#[test]
fn basic_coefficient_identities() {
    for p in [2, 3, 5] {
        for d in 2..=10 {
            for n in 1..=4 {
                let r = verify_coefficient_lemmas(p, d, n).unwrap();
                assert!(r.basic_passed(), "{r:?}");
            }
        }
    }
}

/// The first-term prediction fails exactly for `d = 2`, odd `p`, `n >= 2`,
/// where the `+λ` of the last step lands on `λ^1`.
#[test]
fn structure_identity_holds_outside_d2_odd_p() {
    for p in [2u64, 3, 5] {
        for d in 2..=10 {
            for n in 1..=4 {
                let r = verify_coefficient_lemmas(p, d, n).unwrap();
                let exception = d == 2 && p % 2 == 1 && n >= 2;
                assert_eq!(r.passed(), !exception, "{r:?}");
                if exception {
                    let s = r.structure.unwrap();
                    assert!(s.vanishing && !s.first_term);
                }
            }
        }
    }
}
