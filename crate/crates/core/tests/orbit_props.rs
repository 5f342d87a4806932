use collide_core::gf::{enumerate_elements, make_extension};
use collide_core::iterates::{iterate_family_poly, DEFAULT_BUDGET};
use collide_core::orbit::{orbit_residues, orbit_search, portrait_of, FamilySpec, OrbitOutcome};
use collide_core::poly::{enumerate_irreducibles, Poly};
use proptest::prelude::*;

fn families(ctx: &collide_core::gf::FieldCtx) -> Vec<FamilySpec> {
    vec![
        FamilySpec::pure(2).unwrap(),
        FamilySpec::pure(3).unwrap(),
        FamilySpec::custom(Poly::new(ctx, vec![0, 1, 0, 1]).unwrap()).unwrap(),
    ]
}

/// All monic `g` of degree 1..=3, irreducible or not.
fn moduli(ctx: &collide_core::gf::FieldCtx) -> Vec<Poly> {
    let q = ctx.q();
    let mut out = Vec::new();
    for m in 1..=3u32 {
        for mut t in 0..q.pow(m) {
            let mut c = vec![0u64; m as usize + 1];
            for x in c.iter_mut().take(m as usize) {
                *x = t % q;
                t /= q;
            }
            c[m as usize] = 1;
            out.push(Poly::new(ctx, c).unwrap());
        }
    }
    out
}

#[test]
fn residues_match_explicit_iterates() {
    for p in [2, 3] {
        let ctx = make_extension(p, 1).unwrap();
        for fam in families(&ctx) {
            for alpha in enumerate_elements(&ctx) {
                let iters: Vec<Poly> = (1..=6)
                    .map(|n| iterate_family_poly(&ctx, &fam, &alpha, n, DEFAULT_BUDGET).unwrap())
                    .collect();
                for g in moduli(&ctx) {
                    let res = orbit_residues(&ctx, &g, &fam, &alpha, 6).unwrap();
                    assert_eq!(res[0], Poly::constant(&alpha).rem(&g).unwrap());
                    for n in 1..=6 {
                        assert_eq!(res[n], iters[n - 1].rem(&g).unwrap(), "{g} n={n}");
                    }
                }
            }
        }
    }
}

#[test]
fn hits_divide_and_cycles_avoid_target() {
    for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let ctx = make_extension(p, k).unwrap();
        for fam in families(&ctx) {
            for m in 1..=3 {
                for g in enumerate_irreducibles(&ctx, m).unwrap() {
                    for alpha in enumerate_elements(&ctx) {
                        let beta = &alpha + &ctx.one();
                        match orbit_search(&ctx, &g, &fam, &alpha, &beta, None).unwrap() {
                            OrbitOutcome::Hit(n) => {
                                assert!(n >= 1);
                                let b = Poly::constant(&beta);
                                match iterate_family_poly(&ctx, &fam, &alpha, n as u32, DEFAULT_BUDGET) {
                                    Ok(pn) => assert!((&pn - &b).rem(&g).unwrap().is_zero()),
                                    // too large to expand: replay the recurrence mod g
                                    Err(_) => {
                                        let res = orbit_residues(&ctx, &g, &fam, &alpha, n as usize).unwrap();
                                        assert_eq!(res[n as usize], b.rem(&g).unwrap());
                                    }
                                }
                            }
                            OrbitOutcome::Cycle(pt) => {
                                let res = orbit_residues(&ctx, &g, &fam, &alpha, pt.n as usize).unwrap();
                                let b = Poly::constant(&beta).rem(&g).unwrap();
                                assert!(res[1..].iter().all(|r| *r != b));
                                assert_eq!(res[pt.preperiod as usize], res[pt.n as usize]);
                            }
                            OrbitOutcome::Inconclusive(_) => panic!("default cap gave up on {g}"),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn tiny_step_cap_is_inconclusive() {
    let ctx = make_extension(3, 1).unwrap();
    let g = Poly::new(&ctx, vec![1, 2, 0, 1]).unwrap();
    let fam = FamilySpec::pure(2).unwrap();
    let out = orbit_search(&ctx, &g, &fam, &ctx.zero(), &ctx.elem(2).unwrap(), Some(1)).unwrap();
    assert!(matches!(out, OrbitOutcome::Inconclusive(_) | OrbitOutcome::Hit(1)));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    /// Replay the orbit in full and compare with the first repeat.
    #[test]
    fn portraits_are_minimal(fi in 0usize..4, a: u64, l: u64, which in 0usize..3) {
        let (p, k) = [(2, 4), (3, 3), (5, 2), (101, 1)][fi];
        let ctx = make_extension(p, k).unwrap();
        let fam = families(&ctx).swap_remove(which);
        let alpha = ctx.elem(a % ctx.q()).unwrap();
        let lambda = ctx.elem(l % ctx.q()).unwrap();
        let pt = portrait_of(&ctx, &lambda, &fam, &alpha).unwrap();
        let mut seen = std::collections::HashMap::new();
        let mut z = alpha.clone();
        let mut n = 0u64;
        let first = loop {
            if let Some(&i) = seen.get(&z.value()) {
                break (i, n);
            }
            seen.insert(z.value(), n);
            z = fam.apply(&z, &lambda).unwrap();
            n += 1;
        };
        prop_assert_eq!((pt.preperiod, pt.n), first);
    }
}
