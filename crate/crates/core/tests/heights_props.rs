use collide_core::gf::{make_extension, FieldCtx};
use collide_core::heights::{
    apply, canonical_height_estimate, check_collision_bound, local_log_abs, places_of, variation_bounds, weil_height,
    Place, RationalFunction, DEFAULT_N_MAX,
};
use collide_core::poly::Poly;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_poly(rng: &mut ChaCha8Rng, ctx: &FieldCtx, max_deg: usize) -> Poly {
    let n = rng.gen_range(0..=max_deg + 1);
    Poly::new(ctx, (0..n).map(|_| rng.gen_range(0..ctx.q())).collect()).unwrap()
}

fn rand_nonzero_rf(rng: &mut ChaCha8Rng, ctx: &FieldCtx, max_deg: usize) -> RationalFunction {
    loop {
        let num = rand_poly(rng, ctx, max_deg);
        let den = rand_poly(rng, ctx, max_deg);
        if !num.is_zero() && !den.is_zero() {
            return RationalFunction::new(num, den).unwrap();
        }
    }
}

fn all_places(g: &RationalFunction) -> Vec<Place> {
    let mut v = vec![Place::Infinity];
    v.extend(places_of(&[g.num(), g.den()]).unwrap());
    v
}

#[test]
fn product_formula_and_height_as_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let fields = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)];
    for i in 0..500 {
        let (p, k) = fields[i % fields.len()];
        let ctx = make_extension(p, k).unwrap();
        let g = rand_nonzero_rf(&mut rng, &ctx, 5);
        let logs: Vec<i64> = all_places(&g).iter().map(|v| local_log_abs(&g, v).unwrap()).collect();
        assert_eq!(logs.iter().sum::<i64>(), 0, "{g}");
        let h: i64 = logs.iter().map(|&l| l.max(0)).sum();
        assert_eq!(h as u64, weil_height(&g), "{g}");
    }
}

#[test]
fn variation_bounds_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f5 = make_extension(5, 1).unwrap();
    for i in 0..200 {
        let d = 2 + (i % 2) as u64;
        let alpha = RationalFunction::from_poly(rand_poly(&mut rng, &f5, 5));
        let lambda = RationalFunction::from_poly(rand_poly(&mut rng, &f5, 5));
        let b = variation_bounds(&alpha, &lambda, d).unwrap_or_else(|e| panic!("{alpha} {lambda} {d}: {e:?}"));
        assert!(b.holds(), "{alpha} {lambda} d={d} {b:?}");
    }
}

#[test]
fn zero_is_the_tight_case() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f5 = make_extension(5, 1).unwrap();
    let zero = RationalFunction::zero(&f5);
    for i in 0..100 {
        let d = 2 + (i % 2) as u64;
        let lambda = rand_nonzero_rf(&mut rng, &f5, 4);
        let b = variation_bounds(&zero, &lambda, d).unwrap();
        let edge = Rational64::new(weil_height(&lambda) as i64, d as i64);
        assert_eq!(b.hhat, edge, "{lambda}");
        assert!(b.lower_ok && b.upper_ok);
    }
}

#[test]
fn collision_bound_on_constructed_collisions() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f5 = make_extension(5, 1).unwrap();
    let mut done = 0;
    while done < 100 {
        let d = 2 + (done % 2) as u64;
        let m = 1 + (done % 3) as u32;
        let alpha = RationalFunction::from_poly(rand_poly(&mut rng, &f5, 3));
        let lambda = RationalFunction::from_poly(rand_poly(&mut rng, &f5, 3));
        let mut beta = alpha.clone();
        for _ in 0..m {
            beta = apply(&beta, &lambda, d).unwrap();
        }
        if weil_height(&beta) * d > 4000 {
            continue;
        }
        assert!(check_collision_bound(&alpha, &beta, &lambda, d, m).unwrap(), "{alpha} {lambda}");
        done += 1;
    }
}

#[test]
fn canonical_height_scales_along_the_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f3 = make_extension(3, 1).unwrap();
    for _ in 0..60 {
        let d = rng.gen_range(2..=3u64);
        let alpha = RationalFunction::from_poly(rand_poly(&mut rng, &f3, 2));
        let lambda = RationalFunction::from_poly(rand_poly(&mut rng, &f3, 2));
        let base = canonical_height_estimate(&alpha, &lambda, d, DEFAULT_N_MAX).unwrap();
        assert!(base.exact);
        let mut z = alpha.clone();
        for m in 1..=3u32 {
            z = apply(&z, &lambda, d).unwrap();
            let r = canonical_height_estimate(&z, &lambda, d, DEFAULT_N_MAX).unwrap();
            assert!(r.exact);
            assert_eq!(r.hhat, base.hhat * Rational64::from_integer((d as i64).pow(m)));
        }
    }
}

#[test]
fn local_heights_sum_to_global() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f5 = make_extension(5, 1).unwrap();
    let mut compared = 0;
    for _ in 0..150 {
        let d = rng.gen_range(2..=3u64);
        let alpha = RationalFunction::from_poly(rand_poly(&mut rng, &f5, 4));
        let lambda = RationalFunction::from_poly(rand_poly(&mut rng, &f5, 4));
        let r = canonical_height_estimate(&alpha, &lambda, d, DEFAULT_N_MAX).unwrap();
        if let (true, Some(s)) = (r.exact, r.local_sum()) {
            assert_eq!(s, r.hhat, "{alpha} {lambda} d={d}");
            compared += 1;
        }
    }
    assert!(compared > 100);
}

#[test]
fn rational_parameters_with_poles() {
    let f5 = make_extension(5, 1).unwrap();
    let alpha = RationalFunction::parse(&f5, "[1]/[0,1]").unwrap();
    let lambda = RationalFunction::parse(&f5, "[0,0,1]/[1,1]").unwrap();
    let r = canonical_height_estimate(&alpha, &lambda, 2, DEFAULT_N_MAX).unwrap();
    assert!(r.exact);
    assert_eq!(r.local_sum(), Some(r.hhat));
    assert!(variation_bounds(&alpha, &lambda, 2).unwrap().holds());
}
