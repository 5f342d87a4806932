use collide_core::gf::{FieldCtx, FqElem};

/// Direct search over γ, k <= r and s_1, s_2 <= 2q against the defining sums.
pub fn brute_force(ctx: &FieldCtx, ell: u32, d1: &FqElem, d2: &FqElem) -> bool {
    let p = ctx.p() as u128;
    let r = ctx.k();
    let q = ctx.q();
    for gv in 1..q {
        let gamma = ctx.elem(gv).unwrap();
        for k in 1..=r {
            let mut acc = ctx.zero();
            let (mut hit1, mut hit2) = (false, false);
            for i in 0..2 * q {
                let e = (i as u32 * k * ell) % r;
                acc = &acc + &gamma.pow_big(p.pow(e));
                hit1 |= acc == *d1;
                hit2 |= acc == *d2;
            }
            if hit1 && hit2 {
                return true;
            }
        }
    }
    false
}
