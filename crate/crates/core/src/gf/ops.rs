//! Raw arithmetic backends on integer-encoded field elements.
//!
//! Every hot loop in the crate (polynomial kernels, the orbit engine) is
//! generic over [`FieldOps`] and instantiated once per backend through
//! [`with_ops!`](crate::with_ops). Elements are plain `u64` encodings
//! `sum c_i p^i`.

use super::digits;
use super::FieldInner;

pub(crate) trait FieldOps: Copy + Send + Sync {
    fn add(&self, a: u64, b: u64) -> u64;
    fn sub(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    fn inv(&self, a: u64) -> u64;
    /// `a^p`.
    fn frob(&self, a: u64) -> u64;

    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// `dst[i] -= c * src[i]`.
    #[inline]
    fn sub_scaled(&self, dst: &mut [u64], c: u64, src: &[u64]) {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.sub(*d, self.mul(c, s));
        }
    }

    /// `dst[i] += c * src[i]`.
    #[inline]
    fn add_scaled(&self, dst: &mut [u64], c: u64, src: &[u64]) {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.add(*d, self.mul(c, s));
        }
    }

    /// Schoolbook product; `out` has length `a.len() + b.len() - 1` and is
    /// overwritten.
    fn conv(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        out.iter_mut().for_each(|x| *x = 0);
        for (i, &x) in a.iter().enumerate() {
            if x != 0 {
                self.add_scaled(&mut out[i..i + b.len()], x, b);
            }
        }
    }

    /// `out = sum_i v[i] * rows[i*n .. (i+1)*n]`.
    fn mat_vec(&self, v: &[u64], rows: &[u64], n: usize, out: &mut [u64]) {
        out.iter_mut().for_each(|x| *x = 0);
        for (i, &x) in v.iter().enumerate() {
            if x != 0 {
                self.add_scaled(out, x, &rows[i * n..(i + 1) * n]);
            }
        }
    }
}

/// Prime field with a compile-time modulus; `%` compiles to multiply-shift.
#[derive(Clone, Copy)]
pub(crate) struct ConstPrime<const P: u64>;

impl<const P: u64> FieldOps for ConstPrime<P> {
    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= P {
            s - P
        } else {
            s
        }
    }
    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }
    #[inline(always)]
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            P - a
        }
    }
    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % P
    }
    fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        digits::inv_prime(a, P)
    }
    #[inline(always)]
    fn frob(&self, a: u64) -> u64 {
        a
    }
    #[inline(always)]
    fn sub_scaled(&self, dst: &mut [u64], c: u64, src: &[u64]) {
        let c = P - c;
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = (*d + c * s) % P;
        }
    }
    #[inline(always)]
    fn add_scaled(&self, dst: &mut [u64], c: u64, src: &[u64]) {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = (*d + c * s) % P;
        }
    }
    fn conv(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        // Products are below P^2 <= 49, so plain u64 accumulation cannot
        // overflow for any realistic length.
        out.iter_mut().for_each(|x| *x = 0);
        for (i, &x) in a.iter().enumerate() {
            if x != 0 {
                for (o, &y) in out[i..i + b.len()].iter_mut().zip(b) {
                    *o += x * y;
                }
            }
        }
        out.iter_mut().for_each(|x| *x %= P);
    }
    fn mat_vec(&self, v: &[u64], rows: &[u64], n: usize, out: &mut [u64]) {
        out.iter_mut().for_each(|x| *x = 0);
        for (i, &x) in v.iter().enumerate() {
            if x != 0 {
                for (o, &y) in out.iter_mut().zip(&rows[i * n..(i + 1) * n]) {
                    *o += x * y;
                }
            }
        }
        out.iter_mut().for_each(|x| *x %= P);
    }
}

/// Prime field with a runtime modulus `p < 2^31`.
#[derive(Clone, Copy)]
pub(crate) struct DynPrime {
    pub p: u64,
}

impl DynPrime {
    fn lazy_ok(&self) -> bool {
        self.p < (1 << 16)
    }
}

impl FieldOps for DynPrime {
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        digits::inv_prime(a, self.p)
    }
    fn frob(&self, a: u64) -> u64 {
        a
    }
    fn conv(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        if !self.lazy_ok() {
            out.iter_mut().for_each(|x| *x = 0);
            for (i, &x) in a.iter().enumerate() {
                self.add_scaled(&mut out[i..i + b.len()], x, b);
            }
            return;
        }
        out.iter_mut().for_each(|x| *x = 0);
        for (i, &x) in a.iter().enumerate() {
            if x != 0 {
                for (o, &y) in out[i..i + b.len()].iter_mut().zip(b) {
                    *o += x * y;
                }
            }
        }
        let p = self.p;
        out.iter_mut().for_each(|x| *x %= p);
    }
}

/// Small extension field (`q <= 256`) backed by full operation tables.
#[derive(Clone, Copy)]
pub(crate) struct TableOps<'a> {
    pub t: &'a Tables,
}

pub(crate) struct Tables {
    pub q: usize,
    pub add: Vec<u8>,
    pub sub: Vec<u8>,
    pub mul: Vec<u8>,
    pub neg: Vec<u8>,
    pub inv: Vec<u8>,
    pub frob: Vec<u8>,
}

impl Tables {
    pub(crate) fn build<F: FieldOps>(ops: F, q: usize, p: u64) -> Tables {
        let mut t = Tables {
            q,
            add: vec![0; q * q],
            sub: vec![0; q * q],
            mul: vec![0; q * q],
            neg: vec![0; q],
            inv: vec![0; q],
            frob: vec![0; q],
        };
        for a in 0..q {
            for b in 0..q {
                let (x, y) = (a as u64, b as u64);
                t.add[a * q + b] = ops.add(x, y) as u8;
                t.sub[a * q + b] = ops.sub(x, y) as u8;
                t.mul[a * q + b] = ops.mul(x, y) as u8;
            }
            t.neg[a] = ops.neg(a as u64) as u8;
            if a != 0 {
                t.inv[a] = ops.inv(a as u64) as u8;
            }
            t.frob[a] = ops.pow(a as u64, p) as u8;
        }
        t
    }
}

impl FieldOps for TableOps<'_> {
    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        self.t.add[a as usize * self.t.q + b as usize] as u64
    }
    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        self.t.sub[a as usize * self.t.q + b as usize] as u64
    }
    #[inline(always)]
    fn neg(&self, a: u64) -> u64 {
        self.t.neg[a as usize] as u64
    }
    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.t.mul[a as usize * self.t.q + b as usize] as u64
    }
    fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.t.inv[a as usize] as u64
    }
    #[inline(always)]
    fn frob(&self, a: u64) -> u64 {
        self.t.frob[a as usize] as u64
    }
    #[inline]
    fn sub_scaled(&self, dst: &mut [u64], c: u64, src: &[u64]) {
        let q = self.t.q;
        let row = &self.t.mul[c as usize * q..(c as usize + 1) * q];
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.t.sub[*d as usize * q + row[s as usize] as usize] as u64;
        }
    }
    #[inline]
    fn add_scaled(&self, dst: &mut [u64], c: u64, src: &[u64]) {
        let q = self.t.q;
        let row = &self.t.mul[c as usize * q..(c as usize + 1) * q];
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.t.add[*d as usize * q + row[s as usize] as usize] as u64;
        }
    }
}

/// `F_{2^k}` for `k > 8`: elements are bit vectors, addition is XOR.
#[derive(Clone, Copy)]
pub(crate) struct BinOps {
    pub k: u32,
    pub modbits: u64,
}

impl FieldOps for BinOps {
    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }
    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }
    #[inline]
    fn neg(&self, a: u64) -> u64 {
        a
    }
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        digits::bin_mul(a, b, self.k, self.modbits)
    }
    fn inv(&self, a: u64) -> u64 {
        digits::bin_inv(a, self.modbits)
    }
    fn frob(&self, a: u64) -> u64 {
        self.mul(a, a)
    }
}

/// Any extension field, through base-`p` digit vectors.
#[derive(Clone, Copy)]
pub(crate) struct GenericOps<'a> {
    pub f: &'a FieldInner,
}

impl FieldOps for GenericOps<'_> {
    fn add(&self, a: u64, b: u64) -> u64 {
        digits::add(a, b, self.f.p, self.f.k as usize)
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        let nb = digits::neg(b, self.f.p, self.f.k as usize);
        digits::add(a, nb, self.f.p, self.f.k as usize)
    }
    fn neg(&self, a: u64) -> u64 {
        digits::neg(a, self.f.p, self.f.k as usize)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        digits::mul(a, b, self.f.p, &self.f.modulus)
    }
    fn inv(&self, a: u64) -> u64 {
        digits::inv(a, self.f.p, &self.f.modulus)
    }
    fn frob(&self, a: u64) -> u64 {
        self.pow(a, self.f.p)
    }
}

/// Run `$body` with `$ops` bound to the fastest backend for `$ctx`.
macro_rules! with_ops {
    ($ctx:expr, |$ops:ident| $body:expr) => {{
        #[allow(unused_imports)]
        use $crate::gf::ops::FieldOps as _;
        let inner: &$crate::gf::FieldInner = $ctx.inner();
        match inner.kind {
            $crate::gf::Kind::P2 => {
                let $ops = $crate::gf::ops::ConstPrime::<2>;
                $body
            }
            $crate::gf::Kind::P3 => {
                let $ops = $crate::gf::ops::ConstPrime::<3>;
                $body
            }
            $crate::gf::Kind::P5 => {
                let $ops = $crate::gf::ops::ConstPrime::<5>;
                $body
            }
            $crate::gf::Kind::P7 => {
                let $ops = $crate::gf::ops::ConstPrime::<7>;
                $body
            }
            $crate::gf::Kind::Prime => {
                let $ops = $crate::gf::ops::DynPrime { p: inner.p };
                $body
            }
            $crate::gf::Kind::Table => {
                let $ops = $crate::gf::ops::TableOps {
                    t: inner.tables.as_ref().expect("table field without tables"),
                };
                $body
            }
            $crate::gf::Kind::Binary => {
                let $ops = $crate::gf::ops::BinOps {
                    k: inner.k,
                    modbits: inner.modbits,
                };
                $body
            }
            $crate::gf::Kind::Generic => {
                let $ops = $crate::gf::ops::GenericOps { f: inner };
                $body
            }
        }
    }};
}

pub(crate) use with_ops;
