//! Generic in-place FFT-trick transform over `Z_q[x]/(x^n - x^(n/2) + 1)`.
//!
//! The first stage splits the trinomial into `(x^(n/2) - z1)(x^(n/2) - z2)`
//! with `z1` a primitive sixth root of unity, so `z1 + z2 = 1` and
//! `z1 * z2 = 1`. Every later stage splits a block `x^(r*m) - zeta^e` into
//! `r` blocks `x^m - zeta^(e/r + j*order/r)` (children stored contiguously,
//! in order of `j`). Twiddles are kept in Montgomery form.

use crate::ring::Modulus;
use crate::Error;

/// One base ring `Z_q[x]/(x^degree - zeta^tau)` of an NTT-domain layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub degree: usize,
    pub tau: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Trinomial,
    Radix2,
    Radix3,
}

#[derive(Clone, Debug)]
struct Stage {
    kind: Kind,
    /// Length of an input block.
    block: usize,
    /// Barrett-reduce all coefficients before this stage.
    reduce_before: bool,
    fwd: Vec<i16>,
    inv: Vec<i16>,
}

/// A precomputed transform for one `(q, n, zeta)` combination.
#[derive(Clone, Debug)]
pub struct Transform {
    pub m: Modulus,
    pub n: usize,
    pub zeta: i64,
    pub order: u32,
    pub segments: Vec<Segment>,
    /// `zeta^tau * 2^16 mod q` per segment, for base multiplication.
    pub seg_mont: Vec<i16>,
    stages: Vec<Stage>,
    inv_scale: i16,
    /// Bound on `|coeff|` after `forward`.
    pub out_bound: i32,
}

fn has_order(m: &Modulus, zeta: i64, order: u32) -> bool {
    if m.pow(zeta, order as u64) != 1 {
        return false;
    }
    [2u32, 3, 5, 7].iter().all(|&p| !order.is_multiple_of(p) || m.pow(zeta, (order / p) as u64) != 1)
}

/// Smallest element of exact multiplicative order `order` mod `q`.
pub fn find_root(m: &Modulus, order: u32) -> Option<i64> {
    (2..m.q as i64).find(|&z| has_order(m, z, order))
}

impl Transform {
    /// Builds a transform with `radix2` radix-2 levels after the first split,
    /// optionally followed by one radix-3 level.
    pub fn build(
        m: Modulus,
        n: usize,
        zeta: i64,
        order: u32,
        radix2: usize,
        radix3: bool,
    ) -> Result<Self, Error> {
        let bad = |why: String| Error::InvalidParams(why);
        if !has_order(&m, zeta, order) {
            return Err(bad(format!("{zeta} is not a primitive {order}-th root mod {}", m.q)));
        }
        if !order.is_multiple_of(6) {
            return Err(bad("root order must be divisible by 6".into()));
        }
        let q = m.q as i64;
        let pw = |e: i64| m.pow(zeta, e.rem_euclid(order as i64) as u64);
        let mont = |x: i16| m.center(x as i64 * (1 << 16));
        let inv_of = |x: i16| m.pow(x as i64, (q - 2) as u64);

        let ord = order as i64;
        let z1 = pw(ord / 6);
        let z2 = pw(5 * ord / 6);
        if m.center(z1 as i64 + z2 as i64) != 1 || m.center(z1 as i64 * z2 as i64) != 1 {
            return Err(bad("first split roots do not satisfy z1 + z2 = z1 * z2 = 1".into()));
        }
        let mut stages = vec![Stage {
            kind: Kind::Trinomial,
            block: n,
            reduce_before: false,
            fwd: vec![mont(z1)],
            inv: vec![mont(inv_of(m.center(2 * z1 as i64 - 1))), mont(z1)],
        }];
        let mut exps: Vec<i64> = vec![ord / 6, 5 * ord / 6];
        let mut block = n / 2;

        for _ in 0..radix2 {
            if !block.is_multiple_of(2) {
                return Err(bad(format!("block of length {block} cannot be halved")));
            }
            let mut fwd = Vec::with_capacity(exps.len());
            let mut inv = Vec::with_capacity(exps.len());
            let mut next = Vec::with_capacity(2 * exps.len());
            for &e in &exps {
                if e % 2 != 0 {
                    return Err(bad(format!("exponent {e} is odd at block length {block}")));
                }
                let w = e / 2;
                fwd.push(mont(pw(w)));
                inv.push(mont(pw(-w)));
                next.push(w);
                next.push(w + ord / 2);
            }
            stages.push(Stage { kind: Kind::Radix2, block, reduce_before: false, fwd, inv });
            exps = next;
            block /= 2;
        }

        if radix3 {
            if !block.is_multiple_of(3) || ord % 3 != 0 {
                return Err(bad(format!("block of length {block} cannot be split in three")));
            }
            let rho = ord / 3;
            let mut fwd = Vec::with_capacity(6 * exps.len());
            let mut inv = Vec::with_capacity(6 * exps.len());
            let mut next = Vec::with_capacity(3 * exps.len());
            for &e in &exps {
                if e % 3 != 0 {
                    return Err(bad(format!("exponent {e} is not divisible by 3")));
                }
                let w = e / 3;
                for j in 0..3 {
                    fwd.push(mont(pw(w + j * rho)));
                    fwd.push(mont(pw(2 * w + 2 * j * rho)));
                    next.push(w + j * rho);
                }
                for j in 0..3 {
                    inv.push(mont(pw(-w - j * rho)));
                }
                for j in 0..3 {
                    inv.push(mont(pw(-2 * w - 2 * j * rho)));
                }
            }
            stages.push(Stage { kind: Kind::Radix3, block, reduce_before: false, fwd, inv });
            exps = next;
            block /= 3;
        }

        let k = (1i64 << radix2) * if radix3 { 3 } else { 1 };
        let inv_scale = mont(inv_of(m.center(k)));
        let segments: Vec<Segment> =
            exps.iter().map(|&e| Segment { degree: block, tau: e.rem_euclid(ord) as u32 }).collect();
        let seg_mont = segments.iter().map(|s| mont(pw(s.tau as i64))).collect();

        let mut t = Transform {
            m,
            n,
            zeta,
            order,
            segments,
            seg_mont,
            stages,
            inv_scale,
            out_bound: 0,
        };
        t.plan_reductions();
        Ok(t)
    }

    /// Static bound analysis: insert a Barrett pass before any stage whose
    /// output could exceed `min(8q, i16::MAX)`.
    fn plan_reductions(&mut self) {
        let q = self.m.q as i64;
        let limit = (8 * q).min(i16::MAX as i64);
        let reduced = (q + 1) / 2;
        let mont_out = |b: i64, tw: i64| (b * tw + (1 << 15) * q) / (1 << 16) + 1;
        let mut b = reduced;
        for st in &mut self.stages {
            let tw = st.fwd.iter().map(|&t| (t as i64).abs()).max().unwrap_or(0);
            let grow = |b: i64| match st.kind {
                Kind::Trinomial => 2 * b + mont_out(b, tw),
                Kind::Radix2 => b + mont_out(b, tw),
                Kind::Radix3 => b + 2 * mont_out(b, tw),
            };
            if grow(b) > limit {
                st.reduce_before = true;
                b = reduced;
            }
            b = grow(b);
            assert!(b <= limit);
        }
        self.out_bound = b as i32;
    }

    fn reduce_all(&self, a: &mut [i16]) {
        for x in a.iter_mut() {
            *x = self.m.barrett_reduce(*x);
        }
    }

    /// In-place forward transform; output bounded by `out_bound`.
    pub fn forward(&self, a: &mut [i16]) {
        assert_eq!(a.len(), self.n);
        let m = &self.m;
        self.reduce_all(a);
        for st in &self.stages {
            if st.reduce_before {
                self.reduce_all(a);
            }
            match st.kind {
                Kind::Trinomial => {
                    let h = st.block / 2;
                    let z = st.fwd[0];
                    let (lo, hi) = a.split_at_mut(h);
                    for (l, u) in lo.iter_mut().zip(hi.iter_mut()) {
                        let t = m.fqmul(*u, z);
                        let x = *l;
                        *l = x + t;
                        *u = x + *u - t;
                    }
                }
                Kind::Radix2 => {
                    let h = st.block / 2;
                    for (blk, &w) in a.chunks_exact_mut(st.block).zip(&st.fwd) {
                        let (lo, hi) = blk.split_at_mut(h);
                        for (l, u) in lo.iter_mut().zip(hi.iter_mut()) {
                            let t = m.fqmul(*u, w);
                            let x = *l;
                            *l = x + t;
                            *u = x - t;
                        }
                    }
                }
                Kind::Radix3 => {
                    let s = st.block / 3;
                    for (blk, tw) in a.chunks_exact_mut(st.block).zip(st.fwd.chunks_exact(6)) {
                        for i in 0..s {
                            let (f0, f1, f2) = (blk[i], blk[i + s], blk[i + 2 * s]);
                            blk[i] = f0 + m.fqmul(f1, tw[0]) + m.fqmul(f2, tw[1]);
                            blk[i + s] = f0 + m.fqmul(f1, tw[2]) + m.fqmul(f2, tw[3]);
                            blk[i + 2 * s] = f0 + m.fqmul(f1, tw[4]) + m.fqmul(f2, tw[5]);
                        }
                    }
                }
            }
        }
        debug_assert!(a.iter().all(|&x| (x as i32).abs() <= self.out_bound));
    }

    /// In-place inverse transform; output centered mod q.
    pub fn inverse(&self, a: &mut [i16]) {
        assert_eq!(a.len(), self.n);
        let m = &self.m;
        self.reduce_all(a);
        for st in self.stages.iter().rev() {
            match st.kind {
                Kind::Trinomial => {
                    let h = st.block / 2;
                    let (s, z) = (st.inv[0], st.inv[1]);
                    let (lo, hi) = a.split_at_mut(h);
                    for (l, u) in lo.iter_mut().zip(hi.iter_mut()) {
                        let f_hi = m.fqmul(*l - *u, s);
                        *l = m.barrett_reduce(*l - m.fqmul(f_hi, z));
                        *u = f_hi;
                    }
                }
                Kind::Radix2 => {
                    let h = st.block / 2;
                    for (blk, &w) in a.chunks_exact_mut(st.block).zip(&st.inv) {
                        let (lo, hi) = blk.split_at_mut(h);
                        for (l, u) in lo.iter_mut().zip(hi.iter_mut()) {
                            let (x, y) = (*l, *u);
                            *l = m.barrett_reduce(x + y);
                            *u = m.fqmul(x - y, w);
                        }
                    }
                }
                Kind::Radix3 => {
                    let s = st.block / 3;
                    for (blk, tw) in a.chunks_exact_mut(st.block).zip(st.inv.chunks_exact(6)) {
                        for i in 0..s {
                            let (a0, a1, a2) = (blk[i], blk[i + s], blk[i + 2 * s]);
                            blk[i] = m.barrett_reduce(a0 + a1 + a2);
                            blk[i + s] = m.barrett_reduce(
                                m.fqmul(a0, tw[0]) + m.fqmul(a1, tw[1]) + m.fqmul(a2, tw[2]),
                            );
                            blk[i + 2 * s] = m.barrett_reduce(
                                m.fqmul(a0, tw[3]) + m.fqmul(a1, tw[4]) + m.fqmul(a2, tw[5]),
                            );
                        }
                    }
                }
            }
        }
        for x in a.iter_mut() {
            *x = m.reduce_centered(m.fqmul(*x, self.inv_scale));
        }
    }
}
