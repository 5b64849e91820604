//! Products `c * f mod q2` computed exactly over `Z` through NTTs modulo
//! `q = 3457` and `q' = 7681` and CRT recombination modulo `Q = q * q'`.
//!
//! The `q'` transform splits the trinomial and then runs seven radix-2
//! levels with a root of order 768, ending in 256 base rings of degree
//! `n/256` (2, 3 or 4).

use super::{basemul, Backend, LayoutId, NttTables, Transform, MOD_Q_PRIME, Q_PRIME};
use crate::params::{ParameterSet, PARAMETER_SETS, Q};
use crate::ring::center_pow2;
use crate::Error;
use std::sync::OnceLock;

/// `Q = q * q'`.
pub const Q_PRODUCT: i64 = Q as i64 * Q_PRIME as i64;

#[derive(Clone, Debug)]
pub struct MultiModTables {
    pub n: usize,
    pub q2: i16,
    pub layout_id: LayoutId,
    q_side: &'static NttTables,
    prime: Transform,
    /// `q^-1 mod q'`, centered.
    q_inv: i16,
}

/// Worst-case `|c * f|` coefficient for `|c| <= q2/2` and `f = 2f' + 1`
/// with `|f'| <= eta`: at most `3n/2` terms, one of which involves `f_0`.
pub fn product_bound(n: usize, q2: i16, eta: u8) -> i64 {
    let max_c = if q2 == Q { (Q as i64 - 1) / 2 } else { q2 as i64 / 2 };
    max_c * ((3 * n as i64 / 2) * 2 * eta as i64 + 1)
}

impl MultiModTables {
    pub fn new(n: usize, q2: i16, eta: u8, backend: Backend) -> Result<Self, Error> {
        let bound = product_bound(n, q2, eta);
        if 2 * bound >= Q_PRODUCT {
            return Err(Error::ProductBound { bound });
        }
        let zeta = super::find_root(&MOD_Q_PRIME, 768).expect("7681 has roots of order 768");
        let prime = Transform::build(MOD_Q_PRIME, n, zeta, 768, 7, false)?;
        Ok(MultiModTables {
            n,
            q2,
            layout_id: LayoutId::Prime7681(n),
            q_side: NttTables::get(n, backend)?,
            prime,
            q_inv: MOD_Q_PRIME.pow(Q as i64, Q_PRIME as u64 - 2),
        })
    }

    /// Cached tables for a registered parameter set.
    pub fn get(params: &ParameterSet, backend: Backend) -> Result<&'static MultiModTables, Error> {
        static CACHE: [OnceLock<Result<MultiModTables, Error>>; 3 * PARAMETER_SETS.len()] =
            [const { OnceLock::new() }; 3 * PARAMETER_SETS.len()];
        let idx = PARAMETER_SETS
            .iter()
            .position(|p| p == params)
            .ok_or_else(|| Error::UnknownParameterSet(params.name.to_string()))?;
        CACHE[idx * 3 + backend as usize]
            .get_or_init(|| MultiModTables::new(params.n, params.q2, params.eta1, backend))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Base rings of the `q'` transform.
    pub fn prime_transform(&self) -> &Transform {
        &self.prime
    }

    fn mul_prime(&self, c: &[i16], f: &[i16]) -> Vec<i16> {
        let t = &self.prime;
        let mut a = c.to_vec();
        let mut b = f.to_vec();
        t.forward(&mut a);
        t.forward(&mut b);
        let mut prod = vec![0i16; self.n];
        let mut off = 0;
        for (seg, &zm) in t.segments.iter().zip(&t.seg_mont) {
            let r = off..off + seg.degree;
            basemul(&MOD_Q_PRIME, &a[r.clone()], &b[r.clone()], zm, &mut prod[r]);
            off += seg.degree;
        }
        t.inverse(&mut prod);
        prod
    }

    /// `c * f` centered mod `q2`, for `c` centered mod `q2` and `f` within
    /// the bound checked at construction.
    pub fn mul_q2(&self, c: &[i16], f: &[i16]) -> Vec<i16> {
        assert_eq!(c.len(), self.n);
        assert_eq!(f.len(), self.n);
        let a = self.q_side.multiply_raw(c, f);
        if self.q2 == Q {
            return a;
        }
        let b = self.mul_prime(c, f);
        a.iter()
            .zip(&b)
            .map(|(&a, &b)| {
                let x = crt(a, b, self.q_inv);
                center_pow2(x, self.q2 as i32) as i16
            })
            .collect()
    }

    /// `c * f` centered mod `Q`; exposed for testing the CRT step.
    pub fn mul_exact(&self, c: &[i16], f: &[i16]) -> Vec<i64> {
        let a = self.q_side.multiply_raw(c, f);
        let b = self.mul_prime(c, f);
        a.iter()
            .zip(&b)
            .map(|(&a, &b)| crt(a, b, self.q_inv) as i64)
            .collect()
    }
}

/// The representative of `x = a mod q`, `x = b mod q'` in
/// `[-(Q-1)/2, (Q-1)/2]`, branch-free.
#[inline(always)]
fn crt(a: i16, b: i16, q_inv: i16) -> i32 {
    let m = &MOD_Q_PRIME;
    let u = m.reduce_centered(m.mul(b - a, q_inv));
    let x = a as i32 + Q as i32 * u as i32;
    let h = ((Q_PRODUCT - 1) / 2) as i32;
    let qq = Q_PRODUCT as i32;
    let x = x - (((h - x) >> 31) & qq);
    x + (((x + h) >> 31) & qq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::get_parameter_set;
    use crate::ring::{schoolbook_mul, schoolbook_mul_z};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_layouts() {
        for (n, d) in [(512, 2), (768, 3), (1024, 4)] {
            let t = MultiModTables::new(n, 1024, 2, Backend::Unified).unwrap();
            assert!(t.prime.segments.iter().all(|s| s.degree == d));
            assert_eq!(t.prime.segments.len(), 256);
        }
    }

    #[test]
    fn bound_rejection() {
        let p = get_parameter_set("ctru-1024-q3457-b3").unwrap();
        assert!(matches!(MultiModTables::get(p, Backend::Radix2), Err(Error::ProductBound { .. })));
        let p = get_parameter_set("ctru-768-q3457-b3").unwrap();
        assert!(MultiModTables::get(p, Backend::MixedRadix).is_ok());
    }

    #[test]
    fn matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for name in ["ctru-512", "cntr-768", "ctru-1024", "ctru-768-q3457-b3"] {
            let p = get_parameter_set(name).unwrap();
            let t = MultiModTables::get(p, Backend::canonical(p.n)).unwrap();
            let eta = p.eta1 as i16;
            let lo = if p.q2 == Q { -1728 } else { -p.q2 / 2 };
            let hi = if p.q2 == Q { 1728 } else { p.q2 / 2 - 1 };
            for _ in 0..5 {
                let c: Vec<i16> = (0..p.n).map(|_| rng.gen_range(lo..=hi)).collect();
                let mut f: Vec<i16> = (0..p.n).map(|_| 2 * rng.gen_range(-eta..=eta)).collect();
                f[0] += 1;
                let got = t.mul_q2(&c, &f);
                let want = schoolbook_mul(&c, &f, p.q2 as i64);
                assert_eq!(got.iter().map(|&x| x as i64).collect::<Vec<_>>(), want, "{name}");
                if p.q2 != Q {
                    assert_eq!(t.mul_exact(&c, &f), schoolbook_mul_z(&c, &f));
                }
            }
        }
    }

    #[test]
    fn worst_case_extremes() {
        // all-max inputs push coefficients towards the bound
        let p = get_parameter_set("ctru-1024").unwrap();
        let t = MultiModTables::get(p, Backend::Radix2).unwrap();
        let c = vec![-1024i16; 1024];
        let mut f = vec![-4i16; 1024];
        f[0] = 5;
        assert_eq!(t.mul_exact(&c, &f), schoolbook_mul_z(&c, &f));
    }
}
