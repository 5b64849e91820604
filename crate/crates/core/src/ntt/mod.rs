//! Fast multiplication and inversion in `R_q`.
//!
//! Three back-ends are provided:
//!
//! * [`Backend::MixedRadix`] (`n = 768`): `zeta = 5` of order 1152, the
//!   trinomial split, six radix-2 levels and one radix-3 level, ending in
//!   384 base rings of degree 2.
//! * [`Backend::Radix2`] (`n = 512, 1024`): `zeta = 55` of order 384, the
//!   trinomial split and six radix-2 levels, ending in 128 base rings of
//!   degree `n/128`.
//! * [`Backend::Unified`] (all `n`): the input is split into `alpha = n/256`
//!   interleaved sub-polynomials, each transformed by one 256-point NTT
//!   over `y^256 - y^128 + 1` (`zeta = 55`, degree-2 base rings in `y`).
//!   With `y = x^alpha` the result is 128 base rings `x^(2 alpha) - zeta^tau`.
//!
//! NTT-domain layouts differ between back-ends and never leave the crate
//! boundary as bytes.

mod base;
mod engine;
mod multimod;

pub use base::{base_inverse, basemul, Cramer};
pub use engine::{find_root, Segment, Transform};
pub use multimod::{product_bound, MultiModTables, Q_PRODUCT};

use crate::ring::{Modulus, Poly, Rep, MOD_Q};
use crate::Error;
use std::sync::OnceLock;

/// Sub-transform length of the unified NTT.
pub const UNIFIED_N: usize = 256;

/// NTT implementation choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    MixedRadix,
    Radix2,
    Unified,
}

impl Backend {
    /// The dimension-specific back-end for `n`.
    pub fn canonical(n: usize) -> Backend {
        if n == 768 {
            Backend::MixedRadix
        } else {
            Backend::Radix2
        }
    }

    pub fn supports(self, n: usize) -> bool {
        match self {
            Backend::MixedRadix => n == 768,
            Backend::Radix2 => n == 512 || n == 1024,
            Backend::Unified => matches!(n, 512 | 768 | 1024),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::MixedRadix => "mixed-radix",
            Backend::Radix2 => "radix-2",
            Backend::Unified => "unified",
        }
    }
}

/// Identifies an NTT-domain layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LayoutId {
    MixedRadix768,
    Radix2(usize),
    Unified(usize),
    /// The `q' = 7681` transform used by the multi-moduli product.
    Prime7681(usize),
}

/// `q' = 7681`, the auxiliary NTT-friendly prime.
pub const Q_PRIME: i16 = 7681;
pub(crate) const MOD_Q_PRIME: Modulus = Modulus::new(Q_PRIME);

#[derive(Clone, Debug)]
enum Inner {
    Direct(Transform),
    Unified { sub: Transform, alpha: usize },
}

/// Precomputed tables for one `(n, backend)` pair.
#[derive(Clone, Debug)]
pub struct NttTables {
    pub n: usize,
    pub backend: Backend,
    pub layout_id: LayoutId,
    /// Base rings in storage order.
    pub layout: Vec<Segment>,
    /// `zeta^tau * 2^16 mod q` per base ring.
    seg_mont: Vec<i16>,
    inner: Inner,
}

/// Splits `f` into `alpha` sub-polynomials with `F_j[i] = f[alpha*i + j]`.
pub fn unified_split(f: &[i16], alpha: usize) -> Vec<Vec<i16>> {
    assert_eq!(f.len() % alpha, 0);
    (0..alpha).map(|j| f.iter().skip(j).step_by(alpha).copied().collect()).collect()
}

/// Inverse of [`unified_split`].
pub fn unified_merge(parts: &[Vec<i16>]) -> Vec<i16> {
    let alpha = parts.len();
    let len = parts[0].len();
    let mut f = vec![0i16; alpha * len];
    for (j, p) in parts.iter().enumerate() {
        for (i, &c) in p.iter().enumerate() {
            f[alpha * i + j] = c;
        }
    }
    f
}

/// Combines the `alpha` transformed sub-polynomials: `fhat[alpha*l + j] =
/// Fhat_j[l]`, so that base ring `k` occupies `fhat[2 alpha k..2 alpha (k+1)]`.
pub fn unified_combine(hats: &[Vec<i16>]) -> Vec<i16> {
    unified_merge(hats)
}

fn unified_uncombine(fhat: &[i16], alpha: usize) -> Vec<Vec<i16>> {
    unified_split(fhat, alpha)
}

impl NttTables {
    pub fn new(n: usize, backend: Backend) -> Result<Self, Error> {
        if !backend.supports(n) {
            return Err(Error::Backend { backend: backend.name(), n });
        }
        let (inner, layout_id) = match backend {
            Backend::MixedRadix => {
                (Inner::Direct(Transform::build(MOD_Q, n, 5, 1152, 6, true)?), LayoutId::MixedRadix768)
            }
            Backend::Radix2 => {
                (Inner::Direct(Transform::build(MOD_Q, n, 55, 384, 6, false)?), LayoutId::Radix2(n))
            }
            Backend::Unified => {
                let sub = Transform::build(MOD_Q, UNIFIED_N, 55, 384, 6, false)?;
                (Inner::Unified { sub, alpha: n / UNIFIED_N }, LayoutId::Unified(n))
            }
        };
        let (layout, seg_mont) = match &inner {
            Inner::Direct(t) => (t.segments.clone(), t.seg_mont.clone()),
            Inner::Unified { sub, alpha } => (
                sub.segments.iter().map(|s| Segment { degree: s.degree * alpha, tau: s.tau }).collect(),
                sub.seg_mont.clone(),
            ),
        };
        Ok(NttTables { n, backend, layout_id, layout, seg_mont, inner })
    }

    /// Shared, lazily built tables.
    pub fn get(n: usize, backend: Backend) -> Result<&'static NttTables, Error> {
        static CACHE: [OnceLock<Result<NttTables, Error>>; 9] = [const { OnceLock::new() }; 9];
        let i = match n {
            512 => 0,
            768 => 1,
            1024 => 2,
            _ => return Err(Error::Backend { backend: backend.name(), n }),
        } * 3
            + backend as usize;
        CACHE[i].get_or_init(|| NttTables::new(n, backend)).as_ref().map_err(Clone::clone)
    }

    /// The root of unity the layout exponents refer to.
    pub fn zeta(&self) -> i64 {
        match &self.inner {
            Inner::Direct(t) => t.zeta,
            Inner::Unified { sub, .. } => sub.zeta,
        }
    }

    /// Bound on coefficients produced by [`NttTables::forward`].
    pub fn forward_bound(&self) -> i32 {
        match &self.inner {
            Inner::Direct(t) => t.out_bound,
            Inner::Unified { sub, .. } => sub.out_bound,
        }
    }

    fn check_ntt(&self, p: &Poly) -> Result<(), Error> {
        crate::check_len("polynomial", self.n, p.len())?;
        if p.rep != Rep::Ntt(self.layout_id) {
            return Err(Error::Layout);
        }
        Ok(())
    }

    /// Forward transform of a coefficient-domain polynomial.
    pub fn forward(&self, f: &Poly) -> Result<Poly, Error> {
        crate::check_len("polynomial", self.n, f.len())?;
        if matches!(f.rep, Rep::Ntt(_)) {
            return Err(Error::Layout);
        }
        let coeffs = self.forward_raw(&f.coeffs);
        Ok(Poly { coeffs, rep: Rep::Ntt(self.layout_id) })
    }

    pub(crate) fn forward_raw(&self, f: &[i16]) -> Vec<i16> {
        match &self.inner {
            Inner::Direct(t) => {
                let mut a = f.to_vec();
                t.forward(&mut a);
                a
            }
            Inner::Unified { sub, alpha } => {
                let mut parts = unified_split(f, *alpha);
                for p in &mut parts {
                    sub.forward(p);
                }
                unified_combine(&parts)
            }
        }
    }

    /// Inverse transform; output centered mod q.
    pub fn inverse(&self, fhat: &Poly) -> Result<Poly, Error> {
        self.check_ntt(fhat)?;
        Ok(Poly { coeffs: self.inverse_raw(&fhat.coeffs), rep: Rep::Centered })
    }

    pub(crate) fn inverse_raw(&self, fhat: &[i16]) -> Vec<i16> {
        match &self.inner {
            Inner::Direct(t) => {
                let mut a = fhat.to_vec();
                t.inverse(&mut a);
                a
            }
            Inner::Unified { sub, alpha } => {
                let mut parts = unified_uncombine(fhat, *alpha);
                for p in &mut parts {
                    sub.inverse(p);
                }
                unified_merge(&parts)
            }
        }
    }

    /// Base-ring-wise product.
    pub fn pointwise(&self, a: &Poly, b: &Poly) -> Result<Poly, Error> {
        self.check_ntt(a)?;
        self.check_ntt(b)?;
        Ok(Poly { coeffs: self.pointwise_raw(&a.coeffs, &b.coeffs), rep: Rep::Ntt(self.layout_id) })
    }

    pub(crate) fn pointwise_raw(&self, a: &[i16], b: &[i16]) -> Vec<i16> {
        let mut c = vec![0i16; self.n];
        let mut off = 0;
        for (seg, &zm) in self.layout.iter().zip(&self.seg_mont) {
            let r = off..off + seg.degree;
            basemul(&MOD_Q, &a[r.clone()], &b[r.clone()], zm, &mut c[r]);
            off += seg.degree;
        }
        c
    }

    /// Base-ring-wise inverse; `Err(NotInvertible)` if any base ring is singular.
    pub fn invert(&self, a: &Poly) -> Result<Poly, Error> {
        self.check_ntt(a)?;
        let (inv, ok) = self.invert_raw(&a.coeffs);
        if ok {
            Ok(Poly { coeffs: inv, rep: Rep::Ntt(self.layout_id) })
        } else {
            Err(Error::NotInvertible)
        }
    }

    /// Inverts every base ring without early exit; the flag is the AND of
    /// all per-ring invertibility flags.
    pub(crate) fn invert_raw(&self, a: &[i16]) -> (Vec<i16>, bool) {
        let mut out = vec![0i16; self.n];
        let mut ok = 1u8;
        let mut off = 0;
        for (seg, &zm) in self.layout.iter().zip(&self.seg_mont) {
            let r = off..off + seg.degree;
            let c = base_inverse(&MOD_Q, &a[r.clone()], zm);
            out[r].copy_from_slice(&c.inverse);
            ok &= c.invertible as u8;
            off += seg.degree;
        }
        (out, ok == 1)
    }

    /// `f * g mod q` via forward transforms, base multiplication and the
    /// inverse transform.
    pub fn multiply(&self, f: &Poly, g: &Poly) -> Result<Poly, Error> {
        let fh = self.forward(f)?;
        let gh = self.forward(g)?;
        self.inverse(&self.pointwise(&fh, &gh)?)
    }

    pub(crate) fn multiply_raw(&self, f: &[i16], g: &[i16]) -> Vec<i16> {
        let fh = self.forward_raw(f);
        let gh = self.forward_raw(g);
        self.inverse_raw(&self.pointwise_raw(&fh, &gh))
    }
}
