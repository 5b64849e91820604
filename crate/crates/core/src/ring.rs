//! Coefficient arithmetic, polynomial containers and the schoolbook oracle
//! for `R = Z[x]/(x^n - x^(n/2) + 1)`.

use crate::ntt::LayoutId;
use crate::params::Q;

/// A 16-bit odd modulus together with its Montgomery and Barrett constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modulus {
    pub q: i16,
    /// `q^-1 mod 2^16`, as a signed value.
    pub qinv: i16,
    /// `round(2^26 / q)`.
    pub barrett_v: i32,
    /// `2^16 mod q`, centered.
    pub mont_r: i16,
    /// `2^32 mod q`, centered.
    pub mont_r2: i16,
}

const fn center_const(x: i64, q: i64) -> i16 {
    let r = x.rem_euclid(q);
    (if r > q / 2 { r - q } else { r }) as i16
}

impl Modulus {
    pub const fn new(q: i16) -> Self {
        assert!(q % 2 == 1 && q > 2);
        let mut inv: u16 = q as u16;
        let mut i = 0;
        while i < 4 {
            inv = inv.wrapping_mul(2u16.wrapping_sub((q as u16).wrapping_mul(inv)));
            i += 1;
        }
        Modulus {
            q,
            qinv: inv as i16,
            barrett_v: ((1 << 26) + q as i32 / 2) / q as i32,
            mont_r: center_const(1 << 16, q as i64),
            mont_r2: center_const(1 << 32, q as i64),
        }
    }

    /// Signed Montgomery reduction: returns `t = a * 2^-16 mod q`.
    ///
    /// For `|a| <= 2^15 * q` the result satisfies `|t| <= q`; in general
    /// `|t| <= (|a| + 2^15 * q) / 2^16`.
    #[inline(always)]
    pub fn montgomery_reduce(&self, a: i32) -> i16 {
        let t = (a as i16).wrapping_mul(self.qinv);
        ((a - t as i32 * self.q as i32) >> 16) as i16
    }

    /// Signed Barrett reduction of a 16-bit value.
    ///
    /// The output lies in `[-(q+1)/2, (q+1)/2]` for every `i16` input
    /// (checked exhaustively in the tests for both moduli in use).
    #[inline(always)]
    pub fn barrett_reduce(&self, a: i16) -> i16 {
        let t = ((self.barrett_v * a as i32 + (1 << 25)) >> 26) as i16;
        a.wrapping_sub(t.wrapping_mul(self.q))
    }

    /// Exact centered residue in `[-(q-1)/2, (q-1)/2]`, branch-free.
    #[inline(always)]
    pub fn reduce_centered(&self, a: i16) -> i16 {
        let h = (self.q - 1) / 2;
        let r = self.barrett_reduce(a);
        let r = r - (((h - r) >> 15) & self.q);
        r + (((r + h) >> 15) & self.q)
    }

    /// `a * b * 2^-16 mod q`.
    #[inline(always)]
    pub fn fqmul(&self, a: i16, b: i16) -> i16 {
        self.montgomery_reduce(a as i32 * b as i32)
    }

    /// Plain product `a * b mod q`, result bounded by `q`.
    #[inline(always)]
    pub fn mul(&self, a: i16, b: i16) -> i16 {
        self.fqmul(self.fqmul(a, b), self.mont_r2)
    }

    /// `a * 2^16 mod q`.
    #[inline(always)]
    pub fn to_mont(&self, a: i16) -> i16 {
        self.fqmul(a, self.mont_r2)
    }

    /// Maps any residue to `[0, q)` given `|a| < 2^15`.
    #[inline(always)]
    pub fn canonical(&self, a: i16) -> i16 {
        let r = self.barrett_reduce(a);
        r + ((r >> 15) & self.q)
    }

    /// Exact centered residue of an arbitrary integer; used for table
    /// construction only (not constant time).
    pub fn center(&self, a: i64) -> i16 {
        center_const(a, self.q as i64)
    }

    /// `base^exp mod q` for public exponents; result centered.
    pub fn pow(&self, base: i64, mut exp: u64) -> i16 {
        let q = self.q as i64;
        let mut b = base.rem_euclid(q);
        let mut r = 1i64;
        while exp > 0 {
            if exp & 1 == 1 {
                r = r * b % q;
            }
            b = b * b % q;
            exp >>= 1;
        }
        self.center(r)
    }
}

/// The ring modulus `q = 3457`.
pub const MOD_Q: Modulus = Modulus::new(Q);

/// `montgomery_reduce` for `q = 3457`.
#[inline]
pub fn montgomery_reduce(a: i32) -> i16 {
    MOD_Q.montgomery_reduce(a)
}

/// `barrett_reduce` for `q = 3457`.
#[inline]
pub fn barrett_reduce(a: i16) -> i16 {
    MOD_Q.barrett_reduce(a)
}

/// Representation tag of a [`Poly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rep {
    /// `0 <= c < q`.
    Canonical,
    /// `|c| <= (q-1)/2`.
    Centered,
    /// `-q2/2 <= c < q2/2` for the contained modulus.
    CenteredQ2(i16),
    /// NTT domain; coefficients bounded by `8q`.
    Ntt(LayoutId),
}

/// An `n`-coefficient polynomial with 16-bit coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<i16>,
    pub rep: Rep,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly { coeffs: vec![0; n], rep: Rep::Centered }
    }

    pub fn from_coeffs(coeffs: Vec<i16>, rep: Rep) -> Self {
        Poly { coeffs, rep }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Reduces every coefficient to `[0, q)`.
    pub fn to_canonical(&self) -> Poly {
        let coeffs = self.coeffs.iter().map(|&c| MOD_Q.canonical(c)).collect();
        Poly { coeffs, rep: Rep::Canonical }
    }

    /// Reduces every coefficient to the centered range mod `q`.
    pub fn to_centered(&self) -> Poly {
        let coeffs = self.coeffs.iter().map(|&c| MOD_Q.reduce_centered(c)).collect();
        Poly { coeffs, rep: Rep::Centered }
    }
}

/// Centered representative of `a` modulo `m`: `[-m/2, m/2)` for even `m`,
/// `[-(m-1)/2, (m-1)/2]` for odd `m`.
pub fn center_mod_i64(a: i64, m: i64) -> i64 {
    let r = a.rem_euclid(m);
    if r >= (m + 1) / 2 {
        r - m
    } else {
        r
    }
}

/// Centers every coefficient of `v` modulo `modulus`.
pub fn center_mod(v: &Poly, modulus: i16) -> Poly {
    let coeffs = v.coeffs.iter().map(|&c| center_mod_i64(c as i64, modulus as i64) as i16).collect();
    let rep = if modulus == Q { Rep::Centered } else { Rep::CenteredQ2(modulus) };
    Poly { coeffs, rep }
}

/// Constant-time centering for a power-of-two modulus `m`.
#[inline(always)]
pub fn center_pow2(a: i32, m: i32) -> i32 {
    let r = a & (m - 1);
    // subtract m when r >= m/2
    let ge = ((m / 2 - 1 - r) >> 31) & 1;
    r - (ge * m)
}

/// Exact product of `f` and `g` in `Z[x]/(x^n - x^(n/2) + 1)`.
pub fn schoolbook_mul_z<T: Copy + Into<i64>>(f: &[T], g: &[T]) -> Vec<i64> {
    let n = f.len();
    assert_eq!(n, g.len());
    assert!(n.is_multiple_of(2));
    let mut full = vec![0i64; 2 * n];
    for (i, &a) in f.iter().enumerate() {
        let a: i64 = a.into();
        for (j, &b) in g.iter().enumerate() {
            full[i + j] += a * b.into();
        }
    }
    // x^k = x^(k-n) * (x^(n/2) - 1) for k >= n; walk downwards so folded
    // terms that land above n are folded again.
    for k in (n..2 * n).rev() {
        let c = full[k];
        full[k - n / 2] += c;
        full[k - n] -= c;
    }
    full.truncate(n);
    full
}

/// `f * g` in the ring, centered modulo `modulus`.
pub fn schoolbook_mul<T: Copy + Into<i64>>(f: &[T], g: &[T], modulus: i64) -> Vec<i64> {
    schoolbook_mul_z(f, g).into_iter().map(|c| center_mod_i64(c, modulus)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Q;

    #[test]
    fn reduce_examples() {
        assert_eq!(barrett_reduce(0), 0);
        assert_eq!(barrett_reduce(3457), 0);
        assert_eq!(barrett_reduce(5000), 1543);
        assert_eq!(montgomery_reduce(0), 0);
        assert_eq!(montgomery_reduce(7 * Q as i32).rem_euclid(Q), 0);
        assert_eq!((montgomery_reduce(1 << 16) as i32).rem_euclid(Q as i32), 1);
    }

    #[test]
    fn barrett_exhaustive() {
        for m in [Modulus::new(3457), Modulus::new(7681)] {
            let q = m.q as i32;
            for a in i16::MIN..=i16::MAX {
                let r = m.barrett_reduce(a) as i32;
                assert_eq!((r - a as i32).rem_euclid(q), 0, "a = {a}");
                assert!(r.abs() <= (q + 1) / 2, "a = {a}, r = {r}");
                let c = m.reduce_centered(a) as i64;
                assert_eq!(c, center_mod_i64(a as i64, q as i64));
                let k = m.canonical(a) as i64;
                assert_eq!(k, (a as i64).rem_euclid(q as i64));
            }
        }
    }

    #[test]
    fn montgomery_sampled_range() {
        for m in [Modulus::new(3457), Modulus::new(7681)] {
            let q = m.q as i64;
            let bound = (1i64 << 15) * q;
            let rinv = m.pow(1 << 16, (q - 2) as u64) as i64;
            let mut a = -bound;
            while a <= bound {
                let t = m.montgomery_reduce(a as i32) as i64;
                assert!(t.abs() <= q);
                assert_eq!((t - a * rinv).rem_euclid(q), 0);
                a += 997;
            }
            for a in [-bound, bound, 0, 1, -1] {
                let t = m.montgomery_reduce(a as i32) as i64;
                assert!(t.abs() <= q);
                assert_eq!((t - a * rinv).rem_euclid(q), 0);
            }
        }
    }

    #[test]
    fn constants() {
        for m in [Modulus::new(3457), Modulus::new(7681)] {
            let q = m.q as i32;
            assert_eq!((m.qinv as i32 * q) & 0xffff, 1);
            assert_eq!((m.mont_r as i64 - (1 << 16)).rem_euclid(q as i64), 0);
            assert_eq!((m.mont_r2 as i64 - (1i64 << 32)).rem_euclid(q as i64), 0);
        }
    }

    #[test]
    fn center_examples() {
        assert_eq!(center_mod_i64(Q as i64 - 1, Q as i64), -1);
        assert_eq!(center_mod_i64(0, Q as i64), 0);
        assert_eq!(center_mod_i64(512, 1024), -512);
        assert_eq!(center_mod_i64(1728, Q as i64), 1728);
        assert_eq!(center_mod_i64(1729, Q as i64), -1728);
        for a in -5000..5000 {
            for m in [512, 1024, 2048] {
                assert_eq!(center_pow2(a, m) as i64, center_mod_i64(a as i64, m as i64));
            }
        }
    }

    #[test]
    fn schoolbook_ring_relation() {
        let n = 16;
        let mut f = vec![0i16; n];
        f[n / 2] = 1;
        let h = schoolbook_mul(&f, &f, Q as i64);
        let mut expect = vec![0i64; n];
        expect[0] = -1;
        expect[n / 2] = 1;
        assert_eq!(h, expect);
        let mut one = vec![0i16; n];
        one[0] = 1;
        let g: Vec<i16> = (0..n as i16).map(|i| i * 37 - 200).collect();
        let h = schoolbook_mul(&one, &g, Q as i64);
        assert_eq!(h, g.iter().map(|&x| x as i64).collect::<Vec<_>>());
    }
}
