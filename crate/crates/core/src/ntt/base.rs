//! Arithmetic in the base rings `Z_q[x]/(x^d - zeta^tau)`.
//!
//! Segment coefficients are plain residues (not Montgomery form); the ring
//! constant is passed as `zt_mont = zeta^tau * 2^16 mod q`.

use crate::ring::Modulus;

/// Largest supported base-ring degree.
pub const MAX_DEGREE: usize = 8;

/// `c = a * b mod (x^d - zeta^tau)`, output centered.
pub fn basemul(m: &Modulus, a: &[i16], b: &[i16], zt_mont: i16, c: &mut [i16]) {
    let d = a.len();
    debug_assert!(d <= MAX_DEGREE && b.len() == d && c.len() == d);
    let mut ar = [0i32; MAX_DEGREE];
    let mut br = [0i32; MAX_DEGREE];
    for i in 0..d {
        ar[i] = m.barrett_reduce(a[i]) as i32;
        br[i] = m.barrett_reduce(b[i]) as i32;
    }
    for k in 0..d {
        let mut lo = 0i32;
        let mut hi = 0i32;
        for i in 0..=k {
            lo += ar[i] * br[k - i];
        }
        for i in k + 1..d {
            hi += ar[i] * br[k + d - i];
        }
        let t = m.montgomery_reduce(lo) + m.fqmul(m.montgomery_reduce(hi), zt_mont);
        c[k] = m.barrett_reduce(m.fqmul(t, m.mont_r2));
    }
}

/// Result of a base-ring inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cramer {
    /// The inverse, valid only when `invertible`.
    pub inverse: Vec<i16>,
    /// `Delta`, the determinant of the multiplication matrix of `f`.
    pub det: i16,
    /// Cofactors `Delta_i`, so that `inverse[i] = Delta_i / Delta`.
    pub cofactors: Vec<i16>,
    pub invertible: bool,
}

/// Inverts `f` in `Z_q[x]/(x^d - zeta^tau)` by Cramer's rule.
///
/// The multiplication matrix `M` has columns `x^j * f`. `Delta = det M` and
/// the `Delta_i` are the cofactors of its first row, obtained from the
/// characteristic polynomial (Berkowitz) and Cayley-Hamilton applied to
/// `e_0`. `Delta^-1` is computed as `Delta^(q-2)`. The sequence of
/// operations does not depend on the coefficients of `f`.
pub fn base_inverse(m: &Modulus, f: &[i16], zt_mont: i16) -> Cramer {
    let d = f.len();
    assert!((1..=MAX_DEGREE).contains(&d));
    let zt = m.barrett_reduce(m.montgomery_reduce(zt_mont as i32));
    let fr: Vec<i16> = f.iter().map(|&x| m.barrett_reduce(x)).collect();
    let mut mat = [[0i16; MAX_DEGREE]; MAX_DEGREE];
    for i in 0..d {
        for j in 0..d {
            mat[i][j] = if i >= j { fr[i - j] } else { m.barrett_reduce(m.mul(zt, fr[i + d - j])) };
        }
    }
    let cp = berkowitz(m, &mat, d);

    // v = M^(d-1) e0 + c1 M^(d-2) e0 + ... + c_(d-1) e0
    let mut v = vec![0i16; d];
    v[0] = 1;
    let mut tmp = vec![0i16; d];
    for &c in &cp[1..d] {
        basemul(m, &fr, &v, zt_mont, &mut tmp);
        tmp[0] = m.barrett_reduce(tmp[0] + c);
        std::mem::swap(&mut v, &mut tmp);
    }
    let cd = cp[d];
    let sign_det: i16 = if d.is_multiple_of(2) { 1 } else { -1 };
    let det = m.barrett_reduce(sign_det * cd);
    let cofactors: Vec<i16> = v.iter().map(|&x| m.barrett_reduce(-sign_det * x)).collect();
    let det_inv = pow_ct(m, det, (m.q - 2) as u32);
    let inverse = cofactors.iter().map(|&x| m.barrett_reduce(m.mul(x, det_inv))).collect();
    let invertible = m.barrett_reduce(det) != 0;
    Cramer { inverse, det, cofactors, invertible }
}

/// Square-and-multiply with a public exponent and a fixed operation count.
fn pow_ct(m: &Modulus, base: i16, exp: u32) -> i16 {
    let mut r: i16 = 1;
    for bit in (0..32 - exp.leading_zeros()).rev() {
        r = m.barrett_reduce(m.mul(r, r));
        let rb = m.barrett_reduce(m.mul(r, base));
        r = if (exp >> bit) & 1 == 1 { rb } else { r };
    }
    r
}

/// Coefficients `[1, c1, ..., cd]` of `det(lambda I - M)`.
fn berkowitz(m: &Modulus, a: &[[i16; MAX_DEGREE]; MAX_DEGREE], d: usize) -> Vec<i16> {
    let mut vec = vec![1i16];
    for s in (0..d).rev() {
        let k = d - s;
        // t = [1, -a_ss, -R C, -R A C, ..., -R A^(k-2) C]
        let mut t = vec![0i16; k + 1];
        t[0] = 1;
        t[1] = m.barrett_reduce(-a[s][s]);
        let mut col: Vec<i16> = (s + 1..d).map(|i| a[i][s]).collect();
        for ti in t.iter_mut().skip(2) {
            let mut acc = 0i16;
            for (j, &c) in col.iter().enumerate() {
                acc = m.barrett_reduce(acc + m.mul(a[s][s + 1 + j], c));
            }
            *ti = m.barrett_reduce(-acc);
            let next: Vec<i16> = (0..col.len())
                .map(|i| {
                    let mut acc = 0i16;
                    for (j, &c) in col.iter().enumerate() {
                        acc = m.barrett_reduce(acc + m.mul(a[s + 1 + i][s + 1 + j], c));
                    }
                    acc
                })
                .collect();
            col = next;
        }
        let mut out = vec![0i16; k + 1];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0i16;
            for (j, &vj) in vec.iter().enumerate() {
                if i >= j {
                    acc = m.barrett_reduce(acc + m.mul(t[i - j], vj));
                }
            }
            *o = acc;
        }
        vec = out;
    }
    vec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::MOD_Q;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(a: &[i16], b: &[i16], zt: i64, q: i64) -> Vec<i64> {
        let d = a.len();
        let mut c = vec![0i64; d];
        for i in 0..d {
            for j in 0..d {
                let p = a[i] as i64 * b[j] as i64;
                if i + j < d {
                    c[i + j] += p;
                } else {
                    c[i + j - d] += p * zt;
                }
            }
        }
        c.into_iter().map(|x| crate::ring::center_mod_i64(x, q)).collect()
    }

    /// Determinant by Laplace expansion over exact integers, reduced mod q.
    fn det_oracle(mat: &[Vec<i64>], q: i64) -> i64 {
        let d = mat.len();
        if d == 1 {
            return mat[0][0].rem_euclid(q);
        }
        let mut acc = 0i64;
        for j in 0..d {
            let minor: Vec<Vec<i64>> = mat[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let term = mat[0][j] * det_oracle(&minor, q) % q;
            acc += if j % 2 == 0 { term } else { -term };
        }
        acc.rem_euclid(q)
    }

    #[test]
    fn basemul_matches_naive() {
        let m = MOD_Q;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [2usize, 3, 4, 6, 8] {
            for _ in 0..200 {
                let zt = rng.gen_range(1..3457i64);
                let a: Vec<i16> = (0..d).map(|_| rng.gen_range(-8 * 3457..=8 * 3457)).collect();
                let b: Vec<i16> = (0..d).map(|_| rng.gen_range(-8 * 3457..=8 * 3457)).collect();
                let mut c = vec![0; d];
                basemul(&m, &a, &b, m.center(zt << 16), &mut c);
                let want = naive(&a, &b, zt, 3457);
                assert_eq!(c.iter().map(|&x| x as i64).collect::<Vec<_>>(), want);
            }
        }
    }

    #[test]
    fn basemul_examples() {
        let m = MOD_Q;
        let zt = 1234i64;
        let zm = m.center(zt << 16);
        let mut c = [0i16; 2];
        basemul(&m, &[0, 1], &[0, 1], zm, &mut c);
        assert_eq!(c, [1234, 0]);
        let a = [5i16, -7, 11, 13];
        let mut c = [0i16; 4];
        basemul(&m, &a, &[1, 0, 0, 0], zm, &mut c);
        assert_eq!(c, a);
    }

    #[test]
    fn cramer_against_laplace() {
        let m = MOD_Q;
        let q = 3457i64;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in [2usize, 3, 4, 6, 8] {
            for _ in 0..20 {
                let zt = rng.gen_range(1..q);
                let f: Vec<i16> = (0..d).map(|_| rng.gen_range(-1728..=1728)).collect();
                let mat: Vec<Vec<i64>> = (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| if i >= j { f[i - j] as i64 } else { zt * f[i + d - j] as i64 })
                            .collect()
                    })
                    .collect();
                let r = base_inverse(&m, &f, m.center(zt << 16));
                assert_eq!((r.det as i64).rem_euclid(q), det_oracle(&mat, q));
                for i in 0..d {
                    // Delta_i: replace column i by e0
                    let mut mi = mat.clone();
                    for (row, mrow) in mi.iter_mut().enumerate() {
                        mrow[i] = (row == 0) as i64;
                    }
                    assert_eq!((r.cofactors[i] as i64).rem_euclid(q), det_oracle(&mi, q));
                }
                assert!(r.invertible);
                let mut one = vec![0; d];
                basemul(&m, &f, &r.inverse, m.center(zt << 16), &mut one);
                let mut e0 = vec![0; d];
                e0[0] = 1;
                assert_eq!(one, e0);
            }
        }
    }

    #[test]
    fn inverse_trivial_cases() {
        let m = MOD_Q;
        let zm = m.center(55 << 16);
        for d in [2usize, 3, 4, 6, 8] {
            let mut one = vec![0i16; d];
            one[0] = 1;
            let r = base_inverse(&m, &one, zm);
            assert!(r.invertible);
            assert_eq!(r.inverse, one);
            let r = base_inverse(&m, &vec![0; d], zm);
            assert!(!r.invertible);
            assert_eq!(r.det, 0);
        }
    }

    #[test]
    fn singular_detected() {
        // x^2 - 1 = (x - 1)(x + 1): f = x - 1 is a zero divisor.
        let m = MOD_Q;
        let r = base_inverse(&m, &[-1, 1], m.center(1 << 16));
        assert!(!r.invertible);
    }
}
