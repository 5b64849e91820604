//! CTRU.PKE and CNTR.PKE: key generation, encryption, decryption and the
//! byte formats of keys and ciphertexts.
//!
//! Public keys are serialized in the coefficient domain so that keys move
//! freely between NTT back-ends.

use crate::e8code::{poly_decode, poly_encode};
use crate::ntt::{Backend, MultiModTables, NttTables};
use crate::params::{Flavor, ParameterSet, Q};
use crate::ring::{center_pow2, schoolbook_mul, MOD_Q};
use crate::symmetric::{cbd_bytes, cbd_sample, xof_expand};
use crate::{check_len, Error};

/// Key generation gives up after this many non-invertible `f`.
pub const MAX_KEYGEN_ATTEMPTS: u8 = 100;

/// `h = g / f`, canonical coefficients in `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub h: Vec<i16>,
}

/// `f = 2f' + 1`, centered coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    pub f: Vec<i16>,
}

/// Coefficients in `[0, q2)` (or up to `2^12 - 1` for an unchecked `q2 = q`
/// ciphertext read from bytes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub c: Vec<i16>,
}

/// How decryption multiplies `c * f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MulPath {
    /// Multi-moduli NTT (or the plain `q` NTT when `q2 = q`).
    Ntt,
    /// Reference schoolbook product.
    Schoolbook,
}

fn sample(seed: &[u8; 32], nonce: u8, n: usize, eta: u8) -> Vec<i16> {
    cbd_sample(&xof_expand(seed, nonce, cbd_bytes(n, eta)), n, eta)
        .expect("length matches by construction")
        .coeffs
}

pub fn keygen(params: &ParameterSet, seed: &[u8; 32]) -> Result<(PublicKey, SecretKey), Error> {
    keygen_with(params, seed, Backend::canonical(params.n))
}

/// Deterministic key generation; a non-invertible `f` advances the nonce
/// pair by 2.
pub fn keygen_with(
    params: &ParameterSet,
    seed: &[u8; 32],
    backend: Backend,
) -> Result<(PublicKey, SecretKey), Error> {
    let n = params.n;
    let t = NttTables::get(n, backend)?;
    for attempt in 0..MAX_KEYGEN_ATTEMPTS {
        let fp = sample(seed, 2 * attempt, n, params.eta1);
        let g = sample(seed, 2 * attempt + 1, n, params.eta1);
        let mut f: Vec<i16> = fp.iter().map(|&x| 2 * x).collect();
        f[0] += 1;
        let (finv, ok) = t.invert_raw(&t.forward_raw(&f));
        if !ok {
            continue;
        }
        let h = t.inverse_raw(&t.pointwise_raw(&t.forward_raw(&g), &finv));
        let h = h.iter().map(|&x| MOD_Q.canonical(x)).collect();
        return Ok((PublicKey { h }, SecretKey { f }));
    }
    Err(Error::RetryExhausted)
}

const DIV_2Q_SHIFT: u32 = 37;
const DIV_2Q_M: u64 = (1u64 << DIV_2Q_SHIFT).div_ceil(2 * Q as u64);

/// `floor(x / 2q)` for `x < 2^24`.
#[inline(always)]
fn div_2q(x: u32) -> u32 {
    ((x as u64 * DIV_2Q_M) >> DIV_2Q_SHIFT) as u32
}

/// `round(q2 * w / q)` with ties up, for `w` in `[0, q)`.
#[inline(always)]
fn compress(w: i16, q2: i16) -> i16 {
    div_2q(2 * q2 as u32 * w as u32 + Q as u32) as i16
}

pub fn encrypt(params: &ParameterSet, pk: &PublicKey, m: &[u8], coin: &[u8; 32]) -> Result<Ciphertext, Error> {
    encrypt_with(params, pk, m, coin, Backend::canonical(params.n))
}

/// Encrypts `m` (`n/16` bytes) deterministically under `coin`.
pub fn encrypt_with(
    params: &ParameterSet,
    pk: &PublicKey,
    m: &[u8],
    coin: &[u8; 32],
    backend: Backend,
) -> Result<Ciphertext, Error> {
    let n = params.n;
    check_len("public key", n, pk.h.len())?;
    check_len("message", params.msg_bytes, m.len())?;
    let t = NttTables::get(n, backend)?;
    let s = poly_encode(m, n);
    let r = sample(coin, 0, n, params.eta2);
    let hr = t.multiply_raw(&pk.h, &r);
    let q2 = params.q2;
    let c = match params.flavor {
        Flavor::Ctru => {
            let e = sample(coin, 1, n, params.eta2);
            let half = (Q + 1) / 2;
            hr.iter()
                .zip(&e)
                .zip(&s)
                .map(|((&a, &b), &bit)| {
                    let w = MOD_Q.canonical(a + b + half * bit);
                    if params.uncompressed() {
                        w
                    } else {
                        compress(w, q2) & (q2 - 1)
                    }
                })
                .collect()
        }
        Flavor::Cntr => hr
            .iter()
            .zip(&s)
            .map(|(&a, &bit)| (compress(MOD_Q.canonical(a), q2) + (q2 / 2) * bit) & (q2 - 1))
            .collect(),
    };
    Ok(Ciphertext { c })
}

pub fn decrypt(params: &ParameterSet, sk: &SecretKey, ct: &Ciphertext) -> Result<Vec<u8>, Error> {
    decrypt_with(params, sk, ct, Backend::canonical(params.n), MulPath::Ntt)
}

/// `c * f` centered mod `q2`.
pub fn cf_mod_q2(
    params: &ParameterSet,
    sk: &SecretKey,
    ct: &Ciphertext,
    backend: Backend,
    path: MulPath,
) -> Result<Vec<i16>, Error> {
    let n = params.n;
    check_len("secret key", n, sk.f.len())?;
    check_len("ciphertext", n, ct.c.len())?;
    let q2 = params.q2;
    let c: Vec<i16> = if params.uncompressed() {
        ct.c.iter().map(|&x| MOD_Q.reduce_centered(x)).collect()
    } else {
        ct.c.iter().map(|&x| center_pow2(x as i32, q2 as i32) as i16).collect()
    };
    Ok(match path {
        MulPath::Schoolbook => schoolbook_mul(&c, &sk.f, q2 as i64).into_iter().map(|x| x as i16).collect(),
        MulPath::Ntt if params.uncompressed() => NttTables::get(n, backend)?.multiply_raw(&c, &sk.f),
        MulPath::Ntt => MultiModTables::get(params, backend)?.mul_q2(&c, &sk.f),
    })
}

/// Decrypts to `n/16` message bytes; never fails on ciphertext content.
pub fn decrypt_with(
    params: &ParameterSet,
    sk: &SecretKey,
    ct: &Ciphertext,
    backend: Backend,
    path: MulPath,
) -> Result<Vec<u8>, Error> {
    let v = cf_mod_q2(params, sk, ct, backend, path)?;
    Ok(poly_decode(&v, params.q2))
}

/// Packs `bits`-bit fields LSB first.
pub fn pack_bits(vals: &[u16], bits: u32) -> Vec<u8> {
    let mut out = vec![0u8; (vals.len() * bits as usize).div_ceil(8)];
    let mut pos = 0usize;
    for &v in vals {
        for j in 0..bits {
            out[pos >> 3] |= (((v >> j) & 1) as u8) << (pos & 7);
            pos += 1;
        }
    }
    out
}

/// Inverse of [`pack_bits`].
pub fn unpack_bits(bytes: &[u8], count: usize, bits: u32) -> Vec<u16> {
    let mut pos = 0usize;
    (0..count)
        .map(|_| {
            let mut v = 0u16;
            for j in 0..bits {
                v |= (((bytes[pos >> 3] >> (pos & 7)) & 1) as u16) << j;
                pos += 1;
            }
            v
        })
        .collect()
}

pub fn pack_pk(params: &ParameterSet, pk: &PublicKey) -> Vec<u8> {
    assert_eq!(pk.h.len(), params.n);
    let v: Vec<u16> = pk.h.iter().map(|&x| x as u16).collect();
    pack_bits(&v, 12)
}

pub fn unpack_pk(params: &ParameterSet, bytes: &[u8]) -> Result<PublicKey, Error> {
    check_len("public key", params.pk_bytes, bytes.len())?;
    let v = unpack_bits(bytes, params.n, 12);
    if let Some(i) = v.iter().position(|&x| x >= Q as u16) {
        return Err(Error::CoefficientRange(i));
    }
    Ok(PublicKey { h: v.into_iter().map(|x| x as i16).collect() })
}

/// The packed `f` alone: `(2*eta + 1) - f_i` per field.
pub fn pack_sk(params: &ParameterSet, sk: &SecretKey) -> Vec<u8> {
    assert_eq!(sk.f.len(), params.n);
    let top = 2 * params.eta1 as i16 + 1;
    let v: Vec<u16> = sk.f.iter().map(|&x| (top - x) as u16).collect();
    pack_bits(&v, params.sk_bits())
}

pub fn unpack_sk(params: &ParameterSet, bytes: &[u8]) -> Result<SecretKey, Error> {
    check_len("secret key", params.pke_sk_bytes(), bytes.len())?;
    let top = 2 * params.eta1 as u16 + 1;
    let v = unpack_bits(bytes, params.n, params.sk_bits());
    if let Some(i) = v.iter().position(|&x| x > 2 * top - 1) {
        return Err(Error::SecretKeyRange(i));
    }
    Ok(SecretKey { f: v.into_iter().map(|x| top as i16 - x as i16).collect() })
}

pub fn pack_ct(params: &ParameterSet, ct: &Ciphertext) -> Vec<u8> {
    assert_eq!(ct.c.len(), params.n);
    let v: Vec<u16> = ct.c.iter().map(|&x| x as u16).collect();
    pack_bits(&v, params.ct_bits())
}

/// Only the length is checked; out-of-range fields (possible when `q2 = q`)
/// are reduced during decryption.
pub fn unpack_ct(params: &ParameterSet, bytes: &[u8]) -> Result<Ciphertext, Error> {
    check_len("ciphertext", params.ct_bytes, bytes.len())?;
    let v = unpack_bits(bytes, params.n, params.ct_bits());
    Ok(Ciphertext { c: v.into_iter().map(|x| x as i16).collect() })
}
