//! The FO transform with implicit rejection and public-key-prefix hashing.
//!
//! `sk = pack(f) || pk || z`; `ID(pk)` is the first 33 bytes of `pk`.

use crate::e8code::ct_select;
use crate::ntt::Backend;
use crate::params::{ParameterSet, ID_BYTES, SEED_BYTES, SHARED_KEY_BYTES};
use crate::pke;
use crate::symmetric::{hash_h, hash_h1, shake128};
use crate::{check_len, Error};
use rand::{CryptoRng, RngCore};

pub type SharedKey = [u8; SHARED_KEY_BYTES];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KemKeyPair {
    pub pk: Vec<u8>,
    pub sk: Vec<u8>,
}

impl KemKeyPair {
    /// The public key embedded in `sk`.
    pub fn embedded_pk<'a>(&'a self, params: &ParameterSet) -> &'a [u8] {
        let off = params.pke_sk_bytes();
        &self.sk[off..off + params.pk_bytes]
    }
}

/// `ID(pk)`.
pub fn id(pk: &[u8]) -> &[u8] {
    &pk[..ID_BYTES]
}

pub fn keygen(params: &ParameterSet, keyseed: &[u8; 32], zseed: &[u8; 32]) -> Result<KemKeyPair, Error> {
    keygen_with(params, keyseed, zseed, Backend::canonical(params.n))
}

pub fn keygen_with(
    params: &ParameterSet,
    keyseed: &[u8; 32],
    zseed: &[u8; 32],
    backend: Backend,
) -> Result<KemKeyPair, Error> {
    let (pk, sk) = pke::keygen_with(params, keyseed, backend)?;
    let pk = pke::pack_pk(params, &pk);
    let mut skb = pke::pack_sk(params, &sk);
    skb.extend_from_slice(&pk);
    skb.extend_from_slice(zseed);
    Ok(KemKeyPair { pk, sk: skb })
}

/// The message drawn from `mseed`: the first `n/2` bits of `SHAKE-128(mseed)`.
pub fn message_from_seed(params: &ParameterSet, mseed: &[u8; 32]) -> Vec<u8> {
    shake128(mseed, params.msg_bytes)
}

pub fn encaps(params: &ParameterSet, pk: &[u8], mseed: &[u8; 32]) -> Result<(Vec<u8>, SharedKey), Error> {
    encaps_with(params, pk, mseed, Backend::canonical(params.n))
}

pub fn encaps_with(
    params: &ParameterSet,
    pk: &[u8],
    mseed: &[u8; 32],
    backend: Backend,
) -> Result<(Vec<u8>, SharedKey), Error> {
    encaps_message(params, pk, &message_from_seed(params, mseed), backend)
}

/// Encapsulation with a message drawn from `rng`.
pub fn encaps_random<R: RngCore + CryptoRng>(
    params: &ParameterSet,
    pk: &[u8],
    rng: &mut R,
) -> Result<(Vec<u8>, SharedKey), Error> {
    let mut m = vec![0u8; params.msg_bytes];
    rng.fill_bytes(&mut m);
    encaps_message(params, pk, &m, Backend::canonical(params.n))
}

fn encaps_message(
    params: &ParameterSet,
    pk: &[u8],
    m: &[u8],
    backend: Backend,
) -> Result<(Vec<u8>, SharedKey), Error> {
    let pkp = pke::unpack_pk(params, pk)?;
    let (k, coin) = hash_h(id(pk), m);
    let ct = pke::encrypt_with(params, &pkp, m, &coin, backend)?;
    Ok((pke::pack_ct(params, &ct), k))
}

/// 1 if `a == b` else 0; inspects every byte.
pub fn ct_eq(a: &[u8], b: &[u8]) -> u32 {
    assert_eq!(a.len(), b.len());
    let acc = a.iter().zip(b).fold(0u8, |acc, (x, y)| acc | (x ^ y));
    (acc as u32).wrapping_sub(1) >> 31
}

pub fn decaps(params: &ParameterSet, sk: &[u8], ct: &[u8]) -> Result<SharedKey, Error> {
    decaps_with(params, sk, ct, Backend::canonical(params.n))
}

/// Always returns a key for a well-formed `sk` and a ciphertext of the
/// right length.
pub fn decaps_with(params: &ParameterSet, sk: &[u8], ct: &[u8], backend: Backend) -> Result<SharedKey, Error> {
    check_len("secret key", params.sk_bytes, sk.len())?;
    check_len("ciphertext", params.ct_bytes, ct.len())?;
    let (fb, rest) = sk.split_at(params.pke_sk_bytes());
    let (pk, z) = rest.split_at(params.pk_bytes);
    debug_assert_eq!(z.len(), SEED_BYTES);
    let skp = pke::unpack_sk(params, fb)?;
    let pkp = pke::unpack_pk(params, pk)?;
    let c = pke::unpack_ct(params, ct)?;
    let m = pke::decrypt_with(params, &skp, &c, backend, pke::MulPath::Ntt)?;
    let (k, coin) = hash_h(id(pk), &m);
    let c2 = pke::pack_ct(params, &pke::encrypt_with(params, &pkp, &m, &coin, backend)?);
    let kbar = hash_h1(id(pk), z, ct);
    Ok(select_key(&kbar, &k, ct_eq(ct, &c2)))
}

/// `k` when `ok = 1`, `kbar` when `ok = 0`.
fn select_key(kbar: &SharedKey, k: &SharedKey, ok: u32) -> SharedKey {
    std::array::from_fn(|i| ct_select(kbar[i] as u32, k[i] as u32, ok) as u8)
}
