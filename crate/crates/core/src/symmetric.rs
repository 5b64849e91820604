//! SHA3-512 / SHAKE-128 instantiations and centered binomial sampling.

use crate::ring::{Poly, Rep};
use crate::Error;
use sha3::digest::{Digest, ExtendableOutput, Update, XofReader};
use sha3::{Sha3_512, Shake128};

/// `(K, coin)`: the two halves of `SHA3-512(id_pk || m)`.
pub fn hash_h(id_pk: &[u8], m: &[u8]) -> ([u8; 32], [u8; 32]) {
    let d = Sha3_512::new().chain_update(id_pk).chain_update(m).finalize();
    let mut k = [0u8; 32];
    let mut coin = [0u8; 32];
    k.copy_from_slice(&d[..32]);
    coin.copy_from_slice(&d[32..]);
    (k, coin)
}

/// First 32 bytes of `SHA3-512(id_pk || z || c)`.
pub fn hash_h1(id_pk: &[u8], z: &[u8], c: &[u8]) -> [u8; 32] {
    let d = Sha3_512::new().chain_update(id_pk).chain_update(z).chain_update(c).finalize();
    let mut k = [0u8; 32];
    k.copy_from_slice(&d[..32]);
    k
}

/// `SHAKE-128(data)` squeezed to `out_len` bytes.
pub fn shake128(data: &[u8], out_len: usize) -> Vec<u8> {
    let mut h = Shake128::default();
    h.update(data);
    let mut out = vec![0u8; out_len];
    h.finalize_xof().read(&mut out);
    out
}

/// `SHAKE-128(seed || nonce)` squeezed to `out_len` bytes.
pub fn xof_expand(seed: &[u8; 32], nonce: u8, out_len: usize) -> Vec<u8> {
    let mut h = Shake128::default();
    h.update(seed);
    h.update(&[nonce]);
    let mut out = vec![0u8; out_len];
    h.finalize_xof().read(&mut out);
    out
}

/// Bytes of randomness consumed by [`cbd_sample`].
pub fn cbd_bytes(n: usize, eta: u8) -> usize {
    2 * n * eta as usize / 8
}

/// Samples `B_eta` coefficients: bit `2*i*eta + j` of the stream (LSB first)
/// belongs to coefficient `i`, the low `eta` bits count positive.
pub fn cbd_sample(buf: &[u8], n: usize, eta: u8) -> Result<Poly, Error> {
    crate::check_len("CBD randomness", cbd_bytes(n, eta), buf.len())?;
    let eta = eta as usize;
    let w = 2 * eta;
    let mut coeffs = Vec::with_capacity(n);
    for i in 0..n {
        let start = i * w;
        // gather the 2*eta bits (at most 16) into a word
        let mut bits = 0u32;
        for j in 0..w {
            let p = start + j;
            bits |= (((buf[p >> 3] >> (p & 7)) & 1) as u32) << j;
        }
        let mask = (1u32 << eta) - 1;
        let a = (bits & mask).count_ones() as i16;
        let b = ((bits >> eta) & mask).count_ones() as i16;
        coeffs.push(a - b);
    }
    Ok(Poly { coeffs, rep: Rep::Centered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sha3_512_empty() {
        let d = Sha3_512::digest(b"");
        assert_eq!(
            hex::encode(d),
            "a69f73cca23a9ac5c8b567dc185a756e97c982164fe25859e0d1dcc1475c80a6\
             15b2123af1f5f94c11e3e9402c3ac558f500199d95b6d3e301758586281dcd26"
        );
    }

    #[test]
    fn shake128_empty() {
        assert_eq!(
            hex::encode(shake128(b"", 32)),
            "7f9c2ba4e88f827d616045507605853ed73b8093f6efbc88eb1a6eacfa66ef26"
        );
    }

    #[test]
    fn hash_splits() {
        let id = [7u8; 33];
        let m = [1u8; 48];
        let (k, coin) = hash_h(&id, &m);
        let mut buf = id.to_vec();
        buf.extend_from_slice(&m);
        let d = Sha3_512::digest(&buf);
        assert_eq!(&d[..32], &k);
        assert_eq!(&d[32..], &coin);
        // same byte stream through both helpers
        assert_eq!(hash_h1(&id, &m[..32], &m[32..]), k);
    }

    #[test]
    fn h_bit_flip_collisions() {
        let id = [3u8; 33];
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut seen = std::collections::HashSet::new();
        for i in 0..10_000usize {
            let mut m = [0u8; 48];
            rng.fill_bytes(&mut m);
            let (k, coin) = hash_h(&id, &m);
            m[i % 48] ^= 1 << (i % 8);
            let (k2, coin2) = hash_h(&id, &m);
            assert_ne!(k, k2);
            assert_ne!(coin, coin2);
            assert!(seen.insert(k));
        }
    }

    #[test]
    fn h1_distinct_ciphertexts() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..1000u32 {
            assert!(seen.insert(hash_h1(&[0; 33], &[1; 32], &i.to_le_bytes())));
        }
    }

    #[test]
    fn xof_prefix_and_nonce() {
        let seed = [9u8; 32];
        let long = xof_expand(&seed, 0, 500);
        assert_eq!(&long[..100], &xof_expand(&seed, 0, 100)[..]);
        let mut input = seed.to_vec();
        input.push(0);
        assert_eq!(shake128(&input, 500), long);
        let other = xof_expand(&seed, 1, 500);
        let same = long.iter().zip(&other).filter(|(a, b)| a == b).count();
        assert!(same < 10, "{same}");
    }

    #[test]
    fn cbd_examples() {
        assert!(cbd_sample(&[0; 384], 768, 2).unwrap().coeffs.iter().all(|&c| c == 0));
        assert!(cbd_sample(&[0xff; 384], 768, 2).unwrap().coeffs.iter().all(|&c| c == 0));
        // eta = 2: windows of 4 bits, 0b0011 gives +2, 0b1100 gives -2
        let p = cbd_sample(&[0xc3; 384], 768, 2).unwrap();
        assert_eq!(&p.coeffs[..4], &[2, -2, 2, -2]);
        assert!(cbd_sample(&[0; 383], 768, 2).is_err());
    }

    #[test]
    fn cbd_bit_order_eta3() {
        // coefficient 1 of eta = 3 covers stream bits 6..12
        let mut buf = vec![0u8; cbd_bytes(16, 3)];
        buf[0] = 0b1100_0000;
        buf[1] = 0b0000_0001;
        let p = cbd_sample(&buf, 16, 3).unwrap();
        assert_eq!(p.coeffs[0], 0);
        assert_eq!(p.coeffs[1], 3);
        buf[1] = 0b0000_1000;
        buf[0] = 0;
        assert_eq!(cbd_sample(&buf, 16, 3).unwrap().coeffs[1], -1);
    }

    #[test]
    fn cbd_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for eta in [2u8, 3, 5] {
            let n = 1_000_000usize / 8 * 8;
            let mut buf = vec![0u8; cbd_bytes(n, eta)];
            rng.fill_bytes(&mut buf);
            let p = cbd_sample(&buf, n, eta).unwrap();
            assert!(p.coeffs.iter().all(|&c| c.abs() <= eta as i16));
            let mean = p.coeffs.iter().map(|&c| c as f64).sum::<f64>() / n as f64;
            let var = p.coeffs.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / n as f64;
            let sigma = (eta as f64 / 2.0).sqrt();
            assert!(mean.abs() < 3.0 * sigma / (n as f64).sqrt(), "mean {mean}");
            assert!((var / (eta as f64 / 2.0) - 1.0).abs() < 0.05, "var {var}");
        }
    }
}
