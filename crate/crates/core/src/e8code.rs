//! The scalable E8 code `lambda * [C u (C + c)]` with `C` the even-weight
//! repetition code on coordinate pairs and `c = (0,1,0,1,0,1,0,1)`.
//!
//! A 4-bit value `k` is a nibble with `k_i = (k >> i) & 1`. Decoding works
//! with doubled distances so that odd `2*lambda` (the uncompressed case)
//! stays integral: for a coordinate at circle distance `a` from 0 (mod
//! `2*lambda`), the doubled distances to 0 and to `lambda` are `2a` and
//! `2*lambda - 2a`. Costs reported by [`decode_c`] are therefore four times
//! the squared norms.

/// Generator rows; the last one is `c`.
pub const H: [[u8; 8]; 4] = [
    [1, 1, 1, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 1, 1, 0, 0],
    [0, 0, 0, 0, 1, 1, 1, 1],
    [0, 1, 0, 1, 0, 1, 0, 1],
];

/// `a` if `bit = 0`, `b` if `bit = 1`, without branches.
#[inline(always)]
pub fn ct_select(a: u32, b: u32, bit: u32) -> u32 {
    ((bit ^ 1).wrapping_neg() & a) ^ ((bit & 1).wrapping_neg() & b)
}

#[inline(always)]
fn select_i32(a: i32, b: i32, bit: i32) -> i32 {
    ct_select(a as u32, b as u32, bit as u32) as i32
}

/// 1 if `a < b` else 0, for `|a - b| < 2^31`.
#[inline(always)]
fn lt(a: i32, b: i32) -> i32 {
    ((a.wrapping_sub(b)) >> 31) & 1
}

/// 1 if `a == b` else 0.
#[inline(always)]
fn eq(a: u32, b: u32) -> u32 {
    let d = a ^ b;
    ((d | d.wrapping_neg()) >> 31) ^ 1
}

/// The 0/1 codeword `kH mod 2`; the caller applies the scale.
pub fn encode_e8(k: u8) -> [i16; 8] {
    let (a, b, c, d) = (k & 1, (k >> 1) & 1, (k >> 2) & 1, (k >> 3) & 1);
    [a, a ^ d, a ^ b, a ^ b ^ d, b ^ c, b ^ c ^ d, c, c ^ d].map(i16::from)
}

/// Doubled circle distances of `x` to 0 and to `lambda`, modulo `l2 = 2*lambda`.
///
/// Requires `|x| <= l2`.
#[inline(always)]
fn distances(x: i32, l2: i32) -> (i32, i32) {
    let up = (l2 + 1) / 2;
    let lo = -(l2 / 2);
    let t = x - (((up - 1 - x) >> 31) & l2);
    let t = t + (((t - lo) >> 31) & l2);
    let s = t >> 31;
    let a = (t ^ s) - s;
    (2 * a, l2 - 2 * a)
}

/// Decoder for `C` given doubled per-coordinate distances to 0 (`d0`) and to
/// `lambda` (`d1`). Returns the pair bits and the total cost.
#[inline(always)]
fn decode_c_dist(d0: &[i32; 8], d1: &[i32; 8]) -> ([u32; 4], i32) {
    let mut k = [0u32; 4];
    let mut total = 0i32;
    let mut mind = i32::MAX;
    let mut mini = 0u32;
    let mut parity = 0u32;
    for i in 0..4 {
        let c0 = d0[2 * i] * d0[2 * i] + d0[2 * i + 1] * d0[2 * i + 1];
        let c1 = d1[2 * i] * d1[2 * i] + d1[2 * i + 1] * d1[2 * i + 1];
        let ki = lt(c1, c0);
        k[i] = ki as u32;
        total += select_i32(c0, c1, ki);
        let gap = select_i32(c1 - c0, c0 - c1, ki);
        let better = lt(gap, mind);
        mind = select_i32(mind, gap, better);
        mini = ct_select(mini, i as u32, better as u32);
        parity ^= ki as u32;
    }
    for (i, ki) in k.iter_mut().enumerate() {
        *ki ^= eq(i as u32, mini) & parity;
    }
    total += select_i32(0, mind, parity as i32);
    (k, total)
}

/// Closest codeword of `lambda * C` to `x` (with `2*lambda = l2`): the pair
/// bits as a nibble and four times the squared distance.
pub fn decode_c(x: &[i32; 8], l2: i32) -> (u8, i32) {
    let mut d0 = [0i32; 8];
    let mut d1 = [0i32; 8];
    for j in 0..8 {
        (d0[j], d1[j]) = distances(x[j], l2);
    }
    let (k, total) = decode_c_dist(&d0, &d1);
    ((k[0] | k[1] << 1 | k[2] << 2 | k[3] << 3) as u8, total)
}

/// Decodes one octet with `l2 = 2*lambda`; entries must satisfy `|x_j| <= l2`.
pub fn decode_e8(x: &[i32; 8], l2: i32) -> u8 {
    let mut d0 = [0i32; 8];
    let mut d1 = [0i32; 8];
    for j in 0..8 {
        (d0[j], d1[j]) = distances(x[j], l2);
    }
    let (k0, t0) = decode_c_dist(&d0, &d1);
    // x - lambda*c swaps the two distances on the odd coordinates
    let mut e0 = d0;
    let mut e1 = d1;
    for j in (1..8).step_by(2) {
        e0[j] = d1[j];
        e1[j] = d0[j];
    }
    let (k1, t1) = decode_c_dist(&e0, &e1);
    let b = lt(t1, t0) as u32;
    let k: [u32; 4] = std::array::from_fn(|i| ct_select(k0[i], k1[i], b));
    (k[0] | (k[1] ^ k[0]) << 1 | k[3] << 2 | b << 3) as u8
}

/// Maps `n/2` message bits (`n/16` bytes, LSB first) to `n` codeword slots
/// in `{0, 1}`; nibble `i` fills octet `i`.
pub fn poly_encode(m: &[u8], n: usize) -> Vec<i16> {
    assert_eq!(m.len() * 16, n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n / 8 {
        out.extend_from_slice(&encode_e8((m[i / 2] >> (4 * (i % 2))) & 0xf));
    }
    out
}

/// Decodes every octet of `v` (centered mod `q2`) with `2*lambda = q2`.
pub fn poly_decode(v: &[i16], q2: i16) -> Vec<u8> {
    assert_eq!(v.len() % 16, 0);
    let mut m = vec![0u8; v.len() / 16];
    for (i, oct) in v.chunks_exact(8).enumerate() {
        let x: [i32; 8] = std::array::from_fn(|j| oct[j] as i32);
        m[i / 2] |= decode_e8(&x, q2 as i32) << (4 * (i % 2));
    }
    m
}
