//! Decryption failure probability under the coefficient independence
//! heuristic.
//!
//! The error of octet `i` is measured in units of `W = q2 / L`: the
//! `q2 * (g r + e f + 1 f')` part becomes an exact multiple of `L` and every
//! `t * f` term (`t = q v - q2 u`, `|t| <= q/2`) is rounded to the grid when
//! its single-term distribution is enumerated. Per-position distributions are
//! built by repeated convolution, squared into `B` integer buckets of width
//! `T^2 / B` and convolved over the eight positions of an octet; the octet
//! failure probabilities are summed (union bound).

use crate::params::{Flavor, ParameterSet};
use std::collections::HashMap;

/// Number of `f_i g_j` terms in coefficient `k` of a product in
/// `Z[x]/(x^n - x^(n/2) + 1)`.
pub fn term_counts(n: usize) -> Vec<usize> {
    assert!(n.is_multiple_of(2) && n >= 4);
    (0..n)
        .map(|k| {
            if k + 2 <= n / 2 {
                3 * n / 2 - k - 1
            } else if k + 1 == n / 2 {
                n
            } else {
                3 * n / 2
            }
        })
        .collect()
}

/// A finite distribution on consecutive integers `min..min+probs.len()`,
/// plus the mass that was pruned or pushed past a cap.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffDist {
    min: i64,
    probs: Vec<f64>,
    pub overflow: f64,
}

impl CoeffDist {
    pub fn point(v: i64) -> Self {
        CoeffDist { min: v, probs: vec![1.0], overflow: 0.0 }
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights<I: IntoIterator<Item = (i64, f64)>>(items: I) -> Self {
        let items: Vec<(i64, f64)> = items.into_iter().filter(|&(_, w)| w > 0.0).collect();
        assert!(!items.is_empty());
        let min = items.iter().map(|x| x.0).min().unwrap();
        let max = items.iter().map(|x| x.0).max().unwrap();
        let total: f64 = items.iter().map(|x| x.1).sum();
        let mut probs = vec![0.0; (max - min + 1) as usize];
        for (v, w) in items {
            probs[(v - min) as usize] += w / total;
        }
        CoeffDist { min, probs, overflow: 0.0 }
    }

    /// Centered binomial `B_eta`.
    pub fn cbd(eta: u8) -> Self {
        let eta = eta as i64;
        let binom = |k: i64| (0..k).fold(1.0, |acc, i| acc * (2 * eta - i) as f64 / (i + 1) as f64);
        Self::from_weights((-eta..=eta).map(|v| (v, binom(v + eta))))
    }

    /// Uniform on `lo..=hi`.
    pub fn uniform(lo: i64, hi: i64) -> Self {
        Self::from_weights((lo..=hi).map(|v| (v, 1.0)))
    }

    pub fn min(&self) -> i64 {
        self.min
    }

    pub fn max(&self) -> i64 {
        self.min + self.probs.len() as i64 - 1
    }

    pub fn prob(&self, v: i64) -> f64 {
        if v < self.min || v > self.max() {
            0.0
        } else {
            self.probs[(v - self.min) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs.iter().enumerate().filter(|x| *x.1 > 0.0).map(|(i, &p)| (self.min + i as i64, p))
    }

    /// Mass on the support, excluding `overflow`.
    pub fn mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Distribution of `g(X, Y)` for independent `X ~ self`, `Y ~ other`.
    pub fn joint_map(&self, other: &CoeffDist, g: impl Fn(i64, i64) -> i64) -> CoeffDist {
        let mut d = Self::from_weights(
            self.iter().flat_map(|(x, p)| other.iter().map(move |(y, r)| (x, y, p * r))).map(|(x, y, w)| (g(x, y), w)),
        );
        let m = self.mass() * other.mass();
        d.probs.iter_mut().for_each(|p| *p *= m);
        d.overflow = self.overflow + self.mass() * other.overflow;
        d
    }

    /// Distribution of `g(X)`.
    pub fn map(&self, g: impl Fn(i64) -> i64) -> CoeffDist {
        self.joint_map(&CoeffDist::point(0), |x, _| g(x))
    }

    /// Distribution of `X * Y`.
    pub fn product(&self, other: &CoeffDist) -> CoeffDist {
        self.joint_map(other, |x, y| x * y)
    }

    /// Distribution of `X + Y`; overflow of either operand stays overflow.
    pub fn convolve(&self, other: &CoeffDist) -> CoeffDist {
        let (a, b) = if self.probs.len() >= other.probs.len() { (self, other) } else { (other, self) };
        let mut probs = vec![0.0; a.probs.len() + b.probs.len() - 1];
        for (j, &pb) in b.probs.iter().enumerate() {
            if pb == 0.0 {
                continue;
            }
            for (o, &pa) in probs[j..j + a.probs.len()].iter_mut().zip(&a.probs) {
                *o += pa * pb;
            }
        }
        CoeffDist {
            min: a.min + b.min,
            probs,
            overflow: self.overflow + self.mass() * other.overflow,
        }
    }

    /// `count`-fold sum of independent copies, by repeated squaring.
    pub fn self_convolve(&self, mut count: usize) -> CoeffDist {
        let mut acc = CoeffDist::point(0);
        let mut base = self.clone();
        while count > 0 {
            if count & 1 == 1 {
                acc = acc.convolve(&base);
            }
            count >>= 1;
            if count > 0 {
                base = base.convolve(&base);
            }
        }
        acc
    }

    /// Moves the mass outside `[-limit, limit]` and the edge entries below
    /// `eps` into `overflow`.
    pub fn trim(&mut self, limit: i64, eps: f64) {
        let mut lo = self.min.max(-limit);
        let mut hi = self.max().min(limit);
        while lo <= hi && self.prob(lo) < eps {
            lo += 1;
        }
        while hi >= lo && self.prob(hi) < eps {
            hi -= 1;
        }
        assert!(lo <= hi, "distribution trimmed away");
        let (a, b) = ((lo - self.min) as usize, (hi - self.min) as usize);
        // sum the dropped entries directly; differences of masses near 1
        // would swamp tail probabilities
        self.overflow += self.probs[..a].iter().sum::<f64>() + self.probs[b + 1..].iter().sum::<f64>();
        self.probs = self.probs[a..=b].to_vec();
        self.min = lo;
    }
}

/// Distribution of `sum_{t=1}^{count} X_t * Y_t`.
pub fn product_coeff_dist(d1: &CoeffDist, d2: &CoeffDist, count: usize) -> CoeffDist {
    d1.product(d2).self_convolve(count)
}

/// Distribution of `t = q v - q2 u` for `u` uniform in `[0, q)` and
/// `v = round(q2 u / q)` (ties up).
pub fn rounding_term_dist(q: i64, q2: i64) -> CoeffDist {
    assert!(q2 <= q);
    if q2 == q {
        return CoeffDist::point(0);
    }
    CoeffDist::from_weights((0..q).map(|u| {
        let v = (2 * q2 * u + q).div_euclid(2 * q);
        (q * v - q2 * u, 1.0)
    }))
}

/// Numerical knobs of [`failure_probability_with`].
#[derive(Clone, Copy, Debug)]
pub struct EstimatorConfig {
    /// Grid refinement `L` (`W = q2 / L`) for compressed ciphertexts.
    pub grid: i64,
    /// Number of square buckets below the threshold.
    pub buckets: usize,
    /// Per-coefficient support cap, as a multiple of the threshold.
    pub cap: f64,
    /// Edge entries below this probability are pruned into overflow.
    pub prune: f64,
    pub bound: Bound,
}

/// Octet failure condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// The error norm reaches the decoding radius `T`.
    Ball,
    /// The error leaves the Voronoi cell of the scaled `E8`: a union over the
    /// 240 minimal vectors `v` of `<e, v> >= |v|^2 / 2`. Every norm-4 relevant
    /// vector is a sum of two orthogonal minimal ones, so their half-spaces
    /// are covered. The four-coordinate sums use the widest position of the
    /// octet for all four coordinates.
    Voronoi,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig { grid: 4, buckets: 2048, cap: 1.25, prune: 2f64.powi(-500), bound: Bound::Ball }
    }
}

#[derive(Clone, Debug)]
pub struct Estimate {
    pub delta: f64,
    pub log2_delta: f64,
    /// Largest single-octet failure probability.
    pub worst_octet: f64,
}

pub fn failure_probability(params: &ParameterSet) -> Estimate {
    failure_probability_with(params, &EstimatorConfig::default())
}

/// Squared-norm distribution of one coefficient: `probs[b]` for buckets
/// below the threshold and the rest as failure mass.
struct SquareDist {
    probs: Vec<f64>,
    fail: f64,
}

fn square_dist(d: &CoeffDist, t2: f64, buckets: usize) -> SquareDist {
    let v = t2 / buckets as f64;
    let mut probs = vec![0.0; buckets];
    let mut fail = d.overflow;
    for (x, p) in d.iter() {
        let x2 = (x * x) as f64;
        let b = (x2 / v).round() as usize;
        if x2 >= t2 || b >= buckets {
            fail += p;
        } else {
            probs[b] += p;
        }
    }
    SquareDist { probs, fail }
}

/// Sum of two bucketed squares; sums reaching the threshold fail.
fn add_squares(a: &SquareDist, b: &SquareDist) -> SquareDist {
    let n = a.probs.len();
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + b.probs[i];
    }
    let mut probs = vec![0.0; n];
    let mut fail = a.fail + (1.0 - a.fail) * b.fail;
    for (i, &pa) in a.probs.iter().enumerate() {
        if pa == 0.0 {
            continue;
        }
        for (o, &pb) in probs[i..].iter_mut().zip(&b.probs) {
            *o += pa * pb;
        }
        fail += pa * suffix[n - i];
    }
    SquareDist { probs, fail }
}

/// Failure probability of a set, with `delta` the sum of the octet
/// failure probabilities.
pub fn failure_probability_with(params: &ParameterSet, cfg: &EstimatorConfig) -> Estimate {
    let n = params.n;
    let (q, q2) = (params.q as i64, params.q2 as i64);
    let uncompressed = q2 == q;
    // W = q2 / L; scaled threshold T / W
    let l = if uncompressed { 1 } else { cfg.grid };
    let w = if uncompressed { q as f64 } else { q2 as f64 / l as f64 };
    let t_w = match params.flavor {
        Flavor::Ctru => l as f64 * (q as f64 / 2.0 - 2f64.sqrt()),
        Flavor::Cntr => l as f64 * q as f64 / 2.0,
    };
    let limit = (cfg.cap * t_w).ceil() as i64;

    let s1 = CoeffDist::cbd(params.eta1);
    let s2 = CoeffDist::cbd(params.eta2);
    let t = rounding_term_dist(q, q2);
    let round_w = |x: f64| (x / w).round() as i64;

    // one pair (i, j) of the product: g r + 2 e f' + f' (CTRU) or g r (CNTR)
    // in grid units, plus the rounding contribution t * 2f'
    let gr = s1.product(&s2).map(|x| l * x);
    let tf = t.joint_map(&s1, |t, f| round_w((2 * t * f) as f64));
    let mut term = gr.convolve(&tf);
    // the constant coefficient of f = 2f' + 1 adds one e_k and one t_k
    let mut single = t.map(|t| round_w(t as f64));
    if params.flavor == Flavor::Ctru {
        term = term
            .convolve(&s2.product(&s1).map(|x| 2 * l * x))
            .convolve(&s1.map(|x| l * x));
        single = single.convolve(&s2.map(|x| l * x));
    }

    let counts = term_counts(n);
    let mut needed: Vec<usize> = counts.clone();
    needed.sort_unstable();
    needed.dedup();

    let mut positions: HashMap<usize, CoeffDist> = HashMap::new();
    let mut acc = CoeffDist::point(0);
    let mut have = 0;
    for &c in &needed {
        while have < c {
            acc = acc.convolve(&term);
            acc.trim(limit, cfg.prune);
            have += 1;
        }
        let mut pos = acc.convolve(&single);
        pos.trim(limit, cfg.prune);
        positions.insert(c, pos);
    }

    let octet_fail = |oct: &[usize]| match cfg.bound {
        Bound::Ball => {
            let sq: Vec<SquareDist> = oct.iter().map(|c| square_dist(&positions[c], t_w * t_w, cfg.buckets)).collect();
            let mut s = SquareDist { probs: sq[0].probs.clone(), fail: sq[0].fail };
            for b in &sq[1..] {
                s = add_squares(&s, b);
            }
            s.fail
        }
        Bound::Voronoi => {
            let dists: Vec<&CoeffDist> = oct.iter().map(|c| &positions[c]).collect();
            voronoi_octet(&dists, &positions[oct.iter().max().unwrap()], t_w)
        }
    };

    let mut octets: HashMap<&[usize], f64> = HashMap::new();
    let mut delta = 0.0;
    let mut worst = 0.0f64;
    for oct in counts.chunks_exact(8) {
        let p = *octets.entry(oct).or_insert_with(|| octet_fail(oct));
        delta += p;
        worst = worst.max(p);
    }
    Estimate { delta, log2_delta: delta.log2(), worst_octet: worst }
}

/// Union over the 240 minimal vectors of the scaled `E8` with radius `t`:
/// 16 of the form `2t e_i` and 224 of the form `t (+-1)` on the support of a
/// weight-4 codeword. `widest` stands in for every coordinate of the latter.
fn voronoi_octet(dists: &[&CoeffDist], widest: &CoeffDist, t: f64) -> f64 {
    let single: f64 = dists.iter().map(|d| abs_tail(d, t)).sum();
    single + 224.0 * four_sum_tail(widest, 2.0 * t)
}

/// `P(|x| >= t)`, counting overflow as failure.
fn abs_tail(d: &CoeffDist, t: f64) -> f64 {
    d.overflow + d.iter().filter(|&(x, _)| x.abs() as f64 >= t).map(|(_, p)| p).sum::<f64>()
}

/// `P(x1 + x2 + x3 + x4 >= t)` for four independent copies of `d`.
fn four_sum_tail(d: &CoeffDist, t: f64) -> f64 {
    let d2 = d.convolve(d);
    let t = t.ceil() as i64;
    // suffix[i] = P(d2 >= d2.min + i)
    let len = d2.probs.len();
    let mut suffix = vec![0.0; len + 1];
    for i in (0..len).rev() {
        suffix[i] = suffix[i + 1] + d2.probs[i];
    }
    let mut tail = 2.0 * d2.overflow;
    for (x, p) in d2.iter() {
        let need = t - x - d2.min;
        tail += p * suffix[need.clamp(0, len as i64) as usize];
    }
    tail
}
