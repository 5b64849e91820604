//! Parameter sets and derived sizes.
//!
//! Recommended rows are registered under short names (`ctru-768`,
//! `cntr-1024`, ...). The remaining rows use `<flavor>-<n>-q<q2>-b<eta>`,
//! e.g. `ctru-768-q3457-b3` for the uncompressed CTRU-768 row.

use crate::Error;

/// Ring modulus.
pub const Q: i16 = 3457;
/// Message modulus.
pub const P: i16 = 2;
/// Bytes in a shared key.
pub const SHARED_KEY_BYTES: usize = 32;
/// Bytes of the public key used as `ID(pk)`.
pub const ID_BYTES: usize = 33;
/// Seed length used throughout.
pub const SEED_BYTES: usize = 32;

/// Which of the two schemes a parameter set instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// NTRU + RLWE encryption (`sigma = hr + e`).
    Ctru,
    /// NTRU + RLWR encryption (`sigma = hr`, rounded).
    Cntr,
}

/// One row of the parameter tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterSet {
    pub name: &'static str,
    pub flavor: Flavor,
    pub n: usize,
    pub q: i16,
    pub q2: i16,
    pub p: i16,
    pub eta1: u8,
    pub eta2: u8,
    /// Whether the row is one of the recommended sets.
    pub recommended: bool,
    /// log2 of the decryption failure probability listed in the tables.
    pub table_log2_delta: i32,
    pub pk_bytes: usize,
    pub sk_bytes: usize,
    pub ct_bytes: usize,
    pub msg_bytes: usize,
    pub shared_key_bytes: usize,
}

const fn ceil_log2(x: u32) -> u32 {
    32 - (x - 1).leading_zeros()
}

impl ParameterSet {
    const fn row(
        name: &'static str,
        flavor: Flavor,
        n: usize,
        q2: i16,
        eta: u8,
        recommended: bool,
        table_log2_delta: i32,
    ) -> Self {
        let pk_bytes = 12 * n / 8;
        let ct_bytes = n * ceil_log2(q2 as u32) as usize / 8;
        let sk_bytes = n * ceil_log2(4 * eta as u32 + 2) as usize / 8 + pk_bytes + SEED_BYTES;
        ParameterSet {
            name,
            flavor,
            n,
            q: Q,
            q2,
            p: P,
            eta1: eta,
            eta2: eta,
            recommended,
            table_log2_delta,
            pk_bytes,
            sk_bytes,
            ct_bytes,
            msg_bytes: n / 16,
            shared_key_bytes: SHARED_KEY_BYTES,
        }
    }

    /// Bits per ciphertext coefficient.
    pub fn ct_bits(&self) -> u32 {
        ceil_log2(self.q2 as u32)
    }

    /// Bits per packed secret-key coefficient.
    pub fn sk_bits(&self) -> u32 {
        ceil_log2(4 * self.eta1 as u32 + 2)
    }

    /// Bytes of the packed `f` alone.
    pub fn pke_sk_bytes(&self) -> usize {
        self.n * self.sk_bits() as usize / 8
    }

    /// True when ciphertexts are not compressed (`q2 = q`).
    pub fn uncompressed(&self) -> bool {
        self.q2 == self.q
    }

    /// Checks the structural invariants of the row.
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |why: &str| Err(Error::InvalidParams(format!("{}: {why}", self.name)));
        if !matches!(self.n, 512 | 768 | 1024) {
            return bad("n must be 512, 768 or 1024");
        }
        if self.q != Q || self.p != P {
            return bad("q must be 3457 and p must be 2");
        }
        let q2 = self.q2 as u32;
        if !(q2 == Q as u32 || (q2.is_power_of_two() && (4..=1 << 12).contains(&q2))) {
            return bad("q2 must be q or a power of two up to 2^12");
        }
        if self.flavor == Flavor::Cntr && self.uncompressed() {
            return bad("CNTR needs an even q2 < q");
        }
        if self.eta1 == 0 || self.eta2 == 0 || self.eta1 > 8 || self.eta2 > 8 {
            return bad("eta out of range");
        }
        Ok(())
    }
}

use Flavor::{Cntr, Ctru};

/// Every registered parameter set, recommended rows first.
pub static PARAMETER_SETS: [ParameterSet; 15] = [
    ParameterSet::row("ctru-512", Ctru, 512, 1 << 10, 3, true, -143),
    ParameterSet::row("ctru-768", Ctru, 768, 1 << 10, 2, true, -184),
    ParameterSet::row("ctru-1024", Ctru, 1024, 1 << 11, 2, true, -195),
    ParameterSet::row("cntr-512", Cntr, 512, 1 << 10, 5, true, -170),
    ParameterSet::row("cntr-768", Cntr, 768, 1 << 10, 3, true, -230),
    ParameterSet::row("cntr-1024", Cntr, 1024, 1 << 10, 2, true, -291),
    ParameterSet::row("ctru-512-q512-b2", Ctru, 512, 1 << 9, 2, false, -122),
    ParameterSet::row("ctru-768-q3457-b3", Ctru, 768, Q, 3, false, -136),
    ParameterSet::row("ctru-768-q2048-b3", Ctru, 768, 1 << 11, 3, false, -121),
    ParameterSet::row("ctru-1024-q1024-b2", Ctru, 1024, 1 << 10, 2, false, -132),
    ParameterSet::row("ctru-1024-q3457-b3", Ctru, 1024, Q, 3, false, -96),
    ParameterSet::row("cntr-512-q512-b3", Cntr, 512, 1 << 9, 3, false, -99),
    ParameterSet::row("cntr-512-q1024-b6", Cntr, 512, 1 << 10, 6, false, -126),
    ParameterSet::row("cntr-768-q1024-b4", Cntr, 768, 1 << 10, 4, false, -151),
    ParameterSet::row("cntr-1024-q1024-b3", Cntr, 1024, 1 << 10, 3, false, -167),
];

/// Looks up a parameter set by its CLI-visible name.
pub fn get_parameter_set(name: &str) -> Result<&'static ParameterSet, Error> {
    PARAMETER_SETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownParameterSet(name.to_string()))
}

/// The recommended sets.
pub fn recommended() -> impl Iterator<Item = &'static ParameterSet> {
    PARAMETER_SETS.iter().filter(|p| p.recommended)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        let p = get_parameter_set("ctru-768").unwrap();
        assert_eq!((p.n, p.q2, p.eta1, p.pk_bytes, p.ct_bytes), (768, 1024, 2, 1152, 960));
        assert_eq!(p.sk_bytes, 1568);
        let p = get_parameter_set("cntr-768").unwrap();
        assert_eq!((p.n, p.q2, p.eta1, p.pk_bytes, p.ct_bytes), (768, 1024, 3, 1152, 960));
        let p = get_parameter_set("cntr-1024").unwrap();
        assert_eq!((p.n, p.q2, p.eta1, p.pk_bytes, p.ct_bytes), (1024, 1024, 2, 1536, 1280));
        assert_eq!(get_parameter_set("ctru-1024").unwrap().ct_bytes, 1408);
        assert!(get_parameter_set("ctru-999").is_err());
    }

    #[test]
    fn all_rows_valid() {
        for p in &PARAMETER_SETS {
            p.validate().unwrap();
            assert_eq!(p.msg_bytes * 8, p.n / 2);
            assert_eq!(p.sk_bytes, p.pke_sk_bytes() + p.pk_bytes + 32);
        }
        let mut names: Vec<_> = PARAMETER_SETS.iter().map(|p| p.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), PARAMETER_SETS.len());
    }
}
