//! CTRU and CNTR key encapsulation over `Z_q[x]/(x^n - x^(n/2) + 1)`, `q = 3457`.
//!
//! The crate covers the scalable E8 code, three NTT back-ends, byte-exact
//! key and ciphertext formats, the FO transform with implicit rejection and
//! a decryption-failure estimator.
//!
//! ```
//! use ctru::{get_parameter_set, kem};
//!
//! let params = get_parameter_set("ctru-768").unwrap();
//! let kp = kem::keygen(params, &[1; 32], &[2; 32]).unwrap();
//! let (ct, k) = kem::encaps(params, &kp.pk, &[3; 32]).unwrap();
//! assert_eq!(kem::decaps(params, &kp.sk, &ct).unwrap(), k);
//! ```

pub mod e8code;
pub mod estimator;
pub mod kem;
pub mod ntt;
pub mod params;
pub mod pke;
pub mod ring;
pub mod symmetric;

pub use params::{get_parameter_set, Flavor, ParameterSet, PARAMETER_SETS};

/// Errors surfaced by the library.
#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("unknown parameter set `{0}`")]
    UnknownParameterSet(String),
    #[error("invalid parameter set: {0}")]
    InvalidParams(String),
    #[error("{what}: expected {expected} bytes, got {got}")]
    Length { what: &'static str, expected: usize, got: usize },
    #[error("public key coefficient {0} is not below q")]
    CoefficientRange(usize),
    #[error("secret key coefficient {0} is out of range")]
    SecretKeyRange(usize),
    #[error("backend {backend} does not support n = {n}")]
    Backend { backend: &'static str, n: usize },
    #[error("NTT layout mismatch")]
    Layout,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("multi-moduli product bound {bound} is not below Q/2")]
    ProductBound { bound: i64 },
    #[error("key generation exhausted its retry budget")]
    RetryExhausted,
}

pub(crate) fn check_len(what: &'static str, expected: usize, got: usize) -> Result<(), Error> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Length { what, expected, got })
    }
}
