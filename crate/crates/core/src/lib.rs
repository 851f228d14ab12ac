//! Cheater-identifiable secret sharing against rushing cheaters.
//!
//! Any secret sharing scheme over `GF(2^w)^m` is wrapped with one-time
//! Toeplitz-hash MACs so that each honest applicant can tell which of the
//! shares it received were forged, with misidentification probability
//! `q^-l'` for a tag length `l'` chosen independently of the field and share
//! size.
//!
//! All protocol code is generic over [`BinaryField`]; [`Gf2m`] provides the
//! fields and the aliases below name the common ones. Use
//! [`with_field!`] to pick a field from a runtime degree.

pub mod adversary;
pub mod ciss;
pub mod error;
pub mod field;
pub mod harness;
pub mod hashmac;
pub mod sss;

pub use error::{Error, Result};
pub use field::{BinaryField, FieldSpec, Gf2m, RandomSource};

/// GF(2).
pub type Gf2 = Gf2m<1>;
/// GF(2^2).
pub type Gf4 = Gf2m<2>;
/// GF(2^3).
pub type Gf8 = Gf2m<3>;
/// GF(2^4).
pub type Gf16 = Gf2m<4>;
/// GF(2^8), AES polynomial.
pub type Gf256 = Gf2m<8>;
/// GF(2^16).
pub type Gf65536 = Gf2m<16>;

/// Runs `$body` with the type alias `$F` bound to `Gf2m<w>` for a runtime
/// degree `w` in `1..=16`; evaluates to `Err(Error::UnsupportedDegree)`
/// otherwise. `$body` must evaluate to a `Result`.
///
/// ```
/// use ciss::{with_field, BinaryField};
/// let order = with_field!(8u32, F => Ok::<_, ciss::Error>(F::order())).unwrap();
/// assert_eq!(order, 256);
/// ```
#[macro_export]
macro_rules! with_field {
    ($w:expr, $F:ident => $body:expr) => {{
        match $w {
            1 => {
                type $F = $crate::Gf2m<1>;
                $body
            }
            2 => {
                type $F = $crate::Gf2m<2>;
                $body
            }
            3 => {
                type $F = $crate::Gf2m<3>;
                $body
            }
            4 => {
                type $F = $crate::Gf2m<4>;
                $body
            }
            5 => {
                type $F = $crate::Gf2m<5>;
                $body
            }
            6 => {
                type $F = $crate::Gf2m<6>;
                $body
            }
            7 => {
                type $F = $crate::Gf2m<7>;
                $body
            }
            8 => {
                type $F = $crate::Gf2m<8>;
                $body
            }
            9 => {
                type $F = $crate::Gf2m<9>;
                $body
            }
            10 => {
                type $F = $crate::Gf2m<10>;
                $body
            }
            11 => {
                type $F = $crate::Gf2m<11>;
                $body
            }
            12 => {
                type $F = $crate::Gf2m<12>;
                $body
            }
            13 => {
                type $F = $crate::Gf2m<13>;
                $body
            }
            14 => {
                type $F = $crate::Gf2m<14>;
                $body
            }
            15 => {
                type $F = $crate::Gf2m<15>;
                $body
            }
            16 => {
                type $F = $crate::Gf2m<16>;
                $body
            }
            other => Err($crate::Error::UnsupportedDegree(other as u32).into()),
        }
    }};
}
