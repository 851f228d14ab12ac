//! Binary extension fields GF(2^w), 1 <= w <= 16.
//!
//! Each degree uses one fixed irreducible reduction polynomial (see
//! [`reduction_polynomial`]), so serialized elements are bit-exact across
//! implementations:
//!
//! | w | polynomial                  | w  | polynomial                    |
//! |---|-----------------------------|----|-------------------------------|
//! | 1 | x + 1                       | 9  | x^9 + x^4 + 1                 |
//! | 2 | x^2 + x + 1                 | 10 | x^10 + x^3 + 1                |
//! | 3 | x^3 + x + 1                 | 11 | x^11 + x^2 + 1                |
//! | 4 | x^4 + x + 1                 | 12 | x^12 + x^6 + x^4 + x + 1      |
//! | 5 | x^5 + x^2 + 1               | 13 | x^13 + x^4 + x^3 + x + 1      |
//! | 6 | x^6 + x + 1                 | 14 | x^14 + x^10 + x^6 + x + 1     |
//! | 7 | x^7 + x + 1                 | 15 | x^15 + x + 1                  |
//! | 8 | x^8 + x^4 + x^3 + x + 1     | 16 | x^16 + x^12 + x^3 + x + 1     |
//!
//! Elements of different fields are different Rust types, so mixing fields
//! is a compile error rather than a runtime one. Runtime checks only happen
//! at decode boundaries, where the stored degree is compared against the
//! expected one.

pub mod codec;

use core::fmt;
use core::hash::Hash;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{Inv, One, Zero};
use rand::RngCore;

use crate::error::{Error, Result};

/// Reduction polynomial for GF(2^w) as a bit mask including the leading term.
pub const fn reduction_polynomial(w: u32) -> Option<u32> {
    Some(match w {
        1 => 0b11,
        2 => 0b111,
        3 => 0b1011,
        4 => 0b1_0011,
        5 => 0b10_0101,
        6 => 0b100_0011,
        7 => 0b1000_0011,
        8 => 0x11B,
        9 => 0x211,
        10 => 0x409,
        11 => 0x805,
        12 => 0x1053,
        13 => 0x201B,
        14 => 0x4443,
        15 => 0x8003,
        16 => 0x1_100B,
        _ => return None,
    })
}

/// Runtime description of a field: extension degree plus reduction polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    degree: u32,
    modulus: u32,
}

impl FieldSpec {
    pub fn new(degree: u32) -> Result<Self> {
        let modulus = reduction_polynomial(degree).ok_or(Error::UnsupportedDegree(degree))?;
        Ok(Self { degree, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Field order q = 2^w.
    pub fn order(&self) -> u64 {
        1u64 << self.degree
    }

    /// Bytes per element in the canonical encoding.
    pub fn byte_len(&self) -> usize {
        self.degree.div_ceil(8) as usize
    }

    /// Brute-force irreducibility: no polynomial of degree 1..=w/2 divides
    /// the modulus.
    pub fn is_irreducible(&self) -> bool {
        let p = self.modulus;
        if poly_degree(p) != Some(self.degree) {
            return false;
        }
        (2u32..(1 << (self.degree / 2 + 1))).all(|d| poly_rem(p, d) != 0)
    }
}

fn poly_degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b).expect("nonzero divisor");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Source of uniformly random field elements.
///
/// Every random draw in dealing goes through this trait, which lets the
/// enumeration harness replay every possible randomness tape.
pub trait RandomSource {
    fn next_element<F: BinaryField>(&mut self) -> F;
}

impl<R: RngCore + ?Sized> RandomSource for R {
    fn next_element<F: BinaryField>(&mut self) -> F {
        F::from_value_truncated(self.next_u32())
    }
}

/// Binary extension field arithmetic, implemented by [`Gf2m`].
pub trait BinaryField:
    Copy
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Default
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum<Self>
{
    /// Extension degree w.
    const DEGREE: u32;
    /// Reduction polynomial bit mask.
    const MODULUS: u32;

    fn spec() -> FieldSpec {
        FieldSpec {
            degree: Self::DEGREE,
            modulus: Self::MODULUS,
        }
    }

    fn order() -> u64 {
        1u64 << Self::DEGREE
    }

    fn from_value(value: u32) -> Result<Self>;

    /// Keeps the low w bits of `value`.
    fn from_value_truncated(value: u32) -> Self;

    fn value(self) -> u32;

    fn inverse(self) -> Result<Self>;

    fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }

    fn random<R: RandomSource + ?Sized>(rng: &mut R) -> Self {
        rng.next_element()
    }

    /// Iterates all q elements in value order.
    fn elements() -> impl Iterator<Item = Self> {
        (0..(1u32 << Self::DEGREE)).map(Self::from_value_truncated)
    }
}

/// An element of GF(2^W) reduced by [`reduction_polynomial`]`(W)`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Gf2m<const W: u32>(u16);

impl<const W: u32> Gf2m<W> {
    const MOD: u32 = match reduction_polynomial(W) {
        Some(p) => p,
        None => panic!("GF(2^W) requires 1 <= W <= 16"),
    };
    const MASK: u32 = (1u32 << W) - 1;

    /// Shift-and-add multiply with interleaved reduction.
    fn mul_reduce(a: u32, mut b: u32) -> u32 {
        let mut a = a;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << W) != 0 {
                a ^= Self::MOD;
            }
        }
        acc
    }
}

impl<const W: u32> BinaryField for Gf2m<W> {
    const DEGREE: u32 = W;
    const MODULUS: u32 = Self::MOD;

    fn from_value(value: u32) -> Result<Self> {
        if value > Self::MASK {
            return Err(Error::InvalidElement { value, degree: W });
        }
        Ok(Self(value as u16))
    }

    fn from_value_truncated(value: u32) -> Self {
        Self((value & Self::MASK) as u16)
    }

    fn value(self) -> u32 {
        self.0 as u32
    }

    fn inverse(self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        // a^(q-2) = a^-1 in a group of order q-1
        Ok(self.pow((1u64 << W) - 2))
    }
}

impl<const W: u32> fmt::Debug for Gf2m<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{W})({:#x})", self.0)
    }
}

impl<const W: u32> fmt::Display for Gf2m<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl<const W: u32> Zero for Gf2m<W> {
    fn zero() -> Self {
        Self(0)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const W: u32> One for Gf2m<W> {
    fn one() -> Self {
        Self(1)
    }
}

// characteristic 2: addition and subtraction are both XOR
impl<const W: u32> Add for Gf2m<W> {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl<const W: u32> Sub for Gf2m<W> {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl<const W: u32> Neg for Gf2m<W> {
    type Output = Self;

    fn neg(self) -> Self {
        self
    }
}

impl<const W: u32> Mul for Gf2m<W> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self(Self::mul_reduce(self.0 as u32, rhs.0 as u32) as u16)
    }
}

impl<const W: u32> AddAssign for Gf2m<W> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const W: u32> SubAssign for Gf2m<W> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const W: u32> MulAssign for Gf2m<W> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const W: u32> Sum for Gf2m<W> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), Add::add)
    }
}

impl<const W: u32> Inv for Gf2m<W> {
    type Output = Result<Self>;

    fn inv(self) -> Result<Self> {
        self.inverse()
    }
}

/// Coordinate-wise sum of two equal-length vectors.
pub fn vec_add<F: BinaryField>(a: &[F], b: &[F]) -> Result<Vec<F>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            what: "vector addition",
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(&x, &y)| x + y).collect())
}

pub fn random_vector<F: BinaryField, R: RandomSource + ?Sized>(len: usize, rng: &mut R) -> Vec<F> {
    (0..len).map(|_| F::random(rng)).collect()
}
