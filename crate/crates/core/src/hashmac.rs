//! Toeplitz-matrix universal hashing and the one-time MAC built on it.
//!
//! An `rows x cols` Toeplitz matrix is described by a seed `s` of length
//! `rows + cols - 1`. With 1-based indices, entry `(i, j)` is
//! `s[rows - i + j]`: the bottom-left entry is `s[1]`, the top-left is
//! `s[rows]` and the top-right is `s[rows + cols - 1]`. The matrix is never
//! materialized.
//!
//! The tag of `x` under key `(s, z)` is `T_s * x + z`. For any nonzero
//! difference `dx` and any `dz`, exactly `q^(cols - 1)` of the
//! `q^(rows + cols - 1)` seeds satisfy `T_s * dx = dz`, so a forged pair
//! `(x + dx, z + dz)` verifies with probability exactly `q^-rows` when
//! the seed is drawn uniformly from the full seed space (zero included).

use crate::error::{Error, Result};
use crate::field::{codec, random_vector, BinaryField, RandomSource};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToeplitzSeed<F> {
    s: Vec<F>,
    rows: usize,
    cols: usize,
}

impl<F: BinaryField> ToeplitzSeed<F> {
    pub fn new(s: Vec<F>, rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                what: "toeplitz dimensions",
                expected: 1,
                got: 0,
            });
        }
        let expected = rows + cols - 1;
        if s.len() != expected {
            return Err(Error::DimensionMismatch {
                what: "toeplitz seed",
                expected,
                got: s.len(),
            });
        }
        Ok(Self { s, rows, cols })
    }

    /// Uniform over all `q^(rows + cols - 1)` seeds.
    pub fn random<R: RandomSource + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        assert!(rows > 0 && cols > 0, "toeplitz dimensions must be positive");
        Self {
            s: random_vector(rows + cols - 1, rng),
            rows,
            cols,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[F] {
        &self.s
    }

    /// Entry at 0-based `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> F {
        self.s[self.rows - 1 - i + j]
    }

    /// `T * x`.
    pub fn apply(&self, x: &[F]) -> Result<Vec<F>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                what: "toeplitz input",
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let diag = &self.s[self.rows - 1 - i..self.rows - 1 - i + self.cols];
                diag.iter().zip(x).map(|(&t, &v)| t * v).sum()
            })
            .collect())
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        codec::put_vector(out, &self.s);
    }
}

/// Authentication tag `Y = T * x + z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tag<F>(pub Vec<F>);

impl<F: BinaryField> Tag<F> {
    pub fn as_slice(&self) -> &[F] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn mac_tag<F: BinaryField>(seed: &ToeplitzSeed<F>, x: &[F], z: &[F]) -> Result<Tag<F>> {
    if z.len() != seed.rows {
        return Err(Error::DimensionMismatch {
            what: "mac key",
            expected: seed.rows,
            got: z.len(),
        });
    }
    let mut y = seed.apply(x)?;
    for (yi, &zi) in y.iter_mut().zip(z) {
        *yi += zi;
    }
    Ok(Tag(y))
}

/// Exact-equality check of `tag` against `T * x + z`.
pub fn mac_verify<F: BinaryField>(
    seed: &ToeplitzSeed<F>,
    x: &[F],
    z: &[F],
    tag: &Tag<F>,
) -> Result<bool> {
    if tag.len() != seed.rows {
        return Err(Error::DimensionMismatch {
            what: "tag",
            expected: seed.rows,
            got: tag.len(),
        });
    }
    Ok(mac_tag(seed, x, z)? == *tag)
}
