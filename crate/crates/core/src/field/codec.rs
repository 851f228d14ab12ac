//! Canonical byte encoding shared by share files and wire messages.
//!
//! An element is `ceil(w/8)` little-endian bytes with unused high bits zero.
//! A vector is a 4-byte little-endian count followed by its elements.

use super::BinaryField;
use crate::error::{Error, Result};

pub fn element_len<F: BinaryField>() -> usize {
    F::DEGREE.div_ceil(8) as usize
}

pub fn put_element<F: BinaryField>(out: &mut Vec<u8>, e: F) {
    let bytes = e.value().to_le_bytes();
    out.extend_from_slice(&bytes[..element_len::<F>()]);
}

pub fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

pub fn put_vector<F: BinaryField>(out: &mut Vec<u8>, v: &[F]) {
    put_u32(out, v.len() as u32);
    for &e in v {
        put_element(out, e);
    }
}

/// Elements back to back with no count prefix (used for hex on the CLI).
pub fn put_raw<F: BinaryField>(out: &mut Vec<u8>, v: &[F]) {
    for &e in v {
        put_element(out, e);
    }
}

/// Cursor over an encoded buffer.
#[derive(Debug)]
pub struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Self { buf }
    }

    pub fn remaining(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.buf.len() < len {
            return Err(Error::Decode(format!(
                "truncated input: need {len} bytes, have {}",
                self.buf.len()
            )));
        }
        let (head, tail) = self.buf.split_at(len);
        self.buf = tail;
        Ok(head)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    pub fn element<F: BinaryField>(&mut self) -> Result<F> {
        let b = self.take(element_len::<F>())?;
        let mut word = [0u8; 4];
        word[..b.len()].copy_from_slice(b);
        F::from_value(u32::from_le_bytes(word))
    }

    pub fn vector<F: BinaryField>(&mut self) -> Result<Vec<F>> {
        let len = self.u32()? as usize;
        if len.saturating_mul(element_len::<F>()) > self.buf.len() {
            return Err(Error::Decode(format!(
                "vector of {len} elements overruns input"
            )));
        }
        (0..len).map(|_| self.element()).collect()
    }

    pub fn finish(self) -> Result<()> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(Error::Decode(format!("{} trailing bytes", self.buf.len())))
        }
    }
}

pub fn encode_vector<F: BinaryField>(v: &[F]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + v.len() * element_len::<F>());
    put_vector(&mut out, v);
    out
}

pub fn decode_vector<F: BinaryField>(bytes: &[u8]) -> Result<Vec<F>> {
    let mut r = Reader::new(bytes);
    let v = r.vector()?;
    r.finish()?;
    Ok(v)
}

/// Parses concatenated element encodings (no count prefix).
pub fn decode_raw<F: BinaryField>(bytes: &[u8]) -> Result<Vec<F>> {
    let len = element_len::<F>();
    if !bytes.len().is_multiple_of(len) {
        return Err(Error::Decode(format!(
            "{} bytes is not a whole number of {len}-byte elements",
            bytes.len()
        )));
    }
    let mut r = Reader::new(bytes);
    (0..bytes.len() / len).map(|_| r.element()).collect()
}
