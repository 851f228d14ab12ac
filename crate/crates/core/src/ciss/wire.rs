//! Share files and transcript logs.
//!
//! Share file layout (all integers little-endian):
//!
//! ```text
//! "CISS" | version: u8 = 1 | w: u8 | n: u32 | player: u32 | m: u32 | l': u32
//! x                          (vector)
//! z for each recipient j     (vector, ascending j != player)
//! seed s_1..s_(l'+m-1)       (vector)
//! y for each sender i        (vector, ascending i != player)
//! ```
//!
//! Vectors use the canonical encoding of [`crate::field::codec`].
//!
//! A transcript is newline-delimited JSON, one record per delivered
//! message: `{"round":1,"sender":i,"recipient":j,"payload":"<hex>"}` where
//! the payload is `x' | z'`, or `{"round":2,"sender":j,"recipient":null,...}`
//! with payload `seed | count: u32 | (sender: u32, tag)*`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CissParams, CissShare, IdentificationInfo, PublishableInfo, Round1Msg, Round2Msg};
use crate::error::{Error, Result};
use crate::field::codec::{self, Reader};
use crate::field::BinaryField;
use crate::hashmac::{Tag, ToeplitzSeed};
use crate::sss::PlayerIndex;

pub const MAGIC: &[u8; 4] = b"CISS";
pub const VERSION: u8 = 1;
/// Magic, version, degree and four u32 fields.
pub const HEADER_LEN: usize = 4 + 1 + 1 + 4 * 4;

/// Header fields of an encoded share, readable without knowing the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShareHeader {
    pub degree: u32,
    pub player: PlayerIndex,
    pub params: CissParams,
}

pub fn read_header(bytes: &[u8]) -> Result<ShareHeader> {
    let mut r = Reader::new(bytes);
    if r.take(4)? != MAGIC {
        return Err(Error::Decode("bad magic".into()));
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(Error::Decode(format!(
            "unsupported share format version {version}"
        )));
    }
    let degree = r.u8()? as u32;
    let n = r.u32()? as usize;
    let player = r.u32()? as usize;
    let m = r.u32()? as usize;
    let lprime = r.u32()? as usize;
    if player == 0 || player > n {
        return Err(Error::PlayerOutOfRange { player, n });
    }
    if m == 0 || lprime == 0 {
        return Err(Error::Decode("zero share or tag length".into()));
    }
    Ok(ShareHeader {
        degree,
        player,
        params: CissParams { n, m, lprime },
    })
}

fn expect_len<F>(v: Vec<F>, expected: usize, what: &'static str) -> Result<Vec<F>> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            what,
            expected,
            got: v.len(),
        });
    }
    Ok(v)
}

impl<F: BinaryField> CissShare<F> {
    pub fn encode(&self) -> Vec<u8> {
        let CissParams { n, m, lprime } = self.params;
        let mut out = Vec::with_capacity(
            HEADER_LEN + 4 * 2 * n + self.element_count() * codec::element_len::<F>(),
        );
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(F::DEGREE as u8);
        for v in [n, self.player, m, lprime] {
            codec::put_u32(&mut out, v as u32);
        }
        codec::put_vector(&mut out, &self.publishable.x);
        for z in self.publishable.z.values() {
            codec::put_vector(&mut out, z);
        }
        self.identification.seed.encode_into(&mut out);
        for y in self.identification.y.values() {
            codec::put_vector(&mut out, y.as_slice());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let header = read_header(bytes)?;
        if header.degree != F::DEGREE {
            return Err(Error::FieldMismatch {
                expected: F::DEGREE,
                found: header.degree,
            });
        }
        let CissParams { n, m, lprime } = header.params;
        let others = || (1..=n).filter(move |&p| p != header.player);
        let mut r = Reader::new(&bytes[HEADER_LEN..]);
        let x = expect_len(r.vector()?, m, "share x")?;
        let z = others()
            .map(|j| Ok((j, expect_len(r.vector()?, lprime, "key z")?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let seed = ToeplitzSeed::new(r.vector()?, lprime, m)?;
        let y = others()
            .map(|i| Ok((i, Tag(expect_len(r.vector()?, lprime, "tag y")?))))
            .collect::<Result<BTreeMap<_, _>>>()?;
        r.finish()?;
        Ok(Self {
            player: header.player,
            params: header.params,
            publishable: PublishableInfo { x, z },
            identification: IdentificationInfo { seed, y },
        })
    }
}

/// One transcript line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub round: u8,
    pub sender: PlayerIndex,
    /// `None` for round-two broadcasts.
    pub recipient: Option<PlayerIndex>,
    pub payload: String,
}

/// All messages delivered in one protocol run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript<F> {
    pub round1: Vec<Round1Msg<F>>,
    pub round2: Vec<Round2Msg<F>>,
}

impl<F> Default for Transcript<F> {
    fn default() -> Self {
        Self {
            round1: Vec::new(),
            round2: Vec::new(),
        }
    }
}

fn encode_round1<F: BinaryField>(msg: &Round1Msg<F>) -> Vec<u8> {
    let mut out = Vec::new();
    codec::put_vector(&mut out, &msg.x);
    codec::put_vector(&mut out, &msg.z);
    out
}

fn encode_round2<F: BinaryField>(msg: &Round2Msg<F>) -> Vec<u8> {
    let mut out = Vec::new();
    msg.identification.seed.encode_into(&mut out);
    codec::put_u32(&mut out, msg.identification.y.len() as u32);
    for (&i, tag) in &msg.identification.y {
        codec::put_u32(&mut out, i as u32);
        codec::put_vector(&mut out, tag.as_slice());
    }
    out
}

fn hex_payload(record: &TranscriptRecord) -> Result<Vec<u8>> {
    hex::decode(&record.payload).map_err(|e| Error::Decode(format!("payload hex: {e}")))
}

impl<F: BinaryField> Transcript<F> {
    pub fn records(&self) -> Vec<TranscriptRecord> {
        let r1 = self.round1.iter().map(|m| TranscriptRecord {
            round: 1,
            sender: m.sender,
            recipient: Some(m.recipient),
            payload: hex::encode(encode_round1(m)),
        });
        let r2 = self.round2.iter().map(|m| TranscriptRecord {
            round: 2,
            sender: m.sender,
            recipient: None,
            payload: hex::encode(encode_round2(m)),
        });
        r1.chain(r2).collect()
    }

    pub fn to_jsonl(&self) -> String {
        self.records()
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
            .collect()
    }

    /// Parses a transcript. `lprime` and `m` fix the seed dimensions of
    /// round-two records.
    pub fn from_jsonl(text: &str, m: usize, lprime: usize) -> Result<Self> {
        let mut out = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: TranscriptRecord = serde_json::from_str(line)
                .map_err(|e| Error::Decode(format!("transcript line {}: {e}", lineno + 1)))?;
            let payload = hex_payload(&record)?;
            let mut r = Reader::new(&payload);
            match (record.round, record.recipient) {
                (1, Some(recipient)) => {
                    let x = r.vector()?;
                    let z = r.vector()?;
                    r.finish()?;
                    out.round1.push(Round1Msg {
                        sender: record.sender,
                        recipient,
                        x,
                        z,
                    });
                }
                (2, None) => {
                    let seed = ToeplitzSeed::new(r.vector()?, lprime, m)?;
                    let count = r.u32()?;
                    let mut y = BTreeMap::new();
                    for _ in 0..count {
                        let i = r.u32()? as usize;
                        if y.insert(i, Tag(r.vector()?)).is_some() {
                            return Err(Error::DuplicatePlayer(i));
                        }
                    }
                    r.finish()?;
                    out.round2.push(Round2Msg {
                        sender: record.sender,
                        identification: IdentificationInfo { seed, y },
                    });
                }
                (round, _) => {
                    return Err(Error::Decode(format!(
                        "transcript line {}: bad round {round} / recipient combination",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ciss::ciss_deal;
    use crate::field::random_vector;
    use crate::sss::UnderlyingScheme;
    use crate::{Gf16, Gf2, Gf256};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn dealt(n: usize, d: usize, lprime: usize) -> Vec<CissShare<Gf16>> {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let scheme = UnderlyingScheme::shamir(2, n, d).unwrap();
        let secret: Vec<Gf16> = random_vector(d, &mut rng);
        ciss_deal(&secret, &scheme, lprime, &mut rng).unwrap()
    }

    #[test]
    fn share_round_trip_and_layout() {
        let shares = dealt(3, 2, 4);
        for s in &shares {
            let bytes = s.encode();
            assert_eq!(&bytes[..4], b"CISS");
            assert_eq!(bytes[4], 1);
            assert_eq!(bytes[5], 4);
            assert_eq!(
                u32::from_le_bytes(bytes[10..14].try_into().unwrap()) as usize,
                s.player
            );
            // 23 elements of 1 byte each, plus 2n = 6 vector prefixes
            assert_eq!(bytes.len(), HEADER_LEN + 6 * 4 + 23);
            assert_eq!(CissShare::<Gf16>::decode(&bytes).unwrap(), *s);
        }
    }

    #[test]
    fn decode_rejects_wrong_field_and_corruption() {
        let bytes = dealt(3, 1, 2)[0].encode();
        assert_eq!(
            CissShare::<Gf256>::decode(&bytes),
            Err(Error::FieldMismatch {
                expected: 8,
                found: 4
            })
        );
        assert!(CissShare::<Gf2>::decode(&bytes).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(CissShare::<Gf16>::decode(&bad).is_err());
        assert!(CissShare::<Gf16>::decode(&bytes[..bytes.len() - 1]).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(CissShare::<Gf16>::decode(&extra).is_err());
    }

    #[test]
    fn transcript_round_trip() {
        let shares = dealt(3, 2, 3);
        let mut t = Transcript::default();
        for s in &shares {
            for j in (1..=3).filter(|&j| j != s.player) {
                t.round1.push(s.message_to(j).unwrap());
            }
            t.round2.push(Round2Msg {
                sender: s.player,
                identification: s.identification.clone(),
            });
        }
        let text = t.to_jsonl();
        assert_eq!(text.lines().count(), 9);
        assert!(text
            .lines()
            .next()
            .unwrap()
            .starts_with("{\"round\":1,\"sender\":1,\"recipient\":2"));
        assert_eq!(Transcript::<Gf16>::from_jsonl(&text, 2, 3).unwrap(), t);
        assert!(Transcript::<Gf16>::from_jsonl(
            "{\"round\":3,\"sender\":1,\"recipient\":null,\"payload\":\"\"}",
            2,
            3
        )
        .is_err());
    }
}
