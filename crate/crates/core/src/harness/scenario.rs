//! Field-independent experiment descriptions, readable from TOML.
//!
//! ```toml
//! field_w = 1
//! n = 4
//! scheme = "additive"
//! lprime = 8
//! protocol = "agreed"
//! strategy = "majority-framing"
//! corrupted = [2, 3, 4]
//! target = 1
//! trials = 1000
//! seed = 7
//! ```
//!
//! `delta_x` and `delta_z` are hex strings holding the concatenated
//! canonical encodings of their elements. `access` lists the minimal
//! qualified sets of a monotone access structure.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Protocol, SchemeChoice, TrialConfig};
use crate::adversary::{AdversaryStrategy, StrategyKind};
use crate::error::{Error, Result};
use crate::field::codec::decode_raw;
use crate::field::BinaryField;
use crate::sss::{AccessStructure, PlayerIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    Honest,
    RandomForgery,
    FixedDelta,
    MajorityFraming,
    Passive,
}

impl StrategyName {
    pub const ALL: [StrategyName; 5] = [
        StrategyName::Honest,
        StrategyName::RandomForgery,
        StrategyName::FixedDelta,
        StrategyName::MajorityFraming,
        StrategyName::Passive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyName::Honest => "honest",
            StrategyName::RandomForgery => "random-forgery",
            StrategyName::FixedDelta => "fixed-delta",
            StrategyName::MajorityFraming => "majority-framing",
            StrategyName::Passive => "passive",
        }
    }
}

impl fmt::Display for StrategyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidConfig(format!("unknown strategy {s:?} ({})", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Shamir,
    Additive,
}

impl FromStr for SchemeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shamir" => Ok(Self::Shamir),
            "additive" => Ok(Self::Additive),
            _ => Err(Error::InvalidConfig(format!(
                "unknown scheme {s:?} (shamir, additive)"
            ))),
        }
    }
}

impl Serialize for Protocol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Protocol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn default_true() -> bool {
    true
}

fn default_one() -> usize {
    1
}

fn default_trials() -> u64 {
    1000
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub field_w: u32,
    pub n: usize,
    /// Defaults to every player.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub applicants: Option<Vec<PlayerIndex>>,
    pub scheme: SchemeName,
    /// Threshold for Shamir sharing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Minimal qualified sets overriding the scheme's access structure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub access: Option<Vec<Vec<PlayerIndex>>>,
    #[serde(default = "default_one")]
    pub d: usize,
    /// Share length; must equal `d` when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub lprime: usize,
    pub protocol: Protocol,
    pub strategy: StrategyName,
    #[serde(default)]
    pub corrupted: Vec<PlayerIndex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PlayerIndex>,
    #[serde(default = "default_true")]
    pub per_recipient: bool,
    #[serde(default)]
    pub forge_target: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_z: Option<String>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

/// Minimal sets of a monotone access structure, as stored in an access
/// file: `n = 4` and `minimal = [[1, 2], [3, 4]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccessFile {
    pub n: usize,
    pub minimal: Vec<Vec<PlayerIndex>>,
}

impl AccessFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("access file: {e}")))
    }

    pub fn access_structure(&self) -> Result<AccessStructure> {
        monotone(self.n, &self.minimal)
    }
}

fn monotone(n: usize, minimal: &[Vec<PlayerIndex>]) -> Result<AccessStructure> {
    AccessStructure::monotone(
        n,
        minimal
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect(),
    )
}

fn hex_vector<F: BinaryField>(what: &str, text: &str) -> Result<Vec<F>> {
    let bytes =
        hex::decode(text.trim()).map_err(|e| Error::InvalidConfig(format!("{what}: {e}")))?;
    decode_raw(&bytes)
}

fn unique(what: &str, players: &[PlayerIndex]) -> Result<BTreeSet<PlayerIndex>> {
    let mut set = BTreeSet::new();
    for &p in players {
        if !set.insert(p) {
            return Err(Error::InvalidConfig(format!(
                "{what} lists player {p} twice"
            )));
        }
    }
    Ok(set)
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("scenario: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn config<F: BinaryField>(&self) -> Result<TrialConfig<F>> {
        if self.field_w != F::DEGREE {
            return Err(Error::FieldMismatch {
                expected: F::DEGREE,
                found: self.field_w,
            });
        }
        if let Some(m) = self.m {
            if m != self.d {
                return Err(Error::InvalidConfig(format!(
                    "share length m = {m} must equal the secret length d = {}",
                    self.d
                )));
            }
        }
        let scheme = match (self.scheme, self.k) {
            (SchemeName::Shamir, Some(k)) => SchemeChoice::Shamir { k },
            (SchemeName::Shamir, None) => {
                return Err(Error::InvalidConfig("shamir sharing needs k".into()))
            }
            (SchemeName::Additive, None) => SchemeChoice::Additive,
            (SchemeName::Additive, Some(_)) => {
                return Err(Error::InvalidConfig(
                    "k applies to shamir sharing only".into(),
                ))
            }
        };
        let applicants = match &self.applicants {
            Some(a) => unique("applicants", a)?,
            None => (1..=self.n).collect(),
        };
        let corrupted = unique("corrupted", &self.corrupted)?;
        let need = |what: &str, v: &Option<String>| -> Result<String> {
            v.clone().ok_or_else(|| {
                Error::InvalidConfig(format!("strategy {} needs {what}", self.strategy))
            })
        };
        let kind = match self.strategy {
            StrategyName::Honest => StrategyKind::HonestBaseline,
            StrategyName::Passive => StrategyKind::PassiveCollusion,
            StrategyName::RandomForgery => StrategyKind::RandomForgery {
                per_recipient: self.per_recipient,
            },
            StrategyName::FixedDelta => StrategyKind::FixedDelta {
                delta_x: hex_vector("delta_x", &need("delta_x", &self.delta_x)?)?,
                delta_z: hex_vector("delta_z", &need("delta_z", &self.delta_z)?)?,
            },
            StrategyName::MajorityFraming => StrategyKind::MajorityFraming {
                target: self.target.ok_or_else(|| {
                    Error::InvalidConfig("majority-framing needs a target".into())
                })?,
                forge_target: self.forge_target,
            },
        };
        let access = self
            .access
            .as_ref()
            .map(|m| monotone(self.n, m))
            .transpose()?;
        Ok(TrialConfig {
            n: self.n,
            applicants,
            scheme,
            access,
            d: self.d,
            lprime: self.lprime,
            protocol: self.protocol,
            strategy: AdversaryStrategy { kind, corrupted },
            trials: self.trials,
            seed: self.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Gf16, Gf2};
    use num_traits::{One, Zero};

    const FRAMING: &str = r#"
field_w = 1
n = 4
scheme = "additive"
lprime = 8
protocol = "agreed"
strategy = "majority-framing"
corrupted = [2, 3, 4]
target = 1
trials = 1000
seed = 7
"#;

    #[test]
    fn parses_framing_scenario() {
        let s = Scenario::from_toml(FRAMING).unwrap();
        let cfg = s.config::<Gf2>().unwrap();
        assert_eq!(cfg.applicants, (1..=4).collect());
        assert_eq!(cfg.strategy.corrupted, [2, 3, 4].into());
        assert_eq!(
            cfg.strategy.kind,
            StrategyKind::MajorityFraming {
                target: 1,
                forge_target: false
            }
        );
        assert_eq!((cfg.d, cfg.trials, cfg.seed), (1, 1000, 7));
        assert_eq!(Scenario::from_toml(&s.to_toml()).unwrap(), s);
        assert!(matches!(
            s.config::<Gf16>(),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn fixed_delta_hex() {
        let text = r#"
field_w = 4
n = 3
scheme = "shamir"
k = 2
d = 2
lprime = 3
protocol = "individual"
strategy = "fixed-delta"
corrupted = [3]
delta_x = "0100"
delta_z = "0f0000"
"#;
        let cfg = Scenario::from_toml(text).unwrap().config::<Gf16>().unwrap();
        let StrategyKind::FixedDelta { delta_x, delta_z } = cfg.strategy.kind else {
            panic!("wrong kind")
        };
        assert_eq!(delta_x, vec![Gf16::one(), Gf16::zero()]);
        assert_eq!(delta_z[0].value(), 0xf);
        assert_eq!(cfg.trials, 1000);
    }

    #[test]
    fn rejects_bad_scenarios() {
        let base = Scenario::from_toml(FRAMING).unwrap();
        let unknown = format!("{FRAMING}\nbogus = 1\n");
        assert!(Scenario::from_toml(&unknown).is_err());
        assert!(Scenario::from_toml(&FRAMING.replace("agreed", "vote")).is_err());

        let mut s = base.clone();
        s.target = None;
        assert!(s.config::<Gf2>().is_err());
        let mut s = base.clone();
        s.scheme = SchemeName::Shamir;
        assert!(s.config::<Gf2>().is_err());
        let mut s = base.clone();
        s.m = Some(2);
        assert!(s.config::<Gf2>().is_err());
        let mut s = base;
        s.corrupted = vec![2, 2];
        assert!(s.config::<Gf2>().is_err());
    }

    #[test]
    fn access_file() {
        let a = AccessFile::from_toml("n = 4\nminimal = [[1, 2], [3, 4]]\n").unwrap();
        let access = a.access_structure().unwrap();
        assert!(access.is_qualified(&[1, 2, 3].into()).unwrap());
        assert!(!access.is_qualified(&[1, 3].into()).unwrap());
        assert!(AccessFile::from_toml("n = 2\nminimal = [[1, 5]]\n")
            .unwrap()
            .access_structure()
            .is_err());
    }

    #[test]
    fn names_round_trip() {
        for k in StrategyName::ALL {
            assert_eq!(k.name().parse::<StrategyName>().unwrap(), k);
        }
        for p in Protocol::ALL {
            assert_eq!(p.name().parse::<Protocol>().unwrap(), p);
        }
        assert!("nope".parse::<StrategyName>().is_err());
    }
}
