//! Cheater-identifiable secret sharing on top of any [`SecretSharing`]
//! scheme.
//!
//! The dealer hands player `j` a publishable part `(X_j, {Z_{i,j}})` and an
//! identification part `(T_j, {Y_{j,i}})` with `Y_{j,i} = T_j X_i + Z_{j,i}`.
//! The one-time key `Z_{j,i}` is held by player `i` and checked by
//! verifier `j`. At reconstruction each applicant `i`
//! sends `(X_i, Z_{j,i})` to every other applicant `j`, who checks it
//! against its private tag.
//!
//! Three reconstruction variants are provided:
//!
//! * individual identification: every verifier judges its own inbox and
//!   reconstructs from the senders it accepted;
//! * agreed identification: identification info is broadcast in a second
//!   round, everyone recomputes everyone's verdicts, and the honest set is
//!   decided by vote;
//! * detection: the same two rounds, but the output is only whether any
//!   applicant saw a cheater.
//!
//! Round-one messages are plain values produced before any round-two data
//! exists, so a round-two broadcast can never influence what was sent in
//! round one.

pub mod wire;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::{random_vector, BinaryField, RandomSource};
use crate::hashmac::{mac_tag, mac_verify, Tag, ToeplitzSeed};
use crate::sss::{AccessStructure, PlayerIndex, Secret, SecretSharing};

/// Share dimensions: `n` players, underlying share length `m`, tag length
/// `lprime` (the security parameter in field elements).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CissParams {
    pub n: usize,
    pub m: usize,
    pub lprime: usize,
}

impl CissParams {
    /// Field elements in one serialized share: `(2n - 1) l' + 2m - 1`.
    pub fn share_elements(&self) -> usize {
        (2 * self.n - 1) * self.lprime + 2 * self.m - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PublishableInfo<F> {
    /// Underlying share `X_i`.
    pub x: Vec<F>,
    /// Keys `Z_{j,i}` held by this player, by verifier `j`.
    pub z: BTreeMap<PlayerIndex, Vec<F>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdentificationInfo<F> {
    /// `T_j`, with `lprime` rows and `m` columns.
    pub seed: ToeplitzSeed<F>,
    /// Tags `Y_{j,i}` by sender `i`.
    pub y: BTreeMap<PlayerIndex, Tag<F>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CissShare<F> {
    pub player: PlayerIndex,
    pub params: CissParams,
    pub publishable: PublishableInfo<F>,
    pub identification: IdentificationInfo<F>,
}

impl<F: BinaryField> CissShare<F> {
    /// Field elements in this share as serialized.
    pub fn element_count(&self) -> usize {
        self.publishable.x.len()
            + self.publishable.z.values().map(Vec::len).sum::<usize>()
            + self.identification.seed.as_slice().len()
            + self.identification.y.values().map(Tag::len).sum::<usize>()
    }

    /// The honest round-one message to `recipient`.
    pub fn message_to(&self, recipient: PlayerIndex) -> Result<Round1Msg<F>> {
        let z = self
            .publishable
            .z
            .get(&recipient)
            .ok_or(Error::UnknownPlayer(recipient))?;
        Ok(Round1Msg {
            sender: self.player,
            recipient,
            x: self.publishable.x.clone(),
            z: z.clone(),
        })
    }
}

/// `(X_i', Z_{j,i}')` from sender `i` to recipient `j`, as delivered.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Round1Msg<F> {
    pub sender: PlayerIndex,
    pub recipient: PlayerIndex,
    pub x: Vec<F>,
    pub z: Vec<F>,
}

/// A broadcast of identification info, as delivered.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Round2Msg<F> {
    pub sender: PlayerIndex,
    pub identification: IdentificationInfo<F>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Honest,
    Cheater,
}

pub type Verdicts = BTreeMap<PlayerIndex, Verdict>;

/// Round-one messages received by one verifier, by sender.
pub type Inbox<F> = BTreeMap<PlayerIndex, Round1Msg<F>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionOutcome<F> {
    pub secret: Option<Secret<F>>,
    /// The cheater list `L`.
    pub cheaters: BTreeSet<PlayerIndex>,
    pub honest: BTreeSet<PlayerIndex>,
    /// Cheating was detected without naming anyone (detection variant, or
    /// no agreement in the agreed variant). Both sets are empty then.
    pub detected: bool,
}

impl<F> ReconstructionOutcome<F> {
    fn detected() -> Self {
        Self {
            secret: None,
            cheaters: BTreeSet::new(),
            honest: BTreeSet::new(),
            detected: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AgreedIdentification {
    Agreed(BTreeSet<PlayerIndex>),
    NoAgreement,
}

/// Deals `secret` through `scheme` and attaches the MAC material.
///
/// Draw order from `rng`: the scheme's randomness, then the keys `Z_{j,i}`
/// by holder `i` and verifier `j` ascending, then the seeds `T_1..T_n`.
pub fn ciss_deal<F, S, R>(
    secret: &[F],
    scheme: &S,
    lprime: usize,
    rng: &mut R,
) -> Result<Vec<CissShare<F>>>
where
    F: BinaryField,
    S: SecretSharing<F>,
    R: RandomSource + ?Sized,
{
    if lprime == 0 {
        return Err(Error::InvalidConfig(
            "security parameter l' must be at least 1".into(),
        ));
    }
    let n = scheme.players();
    let m = scheme.share_len();
    let params = CissParams { n, m, lprime };
    let xs = scheme.share(secret, rng)?;
    debug_assert!(xs.len() == n && xs.iter().all(|x| x.len() == m));

    let keys: Vec<BTreeMap<PlayerIndex, Vec<F>>> = (1..=n)
        .map(|i| {
            (1..=n)
                .filter(|&j| j != i)
                .map(|j| (j, random_vector(lprime, rng)))
                .collect()
        })
        .collect();
    let seeds: Vec<ToeplitzSeed<F>> = (0..n)
        .map(|_| ToeplitzSeed::random(lprime, m, rng))
        .collect();

    (1..=n)
        .map(|j| {
            let seed = seeds[j - 1].clone();
            let y = (1..=n)
                .filter(|&i| i != j)
                .map(|i| Ok((i, mac_tag(&seed, &xs[i - 1], &keys[i - 1][&j])?)))
                .collect::<Result<_>>()?;
            Ok(CissShare {
                player: j,
                params,
                publishable: PublishableInfo {
                    x: xs[j - 1].clone(),
                    z: keys[j - 1].clone(),
                },
                identification: IdentificationInfo { seed, y },
            })
        })
        .collect()
}

/// Honest round-one messages from `share.player` to every other applicant.
pub fn round1_messages<F: BinaryField>(
    share: &CissShare<F>,
    applicants: &BTreeSet<PlayerIndex>,
) -> Result<Vec<Round1Msg<F>>> {
    if !applicants.contains(&share.player) {
        return Err(Error::InvalidConfig(format!(
            "player {} is not an applicant",
            share.player
        )));
    }
    applicants
        .iter()
        .filter(|&&j| j != share.player)
        .map(|&j| share.message_to(j))
        .collect()
}

/// Collects the messages addressed to `recipient`.
pub fn inbox_for<F: BinaryField>(
    recipient: PlayerIndex,
    messages: &[Round1Msg<F>],
) -> Result<Inbox<F>> {
    let mut inbox = Inbox::new();
    for msg in messages.iter().filter(|m| m.recipient == recipient) {
        if inbox.insert(msg.sender, msg.clone()).is_some() {
            return Err(Error::DuplicatePlayer(msg.sender));
        }
    }
    Ok(inbox)
}

fn check_message<F: BinaryField>(
    ident: &IdentificationInfo<F>,
    tag: &Tag<F>,
    msg: &Round1Msg<F>,
) -> Verdict {
    let seed = &ident.seed;
    if msg.x.len() != seed.cols() || msg.z.len() != seed.rows() || tag.len() != seed.rows() {
        return Verdict::Cheater;
    }
    match mac_verify(seed, &msg.x, &msg.z, tag) {
        Ok(true) => Verdict::Honest,
        _ => Verdict::Cheater,
    }
}

/// Checks every message in `inbox` against the verifier's tags.
pub fn identify_individual<F: BinaryField>(
    ident: &IdentificationInfo<F>,
    inbox: &Inbox<F>,
) -> Result<Verdicts> {
    inbox
        .iter()
        .map(|(&sender, msg)| {
            let tag = ident.y.get(&sender).ok_or(Error::UnknownPlayer(sender))?;
            Ok((sender, check_message(ident, tag, msg)))
        })
        .collect()
}

fn reconstruct_from<F, S>(
    scheme: &S,
    own: &CissShare<F>,
    inbox: &Inbox<F>,
    members: &BTreeSet<PlayerIndex>,
) -> Result<Option<Secret<F>>>
where
    F: BinaryField,
    S: SecretSharing<F>,
{
    let m = scheme.share_len();
    let mut points: Vec<(PlayerIndex, &[F])> = Vec::with_capacity(members.len());
    for &p in members {
        let x = if p == own.player {
            own.publishable.x.as_slice()
        } else {
            match inbox.get(&p) {
                Some(msg) => msg.x.as_slice(),
                None => return Err(Error::UnknownPlayer(p)),
            }
        };
        if x.len() != m {
            return Ok(None);
        }
        points.push((p, x));
    }
    scheme.reconstruct(&points)
}

fn applicants_of<F>(own: &CissShare<F>, inbox: &Inbox<F>) -> BTreeSet<PlayerIndex> {
    inbox.keys().copied().chain([own.player]).collect()
}

/// Reconstructs from the verifier's own share plus every accepted sender,
/// provided that set is qualified under `access`.
pub fn reconstruct_individual<F, S>(
    own: &CissShare<F>,
    verdicts: &Verdicts,
    inbox: &Inbox<F>,
    access: &AccessStructure,
    scheme: &S,
) -> Result<ReconstructionOutcome<F>>
where
    F: BinaryField,
    S: SecretSharing<F>,
{
    let applicants = applicants_of(own, inbox);
    let honest: BTreeSet<PlayerIndex> = verdicts
        .iter()
        .filter(|(_, &v)| v == Verdict::Honest)
        .map(|(&p, _)| p)
        .chain([own.player])
        .collect();
    let cheaters = applicants.difference(&honest).copied().collect();
    let secret = if access.is_qualified(&honest)? {
        reconstruct_from(scheme, own, inbox, &honest)?
    } else {
        None
    };
    Ok(ReconstructionOutcome {
        secret,
        cheaters,
        honest,
        detected: false,
    })
}

fn well_formed<F: BinaryField>(
    ident: &IdentificationInfo<F>,
    owner: PlayerIndex,
    applicants: &BTreeSet<PlayerIndex>,
    params: &CissParams,
) -> bool {
    ident.seed.rows() == params.lprime
        && ident.seed.cols() == params.m
        && applicants
            .iter()
            .filter(|&&i| i != owner)
            .all(|i| ident.y.get(i).is_some_and(|t| t.len() == params.lprime))
}

/// Each applicant's verdicts, recomputed from its round-two broadcast and
/// the round-one messages addressed to it. `None` marks an applicant whose
/// broadcast is missing or malformed.
pub fn recompute_verdicts<F: BinaryField>(
    round1: &[Round1Msg<F>],
    round2: &[Round2Msg<F>],
    applicants: &BTreeSet<PlayerIndex>,
    params: &CissParams,
) -> Result<BTreeMap<PlayerIndex, Option<Verdicts>>> {
    let mut broadcasts = BTreeMap::new();
    for msg in round2.iter().filter(|m| applicants.contains(&m.sender)) {
        if broadcasts.insert(msg.sender, &msg.identification).is_some() {
            return Err(Error::DuplicatePlayer(msg.sender));
        }
    }
    let relevant: Vec<Round1Msg<F>> = round1
        .iter()
        .filter(|m| {
            applicants.contains(&m.sender)
                && applicants.contains(&m.recipient)
                && m.sender != m.recipient
        })
        .cloned()
        .collect();
    applicants
        .iter()
        .map(|&j| {
            let verdicts = match broadcasts.get(&j) {
                Some(ident) if well_formed(ident, j, applicants, params) => {
                    Some(identify_individual(ident, &inbox_for(j, &relevant)?)?)
                }
                _ => None,
            };
            Ok((j, verdicts))
        })
        .collect()
}

/// Votes needed to agree: `ceil((n' - 1) / 2)`, at least one.
pub fn agreement_threshold(applicants: usize) -> usize {
    applicants.saturating_sub(1).div_ceil(2).max(1)
}

/// Majority vote over the applicants' honest sets.
///
/// Each well-formed applicant `j` votes for `{j}` plus the senders it
/// accepts. A set wins if it reaches [`agreement_threshold`] votes and no
/// other set has as many; otherwise there is no agreement.
pub fn agreed_identify<F: BinaryField>(
    round1: &[Round1Msg<F>],
    round2: &[Round2Msg<F>],
    applicants: &BTreeSet<PlayerIndex>,
    params: &CissParams,
) -> Result<AgreedIdentification> {
    let verdicts = recompute_verdicts(round1, round2, applicants, params)?;
    let mut tally: BTreeMap<BTreeSet<PlayerIndex>, usize> = BTreeMap::new();
    for (j, v) in verdicts {
        let Some(v) = v else { continue };
        let vote: BTreeSet<PlayerIndex> = v
            .iter()
            .filter(|(_, &x)| x == Verdict::Honest)
            .map(|(&p, _)| p)
            .chain([j])
            .collect();
        *tally.entry(vote).or_default() += 1;
    }
    let threshold = agreement_threshold(applicants.len());
    let Some(best) = tally.values().copied().max() else {
        return Ok(AgreedIdentification::NoAgreement);
    };
    let mut leaders = tally.into_iter().filter(|&(_, c)| c == best);
    match (leaders.next(), leaders.next()) {
        (Some((set, count)), None) if count >= threshold => Ok(AgreedIdentification::Agreed(set)),
        _ => Ok(AgreedIdentification::NoAgreement),
    }
}

/// True iff some applicant's recomputed verdicts contain a cheater. A
/// missing or malformed broadcast also counts as detection.
pub fn detect_cdss<F: BinaryField>(
    round1: &[Round1Msg<F>],
    round2: &[Round2Msg<F>],
    applicants: &BTreeSet<PlayerIndex>,
    params: &CissParams,
) -> Result<bool> {
    Ok(recompute_verdicts(round1, round2, applicants, params)?
        .values()
        .any(|v| {
            v.as_ref()
                .is_none_or(|v| v.values().any(|&x| x == Verdict::Cheater))
        }))
}

/// Reconstruction after agreed identification, from `own`'s point of view.
pub fn reconstruct_agreed<F, S>(
    agreed: &AgreedIdentification,
    own: &CissShare<F>,
    inbox: &Inbox<F>,
    access: &AccessStructure,
    scheme: &S,
) -> Result<ReconstructionOutcome<F>>
where
    F: BinaryField,
    S: SecretSharing<F>,
{
    let AgreedIdentification::Agreed(honest) = agreed else {
        return Ok(ReconstructionOutcome::detected());
    };
    let applicants = applicants_of(own, inbox);
    let cheaters = applicants.difference(honest).copied().collect();
    let secret = if access.is_qualified(honest)? {
        reconstruct_from(scheme, own, inbox, honest)?
    } else {
        None
    };
    Ok(ReconstructionOutcome {
        secret,
        cheaters,
        honest: honest.clone(),
        detected: false,
    })
}

/// Reconstruction after detection: all applicants' shares are used when
/// nothing was detected, otherwise the result is `(⊥, ∅)`.
pub fn reconstruct_cdss<F, S>(
    detected: bool,
    own: &CissShare<F>,
    inbox: &Inbox<F>,
    access: &AccessStructure,
    scheme: &S,
) -> Result<ReconstructionOutcome<F>>
where
    F: BinaryField,
    S: SecretSharing<F>,
{
    if detected {
        return Ok(ReconstructionOutcome::detected());
    }
    let applicants = applicants_of(own, inbox);
    let secret = if access.is_qualified(&applicants)? {
        reconstruct_from(scheme, own, inbox, &applicants)?
    } else {
        None
    };
    Ok(ReconstructionOutcome {
        secret,
        cheaters: BTreeSet::new(),
        honest: applicants,
        detected: false,
    })
}
