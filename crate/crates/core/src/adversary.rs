//! Rushing cheaters.
//!
//! A [`ForgeryPlan`] can only be built from a [`HonestRoundOne`], the full
//! set of messages honest applicants sent in round one. The adversary
//! therefore always sees every honest message before committing its own,
//! and it never sees a verifier's seed: round-two identification info does
//! not exist yet when the plan is made.

use std::collections::{BTreeMap, BTreeSet};

use crate::ciss::{agreement_threshold, round1_messages, CissShare, IdentificationInfo, Round1Msg};
use crate::error::{Error, Result};
use crate::field::{random_vector, vec_add, BinaryField, RandomSource};
use crate::hashmac::{mac_tag, ToeplitzSeed};
use crate::sss::PlayerIndex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyKind<F> {
    /// Cheaters send their original shares.
    HonestBaseline,
    /// `x'` resampled uniformly among values `!= x`; with `per_recipient`
    /// each honest recipient gets an independent forgery.
    RandomForgery { per_recipient: bool },
    /// `(x + delta_x, z + delta_z)` to every honest recipient.
    FixedDelta { delta_x: Vec<F>, delta_z: Vec<F> },
    /// Colluding majority rewrites its round-two broadcasts so the agreed
    /// vote excludes `target`. With `forge_target`, round-one messages to
    /// the target are random forgeries instead of originals.
    MajorityFraming {
        target: PlayerIndex,
        forge_target: bool,
    },
    /// Originals only; used to probe what a coalition learns.
    PassiveCollusion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryStrategy<F> {
    pub kind: StrategyKind<F>,
    pub corrupted: BTreeSet<PlayerIndex>,
}

impl<F> AdversaryStrategy<F> {
    pub fn honest() -> Self {
        Self {
            kind: StrategyKind::HonestBaseline,
            corrupted: BTreeSet::new(),
        }
    }

    pub fn is_forging(&self) -> bool {
        !matches!(
            self.kind,
            StrategyKind::HonestBaseline | StrategyKind::PassiveCollusion
        )
    }
}

/// Everything honest applicants sent in round one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HonestRoundOne<F> {
    applicants: BTreeSet<PlayerIndex>,
    honest: BTreeSet<PlayerIndex>,
    messages: Vec<Round1Msg<F>>,
}

impl<F: BinaryField> HonestRoundOne<F> {
    pub fn collect<'a>(
        honest_shares: impl IntoIterator<Item = &'a CissShare<F>>,
        applicants: &BTreeSet<PlayerIndex>,
    ) -> Result<Self> {
        let mut honest = BTreeSet::new();
        let mut messages = Vec::new();
        for share in honest_shares {
            if !honest.insert(share.player) {
                return Err(Error::DuplicatePlayer(share.player));
            }
            messages.extend(round1_messages(share, applicants)?);
        }
        Ok(Self {
            applicants: applicants.clone(),
            honest,
            messages,
        })
    }

    pub fn applicants(&self) -> &BTreeSet<PlayerIndex> {
        &self.applicants
    }

    pub fn honest(&self) -> &BTreeSet<PlayerIndex> {
        &self.honest
    }

    pub fn messages(&self) -> &[Round1Msg<F>] {
        &self.messages
    }

    pub fn message(&self, sender: PlayerIndex, recipient: PlayerIndex) -> Option<&Round1Msg<F>> {
        self.messages
            .iter()
            .find(|m| m.sender == sender && m.recipient == recipient)
    }
}

/// Round-one forgeries keyed by `(cheater, honest recipient)`, and
/// optional rewritten round-two broadcasts by cheater.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForgeryPlan<F> {
    pub round1: BTreeMap<(PlayerIndex, PlayerIndex), Round1Msg<F>>,
    pub round2: BTreeMap<PlayerIndex, IdentificationInfo<F>>,
}

fn index_coalition<'a, F: BinaryField>(
    shares: &'a [CissShare<F>],
    observed: &HonestRoundOne<F>,
) -> Result<BTreeMap<PlayerIndex, &'a CissShare<F>>> {
    let mut coalition = BTreeMap::new();
    for s in shares {
        if !observed.applicants.contains(&s.player) {
            return Err(Error::InvalidConfig(format!(
                "corrupted player {} is not an applicant",
                s.player
            )));
        }
        if observed.honest.contains(&s.player) {
            return Err(Error::InvalidConfig(format!(
                "player {} is both honest and corrupted",
                s.player
            )));
        }
        if coalition.insert(s.player, s).is_some() {
            return Err(Error::DuplicatePlayer(s.player));
        }
    }
    Ok(coalition)
}

fn resample_distinct<F: BinaryField, R: RandomSource + ?Sized>(x: &[F], rng: &mut R) -> Vec<F> {
    loop {
        let candidate = random_vector(x.len(), rng);
        if candidate != x {
            return candidate;
        }
    }
}

/// Builds the cheaters' round-one forgeries (and, for framing, round-two
/// rewrites) after seeing every honest round-one message.
pub fn rushing_forge<F: BinaryField, R: RandomSource + ?Sized>(
    strategy: &AdversaryStrategy<F>,
    corrupted_shares: &[CissShare<F>],
    observed: &HonestRoundOne<F>,
    rng: &mut R,
) -> Result<ForgeryPlan<F>> {
    let coalition = index_coalition(corrupted_shares, observed)?;
    if coalition.keys().copied().collect::<BTreeSet<_>>() != strategy.corrupted {
        return Err(Error::InvalidConfig(
            "corrupted shares do not match the corrupted set".into(),
        ));
    }
    let mut plan = ForgeryPlan {
        round1: BTreeMap::new(),
        round2: BTreeMap::new(),
    };
    match &strategy.kind {
        StrategyKind::HonestBaseline | StrategyKind::PassiveCollusion => {
            for (&i, share) in &coalition {
                for &j in &observed.honest {
                    plan.round1.insert((i, j), share.message_to(j)?);
                }
            }
        }
        StrategyKind::RandomForgery { per_recipient } => {
            for (&i, share) in &coalition {
                let shared = resample_distinct(&share.publishable.x, rng);
                for &j in &observed.honest {
                    let mut msg = share.message_to(j)?;
                    msg.x = if *per_recipient {
                        resample_distinct(&share.publishable.x, rng)
                    } else {
                        shared.clone()
                    };
                    plan.round1.insert((i, j), msg);
                }
            }
        }
        StrategyKind::FixedDelta { delta_x, delta_z } => {
            if delta_x.iter().all(|e| e.is_zero()) {
                return Err(Error::NotAForgery("delta_x must be nonzero"));
            }
            for (&i, share) in &coalition {
                for &j in &observed.honest {
                    let mut msg = share.message_to(j)?;
                    msg.x = vec_add(&msg.x, delta_x)?;
                    msg.z = vec_add(&msg.z, delta_z)?;
                    plan.round1.insert((i, j), msg);
                }
            }
        }
        StrategyKind::MajorityFraming {
            target,
            forge_target,
        } => {
            return majority_framing(corrupted_shares, *target, observed, *forge_target, rng);
        }
    }
    Ok(plan)
}

/// Fresh identification info for `share.player` that accepts exactly the
/// senders in `accept` and rejects those in `reject`.
///
/// `known` supplies, per sender `i`, the pair `(X_i, Z_{j,i})` the
/// coalition knows for verifier `j = share.player`. Rejection flips the
/// first tag coordinate. Tags for senders in neither set are kept.
pub fn rewrite_identification<F: BinaryField, R: RandomSource + ?Sized>(
    share: &CissShare<F>,
    accept: &BTreeSet<PlayerIndex>,
    reject: &BTreeSet<PlayerIndex>,
    known: &BTreeMap<PlayerIndex, (Vec<F>, Vec<F>)>,
    rng: &mut R,
) -> Result<IdentificationInfo<F>> {
    let params = share.params;
    let seed = ToeplitzSeed::random(params.lprime, params.m, rng);
    let mut y = share.identification.y.clone();
    for &i in accept.iter().chain(reject) {
        let (x, z) = known.get(&i).ok_or(Error::UnknownPlayer(i))?;
        let mut tag = mac_tag(&seed, x, z)?;
        if reject.contains(&i) {
            tag.0[0] += F::one();
        }
        y.insert(i, tag);
    }
    Ok(IdentificationInfo { seed, y })
}

/// The colluding-majority attack on agreed identification.
///
/// Cheaters send the target its original shares in round one (unless
/// `forge_target`), then each cheater `v` broadcasts a fresh seed `T'_v`
/// with `Y'_{v,w} = T'_v X_w + Z_{v,w}` for fellow cheaters and other
/// honest applicants, and a tag for the target that fails the check.
pub fn majority_framing<F: BinaryField, R: RandomSource + ?Sized>(
    corrupted_shares: &[CissShare<F>],
    target: PlayerIndex,
    observed: &HonestRoundOne<F>,
    forge_target: bool,
    rng: &mut R,
) -> Result<ForgeryPlan<F>> {
    let coalition = index_coalition(corrupted_shares, observed)?;
    if !observed.honest.contains(&target) {
        return Err(Error::AttackPrecondition(format!(
            "target {target} is not an honest applicant"
        )));
    }
    let needed = agreement_threshold(observed.applicants.len());
    if coalition.len() < needed {
        return Err(Error::AttackPrecondition(format!(
            "coalition of {} is below the agreement threshold {needed}",
            coalition.len()
        )));
    }

    let mut plan = ForgeryPlan {
        round1: BTreeMap::new(),
        round2: BTreeMap::new(),
    };
    for (&i, share) in &coalition {
        for &j in &observed.honest {
            let mut msg = share.message_to(j)?;
            if forge_target && j == target {
                msg.x = resample_distinct(&msg.x, rng);
            }
            plan.round1.insert((i, j), msg);
        }
    }

    let reject: BTreeSet<PlayerIndex> = [target].into();
    for (&v, share) in &coalition {
        let mut known = BTreeMap::new();
        for (&w, other) in coalition.iter().filter(|(&w, _)| w != v) {
            let z = other.publishable.z.get(&v).ok_or(Error::UnknownPlayer(v))?;
            known.insert(w, (other.publishable.x.clone(), z.clone()));
        }
        for &h in &observed.honest {
            let msg = observed.message(h, v).ok_or(Error::UnknownPlayer(h))?;
            known.insert(h, (msg.x.clone(), msg.z.clone()));
        }
        let accept: BTreeSet<PlayerIndex> = observed
            .applicants
            .iter()
            .copied()
            .filter(|&p| p != v && p != target)
            .collect();
        plan.round2.insert(
            v,
            rewrite_identification(share, &accept, &reject, &known, rng)?,
        );
    }
    Ok(plan)
}
