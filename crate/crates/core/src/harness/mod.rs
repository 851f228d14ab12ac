//! Experiment driver: deal, let honest applicants speak, let the rushing
//! adversary answer, deliver, identify, reconstruct, and score the outcome.
//!
//! [`Experiment::run_trial`] runs one seeded end-to-end execution;
//! [`estimate_rates`] repeats it over independent per-trial streams and
//! reports each failure event with an exact binomial interval.

pub mod enumerate;
pub mod overhead;
pub mod scenario;
pub mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::adversary::{
    rushing_forge, AdversaryStrategy, ForgeryPlan, HonestRoundOne, StrategyKind,
};
use crate::ciss::{
    agreed_identify, agreement_threshold, ciss_deal, detect_cdss, identify_individual, inbox_for,
    reconstruct_agreed, reconstruct_cdss, reconstruct_individual, AgreedIdentification, CissParams,
    CissShare, Inbox, ReconstructionOutcome, Round1Msg, Round2Msg, Verdict,
};
use crate::error::{Error, Result};
use crate::field::{random_vector, BinaryField, RandomSource};
use crate::sss::{AccessStructure, PlayerIndex, Secret, SecretSharing, UnderlyingScheme};

pub use enumerate::{
    exact_forgery_probability, forgery_sweep, privacy_exhaustive, ForgerySweep, DEFAULT_GUARD,
};
pub use overhead::{
    compare_overheads, share_overhead, LogOverhead, OverheadComparison, ShareOverhead,
};
pub use stats::{clopper_pearson, RateEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    Individual,
    Agreed,
    Cdss,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::Individual, Protocol::Agreed, Protocol::Cdss];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Individual => "individual",
            Protocol::Agreed => "agreed",
            Protocol::Cdss => "cdss",
        }
    }

    fn has_round_two(self) -> bool {
        self != Protocol::Individual
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::InvalidConfig(format!("unknown protocol {s:?} (individual, agreed, cdss)"))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    Shamir { k: usize },
    Additive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialConfig<F> {
    pub n: usize,
    pub applicants: BTreeSet<PlayerIndex>,
    pub scheme: SchemeChoice,
    /// Access structure used to decide qualification. Defaults to the
    /// scheme's own; an override must only qualify sets the scheme can
    /// reconstruct from.
    pub access: Option<AccessStructure>,
    /// Secret length; both schemes give shares of the same length `m = d`.
    pub d: usize,
    pub lprime: usize,
    pub protocol: Protocol,
    pub strategy: AdversaryStrategy<F>,
    pub trials: u64,
    pub seed: u64,
}

impl<F: BinaryField> TrialConfig<F> {
    /// Everyone applies, nobody cheats.
    pub fn honest(
        n: usize,
        scheme: SchemeChoice,
        d: usize,
        lprime: usize,
        protocol: Protocol,
    ) -> Self {
        Self {
            n,
            applicants: (1..=n).collect(),
            scheme,
            access: None,
            d,
            lprime,
            protocol,
            strategy: AdversaryStrategy::honest(),
            trials: 1,
            seed: 0,
        }
    }

    pub fn with_strategy(
        mut self,
        kind: StrategyKind<F>,
        corrupted: impl IntoIterator<Item = PlayerIndex>,
    ) -> Self {
        self.strategy = AdversaryStrategy {
            kind,
            corrupted: corrupted.into_iter().collect(),
        };
        self
    }

    pub fn with_trials(mut self, trials: u64, seed: u64) -> Self {
        self.trials = trials;
        self.seed = seed;
        self
    }

    pub fn honest_applicants(&self) -> BTreeSet<PlayerIndex> {
        self.applicants
            .difference(&self.strategy.corrupted)
            .copied()
            .collect()
    }

    pub fn build_scheme(&self) -> Result<UnderlyingScheme<F>> {
        match self.scheme {
            SchemeChoice::Shamir { k } => UnderlyingScheme::shamir(k, self.n, self.d),
            SchemeChoice::Additive => UnderlyingScheme::additive(self.n, self.d),
        }
    }
}

fn subsets_of_size(n: usize, size: usize) -> Vec<BTreeSet<PlayerIndex>> {
    fn go(
        start: usize,
        n: usize,
        left: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<BTreeSet<usize>>,
    ) {
        if left == 0 {
            out.push(cur.iter().copied().collect());
            return;
        }
        for p in start..=n + 1 - left {
            cur.push(p);
            go(p + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, size, &mut Vec::new(), &mut out);
    out
}

/// A validated [`TrialConfig`] with its scheme built.
#[derive(Debug, Clone)]
pub struct Experiment<F> {
    cfg: TrialConfig<F>,
    scheme: UnderlyingScheme<F>,
    access: AccessStructure,
    honest: BTreeSet<PlayerIndex>,
}

impl<F: BinaryField> Experiment<F> {
    pub fn new(cfg: TrialConfig<F>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidConfig(msg));
        if cfg.trials == 0 {
            return invalid("trials must be at least 1".into());
        }
        if cfg.lprime == 0 || cfg.d == 0 {
            return invalid("l' and d must be at least 1".into());
        }
        let scheme = cfg.build_scheme()?;
        if let Some(&p) = cfg.applicants.iter().find(|&&p| p == 0 || p > cfg.n) {
            return Err(Error::PlayerOutOfRange {
                player: p,
                n: cfg.n,
            });
        }
        if !cfg.strategy.corrupted.is_subset(&cfg.applicants) {
            return invalid("corrupted players must be applicants".into());
        }
        let honest = cfg.honest_applicants();
        if honest.is_empty() {
            return invalid("at least one applicant must be honest".into());
        }

        let access = match &cfg.access {
            None => scheme.access().clone(),
            Some(a) => {
                if a.players() != cfg.n {
                    return invalid(format!(
                        "access structure is over {} players, not {}",
                        a.players(),
                        cfg.n
                    ));
                }
                // both schemes are symmetric, so one k-set stands for all
                let minimal = match a {
                    AccessStructure::Threshold { k, .. } => vec![(1..=*k).collect()],
                    AccessStructure::Monotone { minimal, .. } => minimal.clone(),
                };
                for set in &minimal {
                    if !scheme.access().is_qualified(set)? {
                        return invalid(format!(
                            "access structure qualifies {set:?}, which the scheme cannot open"
                        ));
                    }
                }
                a.clone()
            }
        };

        if cfg.protocol == Protocol::Cdss {
            // detection reconstructs from every applicant, so any n'-subset must be qualified
            let size = cfg.applicants.len();
            let unqualified = match &access {
                AccessStructure::Threshold { k, .. } => (*k > size).then(|| (1..=size).collect()),
                AccessStructure::Monotone { .. } if cfg.n > 24 => {
                    return invalid("monotone access structures are limited to 24 players".into());
                }
                AccessStructure::Monotone { .. } => subsets_of_size(cfg.n, size)
                    .into_iter()
                    .find(|set| !access.is_qualified(set).unwrap_or(false)),
            };
            if let Some(set) = unqualified {
                let set: BTreeSet<PlayerIndex> = set;
                return invalid(format!(
                    "detection requires every {size}-subset to be qualified; {set:?} is not"
                ));
            }
        }

        match &cfg.strategy.kind {
            StrategyKind::FixedDelta { delta_x, delta_z } => {
                if delta_x.len() != cfg.d || delta_z.len() != cfg.lprime {
                    return invalid(format!(
                        "delta_x needs {} and delta_z needs {} elements",
                        cfg.d, cfg.lprime
                    ));
                }
                if delta_x.iter().all(|e| e.is_zero()) {
                    return Err(Error::NotAForgery("delta_x must be nonzero"));
                }
            }
            StrategyKind::MajorityFraming { target, .. } => {
                if !honest.contains(target) {
                    return Err(Error::AttackPrecondition(format!(
                        "target {target} is not an honest applicant"
                    )));
                }
                let needed = agreement_threshold(cfg.applicants.len());
                if cfg.strategy.corrupted.len() < needed {
                    return Err(Error::AttackPrecondition(format!(
                        "framing needs at least {needed} cheaters, got {}",
                        cfg.strategy.corrupted.len()
                    )));
                }
            }
            _ => {}
        }

        Ok(Self {
            cfg,
            scheme,
            access,
            honest,
        })
    }

    pub fn config(&self) -> &TrialConfig<F> {
        &self.cfg
    }

    pub fn scheme(&self) -> &UnderlyingScheme<F> {
        &self.scheme
    }

    pub fn access(&self) -> &AccessStructure {
        &self.access
    }

    pub fn params(&self) -> CissParams {
        CissParams {
            n: self.cfg.n,
            m: self.scheme.share_len(),
            lprime: self.cfg.lprime,
        }
    }

    /// Deals a fresh random secret and plays both rounds with the
    /// configured adversary.
    pub fn execute<R: RandomSource + ?Sized>(&self, rng: &mut R) -> Result<Execution<F>> {
        let secret = random_vector(self.cfg.d, rng);
        self.execute_with(secret, rng)
    }

    pub fn execute_with<R: RandomSource + ?Sized>(
        &self,
        secret: Secret<F>,
        rng: &mut R,
    ) -> Result<Execution<F>> {
        let shares = ciss_deal(&secret, &self.scheme, self.cfg.lprime, rng)?;
        let corrupted = &self.cfg.strategy.corrupted;
        let observed = HonestRoundOne::collect(
            shares.iter().filter(|s| self.honest.contains(&s.player)),
            &self.cfg.applicants,
        )?;
        let coalition: Vec<CissShare<F>> = shares
            .iter()
            .filter(|s| corrupted.contains(&s.player))
            .cloned()
            .collect();
        // the adversary commits only after the whole honest round one exists
        let plan = rushing_forge(&self.cfg.strategy, &coalition, &observed, rng)?;
        deliver(&self.cfg, secret, shares, observed, plan)
    }

    pub fn run_trial<R: RandomSource + ?Sized>(&self, rng: &mut R) -> Result<TrialReport<F>> {
        let exec = self.execute(rng)?;
        self.evaluate(exec)
    }

    /// Runs identification and reconstruction for every honest applicant
    /// and scores the result.
    pub fn evaluate(&self, exec: Execution<F>) -> Result<TrialReport<F>> {
        let viewers: Vec<&CissShare<F>> =
            self.honest.iter().map(|&j| &exec.shares[j - 1]).collect();
        let run = run_protocol(
            self.cfg.protocol,
            &self.scheme,
            &self.access,
            &self.params(),
            &self.cfg.applicants,
            &viewers,
            &exec.round1,
            &exec.round2,
        )?;

        let corrupted = &self.cfg.strategy.corrupted;
        let mut forgeries = Vec::new();
        for &i in corrupted {
            for &j in &self.honest {
                let original = exec.shares[i - 1].message_to(j)?;
                let delivered = exec
                    .round1
                    .iter()
                    .find(|m| m.sender == i && m.recipient == j)
                    .ok_or(Error::UnknownPlayer(i))?;
                let active = *delivered != original;
                let single: Inbox<F> = [(i, delivered.clone())].into();
                let accepted = identify_individual(&exec.shares[j - 1].identification, &single)?
                    [&i]
                    == Verdict::Honest;
                let out = &run.outcomes[&j];
                forgeries.push(ForgeryRecord {
                    cheater: i,
                    verifier: j,
                    active,
                    accepted: active && accepted,
                    undetected: active && !out.cheaters.contains(&i) && !out.detected,
                });
            }
        }
        let active_any: BTreeSet<PlayerIndex> = forgeries
            .iter()
            .filter(|f| f.active)
            .map(|f| f.cheater)
            .collect();
        let is_active = |i: PlayerIndex, j: PlayerIndex| {
            if self.cfg.protocol == Protocol::Individual {
                forgeries
                    .iter()
                    .any(|f| f.cheater == i && f.verifier == j && f.active)
            } else {
                active_any.contains(&i)
            }
        };

        let mut flags = TrialFlags {
            reconstructed_correctly: true,
            ..TrialFlags::default()
        };
        for (&j, out) in &run.outcomes {
            match &out.secret {
                Some(s) if *s == exec.secret => {}
                Some(_) => {
                    flags.wrong_secret = true;
                    flags.reconstructed_correctly = false;
                }
                None => flags.reconstructed_correctly = false,
            }
            flags.detected |= out.detected;
            flags.false_positive |= out.cheaters.iter().any(|&i| !is_active(i, j));
        }
        flags.false_negative = forgeries.iter().any(|f| f.undetected);
        if let Some(agreed) = &run.agreed {
            let truth: BTreeSet<PlayerIndex> = self
                .cfg
                .applicants
                .difference(&active_any)
                .copied()
                .collect();
            if let AgreedIdentification::Agreed(set) = agreed {
                flags.framed = !self.honest.is_subset(set);
            }
            flags.agreement_failed = *agreed != AgreedIdentification::Agreed(truth);
        }

        Ok(TrialReport {
            secret: exec.secret,
            outcomes: run.outcomes,
            forgeries,
            agreed: run.agreed,
            flags,
        })
    }
}

/// One protocol execution: dealt shares and every delivered message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution<F> {
    pub secret: Secret<F>,
    pub shares: Vec<CissShare<F>>,
    pub round1: Vec<Round1Msg<F>>,
    /// Empty for individual identification.
    pub round2: Vec<Round2Msg<F>>,
}

fn deliver<F: BinaryField>(
    cfg: &TrialConfig<F>,
    secret: Secret<F>,
    shares: Vec<CissShare<F>>,
    observed: HonestRoundOne<F>,
    plan: ForgeryPlan<F>,
) -> Result<Execution<F>> {
    let mut round1 = observed.messages().to_vec();
    for &i in &cfg.strategy.corrupted {
        for &j in cfg.applicants.iter().filter(|&&j| j != i) {
            let msg = match plan.round1.get(&(i, j)) {
                Some(m) => m.clone(),
                None => shares[i - 1].message_to(j)?,
            };
            round1.push(msg);
        }
    }
    let round2 = if cfg.protocol.has_round_two() {
        cfg.applicants
            .iter()
            .map(|&j| Round2Msg {
                sender: j,
                identification: plan
                    .round2
                    .get(&j)
                    .cloned()
                    .unwrap_or_else(|| shares[j - 1].identification.clone()),
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(Execution {
        secret,
        shares,
        round1,
        round2,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolRun<F> {
    pub outcomes: BTreeMap<PlayerIndex, ReconstructionOutcome<F>>,
    /// Set for agreed identification.
    pub agreed: Option<AgreedIdentification>,
    /// Set for detection.
    pub detected: Option<bool>,
}

/// Identification and reconstruction as seen by each of `viewers`, given
/// the delivered messages.
#[allow(clippy::too_many_arguments)]
pub fn run_protocol<F, S>(
    protocol: Protocol,
    scheme: &S,
    access: &AccessStructure,
    params: &CissParams,
    applicants: &BTreeSet<PlayerIndex>,
    viewers: &[&CissShare<F>],
    round1: &[Round1Msg<F>],
    round2: &[Round2Msg<F>],
) -> Result<ProtocolRun<F>>
where
    F: BinaryField,
    S: SecretSharing<F>,
{
    let round1: Vec<Round1Msg<F>> = round1
        .iter()
        .filter(|m| applicants.contains(&m.sender) && m.sender != m.recipient)
        .cloned()
        .collect();
    let agreed = match protocol {
        Protocol::Agreed => Some(agreed_identify(&round1, round2, applicants, params)?),
        _ => None,
    };
    let detected = match protocol {
        Protocol::Cdss => Some(detect_cdss(&round1, round2, applicants, params)?),
        _ => None,
    };
    let mut outcomes = BTreeMap::new();
    for own in viewers {
        if !applicants.contains(&own.player) {
            return Err(Error::InvalidConfig(format!(
                "viewer {} is not an applicant",
                own.player
            )));
        }
        let inbox = inbox_for(own.player, &round1)?;
        let out = match protocol {
            Protocol::Individual => {
                let verdicts = identify_individual(&own.identification, &inbox)?;
                reconstruct_individual(own, &verdicts, &inbox, access, scheme)?
            }
            Protocol::Agreed => reconstruct_agreed(
                agreed.as_ref().expect("set above"),
                own,
                &inbox,
                access,
                scheme,
            )?,
            Protocol::Cdss => {
                reconstruct_cdss(detected.expect("set above"), own, &inbox, access, scheme)?
            }
        };
        outcomes.insert(own.player, out);
    }
    Ok(ProtocolRun {
        outcomes,
        agreed,
        detected,
    })
}

/// One cheater-to-honest-verifier submission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForgeryRecord {
    pub cheater: PlayerIndex,
    pub verifier: PlayerIndex,
    /// The delivered pair differs from the dealt one.
    pub active: bool,
    /// An active forgery passed the verifier's own tag check.
    pub accepted: bool,
    /// An active forgery the verifier neither listed nor detected.
    pub undetected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    ReconstructedCorrectly,
    WrongSecret,
    FalsePositive,
    FalseNegative,
    Detected,
    Framed,
    AgreementFailed,
}

impl Flag {
    pub const ALL: [Flag; 7] = [
        Flag::ReconstructedCorrectly,
        Flag::WrongSecret,
        Flag::FalsePositive,
        Flag::FalseNegative,
        Flag::Detected,
        Flag::Framed,
        Flag::AgreementFailed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flag::ReconstructedCorrectly => "reconstructed_correctly",
            Flag::WrongSecret => "wrong_secret",
            Flag::FalsePositive => "false_positive",
            Flag::FalseNegative => "false_negative",
            Flag::Detected => "detected",
            Flag::Framed => "framed",
            Flag::AgreementFailed => "agreement_failed",
        }
    }
}

/// Per-trial events, each derivable from the outcomes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialFlags {
    /// Every honest applicant output the dealt secret.
    pub reconstructed_correctly: bool,
    /// Some honest applicant output a secret other than the dealt one.
    pub wrong_secret: bool,
    /// Some honest applicant listed a player that did not cheat it.
    pub false_positive: bool,
    /// Some active forgery went unlisted and undetected.
    pub false_negative: bool,
    /// Some honest applicant output the detection symbol.
    pub detected: bool,
    /// The agreed honest set leaves out an honest applicant.
    pub framed: bool,
    /// The agreed result is not exactly the set of non-forging applicants.
    pub agreement_failed: bool,
}

impl TrialFlags {
    pub fn get(&self, flag: Flag) -> bool {
        match flag {
            Flag::ReconstructedCorrectly => self.reconstructed_correctly,
            Flag::WrongSecret => self.wrong_secret,
            Flag::FalsePositive => self.false_positive,
            Flag::FalseNegative => self.false_negative,
            Flag::Detected => self.detected,
            Flag::Framed => self.framed,
            Flag::AgreementFailed => self.agreement_failed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialReport<F> {
    pub secret: Secret<F>,
    /// `(s', L_j)` per honest applicant `j`.
    pub outcomes: BTreeMap<PlayerIndex, ReconstructionOutcome<F>>,
    pub forgeries: Vec<ForgeryRecord>,
    pub agreed: Option<AgreedIdentification>,
    pub flags: TrialFlags,
}

/// `q^-l'`.
pub fn theoretical_bound(q: u64, lprime: usize) -> f64 {
    (q as f64).powi(-(lprime as i32))
}

/// The rng for trial `index` under master `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Reports for trials `range`, in order.
pub fn trial_reports<F: BinaryField>(
    exp: &Experiment<F>,
    range: std::ops::Range<u64>,
) -> Result<Vec<TrialReport<F>>> {
    range
        .into_par_iter()
        .map(|t| exp.run_trial(&mut trial_rng(exp.cfg.seed, t)))
        .collect()
}

#[derive(Debug, Clone, Default)]
struct Tally {
    flags: [u64; Flag::ALL.len()],
    pair_active: BTreeMap<(PlayerIndex, PlayerIndex), u64>,
    pair_accepted: BTreeMap<(PlayerIndex, PlayerIndex), u64>,
    cheater_undetected: BTreeMap<PlayerIndex, u64>,
}

impl Tally {
    fn add<F>(mut self, report: &TrialReport<F>) -> Self {
        for (slot, flag) in self.flags.iter_mut().zip(Flag::ALL) {
            *slot += report.flags.get(flag) as u64;
        }
        let mut undetected = BTreeSet::new();
        for f in report.forgeries.iter().filter(|f| f.active) {
            *self.pair_active.entry((f.cheater, f.verifier)).or_default() += 1;
            *self
                .pair_accepted
                .entry((f.cheater, f.verifier))
                .or_default() += f.accepted as u64;
            if f.undetected {
                undetected.insert(f.cheater);
            }
        }
        for i in undetected {
            *self.cheater_undetected.entry(i).or_default() += 1;
        }
        self
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.flags.iter_mut().zip(other.flags) {
            *a += b;
        }
        for (k, v) in other.pair_active {
            *self.pair_active.entry(k).or_default() += v;
        }
        for (k, v) in other.pair_accepted {
            *self.pair_accepted.entry(k).or_default() += v;
        }
        for (k, v) in other.cheater_undetected {
            *self.cheater_undetected.entry(k).or_default() += v;
        }
        self
    }
}

#[derive(Debug, Clone)]
pub struct SimStats {
    pub trials: u64,
    pub protocol: Protocol,
    pub flags: BTreeMap<Flag, RateEstimate>,
    /// Acceptance of active forgeries by the verifier's tag check, per
    /// `(cheater, verifier)`, over the trials where the pair was active.
    pub forgery_accepts: BTreeMap<(PlayerIndex, PlayerIndex), RateEstimate>,
    /// Trials in which the cheater had at least one undetected forgery.
    pub per_cheater: BTreeMap<PlayerIndex, RateEstimate>,
    pub q: u64,
    pub lprime: usize,
    /// `l = l' * w`, the security level in bits.
    pub bits: u64,
    /// `q^-l'`.
    pub bound: f64,
    forging: bool,
    framing: bool,
}

impl SimStats {
    pub fn flag(&self, flag: Flag) -> &RateEstimate {
        &self.flags[&flag]
    }

    /// Security properties this run contradicts.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.forging {
            for flag in Flag::ALL
                .into_iter()
                .filter(|&f| f != Flag::ReconstructedCorrectly)
            {
                if self.flag(flag).count > 0 {
                    out.push(format!(
                        "{} occurred {} times without any forgery",
                        flag.name(),
                        self.flag(flag).count
                    ));
                }
            }
            let ok = self.flag(Flag::ReconstructedCorrectly);
            if ok.count != ok.total {
                out.push(format!(
                    "reconstruction failed in {} honest trials",
                    ok.total - ok.count
                ));
            }
        }
        if !self.framing && self.flag(Flag::FalsePositive).count > 0 {
            out.push(format!(
                "{} false positives",
                self.flag(Flag::FalsePositive).count
            ));
        }
        for (&(i, j), r) in &self.forgery_accepts {
            if r.ci_low > self.bound {
                out.push(format!(
                    "forgeries {i}->{j} accepted at {:.3e} (95% CI from {:.3e}), above the bound {:.3e}",
                    r.rate, r.ci_low, self.bound
                ));
            }
        }
        out
    }
}

/// Runs `cfg.trials` independent trials and aggregates their flags.
pub fn estimate_rates<F: BinaryField>(cfg: &TrialConfig<F>) -> Result<SimStats> {
    let exp = Experiment::new(cfg.clone())?;
    let tally = (0..cfg.trials)
        .into_par_iter()
        .try_fold(Tally::default, |tally, t| {
            let report = exp.run_trial(&mut trial_rng(cfg.seed, t))?;
            Ok::<_, Error>(tally.add(&report))
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;

    let flags = Flag::ALL
        .into_iter()
        .zip(tally.flags)
        .map(|(f, c)| (f, RateEstimate::new(c, cfg.trials)))
        .collect();
    let forgery_accepts = tally
        .pair_active
        .iter()
        .map(|(&pair, &active)| (pair, RateEstimate::new(tally.pair_accepted[&pair], active)))
        .collect();
    let per_cheater = cfg
        .strategy
        .corrupted
        .iter()
        .map(|&i| {
            let c = tally.cheater_undetected.get(&i).copied().unwrap_or(0);
            (i, RateEstimate::new(c, cfg.trials))
        })
        .collect();
    Ok(SimStats {
        trials: cfg.trials,
        protocol: cfg.protocol,
        flags,
        forgery_accepts,
        per_cheater,
        q: F::order(),
        lprime: cfg.lprime,
        bits: cfg.lprime as u64 * F::DEGREE as u64,
        bound: theoretical_bound(F::order(), cfg.lprime),
        forging: cfg.strategy.is_forging() && !cfg.strategy.corrupted.is_empty(),
        framing: matches!(cfg.strategy.kind, StrategyKind::MajorityFraming { .. }),
    })
}

#[cfg(test)]
mod tests;
