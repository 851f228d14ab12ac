//! Exact probabilities by exhaustive enumeration at tiny parameters.

use std::collections::{BTreeSet, HashMap};

use num_rational::Ratio;

use crate::ciss::{ciss_deal, CissShare};
use crate::error::{Error, Result};
use crate::field::{BinaryField, RandomSource};
use crate::hashmac::ToeplitzSeed;
use crate::sss::{PlayerIndex, SecretSharing};

/// Default bound on the size of any enumerated space.
pub const DEFAULT_GUARD: u64 = 1 << 24;

fn space_size(q: u64, exponent: usize, guard: u64) -> Result<u64> {
    let size = (q as u128)
        .checked_pow(exponent as u32)
        .unwrap_or(u128::MAX);
    if size > guard as u128 {
        return Err(Error::EnumerationTooLarge { size, guard });
    }
    Ok(size as u64)
}

/// Every vector in `F^len`, in counting order with the first coordinate
/// varying fastest.
pub fn all_vectors<F: BinaryField>(len: usize) -> impl Iterator<Item = Vec<F>> {
    let q = F::order();
    let total = q.pow(len as u32);
    (0..total).map(move |mut idx| {
        (0..len)
            .map(|_| {
                let digit = idx % q;
                idx /= q;
                F::from_value(digit as u32).expect("digit below field order")
            })
            .collect()
    })
}

fn all_seeds<F: BinaryField>(lprime: usize, m: usize) -> impl Iterator<Item = ToeplitzSeed<F>> {
    all_vectors(lprime + m - 1).map(move |s| ToeplitzSeed::new(s, lprime, m).expect("seed length"))
}

fn check_dims<F>(lprime: usize, m: usize, dx: &[F], dz: &[F]) -> Result<()> {
    if lprime == 0 || m == 0 {
        return Err(Error::InvalidConfig("l' and m must be at least 1".into()));
    }
    if dx.len() != m {
        return Err(Error::DimensionMismatch {
            what: "delta_x",
            expected: m,
            got: dx.len(),
        });
    }
    if dz.len() != lprime {
        return Err(Error::DimensionMismatch {
            what: "delta_z",
            expected: lprime,
            got: dz.len(),
        });
    }
    Ok(())
}

/// Number of seeds with `T_s dx = dz`. Zero `dx` is allowed here and
/// gives zero unless `dz` is zero too.
pub(crate) fn count_accepting_seeds<F: BinaryField>(
    lprime: usize,
    m: usize,
    dx: &[F],
    dz: &[F],
) -> u64 {
    all_seeds::<F>(lprime, m)
        .filter(|seed| seed.apply(dx).expect("checked dims") == dz)
        .count() as u64
}

/// Fraction of the full seed space on which a forgery with offsets
/// `(dx, dz)` passes verification: `|{s : T_s dx = dz}| / q^(l'+m-1)`.
pub fn exact_forgery_probability<F: BinaryField>(
    lprime: usize,
    m: usize,
    dx: &[F],
    dz: &[F],
    guard: u64,
) -> Result<Ratio<u64>> {
    check_dims(lprime, m, dx, dz)?;
    if dx.iter().all(|e| e.is_zero()) {
        return Err(Error::NotAForgery("delta_x must be nonzero"));
    }
    let seeds = space_size(F::order(), lprime + m - 1, guard)?;
    Ok(Ratio::new(count_accepting_seeds(lprime, m, dx, dz), seeds))
}

/// Range of [`exact_forgery_probability`] over every nonzero `dx` and
/// every `dz`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForgerySweep {
    pub cases: u64,
    pub min: Ratio<u64>,
    pub max: Ratio<u64>,
}

pub fn forgery_sweep<F: BinaryField>(lprime: usize, m: usize, guard: u64) -> Result<ForgerySweep> {
    if lprime == 0 || m == 0 {
        return Err(Error::InvalidConfig("l' and m must be at least 1".into()));
    }
    let q = F::order();
    let seeds = space_size(q, lprime + m - 1, guard)?;
    let work = space_size(q, 2 * m + lprime - 1, guard)?;
    debug_assert!(work >= seeds);
    let mut sweep: Option<ForgerySweep> = None;
    for dx in all_vectors::<F>(m).filter(|v| v.iter().any(|e| !e.is_zero())) {
        // one pass over the seeds gives the count for every dz at once
        let mut counts: HashMap<Vec<F>, u64> = HashMap::new();
        for seed in all_seeds::<F>(lprime, m) {
            *counts.entry(seed.apply(&dx)?).or_default() += 1;
        }
        for dz in all_vectors::<F>(lprime) {
            let p = Ratio::new(counts.get(&dz).copied().unwrap_or(0), seeds);
            let s = sweep.get_or_insert(ForgerySweep {
                cases: 0,
                min: p,
                max: p,
            });
            s.cases += 1;
            s.min = s.min.min(p);
            s.max = s.max.max(p);
        }
    }
    sweep.ok_or_else(|| Error::InvalidConfig("empty sweep".into()))
}

/// Replays one fixed tape of field values.
pub struct TapeSource<'a> {
    tape: &'a [u32],
    pos: usize,
}

impl<'a> TapeSource<'a> {
    pub fn new(tape: &'a [u32]) -> Self {
        Self { tape, pos: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl RandomSource for TapeSource<'_> {
    fn next_element<F: BinaryField>(&mut self) -> F {
        let v = *self.tape.get(self.pos).expect("tape exhausted");
        self.pos += 1;
        F::from_value(v).expect("tape value below field order")
    }
}

/// Field elements the dealer draws for one sharing.
pub fn dealer_randomness_len<F: BinaryField, S: SecretSharing<F>>(
    scheme: &S,
    lprime: usize,
) -> usize {
    let n = scheme.players();
    let m = scheme.share_len();
    scheme.randomness_len() + n * (n - 1) * lprime + n * (lprime + m - 1)
}

/// Maximum total-variation distance, over pairs of secrets, between the
/// distributions of the coalition's shares. Every secret and every dealer
/// tape is enumerated.
pub fn privacy_exhaustive<F, S>(
    scheme: &S,
    lprime: usize,
    coalition: &BTreeSet<PlayerIndex>,
    guard: u64,
) -> Result<Ratio<u64>>
where
    F: BinaryField,
    S: SecretSharing<F>,
{
    let n = scheme.players();
    if let Some(&p) = coalition.iter().find(|&&p| p == 0 || p > n) {
        return Err(Error::PlayerOutOfRange { player: p, n });
    }
    let q = F::order();
    let d = scheme.secret_len();
    let draws = dealer_randomness_len(scheme, lprime);
    space_size(q, draws + d, guard)?;
    let tapes = space_size(q, draws, guard)?;

    let mut distributions: Vec<HashMap<Vec<CissShare<F>>, u64>> = Vec::new();
    for secret in all_vectors::<F>(d) {
        let mut dist = HashMap::new();
        for tape in all_vectors::<F>(draws) {
            let raw: Vec<u32> = tape.iter().map(|e| e.value()).collect();
            let mut src = TapeSource::new(&raw);
            let shares = ciss_deal(&secret, scheme, lprime, &mut src)?;
            assert_eq!(
                src.consumed(),
                draws,
                "dealer drew an unexpected number of elements"
            );
            let view: Vec<CissShare<F>> = shares
                .into_iter()
                .filter(|s| coalition.contains(&s.player))
                .collect();
            *dist.entry(view).or_insert(0u64) += 1;
        }
        distributions.push(dist);
    }

    let mut worst = Ratio::new(0, 1);
    for (a, da) in distributions.iter().enumerate() {
        for db in &distributions[a + 1..] {
            let diff: u64 = da
                .iter()
                .map(|(v, &c)| c.abs_diff(db.get(v).copied().unwrap_or(0)))
                .sum::<u64>()
                + db.iter()
                    .filter(|(v, _)| !da.contains_key(*v))
                    .map(|(_, &c)| c)
                    .sum::<u64>();
            worst = worst.max(Ratio::new(diff, 2 * tapes));
        }
    }
    Ok(worst)
}
