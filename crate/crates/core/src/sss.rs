//! Underlying secret sharing: access structures, the share/reconstruct
//! interface, and two concrete schemes (Shamir threshold and additive
//! n-of-n).
//!
//! Players are indexed from 1. Secrets are vectors of length `d` shared
//! coordinate-wise with independent randomness, so each share also has
//! length `m = d`.

use std::collections::BTreeSet;
use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::field::{random_vector, BinaryField, RandomSource};

/// 1-based player index.
pub type PlayerIndex = usize;

pub type Secret<F> = Vec<F>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AccessStructure {
    Threshold {
        k: usize,
        n: usize,
    },
    /// Qualified sets are exactly the supersets of some minimal set.
    Monotone {
        n: usize,
        minimal: Vec<BTreeSet<PlayerIndex>>,
    },
}

impl AccessStructure {
    pub fn threshold(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidThreshold { k, n });
        }
        Ok(Self::Threshold { k, n })
    }

    pub fn monotone(n: usize, minimal: Vec<BTreeSet<PlayerIndex>>) -> Result<Self> {
        for set in &minimal {
            if let Some(&p) = set.iter().find(|&&p| p == 0 || p > n) {
                return Err(Error::PlayerOutOfRange { player: p, n });
            }
        }
        for (i, a) in minimal.iter().enumerate() {
            for (j, b) in minimal.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    return Err(Error::InvalidAccessStructure(format!(
                        "minimal set {a:?} is contained in {b:?}"
                    )));
                }
            }
        }
        Ok(Self::Monotone { n, minimal })
    }

    pub fn players(&self) -> usize {
        match self {
            Self::Threshold { n, .. } | Self::Monotone { n, .. } => *n,
        }
    }

    pub fn is_qualified(&self, set: &BTreeSet<PlayerIndex>) -> Result<bool> {
        let n = self.players();
        if let Some(&p) = set.iter().find(|&&p| p == 0 || p > n) {
            return Err(Error::PlayerOutOfRange { player: p, n });
        }
        Ok(match self {
            Self::Threshold { k, .. } => set.len() >= *k,
            Self::Monotone { minimal, .. } => minimal.iter().any(|m| m.is_subset(set)),
        })
    }
}

/// A share/reconstruct pair realizing an access structure over `F^m`.
pub trait SecretSharing<F: BinaryField> {
    fn access(&self) -> &AccessStructure;

    fn players(&self) -> usize {
        self.access().players()
    }

    /// Length `d` of the secret vector.
    fn secret_len(&self) -> usize;

    /// Length `m` of each share vector.
    fn share_len(&self) -> usize;

    /// Number of field elements drawn from the random source per call to
    /// [`share`](Self::share).
    fn randomness_len(&self) -> usize;

    fn share<R: RandomSource + ?Sized>(&self, secret: &[F], rng: &mut R) -> Result<Vec<Vec<F>>>;

    /// `Ok(None)` means the subset is not enough to reconstruct.
    fn reconstruct(&self, shares: &[(PlayerIndex, &[F])]) -> Result<Option<Secret<F>>>;
}

fn check_points<F>(points: &[(PlayerIndex, &[F])], n: usize, m: usize) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &(p, v) in points {
        if p == 0 || p > n {
            return Err(Error::PlayerOutOfRange { player: p, n });
        }
        if !seen.insert(p) {
            return Err(Error::DuplicatePlayer(p));
        }
        if v.len() != m {
            return Err(Error::DimensionMismatch {
                what: "share",
                expected: m,
                got: v.len(),
            });
        }
    }
    Ok(())
}

fn check_secret<F>(secret: &[F], d: usize) -> Result<()> {
    if secret.len() != d {
        return Err(Error::DimensionMismatch {
            what: "secret",
            expected: d,
            got: secret.len(),
        });
    }
    Ok(())
}

/// Shamir's (k, n) scheme. Player `i` is evaluated at the field element
/// whose integer value is `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShamirScheme<F> {
    access: AccessStructure,
    k: usize,
    d: usize,
    _field: PhantomData<F>,
}

impl<F: BinaryField> ShamirScheme<F> {
    pub fn new(k: usize, n: usize, d: usize) -> Result<Self> {
        if F::order() <= n as u64 {
            return Err(Error::FieldTooSmall { q: F::order(), n });
        }
        Ok(Self {
            access: AccessStructure::threshold(k, n)?,
            k,
            d,
            _field: PhantomData,
        })
    }

    pub fn threshold(&self) -> usize {
        self.k
    }

    pub fn evaluation_point(player: PlayerIndex) -> F {
        F::from_value_truncated(player as u32)
    }
}

fn horner<F: BinaryField>(coeffs: &[F], x: F) -> F {
    coeffs.iter().rev().fold(F::zero(), |acc, &c| acc * x + c)
}

/// Lagrange interpolation at zero through `(x_i, y_i)`. The `x_i` must be
/// distinct.
pub fn interpolate_at_zero<F: BinaryField>(points: &[(F, F)]) -> F {
    points
        .iter()
        .enumerate()
        .map(|(i, &(xi, yi))| {
            let (num, den) = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold((F::one(), F::one()), |(num, den), (_, &(xj, _))| {
                    (num * xj, den * (xj - xi))
                });
            yi * num * den.inverse().expect("distinct evaluation points")
        })
        .sum()
}

impl<F: BinaryField> SecretSharing<F> for ShamirScheme<F> {
    fn access(&self) -> &AccessStructure {
        &self.access
    }

    fn secret_len(&self) -> usize {
        self.d
    }

    fn share_len(&self) -> usize {
        self.d
    }

    fn randomness_len(&self) -> usize {
        self.d * (self.k - 1)
    }

    fn share<R: RandomSource + ?Sized>(&self, secret: &[F], rng: &mut R) -> Result<Vec<Vec<F>>> {
        check_secret(secret, self.d)?;
        let n = self.players();
        let polys: Vec<Vec<F>> = secret
            .iter()
            .map(|&s| {
                let mut coeffs = Vec::with_capacity(self.k);
                coeffs.push(s);
                coeffs.extend(random_vector::<F, R>(self.k - 1, rng));
                coeffs
            })
            .collect();
        Ok((1..=n)
            .map(|i| {
                let x = Self::evaluation_point(i);
                polys.iter().map(|p| horner(p, x)).collect()
            })
            .collect())
    }

    fn reconstruct(&self, shares: &[(PlayerIndex, &[F])]) -> Result<Option<Secret<F>>> {
        check_points(shares, self.players(), self.d)?;
        if shares.len() < self.k {
            return Ok(None);
        }
        let mut sorted: Vec<_> = shares.to_vec();
        sorted.sort_by_key(|&(p, _)| p);
        let secret = (0..self.d)
            .map(|c| {
                let pts: Vec<(F, F)> = sorted
                    .iter()
                    .map(|&(p, v)| (Self::evaluation_point(p), v[c]))
                    .collect();
                interpolate_at_zero(&pts)
            })
            .collect();
        Ok(Some(secret))
    }
}

/// n-of-n additive sharing: shares sum to the secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveScheme<F> {
    access: AccessStructure,
    d: usize,
    _field: PhantomData<F>,
}

impl<F: BinaryField> AdditiveScheme<F> {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        Ok(Self {
            access: AccessStructure::threshold(n, n)?,
            d,
            _field: PhantomData,
        })
    }
}

impl<F: BinaryField> SecretSharing<F> for AdditiveScheme<F> {
    fn access(&self) -> &AccessStructure {
        &self.access
    }

    fn secret_len(&self) -> usize {
        self.d
    }

    fn share_len(&self) -> usize {
        self.d
    }

    fn randomness_len(&self) -> usize {
        self.d * (self.players() - 1)
    }

    fn share<R: RandomSource + ?Sized>(&self, secret: &[F], rng: &mut R) -> Result<Vec<Vec<F>>> {
        check_secret(secret, self.d)?;
        let n = self.players();
        let mut shares: Vec<Vec<F>> = (1..n).map(|_| random_vector(self.d, rng)).collect();
        let last = (0..self.d)
            .map(|c| secret[c] + shares.iter().map(|v| v[c]).sum::<F>())
            .collect();
        shares.push(last);
        Ok(shares)
    }

    fn reconstruct(&self, shares: &[(PlayerIndex, &[F])]) -> Result<Option<Secret<F>>> {
        check_points(shares, self.players(), self.d)?;
        if shares.len() < self.players() {
            return Ok(None);
        }
        Ok(Some(
            (0..self.d)
                .map(|c| shares.iter().map(|(_, v)| v[c]).sum())
                .collect(),
        ))
    }
}

/// Runtime choice between the concrete schemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnderlyingScheme<F> {
    Shamir(ShamirScheme<F>),
    Additive(AdditiveScheme<F>),
}

impl<F: BinaryField> UnderlyingScheme<F> {
    pub fn shamir(k: usize, n: usize, d: usize) -> Result<Self> {
        ShamirScheme::new(k, n, d).map(Self::Shamir)
    }

    pub fn additive(n: usize, d: usize) -> Result<Self> {
        AdditiveScheme::new(n, d).map(Self::Additive)
    }
}

impl<F: BinaryField> SecretSharing<F> for UnderlyingScheme<F> {
    fn access(&self) -> &AccessStructure {
        match self {
            Self::Shamir(s) => s.access(),
            Self::Additive(s) => s.access(),
        }
    }

    fn secret_len(&self) -> usize {
        match self {
            Self::Shamir(s) => s.secret_len(),
            Self::Additive(s) => s.secret_len(),
        }
    }

    fn share_len(&self) -> usize {
        match self {
            Self::Shamir(s) => s.share_len(),
            Self::Additive(s) => s.share_len(),
        }
    }

    fn randomness_len(&self) -> usize {
        match self {
            Self::Shamir(s) => s.randomness_len(),
            Self::Additive(s) => s.randomness_len(),
        }
    }

    fn share<R: RandomSource + ?Sized>(&self, secret: &[F], rng: &mut R) -> Result<Vec<Vec<F>>> {
        match self {
            Self::Shamir(s) => s.share(secret, rng),
            Self::Additive(s) => s.share(secret, rng),
        }
    }

    fn reconstruct(&self, shares: &[(PlayerIndex, &[F])]) -> Result<Option<Secret<F>>> {
        match self {
            Self::Shamir(s) => s.reconstruct(shares),
            Self::Additive(s) => s.reconstruct(shares),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Gf2, Gf256, Gf4, Gf8};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::collections::HashMap;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    /// Replays a fixed list of field values as "random" draws.
    struct Scripted(Vec<u32>);

    impl RandomSource for Scripted {
        fn next_element<F: BinaryField>(&mut self) -> F {
            F::from_value(self.0.remove(0)).unwrap()
        }
    }

    #[test]
    fn qualification() {
        let t = AccessStructure::threshold(2, 3).unwrap();
        assert!(t.is_qualified(&set(&[1, 3])).unwrap());
        assert!(!t.is_qualified(&set(&[2])).unwrap());
        assert!(t.is_qualified(&set(&[4])).is_err());
        let m = AccessStructure::monotone(3, vec![set(&[1, 2]), set(&[3])]).unwrap();
        assert!(m.is_qualified(&set(&[2, 3])).unwrap());
        assert!(!m.is_qualified(&set(&[1])).unwrap());
        assert!(m.is_qualified(&set(&[1, 2])).unwrap());
    }

    #[test]
    fn access_structure_validation() {
        assert!(AccessStructure::threshold(0, 3).is_err());
        assert!(AccessStructure::threshold(4, 3).is_err());
        assert!(AccessStructure::monotone(3, vec![set(&[1]), set(&[1, 2])]).is_err());
        assert!(AccessStructure::monotone(3, vec![set(&[4])]).is_err());
    }

    proptest! {
        #[test]
        fn qualification_is_monotone(
            members in proptest::collection::btree_set(1usize..=6, 0..6),
            extra in 1usize..=6,
            k in 1usize..=6,
        ) {
            let t = AccessStructure::threshold(k, 6).unwrap();
            let m = AccessStructure::monotone(6, vec![set(&[1, 2]), set(&[3, 4, 5]), set(&[6])]).unwrap();
            let mut bigger = members.clone();
            bigger.insert(extra);
            for a in [&t, &m] {
                if a.is_qualified(&members).unwrap() {
                    prop_assert!(a.is_qualified(&bigger).unwrap());
                }
            }
        }
    }

    #[test]
    fn shamir_k1_shares_equal_secret() {
        let scheme = ShamirScheme::<Gf256>::new(1, 5, 3).unwrap();
        let secret: Vec<Gf256> = random_vector(3, &mut ChaCha20Rng::seed_from_u64(0));
        let shares = scheme
            .share(&secret, &mut ChaCha20Rng::seed_from_u64(1))
            .unwrap();
        assert!(shares.iter().all(|s| *s == secret));
    }

    #[test]
    fn shamir_two_of_two_by_hand() {
        // GF(2^3): s = 0b110, r = 0b011, alpha_1 = 1, alpha_2 = x = 0b010.
        let scheme = ShamirScheme::<Gf8>::new(2, 2, 1).unwrap();
        let s = Gf8::from_value(0b110).unwrap();
        let shares = scheme.share(&[s], &mut Scripted(vec![0b011])).unwrap();
        // share_1 = s + r = 0b101; share_2 = s + r*x = 0b110 + 0b110 = 0
        assert_eq!(shares[0], vec![Gf8::from_value(0b101).unwrap()]);
        assert_eq!(shares[1], vec![Gf8::from_value(0b000).unwrap()]);
        // Lagrange at 0: y1 * x2/(x2-x1) + y2 * x1/(x1-x2), inv(0b011) = 0b110
        //   = 0b101 * (0b010 * 0b110) + 0 = 0b101 * 0b111 = 0b110.
        let rec = scheme
            .reconstruct(&[(1, &shares[0]), (2, &shares[1])])
            .unwrap();
        assert_eq!(rec, Some(vec![s]));
    }

    #[test]
    fn shamir_round_trip_any_k_subset() {
        let scheme = ShamirScheme::<Gf256>::new(3, 6, 2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(77);
        for _ in 0..100 {
            let secret: Vec<Gf256> = random_vector(2, &mut rng);
            let shares = scheme.share(&secret, &mut rng).unwrap();
            let mut players: Vec<usize> = (1..=6).collect();
            rand::seq::SliceRandom::shuffle(players.as_mut_slice(), &mut rng);
            let pts: Vec<(usize, &[Gf256])> = players[..3]
                .iter()
                .map(|&p| (p, shares[p - 1].as_slice()))
                .collect();
            assert_eq!(scheme.reconstruct(&pts).unwrap(), Some(secret.clone()));
            let all: Vec<(usize, &[Gf256])> =
                (1..=6).map(|p| (p, shares[p - 1].as_slice())).collect();
            assert_eq!(scheme.reconstruct(&all).unwrap(), Some(secret));
        }
    }

    #[test]
    fn shamir_reconstruct_edge_cases() {
        let scheme = ShamirScheme::<Gf8>::new(2, 3, 1).unwrap();
        let shares = scheme
            .share(
                &[Gf8::from_value(5).unwrap()],
                &mut ChaCha20Rng::seed_from_u64(4),
            )
            .unwrap();
        assert_eq!(scheme.reconstruct(&[(1, &shares[0])]).unwrap(), None);
        assert_eq!(
            scheme.reconstruct(&[(1, &shares[0]), (1, &shares[0])]),
            Err(Error::DuplicatePlayer(1))
        );
        assert!(scheme
            .reconstruct(&[(4, &shares[0]), (1, &shares[0])])
            .is_err());
        assert!(ShamirScheme::<Gf8>::new(2, 8, 1).is_err());
        assert!(ShamirScheme::<Gf8>::new(4, 3, 1).is_err());
        assert!(ShamirScheme::<Gf8>::new(2, 7, 1).is_ok());
    }

    #[test]
    fn shamir_altered_share_gives_wrong_secret() {
        // From the hand example: shares (0b101, 0b000) of 0b110. Flip share 2 to 0b001:
        // 0b101 * 0b111 + 0b001 * (1 * inv(0b011)) = 0b110 + 0b110 = 0b000.
        let scheme = ShamirScheme::<Gf8>::new(2, 2, 1).unwrap();
        let a = [Gf8::from_value(0b101).unwrap()];
        let b = [Gf8::from_value(0b001).unwrap()];
        let rec = scheme.reconstruct(&[(1, &a), (2, &b)]).unwrap().unwrap();
        assert_eq!(rec, vec![Gf8::from_value(0b000).unwrap()]);
        assert_ne!(rec, vec![Gf8::from_value(0b110).unwrap()]);
    }

    #[test]
    fn additive_sharing() {
        let one = AdditiveScheme::<Gf2>::new(1, 4).unwrap();
        let secret: Vec<Gf2> = random_vector(4, &mut ChaCha20Rng::seed_from_u64(0));
        assert_eq!(
            one.share(&secret, &mut ChaCha20Rng::seed_from_u64(1))
                .unwrap(),
            vec![secret.clone()]
        );

        let scheme = AdditiveScheme::<Gf2>::new(5, 4).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..100 {
            let secret: Vec<Gf2> = random_vector(4, &mut rng);
            let shares = scheme.share(&secret, &mut rng).unwrap();
            let sum: Vec<Gf2> = (0..4).map(|c| shares.iter().map(|s| s[c]).sum()).collect();
            assert_eq!(sum, secret);
            let pts: Vec<(usize, &[Gf2])> =
                (1..=5).map(|p| (p, shares[p - 1].as_slice())).collect();
            assert_eq!(scheme.reconstruct(&pts).unwrap(), Some(secret));
            assert_eq!(scheme.reconstruct(&pts[1..]).unwrap(), None);
        }
    }

    /// Distribution of the unqualified view `players` for each secret,
    /// by enumerating every randomness tape.
    fn view_distributions<F: BinaryField, S: SecretSharing<F>>(
        scheme: &S,
        players: &[usize],
    ) -> Vec<HashMap<Vec<Vec<F>>, usize>> {
        let q = F::order() as u32;
        let r = scheme.randomness_len() as u32;
        F::elements()
            .map(|s| {
                let mut dist = HashMap::new();
                for tape in 0..q.pow(r) {
                    let digits = (0..r).map(|i| tape / q.pow(i) % q).collect();
                    let shares = scheme.share(&[s], &mut Scripted(digits)).unwrap();
                    let view: Vec<Vec<F>> =
                        players.iter().map(|&p| shares[p - 1].clone()).collect();
                    *dist.entry(view).or_insert(0) += 1;
                }
                dist
            })
            .collect()
    }

    #[test]
    fn perfect_privacy_additive_gf2() {
        let scheme = AdditiveScheme::<Gf2>::new(2, 1).unwrap();
        for p in [1, 2] {
            let dists = view_distributions(&scheme, &[p]);
            assert!(dists.windows(2).all(|w| w[0] == w[1]));
            assert_eq!(dists[0].len(), 2);
        }
    }

    #[test]
    fn perfect_privacy_shamir_gf4() {
        let scheme = ShamirScheme::<Gf4>::new(2, 2, 1).unwrap();
        for p in [1, 2] {
            let dists = view_distributions(&scheme, &[p]);
            assert!(dists.windows(2).all(|w| w[0] == w[1]));
            assert_eq!(dists[0].len(), 4);
        }
        // the qualified view is deterministic in the secret
        let both = view_distributions(&scheme, &[1, 2]);
        assert_ne!(both[0], both[1]);
    }
}
