use super::*;
use crate::{Gf16, Gf2, Gf256};
use num_traits::{One, Zero};

fn honest_cfg<F: BinaryField>(protocol: Protocol) -> TrialConfig<F> {
    TrialConfig::honest(4, SchemeChoice::Shamir { k: 3 }, 2, 3, protocol)
}

#[test]
fn honest_baseline_is_always_clean() {
    for protocol in Protocol::ALL {
        let cfg = honest_cfg::<Gf16>(protocol).with_trials(1000, 11);
        let stats = estimate_rates(&cfg).unwrap();
        assert_eq!(
            stats.flag(Flag::ReconstructedCorrectly).count,
            1000,
            "{protocol}"
        );
        for flag in Flag::ALL
            .into_iter()
            .filter(|&f| f != Flag::ReconstructedCorrectly)
        {
            assert_eq!(stats.flag(flag).count, 0, "{protocol} {}", flag.name());
        }
        assert!(stats.violations().is_empty());
    }
}

#[test]
fn passive_collusion_is_clean() {
    let cfg = honest_cfg::<Gf16>(Protocol::Agreed)
        .with_strategy(StrategyKind::PassiveCollusion, [1, 2, 3])
        .with_trials(200, 1);
    let stats = estimate_rates(&cfg).unwrap();
    assert_eq!(stats.flag(Flag::ReconstructedCorrectly).count, 200);
    assert!(stats.violations().is_empty());
}

#[test]
fn replay_is_deterministic() {
    let cfg = honest_cfg::<Gf256>(Protocol::Individual)
        .with_strategy(
            StrategyKind::RandomForgery {
                per_recipient: true,
            },
            [2],
        )
        .with_trials(64, 99);
    let exp = Experiment::new(cfg.clone()).unwrap();
    let a = trial_reports(&exp, 0..64).unwrap();
    let b = trial_reports(&exp, 0..64).unwrap();
    assert_eq!(a, b);
    let tail = trial_reports(&exp, 32..64).unwrap();
    assert_eq!(&a[32..], &tail[..]);
    let other = Experiment::new(cfg.with_trials(64, 100)).unwrap();
    assert_ne!(a, trial_reports(&other, 0..64).unwrap());
}

#[test]
fn single_trial_flags_follow_outcomes() {
    let cfg = TrialConfig::<Gf2>::honest(3, SchemeChoice::Additive, 1, 1, Protocol::Individual)
        .with_strategy(
            StrategyKind::RandomForgery {
                per_recipient: true,
            },
            [3],
        );
    let exp = Experiment::new(cfg).unwrap();
    let mut seen = [false; 2];
    for t in 0..200 {
        let r = exp.run_trial(&mut trial_rng(5, t)).unwrap();
        assert_eq!(r.forgeries.len(), 2);
        assert!(r.forgeries.iter().all(|f| f.active));
        for f in &r.forgeries {
            let listed = r.outcomes[&f.verifier].cheaters.contains(&3);
            assert_eq!(listed, !f.accepted);
            assert_eq!(f.undetected, f.accepted);
        }
        let any_accepted = r.forgeries.iter().any(|f| f.accepted);
        assert_eq!(r.flags.false_negative, any_accepted);
        // the additive scheme needs every share, so a caught cheater leaves nothing to open
        assert_eq!(r.flags.wrong_secret, any_accepted);
        assert!(!r.flags.false_positive);
        seen[any_accepted as usize] = true;
    }
    assert_eq!(
        seen,
        [true, true],
        "l'=1 over GF(2) should show both outcomes"
    );
}

#[test]
fn framing_scenario_outcomes() {
    let base = TrialConfig::<Gf2>::honest(4, SchemeChoice::Additive, 1, 8, Protocol::Agreed)
        .with_strategy(
            StrategyKind::MajorityFraming {
                target: 1,
                forge_target: false,
            },
            [2, 3, 4],
        );
    let agreed = estimate_rates(&base.clone().with_trials(200, 3)).unwrap();
    assert_eq!(agreed.flag(Flag::Framed).count, 200);
    assert_eq!(agreed.flag(Flag::FalsePositive).count, 200);
    assert!(agreed.violations().is_empty());

    let mut cdss = base.clone().with_trials(200, 3);
    cdss.protocol = Protocol::Cdss;
    assert_eq!(
        estimate_rates(&cdss).unwrap().flag(Flag::Detected).count,
        200
    );

    let mut individual = base.with_trials(200, 3);
    individual.protocol = Protocol::Individual;
    let s = estimate_rates(&individual).unwrap();
    assert_eq!(s.flag(Flag::ReconstructedCorrectly).count, 200);
    assert_eq!(s.flag(Flag::FalsePositive).count, 0);
}

#[test]
fn config_validation() {
    let ok = honest_cfg::<Gf16>(Protocol::Individual);
    assert!(Experiment::new(ok.clone()).is_ok());
    assert!(Experiment::new(ok.clone().with_trials(0, 0)).is_err());

    let mut c = ok.clone();
    c.applicants = [1, 2, 5].into();
    assert!(Experiment::new(c).is_err());

    let mut c = ok.clone();
    c.applicants = [1, 2].into();
    assert!(Experiment::new(c.clone().with_strategy(StrategyKind::HonestBaseline, [3])).is_err());
    assert!(Experiment::new(
        c.clone()
            .with_strategy(StrategyKind::HonestBaseline, [1, 2])
    )
    .is_err());

    // detection needs every n'-subset qualified: 2 applicants under 3-of-4 are not
    c.protocol = Protocol::Cdss;
    assert!(Experiment::new(c).is_err());
    let mut c = ok.clone();
    c.protocol = Protocol::Cdss;
    c.applicants = [1, 2, 4].into();
    assert!(Experiment::new(c).is_ok());

    let zero = StrategyKind::FixedDelta {
        delta_x: vec![Gf16::zero(); 2],
        delta_z: vec![Gf16::one(); 3],
    };
    assert!(matches!(
        Experiment::new(ok.clone().with_strategy(zero, [4])),
        Err(Error::NotAForgery(_))
    ));
    let short = StrategyKind::FixedDelta {
        delta_x: vec![Gf16::one()],
        delta_z: vec![Gf16::one(); 3],
    };
    assert!(Experiment::new(ok.clone().with_strategy(short, [4])).is_err());

    let framing = |target| StrategyKind::MajorityFraming {
        target,
        forge_target: false,
    };
    assert!(Experiment::new(ok.clone().with_strategy(framing(1), [4])).is_err());
    assert!(Experiment::new(ok.clone().with_strategy(framing(4), [3, 4])).is_err());
    assert!(Experiment::new(ok.clone().with_strategy(framing(1), [3, 4])).is_ok());

    // the access override may not qualify sets the scheme cannot open
    let mut c = ok.clone();
    c.access = Some(AccessStructure::threshold(2, 4).unwrap());
    assert!(Experiment::new(c).is_err());
    let mut c = ok;
    c.access =
        Some(AccessStructure::monotone(4, vec![[1, 2, 3].into(), [2, 3, 4].into()]).unwrap());
    assert!(Experiment::new(c).is_ok());
}

#[test]
fn monotone_override_gates_reconstruction() {
    // 2-of-4 Shamir, but only {1,2} and {3,4} are qualified
    let mut cfg =
        TrialConfig::<Gf16>::honest(4, SchemeChoice::Shamir { k: 2 }, 1, 2, Protocol::Individual);
    cfg.access = Some(AccessStructure::monotone(4, vec![[1, 2].into(), [3, 4].into()]).unwrap());
    cfg.applicants = [1, 3].into();
    let s = estimate_rates(&cfg.clone().with_trials(50, 0)).unwrap();
    assert_eq!(s.flag(Flag::ReconstructedCorrectly).count, 0);
    cfg.applicants = [1, 2].into();
    let s = estimate_rates(&cfg.with_trials(50, 0)).unwrap();
    assert_eq!(s.flag(Flag::ReconstructedCorrectly).count, 50);
}

#[test]
fn bound_arithmetic() {
    assert_eq!(theoretical_bound(2, 8), 1.0 / 256.0);
    assert_eq!(theoretical_bound(2, 16), theoretical_bound(2, 8).powi(2));
    assert_eq!(theoretical_bound(256, 2), theoretical_bound(2, 16));
    let cfg = TrialConfig::<Gf256>::honest(2, SchemeChoice::Additive, 1, 2, Protocol::Individual);
    let s = estimate_rates(&cfg).unwrap();
    assert_eq!((s.q, s.bits), (256, 16));
}

#[test]
fn single_forger_rate_converges_to_exact_probability() {
    // q=2, l'=8, one forger against one verifier
    let cfg = TrialConfig::<Gf2>::honest(2, SchemeChoice::Additive, 1, 8, Protocol::Individual)
        .with_strategy(
            StrategyKind::RandomForgery {
                per_recipient: true,
            },
            [2],
        )
        .with_trials(1_000_000, 2024);
    let exact =
        exact_forgery_probability::<Gf2>(8, 1, &[Gf2::one()], &[Gf2::zero(); 8], DEFAULT_GUARD)
            .unwrap();
    let p = *exact.numer() as f64 / *exact.denom() as f64;
    assert_eq!(p, 1.0 / 256.0);

    let stats = estimate_rates(&cfg).unwrap();
    let fnr = stats.flag(Flag::FalseNegative);
    assert!(fnr.ci_high < 2.0 * p, "CI upper {}", fnr.ci_high);
    let sigma = (p * (1.0 - p) / fnr.total as f64).sqrt();
    assert!(
        (fnr.rate - p).abs() < 4.0 * sigma,
        "rate {} vs {p}",
        fnr.rate
    );
    assert!(stats.violations().is_empty(), "{:?}", stats.violations());
}

#[test]
fn violations_report_broken_properties() {
    let cfg = TrialConfig::<Gf2>::honest(3, SchemeChoice::Additive, 1, 4, Protocol::Individual)
        .with_strategy(
            StrategyKind::RandomForgery {
                per_recipient: true,
            },
            [3],
        )
        .with_trials(100, 0);
    let mut stats = estimate_rates(&cfg).unwrap();
    assert!(stats.violations().is_empty());

    // pretend every forgery 3->1 was accepted, far above 2^-4
    stats
        .forgery_accepts
        .insert((3, 1), RateEstimate::new(100, 100));
    let v = stats.violations();
    assert_eq!(v.len(), 1);
    assert!(v[0].contains("3->1"), "{v:?}");

    stats
        .flags
        .insert(Flag::FalsePositive, RateEstimate::new(1, 100));
    assert_eq!(stats.violations().len(), 2);

    let mut honest =
        estimate_rates(&honest_cfg::<Gf16>(Protocol::Agreed).with_trials(20, 0)).unwrap();
    honest
        .flags
        .insert(Flag::Detected, RateEstimate::new(1, 20));
    assert!(honest.violations().iter().any(|s| s.contains("detected")));
}
