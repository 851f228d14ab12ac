//! `ciss`: deal, reconstruct, and attack cheater-identifiable secret
//! sharing from the command line.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use ciss::ciss::wire::{read_header, Transcript};
use ciss::ciss::{round1_messages, CissShare, Round2Msg};
use ciss::field::codec::{decode_raw, put_raw};
use ciss::field::random_vector;
use ciss::harness::scenario::{AccessFile, Scenario, SchemeName, StrategyName};
use ciss::harness::{
    compare_overheads, estimate_rates, exact_forgery_probability, forgery_sweep,
    privacy_exhaustive, run_protocol, share_overhead, Experiment, Flag, Protocol, SimStats,
    DEFAULT_GUARD,
};
use ciss::sss::{AccessStructure, SecretSharing, UnderlyingScheme};
use ciss::{with_field, BinaryField};

#[derive(Parser)]
#[command(
    name = "ciss",
    version,
    about = "Cheater-identifiable secret sharing against rushing cheaters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deal a secret into share files, and record one reconstruction run.
    Deal(DealArgs),
    /// Run a reconstruction protocol from share files.
    Reconstruct(ReconstructArgs),
    /// Estimate failure rates of a protocol under attack.
    AttackSim(SimArgs),
    /// Exact forgery acceptance probability over the full seed space.
    Exact(ExactArgs),
    /// Exact privacy check by enumerating all dealer randomness.
    Privacy(PrivacyArgs),
    /// Share size and overhead comparison.
    Overhead(OverheadArgs),
}

#[derive(Args, Clone)]
struct SchemeArgs {
    /// Underlying scheme: shamir or additive.
    #[arg(long, default_value = "shamir")]
    scheme: SchemeName,
    /// Shamir threshold.
    #[arg(long)]
    k: Option<usize>,
    /// TOML file with `n` and `minimal` qualified sets.
    #[arg(long)]
    access_file: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SimArgs {
    /// Scenario file; replaces all other experiment flags.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    field_w: u32,
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Comma-separated applicants (default: everyone).
    #[arg(long, value_delimiter = ',')]
    applicants: Option<Vec<usize>>,
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Share length; must equal --d.
    #[arg(long)]
    m: Option<usize>,
    /// Secret length in field elements.
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Tag length in field elements.
    #[arg(long, default_value_t = 4)]
    lprime: usize,
    #[arg(long, default_value = "individual")]
    protocol: Protocol,
    #[arg(long, default_value = "honest")]
    strategy: StrategyName,
    #[arg(long, value_delimiter = ',')]
    corrupted: Vec<usize>,
    /// Framing target.
    #[arg(long)]
    target: Option<usize>,
    /// Random forgeries send the same x' to every recipient.
    #[arg(long)]
    shared_forgery: bool,
    /// Framing cheaters also forge their round-one messages to the target.
    #[arg(long)]
    forge_target: bool,
    /// Hex of the raw element encoding.
    #[arg(long)]
    delta_x: Option<String>,
    #[arg(long)]
    delta_z: Option<String>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write machine-readable records here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit nonzero if any security property is violated.
    #[arg(long)]
    check: bool,
}

impl SimArgs {
    fn scenario(&self) -> Result<Scenario> {
        if let Some(path) = &self.scenario {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return Ok(Scenario::from_toml(&text)?);
        }
        Ok(Scenario {
            field_w: self.field_w,
            n: self.n,
            applicants: self.applicants.clone(),
            scheme: self.scheme.scheme,
            k: self.scheme.k,
            access: self.scheme.access_minimal()?,
            d: self.d,
            m: self.m,
            lprime: self.lprime,
            protocol: self.protocol,
            strategy: self.strategy,
            corrupted: self.corrupted.clone(),
            target: self.target,
            per_recipient: !self.shared_forgery,
            forge_target: self.forge_target,
            delta_x: self.delta_x.clone(),
            delta_z: self.delta_z.clone(),
            trials: self.trials,
            seed: self.seed,
        })
    }
}

impl SchemeArgs {
    fn access_minimal(&self) -> Result<Option<Vec<Vec<usize>>>> {
        let Some(path) = &self.access_file else {
            return Ok(None);
        };
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Some(AccessFile::from_toml(&text)?.minimal))
    }

    fn access(&self, n: usize) -> Result<Option<AccessStructure>> {
        let Some(path) = &self.access_file else {
            return Ok(None);
        };
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file = AccessFile::from_toml(&text)?;
        ensure!(
            file.n == n,
            "access file is over {} players, shares over {n}",
            file.n
        );
        Ok(Some(file.access_structure()?))
    }

    fn build<F: BinaryField>(&self, n: usize, d: usize) -> Result<UnderlyingScheme<F>> {
        Ok(match (self.scheme, self.k) {
            (SchemeName::Shamir, Some(k)) => UnderlyingScheme::shamir(k, n, d)?,
            (SchemeName::Shamir, None) => bail!("shamir sharing needs --k"),
            (SchemeName::Additive, _) => UnderlyingScheme::additive(n, d)?,
        })
    }
}

#[derive(Args)]
struct DealArgs {
    #[command(flatten)]
    sim: SimArgs,
    /// Secret as hex of the raw element encoding (default: random).
    #[arg(long)]
    secret: Option<String>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    dir: PathBuf,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Share files of the players whose view to compute.
    #[arg(required = true)]
    shares: Vec<PathBuf>,
    #[arg(long)]
    field_w: Option<u32>,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value = "individual")]
    protocol: Protocol,
    /// Transcript of delivered messages; without it, the given shares are
    /// assumed to be all applicants and to behave honestly.
    #[arg(long)]
    transcript: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    applicants: Option<Vec<usize>>,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long, default_value_t = 1)]
    field_w: u32,
    #[arg(long, default_value_t = 2)]
    lprime: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Hex of the raw encoding of dx; omit both deltas to sweep all of them.
    #[arg(long)]
    delta_x: Option<String>,
    #[arg(long)]
    delta_z: Option<String>,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: u64,
    /// Exit nonzero unless the probability equals q^-l'.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct PrivacyArgs {
    #[arg(long, default_value_t = 1)]
    field_w: u32,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    lprime: usize,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    coalition: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: u64,
    /// Exit nonzero unless the distance is 0.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct OverheadArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    lprime: usize,
    #[arg(long, default_value_t = 8)]
    field_w: u32,
}

fn parse_hex<F: BinaryField>(what: &str, text: &str) -> Result<Vec<F>> {
    let bytes = hex::decode(text.trim()).with_context(|| format!("{what} is not hex"))?;
    Ok(decode_raw(&bytes)?)
}

fn raw_hex<F: BinaryField>(v: &[F]) -> String {
    let mut out = Vec::new();
    put_raw(&mut out, v);
    hex::encode(out)
}

fn share_path(dir: &Path, player: usize) -> PathBuf {
    dir.join(format!("player_{player}.ciss"))
}

fn deal<F: BinaryField>(args: &DealArgs, scenario: &Scenario) -> Result<()> {
    let mut cfg = scenario.config::<F>()?;
    cfg.trials = 1;
    let exp = Experiment::new(cfg.clone())?;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let secret = match &args.secret {
        Some(h) => parse_hex::<F>("secret", h)?,
        None => random_vector(cfg.d, &mut rng),
    };
    ensure!(
        secret.len() == cfg.d,
        "secret has {} elements, --d is {}",
        secret.len(),
        cfg.d
    );
    let exec = exp.execute_with(secret, &mut rng)?;

    fs::create_dir_all(&args.dir)?;
    for s in &exec.shares {
        fs::write(share_path(&args.dir, s.player), s.encode())?;
    }
    fs::write(args.dir.join("secret.hex"), raw_hex(&exec.secret) + "\n")?;
    let transcript = Transcript {
        round1: exec.round1,
        round2: exec.round2,
    };
    fs::write(args.dir.join("transcript.jsonl"), transcript.to_jsonl())?;
    println!(
        "dealt {} shares of {} elements over GF(2^{}) to {}",
        exec.shares.len(),
        exp.params().share_elements(),
        F::DEGREE,
        args.dir.display()
    );
    Ok(())
}

fn reconstruct<F: BinaryField>(args: &ReconstructArgs, bytes: &[Vec<u8>]) -> Result<()> {
    let shares: Vec<CissShare<F>> = bytes
        .iter()
        .map(|b| CissShare::decode(b))
        .collect::<Result<_, _>>()?;
    let params = shares[0].params;
    ensure!(
        shares.iter().all(|s| s.params == params),
        "share files disagree on parameters"
    );
    let mut seen = BTreeSet::new();
    for s in &shares {
        ensure!(seen.insert(s.player), "player {} given twice", s.player);
    }
    let scheme = args.scheme.build::<F>(params.n, params.m)?;
    let access = args
        .scheme
        .access(params.n)?
        .unwrap_or_else(|| scheme.access().clone());

    let (applicants, transcript) = match &args.transcript {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let t = Transcript::<F>::from_jsonl(&text, params.m, params.lprime)?;
            let applicants: BTreeSet<usize> = match &args.applicants {
                Some(a) => a.iter().copied().collect(),
                None => t
                    .round1
                    .iter()
                    .flat_map(|m| [m.sender, m.recipient])
                    .chain(seen.iter().copied())
                    .collect(),
            };
            (applicants, t)
        }
        None => {
            let applicants: BTreeSet<usize> = args
                .applicants
                .as_ref()
                .map_or(seen.clone(), |a| a.iter().copied().collect());
            ensure!(
                applicants == seen,
                "without a transcript, pass the share file of every applicant"
            );
            let mut t = Transcript::default();
            for s in &shares {
                t.round1.extend(round1_messages(s, &applicants)?);
                t.round2.push(Round2Msg {
                    sender: s.player,
                    identification: s.identification.clone(),
                });
            }
            (applicants, t)
        }
    };

    let viewers: Vec<&CissShare<F>> = shares.iter().collect();
    let run = run_protocol(
        args.protocol,
        &scheme,
        &access,
        &params,
        &applicants,
        &viewers,
        &transcript.round1,
        &transcript.round2,
    )?;
    if let Some(agreed) = &run.agreed {
        println!("agreed: {agreed:?}");
    }
    if let Some(detected) = run.detected {
        println!("cheating detected: {detected}");
    }
    for (j, out) in &run.outcomes {
        let secret = out.secret.as_ref().map_or("⊥".to_string(), |s| raw_hex(s));
        println!(
            "player {j}: secret={secret} cheaters={:?} detected={}",
            out.cheaters, out.detected
        );
    }
    Ok(())
}

fn print_stats(stats: &SimStats, out: Option<&Path>) -> Result<()> {
    println!(
        "{} trials, protocol {}, q = {}, l' = {} (l = {} bits), bound q^-l' = {:.4e}",
        stats.trials, stats.protocol, stats.q, stats.lprime, stats.bits, stats.bound
    );
    println!(
        "{:<24} {:>10} {:>12} {:>24}",
        "flag", "count", "rate", "95% CI"
    );
    let mut records = Vec::new();
    for flag in Flag::ALL {
        let r = stats.flag(flag);
        println!(
            "{:<24} {:>10} {:>12.4e} [{:.4e}, {:.4e}]",
            flag.name(),
            r.count,
            r.rate,
            r.ci_low,
            r.ci_high
        );
        records.push(json!({
            "flag": flag.name(), "count": r.count, "trials": r.total, "rate": r.rate,
            "ci_low": r.ci_low, "ci_high": r.ci_high, "bound": stats.bound,
        }));
    }
    for (i, r) in &stats.per_cheater {
        println!(
            "{:<24} {:>10} {:>12.4e} [{:.4e}, {:.4e}]",
            format!("undetected[{i}]"),
            r.count,
            r.rate,
            r.ci_low,
            r.ci_high
        );
        records.push(json!({
            "flag": "undetected", "cheater": i, "count": r.count, "trials": r.total, "rate": r.rate,
            "ci_low": r.ci_low, "ci_high": r.ci_high, "bound": stats.bound,
        }));
    }
    for ((i, j), r) in &stats.forgery_accepts {
        records.push(json!({
            "flag": "forgery_accepted", "cheater": i, "verifier": j, "count": r.count, "trials": r.total,
            "rate": r.rate, "ci_low": r.ci_low, "ci_high": r.ci_high, "bound": stats.bound,
        }));
    }
    let lines: String = records.iter().map(|r| r.to_string() + "\n").collect();
    match out {
        Some(path) => {
            fs::write(path, lines).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{lines}"),
    }
    Ok(())
}

fn attack_sim<F: BinaryField>(args: &SimArgs, scenario: &Scenario) -> Result<bool> {
    let stats = estimate_rates(&scenario.config::<F>()?)?;
    print_stats(&stats, args.out.as_deref())?;
    let violations = stats.violations();
    for v in &violations {
        eprintln!("violation: {v}");
    }
    Ok(violations.is_empty())
}

fn exact<F: BinaryField>(args: &ExactArgs) -> Result<bool> {
    let q = F::order();
    let bound = format!("1/{}", (q as u128).pow(args.lprime as u32));
    let (lo, hi) = match (&args.delta_x, &args.delta_z) {
        (Some(dx), Some(dz)) => {
            let p = exact_forgery_probability::<F>(
                args.lprime,
                args.m,
                &parse_hex("delta_x", dx)?,
                &parse_hex("delta_z", dz)?,
                args.guard,
            )?;
            println!("P[accept] = {p}  (q^-l' = {bound})");
            (p, p)
        }
        (None, None) => {
            let s = forgery_sweep::<F>(args.lprime, args.m, args.guard)?;
            println!(
                "{} (dx, dz) pairs: P[accept] in [{}, {}]  (q^-l' = {bound})",
                s.cases, s.min, s.max
            );
            (s.min, s.max)
        }
        _ => bail!("give both --delta-x and --delta-z, or neither"),
    };
    let want = Ratio::new(1u128, (q as u128).pow(args.lprime as u32));
    let wide = |r: Ratio<u64>| Ratio::new(*r.numer() as u128, *r.denom() as u128);
    Ok(wide(lo) == want && wide(hi) == want)
}

fn privacy<F: BinaryField>(args: &PrivacyArgs) -> Result<bool> {
    let scheme = args.scheme.build::<F>(args.n, args.d)?;
    let coalition: BTreeSet<usize> = args.coalition.iter().copied().collect();
    let dist = privacy_exhaustive(&scheme, args.lprime, &coalition, args.guard)?;
    let qualified = scheme.access().is_qualified(&coalition)?;
    println!(
        "coalition {coalition:?} ({}): max total-variation distance = {dist}",
        if qualified {
            "qualified"
        } else {
            "unqualified"
        }
    );
    Ok(qualified || dist == Ratio::from_integer(0))
}

fn overhead(args: &OverheadArgs) -> Result<()> {
    let size = share_overhead(args.n, args.m, args.lprime, args.field_w)?;
    println!(
        "share: (2n-1)l' + 2m - 1 = {} elements = {} bits",
        size.elements, size.bits
    );
    let k = args.k.unwrap_or(args.n);
    let l = args.lprime as u32 * args.field_w;
    let c = compare_overheads(args.n, k, l)?;
    println!("log2 overhead at l = {l} bits, n = {}, k = {k}:", args.n);
    println!(
        "  {:<8} {:>6} * l + {:>10.3} = {:>12.3}",
        "ours", c.ours.coefficient, c.ours.constant, c.ours.log2
    );
    println!(
        "  {:<8} {:>6} * l + {:>10.3} = {:>12.3}",
        "IOS12", c.ios12.coefficient, c.ios12.constant, c.ios12.log2
    );
    match c.pw91 {
        Some(p) => println!(
            "  {:<8} {:>6} * l + {:>10.3} = {:>12.3}",
            "PW91", p.coefficient, p.constant, p.log2
        ),
        None => println!("  {:<8} (base n - ceil(k/2) is zero)", "PW91"),
    }
    println!(
        "  coefficient ratios: IOS12/ours = {}, PW91/ours = {}",
        c.ios12_coefficient_ratio(),
        c.pw91_coefficient_ratio()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Deal(args) => {
            let scenario = args.sim.scenario()?;
            with_field!(scenario.field_w, F => deal::<F>(&args, &scenario))?;
            Ok(true)
        }
        Command::Reconstruct(args) => {
            let bytes: Vec<Vec<u8>> = args
                .shares
                .iter()
                .map(|p| fs::read(p).with_context(|| format!("reading {}", p.display())))
                .collect::<Result<_>>()?;
            let w = read_header(&bytes[0])?.degree;
            if let Some(want) = args.field_w {
                ensure!(want == w, "shares are over GF(2^{w}), not GF(2^{want})");
            }
            with_field!(w, F => reconstruct::<F>(&args, &bytes))?;
            Ok(true)
        }
        Command::AttackSim(args) => {
            let scenario = args.scenario()?;
            let ok = with_field!(scenario.field_w, F => attack_sim::<F>(&args, &scenario))?;
            Ok(ok || !args.check)
        }
        Command::Exact(args) => {
            let ok = with_field!(args.field_w, F => exact::<F>(&args))?;
            Ok(ok || !args.check)
        }
        Command::Privacy(args) => {
            let ok = with_field!(args.field_w, F => privacy::<F>(&args))?;
            Ok(ok || !args.check)
        }
        Command::Overhead(args) => {
            overhead(&args)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("check failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
