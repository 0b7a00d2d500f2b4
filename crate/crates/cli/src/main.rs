use std::io::Write;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ldauth_core::braid::BraidWord;
use ldauth_core::experiment;
use ldauth_core::keyfile::{PublicKeyFile, SecretKeyFile};
use ldauth_core::laver::{self, LaverTable};
use ldauth_core::platform::laws::{law_check, Coverage, Law};
use ldauth_core::platform::search::{f_preimage_search, scsp_search, search_cd_magmas};
use ldauth_core::platform::{LdPlatform, PlatformSpec, SearchBounds};
use ldauth_core::protocol::{keygen, run_session, KeyPair, LawMode, ProtocolConfig, Transcript};
use ldauth_core::transport::{self, ServeOptions, TransportConfig};
use ldauth_core::{stream_rng, with_platform, Exec};

#[derive(Parser)]
#[command(name = "ldauth", version, about = "Identification over left self-distributive systems")]
struct Cli {
    /// Run data-parallel loops on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair and write the secret and public key files.
    Keygen(KeygenArgs),
    /// Run prover and verifier in one process and print the transcript.
    AuthDemo(DemoArgs),
    /// Listen for provers and verify their sessions.
    Serve(ServeArgs),
    /// Connect to a verifier and prove knowledge of a secret key.
    Prove(ProveArgs),
    /// Laver table utilities.
    Laver {
        #[command(subcommand)]
        command: LaverCommand,
    },
    /// Check the LD or CD law on a platform.
    LawCheck(LawCheckArgs),
    /// Brute-force searches.
    Search {
        #[command(subcommand)]
        command: SearchCommand,
    },
    /// Monte Carlo experiments emitting JSON reports.
    Experiment {
        #[command(subcommand)]
        command: ExperimentCommand,
    },
}

#[derive(Args)]
struct SeedArg {
    /// RNG seed; a fresh one is drawn and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
}

impl SeedArg {
    fn resolve(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            let seed = rand::random();
            eprintln!("seed: {seed}");
            seed
        })
    }
}

#[derive(Args)]
struct SessionArgs {
    #[arg(long, default_value_t = 20)]
    rounds: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Ld)]
    mode: ModeArg,
}

impl SessionArgs {
    fn config(&self) -> Result<ProtocolConfig> {
        Ok(ProtocolConfig::new(self.rounds, self.mode.into())?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ld,
    Cd,
}

impl From<ModeArg> for LawMode {
    fn from(m: ModeArg) -> LawMode {
        match m {
            ModeArg::Ld => LawMode::Ld,
            ModeArg::Cd => LawMode::Cd,
        }
    }
}

#[derive(Args)]
struct KeygenArgs {
    /// shifted-braid | conj-braid | laver:<n> | int-succ | magma:<file> | fconj:<k>:<word>
    #[arg(long, default_value = "shifted-braid")]
    platform: PlatformSpec,
    #[arg(long, default_value = "key.secret.json")]
    secret_out: PathBuf,
    #[arg(long, default_value = "key.public.json")]
    public_out: PathBuf,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value = "laver:8")]
    platform: PlatformSpec,
    #[command(flatten)]
    session: SessionArgs,
    /// Replace the prover's secret with an unrelated random element.
    #[arg(long)]
    wrong_secret: bool,
    /// Also write the transcript to this file.
    #[arg(long)]
    transcript: Option<PathBuf>,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long)]
    public: PathBuf,
    #[arg(long, default_value = "127.0.0.1:7878")]
    listen: String,
    /// Overrides the platform named in the key file.
    #[arg(long)]
    platform: Option<PlatformSpec>,
    #[command(flatten)]
    session: SessionArgs,
    /// Sessions to serve before exiting; 0 serves forever.
    #[arg(long, default_value_t = 1)]
    sessions: u64,
    /// Transcript file; session i > 0 of a multi-session run goes to `<file>.<i>`.
    #[arg(long)]
    transcript: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    timeout_secs: u64,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct ProveArgs {
    #[arg(long)]
    secret: PathBuf,
    #[arg(long, default_value = "127.0.0.1:7878")]
    connect: String,
    #[arg(long)]
    platform: Option<PlatformSpec>,
    #[command(flatten)]
    session: SessionArgs,
    #[arg(long)]
    transcript: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    timeout_secs: u64,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Subcommand)]
enum LaverCommand {
    /// Print A_n as CSV, one row per line.
    Print { n: u32 },
    /// Print the threshold of every row of A_n, read off A_{n+1}.
    Thresholds { n: u32 },
    /// Print the period and repeating block of every row of A_n.
    Patterns { n: u32 },
    /// Build A_n and report build time and memory use.
    Info { n: u32 },
}

#[derive(Clone, Copy, ValueEnum)]
enum LawArg {
    Ld,
    Cd,
}

#[derive(Args)]
struct LawCheckArgs {
    #[arg(long)]
    platform: PlatformSpec,
    #[arg(long, value_enum, default_value_t = LawArg::Ld)]
    law: LawArg,
    /// Check every triple (finite platforms only).
    #[arg(long, conflicts_with = "trials")]
    exhaustive: bool,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 3)]
    max_len: usize,
    #[arg(long, default_value_t = 3)]
    max_index: u32,
    /// Stop after this many candidates.
    #[arg(long)]
    budget: Option<u64>,
}

impl BoundsArgs {
    fn bounds(&self) -> SearchBounds {
        SearchBounds {
            max_len: self.max_len,
            max_index: self.max_index,
            budget: self.budget,
        }
    }
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Find s̃ with s̃∘p = p′.
    Scsp {
        #[arg(long, default_value = "shifted-braid")]
        platform: PlatformSpec,
        #[arg(long)]
        p: String,
        #[arg(long)]
        p_prime: String,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Find a braid s with s∘1 = target under shifted conjugacy.
    Preimage {
        #[arg(long)]
        target: BraidWord,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Enumerate all CD-law magmas of a given size (at most 3).
    CdMagmas {
        #[arg(long)]
        size: usize,
        /// Write each table as `magma-<i>.csv` into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Honest sessions; every one should be accepted.
    Completeness {
        #[arg(long, default_value = "shifted-braid")]
        platform: PlatformSpec,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[command(flatten)]
        session: SessionArgs,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Cheating prover: single-round and full-session acceptance.
    Soundness {
        #[arg(long, default_value = "shifted-braid")]
        platform: PlatformSpec,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 10_000)]
        session_trials: u64,
        #[command(flatten)]
        session: SessionArgs,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Recover planted secrets over σ1, σ2 by exhaustive search.
    Bruteforce {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match run(cli.command, exec) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn verdict_code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run(command: Command, exec: Exec) -> Result<ExitCode> {
    match command {
        Command::Keygen(args) => with_platform!(&args.platform, |p| cmd_keygen(&p, &args)),
        Command::AuthDemo(args) => with_platform!(&args.platform, |p| cmd_demo(&p, &args)),
        Command::Serve(args) => {
            let file = PublicKeyFile::load(&args.public)?;
            let spec = platform_from(args.platform.clone(), &file.platform)?;
            with_platform!(&spec, |p| cmd_serve(&p, &args, &file))
        }
        Command::Prove(args) => {
            let file = SecretKeyFile::load(&args.secret)?;
            let spec = platform_from(args.platform.clone(), &file.platform)?;
            with_platform!(&spec, |p| cmd_prove(&p, &args, &file))
        }
        Command::Laver { command } => cmd_laver(command, exec),
        Command::LawCheck(args) => with_platform!(&args.platform, |p| cmd_law_check(&p, &args, exec)),
        Command::Search { command } => cmd_search(command, exec),
        Command::Experiment { command } => cmd_experiment(command, exec),
    }
}

fn platform_from(over: Option<PlatformSpec>, stored: &str) -> Result<PlatformSpec> {
    match over {
        Some(spec) => Ok(spec),
        None => stored
            .parse()
            .with_context(|| format!("key file names platform {stored:?}")),
    }
}

fn cmd_keygen<P: LdPlatform>(platform: &P, args: &KeygenArgs) -> Result<ExitCode> {
    let mut rng = stream_rng(args.seed.resolve(), 0);
    let key = keygen(platform, &mut rng);
    let secret = SecretKeyFile::from_key(platform, &key);
    secret.save(&args.secret_out)?;
    secret.public().save(&args.public_out)?;
    println!(
        "{}",
        json!({
            "platform": secret.platform,
            "p": secret.p,
            "p_prime": secret.p_prime,
            "secret_file": args.secret_out,
            "public_file": args.public_out,
        })
    );
    Ok(ExitCode::SUCCESS)
}

fn write_transcript<P: LdPlatform>(platform: &P, transcript: &Transcript<P::Element>, path: &Path) -> Result<()> {
    std::fs::write(path, transcript.to_text(platform)).with_context(|| format!("writing {}", path.display()))
}

fn cmd_demo<P: LdPlatform>(platform: &P, args: &DemoArgs) -> Result<ExitCode> {
    let config = args.session.config()?;
    let seed = args.seed.resolve();
    let mut rng = stream_rng(seed, 0);
    let mut key = keygen(platform, &mut rng);
    if args.wrong_secret {
        key = KeyPair {
            secret: platform.sample(&mut rng),
            public: key.public,
        };
    }
    let transcript = run_session(platform, &config, &key, &mut rng)?;
    let text = transcript.to_text(platform);
    print!("{text}");
    if let Some(path) = &args.transcript {
        write_transcript(platform, &transcript, path)?;
    }
    eprintln!(
        "{}: {} of {} rounds recorded",
        if transcript.accepted() { "accept" } else { "reject" },
        transcript.rounds().len(),
        config.rounds
    );
    Ok(verdict_code(transcript.accepted()))
}

fn transport_config(timeout_secs: u64) -> TransportConfig {
    TransportConfig {
        timeout: (timeout_secs > 0).then(|| Duration::from_secs(timeout_secs)),
        ..TransportConfig::default()
    }
}

fn cmd_serve<P: LdPlatform>(platform: &P, args: &ServeArgs, file: &PublicKeyFile) -> Result<ExitCode> {
    let config = args.session.config()?;
    config.check_platform(platform)?;
    let public = file.to_key(platform)?;
    let seed = args.seed.resolve();
    let listener = TcpListener::bind(&args.listen).with_context(|| format!("binding {}", args.listen))?;
    println!("listening on {}", listener.local_addr()?);
    std::io::stdout().flush()?;
    let all_ok = Mutex::new(true);
    let max_sessions = (args.sessions > 0).then_some(args.sessions);
    transport::serve(
        &listener,
        platform,
        &config,
        &public,
        &ServeOptions {
            seed,
            max_sessions,
            transport: transport_config(args.timeout_secs),
        },
        |i, outcome| {
            let ok = match outcome {
                Ok(outcome) => {
                    if let Some(path) = &args.transcript {
                        let path = if i == 0 {
                            path.clone()
                        } else {
                            PathBuf::from(format!("{}.{i}", path.display()))
                        };
                        if let Err(e) = write_transcript(platform, &outcome.transcript, &path) {
                            eprintln!("session {i}: {e:#}");
                        }
                    }
                    match &outcome.diagnostic {
                        Some(d) => eprintln!("session {i}: reject: {d}"),
                        None if outcome.accepted => eprintln!("session {i}: accept"),
                        None => eprintln!("session {i}: reject"),
                    }
                    outcome.accepted
                }
                Err(e) => {
                    eprintln!("session {i}: connection error: {e}");
                    false
                }
            };
            let mut all = all_ok.lock().expect("flag lock");
            *all &= ok;
        },
    )?;
    let ok = *all_ok.lock().expect("flag lock");
    Ok(verdict_code(ok))
}

fn cmd_prove<P: LdPlatform>(platform: &P, args: &ProveArgs, file: &SecretKeyFile) -> Result<ExitCode> {
    let config = args.session.config()?;
    let key = file.to_key(platform)?;
    let mut rng = stream_rng(args.seed.resolve(), 0);
    let outcome = transport::prove_tcp(
        args.connect.as_str(),
        platform,
        &config,
        &key,
        &mut rng,
        &transport_config(args.timeout_secs),
    )
    .with_context(|| format!("connecting to {}", args.connect))?;
    if let Some(path) = &args.transcript {
        write_transcript(platform, &outcome.transcript, path)?;
    }
    match &outcome.diagnostic {
        Some(d) => eprintln!("reject: {d}"),
        None if outcome.accepted => eprintln!("accept"),
        None => eprintln!("reject"),
    }
    Ok(verdict_code(outcome.accepted))
}

/// Peak resident set size of this process in KiB, where the OS reports it.
fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

fn cmd_laver(command: LaverCommand, exec: Exec) -> Result<ExitCode> {
    let mut out = std::io::BufWriter::new(std::io::stdout().lock());
    match command {
        LaverCommand::Print { n } => {
            let table = LaverTable::build(n)?;
            for p in 0..table.size() {
                let row: Vec<String> = table.row(p).iter().map(u16::to_string).collect();
                writeln!(out, "{}", row.join(","))?;
            }
        }
        LaverCommand::Thresholds { n } => {
            let small = LaverTable::build(n)?;
            let big = LaverTable::build(n + 1)?;
            writeln!(out, "p,threshold")?;
            for t in small.thresholds_into(&big) {
                writeln!(out, "{},{}", t.p, t.t)?;
            }
            let mismatches = laver::doubling_mismatches(&small, &big, exec);
            if !mismatches.is_empty() {
                bail!("threshold rules fail to rebuild rows {mismatches:?} of A_{}", n + 1);
            }
        }
        LaverCommand::Patterns { n } => {
            let table = LaverTable::build(n)?;
            writeln!(out, "p,period,pattern")?;
            for p in 0..table.size() {
                let pattern = table.row_pattern(p)?;
                let block: Vec<String> = pattern.pattern.iter().map(u32::to_string).collect();
                writeln!(out, "{p},{},{}", pattern.period(), block.join(" "))?;
            }
        }
        LaverCommand::Info { n } => {
            let start = Instant::now();
            let table = LaverTable::build(n)?;
            let build_secs = start.elapsed().as_secs_f64();
            writeln!(
                out,
                "{}",
                json!({
                    "n": n,
                    "size": table.size(),
                    "table_bytes": table.memory_bytes(),
                    "build_secs": build_secs,
                    "peak_rss_kib": peak_rss_kib(),
                })
            )?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_law_check<P: LdPlatform>(platform: &P, args: &LawCheckArgs, exec: Exec) -> Result<ExitCode> {
    let law = match args.law {
        LawArg::Ld => Law::Ld,
        LawArg::Cd => Law::Cd,
    };
    let coverage = if args.exhaustive {
        Coverage::Exhaustive
    } else {
        Coverage::Random {
            trials: args.trials,
            seed: args.seed.resolve(),
        }
    };
    let report = law_check(platform, law, coverage, exec)?;
    let counterexample = report
        .counterexample
        .as_ref()
        .map(|(a, b, c)| [platform.encode(a), platform.encode(b), platform.encode(c)]);
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "platform": platform.descriptor(),
            "law": law,
            "coverage": if args.exhaustive { "exhaustive" } else { "random" },
            "seed": match coverage { Coverage::Random { seed, .. } => Some(seed), Coverage::Exhaustive => None },
            "checked": report.checked,
            "passed": report.passed,
            "counterexample": counterexample,
        }))?
    );
    Ok(verdict_code(report.all_passed()))
}

fn search_json<P: LdPlatform>(
    platform: &P,
    r: &ldauth_core::platform::search::SearchResult<P::Element>,
) -> serde_json::Value {
    json!({
        "platform": platform.descriptor(),
        "found": r.found.as_ref().map(|e| platform.encode(e)),
        "candidates_tried": r.candidates_tried,
        "space_size": r.space_size,
        "budget_exhausted": r.budget_exhausted(),
        "bounds": r.bounds,
    })
}

fn cmd_search(command: SearchCommand, exec: Exec) -> Result<ExitCode> {
    match command {
        SearchCommand::Scsp {
            platform,
            p,
            p_prime,
            bounds,
        } => with_platform!(&platform, |plat| {
            let p = plat.decode(&p)?;
            let p_prime = plat.decode(&p_prime)?;
            let r = scsp_search(&plat, &p, &p_prime, &bounds.bounds(), exec)?;
            println!("{}", serde_json::to_string_pretty(&search_json(&plat, &r))?);
            Ok(verdict_code(r.found.is_some()))
        }),
        SearchCommand::Preimage { target, bounds } => {
            let r = f_preimage_search(&target, &bounds.bounds(), exec)?;
            let plat = ldauth_core::platform::ShiftedBraid::default();
            println!("{}", serde_json::to_string_pretty(&search_json(&plat, &r))?);
            Ok(verdict_code(r.found.is_some()))
        }
        SearchCommand::CdMagmas { size, out_dir } => {
            let magmas = search_cd_magmas(size, exec)?;
            if let Some(dir) = &out_dir {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            let mut tables = Vec::new();
            for (i, m) in magmas.iter().enumerate() {
                if let Some(dir) = &out_dir {
                    let path = dir.join(format!("magma-{i}.csv"));
                    std::fs::write(&path, m.to_csv()).with_context(|| format!("writing {}", path.display()))?;
                }
                tables.push(m.table().to_vec());
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "size": size,
                    "count": magmas.len(),
                    "tables": tables,
                }))?
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_experiment(command: ExperimentCommand, exec: Exec) -> Result<ExitCode> {
    match command {
        ExperimentCommand::Completeness {
            platform,
            trials,
            session,
            seed,
        } => {
            let config = session.config()?;
            let seed = seed.resolve();
            with_platform!(&platform, |p| {
                let report = experiment::completeness(&p, &config, trials, seed, exec)?;
                println!("{}", report.to_json());
                Ok(verdict_code(report.successes == report.trials))
            })
        }
        ExperimentCommand::Soundness {
            platform,
            trials,
            session_trials,
            session,
            seed,
        } => {
            let config = session.config()?;
            let seed = seed.resolve();
            with_platform!(&platform, |p| {
                let rounds = experiment::soundness_rounds(&p, trials, seed, exec)?;
                let sessions = experiment::soundness_sessions(&p, &config, session_trials, seed ^ 1, exec)?;
                println!("{}", serde_json::to_string_pretty(&[rounds, sessions])?);
                Ok(ExitCode::SUCCESS)
            })
        }
        ExperimentCommand::Bruteforce { trials, max_len, seed } => {
            let report = experiment::braid_bruteforce(max_len, trials, seed.resolve(), exec)?;
            println!("{}", report.to_json());
            Ok(verdict_code(report.successes == report.trials))
        }
    }
}
