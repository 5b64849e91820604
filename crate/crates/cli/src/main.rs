//! `ctru`: key generation, encapsulation, KATs, failure estimates and timings.

mod kat;

use clap::{Parser, Subcommand, ValueEnum};
use ctru::estimator::{self, Bound, EstimatorConfig};
use ctru::symmetric::shake128;
use ctru::{get_parameter_set, kem, ParameterSet, PARAMETER_SETS};
use rand::rngs::OsRng;
use rand::RngCore;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "ctru", version, about = "CTRU / CNTR key encapsulation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write PREFIX.pk and PREFIX.sk.
    Keygen {
        #[arg(long)]
        param: String,
        /// 32-byte hex seed, expanded to keyseed || zseed.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write PREFIX.ct and PREFIX.ss for a public key.
    Encaps {
        #[arg(long)]
        param: String,
        #[arg(long)]
        pk: PathBuf,
        /// 32-byte hex message seed.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the shared key as hex.
    Decaps {
        #[arg(long)]
        param: String,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        ct: PathBuf,
    },
    /// Generate a KAT file, or check one with --verify.
    Kat {
        #[arg(long)]
        param: String,
        #[arg(long, default_value_t = 10)]
        count: u32,
        /// Output file (standard output otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Print log2 of the failure probability; all sets without --param.
    Estimate {
        #[arg(long)]
        param: Vec<String>,
        #[arg(long, value_enum, default_value_t = BoundArg::Ball)]
        bound: BoundArg,
    },
    /// Time KeyGen, Encaps and Decaps.
    Bench {
        #[arg(long)]
        param: String,
        #[arg(long, default_value_t = 1000)]
        iters: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundArg {
    Ball,
    Voronoi,
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Verify(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Keygen { param, seed, out } => {
            let p = get_parameter_set(&param)?;
            let seed = match seed {
                Some(s) => parse_seed(&s)?,
                None => random_seed(),
            };
            let (keyseed, zseed) = split_keygen_seed(&seed);
            let kp = kem::keygen(p, &keyseed, &zseed)?;
            write(&with_ext(&out, "pk"), &kp.pk)?;
            write(&with_ext(&out, "sk"), &kp.sk)?;
        }
        Cmd::Encaps { param, pk, seed, out } => {
            let p = get_parameter_set(&param)?;
            let pk = read(&pk)?;
            let mseed = match seed {
                Some(s) => parse_seed(&s)?,
                None => random_seed(),
            };
            let (ct, ss) = kem::encaps(p, &pk, &mseed)?;
            write(&with_ext(&out, "ct"), &ct)?;
            write(&with_ext(&out, "ss"), &ss)?;
        }
        Cmd::Decaps { param, sk, ct } => {
            let p = get_parameter_set(&param)?;
            let ss = kem::decaps(p, &read(&sk)?, &read(&ct)?)?;
            println!("{}", hex::encode(ss));
        }
        Cmd::Kat { param, count, out, verify } => {
            let p = get_parameter_set(&param)?;
            match verify {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                    let n = kat::verify(p, &text).map_err(Failure::Verify)?;
                    println!("{}: {n} records ok", path.display());
                }
                None => {
                    let text = kat::generate(p, count)?;
                    match out {
                        Some(path) => write(&path, text.as_bytes())?,
                        None => print!("{text}"),
                    }
                }
            }
        }
        Cmd::Estimate { param, bound } => {
            let sets: Vec<&ParameterSet> = if param.is_empty() {
                PARAMETER_SETS.iter().collect()
            } else {
                param.iter().map(|n| get_parameter_set(n)).collect::<Result<_, _>>()?
            };
            let cfg = EstimatorConfig {
                bound: match bound {
                    BoundArg::Ball => Bound::Ball,
                    BoundArg::Voronoi => Bound::Voronoi,
                },
                ..Default::default()
            };
            println!("{:<20} {:>10} {:>7} {:>9}", "set", "log2 delta", "table", "time (s)");
            for p in sets {
                let t = Instant::now();
                let e = estimator::failure_probability_with(p, &cfg);
                println!(
                    "{:<20} {:>10.2} {:>7} {:>9.2}",
                    p.name,
                    e.log2_delta,
                    p.table_log2_delta,
                    t.elapsed().as_secs_f64()
                );
            }
        }
        Cmd::Bench { param, iters } => bench(get_parameter_set(&param)?, iters.max(1))?,
    }
    Ok(())
}

fn bench(p: &ParameterSet, iters: u32) -> Result<(), Failure> {
    let mut rng = OsRng;
    let mut seeds = || {
        let mut s = [0u8; 32];
        rng.fill_bytes(&mut s);
        s
    };
    let kp = kem::keygen(p, &seeds(), &seeds())?;
    let (ct, _) = kem::encaps(p, &kp.pk, &seeds())?;

    println!("{} ({iters} iterations)", p.name);
    println!("{:<8} {:>12}", "op", "ns/op");
    let t = Instant::now();
    for _ in 0..iters {
        std::hint::black_box(kem::keygen(p, &seeds(), &seeds())?);
    }
    println!("{:<8} {:>12.0}", "keygen", t.elapsed().as_nanos() as f64 / iters as f64);
    let t = Instant::now();
    for _ in 0..iters {
        std::hint::black_box(kem::encaps(p, &kp.pk, &seeds())?);
    }
    println!("{:<8} {:>12.0}", "encaps", t.elapsed().as_nanos() as f64 / iters as f64);
    let t = Instant::now();
    for _ in 0..iters {
        std::hint::black_box(kem::decaps(p, &kp.sk, &ct)?);
    }
    println!("{:<8} {:>12.0}", "decaps", t.elapsed().as_nanos() as f64 / iters as f64);
    Ok(())
}

/// `keyseed || zseed` from the first 64 bytes of `SHAKE-128(seed)`.
fn split_keygen_seed(seed: &[u8; 32]) -> ([u8; 32], [u8; 32]) {
    let x = shake128(seed, 64);
    (x[..32].try_into().unwrap(), x[32..].try_into().unwrap())
}

fn parse_seed(s: &str) -> Result<[u8; 32], Failure> {
    let bytes = hex::decode(s.trim()).map_err(|e| format!("seed: {e}"))?;
    bytes
        .try_into()
        .map_err(|b: Vec<u8>| Failure::Usage(format!("seed: expected 32 bytes, got {}", b.len())))
}

fn random_seed() -> [u8; 32] {
    let mut s = [0u8; 32];
    OsRng.fill_bytes(&mut s);
    s
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, data: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, data).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}
