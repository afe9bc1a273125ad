use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use tw2dim::dimension::DimensionResult;
use tw2dim::io::{
    read_bundle, read_poset, read_realizer, write_bundle, write_decomposition, write_poset,
    write_realizer,
};
use tw2dim::realizer::{realize_instance, ClassifiedInstance};
use tw2dim::{
    dimension_exact, metamorphic_check, signature_census, DimensionError, DimensionOptions, Family,
    GenSpec, Poset, RealizeError, STDecomposition,
};

#[derive(Parser)]
#[command(
    name = "tw2dim",
    version,
    about = "Dimension of posets with treewidth-2 cover graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated poset.
    Gen(GenArgs),
    /// Exact dimension by backtracking search.
    Dim(DimArgs),
    /// Realizer of at most 12 extensions as JSON.
    Realize(RealizeArgs),
    /// Check a realizer against a poset.
    Verify(VerifyArgs),
    /// s-t tree-decomposition of the poset's cover graph.
    Decompose(DecomposeArgs),
    /// Count incomparable pairs per signature.
    Classify(InputArgs),
    /// Re-classify pairs under dual, reversed and child-swapped decompositions.
    CheckClaims(ClaimsArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct InputArgs {
    /// Poset file; stdin when absent.
    file: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    /// Run on COUNT generated instances instead of one input poset.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value = "random_tw2")]
    family: Family,
    /// Largest instance size; sizes cycle from --min-n up to this.
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long)]
    min_n: Option<usize>,
    /// Seed of the first instance; instance i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl BatchArgs {
    fn specs(&self, count: usize) -> Vec<GenSpec> {
        let lo = self.min_n.unwrap_or(self.n).min(self.n);
        let span = self.n - lo + 1;
        (0..count)
            .map(|i| GenSpec {
                family: self.family,
                n: lo + i % span,
                seed: self.seed.wrapping_add(i as u64),
            })
            .collect()
    }
}

#[derive(Args)]
struct DimArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 12)]
    max_d: usize,
    /// Largest number of ordered incomparable pairs searched.
    #[arg(long, default_value_t = 60)]
    cap: usize,
    #[command(flatten)]
    batch: BatchArgs,
}

#[derive(Args)]
struct RealizeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Prefix the JSON with the poset text so `verify` can read both from
    /// one stream.
    #[arg(long)]
    bundle: bool,
    #[command(flatten)]
    batch: BatchArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Poset file; stdin when absent.
    file: Option<PathBuf>,
    /// Realizer JSON. Without it the input must be a bundle from
    /// `realize --bundle`.
    #[arg(long)]
    realizer: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Decomposition JSON (the default).
    #[arg(long, conflicts_with = "dot")]
    json: bool,
    /// DOT of the series-parallel host graph, fill edges dashed.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct ClaimsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    batch: BatchArgs,
}

/// Exit status and message for a failed command.
enum Failure {
    /// The input is fine but a checked property does not hold.
    Violated(String),
    Usage(String),
}

type Outcome = Result<(), Failure>;

fn read_input(file: &Option<PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match file {
        Some(path) => {
            text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn load_poset(input: &InputArgs) -> Result<Poset, Failure> {
    read_poset(&read_input(&input.file)?).map_err(|e| Failure::Usage(e.to_string()))
}

fn instance(p: &Poset) -> Result<ClassifiedInstance, Failure> {
    ClassifiedInstance::new(p).map_err(realize_failure)
}

fn realize_failure(e: RealizeError) -> Failure {
    match e {
        RealizeError::NotTreewidth2 => Failure::Usage(e.to_string()),
        other => Failure::Violated(other.to_string()),
    }
}

fn generate_all(batch: &BatchArgs, count: usize) -> Result<Vec<(GenSpec, Poset)>, Failure> {
    batch
        .specs(count)
        .into_iter()
        .map(|s| {
            s.generate()
                .map(|p| (s, p))
                .map_err(|e| Failure::Usage(e.to_string()))
        })
        .collect()
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(pool.install(f))
}

fn label(spec: &GenSpec) -> String {
    format!("{} n={} seed={}", spec.family, spec.n, spec.seed)
}

fn summary(total: usize, failures: &[String], extra: &str) -> Outcome {
    for f in failures {
        eprintln!("FAIL {f}");
    }
    println!(
        "instances: {total}, passed: {}, failed: {}{extra}",
        total - failures.len(),
        failures.len()
    );
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violated(format!(
            "{} instances failed",
            failures.len()
        )))
    }
}

fn gen(args: GenArgs) -> Outcome {
    let spec = GenSpec {
        family: args.family,
        n: args.n,
        seed: args.seed,
    };
    let p = spec.generate().map_err(|e| Failure::Usage(e.to_string()))?;
    print!("{}", write_poset(&p));
    Ok(())
}

fn dim(args: DimArgs) -> Outcome {
    let opts = DimensionOptions {
        max_d: args.max_d,
        cap: args.cap,
    };
    let Some(count) = args.batch.count else {
        let p = load_poset(&args.input)?;
        return match dimension_exact(&p, &opts) {
            Ok(r) => {
                println!("{}", r.dimension);
                Ok(())
            }
            Err(e @ DimensionError::Exceeded(_)) => Err(Failure::Violated(e.to_string())),
            Err(e) => Err(Failure::Usage(e.to_string())),
        };
    };
    let instances = generate_all(&args.batch, count)?;
    let results: Vec<(GenSpec, Result<DimensionResult, DimensionError>)> =
        with_jobs(args.batch.jobs, || {
            instances
                .par_iter()
                .map(|(s, p)| (*s, dimension_exact(p, &opts)))
                .collect()
        })?;
    let mut failures = Vec::new();
    let mut skipped = 0;
    let mut max_dim = 0;
    for (spec, r) in &results {
        match r {
            Ok(r) => max_dim = max_dim.max(r.dimension),
            Err(DimensionError::TooLarge { .. }) => skipped += 1,
            Err(e) => failures.push(format!("{}: {e}", label(spec))),
        }
    }
    summary(
        results.len(),
        &failures,
        &format!(", skipped (too large): {skipped}, max dimension: {max_dim}"),
    )
}

fn realize(args: RealizeArgs) -> Outcome {
    let Some(count) = args.batch.count else {
        let p = load_poset(&args.input)?;
        let r = realize_instance(&instance(&p)?).map_err(realize_failure)?;
        if args.bundle {
            print!("{}", write_bundle(&p, &r));
        } else {
            print!("{}", write_realizer(&r, &p));
        }
        return Ok(());
    };
    let instances = generate_all(&args.batch, count)?;
    let results: Vec<Result<usize, String>> = with_jobs(args.batch.jobs, || {
        instances
            .par_iter()
            .map(|(s, p)| {
                let r = ClassifiedInstance::new(p)
                    .and_then(|c| realize_instance(&c))
                    .map_err(|e| format!("{}: {e}", label(s)))?;
                if r.len() > 12 || !r.verify(p) {
                    return Err(format!(
                        "{}: realizer of {} extensions rejected",
                        label(s),
                        r.len()
                    ));
                }
                Ok(r.len())
            })
            .collect()
    })?;
    let max_len = results.iter().flatten().max().copied().unwrap_or(0);
    let failures: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    summary(count, &failures, &format!(", max extensions: {max_len}"))
}

fn verify(args: VerifyArgs) -> Outcome {
    let text = read_input(&args.file)?;
    let usage = |e: tw2dim::io::ParseError| Failure::Usage(e.to_string());
    let (p, r) = match &args.realizer {
        Some(path) => {
            let p = read_poset(&text).map_err(usage)?;
            let json = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let r = read_realizer(&json, &p).map_err(usage)?;
            (p, r)
        }
        None => read_bundle(&text).map_err(usage)?,
    };
    let problems = p.realizer_problems(&r.linear_extensions());
    if problems.is_empty() {
        println!("ok: {} extensions", r.len());
        Ok(())
    } else {
        for problem in &problems {
            eprintln!("{problem}");
        }
        Err(Failure::Violated("not a realizer".into()))
    }
}

fn decompose(args: DecomposeArgs) -> Outcome {
    let p = load_poset(&args.input)?;
    let c = instance(&p)?;
    if args.dot {
        print!("{}", c.embedding.to_dot());
    } else {
        print!(
            "{}",
            write_decomposition(&c.decomposition, &c.embedding.host)
        );
    }
    Ok(())
}

fn classify(args: InputArgs) -> Outcome {
    let p = load_poset(&args)?;
    let c = instance(&p)?;
    println!("{:<12} pairs", "signature");
    let census = signature_census(&c);
    for (class, count) in &census {
        println!("{:<12} {count}", class.to_string());
    }
    println!("{:<12} {}", "total", census.values().sum::<usize>());
    Ok(())
}

fn claims_report(c: &ClassifiedInstance) -> Vec<String> {
    let mut lines: Vec<String> = metamorphic_check(c).iter().map(|v| v.to_string()).collect();
    let d: &STDecomposition = &c.decomposition;
    let (host, s, t) = (&c.embedding.host, c.embedding.source(), c.embedding.sink());
    lines.extend(
        d.validate(host, s, t)
            .into_iter()
            .map(|m| format!("decomposition: {m}")),
    );
    lines.extend(
        d.reverse()
            .validate(host, t, s)
            .into_iter()
            .map(|m| format!("reversed decomposition: {m}")),
    );
    lines.extend(
        d.swap_size2_children()
            .validate(host, s, t)
            .into_iter()
            .map(|m| format!("swapped decomposition: {m}")),
    );
    lines
}

fn check_claims(args: ClaimsArgs) -> Outcome {
    let Some(count) = args.batch.count else {
        let p = load_poset(&args.input)?;
        let lines = claims_report(&instance(&p)?);
        for line in &lines {
            println!("{line}");
        }
        println!("violations: {}", lines.len());
        return if lines.is_empty() {
            Ok(())
        } else {
            Err(Failure::Violated(format!("{} violations", lines.len())))
        };
    };
    let instances = generate_all(&args.batch, count)?;
    let failures: Vec<String> = with_jobs(args.batch.jobs, || {
        instances
            .par_iter()
            .filter_map(|(s, p)| match ClassifiedInstance::new(p) {
                Ok(c) => {
                    let lines = claims_report(&c);
                    (!lines.is_empty()).then(|| format!("{}: {}", label(s), lines.join("; ")))
                }
                Err(e) => Some(format!("{}: {e}", label(s))),
            })
            .collect()
    })?;
    summary(count, &failures, "")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Dim(a) => dim(a),
        Command::Realize(a) => realize(a),
        Command::Verify(a) => verify(a),
        Command::Decompose(a) => decompose(a),
        Command::Classify(a) => classify(a),
        Command::CheckClaims(a) => check_claims(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violated(msg)) => {
            eprintln!("tw2dim: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("tw2dim: {msg}");
            ExitCode::from(2)
        }
    }
}
