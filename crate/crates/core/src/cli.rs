//! The `cubic` command line.
//!
//! Subcommands: `compute`, `verify`, `bound`, `split`, `scan`. Text output is
//! aligned fixed-width tables; `--json` switches every subcommand to the
//! structured form (for `verify`, an array of certificate documents).
//!
//! Exit codes are a stable scripting contract: 0 = verified/computed,
//! 1 = a claim failed or methods disagreed, 2 = usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::congruence::{
    self, CertificateStatus, CongruenceCertificate, CongruenceClaim, Progression, SeriesSource,
};
use crate::partitions::{self, PkMethod};
use crate::radu_sellers::RsTuple;
use crate::series::EtaQuotientSpec;

/// Largest coefficient index the residue pipeline will touch without
/// `--force-depth`.
const MAX_RESIDUE_INDEX: u64 = 1_000_000;

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "cubic",
    version,
    about = "Exact arithmetic for two-color partition numbers and their congruences",
    disable_help_subcommand = true
)]
struct Cli {
    /// Emit structured JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute p_k(n) by one or all methods.
    Compute(ComputeArgs),
    /// Verify a congruence claim and emit its certificate.
    Verify(VerifyArgs),
    /// Orbit, hypothesis table, and exact bound for a verification tuple.
    Bound(BoundArgs),
    /// The 6/3 split witness of p_2(3n+2).
    Split(SplitArgs),
    /// Empirical progression scan (no proof status).
    Scan(ScanArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComputeMethod {
    Convolution,
    #[value(name = "eta-expansion")]
    EtaExpansion,
    #[value(name = "sigma-recursion")]
    SigmaRecursion,
}

impl ComputeMethod {
    fn to_pk(self) -> PkMethod {
        match self {
            ComputeMethod::Convolution => PkMethod::Convolution,
            ComputeMethod::EtaExpansion => PkMethod::EtaExpansion,
            ComputeMethod::SigmaRecursion => PkMethod::SigmaRecursion,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// Color parameter k of the family p_k (k = 2 is the cubic case).
    #[arg(long, default_value_t = 2)]
    k: u64,
    /// Single index n.
    #[arg(long)]
    n: Option<u64>,
    /// Inclusive index range `a..b`.
    #[arg(long, conflicts_with = "n")]
    range: Option<String>,
    /// Method for the single-method table.
    #[arg(long, value_enum, default_value_t = ComputeMethod::Convolution, conflicts_with = "all_methods")]
    method: ComputeMethod,
    /// Compute by every method and cross-check.
    #[arg(long)]
    all_methods: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Built-in claim set (`theorem-2.1`).
    #[arg(long)]
    preset: Option<String>,
    /// Partition family, e.g. `p2`.
    #[arg(long)]
    family: Option<String>,
    /// Eta-quotient series in `delta:exponent,...` form (alternative to --family).
    #[arg(long, conflicts_with = "family")]
    eta: Option<String>,
    /// Congruence modulus u.
    #[arg(long = "mod")]
    modulus: Option<u64>,
    /// Progression modulus m.
    #[arg(long)]
    m: Option<u64>,
    /// Progression residue t.
    #[arg(long)]
    t: Option<u64>,
    /// Verification depth n_max (default 200).
    #[arg(long)]
    depth: Option<u64>,
    /// Read the claim (JSON) from a file instead of flags.
    #[arg(long)]
    claim_file: Option<PathBuf>,
    /// Certificate output path (single claim).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Certificate output directory (presets write several files).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Override the residue-index guard of 10^6.
    #[arg(long)]
    force_depth: bool,
}

#[derive(Args)]
struct BoundArgs {
    /// Progression modulus m.
    #[arg(long)]
    m: u64,
    /// Level M of the exponent vector r.
    #[arg(long = "M")]
    level_m: u64,
    /// Level N of the companion vector r'.
    #[arg(long = "N")]
    level_n: u64,
    /// Progression residue t.
    #[arg(long)]
    t: u64,
    /// Exponent vector r as `delta:exponent,...` over divisors of M.
    #[arg(long)]
    r: String,
    /// Companion vector r' as `delta:exponent,...` over divisors of N.
    #[arg(long)]
    r_prime: String,
}

#[derive(Args)]
struct SplitArgs {
    /// The split is computed for p_2(3n+2).
    #[arg(long)]
    n: u64,
}

#[derive(Args)]
struct ScanArgs {
    /// Partition family, e.g. `p2`.
    #[arg(long)]
    family: Option<String>,
    /// Eta-quotient series (alternative to --family).
    #[arg(long, conflicts_with = "family")]
    eta: Option<String>,
    /// Congruence modulus u.
    #[arg(long = "mod")]
    modulus: u64,
    /// Progression modulus m.
    #[arg(long)]
    m: u64,
    /// Scan depth n_max.
    #[arg(long)]
    depth: u64,
    /// Override the residue-index guard of 10^6.
    #[arg(long)]
    force_depth: bool,
}

/// A CLI failure: message plus exit code.
#[derive(Debug)]
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }

    fn failed(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_FAILED,
        }
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders usage errors itself with exit code 2
            e.exit();
        }
    };
    let result = match &cli.command {
        Command::Compute(args) => run_compute(args, cli.json),
        Command::Verify(args) => run_verify(args, cli.json),
        Command::Bound(args) => run_bound(args, cli.json),
        Command::Split(args) => run_split(args, cli.json),
        Command::Scan(args) => run_scan(args, cli.json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

/// Largest big-integer table index `compute` will build.
const MAX_COMPUTE_INDEX: u64 = 100_000;

struct ComputeRow {
    n: u64,
    values: Vec<(String, String)>,
    agree: bool,
}

fn run_compute(args: &ComputeArgs, json: bool) -> Result<(), CliError> {
    if args.k == 0 {
        return Err(CliError::usage("--k must be at least 1"));
    }
    let (lo, hi) = match (&args.n, &args.range) {
        (Some(n), None) => (*n, *n),
        (None, Some(range)) => parse_range(range)?,
        (None, None) => return Err(CliError::usage("one of --n or --range is required")),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    };
    if hi > MAX_COMPUTE_INDEX {
        return Err(CliError::usage(format!(
            "index {hi} exceeds the exact-table limit {MAX_COMPUTE_INDEX}"
        )));
    }
    let methods: Vec<PkMethod> = if args.all_methods {
        vec![
            PkMethod::Convolution,
            PkMethod::EtaExpansion,
            PkMethod::SigmaRecursion,
        ]
    } else {
        vec![args.method.to_pk()]
    };
    let tables: Vec<_> = methods
        .iter()
        .map(|&m| partitions::pk_table(args.k, hi as usize, m))
        .collect();

    let mut all_agree = true;
    let mut rows = Vec::new();
    for n in lo..=hi {
        let values: Vec<(String, String)> = tables
            .iter()
            .map(|t| (t.method.to_string(), t.value(n as usize).to_string()))
            .collect();
        let agree = values.iter().all(|(_, v)| *v == values[0].1);
        all_agree &= agree;
        rows.push(ComputeRow { n, values, agree });
    }

    if json {
        println!(
            "{}",
            serde_json::json!({
                "k": args.k,
                "all_methods": args.all_methods,
                "rows": rows.iter().map(|r| serde_json::json!({
                    "n": r.n,
                    "values": r.values.iter().map(|(k, v)| (k.clone(), serde_json::Value::from(v.clone()))).collect::<serde_json::Map<String, serde_json::Value>>(),
                    "agree": r.agree,
                })).collect::<Vec<_>>(),
                "agree": all_agree,
            })
        );
    } else {
        let widths: Vec<usize> = (0..rows[0].values.len())
            .map(|col| {
                rows.iter()
                    .map(|r| r.values[col].1.len())
                    .max()
                    .unwrap_or(0)
                    .max(rows[0].values[col].0.len())
            })
            .collect();
        let mut header = format!("{:>8}", "n");
        for ((name, _), width) in rows[0].values.iter().zip(&widths) {
            let _ = write!(header, "  {name:>width$}");
        }
        if args.all_methods {
            header.push_str("  status");
        }
        println!("{header}");
        for row in &rows {
            let mut line = format!("{:>8}", row.n);
            for ((_, v), width) in row.values.iter().zip(&widths) {
                let _ = write!(line, "  {v:>width$}");
            }
            if args.all_methods {
                line.push_str(if row.agree { "  AGREE" } else { "  DISAGREE" });
            }
            println!("{line}");
        }
    }

    if all_agree {
        Ok(())
    } else {
        Err(CliError::failed(
            "methods disagree; this signals an internal bug",
        ))
    }
}

fn parse_range(range: &str) -> Result<(u64, u64), CliError> {
    let (lo, hi) = range.split_once("..").ok_or_else(|| {
        CliError::usage(format!("--range wants `a..b` (inclusive), got `{range}`"))
    })?;
    let lo: u64 = lo
        .parse()
        .map_err(|_| CliError::usage(format!("bad range start `{lo}`")))?;
    let hi: u64 = hi
        .parse()
        .map_err(|_| CliError::usage(format!("bad range end `{hi}`")))?;
    if lo > hi {
        return Err(CliError::usage(format!("empty range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn run_verify(args: &VerifyArgs, json: bool) -> Result<(), CliError> {
    let claims: Vec<(CongruenceClaim, bool)> = if let Some(preset) = &args.preset {
        let claims = congruence::preset_claims(preset)
            .ok_or_else(|| CliError::usage(format!("unknown preset `{preset}`")))?;
        claims.into_iter().map(|c| (c, true)).collect()
    } else if let Some(path) = &args.claim_file {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::usage(format!("cannot read claim file {}: {e}", path.display()))
        })?;
        let claim: CongruenceClaim = serde_json::from_str(&text).map_err(|e| {
            CliError::usage(format!("malformed claim file {}: {e}", path.display()))
        })?;
        vec![(claim, false)]
    } else {
        vec![(claim_from_flags(args)?, false)]
    };

    let mut all_pass = true;
    let mut certificates = Vec::new();
    for (claim, from_preset) in &claims {
        guard_depth(claim.progression.m, claim.n_max, args.force_depth)?;
        let mut cert =
            congruence::verify_progression(claim).map_err(|e| CliError::usage(e.to_string()))?;
        if *from_preset {
            congruence::annotate_preset_certificate(&mut cert);
        }
        let path = certificate_path(args, claim, claims.len())?;
        std::fs::write(&path, cert.to_json())
            .map_err(|e| CliError::failed(format!("cannot write {}: {e}", path.display())))?;

        let pass = cert.all_zero
            && (claim.tuple.is_none() || cert.status == CertificateStatus::LemmaComplete);
        all_pass &= pass;

        if json {
            certificates.push(cert);
        } else {
            print_verify_summary(&cert, &path, pass);
        }
    }
    // structured mode emits one JSON array regardless of claim count
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&certificates).expect("certificates serialize")
        );
    }

    if all_pass {
        Ok(())
    } else {
        Err(CliError::failed("one or more claims failed verification"))
    }
}

fn claim_from_flags(args: &VerifyArgs) -> Result<CongruenceClaim, CliError> {
    let series = series_source(args.family.as_deref(), args.eta.as_deref())?;
    let modulus = args
        .modulus
        .ok_or_else(|| CliError::usage("--mod is required"))?;
    let m = args.m.ok_or_else(|| CliError::usage("--m is required"))?;
    let t = args.t.ok_or_else(|| CliError::usage("--t is required"))?;
    Ok(CongruenceClaim {
        series,
        modulus,
        progression: Progression { m, t },
        n_max: args
            .depth
            .unwrap_or_else(|| congruence::default_depth(None)),
        tuple: None,
    })
}

fn series_source(family: Option<&str>, eta: Option<&str>) -> Result<SeriesSource, CliError> {
    match (family, eta) {
        (Some(f), None) => {
            let k: u64 = f
                .strip_prefix('p')
                .and_then(|rest| rest.parse().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| {
                    CliError::usage(format!("unknown family `{f}` (expected p1, p2, p3, ...)"))
                })?;
            Ok(SeriesSource::TwoColor { k })
        }
        (None, Some(spec)) => {
            spec.parse::<EtaQuotientSpec>()
                .map_err(|e| CliError::usage(e.to_string()))?;
            Ok(SeriesSource::Eta {
                spec: spec.to_string(),
            })
        }
        (None, None) => Err(CliError::usage("one of --family or --eta is required")),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    }
}

fn guard_depth(m: u64, depth: u64, force: bool) -> Result<(), CliError> {
    let max_index = m
        .checked_mul(depth)
        .and_then(|v| v.checked_add(m.saturating_sub(1)))
        .unwrap_or(u64::MAX);
    if max_index > MAX_RESIDUE_INDEX && !force {
        return Err(CliError::usage(format!(
            "this run would touch coefficient index {max_index} (> {MAX_RESIDUE_INDEX}); \
             pass --force-depth to proceed"
        )));
    }
    Ok(())
}

fn certificate_path(
    args: &VerifyArgs,
    claim: &CongruenceClaim,
    total: usize,
) -> Result<PathBuf, CliError> {
    if let Some(out) = &args.out {
        if total > 1 {
            return Err(CliError::usage(
                "--out works for a single claim; use --out-dir for presets",
            ));
        }
        return Ok(out.clone());
    }
    let dir = args.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let family = match &claim.series {
        SeriesSource::TwoColor { k } => format!("p{k}"),
        SeriesSource::Eta { .. } => "eta".to_string(),
    };
    Ok(dir.join(format!(
        "certificate-{family}-mod{}-m{}-t{}.json",
        claim.modulus, claim.progression.m, claim.progression.t
    )))
}

fn print_verify_summary(cert: &CongruenceCertificate, path: &Path, pass: bool) {
    let claim = &cert.claim;
    let status = match cert.status {
        CertificateStatus::LemmaComplete => "lemma-complete",
        CertificateStatus::Empirical => "empirical",
    };
    println!(
        "{}  {}({}n+{}) = 0 (mod {})  n <= {}  [{}]",
        if pass { "PASS" } else { "FAIL" },
        claim.series,
        claim.progression.m,
        claim.progression.t,
        claim.modulus,
        cert.verified_through,
        status
    );
    if let Some(ev) = &cert.pipeline_evidence {
        println!(
            "      orbit {{{}}}  v = {}  floor(v) = {}  hypotheses {}",
            join(&ev.orbit),
            ev.v,
            ev.floor_v,
            if ev.hypotheses.pass { "pass" } else { "FAIL" }
        );
    }
    if let Some(first) = cert.failures.first() {
        println!(
            "      first failure: n = {} (index {}), residue {}",
            first.n,
            claim.progression.m * first.n + claim.progression.t,
            first.residue
        );
    }
    println!("      certificate: {}", path.display());
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

fn run_bound(args: &BoundArgs, json: bool) -> Result<(), CliError> {
    let r = EtaQuotientSpec::with_level(args.level_m, parse_spec_pairs(&args.r, "--r")?)
        .map_err(|e| CliError::usage(format!("--r: {e}")))?;
    let r_prime =
        EtaQuotientSpec::with_level(args.level_n, parse_spec_pairs(&args.r_prime, "--r-prime")?)
            .map_err(|e| CliError::usage(format!("--r-prime: {e}")))?;
    let tuple =
        RsTuple::new(args.m, args.t, r, r_prime).map_err(|e| CliError::usage(e.to_string()))?;

    let report = congruence::bound_report(&tuple);

    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
        return Ok(());
    }

    println!("orbit    {{{}}}", join(&report.orbit));
    println!("t_min    {}", report.t_min);
    println!(
        "{:>6}  {:>14}  {:>14}  {:>14}  ok",
        "delta", "p_mr", "p_star", "sum"
    );
    for row in &report.hypotheses.rows {
        println!(
            "{:>6}  {:>14}  {:>14}  {:>14}  {}",
            row.delta,
            row.p_mr,
            row.p_star,
            row.sum,
            if row.nonnegative { "yes" } else { "NO" }
        );
    }
    println!(
        "hypotheses {}",
        if report.hypotheses.pass {
            "pass"
        } else {
            "FAIL"
        }
    );
    println!("v        {}", report.v);
    println!("floor(v) {}", report.floor_v);
    Ok(())
}

fn parse_spec_pairs(s: &str, flag: &str) -> Result<Vec<(u64, i64)>, CliError> {
    let spec: EtaQuotientSpec = s
        .parse()
        .map_err(|e| CliError::usage(format!("{flag}: {e}")))?;
    Ok(spec.terms().map(|(&d, &r)| (d, r)).collect())
}

// ---------------------------------------------------------------------------
// split
// ---------------------------------------------------------------------------

fn run_split(args: &SplitArgs, json: bool) -> Result<(), CliError> {
    let witness = partitions::chan_split(args.n as usize);
    let index = 3 * args.n + 2;
    let recombined =
        num_bigint::BigInt::from(6) * &witness.a + num_bigint::BigInt::from(3) * &witness.b;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "n": witness.n,
                "index": index,
                "A": witness.a.to_string(),
                "B": witness.b.to_string(),
                "six_a_plus_three_b": recombined.to_string(),
                "p2": witness.p2.to_string(),
                "equal_triple_solutions": witness.equal_triples,
            })
        );
        return Ok(());
    }
    println!("A               {}", witness.a);
    println!("B               {}", witness.b);
    println!("6A + 3B         {recombined}");
    println!("p2({index})           {}", witness.p2);
    println!("i=j=k solutions: {}", witness.equal_triples);
    Ok(())
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

fn run_scan(args: &ScanArgs, json: bool) -> Result<(), CliError> {
    let source = series_source(args.family.as_deref(), args.eta.as_deref())?;
    guard_depth(args.m, args.depth, args.force_depth)?;
    let survivors = congruence::scan(&source, args.modulus, args.m, args.depth)
        .map_err(|e| CliError::usage(e.to_string()))?;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "series": source.to_string(),
                "modulus": args.modulus,
                "m": args.m,
                "depth": args.depth,
                "survivors": survivors,
                "empirical": true,
            })
        );
    } else {
        println!("EMPIRICAL — no proof status");
        println!(
            "survivors t with {}({}n+t) = 0 (mod {}) for all n <= {}: {{{}}}",
            source,
            args.m,
            args.modulus,
            args.depth,
            join(&survivors)
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0..5").unwrap(), (0, 5));
        assert_eq!(parse_range("7..7").unwrap(), (7, 7));
        assert!(parse_range("5..0").is_err());
        assert!(parse_range("x..3").is_err());
        assert!(parse_range("3").is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!(
            series_source(Some("p2"), None).unwrap(),
            SeriesSource::TwoColor { k: 2 }
        );
        assert_eq!(
            series_source(Some("p11"), None).unwrap(),
            SeriesSource::TwoColor { k: 11 }
        );
        assert!(series_source(Some("q2"), None).is_err());
        assert!(series_source(Some("p0"), None).is_err());
        assert!(series_source(None, None).is_err());
        assert!(matches!(
            series_source(None, Some("1:10,2:-1")).unwrap(),
            SeriesSource::Eta { .. }
        ));
        assert!(series_source(None, Some("junk")).is_err());
    }

    #[test]
    fn depth_guard() {
        assert!(guard_depth(297, 300, false).is_ok());
        assert!(guard_depth(297, 1_000_000, false).is_err());
        assert!(guard_depth(297, 1_000_000, true).is_ok());
    }
}
