//! Congruence claims on arithmetic progressions, their verification, and
//! machine-readable certificates.
//!
//! A [`CongruenceClaim`] says: the coefficients `c(mn + t)` of some series
//! vanish mod `u` for all `n <= n_max`. Verification computes the residue
//! stream in `Z/u` and records every violation. A claim may carry a
//! verification tuple; when it does, the orbit/representative/bound pipeline
//! runs as well, and the finite coefficient check through `floor(v)` is
//! performed on the tuple's own eta quotient for **every** orbit member.
//! Only when all of that passes is the certificate marked lemma-complete;
//! anything less is labeled empirical. Admissibility of the tuple itself is
//! asserted input, and certificates carry that flag.
//!
//! Certificates serialize to a single stable JSON document: fixed key order,
//! residues normalized to `[0, u)`, rationals rendered `num/den`, no
//! timestamps. Re-running the same claim byte-reproduces the certificate;
//! the `generator_fingerprint` is a SHA-256 over the canonicalized inputs.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::partitions::{pk_table, PkMethod};
use crate::radu_sellers::{self, RsError, RsTuple};
use crate::series::{self, EtaQuotientSpec, SeriesError};

/// Cap on the recorded failure list; the smallest witnesses always come
/// first, so truncation never loses the first failing `n`.
const MAX_RECORDED_FAILURES: usize = 1000;

const CERTIFICATE_SCHEMA: &str = "cubic.certificate/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    Series(SeriesError),
    Tuple(RsError),
    InvalidClaim(String),
}

impl fmt::Display for CongruenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceError::Series(e) => write!(f, "series error: {e}"),
            CongruenceError::Tuple(e) => write!(f, "tuple error: {e}"),
            CongruenceError::InvalidClaim(msg) => write!(f, "invalid claim: {msg}"),
        }
    }
}

impl std::error::Error for CongruenceError {}

impl From<SeriesError> for CongruenceError {
    fn from(e: SeriesError) -> Self {
        CongruenceError::Series(e)
    }
}

impl From<RsError> for CongruenceError {
    fn from(e: RsError) -> Self {
        CongruenceError::Tuple(e)
    }
}

/// The coefficient family a claim is about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SeriesSource {
    /// The two-color family `p_k` (second color on parts divisible by `k`).
    #[serde(rename = "two-color")]
    TwoColor { k: u64 },
    /// An eta-quotient-style product given in `delta:exponent` text form.
    #[serde(rename = "eta")]
    Eta { spec: String },
}

impl SeriesSource {
    /// The expansion spec for this source.
    pub fn to_spec(&self) -> Result<EtaQuotientSpec, CongruenceError> {
        match self {
            SeriesSource::TwoColor { k } => {
                if *k == 0 {
                    return Err(CongruenceError::InvalidClaim(
                        "family p_k needs k >= 1".into(),
                    ));
                }
                Ok(EtaQuotientSpec::from_pairs([(1, -1), (*k, -1)])?)
            }
            SeriesSource::Eta { spec } => Ok(spec.parse()?),
        }
    }

    fn canonical(&self) -> Result<String, CongruenceError> {
        match self {
            SeriesSource::TwoColor { k } => Ok(format!("two-color:k={k}")),
            SeriesSource::Eta { .. } => Ok(format!("eta:{}", self.to_spec()?)),
        }
    }
}

impl fmt::Display for SeriesSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesSource::TwoColor { k } => write!(f, "p{k}"),
            SeriesSource::Eta { spec } => write!(f, "eta({spec})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    pub m: u64,
    pub t: u64,
}

/// Wire form of a verification tuple; `r` parses at level `M`, `r_prime` at
/// level `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleSpec {
    pub m: u64,
    #[serde(rename = "M")]
    pub level_m: u64,
    #[serde(rename = "N")]
    pub level_n: u64,
    pub t: u64,
    pub r: String,
    pub r_prime: String,
    #[serde(default = "default_true")]
    pub asserted_delta_star: bool,
}

fn default_true() -> bool {
    true
}

impl TupleSpec {
    pub fn to_tuple(&self) -> Result<RsTuple, CongruenceError> {
        let r = EtaQuotientSpec::with_level(self.level_m, parse_pairs(&self.r)?)?;
        let r_prime = EtaQuotientSpec::with_level(self.level_n, parse_pairs(&self.r_prime)?)?;
        let mut tuple = RsTuple::new(self.m, self.t, r, r_prime)?;
        tuple.asserted_delta_star = self.asserted_delta_star;
        Ok(tuple)
    }

    fn canonical(&self) -> Result<String, CongruenceError> {
        let tuple = self.to_tuple()?;
        Ok(format!(
            "m={},M={},N={},t={},r={},r_prime={},asserted={}",
            tuple.m,
            tuple.level_m(),
            tuple.level_n(),
            tuple.t,
            tuple.r,
            tuple.r_prime,
            tuple.asserted_delta_star
        ))
    }
}

fn parse_pairs(s: &str) -> Result<Vec<(u64, i64)>, CongruenceError> {
    let spec: EtaQuotientSpec = s.parse()?;
    Ok(spec.terms().map(|(&d, &r)| (d, r)).collect())
}

/// A congruence claim: coefficients of `series` on the progression
/// `m*n + t` vanish mod `modulus` for all `n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceClaim {
    pub series: SeriesSource,
    pub modulus: u64,
    pub progression: Progression,
    pub n_max: u64,
    /// Optional verification tuple grounding the claim in the finite-check
    /// lemma; when present, `n_max` must reach at least `floor(v)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<TupleSpec>,
}

impl CongruenceClaim {
    fn validate(&self) -> Result<(), CongruenceError> {
        if self.modulus < 2 {
            return Err(CongruenceError::InvalidClaim(format!(
                "modulus {} is too small",
                self.modulus
            )));
        }
        if self.progression.m == 0 {
            return Err(CongruenceError::InvalidClaim(
                "progression modulus must be positive".into(),
            ));
        }
        if self.progression.t >= self.progression.m {
            return Err(CongruenceError::InvalidClaim(format!(
                "residue {} is not in [0, {})",
                self.progression.t, self.progression.m
            )));
        }
        if let Some(tuple) = &self.tuple {
            if tuple.m != self.progression.m || tuple.t != self.progression.t {
                return Err(CongruenceError::InvalidClaim(format!(
                    "tuple progression ({}, {}) does not match claim progression ({}, {})",
                    tuple.m, tuple.t, self.progression.m, self.progression.t
                )));
            }
        }
        Ok(())
    }

    fn canonical(&self) -> Result<String, CongruenceError> {
        let tuple = match &self.tuple {
            Some(t) => t.canonical()?,
            None => "none".to_string(),
        };
        Ok(format!(
            "{}|series={}|modulus={}|m={}|t={}|n_max={}|tuple={}",
            CERTIFICATE_SCHEMA,
            self.series.canonical()?,
            self.modulus,
            self.progression.m,
            self.progression.t,
            self.n_max,
            tuple
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub n: u64,
    pub residue: u64,
}

/// Proof status of a certificate. `LemmaComplete` means: hypotheses pass at
/// every representative, the tuple's own coefficients vanish through
/// `floor(v)` on the whole orbit, and the claimed residue stream is clean;
/// unconditional modulo the asserted tuple admissibility. Everything else is
/// `Empirical`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateStatus {
    #[serde(rename = "lemma-complete")]
    LemmaComplete,
    #[serde(rename = "empirical")]
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisRowWire {
    pub delta: u64,
    pub gamma: String,
    pub p_mr: String,
    pub p_star: String,
    pub sum: String,
    pub nonnegative: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisEvidence {
    pub pass: bool,
    pub rows: Vec<HypothesisRowWire>,
}

/// Finite check of one orbit member on the tuple's own series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCheck {
    pub t_prime: u64,
    pub depth: u64,
    pub all_zero: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineEvidence {
    pub tuple: TupleSpec,
    pub orbit: Vec<u64>,
    pub t_min: u64,
    pub v: String,
    pub floor_v: i64,
    pub hypotheses: HypothesisEvidence,
    /// Residue checks of the tuple's eta quotient through `floor(v)`, one
    /// per orbit member.
    pub tuple_series_checks: Vec<OrbitCheck>,
    pub asserted_delta_star: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The verification record for one claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCertificate {
    pub schema: String,
    pub claim: CongruenceClaim,
    pub verified_through: u64,
    pub all_zero: bool,
    pub failures: Vec<Failure>,
    pub failures_truncated: bool,
    pub status: CertificateStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline_evidence: Option<PipelineEvidence>,
    pub generator_fingerprint: String,
}

impl CongruenceCertificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Default verification depth: the bound's floor when one is known, and
/// never less than 200.
pub fn default_depth(floor_v: Option<i64>) -> u64 {
    floor_v.unwrap_or(0).max(0).max(200) as u64
}

/// Verifies a claim and issues its certificate.
///
/// The residue stream of the claimed series is computed in `Z/u` for
/// `n <= n_max`. With a tuple attached, the orbit, hypothesis table, and
/// bound are computed, the tuple's own series is checked through `floor(v)`
/// on every orbit member, and the claim is rejected as inconsistent when
/// `n_max < floor(v)`.
pub fn verify_progression(
    claim: &CongruenceClaim,
) -> Result<CongruenceCertificate, CongruenceError> {
    claim.validate()?;
    let m = claim.progression.m;
    let t = claim.progression.t;
    let u = claim.modulus;

    let evidence = match &claim.tuple {
        Some(tuple_spec) => Some(build_evidence(claim, tuple_spec)?),
        None => None,
    };

    let spec = claim.series.to_spec()?;
    let order = progression_order(m, claim.n_max, t)?;
    let residues = series::expand_mod(&spec, order, u)?;
    let (failures, truncated) = collect_failures(&residues, m, t, claim.n_max);
    let all_zero = failures.is_empty();

    let status = match &evidence {
        Some(ev)
            if all_zero
                && ev.hypotheses.pass
                && ev.tuple_series_checks.iter().all(|c| c.all_zero) =>
        {
            CertificateStatus::LemmaComplete
        }
        _ => CertificateStatus::Empirical,
    };

    Ok(CongruenceCertificate {
        schema: CERTIFICATE_SCHEMA.to_string(),
        claim: claim.clone(),
        verified_through: claim.n_max,
        all_zero,
        failures,
        failures_truncated: truncated,
        status,
        pipeline_evidence: evidence,
        generator_fingerprint: fingerprint(claim)?,
    })
}

fn build_evidence(
    claim: &CongruenceClaim,
    tuple_spec: &TupleSpec,
) -> Result<PipelineEvidence, CongruenceError> {
    let tuple = tuple_spec.to_tuple()?;
    let orbit: Vec<u64> = radu_sellers::orbit(&tuple).into_iter().collect();
    let bound = radu_sellers::v_bound(&tuple);
    if (claim.n_max as i128) < bound.floor as i128 {
        return Err(CongruenceError::InvalidClaim(format!(
            "depth {} is below the bound floor {}; the finite check would be inconclusive",
            claim.n_max, bound.floor
        )));
    }
    let report = radu_sellers::check_hypotheses(&tuple);
    let rows = report
        .rows
        .iter()
        .map(|row| HypothesisRowWire {
            delta: row.delta,
            gamma: row.gamma.to_string(),
            p_mr: row.p_mr.to_string(),
            p_star: row.p_star.to_string(),
            sum: row.sum.to_string(),
            nonnegative: row.nonnegative,
        })
        .collect();

    // Finite check on the tuple's own series, the object the lemma speaks
    // about, through floor(v) for every orbit member.
    let depth = bound.floor.max(0) as u64;
    let max_t = orbit.iter().copied().max().unwrap_or(0);
    let order = progression_order(tuple.m, depth, max_t)?;
    let residues = series::expand_mod(&tuple.r, order, claim.modulus)?;
    let tuple_series_checks = orbit
        .iter()
        .map(|&t_prime| {
            let (failures, _) = collect_failures(&residues, tuple.m, t_prime, depth);
            OrbitCheck {
                t_prime,
                depth,
                all_zero: failures.is_empty(),
                first_failure: failures.first().copied(),
            }
        })
        .collect();

    Ok(PipelineEvidence {
        tuple: tuple_spec.clone(),
        orbit,
        t_min: bound.t_min,
        v: bound.v.to_string(),
        floor_v: bound.floor,
        hypotheses: HypothesisEvidence {
            pass: report.pass,
            rows,
        },
        tuple_series_checks,
        asserted_delta_star: tuple.asserted_delta_star,
        note: None,
    })
}

/// Highest coefficient index a progression scan needs, `m * n_max + t`,
/// checked against address-space overflow.
fn progression_order(m: u64, n_max: u64, t: u64) -> Result<usize, CongruenceError> {
    m.checked_mul(n_max)
        .and_then(|v| v.checked_add(t))
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| {
            CongruenceError::InvalidClaim(format!(
                "progression index {m} * {n_max} + {t} overflows the addressable range"
            ))
        })
}

fn collect_failures(
    residues: &series::ResidueSeries,
    m: u64,
    t: u64,
    n_max: u64,
) -> (Vec<Failure>, bool) {
    let mut failures = Vec::new();
    let mut truncated = false;
    // every index through n_max is examined; the cap only limits recording
    for n in 0..=n_max {
        let idx = (m * n + t) as usize;
        let residue = residues.coeff(idx);
        if residue != 0 {
            if failures.len() < MAX_RECORDED_FAILURES {
                failures.push(Failure { n, residue });
            } else {
                truncated = true;
            }
        }
    }
    (failures, truncated)
}

fn fingerprint(claim: &CongruenceClaim) -> Result<String, CongruenceError> {
    let mut hasher = Sha256::new();
    hasher.update(claim.canonical()?.as_bytes());
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(7 + 64);
    hex.push_str("sha256:");
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    Ok(hex)
}

/// Built-in claim sets reproducing the headline congruences. The
/// `theorem-2.1` preset carries both mod-11 tuples at depth 300; the
/// companion exponent vector of the `t = 161` tuple is the `t = 62` one,
/// which reproduces the same bound floor and is flagged in the evidence.
pub fn preset_claims(name: &str) -> Option<Vec<CongruenceClaim>> {
    match name {
        "theorem-2.1" => Some(
            [62u64, 161]
                .into_iter()
                .map(|t| CongruenceClaim {
                    series: SeriesSource::TwoColor { k: 2 },
                    modulus: 11,
                    progression: Progression { m: 297, t },
                    n_max: 300,
                    tuple: Some(TupleSpec {
                        m: 297,
                        level_m: 22,
                        level_n: 66,
                        t,
                        r: "1:10,2:-1,11:-1".into(),
                        r_prime: "1:4,2:2,22:1".into(),
                        asserted_delta_star: true,
                    }),
                })
                .collect(),
        ),
        _ => None,
    }
}

/// Marks preset evidence with the companion-vector reuse note.
pub fn annotate_preset_certificate(cert: &mut CongruenceCertificate) {
    if let Some(ev) = &mut cert.pipeline_evidence {
        if cert.claim.progression.t == 161 {
            ev.note = Some("companion exponent vector r' reused from the t=62 tuple".into());
        }
    }
}

/// Structured form of a bound computation: the tuple, its orbit, the exact
/// bound, and the hypothesis table. Shared by the CLI's structured output
/// and the C API.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub tuple: TupleSpec,
    pub orbit: Vec<u64>,
    pub t_min: u64,
    pub v: String,
    pub floor_v: i64,
    pub hypotheses: HypothesisEvidence,
}

pub fn bound_report(tuple: &RsTuple) -> BoundReport {
    let orbit: Vec<u64> = radu_sellers::orbit(tuple).into_iter().collect();
    let bound = radu_sellers::v_bound(tuple);
    let report = radu_sellers::check_hypotheses(tuple);
    BoundReport {
        tuple: TupleSpec {
            m: tuple.m,
            level_m: tuple.level_m(),
            level_n: tuple.level_n(),
            t: tuple.t,
            r: tuple.r.to_string(),
            r_prime: tuple.r_prime.to_string(),
            asserted_delta_star: tuple.asserted_delta_star,
        },
        orbit,
        t_min: bound.t_min,
        v: bound.v.to_string(),
        floor_v: bound.floor,
        hypotheses: HypothesisEvidence {
            pass: report.pass,
            rows: report
                .rows
                .iter()
                .map(|row| HypothesisRowWire {
                    delta: row.delta,
                    gamma: row.gamma.to_string(),
                    p_mr: row.p_mr.to_string(),
                    p_star: row.p_star.to_string(),
                    sum: row.sum.to_string(),
                    nonnegative: row.nonnegative,
                })
                .collect(),
        },
    }
}

/// Outcome of a coefficientwise identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked_through: u64,
    pub ok: bool,
    /// `(n, lhs, rhs)` of the first mismatch, rendered in decimal.
    pub first_mismatch: Option<(u64, String, String)>,
}

/// Checks, over the integers, that coefficient `n` of
/// `3 * (q^3;q^3)^3 (q^6;q^6)^3 / ((q;q)^4 (q^2;q^2)^4)` equals `p_2(3n+2)`
/// for `0 <= n <= n_max`. The right side comes from the convolution table,
/// an independent pipeline from the eta expansion on the left.
pub fn verify_chan_identity(n_max: u64) -> IdentityReport {
    let spec = EtaQuotientSpec::from_pairs([(1, -4), (2, -4), (3, 3), (6, 3)])
        .expect("well-formed quotient");
    let lhs = series::expand(&spec, n_max as usize);
    let p2 = pk_table(2, (3 * n_max + 2) as usize, PkMethod::Convolution);
    for n in 0..=n_max {
        let left = lhs.coeff(n as usize) * BigInt::from(3);
        let right = p2.value((3 * n + 2) as usize);
        if &left != right {
            return IdentityReport {
                checked_through: n_max,
                ok: false,
                first_mismatch: Some((n, left.to_string(), right.to_string())),
            };
        }
    }
    IdentityReport {
        checked_through: n_max,
        ok: true,
        first_mismatch: None,
    }
}

/// Outcome of the series-reduction comparison mod `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub modulus: u64,
    pub checked_through: u64,
    pub ok: bool,
    pub first_mismatch: Option<(u64, u64, u64)>,
}

/// Compares `p_2(n)` with the coefficients of
/// `(q;q)^10 / ((q^2;q^2)(q^11;q^11))` mod `u` for `n <= n_max`, via two
/// independent pipelines: big-integer convolution reduced on one side,
/// residue-ring eta expansion on the other.
///
/// The comparison is an identity exactly when `u = 11`; other moduli are
/// negative controls and are expected to fail.
pub fn reduction_report(modulus: u64, n_max: u64) -> Result<ReductionReport, CongruenceError> {
    if modulus < 2 {
        return Err(CongruenceError::Series(SeriesError::ModulusTooSmall(
            modulus,
        )));
    }
    let spec =
        EtaQuotientSpec::from_pairs([(1, 10), (2, -1), (11, -1)]).expect("well-formed quotient");
    let g = series::expand_mod(&spec, n_max as usize, modulus)?;
    let p2 = pk_table(2, n_max as usize, PkMethod::Convolution);
    let big_u = BigInt::from(modulus);
    for n in 0..=n_max {
        let lhs = residue_of(p2.value(n as usize), &big_u);
        let rhs = g.coeff(n as usize);
        if lhs != rhs {
            return Ok(ReductionReport {
                modulus,
                checked_through: n_max,
                ok: false,
                first_mismatch: Some((n, lhs, rhs)),
            });
        }
    }
    Ok(ReductionReport {
        modulus,
        checked_through: n_max,
        ok: true,
        first_mismatch: None,
    })
}

/// The mod-11 instance of [`reduction_report`].
pub fn verify_mod11_reduction(n_max: u64) -> ReductionReport {
    reduction_report(11, n_max).expect("modulus 11 is valid")
}

fn residue_of(value: &BigInt, modulus: &BigInt) -> u64 {
    let mut r = value % modulus;
    if r < BigInt::zero() {
        r += modulus;
    }
    u64::try_from(&r).expect("residue fits a machine word")
}

/// Empirical progression scan: all residues `t in [0, m)` such that
/// `c(mn + t) = 0 (mod u)` for every `n <= n_max`. Survivors carry no proof
/// status whatsoever.
pub fn scan(
    source: &SeriesSource,
    modulus: u64,
    m: u64,
    n_max: u64,
) -> Result<Vec<u64>, CongruenceError> {
    if m == 0 {
        return Err(CongruenceError::InvalidClaim(
            "progression modulus must be positive".into(),
        ));
    }
    if modulus < 2 {
        return Err(CongruenceError::InvalidClaim(format!(
            "modulus {modulus} is too small"
        )));
    }
    let spec = source.to_spec()?;
    let order = progression_order(m, n_max, m - 1)?;
    let residues = series::expand_mod(&spec, order, modulus)?;
    let survivors = (0..m)
        .filter(|&t| (0..=n_max).all(|n| residues.coeff((m * n + t) as usize) == 0))
        .collect();
    Ok(survivors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::PkMethod;

    fn p2_claim(modulus: u64, m: u64, t: u64, n_max: u64) -> CongruenceClaim {
        CongruenceClaim {
            series: SeriesSource::TwoColor { k: 2 },
            modulus,
            progression: Progression { m, t },
            n_max,
            tuple: None,
        }
    }

    #[test]
    fn mod3_progression_is_clean() {
        let cert = verify_progression(&p2_claim(3, 3, 2, 300)).unwrap();
        assert!(cert.all_zero);
        assert!(cert.failures.is_empty());
        assert_eq!(cert.status, CertificateStatus::Empirical);
        assert_eq!(cert.verified_through, 300);
    }

    #[test]
    fn preset_claims_verify_lemma_complete() {
        let mut claims = preset_claims("theorem-2.1").unwrap();
        assert_eq!(claims.len(), 2);
        // depth 88 suffices for the lemma; the full preset depth is exercised
        // by the acceptance suite
        for claim in &mut claims {
            claim.n_max = 88;
            let cert = verify_progression(claim).unwrap();
            assert!(cert.all_zero, "t = {}", claim.progression.t);
            assert_eq!(cert.status, CertificateStatus::LemmaComplete);
            let ev = cert.pipeline_evidence.as_ref().unwrap();
            assert_eq!(ev.floor_v, 88);
            assert_eq!(ev.orbit, vec![claim.progression.t]);
            assert!(ev.hypotheses.pass);
            assert_eq!(ev.tuple_series_checks.len(), 1);
            assert!(ev.tuple_series_checks[0].all_zero);
            assert!(ev.asserted_delta_star);
        }
        assert!(preset_claims("no-such-preset").is_none());
    }

    #[test]
    fn neighboring_progression_fails_with_witness() {
        let cert = verify_progression(&p2_claim(11, 297, 63, 88)).unwrap();
        assert!(!cert.all_zero);
        assert!(!cert.failures.is_empty());
        assert_eq!(cert.status, CertificateStatus::Empirical);
        // the witness is the smallest failing n
        let first = cert.failures[0];
        for f in &cert.failures {
            assert!(f.n >= first.n);
            assert!(f.residue > 0 && f.residue < 11);
        }
    }

    #[test]
    fn depth_below_bound_floor_is_rejected() {
        let mut claim = preset_claims("theorem-2.1").unwrap().remove(0);
        claim.n_max = 50;
        assert!(matches!(
            verify_progression(&claim),
            Err(CongruenceError::InvalidClaim(_))
        ));
    }

    #[test]
    fn mismatched_tuple_is_rejected() {
        let mut claim = preset_claims("theorem-2.1").unwrap().remove(0);
        claim.progression.t = 63;
        assert!(matches!(
            verify_progression(&claim),
            Err(CongruenceError::InvalidClaim(_))
        ));
    }

    #[test]
    fn invalid_claims_are_rejected() {
        assert!(verify_progression(&p2_claim(1, 3, 2, 10)).is_err());
        assert!(verify_progression(&p2_claim(3, 3, 3, 10)).is_err());
        assert!(verify_progression(&p2_claim(3, 0, 0, 10)).is_err());
    }

    #[test]
    fn failed_hypotheses_demote_to_empirical() {
        // A deliberately bad companion vector drives the representative sums
        // negative; everything still verifies numerically, but the
        // certificate must not claim lemma support.
        let mut claim = preset_claims("theorem-2.1").unwrap().remove(0);
        claim.tuple.as_mut().unwrap().r_prime = "1:-100".into();
        let cert = verify_progression(&claim).unwrap();
        assert!(cert.all_zero);
        assert_eq!(cert.status, CertificateStatus::Empirical);
        assert!(!cert.pipeline_evidence.unwrap().hypotheses.pass);
    }

    #[test]
    fn certificates_are_deterministic() {
        let claim = p2_claim(3, 3, 2, 120);
        let a = verify_progression(&claim).unwrap();
        let b = verify_progression(&claim).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.generator_fingerprint.starts_with("sha256:"));

        // round-trip: parse the emitted certificate, re-verify its claim
        let parsed = CongruenceCertificate::from_json(&a.to_json()).unwrap();
        let again = verify_progression(&parsed.claim).unwrap();
        assert_eq!(again.generator_fingerprint, a.generator_fingerprint);
        assert_eq!(again.to_json(), a.to_json());
    }

    #[test]
    fn chan_identity_holds_through_60() {
        let report = verify_chan_identity(60);
        assert!(report.ok, "first mismatch: {:?}", report.first_mismatch);
        assert!(verify_chan_identity(0).ok);
    }

    #[test]
    fn chan_identity_leading_value_is_exactly_3() {
        let spec = EtaQuotientSpec::from_pairs([(1, -4), (2, -4), (3, 3), (6, 3)]).unwrap();
        let lhs = series::expand(&spec, 0);
        assert_eq!(lhs.coeff(0) * 3, BigInt::from(3));
    }

    #[test]
    fn mod11_reduction_holds_and_mod7_control_fails() {
        let ok = verify_mod11_reduction(120);
        assert!(ok.ok);

        let control = reduction_report(7, 50).unwrap();
        assert!(!control.ok, "the reduction is specific to 11");
        let (n, lhs, rhs) = control.first_mismatch.unwrap();
        assert!(n <= 50);
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn cross_pipeline_residue_streams_agree() {
        let table = pk_table(2, 500, PkMethod::Convolution);
        let spec = EtaQuotientSpec::from_pairs([(1, -1), (2, -1)]).unwrap();
        for u in [3u64, 11] {
            let stream = series::expand_mod(&spec, 500, u).unwrap();
            let big_u = BigInt::from(u);
            for n in 0..=500usize {
                assert_eq!(
                    residue_of(table.value(n), &big_u),
                    stream.coeff(n),
                    "u={u} n={n}"
                );
            }
        }
    }

    #[test]
    fn scan_examples() {
        let p2 = SeriesSource::TwoColor { k: 2 };
        assert_eq!(scan(&p2, 3, 3, 300).unwrap(), vec![2]);

        let survivors = scan(&p2, 11, 297, 88).unwrap();
        assert!(survivors.contains(&62));
        assert!(survivors.contains(&161));

        // m = 1: single progression; p_2(1) = 1 is odd, so nothing survives
        assert!(scan(&p2, 2, 1, 10).unwrap().is_empty());

        // the m = 1 survivor set is {0} only when every coefficient vanishes;
        // any eta expansion has constant term 1, so already depth 0 is empty
        assert_eq!(scan(&p2, 2, 1, 0).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn scan_rejects_bad_inputs() {
        let p2 = SeriesSource::TwoColor { k: 2 };
        assert!(scan(&p2, 1, 3, 10).is_err());
        assert!(scan(&p2, 3, 0, 10).is_err());
    }
}
