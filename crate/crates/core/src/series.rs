//! Truncated formal power series with exact coefficients.
//!
//! Two coefficient domains are provided: [`IntegerSeries`] over
//! arbitrary-precision integers, and [`ResidueSeries`] over `Z/u` with
//! machine-word coefficients. The residue ring is the designated fast path
//! for large-index congruence checks; the integer ring is for anything that
//! must be compared exactly.
//!
//! A series of order `N` stores coefficients for `q^0 .. q^N` inclusive.
//! Binary operations on series of different orders truncate to the smaller
//! order rather than erroring.
//!
//! Products of the form `prod_{d | M} (q^d; q^d)_inf^{r_d}` are described by
//! [`EtaQuotientSpec`] and expanded by [`expand`] / [`expand_mod`]. Single
//! factors `(q^d; q^d)_inf` come from [`euler_factor`], which fills in the
//! pentagonal-number expansion directly instead of multiplying out the
//! product.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Errors from series construction and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// Inversion requires a unit constant term (`+1`/`-1` over the integers,
    /// a unit mod `u` over a residue ring).
    NonUnitConstant(String),
    /// Residue moduli must be at least 2.
    ModulusTooSmall(u64),
    /// Malformed `delta:exponent` list.
    SpecParse(String),
    /// Divisor/level structure violation in an eta-quotient spec.
    InvalidSpec(String),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonUnitConstant(c) => {
                write!(
                    f,
                    "series has non-unit constant term {c}; no reciprocal in this ring"
                )
            }
            SeriesError::ModulusTooSmall(u) => write!(f, "modulus {u} is too small (need u >= 2)"),
            SeriesError::SpecParse(msg) => write!(f, "malformed eta-quotient spec: {msg}"),
            SeriesError::InvalidSpec(msg) => write!(f, "invalid eta-quotient spec: {msg}"),
        }
    }
}

impl std::error::Error for SeriesError {}

// ---------------------------------------------------------------------------
// IntegerSeries
// ---------------------------------------------------------------------------

/// A formal power series truncated at an inclusive order, with exact
/// arbitrary-precision integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSeries {
    coeffs: Vec<BigInt>,
}

impl IntegerSeries {
    /// The constant series 1 truncated at `order`.
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = BigInt::one();
        IntegerSeries { coeffs }
    }

    /// Builds a series from its coefficient vector; the order is
    /// `coeffs.len() - 1`. Panics on an empty vector, which represents no
    /// valid truncation.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series has at least the constant coefficient"
        );
        IntegerSeries { coeffs }
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Inclusive truncation order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^i`; indices above the order do not exist.
    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Copy truncated to a smaller order; extending is not allowed.
    pub fn truncated(&self, new_order: usize) -> Self {
        assert!(
            new_order <= self.order(),
            "cannot extend a truncated series"
        );
        IntegerSeries {
            coeffs: self.coeffs[..=new_order].to_vec(),
        }
    }

    /// Coefficientwise sum, truncated to the smaller order.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        IntegerSeries { coeffs }
    }

    /// Exact Cauchy product, truncated to the smaller order.
    ///
    /// Schoolbook convolution; the outer loop runs over the nonzero
    /// coefficients of the operand with fewer of them, so multiplying by a
    /// sparse factor (an Euler factor, say) costs `O(N * nnz)`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let nnz_a = self.coeffs[..=n].iter().filter(|c| !c.is_zero()).count();
        let nnz_b = other.coeffs[..=n].iter().filter(|c| !c.is_zero()).count();
        let (outer, inner) = if nnz_a <= nnz_b {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for (i, a) in outer.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in inner.coeffs.iter().enumerate().take(n - i + 1) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        IntegerSeries { coeffs }
    }

    /// Multiplicative inverse up to the truncation order.
    ///
    /// Requires constant term `+1` or `-1`: those are the only units of the
    /// integers, and anything else has no integer-coefficient reciprocal.
    /// The inverse satisfies `b_0 = a_0` and
    /// `b_n = -a_0 * sum_{j=1..n} a_j b_{n-j}`; only the nonzero `a_j` are
    /// visited, so inverting a sparse series costs `O(N * nnz)`.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if !a0.is_one() && *a0 != BigInt::from(-1) {
            return Err(SeriesError::NonUnitConstant(a0.to_string()));
        }
        let n = self.order();
        let support: Vec<(usize, &BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut inv = vec![BigInt::zero(); n + 1];
        inv[0] = a0.clone();
        for k in 1..=n {
            let mut acc = BigInt::zero();
            for &(j, a) in &support {
                if j > k {
                    break;
                }
                acc += a * &inv[k - j];
            }
            inv[k] = -(a0 * acc);
        }
        Ok(IntegerSeries { coeffs: inv })
    }

    /// Integer power in the truncated ring. Nonnegative exponents use
    /// repeated squaring; negative exponents invert first, which fails on a
    /// non-unit constant term.
    pub fn pow(&self, exponent: i64) -> Result<Self, SeriesError> {
        if exponent == 0 {
            return Ok(IntegerSeries::one(self.order()));
        }
        let base = if exponent < 0 {
            self.invert()?
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut result = IntegerSeries::one(self.order());
        let mut power = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&power);
            }
            e >>= 1;
            if e > 0 {
                power = power.mul(&power);
            }
        }
        Ok(result)
    }

    /// Coefficientwise reduction into `[0, u)`.
    pub fn reduce(&self, modulus: u64) -> Result<ResidueSeries, SeriesError> {
        if modulus < 2 {
            return Err(SeriesError::ModulusTooSmall(modulus));
        }
        let m = BigInt::from(modulus);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let mut r = c % &m;
                if r.is_negative() {
                    r += &m;
                }
                // r is in [0, u) and u fits in u64
                u64::try_from(&r).expect("reduced residue fits a machine word")
            })
            .collect();
        Ok(ResidueSeries { modulus, coeffs })
    }
}

/// Truncation of the single Euler factor `prod_{n>=1} (1 - q^{delta*n})`.
///
/// By the pentagonal number theorem the nonzero coefficients sit exactly at
/// `delta * g` for generalized pentagonal numbers `g = j(3j -+ 1)/2`, with
/// sign `(-1)^j`, so the series is filled in directly.
pub fn euler_factor(delta: u64, order: usize) -> IntegerSeries {
    assert!(delta >= 1, "euler_factor requires delta >= 1");
    let mut coeffs = vec![BigInt::zero(); order + 1];
    coeffs[0] = BigInt::one();
    let mut j: u64 = 1;
    loop {
        let g1 = j * (3 * j - 1) / 2;
        let idx1 = (delta as u128) * (g1 as u128);
        if idx1 > order as u128 {
            break;
        }
        let sign = if j % 2 == 1 { -1i64 } else { 1i64 };
        coeffs[idx1 as usize] = BigInt::from(sign);
        let g2 = j * (3 * j + 1) / 2;
        let idx2 = (delta as u128) * (g2 as u128);
        if idx2 <= order as u128 {
            coeffs[idx2 as usize] = BigInt::from(sign);
        }
        j += 1;
    }
    IntegerSeries { coeffs }
}

/// The signed theta series `1 + 2 * sum_{n>=1} (-q)^{n^2}`: coefficient 1 at
/// index 0, `2*(-1)^n` at each square `n^2`, and 0 elsewhere.
pub fn theta_signed(order: usize) -> IntegerSeries {
    let mut coeffs = vec![BigInt::zero(); order + 1];
    coeffs[0] = BigInt::one();
    let mut n: usize = 1;
    while n * n <= order {
        coeffs[n * n] = BigInt::from(if n % 2 == 1 { -2 } else { 2 });
        n += 1;
    }
    IntegerSeries { coeffs }
}

/// Expands `prod_d (q^d; q^d)_inf^{r_d}` over the integers.
///
/// Positive exponents go through [`IntegerSeries::pow`] (repeated squaring),
/// negative ones invert the factor first. Euler factors have constant term 1,
/// so the inversion cannot fail and the result is independent of the
/// evaluation order.
pub fn expand(spec: &EtaQuotientSpec, order: usize) -> IntegerSeries {
    let mut result = IntegerSeries::one(order);
    for (&delta, &exponent) in spec.terms() {
        let factor = euler_factor(delta, order)
            .pow(exponent)
            .expect("euler factor has unit constant term");
        result = result.mul(&factor);
    }
    result
}

/// Residue-ring counterpart of [`expand`]; the fast path for congruence
/// scans at large order.
pub fn expand_mod(
    spec: &EtaQuotientSpec,
    order: usize,
    modulus: u64,
) -> Result<ResidueSeries, SeriesError> {
    if modulus < 2 {
        return Err(SeriesError::ModulusTooSmall(modulus));
    }
    let mut result = ResidueSeries::one(modulus, order);
    for (&delta, &exponent) in spec.terms() {
        let factor = euler_factor(delta, order)
            .reduce(modulus)?
            .pow(exponent)
            .expect("euler factor has unit constant term");
        result = result.mul(&factor);
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// ResidueSeries
// ---------------------------------------------------------------------------

/// A truncated series over `Z/u` with every coefficient reduced to `[0, u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSeries {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl ResidueSeries {
    pub fn one(modulus: u64, order: usize) -> Self {
        assert!(modulus >= 2);
        let mut coeffs = vec![0u64; order + 1];
        coeffs[0] = 1 % modulus;
        ResidueSeries { modulus, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
        let n = self.order().min(other.order());
        let u = self.modulus;
        let coeffs = (0..=n)
            .map(|i| (self.coeffs[i] + other.coeffs[i]) % u)
            .collect();
        ResidueSeries { modulus: u, coeffs }
    }

    /// Cauchy product mod `u`, truncated to the smaller order.
    ///
    /// When the whole accumulation provably fits a `u64` the inner loop runs
    /// without any intermediate reduction; otherwise each term is reduced
    /// through `u128`. Either way the result is exact.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
        let n = self.order().min(other.order());
        let u = self.modulus;
        let nnz_a = self.coeffs[..=n].iter().filter(|&&c| c != 0).count();
        let nnz_b = other.coeffs[..=n].iter().filter(|&&c| c != 0).count();
        let (outer, inner) = if nnz_a <= nnz_b {
            (self, other)
        } else {
            (other, self)
        };
        let outer_nnz = nnz_a.min(nnz_b) as u128;
        let term_bound = ((u - 1) as u128) * ((u - 1) as u128);
        let mut coeffs = vec![0u64; n + 1];
        if term_bound.saturating_mul(outer_nnz) < u64::MAX as u128 {
            for (i, &a) in outer.coeffs.iter().enumerate().take(n + 1) {
                if a == 0 {
                    continue;
                }
                for (j, &b) in inner.coeffs.iter().enumerate().take(n - i + 1) {
                    coeffs[i + j] += a * b;
                }
            }
            for c in &mut coeffs {
                *c %= u;
            }
        } else {
            for (i, &a) in outer.coeffs.iter().enumerate().take(n + 1) {
                if a == 0 {
                    continue;
                }
                for (j, &b) in inner.coeffs.iter().enumerate().take(n - i + 1) {
                    if b != 0 {
                        let t = (a as u128) * (b as u128) % (u as u128);
                        coeffs[i + j] = ((coeffs[i + j] as u128 + t) % (u as u128)) as u64;
                    }
                }
            }
        }
        ResidueSeries { modulus: u, coeffs }
    }

    /// Inverse up to the truncation order; the constant term must be a unit
    /// mod `u`.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let u = self.modulus;
        let a0_inv = mod_inverse(self.coeffs[0], u)
            .ok_or_else(|| SeriesError::NonUnitConstant(format!("{} (mod {u})", self.coeffs[0])))?;
        let n = self.order();
        let support: Vec<(usize, u64)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|&(_, &c)| c != 0)
            .map(|(j, &c)| (j, c))
            .collect();
        let mut inv = vec![0u64; n + 1];
        inv[0] = a0_inv;
        for k in 1..=n {
            let mut acc: u128 = 0;
            for &(j, a) in &support {
                if j > k {
                    break;
                }
                acc += (a as u128) * (inv[k - j] as u128);
                if acc >= u128::MAX / 2 {
                    acc %= u as u128;
                }
            }
            let s = (acc % u as u128) as u64;
            inv[k] = (a0_inv as u128 * ((u - s) % u) as u128 % u as u128) as u64;
        }
        Ok(ResidueSeries {
            modulus: u,
            coeffs: inv,
        })
    }

    pub fn pow(&self, exponent: i64) -> Result<Self, SeriesError> {
        if exponent == 0 {
            return Ok(ResidueSeries::one(self.modulus, self.order()));
        }
        let base = if exponent < 0 {
            self.invert()?
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut result = ResidueSeries::one(self.modulus, self.order());
        let mut power = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&power);
            }
            e >>= 1;
            if e > 0 {
                power = power.mul(&power);
            }
        }
        Ok(result)
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

// ---------------------------------------------------------------------------
// EtaQuotientSpec
// ---------------------------------------------------------------------------

/// A finite product `prod_{d | M} (q^d; q^d)_inf^{r_d}`, stored as a map from
/// divisor `d` to nonzero exponent `r_d`, plus the level `M`.
///
/// Zero exponents are dropped on construction; every stored divisor must
/// divide the level.
///
/// Text form: comma-separated `delta:exponent` pairs, e.g. `1:10,2:-1,11:-1`
/// (whitespace-insensitive). Parsing takes the level to be the lcm of all
/// listed divisors; use [`EtaQuotientSpec::with_level`] when the level is
/// larger than that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    level: u64,
    terms: BTreeMap<u64, i64>,
}

impl EtaQuotientSpec {
    /// Builds a spec with an explicit level. Exponents for repeated divisors
    /// accumulate; terms that end up zero are dropped.
    pub fn with_level(
        level: u64,
        pairs: impl IntoIterator<Item = (u64, i64)>,
    ) -> Result<Self, SeriesError> {
        if level == 0 {
            return Err(SeriesError::InvalidSpec("level must be positive".into()));
        }
        let mut terms: BTreeMap<u64, i64> = BTreeMap::new();
        for (delta, exponent) in pairs {
            if delta == 0 {
                return Err(SeriesError::InvalidSpec("divisor 0 is not allowed".into()));
            }
            if !level.is_multiple_of(delta) {
                return Err(SeriesError::InvalidSpec(format!(
                    "divisor {delta} does not divide the level {level}"
                )));
            }
            *terms.entry(delta).or_insert(0) += exponent;
        }
        terms.retain(|_, r| *r != 0);
        Ok(EtaQuotientSpec { level, terms })
    }

    /// Builds a spec whose level is the lcm of the listed divisors (1 for an
    /// empty list). Zero-exponent entries still raise the level.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, i64)>) -> Result<Self, SeriesError> {
        let pairs: Vec<(u64, i64)> = pairs.into_iter().collect();
        let mut level: u64 = 1;
        for &(delta, _) in &pairs {
            if delta == 0 {
                return Err(SeriesError::InvalidSpec("divisor 0 is not allowed".into()));
            }
            level = num_integer::lcm(level, delta);
        }
        Self::with_level(level, pairs)
    }

    /// The empty product at level 1.
    pub fn empty() -> Self {
        EtaQuotientSpec {
            level: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &i64)> {
        self.terms.iter()
    }

    pub fn exponent(&self, delta: u64) -> i64 {
        self.terms.get(&delta).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum_d r_d`.
    pub fn exponent_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    /// `sum_d d * r_d`.
    pub fn weighted_exponent_sum(&self) -> i64 {
        self.terms.iter().map(|(&d, &r)| d as i64 * r).sum()
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (delta, exponent) in &self.terms {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{delta}:{exponent}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for EtaQuotientSpec {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Ok(EtaQuotientSpec::empty());
        }
        let mut pairs = Vec::new();
        for part in cleaned.split(',') {
            let (d, r) = part.split_once(':').ok_or_else(|| {
                SeriesError::SpecParse(format!("expected delta:exponent, got `{part}`"))
            })?;
            let delta: u64 = d
                .parse()
                .map_err(|_| SeriesError::SpecParse(format!("bad divisor `{d}`")))?;
            let exponent: i64 = r
                .parse()
                .map_err(|_| SeriesError::SpecParse(format!("bad exponent `{r}`")))?;
            pairs.push((delta, exponent));
        }
        Self::from_pairs(pairs)
    }
}
