//! Exact computation of the quantities that make a finite congruence check
//! conclusive for an eta-quotient coefficient family.
//!
//! The ingredients, all in exact arithmetic:
//!
//! - `kappa(m) = gcd(m^2 - 1, 24)` and the index `[Gamma : Gamma_0(N)]`;
//! - the square classes of `Z/(24m)` and the orbit they generate from a
//!   progression residue `t`;
//! - the representative matrices `[[1, 0], [delta, 1]]` for `delta | N`;
//! - the rationals `p_{m,r}(gamma)` (a minimum over a `lambda` scan) and
//!   `p*_{r'}(gamma)` at each representative, whose sums must be nonnegative;
//! - the bound `v`, whose floor is the verification depth: if the
//!   coefficients `c_r(mn + t')` vanish mod `u` for all `n <= floor(v)` and
//!   all orbit members `t'`, they vanish for every `n`.
//!
//! Membership of a tuple in the admissible set is *not* checked here: the
//! defining conditions live outside this toolkit, so tuples carry an
//! `asserted_delta_star` flag and only the computable hypotheses (orbit
//! well-definedness, representative sums) are verified.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::series::EtaQuotientSpec;

/// Arbitrary-precision fraction, always in canonical lowest terms with a
/// positive denominator.
pub type ExactRational = BigRational;

/// Errors from tuple and matrix construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RsError {
    /// Matrix determinant is not 1.
    NotUnimodular { a: i64, b: i64, c: i64, d: i64 },
    /// Structurally invalid tuple (residue out of range, zero modulus, ...).
    InvalidTuple(String),
}

impl fmt::Display for RsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RsError::NotUnimodular { a, b, c, d } => {
                write!(
                    f,
                    "matrix [[{a},{b}],[{c},{d}]] does not have determinant 1"
                )
            }
            RsError::InvalidTuple(msg) => write!(f, "invalid tuple: {msg}"),
        }
    }
}

impl std::error::Error for RsError {}

/// An integer matrix `[[a, b], [c, d]]` with determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl GammaMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, RsError> {
        if (a as i128) * (d as i128) - (b as i128) * (c as i128) != 1 {
            return Err(RsError::NotUnimodular { a, b, c, d });
        }
        Ok(GammaMatrix { a, b, c, d })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn det(&self) -> i64 {
        ((self.a as i128) * (self.d as i128) - (self.b as i128) * (self.c as i128)) as i64
    }
}

impl fmt::Display for GammaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// A verification tuple: progression modulus `m`, residue `t`, exponent
/// vector `r` at level `M = r.level()`, and companion vector `r'` at level
/// `N = r_prime.level()`.
///
/// `asserted_delta_star` records that admissibility of `(m, M, N, t, r)` is
/// taken on assertion; nothing in this crate proves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsTuple {
    pub m: u64,
    pub t: u64,
    pub r: EtaQuotientSpec,
    pub r_prime: EtaQuotientSpec,
    pub asserted_delta_star: bool,
}

impl RsTuple {
    pub fn new(
        m: u64,
        t: u64,
        r: EtaQuotientSpec,
        r_prime: EtaQuotientSpec,
    ) -> Result<Self, RsError> {
        if m == 0 {
            return Err(RsError::InvalidTuple(
                "progression modulus m must be positive".into(),
            ));
        }
        if t >= m {
            return Err(RsError::InvalidTuple(format!(
                "residue t = {t} is not in [0, {m})"
            )));
        }
        Ok(RsTuple {
            m,
            t,
            r,
            r_prime,
            asserted_delta_star: true,
        })
    }

    /// Level `M` of the exponent vector `r`.
    pub fn level_m(&self) -> u64 {
        self.r.level()
    }

    /// Level `N` of the companion vector `r'`.
    pub fn level_n(&self) -> u64 {
        self.r_prime.level()
    }
}

/// `gcd(m^2 - 1, 24)`, with `gcd(0, 24) = 24`.
pub fn kappa(m: u64) -> u64 {
    let m2 = (m as u128) * (m as u128) - 1;
    m2.gcd(&24u128) as u64
}

/// Index of the level-`N` congruence subgroup: `N * prod_{p | N} (1 + 1/p)`,
/// an exact integer.
pub fn index_gamma0(n: u64) -> u64 {
    assert!(n >= 1, "index_gamma0 requires N >= 1");
    let mut result = n;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            result = result / p * (p + 1);
            while rest.is_multiple_of(p) {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        result = result / rest * (rest + 1);
    }
    result
}

/// The squares of the units of `Z/modulus`, deduplicated and sorted.
pub fn square_classes(modulus: u64) -> BTreeSet<u64> {
    assert!(modulus >= 1);
    let mut classes = BTreeSet::new();
    for x in 0..modulus {
        if x.gcd(&modulus) == 1 {
            classes.insert(((x as u128) * (x as u128) % modulus as u128) as u64);
        }
    }
    classes
}

/// Ascending positive divisors of `n`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// The matrices `[[1, 0], [delta, 1]]` for each positive divisor `delta` of
/// `N`, ascending. Together they contain a complete set of coset
/// representatives for the hypothesis check; duplicates are harmless and all
/// of them are evaluated.
pub fn representatives(n: u64) -> Vec<GammaMatrix> {
    divisors(n)
        .into_iter()
        .map(|delta| {
            GammaMatrix::new(1, 0, i64::try_from(delta).expect("divisor fits i64"), 1)
                .expect("unit lower-triangular matrix")
        })
        .collect()
}

/// Orbit of `t` under the square-class action
/// `t |-> t*s + ((s-1)/24) * sum_d d*r_d  (mod m)` for `s` ranging over the
/// squares of units mod `24m`.
///
/// Every such `s` satisfies `s = 1 (mod 24)`, which makes the division by 24
/// exact; that is asserted, not assumed.
pub fn orbit(tuple: &RsTuple) -> BTreeSet<u64> {
    let m = tuple.m;
    let w = tuple.r.weighted_exponent_sum() as i128;
    let mut members = BTreeSet::new();
    for s in square_classes(24 * m) {
        assert!(
            s >= 1 && (s - 1) % 24 == 0,
            "square class {s} mod {} is not 1 mod 24; the division by 24 would be inexact",
            24 * m
        );
        let step = ((s - 1) / 24) as i128;
        let t_new = ((tuple.t as i128) * (s as i128) + step * w).rem_euclid(m as i128);
        members.insert(t_new as u64);
    }
    members
}

/// `p_{m,r}(gamma)`: the minimum over `lambda in {0, ..., m-1}` of
/// `(1/24) * sum_d r_d * gcd^2(d*(a + kappa*lambda*c), m*c) / (d*m)`.
///
/// gcd is taken nonnegative, and `gcd(x, 0) = |x|` (the representative with
/// `c = 0` collapses the scan to a single lambda-independent value).
pub fn p_mr(gamma: &GammaMatrix, m: u64, r: &EtaQuotientSpec) -> ExactRational {
    assert!(m >= 1);
    let kap = kappa(m) as i128;
    let a = gamma.a() as i128;
    let c = gamma.c() as i128;
    let mc = (m as i128) * c;
    let mut best: Option<BigRational> = None;
    for lambda in 0..m as i128 {
        let mut acc = BigRational::zero();
        for (&delta, &r_d) in r.terms() {
            let g = gcd_i128((delta as i128) * (a + kap * lambda * c), mc);
            let num = BigInt::from(r_d) * BigInt::from(g) * BigInt::from(g);
            let den = BigInt::from(24u64) * BigInt::from(delta) * BigInt::from(m);
            acc += BigRational::new(num, den);
        }
        best = match best {
            None => Some(acc),
            Some(b) if acc < b => Some(acc),
            Some(b) => Some(b),
        };
    }
    best.unwrap_or_else(BigRational::zero)
}

/// `p*_{r'}(gamma) = (1/24) * sum_d r'_d * gcd^2(d, c) / d`.
pub fn p_star(gamma: &GammaMatrix, r_prime: &EtaQuotientSpec) -> ExactRational {
    let c = gamma.c() as i128;
    let mut acc = BigRational::zero();
    for (&delta, &r_d) in r_prime.terms() {
        let g = gcd_i128(delta as i128, c);
        let num = BigInt::from(r_d) * BigInt::from(g) * BigInt::from(g);
        let den = BigInt::from(24u64) * BigInt::from(delta);
        acc += BigRational::new(num, den);
    }
    acc
}

fn gcd_i128(x: i128, y: i128) -> i128 {
    x.abs().gcd(&y.abs())
}

/// One row of the representative hypothesis table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisRow {
    pub delta: u64,
    pub gamma: GammaMatrix,
    pub p_mr: ExactRational,
    pub p_star: ExactRational,
    pub sum: ExactRational,
    pub nonnegative: bool,
}

/// Evaluation of `p_{m,r} + p*_{r'}` at every representative. Failures are
/// data, not errors: `pass` is false when any sum is negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub rows: Vec<HypothesisRow>,
    pub pass: bool,
}

pub fn check_hypotheses(tuple: &RsTuple) -> HypothesisReport {
    let rows: Vec<HypothesisRow> = divisors(tuple.level_n())
        .into_iter()
        .map(|delta| {
            let gamma = GammaMatrix::new(1, 0, i64::try_from(delta).expect("divisor fits i64"), 1)
                .expect("unit lower-triangular matrix");
            let pm = p_mr(&gamma, tuple.m, &tuple.r);
            let ps = p_star(&gamma, &tuple.r_prime);
            let sum = &pm + &ps;
            let nonnegative = !sum.is_negative();
            HypothesisRow {
                delta,
                gamma,
                p_mr: pm,
                p_star: ps,
                sum,
                nonnegative,
            }
        })
        .collect();
    let pass = rows.iter().all(|row| row.nonnegative);
    HypothesisReport { rows, pass }
}

/// The bound `v` and its floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VBound {
    pub v: ExactRational,
    pub floor: i64,
    pub t_min: u64,
}

/// Computes
/// `v = (1/24) * ((sum r_d + sum r'_d) * [Gamma : Gamma_0(N)] - sum d*r'_d)
///      - (1/(24m)) * sum d*r_d - t_min / m`
/// with `t_min` the smallest orbit member.
pub fn v_bound(tuple: &RsTuple) -> VBound {
    let orb = orbit(tuple);
    let t_min = *orb.iter().next().expect("orbit always contains t");
    let index = index_gamma0(tuple.level_n());
    let exponent_total = BigInt::from(tuple.r.exponent_sum() + tuple.r_prime.exponent_sum());
    let main = BigRational::new(
        exponent_total * BigInt::from(index) - BigInt::from(tuple.r_prime.weighted_exponent_sum()),
        BigInt::from(24u64),
    );
    let middle = BigRational::new(
        BigInt::from(tuple.r.weighted_exponent_sum()),
        BigInt::from(24u64) * BigInt::from(tuple.m),
    );
    let last = BigRational::new(BigInt::from(t_min), BigInt::from(tuple.m));
    let v = main - middle - last;
    let floor = v.floor().to_integer().to_i64().expect("bound fits i64");
    VBound { v, floor, t_min }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn frac(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    /// The worked tuple for the progression 297n + t with the level-22
    /// exponent vector (10, -1, -1, 0) and level-66 companion
    /// (4, 2, 0, 0, 0, 1, 0, 0).
    fn mod11_tuple(t: u64) -> RsTuple {
        let r = EtaQuotientSpec::with_level(22, [(1, 10), (2, -1), (11, -1), (22, 0)]).unwrap();
        let r_prime = EtaQuotientSpec::with_level(66, [(1, 4), (2, 2), (22, 1)]).unwrap();
        RsTuple::new(297, t, r, r_prime).unwrap()
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(1), 24);
        assert_eq!(kappa(297), 8);
        assert_eq!(kappa(5), 24);
        for m in 1..=1000 {
            assert_eq!(24 % kappa(m), 0, "kappa({m}) must divide 24");
        }
    }

    #[test]
    fn index_examples() {
        assert_eq!(index_gamma0(1), 1);
        assert_eq!(index_gamma0(6), 12);
        assert_eq!(index_gamma0(66), 144);
        // multiplicative across coprime arguments
        for (a, b) in [(2u64, 3u64), (4, 9), (5, 11), (8, 27), (7, 66)] {
            assert_eq!(
                index_gamma0(a) * index_gamma0(b),
                index_gamma0(a * b),
                "{a},{b}"
            );
        }
    }

    #[test]
    fn square_class_examples() {
        assert_eq!(square_classes(8).into_iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(square_classes(1).into_iter().collect::<Vec<_>>(), vec![0]);
        let classes = square_classes(24 * 297);
        assert!(!classes.is_empty());
        for s in classes {
            assert_eq!(s % 24, 1, "square class {s} mod 7128");
        }
    }

    #[test]
    fn representatives_examples() {
        let single = representatives(1);
        assert_eq!(single.len(), 1);
        assert_eq!((single[0].a(), single[0].c()), (1, 1));

        let reps = representatives(66);
        assert_eq!(
            reps.iter().map(|g| g.c() as u64).collect::<Vec<_>>(),
            vec![1, 2, 3, 6, 11, 22, 33, 66]
        );
        for g in reps {
            assert_eq!(g.det(), 1);
        }
    }

    #[test]
    fn gamma_matrix_rejects_non_unimodular() {
        assert!(GammaMatrix::new(1, 0, 0, 1).is_ok());
        assert!(matches!(
            GammaMatrix::new(2, 0, 0, 2),
            Err(RsError::NotUnimodular { .. })
        ));
    }

    #[test]
    fn tuple_validation() {
        let r = EtaQuotientSpec::empty();
        assert!(RsTuple::new(0, 0, r.clone(), r.clone()).is_err());
        assert!(RsTuple::new(3, 3, r.clone(), r.clone()).is_err());
        assert!(RsTuple::new(3, 2, r.clone(), r).is_ok());
    }

    #[test]
    fn orbit_is_singleton_for_both_certified_residues() {
        assert_eq!(
            orbit(&mod11_tuple(62)).into_iter().collect::<Vec<_>>(),
            vec![62]
        );
        assert_eq!(
            orbit(&mod11_tuple(161)).into_iter().collect::<Vec<_>>(),
            vec![161]
        );
    }

    #[test]
    fn orbit_trivial_modulus() {
        let r = EtaQuotientSpec::from_pairs([(1, 3)]).unwrap();
        let tuple = RsTuple::new(1, 0, r.clone(), r).unwrap();
        assert_eq!(orbit(&tuple).into_iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn orbit_is_closed_and_contains_t() {
        let tuple = mod11_tuple(62);
        let orb = orbit(&tuple);
        assert!(orb.contains(&tuple.t));
        let w = tuple.r.weighted_exponent_sum() as i128;
        for s in square_classes(24 * tuple.m) {
            for &member in &orb {
                let step = ((s - 1) / 24) as i128;
                let image =
                    ((member as i128) * (s as i128) + step * w).rem_euclid(tuple.m as i128) as u64;
                assert!(
                    orb.contains(&image),
                    "orbit not closed at s={s}, t'={member}"
                );
            }
        }
    }

    #[test]
    fn p_mr_collapses_when_c_is_zero() {
        let gamma = GammaMatrix::new(1, 0, 0, 1).unwrap();
        let r = EtaQuotientSpec::with_level(22, [(1, 10), (2, -1), (11, -1)]).unwrap();
        let m = 297u64;
        // gcd(delta * a, 0) = delta, so each term is r_d * delta / (24 m)
        let expected = frac(10 - 2 - 11, 24 * 297);
        assert_eq!(p_mr(&gamma, m, &r), expected);
    }

    /// Second arithmetic path for the lambda scan: accumulate each candidate
    /// as a single reduced fraction via i128 cross-multiplication, entirely
    /// without BigRational.
    fn p_mr_oracle(gamma: &GammaMatrix, m: u64, r: &EtaQuotientSpec) -> BigRational {
        let kap = kappa(m) as i128;
        let a = gamma.a() as i128;
        let c = gamma.c() as i128;
        let mc = (m as i128) * c;
        let mut best: Option<(i128, i128)> = None; // (num, den), den > 0
        for lambda in 0..m as i128 {
            let (mut num, mut den) = (0i128, 1i128);
            for (&delta, &r_d) in r.terms() {
                let g = gcd_i128((delta as i128) * (a + kap * lambda * c), mc);
                let term_num = (r_d as i128) * g * g;
                let term_den = 24 * (delta as i128) * (m as i128);
                num = num * term_den + term_num * den;
                den *= term_den;
                let g = gcd_i128(num, den);
                if g > 1 {
                    num /= g;
                    den /= g;
                }
            }
            best = match best {
                None => Some((num, den)),
                Some((bn, bd)) if num * bd < bn * den => Some((num, den)),
                other => other,
            };
        }
        let (num, den) = best.unwrap_or((0, 1));
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn p_mr_agrees_with_independent_fraction_path() {
        let tuple = mod11_tuple(62);
        for gamma in representatives(66) {
            assert_eq!(
                p_mr(&gamma, tuple.m, &tuple.r),
                p_mr_oracle(&gamma, tuple.m, &tuple.r),
                "delta = {}",
                gamma.c()
            );
        }
    }

    #[test]
    fn p_star_examples() {
        let r_prime = EtaQuotientSpec::with_level(66, [(1, 4), (2, 2), (22, 1)]).unwrap();
        let g1 = GammaMatrix::new(1, 0, 1, 1).unwrap();
        assert_eq!(p_star(&g1, &r_prime), frac(37, 176));

        let g66 = GammaMatrix::new(1, 0, 66, 1).unwrap();
        assert_eq!(p_star(&g66, &r_prime), frac(5, 4));

        assert_eq!(p_star(&g1, &EtaQuotientSpec::empty()), BigRational::zero());
    }

    #[test]
    fn hypothesis_sums_are_nonnegative_for_mod11_tuple() {
        for t in [62, 161] {
            let report = check_hypotheses(&mod11_tuple(t));
            assert_eq!(report.rows.len(), 8);
            assert!(report.pass, "t = {t}");
            for row in &report.rows {
                assert!(row.nonnegative, "t = {t}, delta = {}", row.delta);
                assert!(!row.sum.is_negative());
            }
        }
    }

    #[test]
    fn hypothesis_report_shapes() {
        // empty r': rows report the raw p_mr values
        let bare = RsTuple::new(
            297,
            62,
            EtaQuotientSpec::with_level(22, [(1, 10), (2, -1), (11, -1)]).unwrap(),
            EtaQuotientSpec::with_level(66, []).unwrap(),
        )
        .unwrap();
        let report = check_hypotheses(&bare);
        assert_eq!(report.rows.len(), 8);
        for row in &report.rows {
            assert_eq!(row.p_star, BigRational::zero());
            assert_eq!(row.sum, row.p_mr);
        }

        // N = 1: a single representative
        let trivial = RsTuple::new(
            3,
            2,
            EtaQuotientSpec::from_pairs([(1, -1)]).unwrap(),
            EtaQuotientSpec::empty(),
        )
        .unwrap();
        assert_eq!(check_hypotheses(&trivial).rows.len(), 1);
    }

    /// Single-fraction assembly of v over the common denominator 24m.
    fn v_oracle(tuple: &RsTuple) -> BigRational {
        let orb = orbit(tuple);
        let t_min = *orb.iter().next().unwrap() as i128;
        let m = tuple.m as i128;
        let index = index_gamma0(tuple.level_n()) as i128;
        let sum_r = tuple.r.exponent_sum() as i128;
        let sum_rp = tuple.r_prime.exponent_sum() as i128;
        let w_r = tuple.r.weighted_exponent_sum() as i128;
        let w_rp = tuple.r_prime.weighted_exponent_sum() as i128;
        let num = m * ((sum_r + sum_rp) * index - w_rp) - w_r - 24 * t_min;
        BigRational::new(BigInt::from(num), BigInt::from(24 * m))
    }

    #[test]
    fn v_bound_reproduces_88_for_both_residues() {
        let b62 = v_bound(&mod11_tuple(62));
        assert_eq!(b62.floor, 88);
        assert_eq!(b62.t_min, 62);
        assert_eq!(b62.v, frac(2125, 24));
        assert_eq!(b62.v, v_oracle(&mod11_tuple(62)));

        let b161 = v_bound(&mod11_tuple(161));
        assert_eq!(b161.floor, 88);
        assert_eq!(b161.t_min, 161);
        assert_eq!(b161.v, frac(2117, 24));
        assert_eq!(b161.v, v_oracle(&mod11_tuple(161)));
    }

    #[test]
    fn v_bound_degenerate_collapse() {
        // r = (0), r' empty, N = 1: v = -t_min / m
        let tuple = RsTuple::new(
            1,
            0,
            EtaQuotientSpec::with_level(1, [(1, 0)]).unwrap(),
            EtaQuotientSpec::empty(),
        )
        .unwrap();
        let b = v_bound(&tuple);
        assert_eq!(b.v, BigRational::zero());
        assert_eq!(b.floor, 0);
        assert!(b.v.denom().is_one());
    }

    #[test]
    fn rationals_are_canonical() {
        let b = v_bound(&mod11_tuple(62));
        assert!(b.v.denom().is_positive());
        assert_eq!(b.v.numer().gcd(b.v.denom()), BigInt::one());
    }
}
