//! Partition counting by several independent methods, divisor sums, and the
//! theta-decomposition split behind the elementary mod-3 argument.
//!
//! `p(n)` counts ordinary partitions. `p_k(n)` counts two-color partitions
//! where the second color may appear only on parts divisible by `k`; the
//! `k = 2` case is the cubic partition function. Tables of the same kind
//! computed by different methods must be identical entry for entry; that
//! cross-check is the central correctness device of this module.
//!
//! The divisor-sum recursions divide by `n` at every step. The division is
//! asserted to be exact rather than rounded: an inexact division would mean
//! the implementation (not the identity) is broken, so it panics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::series::{self, euler_factor, EtaQuotientSpec};

/// Which family a [`PartitionTable`] counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionKind {
    /// Ordinary partitions `p(n)`.
    Ordinary,
    /// Two-color partitions `p_k(n)` where the second color is restricted to
    /// parts divisible by `k`.
    TwoColor { k: u64 },
}

/// Construction method for `p(n)` tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PMethod {
    Pentagonal,
    Ford,
    EtaExpansion,
}

impl PMethod {
    pub fn label(self) -> &'static str {
        match self {
            PMethod::Pentagonal => "pentagonal",
            PMethod::Ford => "ford",
            PMethod::EtaExpansion => "eta-expansion",
        }
    }
}

/// Construction method for `p_k(n)` tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PkMethod {
    Convolution,
    EtaExpansion,
    SigmaRecursion,
}

impl PkMethod {
    pub fn label(self) -> &'static str {
        match self {
            PkMethod::Convolution => "convolution",
            PkMethod::EtaExpansion => "eta-expansion",
            PkMethod::SigmaRecursion => "sigma-recursion",
        }
    }
}

/// A table of partition numbers `p_*(0..=N)` with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    pub kind: PartitionKind,
    pub method: &'static str,
    values: Vec<BigInt>,
}

impl PartitionTable {
    fn new(kind: PartitionKind, method: &'static str, values: Vec<BigInt>) -> Self {
        assert!(values[0].is_one(), "p(0) = 1 for every kind and method");
        assert!(
            values.iter().all(|v| v.is_positive()),
            "partition counts are strictly positive"
        );
        PartitionTable {
            kind,
            method,
            values,
        }
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn value(&self, n: usize) -> &BigInt {
        &self.values[n]
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }
}

/// Table of `p(0..=n_max)` by the requested method.
pub fn p_table(n_max: usize, method: PMethod) -> PartitionTable {
    let values = match method {
        PMethod::Pentagonal => pentagonal_values(n_max),
        PMethod::Ford => ford_values(n_max),
        PMethod::EtaExpansion => euler_factor(1, n_max)
            .invert()
            .expect("euler factor has unit constant term")
            .coeffs()
            .to_vec(),
    };
    PartitionTable::new(PartitionKind::Ordinary, method.label(), values)
}

/// Table of `p_k(0..=n_max)` by the requested method.
pub fn pk_table(k: u64, n_max: usize, method: PkMethod) -> PartitionTable {
    assert!(k >= 1, "pk_table requires k >= 1");
    let values = match method {
        PkMethod::Convolution => pk_convolution_values(k, n_max),
        PkMethod::EtaExpansion => {
            let spec = EtaQuotientSpec::from_pairs([(1, -1), (k, -1)])
                .expect("two-color spec is well formed");
            series::expand(&spec, n_max).coeffs().to_vec()
        }
        PkMethod::SigmaRecursion => return pk_sigma_recursion(k, n_max),
    };
    PartitionTable::new(PartitionKind::TwoColor { k }, method.label(), values)
}

/// `p_k` built solely from the divisor-sum recursion
/// `p_k(n) = (1/n) * sum_{m=1..n} sigma_k(m) p_k(n-m)` with seed `p_k(0) = 1`.
///
/// Panics if any interior division is inexact; exact divisibility at every
/// step is the computational witness that the recursion is an identity.
pub fn pk_sigma_recursion(k: u64, n_max: usize) -> PartitionTable {
    assert!(k >= 1, "pk_sigma_recursion requires k >= 1");
    let sig = sigma_table(n_max);
    let sig_k = |m: usize| -> u64 {
        let mut s = sig[m];
        if (m as u64).is_multiple_of(k) {
            s += k * sig[m / k as usize];
        }
        s
    };
    let mut values = vec![BigInt::one()];
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for m in 1..=n {
            acc += &values[n - m] * sig_k(m);
        }
        let (q, r) = acc.div_rem(&BigInt::from(n));
        assert!(
            r.is_zero(),
            "sigma recursion for p_{k} is not exactly divisible at n = {n}; this is a bug"
        );
        values.push(q);
    }
    PartitionTable::new(
        PartitionKind::TwoColor { k },
        PkMethod::SigmaRecursion.label(),
        values,
    )
}

/// Sum of the positive divisors of `n`.
pub fn sigma(n: u64) -> u64 {
    assert!(n >= 1, "sigma(0) is undefined");
    let mut total = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += d;
            let e = n / d;
            if e != d {
                total += e;
            }
        }
        d += 1;
    }
    total
}

/// Divisor sum where every divisor that is a multiple of `k` carries two
/// labels and is counted twice: `sigma(n) + k * sigma(n/k)` when `k | n`,
/// plain `sigma(n)` otherwise.
pub fn sigma_k(k: u64, n: u64) -> u64 {
    assert!(k >= 1 && n >= 1, "sigma_k requires positive arguments");
    let mut s = sigma(n);
    if n.is_multiple_of(k) {
        s += k * sigma(n / k);
    }
    s
}

/// `sum_{m^2 + i + j + k = n} s(m^2) p(i) p(j) p(k)` with `s` read off the
/// signed theta series; by the quotient decomposition of the two-color
/// generating function this equals `p_2(n)`.
pub fn theta_decomposition_p2(n: usize) -> BigInt {
    let p = pentagonal_values(n);
    let p2 = convolve(&p, &p);
    let p3 = convolve(&p2, &p);
    let theta = series::theta_signed(n);
    let mut acc = BigInt::zero();
    let mut m = 0usize;
    while m * m <= n {
        acc += theta.coeff(m * m) * &p3[n - m * m];
        m += 1;
    }
    acc
}

/// The two weighted sums of the 6/3 split of `p_2(3n+2)`.
///
/// `a` runs over strictly ordered triples `i > j > k >= 0`, `b` over triples
/// with `i = j != k`; both are weighted by `s(m^2) p(i) p(j) p(k)` subject to
/// `m^2 + i + j + k = 3n + 2`. Triples with `i = j = k` never occur because
/// `3n + 2 - m^2` is not divisible by 3; the count is carried anyway as an
/// explicit witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitWitness {
    pub n: usize,
    pub a: BigInt,
    pub b: BigInt,
    /// `p_2(3n+2)`, the value the split must reproduce as `6a + 3b`.
    pub p2: BigInt,
    pub equal_triples: u64,
}

/// Enumerates the split of `p_2(3n+2)` and checks it adds back up.
///
/// Panics if `6a + 3b != p_2(3n+2)`; a mismatch would mean the enumeration
/// regions are wrong. As a corollary of the equality, `p_2(3n+2)` is
/// divisible by 3.
pub fn chan_split(n: usize) -> SplitWitness {
    let total = 3 * n + 2;
    let p = pentagonal_values(total);
    let theta = series::theta_signed(total);
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    let mut equal_triples = 0u64;
    let mut m = 0usize;
    while m * m <= total {
        let w = theta.coeff(m * m);
        let t = total - m * m;
        // i > j > k >= 0
        for k in 0..=t / 3 {
            for j in (k + 1)..=(t - k) / 2 {
                let i = t - j - k;
                if i > j {
                    a += w * (&p[i] * &p[j] * &p[k]);
                }
            }
        }
        // i = j != k
        for i in 0..=t / 2 {
            let k = t - 2 * i;
            if k != i {
                b += w * (&p[i] * &p[i] * &p[k]);
            }
        }
        if t.is_multiple_of(3) {
            equal_triples += 1;
        }
        m += 1;
    }
    let p2 = pk_convolution_values(2, total)
        .pop()
        .expect("table is nonempty");
    let recombined = BigInt::from(6) * &a + BigInt::from(3) * &b;
    assert_eq!(recombined, p2, "6A + 3B must reproduce p_2({total})");
    SplitWitness {
        n,
        a,
        b,
        p2,
        equal_triples,
    }
}

fn pentagonal_values(n_max: usize) -> Vec<BigInt> {
    let mut p = Vec::with_capacity(n_max + 1);
    p.push(BigInt::one());
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        let mut j = 1usize;
        loop {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > n {
                break;
            }
            let plus = j % 2 == 1;
            if plus {
                acc += &p[n - g1];
            } else {
                acc -= &p[n - g1];
            }
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= n {
                if plus {
                    acc += &p[n - g2];
                } else {
                    acc -= &p[n - g2];
                }
            }
            j += 1;
        }
        p.push(acc);
    }
    p
}

fn ford_values(n_max: usize) -> Vec<BigInt> {
    let sig = sigma_table(n_max);
    let mut p = vec![BigInt::one()];
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for m in 1..=n {
            acc += &p[n - m] * sig[m];
        }
        let (q, r) = acc.div_rem(&BigInt::from(n));
        assert!(
            r.is_zero(),
            "ford recursion is not exactly divisible at n = {n}; this is a bug"
        );
        p.push(q);
    }
    p
}

fn pk_convolution_values(k: u64, n_max: usize) -> Vec<BigInt> {
    let p = pentagonal_values(n_max);
    (0..=n_max)
        .map(|n| {
            let mut acc = BigInt::zero();
            let mut j = 0usize;
            while j as u64 * k <= n as u64 {
                acc += &p[n - (j as u64 * k) as usize] * &p[j];
                j += 1;
            }
            acc
        })
        .collect()
}

/// Sieve of `sigma(1..=n_max)`; index 0 is unused.
fn sigma_table(n_max: usize) -> Vec<u64> {
    let mut s = vec![0u64; n_max + 1];
    for d in 1..=n_max {
        let mut m = d;
        while m <= n_max {
            s[m] += d as u64;
            m += d;
        }
    }
    s
}

/// Prefix convolution `(a * b)[0 .. min(len)]`.
fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|idx| (0..=idx).map(|i| &a[i] * &b[idx - i]).sum::<BigInt>())
        .collect()
}
