//! Smooth numbers and their bounded sumsets.
//!
//! `Π_N` is the set of positive integers whose prime factors are all at most
//! `N` (1 included), `Σ_{d,N}` the `d`-fold sumset of `Π_N`, and `S_{d,N}`
//! the union of `Σ_{t,N}` over `1 <= t <= d`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Primes `p <= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    num_prime::nt_funcs::primes(n.saturating_add(1))
        .into_iter()
        .filter(|&p| p <= n)
        .collect()
}

pub fn is_smooth(m: u64, n: u64) -> bool {
    if m == 0 {
        return false;
    }
    let mut m = m;
    for p in primes_up_to(n.min(m)) {
        while m % p == 0 {
            m /= p;
        }
    }
    m == 1
}

pub fn is_smooth_big(m: &BigUint, n: u64) -> bool {
    if m.is_zero() {
        return false;
    }
    let mut m = m.clone();
    for p in primes_up_to(n) {
        let p = BigUint::from(p);
        while (&m % &p).is_zero() {
            m /= &p;
        }
    }
    m == BigUint::from(1u32)
}

/// All `N`-smooth numbers `<= limit`, ascending.
pub fn smooth_numbers(n: u64, limit: u64) -> Vec<u64> {
    fn go(ps: &[u64], cur: u64, limit: u64, out: &mut Vec<u64>) {
        out.push(cur);
        for (k, &p) in ps.iter().enumerate() {
            if let Some(next) = cur.checked_mul(p).filter(|&x| x <= limit) {
                go(&ps[k..], next, limit, out);
            }
        }
    }
    let mut out = Vec::new();
    if limit >= 1 {
        go(&primes_up_to(n), 1, limit, &mut out);
    }
    out.sort_unstable();
    out
}

/// Memoized membership in `S_{d,N}` for one fixed `N`.
pub struct SmoothSums {
    n: u64,
    smooth: Vec<u64>,
    covered_to: u64,
    memo: HashMap<(u64, u32), bool>,
}

impl SmoothSums {
    pub fn new(n: u64) -> Self {
        SmoothSums {
            n,
            smooth: vec![1],
            covered_to: 1,
            memo: HashMap::new(),
        }
    }

    fn ensure(&mut self, m: u64) {
        if self.covered_to < m {
            let limit = m.max(self.covered_to.saturating_mul(2));
            self.smooth = smooth_numbers(self.n, limit);
            self.covered_to = limit;
        }
    }

    /// `m` is a sum of at most `d` `N`-smooth numbers.
    pub fn contains(&mut self, m: u64, d: u32) -> bool {
        if m == 0 {
            return true;
        }
        if d == 0 {
            return false;
        }
        if let Some(&b) = self.memo.get(&(m, d)) {
            return b;
        }
        self.ensure(m);
        let ans = if self.smooth.binary_search(&m).is_ok() {
            true
        } else if d == 1 {
            false
        } else {
            let lo = m.div_ceil(d as u64);
            let start = self.smooth.partition_point(|&a| a < lo);
            let end = self.smooth.partition_point(|&a| a < m);
            let parts: Vec<u64> = self.smooth[start..end].to_vec();
            parts.into_iter().any(|a| self.contains(m - a, d - 1))
        };
        self.memo.insert((m, d), ans);
        ans
    }
}

/// `m` lies in `S_{d,N}`.
pub fn in_s(m: u64, d: u32, n: u64) -> bool {
    SmoothSums::new(n).contains(m, d)
}

/// Bitset tables for `Π_N` and `Σ_{t,N}`, `t <= d`, on `[0, limit]`.
#[derive(Clone, Debug)]
pub struct SieveTable {
    pub n: u64,
    pub d: u32,
    pub limit: u64,
    smooth: FixedBitSet,
    sums: Vec<FixedBitSet>,
}

impl SieveTable {
    pub fn new(n: u64, d: u32, limit: u64) -> Self {
        let size = limit as usize + 1;
        let list = smooth_numbers(n, limit);
        let mut smooth = FixedBitSet::with_capacity(size);
        for &a in &list {
            smooth.insert(a as usize);
        }
        let mut sums = vec![smooth.clone()];
        for _ in 1..d {
            let prev = sums.last().unwrap();
            let mut next = FixedBitSet::with_capacity(size);
            for x in prev.ones() {
                for &a in &list {
                    let y = x + a as usize;
                    if y >= size {
                        break;
                    }
                    next.insert(y);
                }
            }
            sums.push(next);
        }
        SieveTable {
            n,
            d,
            limit,
            smooth,
            sums,
        }
    }

    pub fn in_pi(&self, m: u64) -> bool {
        m <= self.limit && self.smooth.contains(m as usize)
    }

    /// `m` is a sum of exactly `t` smooth numbers (`1 <= t <= d`).
    pub fn in_sigma(&self, m: u64, t: u32) -> bool {
        m <= self.limit && t >= 1 && t <= self.d && self.sums[t as usize - 1].contains(m as usize)
    }

    pub fn in_s(&self, m: u64, t: u32) -> bool {
        (1..=t.min(self.d)).any(|k| self.in_sigma(m, k))
    }

    /// Elements of `Σ_{t,N}` up to the limit.
    pub fn sigma(&self, t: u32) -> impl Iterator<Item = u64> + '_ {
        self.sums[t as usize - 1].ones().map(|x| x as u64)
    }
}

/// The first `count` primes `p <= limit` outside `S_{2,N}`.
pub fn primes_not_in(n: u64, count: usize, limit: u64) -> Result<Vec<u64>> {
    let table = SieveTable::new(n, 2, limit);
    let out: Vec<u64> = primes_up_to(limit)
        .into_iter()
        .filter(|&p| !table.in_s(p, 2))
        .take(count)
        .collect();
    if out.len() < count {
        return Err(Error::LimitExhausted {
            wanted: count,
            limit,
        });
    }
    Ok(out)
}

/// Above this many terms the partial sum is evaluated in floating point.
pub const EXACT_TERM_CAP: usize = 4000;

#[derive(Clone, Debug, Serialize)]
pub struct PartialSum {
    pub d: u32,
    pub n: u64,
    pub limit: u64,
    pub terms: usize,
    /// Exact value as `p/q`, when the term count allows it.
    pub exact: Option<String>,
    /// Upper estimate of the partial sum.
    pub partial: f64,
    /// Lower estimate of the bound.
    pub bound: f64,
    pub holds: bool,
}

/// Partial sum of `1/m` over `m ∈ Σ_{d,N}`, `m <= limit`, against the bound
/// `(1/d) (∏_{p<=N} 1/(1 - p^{-1/d}))^d`. Rounding is directed so that
/// `holds` never reports a false success.
pub fn partial_sum_bound(d: u32, n: u64, limit: u64) -> PartialSum {
    let table = SieveTable::new(n, d.max(1), limit);
    let terms: Vec<u64> = if d == 0 { Vec::new() } else { table.sigma(d).filter(|&m| m >= 1).collect() };
    let eps = f64::EPSILON;
    let (exact, partial) = if terms.len() <= EXACT_TERM_CAP {
        let mut acc = BigRational::zero();
        for &m in &terms {
            acc += BigRational::new(1.into(), m.into());
        }
        let approx = acc.to_f64().unwrap_or(f64::INFINITY);
        (Some(acc.to_string()), approx * (1.0 + 4.0 * eps))
    } else {
        let mut s = 0.0f64;
        for &m in terms.iter().rev() {
            s += 1.0 / m as f64;
        }
        (None, s * (1.0 + (terms.len() as f64 + 2.0) * eps))
    };
    let ps = primes_up_to(n);
    let dd = d.max(1) as f64;
    let mut prod = 1.0f64;
    for &p in &ps {
        prod *= 1.0 / (1.0 - (p as f64).powf(-1.0 / dd));
    }
    let bound = prod.powf(dd) / dd * (1.0 - 1e-12 * (ps.len() as f64 + dd + 1.0));
    PartialSum {
        d,
        n,
        limit,
        terms: terms.len(),
        exact,
        partial,
        bound,
        holds: partial < bound,
    }
}
