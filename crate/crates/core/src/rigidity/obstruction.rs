use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::Serialize;

use super::TriangleSpec;
use crate::covers::CoveringMap;
use crate::eig::EIGraph;
use crate::error::{Error, Result};
use crate::sieve::{smooth_numbers, SieveTable, SmoothSums};

/// Counts `k` such that `x` is a sum of exactly `k` `N`-smooth numbers.
pub fn count_set(x: u64, n: u64) -> Result<BTreeSet<u64>> {
    if x > 10_000 {
        return Err(Error::BudgetExceeded(format!("index {x} is too large")));
    }
    let table = SieveTable::new(n, x as u32, x);
    Ok((1..=x).filter(|&k| table.in_sigma(x, k as u32)).collect())
}

/// Counting argument over the fibers of a cover all of whose lifted
/// indices are `N`-smooth: at a vertex over `v_t` the lifts of `e_t` number
/// at least `c_t`, at a vertex over `v_{t+1}` the lifts of its inverse at
/// most 2, so `|V_{t+1}| >= (c_t / 2) |V_t|` around the cycle.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCertificate {
    pub n: u64,
    pub min_counts: [u64; 3],
    pub max_back: u64,
    /// `∏ max_back / c_t`; below 1 means no finite cover.
    pub factor: String,
    pub contradiction: bool,
}

pub fn obstruction_chain(spec: &TriangleSpec, n: u64) -> Result<ChainCertificate> {
    let mut min_counts = [0; 3];
    for (t, &p) in spec.primes().iter().enumerate() {
        min_counts[t] = *count_set(p, n)?.iter().next().expect("p is a sum of ones");
    }
    let max_back = *count_set(2, n)?.iter().last().unwrap();
    let mut factor = Ratio::<u64>::from_integer(1);
    for c in min_counts {
        factor *= Ratio::new(max_back, c);
    }
    Ok(ChainCertificate {
        n,
        min_counts,
        max_back,
        factor: factor.to_string(),
        contradiction: factor < Ratio::from_integer(1),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverSearch {
    pub n: u64,
    pub max_total: u64,
    pub tuples_checked: u64,
    /// Fiber sizes passing the edge-count test.
    pub feasible: Vec<[u64; 3]>,
    /// Realizations verified as covers with smooth lifted indices.
    pub covers: Vec<CoveringMap>,
}

fn n_fold(set: &BTreeSet<u64>, n: u64) -> BTreeSet<u64> {
    let mut cur = BTreeSet::from([0u64]);
    for _ in 0..n {
        cur = cur
            .iter()
            .flat_map(|a| set.iter().map(move |b| a + b))
            .collect();
    }
    cur
}

/// `n` values from `set` summing to `total`.
fn split(set: &BTreeSet<u64>, n: u64, total: u64) -> Option<Vec<u64>> {
    if n == 0 {
        return (total == 0).then(Vec::new);
    }
    for &a in set.iter().rev() {
        if a <= total {
            if let Some(mut rest) = split(set, n - 1, total - a) {
                rest.push(a);
                return Some(rest);
            }
        }
    }
    None
}

/// `k` smooth parts summing to `x`.
fn smooth_parts(x: u64, k: u64, smooth: &[u64]) -> Option<Vec<u64>> {
    if k == 1 {
        return smooth.binary_search(&x).ok().map(|_| vec![x]);
    }
    for &a in smooth.iter().rev() {
        if a < x && x - a >= k - 1 {
            if let Some(mut rest) = smooth_parts(x - a, k - 1, smooth) {
                rest.push(a);
                return Some(rest);
            }
        }
    }
    None
}

/// Exhaustive search over fiber sizes `n_1 + n_2 + n_3 <= max_total` for
/// covers of the triangle whose lifted indices are all `N`-smooth.
pub fn search_smooth_covers(spec: &TriangleSpec, n: u64, max_total: u64) -> Result<CoverSearch> {
    let p = spec.primes();
    let counts: Vec<BTreeSet<u64>> = p.iter().map(|&x| count_set(x, n)).collect::<Result<_>>()?;
    let back = count_set(2, n)?;
    let (bmin, bmax) = (*back.iter().next().unwrap(), *back.iter().last().unwrap());
    let mut out = CoverSearch {
        n,
        max_total,
        tuples_checked: 0,
        feasible: Vec::new(),
        covers: Vec::new(),
    };
    for n1 in 1..=max_total {
        for n2 in 1..=max_total.saturating_sub(n1) {
            for n3 in 1..=max_total.saturating_sub(n1 + n2) {
                out.tuples_checked += 1;
                let sizes = [n1, n2, n3];
                let mut edges = [0u64; 3];
                let ok = (0..3).all(|t| {
                    let next = sizes[(t + 1) % 3];
                    let e = n_fold(&counts[t], sizes[t])
                        .into_iter()
                        .find(|&e| e >= next * bmin && e <= next * bmax);
                    e.map(|e| edges[t] = e).is_some()
                });
                if !ok {
                    continue;
                }
                out.feasible.push(sizes);
                if let Some(map) = realize(spec, n, sizes, edges, &counts, &back) {
                    if map.check().is_valid() {
                        out.covers.push(map);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn realize(
    spec: &TriangleSpec,
    n: u64,
    sizes: [u64; 3],
    edges: [u64; 3],
    counts: &[BTreeSet<u64>],
    back: &BTreeSet<u64>,
) -> Option<CoveringMap> {
    let p = spec.primes();
    let mut b = EIGraph::builder();
    let mut ids: Vec<Vec<usize>> = Vec::new();
    let mut vmap = std::collections::BTreeMap::new();
    for t in 0..3 {
        ids.push(
            (0..sizes[t])
                .map(|i| {
                    let id = format!("u{}_{i}", t + 1);
                    vmap.insert(id.clone(), format!("v{}", t + 1));
                    b.vertex(&id)
                })
                .collect(),
        );
    }
    let mut emap = std::collections::BTreeMap::new();
    for t in 0..3 {
        let u = (t + 1) % 3;
        let out_counts = split(&counts[t], sizes[t], edges[t])?;
        let in_counts = split(back, sizes[u], edges[t])?;
        let smooth_p = smooth_numbers(n, p[t]);
        let smooth_2 = smooth_numbers(n, 2);
        let mut tails = Vec::new();
        for (i, &c) in out_counts.iter().enumerate() {
            for x in smooth_parts(p[t], c, &smooth_p)? {
                tails.push((ids[t][i], x));
            }
        }
        let mut heads = Vec::new();
        for (j, &c) in in_counts.iter().enumerate() {
            for x in smooth_parts(2, c, &smooth_2)? {
                heads.push((ids[u][j], x));
            }
        }
        // interleave heads so consecutive tails reach different vertices
        heads.sort_by_key(|&(v, _)| std::cmp::Reverse(v));
        let shift = t % heads.len().max(1);
        heads.rotate_left(shift);
        for (k, (&(x, a), &(y, c))) in tails.iter().zip(heads.iter()).enumerate() {
            let id = format!("g{}_{k}", t + 1);
            b.edge(&id, x, y, a, c);
            emap.insert(id.clone(), format!("e{}", t + 1));
            emap.insert(format!("{id}!"), format!("e{}!", t + 1));
        }
    }
    let g = b.build();
    if !g.is_connected() {
        return None;
    }
    Some(CoveringMap {
        domain: g,
        codomain: spec.graph.clone(),
        vmap,
        emap,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionProof {
    pub spec: TriangleSpec,
    pub n: u64,
    pub chain: ChainCertificate,
    pub search: CoverSearch,
}

pub const OBSTRUCTION_SEARCH_TOTAL: u64 = 12;

/// Requires `q, r, s ∉ S_{2,N}`, then runs the fiber-count chain and the
/// bounded exhaustive search.
pub fn triangle_obstruction(spec: &TriangleSpec, n: u64) -> Result<ObstructionProof> {
    let mut sums = SmoothSums::new(n);
    let inside: Vec<u64> = spec
        .primes()
        .into_iter()
        .filter(|&p| sums.contains(p, 2))
        .collect();
    if !inside.is_empty() {
        return Err(Error::HypothesisFailed(format!(
            "{inside:?} lie in the set of sums of at most two {n}-smooth numbers"
        )));
    }
    Ok(ObstructionProof {
        spec: spec.clone(),
        n,
        chain: obstruction_chain(spec, n)?,
        search: search_smooth_covers(spec, n, OBSTRUCTION_SEARCH_TOTAL)?,
    })
}
