//! The modular homomorphism, invariant primes and degree bounds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::eig::EIGraph;
use crate::error::{Error, Result};
use crate::moves::find_hair;
use crate::sieve::SmoothSums;

/// Positive rational stored as prime exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeRatio(BTreeMap<u64, i64>);

impl PrimeRatio {
    pub fn one() -> Self {
        PrimeRatio::default()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.0
    }

    pub fn from_integer(n: &BigUint) -> Result<Self> {
        Ok(PrimeRatio(
            factor(n)?.into_iter().map(|(p, k)| (p, k as i64)).collect(),
        ))
    }

    pub fn ratio(num: &BigUint, den: &BigUint) -> Result<Self> {
        Ok(PrimeRatio::from_integer(num)?.mul(&PrimeRatio::from_integer(den)?.inv()))
    }

    pub fn mul(&self, other: &PrimeRatio) -> PrimeRatio {
        let mut out = self.0.clone();
        for (&p, &k) in &other.0 {
            let e = out.entry(p).or_insert(0);
            *e += k;
            if *e == 0 {
                out.remove(&p);
            }
        }
        PrimeRatio(out)
    }

    pub fn inv(&self) -> PrimeRatio {
        PrimeRatio(self.0.iter().map(|(&p, &k)| (p, -k)).collect())
    }

    pub fn numerator(&self) -> BigUint {
        self.0
            .iter()
            .filter(|(_, &k)| k > 0)
            .map(|(&p, &k)| BigUint::from(p).pow(k as u32))
            .product()
    }

    pub fn denominator(&self) -> BigUint {
        self.0
            .iter()
            .filter(|(_, &k)| k < 0)
            .map(|(&p, &k)| BigUint::from(p).pow((-k) as u32))
            .product()
    }
}

impl fmt::Display for PrimeRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.denominator();
        if d.is_one() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), d)
        }
    }
}

impl Serialize for PrimeRatio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Prime factorization; values beyond 128 bits must reduce below that after
/// removing primes under 10^4.
pub fn factor(n: &BigUint) -> Result<BTreeMap<u64, u32>> {
    if n.is_zero() {
        return Err(Error::Invalid("cannot factor 0".into()));
    }
    let mut out = BTreeMap::new();
    let mut m = n.clone();
    if m.bits() > 128 {
        for p in crate::sieve::primes_up_to(10_000) {
            let bp = BigUint::from(p);
            while (&m % &bp).is_zero() {
                m /= &bp;
                *out.entry(p).or_insert(0) += 1;
            }
        }
    }
    let rest = m
        .to_u128()
        .ok_or_else(|| Error::FactorizationTooLarge(n.to_string()))?;
    if rest > 1 {
        for (p, k) in num_prime::nt_funcs::factorize128(rest) {
            let p = u64::try_from(p).map_err(|_| Error::FactorizationTooLarge(n.to_string()))?;
            *out.entry(p).or_insert(0) += k as u32;
        }
    }
    Ok(out)
}

/// `Δ(e_1 ... e_n) = ∏ i(e_t) / i(ē_t)`.
pub fn delta_of_path(g: &EIGraph, path: &[usize]) -> Result<PrimeRatio> {
    for w in path.windows(2) {
        if g.terminus(w[0]) != g.origin(w[1]) {
            return Err(Error::NotAPath(format!(
                "`{}` ends at `{}` but `{}` starts at `{}`",
                g.edge_id(w[0]),
                g.vertex_id(g.terminus(w[0])),
                g.edge_id(w[1]),
                g.vertex_id(g.origin(w[1]))
            )));
        }
    }
    let mut acc = PrimeRatio::one();
    for &e in path {
        acc = acc.mul(&edge_ratio(g, e)?);
    }
    Ok(acc)
}

pub fn delta_of_path_ids(g: &EIGraph, path: &[&str]) -> Result<PrimeRatio> {
    let es = path.iter().map(|id| g.edge(id)).collect::<Result<Vec<_>>>()?;
    delta_of_path(g, &es)
}

fn edge_ratio(g: &EIGraph, e: usize) -> Result<PrimeRatio> {
    PrimeRatio::ratio(g.index(e), g.index(g.inverse(e)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularData {
    pub base: String,
    /// Tree edges, directed away from the base.
    pub tree: Vec<String>,
    /// `Δ` of the fundamental cycle through each non-tree geometric edge.
    pub generators: Vec<(String, PrimeRatio)>,
    /// Row-reduced basis of the generated subgroup, columns indexed by `primes`.
    pub primes: Vec<u64>,
    pub basis: Vec<Vec<i64>>,
}

impl ModularData {
    pub fn is_unimodular(&self) -> bool {
        self.generators.iter().all(|(_, r)| r.is_one())
    }

    /// Equality of generated subgroups of the positive rationals.
    pub fn same_image(&self, other: &ModularData) -> bool {
        self.primes == other.primes && self.basis == other.basis
    }
}

pub fn modular_data(g: &EIGraph) -> Result<ModularData> {
    let base = g.vertices_sorted()[0];
    let tree = g.spanning_tree(|_| true);
    let mut potential: Vec<PrimeRatio> = vec![PrimeRatio::one(); g.vertex_count()];
    let mut on_tree = BTreeSet::new();
    for &e in &tree {
        potential[g.terminus(e)] = potential[g.origin(e)].mul(&edge_ratio(g, e)?);
        on_tree.insert(e);
        on_tree.insert(g.inverse(e));
    }
    let mut generators = Vec::new();
    for ge in g.geometric_edges() {
        if on_tree.contains(&ge.rep) {
            continue;
        }
        let e = ge.rep;
        let r = potential[ge.from]
            .mul(&edge_ratio(g, e)?)
            .mul(&potential[ge.to].inv());
        generators.push((g.edge_id(e).to_string(), r));
    }
    generators.sort_by(|a, b| a.0.cmp(&b.0));
    let primes: Vec<u64> = generators
        .iter()
        .flat_map(|(_, r)| r.exponents().keys().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rows: Vec<Vec<i64>> = generators
        .iter()
        .map(|(_, r)| primes.iter().map(|p| *r.exponents().get(p).unwrap_or(&0)).collect())
        .collect();
    Ok(ModularData {
        base: g.vertex_id(base).to_string(),
        tree: tree.iter().map(|&e| g.edge_id(e).to_string()).collect(),
        generators,
        basis: hermite_rows(rows, primes.len()),
        primes,
    })
}

pub fn is_unimodular(g: &EIGraph) -> Result<bool> {
    Ok(modular_data(g)?.is_unimodular())
}

/// Smallest fiber sizes `x` with `x(o(e)) i(e) = x(t(e)) i(ē)` for every
/// edge, or `None` when the graph is not unimodular.
pub fn unit_cover_fibers(g: &EIGraph) -> Option<Vec<BigUint>> {
    let mut x: Vec<Option<BigRational>> = vec![None; g.vertex_count()];
    let start = *g.vertices_sorted().first()?;
    x[start] = Some(BigRational::one());
    for &e in &g.spanning_tree(|_| true) {
        let from = x[g.origin(e)].clone().expect("tree edges leave reached vertices");
        let ratio = BigRational::new(g.index(e).clone().into(), g.index(g.inverse(e)).clone().into());
        x[g.terminus(e)] = Some(from * ratio);
    }
    let x: Vec<BigRational> = x.into_iter().collect::<Option<_>>()?;
    for e in 0..g.edge_count() {
        let lhs = &x[g.origin(e)] * BigRational::from_integer(g.index(e).clone().into());
        let rhs = &x[g.terminus(e)] * BigRational::from_integer(g.index(g.inverse(e)).clone().into());
        if lhs != rhs {
            return None;
        }
    }
    let den = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = x.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    ints.iter().map(|n| (n / &gcd).to_biguint()).collect()
}

/// Rank of the free group acting with quotient the smallest cover of `g`
/// whose indices are all 1, or `None` when `g` is not unimodular.
pub fn lattice_rank(g: &EIGraph) -> Option<BigUint> {
    let x = unit_cover_fibers(g)?;
    let edges: BigUint = g
        .geometric_edges()
        .iter()
        .map(|ge| &x[ge.from] * g.index(ge.rep))
        .sum();
    let vertices: BigUint = x.iter().sum();
    Some(edges + BigUint::one() - vertices)
}

/// Row Hermite normal form over the integers, zero rows dropped.
pub fn hermite_rows(mut rows: Vec<Vec<i64>>, cols: usize) -> Vec<Vec<i64>> {
    let mut r = 0;
    for c in 0..cols {
        loop {
            let piv = (r..rows.len())
                .filter(|&k| rows[k][c] != 0)
                .min_by_key(|&k| rows[k][c].abs());
            let Some(p) = piv else { break };
            rows.swap(r, p);
            if rows[r][c] < 0 {
                rows[r].iter_mut().for_each(|x| *x = -*x);
            }
            let mut done = true;
            for k in r + 1..rows.len() {
                let q = rows[k][c].div_euclid(rows[r][c]);
                if q != 0 {
                    let pr = rows[r].clone();
                    rows[k].iter_mut().zip(&pr).for_each(|(x, y)| *x -= q * y);
                }
                if rows[k][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && rows[r][c] != 0 {
            for k in 0..r {
                let q = rows[k][c].div_euclid(rows[r][c]);
                if q != 0 {
                    let pr = rows[r].clone();
                    rows[k].iter_mut().zip(&pr).for_each(|(x, y)| *x -= q * y);
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// Primes dividing some index of a minimal graph.
pub fn invariant_primes(g: &EIGraph) -> Result<BTreeSet<u64>> {
    if let Some(e) = find_hair(g) {
        return Err(Error::NotMinimal(g.vertex_id(g.origin(e)).to_string()));
    }
    let mut out = BTreeSet::new();
    for e in g.edges() {
        out.extend(factor(&e.index)?.into_keys());
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeForm {
    pub n: u64,
    /// Largest number of outgoing edges at a vertex.
    pub k: usize,
    pub degrees: BTreeMap<String, String>,
    pub holds: bool,
}

/// Every cover degree lies in `S_{K,N}` with `K` the largest out-degree.
pub fn degree_form_check(g: &EIGraph, n: u64) -> Result<DegreeForm> {
    let k = (0..g.vertex_count())
        .map(|v| g.out_edges(v).len())
        .max()
        .unwrap_or(0);
    let mut sums = SmoothSums::new(n);
    let mut holds = true;
    let mut degrees = BTreeMap::new();
    for (v, d) in g.degree_profile() {
        let ok = match d.to_u64() {
            Some(m) => sums.contains(m, k as u32),
            None => return Err(Error::FactorizationTooLarge(d.to_string())),
        };
        holds &= ok;
        degrees.insert(v, d.to_string());
    }
    Ok(DegreeForm {
        n,
        k,
        degrees,
        holds,
    })
}

/// Largest vertex degree of a finite graph with first Betti number `b1` and
/// minimum degree at least 2.
pub fn unimodular_degree_bound(b1: u64) -> u64 {
    2 * b1
}

/// Largest vertex degree over all connected multigraphs (loops allowed)
/// with first Betti number `b1`, minimum degree >= 2 and at most
/// `max_vertices` vertices, together with the set of degree multisets seen.
pub fn degree_census(b1: usize, max_vertices: usize) -> (u64, BTreeSet<Vec<u64>>) {
    let mut best = 0;
    let mut seen = BTreeSet::new();
    for nv in 1..=max_vertices {
        let ne = nv + b1 - 1;
        let pairs: Vec<(usize, usize)> = (0..nv)
            .flat_map(|a| (a..nv).map(move |b| (a, b)))
            .collect();
        let mut chosen = Vec::with_capacity(ne);
        census_rec(&pairs, 0, ne, nv, &mut chosen, &mut best, &mut seen);
    }
    (best, seen)
}

fn census_rec(
    pairs: &[(usize, usize)],
    from: usize,
    left: usize,
    nv: usize,
    chosen: &mut Vec<(usize, usize)>,
    best: &mut u64,
    seen: &mut BTreeSet<Vec<u64>>,
) {
    if left == 0 {
        let mut deg = vec![0u64; nv];
        let mut parent: Vec<usize> = (0..nv).collect();
        fn root(p: &mut [usize], x: usize) -> usize {
            if p[x] == x {
                x
            } else {
                let r = root(p, p[x]);
                p[x] = r;
                r
            }
        }
        for &(a, b) in chosen.iter() {
            deg[a] += 1;
            deg[b] += 1;
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            parent[ra] = rb;
        }
        let r0 = root(&mut parent, 0);
        if deg.iter().all(|&d| d >= 2) && (0..nv).all(|x| root(&mut parent, x) == r0) {
            *best = (*best).max(*deg.iter().max().unwrap());
            let mut ds = deg;
            ds.sort_unstable();
            seen.insert(ds);
        }
        return;
    }
    for k in from..pairs.len() {
        chosen.push(pairs[k]);
        census_rec(pairs, k, left - 1, nv, chosen, best, seen);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::big;

    fn triangle(q: u64, r: u64, s: u64) -> EIGraph {
        let mut b = EIGraph::builder();
        let v: Vec<usize> = ["v1", "v2", "v3"].iter().map(|x| b.vertex(x)).collect();
        b.edge("e1", v[0], v[1], q, 2u64);
        b.edge("e2", v[1], v[2], r, 2u64);
        b.edge("e3", v[2], v[0], s, 2u64);
        b.build()
    }

    #[test]
    fn triangle_cycle_values() {
        let g = triangle(11, 13, 17);
        assert_eq!(
            delta_of_path_ids(&g, &["e1", "e2", "e3"]).unwrap().to_string(),
            "2431/8"
        );
        assert_eq!(
            delta_of_path_ids(&g, &["e3!", "e2!", "e1!"]).unwrap().to_string(),
            "8/2431"
        );
    }

    #[test]
    fn path_and_reverse_cancel() {
        let g = triangle(11, 13, 17);
        assert!(delta_of_path_ids(&g, &["e1", "e2", "e2!", "e1!"])
            .unwrap()
            .is_one());
    }

    #[test]
    fn broken_path_is_rejected() {
        let g = triangle(11, 13, 17);
        assert!(matches!(
            delta_of_path_ids(&g, &["e1", "e3"]),
            Err(Error::NotAPath(_))
        ));
    }

    #[test]
    fn loop_ratio_is_one_half() {
        let g = EIGraph::single_loop(2, 4);
        assert_eq!(delta_of_path(&g, &[0]).unwrap().to_string(), "1/2");
        let md = modular_data(&g).unwrap();
        assert!(!md.is_unimodular());
        assert_eq!(md.generators[0].1.to_string(), "1/2");
    }

    #[test]
    fn trees_and_balanced_cycles_are_unimodular() {
        let mut b = EIGraph::builder();
        let u = b.vertex("u");
        let w = b.vertex("w");
        let x = b.vertex("x");
        b.edge("a", u, w, 3u64, 7u64);
        b.edge("b", w, x, 2u64, 9u64);
        assert!(is_unimodular(&b.build()).unwrap());
        assert!(is_unimodular(&triangle(2, 2, 2)).unwrap());
    }

    #[test]
    fn invariant_prime_examples() {
        let p: Vec<u64> = invariant_primes(&triangle(11, 13, 17)).unwrap().into_iter().collect();
        assert_eq!(p, vec![2, 11, 13, 17]);
        assert!(invariant_primes(&EIGraph::single_loop(1, 1)).unwrap().is_empty());
        let p: Vec<u64> = invariant_primes(&EIGraph::single_loop(2, 4)).unwrap().into_iter().collect();
        assert_eq!(p, vec![2]);
    }

    #[test]
    fn hairy_graph_is_not_minimal() {
        let mut b = EIGraph::builder();
        let v = b.vertex("v");
        let h = b.vertex("h");
        b.edge("l", v, v, 2u64, 3u64);
        b.edge("x", h, v, 1u64, 5u64);
        assert!(matches!(
            invariant_primes(&b.build()),
            Err(Error::NotMinimal(v)) if v == "h"
        ));
    }

    #[test]
    fn degree_form_examples() {
        assert!(degree_form_check(&triangle(11, 13, 17), 17).unwrap().holds);
        assert!(degree_form_check(&EIGraph::single_loop(2, 4), 2).unwrap().holds);
        let mut b = EIGraph::builder();
        let u = b.vertex("u");
        let w = b.vertex("w");
        b.edge("a", u, w, 5u64, 5u64);
        let r = degree_form_check(&b.build(), 3).unwrap();
        assert_eq!(r.k, 1);
        assert!(!r.holds);
    }

    #[test]
    fn factoring_large_values() {
        let n = BigUint::from(2u32).pow(300) * big(3) * big(1_000_003);
        let f = factor(&n).unwrap();
        assert_eq!(f[&2], 300);
        assert_eq!(f[&1_000_003], 1);
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = hermite_rows(vec![vec![2, 0], vec![0, 3]], 2);
        let b = hermite_rows(vec![vec![2, 3], vec![2, 0], vec![4, 6]], 2);
        assert_eq!(a, b);
        assert_eq!(hermite_rows(vec![vec![4], vec![6]], 1), vec![vec![2]]);
    }

    #[test]
    fn degree_bound_examples() {
        assert_eq!(unimodular_degree_bound(2), 4);
        assert_eq!(unimodular_degree_bound(3), 6);
    }

    #[test]
    fn lattice_ranks() {
        let mut b = EIGraph::builder();
        let u = b.vertex("u");
        let w = b.vertex("w");
        b.edge("a", u, w, 2u64, 2u64);
        b.edge("b", u, w, 2u64, 2u64);
        b.edge("c", u, w, 1u64, 1u64);
        let theta = b.build();
        assert_eq!(unit_cover_fibers(&theta), Some(vec![big(1), big(1)]));
        assert_eq!(lattice_rank(&theta), Some(big(4)));

        let mut b = EIGraph::builder();
        let u = b.vertex("u");
        let w = b.vertex("w");
        b.edge("a", u, w, 3u64, 1u64);
        b.edge("l", w, w, 2u64, 2u64);
        let g = b.build();
        assert_eq!(unit_cover_fibers(&g), Some(vec![big(1), big(3)]));
        assert_eq!(lattice_rank(&g), Some(big(6)));

        assert_eq!(lattice_rank(&EIGraph::single_loop(2, 4)), None);
        assert_eq!(lattice_rank(&EIGraph::single_loop(3, 3)), Some(big(3)));
    }
}
