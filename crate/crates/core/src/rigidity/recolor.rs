use std::collections::BTreeMap;

use serde::Serialize;

use super::TriangleSpec;
use crate::covers::TreeBall;
use crate::eig::EIGraph;
use crate::error::{Error, Result};

/// Ball after merging monochromatic groups; vertex `c{k}` is group `k`.
#[derive(Clone, Debug, Serialize)]
pub struct CollapsedBall {
    pub tree: EIGraph,
    pub colors: BTreeMap<String, u8>,
    /// Groups whose whole neighborhood was colored and checked.
    pub checked: usize,
}

/// Colors the nodes of `ball` by degree (color `l` for degree `p_l + 1` or
/// `p_l + 2`, or degree 3 next to exactly one node of degree `p_l + 1`),
/// merges monochromatic groups, and checks that each group of color `l`
/// meets `p_l` groups of color `l + 1` and 2 of color `l - 1`.
pub fn recolor_collapse(ball: &TreeBall, spec: &TriangleSpec) -> Result<Option<CollapsedBall>> {
    let p = spec.primes();
    let nodes = &ball.nodes;
    let allowed = |d: u64| d == 3 || p.iter().any(|&x| d == x + 1 || d == x + 2);
    for (k, n) in nodes.iter().enumerate() {
        if ball.is_interior(k) && !allowed(n.degree as u64) {
            return Err(Error::BadDegrees(format!(
                "node {k} at depth {} has degree {}",
                n.depth, n.degree
            )));
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (k, n) in nodes.iter().enumerate() {
        if let Some(par) = n.parent {
            adj[par as usize].push(k);
            adj[k].push(par as usize);
        }
    }
    let colorable = |k: usize| nodes[k].depth + 2 <= ball.radius;
    let mut color: Vec<Option<u8>> = vec![None; nodes.len()];
    for k in (0..nodes.len()).filter(|&k| colorable(k)) {
        let d = nodes[k].degree as u64;
        let c = if d == 3 {
            let hits: Vec<u8> = (0..3u8)
                .filter(|&l| {
                    adj[k]
                        .iter()
                        .filter(|&&y| nodes[y].degree as u64 == p[l as usize] + 1)
                        .count()
                        == 1
                })
                .collect();
            if hits.len() != 1 {
                return Ok(None);
            }
            hits[0]
        } else {
            (0..3u8)
                .find(|&l| d == p[l as usize] + 1 || d == p[l as usize] + 2)
                .expect("degree checked above")
        };
        color[k] = Some(c);
    }
    // monochromatic groups
    let mut group = vec![usize::MAX; nodes.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for k in 0..nodes.len() {
        if color[k].is_none() || group[k] != usize::MAX {
            continue;
        }
        let g = members.len();
        let mut stack = vec![k];
        let mut list = Vec::new();
        group[k] = g;
        while let Some(x) = stack.pop() {
            list.push(x);
            for &y in &adj[x] {
                if group[y] == usize::MAX && color[y] == color[k] {
                    group[y] = g;
                    stack.push(y);
                }
            }
        }
        if list.len() > 2 {
            return Ok(None);
        }
        members.push(list);
    }
    let mut checked = 0;
    for list in &members {
        let l = color[list[0]].unwrap() as usize;
        let ring: Vec<usize> = list
            .iter()
            .flat_map(|&x| adj[x].iter().copied())
            .filter(|y| !list.contains(y))
            .collect();
        if ring.iter().any(|&y| color[y].is_none()) {
            continue;
        }
        let count = |c: usize| ring.iter().filter(|&&y| color[y] == Some(c as u8)).count() as u64;
        if count((l + 1) % 3) != p[l] || count((l + 2) % 3) != 2 || count(l) != 0 {
            return Ok(None);
        }
        checked += 1;
    }
    if checked == 0 {
        return Ok(None);
    }
    let mut b = EIGraph::builder();
    let mut colors = BTreeMap::new();
    for (g, list) in members.iter().enumerate() {
        let id = format!("c{g}");
        b.vertex(&id);
        colors.insert(id, color[list[0]].unwrap());
    }
    for (k, n) in nodes.iter().enumerate() {
        if let Some(par) = n.parent {
            let (x, y) = (group[par as usize], group[k]);
            if x != usize::MAX && y != usize::MAX && x != y {
                b.edge(&format!("d{k}"), x, y, 1u64, 1u64);
            }
        }
    }
    Ok(Some(CollapsedBall {
        tree: b.build(),
        colors,
        checked,
    }))
}
