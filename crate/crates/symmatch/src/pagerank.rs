//! PageRank power iteration: a page's rank is the sum of its inbound
//! neighbours' ranks, each divided by that neighbour's outdegree. Provided
//! as a reference ranking algorithm; the retrieval path does not use it.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// A directed link graph, immutable once built. Outlink sets are
/// deduplicated; every edge endpoint is a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageGraph {
    names: Vec<String>,
    out: Vec<Vec<usize>>,
}

impl PageGraph {
    /// Build from edges plus optional isolated nodes.
    pub fn build<E, N>(edges: E, isolated: N) -> PageGraph
    where
        E: IntoIterator<Item = (String, String)>,
        N: IntoIterator<Item = String>,
    {
        let edges: Vec<(String, String)> = edges.into_iter().collect();
        let mut names: BTreeSet<String> = BTreeSet::new();
        for (s, t) in &edges {
            names.insert(s.clone());
            names.insert(t.clone());
        }
        names.extend(isolated);
        let names: Vec<String> = names.into_iter().collect();
        let index: BTreeMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); names.len()];
        for (s, t) in &edges {
            out[index[s.as_str()]].insert(index[t.as_str()]);
        }
        PageGraph {
            names,
            out: out.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// Parse the edge-list format: `source<TAB>target` per line, isolated
    /// nodes as `node<TAB>`, `#` comments.
    pub fn parse(text: &str) -> Result<PageGraph> {
        let mut edges = Vec::new();
        let mut isolated = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            match fields.as_slice() {
                [src, ""] if !src.is_empty() => isolated.push(src.to_string()),
                [src, tgt] if !src.is_empty() && !tgt.is_empty() => {
                    edges.push((src.to_string(), tgt.to_string()))
                }
                _ => {
                    return Err(Error::parse_at(
                        idx + 1,
                        "expected `source<TAB>target` (or `node<TAB>` for an isolated node)"
                            .to_string(),
                    ))
                }
            }
        }
        Ok(PageGraph::build(edges, isolated))
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn out_degree(&self, node: &str) -> Option<usize> {
        self.names
            .iter()
            .position(|n| n == node)
            .map(|i| self.out[i].len())
    }
}

/// A probability distribution over the graph's pages.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    ranks: BTreeMap<String, f64>,
}

impl RankVector {
    pub fn ranks(&self) -> &BTreeMap<String, f64> {
        &self.ranks
    }

    pub fn rank(&self, node: &str) -> Option<f64> {
        self.ranks.get(node).copied()
    }

    pub fn sum(&self) -> f64 {
        self.ranks.values().sum()
    }

    fn to_dense(&self, g: &PageGraph) -> Result<Vec<f64>> {
        if self.ranks.len() != g.node_count() {
            return Err(Error::domain(
                "rank vector does not match the graph's node set",
            ));
        }
        g.names
            .iter()
            .map(|n| {
                self.ranks
                    .get(n)
                    .copied()
                    .ok_or_else(|| Error::not_found(format!("no rank for node `{n}`")))
            })
            .collect()
    }

    fn from_dense(g: &PageGraph, dense: Vec<f64>) -> RankVector {
        RankVector {
            ranks: g.names.iter().cloned().zip(dense).collect(),
        }
    }
}

/// Distribute the initial probability evenly: every page gets 1/|pages|.
pub fn init_ranks(g: &PageGraph) -> Result<RankVector> {
    if g.node_count() == 0 {
        return Err(Error::domain("cannot rank an empty graph"));
    }
    let share = 1.0 / g.node_count() as f64;
    Ok(RankVector {
        ranks: g.names.iter().map(|n| (n.clone(), share)).collect(),
    })
}

fn step_dense(g: &PageGraph, ranks: &[f64], damping: Option<f64>) -> Vec<f64> {
    let n = g.node_count();
    let mut next = vec![0.0f64; n];
    for (j, targets) in g.out.iter().enumerate() {
        if targets.is_empty() {
            // A dangling page spreads its rank uniformly over all pages,
            // keeping the distribution normalized.
            let share = ranks[j] / n as f64;
            for slot in next.iter_mut() {
                *slot += share;
            }
        } else {
            let share = ranks[j] / targets.len() as f64;
            for &t in targets {
                next[t] += share;
            }
        }
    }
    if let Some(d) = damping {
        let base = (1.0 - d) / n as f64;
        for slot in next.iter_mut() {
            *slot = base + d * *slot;
        }
    }
    next
}

/// One power-iteration step: new rank of a page is the sum over inbound
/// neighbours of their rank divided by their outdegree; dangling pages
/// spread uniformly. The output sums to 1 when the input does.
pub fn step(g: &PageGraph, ranks: &RankVector) -> Result<RankVector> {
    let dense = ranks.to_dense(g)?;
    debug_assert!((dense.iter().sum::<f64>() - 1.0).abs() < 1e-6);
    Ok(RankVector::from_dense(g, step_dense(g, &dense, None)))
}

/// Result of [`solve`]: the final ranks plus what terminated the
/// iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Solve {
    pub ranks: RankVector,
    pub iterations: usize,
    pub converged: bool,
}

/// Iterate from the uniform distribution until the largest per-node
/// change drops below `tol` or `max_iter` steps have run. `max_iter` of 0
/// returns the initial distribution. An optional damping factor `d`
/// blends in a uniform jump: `(1-d)/n + d·flow`.
pub fn solve(g: &PageGraph, tol: f64, max_iter: usize, damping: Option<f64>) -> Result<Solve> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if let Some(d) = damping {
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::domain(format!(
                "damping factor must lie in [0, 1], got {d}"
            )));
        }
    }
    let init = init_ranks(g)?;
    let mut ranks = init.to_dense(g).expect("init matches the graph");
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        let next = step_dense(g, &ranks, damping);
        let delta = ranks
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        ranks = next;
        iterations += 1;
        if delta < tol {
            converged = true;
            break;
        }
    }
    Ok(Solve {
        ranks: RankVector::from_dense(g, ranks),
        iterations,
        converged,
    })
}
