//! Truncated products of Farey graphs and breadth-first checks on them.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::ProductVertex;
use crate::error::{Error, Result};
use crate::slopes::HeightGraph;

/// The product of `n` copies of the height-truncated Farey graph. Tuples
/// are adjacent when they differ in one coordinate by a Farey edge.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    factor: HeightGraph,
    n: usize,
}

impl ProductGraph {
    pub fn new(n: usize, height: i64) -> Result<ProductGraph> {
        if n == 0 {
            return Err(Error::Precondition("a product needs a factor".into()));
        }
        let factor = HeightGraph::new(height);
        let size = (factor.len() as u128).checked_pow(n as u32);
        if size.is_none_or(|s| s > 4_000_000) {
            return Err(Error::Precondition(format!(
                "{} factors of {} vertices are too many",
                n,
                factor.len()
            )));
        }
        Ok(ProductGraph { factor, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn factor(&self) -> &HeightGraph {
        &self.factor
    }

    pub fn len(&self) -> usize {
        self.factor.len().pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn digits(&self, mut i: usize) -> Vec<usize> {
        let m = self.factor.len();
        let mut out = vec![0; self.n];
        for d in out.iter_mut().rev() {
            *d = i % m;
            i /= m;
        }
        out
    }

    pub fn vertex(&self, i: usize) -> ProductVertex {
        let vs = self.factor.vertices();
        ProductVertex::new(self.digits(i).into_iter().map(|d| vs[d]).collect())
    }

    pub fn index_of(&self, v: &ProductVertex) -> Result<usize> {
        if v.dim() != self.n {
            return Err(Error::Precondition(format!(
                "vertex of dimension {} in a product of dimension {}",
                v.dim(),
                self.n
            )));
        }
        let m = self.factor.len();
        v.coords.iter().try_fold(0usize, |acc, &s| {
            let d = self.factor.index_of(s).ok_or(Error::HeightTooSmall {
                bound: self.factor.height(),
                required: s.height(),
            })?;
            Ok(acc * m + d)
        })
    }

    fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let m = self.factor.len();
        let digits = self.digits(i);
        (0..self.n).flat_map(move |k| {
            let stride = m.pow((self.n - 1 - k) as u32);
            let d = digits[k];
            self.factor
                .neighbors_of(d)
                .iter()
                .map(move |&e| i - d * stride + e * stride)
        })
    }

    /// Breadth-first distances from `source` in the product itself.
    pub fn bfs(&self, source: &ProductVertex) -> Result<Vec<u32>> {
        let s = self.index_of(source)?;
        let mut dist = vec![u32::MAX; self.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }
}

/// Outcome of a product-metric or total-geodesy check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesyReport {
    pub holds: bool,
    pub checked_pairs: u64,
    /// Endpoints and an offending vertex: a geodesic vertex outside the
    /// subgraph, or for metric checks the pair whose distances disagree.
    pub witness: Option<Vec<ProductVertex>>,
}

/// Compares product breadth-first distances from each source with the sum
/// of the factor breadth-first distances.
pub fn product_bfs_agrees(g: &ProductGraph, sources: &[ProductVertex]) -> Result<GeodesyReport> {
    let mut checked = 0u64;
    for src in sources {
        let dist = g.bfs(src)?;
        let factor_dist = src
            .coords
            .iter()
            .map(|&s| g.factor.bfs(s))
            .collect::<Result<Vec<_>>>()?;
        for (i, &d) in dist.iter().enumerate() {
            checked += 1;
            let digits = g.digits(i);
            let sum = digits
                .iter()
                .zip(&factor_dist)
                .try_fold(0u32, |acc, (&k, f)| (f[k] != u32::MAX).then(|| acc + f[k]));
            if sum.unwrap_or(u32::MAX) != d {
                return Ok(GeodesyReport {
                    holds: false,
                    checked_pairs: checked,
                    witness: Some(vec![src.clone(), g.vertex(i)]),
                });
            }
        }
    }
    Ok(GeodesyReport {
        holds: true,
        checked_pairs: checked,
        witness: None,
    })
}

/// Whether every geodesic of the product between two vertices of `sub`
/// stays in `sub`. Only pairs at distance at most `radius` are checked.
pub fn total_geodesy(
    g: &ProductGraph,
    sub: &BTreeSet<ProductVertex>,
    radius: u32,
) -> Result<GeodesyReport> {
    geodesy_between(g, sub, sub, radius)
}

/// As `total_geodesy`, with endpoints drawn from `ends` only.
fn geodesy_between(
    g: &ProductGraph,
    sub: &BTreeSet<ProductVertex>,
    ends: &BTreeSet<ProductVertex>,
    radius: u32,
) -> Result<GeodesyReport> {
    let inside: BTreeSet<usize> = sub.iter().map(|v| g.index_of(v)).collect::<Result<_>>()?;
    let members: Vec<usize> = ends.iter().map(|v| g.index_of(v)).collect::<Result<_>>()?;
    let dists = members
        .iter()
        .map(|&i| g.bfs(&g.vertex(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut checked = 0u64;
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let d = dists[a][members[b]];
            if d == u32::MAX || d > radius {
                continue;
            }
            checked += 1;
            let outside = (0..g.len()).find(|&w| {
                !inside.contains(&w)
                    && dists[a][w] != u32::MAX
                    && dists[b][w] != u32::MAX
                    && dists[a][w] + dists[b][w] == d
            });
            if let Some(w) = outside {
                return Ok(GeodesyReport {
                    holds: false,
                    checked_pairs: checked,
                    witness: Some(vec![
                        g.vertex(members[a]),
                        g.vertex(members[b]),
                        g.vertex(w),
                    ]),
                });
            }
        }
    }
    Ok(GeodesyReport {
        holds: true,
        checked_pairs: checked,
        witness: None,
    })
}

/// Total geodesy of `F^k x {pt}`, the tuples agreeing with `base` after the
/// first `k` coordinates, for endpoints in the ball of radius `radius`
/// about `base`.
pub fn subproduct_total_geodesy(
    g: &ProductGraph,
    k: usize,
    base: &ProductVertex,
    radius: u32,
) -> Result<GeodesyReport> {
    if k == 0 || k > g.dim() {
        return Err(Error::Precondition(format!(
            "subproduct of {k} factors in a product of {}",
            g.dim()
        )));
    }
    let around = g.bfs(base)?;
    let sub: BTreeSet<ProductVertex> = (0..g.len())
        .map(|i| g.vertex(i))
        .filter(|v| v.coords[k..] == base.coords[k..])
        .collect();
    let ends: BTreeSet<ProductVertex> = sub
        .iter()
        .filter(|v| g.index_of(v).is_ok_and(|i| around[i] <= radius))
        .cloned()
        .collect();
    geodesy_between(g, &sub, &ends, 2 * radius)
}
