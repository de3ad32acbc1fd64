use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{distance, neighbors_unchecked, Slope};
use crate::error::{Error, Result};

/// Upper bound on enumerated geodesics; hitting it sets the truncation flag.
const MAX_PATHS: usize = 20_000;

/// The induced Farey subgraph on all slopes of height at most `height`.
#[derive(Clone, Debug)]
pub struct HeightGraph {
    height: i64,
    vertices: Vec<Slope>,
    index: HashMap<Slope, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl HeightGraph {
    pub fn new(height: i64) -> HeightGraph {
        let height = height.max(1);
        let mut vertices = vec![Slope::INFINITY];
        for q in 1..=height {
            for p in -height..=height {
                if num_integer::Integer::gcd(&p, &q) == 1 {
                    vertices.push(Slope { p, q });
                }
            }
        }
        vertices.sort();
        let index: HashMap<Slope, usize> =
            vertices.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let adjacency = vertices
            .iter()
            .map(|&v| {
                let mut adj: Vec<usize> = neighbors_unchecked(v, height)
                    .filter_map(|w| index.get(&w).copied())
                    .collect();
                adj.sort_unstable();
                adj
            })
            .collect();
        HeightGraph {
            height,
            vertices,
            index,
            adjacency,
        }
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Slope] {
        &self.vertices
    }

    pub fn index_of(&self, s: Slope) -> Option<usize> {
        self.index.get(&s).copied()
    }

    pub fn neighbors_of(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// Breadth-first distances from `source`; `u32::MAX` marks unreachable.
    pub fn bfs(&self, source: Slope) -> Result<Vec<u32>> {
        let s = self.index_of(source).ok_or(Error::HeightTooSmall {
            bound: self.height,
            required: source.height(),
        })?;
        let mut dist = vec![u32::MAX; self.vertices.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    pub fn distance(&self, a: Slope, b: Slope) -> Result<Option<u32>> {
        let d = self.bfs(a)?;
        let j = self.index_of(b).ok_or(Error::HeightTooSmall {
            bound: self.height,
            required: b.height(),
        })?;
        Ok((d[j] != u32::MAX).then_some(d[j]))
    }
}

/// Breadth-first distance inside the height-`height` induced subgraph;
/// `None` when `b` is unreachable at that height.
pub fn bfs_oracle_distance(a: Slope, b: Slope, height: i64) -> Result<Option<u32>> {
    let required = a.height().max(b.height());
    if height < required {
        return Err(Error::HeightTooSmall {
            bound: height,
            required,
        });
    }
    let mut dist: HashMap<Slope, u32> = HashMap::from([(a, 0)]);
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if u == b {
            return Ok(Some(du));
        }
        for v in neighbors_unchecked(u, height) {
            dist.entry(v).or_insert_with(|| {
                queue.push_back(v);
                du + 1
            });
        }
    }
    Ok(None)
}

/// Geodesics between two slopes whose vertices all have bounded height.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicSet {
    pub endpoints: (Slope, Slope),
    pub length: u32,
    pub height: i64,
    pub paths: Vec<Vec<Slope>>,
    /// Set when doubling the height bound changes the set, or when the
    /// enumeration hit its size cap.
    pub truncated: bool,
}

impl GeodesicSet {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_dot(&self) -> String {
        let mut edges = BTreeSet::new();
        for path in &self.paths {
            for w in path.windows(2) {
                edges.insert(ordered(w[0], w[1]));
            }
        }
        let vertices: BTreeSet<Slope> = self.paths.iter().flatten().copied().collect();
        super::ball::dot_graph("geodesics", &vertices, &edges)
    }
}

fn ordered(a: Slope, b: Slope) -> (Slope, Slope) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn geodesics(a: Slope, b: Slope, height: i64) -> Result<GeodesicSet> {
    let required = a.height().max(b.height());
    if height < required {
        return Err(Error::HeightTooSmall {
            bound: height,
            required,
        });
    }
    let length = distance(a, b);
    let (paths, capped) = enumerate_geodesics(a, b, length, height)?;
    let truncated = capped || {
        let (wider, wider_capped) = enumerate_geodesics(a, b, length, height * 2)?;
        wider_capped || wider != paths
    };
    Ok(GeodesicSet {
        endpoints: (a, b),
        length,
        height,
        paths,
        truncated,
    })
}

fn enumerate_geodesics(
    a: Slope,
    b: Slope,
    length: u32,
    height: i64,
) -> Result<(Vec<Vec<Slope>>, bool)> {
    let graph = HeightGraph::new(height);
    let from_a = graph.bfs(a)?;
    let from_b = graph.bfs(b)?;
    let ib = graph.index_of(b).expect("checked height");
    if from_a[ib] != length {
        return Ok((Vec::new(), false));
    }
    let on_geodesic = |v: usize| {
        from_a[v] != u32::MAX && from_b[v] != u32::MAX && from_a[v] + from_b[v] == length
    };
    let mut paths = Vec::new();
    let mut stack = vec![vec![graph.index_of(a).expect("checked height")]];
    let mut capped = false;
    while let Some(path) = stack.pop() {
        let last = *path.last().expect("nonempty");
        if last == ib {
            paths.push(path.iter().map(|&i| graph.vertices[i]).collect::<Vec<_>>());
            if paths.len() >= MAX_PATHS {
                capped = true;
                break;
            }
            continue;
        }
        for &w in graph.neighbors_of(last).iter().rev() {
            if from_a[w] == from_a[last] + 1 && on_geodesic(w) {
                let mut next = path.clone();
                next.push(w);
                stack.push(next);
            }
        }
    }
    paths.sort();
    Ok((paths, capped))
}
