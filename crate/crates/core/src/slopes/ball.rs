use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{adjacent, distance, HeightGraph, Slope};
use crate::error::{Error, Result};

/// Vertices within `radius` of `center` in the height-`height` subgraph,
/// with all Farey edges among them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FareyBall {
    pub center: Slope,
    pub radius: u32,
    pub height: i64,
    pub vertices: BTreeSet<Slope>,
    pub edges: BTreeSet<(Slope, Slope)>,
    pub distances: BTreeMap<Slope, u32>,
}

impl FareyBall {
    pub fn new(center: Slope, radius: u32, height: i64) -> Result<FareyBall> {
        if height < center.height() {
            return Err(Error::HeightTooSmall {
                bound: height,
                required: center.height(),
            });
        }
        let graph = HeightGraph::new(height);
        let from_center = graph.bfs(center)?;
        let distances: BTreeMap<Slope, u32> = graph
            .vertices()
            .iter()
            .zip(&from_center)
            .filter(|(_, &d)| d <= radius)
            .map(|(s, &d)| (*s, d))
            .collect();
        let vertices: BTreeSet<Slope> = distances.keys().copied().collect();
        let edges = induced_edges(&vertices);
        Ok(FareyBall {
            center,
            radius,
            height,
            vertices,
            edges,
            distances,
        })
    }

    pub fn contains(&self, s: Slope) -> bool {
        self.vertices.contains(&s)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_dot(&self) -> String {
        dot_graph("ball", &self.vertices, &self.edges)
    }

    /// Breadth-first distances from `source` using only ball vertices.
    fn bfs_within(
        &self,
        adjacency: &HashMap<Slope, Vec<Slope>>,
        source: Slope,
    ) -> HashMap<Slope, u32> {
        let mut dist = HashMap::from([(source, 0u32)]);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            for &v in &adjacency[&u] {
                dist.entry(v).or_insert_with(|| {
                    queue.push_back(v);
                    du + 1
                });
            }
        }
        dist
    }

    fn adjacency(&self) -> HashMap<Slope, Vec<Slope>> {
        let mut adj: HashMap<Slope, Vec<Slope>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for &(a, b) in &self.edges {
            adj.get_mut(&a).expect("edge endpoint").push(b);
            adj.get_mut(&b).expect("edge endpoint").push(a);
        }
        for list in adj.values_mut() {
            list.sort();
        }
        adj
    }
}

/// A finite vertex and edge subset of the Farey graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    pub vertices: BTreeSet<Slope>,
    pub edges: BTreeSet<(Slope, Slope)>,
}

impl Subgraph {
    /// The given vertices with every Farey edge among them.
    pub fn induced(vertices: impl IntoIterator<Item = Slope>) -> Subgraph {
        let vertices: BTreeSet<Slope> = vertices.into_iter().collect();
        let edges = induced_edges(&vertices);
        Subgraph { vertices, edges }
    }

    /// Ball vertices lying in the closed interval `[lo, hi]`, induced.
    pub fn interval(ball: &FareyBall, lo: Slope, hi: Slope) -> Subgraph {
        Subgraph::induced(
            ball.vertices
                .iter()
                .copied()
                .filter(|&v| lo <= v && v <= hi && !v.is_infinite()),
        )
    }

    pub fn has_edge(&self, a: Slope, b: Slope) -> bool {
        self.edges.contains(&ordered(a, b))
    }

    fn check_within(&self, ball: &FareyBall) -> Result<()> {
        if let Some(v) = self.vertices.iter().find(|v| !ball.contains(**v)) {
            return Err(Error::NotInBall(format!("vertex {v}")));
        }
        for &(a, b) in &self.edges {
            if !self.vertices.contains(&a) || !self.vertices.contains(&b) {
                return Err(Error::NotInBall(format!(
                    "edge {a}-{b} leaves the vertex set"
                )));
            }
            if !adjacent(a, b) {
                return Err(Error::NotInBall(format!("{a}-{b} is not a Farey edge")));
            }
        }
        Ok(())
    }
}

/// Outcome of a ball-relative subgraph check.
///
/// For total geodesy the witness is a geodesic leaving the subgraph; for
/// convexity it is the endpoint pair with no geodesic inside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesyVerdict {
    pub holds: bool,
    pub witness: Option<Vec<Slope>>,
    pub checked_pairs: usize,
    /// Pairs whose geodesics are not all visible inside the ball.
    pub skipped_pairs: usize,
}

impl FareyBall {
    /// Whether every geodesic of the ball with both ends in `sub` stays in
    /// `sub`. Pairs without a full-length geodesic inside the ball are
    /// skipped and counted.
    pub fn is_totally_geodesic(&self, sub: &Subgraph) -> Result<GeodesyVerdict> {
        sub.check_within(self)?;
        let adjacency = self.adjacency();
        let verts: Vec<Slope> = sub.vertices.iter().copied().collect();
        let bfs: HashMap<Slope, HashMap<Slope, u32>> = verts
            .iter()
            .map(|&v| (v, self.bfs_within(&adjacency, v)))
            .collect();
        let mut checked = 0;
        let mut skipped = 0;
        let mut pairs: Vec<(u32, Slope, Slope)> = verts
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| verts[i + 1..].iter().map(move |&b| (distance(a, b), a, b)))
            .collect();
        pairs.sort();
        for (d, a, b) in pairs {
            let (da, db) = (&bfs[&a], &bfs[&b]);
            if da.get(&b) != Some(&d) {
                skipped += 1;
                continue;
            }
            checked += 1;
            let on = |w: &Slope| matches!((da.get(w), db.get(w)), (Some(x), Some(y)) if x + y == d);
            let outside = self
                .vertices
                .iter()
                .find(|w| on(w) && !sub.vertices.contains(w));
            if let Some(&w) = outside {
                let witness = path_through(&adjacency, da, db, w, w);
                return Ok(GeodesyVerdict {
                    holds: false,
                    witness: Some(witness),
                    checked_pairs: checked,
                    skipped_pairs: skipped,
                });
            }
            let bad_edge = self.edges.iter().find_map(|&(u, w)| {
                let forward =
                    matches!((da.get(&u), db.get(&w)), (Some(x), Some(y)) if x + 1 + y == d);
                let backward =
                    matches!((da.get(&w), db.get(&u)), (Some(x), Some(y)) if x + 1 + y == d);
                if sub.has_edge(u, w) {
                    None
                } else if forward {
                    Some((u, w))
                } else if backward {
                    Some((w, u))
                } else {
                    None
                }
            });
            if let Some((u, w)) = bad_edge {
                let witness = path_through(&adjacency, da, db, u, w);
                return Ok(GeodesyVerdict {
                    holds: false,
                    witness: Some(witness),
                    checked_pairs: checked,
                    skipped_pairs: skipped,
                });
            }
        }
        Ok(GeodesyVerdict {
            holds: true,
            witness: None,
            checked_pairs: checked,
            skipped_pairs: skipped,
        })
    }

    /// Whether every pair of `sub` is joined by a geodesic lying in `sub`.
    pub fn is_convex(&self, sub: &Subgraph) -> Result<GeodesyVerdict> {
        sub.check_within(self)?;
        let mut adjacency: HashMap<Slope, Vec<Slope>> =
            sub.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for &(a, b) in &sub.edges {
            adjacency.get_mut(&a).expect("checked").push(b);
            adjacency.get_mut(&b).expect("checked").push(a);
        }
        let verts: Vec<Slope> = sub.vertices.iter().copied().collect();
        let mut checked = 0;
        for (i, &a) in verts.iter().enumerate() {
            let da = self.bfs_within(&adjacency, a);
            for &b in &verts[i + 1..] {
                checked += 1;
                if da.get(&b) != Some(&distance(a, b)) {
                    return Ok(GeodesyVerdict {
                        holds: false,
                        witness: Some(vec![a, b]),
                        checked_pairs: checked,
                        skipped_pairs: 0,
                    });
                }
            }
        }
        Ok(GeodesyVerdict {
            holds: true,
            witness: None,
            checked_pairs: checked,
            skipped_pairs: 0,
        })
    }
}

/// A geodesic `a .. u, w .. b` built from distance maps of both endpoints,
/// where `u = w` or `u w` is an edge on some geodesic. Ties break towards
/// the smallest slope.
fn path_through(
    adjacency: &HashMap<Slope, Vec<Slope>>,
    da: &HashMap<Slope, u32>,
    db: &HashMap<Slope, u32>,
    u: Slope,
    w: Slope,
) -> Vec<Slope> {
    let descend = |start: Slope, dist: &HashMap<Slope, u32>| {
        let mut out = vec![start];
        let mut cur = start;
        while dist[&cur] > 0 {
            cur = *adjacency[&cur]
                .iter()
                .find(|n| dist.get(n) == Some(&(dist[&cur] - 1)))
                .expect("bfs predecessor");
            out.push(cur);
        }
        out
    };
    let mut head = descend(u, da);
    head.reverse();
    let tail = descend(w, db);
    if u == w {
        head.extend(tail.into_iter().skip(1));
    } else {
        head.extend(tail);
    }
    head
}

fn ordered(a: Slope, b: Slope) -> (Slope, Slope) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn induced_edges(vertices: &BTreeSet<Slope>) -> BTreeSet<(Slope, Slope)> {
    let list: Vec<Slope> = vertices.iter().copied().collect();
    let mut edges = BTreeSet::new();
    for (i, &a) in list.iter().enumerate() {
        for &b in &list[i + 1..] {
            if adjacent(a, b) {
                edges.insert((a, b));
            }
        }
    }
    edges
}

pub(crate) fn dot_graph(
    name: &str,
    vertices: &BTreeSet<Slope>,
    edges: &BTreeSet<(Slope, Slope)>,
) -> String {
    let mut out = format!("graph {name} {{\n");
    for v in vertices {
        let _ = writeln!(out, "  \"{v}\";");
    }
    for (a, b) in edges {
        let _ = writeln!(out, "  \"{a}\" -- \"{b}\";");
    }
    out.push_str("}\n");
    out
}
