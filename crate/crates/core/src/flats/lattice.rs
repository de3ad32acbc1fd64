//! Lattice embeddings built from geodesic lines in the factors.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ProductVertex;
use crate::error::{Error, Result};
use crate::orbifold::PieceKind;
use crate::slopes::{adjacent, distance, HeightGraph, Slope};

/// Half-width of the window on which the shipped line is verified.
pub const DEFAULT_WINDOW: usize = 5;

/// The shipped line, centred on its middle entry. It is reproduced by
/// `search_geodesic(DEFAULT_WINDOW)`.
pub const DEFAULT_LINE: &[&str] = &[
    "-55/144", "-21/55", "-8/21", "-3/8", "-1/3", "0/1", "1/0", "-3/1", "-8/3", "-21/8", "-55/21",
];

/// A finite piece of a bi-infinite path in the Farey graph, indexed by
/// integers with `origin` at index 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicLine {
    pub vertices: Vec<Slope>,
    pub origin: usize,
}

impl GeodesicLine {
    pub fn new(vertices: Vec<Slope>, origin: usize) -> Result<GeodesicLine> {
        if origin >= vertices.len() {
            return Err(Error::Precondition(format!(
                "origin {origin} outside a line of {} vertices",
                vertices.len()
            )));
        }
        Ok(GeodesicLine { vertices, origin })
    }

    /// The sequence `k -> k/1`, a path that stops being geodesic at gap 3.
    pub fn integers(half: usize) -> GeodesicLine {
        let h = half as i64;
        GeodesicLine {
            vertices: (-h..=h).map(Slope::integer).collect(),
            origin: half,
        }
    }

    pub fn at(&self, i: i64) -> Option<Slope> {
        let j = self.origin as i64 + i;
        (j >= 0)
            .then(|| self.vertices.get(j as usize).copied())
            .flatten()
    }

    fn window(&self, w: usize) -> Result<Vec<Slope>> {
        let w = w as i64;
        (-w..=w)
            .map(|i| {
                self.at(i)
                    .ok_or_else(|| Error::Precondition(format!("line has no vertex at index {i}")))
            })
            .collect()
    }

    /// Fails unless consecutive vertices on the window are adjacent.
    pub fn check_path(&self, w: usize) -> Result<()> {
        let vs = self.window(w)?;
        for (k, pair) in vs.windows(2).enumerate() {
            if !adjacent(pair[0], pair[1]) {
                return Err(Error::Precondition(format!(
                    "{} and {} at indices {} and {} are not adjacent",
                    pair[0],
                    pair[1],
                    k as i64 - w as i64,
                    k as i64 + 1 - w as i64
                )));
            }
        }
        Ok(())
    }

    /// First index pair, by increasing gap, whose distance falls short of
    /// the gap; `None` when the window is geodesic.
    pub fn geodesic_witness(&self, w: usize) -> Result<Option<(i64, i64)>> {
        self.check_path(w)?;
        let vs = self.window(w)?;
        for gap in 2..vs.len() {
            for a in 0..vs.len() - gap {
                if distance(vs[a], vs[a + gap]) != gap as u32 {
                    let lo = a as i64 - w as i64;
                    return Ok(Some((lo, lo + gap as i64)));
                }
            }
        }
        Ok(None)
    }

    /// First index pair joined by a geodesic that leaves the line, checked
    /// by breadth-first search in the induced subgraph on slopes no higher
    /// than twice the highest vertex of the window.
    pub fn total_geodesy_witness(&self, w: usize) -> Result<Option<(i64, i64)>> {
        if let Some(pair) = self.geodesic_witness(w)? {
            return Ok(Some(pair));
        }
        let vs = self.window(w)?;
        let height = 2 * vs.iter().map(|s| s.height()).max().unwrap_or(1);
        let graph = HeightGraph::new(height);
        for a in 0..vs.len() {
            let counts = shortest_path_counts(&graph, vs[a])?;
            for (b, &v) in vs.iter().enumerate().skip(a + 1) {
                let j = graph.index_of(v).expect("within height");
                if counts[j] != 1 {
                    let lo = a as i64 - w as i64;
                    return Ok(Some((lo, b as i64 - w as i64)));
                }
            }
        }
        Ok(None)
    }
}

/// Number of shortest paths from `source` to every vertex, saturating at 2.
fn shortest_path_counts(graph: &HeightGraph, source: Slope) -> Result<Vec<u8>> {
    let dist = graph.bfs(source)?;
    let s = graph.index_of(source).expect("bfs succeeded");
    let mut order: Vec<usize> = (0..graph.len()).filter(|&i| dist[i] != u32::MAX).collect();
    order.sort_by_key(|&i| dist[i]);
    let mut count = vec![0u8; graph.len()];
    count[s] = 1;
    for &u in &order {
        for &v in graph.neighbors_of(u) {
            if dist[v] == dist[u] + 1 {
                count[v] = count[v].saturating_add(count[u]).min(2);
            }
        }
    }
    Ok(count)
}

/// Grows a line from the edge `0/1, 1/0` one vertex at a time, alternating
/// ends, taking the lowest admissible neighbour and re-verifying unique
/// geodesics by breadth-first search after every extension.
pub fn search_geodesic(half: usize) -> Result<GeodesicLine> {
    let mut line: VecDeque<Slope> = VecDeque::from([Slope::ZERO, Slope::INFINITY]);
    let mut origin = 0usize;
    while origin < half || line.len() - origin - 1 < half {
        let forward = line.len() - origin - 1 <= origin;
        let end = if forward {
            line[line.len() - 1]
        } else {
            line[0]
        };
        let cap = 4 * line.iter().map(|s| s.height()).max().unwrap_or(1) + 4;
        let mut candidates: Vec<Slope> = crate::slopes::neighbors(end, cap)?
            .into_iter()
            .filter(|w| !line.contains(w))
            .collect();
        candidates.sort_by_key(|w| (w.height(), *w));
        let mut accepted = None;
        for w in candidates {
            let mut trial = line.clone();
            if forward {
                trial.push_back(w);
            } else {
                trial.push_front(w);
            }
            let k = trial.len() - 1;
            let fits = trial.iter().enumerate().all(|(i, &v)| {
                distance(v, if forward { trial[k] } else { trial[0] }) == dist_gap(i, forward, k)
            });
            if !fits {
                continue;
            }
            let vertices: Vec<Slope> = trial.iter().copied().collect();
            let probe = GeodesicLine {
                vertices,
                origin: 0,
            };
            if unique_from_end(&probe, forward)? {
                accepted = Some(trial);
                break;
            }
        }
        line = accepted.ok_or_else(|| {
            Error::Precondition(format!(
                "no admissible extension at {end} below height {cap}"
            ))
        })?;
        if !forward {
            origin += 1;
        }
    }
    Ok(GeodesicLine {
        vertices: line.into_iter().collect(),
        origin,
    })
}

fn dist_gap(i: usize, forward: bool, k: usize) -> u32 {
    if forward {
        (k - i) as u32
    } else {
        i as u32
    }
}

fn unique_from_end(line: &GeodesicLine, forward: bool) -> Result<bool> {
    let vs = &line.vertices;
    let end = if forward { vs[vs.len() - 1] } else { vs[0] };
    let height = 2 * vs.iter().map(|s| s.height()).max().unwrap_or(1);
    let graph = HeightGraph::new(height);
    let counts = shortest_path_counts(&graph, end)?;
    Ok(vs
        .iter()
        .all(|&v| counts[graph.index_of(v).expect("within height")] == 1))
}

/// The shipped line with its origin in the middle.
pub fn default_geodesic() -> GeodesicLine {
    let vertices: Vec<Slope> = DEFAULT_LINE
        .iter()
        .map(|t| t.parse().expect("valid shipped slope"))
        .collect();
    let origin = vertices.len() / 2;
    GeodesicLine { vertices, origin }
}

/// The map `Z^n -> F^n` sending `x` to the tuple of line vertices at the
/// coordinates of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeEmbedding {
    pub lines: Vec<GeodesicLine>,
}

impl LatticeEmbedding {
    pub fn new(lines: Vec<GeodesicLine>) -> LatticeEmbedding {
        LatticeEmbedding { lines }
    }

    /// `n` copies of the shipped line.
    pub fn standard(n: usize) -> LatticeEmbedding {
        LatticeEmbedding::new(vec![default_geodesic(); n])
    }

    pub fn dim(&self) -> usize {
        self.lines.len()
    }

    pub fn phi(&self, x: &[i64]) -> Result<ProductVertex> {
        if x.len() != self.dim() {
            return Err(Error::Precondition(format!(
                "point of dimension {} for an embedding of dimension {}",
                x.len(),
                self.dim()
            )));
        }
        let coords = x
            .iter()
            .zip(&self.lines)
            .map(|(&i, line)| {
                line.at(i)
                    .ok_or_else(|| Error::Precondition(format!("line has no vertex at index {i}")))
            })
            .collect::<Result<_>>()?;
        Ok(ProductVertex::new(coords))
    }

    /// The image of `[-w, w]^n` with product edges, in DOT format.
    pub fn to_dot(&self, w: usize) -> Result<String> {
        let points = lattice_points(self.dim(), w);
        if points.len() > 10_000 {
            return Err(Error::Precondition(format!(
                "{} lattice points are too many to draw",
                points.len()
            )));
        }
        let mut out = String::from("graph flat {\n");
        let name = |x: &[i64]| {
            let parts: Vec<String> = x.iter().map(|c| c.to_string()).collect();
            format!("\"{}\"", parts.join(","))
        };
        for x in &points {
            let _ = writeln!(out, "  {} [label=\"{}\"];", name(x), self.phi(x)?);
        }
        for x in &points {
            for k in 0..x.len() {
                if x[k] < w as i64 {
                    let mut y = x.clone();
                    y[k] += 1;
                    let _ = writeln!(out, "  {} -- {};", name(x), name(&y));
                }
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}

fn lattice_points(n: usize, w: usize) -> Vec<Vec<i64>> {
    let w = w as i64;
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-w..=w).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// Outcome of checking that an embedding is isometric on a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatCertificate {
    pub n: usize,
    pub window: usize,
    pub pairs_checked: u64,
    pub pass: bool,
    /// First pair `(x, y)` with product distance different from `|x - y|_1`.
    pub witness: Option<FlatWitness>,
    /// Per factor, the first index pair where its line stops being geodesic.
    pub factor_witnesses: Vec<Option<(i64, i64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatWitness {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub product_distance: u32,
    pub lattice_distance: u32,
}

/// Checks `d(phi(x), phi(y)) = |x - y|_1` for all `x, y` in `[-w, w]^n`.
pub fn certify_flat(e: &LatticeEmbedding, w: usize) -> Result<FlatCertificate> {
    let mut factor_witnesses = Vec::with_capacity(e.dim());
    for line in &e.lines {
        factor_witnesses.push(line.geodesic_witness(w)?);
    }
    let side = 2 * w + 1;
    let tables: Vec<Vec<u32>> = e
        .lines
        .iter()
        .map(|line| {
            let vs = line.window(w)?;
            Ok(vs
                .iter()
                .flat_map(|&a| vs.iter().map(move |&b| distance(a, b)))
                .collect())
        })
        .collect::<Result<_>>()?;
    let points = lattice_points(e.dim(), w);
    let first_bad = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let x = &points[i];
            points.iter().find_map(|y| {
                let mut d = 0;
                let mut l1 = 0;
                for (k, table) in tables.iter().enumerate() {
                    let (a, b) = ((x[k] + w as i64) as usize, (y[k] + w as i64) as usize);
                    d += table[a * side + b];
                    l1 += x[k].abs_diff(y[k]) as u32;
                }
                (d != l1).then(|| FlatWitness {
                    x: x.clone(),
                    y: y.clone(),
                    product_distance: d,
                    lattice_distance: l1,
                })
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next();
    let count = points.len() as u64;
    Ok(FlatCertificate {
        n: e.dim(),
        window: w,
        pairs_checked: count * count,
        pass: first_bad.is_none(),
        witness: first_bad,
        factor_witnesses,
    })
}

/// Edge weights of a flat after rescaling factor directions: 1 for torus
/// factors and 2 for four-holed sphere factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedFlat {
    pub pieces: Vec<PieceKind>,
    pub weights: Vec<u32>,
}

impl WeightedFlat {
    pub fn distance(&self, x: &[i64], y: &[i64]) -> Result<u64> {
        if x.len() != self.weights.len() || y.len() != self.weights.len() {
            return Err(Error::Precondition(
                "point dimension differs from the flat".into(),
            ));
        }
        Ok(x.iter()
            .zip(y)
            .zip(&self.weights)
            .map(|((a, b), &wt)| a.abs_diff(*b) * wt as u64)
            .sum())
    }
}

pub fn wp_rescale(e: &LatticeEmbedding, pieces: &[PieceKind]) -> Result<WeightedFlat> {
    if pieces.len() != e.dim() {
        return Err(Error::Precondition(format!(
            "{} piece kinds for an embedding of dimension {}",
            pieces.len(),
            e.dim()
        )));
    }
    Ok(WeightedFlat {
        pieces: pieces.to_vec(),
        weights: pieces
            .iter()
            .map(|p| match p {
                PieceKind::OneHoledTorus => 1,
                PieceKind::FourHoledSphere => 2,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ray_fails_at_gap_three() {
        let line = GeodesicLine::integers(5);
        assert_eq!(line.geodesic_witness(5).unwrap(), Some((-5, -2)));
        assert_eq!(line.geodesic_witness(1).unwrap(), None);
    }

    #[test]
    fn non_path_is_rejected() {
        let line = GeodesicLine::new(vec![Slope::ZERO, Slope::integer(2)], 0).unwrap();
        assert!(line.check_path(0).is_ok());
        assert!(
            GeodesicLine::new(vec![Slope::ZERO, Slope::integer(2), Slope::integer(3)], 1)
                .unwrap()
                .check_path(1)
                .is_err()
        );
    }

    #[test]
    fn shipped_line_is_totally_geodesic() {
        let line = default_geodesic();
        assert_eq!(line.at(0), Some(Slope::ZERO));
        assert_eq!(line.at(1), Some(Slope::INFINITY));
        assert_eq!(line.total_geodesy_witness(DEFAULT_WINDOW).unwrap(), None);
        assert_eq!(search_geodesic(DEFAULT_WINDOW).unwrap(), line);
    }

    #[test]
    fn weights() {
        let e = LatticeEmbedding::standard(2);
        let flat = wp_rescale(&e, &[PieceKind::OneHoledTorus, PieceKind::FourHoledSphere]).unwrap();
        assert_eq!(flat.weights, vec![1, 2]);
        assert_eq!(flat.distance(&[0, 0], &[0, 1]).unwrap(), 2);
        assert!(wp_rescale(&e, &[PieceKind::OneHoledTorus]).is_err());
    }

    #[test]
    fn dot_export() {
        let dot = LatticeEmbedding::standard(2).to_dot(1).unwrap();
        assert_eq!(dot.matches("--").count(), 12);
        assert!(dot.contains("\"0,0\" [label=\"(0/1, 0/1)\"]"));
    }
}
