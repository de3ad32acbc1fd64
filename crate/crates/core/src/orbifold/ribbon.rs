//! Boundary of a regular neighbourhood of a drawn sub-union, read off the
//! ribbon graph of the arrangement in the covering torus.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::config::{Component, Configuration};
use super::drawing::{self, angle_cmp, Frame, Pt, Seg, Strand};
use super::{Corner, PieceKind, PieceObject};
use crate::error::{Error, Result};
use crate::slopes::Slope;

type Q = Ratio<i128>;

/// One boundary component of the neighbourhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frontier {
    Essential(PieceObject),
    /// Bounds a disc or is parallel to a boundary component.
    Inessential,
}

impl Frontier {
    pub fn object(&self) -> Option<&PieceObject> {
        match self {
            Frontier::Essential(obj) => Some(obj),
            Frontier::Inessential => None,
        }
    }
}

struct Node {
    key: (Q, Q),
    corner: Option<Corner>,
    /// Walks stop at boundary points not thickened into the neighbourhood.
    terminal: bool,
    out: Vec<usize>,
}

struct HalfEdge {
    tail: usize,
    head: usize,
    dir: Pt,
    disp: (Q, Q),
}

/// Boundary components of a regular neighbourhood of `component`, each
/// classified by isotopy class. On the four-holed sphere the two lifts of a
/// component are reported once.
pub fn neighborhood_boundary(
    config: &Configuration,
    component: &Component,
) -> Result<Vec<Frontier>> {
    config.validate()?;
    let chosen: Vec<_> = component
        .objects
        .iter()
        .map(|&i| {
            config
                .objects
                .get(i)
                .ok_or_else(|| Error::Precondition(format!("no object with index {i}")))
        })
        .collect::<Result<_>>()?;
    if chosen.is_empty() {
        return Err(Error::Precondition("empty component".into()));
    }
    let labels = config.piece.boundary_labels();
    if let Some(c) = component.boundary.iter().find(|c| !labels.contains(c)) {
        return Err(Error::Precondition(format!(
            "{c} is not a boundary label of the {}",
            config.piece
        )));
    }
    let frame = Frame::for_placed(config.piece, chosen.iter().copied())?;
    let mut strands: Vec<(usize, Strand)> = Vec::new();
    for (owner, placed) in chosen.iter().enumerate() {
        for s in drawing::strands(&frame, placed)? {
            strands.push((owner, s));
        }
    }
    let included: BTreeSet<Corner> = component.boundary.iter().copied().collect();
    let arrangement = Arrangement::build(&frame, &strands, &included)?;
    check_connected(&arrangement, &strands, chosen.len(), &included, &frame)?;
    let pieces = arrangement.frontier_walks();
    classify(&frame, &arrangement, &pieces)
}

struct Arrangement {
    m: i128,
    nodes: Vec<Node>,
    index: HashMap<(Q, Q), usize>,
    halves: Vec<HalfEdge>,
    /// Pairs of strands that cross somewhere.
    touching: BTreeSet<(usize, usize)>,
}

impl Arrangement {
    fn build(
        frame: &Frame,
        strands: &[(usize, Strand)],
        included: &BTreeSet<Corner>,
    ) -> Result<Arrangement> {
        let segs: Vec<(usize, usize, Seg)> = strands
            .iter()
            .enumerate()
            .flat_map(|(si, (_, s))| s.segments().enumerate().map(move |(j, seg)| (si, j, seg)))
            .collect();
        let mut arr = Arrangement {
            m: frame.m,
            nodes: Vec::new(),
            index: HashMap::new(),
            halves: Vec::new(),
            touching: BTreeSet::new(),
        };
        // Split parameters per segment, as (t, node).
        let mut splits: Vec<Vec<(Q, usize)>> = vec![Vec::new(); segs.len()];
        for (i, &(si, ji, a)) in segs.iter().enumerate() {
            for (j, &(sj, jj, b)) in segs.iter().enumerate().skip(i) {
                let skip = adjacency_translates(frame.m, &strands[si].1, si, ji, sj, jj);
                let mut hits = Vec::new();
                drawing::visit_hits(frame, &a, &b, 0, &skip, |h| hits.push(h))?;
                for h in hits {
                    let ta = Q::new(h.ta.num, h.ta.den);
                    let tb = Q::new(h.tb.num, h.tb.den);
                    let pa = along(&a, ta);
                    let node = arr.node(pa, frame, included);
                    splits[i].push((ta, node));
                    splits[j].push((tb, node));
                    let (lo, hi) = (si.min(sj), si.max(sj));
                    arr.touching.insert((lo, hi));
                }
            }
        }
        for (i, &(_, _, seg)) in segs.iter().enumerate() {
            let start = arr.node(int_point(seg.a), frame, included);
            let end = arr.node(int_point(seg.b), frame, included);
            let mut cuts = std::mem::take(&mut splits[i]);
            cuts.push((Q::from_integer(0), start));
            cuts.push((Q::from_integer(1), end));
            cuts.sort_by_key(|x| x.0);
            cuts.dedup_by(|x, y| x.0 == y.0);
            let dir = (seg.b.0 - seg.a.0, seg.b.1 - seg.a.1);
            for w in cuts.windows(2) {
                let dt = w[1].0 - w[0].0;
                let disp = (dt * Q::from_integer(dir.0), dt * Q::from_integer(dir.1));
                arr.add_edge(w[0].1, w[1].1, dir, disp);
            }
        }
        for node in &mut arr.nodes {
            let halves = &arr.halves;
            node.out
                .sort_by(|&x, &y| angle_cmp(halves[x].dir, halves[y].dir));
            for w in node.out.windows(2) {
                if angle_cmp(halves[w[0]].dir, halves[w[1]].dir).is_eq() {
                    return Err(Error::Degenerate(
                        "two strands leave a point in the same direction".into(),
                    ));
                }
            }
        }
        Ok(arr)
    }

    fn node(&mut self, p: (Q, Q), frame: &Frame, included: &BTreeSet<Corner>) -> usize {
        let m = Q::from_integer(self.m);
        let reduce = |x: Q| x - m * (x / m).floor();
        let key = (reduce(p.0), reduce(p.1));
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let corner = if key.0.is_integer() && key.1.is_integer() {
            frame.special((key.0.to_integer(), key.1.to_integer()))
        } else {
            None
        };
        let id = self.nodes.len();
        self.nodes.push(Node {
            key,
            corner,
            terminal: corner.is_some_and(|c| !included.contains(&c)),
            out: Vec::new(),
        });
        self.index.insert(key, id);
        id
    }

    fn add_edge(&mut self, u: usize, w: usize, dir: Pt, disp: (Q, Q)) {
        let h = self.halves.len();
        self.halves.push(HalfEdge {
            tail: u,
            head: w,
            dir,
            disp,
        });
        self.halves.push(HalfEdge {
            tail: w,
            head: u,
            dir: (-dir.0, -dir.1),
            disp: (-disp.0, -disp.1),
        });
        self.nodes[u].out.push(h);
        self.nodes[w].out.push(h + 1);
    }

    /// The boundary walk keeps the thickened graph on its left: after
    /// arriving along `h` it leaves along the counterclockwise successor of
    /// the reverse of `h`.
    fn next(&self, h: usize) -> usize {
        let node = &self.nodes[self.halves[h].head];
        let twin = h ^ 1;
        let pos = node
            .out
            .iter()
            .position(|&x| x == twin)
            .expect("twin leaves the head");
        node.out[(pos + 1) % node.out.len()]
    }

    /// Boundary walks, cut at terminal boundary points.
    fn frontier_walks(&self) -> Vec<Walk> {
        let mut seen = vec![false; self.halves.len()];
        let mut walks = Vec::new();
        for start in 0..self.halves.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                cycle.push(h);
                h = self.next(h);
            }
            let cut: Vec<usize> = (0..cycle.len())
                .filter(|&i| self.nodes[self.halves[cycle[i]].tail].terminal)
                .collect();
            if cut.is_empty() {
                walks.push(Walk {
                    halves: cycle,
                    closed: true,
                });
                continue;
            }
            for (n, &i) in cut.iter().enumerate() {
                let j = cut[(n + 1) % cut.len()];
                let len = (j + cycle.len() - i - 1) % cycle.len() + 1;
                let halves = (0..len).map(|d| cycle[(i + d) % cycle.len()]).collect();
                walks.push(Walk {
                    halves,
                    closed: false,
                });
            }
        }
        walks
    }

    fn displacement(&self, walk: &Walk) -> (Q, Q) {
        walk.halves
            .iter()
            .fold((Q::from_integer(0), Q::from_integer(0)), |acc, &h| {
                (acc.0 + self.halves[h].disp.0, acc.1 + self.halves[h].disp.1)
            })
    }

    fn sigma_node(&self, node: usize) -> Option<usize> {
        let key = self.nodes[node].key;
        let m = Q::from_integer(self.m);
        let reduce = |x: Q| x - m * (x / m).floor();
        self.index.get(&(reduce(-key.0), reduce(-key.1))).copied()
    }
}

struct Walk {
    halves: Vec<usize>,
    closed: bool,
}

/// Translates `k` at which segment `(sj, jj)` continues segment `(si, ji)`
/// of the same strand (or is the segment itself), so their common point is
/// not a contact.
fn adjacency_translates(
    m: i128,
    strand: &Strand,
    si: usize,
    ji: usize,
    sj: usize,
    jj: usize,
) -> Vec<Pt> {
    if si != sj {
        return Vec::new();
    }
    let n = strand.pts.len() - 1;
    let mut skip = Vec::new();
    if ji == jj || ji + 1 == jj || jj + 1 == ji {
        skip.push((0, 0));
    }
    if strand.closed {
        let (first, last) = (strand.pts[0], strand.pts[n]);
        let w = ((last.0 - first.0) / m, (last.1 - first.1) / m);
        if ji + 1 == n && jj == 0 {
            skip.push(w);
        }
        if jj + 1 == n && ji == 0 {
            skip.push((-w.0, -w.1));
        }
    }
    skip
}

fn int_point(p: Pt) -> (Q, Q) {
    (Q::from_integer(p.0), Q::from_integer(p.1))
}

fn along(seg: &Seg, t: Q) -> (Q, Q) {
    let dx = Q::from_integer(seg.b.0 - seg.a.0);
    let dy = Q::from_integer(seg.b.1 - seg.a.1);
    (
        Q::from_integer(seg.a.0) + t * dx,
        Q::from_integer(seg.a.1) + t * dy,
    )
}

fn check_connected(
    arr: &Arrangement,
    strands: &[(usize, Strand)],
    objects: usize,
    included: &BTreeSet<Corner>,
    frame: &Frame,
) -> Result<()> {
    let mut parent: Vec<usize> = (0..objects).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        parent[ra] = rb;
    };
    for &(si, sj) in &arr.touching {
        union(&mut parent, strands[si].0, strands[sj].0);
    }
    let mut at_corner: HashMap<Corner, usize> = HashMap::new();
    for (owner, s) in strands {
        for p in [s.pts[0], *s.pts.last().expect("nonempty")] {
            if let Some(c) = frame.special(p).filter(|c| included.contains(c)) {
                let first = *at_corner.entry(c).or_insert(*owner);
                union(&mut parent, first, *owner);
            }
        }
    }
    let root = find(&mut parent, 0);
    if (1..objects).any(|i| find(&mut parent, i) != root) {
        return Err(Error::Precondition("the component is not connected".into()));
    }
    Ok(())
}

fn classify(frame: &Frame, arr: &Arrangement, walks: &[Walk]) -> Result<Vec<Frontier>> {
    let m = frame.m;
    let mut out = Vec::new();
    let mut owner_of: HashMap<usize, usize> = HashMap::new();
    for (w, walk) in walks.iter().enumerate() {
        for &h in &walk.halves {
            owner_of.insert(h, w);
        }
    }
    let sigma_walk = |w: usize| -> Option<usize> {
        let h = arr.halves[walks[w].halves[0]].tail;
        let dir = arr.halves[walks[w].halves[0]].dir;
        let image = arr.sigma_node(h)?;
        let target = (-dir.0, -dir.1);
        let hh = arr.nodes[image]
            .out
            .iter()
            .copied()
            .find(|&x| angle_cmp(arr.halves[x].dir, target).is_eq())?;
        owner_of.get(&hh).copied()
    };
    let mut done = vec![false; walks.len()];
    for (w, walk) in walks.iter().enumerate() {
        if done[w] {
            continue;
        }
        done[w] = true;
        if frame.piece == PieceKind::FourHoledSphere {
            let image = sigma_walk(w).ok_or_else(|| {
                Error::Degenerate("drawing is not symmetric under x -> -x".into())
            })?;
            done[image] = true;
        }
        let (dx, dy) = arr.displacement(walk);
        let half = Q::from_integer(m / 2);
        if !(dx / half).is_integer() || !(dy / half).is_integer() {
            return Err(Error::Degenerate(
                "boundary walk with fractional displacement".into(),
            ));
        }
        let w2 = ((dx / half).to_integer(), (dy / half).to_integer());
        let class = if walk.closed {
            classify_loop(frame.piece, w2)?
        } else {
            let first = &arr.halves[walk.halves[0]];
            let last = &arr.halves[*walk.halves.last().expect("nonempty")];
            let a = arr.nodes[first.tail]
                .corner
                .expect("walks start at corners");
            let b = arr.nodes[last.head].corner.expect("walks end at corners");
            classify_arc(frame.piece, a, b, w2)?
        };
        out.push(class);
    }
    out.sort();
    Ok(out)
}

/// Slope of a primitive integer vector given in half-periods, if any.
fn primitive_slope(v: (i128, i128)) -> Option<Slope> {
    (v != (0, 0) && v.0.gcd(&v.1) == 1).then(|| Slope::from_wide(v.1, v.0).expect("nonzero"))
}

fn classify_loop(piece: PieceKind, w2: (i128, i128)) -> Result<Frontier> {
    if w2.0 % 2 != 0 || w2.1 % 2 != 0 {
        return Err(Error::Degenerate(
            "closed walk with half-period displacement".into(),
        ));
    }
    let w = (w2.0 / 2, w2.1 / 2);
    if w == (0, 0) {
        return Ok(Frontier::Inessential);
    }
    let slope =
        primitive_slope(w).ok_or_else(|| Error::Degenerate("closed walk is not simple".into()))?;
    Ok(Frontier::Essential(PieceObject::curve(piece, slope)))
}

fn classify_arc(piece: PieceKind, a: Corner, b: Corner, w2: (i128, i128)) -> Result<Frontier> {
    let not_simple = || Error::Degenerate("boundary arc is not simple".into());
    if a != b {
        let slope = primitive_slope(w2).ok_or_else(not_simple)?;
        if a.across(slope) != b {
            return Err(Error::Degenerate(
                "boundary arc endpoints disagree with its slope".into(),
            ));
        }
        return Ok(Frontier::Essential(PieceObject::seam(slope, a, b)?));
    }
    if w2.0 % 2 != 0 || w2.1 % 2 != 0 {
        return Err(not_simple());
    }
    let w = (w2.0 / 2, w2.1 / 2);
    if w == (0, 0) {
        return Ok(Frontier::Inessential);
    }
    let slope = primitive_slope(w).ok_or_else(not_simple)?;
    Ok(Frontier::Essential(match piece {
        PieceKind::OneHoledTorus => PieceObject::torus_arc(slope),
        PieceKind::FourHoledSphere => PieceObject::wave(slope, a, a.across(slope))?,
    }))
}
