//! Traces of pants decompositions on the pieces of a handle system, their
//! projections to the product of Farey graphs, and audits along paths.

mod fixtures;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flats::{max_handles, product_distance, ProductVertex, SurfaceDesc};
use crate::orbifold::{algebraic_intersection, intersection_number, PieceKind, PieceObject};
use crate::pieces::{project, SpecialCouple};
use crate::slopes::Slope;

pub use fixtures::{
    figure2_scenario, generate_paths, orthogonality_fixtures, run_orthogonality, Figure2Report,
    OrthogonalityFixture, OrthogonalityReport, MIXES,
};

/// Label attached to every audit: results hold for the given instances.
pub const INSTANCE_EVIDENCE: &str = "instance evidence";

/// The complexity-one pieces cut off by a multicurve `Q`, with the base
/// tuple standing for `Q` itself when no piece is hit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleSystem {
    pub surface: SurfaceDesc,
    pub pieces: Vec<PieceKind>,
    pub base: ProductVertex,
}

impl HandleSystem {
    pub fn new(surface: SurfaceDesc, pieces: Vec<PieceKind>) -> Result<HandleSystem> {
        let base = ProductVertex::new(vec![Slope::ZERO; pieces.len()]);
        HandleSystem::with_base(surface, pieces, base)
    }

    pub fn with_base(
        surface: SurfaceDesc,
        pieces: Vec<PieceKind>,
        base: ProductVertex,
    ) -> Result<HandleSystem> {
        let system = HandleSystem {
            surface,
            pieces,
            base,
        };
        system.validate()?;
        Ok(system)
    }

    pub fn validate(&self) -> Result<()> {
        let s = SurfaceDesc::new(self.surface.g, self.surface.r)?;
        let n = self.n();
        let bad = |why: String| Err(Error::InvalidSurface(format!("{s}: {why}")));
        if n < 2 || n as u32 > max_handles(&s) {
            return bad(format!(
                "{n} pieces, expected between 2 and {}",
                max_handles(&s)
            ));
        }
        let tori = self
            .pieces
            .iter()
            .filter(|&&p| p == PieceKind::OneHoledTorus)
            .count();
        if tori as u32 > s.g {
            return bad(format!("{tori} one-holed tori need genus at least {tori}"));
        }
        if self.base.dim() != n {
            return bad(format!("base tuple of dimension {}", self.base.dim()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.pieces.len()
    }

    /// Size of the multicurve, `kappa - n`.
    pub fn multicurve_size(&self) -> i64 {
        self.surface.kappa() - self.n() as i64
    }
}

/// The trace of a pants decomposition on one piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trace {
    /// The decomposition curve lying inside the piece.
    InGraph { slope: Slope },
    /// Arcs and curves of decomposition curves meeting the piece; empty
    /// when no decomposition curve meets it.
    Crossing { objects: Vec<PieceObject> },
}

impl Trace {
    pub fn crossing(objects: Vec<PieceObject>) -> Trace {
        Trace::Crossing { objects }
    }

    /// Builds a trace from a multiset of objects; a lone curve is the
    /// in-graph case.
    pub fn from_objects(mut objects: Vec<PieceObject>) -> Trace {
        objects.sort();
        match objects.as_slice() {
            [one] if one.is_curve() => Trace::InGraph { slope: one.slope() },
            _ => Trace::Crossing { objects },
        }
    }

    pub fn objects(&self, piece: PieceKind) -> Vec<PieceObject> {
        match self {
            Trace::InGraph { slope } => vec![PieceObject::curve(piece, *slope)],
            Trace::Crossing { objects } => objects.clone(),
        }
    }

    pub fn is_in_graph(&self) -> bool {
        matches!(self, Trace::InGraph { .. })
    }

    fn normalized(&self) -> Trace {
        match self {
            Trace::InGraph { .. } => self.clone(),
            Trace::Crossing { objects } => Trace::from_objects(objects.clone()),
        }
    }

    fn validate(&self, piece: PieceKind) -> Result<()> {
        let objects = self.objects(piece);
        for obj in &objects {
            obj.validate()?;
            if obj.piece != piece {
                return Err(Error::MixedPieces);
            }
        }
        if objects.iter().filter(|o| o.is_curve()).count() > 1 {
            return Err(Error::InvalidShadow(
                "a trace holds at most one curve".into(),
            ));
        }
        for (i, a) in objects.iter().enumerate() {
            for b in &objects[i + 1..] {
                if intersection_number(a, b)? != 0 {
                    return Err(Error::InvalidShadow(format!(
                        "trace components {a} and {b} intersect"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The traces of one pants decomposition on every piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexShadow {
    pub traces: Vec<Trace>,
    pub in_pq: bool,
}

impl VertexShadow {
    /// A decomposition containing `Q`, given by its curve in each piece.
    pub fn in_pq(slopes: &[Slope]) -> VertexShadow {
        VertexShadow {
            traces: slopes
                .iter()
                .map(|&slope| Trace::InGraph { slope })
                .collect(),
            in_pq: true,
        }
    }

    pub fn validate(&self, system: &HandleSystem) -> Result<()> {
        if self.traces.len() != system.n() {
            return Err(Error::InvalidShadow(format!(
                "{} traces for {} pieces",
                self.traces.len(),
                system.n()
            )));
        }
        for (trace, &piece) in self.traces.iter().zip(&system.pieces) {
            trace.validate(piece)?;
        }
        if self.in_pq && !self.traces.iter().all(Trace::is_in_graph) {
            return Err(Error::InvalidShadow(
                "a decomposition containing Q has a curve in every piece".into(),
            ));
        }
        Ok(())
    }

    /// The tuple of curves when every piece holds one.
    pub fn tuple(&self) -> Option<ProductVertex> {
        self.traces
            .iter()
            .map(|t| match t {
                Trace::InGraph { slope } => Some(*slope),
                Trace::Crossing { .. } => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(ProductVertex::new)
    }
}

fn piece_projection(system: &HandleSystem, v: &VertexShadow) -> Result<Vec<BTreeSet<Slope>>> {
    v.validate(system)?;
    v.traces
        .iter()
        .zip(&system.pieces)
        .enumerate()
        .map(|(i, (trace, &piece))| {
            let set = project(&trace.objects(piece))?;
            Ok(if set.is_empty() {
                BTreeSet::from([system.base.coords[i]])
            } else {
                set
            })
        })
        .collect()
}

/// All tuples formed by one projected slope per piece.
pub fn project_shadow(system: &HandleSystem, v: &VertexShadow) -> Result<BTreeSet<ProductVertex>> {
    let sets = piece_projection(system, v)?;
    let mut tuples = vec![Vec::new()];
    for set in &sets {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                set.iter().map(move |&s| {
                    let mut next = t.clone();
                    next.push(s);
                    next
                })
            })
            .collect();
    }
    Ok(tuples.into_iter().map(ProductVertex::new).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// The exchanged curves meet once.
    First,
    /// The exchanged curves meet twice.
    Second,
}

impl MoveKind {
    pub fn intersection(self) -> u64 {
        match self {
            MoveKind::First => 1,
            MoveKind::Second => 2,
        }
    }
}

/// The restrictions of the removed curve `alpha` and the added curve
/// `beta` to one piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveTrace {
    pub piece: usize,
    pub alpha: Vec<PieceObject>,
    pub beta: Vec<PieceObject>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub restrictions: Vec<MoveTrace>,
}

impl Move {
    /// Checks the crossings visible in the pieces against the kind and
    /// returns the shadow the move leads to from `v`.
    pub fn apply(&self, system: &HandleSystem, v: &VertexShadow) -> Result<Vec<Trace>> {
        let bad = |why: String| Err(Error::InvalidShadow(why));
        let mut traces = v.traces.clone();
        let mut seen = BTreeSet::new();
        let mut crossings = 0;
        let mut pairs = Vec::new();
        let holds_curve = self
            .restrictions
            .iter()
            .any(|r| r.alpha.iter().chain(&r.beta).any(|o| o.is_curve()));
        for r in &self.restrictions {
            let Some(&piece) = system.pieces.get(r.piece) else {
                return bad(format!("no piece {}", r.piece));
            };
            if !seen.insert(r.piece) {
                return bad(format!("piece {} restricted twice", r.piece));
            }
            if r.alpha.is_empty() && r.beta.is_empty() {
                return bad(format!("empty restriction to piece {}", r.piece));
            }
            if holds_curve && self.restrictions.len() > 1 {
                return bad("a curve inside a piece meets no other piece".into());
            }
            let mut objects = traces[r.piece].objects(piece);
            for a in &r.alpha {
                let Some(k) = objects.iter().position(|o| o == a) else {
                    return bad(format!("{a} is not in the trace on piece {}", r.piece));
                };
                objects.remove(k);
            }
            for a in &r.alpha {
                for b in &r.beta {
                    let n = intersection_number(a, b)?;
                    if n > 0 {
                        pairs.push((*a, *b, n));
                    }
                    crossings += n;
                }
            }
            objects.extend(r.beta.iter().copied());
            traces[r.piece] = Trace::from_objects(objects);
        }
        if crossings > self.kind.intersection() {
            return bad(format!(
                "{crossings} crossings inside the pieces exceed a {:?} move",
                self.kind
            ));
        }
        if let [(a, b, 2)] = pairs.as_slice() {
            if algebraic_intersection(a, b)? != 0 {
                return bad(format!("{a} and {b} cross twice with equal signs"));
            }
        }
        let curves_only = self.restrictions.len() == 1
            && self.restrictions[0].alpha.iter().all(PieceObject::is_curve)
            && self.restrictions[0].beta.iter().all(PieceObject::is_curve)
            && self.restrictions[0].alpha.len() == 1
            && self.restrictions[0].beta.len() == 1;
        if curves_only {
            let expected = match system.pieces[self.restrictions[0].piece] {
                PieceKind::OneHoledTorus => MoveKind::First,
                PieceKind::FourHoledSphere => MoveKind::Second,
            };
            if self.kind != expected || crossings != expected.intersection() {
                return bad("curves exchanged inside a piece must be Farey neighbours".into());
            }
        }
        Ok(traces)
    }
}

/// A path of shadows with the move realizing each edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathShadow {
    pub system: HandleSystem,
    pub vertices: Vec<VertexShadow>,
    pub moves: Vec<Move>,
}

impl PathShadow {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        if self.vertices.is_empty() || self.moves.len() + 1 != self.vertices.len() {
            return Err(Error::InvalidShadow(format!(
                "{} vertices and {} moves",
                self.vertices.len(),
                self.moves.len()
            )));
        }
        for v in &self.vertices {
            v.validate(&self.system)?;
        }
        for (k, mv) in self.moves.iter().enumerate() {
            let next = mv.apply(&self.system, &self.vertices[k])?;
            let expected: Vec<Trace> = self.vertices[k + 1]
                .traces
                .iter()
                .map(Trace::normalized)
                .collect();
            if next != expected {
                return Err(Error::InvalidShadow(format!(
                    "move {k} does not lead to the next shadow"
                )));
            }
        }
        Ok(())
    }
}

/// Checks `project_shadow(v1) = {v0}` for an edge leaving `P_Q`.
pub fn orthogonality_check(
    system: &HandleSystem,
    v0: &VertexShadow,
    v1: &VertexShadow,
    mv: &Move,
) -> Result<bool> {
    v0.validate(system)?;
    v1.validate(system)?;
    let Some(tuple) = v0.tuple().filter(|_| v0.in_pq) else {
        return Err(Error::Precondition(
            "the first vertex must lie in P_Q".into(),
        ));
    };
    if v1.in_pq {
        return Err(Error::Precondition(
            "the second vertex must lie outside P_Q".into(),
        ));
    }
    let path = PathShadow {
        system: system.clone(),
        vertices: vec![v0.clone(), v1.clone()],
        moves: vec![mv.clone()],
    };
    path.validate()?;
    Ok(project_shadow(system, v1)? == BTreeSet::from([tuple]))
}

/// An edge whose exchanged curves restrict to a special couple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialCoupleHit {
    pub edge: usize,
    pub piece: usize,
    pub couple: SpecialCouple,
}

pub fn detect_special_couples(p: &PathShadow) -> Result<Vec<SpecialCoupleHit>> {
    let mut hits = Vec::new();
    for (edge, mv) in p.moves.iter().enumerate() {
        if mv.kind == MoveKind::First {
            continue;
        }
        for r in &mv.restrictions {
            if p.system.pieces.get(r.piece) != Some(&PieceKind::FourHoledSphere) {
                continue;
            }
            for a in &r.alpha {
                for b in &r.beta {
                    let (seam, curve) = match (a.is_seam(), b.is_seam()) {
                        (true, false) if b.is_curve() => (a, b),
                        (false, true) if a.is_curve() => (b, a),
                        _ => continue,
                    };
                    if intersection_number(seam, curve)? == 2 {
                        hits.push(SpecialCoupleHit {
                            edge,
                            piece: r.piece,
                            couple: SpecialCouple::new(*seam, *curve)?,
                        });
                    }
                }
            }
        }
    }
    Ok(hits)
}

/// Minimum of the product distance over the projections of the ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub length: usize,
    pub best: u32,
    pub pass: bool,
    /// A pair of choices realizing `best`.
    pub witness: (ProductVertex, ProductVertex),
    pub choices: u64,
    pub label: String,
}

pub fn audit_projection_bound(p: &PathShadow) -> Result<AuditReport> {
    let (Some(first), Some(last)) = (p.vertices.first(), p.vertices.last()) else {
        return Err(Error::InvalidShadow("a path needs a vertex".into()));
    };
    let start = project_shadow(&p.system, first)?;
    let end = project_shadow(&p.system, last)?;
    let mut best: Option<(u32, ProductVertex, ProductVertex)> = None;
    for u in &start {
        for v in &end {
            let d = product_distance(u, v)?;
            if best.as_ref().is_none_or(|b| d < b.0) {
                best = Some((d, u.clone(), v.clone()));
            }
        }
    }
    let (best, u, v) = best.expect("projections are nonempty");
    Ok(AuditReport {
        length: p.len(),
        best,
        pass: best as usize <= p.len(),
        witness: (u, v),
        choices: (start.len() * end.len()) as u64,
        label: INSTANCE_EVIDENCE.into(),
    })
}

/// Special couples next to one special edge in the same piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LfEdge {
    pub edge: usize,
    pub piece: usize,
    pub couple: SpecialCouple,
    /// Distinct couples on the previous edge sharing exactly one member.
    pub before: usize,
    /// The same on the next edge.
    pub after: usize,
    /// A neighbouring edge repeats the couple, so the path backtracks.
    pub repeated: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LfReport {
    pub edges: Vec<LfEdge>,
    pub pass: bool,
    pub label: String,
}

pub fn lemma_lf_probe(p: &PathShadow) -> Result<LfReport> {
    let hits = detect_special_couples(p)?;
    let edges: Vec<LfEdge> = hits
        .iter()
        .map(|h| {
            let near = |edge: Option<usize>| -> (usize, bool) {
                let Some(edge) = edge else {
                    return (0, false);
                };
                let others: Vec<&SpecialCouple> = hits
                    .iter()
                    .filter(|o| o.edge == edge && o.piece == h.piece)
                    .map(|o| &o.couple)
                    .collect();
                let sharing: BTreeSet<&SpecialCouple> = others
                    .iter()
                    .copied()
                    .filter(|c| (c.seam == h.couple.seam) != (c.curve == h.couple.curve))
                    .collect();
                (sharing.len(), others.contains(&&h.couple))
            };
            let (before, rb) = near(h.edge.checked_sub(1));
            let (after, ra) = near(Some(h.edge + 1));
            LfEdge {
                edge: h.edge,
                piece: h.piece,
                couple: h.couple,
                before,
                after,
                repeated: rb || ra,
                pass: before <= 1 && after <= 1 && !(rb || ra),
            }
        })
        .collect();
    Ok(LfReport {
        pass: edges.iter().all(|e| e.pass),
        edges,
        label: INSTANCE_EVIDENCE.into(),
    })
}
