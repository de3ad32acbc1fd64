//! Seeded shadow fixtures and the reproduced scenarios.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    audit_projection_bound, detect_special_couples, orthogonality_check, AuditReport, HandleSystem,
    Move, MoveKind, MoveTrace, PathShadow, SpecialCoupleHit, Trace, VertexShadow,
};
use crate::error::{Error, Result};
use crate::flats::SurfaceDesc;
use crate::orbifold::{
    algebraic_intersection, intersection_number, Corner, PieceKind, PieceObject,
};
use crate::pieces::random_slope;
use crate::slopes::{distance, neighbors, HeightGraph, Slope};

const T: PieceKind = PieceKind::OneHoledTorus;
const S: PieceKind = PieceKind::FourHoledSphere;

/// Piece-kind mixes of the orthogonality fixtures.
pub const MIXES: [[PieceKind; 2]; 3] = [[T, T], [T, S], [S, S]];

const PATH_SYSTEMS: [&[PieceKind]; 6] = [
    &[T, T],
    &[T, S],
    &[S, S],
    &[T, T, S],
    &[T, S, S],
    &[S, S, S],
];

/// Slope height bound of generated fixtures.
const FIXTURE_HEIGHT: i64 = 6;

/// The smallest surface carrying the given pieces.
fn surface_for(pieces: &[PieceKind]) -> Result<SurfaceDesc> {
    let g = pieces.iter().filter(|&&p| p == T).count() as i64;
    let r = (2 * pieces.len() as i64 + 2 - 3 * g).max(0);
    let r = if 3 * g - 3 + r > 0 { r } else { r + 1 };
    SurfaceDesc::new(g as u32, r as u32)
}

fn mix_name(pieces: &[PieceKind]) -> String {
    pieces
        .iter()
        .map(|p| if *p == T { 'T' } else { 'S' })
        .collect()
}

/// Seams and waves of the sphere with the given slope.
fn sphere_arcs(slope: Slope) -> Vec<PieceObject> {
    let mut out: Vec<PieceObject> = Corner::ALL
        .iter()
        .map(|&c| PieceObject::seam_from(slope, c))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    out.extend(
        Corner::ALL
            .iter()
            .map(|&c| PieceObject::wave(slope, c, c.across(slope)).expect("parity matches")),
    );
    out
}

fn arcs_of(piece: PieceKind, slope: Slope) -> Vec<PieceObject> {
    match piece {
        PieceKind::OneHoledTorus => vec![PieceObject::torus_arc(slope)],
        PieceKind::FourHoledSphere => sphere_arcs(slope),
    }
}

fn disjoint_from_all(x: &PieceObject, others: &[PieceObject]) -> Result<bool> {
    for y in others {
        if intersection_number(x, y)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn close_projections(objects: &[PieceObject]) -> bool {
    objects
        .iter()
        .all(|a| objects.iter().all(|b| distance(a.slope(), b.slope()) <= 1))
}

fn distinct_slopes(objects: &[PieceObject]) -> usize {
    objects
        .iter()
        .map(|o| o.slope())
        .collect::<BTreeSet<_>>()
        .len()
}

/// A random arc of `piece` missing the curve of slope `slope`, found by
/// rejection against the intersection oracle.
fn arc_missing(rng: &mut ChaCha8Rng, piece: PieceKind, slope: Slope) -> Result<PieceObject> {
    let curve = PieceObject::curve(piece, slope);
    let mut near: Vec<Slope> = neighbors(slope, FIXTURE_HEIGHT.max(slope.height()))?
        .into_iter()
        .collect();
    near.push(slope);
    loop {
        let u = if rng.gen_bool(0.7) {
            slope
        } else {
            *near.choose(rng).expect("nonempty")
        };
        let arc = *arcs_of(piece, u).choose(rng).expect("nonempty");
        if intersection_number(&arc, &curve)? == 0 {
            return Ok(arc);
        }
    }
}

/// Pairwise disjoint arcs with at least two projections, all within
/// distance one of each other.
fn filling_trace(rng: &mut ChaCha8Rng, piece: PieceKind) -> Result<Vec<PieceObject>> {
    loop {
        let u = random_slope(rng, FIXTURE_HEIGHT);
        let mut pool: Vec<PieceObject> = neighbors(u, FIXTURE_HEIGHT)?
            .into_iter()
            .chain([u])
            .flat_map(|s| arcs_of(piece, s))
            .collect();
        pool.shuffle(rng);
        let target = rng.gen_range(2..=3);
        let mut trace = Vec::new();
        for arc in pool {
            if trace.len() == target {
                break;
            }
            let mut next = trace.clone();
            next.push(arc);
            if !trace.contains(&arc) && close_projections(&next) && disjoint_from_all(&arc, &trace)?
            {
                trace = next;
            }
        }
        if distinct_slopes(&trace) >= 2 {
            trace.sort();
            return Ok(trace);
        }
    }
}

/// One edge leaving `P_Q`, as in the orthogonality statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalityFixture {
    pub system: HandleSystem,
    pub v0: VertexShadow,
    pub v1: VertexShadow,
    pub mv: Move,
}

/// The curve `beta` meets at most two pieces, each in one arc missing the
/// curve already there; it may miss every piece.
pub fn orthogonality_fixtures(
    mix: &[PieceKind],
    count: usize,
    seed: u64,
) -> Result<Vec<OrthogonalityFixture>> {
    let system = HandleSystem::new(surface_for(mix)?, mix.to_vec())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let slopes: Vec<Slope> = mix
                .iter()
                .map(|_| random_slope(&mut rng, FIXTURE_HEIGHT))
                .collect();
            let v0 = VertexShadow::in_pq(&slopes);
            let hit = rng.gen_range(0..=mix.len().min(2));
            let mut pieces: Vec<usize> = (0..mix.len()).collect();
            pieces.shuffle(&mut rng);
            pieces.truncate(hit);
            pieces.sort();
            let mut traces = v0.traces.clone();
            let mut restrictions = Vec::new();
            for i in pieces {
                let arc = arc_missing(&mut rng, mix[i], slopes[i])?;
                traces[i] = Trace::crossing(vec![PieceObject::curve(mix[i], slopes[i]), arc]);
                restrictions.push(MoveTrace {
                    piece: i,
                    alpha: Vec::new(),
                    beta: vec![arc],
                });
            }
            Ok(OrthogonalityFixture {
                system: system.clone(),
                v1: VertexShadow {
                    traces,
                    in_pq: false,
                },
                v0,
                mv: Move {
                    kind: MoveKind::Second,
                    restrictions,
                },
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixTally {
    pub mix: String,
    pub count: usize,
    pub passed: usize,
    /// Fixtures by number of pieces met by the added curve.
    pub pieces_hit: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub seed: u64,
    pub mixes: Vec<MixTally>,
    pub pass: bool,
}

/// Runs `count` fixtures for every mix in `MIXES`.
pub fn run_orthogonality(count: usize, seed: u64) -> Result<OrthogonalityReport> {
    let mixes = MIXES
        .par_iter()
        .enumerate()
        .map(|(k, mix)| {
            let fixtures = orthogonality_fixtures(mix, count, seed.wrapping_add(k as u64))?;
            let mut tally = MixTally {
                mix: mix_name(mix),
                count,
                passed: 0,
                pieces_hit: [0; 3],
            };
            for f in &fixtures {
                if orthogonality_check(&f.system, &f.v0, &f.v1, &f.mv)? {
                    tally.passed += 1;
                }
                tally.pieces_hit[f.mv.restrictions.len()] += 1;
            }
            Ok(tally)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrthogonalityReport {
        seed,
        pass: mixes.iter().all(|m| m.passed == m.count),
        mixes,
    })
}

fn next_vertex(system: &HandleSystem, v: &VertexShadow, mv: &Move) -> Result<VertexShadow> {
    let traces = mv.apply(system, v)?;
    let in_pq = traces.iter().all(Trace::is_in_graph);
    let next = VertexShadow { traces, in_pq };
    next.validate(system)?;
    Ok(next)
}

fn single(piece: usize, kind: MoveKind, alpha: Vec<PieceObject>, beta: Vec<PieceObject>) -> Move {
    Move {
        kind,
        restrictions: vec![MoveTrace { piece, alpha, beta }],
    }
}

/// A move confined to one piece whose projections change by at most one:
/// Farey moves of the piece curve, arcs entering or leaving beside it, and
/// arc exchanges inside filling traces.
fn propose(rng: &mut ChaCha8Rng, system: &HandleSystem, v: &VertexShadow) -> Result<Option<Move>> {
    let i = rng.gen_range(0..system.n());
    let piece = system.pieces[i];
    let farey_kind = match piece {
        PieceKind::OneHoledTorus => MoveKind::First,
        PieceKind::FourHoledSphere => MoveKind::Second,
    };
    match &v.traces[i] {
        Trace::InGraph { slope } => {
            let curve = PieceObject::curve(piece, *slope);
            if rng.gen_bool(0.6) {
                let near: Vec<Slope> = neighbors(*slope, FIXTURE_HEIGHT.max(slope.height()))?
                    .into_iter()
                    .collect();
                let w = *near.choose(rng).expect("slopes have neighbours");
                Ok(Some(single(
                    i,
                    farey_kind,
                    vec![curve],
                    vec![PieceObject::curve(piece, w)],
                )))
            } else {
                let arc = arc_missing(rng, piece, *slope)?;
                Ok(Some(single(i, MoveKind::Second, Vec::new(), vec![arc])))
            }
        }
        Trace::Crossing { objects } if objects.iter().any(|o| o.is_curve()) => {
            let arcs: Vec<&PieceObject> = objects.iter().filter(|o| !o.is_curve()).collect();
            match arcs.choose(rng) {
                Some(&&arc) => Ok(Some(single(i, MoveKind::Second, vec![arc], Vec::new()))),
                None => Ok(None),
            }
        }
        Trace::Crossing { objects } if objects.is_empty() => Ok(None),
        Trace::Crossing { objects } => {
            let k = rng.gen_range(0..objects.len());
            let a = objects[k];
            let rest: Vec<PieceObject> = objects
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, o)| *o)
                .collect();
            let mut slopes = BTreeSet::new();
            for o in &rest {
                slopes.insert(o.slope());
                slopes.extend(neighbors(
                    o.slope(),
                    FIXTURE_HEIGHT.max(o.slope().height()),
                )?);
            }
            let mut pool: Vec<PieceObject> =
                slopes.into_iter().flat_map(|s| arcs_of(piece, s)).collect();
            pool.shuffle(rng);
            for b in pool {
                let n = intersection_number(&a, &b)?;
                let kind = match n {
                    1 => MoveKind::First,
                    2 if algebraic_intersection(&a, &b)? == 0 => MoveKind::Second,
                    _ => continue,
                };
                let mut next = rest.clone();
                next.push(b);
                if distinct_slopes(&next) >= 2
                    && close_projections(&next)
                    && disjoint_from_all(&b, &rest)?
                {
                    return Ok(Some(single(i, kind, vec![a], vec![b])));
                }
            }
            Ok(None)
        }
    }
}

fn random_path(rng: &mut ChaCha8Rng, max_len: usize) -> Result<PathShadow> {
    let pieces = PATH_SYSTEMS.choose(rng).expect("nonempty").to_vec();
    let system = HandleSystem::new(surface_for(&pieces)?, pieces.clone())?;
    let traces = pieces
        .iter()
        .map(|&piece| {
            Ok(if rng.gen_bool(0.5) {
                Trace::InGraph {
                    slope: random_slope(rng, FIXTURE_HEIGHT),
                }
            } else {
                Trace::crossing(filling_trace(rng, piece)?)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let in_pq = traces.iter().all(Trace::is_in_graph);
    let mut vertices = vec![VertexShadow { traces, in_pq }];
    let mut moves = Vec::new();
    let len = rng.gen_range(1..=max_len);
    let mut attempts = 0;
    while moves.len() < len && attempts < 200 {
        attempts += 1;
        let current = vertices.last().expect("nonempty");
        if let Some(mv) = propose(rng, &system, current)? {
            let next = next_vertex(&system, current, &mv)?;
            vertices.push(next);
            moves.push(mv);
        }
    }
    Ok(PathShadow {
        system,
        vertices,
        moves,
    })
}

/// Seeded paths of length at most `max_len` over two or three pieces.
pub fn generate_paths(count: usize, max_len: usize, seed: u64) -> Result<Vec<PathShadow>> {
    if max_len == 0 {
        return Err(Error::Precondition("paths need at least one edge".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_path(&mut rng, max_len)).collect()
}

/// The two-piece edge whose projections are two apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Figure2Report {
    pub height: i64,
    pub path: PathShadow,
    pub audit: AuditReport,
    pub special: Vec<SpecialCoupleHit>,
    /// The same edge with the second piece untouched by any curve.
    pub without_second_trace: AuditReport,
    /// The added curve replaced by the one missing the seam.
    pub control: AuditReport,
}

fn first_special_couple(height: i64) -> Result<(PieceObject, PieceObject)> {
    let mut slopes = HeightGraph::new(height).vertices().to_vec();
    slopes.sort_by_key(|s| (s.height(), *s));
    for &u in &slopes {
        for &c in &slopes {
            let curve = PieceObject::curve(S, c);
            for seam in sphere_arcs(u).into_iter().filter(PieceObject::is_seam) {
                if intersection_number(&seam, &curve)? == 2
                    && algebraic_intersection(&seam, &curve)? == 0
                {
                    return Ok((seam, curve));
                }
            }
        }
    }
    Err(Error::Precondition(format!(
        "no special couple below height {height}"
    )))
}

fn disjoint_seams(height: i64) -> Result<Vec<PieceObject>> {
    let mut slopes = HeightGraph::new(height).vertices().to_vec();
    slopes.sort_by_key(|s| (s.height(), *s));
    let seams: Vec<PieceObject> = slopes
        .iter()
        .flat_map(|&u| sphere_arcs(u).into_iter().filter(PieceObject::is_seam))
        .collect();
    for (i, a) in seams.iter().enumerate() {
        for b in &seams[i + 1..] {
            if a.slope() != b.slope() && intersection_number(a, b)? == 0 {
                return Ok(vec![*a, *b]);
            }
        }
    }
    Err(Error::Precondition("no disjoint seams".into()))
}

/// A closed genus-7 surface with two four-holed sphere pieces. The removed
/// curve meets the first piece in a seam and the added curve lies there,
/// forming a special couple; the second piece keeps a trace of two seams.
pub fn figure2_scenario(height: i64) -> Result<Figure2Report> {
    let (seam, curve) = first_special_couple(height)?;
    let second = disjoint_seams(height)?;
    let system = HandleSystem::new(SurfaceDesc::new(7, 0)?, vec![S, S])?;
    let edge = |first: PieceObject, second_trace: Vec<PieceObject>, added: PieceObject| {
        let v0 = VertexShadow {
            traces: vec![
                Trace::crossing(vec![first]),
                Trace::crossing(second_trace.clone()),
            ],
            in_pq: false,
        };
        let v1 = VertexShadow {
            traces: vec![
                Trace::from_objects(vec![added]),
                Trace::crossing(second_trace),
            ],
            in_pq: false,
        };
        PathShadow {
            system: system.clone(),
            vertices: vec![v0, v1],
            moves: vec![single(0, MoveKind::Second, vec![first], vec![added])],
        }
    };
    let path = edge(seam, second.clone(), curve);
    path.validate()?;
    let bare = edge(seam, Vec::new(), curve);
    bare.validate()?;
    let control = edge(seam, second, PieceObject::curve(S, seam.slope()));
    Ok(Figure2Report {
        height,
        audit: audit_projection_bound(&path)?,
        special: detect_special_couples(&path)?,
        without_second_trace: audit_projection_bound(&bare)?,
        control: audit_projection_bound(&control)?,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surfaces_fit_the_pieces() {
        for pieces in PATH_SYSTEMS {
            let s = surface_for(pieces).unwrap();
            assert!(HandleSystem::new(s, pieces.to_vec()).is_ok(), "{s}");
        }
    }

    #[test]
    fn generated_paths_are_valid() {
        for p in generate_paths(20, 8, 3).unwrap() {
            p.validate().unwrap();
            assert!(!p.is_empty());
        }
    }
}
