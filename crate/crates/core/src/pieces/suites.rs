//! Sweeps and seeded fixture suites over the intersection oracle.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{common_boundaries, is_special_couple, lemma_int_check, project};
use crate::error::{Error, Result};
use crate::orbifold::{
    algebraic_intersection, endpoint_linking, intersection_number, neighborhood_boundary,
    tightness_check, Component, Configuration, Corner, PieceKind, PieceObject, Placed,
};
use crate::slopes::{distance, HeightGraph, Slope};

pub const DEFAULT_SEED: u64 = 0x5eed_f1a7;

/// Outcome of one suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub height: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cases: u64,
    pub failures: Vec<Value>,
    pub tallies: BTreeMap<String, u64>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str, height: i64, seed: Option<u64>) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            height,
            seed,
            cases: 0,
            failures: Vec::new(),
            tallies: BTreeMap::new(),
            pass: true,
        }
    }

    fn tally(&mut self, key: impl Into<String>) {
        *self.tallies.entry(key.into()).or_default() += 1;
    }

    fn finish(mut self) -> SuiteReport {
        self.pass = self.failures.is_empty();
        self
    }
}

fn slopes(height: i64) -> Vec<Slope> {
    if height <= 0 {
        return Vec::new();
    }
    HeightGraph::new(height).vertices().to_vec()
}

fn sphere_seams(height: i64) -> Vec<PieceObject> {
    let mut out = BTreeSet::new();
    for u in slopes(height) {
        for c in Corner::ALL {
            out.insert(PieceObject::seam_from(u, c));
        }
    }
    out.into_iter().collect()
}

fn sphere_waves(height: i64) -> Vec<PieceObject> {
    let mut out = Vec::new();
    for u in slopes(height) {
        for c in Corner::ALL {
            out.push(PieceObject::wave(u, c, c.across(u)).expect("valid wave"));
        }
    }
    out
}

fn sphere_curves(height: i64) -> Vec<PieceObject> {
    slopes(height)
        .into_iter()
        .map(|u| PieceObject::curve(PieceKind::FourHoledSphere, u))
        .collect()
}

/// Both seam projection identities over every seam pair and seam/curve pair
/// up to `height`.
pub fn sweep_int(height: i64) -> Result<SuiteReport> {
    let seams = sphere_seams(height);
    let curves = sphere_curves(height);
    let checks: Vec<_> = seams
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            for x in seams.iter().filter(|t| *t != s).chain(&curves) {
                out.push(lemma_int_check(s, x)?);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SuiteReport::new("int", height, None);
    for check in checks.into_iter().flatten() {
        report.cases += 1;
        match check.common {
            Some(j) => report.tally(format!("seam_seam_common_{j}")),
            None => report.tally("seam_curve"),
        }
        if !check.holds {
            report.failures.push(serde_json::to_value(&check)?);
        }
    }
    Ok(report.finish())
}

/// Tightness and endpoint linking for all pairs of distinct torus arcs.
pub fn sweep_lk(height: i64) -> Result<SuiteReport> {
    let arcs: Vec<_> = slopes(height)
        .into_iter()
        .map(PieceObject::torus_arc)
        .collect();
    let rows: Vec<_> = arcs
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let mut out = Vec::new();
            for b in &arcs[i + 1..] {
                let tight = tightness_check(&Placed::straight(*a, 0), &Placed::straight(*b, 0))?;
                let linked = endpoint_linking(a, b)?;
                out.push((*a, *b, tight, linked));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SuiteReport::new("lk", height, None);
    for (a, b, tight, linked) in rows.into_iter().flatten() {
        report.cases += 1;
        if !tight {
            report.tally("not_tight");
        }
        if tight && !linked {
            report
                .failures
                .push(json!({ "a": a, "b": b, "linked": linked }));
        }
    }
    Ok(report.finish())
}

/// Disjoint seam/object pairs project to Farey-adjacent or equal slopes.
pub fn suite_prs(height: i64) -> Result<SuiteReport> {
    let seams = sphere_seams(height);
    let mut others = sphere_curves(height);
    others.extend(seams.iter().copied());
    others.extend(sphere_waves(height));
    let rows: Vec<_> = seams
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            for b in others.iter().filter(|b| *b != s) {
                if b.is_seam() && common_boundaries(s, b)? > 1 {
                    continue;
                }
                if intersection_number(s, b)? != 0 {
                    continue;
                }
                out.push((*s, *b, distance(s.slope(), b.slope())));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SuiteReport::new("prs", height, None);
    for (s, b, d) in rows.into_iter().flatten() {
        report.cases += 1;
        let kind = if b.is_curve() {
            "curve"
        } else if b.is_seam() {
            "seam"
        } else {
            "wave"
        };
        report.tally(format!("{kind}_distance_{d}"));
        if d > 1 {
            report
                .failures
                .push(json!({ "seam": s, "other": b, "distance": d }));
        }
    }
    Ok(report.finish())
}

/// Which curve an object of a fixture belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Alpha,
    Beta,
}

/// Traces of two curves realizing an elementary move, restricted to a piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveFixture {
    pub piece: PieceKind,
    pub objects: Vec<PieceObject>,
    pub roles: Vec<Role>,
    /// Indices of the connected component containing the first crossing.
    pub component: Vec<usize>,
}

impl MoveFixture {
    /// Whether the traces can come from two curves meeting once, or twice
    /// with opposite signs as in a four-holed sphere. Two crossings on the
    /// same pair of traces must cancel; on distinct pairs the orientations
    /// of the traces are free.
    pub fn realizes_move(&self) -> Result<bool> {
        let mut total = 0;
        for (i, a) in self.objects.iter().enumerate() {
            for (j, b) in self.objects.iter().enumerate() {
                if self.roles[i] != Role::Alpha || self.roles[j] != Role::Beta {
                    continue;
                }
                let n = intersection_number(a, b)?;
                if n == 2 && algebraic_intersection(a, b)? != 0 {
                    return Ok(false);
                }
                total += n;
            }
        }
        Ok((1..=2).contains(&total))
    }
}

pub(crate) fn random_slope(rng: &mut ChaCha8Rng, height: i64) -> Slope {
    loop {
        let q = rng.gen_range(0..=height);
        let p = rng.gen_range(-height..=height);
        if let Ok(s) = Slope::new(p, q) {
            if s.height() <= height {
                return s;
            }
        }
    }
}

fn random_sphere_arc(rng: &mut ChaCha8Rng, height: i64) -> PieceObject {
    let u = random_slope(rng, height);
    let c = *Corner::ALL.choose(rng).expect("four corners");
    if rng.gen_bool(0.5) {
        PieceObject::seam_from(u, c)
    } else {
        PieceObject::wave(u, c, c.across(u)).expect("valid wave")
    }
}

fn random_object(
    rng: &mut ChaCha8Rng,
    piece: PieceKind,
    height: i64,
    curve_weight: f64,
) -> PieceObject {
    if rng.gen_bool(curve_weight) {
        return PieceObject::curve(piece, random_slope(rng, height));
    }
    match piece {
        PieceKind::OneHoledTorus => PieceObject::torus_arc(random_slope(rng, height)),
        PieceKind::FourHoledSphere => random_sphere_arc(rng, height),
    }
}

/// Draws one fixture: a crossing pair meeting once or twice, sometimes a
/// parallel copy of an arc, and extra arcs disjoint from everything.
fn draw_fixture(
    rng: &mut ChaCha8Rng,
    piece: PieceKind,
    height: i64,
) -> Result<Option<MoveFixture>> {
    let a = random_object(rng, piece, height, 0.25);
    let b = random_object(rng, piece, height, if a.is_curve() { 0.0 } else { 0.25 });
    let n = intersection_number(&a, &b)?;
    if !(1..=2).contains(&n) {
        return Ok(None);
    }
    if piece == PieceKind::FourHoledSphere {
        let special = match (a.is_seam(), b.is_seam(), a.is_curve(), b.is_curve()) {
            (true, _, _, true) => is_special_couple(&a, &b)?,
            (_, true, true, _) => is_special_couple(&b, &a)?,
            _ => false,
        };
        if special {
            return Ok(None);
        }
    }
    let mut fixture = MoveFixture {
        piece,
        objects: vec![a, b],
        roles: vec![Role::Alpha, Role::Beta],
        component: Vec::new(),
    };
    if n == 1 && rng.gen_bool(0.3) {
        let i = rng.gen_range(0..2);
        if !fixture.objects[i].is_curve() {
            fixture.objects.push(fixture.objects[i]);
            fixture.roles.push(fixture.roles[i]);
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let role = if rng.gen_bool(0.5) {
            Role::Alpha
        } else {
            Role::Beta
        };
        let host = if role == Role::Alpha { a } else { b };
        if host.is_curve() {
            continue;
        }
        for _ in 0..20 {
            let x = random_object(rng, piece, height, 0.0);
            let mut clear = true;
            for y in &fixture.objects {
                if intersection_number(&x, y)? != 0 {
                    clear = false;
                    break;
                }
            }
            if clear {
                fixture.objects.push(x);
                fixture.roles.push(role);
                break;
            }
        }
    }
    if !fixture.realizes_move()? {
        return Ok(None);
    }
    fixture.component = crossing_component(&fixture.objects)?;
    Ok(Some(fixture))
}

/// Objects reachable from the first one through crossings.
fn crossing_component(objects: &[PieceObject]) -> Result<Vec<usize>> {
    let mut seen = vec![false; objects.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..objects.len() {
            if !seen[j] && intersection_number(&objects[i], &objects[j])? > 0 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    Ok((0..objects.len()).filter(|&i| seen[i]).collect())
}

#[derive(Clone, Debug, Serialize)]
struct FrontierOutcome {
    essential: Vec<PieceObject>,
    witness: Option<PieceObject>,
    /// Largest distance between two projections of the traces. Above 2 no
    /// curve is within one of all of them.
    spread: u32,
}

fn check_frontier(fixture: &MoveFixture) -> Result<FrontierOutcome> {
    let config = Configuration::straight(fixture.piece, &fixture.objects)?;
    let frontier =
        neighborhood_boundary(&config, &Component::of(fixture.component.iter().copied()))?;
    let essential: Vec<PieceObject> = frontier
        .iter()
        .filter_map(|f| f.object().copied())
        .collect();
    let traced = project(&fixture.objects)?;
    let witness = essential
        .iter()
        .find(|d| traced.iter().all(|&u| distance(d.slope(), u) <= 1))
        .copied();
    let spread = traced
        .iter()
        .flat_map(|&u| traced.iter().map(move |&w| distance(u, w)))
        .max()
        .unwrap_or(0);
    Ok(FrontierOutcome {
        essential,
        witness,
        spread,
    })
}

fn frontier_suite(
    name: &str,
    piece: PieceKind,
    count: usize,
    height: i64,
    seed: u64,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fixtures = Vec::with_capacity(count);
    let mut report = SuiteReport::new(name, height, Some(seed));
    if height <= 0 {
        return Ok(report.finish());
    }
    while fixtures.len() < count {
        match draw_fixture(&mut rng, piece, height) {
            Ok(Some(f)) => fixtures.push(f),
            Ok(None) => {}
            Err(Error::Degenerate(_)) => report.tally("rejected_degenerate"),
            Err(e) => return Err(e),
        }
    }
    let outcomes: Vec<_> = fixtures.par_iter().map(check_frontier).collect();
    for (fixture, outcome) in fixtures.iter().zip(outcomes) {
        report.cases += 1;
        match outcome {
            Ok(outcome) => {
                let classes: BTreeSet<_> = outcome.essential.iter().collect();
                report.tally(format!("essential_classes_{}", classes.len()));
                report.tally(format!("component_size_{}", fixture.component.len()));
                if outcome.spread > 2 {
                    report.tally("spread_above_2");
                }
                if outcome.witness.is_none() {
                    report.failures.push(json!({
                        "fixture": fixture,
                        "frontier": outcome.essential,
                        "spread": outcome.spread,
                    }));
                }
            }
            Err(e) => report
                .failures
                .push(json!({ "fixture": fixture, "error": e.to_string() })),
        }
    }
    Ok(report.finish())
}

/// Torus fixtures: some frontier curve is within one of every projection.
pub fn suite_prt(count: usize, height: i64, seed: u64) -> Result<SuiteReport> {
    frontier_suite("prt", PieceKind::OneHoledTorus, count, height, seed)
}

/// Four-holed sphere fixtures without special couples, same conclusion.
pub fn suite_ml(count: usize, height: i64, seed: u64) -> Result<SuiteReport> {
    frontier_suite("ml", PieceKind::FourHoledSphere, count, height, seed)
}

/// Special couples `s`, `beta` with `beta` in the piece: every second seam
/// of `alpha` sharing the endpoints of `s` and missing both `s` and `beta`
/// projects to `beta`, and at least one such seam exists.
pub fn suite_sc(count: usize, height: i64, seed: u64) -> Result<SuiteReport> {
    if height <= 0 {
        return Ok(SuiteReport::new("sc", height, Some(seed)).finish());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut couples = Vec::with_capacity(count);
    while couples.len() < count {
        let s = PieceObject::seam_from(
            random_slope(&mut rng, height),
            *Corner::ALL.choose(&mut rng).expect("corner"),
        );
        let beta = PieceObject::curve(PieceKind::FourHoledSphere, random_slope(&mut rng, height));
        if s.slope().det(beta.slope()).abs() == 2 {
            couples.push((s, beta));
        }
    }
    let candidates = sphere_seams(height);
    let rows: Vec<_> = couples
        .par_iter()
        .map(|&(s, beta)| {
            let special = is_special_couple(&s, &beta)?;
            let ends: BTreeSet<Corner> = s.endpoints().into_iter().collect();
            let mut seconds = Vec::new();
            for t in &candidates {
                let same_ends = t.endpoints().into_iter().collect::<BTreeSet<_>>() == ends;
                if *t != s
                    && same_ends
                    && intersection_number(t, &s)? == 0
                    && intersection_number(t, &beta)? == 0
                {
                    seconds.push(*t);
                }
            }
            Ok((s, beta, special, seconds))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SuiteReport::new("sc", height, Some(seed));
    for (s, beta, special, seconds) in rows {
        report.cases += 1;
        report.tally(format!("second_seams_{}", seconds.len()));
        let mut ok = special && !seconds.is_empty();
        for t in &seconds {
            ok &= project(&[s, *t])?.contains(&beta.slope());
        }
        if !ok {
            report.failures.push(
                json!({ "seam": s, "curve": beta, "special": special, "second_seams": seconds }),
            );
        }
    }
    Ok(report.finish())
}
