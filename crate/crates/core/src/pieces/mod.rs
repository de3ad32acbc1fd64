//! Subsurface projections and special couples on complexity-one pieces.

mod suites;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbifold::{intersection_number, Corner, PieceKind, PieceObject, Shape};
use crate::slopes::{distance, Slope};

pub(crate) use suites::random_slope;
pub use suites::{
    suite_ml, suite_prs, suite_prt, suite_sc, sweep_int, sweep_lk, MoveFixture, Role, SuiteReport,
    DEFAULT_SEED,
};

/// The Farey graph seen from inside a piece: curves are adjacent when they
/// meet once (torus) or twice (sphere).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceFareyView {
    pub piece: PieceKind,
}

impl PieceFareyView {
    pub fn new(piece: PieceKind) -> PieceFareyView {
        PieceFareyView { piece }
    }

    /// Intersection number of the curves at the ends of an edge.
    pub fn edge_intersection(&self) -> u64 {
        match self.piece {
            PieceKind::OneHoledTorus => 1,
            PieceKind::FourHoledSphere => 2,
        }
    }

    /// Adjacency decided by the intersection oracle.
    pub fn adjacent(&self, u: Slope, v: Slope) -> Result<bool> {
        let n = intersection_number(
            &PieceObject::curve(self.piece, u),
            &PieceObject::curve(self.piece, v),
        )?;
        Ok(n == self.edge_intersection())
    }
}

/// Projection of a family of objects of one piece: for each arc the slope
/// of the unique curve missing it, for each curve its own slope.
///
/// Boundary-parallel curves never arise from descriptors, so nothing is
/// discarded here.
pub fn project(objects: &[PieceObject]) -> Result<BTreeSet<Slope>> {
    let Some(first) = objects.first() else {
        return Ok(BTreeSet::new());
    };
    let mut out = BTreeSet::new();
    for obj in objects {
        obj.validate()?;
        if obj.piece != first.piece {
            return Err(Error::MixedPieces);
        }
        out.insert(obj.slope());
    }
    Ok(out)
}

/// A seam with the same projection as `a`.
///
/// Waves give their stored seam and seams themselves. For a curve, the seam
/// of its slope on the side away from `reference` is chosen when the
/// reference lies on one side; otherwise the pair containing `(0,0)`.
pub fn associated_seam(a: &PieceObject, reference: Option<&PieceObject>) -> Result<PieceObject> {
    a.validate()?;
    if a.piece != PieceKind::FourHoledSphere {
        return Err(Error::Precondition(
            "associated seams live in four-holed spheres".into(),
        ));
    }
    match a.shape {
        Shape::Seam { .. } => Ok(*a),
        Shape::Wave { slope, end, over } => PieceObject::seam(slope, end, over),
        Shape::Curve { slope } => {
            let near = PieceObject::seam_from(slope, Corner::ORIGIN);
            let far = Corner::ALL
                .iter()
                .map(|&c| PieceObject::seam_from(slope, c))
                .find(|s| *s != near)
                .expect("two seams per slope");
            let side_of = |seam: &PieceObject, obj: &PieceObject| {
                let ends = seam.endpoints();
                let touched = obj.endpoints();
                !touched.is_empty() && touched.iter().all(|c| ends.contains(c))
            };
            match reference {
                Some(r) if r.piece != a.piece => Err(Error::MixedPieces),
                Some(r) if side_of(&near, r) => Ok(far),
                _ => Ok(near),
            }
        }
    }
}

/// Number of boundary labels shared by two sphere seams.
pub fn common_boundaries(s: &PieceObject, t: &PieceObject) -> Result<usize> {
    for x in [s, t] {
        x.validate()?;
        if x.piece != PieceKind::FourHoledSphere || !x.is_seam() {
            return Err(Error::Precondition(format!("{x} is not a sphere seam")));
        }
    }
    let ends = t.endpoints();
    Ok(s.endpoints().iter().filter(|c| ends.contains(c)).count())
}

/// Both sides of the seam projection identity for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntCheck {
    pub seam: PieceObject,
    pub other: PieceObject,
    /// Intersection of the projected curve with `other`.
    pub lhs: u64,
    /// Twice the intersection of the seam with `other`, plus the shared
    /// boundary count when `other` is a seam.
    pub rhs: u64,
    pub common: Option<usize>,
    pub holds: bool,
}

/// Compares `i(pi(s), x)` with `2 i(s, x) + j` for a seam `x` sharing `j`
/// boundaries with `s`, or with `2 i(s, x)` for a curve `x`.
pub fn lemma_int_check(s: &PieceObject, x: &PieceObject) -> Result<IntCheck> {
    if s.piece != PieceKind::FourHoledSphere || !s.is_seam() {
        return Err(Error::Precondition(format!("{s} is not a sphere seam")));
    }
    if x.is_wave() {
        return Err(Error::Precondition(format!(
            "{x} is neither a seam nor a curve"
        )));
    }
    if s == x {
        return Err(Error::Precondition("the seams must differ".into()));
    }
    let projected = PieceObject::curve(s.piece, s.slope());
    let lhs = intersection_number(&projected, x)?;
    let direct = intersection_number(s, x)?;
    let common = if x.is_seam() {
        Some(common_boundaries(s, x)?)
    } else {
        None
    };
    let rhs = 2 * direct + common.unwrap_or(0) as u64;
    Ok(IntCheck {
        seam: *s,
        other: *x,
        lhs,
        rhs,
        common,
        holds: lhs == rhs,
    })
}

/// A sphere seam and a sphere curve meeting twice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpecialCouple {
    pub seam: PieceObject,
    pub curve: PieceObject,
}

impl SpecialCouple {
    pub fn new(seam: PieceObject, curve: PieceObject) -> Result<SpecialCouple> {
        if !is_special_couple(&seam, &curve)? {
            return Err(Error::Precondition(format!(
                "{seam} and {curve} do not meet twice"
            )));
        }
        Ok(SpecialCouple { seam, curve })
    }
}

pub fn is_special_couple(s: &PieceObject, c: &PieceObject) -> Result<bool> {
    if s.piece != PieceKind::FourHoledSphere || !s.is_seam() {
        return Err(Error::Precondition(format!("{s} is not a sphere seam")));
    }
    if c.piece != PieceKind::FourHoledSphere || !c.is_curve() {
        return Err(Error::Precondition(format!("{c} is not a sphere curve")));
    }
    Ok(intersection_number(s, c)? == 2)
}

/// Farey distance between two projections; identical in both piece kinds.
pub fn projection_distance(u: Slope, v: Slope, _piece: PieceKind) -> u32 {
    distance(u, v)
}
