//! Flat models of the two complexity-one pieces.
//!
//! The one-holed torus is the square torus `R^2 / Z^2` punctured at the
//! lattice point; the four-holed sphere is the pillowcase, the quotient of
//! the same torus by `x -> -x`, whose four cone points `(0,0)`, `(1/2,0)`,
//! `(0,1/2)` and `(1/2,1/2)` stand for the boundary components. A slope
//! `p/q` is drawn along the direction `(q, p)`. Intersection numbers are
//! computed by drawing straight representatives on a fine integer grid and
//! counting crossings between lifts.

mod config;
mod drawing;
mod ribbon;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::slopes::Slope;

pub use config::{Component, Configuration, Coord, Placed, Realization};
pub use drawing::{covering_crossings, crossings_with_window};
pub use ribbon::{neighborhood_boundary, Frontier};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    OneHoledTorus,
    FourHoledSphere,
}

impl PieceKind {
    pub fn boundary_labels(self) -> &'static [Corner] {
        match self {
            PieceKind::OneHoledTorus => &Corner::ALL[..1],
            PieceKind::FourHoledSphere => &Corner::ALL,
        }
    }
}

impl fmt::Display for PieceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PieceKind::OneHoledTorus => "one-holed torus",
            PieceKind::FourHoledSphere => "four-holed sphere",
        })
    }
}

/// The corner `(x/2, y/2)` of the pillowcase; a boundary label.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    x: u8,
    y: u8,
}

impl Corner {
    pub const ORIGIN: Corner = Corner { x: 0, y: 0 };
    pub const ALL: [Corner; 4] = [
        Corner { x: 0, y: 0 },
        Corner { x: 1, y: 0 },
        Corner { x: 0, y: 1 },
        Corner { x: 1, y: 1 },
    ];

    /// The corner `(x/2, y/2)`, coordinates taken mod 2.
    pub fn new(x: i64, y: i64) -> Corner {
        Corner {
            x: x.rem_euclid(2) as u8,
            y: y.rem_euclid(2) as u8,
        }
    }

    /// Halves `(x, y)` of the coordinates, each 0 or 1.
    pub fn halves(self) -> (i64, i64) {
        (self.x as i64, self.y as i64)
    }

    /// The corner reached from this one by the straight segment of slope `s`.
    pub fn across(self, s: Slope) -> Corner {
        let (run, rise) = s.direction();
        Corner::new(self.x as i64 + run, self.y as i64 + rise)
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = |v: u8| if v == 0 { "0" } else { "1/2" };
        write!(f, "({},{})", half(self.x), half(self.y))
    }
}

impl fmt::Debug for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Corner {
    type Err = Error;

    fn from_str(text: &str) -> Result<Corner> {
        let bad = || Error::InvalidObject(format!("corner {text:?}"));
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let half = |t: &str| match t.trim() {
            "0" => Ok(0),
            "1/2" => Ok(1),
            _ => Err(bad()),
        };
        Ok(Corner {
            x: half(a)?,
            y: half(b)?,
        })
    }
}

impl Serialize for Corner {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Corner {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Corner, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Isotopy class of an essential curve or arc in a piece.
///
/// Seams carry their endpoint labels in sorted order. A wave has both ends
/// on `end` and is the boundary of a neighbourhood of the seam `{end, over}`
/// together with the boundary component `over`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Curve {
        slope: Slope,
    },
    Seam {
        slope: Slope,
        ends: [Corner; 2],
    },
    Wave {
        slope: Slope,
        end: Corner,
        over: Corner,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PieceObject {
    pub piece: PieceKind,
    #[serde(flatten)]
    pub shape: Shape,
}

impl PieceObject {
    pub fn curve(piece: PieceKind, slope: Slope) -> PieceObject {
        PieceObject {
            piece,
            shape: Shape::Curve { slope },
        }
    }

    pub fn torus_arc(slope: Slope) -> PieceObject {
        PieceObject {
            piece: PieceKind::OneHoledTorus,
            shape: Shape::Seam {
                slope,
                ends: [Corner::ORIGIN; 2],
            },
        }
    }

    /// The sphere seam of slope `slope` leaving corner `from`.
    pub fn seam_from(slope: Slope, from: Corner) -> PieceObject {
        let to = from.across(slope);
        PieceObject {
            piece: PieceKind::FourHoledSphere,
            shape: Shape::Seam {
                slope,
                ends: sorted(from, to),
            },
        }
    }

    pub fn seam(slope: Slope, a: Corner, b: Corner) -> Result<PieceObject> {
        let obj = PieceObject {
            piece: PieceKind::FourHoledSphere,
            shape: Shape::Seam {
                slope,
                ends: sorted(a, b),
            },
        };
        obj.validate()?;
        Ok(obj)
    }

    /// The wave with both ends on `end` obtained from the seam `{end, over}`.
    pub fn wave(slope: Slope, end: Corner, over: Corner) -> Result<PieceObject> {
        let obj = PieceObject {
            piece: PieceKind::FourHoledSphere,
            shape: Shape::Wave { slope, end, over },
        };
        obj.validate()?;
        Ok(obj)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidObject(format!("{}: {why}", self.describe())));
        match (self.piece, self.shape) {
            (_, Shape::Curve { .. }) => Ok(()),
            (PieceKind::OneHoledTorus, Shape::Seam { ends, .. }) => {
                if ends != [Corner::ORIGIN; 2] {
                    return bad("torus arcs end on the single boundary label (0,0)");
                }
                Ok(())
            }
            (PieceKind::OneHoledTorus, Shape::Wave { .. }) => {
                bad("the one-holed torus has no waves")
            }
            (PieceKind::FourHoledSphere, Shape::Seam { slope, ends }) => {
                if ends[0] >= ends[1] {
                    return bad("seam ends must be distinct and sorted");
                }
                if ends[0].across(slope) != ends[1] {
                    return bad("endpoint pair does not match the slope parity");
                }
                Ok(())
            }
            (PieceKind::FourHoledSphere, Shape::Wave { slope, end, over }) => {
                if end.across(slope) != over {
                    return bad("endpoint pair does not match the slope parity");
                }
                Ok(())
            }
        }
    }

    pub fn slope(&self) -> Slope {
        match self.shape {
            Shape::Curve { slope } | Shape::Seam { slope, .. } | Shape::Wave { slope, .. } => slope,
        }
    }

    pub fn is_curve(&self) -> bool {
        matches!(self.shape, Shape::Curve { .. })
    }

    pub fn is_seam(&self) -> bool {
        matches!(self.shape, Shape::Seam { .. })
    }

    pub fn is_wave(&self) -> bool {
        matches!(self.shape, Shape::Wave { .. })
    }

    /// Boundary labels touched by the object, without repetition.
    pub fn endpoints(&self) -> Vec<Corner> {
        match self.shape {
            Shape::Curve { .. } => Vec::new(),
            Shape::Seam { ends, .. } if ends[0] == ends[1] => vec![ends[0]],
            Shape::Seam { ends, .. } => ends.to_vec(),
            Shape::Wave { end, .. } => vec![end],
        }
    }

    /// Short human-readable descriptor such as `seam 1/2 (0,0)-(0,1/2)`.
    pub fn describe(&self) -> String {
        match (self.piece, self.shape) {
            (_, Shape::Curve { slope }) => format!("curve {slope}"),
            (PieceKind::OneHoledTorus, Shape::Seam { slope, .. }) => format!("arc {slope}"),
            (_, Shape::Seam { slope, ends }) => format!("seam {slope} {}-{}", ends[0], ends[1]),
            (_, Shape::Wave { slope, end, over }) => format!("wave {slope} at {end} over {over}"),
        }
    }
}

impl fmt::Display for PieceObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn sorted(a: Corner, b: Corner) -> [Corner; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

fn same_piece(x: &PieceObject, y: &PieceObject) -> Result<PieceKind> {
    x.validate()?;
    y.validate()?;
    if x.piece != y.piece {
        return Err(Error::MixedPieces);
    }
    Ok(x.piece)
}

/// Geometric intersection number of two isotopy classes; equal classes
/// give 0 and shared boundary endpoints are not counted.
pub fn intersection_number(x: &PieceObject, y: &PieceObject) -> Result<u64> {
    same_piece(x, y)?;
    if x == y {
        return Ok(0);
    }
    drawing::count_placed(&Placed::straight(*x, 0), &Placed::straight(*y, 0), 0)
}

/// Signed count of the crossings of the straight drawings of two objects,
/// each oriented along its drawing. Defined up to an overall sign.
pub fn algebraic_intersection(x: &PieceObject, y: &PieceObject) -> Result<i64> {
    same_piece(x, y)?;
    if x == y {
        return Ok(0);
    }
    drawing::signed_placed(&Placed::straight(*x, 0), &Placed::straight(*y, 0))
}

/// Whether the two realizations already meet in exactly the intersection
/// number of their classes.
pub fn tightness_check(x: &Placed, y: &Placed) -> Result<bool> {
    same_piece(&x.object, &y.object)?;
    let drawn = drawing::count_placed(x, y, 0)?;
    let minimal = if x.object == y.object {
        0
    } else {
        intersection_number(&x.object, &y.object)?
    };
    Ok(drawn == minimal)
}

/// Whether the endpoints of two torus arcs alternate around the puncture.
pub fn endpoint_linking(a: &PieceObject, b: &PieceObject) -> Result<bool> {
    for obj in [a, b] {
        obj.validate()?;
        if obj.piece != PieceKind::OneHoledTorus || !obj.is_seam() {
            return Err(Error::Precondition(format!("{obj} is not a torus arc")));
        }
    }
    if a.slope() == b.slope() {
        return Err(Error::Precondition("arcs of equal slope".into()));
    }
    let dir = |s: Slope| {
        let (x, y) = s.direction();
        (x as i128, y as i128)
    };
    let (va, vb) = (dir(a.slope()), dir(b.slope()));
    let mut ends = [(va, 0), ((-va.0, -va.1), 0), (vb, 1), ((-vb.0, -vb.1), 1)];
    ends.sort_by(|p, q| drawing::angle_cmp(p.0, q.0));
    Ok((0..4).all(|i| ends[i].1 != ends[(i + 1) % 4].1))
}
