use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{Corner, PieceKind, PieceObject};
use crate::error::{Error, Result};

/// An exact rational coordinate, written `"num/den"` on the wire.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord(pub Ratio<i64>);

impl Coord {
    pub fn new(num: i64, den: i64) -> Result<Coord> {
        if den == 0 {
            return Err(Error::MalformedRational(format!("{num}/{den}")));
        }
        Ok(Coord(Ratio::new(num, den)))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Coord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Coord> {
        let bad = || Error::MalformedRational(text.to_string());
        let (n, d) = text.trim().split_once('/').unwrap_or((text.trim(), "1"));
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        Coord::new(n, d).map_err(|_| bad())
    }
}

impl Serialize for Coord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Coord, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// How an object is drawn.
///
/// `Straight` draws the flat geodesic representative; copies with larger
/// index are pushed off the earlier ones. `Polyline` gives explicit strands
/// in unit coordinates of the covering plane; on the four-holed sphere only
/// one lift is listed and its image under `x -> -x` is added automatically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realization {
    Straight { copy: u32 },
    Polyline { strands: Vec<Vec<[Coord; 2]>> },
}

impl Default for Realization {
    fn default() -> Realization {
        Realization::Straight { copy: 0 }
    }
}

/// An object together with its drawing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placed {
    pub object: PieceObject,
    #[serde(default)]
    pub realization: Realization,
}

impl Placed {
    pub fn straight(object: PieceObject, copy: u32) -> Placed {
        Placed {
            object,
            realization: Realization::Straight { copy },
        }
    }

    pub fn polyline(object: PieceObject, strands: Vec<Vec<[Coord; 2]>>) -> Placed {
        Placed {
            object,
            realization: Realization::Polyline { strands },
        }
    }
}

/// Finitely many drawn objects in one piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub piece: PieceKind,
    pub objects: Vec<Placed>,
}

impl Configuration {
    /// Straight drawings; repeated descriptors become parallel copies.
    pub fn straight(piece: PieceKind, objects: &[PieceObject]) -> Result<Configuration> {
        let mut placed: Vec<Placed> = Vec::with_capacity(objects.len());
        for obj in objects {
            let copy = placed.iter().filter(|p| p.object == *obj).count() as u32;
            placed.push(Placed::straight(*obj, copy));
        }
        let config = Configuration {
            piece,
            objects: placed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.objects {
            p.object.validate()?;
            if p.object.piece != self.piece {
                return Err(Error::MixedPieces);
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Configuration> {
        let config: Configuration = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// A sub-union of a configuration: some of its objects plus boundary
/// components that are thickened together with them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub objects: Vec<usize>,
    #[serde(default)]
    pub boundary: Vec<Corner>,
}

impl Component {
    pub fn of(objects: impl IntoIterator<Item = usize>) -> Component {
        Component {
            objects: objects.into_iter().collect(),
            boundary: Vec::new(),
        }
    }

    pub fn with_boundary(mut self, corner: Corner) -> Component {
        self.boundary.push(corner);
        self
    }
}
