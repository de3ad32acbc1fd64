//! Surface arithmetic, products of Farey graphs and certified flats.

mod lattice;
mod product;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::slopes::{distance, Slope};

pub use lattice::{
    certify_flat, default_geodesic, search_geodesic, wp_rescale, FlatCertificate, GeodesicLine,
    LatticeEmbedding, WeightedFlat, DEFAULT_LINE, DEFAULT_WINDOW,
};
pub use product::{
    product_bfs_agrees, subproduct_total_geodesy, total_geodesy, GeodesyReport, ProductGraph,
};

/// A compact orientable surface of genus `g` with `r` boundary components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceDesc {
    pub g: u32,
    pub r: u32,
}

impl SurfaceDesc {
    pub fn new(g: u32, r: u32) -> Result<SurfaceDesc> {
        let s = SurfaceDesc { g, r };
        if s.kappa() <= 0 {
            return Err(Error::InvalidSurface(format!(
                "genus {g} with {r} boundary components has complexity {}",
                s.kappa()
            )));
        }
        Ok(s)
    }

    /// Number of curves in a pants decomposition, `3g - 3 + r`.
    pub fn kappa(&self) -> i64 {
        3 * self.g as i64 - 3 + self.r as i64
    }
}

impl fmt::Display for SurfaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({}, {})", self.g, self.r)
    }
}

/// Largest number of disjoint complexity-one subsurfaces, `(3g + r - 2) / 2`.
pub fn max_handles(s: &SurfaceDesc) -> u32 {
    (3 * s.g + s.r).saturating_sub(2) / 2
}

/// Whether some multicurve cuts off at least two complexity-one pieces.
pub fn admits_handle_multicurve(s: &SurfaceDesc) -> bool {
    max_handles(s) >= 2
}

/// Counts of a decomposition into one-holed tori, four-holed spheres and
/// possibly one pair of pants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub surface: SurfaceDesc,
    pub tori: u32,
    pub spheres: u32,
    pub pants: bool,
}

impl Template {
    pub fn pieces(&self) -> u32 {
        self.tori + self.spheres
    }
}

/// One torus per handle and four-holed spheres for the rest; a pair of
/// pants is left over exactly when `g + r` is odd.
pub fn decompose_template(s: &SurfaceDesc) -> Template {
    let spheres = ((s.g + s.r) / 2).saturating_sub(1);
    Template {
        surface: *s,
        tori: s.g,
        spheres,
        pants: (s.g + s.r) % 2 == 1,
    }
}

/// A vertex of a product of Farey graphs, one slope per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductVertex {
    pub coords: Vec<Slope>,
}

impl ProductVertex {
    pub fn new(coords: Vec<Slope>) -> ProductVertex {
        ProductVertex { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl fmt::Display for ProductVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Graph metric of the product: the sum of the factor distances.
pub fn product_distance(u: &ProductVertex, v: &ProductVertex) -> Result<u32> {
    if u.dim() != v.dim() {
        return Err(Error::Precondition(format!(
            "product vertices of dimensions {} and {}",
            u.dim(),
            v.dim()
        )));
    }
    Ok(u.coords
        .iter()
        .zip(&v.coords)
        .map(|(&a, &b)| distance(a, b))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(items: &[&str]) -> ProductVertex {
        ProductVertex::new(items.iter().map(|t| t.parse().unwrap()).collect())
    }

    #[test]
    fn rank_arithmetic() {
        assert_eq!(max_handles(&SurfaceDesc::new(7, 0).unwrap()), 9);
        assert_eq!(max_handles(&SurfaceDesc::new(2, 0).unwrap()), 2);
        let five = SurfaceDesc::new(0, 5).unwrap();
        assert_eq!(max_handles(&five), 1);
        assert!(!admits_handle_multicurve(&five));
        assert!(SurfaceDesc::new(0, 3).is_err());
        assert!(SurfaceDesc::new(1, 0).is_err());
    }

    #[test]
    fn templates() {
        let t = decompose_template(&SurfaceDesc::new(2, 0).unwrap());
        assert_eq!((t.tori, t.spheres, t.pants), (2, 0, false));
        assert_eq!(
            decompose_template(&SurfaceDesc::new(1, 3).unwrap()).pieces(),
            2
        );
        let g7 = decompose_template(&SurfaceDesc::new(7, 0).unwrap());
        assert_eq!((g7.tori, g7.spheres, g7.pants), (7, 2, true));
        assert_eq!(g7.pieces(), 9);
        let s04 = decompose_template(&SurfaceDesc::new(0, 4).unwrap());
        assert_eq!((s04.tori, s04.spheres, s04.pants), (0, 1, false));
    }

    #[test]
    fn product_distances() {
        assert_eq!(
            product_distance(&pv(&["0/1", "0/1"]), &pv(&["1/0", "1/0"])).unwrap(),
            2
        );
        let u = pv(&["0/1", "-1/1"]);
        assert_eq!(product_distance(&u, &u).unwrap(), 0);
        assert_eq!(product_distance(&u, &pv(&["1/0", "1/1"])).unwrap(), 3);
        assert!(product_distance(&u, &pv(&["0/1"])).is_err());
    }
}
