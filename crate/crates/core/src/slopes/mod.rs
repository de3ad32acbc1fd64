//! The Farey graph: vertices are slopes `p/q` (with `1/0` for infinity) and
//! two slopes are joined when `|p s - r q| = 1`.
//!
//! The graph is locally infinite, so every enumeration takes an explicit
//! height bound, where the height of `p/q` is `max(|p|, q)`. The exact
//! distance does not need one: it runs a breadth-first search inside the
//! ladder of Farey triangles crossed by the hyperbolic geodesic between the
//! two endpoints, which contains a geodesic of the full graph.

mod ball;
mod bfs;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use ball::{FareyBall, GeodesyVerdict, Subgraph};
pub use bfs::{bfs_oracle_distance, geodesics, GeodesicSet, HeightGraph};

/// A reduced fraction `p/q` with `q >= 0`; `1/0` is the vertex at infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };
    pub const ZERO: Slope = Slope { p: 0, q: 1 };

    /// Canonicalizes `p/q`: reduces, moves the sign to the numerator and maps
    /// every `p/0` to `1/0`.
    pub fn new(p: i64, q: i64) -> Result<Slope> {
        if p == 0 && q == 0 {
            return Err(Error::ZeroSlope);
        }
        if q == 0 {
            return Ok(Slope::INFINITY);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub fn integer(n: i64) -> Slope {
        Slope { p: n, q: 1 }
    }

    /// Canonical slope of a nonzero integer vector `(q, p)`: the direction
    /// with run `q` and rise `p`.
    pub fn from_direction(run: i64, rise: i64) -> Result<Slope> {
        Slope::new(rise, run)
    }

    pub(crate) fn from_wide(p: i128, q: i128) -> Result<Slope> {
        if p == 0 && q == 0 {
            return Err(Error::ZeroSlope);
        }
        let g = p.gcd(&q);
        let (p, q) = (p / g, q / g);
        let p = i64::try_from(p).map_err(|_| Error::Overflow("slope"))?;
        let q = i64::try_from(q).map_err(|_| Error::Overflow("slope"))?;
        Slope::new(p, q)
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }

    pub fn is_infinite(self) -> bool {
        self.q == 0
    }

    pub fn height(self) -> i64 {
        self.p.abs().max(self.q)
    }

    /// Primitive direction vector `(q, p)` of straight representatives.
    pub fn direction(self) -> (i64, i64) {
        (self.q, self.p)
    }

    /// `p_a q_b - q_a p_b`.
    pub fn det(self, other: Slope) -> i128 {
        self.p as i128 * other.q as i128 - self.q as i128 * other.p as i128
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slope> {
        let bad = || Error::MalformedSlope(s.to_string());
        let (num, den) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: i64 = num.trim().parse().map_err(|_| bad())?;
        let q: i64 = den.trim().parse().map_err(|_| bad())?;
        if q < 0 {
            return Err(bad());
        }
        Slope::new(p, q).map_err(|_| bad())
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Slope, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Orders slopes by value on the extended line, infinity last.
impl Ord for Slope {
    fn cmp(&self, other: &Slope) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                let lhs = self.p as i128 * other.q as i128;
                let rhs = other.p as i128 * self.q as i128;
                lhs.cmp(&rhs)
            }
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Slope) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn adjacent(a: Slope, b: Slope) -> bool {
    a.det(b).abs() == 1
}

/// All Farey neighbours of `a` whose height is at most `height`.
pub fn neighbors(a: Slope, height: i64) -> Result<BTreeSet<Slope>> {
    if height < a.height() {
        return Err(Error::HeightTooSmall {
            bound: height,
            required: a.height(),
        });
    }
    Ok(neighbors_unchecked(a, height).collect())
}

/// The neighbours of `a` are `±(w0 + k (p, q))` for one solution `w0` of
/// `p y - q x = 1`; this walks the `k` range that stays within the height.
pub(crate) fn neighbors_unchecked(a: Slope, height: i64) -> impl Iterator<Item = Slope> {
    let (x0, y0) = unit_partner(a);
    let (p, q) = (a.p, a.q);
    let (lo_x, hi_x) = k_range(x0, p, height);
    let (lo_y, hi_y) = k_range(y0, q, height);
    let (lo, hi) = (lo_x.max(lo_y), hi_x.min(hi_y));
    (lo..=hi).filter_map(move |k| Slope::new(x0 + k * p, y0 + k * q).ok())
}

/// Range of `k` with `|base + k step| <= bound`; unbounded steps are clamped
/// by the other coordinate, so a zero step yields a wide but finite range.
fn k_range(base: i64, step: i64, bound: i64) -> (i64, i64) {
    if step == 0 {
        if base.abs() <= bound {
            (-(bound + 1) * 2, (bound + 1) * 2)
        } else {
            (1, 0)
        }
    } else {
        let s = step.abs();
        let b = if step > 0 { base } else { -base };
        // -bound <= b + k s <= bound
        let lo = Integer::div_ceil(&(-bound - b), &s);
        let hi = Integer::div_floor(&(bound - b), &s);
        (lo, hi)
    }
}

/// A solution `(x, y)` of `p y - q x = 1`.
fn unit_partner(a: Slope) -> (i64, i64) {
    let e = a.p.extended_gcd(&a.q);
    // e.x p + e.y q = gcd = ±1
    let sign = e.gcd.signum();
    let (s, t) = (e.x * sign, e.y * sign);
    // p s + q t = 1, so y = s and x = -t.
    (-t, s)
}

/// An integer matrix of determinant ±1 acting on slopes by `p/q -> (a p + b q)/(c p + d q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unimodular {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Unimodular {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<Unimodular> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        (det.abs() == 1).then_some(Unimodular { a, b, c, d })
    }

    /// The matrix sending `s` to `1/0`.
    pub fn to_infinity(s: Slope) -> Unimodular {
        let (x, y) = unit_partner(s);
        Unimodular {
            a: y,
            b: -x,
            c: -s.q,
            d: s.p,
        }
    }

    pub fn apply(&self, s: Slope) -> Result<Slope> {
        let (p, q) = (s.p as i128, s.q as i128);
        Slope::from_wide(
            self.a as i128 * p + self.b as i128 * q,
            self.c as i128 * p + self.d as i128 * q,
        )
    }
}

/// Exact distance in the full Farey graph.
pub fn distance(a: Slope, b: Slope) -> u32 {
    if a == b {
        return 0;
    }
    if adjacent(a, b) {
        return 1;
    }
    let ladder = Ladder::build(a, b);
    ladder.distance()
}

/// Vertices of the Farey triangles crossed by the vertical geodesic from
/// infinity down to a finite target, after moving the source to infinity.
///
/// Runs of the Stern–Brocot descent that pivot on a fixed vertex form fans;
/// only the first two and last two fan vertices are kept, since any path
/// through the fan interior can be rerouted through the pivot.
struct Ladder {
    vertices: Vec<Slope>,
    target: Slope,
}

impl Ladder {
    fn build(a: Slope, b: Slope) -> Ladder {
        let m = Unimodular::to_infinity(a);
        let target = m.apply(b).expect("unimodular image of a slope is a slope");
        debug_assert!(!target.is_infinite());
        let (p, q) = (target.p as i128, target.q as i128);
        let floor = Integer::div_floor(&p, &q);
        let mut vertices = vec![Slope::INFINITY];
        // Bracket l < x < r by adjacent slopes stored as raw (num, den) pairs.
        let mut l = (floor, 1i128);
        let mut r = (floor + 1, 1i128);
        let push = |v: &mut Vec<Slope>, (n, d): (i128, i128)| {
            v.push(Slope::from_wide(n, d).expect("ladder vertex"));
        };
        push(&mut vertices, l);
        if q == 1 {
            return Ladder { vertices, target };
        }
        push(&mut vertices, r);
        loop {
            // A = x - l > 0 and C = r - x > 0, scaled by the denominators.
            let big_a = p * l.1 - l.0 * q;
            let big_c = r.0 * q - p * r.1;
            debug_assert!(big_a > 0 && big_c > 0);
            // Moving r towards l: r_k = r + k l stays above x while C > k A.
            let left = big_c / big_a;
            let (pivot, start, k, done) = if left >= 1 {
                (l, r, left, big_c % big_a == 0)
            } else {
                (r, l, big_a / big_c, big_a % big_c == 0)
            };
            let fan = |i: i128| (start.0 + i * pivot.0, start.1 + i * pivot.1);
            let mut keep = vec![1, k - 1, k];
            if k > 2 {
                keep.push(2);
                keep.push(k - 2);
            }
            keep.retain(|&i| i >= 1 && i <= k);
            keep.sort_unstable();
            keep.dedup();
            for i in keep {
                push(&mut vertices, fan(i));
            }
            if done {
                break;
            }
            if left >= 1 {
                r = fan(k);
            } else {
                l = fan(k);
            }
        }
        vertices.sort();
        vertices.dedup();
        Ladder { vertices, target }
    }

    fn distance(&self) -> u32 {
        let n = self.vertices.len();
        let index: HashMap<Slope, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i))
            .collect();
        let source = index[&Slope::INFINITY];
        let goal = index[&self.target];
        let mut dist = vec![u32::MAX; n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if u == goal {
                return dist[u];
            }
            for v in 0..n {
                if dist[v] == u32::MAX && adjacent(self.vertices[u], self.vertices[v]) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        unreachable!("the ladder is connected")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Slope {
        text.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(Slope::new(2, 4).unwrap(), s("1/2"));
        assert_eq!(Slope::new(3, -6).unwrap(), s("-1/2"));
        assert_eq!(Slope::new(-5, 0).unwrap(), Slope::INFINITY);
        assert_eq!(Slope::new(0, -7).unwrap(), Slope::ZERO);
        assert!(Slope::new(0, 0).is_err());
        assert!("1/-2".parse::<Slope>().is_err());
        assert!("12".parse::<Slope>().is_err());
        assert_eq!(s("4/6").to_string(), "2/3");
    }

    #[test]
    fn adjacency_examples() {
        assert!(adjacent(s("0/1"), s("1/0")));
        assert!(adjacent(s("1/2"), s("1/3")));
        assert!(!adjacent(s("0/1"), s("2/1")));
    }

    #[test]
    fn neighbors_of_infinity_are_integers() {
        let got = neighbors(Slope::INFINITY, 3).unwrap();
        let want: BTreeSet<Slope> = (-3..=3).map(Slope::integer).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn neighbors_of_zero() {
        let got = neighbors(Slope::ZERO, 3).unwrap();
        let want: BTreeSet<Slope> = ["1/0", "1/1", "-1/1", "1/2", "-1/2", "1/3", "-1/3"]
            .iter()
            .map(|t| s(t))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn neighbors_match_filtered_enumeration() {
        // Filter every reduced fraction of height <= 5 by the predicate.
        let all: Vec<Slope> = all_slopes(5);
        let a = s("1/2");
        let want: BTreeSet<Slope> = all.iter().copied().filter(|&b| adjacent(a, b)).collect();
        assert_eq!(neighbors(a, 5).unwrap(), want);
        for t in ["1/3", "1/1", "2/5", "0/1", "3/5", "2/3"] {
            assert!(want.contains(&s(t)), "{t}");
        }
    }

    #[test]
    fn neighbors_reject_low_bound() {
        assert!(matches!(
            neighbors(s("5/3"), 4),
            Err(Error::HeightTooSmall { .. })
        ));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(s("0/1"), s("1/0")), 1);
        assert_eq!(distance(s("-1/1"), s("1/1")), 2);
        assert_eq!(distance(s("7/3"), s("7/3")), 0);
        assert_eq!(distance(s("0/1"), s("2/1")), 2);
        assert_eq!(distance(s("0/1"), s("3/1")), 2);
    }

    #[test]
    fn long_fans_are_cheap() {
        // 1/0 -> 0 -> 1/1000000 is the only short route.
        let far = Slope::new(1, 1_000_000).unwrap();
        assert_eq!(distance(Slope::INFINITY, far), 2);
        assert_eq!(distance(far, Slope::INFINITY), 2);
    }

    #[test]
    fn to_infinity_is_unimodular() {
        for a in all_slopes(6) {
            let m = Unimodular::to_infinity(a);
            assert!(Unimodular::new(m.a, m.b, m.c, m.d).is_some());
            assert_eq!(m.apply(a).unwrap(), Slope::INFINITY);
        }
    }

    #[test]
    fn ordering_is_by_value() {
        let mut v = vec![s("1/0"), s("1/2"), s("-3/1"), s("0/1"), s("2/3")];
        v.sort();
        assert_eq!(v, vec![s("-3/1"), s("0/1"), s("1/2"), s("2/3"), s("1/0")]);
    }

    pub(crate) fn all_slopes(h: i64) -> Vec<Slope> {
        let mut out = BTreeSet::new();
        for q in 0..=h {
            for p in -h..=h {
                if let Ok(sl) = Slope::new(p, q) {
                    out.insert(sl);
                }
            }
        }
        out.into_iter().collect()
    }
}
