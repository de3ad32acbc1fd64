//! Integer drawings on the covering torus `R^2 / (M Z)^2` and crossing
//! counts between lifts.

use std::cmp::Ordering;

use num_integer::Integer;

use super::config::{Placed, Realization};
use super::{Corner, PieceKind, Shape};
use crate::error::{Error, Result};

pub(crate) type Pt = (i128, i128);

/// A parameter `num / den` along a segment, `den > 0`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Frac {
    pub num: i128,
    pub den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Frac {
        if den < 0 {
            Frac {
                num: -num,
                den: -den,
            }
        } else {
            Frac { num, den }
        }
    }

    pub const ZERO: Frac = Frac { num: 0, den: 1 };
}

/// Scale and corner set of a drawing.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Frame {
    pub piece: PieceKind,
    pub m: i128,
    /// Offset step between parallel copies of a closed curve.
    jitter: i128,
    /// Push-off vector for bends and wave tips; its determinant against
    /// every slope of the frame is even and nonzero.
    nudge: Pt,
    /// Wave tips sit this many nudges out, beyond every bent copy.
    tip: i128,
}

impl Frame {
    pub fn for_placed<'a>(
        piece: PieceKind,
        items: impl IntoIterator<Item = &'a Placed>,
    ) -> Result<Frame> {
        let mut height = 1i128;
        let mut copies = 0i128;
        let mut den = 1i128;
        for p in items {
            height = height.max(p.object.slope().height() as i128);
            match &p.realization {
                Realization::Straight { copy } => copies = copies.max(*copy as i128),
                Realization::Polyline { strands } => {
                    for pt in strands.iter().flatten().flatten() {
                        den = den.lcm(&(*pt.0.denom() as i128));
                    }
                }
            }
        }
        // An even rise large enough that `(j + 1) nudge + v` is parallel to
        // no slope of the frame, for every copy index `j` and direction `v`.
        let rise = 2 * ((height * (2 * copies + 2 + height) + height) / 2 + 1);
        let base = 64 * (copies + 2).pow(3) * (height + 1) * (rise + 2);
        let m = (base as u128).next_power_of_two() as i128;
        let m = m.lcm(&den);
        if m > 1 << 60 {
            return Err(Error::Overflow("drawing scale"));
        }
        let spread = ((copies + 1) as u128).next_power_of_two() as i128;
        Ok(Frame {
            piece,
            m,
            jitter: m / (8 * spread),
            nudge: (2, rise),
            tip: 4 * (copies + 1),
        })
    }

    /// Boundary label at `p`, if `p` is a puncture or cone point.
    pub fn special(&self, p: Pt) -> Option<Corner> {
        let step = match self.piece {
            PieceKind::OneHoledTorus => self.m,
            PieceKind::FourHoledSphere => self.m / 2,
        };
        (p.0 % step == 0 && p.1 % step == 0)
            .then(|| Corner::new((p.0 / step) as i64, (p.1 / step) as i64))
    }

    fn corner_point(&self, c: Corner) -> Pt {
        let (x, y) = c.halves();
        (x as i128 * self.m / 2, y as i128 * self.m / 2)
    }
}

/// A polyline in the plane. Closed strands end at a translate of their
/// start, which is then an ordinary point of the curve.
#[derive(Clone, Debug)]
pub(crate) struct Strand {
    pub pts: Vec<Pt>,
    pub closed: bool,
    /// Straight closed strands pass straight through their start point.
    pub straight: bool,
}

/// One segment of a strand.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Seg {
    pub a: Pt,
    pub b: Pt,
    /// The start point is an interior point of a straight curve.
    pub start_through: bool,
    pub end_through: bool,
}

impl Strand {
    pub fn segments(&self) -> impl Iterator<Item = Seg> + '_ {
        let n = self.pts.len() - 1;
        let through = self.closed && self.straight;
        self.pts.windows(2).enumerate().map(move |(i, w)| Seg {
            a: w[0],
            b: w[1],
            start_through: through && i == 0,
            end_through: through && i + 1 == n,
        })
    }
}

fn add(p: Pt, q: Pt) -> Pt {
    (p.0 + q.0, p.1 + q.1)
}

fn scale(k: i128, p: Pt) -> Pt {
    (k * p.0, k * p.1)
}

fn neg(p: Pt) -> Pt {
    (-p.0, -p.1)
}

pub(crate) fn cross(u: Pt, v: Pt) -> i128 {
    u.0 * v.1 - u.1 * v.0
}

fn orient(a: Pt, b: Pt, c: Pt) -> i128 {
    cross((b.0 - a.0, b.1 - a.1), (c.0 - a.0, c.1 - a.1))
}

/// Counterclockwise angular order of nonzero vectors starting from the
/// positive x-axis.
pub(crate) fn angle_cmp(u: Pt, v: Pt) -> Ordering {
    let half = |w: Pt| {
        if w.1 > 0 || (w.1 == 0 && w.0 > 0) {
            0
        } else {
            1
        }
    };
    half(u).cmp(&half(v)).then_with(|| 0.cmp(&cross(u, v)))
}

/// A point on the line `det((q, p), x) = c`.
fn point_on_line(dir: Pt, c: i128, m: i128) -> Pt {
    let (q, p) = dir;
    let e = q.extended_gcd(&p);
    let sign = e.gcd.signum();
    // q y - p x = c
    let (x, y) = (-e.y * sign * c, e.x * sign * c);
    (x.rem_euclid(m), y.rem_euclid(m))
}

/// Lifts of one object drawn in `frame`, including the images under
/// `x -> -x` on the four-holed sphere.
pub(crate) fn strands(frame: &Frame, placed: &Placed) -> Result<Vec<Strand>> {
    let m = frame.m;
    let obj = &placed.object;
    let (run, rise) = obj.slope().direction();
    let v: Pt = (run as i128, rise as i128);
    let n = frame.nudge;
    let mv = scale(m, v);
    let half = scale(m / 2, v);
    let quarter = scale(m / 4, v);
    let mut lifts = match &placed.realization {
        Realization::Straight { copy } => {
            let j = *copy as i128;
            match (obj.piece, obj.shape) {
                (PieceKind::OneHoledTorus, Shape::Curve { .. }) => {
                    let p = point_on_line(v, m / 2 + 1 + j * frame.jitter, m);
                    vec![closed(vec![p, add(p, mv)])]
                }
                (PieceKind::FourHoledSphere, Shape::Curve { .. }) => {
                    let p = point_on_line(v, m / 4 + 1 + j * frame.jitter, m);
                    vec![closed(vec![p, add(p, mv)])]
                }
                (PieceKind::OneHoledTorus, Shape::Seam { .. }) => {
                    let pts = if j == 0 {
                        vec![(0, 0), mv]
                    } else {
                        vec![(0, 0), add(half, scale(j, n)), mv]
                    };
                    vec![open(pts)]
                }
                (PieceKind::FourHoledSphere, Shape::Seam { ends, .. }) => {
                    let c = frame.corner_point(ends[0]);
                    let pts = if j == 0 {
                        vec![c, add(c, half)]
                    } else {
                        vec![c, add(add(c, quarter), scale(j, n)), add(c, half)]
                    };
                    vec![open(pts)]
                }
                (PieceKind::FourHoledSphere, Shape::Wave { over, .. }) => {
                    let c = frame.corner_point(over);
                    let tip = add(add(c, scale((j + 1) * frame.tip, n)), v);
                    vec![open(vec![add(c, neg(half)), tip, add(c, half)])]
                }
                (PieceKind::OneHoledTorus, Shape::Wave { .. }) => {
                    return Err(Error::InvalidObject(
                        "the one-holed torus has no waves".into(),
                    ))
                }
            }
        }
        Realization::Polyline { strands } => {
            let mut out = Vec::with_capacity(strands.len());
            for s in strands {
                if s.len() < 2 {
                    return Err(Error::InvalidObject(
                        "polyline strands need two points".into(),
                    ));
                }
                let pts: Vec<Pt> = s
                    .iter()
                    .map(|[x, y]| {
                        let f = |r: &num_rational::Ratio<i64>| {
                            *r.numer() as i128 * (m / *r.denom() as i128)
                        };
                        (f(&x.0), f(&y.0))
                    })
                    .collect();
                let mut strand = if obj.is_curve() {
                    closed(pts)
                } else {
                    open(pts)
                };
                strand.straight = false;
                out.push(strand);
            }
            check_polyline(frame, placed, &out)?;
            out
        }
    };
    if frame.piece == PieceKind::FourHoledSphere {
        let images: Vec<Strand> = lifts
            .iter()
            .map(|s| Strand {
                pts: s.pts.iter().map(|&p| neg(p)).collect(),
                ..s.clone()
            })
            .collect();
        lifts.extend(images);
    }
    Ok(lifts)
}

fn closed(pts: Vec<Pt>) -> Strand {
    Strand {
        pts,
        closed: true,
        straight: true,
    }
}

fn open(pts: Vec<Pt>) -> Strand {
    Strand {
        pts,
        closed: false,
        straight: true,
    }
}

/// Checks that explicit strands close up or end where the descriptor says.
fn check_polyline(frame: &Frame, placed: &Placed, strands: &[Strand]) -> Result<()> {
    let obj = &placed.object;
    let bad = |why: &str| Err(Error::InvalidObject(format!("polyline for {obj}: {why}")));
    let (run, rise) = obj.slope().direction();
    let v = (run as i128 * frame.m, rise as i128 * frame.m);
    for s in strands {
        let (first, last) = (s.pts[0], *s.pts.last().expect("two points"));
        let disp = (last.0 - first.0, last.1 - first.1);
        let parallel = |w: Pt| w == v || w == neg(v);
        match obj.shape {
            Shape::Curve { .. } => {
                if !parallel(disp) {
                    return bad("a closed strand must advance by one period of its slope");
                }
            }
            Shape::Seam { ends, .. } => {
                let (a, b) = (frame.special(first), frame.special(last));
                if a.is_none() || b.is_none() {
                    return bad("arc strands must end at boundary points");
                }
                let want = if obj.piece == PieceKind::OneHoledTorus {
                    v
                } else {
                    (v.0 / 2, v.1 / 2)
                };
                if !(disp == want || disp == neg(want)) || !ends.contains(&a.expect("checked")) {
                    return bad("endpoints do not match the descriptor");
                }
            }
            Shape::Wave { end, .. } => {
                if frame.special(first) != Some(end)
                    || frame.special(last) != Some(end)
                    || !parallel(disp)
                {
                    return bad("endpoints do not match the descriptor");
                }
            }
        }
    }
    Ok(())
}

/// A transverse crossing of `s` with a translate of `t`, at parameters
/// `ta` on `s` and `tb` on `t`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Hit {
    pub ta: Frac,
    pub tb: Frac,
}

/// Inclusive range of translates `k` for which `t + k M` can meet `s` in
/// one coordinate, widened by `pad` times its length on each side.
fn k_range(lo_s: i128, hi_s: i128, lo_t: i128, hi_t: i128, m: i128, pad: i128) -> (i128, i128) {
    let lo = Integer::div_ceil(&(lo_s - hi_t), &m);
    let hi = Integer::div_floor(&(hi_s - lo_t), &m);
    let w = (hi - lo + 1).max(1);
    (lo - pad * w, hi + pad * w)
}

/// Visits every crossing of `s` with translates of `t`, skipping the
/// translates listed in `skip`. Touching at a shared boundary point is not
/// a crossing; any other non-transverse contact is an error.
pub(crate) fn visit_hits(
    frame: &Frame,
    s: &Seg,
    t: &Seg,
    pad: i128,
    skip: &[Pt],
    mut visit: impl FnMut(Hit),
) -> Result<()> {
    let m = frame.m;
    let (kx0, kx1) = k_range(
        s.a.0.min(s.b.0),
        s.a.0.max(s.b.0),
        t.a.0.min(t.b.0),
        t.a.0.max(t.b.0),
        m,
        pad,
    );
    let (ky0, ky1) = k_range(
        s.a.1.min(s.b.1),
        s.a.1.max(s.b.1),
        t.a.1.min(t.b.1),
        t.a.1.max(t.b.1),
        m,
        pad,
    );
    let da = (s.b.0 - s.a.0, s.b.1 - s.a.1);
    for kx in kx0..=kx1 {
        for ky in ky0..=ky1 {
            let k = (kx, ky);
            if skip.contains(&k) {
                continue;
            }
            let b0 = (t.a.0 + kx * m, t.a.1 + ky * m);
            let b1 = (t.b.0 + kx * m, t.b.1 + ky * m);
            let d1 = orient(s.a, s.b, b0);
            let d2 = orient(s.a, s.b, b1);
            if (d1 > 0 && d2 > 0) || (d1 < 0 && d2 < 0) {
                continue;
            }
            let d3 = orient(b0, b1, s.a);
            let d4 = orient(b0, b1, s.b);
            if (d3 > 0 && d4 > 0) || (d3 < 0 && d4 < 0) {
                continue;
            }
            if d1 == 0 && d2 == 0 {
                collinear(frame, s, da, b0, b1)?;
                continue;
            }
            if d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0 {
                visit(Hit {
                    ta: Frac::new(d3, d3 - d4),
                    tb: Frac::new(d1, d1 - d2),
                });
                continue;
            }
            // Contact at an endpoint of one or both segments.
            let at_s = if d3 == 0 {
                Some((s.a, s.start_through, true))
            } else if d4 == 0 {
                Some((s.b, s.end_through, false))
            } else {
                None
            };
            let at_t = if d1 == 0 {
                Some((b0, t.start_through, true))
            } else if d2 == 0 {
                Some((b1, t.end_through, false))
            } else {
                None
            };
            match (at_s, at_t) {
                (Some((p, through_s, start_s)), Some((q, through_t, start_t))) => {
                    if p != q {
                        return Err(degenerate(frame, p));
                    }
                    if frame.special(p).is_some() {
                        continue;
                    }
                    // Two straight curves crossing at a point where both
                    // strands begin or end; counted once, at both starts.
                    if !(through_s && through_t) {
                        return Err(degenerate(frame, p));
                    }
                    if start_s && start_t {
                        visit(Hit {
                            ta: Frac::ZERO,
                            tb: Frac::ZERO,
                        });
                    }
                }
                (Some((p, through, start)), None) => {
                    if !through {
                        return Err(degenerate(frame, p));
                    }
                    if start {
                        visit(Hit {
                            ta: Frac::ZERO,
                            tb: Frac::new(d1, d1 - d2),
                        });
                    }
                }
                (None, Some((q, through, start))) => {
                    if !through {
                        return Err(degenerate(frame, q));
                    }
                    if start {
                        visit(Hit {
                            ta: Frac::new(d3, d3 - d4),
                            tb: Frac::ZERO,
                        });
                    }
                }
                (None, None) => unreachable!("some orientation vanished"),
            }
        }
    }
    Ok(())
}

fn degenerate(frame: &Frame, p: Pt) -> Error {
    let m = frame.m;
    Error::Degenerate(format!(
        "non-transverse contact at ({}/{m}, {}/{m})",
        p.0.rem_euclid(m),
        p.1.rem_euclid(m)
    ))
}

fn collinear(frame: &Frame, s: &Seg, da: Pt, b0: Pt, b1: Pt) -> Result<()> {
    let dot = |p: Pt| (p.0 - s.a.0) * da.0 + (p.1 - s.a.1) * da.1;
    let len = da.0 * da.0 + da.1 * da.1;
    let (u0, u1) = (dot(b0).min(dot(b1)), dot(b0).max(dot(b1)));
    if u1 < 0 || u0 > len {
        return Ok(());
    }
    let shared = if u1 == 0 {
        Some(s.a)
    } else if u0 == len {
        Some(s.b)
    } else {
        None
    };
    match shared {
        Some(p) if frame.special(p).is_some() => Ok(()),
        Some(p) => Err(degenerate(frame, p)),
        None => Err(Error::Degenerate("overlapping collinear segments".into())),
    }
}

/// Number of crossings between the drawings of `x` and `y` in the covering
/// torus, together with their signed sum.
fn torus_count(frame: &Frame, x: &Placed, y: &Placed, pad: i128) -> Result<(u64, i64)> {
    let xs = strands(frame, x)?;
    let ys = strands(frame, y)?;
    let (mut count, mut signed) = (0u64, 0i64);
    for sx in &xs {
        for a in sx.segments() {
            for sy in &ys {
                for b in sy.segments() {
                    let sign = cross(sub(a.b, a.a), sub(b.b, b.a)).signum() as i64;
                    visit_hits(frame, &a, &b, pad, &[], |_| {
                        count += 1;
                        signed += sign;
                    })?;
                }
            }
        }
    }
    Ok((count, signed))
}

fn sub(p: Pt, q: Pt) -> Pt {
    (p.0 - q.0, p.1 - q.1)
}

/// Crossings between two drawn objects in the piece; on the four-holed
/// sphere this is half the count in the covering torus.
pub(crate) fn count_placed(x: &Placed, y: &Placed, pad: i128) -> Result<u64> {
    let frame = Frame::for_placed(x.object.piece, [x, y])?;
    let (count, _) = torus_count(&frame, x, y, pad)?;
    match frame.piece {
        PieceKind::OneHoledTorus => Ok(count),
        PieceKind::FourHoledSphere if count % 2 == 0 => Ok(count / 2),
        PieceKind::FourHoledSphere => Err(Error::Degenerate(format!(
            "odd crossing count {count} in the double cover"
        ))),
    }
}

/// Crossings between the lifts of two drawn objects in the covering torus.
pub fn covering_crossings(x: &Placed, y: &Placed) -> Result<u64> {
    if x.object.piece != y.object.piece {
        return Err(Error::MixedPieces);
    }
    let frame = Frame::for_placed(x.object.piece, [x, y])?;
    Ok(torus_count(&frame, x, y, 0)?.0)
}

/// Signed crossing count of two drawn objects in the piece, each oriented
/// along its drawing.
pub(crate) fn signed_placed(x: &Placed, y: &Placed) -> Result<i64> {
    let frame = Frame::for_placed(x.object.piece, [x, y])?;
    let (_, signed) = torus_count(&frame, x, y, 0)?;
    match frame.piece {
        PieceKind::OneHoledTorus => Ok(signed),
        PieceKind::FourHoledSphere => Ok(signed / 2),
    }
}

/// Crossing count with the lift window widened by `pad` window lengths on
/// each side.
pub fn crossings_with_window(x: &Placed, y: &Placed, pad: u32) -> Result<u64> {
    if x.object.piece != y.object.piece {
        return Err(Error::MixedPieces);
    }
    count_placed(x, y, pad as i128)
}
