use std::collections::BTreeSet;

use pantsflat::flats::{ProductVertex, SurfaceDesc};
use pantsflat::orbifold::{algebraic_intersection, intersection_number, Corner, PieceObject};
use pantsflat::shadows::{
    audit_projection_bound, detect_special_couples, figure2_scenario, generate_paths,
    lemma_lf_probe, orthogonality_check, orthogonality_fixtures, project_shadow, run_orthogonality,
    HandleSystem, Move, MoveKind, MoveTrace, PathShadow, Trace, VertexShadow, MIXES,
};
use pantsflat::slopes::{distance, HeightGraph};
use pantsflat::{Error, PieceKind, Slope};
use proptest::prelude::*;

const T: PieceKind = PieceKind::OneHoledTorus;
const S: PieceKind = PieceKind::FourHoledSphere;

fn slope(text: &str) -> Slope {
    text.parse().unwrap()
}

fn seam(text: &str, a: (i64, i64), b: (i64, i64)) -> PieceObject {
    PieceObject::seam(slope(text), Corner::new(a.0, a.1), Corner::new(b.0, b.1)).unwrap()
}

fn two_spheres() -> HandleSystem {
    HandleSystem::new(SurfaceDesc::new(7, 0).unwrap(), vec![S, S]).unwrap()
}

fn one_edge(system: &HandleSystem, v0: VertexShadow, v1: VertexShadow, mv: Move) -> PathShadow {
    PathShadow {
        system: system.clone(),
        vertices: vec![v0, v1],
        moves: vec![mv],
    }
}

/// Sum over pieces of the least Farey distance between the two projected
/// slope sets, computed from the traces directly.
fn piecewise_best(p: &PathShadow) -> u32 {
    let sets = |v: &VertexShadow| -> Vec<BTreeSet<Slope>> {
        v.traces
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let set: BTreeSet<Slope> = match t {
                    Trace::InGraph { slope } => BTreeSet::from([*slope]),
                    Trace::Crossing { objects } => objects.iter().map(|o| o.slope()).collect(),
                };
                if set.is_empty() {
                    BTreeSet::from([p.system.base.coords[i]])
                } else {
                    set
                }
            })
            .collect()
    };
    let (a, b) = (sets(&p.vertices[0]), sets(p.vertices.last().unwrap()));
    a.iter()
        .zip(&b)
        .map(|(x, y)| {
            x.iter()
                .flat_map(|&u| y.iter().map(move |&v| distance(u, v)))
                .min()
                .unwrap()
        })
        .sum()
}

#[test]
fn handle_systems_are_checked() {
    assert!(HandleSystem::new(SurfaceDesc::new(2, 0).unwrap(), vec![T, T]).is_ok());
    assert!(HandleSystem::new(SurfaceDesc::new(2, 0).unwrap(), vec![T]).is_err());
    assert!(HandleSystem::new(SurfaceDesc::new(2, 0).unwrap(), vec![T, T, T]).is_err());
    assert!(HandleSystem::new(SurfaceDesc::new(0, 6).unwrap(), vec![T, S]).is_err());
    let s = HandleSystem::new(SurfaceDesc::new(7, 0).unwrap(), vec![S; 9]).unwrap();
    assert_eq!(s.multicurve_size(), 9);
}

#[test]
fn projections_of_shadows() {
    let system = two_spheres();
    let v = VertexShadow::in_pq(&[slope("1/2"), slope("-3/1")]);
    let tuple = ProductVertex::new(vec![slope("1/2"), slope("-3/1")]);
    assert_eq!(
        project_shadow(&system, &v).unwrap(),
        BTreeSet::from([tuple])
    );

    let untouched = VertexShadow {
        traces: vec![Trace::crossing(Vec::new()), Trace::crossing(Vec::new())],
        in_pq: false,
    };
    assert_eq!(
        project_shadow(&system, &untouched).unwrap(),
        BTreeSet::from([system.base.clone()])
    );

    let a = seam("0/1", (0, 0), (1, 0));
    let b = seam("1/0", (1, 0), (1, 1));
    assert_eq!(intersection_number(&a, &b).unwrap(), 0);
    let two = VertexShadow {
        traces: vec![
            Trace::crossing(vec![a, b]),
            Trace::InGraph {
                slope: slope("2/1"),
            },
        ],
        in_pq: false,
    };
    let set = project_shadow(&system, &two).unwrap();
    assert_eq!(set.len(), 2);
    assert!(set.contains(&ProductVertex::new(vec![slope("1/0"), slope("2/1")])));
}

#[test]
fn intersecting_traces_are_rejected() {
    let system = two_spheres();
    let v = VertexShadow {
        traces: vec![
            Trace::crossing(vec![
                seam("1/1", (0, 0), (1, 1)),
                seam("-1/1", (1, 0), (0, 1)),
            ]),
            Trace::InGraph { slope: Slope::ZERO },
        ],
        in_pq: false,
    };
    assert!(matches!(
        project_shadow(&system, &v),
        Err(Error::InvalidShadow(_))
    ));
    let flagged = VertexShadow {
        traces: vec![
            Trace::crossing(Vec::new()),
            Trace::InGraph { slope: Slope::ZERO },
        ],
        in_pq: true,
    };
    assert!(flagged.validate(&system).is_err());
}

#[test]
fn orthogonality_examples() {
    let system = HandleSystem::new(SurfaceDesc::new(2, 0).unwrap(), vec![T, T]).unwrap();
    let v0 = VertexShadow::in_pq(&[slope("1/3"), Slope::ZERO]);
    let arc = PieceObject::torus_arc(slope("1/3"));
    let curve = PieceObject::curve(T, slope("1/3"));
    let v1 = VertexShadow {
        traces: vec![
            Trace::crossing(vec![curve, arc]),
            Trace::InGraph { slope: Slope::ZERO },
        ],
        in_pq: false,
    };
    let mv = Move {
        kind: MoveKind::Second,
        restrictions: vec![MoveTrace {
            piece: 0,
            alpha: vec![],
            beta: vec![arc],
        }],
    };
    assert!(orthogonality_check(&system, &v0, &v1, &mv).unwrap());

    let missing = VertexShadow {
        in_pq: false,
        ..v0.clone()
    };
    let none = Move {
        kind: MoveKind::Second,
        restrictions: vec![],
    };
    assert!(orthogonality_check(&system, &v0, &missing, &none).unwrap());

    let crossing_arc = PieceObject::torus_arc(slope("0/1"));
    let bad = VertexShadow {
        traces: vec![
            Trace::crossing(vec![curve, crossing_arc]),
            Trace::InGraph { slope: Slope::ZERO },
        ],
        in_pq: false,
    };
    let bad_move = Move {
        kind: MoveKind::Second,
        restrictions: vec![MoveTrace {
            piece: 0,
            alpha: vec![],
            beta: vec![crossing_arc],
        }],
    };
    assert!(orthogonality_check(&system, &v0, &bad, &bad_move).is_err());
    assert!(orthogonality_check(&system, &missing, &v1, &mv).is_err());
}

#[test]
fn orthogonality_fixtures_pass() {
    let report = run_orthogonality(200, 17).unwrap();
    for m in &report.mixes {
        assert_eq!(m.passed, 200, "{m:?}");
        assert!(m.pieces_hit.iter().all(|&k| k > 0), "{m:?}");
    }
    assert!(report.pass);
}

#[test]
fn orthogonality_fixtures_round_trip() {
    for mix in MIXES {
        for f in orthogonality_fixtures(&mix, 10, 3).unwrap() {
            let json = serde_json::to_string(&f).unwrap();
            assert_eq!(
                serde_json::from_str::<pantsflat::shadows::OrthogonalityFixture>(&json).unwrap(),
                f
            );
        }
    }
}

#[test]
fn figure2_distance_is_two() {
    let report = figure2_scenario(6).unwrap();
    assert_eq!(report.audit.best, 2);
    assert!(!report.audit.pass);
    assert_eq!(piecewise_best(&report.path), 2);
    assert_eq!(report.special.len(), 1);
    assert_eq!(report.without_second_trace.best, 2);
    assert!(report.control.best <= 1);
    let higher = figure2_scenario(10).unwrap();
    assert_eq!(higher.audit.best, 2);
    let couple = report.special[0].couple;
    assert_eq!(distance(couple.seam.slope(), couple.curve.slope()), 2);
}

#[test]
fn special_couples_along_paths() {
    let system = two_spheres();
    let report = figure2_scenario(6).unwrap();
    assert_eq!(report.special[0].edge, 0);
    let v = VertexShadow::in_pq(&[slope("0/1"), slope("1/0")]);
    let w = VertexShadow::in_pq(&[slope("1/1"), slope("1/0")]);
    let farey = Move {
        kind: MoveKind::Second,
        restrictions: vec![MoveTrace {
            piece: 0,
            alpha: vec![PieceObject::curve(S, slope("0/1"))],
            beta: vec![PieceObject::curve(S, slope("1/1"))],
        }],
    };
    let path = one_edge(&system, v.clone(), w.clone(), farey);
    path.validate().unwrap();
    assert!(detect_special_couples(&path).unwrap().is_empty());
    let audit = audit_projection_bound(&path).unwrap();
    assert_eq!((audit.best, audit.pass), (1, true));
    let wrong_kind = Move {
        kind: MoveKind::First,
        ..path.moves[0].clone()
    };
    assert!(one_edge(&system, v, w, wrong_kind).validate().is_err());
}

/// Seams of height at most 4 forming a valid special couple with `curve`.
fn couple_seams(curve: &PieceObject) -> Vec<PieceObject> {
    let mut out = BTreeSet::new();
    for &u in HeightGraph::new(4).vertices() {
        for c in Corner::ALL {
            let s = PieceObject::seam_from(u, c);
            if intersection_number(&s, curve).unwrap() == 2
                && algebraic_intersection(&s, curve).unwrap() == 0
            {
                out.insert(s);
            }
        }
    }
    out.into_iter().collect()
}

fn chain(
    system: &HandleSystem,
    first: PieceObject,
    beta: PieceObject,
    last: PieceObject,
) -> PathShadow {
    let other = Trace::InGraph { slope: Slope::ZERO };
    let v = |t: Trace| VertexShadow {
        traces: vec![t, other.clone()],
        in_pq: false,
    };
    let edge = |a: PieceObject, b: PieceObject| Move {
        kind: MoveKind::Second,
        restrictions: vec![MoveTrace {
            piece: 0,
            alpha: vec![a],
            beta: vec![b],
        }],
    };
    PathShadow {
        system: system.clone(),
        vertices: vec![
            v(Trace::crossing(vec![first])),
            VertexShadow {
                traces: vec![Trace::from_objects(vec![beta]), other.clone()],
                in_pq: true,
            },
            v(Trace::crossing(vec![last])),
        ],
        moves: vec![edge(first, beta), edge(beta, last)],
    }
}

#[test]
fn lf_probe_on_chains() {
    let system = two_spheres();
    let beta = PieceObject::curve(S, slope("2/1"));
    let seams = couple_seams(&beta);
    assert!(seams.len() >= 2, "{seams:?}");
    let onward = chain(&system, seams[0], beta, seams[1]);
    onward.validate().unwrap();
    let report = lemma_lf_probe(&onward).unwrap();
    assert_eq!(report.edges.len(), 2);
    assert!(report
        .edges
        .iter()
        .all(|e| e.before + e.after == 1 && !e.repeated));
    assert!(report.pass);

    let back = chain(&system, seams[0], beta, seams[0]);
    back.validate().unwrap();
    let report = lemma_lf_probe(&back).unwrap();
    assert!(report.edges.iter().all(|e| e.repeated));
    assert!(!report.pass);

    let quiet = figure2_scenario(6).unwrap().control;
    assert!(quiet.pass);
    let plain = generate_paths(5, 4, 1).unwrap();
    for p in &plain {
        assert!(lemma_lf_probe(p).unwrap().pass);
    }
}

#[test]
fn generated_paths_respect_the_bound() {
    let paths = generate_paths(300, 8, 0x5eed).unwrap();
    let mut longest = 0;
    for p in &paths {
        p.validate().unwrap();
        assert!((2..=3).contains(&p.system.n()));
        assert!(p.len() <= 8);
        longest = longest.max(p.len());
        let audit = audit_projection_bound(p).unwrap();
        assert_eq!(audit.best, piecewise_best(p));
        assert!(audit.pass, "{}", serde_json::to_string(p).unwrap());
        let json = serde_json::to_string(p).unwrap();
        assert_eq!(&serde_json::from_str::<PathShadow>(&json).unwrap(), p);
    }
    assert_eq!(longest, 8);
}

fn arb_slope() -> impl Strategy<Value = Slope> {
    (-9i64..=9, 0i64..=9).prop_filter_map("reduced", |(p, q)| Slope::new(p, q).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn in_pq_projects_to_itself(slopes in prop::collection::vec(arb_slope(), 3)) {
        let system = HandleSystem::new(SurfaceDesc::new(2, 2).unwrap(), vec![T, T, S]).unwrap();
        let v = VertexShadow::in_pq(&slopes);
        let set = project_shadow(&system, &v).unwrap();
        prop_assert_eq!(set, BTreeSet::from([ProductVertex::new(slopes)]));
    }

    #[test]
    fn constant_paths_have_zero_best(slopes in prop::collection::vec(arb_slope(), 2)) {
        let system = two_spheres();
        let v = VertexShadow::in_pq(&slopes);
        let arc = PieceObject::seam_from(slopes[0], Corner::ORIGIN);
        let mv = Move {
            kind: MoveKind::Second,
            restrictions: vec![MoveTrace { piece: 0, alpha: vec![], beta: vec![arc] }],
        };
        let w = VertexShadow {
            traces: vec![
                Trace::crossing(vec![PieceObject::curve(S, slopes[0]), arc]),
                v.traces[1].clone(),
            ],
            in_pq: false,
        };
        let path = one_edge(&system, v, w, mv);
        path.validate().unwrap();
        prop_assert_eq!(audit_projection_bound(&path).unwrap().best, 0);
    }
}
