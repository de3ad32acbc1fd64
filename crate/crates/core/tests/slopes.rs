use std::collections::{BTreeSet, HashMap, VecDeque};

use pantsflat::slopes::{
    adjacent, bfs_oracle_distance, distance, geodesics, neighbors, FareyBall, Subgraph, Unimodular,
};
use pantsflat::Slope;
use proptest::prelude::*;

fn s(text: &str) -> Slope {
    text.parse().unwrap()
}

/// Every reduced slope of height at most `h`, listed by brute force.
fn all_slopes(h: i64) -> Vec<Slope> {
    let mut out = BTreeSet::new();
    for q in 0..=h {
        for p in -h..=h {
            if let Ok(x) = Slope::new(p, q) {
                out.insert(x);
            }
        }
    }
    out.into_iter().collect()
}

/// Breadth-first distances with adjacency decided by the determinant.
fn brute_distances(source: Slope, vertices: &[Slope]) -> HashMap<Slope, u32> {
    let mut dist = HashMap::from([(source, 0)]);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        for &v in vertices {
            if (u.p() as i128 * v.q() as i128 - u.q() as i128 * v.p() as i128).abs() == 1
                && !dist.contains_key(&v)
            {
                dist.insert(v, du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

#[test]
fn parsing_and_canonical_form() {
    assert_eq!(s("2/4"), s("1/2"));
    assert_eq!(s("-1/0"), Slope::INFINITY);
    assert_eq!(Slope::new(3, -1).unwrap().to_string(), "-3/1");
    for bad in ["1", "a/b", "0/0", "1/2/3", "3/-1"] {
        assert!(bad.parse::<Slope>().is_err(), "{bad}");
    }
    let json = serde_json::to_string(&s("-5/3")).unwrap();
    assert_eq!(json, "\"-5/3\"");
}

#[test]
fn adjacency_examples() {
    assert!(adjacent(s("0/1"), s("1/0")));
    assert!(adjacent(s("1/2"), s("1/3")));
    assert!(!adjacent(s("0/1"), s("2/1")));
}

#[test]
fn neighbour_sets() {
    let inf: BTreeSet<Slope> = (-3..=3).map(Slope::integer).collect();
    assert_eq!(neighbors(Slope::INFINITY, 3).unwrap(), inf);
    let zero: BTreeSet<Slope> = ["1/0", "1/1", "-1/1", "1/2", "-1/2", "1/3", "-1/3"]
        .iter()
        .map(|t| s(t))
        .collect();
    assert_eq!(neighbors(Slope::ZERO, 3).unwrap(), zero);
    let half = neighbors(s("1/2"), 5).unwrap();
    let brute: BTreeSet<Slope> = all_slopes(5)
        .into_iter()
        .filter(|&b| adjacent(s("1/2"), b))
        .collect();
    assert_eq!(half, brute);
    for t in ["1/3", "1/1", "2/5", "0/1", "3/5", "2/3"] {
        assert!(half.contains(&s(t)), "{t}");
    }
    assert!(neighbors(s("5/8"), 7).is_err());
}

#[test]
fn distance_examples() {
    assert_eq!(distance(s("0/1"), s("1/0")), 1);
    assert_eq!(distance(s("-1/1"), s("1/1")), 2);
    assert_eq!(distance(s("7/5"), s("7/5")), 0);
    assert_eq!(
        bfs_oracle_distance(s("-1/1"), s("1/1"), 1).unwrap(),
        Some(2)
    );
}

#[test]
fn distance_matches_brute_force_bfs() {
    let h = 7;
    let vertices = all_slopes(2 * h);
    let low: Vec<Slope> = all_slopes(h);
    for &a in &low {
        let dist = brute_distances(a, &vertices);
        for &b in &low {
            assert_eq!(distance(a, b), dist[&b], "{a} {b}");
        }
    }
}

#[test]
fn geodesic_sets() {
    let set = geodesics(s("-1/1"), s("1/1"), 2).unwrap();
    assert_eq!(
        set.paths,
        vec![
            vec![s("-1/1"), s("0/1"), s("1/1")],
            vec![s("-1/1"), s("1/0"), s("1/1")],
        ]
    );
    assert!(!set.truncated);
    let edge = geodesics(s("0/1"), s("1/1"), 1).unwrap();
    assert_eq!(edge.paths.len(), 1);
    assert_eq!(edge.length, 1);
    let far = geodesics(s("0/1"), s("3/5"), 10).unwrap();
    assert!(!far.paths.is_empty());
    for path in &far.paths {
        assert_eq!(path.len() as u32, far.length + 1);
        assert!(path.windows(2).all(|w| adjacent(w[0], w[1])));
    }
}

#[test]
fn subgraph_checks() {
    let ball = FareyBall::new(Slope::ZERO, 3, 4).unwrap();
    let triangle = Subgraph::induced([s("0/1"), s("1/1"), s("1/0")]);
    assert!(ball.is_totally_geodesic(&triangle).unwrap().holds);
    assert!(ball.is_convex(&triangle).unwrap().holds);
    let interval = Subgraph::interval(&ball, s("-1/1"), s("1/1"));
    assert!(ball.is_convex(&interval).unwrap().holds);
    let verdict = ball.is_totally_geodesic(&interval).unwrap();
    assert!(!verdict.holds);
    assert_eq!(
        verdict.witness,
        Some(vec![s("-1/1"), Slope::INFINITY, s("1/1")])
    );
    let single = Subgraph::induced([s("2/3")]);
    assert!(ball.is_totally_geodesic(&single).unwrap().holds);
    let ends = Subgraph::induced([s("-1/1"), s("1/1")]);
    let verdict = ball.is_convex(&ends).unwrap();
    assert!(!verdict.holds);
    assert_eq!(verdict.witness, Some(vec![s("-1/1"), s("1/1")]));
    let outside = Subgraph::induced([s("17/3")]);
    assert!(ball.is_convex(&outside).is_err());
}

fn arb_slope(h: i64) -> impl Strategy<Value = Slope> {
    (-h..=h, 0..=h).prop_filter_map("reduced", |(p, q)| Slope::new(p, q).ok())
}

fn arb_unimodular() -> impl Strategy<Value = Unimodular> {
    (-6i64..=6, -6i64..=6, -6i64..=6, -6i64..=6)
        .prop_filter_map("determinant one", |(a, b, c, d)| {
            Unimodular::new(a, b, c, d)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonicalization_is_idempotent(p in -50i64..=50, q in -50i64..=50) {
        if let Ok(x) = Slope::new(p, q) {
            prop_assert_eq!(Slope::new(x.p(), x.q()).unwrap(), x);
            prop_assert_eq!(x.to_string().parse::<Slope>().unwrap(), x);
            prop_assert!(x.q() >= 0);
            prop_assert!(x.q() > 0 || x.p() == 1);
        }
    }

    #[test]
    fn distance_is_a_metric(a in arb_slope(40), b in arb_slope(40), c in arb_slope(40)) {
        prop_assert_eq!(distance(a, b), distance(b, a));
        prop_assert_eq!(distance(a, b) == 0, a == b);
        prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c));
        prop_assert_eq!(adjacent(a, b), adjacent(b, a));
        if adjacent(a, b) {
            prop_assert_eq!(distance(a, b), 1);
        }
    }

    #[test]
    fn unimodular_maps_preserve_the_graph(m in arb_unimodular(), a in arb_slope(30), b in arb_slope(30)) {
        let (ma, mb) = (m.apply(a).unwrap(), m.apply(b).unwrap());
        prop_assert_eq!(adjacent(ma, mb), adjacent(a, b));
        prop_assert_eq!(distance(ma, mb), distance(a, b));
    }

    #[test]
    fn oracle_is_monotone_in_height(a in arb_slope(8), b in arb_slope(8)) {
        let d8 = bfs_oracle_distance(a, b, 8).unwrap();
        let d16 = bfs_oracle_distance(a, b, 16).unwrap();
        let d32 = bfs_oracle_distance(a, b, 32).unwrap();
        prop_assert!(d16 <= d8 && d32 <= d16);
        prop_assert_eq!(d32, Some(distance(a, b)));
    }

    #[test]
    fn neighbour_sets_grow_with_height(a in arb_slope(6), extra in 0i64..6) {
        let small = neighbors(a, 6).unwrap();
        let large = neighbors(a, 6 + extra).unwrap();
        prop_assert!(small.is_subset(&large));
        prop_assert!(small.iter().all(|&b| adjacent(a, b) && b.height() <= 6));
    }
}
