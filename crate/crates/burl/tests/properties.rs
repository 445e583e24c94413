//! Randomized property suites over the geometry and graph layers, beyond
//! the unit tests inside each module: seeded sampling for properties whose
//! instances need structured generators (Pouna shapes, crossers), proptest
//! for algebraic laws with simple inputs.

use proptest::prelude::*;

use burl::burling::derive_triple;
use burl::construction::burling_sequence;
use burl::geom::{Grid, Point, Rat, Rect, Region, Transform};
use burl::graph::{ChromaticOutcome, Graph};
use burl::recognize::{recognize_unoriented, DEFAULT_BUDGET};
use burl::sample::{
    rng, sample_horizontal_crosser, sample_point_in, sample_pouna_region, sample_pouna_shape,
    sample_positive_transform, sample_rect, sample_strong_shape, sample_vertical_crosser,
};
use burl::shape::{find_subterritory, is_subterritory, Shape};

use rand::Rng;

fn frame_shape() -> Shape {
    Shape::new(
        "f",
        Region::new(vec![
            Rect::ints(0, 0, 0, 3),
            Rect::ints(3, 3, 0, 3),
            Rect::ints(0, 3, 0, 0),
            Rect::ints(0, 3, 3, 3),
        ]),
    )
    .expect("frame is a Pouna set")
}

fn nondegenerate_rect(r: &mut impl Rng) -> Rect {
    loop {
        let rect = sample_rect(r, 8);
        if !rect.is_degenerate() {
            return rect;
        }
    }
}

#[test]
fn territory_membership_commutes_with_positive_transforms() {
    for seed in 0..200 {
        let mut r = rng(seed);
        let s = sample_pouna_shape(&mut r, "s");
        let t = sample_positive_transform(&mut r);
        let moved = s.transformed(&t);
        let grid = Grid::from_rects(s.region().rects().iter());
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                let p = grid.sample(i, j);
                assert_eq!(
                    s.ter_member(&p),
                    moved.ter_member(&t.apply_point(&p)),
                    "seed {seed}: territory membership must commute with {t:?} at {p:?}"
                );
            }
        }
    }
}

#[test]
fn subterritories_survive_positive_transforms() {
    for seed in 0..200 {
        let mut r = rng(seed);
        let s = sample_strong_shape(&mut r, "s");
        let e = match find_subterritory(&s) {
            Ok(cert) => cert.rect,
            // A strong shape may still lack a subterritory at this sampler's
            // resolution; that is not what this property is about.
            Err(_) => continue,
        };
        let t = sample_positive_transform(&mut r);
        assert!(
            is_subterritory(&t.apply_rect(&e), &s.transformed(&t)),
            "seed {seed}: subterritory {e:?} must survive {t:?}"
        );
    }
}

#[test]
fn every_pouna_set_is_strong_or_reflects_strong() {
    let reflect = Transform::reflect_horizontal();
    for seed in 0..200 {
        let mut r = rng(seed);
        let region = sample_pouna_region(&mut r, 8, 4);
        let s = Shape::new("s", region).expect("sampler returns Pouna regions");
        assert!(
            s.is_strong() || s.transformed(&reflect).is_strong(),
            "seed {seed}: a Pouna set or its reflection must have territory"
        );
    }
}

#[test]
fn perpendicular_crossers_meet_inside_their_rect() {
    for seed in 0..200 {
        let mut r = rng(seed);
        let rect = nondegenerate_rect(&mut r);
        let v = sample_vertical_crosser(&mut r, &rect, "v");
        let h = sample_horizontal_crosser(&mut r, &rect, "h");
        assert!(
            v.region().intersect(h.region()).intersects_rect(&rect),
            "seed {seed}: crossers of {rect:?} must intersect inside it"
        );
    }
}

#[test]
fn vertical_crossings_survive_wider_flatter_rects() {
    for seed in 0..200 {
        let mut r = rng(seed);
        let rect = nondegenerate_rect(&mut r);
        let v = sample_vertical_crosser(&mut r, &rect, "v");
        assert!(v.crosses_vertically(&rect), "sampler contract");
        let quarter = rect.height() / Rat::int(4);
        let wider = Rect::new(
            rect.left().clone() - Rat::int(1),
            rect.right().clone() + Rat::int(1),
            rect.bottom().clone() + quarter.clone(),
            rect.top().clone() - quarter,
        );
        assert!(
            v.crosses_vertically(&wider),
            "seed {seed}: widening x and shrinking y must preserve a vertical crossing of {rect:?}"
        );
    }
}

#[test]
fn region_membership_equals_union_of_input_rects() {
    for seed in 0..1000 {
        let mut r = rng(seed);
        let count = r.random_range(1..=5);
        let rects: Vec<Rect> = (0..count).map(|_| sample_rect(&mut r, 8)).collect();
        let region = Region::new(rects.clone());
        let probe = Rect::ints(-1, 9, -1, 9);
        let p = sample_point_in(&mut r, &probe);
        let expected = rects.iter().any(|rect| rect.contains_point(&p));
        assert_eq!(
            region.contains_point(&p),
            expected,
            "seed {seed}: canonicalization changed membership at {p:?}"
        );
    }
}

#[test]
fn canonical_form_is_a_fixed_point() {
    for seed in 0..300 {
        let mut r = rng(seed);
        let count = r.random_range(1..=5);
        let rects: Vec<Rect> = (0..count).map(|_| sample_rect(&mut r, 8)).collect();
        let once = Region::new(rects);
        let twice = Region::new(once.rects().to_vec());
        assert_eq!(
            once.rects(),
            twice.rects(),
            "seed {seed}: canonicalizing a canonical region must change nothing"
        );
    }
}

#[test]
fn recognition_is_hereditary_on_generated_graphs() {
    let scene = burling_sequence(frame_shape(), 3).expect("level 3 builds");
    let triple = derive_triple(scene.family()).expect("level 3 has a base");
    let g = triple.ograph().expect("arcs are loop-free").underlying();
    assert!(
        recognize_unoriented(&g, DEFAULT_BUDGET).is_accepted(),
        "the full generated graph must be accepted"
    );
    for seed in 0..30 {
        let mut r = rng(seed);
        let keep: Vec<String> = g
            .vertex_ids()
            .iter()
            .filter(|_| r.random_bool(0.6))
            .cloned()
            .collect();
        let sub = g.induced_subgraph(&keep).expect("ids come from the graph");
        let cert = recognize_unoriented(&sub, DEFAULT_BUDGET);
        assert!(
            cert.is_accepted(),
            "seed {seed}: deleting vertices must not leave the class (kept {keep:?})"
        );
    }
}

#[test]
fn induced_subgraphs_match_brute_force_adjacency() {
    let scene = burling_sequence(frame_shape(), 3).expect("level 3 builds");
    let g = derive_triple(scene.family())
        .expect("level 3 has a base")
        .ograph()
        .expect("arcs are loop-free")
        .underlying();
    for seed in 0..100 {
        let mut r = rng(seed);
        let mut keep: Vec<String> = Vec::new();
        while keep.len() < 5 {
            let id = g.vertex_ids()[r.random_range(0..g.n())].clone();
            if !keep.contains(&id) {
                keep.push(id);
            }
        }
        let sub = g.induced_subgraph(&keep).expect("ids come from the graph");
        for a in &keep {
            for b in &keep {
                if a >= b {
                    continue;
                }
                let big = g.has_edge(
                    g.index_of(a).expect("known vertex"),
                    g.index_of(b).expect("known vertex"),
                );
                let small = sub.has_edge(
                    sub.index_of(a).expect("kept vertex"),
                    sub.index_of(b).expect("kept vertex"),
                );
                assert_eq!(big, small, "seed {seed}: adjacency of {a},{b} must restrict");
            }
        }
    }
}

#[test]
fn chromatic_and_clique_numbers_are_hereditary() {
    let scene = burling_sequence(frame_shape(), 3).expect("level 3 builds");
    let g = derive_triple(scene.family())
        .expect("level 3 has a base")
        .ograph()
        .expect("arcs are loop-free")
        .underlying();
    let chi = match g.chromatic_number(1_000_000).outcome {
        ChromaticOutcome::Exact { chi } => chi,
        ChromaticOutcome::Bracket { .. } => panic!("13 vertices must be exact"),
    };
    let omega = g.clique_number();
    for seed in 0..50 {
        let mut r = rng(seed);
        let keep: Vec<String> = g
            .vertex_ids()
            .iter()
            .filter(|_| r.random_bool(0.5))
            .cloned()
            .collect();
        let sub = g.induced_subgraph(&keep).expect("ids come from the graph");
        let sub_chi = match sub.chromatic_number(1_000_000).outcome {
            ChromaticOutcome::Exact { chi } => chi,
            ChromaticOutcome::Bracket { .. } => panic!("subgraphs of 13 vertices must be exact"),
        };
        assert!(sub_chi <= chi, "seed {seed}: chromatic number must not grow");
        assert!(
            sub.clique_number() <= omega,
            "seed {seed}: clique number must not grow"
        );
    }
}

#[test]
fn empty_and_single_vertex_graphs_are_accepted() {
    let empty = Graph::new(vec![], vec![]).expect("empty graph");
    assert!(recognize_unoriented(&empty, DEFAULT_BUDGET).is_accepted());
    let one = Graph::new(vec!["v".into()], vec![]).expect("one vertex");
    assert!(recognize_unoriented(&one, DEFAULT_BUDGET).is_accepted());
}

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-24i64..24, 1i64..6).prop_map(|(p, q)| Rat::new(p, q))
}

fn nonzero_rat_strategy() -> impl Strategy<Value = Rat> {
    (1i64..12, 1i64..4, any::<bool>())
        .prop_map(|(p, q, neg)| Rat::new(if neg { -p } else { p }, q))
}

fn transform_strategy() -> impl Strategy<Value = Transform> {
    (
        nonzero_rat_strategy(),
        nonzero_rat_strategy(),
        rat_strategy(),
        rat_strategy(),
    )
        .prop_map(|(a, b, c, d)| Transform::new(a, b, c, d))
}

fn point_strategy() -> impl Strategy<Value = Point> {
    (rat_strategy(), rat_strategy()).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #[test]
    fn composition_is_associative_on_points(
        t1 in transform_strategy(),
        t2 in transform_strategy(),
        t3 in transform_strategy(),
        p in point_strategy(),
    ) {
        let left = t1.compose(&t2).compose(&t3).apply_point(&p);
        let right = t1.compose(&t2.compose(&t3)).apply_point(&p);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverses_cancel(t in transform_strategy(), p in point_strategy()) {
        let inv = t.invert();
        prop_assert_eq!(inv.apply_point(&t.apply_point(&p)), p.clone());
        prop_assert_eq!(t.apply_point(&inv.apply_point(&p)), p);
    }

    #[test]
    fn transformed_rects_are_the_transformed_corner_span(
        t in transform_strategy(),
        (x1, x2, y1, y2) in (rat_strategy(), rat_strategy(), rat_strategy(), rat_strategy()),
    ) {
        let rect = Rect::new(
            Rat::min(x1.clone(), x2.clone()),
            Rat::max(x1, x2),
            Rat::min(y1.clone(), y2.clone()),
            Rat::max(y1, y2),
        );
        let moved = t.apply_rect(&rect);
        let a = t.apply_point(&Point::new(rect.left().clone(), rect.bottom().clone()));
        let b = t.apply_point(&Point::new(rect.right().clone(), rect.top().clone()));
        prop_assert_eq!(moved.left().clone(), Rat::min(a.x.clone(), b.x.clone()));
        prop_assert_eq!(moved.right().clone(), Rat::max(a.x, b.x));
        prop_assert_eq!(moved.bottom().clone(), Rat::min(a.y.clone(), b.y.clone()));
        prop_assert_eq!(moved.top().clone(), Rat::max(a.y, b.y));
    }

    #[test]
    fn rational_arithmetic_round_trips_through_strings(
        r in rat_strategy(),
    ) {
        let text = r.to_string();
        let back: Rat = text.parse().expect("own display must parse");
        prop_assert_eq!(back, r);
    }
}
