use std::collections::HashMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ues_core::geometry::{Pixel, Point};
use ues_core::insight::{
    apply_brush, belief_to_ranking, normalize_sliders, paint_to_belief, precision_to_belief, rank_to_ranking,
    BrushConfig, CategoricalBelief, PrecisionInput, RankInput, SelectedPoint,
};
use ues_core::{study_map, voronoi_assign, Error, InsightPayload, PaintField};
use ues_oracles as oracle;

fn assert_close(got: &CategoricalBelief<f64>, want: &std::collections::BTreeMap<String, f64>, tol: f64) {
    let keys: std::collections::BTreeSet<&String> = got.probabilities.keys().chain(want.keys()).collect();
    for k in keys {
        let a = got.probabilities.get(k).copied().unwrap_or(0.0);
        let b = want.get(k).copied().unwrap_or(0.0);
        assert!((a - b).abs() <= tol, "{k}: {a} vs {b}");
    }
}

#[test]
fn precision_belief_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let n_wp = rng.random_range(2..=10);
        let scene = oracle::random_scene(&mut rng, 60, 40, n_wp);
        let n = rng.random_range(1..=6);
        let raw: Vec<(f64, f64, f64)> = (0..n)
            .map(|_| (rng.random_range(0.0..=60.0), rng.random_range(0.0..=40.0), rng.random_range(0.0..=1.0)))
            .collect();
        let input = PrecisionInput {
            object_id: "umbrella".into(),
            points: raw.iter().map(|&(x, y, s)| SelectedPoint { position: Point::new(x, y), slider: s }).collect(),
        };
        let got = precision_to_belief(&input, &scene).unwrap();
        assert_close(&got, &oracle::precision_oracle(&oracle::positions(&scene), &raw), 1e-9);
        let sum: f64 = raw.iter().map(|p| p.2).sum();
        assert!((got.total() - sum.min(1.0)).abs() <= 1e-9);
    }
}

#[test]
fn paint_belief_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let n_wp = rng.random_range(2..=8);
        let scene = oracle::random_scene(&mut rng, 40, 30, n_wp);
        let cells = voronoi_assign(&scene);
        let mut field = PaintField::new("bag", 40, 30);
        let mut lookup = HashMap::new();
        for _ in 0..rng.random_range(1..=80) {
            let (i, j) = (rng.random_range(0..40u32), rng.random_range(0..30u32));
            let b = rng.random_range(0.001..=1.0);
            field.set(Pixel::new(i, j), b).unwrap();
            lookup.insert((i, j), b);
        }
        let got = paint_to_belief(&field, &cells).unwrap();
        assert_close(&got, &oracle::paint_oracle(&oracle::positions(&scene), 40, 30, &lookup), 1e-9);
        assert!((got.total() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn paint_from_brush_strokes_matches_oracle() {
    let scene = study_map();
    let cells = voronoi_assign(&scene);
    let mut field = PaintField::new("umbrella", 480, 320);
    let cfg = BrushConfig::default();
    for &(x, y, t) in &[(100.0, 100.0, 5), (105.0, 98.0, 3), (400.0, 250.0, 12), (0.0, 0.0, 2)] {
        field.apply_brush(Point::new(x, y), t, &cfg).unwrap();
    }
    let lookup: HashMap<(u32, u32), f64> = field.iter().map(|(px, b)| ((px.i, px.j), b)).collect();
    let got = paint_to_belief(&field, &cells).unwrap();
    assert_close(&got, &oracle::paint_oracle(&oracle::positions(&scene), 480, 320, &lookup), 1e-9);
}

#[test]
fn empty_inputs_are_rejected() {
    let scene = study_map();
    let empty = PrecisionInput::<f64> { object_id: "bag".into(), points: vec![] };
    assert!(matches!(precision_to_belief(&empty, &scene), Err(Error::EmptyInsight(_))));
    let field = PaintField::new("bag", 480, 320);
    assert!(matches!(paint_to_belief(&field, &voronoi_assign(&scene)), Err(Error::EmptyInsight(_))));
    let rank = RankInput::<f64> { object_id: "bag".into(), points: vec![] };
    assert!(matches!(rank_to_ranking(&rank, &scene), Err(Error::EmptyInsight(_))));
}

#[test]
fn brush_ten_ticks_at_center() {
    let f = apply_brush(&PaintField::new("o", 50, 50), Point::new(25.5, 25.5), 10).unwrap();
    assert!((f.get(Pixel::new(25, 25)) - 0.8).abs() < 1e-12);
    let f = apply_brush(&f, Point::new(25.5, 25.5), 10).unwrap();
    assert_eq!(f.get(Pixel::new(25, 25)), 1.0);
    assert_eq!(f.get(Pixel::new(25 + 12, 25)), 0.0);
}

#[test]
fn payload_compiles_like_direct_call() {
    let scene = study_map();
    let cells = voronoi_assign(&scene);
    let doc = br#"{"object_id":"umbrella","interface":"precision","points":[{"x":120,"y":40,"slider":0.6},{"x":420,"y":250,"slider":0.3}]}"#;
    let payload: InsightPayload = serde_json::from_slice(doc).unwrap();
    payload.validate().unwrap();
    let compiled = payload.compile::<f64>(&scene, &cells).unwrap();
    let direct = precision_to_belief(&payload.to_precision_input().unwrap(), &scene).unwrap();
    assert_eq!(compiled, ues_core::Insight::Belief(direct));
}

fn slider_vec() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..=1.0, 1..8)
}

proptest! {
    #[test]
    fn normalization_branches(s in slider_vec()) {
        let sum: f64 = s.iter().sum();
        let out = normalize_sliders(&s);
        if sum <= 1.0 {
            prop_assert_eq!(&out, &s);
        } else {
            for (o, v) in out.iter().zip(&s) {
                prop_assert!((o - v / sum).abs() <= 1e-12);
            }
            prop_assert!((out.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn normalization_hits_both_branches(small in prop::collection::vec(0.0f64..=0.1, 1..8), big in prop::collection::vec(0.5f64..=1.0, 3..8)) {
        prop_assert_eq!(normalize_sliders(&small), small.clone());
        let sum: f64 = big.iter().sum();
        prop_assert!(sum > 1.0);
        prop_assert!((normalize_sliders(&big).iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn paint_belief_is_scale_invariant(
        strokes in prop::collection::vec((0u32..40, 0u32..30, 0.01f64..=1.0), 1..40),
        k in 0.05f64..=1.0,
    ) {
        let scene = oracle::random_scene(&mut ChaCha8Rng::seed_from_u64(5), 40, 30, 6);
        let cells = voronoi_assign(&scene);
        let mut a = PaintField::new("o", 40, 30);
        let mut b = PaintField::new("o", 40, 30);
        for &(i, j, v) in &strokes {
            a.set(Pixel::new(i, j), v).unwrap();
            b.set(Pixel::new(i, j), v * k).unwrap();
        }
        let pa = paint_to_belief(&a, &cells).unwrap();
        let pb = paint_to_belief(&b, &cells).unwrap();
        prop_assert_eq!(pa.probabilities.len(), pb.probabilities.len());
        for (w, p) in &pa.probabilities {
            prop_assert!((p - pb.probability(w)).abs() <= 1e-9);
        }
    }

    #[test]
    fn paint_belief_ignores_unpainted_pixels(i in 0u32..40, j in 0u32..30, v in 0.01f64..=1.0) {
        let scene = oracle::random_scene(&mut ChaCha8Rng::seed_from_u64(6), 40, 30, 5);
        let cells = voronoi_assign(&scene);
        let mut f = PaintField::new("o", 40, 30);
        f.set(Pixel::new(i, j), v).unwrap();
        let p = paint_to_belief(&f, &cells).unwrap();
        prop_assert_eq!(p.probabilities.len(), 1);
        prop_assert_eq!(p.probability(cells.owner(Pixel::new(i, j))), 1.0);
    }

    #[test]
    fn brush_is_monotone_and_bounded(
        x in 0.0f64..=40.0, y in 0.0f64..=30.0, t1 in 0u32..20, t2 in 0u32..20,
    ) {
        let f0 = PaintField::new("o", 40, 30);
        let f1 = apply_brush(&f0, Point::new(x, y), t1).unwrap();
        let f2 = apply_brush(&f1, Point::new(x, y), t2).unwrap();
        for (px, b) in f2.iter() {
            prop_assert!(b <= 1.0);
            prop_assert!(b >= f1.get(px));
        }
        for (px, b) in f1.iter() {
            prop_assert!(f2.get(px) >= b);
        }
    }

    #[test]
    fn rank_mapping_has_no_duplicates(pts in prop::collection::vec((0.0f64..=480.0, 0.0f64..=320.0), 1..15)) {
        let scene = study_map();
        let input = RankInput { object_id: "o".into(), points: pts.iter().map(|&(x, y)| Point::new(x, y)).collect() };
        let r = rank_to_ranking(&input, &scene).unwrap();
        let unique: std::collections::HashSet<&String> = r.ranked.iter().collect();
        prop_assert_eq!(unique.len(), r.ranked.len());
        // first occurrence order is preserved
        let mut expected: Vec<String> = Vec::new();
        for &(x, y) in &pts {
            let id = oracle::nearest_by_scan(&oracle::positions(&scene), x, y);
            if !expected.contains(&id) {
                expected.push(id);
            }
        }
        prop_assert_eq!(r.ranked, expected);
    }

    #[test]
    fn belief_ranking_is_sorted(ps in prop::collection::btree_map("[a-f]", 0.0f64..=1.0, 1..6)) {
        let b = CategoricalBelief { object_id: "o".into(), probabilities: ps.clone() };
        match belief_to_ranking(&b) {
            Ok(r) => {
                for w in r.ranked.windows(2) {
                    let (p0, p1) = (ps[&w[0]], ps[&w[1]]);
                    prop_assert!(p0 > p1 || (p0 == p1 && w[0] < w[1]));
                }
                prop_assert_eq!(r.ranked.len(), ps.values().filter(|&&p| p > 0.0).count());
            }
            Err(_) => prop_assert!(ps.values().all(|&p| p == 0.0)),
        }
    }

    #[test]
    fn precision_scaling_when_normalized(
        pts in prop::collection::vec((0.0f64..=60.0, 0.0f64..=40.0, 0.3f64..=1.0), 4..8),
        k in 0.6f64..=1.0,
    ) {
        let sum: f64 = pts.iter().map(|p| p.2).sum();
        prop_assume!(sum * k > 1.0);
        let scene = oracle::random_scene(&mut ChaCha8Rng::seed_from_u64(7), 60, 40, 6);
        let input = |scale: f64| PrecisionInput {
            object_id: "o".into(),
            points: pts.iter().map(|&(x, y, s)| SelectedPoint { position: Point::new(x, y), slider: s * scale }).collect(),
        };
        let a = precision_to_belief(&input(1.0), &scene).unwrap();
        let b = precision_to_belief(&input(k), &scene).unwrap();
        for (w, p) in &a.probabilities {
            prop_assert!((p - b.probability(w)).abs() <= 1e-9);
        }
    }

    #[test]
    fn precision_ranking_survives_scaling(
        pts in prop::collection::vec((0.0f64..=60.0, 0.0f64..=40.0, 0.05f64..=1.0), 1..6),
        k in 0.1f64..=1.0,
    ) {
        let scene = oracle::random_scene(&mut ChaCha8Rng::seed_from_u64(8), 60, 40, 6);
        let input = |scale: f64| PrecisionInput {
            object_id: "o".into(),
            points: pts.iter().map(|&(x, y, s)| SelectedPoint { position: Point::new(x, y), slider: s * scale }).collect(),
        };
        let a = precision_to_belief(&input(1.0), &scene).unwrap();
        let mut masses: Vec<f64> = a.probabilities.values().copied().collect();
        masses.sort_by(f64::total_cmp);
        prop_assume!(masses.windows(2).all(|w| w[1] - w[0] > 1e-9));
        let b = precision_to_belief(&input(k), &scene).unwrap();
        prop_assert_eq!(belief_to_ranking(&a).unwrap(), belief_to_ranking(&b).unwrap());
    }

    #[test]
    fn precision_translation_within_cells(
        pts in prop::collection::vec((0u32..60, 0u32..40, 0.0f64..=1.0), 1..6),
        seed in 0u64..1000,
    ) {
        let scene = oracle::random_scene(&mut ChaCha8Rng::seed_from_u64(9), 60, 40, 5);
        let cells = voronoi_assign(&scene);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let moved: Vec<(Pixel, f64)> = pts
            .iter()
            .map(|&(i, j, s)| {
                let cell = cells.cell_of(cells.owner(Pixel::new(i, j))).unwrap();
                (cell[rng.random_range(0..cell.len())], s)
            })
            .collect();
        let to_input = |v: Vec<(Pixel, f64)>| PrecisionInput {
            object_id: "o".into(),
            points: v.into_iter().map(|(px, s)| SelectedPoint { position: px.center(), slider: s }).collect(),
        };
        let original = to_input(pts.iter().map(|&(i, j, s)| (Pixel::new(i, j), s)).collect());
        prop_assert_eq!(
            precision_to_belief(&original, &scene).unwrap(),
            precision_to_belief(&to_input(moved), &scene).unwrap()
        );
    }
}
