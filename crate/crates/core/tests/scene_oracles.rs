use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ues_core::geometry::{Pixel, Point};
use ues_core::scene::{Area, AreaKind, GridMap, Waypoint};
use ues_core::{study_map, voronoi_assign, Error, Scene, Scene32};
use ues_oracles as oracle;

#[test]
fn voronoi_matches_scan_on_random_scenes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let n = rng.random_range(3..=12);
        let scene = oracle::random_scene(&mut rng, 50, 50, n);
        let expected = oracle::voronoi_by_scan(&scene);
        let got = voronoi_assign(&scene);
        for (k, px) in scene.map().pixels().enumerate() {
            assert_eq!(got.owner(px), expected[k], "pixel {px:?}");
        }
        let total: usize = got.cells().map(|(_, c)| c.len()).sum();
        assert_eq!(total, 2500);
    }
}

#[test]
fn voronoi_tie_goes_to_smaller_id() {
    // pixel centers on the bisector x = 5 are equidistant from both
    let scene = oracle::open_scene(10, 4, &[("b", 2.0, 2.0), ("a", 8.0, 2.0)], &[("a", "b")]);
    let cells = voronoi_assign(&scene);
    // centers at x = 4.5 are nearer b; x = 5.5 nearer a
    assert_eq!(cells.owner(Pixel::new(4, 0)), "b");
    assert_eq!(cells.owner(Pixel::new(5, 0)), "a");
    let tie = oracle::open_scene(11, 4, &[("b", 2.5, 2.0), ("a", 8.5, 2.0)], &[("a", "b")]);
    // center x = 5.5 is exactly 3 from both
    assert_eq!(voronoi_assign(&tie).owner(Pixel::new(5, 1)), "a");
    let tie_b = oracle::open_scene(11, 4, &[("a", 2.5, 2.0), ("b", 8.5, 2.0)], &[("a", "b")]);
    assert_eq!(voronoi_assign(&tie_b).owner(Pixel::new(5, 1)), "a");
}

#[test]
fn nearest_waypoint_agrees_with_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let scene = oracle::random_scene(&mut rng, 40, 30, 7);
        let cells = voronoi_assign(&scene);
        for px in scene.map().pixels() {
            assert_eq!(scene.nearest_waypoint(&px.center()).unwrap(), cells.owner(px));
        }
    }
}

#[test]
fn nearest_waypoint_rejects_off_map_points() {
    let scene = study_map();
    assert!(matches!(
        scene.nearest_waypoint(&Point::new(-1.0, 3.0)),
        Err(Error::OutOfBounds { .. })
    ));
    assert!(matches!(
        scene.nearest_waypoint(&Point::new(3.0, f64::NAN)),
        Err(Error::OutOfBounds { .. })
    ));
    assert!(scene.nearest_waypoint(&Point::new(480.0, 320.0)).is_ok());
}

#[test]
fn pixels_in_area_matches_winding_oracle() {
    let tri = vec![(1.0, 1.0), (18.0, 3.0), (6.0, 17.0)];
    let concave = vec![(0.0, 0.0), (15.0, 0.0), (15.0, 15.0), (10.0, 15.0), (10.0, 5.0), (5.0, 5.0), (5.0, 15.0), (0.0, 15.0)];
    let sq = vec![(5.0, 5.0), (15.0, 5.0), (15.0, 15.0), (5.0, 15.0)];
    let areas: Vec<Area<f64>> = [("tri", &tri), ("u", &concave), ("sq", &sq)]
        .into_iter()
        .map(|(id, poly)| Area {
            id: id.into(),
            kind: AreaKind::Region,
            polygon: poly.iter().map(|&(x, y)| Point::new(x, y)).collect(),
        })
        .collect();
    let scene = Scene::new(
        GridMap { width: 20, height: 20, resolution: 0.1 },
        areas,
        vec![Waypoint { id: "w".into(), position: Point::new(6.0, 6.0) }],
        &[],
    )
    .unwrap();
    for (id, poly) in [("tri", &tri), ("u", &concave), ("sq", &sq)] {
        let mut got = scene.pixels_in_area(id).unwrap();
        got.sort();
        assert_eq!(got, oracle::pixels_in_polygon(poly, 20, 20), "area {id}");
    }
    assert_eq!(scene.pixels_in_area("sq").unwrap().len(), 100);
    assert!(matches!(scene.pixels_in_area("nope"), Err(Error::UnknownArea(_))));
}

#[test]
fn shortest_paths_match_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for round in 0..4 {
        let scene = oracle::random_scene(&mut rng, 30, 30, if round == 0 { 15 } else { 9 });
        let brute = oracle::BruteRoutes::new(&scene);
        let ids: Vec<String> = scene.waypoint_ids().map(str::to_string).collect();
        for a in &ids {
            for b in &ids {
                let route = scene.shortest_path(a, b).unwrap();
                assert!((route.weight - brute.weight(a, b)).abs() < 1e-9);
                assert_eq!(route.waypoints, brute.route(a, b), "{a} -> {b}");
                let back = scene.shortest_path(b, a).unwrap();
                assert_eq!(route.weight, back.weight);
            }
        }
    }
}

#[test]
fn shortest_paths_on_tied_hand_built_scenes() {
    for (name, scene, _) in oracle::hand_built_scenes() {
        let brute = oracle::BruteRoutes::new(&scene);
        for a in scene.waypoint_ids() {
            for b in scene.waypoint_ids() {
                assert_eq!(scene.shortest_path(a, b).unwrap().waypoints, brute.route(a, b), "{name}: {a} -> {b}");
            }
        }
    }
}

#[test]
fn study_map_loads() {
    let scene = study_map();
    for area in ["meeting room", "office", "hallway", "kitchen", "workspace", "copy room"] {
        assert!(scene.pixels_in_area(area).unwrap().len() > 100, "{area}");
    }
    assert_eq!(scene.waypoints().len(), 25);
    assert_eq!(scene.upper_right_waypoint(), "ws_ne");
    let cells = voronoi_assign(&scene);
    assert!(cells.cells().all(|(_, c)| !c.is_empty()));
    let again = Scene::from_json(scene.to_json().to_string().as_bytes()).unwrap();
    assert_eq!(again.waypoints(), scene.waypoints());
    assert_eq!(again.edges(), scene.edges());
}

#[test]
fn single_precision_scene_agrees() {
    let scene32 = Scene32::from_json(ues_core::STUDY_MAP_JSON.as_bytes()).unwrap();
    let scene = study_map();
    let a = voronoi_assign(&scene32);
    let b = voronoi_assign(&scene);
    let differing = scene.map().pixels().filter(|&px| a.owner(px) != b.owner(px)).count();
    // only rounding-level ties can differ
    assert!(differing < 50, "{differing} pixels differ");
}

#[test]
fn bundle_validation_errors() {
    let base = serde_json::json!({
        "map": {"width": 20, "height": 20, "resolution": 0.1},
        "areas": [{"id": "room", "kind": "region", "polygon": [[0,0],[20,0],[20,20],[0,20]]}],
        "waypoints": [{"id": "a", "x": 2, "y": 2}, {"id": "b", "x": 10, "y": 10}, {"id": "c", "x": 18, "y": 18}],
        "nav_edges": [["a", "b"], ["b", "c"]]
    });
    assert!(Scene::from_json(base.to_string().as_bytes()).is_ok());

    let mut disconnected = base.clone();
    disconnected["nav_edges"] = serde_json::json!([["a", "b"]]);
    assert!(matches!(
        Scene::from_json(disconnected.to_string().as_bytes()),
        Err(Error::DisconnectedGraph { components: 2 })
    ));

    let mut bowtie = base.clone();
    bowtie["areas"][0]["polygon"] = serde_json::json!([[0,0],[20,20],[20,0],[0,12]]);
    assert!(matches!(Scene::from_json(bowtie.to_string().as_bytes()), Err(Error::InvalidGeometry(_))));

    let mut outside = base.clone();
    outside["waypoints"][0]["x"] = serde_json::json!(25);
    assert!(matches!(Scene::from_json(outside.to_string().as_bytes()), Err(Error::InvalidGeometry(_))));

    let mut dup = base.clone();
    dup["waypoints"][1]["id"] = serde_json::json!("a");
    assert!(Scene::from_json(dup.to_string().as_bytes()).is_err());

    let mut unknown_edge = base.clone();
    unknown_edge["nav_edges"] = serde_json::json!([["a", "zz"]]);
    assert!(matches!(Scene::from_json(unknown_edge.to_string().as_bytes()), Err(Error::MalformedBundle(_))));

    assert!(matches!(Scene::from_json(b"{not json"), Err(Error::MalformedBundle(_))));
}
