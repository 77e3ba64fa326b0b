//! Acceptance suite: one pass/fail line per criterion.

#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unknot_kit::analysis::{
    boundary_graph_of_surface, isotopy_signature, self_intersects, validate_properly_embedded, BallDomain,
};
use unknot_kit::arrangement::{boundary_graph, sphere_boundary_graph, EdgeCycle, SphericalLoop, SurfaceMesh};
use unknot_kit::geom::Vec3;
use unknot_kit::mesh::{primitives, TriMesh};
use unknot_kit::model::{generate_model_surface, ModelSurfaceSpec};
use unknot_kit::shrinker::{builtin_shrinker, default_steps, graph_at_infinity, ShrinkerKind, MIN_SLICE_RADIUS};
use unknot_kit::tree::{
    ahu_code, cayley_lower_bound, enumerate_free_trees, is_tree, multigraphs_isomorphic, trees_isomorphic,
    CanonicalCode, Multigraph, Tree,
};

use oracles::{all_pairs_self_intersects, flood_fill_graph, prufer_class_count, random_caps};

const RESOLUTION: usize = 32;

fn small_trees(max: usize) -> Vec<CanonicalCode> {
    (1..=max).flat_map(|n| enumerate_free_trees(n).unwrap()).collect()
}

fn model(tree: Tree, genus: usize, resolution: usize) -> TriMesh {
    generate_model_surface(&ModelSurfaceSpec::new(tree, genus).with_resolution(resolution)).unwrap()
}

fn circle(axis: Vec3, angle: f64, samples: usize) -> SphericalLoop {
    let u = axis
        .cross(&if axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() })
        .normalize();
    let w = axis.cross(&u);
    SphericalLoop::new(
        (0..samples)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / samples as f64;
                axis * angle.cos() + (u * t.cos() + w * t.sin()) * angle.sin()
            })
            .collect(),
    )
}

fn star_versus_path() -> String {
    let ball = BallDomain::unit();
    let star = Tree::star(4);
    let path = Tree::path(4);
    let from_star = boundary_graph_of_surface(&model(star.clone(), 0, RESOLUTION), &ball).unwrap();
    let from_path = boundary_graph_of_surface(&model(path.clone(), 0, RESOLUTION), &ball).unwrap();
    assert!(trees_isomorphic(&from_star, &star));
    assert!(trees_isomorphic(&from_path, &path));

    let caps: Vec<SphericalLoop> = [Vec3::x(), Vec3::y(), Vec3::z()]
        .iter()
        .map(|&a| circle(a, 0.4, 48))
        .collect();
    let nested: Vec<SphericalLoop> = [0.3, 0.7, 1.1].iter().map(|&a| circle(Vec3::z(), a, 48)).collect();
    assert!(trees_isomorphic(&sphere_boundary_graph(&caps).unwrap(), &star));
    assert!(trees_isomorphic(&sphere_boundary_graph(&nested).unwrap(), &path));
    assert!(!trees_isomorphic(&star, &path));
    "star-4 and P4 recovered from surfaces and loops; star-4 and P4 not isomorphic".into()
}

fn round_trip(meshes: &mut Vec<(String, TriMesh)>) -> String {
    let ball = BallDomain::unit();
    for code in small_trees(7) {
        for g in 0..=2 {
            let m = model(code.to_tree(), g, RESOLUTION);
            let sig = isotopy_signature(&m, &ball).unwrap();
            assert_eq!((sig.genus, &sig.boundary_tree), (g, &code), "{code} g={g}");
            meshes.push((format!("{code} g={g}"), m));
        }
    }
    format!("{} specs recover (g, code(T)) exactly", meshes.len())
}

fn embeddedness(meshes: &[(String, TriMesh)]) -> String {
    assert!(!meshes.is_empty(), "criterion 2 produced no meshes");
    let ball = BallDomain::unit();
    let mut min_clearance = f64::INFINITY;
    for (name, m) in meshes {
        let report = validate_properly_embedded(m, &ball);
        assert!(report.properly_embedded, "{name}: {report:?}");
        assert!(!self_intersects(m), "{name}");
        min_clearance = min_clearance.min(report.margins.interior_clearance);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trees = small_trees(7);
    for _ in 0..10 {
        let code = &trees[rng.gen_range(0..trees.len())];
        let g = rng.gen_range(0..=2);
        let m = model(code.to_tree(), g, 12);
        assert_eq!(self_intersects(&m), all_pairs_self_intersects(&m), "{code} g={g}");
    }
    format!(
        "{} meshes properly embedded (min interior clearance {min_clearance:.2e}); all-pairs oracle agrees on 10 specs",
        meshes.len()
    )
}

fn tree_property() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut loops_total = 0;
    for case in 0..200 {
        let caps = random_caps(&mut rng, 1 + case % 6, 0.12);
        let loops: Vec<SphericalLoop> = caps.iter().map(|c| SphericalLoop::new(c.polyline(96))).collect();
        let tree = sphere_boundary_graph(&loops).unwrap();
        let g = tree.as_multigraph();
        assert!(is_tree(g), "case {case}");
        assert_eq!(g.edge_count(), loops.len(), "case {case}");
        assert!(multigraphs_isomorphic(g, &flood_fill_graph(&caps, 5)), "case {case}");
        loops_total += loops.len();
    }
    format!("200 loop sets ({loops_total} loops) give trees matching the flood fill")
}

fn multigraph_cases() -> String {
    let (around, tube) = (16, 8);
    let torus = SurfaceMesh::new(primitives::torus(1.0, 0.3, around, tube)).unwrap();
    let one = boundary_graph(&torus, &[EdgeCycle(primitives::torus_meridian(tube, 0))]).unwrap();
    assert_eq!(one.vertex_count(), 1);
    assert_eq!(one.edges(), &[(0, 0)]);
    let two = boundary_graph(
        &torus,
        &[
            EdgeCycle(primitives::torus_meridian(tube, 0)),
            EdgeCycle(primitives::torus_meridian(tube, around / 2)),
        ],
    )
    .unwrap();
    assert_eq!(two.vertex_count(), 2);
    assert_eq!(two.edge_count(), 2);
    assert!(two.edges().iter().all(|&(a, b)| a != b));
    assert!(multigraphs_isomorphic(
        &two,
        &Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap()
    ));
    "one meridian: 1 vertex + 1 self-loop; two meridians: 2 vertices + 2 parallel edges".into()
}

fn enumeration() -> String {
    let expected = [1, 1, 1, 2, 3, 6, 11, 23];
    let mut counts = Vec::new();
    for n in 1..=8 {
        let count = enumerate_free_trees(n).unwrap().len();
        assert_eq!(count, prufer_class_count(n), "n = {n}");
        assert!(
            cayley_lower_bound(n) <= BigRational::from_integer(count.into()),
            "n = {n}"
        );
        counts.push(count);
    }
    assert_eq!(counts, expected);
    format!("counts {counts:?} match the Prufer oracle and respect the Cayley bound")
}

fn shrinkers() -> String {
    let cases = [
        (ShrinkerKind::Plane, 2),
        (ShrinkerKind::Sphere2, 1),
        (ShrinkerKind::Cylinder2, 3),
    ];
    let r_min = MIN_SLICE_RADIUS;
    let mut found = Vec::new();
    for (kind, vertices) in cases {
        let m = builtin_shrinker(kind, 16.0, 32).unwrap();
        let report = graph_at_infinity(&m, r_min, 12.0, default_steps(r_min, 12.0)).unwrap();
        assert!(report.stabilized, "{kind:?}");
        let code = report.graph_at_infinity.unwrap();
        assert_eq!(code.vertex_count(), vertices, "{kind:?}");
        found.push(code.vertex_count());
    }
    format!(
        "plane/sphere2/cylinder2 stabilize to {}/{}/{} vertices",
        found[0], found[1], found[2]
    )
}

fn root_independence() -> String {
    let ball = BallDomain::unit();
    let mut runs = 0;
    for code in small_trees(6) {
        let tree = code.to_tree();
        for g in 0..=2 {
            let sigs: Vec<_> = (0..tree.vertex_count())
                .map(|root| {
                    let spec = ModelSurfaceSpec::new(tree.clone(), g)
                        .with_resolution(RESOLUTION)
                        .with_root(root);
                    isotopy_signature(&generate_model_surface(&spec).unwrap(), &ball).unwrap()
                })
                .collect();
            runs += sigs.len();
            assert!(sigs.windows(2).all(|w| w[0] == w[1]), "{code} g={g}: {sigs:?}");
            assert_eq!(sigs[0].boundary_tree, ahu_code(&tree));
        }
    }
    format!("{runs} rooted models agree per (g, T)")
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["unknot-kit"];
    argv.extend_from_slice(args);
    let code = unknot_kit_cli::run_with(argv, &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    out
}

fn determinism() -> String {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("model.obj");
    let obj_s = obj.to_str().unwrap();
    let json = unknot_kit_cli::sidecar_path(&obj);
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let gen = run_cli(&[
            "--json",
            "--seed",
            "7",
            "generate",
            "--tree",
            "((())()())",
            "--genus",
            "2",
            "--resolution",
            "32",
            "-o",
            obj_s,
        ]);
        let analysis = run_cli(&["--json", "--seed", "7", "analyze", obj_s]);
        let shrink = run_cli(&[
            "--json",
            "--seed",
            "7",
            "shrinker-graph",
            "--builtin",
            "cylinder2",
            "--rmin",
            "2.8284",
            "--rmax",
            "12",
        ]);
        outputs.push((
            std::fs::read(&obj).unwrap(),
            std::fs::read(&json).unwrap(),
            gen,
            analysis,
            shrink,
        ));
    }
    assert!(outputs[0] == outputs[1]);
    format!(
        "OBJ ({} bytes), sidecar and JSON reports byte-identical across runs",
        outputs[0].0.len()
    )
}

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Duration,
}

fn main() {
    let mut meshes = Vec::new();
    let mut results = Vec::new();
    let mut check = |c: Criterion, f: &mut dyn FnMut() -> String| {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(detail) if elapsed <= c.limit => (true, detail),
            Ok(detail) => (false, format!("{detail}; took {elapsed:.1?}, limit {:?}", c.limit)),
            Err(e) => (
                false,
                e.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into()),
            ),
        };
        println!(
            "criterion {} [{}] {}: {detail} ({elapsed:.2?})",
            c.number,
            if ok { "PASS" } else { "FAIL" },
            c.name
        );
        results.push(ok);
    };
    let secs = Duration::from_secs;
    check(
        Criterion {
            number: 1,
            name: "star versus path",
            limit: secs(1),
        },
        &mut star_versus_path,
    );
    check(
        Criterion {
            number: 2,
            name: "round trip",
            limit: secs(120),
        },
        &mut || round_trip(&mut meshes),
    );
    check(
        Criterion {
            number: 3,
            name: "embeddedness",
            limit: secs(300),
        },
        &mut || embeddedness(&meshes),
    );
    check(
        Criterion {
            number: 4,
            name: "tree property",
            limit: secs(60),
        },
        &mut tree_property,
    );
    check(
        Criterion {
            number: 5,
            name: "multigraph cases",
            limit: secs(60),
        },
        &mut multigraph_cases,
    );
    check(
        Criterion {
            number: 6,
            name: "enumeration",
            limit: secs(30),
        },
        &mut enumeration,
    );
    check(
        Criterion {
            number: 7,
            name: "shrinker vertex counts",
            limit: secs(30),
        },
        &mut shrinkers,
    );
    check(
        Criterion {
            number: 8,
            name: "root independence",
            limit: secs(180),
        },
        &mut root_independence,
    );
    check(
        Criterion {
            number: 9,
            name: "determinism",
            limit: secs(120),
        },
        &mut determinism,
    );

    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
