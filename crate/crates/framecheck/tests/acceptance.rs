//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line (run with `cargo test --test acceptance -- --nocapture`
//! to see the per-criterion summaries).

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use framecheck::contact::{boxes_adjacent, compute_support, ContactParams};
use framecheck::fidelity::{
    topo_scores, view_score, visual_scores, FidelityParams, RasterView, ViewId,
};
use framecheck::fixtures::{
    apply_mutation, canonical_mutation, generate_gable, FixtureSpec, MutationKind,
};
use framecheck::geom::Box3;
use framecheck::plan::{
    check_plan, Complexity, LotSize, PlanAnalysis, PlanContext, PlanDocument, PlanStep,
    PlanViolationKind, StepMembers, StepType,
};
use framecheck::scene::{Category, Member, RoofType, Scene};
use framecheck::validate::{gap_detection, joist_deflection, roof_coverage, run_suite};
use framecheck::{corpus, hungarian_match, SpanTable, ValidationParams};
use framecheck::scene::Phase;

fn random_spec(rng: &mut StdRng) -> FixtureSpec {
    FixtureSpec::new(
        rng.random_range(2.5..9.0),
        rng.random_range(2.4..9.0),
        rng.random_range(1..=2),
    )
}

#[test]
fn acceptance_01_suite_soundness_on_200_random_fixtures() {
    let table = SpanTable::fixture();
    let params = ValidationParams::default();
    let mut rng = StdRng::seed_from_u64(0xF1);
    let start = Instant::now();
    for i in 0..200 {
        let spec = random_spec(&mut rng);
        let scene = generate_gable(&spec).expect("spec within table range");
        let report = run_suite(&scene, &table, &params).unwrap();
        assert!(
            report.overall_pass,
            "fixture {i} ({spec:?}) failed {:?}",
            report.failed_tests()
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() <= 10.0,
        "200 fixtures took {elapsed:?}, budget is 10 s"
    );
    println!("criterion 1 PASS: 200/200 random fixtures valid in {elapsed:?}");
}

#[test]
fn acceptance_02_mutation_kill_matrix() {
    let table = SpanTable::fixture();
    let params = ValidationParams::default();
    let mut rng = StdRng::seed_from_u64(0xF2);
    for kind in MutationKind::ALL {
        let mut kills = 0;
        for rep in 0..20 {
            let scene = generate_gable(&random_spec(&mut rng)).unwrap();
            let mutation = canonical_mutation(kind, &scene, rng.random_range(0..1000)).unwrap();
            let mutated = apply_mutation(&scene, &mutation).unwrap();
            let report = run_suite(&mutated, &table, &params).unwrap();
            let failed = report.failed_tests();
            for target in kind.target_tests() {
                assert!(
                    failed.contains(target),
                    "{kind:?} rep {rep}: target {target:?} did not fail (failed {failed:?}, \
                     mutation {mutation:?})"
                );
            }
            for t in &failed {
                assert!(
                    kind.cofailure_closure().contains(t),
                    "{kind:?} rep {rep}: {t:?} outside documented closure (failed {failed:?})"
                );
            }
            kills += 1;
        }
        println!("criterion 2 PASS: {} kills {kills}/20 within closure", kind.as_str());
    }
}

/// Independent oracle: exhaustive pairwise gap checks plus fixed-point
/// iteration until no flag changes.
fn support_oracle(scene: &Scene, p: &ContactParams) -> Vec<bool> {
    let n = scene.members.len();
    let mut supported: Vec<bool> = scene
        .members
        .iter()
        .map(|m| m.box3.min()[2] < p.ground_height)
        .collect();
    loop {
        let mut changed = false;
        for i in 0..n {
            if supported[i] {
                continue;
            }
            for j in 0..n {
                if i != j
                    && supported[j]
                    && boxes_adjacent(
                        &scene.members[i].box3,
                        &scene.members[j].box3,
                        p.contact_tolerance_eps,
                    )
                {
                    supported[i] = true;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            return supported;
        }
    }
}

#[test]
fn acceptance_03_fixed_point_matches_reachability_oracle() {
    let p = ContactParams::default();
    let mut rng = StdRng::seed_from_u64(0xF3);
    let mut mismatches = 0;
    for _ in 0..500 {
        let n = rng.random_range(0..=12);
        let members: Vec<Member> = (0..n)
            .map(|i| {
                let min = [
                    rng.random_range(0.0..5.0),
                    rng.random_range(0.0..5.0),
                    rng.random_range(0.0..5.0),
                ];
                let ext = [
                    rng.random_range(0.05..1.5),
                    rng.random_range(0.05..1.5),
                    rng.random_range(0.05..1.5),
                ];
                Member {
                    name: format!("Post_{i}"),
                    category: Category::Post,
                    box3: Box3::new(min, [min[0] + ext[0], min[1] + ext[1], min[2] + ext[2]])
                        .unwrap(),
                }
            })
            .collect();
        let scene = Scene::new(members, None).unwrap();
        if compute_support(&scene, &p).supported != support_oracle(&scene, &p) {
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 0);
    println!("criterion 3 PASS: 0 mismatches over 500 random scenes");
}

/// Exhaustive minimum-cost assignment on the same padded square problem,
/// then the within-tolerance fraction over reference members.
fn match_rate_oracle(reference: &[[f64; 3]], generated: &[[f64; 3]], delta: f64, dummy: f64) -> f64 {
    if reference.is_empty() {
        return 1.0;
    }
    if generated.is_empty() {
        return 0.0;
    }
    let n = reference.len().max(generated.len());
    let cost = |i: usize, j: usize| -> f64 {
        if i < reference.len() && j < generated.len() {
            let (a, b) = (reference[i], generated[j]);
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
        } else {
            dummy
        }
    };
    let mut cols: Vec<usize> = (0..n).collect();
    let mut best_cost = f64::INFINITY;
    let mut best_match = 0usize;
    permute(&mut cols, 0, &mut |perm| {
        let total: f64 = perm.iter().enumerate().map(|(i, &j)| cost(i, j)).sum();
        if total < best_cost {
            best_cost = total;
            best_match = (0..reference.len())
                .filter(|&i| perm[i] < generated.len() && cost(i, perm[i]) <= delta)
                .count();
        }
    });
    best_match as f64 / reference.len() as f64
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[test]
fn acceptance_04_hungarian_matches_permutation_oracle() {
    let params = FidelityParams::default();
    let mut rng = StdRng::seed_from_u64(0xF4);
    let point = |rng: &mut StdRng| {
        [
            rng.random_range(0.0..4.0),
            rng.random_range(0.0..4.0),
            rng.random_range(0.0..4.0),
        ]
    };
    let as_scene = |pts: &[[f64; 3]]| {
        Scene::new(
            pts.iter()
                .enumerate()
                .map(|(i, &p)| Member {
                    name: format!("Post_{i}"),
                    category: Category::Post,
                    box3: Box3::new(p, p).unwrap(),
                })
                .collect(),
            None,
        )
        .unwrap()
    };
    let mut mismatches = 0;
    for _ in 0..300 {
        let nr = rng.random_range(0..=7);
        let ng = rng.random_range(0..=7);
        let reference: Vec<[f64; 3]> = (0..nr).map(|_| point(&mut rng)).collect();
        let generated: Vec<[f64; 3]> = (0..ng).map(|_| point(&mut rng)).collect();
        let (ref_scene, gen_scene) = (as_scene(&reference), as_scene(&generated));

        let got = hungarian_match(&ref_scene, &gen_scene, &params);
        // Same dummy construction as the implementation: joint bounding
        // diagonal + 1 exceeds any real distance.
        let joint = ref_scene
            .bounds()
            .into_iter()
            .chain(gen_scene.bounds())
            .reduce(|a, b| a.union(&b));
        let dummy = joint.map(|b| b.diagonal()).unwrap_or(0.0) + 1.0;
        let expect = match_rate_oracle(&reference, &generated, params.match_tolerance_delta, dummy);
        if got != expect {
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 0);
    println!("criterion 4 PASS: 0 mismatches over 300 random instances");
}

#[test]
fn acceptance_05_deflection_formula_exactness() {
    let params = ValidationParams::default();
    // Independent evaluation of 5 w L^4 / (384 E I), I = b h^3 / 12.
    let reference_eval = |b: f64, h: f64, span: f64| -> f64 {
        let inertia = b * (h * h * h) / 12.0;
        (5.0 * 1900.0 * span * span * span * span) / (384.0 * 12e9 * inertia)
    };
    let joist = |span: f64| {
        Scene::new(
            vec![Member {
                name: "Joist_case".into(),
                category: Category::Joist,
                box3: Box3::new([0.0, 0.0, 0.5], [span, 0.038, 0.735]).unwrap(),
            }],
            None,
        )
        .unwrap()
    };
    for (span, expect_pass) in [(3.5, true), (4.5, false)] {
        let computed = joist_deflection(0.038, 0.235, span, &params);
        let reference = reference_eval(0.038, 0.235, span);
        let rel = ((computed - reference) / reference).abs();
        assert!(rel < 1e-12, "relative error {rel}");
        let result = framecheck::validate::deflection(&joist(span), &params);
        assert_eq!(result.pass(), expect_pass, "span {span}");
    }
    println!("criterion 5 PASS: closed-form deflection matches to <1e-12 with listed verdicts");
}

fn flat_view(id: ViewId, foreground: &[(usize, f32)], reds: &[(usize, f32)]) -> RasterView {
    let pixels = 512 * 512;
    let mut rgba = vec![0.0f32; pixels * 4];
    for &(p, a) in foreground {
        rgba[p * 4 + 3] = a;
    }
    for &(p, r) in reds {
        rgba[p * 4] = r;
    }
    RasterView::from_rgba(id, 512, 512, &rgba)
}

#[test]
fn acceptance_06_visual_metric_anchors() {
    let params = FidelityParams::default();
    let mask: Vec<(usize, f32)> = (0..5).map(|i| (i, 1.0)).collect();
    let base = flat_view(ViewId::Front, &mask, &[]);

    // MSE 0 -> S = 1.
    let s = view_score(&base, &base, &params).unwrap();
    assert!((s - 1.0).abs() <= 1e-9);
    // Masked MSE exactly 0.1 (2 of 5 pixels differ by 0.5) -> S = 0.
    let worst = flat_view(ViewId::Front, &mask, &[(0, 0.5), (1, 0.5)]);
    let s = view_score(&base, &worst, &params).unwrap();
    assert!(s.abs() <= 1e-9);
    // Linearity: MSE 0.05 -> S = 0.5.
    let half = flat_view(ViewId::Front, &mask, &[(0, 0.5)]);
    let s = view_score(&base, &half, &params).unwrap();
    assert!((s - 0.5).abs() <= 1e-9);
    println!("criterion 6 PASS: S anchors at (0 -> 1), (0.1 -> 0), (0.05 -> 0.5)");
}

/// Minimal deterministic box-splat renderer: each member's projected
/// bounding rectangle is filled with a name-derived color at alpha 1.
fn splat_render(scene: &Scene, id: ViewId) -> RasterView {
    const SIZE: usize = 512;
    let project = |p: [f64; 3]| -> (f64, f64) {
        let (x, y, z) = (p[0], p[1], p[2]);
        match id {
            ViewId::Front => (x, z),
            ViewId::Back => (-x, z),
            ViewId::Left => (-y, z),
            ViewId::Right => (y, z),
            ViewId::FrontRight => ((x + y) / 2f64.sqrt(), z),
        }
    };
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let rects: Vec<((f64, f64), (f64, f64), u64)> = scene
        .members
        .iter()
        .map(|m| {
            let (u0, v0) = project(m.box3.min());
            let (u1, v1) = project(m.box3.max());
            let (umin, umax) = (u0.min(u1), u0.max(u1));
            let (vmin, vmax) = (v0.min(v1), v0.max(v1));
            lo = (lo.0.min(umin), lo.1.min(vmin));
            hi = (hi.0.max(umax), hi.1.max(vmax));
            let hash = m
                .name
                .bytes()
                .fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
            ((umin, vmin), (umax, vmax), hash)
        })
        .collect();
    let mut rgba = vec![0.0f32; SIZE * SIZE * 4];
    if !rects.is_empty() {
        let scale = f64::max(hi.0 - lo.0, hi.1 - lo.1).max(1e-9) * 1.05;
        for ((umin, vmin), (umax, vmax), hash) in rects {
            let to_px = |u: f64, origin: f64| (((u - origin) / scale) * SIZE as f64) as i64;
            let x0 = to_px(umin, lo.0).clamp(0, SIZE as i64 - 1) as usize;
            let x1 = to_px(umax, lo.0).clamp(0, SIZE as i64 - 1) as usize;
            let y0 = to_px(vmin, lo.1).clamp(0, SIZE as i64 - 1) as usize;
            let y1 = to_px(vmax, lo.1).clamp(0, SIZE as i64 - 1) as usize;
            let color = [
                (hash & 0xff) as f32 / 255.0,
                ((hash >> 8) & 0xff) as f32 / 255.0,
                ((hash >> 16) & 0xff) as f32 / 255.0,
            ];
            for y in y0..=y1 {
                for x in x0..=x1 {
                    let p = (SIZE - 1 - y) * SIZE + x;
                    rgba[p * 4] = color[0];
                    rgba[p * 4 + 1] = color[1];
                    rgba[p * 4 + 2] = color[2];
                    rgba[p * 4 + 3] = 1.0;
                }
            }
        }
    }
    RasterView::from_rgba(id, 512, 512, &rgba)
}

#[test]
fn acceptance_07_metric_identities_on_self() {
    let fparams = FidelityParams::default();
    let mut rng = StdRng::seed_from_u64(0xF7);
    for _ in 0..4 {
        let scene = generate_gable(&random_spec(&mut rng)).unwrap();
        let topo = topo_scores(&scene, &scene, &fparams).unwrap();
        assert_eq!(topo.census_c, 1.0);
        assert_eq!(topo.match_m, 1.0);
        assert_eq!(topo.voxel_v, 1.0);
        assert_eq!(topo.composite_t, 1.0);

        let views: Vec<RasterView> = ViewId::ALL.iter().map(|&id| splat_render(&scene, id)).collect();
        let visual = visual_scores(&views, &views, &fparams).unwrap();
        assert_eq!(visual.mean_s, 1.0);
        assert!(visual.joint_visual_pass);

        let report = run_suite(&scene, &SpanTable::fixture(), &ValidationParams::default()).unwrap();
        assert!(framecheck::joint_pass(&report, &visual));
    }
    println!("criterion 7 PASS: C = M = V = T = 1 and joint visual pass on (s, s)");
}

#[test]
fn acceptance_08_gap_pass_implies_coverage_pass_on_1000_grids() {
    let params = ValidationParams::default();
    let mut rng = StdRng::seed_from_u64(0xF8);
    let mut counterexamples = 0;
    for _ in 0..1000 {
        let slab_w = rng.random_range(2.0..14.0);
        let slab_d = rng.random_range(1.0..8.0);
        let mut members = vec![Member {
            name: "SolePlate_slab".into(),
            category: Category::SolePlate,
            box3: Box3::new([0.0, 0.0, 0.0], [slab_w, slab_d, 0.1]).unwrap(),
        }];
        for i in 0..rng.random_range(0..8) {
            let x0 = rng.random_range(0.0..14.0);
            let y0 = rng.random_range(0.0..8.0);
            members.push(Member {
                name: format!("Rafter_{i:02}"),
                category: Category::Rafter,
                box3: Box3::new(
                    [x0, y0, 2.0],
                    [x0 + rng.random_range(0.2..6.0), y0 + rng.random_range(0.2..4.0), 2.4],
                )
                .unwrap(),
            });
        }
        let scene = Scene::new(members, None).unwrap();
        let (t7, _) = gap_detection(&scene, &params);
        let (t6, _) = roof_coverage(&scene, &params);
        if t7.pass() && !t6.pass() {
            counterexamples += 1;
        }
    }
    assert_eq!(counterexamples, 0);
    println!("criterion 8 PASS: T7 => T6 held on 1000 random coverage grids");
}

#[test]
fn acceptance_09_corpus_output_is_worker_count_invariant() {
    let table = SpanTable::fixture();
    let params = ValidationParams::default();
    let dir = tempfile::tempdir().unwrap();
    let mut rng = StdRng::seed_from_u64(0xF9);
    for i in 0..100 {
        let scene = generate_gable(&random_spec(&mut rng)).unwrap();
        let scene = match i % 4 {
            1 => apply_mutation(&scene, &canonical_mutation(MutationKind::RemoveRidge, &scene, i).unwrap()).unwrap(),
            2 => apply_mutation(&scene, &canonical_mutation(MutationKind::FloatMember, &scene, i).unwrap()).unwrap(),
            3 => apply_mutation(&scene, &canonical_mutation(MutationKind::StretchSpan, &scene, i).unwrap()).unwrap(),
            _ => scene,
        };
        std::fs::write(
            dir.path().join(format!("scene_{i:03}.json")),
            framecheck::serialize_scene(&scene),
        )
        .unwrap();
    }
    // One unreadable file, reported but excluded from denominators.
    std::fs::write(dir.path().join("broken.json"), b"{ not json").unwrap();

    let single = corpus::machine_lines(&corpus::run_corpus(dir.path(), &table, &params, Some(1)).unwrap());
    let pooled = corpus::machine_lines(&corpus::run_corpus(dir.path(), &table, &params, Some(4)).unwrap());
    let default = corpus::machine_lines(&corpus::run_corpus(dir.path(), &table, &params, None).unwrap());
    assert_eq!(single, pooled);
    assert_eq!(single, default);
    assert!(single.contains("\"record\":\"summary\""));
    assert!(single.contains("broken"));
    println!("criterion 9 PASS: corpus machine output byte-identical at 1/4/default workers");
}

#[test]
fn acceptance_10_plan_checker_rejects_prompt_cases() {
    let ctx = PlanContext {
        lot_width: 7.0,
        lot_depth: 5.0,
        stories: 1,
        roof_type: RoofType::Gable,
    };
    let base = |steps: Vec<PlanStep>| PlanDocument {
        analysis: PlanAnalysis {
            description: "case".into(),
            stories: 1,
            sections: vec!["main".into()],
            roof_type: RoofType::Gable,
            complexity: Complexity::Simple,
            lot_size: LotSize { width: 7.0, depth: 5.0, area: 35.0 },
        },
        sections: vec![],
        construction_order: steps,
        expected_member_counts: Default::default(),
    };
    let step = |id: i64, deps: Vec<i64>, member_type: &str| PlanStep {
        step: id,
        section: "main".into(),
        phase: Phase::Foundation,
        step_type: StepType::Critical,
        members: vec![StepMembers { member_type: member_type.into(), count: 4 }],
        depends_on: deps,
    };

    // Case 1: lot width 7.01 against injected 7.00.
    let mut plan = base(vec![step(1, vec![], "Sill")]);
    plan.analysis.lot_size.width = 7.01;
    plan.analysis.lot_size.area = 35.05;
    let violations = check_plan(&plan, &ctx);
    assert!(
        violations.iter().any(|v| v.kind == PlanViolationKind::LotMismatch),
        "{violations:?}"
    );

    // Case 2: taxonomy breach.
    let plan = base(vec![step(1, vec![], "vertical_member")]);
    let violations = check_plan(&plan, &ctx);
    assert!(violations.iter().any(|v| v.kind == PlanViolationKind::UnknownMemberType));

    // Case 3: two-step dependency cycle.
    let plan = base(vec![step(1, vec![2], "Sill"), step(2, vec![1], "Joist")]);
    let violations = check_plan(&plan, &ctx);
    assert!(violations.iter().any(|v| v.kind == PlanViolationKind::DependencyCycle));

    println!("criterion 10 PASS: all three prompt-derived plan defects rejected correctly");
}
