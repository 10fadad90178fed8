//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Runs without the libtest harness so the lines always show.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use klein_core::curve::{check_closure_conditions, PlanarCurve, RadiusFunction, ToleranceConfig};
use klein_core::math::{PI, TAU};
use klein_core::mesh::{
    euler_characteristic, octahedron, orientability, self_intersections, self_intersections_brute_force, tessellate,
    weld, TriangleMesh,
};
use klein_core::surface::{dumbbell_tube, kb1, kb2, piriform_tube, torus, trott_tube, ParametricSurface};
use klein_core::verify::{fd_convergence_order, regularity_scan};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn klein(args: &[&str], cwd: &Path) -> (i32, Duration) {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_klein")).args(args).current_dir(cwd).output().unwrap().status;
    (status.code().unwrap_or(-1), start.elapsed())
}

fn welded(s: &ParametricSurface, nu: usize, nv: usize) -> TriangleMesh {
    let m = tessellate(s, nu, nv, 1e-3).unwrap();
    weld(&m, s, 1e-9 * m.diameter()).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn immersion_claims(dir: &Path) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    let tubes = [
        ("piriform-tube", piriform_tube(20.0, 8.0, 5.5, 0.4).unwrap()),
        ("dumbbell-tube", dumbbell_tube(5.0, 2.0, 0.5, 1.0 / 30.0).unwrap()),
    ];
    for (name, s) in tubes {
        let (code, took) = klein(&["verify", name], dir);
        let scan = regularity_scan(&s, 256, 64, 1e-3).unwrap();
        ok &= code == 0 && scan.min_det > 0.0 && took < Duration::from_secs(5);
        detail.push(format!("{name}: exit {code}, min EG-F² {:.3e}, {:.2?}", scan.min_det, took));
    }
    check(ok, detail.join("; "))
}

fn non_immersion_claim(dir: &Path) -> Outcome {
    let (code, took) = klein(&["verify", "kb3", "--report", "kb3.json"], dir);
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("kb3.json")).unwrap()).unwrap();
    let t = &r["seam_tangency"];
    let angle = t["max_angle_radians"].as_f64().unwrap_or(0.0);
    let at_pi = t["location"][0].as_f64().is_some_and(|u| (u - PI).abs() < 1e-12);
    let ok = code == 2 && t["pass"] == false && angle > 1e-3 && at_pi && took < Duration::from_secs(5);
    check(ok, format!("exit {code}, max normal angle {angle:.6} rad at u = π: {at_pi}, {took:.2?}"))
}

fn gluing_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let k1 = kb1(3.0).unwrap();
    let k2 = kb2();
    let (mut w1, mut w2) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let (u, v) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        w1 = w1.max(k1.eval_raw(u + TAU, TAU - v).unwrap().distance(k1.eval_raw(u, v).unwrap()));
        let u = rng.random_range(0.0..PI);
        w2 = w2.max(k2.eval_raw(u + PI, PI - v).unwrap().distance(k2.eval_raw(u, v).unwrap()));
    }
    check(w1 < 1e-9 && w2 < 1e-9, format!("max residual over 10⁴ samples: kb1 {w1:.2e}, kb2 {w2:.2e}"))
}

fn topology() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for s in [kb1(3.0).unwrap(), kb2(), dumbbell_tube(5.0, 2.0, 0.5, 1.0 / 30.0).unwrap()] {
        let t = euler_characteristic(&welded(&s, 128, 64));
        let orient = t.orientable;
        ok &= t.watertight && t.euler_characteristic == 0 && orient == Some(false);
        detail
            .push(format!("{} χ={} watertight={} orientable={orient:?}", s.name, t.euler_characteristic, t.watertight));
    }
    let tor = welded(&torus(2.0, 0.5).unwrap(), 128, 64);
    let t = euler_characteristic(&tor);
    ok &= t.euler_characteristic == 0 && orientability(&tor) == Ok(true);
    detail.push(format!("torus χ={} orientable={:?}", t.euler_characteristic, t.orientable));
    let oct = euler_characteristic(&octahedron());
    ok &= oct.euler_characteristic == 2;
    detail.push(format!("octahedron χ={}", oct.euler_characteristic));
    let took = start.elapsed();
    ok &= took < Duration::from_secs(10);
    detail.push(format!("{took:.2?}"));
    check(ok, detail.join("; "))
}

fn non_embeddability() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for s in [kb1(3.0).unwrap(), kb2(), dumbbell_tube(5.0, 2.0, 0.5, 1.0 / 30.0).unwrap()] {
        let n = self_intersections(&welded(&s, 128, 64), 0.0).intersecting_pairs;
        ok &= n > 0;
        detail.push(format!("{} {n}", s.name));
    }
    let n = self_intersections(&welded(&torus(2.0, 0.5).unwrap(), 128, 64), 0.0).intersecting_pairs;
    ok &= n == 0;
    detail.push(format!("torus {n}"));
    let mut agree = true;
    for s in [kb1(3.0).unwrap(), kb2(), dumbbell_tube(5.0, 2.0, 0.5, 1.0 / 30.0).unwrap(), torus(2.0, 0.5).unwrap()] {
        let m = welded(&s, 32, 30);
        agree &=
            m.triangles.len() <= 2000 && self_intersections(&m, 0.0).pairs == self_intersections_brute_force(&m).pairs;
    }
    ok &= agree;
    detail.push(format!("hash == brute force on ≤2000 triangles: {agree}"));
    check(ok, detail.join("; "))
}

fn closure_conditions() -> Outcome {
    let cfg = ToleranceConfig::default();
    let pir = check_closure_conditions(
        &PlanarCurve::cusp_piriform(20.0, 8.0).unwrap(),
        &RadiusFunction::sqrt_cusp(5.5, 0.4).unwrap(),
        &cfg,
    )
    .unwrap();
    let dumb = check_closure_conditions(
        &PlanarCurve::dumbbell(5.0, 2.0).unwrap(),
        &RadiusFunction::sqrt_cusp_half(0.5, 1.0 / 30.0).unwrap(),
        &cfg,
    )
    .unwrap();
    let circle = PlanarCurve::circle(2.0).unwrap();
    let control =
        check_closure_conditions(&circle, &RadiusFunction::constant(0.5, circle.domain).unwrap(), &cfg).unwrap();
    let in_band = |p: Option<f64>| p.is_some_and(|p| (0.4..=0.6).contains(&p));
    let (pp, pd) = (pir.cond_iv_exponent(), dumb.cond_iv_exponent());
    let ok = pir.all_pass() && dumb.all_pass() && in_band(pp) && in_band(pd) && !control.cond_iv_pass;
    check(
        ok,
        format!(
            "piriform exponent {pp:?}, dumbbell exponent {pd:?}, circle+constant condition iv pass={}",
            control.cond_iv_pass
        ),
    )
}

fn open_boundaries() -> Outcome {
    let loops: Vec<(&str, usize)> = [piriform_tube(20.0, 8.0, 5.5, 0.4).unwrap(), trott_tube()]
        .iter()
        .map(|s| (s.name, euler_characteristic(&welded(s, 256, 64)).boundary_loops))
        .collect();
    check(loops.iter().all(|l| l.1 == 2), format!("boundary loops {loops:?}"))
}

fn numerical_hygiene() -> Outcome {
    let mut rng = StdRng::seed_from_u64(99);
    let mut detail = Vec::new();
    let mut ok = true;
    for (s, lo, hi) in [(kb2(), 0.01, PI - 0.01), (dumbbell_tube(5.0, 2.0, 0.5, 1.0 / 30.0).unwrap(), 0.2, PI - 0.2)] {
        let orders: Vec<f64> = (0..100)
            .map(|_| {
                let (u, v) = (rng.random_range(lo..hi), rng.random_range(0.0..TAU));
                fd_convergence_order(&s, u, v, 4e-3).unwrap()
            })
            .collect();
        let (min, max) = orders.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &p| (a.min(p), b.max(p)));
        ok &= min >= 1.5 && max <= 2.5;
        detail.push(format!("{} order in [{min:.3}, {max:.3}]", s.name));
    }
    check(ok, detail.join("; "))
}

fn determinism() -> Outcome {
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path();
        klein(&["generate", "dumbbell-tube", "--nu", "128", "--nv", "64", "--weld", "--normals", "--out", "m.obj"], p);
        klein(&["generate", "kb2", "--weld", "--format", "stl", "--out", "m.stl", "--report", "g.json"], p);
        klein(&["verify", "piriform-tube", "--report", "v.json"], p);
        let read = |f: &str| std::fs::read(p.join(f)).unwrap_or_default();
        outputs.push([read("m.obj"), read("m.stl"), read("g.json"), read("v.json")]);
    }
    let nonempty = outputs[0].iter().all(|b| !b.is_empty());
    check(
        nonempty && outputs[0] == outputs[1],
        format!("4 artifacts byte-identical across runs: {}", outputs[0] == outputs[1]),
    )
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let criteria: [Criterion; 9] = [
        ("1 immersion claims", Box::new(|| immersion_claims(dir.path()))),
        ("2 non-immersion claim", Box::new(|| non_immersion_claim(dir.path()))),
        ("3 gluing identities", Box::new(gluing_identities)),
        ("4 topology", Box::new(topology)),
        ("5 non-embeddability", Box::new(non_embeddability)),
        ("6 closure conditions", Box::new(closure_conditions)),
        ("7 open boundaries", Box::new(open_boundaries)),
        ("8 numerical hygiene", Box::new(numerical_hygiene)),
        ("9 determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(d) => println!("PASS  {name:<24} {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL  {name:<24} {d}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
