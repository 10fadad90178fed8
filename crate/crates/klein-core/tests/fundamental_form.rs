use klein_core::math::{PI, TAU};
use klein_core::surface::{dumbbell_tube, kb1, kb2, kb3_dickson, piriform_tube, torus, trott_tube, ParametricSurface};
use klein_core::verify::{first_fundamental_form, first_fundamental_form_analytic, seam_tangency};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn catalog() -> Vec<ParametricSurface> {
    vec![
        kb1(3.0).unwrap(),
        kb2(),
        kb3_dickson(),
        piriform_tube(20.0, 8.0, 5.5, 0.4).unwrap(),
        dumbbell_tube(5.0, 2.0, 0.5, 1.0 / 30.0).unwrap(),
        trott_tube(),
        torus(2.0, 0.5).unwrap(),
    ]
}

#[test]
fn cauchy_schwarz_at_random_points() {
    let mut rng = StdRng::seed_from_u64(17);
    for s in catalog() {
        let d = s.domain_u;
        for _ in 0..1000 {
            let u = rng.random_range(d.min + 1e-3 * d.len()..d.max - 1e-3 * d.len());
            let v = rng.random_range(0.0..TAU);
            let ff = first_fundamental_form_analytic(&s, u, v).unwrap();
            assert!(ff.det >= -1e-12 && ff.e >= 0.0 && ff.g >= 0.0, "{} ({u}, {v}): {ff:?}", s.name);
        }
    }
}

#[test]
fn det_refinement_ratio_on_kb2() {
    // |det_h − det_{h/2}| / |det_{h/2} − det_{h/4}| → 4 for a second-order stencil
    let s = kb2();
    let mut rng = StdRng::seed_from_u64(23);
    let h = 1e-2;
    let mut ratios = Vec::new();
    for _ in 0..100 {
        let (u, v) = (rng.random_range(0.05..PI - 0.05), rng.random_range(0.0..TAU));
        let det = |h: f64| first_fundamental_form(&s, u, v, h).unwrap().det;
        let (a, b, c) = (det(h), det(h / 2.0), det(h / 4.0));
        ratios.push((a - b).abs() / (b - c).abs());
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((3.0..=5.0).contains(&mean), "mean ratio {mean}");
}

#[test]
fn seam_angle_is_side_symmetric() {
    for s in [dumbbell_tube(5.0, 2.0, 0.5, 1.0 / 30.0).unwrap(), kb1(3.0).unwrap(), kb3_dickson()] {
        let h = 1e-12 * s.domain_u.len();
        let a = seam_tangency(&s, s.domain_u.min, 64, h).unwrap();
        let b = seam_tangency(&s, s.domain_u.max, 64, h).unwrap();
        assert!((a.max_angle - b.max_angle).abs() < 1e-6, "{}: {} vs {}", s.name, a.max_angle, b.max_angle);
    }
}
