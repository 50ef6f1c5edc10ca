mod support;

use minsurf_core::catalog;
use minsurf_core::geometry::{
    curvature_sample, gauss_curvature, gauss_map, jet, metric_coefficient, principal_curvatures, stereographic,
    unit_normal,
};
use minsurf_core::{Complex64, Surface};
use support::{close, dot, shape, Map};

const FD_STEP: f64 = 1e-4;

type Case = (&'static str, Map, Vec<(f64, f64)>);

fn cases() -> Vec<Case> {
    vec![
        ("catenoid", support::catenoid as Map, vec![(1.0, 0.5), (-2.0, 0.7), (0.3, -4.0), (0.2, 0.15)]),
        ("helicoid", support::helicoid as Map, vec![(0.0, 0.0), (0.5, 1.2), (-1.1, -0.4), (1.3, 0.9)]),
        ("enneper", support::enneper as Map, vec![(0.1, 0.2), (-0.5, 0.3), (0.6, -0.6), (0.0, 0.8)]),
    ]
}

fn surface(name: &str) -> Surface {
    Surface::new(catalog::surface_spec(name).unwrap().unwrap(), 1e-12).unwrap()
}

#[test]
fn closed_forms_match_the_representation() {
    for (name, map, points) in cases() {
        let s = surface(name);
        for (x, y) in points {
            let got = s.evaluate(Complex64::new(x, y)).unwrap();
            let want = map(x, y);
            for k in 0..3 {
                assert!((got[k] - want[k]).abs() < 1e-10, "{name} at ({x}, {y}): {got:?} vs {want:?}");
            }
        }
    }
}

#[test]
fn first_fundamental_form_is_conformal() {
    for (name, map, points) in cases() {
        let s = surface(name);
        for (x, y) in points {
            let sh = shape(map, x, y, FD_STEP);
            let [e, f, g] = sh.first;
            let lambda = metric_coefficient(s.data(), Complex64::new(x, y)).unwrap();
            assert!(close(e, g, 1e-6) && f.abs() < 1e-6 * e, "{name}: {:?}", sh.first);
            // λ = ½ Σ|f|², so E = G = λ.
            assert!(close(e, lambda, 1e-6), "{name}: E {e} vs lambda {lambda}");
        }
    }
}

#[test]
fn gauss_curvature_matches_shape_operator() {
    for (name, map, points) in cases() {
        let s = surface(name);
        for (x, y) in points {
            let sh = shape(map, x, y, FD_STEP);
            let k = gauss_curvature(s.data(), Complex64::new(x, y)).unwrap();
            assert!(close(k, sh.k, 1e-5), "{name} at ({x}, {y}): K {k} vs oracle {}", sh.k);
            assert!(sh.h.abs() < 1e-5 * (1.0 + sh.kappa.0.abs()), "{name}: oracle H = {}", sh.h);
        }
    }
}

#[test]
fn principal_curvatures_match_shape_operator() {
    for (name, map, points) in cases() {
        let s = surface(name);
        for (x, y) in points {
            let sh = shape(map, x, y, FD_STEP);
            let (k1, k2) = principal_curvatures(s.data(), Complex64::new(x, y)).unwrap();
            let (hi, lo) = (k1.max(k2), k1.min(k2));
            assert!(close(hi, sh.kappa.0, 1e-5), "{name}: {hi} vs {}", sh.kappa.0);
            assert!(close(lo, sh.kappa.1, 1e-5), "{name}: {lo} vs {}", sh.kappa.1);
        }
    }
}

#[test]
fn normals_agree_with_oracle() {
    for (name, map, points) in cases() {
        let s = surface(name);
        for (x, y) in points {
            let z = Complex64::new(x, y);
            let sh = shape(map, x, y, FD_STEP);
            let from_gauss = stereographic(gauss_map(s.data(), z).unwrap());
            assert!(dot(from_gauss, sh.normal) > 1.0 - 1e-8, "{name}: {from_gauss:?} vs {:?}", sh.normal);
            let j = jet(&s, z, 1e-4).unwrap();
            let from_jet = unit_normal(&j).unwrap();
            assert!(dot(from_jet, sh.normal) > 1.0 - 1e-8, "{name}: {from_jet:?} vs {:?}", sh.normal);
        }
    }
}

#[test]
fn curvature_sample_is_consistent() {
    let s = surface("enneper");
    let z = Complex64::new(0.3, -0.2);
    let c = curvature_sample(&s, z).unwrap();
    let (k1, k2) = c.kappa.unwrap();
    assert!(close(k1 * k2, c.k, 1e-12));
    assert!((k1 + k2).abs() < 1e-12);
    assert!(c.mean_curvature.iter().all(|h| h.abs() < 1e-5));
    // Enneper: K = −16 / (1 + |z|²)⁴ in this normalization.
    let want = -16.0 / (1.0 + z.norm_sqr()).powi(4);
    assert!(close(c.k, want, 1e-12), "{} vs {want}", c.k);
}
