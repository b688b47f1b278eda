//! Fixtures shared by the benchmarks.

use scatterfm::{Curve, Scene, SceneCase, Variant};

fn disc(c: [f64; 2], r: f64) -> Curve {
    Curve::circle(c, r).expect("valid circle")
}

/// Kite plus sound-hard disc with the a-priori domains of the standard experiment.
pub fn kite_scene() -> Scene {
    Scene {
        case: SceneCase::Mixed,
        omega1: Curve::kite([-3.0, 0.0], 1.0, 0.0).expect("valid kite"),
        contrast: None,
        omega2: disc([3.0, 0.0], 1.0),
        b1: Some(disc([-3.0, 0.0], 0.3)),
        b2: disc([3.0, 0.0], 1.5),
        b3: Some(disc([3.4, 0.4], 0.4)),
        wavenumber: 3.0,
        lambda0: 1.0,
        variant: Variant::T12,
    }
}
