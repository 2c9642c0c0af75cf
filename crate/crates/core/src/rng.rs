//! Seeded random sampling shared by the multistart solvers and experiments.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::forms::CubicForm;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (independent real and imaginary parts, variance 1/2 each).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_cubic<R: Rng + ?Sized>(rng: &mut R) -> CubicForm {
    let mut c = [C64::new(0.0, 0.0); 10];
    for v in c.iter_mut() {
        *v = complex_normal(rng);
    }
    CubicForm::from_raw(c).normalized()
}

/// A random cubic with a node: no `z3^3`, `z1 z3^2`, `z2 z3^2` terms, so
/// singular at `(0,0,1)`, moved by a random change of coordinates.
pub fn random_nodal_cubic<R: Rng + ?Sized>(rng: &mut R) -> CubicForm {
    let mut c = [C64::new(0.0, 0.0); 10];
    for v in c.iter_mut() {
        *v = complex_normal(rng);
    }
    // indices of (0,0), (0,1), (1,0) in the coefficient layout
    for k in [0, 1, 4] {
        c[k] = C64::new(0.0, 0.0);
    }
    CubicForm::from_raw(c).compose(&random_gl3(rng)).normalized()
}

/// A random element of GL(3, C) with bounded condition number: a random
/// unitary-ish perturbation of the identity scaled into a well-conditioned range.
pub fn random_gl3<R: Rng + ?Sized>(rng: &mut R) -> [[C64; 3]; 3] {
    loop {
        let mut m = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = complex_normal(rng) * 0.6;
                if i == j {
                    *v += C64::new(1.0, 0.0);
                }
            }
        }
        if crate::linalg::det3(&m).norm() > 0.2 {
            return m;
        }
    }
}
