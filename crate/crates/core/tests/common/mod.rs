//! Shared helpers for the integration suites: the scalar closed-form
//! oracle and seeded random instance generation.

// not every test target uses every helper
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use singular_lq::cli::generate_instance;
use singular_lq::hamiltonian::ModeParams;
use singular_lq::matrix::Matrix;
use singular_lq::synthesis::ProblemInstance;

/// Closed forms for the scalar instance A = 0.5, B = 1, Q = 1, R = 1,
/// S = 0, computed independently of the solver path: P+ is the positive
/// root of P^2 - 0.25 P - 1 = 0 and W is the geometric series
/// G / (1 - A+^2) with G = 1 / (1 + P+).
pub struct ScalarOracle {
    pub p_plus: f64,
    pub k_plus: f64,
    pub a_plus: f64,
    pub w: f64,
    pub kbar_plus: f64,
}

impl ScalarOracle {
    pub fn compute() -> Self {
        let p_plus = (0.25 + 4.0625_f64.sqrt()) / 2.0;
        let k_plus = 0.5 * p_plus / (1.0 + p_plus);
        let a_plus = 0.5 - k_plus;
        let g = 1.0 / (1.0 + p_plus);
        let w = g / (1.0 - a_plus * a_plus);
        let kbar_plus = (1.0 - 0.5 * p_plus * w * a_plus) / (1.0 + p_plus);
        Self {
            p_plus,
            k_plus,
            a_plus,
            w,
            kbar_plus,
        }
    }
}

pub fn scalar_q_one_instance(k_f: usize) -> ProblemInstance {
    ProblemInstance::new(
        k_f,
        Matrix::new(1, 1, vec![0.5]).unwrap(),
        Matrix::new(1, 1, vec![1.0]).unwrap(),
        Matrix::new(1, 1, vec![1.0]).unwrap(),
        Matrix::new(1, 1, vec![1.0]).unwrap(),
        Matrix::new(1, 1, vec![0.0]).unwrap(),
    )
    .unwrap()
}

/// Deterministic instance for a seed, with dimensions n in 1..=5,
/// m in 1..=3 and horizon k_f in 2..=12 drawn from the seed itself.
pub fn seeded_instance(seed: u64) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_d1ce);
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=3);
    let k_f = rng.gen_range(2..=12);
    generate_instance(seed, n, m, k_f).expect("generated instance is valid")
}

/// Random unit-norm (alpha, beta) pair.
pub fn unit_params(rng: &mut ChaCha8Rng, n: usize) -> ModeParams {
    let draw = |rng: &mut ChaCha8Rng| -> Matrix {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|e| e * e).sum::<f64>().sqrt();
        if norm > 0.0 {
            for e in &mut v {
                *e /= norm;
            }
        } else {
            v[0] = 1.0;
        }
        Matrix::col_vec(&v).unwrap()
    };
    ModeParams::new(draw(rng), draw(rng)).unwrap()
}
