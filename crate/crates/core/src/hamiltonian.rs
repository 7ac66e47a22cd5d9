//! The decoupling change of basis for the singular Hamiltonian system and
//! the two-parameter trajectory families built on it.
//!
//! The coupled state/costate/input difference equations
//!
//!   x_{k+1}    = A x_k + B u_k
//!   -A' p_{k+1} = Q x_k - p_k + S u_k
//!   -B' p_{k+1} = S' x_k + R u_k
//!
//! are equivalent, under the transform implemented here, to the decoupled
//! pair v_{k+1} = A+ v_k and A+' w_{k+1} = w_k. Every admissible trajectory
//! is parametrized by the free vectors (alpha, beta) through the modes
//! v_k = A+^k alpha, w_k = (A+')^{k_f - k} beta.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::synthesis::{ProblemInstance, SynthesisResult};

/// The free parameter vectors of the solution family.
#[derive(Debug, Clone)]
pub struct ModeParams {
    pub alpha: Matrix,
    pub beta: Matrix,
}

impl ModeParams {
    pub fn new(alpha: Matrix, beta: Matrix) -> Result<Self> {
        if alpha.cols() != 1 || beta.cols() != 1 || alpha.rows() != beta.rows() {
            return Err(Error::DimensionMismatch {
                context: "ModeParams::new",
                expected: "two column vectors of equal length".into(),
                got: format!(
                    "alpha {}x{}, beta {}x{}",
                    alpha.rows(),
                    alpha.cols(),
                    beta.rows(),
                    beta.cols()
                ),
            });
        }
        Ok(Self { alpha, beta })
    }

    pub fn from_slices(alpha: &[f64], beta: &[f64]) -> Result<Self> {
        Self::new(Matrix::col_vec(alpha)?, Matrix::col_vec(beta)?)
    }

    pub fn dim(&self) -> usize {
        self.alpha.rows()
    }
}

/// Decoupled mode sequences v_0..v_{k_f} and w_0..w_{k_f}.
#[derive(Debug, Clone)]
pub struct ModeTrajectory {
    pub v: Vec<Matrix>,
    pub w: Vec<Matrix>,
}

/// State/costate (and optionally input) sequences. `x` and `p` always run
/// 0..k_f; `u`, when present, runs 0..k_f-1.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub x: Vec<Matrix>,
    pub p: Vec<Matrix>,
    pub u: Option<Vec<Matrix>>,
}

impl Trajectory {
    pub fn k_f(&self) -> usize {
        self.x.len() - 1
    }
}

/// Worst-case relative residuals of the three coupled equations over the
/// horizon.
#[derive(Debug, Clone, Serialize)]
pub struct HamiltonianResiduals {
    /// x_{k+1} - A x_k - B u_k
    pub state_residual: f64,
    /// -A' p_{k+1} - Q x_k + p_k - S u_k
    pub costate_residual: f64,
    /// -B' p_{k+1} - S' x_k - R u_k
    pub stationarity_residual: f64,
}

impl HamiltonianResiduals {
    pub fn max_residual(&self) -> f64 {
        self.state_residual
            .max(self.costate_residual)
            .max(self.stationarity_residual)
    }
}

/// Propagate the decoupled modes: v forward from alpha, w backward from
/// w_{k_f} = beta via w_k = A+' w_{k+1}. The backward sweep never inverts
/// A+, so nilpotent closed loops are handled exactly.
pub fn propagate_modes(params: &ModeParams, syn: &SynthesisResult, k_f: usize) -> ModeTrajectory {
    let a_plus = &syn.a_plus;
    let a_plus_t = a_plus.transpose();

    let mut v = Vec::with_capacity(k_f + 1);
    v.push(params.alpha.clone());
    for k in 0..k_f {
        let next = a_plus * &v[k];
        v.push(next);
    }

    let mut w = vec![Matrix::zeros(params.dim(), 1); k_f + 1];
    w[k_f] = params.beta.clone();
    for k in (0..k_f).rev() {
        w[k] = &a_plus_t * &w[k + 1];
    }

    ModeTrajectory { v, w }
}

/// Map modes to state and costate: x = v + W w, p = P+ v + (P+ W - I) w.
pub fn couple(v: &Matrix, w: &Matrix, syn: &SynthesisResult) -> (Matrix, Matrix) {
    let x = v + &(&syn.w * w);
    let pw = &syn.p_plus * &syn.w;
    let p = &(&syn.p_plus * v) + &(&(&pw * w) - w);
    (x, p)
}

/// Inverse of `couple`: w = P+ x - p, v = (I - W P+) x + W p.
pub fn decouple(x: &Matrix, p: &Matrix, syn: &SynthesisResult) -> (Matrix, Matrix) {
    let w = &(&syn.p_plus * x) - p;
    let v = &(x - &(&syn.w * &(&syn.p_plus * x))) + &(&syn.w * p);
    (v, w)
}

/// Input reconstruction: u_k = -K+ v_k + Kbar+ w_{k+1}.
pub fn input_from_modes(v_k: &Matrix, w_k_plus_1: &Matrix, syn: &SynthesisResult) -> Matrix {
    &(&syn.kbar_plus * w_k_plus_1) - &(&syn.k_plus * v_k)
}

fn check_params(inst: &ProblemInstance, params: &ModeParams) -> Result<()> {
    if params.dim() != inst.n {
        return Err(Error::DimensionMismatch {
            context: "trajectory parameters",
            expected: format!("alpha and beta of length {}", inst.n),
            got: format!("{}", params.dim()),
        });
    }
    Ok(())
}

/// State/costate family:
/// [x_k; p_k] = [I; P+] A+^k alpha + [W; P+ W - I] (A+')^{k_f - k} beta,
/// for 0 <= k <= k_f. No input sequence.
pub fn trajectory_xp(
    inst: &ProblemInstance,
    syn: &SynthesisResult,
    params: &ModeParams,
) -> Result<Trajectory> {
    check_params(inst, params)?;
    let modes = propagate_modes(params, syn, inst.k_f);
    let mut x = Vec::with_capacity(inst.k_f + 1);
    let mut p = Vec::with_capacity(inst.k_f + 1);
    for k in 0..=inst.k_f {
        let (xk, pk) = couple(&modes.v[k], &modes.w[k], syn);
        x.push(xk);
        p.push(pk);
    }
    Ok(Trajectory { x, p, u: None })
}

/// Full family with input:
/// [x_k; p_k; u_k] = [I; P+; -K+] A+^k alpha
///                 + [W A+'; (P+ W - I) A+'; Kbar+] (A+')^{k_f - k - 1} beta,
/// for 0 <= k <= k_f - 1. Since the backward mode sweep already enforces
/// w_k = A+' w_{k+1}, the (x, p) part coincides with `trajectory_xp`; the
/// terminal pair (x_{k_f}, p_{k_f}) is filled in from that family so the
/// coupled equations can be evaluated at k = k_f - 1.
pub fn trajectory_xpu(
    inst: &ProblemInstance,
    syn: &SynthesisResult,
    params: &ModeParams,
) -> Result<Trajectory> {
    check_params(inst, params)?;
    let modes = propagate_modes(params, syn, inst.k_f);
    let mut x = Vec::with_capacity(inst.k_f + 1);
    let mut p = Vec::with_capacity(inst.k_f + 1);
    let mut u = Vec::with_capacity(inst.k_f);
    for k in 0..=inst.k_f {
        let (xk, pk) = couple(&modes.v[k], &modes.w[k], syn);
        x.push(xk);
        p.push(pk);
        if k < inst.k_f {
            u.push(input_from_modes(&modes.v[k], &modes.w[k + 1], syn));
        }
    }
    Ok(Trajectory { x, p, u: Some(u) })
}

/// Evaluate the three coupled equations on a trajectory with input.
/// Each residual is the maximum over k of the equation's 2-norm, relative
/// to max(1, largest vector magnitude in the trajectory).
pub fn hamiltonian_residual(
    inst: &ProblemInstance,
    traj: &Trajectory,
) -> Result<HamiltonianResiduals> {
    let u = traj.u.as_ref().ok_or(Error::MissingInput)?;
    let k_f = traj.k_f();
    if u.len() != k_f || traj.p.len() != k_f + 1 {
        return Err(Error::DimensionMismatch {
            context: "hamiltonian_residual",
            expected: format!("x, p over 0..{k_f} and u over 0..{}", k_f - 1),
            got: format!("x: {}, p: {}, u: {}", traj.x.len(), traj.p.len(), u.len()),
        });
    }

    let mut magnitude: f64 = 0.0;
    for seq in [&traj.x, &traj.p] {
        for vec in seq {
            magnitude = magnitude.max(vec.frob_norm());
        }
    }
    for vec in u {
        magnitude = magnitude.max(vec.frob_norm());
    }
    let denom = magnitude.max(1.0);

    let at = inst.a.transpose();
    let bt = inst.b.transpose();
    let st = inst.s.transpose();

    let mut r1: f64 = 0.0;
    let mut r2: f64 = 0.0;
    let mut r3: f64 = 0.0;
    for (k, u_k) in u.iter().enumerate() {
        let res1 = &(&traj.x[k + 1] - &(&inst.a * &traj.x[k])) - &(&inst.b * u_k);
        let res2 =
            &(&(&traj.p[k] - &(&at * &traj.p[k + 1])) - &(&inst.q * &traj.x[k])) - &(&inst.s * u_k);
        let res3 = &(&-&(&bt * &traj.p[k + 1]) - &(&st * &traj.x[k])) - &(&inst.r * u_k);
        r1 = r1.max(res1.frob_norm());
        r2 = r2.max(res2.frob_norm());
        r3 = r3.max(res3.frob_norm());
    }

    Ok(HamiltonianResiduals {
        state_residual: r1 / denom,
        costate_residual: r2 / denom,
        stationarity_residual: r3 / denom,
    })
}
