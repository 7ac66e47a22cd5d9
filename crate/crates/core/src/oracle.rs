//! Brute-force validation of the solution-set parametrization.
//!
//! All three coupled equations over the horizon are assembled into one
//! stacked homogeneous linear system M z = 0; its null space is the exact
//! set of admissible trajectories, computed independently of the
//! synthesis/trajectory path. The parametrization is checked two ways:
//! containment (every parametrized trajectory lies in the null space) and
//! completeness (the dimensions agree).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{trajectory_xpu, ModeParams, Trajectory};
use crate::matrix::{null_space_basis, numerical_rank, Matrix};
use crate::synthesis::{ProblemInstance, SynthesisResult};

/// Dense row reduction on the stacked matrix is cubic; refuse anything past
/// this many unknowns.
pub const MAX_STACKED_UNKNOWNS: usize = 2000;

pub const DEFAULT_NULL_SPACE_TOL: f64 = 1e-9;

/// The stacked constraint matrix together with its variable layout:
/// the unknown vector is ordered x_0..x_{k_f}, p_0..p_{k_f}, u_0..u_{k_f-1}.
#[derive(Debug, Clone)]
pub struct StackedSystem {
    pub m: Matrix,
    pub n: usize,
    pub m_in: usize,
    pub k_f: usize,
}

impl StackedSystem {
    pub fn unknowns(&self) -> usize {
        2 * self.n * (self.k_f + 1) + self.m_in * self.k_f
    }

    pub fn x_offset(&self, k: usize) -> usize {
        k * self.n
    }

    pub fn p_offset(&self, k: usize) -> usize {
        self.n * (self.k_f + 1) + k * self.n
    }

    pub fn u_offset(&self, k: usize) -> usize {
        2 * self.n * (self.k_f + 1) + k * self.m_in
    }

    /// Flatten a trajectory (with input, x and p through k_f) into the
    /// stacked variable layout.
    pub fn stack_trajectory(&self, traj: &Trajectory) -> Result<Matrix> {
        let u = traj.u.as_ref().ok_or(Error::MissingInput)?;
        if traj.x.len() != self.k_f + 1 || traj.p.len() != self.k_f + 1 || u.len() != self.k_f {
            return Err(Error::DimensionMismatch {
                context: "stack_trajectory",
                expected: format!("x, p of length {}, u of length {}", self.k_f + 1, self.k_f),
                got: format!("x: {}, p: {}, u: {}", traj.x.len(), traj.p.len(), u.len()),
            });
        }
        let mut z = Matrix::zeros(self.unknowns(), 1);
        for k in 0..=self.k_f {
            z.set_block(self.x_offset(k), 0, &traj.x[k]);
            z.set_block(self.p_offset(k), 0, &traj.p[k]);
        }
        for (k, u_k) in u.iter().enumerate() {
            z.set_block(self.u_offset(k), 0, u_k);
        }
        Ok(z)
    }

    /// Split a stacked vector back into its x and p sequences.
    pub fn unstack_xp(&self, z: &Matrix) -> (Vec<Matrix>, Vec<Matrix>) {
        let mut x = Vec::with_capacity(self.k_f + 1);
        let mut p = Vec::with_capacity(self.k_f + 1);
        for k in 0..=self.k_f {
            x.push(z.block(self.x_offset(k), 0, self.n, 1));
            p.push(z.block(self.p_offset(k), 0, self.n, 1));
        }
        (x, p)
    }
}

/// Result of comparing the parametrized family with the brute-force null
/// space.
#[derive(Debug, Clone, Serialize)]
pub struct SubspaceComparison {
    pub oracle_dim: usize,
    pub param_rank: usize,
    /// Max over parametrization columns of the relative norm of the
    /// component outside the oracle null space.
    pub containment_residual: f64,
    pub dims_match: bool,
}

/// Assemble M so that M z = 0 holds exactly when the unstacked sequences
/// satisfy all three coupled equations for 0 <= k <= k_f - 1.
///
/// Row block for time k (in order): the state equation (+I on x_{k+1},
/// -A on x_k, -B on u_k), the costate equation (+I on p_k, -A' on p_{k+1},
/// -Q on x_k, -S on u_k) and the stationarity equation (-B' on p_{k+1},
/// -S' on x_k, -R on u_k).
pub fn build_stacked_system(inst: &ProblemInstance) -> StackedSystem {
    let (n, m, k_f) = (inst.n, inst.m, inst.k_f);
    let rows = (2 * n + m) * k_f;
    let cols = 2 * n * (k_f + 1) + m * k_f;
    let mut mat = Matrix::zeros(rows, cols);

    let sys = StackedSystem {
        m: Matrix::zeros(0, 0),
        n,
        m_in: m,
        k_f,
    };

    let neg_a = -&inst.a;
    let neg_b = -&inst.b;
    let neg_at = -&inst.a.transpose();
    let neg_bt = -&inst.b.transpose();
    let neg_q = -&inst.q;
    let neg_r = -&inst.r;
    let neg_s = -&inst.s;
    let neg_st = -&inst.s.transpose();
    let eye_n = Matrix::identity(n);

    for k in 0..k_f {
        let base = k * (2 * n + m);
        // x_{k+1} - A x_k - B u_k = 0
        mat.set_block(base, sys.x_offset(k + 1), &eye_n);
        mat.set_block(base, sys.x_offset(k), &neg_a);
        mat.set_block(base, sys.u_offset(k), &neg_b);
        // p_k - A' p_{k+1} - Q x_k - S u_k = 0
        let r2 = base + n;
        mat.set_block(r2, sys.p_offset(k), &eye_n);
        mat.set_block(r2, sys.p_offset(k + 1), &neg_at);
        mat.set_block(r2, sys.x_offset(k), &neg_q);
        mat.set_block(r2, sys.u_offset(k), &neg_s);
        // -B' p_{k+1} - S' x_k - R u_k = 0
        let r3 = base + 2 * n;
        mat.set_block(r3, sys.p_offset(k + 1), &neg_bt);
        mat.set_block(r3, sys.x_offset(k), &neg_st);
        mat.set_block(r3, sys.u_offset(k), &neg_r);
    }

    StackedSystem { m: mat, ..sys }
}

/// Matrix whose 2n columns stack the trajectories for the canonical
/// parameters alpha = e_j (beta = 0) and beta = e_j (alpha = 0).
pub fn parametrization_matrix(inst: &ProblemInstance, syn: &SynthesisResult) -> Result<Matrix> {
    let sys = build_stacked_system(inst);
    let n = inst.n;
    let mut cols = Matrix::zeros(sys.unknowns(), 2 * n);
    for j in 0..2 * n {
        let (alpha, beta) = if j < n {
            (Matrix::unit_vec(n, j), Matrix::zeros(n, 1))
        } else {
            (Matrix::zeros(n, 1), Matrix::unit_vec(n, j - n))
        };
        let traj = trajectory_xpu(inst, syn, &ModeParams::new(alpha, beta)?)?;
        let z = sys.stack_trajectory(&traj)?;
        cols.set_block(0, j, &z);
    }
    Ok(cols)
}

/// Null-space oracle versus the parametrized family.
///
/// `tol` is the relative rank threshold fed to the null-space extraction;
/// the parametrization rank uses the same threshold so the dimension
/// comparison is like-for-like. Mismatches are reported, never thrown.
pub fn compare_solution_sets(
    inst: &ProblemInstance,
    syn: &SynthesisResult,
    tol: f64,
) -> Result<SubspaceComparison> {
    let sys = build_stacked_system(inst);
    if sys.unknowns() > MAX_STACKED_UNKNOWNS {
        return Err(Error::TooLarge {
            unknowns: sys.unknowns(),
            limit: MAX_STACKED_UNKNOWNS,
        });
    }
    let null = null_space_basis(&sys.m, tol);
    let params = parametrization_matrix(inst, syn)?;
    let param_rank = numerical_rank(&params, tol);

    let mut containment_residual: f64 = 0.0;
    for j in 0..params.cols() {
        let c = params.column(j);
        let outside = &c - &null.project(&c);
        containment_residual =
            containment_residual.max(outside.frob_norm() / c.frob_norm().max(1.0));
    }

    Ok(SubspaceComparison {
        oracle_dim: null.dim,
        param_rank,
        containment_residual,
        dims_match: null.dim == param_rank,
    })
}
