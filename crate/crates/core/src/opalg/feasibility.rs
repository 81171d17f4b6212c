//! Joint-extension feasibility by projection splitting on the Choi matrix.
//!
//! The variable is the superoperator `S` with `vec(γ(X)) = S vec(X)` (column-major
//! `vec`); its entries are a permutation of the Choi entries, so both views share
//! the Frobenius norm. The affine set fixes `S` on the span of the constrained
//! inputs; the cone is the PSD cone of the Choi matrix.
//!
//! Plain alternation between the two sets stalls when every extension lies on
//! the boundary of the cone (low-rank operations); averaged reflections
//! (Douglas-Rachford) on the same two projections do not, and are the default.

use nalgebra::SymmetricEigen;
use serde::Serialize;

use super::{
    c, identity, matrix_unit, verify_extension, CMat, CpMap, OpalgError, StarMono,
    FEASIBILITY_TOL, MAX_ITER,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityParams {
    pub tol: f64,
    pub max_iter: usize,
    pub scheme: ProjectionScheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionScheme {
    /// `x <- P_cone(P_affine(x))`.
    Alternating,
    /// `z <- z + P_affine(2 P_cone(z) - z) - P_cone(z)`, reading off `P_cone(z)`.
    #[default]
    Reflections,
}

impl Default for FeasibilityParams {
    fn default() -> Self {
        Self {
            tol: FEASIBILITY_TOL,
            max_iter: MAX_ITER,
            scheme: ProjectionScheme::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityStatus {
    Found,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityResult {
    pub status: FeasibilityStatus,
    pub extension: Option<CpMap>,
    /// Distance of the prescribed outputs from any linear map on the constrained span.
    pub consistency_residual: f64,
    pub affine_residual: f64,
    /// Magnitude of the most negative Choi eigenvalue of the last affine iterate.
    pub eigen_residual: f64,
    pub iterations: usize,
}

impl FeasibilityResult {
    pub fn found(&self) -> bool {
        self.status == FeasibilityStatus::Found
    }
}

fn choi_to_superop(j: &CMat, n: usize) -> CMat {
    CMat::from_fn(n * n, n * n, |r, s| {
        let (p, q) = (r % n, r / n);
        let (i, jj) = (s % n, s / n);
        j[(i * n + p, jj * n + q)]
    })
}

fn superop_to_choi(s: &CMat, n: usize) -> CMat {
    CMat::from_fn(n * n, n * n, |r, t| {
        let (i, p) = (r / n, r % n);
        let (jj, q) = (t / n, t % n);
        s[(p + q * n, i + jj * n)]
    })
}

fn vec_col(m: &CMat) -> Vec<num_complex::Complex64> {
    m.iter().copied().collect()
}

fn psd_clip(j: &CMat) -> (CMat, f64) {
    let h = (j + j.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let negative = -eig.eigenvalues.min().min(0.0);
    let clipped = eig.eigenvalues.map(|l| c(l.max(0.0), 0.0));
    let v = &eig.eigenvectors;
    (v * CMat::from_diagonal(&clipped) * v.adjoint(), negative)
}

/// Searches for a unital CP `γ` on `M_n` with `γ ∘ f_A = f_A ∘ α_A` and
/// `γ ∘ f_B = f_B ∘ α_B`. `Found` results pass [`verify_extension`] at
/// `params.tol`; `Unknown` never asserts that no extension exists.
pub fn search_joint_extension(
    f_a: &StarMono,
    f_b: &StarMono,
    alpha_a: &CpMap,
    alpha_b: &CpMap,
    params: &FeasibilityParams,
) -> Result<FeasibilityResult, OpalgError> {
    let n = f_a.target_dim();
    if f_b.target_dim() != n
        || alpha_a.n_in() != f_a.source_dim()
        || alpha_a.n_out() != f_a.source_dim()
        || alpha_b.n_in() != f_b.source_dim()
        || alpha_b.n_out() != f_b.source_dim()
    {
        return Err(OpalgError::Dimension(format!(
            "f_A: M_{} -> M_{}, f_B: M_{} -> M_{}, α_A on M_{}, α_B on M_{}",
            f_a.source_dim(),
            n,
            f_b.source_dim(),
            f_b.target_dim(),
            alpha_a.n_in(),
            alpha_b.n_in()
        )));
    }
    let mut pairs: Vec<(CMat, CMat)> = vec![(identity(n), identity(n))];
    for (f, alpha) in [(f_a, alpha_a), (f_b, alpha_b)] {
        let m = f.source_dim();
        for i in 0..m {
            for j in 0..m {
                let e = matrix_unit(m, i, j);
                pairs.push((f.apply(&e), f.apply(&alpha.apply(&e))));
            }
        }
    }
    let nn = n * n;
    let x = CMat::from_fn(nn, pairs.len(), |r, k| vec_col(&pairs[k].0)[r]);
    let y = CMat::from_fn(nn, pairs.len(), |r, k| vec_col(&pairs[k].1)[r]);

    // S X = Y restricted to range(X): S Q = Y V Σ⁻¹ with X = Q Σ V*.
    let svd = x.clone().svd(true, true);
    let (u, v_t) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > 1e-10 * smax.max(1.0))
        .collect();
    let q = CMat::from_fn(nn, keep.len(), |r, k| u[(r, keep[k])]);
    let v = CMat::from_fn(pairs.len(), keep.len(), |r, k| v_t[(keep[k], r)].conj());
    let sigma_inv = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        keep.len(),
        keep.iter().map(|&k| c(1.0 / svd.singular_values[k], 0.0)),
    ));
    let y_q = &y * &v * sigma_inv;
    let consistency_residual = (&y_q * (q.adjoint() * &x) - &y).norm();

    let unknown = |affine_residual, eigen_residual, iterations| FeasibilityResult {
        status: FeasibilityStatus::Unknown,
        extension: None,
        consistency_residual,
        affine_residual,
        eigen_residual,
        iterations,
    };
    if consistency_residual > params.tol {
        return Ok(unknown(consistency_residual, 0.0, 0));
    }

    let qh = q.adjoint();
    let project_affine = |s: &CMat| s - (s * &q - &y_q) * &qh;
    let project_cone = |s: &CMat| {
        let (j, neg) = psd_clip(&superop_to_choi(s, n));
        (choi_to_superop(&j, n), j, neg)
    };
    let mut z = choi_to_superop(CpMap::completely_depolarizing(n).choi(), n);
    let mut affine_residual = f64::INFINITY;
    let mut eigen_residual = f64::INFINITY;
    for iter in 1..=params.max_iter {
        let (s, j_psd) = match params.scheme {
            ProjectionScheme::Alternating => {
                let (s, j, neg) = project_cone(&project_affine(&z));
                eigen_residual = neg;
                z = s.clone();
                (s, j)
            }
            ProjectionScheme::Reflections => {
                let (pc, _, _) = project_cone(&z);
                let reflected = &pc * c(2.0, 0.0) - &z;
                let pa = project_affine(&reflected);
                z += pa - &pc;
                let (s, j, neg) = project_cone(&z);
                eigen_residual = neg;
                (s, j)
            }
        };
        affine_residual = (&s * &q - &y_q).norm();
        if affine_residual <= params.tol {
            let gamma = CpMap::from_choi_unchecked(n, n, j_psd)?;
            let check = verify_extension(&gamma, f_a, f_b, alpha_a, alpha_b, params.tol)?;
            if check.holds && gamma.unitality_defect() <= params.tol {
                return Ok(FeasibilityResult {
                    status: FeasibilityStatus::Found,
                    extension: Some(gamma),
                    consistency_residual,
                    affine_residual,
                    eigen_residual,
                    iterations: iter,
                });
            }
        }
    }
    Ok(unknown(affine_residual, eigen_residual, params.max_iter))
}
