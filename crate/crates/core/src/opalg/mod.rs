//! Full matrix algebras `M_n` with unital *-monomorphisms as the distinguished
//! arrows and completely positive unital maps as operations.
//!
//! Conventions:
//! * `kron(a, b)[(i*rb + p, j*cb + q)] = a[(i, j)] * b[(p, q)]`, so `M_n ⊗ M_k = M_{nk}`
//!   with the first factor as the slow index.
//! * The Choi matrix of `Φ: M_n -> M_m` is `Σ_ij E_ij ⊗ Φ(E_ij)`; block `(i, j)` of
//!   size `m × m` is `Φ(E_ij)`.
//! * Maps act in the Heisenberg picture: unital means `Φ(I) = I`.

mod factor;
mod feasibility;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

pub use factor::{conjugated_tensor_witness, detect_tensor_factorization, factorization_of, Factorization, SpanBasis};
pub use feasibility::{
    search_joint_extension, FeasibilityParams, FeasibilityResult, FeasibilityStatus, ProjectionScheme,
};

pub type CMat = DMatrix<Complex64>;

pub const VALIDATION_TOL: f64 = 1e-9;
pub const VERIFY_TOL: f64 = 1e-10;
pub const FEASIBILITY_TOL: f64 = 1e-8;
pub const MAX_ITER: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpalgError {
    #[error("algebra dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("Choi matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("map is not completely positive: Choi eigenvalue {min_eigenvalue:e}")]
    NotCompletelyPositive { min_eigenvalue: f64 },
    #[error("map is not unital: |Φ(I) - I| = {defect:e}")]
    NotUnital { defect: f64 },
    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("not a unital *-subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("not a joint extension (residual {residual:e})")]
    NotJointExtension { residual: f64 },
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i, j)] = c(1.0, 0.0);
    m
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Unitary `S` with `S (y ⊗ x) = x ⊗ y` for `x ∈ C^n1`, `y ∈ C^n2`.
pub fn swap_unitary(n1: usize, n2: usize) -> CMat {
    let mut s = CMat::zeros(n1 * n2, n1 * n2);
    for a in 0..n1 {
        for b in 0..n2 {
            s[(a * n2 + b, b * n1 + a)] = c(1.0, 0.0);
        }
    }
    s
}

pub fn unitary_defect(u: &CMat) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    op_norm(&(u.adjoint() * u - identity(u.nrows())))
}

fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

fn min_eigenvalue(h: &CMat) -> f64 {
    SymmetricEigen::new(hermitian_part(h)).eigenvalues.min()
}

/// Haar-like random unitary from the QR factorization of a random matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMat::from_diagonal(&r.diagonal().map(|d| if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) }));
    q * phases
}

/// A completely positive map `M_n_in -> M_n_out` stored by its Choi matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CpMap {
    n_in: usize,
    n_out: usize,
    choi: CMat,
}

impl CpMap {
    /// Validates at [`VALIDATION_TOL`].
    pub fn from_choi(n_in: usize, n_out: usize, choi: CMat) -> Result<Self, OpalgError> {
        let map = Self::from_choi_unchecked(n_in, n_out, choi)?;
        map.validate(VALIDATION_TOL)?;
        Ok(map)
    }

    pub fn from_choi_unchecked(n_in: usize, n_out: usize, choi: CMat) -> Result<Self, OpalgError> {
        if n_in == 0 || n_out == 0 {
            return Err(OpalgError::ZeroDimension);
        }
        if choi.shape() != (n_in * n_out, n_in * n_out) {
            return Err(OpalgError::Dimension(format!(
                "Choi matrix {:?} for a map M_{n_in} -> M_{n_out}",
                choi.shape()
            )));
        }
        Ok(Self { n_in, n_out, choi })
    }

    /// `Φ(X) = Σ K X K*`, with every `K` of shape `n_out × n_in`.
    pub fn from_kraus(kraus: &[CMat]) -> Result<Self, OpalgError> {
        let Some(first) = kraus.first() else {
            return Err(OpalgError::Dimension("empty Kraus family".into()));
        };
        let (n_out, n_in) = first.shape();
        if kraus.iter().any(|k| k.shape() != (n_out, n_in)) {
            return Err(OpalgError::Dimension("Kraus operators of different shapes".into()));
        }
        let map = Self::from_linear_fn(n_in, n_out, |x| {
            kraus.iter().fold(CMat::zeros(n_out, n_out), |acc, k| acc + k * x * k.adjoint())
        })?;
        map.validate(VALIDATION_TOL)?;
        Ok(map)
    }

    /// Choi matrix of an arbitrary linear map, without validation.
    pub fn from_linear_fn(
        n_in: usize,
        n_out: usize,
        f: impl Fn(&CMat) -> CMat,
    ) -> Result<Self, OpalgError> {
        let mut choi = CMat::zeros(n_in * n_out, n_in * n_out);
        for i in 0..n_in {
            for j in 0..n_in {
                let y = f(&matrix_unit(n_in, i, j));
                if y.shape() != (n_out, n_out) {
                    return Err(OpalgError::Dimension(format!("map output {:?}", y.shape())));
                }
                choi.view_mut((i * n_out, j * n_out), (n_out, n_out)).copy_from(&y);
            }
        }
        Self::from_choi_unchecked(n_in, n_out, choi)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_linear_fn(n, n, |x| x.clone()).expect("square")
    }

    /// Not completely positive for `n >= 2`; useful as a negative example.
    pub fn transpose(n: usize) -> Self {
        Self::from_linear_fn(n, n, |x| x.transpose()).expect("square")
    }

    /// `X ↦ tr(X) I / n`.
    pub fn completely_depolarizing(n: usize) -> Self {
        Self::from_linear_fn(n, n, |x| identity(n) * (x.trace() / c(n as f64, 0.0))).expect("square")
    }

    /// `X ↦ (1 - p) X + p tr(X) I / n`.
    pub fn depolarizing(n: usize, p: f64) -> Self {
        Self::from_linear_fn(n, n, |x| {
            x * c(1.0 - p, 0.0) + identity(n) * (x.trace() * c(p / n as f64, 0.0))
        })
        .expect("square")
    }

    /// `X ↦ U X U*`.
    pub fn conjugation(u: &CMat) -> Self {
        let n = u.nrows();
        Self::from_linear_fn(n, n, |x| u * x * u.adjoint()).expect("square")
    }

    /// Random unital CP map from `kraus_count` random operators normalized by `T^{-1/2}`,
    /// `T = Σ K K*`.
    pub fn random_unital<R: Rng>(n: usize, kraus_count: usize, rng: &mut R) -> Self {
        let raw: Vec<CMat> = (0..kraus_count.max(1))
            .map(|_| CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
            .collect();
        let t = raw.iter().fold(CMat::zeros(n, n), |acc, k| acc + k * k.adjoint());
        let eig = SymmetricEigen::new(hermitian_part(&t));
        let inv_sqrt = eig.eigenvalues.map(|l| c(1.0 / l.max(1e-300).sqrt(), 0.0));
        let t_inv_sqrt = &eig.eigenvectors * CMat::from_diagonal(&inv_sqrt) * eig.eigenvectors.adjoint();
        let kraus: Vec<CMat> = raw.iter().map(|k| &t_inv_sqrt * k).collect();
        Self::from_kraus(&kraus).expect("normalized Kraus family")
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn choi(&self) -> &CMat {
        &self.choi
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        assert_eq!(x.shape(), (self.n_in, self.n_in), "input dimension");
        let m = self.n_out;
        let mut y = CMat::zeros(m, m);
        for i in 0..self.n_in {
            for j in 0..self.n_in {
                let xij = x[(i, j)];
                if xij != c(0.0, 0.0) {
                    y += self.choi.view((i * m, j * m), (m, m)) * xij;
                }
            }
        }
        y
    }

    pub fn hermiticity_defect(&self) -> f64 {
        op_norm(&(&self.choi - self.choi.adjoint()))
    }

    pub fn min_choi_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.choi)
    }

    pub fn unitality_defect(&self) -> f64 {
        op_norm(&(self.apply(&identity(self.n_in)) - identity(self.n_out)))
    }

    pub fn validate(&self, tol: f64) -> Result<(), OpalgError> {
        let defect = self.hermiticity_defect();
        if defect > tol {
            return Err(OpalgError::NotHermitian { defect });
        }
        let min_eigenvalue = self.min_choi_eigenvalue();
        if min_eigenvalue < -tol {
            return Err(OpalgError::NotCompletelyPositive { min_eigenvalue });
        }
        let defect = self.unitality_defect();
        if defect > tol {
            return Err(OpalgError::NotUnital { defect });
        }
        Ok(())
    }

    /// `self` then `other`.
    pub fn then(&self, other: &CpMap) -> Result<CpMap, OpalgError> {
        if self.n_out != other.n_in {
            return Err(OpalgError::Dimension(format!(
                "M_{} -> M_{} then M_{} -> M_{}",
                self.n_in, self.n_out, other.n_in, other.n_out
            )));
        }
        Self::from_linear_fn(self.n_in, other.n_out, |x| other.apply(&self.apply(x)))
    }
}

impl Serialize for CpMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CpMap", 3)?;
        st.serialize_field("n_in", &self.n_in)?;
        st.serialize_field("n_out", &self.n_out)?;
        st.serialize_field("choi", &encode_matrix(&self.choi))?;
        st.end()
    }
}

/// Row-major, interleaved `re, im`, each in Rust's shortest round-trip decimal form.
pub fn encode_matrix(m: &CMat) -> Vec<String> {
    let mut out = Vec::with_capacity(2 * m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(format!("{:?}", m[(i, j)].re));
            out.push(format!("{:?}", m[(i, j)].im));
        }
    }
    out
}

/// Inverse of [`encode_matrix`] for a square matrix.
pub fn decode_matrix(n: usize, data: &[String]) -> Result<CMat, String> {
    if data.len() != 2 * n * n {
        return Err(format!("expected {} numbers for a {n}x{n} matrix, got {}", 2 * n * n, data.len()));
    }
    let parse = |k: usize| {
        data[k]
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("entry {k} ({:?}): {e}", data[k]))
    };
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let k = 2 * (i * n + j);
            m[(i, j)] = c(parse(k)?, parse(k + 1)?);
        }
    }
    Ok(m)
}

/// `α_A ⊗ α_B` on `M_{n_A} ⊗ M_{n_B}`.
pub fn tensor_operation(alpha_a: &CpMap, alpha_b: &CpMap) -> CpMap {
    let (na, nb) = (alpha_a.n_in, alpha_b.n_in);
    let (ma, mb) = (alpha_a.n_out, alpha_b.n_out);
    let mut choi = CMat::zeros(na * nb * ma * mb, na * nb * ma * mb);
    let block = ma * mb;
    for i in 0..na {
        for j in 0..na {
            let ya = alpha_a.apply(&matrix_unit(na, i, j));
            for a in 0..nb {
                for b in 0..nb {
                    let yb = alpha_b.apply(&matrix_unit(nb, a, b));
                    let (r, s) = (i * nb + a, j * nb + b);
                    choi.view_mut((r * block, s * block), (block, block))
                        .copy_from(&kron(&ya, &yb));
                }
            }
        }
    }
    CpMap::from_choi_unchecked(na * nb, ma * mb, choi).expect("dimensions match")
}

/// Unital injective *-homomorphism `M_n -> M_{nk}`, `a ↦ U (a ⊗ I_k) U*`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarMono {
    n: usize,
    k: usize,
    u: CMat,
}

impl StarMono {
    pub fn new(n: usize, k: usize, u: CMat) -> Result<Self, OpalgError> {
        if n == 0 || k == 0 {
            return Err(OpalgError::ZeroDimension);
        }
        if u.shape() != (n * k, n * k) {
            return Err(OpalgError::Dimension(format!("unitary {:?} for M_{n} ⊗ I_{k}", u.shape())));
        }
        let defect = unitary_defect(&u);
        if defect > VALIDATION_TOL {
            return Err(OpalgError::NotUnitary { defect });
        }
        Ok(Self { n, k, u })
    }

    pub fn canonical(n: usize, k: usize) -> Result<Self, OpalgError> {
        Self::new(n, k, identity(n * k))
    }

    pub fn identity(n: usize) -> Result<Self, OpalgError> {
        Self::canonical(n, 1)
    }

    pub fn source_dim(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self) -> usize {
        self.k
    }

    pub fn target_dim(&self) -> usize {
        self.n * self.k
    }

    pub fn unitary(&self) -> &CMat {
        &self.u
    }

    pub fn apply(&self, a: &CMat) -> CMat {
        &self.u * kron(a, &identity(self.k)) * self.u.adjoint()
    }

    /// Images of the matrix units `E_ij`, row-major in `(i, j)`.
    pub fn image_basis(&self) -> Vec<CMat> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.apply(&matrix_unit(self.n, i, j)))
            .collect()
    }

    /// `self` then `other`: `a ↦ V((U (a ⊗ I_k) U*) ⊗ I_l) V*`.
    pub fn then(&self, other: &StarMono) -> Result<StarMono, OpalgError> {
        if self.target_dim() != other.n {
            return Err(OpalgError::Dimension(format!(
                "M_{} -> M_{} then M_{} -> M_{}",
                self.n,
                self.target_dim(),
                other.n,
                other.target_dim()
            )));
        }
        let u = &other.u * kron(&self.u, &identity(other.k));
        StarMono::new(self.n, self.k * other.k, u)
    }

    /// Largest deviation from the *-homomorphism laws on matrix units.
    pub fn homomorphism_defect(&self) -> f64 {
        let basis = self.image_basis();
        let n = self.n;
        let mut worst = op_norm(&(self.apply(&identity(n)) - identity(self.target_dim())));
        for i in 0..n {
            for j in 0..n {
                let eij = &basis[i * n + j];
                worst = worst.max(op_norm(&(eij.adjoint() - &basis[j * n + i])));
                for l in 0..n {
                    let prod = eij * &basis[j * n + l];
                    worst = worst.max(op_norm(&(prod - &basis[i * n + l])));
                }
            }
        }
        worst
    }
}

impl Serialize for StarMono {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("StarMono", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("unitary", &encode_matrix(&self.u))?;
        st.end()
    }
}

/// `a ↦ a ⊗ I` and `b ↦ I ⊗ b` into `M_{n_a n_b}`.
pub fn canonical_injections(n_a: usize, n_b: usize) -> Result<(StarMono, StarMono), OpalgError> {
    Ok((
        StarMono::canonical(n_a, n_b)?,
        StarMono::new(n_b, n_a, swap_unitary(n_a, n_b))?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionCheck {
    pub holds: bool,
    pub residual_a: f64,
    pub residual_b: f64,
}

impl ExtensionCheck {
    pub fn residual(&self) -> f64 {
        self.residual_a.max(self.residual_b)
    }
}

fn check_dims(
    gamma: &CpMap,
    f_a: &StarMono,
    f_b: &StarMono,
    alpha_a: &CpMap,
    alpha_b: &CpMap,
) -> Result<(), OpalgError> {
    let n = gamma.n_in;
    let ok = gamma.n_out == n
        && f_a.target_dim() == n
        && f_b.target_dim() == n
        && alpha_a.n_in == f_a.n
        && alpha_a.n_out == f_a.n
        && alpha_b.n_in == f_b.n
        && alpha_b.n_out == f_b.n;
    if ok {
        Ok(())
    } else {
        Err(OpalgError::Dimension(format!(
            "γ: M_{} -> M_{}, f_A: M_{} -> M_{}, f_B: M_{} -> M_{}, α_A on M_{}, α_B on M_{}",
            gamma.n_in,
            gamma.n_out,
            f_a.n,
            f_a.target_dim(),
            f_b.n,
            f_b.target_dim(),
            alpha_a.n_in,
            alpha_b.n_in
        )))
    }
}

fn side_residual(gamma: &CpMap, f: &StarMono, alpha: &CpMap) -> f64 {
    let n = f.n;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let e = matrix_unit(n, i, j);
            let lhs = gamma.apply(&f.apply(&e));
            let rhs = f.apply(&alpha.apply(&e));
            worst = worst.max(op_norm(&(lhs - rhs)));
        }
    }
    worst
}

/// Checks `γ ∘ f_A = f_A ∘ α_A` and `γ ∘ f_B = f_B ∘ α_B` on matrix units, in operator norm.
pub fn verify_extension(
    gamma: &CpMap,
    f_a: &StarMono,
    f_b: &StarMono,
    alpha_a: &CpMap,
    alpha_b: &CpMap,
    tol: f64,
) -> Result<ExtensionCheck, OpalgError> {
    check_dims(gamma, f_a, f_b, alpha_a, alpha_b)?;
    let residual_a = side_residual(gamma, f_a, alpha_a);
    let residual_b = side_residual(gamma, f_b, alpha_b);
    Ok(ExtensionCheck {
        holds: residual_a <= tol && residual_b <= tol,
        residual_a,
        residual_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductCheck {
    pub holds: bool,
    pub residual: f64,
}

/// For a verified joint extension `γ`, checks
/// `γ(f_A(a) f_B(b)) = γ(f_A(a)) γ(f_B(b))` on pairs of matrix units.
pub fn is_product_extension(
    gamma: &CpMap,
    f_a: &StarMono,
    f_b: &StarMono,
    alpha_a: &CpMap,
    alpha_b: &CpMap,
    tol: f64,
) -> Result<ProductCheck, OpalgError> {
    let ext = verify_extension(gamma, f_a, f_b, alpha_a, alpha_b, tol)?;
    if !ext.holds {
        return Err(OpalgError::NotJointExtension { residual: ext.residual() });
    }
    let imgs_a = f_a.image_basis();
    let imgs_b = f_b.image_basis();
    let gb: Vec<CMat> = imgs_b.iter().map(|y| gamma.apply(y)).collect();
    let mut residual: f64 = 0.0;
    for x in &imgs_a {
        let gx = gamma.apply(x);
        for (y, gy) in imgs_b.iter().zip(&gb) {
            residual = residual.max(op_norm(&(gamma.apply(&(x * y)) - &gx * gy)));
        }
    }
    Ok(ProductCheck { holds: residual <= tol, residual })
}

/// `tr_2` on `M_{n1} ⊗ M_{n2}`.
pub fn ptrace_second(x: &CMat, n1: usize, n2: usize) -> CMat {
    CMat::from_fn(n1, n1, |i, j| (0..n2).map(|p| x[(i * n2 + p, j * n2 + p)]).sum())
}

/// `tr_1` on `M_{n1} ⊗ M_{n2}`.
pub fn ptrace_first(x: &CMat, n1: usize, n2: usize) -> CMat {
    CMat::from_fn(n2, n2, |p, q| (0..n1).map(|i| x[(i * n2 + p, i * n2 + q)]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pauli_x() -> CMat {
        CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    #[test]
    fn choi_examples() {
        let id = CpMap::identity(2);
        id.validate(VALIDATION_TOL).unwrap();
        let eig = SymmetricEigen::new(id.choi().clone()).eigenvalues;
        let mut ev: Vec<f64> = eig.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        // |Ω><Ω| with Ω = |00> + |11>
        assert!((ev[3] - 2.0).abs() < 1e-12 && ev[..3].iter().all(|l| l.abs() < 1e-12));

        match CpMap::transpose(2).validate(VALIDATION_TOL) {
            Err(OpalgError::NotCompletelyPositive { min_eigenvalue }) => {
                assert!((min_eigenvalue + 1.0).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }

        let dep = CpMap::completely_depolarizing(2);
        dep.validate(VALIDATION_TOL).unwrap();
        assert!((dep.choi() - identity(4) * c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kraus_and_choi_agree() {
        let x = pauli_x();
        let from_kraus = CpMap::from_kraus(std::slice::from_ref(&x)).unwrap();
        assert_eq!(from_kraus, CpMap::conjugation(&x));
        let non_unital = CpMap::from_kraus(&[CMat::from_diagonal_element(2, 2, c(2.0, 0.0))]);
        assert!(matches!(non_unital, Err(OpalgError::NotUnital { .. })));
    }

    #[test]
    fn tensor_operation_examples() {
        assert_eq!(tensor_operation(&CpMap::identity(2), &CpMap::identity(2)), CpMap::identity(4));

        let sx = CpMap::conjugation(&pauli_x());
        let t = tensor_operation(&sx, &CpMap::identity(2));
        let expect = CpMap::conjugation(&kron(&pauli_x(), &identity(2)));
        for i in 0..4 {
            for j in 0..4 {
                let e = matrix_unit(4, i, j);
                assert_eq!(t.apply(&e), expect.apply(&e));
            }
        }

        let (d1, d2) = (CpMap::depolarizing(2, 0.3), CpMap::depolarizing(2, 0.6));
        let t = tensor_operation(&d1, &d2);
        let (fa, _) = canonical_injections(2, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = matrix_unit(2, i, j);
                let lhs = t.apply(&fa.apply(&e));
                assert!(op_norm(&(lhs - fa.apply(&d1.apply(&e)))) < 1e-14);
            }
        }
    }

    #[test]
    fn canonical_injections_act_on_factors() {
        let (fa, fb) = canonical_injections(2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = random_unitary(3, &mut rng);
        assert_eq!(fb.apply(&b), kron(&identity(2), &b));
        assert!(fa.homomorphism_defect() < 1e-14 && fb.homomorphism_defect() < 1e-14);
    }

    #[test]
    fn star_mono_rejects_non_unitary() {
        let m = CMat::from_diagonal_element(2, 2, c(2.0, 0.0));
        assert!(matches!(StarMono::new(1, 2, m), Err(OpalgError::NotUnitary { .. })));
    }

    #[test]
    fn star_mono_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = StarMono::new(2, 2, random_unitary(4, &mut rng)).unwrap();
        let g = StarMono::new(4, 2, random_unitary(8, &mut rng)).unwrap();
        let fg = f.then(&g).unwrap();
        for e in (0..2).flat_map(|i| (0..2).map(move |j| matrix_unit(2, i, j))) {
            assert!(op_norm(&(fg.apply(&e) - g.apply(&f.apply(&e)))) < 1e-12);
        }
    }

    #[test]
    fn verify_extension_examples() {
        let (fa, fb) = canonical_injections(2, 2).unwrap();
        let sx = CpMap::conjugation(&pauli_x());
        let id = CpMap::identity(2);
        let ok = verify_extension(&tensor_operation(&sx, &id), &fa, &fb, &sx, &id, VERIFY_TOL).unwrap();
        assert!(ok.holds && ok.residual() <= 1e-12);

        let bad = verify_extension(&CpMap::identity(4), &fa, &fb, &sx, &id, VERIFY_TOL).unwrap();
        assert!(!bad.holds && bad.residual_a > 0.5 && bad.residual_b == 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (ua, ub) = (random_unitary(2, &mut rng), random_unitary(2, &mut rng));
        let gamma = CpMap::conjugation(&kron(&ua, &ub));
        let check = verify_extension(
            &gamma,
            &fa,
            &fb,
            &CpMap::conjugation(&ua),
            &CpMap::conjugation(&ub),
            1e-12,
        )
        .unwrap();
        assert!(check.holds, "{check:?}");
    }

    #[test]
    fn product_extension_examples() {
        let (fa, fb) = canonical_injections(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b) = (CpMap::random_unital(2, 2, &mut rng), CpMap::random_unital(2, 3, &mut rng));
        let t = tensor_operation(&a, &b);
        assert!(is_product_extension(&t, &fa, &fb, &a, &b, 1e-10).unwrap().holds);

        let id = CpMap::identity(2);
        assert!(is_product_extension(&CpMap::identity(4), &fa, &fb, &id, &id, 1e-12).unwrap().holds);

        // A Bell-state extension of (D, D), D completely depolarizing, is not a product one
        let d = CpMap::completely_depolarizing(2);
        let g1 = tensor_operation(&d, &d);
        let bell = {
            let mut v = CMat::zeros(4, 1);
            v[(0, 0)] = c(0.5f64.sqrt(), 0.0);
            v[(3, 0)] = c(0.5f64.sqrt(), 0.0);
            &v * v.adjoint()
        };
        let g2 = CpMap::from_linear_fn(4, 4, |x| identity(4) * (&bell * x).trace()).unwrap();
        g2.validate(VALIDATION_TOL).unwrap();
        assert!(verify_extension(&g2, &fa, &fb, &d, &d, 1e-12).unwrap().holds);
        let p2 = is_product_extension(&g2, &fa, &fb, &d, &d, 1e-12).unwrap();
        assert!(!p2.holds && (p2.residual - 0.5).abs() < 1e-12);
        let mix = CpMap::from_linear_fn(4, 4, |x| (g1.apply(x) + g2.apply(x)) * c(0.5, 0.0)).unwrap();
        let pm = is_product_extension(&mix, &fa, &fb, &d, &d, 1e-12).unwrap();
        assert!(!pm.holds && (pm.residual - 0.25).abs() < 1e-12);

        // mixtures of two product extensions stay product: the condition is linear in γ
        let fa8 = StarMono::canonical(2, 4).unwrap();
        let fb8 = fb.then(&StarMono::canonical(4, 2).unwrap()).unwrap();
        let x = CpMap::conjugation(&pauli_x());
        let e1 = tensor_operation(&tensor_operation(&d, &d), &id);
        let e2 = tensor_operation(&tensor_operation(&d, &d), &x);
        let mix = CpMap::from_linear_fn(8, 8, |m| (e1.apply(m) + e2.apply(m)) * c(0.5, 0.0)).unwrap();
        assert!(is_product_extension(&mix, &fa8, &fb8, &d, &d, 1e-12).unwrap().holds);

        let err = is_product_extension(&CpMap::identity(4), &fa, &fb, &x, &id, 1e-12);
        assert!(matches!(err, Err(OpalgError::NotJointExtension { .. })));
    }

    #[test]
    fn matrix_codec_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random_unitary(3, &mut rng);
        assert_eq!(decode_matrix(3, &encode_matrix(&u)).unwrap(), u);
        assert!(decode_matrix(2, &["1".into()]).is_err());
    }
}
