//! Recognizing a commuting pair of subalgebras of `M_n` as the tensor factors
//! `M_a ⊗ I` and `I ⊗ M_b` up to a unitary.

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    c, commutator, encode_matrix, identity, kron, matrix_unit, op_norm, ptrace_first,
    ptrace_second, tensor_operation, unitary_defect, CMat, CpMap, OpalgError, StarMono,
};

const ATTEMPTS: u64 = 8;

/// Hilbert-Schmidt orthonormal basis of the span of a family of matrices.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    n: usize,
    basis: Vec<CMat>,
}

impl SpanBasis {
    pub fn new(n: usize, elems: &[CMat], tol: f64) -> Result<Self, OpalgError> {
        let mut span = SpanBasis { n, basis: Vec::new() };
        for e in elems {
            if e.shape() != (n, n) {
                return Err(OpalgError::Dimension(format!("{:?} in M_{n}", e.shape())));
            }
            span.push(e, tol);
        }
        Ok(span)
    }

    fn push(&mut self, e: &CMat, tol: f64) -> bool {
        let r = self.remainder(e);
        let norm = r.norm();
        if norm > tol {
            self.basis.push(r / c(norm, 0.0));
            true
        } else {
            false
        }
    }

    fn remainder(&self, e: &CMat) -> CMat {
        let mut r = e.clone();
        // two passes of Gram-Schmidt for stability
        for _ in 0..2 {
            for b in &self.basis {
                let coeff = b.dotc(&r);
                r -= b * coeff;
            }
        }
        r
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    /// Frobenius distance from `e` to the span.
    pub fn distance(&self, e: &CMat) -> f64 {
        self.remainder(e).norm()
    }

    /// Checks unit, adjoints and products; returns the worst defect on failure.
    pub fn check_star_subalgebra(&self, tol: f64) -> Result<(), OpalgError> {
        let unit = self.distance(&identity(self.n));
        if unit > tol {
            return Err(OpalgError::NotSubalgebra(format!("identity at distance {unit:e}")));
        }
        for (i, x) in self.basis.iter().enumerate() {
            let d = self.distance(&x.adjoint());
            if d > tol {
                return Err(OpalgError::NotSubalgebra(format!("adjoint of basis element {i} at distance {d:e}")));
            }
            for (j, y) in self.basis.iter().enumerate() {
                let d = self.distance(&(x * y));
                if d > tol {
                    return Err(OpalgError::NotSubalgebra(format!(
                        "product of basis elements {i}, {j} at distance {d:e}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A unitary `U` with `U* A U = M_a ⊗ I_b` and `U* B U = I_a ⊗ M_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub unitary: CMat,
    pub n_a: usize,
    pub n_b: usize,
}

impl Serialize for Factorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Factorization", 3)?;
        st.serialize_field("n_a", &self.n_a)?;
        st.serialize_field("n_b", &self.n_b)?;
        st.serialize_field("unitary", &encode_matrix(&self.unitary))?;
        st.end()
    }
}

impl Factorization {
    /// Largest deviation of `U* x U` from the first (`x` in `img_a`) or second
    /// tensor factor, together with the unitarity defect.
    pub fn residual(&self, img_a: &[CMat], img_b: &[CMat]) -> f64 {
        let (na, nb) = (self.n_a, self.n_b);
        let u = &self.unitary;
        let mut worst = unitary_defect(u);
        for a in img_a {
            let t = u.adjoint() * a * u;
            let f = kron(&(ptrace_second(&t, na, nb) / c(nb as f64, 0.0)), &identity(nb));
            worst = worst.max(op_norm(&(t - f)));
        }
        for b in img_b {
            let t = u.adjoint() * b * u;
            let f = kron(&identity(na), &(ptrace_first(&t, na, nb) / c(na as f64, 0.0)));
            worst = worst.max(op_norm(&(t - f)));
        }
        worst
    }

    /// The automorphism `φ` of `M_a` with `f(x) = U (φ(x) ⊗ I) U*`, on matrix units.
    fn transport_a(&self, f: &StarMono) -> Vec<CMat> {
        let (na, nb) = (self.n_a, self.n_b);
        (0..na * na)
            .map(|k| {
                let t = self.unitary.adjoint() * f.apply(&matrix_unit(na, k / na, k % na)) * &self.unitary;
                ptrace_second(&t, na, nb) / c(nb as f64, 0.0)
            })
            .collect()
    }

    fn transport_b(&self, f: &StarMono) -> Vec<CMat> {
        let (na, nb) = (self.n_a, self.n_b);
        (0..nb * nb)
            .map(|k| {
                let t = self.unitary.adjoint() * f.apply(&matrix_unit(nb, k / nb, k % nb)) * &self.unitary;
                ptrace_first(&t, na, nb) / c(na as f64, 0.0)
            })
            .collect()
    }
}

fn isqrt(d: usize) -> Option<usize> {
    let r = (d as f64).sqrt().round() as usize;
    (r * r == d).then_some(r)
}

fn in_first_factor(x: &CMat, na: usize, nb: usize, tol: f64) -> bool {
    let f = kron(&(ptrace_second(x, na, nb) / c(nb as f64, 0.0)), &identity(nb));
    (x - f).norm() <= tol
}

fn in_second_factor(x: &CMat, na: usize, nb: usize, tol: f64) -> bool {
    let f = kron(&identity(na), &(ptrace_first(x, na, nb) / c(na as f64, 0.0)));
    (x - f).norm() <= tol
}

/// Decides whether `span(img_a)` and `span(img_b)` (unital *-subalgebras of `M_n`)
/// commute, multiply to dimension `dim A · dim B = n²`, and so sit as tensor
/// factors. Returns the conjugating unitary when they do.
pub fn detect_tensor_factorization(
    img_a: &[CMat],
    img_b: &[CMat],
    n: usize,
    tol: f64,
) -> Result<Option<Factorization>, OpalgError> {
    let a = SpanBasis::new(n, img_a, tol)?;
    let b = SpanBasis::new(n, img_b, tol)?;
    a.check_star_subalgebra(tol.max(1e-9) * n as f64)?;
    b.check_star_subalgebra(tol.max(1e-9) * n as f64)?;
    for x in a.basis() {
        for y in b.basis() {
            if commutator(x, y).norm() > tol {
                return Ok(None);
            }
        }
    }
    let (da, db) = (a.dim(), b.dim());
    if da * db != n * n {
        return Ok(None);
    }
    let products: Vec<CMat> = a
        .basis()
        .iter()
        .flat_map(|x| b.basis().iter().map(move |y| x * y))
        .collect();
    if SpanBasis::new(n, &products, tol)?.dim() != da * db {
        return Ok(None);
    }
    let (Some(na), Some(nb)) = (isqrt(da), isqrt(db)) else {
        return Ok(None);
    };
    if na * nb != n {
        return Ok(None);
    }
    let check_tol = tol.max(1e-9) * n as f64;
    if a.basis().iter().all(|x| in_first_factor(x, na, nb, check_tol))
        && b.basis().iter().all(|y| in_second_factor(y, na, nb, check_tol))
    {
        return Ok(Some(Factorization { unitary: identity(n), n_a: na, n_b: nb }));
    }
    for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ attempt);
        if let Some(u) = matrix_unit_frame(a.basis(), n, na, nb, &mut rng) {
            let fact = Factorization { unitary: u, n_a: na, n_b: nb };
            if fact.residual(a.basis(), b.basis()) <= check_tol {
                return Ok(Some(fact));
            }
        }
    }
    Ok(None)
}

/// Builds matrix units `e_i1` of the factor `A ≅ M_na` from the spectral projections
/// of a random Hermitian element, and the unitary with columns `e_i1 v_β`,
/// `v_β` an orthonormal basis of the range of `e_11`.
fn matrix_unit_frame<R: Rng>(basis: &[CMat], n: usize, na: usize, nb: usize, rng: &mut R) -> Option<CMat> {
    let mut h = CMat::zeros(n, n);
    let mut x = CMat::zeros(n, n);
    for e in basis {
        let w = rng.random_range(-1.0..1.0);
        h += (e + e.adjoint()) * c(w / 2.0, 0.0);
        x += e * c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let spread = eig.eigenvalues.max() - eig.eigenvalues.min();
    let gap = 1e-6 * spread.max(1.0);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(cl) if eig.eigenvalues[i] - eig.eigenvalues[*cl.last().unwrap()] <= gap => cl.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    if clusters.len() != na || clusters.iter().any(|cl| cl.len() != nb) {
        return None;
    }
    let frame = |cl: &[usize]| CMat::from_fn(n, cl.len(), |r, k| eig.eigenvectors[(r, cl[k])]);
    let v1 = frame(&clusters[0]);
    let p1 = &v1 * v1.adjoint();
    let mut u = CMat::zeros(n, n);
    for (i, cl) in clusters.iter().enumerate() {
        let e_i1 = if i == 0 {
            p1.clone()
        } else {
            let vi = frame(cl);
            let t = &p1 * &x * (&vi * vi.adjoint());
            let lambda = (&t * t.adjoint()).trace().re / nb as f64;
            if lambda < 1e-8 {
                return None;
            }
            t.adjoint() / c(lambda.sqrt(), 0.0)
        };
        let cols = &e_i1 * &v1;
        u.view_mut((0, i * nb), (n, nb)).copy_from(&cols);
    }
    Some(u)
}

/// [`detect_tensor_factorization`] on the images of two embeddings.
pub fn factorization_of(f_a: &StarMono, f_b: &StarMono, tol: f64) -> Result<Option<Factorization>, OpalgError> {
    if f_a.target_dim() != f_b.target_dim() {
        return Err(OpalgError::Dimension(format!(
            "embeddings into M_{} and M_{}",
            f_a.target_dim(),
            f_b.target_dim()
        )));
    }
    detect_tensor_factorization(&f_a.image_basis(), &f_b.image_basis(), f_a.target_dim(), tol)
}

/// `φ⁻¹(x)` for an automorphism given on matrix units, using that `φ`
/// maps the matrix-unit basis to an orthonormal basis.
fn inverse_on(phi: &[CMat], m: usize, x: &CMat) -> CMat {
    CMat::from_fn(m, m, |i, j| phi[i * m + j].dotc(x))
}

fn apply_on(phi: &[CMat], m: usize, x: &CMat) -> CMat {
    let mut y = CMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            y += &phi[i * m + j] * x[(i, j)];
        }
    }
    y
}

/// `γ = ad(U) ∘ (α'_A ⊗ α'_B) ∘ ad(U*)` with `α'` the operations transported to
/// the canonical factors. Extends `(α_A, α_B)` along `(f_A, f_B)`.
pub fn conjugated_tensor_witness(
    fact: &Factorization,
    f_a: &StarMono,
    f_b: &StarMono,
    alpha_a: &CpMap,
    alpha_b: &CpMap,
) -> Result<CpMap, OpalgError> {
    let (na, nb) = (fact.n_a, fact.n_b);
    if f_a.source_dim() != na || f_b.source_dim() != nb || alpha_a.n_in() != na || alpha_b.n_in() != nb {
        return Err(OpalgError::Dimension(format!(
            "factorization M_{na} ⊗ M_{nb} against embeddings of M_{} and M_{}",
            f_a.source_dim(),
            f_b.source_dim()
        )));
    }
    let phi_a = fact.transport_a(f_a);
    let phi_b = fact.transport_b(f_b);
    let moved_a = CpMap::from_linear_fn(na, na, |x| apply_on(&phi_a, na, &alpha_a.apply(&inverse_on(&phi_a, na, x))))?;
    let moved_b = CpMap::from_linear_fn(nb, nb, |x| apply_on(&phi_b, nb, &alpha_b.apply(&inverse_on(&phi_b, nb, x))))?;
    let t = tensor_operation(&moved_a, &moved_b);
    let u = &fact.unitary;
    CpMap::from_linear_fn(na * nb, na * nb, |x| u * t.apply(&(u.adjoint() * x * u)) * u.adjoint())
}
