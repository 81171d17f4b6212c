//! Finite-dimensional vector spaces over a prime field with all linear maps.
//!
//! Objects are `F_p^n`; a linear map `F_p^n -> F_p^m` is an `m x n` matrix
//! acting on column vectors, so `f ; g` is the matrix product `G * F`.
//! Canonical order on `hom`: row-major entry sequence, first entry most
//! significant, entries counting up from 0.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fp::{is_prime, FpMatrix};
use crate::kernel::{CoproductData, FiniteCategory, PullbackData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinVectError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("vector length {got} does not match ambient dimension {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("map shape {got:?} does not match {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("subspaces intersect nontrivially (witness {witness:?}); no joint extension in general")]
    NoExtension { witness: Vec<u32> },
    #[error("{count} maps exceed the enumeration budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
}

/// `F_p^dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FpSpace {
    pub p: u32,
    pub dim: usize,
}

impl FpSpace {
    pub fn new(p: u32, dim: usize) -> Result<Self, FinVectError> {
        if !is_prime(p) {
            return Err(FinVectError::NotPrime(p));
        }
        Ok(FpSpace { p, dim })
    }
}

/// A linear map between coordinate spaces.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LinearMap {
    pub dom: FpSpace,
    pub cod: FpSpace,
    pub matrix: FpMatrix,
}

impl LinearMap {
    pub fn new(dom: FpSpace, cod: FpSpace, matrix: FpMatrix) -> Result<Self, FinVectError> {
        if (matrix.rows(), matrix.cols()) != (cod.dim, dom.dim) || matrix.p() != dom.p {
            return Err(FinVectError::ShapeMismatch {
                expected: (cod.dim, dom.dim),
                got: (matrix.rows(), matrix.cols()),
            });
        }
        Ok(LinearMap { dom, cod, matrix })
    }

    pub fn identity(space: FpSpace) -> Self {
        LinearMap {
            dom: space,
            cod: space,
            matrix: FpMatrix::identity(space.p, space.dim),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.dom.dim
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let col = FpMatrix::from_columns(self.dom.p, self.dom.dim, &[v.to_vec()]);
        self.matrix.mul(&col).column(0)
    }
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.matrix)
    }
}

/// A subspace of an ambient space, held as a full-column-rank basis matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Subspace {
    pub ambient: FpSpace,
    pub basis: FpMatrix,
}

impl Subspace {
    /// Subspace with the given basis vectors; rejects dependent families.
    pub fn new(ambient: FpSpace, vectors: &[Vec<u32>]) -> Result<Self, FinVectError> {
        for v in vectors {
            if v.len() != ambient.dim {
                return Err(FinVectError::WrongLength {
                    expected: ambient.dim,
                    got: v.len(),
                });
            }
        }
        let basis = FpMatrix::from_columns(ambient.p, ambient.dim, vectors);
        if basis.rank() != vectors.len() {
            return Err(FinVectError::DependentBasis);
        }
        Ok(Subspace { ambient, basis })
    }

    /// Span of arbitrary vectors, with the canonical (reduced echelon) basis.
    pub fn span(ambient: FpSpace, vectors: &[Vec<u32>]) -> Result<Self, FinVectError> {
        for v in vectors {
            if v.len() != ambient.dim {
                return Err(FinVectError::WrongLength {
                    expected: ambient.dim,
                    got: v.len(),
                });
            }
        }
        let gens = FpMatrix::from_columns(ambient.p, ambient.dim, vectors);
        let (r, pivots) = gens.transpose().rref();
        let rows: Vec<Vec<u32>> = (0..pivots.len())
            .map(|i| (0..ambient.dim).map(|j| r.get(i, j)).collect())
            .collect();
        Subspace::new(ambient, &rows)
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn space(&self) -> FpSpace {
        FpSpace {
            p: self.ambient.p,
            dim: self.dim(),
        }
    }

    /// The inclusion `F_p^k -> ambient` given by the basis.
    pub fn inclusion(&self) -> LinearMap {
        LinearMap {
            dom: self.space(),
            cod: self.ambient,
            matrix: self.basis.clone(),
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let col = FpMatrix::from_columns(self.ambient.p, self.ambient.dim, &[v.to_vec()]);
        self.basis.hstack(&col).rank() == self.dim()
    }

    /// Every subspace of `ambient`, ordered by dimension then canonical basis.
    pub fn all(ambient: FpSpace) -> Vec<Subspace> {
        let vectors = all_vectors(ambient);
        let mut subs: Vec<Subspace> = vec![Subspace::span(ambient, &[]).expect("zero space")];
        let mut frontier = subs.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                for v in &vectors {
                    if s.contains(v) {
                        continue;
                    }
                    let mut gens: Vec<Vec<u32>> = (0..s.dim()).map(|j| s.basis.column(j)).collect();
                    gens.push(v.clone());
                    let t = Subspace::span(ambient, &gens).expect("same ambient");
                    if !subs.contains(&t) {
                        subs.push(t.clone());
                        next.push(t);
                    }
                }
            }
            frontier = next;
        }
        subs.sort_by(|a, b| (a.dim(), a.basis.data()).cmp(&(b.dim(), b.basis.data())));
        subs
    }
}

fn all_vectors(space: FpSpace) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..space.dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..space.p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// `true` iff `A ∩ B = {0}`, by `dim A + dim B - dim(A + B) = 0`.
pub fn intersection_oracle(a: &Subspace, b: &Subspace) -> Result<bool, FinVectError> {
    if a.ambient != b.ambient {
        return Err(FinVectError::AmbientMismatch);
    }
    Ok(a.dim() + b.dim() == a.basis.hstack(&b.basis).rank())
}

/// A nonzero vector of `A ∩ B`, if there is one.
pub fn intersection_witness(a: &Subspace, b: &Subspace) -> Option<Vec<u32>> {
    let null = a.basis.hstack(&b.basis.neg()).nullspace();
    if null.cols() == 0 {
        return None;
    }
    let coeffs = null.row_block(0, a.dim());
    Some(a.basis.mul(&coeffs).column(0))
}

/// Extends `basis` (full column rank) to an invertible matrix by appending
/// standard basis vectors in coordinate order.
fn complete_basis(basis: &FpMatrix) -> FpMatrix {
    let (p, n) = (basis.p(), basis.rows());
    let mut m = basis.clone();
    for i in 0..n {
        if m.cols() == n {
            break;
        }
        let mut e = vec![0; n];
        e[i] = 1;
        let cand = m.hstack(&FpMatrix::from_columns(p, n, &[e]));
        if cand.rank() == cand.cols() {
            m = cand;
        }
    }
    m
}

/// Builds `gamma` on the ambient space with `gamma` restricted to `A` equal to
/// `alpha_a` and restricted to `B` equal to `alpha_b`: images are prescribed on
/// the concatenated bases, the complement is fixed pointwise.
pub fn joint_extension_by_basis(
    a: &Subspace,
    b: &Subspace,
    alpha_a: &LinearMap,
    alpha_b: &LinearMap,
) -> Result<LinearMap, FinVectError> {
    if a.ambient != b.ambient {
        return Err(FinVectError::AmbientMismatch);
    }
    for (alpha, s) in [(alpha_a, a), (alpha_b, b)] {
        if alpha.dom != s.space() || alpha.cod != s.space() {
            return Err(FinVectError::ShapeMismatch {
                expected: (s.dim(), s.dim()),
                got: (alpha.matrix.rows(), alpha.matrix.cols()),
            });
        }
    }
    if let Some(witness) = intersection_witness(a, b) {
        return Err(FinVectError::NoExtension { witness });
    }
    let sum = a.basis.hstack(&b.basis);
    let full = complete_basis(&sum);
    let complement: Vec<Vec<u32>> = (sum.cols()..full.cols()).map(|j| full.column(j)).collect();
    let images = a
        .basis
        .mul(&alpha_a.matrix)
        .hstack(&b.basis.mul(&alpha_b.matrix))
        .hstack(&FpMatrix::from_columns(a.ambient.p, a.ambient.dim, &complement));
    let inv = full.inverse().expect("completed basis is invertible");
    Ok(LinearMap {
        dom: a.ambient,
        cod: a.ambient,
        matrix: images.mul(&inv),
    })
}

/// All endomorphisms of `space` in canonical order.
pub fn enumerate_endomaps(space: FpSpace, budget: u128) -> Result<Vec<LinearMap>, FinVectError> {
    let count = (space.p as u128).saturating_pow((space.dim * space.dim) as u32);
    if count > budget {
        return Err(FinVectError::BudgetExceeded { count, budget });
    }
    Ok(FinVectCategory::new(space.p, []).hom(&space, &space))
}

/// Biproduct `F^m (+) F^n` with injections `[I; 0]` and `[0; I]`.
pub fn direct_sum(a: FpSpace, b: FpSpace) -> CoproductData<LinearMap> {
    let sum = FpSpace {
        p: a.p,
        dim: a.dim + b.dim,
    };
    let mut i1 = FpMatrix::zeros(a.p, sum.dim, a.dim);
    for k in 0..a.dim {
        i1.set(k, k, 1);
    }
    let mut i2 = FpMatrix::zeros(a.p, sum.dim, b.dim);
    for k in 0..b.dim {
        i2.set(a.dim + k, k, 1);
    }
    CoproductData {
        i1: LinearMap {
            dom: a,
            cod: sum,
            matrix: i1,
        },
        i2: LinearMap {
            dom: b,
            cod: sum,
            matrix: i2,
        },
    }
}

/// `Vect` over `F_p` with probe spaces of the registered dimensions.
#[derive(Debug, Clone)]
pub struct FinVectCategory {
    p: u32,
    probe_dims: Vec<usize>,
}

impl FinVectCategory {
    pub fn new(p: u32, probe_dims: impl IntoIterator<Item = usize>) -> Self {
        FinVectCategory {
            p,
            probe_dims: probe_dims.into_iter().collect(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn space(&self, dim: usize) -> FpSpace {
        FpSpace { p: self.p, dim }
    }
}

impl FiniteCategory for FinVectCategory {
    type Object = FpSpace;
    type Morphism = LinearMap;

    fn objects(&self) -> Vec<FpSpace> {
        self.probe_dims.iter().map(|&d| self.space(d)).collect()
    }

    fn dom(&self, f: &LinearMap) -> FpSpace {
        f.dom
    }

    fn cod(&self, f: &LinearMap) -> FpSpace {
        f.cod
    }

    fn identity(&self, x: &FpSpace) -> LinearMap {
        LinearMap::identity(*x)
    }

    fn compose_unchecked(&self, f: &LinearMap, g: &LinearMap) -> LinearMap {
        LinearMap {
            dom: f.dom,
            cod: g.cod,
            matrix: g.matrix.mul(&f.matrix),
        }
    }

    fn hom_bound(&self, x: &FpSpace, y: &FpSpace) -> u128 {
        (self.p as u128).saturating_pow((x.dim * y.dim) as u32)
    }

    fn hom(&self, x: &FpSpace, y: &FpSpace) -> Vec<LinearMap> {
        let len = x.dim * y.dim;
        let mut entries = vec![0u32; len];
        let mut out = Vec::new();
        loop {
            out.push(LinearMap {
                dom: *x,
                cod: *y,
                matrix: FpMatrix::from_rows(self.p, y.dim, x.dim, entries.clone()),
            });
            let mut pos = len;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                entries[pos] += 1;
                if entries[pos] < self.p {
                    break;
                }
                entries[pos] = 0;
            }
        }
    }

    /// Prescribes `a` on the image of `m` and sends a complement to zero.
    fn extend_along(&self, m: &LinearMap, a: &LinearMap) -> Option<LinearMap> {
        if !m.is_injective() || m.cod != a.cod || m.dom != a.dom {
            return None;
        }
        let full = complete_basis(&m.matrix);
        let images = a
            .matrix
            .hstack(&FpMatrix::zeros(self.p, m.cod.dim, m.cod.dim - m.dom.dim));
        Some(LinearMap {
            dom: m.cod,
            cod: m.cod,
            matrix: images.mul(&full.inverse()?),
        })
    }

    /// Apex `{(x, y) : F_a x = F_b y}` with its canonical null-space basis.
    fn pullback(&self, f_a: &LinearMap, f_b: &LinearMap) -> Option<PullbackData<LinearMap>> {
        if f_a.cod != f_b.cod {
            return None;
        }
        let null = f_a.matrix.hstack(&f_b.matrix.neg()).nullspace();
        let apex = self.space(null.cols());
        Some(PullbackData {
            p_a: LinearMap {
                dom: apex,
                cod: f_a.dom,
                matrix: null.row_block(0, f_a.dom.dim),
            },
            p_b: LinearMap {
                dom: apex,
                cod: f_b.dom,
                matrix: null.row_block(f_a.dom.dim, f_a.dom.dim + f_b.dom.dim),
            },
        })
    }
}
