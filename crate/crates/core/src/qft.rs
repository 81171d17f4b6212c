//! Finite causal sites with a functor into matrix algebras, audited for
//! covariance, commutation at spacelike separation, operational independence
//! and weak additivity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::opalg::{
    commutator, factorization_of, identity, matrix_unit, op_norm, search_joint_extension,
    CMat, CpMap, Factorization, FeasibilityParams, FeasibilityResult, OpalgError, SpanBasis,
    StarMono,
};

pub const COVARIANCE_TOL: f64 = 1e-12;
pub const CAUSALITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SiteError {
    #[error("embedding {0} refers to a missing region")]
    UnknownRegion(usize),
    #[error("{0} refers to a missing embedding")]
    UnknownEmbedding(String),
    #[error("region {0} has {1} identity embeddings")]
    Identity(usize, usize),
    #[error("composite {0:?} does not type-check")]
    IllTyped([usize; 3]),
    #[error("composite of {0} and {1} declared twice with different results")]
    Conflicting(usize, usize),
    #[error("identity law fails at composite {0:?}")]
    IdentityLaw([usize; 3]),
    #[error("associativity fails for {0}, {1}, {2}")]
    Associativity(usize, usize, usize),
    #[error("spacelike pair {0:?} does not share a codomain or repeats an embedding")]
    Spacelike([usize; 2]),
    #[error("assignment: {0}")]
    Assignment(String),
    #[error(transparent)]
    Opalg(#[from] OpalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
    #[serde(default)]
    pub identity: bool,
}

/// Regions, embeddings between them with a declared composition table, and a
/// symmetric spacelike relation on embeddings with a common codomain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalSite {
    pub regions: Vec<String>,
    pub embeddings: Vec<Embedding>,
    /// `[first, second, composite]` with `first ; second = composite`.
    #[serde(default)]
    pub composites: Vec<[usize; 3]>,
    #[serde(default)]
    pub spacelike: Vec<[usize; 2]>,
}

impl CausalSite {
    pub fn validate(&self) -> Result<(), SiteError> {
        let ne = self.embeddings.len();
        for (k, e) in self.embeddings.iter().enumerate() {
            if e.dom >= self.regions.len() || e.cod >= self.regions.len() {
                return Err(SiteError::UnknownRegion(k));
            }
            if e.identity && e.dom != e.cod {
                return Err(SiteError::IllTyped([k, k, k]));
            }
        }
        for r in 0..self.regions.len() {
            let ids = self.embeddings.iter().filter(|e| e.identity && e.dom == r).count();
            if ids != 1 {
                return Err(SiteError::Identity(r, ids));
            }
        }
        let mut table = std::collections::HashMap::new();
        for &t @ [f, g, h] in &self.composites {
            if f >= ne || g >= ne || h >= ne {
                return Err(SiteError::UnknownEmbedding(format!("composite {t:?}")));
            }
            let (ef, eg, eh) = (&self.embeddings[f], &self.embeddings[g], &self.embeddings[h]);
            if ef.cod != eg.dom || eh.dom != ef.dom || eh.cod != eg.cod {
                return Err(SiteError::IllTyped(t));
            }
            if (ef.identity && h != g) || (eg.identity && h != f) {
                return Err(SiteError::IdentityLaw(t));
            }
            if let Some(&prev) = table.get(&(f, g)) {
                if prev != h {
                    return Err(SiteError::Conflicting(f, g));
                }
            }
            table.insert((f, g), h);
        }
        for (&(f, g), &fg) in &table {
            for (&(g2, h), &gh) in &table {
                if g2 != g {
                    continue;
                }
                if let (Some(l), Some(r)) = (table.get(&(fg, h)), table.get(&(f, gh))) {
                    if l != r {
                        return Err(SiteError::Associativity(f, g, h));
                    }
                }
            }
        }
        for &p @ [a, b] in &self.spacelike {
            if a >= ne || b >= ne {
                return Err(SiteError::UnknownEmbedding(format!("spacelike pair {p:?}")));
            }
            if a == b || self.embeddings[a].cod != self.embeddings[b].cod {
                return Err(SiteError::Spacelike(p));
            }
        }
        Ok(())
    }

    /// Spacelike pairs as unordered, deduplicated, sorted pairs.
    pub fn spacelike_pairs(&self) -> Vec<[usize; 2]> {
        let mut pairs: Vec<[usize; 2]> = self
            .spacelike
            .iter()
            .map(|&[a, b]| if a <= b { [a, b] } else { [b, a] })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }
}

/// Matrix dimension per region and a *-monomorphism per embedding.
#[derive(Debug, Clone)]
pub struct FunctorAssignment {
    pub algebras: Vec<usize>,
    pub maps: Vec<StarMono>,
}

impl FunctorAssignment {
    pub fn validate(&self, site: &CausalSite) -> Result<(), SiteError> {
        if self.algebras.len() != site.regions.len() {
            return Err(SiteError::Assignment(format!(
                "{} algebras for {} regions",
                self.algebras.len(),
                site.regions.len()
            )));
        }
        if self.maps.len() != site.embeddings.len() {
            return Err(SiteError::Assignment(format!(
                "{} maps for {} embeddings",
                self.maps.len(),
                site.embeddings.len()
            )));
        }
        for (k, (e, m)) in site.embeddings.iter().zip(&self.maps).enumerate() {
            if m.source_dim() != self.algebras[e.dom] || m.target_dim() != self.algebras[e.cod] {
                return Err(SiteError::Assignment(format!(
                    "embedding {k} ({}) is assigned M_{} -> M_{}, regions carry M_{} and M_{}",
                    e.name,
                    m.source_dim(),
                    m.target_dim(),
                    self.algebras[e.dom],
                    self.algebras[e.cod]
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceVerdict {
    pub status: AuditStatus,
    pub residual: f64,
    pub checked: usize,
    /// First failing `[first, second, composite]`; identities appear as `[e, e, e]`.
    pub failure: Option<[usize; 3]>,
}

fn deviation(n: usize, lhs: impl Fn(&CMat) -> CMat, rhs: impl Fn(&CMat) -> CMat) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let e = matrix_unit(n, i, j);
            worst = worst.max(op_norm(&(lhs(&e) - rhs(&e))));
        }
    }
    worst
}

/// `F(id) = id` and `F(g) ∘ F(f) = F(f ; g)` on matrix units of the source.
pub fn check_covariance(site: &CausalSite, f: &FunctorAssignment) -> Result<CovarianceVerdict, SiteError> {
    site.validate()?;
    f.validate(site)?;
    let mut verdict = CovarianceVerdict { status: AuditStatus::Pass, residual: 0.0, checked: 0, failure: None };
    let record = |v: &mut CovarianceVerdict, r: f64, at: [usize; 3]| {
        v.checked += 1;
        v.residual = v.residual.max(r);
        if r > COVARIANCE_TOL && v.failure.is_none() {
            v.failure = Some(at);
            v.status = AuditStatus::Fail;
        }
    };
    for (k, e) in site.embeddings.iter().enumerate().filter(|(_, e)| e.identity) {
        let n = f.algebras[e.dom];
        let r = deviation(n, |x| f.maps[k].apply(x), |x| x.clone());
        record(&mut verdict, r, [k, k, k]);
    }
    for &[a, b, ab] in &site.composites {
        let n = f.algebras[site.embeddings[a].dom];
        let r = deviation(n, |x| f.maps[b].apply(&f.maps[a].apply(x)), |x| f.maps[ab].apply(x));
        record(&mut verdict, r, [a, b, ab]);
    }
    Ok(verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutatorWitness {
    pub pair: [usize; 2],
    pub unit_a: (usize, usize),
    pub unit_b: (usize, usize),
    pub norm: f64,
}

impl CommutatorWitness {
    /// Recomputes the commutator norm from the assignment.
    pub fn recheck(&self, f: &FunctorAssignment) -> f64 {
        let (ma, mb) = (&f.maps[self.pair[0]], &f.maps[self.pair[1]]);
        let x = ma.apply(&matrix_unit(ma.source_dim(), self.unit_a.0, self.unit_a.1));
        let y = mb.apply(&matrix_unit(mb.source_dim(), self.unit_b.0, self.unit_b.1));
        op_norm(&commutator(&x, &y))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausalityVerdict {
    pub status: AuditStatus,
    pub residual: f64,
    pub pairs_checked: usize,
    pub witness: Option<CommutatorWitness>,
}

/// Commutators of image matrix units vanish for every spacelike pair.
pub fn check_einstein_causality(
    site: &CausalSite,
    f: &FunctorAssignment,
    tol: f64,
) -> Result<CausalityVerdict, SiteError> {
    site.validate()?;
    f.validate(site)?;
    let mut verdict = CausalityVerdict {
        status: AuditStatus::Pass,
        residual: 0.0,
        pairs_checked: 0,
        witness: None,
    };
    for pair @ [a, b] in site.spacelike_pairs() {
        verdict.pairs_checked += 1;
        let (ma, mb) = (&f.maps[a], &f.maps[b]);
        let (na, nb) = (ma.source_dim(), mb.source_dim());
        let imgs_b = mb.image_basis();
        for i in 0..na {
            for j in 0..na {
                let x = ma.apply(&matrix_unit(na, i, j));
                for (k, y) in imgs_b.iter().enumerate() {
                    let norm = op_norm(&commutator(&x, y));
                    verdict.residual = verdict.residual.max(norm);
                    if norm > tol && verdict.witness.is_none() {
                        verdict.status = AuditStatus::Fail;
                        verdict.witness = Some(CommutatorWitness {
                            pair,
                            unit_a: (i, j),
                            unit_b: (k / nb, k % nb),
                            norm,
                        });
                    }
                }
            }
        }
    }
    Ok(verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpindParams {
    pub tol: f64,
    /// Random operation pairs tried when no factorization is found.
    pub samples: usize,
    pub kraus_count: usize,
    pub seed: u64,
    pub feasibility: FeasibilityParams,
}

impl Default for OpindParams {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            samples: 4,
            kraus_count: 4,
            seed: 0,
            feasibility: FeasibilityParams::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OpindPairVerdict {
    /// The images are tensor factors; `residual` re-verifies the unitary.
    Pass {
        pair: [usize; 2],
        certificate: Factorization,
        residual: f64,
    },
    /// A sampled operation pair for which the search returned `Unknown`.
    Fail {
        pair: [usize; 2],
        alpha_a: CpMap,
        alpha_b: CpMap,
        search: FeasibilityResult,
    },
    /// No factorization; every sampled pair extended.
    Inconclusive {
        pair: [usize; 2],
        samples_found: usize,
    },
}

impl OpindPairVerdict {
    pub fn status(&self) -> AuditStatus {
        match self {
            OpindPairVerdict::Pass { .. } => AuditStatus::Pass,
            OpindPairVerdict::Fail { .. } => AuditStatus::Fail,
            OpindPairVerdict::Inconclusive { .. } => AuditStatus::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OpindVerdict {
    pub status: AuditStatus,
    pub pairs: Vec<OpindPairVerdict>,
}

fn combine(statuses: impl Iterator<Item = AuditStatus>) -> AuditStatus {
    let mut out = AuditStatus::Pass;
    for s in statuses {
        match s {
            AuditStatus::Fail => return AuditStatus::Fail,
            AuditStatus::Inconclusive => out = AuditStatus::Inconclusive,
            AuditStatus::Pass => {}
        }
    }
    out
}

/// Tensor factorization of the two images is sufficient (the ambient full
/// matrix algebra is injective); otherwise falls back to sampled feasibility
/// searches, which can only refute or stay inconclusive.
pub fn check_opind(site: &CausalSite, f: &FunctorAssignment, params: &OpindParams) -> Result<OpindVerdict, SiteError> {
    site.validate()?;
    f.validate(site)?;
    let mut pairs = Vec::new();
    for (idx, pair @ [a, b]) in site.spacelike_pairs().into_iter().enumerate() {
        let (ma, mb) = (&f.maps[a], &f.maps[b]);
        if let Some(fact) = factorization_of(ma, mb, params.tol)? {
            let residual = fact.residual(&ma.image_basis(), &mb.image_basis());
            if residual <= params.tol * ma.target_dim() as f64 {
                pairs.push(OpindPairVerdict::Pass { pair, certificate: fact, residual });
                continue;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(idx as u64));
        let mut verdict = OpindPairVerdict::Inconclusive { pair, samples_found: 0 };
        for _ in 0..params.samples {
            let alpha_a = CpMap::random_unital(ma.source_dim(), params.kraus_count, &mut rng);
            let alpha_b = CpMap::random_unital(mb.source_dim(), params.kraus_count, &mut rng);
            let search = search_joint_extension(ma, mb, &alpha_a, &alpha_b, &params.feasibility)?;
            if search.found() {
                if let OpindPairVerdict::Inconclusive { samples_found, .. } = &mut verdict {
                    *samples_found += 1;
                }
            } else {
                verdict = OpindPairVerdict::Fail { pair, alpha_a, alpha_b, search };
                break;
            }
        }
        pairs.push(verdict);
    }
    Ok(OpindVerdict {
        status: combine(pairs.iter().map(OpindPairVerdict::status)),
        pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityVerdict {
    pub status: AuditStatus,
    pub region: usize,
    pub span_dim: usize,
    pub target_dim: usize,
}

/// The algebra generated by the images of `cover` (embeddings into `region`)
/// is all of `F(region)`.
pub fn check_weak_additivity(
    site: &CausalSite,
    f: &FunctorAssignment,
    region: usize,
    cover: &[usize],
) -> Result<AdditivityVerdict, SiteError> {
    site.validate()?;
    f.validate(site)?;
    if region >= site.regions.len() {
        return Err(SiteError::UnknownRegion(region));
    }
    let n = f.algebras[region];
    let mut gens = vec![identity(n)];
    for &k in cover {
        let e = site
            .embeddings
            .get(k)
            .ok_or_else(|| SiteError::UnknownEmbedding(format!("cover entry {k}")))?;
        if e.cod != region {
            return Err(SiteError::UnknownEmbedding(format!(
                "cover entry {k} ({}) does not map into region {region}",
                e.name
            )));
        }
        gens.extend(f.maps[k].image_basis());
    }
    let tol = 1e-9;
    let mut span = SpanBasis::new(n, &gens, tol)?;
    loop {
        let basis = span.basis().to_vec();
        let products: Vec<CMat> = basis
            .iter()
            .flat_map(|x| basis.iter().map(move |y| x * y))
            .chain(basis.iter().map(|x| x.adjoint()))
            .collect();
        let before = span.dim();
        let mut all = basis;
        all.extend(products);
        span = SpanBasis::new(n, &all, tol)?;
        if span.dim() == before || span.dim() == n * n {
            break;
        }
    }
    Ok(AdditivityVerdict {
        status: if span.dim() == n * n { AuditStatus::Pass } else { AuditStatus::Fail },
        region,
        span_dim: span.dim(),
        target_dim: n * n,
    })
}

/// All four audits of one site.
#[derive(Debug, Clone, Serialize)]
pub struct SiteAudit {
    pub covariance: CovarianceVerdict,
    pub causality: CausalityVerdict,
    pub opind: OpindVerdict,
    pub weak_additivity: Option<AdditivityVerdict>,
}

impl SiteAudit {
    pub fn status(&self) -> AuditStatus {
        combine(
            [self.covariance.status, self.causality.status, self.opind.status]
                .into_iter()
                .chain(self.weak_additivity.as_ref().map(|w| w.status)),
        )
    }
}

pub fn audit_site(
    site: &CausalSite,
    f: &FunctorAssignment,
    cover: Option<(usize, &[usize])>,
    params: &OpindParams,
) -> Result<SiteAudit, SiteError> {
    Ok(SiteAudit {
        covariance: check_covariance(site, f)?,
        causality: check_einstein_causality(site, f, CAUSALITY_TOL)?,
        opind: check_opind(site, f, params)?,
        weak_additivity: cover
            .map(|(region, emb)| check_weak_additivity(site, f, region, emb))
            .transpose()?,
    })
}

fn emb(name: &str, dom: usize, cod: usize, identity: bool) -> Embedding {
    Embedding { name: name.into(), dom, cod, identity }
}

/// Regions `O1, O2 ⊂ O` with spacelike embeddings `ψ1, ψ2` (indices 3 and 4).
pub fn two_region_site() -> CausalSite {
    CausalSite {
        regions: vec!["O1".into(), "O2".into(), "O".into()],
        embeddings: vec![
            emb("id_O1", 0, 0, true),
            emb("id_O2", 1, 1, true),
            emb("id_O", 2, 2, true),
            emb("psi1", 0, 2, false),
            emb("psi2", 1, 2, false),
        ],
        composites: vec![[0, 3, 3], [3, 2, 3], [1, 4, 4], [4, 2, 4]],
        spacelike: vec![[3, 4]],
    }
}

/// `M_2, M_2, M_4` with `ψ1 ↦ ad(U)(a ⊗ I)` and `ψ2 ↦ ad(U)(I ⊗ b)`.
pub fn two_factor_assignment(u: Option<&CMat>) -> Result<FunctorAssignment, SiteError> {
    let (fa, fb) = crate::opalg::canonical_injections(2, 2)?;
    let (fa, fb) = match u {
        Some(u) => {
            let conj = StarMono::new(4, 1, u.clone())?;
            (fa.then(&conj)?, fb.then(&conj)?)
        }
        None => (fa, fb),
    };
    Ok(FunctorAssignment {
        algebras: vec![2, 2, 4],
        maps: vec![
            StarMono::identity(2)?,
            StarMono::identity(2)?,
            StarMono::identity(4)?,
            fa,
            fb,
        ],
    })
}

/// Both embeddings land on the same `M_2 ⊗ I`.
pub fn same_image_assignment() -> Result<FunctorAssignment, SiteError> {
    let fa = StarMono::canonical(2, 2)?;
    Ok(FunctorAssignment {
        algebras: vec![2, 2, 4],
        maps: vec![
            StarMono::identity(2)?,
            StarMono::identity(2)?,
            StarMono::identity(4)?,
            fa.clone(),
            fa,
        ],
    })
}

/// `O1 -> O2 -> O` with the composite declared (embeddings 3, 4, 5).
pub fn chain_site() -> CausalSite {
    CausalSite {
        regions: vec!["O1".into(), "O2".into(), "O".into()],
        embeddings: vec![
            emb("id_O1", 0, 0, true),
            emb("id_O2", 1, 1, true),
            emb("id_O", 2, 2, true),
            emb("i12", 0, 1, false),
            emb("i2", 1, 2, false),
            emb("i1", 0, 2, false),
        ],
        composites: vec![[3, 4, 5]],
        spacelike: vec![],
    }
}

/// `M_2 -> M_4 -> M_8` by random unitaries; the composite is consistent when
/// `consistent`, and otherwise differs by a conjugation.
pub fn chain_assignment(seed: u64, consistent: bool) -> Result<FunctorAssignment, SiteError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f12 = StarMono::new(2, 2, crate::opalg::random_unitary(4, &mut rng))?;
    let f2 = StarMono::new(4, 2, crate::opalg::random_unitary(8, &mut rng))?;
    let mut f1 = f12.then(&f2)?;
    if !consistent {
        let twist = StarMono::new(8, 1, crate::opalg::random_unitary(8, &mut rng))?;
        f1 = f1.then(&twist)?;
    }
    Ok(FunctorAssignment {
        algebras: vec![2, 4, 8],
        maps: vec![
            StarMono::identity(2)?,
            StarMono::identity(4)?,
            StarMono::identity(8)?,
            f12,
            f2,
            f1,
        ],
    })
}
