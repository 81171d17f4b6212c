//! The category of finite sets with all functions (`Hom = Mor`).
//!
//! Canonical order on `hom(X, Y)`: lexicographic on function tables, the first
//! element of `X` being the most significant position.

use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

use crate::kernel::{CoproductData, FiniteCategory, PullbackData};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinSetError {
    #[error("duplicate label {0}")]
    DuplicateLabel(u32),
    #[error("label {0} is not an element of the set")]
    UnknownLabel(u32),
    #[error("mapping is not total: label {0} has no image")]
    NotTotal(u32),
    #[error("{0} is not a subset inclusion")]
    NotInclusion(String),
    #[error("inclusions have different codomains")]
    CodomainMismatch,
}

/// A finite set of distinct opaque labels, in a fixed order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSet {
    labels: Arc<[u32]>,
}

impl FinSet {
    pub fn new(labels: impl IntoIterator<Item = u32>) -> Result<Self, FinSetError> {
        let labels: Vec<u32> = labels.into_iter().collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(FinSetError::DuplicateLabel(*l));
            }
        }
        Ok(FinSet {
            labels: labels.into(),
        })
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: u32) -> Self {
        FinSet {
            labels: (0..n).collect::<Vec<_>>().into(),
        }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn contains(&self, label: u32) -> bool {
        self.index_of(label).is_some()
    }

    pub fn is_subset_of(&self, other: &FinSet) -> bool {
        self.labels.iter().all(|&l| other.contains(l))
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels.iter()).finish()
    }
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.labels.serialize(s)
    }
}

/// A total function between finite sets, stored as a table of codomain
/// indices in domain order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSetMorphism {
    dom: FinSet,
    cod: FinSet,
    table: Arc<[u32]>,
}

impl FinSetMorphism {
    /// `table[i]` is the codomain index of the image of domain element `i`.
    pub fn new(dom: &FinSet, cod: &FinSet, table: Vec<u32>) -> Result<Self, FinSetError> {
        if table.len() != dom.len() {
            return Err(FinSetError::NotTotal(
                dom.labels.get(table.len()).copied().unwrap_or_default(),
            ));
        }
        if let Some(&bad) = table.iter().find(|&&t| t as usize >= cod.len()) {
            return Err(FinSetError::UnknownLabel(bad));
        }
        Ok(FinSetMorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            table: table.into(),
        })
    }

    /// Builds a function from `(label, image label)` pairs.
    pub fn from_labels(
        dom: &FinSet,
        cod: &FinSet,
        pairs: &[(u32, u32)],
    ) -> Result<Self, FinSetError> {
        let mut table = Vec::with_capacity(dom.len());
        for &l in dom.labels() {
            let &(_, img) = pairs
                .iter()
                .find(|(x, _)| *x == l)
                .ok_or(FinSetError::NotTotal(l))?;
            table.push(cod.index_of(img).ok_or(FinSetError::UnknownLabel(img))? as u32);
        }
        FinSetMorphism::new(dom, cod, table)
    }

    /// The inclusion of `sub` into `sup`, matching equal labels.
    pub fn inclusion(sub: &FinSet, sup: &FinSet) -> Result<Self, FinSetError> {
        let table = sub
            .labels()
            .iter()
            .map(|&l| sup.index_of(l).map(|i| i as u32).ok_or(FinSetError::UnknownLabel(l)))
            .collect::<Result<Vec<_>, _>>()?;
        FinSetMorphism::new(sub, sup, table)
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn image_label(&self, label: u32) -> Option<u32> {
        let i = self.dom.index_of(label)?;
        Some(self.cod.labels[self.table[i] as usize])
    }

    /// Whether every element maps to the element carrying the same label.
    pub fn is_inclusion(&self) -> bool {
        self.dom
            .labels()
            .iter()
            .zip(self.table.iter())
            .all(|(&l, &t)| self.cod.labels[t as usize] == l)
    }

    pub fn is_injective(&self) -> bool {
        (0..self.table.len()).all(|i| !self.table[..i].contains(&self.table[i]))
    }
}

impl fmt::Debug for FinSetMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.dom
                    .labels()
                    .iter()
                    .zip(self.table.iter())
                    .map(|(l, &t)| (l, self.cod.labels[t as usize])),
            )
            .finish()
    }
}

impl Serialize for FinSetMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let images: Vec<u32> = self
            .table
            .iter()
            .map(|&t| self.cod.labels[t as usize])
            .collect();
        let mut st = s.serialize_struct("FinSetMorphism", 3)?;
        st.serialize_field("dom", &self.dom)?;
        st.serialize_field("cod", &self.cod)?;
        st.serialize_field("images", &images)?;
        st.end()
    }
}

/// `Set` restricted to finite sets, with a registered family of probe sets.
#[derive(Debug, Clone)]
pub struct FinSetCategory {
    probes: Vec<FinSet>,
}

impl FinSetCategory {
    pub fn new(probes: Vec<FinSet>) -> Self {
        FinSetCategory { probes }
    }

    /// Registers `{0..n}` for every `n` in `sizes`. A two-element probe is
    /// enough to detect non-injective maps as non-monic.
    pub fn with_probe_sizes(sizes: impl IntoIterator<Item = u32>) -> Self {
        FinSetCategory {
            probes: sizes.into_iter().map(FinSet::range).collect(),
        }
    }
}

impl Default for FinSetCategory {
    fn default() -> Self {
        FinSetCategory::with_probe_sizes(0..=2)
    }
}

impl FiniteCategory for FinSetCategory {
    type Object = FinSet;
    type Morphism = FinSetMorphism;

    fn objects(&self) -> Vec<FinSet> {
        self.probes.clone()
    }

    fn dom(&self, f: &FinSetMorphism) -> FinSet {
        f.dom.clone()
    }

    fn cod(&self, f: &FinSetMorphism) -> FinSet {
        f.cod.clone()
    }

    fn identity(&self, x: &FinSet) -> FinSetMorphism {
        FinSetMorphism {
            dom: x.clone(),
            cod: x.clone(),
            table: (0..x.len() as u32).collect::<Vec<_>>().into(),
        }
    }

    fn compose_unchecked(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> FinSetMorphism {
        FinSetMorphism {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            table: f.table.iter().map(|&i| g.table[i as usize]).collect(),
        }
    }

    fn hom_bound(&self, x: &FinSet, y: &FinSet) -> u128 {
        (y.len() as u128).saturating_pow(x.len() as u32)
    }

    fn hom(&self, x: &FinSet, y: &FinSet) -> Vec<FinSetMorphism> {
        let (n, m) = (x.len(), y.len() as u32);
        if m == 0 {
            return if n == 0 {
                vec![self.identity(x)]
            } else {
                Vec::new()
            };
        }
        let mut out = Vec::new();
        let mut table = vec![0u32; n];
        loop {
            out.push(FinSetMorphism {
                dom: x.clone(),
                cod: y.clone(),
                table: table.clone().into(),
            });
            // odometer, last position fastest
            let mut pos = n;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                table[pos] += 1;
                if table[pos] < m {
                    break;
                }
                table[pos] = 0;
            }
        }
    }

    fn extend_along(&self, m: &FinSetMorphism, a: &FinSetMorphism) -> Option<FinSetMorphism> {
        if !m.is_injective() || m.cod != a.cod || m.dom != a.dom {
            return None;
        }
        let mut table: Vec<u32> = (0..m.cod.len() as u32).collect();
        for (i, &t) in m.table.iter().enumerate() {
            table[t as usize] = a.table[i];
        }
        Some(FinSetMorphism {
            dom: m.cod.clone(),
            cod: m.cod.clone(),
            table: table.into(),
        })
    }

    fn pullback(
        &self,
        f_a: &FinSetMorphism,
        f_b: &FinSetMorphism,
    ) -> Option<PullbackData<FinSetMorphism>> {
        pullback(f_a, f_b).ok()
    }

    fn describe(&self, f: &FinSetMorphism) -> String {
        format!("{f:?}")
    }
}

/// Apex `{(a, b) : f_a(a) = f_b(b)}` with coordinate projections, ordered
/// lexicographically. For two inclusions the apex is labelled as `A ∩ B`.
pub fn pullback(
    f_a: &FinSetMorphism,
    f_b: &FinSetMorphism,
) -> Result<PullbackData<FinSetMorphism>, FinSetError> {
    if f_a.cod != f_b.cod {
        return Err(FinSetError::CodomainMismatch);
    }
    let inclusions = f_a.is_inclusion() && f_b.is_inclusion();
    let mut pairs = Vec::new();
    for (i, &x) in f_a.table.iter().enumerate() {
        for (j, &y) in f_b.table.iter().enumerate() {
            if x == y {
                pairs.push((i as u32, j as u32));
            }
        }
    }
    let labels: Vec<u32> = if inclusions {
        pairs.iter().map(|&(i, _)| f_a.dom.labels[i as usize]).collect()
    } else {
        (0..pairs.len() as u32).collect()
    };
    let apex = FinSet::new(labels)?;
    Ok(PullbackData {
        p_a: FinSetMorphism::new(&apex, &f_a.dom, pairs.iter().map(|p| p.0).collect())?,
        p_b: FinSetMorphism::new(&apex, &f_b.dom, pairs.iter().map(|p| p.1).collect())?,
    })
}

/// Predicted independence of two subset inclusions: the subsets are disjoint,
/// or they are the same singleton, or one of them is empty. The last two
/// clauses are the degenerate cases where every endomorphism pair agrees.
pub fn disjointness_oracle(f_a: &FinSetMorphism, f_b: &FinSetMorphism) -> Result<bool, FinSetError> {
    for f in [f_a, f_b] {
        if !f.is_inclusion() {
            return Err(FinSetError::NotInclusion(format!("{f:?}")));
        }
    }
    if f_a.cod != f_b.cod {
        return Err(FinSetError::CodomainMismatch);
    }
    let (a, b) = (&f_a.dom, &f_b.dom);
    let disjoint = a.labels().iter().all(|&l| !b.contains(l));
    let same_singleton = a.len() == 1 && b.len() == 1 && a.labels() == b.labels();
    Ok(disjoint || same_singleton || a.is_empty() || b.is_empty())
}

/// Tagged disjoint union: elements of `a` are labelled `0..|a|`, elements of
/// `b` follow.
pub fn coproduct(a: &FinSet, b: &FinSet) -> (FinSet, CoproductData<FinSetMorphism>) {
    let sum = FinSet::range((a.len() + b.len()) as u32);
    let i1 = FinSetMorphism {
        dom: a.clone(),
        cod: sum.clone(),
        table: (0..a.len() as u32).collect::<Vec<_>>().into(),
    };
    let i2 = FinSetMorphism {
        dom: b.clone(),
        cod: sum.clone(),
        table: (a.len() as u32..(a.len() + b.len()) as u32)
            .collect::<Vec<_>>()
            .into(),
    };
    (sum, CoproductData { i1, i2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{audit_coproduct_independence, verify_coproduct, Budget, FiniteCategory};

    fn set(l: &[u32]) -> FinSet {
        FinSet::new(l.iter().copied()).unwrap()
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(FinSet::new([1, 1]).unwrap_err(), FinSetError::DuplicateLabel(1));
    }

    #[test]
    fn hom_sizes_and_order() {
        let c = FinSetCategory::default();
        let x = set(&[1, 2, 3]);
        let homs = c.hom(&x, &x);
        assert_eq!(homs.len(), 27);
        assert_eq!(homs[0].table(), &[0, 0, 0]);
        assert_eq!(homs[1].table(), &[0, 0, 1]);
        assert_eq!(c.hom(&set(&[]), &set(&[])).len(), 1);
        assert_eq!(c.hom(&set(&[1]), &set(&[])).len(), 0);
        assert_eq!(c.hom(&set(&[]), &x).len(), 1);
    }

    #[test]
    fn pullback_of_inclusions_is_intersection() {
        let x = set(&[1, 2, 3]);
        let fa = FinSetMorphism::inclusion(&set(&[1, 2]), &x).unwrap();
        let fb = FinSetMorphism::inclusion(&set(&[2, 3]), &x).unwrap();
        let pb = pullback(&fa, &fb).unwrap();
        assert_eq!(pb.p_a.dom().labels(), &[2]);

        let fc = FinSetMorphism::inclusion(&set(&[3]), &x).unwrap();
        assert!(pullback(&fa, &fc).unwrap().p_a.dom().is_empty());
    }

    #[test]
    fn pullback_of_constant_maps_is_empty() {
        let x = set(&[1, 2]);
        let a = set(&[5, 6]);
        let fa = FinSetMorphism::from_labels(&a, &x, &[(5, 1), (6, 1)]).unwrap();
        let fb = FinSetMorphism::from_labels(&a, &x, &[(5, 2), (6, 2)]).unwrap();
        let pb = pullback(&fa, &fb).unwrap();
        assert!(pb.p_a.dom().is_empty());
        assert!(crate::kernel::verify_pullback(
            &FinSetCategory::default(),
            &crate::kernel::Cospan { f_a: fa, f_b: fb },
            &pb
        )
        .is_ok());
    }

    #[test]
    fn oracle_examples() {
        let x = set(&[1, 2, 3]);
        let inc = |s: &[u32], x: &FinSet| FinSetMorphism::inclusion(&set(s), x).unwrap();
        assert!(disjointness_oracle(&inc(&[1, 2], &x), &inc(&[3], &x)).unwrap());
        let y = set(&[1, 2]);
        assert!(disjointness_oracle(&inc(&[1], &y), &inc(&[1], &y)).unwrap());
        assert!(!disjointness_oracle(&inc(&[1], &y), &inc(&[1, 2], &y)).unwrap());
    }

    #[test]
    fn oracle_rejects_non_inclusions() {
        let x = set(&[1, 2]);
        let a = set(&[1]);
        let moved = FinSetMorphism::from_labels(&a, &x, &[(1, 2)]).unwrap();
        assert!(matches!(
            disjointness_oracle(&moved, &moved),
            Err(FinSetError::NotInclusion(_))
        ));
    }

    #[test]
    fn coproduct_examples() {
        let c = FinSetCategory::default();
        let (sum, cop) = coproduct(&set(&[1]), &set(&[1]));
        assert_eq!(sum.len(), 2);
        assert!(crate::kernel::is_monomorphism(&c, &cop.i1));
        assert!(verify_coproduct(&c, &cop).is_ok());

        let b = set(&[4, 5]);
        let (sum, _) = coproduct(&set(&[]), &b);
        assert_eq!(sum.len(), b.len());

        let (_, cop) = coproduct(&set(&[1, 2]), &set(&[3]));
        let audit = audit_coproduct_independence(&c, &cop, &Budget::default()).unwrap();
        assert!(audit.independent());
        assert!(audit.copairs_sound);
        assert_eq!(audit.copairs.len(), 4);
    }

    #[test]
    fn extension_is_identity_off_the_image() {
        let c = FinSetCategory::default();
        let q = set(&[1, 2, 3, 4]);
        let a = set(&[1, 2]);
        let m = FinSetMorphism::inclusion(&a, &q).unwrap();
        let target = FinSetMorphism::from_labels(&a, &q, &[(1, 4), (2, 4)]).unwrap();
        let j = c.extend_along(&m, &target).unwrap();
        assert_eq!(c.compose_unchecked(&m, &j), target);
        assert_eq!(j.image_label(3), Some(3));
    }
}
