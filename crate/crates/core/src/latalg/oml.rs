//! Finite orthomodular lattices given by order and orthocomplement tables.
//!
//! Elements are indices `0..n`; subsets of elements (sub-lattices) are
//! bitmasks, so lattices have at most 32 elements.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{
    decide_mor_independence, Budget, FiniteCategory, IndependenceVerdict, KernelError, MonoPair,
    PullbackData,
};

pub const MAX_ELEMENTS: usize = 32;

/// First failing condition found by [`validate_oml`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum OmlViolation {
    Size { n: usize },
    NotReflexive { x: u32 },
    NotAntisymmetric { x: u32, y: u32 },
    NotTransitive { x: u32, y: u32, z: u32 },
    NoJoin { x: u32, y: u32 },
    NoMeet { x: u32, y: u32 },
    Unbounded,
    ComplementOutOfRange { x: u32 },
    NotInvolutive { x: u32 },
    NotAntitone { x: u32, y: u32 },
    /// `x ∨ x'` is not the top or `x ∧ x'` is not the bottom.
    NotComplement { x: u32 },
    /// `x <= y` but `x ∨ (x' ∧ y) = got != y`.
    NotOrthomodular { x: u32, y: u32, got: u32 },
}

impl fmt::Display for OmlViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmlViolation::NotOrthomodular { x, y, got } => write!(
                f,
                "orthomodular law fails: {x} <= {y} but {x} ∨ ({x}' ∧ {y}) = {got}"
            ),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OmlError {
    #[error("not an orthomodular lattice: {0}")]
    Invalid(OmlViolation),
    #[error("element mask {0:#b} is not a sub-orthomodular lattice")]
    NotSublattice(u32),
    #[error("table sizes do not match")]
    Shape,
    #[error("not a direct sum: {0}")]
    NotDirectSum(DirectSumFailure),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
struct Tables {
    names: Vec<String>,
    leq: Vec<bool>,
    comp: Vec<u32>,
    join: Vec<u32>,
    meet: Vec<u32>,
    bottom: u32,
    top: u32,
}

#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Oml(Arc<Tables>);

impl std::hash::Hash for Oml {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.leq.hash(state);
        self.0.comp.hash(state);
    }
}

impl fmt::Debug for Oml {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oml{:?}", self.0.names)
    }
}

fn bound(n: usize, leq: &[bool], x: usize, y: usize, upper: bool) -> Option<u32> {
    let le = |a: usize, b: usize| leq[a * n + b];
    let is_bound = |z: usize| if upper { le(x, z) && le(y, z) } else { le(z, x) && le(z, y) };
    let candidates: Vec<usize> = (0..n).filter(|&z| is_bound(z)).collect();
    candidates
        .iter()
        .copied()
        .find(|&z| {
            candidates
                .iter()
                .all(|&w| if upper { le(z, w) } else { le(w, z) })
        })
        .map(|z| z as u32)
}

/// Checks partial order, lattice, bounds, orthocomplementation and the
/// orthomodular law, in that order; `leq` is row-major `n x n`.
pub fn validate_oml(n: usize, leq: &[bool], comp: &[u32]) -> Result<(), OmlViolation> {
    if n == 0 || n > MAX_ELEMENTS || leq.len() != n * n || comp.len() != n {
        return Err(OmlViolation::Size { n });
    }
    let le = |a: usize, b: usize| leq[a * n + b];
    for x in 0..n {
        if !le(x, x) {
            return Err(OmlViolation::NotReflexive { x: x as u32 });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && le(x, y) && le(y, x) {
                return Err(OmlViolation::NotAntisymmetric {
                    x: x as u32,
                    y: y as u32,
                });
            }
            for z in 0..n {
                if le(x, y) && le(y, z) && !le(x, z) {
                    return Err(OmlViolation::NotTransitive {
                        x: x as u32,
                        y: y as u32,
                        z: z as u32,
                    });
                }
            }
        }
    }
    let mut join = vec![0u32; n * n];
    let mut meet = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            let (xu, yu) = (x as u32, y as u32);
            join[x * n + y] = bound(n, leq, x, y, true).ok_or(OmlViolation::NoJoin { x: xu, y: yu })?;
            meet[x * n + y] = bound(n, leq, x, y, false).ok_or(OmlViolation::NoMeet { x: xu, y: yu })?;
        }
    }
    let bottom = (0..n).find(|&b| (0..n).all(|x| le(b, x))).ok_or(OmlViolation::Unbounded)?;
    let top = (0..n).find(|&t| (0..n).all(|x| le(x, t))).ok_or(OmlViolation::Unbounded)?;
    if let Some(x) = comp.iter().position(|&c| c as usize >= n) {
        return Err(OmlViolation::ComplementOutOfRange { x: x as u32 });
    }
    for (x, &cx) in comp.iter().enumerate() {
        let c = cx as usize;
        if comp[c] as usize != x {
            return Err(OmlViolation::NotInvolutive { x: x as u32 });
        }
        for (y, &cy) in comp.iter().enumerate() {
            if le(x, y) && !le(cy as usize, c) {
                return Err(OmlViolation::NotAntitone {
                    x: x as u32,
                    y: y as u32,
                });
            }
        }
        if join[x * n + c] as usize != top || meet[x * n + c] as usize != bottom {
            return Err(OmlViolation::NotComplement { x: x as u32 });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if le(x, y) {
                let got = join[x * n + meet[comp[x] as usize * n + y] as usize];
                if got as usize != y {
                    return Err(OmlViolation::NotOrthomodular {
                        x: x as u32,
                        y: y as u32,
                        got,
                    });
                }
            }
        }
    }
    Ok(())
}

impl Oml {
    pub fn new(names: Vec<String>, leq: Vec<bool>, comp: Vec<u32>) -> Result<Self, OmlError> {
        let n = names.len();
        validate_oml(n, &leq, &comp).map_err(OmlError::Invalid)?;
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                join[x * n + y] = bound(n, &leq, x, y, true).expect("validated");
                meet[x * n + y] = bound(n, &leq, x, y, false).expect("validated");
            }
        }
        let bottom = (0..n).find(|&b| (0..n).all(|x| leq[b * n + x])).expect("validated") as u32;
        let top = (0..n).find(|&t| (0..n).all(|x| leq[x * n + t])).expect("validated") as u32;
        Ok(Oml(Arc::new(Tables {
            names,
            leq,
            comp,
            join,
            meet,
            bottom,
            top,
        })))
    }

    /// Builds the order from a predicate on element indices.
    pub fn from_fn(
        names: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
        comp: Vec<u32>,
    ) -> Result<Self, OmlError> {
        let n = names.len();
        let table = (0..n * n).map(|i| leq(i / n, i % n)).collect();
        Oml::new(names, table, comp)
    }

    /// The Boolean algebra on `k` atoms; element `m` is the atom set `m`.
    pub fn boolean(k: usize) -> Self {
        let n = 1usize << k;
        let names = (0..n).map(|m| format!("{m:0width$b}", width = k.max(1))).collect();
        let comp = (0..n as u32).map(|m| !m & (n as u32 - 1)).collect();
        Oml::from_fn(names, |a, b| a & !b == 0, comp).expect("Boolean algebra")
    }

    /// `MO_k`: `0`, `1` and `k` incomparable complementary pairs
    /// `x_i, x_i'`. Element order: `0, x_1, x_1', ..., x_k, x_k', 1`.
    pub fn mo(k: usize) -> Self {
        let n = 2 * k + 2;
        let mut names = vec!["0".to_string()];
        for i in 1..=k {
            names.push(format!("x{i}"));
            names.push(format!("x{i}'"));
        }
        names.push("1".into());
        let comp = (0..n as u32)
            .map(|e| match e {
                0 => n as u32 - 1,
                e if e == n as u32 - 1 => 0,
                e if e % 2 == 1 => e + 1,
                e => e - 1,
            })
            .collect();
        Oml::from_fn(names, |a, b| a == b || a == 0 || b == n - 1, comp).expect("MO_k")
    }

    /// Direct product; element `(x, y)` has index `x * |other| + y`.
    pub fn product(&self, other: &Oml) -> Self {
        let (n, m) = (self.len(), other.len());
        let names = (0..n * m)
            .map(|i| format!("({},{})", self.0.names[i / m], other.0.names[i % m]))
            .collect();
        let comp = (0..n * m)
            .map(|i| self.0.comp[i / m] * m as u32 + other.0.comp[i % m])
            .collect();
        Oml::from_fn(
            names,
            |a, b| self.leq((a / m) as u32, (b / m) as u32) && other.leq((a % m) as u32, (b % m) as u32),
            comp,
        )
        .expect("product of orthomodular lattices")
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn name(&self, x: u32) -> &str {
        &self.0.names[x as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn leq(&self, x: u32, y: u32) -> bool {
        self.0.leq[x as usize * self.len() + y as usize]
    }

    pub fn join(&self, x: u32, y: u32) -> u32 {
        self.0.join[x as usize * self.len() + y as usize]
    }

    pub fn meet(&self, x: u32, y: u32) -> u32 {
        self.0.meet[x as usize * self.len() + y as usize]
    }

    pub fn comp(&self, x: u32) -> u32 {
        self.0.comp[x as usize]
    }

    pub fn bottom(&self) -> u32 {
        self.0.bottom
    }

    pub fn top(&self) -> u32 {
        self.0.top
    }

    pub fn full(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.len() as u32
    }

    /// Elements covering the bottom.
    pub fn atoms(&self) -> Vec<u32> {
        let b = self.bottom();
        self.elements()
            .filter(|&x| x != b && self.elements().all(|y| y == b || y == x || !self.leq(y, x)))
            .collect()
    }

    pub fn is_sub_oml(&self, mask: u32) -> bool {
        let members: Vec<u32> = members(mask);
        mask >> self.bottom() & 1 == 1
            && mask >> self.top() & 1 == 1
            && members.iter().all(|&x| mask >> self.comp(x) & 1 == 1)
            && members
                .iter()
                .all(|&x| members.iter().all(|&y| mask >> self.join(x, y) & 1 == 1))
    }

    /// Smallest sub-OML containing `mask`.
    pub fn generate(&self, mask: u32) -> u32 {
        let mut cur = mask | 1 << self.bottom() | 1 << self.top();
        loop {
            let ms = members(cur);
            let mut next = cur;
            for &x in &ms {
                next |= 1 << self.comp(x);
                for &y in &ms {
                    next |= 1 << self.join(x, y);
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Every sub-OML, in increasing mask order.
    pub fn sub_omls(&self) -> Vec<u32> {
        let fixed = 1u32 << self.bottom() | 1 << self.top();
        let free: Vec<u32> = self.elements().filter(|&x| fixed >> x & 1 == 0).collect();
        let mut out: Vec<u32> = (0..1u64 << free.len())
            .map(|s| {
                free.iter()
                    .enumerate()
                    .filter(|(i, _)| s >> i & 1 == 1)
                    .fold(fixed, |acc, (_, &x)| acc | 1 << x)
            })
            .filter(|&m| self.is_sub_oml(m))
            .collect();
        out.sort_unstable();
        out
    }

    /// The sub-OML on `mask` with its inclusion; element `i` of the result is
    /// the `i`-th smallest member.
    pub fn restrict(&self, mask: u32) -> Result<OmlHom, OmlError> {
        if mask & !self.full() != 0 || !self.is_sub_oml(mask) {
            return Err(OmlError::NotSublattice(mask));
        }
        let ms = members(mask);
        let m = ms.len();
        let pos = |x: u32| ms.iter().position(|&y| y == x).expect("closed") as u32;
        let names = ms.iter().map(|&x| self.0.names[x as usize].clone()).collect();
        let comp = ms.iter().map(|&x| pos(self.comp(x))).collect();
        let sub = Oml::from_fn(names, |a, b| self.leq(ms[a], ms[b]), comp)?;
        debug_assert_eq!(sub.len(), m);
        Ok(OmlHom {
            dom: sub,
            cod: self.clone(),
            table: ms.into(),
        })
    }
}

pub fn members(mask: u32) -> Vec<u32> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// A function between element sets.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OmlHom {
    dom: Oml,
    cod: Oml,
    table: Arc<[u32]>,
}

impl fmt::Debug for OmlHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .table
            .iter()
            .enumerate()
            .map(|(i, &t)| format!("{}->{}", self.dom.name(i as u32), self.cod.name(t)))
            .collect();
        write!(f, "{{{}}}", pairs.join(", "))
    }
}

impl OmlHom {
    pub fn new(dom: &Oml, cod: &Oml, table: Vec<u32>) -> Result<Self, OmlError> {
        if table.len() != dom.len() || table.iter().any(|&t| t as usize >= cod.len()) {
            return Err(OmlError::Shape);
        }
        Ok(OmlHom {
            dom: dom.clone(),
            cod: cod.clone(),
            table: table.into(),
        })
    }

    pub fn dom(&self) -> &Oml {
        &self.dom
    }

    pub fn cod(&self) -> &Oml {
        &self.cod
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn image(&self) -> u32 {
        self.table.iter().fold(0, |acc, &t| acc | 1 << t)
    }

    pub fn is_injective(&self) -> bool {
        self.image().count_ones() as usize == self.dom.len()
    }

    /// Preserves joins and orthocomplements (hence meets and bounds).
    pub fn is_ortho_hom(&self) -> bool {
        let (d, c) = (&self.dom, &self.cod);
        d.elements().all(|x| {
            self.apply(d.comp(x)) == c.comp(self.apply(x))
                && d.elements()
                    .all(|y| self.apply(d.join(x, y)) == c.join(self.apply(x), self.apply(y)))
        })
    }

    pub fn then(&self, g: &OmlHom) -> OmlHom {
        OmlHom {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            table: self.table.iter().map(|&t| g.table[t as usize]).collect(),
        }
    }
}

/// Orthomodular lattices with ortho-homomorphisms (injective ones only when
/// `injective_only`).
#[derive(Debug, Clone)]
pub struct OmlCategory {
    injective_only: bool,
    probes: Vec<Oml>,
}

impl OmlCategory {
    /// Injective ortho-homomorphisms, probing with the Boolean algebras on
    /// 0..=2 atoms.
    pub fn injective() -> Self {
        OmlCategory {
            injective_only: true,
            probes: (0..=2).map(Oml::boolean).collect(),
        }
    }
}

impl FiniteCategory for OmlCategory {
    type Object = Oml;
    type Morphism = OmlHom;

    fn objects(&self) -> Vec<Oml> {
        self.probes.clone()
    }

    fn dom(&self, f: &OmlHom) -> Oml {
        f.dom.clone()
    }

    fn cod(&self, f: &OmlHom) -> Oml {
        f.cod.clone()
    }

    fn identity(&self, x: &Oml) -> OmlHom {
        OmlHom::new(x, x, x.elements().collect()).expect("identity")
    }

    fn compose_unchecked(&self, f: &OmlHom, g: &OmlHom) -> OmlHom {
        f.then(g)
    }

    fn hom_bound(&self, x: &Oml, y: &Oml) -> u128 {
        (y.len() as u128).saturating_pow(x.atoms().len() as u32)
    }

    /// Backtracks over atom images (first atom most significant), pruning by
    /// orthogonality; each element goes to the join of its atoms' images.
    fn hom(&self, x: &Oml, y: &Oml) -> Vec<OmlHom> {
        let atoms = x.atoms();
        // atoms below each element
        let below: Vec<Vec<usize>> = x
            .elements()
            .map(|e| (0..atoms.len()).filter(|&i| x.leq(atoms[i], e)).collect())
            .collect();
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(atoms.len());
        self.backtrack(x, y, &atoms, &below, &mut images, &mut out);
        out
    }

    fn is_hom(&self, f: &OmlHom) -> bool {
        f.is_ortho_hom() && (!self.injective_only || f.is_injective())
    }

    fn pullback(&self, f_a: &OmlHom, f_b: &OmlHom) -> Option<PullbackData<OmlHom>> {
        if f_a.cod != f_b.cod || !f_a.is_injective() || !f_b.is_injective() {
            return None;
        }
        let inc = f_a.cod.restrict(f_a.image() & f_b.image()).ok()?;
        let back = |f: &OmlHom| -> Vec<u32> {
            inc.table
                .iter()
                .map(|&p| f.table.iter().position(|&t| t == p).expect("in image") as u32)
                .collect()
        };
        Some(PullbackData {
            p_a: OmlHom::new(&inc.dom, &f_a.dom, back(f_a)).ok()?,
            p_b: OmlHom::new(&inc.dom, &f_b.dom, back(f_b)).ok()?,
        })
    }
}

impl OmlCategory {
    fn backtrack(
        &self,
        x: &Oml,
        y: &Oml,
        atoms: &[u32],
        below: &[Vec<usize>],
        images: &mut Vec<u32>,
        out: &mut Vec<OmlHom>,
    ) {
        let i = images.len();
        if i == atoms.len() {
            let table = below
                .iter()
                .map(|idx| idx.iter().fold(y.bottom(), |acc, &j| y.join(acc, images[j])))
                .collect();
            let f = OmlHom {
                dom: x.clone(),
                cod: y.clone(),
                table,
            };
            if self.is_hom(&f) {
                out.push(f);
            }
            return;
        }
        for v in y.elements() {
            if self.injective_only && v == y.bottom() {
                continue;
            }
            // orthogonal atoms go to orthogonal elements
            let ok = (0..i).all(|j| !x.leq(atoms[j], x.comp(atoms[i])) || y.leq(images[j], y.comp(v)));
            if ok {
                images.push(v);
                self.backtrack(x, y, atoms, below, images, out);
                images.pop();
            }
        }
    }
}

/// `None` iff every nonzero `a` in `A` meets every nonzero `b` in `B`
/// non-trivially; otherwise the first failing pair by element index.
pub fn logical_independent(c: &Oml, a: u32, b: u32) -> Option<(u32, u32)> {
    let z = c.bottom();
    for x in members(a).into_iter().filter(|&x| x != z) {
        for y in members(b).into_iter().filter(|&y| y != z) {
            if c.meet(x, y) == z {
                return Some((x, y));
            }
        }
    }
    None
}

/// `x δ y`: `(x ∨ z) ∧ y = z ∧ y` for all `z`. Returns the first failing `z`.
pub fn delta(c: &Oml, x: u32, y: u32) -> Option<u32> {
    c.elements()
        .find(|&z| c.meet(c.join(x, z), y) != c.meet(z, y))
}

/// First `(x, y, z)` with `x ∧ y = 0` but `x δ y` failing at `z`.
pub fn delta_weakening_violation(c: &Oml) -> Option<(u32, u32, u32)> {
    for x in c.elements() {
        for y in c.elements() {
            if c.meet(x, y) == c.bottom() {
                if let Some(z) = delta(c, x, y) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum DirectSumFailure {
    /// `x` is not of the form `s ∨ q`.
    Decomposition { x: u32 },
    /// `s δ q` fails at `z`.
    Delta { s: u32, q: u32, z: u32 },
    /// A summand has no greatest element.
    NoSummandTop,
    /// `(s, q) -> s ∨ q` is not injective.
    NotInjective { s1: u32, q1: u32, s2: u32, q2: u32 },
    /// Order is not reflected on the pair of products.
    Order { s1: u32, q1: u32, s2: u32, q2: u32 },
    /// The complement of `s ∨ q` is not the join of relative complements.
    Complement { s: u32, q: u32 },
}

impl fmt::Display for DirectSumFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A verified internal direct sum `C = S ⊕ Q`.
#[derive(Debug, Clone, Serialize)]
pub struct InternalDirectSum {
    pub s: Vec<u32>,
    pub q: Vec<u32>,
    /// `decomposition[x] = (i, j)` with `x = s[i] ∨ q[j]`.
    pub decomposition: Vec<(usize, usize)>,
}

/// Checks that every element is some `s ∨ q`, that `s δ q` for all pairs, and
/// that `(s, q) -> s ∨ q` is an ortho-isomorphism from `S x Q` (with relative
/// complements `s' ∧ 1_S`) onto `C`.
pub fn internal_direct_sum_oml(c: &Oml, s_mask: u32, q_mask: u32) -> Result<InternalDirectSum, OmlError> {
    let fail = |f| Err(OmlError::NotDirectSum(f));
    let (s, q) = (members(s_mask), members(q_mask));
    let mut decomposition = vec![None; c.len()];
    for (i, &a) in s.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            let x = c.join(a, b) as usize;
            if decomposition[x].is_none() {
                decomposition[x] = Some((i, j));
            }
        }
    }
    if let Some(x) = decomposition.iter().position(Option::is_none) {
        return fail(DirectSumFailure::Decomposition { x: x as u32 });
    }
    for &a in &s {
        for &b in &q {
            if let Some(z) = delta(c, a, b) {
                return fail(DirectSumFailure::Delta { s: a, q: b, z });
            }
        }
    }
    let top_of = |xs: &[u32]| xs.iter().copied().find(|&t| xs.iter().all(|&x| c.leq(x, t)));
    let (Some(ts), Some(tq)) = (top_of(&s), top_of(&q)) else {
        return fail(DirectSumFailure::NoSummandTop);
    };
    let pairs: Vec<(u32, u32)> = s.iter().flat_map(|&a| q.iter().map(move |&b| (a, b))).collect();
    for (k, &(s1, q1)) in pairs.iter().enumerate() {
        for &(s2, q2) in &pairs[k + 1..] {
            if c.join(s1, q1) == c.join(s2, q2) {
                return fail(DirectSumFailure::NotInjective { s1, q1, s2, q2 });
            }
        }
    }
    for &(s1, q1) in &pairs {
        for &(s2, q2) in &pairs {
            let product_le = c.leq(s1, s2) && c.leq(q1, q2);
            if product_le != c.leq(c.join(s1, q1), c.join(s2, q2)) {
                return fail(DirectSumFailure::Order { s1, q1, s2, q2 });
            }
        }
        let rel = c.join(c.meet(c.comp(s1), ts), c.meet(c.comp(q1), tq));
        if rel != c.comp(c.join(s1, q1)) {
            return fail(DirectSumFailure::Complement { s: s1, q: q1 });
        }
    }
    Ok(InternalDirectSum {
        s,
        q,
        decomposition: decomposition.into_iter().map(Option::unwrap).collect(),
    })
}

impl InternalDirectSum {
    /// `gamma(s ∨ q) = h_s(s) ∨ h_q(q)`, where `h_s[i]` is the image of
    /// `s[i]` (an element of `C`) and likewise for `h_q`.
    pub fn joint_extension(&self, c: &Oml, h_s: &[u32], h_q: &[u32]) -> Vec<u32> {
        self.decomposition
            .iter()
            .map(|&(i, j)| c.join(h_s[i], h_q[j]))
            .collect()
    }
}

/// The orthocomplemented lattice on the hexagon `0 < a < b < 1`,
/// `0 < b' < a' < 1`; it is not orthomodular.
pub fn benzene() -> Result<Oml, OmlError> {
    let names = ["0", "a", "b", "b'", "a'", "1"].map(String::from).to_vec();
    let chains = [[0usize, 1, 2, 5], [0, 3, 4, 5]];
    let le = |x: usize, y: usize| {
        chains.iter().any(|ch| {
            let (px, py) = (ch.iter().position(|&e| e == x), ch.iter().position(|&e| e == y));
            matches!((px, py), (Some(i), Some(j)) if i <= j)
        })
    };
    Oml::from_fn(names, le, vec![5, 4, 3, 2, 1, 0])
}

/// Order table of the pentagon `0 < a < b < 1`, `0 < c < 1`; element order
/// `0, a, b, c, 1`.
pub fn pentagon_order() -> Vec<bool> {
    let up: [&[usize]; 5] = [&[0, 1, 2, 3, 4], &[1, 2, 4], &[2, 4], &[3, 4], &[4]];
    (0..25).map(|i| up[i / 5].contains(&(i % 5))).collect()
}

/// Named lattices with at most 16 elements.
pub fn corpus() -> Vec<(&'static str, Oml)> {
    vec![
        ("2^0", Oml::boolean(0)),
        ("2^1", Oml::boolean(1)),
        ("2^2", Oml::boolean(2)),
        ("2^3", Oml::boolean(3)),
        ("2^4", Oml::boolean(4)),
        ("MO2", Oml::mo(2)),
        ("MO3", Oml::mo(3)),
        ("MO2x2", Oml::mo(2).product(&Oml::boolean(1))),
    ]
}

/// Exhaustive decision for two sub-OMLs (element masks) of `c`.
pub fn decide_sub_omls(
    c: &Oml,
    a: u32,
    b: u32,
    budget: &Budget,
) -> Result<IndependenceVerdict<OmlHom>, OmlKernelError> {
    let cat = OmlCategory::injective();
    let pair = MonoPair::new(&cat, c.restrict(a)?, c.restrict(b)?)?;
    Ok(decide_mor_independence(&cat, &pair, budget))
}

#[derive(Debug, Error)]
pub enum OmlKernelError {
    #[error(transparent)]
    Oml(#[from] OmlError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{is_monomorphism, verify_pullback, Cospan};

    #[test]
    fn builders_validate() {
        for (name, l) in corpus() {
            assert!(validate_oml(l.len(), &l.0.leq, &l.0.comp).is_ok(), "{name}");
        }
        assert_eq!(Oml::mo(2).len(), 6);
        assert_eq!(Oml::mo(2).product(&Oml::boolean(2)).len(), 24);
    }

    #[test]
    fn pentagon_admits_no_orthocomplement() {
        let leq = pentagon_order();
        let mut comp = vec![0u32; 5];
        for code in 0..5u32.pow(5) {
            for (i, c) in comp.iter_mut().enumerate() {
                *c = code / 5u32.pow(i as u32) % 5;
            }
            assert!(validate_oml(5, &leq, &comp).is_err());
        }
        // the natural attempt fails before the orthomodular law is reached
        let err = validate_oml(5, &leq, &[4, 3, 3, 1, 0]).unwrap_err();
        assert!(matches!(err, OmlViolation::NotInvolutive { .. }));
    }

    #[test]
    fn benzene_violates_orthomodularity() {
        match benzene() {
            Err(OmlError::Invalid(OmlViolation::NotOrthomodular { x, y, got })) => {
                assert_eq!((x, y, got), (1, 2, 1));
            }
            other => panic!("expected orthomodular failure, got {other:?}"),
        }
    }

    #[test]
    fn logical_independence_examples() {
        let mo2 = Oml::mo(2);
        let a = 1 | 1 << 1 | 1 << 2 | 1 << 5;
        let b = 1 | 1 << 3 | 1 << 4 | 1 << 5;
        assert_eq!(logical_independent(&mo2, a, b), Some((1, 3)));
        let triv = 1 | 1 << 5;
        assert_eq!(logical_independent(&mo2, triv, b), None);
    }

    #[test]
    fn delta_weakening_fails_outside_distributive_lattices() {
        for k in 0..=4 {
            assert_eq!(delta_weakening_violation(&Oml::boolean(k)), None);
        }
        // x1 ∧ x1' = 0 in MO2, yet (x1 ∨ x2) ∧ x1' = x1' while x2 ∧ x1' = 0
        assert_eq!(delta_weakening_violation(&Oml::mo(2)), Some((1, 2, 3)));
        let mo2 = Oml::mo(2);
        assert_eq!(mo2.meet(1, 3), mo2.bottom());
        assert_eq!(delta(&mo2, 1, 3), Some(2));
    }

    #[test]
    fn automorphism_counts() {
        let cat = OmlCategory::injective();
        let count = |l: &Oml| cat.hom(l, l).len();
        assert_eq!(count(&Oml::boolean(3)), 6);
        assert_eq!(count(&Oml::mo(2)), 8);
        assert_eq!(count(&Oml::mo(3)), 48);
    }

    #[test]
    fn homs_out_of_the_two_element_algebra() {
        let cat = OmlCategory::injective();
        assert_eq!(cat.hom(&Oml::boolean(1), &Oml::mo(2)).len(), 1);
        // {0, x, x', 1} embeds into MO2 in 2 * 2 ways
        assert_eq!(cat.hom(&Oml::boolean(2), &Oml::mo(2)).len(), 4);
    }

    #[test]
    fn direct_sum_examples() {
        let c = Oml::boolean(3);
        // [0, c1] and [0, c2 ∨ c3]
        let s = 1 | 1 << 0b001;
        let q = 1 | 1 << 0b010 | 1 << 0b100 | 1 << 0b110;
        let sum = internal_direct_sum_oml(&c, s, q).unwrap();
        assert_eq!(sum.decomposition.len(), 8);

        let p = Oml::mo(2).product(&Oml::boolean(2));
        let first = (0..6).fold(0u32, |acc, x| acc | 1 << (x * 4));
        let second = (0..4).fold(0u32, |acc, y| acc | 1 << y);
        internal_direct_sum_oml(&p, first, second).unwrap();

        let mo2 = Oml::mo(2);
        let err = internal_direct_sum_oml(&mo2, mo2.full(), mo2.full()).unwrap_err();
        assert!(matches!(
            err,
            OmlError::NotDirectSum(DirectSumFailure::Delta { .. })
        ));
    }

    #[test]
    fn direct_sum_joint_extension_is_a_hom() {
        let p = Oml::mo(2).product(&Oml::boolean(1));
        let s = (0..6).fold(0u32, |acc, x| acc | 1 << (x * 2));
        let q = 0b11;
        let sum = internal_direct_sum_oml(&p, s, q).unwrap();
        // swap x1 <-> x2 on the MO2 factor, identity on the other
        let swap = [0u32, 3, 4, 1, 2, 5];
        let h_s: Vec<u32> = sum.s.iter().map(|&e| swap[(e / 2) as usize] * 2).collect();
        let h_q = sum.q.clone();
        let gamma = OmlHom::new(&p, &p, sum.joint_extension(&p, &h_s, &h_q)).unwrap();
        assert!(gamma.is_ortho_hom() && gamma.is_injective());
        for (i, &e) in sum.s.iter().enumerate() {
            assert_eq!(gamma.apply(e), h_s[i]);
        }
    }

    #[test]
    fn sub_oml_counts() {
        assert_eq!(Oml::boolean(3).sub_omls().len(), 5);
        assert_eq!(Oml::boolean(4).sub_omls().len(), 15);
        assert_eq!(Oml::mo(2).sub_omls().len(), 4);
        assert_eq!(Oml::mo(3).sub_omls().len(), 8);
    }

    #[test]
    fn inclusions_are_monic_and_pullbacks_verify() {
        let cat = OmlCategory::injective();
        let c = Oml::mo(2);
        let subs = c.sub_omls();
        for &a in &subs {
            for &b in &subs {
                let (fa, fb) = (c.restrict(a).unwrap(), c.restrict(b).unwrap());
                assert!(is_monomorphism(&cat, &fa));
                let span = Cospan::new(&cat, fa.clone(), fb.clone()).unwrap();
                let pb = cat.pullback(&fa, &fb).unwrap();
                verify_pullback(&cat, &span, &pb).unwrap();
            }
        }
    }

    #[test]
    fn generation_case_is_independent() {
        for (name, c) in corpus() {
            let subs = c.sub_omls();
            for &a in &subs {
                for &b in &subs {
                    if logical_independent(&c, a, b).is_none() && c.generate(a | b) == c.full() {
                        let v = decide_sub_omls(&c, a, b, &Budget::default()).unwrap();
                        assert_eq!(v.independent(), Some(true), "{name}: {a:#b} {b:#b}");
                    }
                }
            }
        }
    }

    #[test]
    fn non_orthomodular_payload_names_the_triple() {
        let names = ["0", "a", "b", "b'", "a'", "1"].map(String::from).to_vec();
        let err = Oml::from_fn(names, |x, y| x == y || x == 0 || y == 5 || (x, y) == (1, 2) || (x, y) == (3, 4), vec![5, 4, 3, 2, 1, 0])
            .unwrap_err();
        assert_eq!(err.to_string(), "not an orthomodular lattice: orthomodular law fails: 1 <= 2 but 1 ∨ (1' ∧ 2) = 1");
    }
}
