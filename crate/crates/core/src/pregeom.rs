//! Finite pregeometries (matroids) given by an explicit closure table.
//!
//! The ground set is `0..n`; subsets are bitmasks and `closure[z]` is
//! `cl(z)`. Canonical subset order is increasing mask value.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{
    decide_mor_independence, Budget, FiniteCategory, IndependenceVerdict, KernelError, MonoPair,
    PullbackData,
};

pub const MAX_GROUND: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PregeomError {
    #[error("ground set of {0} points exceeds the limit of {MAX_GROUND}")]
    TooLarge(usize),
    #[error("closure table has {got} entries, expected {expected}")]
    TableShape { expected: usize, got: usize },
    #[error("closure table mentions points outside the ground set")]
    OutOfRange,
    #[error("not a pregeometry: {0}")]
    Invalid(Violation),
    #[error("subset {0:#b} is not closed")]
    NotClosed(u32),
    #[error("function table does not match the ground sets")]
    BadFunction,
}

/// The first failing axiom instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    /// `z` is not contained in `cl(z)`.
    Extensive { z: u32 },
    /// `cl(cl(z)) != cl(z)`.
    Idempotent { z: u32 },
    /// `cl(z)` is not contained in `cl(z + x)`.
    Monotone { z: u32, x: u32 },
    /// `a` lies in `cl(z + b) - cl(z)` but `b` is not in `cl(z + a)`.
    Exchange { z: u32, a: u32, b: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Extensive { z } => write!(f, "{z:#b} not inside its closure"),
            Violation::Idempotent { z } => write!(f, "closure of {z:#b} is not closed"),
            Violation::Monotone { z, x } => write!(f, "adding point {x} to {z:#b} shrinks the closure"),
            Violation::Exchange { z, a, b } => {
                write!(f, "exchange fails for {a}, {b} over {z:#b}")
            }
        }
    }
}

/// Checks extensivity, idempotence, monotonicity and exchange over all
/// subsets. Monotonicity is checked on single-point increments, which
/// suffices by transitivity.
pub fn validate_pregeometry(n: usize, closure: &[u32]) -> Result<Option<Violation>, PregeomError> {
    check_shape(n, closure)?;
    for z in 0..(1u32 << n) {
        let c = closure[z as usize];
        if z & !c != 0 {
            return Ok(Some(Violation::Extensive { z }));
        }
        if closure[c as usize] != c {
            return Ok(Some(Violation::Idempotent { z }));
        }
        for x in 0..n as u32 {
            if c & !closure[(z | 1 << x) as usize] != 0 {
                return Ok(Some(Violation::Monotone { z, x }));
            }
        }
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let gained = closure[(z | 1 << b) as usize] & !c;
                if gained >> a & 1 == 1 && closure[(z | 1 << a) as usize] >> b & 1 == 0 {
                    return Ok(Some(Violation::Exchange { z, a, b }));
                }
            }
        }
    }
    Ok(None)
}

fn check_shape(n: usize, closure: &[u32]) -> Result<(), PregeomError> {
    if n > MAX_GROUND {
        return Err(PregeomError::TooLarge(n));
    }
    if closure.len() != 1 << n {
        return Err(PregeomError::TableShape {
            expected: 1 << n,
            got: closure.len(),
        });
    }
    if closure.iter().any(|&c| c >> n != 0) {
        return Err(PregeomError::OutOfRange);
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Pregeometry {
    n: usize,
    closure: Arc<[u32]>,
}

impl fmt::Debug for Pregeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pregeom(n={}, closed={:?})", self.n, self.closed_sets())
    }
}

impl Pregeometry {
    pub fn new(n: usize, closure: Vec<u32>) -> Result<Self, PregeomError> {
        if let Some(v) = validate_pregeometry(n, &closure)? {
            return Err(PregeomError::Invalid(v));
        }
        Ok(Pregeometry {
            n,
            closure: closure.into(),
        })
    }

    /// Closure induced by a family of closed sets: `cl(z)` is the
    /// intersection of the members containing `z` (the full set is implied).
    pub fn from_closed_sets(n: usize, closed: &[u32]) -> Result<Self, PregeomError> {
        if n > MAX_GROUND {
            return Err(PregeomError::TooLarge(n));
        }
        let full = (1u32 << n) - 1;
        let closure = (0..=full)
            .map(|z| {
                closed
                    .iter()
                    .filter(|&&c| z & !c == 0)
                    .fold(full, |acc, &c| acc & c)
            })
            .collect();
        Pregeometry::new(n, closure)
    }

    /// `cl(z) = z`.
    pub fn free(n: usize) -> Self {
        Pregeometry::new(n, (0..1u32 << n).collect()).expect("free pregeometry")
    }

    /// Uniform matroid `U(r, n)`: sets of size below `r` are closed.
    pub fn uniform(r: usize, n: usize) -> Self {
        let full = (1u32 << n) - 1;
        let closure = (0..=full)
            .map(|z| if (z.count_ones() as usize) < r { z } else { full })
            .collect();
        Pregeometry::new(n, closure).expect("uniform matroid")
    }

    /// Linear span on the vectors of `F_2^d`, point `v` being the vector with
    /// bit pattern `v` (so point 0 is the zero vector, a loop).
    pub fn linear_f2(d: usize) -> Self {
        let n = 1usize << d;
        let closure = (0..1u32 << n)
            .map(|z| {
                let mut span = vec![0u32];
                for v in (0..n as u32).filter(|v| z >> v & 1 == 1) {
                    if !span.contains(&v) {
                        let shifted: Vec<u32> = span.iter().map(|s| s ^ v).collect();
                        span.extend(shifted);
                    }
                }
                span.iter().fold(0, |acc, &s| acc | 1 << s)
            })
            .collect();
        Pregeometry::new(n, closure).expect("linear span closure")
    }

    /// Free pregeometry on `n` points in which the points of `loops` lie in
    /// every closed set.
    pub fn free_with_loops(n: usize, loops: u32) -> Self {
        Pregeometry::new(n, (0..1u32 << n).map(|z| z | loops).collect()).expect("loops")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn full(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    pub fn closure(&self, z: u32) -> u32 {
        self.closure[z as usize]
    }

    pub fn closure_table(&self) -> &[u32] {
        &self.closure
    }

    pub fn is_closed(&self, z: u32) -> bool {
        self.closure(z) == z
    }

    pub fn bottom(&self) -> u32 {
        self.closure(0)
    }

    pub fn closed_sets(&self) -> Vec<u32> {
        (0..=self.full()).filter(|&z| self.is_closed(z)).collect()
    }

    /// The sub-pregeometry on a closed subset, with its inclusion map.
    /// Point `i` of the result is the `i`-th smallest point of `y`.
    pub fn restrict(&self, y: u32) -> Result<PregeomMap, PregeomError> {
        if y & !self.full() != 0 || !self.is_closed(y) {
            return Err(PregeomError::NotClosed(y));
        }
        let points: Vec<u32> = (0..self.n as u32).filter(|p| y >> p & 1 == 1).collect();
        let m = points.len();
        let closure = (0..1u32 << m)
            .map(|z| {
                let big = lift(&points, z);
                let c = self.closure(big);
                (0..m).filter(|&i| c >> points[i] & 1 == 1).fold(0, |acc, i| acc | 1 << i)
            })
            .collect();
        let sub = Pregeometry::new(m, closure)?;
        PregeomMap::new(&sub, self, points)
    }
}

fn lift(points: &[u32], z: u32) -> u32 {
    points
        .iter()
        .enumerate()
        .filter(|(i, _)| z >> i & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | 1 << p)
}

/// A function between ground sets, `table[i]` the image of point `i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PregeomMap {
    dom: Pregeometry,
    cod: Pregeometry,
    table: Arc<[u32]>,
}

impl fmt::Debug for PregeomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.table)
    }
}

impl PregeomMap {
    pub fn new(dom: &Pregeometry, cod: &Pregeometry, table: Vec<u32>) -> Result<Self, PregeomError> {
        if table.len() != dom.n || table.iter().any(|&t| t as usize >= cod.n) {
            return Err(PregeomError::BadFunction);
        }
        Ok(PregeomMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table: table.into(),
        })
    }

    pub fn identity(x: &Pregeometry) -> Self {
        PregeomMap::new(x, x, (0..x.n as u32).collect()).expect("identity")
    }

    pub fn dom(&self) -> &Pregeometry {
        &self.dom
    }

    pub fn cod(&self) -> &Pregeometry {
        &self.cod
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn preimage(&self, z: u32) -> u32 {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &t)| z >> t & 1 == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn image(&self, z: u32) -> u32 {
        self.table
            .iter()
            .enumerate()
            .filter(|(i, _)| z >> i & 1 == 1)
            .fold(0, |acc, (_, &t)| acc | 1 << t)
    }

    pub fn is_injective(&self) -> bool {
        self.image(self.dom.full()).count_ones() as usize == self.dom.n
    }

    pub fn then(&self, g: &PregeomMap) -> PregeomMap {
        PregeomMap {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            table: self.table.iter().map(|&t| g.table[t as usize]).collect(),
        }
    }
}

/// `cl_X(f^-1[z]) == f^-1[cl_Y(z)]` for every `z` of the target.
pub fn is_morphism(f: &PregeomMap) -> bool {
    (0..=f.cod.full()).all(|z| f.dom.closure(f.preimage(z)) == f.preimage(f.cod.closure(z)))
}

/// Preimages of closed sets are closed.
pub fn is_continuous(f: &PregeomMap) -> bool {
    f.cod
        .closed_sets()
        .into_iter()
        .all(|w| f.dom.is_closed(f.preimage(w)))
}

/// Which condition singles out the arrows of the category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismReading {
    /// The preimage equation of [`is_morphism`].
    PreimageEquation,
    /// Closed-set continuity, [`is_continuous`].
    Continuity,
}

impl MorphismReading {
    pub fn admits(self, f: &PregeomMap) -> bool {
        match self {
            MorphismReading::PreimageEquation => is_morphism(f),
            MorphismReading::Continuity => is_continuous(f),
        }
    }
}

/// Pregeometries with all admitted maps (`Mor = Hom`).
#[derive(Debug, Clone)]
pub struct PregeomCategory {
    probes: Vec<Pregeometry>,
    reading: MorphismReading,
}

impl PregeomCategory {
    pub fn new(reading: MorphismReading, probes: Vec<Pregeometry>) -> Self {
        PregeomCategory { probes, reading }
    }

    pub fn reading(&self) -> MorphismReading {
        self.reading
    }
}

impl Default for PregeomCategory {
    /// Continuity reading, probing with free pregeometries on 0..=2 points.
    fn default() -> Self {
        PregeomCategory::new(
            MorphismReading::Continuity,
            (0..=2).map(Pregeometry::free).collect(),
        )
    }
}

impl FiniteCategory for PregeomCategory {
    type Object = Pregeometry;
    type Morphism = PregeomMap;

    fn objects(&self) -> Vec<Pregeometry> {
        self.probes.clone()
    }

    fn dom(&self, f: &PregeomMap) -> Pregeometry {
        f.dom.clone()
    }

    fn cod(&self, f: &PregeomMap) -> Pregeometry {
        f.cod.clone()
    }

    fn identity(&self, x: &Pregeometry) -> PregeomMap {
        PregeomMap::identity(x)
    }

    fn compose_unchecked(&self, f: &PregeomMap, g: &PregeomMap) -> PregeomMap {
        f.then(g)
    }

    fn hom_bound(&self, x: &Pregeometry, y: &Pregeometry) -> u128 {
        (y.n as u128).saturating_pow(x.n as u32)
    }

    fn hom(&self, x: &Pregeometry, y: &Pregeometry) -> Vec<PregeomMap> {
        if x.n > 0 && y.n == 0 {
            return Vec::new();
        }
        let mut table = vec![0u32; x.n];
        let mut out = Vec::new();
        loop {
            let f = PregeomMap {
                dom: x.clone(),
                cod: y.clone(),
                table: table.clone().into(),
            };
            if self.reading.admits(&f) {
                out.push(f);
            }
            let mut pos = x.n;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                table[pos] += 1;
                if (table[pos] as usize) < y.n {
                    break;
                }
                table[pos] = 0;
            }
        }
    }

    fn is_hom(&self, f: &PregeomMap) -> bool {
        self.reading.admits(f)
    }

    /// Intersection of the images, when both legs are injective and their
    /// images are closed.
    fn pullback(&self, f_a: &PregeomMap, f_b: &PregeomMap) -> Option<PullbackData<PregeomMap>> {
        if f_a.cod != f_b.cod || !f_a.is_injective() || !f_b.is_injective() {
            return None;
        }
        let c = &f_a.cod;
        let meet = f_a.image(f_a.dom.full()) & f_b.image(f_b.dom.full());
        let inc = c.restrict(meet).ok()?;
        let back = |f: &PregeomMap| -> Vec<u32> {
            inc.table
                .iter()
                .map(|&p| f.table.iter().position(|&t| t == p).expect("in image") as u32)
                .collect()
        };
        Some(PullbackData {
            p_a: PregeomMap::new(&inc.dom, &f_a.dom, back(f_a)).ok()?,
            p_b: PregeomMap::new(&inc.dom, &f_b.dom, back(f_b)).ok()?,
        })
    }
}

/// Independence of closed `a`, `b` in `c` by the intersection criterion,
/// adjusted for the cases where the endomorphism monoids degenerate:
/// two or more loops always obstruct (swapping them on one side), and a
/// single point shared by both sides is independent when there are no loops.
pub fn pregeom_independence_oracle(c: &Pregeometry, a: u32, b: u32) -> Result<bool, PregeomError> {
    for s in [a, b] {
        if s & !c.full() != 0 || !c.is_closed(s) {
            return Err(PregeomError::NotClosed(s));
        }
    }
    let bottom = c.bottom();
    if bottom.count_ones() >= 2 {
        return Ok(false);
    }
    if a & b == bottom {
        return Ok(true);
    }
    Ok(a == b && bottom == 0 && a.count_ones() == 1)
}

/// Exhaustive decision for the inclusions of closed `a` and `b`.
pub fn decide_closed_pair(
    cat: &PregeomCategory,
    c: &Pregeometry,
    a: u32,
    b: u32,
    budget: &Budget,
) -> Result<IndependenceVerdict<PregeomMap>, PregeomKernelError> {
    let pair = MonoPair::new(cat, c.restrict(a)?, c.restrict(b)?)?;
    Ok(decide_mor_independence(cat, &pair, budget))
}

#[derive(Debug, Error)]
pub enum PregeomKernelError {
    #[error(transparent)]
    Pregeom(#[from] PregeomError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Named pregeometries on at most five points.
pub fn corpus() -> Vec<(&'static str, Pregeometry)> {
    vec![
        ("free0", Pregeometry::free(0)),
        ("free1", Pregeometry::free(1)),
        ("free2", Pregeometry::free(2)),
        ("free3", Pregeometry::free(3)),
        ("U(1,2)", Pregeometry::uniform(1, 2)),
        ("U(2,3)", Pregeometry::uniform(2, 3)),
        ("U(2,4)", Pregeometry::uniform(2, 4)),
        ("U(2,5)", Pregeometry::uniform(2, 5)),
        ("lin F2^2", Pregeometry::linear_f2(2)),
        ("free3 with 2 loops", Pregeometry::free_with_loops(3, 0b011)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{disjointness_oracle, FinSet, FinSetMorphism};
    use crate::kernel::{is_monomorphism, verify_pullback, Cospan};
    use proptest::prelude::*;

    #[test]
    fn validation_examples() {
        assert_eq!(validate_pregeometry(3, &(0..8).collect::<Vec<_>>()).unwrap(), None);
        assert_eq!(
            validate_pregeometry(4, Pregeometry::linear_f2(2).closure_table()).unwrap(),
            None
        );
        // cl(Z) = X for Z nonempty on two points
        assert_eq!(validate_pregeometry(2, &[0, 3, 3, 3]).unwrap(), None);
    }

    #[test]
    fn validation_reports_first_violation() {
        assert_eq!(
            validate_pregeometry(1, &[1, 0]).unwrap(),
            Some(Violation::Idempotent { z: 0 })
        );
        // cl({1}) misses the loop 0
        assert_eq!(
            validate_pregeometry(2, &[1, 1, 2, 3]).unwrap(),
            Some(Violation::Monotone { z: 0, x: 1 })
        );
        assert_eq!(
            validate_pregeometry(2, &[0, 3, 2, 3]).unwrap(),
            Some(Violation::Exchange { z: 0, a: 1, b: 0 })
        );
        assert_eq!(
            validate_pregeometry(1, &[0, 0]).unwrap(),
            Some(Violation::Extensive { z: 1 })
        );
        assert!(matches!(
            validate_pregeometry(2, &[0, 1]),
            Err(PregeomError::TableShape { .. })
        ));
    }

    #[test]
    fn morphism_examples() {
        for (_, g) in corpus() {
            assert!(is_morphism(&PregeomMap::identity(&g)));
        }
        let (f2, f3) = (Pregeometry::free(2), Pregeometry::free(3));
        let cat = PregeomCategory::new(MorphismReading::Continuity, vec![]);
        for f in cat.hom(&f2, &f3) {
            assert!(is_morphism(&f));
        }
        assert_eq!(cat.hom(&f2, &f3).len(), 9);
        // two independent points of free3 sent onto a pair whose closure is everything in U(2,3)
        let f = PregeomMap::new(&f3, &Pregeometry::uniform(2, 3), vec![0, 1, 2]).unwrap();
        assert!(!is_morphism(&f));
        // every subset of a free pregeometry is closed, so f is still continuous
        assert!(is_continuous(&f));
        let z = (0..8).find(|&z| f.dom.closure(f.preimage(z)) != f.preimage(f.cod.closure(z)));
        assert_eq!(z, Some(0b011));
    }

    #[test]
    fn preimage_equation_rejects_closed_inclusions() {
        let u = Pregeometry::uniform(2, 4);
        let inc = u.restrict(0b0001).unwrap();
        assert!(!is_morphism(&inc));
        assert!(is_continuous(&inc));
        let lin = Pregeometry::linear_f2(2);
        assert!(!is_morphism(&lin.restrict(0b0011).unwrap()));
    }

    #[test]
    fn non_closed_subsets_are_rejected() {
        let u = Pregeometry::uniform(2, 4);
        assert_eq!(u.restrict(0b0011).unwrap_err(), PregeomError::NotClosed(0b0011));
        assert!(pregeom_independence_oracle(&u, 0b0011, 0).is_err());
    }

    #[test]
    fn oracle_examples() {
        let lin = Pregeometry::linear_f2(2);
        // span{e1} and span{e2}: {0, 1} and {0, 2}
        assert!(pregeom_independence_oracle(&lin, 0b0011, 0b0101).unwrap());
        assert!(!pregeom_independence_oracle(&lin, 0b0011, 0b0011).unwrap());
        let u = Pregeometry::uniform(2, 4);
        assert!(!pregeom_independence_oracle(&u, 0b1111, 0b1111).unwrap());
    }

    #[test]
    fn free_case_matches_finset_oracle() {
        let g = Pregeometry::free(3);
        let x = FinSet::range(3);
        for a in 0..8u32 {
            for b in 0..8u32 {
                let sub = |m: u32| FinSet::new((0..3).filter(|i| m >> i & 1 == 1)).unwrap();
                let fa = FinSetMorphism::inclusion(&sub(a), &x).unwrap();
                let fb = FinSetMorphism::inclusion(&sub(b), &x).unwrap();
                assert_eq!(
                    pregeom_independence_oracle(&g, a, b).unwrap(),
                    disjointness_oracle(&fa, &fb).unwrap(),
                    "{a:#b} {b:#b}"
                );
            }
        }
    }

    #[test]
    fn oracle_agrees_with_exhaustive_search() {
        let cat = PregeomCategory::default();
        for (name, c) in corpus() {
            let closed = c.closed_sets();
            for &a in &closed {
                for &b in &closed {
                    let v = decide_closed_pair(&cat, &c, a, b, &Budget::default()).unwrap();
                    assert_eq!(
                        v.independent(),
                        Some(pregeom_independence_oracle(&c, a, b).unwrap()),
                        "{name}: {a:#b} {b:#b}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_inclusions_are_monic_and_pullbacks_are_intersections() {
        let cat = PregeomCategory::default();
        let c = Pregeometry::linear_f2(2);
        let (fa, fb) = (c.restrict(0b0011).unwrap(), c.restrict(0b0101).unwrap());
        assert!(is_monomorphism(&cat, &fa));
        let span = Cospan::new(&cat, fa.clone(), fb.clone()).unwrap();
        let pb = cat.pullback(&fa, &fb).unwrap();
        assert_eq!(pb.p_a.dom().len(), 1);
        verify_pullback(&cat, &span, &pb).unwrap();
    }

    fn arb_map(g: Pregeometry) -> impl Strategy<Value = PregeomMap> {
        let n = g.len();
        prop::collection::vec(0..n as u32, n)
            .prop_map(move |t| PregeomMap::new(&g, &g, t).unwrap())
    }

    proptest! {
        #[test]
        fn continuous_maps_compose(f in arb_map(Pregeometry::uniform(2, 4)),
                                   g in arb_map(Pregeometry::uniform(2, 4))) {
            if is_continuous(&f) && is_continuous(&g) {
                prop_assert!(is_continuous(&f.then(&g)));
            }
        }

        #[test]
        fn preimage_morphisms_compose(f in arb_map(Pregeometry::linear_f2(2)),
                                      g in arb_map(Pregeometry::linear_f2(2))) {
            if is_morphism(&f) && is_morphism(&g) {
                prop_assert!(is_morphism(&f.then(&g)));
            }
        }
    }
}
