//! Request schema.
//!
//! A request is one JSON object:
//!
//! ```json
//! {"kind": "finset", "task": "decide", "payload": {...}, "budget": {...}, "tol": 1e-9}
//! ```
//!
//! `task` is optional and, when present, must match the subcommand. `budget`
//! may set any of `max_pairs`, `max_endomorphisms`, `max_checks`. Payloads by kind:
//!
//! - `finset`: `ambient`, `a`, `b` as label lists (`a`, `b` subsets of `ambient`).
//! - `finvect`: prime `p`, `dim`, and `a`, `b` as lists of spanning vectors.
//! - `pregeom`: either `named` (a corpus entry) or `points` plus `closed_sets`
//!   (bit masks); `a`, `b` closed masks.
//! - `bool`: `atoms`; `a`, `b` as atom partitions (block masks); `split` for `adjudicate`.
//! - `oml`: either `named` or `elements`, `order` (pairs `[x, y]` with `x <= y`;
//!   reflexive pairs are implied) and `complement`; `a`, `b` as element index lists.
//! - `opalg`: embeddings `f_a`, `f_b` and operations `alpha_a`, `alpha_b`.
//! - `site`: `site` (regions, embeddings, composites, spacelike), `algebras`,
//!   `maps` (one embedding per site embedding), optional `cover`.
//!
//! Matrices are flat arrays of decimal strings, row-major with real and
//! imaginary parts interleaved: `[re(0,0), im(0,0), re(0,1), im(0,1), ...]`.
//! An embedding is `{"n", "k", "unitary"}` and means `a ↦ U (a ⊗ I_k) U*`;
//! without `unitary` it is `a ⊗ I_k`, or `I_k ⊗ a` with `"second_factor": true`.
//! An operation is `{"n", "choi"}` or `{"n", "kraus": [matrix, ...]}`.

use copossible_core::finset::{FinSet, FinSetMorphism};
use copossible_core::finvect::{FpSpace, Subspace};
use copossible_core::latalg::boolean::Subalgebra;
use copossible_core::latalg::oml::{self, Oml};
use copossible_core::opalg::{decode_matrix, swap_unitary, CMat, CpMap, StarMono, VALIDATION_TOL};
use copossible_core::pregeom::{self, Pregeometry};
use copossible_core::qft::{CausalSite, FunctorAssignment};
use copossible_core::Budget;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Decide,
    Compat,
    Tensor,
    Suite,
    Adjudicate,
    Audit,
    Enumerate,
}

#[derive(Debug)]
pub struct Request {
    pub payload: Payload,
    pub task: Option<Task>,
    pub budget: Option<BudgetOverride>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Finset,
    Finvect,
    Pregeom,
    Bool,
    Oml,
    Opalg,
    Site,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    kind: Kind,
    #[serde(default)]
    payload: serde_json::Value,
    #[serde(default)]
    task: Option<Task>,
    #[serde(default)]
    budget: Option<BudgetOverride>,
    #[serde(default)]
    tol: Option<f64>,
}

#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetOverride {
    pub max_pairs: Option<u128>,
    pub max_endomorphisms: Option<u128>,
    pub max_checks: Option<u128>,
}

impl BudgetOverride {
    pub fn apply(&self, mut b: Budget) -> Budget {
        b.max_pairs = self.max_pairs.unwrap_or(b.max_pairs);
        b.max_endomorphisms = self.max_endomorphisms.unwrap_or(b.max_endomorphisms);
        b.max_checks = self.max_checks.unwrap_or(b.max_checks);
        b
    }
}

#[derive(Debug)]
pub enum Payload {
    Finset(FinsetPayload),
    Finvect(FinvectPayload),
    Pregeom(PregeomPayload),
    Bool(BoolPayload),
    Oml(OmlPayload),
    Opalg(OpalgPayload),
    Site(SitePayload),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Finset(_) => "finset",
            Payload::Finvect(_) => "finvect",
            Payload::Pregeom(_) => "pregeom",
            Payload::Bool(_) => "bool",
            Payload::Oml(_) => "oml",
            Payload::Opalg(_) => "opalg",
            Payload::Site(_) => "site",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinsetPayload {
    pub ambient: Vec<u32>,
    #[serde(default)]
    pub a: Option<Vec<u32>>,
    #[serde(default)]
    pub b: Option<Vec<u32>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinvectPayload {
    pub p: u32,
    pub dim: usize,
    #[serde(default)]
    pub a: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub b: Option<Vec<Vec<u32>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PregeomPayload {
    #[serde(default)]
    pub named: Option<String>,
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub closed_sets: Option<Vec<u32>>,
    #[serde(default)]
    pub a: Option<u32>,
    #[serde(default)]
    pub b: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoolPayload {
    pub atoms: usize,
    #[serde(default)]
    pub a: Option<Vec<u32>>,
    #[serde(default)]
    pub b: Option<Vec<u32>>,
    #[serde(default)]
    pub split: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmlPayload {
    #[serde(default)]
    pub named: Option<String>,
    #[serde(default)]
    pub elements: Option<Vec<String>>,
    #[serde(default)]
    pub order: Option<Vec<[u32; 2]>>,
    #[serde(default)]
    pub complement: Option<Vec<u32>>,
    #[serde(default)]
    pub a: Option<Vec<u32>>,
    #[serde(default)]
    pub b: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoSpec {
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub unitary: Option<Vec<String>>,
    #[serde(default)]
    pub second_factor: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpSpec {
    pub n: usize,
    #[serde(default)]
    pub choi: Option<Vec<String>>,
    #[serde(default)]
    pub kraus: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpalgPayload {
    pub f_a: MonoSpec,
    pub f_b: MonoSpec,
    pub alpha_a: OpSpec,
    pub alpha_b: OpSpec,
    #[serde(default)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpindOverride {
    pub samples: Option<usize>,
    pub kraus_count: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cover {
    pub region: usize,
    pub embeddings: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SitePayload {
    pub site: CausalSite,
    pub algebras: Vec<usize>,
    pub maps: Vec<MonoSpec>,
    #[serde(default)]
    pub cover: Option<Cover>,
    #[serde(default)]
    pub opind: Option<OpindOverride>,
}

/// Parses and schema-checks `text`; errors name the JSON path.
pub fn parse_request(text: &str) -> Result<Request, CliError> {
    let schema = |prefix: &str, e: serde_path_to_error::Error<serde_json::Error>| {
        let inner = e.path().to_string();
        let path = match (prefix, inner.as_str()) {
            (p, ".") => p.to_string(),
            ("", i) => i.to_string(),
            (p, i) => format!("{p}.{i}"),
        };
        CliError::Schema { path, message: e.into_inner().to_string() }
    };
    let de = &mut serde_json::Deserializer::from_str(text);
    let env: Envelope = serde_path_to_error::deserialize(de).map_err(|e| schema("", e))?;
    fn body<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T, serde_path_to_error::Error<serde_json::Error>> {
        serde_path_to_error::deserialize(v)
    }
    let v = env.payload;
    let payload = match env.kind {
        Kind::Finset => body(v).map(Payload::Finset),
        Kind::Finvect => body(v).map(Payload::Finvect),
        Kind::Pregeom => body(v).map(Payload::Pregeom),
        Kind::Bool => body(v).map(Payload::Bool),
        Kind::Oml => body(v).map(Payload::Oml),
        Kind::Opalg => body(v).map(Payload::Opalg),
        Kind::Site => body(v).map(Payload::Site),
    }
    .map_err(|e| schema("payload", e))?;
    let req = Request { payload, task: env.task, budget: env.budget, tol: env.tol };
    validate(&req)?;
    Ok(req)
}

fn invalid(path: &str, message: impl ToString) -> CliError {
    CliError::Schema { path: path.to_string(), message: message.to_string() }
}

/// Structural checks that need the whole payload; run before any computation.
fn validate(req: &Request) -> Result<(), CliError> {
    match &req.payload {
        Payload::Finset(p) => {
            let ambient = FinSet::new(p.ambient.iter().copied()).map_err(|e| invalid("payload.ambient", e))?;
            for (name, side) in [("a", &p.a), ("b", &p.b)] {
                if let Some(s) = side {
                    subset_of(&ambient, s).map_err(|e| invalid(&format!("payload.{name}"), e))?;
                }
            }
        }
        Payload::Finvect(p) => {
            let space = FpSpace::new(p.p, p.dim).map_err(|e| invalid("payload.p", e))?;
            for (name, side) in [("a", &p.a), ("b", &p.b)] {
                if let Some(v) = side {
                    Subspace::span(space, v).map_err(|e| invalid(&format!("payload.{name}"), e))?;
                }
            }
        }
        Payload::Pregeom(p) => {
            let g = p.pregeometry()?;
            for (name, side) in [("a", p.a), ("b", p.b)] {
                if let Some(m) = side {
                    if m & !g.full() != 0 || !g.is_closed(m) {
                        return Err(invalid(&format!("payload.{name}"), format!("{m:#b} is not a closed set")));
                    }
                }
            }
        }
        Payload::Bool(p) => {
            Subalgebra::trivial(p.atoms).map_err(|e| invalid("payload.atoms", e))?;
            for (name, side) in [("a", &p.a), ("b", &p.b)] {
                if let Some(blocks) = side {
                    Subalgebra::from_blocks(p.atoms, blocks.clone()).map_err(|e| invalid(&format!("payload.{name}"), e))?;
                }
            }
        }
        Payload::Oml(p) => {
            let l = p.lattice()?;
            for (name, side) in [("a", &p.a), ("b", &p.b)] {
                if let Some(elems) = side {
                    let mask = p.mask(&l, elems).map_err(|e| invalid(&format!("payload.{name}"), e))?;
                    l.restrict(mask).map_err(|e| invalid(&format!("payload.{name}"), e))?;
                }
            }
        }
        Payload::Opalg(p) => {
            p.f_a.build().map_err(|e| invalid("payload.f_a", e))?;
            p.f_b.build().map_err(|e| invalid("payload.f_b", e))?;
            p.alpha_a.build().map_err(|e| invalid("payload.alpha_a", e))?;
            p.alpha_b.build().map_err(|e| invalid("payload.alpha_b", e))?;
        }
        Payload::Site(p) => {
            p.site.validate().map_err(|e| invalid("payload.site", e))?;
            let f = p.assignment()?;
            f.validate(&p.site).map_err(|e| invalid("payload.maps", e))?;
            if let Some(c) = &p.cover {
                if c.region >= p.site.regions.len() {
                    return Err(invalid("payload.cover.region", format!("unknown region {}", c.region)));
                }
                if let Some(&e) = c.embeddings.iter().find(|&&e| e >= p.site.embeddings.len()) {
                    return Err(invalid("payload.cover.embeddings", format!("unknown embedding {e}")));
                }
            }
        }
    }
    Ok(())
}

pub fn subset_of(ambient: &FinSet, labels: &[u32]) -> Result<FinSetMorphism, String> {
    let s = FinSet::new(labels.iter().copied()).map_err(|e| e.to_string())?;
    FinSetMorphism::inclusion(&s, ambient).map_err(|e| e.to_string())
}

impl PregeomPayload {
    pub fn pregeometry(&self) -> Result<Pregeometry, CliError> {
        match (&self.named, self.points, &self.closed_sets) {
            (Some(name), None, None) => pregeom::corpus()
                .into_iter()
                .find(|(n, _)| n == name)
                .map(|(_, g)| g)
                .ok_or_else(|| invalid("payload.named", format!("unknown pregeometry {name:?}"))),
            (None, Some(points), Some(closed)) => {
                Pregeometry::from_closed_sets(points, closed).map_err(|e| invalid("payload.closed_sets", e))
            }
            _ => Err(invalid("payload", "give either `named` or both `points` and `closed_sets`")),
        }
    }
}

impl OmlPayload {
    pub fn lattice(&self) -> Result<Oml, CliError> {
        match (&self.named, &self.elements, &self.order, &self.complement) {
            (Some(name), None, None, None) => oml::corpus()
                .into_iter()
                .find(|(n, _)| n == name)
                .map(|(_, l)| l)
                .ok_or_else(|| invalid("payload.named", format!("unknown lattice {name:?}"))),
            (None, Some(elements), Some(order), Some(comp)) => {
                let n = elements.len() as u32;
                if let Some(pair) = order.iter().find(|p| p[0] >= n || p[1] >= n) {
                    return Err(invalid("payload.order", format!("pair {pair:?} outside 0..{n}")));
                }
                Oml::from_fn(elements.clone(), |x, y| x == y || order.contains(&[x as u32, y as u32]), comp.clone())
                    .map_err(|e| invalid("payload", e))
            }
            _ => Err(invalid("payload", "give either `named` or `elements`, `order` and `complement`")),
        }
    }

    pub fn mask(&self, l: &Oml, elems: &[u32]) -> Result<u32, String> {
        elems.iter().try_fold(0u32, |m, &e| {
            if (e as usize) < l.len() {
                Ok(m | 1 << e)
            } else {
                Err(format!("element {e} outside 0..{}", l.len()))
            }
        })
    }
}

impl MonoSpec {
    pub fn build(&self) -> Result<StarMono, String> {
        let u = match (&self.unitary, self.second_factor) {
            (Some(data), false) => decode_matrix(self.n * self.k, data)?,
            (Some(_), true) => return Err("`unitary` and `second_factor` are exclusive".into()),
            (None, false) => return StarMono::canonical(self.n, self.k).map_err(|e| e.to_string()),
            (None, true) => swap_unitary(self.k, self.n),
        };
        StarMono::new(self.n, self.k, u).map_err(|e| e.to_string())
    }
}

impl OpSpec {
    pub fn build(&self) -> Result<CpMap, String> {
        let map = match (&self.choi, &self.kraus) {
            (Some(choi), None) => {
                let j = decode_matrix(self.n * self.n, choi)?;
                CpMap::from_choi(self.n, self.n, j).map_err(|e| e.to_string())?
            }
            (None, Some(kraus)) => {
                let ks = kraus
                    .iter()
                    .enumerate()
                    .map(|(i, k)| decode_matrix(self.n, k).map_err(|e| format!("kraus[{i}]: {e}")))
                    .collect::<Result<Vec<CMat>, _>>()?;
                CpMap::from_kraus(&ks).map_err(|e| e.to_string())?
            }
            _ => return Err("give exactly one of `choi` and `kraus`".into()),
        };
        map.validate(VALIDATION_TOL).map_err(|e| e.to_string())?;
        Ok(map)
    }
}

impl SitePayload {
    pub fn assignment(&self) -> Result<FunctorAssignment, CliError> {
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| m.build().map_err(|e| invalid(&format!("payload.maps[{i}]"), e)))
            .collect::<Result<_, _>>()?;
        Ok(FunctorAssignment { algebras: self.algebras.clone(), maps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_finset_request() {
        let r = parse_request(r#"{"kind": "finset", "payload": {"ambient": [1, 2, 3], "a": [1], "b": [2, 3]}}"#).unwrap();
        assert_eq!(r.payload.kind(), "finset");
        assert!(r.task.is_none());
    }

    #[test]
    fn bool_adjudication_request() {
        let r = parse_request(r#"{"kind": "bool", "task": "adjudicate", "payload": {"atoms": 4, "split": 2}}"#).unwrap();
        assert!(matches!(r.payload, Payload::Bool(BoolPayload { atoms: 4, split: Some(2), .. })));
    }

    #[test]
    fn schema_errors_carry_paths() {
        let err = parse_request(r#"{"kind": "finvect", "payload": {"p": 2, "dim": "three"}}"#).unwrap_err();
        match err {
            CliError::Schema { path, .. } => assert_eq!(path, "payload.dim"),
            other => panic!("{other:?}"),
        }
        let err = parse_request(r#"{"kind": "finvect", "payload": {"p": 4, "dim": 2}}"#).unwrap_err();
        assert!(err.to_string().contains("payload.p"), "{err}");
        assert!(parse_request(r#"{"kind": "groups", "payload": {}}"#).is_err());
        assert!(parse_request("{").is_err());
    }

    #[test]
    fn non_orthomodular_oml_names_the_triple() {
        let text = r#"{"kind": "oml", "payload": {
            "elements": ["0", "a", "b", "b'", "a'", "1"],
            "order": [[0,1],[0,2],[0,3],[0,4],[0,5],[1,5],[2,5],[3,5],[4,5],[1,2],[3,4]],
            "complement": [5, 4, 3, 2, 1, 0]}}"#;
        let err = parse_request(text).unwrap_err().to_string();
        assert!(err.contains("orthomodular law fails: 1 <= 2"), "{err}");
    }

    #[test]
    fn embeddings_default_to_tensor_factors() {
        let first = MonoSpec { n: 2, k: 2, unitary: None, second_factor: false }.build().unwrap();
        let second = MonoSpec { n: 2, k: 2, unitary: None, second_factor: true }.build().unwrap();
        let (ca, cb) = copossible_core::opalg::canonical_injections(2, 2).unwrap();
        assert_eq!(first.unitary(), ca.unitary());
        assert_eq!(second.unitary(), cb.unitary());
    }
}
