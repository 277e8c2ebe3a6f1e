//! Finite n-ary quasigroupoids and polygroupoids.
//!
//! Sorts are numbered `1..=n`; sort 1 is the vertex set itself. Every element
//! of sort `k` lies over a sorted `k`-configuration of vertices, and for
//! `k ≥ 2` carries its projection tuple `π^k(w)` of `k` elements of sort
//! `k − 1`, where `π^k_j(w)` lies over the configuration with the `j`-th vertex
//! removed. `Q` is an explicit set of `(n+1)`-tuples of top-sort elements.
//!
//! `Q` slots are numbered from 1, matching the alternating-sum law
//! `Σ_{i=1}^{n+1} (−1)^i γ_i = 0`.

mod axioms;
mod standard;
mod symmetry;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use axioms::{check_associativity, check_associativity_all, check_axioms, refutes};
pub use standard::{scramble, standard, StandardModel};
pub(crate) use standard::advance as advance_odometer;
pub use symmetry::{
    check_coherence, induced_automorphism, induced_automorphism_with, Obstruction, Permutation, StructureMap,
};

pub type Vertex = u32;
pub type ElemId = u32;

/// Placeholder for the deleted slot of a horn.
pub const HOLE: ElemId = ElemId::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygroupoidError {
    #[error("arity must be at least 2, got {0}")]
    Arity(usize),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("need at least {needed} vertices, got {got}")]
    TooFewVertices { needed: usize, got: usize },
    #[error("the group must be finite")]
    InfiniteGroup,
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("element {element:?}: {detail}")]
    Malformed { element: String, detail: String },
    #[error("tuple {tuple:?}: {detail}")]
    BadTuple { tuple: Vec<String>, detail: String },
    #[error("tuple mixes sorts")]
    MixedSorts,
    #[error("empty fiber over {0}")]
    EmptyFiber(Config),
    #[error("vertices must be distinct, got {0:?}")]
    RepeatedVertices(Vec<Vertex>),
}

/// A strictly increasing sequence of vertices. Ordered by length, then
/// lexicographically, so configurations of one sort are contiguous.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Config(Vec<Vertex>);

impl TryFrom<Vec<Vertex>> for Config {
    type Error = PolygroupoidError;

    fn try_from(v: Vec<Vertex>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<Config> for Vec<Vertex> {
    fn from(c: Config) -> Self {
        c.0
    }
}

impl Config {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, PolygroupoidError> {
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PolygroupoidError::Config(format!("{vertices:?} is not strictly increasing")));
        }
        Ok(Self(vertices))
    }

    pub fn from_unsorted(mut vertices: Vec<Vertex>) -> Result<Self, PolygroupoidError> {
        vertices.sort_unstable();
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Removes the `i`-th vertex (0-based).
    pub fn without(&self, i: usize) -> Config {
        let mut v = self.0.clone();
        v.remove(i);
        Config(v)
    }

    pub fn without_vertex(&self, x: Vertex) -> Option<Config> {
        self.position(x).map(|i| self.without(i))
    }

    pub fn position(&self, x: Vertex) -> Option<usize> {
        self.0.binary_search(&x).ok()
    }

    pub fn with_vertex(&self, x: Vertex) -> Option<Config> {
        match self.0.binary_search(&x) {
            Ok(_) => None,
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, x);
                Some(Config(v))
            }
        }
    }

    /// Comma-joined key used in JSON files.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        parts.join(",")
    }

    pub fn parse_key(s: &str) -> Result<Self, PolygroupoidError> {
        let v = s
            .split(',')
            .map(|t| t.trim().parse::<Vertex>().map_err(|_| PolygroupoidError::Config(format!("bad key {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(v)
    }
}

impl Ord for Config {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl PartialOrd for Config {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

/// All `k`-element sorted sub-configurations of `vertices`.
pub fn configs_of_size(vertices: &[Vertex], k: usize) -> Vec<Config> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(vs: &[Vertex], start: usize, k: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Config>) {
        if cur.len() == k {
            out.push(Config(cur.clone()));
            return;
        }
        for i in start..vs.len() {
            if vs.len() - i < k - cur.len() {
                break;
            }
            cur.push(vs[i]);
            rec(vs, i + 1, k, cur, out);
            cur.pop();
        }
    }
    if k > 0 {
        rec(vertices, 0, k, &mut cur, &mut out);
    }
    out
}

#[derive(Clone, Debug)]
struct Element {
    name: String,
    config: Config,
    pi: Vec<ElemId>,
}

/// A finite n-ary quasigroupoid, possibly violating its axioms; see
/// [`check_axioms`].
#[derive(Clone, Debug)]
pub struct Polygroupoid {
    arity: usize,
    vertices: Vec<Vertex>,
    elements: Vec<Element>,
    names: HashMap<String, ElemId>,
    fibers: BTreeMap<Config, Vec<ElemId>>,
    q: Vec<Vec<ElemId>>,
    q_set: FxHashSet<Vec<ElemId>>,
    /// Horn (one slot replaced by [`HOLE`]) to the first filler seen in `q`.
    horns: FxHashMap<Vec<ElemId>, ElemId>,
}

/// The JSON instance format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygroupoidJson {
    pub arity: usize,
    pub vertices: Vec<Vertex>,
    pub fibers: BTreeMap<String, Vec<String>>,
    pub pi: BTreeMap<String, Vec<String>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<String>>,
}

impl Polygroupoid {
    /// Assembles an instance from named parts. Fibers are keyed by
    /// configuration; sort-1 fibers are implied by `vertices` and need not be
    /// listed. Only structural problems are errors here; axiom violations are
    /// left for [`check_axioms`].
    pub fn from_parts(
        arity: usize,
        vertices: Vec<Vertex>,
        fibers: BTreeMap<Config, Vec<String>>,
        pi: &BTreeMap<String, Vec<String>>,
        q: &[Vec<String>],
    ) -> Result<Self, PolygroupoidError> {
        if arity < 2 {
            return Err(PolygroupoidError::Arity(arity));
        }
        let mut verts = vertices.clone();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() != vertices.len() {
            return Err(PolygroupoidError::RepeatedVertices(vertices));
        }
        let mut all_fibers: BTreeMap<Config, Vec<String>> =
            verts.iter().map(|v| (Config(vec![*v]), vec![v.to_string()])).collect();
        for (c, mut names) in fibers {
            if c.len() > arity || c.vertices().iter().any(|v| verts.binary_search(v).is_err()) {
                return Err(PolygroupoidError::Config(format!("fiber over {c} is outside the vertex set or above the top sort")));
            }
            if c.len() == 1 {
                if names != [c.0[0].to_string()] {
                    return Err(PolygroupoidError::Config(format!("sort-1 fiber over {c} must be the vertex itself")));
                }
                continue;
            }
            names.sort();
            all_fibers.insert(c, names);
        }

        let mut elements = Vec::new();
        let mut names = HashMap::new();
        let mut fiber_ids = BTreeMap::new();
        for (c, ns) in &all_fibers {
            let mut ids = Vec::with_capacity(ns.len());
            for n in ns {
                let id = elements.len() as ElemId;
                if names.insert(n.clone(), id).is_some() {
                    return Err(PolygroupoidError::DuplicateName(n.clone()));
                }
                elements.push(Element { name: n.clone(), config: c.clone(), pi: Vec::new() });
                ids.push(id);
            }
            fiber_ids.insert(c.clone(), ids);
        }

        let lookup = |n: &str| names.get(n).copied().ok_or_else(|| PolygroupoidError::UnknownElement(n.to_string()));
        for (n, proj) in pi {
            let id = lookup(n)? as usize;
            let sort = elements[id].config.len();
            if sort == 1 {
                return Err(PolygroupoidError::Malformed { element: n.clone(), detail: "vertices have no projections".into() });
            }
            if proj.len() != sort {
                return Err(PolygroupoidError::Malformed {
                    element: n.clone(),
                    detail: format!("sort {sort} needs {sort} projections, got {}", proj.len()),
                });
            }
            elements[id].pi = proj.iter().map(|p| lookup(p)).collect::<Result<_, _>>()?;
        }
        if let Some(e) = elements.iter().find(|e| e.config.len() >= 2 && e.pi.is_empty()) {
            return Err(PolygroupoidError::Malformed { element: e.name.clone(), detail: "missing projection tuple".into() });
        }

        let mut q_ids = Vec::with_capacity(q.len());
        for t in q {
            if t.len() != arity + 1 {
                return Err(PolygroupoidError::BadTuple { tuple: t.clone(), detail: format!("Q needs {} entries", arity + 1) });
            }
            q_ids.push(t.iter().map(|x| lookup(x)).collect::<Result<Vec<_>, _>>()?);
        }
        Ok(Self::assemble(arity, verts, elements, names, fiber_ids, q_ids))
    }

    fn assemble(
        arity: usize,
        vertices: Vec<Vertex>,
        elements: Vec<Element>,
        names: HashMap<String, ElemId>,
        fibers: BTreeMap<Config, Vec<ElemId>>,
        mut q: Vec<Vec<ElemId>>,
    ) -> Self {
        q.sort();
        q.dedup();
        let q_set: FxHashSet<Vec<ElemId>> = q.iter().cloned().collect();
        let mut horns = FxHashMap::default();
        for t in &q {
            for slot in 0..t.len() {
                let mut key = t.clone();
                key[slot] = HOLE;
                horns.entry(key).or_insert(t[slot]);
            }
        }
        Self { arity, vertices, elements, names, fibers, q, q_set, horns }
    }

    /// Same structure with a different `Q`.
    pub fn with_q(&self, q: Vec<Vec<ElemId>>) -> Self {
        Self::assemble(
            self.arity,
            self.vertices.clone(),
            self.elements.clone(),
            self.names.clone(),
            self.fibers.clone(),
            q,
        )
    }

    /// Same structure with the projection tuple of `id` replaced.
    pub fn with_projection(&self, id: ElemId, pi: Vec<ElemId>) -> Self {
        let mut elements = self.elements.clone();
        elements[id as usize].pi = pi;
        Self::assemble(self.arity, self.vertices.clone(), elements, self.names.clone(), self.fibers.clone(), self.q.clone())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn name(&self, id: ElemId) -> &str {
        &self.elements[id as usize].name
    }

    pub fn names_of(&self, ids: &[ElemId]) -> Vec<String> {
        ids.iter().map(|&i| self.name(i).to_string()).collect()
    }

    pub fn id(&self, name: &str) -> Option<ElemId> {
        self.names.get(name).copied()
    }

    pub fn ids_of(&self, names: &[String]) -> Result<Vec<ElemId>, PolygroupoidError> {
        names.iter().map(|n| self.id(n).ok_or_else(|| PolygroupoidError::UnknownElement(n.clone()))).collect()
    }

    pub fn sort(&self, id: ElemId) -> usize {
        self.elements[id as usize].config.len()
    }

    pub fn config(&self, id: ElemId) -> &Config {
        &self.elements[id as usize].config
    }

    /// `π^k(w)`; empty for vertices.
    pub fn projections(&self, id: ElemId) -> &[ElemId] {
        &self.elements[id as usize].pi
    }

    pub fn fiber(&self, c: &Config) -> &[ElemId] {
        self.fibers.get(c).map_or(&[], Vec::as_slice)
    }

    pub fn fibers(&self) -> impl Iterator<Item = (&Config, &[ElemId])> {
        self.fibers.iter().map(|(c, v)| (c, v.as_slice()))
    }

    /// Fibers of the top sort, in configuration order.
    pub fn top_fibers(&self) -> impl Iterator<Item = (&Config, &[ElemId])> {
        self.fibers().filter(move |(c, _)| c.len() == self.arity)
    }

    pub fn top_configs(&self) -> Vec<Config> {
        configs_of_size(&self.vertices, self.arity)
    }

    pub fn q(&self) -> &[Vec<ElemId>] {
        &self.q
    }

    pub fn in_q(&self, tuple: &[ElemId]) -> bool {
        self.q_set.contains(tuple)
    }

    /// The element completing `horn` (one entry set to [`HOLE`]) to a `Q`-tuple.
    pub fn filler(&self, horn: &[ElemId]) -> Option<ElemId> {
        self.horns.get(horn).copied()
    }

    /// `Q`-tuples grouped by the `(n+1)`-configuration they lie over.
    pub fn q_by_config(&self) -> BTreeMap<Config, Vec<&[ElemId]>> {
        let mut out: BTreeMap<Config, Vec<&[ElemId]>> = BTreeMap::new();
        for t in &self.q {
            if let Some(c) = self.tuple_config(t) {
                out.entry(c).or_default().push(t);
            }
        }
        out
    }

    /// The `(k+1)`-configuration a tuple of sort-`k` elements lies over, when
    /// slot `i` sits over it with its `i`-th vertex removed.
    pub fn tuple_config(&self, tuple: &[ElemId]) -> Option<Config> {
        let first = self.config(*tuple.first()?);
        let second = self.config(*tuple.get(1)?);
        // slot 0 misses the smallest vertex, slot 1 keeps it
        let c = first.with_vertex(*second.vertices().first()?)?;
        tuple.iter().enumerate().all(|(i, &w)| *self.config(w) == c.without(i)).then_some(c)
    }

    pub fn to_json(&self) -> PolygroupoidJson {
        let fibers = self
            .fibers
            .iter()
            .filter(|(c, _)| c.len() >= 2)
            .map(|(c, ids)| {
                let mut ns = self.names_of(ids);
                ns.sort();
                (c.key(), ns)
            })
            .collect();
        let pi = self
            .elements
            .iter()
            .filter(|e| !e.pi.is_empty())
            .map(|e| (e.name.clone(), self.names_of(&e.pi)))
            .collect();
        let mut q: Vec<Vec<String>> = self.q.iter().map(|t| self.names_of(t)).collect();
        q.sort();
        PolygroupoidJson { arity: self.arity, vertices: self.vertices.clone(), fibers, pi, q }
    }

    pub fn from_json(j: &PolygroupoidJson) -> Result<Self, PolygroupoidError> {
        let fibers = j
            .fibers
            .iter()
            .map(|(k, v)| Ok((Config::parse_key(k)?, v.clone())))
            .collect::<Result<BTreeMap<_, _>, PolygroupoidError>>()?;
        Self::from_parts(j.arity, j.vertices.clone(), fibers, &j.pi, &j.q)
    }
}

impl Serialize for Polygroupoid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polygroupoid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolygroupoidJson::deserialize(d)?;
        Polygroupoid::from_json(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> PolygroupoidJson {
        serde_json::from_str(
            r#"{"arity":2,"vertices":[0,1,2],
                "fibers":{"0,1":["a"],"0,2":["b"],"1,2":["c"]},
                "pi":{"a":["1","0"],"b":["2","0"],"c":["2","1"]},
                "Q":[["c","b","a"]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn config_order_and_edits() {
        let a = Config::new(vec![0, 5]).unwrap();
        let b = Config::new(vec![0, 1, 2]).unwrap();
        assert!(a < b);
        assert_eq!(b.without(1).vertices(), &[0, 2]);
        assert_eq!(a.with_vertex(3).unwrap().vertices(), &[0, 3, 5]);
        assert!(a.with_vertex(5).is_none());
        assert_eq!(Config::parse_key("0,5").unwrap(), a);
        assert!(Config::parse_key("5,0").is_err());
        assert_eq!(configs_of_size(&[0, 1, 2, 3], 2).len(), 6);
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let h = Polygroupoid::from_json(&tiny()).unwrap();
        let s1 = serde_json::to_string(&h).unwrap();
        let h2: Polygroupoid = serde_json::from_str(&s1).unwrap();
        assert_eq!(s1, serde_json::to_string(&h2).unwrap());
        assert_eq!(h.tuple_config(&h.q()[0]).unwrap().vertices(), &[0, 1, 2]);
    }

    #[test]
    fn structural_errors() {
        let mut j = tiny();
        j.q.push(vec!["a".into(), "zz".into(), "c".into()]);
        assert!(matches!(Polygroupoid::from_json(&j), Err(PolygroupoidError::UnknownElement(_))));

        let mut j = tiny();
        j.pi.remove("a");
        assert!(matches!(Polygroupoid::from_json(&j), Err(PolygroupoidError::Malformed { .. })));

        let mut j = tiny();
        j.fibers.insert("0,3".into(), vec!["d".into()]);
        assert!(matches!(Polygroupoid::from_json(&j), Err(PolygroupoidError::Config(_))));

        let mut j = tiny();
        j.fibers.get_mut("0,2").unwrap().push("a".into());
        assert!(matches!(Polygroupoid::from_json(&j), Err(PolygroupoidError::DuplicateName(_))));

        let mut j = tiny();
        j.arity = 1;
        assert!(matches!(Polygroupoid::from_json(&j), Err(PolygroupoidError::Arity(1))));
    }
}
