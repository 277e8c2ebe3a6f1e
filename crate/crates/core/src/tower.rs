//! Finite directed systems of groups and polygroupoids and their inverse limits.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{kernel_of, AlgebraError, FinAbelianGroup, GroupElement, GroupHom};
use crate::binding::{native_action, ActionTable};
use crate::polygroupoid::{check_axioms, standard, Config, ElemId, Polygroupoid, PolygroupoidError, PolygroupoidJson, StandardModel, Vertex};
use crate::report::{AxiomCheck, AxiomReport, Counterexample};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("{0:?} is not below {1:?}")]
    NotRelated(String, String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Structure(#[from] PolygroupoidError),
    #[error("induced map on {edge} is not well defined: witnesses {first} and {second} disagree at {gamma}")]
    WellDefined { edge: String, first: String, second: String, gamma: String },
    #[error("malformed tower: {0}")]
    Malformed(String),
}

/// A finite poset given by its node names and the pairs `u ≤ v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedPoset {
    nodes: Vec<String>,
    leq: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub nodes: Vec<String>,
    pub leq: Vec<(String, String)>,
}

impl DirectedPoset {
    /// Takes the relation as given; [`check_poset`] validates it.
    pub fn new(nodes: Vec<String>, leq: &[(String, String)]) -> Result<Self, TowerError> {
        let mut seen = BTreeSet::new();
        for n in &nodes {
            if n.contains(',') || !seen.insert(n.clone()) {
                return Err(TowerError::Malformed(format!("node name {n:?} is repeated or contains a comma")));
            }
        }
        let index = |n: &str| nodes.iter().position(|x| x == n).ok_or_else(|| TowerError::UnknownNode(n.into()));
        let leq = leq.iter().map(|(u, v)| Ok((index(u)?, index(v)?))).collect::<Result<_, TowerError>>()?;
        Ok(Self { nodes, leq })
    }

    /// The reflexive-transitive closure of `pairs`.
    pub fn closure(nodes: Vec<String>, pairs: &[(String, String)]) -> Result<Self, TowerError> {
        let mut p = Self::new(nodes, pairs)?;
        let m = p.nodes.len();
        let mut rel = vec![vec![false; m]; m];
        for i in 0..m {
            rel[i][i] = true;
        }
        for &(a, b) in &p.leq {
            rel[a][b] = true;
        }
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    if rel[i][k] && rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
        p.leq = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| rel[i][j]).collect();
        Ok(p)
    }

    /// A chain whose first node is the maximum.
    pub fn chain(nodes: Vec<String>) -> Self {
        let pairs: Vec<(String, String)> = nodes.windows(2).map(|w| (w[1].clone(), w[0].clone())).collect();
        Self::closure(nodes, &pairs).expect("chain node names are distinct")
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn leq(&self, u: &str, v: &str) -> bool {
        match (self.index(u), self.index(v)) {
            (Some(a), Some(b)) => self.leq.contains(&(a, b)),
            _ => false,
        }
    }

    fn index(&self, n: &str) -> Option<usize> {
        self.nodes.iter().position(|x| x == n)
    }

    /// All pairs `(u, v)` with `u ≤ v`, by node name.
    pub fn relations(&self) -> Vec<(String, String)> {
        self.leq.iter().map(|&(a, b)| (self.nodes[a].clone(), self.nodes[b].clone())).collect()
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson { nodes: self.nodes.clone(), leq: self.relations() }
    }
}

fn edge_key(u: &str, v: &str) -> String {
    format!("{u},{v}")
}

fn tower_fail(axiom: &str, checked: u64, location: String, detail: String) -> AxiomCheck {
    AxiomCheck::fail(axiom, checked, Counterexample::Tower { location, detail })
}

/// Reflexivity, antisymmetry, transitivity and directedness.
pub fn check_poset(p: &DirectedPoset) -> AxiomCheck {
    let m = p.nodes.len();
    let r = |a: usize, b: usize| p.leq.contains(&(a, b));
    let name = |a: usize| p.nodes[a].clone();
    let mut checked = 0;
    if m == 0 {
        return tower_fail("poset", 0, "poset".into(), "no nodes".into());
    }
    for a in 0..m {
        checked += 1;
        if !r(a, a) {
            return tower_fail("poset", checked, name(a), "not reflexive".into());
        }
        for b in 0..m {
            if a != b && r(a, b) && r(b, a) {
                return tower_fail("poset", checked, edge_key(&name(a), &name(b)), "not antisymmetric".into());
            }
            if !(0..m).any(|c| r(a, c) && r(b, c)) {
                return tower_fail("poset", checked, edge_key(&name(a), &name(b)), "no common upper bound".into());
            }
            for c in 0..m {
                checked += 1;
                if r(a, b) && r(b, c) && !r(a, c) {
                    return tower_fail("poset", checked, edge_key(&name(a), &name(c)), format!("not transitive through {}", name(b)));
                }
            }
        }
    }
    AxiomCheck::pass("poset", checked)
}

/// Groups `G_u` with bonding maps `χ_{v,u}: G_v → G_u` for `u ≤ v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTower {
    pub poset: DirectedPoset,
    pub groups: BTreeMap<String, FinAbelianGroup>,
    /// Keyed by `(u, v)` with `u ≤ v`.
    pub maps: BTreeMap<(String, String), GroupHom>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTowerJson {
    pub poset: PosetJson,
    pub groups: BTreeMap<String, FinAbelianGroup>,
    pub maps: BTreeMap<String, GroupHom>,
}

impl GroupTower {
    /// `G_0 → G_1 → … → G_{m−1}` along `maps[i]: G_i → G_{i+1}`; node `"0"` is the maximum.
    pub fn chain(groups: &[FinAbelianGroup], maps: &[GroupHom]) -> Result<Self, TowerError> {
        let names: Vec<String> = (0..groups.len()).map(|i| i.to_string()).collect();
        let composites = chain_composites(groups, maps)?;
        let poset = DirectedPoset::chain(names.clone());
        let groups = names.iter().cloned().zip(groups.iter().cloned()).collect();
        let maps = composites.into_iter().map(|((v, u), h)| ((names[u].clone(), names[v].clone()), h)).collect();
        Ok(Self { poset, groups, maps })
    }

    pub fn map(&self, u: &str, v: &str) -> Option<&GroupHom> {
        self.maps.get(&(u.to_string(), v.to_string()))
    }

    pub fn to_json(&self) -> GroupTowerJson {
        GroupTowerJson {
            poset: self.poset.to_json(),
            groups: self.groups.clone(),
            maps: self.maps.iter().map(|((u, v), h)| (edge_key(u, v), h.clone())).collect(),
        }
    }

    pub fn from_json(j: &GroupTowerJson) -> Result<Self, TowerError> {
        let poset = DirectedPoset::new(j.poset.nodes.clone(), &j.poset.leq)?;
        let mut maps = BTreeMap::new();
        for (k, h) in &j.maps {
            let (u, v) = k.split_once(',').ok_or_else(|| TowerError::Malformed(format!("edge key {k:?}")))?;
            maps.insert((u.to_string(), v.to_string()), h.clone());
        }
        Ok(Self { poset, groups: j.groups.clone(), maps })
    }
}

/// Composite maps `G_i → G_j` for `i ≤ j` along a chain, keyed `(i, j)`.
fn chain_composites(groups: &[FinAbelianGroup], maps: &[GroupHom]) -> Result<BTreeMap<(usize, usize), GroupHom>, TowerError> {
    if groups.is_empty() || maps.len() + 1 != groups.len() {
        return Err(TowerError::Malformed(format!("{} groups need {} maps", groups.len(), groups.len().saturating_sub(1))));
    }
    for (i, h) in maps.iter().enumerate() {
        if *h.source() != groups[i] || *h.target() != groups[i + 1] {
            return Err(TowerError::Malformed(format!("map {i} is not {} → {}", groups[i], groups[i + 1])));
        }
        if !h.is_surjective() {
            return Err(TowerError::Malformed(format!("map {i} is not surjective")));
        }
    }
    let mut out = BTreeMap::new();
    for i in 0..groups.len() {
        let mut acc = GroupHom::identity(&groups[i]);
        out.insert((i, i), acc.clone());
        for j in i + 1..groups.len() {
            acc = maps[j - 1].compose(&acc)?;
            out.insert((i, j), acc.clone());
        }
    }
    Ok(out)
}

/// Poset laws, surjective bonds, identities on the diagonal and `χ_{v,u}∘χ_{w,v} = χ_{w,u}`.
pub fn check_group_tower(t: &GroupTower) -> AxiomReport {
    let mut checks = vec![check_poset(&t.poset)];
    let rels = t.poset.relations();
    let mut checked = 0;
    let mut bonds = None;
    for (u, v) in &rels {
        checked += 1;
        let loc = edge_key(u, v);
        let (Some(gu), Some(gv)) = (t.groups.get(u), t.groups.get(v)) else {
            bonds = Some(tower_fail("bonds", checked, loc, "missing group".into()));
            break;
        };
        let Some(h) = t.map(u, v) else {
            bonds = Some(tower_fail("bonds", checked, loc, "missing map".into()));
            break;
        };
        if h.source() != gv || h.target() != gu {
            bonds = Some(tower_fail("bonds", checked, loc, format!("map is not {gv} → {gu}")));
            break;
        }
        if !h.is_surjective() {
            bonds = Some(tower_fail("bonds", checked, loc, format!("image has order {} in {gu}", h.image_order())));
            break;
        }
        if u == v && *h != GroupHom::identity(gu) {
            bonds = Some(tower_fail("bonds", checked, loc, "diagonal map is not the identity".into()));
            break;
        }
    }
    let bonds_ok = bonds.is_none();
    checks.push(bonds.unwrap_or_else(|| AxiomCheck::pass("bonds", checked)));
    if !bonds_ok {
        return AxiomReport::new(checks);
    }
    let mut checked = 0;
    let mut comp = None;
    'outer: for (u, v) in &rels {
        for (v2, w) in &rels {
            if v2 != v {
                continue;
            }
            checked += 1;
            let lhs = t.map(u, v).unwrap().compose(t.map(v, w).unwrap());
            let rhs = t.map(u, w);
            if rhs.is_none() || lhs.as_ref().ok() != rhs {
                comp = Some(tower_fail(
                    "composition",
                    checked,
                    edge_key(u, w),
                    format!("χ({u},{v})∘χ({v},{w}) differs from χ({u},{w})"),
                ));
                break 'outer;
            }
        }
    }
    checks.push(comp.unwrap_or_else(|| AxiomCheck::pass("composition", checked)));
    AxiomReport::new(checks)
}

/// The inverse limit as the kernel of `∏ G_u → ∏_{u<v} G_u`,
/// `(x_u) ↦ (χ_{v,u}(x_v) − x_u)`, with its projection to every node.
pub fn inverse_limit(t: &GroupTower) -> Result<(FinAbelianGroup, BTreeMap<String, GroupHom>), TowerError> {
    let nodes = t.poset.nodes();
    let mut offset = BTreeMap::new();
    let mut src = Vec::new();
    for n in nodes {
        let g = t.groups.get(n).ok_or_else(|| TowerError::UnknownNode(n.clone()))?;
        if !g.is_finite() {
            return Err(TowerError::Malformed(format!("group at {n} is infinite")));
        }
        offset.insert(n.clone(), src.len());
        src.extend_from_slice(g.invariant_factors());
    }
    let mut tgt = Vec::new();
    let mut mat: Vec<Vec<i64>> = Vec::new();
    for (u, v) in t.poset.relations().into_iter().filter(|(u, v)| u != v) {
        let h = t.map(&u, &v).ok_or_else(|| TowerError::NotRelated(u.clone(), v.clone()))?;
        let gu = &t.groups[&u];
        for (i, &d) in gu.invariant_factors().iter().enumerate() {
            let mut row = vec![0i64; src.len()];
            for (j, x) in h.matrix()[i].iter().enumerate() {
                row[offset[&v] + j] += x;
            }
            row[offset[&u] + i] -= 1;
            mat.push(row);
            tgt.push(d);
        }
    }
    let (limit, gens) = if mat.is_empty() {
        crate::algebra::generated_subgroup(&src, &identity_rows(src.len()))
    } else {
        kernel_of(&src, &tgt, &mat)
    };
    let mut projections = BTreeMap::new();
    for n in nodes {
        let g = &t.groups[n];
        let o = offset[n];
        let matrix = (0..g.rank()).map(|i| gens.iter().map(|x| x[o + i]).collect()).collect();
        projections.insert(n.clone(), GroupHom::new(limit.clone(), g.clone(), matrix)?);
    }
    Ok((limit, projections))
}

fn identity_rows(m: usize) -> Vec<Vec<i64>> {
    (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect()
}

/// One group element per node.
pub type Thread = BTreeMap<String, GroupElement>;

pub fn is_thread(t: &GroupTower, thread: &Thread) -> bool {
    t.poset.relations().iter().all(|(u, v)| match (thread.get(u), thread.get(v), t.map(u, v)) {
        (Some(xu), Some(xv), Some(h)) => h.apply(xv) == *xu,
        _ => false,
    })
}

/// Polygroupoids `H_u` on one vertex set with element maps `ρ_{v,u}: H_v → H_u`.
#[derive(Clone, Debug)]
pub struct PolyTower {
    pub poset: DirectedPoset,
    pub nodes: BTreeMap<String, Polygroupoid>,
    /// Keyed by `(u, v)` with `u ≤ v`; top-sort element of `H_v` to element of `H_u`.
    pub rho: BTreeMap<(String, String), BTreeMap<ElemId, ElemId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTowerJson {
    pub poset: PosetJson,
    pub nodes: BTreeMap<String, PolygroupoidJson>,
    pub rho: BTreeMap<String, BTreeMap<String, String>>,
}

impl PolyTower {
    pub fn to_json(&self) -> PolyTowerJson {
        let rho = self
            .rho
            .iter()
            .map(|((u, v), m)| {
                let (hu, hv) = (&self.nodes[u], &self.nodes[v]);
                let names = m.iter().map(|(&a, &b)| (hv.name(a).to_string(), hu.name(b).to_string())).collect();
                (edge_key(u, v), names)
            })
            .collect();
        PolyTowerJson {
            poset: self.poset.to_json(),
            nodes: self.nodes.iter().map(|(k, h)| (k.clone(), h.to_json())).collect(),
            rho,
        }
    }

    pub fn from_json(j: &PolyTowerJson) -> Result<Self, TowerError> {
        let poset = DirectedPoset::new(j.poset.nodes.clone(), &j.poset.leq)?;
        let mut nodes = BTreeMap::new();
        for (k, hj) in &j.nodes {
            if !poset.nodes().contains(k) {
                return Err(TowerError::UnknownNode(k.clone()));
            }
            nodes.insert(k.clone(), Polygroupoid::from_json(hj)?);
        }
        let mut rho = BTreeMap::new();
        for (key, m) in &j.rho {
            let (u, v) = key.split_once(',').ok_or_else(|| TowerError::Malformed(format!("edge key {key:?}")))?;
            let hu = nodes.get(u).ok_or_else(|| TowerError::UnknownNode(u.into()))?;
            let hv = nodes.get(v).ok_or_else(|| TowerError::UnknownNode(v.into()))?;
            let mut ids = BTreeMap::new();
            for (a, b) in m {
                let ia = hv.id(a).ok_or_else(|| PolygroupoidError::UnknownElement(a.clone()))?;
                let ib = hu.id(b).ok_or_else(|| PolygroupoidError::UnknownElement(b.clone()))?;
                ids.insert(ia, ib);
            }
            rho.insert((u.to_string(), v.to_string()), ids);
        }
        Ok(Self { poset, nodes, rho })
    }

    pub fn rho(&self, u: &str, v: &str) -> Option<&BTreeMap<ElemId, ElemId>> {
        self.rho.get(&(u.to_string(), v.to_string()))
    }

    /// Copy with `ρ_{v,u}(w) := target`.
    pub fn with_rho_entry(&self, u: &str, v: &str, w: ElemId, target: ElemId) -> Self {
        let mut out = self.clone();
        out.rho.get_mut(&(u.to_string(), v.to_string())).expect("edge exists").insert(w, target);
        out
    }

    /// `ρ_{v,u}` extended to lower sorts by name.
    fn map_elem(&self, u: &str, v: &str, w: ElemId) -> Option<ElemId> {
        let (hu, hv) = (&self.nodes[u], &self.nodes[v]);
        if hv.sort(w) == hv.arity() {
            self.rho(u, v)?.get(&w).copied()
        } else {
            hu.id(hv.name(w))
        }
    }
}

/// Node axioms, shared vertex sets, fiber-preserving surjective `ρ`,
/// functoriality, commutation with `π`, and `Q`-coherence.
pub fn check_poly_tower(t: &PolyTower) -> AxiomReport {
    let mut checks = vec![check_poset(&t.poset)];
    let rels = t.poset.relations();

    let mut node_fail = None;
    let mut checked = 0;
    let mut vertices: Option<&[Vertex]> = None;
    for n in t.poset.nodes() {
        checked += 1;
        let Some(h) = t.nodes.get(n) else {
            node_fail = Some(tower_fail("node-axioms", checked, n.clone(), "missing polygroupoid".into()));
            break;
        };
        if *vertices.get_or_insert(h.vertices()) != h.vertices() || h.arity() != t.nodes.values().next().unwrap().arity() {
            node_fail = Some(tower_fail("node-axioms", checked, n.clone(), "vertex set or arity differs".into()));
            break;
        }
        if let Some(axiom) = check_axioms(h).failures().next().map(|c| c.axiom.clone()) {
            node_fail = Some(tower_fail("node-axioms", checked, n.clone(), format!("{axiom} fails")));
            break;
        }
    }
    let ok = node_fail.is_none();
    checks.push(node_fail.unwrap_or_else(|| AxiomCheck::pass("node-axioms", checked)));
    if !ok {
        return AxiomReport::new(checks);
    }

    let mut checked = 0;
    let mut fail = None;
    'edges: for (u, v) in &rels {
        let (hu, hv) = (&t.nodes[u], &t.nodes[v]);
        let loc = edge_key(u, v);
        let Some(m) = t.rho(u, v) else {
            fail = Some(tower_fail("rho", checked, loc, "missing map".into()));
            break;
        };
        for (c, fv) in hv.top_fibers() {
            let mut image = BTreeSet::new();
            for &w in fv {
                checked += 1;
                let Some(&x) = m.get(&w) else {
                    fail = Some(tower_fail("rho", checked, loc, format!("{} has no image", hv.name(w))));
                    break 'edges;
                };
                if (x as usize) >= hu.element_count() || hu.config(x) != c {
                    fail = Some(tower_fail("rho", checked, loc, format!("{} leaves its fiber", hv.name(w))));
                    break 'edges;
                }
                if u == v && x != w {
                    fail = Some(tower_fail("rho", checked, loc, format!("diagonal map moves {}", hv.name(w))));
                    break 'edges;
                }
                for (j, &p) in hv.projections(w).iter().enumerate() {
                    if t.map_elem(u, v, p) != Some(hu.projections(x)[j]) {
                        fail = Some(tower_fail("rho", checked, loc, format!("ρ does not commute with π_{} at {}", j + 1, hv.name(w))));
                        break 'edges;
                    }
                }
                image.insert(x);
            }
            if image.len() != hu.fiber(c).len() {
                fail = Some(tower_fail("rho", checked, loc, format!("not surjective onto the fiber over {c}")));
                break 'edges;
            }
        }
    }
    let ok = fail.is_none();
    checks.push(fail.unwrap_or_else(|| AxiomCheck::pass("rho", checked)));
    if !ok {
        return AxiomReport::new(checks);
    }

    let mut checked = 0;
    let mut fail = None;
    'func: for (u, v) in &rels {
        for (v2, w) in &rels {
            if v2 != v {
                continue;
            }
            let (muv, mvw, muw) = (t.rho(u, v).unwrap(), t.rho(v, w).unwrap(), t.rho(u, w).unwrap());
            for (x, y) in mvw {
                checked += 1;
                if muv.get(y) != muw.get(x) {
                    fail = Some(tower_fail(
                        "functoriality",
                        checked,
                        edge_key(u, w),
                        format!("ρ({u},{v})∘ρ({v},{w}) differs at {}", t.nodes[w].name(*x)),
                    ));
                    break 'func;
                }
            }
        }
    }
    let ok = fail.is_none();
    checks.push(fail.unwrap_or_else(|| AxiomCheck::pass("functoriality", checked)));
    if !ok {
        return AxiomReport::new(checks);
    }

    let mut checked = 0;
    let mut fail = None;
    'q: for (u, v) in &rels {
        let (hu, hv) = (&t.nodes[u], &t.nodes[v]);
        let m = t.rho(u, v).unwrap();
        for q in hv.q() {
            checked += 1;
            let img: Vec<ElemId> = q.iter().map(|w| m[w]).collect();
            if !hu.in_q(&img) {
                fail = Some(tower_fail(
                    "q-coherence",
                    checked,
                    edge_key(u, v),
                    format!("image of {:?} is not in Q", hv.names_of(q)),
                ));
                break 'q;
            }
        }
    }
    checks.push(fail.unwrap_or_else(|| AxiomCheck::pass("q-coherence", checked)));
    AxiomReport::new(checks)
}

/// True when re-checking reproduces a failure at the same location.
pub fn refutes_group_tower(t: &GroupTower, cx: &Counterexample) -> bool {
    matches!(cx, Counterexample::Tower { .. }) && check_group_tower(t).failures().any(|c| c.counterexample.as_ref() == Some(cx))
}

pub fn refutes_poly_tower(t: &PolyTower, cx: &Counterexample) -> bool {
    matches!(cx, Counterexample::Tower { .. }) && check_poly_tower(t).failures().any(|c| c.counterexample.as_ref() == Some(cx))
}

/// The unique `χ` with `χ(γ).ρ(w) = ρ(γ.w)`, computed on one witness and
/// confirmed on every top-sort element of `H_v`.
pub fn induced_hom(t: &PolyTower, u: &str, v: &str, act_u: &ActionTable, act_v: &ActionTable) -> Result<GroupHom, TowerError> {
    let edge = edge_key(u, v);
    let m = t.rho(u, v).ok_or_else(|| TowerError::NotRelated(u.into(), v.into()))?;
    let hv = &t.nodes[v];
    let (gu, gv) = (act_u.group(), act_v.group());
    let rho = |w: ElemId| m.get(&w).copied().ok_or_else(|| TowerError::Malformed(format!("{} has no image on {edge}", hv.name(w))));
    let tops: Vec<ElemId> = hv.top_fibers().flat_map(|(_, f)| f.iter().copied()).collect();
    let &w0 = tops.first().ok_or_else(|| TowerError::Malformed("no top-sort elements".into()))?;
    let image_of = |gamma: &GroupElement, w: ElemId| -> Result<Option<GroupElement>, TowerError> {
        Ok(act_u.difference(rho(w)?, rho(act_v.act(gamma, w))?))
    };
    let mut cols = Vec::with_capacity(gv.rank());
    for k in 0..gv.rank() {
        let mut raw = vec![0i64; gv.rank()];
        raw[k] = 1;
        let e = gv.reduce(&raw);
        let x = image_of(&e, w0)?.ok_or_else(|| TowerError::Malformed(format!("ρ on {edge} leaves a fiber")))?;
        cols.push(x.coords().to_vec());
    }
    let matrix = (0..gu.rank()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let chi = GroupHom::new(gv.clone(), gu.clone(), matrix)?;
    for w in tops {
        for gamma in gv.elements() {
            let lhs = act_u.act(&chi.apply(&gamma), rho(w)?);
            if lhs != rho(act_v.act(&gamma, w))? {
                return Err(TowerError::WellDefined {
                    edge,
                    first: hv.name(w0).to_string(),
                    second: hv.name(w).to_string(),
                    gamma: gamma.to_string(),
                });
            }
        }
    }
    Ok(chi)
}

/// The group tower of induced homomorphisms, one action per node.
pub fn induced_group_tower(t: &PolyTower, acts: &BTreeMap<String, ActionTable>) -> Result<GroupTower, TowerError> {
    let mut maps = BTreeMap::new();
    for (u, v) in t.poset.relations() {
        let (au, av) = (
            acts.get(&u).ok_or_else(|| TowerError::UnknownNode(u.clone()))?,
            acts.get(&v).ok_or_else(|| TowerError::UnknownNode(v.clone()))?,
        );
        maps.insert((u.clone(), v.clone()), induced_hom(t, &u, &v, au, av)?);
    }
    let groups = acts.iter().map(|(k, a)| (k.clone(), a.group().clone())).collect();
    Ok(GroupTower { poset: t.poset.clone(), groups, maps })
}

/// Node `"i"` carries `standard(groups[i])`; node `"0"` is the maximum and
/// `ρ` reduces coordinates along the composite of `maps`.
pub fn standard_tower(
    groups: &[FinAbelianGroup],
    maps: &[GroupHom],
    vertices: &[Vertex],
    n: usize,
) -> Result<(PolyTower, Vec<StandardModel>), TowerError> {
    let composites = chain_composites(groups, maps)?;
    let models = groups.iter().map(|g| standard(g, vertices, n)).collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = (0..groups.len()).map(|i| i.to_string()).collect();
    let poset = DirectedPoset::chain(names.clone());
    let mut rho = BTreeMap::new();
    for ((v, u), chi) in &composites {
        let (mv, mu) = (&models[*v], &models[*u]);
        let mut m = BTreeMap::new();
        for (c, fiber) in mv.structure.top_fibers() {
            for &w in fiber {
                let x = chi.apply(mv.coord(w).unwrap());
                m.insert(w, mu.element(c, &x).unwrap());
            }
        }
        rho.insert((names[*u].clone(), names[*v].clone()), m);
    }
    let nodes = names.iter().cloned().zip(models.iter().map(|m| m.structure.clone())).collect();
    Ok((PolyTower { poset, nodes, rho }, models))
}

/// Native translation actions of a standard tower, by node.
pub fn native_actions(models: &[StandardModel]) -> BTreeMap<String, ActionTable> {
    models.iter().enumerate().map(|(i, m)| (i.to_string(), native_action(m))).collect()
}

/// Threads of fiber elements over `c`: one element per node, compatible
/// under every `ρ`. The limit group acts through its projections; the action
/// must be regular on this set.
pub fn check_thread_action(
    t: &PolyTower,
    acts: &BTreeMap<String, ActionTable>,
    limit: &FinAbelianGroup,
    projections: &BTreeMap<String, GroupHom>,
    c: &Config,
) -> AxiomCheck {
    let nodes = t.poset.nodes();
    let rels = t.poset.relations();
    let fail = |checked, detail: String| tower_fail("thread-action", checked, c.key(), detail);
    // backtracking over nodes in order
    let mut threads: Vec<Vec<ElemId>> = Vec::new();
    let mut cur: Vec<ElemId> = Vec::new();
    fn rec(
        t: &PolyTower,
        nodes: &[String],
        rels: &[(String, String)],
        c: &Config,
        cur: &mut Vec<ElemId>,
        out: &mut Vec<Vec<ElemId>>,
    ) {
        let k = cur.len();
        if k == nodes.len() {
            out.push(cur.clone());
            return;
        }
        for &w in t.nodes[&nodes[k]].fiber(c) {
            cur.push(w);
            let ok = rels.iter().all(|(u, v)| {
                let (iu, iv) = (nodes.iter().position(|x| x == u).unwrap(), nodes.iter().position(|x| x == v).unwrap());
                iu.max(iv) > k || t.rho(u, v).and_then(|m| m.get(&cur[iv])) == Some(&cur[iu])
            });
            if ok {
                rec(t, nodes, rels, c, cur, out);
            }
            cur.pop();
        }
    }
    rec(t, nodes, &rels, c, &mut cur, &mut threads);
    let order = limit.order().unwrap_or(0) as usize;
    if threads.len() != order {
        return fail(0, format!("{} threads but the limit has order {order}", threads.len()));
    }
    let index: BTreeMap<&Vec<ElemId>, usize> = threads.iter().enumerate().map(|(i, th)| (th, i)).collect();
    let mut checked = 0;
    for th in &threads {
        let mut hit = vec![false; threads.len()];
        for gamma in limit.elements() {
            checked += 1;
            let moved: Vec<ElemId> =
                nodes.iter().zip(th).map(|(n, &w)| acts[n].act(&projections[n].apply(&gamma), w)).collect();
            match index.get(&moved) {
                Some(&i) if !hit[i] => hit[i] = true,
                Some(_) => return fail(checked, format!("two elements agree on a thread; {gamma} is not free")),
                None => return fail(checked, format!("{gamma} moves a thread off the thread set")),
            }
        }
    }
    AxiomCheck::pass("thread-action", checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::iso_check;

    fn z(m: u64) -> FinAbelianGroup {
        FinAbelianGroup::cyclic(m)
    }

    fn chain842() -> (Vec<FinAbelianGroup>, Vec<GroupHom>) {
        let gs = vec![z(8), z(4), z(2)];
        let maps = vec![GroupHom::reduction(&gs[0], &gs[1]).unwrap(), GroupHom::reduction(&gs[1], &gs[2]).unwrap()];
        (gs, maps)
    }

    #[test]
    fn chain_limit() {
        let (gs, maps) = chain842();
        let t = GroupTower::chain(&gs, &maps).unwrap();
        assert!(check_group_tower(&t).passed());
        let (lim, proj) = inverse_limit(&t).unwrap();
        assert!(iso_check(&lim, &z(8)));
        assert!(proj.values().all(GroupHom::is_surjective));
        let single = GroupTower::chain(&[z(6)], &[]).unwrap();
        assert!(iso_check(&inverse_limit(&single).unwrap().0, &z(6)));
    }

    #[test]
    fn planted_non_surjective_bond() {
        let (gs, maps) = chain842();
        let mut t = GroupTower::chain(&gs, &maps).unwrap();
        let doubled = GroupHom::new(z(4), z(2), vec![vec![0]]).unwrap();
        t.maps.insert(("2".into(), "1".into()), doubled);
        let r = check_group_tower(&t);
        assert!(!r.passed());
        let cx = r.first_counterexample().unwrap();
        assert!(matches!(cx, Counterexample::Tower { location, .. } if location == "2,1"));
        assert!(refutes_group_tower(&t, cx));
    }

    #[test]
    fn diamond_with_maximum() {
        let nodes: Vec<String> = ["a", "b", "c", "top"].iter().map(|s| s.to_string()).collect();
        let pairs: Vec<(String, String)> =
            [("a", "b"), ("a", "c"), ("b", "top"), ("c", "top")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
        let poset = DirectedPoset::closure(nodes, &pairs).unwrap();
        let groups: BTreeMap<String, FinAbelianGroup> =
            [("a", z(1)), ("b", z(2)), ("c", z(2)), ("top", z(4))].into_iter().map(|(k, g)| (k.to_string(), g)).collect();
        let mut maps = BTreeMap::new();
        for (u, v) in poset.relations() {
            maps.insert((u.clone(), v.clone()), GroupHom::reduction(&groups[&v], &groups[&u]).unwrap_or_else(|_| {
                GroupHom::new(groups[&v].clone(), groups[&u].clone(), vec![]).unwrap()
            }));
        }
        let t = GroupTower { poset, groups, maps };
        assert!(check_group_tower(&t).passed(), "{}", check_group_tower(&t).to_text());
        assert!(iso_check(&inverse_limit(&t).unwrap().0, &z(4)));
    }

    #[test]
    fn standard_tower_pipeline() {
        let (gs, maps) = chain842();
        let (pt, models) = standard_tower(&gs, &maps, &[0, 1, 2, 3], 2).unwrap();
        let r = check_poly_tower(&pt);
        assert!(r.passed(), "{}", r.to_text());
        let acts = native_actions(&models);
        let gt = induced_group_tower(&pt, &acts).unwrap();
        assert_eq!(gt.map("1", "0").unwrap(), &maps[0]);
        assert_eq!(gt.map("2", "1").unwrap(), &maps[1]);
        let (lim, proj) = inverse_limit(&gt).unwrap();
        assert!(iso_check(&lim, &z(8)));
        let c = Config::new(vec![0, 1]).unwrap();
        assert!(check_thread_action(&pt, &acts, &lim, &proj, &c).passed);

        let json = serde_json::to_string(&pt.to_json()).unwrap();
        let back = PolyTower::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), json);
    }

    #[test]
    fn tampered_rho() {
        let gs = vec![z(4), z(2)];
        let maps = vec![GroupHom::reduction(&gs[0], &gs[1]).unwrap()];
        let (pt, models) = standard_tower(&gs, &maps, &[0, 1, 2], 2).unwrap();
        let acts = native_actions(&models);
        assert_eq!(induced_hom(&pt, "1", "1", &acts["1"], &acts["1"]).unwrap(), GroupHom::identity(&gs[1]));
        let c = Config::new(vec![1, 2]).unwrap();
        let w = pt.nodes["0"].fiber(&c)[1];
        let (a, b) = (pt.nodes["1"].fiber(&c)[0], pt.nodes["1"].fiber(&c)[1]);
        let target = if pt.rho("1", "0").unwrap()[&w] == a { b } else { a };
        let bad = pt.with_rho_entry("1", "0", w, target);
        assert!(matches!(induced_hom(&bad, "1", "0", &acts["1"], &acts["0"]), Err(TowerError::WellDefined { .. })));
        let r = check_poly_tower(&bad);
        assert!(!r.passed());
        assert!(refutes_poly_tower(&bad, r.first_counterexample().unwrap()));
    }
}
