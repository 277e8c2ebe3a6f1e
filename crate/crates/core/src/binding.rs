//! Recovering the binding group and its fiber action from `Q` alone.

use std::collections::{BTreeMap, VecDeque};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, FinAbelianGroup, GroupElement};
use crate::polygroupoid::{configs_of_size, Config, ElemId, Polygroupoid, PolygroupoidError, StandardModel, HOLE};
use crate::report::{AxiomCheck, AxiomReport, Counterexample};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BindingError {
    #[error(transparent)]
    Structure(#[from] PolygroupoidError),
    #[error("fiber over {0} has no elements")]
    EmptyFiber(Config),
    #[error("transport class of {pair:?} is not a bijection of the fiber: {detail}")]
    NotBijective { pair: (String, String), detail: String },
    #[error("difference law is not well defined: [{first:?}] + [{second:?}] depends on the base point")]
    DifferenceLaw { first: (String, String), second: (String, String) },
    #[error(transparent)]
    Group(#[from] AlgebraError),
    #[error("horn {0:?} has no filler")]
    MissingFiller(Vec<String>),
    #[error("action does not transfer to the fiber over {config}: {detail}")]
    Transfer { config: Config, detail: String },
    #[error("malformed action table: {0}")]
    Malformed(String),
}

/// Partition of `F × F` for one fiber `F`. Pair `(a, b)` of fiber positions
/// has index `a·|F| + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportClass {
    pub fiber: Vec<ElemId>,
    /// Class id of each pair; class ids are the smallest pair index in the class.
    pub class_of: Vec<usize>,
}

impl TransportClass {
    pub fn classes(&self) -> BTreeMap<usize, Vec<(usize, usize)>> {
        let m = self.fiber.len();
        let mut out: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (p, &c) in self.class_of.iter().enumerate() {
            out.entry(c).or_default().push((p / m, p % m));
        }
        out
    }

    pub fn same_class(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        let m = self.fiber.len();
        self.class_of[a.0 * m + a.1] == self.class_of[b.0 * m + b.1]
    }
}

/// Deterministic union-find: the smaller index always becomes the root.
struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// The pair-transport relation on the fiber over `z`, closed over every
/// auxiliary vertex and every slot, with the diagonal added as one class.
pub fn transport_classes(h: &Polygroupoid, z: &Config) -> Result<TransportClass, BindingError> {
    let fiber = h.fiber(z).to_vec();
    if fiber.is_empty() {
        return Err(BindingError::EmptyFiber(z.clone()));
    }
    let m = fiber.len();
    let pos: FxHashMap<ElemId, usize> = fiber.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut uf = UnionFind::new(m * m);
    let by_config = h.q_by_config();
    for x in h.vertices() {
        let Some(c) = z.with_vertex(*x) else { continue };
        let ell = c.position(*x).unwrap();
        let tuples = by_config.get(&c).map_or(&[][..], Vec::as_slice);
        for j in (0..=h.arity()).filter(|&j| j != ell) {
            let uj = h.fiber(&c.without(j));
            // first pair seen per (u, u'), keyed by positions in the slot-j fiber
            let mut first: FxHashMap<(ElemId, ElemId), usize> = FxHashMap::default();
            for t in tuples {
                let a = pos[&t[ell]];
                for &u2 in uj.iter().filter(|&&u2| u2 != t[j]) {
                    let mut horn = t.to_vec();
                    horn[j] = u2;
                    horn[ell] = HOLE;
                    let Some(b) = h.filler(&horn).and_then(|w| pos.get(&w).copied()) else { continue };
                    let p = a * m + b;
                    match first.get(&(t[j], u2)) {
                        Some(&q) => uf.union(q, p),
                        None => {
                            first.insert((t[j], u2), p);
                        }
                    }
                }
            }
        }
    }
    for a in 1..m {
        uf.union(0, a * m + a);
    }
    let class_of = (0..m * m).map(|p| uf.find(p)).collect();
    Ok(TransportClass { fiber, class_of })
}

/// A regular action of `group` on every top-sort fiber of one structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionTable {
    group: FinAbelianGroup,
    configs: Vec<Config>,
    fibers: Vec<Vec<ElemId>>,
    /// `table[f][p][g]`: element of fiber `f` reached from position `p` by group index `g`.
    table: Vec<Vec<Vec<ElemId>>>,
    locate: FxHashMap<ElemId, (usize, usize)>,
}

/// `{"group": ..., "action": {configKey: {elem: {coords: elem'}}}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionJson {
    pub group: FinAbelianGroup,
    pub action: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

impl ActionTable {
    fn from_tables(group: FinAbelianGroup, entries: Vec<(Config, Vec<ElemId>, Vec<Vec<ElemId>>)>) -> Self {
        let mut configs = Vec::new();
        let mut fibers = Vec::new();
        let mut table = Vec::new();
        let mut locate = FxHashMap::default();
        for (f, (c, fiber, t)) in entries.into_iter().enumerate() {
            for (p, &w) in fiber.iter().enumerate() {
                locate.insert(w, (f, p));
            }
            configs.push(c);
            fibers.push(fiber);
            table.push(t);
        }
        Self { group, configs, fibers, table, locate }
    }

    pub fn group(&self) -> &FinAbelianGroup {
        &self.group
    }

    pub fn configs(&self) -> &[Config] {
        &self.configs
    }

    pub fn covers(&self, w: ElemId) -> bool {
        self.locate.contains_key(&w)
    }

    /// `g.w` by group index.
    pub fn act_index(&self, g: usize, w: ElemId) -> ElemId {
        let (f, p) = self.locate[&w];
        self.table[f][p][g]
    }

    pub fn act(&self, g: &GroupElement, w: ElemId) -> ElemId {
        self.act_index(self.group.index_of(g), w)
    }

    /// The unique `γ` with `γ.from = to`, if any.
    pub fn difference(&self, from: ElemId, to: ElemId) -> Option<GroupElement> {
        let (f, p) = *self.locate.get(&from)?;
        self.table[f][p].iter().position(|&w| w == to).map(|g| self.group.element_at(g))
    }

    /// Copy with a single entry `g.w` redirected to `target`.
    pub fn with_entry(&self, g: &GroupElement, w: ElemId, target: ElemId) -> Self {
        let mut out = self.clone();
        let (f, p) = self.locate[&w];
        out.table[f][p][self.group.index_of(g)] = target;
        out
    }

    pub fn to_json(&self, h: &Polygroupoid) -> ActionJson {
        let mut action = BTreeMap::new();
        for ((c, fiber), t) in self.configs.iter().zip(&self.fibers).zip(&self.table) {
            let per: BTreeMap<String, BTreeMap<String, String>> = fiber
                .iter()
                .zip(t)
                .map(|(&w, row)| {
                    let m = row
                        .iter()
                        .enumerate()
                        .map(|(g, &x)| (self.group.element_at(g).key(), h.name(x).to_string()))
                        .collect();
                    (h.name(w).to_string(), m)
                })
                .collect();
            action.insert(c.key(), per);
        }
        ActionJson { group: self.group.clone(), action }
    }

    pub fn from_json(h: &Polygroupoid, j: &ActionJson) -> Result<Self, BindingError> {
        let order = j.group.order().ok_or_else(|| BindingError::Malformed("group must be finite".into()))? as usize;
        let mut entries = Vec::new();
        for (key, per) in &j.action {
            let c = Config::parse_key(key)?;
            let fiber = h.fiber(&c).to_vec();
            if per.len() != fiber.len() {
                return Err(BindingError::Malformed(format!("fiber {key} lists {} of {} elements", per.len(), fiber.len())));
            }
            let mut t = Vec::with_capacity(fiber.len());
            for &w in &fiber {
                let row = per
                    .get(h.name(w))
                    .ok_or_else(|| BindingError::Malformed(format!("missing element {}", h.name(w))))?;
                let mut out = vec![HOLE; order];
                for (coords, target) in row {
                    let raw = coords
                        .split(',')
                        .filter(|s| !s.is_empty())
                        .map(|s| s.trim().parse::<i64>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| BindingError::Malformed(format!("coordinates {coords:?}: {e}")))?;
                    if raw.len() != j.group.rank() {
                        return Err(BindingError::Malformed(format!("coordinates {coords:?} have the wrong length")));
                    }
                    let id = h.id(target).ok_or_else(|| PolygroupoidError::UnknownElement(target.clone()))?;
                    out[j.group.index_of(&j.group.reduce(&raw))] = id;
                }
                if out.contains(&HOLE) {
                    return Err(BindingError::Malformed(format!("incomplete action row for {}", h.name(w))));
                }
                t.push(out);
            }
            entries.push((c, fiber, t));
        }
        Ok(Self::from_tables(j.group.clone(), entries))
    }
}

/// Recovers the binding group from the transport classes over `z` and
/// transfers its action to every other top fiber through `Q`.
pub fn extract(h: &Polygroupoid, z: &Config) -> Result<(FinAbelianGroup, ActionTable), BindingError> {
    let n = h.arity();
    if z.len() != n {
        return Err(PolygroupoidError::Config(format!("{z} is not a top-sort configuration")).into());
    }
    let tc = transport_classes(h, z)?;
    let fiber = &tc.fiber;
    let m = fiber.len();
    let name_pair = |a: usize, b: usize| (h.name(fiber[a]).to_string(), h.name(fiber[b]).to_string());

    // class k is the one containing (0, k); each must be a permutation of F
    let mut perm = vec![vec![usize::MAX; m]; m];
    for k in 0..m {
        let cls = tc.class_of[k];
        for a in 0..m {
            let hits: Vec<usize> = (0..m).filter(|&b| tc.class_of[a * m + b] == cls).collect();
            if hits.len() != 1 {
                return Err(BindingError::NotBijective {
                    pair: name_pair(0, k),
                    detail: format!("{} pairs start at {}", hits.len(), h.name(fiber[a])),
                });
            }
            perm[k][a] = hits[0];
        }
    }
    for b in 0..m {
        if (0..m).filter(|&k| perm[k][0] == b).count() != 1 {
            return Err(BindingError::NotBijective { pair: name_pair(0, b), detail: "classes overlap".into() });
        }
    }
    let diag = tc.class_of[0];
    if let Some(p) = (0..m * m).find(|&p| (tc.class_of[p] == diag) != (p / m == p % m)) {
        return Err(BindingError::NotBijective {
            pair: name_pair(p / m, p % m),
            detail: "identity class is not the diagonal".into(),
        });
    }

    // [(w, w')] + [(w', w'')] = [(w, w'')], checked from every base point
    let mut cayley = vec![vec![0usize; m]; m];
    for a in 0..m {
        for b in 0..m {
            let sum = perm[b][perm[a][0]];
            for w in 0..m {
                if perm[b][perm[a][w]] != perm[sum][w] {
                    return Err(BindingError::DifferenceLaw { first: name_pair(0, a), second: name_pair(a, perm[b][a]) });
                }
            }
            cayley[a][b] = sum;
        }
    }
    let (group, coords) = FinAbelianGroup::from_cayley_table(&cayley)?;

    // group index -> class
    let mut class_at = vec![0usize; m];
    for (k, c) in coords.iter().enumerate() {
        class_at[group.index_of(c)] = k;
    }
    let base_table: Vec<Vec<ElemId>> =
        (0..m).map(|a| (0..m).map(|g| fiber[perm[class_at[g]][a]]).collect()).collect();
    let mut known: BTreeMap<Config, (Vec<ElemId>, Vec<Vec<ElemId>>)> = BTreeMap::new();
    known.insert(z.clone(), (fiber.clone(), base_table));
    transfer(h, &group, z, &mut known)?;
    let table = ActionTable::from_tables(group.clone(), known.into_iter().map(|(c, (f, t))| (c, f, t)).collect());
    Ok((group, table))
}

/// Breadth-first transfer across configurations sharing `n − 1` vertices.
/// For a base `Q`-tuple `T` with known slot `ℓ` and unknown slot `j`, moving
/// `T_ℓ` by `γ` forces `T_j` to move by `(−1)^{ℓ+j+1}γ`.
fn transfer(
    h: &Polygroupoid,
    group: &FinAbelianGroup,
    z: &Config,
    known: &mut BTreeMap<Config, (Vec<ElemId>, Vec<Vec<ElemId>>)>,
) -> Result<(), BindingError> {
    let n = h.arity();
    let order = group.order().unwrap() as usize;
    let by_config = h.q_by_config();
    let mut queue = VecDeque::from([z.clone()]);
    while let Some(y) = queue.pop_front() {
        for x in h.vertices() {
            let Some(c) = y.with_vertex(*x) else { continue };
            let ell = c.position(*x).unwrap();
            for j in (0..=n).filter(|&j| j != ell) {
                let target = c.without(j);
                if known.contains_key(&target) {
                    continue;
                }
                let tfiber = h.fiber(&target).to_vec();
                if tfiber.len() != order {
                    return Err(BindingError::Transfer {
                        config: target,
                        detail: format!("fiber has {} elements, group has {order}", tfiber.len()),
                    });
                }
                let base = by_config.get(&c).and_then(|ts| ts.first()).ok_or_else(|| BindingError::Transfer {
                    config: target.clone(),
                    detail: format!("no Q-tuple over {c}"),
                })?;
                let (yf, yt) = &known[&y];
                let x0 = yf.iter().position(|&w| w == base[ell]).unwrap();
                let sign = if (ell + j) % 2 == 1 { 1 } else { -1 };
                // image[δ] = δ.u0
                let mut image = vec![HOLE; order];
                for g in 0..order {
                    let mut horn = base.to_vec();
                    horn[ell] = yt[x0][g];
                    horn[j] = HOLE;
                    let u = h.filler(&horn).ok_or_else(|| BindingError::MissingFiller(names_with_hole(h, &horn)))?;
                    let d = group.index_of(&group.scale(sign, &group.element_at(g)));
                    image[d] = u;
                }
                let mut seen = image.clone();
                seen.sort_unstable();
                seen.dedup();
                let mut sorted_fiber = tfiber.clone();
                sorted_fiber.sort_unstable();
                if seen != sorted_fiber {
                    return Err(BindingError::Transfer { config: target, detail: "induced map onto the fiber is not a bijection".into() });
                }
                let index_of: FxHashMap<ElemId, usize> = image.iter().enumerate().map(|(d, &u)| (u, d)).collect();
                let t: Vec<Vec<ElemId>> = tfiber
                    .iter()
                    .map(|u| {
                        let du = group.element_at(index_of[u]);
                        (0..order).map(|g| image[group.index_of(&group.add(&group.element_at(g), &du))]).collect()
                    })
                    .collect();
                known.insert(target.clone(), (tfiber, t));
                queue.push_back(target);
            }
        }
    }
    if let Some(c) = configs_of_size(h.vertices(), n).into_iter().find(|c| !known.contains_key(c)) {
        return Err(BindingError::Transfer { config: c, detail: "unreachable from the base fiber".into() });
    }
    Ok(())
}

fn names_with_hole(h: &Polygroupoid, t: &[ElemId]) -> Vec<String> {
    t.iter().map(|&w| if w == HOLE { "_".to_string() } else { h.name(w).to_string() }).collect()
}

/// The translation action of a standard model on its own coordinates.
pub fn native_action(m: &StandardModel) -> ActionTable {
    let g = &m.group;
    let elems: Vec<GroupElement> = g.elements().collect();
    let entries = m
        .structure
        .top_fibers()
        .map(|(c, fiber)| {
            let t = fiber
                .iter()
                .map(|&w| {
                    let x = m.coord(w).unwrap();
                    elems.iter().map(|d| m.element(c, &g.add(x, d)).unwrap()).collect()
                })
                .collect();
            (c.clone(), fiber.to_vec(), t)
        })
        .collect();
    ActionTable::from_tables(g.clone(), entries)
}

fn regularity_defect(act: &ActionTable, f: usize) -> Option<String> {
    let fiber = &act.fibers[f];
    let t = &act.table[f];
    let g = &act.group;
    let order = g.order().unwrap() as usize;
    if fiber.len() != order {
        return Some(format!("fiber has {} elements, group has {order}", fiber.len()));
    }
    let mut sorted = fiber.clone();
    sorted.sort_unstable();
    for (p, row) in t.iter().enumerate() {
        if row.len() != order {
            return Some("action row has the wrong length".into());
        }
        if row[0] != fiber[p] {
            return Some(format!("0 moves position {p}"));
        }
        let mut r = row.clone();
        r.sort_unstable();
        if r != sorted {
            return Some(format!("orbit map at position {p} is not a bijection onto the fiber"));
        }
    }
    let pos: FxHashMap<ElemId, usize> = fiber.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    for a in 0..order {
        for b in 0..order {
            let sum = g.index_of(&g.add(&g.element_at(a), &g.element_at(b)));
            for p in 0..fiber.len() {
                if t[pos[&t[p][b]]][a] != t[p][sum] {
                    return Some(format!("(γ+δ).w ≠ γ.(δ.w) for group indices {a}, {b} at position {p}"));
                }
            }
        }
    }
    None
}

/// Regularity on every fiber, then the exhaustive law
/// `Q(γ_1.w_1, …, γ_{n+1}.w_{n+1}) ⟺ Σ (−1)^i γ_i = 0` over all `Q`-tuples.
pub fn verify_action(h: &Polygroupoid, act: &ActionTable) -> AxiomReport {
    let mut checks = Vec::new();
    let missing = h.top_fibers().find(|(c, _)| !act.configs.contains(c)).map(|(c, _)| c.clone());
    let reg = match missing {
        Some(c) => Some((c, "fiber has no action".to_string())),
        None => (0..act.fibers.len()).find_map(|f| regularity_defect(act, f).map(|d| (act.configs[f].clone(), d))),
    };
    checks.push(match reg {
        None => AxiomCheck::pass("action-regularity", act.fibers.len() as u64),
        Some((c, detail)) => AxiomCheck::fail(
            "action-regularity",
            act.fibers.len() as u64,
            Counterexample::ActionRegularity { config: c.vertices().to_vec(), detail },
        ),
    });
    if !checks[0].passed {
        return AxiomReport::new(checks);
    }

    let g = &act.group;
    let order = g.order().unwrap() as usize;
    let elems: Vec<GroupElement> = g.elements().collect();
    let n1 = h.arity() + 1;
    let mut checked = 0u64;
    let mut failure = None;
    let mut shifted = vec![0; n1];
    'tuples: for t in h.q() {
        let mut idx = vec![0usize; n1];
        loop {
            checked += 1;
            for ((s, &w), &i) in shifted.iter_mut().zip(t).zip(&idx) {
                *s = act.act_index(i, w);
            }
            let sum = g.signed_sum(idx.iter().enumerate().map(|(i, &x)| (if i % 2 == 0 { -1 } else { 1 }, &elems[x])));
            let in_q = h.in_q(&shifted);
            if in_q != (sum == g.zero()) {
                failure = Some(Counterexample::ActionLaw {
                    tuple: h.names_of(t),
                    shifts: idx.iter().map(|&i| elems[i].clone()).collect(),
                    shifted_in_q: in_q,
                });
                break 'tuples;
            }
            if !crate::polygroupoid::advance_odometer(&mut idx, order) {
                break;
            }
        }
    }
    checks.push(match failure {
        None => AxiomCheck::pass("action-law", checked),
        Some(cx) => AxiomCheck::fail("action-law", checked, cx),
    });
    AxiomReport::new(checks)
}

/// True when `cx` is a genuine violation of the action laws for `act`.
pub fn refutes_action(h: &Polygroupoid, act: &ActionTable, cx: &Counterexample) -> bool {
    match cx {
        Counterexample::ActionLaw { tuple, shifts, .. } => {
            let Ok(t) = h.ids_of(tuple) else { return false };
            if !h.in_q(&t) || shifts.len() != t.len() || t.iter().any(|&w| !act.covers(w)) {
                return false;
            }
            let g = &act.group;
            if shifts.iter().any(|s| !g.contains(s)) {
                return false;
            }
            let shifted: Vec<ElemId> = t.iter().zip(shifts).map(|(&w, s)| act.act(s, w)).collect();
            let sum = g.signed_sum(shifts.iter().enumerate().map(|(i, s)| (if i % 2 == 0 { -1 } else { 1 }, s)));
            h.in_q(&shifted) != (sum == g.zero())
        }
        Counterexample::ActionRegularity { config, .. } => {
            let Ok(c) = Config::new(config.clone()) else { return false };
            match act.configs.iter().position(|x| *x == c) {
                Some(f) => regularity_defect(act, f).is_some(),
                None => !h.fiber(&c).is_empty() && c.len() == h.arity(),
            }
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::iso_check;
    use crate::polygroupoid::{scramble, standard};

    fn first_top(h: &Polygroupoid) -> Config {
        h.top_configs().remove(0)
    }

    #[test]
    fn z2_translation() {
        let m = standard(&FinAbelianGroup::cyclic(2), &[0, 1, 2], 2).unwrap();
        let (g, act) = extract(&m.structure, &first_top(&m.structure)).unwrap();
        assert!(iso_check(&g, &FinAbelianGroup::cyclic(2)));
        let one = g.reduce(&[1]);
        for (c, fiber) in m.structure.top_fibers() {
            for &w in fiber {
                let moved = act.act(&one, w);
                assert_eq!(*m.structure.config(moved), *c);
                assert_ne!(moved, w);
            }
        }
        assert!(verify_action(&m.structure, &act).passed());
    }

    #[test]
    fn scrambled_z4_and_trivial() {
        let m = standard(&FinAbelianGroup::cyclic(4), &[0, 1, 2, 3], 2).unwrap();
        let s = scramble(&m.structure, 11);
        let (g, act) = extract(&s, &Config::new(vec![1, 3]).unwrap()).unwrap();
        assert!(iso_check(&g, &FinAbelianGroup::cyclic(4)));
        assert!(verify_action(&s, &act).passed());

        let t = standard(&FinAbelianGroup::trivial(), &[0, 1, 2], 2).unwrap();
        let (g, _) = extract(&t.structure, &first_top(&t.structure)).unwrap();
        assert!(g.is_trivial());
    }

    #[test]
    fn identity_class_is_diagonal() {
        let m = standard(&FinAbelianGroup::from_orders(&[2, 2]).unwrap(), &[0, 1, 2], 2).unwrap();
        let tc = transport_classes(&m.structure, &first_top(&m.structure)).unwrap();
        let classes = tc.classes();
        assert_eq!(classes.len(), 4);
        assert_eq!(classes[&0], (0..4).map(|a| (a, a)).collect::<Vec<_>>());
    }

    #[test]
    fn native_action_and_tampering() {
        let m = standard(&FinAbelianGroup::cyclic(3), &[0, 1, 2, 3], 2).unwrap();
        let act = native_action(&m);
        assert!(verify_action(&m.structure, &act).passed());
        let c = first_top(&m.structure);
        let w = m.structure.fiber(&c)[0];
        let g1 = m.group.reduce(&[1]);
        let bad = act.with_entry(&g1, w, m.structure.fiber(&c)[2]);
        let report = verify_action(&m.structure, &bad);
        assert!(!report.passed());
        assert!(refutes_action(&m.structure, &bad, report.first_counterexample().unwrap()));
        assert!(!refutes_action(&m.structure, &act, report.first_counterexample().unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let m = standard(&FinAbelianGroup::cyclic(2), &[0, 1, 2], 2).unwrap();
        let act = native_action(&m);
        let j = act.to_json(&m.structure);
        let s = serde_json::to_string(&j).unwrap();
        let back: ActionJson = serde_json::from_str(&s).unwrap();
        assert_eq!(ActionTable::from_json(&m.structure, &back).unwrap(), act);
    }
}
