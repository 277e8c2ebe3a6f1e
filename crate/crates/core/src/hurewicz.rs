//! The ε-homomorphism from simplex data to the binding group and the
//! staged `H_n ≅ G` verdict.
//!
//! Faces are numbered from 0; face `i` feeds `Q` slot `i + 1`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{iso_check, FinAbelianGroup, GroupElement};
use crate::binding::{extract, verify_action, ActionTable, BindingError};
use crate::polygroupoid::{configs_of_size, Config, ElemId, Polygroupoid};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HurewiczError {
    #[error(transparent)]
    Binding(#[from] BindingError),
    #[error("{count} group elements close the tuple {tuple:?}; expected exactly one")]
    Epsilon { tuple: Vec<String>, count: usize },
    #[error("malformed simplex datum: {0}")]
    Malformed(String),
    #[error("data do not share vertices and faces")]
    FaceMismatch,
}

/// A selector element standing for one face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractFace {
    pub id: String,
    pub config: Config,
    pub selector: ElemId,
}

impl AbstractFace {
    pub fn new(h: &Polygroupoid, id: impl Into<String>, selector: ElemId) -> Self {
        Self { id: id.into(), config: h.config(selector).clone(), selector }
    }
}

/// Shadow of an n-simplex: one face per vertex omitted, each with a twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexDatum {
    pub vertices: Config,
    pub faces: Vec<AbstractFace>,
    pub twists: Vec<GroupElement>,
}

impl SimplexDatum {
    pub fn new(
        h: &Polygroupoid,
        act: &ActionTable,
        vertices: Config,
        faces: Vec<AbstractFace>,
        twists: Vec<GroupElement>,
    ) -> Result<Self, HurewiczError> {
        let d = Self { vertices, faces, twists };
        d.validate(h, act)?;
        Ok(d)
    }

    fn validate(&self, h: &Polygroupoid, act: &ActionTable) -> Result<(), HurewiczError> {
        let n = h.arity();
        if self.vertices.len() != n + 1 || self.faces.len() != n + 1 || self.twists.len() != n + 1 {
            return Err(HurewiczError::Malformed(format!("an {n}-simplex needs {} vertices, faces and twists", n + 1)));
        }
        for (i, f) in self.faces.iter().enumerate() {
            if f.config != self.vertices.without(i) || *h.config(f.selector) != f.config {
                return Err(HurewiczError::Malformed(format!("face {i} ({}) is not over {}", f.id, self.vertices.without(i))));
            }
            if !act.group().contains(&self.twists[i]) {
                return Err(HurewiczError::Malformed(format!("twist {i} is not in {}", act.group())));
            }
        }
        if !matches!(h.is_compatible(&self.embedded_all(act)), Ok(true)) {
            return Err(HurewiczError::Malformed("embedded faces are not compatible".into()));
        }
        Ok(())
    }

    /// `twists[i].selector_i`.
    pub fn embedded(&self, act: &ActionTable, i: usize) -> ElemId {
        act.act(&self.twists[i], self.faces[i].selector)
    }

    pub fn embedded_all(&self, act: &ActionTable) -> Vec<ElemId> {
        (0..self.faces.len()).map(|i| self.embedded(act, i)).collect()
    }
}

/// Shadow of an (n+1)-simplex: one face and twist per pair `{a < b}` of its
/// `n + 2` vertices, over the vertices minus both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoSimplexDatum {
    pub vertices: Config,
    pub pairs: BTreeMap<(usize, usize), (AbstractFace, GroupElement)>,
}

impl CoSimplexDatum {
    pub fn new(vertices: Config, pairs: BTreeMap<(usize, usize), (AbstractFace, GroupElement)>) -> Result<Self, HurewiczError> {
        let m = vertices.len();
        for a in 0..m {
            for b in a + 1..m {
                let (f, _) = pairs.get(&(a, b)).ok_or_else(|| HurewiczError::Malformed(format!("missing pair ({a}, {b})")))?;
                if f.config != vertices.without(b).without(a) {
                    return Err(HurewiczError::Malformed(format!("pair ({a}, {b}) face is over {}", f.config)));
                }
            }
        }
        if pairs.len() != m * (m - 1) / 2 {
            return Err(HurewiczError::Malformed("extra pairs".into()));
        }
        Ok(Self { vertices, pairs })
    }
}

/// `∂^j h`: the datum over the vertices minus the `j`-th. Face `k` is the pair
/// `{j, m}` with `m = k` for `k < j` and `m = k + 1` otherwise.
pub fn co_face(h: &CoSimplexDatum, j: usize) -> SimplexDatum {
    let m = h.vertices.len();
    assert!(j < m, "co-face index {j} out of range");
    let (faces, twists) = (0..m - 1)
        .map(|k| {
            let other = if k < j { k } else { k + 1 };
            h.pairs[&(j.min(other), j.max(other))].clone()
        })
        .unzip();
    SimplexDatum { vertices: h.vertices.without(j), faces, twists }
}

/// The unique `γ` with `Q(e_0, …, e_{n−1}, γ.e_n)`, found by exhaustive search.
pub fn epsilon(h: &Polygroupoid, act: &ActionTable, g: &SimplexDatum) -> Result<GroupElement, HurewiczError> {
    let mut t = g.embedded_all(act);
    let n = t.len() - 1;
    let last = t[n];
    let order = act.group().order().unwrap() as usize;
    let mut found = None;
    let mut count = 0;
    for i in 0..order {
        t[n] = act.act_index(i, last);
        if h.in_q(&t) {
            count += 1;
            found.get_or_insert(i);
        }
    }
    match (count, found) {
        (1, Some(i)) => Ok(act.group().element_at(i)),
        _ => {
            t[n] = last;
            Err(HurewiczError::Epsilon { tuple: h.names_of(&t), count })
        }
    }
}

/// Linear extension of ε to a formal combination of data.
pub fn epsilon_chain(h: &Polygroupoid, act: &ActionTable, terms: &[(i64, &SimplexDatum)]) -> Result<GroupElement, HurewiczError> {
    let values = terms.iter().map(|(_, g)| epsilon(h, act, g)).collect::<Result<Vec<_>, _>>()?;
    Ok(act.group().signed_sum(terms.iter().zip(&values).map(|((k, _), v)| (*k, v))))
}

/// `Σ_j (−1)^j ε(∂^j h) = 0`.
pub fn check_boundary_zero(h: &Polygroupoid, act: &ActionTable, co: &CoSimplexDatum) -> Result<bool, HurewiczError> {
    let faces: Vec<SimplexDatum> = (0..co.vertices.len()).map(|j| co_face(co, j)).collect();
    let terms: Vec<(i64, &SimplexDatum)> = faces.iter().enumerate().map(|(j, f)| (sign(j), f)).collect();
    Ok(epsilon_chain(h, act, &terms)? == act.group().zero())
}

fn sign(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Twist differences `δ_i = τ'_i − τ_i` when `Σ (−1)^i δ_i = 0`.
pub fn natural_iso(
    group: &FinAbelianGroup,
    g: &SimplexDatum,
    g2: &SimplexDatum,
) -> Result<Option<Vec<GroupElement>>, HurewiczError> {
    if g.vertices != g2.vertices || g.faces != g2.faces || g.twists.len() != g2.twists.len() {
        return Err(HurewiczError::FaceMismatch);
    }
    let delta: Vec<GroupElement> = g.twists.iter().zip(&g2.twists).map(|(a, b)| group.sub(b, a)).collect();
    let sum = group.signed_sum(delta.iter().enumerate().map(|(i, d)| (sign(i), d)));
    Ok((sum == group.zero()).then_some(delta))
}

/// Shifts the last twist by `−γ`, which raises ε by `γ`.
pub fn twist_by(group: &FinAbelianGroup, g: &SimplexDatum, gamma: &GroupElement) -> SimplexDatum {
    let mut out = g.clone();
    let n = out.twists.len() - 1;
    out.twists[n] = group.sub(&out.twists[n], gamma);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageResult {
    pub passed: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl StageResult {
    fn pass(checked: u64) -> Self {
        Self { passed: true, checked, witness: None }
    }

    fn fail(checked: u64, witness: String) -> Self {
        Self { passed: false, checked, witness: Some(witness) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub stages: BTreeMap<String, StageResult>,
    pub group: Option<FinAbelianGroup>,
    pub pocket_group: Option<FinAbelianGroup>,
    pub isomorphic: bool,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.isomorphic && self.stages.values().all(|s| s.passed)
    }

    pub fn first_failed_stage(&self) -> Option<(&str, &StageResult)> {
        STAGES.iter().find_map(|&s| self.stages.get(s).filter(|r| !r.passed).map(|r| (s, r)))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in STAGES {
            if let Some(r) = self.stages.get(s) {
                out.push_str(&format!("{} {s} ({} checked)\n", if r.passed { "PASS" } else { "FAIL" }, r.checked));
                if let Some(w) = &r.witness {
                    out.push_str(&format!("  witness: {w}\n"));
                }
            }
        }
        let show = |g: &Option<FinAbelianGroup>| g.as_ref().map_or("-".to_string(), ToString::to_string);
        out.push_str(&format!("group ≅ {}\npocket_group ≅ {}\n", show(&self.group), show(&self.pocket_group)));
        out.push_str(&format!("verdict: {}\n", if self.passed() { "PASS" } else { "FAIL" }));
        out
    }
}

pub const STAGES: [&str; 5] = ["extract", "boundary-vanishing", "injectivity", "surjectivity", "pocket-group"];

/// Grids up to this many twist assignments per configuration are enumerated.
pub const EXHAUSTIVE_LIMIT: u64 = 8192;
/// Minimum total number of sampled co-simplices when enumeration is too large.
pub const MIN_SAMPLES: u64 = 10_000;

/// Data over `c` whose faces select the first element of each fiber.
fn base_faces(h: &Polygroupoid, c: &Config) -> Vec<AbstractFace> {
    (0..c.len())
        .map(|i| {
            let fc = c.without(i);
            AbstractFace::new(h, fc.key(), h.fiber(&fc)[0])
        })
        .collect()
}

fn datum(c: &Config, faces: &[AbstractFace], idx: &[usize], g: &FinAbelianGroup) -> SimplexDatum {
    SimplexDatum { vertices: c.clone(), faces: faces.to_vec(), twists: idx.iter().map(|&i| g.element_at(i)).collect() }
}

fn co_datum(h: &Polygroupoid, c: &Config, idx: &[usize], g: &FinAbelianGroup) -> CoSimplexDatum {
    let m = c.len();
    let mut pairs = BTreeMap::new();
    let mut k = 0;
    for a in 0..m {
        for b in a + 1..m {
            let fc = c.without(b).without(a);
            pairs.insert((a, b), (AbstractFace::new(h, fc.key(), h.fiber(&fc)[0]), g.element_at(idx[k])));
            k += 1;
        }
    }
    CoSimplexDatum { vertices: c.clone(), pairs }
}

/// Runs the five stages on `h`, extracting over its first top configuration.
pub fn verdict(h: &Polygroupoid) -> Report {
    let mut stages = BTreeMap::new();
    let z = h.top_configs().remove(0);
    let extracted = extract(h, &z);
    let (group, act) = match extracted {
        Ok(x) => x,
        Err(e) => {
            stages.insert("extract".into(), StageResult::fail(0, e.to_string()));
            return Report { stages, group: None, pocket_group: None, isomorphic: false };
        }
    };
    let check = verify_action(h, &act);
    let checked = check.checks.iter().map(|c| c.checked).sum();
    stages.insert(
        "extract".into(),
        match check.first_counterexample() {
            None => StageResult::pass(checked),
            Some(cx) => StageResult::fail(checked, serde_json::to_string(cx).unwrap_or_default()),
        },
    );
    if !check.passed() {
        return Report { stages, group: Some(group), pocket_group: None, isomorphic: false };
    }

    stages.insert("boundary-vanishing".into(), boundary_stage(h, &act));
    let order = group.order().unwrap() as usize;
    let n = h.arity();
    let tops = configs_of_size(h.vertices(), n + 1);
    let (inj, classes) = injectivity_stage(h, &act, &tops);
    stages.insert("injectivity".into(), inj);
    stages.insert("surjectivity".into(), surjectivity_stage(h, &act, &tops));
    let (pocket_stage, pocket_group) = match classes {
        Some(cls) => pocket_stage(&group, order, n, &cls),
        None => (StageResult::fail(0, "no classes to compare".into()), None),
    };
    stages.insert("pocket-group".into(), pocket_stage);
    let isomorphic = pocket_group.as_ref().is_some_and(|p| iso_check(p, &group));
    Report { stages, group: Some(group), pocket_group, isomorphic }
}

/// Stage (ii): ε vanishes on boundaries of co-simplices over every
/// `(n+2)`-configuration, exhaustively when small and sampled otherwise.
fn boundary_stage(h: &Polygroupoid, act: &ActionTable) -> StageResult {
    let g = act.group();
    let order = g.order().unwrap();
    let n = h.arity();
    let configs = configs_of_size(h.vertices(), n + 2);
    if configs.is_empty() {
        return StageResult::pass(0);
    }
    let npairs = ((n + 2) * (n + 1) / 2) as u32;
    let per_config = order.checked_pow(npairs).filter(|&t| t <= EXHAUSTIVE_LIMIT);
    let samples = MIN_SAMPLES.div_ceil(configs.len() as u64);
    let results: Vec<(u64, Option<String>)> = configs
        .par_iter()
        .enumerate()
        .map(|(ci, c)| {
            let mut checked = 0u64;
            let mut test = |idx: &[usize]| -> Option<String> {
                checked += 1;
                let co = co_datum(h, c, idx, g);
                match check_boundary_zero(h, act, &co) {
                    Ok(true) => None,
                    Ok(false) => Some(format!("ε(∂h) ≠ 0 over {c} with twist indices {idx:?}")),
                    Err(e) => Some(e.to_string()),
                }
            };
            let mut idx = vec![0usize; npairs as usize];
            let failure = if per_config.is_some() {
                loop {
                    if let Some(w) = test(&idx) {
                        break Some(w);
                    }
                    if !crate::polygroupoid::advance_odometer(&mut idx, order as usize) {
                        break None;
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ ci as u64);
                (0..samples).find_map(|_| {
                    idx.iter_mut().for_each(|x| *x = rng.gen_range(0..order as usize));
                    test(&idx)
                })
            };
            (checked, failure)
        })
        .collect();
    let checked = results.iter().map(|r| r.0).sum();
    match results.into_iter().find_map(|r| r.1) {
        None => StageResult::pass(checked),
        Some(w) => StageResult::fail(checked, w),
    }
}

/// All twist vectors over a configuration with fixed faces, with their ε.
fn epsilon_table(h: &Polygroupoid, act: &ActionTable, c: &Config) -> Result<Vec<(Vec<usize>, usize)>, HurewiczError> {
    let g = act.group();
    let order = g.order().unwrap() as usize;
    let faces = base_faces(h, c);
    let mut idx = vec![0usize; c.len()];
    let mut out = Vec::new();
    loop {
        let d = datum(c, &faces, &idx, g);
        out.push((idx.clone(), g.index_of(&epsilon(h, act, &d)?)));
        if !crate::polygroupoid::advance_odometer(&mut idx, order) {
            break;
        }
    }
    Ok(out)
}

/// Stage (iii): over each `(n+1)`-configuration with fixed faces,
/// `ε(g) = ε(g')` exactly when the twists are naturally isomorphic. Returns
/// the class structure on the first configuration for stage (v).
fn injectivity_stage(h: &Polygroupoid, act: &ActionTable, tops: &[Config]) -> (StageResult, Option<Vec<Vec<usize>>>) {
    let g = act.group();
    let results: Vec<Result<(u64, Option<String>, Vec<Vec<usize>>), HurewiczError>> = tops
        .par_iter()
        .map(|c| {
            let table = epsilon_table(h, act, c)?;
            let faces = base_faces(h, c);
            let data: Vec<SimplexDatum> = table.iter().map(|(idx, _)| datum(c, &faces, idx, g)).collect();
            // classes under natural isomorphism, by smallest member
            let mut class_of = vec![usize::MAX; data.len()];
            let mut checked = 0u64;
            for a in 0..data.len() {
                if class_of[a] == usize::MAX {
                    class_of[a] = a;
                }
                for b in a..data.len() {
                    checked += 1;
                    let iso = natural_iso(g, &data[a], &data[b])?.is_some();
                    if iso != (table[a].1 == table[b].1) {
                        let w = format!(
                            "over {c}: twists {:?} and {:?} have ε-equality {} but natural isomorphism {}",
                            table[a].0,
                            table[b].0,
                            table[a].1 == table[b].1,
                            iso
                        );
                        return Ok((checked, Some(w), Vec::new()));
                    }
                    if iso && class_of[b] == usize::MAX {
                        class_of[b] = class_of[a];
                    }
                }
            }
            let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (i, &k) in class_of.iter().enumerate() {
                classes.entry(k).or_default().push(i);
            }
            Ok((checked, None, classes.into_values().collect()))
        })
        .collect();
    let mut checked = 0;
    let mut first_classes = None;
    for r in results {
        match r {
            Err(e) => return (StageResult::fail(checked, e.to_string()), None),
            Ok((k, Some(w), _)) => return (StageResult::fail(checked + k, w), None),
            Ok((k, None, cls)) => {
                checked += k;
                first_classes.get_or_insert(cls);
            }
        }
    }
    (StageResult::pass(checked), first_classes)
}

/// Stage (iv): `ε(twist_by(g, γ)) − ε(g) = γ` for every `γ` and every base
/// datum with zero twists, so the image is all of `G`.
fn surjectivity_stage(h: &Polygroupoid, act: &ActionTable, tops: &[Config]) -> StageResult {
    let g = act.group();
    let mut checked = 0;
    for c in tops {
        let faces = base_faces(h, c);
        let base = datum(c, &faces, &vec![0; c.len()], g);
        let e0 = match epsilon(h, act, &base) {
            Ok(e) => e,
            Err(e) => return StageResult::fail(checked, e.to_string()),
        };
        let mut hit = vec![false; g.order().unwrap() as usize];
        for gamma in g.elements() {
            checked += 1;
            match epsilon(h, act, &twist_by(g, &base, &gamma)) {
                Ok(e) => {
                    let d = g.sub(&e, &e0);
                    if d != gamma {
                        return StageResult::fail(checked, format!("over {c}: twisting by {gamma} moved ε by {d}"));
                    }
                    hit[g.index_of(&d)] = true;
                }
                Err(e) => return StageResult::fail(checked, e.to_string()),
            }
        }
        if let Some(i) = hit.iter().position(|x| !x) {
            return StageResult::fail(checked, format!("over {c}: {} is not in the image", g.element_at(i)));
        }
    }
    StageResult::pass(checked)
}

/// Stage (v): twist vectors modulo natural isomorphism, added coordinatewise.
fn pocket_stage(g: &FinAbelianGroup, order: usize, n: usize, classes: &[Vec<usize>]) -> (StageResult, Option<FinAbelianGroup>) {
    let width = n + 1;
    let total = order.pow(width as u32);
    let mut class_at = vec![usize::MAX; total];
    for (k, members) in classes.iter().enumerate() {
        for &m in members {
            class_at[m] = k;
        }
    }
    // decode odometer index into twist coordinates (last slot fastest)
    let decode = |mut i: usize| {
        let mut v = vec![0usize; width];
        for x in v.iter_mut().rev() {
            *x = i % order;
            i /= order;
        }
        v
    };
    let encode = |v: &[usize]| v.iter().fold(0usize, |acc, &x| acc * order + x);
    let mut table = vec![vec![0usize; classes.len()]; classes.len()];
    let mut checked = 0;
    for (a, ma) in classes.iter().enumerate() {
        for (b, mb) in classes.iter().enumerate() {
            let mut result = None;
            // every representative pair must land in the same class
            for &x in ma {
                for &y in mb {
                    checked += 1;
                    let (vx, vy) = (decode(x), decode(y));
                    let sum: Vec<usize> = vx
                        .iter()
                        .zip(&vy)
                        .map(|(&p, &q)| g.index_of(&g.add(&g.element_at(p), &g.element_at(q))))
                        .collect();
                    let k = class_at[encode(&sum)];
                    if *result.get_or_insert(k) != k {
                        return (StageResult::fail(checked, format!("class sum {a}+{b} is not well defined")), None);
                    }
                }
            }
            table[a][b] = result.unwrap();
        }
    }
    match FinAbelianGroup::from_cayley_table(&table) {
        Ok((p, _)) => {
            if iso_check(&p, g) {
                (StageResult::pass(checked), Some(p))
            } else {
                (StageResult::fail(checked, format!("pocket group {p} is not isomorphic to {g}")), Some(p))
            }
        }
        Err(e) => (StageResult::fail(checked, e.to_string()), None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binding::native_action;
    use crate::polygroupoid::{scramble, standard, StandardModel};

    fn z4() -> (StandardModel, ActionTable) {
        let m = standard(&FinAbelianGroup::cyclic(4), &[0, 1, 2, 3], 2).unwrap();
        let act = native_action(&m);
        (m, act)
    }

    fn datum_with_coords(m: &StandardModel, act: &ActionTable, coords: &[i64]) -> SimplexDatum {
        let c = Config::new(vec![0, 1, 2]).unwrap();
        let faces = (0..3)
            .map(|i| {
                let fc = c.without(i);
                AbstractFace::new(&m.structure, fc.key(), m.element(&fc, &m.group.reduce(&[coords[i]])).unwrap())
            })
            .collect();
        SimplexDatum::new(&m.structure, act, c, faces, vec![m.group.zero(); 3]).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        let (m, act) = z4();
        let g = datum_with_coords(&m, &act, &[1, 2, 3]);
        assert_eq!(epsilon(&m.structure, &act, &g).unwrap(), m.group.reduce(&[2]));
        let zero = datum_with_coords(&m, &act, &[0, 0, 0]);
        assert_eq!(epsilon(&m.structure, &act, &zero).unwrap(), m.group.zero());
        let g2 = twist_by(&m.group, &g, &m.group.reduce(&[3]));
        assert_eq!(epsilon(&m.structure, &act, &g2).unwrap(), m.group.reduce(&[1]));
    }

    #[test]
    fn natural_iso_examples() {
        let (m, act) = z4();
        let g = datum_with_coords(&m, &act, &[1, 2, 3]);
        assert_eq!(natural_iso(&m.group, &g, &g).unwrap(), Some(vec![m.group.zero(); 3]));
        let mut g2 = g.clone();
        g2.twists = vec![m.group.reduce(&[1]), m.group.reduce(&[1]), m.group.zero()];
        assert!(natural_iso(&m.group, &g, &g2).unwrap().is_some());
        assert_eq!(epsilon(&m.structure, &act, &g).unwrap(), epsilon(&m.structure, &act, &g2).unwrap());
        g2.twists = vec![m.group.reduce(&[1]), m.group.zero(), m.group.zero()];
        assert!(natural_iso(&m.group, &g, &g2).unwrap().is_none());
        let d = m.group.sub(&epsilon(&m.structure, &act, &g2).unwrap(), &epsilon(&m.structure, &act, &g).unwrap());
        assert_eq!(d, m.group.reduce(&[-1]));
    }

    #[test]
    fn co_face_bookkeeping() {
        let (m, act) = z4();
        let c = Config::new(vec![0, 1, 2, 3]).unwrap();
        let co = co_datum(&m.structure, &c, &[1, 2, 3, 0, 1, 2], &m.group);
        let f0 = co_face(&co, 0);
        assert_eq!(f0.vertices.vertices(), &[1, 2, 3]);
        // pair {0, 2}: face 1 of ∂^0 and face 0 of ∂^2; pair {1, 3}: face 2 of ∂^1 and face 1 of ∂^3
        assert_eq!(co_face(&co, 0).faces[1], co_face(&co, 2).faces[0]);
        assert_eq!(co_face(&co, 1).twists[2], co_face(&co, 3).twists[1]);
        for j in 0..4 {
            let d = co_face(&co, j);
            SimplexDatum::new(&m.structure, &act, d.vertices.clone(), d.faces.clone(), d.twists.clone()).unwrap();
        }
        assert!(check_boundary_zero(&m.structure, &act, &co).unwrap());
    }

    #[test]
    fn verdict_on_standard_and_scrambled() {
        let m = standard(&FinAbelianGroup::cyclic(4), &[0, 1, 2, 3], 2).unwrap();
        let r = verdict(&m.structure);
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.pocket_group, Some(FinAbelianGroup::cyclic(4)));
        let r = verdict(&scramble(&m.structure, 3));
        assert!(r.passed(), "{}", r.to_text());
        let t = standard(&FinAbelianGroup::trivial(), &[0, 1, 2, 3], 2).unwrap();
        let r = verdict(&t.structure);
        assert!(r.passed() && r.pocket_group.unwrap().is_trivial());
    }
}
