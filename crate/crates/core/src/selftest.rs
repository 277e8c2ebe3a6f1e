//! The built-in acceptance run: nine criteria, each a pass/fail line.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{homology, iso_check, snf_triple, FinAbelianGroup, GroupHom, IntMatrix};
use crate::binding::{extract, native_action, refutes_action, verify_action, ActionTable};
use crate::chain::{boundary, classify, Chain, SimplexFamily, SimplexGen};
use crate::hurewicz::verdict;
use crate::polygroupoid::{
    check_associativity_all, check_axioms, configs_of_size, refutes, scramble, standard, Config, ElemId, Polygroupoid,
    StandardModel, Vertex, HOLE,
};
use crate::report::Counterexample;
use crate::tower::{
    check_poly_tower, check_thread_action, induced_group_tower, inverse_limit, native_actions, refutes_poly_tower,
    standard_tower, PolyTower,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub criteria: Vec<CriterionResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            out.push_str(&format!(
                "{} criterion {} {}: {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.name,
                c.detail
            ));
        }
        out.push_str(&format!("selftest: {}\n", if self.passed() { "PASS" } else { "FAIL" }));
        out
    }
}

/// A deliberate corruption of the instances some criteria run on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// One configuration's law is shifted (criteria 2 and 6).
    NonAssociative,
    /// A second filler is added to one horn (criterion 3).
    HornCollision,
    /// One action entry is redirected (criterion 5).
    TamperedAction,
    /// One tower map entry is redirected (criterion 7).
    TamperedRho,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "non-associative" => Ok(Self::NonAssociative),
            "horn-collision" => Ok(Self::HornCollision),
            "tampered-action" => Ok(Self::TamperedAction),
            "tampered-rho" => Ok(Self::TamperedRho),
            _ => Err(format!(
                "unknown fault {s:?}; expected non-associative, horn-collision, tampered-action or tampered-rho"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SelftestOptions {
    /// Smaller grids and fewer seeds.
    pub quick: bool,
    pub fault: Option<Fault>,
}

pub const CRITERIA: [&str; 9] = [
    "boundary-squared",
    "standard-axioms",
    "unique-horn-filling",
    "blind-extraction",
    "action-laws",
    "hurewicz-verdict",
    "tower-limit",
    "planted-faults",
    "homology-and-snf",
];

pub fn run_selftest(opts: &SelftestOptions) -> SelftestReport {
    SelftestReport { criteria: (1..=9).map(|id| criterion(id, opts)).collect() }
}

/// Runs one criterion, `1..=9`.
pub fn criterion(id: u32, opts: &SelftestOptions) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => c1_boundary(opts),
        2 => c2_axioms(opts),
        3 => c3_horns(opts),
        4 => c4_extraction(opts),
        5 => c5_action(opts),
        6 => c6_verdict(opts),
        7 => c7_tower(opts),
        8 => c8_plants(opts),
        9 => c9_homology(opts),
        _ => Err(format!("no criterion {id}")),
    };
    let name = CRITERIA.get((id as usize).wrapping_sub(1)).copied().unwrap_or("unknown").to_string();
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult { id, name, passed, detail, millis: start.elapsed().as_millis() as u64 }
}

type Outcome = Result<String, String>;

/// Full simplex on `vertices` up to `dim`, plus a labeled twin of every
/// top generator with the same faces.
pub fn pocket_family(vertices: &[u32], dim: usize) -> SimplexFamily {
    let base = SimplexFamily::full_simplex(vertices, dim);
    let mut gens: Vec<SimplexGen> = (0..=dim).flat_map(|d| base.generators(d).to_vec()).collect();
    gens.extend(base.generators(dim).iter().map(|g| SimplexGen::new(g.support().clone(), "b")));
    SimplexFamily::from_fn(gens, |g, i| SimplexGen::new(g.support().without(i), "")).expect("twins share faces")
}

fn c1_boundary(opts: &SelftestOptions) -> Outcome {
    let fams = [SimplexFamily::full_simplex(&[0, 1, 2, 3, 4, 5], 4), pocket_family(&[0, 1, 2, 3, 4], 3)];
    let mut checked = 0;
    for fam in &fams {
        for d in 2..=fam.max_dim().unwrap_or(0) {
            for g in fam.generators(d) {
                checked += 1;
                let dd = boundary(fam, &boundary(fam, &Chain::generator(g)).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                if !dd.is_zero() {
                    return Err(format!("∂∂ of {g:?} is nonzero"));
                }
            }
        }
    }
    let fam = &fams[0];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let samples = if opts.quick { 100 } else { 500 };
    for _ in 0..samples {
        let d = rng.gen_range(2..=4);
        let gens = fam.generators(d);
        let terms: Vec<(SimplexGen, i64)> =
            (0..rng.gen_range(1..=6)).map(|_| (gens[rng.gen_range(0..gens.len())].clone(), rng.gen_range(-5..=5))).collect();
        let c = Chain::from_terms(d, terms).map_err(|e| e.to_string())?;
        let dd = boundary(fam, &boundary(fam, &c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        checked += 1;
        if !dd.is_zero() {
            return Err(format!("∂∂ of a random {d}-chain is nonzero: {c:?}"));
        }
    }
    // a pocket f − g is a cycle but not a boundary when nothing fills it
    let pf = &fams[1];
    let f = &pf.generators(3)[0];
    let twin = SimplexGen::new(f.support().clone(), "b");
    let pocket = Chain::from_terms(3, [(f.clone(), 1), (twin, -1)]).map_err(|e| e.to_string())?;
    let cls = classify(pf, &pocket, &[]).map_err(|e| e.to_string())?;
    if !(cls.cycle && cls.pocket && !cls.boundary) {
        return Err(format!("pocket misclassified: {cls:?}"));
    }
    Ok(format!("{checked} chains, ∂∂ = 0"))
}

/// `(n, group, |I|)` instances for criteria 2 and 6.
fn standard_grid(quick: bool) -> Vec<(usize, FinAbelianGroup, usize)> {
    let g = |o: &[u64]| FinAbelianGroup::from_orders(o).unwrap();
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let mut groups = vec![g(&[2]), g(&[3]), g(&[4]), g(&[2, 2])];
        if n == 2 && !quick {
            groups.extend([g(&[8]), g(&[2, 4]), g(&[2, 2, 2])]);
        }
        let max_extra = if quick { 1 } else { 2 };
        for grp in groups {
            for extra in 0..=max_extra {
                out.push((n, grp.clone(), n + 1 + extra));
            }
        }
    }
    out
}

fn vertices(k: usize) -> Vec<Vertex> {
    (0..k as Vertex).collect()
}

fn model(n: usize, g: &FinAbelianGroup, k: usize) -> Result<StandardModel, String> {
    standard(g, &vertices(k), n).map_err(|e| e.to_string())
}

/// Adds a second `Q`-tuple that differs from the first one in slot 1.
pub fn horn_duplicate(h: &Polygroupoid) -> Polygroupoid {
    let t = h.q()[0].clone();
    let c0 = h.config(t[0]).clone();
    let other = *h.fiber(&c0).iter().find(|&&w| w != t[0]).expect("fiber has two elements");
    let mut dup = t;
    dup[0] = other;
    let mut q = h.q().to_vec();
    q.push(dup);
    h.with_q(q)
}

/// Shifts the last slot of every `Q`-tuple over the first `(n+1)`-configuration
/// by the first nonzero group element. The result still has unique fillers
/// but violates associativity on every larger configuration.
pub fn shifted_law(m: &StandardModel) -> Polygroupoid {
    let h = &m.structure;
    let act = native_action(m);
    let z = configs_of_size(h.vertices(), h.arity() + 1).remove(0);
    let gamma = m.group.element_at(1);
    let q = h
        .q()
        .iter()
        .map(|t| {
            let mut t = t.clone();
            if h.tuple_config(&t).as_ref() == Some(&z) {
                let last = t.len() - 1;
                t[last] = act.act(&gamma, t[last]);
            }
            t
        })
        .collect();
    h.with_q(q)
}

/// The native action with `g₁·w` redirected for the first element of the
/// first top fiber.
pub fn tampered_action(m: &StandardModel) -> ActionTable {
    let act = native_action(m);
    let z = m.structure.top_configs().remove(0);
    let fiber = m.structure.fiber(&z);
    let g1 = m.group.element_at(1);
    let target = *fiber.iter().find(|&&w| w != act.act(&g1, fiber[0])).unwrap();
    act.with_entry(&g1, fiber[0], target)
}

/// Redirects `ρ_{u,v}` at one element of the first top fiber of `v`.
pub fn tampered_rho(t: &PolyTower, u: &str, v: &str) -> PolyTower {
    let hv = &t.nodes[v];
    let z = hv.top_configs().remove(0);
    let w = hv.fiber(&z)[0];
    let now = t.rho(u, v).expect("related nodes")[&w];
    let target = *t.nodes[u].fiber(&z).iter().find(|&&x| x != now).expect("target fiber has two elements");
    t.with_rho_entry(u, v, w, target)
}

fn c2_axioms(opts: &SelftestOptions) -> Outcome {
    let grid = standard_grid(opts.quick);
    for (n, g, k) in &grid {
        let m = model(*n, g, *k)?;
        let h = if opts.fault == Some(Fault::NonAssociative) && *k >= n + 2 { shifted_law(&m) } else { m.structure };
        let mut r = check_axioms(&h);
        r.extend(check_associativity_all(&h).map_err(|e| e.to_string())?);
        if !r.passed() {
            return Err(format!("n={n}, G={g}, |I|={k}: {}", r.to_text().trim_end().replace('\n', "; ")));
        }
    }
    Ok(format!("{} standard structures satisfy every axiom", grid.len()))
}

/// Small instances for the horn, extraction and action criteria.
fn small_grid(quick: bool) -> Vec<(usize, FinAbelianGroup, usize)> {
    let g = |o: &[u64]| FinAbelianGroup::from_orders(o).unwrap();
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let groups = if quick { vec![g(&[2]), g(&[2, 2])] } else { vec![g(&[2]), g(&[3]), g(&[4]), g(&[2, 2])] };
        for grp in groups {
            for k in [n + 1, n + 2] {
                out.push((n, grp.clone(), k));
            }
        }
    }
    out
}

/// Counts the fillers of every partially compatible horn by brute force
/// over all tuples of fiber elements.
fn horn_counts(h: &Polygroupoid) -> Result<u64, String> {
    let n1 = h.arity() + 1;
    let mut checked = 0;
    for c in configs_of_size(h.vertices(), n1) {
        let fibers: Vec<&[ElemId]> = (0..n1).map(|i| h.fiber(&c.without(i))).collect();
        for k in 0..n1 {
            let mut idx = vec![0usize; n1];
            loop {
                if idx[k] == 0 {
                    let mut horn: Vec<ElemId> = idx.iter().zip(&fibers).map(|(&i, f)| f[i]).collect();
                    horn[k] = HOLE;
                    if h.is_partially_compatible(&horn, k + 1).map_err(|e| e.to_string())? {
                        checked += 1;
                        let count = fibers[k]
                            .iter()
                            .filter(|&&u| {
                                horn[k] = u;
                                h.in_q(&horn)
                            })
                            .count();
                        if count != 1 {
                            horn[k] = HOLE;
                            return Err(format!(
                                "horn {:?} over {c} has {count} fillers",
                                horn.iter().map(|&w| if w == HOLE { "_" } else { h.name(w) }).collect::<Vec<_>>()
                            ));
                        }
                    }
                }
                let mut j = n1;
                let done = loop {
                    if j == 0 {
                        break true;
                    }
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] < fibers[j].len() {
                        break false;
                    }
                    idx[j] = 0;
                };
                if done {
                    break;
                }
            }
        }
    }
    Ok(checked)
}

fn c3_horns(opts: &SelftestOptions) -> Outcome {
    let mut total = 0;
    for (n, g, k) in small_grid(opts.quick) {
        let m = model(n, &g, k)?;
        let h = if opts.fault == Some(Fault::HornCollision) { horn_duplicate(&m.structure) } else { m.structure };
        total += horn_counts(&h).map_err(|e| format!("n={n}, G={g}, |I|={k}: {e}"))?;
    }
    Ok(format!("{total} horns, each with exactly one filler"))
}

fn seeds(quick: bool) -> u64 {
    if quick {
        10
    } else {
        100
    }
}

fn scrambled_instances(quick: bool) -> Vec<(String, FinAbelianGroup, Polygroupoid, Config)> {
    let mut out = Vec::new();
    for (n, g, k) in small_grid(quick) {
        let h = model(n, &g, k).expect("grid parameters are valid").structure;
        for seed in 0..seeds(quick) {
            let s = scramble(&h, seed);
            let tops = s.top_configs();
            let z = tops[seed as usize % tops.len()].clone();
            out.push((format!("n={n}, G={g}, |I|={k}, seed={seed}"), g.clone(), s, z));
        }
    }
    out
}

fn c4_extraction(opts: &SelftestOptions) -> Outcome {
    let inst = scrambled_instances(opts.quick);
    for (label, g, h, z) in &inst {
        let (found, _) = extract(h, z).map_err(|e| format!("{label}: {e}"))?;
        if !iso_check(&found, g) {
            return Err(format!("{label}: extracted {found}"));
        }
    }
    Ok(format!("{} scrambled structures, binding group recovered at a varying base", inst.len()))
}

fn c5_action(opts: &SelftestOptions) -> Outcome {
    let inst = scrambled_instances(opts.quick);
    let mut checked = 0;
    for (label, _, h, z) in &inst {
        let (_, act) = extract(h, z).map_err(|e| format!("{label}: {e}"))?;
        let r = verify_action(h, &act);
        checked += r.checks.iter().map(|c| c.checked).sum::<u64>();
        if !r.passed() {
            return Err(format!("{label}: {}", r.to_text().trim_end().replace('\n', "; ")));
        }
    }
    if opts.fault == Some(Fault::TamperedAction) {
        let m = model(2, &FinAbelianGroup::cyclic(3), 4)?;
        let r = verify_action(&m.structure, &tampered_action(&m));
        if !r.passed() {
            return Err(format!("tampered action: {}", r.to_text().trim_end().replace('\n', "; ")));
        }
    }
    Ok(format!("{} extracted actions, {checked} law instances", inst.len()))
}

fn c6_verdict(opts: &SelftestOptions) -> Outcome {
    let grid = standard_grid(opts.quick);
    for (n, g, k) in &grid {
        let m = model(*n, g, *k)?;
        let h = if opts.fault == Some(Fault::NonAssociative) && *k >= n + 2 { shifted_law(&m) } else { m.structure };
        let r = verdict(&h);
        if !r.passed() {
            let stage = r.first_failed_stage().map_or("isomorphism".to_string(), |(s, _)| s.to_string());
            return Err(format!("n={n}, G={g}, |I|={k}: {stage} fails"));
        }
        if !r.group.as_ref().is_some_and(|x| iso_check(x, g)) {
            return Err(format!("n={n}, G={g}, |I|={k}: wrong group"));
        }
    }
    Ok(format!("{} structures, all stages pass and π ≅ G", grid.len()))
}

fn c7_tower(opts: &SelftestOptions) -> Outcome {
    let gs = [8u64, 4, 2].map(FinAbelianGroup::cyclic).to_vec();
    let maps = vec![
        GroupHom::reduction(&gs[0], &gs[1]).map_err(|e| e.to_string())?,
        GroupHom::reduction(&gs[1], &gs[2]).map_err(|e| e.to_string())?,
    ];
    let (mut pt, models) = standard_tower(&gs, &maps, &vertices(4), 2).map_err(|e| e.to_string())?;
    if opts.fault == Some(Fault::TamperedRho) {
        pt = tampered_rho(&pt, "1", "0");
    }
    let r = check_poly_tower(&pt);
    if !r.passed() {
        return Err(r.to_text().trim_end().replace('\n', "; "));
    }
    let acts = native_actions(&models);
    let gt = induced_group_tower(&pt, &acts).map_err(|e| e.to_string())?;
    if gt.map("1", "0") != Some(&maps[0]) || gt.map("2", "1") != Some(&maps[1]) {
        return Err("induced maps differ from the reductions".into());
    }
    let (lim, proj) = inverse_limit(&gt).map_err(|e| e.to_string())?;
    if !iso_check(&lim, &gs[0]) {
        return Err(format!("limit is {lim}"));
    }
    let tops = pt.nodes["0"].top_configs();
    for c in &tops {
        let chk = check_thread_action(&pt, &acts, &lim, &proj, c);
        if !chk.passed {
            return Err(format!("thread action over {c}: {:?}", chk.counterexample));
        }
    }
    // blind: every node's action extracted from its law alone
    let mut blind = BTreeMap::new();
    for (name, h) in &pt.nodes {
        let (_, act) = extract(h, &h.top_configs()[0]).map_err(|e| format!("node {name}: {e}"))?;
        blind.insert(name.clone(), act);
    }
    let bt = induced_group_tower(&pt, &blind).map_err(|e| e.to_string())?;
    let (blim, _) = inverse_limit(&bt).map_err(|e| e.to_string())?;
    if !iso_check(&blim, &gs[0]) {
        return Err(format!("blind limit is {blim}"));
    }
    Ok(format!("lim ≅ {lim}; thread action regular over {} configs; blind limit ≅ {blim}", tops.len()))
}

fn round_trip(cx: &Counterexample) -> Result<Counterexample, String> {
    let s = serde_json::to_string(cx).map_err(|e| e.to_string())?;
    serde_json::from_str(&s).map_err(|e| e.to_string())
}

fn c8_plants(opts: &SelftestOptions) -> Outcome {
    // the fault here disables the plants, so nothing is detected
    let plant = opts.fault.is_none();
    let mut found = Vec::new();

    let m = model(2, &FinAbelianGroup::cyclic(3), 3)?;
    let h = if plant { horn_duplicate(&m.structure) } else { m.structure.clone() };
    let r = check_axioms(&h);
    match r.get("horn-uniqueness").and_then(|c| c.counterexample.as_ref()) {
        Some(cx) if refutes(&h, &round_trip(cx)?) => found.push("horn-collision"),
        _ => return Err("duplicated filler not detected".into()),
    }

    let m = model(2, &FinAbelianGroup::cyclic(2), 4)?;
    let h = if plant { shifted_law(&m) } else { m.structure.clone() };
    let r = check_associativity_all(&h).map_err(|e| e.to_string())?;
    match r.first_counterexample() {
        Some(cx @ Counterexample::Associativity { .. }) if refutes(&h, &round_trip(cx)?) => found.push("non-associative"),
        _ => return Err("shifted law not detected".into()),
    }

    let m = model(2, &FinAbelianGroup::cyclic(3), 4)?;
    let act = if plant { tampered_action(&m) } else { native_action(&m) };
    let r = verify_action(&m.structure, &act);
    match r.first_counterexample() {
        Some(cx) if refutes_action(&m.structure, &act, &round_trip(cx)?) => found.push("tampered-action"),
        _ => return Err("tampered action not detected".into()),
    }

    let gs = [4u64, 2].map(FinAbelianGroup::cyclic).to_vec();
    let maps = vec![GroupHom::reduction(&gs[0], &gs[1]).map_err(|e| e.to_string())?];
    let (pt, _) = standard_tower(&gs, &maps, &vertices(3), 2).map_err(|e| e.to_string())?;
    let pt = if plant { tampered_rho(&pt, "1", "0") } else { pt };
    let r = check_poly_tower(&pt);
    match r.first_counterexample() {
        Some(cx) if refutes_poly_tower(&pt, &round_trip(cx)?) => found.push("tampered-rho"),
        _ => return Err("tampered ρ not detected".into()),
    }
    Ok(format!("detected and refuted: {}", found.join(", ")))
}

fn big(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

fn c9_homology(opts: &SelftestOptions) -> Outcome {
    // hollow triangle: edges 01, 02, 12
    let d1 = big(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
    let d0 = IntMatrix::zeros(0, 3);
    let none = IntMatrix::zeros(3, 0);
    let h0 = homology(&d0, &d1).map_err(|e| e.to_string())?;
    let h1 = homology(&d1, &none).map_err(|e| e.to_string())?;
    let filled = homology(&d1, &big(&[vec![1], vec![-1], vec![1]])).map_err(|e| e.to_string())?;
    let torsion = homology(&IntMatrix::zeros(0, 1), &big(&[vec![2]])).map_err(|e| e.to_string())?;
    let z = FinAbelianGroup::new(vec![], 1).unwrap();
    if !(iso_check(&h0, &z) && iso_check(&h1, &z) && filled.is_trivial() && iso_check(&torsion, &FinAbelianGroup::cyclic(2))) {
        return Err(format!("triangle homology: H0={h0}, H1={h1}, filled H1={filled}, torsion={torsion}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let samples = if opts.quick { 100 } else { 500 };
    for s in 0..samples {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let entries: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-9..=9)).collect();
        let a = IntMatrix::from_i64(r, c, &entries).map_err(|e| e.to_string())?;
        let (u, d, v) = snf_triple(&a);
        let uav = u.try_mul(&a).and_then(|x| x.try_mul(&v)).map_err(|e| e.to_string())?;
        if uav != d {
            return Err(format!("sample {s}: U·A·V ≠ D"));
        }
        if !u.determinant().abs().is_one() || !v.determinant().abs().is_one() {
            return Err(format!("sample {s}: transform is not unimodular"));
        }
        if !d.is_diagonal() {
            return Err(format!("sample {s}: D is not diagonal"));
        }
        let diag: Vec<BigInt> = (0..r.min(c)).map(|i| d.get(i, i).clone()).collect();
        if diag.iter().any(Signed::is_negative) {
            return Err(format!("sample {s}: negative diagonal entry"));
        }
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            if !ok {
                return Err(format!("sample {s}: {} does not divide {}", w[0], w[1]));
            }
        }
    }
    Ok(format!("triangle H0 ≅ H1 ≅ Z; {samples} random SNFs verified"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plants_break_their_targets() {
        let m = standard(&FinAbelianGroup::cyclic(2), &vertices(4), 2).unwrap();
        assert!(check_axioms(&horn_duplicate(&m.structure)).get("horn-uniqueness").is_some_and(|c| !c.passed));
        let s = shifted_law(&m);
        assert!(check_axioms(&s).passed());
        assert!(!check_associativity_all(&s).unwrap().passed());
    }

    #[test]
    fn quick_faults_fail_their_criteria() {
        let opts = SelftestOptions { quick: true, fault: Some(Fault::HornCollision) };
        assert!(!criterion(3, &opts).passed);
        let opts = SelftestOptions { quick: true, fault: Some(Fault::TamperedRho) };
        assert!(!criterion(7, &opts).passed);
        assert!(!criterion(8, &opts).passed);
    }

    #[test]
    fn fault_names_parse() {
        assert_eq!("tampered-action".parse::<Fault>().unwrap(), Fault::TamperedAction);
        assert!("bogus".parse::<Fault>().is_err());
    }
}
