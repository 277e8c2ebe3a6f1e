use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{configs_of_size, Config, ElemId, Polygroupoid, Vertex, HOLE};
use crate::binding::{extract, ActionTable};
use crate::report::{AxiomCheck, AxiomReport, Counterexample};

/// A permutation of the vertex set. Composition `σ∘τ` applies `τ` first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Permutation(BTreeMap<Vertex, Vertex>);

impl Permutation {
    pub fn new(map: BTreeMap<Vertex, Vertex>) -> Option<Self> {
        let image: BTreeSet<Vertex> = map.values().copied().collect();
        let domain: BTreeSet<Vertex> = map.keys().copied().collect();
        (image == domain).then_some(Self(map))
    }

    pub fn identity(vertices: &[Vertex]) -> Self {
        Self(vertices.iter().map(|&v| (v, v)).collect())
    }

    pub fn transposition(vertices: &[Vertex], a: Vertex, b: Vertex) -> Self {
        let mut p = Self::identity(vertices);
        p.0.insert(a, b);
        p.0.insert(b, a);
        p
    }

    /// The cycle `v_0 → v_1 → … → v_0` over `vertices`.
    pub fn cycle(vertices: &[Vertex], cyc: &[Vertex]) -> Self {
        let mut p = Self::identity(vertices);
        for (i, &v) in cyc.iter().enumerate() {
            p.0.insert(v, cyc[(i + 1) % cyc.len()]);
        }
        p
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.0.get(&v).copied().unwrap_or(v)
    }

    pub fn compose(&self, inner: &Permutation) -> Permutation {
        let keys: BTreeSet<Vertex> = self.0.keys().chain(inner.0.keys()).copied().collect();
        Self(keys.into_iter().map(|v| (v, self.apply(inner.apply(v)))).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|(a, b)| a == b)
    }

    /// Image of a configuration, re-sorted, with the sign of the sorting permutation.
    fn image(&self, c: &Config) -> (Config, i64) {
        let img: Vec<Vertex> = c.vertices().iter().map(|&v| self.apply(v)).collect();
        let mut inversions = 0usize;
        for i in 0..img.len() {
            for j in i + 1..img.len() {
                if img[i] > img[j] {
                    inversions += 1;
                }
            }
        }
        let sorted = Config::from_unsorted(img).expect("permutation images stay distinct");
        (sorted, if inversions % 2 == 0 { 1 } else { -1 })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().filter(|(a, b)| a != b).map(|(a, b)| format!("{a}→{b}")).collect();
        if parts.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A sort-preserving bijection of elements, indexed by element id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMap {
    images: Vec<ElemId>,
}

impl StructureMap {
    pub fn apply(&self, w: ElemId) -> ElemId {
        self.images[w as usize]
    }

    pub fn images(&self) -> &[ElemId] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &w)| i as ElemId == w)
    }

    pub fn compose(&self, inner: &StructureMap) -> StructureMap {
        StructureMap { images: inner.images.iter().map(|&w| self.apply(w)).collect() }
    }
}

/// Why no cover exists: the first fiber where the construction breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub config: Config,
    pub detail: String,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no cover over {}: {}", self.config, self.detail)
    }
}

/// A `Q`-closed choice of one element per top fiber, built as a cone from the
/// smallest vertex.
fn section(h: &Polygroupoid) -> Result<BTreeMap<Config, ElemId>, Obstruction> {
    let n = h.arity();
    let v0 = h.vertices()[0];
    let mut s = BTreeMap::new();
    let tops = configs_of_size(h.vertices(), n);
    for y in tops.iter().filter(|y| y.position(v0).is_some()) {
        let f = h.fiber(y);
        let &w = f.first().ok_or_else(|| Obstruction { config: y.clone(), detail: "empty fiber".into() })?;
        s.insert(y.clone(), w);
    }
    for y in tops.iter().filter(|y| y.position(v0).is_none()) {
        let c = y.with_vertex(v0).unwrap();
        let mut horn: Vec<ElemId> = (0..=n).map(|i| if i == 0 { HOLE } else { s[&c.without(i)] }).collect();
        let w = h.filler(&horn).ok_or_else(|| Obstruction { config: y.clone(), detail: "cone horn has no filler".into() })?;
        horn[0] = w;
        s.insert(y.clone(), w);
    }
    Ok(s)
}

/// Induced automorphism using a binding action extracted over the first
/// top configuration.
pub fn induced_automorphism(h: &Polygroupoid, sigma: &Permutation) -> Result<StructureMap, Obstruction> {
    size_check(h, sigma)?;
    let z = h.top_configs().remove(0);
    let (_, act) = extract(h, &z).map_err(|e| Obstruction { config: z.clone(), detail: e.to_string() })?;
    induced_automorphism_with(h, &act, sigma)
}

fn size_check(h: &Polygroupoid, sigma: &Permutation) -> Result<(), Obstruction> {
    let vs: BTreeSet<Vertex> = h.vertices().iter().copied().collect();
    if let Some((&a, &b)) = sigma.0.iter().find(|(a, b)| !vs.contains(a) || !vs.contains(b)) {
        return Err(Obstruction { config: Config(vec![a.min(b)]), detail: format!("{a}→{b} leaves the vertex set") });
    }
    for (c, f) in h.fibers() {
        let (img, _) = sigma.image(c);
        if h.fiber(&img).len() != f.len() {
            return Err(Obstruction {
                config: c.clone(),
                detail: format!("fiber has {} elements but its image over {img} has {}", f.len(), h.fiber(&img).len()),
            });
        }
    }
    Ok(())
}

/// The canonical cover of `σ`: a section `s` is sent to itself and the
/// action is transported with the sign of `σ` on each configuration,
/// `φ(γ.s(y)) = sgn_y(σ)γ.s(σy)`. Lower sorts are forced through `π`.
pub fn induced_automorphism_with(h: &Polygroupoid, act: &ActionTable, sigma: &Permutation) -> Result<StructureMap, Obstruction> {
    size_check(h, sigma)?;
    let n = h.arity();
    let s = section(h)?;
    let g = act.group();
    let mut images = vec![HOLE; h.element_count()];
    for (y, fiber) in h.top_fibers() {
        let (img, sign) = sigma.image(y);
        for &w in fiber {
            let gamma = act
                .difference(s[y], w)
                .ok_or_else(|| Obstruction { config: y.clone(), detail: "element outside the action".into() })?;
            images[w as usize] = act.act(&g.scale(sign, &gamma), s[&img]);
        }
    }
    for v in h.vertices() {
        let id = h.id(&v.to_string()).expect("vertex elements are named by their value");
        images[id as usize] = h.id(&sigma.apply(*v).to_string()).unwrap();
    }
    for k in (2..=n).rev() {
        for (y, fiber) in h.fibers().filter(|(c, _)| c.len() == k) {
            let (img, _) = sigma.image(y);
            for &w in fiber {
                if images[w as usize] == HOLE {
                    let target = h.fiber(&img);
                    if fiber.len() != 1 || target.len() != 1 {
                        return Err(Obstruction { config: y.clone(), detail: format!("{} is not forced by any projection", h.name(w)) });
                    }
                    images[w as usize] = target[0];
                }
                let phi_w = images[w as usize];
                for (j, &p) in h.projections(w).iter().enumerate() {
                    let jj = img.position(sigma.apply(y.vertices()[j])).unwrap();
                    let forced = h.projections(phi_w)[jj];
                    let slot = &mut images[p as usize];
                    if *slot == HOLE {
                        *slot = forced;
                    } else if *slot != forced {
                        return Err(Obstruction {
                            config: h.config(p).clone(),
                            detail: format!("{} is forced to both {} and {}", h.name(p), h.name(*slot), h.name(forced)),
                        });
                    }
                }
            }
        }
    }
    for (c, f) in h.fibers() {
        if let Some(&w) = f.iter().find(|&&w| images[w as usize] == HOLE) {
            let target = h.fiber(&sigma.image(c).0);
            if f.len() == 1 && target.len() == 1 {
                images[w as usize] = target[0];
            } else {
                return Err(Obstruction { config: c.clone(), detail: format!("{} is not forced by any projection", h.name(w)) });
            }
        }
    }
    let mut seen = images.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != images.len() {
        return Err(Obstruction { config: h.top_configs().remove(0), detail: "cover is not injective".into() });
    }

    for t in h.q() {
        let c = h.tuple_config(t).expect("Q-tuples lie over a configuration");
        let (img, _) = sigma.image(&c);
        let mut mapped = vec![HOLE; n + 1];
        for (i, &w) in t.iter().enumerate() {
            mapped[img.position(sigma.apply(c.vertices()[i])).unwrap()] = images[w as usize];
        }
        if !h.in_q(&mapped) {
            return Err(Obstruction {
                config: c,
                detail: format!("Q-tuple {:?} maps outside Q", h.names_of(t)),
            });
        }
    }
    Ok(StructureMap { images })
}

/// Checks `φ_σ ∘ φ_g = φ_{σ∘g}` for every generator `σ` and every `g` in the
/// group generated by `generators`.
pub fn check_coherence(h: &Polygroupoid, generators: &[Permutation]) -> AxiomReport {
    let z = h.top_configs().remove(0);
    let act = match extract(h, &z) {
        Ok((_, act)) => act,
        Err(e) => {
            return AxiomReport::new(vec![AxiomCheck::fail(
                "coherence-of-induced-maps",
                0,
                Counterexample::Coherence { element: z.key(), detail: e.to_string() },
            )])
        }
    };
    let id = Permutation::identity(h.vertices());
    let mut maps: BTreeMap<Permutation, StructureMap> = BTreeMap::new();
    let mut queue = VecDeque::from([id]);
    let mut checked = 0u64;
    let cover = |p: &Permutation, maps: &mut BTreeMap<Permutation, StructureMap>| -> Result<StructureMap, Obstruction> {
        if let Some(m) = maps.get(p) {
            return Ok(m.clone());
        }
        let m = induced_automorphism_with(h, &act, p)?;
        maps.insert(p.clone(), m.clone());
        Ok(m)
    };
    let fail = |detail: String, element: String, checked: u64| {
        AxiomReport::new(vec![AxiomCheck::fail(
            "coherence-of-induced-maps",
            checked,
            Counterexample::Coherence { element, detail },
        )])
    };
    let mut visited = BTreeSet::new();
    while let Some(g) = queue.pop_front() {
        if !visited.insert(g.clone()) {
            continue;
        }
        let phi_g = match cover(&g, &mut maps) {
            Ok(m) => m,
            Err(o) => return fail(o.to_string(), o.config.key(), checked),
        };
        for sigma in generators {
            let sg = sigma.compose(&g);
            let (phi_s, phi_sg) = match (cover(sigma, &mut maps), cover(&sg, &mut maps)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(o), _) | (_, Err(o)) => return fail(o.to_string(), o.config.key(), checked),
            };
            checked += 1;
            let composed = phi_s.compose(&phi_g);
            if let Some(w) = (0..h.element_count()).find(|&w| composed.images[w] != phi_sg.images[w]) {
                return fail(format!("[{sigma}]∘[{g}] differs from [{sg}]"), h.name(w as ElemId).to_string(), checked);
            }
            if !visited.contains(&sg) {
                queue.push_back(sg);
            }
        }
    }
    AxiomReport::new(vec![AxiomCheck::pass("coherence-of-induced-maps", checked)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FinAbelianGroup;
    use crate::polygroupoid::{scramble, standard};

    #[test]
    fn identity_and_transposition() {
        let m = standard(&FinAbelianGroup::cyclic(4), &[0, 1, 2, 3], 2).unwrap();
        let h = &m.structure;
        let id = induced_automorphism(h, &Permutation::identity(h.vertices())).unwrap();
        assert!(id.is_identity());
        let tau = Permutation::transposition(h.vertices(), 1, 2);
        let phi = induced_automorphism(h, &tau).unwrap();
        assert!(!phi.is_identity());
        // coordinates are preserved up to the sign of the reordering
        let w = m.element(&Config::new(vec![0, 1]).unwrap(), &m.group.reduce(&[1])).unwrap();
        assert_eq!(m.coord(phi.apply(w)), Some(&m.group.reduce(&[1])));
        let w = m.element(&Config::new(vec![2, 3]).unwrap(), &m.group.reduce(&[1])).unwrap();
        assert_eq!(m.coord(phi.apply(w)), Some(&m.group.reduce(&[1])));
    }

    #[test]
    fn coherence_over_s4() {
        let m = standard(&FinAbelianGroup::cyclic(3), &[0, 1, 2, 3], 2).unwrap();
        let h = scramble(&m.structure, 5);
        let gens = [Permutation::transposition(h.vertices(), 0, 1), Permutation::cycle(h.vertices(), &[0, 1, 2, 3])];
        let r = check_coherence(&h, &gens);
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.checks[0].checked, 48);
    }

    #[test]
    fn permutation_composition_applies_inner_first() {
        let vs = [0, 1, 2];
        let a = Permutation::transposition(&vs, 0, 1);
        let b = Permutation::transposition(&vs, 1, 2);
        assert_eq!(a.compose(&b).apply(2), 0);
        assert!(a.compose(&a).is_identity());
    }
}
