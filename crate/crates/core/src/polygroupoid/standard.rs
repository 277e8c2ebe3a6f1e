use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{configs_of_size, Config, ElemId, Polygroupoid, PolygroupoidError, Vertex};
use crate::algebra::{FinAbelianGroup, GroupElement};

/// A standard polygroupoid together with the torsor coordinates it was
/// built from.
#[derive(Clone, Debug)]
pub struct StandardModel {
    pub structure: Polygroupoid,
    pub group: FinAbelianGroup,
    /// Group coordinate of each top-sort element, indexed by element id.
    coords: Vec<Option<GroupElement>>,
    /// Top-sort element per (config, group index).
    by_coord: BTreeMap<Config, Vec<ElemId>>,
}

impl StandardModel {
    pub fn coord(&self, id: ElemId) -> Option<&GroupElement> {
        self.coords.get(id as usize).and_then(Option::as_ref)
    }

    /// The top-sort element over `c` with coordinate `g`.
    pub fn element(&self, c: &Config, g: &GroupElement) -> Option<ElemId> {
        self.by_coord.get(c).map(|ids| ids[self.group.index_of(g)])
    }
}

fn config_label(c: &Config) -> String {
    c.vertices().iter().map(u32::to_string).collect::<Vec<_>>().join("-")
}

fn element_name(c: &Config, idx: usize, width: usize) -> String {
    if c.len() == 1 {
        c.vertices()[0].to_string()
    } else {
        format!("{}/{idx:0width$}", config_label(c))
    }
}

/// The standard polygroupoid of `G` over `vertices`: singleton lower sorts,
/// a copy of `G` over every top configuration, and
/// `Q = {Σ_{i=1}^{n+1} (−1)^i x_i = 0}`.
pub fn standard(g: &FinAbelianGroup, vertices: &[Vertex], n: usize) -> Result<StandardModel, PolygroupoidError> {
    if n < 2 {
        return Err(PolygroupoidError::Arity(n));
    }
    let order = g.order().ok_or(PolygroupoidError::InfiniteGroup)? as usize;
    let mut verts = vertices.to_vec();
    verts.sort_unstable();
    verts.dedup();
    if verts.len() != vertices.len() {
        return Err(PolygroupoidError::RepeatedVertices(vertices.to_vec()));
    }
    if verts.len() < n + 1 {
        return Err(PolygroupoidError::TooFewVertices { needed: n + 1, got: verts.len() });
    }
    let width = (order - 1).to_string().len();

    let mut fibers = BTreeMap::new();
    let mut pi = BTreeMap::new();
    for k in 2..=n {
        for c in configs_of_size(&verts, k) {
            let lower: Vec<String> = (0..k).map(|j| element_name(&c.without(j), 0, 1)).collect();
            let names: Vec<String> =
                if k == n { (0..order).map(|i| element_name(&c, i, width)).collect() } else { vec![element_name(&c, 0, 1)] };
            for name in &names {
                pi.insert(name.clone(), lower.clone());
            }
            fibers.insert(c, names);
        }
    }

    let elems: Vec<GroupElement> = g.elements().collect();
    let mut q = Vec::new();
    for c in configs_of_size(&verts, n + 1) {
        let mut idx = vec![0usize; n];
        loop {
            // x_{n+1} = (−1)^n Σ_{i≤n} (−1)^i x_i
            let terms = idx.iter().enumerate().map(|(i, &x)| (if (i + 1) % 2 == 0 { 1 } else { -1 }, &elems[x]));
            let partial = g.signed_sum(terms);
            let last = if n % 2 == 0 { partial } else { g.neg(&partial) };
            let mut t: Vec<String> = idx.iter().enumerate().map(|(i, &x)| element_name(&c.without(i), x, width)).collect();
            t.push(element_name(&c.without(n), g.index_of(&last), width));
            q.push(t);
            if !advance(&mut idx, order) {
                break;
            }
        }
    }

    let structure = Polygroupoid::from_parts(n, verts, fibers, &pi, &q)?;
    let mut coords = vec![None; structure.element_count()];
    let mut by_coord = BTreeMap::new();
    for (c, ids) in structure.top_fibers() {
        // names are zero-padded, so fiber order is coordinate order
        for (i, &id) in ids.iter().enumerate() {
            coords[id as usize] = Some(elems[i].clone());
        }
        by_coord.insert(c.clone(), ids.to_vec());
    }
    Ok(StandardModel { structure, group: g.clone(), coords, by_coord })
}

/// Odometer over `{0..base}^len`; false once it wraps around.
pub(crate) fn advance(idx: &mut [usize], base: usize) -> bool {
    for x in idx.iter_mut().rev() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

/// Relabels every top-sort fiber by an independent seeded bijection and
/// rewrites `Q` accordingly. Names stay in place, so coordinates can no
/// longer be read off them.
pub fn scramble(h: &Polygroupoid, seed: u64) -> Polygroupoid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut relabel: Vec<ElemId> = (0..h.element_count() as ElemId).collect();
    for (_, ids) in h.top_fibers() {
        let mut shuffled = ids.to_vec();
        shuffled.shuffle(&mut rng);
        for (&from, &to) in ids.iter().zip(&shuffled) {
            relabel[from as usize] = to;
        }
    }
    let q = h.q().iter().map(|t| t.iter().map(|&w| relabel[w as usize]).collect()).collect();
    h.with_q(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygroupoid::check_axioms;

    #[test]
    fn z2_on_three_vertices() {
        let m = standard(&FinAbelianGroup::cyclic(2), &[0, 1, 2], 2).unwrap();
        let h = &m.structure;
        assert_eq!(h.top_fibers().count(), 3);
        assert!(h.top_fibers().all(|(_, f)| f.len() == 2));
        assert_eq!(h.q().len(), 4);
        assert!(check_axioms(h).passed());
    }

    #[test]
    fn trivial_group_has_all_compatible_tuples() {
        let m = standard(&FinAbelianGroup::trivial(), &[0, 1, 2, 3], 3).unwrap();
        assert!(m.structure.top_fibers().all(|(_, f)| f.len() == 1));
        assert_eq!(m.structure.q().len(), 1);
        assert_eq!(m.structure.name(m.structure.q()[0][0]), "1-2-3/0");
    }

    #[test]
    fn coordinates_follow_names() {
        let m = standard(&FinAbelianGroup::cyclic(12), &[0, 1, 2], 2).unwrap();
        let c = Config::new(vec![0, 2]).unwrap();
        let g = FinAbelianGroup::cyclic(12).reduce(&[10]);
        assert_eq!(m.structure.name(m.element(&c, &g).unwrap()), "0-2/10");
    }

    #[test]
    fn preconditions() {
        let z2 = FinAbelianGroup::cyclic(2);
        assert!(matches!(standard(&z2, &[0, 1], 2), Err(PolygroupoidError::TooFewVertices { .. })));
        let free = FinAbelianGroup::new(vec![], 1).unwrap();
        assert!(matches!(standard(&free, &[0, 1, 2], 2), Err(PolygroupoidError::InfiniteGroup)));
    }

    #[test]
    fn scramble_is_deterministic() {
        let m = standard(&FinAbelianGroup::cyclic(4), &[0, 1, 2, 3], 2).unwrap();
        let a = serde_json::to_string(&scramble(&m.structure, 7)).unwrap();
        let b = serde_json::to_string(&scramble(&m.structure, 7)).unwrap();
        assert_eq!(a, b);
        assert!(check_axioms(&scramble(&m.structure, 7)).passed());
    }
}
