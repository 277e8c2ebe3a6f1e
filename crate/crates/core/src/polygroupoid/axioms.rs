use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{configs_of_size, Config, ElemId, Polygroupoid, PolygroupoidError, Vertex, HOLE};
use crate::report::{AxiomCheck, AxiomReport, Counterexample};

impl Polygroupoid {
    /// First failing pair `(i, j)` (1-based, `i < j`) of the compatibility
    /// identities `π_i(w_j) = π_{j−1}(w_i)`, or `None` when compatible. For
    /// sort 1 the pair names two equal vertices.
    pub fn compatibility_witness(&self, tuple: &[ElemId]) -> Result<Option<(usize, usize)>, PolygroupoidError> {
        self.partial_witness(tuple, None)
    }

    pub fn is_compatible(&self, tuple: &[ElemId]) -> Result<bool, PolygroupoidError> {
        Ok(self.compatibility_witness(tuple)?.is_none())
    }

    /// Partial compatibility: the identities are only required between slots
    /// other than `deleted` (1-based). Entries at `deleted` are ignored.
    pub fn is_partially_compatible(&self, tuple: &[ElemId], deleted: usize) -> Result<bool, PolygroupoidError> {
        Ok(self.partial_witness(tuple, Some(deleted))?.is_none())
    }

    fn partial_witness(&self, tuple: &[ElemId], deleted: Option<usize>) -> Result<Option<(usize, usize)>, PolygroupoidError> {
        let live: Vec<(usize, ElemId)> =
            tuple.iter().enumerate().map(|(i, &w)| (i + 1, w)).filter(|(i, _)| Some(*i) != deleted).collect();
        let Some(&(_, first)) = live.first() else {
            return Ok(None);
        };
        let k = self.sort(first);
        if live.iter().any(|&(_, w)| w == HOLE || self.sort(w) != k) {
            return Err(PolygroupoidError::MixedSorts);
        }
        if tuple.len() != k + 1 {
            return Err(PolygroupoidError::BadTuple {
                tuple: tuple.iter().map(|&w| if w == HOLE { "_".into() } else { self.name(w).to_string() }).collect(),
                detail: format!("sort-{k} tuples have {} entries", k + 1),
            });
        }
        if k == 1 {
            if deleted.is_some() {
                return Ok(None);
            }
            return Ok((tuple[0] == tuple[1]).then_some((1, 2)));
        }
        for (a, &(i, wi)) in live.iter().enumerate() {
            for &(j, wj) in &live[a + 1..] {
                if self.projections(wj)[i - 1] != self.projections(wi)[j - 2] {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// Coherence of one element: `π(w)` is a compatible tuple and `π_j(w)`
    /// lies over the configuration of `w` without its `j`-th vertex.
    pub(crate) fn coherence_defect(&self, id: ElemId) -> Option<String> {
        let k = self.sort(id);
        if k == 1 {
            return None;
        }
        let pi = self.projections(id);
        let c = self.config(id);
        for (j, &p) in pi.iter().enumerate() {
            if self.sort(p) != k - 1 {
                return Some(format!("π_{} has sort {}, expected {}", j + 1, self.sort(p), k - 1));
            }
            let want = c.without(j);
            if *self.config(p) != want {
                return Some(format!("π_{} lies over {}, expected {}", j + 1, self.config(p), want));
            }
        }
        match self.compatibility_witness(pi) {
            Ok(None) => None,
            Ok(Some((i, j))) => Some(format!("projection tuple is incompatible at ({i}, {j})")),
            Err(e) => Some(e.to_string()),
        }
    }
}

/// Exhaustive check of coherence, `Q`-compatibility, unique horn-filling and
/// local finiteness.
pub fn check_axioms(h: &Polygroupoid) -> AxiomReport {
    let n = h.arity();
    let mut checks = Vec::new();

    let coherence = (0..h.element_count() as ElemId).find_map(|id| h.coherence_defect(id).map(|d| (id, d)));
    checks.push(match coherence {
        None => AxiomCheck::pass("coherence", h.element_count() as u64),
        Some((id, detail)) => AxiomCheck::fail(
            "coherence",
            h.element_count() as u64,
            Counterexample::Coherence { element: h.name(id).to_string(), detail },
        ),
    });

    let bad_q = h.q().iter().find_map(|t| {
        if t.iter().any(|&w| h.sort(w) != n) {
            return Some((t, (0, 0)));
        }
        match h.compatibility_witness(t) {
            Ok(None) => None,
            Ok(Some(p)) => Some((t, p)),
            Err(_) => Some((t, (0, 0))),
        }
    });
    checks.push(match bad_q {
        None => AxiomCheck::pass("q-compatibility", h.q().len() as u64),
        Some((t, pair)) => AxiomCheck::fail(
            "q-compatibility",
            h.q().len() as u64,
            Counterexample::QIncompatible { tuple: h.names_of(t), pair },
        ),
    });

    let mut seen: FxHashMap<Vec<ElemId>, &[ElemId]> = FxHashMap::default();
    let mut collision = None;
    'outer: for t in h.q() {
        for slot in 0..t.len() {
            let mut key = t.clone();
            key[slot] = HOLE;
            if let Some(prev) = seen.insert(key, t) {
                collision = Some((slot, prev, t.as_slice()));
                break 'outer;
            }
        }
    }
    checks.push(match collision {
        None => AxiomCheck::pass("horn-uniqueness", (h.q().len() * (n + 1)) as u64),
        Some((slot, a, b)) => AxiomCheck::fail(
            "horn-uniqueness",
            (h.q().len() * (n + 1)) as u64,
            Counterexample::HornCollision { slot: slot + 1, first: h.names_of(a), second: h.names_of(b) },
        ),
    });

    // Fibers are explicit finite lists; the check records how many top fibers were seen.
    checks.push(AxiomCheck::pass("local-finiteness", h.top_fibers().count() as u64));
    AxiomReport::new(checks)
}

/// Rows of the associativity grid: `row[i][j]` is the pair index feeding
/// slot `j` of row `i` (both 0-based), over `n + 2` vertices.
struct GridShape {
    pairs: Vec<(usize, usize)>,
    rows: Vec<Vec<usize>>,
    /// Rows that become complete after assigning pair `p`.
    completes: Vec<Vec<usize>>,
}

impl GridShape {
    fn new(n: usize) -> Self {
        let m = n + 2;
        let mut pairs = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                pairs.push((a, b));
            }
        }
        let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
        let rows: Vec<Vec<usize>> =
            (0..m).map(|i| (0..=n).map(|j| index(i, if j < i { j } else { j + 1 })).collect()).collect();
        let mut completes = vec![Vec::new(); pairs.len()];
        for (i, row) in rows.iter().enumerate() {
            let last = *row.iter().max().unwrap();
            completes[last].push(i);
        }
        Self { pairs, rows, completes }
    }
}

struct GridSearch<'a> {
    h: &'a Polygroupoid,
    shape: &'a GridShape,
    candidates: Vec<&'a [ElemId]>,
    assignment: Vec<ElemId>,
    row_in_q: Vec<Option<bool>>,
    grids: u64,
    failure: Option<(usize, Vec<ElemId>)>,
}

impl GridSearch<'_> {
    fn run(&mut self, p: usize) {
        if self.failure.is_some() {
            return;
        }
        if p == self.shape.pairs.len() {
            self.grids += 1;
            let missing: Vec<usize> = (0..self.row_in_q.len()).filter(|&i| self.row_in_q[i] == Some(false)).collect();
            if missing.len() == 1 {
                self.failure = Some((missing[0], self.assignment.clone()));
            }
            return;
        }
        let cands = self.candidates[p];
        for &w in cands {
            self.assignment[p] = w;
            if !self.rows_consistent(p) {
                continue;
            }
            let mut misses = self.row_in_q.iter().filter(|r| **r == Some(false)).count();
            let done = &self.shape.completes[p];
            for &i in done {
                let row: Vec<ElemId> = self.shape.rows[i].iter().map(|&q| self.assignment[q]).collect();
                let ok = self.h.in_q(&row);
                self.row_in_q[i] = Some(ok);
                misses += usize::from(!ok);
            }
            if misses < 2 {
                self.run(p + 1);
            }
            for &i in done {
                self.row_in_q[i] = None;
            }
            if self.failure.is_some() {
                return;
            }
        }
    }

    /// Compatibility between the newly placed pair `p` and every earlier
    /// pair of the two rows it belongs to.
    fn rows_consistent(&self, p: usize) -> bool {
        let (a, b) = self.shape.pairs[p];
        for r in [a, b] {
            let row = &self.shape.rows[r];
            let Some(slot) = row.iter().position(|&q| q == p) else { continue };
            for (other, &q) in row.iter().enumerate() {
                if q >= p || other == slot {
                    continue;
                }
                let (i, j) = if other < slot { (other, slot) } else { (slot, other) };
                let (wi, wj) = (self.assignment[row[i]], self.assignment[row[j]]);
                if self.h.projections(wj)[i] != self.h.projections(wi)[j - 1] {
                    return false;
                }
            }
        }
        true
    }
}

/// Enumerates every grid `{w^i_j}` over the `n + 2` vertices of `c` and
/// checks that `Q` on all rows but one forces `Q` on the remaining row.
pub fn check_associativity(h: &Polygroupoid, c: &[Vertex]) -> Result<AxiomReport, PolygroupoidError> {
    let n = h.arity();
    if c.len() != n + 2 {
        return Err(PolygroupoidError::Config(format!("associativity needs {} vertices, got {}", n + 2, c.len())));
    }
    let config = Config::from_unsorted(c.to_vec()).map_err(|_| PolygroupoidError::RepeatedVertices(c.to_vec()))?;
    if config.vertices().iter().any(|v| h.vertices().binary_search(v).is_err()) {
        return Err(PolygroupoidError::Config(format!("{config} is not inside the vertex set")));
    }
    let shape = GridShape::new(n);
    let mut candidates = Vec::with_capacity(shape.pairs.len());
    for &(a, b) in &shape.pairs {
        let fc = config.without(b).without(a);
        let f = h.fiber(&fc);
        if f.is_empty() {
            return Err(PolygroupoidError::EmptyFiber(fc));
        }
        candidates.push(f);
    }
    let mut search = GridSearch {
        h,
        shape: &shape,
        candidates,
        assignment: vec![HOLE; shape.pairs.len()],
        row_in_q: vec![None; n + 2],
        grids: 0,
        failure: None,
    };
    search.run(0);
    let check = match search.failure {
        None => AxiomCheck::pass("associativity", search.grids),
        Some((row, assignment)) => {
            let grid = shape
                .rows
                .iter()
                .map(|r| r.iter().map(|&p| h.name(assignment[p]).to_string()).collect())
                .collect();
            AxiomCheck::fail(
                "associativity",
                search.grids,
                Counterexample::Associativity { config: config.vertices().to_vec(), row: row + 1, grid },
            )
        }
    };
    Ok(AxiomReport::new(vec![check]))
}

/// Associativity on every `(n+2)`-configuration, merged in configuration order.
pub fn check_associativity_all(h: &Polygroupoid) -> Result<AxiomReport, PolygroupoidError> {
    let configs = configs_of_size(h.vertices(), h.arity() + 2);
    let results: Vec<AxiomReport> =
        configs.par_iter().map(|c| check_associativity(h, c.vertices())).collect::<Result<_, _>>()?;
    let grids: u64 = results.iter().flat_map(|r| &r.checks).map(|c| c.checked).sum();
    let failed = results.into_iter().flat_map(|r| r.checks).find(|c| !c.passed);
    Ok(AxiomReport::new(vec![match failed {
        None => AxiomCheck::pass("associativity", grids),
        Some(mut c) => {
            c.checked = grids;
            c
        }
    }]))
}

/// True when `cx` is a genuine violation in `h`. Counterexample kinds that
/// concern actions or towers are never refuted here.
pub fn refutes(h: &Polygroupoid, cx: &Counterexample) -> bool {
    let ids = |names: &[String]| h.ids_of(names).ok();
    match cx {
        Counterexample::Coherence { element, .. } => {
            h.id(element).is_some_and(|id| h.coherence_defect(id).is_some())
        }
        Counterexample::QIncompatible { tuple, .. } => ids(tuple).is_some_and(|t| {
            h.in_q(&t) && (t.iter().any(|&w| h.sort(w) != h.arity()) || !matches!(h.is_compatible(&t), Ok(true)))
        }),
        Counterexample::HornCollision { slot, first, second } => match (ids(first), ids(second)) {
            (Some(a), Some(b)) => {
                *slot >= 1
                    && *slot <= a.len()
                    && a.len() == b.len()
                    && a != b
                    && h.in_q(&a)
                    && h.in_q(&b)
                    && (0..a.len()).all(|i| i + 1 == *slot || a[i] == b[i])
            }
            _ => false,
        },
        Counterexample::Associativity { config, row, grid } => refutes_grid(h, config, *row, grid),
        _ => false,
    }
}

fn refutes_grid(h: &Polygroupoid, config: &[Vertex], row: usize, grid: &[Vec<String>]) -> bool {
    let n = h.arity();
    let Ok(c) = Config::new(config.to_vec()) else { return false };
    if c.len() != n + 2 || grid.len() != n + 2 || row == 0 || row > n + 2 {
        return false;
    }
    let Some(rows) = grid.iter().map(|r| h.ids_of(r).ok()).collect::<Option<Vec<_>>>() else {
        return false;
    };
    // shape, identification w^i_j = w^{j+1}_i, and fibers over c minus two vertices
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n + 1 || !matches!(h.is_compatible(r), Ok(true)) {
            return false;
        }
        for (j, &w) in r.iter().enumerate() {
            let other = if j < i { j } else { j + 1 };
            let want = c.without(i.max(other)).without(i.min(other));
            if *h.config(w) != want {
                return false;
            }
            if i <= j && rows[j + 1][i] != w {
                return false;
            }
        }
    }
    (0..n + 2).all(|i| (i + 1 == row) != h.in_q(&rows[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FinAbelianGroup;
    use crate::polygroupoid::standard;

    #[test]
    fn sort_one_compatibility() {
        let h = standard(&FinAbelianGroup::cyclic(2), &[0, 1, 2], 2).unwrap().structure;
        let v0 = h.id("0").unwrap();
        let v1 = h.id("1").unwrap();
        assert!(h.is_compatible(&[v0, v1]).unwrap());
        assert_eq!(h.compatibility_witness(&[v0, v0]).unwrap(), Some((1, 2)));
        assert!(h.is_partially_compatible(&[v0, v0], 1).unwrap());
    }

    #[test]
    fn mixed_sorts_are_rejected() {
        let h = standard(&FinAbelianGroup::cyclic(2), &[0, 1, 2], 2).unwrap().structure;
        let v0 = h.id("0").unwrap();
        let e = h.fiber(&Config::new(vec![0, 1]).unwrap())[0];
        assert!(matches!(h.is_compatible(&[v0, e]), Err(PolygroupoidError::MixedSorts)));
    }

    #[test]
    fn grid_shape_identifies_pairs() {
        let s = GridShape::new(2);
        assert_eq!(s.pairs.len(), 6);
        // w^i_j = w^{j+1}_i for i ≤ j, 1-based
        for i in 1..=4 {
            for j in i..=3 {
                assert_eq!(s.rows[i - 1][j - 1], s.rows[j][i - 1]);
            }
        }
        assert_eq!(s.completes.iter().map(Vec::len).sum::<usize>(), 4);
    }

    #[test]
    fn associativity_argument_errors() {
        let h = standard(&FinAbelianGroup::cyclic(2), &[0, 1, 2, 3], 2).unwrap().structure;
        assert!(check_associativity(&h, &[0, 1, 2]).is_err());
        assert!(check_associativity(&h, &[0, 1, 2, 2]).is_err());
        assert!(check_associativity(&h, &[0, 1, 2, 9]).is_err());
        assert!(check_associativity(&h, &[3, 1, 2, 0]).unwrap().passed());
    }
}
