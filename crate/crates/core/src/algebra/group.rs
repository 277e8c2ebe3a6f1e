use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::snf::snf;
use super::{AlgebraError, IntMatrix};

/// Finitely generated abelian group `Z/d_1 ⊕ … ⊕ Z/d_k ⊕ Z^r` with
/// `2 ≤ d_1 | d_2 | … | d_k`. The trivial group has no factors and rank 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGroup")]
pub struct FinAbelianGroup {
    invariant_factors: Vec<u64>,
    #[serde(default, skip_serializing_if = "is_zero")]
    free_rank: usize,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

#[derive(Deserialize)]
struct RawGroup {
    invariant_factors: Vec<u64>,
    #[serde(default)]
    free_rank: usize,
}

impl TryFrom<RawGroup> for FinAbelianGroup {
    type Error = AlgebraError;

    fn try_from(raw: RawGroup) -> Result<Self, Self::Error> {
        FinAbelianGroup::new(raw.invariant_factors, raw.free_rank)
    }
}

/// Coordinates of an element: one residue per invariant factor, then one
/// integer per free generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<i64>);

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Comma-joined coordinates, the key format used in action tables.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        parts.join(",")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl FinAbelianGroup {
    pub fn new(invariant_factors: Vec<u64>, free_rank: usize) -> Result<Self, AlgebraError> {
        if let Some(&d) = invariant_factors.iter().find(|&&d| d < 2) {
            return Err(AlgebraError::InvalidFactors(format!("invariant factor {d} is below 2")));
        }
        if let Some(w) = invariant_factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(AlgebraError::InvalidFactors(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(Self { invariant_factors, free_rank })
    }

    pub fn trivial() -> Self {
        Self { invariant_factors: Vec::new(), free_rank: 0 }
    }

    pub fn cyclic(m: u64) -> Self {
        Self::from_orders(&[m]).expect("cyclic order must be positive")
    }

    /// Normalizes a direct sum of cyclic groups of the given orders into
    /// invariant-factor form, e.g. `[2, 3] ↦ Z/6`. Orders must be positive.
    pub fn from_orders(orders: &[u64]) -> Result<Self, AlgebraError> {
        if orders.contains(&0) {
            return Err(AlgebraError::InvalidFactors("cyclic order 0".into()));
        }
        let rel = IntMatrix::diagonal(&orders.iter().map(|&o| o as i64).collect::<Vec<_>>());
        Ok(cokernel(&rel).group)
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// Number of coordinates of an element.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Coordinate orders; free coordinates report 0.
    pub fn orders(&self) -> Vec<u64> {
        let mut v = self.invariant_factors.clone();
        v.extend(std::iter::repeat(0).take(self.free_rank));
        v
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Reduces raw integer coordinates into canonical residues.
    pub fn reduce(&self, raw: &[i64]) -> GroupElement {
        assert_eq!(raw.len(), self.rank(), "coordinate count does not match group rank");
        GroupElement(raw.iter().zip(self.orders()).map(|(&x, d)| if d == 0 { x } else { x.rem_euclid(d as i64) }).collect())
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.0.len() == self.rank() && e.0.iter().zip(self.orders()).all(|(&x, d)| d == 0 || (0..d as i64).contains(&x))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let raw: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        self.reduce(&raw)
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let raw: Vec<i64> = a.0.iter().map(|x| -x).collect();
        self.reduce(&raw)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let raw: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect();
        self.reduce(&raw)
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        let raw: Vec<i64> = a.0.iter().map(|x| k * x).collect();
        self.reduce(&raw)
    }

    /// Signed sum `Σ signs[i]·elems[i]`.
    pub fn signed_sum<'a>(&self, terms: impl IntoIterator<Item = (i64, &'a GroupElement)>) -> GroupElement {
        let mut acc = vec![0i64; self.rank()];
        for (s, e) in terms {
            for (a, x) in acc.iter_mut().zip(&e.0) {
                *a += s * x;
            }
        }
        self.reduce(&acc)
    }

    /// Mixed-radix index of an element of a finite group; last coordinate varies fastest.
    pub fn index_of(&self, e: &GroupElement) -> usize {
        assert!(self.is_finite());
        e.0.iter().zip(&self.invariant_factors).fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        assert!(self.is_finite());
        let mut coords = vec![0i64; self.invariant_factors.len()];
        for (c, &d) in coords.iter_mut().zip(&self.invariant_factors).rev() {
            *c = (index % d as usize) as i64;
            index /= d as usize;
        }
        GroupElement(coords)
    }

    /// All elements in index order. Finite groups only.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let n = self.order().expect("cannot enumerate an infinite group") as usize;
        (0..n).map(|i| self.element_at(i))
    }

    pub fn element_order(&self, e: &GroupElement) -> u64 {
        assert!(self.is_finite());
        e.0.iter()
            .zip(&self.invariant_factors)
            .map(|(&x, &d)| d / (x as u64).gcd(&d))
            .fold(1, |a: u64, b| a.lcm(&b))
    }

    /// Builds the group presented by a commutative Cayley table on `0..n` and
    /// returns the coordinates of each table element. Fails when the table is
    /// not commutative or does not describe a group.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<(Self, Vec<GroupElement>), AlgebraError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(AlgebraError::NotAGroup("table is not square over its index set".into()));
        }
        for a in 0..n {
            for b in 0..a {
                if table[a][b] != table[b][a] {
                    return Err(AlgebraError::NotAGroup(format!("{a}+{b} != {b}+{a}")));
                }
            }
        }
        let mut rows = Vec::new();
        for a in 0..n {
            for b in a..n {
                let mut r = vec![0i64; n];
                r[a] += 1;
                r[b] += 1;
                r[table[a][b]] -= 1;
                rows.push(r);
            }
        }
        let co = cokernel(&IntMatrix::from_rows(&rows));
        let coords: Vec<GroupElement> = (0..n).map(|a| co.generator_coords(a)).collect();
        let group = co.group;
        if group.order() != Some(n as u64) {
            return Err(AlgebraError::NotAGroup(format!("presented group has order {:?}, table has {n} elements", group.order())));
        }
        for a in 0..n {
            for b in 0..n {
                if group.add(&coords[a], &coords[b]) != coords[table[a][b]] {
                    return Err(AlgebraError::NotAGroup(format!("coordinates do not respect {a}+{b}")));
                }
            }
        }
        Ok((group, coords))
    }
}

impl fmt::Display for FinAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Parses a comma-separated list of cyclic orders, normalizing to invariant
/// factors. `"1"` and the empty string give the trivial group.
impl FromStr for FinAbelianGroup {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::trivial());
        }
        let orders = s
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|e| AlgebraError::InvalidFactors(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_orders(&orders)
    }
}

/// True iff the two groups have equal invariant factors and free rank.
pub fn iso_check(a: &FinAbelianGroup, b: &FinAbelianGroup) -> bool {
    a.invariant_factors == b.invariant_factors && a.free_rank == b.free_rank
}

/// `Z^cols / rowspace(rel)` together with the change of basis that reads
/// off coordinates.
pub(crate) struct Cokernel {
    pub group: FinAbelianGroup,
    v: IntMatrix,
    v_inv: IntMatrix,
    /// Indices of surviving SNF diagonal positions with their order (0 = free).
    kept: Vec<(usize, u64)>,
}

impl Cokernel {
    /// Coordinates of the image of basis vector `e_a`.
    pub fn generator_coords(&self, a: usize) -> GroupElement {
        let raw: Vec<i64> = self
            .kept
            .iter()
            .map(|&(k, d)| {
                let y = self.v.get(a, k);
                if d == 0 {
                    y.to_i64().expect("free coordinate overflows i64")
                } else {
                    y.mod_floor(&BigInt::from(d)).to_i64().unwrap()
                }
            })
            .collect();
        GroupElement(raw)
    }

    /// A preimage in `Z^cols` of the `k`-th canonical generator.
    pub fn canonical_generator(&self, k: usize) -> Vec<BigInt> {
        self.v_inv.row(self.kept[k].0).to_vec()
    }
}

pub(crate) fn cokernel(rel: &IntMatrix) -> Cokernel {
    let cols = rel.cols();
    let parts = snf(rel);
    let diag = parts.diagonal();
    let mut torsion = Vec::new();
    let mut free = Vec::new();
    for k in 0..cols {
        let d = diag.get(k).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free.push((k, 0));
        } else if !d.is_one() {
            let d = d.to_u64().expect("invariant factor exceeds u64");
            torsion.push((k, d));
        }
    }
    let group = FinAbelianGroup {
        invariant_factors: torsion.iter().map(|&(_, d)| d).collect(),
        free_rank: free.len(),
    };
    torsion.extend(free);
    Cokernel { group, v: parts.v, v_inv: parts.v_inv, kept: torsion }
}

/// Integer kernel basis of `a` (as columns of the returned vectors).
pub(crate) fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let parts = snf(a);
    let rank = parts.rank();
    (rank..a.cols()).map(|k| parts.v.column(k)).collect()
}

/// The subgroup of `⊕ Z/orders[i]` generated by `gens`, in invariant-factor
/// form, with each canonical generator written in ambient coordinates.
pub fn generated_subgroup(orders: &[u64], gens: &[Vec<i64>]) -> (FinAbelianGroup, Vec<Vec<i64>>) {
    let m = orders.len();
    let p = gens.len();
    assert!(orders.iter().all(|&d| d > 0), "ambient group must be finite");
    assert!(gens.iter().all(|g| g.len() == m));
    if p == 0 {
        return (FinAbelianGroup::trivial(), Vec::new());
    }
    // [ gens as columns | diag(orders) ]
    let mut a = IntMatrix::zeros(m, p + m);
    for (j, g) in gens.iter().enumerate() {
        for i in 0..m {
            a.set(i, j, BigInt::from(g[i]));
        }
    }
    for i in 0..m {
        a.set(i, p + i, BigInt::from(orders[i]));
    }
    let relations: Vec<BigInt> = integer_kernel(&a).into_iter().flat_map(|k| k.into_iter().take(p)).collect();
    let rel = IntMatrix::new(relations.len() / p, p, relations).unwrap();
    let co = cokernel(&rel);
    let ambient = (0..co.group.rank())
        .map(|k| {
            let x = co.canonical_generator(k);
            (0..m)
                .map(|i| {
                    let s: BigInt = x.iter().zip(gens).map(|(c, g)| c * g[i]).sum();
                    s.mod_floor(&BigInt::from(orders[i])).to_i64().unwrap()
                })
                .collect()
        })
        .collect();
    (co.group, ambient)
}

/// Kernel of the homomorphism `⊕Z/src → ⊕Z/tgt` with matrix `mat`
/// (`tgt.len()` rows, `src.len()` columns).
pub fn kernel_of(src: &[u64], tgt: &[u64], mat: &[Vec<i64>]) -> (FinAbelianGroup, Vec<Vec<i64>>) {
    let (m, r) = (src.len(), tgt.len());
    let mut a = IntMatrix::zeros(r, m + r);
    for i in 0..r {
        for j in 0..m {
            a.set(i, j, BigInt::from(mat[i][j]));
        }
        a.set(i, m + i, -BigInt::from(tgt[i]));
    }
    let gens: Vec<Vec<i64>> = integer_kernel(&a)
        .into_iter()
        .map(|k| (0..m).map(|i| k[i].mod_floor(&BigInt::from(src[i])).to_i64().unwrap()).collect())
        .collect();
    generated_subgroup(src, &gens)
}

/// Homomorphism between finitely generated abelian groups, given by the
/// images of the source generators (column `j` is the image of generator `j`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    source: FinAbelianGroup,
    target: FinAbelianGroup,
    matrix: Vec<Vec<i64>>,
}

impl GroupHom {
    pub fn new(source: FinAbelianGroup, target: FinAbelianGroup, matrix: Vec<Vec<i64>>) -> Result<Self, AlgebraError> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(AlgebraError::InvalidHom(format!(
                "matrix shape does not match {} -> {}",
                source, target
            )));
        }
        let tgt_orders = target.orders();
        let mut matrix = matrix;
        for (row, &t) in matrix.iter_mut().zip(&tgt_orders) {
            if t > 0 {
                for x in row.iter_mut() {
                    *x = x.rem_euclid(t as i64);
                }
            }
        }
        for (j, &d) in source.orders().iter().enumerate() {
            if d == 0 {
                continue;
            }
            for (i, &t) in tgt_orders.iter().enumerate() {
                let image = matrix[i][j] as i128 * d as i128;
                let ok = if t == 0 { image == 0 } else { image % t as i128 == 0 };
                if !ok {
                    return Err(AlgebraError::InvalidHom(format!(
                        "generator {j} has order {d} but its image does not"
                    )));
                }
            }
        }
        Ok(Self { source, target, matrix })
    }

    pub fn identity(g: &FinAbelianGroup) -> Self {
        let r = g.rank();
        let matrix = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
        Self::new(g.clone(), g.clone(), matrix).unwrap()
    }

    /// Reduction `Z/a → Z/b` for `b | a`, or the analogous coordinatewise map
    /// aligned on the largest factors.
    pub fn reduction(source: &FinAbelianGroup, target: &FinAbelianGroup) -> Result<Self, AlgebraError> {
        let (s, t) = (source.invariant_factors(), target.invariant_factors());
        if !source.is_finite() || !target.is_finite() || t.len() > s.len() {
            return Err(AlgebraError::InvalidHom(format!("no coordinate reduction {source} -> {target}")));
        }
        let offset = s.len() - t.len();
        let matrix = (0..t.len()).map(|i| (0..s.len()).map(|j| i64::from(j == i + offset)).collect()).collect();
        let hom = Self::new(source.clone(), target.clone(), matrix)?;
        if !hom.is_surjective() {
            return Err(AlgebraError::InvalidHom(format!("reduction {source} -> {target} is not surjective")));
        }
        Ok(hom)
    }

    pub fn source(&self) -> &FinAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        let raw: Vec<i64> = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(x.coords()).map(|(a, b)| (*a as i128 * *b as i128) as i64).sum())
            .collect();
        self.target.reduce(&raw)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, AlgebraError> {
        if inner.target != self.source {
            return Err(AlgebraError::InvalidHom("composition of non-matching homomorphisms".into()));
        }
        let rank = inner.source.rank();
        let mut cols = Vec::with_capacity(rank);
        for j in 0..rank {
            let col: Vec<i64> = inner.matrix.iter().map(|r| r[j]).collect();
            cols.push(self.apply(&GroupElement(col)).0);
        }
        let matrix = (0..self.target.rank()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        GroupHom::new(inner.source.clone(), self.target.clone(), matrix)
    }

    /// Order of the image subgroup. Finite target only.
    pub fn image_order(&self) -> u64 {
        let orders = self.target.invariant_factors();
        assert!(self.target.is_finite());
        let cols: Vec<Vec<i64>> = (0..self.source.rank()).map(|j| self.matrix.iter().map(|r| r[j]).collect()).collect();
        generated_subgroup(orders, &cols).0.order().unwrap()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_order() == self.target.order().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crt_normalization() {
        assert_eq!(FinAbelianGroup::from_orders(&[2, 3]).unwrap(), FinAbelianGroup::cyclic(6));
        assert_eq!(FinAbelianGroup::from_orders(&[4, 2]).unwrap().invariant_factors(), &[2, 4]);
        assert_eq!(FinAbelianGroup::from_orders(&[1, 1]).unwrap(), FinAbelianGroup::trivial());
        assert_eq!("2,3".parse::<FinAbelianGroup>().unwrap().to_string(), "Z/6");
        assert_eq!("6,4".parse::<FinAbelianGroup>().unwrap().invariant_factors(), &[2, 12]);
        assert!("0".parse::<FinAbelianGroup>().is_err());
        assert!("x".parse::<FinAbelianGroup>().is_err());
    }

    #[test]
    fn validation_rejects_bad_chains() {
        assert!(FinAbelianGroup::new(vec![2, 3], 0).is_err());
        assert!(FinAbelianGroup::new(vec![1], 0).is_err());
        assert!(FinAbelianGroup::new(vec![2, 4], 1).is_ok());
        let bad: Result<FinAbelianGroup, _> = serde_json::from_str(r#"{"invariant_factors":[4,2]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn iso_examples() {
        let g24 = FinAbelianGroup::new(vec![2, 4], 0).unwrap();
        assert!(iso_check(&g24, &g24.clone()));
        assert!(!iso_check(&FinAbelianGroup::cyclic(8), &g24));
        assert!(iso_check(&FinAbelianGroup::cyclic(6), &FinAbelianGroup::from_orders(&[2, 3]).unwrap()));
    }

    #[test]
    fn element_indexing_round_trips() {
        let g = FinAbelianGroup::new(vec![2, 6], 0).unwrap();
        let all: Vec<_> = g.elements().collect();
        assert_eq!(all.len(), 12);
        for (i, e) in all.iter().enumerate() {
            assert_eq!(g.index_of(e), i);
            assert!(g.contains(e));
        }
        assert_eq!(g.element_order(&g.reduce(&[1, 3])), 2);
        assert_eq!(g.element_order(&g.reduce(&[1, 1])), 6);
    }

    #[test]
    fn cayley_table_of_z4_and_klein() {
        let z4: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect();
        let (g, coords) = FinAbelianGroup::from_cayley_table(&z4).unwrap();
        assert_eq!(g, FinAbelianGroup::cyclic(4));
        assert_eq!(coords[0], g.zero());
        let klein: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        let (k, _) = FinAbelianGroup::from_cayley_table(&klein).unwrap();
        assert_eq!(k.invariant_factors(), &[2, 2]);
        let mut broken = z4.clone();
        broken[1][2] = 0;
        broken[2][1] = 0;
        assert!(FinAbelianGroup::from_cayley_table(&broken).is_err());
    }

    #[test]
    fn subgroups_and_kernels() {
        // <2> in Z/8 is Z/4
        let (h, gens) = generated_subgroup(&[8], &[vec![2]]);
        assert_eq!(h, FinAbelianGroup::cyclic(4));
        assert_eq!(gens.len(), 1);
        assert_eq!(FinAbelianGroup::cyclic(8).element_order(&GroupElement(gens[0].clone())), 4);
        // kernel of reduction Z/8 -> Z/2 is Z/4
        let (k, _) = kernel_of(&[8], &[2], &[vec![1]]);
        assert_eq!(k, FinAbelianGroup::cyclic(4));
        // diagonal of Z/4 x Z/4 under the difference map
        let (d, _) = kernel_of(&[4, 4], &[4], &[vec![1, -1]]);
        assert_eq!(d, FinAbelianGroup::cyclic(4));
    }

    #[test]
    fn homs_validate_and_compose() {
        let z8 = FinAbelianGroup::cyclic(8);
        let z4 = FinAbelianGroup::cyclic(4);
        let z2 = FinAbelianGroup::cyclic(2);
        assert!(GroupHom::new(z4.clone(), z8.clone(), vec![vec![1]]).is_err());
        assert!(GroupHom::new(z4.clone(), z8.clone(), vec![vec![2]]).is_ok());
        let a = GroupHom::reduction(&z8, &z4).unwrap();
        let b = GroupHom::reduction(&z4, &z2).unwrap();
        assert_eq!(b.compose(&a).unwrap(), GroupHom::reduction(&z8, &z2).unwrap());
        let doubling = GroupHom::new(z4.clone(), z4.clone(), vec![vec![2]]).unwrap();
        assert!(!doubling.is_surjective());
        assert!(GroupHom::reduction(&z4, &z8).is_err());
    }
}
