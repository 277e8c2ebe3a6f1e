//! Simplex generators, integer chains and the alternating-sum boundary.
//!
//! A [`SimplexFamily`] is a finite graded set of generators together with a
//! face function. Face `i` of a generator lives over its support with the
//! `i`-th smallest point removed, and the family is only accepted when the
//! simplicial identity `∂^i ∂^j = ∂^{j-1} ∂^i` (`i < j`) holds on every
//! generator.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{image_solve, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("support {0:?} is not strictly increasing")]
    BadSupport(Vec<u32>),
    #[error("face index {index} out of range for dimension {dim}")]
    FaceIndex { index: usize, dim: usize },
    #[error("boundary of a dimension-0 chain")]
    DimensionZero,
    #[error("generator {0} is not in the family")]
    UnknownGenerator(SimplexGen),
    #[error("generator {gen} has dimension {found}, chain has dimension {expected}")]
    MixedDimension { gen: SimplexGen, expected: usize, found: usize },
    #[error("face {index} of {gen} is {face}, whose support is wrong")]
    FaceSupport { gen: SimplexGen, index: usize, face: SimplexGen },
    #[error("simplicial identity fails on {gen} at (i, j) = ({i}, {j})")]
    SimplicialIdentity { gen: SimplexGen, i: usize, j: usize },
}

/// Strictly increasing sequence of points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Support(Vec<u32>);

impl Support {
    pub fn new(points: Vec<u32>) -> Result<Self, ChainError> {
        if points.is_empty() || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ChainError::BadSupport(points));
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The support with its `i`-th smallest point removed.
    pub fn without(&self, i: usize) -> Support {
        let mut p = self.0.clone();
        p.remove(i);
        Support(p)
    }
}

impl TryFrom<Vec<u32>> for Support {
    type Error = ChainError;

    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Support::new(v)
    }
}

impl From<Support> for Vec<u32> {
    fn from(s: Support) -> Self {
        s.0
    }
}

/// A generator: a support plus an opaque label. Ordered by `(support, label)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexGen {
    support: Support,
    label: String,
}

impl SimplexGen {
    pub fn new(support: Support, label: impl Into<String>) -> Self {
        Self { support, label: label.into() }
    }

    pub fn unlabeled(points: &[u32]) -> Result<Self, ChainError> {
        Ok(Self::new(Support::new(points.to_vec())?, ""))
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }
}

impl fmt::Display for SimplexGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.support.0)?;
        if !self.label.is_empty() {
            write!(f, ":{}", self.label)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SimplexFamily {
    by_dim: BTreeMap<usize, Vec<SimplexGen>>,
    faces: BTreeMap<SimplexGen, Vec<SimplexGen>>,
}

impl SimplexFamily {
    /// Builds a family from its generators and a face function, validating
    /// face supports and the simplicial identity.
    pub fn from_fn(
        gens: impl IntoIterator<Item = SimplexGen>,
        face: impl Fn(&SimplexGen, usize) -> SimplexGen,
    ) -> Result<Self, ChainError> {
        let all: BTreeSet<SimplexGen> = gens.into_iter().collect();
        let mut by_dim: BTreeMap<usize, Vec<SimplexGen>> = BTreeMap::new();
        let mut faces = BTreeMap::new();
        for g in &all {
            by_dim.entry(g.dim()).or_default().push(g.clone());
            if g.dim() == 0 {
                continue;
            }
            let fs: Vec<SimplexGen> = (0..=g.dim()).map(|i| face(g, i)).collect();
            for (i, f) in fs.iter().enumerate() {
                if !all.contains(f) {
                    return Err(ChainError::UnknownGenerator(f.clone()));
                }
                if f.support != g.support.without(i) {
                    return Err(ChainError::FaceSupport { gen: g.clone(), index: i, face: f.clone() });
                }
            }
            faces.insert(g.clone(), fs);
        }
        let fam = Self { by_dim, faces };
        fam.check_simplicial_identity()?;
        Ok(fam)
    }

    /// All faces of the full simplex on `vertices` up to `max_dim`, unlabeled.
    pub fn full_simplex(vertices: &[u32], max_dim: usize) -> Self {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let gens = subsets_up_to(&sorted, max_dim + 1)
            .into_iter()
            .map(|s| SimplexGen::new(Support(s), ""));
        Self::from_fn(gens, |g, i| SimplexGen::new(g.support.without(i), "")).expect("full simplex is a valid family")
    }

    fn check_simplicial_identity(&self) -> Result<(), ChainError> {
        for (g, fs) in &self.faces {
            if g.dim() < 2 {
                continue;
            }
            for j in 1..=g.dim() {
                for i in 0..j {
                    let lhs = &self.faces[&fs[j]][i];
                    let rhs = &self.faces[&fs[i]][j - 1];
                    if lhs != rhs {
                        return Err(ChainError::SimplicialIdentity { gen: g.clone(), i, j });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn generators(&self, dim: usize) -> &[SimplexGen] {
        self.by_dim.get(&dim).map_or(&[], Vec::as_slice)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.by_dim.keys().next_back().copied()
    }

    pub fn contains(&self, g: &SimplexGen) -> bool {
        self.by_dim.get(&g.dim()).is_some_and(|v| v.binary_search(g).is_ok())
    }

    pub fn face(&self, g: &SimplexGen, i: usize) -> Result<&SimplexGen, ChainError> {
        if !self.contains(g) {
            return Err(ChainError::UnknownGenerator(g.clone()));
        }
        if g.dim() == 0 || i > g.dim() {
            return Err(ChainError::FaceIndex { index: i, dim: g.dim() });
        }
        Ok(&self.faces[g][i])
    }
}

fn subsets_up_to(points: &[u32], max_len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((start, cur)) = stack.pop() {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            continue;
        }
        for k in start..points.len() {
            let mut next = cur.clone();
            next.push(points[k]);
            stack.push((k + 1, next));
        }
    }
    out.sort();
    out
}

/// A finite integer combination of generators of one dimension. Zero
/// coefficients are never stored, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    dim: usize,
    terms: BTreeMap<SimplexGen, i64>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn generator(g: &SimplexGen) -> Self {
        Self::zero(g.dim()).plus_term(g.clone(), 1)
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (SimplexGen, i64)>) -> Result<Self, ChainError> {
        let mut c = Self::zero(dim);
        for (g, k) in terms {
            if g.dim() != dim {
                return Err(ChainError::MixedDimension { expected: dim, found: g.dim(), gen: g });
            }
            c = c.plus_term(g, k);
        }
        Ok(c)
    }

    fn plus_term(mut self, g: SimplexGen, k: i64) -> Self {
        let e = self.terms.entry(g).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SimplexGen, i64)> {
        self.terms.iter().map(|(g, &k)| (g, k))
    }

    pub fn coefficient(&self, g: &SimplexGen) -> i64 {
        self.terms.get(g).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: i64) -> Chain {
        if k == 0 {
            return Chain::zero(self.dim);
        }
        Chain { dim: self.dim, terms: self.terms.iter().map(|(g, &v)| (g.clone(), v * k)).collect() }
    }

    /// Union of the supports of all generators with nonzero coefficient.
    pub fn support(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|g| g.support.points().iter().copied()).collect()
    }
}

impl Add for &Chain {
    type Output = Chain;

    fn add(self, rhs: &Chain) -> Chain {
        assert_eq!(self.dim, rhs.dim, "adding chains of different dimensions");
        rhs.terms.iter().fold(self.clone(), |acc, (g, &k)| acc.plus_term(g.clone(), k))
    }
}

impl Sub for &Chain {
    type Output = Chain;

    fn sub(self, rhs: &Chain) -> Chain {
        self + &(-rhs)
    }
}

impl Neg for &Chain {
    type Output = Chain;

    fn neg(self) -> Chain {
        self.scale(-1)
    }
}

/// Linear extension of the family's `i`-th face function.
pub fn face_op(fam: &SimplexFamily, c: &Chain, i: usize) -> Result<Chain, ChainError> {
    if c.dim == 0 || i > c.dim {
        return Err(ChainError::FaceIndex { index: i, dim: c.dim });
    }
    let mut out = Chain::zero(c.dim - 1);
    for (g, k) in c.terms() {
        out = out.plus_term(fam.face(g, i)?.clone(), k);
    }
    Ok(out)
}

/// `∂c = Σ_i (-1)^i face_op(c, i)`.
pub fn boundary(fam: &SimplexFamily, c: &Chain) -> Result<Chain, ChainError> {
    if c.dim == 0 {
        return Err(ChainError::DimensionZero);
    }
    let mut out = Chain::zero(c.dim - 1);
    for i in 0..=c.dim {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        out = &out + &face_op(fam, c, i)?.scale(sign);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub cycle: bool,
    pub boundary: bool,
    pub pocket: bool,
}

/// Decides whether `c` is a cycle, an integer combination of boundaries of
/// `candidates`, and a pocket `±(f − g)` with `∂f = ∂g`.
///
/// Dimension-0 chains count as cycles and are never pockets.
pub fn classify(fam: &SimplexFamily, c: &Chain, candidates: &[SimplexGen]) -> Result<Classification, ChainError> {
    for g in c.terms.keys() {
        if !fam.contains(g) {
            return Err(ChainError::UnknownGenerator(g.clone()));
        }
    }
    let cycle = c.dim == 0 || boundary(fam, c)?.is_zero();

    let mut cand_bdry = Vec::with_capacity(candidates.len());
    for h in candidates {
        if h.dim() != c.dim + 1 {
            return Err(ChainError::MixedDimension { gen: h.clone(), expected: c.dim + 1, found: h.dim() });
        }
        cand_bdry.push(boundary(fam, &Chain::generator(h))?);
    }
    let rows: BTreeSet<&SimplexGen> = c.terms.keys().chain(cand_bdry.iter().flat_map(|b| b.terms.keys())).collect();
    let rows: Vec<&SimplexGen> = rows.into_iter().collect();
    let mut a = IntMatrix::zeros(rows.len(), cand_bdry.len());
    for (j, b) in cand_bdry.iter().enumerate() {
        for (i, g) in rows.iter().enumerate() {
            a.set(i, j, BigInt::from(b.coefficient(g)));
        }
    }
    let rhs: Vec<BigInt> = rows.iter().map(|g| BigInt::from(c.coefficient(g))).collect();
    let is_boundary = if rhs.iter().all(Zero::is_zero) {
        true
    } else {
        image_solve(&a, &rhs).expect("dimensions agree by construction").is_some()
    };

    let pocket = c.dim > 0 && c.terms.len() == 2 && {
        let mut it = c.terms.iter();
        let (f, kf) = it.next().unwrap();
        let (g, kg) = it.next().unwrap();
        *kf == -*kg
            && kf.abs() == 1
            && boundary(fam, &Chain::generator(f))? == boundary(fam, &Chain::generator(g))?
    };
    Ok(Classification { cycle, boundary: is_boundary, pocket })
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    support: Support,
    label: String,
    coef: i64,
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    dim: usize,
    terms: Vec<TermJson>,
}

impl Serialize for Chain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(g, &k)| TermJson { support: g.support.clone(), label: g.label.clone(), coef: k })
            .collect();
        ChainJson { dim: self.dim, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ChainJson::deserialize(d)?;
        Chain::from_terms(raw.dim, raw.terms.into_iter().map(|t| (SimplexGen::new(t.support, t.label), t.coef)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(points: &[u32], label: &str) -> SimplexGen {
        SimplexGen::new(Support::new(points.to_vec()).unwrap(), label)
    }

    /// Full 2-simplex on {0,1,2} plus a second 2-generator "b" with the same faces.
    fn pocket_family() -> SimplexFamily {
        let mut gens: Vec<SimplexGen> = SimplexFamily::full_simplex(&[0, 1, 2], 2).by_dim.into_values().flatten().collect();
        gens.push(g(&[0, 1, 2], "b"));
        SimplexFamily::from_fn(gens, |x, i| SimplexGen::new(x.support.without(i), "")).unwrap()
    }

    #[test]
    fn support_must_increase() {
        assert!(Support::new(vec![0, 0]).is_err());
        assert!(Support::new(vec![2, 1]).is_err());
        assert!(Support::new(vec![]).is_err());
        assert_eq!(Support::new(vec![1, 4, 7]).unwrap().without(1).points(), &[1, 7]);
    }

    #[test]
    fn face_op_examples() {
        let fam = pocket_family();
        let top = g(&[0, 1, 2], "");
        let c = Chain::generator(&top);
        assert_eq!(face_op(&fam, &c, 0).unwrap(), Chain::generator(&g(&[1, 2], "")));
        assert_eq!(face_op(&fam, &c.scale(2), 1).unwrap(), Chain::generator(&g(&[0, 2], "")).scale(2));
        let diff = &c - &Chain::generator(&g(&[0, 1, 2], "b"));
        assert!(face_op(&fam, &diff, 0).unwrap().is_zero());
        assert!(matches!(face_op(&fam, &c, 3), Err(ChainError::FaceIndex { .. })));
    }

    #[test]
    fn boundary_examples() {
        let fam = pocket_family();
        let edge = Chain::generator(&g(&[0, 1], ""));
        let expect = &Chain::generator(&g(&[1], "")) - &Chain::generator(&g(&[0], ""));
        assert_eq!(boundary(&fam, &edge).unwrap(), expect);
        let top = Chain::generator(&g(&[0, 1, 2], ""));
        assert!(boundary(&fam, &boundary(&fam, &top).unwrap()).unwrap().is_zero());
        assert!(boundary(&fam, &Chain::zero(2)).unwrap().is_zero());
        assert_eq!(boundary(&fam, &Chain::zero(1)).unwrap().dim(), 0);
        assert!(matches!(boundary(&fam, &Chain::zero(0)), Err(ChainError::DimensionZero)));
    }

    #[test]
    fn classify_examples() {
        let fam = pocket_family();
        let f = g(&[0, 1, 2], "");
        let h = g(&[0, 1, 2], "b");
        let pocket = &Chain::generator(&f) - &Chain::generator(&h);
        let cl = classify(&fam, &pocket, &[]).unwrap();
        assert!(cl.cycle && cl.pocket && !cl.boundary);

        let bd = boundary(&fam, &Chain::generator(&f)).unwrap();
        let cl = classify(&fam, &bd, &[f.clone()]).unwrap();
        assert!(cl.boundary && cl.cycle && !cl.pocket);

        let edge = Chain::generator(&g(&[0, 1], ""));
        assert_eq!(classify(&fam, &edge, &[f]).unwrap(), Classification { cycle: false, boundary: false, pocket: false });
    }

    #[test]
    fn bad_families_are_rejected() {
        let gens = SimplexFamily::full_simplex(&[0, 1, 2], 2).by_dim.into_values().flatten().collect::<Vec<_>>();
        // faces pointing at the wrong support
        let err = SimplexFamily::from_fn(gens.clone(), |x, i| SimplexGen::new(x.support.without((i + 1) % (x.dim() + 1)), ""));
        assert!(matches!(err, Err(ChainError::FaceSupport { .. })));

        // two labels on edge {0,1} but the vertex faces of "b" swap labels in a way that breaks ∂∂
        let mut gens = gens;
        gens.push(g(&[0], "b"));
        gens.push(g(&[0, 1], "b"));
        let fam = SimplexFamily::from_fn(gens, |x, i| {
            let s = x.support.without(i);
            if x.label() == "" && x.dim() == 2 && i == 2 {
                return g(&[0, 1], "b");
            }
            if x.label() == "b" && i == 1 {
                return g(&[0], "b");
            }
            SimplexGen::new(s, "")
        });
        assert!(matches!(fam, Err(ChainError::SimplicialIdentity { .. })));
    }

    #[test]
    fn json_is_sorted() {
        let c = Chain::from_terms(1, [(g(&[1, 2], ""), 3), (g(&[0, 1], "x"), -1)]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"dim":1,"terms":[{"support":[0,1],"label":"x","coef":-1},{"support":[1,2],"label":"","coef":3}]}"#
        );
        let back: Chain = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Chain>(r#"{"dim":2,"terms":[{"support":[0,1],"label":"","coef":1}]}"#).is_err());
    }

    #[test]
    fn chain_support_is_union() {
        let c = Chain::from_terms(1, [(g(&[0, 3], ""), 1), (g(&[3, 5], ""), 2)]).unwrap();
        assert_eq!(c.support().into_iter().collect::<Vec<_>>(), vec![0, 3, 5]);
    }
}
