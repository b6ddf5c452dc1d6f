use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::canonical::{canonical_form, canonical_key, CanonicalKey};
use super::{mutate, BMatrix};
use crate::error::{Error, Result};

/// Default cap on the number of classes visited.
pub const DEFAULT_LIMIT: usize = 1_000_000;

/// Mutation class up to simultaneous row and column permutation.
///
/// Representatives are kept in BFS discovery order and each one is stored in
/// its canonical arrangement. Edges are unordered pairs of indices into that
/// order.
#[derive(Debug, Clone)]
pub struct MutationClass {
    origin: BMatrix,
    reps: Vec<(CanonicalKey, BMatrix)>,
    index: HashMap<CanonicalKey, usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl MutationClass {
    pub fn origin(&self) -> &BMatrix {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.reps.iter().map(|(k, _)| k)
    }

    pub fn representatives(&self) -> impl Iterator<Item = &BMatrix> {
        self.reps.iter().map(|(_, b)| b)
    }

    pub fn get(&self, i: usize) -> Option<&BMatrix> {
        self.reps.get(i).map(|(_, b)| b)
    }

    pub fn index_of(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Undirected edges as `(i, j)` with `i < j`, 0-based discovery indices.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// Every mutation of every representative lands back in the class.
    pub fn is_closed(&self) -> Result<bool> {
        for (_, b) in &self.reps {
            for k in 0..b.n() {
                if !self.index.contains_key(&canonical_key(&mutate(b, k)?)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Breadth-first enumeration from `seed`.
///
/// New keys found while expanding one node are sorted before they are queued,
/// so the discovery order depends only on the seed's class. Fails with
/// [`Error::LimitExceeded`] once more than `limit` classes have been found.
pub fn enumerate_class(seed: &BMatrix, limit: usize) -> Result<MutationClass> {
    let (key, perm) = canonical_form(seed)?;
    let mut cls = MutationClass {
        origin: seed.clone(),
        reps: vec![(key.clone(), seed.permuted(&perm))],
        index: HashMap::from([(key, 0)]),
        edges: BTreeSet::new(),
    };
    if limit == 0 {
        return Err(Error::LimitExceeded { limit });
    }
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let b = cls.reps[i].1.clone();
        let mut found = Vec::with_capacity(b.n());
        for k in 0..b.n() {
            let m = mutate(&b, k)?;
            let (key, perm) = canonical_form(&m)?;
            found.push((key, m.permuted(&perm)));
        }
        let mut fresh: Vec<&(CanonicalKey, BMatrix)> = found
            .iter()
            .filter(|(key, _)| !cls.index.contains_key(key))
            .collect();
        fresh.sort_by(|x, y| x.0.cmp(&y.0));
        fresh.dedup_by(|x, y| x.0 == y.0);
        for (key, m) in fresh {
            let j = cls.reps.len();
            if j >= limit {
                return Err(Error::LimitExceeded { limit });
            }
            cls.index.insert(key.clone(), j);
            cls.reps.push((key.clone(), m.clone()));
            queue.push_back(j);
        }
        for (key, _) in &found {
            let j = cls.index[key];
            if j != i {
                cls.edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    Ok(cls)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    /// degree → number of nodes with that degree
    pub degree_histogram: BTreeMap<usize, usize>,
}

impl GraphStats {
    pub fn is_regular(&self, d: usize) -> bool {
        self.degree_histogram.len() == 1 && self.degree_histogram.contains_key(&d)
    }
}

pub fn class_graph_stats(cls: &MutationClass) -> GraphStats {
    let mut degree = vec![0usize; cls.len()];
    for &(i, j) in cls.edges() {
        degree[i] += 1;
        degree[j] += 1;
    }
    let mut degree_histogram = BTreeMap::new();
    for d in degree {
        *degree_histogram.entry(d).or_insert(0) += 1;
    }
    GraphStats {
        nodes: cls.len(),
        edges: cls.edges().len(),
        degree_histogram,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finiteness {
    Finite(usize),
    Exceeded,
}

/// [`enumerate_class`] with the limit reported as a value.
///
/// Exact-mode overflow also counts as exceeded, since entries only overflow
/// when they grow without bound.
pub fn mutation_finite_probe(b: &BMatrix, limit: usize) -> Result<Finiteness> {
    match enumerate_class(b, limit) {
        Ok(cls) => Ok(Finiteness::Finite(cls.len())),
        Err(Error::LimitExceeded { .. }) | Err(Error::Overflow { .. }) => Ok(Finiteness::Exceeded),
        Err(e) => Err(e),
    }
}

/// How a reference list relates to an enumerated class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ListingConvention {
    /// Listed matrices are class members as they stand.
    AsIs,
    /// Listed matrices are transposes of class members.
    Transposed,
}

/// Whether the class and `listed` have exactly the same canonical keys, with
/// no duplicates on either side.
pub fn verify_listed_class(
    cls: &MutationClass,
    listed: &[BMatrix],
    convention: ListingConvention,
) -> Result<bool> {
    let listed_keys = listed
        .iter()
        .map(canonical_key)
        .collect::<Result<BTreeSet<_>>>()?;
    if listed_keys.len() != listed.len() || listed.len() != cls.len() {
        return Ok(false);
    }
    let class_keys = cls
        .representatives()
        .map(|b| match convention {
            ListingConvention::AsIs => canonical_key(b),
            ListingConvention::Transposed => canonical_key(&b.transpose()?),
        })
        .collect::<Result<BTreeSet<_>>>()?;
    Ok(class_keys == listed_keys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::seeds;
    use crate::scalars::Scalar;

    #[test]
    fn rank2_class() {
        let cls = enumerate_class(&seeds::rank2(), DEFAULT_LIMIT).unwrap();
        assert_eq!(cls.len(), 2);
        let stats = class_graph_stats(&cls);
        assert_eq!((stats.nodes, stats.edges), (2, 1));
        assert!(cls.is_closed().unwrap());
    }

    #[test]
    fn h3_class_shape() {
        let cls = enumerate_class(&seeds::h3(), DEFAULT_LIMIT).unwrap();
        let stats = class_graph_stats(&cls);
        assert_eq!((stats.nodes, stats.edges), (16, 24));
        assert!(stats.is_regular(3));
        assert!(cls.is_closed().unwrap());
    }

    #[test]
    fn fixed_matrix_is_a_single_node() {
        let zero = BMatrix::new(vec![vec![Scalar::exact(0, 0); 2]; 2]).unwrap();
        let cls = enumerate_class(&zero, 10).unwrap();
        let stats = class_graph_stats(&cls);
        assert_eq!((stats.nodes, stats.edges), (1, 0));
        // -B is the swap of B, so the whole class is one node
        let b = BMatrix::exact(&[&[(0, 0), (2, 0)], &[(-2, 0), (0, 0)]]).unwrap();
        assert_eq!(enumerate_class(&b, 10).unwrap().len(), 1);
    }

    #[test]
    fn exact_and_float_agree() {
        let exact = enumerate_class(&seeds::h3(), DEFAULT_LIMIT).unwrap();
        let float = enumerate_class(&seeds::h3().to_float(), DEFAULT_LIMIT).unwrap();
        assert_eq!(exact.len(), float.len());
        assert_eq!(exact.edges(), float.edges());
        for (e, f) in exact.representatives().zip(float.representatives()) {
            assert!(f.approx_eq(e, 1e-9));
        }
    }

    #[test]
    fn orbit_and_determinism() {
        let a = enumerate_class(&seeds::h4(), DEFAULT_LIMIT).unwrap();
        let b = enumerate_class(&seeds::h4(), DEFAULT_LIMIT).unwrap();
        assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
        assert_eq!(a.edges(), b.edges());
        let p = enumerate_class(&seeds::h4().permuted(&[3, 1, 0, 2]), DEFAULT_LIMIT).unwrap();
        let ka: BTreeSet<_> = a.keys().collect();
        let kp: BTreeSet<_> = p.keys().collect();
        assert_eq!(ka, kp);
    }

    #[test]
    fn limit_and_probe() {
        let b = seeds::double_a3();
        assert!(matches!(
            enumerate_class(&b, 200),
            Err(Error::LimitExceeded { limit: 200 })
        ));
        // exact entries leave i64 before a thousand classes are found
        assert!(matches!(
            enumerate_class(&b, 1000),
            Err(Error::Overflow { .. })
        ));
        assert!(matches!(
            enumerate_class(&b.to_float(), 1000),
            Err(Error::LimitExceeded { limit: 1000 })
        ));
        assert_eq!(
            mutation_finite_probe(&b, 1000).unwrap(),
            Finiteness::Exceeded
        );
        assert_eq!(
            mutation_finite_probe(&seeds::h3(), 100).unwrap(),
            Finiteness::Finite(16)
        );
        assert_eq!(
            mutation_finite_probe(&seeds::h3(), 15).unwrap(),
            Finiteness::Exceeded
        );
    }

    #[test]
    fn abc_family_classes_match_brute_force() {
        for (a, b, c) in [(2.0, 2.0, 2.0), (1.0, 2.0, 4.0), (0.5, 4.0, 4.0)] {
            let m = seeds::abc_family(a, b, c).unwrap();
            let neg = m.negated().unwrap();
            // the class is {B, -B}; count distinct permutation classes directly
            let same = canonical_key(&m).unwrap() == canonical_key(&neg).unwrap();
            let expected = if same { 1 } else { 2 };
            assert_eq!(
                mutation_finite_probe(&m, 100).unwrap(),
                Finiteness::Finite(expected)
            );
        }
    }

    #[test]
    fn listed_class_mismatch() {
        let cls = enumerate_class(&seeds::rank2(), 10).unwrap();
        let reps: Vec<BMatrix> = cls.representatives().cloned().collect();
        assert!(verify_listed_class(&cls, &reps, ListingConvention::AsIs).unwrap());
        let dup = vec![reps[0].clone(), reps[0].clone()];
        assert!(!verify_listed_class(&cls, &dup, ListingConvention::AsIs).unwrap());
        let transposed: Vec<BMatrix> = reps.iter().map(|b| b.transpose().unwrap()).collect();
        assert!(verify_listed_class(&cls, &transposed, ListingConvention::Transposed).unwrap());
    }
}
