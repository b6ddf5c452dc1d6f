//! Mutation of real skew-symmetrizable matrices.
//!
//! `μ_k(B)` flips the sign of row and column `k` and adds
//! `(|b_ik| b_kj + b_ik |b_kj|) / 2` to every other entry. That correction is
//! `b_ik b_kj` when both factors are positive, `−b_ik b_kj` when both are
//! negative, and zero otherwise, so it never leaves ℚ(√5) in exact mode.
//!
//! Indices are 0-based throughout the library.

mod canonical;
mod class;
pub mod io;
pub mod seeds;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{Mode, Scalar, Sign};

pub use canonical::{canonical_form, canonical_key, CanonicalKey, KeyEntry, MAX_BRUTE_FORCE_N};
pub use class::{
    class_graph_stats, enumerate_class, mutation_finite_probe, verify_listed_class, Finiteness,
    GraphStats, ListingConvention, MutationClass, DEFAULT_LIMIT,
};

/// Relative tolerance for float-mode symmetrizer consistency.
pub const SYMMETRIZER_TOL: f64 = 1e-9;

/// Square matrix of same-mode scalars with a positive diagonal `D` such that
/// `DB` is skew-symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct BMatrix {
    n: usize,
    mode: Mode,
    entries: Vec<Scalar>,
    symmetrizer: Vec<Scalar>,
}

impl BMatrix {
    /// Validates shape and mode and finds a symmetrizer.
    pub fn new(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let symmetrizer = find_symmetrizer(&rows)?;
        let n = rows.len();
        let mode = rows[0][0].mode();
        let entries = rows.into_iter().flatten().collect();
        Ok(BMatrix {
            n,
            mode,
            entries,
            symmetrizer,
        })
    }

    /// Exact matrix from `(p, q)` pairs meaning `p + q·a`.
    pub fn exact(rows: &[&[(i64, i64)]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| Scalar::exact(p, q)).collect())
                .collect(),
        )
    }

    pub fn float(rows: &[&[f64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::Float(x)).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries
            .chunks(self.n)
            .map(<[Scalar]>::to_vec)
            .collect()
    }

    /// The cached diagonal of `D`.
    pub fn symmetrizer(&self) -> &[Scalar] {
        &self.symmetrizer
    }

    /// `P B Pᵀ` with `(P B Pᵀ)_{ij} = B_{perm[i], perm[j]}`.
    pub fn permuted(&self, perm: &[usize]) -> BMatrix {
        let n = self.n;
        assert_eq!(perm.len(), n, "permutation length");
        let entries = (0..n * n)
            .map(|ij| *self.get(perm[ij / n], perm[ij % n]))
            .collect();
        let symmetrizer = perm.iter().map(|&p| self.symmetrizer[p]).collect();
        BMatrix {
            n,
            mode: self.mode,
            entries,
            symmetrizer,
        }
    }

    pub fn transpose(&self) -> Result<BMatrix> {
        let n = self.n;
        BMatrix::new(
            (0..n)
                .map(|i| (0..n).map(|j| *self.get(j, i)).collect())
                .collect(),
        )
    }

    pub fn negated(&self) -> Result<BMatrix> {
        Ok(BMatrix {
            n: self.n,
            mode: self.mode,
            entries: self
                .entries
                .iter()
                .map(Scalar::try_neg)
                .collect::<Result<_>>()?,
            symmetrizer: self.symmetrizer.clone(),
        })
    }

    /// Same matrix with every entry converted to float mode.
    pub fn to_float(&self) -> BMatrix {
        BMatrix {
            n: self.n,
            mode: Mode::Float,
            entries: self.entries.iter().map(Scalar::to_float).collect(),
            symmetrizer: self.symmetrizer.iter().map(Scalar::to_float).collect(),
        }
    }

    /// Entrywise `|x − y| <= tol · max(1, |y|)` on the real embeddings.
    pub fn approx_eq(&self, other: &BMatrix, tol: f64) -> bool {
        self.n == other.n
            && self.entries.iter().zip(&other.entries).all(|(x, y)| {
                let (x, y) = (x.to_f64(), y.to_f64());
                (x - y).abs() <= tol * y.abs().max(1.0)
            })
    }

    /// Whether `d_i b_ij = −d_j b_ji` for all pairs, exactly or within `tol`
    /// relative in float mode.
    pub fn is_symmetrized_by(&self, d: &[Scalar], tol: f64) -> Result<bool> {
        if d.len() != self.n {
            return Ok(false);
        }
        for i in 0..self.n {
            for j in i..self.n {
                if !pair_balanced(d[i], *self.get(i, j), d[j], *self.get(j, i), tol)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for BMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.render(false)).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn pair_balanced(di: Scalar, bij: Scalar, dj: Scalar, bji: Scalar, tol: f64) -> Result<bool> {
    let lhs = di.try_mul(&bij)?;
    let rhs = dj.try_mul(&bji)?;
    Ok(match (lhs, rhs) {
        (Scalar::Exact(_), Scalar::Exact(_)) => lhs.try_add(&rhs)?.sign_with_tol(0.0) == Sign::Zero,
        _ => {
            let (l, r) = (lhs.to_f64(), rhs.to_f64());
            (l + r).abs() <= tol * (l.abs() + r.abs()).max(f64::MIN_POSITIVE)
        }
    })
}

fn not_symmetrizable(i: usize, j: usize, reason: impl Into<String>) -> Error {
    Error::NotSkewSymmetrizable {
        i,
        j,
        reason: reason.into(),
    }
}

/// Finds a positive diagonal `D` with `d_i b_ij = −d_j b_ji`.
///
/// Walks the graph of nonzero entries, fixing `d = 1` on the first vertex of
/// each component and propagating `d_j = −d_i b_ij / b_ji`; then checks every
/// pair, which catches inconsistent cycles. Float mode accepts a relative
/// mismatch up to [`SYMMETRIZER_TOL`].
#[allow(clippy::needless_range_loop)]
pub fn find_symmetrizer(rows: &[Vec<Scalar>]) -> Result<Vec<Scalar>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Malformed("empty matrix".into()));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Malformed(format!(
            "row of length {} in a {n}x{n} matrix",
            r.len()
        )));
    }
    let mode = rows[0][0].mode();
    if rows.iter().flatten().any(|x| x.mode() != mode) {
        return Err(Error::Malformed("entries mix exact and float modes".into()));
    }
    for i in 0..n {
        if !rows[i][i].is_zero() {
            return Err(not_symmetrizable(i, i, "nonzero diagonal entry"));
        }
        for j in i + 1..n {
            let (s, t) = (rows[i][j].sign(), rows[j][i].sign());
            if s.to_i8() != -t.to_i8() {
                return Err(not_symmetrizable(
                    i,
                    j,
                    format!(
                        "entries {} and {} do not have opposite signs",
                        rows[i][j], rows[j][i]
                    ),
                ));
            }
        }
    }

    let mut d: Vec<Option<Scalar>> = vec![None; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(Scalar::one(mode));
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].expect("visited vertex has a value");
            for j in 0..n {
                if d[j].is_some() || rows[i][j].is_zero() {
                    continue;
                }
                let dj = di.try_mul(&rows[i][j])?.try_div(&rows[j][i])?.try_neg()?;
                d[j] = Some(dj);
                queue.push_back(j);
            }
        }
    }
    let d: Vec<Scalar> = d
        .into_iter()
        .map(|x| x.expect("all vertices visited"))
        .collect();

    for i in 0..n {
        for j in i + 1..n {
            if !pair_balanced(d[i], rows[i][j], d[j], rows[j][i], SYMMETRIZER_TOL)? {
                return Err(not_symmetrizable(
                    i,
                    j,
                    "inconsistent ratios around a cycle",
                ));
            }
        }
    }
    Ok(d)
}

/// `μ_k(B)`. The symmetrizer carries over unchanged.
pub fn mutate(b: &BMatrix, k: usize) -> Result<BMatrix> {
    let n = b.n;
    if k >= n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let bij = *b.get(i, j);
            let entry = if i == k || j == k {
                bij.try_neg()?
            } else {
                let (bik, bkj) = (b.get(i, k), b.get(k, j));
                match (bik.sign(), bkj.sign()) {
                    (Sign::Positive, Sign::Positive) => bij.try_add(&bik.try_mul(bkj)?)?,
                    (Sign::Negative, Sign::Negative) => bij.try_sub(&bik.try_mul(bkj)?)?,
                    _ => bij,
                }
            };
            entries.push(entry);
        }
    }
    Ok(BMatrix {
        n,
        mode: b.mode,
        entries,
        symmetrizer: b.symmetrizer.clone(),
    })
}
