//! Standard seed matrices.

use super::BMatrix;
use crate::scalars::Scalar;

const O: (i64, i64) = (0, 0);
const ONE: (i64, i64) = (1, 0);
const NEG: (i64, i64) = (-1, 0);
const A: (i64, i64) = (0, 1);

/// H3 seed `[[0,a,0],[-1,0,1],[0,-1,0]]`.
pub fn h3() -> BMatrix {
    BMatrix::exact(&[&[O, A, O], &[NEG, O, ONE], &[O, NEG, O]]).expect("H3 seed is valid")
}

/// H4 seed: the H3 seed extended by a simply-laced tail.
pub fn h4() -> BMatrix {
    BMatrix::exact(&[
        &[O, A, O, O],
        &[NEG, O, ONE, O],
        &[O, NEG, O, ONE],
        &[O, O, NEG, O],
    ])
    .expect("H4 seed is valid")
}

/// Rank-2 seed `[[0,a],[-1,0]]` of type I2(5).
pub fn rank2() -> BMatrix {
    BMatrix::exact(&[&[O, A], &[NEG, O]]).expect("rank-2 seed is valid")
}

/// Double-arrow A3 `[[0,2,0],[-2,0,2],[0,-2,0]]`, mutation-infinite.
pub fn double_a3() -> BMatrix {
    BMatrix::exact(&[&[O, (2, 0), O], &[(-2, 0), O, (2, 0)], &[O, (-2, 0), O]])
        .expect("double-arrow seed is valid")
}

/// Cyclic 3x3 pattern `[[0,a,-c'],[-a',0,b],[c,-b',0]]` without validation.
pub fn abc_family_rows(a: f64, b: f64, c: f64, ap: f64, bp: f64, cp: f64) -> Vec<Vec<Scalar>> {
    [[0.0, a, -cp], [-ap, 0.0, b], [c, -bp, 0.0]]
        .iter()
        .map(|r| r.iter().map(|&x| Scalar::Float(x)).collect())
        .collect()
}

/// Member of the `abc = 8` family with `a' = bc/2`, `b' = ca/2`, `c' = ab/2`.
pub fn abc_family(a: f64, b: f64, c: f64) -> crate::Result<BMatrix> {
    BMatrix::new(abc_family_rows(
        a,
        b,
        c,
        b * c / 2.0,
        c * a / 2.0,
        a * b / 2.0,
    ))
}
