//! Fixed inputs shared by the criterion benchmarks.

use matrange_core::{EntireFunction, GaussianRational as Q, MatrixQi, Poly};

pub fn q(s: &str) -> Q {
    s.parse().expect("valid scalar")
}

/// `(z² - 1)² + 7`: one totally ramified value (7) with two double preimages.
pub fn quartic_with_trv() -> EntireFunction {
    let base = Poly::from_ints(&[-1, 0, 1]);
    EntireFunction::polynomial(&(&base * &base) + &Poly::from_ints(&[7])).expect("nonconstant")
}

/// `f(J_3(1) ⊕ J_2(-1) ⊕ J_1(2))` conjugated by a unimodular matrix.
pub fn conjugated_image(f: &EntireFunction) -> MatrixQi {
    let p = f.as_polynomial().expect("polynomial");
    let y = MatrixQi::block_diagonal(&[
        MatrixQi::jordan_block(3, &q("1")),
        MatrixQi::jordan_block(2, &q("-1")),
        MatrixQi::jordan_block(1, &q("2")),
    ]);
    let n = y.n();
    let mut t = MatrixQi::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            t[(i, j)] = Q::from_int(((i + 2 * j) % 3) as i64 - 1);
        }
    }
    let lower = {
        let mut l = MatrixQi::identity(n);
        for i in 1..n {
            l[(i, i - 1)] = Q::from_int(1);
        }
        l
    };
    let t = &lower * &t;
    let fy = matrange_core::apply_poly(p, &y);
    &(&t * &fy) * &t.inverse().expect("unimodular")
}
