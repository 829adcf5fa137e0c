//! Dense square matrices over Q(i): exact elimination, characteristic
//! polynomials, Jordan structure and polynomial evaluation.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::roots::{gaussian_rational_roots, unsplit_degrees};
use crate::scalar::GaussianRational as Q;

/// An `n × n` matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixQi {
    n: usize,
    entries: Vec<Q>,
}

impl MatrixQi {
    pub fn zeros(n: usize) -> Self {
        MatrixQi {
            n,
            entries: vec![Q::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Q::one())
    }

    pub fn scalar(n: usize, c: Q) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Dimension("matrix must have at least one row".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(MatrixQi { n, entries })
    }

    /// Convenience constructor from integer rows; panics if not square.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Q::from_int(x)).collect())
                .collect(),
        )
        .expect("square integer matrix")
    }

    pub fn diagonal(values: &[Q]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    /// The Jordan block `J_k(λ)`: `λ` on the diagonal, ones on the first superdiagonal.
    pub fn jordan_block(k: usize, lambda: &Q) -> Self {
        let mut m = Self::scalar(k, lambda.clone());
        for i in 1..k {
            m[(i - 1, i)] = Q::one();
        }
        m
    }

    pub fn block_diagonal(blocks: &[MatrixQi]) -> Self {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Self::zeros(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.n;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Q]> {
        self.entries.chunks(self.n)
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.n).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<Q>]) -> Result<Self> {
        let n = cols.len();
        if n == 0 || cols.iter().any(|c| c.len() != n) {
            return Err(Error::Dimension(
                "columns do not form a square matrix".into(),
            ));
        }
        let mut m = Self::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    /// Submatrix on rows/columns `start..start+len`.
    pub fn principal_block(&self, start: usize, len: usize) -> Self {
        let mut m = Self::zeros(len);
        for i in 0..len {
            for j in 0..len {
                m[(i, j)] = self[(start + i, start + j)].clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Q {
        (0..self.n).fold(Q::zero(), |acc, i| &acc + &self[(i, i)])
    }

    pub fn scale(&self, c: &Q) -> Self {
        MatrixQi {
            n: self.n,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// `self - c·I`.
    pub fn shift(&self, c: &Q) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] = &m[(i, i)] - c;
        }
        m
    }

    pub fn pow(&self, mut exp: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Q::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(Error::Singular)?;
            a.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p = a[(col, col)].inv()?;
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    a.axpy_row(r, col, &f);
                    inv.axpy_row(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Q {
        let n = self.n;
        let mut a = self.clone();
        let mut det = Q::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Q::zero();
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = -det;
            }
            det = &det * &a[(col, col)];
            let p = a[(col, col)].inv().expect("nonzero pivot");
            for r in col + 1..n {
                if !a[(r, col)].is_zero() {
                    let f = &a[(r, col)] * &p;
                    a.axpy_row(r, col, &f);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.entries.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &Q) {
        for j in 0..self.n {
            self[(r, j)] = &self[(r, j)] * c;
        }
    }

    /// row[target] -= f · row[source]
    fn axpy_row(&mut self, target: usize, source: usize, f: &Q) {
        for j in 0..self.n {
            let t = f * &self[(source, j)];
            self[(target, j)] -= &t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for MatrixQi {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatrixQi {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.entries[i * self.n + j]
    }
}

impl Add for &MatrixQi {
    type Output = MatrixQi;
    fn add(self, rhs: &MatrixQi) -> MatrixQi {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        MatrixQi {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &MatrixQi {
    type Output = MatrixQi;
    fn sub(self, rhs: &MatrixQi) -> MatrixQi {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        MatrixQi {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &MatrixQi {
    type Output = MatrixQi;
    fn mul(self, rhs: &MatrixQi) -> MatrixQi {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = MatrixQi::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a * &rhs[(k, j)];
                    out[(i, j)] += &t;
                }
            }
        }
        out
    }
}

impl fmt::Debug for MatrixQi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &[Vec<Q>], cols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == a.len() {
            break;
        }
        // First nonzero entry wins; keeps kernel bases reproducible.
        let Some(piv) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(piv, row);
        let inv = a[row][col].inv().expect("nonzero pivot");
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[row].clone();
        for (r, target) in a.iter_mut().enumerate() {
            if r != row && !target[col].is_zero() {
                let f = target[col].clone();
                for (x, p) in target.iter_mut().zip(&pivot_row) {
                    *x -= &(&f * p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Rank of the span of a list of vectors of length `dim`.
pub(crate) fn rank_of_vectors(vectors: &[Vec<Q>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rref(vectors, dim).1.len()
}

/// Exact rank by Gaussian elimination.
pub fn rank(a: &MatrixQi) -> usize {
    let rows: Vec<Vec<Q>> = a.rows().map(<[Q]>::to_vec).collect();
    rref(&rows, a.n).1.len()
}

/// Basis of the right kernel `{v : A v = 0}`, one vector per free column.
pub fn kernel_basis(a: &MatrixQi) -> Vec<Vec<Q>> {
    let n = a.n;
    let rows: Vec<Vec<Q>> = a.rows().map(<[Q]>::to_vec).collect();
    let (r, pivots) = rref(&rows, n);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); n];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&r[row][free];
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(zI - A)` by the Faddeev–LeVerrier recurrence.
pub fn char_poly(a: &MatrixQi) -> Poly {
    let n = a.n;
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = MatrixQi::zeros(n);
    for k in 1..=n {
        m = &(a * &m) + &MatrixQi::scalar(n, coeffs[n - k + 1].clone());
        let am = a * &m;
        coeffs[n - k] = (-am.trace())
            .checked_div(&Q::from_int(k as i64))
            .expect("k > 0");
    }
    Poly::new(coeffs)
}

/// Jordan block sizes of a matrix at one value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegrePartition {
    pub value: Q,
    /// Block sizes in non-increasing order; empty when `value` is not an eigenvalue.
    pub parts: Vec<usize>,
}

impl SegrePartition {
    pub fn algebraic_multiplicity(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn geometric_multiplicity(&self) -> usize {
        self.parts.len()
    }
}

/// Block sizes from the rank sequence `r_k = rank((A - aI)^k)`: the number
/// of blocks of size at least `k` is `r_{k-1} - r_k`.
pub fn segre_at(a: &MatrixQi, value: &Q) -> SegrePartition {
    let n = a.n;
    let shifted = a.shift(value);
    let mut ranks = vec![n];
    let mut power = MatrixQi::identity(n);
    while ranks.len() <= n {
        power = &power * &shifted;
        let r = rank(&power);
        let prev = *ranks.last().expect("nonempty");
        ranks.push(r);
        if r == prev {
            break;
        }
    }
    // at_least[k-1] = number of blocks of size >= k
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for (k, &count) in at_least.iter().enumerate().rev() {
        let exact = count - at_least.get(k + 1).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k + 1, exact));
    }
    SegrePartition {
        value: value.clone(),
        parts,
    }
}

/// Membership in `E_a`: `a` is an eigenvalue of `A`.
pub fn is_in_e(a: &MatrixQi, value: &Q) -> bool {
    char_poly(a).eval(value).is_zero()
}

/// Membership in `S_a`: some Jordan block at `a` has size at least 2.
pub fn is_in_s(a: &MatrixQi, value: &Q) -> bool {
    segre_at(a, value).parts.first().is_some_and(|&p| p >= 2)
}

/// Exact Jordan decomposition `A = T J T⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanDecomposition {
    pub j: MatrixQi,
    pub t: MatrixQi,
    /// Blocks in layout order: eigenvalues ascending in canonical scalar
    /// order, sizes descending within an eigenvalue.
    pub blocks: Vec<(Q, usize)>,
}

/// Jordan decomposition for matrices whose spectrum lies in Q(i).
///
/// Chains are built top-down per eigenvalue: for each length `k`, new chain
/// heads are picked from a basis of `ker N^k` that stay independent modulo
/// `ker N^{k-1}` and the images of longer chains.
pub fn jordan_decomposition(a: &MatrixQi) -> Result<JordanDecomposition> {
    let n = a.n;
    let cp = char_poly(a);
    let remaining = unsplit_degrees(&cp)?;
    if !remaining.is_empty() {
        return Err(Error::SpectrumNotInQi {
            remaining_degrees: remaining,
        });
    }
    let eigen = gaussian_rational_roots(&cp)?;

    let mut columns: Vec<Vec<Q>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    for ev in &eigen {
        let lambda = &ev.root;
        let parts = segre_at(a, lambda).parts;
        let nil = a.shift(lambda);
        let max = parts[0];
        let mut powers = vec![MatrixQi::identity(n)];
        for _ in 0..max {
            let next = &nil * powers.last().expect("nonempty");
            powers.push(next);
        }
        // (head, length) for chains already chosen at this eigenvalue
        let mut heads: Vec<(Vec<Q>, usize)> = Vec::new();
        for k in (1..=max).rev() {
            let want = parts.iter().filter(|&&p| p == k).count();
            if want == 0 {
                continue;
            }
            let mut span: Vec<Vec<Q>> = kernel_basis(&powers[k - 1]);
            for (h, len) in &heads {
                span.push(powers[len - k].mul_vec(h));
            }
            let mut base_rank = rank_of_vectors(&span, n);
            let mut chosen = 0;
            for v in kernel_basis(&powers[k]) {
                if chosen == want {
                    break;
                }
                span.push(v.clone());
                let r = rank_of_vectors(&span, n);
                if r > base_rank {
                    base_rank = r;
                    heads.push((v, k));
                    chosen += 1;
                } else {
                    span.pop();
                }
            }
            if chosen != want {
                return Err(Error::Internal(format!(
                    "found {chosen} of {want} Jordan chains of length {k}"
                )));
            }
        }
        // Layout: chains sorted by decreasing length, stable in selection order.
        heads.sort_by_key(|h| std::cmp::Reverse(h.1));
        for (h, len) in &heads {
            for j in (0..*len).rev() {
                columns.push(powers[j].mul_vec(h));
            }
            blocks.push((lambda.clone(), *len));
        }
    }

    let t = MatrixQi::from_columns(&columns)?;
    let j = MatrixQi::block_diagonal(
        &blocks
            .iter()
            .map(|(l, k)| MatrixQi::jordan_block(*k, l))
            .collect::<Vec<_>>(),
    );
    if (a * &t) != (&t * &j) {
        return Err(Error::Internal("A·T ≠ T·J after chain construction".into()));
    }
    Ok(JordanDecomposition { j, t, blocks })
}

/// `P(A)` by Horner's rule.
pub fn apply_poly(p: &Poly, a: &MatrixQi) -> MatrixQi {
    p.coeffs()
        .iter()
        .rev()
        .fold(MatrixQi::zeros(a.n), |acc, c| (&acc * a).shift(&-c))
}

/// `P(J_k(z0))` as the upper-triangular Toeplitz matrix with `(i, i+j)`
/// entry `P^(j)(z0)/j!`.
pub fn f_of_jordan_block(p: &Poly, k: usize, z0: &Q) -> MatrixQi {
    let taylor = p.taylor_coefficients(z0, k);
    let mut m = MatrixQi::zeros(k);
    for i in 0..k {
        for j in 0..k - i {
            m[(i, i + j)] = taylor[j].clone();
        }
    }
    m
}
