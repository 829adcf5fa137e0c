//! Dense univariate polynomials over Q(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational as Q;

/// A polynomial; `coeffs[k]` is the coefficient of `z^k`.
///
/// Trailing zeros are always trimmed, so the zero polynomial is the empty
/// coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    /// `z - root`.
    pub fn linear(root: &Q) -> Self {
        Self::new(vec![-root, Q::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Q::from_int(c)).collect())
    }

    /// Monic product of `(z - r)^m` over the given roots.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = (&'a Q, usize)>) -> Self {
        roots
            .into_iter()
            .fold(Self::constant(Q::one()), |acc, (r, m)| {
                &acc * &Self::linear(r).pow(m)
            })
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn monic(&self) -> Result<Self> {
        let lc = self.coeffs.last().ok_or(Error::ZeroPolynomial)?.inv()?;
        Ok(self.scale(&lc))
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| &(&acc * z) + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Q::from_int(k as i64))
                .collect(),
        )
    }

    /// Taylor coefficients `P^(j)(z0)/j!` for `j = 0..count`.
    pub fn taylor_coefficients(&self, z0: &Q, count: usize) -> Vec<Q> {
        // Repeated synthetic division by (z - z0) peels off one Taylor
        // coefficient per pass.
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            if work.is_empty() {
                out.push(Q::zero());
                continue;
            }
            let mut carry = Q::zero();
            let mut quotient = vec![Q::zero(); work.len().saturating_sub(1)];
            for k in (0..work.len()).rev() {
                carry = &(&carry * z0) + &work[k];
                if k > 0 {
                    quotient[k - 1] = carry.clone();
                }
            }
            out.push(carry);
            work = quotient;
        }
        out
    }

    pub fn pow(&self, mut exp: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(Q::one());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let d = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = divisor.leading_coeff().inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Q::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] * &lc_inv;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(d);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// `self / divisor` when the division is exact.
    ///
    /// A nonzero remainder yields [`Error::NonExactDivision`], which callers
    /// use as a divisibility test.
    pub fn exact_divide(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonExactDivision)
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.exact_divide(self).is_ok()
    }

    /// Canonical string form: JSON-free rendering used in diagnostics.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

/// Monic greatest common divisor. Errors if both inputs are zero.
pub fn gcd_monic(p: &Poly, q: &Poly) -> Result<Poly> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = if r.is_zero() { r } else { r.monic()? };
    }
    a.monic()
}

/// Square-free decomposition by Yun's algorithm.
///
/// Returns monic, square-free, pairwise coprime factors with their
/// multiplicities, in increasing multiplicity, such that
/// `P = lc(P) · ∏ factor^multiplicity`.
pub fn squarefree_decomposition(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        _ => {}
    }
    let dp = p.derivative();
    let c = gcd_monic(p, &dp)?;
    let mut w = p.exact_divide(&c)?;
    let mut y = dp.exact_divide(&c)?;
    let mut z = &y - &w.derivative();
    let mut out = Vec::new();
    let mut mult = 1;
    while w.degree().unwrap_or(0) > 0 {
        let g = gcd_monic(&w, &z)?;
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), mult));
        }
        w = w.exact_divide(&g)?;
        y = z.exact_divide(&g)?;
        z = &y - &w.derivative();
        mult += 1;
    }
    Ok(out)
}

/// Multiset of root multiplicities of `p` over the algebraic closure,
/// sorted ascending (one entry per root, counted without multiplicity).
pub fn multiplicity_multiset(p: &Poly) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = squarefree_decomposition(p)?
        .into_iter()
        .flat_map(|(f, m)| std::iter::repeat_n(m, f.degree().unwrap_or(0)))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Square-free part: the monic product of the distinct irreducible factors.
pub fn squarefree_part(p: &Poly) -> Result<Poly> {
    Ok(squarefree_decomposition(p)?
        .into_iter()
        .fold(Poly::constant(Q::one()), |acc, (f, _)| &acc * &f))
}

/// Resultant `Res(a, b)` via the Euclidean remainder sequence.
///
/// Uses `Res(A, B) = (-1)^{mn} lc(B)^{m - deg R} Res(B, R)` with
/// `R = A mod B`, terminating at `Res(A, c) = c^m` for constant `c`.
pub fn resultant(a: &Poly, b: &Poly) -> Result<Q> {
    let (Some(mut m), Some(mut n)) = (a.degree(), b.degree()) else {
        return Ok(Q::zero());
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = Q::one();
    loop {
        if n == 0 {
            return Ok(&acc * &b.leading_coeff().pow(m as u32));
        }
        let (_, r) = a.div_rem(&b)?;
        let Some(dr) = r.degree() else {
            return Ok(Q::zero());
        };
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc = &acc * &b.leading_coeff().pow((m - dr) as u32);
        a = b;
        b = r;
        m = n;
        n = dr;
    }
}

/// Newton interpolation through `(x_j, y_j)`; the `x_j` must be distinct.
pub fn interpolate(points: &[(Q, Q)]) -> Result<Poly> {
    let n = points.len();
    let mut dd: Vec<Q> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for j in (level..n).rev() {
            let num = &dd[j] - &dd[j - 1];
            let den = &points[j].0 - &points[j - level].0;
            dd[j] = num.checked_div(&den)?;
        }
    }
    let mut acc = Poly::zero();
    for j in (0..n).rev() {
        acc = &(&acc * &Poly::linear(&points[j].0)) + &Poly::constant(dd[j].clone());
    }
    Ok(acc)
}

/// `D(a) = Res_z(P(z) - a, P'(z))`, whose roots are the critical values of `P`.
///
/// Built by evaluation at `a = 0, 1, …, deg P - 1` followed by interpolation;
/// `D` has degree exactly `deg P - 1`.
pub fn critical_value_polynomial(p: &Poly) -> Result<Poly> {
    let d = match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(d) if d < 2 => return Err(Error::NoCriticalValues(d)),
        Some(d) => d,
    };
    let dp = p.derivative();
    let samples = (0..d as i64)
        .map(|j| {
            let a = Q::from_int(j);
            let shifted = p - &Poly::constant(a.clone());
            Ok((a, resultant(&shifted, &dp)?))
        })
        .collect::<Result<Vec<_>>>()?;
    interpolate(&samples)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Poly::new(Vec::<Q>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn p(cs: &[&str]) -> Poly {
        Poly::new(cs.iter().map(|c| q(c)).collect())
    }

    /// Oracle: sum of c_k z^k with powers computed independently of Horner.
    fn monomial_sum(poly: &Poly, z: &Q) -> Q {
        poly.coeffs()
            .iter()
            .enumerate()
            .fold(Q::zero(), |acc, (k, c)| &acc + &(c * &z.pow(k as u32)))
    }

    /// Oracle: determinant of the Sylvester matrix by cofactor-free
    /// elimination on a plain Vec<Vec<_>>.
    fn sylvester_det(a: &Poly, b: &Poly) -> Q {
        let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
        let size = m + n;
        let mut rows = vec![vec![Q::zero(); size]; size];
        for r in 0..n {
            for (k, c) in a.coeffs().iter().rev().enumerate() {
                rows[r][r + k] = c.clone();
            }
        }
        for r in 0..m {
            for (k, c) in b.coeffs().iter().rev().enumerate() {
                rows[n + r][r + k] = c.clone();
            }
        }
        let mut det = Q::one();
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
                return Q::zero();
            };
            if piv != col {
                rows.swap(piv, col);
                det = -det;
            }
            det = &det * &rows[col][col];
            let inv = rows[col][col].inv().unwrap();
            let pivot_row = rows[col].clone();
            for row in rows.iter_mut().skip(col + 1) {
                let f = &row[col] * &inv;
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &(&f * p);
                }
            }
        }
        det
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Poly::from_ints(&[0, 0, 1]).eval(&q("3")), q("9"));
        // z^2 (z - 1)
        assert_eq!(Poly::from_ints(&[0, 0, -1, 1]).eval(&q("1")), q("0"));
        let cubic = Poly::from_ints(&[1, -2, 0, 1]);
        let z = q("1+1i");
        assert_eq!(cubic.eval(&z), monomial_sum(&cubic, &z));
        assert_eq!(cubic.eval(&z), q("-3"));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            Poly::from_ints(&[0, 0, 1]).derivative(),
            Poly::from_ints(&[0, 2])
        );
        assert!(Poly::from_ints(&[7]).derivative().is_zero());
        // z^3 (z - 1) = z^4 - z^3
        assert_eq!(
            Poly::from_ints(&[0, 0, 0, -1, 1]).derivative(),
            Poly::from_ints(&[0, 0, -3, 4])
        );
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(
            gcd_monic(
                &Poly::from_ints(&[0, 0, 1]),
                &Poly::from_ints(&[0, 0, 0, 1])
            )
            .unwrap(),
            Poly::from_ints(&[0, 0, 1])
        );
        let one = q("1");
        let two = q("2");
        let pp = Poly::from_roots([(&one, 2), (&two, 1)]);
        assert_eq!(
            gcd_monic(&pp, &pp.derivative()).unwrap(),
            Poly::linear(&one)
        );
        assert_eq!(
            gcd_monic(&Poly::from_ints(&[1, 0, 1]), &p(&["0-1i", "1"])).unwrap(),
            p(&["0-1i", "1"])
        );
        assert_eq!(
            gcd_monic(&Poly::zero(), &Poly::zero()),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn squarefree_examples() {
        let (one, three) = (q("1"), q("3"));
        let pp = Poly::from_roots([(&one, 2), (&three, 1)]);
        assert_eq!(
            squarefree_decomposition(&pp).unwrap(),
            vec![(Poly::linear(&three), 1), (Poly::linear(&one), 2)]
        );
        assert_eq!(
            squarefree_decomposition(&Poly::from_ints(&[0, 0, 1])).unwrap(),
            vec![(Poly::z(), 2)]
        );
        // z^2 (z - 1)
        assert_eq!(
            squarefree_decomposition(&Poly::from_ints(&[0, 0, -1, 1])).unwrap(),
            vec![(Poly::linear(&one), 1), (Poly::z(), 2)]
        );
        assert_eq!(
            squarefree_decomposition(&Poly::zero()),
            Err(Error::ZeroPolynomial)
        );
        assert_eq!(
            squarefree_decomposition(&Poly::from_ints(&[4])),
            Err(Error::ConstantPolynomial)
        );
    }

    #[test]
    fn exact_divide_examples() {
        assert_eq!(
            Poly::from_ints(&[0, 0, 1])
                .exact_divide(&Poly::z())
                .unwrap(),
            Poly::z()
        );
        assert_eq!(
            Poly::from_ints(&[-1, 0, 1])
                .exact_divide(&Poly::from_ints(&[-1, 1]))
                .unwrap(),
            Poly::from_ints(&[1, 1])
        );
        let err = Poly::from_ints(&[1, 0, 1]).exact_divide(&Poly::from_ints(&[1, 1]));
        assert_eq!(err, Err(Error::NonExactDivision));
        let (_, r) = Poly::from_ints(&[1, 0, 1])
            .div_rem(&Poly::from_ints(&[1, 1]))
            .unwrap();
        assert_eq!(r, Poly::from_ints(&[2]));
        assert_eq!(
            Poly::z().exact_divide(&Poly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn critical_values_examples() {
        let d = critical_value_polynomial(&Poly::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(d.degree(), Some(1));
        assert!(d.eval(&q("0")).is_zero());

        let d = critical_value_polynomial(&Poly::from_ints(&[0, 0, 0, 1])).unwrap();
        assert_eq!(d.degree(), Some(2));
        assert_eq!(d.monic().unwrap(), Poly::from_ints(&[0, 0, 1]));

        // z^2 (z - 1): critical points 0 and 2/3, values 0 and -4/27.
        let d = critical_value_polynomial(&Poly::from_ints(&[0, 0, -1, 1])).unwrap();
        let (zero, v) = (q("0"), q("-4/27"));
        assert_eq!(d.monic().unwrap(), Poly::from_roots([(&zero, 1), (&v, 1)]));

        assert_eq!(
            critical_value_polynomial(&Poly::from_ints(&[1, 1])),
            Err(Error::NoCriticalValues(1))
        );
    }

    #[test]
    fn taylor_matches_scaled_derivatives() {
        let pp = Poly::from_ints(&[3, -1, 4, 1, -5, 9]);
        let z0 = q("2-1i");
        let taylor = pp.taylor_coefficients(&z0, 8);
        let mut d = pp.clone();
        let mut fact = Q::one();
        for (j, t) in taylor.iter().enumerate() {
            if j > 0 {
                fact = &fact * &Q::from_int(j as i64);
            }
            assert_eq!(t, &d.eval(&z0).checked_div(&fact).unwrap());
            d = d.derivative();
        }
    }

    fn arb_small() -> impl Strategy<Value = Q> {
        (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(a, b, d)| Q::from_parts(a, d, b, d))
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(arb_small(), 1..=max_deg + 1).prop_map(Poly::new)
    }

    fn arb_root() -> impl Strategy<Value = Q> {
        (-3i64..=3, -3i64..=3).prop_map(|(a, b)| Q::gaussian(a, b))
    }

    proptest! {
        #[test]
        fn product_rule(a in arb_poly(5), b in arb_poly(5)) {
            prop_assert_eq!(
                (&a * &b).derivative(),
                &(&a.derivative() * &b) + &(&a * &b.derivative())
            );
        }

        #[test]
        fn gcd_divides_and_cofactors_coprime(
            common in arb_poly(3), a in arb_poly(3), b in arb_poly(3)
        ) {
            let pa = &common * &a;
            let pb = &common * &b;
            prop_assume!(!pa.is_zero() || !pb.is_zero());
            let g = gcd_monic(&pa, &pb).unwrap();
            prop_assert!(g.divides(&pa));
            prop_assert!(g.divides(&pb));
            if !common.is_zero() {
                prop_assert!(common.monic().unwrap().divides(&g));
            }
            let ca = pa.exact_divide(&g).unwrap();
            let cb = pb.exact_divide(&g).unwrap();
            if !ca.is_zero() || !cb.is_zero() {
                prop_assert_eq!(gcd_monic(&ca, &cb).unwrap().degree(), Some(0));
            }
        }

        #[test]
        fn squarefree_reassembles(
            roots in prop::collection::vec((arb_root(), 1usize..=3), 1..=4),
            lc in arb_small()
        ) {
            prop_assume!(!lc.is_zero());
            let pp = Poly::from_roots(roots.iter().map(|(r, m)| (r, *m))).scale(&lc);
            let parts = squarefree_decomposition(&pp).unwrap();
            let rebuilt = parts
                .iter()
                .fold(Poly::constant(lc.clone()), |acc, (f, m)| &acc * &f.pow(*m));
            prop_assert_eq!(rebuilt, pp);
            for (i, (f, _)) in parts.iter().enumerate() {
                prop_assert!(f.is_monic());
                prop_assert_eq!(squarefree_part(f).unwrap(), f.clone());
                for (g, _) in &parts[i + 1..] {
                    prop_assert_eq!(gcd_monic(f, g).unwrap().degree(), Some(0));
                }
            }
        }

        #[test]
        fn resultant_matches_sylvester_determinant(a in arb_poly(4), b in arb_poly(4)) {
            prop_assume!(a.degree().unwrap_or(0) >= 1 && b.degree().unwrap_or(0) >= 1);
            prop_assert_eq!(resultant(&a, &b).unwrap(), sylvester_det(&a, &b));
        }

        #[test]
        fn interpolation_recovers_polynomial(pp in arb_poly(5)) {
            let pts: Vec<_> = (0..=5).map(|j| {
                let x = Q::gaussian(j - 2, j % 2);
                let y = pp.eval(&x);
                (x, y)
            }).collect();
            prop_assert_eq!(interpolate(&pts).unwrap(), pp);
        }

        #[test]
        fn horner_matches_monomial_sum(pp in arb_poly(6), z in arb_small()) {
            prop_assert_eq!(pp.eval(&z), monomial_sum(&pp, &z));
        }
    }
}
