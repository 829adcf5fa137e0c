//! Roots in Q(i) via the Gaussian rational-root theorem.
//!
//! A root `p/q` (in lowest terms over Z[i]) of a primitive polynomial with
//! Gaussian-integer coefficients has `p | c_0` and `q | c_n`. Divisors are
//! enumerated from the factorisation of the integer norm, recombining
//! Gaussian primes. Linear and quadratic factors are solved in closed form.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::poly::{squarefree_decomposition, Poly};
use crate::scalar::GaussianRational as Q;

/// A root in Q(i) together with its exact multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RootWithMultiplicity {
    pub root: Q,
    pub multiplicity: usize,
}

/// Element of Z[i].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn new(re: BigInt, im: BigInt) -> Self {
        GaussInt { re, im }
    }

    fn small(re: i64, im: i64) -> Self {
        Self::new(re.into(), im.into())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn mul(&self, o: &Self) -> Self {
        Self::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    fn add(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn neg(&self) -> Self {
        Self::new(-self.re.clone(), -self.im.clone())
    }

    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// Exact quotient, if `o` divides `self` in Z[i].
    fn div_exact(&self, o: &Self) -> Option<Self> {
        let n = o.norm();
        let t = self.mul(&o.conj());
        let (qr, rr) = t.re.div_rem(&n);
        let (qi, ri) = t.im.div_rem(&n);
        (rr.is_zero() && ri.is_zero()).then(|| Self::new(qr, qi))
    }

    /// Division with remainder, rounding the quotient to the nearest lattice point.
    fn div_round(&self, o: &Self) -> (Self, Self) {
        let n = o.norm();
        let t = self.mul(&o.conj());
        let round = |x: &BigInt| {
            let two = BigInt::from(2);
            (x * &two + &n).div_floor(&(&n * &two))
        };
        let q = Self::new(round(&t.re), round(&t.im));
        let qo = q.mul(o);
        let r = Self::new(&self.re - qo.re, &self.im - qo.im);
        (q, r)
    }

    fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_round(&b);
            a = b;
            b = r;
        }
        a
    }

    fn to_q(&self) -> Q {
        Q::new(self.re.clone().into(), self.im.clone().into())
    }
}

const UNITS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Small primes used for trial division and as Miller–Rabin bases.
const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Miller–Rabin with the first 25 prime bases: deterministic below 3.3·10^24
/// and with negligible error probability above.
fn is_probable_prime(n: &BigUint) -> bool {
    let one = BigUint::one();
    if *n < BigUint::from(2u32) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if *n == BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().expect("n > 1");
    let d = &n_minus_one >> s;
    'bases: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of an odd composite `n` by Brent's variant of
/// Pollard's rho.
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (BigUint::from(2u32), 1u64, BigUint::one());
        let (mut x, mut ys) = (y.clone(), y.clone());
        let mut g = one.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..(128).min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if g == *n {
            // The batch overshot; retrace one step at a time.
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1u32;
    }
}

fn collect_prime_factors(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    // Rho costs about the square root of the smallest factor, so strip
    // perfect powers first.
    for k in 2..n.bits() as u32 {
        let root = n.nth_root(k);
        if root.pow(k) == n {
            collect_prime_factors(root, out);
            return;
        }
    }
    let d = pollard_brent(&n);
    let rest = &n / &d;
    collect_prime_factors(d, out);
    collect_prime_factors(rest, out);
}

/// Distinct prime factors of a positive integer, ascending.
fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut m = n.magnitude().clone();
    let mut out = Vec::new();
    for &p in &SMALL_PRIMES {
        if (&m % p).is_zero() {
            out.push(BigUint::from(p));
            while (&m % p).is_zero() {
                m /= p;
            }
        }
    }
    collect_prime_factors(m, &mut out);
    out.sort();
    out.dedup();
    out.into_iter().map(BigInt::from).collect()
}

/// The Gaussian primes (up to units) lying above the rational prime `p`.
fn gaussian_primes_above(p: &BigInt) -> Vec<GaussInt> {
    let two = BigInt::from(2);
    let four = BigInt::from(4);
    if *p == two {
        return vec![GaussInt::small(1, 1)];
    }
    if (p % &four) == BigInt::from(3) {
        return vec![GaussInt::new(p.clone(), BigInt::zero())];
    }
    // p ≡ 1 (mod 4): x² ≡ -1 (mod p) from a non-residue c via x = c^((p-1)/4),
    // then gcd(p, x + i) is a prime of norm p.
    let exp = (p - 1u32) / &four;
    let minus_one = p - 1u32;
    let mut c = BigInt::from(2);
    let x = loop {
        let x = c.modpow(&exp, p);
        if (&x * &x) % p == minus_one {
            break x;
        }
        c += 1;
    };
    let pi = GaussInt::gcd(
        &GaussInt::new(p.clone(), BigInt::zero()),
        &GaussInt::new(x, BigInt::one()),
    );
    vec![pi.clone(), pi.conj()]
}

/// All divisors of a nonzero Gaussian integer, one representative per
/// associate class.
fn divisors_up_to_units(g: &GaussInt) -> Vec<GaussInt> {
    let mut rest = g.clone();
    let mut prime_powers: Vec<(GaussInt, u32)> = Vec::new();
    for p in prime_factors(&g.norm()) {
        for pi in gaussian_primes_above(&p) {
            let mut e = 0;
            while let Some(q) = rest.div_exact(&pi) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                prime_powers.push((pi, e));
            }
        }
    }
    let mut divs = vec![GaussInt::small(1, 0)];
    for (pi, e) in prime_powers {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..e {
                acc = acc.mul(&pi);
                next.push(acc.clone());
            }
        }
        divs = next;
    }
    divs
}

/// Coefficients scaled to a primitive-content vector in Z[i].
fn integral_coefficients(p: &Poly) -> Vec<GaussInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
    let scale = BigRational::from_integer(lcm);
    let mut ints: Vec<GaussInt> = p
        .coeffs()
        .iter()
        .map(|c| {
            let re = c.re() * &scale;
            let im = c.im() * &scale;
            GaussInt::new(re.to_integer(), im.to_integer())
        })
        .collect();
    let content = ints
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(&c.re).gcd(&c.im));
    if !content.is_zero() && !content.is_one() {
        for c in &mut ints {
            c.re /= &content;
            c.im /= &content;
        }
    }
    ints
}

/// Exact square root of a Gaussian integer, if it has one.
fn sqrt_gauss_int(g: &GaussInt) -> Option<GaussInt> {
    let r = g.norm().sqrt();
    if &r * &r != g.norm() {
        return None;
    }
    // (a + bi)² = x + yi with a² + b² = |g| gives a² = (|g| + x)/2, b² = (|g| - x)/2.
    let two = BigInt::from(2);
    let a = ((&r + &g.re) / &two).sqrt();
    let mut b = ((&r - &g.re) / &two).sqrt();
    if g.im.is_negative() {
        b = -b;
    }
    let root = GaussInt::new(a, b);
    (root.mul(&root) == *g).then_some(root)
}

/// Exact square root in Q(i), if one exists.
fn sqrt_exact(x: &Q) -> Option<Q> {
    let d = x.denominator_lcm();
    let d2 = BigRational::from_integer(&d * &d);
    let g = GaussInt::new((x.re() * &d2).to_integer(), (x.im() * &d2).to_integer());
    let root = sqrt_gauss_int(&g)?;
    root.to_q()
        .checked_div(&Q::new(BigRational::from_integer(d), BigRational::zero()))
        .ok()
}

fn quadratic_roots(p: &Poly) -> Vec<Q> {
    let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let disc = &(&b * &b) - &(&(&a * &c) * &Q::from_int(4));
    let Some(r) = sqrt_exact(&disc) else {
        return Vec::new();
    };
    let two_a = &a * &Q::from_int(2);
    let mut roots: Vec<Q> = [&r - &b, -(&r + &b)]
        .iter()
        .map(|num| num.checked_div(&two_a).expect("degree 2"))
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

/// Roots in Q(i) of a square-free polynomial with nonzero constant term.
fn roots_of_squarefree(p: &Poly) -> Vec<Q> {
    match p.degree() {
        Some(1) => vec![(-p.coeff(0)).checked_div(&p.coeff(1)).expect("degree 1")],
        Some(2) => quadratic_roots(p),
        _ => rational_root_search(p),
    }
}

fn rational_root_search(p: &Poly) -> Vec<Q> {
    let ints = integral_coefficients(p);
    let (c0, cn) = (&ints[0], ints.last().expect("nonconstant"));
    let numerators = divisors_up_to_units(c0);
    let denominators = divisors_up_to_units(cn);
    // A root a/b in lowest terms makes bz - a a factor over Z[i], so
    // b - a divides P(1) and b + a divides P(-1).
    let at_one = ints.iter().fold(GaussInt::small(0, 0), |acc, c| acc.add(c));
    let at_minus_one = ints
        .iter()
        .rev()
        .fold(GaussInt::small(0, 0), |acc, c| acc.neg().add(c));
    let passes = |value: &GaussInt, divisor: &GaussInt| {
        value.is_zero() || divisor.is_zero() || value.div_exact(divisor).is_some()
    };
    let mut found = BTreeSet::new();
    let want = p.degree().unwrap_or(0);
    'outer: for den in &denominators {
        let den_q = den.to_q();
        for num in &numerators {
            for &(ur, ui) in &UNITS {
                let num = num.mul(&GaussInt::small(ur, ui));
                if !passes(&at_one, &den.add(&num.neg())) || !passes(&at_minus_one, &den.add(&num))
                {
                    continue;
                }
                let cand = num.to_q().checked_div(&den_q).expect("nonzero divisor");
                if !found.contains(&cand) && p.eval(&cand).is_zero() {
                    found.insert(cand);
                    if found.len() == want {
                        break 'outer;
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

/// All roots of `p` lying in Q(i), with exact multiplicities, in canonical
/// scalar order. Roots outside Q(i) are not reported; their multiplicities
/// remain visible through [`squarefree_decomposition`].
pub fn gaussian_rational_roots(p: &Poly) -> Result<Vec<RootWithMultiplicity>> {
    let mut out = Vec::new();
    for (factor, multiplicity) in squarefree_decomposition(p)? {
        let mut f = factor;
        if f.coeff(0).is_zero() {
            out.push(RootWithMultiplicity {
                root: Q::zero(),
                multiplicity,
            });
            f = f.exact_divide(&Poly::z())?;
        }
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        out.extend(
            roots_of_squarefree(&f)
                .into_iter()
                .map(|root| RootWithMultiplicity { root, multiplicity }),
        );
    }
    out.sort();
    Ok(out)
}

/// Degrees of the square-free factors of `p` left after removing every
/// linear factor over Q(i). Empty exactly when `p` splits over Q(i).
pub fn unsplit_degrees(p: &Poly) -> Result<Vec<usize>> {
    let roots = gaussian_rational_roots(p)?;
    let mut out = Vec::new();
    for (factor, m) in squarefree_decomposition(p)? {
        let found = roots.iter().filter(|r| r.multiplicity == m).count();
        let deg = factor.degree().unwrap_or(0);
        if deg > found {
            out.push(deg - found);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn rwm(r: &str, m: usize) -> RootWithMultiplicity {
        RootWithMultiplicity {
            root: q(r),
            multiplicity: m,
        }
    }

    #[test]
    fn worked_examples() {
        assert_eq!(
            gaussian_rational_roots(&Poly::from_ints(&[0, 0, 1])).unwrap(),
            vec![rwm("0", 2)]
        );
        assert_eq!(
            gaussian_rational_roots(&Poly::from_ints(&[1, 0, 1])).unwrap(),
            vec![rwm("0-1i", 1), rwm("0+1i", 1)]
        );
        assert!(gaussian_rational_roots(&Poly::from_ints(&[-2, 0, 1]))
            .unwrap()
            .is_empty());
        assert_eq!(
            unsplit_degrees(&Poly::from_ints(&[-2, 0, 1])).unwrap(),
            vec![2]
        );
    }

    #[test]
    fn fractional_gaussian_roots() {
        let roots = [q("1/2+3/4i"), q("-2/3"), q("5i")];
        let pp = Poly::from_roots(roots.iter().map(|r| (r, 1))).scale(&q("7-2i"));
        let found: Vec<Q> = gaussian_rational_roots(&pp)
            .unwrap()
            .into_iter()
            .map(|r| r.root)
            .collect();
        let mut want = roots.to_vec();
        want.sort();
        assert_eq!(found, want);
    }

    #[test]
    fn split_primes() {
        for p in [5u32, 13, 17, 29, 97, 101] {
            let [a, b] = &gaussian_primes_above(&BigInt::from(p))[..] else {
                panic!("expected two primes above {p}")
            };
            assert_eq!(a.norm(), BigInt::from(p));
            assert_eq!(b.norm(), BigInt::from(p));
        }
        assert_eq!(divisors_up_to_units(&GaussInt::small(5, 0)).len(), 4);
        assert_eq!(divisors_up_to_units(&GaussInt::small(3, 0)).len(), 2);
    }

    #[test]
    fn constants_rejected() {
        assert!(gaussian_rational_roots(&Poly::from_ints(&[3])).is_err());
        assert!(gaussian_rational_roots(&Poly::zero()).is_err());
    }

    #[test]
    fn factors_large_semiprimes() {
        let p: BigInt = "1000000000000000003".parse().unwrap();
        let r: BigInt = "998244353".parse().unwrap();
        let s: BigInt = "1000000007".parse().unwrap();
        let n = &p * &p * &p * &r * &s * BigInt::from(12);
        assert_eq!(prime_factors(&n), vec![2.into(), 3.into(), r, s, p]);
        assert!(is_probable_prime(&BigUint::from(2_147_483_647u32)));
        // Carmichael number
        assert!(!is_probable_prime(&BigUint::from(561u32)));
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact(&q("-4")), Some(q("0+2i")));
        assert_eq!(sqrt_exact(&q("0+2i")), Some(q("1+1i")));
        assert_eq!(sqrt_exact(&q("-5/4-3i")), Some(q("1-3/2i")));
        assert_eq!(sqrt_exact(&q("2")), None);
        assert_eq!(sqrt_exact(&q("i")), None);
        assert_eq!(sqrt_exact(&q("0")), Some(q("0")));
    }

    #[test]
    fn closed_forms_and_search_agree() {
        // (3z - (2+i))(z + 5/7) and z² + 1 split; z² - 3 does not.
        let a = q("2/3+1/3i");
        let b = q("-5/7");
        assert_eq!(
            roots_of_squarefree(&Poly::from_roots([(&a, 1), (&b, 1)])),
            vec![b.clone(), a.clone()]
        );
        assert_eq!(
            rational_root_search(&Poly::from_roots([(&a, 1), (&b, 1)])),
            vec![b.clone(), a.clone()]
        );
        assert_eq!(roots_of_squarefree(&Poly::from_ints(&[1, 0, 1])).len(), 2);
        assert!(roots_of_squarefree(&Poly::from_ints(&[-3, 0, 1])).is_empty());
        // A cubic with large coefficients: (z - 123456789/1024)(z² - 3).
        let big = q("123456789/1024+17i");
        let cubic = &Poly::linear(&big) * &Poly::from_ints(&[-3, 0, 1]);
        assert_eq!(roots_of_squarefree(&cubic), vec![big]);
    }

    fn arb_root() -> impl Strategy<Value = Q> {
        (-6i64..=6, -6i64..=6, 1i64..=4).prop_map(|(a, b, d)| Q::from_parts(a, d, b, d))
    }

    proptest! {
        #[test]
        fn reported_roots_are_exact(
            roots in prop::collection::vec((arb_root(), 1usize..=3), 1..=4),
            extra in prop::collection::vec(-3i64..=3, 0..=2)
        ) {
            // Planted roots times an irreducible-ish cofactor z² - 2 or similar.
            let mut pp = Poly::from_roots(roots.iter().map(|(r, m)| (r, *m)));
            if extra.len() == 2 {
                pp = &pp * &Poly::from_ints(&[-2 - extra[0].abs(), 0, 1]);
            }
            let found = gaussian_rational_roots(&pp).unwrap();
            for r in &found {
                let block = Poly::linear(&r.root).pow(r.multiplicity);
                let quotient = pp.exact_divide(&block).unwrap();
                prop_assert!(!quotient.eval(&r.root).is_zero());
            }
            for (r, _) in &roots {
                prop_assert!(found.iter().any(|f| &f.root == r));
            }
        }
    }
}
