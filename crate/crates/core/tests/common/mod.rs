#![allow(dead_code)]

use matrange_core::selftest::{random_gaussian_integer, random_invertible};
use matrange_core::{GaussianRational as Q, MatrixQi, Poly};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn q(s: &str) -> Q {
    s.parse().unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_c64(x: &Q) -> Complex64 {
    Complex64::new(x.re().to_f64().unwrap(), x.im().to_f64().unwrap())
}

pub fn eval_c64(p: &Poly, z: Complex64) -> Complex64 {
    p.coeffs()
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_c64(c))
}

/// All complex roots of a polynomial by Durand–Kerner iteration.
pub fn durand_kerner(p: &Poly) -> Vec<Complex64> {
    let monic: Vec<Complex64> = p.monic().unwrap().coeffs().iter().map(to_c64).collect();
    let d = monic.len() - 1;
    let eval = |z: Complex64| {
        monic
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |a, c| a * z + c)
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..5000 {
        let prev = roots.clone();
        for i in 0..d {
            let denom = (0..d)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |a, j| a * (roots[i] - roots[j]));
            if denom.norm() > 0.0 {
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
            }
        }
        let moved = roots
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if moved < 1e-15 {
            break;
        }
    }
    roots
}

/// Random polynomial with small Gaussian-integer coefficients and exact degree.
pub fn small_integer_poly(rng: &mut impl Rng, deg: usize) -> Poly {
    let mut coeffs: Vec<Q> = (0..=deg).map(|_| random_gaussian_integer(rng, 3)).collect();
    while coeffs[deg] == Q::from_int(0) {
        coeffs[deg] = random_gaussian_integer(rng, 3);
    }
    Poly::new(coeffs)
}

/// Block-diagonal Jordan matrix conjugated by a random unimodular matrix.
pub fn conjugated_jordan(rng: &mut impl Rng, blocks: &[(Q, usize)]) -> MatrixQi {
    let j = MatrixQi::block_diagonal(
        &blocks
            .iter()
            .map(|(l, k)| MatrixQi::jordan_block(*k, l))
            .collect::<Vec<_>>(),
    );
    conjugate(rng, &j)
}

pub fn conjugate(rng: &mut impl Rng, m: &MatrixQi) -> MatrixQi {
    let t = random_invertible(rng, m.n());
    &(&t * m) * &t.inverse().unwrap()
}

/// Random Jordan structure of total size `n` with eigenvalues from `pool`.
pub fn random_blocks(rng: &mut impl Rng, n: usize, pool: &[Q]) -> Vec<(Q, usize)> {
    let mut left = n;
    let mut out = Vec::new();
    while left > 0 {
        let k = rng.gen_range(1..=left);
        out.push((pool[rng.gen_range(0..pool.len())].clone(), k));
        left -= k;
    }
    out
}
