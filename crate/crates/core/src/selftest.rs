//! Seeded property suites for the matrix-function identities and the
//! split-pattern formula. Used by the `selftest` CLI command; every failure
//! is reproducible from the printed seed.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::matrix::{apply_poly, f_of_jordan_block, segre_at, MatrixQi};
use crate::poly::Poly;
use crate::range::{split_pattern, split_pattern_oracle, split_pattern_oracle_shifted};
use crate::scalar::GaussianRational as Q;

pub const DEFAULT_SEED: u64 = 0x5_eed0_fa11;

/// Small Gaussian rational with components `a/d`, `|a| ≤ 3`, `d ∈ {1, 2}`.
pub fn random_scalar(rng: &mut impl Rng) -> Q {
    let d = rng.gen_range(1..=2);
    Q::from_parts(rng.gen_range(-3..=3), d, rng.gen_range(-3..=3), d)
}

pub fn random_gaussian_integer(rng: &mut impl Rng, bound: i64) -> Q {
    Q::gaussian(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
}

/// Polynomial of exact degree `deg` with small Gaussian-rational coefficients.
pub fn random_poly(rng: &mut impl Rng, deg: usize) -> Poly {
    let mut coeffs: Vec<Q> = (0..=deg).map(|_| random_scalar(rng)).collect();
    while coeffs[deg].is_zero() {
        coeffs[deg] = random_scalar(rng);
    }
    Poly::new(coeffs)
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> MatrixQi {
    MatrixQi::from_rows(
        (0..n)
            .map(|_| (0..n).map(|_| random_scalar(rng)).collect())
            .collect(),
    )
    .expect("square")
}

/// Unimodular `L·U` with unit diagonals and small Gaussian-integer entries.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> MatrixQi {
    let mut l = MatrixQi::identity(n);
    let mut u = MatrixQi::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = random_gaussian_integer(rng, 1);
            u[(j, i)] = random_gaussian_integer(rng, 1);
        }
    }
    &l * &u
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }
}

struct Tally {
    result: SuiteResult,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            result: SuiteResult {
                name,
                passed: 0,
                failed: 0,
                first_failure: None,
            },
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.result.passed += 1;
        } else {
            self.result.failed += 1;
            self.result.first_failure.get_or_insert_with(describe);
        }
    }
}

/// `f(T⁻¹AT) = T⁻¹f(A)T`.
pub fn similarity_suite(rng: &mut impl Rng, cases: usize) -> SuiteResult {
    let mut t = Tally::new("fact1_similarity");
    for _ in 0..cases {
        let n = rng.gen_range(1..=4);
        let p = {
            let deg = rng.gen_range(1..=6);
            random_poly(rng, deg)
        };
        let a = random_matrix(rng, n);
        let tm = random_invertible(rng, n);
        let ti = tm.inverse().expect("unimodular");
        let lhs = apply_poly(&p, &(&(&ti * &a) * &tm));
        let rhs = &(&ti * &apply_poly(&p, &a)) * &tm;
        t.check(lhs == rhs, || format!("P = {p:?}, A = {a:?}, T = {tm:?}"));
    }
    t.result
}

/// `f(J_k(z0))` is the Toeplitz matrix of scaled derivatives.
pub fn jordan_block_suite(rng: &mut impl Rng, per_k: usize) -> SuiteResult {
    let mut t = Tally::new("fact2_jordan_block");
    for k in 1..=8 {
        for _ in 0..per_k {
            let p = {
                let deg = rng.gen_range(1..=8);
                random_poly(rng, deg)
            };
            let z0 = random_scalar(rng);
            let ok =
                f_of_jordan_block(&p, k, &z0) == apply_poly(&p, &MatrixQi::jordan_block(k, &z0));
            t.check(ok, || format!("P = {p:?}, k = {k}, z0 = {z0}"));
        }
    }
    t.result
}

/// `f(diag(A_1, …, A_m)) = diag(f(A_1), …, f(A_m))`.
pub fn block_diagonal_suite(rng: &mut impl Rng, cases: usize) -> SuiteResult {
    let mut t = Tally::new("fact3_block_diagonal");
    for _ in 0..cases {
        let p = {
            let deg = rng.gen_range(1..=5);
            random_poly(rng, deg)
        };
        let blocks: Vec<MatrixQi> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let n = rng.gen_range(1..=3);
                random_matrix(rng, n)
            })
            .collect();
        let lhs = apply_poly(&p, &MatrixQi::block_diagonal(&blocks));
        let rhs =
            MatrixQi::block_diagonal(&blocks.iter().map(|b| apply_poly(&p, b)).collect::<Vec<_>>());
        t.check(lhs == rhs, || format!("P = {p:?}, blocks = {blocks:?}"));
    }
    t.result
}

/// Strictly upper triangular with constant first superdiagonal `a` and
/// arbitrary entries above it.
pub fn superdiagonal_matrix(rng: &mut impl Rng, n: usize, diag: &Q, a: &Q) -> MatrixQi {
    let mut m = MatrixQi::scalar(n, diag.clone());
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = if j == i + 1 {
                a.clone()
            } else {
                random_scalar(rng)
            };
        }
    }
    m
}

fn diagonal_entries(m: &MatrixQi, k: usize) -> Vec<Q> {
    (0..m.n() - k).map(|i| m[(i, i + k)].clone()).collect()
}

/// Powers of a nilpotent upper-triangular matrix shift the constant
/// superdiagonal: `A^k` vanishes on `d_1..d_{k-1}` and is `a^k` on `d_k`.
pub fn diagonal_shift_suite(rng: &mut impl Rng, per_n: usize) -> SuiteResult {
    let mut t = Tally::new("fact4_diagonal_shift");
    for n in 2..=8 {
        for _ in 0..per_n {
            let a = random_scalar(rng);
            let m = superdiagonal_matrix(rng, n, &Q::zero(), &a);
            for k in 1..n {
                let pk = m.pow(k);
                let lower_zero = (0..k).all(|d| diagonal_entries(&pk, d).iter().all(Zero::is_zero));
                let top = a.pow(k as u32);
                let on_k = diagonal_entries(&pk, k).iter().all(|x| *x == top);
                t.check(lower_zero && on_k, || {
                    format!("n = {n}, k = {k}, A = {m:?}")
                });
            }
        }
    }
    t.result
}

/// Single Jordan block criterion: constant diagonal `λ` and constant
/// superdiagonal `a` give one block `J_n(λ)` iff `a ≠ 0`.
pub fn single_block_suite(rng: &mut impl Rng, per_n: usize) -> SuiteResult {
    let mut t = Tally::new("fact5_single_block");
    for n in 1..=6 {
        for _ in 0..per_n {
            let lambda = random_scalar(rng);
            let mut a = random_scalar(rng);
            if a.is_zero() {
                a = Q::one();
            }
            let m = superdiagonal_matrix(rng, n, &lambda, &a);
            t.check(segre_at(&m, &lambda).parts == [n], || {
                format!("a ≠ 0 should give one block: {m:?}")
            });
            if n >= 2 {
                // a = 0 with the strictly upper part zeroed: diagonal, n blocks.
                let m0 = MatrixQi::scalar(n, lambda.clone());
                t.check(segre_at(&m0, &lambda).parts != [n], || {
                    format!("a = 0 gave one block: {m0:?}")
                });
                // a = 0 but junk above the superdiagonal kept.
                let mj = superdiagonal_matrix(rng, n, &lambda, &Q::zero());
                t.check(segre_at(&mj, &lambda).parts != [n], || {
                    format!("a = 0 with junk gave one block: {mj:?}")
                });
                // a ≠ 0 but a perturbed diagonal entry.
                let mut md = m.clone();
                md[(n - 1, n - 1)] = &lambda + &Q::one();
                t.check(segre_at(&md, &lambda).parts != [n], || {
                    format!("non-constant diagonal gave one block: {md:?}")
                });
            }
        }
    }
    t.result
}

/// Closed-form split patterns against the rank-derived Jordan structure.
pub fn split_oracle_suite() -> SuiteResult {
    let mut t = Tally::new("split_pattern_oracle");
    for m in 1..=8 {
        for k in 1..=8 {
            let formula = split_pattern(k, m).parts;
            let plain = split_pattern_oracle(k, m);
            let shifted = split_pattern_oracle_shifted(k, m);
            t.check(formula == plain && formula == shifted, || {
                format!("K = {k}, m = {m}: formula {formula:?}, oracle {plain:?} / {shifted:?}")
            });
        }
    }
    t.result
}

pub fn run(seed: u64) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SelftestReport {
        seed,
        suites: vec![
            similarity_suite(&mut rng, 50),
            jordan_block_suite(&mut rng, 4),
            block_diagonal_suite(&mut rng, 30),
            diagonal_shift_suite(&mut rng, 3),
            single_block_suite(&mut rng, 4),
            split_oracle_suite(),
        ],
    }
}
