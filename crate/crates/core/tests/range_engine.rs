mod common;

use std::collections::BTreeMap;

use common::{conjugate, conjugated_jordan, q, random_blocks, rng, small_integer_poly};
use matrange_core::selftest::random_gaussian_integer;
use matrange_core::{
    apply_poly, build_witness, coverable, decide_range, partitions, split_pattern, CoverStep,
    EntireFunction, GaussianRational as Q, MatrixQi, Poly,
};
use proptest::prelude::*;
use rand::Rng;

/// Every multiset of steps `(K, m)` with `ΣK = total`, no pruning.
fn all_step_multisets(total: usize, options: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn go(
        rest: usize,
        steps: &[(usize, usize)],
        from: usize,
        prefix: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for (i, &(k, m)) in steps.iter().enumerate().skip(from) {
            if k <= rest {
                prefix.push((k, m));
                go(rest - k, steps, i, prefix, out);
                prefix.pop();
            }
        }
    }
    let steps: Vec<(usize, usize)> = (1..=total)
        .flat_map(|k| options.iter().map(move |&m| (k, m)))
        .collect();
    let mut out = Vec::new();
    go(total, &steps, 0, &mut Vec::new(), &mut out);
    out
}

fn union_of_splits(steps: &[(usize, usize)]) -> Vec<usize> {
    let mut parts: Vec<usize> = steps
        .iter()
        .flat_map(|&(k, m)| split_pattern(k, m).parts)
        .collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

fn as_pairs(steps: &[CoverStep]) -> Vec<(usize, usize)> {
    steps
        .iter()
        .map(|s| (s.block_size, s.multiplicity))
        .collect()
}

/// Lexicographically least sorted step list among those covering `target`.
fn least_cover(all: &[Vec<(usize, usize)>], target: &[usize]) -> Option<Vec<(usize, usize)>> {
    all.iter()
        .filter(|s| union_of_splits(s) == target)
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s
        })
        .min()
}

fn within_limits(steps: &[(usize, usize)], limits: &BTreeMap<usize, usize>) -> bool {
    let mut used: BTreeMap<usize, usize> = BTreeMap::new();
    for &(_, m) in steps {
        *used.entry(m).or_default() += 1;
    }
    used.iter()
        .all(|(m, c)| limits.get(m).is_some_and(|l| c <= l))
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0..1u32 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &m)| m)
                .collect()
        })
        .collect()
}

#[test]
fn cover_search_agrees_with_exhaustive_enumeration() {
    for multiplicities in subsets(&[2, 3, 4, 5]) {
        for simple in [false, true] {
            let mut options = multiplicities.clone();
            if simple {
                options.insert(0, 1);
            }
            for total in 1..=7 {
                let all = all_step_multisets(total, &options);
                for target in partitions(total) {
                    let least = least_cover(&all, &target);
                    let found = coverable(&target, &multiplicities, simple, true);
                    assert_eq!(
                        found.is_some(),
                        least.is_some(),
                        "{target:?} with {multiplicities:?}, simple {simple}"
                    );
                    if let Some(steps) = found {
                        let pairs = as_pairs(&steps);
                        assert_eq!(union_of_splits(&pairs), target);
                        assert_eq!(Some(pairs), least);
                    }
                }
            }
        }
    }
}

#[test]
fn limited_cover_search_agrees_with_exhaustive_enumeration() {
    for multiplicities in [
        vec![2],
        vec![2, 2],
        vec![2, 3],
        vec![3, 3, 2],
        vec![4, 2, 2],
    ] {
        let mut limits: BTreeMap<usize, usize> = BTreeMap::new();
        for &m in &multiplicities {
            *limits.entry(m).or_default() += 1;
        }
        let options: Vec<usize> = limits.keys().copied().collect();
        for total in 1..=7 {
            let allowed: Vec<_> = all_step_multisets(total, &options)
                .into_iter()
                .filter(|s| within_limits(s, &limits))
                .collect();
            for target in partitions(total) {
                assert_eq!(
                    coverable(&target, &multiplicities, false, false).map(|c| as_pairs(&c)),
                    least_cover(&allowed, &target),
                    "{target:?} with {multiplicities:?}"
                );
            }
        }
    }
}

fn sample_functions(r: &mut impl Rng) -> Vec<EntireFunction> {
    let t = random_gaussian_integer(r, 3);
    let base = small_integer_poly(r, 2);
    vec![
        EntireFunction::polynomial(Poly::from_ints(&[0, 0, 1])).unwrap(),
        EntireFunction::polynomial(Poly::from_ints(&[0, 0, 0, 1])).unwrap(),
        EntireFunction::polynomial(&(&base * &base) + &Poly::constant(t)).unwrap(),
        EntireFunction::polynomial(small_integer_poly(r, 3)).unwrap(),
        EntireFunction::sin_family(q("0"), q("1"), q("1"), q("0")).unwrap(),
        EntireFunction::exp_poly(q("1"), Poly::from_ints(&[1]), q("1"), q("0")).unwrap(),
        EntireFunction::exp_poly(q("i"), Poly::from_ints(&[0, 0, 1]), q("2"), q("0")).unwrap(),
    ]
}

/// Eigenvalue pool that includes the special values of the sample functions.
fn pool_for(f: &EntireFunction) -> Vec<Q> {
    let mut pool: Vec<Q> = ["0", "1", "i", "-1/2"].iter().map(|s| q(s)).collect();
    let profile = matrange_core::ramification_profile(f).unwrap();
    pool.extend(profile.trv_entries.iter().map(|e| e.value.clone()));
    pool.extend(profile.omitted_values.iter().cloned());
    pool
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn verdict_is_similarity_invariant(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        for f in sample_functions(&mut r) {
            let blocks = random_blocks(&mut r, n, &pool_for(&f));
            let j = MatrixQi::block_diagonal(
                &blocks.iter().map(|(l, k)| MatrixQi::jordan_block(*k, l)).collect::<Vec<_>>(),
            );
            let a = conjugate(&mut r, &j);
            prop_assert_eq!(decide_range(&f, &j).unwrap(), decide_range(&f, &a).unwrap());
        }
    }

    /// `A = T f(Y) T⁻¹` with Y in Jordan form over Q(i) is always solvable,
    /// and the witness builder must find an exact preimage.
    #[test]
    fn witnesses_for_engineered_images(seed in any::<u64>(), n in 1usize..=4, deg in 1usize..=5) {
        let mut r = rng(seed);
        let p = if r.gen_bool(0.5) {
            small_integer_poly(&mut r, deg)
        } else {
            let base = small_integer_poly(&mut r, deg.div_ceil(2));
            &(&base * &base) + &Poly::constant(random_gaussian_integer(&mut r, 3))
        };
        let f = EntireFunction::polynomial(p.clone()).unwrap();
        let mut pool: Vec<Q> = ["0", "1", "-1", "i"].iter().map(|s| q(s)).collect();
        pool.push(random_gaussian_integer(&mut r, 2));
        let blocks = random_blocks(&mut r, n, &pool);
        let y = conjugated_jordan(&mut r, &blocks);
        let a = conjugate(&mut r, &apply_poly(&p, &y));
        let verdict = decide_range(&f, &a).unwrap();
        prop_assert!(verdict.solvable);
        let x = build_witness(&f, &a, &verdict).unwrap();
        prop_assert_eq!(apply_poly(&p, &x), a);
    }

    /// A lone block `J_k(0)`, `k ≥ 2`, at zero is never a power `X^m`.
    #[test]
    fn unsolvable_verdicts_have_no_witness(seed in any::<u64>(), n in 2usize..=4, m in 2usize..=4) {
        let mut r = rng(seed);
        let f = EntireFunction::polynomial(Poly::z().pow(m)).unwrap();
        let k = r.gen_range(2..=n);
        let mut blocks = random_blocks(&mut r, n - k, &[q("1"), q("-i")]);
        blocks.push((q("0"), k));
        let a = conjugated_jordan(&mut r, &blocks);
        let verdict = decide_range(&f, &a).unwrap();
        prop_assert!(!verdict.solvable, "{:?}", blocks);
        prop_assert!(build_witness(&f, &a, &verdict).is_err());
    }
}
