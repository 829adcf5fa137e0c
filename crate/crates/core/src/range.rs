//! Solvability of `f(X) = A` and the structure of the range of `f` on
//! `n × n` matrices.
//!
//! `f(X) = A` is solvable exactly when every eigenvalue of `A` is attained
//! by `f`, and at each totally ramified value `a` the Jordan block sizes of
//! `A` at `a` can be written as a union of split patterns: a Jordan block
//! `J_K(z0)` of `X`, with `z0` a root of `f - a` of multiplicity `m`, turns
//! into blocks of sizes `split_pattern(K, m)` in `f(X)`. Eigenvalues that are
//! neither omitted nor totally ramified have a simple preimage and never
//! obstruct.

use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{validate, EntireFunction, TheoremCase, TrvEntry};
use crate::matrix::{apply_poly, char_poly, is_in_e, jordan_decomposition, segre_at, MatrixQi};
use crate::poly::Poly;
use crate::roots::{gaussian_rational_roots, RootWithMultiplicity};
use crate::scalar::GaussianRational as Q;

/// Jordan block sizes at `a` of `f(J_K(z0))` when `z0` is a root of `f - a`
/// of multiplicity `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitPattern {
    pub block_size: usize,
    pub multiplicity: usize,
    /// Non-increasing.
    pub parts: Vec<usize>,
}

/// `K mod m` blocks of size `⌈K/m⌉` and `m - K mod m` blocks of size `⌊K/m⌋`,
/// zero sizes dropped.
pub fn split_pattern(block_size: usize, multiplicity: usize) -> SplitPattern {
    assert!(
        block_size >= 1 && multiplicity >= 1,
        "split_pattern needs K, m ≥ 1"
    );
    let (q, r) = (block_size / multiplicity, block_size % multiplicity);
    let mut parts = vec![q + 1; r];
    if q > 0 {
        parts.extend(std::iter::repeat_n(q, multiplicity - r));
    }
    SplitPattern {
        block_size,
        multiplicity,
        parts,
    }
}

/// Rank-derived Jordan structure of `P(J_K(0))` at 0 for `P = z^m`.
pub fn split_pattern_oracle(block_size: usize, multiplicity: usize) -> Vec<usize> {
    let p = Poly::z().pow(multiplicity);
    let zero = Q::zero();
    segre_at(
        &apply_poly(&p, &MatrixQi::jordan_block(block_size, &zero)),
        &zero,
    )
    .parts
}

/// Same as [`split_pattern_oracle`] with `P = (z - 1)^m (z + 2)` at the root
/// `z0 = 1`: an extra simple factor away from `z0` must not change the split.
pub fn split_pattern_oracle_shifted(block_size: usize, multiplicity: usize) -> Vec<usize> {
    let one = Q::from_int(1);
    let p = &Poly::linear(&one).pow(multiplicity) * &Poly::from_ints(&[2, 1]);
    let block = MatrixQi::jordan_block(block_size, &one);
    segre_at(&apply_poly(&p, &block), &Q::zero()).parts
}

/// One source block `J_K(z0)` with `z0` of multiplicity `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CoverStep {
    #[serde(rename = "K")]
    pub block_size: usize,
    #[serde(rename = "m")]
    pub multiplicity: usize,
}

/// Removes `parts` from the non-increasing multiset `from`, if contained.
fn remove_parts(from: &[usize], parts: &[usize]) -> Option<Vec<usize>> {
    let mut rest = from.to_vec();
    for p in parts {
        let idx = rest.iter().position(|x| x == p)?;
        rest.remove(idx);
    }
    Some(rest)
}

struct CoverSearch<'a> {
    options: &'a [usize],
    /// Remaining uses per option; `None` for unlimited reuse.
    limits: Option<Vec<usize>>,
    failed: HashSet<(Vec<usize>, Vec<usize>)>,
}

impl CoverSearch<'_> {
    fn run(&mut self, remaining: Vec<usize>) -> Option<Vec<CoverStep>> {
        let Some(&largest) = remaining.first() else {
            return Some(Vec::new());
        };
        let key = (remaining.clone(), self.limits.clone().unwrap_or_default());
        if self.failed.contains(&key) {
            return None;
        }
        let total: usize = remaining.iter().sum();
        for (idx, &m) in self.options.iter().enumerate() {
            if self.limits.as_ref().is_some_and(|l| l[idx] == 0) {
                continue;
            }
            // The largest remaining part must be the largest part of this
            // split, which forces ⌈K/m⌉ = largest.
            let lo = m * (largest - 1) + 1;
            let hi = (m * largest).min(total);
            for k in lo..=hi {
                let split = split_pattern(k, m);
                let Some(rest) = remove_parts(&remaining, &split.parts) else {
                    continue;
                };
                if let Some(l) = self.limits.as_mut() {
                    l[idx] -= 1;
                }
                let found = self.run(rest);
                if let Some(l) = self.limits.as_mut() {
                    l[idx] += 1;
                }
                if let Some(mut steps) = found {
                    steps.push(CoverStep {
                        block_size: k,
                        multiplicity: m,
                    });
                    return Some(steps);
                }
            }
        }
        self.failed.insert(key);
        None
    }

    /// The lexicographically least ascending step sequence covering
    /// `remaining` whose steps are all at least `from` (an index into
    /// `steps`). A depth-first walk that tries steps in ascending order
    /// visits sequences in lexicographic order, so the first hit is least.
    fn least(
        &mut self,
        steps: &[(CoverStep, usize, Vec<usize>)],
        remaining: Vec<usize>,
        from: usize,
        failed: &mut HashSet<(Vec<usize>, usize, Vec<usize>)>,
    ) -> Option<Vec<CoverStep>> {
        if remaining.is_empty() {
            return Some(Vec::new());
        }
        let key = (
            remaining.clone(),
            from,
            self.limits.clone().unwrap_or_default(),
        );
        if failed.contains(&key) {
            return None;
        }
        for (i, (step, idx, parts)) in steps.iter().enumerate().skip(from) {
            if self.limits.as_ref().is_some_and(|l| l[*idx] == 0) {
                continue;
            }
            let Some(rest) = remove_parts(&remaining, parts) else {
                continue;
            };
            if let Some(l) = self.limits.as_mut() {
                l[*idx] -= 1;
            }
            let found = self.least(steps, rest, i, failed);
            if let Some(l) = self.limits.as_mut() {
                l[*idx] += 1;
            }
            if let Some(mut tail) = found {
                tail.insert(0, *step);
                return Some(tail);
            }
        }
        failed.insert(key);
        None
    }
}

/// Writes `target` as a multiset union of split patterns.
///
/// `multiplicities` lists the available preimage multiplicities (each ≥ 2);
/// `simple_available` adds multiplicity 1. With `unlimited_reuse` every
/// multiplicity may be used any number of times (distinct blocks of `X` may
/// share a root); otherwise `multiplicities` is a multiset of single uses.
/// Returns the steps sorted ascending, or `None` if no cover exists. When
/// several covers exist the lexicographically least sorted sequence wins.
pub fn coverable(
    target: &[usize],
    multiplicities: &[usize],
    simple_available: bool,
    unlimited_reuse: bool,
) -> Option<Vec<CoverStep>> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &m in multiplicities {
        *counts.entry(m).or_default() += 1;
    }
    if simple_available {
        counts.insert(1, usize::MAX);
    }
    let options: Vec<usize> = counts.keys().copied().collect();
    let limits = (!unlimited_reuse).then(|| counts.values().copied().collect());
    let mut remaining = target.to_vec();
    remaining.sort_unstable_by(|a, b| b.cmp(a));
    let mut search = CoverSearch {
        options: &options,
        limits,
        failed: HashSet::new(),
    };
    search.run(remaining.clone())?;
    let total: usize = remaining.iter().sum();
    let steps: Vec<(CoverStep, usize, Vec<usize>)> = (1..=total)
        .flat_map(|k| {
            options.iter().enumerate().map(move |(idx, &m)| {
                let step = CoverStep {
                    block_size: k,
                    multiplicity: m,
                };
                (step, idx, split_pattern(k, m).parts)
            })
        })
        .collect();
    let least = search.least(&steps, remaining, 0, &mut HashSet::new());
    debug_assert!(least.is_some());
    least
}

/// How the preimage root used for a block is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PreimageDescriptor {
    /// An explicit root in Q(i).
    Root(Q),
    /// A root with the required multiplicity exists but lies outside Q(i).
    NotInQi,
    /// Existence is guaranteed by the function family; no explicit root.
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverEntry {
    pub eigenvalue: Q,
    pub preimage: PreimageDescriptor,
    #[serde(rename = "K")]
    pub block_size: usize,
    #[serde(rename = "m")]
    pub multiplicity: usize,
    pub parts: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockingReason {
    OmittedEigenvalue,
    UncoverablePartition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Blocking {
    pub value: Q,
    pub reason: BlockingReason,
    pub partition: Vec<usize>,
}

/// Outcome of [`decide_range`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeVerdict {
    pub solvable: bool,
    #[serde(rename = "case")]
    pub theorem_case: TheoremCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocking: Option<Blocking>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_plan: Option<Vec<CoverEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MatrixQi>,
}

/// Canonical-least root of `f - value` in Q(i) with the given multiplicity.
fn root_with_multiplicity(roots: &[RootWithMultiplicity], m: usize) -> PreimageDescriptor {
    roots
        .iter()
        .find(|r| r.multiplicity == m)
        .map_or(PreimageDescriptor::NotInQi, |r| {
            PreimageDescriptor::Root(r.root.clone())
        })
}

/// Q(i) preimages of `value` for functions whose preimages are finite.
fn explicit_preimages(f: &EntireFunction, value: &Q) -> Result<Option<Vec<RootWithMultiplicity>>> {
    Ok(match f {
        EntireFunction::Polynomial(p) => Some(gaussian_rational_roots(
            &(p - &Poly::constant(value.clone())),
        )?),
        EntireFunction::ExpPolyFamily { v, p, .. } if v == value && !p.is_constant() => {
            Some(gaussian_rational_roots(p)?)
        }
        _ => None,
    })
}

fn plan_entries(
    f: &EntireFunction,
    eigenvalue: &Q,
    steps: &[CoverStep],
) -> Result<Vec<CoverEntry>> {
    let roots = explicit_preimages(f, eigenvalue)?;
    Ok(steps
        .iter()
        .map(|s| CoverEntry {
            eigenvalue: eigenvalue.clone(),
            preimage: roots.as_deref().map_or(PreimageDescriptor::Exists, |r| {
                root_with_multiplicity(r, s.multiplicity)
            }),
            block_size: s.block_size,
            multiplicity: s.multiplicity,
            parts: split_pattern(s.block_size, s.multiplicity).parts,
        })
        .collect())
}

fn cover_trv(entry: &TrvEntry, parts: &[usize]) -> Option<Vec<CoverStep>> {
    coverable(parts, &entry.available(), false, true)
}

/// Decides whether `f(X) = A` has a solution `X ∈ M_n(C)`.
///
/// Only the Jordan structure of `A` at the function's finitely many special
/// values is inspected, so the verdict does not need the full spectrum of
/// `A` to lie in Q(i). The cover plan additionally lists simple-preimage
/// blocks for the remaining eigenvalues that do lie in Q(i).
pub fn decide_range(f: &EntireFunction, a: &MatrixQi) -> Result<RangeVerdict> {
    let profile = validate(f)?;
    let unsolvable = |blocking: Blocking| RangeVerdict {
        solvable: false,
        theorem_case: profile.theorem_case,
        blocking: Some(blocking),
        cover_plan: None,
        witness: None,
    };

    if a.n() == 1 {
        let mu = &a[(0, 0)];
        if profile.omitted_values.contains(mu) {
            return Ok(unsolvable(Blocking {
                value: mu.clone(),
                reason: BlockingReason::OmittedEigenvalue,
                partition: vec![1],
            }));
        }
        let m = profile.trv(mu).map_or(1, |e| e.available()[0]);
        let step = CoverStep {
            block_size: 1,
            multiplicity: m,
        };
        return Ok(RangeVerdict {
            solvable: true,
            theorem_case: profile.theorem_case,
            blocking: None,
            cover_plan: Some(plan_entries(f, mu, &[step])?),
            witness: None,
        });
    }

    for v in &profile.omitted_values {
        if is_in_e(a, v) {
            return Ok(unsolvable(Blocking {
                value: v.clone(),
                reason: BlockingReason::OmittedEigenvalue,
                partition: segre_at(a, v).parts,
            }));
        }
    }

    let mut plan = Vec::new();
    for entry in &profile.trv_entries {
        let seg = segre_at(a, &entry.value);
        if seg.parts.is_empty() {
            continue;
        }
        match cover_trv(entry, &seg.parts) {
            Some(steps) => plan.extend(plan_entries(f, &entry.value, &steps)?),
            None => {
                return Ok(unsolvable(Blocking {
                    value: entry.value.clone(),
                    reason: BlockingReason::UncoverablePartition,
                    partition: seg.parts,
                }))
            }
        }
    }

    for ev in gaussian_rational_roots(&char_poly(a))? {
        if profile.trv(&ev.root).is_some() {
            continue;
        }
        let steps: Vec<CoverStep> = segre_at(a, &ev.root)
            .parts
            .into_iter()
            .map(|p| CoverStep {
                block_size: p,
                multiplicity: 1,
            })
            .collect();
        plan.extend(plan_entries(f, &ev.root, &steps)?);
    }
    plan.sort_by(|x, y| {
        (&x.eigenvalue, x.block_size, x.multiplicity).cmp(&(
            &y.eigenvalue,
            y.block_size,
            y.multiplicity,
        ))
    });

    Ok(RangeVerdict {
        solvable: true,
        theorem_case: profile.theorem_case,
        blocking: None,
        cover_plan: Some(plan),
        witness: None,
    })
}

/// Builds `X` with `f(X) = A` exactly, for polynomial `f`.
///
/// Fails with [`Error::WitnessUnavailable`] when a solution exists but not
/// over Q(i) by this construction (spectrum of `A` or the needed preimage
/// roots outside Q(i)); any exact-verification failure is reported as
/// [`Error::Internal`].
pub fn build_witness(f: &EntireFunction, a: &MatrixQi, verdict: &RangeVerdict) -> Result<MatrixQi> {
    let EntireFunction::Polynomial(p) = f else {
        return Err(Error::WitnessUnavailable(
            "explicit witnesses are only constructed for polynomial functions".into(),
        ));
    };
    if !verdict.solvable {
        return Err(Error::WitnessUnavailable("f(X) = A has no solution".into()));
    }
    let x = if p.degree() == Some(1) {
        // f(z) = αz + β has the unique solution (A - βI)/α.
        let alpha_inv = p.coeff(1).inv()?;
        a.shift(&p.coeff(0)).scale(&alpha_inv)
    } else if a.n() == 1 {
        let mu = &a[(0, 0)];
        let roots = gaussian_rational_roots(&(p - &Poly::constant(mu.clone())))?;
        let root = roots.first().ok_or_else(|| {
            Error::WitnessUnavailable(format!("preimage root of {mu} outside Q(i)"))
        })?;
        MatrixQi::scalar(1, root.root.clone())
    } else {
        witness_by_jordan_forms(p, a)?
    };
    if &apply_poly(p, &x) != a {
        return Err(Error::Internal("witness failed exact verification".into()));
    }
    Ok(x)
}

fn witness_by_jordan_forms(p: &Poly, a: &MatrixQi) -> Result<MatrixQi> {
    let jd_a = jordan_decomposition(a).map_err(|e| match e {
        Error::SpectrumNotInQi { remaining_degrees } => Error::WitnessUnavailable(format!(
            "spectrum of A not in Q(i): factors of degree {remaining_degrees:?} remain"
        )),
        other => other,
    })?;

    let mut by_eigenvalue: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for (lambda, k) in &jd_a.blocks {
        by_eigenvalue.entry(lambda.clone()).or_default().push(*k);
    }

    let mut source_blocks = Vec::new();
    for (mu, parts) in &by_eigenvalue {
        let roots = gaussian_rational_roots(&(p - &Poly::constant(mu.clone())))?;
        // canonical-least root per available multiplicity
        let mut root_for: BTreeMap<usize, Q> = BTreeMap::new();
        for r in &roots {
            root_for
                .entry(r.multiplicity)
                .or_insert_with(|| r.root.clone());
        }
        let multiple: Vec<usize> = root_for.keys().copied().filter(|&m| m >= 2).collect();
        let steps =
            coverable(parts, &multiple, root_for.contains_key(&1), true).ok_or_else(|| {
                Error::WitnessUnavailable(format!(
                    "Jordan structure {parts:?} at {mu} needs preimage roots outside Q(i)"
                ))
            })?;
        for s in steps {
            source_blocks.push(MatrixQi::jordan_block(
                s.block_size,
                &root_for[&s.multiplicity],
            ));
        }
    }

    let y = MatrixQi::block_diagonal(&source_blocks);
    let fy = apply_poly(p, &y);
    let jd_f = jordan_decomposition(&fy)?;
    if jd_f.j != jd_a.j {
        return Err(Error::Internal(
            "Jordan form of f(Y) differs from Jordan form of A".into(),
        ));
    }
    // A = T J T⁻¹ and f(Y) = S J S⁻¹, so X = (T S⁻¹) Y (T S⁻¹)⁻¹.
    let w = &jd_a.t * &jd_f.t.inverse()?;
    Ok(&(&w * &y) * &w.inverse()?)
}

/// Uncoverable nontrivial Jordan structures at one totally ramified value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UncoverableAt {
    pub value: Q,
    pub partitions: Vec<Vec<usize>>,
}

/// Explicit description of the complement of the range in dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeDescription {
    #[serde(rename = "case")]
    pub theorem_case: TheoremCase,
    pub n: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub omitted_values: Vec<Q>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub uncoverable: Vec<UncoverableAt>,
}

/// All partitions of `total` as non-increasing part lists, in reverse
/// lexicographic order (`[3]`, `[2, 1]`, `[1, 1, 1]`).
pub fn partitions(total: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

/// For each totally ramified value, the Jordan structures of total size at
/// most `n` with a nontrivial block that `f` cannot produce: an explicit
/// listing of `S^f_a` restricted to dimension `n`.
pub fn describe_range(f: &EntireFunction, n: usize) -> Result<RangeDescription> {
    let profile = validate(f)?;
    let uncoverable = profile
        .trv_entries
        .iter()
        .map(|entry| UncoverableAt {
            value: entry.value.clone(),
            partitions: (1..=n)
                .flat_map(partitions)
                .filter(|part| part[0] >= 2 && cover_trv(entry, part).is_none())
                .collect(),
        })
        .collect();
    Ok(RangeDescription {
        theorem_case: profile.theorem_case,
        n,
        omitted_values: profile.omitted_values,
        uncoverable,
    })
}
