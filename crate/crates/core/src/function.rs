//! Entire functions: exact polynomials and two transcendental families with
//! known ramification data.
//!
//! Only the ramification data of a function matters to the range engine:
//! which value (if any) it omits, which values are totally ramified, and the
//! multiplicities with which those values are attained.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{
    critical_value_polynomial, multiplicity_multiset, squarefree_decomposition, Poly,
};
use crate::roots::{gaussian_rational_roots, RootWithMultiplicity};
use crate::scalar::GaussianRational as Q;

/// A non-constant entire function from the supported catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntireFunction {
    /// An exact polynomial of degree at least 1.
    Polynomial(Poly),
    /// `((a - b)/2)·sin(c z + d) + (a + b)/2` with `a ≠ b`, `c ≠ 0`.
    SinFamily { a: Q, b: Q, c: Q, d: Q },
    /// `v + P(z)·exp(c z + d)` with `P` monic and `c ≠ 0`.
    ExpPolyFamily { v: Q, p: Poly, c: Q, d: Q },
}

impl EntireFunction {
    pub fn polynomial(p: Poly) -> Result<Self> {
        match p.degree() {
            None | Some(0) => Err(Error::ConstantPolynomial),
            _ => Ok(EntireFunction::Polynomial(p)),
        }
    }

    pub fn sin_family(a: Q, b: Q, c: Q, d: Q) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidFunction("sin_family requires a ≠ b".into()));
        }
        if c.is_zero() {
            return Err(Error::InvalidFunction("sin_family requires c ≠ 0".into()));
        }
        Ok(EntireFunction::SinFamily { a, b, c, d })
    }

    pub fn exp_poly(v: Q, p: Poly, c: Q, d: Q) -> Result<Self> {
        if !p.is_monic() {
            return Err(Error::InvalidFunction("exp_poly requires a monic P".into()));
        }
        if c.is_zero() {
            return Err(Error::InvalidFunction("exp_poly requires c ≠ 0".into()));
        }
        Ok(EntireFunction::ExpPolyFamily { v, p, c, d })
    }

    pub fn as_polynomial(&self) -> Option<&Poly> {
        match self {
            EntireFunction::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// Re-checks the construction invariants (useful after deserialisation).
    fn check_construction(&self) -> Result<()> {
        match self {
            EntireFunction::Polynomial(p) => Self::polynomial(p.clone()).map(drop),
            EntireFunction::SinFamily { a, b, c, d } => {
                Self::sin_family(a.clone(), b.clone(), c.clone(), d.clone()).map(drop)
            }
            EntireFunction::ExpPolyFamily { v, p, c, d } => {
                Self::exp_poly(v.clone(), p.clone(), c.clone(), d.clone()).map(drop)
            }
        }
    }
}

/// Which part of the range classification applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremCase {
    /// Omits a value `a`: range is everything outside `E_a`.
    #[serde(rename = "I")]
    OmitsValue,
    /// Surjective, no totally ramified value: range is everything.
    #[serde(rename = "II")]
    NoTrv,
    /// One totally ramified value `a`: range misses `S^f_a`.
    #[serde(rename = "III")]
    OneTrv,
    /// Two totally ramified values: range misses `S^f_a ∪ S^f_b`.
    #[serde(rename = "IV")]
    TwoTrv,
}

impl TheoremCase {
    pub fn roman(self) -> &'static str {
        match self {
            TheoremCase::OmitsValue => "I",
            TheoremCase::NoTrv => "II",
            TheoremCase::OneTrv => "III",
            TheoremCase::TwoTrv => "IV",
        }
    }
}

/// A totally ramified value with the multiplicities of its preimages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrvEntry {
    pub value: Q,
    /// Root multiplicities of `f - value`, all at least 2. For families with
    /// infinitely many preimages this lists each multiplicity that occurs once.
    pub multiplicities: Vec<usize>,
    pub infinitely_many_preimages: bool,
}

impl TrvEntry {
    /// Distinct available multiplicities, ascending.
    pub fn available(&self) -> Vec<usize> {
        let mut m = self.multiplicities.clone();
        m.sort_unstable();
        m.dedup();
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    pub omitted_values: Vec<Q>,
    pub trv_entries: Vec<TrvEntry>,
    pub theorem_case: TheoremCase,
}

impl RamificationProfile {
    fn new(omitted_values: Vec<Q>, trv_entries: Vec<TrvEntry>) -> Self {
        let theorem_case = if !omitted_values.is_empty() {
            TheoremCase::OmitsValue
        } else {
            match trv_entries.len() {
                0 => TheoremCase::NoTrv,
                1 => TheoremCase::OneTrv,
                _ => TheoremCase::TwoTrv,
            }
        };
        RamificationProfile {
            omitted_values,
            trv_entries,
            theorem_case,
        }
    }

    pub fn trv(&self, value: &Q) -> Option<&TrvEntry> {
        self.trv_entries.iter().find(|e| &e.value == value)
    }

    fn check_invariants(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Internal(m.to_string()));
        if self.omitted_values.len() > 1 {
            return fail("more than one omitted value");
        }
        if self.trv_entries.len() > 2 {
            return fail("more than two totally ramified values");
        }
        if !self.omitted_values.is_empty() && !self.trv_entries.is_empty() {
            return fail("a function omitting a value has a totally ramified value");
        }
        if self
            .trv_entries
            .iter()
            .any(|e| e.multiplicities.is_empty() || e.multiplicities.iter().any(|&m| m < 2))
        {
            return fail("totally ramified value with a simple preimage");
        }
        Ok(())
    }
}

/// Whether every root of `p - value` is multiple, i.e. `s² | (p - value)`
/// for the square-free part `s`.
fn all_roots_multiple(p: &Poly, value: &Q) -> Result<Option<Vec<usize>>> {
    let shifted = p - &Poly::constant(value.clone());
    let decomposition = squarefree_decomposition(&shifted)?;
    let s = decomposition
        .iter()
        .fold(Poly::constant(Q::one()), |acc, (f, _)| &acc * f);
    if shifted.exact_divide(&(&s * &s)).is_err() {
        return Ok(None);
    }
    multiplicity_multiset(&shifted).map(Some)
}

/// Totally ramified values of a polynomial.
///
/// A TRV `a` is a root of `D(a) = Res_z(P - a, P')` of multiplicity
/// `deg P - #{distinct roots of P - a} ≥ ⌈deg P / 2⌉`, and at most one root of
/// `D` can reach that multiplicity. The candidates are therefore the Q(i)
/// roots of the square-free factor(s) of `D` at that multiplicity or above,
/// which are linear whenever they exist.
fn polynomial_trvs(p: &Poly) -> Result<Vec<TrvEntry>> {
    let deg = p.degree().unwrap_or(0);
    if deg < 2 {
        return Ok(Vec::new());
    }
    let threshold = deg.div_ceil(2);
    let d = critical_value_polynomial(p)?;
    let mut out = Vec::new();
    for (factor, mult) in squarefree_decomposition(&d)? {
        if mult < threshold {
            continue;
        }
        for cand in gaussian_rational_roots(&factor)? {
            if let Some(multiplicities) = all_roots_multiple(p, &cand.root)? {
                out.push(TrvEntry {
                    value: cand.root,
                    multiplicities,
                    infinitely_many_preimages: false,
                });
            }
        }
    }
    if out.len() > 1 {
        return Err(Error::Internal(format!(
            "polynomial with {} totally ramified values",
            out.len()
        )));
    }
    Ok(out)
}

/// Omitted values, totally ramified values and the resulting case.
pub fn ramification_profile(f: &EntireFunction) -> Result<RamificationProfile> {
    Ok(match f {
        EntireFunction::Polynomial(p) => RamificationProfile::new(Vec::new(), polynomial_trvs(p)?),
        EntireFunction::SinFamily { a, b, .. } => {
            // Critical points satisfy sin(cz + d) = ±1, where the second
            // derivative is nonzero: every ramified preimage is a double root.
            let entry = |value: &Q| TrvEntry {
                value: value.clone(),
                multiplicities: vec![2],
                infinitely_many_preimages: true,
            };
            let mut entries = vec![entry(a), entry(b)];
            entries.sort_by(|x, y| x.value.cmp(&y.value));
            RamificationProfile::new(Vec::new(), entries)
        }
        EntireFunction::ExpPolyFamily { v, p, .. } => {
            if p.is_constant() {
                RamificationProfile::new(vec![v.clone()], Vec::new())
            } else {
                let multiplicities = multiplicity_multiset(p)?;
                let entries = if multiplicities.iter().all(|&m| m >= 2) {
                    vec![TrvEntry {
                        value: v.clone(),
                        multiplicities,
                        infinitely_many_preimages: false,
                    }]
                } else {
                    Vec::new()
                };
                RamificationProfile::new(Vec::new(), entries)
            }
        }
    })
}

/// Preimage structure of a single value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreimageRoots {
    Finite {
        /// Preimages lying in Q(i).
        roots: Vec<RootWithMultiplicity>,
        /// True when every preimage lies in Q(i).
        complete: bool,
        /// Multiplicities of all preimages (over C), ascending.
        multiplicities: Vec<usize>,
    },
    InfinitelyManySimple,
    InfinitelyManyAllMultiplicity2,
    Empty,
}

pub fn preimage_roots(f: &EntireFunction, value: &Q) -> Result<PreimageRoots> {
    let finite = |p: &Poly| -> Result<PreimageRoots> {
        let roots = gaussian_rational_roots(p)?;
        let multiplicities = multiplicity_multiset(p)?;
        Ok(PreimageRoots::Finite {
            complete: roots.len() == multiplicities.len(),
            roots,
            multiplicities,
        })
    };
    match f {
        EntireFunction::Polynomial(p) => finite(&(p - &Poly::constant(value.clone()))),
        EntireFunction::SinFamily { a, b, .. } => Ok(if value == a || value == b {
            PreimageRoots::InfinitelyManyAllMultiplicity2
        } else {
            PreimageRoots::InfinitelyManySimple
        }),
        EntireFunction::ExpPolyFamily { v, p, .. } => {
            if value != v {
                Ok(PreimageRoots::InfinitelyManySimple)
            } else if p.is_constant() {
                Ok(PreimageRoots::Empty)
            } else {
                finite(p)
            }
        }
    }
}

/// Rejects constant or malformed functions and re-checks the profile's
/// structural invariants.
pub fn validate(f: &EntireFunction) -> Result<RamificationProfile> {
    f.check_construction()?;
    let profile = ramification_profile(f)?;
    profile.check_invariants()?;
    if matches!(f, EntireFunction::Polynomial(_)) && profile.trv_entries.len() > 1 {
        return Err(Error::Internal(
            "polynomial with two totally ramified values".into(),
        ));
    }
    Ok(profile)
}
