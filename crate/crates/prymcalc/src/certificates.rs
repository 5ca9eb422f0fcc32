//! Effectivity and bigness decompositions of a target class.
//!
//! A decomposition writes `target = ε·ψ + Σ cⱼ·Dⱼ + R` with `cⱼ ≥ 0`,
//! effective `Dⱼ` and a residual `R` that is a nonnegative combination of
//! boundary generators. `ε > 0` gives bigness because ψ is big and nef.

use std::cmp::Ordering;
use std::fmt;


use crate::bound::CoeffBound;
use crate::catalog::Catalog;
use crate::class::DivisorClass;
use crate::error::{Error, Result};
use crate::linalg::{self, Affine, Solve};
use crate::morphisms::PullbackMap;
use crate::scalar::Scalar;
use crate::space::{GeneratorId, SpaceId};

/// A class entering a decomposition, with the label it is reported under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Source<T> {
    pub label: String,
    pub class: DivisorClass<T>,
}

impl<T: Scalar> Source<T> {
    pub fn new(label: impl Into<String>, class: DivisorClass<T>) -> Self {
        Source { label: label.into(), class }
    }
}

/// Resolves `entry@map`: the catalog entry (unknown coefficients read as
/// `AtLeast(0)`) pulled back along the named map, then scaled to its
/// primitive multiple unless the entry fixes its scale.
pub fn resolve_term<T: Scalar>(catalog: &Catalog<T>, spec: &str) -> Result<Source<T>> {
    let (name, map) = spec
        .split_once('@')
        .ok_or_else(|| Error::Parameter(format!("term '{spec}' is not of the form entry@map")))?;
    let entry = catalog.entry(name.trim())?;
    let map = PullbackMap::by_name(map.trim())?;
    let pulled = map.apply(&entry.bounded_class()).map_err(|e| match e {
        Error::OutOfDomain { map, gen, detail } => {
            Error::OutOfDomain { map, gen: format!("{gen} (from catalog entry {})", entry.name), detail }
        }
        other => other,
    })?;
    let class = if entry.fixed_scale { pulled } else { pulled.primitive().1 };
    Ok(Source::new(spec.trim(), class))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<T> {
    pub source: Source<T>,
    pub coeff: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    BigWitness,
    EffectiveWitness,
    Inconclusive(Vec<String>),
    Infeasible(String),
}

impl Verdict {
    pub fn is_witness(&self) -> bool {
        matches!(self, Verdict::BigWitness | Verdict::EffectiveWitness)
    }

    fn strength(&self) -> u8 {
        match self {
            Verdict::BigWitness => 3,
            Verdict::EffectiveWitness => 2,
            Verdict::Inconclusive(_) => 1,
            Verdict::Infeasible(_) => 0,
        }
    }

    /// Whether `self` is at least as strong as `other`.
    pub fn at_least(&self, other: &Verdict) -> bool {
        self.strength() >= other.strength()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::BigWitness => f.write_str("BigWitness"),
            Verdict::EffectiveWitness => f.write_str("EffectiveWitness"),
            Verdict::Inconclusive(g) => write!(f, "Inconclusive({})", g.join(", ")),
            Verdict::Infeasible(why) => write!(f, "Infeasible({why})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    /// λ and ψ terms must cancel exactly.
    Zero,
    /// Boundary terms must be provably nonnegative.
    NonNegative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignStatus {
    Zero,
    Certified,
    Failing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignEntry<T> {
    pub gen: GeneratorId,
    pub requirement: Requirement,
    pub residual: CoeffBound<T>,
    pub status: SignStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<T> {
    pub target: DivisorClass<T>,
    pub terms: Vec<Term<T>>,
    pub epsilon: T,
    /// `Σ cⱼ·Dⱼ`.
    pub combination: DivisorClass<T>,
    pub residual: DivisorClass<T>,
    pub ledger: Vec<SignEntry<T>>,
    pub verdict: Verdict,
}

impl<T: Scalar> Certificate<T> {
    pub fn failing(&self) -> Vec<&GeneratorId> {
        self.ledger.iter().filter(|e| e.status == SignStatus::Failing).map(|e| &e.gen).collect()
    }

    pub fn entry(&self, gen: &GeneratorId) -> Option<&SignEntry<T>> {
        let key = self.target.space().canonicalize(gen).ok()?;
        self.ledger.iter().find(|e| e.gen == key)
    }
}

/// The sum of the ψ generators of `space`.
pub fn psi_class<T: Scalar>(space: SpaceId) -> Result<DivisorClass<T>> {
    DivisorClass::from_terms(space, space.psi_generators().into_iter().map(|g| (g, T::one())))
}

fn check_space<T: Scalar>(target: &DivisorClass<T>, cls: &DivisorClass<T>) -> Result<()> {
    if target.space() != cls.space() {
        return Err(Error::SpaceMismatch { left: target.space().to_string(), right: cls.space().to_string() });
    }
    Ok(())
}

fn epsilon_psi<T: Scalar>(space: SpaceId, eps: &T) -> Result<DivisorClass<T>> {
    let psi = psi_class::<T>(space)?;
    if psi.is_zero() && !eps.is_zero() {
        return Err(Error::Parameter(format!("{space} has no ψ class to carry ε")));
    }
    Ok(psi.scale(eps))
}

pub fn verify_combination<T: Scalar>(target: &DivisorClass<T>, terms: &[Term<T>], eps: &T) -> Result<Certificate<T>> {
    if eps.is_negative() {
        return Err(Error::NegativeCoefficient(format!("ε = {eps}")));
    }
    let space = target.space();
    let mut combination = DivisorClass::zero(space);
    for t in terms {
        check_space(target, &t.source.class)?;
        if t.coeff.is_negative() {
            return Err(Error::NegativeCoefficient(format!("{} for {}", t.coeff, t.source.label)));
        }
        combination = combination.add_scaled(&t.coeff, &t.source.class)?;
    }
    let residual = target.sub(&epsilon_psi(space, eps)?)?.sub(&combination)?;

    let mut gens: Vec<GeneratorId> = target.support().cloned().collect();
    for t in terms {
        gens.extend(t.source.class.support().cloned());
    }
    gens.sort();
    gens.dedup();
    let ledger: Vec<SignEntry<T>> = gens
        .into_iter()
        .map(|gen| {
            let r = residual.coeff(&gen);
            let (requirement, status) = if gen.is_boundary() {
                let s = if r.is_zero() {
                    SignStatus::Zero
                } else if r.provably_nonnegative() {
                    SignStatus::Certified
                } else {
                    SignStatus::Failing
                };
                (Requirement::NonNegative, s)
            } else {
                (Requirement::Zero, if r.is_zero() { SignStatus::Zero } else { SignStatus::Failing })
            };
            SignEntry { gen, requirement, residual: r, status }
        })
        .collect();
    let failing: Vec<String> =
        ledger.iter().filter(|e| e.status == SignStatus::Failing).map(|e| e.gen.to_string()).collect();
    let verdict = if !failing.is_empty() {
        Verdict::Inconclusive(failing)
    } else if eps.is_positive() {
        Verdict::BigWitness
    } else {
        Verdict::EffectiveWitness
    };
    Ok(Certificate { target: target.clone(), terms: terms.to_vec(), epsilon: eps.clone(), combination, residual, ledger, verdict })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution<T> {
    /// Coefficients as functions of ε.
    Unique(Vec<Affine<T>>),
    /// The pinned system is solvable at ε = 0 only.
    ZeroEpsilonOnly(Vec<T>),
    /// Row multipliers over the pinned generators combining the equations
    /// into `0 = nonzero`.
    Infeasible { reason: String, multipliers: Vec<(GeneratorId, T)> },
}

impl<T: Scalar> Solution<T> {
    pub fn coefficients(&self) -> Option<Vec<Affine<T>>> {
        match self {
            Solution::Unique(c) => Some(c.clone()),
            Solution::ZeroEpsilonOnly(c) => Some(c.iter().cloned().map(Affine::constant).collect()),
            Solution::Infeasible { .. } => None,
        }
    }

    pub fn at(&self, eps: &T) -> Option<Vec<T>> {
        Some(self.coefficients()?.iter().map(|c| c.eval(eps)).collect())
    }
}

fn pinned_exact<T: Scalar>(cls: &DivisorClass<T>, gen: &GeneratorId, who: &str) -> Result<T> {
    match cls.coeff(gen) {
        CoeffBound::Exact(v) => Ok(v),
        _ => Err(Error::Inexact { gen: gen.to_string(), context: format!("pinned generator in {who}") }),
    }
}

/// Matches `target − ε·ψ` exactly on the pinned generators with a linear
/// combination of `sources`, treating ε as a formal parameter when
/// `symbolic` is set.
pub fn solve_coefficients<T: Scalar>(
    target: &DivisorClass<T>,
    sources: &[Source<T>],
    pinned: &[GeneratorId],
    symbolic: bool,
) -> Result<Solution<T>> {
    let space = target.space();
    let pinned: Vec<GeneratorId> = pinned.iter().map(|g| space.canonicalize(g)).collect::<Result<_>>()?;
    for s in sources {
        check_space(target, &s.class)?;
    }
    let psi = psi_class::<T>(space)?;
    let mut a = Vec::new();
    let mut b0 = Vec::new();
    let mut b1 = Vec::new();
    for g in &pinned {
        let row = sources.iter().map(|s| pinned_exact(&s.class, g, &s.label)).collect::<Result<Vec<_>>>()?;
        a.push(row);
        b0.push(pinned_exact(target, g, "target")?);
        b1.push(if symbolic { -psi.exact(g).unwrap_or_else(T::zero) } else { T::zero() });
    }
    let named = |y: Vec<T>| pinned.iter().cloned().zip(y).filter(|(_, v)| !v.is_zero()).collect();
    match linalg::solve(&a, &[b0.clone(), b1])? {
        Solve::Unique(x) => {
            Ok(Solution::Unique(x[0].iter().zip(&x[1]).map(|(c, s)| Affine::new(c.clone(), s.clone())).collect()))
        }
        Solve::Inconsistent { rhs: 0, multipliers } => Ok(Solution::Infeasible {
            reason: "pinned equations are contradictory".into(),
            multipliers: named(multipliers),
        }),
        Solve::Inconsistent { .. } => match linalg::solve(&a, &[b0])? {
            Solve::Unique(x) => Ok(Solution::ZeroEpsilonOnly(x[0].clone())),
            Solve::Inconsistent { multipliers, .. } => Ok(Solution::Infeasible {
                reason: "pinned equations are contradictory".into(),
                multipliers: named(multipliers),
            }),
        },
    }
}

/// `Σ cⱼ(ε)·coeff(Dⱼ, gen)` when every contributing coefficient is exact.
pub fn combination_coefficient<T: Scalar>(sources: &[Source<T>], coeffs: &[Affine<T>], gen: &GeneratorId) -> Option<Affine<T>> {
    let mut acc = Affine::zero();
    for (s, c) in sources.iter().zip(coeffs) {
        match s.class.coeff(gen) {
            CoeffBound::Exact(v) => acc = acc + c.scale(&v),
            _ if c.is_zero() => {}
            _ => return None,
        }
    }
    Some(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    Zero,
    NonNegative,
}

/// One condition on ε. `value` is a certified lower bound for the
/// quantity (exact for `Zero` constraints); `None` means no lower bound is
/// available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint<T> {
    pub label: String,
    pub kind: ConstraintKind,
    pub value: Option<Affine<T>>,
}

/// The closed set of ε ≥ 0 satisfying one constraint: `None` if empty,
/// otherwise `(lo, hi)` with `hi = None` for unbounded.
type Interval<T> = Option<(T, Option<T>)>;

impl<T: Scalar> Constraint<T> {
    fn interval(&self) -> Interval<T> {
        let v = self.value.as_ref()?;
        let zero = T::zero();
        match self.kind {
            ConstraintKind::Zero => match v.root() {
                None if v.constant.is_zero() => Some((zero, None)),
                None => None,
                Some(r) if r.is_negative() => None,
                Some(r) => Some((r.clone(), Some(r))),
            },
            ConstraintKind::NonNegative => match v.slope.cmp(&zero) {
                Ordering::Equal if v.constant.is_negative() => None,
                Ordering::Equal => Some((zero, None)),
                Ordering::Greater => Some((v.root().unwrap().max(zero), None)),
                Ordering::Less => {
                    let r = v.root().unwrap();
                    if r.is_negative() {
                        None
                    } else {
                        Some((zero, Some(r)))
                    }
                }
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigReport<T> {
    pub sources: Vec<Source<T>>,
    pub pinned: Vec<GeneratorId>,
    pub solution: Solution<T>,
    pub constraints: Vec<Constraint<T>>,
    /// Largest ε for which every constraint holds (`None` if unbounded or
    /// no ε works).
    pub epsilon0: Option<T>,
    /// Constraints that cap ε at `epsilon0` or rule out every ε.
    pub blocking: Vec<String>,
    pub certificate: Option<Certificate<T>>,
    pub verdict: Verdict,
}

fn residual_lower<T: Scalar>(
    target: &DivisorClass<T>,
    psi: &DivisorClass<T>,
    sources: &[Source<T>],
    coeffs: &[Affine<T>],
    gen: &GeneratorId,
    exact_only: bool,
) -> Option<Affine<T>> {
    let t = target.coeff(gen);
    let mut acc = Affine::new(if exact_only { t.exact()?.clone() } else { t.lower()? }, -psi.exact(gen).unwrap_or_else(T::zero));
    for (s, c) in sources.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        match s.class.coeff(gen) {
            CoeffBound::Exact(v) => acc = acc - c.scale(&v),
            // coefficient ≤ −m and cⱼ ≥ 0, so −cⱼ·coefficient ≥ cⱼ·m
            CoeffBound::AtLeast(m) if !exact_only => acc = acc + c.scale(&m),
            _ => return None,
        }
    }
    Some(acc)
}

/// Solves for the coefficients with symbolic ε, collects every sign
/// condition as an affine constraint and picks an exact ε inside the
/// feasible range, then re-verifies the decomposition at that ε.
pub fn bigness_certificate<T: Scalar>(
    target: &DivisorClass<T>,
    sources: &[Source<T>],
    pinned: &[GeneratorId],
) -> Result<BigReport<T>> {
    let space = target.space();
    let solution = solve_coefficients(target, sources, pinned, true)?;
    let pinned: Vec<GeneratorId> = pinned.iter().map(|g| space.canonicalize(g)).collect::<Result<_>>()?;
    let mut report = BigReport {
        sources: sources.to_vec(),
        pinned,
        solution: solution.clone(),
        constraints: Vec::new(),
        epsilon0: None,
        blocking: Vec::new(),
        certificate: None,
        verdict: Verdict::Infeasible(String::new()),
    };
    let coeffs = match &solution {
        Solution::Infeasible { reason, .. } => {
            report.verdict = Verdict::Infeasible(reason.clone());
            return Ok(report);
        }
        Solution::Unique(c) => c.clone(),
        Solution::ZeroEpsilonOnly(c) => c.iter().cloned().map(Affine::constant).collect(),
    };
    let psi = psi_class::<T>(space)?;
    let mut constraints: Vec<Constraint<T>> = sources
        .iter()
        .zip(&coeffs)
        .map(|(s, c)| Constraint { label: format!("coefficient of {}", s.label), kind: ConstraintKind::NonNegative, value: Some(c.clone()) })
        .collect();
    if matches!(solution, Solution::ZeroEpsilonOnly(_)) {
        constraints.push(Constraint {
            label: "pinned equations at ε > 0".into(),
            kind: ConstraintKind::Zero,
            value: Some(Affine::epsilon()),
        });
    }
    let mut gens: Vec<GeneratorId> = target.support().cloned().chain(psi.support().cloned()).collect();
    for s in sources {
        gens.extend(s.class.support().cloned());
    }
    gens.sort();
    gens.dedup();
    for gen in gens {
        let (kind, value) = if gen.is_boundary() {
            (ConstraintKind::NonNegative, residual_lower(target, &psi, sources, &coeffs, &gen, false))
        } else {
            (ConstraintKind::Zero, residual_lower(target, &psi, sources, &coeffs, &gen, true))
        };
        constraints.push(Constraint { label: gen.to_string(), kind, value });
    }

    let intervals: Vec<Interval<T>> = constraints.iter().map(Constraint::interval).collect();
    let empty: Vec<String> =
        constraints.iter().zip(&intervals).filter(|(_, i)| i.is_none()).map(|(c, _)| c.label.clone()).collect();
    report.constraints = constraints.clone();
    if !empty.is_empty() {
        report.blocking = empty.clone();
        report.verdict = Verdict::Inconclusive(empty);
        return Ok(report);
    }
    let bounds: Vec<(T, Option<T>)> = intervals.into_iter().flatten().collect();
    let lo = bounds.iter().map(|(l, _)| l.clone()).max().unwrap_or_else(T::zero);
    let hi = bounds.iter().filter_map(|(_, h)| h.clone()).min();
    let attaining = |pick: &dyn Fn(&(T, Option<T>)) -> bool| -> Vec<String> {
        constraints.iter().zip(&bounds).filter(|(_, b)| pick(b)).map(|(c, _)| c.label.clone()).collect()
    };
    if let Some(h) = &hi {
        if &lo > h {
            let mut blocking = attaining(&|b| b.0 == lo);
            blocking.extend(attaining(&|b| b.1.as_ref() == Some(h)));
            report.blocking = blocking.clone();
            report.verdict = Verdict::Inconclusive(blocking);
            return Ok(report);
        }
        report.blocking = attaining(&|b| b.1.as_ref() == Some(h));
    }
    report.epsilon0 = hi.clone();
    let two = T::one() + T::one();
    let eps = match &hi {
        Some(h) => (lo.clone() + h.clone()) / two,
        None => lo.clone() + T::one(),
    };
    let terms: Vec<Term<T>> =
        sources.iter().zip(&coeffs).map(|(s, c)| Term { source: s.clone(), coeff: c.eval(&eps) }).collect();
    let cert = verify_combination(target, &terms, &eps)?;
    report.verdict = cert.verdict.clone();
    report.certificate = Some(cert);
    Ok(report)
}
