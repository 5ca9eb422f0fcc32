//! Sparse divisor classes.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bound::CoeffBound;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{GeneratorId, SpaceId};

/// A finite combination of generators of one space. Keys are always
/// canonical and no key maps to an exact zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass<T> {
    space: SpaceId,
    coeffs: BTreeMap<GeneratorId, CoeffBound<T>>,
}

impl<T: Scalar> DivisorClass<T> {
    pub fn zero(space: SpaceId) -> Self {
        DivisorClass { space, coeffs: BTreeMap::new() }
    }

    /// The class of a single generator.
    pub fn generator(space: SpaceId, gen: &GeneratorId) -> Result<Self> {
        Self::from_terms(space, [(gen.clone(), T::one())])
    }

    pub fn from_terms<I>(space: SpaceId, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GeneratorId, T)>,
    {
        Self::from_bounds(space, terms.into_iter().map(|(g, c)| (g, CoeffBound::Exact(c))))
    }

    pub fn from_bounds<I>(space: SpaceId, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GeneratorId, CoeffBound<T>)>,
    {
        let mut out = DivisorClass::zero(space);
        for (gen, b) in terms {
            out.add_bound(&gen, b)?;
        }
        Ok(out)
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    /// Adds `b` to the coefficient of `gen`, canonicalizing first.
    pub fn add_bound(&mut self, gen: &GeneratorId, b: CoeffBound<T>) -> Result<()> {
        let key = self.space.canonicalize(gen)?;
        self.add_canonical(key, b);
        Ok(())
    }

    pub fn add_exact(&mut self, gen: &GeneratorId, c: T) -> Result<()> {
        self.add_bound(gen, CoeffBound::Exact(c))
    }

    fn add_canonical(&mut self, key: GeneratorId, b: CoeffBound<T>) {
        if b.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&key) {
            Some(old) => old + b,
            None => b,
        };
        if !sum.is_zero() {
            self.coeffs.insert(key, sum);
        }
    }

    /// Coefficient of `gen`, which may be given in any representation.
    /// Generators foreign to the space read as zero.
    pub fn coeff(&self, gen: &GeneratorId) -> CoeffBound<T> {
        match self.space.canonicalize(gen) {
            Ok(key) => self.coeffs.get(&key).cloned().unwrap_or_else(CoeffBound::zero),
            Err(_) => CoeffBound::zero(),
        }
    }

    /// Exact coefficient of `gen`, or `None` if it is only bounded.
    pub fn exact(&self, gen: &GeneratorId) -> Option<T> {
        self.coeff(gen).exact().cloned()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GeneratorId, &CoeffBound<T>)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GeneratorId> {
        self.coeffs.keys()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.values().all(CoeffBound::is_exact)
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out = DivisorClass::zero(self.space);
        for (g, b) in &self.coeffs {
            out.add_canonical(g.clone(), b.scale(k));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch { left: self.space.to_string(), right: other.space.to_string() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (g, b) in &other.coeffs {
            out.add_canonical(g.clone(), b.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, k: &T, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (g, b) in &other.coeffs {
            out.add_canonical(g.clone(), b.scale(k));
        }
        Ok(out)
    }

    /// `Σ kᵢ·classᵢ`. All classes must live on `space`.
    pub fn linear_combine(space: SpaceId, terms: &[(T, &DivisorClass<T>)]) -> Result<Self> {
        let mut out = DivisorClass::zero(space);
        for (k, cls) in terms {
            out = out.add_scaled(k, cls)?;
        }
        Ok(out)
    }

    /// Keeps the terms whose generator satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(&GeneratorId) -> bool) -> Self {
        DivisorClass {
            space: self.space,
            coeffs: self.coeffs.iter().filter(|(g, _)| keep(g)).map(|(g, b)| (g.clone(), b.clone())).collect(),
        }
    }

    /// The non-boundary part (λ and ψ terms).
    pub fn interior(&self) -> Self {
        self.restrict(|g| !g.is_boundary())
    }

    /// The positive multiple whose exact coefficients are coprime integers,
    /// together with the multiplier. Bounds are scaled along. A class with
    /// no exact coefficient is returned unchanged.
    pub fn primitive(&self) -> (T, Self) {
        let exact: Vec<&T> = self.coeffs.values().filter_map(|b| b.exact()).collect();
        if exact.is_empty() {
            return (T::one(), self.clone());
        }
        let mut den = T::Int::one();
        let mut num = T::Int::zero();
        for v in &exact {
            den = den.lcm(&v.denom_int());
            num = num.gcd(&v.numer_int());
        }
        let k = T::from_int(den) / T::from_int(num.abs());
        (k.clone(), self.scale(&k))
    }

    /// Checks the storage invariants. Used by tests.
    pub fn check_invariants(&self) -> Result<()> {
        for (g, b) in &self.coeffs {
            let c = self.space.canonicalize(g)?;
            if &c != g {
                return Err(Error::InvalidGenerator { gen: format!("{g} (non-canonical)"), space: self.space.to_string() });
            }
            if b.is_zero() {
                return Err(Error::InvalidGenerator { gen: format!("{g} (stored zero)"), space: self.space.to_string() });
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Display for DivisorClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::grammar::format_class(self))
    }
}
