//! Classes of Prym-canonical divisorial strata on `PointedPrym(g, n)`.

use std::fmt;

use crate::class::DivisorClass;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{GeneratorId, MarkSet, SpaceId, MAX_MARKS};

/// A partition `d₁ + … + d_n = g − 1` into positive parts, one per marking.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    g: u32,
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(g: u32, parts: Vec<u32>) -> Result<Partition> {
        if parts.is_empty() {
            return Err(Error::Partition("at least one part is needed".into()));
        }
        if parts.len() > MAX_MARKS as usize {
            return Err(Error::Partition(format!("at most {MAX_MARKS} parts are supported")));
        }
        if let Some(p) = parts.iter().position(|&d| d == 0) {
            return Err(Error::Partition(format!("part {} is zero", p + 1)));
        }
        let sum: u64 = parts.iter().map(|&d| u64::from(d)).sum();
        if g == 0 || sum != u64::from(g) - 1 {
            return Err(Error::Partition(format!("parts sum to {sum}, expected g − 1 = {}", i64::from(g) - 1)));
        }
        Ok(Partition { g, parts })
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn n(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `d_S = Σ_{j∈S} d_j`.
    pub fn weight(&self, s: MarkSet) -> i64 {
        s.iter().map(|j| i64::from(self.parts[j as usize - 1])).sum()
    }

    pub fn space(&self) -> Result<SpaceId> {
        SpaceId::pointed_prym(self.g, self.n())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Split,
    Nonsplit,
}

/// `C(k, 2)` for any integer `k`, i.e. `k(k−1)/2`.
fn choose2<T: Scalar>(k: i64) -> T {
    T::ratio(k * (k - 1), 2)
}

/// The coefficient `b` with which `δ_{i,S}` (nonsplit) or `δ_{i,S:g−i}`
/// (split) is subtracted in the class of the stratum.
pub fn b_coefficient<T: Scalar>(kind: BoundaryKind, i: u32, s: MarkSet, d: &Partition) -> Result<T> {
    let g = d.g();
    let max = match kind {
        BoundaryKind::Split => g - 1,
        BoundaryKind::Nonsplit => g,
    };
    if i < 1 || i > max {
        return Err(Error::Parameter(format!("index i = {i} outside 1..={max}")));
    }
    if !s.within(d.n()) {
        return Err(Error::Parameter(format!("{s} is not a set of markings 1..{}", d.n())));
    }
    let (ds, i) = (d.weight(s), i64::from(i));
    Ok(match kind {
        BoundaryKind::Nonsplit if ds >= i - 1 => choose2(ds - i + 2),
        _ => choose2(ds - i + 1),
    })
}

/// `Σ_j (d_j(d_j+1)/2)·ψ_j − λ`.
pub fn pd_interior_class<T: Scalar>(d: &Partition) -> Result<DivisorClass<T>> {
    let mut terms = vec![(GeneratorId::Lambda, -T::one())];
    for (j, &dj) in d.parts().iter().enumerate() {
        terms.push((GeneratorId::Psi(j as u32 + 1), choose2(i64::from(dj) + 1)));
    }
    DivisorClass::from_terms(d.space()?, terms)
}

/// The full class: the interior part, `¼δ₀ram`, and every boundary
/// generator of the inventory with its `b` coefficient subtracted once.
/// `δ₀′` and `δ₀″` do not appear.
pub fn pd_class<T: Scalar>(d: &Partition) -> Result<DivisorClass<T>> {
    let space = d.space()?;
    let mut cls = pd_interior_class(d)?;
    cls.add_exact(&GeneratorId::Delta0Ram, T::ratio(1, 4))?;
    for gen in space.generators() {
        let b: T = match gen {
            GeneratorId::Delta { i, s } => b_coefficient(BoundaryKind::Nonsplit, i, s, d)?,
            GeneratorId::Split { i, s, .. } => b_coefficient(BoundaryKind::Split, i, s, d)?,
            _ => continue,
        };
        cls.add_exact(&gen, -b)?;
    }
    Ok(cls)
}

/// The same class assembled from the two binomial sums of the closed
/// formula, read literally: `C(d_S−i+2, 2)·δ_{i,S}` for `d_S ≥ i−1`,
/// `i < g`, and `C(i−d_S, 2)·(δ_{i,S:g−i} + δ_{i,S})` for `d_S ≤ i−1`,
/// `i ≤ g`. Terms outside the inventory, including `δ_{g,S:0}`, are dropped.
pub fn pd_class_from_sums<T: Scalar>(d: &Partition) -> Result<DivisorClass<T>> {
    let space = d.space()?;
    let (g, n) = (d.g(), d.n());
    let mut cls = pd_interior_class(d)?;
    cls.add_exact(&GeneratorId::Delta0Ram, T::ratio(1, 4))?;
    let mut sub = |gen: GeneratorId, c: T| -> Result<()> {
        if space.contains(&gen) {
            cls.add_exact(&gen, -c)?;
        }
        Ok(())
    };
    for s in MarkSet::all_subsets(n) {
        let ds = d.weight(s);
        for i in 1..=g {
            let ii = i64::from(i);
            if i < g && ds >= ii - 1 {
                sub(GeneratorId::Delta { i, s }, choose2(ds - ii + 2))?;
            }
            if ds < ii {
                let c: T = choose2(ii - ds);
                sub(GeneratorId::Delta { i, s }, c.clone())?;
                if i < g {
                    sub(GeneratorId::split(i, s, g), c)?;
                }
            }
        }
    }
    Ok(cls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_class;
    use crate::scalar::q;
    use crate::Rational;

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![2]).is_ok());
        assert!(Partition::new(3, vec![1, 0, 1]).is_err());
        assert!(Partition::new(4, vec![2]).is_err());
        assert!(Partition::new(1, vec![]).is_err());
    }

    #[test]
    fn b_examples() {
        let d = Partition::new(3, vec![2]).unwrap();
        let e = MarkSet::empty();
        assert_eq!(b_coefficient::<Rational>(BoundaryKind::Nonsplit, 3, e, &d).unwrap(), q(3, 1));
        assert_eq!(b_coefficient::<Rational>(BoundaryKind::Nonsplit, 1, e, &d).unwrap(), q(0, 1));
        assert_eq!(b_coefficient::<Rational>(BoundaryKind::Split, 1, e, &d).unwrap(), q(0, 1));
        assert!(b_coefficient::<Rational>(BoundaryKind::Split, 3, e, &d).is_err());
        assert!(b_coefficient::<Rational>(BoundaryKind::Nonsplit, 0, e, &d).is_err());
    }

    #[test]
    fn interior_examples() {
        let d = Partition::new(3, vec![1, 1]).unwrap();
        let c: DivisorClass<Rational> = pd_interior_class(&d).unwrap();
        assert_eq!(c, parse_class("psi[1] + psi[2] - lambda", d.space().unwrap()).unwrap());
    }

    #[test]
    fn full_class_genus_three() {
        let d = Partition::new(3, vec![2]).unwrap();
        let c: DivisorClass<Rational> = pd_class(&d).unwrap();
        let expected = parse_class(
            "-lambda + 3*psi[1] + 1/4*d0ram - 3*d{1,{1}} - d{2,{1}} - d{2,∅} - d{2,∅:1}",
            d.space().unwrap(),
        )
        .unwrap();
        assert_eq!(c, expected);
        assert_eq!(pd_class_from_sums::<Rational>(&d).unwrap(), c);
    }
}
