//! Intersection numbers of the two elliptic-pencil test curves and the
//! slope-10 criterion they give.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::bound::CoeffBound;
use crate::class::DivisorClass;
use crate::error::{Error, Result};
use crate::linalg::Affine;
use crate::morphisms::chi_star_g2;
use crate::scalar::Scalar;
use crate::space::{GeneratorId, MarkSet, SpaceId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    /// `A_{1:i}` on `PrymCurves(i+1)`.
    A1i,
    /// `A` on `BranchedPrym2(i)`.
    AEta,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::A1i => "A1i",
            CurveKind::AEta => "Aeta",
        })
    }
}

impl FromStr for CurveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<CurveKind> {
        match s {
            "A1i" | "A_1_i" => Ok(CurveKind::A1i),
            "Aeta" | "A_eta" => Ok(CurveKind::AEta),
            _ => Err(Error::Parameter(format!("unknown test curve '{s}' (A1i or Aeta)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestCurve<T> {
    pub kind: CurveKind,
    pub i: u32,
    pub space: SpaceId,
    /// Nonzero intersection numbers; every other generator meets the curve
    /// in degree 0.
    pub numbers: BTreeMap<GeneratorId, T>,
}

impl<T: Scalar> TestCurve<T> {
    pub fn number(&self, gen: &GeneratorId) -> T {
        self.space
            .canonicalize(gen)
            .ok()
            .and_then(|g| self.numbers.get(&g).cloned())
            .unwrap_or_else(T::zero)
    }
}

pub fn test_curve<T: Scalar>(kind: CurveKind, i: u32) -> Result<TestCurve<T>> {
    if i < 2 {
        return Err(Error::Parameter(format!("test curves need i ≥ 2, got {i}")));
    }
    let (space, special) = match kind {
        CurveKind::A1i => (SpaceId::prym_curves(i + 1)?, GeneratorId::split(1, MarkSet::empty(), i + 1)),
        CurveKind::AEta => (SpaceId::branched_prym2(i)?, GeneratorId::d_eta(i - 1)),
    };
    let mut numbers = BTreeMap::new();
    numbers.insert(GeneratorId::Lambda, T::from_i64(3));
    numbers.insert(GeneratorId::Delta0Prime, T::from_i64(12));
    numbers.insert(GeneratorId::Delta0Ram, T::from_i64(12));
    numbers.insert(space.canonicalize(&special)?, T::from_i64(-3));
    Ok(TestCurve { kind, i, space, numbers })
}

/// `Σ coeff·number`. Bounded coefficients on generators the curve meets
/// give a bounded result.
pub fn intersect<T: Scalar>(curve: &TestCurve<T>, cls: &DivisorClass<T>) -> Result<CoeffBound<T>> {
    if cls.space() != curve.space {
        return Err(Error::SpaceMismatch { left: curve.space.to_string(), right: cls.space().to_string() });
    }
    let mut acc = CoeffBound::zero();
    for (gen, b) in cls.iter() {
        if let Some(v) = curve.numbers.get(gen) {
            acc = acc + b.scale(v);
        }
    }
    Ok(acc)
}

/// `s − 10`; negative exactly when slope-`s` divisors are forced to
/// contain the loci swept by the test curves.
pub fn slope_locus_margin<T: Scalar>(s: &T) -> Result<T> {
    if !s.is_positive() {
        return Err(Error::Parameter(format!("slope must be positive, got {s}")));
    }
    Ok(s.clone() - T::from_i64(10))
}

/// The odd-genus computation as printed, `2s − 4(2 + 1 + s/4) + 2`.
pub fn printed_margin_expression<T: Scalar>(s: &T) -> T {
    let two = T::from_i64(2);
    two.clone() * s.clone() - T::from_i64(4) * (T::from_i64(3) + s.clone() / T::from_i64(4)) + two
}

pub fn bn_slope<T: Scalar>(g: u32) -> T {
    T::from_i64(6) + T::ratio(12, i64::from(g) + 1)
}

/// The part of the pullback of a slope-`s` class `s·λ − δ₀ − …` that the
/// curve sees, on the curve's space. `AEta` uses `χ*` from `M̄_{2i}`; `A1i`
/// uses the restriction `s(2λ − ¼δ₀ram) − 2δ₀′ − δ₀ram − 2δ_{1:i}` of the
/// odd-genus pullback to the generators the curve meets.
pub fn slope_pullback<T: Scalar>(kind: CurveKind, i: u32, s: &T) -> Result<DivisorClass<T>> {
    match kind {
        CurveKind::AEta => {
            let m = chi_star_g2::<T>(i)?;
            let src = DivisorClass::from_terms(m.source(), [(GeneratorId::Lambda, s.clone()), (GeneratorId::Delta0, -T::one())])?;
            m.apply(&src)
        }
        CurveKind::A1i => {
            let sp = SpaceId::prym_curves(i + 1)?;
            DivisorClass::from_terms(
                sp,
                [
                    (GeneratorId::Lambda, T::from_i64(2) * s.clone()),
                    (GeneratorId::Delta0Ram, -(s.clone() / T::from_i64(4)) - T::one()),
                    (GeneratorId::Delta0Prime, T::from_i64(-2)),
                    (GeneratorId::split(1, MarkSet::empty(), i + 1), T::from_i64(-2)),
                ],
            )
        }
    }
}

/// `curve · pullback(s)` as a polynomial in `s`, read off from `s = 0` and
/// `s = 1` (the pullback is affine in `s`).
pub fn slope_intersection<T: Scalar>(kind: CurveKind, i: u32) -> Result<Affine<T>> {
    let curve = test_curve::<T>(kind, i)?;
    let at = |s: T| -> Result<T> {
        let v = intersect(&curve, &slope_pullback(kind, i, &s)?)?;
        v.exact().cloned().ok_or_else(|| Error::Inexact { gen: "slope class".into(), context: format!("{kind}:{i}") })
    };
    let c0 = at(T::zero())?;
    let c1 = at(T::one())?;
    Ok(Affine::new(c0.clone(), c1 - c0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Rational;

    #[test]
    fn curve_numbers() {
        let a: TestCurve<Rational> = test_curve(CurveKind::A1i, 5).unwrap();
        assert_eq!(a.number(&GeneratorId::Lambda), q(3, 1));
        assert_eq!(a.number(&GeneratorId::split(5, MarkSet::empty(), 6)), q(-3, 1));
        let e: TestCurve<Rational> = test_curve(CurveKind::AEta, 5).unwrap();
        assert_eq!(e.number(&GeneratorId::PsiTotal), q(0, 1));
        assert_eq!(e.number(&GeneratorId::d_eta(4)), q(-3, 1));
        assert!(test_curve::<Rational>(CurveKind::A1i, 1).is_err());
    }

    #[test]
    fn both_constructions_give_three_times_the_margin() {
        for i in 2..10 {
            for kind in [CurveKind::A1i, CurveKind::AEta] {
                let p = slope_intersection::<Rational>(kind, i).unwrap();
                assert_eq!(p, Affine::new(q(-30, 1), q(3, 1)), "{kind} {i}");
            }
        }
    }

    #[test]
    fn margins() {
        assert_eq!(slope_locus_margin(&q::<Rational>(10, 1)).unwrap(), q(0, 1));
        assert_eq!(slope_locus_margin(&q::<Rational>(12, 1)).unwrap(), q(2, 1));
        assert_eq!(slope_locus_margin(&bn_slope::<Rational>(13)).unwrap(), q(-44, 14));
        assert!(slope_locus_margin(&q::<Rational>(0, 1)).is_err());
    }
}
