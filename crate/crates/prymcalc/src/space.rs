//! Moduli space descriptors and their boundary generator inventories.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest marking count accepted for pointed families. Inventories grow
/// like `g * 2^n`.
pub const MAX_MARKS: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `M̄_{g,n}`
    PointedCurves,
    /// `M̄_{g,2}/Z₂`
    PointedCurvesMod2,
    /// `R̄_g`
    PrymCurves,
    /// `R̄_{g,2}`
    BranchedPrym2,
    /// `C^n R̄_g`
    PointedPrym,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::PointedCurves,
        Family::PointedCurvesMod2,
        Family::PrymCurves,
        Family::BranchedPrym2,
        Family::PointedPrym,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PointedCurves => "PointedCurves",
            Family::PointedCurvesMod2 => "PointedCurvesMod2",
            Family::PrymCurves => "PrymCurves",
            Family::BranchedPrym2 => "BranchedPrym2",
            Family::PointedPrym => "PointedPrym",
        }
    }

    /// Accepts the family names and the short forms `m_gn`, `m_g2_z2`,
    /// `r_g`, `r_g2`, `cnr_g`.
    pub fn parse(s: &str) -> Option<Family> {
        let f = match s {
            "PointedCurves" | "m_gn" | "m_g" => Family::PointedCurves,
            "PointedCurvesMod2" | "m_g2_z2" => Family::PointedCurvesMod2,
            "PrymCurves" | "r_g" => Family::PrymCurves,
            "BranchedPrym2" | "r_g2" => Family::BranchedPrym2,
            "PointedPrym" | "cnr_g" => Family::PointedPrym,
            _ => return None,
        };
        Some(f)
    }

    /// Marking count implied by the family, if it is fixed.
    pub fn fixed_marks(self) -> Option<u32> {
        match self {
            Family::PointedCurvesMod2 => Some(2),
            Family::PrymCurves | Family::BranchedPrym2 => Some(0),
            Family::PointedCurves | Family::PointedPrym => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub struct SpaceId {
    family: Family,
    g: u32,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    family: Family,
    g: u32,
    #[serde(default)]
    n: Option<u32>,
}

impl TryFrom<RawSpace> for SpaceId {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<SpaceId> {
        let n = raw.n.or(raw.family.fixed_marks()).unwrap_or(0);
        SpaceId::new(raw.family, raw.g, n)
    }
}

impl From<SpaceId> for RawSpace {
    fn from(s: SpaceId) -> RawSpace {
        RawSpace { family: s.family, g: s.g, n: Some(s.n) }
    }
}

impl SpaceId {
    /// Validates the parameters. Pointed families accept genus 1 when at
    /// least one point is marked, since the gluing maps land there.
    pub fn new(family: Family, g: u32, n: u32) -> Result<SpaceId> {
        let bad = |why: &str| Err(Error::InvalidSpace(format!("{family}(g={g}, n={n}): {why}")));
        if let Some(fixed) = family.fixed_marks() {
            if n != fixed {
                return bad(&format!("marking count is fixed to {fixed}"));
            }
        }
        if n > MAX_MARKS {
            return bad(&format!("at most {MAX_MARKS} markings are supported"));
        }
        match family {
            Family::PointedCurves | Family::PointedPrym => {
                if g == 0 || (g == 1 && n == 0) {
                    return bad("unstable or unsupported genus");
                }
            }
            _ => {
                if g < 2 {
                    return bad("genus must be at least 2");
                }
            }
        }
        Ok(SpaceId { family, g, n })
    }

    pub fn pointed_curves(g: u32, n: u32) -> Result<SpaceId> {
        SpaceId::new(Family::PointedCurves, g, n)
    }

    pub fn pointed_curves_mod2(g: u32) -> Result<SpaceId> {
        SpaceId::new(Family::PointedCurvesMod2, g, 2)
    }

    pub fn prym_curves(g: u32) -> Result<SpaceId> {
        SpaceId::new(Family::PrymCurves, g, 0)
    }

    pub fn branched_prym2(g: u32) -> Result<SpaceId> {
        SpaceId::new(Family::BranchedPrym2, g, 0)
    }

    pub fn pointed_prym(g: u32, n: u32) -> Result<SpaceId> {
        SpaceId::new(Family::PointedPrym, g, n)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The complete generator inventory, sorted.
    pub fn generators(&self) -> Vec<GeneratorId> {
        let (g, n) = (self.g, self.n);
        let mut out = vec![GeneratorId::Lambda];
        match self.family {
            Family::PointedCurves => {
                out.extend((1..=n).map(GeneratorId::Psi));
                out.push(GeneratorId::Delta0);
                for i in 0..=g {
                    for s in MarkSet::all_subsets(n) {
                        let gen = GeneratorId::Delta { i, s };
                        if let Ok(c) = self.canonicalize(&gen) {
                            if c == gen {
                                out.push(gen);
                            }
                        }
                    }
                }
            }
            Family::PointedCurvesMod2 => {
                out.push(GeneratorId::PsiTotal);
                out.push(GeneratorId::Delta0);
                for i in 1..=g / 2 {
                    out.push(GeneratorId::Delta { i, s: MarkSet::single(1) });
                }
                for k in 0..g {
                    let gen = GeneratorId::Delta { i: k, s: MarkSet::from_marks(&[1, 2]) };
                    out.push(self.canonicalize(&gen).expect("valid by construction"));
                }
            }
            Family::PrymCurves | Family::PointedPrym => {
                out.extend((1..=n).map(GeneratorId::Psi));
                out.push(GeneratorId::Delta0Prime);
                out.push(GeneratorId::Delta0DoublePrime);
                out.push(GeneratorId::Delta0Ram);
                for i in 1..=g {
                    for s in MarkSet::all_subsets(n) {
                        let gen = GeneratorId::Delta { i, s };
                        if self.canonicalize(&gen).is_ok() {
                            out.push(gen);
                        }
                    }
                }
                for i in 1..g {
                    for s in MarkSet::all_subsets(n) {
                        let gen = GeneratorId::Split { i, s, rest: g - i };
                        if self.canonicalize(&gen).ok() == Some(gen.clone()) {
                            out.push(gen);
                        }
                    }
                }
            }
            Family::BranchedPrym2 => {
                out.push(GeneratorId::PsiTotal);
                out.push(GeneratorId::Delta0Prime);
                out.push(GeneratorId::Delta0Ram);
                for i in 1..=g / 2 {
                    out.push(GeneratorId::Unordered { i, rest: g - i });
                }
                for i in 0..g {
                    out.push(GeneratorId::Marked { i, label: Label::O });
                    out.push(GeneratorId::Marked { i, label: Label::Eta });
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// True when `gen` denotes a divisor of this space under either of its
    /// representations.
    pub fn contains(&self, gen: &GeneratorId) -> bool {
        self.canonicalize(gen).is_ok()
    }

    /// Canonical representative of `gen`. Idempotent.
    pub fn canonicalize(&self, gen: &GeneratorId) -> Result<GeneratorId> {
        let invalid = || Error::InvalidGenerator { gen: gen.to_string(), space: self.to_string() };
        let (g, n) = (self.g, self.n);
        use GeneratorId::*;
        let ok = match (self.family, gen) {
            (_, Lambda) => Some(Lambda),
            (Family::PointedCurves | Family::PrymCurves | Family::PointedPrym, Psi(j)) => {
                (*j >= 1 && *j <= n).then_some(Psi(*j))
            }
            (Family::PointedCurvesMod2 | Family::BranchedPrym2, PsiTotal) => Some(PsiTotal),
            (Family::PointedCurves | Family::PointedCurvesMod2, Delta0) => Some(Delta0),
            (Family::PrymCurves | Family::PointedPrym, Delta0Prime | Delta0DoublePrime | Delta0Ram) => {
                Some(gen.clone())
            }
            (Family::BranchedPrym2, Delta0Prime | Delta0Ram) => Some(gen.clone()),
            (Family::PointedCurves, Delta { i, s }) => {
                if !s.within(n) {
                    None
                } else {
                    canonical_pair(g, n, *i, *s).map(|(i, s)| Delta { i, s })
                }
            }
            (Family::PointedCurvesMod2, Delta { i, s }) => {
                if !s.within(2) {
                    None
                } else if s.len() == 1 {
                    (*i >= 1 && *i < g).then(|| Delta { i: (*i).min(g - *i), s: MarkSet::single(1) })
                } else {
                    canonical_pair(g, 2, *i, *s).map(|(i, s)| Delta { i, s })
                }
            }
            (Family::PrymCurves | Family::PointedPrym, Delta { i, s }) => {
                let fits = s.within(n) && *i >= 1 && (*i < g || (*i == g && s.len() + 2 <= n));
                fits.then_some(Delta { i: *i, s: *s })
            }
            (Family::PrymCurves | Family::PointedPrym, Split { i, s, rest }) => {
                if !s.within(n) || *i == 0 || *i >= g || *rest != g - *i {
                    None
                } else {
                    let (ci, cs) = split_canonical(g, n, *i, *s);
                    Some(Split { i: ci, s: cs, rest: g - ci })
                }
            }
            (Family::BranchedPrym2, Unordered { i, rest }) => {
                (*i >= 1 && *i < g && *rest == g - *i).then(|| {
                    let i = (*i).min(g - *i);
                    Unordered { i, rest: g - i }
                })
            }
            (Family::BranchedPrym2, Split { i, s, rest }) if s.is_empty() => {
                (*i >= 1 && *i < g && *rest == g - *i).then(|| {
                    let i = (*i).min(g - *i);
                    Unordered { i, rest: g - i }
                })
            }
            (Family::BranchedPrym2, Marked { i, label }) => (*i < g).then_some(Marked { i: *i, label: *label }),
            _ => None,
        };
        ok.ok_or_else(invalid)
    }

    /// The ψ class used as the bigness direction: `ψ` on the Z₂-quotient
    /// families and `ψ₁ + … + ψ_n` on pointed ones. `None` when the space
    /// has no ψ class.
    pub fn psi_generators(&self) -> Vec<GeneratorId> {
        match self.family {
            Family::PointedCurvesMod2 | Family::BranchedPrym2 => vec![GeneratorId::PsiTotal],
            _ => (1..=self.n).map(GeneratorId::Psi).collect(),
        }
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::PointedCurves | Family::PointedPrym => write!(f, "{}({},{})", self.family, self.g, self.n),
            _ => write!(f, "{}({})", self.family, self.g),
        }
    }
}

/// Canonical form of `(i, S) ≡ (g−i, S^c)` on `M̄_{g,n}`: smaller genus
/// first, ties broken by the set containing marking 1.
fn canonical_pair(g: u32, n: u32, i: u32, s: MarkSet) -> Option<(u32, MarkSet)> {
    if i > g {
        return None;
    }
    let c = s.complement(n);
    if (i == 0 && s.len() < 2) || (i == g && c.len() < 2) {
        return None;
    }
    let j = g - i;
    if i < j || (i == j && (n == 0 || s.contains(1))) {
        Some((i, s))
    } else {
        Some((j, c))
    }
}

fn split_canonical(g: u32, n: u32, i: u32, s: MarkSet) -> (u32, MarkSet) {
    let j = g - i;
    if i < j || (i == j && (n == 0 || s.contains(1))) {
        (i, s)
    } else {
        (j, s.complement(n))
    }
}

/// A subset of `{1, …, MAX_MARKS}` stored as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkSet(u32);

impl MarkSet {
    pub fn empty() -> MarkSet {
        MarkSet(0)
    }

    pub fn single(j: u32) -> MarkSet {
        MarkSet::from_marks(&[j])
    }

    /// Panics on markings outside `1..=MAX_MARKS`.
    pub fn from_marks(marks: &[u32]) -> MarkSet {
        let mut bits = 0;
        for &j in marks {
            assert!((1..=MAX_MARKS).contains(&j), "marking {j} out of range");
            bits |= 1 << (j - 1);
        }
        MarkSet(bits)
    }

    /// `{lo, …, hi}`; empty when `lo > hi`.
    pub fn range(lo: u32, hi: u32) -> MarkSet {
        let marks: Vec<u32> = (lo..=hi).collect();
        MarkSet::from_marks(&marks)
    }

    pub fn full(n: u32) -> MarkSet {
        MarkSet::range(1, n)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, j: u32) -> bool {
        (1..=MAX_MARKS).contains(&j) && self.0 & (1 << (j - 1)) != 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn within(self, n: u32) -> bool {
        self.0 & !MarkSet::full(n).0 == 0
    }

    pub fn complement(self, n: u32) -> MarkSet {
        MarkSet(MarkSet::full(n).0 & !self.0)
    }

    pub fn is_subset(self, other: MarkSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: MarkSet) -> MarkSet {
        MarkSet(self.0 | other.0)
    }

    pub fn minus(self, other: MarkSet) -> MarkSet {
        MarkSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: MarkSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        (1..=MAX_MARKS).filter(move |&j| self.contains(j))
    }

    /// All subsets of `{1, …, n}` in bitmask order.
    pub fn all_subsets(n: u32) -> impl Iterator<Item = MarkSet> {
        (0..(1u32 << n)).map(MarkSet)
    }
}

impl fmt::Display for MarkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, j) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    O,
    Eta,
}

/// A basis class of a rational Picard group.
///
/// Which variants are meaningful depends on the family; see
/// [`SpaceId::canonicalize`]. `Split` and `Unordered` carry the genus of
/// the second side so that they print without the ambient space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorId {
    Lambda,
    PsiTotal,
    Psi(u32),
    Delta0,
    Delta0Prime,
    Delta0DoublePrime,
    Delta0Ram,
    /// `δ_{i,S}`. On `M̄_{g,n}` this is symmetric under `(i,S) ≡ (g−i,S^c)`;
    /// on Prym spaces the Prym structure is nontrivial on the genus `i`
    /// side containing `S`. With no markings `S` is empty and this is `δ_i`.
    Delta { i: u32, s: MarkSet },
    /// `δ_{i,S:g−i}`: nontrivial on both sides.
    Split { i: u32, s: MarkSet, rest: u32 },
    /// `δ_{i:g−i}` on `R̄_{g,2}`.
    Unordered { i: u32, rest: u32 },
    /// `δ_{i:g−i,{O}}` and `δ_{i:g−i,{η}}`; `i` is the genus of the side
    /// carrying both marked points.
    Marked { i: u32, label: Label },
}

impl GeneratorId {
    pub fn delta(i: u32, s: MarkSet) -> GeneratorId {
        GeneratorId::Delta { i, s }
    }

    /// `δ_i` on an unpointed space.
    pub fn delta_i(i: u32) -> GeneratorId {
        GeneratorId::Delta { i, s: MarkSet::empty() }
    }

    pub fn split(i: u32, s: MarkSet, g: u32) -> GeneratorId {
        GeneratorId::Split { i, s, rest: g - i }
    }

    pub fn unordered(i: u32, g: u32) -> GeneratorId {
        GeneratorId::Unordered { i, rest: g - i }
    }

    pub fn d_o(i: u32) -> GeneratorId {
        GeneratorId::Marked { i, label: Label::O }
    }

    pub fn d_eta(i: u32) -> GeneratorId {
        GeneratorId::Marked { i, label: Label::Eta }
    }

    pub fn is_boundary(&self) -> bool {
        !matches!(self, GeneratorId::Lambda | GeneratorId::PsiTotal | GeneratorId::Psi(_))
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorId::Lambda => f.write_str("lambda"),
            GeneratorId::PsiTotal => f.write_str("psi"),
            GeneratorId::Psi(j) => write!(f, "psi[{j}]"),
            GeneratorId::Delta0 => f.write_str("d0"),
            GeneratorId::Delta0Prime => f.write_str("d0p"),
            GeneratorId::Delta0DoublePrime => f.write_str("d0pp"),
            GeneratorId::Delta0Ram => f.write_str("d0ram"),
            GeneratorId::Delta { i, s } => write!(f, "d{{{i},{s}}}"),
            GeneratorId::Split { i, s, rest } => write!(f, "d{{{i},{s}:{rest}}}"),
            GeneratorId::Unordered { i, rest } => write!(f, "d{{{i},{{}}:{rest}}}"),
            GeneratorId::Marked { i, label: Label::O } => write!(f, "dO{{{i}}}"),
            GeneratorId::Marked { i, label: Label::Eta } => write!(f, "dEta{{{i}}}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_two_one_on_m31_is_delta_one_empty() {
        let sp = SpaceId::pointed_curves(3, 1).unwrap();
        let c = sp.canonicalize(&GeneratorId::delta(2, MarkSet::single(1))).unwrap();
        assert_eq!(c, GeneratorId::delta(1, MarkSet::empty()));
    }

    #[test]
    fn split_swaps_to_smaller_genus() {
        let sp = SpaceId::pointed_prym(5, 2).unwrap();
        let s = MarkSet::single(2);
        let c = sp.canonicalize(&GeneratorId::split(4, s, 5)).unwrap();
        assert_eq!(c, GeneratorId::split(1, MarkSet::single(1), 5));
    }

    #[test]
    fn inventory_counts() {
        let r = SpaceId::prym_curves(6).unwrap();
        let over_d0 = r
            .generators()
            .into_iter()
            .filter(|x| matches!(x, GeneratorId::Delta0Prime | GeneratorId::Delta0DoublePrime | GeneratorId::Delta0Ram))
            .count();
        assert_eq!(over_d0, 3);
        // lambda, 3 over δ₀, δ_1..δ_5, δ_{1:5}, δ_{2:4}, δ_{3:3}
        assert_eq!(r.generators().len(), 1 + 3 + 5 + 3);

        let b = SpaceId::branched_prym2(13).unwrap();
        // lambda, psi, d0p, d0ram, 6 unordered, 26 marked
        assert_eq!(b.generators().len(), 4 + 6 + 26);

        let m = SpaceId::pointed_curves_mod2(4).unwrap();
        // lambda, psi, d0, d{1,{1}}, d{2,{1}}, d{0,{12}}, d{1,{12}}, d{2,{12}}, d{1,{}}
        assert_eq!(m.generators().len(), 9);
    }

    #[test]
    fn pointed_prym_3_1_has_split_generator() {
        let sp = SpaceId::pointed_prym(3, 1).unwrap();
        let gens = sp.generators();
        assert!(gens.contains(&GeneratorId::split(1, MarkSet::single(1), 3)));
        assert!(gens.contains(&GeneratorId::Delta0DoublePrime));
        assert!(!gens.iter().any(|x| matches!(x, GeneratorId::Delta { i: 3, .. })));
    }

    #[test]
    fn generators_are_canonical() {
        for fam in Family::ALL {
            for g in 2..7 {
                for n in 0..4 {
                    let Ok(sp) = SpaceId::new(fam, g, n) else { continue };
                    for gen in sp.generators() {
                        assert_eq!(sp.canonicalize(&gen).unwrap(), gen, "{sp} {gen}");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SpaceId::prym_curves(1).is_err());
        assert!(SpaceId::new(Family::PointedCurvesMod2, 4, 3).is_err());
        assert!(SpaceId::pointed_curves(1, 0).is_err());
        assert!(SpaceId::pointed_curves(1, 1).is_ok());
    }
}
