//! Age lower bounds per component type and the smoothness and
//! non-canonicity criteria for points of `BranchedPrym2(g)`, at the level
//! of dual graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    Identity,
    EllipticTail,
    EllipticLadder,
    HyperellipticTail,
    RationalTail,
    RationalLadder,
    PointedEllipticTail1,
    PointedEllipticTail2,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum JSpecial {
    #[default]
    #[serde(rename = "none")]
    None,
    #[serde(rename = "j0")]
    J0,
    #[serde(rename = "j1728")]
    J1728,
}

/// The automorphism induced on one component: its kind, its order and the
/// special j-invariant it needs, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComponentDatum {
    pub kind: ComponentKind,
    pub ord: u32,
    #[serde(default, rename = "jSpecial")]
    pub j: JSpecial,
}

impl ComponentDatum {
    pub fn new(kind: ComponentKind, ord: u32, j: JSpecial) -> Self {
        ComponentDatum { kind, ord, j }
    }
}

impl fmt::Display for ComponentDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ord {}", self.kind, self.ord)?;
        match self.j {
            JSpecial::None => Ok(()),
            JSpecial::J0 => f.write_str(" j0"),
            JSpecial::J1728 => f.write_str(" j1728"),
        }
    }
}

/// `(kind, ord, w)` with `w = (numerator, denominator)`.
const ROWS: [(ComponentKind, u32, (i64, i64)); 17] = {
    use ComponentKind::*;
    [
        (Identity, 1, (0, 1)),
        (EllipticTail, 2, (0, 1)),
        (EllipticTail, 4, (1, 2)),
        (EllipticTail, 3, (1, 3)),
        (EllipticTail, 6, (1, 3)),
        (EllipticLadder, 2, (1, 2)),
        (EllipticLadder, 4, (3, 4)),
        (EllipticLadder, 3, (2, 3)),
        (HyperellipticTail, 2, (1, 2)),
        (RationalTail, 2, (0, 1)),
        (RationalLadder, 2, (1, 2)),
        (PointedEllipticTail1, 2, (1, 2)),
        (PointedEllipticTail1, 4, (3, 4)),
        (PointedEllipticTail1, 3, (2, 3)),
        (PointedEllipticTail1, 6, (2, 3)),
        (PointedEllipticTail2, 2, (1, 2)),
        (PointedEllipticTail2, 6, (5, 6)),
    ]
};

fn has_j(kind: ComponentKind) -> bool {
    use ComponentKind::*;
    matches!(kind, EllipticTail | EllipticLadder | PointedEllipticTail1 | PointedEllipticTail2)
}

/// The j-invariant a row needs: order 4 lives on j = 1728, orders 3 and 6
/// on j = 0. Involutions exist for every j.
fn j_allowed(kind: ComponentKind, ord: u32, j: JSpecial) -> bool {
    match ord {
        4 => j == JSpecial::J1728,
        3 | 6 => j == JSpecial::J0,
        _ => has_j(kind) || j == JSpecial::None,
    }
}

/// Every row of the table with a representative datum. Involution rows on
/// elliptic components list the generic j.
pub fn age_table<T: Scalar>() -> Vec<(ComponentDatum, T)> {
    ROWS.iter()
        .map(|&(kind, ord, (n, d))| {
            let j = match ord {
                4 => JSpecial::J1728,
                3 | 6 => JSpecial::J0,
                _ => JSpecial::None,
            };
            (ComponentDatum::new(kind, ord, j), T::ratio(n, d))
        })
        .collect()
}

/// The contribution `w_j` of one component to the age.
pub fn age_lower_bound<T: Scalar>(c: &ComponentDatum) -> Result<T> {
    ROWS.iter()
        .find(|&&(kind, ord, _)| kind == c.kind && ord == c.ord)
        .filter(|_| j_allowed(c.kind, c.ord, c.j))
        .map(|&(_, _, (n, d))| T::ratio(n, d))
        .ok_or_else(|| Error::InvalidRow(c.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgeEntry<T> {
    pub datum: ComponentDatum,
    pub w: T,
    /// `w > 1/3`: the component cannot occur under the standing assumption.
    pub excluded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarReport<T> {
    pub entries: Vec<AgeEntry<T>>,
    pub total: T,
    pub admissible: bool,
    /// Every `w_j` is zero, so the group is generated by quasi-reflections
    /// in the sense of the smoothness criterion.
    pub all_zero: bool,
}

pub fn star_admissible<T: Scalar>(components: &[ComponentDatum]) -> Result<StarReport<T>> {
    let third = T::ratio(1, 3);
    let entries = components
        .iter()
        .map(|c| {
            let w: T = age_lower_bound(c)?;
            Ok(AgeEntry { datum: *c, excluded: w > third, w })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = entries.iter().fold(T::zero(), |a, e| a + e.w.clone());
    Ok(StarReport {
        admissible: entries.iter().all(|e| !e.excluded),
        all_zero: entries.iter().all(|e| e.w.is_zero()),
        entries,
        total,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchComponent {
    pub id: String,
    pub genus: u32,
    /// Whether the Prym bundle restricts trivially.
    #[serde(rename = "etaTrivial")]
    pub eta_trivial: bool,
    #[serde(default)]
    pub marks: u32,
    #[serde(default)]
    pub j: JSpecial,
}

/// A stable curve with two markings, at the level of its dual graph.
/// `nodes` are edges between component ids; a self-loop is a
/// non-separating node on one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSketch {
    pub components: Vec<SketchComponent>,
    #[serde(default)]
    pub nodes: Vec<(String, String)>,
}

impl CurveSketch {
    /// Checks ids, incidences and markings and returns the arithmetic genus.
    pub fn validate(&self) -> Result<u32> {
        let bad = |m: String| Err(Error::Sketch(m));
        let mut ids = BTreeSet::new();
        for c in &self.components {
            if !ids.insert(c.id.as_str()) {
                return bad(format!("duplicate component id {}", c.id));
            }
            if c.j != JSpecial::None && c.genus != 1 {
                return bad(format!("component {} has a j-invariant but genus {}", c.id, c.genus));
            }
        }
        if ids.is_empty() {
            return bad("no components".into());
        }
        for (a, b) in &self.nodes {
            for x in [a, b] {
                if !ids.contains(x.as_str()) {
                    return bad(format!("node refers to unknown component {x}"));
                }
            }
        }
        let marks: u32 = self.components.iter().map(|c| c.marks).sum();
        if marks != 2 {
            return bad(format!("the markings total {marks}, expected 2"));
        }
        if self.components_of(None).len() != 1 {
            return bad("the dual graph is disconnected".into());
        }
        let genus = self.components.iter().map(|c| i64::from(c.genus)).sum::<i64>() + self.nodes.len() as i64
            - self.components.len() as i64
            + 1;
        for c in &self.components {
            let special = 2 * i64::from(c.genus) - 2 + self.degree(&c.id) as i64 + i64::from(c.marks);
            if special <= 0 && !(c.genus == 0 && self.degree(&c.id) == 2 && c.marks == 0) {
                return bad(format!("component {} is unstable", c.id));
            }
        }
        if genus < 2 {
            return bad(format!("arithmetic genus {genus} is below 2"));
        }
        Ok(genus as u32)
    }

    /// Number of node branches on a component; a self-loop counts twice.
    pub fn degree(&self, id: &str) -> usize {
        self.nodes.iter().map(|(a, b)| usize::from(a == id) + usize::from(b == id)).sum()
    }

    fn has_loop(&self, id: &str) -> bool {
        self.nodes.iter().any(|(a, b)| a == id && b == id)
    }

    /// Connected components of the dual graph with `removed` deleted.
    fn components_of(&self, removed: Option<&str>) -> Vec<BTreeSet<String>> {
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for c in &self.components {
            if Some(c.id.as_str()) != removed {
                adj.entry(&c.id).or_default();
            }
        }
        for (a, b) in &self.nodes {
            if Some(a.as_str()) == removed || Some(b.as_str()) == removed {
                continue;
            }
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in adj.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut part = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if seen.insert(v) {
                    part.insert(v.to_string());
                    stack.extend(adj[v].iter().copied());
                }
            }
            out.push(part);
        }
        out
    }

    /// Genus one components meeting the rest in one point and carrying no
    /// marking.
    pub fn elliptic_tails(&self) -> Vec<&SketchComponent> {
        self.components
            .iter()
            .filter(|c| c.genus == 1 && c.marks == 0 && self.degree(&c.id) == 1 && !self.has_loop(&c.id))
            .collect()
    }

    /// Rational components meeting the rest in one point; stability forces
    /// both markings onto them.
    pub fn rational_tails(&self) -> Vec<&SketchComponent> {
        self.components.iter().filter(|c| c.genus == 0 && self.degree(&c.id) == 1).collect()
    }

    /// Unmarked smooth rational components meeting the rest in two points.
    pub fn exceptional_components(&self) -> Vec<&SketchComponent> {
        self.components
            .iter()
            .filter(|c| c.genus == 0 && c.marks == 0 && self.degree(&c.id) == 2 && !self.has_loop(&c.id))
            .collect()
    }

    /// Exceptional components whose removal disconnects the dual graph.
    pub fn disconnecting_exceptional(&self) -> Vec<&SketchComponent> {
        self.exceptional_components()
            .into_iter()
            .filter(|c| self.components_of(Some(&c.id)).len() > 1)
            .collect()
    }
}

/// True iff some elliptic tail has j-invariant 0 and the Prym bundle is
/// trivial on it.
pub fn is_noncanonical(sketch: &CurveSketch) -> Result<bool> {
    sketch.validate()?;
    Ok(sketch.elliptic_tails().iter().any(|c| c.j == JSpecial::J0 && c.eta_trivial))
}

/// A generator of the automorphism group of a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AutGenerator {
    RationalTailInvolution,
    EllipticTailInvolution,
    /// The inessential automorphism acting by `±1` across a disconnecting
    /// exceptional component.
    GammaE { component: String },
    Other { datum: ComponentDatum },
}

/// True iff every generator is a rational or elliptic tail involution or
/// some `γ_E`; an empty list is the trivial group.
pub fn is_smooth_point(sketch: &CurveSketch, gens: &[AutGenerator]) -> Result<bool> {
    sketch.validate()?;
    let disconnecting: BTreeSet<&str> = sketch.disconnecting_exceptional().iter().map(|c| c.id.as_str()).collect();
    let mut smooth = true;
    for g in gens {
        match g {
            AutGenerator::GammaE { component } if !disconnecting.contains(component.as_str()) => {
                return Err(Error::Sketch(format!("{component} is not a disconnecting exceptional component")));
            }
            AutGenerator::Other { .. } => smooth = false,
            _ => {}
        }
    }
    Ok(smooth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Rational;
    use ComponentKind::*;

    #[test]
    fn table_has_sixteen_non_identity_rows() {
        let t = age_table::<Rational>();
        assert_eq!(t.iter().filter(|(d, _)| d.kind != Identity).count(), 16);
        for (d, w) in &t {
            assert_eq!(&age_lower_bound::<Rational>(d).unwrap(), w);
        }
    }

    #[test]
    fn rows() {
        let w = |k, o, j| age_lower_bound::<Rational>(&ComponentDatum::new(k, o, j));
        assert_eq!(w(PointedEllipticTail2, 6, JSpecial::J0).unwrap(), q(5, 6));
        assert_eq!(w(RationalTail, 2, JSpecial::None).unwrap(), q(0, 1));
        assert!(w(EllipticLadder, 4, JSpecial::None).is_err());
        assert!(w(EllipticLadder, 6, JSpecial::J0).is_err());
        assert!(w(RationalTail, 2, JSpecial::J0).is_err());
        assert_eq!(w(EllipticTail, 2, JSpecial::J1728).unwrap(), q(0, 1));
    }

    #[test]
    fn star() {
        let r = star_admissible::<Rational>(&[ComponentDatum::new(EllipticTail, 3, JSpecial::J0)]).unwrap();
        assert!(r.admissible);
        assert_eq!(r.total, q(1, 3));
        let r = star_admissible::<Rational>(&[ComponentDatum::new(EllipticLadder, 2, JSpecial::None)]).unwrap();
        assert!(!r.admissible);
        let r = star_admissible::<Rational>(&[]).unwrap();
        assert!(r.all_zero && r.admissible);
    }
}
