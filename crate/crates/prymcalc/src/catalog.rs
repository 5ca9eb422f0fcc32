//! A registry of effective divisor classes with exact, bounded or unknown
//! coefficients.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map as JsonMap, Value};

use crate::bound::CoeffBound;
use crate::class::DivisorClass;
use crate::error::{Error, Result};
use crate::grammar::{parse_class, parse_generator};
use crate::scalar::{z, Scalar};
use crate::space::{GeneratorId, MarkSet, SpaceId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry<T> {
    pub name: String,
    pub space: SpaceId,
    /// Known part: exact coefficients and certified bounds.
    pub class: DivisorClass<T>,
    /// Generators whose coefficient is not recorded. Distinct from zero.
    pub unknown: BTreeSet<GeneratorId>,
    pub provenance: String,
    /// The coefficients are given at a scale that matters (for instance
    /// because a bound is stated at that scale) and are not primitive.
    pub fixed_scale: bool,
}

impl<T: Scalar> CatalogEntry<T> {
    /// The class with every unknown coefficient read as an unrecorded
    /// nonnegative multiple subtracted, i.e. `AtLeast(0)`. These are the
    /// elided `−⋯` terms of an effective class.
    pub fn bounded_class(&self) -> DivisorClass<T> {
        let mut cls = self.class.clone();
        for g in &self.unknown {
            cls.add_bound(g, CoeffBound::AtLeast(T::zero())).expect("unknown generators are canonical");
        }
        cls
    }

    /// The known part, failing if any unknown generator is involved.
    pub fn exact_class(&self) -> Result<DivisorClass<T>> {
        match self.unknown.iter().next() {
            Some(g) => Err(Error::Inexact { gen: g.to_string(), context: format!("unknown in catalog entry {}", self.name) }),
            None => Ok(self.class.clone()),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut coeffs = JsonMap::new();
        for (g, b) in self.class.iter() {
            let v = match b {
                CoeffBound::Exact(v) => json!(v.to_string()),
                CoeffBound::AtLeast(m) => json!({ "atLeast": m.to_string() }),
                CoeffBound::AtMost(m) => json!({ "atMost": m.to_string() }),
                CoeffBound::Unknown => json!("unknown"),
            };
            coeffs.insert(g.to_string(), v);
        }
        for g in &self.unknown {
            coeffs.insert(g.to_string(), json!("unknown"));
        }
        let mut out = json!({
            "name": self.name,
            "space": { "family": self.space.family().name(), "g": self.space.g(), "n": self.space.n() },
            "coeffs": coeffs,
            "provenance": self.provenance,
        });
        if self.fixed_scale {
            out["fixedScale"] = json!(true);
        }
        out
    }

    /// Parses one entry in the catalog JSON schema. `path` prefixes error
    /// locations.
    pub fn from_json(v: &Value, path: &str) -> Result<Self> {
        let schema = |p: String, msg: &str| Error::Schema { path: p, msg: msg.to_string() };
        let obj = v.as_object().ok_or_else(|| schema(path.to_string(), "expected an object"))?;
        let name = obj
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| schema(format!("{path}.name"), "expected a string"))?
            .to_string();
        let space: SpaceId = serde_json::from_value(obj.get("space").cloned().unwrap_or(Value::Null))
            .map_err(|e| schema(format!("{path}.space"), &e.to_string()))?;
        let provenance = match obj.get("provenance") {
            None => String::new(),
            Some(p) => p.as_str().ok_or_else(|| schema(format!("{path}.provenance"), "expected a string"))?.to_string(),
        };
        let fixed_scale = match obj.get("fixedScale") {
            None => false,
            Some(b) => b.as_bool().ok_or_else(|| schema(format!("{path}.fixedScale"), "expected a boolean"))?,
        };
        let coeffs = obj
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| schema(format!("{path}.coeffs"), "expected an object"))?;
        let mut class = DivisorClass::zero(space);
        let mut unknown = BTreeSet::new();
        let mut seen = BTreeSet::new();
        for (key, val) in coeffs {
            let at = format!("{path}.coeffs.{key}");
            let gen = parse_generator(key, space).map_err(|e| Error::Schema { path: at.clone(), msg: e.to_string() })?;
            if !seen.insert(gen.clone()) {
                return Err(schema(at, "generator given twice"));
            }
            let number = |s: &str| s.parse::<T>().map_err(|_| schema(at.clone(), &format!("invalid rational '{s}'")));
            match val {
                Value::String(s) if s == "unknown" => {
                    unknown.insert(gen);
                }
                Value::String(s) => class.add_exact(&gen, number(s)?)?,
                Value::Object(o) if o.len() == 1 => {
                    let (k, inner) = o.iter().next().expect("one key");
                    let s = inner.as_str().ok_or_else(|| schema(at.clone(), "bound must be a string"))?;
                    let b = match k.as_str() {
                        "atLeast" => CoeffBound::AtLeast(number(s)?),
                        "atMost" => CoeffBound::AtMost(number(s)?),
                        _ => return Err(schema(at, "expected atLeast or atMost")),
                    };
                    class.add_bound(&gen, b)?;
                }
                _ => return Err(schema(at, "expected \"p/q\", \"unknown\" or {\"atLeast\": \"p/q\"}")),
            }
        }
        let entry = CatalogEntry { name, space, class, unknown, provenance, fixed_scale };
        if !entry.fixed_scale && !entry.is_primitive() {
            return Err(schema(format!("{path}.coeffs"), "exact coefficients are not primitive integers; set fixedScale to keep this scale"));
        }
        Ok(entry)
    }

    /// Exact coefficients are integers with greatest common divisor 1.
    pub fn is_primitive(&self) -> bool {
        let (k, _) = self.class.primitive();
        k.is_one()
    }
}

/// Brill–Noether number `g − (r+1)(g−d+r)`.
pub fn brill_noether_number(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

/// The Brill–Noether divisor class on `M̄_g`, as the primitive integral
/// multiple of `(g+3)λ − ((g+1)/6)δ₀ − Σ i(g−i)δ_i`.
pub fn bn_class<T: Scalar>(g: u32, r: u32, d: u32) -> Result<DivisorClass<T>> {
    let rho = brill_noether_number(g.into(), r.into(), d.into());
    if rho != -1 {
        return Err(Error::NotADivisor(format!("ρ({g},{r},{d}) = {rho}, not −1")));
    }
    let sp = SpaceId::pointed_curves(g, 0)?;
    let gi = i64::from(g);
    let mut terms = vec![(GeneratorId::Lambda, z::<T>(gi + 3)), (GeneratorId::Delta0, -T::ratio(gi + 1, 6))];
    for i in 1..=g / 2 {
        let ii = i64::from(i);
        terms.push((GeneratorId::delta_i(i), z(-ii * (gi - ii))));
    }
    Ok(DivisorClass::from_terms(sp, terms)?.primitive().1)
}

pub fn bn_entry<T: Scalar>(g: u32, r: u32, d: u32) -> Result<CatalogEntry<T>> {
    Ok(CatalogEntry {
        name: format!("BN_{g}_{r}_{d}"),
        space: SpaceId::pointed_curves(g, 0)?,
        class: bn_class(g, r, d)?,
        unknown: BTreeSet::new(),
        provenance: format!("Brill–Noether divisor of curves with a g^{r}_{d}; standard class formula"),
        fixed_scale: false,
    })
}

fn parse_bn_name(name: &str) -> Option<(u32, u32, u32)> {
    let rest = name.strip_prefix("BN_")?;
    let parts: Vec<u32> = rest.split('_').map(|p| p.parse().ok()).collect::<Option<_>>()?;
    match parts[..] {
        [g, r, d] => Some((g, r, d)),
        _ => None,
    }
}

fn shipped_entry<T: Scalar>(name: &str, space: SpaceId, known: &str, unknown: Vec<GeneratorId>, provenance: &str, fixed_scale: bool) -> CatalogEntry<T> {
    let class = parse_class(known, space).expect("shipped entries parse");
    let unknown = unknown.into_iter().map(|g| space.canonicalize(&g).expect("shipped generators are valid")).collect();
    CatalogEntry { name: name.to_string(), space, class, unknown, provenance: provenance.to_string(), fixed_scale }
}

#[derive(Clone, Debug)]
pub struct Catalog<T> {
    entries: BTreeMap<String, CatalogEntry<T>>,
}

impl<T: Scalar> Default for Catalog<T> {
    fn default() -> Self {
        Catalog::builtin()
    }
}

impl<T: Scalar> Catalog<T> {
    pub fn empty() -> Self {
        Catalog { entries: BTreeMap::new() }
    }

    /// The shipped entries. Brill–Noether classes `BN_g_r_d` are produced
    /// on demand by [`Catalog::entry`].
    pub fn builtin() -> Self {
        let mut c = Catalog::empty();
        let m16 = SpaceId::pointed_curves(16, 0).expect("valid");
        c.register(shipped_entry(
            "Z_16_1",
            m16,
            "407*lambda - 61*d0",
            (1..=8).map(GeneratorId::delta_i).collect(),
            "Koszul divisor on M̄_16; only λ and δ₀ coefficients recorded",
            false,
        ));
        let r14 = SpaceId::prym_curves(14).expect("valid");
        let mut u_unknown = vec![GeneratorId::Delta0DoublePrime];
        u_unknown.extend((1..14).map(GeneratorId::delta_i));
        u_unknown.extend((2..=7).map(|i| GeneratorId::split(i, MarkSet::empty(), 14)));
        c.register(shipped_entry(
            "U_14_4",
            r14,
            "180*lambda - 28*d0p - 42*d0ram - [>=100]*d{1,{}:13}",
            u_unknown,
            "Prym–Koszul divisor on R̄_14; δ_{1:13} coefficient bounded below by 100 at this scale",
            true,
        ));
        let m18 = SpaceId::pointed_curves(18, 0).expect("valid");
        c.register(shipped_entry(
            "GP_5_18_20",
            m18,
            "516*lambda - 77*d0 - 408*d{1,{}}",
            (2..=9).map(GeneratorId::delta_i).collect(),
            "Gieseker–Petri divisor for g^5_20 on M̄_18; λ, δ₀, δ₁ recorded",
            false,
        ));
        c
    }

    pub fn register(&mut self, entry: CatalogEntry<T>) {
        self.entries.insert(entry.name.clone(), entry);
    }

    /// Looks up a registered entry or builds a `BN_g_r_d` entry.
    pub fn entry(&self, name: &str) -> Result<CatalogEntry<T>> {
        if let Some(e) = self.entries.get(name) {
            return Ok(e.clone());
        }
        match parse_bn_name(name) {
            Some((g, r, d)) => bn_entry(g, r, d),
            None => Err(Error::UnknownEntry(name.to_string())),
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry<T>> {
        self.entries.values()
    }

    /// Loads entries from JSON: one entry, an array of entries, or an
    /// object with an `entries` array. Returns the names registered.
    pub fn load_json(&mut self, text: &str) -> Result<Vec<String>> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema { path: "$".into(), msg: e.to_string() })?;
        let list: Vec<(String, &Value)> = match &v {
            Value::Array(items) => items.iter().enumerate().map(|(k, x)| (format!("$[{k}]"), x)).collect(),
            Value::Object(o) if o.contains_key("entries") => match &o["entries"] {
                Value::Array(items) => items.iter().enumerate().map(|(k, x)| (format!("$.entries[{k}]"), x)).collect(),
                _ => return Err(Error::Schema { path: "$.entries".into(), msg: "expected an array".into() }),
            },
            Value::Object(_) => vec![("$".to_string(), &v)],
            _ => return Err(Error::Schema { path: "$".into(), msg: "expected an object or array".into() }),
        };
        let parsed = list.iter().map(|(p, x)| CatalogEntry::from_json(x, p)).collect::<Result<Vec<_>>>()?;
        let names = parsed.iter().map(|e| e.name.clone()).collect();
        for e in parsed {
            self.register(e);
        }
        Ok(names)
    }

    pub fn load_file(&mut self, path: &std::path::Path) -> Result<Vec<String>> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Schema { path: path.display().to_string(), msg: e.to_string() })?;
        self.load_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Rational;

    #[test]
    fn bn_13_1_7() {
        let c: DivisorClass<Rational> = bn_class(13, 1, 7).unwrap();
        assert_eq!(c.exact(&GeneratorId::Lambda), Some(q(48, 1)));
        assert_eq!(c.exact(&GeneratorId::Delta0), Some(q(-7, 1)));
        assert_eq!(c.exact(&GeneratorId::delta_i(1)), Some(q(-36, 1)));
    }

    #[test]
    fn bn_17_1_9() {
        let c: DivisorClass<Rational> = bn_class(17, 1, 9).unwrap();
        assert!(c.to_string().starts_with("20*lambda - 3*d0 - 16*d{1,{}} - 30*d{2,{}}"));
    }

    #[test]
    fn bn_26_2_19_is_primitive_at_scale_two() {
        // 29λ − (9/2)δ₀ − 25δ₁ …; δ_i coefficients i(26−i) are all even
        let c: DivisorClass<Rational> = bn_class(26, 2, 19).unwrap();
        assert_eq!(c.exact(&GeneratorId::Lambda), Some(q(58, 1)));
        assert_eq!(c.exact(&GeneratorId::Delta0), Some(q(-9, 1)));
        assert_eq!(c.exact(&GeneratorId::delta_i(1)), Some(q(-50, 1)));
    }

    #[test]
    fn rho_must_be_minus_one() {
        assert!(matches!(bn_class::<Rational>(13, 1, 8), Err(Error::NotADivisor(_))));
    }

    #[test]
    fn shipped_entries() {
        let cat = Catalog::<Rational>::builtin();
        let z16 = cat.entry("Z_16_1").unwrap();
        assert_eq!(z16.class.exact(&GeneratorId::Lambda), Some(q(407, 1)));
        assert!(z16.unknown.contains(&GeneratorId::delta_i(1)));
        assert!(z16.exact_class().is_err());
        let u = cat.entry("U_14_4").unwrap();
        assert_eq!(u.class.coeff(&GeneratorId::split(1, MarkSet::empty(), 14)), CoeffBound::AtLeast(q(100, 1)));
        assert!(u.unknown.contains(&GeneratorId::Delta0DoublePrime));
        let gp = cat.entry("GP_5_18_20").unwrap();
        assert_eq!(gp.class.exact(&GeneratorId::delta_i(1)), Some(q(-408, 1)));
        assert!(matches!(cat.entry("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn json_round_trip() {
        let cat = Catalog::<Rational>::builtin();
        for e in cat.entries() {
            let back = CatalogEntry::<Rational>::from_json(&e.to_json(), "$").unwrap();
            assert_eq!(&back, e);
        }
    }

    #[test]
    fn load_with_bound() {
        let mut cat = Catalog::<Rational>::empty();
        let text = r#"{"name": "X", "space": {"family": "PrymCurves", "g": 5},
            "coeffs": {"lambda": "7", "d0p": "-1", "d{1,{}}": {"atLeast": "100"}, "d0pp": "unknown"},
            "provenance": "test"}"#;
        assert_eq!(cat.load_json(text).unwrap(), vec!["X".to_string()]);
        let x = cat.entry("X").unwrap();
        assert_eq!(x.class.coeff(&GeneratorId::delta_i(1)), CoeffBound::AtLeast(q(100, 1)));
    }

    #[test]
    fn load_rejects_foreign_generator() {
        let mut cat = Catalog::<Rational>::empty();
        let text = r#"[{"name": "X", "space": {"family": "PrymCurves", "g": 5}, "coeffs": {"dO{1}": "1"}, "provenance": ""}]"#;
        let e = cat.load_json(text).unwrap_err();
        assert!(matches!(&e, Error::Schema { path, .. } if path == "$[0].coeffs.dO{1}"), "{e}");
        assert!(e.to_string().contains("dO{1}"));
    }

    #[test]
    fn load_rejects_non_primitive() {
        let mut cat = Catalog::<Rational>::empty();
        let text = r#"{"name": "X", "space": {"family": "PointedCurves", "g": 5, "n": 0}, "coeffs": {"lambda": "4", "d0": "-2"}}"#;
        assert!(cat.load_json(text).is_err());
    }
}
