//! Pullback maps between Picard groups, stored generator by generator.
//!
//! A [`PullbackMap`] goes from the Picard group of `source` to that of
//! `target`; geometrically it is the pullback along a map `target → source`.

use std::collections::BTreeMap;

use crate::class::DivisorClass;
use crate::error::{Error, Result};
use crate::scalar::{q, z, Scalar};
use crate::space::{Family, GeneratorId, MarkSet, SpaceId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackMap<T> {
    name: String,
    source: SpaceId,
    target: SpaceId,
    rules: BTreeMap<GeneratorId, DivisorClass<T>>,
    /// Source generators left out of the domain by a composition, with the
    /// generator that had no rule further down.
    escapes: BTreeMap<GeneratorId, String>,
}

impl<T: Scalar> PullbackMap<T> {
    fn empty(name: String, source: SpaceId, target: SpaceId) -> Self {
        PullbackMap { name, source, target, rules: BTreeMap::new(), escapes: BTreeMap::new() }
    }

    fn set(&mut self, gen: GeneratorId, terms: Vec<(GeneratorId, T)>) -> Result<()> {
        let key = self.source.canonicalize(&gen)?;
        let img = DivisorClass::from_terms(self.target, terms)?;
        self.rules.insert(key, img);
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> SpaceId {
        self.source
    }

    pub fn target(&self) -> SpaceId {
        self.target
    }

    pub fn rules(&self) -> &BTreeMap<GeneratorId, DivisorClass<T>> {
        &self.rules
    }

    pub fn rule(&self, gen: &GeneratorId) -> Option<&DivisorClass<T>> {
        self.source.canonicalize(gen).ok().and_then(|g| self.rules.get(&g))
    }

    pub fn in_domain(&self, gen: &GeneratorId) -> bool {
        self.rule(gen).is_some()
    }

    pub fn identity(space: SpaceId) -> Self {
        let mut m = PullbackMap::empty(format!("id:{space}"), space, space);
        for g in space.generators() {
            m.set(g.clone(), vec![(g, T::one())]).expect("inventory generators are valid");
        }
        m
    }

    /// Applies the map. Fails loudly on any generator outside the domain.
    pub fn apply(&self, cls: &DivisorClass<T>) -> Result<DivisorClass<T>> {
        if cls.space() != self.source {
            return Err(Error::SpaceMismatch { left: cls.space().to_string(), right: self.source.to_string() });
        }
        let mut out = DivisorClass::zero(self.target);
        for (gen, b) in cls.iter() {
            let Some(img) = self.rules.get(gen) else {
                let detail = match self.escapes.get(gen) {
                    Some(why) => format!(" ({why})"),
                    None => String::new(),
                };
                return Err(Error::OutOfDomain { map: self.name.clone(), gen: gen.to_string(), detail });
            };
            for (tg, tb) in img.iter() {
                let Some(r) = tb.exact() else {
                    return Err(Error::Inexact { gen: tg.to_string(), context: format!("rule of {} for {gen}", self.name) });
                };
                out.add_bound(tg, b.scale(r))?;
            }
        }
        Ok(out)
    }

    /// `outer ∘ inner` in pullback order: first `inner`, then `outer`.
    /// Generators whose image under `inner` leaves the domain of `outer`
    /// drop out of the domain and are reported by name on application.
    pub fn compose(outer: &PullbackMap<T>, inner: &PullbackMap<T>) -> Result<PullbackMap<T>> {
        if inner.target != outer.source {
            return Err(Error::SpaceMismatch { left: inner.target.to_string(), right: outer.source.to_string() });
        }
        let mut m = PullbackMap::empty(format!("{}∘{}", outer.name, inner.name), inner.source, outer.target);
        for (gen, img) in &inner.rules {
            match outer.apply(img) {
                Ok(c) => {
                    m.rules.insert(gen.clone(), c);
                }
                Err(Error::OutOfDomain { map, gen: missing, .. }) => {
                    m.escapes.insert(gen.clone(), format!("its image under {} needs {missing}, outside {map}", inner.name));
                }
                Err(e) => return Err(e),
            }
        }
        for (gen, why) in &inner.escapes {
            m.escapes.insert(gen.clone(), why.clone());
        }
        Ok(m)
    }

    /// Builds a map from its CLI name, e.g. `i_star:16∘pi_star:17`.
    pub fn by_name(expr: &str) -> Result<PullbackMap<T>> {
        let parts: Vec<&str> = expr.split('∘').map(str::trim).collect();
        let mut maps = parts.iter().map(|p| named_map(p)).collect::<Result<Vec<_>>>()?;
        let mut acc = maps.pop().ok_or_else(|| Error::Parameter("empty map expression".into()))?;
        while let Some(outer) = maps.pop() {
            acc = PullbackMap::compose(&outer, &acc)?;
        }
        Ok(acc)
    }
}

fn named_map<T: Scalar>(part: &str) -> Result<PullbackMap<T>> {
    let (head, args) = part.split_once(':').ok_or_else(|| Error::Parameter(format!("map '{part}' needs parameters")))?;
    let nums: Vec<u32> = args
        .split(',')
        .map(|a| a.trim().parse::<u32>().map_err(|_| Error::Parameter(format!("bad map parameter '{a}' in '{part}'"))))
        .collect::<Result<_>>()?;
    let want = |k: usize| -> Result<()> {
        if nums.len() == k {
            Ok(())
        } else {
            Err(Error::Parameter(format!("map {head} takes {k} parameter(s)")))
        }
    };
    match head {
        "i_star" => want(1).and_then(|_| i_star(nums[0])),
        "pi_star_g2" => want(1).and_then(|_| pi_star_g2(nums[0])),
        "pi_star" => want(1).and_then(|_| pi_star(nums[0])),
        "chi_star_g2" => want(1).and_then(|_| chi_star_g2(nums[0])),
        "chi_star_pointed" => want(1).and_then(|_| chi_star_pointed(nums[0])),
        "forget_mod2" => want(1).and_then(|_| forget_mod2(nums[0])),
        "pi_forget" => want(2).and_then(|_| pi_forget(nums[0], nums[1])),
        "pi1" => want(4).and_then(|_| pi1(nums[0], nums[1], nums[2], nums[3])),
        "pi2" => want(4).and_then(|_| pi2(nums[0], nums[1], nums[2], nums[3])),
        "pi3" => want(4).and_then(|_| pi3(nums[0], nums[1], nums[2], nums[3])),
        "glue" => want(4).and_then(|_| glue(nums[0], nums[1], nums[2], nums[3])),
        _ => Err(Error::Parameter(format!("unknown map '{head}'"))),
    }
}

/// Distinct canonical generators among `gens`, each once.
fn distinct(space: SpaceId, gens: &[GeneratorId]) -> Result<Vec<GeneratorId>> {
    let mut out: Vec<GeneratorId> = Vec::new();
    for g in gens {
        let c = space.canonicalize(g)?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

fn ones<T: Scalar>(gens: Vec<GeneratorId>) -> Vec<(GeneratorId, T)> {
    gens.into_iter().map(|g| (g, T::one())).collect()
}

/// `i*` for the map `R̄_{g,2} → R̄_{g+1}` gluing the two marked points.
pub fn i_star<T: Scalar>(g: u32) -> Result<PullbackMap<T>> {
    use GeneratorId::*;
    let src = SpaceId::prym_curves(g + 1)?;
    let tgt = SpaceId::branched_prym2(g)?;
    let mut m = PullbackMap::empty(format!("i_star:{g}"), src, tgt);
    m.set(Lambda, vec![(Lambda, T::one())])?;
    m.set(Delta0Prime, vec![(Delta0Prime, T::one())])?;
    m.set(Delta0DoublePrime, vec![])?;
    let mut ram = vec![(PsiTotal, q(-1, 2)), (Delta0Ram, T::one())];
    ram.extend((1..=g / 2).map(|j| (GeneratorId::unordered(j, g), T::one())));
    m.set(Delta0Ram, ram)?;
    for i in 1..=g {
        m.set(GeneratorId::delta_i(i), vec![(GeneratorId::d_o(i - 1), T::one())])?;
    }
    for i in 1..=g.div_ceil(2) {
        let img = distinct(tgt, &[GeneratorId::d_eta(i - 1), GeneratorId::d_eta(g - i)])?;
        m.set(GeneratorId::split(i, MarkSet::empty(), g + 1), ones(img))?;
    }
    Ok(m)
}

/// `π_{g,2}*` for `R̄_{g,2} → M̄_{g,2}/Z₂`.
pub fn pi_star_g2<T: Scalar>(g: u32) -> Result<PullbackMap<T>> {
    use GeneratorId::*;
    let src = SpaceId::pointed_curves_mod2(g)?;
    let tgt = SpaceId::branched_prym2(g)?;
    let mut m = PullbackMap::empty(format!("pi_star_g2:{g}"), src, tgt);
    m.set(Lambda, vec![(Lambda, T::one())])?;
    m.set(PsiTotal, vec![(PsiTotal, T::one())])?;
    m.set(Delta0, vec![(Delta0Prime, T::one()), (Delta0Ram, z(2))])?;
    for gen in src.generators() {
        let Delta { i, s } = gen else { continue };
        let img = if s.len() == 1 {
            vec![(GeneratorId::unordered(i, g), z(2))]
        } else {
            // δ_{i,∅} ≡ δ_{g−i,{1,2}}: the points sit on the other side
            let k = if s.is_empty() { g - i } else { i };
            vec![(GeneratorId::d_o(k), T::one()), (GeneratorId::d_eta(k), T::one())]
        };
        m.set(gen, img)?;
    }
    Ok(m)
}

/// Pullback along `M̄_{g,2}/Z₂ → M̄_g`, forgetting both points.
pub fn forget_mod2<T: Scalar>(g: u32) -> Result<PullbackMap<T>> {
    use GeneratorId::*;
    let src = SpaceId::pointed_curves(g, 0)?;
    let tgt = SpaceId::pointed_curves_mod2(g)?;
    let mut m = PullbackMap::empty(format!("forget_mod2:{g}"), src, tgt);
    m.set(Lambda, vec![(Lambda, T::one())])?;
    m.set(Delta0, vec![(Delta0, T::one())])?;
    let both = MarkSet::from_marks(&[1, 2]);
    for i in 1..=g / 2 {
        let img = distinct(
            tgt,
            &[GeneratorId::delta(i, both), GeneratorId::delta(g - i, both), GeneratorId::delta(i, MarkSet::single(1))],
        )?;
        m.set(GeneratorId::delta_i(i), ones(img))?;
    }
    Ok(m)
}

/// `π_g*` for `R̄_g → M̄_g`.
pub fn pi_star<T: Scalar>(g: u32) -> Result<PullbackMap<T>> {
    use GeneratorId::*;
    let src = SpaceId::pointed_curves(g, 0)?;
    let tgt = SpaceId::prym_curves(g)?;
    let mut m = PullbackMap::empty(format!("pi_star:{g}"), src, tgt);
    m.set(Lambda, vec![(Lambda, T::one())])?;
    m.set(Delta0, vec![(Delta0Prime, T::one()), (Delta0DoublePrime, T::one()), (Delta0Ram, z(2))])?;
    for i in 1..=g / 2 {
        let img = distinct(
            tgt,
            &[GeneratorId::delta_i(i), GeneratorId::delta_i(g - i), GeneratorId::split(i, MarkSet::empty(), g)],
        )?;
        m.set(GeneratorId::delta_i(i), ones(img))?;
    }
    Ok(m)
}

fn chi_lambda_delta0<T: Scalar>(m: &mut PullbackMap<T>, g: u32) -> Result<()> {
    use GeneratorId::*;
    let mut lam = vec![(Lambda, z(2)), (Delta0Ram, q(-1, 4)), (PsiTotal, q(1, 8))];
    lam.extend((1..=g / 2).map(|j| (GeneratorId::unordered(j, g), q(-1, 4))));
    m.set(Lambda, lam)?;
    let mut d0 = vec![(Delta0Ram, T::one()), (Delta0Prime, z(2))];
    d0.extend((0..g).map(|k| (GeneratorId::d_eta(k), z(2))));
    m.set(Delta0, d0)
}

/// `χ*_{g,2}` for `R̄_{g,2} → M̄_{2g}`, sending a Prym curve to its
/// branched double cover.
pub fn chi_star_g2<T: Scalar>(g: u32) -> Result<PullbackMap<T>> {
    let src = SpaceId::pointed_curves(2 * g, 0)?;
    let tgt = SpaceId::branched_prym2(g)?;
    let mut m = PullbackMap::empty(format!("chi_star_g2:{g}"), src, tgt);
    chi_lambda_delta0(&mut m, g)?;
    for i in 1..=g {
        let mut img = vec![(GeneratorId::d_o(g - i), z(2))];
        if i % 2 == 0 {
            img.push((GeneratorId::unordered(i / 2, g), T::one()));
        }
        m.set(GeneratorId::delta_i(i), img)?;
    }
    Ok(m)
}

/// `χ*` for `R̄_{g,2} → M̄_{2g,2}/Z₂`. `ψ` has no rule.
///
/// `δ_{g,∅}` and `δ_{g,{1,2}}` are one divisor; it follows the `δ_{i,∅}`
/// rule, which is what composing with [`forget_mod2`] requires.
pub fn chi_star_pointed<T: Scalar>(g: u32) -> Result<PullbackMap<T>> {
    use GeneratorId::*;
    let src = SpaceId::pointed_curves_mod2(2 * g)?;
    let tgt = SpaceId::branched_prym2(g)?;
    let mut m = PullbackMap::empty(format!("chi_star_pointed:{g}"), src, tgt);
    chi_lambda_delta0(&mut m, g)?;
    for gen in src.generators() {
        let Delta { i, s } = gen else { continue };
        let img = match s.len() {
            1 if i % 2 == 0 => vec![(GeneratorId::unordered(i / 2, g), T::one())],
            1 => vec![],
            0 => vec![(GeneratorId::d_o(g - i), z(2))],
            _ if i == g => vec![(GeneratorId::d_o(0), z(2))],
            _ => vec![],
        };
        m.set(gen, img)?;
    }
    Ok(m)
}

/// Pullback along the forgetful map `C^nR̄_g → M̄_{g,n}`.
pub fn pi_forget<T: Scalar>(g: u32, n: u32) -> Result<PullbackMap<T>> {
    use GeneratorId::*;
    let src = SpaceId::pointed_curves(g, n)?;
    let tgt = SpaceId::pointed_prym(g, n)?;
    let mut m = PullbackMap::empty(format!("pi_forget:{g},{n}"), src, tgt);
    m.set(Lambda, vec![(Lambda, T::one())])?;
    for j in 1..=n {
        m.set(Psi(j), vec![(Psi(j), T::one())])?;
    }
    m.set(Delta0, vec![(Delta0Prime, T::one()), (Delta0DoublePrime, T::one()), (Delta0Ram, z(2))])?;
    for gen in src.generators() {
        let Delta { i, s } = gen else { continue };
        let c = s.complement(n);
        let mut lifts = Vec::new();
        for (a, sa) in [(i, s), (g - i, c)] {
            let cand = Delta { i: a, s: sa };
            if tgt.contains(&cand) {
                lifts.push(cand);
            }
        }
        if i >= 1 && i < g {
            lifts.push(GeneratorId::split(i, s, g));
        }
        m.set(gen, ones(distinct(tgt, &lifts)?))?;
    }
    Ok(m)
}

/// Shared bookkeeping for the gluing maps of a fixed `s + 1`-pointed
/// genus `i` tail onto the last `s` markings.
#[derive(Clone, Copy)]
struct Glue {
    n: u32,
    s: u32,
}

impl Glue {
    fn new(g: u32, i: u32, n: u32, s: u32) -> Result<Glue> {
        if !(1 <= s && s <= n && 1 <= i && i < g) {
            return Err(Error::Parameter(format!("need 1 ≤ s ≤ n and 1 ≤ i ≤ g−1, got g={g} i={i} n={n} s={s}")));
        }
        Ok(Glue { n, s })
    }

    fn t(&self) -> MarkSet {
        MarkSet::range(self.n - self.s + 1, self.n)
    }

    fn x(&self) -> u32 {
        self.n - self.s + 1
    }

    fn n_target(&self) -> u32 {
        self.n - self.s + 1
    }

    /// `(S∖T) ∪ {x}`.
    fn reduce(&self, s: MarkSet) -> MarkSet {
        s.minus(self.t()).union(MarkSet::single(self.x()))
    }

    fn psi_rules<T: Scalar>(&self, m: &mut PullbackMap<T>) -> Result<()> {
        for j in 1..=self.n {
            let img = if j <= self.n - self.s { vec![(GeneratorId::Psi(j), T::one())] } else { vec![] };
            m.set(GeneratorId::Psi(j), img)?;
        }
        Ok(())
    }

    fn minus_psi_x<T: Scalar>(&self) -> Vec<(GeneratorId, T)> {
        vec![(GeneratorId::Psi(self.x()), -T::one())]
    }
}

/// `π₁*` for `M̄_{g−i,n+1−s} → C^nR̄_g`, Prym structure trivial on the
/// moving part.
pub fn pi1<T: Scalar>(g: u32, i: u32, n: u32, s: u32) -> Result<PullbackMap<T>> {
    use GeneratorId::*;
    let gl = Glue::new(g, i, n, s)?;
    let src = SpaceId::pointed_prym(g, n)?;
    let tgt = SpaceId::pointed_curves(g - i, gl.n_target())?;
    let mut m = PullbackMap::empty(format!("pi1:{g},{i},{n},{s}"), src, tgt);
    m.set(Lambda, vec![(Lambda, T::one())])?;
    m.set(Delta0Prime, vec![(Delta0, T::one())])?;
    m.set(Delta0DoublePrime, vec![])?;
    m.set(Delta0Ram, vec![])?;
    gl.psi_rules(&mut m)?;
    let t = gl.t();
    for gen in src.generators() {
        let img = match gen {
            Split { .. } => vec![],
            Delta { i: j, s: sj } if j == i && sj == t => gl.minus_psi_x(),
            Delta { i: j, s: sj } if j >= i && t.is_subset(sj) => {
                vec![(Delta { i: j - i, s: gl.reduce(sj) }, T::one())]
            }
            Delta { .. } => vec![],
            _ => continue,
        };
        m.set(gen, img)?;
    }
    Ok(m)
}

/// The representation of a split divisor whose set contains `T`.
fn split_rep_containing(g: u32, n: u32, j: u32, sj: MarkSet, t: MarkSet) -> Option<(u32, MarkSet)> {
    if t.is_subset(sj) {
        Some((j, sj))
    } else if t.is_subset(sj.complement(n)) {
        Some((g - j, sj.complement(n)))
    } else {
        None
    }
}

/// `π₂*` for `C^{n−s+1}R̄_{g−i} → C^nR̄_g`, Prym structure nontrivial on
/// the fixed tail.
pub fn pi2<T: Scalar>(g: u32, i: u32, n: u32, s: u32) -> Result<PullbackMap<T>> {
    use GeneratorId::*;
    let gl = Glue::new(g, i, n, s)?;
    let src = SpaceId::pointed_prym(g, n)?;
    let (g2, n2) = (g - i, gl.n_target());
    let tgt = SpaceId::pointed_prym(g2, n2)?;
    let mut m = PullbackMap::empty(format!("pi2:{g},{i},{n},{s}"), src, tgt);
    m.set(Lambda, vec![(Lambda, T::one())])?;
    m.set(Delta0Prime, vec![(Delta0Prime, T::one()), (Delta0DoublePrime, T::one())])?;
    m.set(Delta0DoublePrime, vec![])?;
    m.set(Delta0Ram, vec![(Delta0Ram, T::one())])?;
    gl.psi_rules(&mut m)?;
    let t = gl.t();
    for gen in src.generators() {
        let img = match gen {
            Delta { i: j, s: sj } if j > i && t.is_subset(sj) => vec![(Delta { i: j - i, s: gl.reduce(sj) }, T::one())],
            Delta { .. } => vec![],
            Split { i: j0, s: s0, .. } => match split_rep_containing(g, n, j0, s0, t) {
                Some((j, sj)) if j == i && sj == t => gl.minus_psi_x(),
                Some((j, sj)) if j >= i && j < g => {
                    let r = gl.reduce(sj);
                    let mut img = vec![(Delta { i: g - j, s: r.complement(n2) }, T::one())];
                    // δ_{0,S:g} := 0
                    if j > i {
                        img.push((GeneratorId::split(j - i, r, g2), T::one()));
                    }
                    img
                }
                _ => vec![],
            },
            _ => continue,
        };
        m.set(gen, img)?;
    }
    Ok(m)
}

/// `π₃*` for `C^{n−s+1}R̄_{g−i} → C^nR̄_g`, Prym structure trivial on the
/// fixed tail.
pub fn pi3<T: Scalar>(g: u32, i: u32, n: u32, s: u32) -> Result<PullbackMap<T>> {
    use GeneratorId::*;
    let gl = Glue::new(g, i, n, s)?;
    let src = SpaceId::pointed_prym(g, n)?;
    let (g2, n2) = (g - i, gl.n_target());
    let tgt = SpaceId::pointed_prym(g2, n2)?;
    let mut m = PullbackMap::empty(format!("pi3:{g},{i},{n},{s}"), src, tgt);
    m.set(Lambda, vec![(Lambda, T::one())])?;
    m.set(Delta0Prime, vec![(Delta0Prime, T::one())])?;
    m.set(Delta0DoublePrime, vec![(Delta0DoublePrime, T::one())])?;
    m.set(Delta0Ram, vec![(Delta0Ram, T::one())])?;
    gl.psi_rules(&mut m)?;
    let t = gl.t();
    let tc = t.complement(n);
    for gen in src.generators() {
        let img = match gen {
            Delta { i: j, s: sj } if j > i && t.is_subset(sj) => vec![(Delta { i: j - i, s: gl.reduce(sj) }, T::one())],
            Delta { i: j, s: sj } if j == g - i && sj == tc => gl.minus_psi_x(),
            Delta { i: j, s: sj } if i + j <= g && sj.is_disjoint(t) => vec![(Delta { i: j, s: sj }, T::one())],
            Delta { .. } => vec![],
            // one rule per divisor: the representation holding the tail
            Split { i: j0, s: s0, .. } => match split_rep_containing(g, n, j0, s0, t) {
                Some((j, sj)) if j > i && j < g => vec![(GeneratorId::split(j - i, gl.reduce(sj), g2), T::one())],
                _ => vec![],
            },
            _ => continue,
        };
        m.set(gen, img)?;
    }
    Ok(m)
}

/// The standard pullback along `M̄_{g−i,n+1−s} → M̄_{g,n}` attaching a fixed
/// genus `i` tail carrying the last `s` markings.
pub fn glue<T: Scalar>(g: u32, i: u32, n: u32, s: u32) -> Result<PullbackMap<T>> {
    use GeneratorId::*;
    let gl = Glue::new(g, i, n, s)?;
    let src = SpaceId::pointed_curves(g, n)?;
    let tgt = SpaceId::pointed_curves(g - i, gl.n_target())?;
    let mut m = PullbackMap::empty(format!("glue:{g},{i},{n},{s}"), src, tgt);
    m.set(Lambda, vec![(Lambda, T::one())])?;
    m.set(Delta0, vec![(Delta0, T::one())])?;
    gl.psi_rules(&mut m)?;
    let t = gl.t();
    for gen in src.generators() {
        let Delta { i: j0, s: s0 } = gen else { continue };
        let rep = [(j0, s0), (g - j0, s0.complement(n))].into_iter().find(|(j, sj)| *j >= i && t.is_subset(*sj));
        let img = match rep {
            Some((j, sj)) if j == i && sj == t => gl.minus_psi_x(),
            Some((j, sj)) => vec![(Delta { i: j - i, s: gl.reduce(sj) }, T::one())],
            None => vec![],
        };
        m.set(gen, img)?;
    }
    Ok(m)
}

/// Sum of all boundary generators, each with coefficient 1.
pub fn total_boundary<T: Scalar>(space: SpaceId) -> DivisorClass<T> {
    let terms = space.generators().into_iter().filter(GeneratorId::is_boundary).map(|g| (g, T::one()));
    DivisorClass::from_terms(space, terms).expect("inventory generators are valid")
}

/// `κ₁ = 12λ − δ` on `M̄_g`, and `12λ − π*_{g,2}δ` on `R̄_{g,2}`.
pub fn kappa1<T: Scalar>(space: SpaceId) -> Result<DivisorClass<T>> {
    let g = space.g();
    let delta = match space.family() {
        Family::PointedCurves if space.n() == 0 => total_boundary(space),
        Family::BranchedPrym2 => pi_star_g2(g)?.apply(&total_boundary(SpaceId::pointed_curves_mod2(g)?))?,
        _ => return Err(Error::Parameter(format!("kappa1 is only provided on M̄_g and R̄_g,2, not {space}"))),
    };
    DivisorClass::generator(space, &GeneratorId::Lambda)?.scale(&z(12)).sub(&delta)
}

/// The canonical class of `M̄_{g,2}/Z₂` or `R̄_{g,2}`.
pub fn canonical_class<T: Scalar>(space: SpaceId) -> Result<DivisorClass<T>> {
    use GeneratorId::*;
    let g = space.g();
    let mut k = total_boundary::<T>(space).scale(&z(-2));
    k.add_exact(&PsiTotal, T::one())?;
    k.add_exact(&Lambda, z(13))?;
    match space.family() {
        Family::PointedCurvesMod2 => {
            k.add_exact(&GeneratorId::delta(0, MarkSet::from_marks(&[1, 2])), -T::one())?;
            k.add_exact(&GeneratorId::delta(1, MarkSet::empty()), -T::one())?;
        }
        Family::BranchedPrym2 => {
            k.add_exact(&Delta0Ram, -T::one())?;
            for gen in [GeneratorId::d_o(0), GeneratorId::d_eta(0), GeneratorId::d_o(g - 1), GeneratorId::d_eta(g - 1)] {
                k.add_exact(&gen, -T::one())?;
            }
            for j in 1..=g / 2 {
                k.add_exact(&GeneratorId::unordered(j, g), z(-2))?;
            }
        }
        _ => return Err(Error::Parameter(format!("no canonical class formula for {space}"))),
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_class;
    use crate::Rational;

    fn cls(text: &str, sp: SpaceId) -> DivisorClass<Rational> {
        parse_class(text, sp).unwrap()
    }

    #[test]
    fn i_star_rules() {
        let m = i_star::<Rational>(6).unwrap();
        let r7 = SpaceId::prym_curves(7).unwrap();
        let b6 = SpaceId::branched_prym2(6).unwrap();
        assert!(m.apply(&cls("d0pp", r7)).unwrap().is_zero());
        assert_eq!(m.apply(&cls("d0ram", r7)).unwrap(), cls("-1/2*psi + d0ram + d{1,{}:5} + d{2,{}:4} + d{3,{}:3}", b6));
        assert_eq!(m.apply(&cls("d{3,{}:4}", r7)).unwrap(), cls("dEta{2} + dEta{3}", b6));
        assert_eq!(m.apply(&cls("d{1,{}}", r7)).unwrap(), cls("dO{0}", b6));
    }

    #[test]
    fn pi_star_g2_on_delta0() {
        let m = pi_star_g2::<Rational>(13).unwrap();
        let src = SpaceId::pointed_curves_mod2(13).unwrap();
        let out = m.apply(&cls("-7/3*d0", src)).unwrap();
        assert_eq!(out, cls("-7/3*d0p - 14/3*d0ram", SpaceId::branched_prym2(13).unwrap()));
        let out = m.apply(&cls("d{4,{1}}", src)).unwrap();
        assert_eq!(out.to_string(), "2*d{4,{}:9}");
    }

    #[test]
    fn chi_star_odd_delta() {
        let m = chi_star_g2::<Rational>(7).unwrap();
        let out = m.apply(&cls("d{3,{}}", SpaceId::pointed_curves(14, 0).unwrap())).unwrap();
        assert_eq!(out.to_string(), "2*dO{4}");
    }

    #[test]
    fn chi_pointed_rules() {
        let m = chi_star_pointed::<Rational>(6).unwrap();
        let src = SpaceId::pointed_curves_mod2(12).unwrap();
        assert_eq!(m.apply(&cls("d{4,{1}}", src)).unwrap().to_string(), "d{2,{}:4}");
        assert!(m.apply(&cls("d{3,{1}}", src)).unwrap().is_zero());
        assert!(m.apply(&cls("d{2,{1,2}}", src)).unwrap().is_zero());
        assert!(matches!(m.apply(&cls("psi", src)), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn pointed_chi_after_forgetting_is_chi() {
        for g in 2..9 {
            let c = PullbackMap::compose(&chi_star_pointed::<Rational>(g).unwrap(), &forget_mod2(2 * g).unwrap()).unwrap();
            assert_eq!(c.rules(), chi_star_g2::<Rational>(g).unwrap().rules(), "g={g}");
        }
    }

    #[test]
    fn composition_with_identity() {
        let m = i_star::<Rational>(5).unwrap();
        let left = PullbackMap::compose(&PullbackMap::identity(m.target()), &m).unwrap();
        let right = PullbackMap::compose(&m, &PullbackMap::identity(m.source())).unwrap();
        assert_eq!(left.rules(), m.rules());
        assert_eq!(right.rules(), m.rules());
    }

    #[test]
    fn composing_mismatched_spaces_fails() {
        let a = i_star::<Rational>(5).unwrap();
        let b = pi_star::<Rational>(9).unwrap();
        assert!(matches!(PullbackMap::compose(&a, &b), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn escaped_generators_are_named() {
        // χ* of the pointed space has no rule for ψ
        let m = PullbackMap::<Rational>::by_name("chi_star_pointed:4∘id").err();
        assert!(m.is_some());
        let chi = chi_star_pointed::<Rational>(4).unwrap();
        let id = PullbackMap::identity(chi.source());
        let c = PullbackMap::compose(&chi, &id).unwrap();
        let e = c.apply(&cls("psi", chi.source())).unwrap_err();
        assert!(e.to_string().contains("psi"), "{e}");
        assert!(e.to_string().contains("needs psi"), "{e}");
    }

    #[test]
    fn pi_one_self_intersection() {
        let m = pi1::<Rational>(5, 2, 3, 2).unwrap();
        let src = SpaceId::pointed_prym(5, 3).unwrap();
        assert_eq!(m.apply(&cls("d{2,{2,3}}", src)).unwrap().to_string(), "-psi[2]");
        assert_eq!(m.apply(&cls("d0p", src)).unwrap().to_string(), "d0");
        assert!(m.apply(&cls("d{1,{1}:4}", src)).unwrap().is_zero());
    }

    #[test]
    fn pi_two_and_three_special_cases() {
        let src = SpaceId::pointed_prym(5, 3).unwrap();
        let p2 = pi2::<Rational>(5, 2, 3, 2).unwrap();
        assert_eq!(p2.apply(&cls("d0p", src)).unwrap().to_string(), "d0p + d0pp");
        assert_eq!(p2.apply(&cls("d{2,{2,3}:3}", src)).unwrap().to_string(), "-psi[2]");
        let p3 = pi3::<Rational>(5, 2, 3, 2).unwrap();
        assert_eq!(p3.apply(&cls("d{3,{1}}", src)).unwrap().to_string(), "-psi[2]");
    }

    #[test]
    fn kappa_one_on_small_spaces() {
        let k: DivisorClass<Rational> = kappa1(SpaceId::pointed_curves(4, 0).unwrap()).unwrap();
        assert_eq!(k.to_string(), "12*lambda - d0 - d{1,{}} - d{2,{}}");
        let kb: DivisorClass<Rational> = kappa1(SpaceId::branched_prym2(3).unwrap()).unwrap();
        assert_eq!(kb.exact(&GeneratorId::Lambda), Some(q(12, 1)));
        assert_eq!(kb.exact(&GeneratorId::Delta0Ram), Some(q(-2, 1)));
        assert_eq!(kb.exact(&GeneratorId::unordered(1, 3)), Some(q(-2, 1)));
    }

    #[test]
    fn canonical_class_branched() {
        let sp = SpaceId::branched_prym2(13).unwrap();
        let k: DivisorClass<Rational> = canonical_class(sp).unwrap();
        assert_eq!(k.exact(&GeneratorId::Delta0Prime), Some(q(-2, 1)));
        assert_eq!(k.exact(&GeneratorId::Delta0Ram), Some(q(-3, 1)));
        assert_eq!(k.exact(&GeneratorId::unordered(1, 13)), Some(q(-4, 1)));
        assert_eq!(k.exact(&GeneratorId::d_eta(0)), Some(q(-3, 1)));
        assert_eq!(k.exact(&GeneratorId::d_o(5)), Some(q(-2, 1)));
        let km: DivisorClass<Rational> = canonical_class(SpaceId::pointed_curves_mod2(13).unwrap()).unwrap();
        assert_eq!(km.exact(&GeneratorId::Lambda), Some(q(13, 1)));
    }

    #[test]
    fn canonical_class_is_pullback_plus_ramification() {
        for g in 2..12 {
            let b = SpaceId::branched_prym2(g).unwrap();
            let m = SpaceId::pointed_curves_mod2(g).unwrap();
            let pulled = pi_star_g2::<Rational>(g).unwrap().apply(&canonical_class(m).unwrap()).unwrap();
            let expect = pulled.add(&cls("d0ram", b)).unwrap();
            assert_eq!(canonical_class::<Rational>(b).unwrap(), expect, "g={g}");
        }
    }
}
