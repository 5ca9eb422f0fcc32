mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;

use prymcalc::certificates::{bigness_certificate, verify_combination, Source, Term, Verdict};
use prymcalc::morphisms::{pi2, pi3};
use prymcalc::pd::{b_coefficient, pd_class, pd_class_from_sums, pd_interior_class, BoundaryKind, Partition};
use prymcalc::series::{binomial, count_report, vanishing_order_count};
use prymcalc::singularity::{
    age_lower_bound, age_table, is_noncanonical, star_admissible, ComponentDatum, CurveSketch, JSpecial, SketchComponent,
};
use prymcalc::test_curves::{intersect, test_curve, CurveKind};
use prymcalc::{format_class, parse_class, Bound, Class, GeneratorId, Map, MarkSet, Rational, SpaceId};

fn map_name() -> impl Strategy<Value = String> {
    (0usize..11, 2u32..=7, 1u32..=3, 1u32..=6, 1u32..=3).prop_filter_map("valid parameters", |(k, g, n, i, s)| {
        let glued = i < g && s <= n;
        let name = match k {
            0 => format!("i_star:{g}"),
            1 => format!("pi_star_g2:{g}"),
            2 => format!("pi_star:{g}"),
            3 => format!("chi_star_g2:{g}"),
            4 => format!("chi_star_pointed:{g}"),
            5 => format!("forget_mod2:{g}"),
            6 => format!("pi_forget:{g},{n}"),
            7 if glued => format!("pi1:{g},{i},{n},{s}"),
            8 if glued => format!("pi2:{g},{i},{n},{s}"),
            9 if glued => format!("pi3:{g},{i},{n},{s}"),
            10 if glued => format!("glue:{g},{i},{n},{s}"),
            _ => return None,
        };
        Map::by_name(&name).ok().map(|_| name)
    })
}

/// A map together with two exact classes in its domain and a scalar.
fn map_and_classes() -> impl Strategy<Value = (Map, Class, Class, Rational)> {
    map_name().prop_flat_map(|name| {
        let m = Map::by_name(&name).unwrap();
        let domain: Vec<GeneratorId> = m.rules().keys().cloned().collect();
        let src = m.source();
        (Just(m), exact_class_on(src, domain.clone()), exact_class_on(src, domain), rational())
    })
}

fn three_exact_classes() -> impl Strategy<Value = (Class, Class, Class, Rational, Rational)> {
    space().prop_flat_map(|s| (exact_class_in(s), exact_class_in(s), exact_class_in(s), rational(), rational()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_inverts_format(c in class()) {
        let text = format_class(&c);
        let back: Class = parse_class(&text, c.space()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(format_class(&back), text);
    }

    #[test]
    fn whitespace_is_insignificant(c in class()) {
        let spaced = format_class(&c).replace(' ', "  ").replace('*', " * ");
        prop_assert_eq!(parse_class::<Rational>(&spaced, c.space()).unwrap(), c);
    }

    #[test]
    fn operations_keep_storage_canonical((a, b, _, k, _) in three_exact_classes(), c in class()) {
        a.add(&b).unwrap().check_invariants().unwrap();
        a.scale(&k).check_invariants().unwrap();
        a.sub(&a).unwrap().check_invariants().unwrap();
        prop_assert!(a.sub(&a).unwrap().is_zero());
        c.check_invariants().unwrap();
    }

    #[test]
    fn linear_combination_laws((a, b, c, k, l) in three_exact_classes()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().scale(&k), a.scale(&k).add(&b.scale(&k)).unwrap());
        prop_assert_eq!(a.scale(&(k.clone() + l.clone())), a.scale(&k).add(&a.scale(&l)).unwrap());
        prop_assert_eq!(a.scale(&k).scale(&l), a.scale(&(k * l)));
    }

    #[test]
    fn pullbacks_are_linear((m, a, b, k) in map_and_classes()) {
        let lhs = m.apply(&a.add(&b.scale(&k)).unwrap()).unwrap();
        let rhs = m.apply(&a).unwrap().add(&m.apply(&b).unwrap().scale(&k)).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs.space(), m.target());
        lhs.check_invariants().unwrap();
    }

    #[test]
    fn out_of_domain_generators_are_named(name in map_name()) {
        let m = Map::by_name(&name).unwrap();
        for gen in m.source().generators() {
            if m.rule(&gen).is_none() {
                let cls = Class::generator(m.source(), &gen).unwrap();
                let err = m.apply(&cls).unwrap_err().to_string();
                prop_assert!(err.contains(&gen.to_string()), "{}", err);
            }
        }
    }

    #[test]
    fn bound_arithmetic_is_sound(a in bound(), b in bound(), s in nonnegative_rational(), t in nonnegative_rational(), k in rational()) {
        let (x, y) = (witness(&a, &s), witness(&b, &t));
        prop_assert!(contains(&(a.clone() + b.clone()), &(x.clone() + y.clone())));
        prop_assert!(contains(&a.scale(&k), &(k * x.clone())));
        prop_assert!(contains(&(-a.clone()), &(-x)));
        if a.is_exact() && b.is_exact() {
            prop_assert!((a + b).is_exact());
        }
    }

    #[test]
    fn split_coefficient_is_representation_invariant(d in partition()) {
        let (g, n) = (d.g(), d.n());
        for i in 1..g {
            for s in MarkSet::all_subsets(n) {
                let a: Rational = b_coefficient(BoundaryKind::Split, i, s, &d).unwrap();
                let b: Rational = b_coefficient(BoundaryKind::Split, g - i, s.complement(n), &d).unwrap();
                prop_assert_eq!(a, b, "i={} S={}", i, s);
            }
        }
    }

    #[test]
    fn pd_class_restricts_and_reconciles(d in partition()) {
        let c: Class = pd_class(&d).unwrap();
        prop_assert_eq!(c.interior(), pd_interior_class(&d).unwrap());
        prop_assert_eq!(&pd_class_from_sums::<Rational>(&d).unwrap(), &c);
        prop_assert_eq!(c.exact(&GeneratorId::Delta0Ram), Some(r(1, 4)));
        prop_assert!(c.coeff(&GeneratorId::Delta0Prime).is_zero());
        prop_assert!(c.coeff(&GeneratorId::Delta0DoublePrime).is_zero());
    }

    #[test]
    fn pd_pullback_interior_matches_induced_partition(d in partition(), s in 1u32..=4, i in 1u32..=6) {
        let (g, n) = (d.g(), d.n());
        prop_assume!(s <= n && i < g);
        let t = MarkSet::range(n - s + 1, n);
        let dt = d.weight(t) as u32;
        // the induced partition needs d_T − i ≥ 1
        prop_assume!(dt > i);
        let mut parts: Vec<u32> = d.parts()[..(n - s) as usize].to_vec();
        parts.push(dt - i);
        let induced = Partition::new(g - i, parts).unwrap();
        let want: Class = pd_interior_class(&induced).unwrap();
        let c: Class = pd_class(&d).unwrap();
        for m in [pi2::<Rational>(g, i, n, s).unwrap(), pi3::<Rational>(g, i, n, s).unwrap()] {
            prop_assert_eq!(&m.apply(&c).unwrap().interior(), &want, "{}", m.name());
        }
    }

    #[test]
    fn intersect_is_linear(i in 2u32..=9, odd in any::<bool>(), seed in any::<u64>(), k in rational()) {
        let kind = if odd { CurveKind::A1i } else { CurveKind::AEta };
        let curve = test_curve::<Rational>(kind, i).unwrap();
        let classes = sample_with_seed(exact_class_in(curve.space), seed);
        let (a, b) = (&classes[0], &classes[1]);
        let lhs = intersect(&curve, &a.add(&b.scale(&k)).unwrap()).unwrap();
        let rhs = intersect(&curve, a).unwrap() + intersect(&curve, b).unwrap().scale(&k);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn age_total_is_monotone(rows in proptest::collection::vec(0usize..17, 0..6), extra in 0usize..17) {
        let table = age_table::<Rational>();
        let comps: Vec<ComponentDatum> = rows.iter().map(|&k| table[k].0).collect();
        let before = star_admissible::<Rational>(&comps).unwrap();
        let mut more = comps.clone();
        more.push(table[extra].0);
        let after = star_admissible::<Rational>(&more).unwrap();
        prop_assert!(after.total >= before.total);
        prop_assert!(!after.admissible || before.admissible);
    }

    #[test]
    fn noncanonicity_only_sees_tails(tails in proptest::collection::vec((0u8..3, any::<bool>()), 0..4), h in 1u32..4) {
        let mut sketch = core_with_tails(&tails);
        let verdict = is_noncanonical(&sketch).unwrap();
        sketch.components.push(SketchComponent { id: "B".into(), genus: h, eta_trivial: true, marks: 0, j: JSpecial::None });
        sketch.nodes.push(("C".into(), "B".into()));
        sketch.nodes.push(("C".into(), "B".into()));
        prop_assert_eq!(is_noncanonical(&sketch).unwrap(), verdict);
        let expect = tails.iter().any(|&(j, triv)| j == 1 && triv);
        prop_assert_eq!(verdict, expect);
    }

    #[test]
    fn count_identities(g in 0u32..=120) {
        prop_assert!(count_report(g).identities_ok());
    }

    #[test]
    fn binomial_rows(n in 0i64..80, k in -3i64..85) {
        prop_assert_eq!(binomial(n, k), binomial(n, n - k));
        if n >= 1 {
            prop_assert_eq!(binomial(n, k), binomial(n - 1, k) + binomial(n - 1, k - 1));
        }
        if n >= 1 && (0..=n + 1).contains(&k) {
            let diff = binomial(n, k - 1) - binomial(n, k);
            prop_assert_eq!(vanishing_order_count(n as u32, k as u32), Rational::from_integer(diff));
        }
    }
}

fn sample_with_seed<S: Strategy>(s: S, seed: u64) -> Vec<S::Value> {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::from_seed(RngAlgorithm::ChaCha, &bytes));
    (0..2).map(|_| s.new_tree(&mut runner).unwrap().current()).collect()
}

/// A genus 2 core `C` with both markings and one genus 1 tail per entry:
/// `j` is 0 (none), 1 (j0) or 2 (j1728), plus the triviality flag.
fn core_with_tails(tails: &[(u8, bool)]) -> CurveSketch {
    let mut components = vec![SketchComponent { id: "C".into(), genus: 2, eta_trivial: false, marks: 2, j: JSpecial::None }];
    let mut nodes = Vec::new();
    for (k, &(j, triv)) in tails.iter().enumerate() {
        let j = [JSpecial::None, JSpecial::J0, JSpecial::J1728][j as usize];
        let id = format!("E{k}");
        components.push(SketchComponent { id: id.clone(), genus: 1, eta_trivial: triv, marks: 0, j });
        nodes.push(("C".to_string(), id));
    }
    CurveSketch { components, nodes }
}

/// Sources `D₁, D₂` on `R̄_{g,2}` with exact λ, ψ and boundary parts, and
/// a target built as `εψ + c₁D₁ + c₂D₂ + R` with `R ≥ 0` on the boundary.
fn certificate_instance() -> impl Strategy<Value = (Class, Vec<Source<Rational>>, Rational, Vec<Rational>)> {
    (3u32..=6).prop_flat_map(|g| {
        let sp = SpaceId::branched_prym2(g).unwrap();
        let boundary: Vec<GeneratorId> = sp.generators().into_iter().filter(GeneratorId::is_boundary).collect();
        let n = boundary.len();
        let source = move || (nonzero_rational(), nonzero_rational(), proptest::collection::vec((0..n, rational()), 0..6));
        (
            Just(sp),
            Just(boundary),
            source(),
            source(),
            (1i64..=20, 1i64..=8),
            proptest::collection::vec((1i64..=20, 1i64..=8), 2),
            proptest::collection::vec((0..n, nonnegative_rational()), 0..6),
        )
    })
    .prop_filter_map("solvable", |(sp, boundary, s1, s2, (en, ed), cs, res)| {
        let mk = |(l, p, rest): (Rational, Rational, Vec<(usize, Rational)>)| {
            let mut c = Class::from_terms(sp, [(GeneratorId::Lambda, l), (GeneratorId::PsiTotal, p)]).unwrap();
            for (k, v) in rest {
                c.add_exact(&boundary[k], v).unwrap();
            }
            c
        };
        let (d1, d2) = (mk(s1), mk(s2));
        let det = d1.exact(&GeneratorId::Lambda).unwrap() * d2.exact(&GeneratorId::PsiTotal).unwrap()
            - d1.exact(&GeneratorId::PsiTotal).unwrap() * d2.exact(&GeneratorId::Lambda).unwrap();
        if det.is_zero() {
            return None;
        }
        let eps = r(en, ed);
        let coeffs: Vec<Rational> = cs.into_iter().map(|(a, b)| r(a, b)).collect();
        let mut target = Class::generator(sp, &GeneratorId::PsiTotal).unwrap().scale(&eps);
        target = target.add_scaled(&coeffs[0], &d1).unwrap().add_scaled(&coeffs[1], &d2).unwrap();
        for (k, v) in res {
            target.add_exact(&boundary[k], v).unwrap();
        }
        Some((target, vec![Source::new("D1", d1), Source::new("D2", d2)], eps, coeffs))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn planted_certificates_verify((target, sources, eps, coeffs) in certificate_instance()) {
        let terms: Vec<Term<Rational>> =
            sources.iter().zip(&coeffs).map(|(s, c)| Term { source: s.clone(), coeff: c.clone() }).collect();
        prop_assert_eq!(verify_combination(&target, &terms, &eps).unwrap().verdict, Verdict::BigWitness);

        let pinned = [GeneratorId::Lambda, GeneratorId::PsiTotal];
        let report = bigness_certificate(&target, &sources, &pinned).unwrap();
        prop_assert_eq!(&report.verdict, &Verdict::BigWitness);
        let cert = report.certificate.as_ref().unwrap();
        let again = verify_combination(&target, &cert.terms, &cert.epsilon).unwrap();
        prop_assert!(again.verdict.at_least(&report.verdict));
    }

    #[test]
    fn strengthening_a_bound_never_weakens(
        (target, sources, eps, coeffs) in certificate_instance(),
        pick in any::<prop::sample::Index>(),
        m in nonnegative_rational(),
        extra in nonnegative_rational(),
    ) {
        let sp = target.space();
        let boundary: Vec<GeneratorId> = sp.generators().into_iter().filter(GeneratorId::is_boundary).collect();
        let gen = pick.get(&boundary).clone();
        let with = |m: Rational| -> Vec<Term<Rational>> {
            let mut d = sources[0].class.restrict(|g| g != &gen);
            d.add_bound(&gen, Bound::AtLeast(m)).unwrap();
            vec![
                Term { source: Source::new("D1", d), coeff: coeffs[0].clone() },
                Term { source: sources[1].clone(), coeff: coeffs[1].clone() },
            ]
        };
        let weak = verify_combination(&target, &with(m.clone()), &eps).unwrap().verdict;
        let strong = verify_combination(&target, &with(m + extra), &eps).unwrap().verdict;
        prop_assert!(strong.at_least(&weak), "{} then {}", weak, strong);
    }
}

#[test]
fn canonicalization_is_idempotent_and_symmetric() {
    for fam in prymcalc::Family::ALL {
        for g in 2..=7 {
            for n in 0..=3 {
                let Ok(sp) = SpaceId::new(fam, g, fam.fixed_marks().unwrap_or(n)) else { continue };
                let n = sp.n();
                for gen in sp.generators() {
                    assert_eq!(sp.canonicalize(&gen).unwrap(), gen, "{sp} {gen}");
                    let alt = match &gen {
                        GeneratorId::Split { i, s, .. } => Some(GeneratorId::split(g - i, s.complement(n), g)),
                        GeneratorId::Delta { i, s } if fam == prymcalc::Family::PointedCurves => {
                            Some(GeneratorId::delta(g - i, s.complement(n)))
                        }
                        GeneratorId::Unordered { i, .. } => Some(GeneratorId::unordered(g - i, g)),
                        _ => None,
                    };
                    if let Some(alt) = alt {
                        assert_eq!(sp.canonicalize(&alt).unwrap(), gen, "{sp} {alt}");
                        let a = Class::generator(sp, &alt).unwrap();
                        assert_eq!(a, Class::generator(sp, &gen).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn age_rows_are_exactly_the_table() {
    use prymcalc::singularity::ComponentKind::*;
    let table = age_table::<Rational>();
    for kind in [Identity, EllipticTail, EllipticLadder, HyperellipticTail, RationalTail, RationalLadder, PointedEllipticTail1, PointedEllipticTail2] {
        for ord in 1..=12 {
            for j in [JSpecial::None, JSpecial::J0, JSpecial::J1728] {
                let d = ComponentDatum::new(kind, ord, j);
                let listed = table.iter().any(|(t, _)| t.kind == kind && t.ord == ord);
                let res = age_lower_bound::<Rational>(&d);
                if !listed {
                    assert!(res.is_err(), "{d}");
                } else if let Ok(w) = res {
                    assert!(w >= Rational::zero() && w < Rational::one());
                }
            }
        }
    }
}
