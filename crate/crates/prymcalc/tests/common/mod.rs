//! Strategies shared by the property and acceptance tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use prymcalc::pd::Partition;
use prymcalc::{Bound, Class, Family, GeneratorId, Rational, SpaceId};

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| r(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=60, 1i64..=12, any::<bool>()).prop_map(|(n, d, neg)| r(if neg { -n } else { n }, d))
}

pub fn nonnegative_rational() -> impl Strategy<Value = Rational> {
    (0i64..=40, 1i64..=8).prop_map(|(n, d)| r(n, d))
}

pub fn bound() -> impl Strategy<Value = Bound> {
    prop_oneof![
        6 => nonzero_rational().prop_map(Bound::Exact),
        2 => rational().prop_map(Bound::AtLeast),
        2 => rational().prop_map(Bound::AtMost),
        1 => Just(Bound::Unknown),
    ]
}

/// Any supported space with small genus and at most three markings.
pub fn space() -> impl Strategy<Value = SpaceId> {
    (0usize..5, 2u32..=8, 0u32..=3).prop_map(|(f, g, n)| {
        let fam = Family::ALL[f];
        SpaceId::new(fam, g, fam.fixed_marks().unwrap_or(n)).expect("valid parameters")
    })
}

fn build(space: SpaceId, gens: &[GeneratorId], terms: Vec<(usize, Bound)>) -> Class {
    let mut c = Class::zero(space);
    for (k, b) in terms {
        c.add_bound(&gens[k % gens.len()], b).expect("inventory generator");
    }
    c
}

/// Sparse classes on `space`, bounded coefficients included.
pub fn class_in(space: SpaceId) -> BoxedStrategy<Class> {
    let gens = space.generators();
    proptest::collection::vec((0..gens.len(), bound()), 0..8).prop_map(move |t| build(space, &gens, t)).boxed()
}

pub fn exact_class_in(space: SpaceId) -> BoxedStrategy<Class> {
    let gens = space.generators();
    proptest::collection::vec((0..gens.len(), nonzero_rational().prop_map(Bound::Exact)), 0..8)
        .prop_map(move |t| build(space, &gens, t))
        .boxed()
}

/// Exact classes supported on the given generators only.
pub fn exact_class_on(space: SpaceId, gens: Vec<GeneratorId>) -> BoxedStrategy<Class> {
    proptest::collection::vec((0..gens.len(), nonzero_rational().prop_map(Bound::Exact)), 0..8)
        .prop_map(move |t| build(space, &gens, t))
        .boxed()
}

pub fn class() -> impl Strategy<Value = Class> {
    space().prop_flat_map(class_in)
}

pub fn partition() -> impl Strategy<Value = Partition> {
    proptest::collection::vec(1u32..=4, 1..=4).prop_map(|parts| {
        let g = parts.iter().sum::<u32>() + 1;
        Partition::new(g, parts).expect("valid parts")
    })
}

/// Every partition of `g − 1` into `n` positive ordered parts.
pub fn all_partitions(g: u32, n: u32) -> Vec<Partition> {
    fn rec(rem: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 1..=rem {
            cur.push(v);
            rec(rem - v, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(g - 1, n, &mut Vec::new(), &mut out);
    out.into_iter().map(|p| Partition::new(g, p).expect("valid parts")).collect()
}

/// Draws `count` values from a strategy with a fixed seed.
pub fn sample<S: Strategy>(s: S, count: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..count).map(|_| s.new_tree(&mut runner).expect("strategy generates").current()).collect()
}

/// `lower ≤ v ≤ upper` for the interval a bound describes.
pub fn contains(b: &Bound, v: &Rational) -> bool {
    b.lower().is_none_or(|lo| &lo <= v) && b.upper().is_none_or(|hi| v <= &hi)
}

/// A value inside the interval of `b`, offset by `t ≥ 0` from its endpoint.
pub fn witness(b: &Bound, t: &Rational) -> Rational {
    match b {
        Bound::Exact(v) => v.clone(),
        Bound::AtLeast(m) => -m.clone() - t.clone(),
        Bound::AtMost(m) => -m.clone() + t.clone(),
        Bound::Unknown => t.clone(),
    }
}
