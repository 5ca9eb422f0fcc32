//! Big-integer checks of the limit linear series count on a glued double
//! curve and the binomial identities behind it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `C(n, k)`, zero for `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        // exact: the product of j+1 consecutive integers is divisible by (j+1)!
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

pub fn catalan(g: u32) -> BigInt {
    let g = i64::from(g);
    binomial(2 * g, g) / BigInt::from(g + 1)
}

/// Number of `g¹_d` with the prescribed vanishing on one side of the node,
/// `(2d−g−1)·g!/(d!(g−d+1)!)`. Equal to `C(g,d−1) − C(g,d)`.
pub fn vanishing_order_count(g: u32, d: u32) -> BigRational {
    let (g, d) = (i64::from(g), i64::from(d));
    if d < 0 || d > g + 1 {
        return BigRational::zero();
    }
    let fact = |m: i64| -> BigInt { (1..=m).fold(BigInt::one(), |a, k| a * BigInt::from(k)) };
    BigRational::new(BigInt::from(2 * d - g - 1) * fact(g), fact(d) * fact(g - d + 1))
}

/// `Σ_{d=⌈(g+1)/2⌉}^{g+1} ((2d−g−1)²/(g+1)²)·C(g+1,d)²`.
pub fn count_limit_g1(g: u32) -> BigRational {
    let gi = i64::from(g);
    let lo = (gi + 2) / 2;
    (lo..=gi + 1).map(|d| count_summand(g, d as u32)).fold(BigRational::zero(), |a, b| a + b)
}

/// One summand of [`count_limit_g1`].
pub fn count_summand(g: u32, d: u32) -> BigRational {
    let (g, d) = (i64::from(g), i64::from(d));
    let num = BigInt::from(2 * d - g - 1) * binomial(g + 1, d);
    let r = BigRational::new(num, BigInt::from(g + 1));
    r.clone() * r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub holds: bool,
}

impl Identity {
    fn new(lhs: BigInt, rhs: BigInt) -> Identity {
        let holds = lhs == rhs;
        Identity { lhs, rhs, holds }
    }
}

/// `Σ_{d=1}^g C(g,d)·C(g,d−1) = (g/(g+1))·C(2g,g)`.
pub fn narayana_identity(g: u32) -> Identity {
    let gi = i64::from(g);
    let lhs = (1..=gi).map(|d| binomial(gi, d) * binomial(gi, d - 1)).sum();
    let rhs = BigInt::from(gi) * binomial(2 * gi, gi) / BigInt::from(gi + 1);
    Identity::new(lhs, rhs)
}

/// `Σ_{d=0}^g C(g,d)² = C(2g,g)`.
pub fn central_binomial_identity(g: u32) -> Identity {
    let gi = i64::from(g);
    let lhs = (0..=gi).map(|d| binomial(gi, d).pow(2)).sum();
    Identity::new(lhs, binomial(2 * gi, gi))
}

/// `½·Σ_{d=0}^{g+1} (C(g,d) − C(g,d−1))²`, exactly.
pub fn square_difference_sum(g: u32) -> BigRational {
    let gi = i64::from(g);
    let twice: BigInt = (0..=gi + 1).map(|d| (binomial(gi, d) - binomial(gi, d - 1)).pow(2)).sum();
    BigRational::new(twice, BigInt::from(2))
}

/// The square-difference sum compared with the Catalan number.
pub fn square_difference_identity(g: u32) -> (BigRational, bool) {
    let v = square_difference_sum(g);
    let ok = v == BigRational::from_integer(catalan(g));
    (v, ok)
}

/// Every link of the chain for one `g`: the count, the square-difference
/// sum and the Catalan number agree, and both binomial identities hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub g: u32,
    pub count: BigRational,
    pub catalan: BigInt,
    pub square_difference: BigRational,
    pub narayana: Identity,
    pub central_binomial: Identity,
    /// Each bracket `(2d−g−1)·C(g+1,d)/(g+1)` is the integer
    /// `C(g,d−1) − C(g,d)`.
    pub summands_integral: bool,
}

impl CountReport {
    pub fn identities_ok(&self) -> bool {
        let cat = BigRational::from_integer(self.catalan.clone());
        self.count == cat
            && self.square_difference == cat
            && self.narayana.holds
            && self.central_binomial.holds
            && self.summands_integral
    }
}

pub fn count_report(g: u32) -> CountReport {
    let gi = i64::from(g);
    let summands_integral = (0..=gi + 1).all(|d| {
        let bracket = BigRational::new(BigInt::from(2 * d - gi - 1) * binomial(gi + 1, d), BigInt::from(gi + 1));
        bracket.is_integer() && bracket.to_integer() == binomial(gi, d - 1) - binomial(gi, d)
    });
    CountReport {
        g,
        count: count_limit_g1(g),
        catalan: catalan(g),
        square_difference: square_difference_sum(g),
        narayana: narayana_identity(g),
        central_binomial: central_binomial_identity(g),
        summands_integral,
    }
}
