//! Exact dense elimination and degree-one expressions in one parameter.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `constant + slope·ε`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine<T> {
    pub constant: T,
    pub slope: T,
}

impl<T: Scalar> Affine<T> {
    pub fn new(constant: T, slope: T) -> Self {
        Affine { constant, slope }
    }

    pub fn constant(c: T) -> Self {
        Affine { constant: c, slope: T::zero() }
    }

    pub fn zero() -> Self {
        Affine::constant(T::zero())
    }

    /// The parameter itself.
    pub fn epsilon() -> Self {
        Affine { constant: T::zero(), slope: T::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.slope.is_zero()
    }

    pub fn eval(&self, eps: &T) -> T {
        self.constant.clone() + self.slope.clone() * eps.clone()
    }

    pub fn scale(&self, k: &T) -> Self {
        Affine { constant: self.constant.clone() * k.clone(), slope: self.slope.clone() * k.clone() }
    }

    /// The value of `ε` at which the expression vanishes, if it is unique.
    pub fn root(&self) -> Option<T> {
        if self.slope.is_zero() {
            None
        } else {
            Some(-self.constant.clone() / self.slope.clone())
        }
    }
}

impl<T: Scalar> Add for Affine<T> {
    type Output = Affine<T>;
    fn add(self, o: Affine<T>) -> Affine<T> {
        Affine { constant: self.constant + o.constant, slope: self.slope + o.slope }
    }
}

impl<T: Scalar> Sub for Affine<T> {
    type Output = Affine<T>;
    fn sub(self, o: Affine<T>) -> Affine<T> {
        self + (-o)
    }
}

impl<T: Scalar> Neg for Affine<T> {
    type Output = Affine<T>;
    fn neg(self) -> Affine<T> {
        Affine { constant: -self.constant, slope: -self.slope }
    }
}

impl<T: Scalar> Mul<&T> for Affine<T> {
    type Output = Affine<T>;
    fn mul(self, k: &T) -> Affine<T> {
        self.scale(k)
    }
}

impl<T: Scalar> fmt::Display for Affine<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope.is_zero() {
            return write!(f, "{}", self.constant);
        }
        let slope = if self.slope.is_one() {
            "eps".to_string()
        } else if (-self.slope.clone()).is_one() {
            "-eps".to_string()
        } else {
            format!("{}*eps", self.slope)
        };
        if self.constant.is_zero() {
            f.write_str(&slope)
        } else if let Some(rest) = slope.strip_prefix('-') {
            write!(f, "{} - {rest}", self.constant)
        } else {
            write!(f, "{} + {slope}", self.constant)
        }
    }
}

/// Outcome of solving `A·x = b` for several right-hand sides at once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve<T> {
    /// One solution vector per right-hand side.
    Unique(Vec<Vec<T>>),
    /// Row multipliers `y` with `y·A = 0` and `y·b ≠ 0` for the right-hand
    /// side at index `rhs`.
    Inconsistent { rhs: usize, multipliers: Vec<T> },
}

/// Exact Gaussian elimination on an `m × k` matrix given row-major.
/// Returns an `Underdetermined` error when the system is consistent but
/// rank-deficient.
pub fn solve<T: Scalar>(a: &[Vec<T>], rhs: &[Vec<T>]) -> Result<Solve<T>> {
    let m = a.len();
    let k = a.first().map_or(0, Vec::len);
    let r = rhs.len();
    if a.iter().any(|row| row.len() != k) || rhs.iter().any(|b| b.len() != m) {
        return Err(Error::Parameter("ragged linear system".into()));
    }
    // [A | b₁ … b_r | I_m]
    let width = k + r + m;
    let mut rows: Vec<Vec<T>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            row.extend((0..m).map(|j| if i == j { T::one() } else { T::zero() }));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..k {
        let Some(p) = (next..m).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(next, p);
        let inv = T::one() / rows[next][col].clone();
        for v in rows[next].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..m {
            if i == next || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for j in 0..width {
                let d = rows[next][j].clone() * f.clone();
                rows[i][j] = rows[i][j].clone() - d;
            }
        }
        pivots.push(col);
        next += 1;
    }
    for row in &rows[next..] {
        if let Some(bi) = (0..r).find(|&b| !row[k + b].is_zero()) {
            return Ok(Solve::Inconsistent { rhs: bi, multipliers: row[k + r..].to_vec() });
        }
    }
    if pivots.len() < k {
        return Err(Error::Underdetermined { rank: pivots.len(), unknowns: k });
    }
    let sols = (0..r)
        .map(|b| {
            let mut x = vec![T::zero(); k];
            for (i, &col) in pivots.iter().enumerate() {
                x[col] = rows[i][k + b].clone();
            }
            x
        })
        .collect();
    Ok(Solve::Unique(sols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::scalar::q;
    use crate::Rational;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect()
    }

    #[test]
    fn unique_solution() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = vec![vec![q(3, 1), q(5, 1)]];
        let Solve::Unique(x) = solve(&a, &b).unwrap() else { panic!() };
        assert_eq!(x[0], vec![q(4, 5), q(7, 5)]);
    }

    #[test]
    fn overdetermined_but_consistent() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        let b = vec![vec![q(1, 1), q(2, 1), q(3, 1)]];
        assert_eq!(solve(&a, &b).unwrap(), Solve::Unique(vec![vec![q(1, 1), q(2, 1)]]));
    }

    #[test]
    fn contradiction_has_a_certificate_row() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let b = vec![vec![q(1, 1), q(3, 1)]];
        let Solve::Inconsistent { rhs, multipliers } = solve(&a, &b).unwrap() else { panic!() };
        assert_eq!(rhs, 0);
        let ya: Vec<Rational> = (0..2).map(|j| multipliers[0].clone() * a[0][j].clone() + multipliers[1].clone() * a[1][j].clone()).collect();
        assert!(ya.iter().all(|v| v.is_zero()));
        let yb = multipliers[0].clone() * b[0][0].clone() + multipliers[1].clone() * b[0][1].clone();
        assert!(!yb.is_zero());
    }

    #[test]
    fn rank_deficient() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let b = vec![vec![q(1, 1), q(2, 1)]];
        assert_eq!(solve(&a, &b), Err(Error::Underdetermined { rank: 1, unknowns: 2 }));
    }

    #[test]
    fn affine_display() {
        let a: Affine<Rational> = Affine::new(q(62, 4933), q(1, 4933));
        assert_eq!(a.to_string(), "62/4933 + 1/4933*eps");
        assert_eq!(Affine::<Rational>::new(q(0, 1), q(-1, 1)).to_string(), "-eps");
        assert_eq!(Affine::<Rational>::new(q(2, 1), q(-3, 2)).to_string(), "2 - 3/2*eps");
    }
}
