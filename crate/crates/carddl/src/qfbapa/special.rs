//! Linear systems `A·v ≥ b, v ≥ 0` with `b ≥ 0`.
//!
//! For this special form the solutions are closed under addition and under
//! scaling by any factor ≥ 1, so a rational solution scaled by the lcm of its
//! denominators is an integer solution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::linear::{lp_feasible, Cmp, Row};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearSystem {
    pub nvars: usize,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        LinearSystem { nvars, a: Vec::new(), b: Vec::new() }
    }

    /// Add the row `Σ coeffs · v ≥ rhs`.
    pub fn push(&mut self, coeffs: &[(usize, i64)], rhs: i64) {
        let mut row = vec![0; self.nvars];
        for &(v, c) in coeffs {
            row[v] += c;
        }
        self.a.push(row);
        self.b.push(rhs);
    }

    pub fn is_special(&self) -> bool {
        self.b.iter().all(|b| *b >= 0) && self.a.iter().all(|r| r.len() == self.nvars)
    }

    pub fn holds(&self, v: &[BigInt]) -> bool {
        if v.len() != self.nvars || v.iter().any(|x| *x < BigInt::zero()) {
            return false;
        }
        self.a.iter().zip(&self.b).all(|(row, b)| {
            let lhs: BigInt = row.iter().zip(v).map(|(a, x)| BigInt::from(*a) * x).sum();
            lhs >= BigInt::from(*b)
        })
    }

    pub fn holds_rational(&self, v: &[BigRational]) -> bool {
        if v.len() != self.nvars || v.iter().any(|x| *x < BigRational::zero()) {
            return false;
        }
        self.a.iter().zip(&self.b).all(|(row, b)| {
            let lhs: BigRational =
                row.iter().zip(v).map(|(a, x)| BigRational::from_integer(BigInt::from(*a)) * x).sum();
            lhs >= BigRational::from_integer(BigInt::from(*b))
        })
    }

    fn rows(&self) -> Vec<Row> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(r, b)| {
                Row::new(r.iter().enumerate().map(|(i, c)| (i, *c as i128)).collect(), Cmp::Ge, *b as i128)
            })
            .collect()
    }

    fn check_special(&self) -> Result<()> {
        if self.is_special() {
            Ok(())
        } else {
            Err(Error::Invalid("linear system is not of the form A·v ≥ b with b ≥ 0".into()))
        }
    }
}

/// A non-negative rational solution, or `None` if there is none.
pub fn lin_feasible_rational(sys: &LinearSystem) -> Result<Option<Vec<BigRational>>> {
    sys.check_special()?;
    Ok(lp_feasible(sys.nvars, &vec![false; sys.nvars], &sys.rows()))
}

/// `D · c` for a rational solution `c` and `D` the lcm of its denominators.
pub fn scale_to_integer(c: &[BigRational]) -> Vec<BigInt> {
    let d = c.iter().fold(BigInt::one(), |d, x| d.lcm(x.denom()));
    c.iter().map(|x| x.numer() * (&d / x.denom())).collect()
}

/// A non-negative integer solution obtained by lcm scaling.
pub fn lin_integer_solution(sys: &LinearSystem) -> Result<Option<Vec<BigInt>>> {
    Ok(lin_feasible_rational(sys)?.map(|c| scale_to_integer(&c)))
}

/// `c + d`, after checking that both are solutions.
pub fn lin_sum(sys: &LinearSystem, c: &[BigInt], d: &[BigInt]) -> Result<Vec<BigInt>> {
    sys.check_special()?;
    if !sys.holds(c) || !sys.holds(d) {
        return Err(Error::Invalid("summand is not a solution of the system".into()));
    }
    Ok(c.iter().zip(d).map(|(x, y)| x + y).collect())
}

/// An integer solution with `v_i ≥ 1` for every `i ∈ vars`, built as the sum
/// of one witness per index; `None` if some index cannot be positive.
pub fn lin_positive_support(sys: &LinearSystem, vars: &[usize]) -> Result<Option<Vec<BigInt>>> {
    sys.check_special()?;
    if vars.is_empty() {
        return lin_integer_solution(sys);
    }
    let mut total: Option<Vec<BigInt>> = None;
    for &i in vars {
        let mut ext = sys.clone();
        ext.push(&[(i, 1)], 1);
        let Some(w) = lin_integer_solution(&ext)? else { return Ok(None) };
        total = Some(match total {
            None => w,
            Some(t) => lin_sum(sys, &t, &w)
                .map_err(|_| Error::Internal("per-index witness is not a solution of the base system".into()))?,
        });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    #[test]
    fn rational_feasibility() {
        let mut s = LinearSystem::new(2);
        s.push(&[(0, 1), (1, -2)], 0);
        assert!(lin_feasible_rational(&s).unwrap().is_some());
        let mut t = LinearSystem::new(1);
        t.push(&[(0, -1)], 1);
        assert!(lin_feasible_rational(&t).unwrap().is_none());
    }

    #[test]
    fn lcm_scaling() {
        let c = vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 3.into())];
        assert_eq!(scale_to_integer(&c), big(&[3, 2]));
    }

    #[test]
    fn sums() {
        let mut s = LinearSystem::new(2);
        s.push(&[(0, 1), (1, 1)], 1);
        assert_eq!(lin_sum(&s, &big(&[1, 0]), &big(&[0, 1])).unwrap(), big(&[1, 1]));
        assert!(lin_sum(&s, &big(&[0, 0]), &big(&[0, 1])).is_err());
    }

    #[test]
    fn positive_support() {
        let mut s = LinearSystem::new(2);
        s.push(&[(0, 1), (1, 1)], 1);
        let v = lin_positive_support(&s, &[0, 1]).unwrap().unwrap();
        assert!(s.holds(&v) && v.iter().all(|x| *x >= BigInt::one()));
        let mut t = LinearSystem::new(2);
        t.push(&[(0, -1)], 0);
        assert!(lin_positive_support(&t, &[0]).unwrap().is_none());
    }

    #[test]
    fn rejects_negative_bounds() {
        let mut s = LinearSystem::new(1);
        s.push(&[(0, 1)], -1);
        assert!(lin_feasible_rational(&s).is_err());
    }
}
