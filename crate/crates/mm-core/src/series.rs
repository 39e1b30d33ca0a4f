//! Truncated multivariate formal power series over exact rationals.
//!
//! A `TruncatedSeries` in variables t_1, ..., t_r keeps every coefficient of
//! total degree <= D and drops the rest. Invariants:
//! - every stored index k satisfies |k| <= D
//! - absent indices mean coefficient 0 (zero coefficients are never stored)
//! - keys iterate in graded-lexicographic order
//!
//! Rational powers of a series go through the binomial expansion of
//! (1 + u)^alpha in u = base - 1, which keeps everything inside rational
//! arithmetic (no logarithms).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::rational::{binomial_rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    num_vars: usize,
    max_total_degree: usize,
    coeffs: BTreeMap<MultiIndex, Rational>,
}

impl TruncatedSeries {
    pub fn zero(num_vars: usize, max_total_degree: usize) -> Self {
        assert!(num_vars >= 1);
        TruncatedSeries {
            num_vars,
            max_total_degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(value: Rational, num_vars: usize, max_total_degree: usize) -> Self {
        let mut s = TruncatedSeries::zero(num_vars, max_total_degree);
        s.set_coeff(MultiIndex::zero(num_vars), value);
        s
    }

    pub fn one(num_vars: usize, max_total_degree: usize) -> Self {
        TruncatedSeries::constant(Rational::one(), num_vars, max_total_degree)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn max_total_degree(&self) -> usize {
        self.max_total_degree
    }

    pub fn coeff(&self, index: &MultiIndex) -> Rational {
        self.coeffs.get(index).cloned().unwrap_or_else(Rational::zero)
    }

    /// Set one coefficient; indices beyond the truncation degree are ignored,
    /// zero values erase the entry.
    pub fn set_coeff(&mut self, index: MultiIndex, value: Rational) {
        assert_eq!(index.len(), self.num_vars, "index arity mismatch");
        if index.total() > self.max_total_degree {
            return;
        }
        if value.is_zero() {
            self.coeffs.remove(&index);
        } else {
            self.coeffs.insert(index, value);
        }
    }

    pub fn add_to_coeff(&mut self, index: MultiIndex, value: &Rational) {
        let current = self.coeff(&index);
        self.set_coeff(index, current + value);
    }

    /// Stored (nonzero) terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.coeffs.iter()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&MultiIndex::zero(self.num_vars))
    }

    fn check_shape(&self, other: &TruncatedSeries) -> Result<()> {
        if self.num_vars != other.num_vars || self.max_total_degree != other.max_total_degree {
            return Err(Error::ShapeMismatch(format!(
                "series ({} vars, degree {}) vs ({} vars, degree {})",
                self.num_vars, self.max_total_degree, other.num_vars, other.max_total_degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (k, v) in other.terms() {
            out.add_to_coeff(k.clone(), v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (k, v) in other.terms() {
            out.add_to_coeff(k.clone(), &-v);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(self.num_vars, self.max_total_degree);
        for (k, v) in self.terms() {
            out.set_coeff(k.clone(), v * factor);
        }
        out
    }

    /// Truncated product: the coefficient of k is the sum over all splits
    /// k = k' + k'' of coeff(k') * coeff(k'').
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_shape(other)?;
        let mut out = TruncatedSeries::zero(self.num_vars, self.max_total_degree);
        for (ka, va) in self.terms() {
            let budget = self.max_total_degree - ka.total();
            for (kb, vb) in other.terms() {
                if kb.total() > budget {
                    break; // graded order: all further terms are too deep
                }
                let sum = MultiIndex::new(
                    ka.entries()
                        .iter()
                        .zip(kb.entries())
                        .map(|(a, b)| a + b)
                        .collect(),
                );
                out.add_to_coeff(sum, &(va * vb));
            }
        }
        Ok(out)
    }

    /// base^alpha for rational alpha, defined when the constant term is
    /// exactly 1: expand sum_m C(alpha, m) (base - 1)^m up to the truncation
    /// degree. For nonnegative integer alpha this agrees with repeated `mul`.
    pub fn pow(&self, alpha: &Rational) -> Result<TruncatedSeries> {
        if !self.constant_term().is_one() {
            return Err(Error::NonUnitConstantTerm);
        }
        let r = self.num_vars;
        let d = self.max_total_degree;
        let mut u = self.clone();
        u.add_to_coeff(MultiIndex::zero(r), &-Rational::one());
        // u has zero constant term, so u^m only reaches degrees >= m.
        let mut out = TruncatedSeries::one(r, d);
        let mut u_power = TruncatedSeries::one(r, d);
        for m in 1..=d {
            u_power = u_power.mul(&u)?;
            let c = binomial_rat(alpha, m);
            if c.is_zero() {
                continue;
            }
            out = out.add(&u_power.scale(&c))?;
        }
        Ok(out)
    }
}

/// The truncation of (1 + t_var)^alpha to total degree D in r variables:
/// the coefficient of t_var^k is C(alpha, k).
pub fn binomial_series(
    alpha: &Rational,
    var_index: usize,
    max_total_degree: usize,
    num_vars: usize,
) -> TruncatedSeries {
    assert!(var_index < num_vars, "variable index out of range");
    let mut s = TruncatedSeries::zero(num_vars, max_total_degree);
    for k in 0..=max_total_degree {
        let mut idx = vec![0usize; num_vars];
        idx[var_index] = k;
        s.set_coeff(MultiIndex::new(idx), binomial_rat(alpha, k));
    }
    s
}

/// 1 + sum_j lambda_j t_j as a truncated series (the linear bases that the
/// generating functions raise to rational powers).
pub fn one_plus_linear(lambdas: &[Rational], max_total_degree: usize) -> TruncatedSeries {
    let r = lambdas.len();
    let mut s = TruncatedSeries::one(r, max_total_degree);
    for (j, lambda) in lambdas.iter().enumerate() {
        s.set_coeff(MultiIndex::unit(r, j), lambda.clone());
    }
    s
}
