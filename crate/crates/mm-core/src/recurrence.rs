//! Nearest-neighbor recurrence relations
//!
//!   x P_n(x) = P_{n+e_k}(x) + b_{n,k} P_n(x) + sum_j a_{n,j} P_{n-e_j}(x)
//!
//! with the closed-form coefficients for both multiple Meixner kinds, a
//! recurrence-driven polynomial builder (an oracle independent of the
//! explicit sums), and the subleading-coefficient delta_n from which
//! b_{n,k} = delta_n - delta_{n+e_k}.
//!
//! At boundary indices (n_j = 0) the a_j term is defined as 0, consistent
//! with the n_j factor in both closed forms; this makes the builder total.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiindex::{indices_in_box, MultiIndex};
use crate::poly::DensePoly;
use crate::polyfam::{MeixnerFirstParams, MeixnerSecondParams};
use crate::rational::Rational;

/// The coefficients of the nearest-neighbor relation at one multi-index:
/// b_k for every raising direction k and a_j for every lowering direction j
/// (a_j = 0 where n_j = 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NNCoefficients {
    pub at: MultiIndex,
    pub b: Vec<Rational>,
    pub a: Vec<Rational>,
}

/// First kind:
///   b_{n,k} = (beta + |n|) c_k/(1-c_k) + sum_i n_i/(1-c_i)
///   a_{n,j} = c_j n_j (beta + |n| - 1)/(1-c_j)^2
pub fn nn_coeffs_first(n: &MultiIndex, p: &MeixnerFirstParams) -> Result<NNCoefficients> {
    if n.len() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "multi-index length {} vs r = {}",
            n.len(),
            p.r()
        )));
    }
    let total = Rational::integer(n.total() as i64);
    let one = Rational::one();
    let mut drift = Rational::zero();
    for (i, &ni) in n.entries().iter().enumerate() {
        drift += &(Rational::integer(ni as i64) / (&one - &p.c()[i]));
    }
    let b = p
        .c()
        .iter()
        .map(|ck| (p.beta() + &total) * ck / (&one - ck) + drift.clone())
        .collect();
    let a = n
        .entries()
        .iter()
        .zip(p.c())
        .map(|(&nj, cj)| {
            cj * &Rational::integer(nj as i64) * (p.beta() + &total - &one)
                / ((&one - cj) * (&one - cj))
        })
        .collect();
    Ok(NNCoefficients {
        at: n.clone(),
        b,
        a,
    })
}

/// Second kind:
///   b_{n,k} = c (n_k + beta_k)/(1-c) + |n|/(1-c)
///   a_{n,j} = c n_j (n_j + beta_j - 1)/(1-c)^2
///             prod_{i != j} (n_j + beta_j - beta_i)/(n_j + beta_j - n_i - beta_i)
///
/// The beta_i - beta_j non-integrality invariant keeps the denominators
/// nonzero; a vanishing denominator is still checked and reported as a
/// distinct degenerate-parameters error.
pub fn nn_coeffs_second(n: &MultiIndex, p: &MeixnerSecondParams) -> Result<NNCoefficients> {
    if n.len() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "multi-index length {} vs r = {}",
            n.len(),
            p.r()
        )));
    }
    let one = Rational::one();
    let c = p.c();
    let total = Rational::integer(n.total() as i64);
    let one_minus_c = &one - c;
    let b = n
        .entries()
        .iter()
        .zip(p.betas())
        .map(|(&nk, beta_k)| {
            (c * &(Rational::integer(nk as i64) + beta_k) + &total) / one_minus_c.clone()
        })
        .collect();
    let mut a = Vec::with_capacity(p.r());
    for (j, (&nj, beta_j)) in n.entries().iter().zip(p.betas()).enumerate() {
        if nj == 0 {
            a.push(Rational::zero());
            continue;
        }
        let level = Rational::integer(nj as i64) + beta_j;
        let mut value = c * &Rational::integer(nj as i64) * (&level - &one)
            / (one_minus_c.clone() * one_minus_c.clone());
        for (i, (&ni, beta_i)) in n.entries().iter().zip(p.betas()).enumerate() {
            if i == j {
                continue;
            }
            let denom = &level - &Rational::integer(ni as i64) - beta_i;
            if denom.is_zero() {
                return Err(Error::DegenerateParameters(format!(
                    "n_{}+beta_{}-n_{}-beta_{} = 0 at {n:?}",
                    j + 1,
                    j + 1,
                    i + 1,
                    i + 1
                )));
            }
            value = value * (&level - beta_i) / denom;
        }
        a.push(value);
    }
    Ok(NNCoefficients {
        at: n.clone(),
        b,
        a,
    })
}

/// Subleading coefficient delta_n (the coefficient of x^{|n|-1}) of the
/// first-kind monic polynomial:
///   delta_n = (|n|^2 + |n|(2 beta - 1))/2 + (beta + |n| - 1) sum_i n_i/(c_i - 1).
pub fn subleading_delta_first(n: &MultiIndex, p: &MeixnerFirstParams) -> Result<Rational> {
    if n.len() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "multi-index length {} vs r = {}",
            n.len(),
            p.r()
        )));
    }
    let total = Rational::integer(n.total() as i64);
    let one = Rational::one();
    let two = Rational::integer(2);
    let head = (&total * &total + &total * &(p.beta() * &two - &one)) / two;
    let mut tail = Rational::zero();
    for (i, &ni) in n.entries().iter().enumerate() {
        tail += &(Rational::integer(ni as i64) / (&p.c()[i] - &one));
    }
    Ok(head + (p.beta() + &total - &one) * tail)
}

/// Second-kind subleading coefficient:
///   delta_n = 1/(c-1) sum_j n_j (n_j + beta_j - 1 + sum_{i<j} n_i)
///             + sum_j (n_j^2/2 + n_j (2 beta_j - 1)/2).
pub fn subleading_delta_second(n: &MultiIndex, p: &MeixnerSecondParams) -> Result<Rational> {
    if n.len() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "multi-index length {} vs r = {}",
            n.len(),
            p.r()
        )));
    }
    let one = Rational::one();
    let two = Rational::integer(2);
    let mut weighted = Rational::zero();
    let mut prefix = Rational::zero();
    let mut plain = Rational::zero();
    for (j, &nj) in n.entries().iter().enumerate() {
        let njr = Rational::integer(nj as i64);
        let beta_j = &p.betas()[j];
        weighted += &(&njr * &(&njr + beta_j - &one + &prefix));
        plain += &((&njr * &njr + &njr * &(beta_j * &two - &one)) / two.clone());
        prefix += &njr;
    }
    Ok(weighted / (p.c() - &one) + plain)
}

/// Family selector for the recurrence-driven builder.
#[derive(Clone, Debug)]
pub enum FamilyParams {
    First(MeixnerFirstParams),
    Second(MeixnerSecondParams),
}

impl FamilyParams {
    pub fn r(&self) -> usize {
        match self {
            FamilyParams::First(p) => p.r(),
            FamilyParams::Second(p) => p.r(),
        }
    }

    pub fn nn_coeffs(&self, n: &MultiIndex) -> Result<NNCoefficients> {
        match self {
            FamilyParams::First(p) => nn_coeffs_first(n, p),
            FamilyParams::Second(p) => nn_coeffs_second(n, p),
        }
    }

    pub fn subleading_delta(&self, n: &MultiIndex) -> Result<Rational> {
        match self {
            FamilyParams::First(p) => subleading_delta_first(n, p),
            FamilyParams::Second(p) => subleading_delta_second(n, p),
        }
    }
}

/// Build P_target by iterating the rearranged recurrence
///   P_{n+e_k} = (x - b_{n,k}) P_n - sum_j a_{n,j} P_{n-e_j}
/// over the whole box below the target, each index raised from its
/// predecessor along the deterministic default path (last nonzero
/// coordinate). This is a second oracle, independent of the explicit sums.
pub fn recurrence_build(params: &FamilyParams, target: &MultiIndex) -> Result<DensePoly> {
    let table = recurrence_build_table(params, target)?;
    Ok(table[target].clone())
}

/// The full table of recurrence-built polynomials on the box below `target`.
pub fn recurrence_build_table(
    params: &FamilyParams,
    target: &MultiIndex,
) -> Result<BTreeMap<MultiIndex, DensePoly>> {
    if target.len() != params.r() {
        return Err(Error::ShapeMismatch(format!(
            "multi-index length {} vs r = {}",
            target.len(),
            params.r()
        )));
    }
    let mut table: BTreeMap<MultiIndex, DensePoly> = BTreeMap::new();
    for m in indices_in_box(target.entries()) {
        if m.is_zero() {
            table.insert(m, DensePoly::one());
            continue;
        }
        let k = default_raise_direction(&m);
        let prev = m.lowered(k).expect("raise direction has positive entry");
        let poly = raise_once(params, &table, &prev, k)?;
        table.insert(m, poly);
    }
    Ok(table)
}

/// Apply one raising step at `from` in direction `k`, reading the lower-order
/// polynomials from `table`.
pub fn raise_once(
    params: &FamilyParams,
    table: &BTreeMap<MultiIndex, DensePoly>,
    from: &MultiIndex,
    k: usize,
) -> Result<DensePoly> {
    let coeffs = params.nn_coeffs(from)?;
    let p_from = table
        .get(from)
        .ok_or_else(|| Error::ShapeMismatch(format!("missing table entry {from:?}")))?;
    let mut out = p_from.shift_up().sub(&p_from.scale(&coeffs.b[k]));
    for (j, aj) in coeffs.a.iter().enumerate() {
        if aj.is_zero() {
            continue;
        }
        let lower = from.lowered(j).expect("nonzero a_j implies n_j > 0");
        let p_lower = table
            .get(&lower)
            .ok_or_else(|| Error::ShapeMismatch(format!("missing table entry {lower:?}")))?;
        out = out.sub(&p_lower.scale(aj));
    }
    Ok(out)
}

/// The default path reaches `m` by raising its last nonzero coordinate, i.e.
/// the path fills coordinate 1 first, then coordinate 2, and so on.
fn default_raise_direction(m: &MultiIndex) -> usize {
    m.entries()
        .iter()
        .rposition(|&e| e > 0)
        .expect("nonzero index")
}
