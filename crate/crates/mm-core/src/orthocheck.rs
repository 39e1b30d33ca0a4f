//! Discrete weights (negative binomial, Poisson) and rigorous truncated
//! verification of the defining orthogonality conditions.
//!
//! Truncation is handled by a fully exact geometric-domination argument: for
//! the summand s(k) = p(k) k^l w(k), the dominating sequence
//! u(k) = C k^(deg p + l) w(k) with C = sum of |coefficients| satisfies
//! |s(k)| <= u(k) for k >= 1, and the ratio u(k+1)/u(k) is bounded by a
//! nonincreasing rational expression. Once that bound drops below rho
//! (= (c+1)/2 for negative binomial weights, 1/2 for Poisson), the tail
//! after K is at most u(K+1)/(1-rho). The true sum always lies in
//! [partial - tailBound, partial + tailBound].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::poly::DensePoly;
use crate::polyfam::{
    charlier_explicit, meixner1_explicit, meixner2_explicit, meixner_classical_tilde,
    CharlierParams, MeixnerFirstParams, MeixnerSecondParams,
};
use crate::rational::{factorial, pochhammer, Rational};

/// One discrete weight on k = 0, 1, 2, ...
///
/// The component index j selects which of the r weights of a multiple
/// family is meant (0-based).
#[derive(Clone, Debug)]
pub enum WeightSpec {
    /// w(k) = (beta)_k c_j^k / k!
    MeixnerFirst { params: MeixnerFirstParams, j: usize },
    /// w(k) = (beta_j)_k c^k / k!
    MeixnerSecond { params: MeixnerSecondParams, j: usize },
    /// w(k) = a_j^k / k!
    Charlier { params: CharlierParams, j: usize },
    /// w(k) = (beta)_k c^k / k!
    ClassicalMeixner { beta: Rational, c: Rational },
    /// w(k) = a^k / k!
    ClassicalCharlier { a: Rational },
}

/// The shape that drives the tail bound: negative binomial (beta, c) or
/// Poisson (a).
enum WeightShape {
    NegativeBinomial { beta: Rational, c: Rational },
    Poisson { a: Rational },
}

impl WeightSpec {
    fn shape(&self) -> Result<WeightShape> {
        let shape = match self {
            WeightSpec::MeixnerFirst { params, j } => WeightShape::NegativeBinomial {
                beta: params.beta().clone(),
                c: params
                    .c()
                    .get(*j)
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!("component index {j} out of range"))
                    })?
                    .clone(),
            },
            WeightSpec::MeixnerSecond { params, j } => WeightShape::NegativeBinomial {
                beta: params
                    .betas()
                    .get(*j)
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!("component index {j} out of range"))
                    })?
                    .clone(),
                c: params.c().clone(),
            },
            WeightSpec::Charlier { params, j } => WeightShape::Poisson {
                a: params
                    .a()
                    .get(*j)
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!("component index {j} out of range"))
                    })?
                    .clone(),
            },
            WeightSpec::ClassicalMeixner { beta, c } => WeightShape::NegativeBinomial {
                beta: beta.clone(),
                c: c.clone(),
            },
            WeightSpec::ClassicalCharlier { a } => WeightShape::Poisson { a: a.clone() },
        };
        Ok(shape)
    }
}

impl WeightShape {
    fn mass(&self, k: usize) -> Rational {
        match self {
            WeightShape::NegativeBinomial { beta, c } => {
                pochhammer(beta, k) * c.pow_i64(k as i64)
                    / Rational::from_bigint(factorial(k))
            }
            WeightShape::Poisson { a } => {
                a.pow_i64(k as i64) / Rational::from_bigint(factorial(k))
            }
        }
    }

    /// w(k+1)/w(k), exact.
    fn mass_ratio(&self, k: usize) -> Rational {
        let kr = Rational::integer(k as i64);
        let next = Rational::integer(k as i64 + 1);
        match self {
            WeightShape::NegativeBinomial { beta, c } => (beta + &kr) * c / next,
            WeightShape::Poisson { a } => a / &next,
        }
    }

    fn rho(&self) -> Rational {
        match self {
            WeightShape::NegativeBinomial { c, .. } => {
                (c + &Rational::one()) / Rational::integer(2)
            }
            WeightShape::Poisson { .. } => Rational::new(1, 2),
        }
    }

    /// A nonincreasing upper bound for u(k+1)/u(k) where u(k) = k^m w(k).
    fn ratio_bound(&self, k: usize, m: usize) -> Rational {
        let kr = Rational::integer(k as i64);
        let growth = ((&kr + &Rational::one()) / kr).pow_i64(m as i64);
        match self {
            WeightShape::NegativeBinomial { beta, c } => {
                let shift = (beta + &Rational::integer(k as i64))
                    / Rational::integer(k as i64 + 1);
                c * &(growth * shift.max(Rational::one()))
            }
            WeightShape::Poisson { a } => {
                growth * a / Rational::integer(k as i64 + 1)
            }
        }
    }
}

/// Exact mass of the weight at the grid point k.
pub fn weight_mass(w: &WeightSpec, k: usize) -> Result<Rational> {
    Ok(w.shape()?.mass(k))
}

/// A truncated sum with a rigorous two-sided error bound: the untruncated
/// sum lies in [partial - tail_bound, partial + tail_bound].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketedSum {
    pub partial: Rational,
    pub tail_bound: Rational,
    /// Smallest admissible cutoff for these inputs.
    pub domination_threshold: usize,
}

impl BracketedSum {
    pub fn contains(&self, value: &Rational) -> bool {
        let lo = &self.partial - &self.tail_bound;
        let hi = &self.partial + &self.tail_bound;
        &lo <= value && value <= &hi
    }

    pub fn brackets_zero(&self) -> bool {
        self.partial.abs() <= self.tail_bound
    }
}

/// Smallest k >= 1 from which the ratio bound stays at or below rho.
fn domination_threshold(shape: &WeightShape, m: usize) -> Result<usize> {
    let rho = shape.rho();
    let mut k = 1usize;
    loop {
        if shape.ratio_bound(k, m) <= rho {
            return Ok(k);
        }
        k += 1;
        if k > 1_000_000 {
            return Err(Error::Inconclusive(
                "tail domination threshold exceeds 10^6".into(),
            ));
        }
    }
}

/// Sum p(k) k^ell w(k) for k = 0..=cutoff exactly, with a rigorous bound on
/// the absolute value of the discarded tail.
pub fn orthogonality_sum(
    poly: &DensePoly,
    w: &WeightSpec,
    ell: usize,
    cutoff: usize,
) -> Result<BracketedSum> {
    let shape = w.shape()?;
    if poly.is_zero() {
        return Ok(BracketedSum {
            partial: Rational::zero(),
            tail_bound: Rational::zero(),
            domination_threshold: 1,
        });
    }
    let m = poly.degree() + ell;
    let threshold = domination_threshold(&shape, m)?;
    if cutoff < threshold {
        return Err(Error::CutoffBelowThreshold {
            required: threshold,
            got: cutoff,
        });
    }

    let mut partial = Rational::zero();
    let mut mass = Rational::one(); // w(0)
    for k in 0..=cutoff {
        if k > 0 {
            mass *= &shape.mass_ratio(k - 1);
        }
        if ell > 0 && k == 0 {
            continue; // k^ell = 0
        }
        let kl = Rational::integer(k as i64).pow_i64(ell as i64);
        partial += &(poly.eval_usize(k) * kl * mass.clone());
    }

    // u(K+1) = (K+1)^m w(K+1), then tail <= C u(K+1)/(1 - rho)
    let next = cutoff + 1;
    let u_next = Rational::integer(next as i64).pow_i64(m as i64) * shape.mass(next);
    let rho = shape.rho();
    let tail_bound =
        poly.abs_coeff_sum() * u_next / (Rational::one() - rho);
    Ok(BracketedSum {
        partial,
        tail_bound,
        domination_threshold: threshold,
    })
}

/// Result of one orthogonality condition (component j, moment ell).
#[derive(Clone, Debug, Serialize)]
pub struct OrthoCondition {
    pub j: usize,
    pub ell: usize,
    pub partial: Rational,
    #[serde(rename = "tailBound")]
    pub tail_bound: Rational,
    pub pass: bool,
}

/// Diagonal normalization check for r = 1 against the closed form
/// n!/(c^n (beta)_n); only available when beta is an integer so that the
/// (1-c)^beta prefactor stays rational.
#[derive(Clone, Debug, Serialize)]
pub struct DiagonalCheck {
    pub n: usize,
    pub target: Rational,
    pub lo: Rational,
    pub hi: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthoReport {
    pub conditions: Vec<OrthoCondition>,
    pub diagonal: Option<DiagonalCheck>,
}

impl OrthoReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
            && self.diagonal.as_ref().map_or(true, |d| d.pass)
    }
}

/// The family whose orthogonality conditions are being verified.
#[derive(Clone, Debug)]
pub enum OrthoFamily {
    First(MeixnerFirstParams),
    Second(MeixnerSecondParams),
    Charlier(CharlierParams),
}

impl OrthoFamily {
    fn r(&self) -> usize {
        match self {
            OrthoFamily::First(p) => p.r(),
            OrthoFamily::Second(p) => p.r(),
            OrthoFamily::Charlier(p) => p.r(),
        }
    }

    fn polynomial(&self, n: &MultiIndex) -> Result<DensePoly> {
        match self {
            OrthoFamily::First(p) => meixner1_explicit(n, p),
            OrthoFamily::Second(p) => meixner2_explicit(n, p),
            OrthoFamily::Charlier(p) => charlier_explicit(n, p),
        }
    }

    fn weight(&self, j: usize) -> WeightSpec {
        match self {
            OrthoFamily::First(p) => WeightSpec::MeixnerFirst {
                params: p.clone(),
                j,
            },
            OrthoFamily::Second(p) => WeightSpec::MeixnerSecond {
                params: p.clone(),
                j,
            },
            OrthoFamily::Charlier(p) => WeightSpec::Charlier {
                params: p.clone(),
                j,
            },
        }
    }
}

/// Check every defining condition sum_k M_n(k) k^ell w_j(k) = 0 for j in
/// 1..r and ell < n_j: the truncated sum must bracket zero and the bound
/// must be at most epsilon. For r = 1 Meixner families with integer beta the
/// diagonal closed form is checked as well.
pub fn verify_multiple_orthogonality(
    family: &OrthoFamily,
    n: &MultiIndex,
    cutoff: usize,
    epsilon: &Rational,
) -> Result<OrthoReport> {
    if n.len() != family.r() {
        return Err(Error::ShapeMismatch(format!(
            "multi-index length {} vs r = {}",
            n.len(),
            family.r()
        )));
    }
    let poly = family.polynomial(n)?;
    let mut conditions = Vec::new();
    for j in 0..family.r() {
        let w = family.weight(j);
        for ell in 0..n.get(j) {
            let sum = orthogonality_sum(&poly, &w, ell, cutoff)?;
            let pass = sum.brackets_zero() && &sum.tail_bound <= epsilon;
            conditions.push(OrthoCondition {
                j,
                ell,
                partial: sum.partial,
                tail_bound: sum.tail_bound,
                pass,
            });
        }
    }

    let diagonal = match family {
        OrthoFamily::First(p) if p.r() == 1 && p.beta().is_natural() => Some(
            diagonal_check(n.get(0), p.beta(), &p.c()[0], cutoff)?,
        ),
        OrthoFamily::Second(p) if p.r() == 1 && p.betas()[0].is_natural() => Some(
            diagonal_check(n.get(0), &p.betas()[0], p.c(), cutoff)?,
        ),
        _ => None,
    };

    Ok(OrthoReport {
        conditions,
        diagonal,
    })
}

/// The normalized diagonal value: (1-c)^beta sum_k Mt_n(k)^2 (beta)_k c^k/k!
/// must equal n!/(c^n (beta)_n); checked by bracketing with the exact sum.
fn diagonal_check(n: usize, beta: &Rational, c: &Rational, cutoff: usize) -> Result<DiagonalCheck> {
    let tilde = meixner_classical_tilde(n, beta, c)?;
    let squared = tilde.mul(&tilde);
    let w = WeightSpec::ClassicalMeixner {
        beta: beta.clone(),
        c: c.clone(),
    };
    let sum = orthogonality_sum(&squared, &w, 0, cutoff)?;
    let beta_int = beta
        .numerator()
        .try_into()
        .map_err(|_| Error::InvalidParameter("beta too large for diagonal check".into()))?;
    let prefactor = (Rational::one() - c).pow_i64(beta_int);
    let lo = (&sum.partial - &sum.tail_bound) * prefactor.clone();
    let hi = (&sum.partial + &sum.tail_bound) * prefactor;
    let target = Rational::from_bigint(factorial(n))
        / (c.pow_i64(n as i64) * pochhammer(beta, n));
    let pass = lo <= target && target <= hi;
    Ok(DiagonalCheck {
        n,
        target,
        lo,
        hi,
        pass,
    })
}
