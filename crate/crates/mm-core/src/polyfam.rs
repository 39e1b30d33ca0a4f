//! The polynomial families: classical Meixner, multiple Meixner of the first
//! and second kind, and multiple Charlier.
//!
//! Each family is built from its explicit double-sum formula. The Rodrigues
//! evaluators apply the nested backward-difference operators literally on the
//! integer grid and serve as an independent oracle for the explicit formulas;
//! the generating-function check compares series-engine coefficients against
//! polynomial values at sampled rational points.
//!
//! First kind: orthogonality splits over r negative binomial weights
//! (beta)_k c_j^k / k! sharing beta. Second kind: weights (beta_j)_k c^k / k!
//! sharing c, with beta_i - beta_j never an integer. Charlier: Poisson
//! weights a_j^k / k!.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiindex::{indices_up_to_total, MultiIndex};
use crate::poly::{neg_x_pochhammer, rising_pochhammer, DensePoly};
use crate::rational::{binomial, factorial, pochhammer, Rational};
use crate::series::{one_plus_linear, TruncatedSeries};

/// Parameters (beta; c_1, ..., c_r) of the first kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeixnerFirstParams {
    beta: Rational,
    c: Vec<Rational>,
}

impl MeixnerFirstParams {
    pub fn new(beta: Rational, c: Vec<Rational>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidParameter("need at least one c value".into()));
        }
        if !(beta > Rational::zero()) {
            return Err(Error::InvalidParameter(format!("beta must be > 0, got {beta}")));
        }
        for cj in &c {
            if !(cj > &Rational::zero() && cj < &Rational::one()) {
                return Err(Error::InvalidParameter(format!(
                    "c values must satisfy 0 < c < 1, got {cj}"
                )));
            }
        }
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                if c[i] == c[j] {
                    return Err(Error::InvalidParameter(
                        "c values must be pairwise distinct".into(),
                    ));
                }
            }
        }
        Ok(MeixnerFirstParams { beta, c })
    }

    pub fn r(&self) -> usize {
        self.c.len()
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    fn check_len(&self, n: &MultiIndex) -> Result<()> {
        if n.len() != self.r() {
            return Err(Error::ShapeMismatch(format!(
                "multi-index length {} vs r = {}",
                n.len(),
                self.r()
            )));
        }
        Ok(())
    }
}

/// Parameters (beta_1, ..., beta_r; c) of the second kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeixnerSecondParams {
    betas: Vec<Rational>,
    c: Rational,
}

impl MeixnerSecondParams {
    pub fn new(betas: Vec<Rational>, c: Rational) -> Result<Self> {
        let p = Self::new_relaxed(betas, c)?;
        for i in 0..p.betas.len() {
            for j in i + 1..p.betas.len() {
                if (&p.betas[i] - &p.betas[j]).is_integer() {
                    return Err(Error::InvalidParameter(format!(
                        "beta differences must not be integers: beta_{} - beta_{} = {}",
                        i + 1,
                        j + 1,
                        &p.betas[i] - &p.betas[j]
                    )));
                }
            }
        }
        Ok(p)
    }

    /// Validates positivity, the c range and distinctness but not the
    /// integer-difference condition. The explicit formula and generating
    /// function remain well defined without it; the recurrence and the
    /// oscillator construction require the full `new`.
    pub fn new_relaxed(betas: Vec<Rational>, c: Rational) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::InvalidParameter("need at least one beta value".into()));
        }
        for b in &betas {
            if !(b > &Rational::zero()) {
                return Err(Error::InvalidParameter(format!("beta must be > 0, got {b}")));
            }
        }
        if !(c > Rational::zero() && c < Rational::one()) {
            return Err(Error::InvalidParameter(format!(
                "c must satisfy 0 < c < 1, got {c}"
            )));
        }
        for i in 0..betas.len() {
            for j in i + 1..betas.len() {
                if betas[i] == betas[j] {
                    return Err(Error::InvalidParameter(
                        "beta values must be pairwise distinct".into(),
                    ));
                }
            }
        }
        Ok(MeixnerSecondParams { betas, c })
    }

    pub fn r(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[Rational] {
        &self.betas
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    fn check_len(&self, n: &MultiIndex) -> Result<()> {
        if n.len() != self.r() {
            return Err(Error::ShapeMismatch(format!(
                "multi-index length {} vs r = {}",
                n.len(),
                self.r()
            )));
        }
        Ok(())
    }
}

/// Parameters (a_1, ..., a_r) of the multiple Charlier family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharlierParams {
    a: Vec<Rational>,
}

impl CharlierParams {
    pub fn new(a: Vec<Rational>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidParameter("need at least one a value".into()));
        }
        for aj in &a {
            if !(aj > &Rational::zero()) {
                return Err(Error::InvalidParameter(format!("a must be > 0, got {aj}")));
            }
        }
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if a[i] == a[j] {
                    return Err(Error::InvalidParameter(
                        "a values must be pairwise distinct".into(),
                    ));
                }
            }
        }
        Ok(CharlierParams { a })
    }

    pub fn r(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }
}

/// Iterate the box 0 <= k_j <= n_j (odometer order) together with |k| and
/// the product of binomial coefficients binom(n_j, k_j), shared by every
/// explicit double sum. No allocation per step.
fn for_each_inner_index<F: FnMut(&[usize], usize, &Rational)>(n: &MultiIndex, mut f: F) {
    let caps = n.entries();
    let r = caps.len();
    let binom_rows: Vec<Vec<Rational>> = caps
        .iter()
        .map(|&nj| {
            (0..=nj)
                .map(|k| Rational::from_bigint(binomial(nj, k)))
                .collect()
        })
        .collect();
    let mut k = vec![0usize; r];
    let mut total = 0usize;
    loop {
        let mut b = binom_rows[0][k[0]].clone();
        for j in 1..r {
            b *= &binom_rows[j][k[j]];
        }
        f(&k, total, &b);
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == r {
                return;
            }
            if k[pos] < caps[pos] {
                k[pos] += 1;
                total += 1;
                break;
            }
            total -= k[pos];
            k[pos] = 0;
            pos += 1;
        }
    }
}

/// n_1! ... n_r! as a rational.
pub fn multi_factorial(n: &MultiIndex) -> Rational {
    let mut acc = Rational::one();
    for &e in n.entries() {
        acc *= &Rational::from_bigint(factorial(e));
    }
    acc
}

/// Normalized classical Meixner polynomial via the 2F1 sum:
/// Mt_n(x) = sum_k binom(n,k) (-x)_k / (beta)_k ((1-c)/c)^k, with Mt_n(0) = 1.
pub fn meixner_classical_tilde(n: usize, beta: &Rational, c: &Rational) -> Result<DensePoly> {
    check_classical(beta, c)?;
    let ratio = (Rational::one() - c) / c.clone();
    let mut acc = DensePoly::zero();
    let mut ratio_pow = Rational::one();
    for k in 0..=n {
        let scalar = Rational::from_bigint(binomial(n, k))
            .checked_div(&pochhammer(beta, k))?
            * &ratio_pow;
        acc = acc.add(&neg_x_pochhammer(k).scale(&scalar));
        ratio_pow *= &ratio;
    }
    Ok(acc)
}

/// Value of Mt_n at a rational point, computed from the same sum.
pub fn meixner_classical_tilde_value(
    n: usize,
    beta: &Rational,
    c: &Rational,
    x: &Rational,
) -> Result<Rational> {
    check_classical(beta, c)?;
    let ratio = (Rational::one() - c) / c.clone();
    let mut acc = Rational::zero();
    let mut ratio_pow = Rational::one();
    for k in 0..=n {
        let term = Rational::from_bigint(binomial(n, k))
            .checked_div(&pochhammer(beta, k))?
            * &ratio_pow
            * pochhammer(&-x, k);
        acc += &term;
        ratio_pow *= &ratio;
    }
    Ok(acc)
}

/// Monic classical Meixner polynomial M_n = (beta)_n c^n/(c-1)^n Mt_n.
pub fn meixner_classical(n: usize, beta: &Rational, c: &Rational) -> Result<DensePoly> {
    let tilde = meixner_classical_tilde(n, beta, c)?;
    let factor = pochhammer(beta, n)
        * (c / &(c - &Rational::one())).pow_i64(n as i64);
    Ok(tilde.scale(&factor))
}

fn check_classical(beta: &Rational, c: &Rational) -> Result<()> {
    if !(beta > &Rational::zero()) {
        return Err(Error::InvalidParameter(format!("beta must be > 0, got {beta}")));
    }
    if !(c > &Rational::zero() && c < &Rational::one()) {
        return Err(Error::InvalidParameter(format!(
            "c must satisfy 0 < c < 1, got {c}"
        )));
    }
    Ok(())
}

/// Multiple Meixner polynomial of the first kind, explicit double sum:
/// M_n(x) = sum_k prod_j binom(n_j,k_j) (-x)_{|k|}
///          prod_j c_j^{n_j-k_j}/(c_j-1)^{n_j} (beta+x)_{|n|-|k|}.
/// The inner sum is grouped by m = |k|: the m-th scalar weight is the z^m
/// coefficient of prod_j (1 + z/c_j)^{n_j}, scaled by prod_j (c_j/(c_j-1))^{n_j}.
pub fn meixner1_explicit(n: &MultiIndex, p: &MeixnerFirstParams) -> Result<DensePoly> {
    p.check_len(n)?;
    let total = n.total();
    let beta = p.beta();

    // weight[m] = sum over |k| = m of prod_j binom(n_j,k_j) c_j^{-k_j}
    let inv_c: Vec<Vec<Rational>> = n
        .entries()
        .iter()
        .enumerate()
        .map(|(j, &nj)| inverse_power_table(&p.c()[j], nj))
        .collect();
    let mut weight = vec![Rational::zero(); total + 1];
    for_each_inner_index(n, |k, kt, binom_prod| {
        let mut w = binom_prod.clone();
        for (j, &kj) in k.iter().enumerate() {
            w *= &inv_c[j][kj];
        }
        weight[kt] += &w;
    });

    let mut acc = DensePoly::zero();
    let mut falling = DensePoly::one(); // (-x)_m, extended incrementally
    for (m, w) in weight.iter().enumerate() {
        if m > 0 {
            falling = falling.mul(&DensePoly::from_coeffs(vec![
                Rational::integer(m as i64 - 1),
                Rational::integer(-1),
            ]));
        }
        if w.is_zero() {
            continue;
        }
        let rising = rising_pochhammer(beta, total - m);
        acc = acc.add(&falling.mul(&rising).scale(w));
    }

    let mut prefactor = Rational::one();
    for (j, &nj) in n.entries().iter().enumerate() {
        prefactor *= &(&p.c()[j] / &(&p.c()[j] - &Rational::one())).pow_i64(nj as i64);
    }
    Ok(acc.scale(&prefactor))
}

/// Multiple Meixner polynomial of the second kind, explicit double sum with
/// the shifted Pochhammer factors (beta_j + x - k_1 - ... - k_{j-1})_{n_j - k_j}.
pub fn meixner2_explicit(n: &MultiIndex, p: &MeixnerSecondParams) -> Result<DensePoly> {
    p.check_len(n)?;
    let total = n.total();
    let c = p.c();

    let mut falling = Vec::with_capacity(total + 1); // (-x)_m table
    falling.push(DensePoly::one());
    for m in 0..total {
        let next = falling[m].mul(&DensePoly::from_coeffs(vec![
            Rational::integer(m as i64),
            Rational::integer(-1),
        ]));
        falling.push(next);
    }

    let mut acc = DensePoly::zero();
    for_each_inner_index(n, |k, kt, binom_prod| {
        let mut term = falling[kt].scale(&(binom_prod * c.pow_i64((total - kt) as i64)));
        let mut shift = 0usize;
        for (j, &kj) in k.iter().enumerate() {
            let base = &p.betas()[j] - &Rational::integer(shift as i64);
            term = term.mul(&rising_pochhammer(&base, n.get(j) - kj));
            shift += kj;
        }
        acc = acc.add(&term);
    });

    let denom = (c - &Rational::one()).pow_i64(total as i64);
    Ok(acc.scale(&denom.recip()?))
}

/// Multiple Charlier polynomial from the double sum
/// C_n(x) = (-1)^{|n|} sum_k prod_j binom(n_j,k_j) (-x)_{|k|} prod_j a_j^{n_j-k_j}.
/// The (-1)^{|n|} prefactor is part of the definition and makes the result
/// monic; no further normalization is applied.
pub fn charlier_explicit(n: &MultiIndex, p: &CharlierParams) -> Result<DensePoly> {
    if n.len() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "multi-index length {} vs r = {}",
            n.len(),
            p.r()
        )));
    }
    let total = n.total();
    let a_pow: Vec<Vec<Rational>> = n
        .entries()
        .iter()
        .enumerate()
        .map(|(j, &nj)| power_table(&p.a()[j], nj))
        .collect();
    let mut weight = vec![Rational::zero(); total + 1];
    for_each_inner_index(n, |k, kt, binom_prod| {
        let mut w = binom_prod.clone();
        for (j, &kj) in k.iter().enumerate() {
            w *= &a_pow[j][n.get(j) - kj];
        }
        weight[kt] += &w;
    });

    let mut acc = DensePoly::zero();
    let mut falling = DensePoly::one();
    for (m, w) in weight.iter().enumerate() {
        if m > 0 {
            falling = falling.mul(&DensePoly::from_coeffs(vec![
                Rational::integer(m as i64 - 1),
                Rational::integer(-1),
            ]));
        }
        if !w.is_zero() {
            acc = acc.add(&falling.scale(w));
        }
    }
    let sign = if total % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    Ok(acc.scale(&sign))
}

/// Classical Charlier value C_n^(a)(x) = (-1)^n sum_k binom(n,k)(-x)_k a^{n-k};
/// monic of degree n. Used by the duality checks.
pub fn charlier_classical_value(n: usize, a: &Rational, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for k in 0..=n {
        acc += &(Rational::from_bigint(binomial(n, k))
            * pochhammer(&-x, k)
            * a.pow_i64((n - k) as i64));
    }
    let sign = if n % 2 == 0 { Rational::one() } else { -Rational::one() };
    acc * sign
}

/// Point evaluator for first-kind polynomials with Pochhammer and power
/// tables shared across many indices (the Fock-lattice eigenstates evaluate
/// hundreds).
pub struct Meixner1Evaluator {
    falling: Vec<Rational>,      // (-x)_m
    rising: Vec<Rational>,       // (beta + x)_m
    inv_c: Vec<Vec<Rational>>,   // c_j^{-k}
    monic_c: Vec<Vec<Rational>>, // (c_j/(c_j-1))^{n_j}
    pascal: Vec<Vec<Rational>>,
}

impl Meixner1Evaluator {
    pub fn new(params: &MeixnerFirstParams, x: &Rational, max_total: usize) -> Self {
        Meixner1Evaluator {
            falling: poch_table(&-x, max_total),
            rising: poch_table(&(params.beta() + x), max_total),
            inv_c: params
                .c()
                .iter()
                .map(|c| inverse_power_table(c, max_total))
                .collect(),
            monic_c: params
                .c()
                .iter()
                .map(|c| power_table(&(c / &(c - &Rational::one())), max_total))
                .collect(),
            pascal: pascal_table(max_total),
        }
    }

    pub fn value(&self, n: &MultiIndex) -> Rational {
        let total = n.total();
        assert!(total < self.falling.len(), "index beyond evaluator degree");
        // weight[m] = sum over |k| = m of prod_j binom(n_j,k_j) c_j^{-k_j},
        // accumulated mode by mode over the prefix total m
        let mut weight = vec![Rational::one()];
        for (j, &nj) in n.entries().iter().enumerate() {
            let mut next = vec![Rational::zero(); weight.len() + nj];
            for (m, wm) in weight.iter().enumerate() {
                if wm.is_zero() {
                    continue;
                }
                for kj in 0..=nj {
                    let step = &self.pascal[nj][kj] * &self.inv_c[j][kj];
                    next[m + kj] += &(wm * &step);
                }
            }
            weight = next;
        }
        let mut acc = Rational::zero();
        for (m, w) in weight.iter().enumerate() {
            if !w.is_zero() {
                acc += &(w * &self.falling[m] * &self.rising[total - m]);
            }
        }
        for (j, &nj) in n.entries().iter().enumerate() {
            acc *= &self.monic_c[j][nj];
        }
        acc
    }
}

/// Point evaluator for second-kind polynomials. The table
/// rising[j][s][l] = (beta_j + x - s)_l covers every shifted Pochhammer
/// factor that the double sum needs up to the given degree bounds.
pub struct Meixner2Evaluator {
    falling: Vec<Rational>,
    rising: Vec<Vec<Vec<Rational>>>,
    c_powers: Vec<Rational>,
    inv_c_minus_one: Vec<Rational>, // (c-1)^{-|n|}
    pascal: Vec<Vec<Rational>>,
}

impl Meixner2Evaluator {
    pub fn new(
        params: &MeixnerSecondParams,
        x: &Rational,
        max_total: usize,
        max_per_mode: usize,
    ) -> Self {
        let falling = poch_table(&-x, max_total);
        let rising = params
            .betas()
            .iter()
            .map(|beta| {
                (0..=max_total)
                    .map(|s| {
                        let base = beta + x - Rational::integer(s as i64);
                        poch_table(&base, max_per_mode)
                    })
                    .collect()
            })
            .collect();
        Meixner2Evaluator {
            falling,
            rising,
            c_powers: power_table(params.c(), max_total),
            inv_c_minus_one: inverse_power_table(&(params.c() - &Rational::one()), max_total),
            pascal: pascal_table(max_per_mode),
        }
    }

    pub fn value(&self, n: &MultiIndex) -> Rational {
        let total = n.total();
        assert!(total < self.falling.len(), "index beyond evaluator degree");
        // The shifted Pochhammer factor of mode j depends on the prefix sum
        // s = k_1 + ... + k_{j-1}, so the double sum folds left to right
        // with s as the only state.
        let mut partial = vec![Rational::one()];
        for (j, &nj) in n.entries().iter().enumerate() {
            let mut next = vec![Rational::zero(); partial.len() + nj];
            for (s, fs) in partial.iter().enumerate() {
                if fs.is_zero() {
                    continue;
                }
                for kj in 0..=nj {
                    let step = &self.pascal[nj][kj] * &self.rising[j][s][nj - kj];
                    next[s + kj] += &(fs * &step);
                }
            }
            partial = next;
        }
        let mut acc = Rational::zero();
        for (s, fs) in partial.iter().enumerate() {
            if fs.is_zero() {
                continue;
            }
            let mut term = fs * &self.falling[s];
            if total > s {
                term *= &self.c_powers[total - s];
            }
            acc += &term;
        }
        acc * &self.inv_c_minus_one[total]
    }
}

/// Point evaluator for multiple Charlier polynomials.
pub struct CharlierEvaluator {
    falling: Vec<Rational>,
    a_powers: Vec<Vec<Rational>>,
    pascal: Vec<Vec<Rational>>,
}

impl CharlierEvaluator {
    pub fn new(params: &CharlierParams, x: &Rational, max_per_mode: usize) -> Self {
        let max_total = max_per_mode * params.r();
        CharlierEvaluator {
            falling: poch_table(&-x, max_total),
            a_powers: params
                .a()
                .iter()
                .map(|a| power_table(a, max_per_mode))
                .collect(),
            pascal: pascal_table(max_per_mode),
        }
    }

    pub fn value(&self, n: &MultiIndex) -> Rational {
        let total = n.total();
        assert!(total < self.falling.len(), "index beyond evaluator degree");
        let mut weight = vec![Rational::one()];
        for (j, &nj) in n.entries().iter().enumerate() {
            let mut next = vec![Rational::zero(); weight.len() + nj];
            for (m, wm) in weight.iter().enumerate() {
                if wm.is_zero() {
                    continue;
                }
                for kj in 0..=nj {
                    let step = &self.pascal[nj][kj] * &self.a_powers[j][nj - kj];
                    next[m + kj] += &(wm * &step);
                }
            }
            weight = next;
        }
        let mut acc = Rational::zero();
        for (m, w) in weight.iter().enumerate() {
            if !w.is_zero() {
                acc += &(w * &self.falling[m]);
            }
        }
        if total % 2 == 0 {
            acc
        } else {
            -acc
        }
    }
}

fn poch_table(base: &Rational, len: usize) -> Vec<Rational> {
    let mut table = Vec::with_capacity(len + 1);
    table.push(Rational::one());
    let mut acc = Rational::one();
    let mut factor = base.clone();
    for _ in 0..len {
        acc *= &factor;
        factor += &Rational::one();
        table.push(acc.clone());
    }
    table
}

fn power_table(base: &Rational, len: usize) -> Vec<Rational> {
    let mut table = Vec::with_capacity(len + 1);
    table.push(Rational::one());
    let mut acc = Rational::one();
    for _ in 0..len {
        acc *= base;
        table.push(acc.clone());
    }
    table
}

fn inverse_power_table(base: &Rational, len: usize) -> Vec<Rational> {
    power_table(&(Rational::one() / base.clone()), len)
}

fn pascal_table(rows: usize) -> Vec<Vec<Rational>> {
    (0..=rows)
        .map(|n| {
            (0..=n)
                .map(|k| Rational::from_bigint(binomial(n, k)))
                .collect()
        })
        .collect()
}

/// First-kind value via the explicit sum (single-shot convenience wrapper).
pub fn meixner1_value(n: &MultiIndex, p: &MeixnerFirstParams, x: &Rational) -> Result<Rational> {
    p.check_len(n)?;
    Ok(Meixner1Evaluator::new(p, x, n.total()).value(n))
}

/// Second-kind value via the explicit sum.
pub fn meixner2_value(n: &MultiIndex, p: &MeixnerSecondParams, x: &Rational) -> Result<Rational> {
    p.check_len(n)?;
    let max_mode = n.entries().iter().copied().max().unwrap_or(0);
    Ok(Meixner2Evaluator::new(p, x, n.total(), max_mode).value(n))
}

/// Multiple Charlier value via the explicit sum.
pub fn charlier_value(n: &MultiIndex, p: &CharlierParams, x: &Rational) -> Result<Rational> {
    if n.len() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "multi-index length {} vs r = {}",
            n.len(),
            p.r()
        )));
    }
    let max_mode = n.entries().iter().copied().max().unwrap_or(0);
    Ok(CharlierEvaluator::new(p, x, max_mode).value(n))
}

/// First-kind Rodrigues evaluation at an integer grid point x >= 0.
///
/// Applies the operator chain literally: starting from the table of
/// f(m) = (beta + |n|)_m / m! (zero for m < 0, where 1/Gamma vanishes) on the
/// window [x - |n|, x], each mode multiplies pointwise by c_j^m, takes n_j
/// backward differences, and divides by c_j^m again; the prefactors of the
/// Rodrigues formula are applied at the end.
pub fn rodrigues1_eval(n: &MultiIndex, p: &MeixnerFirstParams, x: usize) -> Result<Rational> {
    p.check_len(n)?;
    let total = n.total();
    let beta = p.beta();
    let lo = x as i64 - total as i64;

    let shifted_beta = beta + &Rational::integer(total as i64);
    let mut window: Vec<Rational> = (0..=total as i64)
        .map(|i| {
            let m = lo + i;
            if m < 0 {
                Rational::zero()
            } else {
                pochhammer(&shifted_beta, m as usize)
                    / Rational::from_bigint(factorial(m as usize))
            }
        })
        .collect();
    let mut window_lo = lo;

    for j in (0..p.r()).rev() {
        let cj = &p.c()[j];
        for (i, v) in window.iter_mut().enumerate() {
            *v *= &cj.pow_i64(window_lo + i as i64);
        }
        for _ in 0..n.get(j) {
            window = window.windows(2).map(|w| &w[1] - &w[0]).collect();
            window_lo += 1;
        }
        for (i, v) in window.iter_mut().enumerate() {
            *v *= &cj.pow_i64(-(window_lo + i as i64));
        }
    }
    debug_assert_eq!(window.len(), 1);
    debug_assert_eq!(window_lo, x as i64);

    let mut prefactor = pochhammer(beta, total) * Rational::from_bigint(factorial(x))
        / pochhammer(beta, x);
    for (j, &nj) in n.entries().iter().enumerate() {
        prefactor *= &(&p.c()[j] / &(&p.c()[j] - &Rational::one())).pow_i64(nj as i64);
    }
    Ok(prefactor * window[0].clone())
}

/// Second-kind Rodrigues evaluation at an integer grid point x >= 0.
///
/// Each mode applies Gamma(beta_j)/Gamma(beta_j+x) nabla^{n_j}
/// Gamma(beta_j+n_j+x)/Gamma(beta_j+n_j) with nabla expanded binomially; the
/// two Gamma ratios combine into the pole-free Pochhammer quotient
/// (beta_j + x)_{n_j - k} / (beta_j)_{n_j}, which stays exact on window
/// points below zero even when some beta_j is an integer.
pub fn rodrigues2_eval(n: &MultiIndex, p: &MeixnerSecondParams, x: usize) -> Result<Rational> {
    p.check_len(n)?;
    let total = n.total();
    let c = p.c();
    let lo = x as i64 - total as i64;

    let mut window: Vec<Rational> = (0..=total as i64)
        .map(|i| {
            let m = lo + i;
            if m < 0 {
                Rational::zero()
            } else {
                c.pow_i64(m) / Rational::from_bigint(factorial(m as usize))
            }
        })
        .collect();
    let mut window_lo = lo;

    for j in (0..p.r()).rev() {
        let nj = n.get(j);
        if nj == 0 {
            continue; // the two Gamma ratios cancel exactly
        }
        let beta_j = &p.betas()[j];
        let norm = pochhammer(beta_j, nj);
        let new_lo = window_lo + nj as i64;
        let mut next = Vec::with_capacity(window.len() - nj);
        for i in 0..window.len() - nj {
            let xi = new_lo + i as i64; // evaluation point of the output
            let base = beta_j + &Rational::integer(xi);
            let mut acc = Rational::zero();
            for k in 0..=nj {
                let g = &window[i + nj - k];
                if g.is_zero() {
                    continue;
                }
                let mut term = Rational::from_bigint(binomial(nj, k)) * pochhammer(&base, nj - k);
                if k % 2 == 1 {
                    term = -term;
                }
                acc += &(term * g);
            }
            next.push(acc / norm.clone());
        }
        window = next;
        window_lo = new_lo;
    }
    debug_assert_eq!(window.len(), 1);
    debug_assert_eq!(window_lo, x as i64);

    let mut prefactor = (c / &(c - &Rational::one())).pow_i64(total as i64)
        * Rational::from_bigint(factorial(x))
        / c.pow_i64(x as i64);
    for (j, &nj) in n.entries().iter().enumerate() {
        prefactor *= &pochhammer(&p.betas()[j], nj);
    }
    Ok(prefactor * window[0].clone())
}

/// Which multiple Meixner family a dispatching operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeixnerKind {
    First,
    Second,
}

/// One compared coefficient of a generating-function check.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratingEntry {
    pub x: Rational,
    pub n: MultiIndex,
    pub series_coeff: Rational,
    pub expected: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratingReport {
    pub entries: Vec<GeneratingEntry>,
}

impl GeneratingReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GeneratingEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Expand the first-kind generating function
/// (1 + sum t_j/(1-c_j))^x (1 + sum c_j t_j/(1-c_j))^{-x-beta}
/// to total degree D and compare each coefficient of t^n against
/// M_n(x) / (n_1! ... n_r!).
pub fn generating_check_first(
    p: &MeixnerFirstParams,
    max_degree: usize,
    x_samples: &[Rational],
) -> Result<GeneratingReport> {
    let r = p.r();
    let mut entries = Vec::new();
    for x in x_samples {
        let lin1: Vec<Rational> = p
            .c()
            .iter()
            .map(|c| (Rational::one() - c).recip())
            .collect::<Result<_>>()?;
        let lin2: Vec<Rational> = p
            .c()
            .iter()
            .map(|c| c / &(Rational::one() - c))
            .collect();
        let rhs = one_plus_linear(&lin1, max_degree)
            .pow(x)?
            .mul(&one_plus_linear(&lin2, max_degree).pow(&(-x - p.beta()))?)?;
        let eval = Meixner1Evaluator::new(p, x, max_degree);
        for n in indices_up_to_total(r, max_degree) {
            let expected = eval.value(&n) / multi_factorial(&n);
            let series_coeff = rhs.coeff(&n);
            entries.push(GeneratingEntry {
                x: x.clone(),
                pass: series_coeff == expected,
                n,
                series_coeff,
                expected,
            });
        }
    }
    Ok(GeneratingReport { entries })
}

/// Expand the second-kind generating function
/// (1 - (1/c)(1 - prod_j (1 + c t_j/(1-c))))^x prod_j (1 + c t_j/(1-c))^{-x-beta_j}
/// and compare coefficients as in the first-kind check.
pub fn generating_check_second(
    p: &MeixnerSecondParams,
    max_degree: usize,
    x_samples: &[Rational],
) -> Result<GeneratingReport> {
    let r = p.r();
    let c = p.c();
    let a = c / &(Rational::one() - c);
    let mut entries = Vec::new();
    for x in x_samples {
        let mut product = TruncatedSeries::one(r, max_degree);
        let mut factors = TruncatedSeries::one(r, max_degree);
        for j in 0..r {
            let mut lambdas = vec![Rational::zero(); r];
            lambdas[j] = a.clone();
            let linear = one_plus_linear(&lambdas, max_degree);
            product = product.mul(&linear)?;
            factors = factors.mul(&linear.pow(&(-x - &p.betas()[j]))?)?;
        }
        // 1 - (1/c)(1 - P) = (1 - 1/c) + P/c
        let c_inv = c.recip()?;
        let base = product
            .scale(&c_inv)
            .add(&TruncatedSeries::constant(
                Rational::one() - c_inv.clone(),
                r,
                max_degree,
            ))?;
        let rhs = base.pow(x)?.mul(&factors)?;
        let max_mode = max_degree;
        let eval = Meixner2Evaluator::new(p, x, max_degree, max_mode);
        for n in indices_up_to_total(r, max_degree) {
            let expected = eval.value(&n) / multi_factorial(&n);
            let series_coeff = rhs.coeff(&n);
            entries.push(GeneratingEntry {
                x: x.clone(),
                pass: series_coeff == expected,
                n,
                series_coeff,
                expected,
            });
        }
    }
    Ok(GeneratingReport { entries })
}

/// Evaluate the multiple Meixner polynomial at the Charlier-limit parameter
/// substitution: first kind (beta, c_j = a_j/beta), second kind
/// (beta_j = a_j beta, c = 1/beta). The caller compares the exact value
/// against the Charlier value as beta grows.
pub fn charlier_limit_probe(
    kind: MeixnerKind,
    n: &MultiIndex,
    a: &[Rational],
    x: &Rational,
    beta_scale: &Rational,
) -> Result<Rational> {
    if a.len() != n.len() {
        return Err(Error::ShapeMismatch(format!(
            "multi-index length {} vs {} a values",
            n.len(),
            a.len()
        )));
    }
    match kind {
        MeixnerKind::First => {
            let c: Vec<Rational> = a.iter().map(|aj| aj / beta_scale).collect();
            let p = MeixnerFirstParams::new(beta_scale.clone(), c)?;
            meixner1_value(n, &p, x)
        }
        MeixnerKind::Second => {
            let betas: Vec<Rational> = a.iter().map(|aj| aj * beta_scale).collect();
            let c = beta_scale.recip()?;
            // Integer beta differences are tolerated here: the explicit sum
            // stays well defined and the limit statement needs large beta.
            let p = MeixnerSecondParams::new_relaxed(betas, c)?;
            meixner2_value(n, &p, x)
        }
    }
}
