//! Square-summability of the eigenstate norm series, the admissible-region
//! tests, normalization constants, duality identities and radius probes.
//!
//! The norm series for the three families are
//!   first kind:  sum_n M_n(x)^2 t^n / (n! (beta)_{|n|})
//!   second kind: sum_n M_n(x)^2 t^n / (n! prod_j (beta_j)_{n_j})
//!   Charlier:    sum_n C_n(x)^2 t^n / n!
//! summed shell by shell (|n| = d). They converge exactly when x is a
//! nonnegative integer (for admissible t), which is what selects the
//! physical spectrum.
//!
//! The convergence classifier is a finite probe aligned with the root-test
//! structure of the dichotomy: shell sums that keep decaying geometrically
//! over the last eight shells with a small extrapolated tail count as
//! Converges; shell sums that stop decreasing (or partials beyond 10^12)
//! count as Diverges; anything else is an honest Inconclusive.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiindex::{shell, MultiIndex};
use crate::polyfam::{
    charlier_classical_value, meixner_classical_tilde_value, multi_factorial, CharlierEvaluator,
    CharlierParams, Meixner1Evaluator, Meixner2Evaluator, MeixnerFirstParams,
    MeixnerSecondParams,
};
use crate::rational::{pochhammer, Rational};

/// Positive weights t_1, ..., t_r of the renormalized Fock basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightVectorT(Vec<Rational>);

impl WeightVectorT {
    pub fn new(t: Vec<Rational>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::InvalidParameter("need at least one t value".into()));
        }
        for ti in &t {
            if !(ti > &Rational::zero()) {
                return Err(Error::InvalidParameter(format!(
                    "t values must be positive, got {ti}"
                )));
            }
        }
        Ok(WeightVectorT(t))
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    /// t^n = prod t_j^{n_j}.
    pub fn power(&self, n: &MultiIndex) -> Rational {
        let mut acc = Rational::one();
        for (tj, &nj) in self.0.iter().zip(n.entries()) {
            acc *= &tj.pow_i64(nj as i64);
        }
        acc
    }
}

/// Membership in the admissible region A cap (union of B_i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionMembership {
    pub in_a: bool,
    pub in_b: Vec<bool>,
    pub admissible: bool,
}

/// First kind: A_1 requires sum (c_j/(1-c_j))^2 t_j < 1 and B_i requires
/// t_i > (1-c_i)^2.
pub fn region_membership_first(t: &WeightVectorT, p: &MeixnerFirstParams) -> Result<RegionMembership> {
    if t.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "t length {} vs r = {}",
            t.r(),
            p.r()
        )));
    }
    let one = Rational::one();
    let mut sum = Rational::zero();
    for (tj, cj) in t.values().iter().zip(p.c()) {
        let ratio = cj / &(&one - cj);
        sum += &(&ratio * &ratio * tj);
    }
    let in_a = sum < one;
    let in_b: Vec<bool> = t
        .values()
        .iter()
        .zip(p.c())
        .map(|(ti, ci)| {
            let gap = &one - ci;
            ti > &(&gap * &gap)
        })
        .collect();
    let admissible = in_a && in_b.iter().any(|&b| b);
    Ok(RegionMembership {
        in_a,
        in_b,
        admissible,
    })
}

/// Second kind: A_2 requires t_i < ((1-c)/c)^2 for every i and B_i requires
/// t_i > (1-c)^2.
pub fn region_membership_second(
    t: &WeightVectorT,
    p: &MeixnerSecondParams,
) -> Result<RegionMembership> {
    if t.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "t length {} vs r = {}",
            t.r(),
            p.r()
        )));
    }
    let one = Rational::one();
    let upper = {
        let ratio = (&one - p.c()) / p.c().clone();
        &ratio * &ratio
    };
    let lower = {
        let gap = &one - p.c();
        &gap * &gap
    };
    let in_a = t.values().iter().all(|ti| ti < &upper);
    let in_b: Vec<bool> = t.values().iter().map(|ti| ti > &lower).collect();
    let admissible = in_a && in_b.iter().any(|&b| b);
    Ok(RegionMembership {
        in_a,
        in_b,
        admissible,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

/// Shell-by-shell probe of a norm series.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesProbe {
    pub x: Rational,
    pub t: WeightVectorT,
    /// partials[d] = sum over |n| <= d.
    pub partials: Vec<Rational>,
    /// shell_terms[d] = sum over |n| = d (nonnegative).
    pub shell_terms: Vec<Rational>,
    pub verdict: Verdict,
}

const CLASSIFY_WINDOW: usize = 8;

fn blowup_limit() -> Rational {
    Rational::integer(1_000_000_000_000)
}

/// The extrapolated tail must stay an order of magnitude below the partial
/// before a Converges verdict is issued.
fn tail_tolerance() -> Rational {
    Rational::new(1, 10)
}

fn classify(shell_terms: &[Rational], partials: &[Rational]) -> Verdict {
    if partials.iter().any(|p| p > &blowup_limit()) {
        return Verdict::Diverges;
    }
    if shell_terms.len() < CLASSIFY_WINDOW + 1 {
        return Verdict::Inconclusive;
    }
    let tail = &shell_terms[shell_terms.len() - (CLASSIFY_WINDOW + 1)..];
    if tail.iter().all(|s| s.is_zero()) {
        return Verdict::Converges;
    }
    if tail.windows(2).all(|w| w[1] >= w[0]) {
        return Verdict::Diverges;
    }
    if tail.windows(2).all(|w| w[1] < w[0]) {
        // geometric extrapolation with the worst recent ratio
        let mut q = Rational::zero();
        for w in tail.windows(2) {
            if !w[0].is_zero() {
                q = q.max(&w[1] / &w[0]);
            }
        }
        if q < Rational::one() {
            let last = shell_terms.last().unwrap();
            let total = partials.last().unwrap();
            let tail_estimate = last * &q / (Rational::one() - q.clone());
            if tail_estimate < tail_tolerance() * total.clone() {
                return Verdict::Converges;
            }
        }
    }
    Verdict::Inconclusive
}

/// Recommended probe depth per dimension (shell enumeration cost grows like
/// binom(d + r - 1, r - 1)).
pub fn default_probe_depth(r: usize) -> usize {
    match r {
        1 => 30,
        2 => 14,
        _ => 10,
    }
}

fn probe_from_terms<F: FnMut(&MultiIndex) -> Rational>(
    r: usize,
    x: &Rational,
    t: &WeightVectorT,
    depth: usize,
    mut term: F,
) -> SeriesProbe {
    let mut partials = Vec::with_capacity(depth + 1);
    let mut shell_terms = Vec::with_capacity(depth + 1);
    let mut running = Rational::zero();
    for d in 0..=depth {
        let mut sigma = Rational::zero();
        for n in shell(r, d) {
            sigma += &term(&n);
        }
        running += &sigma;
        shell_terms.push(sigma);
        partials.push(running.clone());
    }
    let verdict = classify(&shell_terms, &partials);
    SeriesProbe {
        x: x.clone(),
        t: t.clone(),
        partials,
        shell_terms,
        verdict,
    }
}

/// First-kind norm series probe.
pub fn norm_series_first(
    x: &Rational,
    t: &WeightVectorT,
    p: &MeixnerFirstParams,
    depth: usize,
) -> Result<SeriesProbe> {
    if t.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "t length {} vs r = {}",
            t.r(),
            p.r()
        )));
    }
    let eval = Meixner1Evaluator::new(p, x, depth);
    Ok(probe_from_terms(p.r(), x, t, depth, |n| {
        let v = eval.value(n);
        &v * &v * t.power(n) / (multi_factorial(n) * pochhammer(p.beta(), n.total()))
    }))
}

/// Second-kind norm series probe.
pub fn norm_series_second(
    x: &Rational,
    t: &WeightVectorT,
    p: &MeixnerSecondParams,
    depth: usize,
) -> Result<SeriesProbe> {
    if t.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "t length {} vs r = {}",
            t.r(),
            p.r()
        )));
    }
    let eval = Meixner2Evaluator::new(p, x, depth, depth);
    Ok(probe_from_terms(p.r(), x, t, depth, |n| {
        let v = eval.value(n);
        let mut weight = multi_factorial(n);
        for (beta_j, &nj) in p.betas().iter().zip(n.entries()) {
            weight *= &pochhammer(beta_j, nj);
        }
        &v * &v * t.power(n) / weight
    }))
}

/// Multiple Charlier norm series probe (every positive t is admissible).
pub fn norm_series_charlier(
    x: &Rational,
    t: &WeightVectorT,
    p: &CharlierParams,
    depth: usize,
) -> Result<SeriesProbe> {
    if t.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "t length {} vs r = {}",
            t.r(),
            p.r()
        )));
    }
    let eval = CharlierEvaluator::new(p, x, depth);
    Ok(probe_from_terms(p.r(), x, t, depth, |n| {
        let v = eval.value(n);
        &v * &v * t.power(n) / multi_factorial(n)
    }))
}

/// Family dispatch for the probes.
#[derive(Clone, Debug)]
pub enum NormSeriesFamily {
    First(MeixnerFirstParams),
    Second(MeixnerSecondParams),
    Charlier(CharlierParams),
}

impl NormSeriesFamily {
    pub fn r(&self) -> usize {
        match self {
            NormSeriesFamily::First(p) => p.r(),
            NormSeriesFamily::Second(p) => p.r(),
            NormSeriesFamily::Charlier(p) => p.r(),
        }
    }

    pub fn probe(&self, x: &Rational, t: &WeightVectorT, depth: usize) -> Result<SeriesProbe> {
        match self {
            NormSeriesFamily::First(p) => norm_series_first(x, t, p, depth),
            NormSeriesFamily::Second(p) => norm_series_second(x, t, p, depth),
            NormSeriesFamily::Charlier(p) => norm_series_charlier(x, t, p, depth),
        }
    }

    /// Admissibility of t for the dichotomy: region membership for the two
    /// Meixner kinds, every positive t for Charlier.
    pub fn admissible(&self, t: &WeightVectorT) -> Result<bool> {
        match self {
            NormSeriesFamily::First(p) => Ok(region_membership_first(t, p)?.admissible),
            NormSeriesFamily::Second(p) => Ok(region_membership_second(t, p)?.admissible),
            NormSeriesFamily::Charlier(_) => Ok(true),
        }
    }
}

/// A normalization constant N_x = S^{-1/2} with a rigorous bracket; `value`
/// is the midpoint of [lo, hi], the one place where an irrational square
/// root enters.
#[derive(Clone, Debug, Serialize)]
pub struct NormalizationEstimate {
    pub value: Rational,
    pub lo: Rational,
    pub hi: Rational,
    /// Partial sum of the norm series and the geometric tail estimate that
    /// brackets the limit S in [series_lo, series_lo + tail_estimate].
    pub series_lo: Rational,
    pub tail_estimate: Rational,
}

impl NormalizationEstimate {
    pub fn half_width(&self) -> Rational {
        (&self.hi - &self.lo) / Rational::integer(2)
    }
}

/// Bracket sqrt(v) within eps: returns (lo, hi) with lo^2 <= v <= hi^2 and
/// hi - lo <= eps. Newton iteration from (v+1)/2, all rational.
pub fn sqrt_bracket(v: &Rational, eps: &Rational) -> Result<(Rational, Rational)> {
    if v.is_negative() {
        return Err(Error::InvalidParameter("sqrt of negative value".into()));
    }
    if v.is_zero() {
        return Ok((Rational::zero(), Rational::zero()));
    }
    let mut hi = (v + &Rational::one()) / Rational::integer(2);
    loop {
        let lo = v / &hi;
        if &(&hi - &lo) <= eps {
            return Ok((lo, hi));
        }
        hi = (&hi + &lo) / Rational::integer(2);
    }
}

/// N_x for integer x >= 0: run shells until the increment falls below
/// tol * partial and a geometric tail estimate is available, then bracket
/// 1/sqrt(S). Errors if t is not admissible or the budget is exhausted.
pub fn normalization_constant(
    family: &NormSeriesFamily,
    x: usize,
    t: &WeightVectorT,
    tol: &Rational,
    max_depth: usize,
) -> Result<NormalizationEstimate> {
    if !family.admissible(t)? {
        return Err(Error::NonAdmissible(format!(
            "t = {:?} fails the admissibility conditions",
            t.values()
        )));
    }
    let probe = family.probe(&Rational::integer(x as i64), t, max_depth)?;
    let shells = &probe.shell_terms;
    let partials = &probe.partials;

    let mut stop: Option<usize> = None;
    for d in 2..=max_depth {
        if shells[d] < tol * &partials[d] && !shells[d - 1].is_zero() {
            let q = &shells[d] / &shells[d - 1];
            if q < Rational::one() {
                stop = Some(d);
                break;
            }
        }
    }
    let d = match stop {
        Some(d) => d,
        None => {
            if max_depth == 0 {
                // degenerate single-term probe: bracket loosely by doubling
                let s = partials[0].clone();
                let eps = Rational::new(1, 1_000_000_000);
                let (lo_s, hi_s) = (s.clone(), &s * &Rational::integer(2));
                let (_, sq_hi) = sqrt_bracket(&hi_s, &eps)?;
                let (sq_lo, _) = sqrt_bracket(&lo_s, &eps)?;
                let lo = sq_hi.recip()?;
                let hi = sq_lo.recip()?;
                return Ok(NormalizationEstimate {
                    value: (&lo + &hi) / Rational::integer(2),
                    lo,
                    hi,
                    series_lo: s.clone(),
                    tail_estimate: s,
                });
            }
            return Err(Error::Inconclusive(format!(
                "norm series did not settle within depth {max_depth}"
            )));
        }
    };

    let q = &shells[d] / &shells[d - 1];
    let tail_estimate = &shells[d] * &q / (Rational::one() - q.clone());
    let series_lo = partials[d].clone();
    let series_hi = &series_lo + &tail_estimate;

    let eps = (tol * &series_lo).min(Rational::new(1, 1_000_000_000));
    let (_, sq_hi) = sqrt_bracket(&series_hi, &eps)?;
    let (sq_lo, _) = sqrt_bracket(&series_lo, &eps)?;
    let lo = sq_hi.recip()?;
    let hi = sq_lo.recip()?;
    Ok(NormalizationEstimate {
        value: (&lo + &hi) / Rational::integer(2),
        lo,
        hi,
        series_lo,
        tail_estimate,
    })
}

/// Meixner duality: Mt_n(k) = Mt_k(n), both sides from the explicit 2F1 sum.
pub fn duality_meixner(
    n: usize,
    k: usize,
    beta: &Rational,
    c: &Rational,
) -> Result<(Rational, Rational)> {
    let lhs = meixner_classical_tilde_value(n, beta, c, &Rational::integer(k as i64))?;
    let rhs = meixner_classical_tilde_value(k, beta, c, &Rational::integer(n as i64))?;
    Ok((lhs, rhs))
}

/// Charlier duality: C_n(k)/(-a)^n = C_k(n)/(-a)^k.
pub fn duality_charlier(n: usize, k: usize, a: &Rational) -> (Rational, Rational) {
    let neg_a = -a;
    let lhs = charlier_classical_value(n, a, &Rational::integer(k as i64))
        / neg_a.pow_i64(n as i64);
    let rhs = charlier_classical_value(k, a, &Rational::integer(n as i64))
        / neg_a.pow_i64(k as i64);
    (lhs, rhs)
}

/// Empirical radius-of-convergence probe for the classical Meixner
/// generating function: the D-th root of |M_D(x)|/D!, with the exact
/// magnitudes |M_d(x)|/d! carried along. The limit of the root is
/// 1/(1-c) for x outside N and c/(1-c) for x in N.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusProbe {
    pub estimate: f64,
    pub values: Vec<Rational>,
}

pub fn radius_probe(
    x: &Rational,
    beta: &Rational,
    c: &Rational,
    depth: usize,
) -> Result<RadiusProbe> {
    let mut values = Vec::with_capacity(depth + 1);
    let mut monic_factor = Rational::one();
    let scale = c / &(c - &Rational::one());
    let mut factorial_acc = Rational::one();
    for d in 0..=depth {
        if d > 0 {
            monic_factor = monic_factor * &scale * (beta + &Rational::integer(d as i64 - 1));
            factorial_acc *= &Rational::integer(d as i64);
        }
        let value = meixner_classical_tilde_value(d, beta, c, x)? * &monic_factor;
        values.push((value / factorial_acc.clone()).abs());
    }
    let last = values.last().unwrap().to_f64();
    let estimate = last.powf(1.0 / depth as f64);
    Ok(RadiusProbe { estimate, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn rats(ss: &[&str]) -> Vec<Rational> {
        ss.iter().map(|s| rat(s)).collect()
    }

    fn tvec(ss: &[&str]) -> WeightVectorT {
        WeightVectorT::new(rats(ss)).unwrap()
    }

    fn first(beta: &str, c: &[&str]) -> MeixnerFirstParams {
        MeixnerFirstParams::new(rat(beta), rats(c)).unwrap()
    }

    fn second(betas: &[&str], c: &str) -> MeixnerSecondParams {
        MeixnerSecondParams::new(rats(betas), rat(c)).unwrap()
    }

    #[test]
    fn region_first_kind_canonical_choice() {
        // t_j = (1-c_j)^2/c_j for c = (1/3, 1/2): the A_1 sum becomes
        // c_1 + c_2 = 5/6 < 1 and every B_i holds
        let p = first("1", &["1/3", "1/2"]);
        let t = tvec(&["4/3", "1/2"]);
        let m = region_membership_first(&t, &p).unwrap();
        assert!(m.in_a);
        assert_eq!(m.in_b, vec![true, true]);
        assert!(m.admissible);
    }

    #[test]
    fn region_tiny_t_not_admissible() {
        let p = first("1", &["1/3", "1/2"]);
        let t = tvec(&["1/1000000", "1/1000000"]);
        let m = region_membership_first(&t, &p).unwrap();
        assert!(m.in_a);
        assert!(!m.admissible);
    }

    #[test]
    fn region_second_kind() {
        let p = second(&["1/2", "3/4"], "1/2");
        let m = region_membership_second(&tvec(&["1/2", "1/2"]), &p).unwrap();
        assert!(m.admissible);
        let too_big = region_membership_second(&tvec(&["2", "1/2"]), &p).unwrap();
        assert!(!too_big.in_a);
        assert!(!too_big.admissible);
    }

    #[test]
    fn charlier_series_reaches_e() {
        // x = 0, a = 1, t = 1: terms are 1/d!, partials approach e
        let p = CharlierParams::new(rats(&["1"])).unwrap();
        let probe = norm_series_charlier(&rat("0"), &tvec(&["1"]), &p, 30).unwrap();
        assert_eq!(probe.verdict, Verdict::Converges);
        let e_30_digits = rat(
            "2718281828459045235360287471352/1000000000000000000000000000000",
        );
        let gap = (probe.partials.last().unwrap() - &e_30_digits).abs();
        assert!(gap < rat("1/1000000000000"), "partial not within 1e-12 of e");
    }

    #[test]
    fn first_kind_converges_to_closed_form_at_integer_x() {
        // r = 1, beta = 1, c = 1/2, t = (1-c)^2/c = 1/2, x = 0:
        // limit k!/(c^k (beta)_k (1-c)^beta) = 2
        let p = first("1", &["1/2"]);
        let probe = norm_series_first(&rat("0"), &tvec(&["1/2"]), &p, 40).unwrap();
        assert_eq!(probe.verdict, Verdict::Converges);
        let gap = (probe.partials.last().unwrap() - &rat("2")).abs();
        assert!(gap < rat("1/1000000000"));
    }

    #[test]
    fn first_kind_diverges_at_half_integer() {
        let p = first("1", &["1/2"]);
        let probe = norm_series_first(&rat("1/2"), &tvec(&["1/2"]), &p, 30).unwrap();
        assert_eq!(probe.verdict, Verdict::Diverges);
    }

    #[test]
    fn second_kind_dichotomy() {
        // the polynomial prefactor n^(2x + ...) delays the geometric decay,
        // so convergent probes at integer x need depth beyond the default
        let p = second(&["1/2", "3/4"], "1/2");
        let t = tvec(&["1/2", "1/2"]);
        for x in ["0", "1", "2"] {
            let probe = norm_series_second(&rat(x), &t, &p, 24).unwrap();
            assert_eq!(probe.verdict, Verdict::Converges, "x = {x}");
        }
        for x in ["1/2", "3/2"] {
            let probe = norm_series_second(&rat(x), &t, &p, 14).unwrap();
            assert_eq!(probe.verdict, Verdict::Diverges, "x = {x}");
        }
    }

    #[test]
    fn charlier_dichotomy_at_every_t() {
        // the Charlier dichotomy carries no region condition: any positive t
        // separates integer from non-integer x
        let p = CharlierParams::new(rats(&["1"])).unwrap();
        for t in ["1/2", "1", "2"] {
            let tv = tvec(&[t]);
            for x in ["0", "2"] {
                let probe = norm_series_charlier(&rat(x), &tv, &p, 24).unwrap();
                assert_eq!(probe.verdict, Verdict::Converges, "x={x}, t={t}");
            }
            let probe = norm_series_charlier(&rat("1/2"), &tv, &p, 24).unwrap();
            assert_eq!(probe.verdict, Verdict::Diverges, "t={t}");
        }
    }

    #[test]
    fn partials_monotone_in_t() {
        let p = first("1", &["1/3", "1/2"]);
        let small = norm_series_first(&rat("2"), &tvec(&["1", "1/3"]), &p, 10).unwrap();
        let large = norm_series_first(&rat("2"), &tvec(&["5/4", "1/2"]), &p, 10).unwrap();
        for (s, l) in small.partials.iter().zip(&large.partials) {
            assert!(s <= l);
        }
    }

    #[test]
    fn sqrt_bracket_is_tight_and_ordered() {
        let (lo, hi) = sqrt_bracket(&rat("2"), &rat("1/100000000")).unwrap();
        assert!(&lo * &lo <= rat("2"));
        assert!(&hi * &hi >= rat("2"));
        assert!(&hi - &lo <= rat("1/100000000"));
    }

    #[test]
    fn normalization_constant_examples() {
        // first kind r=1: S = 2, N = 1/sqrt(2) ~ 0.70710678
        let fam = NormSeriesFamily::First(first("1", &["1/2"]));
        let est = normalization_constant(&fam, 0, &tvec(&["1/2"]), &rat("1/1000000000"), 60)
            .unwrap();
        let target = rat("707106781/1000000000");
        assert!((est.value.clone() - target).abs() < rat("1/100000"));
        assert!(est.lo <= est.value && est.value <= est.hi);

        // Charlier: S = e, N = e^{-1/2} ~ 0.60653066
        let famc = NormSeriesFamily::Charlier(CharlierParams::new(rats(&["1"])).unwrap());
        let est = normalization_constant(&famc, 0, &tvec(&["1"]), &rat("1/1000000000"), 40)
            .unwrap();
        let target = rat("60653066/100000000");
        assert!((est.value.clone() - target).abs() < rat("1/100000"));
    }

    #[test]
    fn normalization_requires_admissible_t() {
        let fam = NormSeriesFamily::First(first("1", &["1/2"]));
        // t below (1-c)^2 = 1/4 on every coordinate: not admissible
        let err = normalization_constant(&fam, 0, &tvec(&["1/8"]), &rat("1/1000"), 30);
        assert!(matches!(err, Err(Error::NonAdmissible(_))));
    }

    #[test]
    fn meixner_duality_exact() {
        let (lhs, rhs) = duality_meixner(3, 5, &rat("1"), &rat("1/2")).unwrap();
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = duality_meixner(4, 4, &rat("5/2"), &rat("1/3")).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn charlier_duality_exact() {
        let (lhs, rhs) = duality_charlier(2, 4, &rat("1"));
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = duality_charlier(0, 7, &rat("3/2"));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn radius_probe_noninteger_x() {
        // x = 1/2, c = 1/2: target 1/(1-c) = 2 within 15% at depth 40
        let probe = radius_probe(&rat("1/2"), &rat("1"), &rat("1/2"), 40).unwrap();
        assert!((probe.estimate - 2.0).abs() / 2.0 < 0.15, "{}", probe.estimate);
    }

    #[test]
    fn radius_probe_integer_x() {
        // x = 0, beta = 1, c = 1/2: |M_d(0)|/d! = 1 exactly, root exactly 1
        let probe = radius_probe(&rat("0"), &rat("1"), &rat("1/2"), 40).unwrap();
        assert!((probe.estimate - 1.0).abs() < 1e-12);
        // x = 1 stays within 15% of c/(1-c) = 1
        let probe = radius_probe(&rat("1"), &rat("1"), &rat("1/2"), 40).unwrap();
        assert!((probe.estimate - 1.0).abs() < 0.15, "{}", probe.estimate);
    }
}
