//! Truncated r-mode Fock lattice, ladder operators, the two families of
//! non-Hermitian oscillator Hamiltonians, and exact verification of their
//! common eigenstates.
//!
//! Everything acts in the unnormalized basis e_n = sqrt(n!) |n>, where
//!   lower_i e_n = n_i e_{n-e_i},   raise_i e_n = e_{n+e_i},
//! so all matrix entries are rational (no square roots). The similarity
//! transform to the orthonormal basis is diagonal and positive, so
//! eigen-action and commutators are equivalent statements in either basis.
//! Eigenstate amplitudes are M_n(x)/n! (the unnormalized-basis form of
//! M_n(x)/sqrt(n!)).
//!
//! Raising past a per-mode cap maps to zero; truncation artifacts are kept
//! away from the identities by verifying on interior indices only, with
//! margin 1 for eigen-action and margin 2 for commutators.
//!
//! Each Hamiltonian is built in two operator orderings. Written in the usual
//! left-to-right form, the shifted number factors sit to the left of the
//! creation operators; the normal ordering identity
//! (beta + N) b+ = b+ (beta + N + 1) makes that placement off by one against
//! the nearest-neighbor recurrence. `RecurrenceFaithful` moves those factors
//! to the right of b+ and is the ordering with exactly zero interior
//! residual; `AsPrinted` keeps the verbatim left placement so that the
//! discrepancy stays observable.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::multiindex::{indices_in_box, MultiIndex};
use crate::polyfam::{
    multi_factorial, CharlierEvaluator, CharlierParams, Meixner1Evaluator, Meixner2Evaluator,
    MeixnerFirstParams, MeixnerSecondParams,
};
use crate::rational::Rational;
use crate::summability::WeightVectorT;

/// Truncated occupation-number lattice: all n with 0 <= n_i <= caps[i],
/// enumerated in graded-lexicographic order. The position in that
/// enumeration is the flat index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockLattice {
    caps: Vec<usize>,
    states: Vec<MultiIndex>,
    positions: BTreeMap<MultiIndex, usize>,
}

impl FockLattice {
    pub fn new(caps: Vec<usize>) -> Result<Self> {
        if caps.is_empty() {
            return Err(Error::InvalidParameter("need at least one mode".into()));
        }
        if caps.iter().any(|&c| c < 1) {
            return Err(Error::InvalidParameter("per-mode caps must be >= 1".into()));
        }
        let states = indices_in_box(&caps);
        let positions = states
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        Ok(FockLattice {
            caps,
            states,
            positions,
        })
    }

    pub fn r(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[MultiIndex] {
        &self.states
    }

    pub fn state(&self, flat: usize) -> &MultiIndex {
        &self.states[flat]
    }

    pub fn flat(&self, n: &MultiIndex) -> Option<usize> {
        self.positions.get(n).copied()
    }

    /// True when every coordinate is at least `margin` below its cap.
    pub fn is_interior(&self, n: &MultiIndex, margin: usize) -> bool {
        n.entries()
            .iter()
            .zip(&self.caps)
            .all(|(&ni, &cap)| ni + margin <= cap)
    }
}

/// Sparse rational matrix on a Fock lattice, keyed (row, col) with no
/// explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseOperator {
    dim: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseOperator {
    pub fn zero(dim: usize) -> Self {
        SparseOperator {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = SparseOperator::zero(dim);
        for i in 0..dim {
            op.add_entry(i, i, Rational::one());
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.entries.iter()
    }

    pub fn entry(&self, row: usize, col: usize) -> Rational {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_entry(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.dim && col < self.dim, "entry out of range");
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry((row, col)).or_insert_with(Rational::zero);
        *slot += &value;
        if slot.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn add(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (&(r, c), v) in other.entries.iter() {
            out.add_entry(r, c, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (&(r, c), v) in other.entries.iter() {
            out.add_entry(r, c, -v);
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> SparseOperator {
        let mut out = SparseOperator::zero(self.dim);
        for (&(r, c), v) in self.entries.iter() {
            out.add_entry(r, c, v * factor);
        }
        out
    }

    /// Matrix product self * other.
    pub fn matmul(&self, other: &SparseOperator) -> Result<SparseOperator> {
        self.check_dim(other)?;
        let mut out = SparseOperator::zero(self.dim);
        for (&(i, k), a) in self.entries.iter() {
            for (&(_, j), b) in other
                .entries
                .range((k, 0)..=(k, usize::MAX))
            {
                out.add_entry(i, j, a * b);
            }
        }
        Ok(out)
    }

    /// Apply to a dense amplitude vector.
    pub fn apply(&self, amplitudes: &[Rational]) -> Vec<Rational> {
        assert_eq!(amplitudes.len(), self.dim);
        let mut out = vec![Rational::zero(); self.dim];
        for (&(r, c), v) in self.entries.iter() {
            if !amplitudes[c].is_zero() {
                out[r] += &(v * &amplitudes[c]);
            }
        }
        out
    }

    fn check_dim(&self, other: &SparseOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch(format!(
                "operator dims {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }
}

/// Wire format: {"dim": d, "entries": [[row, col, "p/q"], ...]}.
impl Serialize for SparseOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Triplet(usize, usize, String);
        let mut s = serializer.serialize_struct("SparseOperator", 2)?;
        s.serialize_field("dim", &self.dim)?;
        let entries: Vec<Triplet> = self
            .entries
            .iter()
            .map(|(&(r, c), v)| Triplet(r, c, v.to_string()))
            .collect();
        s.serialize_field("entries", &entries)?;
        s.end()
    }
}

/// A state on the lattice: dense amplitudes in the unnormalized basis,
/// labeled by the spectral parameter x it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    pub x: Rational,
    pub amplitudes: Vec<Rational>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("StateVector", 2)?;
        s.serialize_field("x", &self.x)?;
        let amps: Vec<String> = self.amplitudes.iter().map(|a| a.to_string()).collect();
        s.serialize_field("amplitudes", &amps)?;
        s.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderKind {
    Lower,
    Raise,
}

/// Ladder operator for one mode in the unnormalized basis. Raising at the
/// cap truncates to zero.
pub fn ladder(lattice: &FockLattice, mode: usize, which: LadderKind) -> SparseOperator {
    assert!(mode < lattice.r(), "mode out of range");
    let mut op = SparseOperator::zero(lattice.dim());
    for (col, n) in lattice.states().iter().enumerate() {
        match which {
            LadderKind::Lower => {
                if let Some(lowered) = n.lowered(mode) {
                    let row = lattice.flat(&lowered).expect("lowered state in lattice");
                    op.add_entry(row, col, Rational::integer(n.get(mode) as i64));
                }
            }
            LadderKind::Raise => {
                let raised = n.raised(mode);
                if let Some(row) = lattice.flat(&raised) {
                    op.add_entry(row, col, Rational::one());
                }
            }
        }
    }
    op
}

/// The number operator b_i+ b_i (diagonal n_i).
pub fn number_op(lattice: &FockLattice, mode: usize) -> SparseOperator {
    diagonal(lattice, |n| Rational::integer(n.get(mode) as i64))
}

/// Diagonal operator from a function of the occupation numbers.
pub fn diagonal<F: Fn(&MultiIndex) -> Rational>(lattice: &FockLattice, f: F) -> SparseOperator {
    let mut op = SparseOperator::zero(lattice.dim());
    for (i, n) in lattice.states().iter().enumerate() {
        op.add_entry(i, i, f(n));
    }
    op
}

/// B_j = prod_{l != j} (b_j+ b_j + beta_j - b_l+ b_l - beta_l), diagonal and
/// invertible because the beta gaps are never integers; returns (B_j, B_j^-1).
pub fn build_b(
    lattice: &FockLattice,
    p: &MeixnerSecondParams,
    j: usize,
) -> Result<(SparseOperator, SparseOperator)> {
    if lattice.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "lattice modes {} vs r = {}",
            lattice.r(),
            p.r()
        )));
    }
    let mut b = SparseOperator::zero(lattice.dim());
    let mut b_inv = SparseOperator::zero(lattice.dim());
    for (i, n) in lattice.states().iter().enumerate() {
        let mut eigenvalue = Rational::one();
        let level = Rational::integer(n.get(j) as i64) + &p.betas()[j];
        for l in 0..p.r() {
            if l == j {
                continue;
            }
            eigenvalue *= &(&level - &Rational::integer(n.get(l) as i64) - &p.betas()[l]);
        }
        if eigenvalue.is_zero() {
            return Err(Error::DegenerateParameters(format!(
                "B_{} has zero eigenvalue at {n:?}",
                j + 1
            )));
        }
        b_inv.add_entry(i, i, eigenvalue.recip()?);
        b.add_entry(i, i, eigenvalue);
    }
    Ok((b, b_inv))
}

/// Operator ordering for the raising terms of both Hamiltonian families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorOrdering {
    /// Shifted number factors applied after the creation operator, the
    /// verbatim left-to-right reading of the operator products.
    AsPrinted,
    /// The shifted number factor moved to the right of the creation
    /// operator; reproduces the nearest-neighbor recurrence coefficients.
    RecurrenceFaithful,
}

/// First-kind Hamiltonian
///   H_i = b_i + sum_k N_k/(1-c_k) + c_i/(1-c_i)(beta + N)
///         + (beta + N) sum_j c_j/(1-c_j)^2 b_j+
/// with N = sum_k N_k; the ordering switch moves (beta + N) across b_j+.
pub fn hamiltonian_first(
    lattice: &FockLattice,
    p: &MeixnerFirstParams,
    i: usize,
    ordering: OperatorOrdering,
) -> Result<SparseOperator> {
    if lattice.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "lattice modes {} vs r = {}",
            lattice.r(),
            p.r()
        )));
    }
    assert!(i < p.r(), "mode out of range");
    let one = Rational::one();
    let dim = lattice.dim();

    let mut h = ladder(lattice, i, LadderKind::Lower);
    h = h.add(&diagonal(lattice, |n| {
        let mut acc = Rational::zero();
        for (k, &nk) in n.entries().iter().enumerate() {
            acc += &(Rational::integer(nk as i64) / (&one - &p.c()[k]));
        }
        acc
    }))?;
    let shifted_total = diagonal(lattice, |n| {
        p.beta() + &Rational::integer(n.total() as i64)
    });
    let ci = &p.c()[i];
    h = h.add(&shifted_total.scale(&(ci / &(&one - ci))))?;

    let mut raising = SparseOperator::zero(dim);
    for j in 0..p.r() {
        let cj = &p.c()[j];
        let gap = &one - cj;
        let weight = cj / &(&gap * &gap);
        let raise_j = ladder(lattice, j, LadderKind::Raise);
        let term = match ordering {
            OperatorOrdering::AsPrinted => shifted_total.matmul(&raise_j)?,
            OperatorOrdering::RecurrenceFaithful => raise_j.matmul(&shifted_total)?,
        };
        raising = raising.add(&term.scale(&weight))?;
    }
    h.add(&raising)
}

/// Second-kind Hamiltonian
///   H_i = b_i + c/(1-c)(N_i + beta_i) + (1/(1-c)) sum_j N_j
///         + c/(1-c)^2 sum_j (N_j + beta_j) prod_{k != j} (N_j + beta_j - beta_k) B_j^-1 b_j+
/// with the ordering switch moving only the single factor (N_j + beta_j)
/// across b_j+.
pub fn hamiltonian_second(
    lattice: &FockLattice,
    p: &MeixnerSecondParams,
    i: usize,
    ordering: OperatorOrdering,
) -> Result<SparseOperator> {
    if lattice.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "lattice modes {} vs r = {}",
            lattice.r(),
            p.r()
        )));
    }
    assert!(i < p.r(), "mode out of range");
    let one = Rational::one();
    let c = p.c();
    let gap = &one - c;

    let mut h = ladder(lattice, i, LadderKind::Lower);
    h = h.add(
        &diagonal(lattice, |n| {
            Rational::integer(n.get(i) as i64) + &p.betas()[i]
        })
        .scale(&(c / &gap)),
    )?;
    h = h.add(
        &diagonal(lattice, |n| Rational::integer(n.total() as i64)).scale(&gap.recip()?),
    )?;

    let weight = c / &(&gap * &gap);
    let mut raising = SparseOperator::zero(lattice.dim());
    for j in 0..p.r() {
        let shifted_number = diagonal(lattice, |n| {
            Rational::integer(n.get(j) as i64) + &p.betas()[j]
        });
        let cross_product = diagonal(lattice, |n| {
            let level = Rational::integer(n.get(j) as i64) + &p.betas()[j];
            let mut acc = Rational::one();
            for k in 0..p.r() {
                if k != j {
                    acc *= &(&level - &p.betas()[k]);
                }
            }
            acc
        });
        let (_, b_inv) = build_b(lattice, p, j)?;
        let raise_j = ladder(lattice, j, LadderKind::Raise);
        let term = match ordering {
            OperatorOrdering::AsPrinted => shifted_number
                .matmul(&cross_product)?
                .matmul(&b_inv)?
                .matmul(&raise_j)?,
            OperatorOrdering::RecurrenceFaithful => cross_product
                .matmul(&b_inv)?
                .matmul(&raise_j)?
                .matmul(&shifted_number)?,
        };
        raising = raising.add(&term)?;
    }
    h.add(&raising.scale(&weight))
}

/// Eigenstate amplitudes M_n(x)/n! over the whole lattice box (unnormalized
/// basis, no N_x factor), built from the explicit-formula evaluators.
pub fn eigenstate_first(
    x: &Rational,
    lattice: &FockLattice,
    p: &MeixnerFirstParams,
) -> Result<StateVector> {
    if lattice.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "lattice modes {} vs r = {}",
            lattice.r(),
            p.r()
        )));
    }
    let max_total: usize = lattice.caps().iter().sum();
    let eval = Meixner1Evaluator::new(p, x, max_total);
    let amplitudes = lattice
        .states()
        .iter()
        .map(|n| eval.value(n) / multi_factorial(n))
        .collect();
    Ok(StateVector {
        x: x.clone(),
        amplitudes,
    })
}

pub fn eigenstate_second(
    x: &Rational,
    lattice: &FockLattice,
    p: &MeixnerSecondParams,
) -> Result<StateVector> {
    if lattice.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "lattice modes {} vs r = {}",
            lattice.r(),
            p.r()
        )));
    }
    let max_total: usize = lattice.caps().iter().sum();
    let max_mode = lattice.caps().iter().copied().max().unwrap_or(0);
    let eval = Meixner2Evaluator::new(p, x, max_total, max_mode);
    let amplitudes = lattice
        .states()
        .iter()
        .map(|n| eval.value(n) / multi_factorial(n))
        .collect();
    Ok(StateVector {
        x: x.clone(),
        amplitudes,
    })
}

/// Charlier eigenstate amplitudes C_n(x)/n! (the r-mode analogue used by the
/// weighted-norm bridge).
pub fn eigenstate_charlier(
    x: &Rational,
    lattice: &FockLattice,
    p: &CharlierParams,
) -> Result<StateVector> {
    if lattice.r() != p.r() {
        return Err(Error::ShapeMismatch(format!(
            "lattice modes {} vs r = {}",
            lattice.r(),
            p.r()
        )));
    }
    let max_mode = lattice.caps().iter().copied().max().unwrap_or(0);
    let eval = CharlierEvaluator::new(p, x, max_mode.max(1) * lattice.r());
    let amplitudes = lattice
        .states()
        .iter()
        .map(|n| eval.value(n) / multi_factorial(n))
        .collect();
    Ok(StateVector {
        x: x.clone(),
        amplitudes,
    })
}

/// Max |(H s - x s)_m| over interior rows (margin 1). Exactly zero for the
/// recurrence-faithful ordering, at every rational x.
pub fn verify_eigen_action(
    h: &SparseOperator,
    s: &StateVector,
    x: &Rational,
    lattice: &FockLattice,
) -> Result<Rational> {
    if h.dim() != lattice.dim() || s.amplitudes.len() != lattice.dim() {
        return Err(Error::ShapeMismatch(
            "operator/state/lattice dimensions differ".into(),
        ));
    }
    let image = h.apply(&s.amplitudes);
    let mut max = Rational::zero();
    for (flat, n) in lattice.states().iter().enumerate() {
        if !lattice.is_interior(n, 1) {
            continue;
        }
        let residual = (&image[flat] - &(x * &s.amplitudes[flat])).abs();
        max = max.max(residual);
    }
    Ok(max)
}

/// Max |[H_i, H_j]| entry over rows and columns at depth >= margin from every
/// cap (the double application needs margin 2).
///
/// For i != j this maximum is NOT zero: the commutator equals
/// (w_i - w_j)(beta + N) plus mixed ladder terms, a nonzero banded operator.
/// It nevertheless annihilates every eigenstate |x> (see
/// `commutator_on_eigenstate`), because the eigenstate amplitude vectors
/// satisfy exactly the linear relations the commutator rows encode. The raw
/// interior maximum is reported so the distinction stays visible.
pub fn commutator_interior(
    hi: &SparseOperator,
    hj: &SparseOperator,
    lattice: &FockLattice,
    margin: usize,
) -> Result<Rational> {
    if hi.dim() != lattice.dim() || hj.dim() != lattice.dim() {
        return Err(Error::ShapeMismatch(
            "operator/lattice dimensions differ".into(),
        ));
    }
    let commutator = hi.matmul(hj)?.sub(&hj.matmul(hi)?)?;
    let mut max = Rational::zero();
    for (&(row, col), v) in commutator.entries() {
        if lattice.is_interior(lattice.state(row), margin)
            && lattice.is_interior(lattice.state(col), margin)
        {
            max = max.max(v.abs());
        }
    }
    Ok(max)
}

/// Max |([H_i, H_j] s)_m| over rows at depth >= margin from every cap.
/// Exactly zero for eigenstates at every rational x: both H_i s and H_j s
/// equal x s on the margin-1 interior, so the double application agrees on
/// the margin-2 interior. This is the exact statement behind the common
/// diagonalizability of the family.
pub fn commutator_on_eigenstate(
    hi: &SparseOperator,
    hj: &SparseOperator,
    s: &StateVector,
    lattice: &FockLattice,
    margin: usize,
) -> Result<Rational> {
    if hi.dim() != lattice.dim() || hj.dim() != lattice.dim() {
        return Err(Error::ShapeMismatch(
            "operator/lattice dimensions differ".into(),
        ));
    }
    if s.amplitudes.len() != lattice.dim() {
        return Err(Error::ShapeMismatch(
            "state/lattice dimensions differ".into(),
        ));
    }
    let forward = hi.apply(&hj.apply(&s.amplitudes));
    let backward = hj.apply(&hi.apply(&s.amplitudes));
    let mut max = Rational::zero();
    for (flat, n) in lattice.states().iter().enumerate() {
        if !lattice.is_interior(n, margin) {
            continue;
        }
        max = max.max((&forward[flat] - &backward[flat]).abs());
    }
    Ok(max)
}

/// Which basis-norm weighting applies to `weighted_state_norm`.
pub enum NormWeighting<'a> {
    /// <n|n> = t^n / (beta)_{|n|}
    First(&'a MeixnerFirstParams),
    /// <n|n> = t^n / prod_j (beta_j)_{n_j}
    Second(&'a MeixnerSecondParams),
    /// <n|n> = t^n / n!^0 (plain Poisson-side weighting uses only t^n / n!)
    Charlier,
}

/// Truncated weighted norm of a state: sum over the lattice box of
/// (amplitude * n!)^2 t^n / (n! * W(n)), the finite version of the
/// square-summability series restated in unnormalized-basis amplitudes.
pub fn weighted_state_norm(
    s: &StateVector,
    lattice: &FockLattice,
    t: &WeightVectorT,
    weighting: &NormWeighting<'_>,
) -> Result<Rational> {
    if s.amplitudes.len() != lattice.dim() {
        return Err(Error::ShapeMismatch(
            "state/lattice dimensions differ".into(),
        ));
    }
    if t.r() != lattice.r() {
        return Err(Error::ShapeMismatch(format!(
            "t length {} vs modes {}",
            t.r(),
            lattice.r()
        )));
    }
    let mut acc = Rational::zero();
    for (flat, n) in lattice.states().iter().enumerate() {
        let a = &s.amplitudes[flat];
        if a.is_zero() {
            continue;
        }
        let nfact = multi_factorial(n);
        let weight = match weighting {
            NormWeighting::First(p) => crate::rational::pochhammer(p.beta(), n.total()),
            NormWeighting::Second(p) => {
                let mut w = Rational::one();
                for (beta_j, &nj) in p.betas().iter().zip(n.entries()) {
                    w *= &crate::rational::pochhammer(beta_j, nj);
                }
                w
            }
            NormWeighting::Charlier => Rational::one(),
        };
        // (a n!)^2 / (n! W) = a^2 n! / W
        acc += &(a * a * nfact * t.power(n) / weight);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfam::{meixner1_explicit, meixner2_explicit};
    use crate::recurrence::{nn_coeffs_first, nn_coeffs_second};
    use crate::summability::norm_series_first;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn rats(ss: &[&str]) -> Vec<Rational> {
        ss.iter().map(|s| rat(s)).collect()
    }

    fn idx(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn first(beta: &str, c: &[&str]) -> MeixnerFirstParams {
        MeixnerFirstParams::new(rat(beta), rats(c)).unwrap()
    }

    fn second(betas: &[&str], c: &str) -> MeixnerSecondParams {
        MeixnerSecondParams::new(rats(betas), rat(c)).unwrap()
    }

    #[test]
    fn lattice_bijection() {
        let lat = FockLattice::new(vec![3]).unwrap();
        assert_eq!(lat.dim(), 4);
        let lat2 = FockLattice::new(vec![2, 2]).unwrap();
        assert_eq!(lat2.dim(), 9);
        for i in 0..lat2.dim() {
            assert_eq!(lat2.flat(lat2.state(i)), Some(i));
        }
    }

    #[test]
    fn ladder_examples() {
        let lat = FockLattice::new(vec![4]).unwrap();
        let lower = ladder(&lat, 0, LadderKind::Lower);
        // lower e_2 = 2 e_1
        let e2 = lat.flat(&idx(&[2])).unwrap();
        let e1 = lat.flat(&idx(&[1])).unwrap();
        assert_eq!(lower.entry(e1, e2), rat("2"));

        // b b+ e_0 = e_0
        let raise = ladder(&lat, 0, LadderKind::Raise);
        let prod = lower.matmul(&raise).unwrap();
        let e0 = lat.flat(&idx(&[0])).unwrap();
        assert_eq!(prod.entry(e0, e0), rat("1"));

        // number operator
        let num = raise.matmul(&lower).unwrap();
        for n in 0..=3usize {
            let f = lat.flat(&idx(&[n])).unwrap();
            assert_eq!(num.entry(f, f), Rational::integer(n as i64));
        }
        assert_eq!(num, number_op(&lat, 0));
    }

    #[test]
    fn canonical_commutation_on_interior_columns() {
        let lat = FockLattice::new(vec![3, 3]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let bi = ladder(&lat, i, LadderKind::Lower);
                let bj_plus = ladder(&lat, j, LadderKind::Raise);
                let comm = bi
                    .matmul(&bj_plus)
                    .unwrap()
                    .sub(&bj_plus.matmul(&bi).unwrap())
                    .unwrap();
                for (col, n) in lat.states().iter().enumerate() {
                    if n.get(i) >= 3 || n.get(j) >= 3 {
                        continue; // truncated columns
                    }
                    for (row, _) in lat.states().iter().enumerate() {
                        let expected = if i == j && row == col {
                            Rational::one()
                        } else {
                            Rational::zero()
                        };
                        assert_eq!(comm.entry(row, col), expected, "i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn b_operator_examples() {
        let p = second(&["1/2", "3/4"], "1/2");
        let lat = FockLattice::new(vec![2, 2]).unwrap();
        let (b1, b1_inv) = build_b(&lat, &p, 0).unwrap();
        let at = lat.flat(&idx(&[1, 1])).unwrap();
        assert_eq!(b1.entry(at, at), rat("-1/4"));
        assert_eq!(b1_inv.entry(at, at), rat("-4"));
        assert_eq!(
            b1.matmul(&b1_inv).unwrap(),
            SparseOperator::identity(lat.dim())
        );

        // r = 1: empty product, identity
        let q = MeixnerSecondParams::new(rats(&["1"]), rat("1/2")).unwrap();
        let lat1 = FockLattice::new(vec![3]).unwrap();
        let (b, _) = build_b(&lat1, &q, 0).unwrap();
        assert_eq!(b, SparseOperator::identity(lat1.dim()));
    }

    #[test]
    fn hamiltonian_first_diagonal_is_b_coefficient() {
        let p = first("1", &["1/3", "1/2"]);
        let lat = FockLattice::new(vec![3, 3]).unwrap();
        for i in 0..2 {
            let h = hamiltonian_first(&lat, &p, i, OperatorOrdering::RecurrenceFaithful).unwrap();
            for (flat, n) in lat.states().iter().enumerate() {
                let coeffs = nn_coeffs_first(n, &p).unwrap();
                assert_eq!(h.entry(flat, flat), coeffs.b[i], "n={n:?}, i={i}");
            }
        }
    }

    #[test]
    fn hamiltonian_second_diagonal_is_b_coefficient() {
        let p = second(&["1/2", "3/4"], "1/2");
        let lat = FockLattice::new(vec![3, 3]).unwrap();
        for i in 0..2 {
            let h = hamiltonian_second(&lat, &p, i, OperatorOrdering::RecurrenceFaithful).unwrap();
            for (flat, n) in lat.states().iter().enumerate() {
                let coeffs = nn_coeffs_second(n, &p).unwrap();
                assert_eq!(h.entry(flat, flat), coeffs.b[i], "n={n:?}, i={i}");
            }
        }
    }

    #[test]
    fn operator_columns_encode_recurrence() {
        // interior column at n: sub-diagonal entry n_i toward n-e_i, diagonal
        // b_{n,i}, raising entry a_{n+e_j, j}/(n_j + 1) toward n+e_j
        let p = first("4/3", &["1/3", "1/2"]);
        let lat = FockLattice::new(vec![4, 4]).unwrap();
        let i = 0;
        let h = hamiltonian_first(&lat, &p, i, OperatorOrdering::RecurrenceFaithful).unwrap();
        for (col, n) in lat.states().iter().enumerate() {
            if !lat.is_interior(n, 1) {
                continue;
            }
            if let Some(lowered) = n.lowered(i) {
                let row = lat.flat(&lowered).unwrap();
                assert_eq!(h.entry(row, col), Rational::integer(n.get(i) as i64));
            }
            for j in 0..2 {
                let raised = n.raised(j);
                let row = lat.flat(&raised).unwrap();
                let a = nn_coeffs_first(&raised, &p).unwrap().a[j].clone();
                let expected = a / Rational::integer((n.get(j) + 1) as i64);
                assert_eq!(h.entry(row, col), expected, "n={n:?}, j={j}");
            }
        }
    }

    #[test]
    fn second_kind_columns_encode_recurrence() {
        let q = second(&["1/2", "3/4"], "1/2");
        let lat = FockLattice::new(vec![4, 4]).unwrap();
        let i = 1;
        let h = hamiltonian_second(&lat, &q, i, OperatorOrdering::RecurrenceFaithful).unwrap();
        for (col, n) in lat.states().iter().enumerate() {
            if !lat.is_interior(n, 1) {
                continue;
            }
            let coeffs = nn_coeffs_second(n, &q).unwrap();
            assert_eq!(h.entry(col, col), coeffs.b[i]);
            if let Some(lowered) = n.lowered(i) {
                let row = lat.flat(&lowered).unwrap();
                assert_eq!(h.entry(row, col), Rational::integer(n.get(i) as i64));
            }
            for j in 0..2 {
                let raised = n.raised(j);
                let row = lat.flat(&raised).unwrap();
                let a = nn_coeffs_second(&raised, &q).unwrap().a[j].clone();
                let expected = a / Rational::integer((n.get(j) + 1) as i64);
                assert_eq!(h.entry(row, col), expected, "n={n:?}, j={j}");
            }
        }
    }

    #[test]
    fn eigenstate_amplitudes_match_polynomial_values() {
        let p = first("1", &["1/2"]);
        let lat = FockLattice::new(vec![6]).unwrap();
        let s = eigenstate_first(&rat("0"), &lat, &p).unwrap();
        // M_n(0) = (beta)_n (c/(c-1))^n = n! (-1)^n, so amplitudes alternate
        for (flat, n) in lat.states().iter().enumerate() {
            let expected = if n.total() % 2 == 0 { rat("1") } else { rat("-1") };
            assert_eq!(s.amplitudes[flat], expected);
        }
        assert_eq!(s.amplitudes[0], rat("1"));
    }

    #[test]
    fn eigen_action_first_kind_exact() {
        let p = first("1", &["1/2"]);
        let lat = FockLattice::new(vec![6]).unwrap();
        let h = hamiltonian_first(&lat, &p, 0, OperatorOrdering::RecurrenceFaithful).unwrap();
        let s = eigenstate_first(&rat("3"), &lat, &p).unwrap();
        assert_eq!(
            verify_eigen_action(&h, &s, &rat("3"), &lat).unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn eigen_action_second_kind_exact() {
        let p = second(&["1/2", "3/4"], "1/2");
        let lat = FockLattice::new(vec![5, 5]).unwrap();
        for i in 0..2 {
            let h = hamiltonian_second(&lat, &p, i, OperatorOrdering::RecurrenceFaithful).unwrap();
            let s = eigenstate_second(&rat("2"), &lat, &p).unwrap();
            assert_eq!(
                verify_eigen_action(&h, &s, &rat("2"), &lat).unwrap(),
                Rational::zero(),
                "mode {i}"
            );
        }
    }

    #[test]
    fn eigen_action_holds_at_noninteger_x() {
        // the eigen-equation is a polynomial identity in x on the interior;
        // normalizability, not the equation, selects x in N
        let p = first("1", &["1/3", "1/2"]);
        let lat = FockLattice::new(vec![4, 4]).unwrap();
        let x = rat("7/5");
        for i in 0..2 {
            let h = hamiltonian_first(&lat, &p, i, OperatorOrdering::RecurrenceFaithful).unwrap();
            let s = eigenstate_first(&x, &lat, &p).unwrap();
            assert_eq!(
                verify_eigen_action(&h, &s, &x, &lat).unwrap(),
                Rational::zero()
            );
        }
    }

    #[test]
    fn as_printed_ordering_has_nonzero_residual() {
        let p = first("1", &["1/3", "1/2"]);
        let lat = FockLattice::new(vec![4, 4]).unwrap();
        let h = hamiltonian_first(&lat, &p, 0, OperatorOrdering::AsPrinted).unwrap();
        let s = eigenstate_first(&rat("2"), &lat, &p).unwrap();
        let residual = verify_eigen_action(&h, &s, &rat("2"), &lat).unwrap();
        assert!(!residual.is_zero(), "as-printed residual unexpectedly zero");

        let q = second(&["1/2", "3/4"], "1/2");
        let h2 = hamiltonian_second(&lat, &q, 0, OperatorOrdering::AsPrinted).unwrap();
        let s2 = eigenstate_second(&rat("2"), &lat, &q).unwrap();
        let residual2 = verify_eigen_action(&h2, &s2, &rat("2"), &lat).unwrap();
        assert!(!residual2.is_zero());
    }

    #[test]
    fn commutator_annihilates_eigenstates_but_is_not_zero() {
        let p = first("1", &["1/3", "1/2"]);
        let lat = FockLattice::new(vec![5, 5]).unwrap();
        let h1 = hamiltonian_first(&lat, &p, 0, OperatorOrdering::RecurrenceFaithful).unwrap();
        let h2 = hamiltonian_first(&lat, &p, 1, OperatorOrdering::RecurrenceFaithful).unwrap();

        // i = j commutes trivially
        assert_eq!(
            commutator_interior(&h1, &h1, &lat, 2).unwrap(),
            Rational::zero()
        );

        // The raw matrix commutator does not vanish: its column at 0 starts
        // with the diagonal entry (w_1 - w_2) beta = 3/4 - 2 = -5/4.
        let raw = commutator_interior(&h1, &h2, &lat, 2).unwrap();
        assert!(!raw.is_zero());
        let comm = h1.matmul(&h2).unwrap().sub(&h2.matmul(&h1).unwrap()).unwrap();
        let zero_flat = lat.flat(&idx(&[0, 0])).unwrap();
        assert_eq!(comm.entry(zero_flat, zero_flat), rat("-5/4"));

        // ...but it annihilates every common eigenstate on the margin-2
        // interior, integer and non-integer x alike.
        for x in ["0", "2", "5", "1/3", "7/5"] {
            let s = eigenstate_first(&rat(x), &lat, &p).unwrap();
            assert_eq!(
                commutator_on_eigenstate(&h1, &h2, &s, &lat, 2).unwrap(),
                Rational::zero(),
                "x = {x}"
            );
        }

        let q = second(&["1/2", "3/4"], "1/2");
        let g1 = hamiltonian_second(&lat, &q, 0, OperatorOrdering::RecurrenceFaithful).unwrap();
        let g2 = hamiltonian_second(&lat, &q, 1, OperatorOrdering::RecurrenceFaithful).unwrap();
        assert!(!commutator_interior(&g1, &g2, &lat, 2).unwrap().is_zero());
        for x in ["0", "3", "1/3"] {
            let s = eigenstate_second(&rat(x), &lat, &q).unwrap();
            assert_eq!(
                commutator_on_eigenstate(&g1, &g2, &s, &lat, 2).unwrap(),
                Rational::zero(),
                "x = {x}"
            );
        }
    }

    #[test]
    fn weighted_norm_examples() {
        // only the vacuum amplitude: norm 1
        let p = first("1", &["1/2"]);
        let lat = FockLattice::new(vec![4]).unwrap();
        let mut s = eigenstate_first(&rat("0"), &lat, &p).unwrap();
        for a in s.amplitudes.iter_mut().skip(1) {
            *a = Rational::zero();
        }
        let t = WeightVectorT::new(rats(&["1/2"])).unwrap();
        assert_eq!(
            weighted_state_norm(&s, &lat, &t, &NormWeighting::First(&p)).unwrap(),
            rat("1")
        );

        // the truncated norm approaches the closed form 2; the truncation
        // error is exactly 2^-caps, so caps = 32 brings it below 1e-9
        let lat32 = FockLattice::new(vec![32]).unwrap();
        let s32 = eigenstate_first(&rat("0"), &lat32, &p).unwrap();
        let norm = weighted_state_norm(&s32, &lat32, &t, &NormWeighting::First(&p)).unwrap();
        assert!((norm.clone() - rat("2")).abs() < rat("1/1000000000"));

        // cross-module: equals the series partial at matching truncation
        let probe = norm_series_first(&rat("0"), &t, &p, 32).unwrap();
        assert_eq!(&norm, probe.partials.last().unwrap());
    }

    #[test]
    fn truncated_norm_growth_separates_spectrum() {
        // x = 1/2: truncated norms grow with the caps; x = 2: they settle
        let p = first("1", &["1/2"]);
        let t = WeightVectorT::new(rats(&["1/2"])).unwrap();
        let norm_at = |x: &Rational, cap: usize| {
            let lat = FockLattice::new(vec![cap]).unwrap();
            let s = eigenstate_first(x, &lat, &p).unwrap();
            weighted_state_norm(&s, &lat, &t, &NormWeighting::First(&p)).unwrap()
        };
        let bad = rat("1/2");
        assert!(norm_at(&bad, 30) > norm_at(&bad, 15) * rat("100"));
        let good = rat("2");
        let n15 = norm_at(&good, 15);
        let n30 = norm_at(&good, 30);
        assert!((n30 - n15.clone()).abs() < n15 * rat("1/10"));
    }

    #[test]
    fn second_kind_reduces_to_first_kind_shape_at_r1() {
        // r = 1: B = I and the second-kind Hamiltonian collapses to the
        // first-kind one with a single (beta, c)
        let p1 = MeixnerFirstParams::new(rat("5/2"), rats(&["1/3"])).unwrap();
        let p2 = MeixnerSecondParams::new(rats(&["5/2"]), rat("1/3")).unwrap();
        let lat = FockLattice::new(vec![5]).unwrap();
        let h1 = hamiltonian_first(&lat, &p1, 0, OperatorOrdering::RecurrenceFaithful).unwrap();
        let h2 = hamiltonian_second(&lat, &p2, 0, OperatorOrdering::RecurrenceFaithful).unwrap();
        assert_eq!(h1, h2);
    }

    #[test]
    fn explicit_polynomials_agree_with_amplitudes() {
        let p = first("1", &["1/3", "1/2"]);
        let lat = FockLattice::new(vec![3, 3]).unwrap();
        let x = rat("5/3");
        let s = eigenstate_first(&x, &lat, &p).unwrap();
        for (flat, n) in lat.states().iter().enumerate() {
            let poly_value = meixner1_explicit(n, &p).unwrap().eval(&x);
            assert_eq!(
                &s.amplitudes[flat] * &multi_factorial(n),
                poly_value,
                "at {n:?}"
            );
        }
        let q = second(&["1/2", "3/4"], "1/2");
        let s2 = eigenstate_second(&x, &lat, &q).unwrap();
        for (flat, n) in lat.states().iter().enumerate() {
            let poly_value = meixner2_explicit(n, &q).unwrap().eval(&x);
            assert_eq!(&s2.amplitudes[flat] * &multi_factorial(n), poly_value);
        }
    }
}
