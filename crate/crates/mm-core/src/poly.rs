//! Dense univariate polynomials in x with exact rational coefficients.
//!
//! Coefficients are stored by power of x with no trailing zeros (the zero
//! polynomial is the empty vector). Degrees in this crate stay small, so a
//! dense power-basis representation is the right tool; evaluation is Horner
//! over rationals.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensePoly {
    coeffs: Vec<Rational>,
}

impl DensePoly {
    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DensePoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = DensePoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial x.
    pub fn x() -> Self {
        DensePoly {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = DensePoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_usize(&self, k: usize) -> Rational {
        self.eval(&Rational::integer(k as i64))
    }

    pub fn add(&self, other: &DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        DensePoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        DensePoly::from_coeffs(out)
    }

    pub fn scale(&self, factor: &Rational) -> DensePoly {
        DensePoly::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn mul(&self, other: &DensePoly) -> DensePoly {
        if self.is_zero() || other.is_zero() {
            return DensePoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        DensePoly::from_coeffs(out)
    }

    /// Multiply by the linear factor (x + shift).
    pub fn mul_linear(&self, shift: &Rational) -> DensePoly {
        let mut out = vec![Rational::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += &(c * shift);
            out[i + 1] += c;
        }
        DensePoly::from_coeffs(out)
    }

    /// Multiply by x.
    pub fn shift_up(&self) -> DensePoly {
        if self.is_zero() {
            return DensePoly::zero();
        }
        let mut out = vec![Rational::zero()];
        out.extend(self.coeffs.iter().cloned());
        DensePoly::from_coeffs(out)
    }

    /// Sum of absolute coefficient values; dominates |p(k)| / k^deg for k >= 1.
    pub fn abs_coeff_sum(&self) -> Rational {
        let mut acc = Rational::zero();
        for c in &self.coeffs {
            acc += &c.abs();
        }
        acc
    }
}

/// The falling product (-x)_m = (-x)(-x+1)...(-x+m-1) as a polynomial in x.
pub fn neg_x_pochhammer(m: usize) -> DensePoly {
    let mut p = DensePoly::one();
    for i in 0..m {
        // factor (i - x)
        p = p.mul(&DensePoly::from_coeffs(vec![
            Rational::integer(i as i64),
            Rational::integer(-1),
        ]));
    }
    p
}

/// The rising product (x + base)_m = (x+base)(x+base+1)...(x+base+m-1).
pub fn rising_pochhammer(base: &Rational, m: usize) -> DensePoly {
    let mut p = DensePoly::one();
    for i in 0..m {
        p = p.mul_linear(&(base + &Rational::integer(i as i64)));
    }
    p
}

/// Wire format: {"degree": d, "coeffs": ["p/q", ...], "monic": bool}.
impl Serialize for DensePoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DensePoly", 3)?;
        s.serialize_field("degree", &self.degree())?;
        let coeffs: Vec<String> = if self.is_zero() {
            vec!["0".to_string()]
        } else {
            self.coeffs.iter().map(|c| c.to_string()).collect()
        };
        s.serialize_field("coeffs", &coeffs)?;
        s.serialize_field("monic", &self.is_monic())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn poly(cs: &[&str]) -> DensePoly {
        DensePoly::from_coeffs(cs.iter().map(|c| rat(c)).collect())
    }

    #[test]
    fn trim_and_degree() {
        let p = poly(&["1", "2", "0", "0"]);
        assert_eq!(p.degree(), 1);
        assert!(DensePoly::zero().is_zero());
        assert_eq!(DensePoly::zero().degree(), 0);
    }

    #[test]
    fn horner_eval() {
        // x^2 - 5x + 2 at x = 3 -> -4
        let p = poly(&["2", "-5", "1"]);
        assert_eq!(p.eval(&rat("3")), rat("-4"));
        assert_eq!(p.eval(&rat("1/2")), rat("-1/4"));
    }

    #[test]
    fn arithmetic() {
        let a = poly(&["1", "1"]);
        let b = poly(&["-1", "1"]);
        assert_eq!(a.mul(&b), poly(&["-1", "0", "1"]));
        assert_eq!(a.add(&b), poly(&["0", "2"]));
        assert_eq!(a.sub(&a), DensePoly::zero());
        assert_eq!(a.shift_up(), poly(&["0", "1", "1"]));
    }

    #[test]
    fn pochhammer_polynomials() {
        // (-x)_2 = x^2 - x
        assert_eq!(neg_x_pochhammer(2), poly(&["0", "-1", "1"]));
        // (x + 1/2)_2 = (x + 1/2)(x + 3/2)
        assert_eq!(
            rising_pochhammer(&rat("1/2"), 2),
            poly(&["3/4", "2", "1"])
        );
        assert_eq!(neg_x_pochhammer(0), DensePoly::one());
    }

    #[test]
    fn json_shape() {
        let p = poly(&["-1/2", "1"]);
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"degree": 1, "coeffs": ["-1/2", "1"], "monic": true})
        );
    }
}
