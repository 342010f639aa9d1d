//! Univariate polynomials in `x` over a coefficient ring, with Euclidean
//! division by divisors whose leading coefficient is a rational constant.

use std::fmt;

use num_traits::One;

use crate::error::{AlgebraError, Result};
use crate::lambda::LambdaPoly;
use crate::rational::{self, Rational};

/// Coefficient ring for [`XPoly`]. `x` commutes with every coefficient, so
/// only the coefficient product itself may be non-commutative.
pub trait Coefficient: Clone + PartialEq {
    fn zero(genus: u32) -> Self;
    fn genus(&self) -> u32;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn scale(&self, r: &Rational) -> Self;
    /// The coefficient as a rational constant, if it is one.
    fn as_constant(&self) -> Option<Rational>;
    fn render(&self) -> String;
}

impl Coefficient for LambdaPoly {
    fn zero(genus: u32) -> Self {
        LambdaPoly::zero(genus)
    }
    fn genus(&self) -> u32 {
        LambdaPoly::genus(self)
    }
    fn is_zero(&self) -> bool {
        LambdaPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        self.checked_sub(other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
    }
    fn scale(&self, r: &Rational) -> Self {
        LambdaPoly::scale(self, r)
    }
    fn as_constant(&self) -> Option<Rational> {
        LambdaPoly::as_constant(self)
    }
    fn render(&self) -> String {
        LambdaPoly::render(self)
    }
}

#[derive(Clone, PartialEq)]
pub struct XPoly<C> {
    genus: u32,
    coeffs: Vec<C>,
}

impl<C: Coefficient> XPoly<C> {
    pub fn zero(genus: u32) -> Self {
        XPoly { genus, coeffs: Vec::new() }
    }

    /// Coefficients indexed by degree; trailing zeros are dropped.
    pub fn from_coeffs(genus: u32, coeffs: Vec<C>) -> Result<Self> {
        for c in &coeffs {
            if c.genus() != genus {
                return Err(AlgebraError::GenusMismatch { left: genus, right: c.genus() });
            }
        }
        let mut p = XPoly { genus, coeffs };
        p.trim();
        Ok(p)
    }

    /// `c · x^n`.
    pub fn monomial(c: C, n: usize) -> Self {
        let genus = c.genus();
        let mut coeffs = vec![C::zero(genus); n];
        coeffs.push(c);
        let mut p = XPoly { genus, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(|| C::zero(self.genus))
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    fn check(&self, other_genus: u32) -> Result<()> {
        if self.genus == other_genus {
            Ok(())
        } else {
            Err(AlgebraError::GenusMismatch { left: self.genus, right: other_genus })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other.genus)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeff(i).add(&other.coeff(i)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(self.genus, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other.genus)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeff(i).sub(&other.coeff(i)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(self.genus, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other.genus)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.genus));
        }
        let mut coeffs = vec![C::zero(self.genus); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?)?;
            }
        }
        Self::from_coeffs(self.genus, coeffs)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.scale(r)).collect();
        let mut p = XPoly { genus: self.genus, coeffs };
        p.trim();
        p
    }

    /// Multiply every coefficient on the left by `c`.
    pub fn left_mul_coeff(&self, c: &C) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| c.mul(a)).collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(self.genus, coeffs)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&rational::int(i as i64)))
            .collect();
        let mut p = XPoly { genus: self.genus, coeffs };
        p.trim();
        p
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> XPoly<D> {
        let coeffs = self.coeffs.iter().map(f).collect();
        let mut p = XPoly { genus: self.genus, coeffs };
        p.trim();
        p
    }

    /// Euclidean division `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn euclid_div(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check(divisor.genus)?;
        let lead = divisor.leading().ok_or(AlgebraError::DivisionByZero)?;
        let lead = lead.as_constant().ok_or(AlgebraError::UnsupportedDivisor)?;
        let inv = Rational::one() / lead;
        let db = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![C::zero(self.genus); rem.len().saturating_sub(db)];
        for top in (db..rem.len()).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let t = rem[top].scale(&inv);
            let shift = top - db;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                rem[shift + j] = rem[shift + j].sub(&t.mul(b)?)?;
            }
            // exact cancellation of the leading term
            rem[top] = C::zero(self.genus);
            quot[shift] = t;
        }
        rem.truncate(db);
        Ok((Self::from_coeffs(self.genus, quot)?, Self::from_coeffs(self.genus, rem)?))
    }

    pub fn quo(&self, divisor: &Self) -> Result<Self> {
        Ok(self.euclid_div(divisor)?.0)
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.euclid_div(divisor)?.1)
    }

    /// Quotient by `x^n`.
    pub fn quo_xpow(&self, n: usize) -> Self {
        let coeffs = self.coeffs.iter().skip(n).cloned().collect();
        XPoly { genus: self.genus, coeffs }
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({})", c.render()),
                1 => format!("({}) x", c.render()),
                _ => format!("({}) x^{}", c.render(), i),
            })
            .collect();
        parts.join(" + ")
    }
}

impl<C: Coefficient> fmt::Debug for XPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl XPoly<LambdaPoly> {
    pub fn x_pow(genus: u32, n: usize) -> Self {
        Self::monomial(LambdaPoly::one(genus), n)
    }

    /// Weight-homogeneity with `wt x = 2`: every `c_i x^i` has weight `w`.
    pub fn is_homogeneous_of(&self, weight: i64) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_homogeneous_of(weight - 2 * i as i64))
    }
}

/// The curve polynomial `f(x) = x^(2g+1) + Σ_{k<2g} λ_{2(2g+1-k)} x^k`.
pub fn curve_poly(genus: i64) -> Result<XPoly<LambdaPoly>> {
    if genus < 1 {
        return Err(AlgebraError::InvalidGenus(genus));
    }
    let g = genus as u32;
    let n = 2 * g as usize + 1;
    let mut coeffs: Vec<LambdaPoly> = (0..n)
        .map(|k| LambdaPoly::lambda(g, 2 * (n as i64 - k as i64)))
        .collect();
    coeffs.push(LambdaPoly::one(g));
    XPoly::from_coeffs(g, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn l(g: u32, i: i64) -> LambdaPoly {
        LambdaPoly::lambda(g, i)
    }

    fn xp(g: u32, cs: Vec<LambdaPoly>) -> XPoly<LambdaPoly> {
        XPoly::from_coeffs(g, cs).unwrap()
    }

    #[test]
    fn curve_polys_match_model() {
        let f1 = curve_poly(1).unwrap();
        assert_eq!(f1, xp(1, vec![l(1, 6), l(1, 4), LambdaPoly::zero(1), LambdaPoly::one(1)]));
        let f2 = curve_poly(2).unwrap();
        assert_eq!(f2.degree(), Some(5));
        assert_eq!(f2.coeff(3), l(2, 4));
        assert_eq!(f2.coeff(2), l(2, 6));
        assert_eq!(f2.coeff(1), l(2, 8));
        assert_eq!(f2.coeff(0), l(2, 10));
        for g in 1..6 {
            let f = curve_poly(g).unwrap();
            assert!(f.coeff(2 * g as usize).is_zero());
            assert!(f.is_homogeneous_of(4 * g + 2));
        }
        assert_eq!(curve_poly(0).unwrap_err(), AlgebraError::InvalidGenus(0));
    }

    #[test]
    fn derivative_of_genus_one_curve() {
        let f = curve_poly(1).unwrap();
        let want = xp(1, vec![l(1, 4), LambdaPoly::zero(1), LambdaPoly::constant(1, int(3))]);
        assert_eq!(f.derivative(), want);
    }

    #[test]
    fn division_by_monomial() {
        let g = 2;
        let a = xp(g, vec![LambdaPoly::zero(g), LambdaPoly::zero(g), l(g, 6), l(g, 4), LambdaPoly::zero(g), LambdaPoly::one(g)]);
        let (q, r) = a.euclid_div(&XPoly::x_pow(g, 4)).unwrap();
        assert_eq!(q, XPoly::x_pow(g, 1));
        assert_eq!(r, xp(g, vec![LambdaPoly::zero(g), LambdaPoly::zero(g), l(g, 6), l(g, 4)]));
    }

    #[test]
    fn division_by_curve_derivative() {
        let g = 1;
        let fp = curve_poly(1).unwrap().derivative();
        let (q, r) = XPoly::x_pow(g, 2).euclid_div(&fp).unwrap();
        assert_eq!(q, xp(g, vec![LambdaPoly::constant(g, rat(1, 3))]));
        assert_eq!(r, xp(g, vec![l(g, 4).scale(&rat(-1, 3))]));
        // back-substitution
        assert_eq!(q.mul(&fp).unwrap().add(&r).unwrap(), XPoly::x_pow(g, 2));
    }

    #[test]
    fn self_division() {
        let f = curve_poly(3).unwrap();
        let (q, r) = f.euclid_div(&f).unwrap();
        assert_eq!(q, XPoly::x_pow(3, 0));
        assert!(r.is_zero());
    }

    #[test]
    fn division_errors() {
        let g = 2;
        let f = curve_poly(2).unwrap();
        assert_eq!(f.euclid_div(&XPoly::zero(g)).unwrap_err(), AlgebraError::DivisionByZero);
        let bad = xp(g, vec![LambdaPoly::one(g), l(g, 4)]);
        assert_eq!(f.euclid_div(&bad).unwrap_err(), AlgebraError::UnsupportedDivisor);
        assert!(f.euclid_div(&curve_poly(3).unwrap()).is_err());
    }
}
