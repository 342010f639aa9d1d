//! First-order derivations `Σ c_m(λ) ∂/∂λ_{2m}` of the λ-polynomial ring.

use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{AlgebraError, Result};
use crate::lambda::{forward_binop, n_vars, push_term, slot_of, slot_weight, LambdaPoly};
use crate::rational::Rational;
use crate::weyl::WeylOperator;

#[derive(Clone, PartialEq, Eq)]
pub struct LambdaVectorField {
    genus: u32,
    /// Slot `i` is the coefficient of `∂/∂λ(2i+4)`.
    coeffs: Vec<LambdaPoly>,
}

impl LambdaVectorField {
    pub fn zero(genus: u32) -> Self {
        LambdaVectorField { genus, coeffs: vec![LambdaPoly::zero(genus); n_vars(genus)] }
    }

    pub fn from_slots(genus: u32, coeffs: Vec<LambdaPoly>) -> Result<Self> {
        if coeffs.len() != n_vars(genus) {
            return Err(AlgebraError::IndexOutOfRange {
                index: coeffs.len() as i64,
                range: format!("exactly {} components", n_vars(genus)),
            });
        }
        if let Some(c) = coeffs.iter().find(|c| c.genus() != genus) {
            return Err(AlgebraError::GenusMismatch { left: genus, right: c.genus() });
        }
        Ok(LambdaVectorField { genus, coeffs })
    }

    /// `c · ∂/∂λ_index`.
    pub fn basis(c: LambdaPoly, index: i64) -> Result<Self> {
        let g = c.genus();
        let slot = slot_of(g, index).ok_or(AlgebraError::LambdaOutOfModel(index, g))?;
        let mut v = Self::zero(g);
        v.coeffs[slot] = c;
        Ok(v)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn slots(&self) -> &[LambdaPoly] {
        &self.coeffs
    }

    /// Coefficient of `∂/∂λ_index` (zero when the index is not a variable).
    pub fn coefficient(&self, index: i64) -> LambdaPoly {
        slot_of(self.genus, index)
            .map(|s| self.coeffs[s].clone())
            .unwrap_or_else(|| LambdaPoly::zero(self.genus))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LambdaPoly::is_zero)
    }

    fn check(&self, g: u32) -> Result<()> {
        if self.genus == g {
            Ok(())
        } else {
            Err(AlgebraError::GenusMismatch { left: self.genus, right: g })
        }
    }

    pub fn apply(&self, p: &LambdaPoly) -> Result<LambdaPoly> {
        self.check(p.genus())?;
        let mut out = LambdaPoly::zero(self.genus);
        for (slot, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let dp = p.derivative(slot_weight(slot) as i64);
            if !dp.is_zero() {
                out = &out + &(c * &dp);
            }
        }
        Ok(out)
    }

    /// The field applied to every λ-coefficient of a Weyl operator.
    pub fn apply_to_weyl(&self, op: &WeylOperator) -> Result<WeylOperator> {
        self.check(op.genus())?;
        Ok(op.map_coeffs(|c| self.apply(c).expect("genus checked")))
    }

    /// `[V, W]_m = V(W_m) − W(V_m)`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check(other.genus)?;
        let coeffs = (0..self.coeffs.len())
            .map(|m| Ok(&self.apply(&other.coeffs[m])? - &other.apply(&self.coeffs[m])?))
            .collect::<Result<Vec<_>>>()?;
        Ok(LambdaVectorField { genus: self.genus, coeffs })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other.genus)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(LambdaVectorField { genus: self.genus, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other.genus)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(LambdaVectorField { genus: self.genus, coeffs })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        LambdaVectorField { genus: self.genus, coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect() }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&crate::rational::int(n))
    }

    pub fn mul_lambda(&self, p: &LambdaPoly) -> Result<Self> {
        self.check(p.genus())?;
        Ok(LambdaVectorField { genus: self.genus, coeffs: self.coeffs.iter().map(|c| c * p).collect() })
    }

    /// Weight of the field: `wt c_m − 2m` for every nonzero component.
    pub fn is_homogeneous_of(&self, weight: i64) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(slot, c)| c.is_homogeneous_of(weight + slot_weight(slot) as i64))
    }

    /// e.g. `4 l4 dl4 + 6 l6 dl6`; multi-term coefficients are parenthesized.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut first = true;
        for (slot, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            push_term(&mut out, first, c, &format!("dl{}", slot_weight(slot)));
            first = false;
        }
        if first {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for LambdaVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for LambdaVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LambdaVectorField[g={}]({})", self.genus, self.render())
    }
}

forward_binop!(Add, add, checked_add, LambdaVectorField);
forward_binop!(Sub, sub, checked_sub, LambdaVectorField);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn l(g: u32, i: i64) -> LambdaPoly {
        LambdaPoly::lambda(g, i)
    }

    #[test]
    fn self_bracket_vanishes() {
        let g = 2;
        let v = &LambdaVectorField::basis(&l(g, 4) * &l(g, 6), 8).unwrap()
            + &LambdaVectorField::basis(l(g, 10).scale_int(3), 4).unwrap();
        assert!(v.bracket(&v).unwrap().is_zero());
    }

    #[test]
    fn euler_field_scales_by_weight() {
        let g = 1;
        let euler = &LambdaVectorField::basis(l(g, 4).scale_int(4), 4).unwrap()
            + &LambdaVectorField::basis(l(g, 6).scale_int(6), 6).unwrap();
        let p = &l(g, 4).pow(3) + &l(g, 6).pow(2);
        assert_eq!(euler.apply(&p).unwrap(), p.scale(&int(12)));
        assert_eq!(euler.render(), "4 l4 dl4 + 6 l6 dl6");
    }

    #[test]
    fn out_of_model_direction_rejected() {
        assert!(LambdaVectorField::basis(l(1, 4), 8).is_err());
        assert!(l(1, 4).genus() == 1);
        assert!(LambdaVectorField::zero(1).apply(&l(2, 4)).is_err());
    }
}
