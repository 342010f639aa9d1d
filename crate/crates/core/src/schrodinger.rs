//! Operators of the shape `Q = L − H`: a λ-vector field minus a Weyl operator.

use std::fmt;

use crate::error::{AlgebraError, Result};
use crate::lambda::LambdaPoly;
use crate::rational::Rational;
use crate::vector_field::LambdaVectorField;
use crate::weyl::WeylOperator;

#[derive(Clone, PartialEq, Eq)]
pub struct SchrodingerOperator {
    pub l_part: LambdaVectorField,
    pub h_part: WeylOperator,
    /// Grading weight (`2k` for `Q_{2k}`).
    pub weight: i64,
}

impl SchrodingerOperator {
    pub fn new(l_part: LambdaVectorField, h_part: WeylOperator, weight: i64) -> Result<Self> {
        if l_part.genus() != h_part.genus() {
            return Err(AlgebraError::GenusMismatch { left: l_part.genus(), right: h_part.genus() });
        }
        Ok(SchrodingerOperator { l_part, h_part, weight })
    }

    pub fn zero(genus: u32, weight: i64) -> Self {
        SchrodingerOperator { l_part: LambdaVectorField::zero(genus), h_part: WeylOperator::zero(genus), weight }
    }

    pub fn genus(&self) -> u32 {
        self.l_part.genus()
    }

    pub fn is_zero(&self) -> bool {
        self.l_part.is_zero() && self.h_part.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.genus() == other.genus() {
            Ok(())
        } else {
            Err(AlgebraError::GenusMismatch { left: self.genus(), right: other.genus() })
        }
    }

    /// Sum; the weight label of `self` is kept.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(SchrodingerOperator {
            l_part: self.l_part.checked_add(&other.l_part)?,
            h_part: self.h_part.checked_add(&other.h_part)?,
            weight: self.weight,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(SchrodingerOperator {
            l_part: self.l_part.checked_sub(&other.l_part)?,
            h_part: self.h_part.checked_sub(&other.h_part)?,
            weight: self.weight,
        })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        SchrodingerOperator { l_part: self.l_part.scale(r), h_part: self.h_part.scale(r), weight: self.weight }
    }

    /// `p · Q = p·L − p·H`; the weight grows by the weight of `p` if given.
    pub fn mul_lambda(&self, p: &LambdaPoly, weight: i64) -> Result<Self> {
        Ok(SchrodingerOperator {
            l_part: self.l_part.mul_lambda(p)?,
            h_part: self.h_part.mul_lambda(p)?,
            weight,
        })
    }

    /// `[Qᵢ, Qⱼ]` in the same `L − H` shape:
    /// `l = [Lᵢ, Lⱼ]`, `h = Lᵢ(Hⱼ) − Lⱼ(Hᵢ) − [Hᵢ, Hⱼ]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let l_part = self.l_part.bracket(&other.l_part)?;
        let h_part = self
            .l_part
            .apply_to_weyl(&other.h_part)?
            .checked_sub(&other.l_part.apply_to_weyl(&self.h_part)?)?
            .checked_sub(&self.h_part.commutator(&other.h_part)?)?;
        Ok(SchrodingerOperator { l_part, h_part, weight: self.weight + other.weight })
    }

    pub fn is_homogeneous(&self) -> bool {
        self.l_part.is_homogeneous_of(self.weight) && self.h_part.is_homogeneous_of(self.weight)
    }

    pub fn render(&self) -> String {
        format!("{} - ({})", self.l_part.render(), self.h_part.render())
    }
}

impl fmt::Debug for SchrodingerOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[wt {}]: L = {}; H = {}", self.weight, self.l_part, self.h_part)
    }
}
