//! Weighted polynomials in the curve parameters `λ4, λ6, …, λ(4g+2)`.
//!
//! Variable slot `i` holds `λ(2i+4)`, so the weight of slot `i` is `2i+4`.
//! `λ0 = 1` and `λ2 = 0` are folded at construction and never become
//! variables; any other index outside the model is the constant zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::rational::{self, Rational};

/// Exponent vector over the λ variables, ordered by (weight, exponents).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LambdaMonomial {
    weight: u32,
    exps: Vec<u16>,
}

impl LambdaMonomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let weight = exps
            .iter()
            .enumerate()
            .map(|(i, &e)| slot_weight(i) * e as u32)
            .sum();
        LambdaMonomial { weight, exps }
    }

    pub fn one(genus: u32) -> Self {
        LambdaMonomial { weight: 0, exps: vec![0; n_vars(genus)] }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.weight == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        LambdaMonomial { weight: self.weight + other.weight, exps }
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("l{}", slot_weight(i))),
                _ => parts.push(format!("l{}^{}", slot_weight(i), e)),
            }
        }
        parts.join(" ")
    }
}

impl Ord for LambdaMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.cmp(&other.weight).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for LambdaMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn n_vars(genus: u32) -> usize {
    2 * genus as usize
}

/// Weight of variable slot `i`, i.e. the index of `λ(2i+4)`.
pub fn slot_weight(slot: usize) -> u32 {
    2 * slot as u32 + 4
}

/// Slot of `λ_index` in the genus-`g` model, if it is a variable.
pub fn slot_of(genus: u32, index: i64) -> Option<usize> {
    if index >= 4 && index <= 4 * genus as i64 + 2 && index % 2 == 0 {
        Some((index as usize - 4) / 2)
    } else {
        None
    }
}

/// Polynomial over ℚ in the λ variables of a fixed genus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LambdaPoly {
    genus: u32,
    terms: BTreeMap<LambdaMonomial, Rational>,
}

impl LambdaPoly {
    pub fn zero(genus: u32) -> Self {
        LambdaPoly { genus, terms: BTreeMap::new() }
    }

    pub fn one(genus: u32) -> Self {
        Self::constant(genus, Rational::one())
    }

    pub fn constant(genus: u32, c: Rational) -> Self {
        let mut p = Self::zero(genus);
        if !c.is_zero() {
            p.terms.insert(LambdaMonomial::one(genus), c);
        }
        p
    }

    /// `λ_index` with the model conventions: `λ0 = 1`, and indices that are
    /// not parameters of the curve are zero.
    pub fn lambda(genus: u32, index: i64) -> Self {
        if index == 0 {
            return Self::one(genus);
        }
        match slot_of(genus, index) {
            Some(slot) => {
                let mut exps = vec![0; n_vars(genus)];
                exps[slot] = 1;
                Self::from_terms(genus, [(LambdaMonomial::new(exps), Rational::one())])
            }
            None => Self::zero(genus),
        }
    }

    /// Like [`LambdaPoly::lambda`] but only accepts `0`, `2` or a model index.
    pub fn lambda_strict(genus: u32, index: i64) -> Result<Self> {
        if index == 0 || index == 2 || slot_of(genus, index).is_some() {
            Ok(Self::lambda(genus, index))
        } else {
            Err(AlgebraError::LambdaOutOfModel(index, genus))
        }
    }

    pub fn from_terms(genus: u32, terms: impl IntoIterator<Item = (LambdaMonomial, Rational)>) -> Self {
        let mut p = Self::zero(genus);
        for (m, c) in terms {
            assert_eq!(m.exps.len(), n_vars(genus), "monomial arity does not match genus");
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: LambdaMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LambdaMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &LambdaMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest total degree in λ; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(LambdaMonomial::degree).max()
    }

    /// The common weight of all monomials, `Ok(None)` for zero, `Err(())`
    /// if the polynomial is not weight-homogeneous.
    pub fn homogeneous_weight(&self) -> std::result::Result<Option<u32>, ()> {
        let mut w = None;
        for m in self.terms.keys() {
            match w {
                None => w = Some(m.weight),
                Some(x) if x != m.weight => return Err(()),
                _ => {}
            }
        }
        Ok(w)
    }

    /// Zero counts as homogeneous of every weight.
    pub fn is_homogeneous_of(&self, weight: i64) -> bool {
        self.terms.keys().all(|m| m.weight as i64 == weight)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.genus == other.genus {
            Ok(())
        } else {
            Err(AlgebraError::GenusMismatch { left: self.genus, right: other.genus })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.genus);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(self.genus);
        }
        LambdaPoly {
            genus: self.genus,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&rational::int(n))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.genus);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// ∂/∂λ_index; zero when the index is not a variable.
    pub fn derivative(&self, index: i64) -> Self {
        let Some(slot) = slot_of(self.genus, index) else {
            return Self::zero(self.genus);
        };
        let mut out = Self::zero(self.genus);
        for (m, c) in &self.terms {
            let e = m.exps[slot];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[slot] -= 1;
            out.add_term(LambdaMonomial::new(exps), c * rational::int(e as i64));
        }
        out
    }

    /// Canonical text, e.g. `3/2 l8 - 2/5 l4^2`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = rational::sign_split(c);
            push_signed(&mut out, i == 0, neg);
            out.push_str(&render_scaled(&mag, &m.render()));
        }
        out
    }

    pub(crate) fn single_term(&self) -> Option<(&LambdaMonomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }
}

pub(crate) fn push_signed(out: &mut String, first: bool, negative: bool) {
    match (first, negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
}

/// Appends `c · body`: a one-term coefficient is merged into the term, a
/// longer one is parenthesised, and a bare constant sum is inlined.
pub(crate) fn push_term(out: &mut String, first: bool, c: &LambdaPoly, body: &str) {
    if let Some((lm, r)) = c.single_term() {
        let (neg, mag) = rational::sign_split(r);
        let lam = if lm.is_one() { String::new() } else { lm.render() };
        let joined = match (lam.is_empty(), body.is_empty()) {
            (true, _) => body.to_string(),
            (false, true) => lam,
            (false, false) => format!("{lam} {body}"),
        };
        push_signed(out, first, neg);
        out.push_str(&render_scaled(&mag, &joined));
    } else if body.is_empty() {
        let s = c.render();
        if first {
            out.push_str(&s);
        } else if let Some(rest) = s.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&s);
        }
    } else {
        push_signed(out, first, false);
        out.push_str(&format!("({}) {}", c.render(), body));
    }
}

/// `mag body` with the unit magnitude suppressed; `mag` must be nonnegative.
pub(crate) fn render_scaled(mag: &Rational, body: &str) -> String {
    if body.is_empty() {
        rational::render(mag)
    } else if mag.is_one() {
        body.to_string()
    } else {
        format!("{} {}", rational::render(mag), body)
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LambdaPoly[g={}]({})", self.genus, self.render())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident, $ty:ty) => {
        impl $tr<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                self.$checked(rhs).expect("operands over different genera")
            }
        }
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                <&$ty as $tr<&$ty>>::$method(&self, &rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                <&$ty as $tr<&$ty>>::$method(&self, rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

forward_binop!(Add, add, checked_add, LambdaPoly);
forward_binop!(Sub, sub, checked_sub, LambdaPoly);
forward_binop!(Mul, mul, checked_mul, LambdaPoly);

impl Neg for &LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        -&self
    }
}
