//! Normal-ordered differential operators in `z1, z3, …, z(2g-1)` with
//! λ-polynomial coefficients.
//!
//! Slot `i` holds `z(2i+1)` and `∂(2i+1)`. Every stored term is
//! `c(λ) · z^α ∂^β` with all `z` factors to the left of all `∂` factors.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{AlgebraError, Result};
use crate::lambda::{forward_binop, push_term, LambdaPoly};
use crate::rational::Rational;
use crate::xpoly::Coefficient;

/// Odd `z`/`∂` index of slot `i`.
pub fn slot_index(slot: usize) -> u32 {
    2 * slot as u32 + 1
}

/// Slot of the odd index `a` for genus `g`.
pub fn z_slot(genus: u32, index: i64) -> Option<usize> {
    (index >= 1 && index <= 2 * genus as i64 - 1 && index % 2 == 1).then(|| (index as usize - 1) / 2)
}

fn z_slot_or_err(genus: u32, index: i64) -> Result<usize> {
    z_slot(genus, index).ok_or_else(|| AlgebraError::IndexOutOfRange {
        index,
        range: format!("odd 1..={}", 2 * genus - 1),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZMonomial {
    z: Vec<u16>,
    d: Vec<u16>,
}

impl ZMonomial {
    pub fn new(z: Vec<u16>, d: Vec<u16>) -> Self {
        assert_eq!(z.len(), d.len());
        ZMonomial { z, d }
    }

    pub fn one(genus: u32) -> Self {
        let n = genus as usize;
        ZMonomial { z: vec![0; n], d: vec![0; n] }
    }

    pub fn z_exps(&self) -> &[u16] {
        &self.z
    }

    pub fn d_exps(&self) -> &[u16] {
        &self.d
    }

    pub fn z_degree(&self) -> u32 {
        self.z.iter().map(|&e| e as u32).sum()
    }

    pub fn d_order(&self) -> u32 {
        self.d.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.z_degree() == 0 && self.d_order() == 0
    }

    /// `Σ b·(∂_b exponent) − Σ a·(z_a exponent)`.
    pub fn weight(&self) -> i64 {
        (0..self.z.len())
            .map(|i| slot_index(i) as i64 * (self.d[i] as i64 - self.z[i] as i64))
            .sum()
    }

    /// Odd indices of the `z` factors, with repetition, ascending.
    pub fn z_indices(&self) -> Vec<u32> {
        expand(&self.z)
    }

    pub fn d_indices(&self) -> Vec<u32> {
        expand(&self.d)
    }

    pub(crate) fn render(&self) -> String {
        let mut parts = Vec::new();
        for (name, exps) in [("z", &self.z), ("d", &self.d)] {
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("{name}{}", slot_index(i))),
                    _ => parts.push(format!("{name}{}^{e}", slot_index(i))),
                }
            }
        }
        parts.join(" ")
    }
}

fn expand(exps: &[u16]) -> Vec<u32> {
    exps.iter()
        .enumerate()
        .flat_map(|(i, &e)| std::iter::repeat(slot_index(i)).take(e as usize))
        .collect()
}

// Higher ∂-order first, then higher z-degree, then reverse-lexicographic
// exponents: ∂∂ terms, z∂ terms, zz terms, constant.
impl Ord for ZMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .d_order()
            .cmp(&self.d_order())
            .then_with(|| other.z_degree().cmp(&self.z_degree()))
            .then_with(|| other.d.cmp(&self.d))
            .then_with(|| other.z.cmp(&self.z))
    }
}

impl PartialOrd for ZMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeylOperator {
    genus: u32,
    terms: BTreeMap<ZMonomial, LambdaPoly>,
}

impl WeylOperator {
    pub fn zero(genus: u32) -> Self {
        WeylOperator { genus, terms: BTreeMap::new() }
    }

    pub fn identity(genus: u32) -> Self {
        Self::scalar(LambdaPoly::one(genus))
    }

    /// Multiplication by a λ-polynomial.
    pub fn scalar(c: LambdaPoly) -> Self {
        Self::from_term(ZMonomial::one(c.genus()), c)
    }

    pub fn constant(genus: u32, r: Rational) -> Self {
        Self::scalar(LambdaPoly::constant(genus, r))
    }

    pub fn from_term(m: ZMonomial, c: LambdaPoly) -> Self {
        let mut op = Self::zero(c.genus());
        op.add_term(m, c);
        op
    }

    pub fn z(genus: u32, index: i64) -> Result<Self> {
        let s = z_slot_or_err(genus, index)?;
        let mut m = ZMonomial::one(genus);
        m.z[s] = 1;
        Ok(Self::from_term(m, LambdaPoly::one(genus)))
    }

    pub fn d(genus: u32, index: i64) -> Result<Self> {
        let s = z_slot_or_err(genus, index)?;
        let mut m = ZMonomial::one(genus);
        m.d[s] = 1;
        Ok(Self::from_term(m, LambdaPoly::one(genus)))
    }

    /// `c · z_a ∂_b`, a convenience for building first-order pieces.
    pub fn z_d(c: LambdaPoly, a: i64, b: i64) -> Result<Self> {
        let g = c.genus();
        let mut m = ZMonomial::one(g);
        m.z[z_slot_or_err(g, a)?] += 1;
        m.d[z_slot_or_err(g, b)?] += 1;
        Ok(Self::from_term(m, c))
    }

    /// `c · z_a z_b`.
    pub fn z_z(c: LambdaPoly, a: i64, b: i64) -> Result<Self> {
        let g = c.genus();
        let mut m = ZMonomial::one(g);
        m.z[z_slot_or_err(g, a)?] += 1;
        m.z[z_slot_or_err(g, b)?] += 1;
        Ok(Self::from_term(m, c))
    }

    /// `c · ∂_a ∂_b`.
    pub fn d_d(c: LambdaPoly, a: i64, b: i64) -> Result<Self> {
        let g = c.genus();
        let mut m = ZMonomial::one(g);
        m.d[z_slot_or_err(g, a)?] += 1;
        m.d[z_slot_or_err(g, b)?] += 1;
        Ok(Self::from_term(m, c))
    }

    pub(crate) fn add_term(&mut self, m: ZMonomial, c: LambdaPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
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

    pub fn terms(&self) -> impl Iterator<Item = (&ZMonomial, &LambdaPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &ZMonomial) -> LambdaPoly {
        self.terms.get(m).cloned().unwrap_or_else(|| LambdaPoly::zero(self.genus))
    }

    /// Highest power of ∂ appearing; zero for multiplication operators.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(ZMonomial::d_order).max().unwrap_or(0)
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
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(r))
    }

    /// Left multiplication by the λ-polynomial `p` (which commutes with z, ∂).
    pub fn mul_lambda(&self, p: &LambdaPoly) -> Result<Self> {
        if p.genus() != self.genus {
            return Err(AlgebraError::GenusMismatch { left: self.genus, right: p.genus() });
        }
        Ok(self.map_coeffs(|c| c * p))
    }

    pub fn map_coeffs(&self, f: impl Fn(&LambdaPoly) -> LambdaPoly) -> Self {
        let mut out = Self::zero(self.genus);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Keep only the terms selected by `keep`.
    pub fn filter(&self, keep: impl Fn(&ZMonomial) -> bool) -> Self {
        WeylOperator {
            genus: self.genus,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Normal-ordered composition `self ∘ other`, using
    /// `∂^b z^c = Σ_j C(b,j) c!/(c−j)! z^(c−j) ∂^(b−j)` in each slot.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.genus as usize;
        let mut acc: BTreeMap<ZMonomial, LambdaPoly> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let coef = ca * cb;
                // per-slot contraction choices (j, multiplicity)
                let choices: Vec<Vec<(u16, BigInt)>> = (0..n)
                    .map(|i| {
                        let (b, c) = (ma.d[i], mb.z[i]);
                        (0..=b.min(c)).map(|j| (j, binomial(b, j) * falling(c, j))).collect()
                    })
                    .collect();
                let mut idx = vec![0usize; n];
                loop {
                    let mut mult = BigInt::one();
                    let mut z = Vec::with_capacity(n);
                    let mut d = Vec::with_capacity(n);
                    for i in 0..n {
                        let (j, ref k) = choices[i][idx[i]];
                        mult *= k;
                        z.push(ma.z[i] + mb.z[i] - j);
                        d.push(ma.d[i] + mb.d[i] - j);
                    }
                    let term = if mult.is_one() { coef.clone() } else { coef.scale(&Rational::from_integer(mult)) };
                    accumulate(&mut acc, ZMonomial { z, d }, term);
                    // odometer
                    let mut i = 0;
                    while i < n {
                        idx[i] += 1;
                        if idx[i] < choices[i].len() {
                            break;
                        }
                        idx[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(WeylOperator { genus: self.genus, terms: acc })
    }

    /// `[A, B] = A∘B − B∘A`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.checked_sub(&other.compose(self)?)
    }

    /// Apply to a multiplication operator `f` (a polynomial in z with
    /// λ-coefficients) by direct differentiation, returning `A(f)`.
    pub fn apply(&self, f: &Self) -> Result<Self> {
        self.check(f)?;
        if f.order() > 0 {
            return Err(AlgebraError::UnsupportedOrder(f.order()));
        }
        let mut out = Self::zero(self.genus);
        for (ma, ca) in &self.terms {
            for (mf, cf) in &f.terms {
                let mut mult = BigInt::one();
                let mut z = Vec::with_capacity(ma.z.len());
                let mut vanished = false;
                for i in 0..ma.z.len() {
                    let (k, e) = (ma.d[i], mf.z[i]);
                    if k > e {
                        vanished = true;
                        break;
                    }
                    mult *= falling(e, k);
                    z.push(ma.z[i] + e - k);
                }
                if vanished {
                    continue;
                }
                let m = ZMonomial { z, d: vec![0; ma.d.len()] };
                out.add_term(m, (ca * cf).scale(&Rational::from_integer(mult)));
            }
        }
        Ok(out)
    }

    /// Common weight of all terms (`wt z_a = −a`, `wt ∂_b = b`, `wt λ_k = k`).
    /// `Ok(None)` for zero, `Err(())` if not homogeneous.
    pub fn homogeneous_weight(&self) -> std::result::Result<Option<i64>, ()> {
        let mut w = None;
        for (m, c) in &self.terms {
            for (lm, _) in c.terms() {
                let tw = lm.weight() as i64 + m.weight();
                match w {
                    None => w = Some(tw),
                    Some(x) if x != tw => return Err(()),
                    _ => {}
                }
            }
        }
        Ok(w)
    }

    pub fn is_homogeneous_of(&self, weight: i64) -> bool {
        self.terms.iter().all(|(m, c)| c.is_homogeneous_of(weight - m.weight()))
    }

    /// Canonical text, e.g. `1/2 d1^2 - 1/6 l4 z1^2`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            push_term(&mut out, i == 0, c, &m.render());
        }
        out
    }
}

fn accumulate(acc: &mut BTreeMap<ZMonomial, LambdaPoly>, m: ZMonomial, c: LambdaPoly) {
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = &*o.get() + &c;
            *o.get_mut() = sum;
        }
    }
}

fn binomial(n: u16, k: u16) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `n (n−1) ⋯ (n−k+1)`.
fn falling(n: u16, k: u16) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

impl fmt::Display for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOperator[g={}]({})", self.genus, self.render())
    }
}

impl WeylOperator {
    fn checked_compose(&self, other: &Self) -> Result<Self> {
        self.compose(other)
    }
}

forward_binop!(Add, add, checked_add, WeylOperator);
forward_binop!(Sub, sub, checked_sub, WeylOperator);
forward_binop!(Mul, mul, checked_compose, WeylOperator);

impl Neg for &WeylOperator {
    type Output = WeylOperator;
    fn neg(self) -> WeylOperator {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for WeylOperator {
    type Output = WeylOperator;
    fn neg(self) -> WeylOperator {
        -&self
    }
}

impl Coefficient for WeylOperator {
    fn zero(genus: u32) -> Self {
        WeylOperator::zero(genus)
    }
    fn genus(&self) -> u32 {
        self.genus
    }
    fn is_zero(&self) -> bool {
        WeylOperator::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        self.checked_sub(other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        self.compose(other)
    }
    fn scale(&self, r: &Rational) -> Self {
        WeylOperator::scale(self, r)
    }
    fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    c.as_constant()
                } else {
                    None
                }
            }
            _ => None,
        }
    }
    fn render(&self) -> String {
        WeylOperator::render(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn z(g: u32, a: i64) -> WeylOperator {
        WeylOperator::z(g, a).unwrap()
    }
    fn d(g: u32, a: i64) -> WeylOperator {
        WeylOperator::d(g, a).unwrap()
    }

    #[test]
    fn canonical_commutation() {
        let g = 1;
        let got = &d(g, 1) * &z(g, 1);
        let want = &(&z(g, 1) * &d(g, 1)) + &WeylOperator::identity(g);
        assert_eq!(got, want);
        assert_eq!(got.render(), "z1 d1 + 1");
    }

    #[test]
    fn different_slots_commute() {
        let g = 2;
        assert_eq!(&d(g, 3) * &z(g, 1), &z(g, 1) * &d(g, 3));
    }

    #[test]
    fn identity_is_a_unit() {
        let g = 2;
        let a = &(&z(g, 1) * &d(g, 3)) + &(&d(g, 1) * &d(g, 1)).mul_lambda(&LambdaPoly::lambda(g, 4)).unwrap();
        assert_eq!(&a * &WeylOperator::identity(g), a);
        assert_eq!(&WeylOperator::identity(g) * &a, a);
    }

    #[test]
    fn commutator_of_d_squared_and_euler() {
        let g = 1;
        let d2 = &d(g, 1) * &d(g, 1);
        let zd = &z(g, 1) * &d(g, 1);
        assert_eq!(d2.commutator(&zd).unwrap(), d2.scale(&int(2)));
    }

    #[test]
    fn square_of_shifted_derivative() {
        // (∂ + s z)² with a formal scalar s stood in by λ4
        let g = 1;
        let s = LambdaPoly::lambda(g, 4);
        let a = &d(g, 1) + &z(g, 1).mul_lambda(&s).unwrap();
        let sq = &a * &a;
        let want = &(&(&d(g, 1) * &d(g, 1)) + &(&z(g, 1) * &d(g, 1)).mul_lambda(&s.scale_int(2)).unwrap())
            + &(&WeylOperator::scalar(s.clone()) + &(&z(g, 1) * &z(g, 1)).mul_lambda(&(&s * &s)).unwrap());
        assert_eq!(sq, want);
        // oracle: act on 1, z1, z1^2
        for n in 0..3 {
            let f = (0..n).fold(WeylOperator::identity(g), |acc, _| &acc * &z(g, 1));
            assert_eq!(sq.apply(&f).unwrap(), a.apply(&a.apply(&f).unwrap()).unwrap());
        }
    }

    #[test]
    fn render_canonical_text() {
        let g = 1;
        let h2 = &(&d(g, 1) * &d(g, 1)).scale(&rat(1, 2)) - &(&z(g, 1) * &z(g, 1)).mul_lambda(&LambdaPoly::lambda(g, 4).scale(&rat(1, 6))).unwrap();
        assert_eq!(h2.render(), "1/2 d1^2 - 1/6 l4 z1^2");
        let h0 = &(&z(g, 1) * &d(g, 1)) - &WeylOperator::identity(g);
        assert_eq!(h0.render(), "z1 d1 - 1");
        assert_eq!(h0.homogeneous_weight(), Ok(Some(0)));
    }

    #[test]
    fn bad_index_rejected() {
        assert!(WeylOperator::z(2, 5).is_err());
        assert!(WeylOperator::d(2, 2).is_err());
    }
}
