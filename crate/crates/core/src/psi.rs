//! Polynomials in the formal generators `ψ_I`, the variables `z` and the
//! parameters `λ`.
//!
//! `ψ_j = ∂_j ln φ` for a single index and `ψ_I = −∂_{i1}⋯∂_{in} ln φ` for
//! `|I| ≥ 2`. The only place where this asymmetric sign enters is
//! [`PsiPoly::derivative`].

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{AlgebraError, Result};
use crate::lambda::{push_term, LambdaPoly};
use crate::rational::{int, Rational};
use crate::weyl::{slot_index, z_slot};

/// `ψ_I` for a sorted multiset `I` of odd indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PsiGenerator(Vec<u32>);

impl PsiGenerator {
    pub fn new(genus: u32, mut indices: Vec<u32>) -> Result<Self> {
        if indices.is_empty() {
            return Err(AlgebraError::IndexOutOfRange { index: 0, range: "nonempty ψ index".into() });
        }
        for &i in &indices {
            if z_slot(genus, i as i64).is_none() {
                return Err(AlgebraError::IndexOutOfRange { index: i as i64, range: format!("odd 1..={}", 2 * genus - 1) });
            }
        }
        indices.sort_unstable();
        Ok(PsiGenerator(indices))
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().map(|&i| i as i64).sum()
    }

    fn with(&self, j: u32) -> Self {
        let mut v = self.0.clone();
        v.push(j);
        v.sort_unstable();
        PsiGenerator(v)
    }

    pub fn render(&self) -> String {
        let inner: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        format!("psi{{{}}}", inner.join(","))
    }
}

/// `Π ψ_I^{e_I} · z^α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PsiMonomial {
    psi: BTreeMap<PsiGenerator, u16>,
    z: Vec<u16>,
}

impl PsiMonomial {
    pub fn one(genus: u32) -> Self {
        PsiMonomial { psi: BTreeMap::new(), z: vec![0; genus as usize] }
    }

    pub fn new(psi: BTreeMap<PsiGenerator, u16>, z: Vec<u16>) -> Self {
        PsiMonomial { psi: psi.into_iter().filter(|(_, e)| *e > 0).collect(), z }
    }

    pub fn psi(&self) -> &BTreeMap<PsiGenerator, u16> {
        &self.psi
    }

    pub fn z_exps(&self) -> &[u16] {
        &self.z
    }

    /// Number of ψ factors, with multiplicity.
    pub fn psi_degree(&self) -> u32 {
        self.psi.values().map(|&e| e as u32).sum()
    }

    /// Largest generator order present, 0 if none.
    pub fn max_order(&self) -> usize {
        self.psi.keys().map(PsiGenerator::order).max().unwrap_or(0)
    }

    pub fn weight(&self) -> i64 {
        let p: i64 = self.psi.iter().map(|(g, &e)| g.weight() * e as i64).sum();
        let z: i64 = self.z.iter().enumerate().map(|(i, &e)| slot_index(i) as i64 * e as i64).sum();
        p - z
    }

    fn mul(&self, other: &Self) -> Self {
        let mut psi = self.psi.clone();
        for (g, &e) in &other.psi {
            *psi.entry(g.clone()).or_insert(0) += e;
        }
        let z = self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect();
        PsiMonomial { psi, z }
    }

    fn sort_key(&self) -> impl Ord + '_ {
        let z_deg: u32 = self.z.iter().map(|&e| e as u32).sum();
        let ordered: Vec<(&PsiGenerator, u16)> = self.psi.iter().map(|(g, &e)| (g, e)).collect();
        (Reverse(self.max_order()), Reverse(self.psi_degree()), ordered, Reverse(z_deg), Reverse(self.z.clone()))
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (g, &e) in &self.psi {
            parts.push(if e == 1 { g.render() } else { format!("{}^{}", g.render(), e) });
        }
        for (i, &e) in self.z.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("z{}", slot_index(i))),
                _ => parts.push(format!("z{}^{}", slot_index(i), e)),
            }
        }
        parts.join(" ")
    }
}

impl Ord for PsiMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for PsiMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PsiPoly {
    genus: u32,
    terms: BTreeMap<PsiMonomial, LambdaPoly>,
}

impl PsiPoly {
    pub fn zero(genus: u32) -> Self {
        PsiPoly { genus, terms: BTreeMap::new() }
    }

    pub fn scalar(c: LambdaPoly) -> Self {
        let mut p = Self::zero(c.genus());
        p.add_term(PsiMonomial::one(c.genus()), c);
        p
    }

    pub fn constant(genus: u32, r: Rational) -> Self {
        Self::scalar(LambdaPoly::constant(genus, r))
    }

    pub fn psi(genus: u32, indices: Vec<u32>) -> Result<Self> {
        let g = PsiGenerator::new(genus, indices)?;
        Ok(Self::from_term(PsiMonomial::new([(g, 1)].into(), vec![0; genus as usize]), LambdaPoly::one(genus)))
    }

    pub fn z(genus: u32, index: i64) -> Result<Self> {
        let slot = z_slot(genus, index)
            .ok_or_else(|| AlgebraError::IndexOutOfRange { index, range: format!("odd 1..={}", 2 * genus - 1) })?;
        let mut z = vec![0; genus as usize];
        z[slot] = 1;
        Ok(Self::from_term(PsiMonomial::new(BTreeMap::new(), z), LambdaPoly::one(genus)))
    }

    pub fn from_term(m: PsiMonomial, c: LambdaPoly) -> Self {
        let mut p = Self::zero(c.genus());
        p.add_term(m, c);
        p
    }

    pub(crate) fn add_term(&mut self, m: PsiMonomial, c: LambdaPoly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PsiMonomial, &LambdaPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &PsiMonomial) -> LambdaPoly {
        self.terms.get(m).cloned().unwrap_or_else(|| LambdaPoly::zero(self.genus))
    }

    fn check(&self, other: u32) -> Result<()> {
        if self.genus != other {
            return Err(AlgebraError::GenusMismatch { left: self.genus, right: other });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other.genus)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other.genus)?;
        let mut out = Self::zero(self.genus);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.genus);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.scale(r));
        }
        out
    }

    pub fn mul_lambda(&self, p: &LambdaPoly) -> Result<Self> {
        self.checked_mul(&Self::scalar(p.clone()))
    }

    /// Largest number of ψ factors in a single term.
    pub fn psi_degree(&self) -> u32 {
        self.terms.keys().map(PsiMonomial::psi_degree).max().unwrap_or(0)
    }

    /// The terms with exactly `n` ψ factors.
    pub fn with_psi_degree(&self, n: u32) -> Self {
        self.filter(|m| m.psi_degree() == n)
    }

    pub fn filter(&self, keep: impl Fn(&PsiMonomial) -> bool) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
        PsiPoly { genus: self.genus, terms }
    }

    pub fn is_homogeneous_of(&self, weight: i64) -> bool {
        self.terms.iter().all(|(m, c)| c.is_homogeneous_of(weight - m.weight()))
    }

    /// The formal derivation `∂_j`: `∂_j ψ_a = −ψ_{aj}`, `∂_j ψ_I = ψ_{I∪j}`
    /// for `|I| ≥ 2`, `∂_j z_a = δ_{aj}`, `∂_j λ = 0`.
    pub fn derivative(&self, j: u32) -> Result<Self> {
        let slot = z_slot(self.genus, j as i64).ok_or_else(|| AlgebraError::IndexOutOfRange {
            index: j as i64,
            range: format!("odd 1..={}", 2 * self.genus - 1),
        })?;
        let mut out = Self::zero(self.genus);
        for (m, c) in &self.terms {
            for (g, &e) in &m.psi {
                let mut rest = m.clone();
                *rest.psi.get_mut(g).expect("present") -= 1;
                if rest.psi[g] == 0 {
                    rest.psi.remove(g);
                }
                *rest.psi.entry(g.with(j)).or_insert(0) += 1;
                let sign = if g.order() == 1 { -1 } else { 1 };
                out.add_term(rest, c.scale(&int(sign * e as i64)));
            }
            let e = m.z[slot];
            if e > 0 {
                let mut rest = m.clone();
                rest.z[slot] -= 1;
                out.add_term(rest, c.scale(&int(e as i64)));
            }
        }
        Ok(out)
    }

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

impl fmt::Display for PsiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for PsiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PsiPoly[g={}]({})", self.genus, self.render())
    }
}

crate::lambda::forward_binop!(Add, add, checked_add, PsiPoly);
crate::lambda::forward_binop!(Sub, sub, checked_sub, PsiPoly);
crate::lambda::forward_binop!(Mul, mul, checked_mul, PsiPoly);
#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn psi(g: u32, i: &[u32]) -> PsiPoly {
        PsiPoly::psi(g, i.to_vec()).unwrap()
    }

    #[test]
    fn single_index_derivative_flips_sign() {
        assert_eq!(psi(2, &[1]).derivative(1).unwrap(), psi(2, &[1, 1]).neg());
    }

    #[test]
    fn higher_derivative_keeps_sign() {
        assert_eq!(psi(2, &[1, 1]).derivative(3).unwrap(), psi(2, &[1, 1, 3]));
        assert_eq!(psi(2, &[3, 1]), psi(2, &[1, 3]));
    }

    #[test]
    fn leibniz_on_square() {
        let p = &psi(1, &[1]) * &psi(1, &[1]);
        let want = (&psi(1, &[1]) * &psi(1, &[1, 1])).scale(&int(-2));
        assert_eq!(p.derivative(1).unwrap(), want);
    }

    #[test]
    fn z_and_lambda_derivatives() {
        let z1 = PsiPoly::z(2, 1).unwrap();
        let l4 = PsiPoly::scalar(LambdaPoly::lambda(2, 4));
        let p = &(&z1 * &z1) * &l4;
        assert_eq!(p.derivative(1).unwrap(), (&z1 * &l4).scale(&int(2)));
        assert!(p.derivative(3).unwrap().is_zero());
    }

    #[test]
    fn weights_and_rendering() {
        let p = psi(4, &[1, 1, 1]).scale(&rat(1, 2)) + psi(4, &[3])
            - (PsiPoly::z(4, 1).unwrap() * PsiPoly::scalar(LambdaPoly::lambda(4, 4))).scale(&rat(7, 9));
        assert!(p.is_homogeneous_of(3));
        assert_eq!(p.render(), "1/2 psi{1,1,1} + psi{3} - 7/9 l4 z1");
        assert_eq!(p.psi_degree(), 1);
    }

    #[test]
    fn out_of_range_generator() {
        assert!(PsiPoly::psi(2, vec![5]).is_err());
        assert!(PsiPoly::psi(2, vec![2]).is_err());
    }
}
