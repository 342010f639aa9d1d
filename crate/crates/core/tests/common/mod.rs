//! Bounded random generators shared by the property suites (genus 2).
#![allow(dead_code)]

use heatlie::psi::{PsiGenerator, PsiMonomial, PsiPoly};
use heatlie::rational::rat;
use heatlie::{LambdaMonomial, LambdaPoly, LambdaVectorField, WeylOperator, XPoly, ZMonomial};
use proptest::prelude::*;
use std::collections::BTreeMap;

pub const G: u32 = 2;

pub fn coef() -> impl Strategy<Value = heatlie::Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

// genus 2 parameters: λ4, λ6, λ8, λ10
pub fn lambda_mono() -> impl Strategy<Value = LambdaMonomial> {
    prop::collection::vec(0u16..=1, 4).prop_map(LambdaMonomial::new)
}

pub fn lambda_poly() -> impl Strategy<Value = LambdaPoly> {
    prop::collection::vec((lambda_mono(), coef()), 0..=3).prop_map(|ts| LambdaPoly::from_terms(G, ts))
}

pub fn z_mono(max_d: u16) -> impl Strategy<Value = ZMonomial> {
    (prop::collection::vec(0u16..=2, 2), prop::collection::vec(0u16..=max_d, 2)).prop_map(|(z, d)| ZMonomial::new(z, d))
}

pub fn weyl() -> impl Strategy<Value = WeylOperator> {
    prop::collection::vec((z_mono(2), lambda_poly()), 0..=3).prop_map(|ts| {
        ts.into_iter().fold(WeylOperator::zero(G), |acc, (m, c)| acc.checked_add(&WeylOperator::from_term(m, c)).unwrap())
    })
}

pub fn z_poly() -> impl Strategy<Value = WeylOperator> {
    prop::collection::vec((prop::collection::vec(0u16..=2, 2), lambda_poly()), 0..=3).prop_map(|ts| {
        ts.into_iter().fold(WeylOperator::zero(G), |acc, (z, c)| {
            acc.checked_add(&WeylOperator::from_term(ZMonomial::new(z, vec![0, 0]), c)).unwrap()
        })
    })
}

pub fn vector_field() -> impl Strategy<Value = LambdaVectorField> {
    prop::collection::vec(lambda_poly(), 4).prop_map(|slots| LambdaVectorField::from_slots(G, slots).unwrap())
}

pub fn x_poly(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = XPoly<LambdaPoly>> {
    prop::collection::vec(lambda_poly(), len).prop_map(|c| XPoly::from_coeffs(G, c).unwrap())
}

pub fn psi_poly() -> impl Strategy<Value = PsiPoly> {
    let gen = prop::collection::vec(prop::sample::select(vec![1u32, 3]), 1..=3);
    let mono = (prop::collection::vec((gen, 1u16..=2), 0..=2), prop::collection::vec(0u16..=1, 2));
    prop::collection::vec((mono, lambda_poly()), 0..=3).prop_map(|ts| {
        let mut p = PsiPoly::zero(G);
        for ((gens, z), c) in ts {
            let mut psi = BTreeMap::new();
            for (ix, e) in gens {
                *psi.entry(PsiGenerator::new(G, ix).unwrap()).or_insert(0) += e;
            }
            p = p.checked_add(&PsiPoly::from_term(PsiMonomial::new(psi, z), c)).unwrap();
        }
        p
    })
}

