//! Construction of the generators: the matrix `v`, the vector fields
//! `L_{2k}`, the generating function `H(x)` and the operators `H_{2k}`,
//! `Q_{2k} = L_{2k} − H_{2k}`.
//!
//! `H_{2k}` is built three ways: from the generating function (the
//! authoritative route), from the explicit closed forms for `k ≤ 2`, and by
//! the commutator recurrence for `k ≥ 3`. The latter two are independent of
//! the first and are used to cross-check it.

use std::collections::BTreeMap;

use crate::error::{AlgebraError, Result};
use crate::lambda::LambdaPoly;
use crate::rational::{int, rat, Rational};
use crate::schrodinger::SchrodingerOperator;
use crate::vector_field::LambdaVectorField;
use crate::weyl::{WeylOperator, ZMonomial};
use crate::xpoly::{curve_poly, XPoly};

/// The genus `g` together with its variable sets: `λ4, …, λ(4g+2)` and
/// `z1, z3, …, z(2g−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenusContext {
    g: u32,
}

impl GenusContext {
    pub fn new(g: i64) -> Result<Self> {
        if g < 1 || g > 64 {
            return Err(AlgebraError::InvalidGenus(g));
        }
        Ok(GenusContext { g: g as u32 })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn g(&self) -> i64 {
        self.g as i64
    }

    /// Number of generators `L_0 … L_{4g−2}`.
    pub fn rank(&self) -> usize {
        2 * self.g as usize
    }

    pub fn lambda(&self, index: i64) -> LambdaPoly {
        LambdaPoly::lambda(self.g, index)
    }

    pub fn z_indices(&self) -> impl Iterator<Item = i64> {
        (1..=self.g as i64).map(|i| 2 * i - 1)
    }

    pub fn lambda_indices(&self) -> impl Iterator<Item = i64> {
        (2..=2 * self.g as i64 + 1).map(|m| 2 * m)
    }

    pub fn curve(&self) -> XPoly<LambdaPoly> {
        curve_poly(self.g()).expect("valid genus")
    }

    fn check_k(&self, k: i64) -> Result<()> {
        if (0..self.rank() as i64).contains(&k) {
            Ok(())
        } else {
            Err(AlgebraError::IndexOutOfRange { index: k, range: format!("0..={}", self.rank() - 1) })
        }
    }

    fn c(&self, r: Rational) -> LambdaPoly {
        LambdaPoly::constant(self.g, r)
    }
}

/// `v_{2k,2m}(λ)` for `1 ≤ k, m ≤ 2g`, symmetric in `(k, m)`.
pub fn v_entry(ctx: &GenusContext, k: i64, m: i64) -> Result<LambdaPoly> {
    let n = ctx.rank() as i64;
    for idx in [k, m] {
        if !(1..=n).contains(&idx) {
            return Err(AlgebraError::IndexOutOfRange { index: idx, range: format!("1..={n}") });
        }
    }
    let (k, m) = if k <= m { (k, m) } else { (m, k) };
    let g = ctx.g();
    let mut out = LambdaPoly::zero(ctx.genus());
    for s in 0..k {
        let term = &ctx.lambda(2 * s) * &ctx.lambda(2 * (k + m - s));
        out = &out + &term.scale_int(2 * (k + m - 2 * s));
    }
    let tail = (&ctx.lambda(2 * k) * &ctx.lambda(2 * m)).scale(&rat(2 * k * (2 * g - m + 1), 2 * g + 1));
    Ok(&out - &tail)
}

/// `L_{2k} = Σ_{m=2}^{2g+1} v_{2k+2, 2m−2} ∂/∂λ_{2m}`.
pub fn build_l(ctx: &GenusContext, k: i64) -> Result<LambdaVectorField> {
    ctx.check_k(k)?;
    let slots = ctx
        .lambda_indices()
        .map(|idx| v_entry(ctx, k + 1, idx / 2 - 1))
        .collect::<Result<Vec<_>>>()?;
    LambdaVectorField::from_slots(ctx.genus(), slots)
}

/// `R_i(x) = x^{g−i+1} ∂_x q(f(x), x^{2g−2i+2})`.
pub fn r_poly(ctx: &GenusContext, i: i64) -> Result<XPoly<LambdaPoly>> {
    let g = ctx.g();
    if !(1..=g).contains(&i) {
        return Err(AlgebraError::IndexOutOfRange { index: i, range: format!("1..={g}") });
    }
    let q = ctx.curve().quo(&XPoly::x_pow(ctx.genus(), (2 * g - 2 * i + 2) as usize))?;
    q.derivative().mul(&XPoly::x_pow(ctx.genus(), (g - i + 1) as usize))
}

fn lift(p: &XPoly<LambdaPoly>) -> XPoly<WeylOperator> {
    p.map(|c| WeylOperator::scalar(c.clone()))
}

/// The x-polynomials `h(x)` (first order in ∂) and `t(x)`.
pub fn build_h_t(ctx: &GenusContext) -> Result<(XPoly<WeylOperator>, XPoly<WeylOperator>)> {
    let g = ctx.g();
    let gen = ctx.genus();
    let r: Vec<XPoly<LambdaPoly>> = (1..=g).map(|i| r_poly(ctx, i)).collect::<Result<_>>()?;
    let z = |i: i64| WeylOperator::z(gen, 2 * i - 1);
    let d = |i: i64| WeylOperator::d(gen, 2 * i - 1);

    // summand i of h(x): x^{g−i} ∂_{2i−1} + R_i(x) z_{2i−1}
    let h_i = |i: i64| -> Result<XPoly<WeylOperator>> {
        let a = XPoly::monomial(d(i)?, (g - i) as usize);
        let b = lift(&r[(i - 1) as usize]).left_mul_coeff(&z(i)?)?;
        a.add(&b)
    };

    let mut h = XPoly::zero(gen);
    for i in 1..=g {
        h = h.add(&h_i(i)?)?;
    }

    let mut t = XPoly::zero(gen);
    for i in 1..=g {
        let q = r[(i - 1) as usize].quo_xpow((g - i + 2) as usize);
        let zz = (&z(i)? * &z(i)?).scale(&rat(g - i + 1, 2));
        t = t.add(&lift(&q).left_mul_coeff(&zz)?)?;
    }
    for i in 1..g {
        let hi = h_i(i)?;
        for j in (i + 1)..=g {
            let q = hi.quo_xpow((g - j + 2) as usize);
            let zj = z(j)?.scale(&int(g - j + 1));
            t = t.add(&q.left_mul_coeff(&zj)?)?;
        }
    }
    Ok((h, t))
}

/// `H(x) = r(−¼ f″ + 2 f t + ½ h∘h, f′)`.
pub fn h_generating(ctx: &GenusContext) -> Result<XPoly<WeylOperator>> {
    let f = ctx.curve();
    let fp = f.derivative();
    let fpp = fp.derivative();
    let (h, t) = build_h_t(ctx)?;
    let total = lift(&fpp)
        .scale(&rat(-1, 4))
        .add(&lift(&f).mul(&t)?.scale(&int(2)))?
        .add(&h.mul(&h)?.scale(&rat(1, 2)))?;
    total.rem(&lift(&fp))
}

/// `H_{2k}` read off as the coefficient of `x^{2g−1−k}` in `H(x)`.
pub fn h_from_generating(ctx: &GenusContext, generating: &XPoly<WeylOperator>, k: i64) -> Result<WeylOperator> {
    ctx.check_k(k)?;
    Ok(generating.coeff((2 * ctx.g() - 1 - k) as usize))
}

/// Explicit `H_0`, `H_2`, `H_4`.
pub fn h_closed_form(ctx: &GenusContext, k: i64) -> Result<WeylOperator> {
    let g = ctx.g();
    let gen = ctx.genus();
    if !(0..=2).contains(&k) {
        return Err(AlgebraError::IndexOutOfRange { index: k, range: "0..=2".into() });
    }
    ctx.check_k(k)?;
    let lam = |i: i64| LambdaPoly::lambda_strict(gen, i);
    let c = |r: Rational| ctx.c(r);
    let mut h = WeylOperator::zero(gen);
    let odd = |s: i64| 2 * s - 1;
    match k {
        0 => {
            for s in 1..=g {
                h = &h + &WeylOperator::z_d(c(int(odd(s))), odd(s), odd(s))?;
            }
            h = &h - &WeylOperator::constant(gen, rat(g * (g + 1), 2));
        }
        1 => {
            h = &h + &WeylOperator::d_d(c(rat(1, 2)), 1, 1)?;
            for s in 1..g {
                h = &h + &WeylOperator::z_d(c(int(odd(s))), odd(s), odd(s) + 2)?;
                let coef = lam(4)?.scale(&rat(-4 * (g - s), 2 * g + 1));
                h = &h + &WeylOperator::z_d(coef, odd(s) + 2, odd(s))?;
            }
            for s in 1..=g {
                let coef = &lam(4 * s)?.scale(&rat(odd(s), 2))
                    - &(&lam(4)? * &lam(4 * s - 4)?).scale(&rat(2 * (g - s + 1), 2 * g + 1));
                h = &h + &WeylOperator::z_z(coef, odd(s), odd(s))?;
            }
        }
        _ => {
            h = &h + &WeylOperator::d_d(c(int(1)), 1, 3)?;
            for s in 1..=(g - 2) {
                h = &h + &WeylOperator::z_d(c(int(odd(s))), odd(s), odd(s) + 4)?;
            }
            for s in 1..g {
                h = &h + &WeylOperator::z_d(lam(4)?.scale_int(odd(s)), odd(s) + 2, odd(s) + 2)?;
                let coef = lam(6)?.scale(&rat(-6 * (g - s), 2 * g + 1));
                h = &h + &WeylOperator::z_d(coef, odd(s) + 2, odd(s))?;
            }
            for s in 1..=g {
                let coef = &lam(4 * s + 2)?.scale_int(odd(s))
                    - &(&lam(6)? * &lam(4 * s - 4)?).scale(&rat(3 * (g - s + 1), 2 * g + 1));
                h = &h + &WeylOperator::z_z(coef, odd(s), odd(s))?;
            }
            for s in 1..g {
                h = &h + &WeylOperator::z_z(lam(4 * s + 4)?.scale_int(odd(s)), odd(s), odd(s) + 2)?;
            }
            h = &h - &WeylOperator::scalar(lam(4)?.scale(&rat(g * (g - 1), 2)));
        }
    }
    Ok(h)
}

/// Coefficients of an operator `½Σ(α ∂a∂b + 2β z_a∂_b + γ z_a z_b) + δ`
/// with symmetric `α`, `γ` over ordered pairs of odd indices.
///
/// Conventions read from the normal form: the stored coefficient of
/// `∂a∂b` is `α_ab` for `a ≠ b` and `½α_aa` on the diagonal; the stored
/// coefficient of `z_a ∂_b` is exactly `β_ab`; `γ` follows `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticParts {
    pub alpha: BTreeMap<(u32, u32), LambdaPoly>,
    pub beta: BTreeMap<(u32, u32), LambdaPoly>,
    pub gamma: BTreeMap<(u32, u32), LambdaPoly>,
    pub delta: LambdaPoly,
    /// Any term not of the four shapes above.
    pub rest: WeylOperator,
}

impl QuadraticParts {
    pub fn of(op: &WeylOperator) -> Self {
        let gen = op.genus();
        let mut parts = QuadraticParts {
            alpha: BTreeMap::new(),
            beta: BTreeMap::new(),
            gamma: BTreeMap::new(),
            delta: LambdaPoly::zero(gen),
            rest: WeylOperator::zero(gen),
        };
        let sym = |map: &mut BTreeMap<(u32, u32), LambdaPoly>, a: u32, b: u32, c: &LambdaPoly| {
            if a == b {
                map.insert((a, a), c.scale_int(2));
            } else {
                map.insert((a, b), c.clone());
                map.insert((b, a), c.clone());
            }
        };
        for (m, c) in op.terms() {
            let zs = m.z_indices();
            let ds = m.d_indices();
            match (zs.as_slice(), ds.as_slice()) {
                ([], []) => parts.delta = c.clone(),
                ([], [a, b]) => sym(&mut parts.alpha, *a, *b, c),
                ([a, b], []) => sym(&mut parts.gamma, *a, *b, c),
                ([a], [b]) => {
                    parts.beta.insert((*a, *b), c.clone());
                }
                _ => parts.rest.add_term(m.clone(), c.clone()),
            }
        }
        parts
    }
}

/// The α rule and δ of `H_{2k}`: `α_ab = 1` iff `a + b = 2k`, and
/// `δ = (−¼(2g−k+1)(2g−k) + ½(g+⌊(k+1)/2⌋−k)(g−⌊(k+1)/2⌋)) λ_{2k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaDelta {
    pub alpha_pairs: Vec<(u32, u32)>,
    pub delta: LambdaPoly,
}

pub fn alpha_delta(ctx: &GenusContext, k: i64) -> Result<AlphaDelta> {
    ctx.check_k(k)?;
    let g = ctx.g();
    let alpha_pairs = ordered_odd_pairs(ctx, 2 * k);
    let fl = (k + 1) / 2;
    let coef = rat(-(2 * g - k + 1) * (2 * g - k), 4) + rat((g + fl - k) * (g - fl), 2);
    Ok(AlphaDelta { alpha_pairs, delta: ctx.lambda(2 * k).scale(&coef) })
}

/// Ordered pairs of odd indices `(a, b)` in range with `a + b = sum`.
pub fn ordered_odd_pairs(ctx: &GenusContext, sum: i64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for a in ctx.z_indices() {
        let b = sum - a;
        if b >= 1 && b <= 2 * ctx.g() - 1 {
            out.push((a as u32, b as u32));
        }
    }
    out
}

/// `Q_{2k} = 1/(2(k−2)) [Q_2, Q_{2k−2}] − 2(2g−k+1)/((k−2)(2g+1)) (λ_{2k} Q_0 − λ_4 Q_{2k−4})`.
pub fn q_recurrence(
    ctx: &GenusContext,
    k: i64,
    q2: &SchrodingerOperator,
    q_prev: &SchrodingerOperator,
    q0: &SchrodingerOperator,
    q_prev2: &SchrodingerOperator,
) -> Result<SchrodingerOperator> {
    if k < 3 {
        return Err(AlgebraError::RecurrenceNotApplicable(k.max(0) as u32));
    }
    ctx.check_k(k)?;
    let g = ctx.g();
    let bracket = q2.commutator(q_prev)?.scale(&rat(1, 2 * (k - 2)));
    let tail = q0
        .mul_lambda(&ctx.lambda(2 * k), 2 * k)?
        .sub(&q_prev2.mul_lambda(&ctx.lambda(4), 2 * k)?)?
        .scale(&rat(2 * (2 * g - k + 1), (k - 2) * (2 * g + 1)));
    let mut q = bracket.sub(&tail)?;
    q.weight = 2 * k;
    Ok(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    GeneratingFunction,
    ClosedForm,
    Recurrence,
}

/// `H_0, H_2, …, H_{4g−2}` with the route each entry was built by.
#[derive(Clone, Debug)]
pub struct HFamily {
    pub ctx: GenusContext,
    pub operators: Vec<WeylOperator>,
    pub provenance: Vec<Provenance>,
}

impl HFamily {
    /// All `H_{2k}` from the generating function.
    pub fn from_generating(ctx: &GenusContext) -> Result<Self> {
        let gen = h_generating(ctx)?;
        let operators = (0..ctx.rank() as i64)
            .map(|k| h_from_generating(ctx, &gen, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(HFamily { ctx: *ctx, provenance: vec![Provenance::GeneratingFunction; operators.len()], operators })
    }

    /// Closed forms for `k ≤ 2`, then the recurrence; returns the `Q`s too
    /// (their L-parts come out of the recurrence, not from `build_l`).
    pub fn from_recurrence(ctx: &GenusContext) -> Result<(Self, Vec<SchrodingerOperator>)> {
        let n = ctx.rank() as i64;
        let mut qs = Vec::with_capacity(n as usize);
        let mut provenance = Vec::with_capacity(n as usize);
        for k in 0..n {
            let q = if k <= 2 {
                provenance.push(Provenance::ClosedForm);
                SchrodingerOperator::new(build_l(ctx, k)?, h_closed_form(ctx, k)?, 2 * k)?
            } else {
                provenance.push(Provenance::Recurrence);
                let k_ = k as usize;
                q_recurrence(ctx, k, &qs[1], &qs[k_ - 1], &qs[0], &qs[k_ - 2])?
            };
            qs.push(q);
        }
        let operators = qs.iter().map(|q| q.h_part.clone()).collect();
        Ok((HFamily { ctx: *ctx, operators, provenance }, qs))
    }

    pub fn get(&self, k: i64) -> Result<&WeylOperator> {
        self.ctx.check_k(k)?;
        Ok(&self.operators[k as usize])
    }
}

/// `Q_{2k} = L_{2k} − H_{2k}` with `H_{2k}` from the generating function.
pub fn build_q(ctx: &GenusContext, k: i64) -> Result<SchrodingerOperator> {
    let gen = h_generating(ctx)?;
    SchrodingerOperator::new(build_l(ctx, k)?, h_from_generating(ctx, &gen, k)?, 2 * k)
}

/// All `Q_{2k}` sharing one evaluation of the generating function.
pub fn build_all_q(ctx: &GenusContext) -> Result<Vec<SchrodingerOperator>> {
    let fam = HFamily::from_generating(ctx)?;
    (0..ctx.rank() as i64)
        .map(|k| SchrodingerOperator::new(build_l(ctx, k)?, fam.operators[k as usize].clone(), 2 * k))
        .collect()
}

/// Expected weight of the λ-coefficient of a term of `H_{2k}`.
pub fn expected_coefficient_weight(k: i64, m: &ZMonomial) -> i64 {
    2 * k - m.weight()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: i64) -> GenusContext {
        GenusContext::new(g).unwrap()
    }

    fn z(g: u32, a: i64) -> WeylOperator {
        WeylOperator::z(g, a).unwrap()
    }
    fn d(g: u32, a: i64) -> WeylOperator {
        WeylOperator::d(g, a).unwrap()
    }

    #[test]
    fn v_entries_genus_one() {
        let c = ctx(1);
        assert_eq!(v_entry(&c, 1, 1).unwrap(), c.lambda(4).scale_int(4));
        assert_eq!(v_entry(&c, 1, 2).unwrap(), c.lambda(6).scale_int(6));
        assert_eq!(v_entry(&c, 2, 1).unwrap(), c.lambda(6).scale_int(6));
        assert_eq!(v_entry(&c, 2, 2).unwrap(), (&c.lambda(4) * &c.lambda(4)).scale(&rat(-4, 3)));
        assert!(v_entry(&c, 0, 1).is_err());
        assert!(v_entry(&c, 1, 3).is_err());
    }

    #[test]
    fn v_is_symmetric_and_graded() {
        for g in 1..=5 {
            let c = ctx(g);
            for k in 1..=2 * g {
                for m in 1..=2 * g {
                    let v = v_entry(&c, k, m).unwrap();
                    assert_eq!(v, v_entry(&c, m, k).unwrap());
                    assert!(v.is_homogeneous_of(2 * (k + m)));
                }
            }
        }
    }

    #[test]
    fn generators_genus_one() {
        let c = ctx(1);
        let l0 = build_l(&c, 0).unwrap();
        assert_eq!(l0.render(), "4 l4 dl4 + 6 l6 dl6");
        let l2 = build_l(&c, 1).unwrap();
        assert_eq!(l2.render(), "6 l6 dl4 - 4/3 l4^2 dl6");
        assert!(build_l(&c, 2).is_err());
    }

    #[test]
    fn euler_field_any_genus() {
        for g in 1..=6 {
            let c = ctx(g);
            let l0 = build_l(&c, 0).unwrap();
            for idx in c.lambda_indices() {
                assert_eq!(l0.apply(&c.lambda(idx)).unwrap(), c.lambda(idx).scale_int(idx));
            }
        }
    }

    #[test]
    fn r_polys() {
        for g in 1..=5 {
            let c = ctx(g);
            assert_eq!(r_poly(&c, 1).unwrap(), XPoly::x_pow(c.genus(), g as usize));
            for i in 1..=g {
                assert_eq!(r_poly(&c, i).unwrap().degree(), Some((g + i - 1) as usize));
            }
        }
        let c = ctx(2);
        let want = XPoly::from_coeffs(2, vec![LambdaPoly::zero(2), c.lambda(4), LambdaPoly::zero(2), LambdaPoly::constant(2, int(3))]).unwrap();
        assert_eq!(r_poly(&c, 2).unwrap(), want);
        assert!(r_poly(&c, 3).is_err());
    }

    #[test]
    fn h_and_t_small_genus() {
        let c = ctx(1);
        let (h, t) = build_h_t(&c).unwrap();
        let want_h = XPoly::from_coeffs(1, vec![d(1, 1), z(1, 1)]).unwrap();
        assert_eq!(h, want_h);
        assert!(t.is_zero());

        let c = ctx(2);
        let (_, t) = build_h_t(&c).unwrap();
        // the z3^2 part: ½·1·z3²·q(R_2, x²) = ½ z3²·3x
        let z3sq = ZMonomial::new(vec![0, 2], vec![0, 0]);
        assert_eq!(t.coeff(1).coefficient(&z3sq), LambdaPoly::constant(2, rat(3, 2)));
    }

    #[test]
    fn generating_function_genus_one() {
        let c = ctx(1);
        let hx = h_generating(&c).unwrap();
        assert_eq!(hx.degree(), Some(1));
        assert_eq!(hx.coeff(1).render(), "z1 d1 - 1");
        assert_eq!(hx.coeff(0).render(), "1/2 d1^2 - 1/6 l4 z1^2");
    }

    #[test]
    fn generating_function_deltas() {
        let c = ctx(2);
        let hx = h_generating(&c).unwrap();
        assert_eq!(QuadraticParts::of(&hx.coeff(1)).delta, c.lambda(4).scale_int(-1));
        let c = ctx(3);
        let hx = h_generating(&c).unwrap();
        assert_eq!(QuadraticParts::of(&hx.coeff(2)).delta, c.lambda(6).scale_int(-2));
    }

    #[test]
    fn closed_forms() {
        let c = ctx(2);
        assert_eq!(h_closed_form(&c, 0).unwrap().render(), "z1 d1 + 3 z3 d3 - 3");
        let c4 = ctx(4);
        let h0 = h_closed_form(&c4, 0).unwrap();
        assert_eq!(QuadraticParts::of(&h0).delta, LambdaPoly::constant(4, int(-10)));
        assert_eq!(h_closed_form(&ctx(1), 1).unwrap().render(), "1/2 d1^2 - 1/6 l4 z1^2");
        assert!(h_closed_form(&c, 3).is_err());
        assert!(h_closed_form(&ctx(1), 2).is_err());
    }

    #[test]
    fn alpha_delta_values() {
        assert_eq!(alpha_delta(&ctx(2), 2).unwrap().delta, ctx(2).lambda(4).scale_int(-1));
        assert_eq!(alpha_delta(&ctx(3), 3).unwrap().delta, ctx(3).lambda(6).scale_int(-2));
        for g in 1..=5 {
            assert!(alpha_delta(&ctx(g), 1).unwrap().delta.is_zero());
        }
        assert_eq!(alpha_delta(&ctx(3), 3).unwrap().alpha_pairs, vec![(1, 5), (3, 3), (5, 1)]);
    }

    #[test]
    fn recurrence_genus_two_h6() {
        let c = ctx(2);
        let (fam, _) = HFamily::from_recurrence(&c).unwrap();
        assert_eq!(
            fam.get(3).unwrap().render(),
            "1/2 d3^2 - 3/5 l8 z3 d1 - 1/10 l8 z1^2 + 2 l10 z1 z3 - 3/10 l4 l8 z3^2 - 1/2 l6"
        );
        assert_eq!(fam.provenance[3], Provenance::Recurrence);
    }

    #[test]
    fn recurrence_needs_k_at_least_three() {
        let c = ctx(3);
        let q = build_all_q(&c).unwrap();
        assert_eq!(
            q_recurrence(&c, 2, &q[1], &q[1], &q[0], &q[0]).unwrap_err(),
            AlgebraError::RecurrenceNotApplicable(2)
        );
    }

    #[test]
    fn recurrence_matches_generating_function() {
        for g in 1..=4 {
            let c = ctx(g);
            let gen = HFamily::from_generating(&c).unwrap();
            let (rec, qs) = HFamily::from_recurrence(&c).unwrap();
            for k in 0..c.rank() {
                assert_eq!(gen.operators[k], rec.operators[k], "g={g} k={k}");
                assert_eq!(qs[k].l_part, build_l(&c, k as i64).unwrap());
            }
        }
    }

    #[test]
    fn q_weights() {
        let c = ctx(3);
        for q in build_all_q(&c).unwrap() {
            assert!(q.is_homogeneous());
        }
        let q0 = build_q(&ctx(1), 0).unwrap();
        assert_eq!(q0.h_part.render(), "z1 d1 - 1");
    }
}
