//! Reading the plain-text notation produced by the `render` methods.
//!
//! ```text
//! expr    := [sign] term (sign term)*
//! term    := factor (['*'] factor)*        juxtaposition multiplies
//! factor  := primary ['^' INT]
//! primary := INT ['/' INT] | atom | '(' expr ')'
//! atom    := l<N> | z<N> | d<N> | dl<N> | L<N> | psi{i,j,...}
//! ```
//!
//! `lN` is λ_N, `zN`/`dN` are `z_N` and `∂/∂z_N`, `dlN` is `∂/∂λ_N`, `LN` is
//! the generator `L_N`, `psi{..}` is `ψ_I`. Products are taken in written
//! order, so `z3 d1` is the composition `z_3 ∘ ∂_1`. Whitespace is free.
//!
//! For multi-line input, [`join_lines`] applies the typographic convention of
//! repeating a sign across a line break: when a line ends in `+` or `-` and
//! the next starts with one, the sign on the new line is the one that counts.

use std::collections::BTreeMap;

use crate::derivations::FirstOrderForm;
use crate::error::{AlgebraError, ParseError};
use crate::lambda::{slot_of, LambdaPoly};
use crate::psi::PsiPoly;
use crate::rational::{int, Rational};
use crate::vector_field::LambdaVectorField;
use crate::weyl::{z_slot, WeylOperator};

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Lambda(u32),
    Z(u32),
    D(u32),
    DLambda(u32),
    L(u32),
    Psi(Vec<u32>),
}

impl Atom {
    fn text(&self) -> String {
        match self {
            Atom::Lambda(n) => format!("l{n}"),
            Atom::Z(n) => format!("z{n}"),
            Atom::D(n) => format!("d{n}"),
            Atom::DLambda(n) => format!("dl{n}"),
            Atom::L(n) => format!("L{n}"),
            Atom::Psi(v) => format!("psi{{{}}}", v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Atom(Atom),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> PResult<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let syntax = |pos: usize, msg: &str| ParseError::Syntax { pos, msg: msg.into() };
    let digits = |i: &mut usize| -> Option<u64> {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        s[start..*i].parse().ok()
    };
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((i, Tok::Plus)),
            b'-' => out.push((i, Tok::Minus)),
            b'*' => out.push((i, Tok::Star)),
            b'/' => out.push((i, Tok::Slash)),
            b'^' => out.push((i, Tok::Caret)),
            b'(' => out.push((i, Tok::LParen)),
            b')' => out.push((i, Tok::RParen)),
            b'0'..=b'9' => {
                let n = digits(&mut i).ok_or_else(|| syntax(start, "integer too large"))?;
                out.push((start, Tok::Int(n)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < b.len() && b[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let name = &s[start..i];
                if name == "psi" {
                    if i >= b.len() || b[i] != b'{' {
                        return Err(syntax(i, "expected `{` after psi"));
                    }
                    let close = s[i..].find('}').ok_or_else(|| syntax(i, "unclosed psi index list"))? + i;
                    let mut idx = Vec::new();
                    for part in s[i + 1..close].split(',') {
                        let n: u32 = part.trim().parse().map_err(|_| syntax(i + 1, "bad psi index"))?;
                        idx.push(n);
                    }
                    i = close + 1;
                    out.push((start, Tok::Atom(Atom::Psi(idx))));
                    continue;
                }
                let n = digits(&mut i).ok_or_else(|| syntax(i, "expected an index after a variable name"))?;
                let n = u32::try_from(n).map_err(|_| syntax(start, "index too large"))?;
                let atom = match name {
                    "l" => Atom::Lambda(n),
                    "z" => Atom::Z(n),
                    "d" => Atom::D(n),
                    "dl" => Atom::DLambda(n),
                    "L" => Atom::L(n),
                    _ => return Err(syntax(start, &format!("unknown variable `{name}`"))),
                };
                out.push((start, Tok::Atom(atom)));
                continue;
            }
            _ => return Err(syntax(i, &format!("unexpected character `{}`", c as char))),
        }
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Num(Rational),
    Atom(Atom),
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.here(), msg: msg.into() }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut terms = Vec::new();
        let mut neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            terms.push((neg, self.term()?));
            neg = match self.peek() {
                Some(Tok::Minus) => true,
                Some(Tok::Plus) => false,
                _ => break,
            };
            self.pos += 1;
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(Tok::Int(_)) | Some(Tok::Atom(_)) | Some(Tok::LParen) => factors.push(self.factor()?),
                _ => break,
            }
        }
        Ok(Expr::Product(factors))
    }

    fn factor(&mut self) -> PResult<Expr> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Int(n)) => {
                    let n = u32::try_from(*n).map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), n));
                }
                _ => return Err(self.err("expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> PResult<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek() {
                        Some(Tok::Int(0)) => Err(self.err("zero denominator")),
                        Some(Tok::Int(d)) => {
                            let d = *d;
                            self.pos += 1;
                            Ok(Expr::Num(Rational::new(n.into(), d.into())))
                        }
                        _ => Err(self.err("expected a denominator")),
                    }
                } else {
                    Ok(Expr::Num(int(n as i64)))
                }
            }
            Some(Tok::Atom(a)) => {
                self.pos += 1;
                Ok(Expr::Atom(a))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(_) => Err(self.err("expected a number, a variable or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn parse_expr(s: &str) -> PResult<Expr> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, end: s.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// A type that text can be read into.
pub trait ParseTarget: Sized + Clone {
    fn from_rational(genus: u32, r: Rational) -> Self;
    fn from_atom(genus: u32, atom: &Atom) -> PResult<Self>;
    fn add(&self, other: &Self) -> PResult<Self>;
    fn negate(&self) -> Self;
    /// Product in written order.
    fn mul(&self, other: &Self) -> PResult<Self>;
}

fn eval<T: ParseTarget>(genus: u32, e: &Expr) -> PResult<T> {
    match e {
        Expr::Num(r) => Ok(T::from_rational(genus, r.clone())),
        Expr::Atom(a) => T::from_atom(genus, a),
        Expr::Sum(terms) => {
            let mut acc = T::from_rational(genus, int(0));
            for (neg, t) in terms {
                let v = eval::<T>(genus, t)?;
                acc = acc.add(&if *neg { v.negate() } else { v })?;
            }
            Ok(acc)
        }
        Expr::Product(fs) => {
            let mut acc = eval::<T>(genus, &fs[0])?;
            for f in &fs[1..] {
                acc = acc.mul(&eval::<T>(genus, f)?)?;
            }
            Ok(acc)
        }
        Expr::Pow(b, n) => {
            let base = eval::<T>(genus, b)?;
            let mut acc = T::from_rational(genus, int(1));
            for _ in 0..*n {
                acc = acc.mul(&base)?;
            }
            Ok(acc)
        }
    }
}

/// Parses `s` as an element of `T` over the genus-`genus` variables.
pub fn parse<T: ParseTarget>(genus: u32, s: &str) -> PResult<T> {
    if genus == 0 {
        return Err(AlgebraError::InvalidGenus(0).into());
    }
    eval(genus, &parse_expr(s)?)
}

/// Joins the lines of a multi-line expression, resolving a sign repeated
/// across a line break in favour of the sign that opens the new line.
pub fn join_lines<'a>(lines: impl IntoIterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let trimmed = out.trim_end();
        if (line.starts_with('+') || line.starts_with('-')) && (trimmed.ends_with('+') || trimmed.ends_with('-')) {
            let keep = trimmed.len() - 1;
            out.truncate(keep);
            let kept = out.trim_end().len();
            out.truncate(kept);
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(line);
    }
    out
}

fn bad_atom(a: &Atom, msg: &str) -> ParseError {
    ParseError::Atom { atom: a.text(), msg: msg.into() }
}

fn lambda_atom(genus: u32, a: &Atom, n: u32) -> PResult<LambdaPoly> {
    LambdaPoly::lambda_strict(genus, n as i64).map_err(|e| bad_atom(a, &e.to_string()))
}

fn odd_index(genus: u32, a: &Atom, n: u32) -> PResult<()> {
    z_slot(genus, n as i64)
        .map(|_| ())
        .ok_or_else(|| bad_atom(a, &format!("index must be odd in 1..={}", 2 * genus - 1)))
}

impl ParseTarget for LambdaPoly {
    fn from_rational(genus: u32, r: Rational) -> Self {
        LambdaPoly::constant(genus, r)
    }
    fn from_atom(genus: u32, atom: &Atom) -> PResult<Self> {
        match atom {
            Atom::Lambda(n) => lambda_atom(genus, atom, *n),
            _ => Err(bad_atom(atom, "only λ variables may appear in a λ-polynomial")),
        }
    }
    fn add(&self, other: &Self) -> PResult<Self> {
        Ok(self.checked_add(other)?)
    }
    fn negate(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> PResult<Self> {
        Ok(self.checked_mul(other)?)
    }
}

impl ParseTarget for WeylOperator {
    fn from_rational(genus: u32, r: Rational) -> Self {
        WeylOperator::constant(genus, r)
    }
    fn from_atom(genus: u32, atom: &Atom) -> PResult<Self> {
        match atom {
            Atom::Lambda(n) => Ok(WeylOperator::scalar(lambda_atom(genus, atom, *n)?)),
            Atom::Z(n) => {
                odd_index(genus, atom, *n)?;
                Ok(WeylOperator::z(genus, *n as i64)?)
            }
            Atom::D(n) => {
                odd_index(genus, atom, *n)?;
                Ok(WeylOperator::d(genus, *n as i64)?)
            }
            _ => Err(bad_atom(atom, "not part of a z-differential operator")),
        }
    }
    fn add(&self, other: &Self) -> PResult<Self> {
        Ok(self.checked_add(other)?)
    }
    fn negate(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> PResult<Self> {
        Ok(self.compose(other)?)
    }
}

impl ParseTarget for PsiPoly {
    fn from_rational(genus: u32, r: Rational) -> Self {
        PsiPoly::constant(genus, r)
    }
    fn from_atom(genus: u32, atom: &Atom) -> PResult<Self> {
        match atom {
            Atom::Lambda(n) => Ok(PsiPoly::scalar(lambda_atom(genus, atom, *n)?)),
            Atom::Z(n) => {
                odd_index(genus, atom, *n)?;
                Ok(PsiPoly::z(genus, *n as i64)?)
            }
            Atom::Psi(v) => {
                for &i in v {
                    odd_index(genus, atom, i)?;
                }
                Ok(PsiPoly::psi(genus, v.clone())?)
            }
            _ => Err(bad_atom(atom, "not part of a ψ-polynomial")),
        }
    }
    fn add(&self, other: &Self) -> PResult<Self> {
        Ok(self.checked_add(other)?)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn mul(&self, other: &Self) -> PResult<Self> {
        Ok(self.checked_mul(other)?)
    }
}

/// Intermediate form for vector fields: `scalar + field`.
#[derive(Clone, Debug)]
struct FieldExpr {
    scalar: LambdaPoly,
    field: LambdaVectorField,
}

impl ParseTarget for FieldExpr {
    fn from_rational(genus: u32, r: Rational) -> Self {
        FieldExpr { scalar: LambdaPoly::constant(genus, r), field: LambdaVectorField::zero(genus) }
    }
    fn from_atom(genus: u32, atom: &Atom) -> PResult<Self> {
        match atom {
            Atom::Lambda(n) => {
                Ok(FieldExpr { scalar: lambda_atom(genus, atom, *n)?, field: LambdaVectorField::zero(genus) })
            }
            Atom::DLambda(n) => {
                if slot_of(genus, *n as i64).is_none() {
                    return Err(bad_atom(atom, &format!("not a parameter of the genus-{genus} model")));
                }
                Ok(FieldExpr {
                    scalar: LambdaPoly::zero(genus),
                    field: LambdaVectorField::basis(LambdaPoly::one(genus), *n as i64)?,
                })
            }
            _ => Err(bad_atom(atom, "not part of a λ-vector field")),
        }
    }
    fn add(&self, other: &Self) -> PResult<Self> {
        Ok(FieldExpr {
            scalar: self.scalar.checked_add(&other.scalar)?,
            field: self.field.checked_add(&other.field)?,
        })
    }
    fn negate(&self) -> Self {
        FieldExpr { scalar: -&self.scalar, field: self.field.scale(&int(-1)) }
    }
    fn mul(&self, other: &Self) -> PResult<Self> {
        if !self.field.is_zero() {
            return Err(ParseError::Syntax { pos: 0, msg: "a vector field must be the rightmost factor".into() });
        }
        Ok(FieldExpr {
            scalar: self.scalar.checked_mul(&other.scalar)?,
            field: other.field.mul_lambda(&self.scalar)?,
        })
    }
}

pub fn parse_vector_field(genus: u32, s: &str) -> PResult<LambdaVectorField> {
    let e: FieldExpr = parse(genus, s)?;
    if !e.scalar.is_zero() {
        return Err(ParseError::Syntax { pos: 0, msg: "vector field has a function part".into() });
    }
    Ok(e.field)
}

impl ParseTarget for FirstOrderForm {
    fn from_rational(genus: u32, r: Rational) -> Self {
        let mut f = FirstOrderForm::zero(genus);
        f.scalar = PsiPoly::constant(genus, r);
        f
    }
    fn from_atom(genus: u32, atom: &Atom) -> PResult<Self> {
        let mut f = FirstOrderForm::zero(genus);
        match atom {
            Atom::L(n) => {
                if n % 2 != 0 || *n > 8 * genus - 4 {
                    return Err(bad_atom(atom, &format!("generators are L0, L2, …, L{}", 8 * genus - 4)));
                }
                f.l_labels = BTreeMap::from([(*n, int(1))]);
            }
            Atom::D(n) => {
                odd_index(genus, atom, *n)?;
                f.coeffs.insert(*n, PsiPoly::constant(genus, int(1)));
            }
            _ => f.scalar = PsiPoly::from_atom(genus, atom)?,
        }
        Ok(f)
    }
    fn add(&self, other: &Self) -> PResult<Self> {
        Ok(self.checked_add(other)?)
    }
    fn negate(&self) -> Self {
        self.left_mul(&PsiPoly::constant(self.genus, int(-1))).expect("constant factor")
    }
    fn mul(&self, other: &Self) -> PResult<Self> {
        if !self.is_scalar() {
            return Err(ParseError::Syntax { pos: 0, msg: "a derivation must be the rightmost factor".into() });
        }
        Ok(other.left_mul(&self.scalar)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_l, h_generating, GenusContext};
    use crate::rational::rat;

    #[test]
    fn lambda_poly_round_trip() {
        let p: LambdaPoly = parse(2, "3/2 l8 - 2/5 l4^2").unwrap();
        assert_eq!(p, LambdaPoly::lambda(2, 8).scale(&rat(3, 2)) - LambdaPoly::lambda(2, 4).pow(2).scale(&rat(2, 5)));
        assert_eq!(parse::<LambdaPoly>(2, &p.render()).unwrap(), p);
    }

    #[test]
    fn composition_in_written_order() {
        let a: WeylOperator = parse(1, "d1 z1").unwrap();
        let b: WeylOperator = parse(1, "z1 d1 + 1").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn genus_one_h0() {
        let h: WeylOperator = parse(1, "z1 d1 - 1").unwrap();
        let gen = h_generating(&GenusContext::new(1).unwrap()).unwrap();
        assert_eq!(gen.coeff(1), h);
    }

    #[test]
    fn weyl_round_trip_through_render() {
        let c = GenusContext::new(3).unwrap();
        let gen = h_generating(&c).unwrap();
        for op in gen.coeffs() {
            assert_eq!(parse::<WeylOperator>(3, &op.render()).unwrap(), *op);
        }
    }

    #[test]
    fn vector_field_round_trip() {
        let c = GenusContext::new(2).unwrap();
        for k in 0..4 {
            let l = build_l(&c, k).unwrap();
            assert_eq!(parse_vector_field(2, &l.render()).unwrap(), l);
        }
    }

    #[test]
    fn psi_atoms() {
        let p: PsiPoly = parse(4, "1/2 psi{1,1,1} + psi{3} - 7/9 l4 z1").unwrap();
        assert_eq!(p.render(), "1/2 psi{1,1,1} + psi{3} - 7/9 l4 z1");
    }

    #[test]
    fn derivation_form() {
        let f: FirstOrderForm = parse(4, "L2 - psi{1} d1 + 4/3 l4 z3 d1 - (z1 - 8/9 l4 z5) d3").unwrap();
        assert_eq!(f.l_labels, BTreeMap::from([(2, int(1))]));
        assert_eq!(f.coeffs.len(), 2);
        assert_eq!(parse::<FirstOrderForm>(4, &f.render()).unwrap(), f);
    }

    #[test]
    fn repeated_sign_at_line_break() {
        assert_eq!(join_lines(["a + b -", "- c"]), "a + b - c");
        assert_eq!(join_lines(["a -", "+ c"]), "a + c");
        assert_eq!(join_lines(["a +", "+ c"]), "a + c");
        assert_eq!(join_lines(["a", "+ c"]), "a + c");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse::<LambdaPoly>(1, "l8"), Err(ParseError::Atom { .. })));
        assert!(matches!(parse::<WeylOperator>(1, "z2"), Err(ParseError::Atom { .. })));
        assert!(matches!(parse::<LambdaPoly>(1, "1/0"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse::<LambdaPoly>(1, "(l4"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse::<LambdaPoly>(1, "l4 +"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse::<LambdaPoly>(1, "x3"), Err(ParseError::Syntax { .. })));
        assert!(parse::<LambdaPoly>(0, "1").is_err());
    }
}
