//! JSON documents for the algebraic objects.
//!
//! Every document carries its genus. Polynomials are flat term lists; each
//! term gives its exponents by variable name and one rational coefficient:
//!
//! ```json
//! {"genus": 2, "terms": [{"lambda": {"l4": 1}, "z": {"z3": 1}, "d": {"d1": 1}, "coef": "-4/5"}]}
//! ```
//!
//! ψ factors appear as `"psi": [{"indices": [1, 1, 3], "exp": 1}]`. Term
//! order follows the internal canonical order, so output is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::derivations::FirstOrderForm;
use crate::error::ParseError;
use crate::lambda::{n_vars, slot_of, slot_weight, LambdaMonomial, LambdaPoly};
use crate::psi::{PsiGenerator, PsiMonomial, PsiPoly};
use crate::rational::{self, Rational};
use crate::schrodinger::SchrodingerOperator;
use crate::vector_field::LambdaVectorField;
use crate::weyl::{slot_index, z_slot, WeylOperator, ZMonomial};

type PResult<T> = std::result::Result<T, ParseError>;

type Exps = BTreeMap<String, u16>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
struct PsiFactorDto {
    indices: Vec<u32>,
    exp: u16,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
struct TermDto {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    lambda: Exps,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    psi: Vec<PsiFactorDto>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    z: Exps,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    d: Exps,
    coef: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct PolyDto {
    genus: u32,
    terms: Vec<TermDto>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct FieldTermDto {
    /// Index `N` of `∂/∂λ_N`.
    component: u32,
    #[serde(flatten)]
    term: TermDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct FieldDto {
    genus: u32,
    terms: Vec<FieldTermDto>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct SchrodingerDto {
    genus: u32,
    weight: i64,
    l: FieldDto,
    h: PolyDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct FormDto {
    genus: u32,
    /// `"L<2k>"` ↦ rational coefficient.
    #[serde(default)]
    l: BTreeMap<String, String>,
    /// `"d<b>"` ↦ coefficient of `∂_b`.
    #[serde(default)]
    first_order: BTreeMap<String, Vec<TermDto>>,
    #[serde(default)]
    scalar: Vec<TermDto>,
}

/// Conversion to and from JSON documents.
pub trait JsonForm: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> PResult<Self>;

    fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serialisable")
    }

    fn from_json_str(s: &str) -> PResult<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| ParseError::Json(e.to_string()))?;
        Self::from_json(&v)
    }
}

fn decode<T: for<'de> Deserialize<'de>>(v: &Value) -> PResult<T> {
    T::deserialize(v).map_err(|e| ParseError::Json(e.to_string()))
}

fn json_err(msg: impl Into<String>) -> ParseError {
    ParseError::Json(msg.into())
}

fn check_genus(genus: u32) -> PResult<()> {
    if genus == 0 {
        return Err(json_err("genus must be at least 1"));
    }
    Ok(())
}

fn lambda_exps(m: &LambdaMonomial) -> Exps {
    m.exps().iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (format!("l{}", slot_weight(i)), *e)).collect()
}

fn odd_exps(prefix: &str, exps: &[u16]) -> Exps {
    exps.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (format!("{prefix}{}", slot_index(i)), *e)).collect()
}

fn index_of(key: &str, prefix: &str) -> PResult<i64> {
    key.strip_prefix(prefix)
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| json_err(format!("bad variable name `{key}`, expected `{prefix}<N>`")))
}

fn lambda_monomial(genus: u32, exps: &Exps) -> PResult<LambdaMonomial> {
    let mut v = vec![0u16; n_vars(genus)];
    for (k, e) in exps {
        let i = index_of(k, "l")?;
        let slot = slot_of(genus, i).ok_or_else(|| json_err(format!("`{k}` is not a parameter of genus {genus}")))?;
        v[slot] += e;
    }
    Ok(LambdaMonomial::new(v))
}

fn odd_vector(genus: u32, prefix: &str, exps: &Exps) -> PResult<Vec<u16>> {
    let mut v = vec![0u16; genus as usize];
    for (k, e) in exps {
        let i = index_of(k, prefix)?;
        let slot = z_slot(genus, i).ok_or_else(|| json_err(format!("`{k}` is out of range for genus {genus}")))?;
        v[slot] += e;
    }
    Ok(v)
}

fn coef(s: &str) -> PResult<Rational> {
    rational::parse(s).ok_or_else(|| json_err(format!("bad rational `{s}`")))
}

fn lambda_terms(p: &LambdaPoly) -> Vec<TermDto> {
    p.terms()
        .map(|(m, c)| TermDto { lambda: lambda_exps(m), coef: rational::render(c), ..Default::default() })
        .collect()
}

fn lambda_from_terms(genus: u32, terms: &[TermDto]) -> PResult<LambdaPoly> {
    let mut p = LambdaPoly::zero(genus);
    for t in terms {
        if !t.psi.is_empty() || !t.z.is_empty() || !t.d.is_empty() {
            return Err(json_err("λ-polynomial term has z, d or ψ factors"));
        }
        p.add_term(lambda_monomial(genus, &t.lambda)?, coef(&t.coef)?);
    }
    Ok(p)
}

fn psi_terms(p: &PsiPoly) -> Vec<TermDto> {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        let psi: Vec<PsiFactorDto> =
            m.psi().iter().map(|(g, e)| PsiFactorDto { indices: g.indices().to_vec(), exp: *e }).collect();
        for t in lambda_terms(c) {
            out.push(TermDto { psi: psi.clone(), z: odd_exps("z", m.z_exps()), ..t });
        }
    }
    out
}

fn psi_from_terms(genus: u32, terms: &[TermDto]) -> PResult<PsiPoly> {
    let mut p = PsiPoly::zero(genus);
    for t in terms {
        if !t.d.is_empty() {
            return Err(json_err("ψ-polynomial term has d factors"));
        }
        let mut psi = BTreeMap::new();
        for f in &t.psi {
            *psi.entry(PsiGenerator::new(genus, f.indices.clone())?).or_insert(0) += f.exp;
        }
        let m = PsiMonomial::new(psi, odd_vector(genus, "z", &t.z)?);
        let c = LambdaPoly::from_terms(genus, [(lambda_monomial(genus, &t.lambda)?, coef(&t.coef)?)]);
        p.add_term(m, c);
    }
    Ok(p)
}

fn weyl_terms(op: &WeylOperator) -> Vec<TermDto> {
    let mut out = Vec::new();
    for (m, c) in op.terms() {
        for t in lambda_terms(c) {
            out.push(TermDto { z: odd_exps("z", m.z_exps()), d: odd_exps("d", m.d_exps()), ..t });
        }
    }
    out
}

fn weyl_from_terms(genus: u32, terms: &[TermDto]) -> PResult<WeylOperator> {
    let mut op = WeylOperator::zero(genus);
    for t in terms {
        if !t.psi.is_empty() {
            return Err(json_err("operator term has ψ factors"));
        }
        let m = ZMonomial::new(odd_vector(genus, "z", &t.z)?, odd_vector(genus, "d", &t.d)?);
        let c = LambdaPoly::from_terms(genus, [(lambda_monomial(genus, &t.lambda)?, coef(&t.coef)?)]);
        op.add_term(m, c);
    }
    Ok(op)
}

fn field_dto(f: &LambdaVectorField) -> FieldDto {
    let mut terms = Vec::new();
    for (slot, c) in f.slots().iter().enumerate() {
        for t in lambda_terms(c) {
            terms.push(FieldTermDto { component: slot_weight(slot), term: t });
        }
    }
    FieldDto { genus: f.genus(), terms }
}

fn field_from_dto(d: &FieldDto) -> PResult<LambdaVectorField> {
    check_genus(d.genus)?;
    let mut f = LambdaVectorField::zero(d.genus);
    for t in &d.terms {
        let c = lambda_from_terms(d.genus, std::slice::from_ref(&t.term))?;
        f = f.checked_add(&LambdaVectorField::basis(c, t.component as i64)?)?;
    }
    Ok(f)
}

impl JsonForm for LambdaPoly {
    fn to_json(&self) -> Value {
        serde_json::to_value(PolyDto { genus: self.genus(), terms: lambda_terms(self) }).expect("serialisable")
    }
    fn from_json(v: &Value) -> PResult<Self> {
        let d: PolyDto = decode(v)?;
        check_genus(d.genus)?;
        lambda_from_terms(d.genus, &d.terms)
    }
}

impl JsonForm for WeylOperator {
    fn to_json(&self) -> Value {
        serde_json::to_value(PolyDto { genus: self.genus(), terms: weyl_terms(self) }).expect("serialisable")
    }
    fn from_json(v: &Value) -> PResult<Self> {
        let d: PolyDto = decode(v)?;
        check_genus(d.genus)?;
        weyl_from_terms(d.genus, &d.terms)
    }
}

impl JsonForm for PsiPoly {
    fn to_json(&self) -> Value {
        serde_json::to_value(PolyDto { genus: self.genus(), terms: psi_terms(self) }).expect("serialisable")
    }
    fn from_json(v: &Value) -> PResult<Self> {
        let d: PolyDto = decode(v)?;
        check_genus(d.genus)?;
        psi_from_terms(d.genus, &d.terms)
    }
}

impl JsonForm for LambdaVectorField {
    fn to_json(&self) -> Value {
        serde_json::to_value(field_dto(self)).expect("serialisable")
    }
    fn from_json(v: &Value) -> PResult<Self> {
        field_from_dto(&decode(v)?)
    }
}

impl JsonForm for SchrodingerOperator {
    fn to_json(&self) -> Value {
        let d = SchrodingerDto {
            genus: self.genus(),
            weight: self.weight,
            l: field_dto(&self.l_part),
            h: PolyDto { genus: self.genus(), terms: weyl_terms(&self.h_part) },
        };
        serde_json::to_value(d).expect("serialisable")
    }
    fn from_json(v: &Value) -> PResult<Self> {
        let d: SchrodingerDto = decode(v)?;
        check_genus(d.genus)?;
        if d.l.genus != d.genus || d.h.genus != d.genus {
            return Err(json_err("parts disagree on the genus"));
        }
        let l = field_from_dto(&d.l)?;
        let h = weyl_from_terms(d.genus, &d.h.terms)?;
        Ok(SchrodingerOperator::new(l, h, d.weight)?)
    }
}

impl JsonForm for FirstOrderForm {
    fn to_json(&self) -> Value {
        let d = FormDto {
            genus: self.genus,
            l: self.l_labels.iter().map(|(k, r)| (format!("L{k}"), rational::render(r))).collect(),
            first_order: self.coeffs.iter().map(|(b, c)| (format!("d{b}"), psi_terms(c))).collect(),
            scalar: psi_terms(&self.scalar),
        };
        serde_json::to_value(d).expect("serialisable")
    }
    fn from_json(v: &Value) -> PResult<Self> {
        let d: FormDto = decode(v)?;
        check_genus(d.genus)?;
        let mut f = FirstOrderForm::zero(d.genus);
        for (k, r) in &d.l {
            let n = index_of(k, "L")?;
            if n < 0 || n % 2 != 0 || n > 8 * d.genus as i64 - 4 {
                return Err(json_err(format!("`{k}` is not a generator of genus {}", d.genus)));
            }
            let r = coef(r)?;
            if r != rational::int(0) {
                f.l_labels.insert(n as u32, r);
            }
        }
        for (k, terms) in &d.first_order {
            let b = index_of(k, "d")?;
            z_slot(d.genus, b).ok_or_else(|| json_err(format!("`{k}` is out of range for genus {}", d.genus)))?;
            let c = psi_from_terms(d.genus, terms)?;
            if !c.is_zero() {
                f.coeffs.insert(b as u32, c);
            }
        }
        f.scalar = psi_from_terms(d.genus, &d.scalar)?;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_all_q, GenusContext};
    use crate::derivations::DerivationTable;

    #[test]
    fn schrodinger_round_trip() {
        let c = GenusContext::new(3).unwrap();
        for q in build_all_q(&c).unwrap() {
            let back = SchrodingerOperator::from_json_str(&q.to_json_string()).unwrap();
            assert_eq!(back.l_part, q.l_part);
            assert_eq!(back.h_part, q.h_part);
            assert_eq!(back.weight, q.weight);
        }
    }

    #[test]
    fn derivation_round_trip() {
        let t = DerivationTable::compute(&GenusContext::new(3).unwrap()).unwrap();
        for l in &t.operators {
            let f = l.form();
            assert_eq!(FirstOrderForm::from_json(&f.to_json()).unwrap(), f);
        }
        for w in t.w.values() {
            assert_eq!(PsiPoly::from_json(&w.to_json()).unwrap(), *w);
        }
    }

    #[test]
    fn document_shape() {
        let p = LambdaPoly::lambda(2, 4).scale(&rational::rat(-4, 5));
        assert_eq!(p.to_json_string(), r#"{"genus":2,"terms":[{"coef":"-4/5","lambda":{"l4":1}}]}"#);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(LambdaPoly::from_json_str(r#"{"genus":1,"terms":[{"lambda":{"l8":1},"coef":"1"}]}"#).is_err());
        assert!(LambdaPoly::from_json_str(r#"{"genus":0,"terms":[]}"#).is_err());
        assert!(WeylOperator::from_json_str(r#"{"genus":1,"terms":[{"z":{"z2":1},"coef":"1"}]}"#).is_err());
        assert!(WeylOperator::from_json_str(r#"{"genus":1,"terms":[{"coef":"1/0"}]}"#).is_err());
        assert!(WeylOperator::from_json_str("not json").is_err());
    }
}
