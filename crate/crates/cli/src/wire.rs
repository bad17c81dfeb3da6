//! JSON documents for elements, automorphism words, certificates and
//! verdicts.
//!
//! ```text
//! element:     { "side": "x" | "z", "terms": [ { "xexp": 2, "dexp": 1, "coeff": "-3/2" }, ... ] }
//! word:        [ { "kind": "shiftX" | "shiftD" | "fourier", "poly": [ "0", "c1", ... ] }, ... ]
//! certificate: { "word": <word>, "q": [ "c0", "c1", ... ], "side": "x" | "d" }
//! ```
//!
//! Coefficients are exact rational strings `p/q` (or `p` when integral).
//! Term lists are sorted by `(xexp, dexp)` ascending. Shift polynomials list
//! ascending coefficients starting with the constant term, which must be
//! `"0"`; a `fourier` entry has an empty `poly`. A verdict document is
//! accepted wherever a certificate is expected when it carries one.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use weyl_core::{
    AutoWord, CertSide, Certificate, Error, Generator, Monomial, Poly, Rational, Result, Side, StageRecord, TraceEvent,
    Verdict, WeylElement,
};

use crate::syntax::parse_rational;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    xexp: u32,
    dexp: u32,
    coeff: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    side: String,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct GeneratorDoc {
    kind: String,
    poly: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct CertificateDoc {
    word: Vec<GeneratorDoc>,
    q: Vec<String>,
    side: String,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

fn coeff_str(c: &Rational) -> String {
    c.to_string()
}

fn coeff_of(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| bad(format!("bad coefficient {s:?}")))
}

fn poly_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(coeff_str).collect()
}

fn poly_of(strings: &[String]) -> Result<Poly> {
    Ok(Poly::from_coeffs(strings.iter().map(|s| coeff_of(s)).collect::<Result<_>>()?))
}

fn element_doc(e: &WeylElement) -> ElementDoc {
    let side = match e.side() {
        Side::X => "x",
        Side::Z => "z",
    };
    // Monomial order is (x, d), so terms come out sorted.
    let terms = e.terms().map(|(m, c)| TermDoc { xexp: m.x, dexp: m.d, coeff: coeff_str(c) }).collect();
    ElementDoc { side: side.into(), terms }
}

fn element_from_doc(doc: ElementDoc) -> Result<WeylElement> {
    let side = match doc.side.as_str() {
        "x" => Side::X,
        "z" => Side::Z,
        other => return Err(bad(format!("unknown side {other:?}"))),
    };
    let mut terms = Vec::with_capacity(doc.terms.len());
    for t in &doc.terms {
        terms.push((Monomial { x: t.xexp, d: t.dexp }, coeff_of(&t.coeff)?));
    }
    Ok(WeylElement::from_terms(side, terms))
}

fn generator_doc(g: &Generator) -> GeneratorDoc {
    let shift_poly = |p: &Poly| {
        let mut v = poly_strings(p);
        if v.is_empty() {
            v.push("0".into());
        }
        v
    };
    match g {
        Generator::ShiftX(s) => GeneratorDoc { kind: "shiftX".into(), poly: shift_poly(s) },
        Generator::ShiftD(r) => GeneratorDoc { kind: "shiftD".into(), poly: shift_poly(r) },
        Generator::Fourier => GeneratorDoc { kind: "fourier".into(), poly: Vec::new() },
    }
}

fn generator_from_doc(doc: &GeneratorDoc) -> Result<Generator> {
    if doc.kind == "fourier" {
        if !doc.poly.is_empty() {
            return Err(bad("fourier takes an empty poly"));
        }
        return Ok(Generator::Fourier);
    }
    match doc.poly.first() {
        Some(c0) if coeff_of(c0)? == Rational::from_integer(0.into()) => {}
        _ => return Err(bad(format!("{} poly must start with constant term \"0\"", doc.kind))),
    }
    let p = poly_of(&doc.poly)?;
    match doc.kind.as_str() {
        "shiftX" => Ok(Generator::shift_x(p)),
        "shiftD" => Ok(Generator::shift_d(p)),
        other => Err(bad(format!("unknown generator kind {other:?}"))),
    }
}

fn word_docs(w: &AutoWord) -> Vec<GeneratorDoc> {
    w.gens().iter().map(generator_doc).collect()
}

fn word_from_docs(docs: &[GeneratorDoc]) -> Result<AutoWord> {
    Ok(AutoWord::new(docs.iter().map(generator_from_doc).collect::<Result<_>>()?))
}

fn certificate_doc(c: &Certificate) -> CertificateDoc {
    let side = match c.side {
        CertSide::X => "x",
        CertSide::D => "d",
    };
    CertificateDoc { word: word_docs(&c.word), q: poly_strings(&c.gen_poly), side: side.into() }
}

fn certificate_from_doc(doc: CertificateDoc) -> Result<Certificate> {
    let side = match doc.side.as_str() {
        "x" => CertSide::X,
        "d" => CertSide::D,
        other => return Err(bad(format!("unknown certificate side {other:?}"))),
    };
    Ok(Certificate { word: word_from_docs(&doc.word)?, gen_poly: poly_of(&doc.q)?, side })
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| bad(e.to_string()))
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(e.to_string()))
}

pub fn element_to_json(e: &WeylElement) -> Value {
    serde_json::to_value(element_doc(e)).expect("plain data")
}

pub fn element_from_json(v: &Value) -> Result<WeylElement> {
    element_from_doc(from_value(v.clone())?)
}

pub fn word_to_json(w: &AutoWord) -> Value {
    serde_json::to_value(word_docs(w)).expect("plain data")
}

pub fn word_from_json(v: &Value) -> Result<AutoWord> {
    word_from_docs(&from_value::<Vec<GeneratorDoc>>(v.clone())?)
}

pub fn certificate_to_json(c: &Certificate) -> Value {
    serde_json::to_value(certificate_doc(c)).expect("plain data")
}

/// Reads a certificate document, or the certificate inside a verdict
/// document.
pub fn certificate_from_json(v: &Value) -> Result<Certificate> {
    let inner = match v.get("verdict") {
        Some(_) => v.get("certificate").ok_or_else(|| bad("verdict document carries no certificate"))?,
        None => v,
    };
    certificate_from_doc(from_value(inner.clone())?)
}

pub fn parse_word(text: &str) -> Result<AutoWord> {
    word_from_json(&parse_value(text)?)
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    certificate_from_json(&parse_value(text)?)
}

pub fn parse_element(text: &str) -> Result<WeylElement> {
    element_from_json(&parse_value(text)?)
}

fn stage_json(s: &StageRecord) -> Value {
    json!({
        "stage": s.stage,
        "order": s.order,
        "weight": [s.weight.rho(), s.weight.sigma()],
        "anchor": [s.anchor.0, s.anchor.1],
        "value": s.value,
        "assoc": s.assoc.to_string(),
        "factored": s.factored.as_ref().map(ToString::to_string),
        "generators": s.generators.iter().map(|g| serde_json::to_value(generator_doc(g)).expect("plain data")).collect::<Vec<_>>(),
        "new_order": s.new_order,
        "transported": s.transported,
    })
}

fn trace_json(trace: &[TraceEvent]) -> Value {
    let events: Vec<Value> = trace
        .iter()
        .map(|e| match e {
            TraceEvent::FourierSwap => json!({ "event": "fourier_swap" }),
            TraceEvent::Scaled { leading, order } => {
                json!({ "event": "scaled", "leading": coeff_str(leading), "order": order })
            }
            TraceEvent::Normalized { generator } => {
                json!({ "event": "normalized", "generator": generator_doc(generator) })
            }
            TraceEvent::Stage(s) => {
                let mut v = stage_json(s);
                v["event"] = json!("stage");
                v
            }
            TraceEvent::Terminal { side, poly } => json!({
                "event": "terminal",
                "side": if *side == CertSide::X { "x" } else { "d" },
                "poly": poly_strings(poly),
            }),
        })
        .collect();
    Value::Array(events)
}

/// Verdict document: `verdict`, `input`, `trace`, plus `certificate` or
/// `reason`/`detail`/`stage`.
pub fn verdict_to_json(input: &WeylElement, v: &Verdict) -> Value {
    let mut doc = json!({
        "verdict": v.label(),
        "input": element_to_json(input),
        "trace": trace_json(v.trace()),
    });
    match v {
        Verdict::StrictlyNilpotent { certificate, .. } => doc["certificate"] = certificate_to_json(certificate),
        Verdict::NotStrictlyNilpotent { reason, stage, .. } => {
            doc["reason"] = json!(reason.code());
            doc["detail"] = json!(reason.to_string());
            doc["stage"] = json!(stage);
        }
        Verdict::TriviallyConstant => {}
    }
    doc
}
