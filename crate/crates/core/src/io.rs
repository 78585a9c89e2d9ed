//! Text formats: forms and maps as JSON documents, reports to disk.
//!
//! A form document is
//! `{"m": 3, "degree": 1, "terms": [{"wedge": ["dz2"], "coeff": [{"zexp": [1,0,0], "zbarexp": [0,0,0], "re": "1/3", "im": "0"}]}]}`.
//! Exact coefficients use `p/q` strings, numeric ones decimal strings.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{basis_name, parse_basis_name, Form};
use crate::laurent::{Laurent, Monomial};
use crate::polymap::PolyMap;
use crate::report::VerificationReport;
use crate::scalar::{format_rational, parse_rational, GaussRational, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffTerm {
    pub zexp: Vec<i32>,
    pub zbarexp: Vec<i32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormTerm {
    pub wedge: Vec<String>,
    pub coeff: Vec<CoeffTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormDoc {
    pub m: usize,
    pub degree: usize,
    pub terms: Vec<FormTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDoc {
    pub source_dim: usize,
    pub components: Vec<Vec<CoeffTerm>>,
}

/// Scalars with a lossless string form for each part.
pub trait TextScalar: Scalar {
    fn parts(&self) -> (String, String);
    fn from_parts(re: &str, im: &str) -> Result<Self>;
}

impl TextScalar for GaussRational {
    fn parts(&self) -> (String, String) {
        (format_rational(&self.re), format_rational(&self.im))
    }
    fn from_parts(re: &str, im: &str) -> Result<Self> {
        Ok(GaussRational::new(parse_rational(re)?, parse_rational(im)?))
    }
}

impl TextScalar for Complex64 {
    fn parts(&self) -> (String, String) {
        (format!("{:?}", self.re), format!("{:?}", self.im))
    }
    fn from_parts(re: &str, im: &str) -> Result<Self> {
        let p = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("malformed decimal {s:?}")));
        Ok(Complex64::new(p(re)?, p(im)?))
    }
}

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("{path}: {msg}")),
        other => Error::Parse(format!("{path}: {other}")),
    }
}

fn coeff_terms<S: TextScalar>(c: &Laurent<S>) -> Vec<CoeffTerm> {
    c.terms()
        .map(|(mono, v)| {
            let (re, im) = v.parts();
            CoeffTerm { zexp: mono.zexp.clone(), zbarexp: mono.zbarexp.clone(), re, im }
        })
        .collect()
}

fn laurent_from<S: TextScalar>(m: usize, terms: &[CoeffTerm], path: &str) -> Result<Laurent<S>> {
    let mut parts = Vec::with_capacity(terms.len());
    for (k, t) in terms.iter().enumerate() {
        let here = format!("{path}[{k}]");
        if t.zexp.len() != m || t.zbarexp.len() != m {
            return Err(at(&here, Error::Parse(format!("exponent vectors must have length {m}"))));
        }
        let mono = Monomial::new(t.zexp.clone(), t.zbarexp.clone()).map_err(|e| at(&here, e))?;
        parts.push((mono, S::from_parts(&t.re, &t.im).map_err(|e| at(&here, e))?));
    }
    Laurent::from_terms(m, parts).map_err(|e| at(path, e))
}

pub fn form_to_doc<S: TextScalar>(f: &Form<Laurent<S>>) -> FormDoc {
    let m = f.dim();
    let terms = f
        .terms()
        .map(|(w, c)| FormTerm { wedge: w.iter().map(|&b| basis_name(m, b)).collect(), coeff: coeff_terms(c) })
        .collect();
    FormDoc { m, degree: f.degree(), terms }
}

pub fn form_from_doc<S: TextScalar>(doc: &FormDoc) -> Result<Form<Laurent<S>>> {
    let m = doc.m;
    let mut out = Vec::with_capacity(doc.terms.len());
    for (k, t) in doc.terms.iter().enumerate() {
        let here = format!("terms[{k}]");
        let word = t
            .wedge
            .iter()
            .enumerate()
            .map(|(j, s)| parse_basis_name(m, s).map_err(|e| at(&format!("{here}.wedge[{j}]"), e)))
            .collect::<Result<Vec<u8>>>()?;
        if word.len() != doc.degree {
            return Err(at(&format!("{here}.wedge"), Error::Parse(format!("expected {} covectors", doc.degree))));
        }
        let c = laurent_from::<S>(m, &t.coeff, &format!("{here}.coeff"))?;
        // reorder into the sorted basis word
        let f = Form::monomial(m, &word, c).map_err(|e| at(&here, e))?;
        out.push(f);
    }
    out.into_iter().try_fold(Form::zero(m, doc.degree), |acc, f| acc.add(&f))
}

pub fn form_to_text<S: TextScalar>(f: &Form<Laurent<S>>) -> String {
    serde_json::to_string_pretty(&form_to_doc(f)).expect("form serializes")
}

pub fn form_from_text<S: TextScalar>(s: &str) -> Result<Form<Laurent<S>>> {
    form_from_doc(&serde_json::from_str::<FormDoc>(s)?)
}

/// A form read from disk in whichever scalar kind its strings use.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyForm {
    Exact(Form<Laurent<GaussRational>>),
    Numeric(Form<Laurent<Complex64>>),
}

impl AnyForm {
    pub fn to_c64(&self) -> Form<Laurent<Complex64>> {
        match self {
            AnyForm::Exact(f) => f.map_coefficients(|c| c.map_scalars(|s| s.to_c64())),
            AnyForm::Numeric(f) => f.clone(),
        }
    }
}

fn looks_decimal(s: &str) -> bool {
    s.contains(['.', 'e', 'E']) || s.contains("inf") || s.contains("NaN")
}

/// Exact when every coefficient string is a rational, numeric otherwise.
pub fn parse_any_form(s: &str) -> Result<AnyForm> {
    let doc: FormDoc = serde_json::from_str(s)?;
    let numeric = doc.terms.iter().flat_map(|t| &t.coeff).any(|c| looks_decimal(&c.re) || looks_decimal(&c.im));
    if numeric {
        Ok(AnyForm::Numeric(form_from_doc(&doc)?))
    } else {
        Ok(AnyForm::Exact(form_from_doc(&doc)?))
    }
}

pub fn read_form(path: &Path) -> Result<AnyForm> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_any_form(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_form<S: TextScalar>(path: &Path, f: &Form<Laurent<S>>) -> Result<()> {
    fs::write(path, form_to_text(f) + "\n")?;
    Ok(())
}

pub fn map_to_text<S: TextScalar>(map: &PolyMap<Laurent<S>>) -> String {
    let doc = MapDoc { source_dim: map.source_dim(), components: map.components().iter().map(coeff_terms).collect() };
    serde_json::to_string_pretty(&doc).expect("map serializes")
}

pub fn map_from_text<S: TextScalar>(s: &str) -> Result<PolyMap<Laurent<S>>> {
    let doc: MapDoc = serde_json::from_str(s)?;
    let comps = doc
        .components
        .iter()
        .enumerate()
        .map(|(k, c)| laurent_from::<S>(doc.source_dim, c, &format!("components[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyMap::new(doc.source_dim, comps))
}

pub fn read_map(path: &Path) -> Result<PolyMap<Laurent<Complex64>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let doc: MapDoc = serde_json::from_str(&text)?;
    let numeric = doc.components.iter().flatten().any(|c| looks_decimal(&c.re) || looks_decimal(&c.im));
    if numeric {
        map_from_text::<Complex64>(&text)
    } else {
        let exact = map_from_text::<GaussRational>(&text)?;
        Ok(PolyMap::new(exact.source_dim(), exact.components().iter().map(|c| c.map_scalars(|s| s.to_c64())).collect()))
    }
}

pub fn write_report(path: &Path, report: &VerificationReport, verbose: bool) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, report.to_text(verbose) + "\n")?;
    Ok(())
}
