use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CatalogError;
use crate::exact_rings::{CoefficientRing, GradingSpec, LaurentPoly, NovikovElem, TExp};
use crate::graded_qh::{AxiomReport, BasisElement, PresentationData, QhElement, QuantumCoefficient, RingPresentation};

/// A presentation over either coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyRing {
    Laurent(RingPresentation<LaurentPoly>),
    Novikov(RingPresentation<NovikovElem>),
}

impl AnyRing {
    pub fn name(&self) -> &str {
        match self {
            AnyRing::Laurent(r) => r.name(),
            AnyRing::Novikov(r) => r.name(),
        }
    }

    pub fn coefficient_ring(&self) -> CoefficientRing {
        match self {
            AnyRing::Laurent(_) => CoefficientRing::Laurent,
            AnyRing::Novikov(_) => CoefficientRing::Novikov,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            AnyRing::Laurent(r) => r.rank(),
            AnyRing::Novikov(r) => r.rank(),
        }
    }

    pub fn grading(&self) -> GradingSpec {
        match self {
            AnyRing::Laurent(r) => r.grading(),
            AnyRing::Novikov(r) => r.grading(),
        }
    }

    pub fn graded_ranks(&self) -> Vec<usize> {
        match self {
            AnyRing::Laurent(r) => r.graded_ranks(),
            AnyRing::Novikov(r) => r.graded_ranks(),
        }
    }

    pub fn check_ring_axioms(&self) -> AxiomReport {
        match self {
            AnyRing::Laurent(r) => r.check_ring_axioms(),
            AnyRing::Novikov(r) => r.check_ring_axioms(),
        }
    }

    pub fn to_json(&self) -> PresentationJson {
        match self {
            AnyRing::Laurent(r) => presentation_to_json(r),
            AnyRing::Novikov(r) => presentation_to_json(r),
        }
    }
}

impl From<RingPresentation<LaurentPoly>> for AnyRing {
    fn from(r: RingPresentation<LaurentPoly>) -> Self {
        AnyRing::Laurent(r)
    }
}

impl From<RingPresentation<NovikovElem>> for AnyRing {
    fn from(r: RingPresentation<NovikovElem>) -> Self {
        AnyRing::Novikov(r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientsJson {
    Laurent,
    Novikov,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisJson {
    pub name: String,
    pub degree: i64,
}

/// `[basis name, coefficient]`; the coefficient is `[[exp, c], ...]` over the
/// Laurent ring and `[[q, t_num, t_den, c], ...]` over the Novikov ring.
pub type TermJson = (String, Value);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductJson {
    pub left: String,
    pub right: String,
    pub result: Vec<TermJson>,
}

/// On-disk form of a [`RingPresentation`]. Products are listed once per
/// unordered pair; omitted pairs multiply to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub name: String,
    pub coefficients: CoefficientsJson,
    pub q_degree: i64,
    pub dimension: usize,
    pub basis: Vec<BasisJson>,
    pub pairing: Vec<Vec<i64>>,
    pub products: Vec<ProductJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cup: Option<Vec<ProductJson>>,
    #[serde(default)]
    pub classes: BTreeMap<String, Vec<TermJson>>,
}

fn int_to_json(c: &BigInt) -> Value {
    match i64::try_from(c) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(c.to_string()),
    }
}

fn int_from_json(v: &Value, at: &str) -> Result<BigInt, CatalogError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| CatalogError::SchemaError(format!("{at}: expected an integer, found {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| CatalogError::SchemaError(format!("{at}: expected an integer string, found {s:?}"))),
        other => Err(CatalogError::SchemaError(format!("{at}: expected an integer, found {other}"))),
    }
}

fn small_int(v: &Value, at: &str) -> Result<i64, CatalogError> {
    i64::try_from(int_from_json(v, at)?)
        .map_err(|_| CatalogError::SchemaError(format!("{at}: exponent out of range")))
}

/// JSON encoding of a coefficient.
pub trait JsonCoefficient: QuantumCoefficient {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value, at: &str) -> Result<Self, CatalogError>;
}

fn term_rows<'a>(v: &'a Value, at: &str, width: usize) -> Result<Vec<&'a [Value]>, CatalogError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CatalogError::SchemaError(format!("{at}: expected an array of terms")))?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| match r.as_array() {
            Some(a) if a.len() == width => Ok(a.as_slice()),
            _ => Err(CatalogError::SchemaError(format!("{at}[{i}]: expected an array of {width} integers"))),
        })
        .collect()
}

impl JsonCoefficient for LaurentPoly {
    fn to_json(&self) -> Value {
        Value::Array(self.terms().map(|(e, c)| Value::Array(vec![Value::from(e), int_to_json(c)])).collect())
    }

    fn from_json(v: &Value, at: &str) -> Result<Self, CatalogError> {
        let mut out = LaurentPoly::zero();
        for (i, row) in term_rows(v, at, 2)?.into_iter().enumerate() {
            let at = format!("{at}[{i}]");
            out = &out + &LaurentPoly::monomial(int_from_json(&row[1], &at)?, small_int(&row[0], &at)?);
        }
        Ok(out)
    }
}

impl JsonCoefficient for NovikovElem {
    fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(q, t, c)| {
                    Value::Array(vec![Value::from(q), Value::from(*t.numer()), Value::from(*t.denom()), int_to_json(c)])
                })
                .collect(),
        )
    }

    fn from_json(v: &Value, at: &str) -> Result<Self, CatalogError> {
        let mut out = NovikovElem::zero();
        for (i, row) in term_rows(v, at, 4)?.into_iter().enumerate() {
            let at = format!("{at}[{i}]");
            let den = small_int(&row[2], &at)?;
            if den <= 0 {
                return Err(CatalogError::SchemaError(format!("{at}: T-exponent denominator must be positive")));
            }
            let t = TExp::new(small_int(&row[1], &at)?, den);
            out = &out + &NovikovElem::monomial(int_from_json(&row[3], &at)?, small_int(&row[0], &at)?, t);
        }
        Ok(out)
    }
}

fn element_to_terms<R: JsonCoefficient>(ring: &RingPresentation<R>, e: &QhElement<R>) -> Vec<TermJson> {
    e.coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (ring.basis()[i].name.clone(), c.to_json()))
        .collect()
}

/// Nonzero coordinates of `e` as `[basis name, coefficient]` pairs.
pub fn element_to_json<R: JsonCoefficient>(ring: &RingPresentation<R>, e: &QhElement<R>) -> Vec<TermJson> {
    element_to_terms(ring, e)
}

/// Inverse of [`element_to_json`]; repeated names are added up.
pub fn element_from_json<R: JsonCoefficient>(
    ring: &RingPresentation<R>,
    terms: &[TermJson],
    at: &str,
) -> Result<QhElement<R>, CatalogError> {
    let mut coords = vec![R::zero(); ring.rank()];
    for (t, (name, value)) in terms.iter().enumerate() {
        let at = format!("{at}[{t}]");
        let i = ring
            .index_of(name)
            .ok_or_else(|| CatalogError::SchemaError(format!("{at}: unknown basis class {name:?}")))?;
        coords[i] = coords[i].plus(&R::from_json(value, &at)?);
    }
    Ok(QhElement::from_coords(coords))
}

pub fn presentation_to_json<R: JsonCoefficient>(ring: &RingPresentation<R>) -> PresentationJson {
    let n = ring.rank();
    let name = |i: usize| ring.basis()[i].name.clone();
    let mut products = Vec::new();
    for i in 0..n {
        for j in i..n {
            let e = ring.structure_constant(i, j);
            if !e.is_zero() {
                products.push(ProductJson { left: name(i), right: name(j), result: element_to_terms(ring, e) });
            }
        }
    }
    let cup = ring.declared_cup().map(|cup| {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let result: Vec<TermJson> = cup[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != BigInt::from(0))
                    .map(|(k, c)| (name(k), int_to_json(c)))
                    .collect();
                if !result.is_empty() {
                    out.push(ProductJson { left: name(i), right: name(j), result });
                }
            }
        }
        out
    });
    PresentationJson {
        name: ring.name().to_string(),
        coefficients: match R::RING {
            CoefficientRing::Laurent => CoefficientsJson::Laurent,
            CoefficientRing::Novikov => CoefficientsJson::Novikov,
        },
        q_degree: ring.grading().q_degree(),
        dimension: ring.dimension(),
        basis: ring.basis().iter().map(|b| BasisJson { name: b.name.clone(), degree: b.degree }).collect(),
        pairing: ring.pairing().to_vec(),
        products,
        cup,
        classes: ring.classes().iter().map(|(k, v)| (k.clone(), element_to_terms(ring, v))).collect(),
    }
}

fn presentation_from_json<R: JsonCoefficient>(json: &PresentationJson) -> Result<RingPresentation<R>, CatalogError> {
    let schema = |m: String| CatalogError::SchemaError(m);
    let n = json.basis.len();
    let index: HashMap<&str, usize> = json.basis.iter().enumerate().map(|(i, b)| (b.name.as_str(), i)).collect();
    let lookup = |name: &str, at: &str| {
        index.get(name).copied().ok_or_else(|| schema(format!("{at}: unknown basis class {name:?}")))
    };
    let grading = GradingSpec::from_q_degree(json.q_degree)
        .ok_or_else(|| schema(format!("q_degree: must be a positive even integer, found {}", json.q_degree)))?;
    let terms_to_element = |terms: &[TermJson], at: &str| -> Result<QhElement<R>, CatalogError> {
        let mut coords = vec![R::zero(); n];
        for (t, (name, value)) in terms.iter().enumerate() {
            let at = format!("{at}[{t}]");
            let i = lookup(name, &at)?;
            coords[i] = coords[i].plus(&R::from_json(value, &at)?);
        }
        Ok(QhElement::from_coords(coords))
    };

    let mut products: Vec<Vec<Option<QhElement<R>>>> = vec![vec![None; n]; n];
    for (p, prod) in json.products.iter().enumerate() {
        let at = format!("products[{p}]");
        let i = lookup(&prod.left, &format!("{at}.left"))?;
        let j = lookup(&prod.right, &format!("{at}.right"))?;
        if products[i][j].is_some() {
            return Err(schema(format!("{at}: product {} * {} listed twice", prod.left, prod.right)));
        }
        let e = terms_to_element(&prod.result, &format!("{at}.result"))?;
        products[i][j] = Some(e.clone());
        if i != j {
            products[j][i] = Some(e);
        }
    }
    let products = products
        .into_iter()
        .map(|row| row.into_iter().map(|e| e.unwrap_or_else(|| QhElement::zero(n))).collect())
        .collect();

    let cup = match &json.cup {
        None => None,
        Some(entries) => {
            let mut cup = vec![vec![vec![BigInt::from(0); n]; n]; n];
            for (p, prod) in entries.iter().enumerate() {
                let at = format!("cup[{p}]");
                let i = lookup(&prod.left, &format!("{at}.left"))?;
                let j = lookup(&prod.right, &format!("{at}.right"))?;
                for (t, (name, value)) in prod.result.iter().enumerate() {
                    let at = format!("{at}.result[{t}]");
                    let k = lookup(name, &at)?;
                    let c = int_from_json(value, &at)?;
                    cup[i][j][k] = c.clone();
                    cup[j][i][k] = c;
                }
            }
            Some(cup)
        }
    };

    let mut classes = BTreeMap::new();
    for (name, terms) in &json.classes {
        classes.insert(name.clone(), terms_to_element(terms, &format!("classes.{name}"))?);
    }

    RingPresentation::new(PresentationData {
        name: json.name.clone(),
        basis: json.basis.iter().map(|b| BasisElement::new(b.name.clone(), b.degree)).collect(),
        grading,
        dimension: json.dimension,
        pairing: json.pairing.clone(),
        products,
        cup,
        classes,
    })
    .map_err(|e| schema(e.to_string()))
}

impl PresentationJson {
    /// Builds the presentation and checks the ring axioms.
    pub fn to_ring(&self) -> Result<AnyRing, CatalogError> {
        let ring = match self.coefficients {
            CoefficientsJson::Laurent => AnyRing::Laurent(presentation_from_json(self)?),
            CoefficientsJson::Novikov => AnyRing::Novikov(presentation_from_json(self)?),
        };
        let report = ring.check_ring_axioms();
        if !report.is_ok() {
            return Err(CatalogError::AxiomViolation(report));
        }
        Ok(ring)
    }
}

pub fn parse_presentation(text: &str) -> Result<AnyRing, CatalogError> {
    let json: PresentationJson = serde_json::from_str(text).map_err(|e| {
        CatalogError::SchemaError(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    json.to_ring()
}

/// Canonical JSON text: fields in declaration order, products by basis
/// index, classes by name.
pub fn presentation_to_string(ring: &AnyRing) -> String {
    let mut s = serde_json::to_string_pretty(&ring.to_json()).expect("presentation serializes");
    s.push('\n');
    s
}

pub fn load_presentation(path: impl AsRef<Path>) -> Result<AnyRing, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))?;
    parse_presentation(&text)
}

pub fn save_presentation(ring: &AnyRing, path: impl AsRef<Path>) -> Result<(), CatalogError> {
    let path = path.as_ref();
    std::fs::write(path, presentation_to_string(ring)).map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))
}
