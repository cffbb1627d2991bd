//! Exact-rational text and JSON formats for geometries, classes, lattices,
//! enumeration bounds and conjecture coefficients.
//!
//! Rationals are always strings (`"p"` or `"p/q"`) so no value passes
//! through a float. Output objects use `serde_json`'s default sorted maps,
//! which makes serialization canonical.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::charge::{ChargeValue, Slope};
use crate::chern::{contract, ChowClass, ContractedClass};
use crate::error::{Error, Result};
use crate::geometry::{FibredGeometry, GeometryKind};
use crate::pbundle::ConjectureCoefficients;
use crate::slopes::SubobjectLattice;
use crate::walls::EnumerationBounds;
use crate::Rational;

/// Parse `p`, `p/q` or an exact finite decimal such as `-0.125`.
///
/// Both `-` and `−` (U+2212) are accepted as the sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-').or_else(|| t.strip_prefix('\u{2212}')) {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
    let int = |x: &str| x.parse::<BigInt>().map_err(|_| bad());

    let value = if let Some((n, d)) = body.split_once('/') {
        if !digits(n) || !digits(d) {
            return Err(bad());
        }
        let d = int(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Rational::new(int(n)?, d)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if !(digits(whole) || whole.is_empty()) || !digits(frac) {
            return Err(bad());
        }
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let whole = if whole.is_empty() { BigInt::zero() } else { int(whole)? };
        Rational::new(whole * &scale + int(frac)?, scale)
    } else if digits(body) {
        Rational::from_integer(int(body)?)
    } else {
        return Err(bad());
    };
    Ok(if neg { -value } else { value })
}

/// Canonical reduced form: `"p"` when integral, else `"p/q"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn q_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn slope_json(s: &Slope<Rational>) -> Value {
    match s {
        Slope::Finite(q) => q_json(q),
        Slope::PlusInfinity => Value::String("+inf".into()),
    }
}

pub fn charge_json(z: &ChargeValue<Rational>) -> Value {
    json!({ "re": q_json(&z.re), "im": q_json(&z.im) })
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryDoc {
    ProjectiveBundle { genus: i64, deg_e: i64 },
    Generic { genus: i64, h3: String, h2f: String },
}

impl GeometryDoc {
    pub fn build(&self) -> Result<FibredGeometry<Rational>> {
        match self {
            GeometryDoc::ProjectiveBundle { genus, deg_e } => FibredGeometry::projective_bundle(*genus, *deg_e),
            GeometryDoc::Generic { genus, h3, h2f } => {
                FibredGeometry::generic(*genus, parse_rational(h3)?, parse_rational(h2f)?)
            }
        }
    }
}

pub fn parse_geometry(text: &str) -> Result<FibredGeometry<Rational>> {
    from_json::<GeometryDoc>(text, "geometry")?.build()
}

pub fn geometry_json(g: &FibredGeometry<Rational>) -> Value {
    match g.kind() {
        GeometryKind::ProjectiveBundle { deg_e } => {
            json!({ "kind": "projective_bundle", "genus": g.base_genus(), "deg_e": deg_e })
        }
        GeometryKind::Generic => json!({
            "kind": "generic",
            "genus": g.base_genus(),
            "h3": q_json(g.h3()),
            "h2f": q_json(g.h2f()),
        }),
    }
}

/// Either a contracted class or, when `c1`/`c2` are present, a Chow class
/// `{"ch0", "c1": [H, F], "c2": [H^2, HF], "ch3"}` with `c2` holding `ch2`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub ch0: Option<String>,
    pub h2_ch1: Option<String>,
    pub hf_ch1: Option<String>,
    pub h_ch2: Option<String>,
    pub f_ch2: Option<String>,
    pub ch3: Option<String>,
    pub c1: Option<[String; 2]>,
    pub c2: Option<[String; 2]>,
}

fn field(v: &Option<String>, name: &str) -> Result<Rational> {
    match v {
        Some(s) => parse_rational(s),
        None => Err(Error::Parse(format!("class is missing {name:?}"))),
    }
}

impl ClassDoc {
    pub fn is_chow(&self) -> bool {
        self.c1.is_some() || self.c2.is_some()
    }

    pub fn chow(&self) -> Result<ChowClass<Rational>> {
        let contracted = [&self.h2_ch1, &self.hf_ch1, &self.h_ch2, &self.f_ch2];
        if contracted.iter().any(|x| x.is_some()) {
            return Err(Error::Parse("class mixes Chow and contracted fields".into()));
        }
        let pair = |p: &Option<[String; 2]>, name: &str| -> Result<(Rational, Rational)> {
            match p {
                Some([a, b]) => Ok((parse_rational(a)?, parse_rational(b)?)),
                None => Err(Error::Parse(format!("Chow class is missing {name:?}"))),
            }
        };
        let (c1_h, c1_f) = pair(&self.c1, "c1")?;
        let (c2_h2, c2_hf) = pair(&self.c2, "c2")?;
        Ok(ChowClass::new(field(&self.ch0, "ch0")?, c1_h, c1_f, c2_h2, c2_hf, field(&self.ch3, "ch3")?))
    }

    pub fn contracted(&self) -> Result<ContractedClass<Rational>> {
        Ok(ContractedClass::new(
            field(&self.ch0, "ch0")?,
            field(&self.h2_ch1, "h2_ch1")?,
            field(&self.hf_ch1, "hf_ch1")?,
            field(&self.h_ch2, "h_ch2")?,
            field(&self.f_ch2, "f_ch2")?,
            field(&self.ch3, "ch3")?,
        ))
    }

    /// The contracted class, contracting a Chow class against `geom`.
    pub fn resolve(&self, geom: &FibredGeometry<Rational>) -> Result<ContractedClass<Rational>> {
        if self.is_chow() {
            contract(&self.chow()?, geom)
        } else {
            self.contracted()
        }
    }
}

pub fn parse_class(text: &str, geom: &FibredGeometry<Rational>) -> Result<ContractedClass<Rational>> {
    from_json::<ClassDoc>(text, "class")?.resolve(geom)
}

pub fn parse_classes(text: &str, geom: &FibredGeometry<Rational>) -> Result<Vec<ContractedClass<Rational>>> {
    from_json::<Vec<ClassDoc>>(text, "class list")?
        .iter()
        .map(|d| d.resolve(geom))
        .collect()
}

pub fn class_json(v: &ContractedClass<Rational>) -> Value {
    json!({
        "ch0": q_json(&v.ch0),
        "h2_ch1": q_json(&v.h2_ch1),
        "hf_ch1": q_json(&v.hf_ch1),
        "h_ch2": q_json(&v.h_ch2),
        "f_ch2": q_json(&v.f_ch2),
        "ch3": q_json(&v.ch3),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeDoc {
    root: String,
    nodes: BTreeMap<String, ClassDoc>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

pub fn parse_lattice(text: &str, geom: &FibredGeometry<Rational>) -> Result<SubobjectLattice<Rational>> {
    let doc: LatticeDoc = from_json(text, "lattice")?;
    let nodes = doc
        .nodes
        .iter()
        .map(|(k, c)| Ok((k.clone(), c.resolve(geom)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    SubobjectLattice::new(nodes, &doc.edges, doc.root)
}

/// `{"max_abs": "2"}` or `{"max_abs": ["2", ...six]}`, with optional
/// `"lattice": false` (integer grid) or explicit `"denominators"`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsDoc {
    max_abs: MaxAbs,
    #[serde(default = "default_true")]
    lattice: bool,
    denominators: Option<[i64; 6]>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MaxAbs {
    Uniform(String),
    PerComponent([String; 6]),
}

fn default_true() -> bool {
    true
}

pub fn parse_bounds(text: &str) -> Result<EnumerationBounds<Rational>> {
    let doc: BoundsDoc = from_json(text, "bounds")?;
    let max_abs: [Rational; 6] = match &doc.max_abs {
        MaxAbs::Uniform(s) => {
            let q = parse_rational(s)?;
            std::array::from_fn(|_| q.clone())
        }
        MaxAbs::PerComponent(v) => {
            let parsed = v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            parsed.try_into().expect("six components")
        }
    };
    Ok(match (doc.denominators, doc.lattice) {
        (Some(denominators), _) => EnumerationBounds { max_abs, denominators },
        (None, true) => EnumerationBounds::lattice(max_abs),
        (None, false) => EnumerationBounds::integer_grid(max_abs),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConjectureDoc {
    a1: String,
    b1: String,
    a2: String,
    b2: String,
    c: String,
}

pub fn parse_conjecture_coefficients(text: &str) -> Result<ConjectureCoefficients<Rational>> {
    let d: ConjectureDoc = from_json(text, "conjecture coefficients")?;
    ConjectureCoefficients::new(
        parse_rational(&d.a1)?,
        parse_rational(&d.b1)?,
        parse_rational(&d.a2)?,
        parse_rational(&d.b2)?,
        parse_rational(&d.c)?,
    )
}

pub fn conjecture_json(c: &ConjectureCoefficients<Rational>) -> Value {
    json!({
        "a1": q_json(&c.a1),
        "b1": q_json(&c.b1),
        "a2": q_json(&c.a2),
        "b2": q_json(&c.b2),
        "c": q_json(&c.c),
    })
}
