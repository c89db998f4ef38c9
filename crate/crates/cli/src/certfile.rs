//! JSON form of a solution certificate. Rationals are canonical `p/q`
//! strings; divisor classes are arrays of ten of them over `(ℓ, e₁, …, e₉)`.

use hetbundle_core::assembly::{ConstraintEntry, ConstraintName, ConstraintReport, Slack};
use hetbundle_core::lattice::{DivisorClass, Surface};
use hetbundle_core::rational::{format_rational, parse_rational, Rational};
use hetbundle_core::solver::{MClass, SolutionCertificate, Table1Row};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: &str = "1";

pub const BASIS_CONVENTION: &str =
    "dP9/l,e1..e9;l^2=1,ei^2=-1;f=3l-sum(ei);e=e9;zeta=e1;n1=e8-e9;o2=e7+e8+e9+f-l;xi=e4-e5+e9+f";

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed input: {0}")]
    Schema(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn schema(msg: impl Into<String>) -> SchemaError {
    SchemaError::Schema(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HPrimeDto {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SlackDto {
    Scalar(String),
    Class(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDto {
    pub pass: bool,
    pub slack: SlackDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDto {
    #[serde(rename = "S_e")]
    pub s_e: EntryDto,
    #[serde(rename = "S_s")]
    pub s_s: EntryDto,
    #[serde(rename = "C1")]
    pub c1: EntryDto,
    #[serde(rename = "C2_f")]
    pub c2_f: EntryDto,
    #[serde(rename = "C2_f'")]
    pub c2_fprime: EntryDto,
    #[serde(rename = "C3")]
    pub c3: EntryDto,
    pub integrality: EntryDto,
    pub c2_deficit: [String; 2],
    pub c3_value: String,
    pub hprime_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub version: String,
    pub basis_convention: String,
    pub k2: i64,
    pub k3: i64,
    pub l2f: i64,
    pub l3f: i64,
    pub k: i64,
    pub d2: i64,
    pub d3: i64,
    pub a2: Vec<i64>,
    pub a3: Vec<i64>,
    pub u: i64,
    pub x: i64,
    /// Present when `M = z(e₄′ − e₅′)`.
    pub z: Option<i64>,
    /// Coordinates of `M` in `(m1, m2, m3)`.
    pub m_coords: [String; 3],
    #[serde(rename = "M")]
    pub m: Vec<String>,
    #[serde(rename = "L2")]
    pub l2: Vec<String>,
    #[serde(rename = "L3")]
    pub l3: Vec<String>,
    pub hprime: HPrimeDto,
    pub report: ReportDto,
    pub notes: Vec<String>,
}

pub fn class_to_strings(c: &DivisorClass) -> Vec<String> {
    c.coeffs().iter().map(format_rational).collect()
}

pub fn parse_q(s: &str) -> Result<Rational, SchemaError> {
    parse_rational(s).map_err(|e| schema(e.to_string()))
}

pub fn class_from_strings(v: &[String], what: &str) -> Result<DivisorClass, SchemaError> {
    if v.len() != 10 {
        return Err(schema(format!("{what} needs 10 coefficients, got {}", v.len())));
    }
    let coeffs: Vec<Rational> = v.iter().map(|s| parse_q(s)).collect::<Result<_, _>>()?;
    let arr: [Rational; 10] = coeffs.try_into().expect("length checked");
    Ok(DivisorClass::new(Surface::BPrime, arr))
}

fn entry_to_dto(e: &ConstraintEntry) -> EntryDto {
    let slack = match &e.slack {
        Slack::Scalar(x) => SlackDto::Scalar(format_rational(x)),
        Slack::Class(c) => SlackDto::Class(class_to_strings(c)),
    };
    EntryDto { pass: e.pass, slack }
}

fn entry_from_dto(name: ConstraintName, d: &EntryDto) -> Result<ConstraintEntry, SchemaError> {
    let slack = match (&d.slack, name) {
        (SlackDto::Class(v), ConstraintName::C1) => Slack::Class(class_from_strings(v, "C1 residual")?),
        (SlackDto::Scalar(s), n) if n != ConstraintName::C1 => Slack::Scalar(parse_q(s)?),
        _ => return Err(schema(format!("wrong slack shape for {name}"))),
    };
    Ok(ConstraintEntry { name, pass: d.pass, slack })
}

pub fn report_to_dto(r: &ConstraintReport) -> ReportDto {
    let e = |n| entry_to_dto(r.get(n));
    ReportDto {
        s_e: e(ConstraintName::SE),
        s_s: e(ConstraintName::SS),
        c1: e(ConstraintName::C1),
        c2_f: e(ConstraintName::C2F),
        c2_fprime: e(ConstraintName::C2FPrime),
        c3: e(ConstraintName::C3),
        integrality: e(ConstraintName::Integrality),
        c2_deficit: [format_rational(&r.c2_deficit.0), format_rational(&r.c2_deficit.1)],
        c3_value: format_rational(&r.c3),
        hprime_verified: r.hprime_verified,
    }
}

pub fn report_from_dto(d: &ReportDto) -> Result<ConstraintReport, SchemaError> {
    let pairs = [
        (ConstraintName::SE, &d.s_e),
        (ConstraintName::SS, &d.s_s),
        (ConstraintName::C1, &d.c1),
        (ConstraintName::C2F, &d.c2_f),
        (ConstraintName::C2FPrime, &d.c2_fprime),
        (ConstraintName::C3, &d.c3),
        (ConstraintName::Integrality, &d.integrality),
    ];
    let entries = pairs.iter().map(|(n, e)| entry_from_dto(*n, e)).collect::<Result<Vec<_>, _>>()?;
    Ok(ConstraintReport {
        entries,
        c2_deficit: (parse_q(&d.c2_deficit[0])?, parse_q(&d.c2_deficit[1])?),
        c3: parse_q(&d.c3_value)?,
        hprime_verified: d.hprime_verified,
    })
}

impl CertificateFile {
    pub fn from_certificate(c: &SolutionCertificate) -> Self {
        let (z, m_coords) = match &c.m {
            MClass::Ray(z) => {
                (Some(*z), [format_rational(&Rational::from_integer((*z).into())), "0/1".into(), "0/1".into()])
            }
            MClass::General(q) => (None, [format_rational(&q[0]), format_rational(&q[1]), format_rational(&q[2])]),
        };
        CertificateFile {
            version: FORMAT_VERSION.into(),
            basis_convention: BASIS_CONVENTION.into(),
            k2: c.row.k2,
            k3: c.row.k3,
            l2f: c.row.l2f,
            l3f: c.row.l3f,
            k: c.k,
            d2: c.d2,
            d3: c.d3,
            a2: c.a2.clone(),
            a3: c.a3.clone(),
            u: c.u,
            x: c.x,
            z,
            m_coords,
            m: class_to_strings(&c.m.class()),
            l2: class_to_strings(&c.l2),
            l3: class_to_strings(&c.l3),
            hprime: HPrimeDto { a: c.hprime.0, b: c.hprime.1, c: c.hprime.2 },
            report: report_to_dto(&c.report),
            notes: c.notes.clone(),
        }
    }

    /// Structural decoding only; mathematical consistency is the job of
    /// `verify_certificate`.
    pub fn to_certificate(&self) -> Result<SolutionCertificate, SchemaError> {
        if self.version != FORMAT_VERSION {
            return Err(schema(format!("unsupported version {:?}", self.version)));
        }
        if self.basis_convention != BASIS_CONVENTION {
            return Err(schema("unknown basis convention"));
        }
        if self.a2.len() != 2 || self.a3.len() != 3 {
            return Err(schema("a2 must have 2 entries and a3 must have 3"));
        }
        let coords = [parse_q(&self.m_coords[0])?, parse_q(&self.m_coords[1])?, parse_q(&self.m_coords[2])?];
        let m = match self.z {
            Some(z) => {
                if coords
                    != [
                        Rational::from_integer(z.into()),
                        Rational::from_integer(0.into()),
                        Rational::from_integer(0.into()),
                    ]
                {
                    return Err(schema("m_coords disagree with z"));
                }
                MClass::Ray(z)
            }
            None => MClass::General(coords),
        };
        if class_from_strings(&self.m, "M")? != m.class() {
            return Err(schema("M disagrees with m_coords"));
        }
        Ok(SolutionCertificate {
            row: Table1Row { k2: self.k2, k3: self.k3, l2f: self.l2f, l3f: self.l3f },
            k: self.k,
            u: self.u,
            x: self.x,
            m,
            d2: self.d2,
            d3: self.d3,
            a2: self.a2.clone(),
            a3: self.a3.clone(),
            l2: class_from_strings(&self.l2, "L2")?,
            l3: class_from_strings(&self.l3, "L3")?,
            hprime: (self.hprime.a, self.hprime.b, self.hprime.c),
            report: report_from_dto(&self.report)?,
            notes: self.notes.clone(),
        })
    }
}

/// Accepts a single certificate object or an array of them.
pub fn parse_certificates(text: &str) -> Result<Vec<CertificateFile>, SchemaError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match value {
        serde_json::Value::Array(items) => {
            items.into_iter().map(|v| serde_json::from_value(v).map_err(SchemaError::from)).collect()
        }
        obj @ serde_json::Value::Object(_) => Ok(vec![serde_json::from_value(obj)?]),
        _ => Err(schema("expected a certificate object or an array of them")),
    }
}
