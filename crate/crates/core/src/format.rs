//! JSON schemas for pairs, forms, matrices and certificates.
//!
//! Coefficients travel as exact rational strings `"p/q"` (or `"p"`); bare
//! JSON integers are accepted on input, floats never are.

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::biform::{BiForm, Signature};
use crate::error::{Error, Result};
use crate::exactla::GqMatrix;
use crate::exactnum::{format_rational, parse_rational, Gq, Rational};
use crate::pairs::{Decomposition, MapDecomposition, PolyMapPair};
use crate::poly::MultiPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Int(i64),
}

impl RationalText {
    pub fn parse(&self) -> Result<Rational> {
        match self {
            RationalText::Text(s) => parse_rational(s),
            RationalText::Int(n) => Ok(crate::exactnum::int(*n)),
        }
    }
}

impl From<&Rational> for RationalText {
    fn from(q: &Rational) -> Self {
        RationalText::Text(format_rational(q))
    }
}

fn zero_text() -> RationalText {
    RationalText::Text("0".into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GqDto {
    #[serde(default = "zero_text")]
    pub re: RationalText,
    #[serde(default = "zero_text")]
    pub im: RationalText,
}

impl GqDto {
    pub fn parse(&self) -> Result<Gq> {
        Ok(Gq::new(self.re.parse()?, self.im.parse()?))
    }
}

impl From<&Gq> for GqDto {
    fn from(g: &Gq) -> Self {
        GqDto { re: (&g.re).into(), im: (&g.im).into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDto {
    pub exponents: Vec<u32>,
    pub coeff: GqDto,
}

pub type PolyDto = Vec<TermDto>;

pub fn poly_to_dto(p: &MultiPoly) -> PolyDto {
    p.terms().rev().map(|(m, c)| TermDto { exponents: m.exponents().to_vec(), coeff: c.into() }).collect()
}

pub fn poly_from_dto(terms: &[TermDto], nvars: usize) -> Result<MultiPoly> {
    let parsed = terms.iter().map(|t| Ok((t.exponents.clone(), t.coeff.parse()?))).collect::<Result<Vec<_>>>()?;
    MultiPoly::from_terms(nvars, parsed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiTermDto {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub coeff: GqDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BiFormDto {
    Sized { nvars: usize, terms: Vec<BiTermDto> },
    Bare(Vec<BiTermDto>),
}

impl BiFormDto {
    pub fn parse(&self) -> Result<BiForm> {
        let (nvars, terms) = match self {
            BiFormDto::Sized { nvars, terms } => (*nvars, terms),
            BiFormDto::Bare(terms) => {
                let n = terms.first().map(|t| t.alpha.len()).ok_or_else(|| {
                    Error::Parse("a bare term list must be nonempty; use {\"nvars\", \"terms\"}".into())
                })?;
                (n, terms)
            }
        };
        let parsed = terms
            .iter()
            .map(|t| Ok((t.alpha.clone(), t.beta.clone(), t.coeff.parse()?)))
            .collect::<Result<Vec<_>>>()?;
        BiForm::from_terms(nvars, parsed)
    }
}

impl From<&BiForm> for BiFormDto {
    fn from(b: &BiForm) -> Self {
        BiFormDto::Sized {
            nvars: b.nvars(),
            terms: b
                .terms()
                .map(|(a, be, c)| BiTermDto {
                    alpha: a.exponents().to_vec(),
                    beta: be.exponents().to_vec(),
                    coeff: c.into(),
                })
                .collect(),
        }
    }
}

pub type MatrixDto = Vec<Vec<GqDto>>;

pub fn matrix_to_dto(m: &GqMatrix) -> MatrixDto {
    m.to_rows().iter().map(|r| r.iter().map(GqDto::from).collect()).collect()
}

pub fn matrix_from_dto(rows: &MatrixDto) -> Result<GqMatrix> {
    let parsed = rows.iter().map(|r| r.iter().map(GqDto::parse).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    GqMatrix::from_rows(parsed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub source: Signature,
    pub target: Signature,
    pub phi: Vec<PolyDto>,
    pub psi: Vec<PolyDto>,
}

impl PairFile {
    fn tuples(&self, nvars: usize) -> Result<(Vec<MultiPoly>, Vec<MultiPoly>)> {
        let conv = |t: &[PolyDto]| t.iter().map(|p| poly_from_dto(p, nvars)).collect::<Result<Vec<_>>>();
        Ok((conv(&self.phi)?, conv(&self.psi)?))
    }

    pub fn to_pair(&self) -> Result<PolyMapPair> {
        let (phi, psi) = self.tuples(self.source.dim())?;
        PolyMapPair::new(phi, psi, self.source, self.target)
    }

    /// Reads the components as affine data and homogenizes them.
    pub fn to_homogenized_pair(&self) -> Result<PolyMapPair> {
        let (phi, psi) = self.tuples(self.source.dim())?;
        PolyMapPair::from_affine(&phi, &psi, self.source, self.target)
    }
}

impl From<&PolyMapPair> for PairFile {
    fn from(p: &PolyMapPair) -> Self {
        PairFile {
            source: p.source(),
            target: p.target(),
            phi: p.phi().iter().map(poly_to_dto).collect(),
            psi: p.psi().iter().map(poly_to_dto).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionFile {
    #[serde(rename = "B")]
    pub b: MatrixDto,
    #[serde(rename = "C")]
    pub c: MatrixDto,
    pub h1: PolyDto,
    pub h2: PolyDto,
    #[serde(rename = "Phi")]
    pub phi: Vec<PolyDto>,
    #[serde(rename = "Psi")]
    pub psi: Vec<PolyDto>,
    pub lambda: RationalText,
}

impl DecompositionFile {
    pub fn to_decomposition(&self, nvars: usize) -> Result<Decomposition> {
        let conv = |t: &[PolyDto]| t.iter().map(|p| poly_from_dto(p, nvars)).collect::<Result<Vec<_>>>();
        Ok(Decomposition {
            b: matrix_from_dto(&self.b)?,
            c: matrix_from_dto(&self.c)?,
            h1: poly_from_dto(&self.h1, nvars)?,
            h2: poly_from_dto(&self.h2, nvars)?,
            phi_rest: conv(&self.phi)?,
            psi_rest: conv(&self.psi)?,
            lambda: self.lambda.parse()?,
        })
    }
}

impl From<&Decomposition> for DecompositionFile {
    fn from(d: &Decomposition) -> Self {
        DecompositionFile {
            b: matrix_to_dto(&d.b),
            c: matrix_to_dto(&d.c),
            h1: poly_to_dto(&d.h1),
            h2: poly_to_dto(&d.h2),
            phi: d.phi_rest.iter().map(poly_to_dto).collect(),
            psi: d.psi_rest.iter().map(poly_to_dto).collect(),
            lambda: (&d.lambda).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDecompositionFile {
    #[serde(rename = "W")]
    pub w: MatrixDto,
    pub h: PolyDto,
    #[serde(rename = "Phi")]
    pub phi: Vec<PolyDto>,
    pub lambda: RationalText,
}

impl From<&MapDecomposition> for MapDecompositionFile {
    fn from(d: &MapDecomposition) -> Self {
        MapDecompositionFile {
            w: matrix_to_dto(&d.w),
            h: poly_to_dto(&d.h),
            phi: d.phi_rest.iter().map(poly_to_dto).collect(),
            lambda: (&d.lambda).into(),
        }
    }
}

impl MapDecompositionFile {
    pub fn to_decomposition(&self, nvars: usize) -> Result<MapDecomposition> {
        Ok(MapDecomposition {
            w: matrix_from_dto(&self.w)?,
            h: poly_from_dto(&self.h, nvars)?,
            phi_rest: self.phi.iter().map(|p| poly_from_dto(p, nvars)).collect::<Result<_>>()?,
            lambda: self.lambda.parse()?,
        })
    }
}

/// Parses JSON, reporting line and column on failure.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("DTOs always serialize")
}

pub fn parse_pair(text: &str) -> Result<PolyMapPair> {
    from_json::<PairFile>(text)?.to_pair()
}

pub fn write_pair(pair: &PolyMapPair) -> String {
    to_json(&PairFile::from(pair))
}

pub fn parse_biform(text: &str) -> Result<BiForm> {
    from_json::<BiFormDto>(text)?.parse()
}

pub fn write_biform(b: &BiForm) -> String {
    to_json(&BiFormDto::from(b))
}

pub fn parse_matrix(text: &str) -> Result<GqMatrix> {
    matrix_from_dto(&from_json(text)?)
}

pub fn write_matrix(m: &GqMatrix) -> String {
    to_json(&matrix_to_dto(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn gq_text_forms() {
        let g: GqDto = from_json(r#"{"re": "3/6", "im": -2}"#).unwrap();
        assert_eq!(g.parse().unwrap(), Gq::new(rat(1, 2), crate::exactnum::int(-2)));
        let out = serde_json::to_string(&GqDto::from(&Gq::new(rat(1, 2), rat(4, 2)))).unwrap();
        assert_eq!(out, r#"{"re":"1/2","im":"2"}"#);
        assert!(from_json::<GqDto>(r#"{"re": 0.5}"#).is_err());
    }

    #[test]
    fn parse_error_has_position() {
        let err = parse_pair("{\n  \"source\": {\"r\": 1,\n}").unwrap_err();
        let Error::Parse(msg) = err else { panic!("expected parse error") };
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn biform_accepts_bare_list() {
        let b = parse_biform(r#"[{"alpha":[1,0],"beta":[1,0],"coeff":{"re":"1"}}]"#).unwrap();
        assert_eq!(b.nvars(), 2);
        assert_eq!(parse_biform(&write_biform(&b)).unwrap(), b);
        let zero = BiForm::zero(3);
        assert_eq!(parse_biform(&write_biform(&zero)).unwrap(), zero);
    }

    #[test]
    fn pair_round_trip() {
        let p = crate::gen::whitney(2, 1).unwrap();
        assert_eq!(parse_pair(&write_pair(&p)).unwrap(), p);
    }
}
