//! Text and JSON formats for matrices, codes, canonical form descriptors and
//! line lists.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use polar_grassmann::code::{CodeParams, ExportedCode, PolarCode};
use polar_grassmann::forms::{AlternatingForm, CanonicalParams, Case, FormOptions, QuadraticSpace};
use polar_grassmann::geometry::PolarGeometry;
use polar_grassmann::{Error, FieldCtx, Matrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn values(m: &Matrix) -> Vec<Vec<u16>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.value()).collect())
        .collect()
}

fn from_values(f: &FieldCtx, rows: &[Vec<u64>]) -> CliResult<Matrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Malformed("ragged matrix".into()).into());
    }
    let flat: Vec<u64> = rows.iter().flatten().copied().collect();
    Ok(Matrix::from_values(f, rows.len(), cols, &flat)?)
}

/// JSON mirror of the text export.
#[derive(Debug, Serialize, Deserialize)]
pub struct CodeJson {
    #[serde(rename = "N")]
    pub length: usize,
    #[serde(rename = "K")]
    pub dimension: usize,
    pub q: u32,
    pub n: usize,
    pub generator: Vec<Vec<u64>>,
    pub d_claimed: u64,
}

pub fn export_code(code: &PolarCode, format: Format) -> String {
    match format {
        Format::Text => code.export_text(),
        Format::Json => {
            let p = code.params();
            let generator = values(code.generator())
                .into_iter()
                .map(|r| r.into_iter().map(u64::from).collect())
                .collect();
            let json = CodeJson {
                length: p.length,
                dimension: p.dimension,
                q: p.q,
                n: p.n,
                generator,
                d_claimed: p.d_claimed,
            };
            let mut s = serde_json::to_string(&json).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

/// Reads either export format, telling them apart by the first character.
pub fn parse_code(text: &str) -> CliResult<(FieldCtx, ExportedCode)> {
    if !text.trim_start().starts_with('{') {
        return Ok(ExportedCode::parse_text(text)?);
    }
    let json: CodeJson = serde_json::from_str(text)?;
    let f = FieldCtx::with_order(json.q)?;
    let generator = from_values(&f, &json.generator)?;
    if generator.cols() != json.length {
        return Err(Error::Malformed(format!(
            "{} columns, expected {}",
            generator.cols(),
            json.length
        ))
        .into());
    }
    let params = CodeParams {
        n: json.n,
        q: json.q,
        length: json.length,
        dimension: json.dimension,
        d_claimed: json.d_claimed,
    };
    Ok((f, ExportedCode { params, generator }))
}

/// Canonical pair description; `M` and `S` are rebuilt from it.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Descriptor {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub n: usize,
    pub r: usize,
    pub d: usize,
    pub case: u8,
    pub alpha: u64,
    #[serde(default)]
    pub u_minor: bool,
    pub s11: Vec<Vec<u64>>,
}

impl Descriptor {
    pub fn new(
        f: &FieldCtx,
        params: CanonicalParams,
        opts: &FormOptions,
        af: &AlternatingForm,
    ) -> Self {
        let h: Vec<usize> = (0..params.d).collect();
        let s11 = values(&af.matrix().submatrix(&h, &h))
            .into_iter()
            .map(|r| r.into_iter().map(u64::from).collect());
        Self {
            q: f.q(),
            p: f.p(),
            e: f.e(),
            n: params.n,
            r: params.r,
            d: params.d,
            case: params.case.number(),
            alpha: opts.alpha.value() as u64,
            u_minor: opts.u_minor,
            s11: s11.collect(),
        }
    }

    pub fn field(&self) -> CliResult<FieldCtx> {
        let f = FieldCtx::new(self.p, self.e)?;
        if f.q() != self.q {
            return Err(Error::Malformed(format!("q = {} but p^e = {}", self.q, f.q())).into());
        }
        Ok(f)
    }

    /// Rebuilds the pair `(M, S)`.
    pub fn build(&self) -> CliResult<(FieldCtx, QuadraticSpace, AlternatingForm)> {
        let f = self.field()?;
        let case = Case::from_number(self.case)?;
        let params = CanonicalParams::new(self.n, self.r, self.d, case)?;
        let s11 = if self.d == 0 {
            None
        } else {
            Some(from_values(&f, &self.s11)?)
        };
        let opts = FormOptions {
            s11,
            alpha: f.element(self.alpha)?,
            u_minor: self.u_minor,
        };
        let qs = QuadraticSpace::canonical(&f, params)?;
        let af = AlternatingForm::canonical(&f, params, &opts)?;
        Ok((f, qs, af))
    }
}

#[derive(Serialize)]
struct LineJson {
    id: usize,
    p1: Vec<u16>,
    p2: Vec<u16>,
    plucker: Vec<u16>,
}

/// Every totally singular line in Plücker order.
pub fn line_list(geom: &PolarGeometry, format: Format) -> String {
    let vals =
        |v: &[polar_grassmann::FieldElement]| v.iter().map(|x| x.value()).collect::<Vec<_>>();
    match format {
        Format::Text => {
            let f = geom.field();
            let mut out = format!(
                "{} {} {}\n",
                geom.lines().len(),
                f.q(),
                geom.quadratic_space().n()
            );
            let join = |v: Vec<u16>| v.iter().map(u16::to_string).collect::<Vec<_>>().join(" ");
            for l in geom.lines() {
                let _ = writeln!(
                    out,
                    "{} | {} | {} | {}",
                    l.id,
                    join(vals(&l.p1)),
                    join(vals(&l.p2)),
                    join(vals(&l.plucker))
                );
            }
            out
        }
        Format::Json => {
            let lines: Vec<LineJson> = geom
                .lines()
                .iter()
                .map(|l| LineJson {
                    id: l.id,
                    p1: vals(&l.p1),
                    p2: vals(&l.p2),
                    plucker: vals(&l.plucker),
                })
                .collect();
            let mut s = serde_json::to_string(&lines).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_export_round_trips() {
        let f = FieldCtx::with_order(3).unwrap();
        let code = PolarCode::standard(&f, 2).unwrap();
        let json = export_code(&code, Format::Json);
        assert!(json.starts_with(r#"{"N":40,"K":10,"q":3,"n":2,"#));
        let (_, back) = parse_code(&json).unwrap();
        assert_eq!(&back.generator, code.generator());
        let (_, back) = parse_code(&export_code(&code, Format::Text)).unwrap();
        assert_eq!(back.params, code.params());
    }

    #[test]
    fn descriptor_rebuilds_pair() {
        let f = FieldCtx::with_order(9).unwrap();
        for case in Case::ALL {
            for p in CanonicalParams::admissible(2, case) {
                let opts = FormOptions::default();
                let af = AlternatingForm::canonical(&f, p, &opts).unwrap();
                let desc = Descriptor::new(&f, p, &opts, &af);
                let text = serde_json::to_string(&desc).unwrap();
                let back: Descriptor = serde_json::from_str(&text).unwrap();
                let (_, qs, af2) = back.build().unwrap();
                assert_eq!(af2, af);
                assert_eq!(qs.gram(), QuadraticSpace::canonical(&f, p).unwrap().gram());
            }
        }
    }

    #[test]
    fn line_list_counts() {
        let f = FieldCtx::with_order(3).unwrap();
        let geom = PolarGeometry::new(&QuadraticSpace::standard(&f, 2).unwrap());
        let text = line_list(&geom, Format::Text);
        assert!(text.starts_with("40 3 2\n"));
        assert_eq!(text.lines().count(), 41);
    }
}
