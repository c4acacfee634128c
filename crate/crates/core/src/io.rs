//! JSON problem and pencil files.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major arrays of them.
//! Floats are written in shortest round-trip form, so a write/read cycle is lossless.
//!
//! ```json
//! {
//!   "n": 1,
//!   "basis": "newton",
//!   "nodes": { "alpha": [[1, 0], [2, 0]], "beta": [[0, 0], [0, 0]] },
//!   "coefficients": { "A20": [[1, 0]], "A11": [[0, 0]], "A02": [[0, 0]],
//!                     "A10": [[0, 0]], "A01": [[0, 0]], "A00": [[0, 0]] }
//! }
//! ```
//!
//! Pencil files add a `pencil` object (`kind` plus `A1/A2/A3` or `L1/L2/L0`) and an
//! optional `provenance` object.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ansatz::{MonomialPencil, NewtonPencil};
use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, C64};
use crate::linearize::E1FreeParams;
use crate::poly::{Basis, MatrixPoly2, NewtonNodes};

pub type JsonComplex = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodesJson {
    pub alpha: [JsonComplex; 2],
    pub beta: [JsonComplex; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsJson {
    #[serde(rename = "A20")]
    pub a20: Vec<JsonComplex>,
    #[serde(rename = "A11")]
    pub a11: Vec<JsonComplex>,
    #[serde(rename = "A02")]
    pub a02: Vec<JsonComplex>,
    #[serde(rename = "A10")]
    pub a10: Vec<JsonComplex>,
    #[serde(rename = "A01")]
    pub a01: Vec<JsonComplex>,
    #[serde(rename = "A00")]
    pub a00: Vec<JsonComplex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilJson {
    /// `"newton"` (`A1, A2, A3`) or `"monomial"` (`L1, L2, L0`).
    pub kind: String,
    #[serde(rename = "A1", skip_serializing_if = "Option::is_none", default)]
    pub a1: Option<Vec<JsonComplex>>,
    #[serde(rename = "A2", skip_serializing_if = "Option::is_none", default)]
    pub a2: Option<Vec<JsonComplex>>,
    #[serde(rename = "A3", skip_serializing_if = "Option::is_none", default)]
    pub a3: Option<Vec<JsonComplex>>,
    #[serde(rename = "L1", skip_serializing_if = "Option::is_none", default)]
    pub l1: Option<Vec<JsonComplex>>,
    #[serde(rename = "L2", skip_serializing_if = "Option::is_none", default)]
    pub l2: Option<Vec<JsonComplex>>,
    #[serde(rename = "L0", skip_serializing_if = "Option::is_none", default)]
    pub l0: Option<Vec<JsonComplex>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsJson {
    #[serde(rename = "Y11")]
    pub y11: Vec<JsonComplex>,
    #[serde(rename = "Z1")]
    pub z1: Vec<JsonComplex>,
    #[serde(rename = "Z2")]
    pub z2: Vec<JsonComplex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceJson {
    /// `"companion"` or `"ansatz"`.
    pub source: String,
    pub ansatz: [JsonComplex; 3],
    /// Row transform with `M v = e₁`, row-major 3×3.
    #[serde(rename = "M", skip_serializing_if = "Option::is_none", default)]
    pub m: Option<Vec<JsonComplex>>,
    /// Parameters of the e₁-form pencil `(M ⊗ I)·L`.
    pub e1_params: ParamsJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub basis: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nodes: Option<NodesJson>,
    pub coefficients: CoefficientsJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pencil: Option<PencilJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub provenance: Option<ProvenanceJson>,
}

/// A pencil read back from a file, in the basis it was written in.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPencil {
    Monomial(MonomialPencil),
    Newton(NewtonPencil),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub source: String,
    pub ansatz: [C64; 3],
    pub m: Option<ComplexMatrix>,
    pub e1_params: E1FreeParams,
}

pub fn to_json_complex(z: C64) -> JsonComplex {
    [z.re, z.im]
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Vec<JsonComplex> {
    m.to_row_major().into_iter().map(to_json_complex).collect()
}

pub fn matrix_from_json(field: &str, rows: usize, cols: usize, data: &[JsonComplex]) -> Result<ComplexMatrix> {
    if data.len() != rows * cols {
        return Err(Error::Parse(format!("{field}: expected {} entries ({rows}x{cols}), found {}", rows * cols, data.len())));
    }
    ComplexMatrix::new(rows, cols, data.iter().map(|&[re, im]| c64(re, im)).collect())
        .map_err(|e| Error::Parse(format!("{field}: {e}")))
}

fn complex_from_json(field: &str, z: JsonComplex) -> Result<C64> {
    if z.iter().all(|x| x.is_finite()) {
        Ok(c64(z[0], z[1]))
    } else {
        Err(Error::Parse(format!("{field}: non-finite value")))
    }
}

impl ProblemFile {
    pub fn from_poly(q: &MatrixPoly2) -> Self {
        let c = q.coeffs();
        Self {
            n: q.n(),
            basis: q.basis().name().to_string(),
            nodes: q.nodes().map(|nd| NodesJson {
                alpha: [to_json_complex(nd.alpha1), to_json_complex(nd.alpha2)],
                beta: [to_json_complex(nd.beta1), to_json_complex(nd.beta2)],
            }),
            coefficients: CoefficientsJson {
                a20: matrix_to_json(&c[0]),
                a11: matrix_to_json(&c[1]),
                a02: matrix_to_json(&c[2]),
                a10: matrix_to_json(&c[3]),
                a01: matrix_to_json(&c[4]),
                a00: matrix_to_json(&c[5]),
            },
            pencil: None,
            provenance: None,
        }
    }

    pub fn poly(&self) -> Result<MatrixPoly2> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Parse("n: must be positive".into()));
        }
        let basis = match (self.basis.as_str(), &self.nodes) {
            ("monomial", None) => Basis::Monomial,
            ("monomial", Some(_)) => return Err(Error::Parse("nodes: only allowed with basis \"newton\"".into())),
            ("newton", Some(nd)) => Basis::Newton(
                NewtonNodes::new(
                    complex_from_json("nodes.alpha[0]", nd.alpha[0])?,
                    complex_from_json("nodes.alpha[1]", nd.alpha[1])?,
                    complex_from_json("nodes.beta[0]", nd.beta[0])?,
                    complex_from_json("nodes.beta[1]", nd.beta[1])?,
                )
                .map_err(|e| Error::Parse(format!("nodes: {e}")))?,
            ),
            ("newton", None) => return Err(Error::Parse("nodes: required with basis \"newton\"".into())),
            (other, _) => return Err(Error::Parse(format!("basis: expected \"monomial\" or \"newton\", found {other:?}"))),
        };
        let c = &self.coefficients;
        let m = |name: &str, d: &[JsonComplex]| matrix_from_json(&format!("coefficients.{name}"), n, n, d);
        MatrixPoly2::new(
            basis,
            [m("A20", &c.a20)?, m("A11", &c.a11)?, m("A02", &c.a02)?, m("A10", &c.a10)?, m("A01", &c.a01)?, m("A00", &c.a00)?],
        )
    }

    pub fn with_pencil(mut self, pencil: &AnyPencil) -> Self {
        let j = |m: &ComplexMatrix| Some(matrix_to_json(m));
        self.pencil = Some(match pencil {
            AnyPencil::Newton(p) => PencilJson { kind: "newton".into(), a1: j(&p.a1), a2: j(&p.a2), a3: j(&p.a3), l1: None, l2: None, l0: None },
            AnyPencil::Monomial(p) => PencilJson { kind: "monomial".into(), a1: None, a2: None, a3: None, l1: j(&p.l1), l2: j(&p.l2), l0: j(&p.l0) },
        });
        self
    }

    pub fn with_provenance(mut self, prov: &Provenance) -> Self {
        self.provenance = Some(ProvenanceJson {
            source: prov.source.clone(),
            ansatz: prov.ansatz.map(to_json_complex),
            m: prov.m.as_ref().map(matrix_to_json),
            e1_params: params_to_json(&prov.e1_params),
        });
        self
    }

    /// The pencil stored in the file, if any. Newton pencils take the file's nodes.
    pub fn pencil(&self) -> Result<Option<AnyPencil>> {
        let Some(p) = &self.pencil else { return Ok(None) };
        let k = 3 * self.n;
        let get = |name: &str, d: &Option<Vec<JsonComplex>>| -> Result<ComplexMatrix> {
            let d = d.as_ref().ok_or_else(|| Error::Parse(format!("pencil.{name}: missing")))?;
            matrix_from_json(&format!("pencil.{name}"), k, k, d)
        };
        match p.kind.as_str() {
            "newton" => {
                let q = self.poly()?;
                let nodes = *q.nodes().ok_or_else(|| Error::Parse("pencil.kind: \"newton\" needs a newton-basis file".into()))?;
                Ok(Some(AnyPencil::Newton(NewtonPencil::new(self.n, nodes, get("A1", &p.a1)?, get("A2", &p.a2)?, get("A3", &p.a3)?)?)))
            }
            "monomial" => Ok(Some(AnyPencil::Monomial(MonomialPencil::new(self.n, get("L1", &p.l1)?, get("L2", &p.l2)?, get("L0", &p.l0)?)?))),
            other => Err(Error::Parse(format!("pencil.kind: expected \"newton\" or \"monomial\", found {other:?}"))),
        }
    }

    pub fn provenance(&self) -> Result<Option<Provenance>> {
        let Some(p) = &self.provenance else { return Ok(None) };
        let ansatz = [
            complex_from_json("provenance.ansatz[0]", p.ansatz[0])?,
            complex_from_json("provenance.ansatz[1]", p.ansatz[1])?,
            complex_from_json("provenance.ansatz[2]", p.ansatz[2])?,
        ];
        let m = p.m.as_ref().map(|d| matrix_from_json("provenance.M", 3, 3, d)).transpose()?;
        Ok(Some(Provenance { source: p.source.clone(), ansatz, m, e1_params: params_from_json(&p.e1_params, self.n, "provenance.e1_params")? }))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

pub fn params_to_json(p: &E1FreeParams) -> ParamsJson {
    ParamsJson { y11: matrix_to_json(&p.y11), z1: matrix_to_json(&p.z1), z2: matrix_to_json(&p.z2) }
}

pub fn params_from_json(p: &ParamsJson, n: usize, field: &str) -> Result<E1FreeParams> {
    E1FreeParams::new(
        matrix_from_json(&format!("{field}.Y11"), n, n, &p.y11)?,
        matrix_from_json(&format!("{field}.Z1"), 3 * n, n, &p.z1)?,
        matrix_from_json(&format!("{field}.Z2"), 3 * n, n, &p.z2)?,
    )
}

/// Reads a standalone parameter file `{ "Y11": ..., "Z1": ..., "Z2": ... }`.
pub fn read_params(path: &Path, n: usize) -> Result<E1FreeParams> {
    let text = std::fs::read_to_string(path)?;
    let p: ParamsJson = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))?;
    params_from_json(&p, n, &path.display().to_string())
}
