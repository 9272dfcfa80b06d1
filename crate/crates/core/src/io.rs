//! JSON file formats for matrices, matrix-unit families, decompositions and
//! certificates.
//!
//! A matrix is `{"field": {"type": "Fp", "p": 5} | {"type": "Q"}, "n": 4,
//! "entries": [[...], ...]}` with residues `0..p` as integers and rationals as
//! strings `"num/den"` (or `"num"`).

use num_bigint::BigInt;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::lattice::Idempotent;
use crate::matricial::{MatricialDecomposition, MatrixUnitFamily};
use crate::matrix::Matrix;
use crate::width::{Certificate, CornerUnit, StageRecord};

/// Field descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum FieldSpec {
    /// `F_p`.
    Fp {
        /// The prime.
        p: u32,
    },
    /// The rationals.
    Q,
}

/// Square matrix record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    /// Coefficient field.
    pub field: FieldSpec,
    /// Side length.
    pub n: usize,
    /// Row-major entries.
    pub entries: Vec<Vec<Value>>,
}

/// Locally-special stage record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageFile {
    /// `e_i`.
    pub e: MatrixFile,
    /// `f_i`.
    pub f: MatrixFile,
    /// `a_i`.
    pub a: MatrixFile,
    /// `b_i`.
    pub b: MatrixFile,
    /// `v_i`.
    pub v: MatrixFile,
    /// `u_i`.
    pub u: MatrixFile,
}

/// Corner unit record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CornerFile {
    /// Support idempotent.
    pub e: MatrixFile,
    /// Ambient matrix.
    pub matrix: MatrixFile,
}

/// Certificate record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    /// `"four-involutions"`, `"commutator"` or `"locally-special"`.
    pub kind: String,
    /// The factored matrix.
    pub target: MatrixFile,
    /// Factors of the involution and commutator kinds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<MatrixFile>>,
    /// Original input of a lifted commutator certificate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<MatrixFile>,
    /// Number of locally-special stages.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Locally-special stages.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<Vec<StageFile>>,
    /// `e_{t+1}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<MatrixFile>,
    /// Residual corner unit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<CornerFile>,
}

/// Matrix-unit family record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    /// Inner size.
    pub d: usize,
    /// `Σ s_ii`.
    pub identity: MatrixFile,
    /// Units `s_ij` in row-major order.
    pub units: Vec<MatrixFile>,
}

/// Block of a matricial decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockFile {
    /// Irreducible factor, coefficients from the constant term up.
    pub irreducible: Vec<Value>,
    /// Human-readable form of the irreducible factor.
    pub polynomial: String,
    /// Exponent of the factor.
    pub exponent: usize,
    /// Inner size of the block's matrix algebra.
    pub inner_size: usize,
    /// Number of cyclic summands.
    pub multiplicity: usize,
    /// Block idempotent.
    pub idempotent: MatrixFile,
    /// Coordinates of the element in the block's family.
    pub coordinates: MatrixFile,
    /// The block's matrix units.
    pub family: FamilyFile,
}

/// Matricial decomposition record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    /// The decomposed element.
    pub element: MatrixFile,
    /// Its blocks.
    pub blocks: Vec<BlockFile>,
}

impl FieldSpec {
    /// Descriptor of a field.
    pub fn of(field: Field) -> Self {
        match field {
            Field::Prime(p) => FieldSpec::Fp { p },
            Field::Rationals => FieldSpec::Q,
        }
    }

    /// The described field, validating the prime.
    pub fn field(&self) -> Result<Field> {
        match self {
            FieldSpec::Fp { p } => Field::prime(*p),
            FieldSpec::Q => Ok(Field::Rationals),
        }
    }
}

/// JSON value of a scalar: an integer residue or a `"num/den"` string.
pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Fp(x) => Value::from(*x),
        Scalar::Q(_) => Value::from(s.to_string()),
    }
}

fn parse_bigint(text: &str) -> Result<BigInt> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid integer {text:?}")))
}

/// Scalar from its JSON value.
pub fn scalar_from_json(field: Field, v: &Value) -> Result<Scalar> {
    match field {
        Field::Prime(p) => {
            let x = v
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("entry {v} is not a residue")))?;
            if x >= u64::from(p) {
                return Err(Error::Parse(format!("entry {x} is not in 0..{p}")));
            }
            Ok(Scalar::Fp(x as u32))
        }
        Field::Rationals => {
            let text = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
                _ => return Err(Error::Parse(format!("entry {v} is not a rational"))),
            };
            let (num, den) = match text.split_once('/') {
                Some((a, b)) => (parse_bigint(a)?, parse_bigint(b)?),
                None => (parse_bigint(&text)?, BigInt::from(1)),
            };
            field.from_fraction(&num, &den)
        }
    }
}

/// `"num/den"`, or `"num"` for integers.
pub fn rational_to_string(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl MatrixFile {
    /// Record of a square matrix.
    pub fn of(m: &Matrix) -> Self {
        assert!(m.is_square(), "the matrix format holds square matrices");
        MatrixFile {
            field: FieldSpec::of(m.field()),
            n: m.n(),
            entries: m
                .to_rows()
                .iter()
                .map(|r| r.iter().map(scalar_to_json).collect())
                .collect(),
        }
    }

    /// The described matrix, validating shape and entries.
    pub fn matrix(&self) -> Result<Matrix> {
        let field = self.field.field()?;
        if self.entries.len() != self.n {
            return Err(Error::Parse(format!(
                "expected {} rows, got {}",
                self.n,
                self.entries.len()
            )));
        }
        let mut rows = Vec::with_capacity(self.n);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::Parse(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    self.n
                )));
            }
            rows.push(
                row.iter()
                    .map(|v| scalar_from_json(field, v))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        if self.n == 0 {
            return Ok(Matrix::zeros(field, 0, 0));
        }
        Ok(Matrix::from_rows(field, rows))
    }
}

fn decode<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Parses a matrix file.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    decode::<MatrixFile>(text)?.matrix()
}

/// Serializes a matrix file.
pub fn write_matrix(m: &Matrix) -> String {
    to_pretty(&MatrixFile::of(m))
}

impl FamilyFile {
    /// Record of a family.
    pub fn of(f: &MatrixUnitFamily) -> Self {
        FamilyFile {
            d: f.d(),
            identity: MatrixFile::of(f.identity().matrix()),
            units: f.units().iter().map(MatrixFile::of).collect(),
        }
    }

    /// The described family, checking the axioms.
    pub fn family(&self) -> Result<MatrixUnitFamily> {
        let identity = Idempotent::new(self.identity.matrix()?)?;
        let units = self
            .units
            .iter()
            .map(MatrixFile::matrix)
            .collect::<Result<Vec<_>>>()?;
        MatrixUnitFamily::new(identity, self.d, units)
    }
}

impl DecompositionFile {
    /// Record of a decomposition.
    pub fn of(dec: &MatricialDecomposition) -> Self {
        DecompositionFile {
            element: MatrixFile::of(&dec.element),
            blocks: dec
                .blocks
                .iter()
                .map(|b| BlockFile {
                    irreducible: b.irreducible.coeffs().iter().map(scalar_to_json).collect(),
                    polynomial: b.irreducible.to_string(),
                    exponent: b.exponent,
                    inner_size: b.family.d(),
                    multiplicity: b.multiplicity(),
                    idempotent: MatrixFile::of(b.idempotent.matrix()),
                    coordinates: MatrixFile::of(&b.coordinates),
                    family: FamilyFile::of(&b.family),
                })
                .collect(),
        }
    }
}

impl CertificateFile {
    /// Record of a certificate.
    pub fn of(c: &Certificate) -> Self {
        let mut out = CertificateFile {
            kind: c.kind().to_string(),
            target: MatrixFile::of(c.target()),
            factors: None,
            source: None,
            depth: None,
            stages: None,
            tail: None,
            residual: None,
        };
        match c {
            Certificate::FourInvolutions { factors, .. } => {
                out.factors = Some(factors.iter().map(MatrixFile::of).collect());
            }
            Certificate::Commutator { x, y, source, .. } => {
                out.factors = Some(vec![MatrixFile::of(x), MatrixFile::of(y)]);
                out.source = source.as_ref().map(MatrixFile::of);
            }
            Certificate::LocallySpecial {
                stages,
                tail,
                residual,
                ..
            } => {
                out.depth = Some(stages.len());
                out.stages = Some(
                    stages
                        .iter()
                        .map(|s| StageFile {
                            e: MatrixFile::of(&s.e),
                            f: MatrixFile::of(&s.f),
                            a: MatrixFile::of(&s.a),
                            b: MatrixFile::of(&s.b),
                            v: MatrixFile::of(&s.v),
                            u: MatrixFile::of(&s.u),
                        })
                        .collect(),
                );
                out.tail = Some(MatrixFile::of(tail));
                out.residual = Some(CornerFile {
                    e: MatrixFile::of(residual.e().matrix()),
                    matrix: MatrixFile::of(residual.matrix()),
                });
            }
        }
        out
    }

    /// The described certificate. Only the shape is checked here; the
    /// relations are checked by [`crate::width::verify_certificate`].
    pub fn certificate(&self) -> Result<Certificate> {
        let target = self.target.matrix()?;
        let missing = |what: &str| Error::Parse(format!("{} certificate lacks {what}", self.kind));
        let factors = || -> Result<Vec<Matrix>> {
            self.factors
                .as_ref()
                .ok_or_else(|| missing("factors"))?
                .iter()
                .map(MatrixFile::matrix)
                .collect()
        };
        match self.kind.as_str() {
            "four-involutions" => {
                let fs: [Matrix; 4] = factors()?
                    .try_into()
                    .map_err(|_| Error::Parse("four-involutions needs exactly 4 factors".into()))?;
                Ok(Certificate::FourInvolutions {
                    target,
                    factors: fs,
                })
            }
            "commutator" => {
                let [x, y]: [Matrix; 2] = factors()?
                    .try_into()
                    .map_err(|_| Error::Parse("commutator needs exactly 2 factors".into()))?;
                let source = self.source.as_ref().map(MatrixFile::matrix).transpose()?;
                Ok(Certificate::Commutator {
                    target,
                    x,
                    y,
                    source,
                })
            }
            "locally-special" => {
                let stages = self
                    .stages
                    .as_ref()
                    .ok_or_else(|| missing("stages"))?
                    .iter()
                    .map(|s| {
                        Ok(StageRecord {
                            e: s.e.matrix()?,
                            f: s.f.matrix()?,
                            a: s.a.matrix()?,
                            b: s.b.matrix()?,
                            v: s.v.matrix()?,
                            u: s.u.matrix()?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if let Some(d) = self.depth {
                    if d != stages.len() {
                        return Err(Error::Parse(format!(
                            "depth {d} but {} stages",
                            stages.len()
                        )));
                    }
                }
                let tail = self
                    .tail
                    .as_ref()
                    .ok_or_else(|| missing("tail"))?
                    .matrix()?;
                let res = self.residual.as_ref().ok_or_else(|| missing("residual"))?;
                let e = Idempotent::new(res.e.matrix()?)
                    .map_err(|_| Error::Parse("residual support is not idempotent".into()))?;
                let residual = CornerUnit::new(e, res.matrix.matrix()?).map_err(|_| {
                    Error::Parse("residual is not supported on its idempotent".into())
                })?;
                Ok(Certificate::LocallySpecial {
                    target,
                    stages,
                    tail,
                    residual,
                })
            }
            other => Err(Error::Parse(format!("unknown certificate kind {other:?}"))),
        }
    }
}

/// Parses a certificate file.
pub fn parse_certificate(text: &str) -> Result<Certificate> {
    decode::<CertificateFile>(text)?.certificate()
}

/// Serializes a certificate file.
pub fn write_certificate(c: &Certificate) -> String {
    to_pretty(&CertificateFile::of(c))
}

/// Parses a matrix-unit family file.
pub fn parse_family(text: &str) -> Result<MatrixUnitFamily> {
    decode::<FamilyFile>(text)?.family()
}
