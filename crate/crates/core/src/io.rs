//! JSON interchange: form documents in, reports out.
//!
//! A form document is
//!
//! ```json
//! {"field": {"p": 2, "d": 2, "modulus": [1, 1, 1]},
//!  "dim": 3,
//!  "coeffs": [[0, 1, 0], [0, 0, 0], [0, 0, 1]],
//!  "subspace": [[1, 0, 0], [0, 1, 0]]}
//! ```
//!
//! `coeffs` is the upper-triangular coefficient matrix; `subspace` (basis
//! rows of `U`) turns the document into a virtual quadratic space. Field
//! elements are written as their packed index, or as a coefficient list
//! (constant term first). Output uses integers for prime fields and
//! coefficient lists otherwise. Group orders are decimal strings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{CensusReport, ClassificationReport, Kind, SquareClass};
use crate::embedding::MinimalDecomposition;
use crate::field::{Fe, Field, FieldSpec};
use crate::iso_groups::{GroupOrderReport, Semantics, SurjectivityReport, VerifyStatus};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::quad::{QuadraticSpace, VirtualQuadraticSpace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRepr {
    Index(u64),
    Coeffs(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    pub field: FieldSpec,
    pub dim: usize,
    pub coeffs: Vec<Vec<ElemRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<Vec<Vec<ElemRepr>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error("validation error: {0}")]
    Validation(String),
}

fn field_err(path: impl Into<String>, message: impl ToString) -> ParseError {
    ParseError::Field { path: path.into(), message: message.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedForm {
    Plain(QuadraticSpace),
    Virtual(VirtualQuadraticSpace),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub form: ParsedForm,
    pub warnings: Vec<String>,
}

impl Parsed {
    /// The quadratic space: the form itself, or `Q|_U` for a virtual space.
    pub fn quadratic_space(&self) -> QuadraticSpace {
        match &self.form {
            ParsedForm::Plain(q) => q.clone(),
            ParsedForm::Virtual(v) => v.restricted_form(),
        }
    }
}

pub fn elem_repr(f: &Field, x: Fe) -> ElemRepr {
    if f.degree() == 1 {
        ElemRepr::Index(x.index() as u64)
    } else {
        ElemRepr::Coeffs(f.coeffs(x))
    }
}

fn parse_elem(f: &Field, e: &ElemRepr, path: &str) -> Result<Fe, ParseError> {
    match e {
        ElemRepr::Index(i) => f.element(*i).map_err(|err| field_err(path, err)),
        ElemRepr::Coeffs(cs) => f.from_coeffs(cs).map_err(|err| field_err(path, err)),
    }
}

fn parse_rows(f: &Field, rows: &[Vec<ElemRepr>], cols: usize, name: &str) -> Result<Vec<Vector>, ParseError> {
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            if row.len() != cols {
                return Err(field_err(format!("{name}[{r}]"), format!("expected {cols} entries, found {}", row.len())));
            }
            row.iter().enumerate().map(|(c, e)| parse_elem(f, e, &format!("{name}[{r}][{c}]"))).collect()
        })
        .collect()
}

pub fn parse_form(text: &str) -> Result<Parsed, ParseError> {
    let doc: FormDoc = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_doc(&doc)
}

pub fn from_doc(doc: &FormDoc) -> Result<Parsed, ParseError> {
    let field = Field::from_spec(&doc.field).map_err(|e| field_err("field", e))?;
    let n = doc.dim;
    if doc.coeffs.len() != n {
        return Err(field_err("coeffs", format!("expected {n} rows, found {}", doc.coeffs.len())));
    }
    let rows = parse_rows(&field, &doc.coeffs, n, "coeffs")?;
    for (r, row) in rows.iter().enumerate() {
        if let Some(c) = (0..r).find(|&c| !row[c].is_zero()) {
            return Err(field_err(
                format!("coeffs[{r}][{c}]"),
                format!("nonzero entry below the diagonal at (row {r}, col {c})"),
            ));
        }
    }
    let qs = QuadraticSpace::new(Matrix::from_rows(&field, n, &rows).map_err(|e| field_err("coeffs", e))?)
        .map_err(|e| field_err("coeffs", e))?;
    let Some(sub_rows) = &doc.subspace else {
        return Ok(Parsed { form: ParsedForm::Plain(qs), warnings: Vec::new() });
    };
    let vectors = parse_rows(&field, sub_rows, n, "subspace")?;
    let u = Subspace::from_vectors(&field, n, &vectors).map_err(|e| field_err("subspace", e))?;
    let mut warnings = Vec::new();
    if u.basis_vectors() != vectors {
        warnings.push("subspace basis re-canonicalized to reduced row-echelon form".to_string());
    }
    if !qs.is_nondegenerate() {
        return Err(ParseError::Validation("ambient not non-degenerate".into()));
    }
    let vqs = VirtualQuadraticSpace::new(qs, u).map_err(|e| ParseError::Validation(e.to_string()))?;
    Ok(Parsed { form: ParsedForm::Virtual(vqs), warnings })
}

pub fn matrix_repr(m: &Matrix) -> Vec<Vec<ElemRepr>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|&x| elem_repr(m.field(), x)).collect()).collect()
}

pub fn subspace_repr(s: &Subspace) -> Vec<Vec<ElemRepr>> {
    matrix_repr(s.basis())
}

pub fn form_doc(qs: &QuadraticSpace) -> FormDoc {
    FormDoc { field: qs.field().spec(), dim: qs.dim(), coeffs: matrix_repr(qs.coeffs()), subspace: None }
}

pub fn virtual_doc(vqs: &VirtualQuadraticSpace) -> FormDoc {
    FormDoc { subspace: Some(subspace_repr(vqs.subspace())), ..form_doc(vqs.ambient()) }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationJson {
    pub field: FieldSpec,
    pub dim: usize,
    pub char_parity: &'static str,
    pub canonical_kind: Kind,
    pub witt_index: usize,
    pub canonical_coeffs: Vec<Vec<ElemRepr>>,
    pub transform: Vec<Vec<ElemRepr>>,
    pub basis: Vec<Vec<ElemRepr>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_used: Option<ElemRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square_class: Option<SquareClass>,
}

impl From<&ClassificationReport> for ClassificationJson {
    fn from(r: &ClassificationReport) -> Self {
        ClassificationJson {
            field: r.field.spec(),
            dim: r.dim,
            char_parity: if r.char_is_even() { "even" } else { "odd" },
            canonical_kind: r.kind,
            witt_index: r.witt_index,
            canonical_coeffs: matrix_repr(r.canonical.coeffs()),
            transform: matrix_repr(&r.transform),
            basis: matrix_repr(&r.basis),
            e_used: r.e_used.map(|e| elem_repr(&r.field, e)),
            square_class: r.square_class,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionJson {
    pub n_sub: Vec<Vec<ElemRepr>>,
    pub m_sub: Vec<Vec<ElemRepr>>,
    pub sigma: Vec<Vec<ElemRepr>>,
    pub n_tilde: Vec<Vec<ElemRepr>>,
    pub m_hat: Vec<Vec<ElemRepr>>,
    pub vm: Vec<Vec<ElemRepr>>,
    pub dim_u: usize,
    pub dim_n: usize,
    pub dim_vm: usize,
    pub u_within_u_perp: bool,
}

impl DecompositionJson {
    pub fn new(d: &MinimalDecomposition, dim_u: usize) -> Self {
        DecompositionJson {
            n_sub: subspace_repr(&d.n_sub),
            m_sub: subspace_repr(&d.m_sub),
            sigma: subspace_repr(&d.sigma),
            n_tilde: subspace_repr(&d.n_tilde),
            m_hat: subspace_repr(&d.m_hat),
            vm: subspace_repr(&d.vm),
            dim_u,
            dim_n: d.n_sub.dim(),
            dim_vm: d.vm.dim(),
            u_within_u_perp: d.u_within_u_perp,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VirtualSummary {
    pub virtual_space: FormDoc,
    pub dim_u: usize,
    pub dim_v: usize,
    pub dim_n: usize,
    pub minimal: bool,
    pub nondegenerate: bool,
    pub u_perp: Vec<Vec<ElemRepr>>,
}

impl VirtualSummary {
    pub fn new(vqs: &VirtualQuadraticSpace) -> Self {
        VirtualSummary {
            virtual_space: virtual_doc(vqs),
            dim_u: vqs.dim(),
            dim_v: vqs.ambient().dim(),
            dim_n: vqs.isotropic_part().dim(),
            minimal: vqs.is_minimal(),
            nondegenerate: vqs.is_nondegenerate(),
            u_perp: subspace_repr(&vqs.u_perp()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupOrderJson {
    pub q: u64,
    pub dim: usize,
    pub k: usize,
    pub epsilon: Option<i8>,
    pub kind: Kind,
    pub semantics: Semantics,
    pub formula_value: String,
    pub enumerated_value: Option<String>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    #[serde(flatten)]
    pub status: VerifyStatus,
}

impl From<&GroupOrderReport> for GroupOrderJson {
    fn from(r: &GroupOrderReport) -> Self {
        GroupOrderJson {
            q: r.q,
            dim: r.dim,
            k: r.k,
            epsilon: r.epsilon(),
            kind: r.kind,
            semantics: r.semantics,
            formula_value: r.formula_value.to_string(),
            enumerated_value: r.enumerated_value.map(|v| v.to_string()),
            matches: r.matches(),
            status: r.status.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusClassJson {
    pub kind: Kind,
    pub witt_index: usize,
    pub forms: String,
    pub representative: Vec<Vec<ElemRepr>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub by_square_class: Vec<(SquareClass, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusJson {
    pub field: FieldSpec,
    pub q: u32,
    pub n: usize,
    pub total_forms: String,
    pub trivial_radical_forms: String,
    pub class_count: usize,
    pub expected_class_count: usize,
    pub classes: Vec<CensusClassJson>,
}

impl From<&CensusReport> for CensusJson {
    fn from(r: &CensusReport) -> Self {
        CensusJson {
            field: r.field.spec(),
            q: r.field.order(),
            n: r.dim,
            total_forms: r.total_forms.to_string(),
            trivial_radical_forms: r.trivial_radical_forms.to_string(),
            class_count: r.classes.len(),
            expected_class_count: r.expected_classes,
            classes: r
                .classes
                .iter()
                .map(|c| CensusClassJson {
                    kind: c.kind,
                    witt_index: c.witt_index,
                    forms: c.forms.to_string(),
                    representative: matrix_repr(c.representative.coeffs()),
                    by_square_class: c.by_square_class.iter().map(|(k, v)| (*k, v.to_string())).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurjectivityJson {
    pub virtual_order: String,
    pub image_order: String,
    pub kernel_order: String,
    pub iso_u_order: String,
    pub surjective: bool,
}

impl From<&SurjectivityReport> for SurjectivityJson {
    fn from(r: &SurjectivityReport) -> Self {
        SurjectivityJson {
            virtual_order: r.virtual_order.to_string(),
            image_order: r.image_order.to_string(),
            kernel_order: r.kernel_order.to_string(),
            iso_u_order: r.iso_u_order.to_string(),
            surjective: r.surjective,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_form() {
        let p = parse_form(r#"{"field": {"p": 2, "d": 1}, "dim": 2, "coeffs": [[1, 1], [0, 1]]}"#).unwrap();
        let ParsedForm::Plain(q) = p.form else { panic!() };
        assert_eq!(q.dim(), 2);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn rejects_lower_entries_with_location() {
        let err = parse_form(r#"{"field": {"p": 3, "d": 1}, "dim": 2, "coeffs": [[1, 0], [2, 1]]}"#).unwrap_err();
        match err {
            ParseError::Field { path, .. } => assert_eq!(path, "coeffs[1][0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_degenerate_ambient() {
        let err = parse_form(
            r#"{"field": {"p": 2, "d": 1}, "dim": 3, "coeffs": [[0,1,0],[0,0,0],[0,0,1]], "subspace": [[1,0,0]]}"#,
        )
        .unwrap_err();
        assert_eq!(err, ParseError::Validation("ambient not non-degenerate".into()));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_form("{\"field\": {\"p\": 2,\n \"d\": }").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn recanonicalizes_subspace_with_warning() {
        let p = parse_form(r#"{"field": {"p": 3, "d": 1}, "dim": 2, "coeffs": [[0,1],[0,0]], "subspace": [[2,0]]}"#)
            .unwrap();
        assert_eq!(p.warnings.len(), 1);
        let ParsedForm::Virtual(v) = p.form else { panic!() };
        assert_eq!(v.subspace().basis_vectors(), vec![vec![Fe(1), Fe(0)]]);
    }

    #[test]
    fn extension_field_elements() {
        let text = r#"{"field": {"p": 2, "d": 2}, "dim": 1, "coeffs": [[[0, 1]]]}"#;
        let q = parse_form(text).unwrap().quadratic_space();
        assert_eq!(q.coeffs().get(0, 0), Fe(2));
        let doc = form_doc(&q);
        assert_eq!(doc.coeffs, vec![vec![ElemRepr::Coeffs(vec![0, 1])]]);
        let again = from_doc(&doc).unwrap().quadratic_space();
        assert_eq!(again, q);
    }
}
