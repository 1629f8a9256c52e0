//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export takes plain arguments and returns a JSON string: the report
//! on success, `{"error": "..."}` otherwise.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use vqs::classify::{self, Kind, SquareClass};
use vqs::embedding;
use vqs::io::{self, CensusJson, ClassificationJson};
use vqs::iso_groups::{self, Semantics};
use vqs::Budget;

/// Caps sized for an interactive page.
fn budget() -> Budget {
    Budget { max_nodes: 5_000_000, max_ambient_dim: 6, max_q: 5, max_scan: 20_000 }
}

fn respond(result: Result<Value, String>) -> String {
    let v = result.unwrap_or_else(|e| json!({ "error": e }));
    serde_json::to_string_pretty(&v).expect("JSON value serializes")
}

/// Classifies the form in a form JSON document.
#[wasm_bindgen]
pub fn classify_form(text: &str) -> String {
    respond((|| {
        let parsed = io::parse_form(text).map_err(|e| e.to_string())?;
        let qs = parsed.quadratic_space();
        let report = classify::canonical_form(&qs, &budget()).map_err(|e| e.to_string())?;
        let mut v = serde_json::to_value(ClassificationJson::from(&report)).map_err(|e| e.to_string())?;
        v["canonical_text"] = json!(polynomial(&report.canonical));
        if !parsed.warnings.is_empty() {
            v["warnings"] = json!(parsed.warnings);
        }
        Ok(v)
    })())
}

/// Closed-formula group orders next to enumerated ones, when small enough.
/// `kind` is `"+"` or `"-"` for even `dim` and ignored otherwise.
#[wasm_bindgen]
pub fn group_orders(q: u32, dim: u32, kind: &str) -> String {
    respond((|| {
        let dim = dim as usize;
        let kind = match (dim % 2, kind) {
            _ if dim == 0 => return Err("dimension must be positive".into()),
            (1, _) => Kind::OddDim,
            (_, "+") => Kind::Plus,
            (_, "-") => Kind::Minus,
            _ => return Err(format!("type must be + or -, got {kind:?}")),
        };
        let semantics: &[Semantics] =
            if kind == Kind::OddDim { &[Semantics::Classical, Semantics::Virtual] } else { &[Semantics::Classical] };
        let mut rows = Vec::new();
        for &s in semantics {
            let formula = iso_groups::order_formula(q as u64, dim, kind, s).map_err(|e| e.to_string())?;
            let enumerated = match iso_groups::enumerate_cell(q as u64, dim, kind, s, &budget()) {
                Ok(n) => json!({ "value": n.to_string(), "match": formula == n.into() }),
                Err(e) => json!({ "skipped": e.to_string() }),
            };
            rows.push(json!({
                "semantics": s,
                "formula_value": formula.to_string(),
                "enumeration": enumerated,
            }));
        }
        let field = iso_groups::field_of_order(q as u64).map_err(|e| e.to_string())?;
        let form = classify::standard_form(&field, dim, kind, SquareClass::Square).map_err(|e| e.to_string())?;
        Ok(json!({
            "q": q,
            "dim": dim,
            "kind": kind,
            "form": polynomial(&form),
            "orders": rows,
        }))
    })())
}

/// Isometry classes among all `n`-dimensional forms over GF(q).
#[wasm_bindgen]
pub fn census(q: u32, n: u32) -> String {
    respond((|| {
        let field = iso_groups::field_of_order(q as u64).map_err(|e| e.to_string())?;
        let report = classify::class_census(&field, n as usize, &budget()).map_err(|e| e.to_string())?;
        let mut v = serde_json::to_value(CensusJson::from(&report)).map_err(|e| e.to_string())?;
        let reps: Vec<String> = report.classes.iter().map(|c| polynomial(&c.representative)).collect();
        v["representatives_text"] = json!(reps);
        Ok(v)
    })())
}

/// Minimal ambient space of a degenerate form, as a JSON document.
#[wasm_bindgen]
pub fn embed_form(text: &str) -> String {
    respond((|| {
        let qs = io::parse_form(text).map_err(|e| e.to_string())?.quadratic_space();
        let vqs = embedding::embed_ambient(&qs).map_err(|e| e.to_string())?;
        serde_json::to_value(io::VirtualSummary::new(&vqs)).map_err(|e| e.to_string())
    })())
}

/// `x1^2 + a*x1*x2 + ...` for display.
fn polynomial(qs: &vqs::QuadraticSpace) -> String {
    let f = qs.field();
    let var = |i: usize| format!("x{}", i + 1);
    let mut terms = Vec::new();
    for i in 0..qs.dim() {
        for j in i..qs.dim() {
            let c = qs.coeffs().get(i, j);
            if c.is_zero() {
                continue;
            }
            let mono = if i == j { format!("{}^2", var(i)) } else { format!("{}*{}", var(i), var(j)) };
            terms.push(if c == f.one() {
                mono
            } else {
                let coeff = f.format(c);
                if coeff.contains('+') {
                    format!("({coeff})*{mono}")
                } else {
                    format!("{coeff}*{mono}")
                }
            });
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_text() {
        let f = vqs::Field::new(2, 2, None).unwrap();
        let qs = vqs::QuadraticSpace::from_terms(&f, 2, &[(0, 0, vqs::Fe(1)), (0, 1, vqs::Fe(1)), (1, 1, vqs::Fe(3))])
            .unwrap();
        assert_eq!(polynomial(&qs), "x1^2 + x1*x2 + (a+1)*x2^2");
        assert_eq!(polynomial(&vqs::QuadraticSpace::from_ints(&f, &[&[0]]).unwrap()), "0");
    }
}
