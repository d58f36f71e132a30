//! `symbol.v1`: JSON encoding of a circle symbol.
//!
//! ```text
//! {
//!   "schema": "symbol.v1",
//!   "rows": r, "cols": c, "order": m, "degree": D,
//!   "faces": {
//!     "plus":  [[k, [re, im, re, im, ...]], ...],
//!     "minus": [[k, [...]], ...]
//!   }
//! }
//! ```
//!
//! Each face lists its Fourier coefficients by frequency k; the matrix
//! entries are flattened row-major as real/imaginary pairs.

use serde::{Deserialize, Serialize};

use super::{CircleSymbol, Face};
use crate::error::{Error, Result};
use crate::numeric::{c64, CMat, TrigPoly};

pub const SYMBOL_SCHEMA: &str = "symbol.v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolDoc {
    pub schema: String,
    pub rows: usize,
    pub cols: usize,
    pub order: i32,
    pub degree: usize,
    pub faces: FacesDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacesDoc {
    pub plus: Vec<(i64, Vec<f64>)>,
    pub minus: Vec<(i64, Vec<f64>)>,
}

fn encode_face(p: &TrigPoly) -> Vec<(i64, Vec<f64>)> {
    p.terms()
        .map(|(k, m)| {
            let mut flat = Vec::with_capacity(2 * m.len());
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    flat.push(m[(i, j)].re);
                    flat.push(m[(i, j)].im);
                }
            }
            (k, flat)
        })
        .collect()
}

fn decode_face(rows: usize, cols: usize, table: &[(i64, Vec<f64>)]) -> Result<TrigPoly> {
    let mut terms = Vec::with_capacity(table.len());
    for (k, flat) in table {
        if flat.len() != 2 * rows * cols {
            return Err(Error::Structural(format!(
                "coefficient {k} has {} numbers, expected {}",
                flat.len(),
                2 * rows * cols
            )));
        }
        if flat.iter().any(|v| !v.is_finite()) {
            return Err(Error::Structural(format!("coefficient {k} is not finite")));
        }
        let m = CMat::from_fn(rows, cols, |i, j| {
            let at = 2 * (i * cols + j);
            c64(flat[at], flat[at + 1])
        });
        terms.push((*k, m));
    }
    TrigPoly::from_terms(rows, cols, terms)
}

pub fn to_doc(s: &CircleSymbol) -> SymbolDoc {
    SymbolDoc {
        schema: SYMBOL_SCHEMA.to_string(),
        rows: s.rows(),
        cols: s.cols(),
        order: s.order(),
        degree: s.degree(),
        faces: FacesDoc { plus: encode_face(s.face(Face::Plus)), minus: encode_face(s.face(Face::Minus)) },
    }
}

pub fn from_doc(doc: &SymbolDoc) -> Result<CircleSymbol> {
    if doc.schema != SYMBOL_SCHEMA {
        return Err(Error::Structural(format!("unknown symbol schema {:?}", doc.schema)));
    }
    let plus = decode_face(doc.rows, doc.cols, &doc.faces.plus)?;
    let minus = decode_face(doc.rows, doc.cols, &doc.faces.minus)?;
    CircleSymbol::new(doc.order, plus, minus)
}

pub fn symbol_to_json(s: &CircleSymbol) -> String {
    serde_json::to_string(&to_doc(s)).expect("symbol documents always serialize")
}

pub fn symbol_from_json(text: &str) -> Result<CircleSymbol> {
    let doc: SymbolDoc = serde_json::from_str(text).map_err(|e| Error::Structural(e.to_string()))?;
    from_doc(&doc)
}
