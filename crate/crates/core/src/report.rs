//! JSON encodings shared by the reports.

use serde_json::{json, Value};

use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::module::Module;

pub const SCHEMA: &str = "1";

pub fn matrix_json<F: Scalar>(m: &Matrix<F>) -> Value {
    let rows: Vec<Value> = (0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(|x| x.to_json()).collect())).collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": rows })
}

pub fn vector_json<F: Scalar>(v: &[F]) -> Value {
    Value::Array(v.iter().map(|x| x.to_json()).collect())
}

/// Dimension and the actions of the algebra basis elements.
pub fn module_json<F: Scalar>(m: &Module<F>) -> Value {
    let a = m.algebra();
    let actions: Vec<Value> = (0..a.dim()).map(|b| json!({ "element": a.label(b), "matrix": matrix_json(m.action(b)) })).collect();
    json!({ "dim": m.dim(), "actions": actions })
}
