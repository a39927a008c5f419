//! Text and JSON renderings. JSON integers are decimal strings.

use betti_core::{CongruencePair, Element, Factorization, Ratio, Scalar};
use serde_json::{json, Value};

pub fn int<T: Scalar>(x: &T) -> Value {
    Value::String(x.to_string())
}

pub fn ints<T: Scalar>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn elem<T: Scalar>(e: &Element<T>) -> Value {
    ints(e.coords())
}

pub fn fact<T: Scalar>(u: &Factorization<T>) -> Value {
    ints(u.coords())
}

pub fn pair<T: Scalar>(p: &CongruencePair<T>) -> Value {
    json!({ "left": fact(&p.left), "right": fact(&p.right) })
}

pub fn ratio<T: Scalar>(r: &Ratio<T>) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// 1-based index lists.
pub fn indices(blocks: &[Vec<usize>]) -> Value {
    Value::Array(blocks.iter().map(|b| Value::Array(b.iter().map(|i| Value::String((i + 1).to_string())).collect())).collect())
}

/// Elements of `ℕ` print as plain numbers, others as tuples.
pub fn elem_text<T: Scalar>(e: &Element<T>) -> String {
    match e.coords() {
        [x] => x.to_string(),
        _ => e.to_string(),
    }
}

pub fn block_text(block: &[usize]) -> String {
    let items: Vec<String> = block.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

pub fn list_text<T: Scalar>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
