//! Corpus fixtures: an input document plus an `"expected"` block.
//!
//! Recognized expectations (all optional, integers as numbers or strings,
//! generator indices 1-based):
//!
//! | key                     | value                                              |
//! |-------------------------|----------------------------------------------------|
//! | `betti`                 | list of elements                                   |
//! | `single_betti`          | bool                                               |
//! | `d`                     | element                                            |
//! | `factorizations_of_d`   | list of factorizations                             |
//! | `petals`                | list of index lists                                |
//! | `k`, `c`                | lists, generators ascending                        |
//! | `nu`                    | integer                                            |
//! | `presentation`          | list of `[left, right]` forming a minimal presentation |
//! | `circuits`              | list of `[left, right]`, compared up to swapping    |
//! | `circuits_equal_graver` | bool                                               |
//! | `gluing`                | `{"first": [...], "second": [...], "d": element}`  |
//! | `lengths`               | `{"element": e, "lengths": [...], "delta": [...]}` |
//! | `invariants`            | `{"elasticity": "7/2", "delta_max": null, ...}`    |

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use betti_core::domain::symmetric_closure;
use betti_core::invariants::lengths;
use betti_core::presentation::{first_unlinked_element, in_kernel_congruence};
use betti_core::{is_gluing, BigInt, Bipartition, Elem, Fact, Matrix, Pair};
use serde_json::Value;

use crate::input::{json_int_list, SemigroupInput};
use crate::render::ratio;
use crate::verify::{Check, Suite};
use crate::CliError;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub input: SemigroupInput,
    pub expected: Value,
}

impl Fixture {
    pub fn from_json_str(s: &str, fallback_name: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(s).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))?;
        let name = v.get("name").and_then(Value::as_str).unwrap_or(fallback_name).to_string();
        let mut stripped = v.clone();
        let obj = stripped.as_object_mut().ok_or_else(|| CliError::Parse("fixture must be an object".into()))?;
        let expected = obj.remove("expected").unwrap_or(Value::Object(Default::default()));
        obj.remove("name");
        Ok(Self { name, input: SemigroupInput::from_json(&stripped)?, expected })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("fixture");
        Self::from_json_str(&text, stem)
    }
}

/// Every `*.json` file in `dir`, by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<Fixture>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| Fixture::load(p)).collect()
}

fn elem(v: &Value) -> Result<Elem, CliError> {
    Ok(Elem::new(json_int_list(v)?))
}

fn fact(v: &Value) -> Result<Fact, CliError> {
    Ok(Fact::new(json_int_list(v)?))
}

fn list<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| CliError::Parse(format!("expected.{what} must be a list")))
}

fn pairs(v: &Value, what: &str) -> Result<BTreeSet<(Fact, Fact)>, CliError> {
    let mut out = Vec::new();
    for item in list(v, what)? {
        let two = list(item, what)?;
        if two.len() != 2 {
            return Err(CliError::Parse(format!("expected.{what} entries must be [left, right]")));
        }
        out.push(Pair::new_unchecked(fact(&two[0])?, fact(&two[1])?));
    }
    Ok(symmetric_closure(out.iter()))
}

fn blocks(v: &Value, what: &str) -> Result<Vec<Vec<usize>>, CliError> {
    list(v, what)?
        .iter()
        .map(|b| {
            json_int_list(b)?
                .iter()
                .map(|i| {
                    num_traits::ToPrimitive::to_usize(i)
                        .filter(|&i| i >= 1)
                        .map(|i| i - 1)
                        .ok_or_else(|| CliError::Parse(format!("bad index {i} in expected.{what}")))
                })
                .collect()
        })
        .collect()
}

fn opt_int(v: &Value) -> Result<Option<BigInt>, CliError> {
    match v {
        Value::Null => Ok(None),
        other => Ok(Some(json_int_list(&Value::Array(vec![other.clone()]))?.remove(0))),
    }
}

fn show<T: std::fmt::Debug>(x: &T) -> String {
    format!("{x:?}")
}

/// Compares the expectations against what the suite computed.
pub fn compare(a: &Matrix, expected: &Value, suite: &Suite<BigInt>) -> Result<Vec<Check>, CliError> {
    let facts = &suite.facts;
    let Some(obj) = expected.as_object() else {
        return Err(CliError::Parse("\"expected\" must be an object".into()));
    };
    let cert = facts.certificate.as_ref();
    let mut checks = Vec::new();
    let mut push = |key: &str, ok: bool, want: String, got: String| {
        let detail = if ok { String::new() } else { format!("expected {want}, computed {got}") };
        checks.push(Check::new(&format!("expected.{key}"), ok, detail));
    };
    for (key, v) in obj {
        match key.as_str() {
            "betti" => {
                let want: BTreeSet<Elem> = list(v, key)?.iter().map(elem).collect::<Result<_, _>>()?;
                let got = facts.betti.elements().clone();
                push(key, want == got, show(&want), show(&got));
            }
            "single_betti" => {
                let want = v.as_bool().ok_or_else(|| CliError::Parse("expected.single_betti must be a bool".into()))?;
                push(key, want == cert.is_some(), want.to_string(), cert.is_some().to_string());
            }
            "d" => {
                let want = elem(v)?;
                let got = cert.map(|c| c.d.clone());
                push(key, Some(&want) == got.as_ref(), show(&want), show(&got));
            }
            "factorizations_of_d" => {
                let want: BTreeSet<Fact> = list(v, key)?.iter().map(fact).collect::<Result<_, _>>()?;
                let got: Option<BTreeSet<Fact>> = cert.map(|c| c.zd.iter().cloned().collect());
                push(key, Some(&want) == got.as_ref(), show(&want), show(&got));
            }
            "petals" => {
                let want = blocks(v, key)?;
                let got = cert.map(|c| c.petals.clone());
                push(key, Some(&want) == got.as_ref(), show(&want), show(&got));
            }
            "k" | "c" => {
                let want = json_int_list(v)?;
                let w = cert.and_then(|c| c.numerical.as_ref());
                let got = w.map(|w| if key == "k" { w.k.clone() } else { w.c.clone() });
                push(key, Some(&want) == got.as_ref(), show(&want), show(&got));
            }
            "nu" => {
                let want = opt_int(v)?;
                let got = BigInt::from(facts.presentation.nu());
                push(key, want.as_ref() == Some(&got), show(&want), got.to_string());
            }
            "presentation" => {
                // Presentations are not unique: accept any list of the right
                // size whose pairs lie in the kernel and link every swept element.
                let given: Vec<Pair> = pairs(v, key)?
                    .into_iter()
                    .filter(|(l, r)| l < r)
                    .map(|(l, r)| Pair::new_unchecked(l, r))
                    .collect();
                let in_kernel = given.iter().all(|p| in_kernel_congruence(a, p).unwrap_or(false));
                let unlinked = first_unlinked_element(a, &given, facts.sweep.clone())?;
                let ok = in_kernel && unlinked.is_none() && given.len() == facts.presentation.nu();
                let got = format!(
                    "{} pairs for nu = {}, in kernel: {in_kernel}, first unlinked element: {unlinked:?}",
                    given.len(),
                    facts.presentation.nu()
                );
                push(key, ok, "a minimal presentation".into(), got);
            }
            "circuits" => {
                let want = pairs(v, key)?;
                let got = symmetric_closure(facts.circuits.iter());
                push(key, want == got, show(&want), show(&got));
            }
            "circuits_equal_graver" => {
                let want = v.as_bool().ok_or_else(|| CliError::Parse(format!("expected.{key} must be a bool")))?;
                let got = symmetric_closure(facts.circuits.iter()) == symmetric_closure(facts.graver.iter());
                push(key, want == got, want.to_string(), got.to_string());
            }
            "gluing" => {
                let first = blocks(&Value::Array(vec![v["first"].clone()]), key)?.remove(0);
                let second = blocks(&Value::Array(vec![v["second"].clone()]), key)?.remove(0);
                let d = elem(&v["d"])?;
                let part = Bipartition::new(a.cols(), first, second)?;
                let got = is_gluing(a, &part, &d)?;
                push(key, got, "a gluing".into(), "no gluing".into());
            }
            "lengths" => {
                let e = elem(&v["element"])?;
                let l = lengths(a, &e)?;
                let want = json_int_list(&v["lengths"])?;
                push("lengths.lengths", want == l.lengths(), show(&want), show(&l.lengths()));
                if let Some(dv) = v.get("delta") {
                    let want: BTreeSet<BigInt> = json_int_list(dv)?.into_iter().collect();
                    let got = l.delta();
                    push("lengths.delta", want == got, show(&want), show(&got));
                }
            }
            "invariants" => {
                let inv = &facts.invariants;
                let fields = v.as_object().ok_or_else(|| CliError::Parse("expected.invariants must be an object".into()))?;
                for (name, want) in fields {
                    let label = format!("invariants.{name}");
                    match name.as_str() {
                        "elasticity" => {
                            let w = want.as_str().unwrap_or_default().to_string();
                            let got = ratio(&inv.elasticity);
                            push(&label, w == got, w, got);
                        }
                        "delta_max" => {
                            let w = opt_int(want)?;
                            push(&label, w == inv.delta_max, show(&w), show(&inv.delta_max));
                        }
                        "catenary" | "omega" | "tame" => {
                            let w = opt_int(want)?;
                            let got = match name.as_str() {
                                "catenary" => &inv.catenary,
                                "omega" => &inv.omega,
                                _ => &inv.tame,
                            };
                            push(&label, w.as_ref() == Some(got), show(&w), got.to_string());
                        }
                        other => push(&label, false, "a known invariant".into(), format!("unknown key {other:?}")),
                    }
                }
            }
            other => push(other, false, "a known key".into(), format!("unknown key {other:?}")),
        }
    }
    Ok(checks)
}
