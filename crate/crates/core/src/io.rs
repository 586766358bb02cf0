//! JSON documents for instances, allocations and sequences.
//!
//! All indices in documents are 1-based. Weights are JSON integers, exact
//! decimals, or `"p/q"` strings.
//!
//! ```json
//! {"agents": 2, "objects": 3, "weights": [[8, 2, 1], [5, 1, 5]]}
//! {"shares": [[1], [2, 3]]}
//! {"picks": [2, 1, 2]}
//! ```

use serde_json::{json, Value};

use crate::allocation::{Allocation, Sequence, Share};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::Rational;

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))
}

fn field<'a>(doc: &'a Value, name: &str) -> Result<&'a Value> {
    doc.get(name)
        .ok_or_else(|| Error::Parse(format!("missing field {name:?}")))
}

fn positive_count(doc: &Value, name: &str) -> Result<usize> {
    field(doc, name)?
        .as_u64()
        .filter(|&n| n > 0)
        .map(|n| n as usize)
        .ok_or_else(|| Error::Parse(format!("{name:?} must be a positive integer")))
}

fn index_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))?
        .iter()
        .map(|x| {
            x.as_u64()
                .filter(|&k| k >= 1)
                .map(|k| k as usize - 1)
                .ok_or_else(|| Error::Parse(format!("{what}: {x} is not a 1-based index")))
        })
        .collect()
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc = parse_json(text)?;
    let n = positive_count(&doc, "agents")?;
    let m = positive_count(&doc, "objects")?;
    let rows = field(&doc, "weights")?
        .as_array()
        .ok_or_else(|| Error::Parse("\"weights\" must be an array of rows".into()))?;
    if rows.len() != n {
        return Err(Error::Parse(format!(
            "\"weights\" has {} rows but \"agents\" is {n}",
            rows.len()
        )));
    }
    let mut weights = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse(format!("row {} is not an array", i + 1)))?;
        if row.len() != m {
            return Err(Error::Parse(format!(
                "row {} has {} weights but \"objects\" is {m}",
                i + 1,
                row.len()
            )));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(l, w)| {
                let r = Rational::try_from(w).map_err(|e| {
                    Error::Parse(format!("row {}, column {}: {e}", i + 1, l + 1))
                })?;
                if r.is_negative() {
                    return Err(Error::Parse(format!(
                        "row {}, column {}: negative weight {r}",
                        i + 1,
                        l + 1
                    )));
                }
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        weights.push(parsed);
    }
    Instance::new(weights)
}

fn rational_json(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        format!("\"{r}\"")
    }
}

/// Canonical single-line form; `parse_instance` reads it back unchanged.
pub fn serialize_instance(inst: &Instance) -> String {
    let rows: Vec<String> = inst
        .weights()
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(rational_json).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!(
        "{{\"agents\": {}, \"objects\": {}, \"weights\": [{}]}}",
        inst.num_agents(),
        inst.num_objects(),
        rows.join(", ")
    )
}

pub fn parse_allocation(text: &str, inst: &Instance) -> Result<Allocation> {
    let doc = parse_json(text)?;
    let shares = field(&doc, "shares")?
        .as_array()
        .ok_or_else(|| Error::Parse("\"shares\" must be an array".into()))?;
    if shares.len() != inst.num_agents() {
        return Err(Error::Parse(format!(
            "{} shares given for {} agents",
            shares.len(),
            inst.num_agents()
        )));
    }
    let shares = shares
        .iter()
        .enumerate()
        .map(|(i, s)| {
            index_list(s, &format!("share of agent {}", i + 1)).map(|v| v.into_iter().collect())
        })
        .collect::<Result<Vec<Share>>>()?;
    Allocation::from_shares(inst.num_objects(), &shares)
        .map_err(|e| Error::Parse(format!("invalid allocation: {e}")))
}

pub fn allocation_json(alloc: &Allocation) -> Value {
    json!({ "shares": shares_json(&alloc.shares()) })
}

pub fn shares_json(shares: &[Share]) -> Value {
    Value::Array(
        shares
            .iter()
            .map(|s| Value::Array(s.iter().map(|o| json!(o + 1)).collect()))
            .collect(),
    )
}

pub fn serialize_allocation(alloc: &Allocation) -> String {
    allocation_json(alloc).to_string()
}

/// Accepts `{"picks": [...]}` or a bare comma-separated list like `2,1,2`.
pub fn parse_sequence(text: &str) -> Result<Sequence> {
    let t = text.trim();
    let picks = if t.starts_with('{') {
        let doc = parse_json(t)?;
        index_list(field(&doc, "picks")?, "\"picks\"")?
    } else {
        t.split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k >= 1)
                    .map(|k| k - 1)
                    .ok_or_else(|| Error::Parse(format!("{p:?} is not a 1-based agent index")))
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(Sequence::new(picks))
}

pub fn sequence_json(seq: &Sequence) -> Value {
    json!({ "picks": seq.picks().iter().map(|a| a + 1).collect::<Vec<_>>() })
}

/// Exact `"p/q"` strings.
pub fn prices_json(prices: &[Rational]) -> Value {
    Value::Array(prices.iter().map(|p| json!(p.to_string())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::two_agent_tie;

    const TIE_DOC: &str = r#"{"agents": 2, "objects": 3, "weights": [[8, 2, 1], [5, 1, 5]]}"#;

    #[test]
    fn round_trip_is_identity() {
        let inst = parse_instance(TIE_DOC).unwrap();
        assert_eq!(inst, two_agent_tie());
        assert_eq!(serialize_instance(&inst), TIE_DOC);
        assert_eq!(inst.num_agents(), 2);
        assert_eq!(inst.num_objects(), 3);
    }

    #[test]
    fn fractional_weights_round_trip() {
        let doc = r#"{"agents": 1, "objects": 3, "weights": [["1/3", "0.25", 2]]}"#;
        let inst = parse_instance(doc).unwrap();
        assert_eq!(*inst.weight(0, 1), Rational::new(1, 4));
        let text = serialize_instance(&inst);
        assert_eq!(text, r#"{"agents": 1, "objects": 3, "weights": [["1/3", "1/4", 2]]}"#);
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn diagnostics_name_the_cell() {
        let neg = r#"{"agents": 1, "objects": 2, "weights": [[1, "-1"]]}"#;
        let err = parse_instance(neg).unwrap_err().to_string();
        assert!(err.contains("row 1, column 2"), "{err}");
        assert!(err.contains("negative"), "{err}");

        let ragged = r#"{"agents": 2, "objects": 2, "weights": [[1, 2], [3]]}"#;
        let err = parse_instance(ragged).unwrap_err().to_string();
        assert!(err.contains("row 2"), "{err}");

        assert!(matches!(parse_instance("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_instance(r#"{"agents": 0, "objects": 1, "weights": []}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn allocation_and_sequence_documents() {
        let inst = two_agent_tie();
        let a = parse_allocation(r#"{"shares": [[1], [2, 3]]}"#, &inst).unwrap();
        assert_eq!(a.to_string(), "<{1}, {2,3}>");
        assert_eq!(serialize_allocation(&a), r#"{"shares":[[1],[2,3]]}"#);
        assert!(parse_allocation(r#"{"shares": [[1], [2]]}"#, &inst).is_err());
        assert!(parse_allocation(r#"{"shares": [[1, 2], [2, 3]]}"#, &inst).is_err());
        assert!(parse_allocation(r#"{"shares": [[1, 2, 3]]}"#, &inst).is_err());

        let s = parse_sequence(r#"{"picks": [2, 1, 2]}"#).unwrap();
        assert_eq!(s, parse_sequence("2, 1,2").unwrap());
        assert_eq!(sequence_json(&s).to_string(), r#"{"picks":[2,1,2]}"#);
        assert!(parse_sequence("0,1").is_err());
    }
}
