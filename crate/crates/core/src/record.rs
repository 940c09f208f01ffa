//! Line-delimited JSON output records. Fields are written in a fixed order
//! and reals with four decimals, so identical runs give identical bytes.

use std::fmt::Write as _;

use crate::eval::RecommendationScore;
use crate::miner::Rule;
use crate::seqdb::Item;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(u64),
    /// Printed with four decimals; non-finite values print as `null`.
    Real(f64),
    Str(String),
    Items(Vec<Item>),
    Bool(bool),
    Null,
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Value::Null, Value::Real)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl From<&[Item]> for Value {
    fn from(v: &[Item]) -> Self {
        Value::Items(v.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    fields: Vec<(&'static str, Value)>,
}

fn quote(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("string serialization"));
}

impl Record {
    /// A record whose first field is `"type": kind`.
    pub fn new(kind: &str) -> Self {
        Record {
            fields: vec![("type", Value::from(kind))],
        }
    }

    pub fn field(mut self, name: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((name, value.into()));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| *k == name).map(|(_, v)| v)
    }

    pub fn to_line(&self) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            quote(&mut out, k);
            out.push(':');
            match v {
                Value::Int(n) => write!(out, "{n}").unwrap(),
                Value::Real(x) if x.is_finite() => write!(out, "{x:.4}").unwrap(),
                Value::Real(_) | Value::Null => out.push_str("null"),
                Value::Bool(b) => write!(out, "{b}").unwrap(),
                Value::Str(s) => quote(&mut out, s),
                Value::Items(items) => {
                    out.push('[');
                    for (j, it) in items.iter().enumerate() {
                        if j > 0 {
                            out.push(',');
                        }
                        quote(&mut out, it.as_str());
                    }
                    out.push(']');
                }
            }
        }
        out.push('}');
        out
    }
}

pub fn rule_record(rule: &Rule) -> Record {
    Record::new("rule")
        .field("antecedent", rule.antecedent.items())
        .field("gap", rule.antecedent.gap().to_string())
        .field("consequent", rule.consequent.as_slice())
        .field("support", rule.support)
        .field("confidence", rule.confidence)
}

pub fn pattern_record(items: &[Item], support: usize) -> Record {
    Record::new("pattern").field("items", items).field("support", support)
}

pub fn stat_record(name: &str, value: impl Into<Value>) -> Record {
    Record::new("stat").field("name", name).field("value", value)
}

pub fn metric_record(score: &RecommendationScore) -> Record {
    Record::new("metric")
        .field("tp", score.tp)
        .field("fp", score.fp)
        .field("fn", score.false_negatives)
        .field("precision", score.precision)
        .field("recall", score.recall)
        .field("f1", score.f1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqdb::{GapConstraint, Pattern};

    #[test]
    fn rule_line() {
        let gap = GapConstraint::new(0, 3).unwrap();
        let rule = Rule {
            antecedent: Pattern::from_chars("ad", gap).unwrap(),
            consequent: vec![Item::from('c'), Item::from('d')],
            support: 3,
            confidence: 0.75,
        };
        assert_eq!(
            rule_record(&rule).to_line(),
            r#"{"type":"rule","antecedent":["a","d"],"gap":"[0,3]","consequent":["c","d"],"support":3,"confidence":0.7500}"#
        );
    }

    #[test]
    fn metric_line_with_undefined_values() {
        let s = RecommendationScore::from_counts(0, 0, 0);
        assert_eq!(
            metric_record(&s).to_line(),
            r#"{"type":"metric","tp":0,"fp":0,"fn":0,"precision":null,"recall":null,"f1":null}"#
        );
    }

    #[test]
    fn escaping() {
        let r = stat_record("we\"ird\n", Value::Items(vec![Item::new("a\\b").unwrap()]));
        assert_eq!(r.to_line(), r#"{"type":"stat","name":"we\"ird\n","value":["a\\b"]}"#);
        assert_eq!(stat_record("x", f64::NAN).to_line(), r#"{"type":"stat","name":"x","value":null}"#);
    }
}
