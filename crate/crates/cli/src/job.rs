//! `--job file.json`: a JSON job description replayed as command-line arguments.
//!
//! ```json
//! {"command": "flow", "generator": "0,-1", "space": "hardy",
//!  "options": {"z0": "0.5", "t": 1, "numeric": true}}
//! ```
//!
//! `generator` may also be a list of numbers, `[re, im]` pairs or strings;
//! `space` may be a name or `{"custom": [β₀, β₁, …]}`.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;
use semiflow_core::space::WeightSequence;

use crate::parse::format_complex;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: String,
    #[serde(default)]
    pub generator: Option<Coefficients>,
    #[serde(default)]
    pub space: Option<Space>,
    #[serde(default)]
    pub options: serde_json::Map<String, Value>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Coefficients {
    Text(String),
    List(Vec<Coefficient>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Real(f64),
    Pair([f64; 2]),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Space {
    Name(String),
    Weights(WeightSequence),
}

impl Coefficients {
    fn to_arg(&self) -> String {
        match self {
            Self::Text(s) => s.clone(),
            Self::List(items) => items
                .iter()
                .map(|c| match c {
                    Coefficient::Real(x) => x.to_string(),
                    Coefficient::Pair([re, im]) => format_complex(Complex64::new(*re, *im)),
                    Coefficient::Text(s) => s.clone(),
                })
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

impl Space {
    fn to_arg(&self) -> String {
        match self {
            Self::Name(s) => s.clone(),
            Self::Weights(WeightSequence::Custom(w)) => {
                let values: Vec<String> = w.values().iter().map(f64::to_string).collect();
                format!("custom:{}", values.join(","))
            }
            Self::Weights(w) => w.name().to_string(),
        }
    }
}

fn flag(key: &str) -> String {
    let key = key.replace('_', "-");
    if key.chars().count() == 1 {
        format!("-{key}")
    } else {
        format!("--{key}")
    }
}

fn scalar(key: &str, v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(format!("option {key:?} must be a string or number")),
    }
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed job file: {e}"))
    }

    /// Argument vector equivalent to the job, program name included.
    pub fn to_args(&self, program: &str) -> Result<Vec<String>, String> {
        let mut args = vec![program.to_string(), self.command.clone()];
        if let Some(g) = &self.generator {
            args.push(String::from("-G"));
            args.push(g.to_arg());
        }
        if let Some(space) = &self.space {
            args.push(String::from("--space"));
            args.push(space.to_arg());
        }
        for (key, value) in &self.options {
            match value {
                Value::Null | Value::Bool(false) => {}
                Value::Bool(true) => args.push(flag(key)),
                Value::Array(items) => {
                    let parts = items.iter().map(|v| scalar(key, v)).collect::<Result<Vec<_>, _>>()?;
                    args.push(flag(key));
                    args.push(parts.join(","));
                }
                Value::Object(_) => return Err(format!("option {key:?} must not be an object")),
                other => {
                    args.push(flag(key));
                    args.push(scalar(key, other)?);
                }
            }
        }
        Ok(args)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replays_as_arguments() {
        let job = JobSpec::parse(
            r#"{"command":"flow","generator":[0,[-1,0.5],"2i"],"space":{"custom":[1,0.5]},
                "options":{"z0":"0.5","t":1,"numeric":true,"rtol":1e-9,"quiet":false}}"#,
        )
        .unwrap();
        let args = job.to_args("semiflow").unwrap();
        assert_eq!(
            args,
            [
                "semiflow", "flow", "-G", "0,-1+0.5i,2i", "--space", "custom:1,0.5", "--numeric", "--rtol", "1e-9",
                "-t", "1", "--z0", "0.5"
            ]
        );
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(JobSpec::parse(r#"{"command":"check","bogus":1}"#).is_err());
        assert!(JobSpec::parse("not json").is_err());
    }
}
