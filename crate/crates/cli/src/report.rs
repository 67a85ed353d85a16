use num_complex::Complex64;
use serde_json::{Map, Number, Value};

pub const TOOL: &str = "holosemi";

/// A real number as a JSON token with 17 significant digits. Non-finite
/// values become the strings `inf`, `-inf` and `nan`.
pub fn num(x: f64) -> Value {
    if x.is_nan() {
        return Value::String("nan".into());
    }
    if x.is_infinite() {
        return Value::String(if x > 0.0 { "inf" } else { "-inf" }.into());
    }
    let token = format!("{x:.16e}");
    Value::Number(token.parse::<Number>().expect("formatted float is a JSON number"))
}

pub fn complex(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

pub fn complexes(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn opt<T>(v: Option<T>, f: impl FnOnce(T) -> Value) -> Value {
    v.map_or(Value::Null, f)
}

/// Ordered key/value builder for the `inputs` and `results` sections.
#[derive(Debug, Default, Clone)]
pub struct Fields(Map<String, Value>);

impl Fields {
    pub fn new() -> Self {
        Fields(Map::new())
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_string(), v.into());
        self
    }

    pub fn real(&mut self, key: &str, x: f64) -> &mut Self {
        self.set(key, num(x))
    }

    pub fn complex(&mut self, key: &str, z: Complex64) -> &mut Self {
        self.set(key, complex(z))
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub subcommand: &'static str,
    pub inputs: Fields,
    pub verdict: String,
    pub results: Fields,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut m = Map::new();
        m.insert("tool".into(), TOOL.into());
        m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        m.insert("subcommand".into(), self.subcommand.into());
        m.insert("inputs".into(), self.inputs.clone().into_value());
        m.insert("verdict".into(), self.verdict.clone().into());
        m.insert("results".into(), self.results.clone().into_value());
        m.insert("warnings".into(), self.warnings.clone().into());
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}: {}\n", self.subcommand, self.verdict);
        for (k, v) in self.results.iter() {
            s.push_str(&format!("  {k}: {}\n", render(v)));
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::Object(m) if m.len() == 2 && m.contains_key("re") && m.contains_key("im") => {
            let re = m["re"].as_f64().unwrap_or(f64::NAN);
            let im = m["im"].as_f64().unwrap_or(f64::NAN);
            let sign = if im.is_sign_negative() && im != 0.0 { '-' } else { '+' };
            format!("{re}{sign}{}i", im.abs())
        }
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), |x| format!("{x}")),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(render).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => {
            format!("{{{}}}", m.iter().map(|(k, v)| format!("{k}: {}", render(v))).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(-1.0).as_f64(), Some(-1.0));
        assert!(num(-1.0).to_string().starts_with("-1.0000000000000000e"));
        assert_eq!(num(f64::INFINITY), Value::String("inf".into()));
        assert_eq!(num(f64::NAN), Value::String("nan".into()));
        let x = 2.0f64.sqrt();
        assert_eq!(num(x).to_string().parse::<f64>().unwrap(), x);
    }

    #[test]
    fn envelope_has_fixed_key_order() {
        let mut results = Fields::new();
        results.real("x", 1.5).complex("z", Complex64::new(0.0, -1.0));
        let r = Report {
            subcommand: "eval",
            inputs: Fields::new(),
            verdict: "ok".into(),
            results,
            warnings: vec![],
        };
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["tool", "version", "subcommand", "inputs", "verdict", "results", "warnings"]);
        assert!(r.to_text().contains("z: 0-1i"));
    }
}
