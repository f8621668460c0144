use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use modeq::double_eta::ParamSet;
use modeq::format::{from_json, to_json, JsonCoeff};
use modeq::numeric::{NumericReport, Quotient};
use modeq::ModEqPoly;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// The function an equation annihilates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Function {
    Kiepert { p: u64 },
    DoubleEta { params: ParamSet },
}

impl Function {
    pub fn quotient(&self) -> Quotient {
        match self {
            Function::Kiepert { p } => Quotient::Weber { p: *p },
            Function::DoubleEta { params } => Quotient::DoubleEta {
                p1: params.p1,
                p2: params.p2,
                e: params.e,
            },
        }
    }

    pub fn variable(&self) -> &'static str {
        match self {
            Function::Kiepert { .. } => "X",
            Function::DoubleEta { .. } => "F",
        }
    }

    fn slug(&self) -> String {
        match self {
            Function::Kiepert { p } => format!("kiepert-{p}"),
            Function::DoubleEta { params } => format!("double-eta-{}-{}-e{}", params.p1, params.p2, params.e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Direct,
    Crt,
}

/// An equation as stored in the cache and emitted with `--format json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationRecord {
    pub label: String,
    /// The equation vanishes at `sign * f`.
    pub sign: i64,
    pub theorem_sign: i64,
    pub function: Function,
    pub variable: String,
    pub equation: Vec<JsonCoeff>,
    pub verification: Option<NumericReport>,
    pub engine: Engine,
    #[serde(default)]
    pub primes_used: Vec<u64>,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl EquationRecord {
    pub fn new(function: Function, eq: &ModEqPoly<BigInt>, sign: i64, theorem_sign: i64, engine: Engine) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        EquationRecord {
            label: eq.label.clone(),
            sign,
            theorem_sign,
            variable: function.variable().to_string(),
            function,
            equation: to_json(eq),
            verification: None,
            engine,
            primes_used: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }

    pub fn equation(&self) -> modeq::Result<ModEqPoly<BigInt>> {
        from_json(&self.equation, &self.label)
    }

    pub fn cache_path(dir: &Path, function: &Function, engine: Engine) -> PathBuf {
        let suffix = match engine {
            Engine::Direct => "",
            Engine::Crt => "-crt",
        };
        dir.join(format!("{}{suffix}.json", function.slug()))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn store(&self, path: &Path) -> Result<(), String> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        }
        let text = serde_json::to_string_pretty(self).map_err(|e| e.to_string())?;
        fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use modeq::double_eta::derive_params;
    use modeq::format::parse_text;

    #[test]
    fn record_round_trips() {
        let eq = parse_text("F^4 - 123456789012345678901234567890*G2*G3*J^2*F + 16", "F").unwrap();
        let params = derive_params(2, 2, None).unwrap();
        let rec = EquationRecord::new(Function::DoubleEta { params }, &eq, 1, 1, Engine::Crt);
        let text = serde_json::to_string(&rec).unwrap();
        assert!(text.contains("\"-123456789012345678901234567890\""));
        let back: EquationRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.equation().unwrap().coeffs, eq.coeffs);
    }
}
