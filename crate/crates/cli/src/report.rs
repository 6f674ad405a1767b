use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use stablepairs::Error;

/// One record per run.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 over the input files in argument order.
    pub input_digest: String,
    pub outputs: Map<String, Value>,
    pub states: Option<u64>,
    pub wall_ms: f64,
    /// `ok`, `resource-limit` or `error`.
    pub guard: String,
    pub exit_code: i32,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            input_digest: digest(&[]),
            outputs: Map::new(),
            states: None,
            wall_ms: 0.0,
            guard: "ok".into(),
            exit_code: 0,
            text: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.outputs.insert(key.to_string(), v.into());
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn fail(&mut self, e: &Error) {
        self.guard = match e {
            Error::Resource { .. } => "resource-limit",
            _ => "error",
        }
        .into();
        self.exit_code = 2;
        self.set("error", e.to_string());
        self.line(format!("error: {e}"));
    }

    pub fn json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for data in inputs {
        h.update((data.len() as u64).to_le_bytes());
        h.update(data);
    }
    format!("{:x}", h.finalize())
}
