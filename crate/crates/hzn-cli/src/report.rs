//! Machine-readable run reports. All numeric fields are printed with 17
//! significant digits so values round-trip through the text form; apart
//! from `wall_time_ms`, a report is byte-identical across runs with the
//! same argv and seed.

use serde::Serialize;

/// One labeled complex output with its error estimate.
#[derive(Debug, Clone, Serialize)]
pub struct LabeledValue {
    pub label: String,
    pub re: String,
    pub im: String,
    pub err: String,
}

/// Report emitted by every subcommand in `--json` mode.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<[String; 2]>,
    pub outputs: Vec<LabeledValue>,
    pub status: String,
    pub wall_time_ms: u128,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            status: "ok".to_string(),
            wall_time_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.push([key.to_string(), value.to_string()]);
    }

    pub fn output(&mut self, label: &str, value: hzn_core::Complex64, err: f64) {
        self.outputs.push(LabeledValue {
            label: label.to_string(),
            re: fmt17(value.re),
            im: fmt17(value.im),
            err: fmt17(err),
        });
    }

    pub fn fail(&mut self) {
        self.status = "failed".to_string();
    }

    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

/// 17-significant-digit scientific form (round-trip safe for f64).
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
