use serde::Serialize;
use serde_json::{Map, Value};

/// One checked claim of a run.
#[derive(Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Report of one invocation. Maps serialize with sorted keys, so equal runs
/// give byte-identical output.
#[derive(Debug, Serialize)]
pub struct Report {
    pub verb: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub provenance: Map<String, Value>,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
}

impl Report {
    pub fn new(verb: impl Into<String>) -> Self {
        Report {
            verb: verb.into(),
            inputs: Map::new(),
            outputs: Map::new(),
            provenance: Map::new(),
            assertions: Vec::new(),
            passed: true,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        self.inputs.insert(key.into(), to_value(value));
    }

    pub fn output(&mut self, key: &str, value: impl Serialize) {
        self.outputs.insert(key.into(), to_value(value));
    }

    pub fn pin(&mut self, key: &str, value: impl Serialize) {
        self.provenance.insert(key.into(), to_value(value));
    }

    pub fn assert(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.passed &= passed;
        self.assertions.push(Assertion { name: name.into(), passed, detail: detail.into() });
        passed
    }

    /// Records `Ok` as a pass and `Err` as a failure carrying its message.
    pub fn assert_ok<T, E: std::fmt::Display>(&mut self, name: &str, r: Result<T, E>, ok: impl FnOnce(&T) -> String) -> Option<T> {
        match r {
            Ok(v) => {
                let d = ok(&v);
                self.assert(name, true, d);
                Some(v)
            }
            Err(e) => {
                self.assert(name, false, e.to_string());
                None
            }
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}
