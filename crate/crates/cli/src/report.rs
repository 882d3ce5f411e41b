use serde::Serialize;
use serde_json::Value;

/// Machine-readable record of one invocation. Contains no clock or host
/// data, so identical inputs give byte-identical output.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<&'static str>,
    pub config: Value,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str, config: Value, result: Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed: None,
            rng: None,
            config,
            result,
        }
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self.rng = Some(btprop_core::RNG_ALGORITHM);
        self
    }

    pub fn emit(&self) -> anyhow::Result<()> {
        println!("{}", serde_json::to_string_pretty(self)?);
        Ok(())
    }
}
