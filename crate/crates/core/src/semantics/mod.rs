//! Deterministic, fuel-bounded execution of programs over natural-number
//! states.

mod exec;
mod state;

pub use exec::{eval_fn, nats, run, run_from, trace, Executable, Fuel, Outcome, RunError, TraceEvent, Write};
pub use state::State;

impl TraceEvent {
    /// One JSON line: `{"step":n,"stmt":"…","writes":{"x0":…}}`.
    pub fn to_json_line(&self) -> String {
        let writes: serde_json::Map<String, serde_json::Value> = self
            .writes
            .iter()
            .map(|w| (w.var.to_string(), serde_json::to_value(&w.new).expect("nat serializes")))
            .collect();
        serde_json::json!({ "step": self.step, "stmt": self.stmt, "writes": writes }).to_string()
    }
}
