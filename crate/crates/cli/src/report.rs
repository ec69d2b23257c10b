use serde_json::{json, Map, Value};

use wb_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Finding,
    Error,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Finding => "finding",
            Verdict::Error => "error",
        }
    }

    pub fn pass_if(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// What every command prints: no timing, so identical inputs give
/// identical bytes.
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
    pub bounds: Value,
    pub result: Value,
    pub exit: u8,
}

impl Report {
    pub fn new(command: &str, inputs: Value, bounds: Value) -> Report {
        Report {
            command: command.to_string(),
            inputs,
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            bounds,
            result: Value::Null,
            exit: 0,
        }
    }

    pub fn finish(mut self, verdict: Verdict, result: Value) -> Report {
        self.exit = match verdict {
            Verdict::Pass | Verdict::Finding => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        };
        self.verdict = verdict;
        self.result = result;
        self
    }

    pub fn witness(mut self, w: Value) -> Report {
        if !w.is_null() {
            self.witnesses.push(w);
        }
        self
    }

    pub fn error(mut self, e: &Error) -> Report {
        self.exit = exit_code(e);
        self.verdict = if self.exit == 1 { Verdict::Fail } else { Verdict::Error };
        self.result = json!({"error": {"kind": error_kind(e), "message": e.to_string()}});
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "verdict": self.verdict.as_str(),
            "witnesses": self.witnesses,
            "bounds": self.bounds,
            "result": self.result,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.verdict.as_str());
        if let Value::Object(m) = &self.result {
            push_fields(&mut out, m);
        }
        for (k, w) in self.witnesses.iter().enumerate() {
            out.push_str(&format!("witness {k}: {w}\n"));
        }
        if let Value::Object(m) = &self.bounds {
            if !m.is_empty() {
                out.push_str("bounds:\n");
                for (k, v) in m {
                    out.push_str(&format!("  {k}: {v}\n"));
                }
            }
        }
        out
    }
}

fn push_fields(out: &mut String, m: &Map<String, Value>) {
    for (k, v) in m {
        match v {
            Value::String(s) => out.push_str(&format!("  {k}: {s}\n")),
            Value::Array(items) if items.iter().all(Value::is_string) && !items.is_empty() => {
                out.push_str(&format!("  {k}:\n"));
                for it in items {
                    out.push_str(&format!("    {}\n", it.as_str().unwrap_or_default()));
                }
            }
            _ => out.push_str(&format!("  {k}: {v}\n")),
        }
    }
}

/// 1 for negative mathematical answers, 3 for exhausted bounds, 2 for
/// everything the caller got wrong.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NoFactorizationSystem(_) | Error::NotStronglyConnected { .. } | Error::Invariant(_) => 1,
        Error::NoWitnessInBounds(_) | Error::SizeLimitExceeded { .. } | Error::DepthExhausted { .. } => 3,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvariantViolation(_) => "InvariantViolation",
        Error::SizeLimitExceeded { .. } => "SizeLimitExceeded",
        Error::BackendMismatch { .. } => "BackendMismatch",
        Error::Shape(_) => "Shape",
        Error::NonCommutingSquare => "NonCommutingSquare",
        Error::NoFactorizationSystem(_) => "NoFactorizationSystem",
        Error::NotStronglyConnected { .. } => "NotStronglyConnected",
        Error::Parse { .. } => "Parse",
        Error::ArityMismatch { .. } => "ArityMismatch",
        Error::UnknownOp(_) => "UnknownOp",
        Error::UnknownVar(_) => "UnknownVar",
        Error::UnboundVariable(_) => "UnboundVariable",
        Error::UncertifiedFamily { .. } => "UncertifiedFamily",
        Error::DepthExhausted { .. } => "DepthExhausted",
        Error::NoWitnessInBounds(_) => "NoWitnessInBounds",
        Error::Unsupported(_) => "Unsupported",
        Error::Invariant(_) => "Invariant",
    }
}
