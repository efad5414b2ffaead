//! Command results, rendered either as JSON or as a plain report.

use memdp::rational::{fmt_rat, Decimal};
use memdp::Rat;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct CommandResult {
    pub command: String,
    pub argv: Vec<String>,
    pub inputs_digest: String,
    pub outputs: Value,
    /// Accuracy bound of the headline numbers; `"0/1"` when exact, null when
    /// a depth override forfeited the guarantee.
    pub accuracy: Option<String>,
    pub wall_time_ms: f64,
    pub warnings: Vec<String>,
}

/// `sha256` over every input file and the arguments, NUL separated.
pub fn digest(files: &[&[u8]], args: &[String]) -> String {
    let mut h = Sha256::new();
    for f in files {
        h.update(f);
        h.update([0u8]);
    }
    for a in args {
        h.update(a.as_bytes());
        h.update([0u8]);
    }
    let out = h.finalize();
    let hex: String = out.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// A number as `{"value": "num/den", "decimal": "0.xxxxxx", "accuracy": ...}`.
pub fn number(r: &Rat, accuracy: Option<&Rat>) -> Value {
    json!({
        "value": fmt_rat(r),
        "decimal": Decimal(r).to_string(),
        "accuracy": accuracy.map(fmt_rat),
    })
}

/// `2/3 (0.666667)`.
pub fn human(r: &Rat) -> String {
    format!("{r} ({})", Decimal(r))
}

pub fn accuracy_note(acc: Option<&Rat>) -> String {
    match acc {
        Some(a) if a == &Rat::from_integer(0.into()) => "exact".to_string(),
        Some(a) => format!("within {a}"),
        None => "no accuracy guarantee".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use memdp::rational::rat;

    #[test]
    fn number_shape() {
        let v = number(&rat(2, 3), Some(&rat(1, 100)));
        assert_eq!(v["value"], "2/3");
        assert_eq!(v["decimal"], "0.666667");
        assert_eq!(v["accuracy"], "1/100");
    }

    #[test]
    fn digest_depends_on_inputs() {
        let a = digest(&[b"x"], &["--eps".into(), "1/2".into()]);
        let b = digest(&[b"x"], &["--eps".into(), "1/3".into()]);
        assert_ne!(a, b);
        assert_eq!(a, digest(&[b"x"], &["--eps".into(), "1/2".into()]));
        assert!(a.starts_with("sha256:"));
    }
}
