use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One named check with its outcome and, when it fails, the refuting objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    /// sha256 over the arguments and the bytes of every input file.
    pub inputs_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub verdicts: Vec<Verdict>,
    /// Free-form result lines: summaries, matrices, emitted formulas.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub output: Vec<String>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for line in &self.output {
            let _ = writeln!(s, "{line}");
        }
        for v in &self.verdicts {
            let _ = write!(
                s,
                "{:<16} {}",
                v.check,
                if v.pass { "PASS" } else { "FAIL" }
            );
            if let Some(w) = &v.witness {
                let _ = write!(s, "  {w}");
            }
            s.push('\n');
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed {seed}");
        }
        let _ = writeln!(s, "inputs sha256 {}", self.inputs_digest);
        s
    }
}

/// Accumulates verdicts and output lines for one command.
pub struct Builder {
    pub verdicts: Vec<Verdict>,
    pub output: Vec<String>,
    pub seed: Option<u64>,
}

impl Builder {
    pub fn new() -> Builder {
        Builder {
            verdicts: Vec::new(),
            output: Vec::new(),
            seed: None,
        }
    }

    pub fn check(&mut self, check: impl Into<String>, witness: Option<String>) {
        self.verdicts.push(Verdict {
            check: check.into(),
            pass: witness.is_none(),
            witness,
        });
    }

    pub fn line(&mut self, line: impl Into<String>) {
        self.output.push(line.into());
    }

    pub fn finish(self, command: &str, digest: String, elapsed: Duration) -> Report {
        Report {
            command: command.to_string(),
            inputs_digest: digest,
            seed: self.seed,
            verdicts: self.verdicts,
            output: self.output,
            elapsed_ms: elapsed.as_secs_f64() * 1e3,
        }
    }
}

pub fn digest<'a>(args: &[String], files: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update(a.as_bytes());
        h.update([0]);
    }
    for f in files {
        h.update((f.len() as u64).to_le_bytes());
        h.update(f);
    }
    hex::encode(h.finalize())
}
