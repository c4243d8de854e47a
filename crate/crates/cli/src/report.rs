//! Check records and their rendering.

use std::fmt::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// What a check's outcome means for the run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Must pass; a failure makes the run fail.
    Theorem,
    /// Parameters outside a hypothesis; the outcome is recorded, never fatal.
    Probe,
    /// A regime no theorem covers; the outcome is recorded, never fatal.
    Conjectural,
    /// A walk step whose fiber is empty.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    /// Stable identifier `suite/item/name`, also the sort key.
    pub id: String,
    pub suite: String,
    pub name: String,
    /// The statement being exercised, in words.
    pub anchor: String,
    pub kind: Kind,
    /// SHA-256 prefix of the canonical text of the inputs.
    pub inputs: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<String>,
}

impl Check {
    pub fn fails_run(&self) -> bool {
        self.kind == Kind::Theorem && !self.pass
    }
}

/// Builder for the checks of one suite item.
pub struct Item {
    suite: &'static str,
    index: usize,
    inputs: String,
    checks: Vec<Check>,
}

impl Item {
    pub fn new(suite: &'static str, index: usize, inputs_text: &str) -> Self {
        Item {
            suite,
            index,
            inputs: digest(inputs_text),
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, anchor: &str, kind: Kind, expected: String, computed: String, pass: bool) -> &mut Check {
        let id = format!("{}/{:04}/{:02}-{}", self.suite, self.index, self.checks.len(), name);
        self.checks.push(Check {
            id,
            suite: self.suite.to_string(),
            name: name.to_string(),
            anchor: anchor.to_string(),
            kind,
            inputs: self.inputs.clone(),
            expected,
            computed,
            pass,
            context: None,
        });
        self.checks.last_mut().expect("just pushed")
    }

    /// A theorem check comparing two exact values by their text.
    pub fn eq<T: ToString>(&mut self, name: &str, anchor: &str, expected: T, computed: T) -> &mut Check {
        let (e, c) = (expected.to_string(), computed.to_string());
        let pass = e == c;
        self.push(name, anchor, Kind::Theorem, e, c, pass)
    }

    pub fn holds(&mut self, name: &str, anchor: &str, ok: bool) -> &mut Check {
        self.eq(name, anchor, true, ok)
    }

    /// An informational check: the outcome is recorded but never fails the run.
    pub fn record<T: ToString>(&mut self, name: &str, anchor: &str, kind: Kind, expected: T, computed: T) -> &mut Check {
        self.push(name, anchor, kind, expected.to_string(), computed.to_string(), true)
    }

    /// A failing check carrying an error raised while computing the item.
    pub fn error(&mut self, name: &str, anchor: &str, err: impl std::fmt::Display) -> &mut Check {
        self.push(name, anchor, Kind::Theorem, "no error".into(), format!("error: {err}"), false)
    }

    pub fn finish(self) -> Vec<Check> {
        self.checks
    }
}

/// First 16 hex digits of SHA-256.
pub fn digest(text: &str) -> String {
    let h = Sha256::digest(text.as_bytes());
    h.iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Exact polynomial text when short, otherwise a digest of it.
pub fn poly_value(text: &str) -> String {
    if text.len() <= 48 {
        text.to_string()
    } else {
        format!("sha256:{}", digest(text))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub probes: usize,
    pub conjectural: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub quiver: String,
    pub framing: Vec<usize>,
    pub epsilon: String,
    pub suites: Vec<String>,
    pub counts: Counts,
    pub checks: Vec<Check>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

impl Report {
    pub fn new(scenario: String, seed: u64, quiver: String, framing: Vec<usize>, epsilon: String, suites: Vec<String>, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let mut counts = Counts {
            total: checks.len(),
            ..Default::default()
        };
        for c in &checks {
            match c.kind {
                Kind::Theorem if c.pass => counts.passed += 1,
                Kind::Theorem => counts.failed += 1,
                Kind::Probe => counts.probes += 1,
                Kind::Conjectural => counts.conjectural += 1,
                Kind::Skipped => counts.skipped += 1,
            }
        }
        Report {
            scenario,
            seed,
            quiver,
            framing,
            epsilon,
            suites,
            counts,
            checks,
        }
    }

    pub fn failed(&self) -> bool {
        self.counts.failed > 0
    }

    pub fn checks_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name == name)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Structured => serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| Error::Serialize(e.to_string())),
            Format::Text => Ok(self.text()),
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario {} seed {}", self.scenario, self.seed);
        let _ = writeln!(s, "quiver {} framing {:?}", self.quiver, self.framing);
        let _ = writeln!(s, "epsilon {}", self.epsilon);
        let _ = writeln!(s, "suites {}", self.suites.join(","));
        for c in &self.checks {
            let status = match (c.kind, c.pass) {
                (Kind::Theorem, true) => "PASS",
                (Kind::Theorem, false) => "FAIL",
                (Kind::Probe, _) => "PROBE",
                (Kind::Conjectural, _) => "CONJ",
                (Kind::Skipped, _) => "SKIP",
            };
            let _ = write!(s, "{status} {} [{}] inputs={} expected={} computed={}", c.id, c.anchor, c.inputs, c.expected, c.computed);
            if let Some(ctx) = &c.context {
                let _ = write!(s, " at {ctx}");
            }
            s.push('\n');
        }
        let c = &self.counts;
        let _ = writeln!(
            s,
            "total {} passed {} failed {} probes {} conjectural {} skipped {}",
            c.total, c.passed, c.failed, c.probes, c.conjectural, c.skipped
        );
        s
    }
}
