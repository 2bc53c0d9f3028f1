//! The verification report produced by every decision procedure.
//!
//! The machine-readable form is JSON:
//! `{"verdict", "k", "certificate": [[word, setIndex], ..], "witness": [word, ..]}`
//! plus optional `oracleMinimal`, `checks` and `details`. Words are written
//! outermost map first.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The depth is certified but not claimed to be minimal.
    HoldsWithSoundBound,
}

impl Verdict {
    pub fn is_success(self) -> bool {
        !matches!(self, Verdict::Fails)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::HoldsWithSoundBound => "holds-with-sound-bound",
        }
    }
}

/// A word and the index of the covering set containing its image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry(pub Vec<i64>, pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub k: Option<u64>,
    pub certificate: Vec<CertificateEntry>,
    pub witness: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_minimal: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
}

pub(crate) fn word_i64(word: &[usize]) -> Vec<i64> {
    word.iter().map(|&i| i as i64).collect()
}

impl VerificationReport {
    pub fn holds(k: u64, certificate: Vec<CertificateEntry>) -> Self {
        Self::new(Verdict::Holds, Some(k), certificate, Vec::new())
    }

    pub fn fails(witness: Vec<Vec<i64>>) -> Self {
        Self::new(Verdict::Fails, None, Vec::new(), witness)
    }

    pub fn new(
        verdict: Verdict,
        k: Option<u64>,
        certificate: Vec<CertificateEntry>,
        witness: Vec<Vec<i64>>,
    ) -> Self {
        Self {
            verdict,
            k,
            certificate,
            witness,
            oracle_minimal: None,
            checks: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: impl ToString) -> Self {
        self.details.insert(key.to_string(), value.to_string());
        self
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            passed,
        });
    }

    /// Human-readable rendering; certificates longer than `max_entries` are
    /// elided.
    pub fn to_text(&self, max_entries: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        if let Some(k) = self.k {
            let _ = writeln!(out, "k: {k}");
        }
        if let Some(m) = self.oracle_minimal {
            let _ = writeln!(out, "oracle-minimal: {m}");
        }
        for (key, value) in &self.details {
            let _ = writeln!(out, "{key}: {value}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "[{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name);
        }
        if !self.certificate.is_empty() {
            let _ = writeln!(out, "certificate ({} words):", self.certificate.len());
            for CertificateEntry(word, set) in self.certificate.iter().take(max_entries) {
                let _ = writeln!(out, "  {} -> set {set}", fmt_word(word));
            }
            if self.certificate.len() > max_entries {
                let _ = writeln!(out, "  ... {} more", self.certificate.len() - max_entries);
            }
        }
        for w in &self.witness {
            let _ = writeln!(out, "witness: {}", fmt_word(w));
        }
        out
    }
}

pub fn fmt_word(word: &[i64]) -> String {
    let letters: Vec<String> = word.iter().map(i64::to_string).collect();
    format!("({})", letters.join(","))
}
