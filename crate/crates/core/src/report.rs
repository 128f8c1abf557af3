//! Audit reports comparing printed reference values with recomputations.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Match,
    Mismatch,
    /// Informational entry that is never counted as a failure.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub section: String,
    pub item: String,
    /// Reference value as printed, when one exists.
    pub printed: Option<Vec<f64>>,
    pub computed: Vec<f64>,
    pub deviation: f64,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ReportEntry {
    /// Compares `computed` against `printed` entry-wise with an absolute tolerance.
    pub fn compare(
        section: &str,
        item: impl Into<String>,
        printed: Vec<f64>,
        computed: Vec<f64>,
        tolerance: f64,
    ) -> Self {
        let deviation = if printed.len() == computed.len() {
            printed
                .iter()
                .zip(&computed)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        let status = if deviation <= tolerance {
            Status::Match
        } else {
            Status::Mismatch
        };
        Self {
            section: section.to_string(),
            item: item.into(),
            printed: Some(printed),
            computed,
            deviation,
            tolerance,
            status,
            note: None,
        }
    }

    /// Pass/fail check of a quantity that should vanish.
    pub fn check(section: &str, item: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        let status = if deviation <= tolerance {
            Status::Match
        } else {
            Status::Mismatch
        };
        Self {
            section: section.to_string(),
            item: item.into(),
            printed: None,
            computed: vec![deviation],
            deviation,
            tolerance,
            status,
            note: None,
        }
    }

    pub fn info(
        section: &str,
        item: impl Into<String>,
        computed: Vec<f64>,
        note: impl Into<String>,
    ) -> Self {
        Self {
            section: section.to_string(),
            item: item.into(),
            printed: None,
            computed,
            deviation: 0.0,
            tolerance: 0.0,
            status: Status::Info,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_mismatch(&self) -> bool {
        self.status == Status::Mismatch
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub entries: Vec<ReportEntry>,
}

impl DiscrepancyReport {
    pub fn push(&mut self, entry: ReportEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: DiscrepancyReport) {
        self.entries.extend(other.entries);
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.is_mismatch())
    }

    pub fn all_match(&self) -> bool {
        self.mismatches().next().is_none()
    }

    pub fn find(&self, item: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.item == item)
    }
}
