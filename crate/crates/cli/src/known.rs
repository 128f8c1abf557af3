//! Reference-value mismatches that are understood and documented.

use serde::Deserialize;
use su3_forge::report::{DiscrepancyReport, Status};

use crate::doc::Discrepancy;

#[derive(Deserialize)]
struct Known {
    section: String,
    item: String,
    explanation: String,
}

const KNOWN: &str = include_str!("../fixtures/known_discrepancies.json");

fn known() -> Vec<Known> {
    serde_json::from_str(KNOWN).expect("well-formed known-discrepancy fixture")
}

/// Tags each entry with whether it is a documented discrepancy.
pub fn annotate(report: DiscrepancyReport) -> Vec<Discrepancy> {
    let table = known();
    report
        .entries
        .into_iter()
        .map(|entry| {
            let hit = table
                .iter()
                .find(|k| k.section == entry.section && k.item == entry.item);
            let documented = entry.status == Status::Mismatch && hit.is_some();
            let explanation = hit.map(|k| k.explanation.clone());
            Discrepancy {
                entry,
                documented,
                explanation,
            }
        })
        .collect()
}

/// Mismatches not covered by the fixture.
pub fn undocumented(list: &[Discrepancy]) -> usize {
    list.iter()
        .filter(|d| d.entry.status == Status::Mismatch && !d.documented)
        .count()
}
