//! Aggregation of benchmark runs into rule-by-scheme summary tables.
//!
//! Each cell reports how a (rule, scheme) configuration did across a set of
//! instances, measured against the per-instance reference: the best
//! makespan any configuration in the record set achieved on that instance.
//! A cell shows `count (avg%)`: the number of instances where the
//! configuration matched the reference, and its mean relative excess over
//! the reference in percent. A `BEST` row aggregates, per scheme, the best
//! rule result on each instance.

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use crate::model::Time;
use crate::rules::RuleKind;
use crate::sgs::SgsKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub instance: String,
    pub kind: SgsKind,
    pub rule: RuleKind,
    pub makespan: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("no records")]
    Empty,
    #[error("duplicate record for {instance}/{kind}/{rule}")]
    Duplicate {
        instance: String,
        kind: SgsKind,
        rule: RuleKind,
    },
    #[error("missing record for {instance}/{kind}/{rule}")]
    MissingCell {
        instance: String,
        kind: SgsKind,
        rule: RuleKind,
    },
    #[error("instance {instance} has reference makespan 0")]
    ZeroReference { instance: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportTables {
    pub instances: usize,
    pub csv: String,
    pub markdown: String,
}

struct Cell {
    hits: usize,
    avg_pct: f64,
}

impl Cell {
    fn render(&self) -> String {
        format!("{} ({:.2}%)", self.hits, self.avg_pct)
    }
}

fn aggregate(instances: &[String], refs: &HashMap<&str, Time>, get: impl Fn(&str) -> Time) -> Cell {
    let mut hits = 0;
    let mut pct_sum = 0.0;
    for name in instances {
        let reference = refs[name.as_str()];
        let got = get(name);
        if got == reference {
            hits += 1;
        }
        pct_sum += 100.0 * f64::from(got - reference) / f64::from(reference);
    }
    Cell {
        hits,
        avg_pct: pct_sum / instances.len() as f64,
    }
}

/// Builds the CSV and Markdown tables. The records must form a complete
/// grid: one entry for every (instance, scheme, rule) combination of the
/// instances, schemes, and rules that appear anywhere in the set. Rows and
/// columns follow the canonical rule and scheme order, instances enter the
/// aggregates in sorted name order, so equal inputs give byte-equal tables.
pub fn build_report(records: &[RunRecord]) -> Result<ReportTables, ReportError> {
    if records.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut grid: HashMap<(&str, SgsKind, RuleKind), Time> = HashMap::new();
    for r in records {
        if grid.insert((r.instance.as_str(), r.kind, r.rule), r.makespan).is_some() {
            return Err(ReportError::Duplicate {
                instance: r.instance.clone(),
                kind: r.kind,
                rule: r.rule,
            });
        }
    }
    let mut instances: Vec<String> = records.iter().map(|r| r.instance.clone()).collect();
    instances.sort_unstable();
    instances.dedup();
    let kinds: Vec<SgsKind> = SgsKind::ALL
        .into_iter()
        .filter(|k| records.iter().any(|r| r.kind == *k))
        .collect();
    let rules: Vec<RuleKind> = RuleKind::ALL
        .into_iter()
        .filter(|p| records.iter().any(|r| r.rule == *p))
        .collect();
    for name in &instances {
        for &kind in &kinds {
            for &rule in &rules {
                if !grid.contains_key(&(name.as_str(), kind, rule)) {
                    return Err(ReportError::MissingCell {
                        instance: name.clone(),
                        kind,
                        rule,
                    });
                }
            }
        }
    }
    let mut refs: HashMap<&str, Time> = HashMap::new();
    for name in &instances {
        let mut best = Time::MAX;
        for &k in &kinds {
            for &p in &rules {
                best = best.min(grid[&(name.as_str(), k, p)]);
            }
        }
        if best == 0 {
            return Err(ReportError::ZeroReference {
                instance: name.clone(),
            });
        }
        refs.insert(name.as_str(), best);
    }

    let mut rows: Vec<(String, Vec<String>)> = Vec::with_capacity(rules.len() + 1);
    for &rule in &rules {
        let cells = kinds
            .iter()
            .map(|&kind| {
                aggregate(&instances, &refs, |name| grid[&(name, kind, rule)]).render()
            })
            .collect();
        rows.push((rule.to_string(), cells));
    }
    let best_cells = kinds
        .iter()
        .map(|&kind| {
            aggregate(&instances, &refs, |name| {
                rules
                    .iter()
                    .map(|&p| grid[&(name, kind, p)])
                    .min()
                    .expect("at least one rule")
            })
            .render()
        })
        .collect();
    rows.push(("BEST".to_string(), best_cells));

    let mut csv = String::from("rule");
    for kind in &kinds {
        write!(csv, ",{kind}").unwrap();
    }
    csv.push('\n');
    for (label, cells) in &rows {
        write!(csv, "{label}").unwrap();
        for cell in cells {
            write!(csv, ",{cell}").unwrap();
        }
        csv.push('\n');
    }

    let mut markdown = String::from("| rule |");
    for kind in &kinds {
        write!(markdown, " {kind} |").unwrap();
    }
    markdown.push('\n');
    markdown.push_str("| --- |");
    for _ in &kinds {
        markdown.push_str(" --- |");
    }
    markdown.push('\n');
    for (label, cells) in &rows {
        write!(markdown, "| {label} |").unwrap();
        for cell in cells {
            write!(markdown, " {cell} |").unwrap();
        }
        markdown.push('\n');
    }

    Ok(ReportTables {
        instances: instances.len(),
        csv,
        markdown,
    })
}
