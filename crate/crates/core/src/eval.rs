//! Precision/recall/F1 of predicted records against gold records.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{mode_label, EventRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalTask {
    Category,
    Mode,
    Context,
    GeolocationAdmin1,
}

impl FromStr for EvalTask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "category" => EvalTask::Category,
            "mode" => EvalTask::Mode,
            "context" => EvalTask::Context,
            "geolocation-admin1" | "admin1" => EvalTask::GeolocationAdmin1,
            _ => return Err(Error::Invalid(format!("unknown task `{s}`"))),
        })
    }
}

impl fmt::Display for EvalTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalTask::Category => "category",
            EvalTask::Mode => "mode",
            EvalTask::Context => "context",
            EvalTask::GeolocationAdmin1 => "geolocation-admin1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LabelMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
    pub predicted: usize,
}

impl LabelMetrics {
    /// Undefined ratios are reported as 0.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        LabelMetrics {
            precision,
            recall,
            f1,
            support: tp + fn_,
            predicted: tp + fp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Average {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Rows are gold labels, columns predicted labels.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: EvalTask,
    pub documents: usize,
    pub labels: BTreeMap<String, LabelMetrics>,
    pub macro_avg: Average,
    pub weighted_avg: Average,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confusion: Option<Confusion>,
    /// Gold locations with no predicted location, left out of the matrix.
    pub excluded: usize,
}

fn labels_of(task: EvalTask, r: &EventRecord) -> Vec<String> {
    match task {
        EvalTask::Category => vec![r.category.clone()],
        EvalTask::Mode => r
            .mode
            .as_ref()
            .map(|m| vec![mode_label(&r.category, m)])
            .unwrap_or_default(),
        EvalTask::Context => r.contexts.iter().cloned().collect(),
        EvalTask::GeolocationAdmin1 => Vec::new(),
    }
}

fn averages(labels: &BTreeMap<String, LabelMetrics>) -> (Average, Average) {
    let n = labels.len() as f64;
    let total: usize = labels.values().map(|m| m.support).sum();
    let mut mac = Average::default();
    let mut wtd = Average::default();
    for m in labels.values() {
        mac.precision += m.precision / n;
        mac.recall += m.recall / n;
        mac.f1 += m.f1 / n;
        if total > 0 {
            let w = m.support as f64 / total as f64;
            wtd.precision += m.precision * w;
            wtd.recall += m.recall * w;
            wtd.f1 += m.f1 * w;
        }
    }
    (mac, wtd)
}

/// Evaluate `predicted` against `gold`. The document universe is the set of
/// gold doc ids; predicted ids outside it are an error.
pub fn evaluate(predicted: &[EventRecord], gold: &[EventRecord], task: EvalTask) -> Result<EvalReport> {
    let universe: BTreeSet<&str> = gold.iter().map(|r| r.doc_id.as_str()).collect();
    let orphans: BTreeSet<&str> = predicted
        .iter()
        .map(|r| r.doc_id.as_str())
        .filter(|id| !universe.contains(id))
        .collect();
    if !orphans.is_empty() {
        return Err(Error::OrphanIds(orphans.into_iter().map(String::from).collect()));
    }
    if task == EvalTask::GeolocationAdmin1 {
        return Ok(evaluate_admin1(predicted, gold, universe.len()));
    }

    fn sets(rs: &[EventRecord], task: EvalTask) -> BTreeMap<&str, BTreeSet<String>> {
        let mut m: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
        for r in rs {
            m.entry(r.doc_id.as_str()).or_default().extend(labels_of(task, r));
        }
        m
    }
    let (p, g) = (sets(predicted, task), sets(gold, task));
    let empty = BTreeSet::new();
    let all: BTreeSet<&String> = p.values().chain(g.values()).flatten().collect();
    let mut labels = BTreeMap::new();
    for label in all {
        let (mut tp, mut fp, mut fn_) = (0, 0, 0);
        for id in &universe {
            let inp = p.get(id).unwrap_or(&empty).contains(label);
            let ing = g.get(id).unwrap_or(&empty).contains(label);
            match (inp, ing) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                _ => {}
            }
        }
        labels.insert(label.clone(), LabelMetrics::from_counts(tp, fp, fn_));
    }
    let (macro_avg, weighted_avg) = averages(&labels);
    Ok(EvalReport {
        task,
        documents: universe.len(),
        labels,
        macro_avg,
        weighted_avg,
        confusion: None,
        excluded: 0,
    })
}

type Key<'a> = (&'a str, &'a str, Option<&'a str>);

fn key(r: &EventRecord) -> Key<'_> {
    (r.doc_id.as_str(), r.category.as_str(), r.mode.as_deref())
}

fn evaluate_admin1(predicted: &[EventRecord], gold: &[EventRecord], documents: usize) -> EvalReport {
    let pred: BTreeMap<Key<'_>, &str> = predicted
        .iter()
        .filter_map(|r| r.resolutions.location.as_ref().map(|l| (key(r), l.admin1.as_str())))
        .collect();
    let mut pairs: Vec<(&str, &str)> = Vec::new();
    let mut excluded = 0;
    for g in gold {
        let Some(gl) = &g.resolutions.location else { continue };
        match pred.get(&key(g)) {
            Some(p) => pairs.push((gl.admin1.as_str(), p)),
            None => excluded += 1,
        }
    }
    let names: BTreeSet<&str> = pairs.iter().flat_map(|(a, b)| [*a, *b]).collect();
    let names: Vec<&str> = names.into_iter().collect();
    let idx = |s: &str| names.binary_search(&s).expect("label collected");
    let mut matrix = vec![vec![0usize; names.len()]; names.len()];
    for (g, p) in &pairs {
        matrix[idx(g)][idx(p)] += 1;
    }
    let mut labels = BTreeMap::new();
    for (i, n) in names.iter().enumerate() {
        let tp = matrix[i][i];
        let fn_ = matrix[i].iter().sum::<usize>() - tp;
        let fp = matrix.iter().map(|row| row[i]).sum::<usize>() - tp;
        labels.insert(n.to_string(), LabelMetrics::from_counts(tp, fp, fn_));
    }
    let (macro_avg, weighted_avg) = averages(&labels);
    EvalReport {
        task: EvalTask::GeolocationAdmin1,
        documents,
        labels,
        macro_avg,
        weighted_avg,
        confusion: Some(Confusion {
            labels: names.into_iter().map(String::from).collect(),
            matrix,
        }),
        excluded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, cat: &str) -> EventRecord {
        EventRecord::new(id, cat)
    }

    #[test]
    fn counts() {
        let m = LabelMetrics::from_counts(2, 1, 1);
        assert!((m.precision - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.recall - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-12);
        let z = LabelMetrics::from_counts(0, 0, 3);
        assert_eq!((z.precision, z.recall, z.f1, z.support), (0.0, 0.0, 0.0, 3));
    }

    #[test]
    fn identity_and_orphans() {
        let g = vec![rec("a", "PROTEST"), rec("b", "ASSAULT"), rec("b", "CONSULT")];
        let r = evaluate(&g, &g, EvalTask::Category).unwrap();
        assert!(r.labels.values().all(|m| m.f1 == 1.0));
        assert_eq!(r.macro_avg.f1, 1.0);
        match evaluate(&[rec("zz", "PROTEST")], &g, EvalTask::Category) {
            Err(Error::OrphanIds(ids)) => assert_eq!(ids, ["zz"]),
            other => panic!("{other:?}"),
        }
    }
}
