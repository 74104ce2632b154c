use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::RlError;

/// One logged agent transition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionRecord {
    pub episode: usize,
    pub step: usize,
    pub state: String,
    pub action: String,
    pub reward: f64,
    pub rm_state: usize,
    /// Change case that triggered a goal decision, if any.
    pub case: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeReport {
    pub episode: usize,
    pub steps: usize,
    pub total_reward: f64,
    pub epsilon: f64,
    pub metrics: BTreeMap<String, f64>,
    pub transitions: Vec<TransitionRecord>,
}

/// Writes every transition of `reports` as one JSON object per line.
pub fn write_jsonl<W: Write>(reports: &[EpisodeReport], mut out: W) -> Result<(), RlError> {
    for r in reports {
        for t in &r.transitions {
            serde_json::to_writer(&mut out, t)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Mean of `metric` over reports that carry it, or `None` if none do.
pub fn mean_metric(reports: &[EpisodeReport], metric: &str) -> Option<f64> {
    let values: Vec<f64> = reports.iter().filter_map(|r| r.metrics.get(metric).copied()).collect();
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_line_per_transition() {
        let t = TransitionRecord {
            episode: 0,
            step: 3,
            state: "1|Free".into(),
            action: "m2".into(),
            reward: 0.5,
            rm_state: 0,
            case: None,
        };
        let r = EpisodeReport {
            episode: 0,
            steps: 2,
            total_reward: 1.0,
            epsilon: 0.1,
            metrics: BTreeMap::from([("processed".to_owned(), 4.0)]),
            transitions: vec![t.clone(), t],
        };
        let mut buf = Vec::new();
        write_jsonl(std::slice::from_ref(&r), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with(r#"{"episode":0,"step":3,"state":"1|Free","action":"m2""#));
        assert_eq!(mean_metric(&[r.clone(), r], "processed"), Some(4.0));
    }
}
