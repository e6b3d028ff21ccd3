use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Counts, EvalError};
use crate::image::Mask;

#[derive(Debug, Clone, PartialEq)]
pub struct MaskPair {
    pub pred: Mask,
    pub gt: Mask,
    /// City, style or region label.
    pub stratum: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    /// IoU of summed pixel counts.
    #[default]
    Pooled,
    /// Mean of per-tile IoUs.
    PerTile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratumScore {
    #[serde(flatten)]
    pub counts: Counts,
    pub iou: f64,
    pub tiles: usize,
    pub mean_tile_iou: f64,
}

impl StratumScore {
    pub fn value(&self, agg: Aggregation) -> f64 {
        match agg {
            Aggregation::Pooled => self.iou,
            Aggregation::PerTile => self.mean_tile_iou,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IoUReport {
    pub strata: BTreeMap<String, StratumScore>,
    pub overall: StratumScore,
}

fn score(tiles: &[Counts]) -> StratumScore {
    let counts: Counts = tiles.iter().copied().sum();
    let mean = if tiles.is_empty() { 1.0 } else { tiles.iter().map(Counts::iou).sum::<f64>() / tiles.len() as f64 };
    StratumScore { counts, iou: counts.iou(), tiles: tiles.len(), mean_tile_iou: mean }
}

/// Per-stratum and overall scores. The overall pooled IoU is computed from
/// the summed counts of all strata.
pub fn stratified_report(pairs: &[MaskPair]) -> Result<IoUReport, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::NoPairs);
    }
    let mut per: BTreeMap<String, Vec<Counts>> = BTreeMap::new();
    let mut all = Vec::with_capacity(pairs.len());
    for p in pairs {
        let c = Counts::from_masks(&p.pred, &p.gt)?;
        per.entry(p.stratum.clone()).or_default().push(c);
        all.push(c);
    }
    Ok(IoUReport { strata: per.into_iter().map(|(k, v)| (k, score(&v))).collect(), overall: score(&all) })
}

/// Aligned text table: one row per configuration, one column per stratum
/// plus `overall`.
pub fn render_table(rows: &[(&str, &IoUReport)], agg: Aggregation) -> String {
    let mut columns: Vec<&str> = Vec::new();
    for (_, r) in rows {
        for k in r.strata.keys() {
            if !columns.contains(&k.as_str()) {
                columns.push(k);
            }
        }
    }
    columns.sort_unstable();
    let label_w = rows.iter().map(|(n, _)| n.len()).chain([13]).max().unwrap_or(13);
    let col_w = |c: &str| c.len().max(7);
    let mut out = String::new();
    let _ = write!(out, "{:<label_w$}", "configuration");
    for c in columns.iter().copied().chain(["overall"]) {
        let _ = write!(out, "  {:>w$}", c, w = col_w(c));
    }
    out.push('\n');
    for (name, r) in rows {
        let _ = write!(out, "{:<label_w$}", name);
        for c in &columns {
            let cell = r.strata.get(*c).map_or(String::from("-"), |s| format!("{:.4}", s.value(agg)));
            let _ = write!(out, "  {:>w$}", cell, w = col_w(c));
        }
        let _ = write!(out, "  {:>w$}", format!("{:.4}", r.overall.value(agg)), w = col_w("overall"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::iou;

    fn pair(w: usize, f: impl Fn(usize) -> (bool, bool), stratum: &str) -> MaskPair {
        MaskPair {
            pred: Mask::from_fn(w, 1, |c, _| f(c).0),
            gt: Mask::from_fn(w, 1, |c, _| f(c).1),
            stratum: stratum.into(),
        }
    }

    #[test]
    fn two_strata_pool() {
        let a = pair(10, |_| (true, true), "austin");
        let b = pair(20, |c| (c < 10, c >= 10), "vienna");
        let r = stratified_report(&[a, b]).unwrap();
        assert_eq!(r.strata["austin"].iou, 1.0);
        assert_eq!(r.strata["vienna"].iou, 0.0);
        assert_eq!(r.strata["vienna"].counts, Counts { tp: 0, fp: 10, fn_: 10 });
        assert!((r.overall.iou - 10.0 / 30.0).abs() < 1e-15);
        assert_eq!(r.overall.mean_tile_iou, 0.5);
    }

    #[test]
    fn single_stratum_overall_matches() {
        let ps = [pair(16, |c| (c % 3 == 0, c % 2 == 0), "x"), pair(16, |c| (c < 5, c < 7), "x")];
        let r = stratified_report(&ps).unwrap();
        assert_eq!(r.overall.iou, r.strata["x"].iou);
        // pooled IoU equals the IoU of the concatenated masks
        let cat = |sel: fn(&MaskPair) -> &Mask| Mask::from_fn(32, 1, |c, _| sel(&ps[c / 16]).get(c % 16, 0) != 0);
        assert_eq!(iou(&cat(|p| &p.pred), &cat(|p| &p.gt)).unwrap(), r.overall.iou);
    }

    #[test]
    fn table_layout() {
        let r = stratified_report(&[pair(4, |_| (true, true), "b"), pair(4, |c| (c < 2, true), "a")]).unwrap();
        let t = render_table(&[("real only", &r), ("real+synth", &r)], Aggregation::Pooled);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("configuration") && lines[0].ends_with("overall"));
        assert!(lines[1].starts_with("real only") && lines[1].contains("0.5000") && lines[1].contains("1.0000"));
        assert!(lines.iter().all(|l| l.len() == lines[0].len()));
        assert!(matches!(stratified_report(&[]), Err(EvalError::NoPairs)));
    }
}
