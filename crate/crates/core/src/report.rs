//! Physical-validity metrics per scene and corpus-level aggregation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::GeomError;
use crate::reward::{RewardConfig, ScoringContext};
use crate::scene::{load_scene, validate, Scene};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SceneMetrics {
    /// Σ footprint area outside the room × asset height (m³).
    pub oob_volume: f64,
    /// Σ box overlap over unordered pairs not joined by a stacking relation (m³).
    pub collision_volume: f64,
    pub asset_count: usize,
}

pub fn scene_metrics(scene: &Scene) -> Result<SceneMetrics, GeomError> {
    let ctx = ScoringContext::new(scene, RewardConfig::default())?;
    let st = ctx.evaluate_scene(scene);
    Ok(SceneMetrics {
        oob_volume: ctx.oob_volume(&st),
        collision_volume: ctx.collision_raw(&st),
        asset_count: scene.asset_count(),
    })
}

/// External judge scores. Never computed here, only carried into reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct JudgeScores {
    pub aes: Option<f64>,
    pub real: Option<f64>,
    pub str: Option<f64>,
    pub geo: Option<f64>,
    pub sem: Option<f64>,
    pub func: Option<f64>,
}

impl JudgeScores {
    const COLUMNS: [&'static str; 6] = ["aes", "real", "str", "geo", "sem", "func"];

    fn values(&self) -> [Option<f64>; 6] {
        [self.aes, self.real, self.str, self.geo, self.sem, self.func]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneRow {
    pub id: String,
    /// Extracted, parsed and validated without errors.
    pub parsed: bool,
    /// Present whenever the text loaded and its boundary was usable, even
    /// if validation failed.
    pub metrics: Option<SceneMetrics>,
    /// Stable code of the first failure, if any.
    pub failure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub judge: Option<JudgeScores>,
}

pub fn score_text(id: &str, text: &str) -> SceneRow {
    let mut row = SceneRow {
        id: id.to_string(),
        parsed: false,
        metrics: None,
        failure: None,
        judge: None,
    };
    let scene = match load_scene(text) {
        Ok(s) => s,
        Err(e) => {
            row.failure = Some(e.code().to_string());
            return row;
        }
    };
    let report = validate(&scene);
    row.parsed = report.ok;
    if let Some(v) = report.violations.first() {
        row.failure = Some(v.code.to_string());
    }
    match scene_metrics(&scene) {
        Ok(m) => row.metrics = Some(m),
        Err(_) if !row.parsed => {}
        Err(_) => {
            row.parsed = false;
            row.failure = Some("GEOMETRY".to_string());
        }
    }
    row
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusReport {
    pub n_inputs: usize,
    pub n_parsed: usize,
    pub succ_rate: f64,
    /// Means over parsed rows; `None` when nothing parsed.
    pub mean_oob: Option<f64>,
    pub mean_col: Option<f64>,
    pub mean_cnt: Option<f64>,
    pub rows: Vec<SceneRow>,
}

impl CorpusReport {
    /// Aggregates rows, sorting them by id first.
    pub fn from_rows(mut rows: Vec<SceneRow>) -> Result<Self, ReportError> {
        if rows.is_empty() {
            return Err(ReportError::EmptyCorpus);
        }
        rows.sort_by(|a, b| a.id.cmp(&b.id));
        let ok: Vec<SceneMetrics> = rows
            .iter()
            .filter(|r| r.parsed)
            .filter_map(|r| r.metrics)
            .collect();
        let n = ok.len();
        let mean =
            |f: fn(&SceneMetrics) -> f64| (n > 0).then(|| ok.iter().map(f).sum::<f64>() / n as f64);
        Ok(CorpusReport {
            n_inputs: rows.len(),
            n_parsed: n,
            succ_rate: n as f64 / rows.len() as f64,
            mean_oob: mean(|m| m.oob_volume),
            mean_col: mean(|m| m.collision_volume),
            mean_cnt: mean(|m| m.asset_count as f64),
            rows,
        })
    }

    /// Combines two reports as if their inputs had been one corpus.
    pub fn merge(self, other: CorpusReport) -> Result<Self, ReportError> {
        let mut rows = self.rows;
        rows.extend(other.rows);
        Self::from_rows(rows)
    }

    pub fn attach_judge(&mut self, id: &str, scores: JudgeScores) -> bool {
        match self.rows.iter_mut().find(|r| r.id == id) {
            Some(r) => {
                r.judge = Some(scores);
                true
            }
            None => false,
        }
    }

    /// CSV with header `id,parsed,oob,col,cnt`, plus judge columns when any
    /// row carries judge scores. Unavailable metrics are empty cells.
    pub fn to_csv(&self) -> Result<String, ReportError> {
        let with_judge = self.rows.iter().any(|r| r.judge.is_some());
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header = vec!["id", "parsed", "oob", "col", "cnt"];
        if with_judge {
            header.extend(JudgeScores::COLUMNS);
        }
        w.write_record(&header)?;
        let fixed = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
        for r in &self.rows {
            let mut rec = vec![
                r.id.clone(),
                r.parsed.to_string(),
                fixed(r.metrics.map(|m| m.oob_volume)),
                fixed(r.metrics.map(|m| m.collision_volume)),
                r.metrics
                    .map(|m| m.asset_count.to_string())
                    .unwrap_or_default(),
            ];
            if with_judge {
                rec.extend(r.judge.unwrap_or_default().values().into_iter().map(fixed));
            }
            w.write_record(&rec)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| ReportError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    /// Summary JSON without per-scene rows.
    pub fn summary_json(&self) -> String {
        let v = serde_json::json!({
            "n_inputs": self.n_inputs,
            "n_parsed": self.n_parsed,
            "succ_rate": self.succ_rate,
            "mean_oob": self.mean_oob,
            "mean_col": self.mean_col,
            "mean_cnt": self.mean_cnt,
        });
        serde_json::to_string_pretty(&v).expect("plain json")
    }
}

/// Scores `(id, text)` inputs in parallel and aggregates them.
pub fn corpus_report(inputs: &[(String, String)]) -> Result<CorpusReport, ReportError> {
    if inputs.is_empty() {
        return Err(ReportError::EmptyCorpus);
    }
    let rows = inputs
        .par_iter()
        .map(|(id, text)| score_text(id, text))
        .collect();
    CorpusReport::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{serialize, Asset, FunctionalZone};

    fn room() -> Scene {
        Scene::empty_room("t", &[[0., 0.], [4., 0.], [4., 4.], [0., 4.]], 2.8)
    }

    fn three_assets() -> Scene {
        let mut s = room();
        s.push_zone(
            FunctionalZone::new("z", "z")
                .with_asset(Asset::floor_box("a", "box", [1.0, 1.0], [1., 1., 1.], 0.0))
                .with_asset(Asset::floor_box("b", "box", [3.0, 1.0], [1., 1., 1.], 0.0))
                .with_asset(Asset::floor_box("c", "box", [2.0, 3.0], [1., 1., 1.], 0.0)),
        );
        s
    }

    #[test]
    fn clean_scene() {
        let m = scene_metrics(&three_assets()).unwrap();
        assert_eq!(
            m,
            SceneMetrics {
                oob_volume: 0.0,
                collision_volume: 0.0,
                asset_count: 3
            }
        );
    }

    #[test]
    fn half_out_and_coincident() {
        let mut s = room();
        s.push_zone(FunctionalZone::new("z", "z").with_asset(Asset::floor_box(
            "a",
            "box",
            [4.0, 2.0],
            [1., 1., 1.],
            0.0,
        )));
        assert!((scene_metrics(&s).unwrap().oob_volume - 0.5).abs() < 1e-12);

        let mut s = room();
        s.push_zone(
            FunctionalZone::new("z", "z")
                .with_asset(Asset::floor_box("a", "box", [2.0, 2.0], [1., 1., 1.], 0.0))
                .with_asset(Asset::floor_box("b", "box", [2.0, 2.0], [1., 1., 1.], 0.0)),
        );
        assert!((scene_metrics(&s).unwrap().collision_volume - 1.0).abs() < 1e-12);
    }

    #[test]
    fn succ_rate_and_means() {
        let good = serialize(&three_assets());
        let mut inputs: Vec<(String, String)> =
            (0..8).map(|i| (format!("s{i}"), good.clone())).collect();
        inputs.push(("g1".into(), "garbage".into()));
        inputs.push(("g2".into(), "{\"meta\": 3}".into()));
        let rep = corpus_report(&inputs).unwrap();
        assert_eq!(rep.succ_rate, 0.8);
        assert_eq!(rep.mean_cnt, Some(3.0));
        assert_eq!(rep.rows[0].id, "g1");
        assert!(corpus_report(&[]).is_err());
    }

    #[test]
    fn csv_shape() {
        let inputs = vec![
            ("b".to_string(), serialize(&three_assets())),
            ("a".to_string(), "x".to_string()),
        ];
        let rep = corpus_report(&inputs).unwrap();
        let csv = rep.to_csv().unwrap();
        assert_eq!(
            csv,
            "id,parsed,oob,col,cnt\na,false,,,\nb,true,0.000000,0.000000,3\n"
        );
        assert_eq!(csv, corpus_report(&inputs).unwrap().to_csv().unwrap());
    }

    #[test]
    fn judge_columns_optional() {
        let inputs = vec![("a".to_string(), serialize(&three_assets()))];
        let mut rep = corpus_report(&inputs).unwrap();
        assert!(rep.attach_judge(
            "a",
            JudgeScores {
                aes: Some(7.5),
                ..Default::default()
            }
        ));
        let csv = rep.to_csv().unwrap();
        assert!(csv.starts_with("id,parsed,oob,col,cnt,aes,real,str,geo,sem,func\n"));
        assert!(csv.contains(",7.500000,,,,,\n"));
    }
}
