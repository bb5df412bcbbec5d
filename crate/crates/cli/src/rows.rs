//! Result rows and their CSV encoding.

use std::io::Write;
use std::time::Duration;

use anyhow::Result;
use mpjacobi_core::Mode;

/// Column order of every CSV this crate writes.
pub const COLUMNS: [&str; 17] = [
    "experiment",
    "n",
    "kappa",
    "mode",
    "seed",
    "method",
    "off_ratio",
    "sweeps",
    "rotations",
    "residual_ratio",
    "orthogonality_defect",
    "time_total_s",
    "time_stage1_s",
    "time_stage2_s",
    "time_stage3_s",
    "improvement",
    "error",
];

/// One CSV row. Empty cells are `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub n: usize,
    pub kappa: Option<f64>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub method: String,
    pub off_ratio: Option<f64>,
    pub sweeps: Option<usize>,
    pub rotations: Option<usize>,
    pub residual_ratio: Option<f64>,
    pub orthogonality_defect: Option<f64>,
    pub time_total_s: Option<f64>,
    pub time_stage1_s: Option<f64>,
    pub time_stage2_s: Option<f64>,
    pub time_stage3_s: Option<f64>,
    pub improvement: Option<f64>,
    pub error: Option<String>,
}

impl Row {
    pub fn new(
        experiment: &str,
        n: usize,
        kappa: Option<f64>,
        mode: Option<Mode>,
        seed: Option<u64>,
        method: &str,
    ) -> Self {
        Row {
            experiment: experiment.to_owned(),
            n,
            kappa,
            mode,
            seed,
            method: method.to_owned(),
            ..Row::default()
        }
    }

    pub fn with_error(mut self, err: impl std::fmt::Display) -> Self {
        self.error = Some(err.to_string());
        self
    }

    pub fn set_times(&mut self, stages: [Duration; 3]) {
        let [a, b, c] = stages.map(|d| d.as_secs_f64());
        self.time_stage1_s = Some(a);
        self.time_stage2_s = Some(b);
        self.time_stage3_s = Some(c);
        self.time_total_s = Some(a + b + c);
    }

    fn cells(&self) -> [String; 17] {
        fn float(x: Option<f64>) -> String {
            x.map(|v| format!("{v:.16e}")).unwrap_or_default()
        }
        fn int<T: ToString>(x: Option<T>) -> String {
            x.map(|v| v.to_string()).unwrap_or_default()
        }
        [
            self.experiment.clone(),
            self.n.to_string(),
            float(self.kappa),
            self.mode.map(|m| m.as_str().to_owned()).unwrap_or_default(),
            int(self.seed),
            self.method.clone(),
            float(self.off_ratio),
            int(self.sweeps),
            int(self.rotations),
            float(self.residual_ratio),
            float(self.orthogonality_defect),
            float(self.time_total_s),
            float(self.time_stage1_s),
            float(self.time_stage2_s),
            float(self.time_stage3_s),
            float(self.improvement),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Writes the header and `rows`.
pub fn write_csv<W: Write>(w: W, rows: &[Row]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(COLUMNS)?;
    for row in rows {
        out.write_record(row.cells())?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_cells_and_float_format() {
        let mut r = Row::new("solve", 3, Some(100.0), Some(Mode::Ari), Some(9), "mixed");
        r.sweeps = Some(2);
        r.residual_ratio = Some(0.1);
        let mut buf = Vec::new();
        write_csv(&mut buf, &[r]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap().split(',').count(), 17);
        assert_eq!(
            lines.next().unwrap(),
            "solve,3,1.0000000000000000e2,ari,9,mixed,,2,,1.0000000000000001e-1,,,,,,,"
        );
    }

    #[test]
    fn error_text_is_quoted() {
        let r = Row::new("solve", 2, None, None, None, "mixed").with_error("bad, very bad");
        let mut buf = Vec::new();
        write_csv(&mut buf, &[r]).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("\"bad, very bad\""));
    }
}
