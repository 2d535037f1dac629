//! Ratio tables produced by every inequality check.

use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub case_id: String,
    pub scale: i64,
    pub lhs: f64,
    pub rhs: f64,
}

impl ReportRow {
    pub fn new(case_id: impl Into<String>, scale: i64, lhs: f64, rhs: f64) -> Self {
        Self {
            case_id: case_id.into(),
            scale,
            lhs,
            rhs,
        }
    }

    /// `lhs / rhs`; `None` is the `0/0` sentinel (both sides vanish).
    pub fn ratio(&self) -> Option<f64> {
        if self.rhs > 0.0 {
            Some(self.lhs / self.rhs)
        } else if self.lhs == 0.0 {
            None
        } else {
            Some(f64::INFINITY)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub max_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    /// Largest quotient of per-scale maximum ratios between successive scales.
    pub max_growth: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub check_id: String,
    pub rows: Vec<ReportRow>,
    pub precondition_flags: Vec<String>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check_id: impl Into<String>) -> Self {
        Self {
            check_id: check_id.into(),
            rows: Vec::new(),
            precondition_flags: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, case_id: impl Into<String>, scale: i64, lhs: f64, rhs: f64) {
        self.rows.push(ReportRow::new(case_id, scale, lhs, rhs));
    }

    pub fn flag(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        if !self.precondition_flags.contains(&msg) {
            self.precondition_flags.push(msg);
        }
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn is_clean(&self) -> bool {
        self.precondition_flags.is_empty()
    }

    /// Stable sort by scale; rows with equal scale keep insertion order.
    pub fn finish(mut self) -> Self {
        self.rows.sort_by_key(|r| r.scale);
        self
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.rows.extend(other.rows);
        for f in other.precondition_flags {
            self.flag(f);
        }
        self.notes.extend(other.notes);
    }

    pub fn ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().filter_map(ReportRow::ratio)
    }

    pub fn rows_for<'a>(&'a self, case_id: &'a str) -> impl Iterator<Item = &'a ReportRow> + 'a {
        self.rows.iter().filter(move |r| r.case_id == case_id)
    }

    /// Maximum ratio at every distinct scale, in ascending scale order.
    pub fn max_ratio_by_scale(&self) -> Vec<(i64, f64)> {
        let mut out: Vec<(i64, f64)> = Vec::new();
        for row in &self.rows {
            let Some(r) = row.ratio() else { continue };
            match out.iter_mut().find(|(s, _)| *s == row.scale) {
                Some(entry) => entry.1 = entry.1.max(r),
                None => out.push((row.scale, r)),
            }
        }
        out.sort_by_key(|&(s, _)| s);
        out
    }

    pub fn summary(&self) -> Summary {
        let max_ratio = self.ratios().fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))));
        let min_ratio = self.ratios().fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.min(r))));
        let by_scale = self.max_ratio_by_scale();
        let max_growth = by_scale
            .windows(2)
            .filter(|w| w[0].1 > 0.0)
            .map(|w| w[1].1 / w[0].1)
            .fold(None, |m: Option<f64>, g| Some(m.map_or(g, |m| m.max(g))));
        Summary {
            max_ratio,
            min_ratio,
            max_growth,
        }
    }

    /// CSV with header `case_id,scale,lhs,rhs,ratio` and a trailing `summary` line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("case_id,scale,lhs,rhs,ratio\n");
        for row in &self.rows {
            let ratio = row.ratio().map_or_else(|| "0/0".to_string(), fmt_sig12);
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.case_id,
                row.scale,
                fmt_sig12(row.lhs),
                fmt_sig12(row.rhs),
                ratio
            );
        }
        let s = self.summary();
        let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), fmt_sig12);
        let _ = writeln!(
            out,
            "summary,check_id={},max_ratio={},min_ratio={},max_growth={},flags={}",
            self.check_id,
            opt(s.max_ratio),
            opt(s.min_ratio),
            opt(s.max_growth),
            if self.precondition_flags.is_empty() {
                "none".to_string()
            } else {
                self.precondition_flags.join(";").replace(',', " ")
            }
        );
        out
    }
}

/// Float with 12 significant digits in scientific notation.
pub fn fmt_sig12(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format!("{x}")
    }
}
