use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Values computed, but the hypothesis of the claim does not hold.
    Recorded,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Recorded => "recorded",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SkipReason {
    /// A resource guard would be exceeded.
    Resource,
    /// The point is outside the check's domain.
    Precondition,
}

/// One check at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub check: Check,
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip: Option<SkipReason>,
    pub values: BTreeMap<String, Value>,
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub time_us: u64,
}

impl Entry {
    pub fn point_label(&self) -> String {
        match (self.r, self.s) {
            (Some(r), Some(s)) => format!("({}|{};{r},{s})", self.m, self.n),
            _ => format!("({}|{})", self.m, self.n),
        }
    }

    fn sort_key(&self) -> (Check, usize, usize, Option<usize>, Option<usize>) {
        (self.check, self.m, self.n, self.r, self.s)
    }

    pub fn value_u64(&self, key: &str) -> Option<u64> {
        self.values.get(key).and_then(Value::as_u64)
    }

    pub fn value_bool(&self, key: &str) -> Option<bool> {
        self.values.get(key).and_then(Value::as_bool)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<Entry>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub recorded: usize,
    pub skipped: usize,
    pub resource_skips: usize,
}

impl VerificationReport {
    pub fn new(mut entries: Vec<Entry>) -> Self {
        entries.sort_by_key(Entry::sort_key);
        Self { entries }
    }

    pub fn find(
        &self,
        check: Check,
        m: usize,
        n: usize,
        rs: Option<(usize, usize)>,
    ) -> Option<&Entry> {
        self.entries.iter().find(|e| {
            e.check == check
                && e.m == m
                && e.n == n
                && rs.is_none_or(|(r, s)| e.r == Some(r) && e.s == Some(s))
        })
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for e in &self.entries {
            match e.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Recorded => s.recorded += 1,
                Status::Skipped => s.skipped += 1,
            }
            if e.skip == Some(SkipReason::Resource) {
                s.resource_skips += 1;
            }
        }
        s
    }

    /// 1 if any check failed, else 3 if `strict` and a resource guard
    /// skipped a point, else 0.
    pub fn exit_code(&self, strict: bool) -> i32 {
        let s = self.summary();
        if s.fail > 0 {
            1
        } else if strict && s.resource_skips > 0 {
            3
        } else {
            0
        }
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("entries serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> serde_json::Result<Self> {
        let entries = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<Result<_, _>>()?;
        Ok(Self { entries })
    }

    /// Aligned plain-text table with one row per entry.
    pub fn to_table(&self) -> String {
        let header = ["check", "point", "status", "time_ms", "values"];
        let rows: Vec<[String; 5]> = self
            .entries
            .iter()
            .map(|e| {
                let mut values = e
                    .values
                    .iter()
                    .map(|(k, v)| format!("{k}={}", compact(v)))
                    .collect::<Vec<_>>()
                    .join(" ");
                if let Some(msg) = &e.message {
                    if !values.is_empty() {
                        values.push_str("  ");
                    }
                    values.push_str(&format!("[{msg}]"));
                }
                [
                    e.check.to_string(),
                    e.point_label(),
                    e.status.as_str().to_string(),
                    format!("{:.1}", e.time_us as f64 / 1000.0),
                    values,
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row.iter()).take(4) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: [&str; 5]| {
            for (k, cell) in cells.iter().enumerate().take(4) {
                let _ = write!(out, "{cell:<width$}  ", width = widths[k]);
            }
            out.push_str(cells[4]);
            out.push('\n');
        };
        line(&mut out, header);
        for row in &rows {
            line(&mut out, [&row[0], &row[1], &row[2], &row[3], &row[4]]);
        }
        let s = self.summary();
        let _ = writeln!(
            out,
            "{} pass, {} fail, {} recorded, {} skipped",
            s.pass, s.fail, s.recorded, s.skipped
        );
        out
    }

    /// Dimension table of the `dims` entries as CSV.
    pub fn write_dims_csv<W: io::Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["m", "n", "r", "s", "bidegree_dim", "image_dim", "status"])?;
        for e in self.entries.iter().filter(|e| e.check == Check::Dims) {
            let field = |k: &str| e.value_u64(k).map(|v| v.to_string()).unwrap_or_default();
            w.write_record([
                e.m.to_string(),
                e.n.to_string(),
                e.r.map(|v| v.to_string()).unwrap_or_default(),
                e.s.map(|v| v.to_string()).unwrap_or_default(),
                field("bidegree_dim"),
                field("image_dim"),
                e.status.as_str().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn dims_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_dims_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
