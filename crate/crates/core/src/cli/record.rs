//! Output records and their text, CSV and JSON renderings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::padics::TwoAdicTrunc;

/// `f mod 2^precision`; the residue is a decimal string in `[0, 2^precision)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FModField {
    pub residue: String,
    pub precision: u32,
}

impl From<&TwoAdicTrunc> for FModField {
    fn from(t: &TwoAdicTrunc) -> Self {
        FModField {
            residue: t.residue().to_string(),
            precision: t.precision(),
        }
    }
}

/// One line of output. Big integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ResultRecord {
    pub n: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_exponent: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_mod: Option<FModField>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub checks: BTreeMap<String, bool>,
    /// Command-specific exact values (rationals, fitted coefficients, witnesses).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, String>,
}

impl ResultRecord {
    pub fn new(n: i64) -> Self {
        ResultRecord {
            n,
            ..Default::default()
        }
    }

    pub fn check(mut self, name: &str, pass: bool) -> Self {
        self.checks.insert(name.to_owned(), pass);
        self
    }

    pub fn datum(mut self, key: &str, value: impl ToString) -> Self {
        self.data.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &str> {
        self.checks
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(name, _)| name.as_str())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn render(records: &[ResultRecord], format: Format) -> String {
    match format {
        Format::Json => records.iter().map(|r| r.to_json() + "\n").collect(),
        Format::Text => records.iter().map(|r| render_text(r) + "\n").collect(),
        Format::Csv => render_csv(records),
    }
}

fn render_text(r: &ResultRecord) -> String {
    let mut out = format!("n={}", r.n);
    if let Some(c) = &r.count {
        write!(out, "  count={c}").unwrap();
    }
    if let Some(v) = r.two_exponent {
        write!(out, "  two_exponent={v}").unwrap();
    }
    if let Some(f) = &r.f {
        write!(out, "  f={f}").unwrap();
    }
    if let Some(fm) = &r.f_mod {
        write!(out, "  f_mod={} (mod 2^{})", fm.residue, fm.precision).unwrap();
    }
    for (k, v) in &r.data {
        write!(out, "  {k}={v}").unwrap();
    }
    for (k, ok) in &r.checks {
        write!(out, "  [{}] {k}", if *ok { "pass" } else { "FAIL" }).unwrap();
    }
    out
}

fn render_csv(records: &[ResultRecord]) -> String {
    let check_cols: BTreeSet<&str> = records
        .iter()
        .flat_map(|r| r.checks.keys().map(String::as_str))
        .collect();
    let data_cols: BTreeSet<&str> = records
        .iter()
        .flat_map(|r| r.data.keys().map(String::as_str))
        .collect();

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "n".to_owned(),
        "count".to_owned(),
        "two_exponent".to_owned(),
        "f".to_owned(),
        "f_mod_residue".to_owned(),
        "f_mod_precision".to_owned(),
    ];
    header.extend(check_cols.iter().map(|c| format!("check:{c}")));
    header.extend(data_cols.iter().map(|c| c.to_string()));
    w.write_record(&header).expect("in-memory write");

    for r in records {
        let mut row = vec![
            r.n.to_string(),
            r.count.clone().unwrap_or_default(),
            r.two_exponent.map(|v| v.to_string()).unwrap_or_default(),
            r.f.clone().unwrap_or_default(),
            r.f_mod.as_ref().map(|m| m.residue.clone()).unwrap_or_default(),
            r.f_mod.as_ref().map(|m| m.precision.to_string()).unwrap_or_default(),
        ];
        row.extend(
            check_cols
                .iter()
                .map(|c| r.checks.get(*c).map(|ok| ok.to_string()).unwrap_or_default()),
        );
        row.extend(data_cols.iter().map(|c| r.data.get(*c).cloned().unwrap_or_default()));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fmod_record_shape() {
        let mut r = ResultRecord::new(3);
        r.f_mod = Some(FModField {
            residue: "13".into(),
            precision: 4,
        });
        assert_eq!(r.to_json(), r#"{"n":3,"f_mod":{"residue":"13","precision":4}}"#);
    }

    #[test]
    fn csv_has_union_of_columns() {
        let a = ResultRecord::new(1).check("x", true);
        let b = ResultRecord::new(2).datum("y", "1/2");
        let out = render(&[a, b], Format::Csv);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines[0], "n,count,two_exponent,f,f_mod_residue,f_mod_precision,check:x,y");
        assert_eq!(lines[1], "1,,,,,,true,");
        assert_eq!(lines[2], "2,,,,,,,1/2");
    }

    fn arb_record() -> impl Strategy<Value = ResultRecord> {
        (
            any::<i64>(),
            proptest::option::of("[0-9]{1,60}"),
            proptest::option::of(any::<u64>()),
            proptest::option::of(("[0-9]{1,30}", 1u32..200)),
            proptest::collection::btree_map("[a-z_]{1,12}", any::<bool>(), 0..4),
            proptest::collection::btree_map("[a-zA-Z_]{1,8}", "[-0-9/ ]{0,20}", 0..4),
        )
            .prop_map(|(n, count, e, fm, checks, data)| ResultRecord {
                n,
                count: count.clone(),
                two_exponent: e,
                f: count,
                f_mod: fm.map(|(residue, precision)| FModField { residue, precision }),
                checks,
                data,
            })
    }

    proptest! {
        #[test]
        fn json_round_trip_is_byte_identical(r in arb_record()) {
            let s = r.to_json();
            let back: ResultRecord = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(back.to_json(), s);
        }
    }
}
