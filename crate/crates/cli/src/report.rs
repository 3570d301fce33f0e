//! `KEY: value` reports with an optional JSON mirror.

use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::json;

#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<Entry>,
}

#[derive(Debug)]
struct Entry {
    key: &'static str,
    value: String,
    /// Run-dependent lines (timestamps, timings) that `--no-timestamp`
    /// drops so reports stay byte-identical.
    volatile: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn line(&mut self, key: &'static str, value: impl Into<String>) {
        self.entries.push(Entry {
            key,
            value: value.into(),
            volatile: false,
        });
    }

    pub fn volatile(&mut self, key: &'static str, value: impl Into<String>) {
        self.entries.push(Entry {
            key,
            value: value.into(),
            volatile: true,
        });
    }

    pub fn render(&self, json: bool, timestamp: bool) -> String {
        let stamp = timestamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
                .to_string()
        });
        let kept = || self.entries.iter().filter(|e| timestamp || !e.volatile);
        if json {
            let entries: Vec<_> = kept()
                .map(|e| json!({ "key": e.key, "value": e.value }))
                .collect();
            let mut obj = json!({ "entries": entries });
            if let Some(s) = stamp {
                obj["timestamp"] = json!(s);
            }
            format!(
                "{}\n",
                serde_json::to_string_pretty(&obj).expect("plain json")
            )
        } else {
            let mut out = String::new();
            if let Some(s) = stamp {
                out.push_str(&format!("TIMESTAMP: {s}\n"));
            }
            for e in kept() {
                out.push_str(&format!("{}: {}\n", e.key, e.value));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volatile_lines_follow_the_timestamp_flag() {
        let mut r = Report::new();
        r.line("RESULT", "PASS");
        r.volatile("ELAPSED", "1.00s");
        assert_eq!(r.render(false, false), "RESULT: PASS\n");
        let with = r.render(false, true);
        assert!(with.starts_with("TIMESTAMP: "));
        assert!(with.ends_with("RESULT: PASS\nELAPSED: 1.00s\n"));
    }

    #[test]
    fn json_mirrors_the_entries() {
        let mut r = Report::new();
        r.line("RESULT", "PASS");
        let v: serde_json::Value = serde_json::from_str(&r.render(true, false)).unwrap();
        assert_eq!(v["entries"][0]["key"], "RESULT");
        assert_eq!(v["entries"][0]["value"], "PASS");
        assert!(v.get("timestamp").is_none());
    }
}
