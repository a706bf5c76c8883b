//! Reports: an ordered list of key/value lines with an overall status.

use serde::Serialize;
use tmodels_core::Decision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Unknown,
    Mismatch,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Unknown => 2,
            Status::Mismatch => 1,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Unknown => "unknown",
            Status::Mismatch => "mismatch",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Record,
}

#[derive(Clone, Debug, Serialize)]
struct Entry {
    key: String,
    value: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    entries: Vec<Entry>,
    status: Status,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report {
            entries: Vec::new(),
            status: Status::Ok,
        };
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push(Entry {
            key: key.into(),
            value: value.to_string(),
        });
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.key == key)
            .map(|e| e.value.as_str())
    }

    /// Records an expected fact; a failure makes the report a mismatch.
    pub fn check(&mut self, name: &str, holds: bool) {
        self.push(
            format!("check.{}", name),
            if holds { "pass" } else { "FAIL" },
        );
        if !holds {
            self.status = self.status.max(Status::Mismatch);
        }
    }

    /// Records an undecided question.
    pub fn unknown(&mut self, name: &str, why: &str) {
        self.push(format!("check.{}", name), format!("unknown ({})", why));
        self.status = self.status.max(Status::Unknown);
    }

    /// Checks that `d` is the expected verdict; `Unknown` downgrades to
    /// `Status::Unknown` instead of a mismatch.
    pub fn expect<W>(&mut self, name: &str, d: &Decision<W>, want_yes: bool) {
        match d {
            Decision::Unknown(why) => self.unknown(name, why),
            _ => self.check(name, d.is_yes() == want_yes),
        }
    }

    /// Marks the report as having met an undecided verdict.
    pub fn saw_unknown(&mut self) {
        self.status = self.status.max(Status::Unknown);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                for e in &self.entries {
                    out.push_str(&e.key);
                    out.push_str(": ");
                    out.push_str(&e.value);
                    out.push('\n');
                }
                out.push_str("status: ");
                out.push_str(self.status.as_str());
                out.push('\n');
                out
            }
            Format::Record => {
                let mut all = self.entries.clone();
                all.push(Entry {
                    key: "status".into(),
                    value: self.status.as_str().into(),
                });
                let mut s = serde_json::to_string_pretty(&all).expect("entries serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// `yes`, `no (kind: detail)` or `unknown (reason)`.
pub fn verdict<W>(d: &Decision<W>) -> String {
    match d {
        Decision::Yes(_) => String::from("yes"),
        Decision::No(c) => match c.level {
            Some(n) => format!("no ({:?} at level {}: {})", c.kind, n, c.detail),
            None => format!("no ({:?}: {})", c.kind, c.detail),
        },
        Decision::Unknown(why) => format!("unknown ({})", why),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let mut r = Report::new("demo");
        r.push("rank", 1);
        r.check("works", true);
        assert_eq!(
            r.render(Format::Text),
            "command: demo\nrank: 1\ncheck.works: pass\nstatus: ok\n"
        );
        let v: serde_json::Value = serde_json::from_str(&r.render(Format::Record)).unwrap();
        assert_eq!(v[1]["key"], "rank");
        assert_eq!(v[3]["value"], "ok");
        r.unknown("later", "budget");
        assert_eq!(r.status().exit_code(), 2);
        r.check("broken", false);
        assert_eq!(r.status().exit_code(), 1);
    }
}
