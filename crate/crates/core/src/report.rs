use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Not evaluated because an earlier precondition failed.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    /// Always present for failures and skips.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), records: Vec::new() }
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.records.push(CheckRecord { name: name.into(), status: Status::Pass, witness: None });
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.records.push(CheckRecord { name: name.into(), status: Status::Fail, witness: Some(witness.into()) });
    }

    pub fn skip(&mut self, name: impl Into<String>, why: impl Into<String>) {
        self.records.push(CheckRecord { name: name.into(), status: Status::Skipped, witness: Some(why.into()) });
    }

    /// Records `Pass` when `witness` is None.
    pub fn record(&mut self, name: impl Into<String>, witness: Option<String>) {
        match witness {
            None => self.pass(name),
            Some(w) => self.fail(name, w),
        }
    }

    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut r in other.records {
            r.name = format!("{prefix}{}", r.name);
            self.records.push(r);
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.status != Status::Pass)
    }

    pub fn status_of(&self, name: &str) -> Option<&Status> {
        self.records.iter().find(|r| r.name == name).map(|r| &r.status)
    }

    pub fn witness_of(&self, name: &str) -> Option<&str> {
        self.records.iter().find(|r| r.name == name).and_then(|r| r.witness.as_deref())
    }

    /// One `record` line per check: tab-separated `record`, name, status, witness.
    pub fn to_records(&self) -> String {
        let mut out = format!("report\t{}\n", escape(&self.title));
        for r in &self.records {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skipped => "skip",
            };
            out.push_str(&format!(
                "record\t{}\t{}\t{}\n",
                escape(&r.name),
                status,
                escape(r.witness.as_deref().unwrap_or("-"))
            ));
        }
        out.push_str(&format!("overall\t{}\n", if self.passed() { "pass" } else { "fail" }));
        out
    }
}

/// Escapes `\\`, tab and newline for the tab-separated record format.
pub fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n")
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {}", self.title)?;
        for r in &self.records {
            match r.status {
                Status::Pass => writeln!(f, "  [pass] {}", r.name)?,
                Status::Fail => writeln!(f, "  [FAIL] {}: {}", r.name, r.witness.as_deref().unwrap_or(""))?,
                Status::Skipped => writeln!(f, "  [skip] {}: {}", r.name, r.witness.as_deref().unwrap_or(""))?,
            }
        }
        write!(f, "overall: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}
