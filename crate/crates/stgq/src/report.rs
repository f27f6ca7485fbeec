//! The shared check-report schema: one record per check with a stable
//! field order, plus run-level summaries.

/// One verification record. Parameters keep insertion order so renderings
/// are byte-stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub check: String,
    pub subject: String,
    pub verdict: String,
    pub witnesses: Vec<String>,
    pub parameters: Vec<(String, String)>,
    /// excluded from the determinism contract.
    pub wall_time_ms: u128,
}

impl CheckRecord {
    pub fn new(check: &str, subject: &str, verdict: impl Into<String>) -> CheckRecord {
        CheckRecord {
            check: check.to_string(),
            subject: subject.to_string(),
            verdict: verdict.into(),
            witnesses: Vec::new(),
            parameters: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn pass(check: &str, subject: &str, ok: bool) -> CheckRecord {
        CheckRecord::new(check, subject, if ok { "pass" } else { "fail" })
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> CheckRecord {
        self.witnesses.push(w.into());
        self
    }

    pub fn with_parameter(mut self, key: &str, value: impl ToString) -> CheckRecord {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == "pass"
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub command: String,
    pub records: Vec<CheckRecord>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> RunReport {
        RunReport { command: command.into(), records: Vec::new() }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn passes(&self) -> usize {
        self.records.iter().filter(|r| r.is_pass()).count()
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.verdict == "fail").count()
    }

    /// Text rendering: one line per check.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("run: {}\n", self.command));
        for r in &self.records {
            let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(
                "{:<28} {:<34} {:<8} {}\n",
                r.check,
                r.subject,
                r.verdict,
                params.join(" ")
            ));
            for w in &r.witnesses {
                out.push_str(&format!("    witness: {w}\n"));
            }
        }
        out.push_str(&format!(
            "summary: {} checks, {} pass, {} fail\n",
            self.records.len(),
            self.passes(),
            self.failures()
        ));
        out
    }

    /// JSON rendering with a fixed key order; wall times are emitted but
    /// carry no determinism guarantee.
    pub fn render_json(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"command\": {},\n", json_string(&self.command)));
        out.push_str("  \"records\": [\n");
        for (i, r) in self.records.iter().enumerate() {
            out.push_str("    {");
            out.push_str(&format!("\"check\": {}, ", json_string(&r.check)));
            out.push_str(&format!("\"subject\": {}, ", json_string(&r.subject)));
            out.push_str(&format!("\"verdict\": {}, ", json_string(&r.verdict)));
            out.push_str("\"witnesses\": [");
            out.push_str(
                &r.witnesses.iter().map(|w| json_string(w)).collect::<Vec<_>>().join(", "),
            );
            out.push_str("], \"parameters\": {");
            out.push_str(
                &r.parameters
                    .iter()
                    .map(|(k, v)| format!("{}: {}", json_string(k), json_string(v)))
                    .collect::<Vec<_>>()
                    .join(", "),
            );
            out.push_str(&format!("}}, \"wall_time_ms\": {}}}", r.wall_time_ms));
            out.push_str(if i + 1 < self.records.len() { ",\n" } else { "\n" });
        }
        out.push_str("  ],\n");
        out.push_str(&format!(
            "  \"summary\": {{\"checks\": {}, \"pass\": {}, \"fail\": {}}}\n",
            self.records.len(),
            self.passes(),
            self.failures()
        ));
        out.push_str("}\n");
        out
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
