use std::fmt::Display;

/// Ordered `key: value` lines plus an optional file artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    lines: Vec<String>,
    passed: bool,
    artifact: Option<String>,
}

impl Report {
    pub fn new(command: &str, input: Option<&str>) -> Self {
        let mut lines = vec![format!("command: {command}")];
        if let Some(input) = input {
            lines.push(format!("input: {input}"));
        }
        Report {
            lines,
            passed: true,
            artifact: None,
        }
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    pub fn pass(&mut self) {
        self.kv("result", "pass");
    }

    pub fn fail(&mut self, reason: &str) {
        self.passed = false;
        self.kv("result", "fail");
        self.kv("reason", reason);
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn set_artifact(&mut self, text: String) {
        self.artifact = Some(text);
    }

    pub fn has_artifact(&self) -> bool {
        self.artifact.is_some()
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    /// Report lines only.
    pub fn render_plain(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }

    /// With an artifact the report becomes a `#` comment header, so the
    /// whole output still parses as the artifact's file format.
    pub fn render(&self) -> String {
        match (&self.artifact, self.passed) {
            (Some(artifact), true) => {
                let mut out: String = self.lines.iter().map(|l| format!("# {l}\n")).collect();
                out.push_str(artifact);
                out
            }
            _ => self.render_plain(),
        }
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

pub fn element_set(elements: &[usize]) -> String {
    let parts: Vec<String> = elements.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}
