use std::io::Write as _;
use std::path::Path;
use std::time::Duration;

use encsynth::circuit::Circuit;
use encsynth::code::AnyCode;
use encsynth::synth::Mode;

use crate::Failure;

/// Ordered key=value report.
pub struct Report {
    fields: Vec<(String, String)>,
}

impl Report {
    pub fn new(label: &str, mode: Mode, code: &AnyCode) -> Self {
        let mut r = Report { fields: Vec::new() };
        r.set("code", label);
        r.set("n", code.n());
        r.set("k", code.k());
        r.set("mode", mode);
        r
    }

    /// Sets a field, replacing an earlier value for the same key.
    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string().replace('\n', " ");
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(f) => f.1 = value,
            None => self.fields.push((key.to_string(), value)),
        }
    }

    pub fn metrics(&mut self, c: &Circuit, wall: Duration) {
        self.set("two_qubit_gates", c.two_qubit_count());
        self.set("depth", c.depth());
        self.set("total_gates", c.decomposed().gates.len());
        self.set("wall_time", format!("{:.3}", wall.as_secs_f64()));
    }

    pub fn to_text(&self) -> String {
        self.fields.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::Usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
