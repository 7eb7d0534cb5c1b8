//! CSV tables with '#' metadata lines, and flat key=value run manifests.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Fixed scientific formatting, 12 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub struct Table {
    pub title: String,
    pub meta: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, meta: Vec<(String, String)>, header: Vec<&'static str>) -> Self {
        Self { title: title.into(), meta, header, rows: Vec::new() }
    }

    pub fn render(&self) -> String {
        let mut s = format!("# {}\n", self.title);
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}={v}");
        }
        s += &self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s += &r.join(",");
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.render())
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub subcommand: String,
    pub version: String,
    /// Flag name (without dashes) and value, enough to rebuild the run.
    pub params: Vec<(String, String)>,
    pub outputs: Vec<PathBuf>,
    pub rows: usize,
    pub failures: Vec<String>,
    pub wall_time: f64,
}

impl Manifest {
    pub fn render(&self) -> String {
        let mut s = String::from("# steptrap run manifest\n");
        let _ = writeln!(s, "subcommand={}", self.subcommand);
        let _ = writeln!(s, "version={}", self.version);
        for (k, v) in &self.params {
            let _ = writeln!(s, "param.{k}={v}");
        }
        for (i, o) in self.outputs.iter().enumerate() {
            let _ = writeln!(s, "output.{i}={}", o.display());
        }
        let _ = writeln!(s, "rows={}", self.rows);
        let _ = writeln!(s, "failures={}", self.failures.len());
        for (i, f) in self.failures.iter().enumerate() {
            let _ = writeln!(s, "failure.{i}={}", f.replace('\n', " "));
        }
        let _ = writeln!(s, "wall_time_s={:.3}", self.wall_time);
        s
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut m = Manifest::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", lineno + 1))?;
            match k {
                "subcommand" => m.subcommand = v.to_string(),
                "version" => m.version = v.to_string(),
                "rows" => m.rows = v.parse().map_err(|_| format!("line {}: bad row count", lineno + 1))?,
                "wall_time_s" => m.wall_time = v.parse().unwrap_or(0.0),
                "failures" => {}
                _ if k.starts_with("param.") => m.params.push((k["param.".len()..].to_string(), v.to_string())),
                _ if k.starts_with("output.") => m.outputs.push(PathBuf::from(v)),
                _ if k.starts_with("failure.") => m.failures.push(v.to_string()),
                _ => return Err(format!("line {}: unknown key {k}", lineno + 1)),
            }
        }
        if m.subcommand.is_empty() {
            return Err("manifest names no subcommand".into());
        }
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.render())
    }

    /// Command line reproducing the run, with `out` optionally redirected.
    pub fn argv(&self, out: Option<&Path>) -> Vec<String> {
        let mut argv = vec!["steptrap".to_string(), self.subcommand.clone()];
        for (k, v) in &self.params {
            let v = match (k.as_str(), out) {
                ("out", Some(o)) => o.display().to_string(),
                _ => v.clone(),
            };
            match v.as_str() {
                "true" => argv.push(format!("--{k}")),
                "false" => {}
                _ => argv.push(format!("--{k}={v}")),
            }
        }
        argv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_width_numbers() {
        assert_eq!(num(0.5), "5.00000000000e-1");
        assert_eq!(num(-1234.5678), "-1.23456780000e3");
    }

    #[test]
    fn manifest_round_trip() {
        let m = Manifest {
            subcommand: "spectrum".into(),
            version: "0.1.0".into(),
            params: vec![("dim".into(), "1".into()), ("range".into(), "-20:20:201".into()), ("flag".into(), "true".into())],
            outputs: vec![PathBuf::from("a.csv")],
            rows: 3,
            failures: vec!["v0=1: no root".into()],
            wall_time: 0.25,
        };
        let back = Manifest::parse(&m.render()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.argv(Some(Path::new("b.csv")))[2..], ["--dim=1", "--range=-20:20:201", "--flag"]);
        assert!(Manifest::parse("rows=1\n").is_err());
        assert!(Manifest::parse("subcommand=x\nbogus\n").is_err());
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new("demo", vec![("dim".into(), "2".into())], vec!["a", "b"]);
        t.rows.push(vec!["1".into(), "".into()]);
        assert_eq!(t.render(), "# demo\n# dim=2\na,b\n1,\n");
        assert_eq!(manifest_path(Path::new("x/y.csv")), PathBuf::from("x/y.csv.manifest"));
    }
}
