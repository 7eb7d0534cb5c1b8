use std::path::{Path, PathBuf};

use rayon::prelude::*;
use steptrap::analytic::{spectrum_scan, ScanAxis, ScanSpec};
use steptrap::dynamics::{run_quench, QuenchScenario};
use steptrap::model::{symmetry_of, ChannelSpec, Dimension, RydbergPotential, StepPotential};
use steptrap::observables::correlation_scan;
use steptrap::perturbation::{compare, first_order_state};

use crate::cli::{CorrelationArgs, PerturbArgs, QuenchArgs, SpectrumArgs, Vary};
use crate::output::{num, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
    /// Every point of the run failed.
    NothingSolved(Vec<String>),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::NothingSolved(fails) => {
                write!(f, "no point could be solved ({} failures)", fails.len())?;
                if let Some(first) = fails.first() {
                    write!(f, "; first: {first}")?;
                }
                Ok(())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// What a run produced, for its manifest.
pub struct Report {
    pub params: Vec<(String, String)>,
    pub outputs: Vec<PathBuf>,
    pub rows: usize,
    pub failures: Vec<String>,
}

impl Report {
    /// Every row failed.
    pub fn nothing_solved(&self) -> bool {
        self.rows > 0 && self.failures.len() >= self.rows
    }
}

fn param(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn path_param(p: &Path) -> (String, String) {
    param("out", p.display())
}

/// The run parameters echoed into a CSV header; the output path is left out
/// so a redirected replay is byte-identical.
fn csv_meta(params: &[(String, String)]) -> Vec<(String, String)> {
    let mut meta = vec![param("version", env!("CARGO_PKG_VERSION"))];
    meta.extend(params.iter().filter(|(k, _)| k != "out").cloned());
    meta
}

pub fn parse_dim(d: u32) -> Result<Dimension, CliError> {
    Dimension::from_int(d).map_err(|e| usage(e.to_string()))
}

/// lo:hi:points
pub fn parse_range(s: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("range must be lo:hi:points, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !lo.is_finite() || !hi.is_finite() || (n > 1 && hi < lo) {
        return Err(bad());
    }
    Ok((lo, hi, n))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn parse_list(key: &str, s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || usage(format!("bad {key} list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u32, u32) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
        if b < a {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    Ok(vec![s.parse().map_err(|_| bad())?])
}

/// n=0..8, n=0,l=0..4, n=0..2,l=1 ... as the product of the n and l lists.
pub fn parse_levels(dim: Dimension, s: &str) -> Result<Vec<ChannelSpec>, CliError> {
    let (mut ns, mut ls) = (Vec::new(), Vec::new());
    for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = token.split_once('=').ok_or_else(|| usage(format!("level token {token:?} needs n= or l=")))?;
        match k.trim() {
            "n" => ns.extend(parse_list("n", v.trim())?),
            "l" => ls.extend(parse_list("l", v.trim())?),
            other => return Err(usage(format!("unknown level key {other:?}"))),
        }
    }
    if ns.is_empty() {
        ns.push(0);
    }
    if ls.is_empty() {
        ls.push(0);
    }
    let mut out = Vec::new();
    for &l in &ls {
        for &n in &ns {
            out.push(ChannelSpec::new(dim, n, l).map_err(|e| usage(e.to_string()))?);
        }
    }
    Ok(out)
}

fn parse_fixed(vary: Vary, s: &str) -> Result<f64, CliError> {
    let held = match vary {
        Vary::V0 => "a",
        Vary::A => "v0",
    };
    let value = match s.split_once('=') {
        Some((k, v)) if k.trim() == held => v,
        Some((k, _)) => return Err(usage(format!("--fixed names {k:?} but the held parameter is {held}"))),
        None => s,
    };
    value.trim().parse().map_err(|_| usage(format!("bad --fixed value {s:?}")))
}

fn level_label(c: ChannelSpec) -> String {
    format!("n={}:l={}", c.n, c.l)
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Report, CliError> {
    let dim = parse_dim(a.dim)?;
    let (lo, hi, points) = parse_range(&a.range)?;
    let fixed = parse_fixed(a.vary, &a.fixed)?;
    let channels = parse_levels(dim, &a.levels)?;
    if !(a.scan_step > 0.0) {
        return Err(usage("--scan-step must be positive"));
    }
    let axis = match a.vary {
        Vary::V0 => ScanAxis::V0,
        Vary::A => ScanAxis::Range,
    };
    let sweep = ScanSpec { axis, fixed, lo, hi, points };
    // reject an invalid held value up front rather than failing every point
    sweep.potential_at(lo).map_err(|e| usage(e.to_string()))?;
    let params = vec![
        param("dim", a.dim),
        param("vary", a.vary.as_str()),
        param("fixed", &a.fixed),
        param("range", &a.range),
        param("levels", &a.levels),
        param("scan-step", a.scan_step),
        path_param(&a.out),
    ];
    let result = spectrum_scan(&channels, &sweep, a.scan_step);
    let mut table = Table::new("steptrap spectrum", csv_meta(&params), vec!["scan_value", "dim", "n", "l", "symmetry", "energy"]);
    let mut failures = Vec::new();
    for row in &result.rows {
        let energy = match &row.energy {
            Ok(e) => num(*e),
            Err(e) => {
                failures.push(format!("{}={} {}: {e}", a.vary.as_str(), row.scan_value, level_label(row.channel)));
                String::new()
            }
        };
        table.rows.push(vec![
            num(row.scan_value),
            row.channel.dim.as_int().to_string(),
            row.channel.n.to_string(),
            row.channel.l.to_string(),
            symmetry_of(row.channel).as_str().to_string(),
            energy,
        ]);
    }
    table.write(&a.out)?;
    Ok(Report { params, outputs: vec![a.out.clone()], rows: table.rows.len(), failures })
}

pub fn correlation(a: &CorrelationArgs) -> Result<Report, CliError> {
    let dim = parse_dim(a.dim)?;
    let (lo, hi, points) = parse_range(&a.a_range)?;
    if lo < 0.0 || !a.v0.is_finite() {
        return Err(usage("ranges must be non-negative and v0 finite"));
    }
    let params = vec![param("dim", a.dim), param("v0", a.v0), param("a-range", &a.a_range), path_param(&a.out)];
    let scan = correlation_scan(dim, a.v0, lo, hi, points);
    let mut table = Table::new("steptrap correlation", csv_meta(&params), vec!["a", "energy", "avg_separation"]);
    let mut failures = Vec::new();
    for (range, point) in linspace(lo, hi, points).into_iter().zip(scan) {
        match point {
            Ok(p) => table.rows.push(vec![num(p.a), num(p.energy), num(p.avg_separation)]),
            Err(e) => {
                failures.push(format!("a={range}: {e}"));
                table.rows.push(vec![num(range), String::new(), String::new()]);
            }
        }
    }
    table.write(&a.out)?;
    Ok(Report { params, outputs: vec![a.out.clone()], rows: table.rows.len(), failures })
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}.csv"))
}

pub fn perturb(a: &PerturbArgs) -> Result<Report, CliError> {
    let dim = parse_dim(a.dim)?;
    let (lo, hi, points) = parse_range(&a.v0_range)?;
    let channels = parse_levels(dim, &a.levels)?;
    RydbergPotential::new(0.0, a.a).map_err(|e| usage(e.to_string()))?;
    let mut params = vec![
        param("dim", a.dim),
        param("a", a.a),
        param("v0-range", &a.v0_range),
        param("levels", &a.levels),
        param("experimental-eigvec", a.experimental_eigvec),
    ];
    if a.experimental_eigvec {
        params.push(param("basis", a.basis));
    }
    params.push(path_param(&a.out));
    let jobs: Vec<(f64, ChannelSpec)> =
        linspace(lo, hi, points).into_iter().flat_map(|v| channels.iter().map(move |&c| (v, c))).collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(v0, c)| {
            let q = RydbergPotential::new(v0, a.a)?;
            compare(c, q.as_step(), q)
        })
        .collect();
    let mut table =
        Table::new("steptrap perturb", csv_meta(&params), vec!["v0", "level", "e_step", "e_corrected", "e_numerov"]);
    let mut failures = Vec::new();
    for (&(v0, c), r) in jobs.iter().zip(&results) {
        match r {
            Ok(r) => table.rows.push(vec![num(v0), level_label(c), num(r.e_step), num(r.e_corrected), num(r.e_numerov)]),
            Err(e) => {
                failures.push(format!("v0={v0} {}: {e}", level_label(c)));
                table.rows.push(vec![num(v0), level_label(c), String::new(), String::new(), String::new()]);
            }
        }
    }
    table.write(&a.out)?;
    let mut outputs = vec![a.out.clone()];
    let rows = table.rows.len();
    if a.experimental_eigvec {
        let path = sibling(&a.out, "eigvec");
        let states: Vec<_> = jobs
            .par_iter()
            .map(|&(v0, c)| {
                let q = RydbergPotential::new(v0, a.a)?;
                let p: StepPotential = q.as_step();
                let step = steptrap::analytic::solve(c, p)?;
                let corrected = first_order_state(c, p, q, a.basis)?;
                Ok::<_, steptrap::Error>((step, corrected))
            })
            .collect();
        let mut t = Table::new(
            "steptrap perturb eigenfunctions (experimental)",
            csv_meta(&params),
            vec!["v0", "level", "r", "f_step", "f_corrected"],
        );
        for (&(v0, c), s) in jobs.iter().zip(states) {
            match s {
                Ok((step, corrected)) => {
                    for (i, x) in corrected.points().iter().enumerate() {
                        let f = steptrap::grid::interpolate(&step.grid, &step.values, *x);
                        t.rows.push(vec![num(v0), level_label(c), num(*x), num(f), num(corrected.values[i])]);
                    }
                }
                Err(e) => failures.push(format!("eigvec v0={v0} {}: {e}", level_label(c))),
            }
        }
        t.write(&path)?;
        outputs.push(path);
    }
    Ok(Report { params, outputs, rows, failures })
}

fn parse_times(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().ok().filter(|t| *t >= 0.0).ok_or_else(|| usage(format!("bad snapshot time {t:?}"))))
        .collect()
}

pub fn quench(a: &QuenchArgs) -> Result<Report, CliError> {
    let initial = StepPotential::new(a.v0_initial, a.a).map_err(|e| usage(e.to_string()))?;
    let quenched = StepPotential::new(a.v0_final, a.a_final.unwrap_or(a.a)).map_err(|e| usage(e.to_string()))?;
    let snapshot_times = parse_times(&a.snapshots)?;
    if !(a.t_max > 0.0 && a.dt > 0.0 && a.dx > 0.0 && a.half_width > 0.0) || a.sample_every == 0 {
        return Err(usage("--t-max, --dt, --dx, --box and --sample-every must be positive"));
    }
    let mut params = vec![param("v0-initial", a.v0_initial), param("v0-final", a.v0_final), param("a", a.a)];
    if let Some(af) = a.a_final {
        params.push(param("a-final", af));
    }
    params.extend([
        param("n", a.n),
        param("t-max", a.t_max),
        param("dt", a.dt),
        param("dx", a.dx),
        param("box", a.half_width),
        param("snapshots", &a.snapshots),
        param("sample-every", a.sample_every),
        path_param(&a.out),
    ]);
    let scenario = QuenchScenario {
        initial,
        quenched,
        t_max: a.t_max,
        dt: a.dt,
        dx: a.dx,
        half_width: a.half_width,
        sample_every: a.sample_every,
        snapshot_times,
    };
    let series = match run_quench(&scenario, ChannelSpec::one_d(a.n)) {
        Ok(s) => s,
        Err(steptrap::Error::Domain(m)) => return Err(usage(m)),
        Err(e) => return Err(CliError::NothingSolved(vec![e.to_string()])),
    };
    let meta = csv_meta(&params);
    let mut table = Table::new("steptrap quench", meta.clone(), vec!["t", "fidelity", "avg_separation"]);
    for i in 0..series.times.len() {
        table.rows.push(vec![num(series.times[i]), num(series.fidelity[i]), num(series.avg_separation[i])]);
    }
    table.write(&a.out)?;
    let mut outputs = vec![a.out.clone()];
    for (t, density) in &series.snapshots {
        let path = sibling(&a.out, &format!("snapshot-t{t}"));
        let mut snap_meta = meta.clone();
        snap_meta.push(param("t", t));
        let mut s = Table::new("steptrap quench snapshot", snap_meta, vec!["x", "density"]);
        s.rows = series.x.iter().zip(density).map(|(x, d)| vec![num(*x), num(*d)]).collect();
        s.write(&path)?;
        outputs.push(path);
    }
    Ok(Report { params, outputs, rows: table.rows.len(), failures: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-20:20:201").unwrap(), (-20.0, 20.0, 201));
        assert_eq!(parse_range("1:1:1").unwrap(), (1.0, 1.0, 1));
        for bad in ["1:2", "a:b:c", "0:1:0", "2:1:5"] {
            assert!(matches!(parse_range(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn levels() {
        assert_eq!(parse_levels(Dimension::One, "n=0..8").unwrap().len(), 9);
        let l = parse_levels(Dimension::Two, "n=0,l=0..4").unwrap();
        assert_eq!(l.len(), 5);
        assert_eq!(l[4], ChannelSpec::radial(Dimension::Two, 0, 4).unwrap());
        assert_eq!(parse_levels(Dimension::Three, "n=0..1,l=1").unwrap().len(), 2);
        assert!(parse_levels(Dimension::One, "n=0,l=1").is_err());
        assert!(parse_levels(Dimension::Two, "m=1").is_err());
        assert!(parse_levels(Dimension::Two, "n=3..1").is_err());
    }

    #[test]
    fn held_parameter() {
        assert_eq!(parse_fixed(Vary::V0, "a=1").unwrap(), 1.0);
        assert_eq!(parse_fixed(Vary::A, "v0=-5").unwrap(), -5.0);
        assert_eq!(parse_fixed(Vary::A, "-5").unwrap(), -5.0);
        assert!(parse_fixed(Vary::V0, "v0=1").is_err());
    }

    #[test]
    fn snapshot_paths() {
        assert_eq!(sibling(Path::new("out/q.csv"), "snapshot-t1"), PathBuf::from("out/q.snapshot-t1.csv"));
        assert_eq!(parse_times("0, 1,2.5").unwrap(), vec![0.0, 1.0, 2.5]);
        assert!(parse_times("0,-1").is_err());
    }
}
