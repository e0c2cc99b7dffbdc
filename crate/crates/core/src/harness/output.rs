//! CSV records, plot data and fit summaries.

use super::{fit_rate, theoretical_exponent, Abscissa, Aggregator, ExperimentConfig, Task, TrialRecord};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const CSV_HEADER: &str = "task,N,eps,trial,seed,excess_risk,std_error,h,k,T,n0,wall_ms";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Header plus one line per record; floats in shortest round-trip form.
pub fn format_csv(records: &[TrialRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.task,
            r.n,
            r.eps,
            r.trial,
            r.seed,
            r.excess_risk,
            r.std_error,
            opt(r.h),
            opt(r.k),
            opt(r.t),
            opt(r.n0),
            opt(r.wall_ms)
        );
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<TrialRecord>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(Error::Config(format!("expected CSV header `{CSV_HEADER}`")));
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| parse_line(line).map_err(|e| Error::Config(format!("line {}: {e}", i + 2))))
        .collect()
}

fn parse_line(line: &str) -> std::result::Result<TrialRecord, String> {
    let f: Vec<&str> = line.trim_end().split(',').collect();
    if f.len() != 12 {
        return Err(format!("expected 12 fields, found {}", f.len()));
    }
    fn num<T: std::str::FromStr>(s: &str, name: &str) -> std::result::Result<T, String> {
        s.parse().map_err(|_| format!("bad {name} `{s}`"))
    }
    fn maybe<T: std::str::FromStr>(s: &str, name: &str) -> std::result::Result<Option<T>, String> {
        if s.is_empty() {
            Ok(None)
        } else {
            num(s, name).map(Some)
        }
    }
    Ok(TrialRecord {
        task: f[0].parse::<Task>().map_err(|e| e.to_string())?,
        n: num(f[1], "N")?,
        eps: num(f[2], "eps")?,
        trial: num(f[3], "trial")?,
        seed: num(f[4], "seed")?,
        excess_risk: num(f[5], "excess_risk")?,
        std_error: num(f[6], "std_error")?,
        h: maybe(f[7], "h")?,
        k: maybe(f[8], "k")?,
        t: maybe(f[9], "T")?,
        n0: maybe(f[10], "n0")?,
        wall_ms: maybe(f[11], "wall_ms")?,
    })
}

fn default_abscissa(config: &ExperimentConfig) -> Abscissa {
    if config.n_grid.len() >= config.eps_grid.len() {
        Abscissa::N
    } else if config.task.is_local() {
        Abscissa::NEps2
    } else {
        Abscissa::EpsN
    }
}

/// Writes `records.csv`, one `sweep_*.dat` file per sweep and `fits.txt`
/// into `dir`. Sweeps along `N` hold ε fixed; sweeps along `epsN` or
/// `Neps2` hold `N` fixed. Returns the paths written.
pub fn write_outputs(dir: &Path, config: &ExperimentConfig, records: &[TrialRecord]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let csv = dir.join("records.csv");
    std::fs::write(&csv, format_csv(records))?;
    written.push(csv);

    let abscissa = config.abscissa.unwrap_or_else(|| default_abscissa(config));
    let dist = config.build_distribution()?;
    let params = dist.params();
    let theory = theoretical_exponent(config.task, params.beta, params.gamma, dist.dim(), params.moment_order, abscissa)
        .ok();
    let sweeps: Vec<(String, Vec<TrialRecord>)> = if abscissa == Abscissa::N {
        config
            .eps_grid
            .iter()
            .map(|&e| (format!("eps{e}"), records.iter().filter(|r| r.eps == e).cloned().collect()))
            .collect()
    } else {
        config
            .n_grid
            .iter()
            .map(|&n| (format!("N{n}"), records.iter().filter(|r| r.n == n).cloned().collect()))
            .collect()
    };

    let mut summary = String::new();
    for (label, subset) in sweeps {
        let name = format!("{}_{}_{}", config.task, abscissa, label);
        let _ = writeln!(summary, "[{name}]");
        match fit_rate(&subset, abscissa, Aggregator::Median) {
            Ok(fit) => {
                let mut dat = String::from("# ln_abscissa ln_risk\n");
                for (x, y) in &fit.points {
                    let _ = writeln!(dat, "{} {}", x.ln(), y.ln());
                }
                let path = dir.join(format!("sweep_{name}.dat"));
                std::fs::write(&path, dat)?;
                written.push(path);
                let _ = writeln!(summary, "slope = {}", fit.slope);
                let _ = writeln!(summary, "intercept = {}", fit.intercept);
                let _ = writeln!(summary, "slope_std_error = {}", fit.slope_std_error);
                if let Some(t) = theory {
                    let _ = writeln!(summary, "theoretical_exponent = {t}");
                }
                let _ = writeln!(summary, "points = {}", fit.points.len());
                if !fit.dropped.is_empty() {
                    let _ = writeln!(summary, "dropped = {:?}", fit.dropped);
                }
            }
            Err(e) => {
                let _ = writeln!(summary, "# no fit: {e}");
            }
        }
        summary.push('\n');
    }
    let path = dir.join("fits.txt");
    std::fs::write(&path, summary)?;
    written.push(path);
    Ok(written)
}
