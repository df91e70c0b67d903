//! CSV writers. Every number is written with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use wehrlsim::scenarios::{EigenComparison, Run, SweepRow, SweepTable};

use crate::error::CliError;

pub const TRAJECTORY_COLUMNS: [&str; 14] = [
    "time",
    "energy",
    "S_Q",
    "S_vN",
    "dS_U",
    "dS_th",
    "dS_lc",
    "Pi_th",
    "Phi_th",
    "Pi_lc",
    "coherence_l1",
    "fidelity_ref",
    "trace_err",
    "min_eig",
];

pub const POPULATION_COLUMNS: [&str; 3] = ["time", "level_index", "probability"];

pub const EIGEN_COLUMNS: [&str; 5] = ["time", "level_index", "spin", "continuous", "rel_err"];

pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn header(cols: &[&str]) -> String {
    let mut s = cols.join(",");
    s.push('\n');
    s
}

fn push_row(out: &mut String, values: impl IntoIterator<Item = String>) {
    let row: Vec<String> = values.into_iter().collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

pub fn trajectory_csv(run: &Run) -> String {
    let mut out = header(&TRAJECTORY_COLUMNS);
    let t = &run.trajectory;
    for (time, obs) in t.times.iter().zip(&t.observables) {
        push_row(
            &mut out,
            std::iter::once(*time).chain(obs.as_row()).map(fmt_num),
        );
    }
    out
}

pub fn populations_csv(run: &Run) -> String {
    let mut out = header(&POPULATION_COLUMNS);
    for (time, pops) in run.trajectory.times.iter().zip(&run.populations) {
        for (k, p) in pops.iter().enumerate() {
            let _ = writeln!(out, "{},{k},{}", fmt_num(*time), fmt_num(*p));
        }
    }
    out
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = header(&SweepRow::COLUMNS);
    for row in &table.rows {
        push_row(&mut out, row.as_row().into_iter().map(fmt_num));
    }
    out
}

pub fn eigen_csv(cmp: &EigenComparison) -> String {
    let mut out = header(&EIGEN_COLUMNS);
    for ((t, spin), cont) in cmp.times.iter().zip(&cmp.spin).zip(&cmp.continuous) {
        for (k, (a, b)) in spin.iter().zip(cont).enumerate() {
            let rel = (a - b).abs() / b.abs().max(1.0);
            let _ = writeln!(out, "{},{k},{},{},{}", fmt_num(*t), fmt_num(*a), fmt_num(*b), fmt_num(rel));
        }
    }
    out
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        let s = fmt_num(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        assert_eq!(fmt_num(f64::NAN), "NaN");
        let x = std::f64::consts::PI * 1e-7;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn trajectory_header_order() {
        assert_eq!(
            header(&TRAJECTORY_COLUMNS),
            "time,energy,S_Q,S_vN,dS_U,dS_th,dS_lc,Pi_th,Phi_th,Pi_lc,coherence_l1,fidelity_ref,trace_err,min_eig\n"
        );
    }
}
