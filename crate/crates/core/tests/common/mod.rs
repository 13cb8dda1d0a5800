//! Figure regeneration through the CLI plus shape checks on the CSV it
//! writes. Shared by the acceptance harness and the figure tests.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::Path;

pub struct Csv {
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn col(&self, name: &str) -> usize {
        self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"))
    }

    pub fn f(&self, row: usize, name: &str) -> f64 {
        self.rows[row][self.col(name)].parse().unwrap_or(f64::NAN)
    }

    pub fn floats(&self, name: &str) -> Vec<f64> {
        (0..self.rows.len()).map(|r| self.f(r, name)).collect()
    }

    pub fn note(&self, prefix: &str) -> Option<&str> {
        self.notes.iter().find_map(|n| n.strip_prefix(prefix)).map(str::trim)
    }
}

/// Run the CLI writing CSV to `dir/<name>.csv` and read it back.
pub fn run_cli(dir: &Path, name: &str, args: &[&str]) -> Result<Csv, String> {
    let path = dir.join(format!("{name}.csv"));
    let mut argv: Vec<String> = vec!["qsingular".into()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.extend(["--output".into(), path.to_string_lossy().into_owned()]);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = qsingular::cli::run_to(argv, &mut out, &mut err);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<Csv, String> {
    let notes = text.lines().filter_map(|l| l.strip_prefix("# ")).map(String::from).collect();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let columns = rdr.headers().map_err(|e| e.to_string())?.iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| r.map(|r| r.iter().map(String::from).collect()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    Ok(Csv { notes, columns, rows })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Number of sign changes of the first difference, ignoring steps below `tol`.
pub fn slope_sign_changes(y: &[f64], tol: f64) -> usize {
    let signs: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).filter(|d| d.abs() > tol).map(f64::signum).collect();
    signs.windows(2).filter(|s| s[0] != s[1]).count()
}

/// Fig. 2: spectra along θ± = π/2 ± x are even in x with parities swapped,
/// and doubly degenerate at the self-dual point x = 0.
pub fn fig2(dir: &Path) -> Result<String, String> {
    let t = run_cli(dir, "fig2", &["spectrum", "--x-min", "-1.5", "--x-max", "1.5", "--points", "31", "--count", "6"])?;
    let per = 6;
    check(t.rows.len() == 31 * per, || format!("expected {} rows, got {}", 31 * per, t.rows.len()))?;
    let mut worst: f64 = 0.0;
    for i in 0..31 {
        let j = 30 - i;
        for m in 0..per {
            let (a, b) = (i * per + m, j * per + m);
            let (ea, eb) = (t.f(a, "energy"), t.f(b, "energy"));
            worst = worst.max((ea - eb).abs() / ea.abs().max(1.0));
            let (pa, pb) = (&t.rows[a][t.col("parity")], &t.rows[b][t.col("parity")]);
            check(i == j || pa != pb, || format!("x = ±{}: level {m} parity not swapped", t.f(a, "x")))?;
        }
    }
    check(worst < 1e-10, || format!("x ↔ −x mismatch {worst:e}"))?;
    let mid = 15 * per;
    for m in (0..per).step_by(2) {
        let (a, b) = (t.f(mid + m, "energy"), t.f(mid + m + 1, "energy"));
        check((a - b).abs() < 1e-10 * a.abs().max(1.0), || format!("self-dual pair {m} split: {a} vs {b}"))?;
    }
    Ok(format!("31 points × 6 levels, max x↔−x mismatch {worst:.1e}"))
}

/// Fig. 3: along (θ, θ + π) every level falls monotonically and surviving
/// levels end two places lower.
pub fn fig3(dir: &Path) -> Result<String, String> {
    let t = run_cli(dir, "fig3", &["loop-track", "--levels", "8", "--steps", "400"])?;
    check(t.note("uniform shift =") == Some("2"), || format!("shift note {:?}", t.note("uniform shift")))?;
    let (lvl, end) = (t.col("level"), t.col("end_level"));
    let mut survivors = 0;
    for start in 0..8 {
        let rows: Vec<usize> = (0..t.rows.len()).filter(|&r| t.rows[r][lvl] == start.to_string()).collect();
        let k: Vec<f64> = rows.iter().map(|&r| t.f(r, "k")).filter(|k| k.is_finite()).collect();
        check(k.windows(2).all(|w| w[1] <= w[0] + 1e-9), || format!("level {start} not monotone"))?;
        let e = &t.rows[rows[0]][end];
        if !e.is_empty() {
            survivors += 1;
            let e: usize = e.parse().map_err(|_| "bad end_level".to_string())?;
            check(start >= 2 && e == start - 2, || format!("level {start} ended at {e}"))?;
        }
    }
    check(survivors == 6, || format!("{survivors} survivors"))?;
    Ok("8 levels tracked, 6 survive with shift 2, 2 leave through −∞".into())
}

/// Fig. 4: k_n = (nπ + μ/2)/l, degenerate only at μ ∈ {0, π}.
pub fn fig4(dir: &Path) -> Result<String, String> {
    let t = run_cli(dir, "fig4", &["susy-check", "--points", "13", "--n-min", "-3", "--n-max", "3"])?;
    let mut min_gap_interior = f64::INFINITY;
    for p in 0..13 {
        let rows: Vec<usize> = (p * 7..p * 7 + 7).collect();
        let mu = t.f(rows[0], "mu");
        for &r in &rows {
            let n: f64 = t.f(r, "n");
            check((t.f(r, "k") - (n * PI + mu / 2.0)).abs() < 1e-12, || format!("k mismatch at μ = {mu}"))?;
        }
        let mut e: Vec<f64> = rows.iter().map(|&r| t.f(r, "energy")).collect();
        e.sort_by(f64::total_cmp);
        let gap = e.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if p == 0 || p == 12 {
            check(gap < 1e-12, || format!("no degeneracy at μ = {mu}"))?;
        } else {
            min_gap_interior = min_gap_interior.min(gap);
        }
    }
    check(min_gap_interior > 1e-3, || format!("interior degeneracy, gap {min_gap_interior}"))?;
    check(t.note("condition preserved:") == Some("state = true, image = true"), || "preservation note".into())?;
    Ok(format!("13 μ values, smallest interior gap {min_gap_interior:.3}"))
}

/// Fig. 6: exact bose force for t < 1 falls monotonically from 75 and the
/// low-temperature formula follows it.
pub fn fig6(dir: &Path) -> Result<String, String> {
    let args = ["force", "--t-min", "0.01", "--t-max", "1", "--points", "100", "--spacing", "linear"];
    let exact = run_cli(dir, "fig6_exact", &args)?;
    let low = run_cli(dir, "fig6_lowt", &[&args[..], &["--method", "low-t"]].concat())?;
    let (e, l, ts) = (exact.floats("delta_F_dimless"), low.floats("delta_F_dimless"), exact.floats("t"));
    check((e[0] - 75.0).abs() < 1e-6, || format!("ΔF(0.01) = {}", e[0]))?;
    check(e.windows(2).all(|w| w[1] <= w[0] + 1e-9), || "exact curve not monotone".into())?;
    let worst = ts.iter().zip(e.iter().zip(&l)).filter(|(t, _)| **t <= 0.5).map(|(_, (a, b))| (a - b).abs()).fold(0.0, f64::max);
    check(worst < 1e-3, || format!("low-t formula off by {worst}"))?;
    Ok(format!("monotone from 75, low-t deviation ≤ {worst:.1e} for t ≤ 0.5"))
}

/// Fig. 7 left: single interior minimum near 2N/3, linear formula good at
/// low t, integral approximation close throughout.
pub fn fig7_left(dir: &Path) -> Result<String, String> {
    let args = ["force", "--t-min", "1", "--t-max", "160", "--points", "160", "--spacing", "linear"];
    let exact = run_cli(dir, "fig7_exact", &args)?;
    let lin = run_cli(dir, "fig7_linear", &[&args[..], &["--method", "linear"]].concat())?;
    let int = run_cli(dir, "fig7_integral", &[&args[..], &["--method", "integral"]].concat())?;
    let (ts, e) = (exact.floats("t"), exact.floats("delta_F_dimless"));
    check(slope_sign_changes(&e, 1e-9) == 1, || format!("{} slope sign changes", slope_sign_changes(&e, 1e-9)))?;
    let imin = (0..e.len()).min_by(|&a, &b| e[a].total_cmp(&e[b])).unwrap();
    check((33.0..=100.0).contains(&ts[imin]), || format!("minimum at t = {}", ts[imin]))?;
    let l = lin.floats("delta_F_dimless");
    let lin_dev = (0..ts.len()).filter(|&i| ts[i] <= 40.0).map(|i| (l[i] / e[i] - 1.0).abs()).fold(0.0, f64::max);
    check(lin_dev < 0.05, || format!("linear formula deviates {lin_dev}"))?;
    let g = int.floats("delta_F_dimless");
    let int_dev = (0..ts.len()).map(|i| (g[i] / e[i] - 1.0).abs()).fold(0.0, f64::max);
    check(int_dev < 0.05, || format!("integral approximation deviates {int_dev}"))?;
    Ok(format!("minimum at t ≈ {:.0}, linear dev {lin_dev:.3} (t ≤ 40), integral dev {int_dev:.3}", ts[imin]))
}

/// Fig. 7 right: double-log curve approaches the √t asymptote from below.
pub fn fig7_right(dir: &Path) -> Result<String, String> {
    let args = ["force", "--t-min", "1e2", "--t-max", "1e8", "--points", "25", "--double-log"];
    let exact = run_cli(dir, "fig7r_exact", &args)?;
    let asym = run_cli(dir, "fig7r_asym", &[&args[..], &["--method", "asymptotic"]].concat())?;
    let (x, y, ya) = (exact.floats("log10_t"), exact.floats("log10_delta_F_dimless"), asym.floats("log10_delta_F_dimless"));
    let n = x.len();
    let gaps: Vec<f64> = (0..n).map(|i| ya[i] - y[i]).collect();
    check(gaps.iter().all(|g| *g > 0.0), || "exact curve crosses the asymptote".into())?;
    check(gaps.windows(2).all(|w| w[1] < w[0]), || "gap to asymptote not shrinking".into())?;
    let slope = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    check((slope - 0.5).abs() < 0.02, || format!("high-t log slope {slope}"))?;
    Ok(format!("log-log slope {slope:.4} at the top, final gap {:.1e} decades", gaps[n - 1]))
}

/// Fig. 8: fermi force starts at 5025 and declines, with a flattening
/// (local minimum of |slope|) before the main decline.
pub fn fig8(dir: &Path) -> Result<String, String> {
    let t = run_cli(dir, "fig8", &["force", "--stat", "fermi", "--t-min", "1", "--t-max", "500", "--points", "500", "--spacing", "linear"])?;
    let (ts, e) = (t.floats("t"), t.floats("delta_F_dimless"));
    check((e[0] - 5025.0).abs() < 5.0, || format!("ΔF(1) = {}", e[0]))?;
    check(e[e.len() - 1] < e[0], || "no decline".into())?;
    let slope: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
    // the step: |slope| rises, eases, then rises again
    let smooth: Vec<f64> = slope.windows(5).map(|w| w.iter().sum::<f64>() / 5.0).collect();
    let step = (1..smooth.len() - 1).find(|&i| smooth[i].abs() < smooth[i - 1].abs() && smooth[i].abs() < smooth[i + 1].abs() && smooth[i] < -1e-4);
    let Some(i) = step else { return Err("no flattening found".into()) };
    Ok(format!("flattening at t ≈ {:.0}, slope {:.1e} per unit t", ts[i + 2], smooth[i]))
}
