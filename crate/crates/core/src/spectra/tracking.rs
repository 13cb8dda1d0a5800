use crate::anholonomy::{polyline_point, LoopPath, LoopSpace};
use crate::error::{Error, Result};

use super::well::{parity_of_channel, robin_half_well_levels};
use super::{Parity, Series, WellParams};

/// One level followed around a loop.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTrajectory {
    pub series: Series,
    pub parity: Parity,
    /// Position in the merged spectrum at the loop start.
    pub start_index: usize,
    /// Position in the merged spectrum at the loop end; `None` when the level
    /// left the spectrum (a bound state diving to `−∞` as `L(θ) → 0⁺`).
    pub end_index: Option<usize>,
    /// Energy at every loop sample; `NaN` once the level is gone.
    pub energies: Vec<f64>,
}

impl LevelTrajectory {
    /// Signed momenta `k` (or `−κ` below zero energy) along the loop.
    pub fn momenta(&self, kinetic: f64) -> Vec<f64> {
        self.energies
            .iter()
            .map(|&e| if e >= 0.0 { (e / kinetic).sqrt() } else { -(-e / kinetic).sqrt() })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackingResult {
    /// Loop parameter `s ∈ [0, 1]` (fraction of polyline length) per sample.
    pub parameter: Vec<f64>,
    pub trajectories: Vec<LevelTrajectory>,
    /// Lowest merged energies at the start and end of the loop.
    pub start_spectrum: Vec<f64>,
    pub end_spectrum: Vec<f64>,
    /// `(start_index, start_index − end_index)` per tracked level.
    pub shifts: Vec<(usize, Option<i64>)>,
}

impl TrackingResult {
    /// Largest relative difference between start and end spectra.
    pub fn spectrum_mismatch(&self) -> f64 {
        self.start_spectrum
            .iter()
            .zip(&self.end_spectrum)
            .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
            .fold(0.0, f64::max)
    }
}

/// Extra levels per channel beyond those tracked, so that offset moves near
/// the top of the list never touch tracked levels.
const CHANNEL_MARGIN: usize = 6;
const MAX_SUBDIVISION: u32 = 12;

struct Sampler<'a> {
    well: &'a WellParams,
    cumulative: Vec<f64>,
    points: &'a [[f64; 2]],
    per_channel: usize,
}

impl Sampler<'_> {
    fn position(&self, s: f64) -> [f64; 2] {
        polyline_point(self.points, &self.cumulative, s)
    }

    /// Channel energies (plus, minus) at loop parameter `s`.
    fn spectra(&self, s: f64) -> Result<[Vec<f64>; 2]> {
        let th = self.position(s);
        let w = self.well;
        let get = |theta: f64| -> Result<Vec<f64>> {
            Ok(robin_half_well_levels(theta, w.half_width, w.l0(), self.per_channel, &w.units)?
                .into_iter()
                .map(|(_, e)| e)
                .collect())
        };
        Ok([get(th[0])?, get(th[1])?])
    }
}

/// Offset `d` mapping old slot `i` to new slot `i + d`, or `None` if the
/// step is ambiguous. The two lowest slots are left out of the cost: they
/// hold the level that can dive to `−∞` within one step.
fn best_offset(prev: &[f64], next: &[f64]) -> Option<i64> {
    let m = prev.len();
    let mut costs = Vec::with_capacity(3);
    for d in [-1i64, 0, 1] {
        let mut total = 0.0;
        let mut n = 0;
        for i in 2..m - 1 {
            let j = i as i64 + d;
            if j < 0 || j as usize >= m {
                continue;
            }
            let gap = (prev[i + 1] - prev[i]).min(prev[i] - prev[i - 1]);
            total += (next[j as usize] - prev[i]).abs() / gap;
            n += 1;
        }
        costs.push((total / n as f64, d));
    }
    costs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if costs[0].0 < 0.5 && costs[1].0 - costs[0].0 >= 0.1 {
        Some(costs[0].1)
    } else {
        None
    }
}

/// Per-channel offsets between loop parameters `s0` and `s1`, refining the
/// step where the match is ambiguous.
fn step_offsets(
    sampler: &Sampler,
    s0: f64,
    spec0: &[Vec<f64>; 2],
    s1: f64,
    spec1: &[Vec<f64>; 2],
    depth: u32,
) -> Result<[i64; 2]> {
    let direct = [best_offset(&spec0[0], &spec1[0]), best_offset(&spec0[1], &spec1[1])];
    if let [Some(a), Some(b)] = direct {
        return Ok([a, b]);
    }
    if depth >= MAX_SUBDIVISION {
        return Err(Error::TrackingAmbiguity(s0));
    }
    let mid = 0.5 * (s0 + s1);
    let spec_mid = sampler.spectra(mid)?;
    let a = step_offsets(sampler, s0, spec0, mid, &spec_mid, depth + 1)?;
    let b = step_offsets(sampler, mid, &spec_mid, s1, spec1, depth + 1)?;
    Ok([a[0] + b[0], a[1] + b[1]])
}

/// Merged order of (channel, slot) pairs: by energy, then `Plus` first.
fn merged_order(spec: &[Vec<f64>; 2]) -> Vec<(usize, usize)> {
    let mut all: Vec<(f64, usize, usize)> = Vec::new();
    for (c, levels) in spec.iter().enumerate() {
        for (i, &e) in levels.iter().enumerate() {
            all.push((e, c, i));
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    all.into_iter().map(|(_, c, i)| (c, i)).collect()
}

fn merged_energies(spec: &[Vec<f64>; 2], n: usize) -> Vec<f64> {
    merged_order(spec).into_iter().take(n).map(|(c, i)| spec[c][i]).collect()
}

/// Follow the lowest `n_levels` levels of the well around a loop on the
/// spectral torus, sampled at `steps` equal fractions of the polyline length.
///
/// Within each eigen-channel levels keep their order, so continuation is a
/// choice of slot offset per step: `0` normally, `−1` when the channel's
/// lowest level leaves (as `L(θ) → 0⁺`) and `+1` when one enters from `−∞`.
pub fn track_levels_along_loop(
    path: &LoopPath,
    well: &WellParams,
    n_levels: usize,
    steps: usize,
) -> Result<TrackingResult> {
    path.validate()?;
    if path.space != LoopSpace::Torus {
        return Err(Error::UnsupportedLoop("level tracking needs a loop on the spectral torus".into()));
    }
    if !path.is_closed() {
        return Err(Error::OpenLoop);
    }
    if n_levels == 0 || steps == 0 {
        return Err(Error::InvalidParameter("n_levels and steps must be positive".into()));
    }
    let mut cumulative = vec![0.0];
    for seg in path.points.windows(2) {
        let d = (seg[1][0] - seg[0][0]).hypot(seg[1][1] - seg[0][1]);
        cumulative.push(cumulative.last().unwrap() + d);
    }
    let sampler = Sampler { well, cumulative, points: &path.points, per_channel: n_levels + CHANNEL_MARGIN };
    let params: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();

    let start = sampler.spectra(0.0)?;
    let order = merged_order(&start);
    // labels[c][slot] = trajectory id, or usize::MAX for untracked levels
    let mut labels = [vec![usize::MAX; sampler.per_channel], vec![usize::MAX; sampler.per_channel]];
    let mut trajectories = Vec::with_capacity(n_levels);
    for (id, &(c, i)) in order.iter().take(n_levels).enumerate() {
        labels[c][i] = id;
        let series = if c == 0 { Series::Plus } else { Series::Minus };
        trajectories.push(LevelTrajectory {
            series,
            parity: parity_of_channel(well, series),
            start_index: id,
            end_index: None,
            energies: Vec::with_capacity(steps + 1),
        });
    }
    let record = |trajs: &mut Vec<LevelTrajectory>, labels: &[Vec<usize>; 2], spec: &[Vec<f64>; 2]| {
        for t in trajs.iter_mut() {
            t.energies.push(f64::NAN);
        }
        for c in 0..2 {
            for (slot, &id) in labels[c].iter().enumerate() {
                if id != usize::MAX {
                    *trajs[id].energies.last_mut().unwrap() = spec[c][slot];
                }
            }
        }
    };
    record(&mut trajectories, &labels, &start);

    let mut prev = start.clone();
    for w in params.windows(2) {
        let next = sampler.spectra(w[1])?;
        let offsets = step_offsets(&sampler, w[0], &prev, w[1], &next, 0)?;
        for c in 0..2 {
            let m = labels[c].len() as i64;
            let mut moved = vec![usize::MAX; m as usize];
            for (slot, &id) in labels[c].iter().enumerate() {
                let j = slot as i64 + offsets[c];
                if (0..m).contains(&j) {
                    moved[j as usize] = id;
                }
            }
            labels[c] = moved;
        }
        record(&mut trajectories, &labels, &next);
        prev = next;
    }

    let end_order = merged_order(&prev);
    for (pos, &(c, i)) in end_order.iter().enumerate() {
        let id = labels[c][i];
        if id != usize::MAX {
            trajectories[id].end_index = Some(pos);
        }
    }
    let shifts = trajectories
        .iter()
        .map(|t| (t.start_index, t.end_index.map(|e| t.start_index as i64 - e as i64)))
        .collect();
    Ok(TrackingResult {
        parameter: params,
        start_spectrum: merged_energies(&start, n_levels),
        end_spectrum: merged_energies(&prev, n_levels),
        trajectories,
        shifts,
    })
}
