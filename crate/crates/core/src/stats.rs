//! Estimators that turn trajectory ensembles into empirical verdicts:
//! circular histograms, total-variation distances with their multinomial
//! noise floors, ergodic averages with batch-means errors, coupling gaps
//! against the pathwise analytic bound, total-variation decay-rate fits and
//! interior escape statistics.

use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

use crate::correlation::{
    simulate_coupled_pair, simulate_path, BoundaryState, CorrelationState, SdeError,
};
use crate::measure::StationaryDensity;
use crate::noise::NoiseStream;
use crate::params::ModelParams;
use crate::C64;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("histograms have different binnings: {0} vs {1}")]
    BinMismatch(usize, usize),
    #[error("trajectories recorded on different time stamps at index {0}")]
    TimestampMismatch(usize),
    #[error("only {0} grid points above the noise floor; at least 4 required")]
    NoiseFloor(usize),
    #[error(transparent)]
    Sde(#[from] SdeError),
}

/// Counts over equal arcs partitioning `(-π, π]` (bins are half-open on the
/// left, closed on the right).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularHistogram {
    pub n_bins: usize,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl CircularHistogram {
    pub fn new(n_bins: usize) -> Self {
        assert!(n_bins >= 2, "need at least two bins");
        CircularHistogram {
            n_bins,
            counts: vec![0; n_bins],
            total: 0,
        }
    }

    pub fn insert(&mut self, angle: f64) {
        let width = TAU / self.n_bins as f64;
        let pos = (crate::correlation::wrap_angle(angle) + PI) / width;
        let idx = (pos.ceil() as usize).saturating_sub(1).min(self.n_bins - 1);
        self.counts[idx] += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &CircularHistogram) {
        assert_eq!(self.n_bins, other.n_bins);
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.total += other.total;
    }

    /// Normalized bin masses; all-zero for an empty histogram.
    pub fn masses(&self) -> Vec<f64> {
        if self.total == 0 {
            return vec![0.0; self.n_bins];
        }
        self.counts
            .iter()
            .map(|&c| c as f64 / self.total as f64)
            .collect()
    }
}

/// Bin a sequence of wrapped angles.
pub fn histogram(angles: &[f64], n_bins: usize) -> CircularHistogram {
    let mut h = CircularHistogram::new(n_bins);
    for &a in angles {
        h.insert(a);
    }
    h
}

/// Total variation distance `(1/2) Σ |p_i - q_i|` between two histograms on a
/// common binning.
pub fn tv_distance(p: &CircularHistogram, q: &CircularHistogram) -> Result<f64, StatsError> {
    if p.n_bins != q.n_bins {
        return Err(StatsError::BinMismatch(p.n_bins, q.n_bins));
    }
    Ok(0.5
        * p.masses()
            .iter()
            .zip(q.masses())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

/// Total variation between a histogram and a tabulated density integrated
/// over the same bins.
pub fn tv_to_density(p: &CircularHistogram, masses: &[f64]) -> Result<f64, StatsError> {
    if p.n_bins != masses.len() {
        return Err(StatsError::BinMismatch(p.n_bins, masses.len()));
    }
    Ok(0.5
        * p.masses()
            .iter()
            .zip(masses)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

/// Expected total variation between a multinomial empirical law of `n`
/// samples and its generating density on `n_bins` bins.
pub fn noise_floor(n_bins: usize, n_samples: usize) -> f64 {
    (n_bins as f64 / (TAU * n_samples as f64)).sqrt()
}

/// Noise floor for the distance between two independent empirical laws.
pub fn two_sample_noise_floor(n_bins: usize, n1: usize, n2: usize) -> f64 {
    (n_bins as f64 / TAU * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt()
}

/// Trapezoidal time average of an observable along a uniformly recorded path.
pub fn ergodic_average<T>(path: &[T], f: impl Fn(&T) -> f64) -> f64 {
    assert!(path.len() >= 2, "need at least two samples");
    let n = path.len() - 1;
    let mut sum = 0.5 * (f(&path[0]) + f(&path[n]));
    for state in &path[1..n] {
        sum += f(state);
    }
    sum / n as f64
}

/// Ergodic average plus a batch-means standard error (32 batches); the path
/// is serially correlated, so naive iid errors would be invalid.
pub fn ergodic_average_with_se<T>(path: &[T], f: impl Fn(&T) -> f64) -> (f64, f64) {
    let avg = ergodic_average(path, &f);
    let n_batches = 32.min(path.len() / 4).max(2);
    let batch_len = path.len() / n_batches;
    let means: Vec<f64> = (0..n_batches)
        .map(|b| {
            let chunk = &path[b * batch_len..(b + 1) * batch_len];
            chunk.iter().map(&f).sum::<f64>() / chunk.len() as f64
        })
        .collect();
    let grand = means.iter().sum::<f64>() / n_batches as f64;
    let var =
        means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>() / (n_batches as f64 - 1.0);
    (avg, (var / n_batches as f64).sqrt())
}

/// Gap sequence of a coupled interior/boundary pair together with the
/// pathwise analytic bound
/// `|h(t) - g(t)|^2 <= |h(0) - g(0)|^2 / (1 - |h(0)|^2) · e^{-2K ∫ Re g}`.
#[derive(Debug, Clone)]
pub struct CouplingGap {
    pub times: Vec<f64>,
    pub gap: Vec<f64>,
    pub bound: Vec<f64>,
}

pub fn coupling_gap(
    interior: &[CorrelationState],
    boundary: &[BoundaryState],
    params: &ModelParams,
) -> Result<CouplingGap, StatsError> {
    if interior.len() != boundary.len() {
        return Err(StatsError::TimestampMismatch(
            interior.len().min(boundary.len()),
        ));
    }
    for (i, (h, g)) in interior.iter().zip(boundary).enumerate() {
        if (h.t - g.t).abs() > 1e-9 * (1.0 + h.t.abs()) {
            return Err(StatsError::TimestampMismatch(i));
        }
    }
    let x = interior[0].h;
    let d0 = (x - boundary[0].embed()).norm_sqr();
    let prefactor = d0 / (1.0 - x.norm_sqr());
    let mut times = Vec::with_capacity(interior.len());
    let mut gap = Vec::with_capacity(interior.len());
    let mut bound = Vec::with_capacity(interior.len());
    for (h, g) in interior.iter().zip(boundary) {
        times.push(h.t);
        gap.push((h.h - g.embed()).norm());
        let b2 = prefactor * (-2.0 * params.coupling * g.drift_integral).exp();
        bound.push(b2.max(0.0).sqrt());
    }
    Ok(CouplingGap { times, gap, bound })
}

/// Exponential fit `TV(t) ≈ C e^{-γ* t}` of the boundary law's convergence.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DecayFit {
    pub gamma_star: f64,
    pub c: f64,
    pub r_squared: f64,
}

/// Total-variation trajectory of a boundary ensemble against the stationary
/// law, evaluated on a geometric time grid.
#[derive(Debug, Clone)]
pub struct TvDecayCurve {
    pub times: Vec<f64>,
    pub tv: Vec<f64>,
    pub noise_floor: f64,
}

/// Geometric grid of `n` points on `[t0, t1]`.
pub fn geometric_times(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    assert!(t0 > 0.0 && t1 > t0 && n >= 2);
    let ratio = (t1 / t0).powf(1.0 / (n - 1) as f64);
    (0..n).map(|i| t0 * ratio.powi(i as i32)).collect()
}

/// Simulate `n_traj` boundary trajectories from `theta0` and histogram the
/// ensemble at each requested time.
#[allow(clippy::too_many_arguments)]
pub fn boundary_ensemble_histograms(
    params: &ModelParams,
    theta0: f64,
    times: &[f64],
    dt: f64,
    n_bins: usize,
    n_traj: usize,
    master_seed: u64,
    stream_base: u64,
) -> Vec<CircularHistogram> {
    let step_targets: Vec<usize> = times.iter().map(|t| (t / dt).round() as usize).collect();
    let per_traj: Vec<Vec<f64>> = (0..n_traj)
        .into_par_iter()
        .map(|i| {
            let mut noise = NoiseStream::new(master_seed, stream_base + i as u64);
            let mut state = BoundaryState::new(theta0);
            let mut angles = Vec::with_capacity(times.len());
            let mut step = 0usize;
            for &target in &step_targets {
                while step < target {
                    let dw = noise.increment(dt);
                    state = crate::correlation::step_boundary(&state, params, dt, dw);
                    step += 1;
                }
                angles.push(state.theta);
            }
            angles
        })
        .collect();
    let mut hists: Vec<CircularHistogram> = (0..times.len())
        .map(|_| CircularHistogram::new(n_bins))
        .collect();
    for angles in &per_traj {
        for (hist, &a) in hists.iter_mut().zip(angles) {
            hist.insert(a);
        }
    }
    hists
}

/// Fit the exponential decay of `TV(law of h^x(t), μ)` for one boundary
/// start. Times are geometric on `[1, T]`; only points above the multinomial
/// noise floor enter the least-squares fit.
#[allow(clippy::too_many_arguments)]
pub fn tv_decay_fit_single(
    params: &ModelParams,
    theta0: f64,
    t_final: f64,
    n_traj: usize,
    n_bins: usize,
    dt: f64,
    master_seed: u64,
    stream_base: u64,
) -> Result<(DecayFit, TvDecayCurve), StatsError> {
    let times = geometric_times(1.0, t_final, 12);
    let hists = boundary_ensemble_histograms(
        params,
        theta0,
        &times,
        dt,
        n_bins,
        n_traj,
        master_seed,
        stream_base,
    );
    let sd = StationaryDensity::new(params);
    let analytic = sd.binned_masses(n_bins);
    let tv: Vec<f64> = hists
        .iter()
        .map(|h| tv_to_density(h, &analytic))
        .collect::<Result<_, _>>()?;
    let floor = noise_floor(n_bins, n_traj);
    let curve = TvDecayCurve {
        times: times.clone(),
        tv: tv.clone(),
        noise_floor: floor,
    };
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(&tv)
        .filter(|(_, &v)| v > floor)
        .map(|(&t, &v)| (t, v.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(StatsError::NoiseFloor(pts.len()));
    }
    let (slope, intercept, r_squared) = linear_fit(&pts);
    Ok((
        DecayFit {
            gamma_star: -slope,
            c: intercept.exp(),
            r_squared,
        },
        curve,
    ))
}

/// Decay fits for a list of boundary starts (stream ids advance by `n_traj`
/// per start so the ensembles stay independent).
pub fn tv_decay_fit(
    params: &ModelParams,
    x_starts: &[C64],
    t_final: f64,
    n_traj: usize,
    n_bins: usize,
    dt: f64,
    master_seed: u64,
) -> Result<Vec<DecayFit>, StatsError> {
    x_starts
        .iter()
        .enumerate()
        .map(|(i, x)| {
            tv_decay_fit_single(
                params,
                x.arg(),
                t_final,
                n_traj,
                n_bins,
                dt,
                master_seed,
                (i * n_traj) as u64,
            )
            .map(|(fit, _)| fit)
        })
        .collect()
}

fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    (slope, intercept, r_squared)
}

/// Fraction of `n_traj` interior trajectories from `x` whose modulus at time
/// `t_final` is at most each radius in the ascending list. All fractions sink
/// to zero as the horizon grows: no mass is retained in the interior.
#[allow(clippy::too_many_arguments)]
pub fn escape_statistics(
    params: &ModelParams,
    x: C64,
    radii: &[f64],
    t_final: f64,
    n_traj: usize,
    dt: f64,
    master_seed: u64,
    stream_base: u64,
) -> Result<Vec<f64>, StatsError> {
    let masks: Vec<u64> = (0..n_traj)
        .into_par_iter()
        .map(|i| {
            let mut noise = NoiseStream::new(master_seed, stream_base + i as u64);
            let path = simulate_path(x, params, t_final, dt, &mut noise, usize::MAX)?;
            let modulus = path.last().expect("nonempty path").h.norm();
            let mut mask = 0u64;
            for (j, &r) in radii.iter().enumerate() {
                if modulus <= r {
                    mask |= 1 << j;
                }
            }
            Ok::<u64, StatsError>(mask)
        })
        .collect::<Result<_, _>>()?;
    Ok((0..radii.len())
        .map(|j| masks.iter().filter(|&&m| m & (1 << j) != 0).count() as f64 / n_traj as f64)
        .collect())
}

/// Coupled interior/boundary ensemble: per trajectory, the terminal gap and
/// whether the gap stays below the analytic bound (plus tolerance) at every
/// recorded time. The boundary start is drawn from the stationary law.
#[allow(clippy::too_many_arguments)]
pub fn coupled_ensemble_gaps(
    params: &ModelParams,
    x: C64,
    t_final: f64,
    dt: f64,
    record_stride: usize,
    n_traj: usize,
    master_seed: u64,
    domination_tol: f64,
) -> Result<Vec<(f64, bool)>, StatsError> {
    let sd = StationaryDensity::new(params);
    (0..n_traj)
        .into_par_iter()
        .map(|i| {
            // One stream drives the stationary draw, the shared increments
            // and the bridge refinements of trajectory i.
            let mut noise = NoiseStream::new(master_seed, i as u64);
            let theta0 = crate::measure::sample(&sd, 1, &mut noise)[0];
            let (interior, boundary) =
                simulate_coupled_pair(x, theta0, params, t_final, dt, &mut noise, record_stride)?;
            let cg = coupling_gap(&interior, &boundary, params)?;
            let dominated = cg
                .gap
                .iter()
                .zip(&cg.bound)
                .all(|(g, b)| *g <= *b + domination_tol);
            Ok((*cg.gap.last().expect("nonempty"), dominated))
        })
        .collect()
}

/// Two-sample Kolmogorov-Smirnov test. Returns the statistic and the
/// asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut xs: Vec<f64> = a.to_vec();
    let mut ys: Vec<f64> = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len(), ys.len());
    let mut d: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < n && j < m {
        if xs[i] <= ys[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n as f64 * m as f64) / (n as f64 + m as f64);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    (d, kolmogorov_sf(lambda))
}

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64 * lambda) * (k as f64 * lambda)).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Chi-square goodness of fit of observed counts against expected bin
/// masses, with `bins - 1` degrees of freedom.
pub fn chi_square_gof(counts: &[u64], expected_masses: &[f64]) -> (f64, f64) {
    assert_eq!(counts.len(), expected_masses.len());
    let total: u64 = counts.iter().sum();
    let stat: f64 = counts
        .iter()
        .zip(expected_masses)
        .map(|(&c, &p)| {
            let e = p * total as f64;
            let d = c as f64 - e;
            d * d / e
        })
        .sum();
    let df = (counts.len() - 1) as f64;
    let chi = ChiSquared::new(df).expect("positive dof");
    (stat, 1.0 - chi.cdf(stat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::simulate_boundary_path;
    use crate::measure::{mean_re, sample};
    use proptest::prelude::*;

    #[test]
    fn empty_histogram() {
        let h = histogram(&[], 8);
        assert_eq!(h.total, 0);
        assert!(h.counts.iter().all(|&c| c == 0));
        assert!(h.masses().iter().all(|&m| m == 0.0));
    }

    #[test]
    fn point_mass_lands_in_one_bin() {
        let h = histogram(&vec![0.0; 1000], 4);
        assert_eq!(h.total, 1000);
        // θ = 0 belongs to the bin (-π/2, 0].
        assert_eq!(h.counts, vec![0, 1000, 0, 0]);
    }

    #[test]
    fn uniform_samples_spread_evenly() {
        let mut noise = NoiseStream::new(21, 0);
        let n = 1_000_000usize;
        let n_bins = 100;
        let angles: Vec<f64> = (0..n).map(|_| -PI + TAU * noise.next_uniform()).collect();
        let h = histogram(&angles, n_bins);
        let expect = n as f64 / n_bins as f64;
        let five_sigma = 5.0 / expect.sqrt();
        for &c in &h.counts {
            let rel = (c as f64 - expect).abs() / expect;
            assert!(rel < five_sigma, "bin deviation {rel}");
        }
    }

    #[test]
    fn tv_basic_values() {
        let p = histogram(&[0.0, 0.0, 0.0, 0.0], 4);
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        let q = histogram(&[3.0, 3.0, 3.0, 3.0], 4);
        assert_eq!(tv_distance(&p, &q).unwrap(), 1.0);
        // p uniform on all bins vs q uniform on half the bins -> 0.5
        let p2 = histogram(&[-2.0, -0.7, 0.7, 2.8], 4);
        let q2 = histogram(&[-2.0, -0.7], 4);
        assert!((tv_distance(&p2, &q2).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            tv_distance(&p, &histogram(&[], 8)),
            Err(StatsError::BinMismatch(4, 8))
        ));
    }

    #[test]
    fn ergodic_average_constant_path() {
        let path: Vec<BoundaryState> = (0..100)
            .map(|i| BoundaryState {
                theta: 0.0,
                t: i as f64,
                drift_integral: i as f64,
            })
            .collect();
        assert_eq!(ergodic_average(&path, |s| s.theta.cos()), 1.0);
    }

    #[test]
    fn ergodic_average_matches_stationary_mean() {
        // Long boundary path started from the stationary law.
        let p = ModelParams::new(1.0, 1.0, 2).unwrap();
        let sd = StationaryDensity::new(&p);
        let mut noise = NoiseStream::new(42, 0);
        let theta0 = sample(&sd, 1, &mut noise)[0];
        let path = simulate_boundary_path(theta0, &p, 1000.0, 1e-2, &mut noise, 10);
        let (avg_re, se_re) = ergodic_average_with_se(&path, |s: &BoundaryState| s.theta.cos());
        let expect = mean_re(&sd).unwrap();
        assert!(
            (avg_re - expect).abs() < 3.0 * se_re,
            "avg {avg_re} expect {expect} se {se_re}"
        );
        let (avg_im, se_im) = ergodic_average_with_se(&path, |s: &BoundaryState| s.theta.sin());
        assert!(avg_im.abs() < 3.0 * se_im.max(1e-3), "im average {avg_im}");
    }

    #[test]
    fn coupling_gap_decays_and_respects_bound() {
        let p = ModelParams::new(1.0, 1.0, 2).unwrap();
        let results =
            coupled_ensemble_gaps(&p, C64::new(0.5, 0.0), 30.0, 1e-3, 100, 20, 7, 1e-6).unwrap();
        for (terminal, dominated) in results {
            assert!(terminal < 1e-2, "terminal gap {terminal}");
            assert!(dominated, "bound violated");
        }
    }

    #[test]
    fn escape_statistics_at_time_zero() {
        let p = ModelParams::new(1.0, 0.5, 2).unwrap();
        let fr = escape_statistics(&p, C64::new(0.3, 0.0), &[0.1, 0.3, 0.9], 0.0, 100, 1e-2, 3, 0)
            .unwrap();
        assert_eq!(fr, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn tv_decay_smoke() {
        let p = ModelParams::new(1.0, 1.0, 2).unwrap();
        let (fit, curve) = tv_decay_fit_single(&p, PI, 10.0, 4000, 40, 1e-2, 11, 0).unwrap();
        assert!(fit.gamma_star > 0.0, "gamma {}", fit.gamma_star);
        assert!(fit.r_squared > 0.8, "r2 {}", fit.r_squared);
        assert!(curve.tv[0] > curve.noise_floor);
    }

    #[test]
    fn ks_detects_shift_and_accepts_identity() {
        let mut noise = NoiseStream::new(5, 0);
        let a: Vec<f64> = (0..5000).map(|_| noise.next_standard_normal()).collect();
        let b: Vec<f64> = (0..5000).map(|_| noise.next_standard_normal()).collect();
        let (_, p_same) = ks_two_sample(&a, &b);
        assert!(p_same > 0.01, "identical laws rejected: p {p_same}");
        let shifted: Vec<f64> = a.iter().map(|x| x + 0.2).collect();
        let (_, p_diff) = ks_two_sample(&a, &shifted);
        assert!(p_diff < 1e-6, "shift not detected: p {p_diff}");
    }

    #[test]
    fn chi_square_accepts_the_truth() {
        let mut noise = NoiseStream::new(6, 0);
        let n_bins = 20;
        let angles: Vec<f64> = (0..100_000)
            .map(|_| -PI + TAU * noise.next_uniform())
            .collect();
        let h = histogram(&angles, n_bins);
        let expected = vec![1.0 / n_bins as f64; n_bins];
        let (_, p) = chi_square_gof(&h.counts, &expected);
        assert!(p > 0.001, "uniform rejected: p {p}");
    }

    proptest! {
        #[test]
        fn tv_is_a_metric(
            xs in proptest::collection::vec(-3.1f64..3.1, 10..200),
            ys in proptest::collection::vec(-3.1f64..3.1, 10..200),
            zs in proptest::collection::vec(-3.1f64..3.1, 10..200),
        ) {
            let p = histogram(&xs, 16);
            let q = histogram(&ys, 16);
            let r = histogram(&zs, 16);
            let pq = tv_distance(&p, &q).unwrap();
            let qp = tv_distance(&q, &p).unwrap();
            prop_assert_eq!(pq, qp);
            let pr = tv_distance(&p, &r).unwrap();
            let rq = tv_distance(&r, &q).unwrap();
            prop_assert!(pq <= pr + rq + 1e-12);
            prop_assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
            if p.masses() == q.masses() {
                prop_assert_eq!(pq, 0.0);
            } else {
                prop_assert!(pq > 0.0);
            }
        }

        #[test]
        fn histogram_total_matches_input(xs in proptest::collection::vec(-10.0f64..10.0, 0..300)) {
            let h = histogram(&xs, 8);
            prop_assert_eq!(h.total as usize, xs.len());
            prop_assert_eq!(h.counts.iter().sum::<u64>(), h.total);
        }
    }
}
