//! The explicit invariant law of the boundary diffusion: a von Mises density
//! `exp(kappa cos θ)/Γ` on the circle with concentration `kappa = 2K/eps^2`,
//! plus its moments, an exact sampler and the large-deviation rate function.

use std::f64::consts::{PI, TAU};
use thiserror::Error;

use crate::correlation::wrap_angle;
use crate::noise::NoiseStream;
use crate::params::{ModelParams, TOL_BALL};
use crate::quad::{integrate, integrate_log, log_add_exp};
use crate::C64;

/// Relative quadrature tolerance used throughout the measure computations.
const QUAD_TOL: f64 = 1e-13;
/// Above this concentration all mass computations run in the log domain.
const LOG_DOMAIN_KAPPA: f64 = 30.0;

#[derive(Debug, Error, PartialEq)]
pub enum MeasureError {
    #[error("concentration must be finite and nonnegative, got {0}")]
    BadConcentration(f64),
    #[error("point is not on the unit circle: |x| = {0}")]
    DomainError(f64),
    #[error("arc mass underflows even in the log domain")]
    Underflow,
    #[error("quadrature routes disagree: direct {direct}, sine-squared {sin_sq}")]
    RouteMismatch { direct: f64, sin_sq: f64 },
}

/// The stationary law on the unit circle, dependent on the parameters only
/// through `kappa = 2K/eps^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryDensity {
    pub kappa: f64,
    /// Cached `log Γ` with `Γ = ∫_{-π}^{π} exp(kappa cos θ) dθ`.
    pub log_gamma: f64,
}

impl StationaryDensity {
    pub fn new(params: &ModelParams) -> Self {
        Self::from_kappa(params.kappa()).expect("valid params give valid kappa")
    }

    /// Build from the concentration directly. `kappa = 0` (the uniform law)
    /// is admitted as the degenerate limit used by symmetry tests.
    pub fn from_kappa(kappa: f64) -> Result<Self, MeasureError> {
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(MeasureError::BadConcentration(kappa));
        }
        let log_gamma = kappa + log_scaled_mass(kappa, -PI, PI);
        Ok(StationaryDensity { kappa, log_gamma })
    }

    /// Density against dθ on `(-π, π]`; integrates to one over the circle.
    pub fn density(&self, theta: f64) -> f64 {
        (self.kappa * theta.cos() - self.log_gamma).exp()
    }

    /// CDF `μ((-π, θ])`.
    pub fn cdf(&self, theta: f64) -> f64 {
        if theta <= -PI {
            return 0.0;
        }
        if theta >= PI {
            return 1.0;
        }
        let k = self.kappa;
        let (num, _) = integrate(|t: f64| (k * (t.cos() - 1.0)).exp(), -PI, theta, QUAD_TOL);
        let (den, _) = integrate(|t: f64| (k * (t.cos() - 1.0)).exp(), -PI, PI, QUAD_TOL);
        (num / den).clamp(0.0, 1.0)
    }

    /// Inverse CDF by bisection.
    pub fn quantile(&self, q: f64) -> f64 {
        assert!((0.0..=1.0).contains(&q), "quantile level out of range");
        let mut lo = -PI;
        let mut hi = PI;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Bin edges splitting the circle into `n` bins of equal probability.
    pub fn equal_probability_edges(&self, n: usize) -> Vec<f64> {
        let mut edges = Vec::with_capacity(n + 1);
        edges.push(-PI);
        for i in 1..n {
            edges.push(self.quantile(i as f64 / n as f64));
        }
        edges.push(PI);
        edges
    }

    /// Analytic mass of each of `n` equal-width bins partitioning `(-π, π]`.
    pub fn binned_masses(&self, n_bins: usize) -> Vec<f64> {
        let k = self.kappa;
        let width = TAU / n_bins as f64;
        let (den, _) = integrate(|t: f64| (k * (t.cos() - 1.0)).exp(), -PI, PI, QUAD_TOL);
        (0..n_bins)
            .map(|i| {
                let a = -PI + i as f64 * width;
                let (num, _) =
                    integrate(|t: f64| (k * (t.cos() - 1.0)).exp(), a, a + width, QUAD_TOL);
                (num / den).max(0.0)
            })
            .collect()
    }

    /// Tabulated (theta, pdf, cdf) rows for CSV export, at `n` midpoints.
    pub fn density_table(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let width = TAU / n as f64;
        (0..n)
            .map(|i| {
                let theta = -PI + (i as f64 + 0.5) * width;
                (theta, self.density(theta), self.cdf(theta))
            })
            .collect()
    }
}

/// `log ∫ exp(kappa (cos θ - 1)) dθ` over `[a, b]`, the e^{-kappa}-scaled arc
/// mass. Log-domain panel accumulation above [`LOG_DOMAIN_KAPPA`], plain
/// adaptive quadrature below.
fn log_scaled_mass(kappa: f64, a: f64, b: f64) -> f64 {
    if kappa > LOG_DOMAIN_KAPPA {
        integrate_log(|t: f64| kappa * (t.cos() - 1.0), a, b, QUAD_TOL)
    } else {
        let (v, _) = integrate(|t: f64| (kappa * (t.cos() - 1.0)).exp(), a, b, QUAD_TOL);
        v.ln()
    }
}

/// Normalizing constant `Γ = ∫_{-π}^{π} exp((2K/eps^2) cos θ) dθ`.
pub fn normalizing_constant(params: &ModelParams) -> f64 {
    StationaryDensity::new(params).log_gamma.exp()
}

/// Mean of the real part under the stationary law, computed along two
/// algebraically independent routes (direct `∫cos θ dμ` and the
/// integration-by-parts form `kappa ∫sin^2 θ dμ`) that must agree to 1e-10.
pub fn mean_re(sd: &StationaryDensity) -> Result<f64, MeasureError> {
    let k = sd.kappa;
    let weight = move |t: f64| (k * (t.cos() - 1.0)).exp();
    let (total, _) = integrate(weight, -PI, PI, QUAD_TOL);
    let (direct_num, _) = integrate(|t: f64| t.cos() * weight(t), -PI, PI, QUAD_TOL);
    let (sin_sq_num, _) = integrate(|t: f64| t.sin() * t.sin() * weight(t), -PI, PI, QUAD_TOL);
    let direct = direct_num / total;
    let sin_sq = k * sin_sq_num / total;
    if (direct - sin_sq).abs() > 1e-10 {
        return Err(MeasureError::RouteMismatch { direct, sin_sq });
    }
    Ok(direct)
}

/// Exact sampler: uniform proposals on `(-π, π]` accepted with probability
/// `exp(kappa (cos θ - 1))`. Returns the samples and the number of proposals
/// consumed (the acceptance rate is `Γ e^{-kappa} / 2π`).
pub fn sample_counted(
    sd: &StationaryDensity,
    n: usize,
    noise: &mut NoiseStream,
) -> (Vec<f64>, u64) {
    let mut out = Vec::with_capacity(n);
    let mut proposals = 0u64;
    while out.len() < n {
        let theta = -PI + TAU * noise.next_uniform();
        proposals += 1;
        let accept = (sd.kappa * (theta.cos() - 1.0)).exp();
        if noise.next_uniform() <= accept {
            out.push(wrap_angle(theta));
        }
    }
    (out, proposals)
}

/// Exactly μ-distributed angles, reproducible from the stream.
pub fn sample(sd: &StationaryDensity, n: usize, noise: &mut NoiseStream) -> Vec<f64> {
    sample_counted(sd, n, noise).0
}

/// Large-deviation rate function `I(x) = 2 (1 - Re x)` on the unit circle.
pub fn ldp_rate(x: C64) -> Result<f64, MeasureError> {
    let modulus = x.norm();
    if (modulus - 1.0).abs() > TOL_BALL {
        return Err(MeasureError::DomainError(modulus));
    }
    Ok(2.0 * (1.0 - x.re))
}

/// A finite union of angular intervals on the circle, normalized into the
/// `(-π, π]` chart (intervals crossing the seam are split).
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSet {
    intervals: Vec<(f64, f64)>,
}

impl AngularSet {
    /// Build from raw `(start, end)` pairs, `end > start`, in radians.
    /// Intervals spanning the full circle clip to it.
    pub fn from_intervals(raw: &[(f64, f64)]) -> Self {
        let mut intervals = Vec::new();
        for &(a, b) in raw {
            assert!(b > a, "empty or reversed interval");
            if b - a >= TAU {
                return AngularSet::full_circle();
            }
            let start = wrap_angle(a);
            let len = b - a;
            if start + len <= PI {
                intervals.push((start, start + len));
            } else {
                intervals.push((start, PI));
                intervals.push((-PI, start + len - TAU));
            }
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        AngularSet { intervals }
    }

    pub fn full_circle() -> Self {
        AngularSet {
            intervals: vec![(-PI, PI)],
        }
    }

    pub fn is_full_circle(&self) -> bool {
        (self.measure() - TAU).abs() < 1e-12
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Total angular length.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Supremum of `cos θ` over the closure.
    pub fn sup_cos(&self) -> f64 {
        self.intervals
            .iter()
            .map(|&(a, b)| {
                if a <= 0.0 && 0.0 <= b {
                    1.0
                } else {
                    a.cos().max(b.cos())
                }
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Length of the sublevel set `{θ in the set : cos θ >= c}`.
    pub fn measure_above(&self, c: f64) -> f64 {
        if c <= -1.0 {
            return self.measure();
        }
        if c > 1.0 {
            return 0.0;
        }
        let cut = c.acos(); // cos θ >= c ⟺ |θ| <= cut
        self.intervals
            .iter()
            .map(|&(a, b)| (b.min(cut) - a.max(-cut)).max(0.0))
            .sum()
    }
}

/// `log μ_kappa(F)` for an angular set, in the log domain.
pub fn log_arc_probability(set: &AngularSet, kappa: f64) -> Result<f64, MeasureError> {
    if !kappa.is_finite() || kappa < 0.0 {
        return Err(MeasureError::BadConcentration(kappa));
    }
    let log_total = log_scaled_mass(kappa, -PI, PI);
    let log_mass = set
        .intervals
        .iter()
        .map(|&(a, b)| log_scaled_mass(kappa, a, b))
        .fold(f64::NEG_INFINITY, log_add_exp);
    if log_mass == f64::NEG_INFINITY {
        return Err(MeasureError::Underflow);
    }
    Ok((log_mass - log_total).min(0.0))
}

/// The normalized log-mass sequence `(ε²/K) log μ_{K,ε}(F) = (2/κ) log μ(F)`
/// along an ascending concentration ladder; approaches `2(sup_F cos θ - 1)`
/// as the concentration grows.
pub fn ldp_empirical_slope(set: &AngularSet, kappas: &[f64]) -> Result<Vec<f64>, MeasureError> {
    kappas
        .iter()
        .map(|&k| Ok(2.0 / k * log_arc_probability(set, k)?))
        .collect()
}

/// Finite-concentration sandwich for the empirical slope, from the explicit
/// inequalities behind the large-deviation bounds:
/// `m(F) <= |F| e^{κ sup cos}` gives the upper bound, and
/// `m(F) >= |U_η| e^{κ(sup cos - η)}` over the good sets
/// `U_η = {cos θ >= sup cos - η}` gives the lower one (optimized over η).
pub fn ldp_sandwich_bounds(set: &AngularSet, kappa: f64) -> (f64, f64) {
    let sup = set.sup_cos();
    let log_total_scaled = log_scaled_mass(kappa, -PI, PI);
    let upper = 2.0 * (sup - 1.0) + 2.0 / kappa * (set.measure().ln() - log_total_scaled);
    let mut lower = f64::NEG_INFINITY;
    let mut eta = 1e-6;
    while eta <= 2.0 {
        let len = set.measure_above(sup - eta);
        if len > 0.0 {
            let cand = 2.0 * (sup - eta - 1.0) + 2.0 / kappa * (len.ln() - log_total_scaled);
            lower = lower.max(cand);
        }
        eta *= 2.0;
    }
    (lower, upper)
}

/// `∫ (Lf) dμ` for the boundary generator `Lf = -2K sin θ f' + ε² f''`; zero
/// for every smooth test function exactly when μ is stationary.
pub fn generator_residual(
    params: &ModelParams,
    f_prime: impl Fn(f64) -> f64,
    f_double_prime: impl Fn(f64) -> f64,
) -> f64 {
    let k = params.kappa();
    let weight = move |t: f64| (k * (t.cos() - 1.0)).exp();
    let (total, _) = integrate(weight, -PI, PI, QUAD_TOL);
    let coupling = params.coupling;
    let eps2 = params.noise * params.noise;
    let (num, _) = integrate(
        |t: f64| (-2.0 * coupling * t.sin() * f_prime(t) + eps2 * f_double_prime(t)) * weight(t),
        -PI,
        PI,
        QUAD_TOL,
    );
    num / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Modified Bessel function of the first kind by series summation, the
    /// independent oracle for the quadrature values (small orders, x ≲ 30).
    fn bessel_i(order: u32, x: f64) -> f64 {
        let half = x / 2.0;
        let mut term = half.powi(order as i32);
        for m in 1..=order {
            term /= m as f64;
        }
        let mut sum = term;
        for m in 1..200 {
            term *= half * half / (m as f64 * (m + order) as f64);
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        sum
    }

    fn vm(kappa: f64) -> StationaryDensity {
        StationaryDensity::from_kappa(kappa).unwrap()
    }

    #[test]
    fn uniform_limit_density() {
        let sd = vm(0.0);
        for theta in [-3.0, -0.5, 0.0, 1.0, PI] {
            assert_abs_diff_eq!(sd.density(theta), 1.0 / TAU, epsilon = 1e-14);
        }
    }

    #[test]
    fn mode_to_antimode_ratio() {
        for kappa in [0.5, 2.0, 8.0] {
            let sd = vm(kappa);
            let ratio = sd.density(0.0) / sd.density(PI);
            assert!((ratio / (2.0 * kappa).exp() - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn density_integrates_to_one() {
        for kappa in [0.5, 2.0, 8.0, 32.0] {
            let sd = vm(kappa);
            let (mass, _) = integrate(|t| sd.density(t), -PI, PI, 1e-13);
            assert!((mass - 1.0).abs() < 1e-10, "kappa {kappa}: mass {mass}");
        }
    }

    #[test]
    fn normalizing_constant_matches_bessel_series() {
        let p = ModelParams::new(1.0, 1.0, 2).unwrap(); // kappa = 2
        let gamma = normalizing_constant(&p);
        assert!((gamma - 14.32305).abs() < 1e-4);
        assert!((gamma / (TAU * bessel_i(0, 2.0)) - 1.0).abs() < 1e-11);
        let uniform = vm(0.0);
        assert_abs_diff_eq!(uniform.log_gamma.exp(), TAU, epsilon = 1e-10);
    }

    #[test]
    fn normalizing_constant_increases_with_concentration() {
        let mut last = f64::NEG_INFINITY;
        let mut kappa = 0.1;
        while kappa <= 50.0 {
            let lg = vm(kappa).log_gamma;
            assert!(lg > last, "log gamma not increasing at kappa {kappa}");
            last = lg;
            kappa += 0.9;
        }
    }

    #[test]
    fn mean_re_values() {
        assert_abs_diff_eq!(mean_re(&vm(0.0)).unwrap(), 0.0, epsilon = 1e-12);
        let m2 = mean_re(&vm(2.0)).unwrap();
        let oracle = bessel_i(1, 2.0) / bessel_i(0, 2.0);
        assert!((m2 - oracle).abs() < 1e-10, "{m2} vs {oracle}");
        assert!((m2 - 0.69777).abs() < 1e-5);
    }

    #[test]
    fn mean_re_monotone_and_saturating() {
        let grid = [
            0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1000.0,
        ];
        let mut last = 0.0;
        for &k in &grid {
            let m = mean_re(&vm(k)).unwrap();
            assert!(m > last, "not increasing at kappa {k}");
            last = m;
        }
        assert!(last >= 0.999, "kappa 1000 mean {last}");
    }

    #[test]
    fn sampler_uniform_limit_passes_ks() {
        let sd = vm(0.0);
        let mut noise = NoiseStream::new(11, 0);
        let n = 100_000;
        let mut xs = sample(&sd, n, &mut noise);
        xs.sort_by(f64::total_cmp);
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let u = (x + PI) / TAU;
            d = d.max((u - i as f64 / n as f64).abs());
            d = d.max((u - (i + 1) as f64 / n as f64).abs());
        }
        // sqrt(n)·D below the 1% Kolmogorov critical value 1.63.
        assert!((n as f64).sqrt() * d < 1.63, "KS statistic {d}");
    }

    #[test]
    fn sampler_mean_matches_quadrature() {
        let sd = vm(8.0);
        let mut noise = NoiseStream::new(12, 0);
        let n = 1_000_000;
        let xs = sample(&sd, n, &mut noise);
        let mean: f64 = xs.iter().map(|t| t.cos()).sum::<f64>() / n as f64;
        let expect = mean_re(&sd).unwrap();
        let weight = |t: f64| (8.0 * (t.cos() - 1.0)).exp();
        let (total, _) = integrate(weight, -PI, PI, 1e-13);
        let (second, _) = integrate(|t: f64| t.cos() * t.cos() * weight(t), -PI, PI, 1e-13);
        let var = second / total - expect * expect;
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - expect).abs() < 3.0 * se,
            "mean {mean} expect {expect} se {se}"
        );
    }

    #[test]
    fn sampler_acceptance_rate() {
        let sd = vm(8.0);
        let mut noise = NoiseStream::new(13, 0);
        let n = 200_000;
        let (_, proposals) = sample_counted(&sd, n, &mut noise);
        let p_analytic = (sd.log_gamma - 8.0).exp() / TAU;
        let rate = n as f64 / proposals as f64;
        let sigma = (p_analytic * (1.0 - p_analytic) / proposals as f64).sqrt();
        assert!(
            (rate - p_analytic).abs() < 3.0 * sigma,
            "rate {rate} analytic {p_analytic} sigma {sigma}"
        );
    }

    #[test]
    fn density_depends_only_on_kappa() {
        let a = StationaryDensity::new(&ModelParams::new(1.0, 0.5, 2).unwrap());
        let b = StationaryDensity::new(&ModelParams::new(4.0, 1.0, 2).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.kappa, 8.0);
    }

    #[test]
    fn rate_function_values() {
        assert_eq!(ldp_rate(C64::new(1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(ldp_rate(C64::new(-1.0, 0.0)).unwrap(), 4.0);
        assert_eq!(ldp_rate(C64::new(0.0, 1.0)).unwrap(), 2.0);
        assert!(matches!(
            ldp_rate(C64::new(0.5, 0.0)),
            Err(MeasureError::DomainError(_))
        ));
    }

    #[test]
    fn full_circle_slope_is_zero() {
        let set = AngularSet::full_circle();
        let slopes = ldp_empirical_slope(&set, &[8.0, 32.0, 128.0]).unwrap();
        for s in slopes {
            assert_abs_diff_eq!(s, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn far_arc_slope_approaches_minus_two_from_below() {
        let set = AngularSet::from_intervals(&[(PI / 2.0, PI)]);
        let kappas = [8.0, 32.0, 128.0, 512.0];
        let slopes = ldp_empirical_slope(&set, &kappas).unwrap();
        for w in slopes.windows(2) {
            assert!(w[1] > w[0], "not monotone: {slopes:?}");
        }
        for (s, &k) in slopes.iter().zip(&kappas) {
            assert!(*s < -2.0, "approach from below violated at kappa {k}: {s}");
            let (lo, hi) = ldp_sandwich_bounds(&set, k);
            assert!(lo <= *s && *s <= hi, "sandwich failed at {k}: {lo} {s} {hi}");
        }
        assert!((slopes[3] + 2.0).abs() < 0.1, "slope at 512: {}", slopes[3]);
    }

    #[test]
    fn near_arc_slope_approaches_zero_from_below() {
        let set = AngularSet::from_intervals(&[(-0.1, 0.1)]);
        let slopes = ldp_empirical_slope(&set, &[8.0, 32.0, 128.0, 512.0]).unwrap();
        for s in &slopes {
            assert!(*s < 0.0);
        }
        assert!(slopes[3] > -0.05, "slope at 512: {}", slopes[3]);
    }

    #[test]
    fn angular_set_seam_splitting() {
        let set = AngularSet::from_intervals(&[(3.0, 4.0)]); // crosses π
        assert_abs_diff_eq!(set.measure(), 1.0, epsilon = 1e-12);
        assert_eq!(set.intervals().len(), 2);
        let sup = set.sup_cos();
        assert_abs_diff_eq!(sup, 3.0_f64.cos().max((4.0 - TAU).cos()), epsilon = 1e-12);
    }

    #[test]
    fn quantiles_invert_the_cdf() {
        let sd = vm(5.0);
        for q in [0.01, 0.2, 0.5, 0.8, 0.99] {
            let theta = sd.quantile(q);
            assert!((sd.cdf(theta) - q).abs() < 1e-9, "q {q}");
        }
        assert_abs_diff_eq!(sd.quantile(0.5), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn generator_annihilates_trig_battery() {
        let p = ModelParams::new(1.0, 1.0, 2).unwrap();
        // f = sin θ, cos θ, sin 2θ, cos 2θ
        let battery: [(fn(f64) -> f64, fn(f64) -> f64); 4] = [
            (|t| t.cos(), |t| -t.sin()),
            (|t| -t.sin(), |t| -t.cos()),
            (|t| 2.0 * (2.0 * t).cos(), |t| -4.0 * (2.0 * t).sin()),
            (|t| -2.0 * (2.0 * t).sin(), |t| -4.0 * (2.0 * t).cos()),
        ];
        for (fp, fpp) in battery {
            let r = generator_residual(&p, fp, fpp);
            assert!(r.abs() < 1e-8, "residual {r}");
        }
    }

    #[test]
    fn binned_masses_sum_to_one() {
        for kappa in [0.0, 2.0, 50.0] {
            let sd = vm(kappa);
            let masses = sd.binned_masses(64);
            let sum: f64 = masses.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "kappa {kappa}: {sum}");
        }
    }
}
