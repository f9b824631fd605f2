//! Reductions of sampled time series: sinusoid fits, moving averages,
//! slopes.

/// Residual of the linear least-squares fit `a + b sin Ωt + c cos Ωt`.
fn sinusoid_residual(times: &[f64], values: &[f64], omega: f64) -> f64 {
    let mut m = [[0.0; 3]; 3];
    let mut r = [0.0; 3];
    for (&t, &y) in times.iter().zip(values) {
        let basis = [1.0, (omega * t).sin(), (omega * t).cos()];
        for i in 0..3 {
            r[i] += basis[i] * y;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let coef = solve3(m, r);
    times
        .iter()
        .zip(values)
        .map(|(&t, &y)| {
            let fit = coef[0] + coef[1] * (omega * t).sin() + coef[2] * (omega * t).cos();
            (y - fit).powi(2)
        })
        .sum()
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cramer's rule; singular systems give zeros.
fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> [f64; 3] {
    let d = det3(&m);
    if d.abs() < 1e-300 {
        return [0.0; 3];
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = r[i];
        }
        *o = det3(&mk) / d;
    }
    out
}

/// Period of the best-fitting sinusoid, searched within a factor two of
/// `guess`: a coarse scan followed by golden-section refinement.
pub fn fit_period(times: &[f64], values: &[f64], guess: f64) -> f64 {
    let (lo, hi) = (0.5 * guess, 2.0 * guess);
    let cost = |period: f64| sinusoid_residual(times, values, 2.0 * std::f64::consts::PI / period);
    let scan = 400;
    let step = (hi - lo) / scan as f64;
    let best = (0..=scan)
        .map(|i| lo + step * i as f64)
        .min_by(|a, b| cost(*a).total_cmp(&cost(*b)))
        .unwrap();
    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (cost(x1), cost(x2));
    for _ in 0..100 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = cost(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = cost(x2);
        }
        if b - a < 1e-10 * guess {
            break;
        }
    }
    0.5 * (a + b)
}

/// Centered moving average over windows of length `window`, kept only
/// where the window lies inside the series. Assumes uniform sampling.
pub fn moving_average(times: &[f64], values: &[f64], window: f64) -> (Vec<f64>, Vec<f64>) {
    let n = times.len();
    if n < 2 {
        return (Vec::new(), Vec::new());
    }
    let dt = times[1] - times[0];
    let half = ((0.5 * window / dt).round() as usize).max(1);
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    if n <= 2 * half {
        return (ts, vs);
    }
    for i in half..n - half {
        // trapezoid weights so the window spans exactly 2·half intervals
        let mut s = 0.5 * (values[i - half] + values[i + half]);
        s += values[i - half + 1..i + half].iter().sum::<f64>();
        ts.push(times[i]);
        vs.push(s / (2 * half) as f64);
    }
    (ts, vs)
}

pub fn peak_to_peak(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

/// Least-squares slope of the samples with `t0 ≤ t ≤ t1`.
pub fn lsq_slope(times: &[f64], values: &[f64], t0: f64, t1: f64) -> f64 {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= t0 && **t <= t1)
        .map(|(&t, &v)| (t, v))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - mv)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    sxy / sxx
}

/// Largest relative deviation of a series from its first value.
pub fn max_relative_change(values: &[f64]) -> f64 {
    let v0 = values[0];
    values.iter().map(|v| (v / v0 - 1.0).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn recovers_period_of_offset_sinusoid() {
        let times: Vec<f64> = (0..800).map(|i| i as f64 * 0.1).collect();
        let values: Vec<f64> = times.iter().map(|t| 3.0 + 2.0 * (2.0 * PI * t / 31.4 + 0.4).cos()).collect();
        assert!((fit_period(&times, &values, 25.0) - 31.4).abs() < 1e-6);
    }

    #[test]
    fn moving_average_removes_fast_oscillation() {
        let times: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.01).collect();
        let values: Vec<f64> = times.iter().map(|t| t + (2.0 * PI * t).sin()).collect();
        let (ts, vs) = moving_average(&times, &values, 1.0);
        for (t, v) in ts.iter().zip(&vs) {
            assert!((v - t).abs() < 1e-4);
        }
        assert!((ts[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn slope_and_spread() {
        let t = [0.0, 1.0, 2.0, 3.0, 4.0];
        let v = [1.0, 3.0, 5.0, 7.0, 9.0];
        assert!((lsq_slope(&t, &v, 1.0, 3.0) - 2.0).abs() < 1e-14);
        assert_eq!(peak_to_peak(&v), 8.0);
        assert!(lsq_slope(&t, &v, 10.0, 11.0).is_nan());
        assert!((max_relative_change(&[2.0, 2.02, 1.99]) - 0.01).abs() < 1e-12);
    }
}
