//! Least-squares fits: power-law learning curves, the distance hyperbola,
//! and plain straight lines.
//!
//! RSS and R² are always reported in the original (untransformed) space, so
//! results from different methods are directly comparable.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Iteration cap for the Gauss-Newton power-law fit.
pub const NLS_MAX_ITERATIONS: usize = 200;
/// Relative parameter step below which Gauss-Newton stops.
pub const NLS_STEP_TOLERANCE: f64 = 1e-10;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerLawMethod {
    /// Ordinary least squares of `ln t` on `ln x`.
    LogLogOls,
    /// Gauss-Newton on `t = a x^-b` in linear space, started from the
    /// log-log estimate.
    Nls,
}

/// `t = a · x^(-b)`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub a: f64,
    pub b: f64,
    pub rss: f64,
    pub r_squared: f64,
    pub method: PowerLawMethod,
    pub iterations: usize,
}

impl PowerLawFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.a * x.powf(-self.b)
    }
}

/// `y = c1 / (x + c2)`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolaFit {
    pub c1: f64,
    pub c2: f64,
    pub rss: f64,
    pub r_squared: f64,
}

impl HyperbolaFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.c1 / (x + self.c2)
    }
}

/// `y = intercept + slope · x`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub rss: f64,
    pub r_squared: f64,
}

fn check_points(points: &[(f64, f64)], positive_x: bool) -> Result<()> {
    if points.len() < 3 {
        return Err(domain(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    for &(x, y) in points {
        if !x.is_finite() || !y.is_finite() {
            return Err(domain("coordinates must be finite"));
        }
        if positive_x && x <= 0.0 {
            return Err(domain(format!("x must be positive, got {x}")));
        }
        if y <= 0.0 {
            return Err(domain(format!("y must be positive, got {y}")));
        }
    }
    Ok(())
}

fn rss_of(points: &[(f64, f64)], f: impl Fn(f64) -> f64) -> f64 {
    points.iter().map(|&(x, y)| (y - f(x)).powi(2)).sum()
}

fn r_squared(points: &[(f64, f64)], rss: f64) -> f64 {
    let mean = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let tss: f64 = points.iter().map(|p| (p.1 - mean).powi(2)).sum();
    if tss == 0.0 {
        if rss == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - rss / tss
    }
}

/// Returns `(intercept, slope)`.
fn ols(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) * n {
        return Err(domain("all x values are equal; the fit is degenerate"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((my - slope * mx, slope))
}

pub fn fit_linear(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 3 {
        return Err(domain(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (intercept, slope) = ols(&xs, &ys)?;
    let rss = rss_of(points, |x| intercept + slope * x);
    Ok(LinearFit {
        intercept,
        slope,
        rss,
        r_squared: r_squared(points, rss),
    })
}

/// Fits `t = a x^(-b)` to `(x, t)` pairs.
pub fn fit_power_law(points: &[(f64, f64)], method: PowerLawMethod) -> Result<PowerLawFit> {
    check_points(points, true)?;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (alpha, beta) = ols(&lx, &ly)?;
    let (mut a, mut b) = (alpha.exp(), -beta);
    let model = |a: f64, b: f64| rss_of(points, |x| a * x.powf(-b));
    let mut iterations = 0;
    if method == PowerLawMethod::Nls {
        let mut rss = model(a, b);
        loop {
            if iterations == NLS_MAX_ITERATIONS {
                return Err(Error::Convergence {
                    iterations,
                    last: vec![a, b],
                });
            }
            iterations += 1;
            // normal equations of the linearized residuals
            let (mut jaa, mut jab, mut jbb, mut ga, mut gb) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for &(x, t) in points {
                let xb = x.powf(-b);
                let da = xb;
                let db = -a * xb * x.ln();
                let r = t - a * xb;
                jaa += da * da;
                jab += da * db;
                jbb += db * db;
                ga += da * r;
                gb += db * r;
            }
            let det = jaa * jbb - jab * jab;
            if det == 0.0 || !det.is_finite() {
                return Err(Error::Convergence {
                    iterations,
                    last: vec![a, b],
                });
            }
            let mut step_a = (jbb * ga - jab * gb) / det;
            let mut step_b = (jaa * gb - jab * ga) / det;
            let mut accepted = false;
            for _ in 0..MAX_HALVINGS {
                let trial = model(a + step_a, b + step_b);
                if trial.is_finite() && trial <= rss {
                    accepted = true;
                    break;
                }
                step_a *= 0.5;
                step_b *= 0.5;
            }
            let small = step_a.abs() <= NLS_STEP_TOLERANCE * a.abs().max(1.0)
                && step_b.abs() <= NLS_STEP_TOLERANCE * b.abs().max(1.0);
            if !accepted || small {
                if accepted {
                    a += step_a;
                    b += step_b;
                }
                break;
            }
            a += step_a;
            b += step_b;
            rss = model(a, b);
        }
    }
    let rss = model(a, b);
    Ok(PowerLawFit {
        a,
        b,
        rss,
        r_squared: r_squared(points, rss),
        method,
        iterations,
    })
}

/// Fits `y = c1 / (x + c2)` to `(x, y)` pairs with `c2 > -min(x)`.
///
/// For fixed `c2` the best `c1` is linear, so the RSS is profiled over
/// `c2` (log-spaced grid, then golden section) and the optimum polished
/// with backtracking Gauss-Newton in both parameters.
pub fn fit_hyperbola(points: &[(f64, f64)]) -> Result<HyperbolaFit> {
    check_points(points, false)?;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    ols(&xs, &xs)?;
    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = xs.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let best_c1 = |c2: f64| {
        let (mut num, mut den) = (0.0, 0.0);
        for &(x, y) in points {
            let u = 1.0 / (x + c2);
            num += y * u;
            den += u * u;
        }
        num / den
    };
    let model = |c1: f64, c2: f64| {
        if xs.iter().any(|x| x + c2 <= 0.0) {
            f64::INFINITY
        } else {
            rss_of(points, |x| c1 / (x + c2))
        }
    };
    // c2 = exp(s) - x_min
    let profile = |s: f64| {
        let c2 = s.exp() - x_min;
        model(best_c1(c2), c2)
    };
    let (lo, hi) = ((1e-9 * scale).ln(), (1e6 * scale).ln());
    let steps = 400;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect();
    let k = (0..=steps)
        .min_by(|&a, &b| profile(grid[a]).total_cmp(&profile(grid[b])))
        .expect("non-empty grid");
    let (mut a, mut b) = (grid[k.saturating_sub(1)], grid[(k + 1).min(steps)]);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        if b - a < 1e-14 * (1.0 + a.abs()) {
            break;
        }
        let m1 = b - phi * (b - a);
        let m2 = a + phi * (b - a);
        if profile(m1) <= profile(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let mut c2 = (0.5 * (a + b)).exp() - x_min;
    let mut c1 = best_c1(c2);
    let mut rss = model(c1, c2);
    for _ in 0..NLS_MAX_ITERATIONS {
        let (mut j11, mut j12, mut j22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(x, y) in points {
            let u = 1.0 / (x + c2);
            let d1 = u;
            let d2 = -c1 * u * u;
            let r = y - c1 * u;
            j11 += d1 * d1;
            j12 += d1 * d2;
            j22 += d2 * d2;
            g1 += d1 * r;
            g2 += d2 * r;
        }
        let det = j11 * j22 - j12 * j12;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let mut s1 = (j22 * g1 - j12 * g2) / det;
        let mut s2 = (j11 * g2 - j12 * g1) / det;
        let mut improved = false;
        for _ in 0..MAX_HALVINGS {
            let trial = model(c1 + s1, c2 + s2);
            if trial < rss && c1 + s1 > 0.0 {
                c1 += s1;
                c2 += s2;
                rss = trial;
                improved = true;
                break;
            }
            s1 *= 0.5;
            s2 *= 0.5;
        }
        if !improved || (s1 / c1).abs().max((s2 / (c2.abs() + scale)).abs()) < NLS_STEP_TOLERANCE {
            break;
        }
    }
    Ok(HyperbolaFit {
        c1,
        c2,
        rss,
        r_squared: r_squared(points, rss),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: [(f64, f64); 6] = [
        (0.0083, 158.0),
        (0.1050, 63.0),
        (0.1974, 49.0),
        (0.3038, 29.5),
        (0.3267, 27.0),
        (0.3301, 20.5),
    ];

    #[test]
    fn noiseless_power_law() {
        let pts: Vec<_> = [0.05, 0.1, 0.2, 0.4, 0.8]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x.powf(-0.5)))
            .collect();
        for m in [PowerLawMethod::LogLogOls, PowerLawMethod::Nls] {
            let f = fit_power_law(&pts, m).unwrap();
            assert!(
                (f.a - 3.0).abs() < 1e-8 && (f.b - 0.5).abs() < 1e-8,
                "{f:?}"
            );
        }
    }

    #[test]
    fn table_values() {
        let nls = fit_power_law(&TABLE, PowerLawMethod::Nls).unwrap();
        let ols = fit_power_law(&TABLE, PowerLawMethod::LogLogOls).unwrap();
        assert!((nls.b - 0.434).abs() < 5e-4, "nls b = {}", nls.b);
        assert!((0.40..=0.50).contains(&ols.b));
        assert!(nls.rss <= ols.rss);
        assert!(nls.rss < fit_linear(&TABLE).unwrap().rss);
    }

    #[test]
    fn scaling_t_scales_a_only() {
        let f = fit_power_law(&TABLE, PowerLawMethod::LogLogOls).unwrap();
        let scaled: Vec<_> = TABLE.iter().map(|&(x, t)| (x, 7.0 * t)).collect();
        let g = fit_power_law(&scaled, PowerLawMethod::LogLogOls).unwrap();
        assert!((g.a - 7.0 * f.a).abs() < 1e-10 * g.a);
        assert!((g.b - f.b).abs() < 1e-10);
    }

    #[test]
    fn power_law_preconditions() {
        assert!(fit_power_law(&[(1.0, 1.0)], PowerLawMethod::Nls).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (0.0, 2.0), (2.0, 3.0)], PowerLawMethod::Nls).is_err());
    }

    #[test]
    fn noiseless_hyperbola() {
        let pts: Vec<_> = [1.0, 1.5, 2.0, 3.0, 5.0]
            .iter()
            .map(|&d| (d, 2.0 / (d + 0.3)))
            .collect();
        let f = fit_hyperbola(&pts).unwrap();
        assert!(
            (f.c1 - 2.0).abs() < 1e-8 && (f.c2 - 0.3).abs() < 1e-8,
            "{f:?}"
        );
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyperbola_degenerate() {
        assert!(fit_hyperbola(&[(2.0, 1.0), (2.0, 0.5), (2.0, 0.7)]).is_err());
    }

    #[test]
    fn linear_exact() {
        let f = fit_linear(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert_eq!(f.r_squared, 1.0);
    }
}
