//! Numerical inverse Laplace transforms: fixed-Talbot contour for transforms
//! with a complex evaluator, Gaver-Stehfest for real-axis-only evaluators,
//! and a cross-checked combination.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Fixed-Talbot inversion at time t > 0 with m contour nodes.
/// The transform must be analytic to the right of the Talbot contour.
pub fn talbot<F: Fn(Complex64) -> Complex64>(transform: F, t: f64, m: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("talbot requires t > 0, got {t}")));
    }
    if m < 4 {
        return Err(Error::domain("talbot needs at least 4 nodes"));
    }
    let r = 2.0 * m as f64 / (5.0 * t);
    let mut sum = 0.5 * (r * t).exp() * transform(Complex64::new(r, 0.0)).re;
    for k in 1..m {
        let theta = k as f64 * std::f64::consts::PI / m as f64;
        let cot = theta.cos() / theta.sin();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = ((s * t).exp() * transform(s) * Complex64::new(1.0, sigma)).re;
        sum += term;
    }
    let value = r * sum / m as f64;
    if !value.is_finite() {
        return Err(Error::Numeric("talbot contour sum is non-finite".into()));
    }
    Ok(value)
}

/// Stehfest weights for an even number of terms; factorials up to 16! are
/// exactly representable so the weights are computed in f64 directly.
fn stehfest_weights(n: usize) -> Vec<f64> {
    let m = n / 2;
    let fact: Vec<f64> = {
        let mut f = vec![1.0f64; n + 1];
        for i in 1..=n {
            f[i] = f[i - 1] * i as f64;
        }
        f
    };
    let mut w = vec![0.0f64; n + 1];
    for (k, wk) in w.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        let lo = k.div_ceil(2);
        let hi = k.min(m);
        for j in lo..=hi {
            acc += (j as f64).powi(m as i32) * fact[2 * j]
                / (fact[m - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k]);
        }
        let sign = if (m + k) % 2 == 0 { 1.0 } else { -1.0 };
        *wk = sign * acc;
    }
    w
}

/// Gaver-Stehfest inversion at time t > 0 using n_terms (even, <= 18)
/// real-axis evaluations of the transform.
pub fn gaver_stehfest<F: Fn(f64) -> f64>(transform: F, t: f64, n_terms: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("gaver_stehfest requires t > 0, got {t}")));
    }
    if n_terms < 4 || n_terms % 2 != 0 || n_terms > 18 {
        return Err(Error::domain(
            "gaver_stehfest needs an even term count in [4, 18]",
        ));
    }
    let ln2 = std::f64::consts::LN_2;
    let w = stehfest_weights(n_terms);
    let mut sum = 0.0;
    for (k, &wk) in w.iter().enumerate().skip(1) {
        sum += wk * transform(k as f64 * ln2 / t);
    }
    let value = sum * ln2 / t;
    if !value.is_finite() {
        return Err(Error::Numeric("gaver-stehfest sum is non-finite".into()));
    }
    Ok(value)
}

/// Euler-summed Bromwich inversion (Abate-Whitt framework). All evaluation
/// nodes sit on the vertical line Re(s) = m ln(10) / (3t) > 0, so this method
/// also works for transforms that are only available through numerical
/// forward integration (unlike Talbot, whose contour crosses into the
/// divergence half-plane of such data).
pub fn euler_bromwich<F: Fn(Complex64) -> Complex64>(
    transform: F,
    t: f64,
    m: usize,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("euler_bromwich requires t > 0, got {t}")));
    }
    if !(2..=18).contains(&m) {
        return Err(Error::domain("euler_bromwich needs m in [2, 18]"));
    }
    let binom = |n: usize, k: usize| -> f64 {
        let mut v = 1.0f64;
        for i in 0..k {
            v = v * (n - i) as f64 / (i + 1) as f64;
        }
        v
    };
    let mut xi = vec![0.0f64; 2 * m + 1];
    xi[0] = 0.5;
    for x in xi.iter_mut().take(m + 1).skip(1) {
        *x = 1.0;
    }
    xi[2 * m] = 0.5f64.powi(m as i32);
    for k in 1..m {
        xi[2 * m - k] = xi[2 * m - k + 1] + 0.5f64.powi(m as i32) * binom(m, k);
    }
    let a = m as f64 * 10.0f64.ln() / 3.0;
    let mut sum = 0.0;
    for (k, &x) in xi.iter().enumerate() {
        let s = Complex64::new(a, std::f64::consts::PI * k as f64) / t;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * x * transform(s).re;
    }
    let value = 10.0f64.powf(m as f64 / 3.0) / t * sum;
    if !value.is_finite() {
        return Err(Error::Numeric("euler-bromwich sum is non-finite".into()));
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy)]
pub struct InversionOptions {
    pub talbot_nodes: usize,
    pub stehfest_terms: usize,
    /// When set, run both methods and fail if they disagree by more than this
    /// (relative to the larger magnitude, absolute below 1).
    pub cross_check_tol: Option<f64>,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions {
            talbot_nodes: 32,
            stehfest_terms: 14,
            cross_check_tol: None,
        }
    }
}

/// Invert a transform with a complex evaluator; fixed Talbot is the primary
/// method, Gaver-Stehfest the independent cross-check.
pub fn invert<F: Fn(Complex64) -> Complex64>(
    transform: F,
    t: f64,
    opts: InversionOptions,
) -> Result<f64> {
    let primary = talbot(&transform, t, opts.talbot_nodes)?;
    if let Some(tol) = opts.cross_check_tol {
        let check = gaver_stehfest(
            |s| transform(Complex64::new(s, 0.0)).re,
            t,
            opts.stehfest_terms,
        )?;
        let scale = primary.abs().max(check.abs()).max(1.0);
        let disc = (primary - check).abs() / scale;
        if disc > tol {
            return Err(Error::Accuracy {
                message: format!(
                    "laplace inversion cross-check mismatch at t={t}: talbot {primary:.9e} vs gaver-stehfest {check:.9e}"
                ),
                best_estimate: primary,
                error_estimate: disc,
            });
        }
    }
    Ok(primary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn inverts_elementary_transforms() {
        // L^{-1}[1/s] = 1 at t = 3
        let one = talbot(|s| 1.0 / s, 3.0, 32).unwrap();
        assert_relative_eq!(one, 1.0, epsilon = 1e-10);
        // L^{-1}[1/s^2] = t at t = 2
        let ramp = talbot(|s| 1.0 / (s * s), 2.0, 32).unwrap();
        assert_relative_eq!(ramp, 2.0, epsilon = 1e-9);
        let decay = talbot(|s| 1.0 / (s + 1.0), 1.5, 32).unwrap();
        assert_relative_eq!(decay, (-1.5f64).exp(), epsilon = 1e-10);
    }

    #[test]
    fn inverts_inverse_subordinator_transform() {
        // L^{-1}[s^{-1/2} e^{-sqrt(s)}](1) = f_{1/2}(1;1) = e^{-1/4}/sqrt(pi)
        let f = |s: Complex64| s.powf(-0.5) * (-s.sqrt()).exp();
        let v = talbot(f, 1.0, 32).unwrap();
        assert_relative_eq!(v, 0.439_391_289_467_722_4, epsilon = 1e-9);
    }

    #[test]
    fn gaver_stehfest_agrees_on_smooth_transforms() {
        // N=14 carries ~1e-7 cancellation noise in f64; tolerances reflect that.
        let v = gaver_stehfest(|s| 1.0 / s, 3.0, 14).unwrap();
        assert_relative_eq!(v, 1.0, epsilon = 1e-6);
        let v = gaver_stehfest(|s| 1.0 / (s * s), 2.0, 14).unwrap();
        assert_relative_eq!(v, 2.0, epsilon = 1e-6);
        let v = gaver_stehfest(|s| 1.0 / (s + 1.0), 1.0, 14).unwrap();
        assert_relative_eq!(v, (-1.0f64).exp(), max_relative = 1e-4);
    }

    #[test]
    fn euler_bromwich_inverts_smooth_transforms() {
        for &t in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            let v = euler_bromwich(|s| 1.0 / (s + 1.0), t, 12).unwrap();
            assert!((v - (-t).exp()).abs() < 1e-7, "t={t}: {v}");
        }
        let v = euler_bromwich(|s| s.powf(-0.5) * (-s.sqrt()).exp(), 1.0, 12).unwrap();
        assert_relative_eq!(v, 0.439_391_289_467_722_4, epsilon = 1e-7);
    }

    #[test]
    fn cross_check_flags_inconsistent_evaluators() {
        // Complex evaluator deliberately inconsistent with its real axis values.
        let broken = |s: Complex64| {
            if s.im == 0.0 {
                Complex64::new(1.0, 0.0) / s
            } else {
                Complex64::new(2.0, 0.0) / s
            }
        };
        let opts = InversionOptions {
            cross_check_tol: Some(1e-6),
            ..Default::default()
        };
        assert!(invert(broken, 1.0, opts).is_err());
    }

    #[test]
    fn recovers_exponential_from_numerically_transformed_data() {
        // Forward transform of e^{-t} computed by quadrature (real and
        // imaginary parts separately), inverted on the Re(s) > 0 line:
        // recovers e^{-t} on [0.1, 5] within 1e-6.
        use crate::numerics::quad::{quad_semi_inf, Tail};
        let forward = |s: Complex64| {
            let scale = 1.0 / (s.re + 1.0);
            let re = quad_semi_inf(
                |t: f64| (-(s.re + 1.0) * t).exp() * (s.im * t).cos(),
                0.0,
                Tail::ExpDecay(scale),
                1e-13,
            )
            .unwrap()
            .value;
            let im = quad_semi_inf(
                |t: f64| -(-(s.re + 1.0) * t).exp() * (s.im * t).sin(),
                0.0,
                Tail::ExpDecay(scale),
                1e-13,
            )
            .unwrap()
            .value;
            Complex64::new(re, im)
        };
        for &t in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            let v = euler_bromwich(forward, t, 12).unwrap();
            assert!(
                (v - (-t).exp()).abs() < 1e-6,
                "t={t}: {v} vs {}",
                (-t).exp()
            );
        }
    }
}
