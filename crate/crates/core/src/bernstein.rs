//! Bernstein functions / subordinator Laplace exponents with their
//! characteristic triples (killing a, drift b, Levy measure nu).
//!
//! Standing assumptions: the killing rate is zero, and a zero drift forces an
//! infinite-activity Levy measure. `validate` checks both numerically.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quad::{quad_lower_singular, quad_semi_inf_singular, Tail};
use crate::numerics::special::{exp_integral_e1, gamma, gamma_p, gamma_q, ln_gamma};

/// User-supplied Bernstein function given through its characteristic triple.
/// Only the Levy tail is mandatory; a direct evaluator short-circuits the
/// quadrature reconstruction when present.
#[derive(Clone)]
pub struct CustomBernstein {
    /// Killing rate a; must be zero to pass validation.
    pub killing: f64,
    /// Drift b >= 0.
    pub drift: f64,
    /// Tail of the Levy measure, t -> nu(t, inf).
    pub levy_tail: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Direct evaluator for Phi, if known.
    pub phi: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    /// Power-law exponent of the tail at 0+ (nu_bar ~ t^{-gamma}), used as a
    /// quadrature hint. Defaults to 0.5 when unknown.
    pub singular_exponent: f64,
}

impl fmt::Debug for CustomBernstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomBernstein")
            .field("killing", &self.killing)
            .field("drift", &self.drift)
            .field("has_phi", &self.phi.is_some())
            .field("singular_exponent", &self.singular_exponent)
            .finish()
    }
}

/// A Bernstein function Phi with zero killing, representable as
/// Phi(lambda) = b lambda + int_0^inf (1 - e^{-t lambda}) nu(dt).
#[derive(Debug, Clone)]
pub enum BernsteinFunction {
    /// Phi(lambda) = lambda^alpha, alpha in (0, 1).
    Stable { alpha: f64 },
    /// Phi(lambda) = (lambda + eta)^alpha - eta^alpha.
    TemperedStable { alpha: f64, eta: f64 },
    /// Phi(lambda) = a ln(1 + lambda / b); the Gamma(a, b) subordinator.
    GammaSub { shape: f64, rate: f64 },
    Custom(CustomBernstein),
}

impl BernsteinFunction {
    pub fn stable(alpha: f64) -> Result<Self> {
        crate::numerics::stable::check_alpha(alpha)?;
        Ok(BernsteinFunction::Stable { alpha })
    }

    pub fn tempered_stable(alpha: f64, eta: f64) -> Result<Self> {
        crate::numerics::stable::check_alpha(alpha)?;
        if !(eta > 0.0) {
            return Err(Error::domain(format!("tempering rate must be > 0, got {eta}")));
        }
        Ok(BernsteinFunction::TemperedStable { alpha, eta })
    }

    pub fn gamma_subordinator(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && rate > 0.0) {
            return Err(Error::domain(format!(
                "gamma subordinator needs shape > 0 and rate > 0, got ({shape}, {rate})"
            )));
        }
        Ok(BernsteinFunction::GammaSub { shape, rate })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BernsteinFunction::Stable { .. } => "stable",
            BernsteinFunction::TemperedStable { .. } => "tempered-stable",
            BernsteinFunction::GammaSub { .. } => "gamma",
            BernsteinFunction::Custom(_) => "custom",
        }
    }

    /// Laplace exponent Phi(lambda), lambda >= 0.
    pub fn phi(&self, lambda: f64) -> Result<f64> {
        if lambda < 0.0 || !lambda.is_finite() {
            return Err(Error::domain(format!("phi requires lambda >= 0, got {lambda}")));
        }
        match self {
            BernsteinFunction::Stable { alpha } => Ok(lambda.powf(*alpha)),
            BernsteinFunction::TemperedStable { alpha, eta } => {
                Ok((lambda + eta).powf(*alpha) - eta.powf(*alpha))
            }
            BernsteinFunction::GammaSub { shape, rate } => Ok(shape * (lambda / rate).ln_1p()),
            BernsteinFunction::Custom(c) => {
                if let Some(phi) = &c.phi {
                    Ok(phi(lambda))
                } else {
                    self.phi_from_triple(lambda)
                }
            }
        }
    }

    /// Phi on the right complex half-plane; available for the built-in kinds
    /// whose closed forms continue analytically. Used by contour inversion.
    pub fn phi_complex(&self, lambda: Complex64) -> Option<Complex64> {
        match self {
            BernsteinFunction::Stable { alpha } => Some(lambda.powf(*alpha)),
            BernsteinFunction::TemperedStable { alpha, eta } => {
                Some((lambda + eta).powf(*alpha) - eta.powf(*alpha))
            }
            BernsteinFunction::GammaSub { shape, rate } => {
                Some((Complex64::new(1.0, 0.0) + lambda / *rate).ln() * *shape)
            }
            BernsteinFunction::Custom(_) => None,
        }
    }

    /// Phi reconstructed from the characteristic triple:
    /// b lambda + lambda int_0^inf e^{-lambda s} nu_bar(s) ds
    /// (integration by parts of the representation formula).
    pub fn phi_from_triple(&self, lambda: f64) -> Result<f64> {
        if lambda < 0.0 {
            return Err(Error::domain(format!("phi requires lambda >= 0, got {lambda}")));
        }
        if lambda == 0.0 {
            return Ok(0.0);
        }
        let gamma_hint = self.singular_exponent();
        let integral = quad_semi_inf_singular(
            |s| (-lambda * s).exp() * self.levy_tail(s).unwrap_or(0.0),
            gamma_hint,
            Tail::ExpDecay(1.0 / lambda),
            1e-11,
        )?;
        Ok(self.drift() * lambda + lambda * integral.value)
    }

    /// Levy tail nu_bar(t) = nu(t, +inf), t > 0.
    pub fn levy_tail(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::domain(format!("levy_tail requires t > 0, got {t}")));
        }
        match self {
            BernsteinFunction::Stable { alpha } => Ok(t.powf(-alpha) / gamma(1.0 - alpha)?),
            BernsteinFunction::TemperedStable { alpha, eta } => {
                // alpha/G(1-a) int_t^inf s^{-1-a} e^{-eta s} ds
                //   = eta^a [ (eta t)^{-a} e^{-eta t} - G(1-a) Q(1-a, eta t) ] / G(1-a)
                let x = eta * t;
                let g1a = gamma(1.0 - alpha)?;
                if x > 700.0 {
                    return Ok(0.0);
                }
                let q = gamma_q(1.0 - alpha, x)?;
                let val = eta.powf(*alpha) * (x.powf(-alpha) * (-x).exp() - g1a * q) / g1a;
                Ok(val.max(0.0))
            }
            BernsteinFunction::GammaSub { shape, rate } => {
                let x = rate * t;
                if x > 700.0 {
                    return Ok(0.0);
                }
                Ok(shape * exp_integral_e1(x)?)
            }
            BernsteinFunction::Custom(c) => Ok((c.levy_tail)(t)),
        }
    }

    /// Levy density nu(s) for the built-in kinds.
    pub fn levy_density(&self, s: f64) -> Option<f64> {
        if s <= 0.0 {
            return None;
        }
        match self {
            BernsteinFunction::Stable { alpha } => {
                Some(alpha * s.powf(-1.0 - alpha) / gamma(1.0 - alpha).ok()?)
            }
            BernsteinFunction::TemperedStable { alpha, eta } => {
                Some(alpha * s.powf(-1.0 - alpha) * (-eta * s).exp() / gamma(1.0 - alpha).ok()?)
            }
            BernsteinFunction::GammaSub { shape, rate } => Some(shape * (-rate * s).exp() / s),
            BernsteinFunction::Custom(_) => None,
        }
    }

    pub fn drift(&self) -> f64 {
        match self {
            BernsteinFunction::Custom(c) => c.drift,
            _ => 0.0,
        }
    }

    pub fn killing(&self) -> f64 {
        match self {
            BernsteinFunction::Custom(c) => c.killing,
            _ => 0.0,
        }
    }

    /// Power-law exponent of nu_bar at 0+, used as quadrature hint.
    pub fn singular_exponent(&self) -> f64 {
        match self {
            BernsteinFunction::Stable { alpha }
            | BernsteinFunction::TemperedStable { alpha, .. } => *alpha,
            // log singularity; a small power hint tames it
            BernsteinFunction::GammaSub { .. } => 0.25,
            BernsteinFunction::Custom(c) => c.singular_exponent,
        }
    }

    /// Mean of the small jumps, int_0^eps s nu(ds).
    pub fn small_jump_mean(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0) {
            return Err(Error::domain("small-jump cutoff must be > 0"));
        }
        match self {
            BernsteinFunction::Stable { alpha } => {
                Ok(alpha / gamma(1.0 - alpha)? * eps.powf(1.0 - alpha) / (1.0 - alpha))
            }
            BernsteinFunction::TemperedStable { alpha, eta } => {
                // a/G(1-a) int_0^eps s^{-a} e^{-eta s} ds = a/G(1-a) eta^{a-1} gamma(1-a, eta eps)
                let p = gamma_p(1.0 - alpha, eta * eps)?;
                let lower_inc = ln_gamma(1.0 - alpha)?.exp() * p;
                Ok(alpha / gamma(1.0 - alpha)? * eta.powf(alpha - 1.0) * lower_inc)
            }
            BernsteinFunction::GammaSub { shape, rate } => {
                Ok(shape / rate * (1.0 - (-rate * eps).exp()))
            }
            BernsteinFunction::Custom(_) => {
                // int_0^eps s nu(ds) = int_0^eps nu_bar(s) ds - eps nu_bar(eps)
                let hint = self.singular_exponent();
                let tail_at_eps = self.levy_tail(eps)?;
                let integral = quad_lower_singular(
                    |s| self.levy_tail(s).unwrap_or(0.0),
                    0.0,
                    eps,
                    hint,
                    1e-11,
                )?;
                Ok((integral.value - eps * tail_at_eps).max(0.0))
            }
        }
    }

    /// Draw one jump from nu conditioned on (eps, inf).
    pub fn sample_jump<R: Rng + ?Sized>(&self, eps: f64, rng: &mut R) -> Result<f64> {
        match self {
            BernsteinFunction::Stable { alpha } => {
                // conditional tail (x/eps)^{-alpha}: exact inversion
                let u: f64 = rng.random::<f64>().clamp(1e-16, 1.0);
                Ok(eps * u.powf(-1.0 / alpha))
            }
            BernsteinFunction::TemperedStable { alpha, eta } => {
                // thin stable proposals by e^{-eta (x - eps)}
                for _ in 0..10_000 {
                    let u: f64 = rng.random::<f64>().clamp(1e-16, 1.0);
                    let x = eps * u.powf(-1.0 / alpha);
                    let accept: f64 = rng.random();
                    if accept <= (-eta * (x - eps)).exp() {
                        return Ok(x);
                    }
                }
                Err(Error::Numeric("tempered-stable jump rejection stalled".into()))
            }
            _ => {
                // numeric inversion of the conditional tail by bisection
                let tail_eps = self.levy_tail(eps)?;
                if tail_eps <= 0.0 {
                    return Err(Error::Numeric("jump law has no mass beyond the cutoff".into()));
                }
                let u: f64 = rng.random::<f64>().clamp(1e-16, 1.0 - 1e-16);
                let target = u * tail_eps;
                let mut lo = eps;
                let mut hi = eps.max(1.0);
                while self.levy_tail(hi)? > target {
                    hi *= 4.0;
                    if hi > 1e12 {
                        break;
                    }
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.levy_tail(mid)? > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if (hi - lo) <= 1e-12 * hi {
                        break;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }

    /// Check the standing assumptions numerically; built-ins come back clean.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.killing() != 0.0 {
            violations.push("killing rate must be zero".to_string());
        }
        if self.drift() < 0.0 {
            violations.push("drift must be nonnegative".to_string());
        }
        if self.drift() == 0.0 {
            // infinite activity: nu_bar must diverge along three decades of t -> 0+
            let t0 = self.levy_tail(1e-3).unwrap_or(f64::NAN);
            let t1 = self.levy_tail(1e-6).unwrap_or(f64::NAN);
            let t2 = self.levy_tail(1e-9).unwrap_or(f64::NAN);
            // 20% growth per three decades separates divergence (including the
            // logarithmic kind) from a saturating finite measure.
            let diverges = t0.is_finite()
                && t1.is_finite()
                && t2.is_finite()
                && t1 > 1.2 * t0
                && t2 > 1.2 * t1;
            if !diverges {
                violations.push(
                    "infinite activity required: levy tail does not diverge as t -> 0+"
                        .to_string(),
                );
            }
        }
        match self.phi(0.0) {
            Ok(v) if v.abs() <= 1e-9 => {}
            Ok(v) => violations.push(format!("phi(0) must vanish, got {v:.3e}")),
            Err(e) => violations.push(format!("phi(0) not evaluable: {e}")),
        }
        // monotone nondecreasing and concave on a sampled grid
        let lambdas: Vec<f64> = (0..25).map(|i| 1e-2 * 10f64.powf(i as f64 / 6.0)).collect();
        let mut prev = 0.0f64;
        for (i, &l) in lambdas.iter().enumerate() {
            match self.phi(l) {
                Ok(v) => {
                    if v < prev - 1e-9 * prev.abs().max(1.0) {
                        violations.push(format!("phi not nondecreasing near lambda={l:.3e}"));
                        break;
                    }
                    prev = v;
                    if i + 2 < lambdas.len() {
                        let (a, mid, b) = (l, lambdas[i + 1], lambdas[i + 2]);
                        if let (Ok(fa), Ok(fm), Ok(fb)) =
                            (self.phi(a), self.phi(mid), self.phi(b))
                        {
                            let w = (mid - a) / (b - a);
                            let chord = fa + w * (fb - fa);
                            if fm < chord - 1e-6 * fb.abs().max(1.0) {
                                violations.push(format!("phi not concave near lambda={mid:.3e}"));
                                break;
                            }
                        }
                    }
                }
                Err(e) => {
                    violations.push(format!("phi({l:.3e}) not evaluable: {e}"));
                    break;
                }
            }
        }
        // integrability of (t ^ 1) nu(dt): both pieces must be finite
        if let Ok(m) = self.small_jump_mean(1.0) {
            if !m.is_finite() {
                violations.push("int_0^1 t nu(dt) is not finite".to_string());
            }
        }
        if let Ok(t1) = self.levy_tail(1.0) {
            if !t1.is_finite() {
                violations.push("nu(1, inf) is not finite".to_string());
            }
        }
        ValidationReport { violations }
    }

    /// Build from the CLI JSON shape `{"kind": "...", "params": {...}}`.
    pub fn from_spec(spec: &BernsteinSpec) -> Result<Self> {
        match spec.kind.as_str() {
            "stable" => BernsteinFunction::stable(spec.param("alpha")?),
            "tempered-stable" => {
                BernsteinFunction::tempered_stable(spec.param("alpha")?, spec.param("eta")?)
            }
            "gamma" => {
                BernsteinFunction::gamma_subordinator(spec.param("shape")?, spec.param("rate")?)
            }
            other => Err(Error::InvalidInput(format!(
                "unknown bernstein kind {other:?}; expected stable, tempered-stable or gamma"
            ))),
        }
    }

    pub fn to_spec(&self) -> Result<BernsteinSpec> {
        let mut params = serde_json::Map::new();
        match self {
            BernsteinFunction::Stable { alpha } => {
                params.insert("alpha".into(), (*alpha).into());
            }
            BernsteinFunction::TemperedStable { alpha, eta } => {
                params.insert("alpha".into(), (*alpha).into());
                params.insert("eta".into(), (*eta).into());
            }
            BernsteinFunction::GammaSub { shape, rate } => {
                params.insert("shape".into(), (*shape).into());
                params.insert("rate".into(), (*rate).into());
            }
            BernsteinFunction::Custom(_) => {
                return Err(Error::InvalidInput(
                    "custom bernstein functions have no JSON form".into(),
                ))
            }
        }
        Ok(BernsteinSpec {
            kind: self.kind_name().to_string(),
            params,
        })
    }
}

/// JSON schema for Bernstein functions consumed by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BernsteinSpec {
    pub kind: String,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
}

impl BernsteinSpec {
    fn param(&self, name: &str) -> Result<f64> {
        self.params
            .get(name)
            .and_then(|v| v.as_f64())
            .ok_or_else(|| {
                Error::InvalidInput(format!("bernstein spec missing numeric param {name:?}"))
            })
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}
