//! Subordinator path simulation, first-passage inversion to the inverse
//! subordinator, and the inverse-subordinator density f(s; t) with its
//! negative moments.
//!
//! The density is characterized through its Laplace transform in t,
//! L[f(s; .)](lambda) = Phi(lambda)/lambda * exp(-s Phi(lambda)).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::bernstein::BernsteinFunction;
use crate::error::{Error, Result};
use crate::numerics::laplace::{euler_bromwich, gaver_stehfest};
use crate::numerics::quad::{quad_semi_inf, quad_semi_inf_singular, Tail};
use crate::numerics::stable::{check_alpha, sample_standard_stable, stable_density};
use crate::numerics::{Grid, RngStream};

/// A subordinator trajectory on an operational-time grid; values are
/// nondecreasing calendar times.
#[derive(Debug, Clone)]
pub struct SubordinatorPath {
    pub grid: Grid,
    pub values: Vec<f64>,
}

/// The right-continuous inverse E(t) = inf{y : sigma(y) > t} sampled on a
/// calendar-time grid; values are nondecreasing operational times.
#[derive(Debug, Clone)]
pub struct InverseSubordinatorPath {
    pub grid: Grid,
    pub values: Vec<f64>,
}

/// Alpha-stable subordinator: independent one-sided stable increments scaled
/// by (dy)^{1/alpha}, Chambers-Mallows-Stuck variates.
pub fn sample_stable_subordinator(
    alpha: f64,
    grid: &Grid,
    stream: RngStream,
) -> Result<SubordinatorPath> {
    check_alpha(alpha)?;
    if grid.first() != 0.0 {
        return Err(Error::domain("subordinator grid must start at 0"));
    }
    let mut rng = stream.rng();
    let points = grid.points();
    let mut values = Vec::with_capacity(points.len());
    values.push(0.0);
    let mut acc = 0.0;
    for w in points.windows(2) {
        let dy = w[1] - w[0];
        acc += dy.powf(1.0 / alpha) * sample_standard_stable(alpha, &mut rng);
        values.push(acc);
    }
    Ok(SubordinatorPath { grid: grid.clone(), values })
}

/// General subordinator via drift + compound-Poisson jumps above the cutoff
/// + deterministic small-jump mean compensation. The stable kind delegates to
/// the exact increment sampler.
pub fn sample_subordinator(
    f: &BernsteinFunction,
    grid: &Grid,
    jump_cutoff: f64,
    stream: RngStream,
) -> Result<SubordinatorPath> {
    if let BernsteinFunction::Stable { alpha } = f {
        return sample_stable_subordinator(*alpha, grid, stream);
    }
    if grid.first() != 0.0 {
        return Err(Error::domain("subordinator grid must start at 0"));
    }
    if !(jump_cutoff > 0.0) {
        return Err(Error::domain("jump cutoff must be > 0"));
    }
    let rate = f.levy_tail(jump_cutoff)?;
    let drift_slope = f.drift() + f.small_jump_mean(jump_cutoff)?;
    let mut rng = stream.rng();
    let points = grid.points();
    let mut values = Vec::with_capacity(points.len());
    values.push(0.0);
    let mut acc = 0.0;
    for w in points.windows(2) {
        let dy = w[1] - w[0];
        acc += drift_slope * dy;
        if rate > 0.0 {
            let n = Poisson::new(rate * dy)
                .map_err(|e| Error::Numeric(format!("poisson rate failure: {e}")))?
                .sample(&mut rng);
            for _ in 0..n as u64 {
                acc += f.sample_jump(jump_cutoff, &mut rng)?;
            }
        }
        values.push(acc);
    }
    Ok(SubordinatorPath { grid: grid.clone(), values })
}

/// First-passage inversion of a simulated path: for each t, the first grid
/// time where sigma strictly exceeds t (ties resolve to the smaller
/// operational time).
pub fn invert_path(path: &SubordinatorPath, t_grid: &Grid) -> Result<InverseSubordinatorPath> {
    let sigma_max = *path.values.last().unwrap();
    if t_grid.last() >= sigma_max {
        return Err(Error::Horizon {
            requested: t_grid.last(),
            available: sigma_max,
        });
    }
    let ys = path.grid.points();
    let values = t_grid
        .points()
        .iter()
        .map(|&t| {
            let j = path.values.partition_point(|&v| v <= t);
            ys[j]
        })
        .collect();
    Ok(InverseSubordinatorPath {
        grid: t_grid.clone(),
        values,
    })
}

/// Simulation controls for inverse-subordinator sampling.
#[derive(Debug, Clone, Copy)]
pub struct PassageOptions {
    /// Target number of operational steps before first passage.
    pub steps: usize,
    /// Compound-Poisson small-jump cutoff for non-stable kinds.
    pub jump_cutoff: f64,
    /// Extension cap: give up after this many times the probe horizon.
    pub max_extensions: usize,
}

impl Default for PassageOptions {
    fn default() -> Self {
        PassageOptions {
            steps: 1024,
            jump_cutoff: 1e-4,
            max_extensions: 64,
        }
    }
}

/// Simulate the inverse subordinator on a calendar grid. The operational
/// horizon is probed with a coarse pass, then the path is re-simulated at the
/// target resolution and extended as needed (E(t) is a.s. finite).
pub fn sample_inverse_path(
    f: &BernsteinFunction,
    t_grid: &Grid,
    opts: PassageOptions,
    stream: RngStream,
) -> Result<InverseSubordinatorPath> {
    let t_max = t_grid.last();
    if t_max == 0.0 {
        return Ok(InverseSubordinatorPath {
            grid: t_grid.clone(),
            values: vec![0.0; t_grid.len()],
        });
    }
    // Coarse probe with its own substream: step 1 until passage.
    let probe_horizon = {
        let mut rng = stream.substream(0).rng();
        let mut acc = 0.0;
        let mut y = 0.0;
        let mut dy = 1.0;
        let mut iters = 0usize;
        while acc <= t_max {
            acc += increment(f, dy, opts.jump_cutoff, &mut rng)?;
            y += dy;
            iters += 1;
            if iters % 4096 == 0 {
                dy *= 2.0; // drift-dominated cases: accelerate the probe
            }
            if iters > 1 << 22 {
                return Err(Error::Resource(
                    "operational horizon probe exceeded the iteration cap".into(),
                ));
            }
        }
        y
    };
    // Fine pass: fixed step, extended in chunks until the last t is passed.
    let dy = (1.25 * probe_horizon / opts.steps as f64).max(1e-300);
    let mut rng = stream.substream(1).rng();
    let mut ys = vec![0.0];
    let mut sigma = vec![0.0];
    let mut acc = 0.0;
    let mut k = 0usize;
    let cap = opts.steps * opts.max_extensions;
    while acc <= t_max {
        acc += increment(f, dy, opts.jump_cutoff, &mut rng)?;
        k += 1;
        ys.push(k as f64 * dy);
        sigma.push(acc);
        if k > cap {
            return Err(Error::Horizon {
                requested: t_max,
                available: acc,
            });
        }
    }
    let path = SubordinatorPath {
        grid: Grid::new(ys)?,
        values: sigma,
    };
    invert_path(&path, t_grid)
}

fn increment<R: Rng + ?Sized>(
    f: &BernsteinFunction,
    dy: f64,
    jump_cutoff: f64,
    rng: &mut R,
) -> Result<f64> {
    match f {
        BernsteinFunction::Stable { alpha } => {
            Ok(dy.powf(1.0 / alpha) * sample_standard_stable(*alpha, rng))
        }
        _ => {
            let mut inc = (f.drift() + f.small_jump_mean(jump_cutoff)?) * dy;
            let rate = f.levy_tail(jump_cutoff)?;
            if rate > 0.0 {
                let n = Poisson::new(rate * dy)
                    .map_err(|e| Error::Numeric(format!("poisson rate failure: {e}")))?
                    .sample(rng);
                for _ in 0..n as u64 {
                    inc += f.sample_jump(jump_cutoff, rng)?;
                }
            }
            Ok(inc)
        }
    }
}

/// Density f(s; t) of the inverse subordinator E(t).
///
/// Stable alpha = 1/2 uses the half-Gaussian closed form; general stable uses
/// the scaling identity f(s, t) = (t/alpha) s^{-1-1/alpha} g(t s^{-1/alpha});
/// other kinds invert the Laplace transform numerically.
pub fn inverse_density(f: &BernsteinFunction, s: f64, t: f64) -> Result<f64> {
    if !(s > 0.0 && t > 0.0) {
        return Err(Error::domain(format!(
            "inverse_density requires s > 0 and t > 0, got ({s}, {t})"
        )));
    }
    match f {
        BernsteinFunction::Stable { alpha } if (*alpha - 0.5).abs() < 1e-14 => {
            Ok((-s * s / (4.0 * t)).exp() / (std::f64::consts::PI * t).sqrt())
        }
        BernsteinFunction::Stable { alpha } => {
            let x = t * s.powf(-1.0 / alpha);
            Ok(t / alpha * s.powf(-1.0 - 1.0 / alpha) * stable_density(*alpha, x)?)
        }
        _ => inverse_density_via_laplace(f, s, t),
    }
}

/// Numerical-inversion route for f(s; t), available for every kind; this is
/// the independent cross-check of the closed forms above.
pub fn inverse_density_via_laplace(f: &BernsteinFunction, s: f64, t: f64) -> Result<f64> {
    if !(s > 0.0 && t > 0.0) {
        return Err(Error::domain(format!(
            "inverse_density requires s > 0 and t > 0, got ({s}, {t})"
        )));
    }
    // The inversion runs on the Re(lambda) > 0 line, where Re Phi >= 0 keeps
    // |e^{-s Phi}| <= 1 for every s. (A Talbot contour is unusable here: its
    // left arc drives Re Phi towards a negative constant, so the transform
    // grows like e^{+s} once s exceeds the t-scale.)
    let value = if f.phi_complex(Complex64::new(1.0, 0.0)).is_some() {
        let transform = |lam: Complex64| {
            let phi = f.phi_complex(lam).expect("complex evaluator checked");
            phi / lam * (-s * phi).exp()
        };
        euler_bromwich(transform, t, 13)?
    } else {
        // real-axis-only evaluator: Gaver-Stehfest
        let transform = |lam: f64| match f.phi(lam) {
            Ok(phi) => phi / lam * (-s * phi).exp(),
            Err(_) => f64::NAN,
        };
        gaver_stehfest(transform, t, 14)?
    };
    // Inversion noise can produce small negatives in the far tail.
    Ok(value.max(0.0))
}

/// Negative moment E[E(t)^{-gamma}] for gamma in (0, 1); finite by the
/// boundedness of f(s; t) near s = 0. Orders gamma >= 1 are rejected: those
/// moments are infinite.
pub fn neg_moment(f: &BernsteinFunction, gamma: f64, t: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(format!(
            "negative moment requires gamma in (0, 1); E[E^-gamma] is infinite for gamma >= 1 (got {gamma})"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::domain("negative moment requires t > 0"));
    }
    let r = quad_semi_inf_singular(
        |s| {
            if s == 0.0 {
                return 0.0;
            }
            s.powf(-gamma) * inverse_density(f, s, t).unwrap_or(0.0)
        },
        gamma,
        Tail::Rational,
        1e-9,
    )?;
    Ok(r.value)
}

/// Total mass of f(.; t); equals 1 for a proper density.
pub fn inverse_density_mass(f: &BernsteinFunction, t: f64) -> Result<f64> {
    let r = quad_semi_inf(
        |s| {
            if s <= 0.0 {
                0.0
            } else {
                inverse_density(f, s, t).unwrap_or(0.0)
            }
        },
        0.0,
        Tail::Rational,
        1e-9,
    )?;
    Ok(r.value)
}
