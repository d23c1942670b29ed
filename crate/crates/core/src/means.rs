//! Iterative means and the complete elliptic integrals built from them.
//!
//! Every routine is generic over [`Real`], so the same code serves binary64
//! (`R64`) and the arbitrary-precision `R` domain. The `floatpos` argument is
//! the number of decimals the caller intends to display; iteration stops once
//! the two sequences agree to `10^-(floatpos + 5)` relative, or to a few units
//! of roundoff when the working precision cannot resolve that.

use crate::arith::Real;

/// Hard cap on iterations; quadratic convergence never gets near it.
pub const MAX_ITERATIONS: u32 = 1000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeansError {
    #[error("{0} requires non-negative arguments")]
    NegativeArgument(&'static str),
    #[error("{0} requires positive arguments")]
    NonPositiveArgument(&'static str),
    #[error("negative radicand in the modified AGM iteration")]
    NegativeRadicand,
    #[error("{routine} did not converge within {iterations} iterations")]
    NonConvergence {
        routine: &'static str,
        iterations: u32,
    },
    #[error("elliptic modulus must satisfy 0 <= k < 1")]
    ModulusOutOfRange,
    #[error("the complete elliptic integral diverges at k = 1")]
    DivergentIntegral,
    #[error("ellipse axes must be positive")]
    NonPositiveAxis,
    #[error("pendulum amplitude must satisfy 0 <= theta0 < pi")]
    AmplitudeOutOfRange,
    #[error("pendulum length and gravity must be positive")]
    NonPositiveParameter,
}

/// Snapshot of an iteration: `x_n`, `y_n`, `z_n` (MAGM only) and `n`.
#[derive(Debug, Clone)]
pub struct MeanIterationState<R> {
    pub x: R,
    pub y: R,
    pub z: R,
    pub n: u32,
}

/// Limit together with the number of steps taken.
#[derive(Debug, Clone)]
pub struct Converged<R> {
    pub value: R,
    pub iterations: u32,
}

/// Which mean the elliptic integral of the first kind is expressed through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KMethod {
    Agm,
    Ghm,
}

fn converged<R: Real>(x: &R, y: &R, floatpos: u32) -> bool {
    let one = x.int_like(1);
    let scale = x.abs_val().max_val(&one);
    let tol = x
        .ten_pow_neg_like(floatpos + 5)
        .max_val(&(x.epsilon_like() * x.int_like(4)));
    (x.clone() - y.clone()).abs_val() <= tol * scale
}

fn iterate<R: Real>(
    routine: &'static str,
    mut state: MeanIterationState<R>,
    floatpos: u32,
    mut step: impl FnMut(&MeanIterationState<R>) -> Result<MeanIterationState<R>, MeansError>,
) -> Result<Converged<R>, MeansError> {
    while state.n < MAX_ITERATIONS {
        if converged(&state.x, &state.y, floatpos) {
            return Ok(Converged {
                value: state.x,
                iterations: state.n,
            });
        }
        state = step(&state)?;
    }
    Err(MeansError::NonConvergence {
        routine,
        iterations: MAX_ITERATIONS,
    })
}

pub fn agm_with_stats<R: Real>(x: &R, y: &R, floatpos: u32) -> Result<Converged<R>, MeansError> {
    if x.is_negative_val() || y.is_negative_val() {
        return Err(MeansError::NegativeArgument("AGM"));
    }
    let zero = x.int_like(0);
    if *x == zero || *y == zero {
        return Ok(Converged {
            value: zero,
            iterations: 0,
        });
    }
    let two = x.int_like(2);
    let start = MeanIterationState {
        x: x.clone(),
        y: y.clone(),
        z: zero,
        n: 0,
    };
    iterate("AGM", start, floatpos, |s| {
        let g = (s.x.clone() * s.y.clone())
            .sqrt_checked()
            .ok_or(MeansError::NegativeRadicand)?;
        Ok(MeanIterationState {
            x: (s.x.clone() + s.y.clone()) / two.clone(),
            y: g,
            z: s.z.clone(),
            n: s.n + 1,
        })
    })
}

/// Arithmetic-geometric mean.
pub fn agm<R: Real>(x: &R, y: &R, floatpos: u32) -> Result<R, MeansError> {
    agm_with_stats(x, y, floatpos).map(|c| c.value)
}

pub fn ghm_with_stats<R: Real>(x: &R, y: &R, floatpos: u32) -> Result<Converged<R>, MeansError> {
    let zero = x.int_like(0);
    if *x <= zero || *y <= zero {
        return Err(MeansError::NonPositiveArgument("GHM"));
    }
    let two = x.int_like(2);
    let start = MeanIterationState {
        x: x.clone(),
        y: y.clone(),
        z: zero,
        n: 0,
    };
    iterate("GHM", start, floatpos, |s| {
        let prod = s.x.clone() * s.y.clone();
        let g = prod.sqrt_checked().ok_or(MeansError::NegativeRadicand)?;
        let h = two.clone() * prod / (s.x.clone() + s.y.clone());
        Ok(MeanIterationState {
            x: g,
            y: h,
            z: s.z.clone(),
            n: s.n + 1,
        })
    })
}

/// Geometric-harmonic mean; satisfies `agm(x, y) · ghm(x, y) = x · y`.
pub fn ghm<R: Real>(x: &R, y: &R, floatpos: u32) -> Result<R, MeansError> {
    ghm_with_stats(x, y, floatpos).map(|c| c.value)
}

pub fn magm_with_stats<R: Real>(x: &R, y: &R, floatpos: u32) -> Result<Converged<R>, MeansError> {
    if x.is_negative_val() || y.is_negative_val() {
        return Err(MeansError::NegativeArgument("MAGM"));
    }
    let zero = x.int_like(0);
    let two = x.int_like(2);
    let start = MeanIterationState {
        x: x.clone(),
        y: y.clone(),
        z: zero.clone(),
        n: 0,
    };
    iterate("MAGM", start, floatpos, |s| {
        let dx = s.x.clone() - s.z.clone();
        let dy = s.y.clone() - s.z.clone();
        let mut radicand = dx.clone() * dy.clone();
        if radicand < zero {
            // Tolerate cancellation noise at the current magnitude only.
            let scale = dx.abs_val().max_val(&dy.abs_val());
            let noise = s.x.epsilon_like() * s.x.int_like(16) * scale.clone() * scale;
            if -radicand.clone() > noise {
                return Err(MeansError::NegativeRadicand);
            }
            radicand = zero.clone();
        }
        let root = radicand
            .sqrt_checked()
            .ok_or(MeansError::NegativeRadicand)?;
        Ok(MeanIterationState {
            x: (s.x.clone() + s.y.clone()) / two.clone(),
            y: s.z.clone() + root.clone(),
            z: s.z.clone() - root,
            n: s.n + 1,
        })
    })
}

/// Modified arithmetic-geometric mean (three-sequence iteration).
pub fn magm<R: Real>(x: &R, y: &R, floatpos: u32) -> Result<R, MeansError> {
    magm_with_stats(x, y, floatpos).map(|c| c.value)
}

/// `sqrt(1 - k²)` after validating `0 <= k < 1`.
fn complementary<R: Real>(k: &R) -> Result<R, MeansError> {
    let one = k.int_like(1);
    if k.is_negative_val() || *k > one {
        return Err(MeansError::ModulusOutOfRange);
    }
    if *k == one {
        return Err(MeansError::DivergentIntegral);
    }
    (one - k.clone() * k.clone())
        .sqrt_checked()
        .ok_or(MeansError::ModulusOutOfRange)
}

/// Complete elliptic integral of the first kind `K(k)`.
pub fn elliptic_k<R: Real>(k: &R, method: KMethod, floatpos: u32) -> Result<R, MeansError> {
    let kc = complementary(k)?;
    let one = k.int_like(1);
    let two = k.int_like(2);
    let pi = k.pi_like();
    match method {
        KMethod::Agm => Ok(pi / (two * agm(&one, &kc, floatpos)?)),
        KMethod::Ghm => Ok(pi / two * ghm(&one, &(one.clone() / kc), floatpos)?),
    }
}

/// Complete elliptic integral of the second kind, `E(k) = K(k) · MAGM(1, 1 - k²)`.
pub fn elliptic_e<R: Real>(k: &R, floatpos: u32) -> Result<R, MeansError> {
    let big_k = elliptic_k(k, KMethod::Agm, floatpos).map_err(|e| match e {
        MeansError::DivergentIntegral => MeansError::ModulusOutOfRange,
        other => other,
    })?;
    let one = k.int_like(1);
    Ok(big_k * magm(&one, &(one.clone() - k.clone() * k.clone()), floatpos)?)
}

/// Circumference `2π · MAGM(a², b²) / AGM(a, b)` of an ellipse with semi-axes `a`, `b`.
pub fn ellipse_circumference<R: Real>(a: &R, b: &R, floatpos: u32) -> Result<R, MeansError> {
    let zero = a.int_like(0);
    if *a <= zero || *b <= zero {
        return Err(MeansError::NonPositiveAxis);
    }
    let two_pi = a.int_like(2) * a.pi_like();
    let m = magm(&(a.clone() * a.clone()), &(b.clone() * b.clone()), floatpos)?;
    Ok(two_pi * m / agm(a, b, floatpos)?)
}

/// Standard gravity in m/s².
pub const STANDARD_GRAVITY: f64 = 9.80665;

/// Period of a simple pendulum of length `length` and amplitude `theta0`
/// (radians): `2π / AGM(1, cos(θ₀/2)) · sqrt(L/g)`.
pub fn pendulum_period<R: Real>(
    length: &R,
    theta0: &R,
    gravity: &R,
    floatpos: u32,
) -> Result<R, MeansError> {
    let zero = length.int_like(0);
    if *length <= zero || *gravity <= zero {
        return Err(MeansError::NonPositiveParameter);
    }
    let pi = length.pi_like();
    if theta0.is_negative_val() || *theta0 >= pi {
        return Err(MeansError::AmplitudeOutOfRange);
    }
    let half = (theta0.clone() / length.int_like(2)).cos_val();
    let root = (length.clone() / gravity.clone())
        .sqrt_checked()
        .ok_or(MeansError::NonPositiveParameter)?;
    let one = length.int_like(1);
    Ok(length.int_like(2) * pi / agm(&one, &half, floatpos)? * root)
}

/// `π = AGM(1, √2)² / (MAGM(1, 2) − 1)`, evaluated at the precision of `like`.
pub fn pi_via_means<R: Real>(like: &R, floatpos: u32) -> Result<R, MeansError> {
    let one = like.int_like(1);
    let two = like.int_like(2);
    let root2 = two.sqrt_checked().ok_or(MeansError::NegativeRadicand)?;
    let a = agm(&one, &root2, floatpos)?;
    Ok(a.clone() * a / (magm(&one, &two, floatpos)? - one))
}
