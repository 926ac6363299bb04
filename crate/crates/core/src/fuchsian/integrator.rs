//! Adaptive Dormand–Prince 5(4) for `dΦ/dt = M(z(t)) z′(t) Φ` along a path.

use super::path::{Path, Segment};
use crate::error::{Error, Result};
use crate::numkit::{Matrix, C64};

/// A linear system `F′ = M(z) F` with simple poles at 0 and 1,
/// `M(z) = −(R₀/z + R₁/(z−1))`.
pub trait LinearSystem: Sync {
    fn rank(&self) -> usize;
    fn coefficient(&self, z: C64) -> Matrix<C64>;
    /// `(tr R₀, tr R₁)`.
    fn residue_traces(&self) -> (C64, C64);
}

/// Transport along a path with its self-checks.
#[derive(Debug, Clone)]
pub struct Transport {
    /// `U` with `F(end) = U · F(start)`.
    pub matrix: Matrix<C64>,
    /// `|det U − exp(∫ tr M dz)|`.
    pub liouville_error: f64,
    pub steps: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Smallest admissible parameter step.
const MIN_STEP: f64 = 1e-14;

fn combine(y: &Matrix<C64>, h: f64, ks: &[Matrix<C64>], weights: &[f64]) -> Matrix<C64> {
    let mut out = y.clone();
    for (k, &w) in ks.iter().zip(weights) {
        if w != 0.0 {
            out = &out + &k.scale(&C64::new(h * w, 0.0));
        }
    }
    out
}

fn integrate_segment<S: LinearSystem + ?Sized>(sys: &S, seg: &Segment, tol: f64, y0: Matrix<C64>, steps: &mut usize) -> Result<Matrix<C64>> {
    let rhs = |t: f64, y: &Matrix<C64>| -> Matrix<C64> {
        let z = seg.point(t);
        &sys.coefficient(z).scale(&seg.velocity(t)) * y
    };
    let mut t = 0.0;
    let mut y = y0;
    let mut h: f64 = 0.05;
    let mut k1 = rhs(t, &y);
    while t < 1.0 {
        h = h.min(1.0 - t);
        let mut ks = vec![k1.clone()];
        for s in 1..7 {
            let ys = combine(&y, h, &ks, &A[s][..s]);
            ks.push(rhs(t + C[s] * h, &ys));
        }
        let y5 = combine(&y, h, &ks, &B5);
        let y4 = combine(&y, h, &ks, &B4);
        let scale = 1.0 + y.norm().max(y5.norm());
        let err = y5.distance(&y4) / (tol * scale);
        if err <= 1.0 {
            t += h;
            y = y5;
            // first-same-as-last: the seventh stage is the derivative at the new point
            k1 = ks.pop().expect("seven stages");
            *steps += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < MIN_STEP && t < 1.0 {
            return Err(Error::StepUnderflow(t));
        }
    }
    Ok(y)
}

/// Pole-distance guard applied by [`integrate`].
pub const DEFAULT_GUARD: f64 = 1e-3;

/// Transport along `path` with local error per unit parameter ≤ `tol`.
pub fn integrate<S: LinearSystem + ?Sized>(sys: &S, path: &Path, tol: f64) -> Result<Transport> {
    integrate_guarded(sys, path, tol, DEFAULT_GUARD)
}

pub fn integrate_guarded<S: LinearSystem + ?Sized>(sys: &S, path: &Path, tol: f64, guard: f64) -> Result<Transport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::DimensionMismatch("tolerance must be positive".into()));
    }
    for (name, pole) in [("0", C64::new(0.0, 0.0)), ("1", C64::new(1.0, 0.0))] {
        let distance = path.distance_to(pole);
        if distance < guard {
            return Err(Error::PoleTooClose { pole: name.into(), distance });
        }
    }
    let mut y = Matrix::identity(sys.rank());
    let mut steps = 0;
    for seg in path.segments() {
        y = integrate_segment(sys, seg, tol, y, &mut steps)?;
    }
    let (t0, t1) = sys.residue_traces();
    let trace_integral = -(t0 * path.log_integral(C64::new(0.0, 0.0)) + t1 * path.log_integral(C64::new(1.0, 0.0)));
    let liouville_error = (y.determinant()? - trace_integral.exp()).norm();
    Ok(Transport { matrix: y, liouville_error, steps })
}
