//! Fuchsian systems `F′ = −(A₀/z + A₁/(z−1)) F` on `ℙ¹∖{0, 1, ∞}`:
//! numerical monodromy, eigenvalue predictions from the residues, the
//! hypergeometric companion system and λ-rescaling.
//!
//! A loop's monodromy is the transport `U` with `F(end) = U·F(start)`, so a
//! counterclockwise turn around a pole with residue `A` has eigenvalues
//! `exp(−2πi·μ)`, `μ ∈ eig(A)`.

mod integrator;
mod path;

use std::f64::consts::PI;

pub use integrator::{integrate, integrate_guarded, LinearSystem, Transport, DEFAULT_GUARD};
pub use path::{LoopKind, LoopSpec, Path, Segment, INFINITY_RADIUS};

use crate::error::{Error, Result};
use crate::numkit::{eigenvalues, multiset_distance, Matrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianSystem {
    a0: Matrix<C64>,
    a1: Matrix<C64>,
}

impl FuchsianSystem {
    pub fn new(a0: Matrix<C64>, a1: Matrix<C64>) -> Result<Self> {
        if !a0.is_square() || a0.rows() != a1.rows() || a0.cols() != a1.cols() {
            return Err(Error::DimensionMismatch("A0 and A1 must be square of the same size".into()));
        }
        Ok(Self { a0, a1 })
    }

    pub fn scalar(a0: C64, a1: C64) -> Self {
        Self { a0: Matrix::scalar(a0), a1: Matrix::scalar(a1) }
    }

    pub fn rank(&self) -> usize {
        self.a0.rows()
    }

    pub fn a0(&self) -> &Matrix<C64> {
        &self.a0
    }

    pub fn a1(&self) -> &Matrix<C64> {
        &self.a1
    }

    /// `A_∞ = −A₀ − A₁`.
    pub fn a_inf(&self) -> Matrix<C64> {
        -&(&self.a0 + &self.a1)
    }

    pub fn residue(&self, kind: LoopKind) -> Matrix<C64> {
        match kind {
            LoopKind::Around0 => self.a0.clone(),
            LoopKind::Around1 => self.a1.clone(),
            LoopKind::AroundInfinity => self.a_inf(),
        }
    }
}

impl LinearSystem for FuchsianSystem {
    fn rank(&self) -> usize {
        self.a0.rows()
    }

    fn coefficient(&self, z: C64) -> Matrix<C64> {
        let one = C64::new(1.0, 0.0);
        -&(&self.a0.scale(&(one / z)) + &self.a1.scale(&(one / (z - one))))
    }

    fn residue_traces(&self) -> (C64, C64) {
        (self.a0.trace(), self.a1.trace())
    }
}

/// The system `λF′ + (A₀/z + A₁/(z−1))F = 0` for `λ ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSystem {
    system: FuchsianSystem,
    lambda: C64,
}

impl LambdaSystem {
    pub fn new(system: FuchsianSystem, lambda: C64) -> Result<Self> {
        if lambda.norm() == 0.0 {
            return Err(Error::ZeroLambda);
        }
        Ok(Self { system, lambda })
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }
}

impl LinearSystem for LambdaSystem {
    fn rank(&self) -> usize {
        self.system.rank()
    }

    fn coefficient(&self, z: C64) -> Matrix<C64> {
        self.system.coefficient(z).scale(&(C64::new(1.0, 0.0) / self.lambda))
    }

    fn residue_traces(&self) -> (C64, C64) {
        let (t0, t1) = self.system.residue_traces();
        (t0 / self.lambda, t1 / self.lambda)
    }
}

/// The ordinary system with residues `A_i/λ`.
pub fn lambda_rescale(sys: &FuchsianSystem, lambda: C64) -> Result<FuchsianSystem> {
    if lambda.norm() == 0.0 {
        return Err(Error::ZeroLambda);
    }
    let inv = C64::new(1.0, 0.0) / lambda;
    Ok(FuchsianSystem { a0: sys.a0.scale(&inv), a1: sys.a1.scale(&inv) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyOptions {
    pub base: C64,
    pub radius: f64,
    pub tol: f64,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        Self { base: C64::new(-0.25, 0.0), radius: 0.25, tol: 1e-9 }
    }
}

/// Loop product checked by [`MonodromyResult::residual_identity_error`].
pub const PRODUCT_ORDER: &str = "C0*C1*Cinf";

#[derive(Debug, Clone)]
pub struct MonodromyResult {
    pub c0: Matrix<C64>,
    pub c1: Matrix<C64>,
    pub cinf: Matrix<C64>,
    /// `‖C₀ C₁ C_∞ − I‖` in the Frobenius norm.
    pub residual_identity_error: f64,
    pub integration_tolerance: f64,
    pub product_order: &'static str,
    /// Liouville errors of the three loops.
    pub liouville_errors: [f64; 3],
}

impl MonodromyResult {
    pub fn matrix(&self, kind: LoopKind) -> &Matrix<C64> {
        match kind {
            LoopKind::Around0 => &self.c0,
            LoopKind::Around1 => &self.c1,
            LoopKind::AroundInfinity => &self.cinf,
        }
    }
}

/// The three loop monodromies, each integrated independently (in parallel).
pub fn monodromy<S: LinearSystem + ?Sized>(sys: &S, opts: &MonodromyOptions) -> Result<MonodromyResult> {
    if opts.base.norm() == 0.0 || (opts.base - C64::new(1.0, 0.0)).norm() == 0.0 {
        return Err(Error::PoleTooClose { pole: if opts.base.norm() == 0.0 { "0" } else { "1" }.into(), distance: 0.0 });
    }
    let guard = opts.radius / 2.0;
    let run = |kind: LoopKind| -> Result<Transport> {
        let path = LoopSpec { basepoint: opts.base, kind, radius: opts.radius }.path()?;
        integrate_guarded(sys, &path, opts.tol, guard)
    };
    let (t0, (t1, tinf)) = rayon::join(
        || run(LoopKind::Around0),
        || rayon::join(|| run(LoopKind::Around1), || run(LoopKind::AroundInfinity)),
    );
    let (t0, t1, tinf) = (t0?, t1?, tinf?);
    let product = &(&t0.matrix * &t1.matrix) * &tinf.matrix;
    let residual_identity_error = product.distance(&Matrix::identity(sys.rank()));
    Ok(MonodromyResult {
        c0: t0.matrix,
        c1: t1.matrix,
        cinf: tinf.matrix,
        residual_identity_error,
        integration_tolerance: opts.tol,
        product_order: PRODUCT_ORDER,
        liouville_errors: [t0.liouville_error, t1.liouville_error, tinf.liouville_error],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Passed,
    Failed,
    SkippedResonant,
}

#[derive(Debug, Clone)]
pub struct PointCheck {
    pub point: LoopKind,
    pub residue_eigenvalues: Vec<C64>,
    pub predicted: Vec<C64>,
    pub computed: Vec<C64>,
    pub distance: f64,
    pub status: CheckStatus,
}

#[derive(Debug, Clone)]
pub struct EigenvalueReport {
    pub tolerance: f64,
    pub points: Vec<PointCheck>,
}

impl EigenvalueReport {
    /// No point failed (resonant points are skipped, not failed).
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| p.status != CheckStatus::Failed)
    }

    pub fn resonant(&self) -> bool {
        self.points.iter().any(|p| p.status == CheckStatus::SkippedResonant)
    }

    /// `ResonantSystem` if any point was skipped.
    pub fn require_non_resonant(&self) -> Result<()> {
        match self.points.iter().find(|p| p.status == CheckStatus::SkippedResonant) {
            Some(p) => Err(Error::ResonantSystem(format!("{:?}", p.point))),
            None => Ok(()),
        }
    }
}

/// Two eigenvalues differing by a nonzero integer (within `1e-8`).
pub fn is_resonant(eigs: &[C64]) -> bool {
    eigs.iter().enumerate().any(|(i, a)| {
        eigs[i + 1..].iter().any(|b| {
            let d = a - b;
            d.norm() > 0.5 && (d - C64::new(d.re.round(), 0.0)).norm() < 1e-8
        })
    })
}

/// Compares `eig(C_i)` with `{exp(−2πi·μ) : μ ∈ eig(A_i)}` at 0, 1, ∞.
pub fn eigenvalue_check(sys: &FuchsianSystem, result: &MonodromyResult, tol: f64) -> Result<EigenvalueReport> {
    let mut points = Vec::new();
    for kind in [LoopKind::Around0, LoopKind::Around1, LoopKind::AroundInfinity] {
        let mu = eigenvalues(&sys.residue(kind), 1e-13)?;
        let predicted: Vec<C64> = mu.iter().map(|m| (C64::new(0.0, -2.0 * PI) * m).exp()).collect();
        let computed = eigenvalues(result.matrix(kind), 1e-13)?;
        let distance = multiset_distance(&predicted, &computed);
        let status = if is_resonant(&mu) {
            CheckStatus::SkippedResonant
        } else if distance <= tol {
            CheckStatus::Passed
        } else {
            CheckStatus::Failed
        };
        points.push(PointCheck { point: kind, residue_eigenvalues: mu, predicted, computed, distance, status });
    }
    Ok(EigenvalueReport { tolerance: tol, points })
}

/// Parameters of `z(1−z)f″ + (c − (a+b+1)z)f′ − ab f = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResonanceFlags {
    pub c_integer: bool,
    pub c_minus_a_minus_b_integer: bool,
    pub a_minus_b_integer: bool,
}

impl ResonanceFlags {
    pub fn any(&self) -> bool {
        self.c_integer || self.c_minus_a_minus_b_integer || self.a_minus_b_integer
    }
}

fn near_integer(z: C64) -> bool {
    (z - C64::new(z.re.round(), 0.0)).norm() < 1e-8
}

impl HypergeometricParams {
    pub fn resonance(&self) -> ResonanceFlags {
        ResonanceFlags {
            c_integer: near_integer(self.c),
            c_minus_a_minus_b_integer: near_integer(self.c - self.a - self.b),
            a_minus_b_integer: near_integer(self.a - self.b),
        }
    }

    /// Monodromy eigenvalues at 0 and at 1 implied by the local exponents.
    pub fn predicted_eigenvalues(&self) -> ([C64; 2], [C64; 2]) {
        let one = C64::new(1.0, 0.0);
        let turn = |x: C64| (C64::new(0.0, 2.0 * PI) * x).exp();
        ([one, turn(-self.c)], [one, turn(self.c - self.a - self.b)])
    }
}

/// Companion system for `F = (f, z f′)` via `θ = z d/dz`:
/// `A₀ = [[0, −1], [0, c−1]]`, `A₁ = [[0, 0], [ab, a+b+1−c]]`.
pub fn hypergeometric_to_system(p: &HypergeometricParams) -> FuchsianSystem {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let a0 = Matrix::from_rows(vec![vec![z, -one], vec![z, p.c - one]]).expect("2×2");
    let a1 = Matrix::from_rows(vec![vec![z, z], vec![p.a * p.b, p.a + p.b + one - p.c]]).expect("2×2");
    FuchsianSystem { a0, a1 }
}

/// Largest relative residual of the hypergeometric equation for the first
/// component of a solution of `sys`, sampled along the segment `from → to`
/// with five-point finite differences along the segment direction.
pub fn hypergeometric_residual(p: &HypergeometricParams, sys: &FuchsianSystem, from: C64, to: C64, samples: usize, tol: f64) -> Result<f64> {
    let f0 = [C64::new(1.0, 0.0), C64::new(0.5, 0.25)];
    let dir = (to - from) / (to - from).norm();
    let h = 1e-2 * (to - from).norm();
    let value_at = |z: C64| -> Result<C64> {
        if (z - from).norm() == 0.0 {
            return Ok(f0[0]);
        }
        let u = integrate(sys, &Path::polyline(&[from, z]), tol)?.matrix;
        Ok(*u.get(0, 0) * f0[0] + *u.get(0, 1) * f0[1])
    };
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let z = from + (to - from) * ((k as f64 + 1.0) / (samples as f64 + 1.0));
        let f: Vec<C64> = (-2..=2).map(|j| value_at(z + dir * (h * j as f64))).collect::<Result<_>>()?;
        let dh = dir * h;
        let d1 = (-f[4] + f[3] * 8.0 - f[1] * 8.0 + f[0]) / (dh * 12.0);
        let d2 = (-f[4] + f[3] * 16.0 - f[2] * 30.0 + f[1] * 16.0 - f[0]) / (dh * dh * 12.0);
        let one = C64::new(1.0, 0.0);
        let terms = [z * (one - z) * d2, (p.c - (p.a + p.b + one) * z) * d1, -(p.a * p.b) * f[2]];
        let residual = (terms[0] + terms[1] + terms[2]).norm();
        let scale: f64 = terms.iter().map(|t| t.norm()).sum::<f64>().max(f[2].norm()).max(f64::MIN_POSITIVE);
        worst = worst.max(residual / scale);
    }
    Ok(worst)
}
