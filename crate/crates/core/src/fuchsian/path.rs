use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numkit::C64;

/// A piece of an integration path, parametrized by `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: C64, to: C64 },
    /// `center + radius·e^{i(start + t·sweep)}`; positive sweep is counterclockwise.
    Arc { center: C64, radius: f64, start: f64, sweep: f64 },
}

impl Segment {
    pub fn point(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc { center, radius, start, sweep } => center + C64::from_polar(radius, start + t * sweep),
        }
    }

    /// `dz/dt`.
    pub fn velocity(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start, sweep, .. } => C64::new(0.0, sweep) * C64::from_polar(radius, start + t * sweep),
        }
    }

    pub fn start(&self) -> C64 {
        self.point(0.0)
    }

    pub fn end(&self) -> C64 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, start, sweep } => Segment::Arc { center, radius, start: start + sweep, sweep: -sweep },
        }
    }

    /// Smallest distance from the segment to `p`.
    pub fn distance_to(&self, p: C64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                let t = if len2 == 0.0 { 0.0 } else { (((p - from) * d.conj()).re / len2).clamp(0.0, 1.0) };
                (from + d * t - p).norm()
            }
            Segment::Arc { center, radius, start, sweep } => {
                let q = p - center;
                let mut best = (self.start() - p).norm().min((self.end() - p).norm());
                if q.norm() > 0.0 {
                    let target = q.arg();
                    let (lo, hi) = if sweep >= 0.0 { (start, start + sweep) } else { (start + sweep, start) };
                    let k = ((lo - target) / (2.0 * PI)).ceil();
                    let candidate = target + k * 2.0 * PI;
                    if candidate <= hi {
                        best = best.min((q.norm() - radius).abs());
                    }
                } else {
                    best = radius;
                }
                best
            }
        }
    }
}

/// A piecewise path made of consecutive segments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Path {
    segments: Vec<Segment>,
}

impl Path {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for (i, w) in segments.windows(2).enumerate() {
            if (w[0].end() - w[1].start()).norm() > 1e-12 * (1.0 + w[0].end().norm()) {
                return Err(Error::BrokenPath(i + 1));
            }
        }
        Ok(Self { segments })
    }

    pub fn polyline(points: &[C64]) -> Self {
        Self { segments: points.windows(2).map(|w| Segment::Line { from: w[0], to: w[1] }).collect() }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> Option<C64> {
        self.segments.first().map(Segment::start)
    }

    pub fn end(&self) -> Option<C64> {
        self.segments.last().map(Segment::end)
    }

    pub fn reversed(&self) -> Self {
        Self { segments: self.segments.iter().rev().map(Segment::reversed).collect() }
    }

    pub fn then(&self, other: &Path) -> Result<Self> {
        Self::new(self.segments.iter().chain(&other.segments).copied().collect())
    }

    pub fn distance_to(&self, p: C64) -> f64 {
        self.segments.iter().map(|s| s.distance_to(p)).fold(f64::INFINITY, f64::min)
    }

    /// `∫ dz / (z − p)` by summing principal logarithms over short chords.
    pub fn log_integral(&self, p: C64) -> C64 {
        let mut total = C64::new(0.0, 0.0);
        for s in &self.segments {
            let dist = s.distance_to(p).max(1e-300);
            let pieces = ((4.0 * s.length() / dist).ceil() as usize).clamp(1, 1 << 20);
            let mut prev = s.start() - p;
            for k in 1..=pieces {
                let cur = s.point(k as f64 / pieces as f64) - p;
                total += (cur / prev).ln();
                prev = cur;
            }
        }
        total
    }
}

/// Which puncture of `ℙ¹∖{0, 1, ∞}` a loop goes around.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopKind {
    Around0,
    Around1,
    AroundInfinity,
}

/// Radius of the loop around `∞`.
pub const INFINITY_RADIUS: f64 = 10.0;

/// A based loop around one puncture.
///
/// * around 0: radial segment to `|z| = radius`, one counterclockwise turn, back;
/// * around 1: through the lower half-plane to `1 − radius`, one
///   counterclockwise turn around 1, back the same way;
/// * around ∞: radial segment to `|z| = 10`, one clockwise turn (positive
///   as seen from ∞), back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopSpec {
    pub basepoint: C64,
    pub kind: LoopKind,
    pub radius: f64,
}

impl LoopSpec {
    pub fn path(&self) -> Result<Path> {
        let b = self.basepoint;
        let r = self.radius;
        if r.is_nan() || r <= 0.0 || b.norm() == 0.0 {
            return Err(Error::DimensionMismatch("loop needs a positive radius and a nonzero basepoint".into()));
        }
        let circle = |center: C64, radius: f64, start: f64, sweep: f64| Segment::Arc { center, radius, start, sweep };
        let around = |center: C64, radius: f64, entry: C64, sweep: f64| -> Result<Path> {
            let spoke = Path::polyline(&[b, entry]);
            let turn = Path::new(vec![circle(center, radius, (entry - center).arg(), sweep)])?;
            spoke.then(&turn)?.then(&spoke.reversed())
        };
        match self.kind {
            LoopKind::Around0 => around(C64::new(0.0, 0.0), r, b * (r / b.norm()), 2.0 * PI),
            LoopKind::AroundInfinity => around(C64::new(0.0, 0.0), INFINITY_RADIUS, b * (INFINITY_RADIUS / b.norm()), -2.0 * PI),
            LoopKind::Around1 => {
                let entry = C64::new(1.0 - r, 0.0);
                let waypoint = C64::new((b.re + entry.re) / 2.0, -0.5);
                let spoke = Path::polyline(&[b, waypoint, entry]);
                let turn = Path::new(vec![circle(C64::new(1.0, 0.0), r, PI, 2.0 * PI)])?;
                spoke.then(&turn)?.then(&spoke.reversed())
            }
        }
    }
}
