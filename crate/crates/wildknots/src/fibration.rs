//! Circle-valued fibration of the trivial-model complement.
//!
//! The trivial model has the unit (d-2)-sphere in the hyperplane `x_d = 0`
//! as thread, and generator spheres orthogonal to the unit sphere with
//! centers in that hyperplane. The complement of the thread is fibered by
//! the pencil of spheres through it: the page of a point is
//! `theta = atan2(2 x_d, |x|^2 - 1)`. Because the generator inversions fix
//! their spheres pointwise, reducing a point to the fundamental domain and
//! evaluating the pencil angle there extends the fibration equivariantly to
//! every stage, matching the piecewise definition on overlaps.

use std::f64::consts::{PI, TAU};
use std::fmt;

use thiserror::Error;

use crate::algebra::AbelianDescriptor;
use crate::conformal::{
    invert_ball, reduce_to_domain, Ball, ExtPoint, GeomError, Sphere, Word,
};
use crate::necklace::{Necklace, NecklaceError, ThreadSample};
use crate::vecmath as vm;

#[derive(Debug, Error)]
pub enum FibrationError {
    #[error("point lies on the thread sphere; page angle undefined")]
    OnThread,
    #[error("point within numerical reach of the limit set (address prefix {prefix})")]
    LimitProximity { prefix: Word },
    #[error("ambient dimension must be at least 3, got {0}")]
    BadDimension(usize),
    #[error("generator {index} is not orthogonal to the unit thread sphere (defect {defect:e})")]
    NotOrthogonal { index: usize, defect: f64 },
    #[error("generator {index} center leaves the thread hyperplane (offset {offset:e})")]
    OffHyperplane { index: usize, offset: f64 },
    #[error("generator spheres {0} and {1} are not disjoint")]
    GeneratorsOverlap(usize, usize),
    #[error("the geometric thread realization needs ambient dimension 3 and k >= 3")]
    NoGeometricThread,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl From<FibrationError> for NecklaceError {
    fn from(e: FibrationError) -> Self {
        NecklaceError::ConstructionFault(e.to_string())
    }
}

/// A point of the page circle, normalized to `[0, 2*pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberValue(f64);

impl FiberValue {
    pub fn new(angle: f64) -> Self {
        FiberValue(angle.rem_euclid(TAU))
    }

    pub fn angle(&self) -> f64 {
        self.0
    }
}

/// Signed circle difference `to - from` in `(-pi, pi]`.
pub fn signed_delta(from: FiberValue, to: FiberValue) -> f64 {
    let d = (to.0 - from.0).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// The trivial (Fuchsian) model: unit thread sphere plus `k` generator
/// spheres orthogonal to the unit sphere, centers in the thread hyperplane.
/// With orthogonal generators the inversions map the thread onto itself, so
/// the limit knot of this model is the round thread itself.
#[derive(Debug, Clone)]
pub struct TrivialModel {
    dim: usize,
    generators: Vec<Sphere>,
}

impl TrivialModel {
    /// Pencil-only mode: no generators, just the fibration of the unknot
    /// complement.
    pub fn pencil_only(dim: usize) -> Result<Self, FibrationError> {
        if dim < 3 {
            return Err(FibrationError::BadDimension(dim));
        }
        Ok(TrivialModel {
            dim,
            generators: Vec::new(),
        })
    }

    /// Validate a generator family: centers in the hyperplane `x_d = 0`,
    /// orthogonality `|c|^2 = 1 + r^2` up to `tol`, pairwise disjoint.
    pub fn new(dim: usize, generators: Vec<Sphere>, tol: f64) -> Result<Self, FibrationError> {
        if dim < 3 {
            return Err(FibrationError::BadDimension(dim));
        }
        for (index, s) in generators.iter().enumerate() {
            if s.dim() != dim {
                return Err(FibrationError::BadDimension(s.dim()));
            }
            let offset = s.center()[dim - 1].abs();
            if offset > tol {
                return Err(FibrationError::OffHyperplane { index, offset });
            }
            let defect = vm::norm_sq(s.center()) - 1.0 - s.radius() * s.radius();
            if defect.abs() > tol.max(1e-9) {
                return Err(FibrationError::NotOrthogonal { index, defect });
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if generators[i].ball().gap(&generators[j].ball()) <= 0.0 {
                    return Err(FibrationError::GeneratorsOverlap(i, j));
                }
            }
        }
        Ok(TrivialModel { dim, generators })
    }

    /// `k` equal orthogonal beads with centers equally spaced on a circle
    /// of the thread hyperplane.
    pub fn symmetric(dim: usize, k: usize, radius: f64) -> Result<Self, FibrationError> {
        if dim < 3 {
            return Err(FibrationError::BadDimension(dim));
        }
        let scale = (1.0 + radius * radius).sqrt();
        let generators = (0..k)
            .map(|j| {
                let a = TAU * j as f64 / k as f64;
                let mut c = vec![0.0; dim];
                c[0] = scale * a.cos();
                c[1] = scale * a.sin();
                Sphere::new(c, radius).map_err(FibrationError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        TrivialModel::new(dim, generators, 1e-9)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Sphere] {
        &self.generators
    }

    /// Distance to the thread sphere `{ |x| = 1, x_d = 0 }`.
    pub fn thread_distance(&self, p: &[f64]) -> f64 {
        let (head, last) = p.split_at(self.dim - 1);
        let rho = vm::norm(head);
        ((rho - 1.0).powi(2) + last[0] * last[0]).sqrt()
    }

    /// Nearest thread point (radial projection in the hyperplane); `None`
    /// on the symmetry axis where the projection is ambiguous.
    pub fn nearest_thread_point(&self, p: &[f64]) -> Option<Vec<f64>> {
        let head = &p[..self.dim - 1];
        let rho = vm::norm(head);
        if rho < 1e-12 {
            return None;
        }
        let mut out: Vec<f64> = head.iter().map(|x| x / rho).collect();
        out.push(0.0);
        Some(out)
    }

    /// All stage-`depth` bead balls of the model.
    pub fn stage_balls(&self, depth: usize) -> Result<Vec<Ball>, FibrationError> {
        let mut balls: Vec<(u32, Ball)> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, s)| ((i + 1) as u32, s.ball()))
            .collect();
        for _ in 0..depth {
            let mut next = Vec::with_capacity(balls.len() * self.generators.len().saturating_sub(1));
            for (j, sphere) in self.generators.iter().enumerate() {
                let j = (j + 1) as u32;
                for (first, ball) in &balls {
                    if *first == j {
                        continue;
                    }
                    next.push((j, invert_ball(sphere, ball)?));
                }
            }
            balls = next;
        }
        Ok(balls.into_iter().map(|(_, b)| b).collect())
    }

    pub fn max_stage_radius(&self, depth: usize) -> Result<f64, FibrationError> {
        Ok(self
            .stage_balls(depth)?
            .iter()
            .map(Ball::radius)
            .fold(0.0, f64::max))
    }

    /// The model as a beaded necklace with the unit circle as sampled
    /// thread (ambient dimension 3, k >= 3 only).
    pub fn necklace(&self, samples: usize) -> Result<Necklace, NecklaceError> {
        if self.dim != 3 || self.k() < 3 {
            return Err(FibrationError::NoGeometricThread.into());
        }
        let thread = ThreadSample::unit_circle(samples);
        let balls = self.generators.iter().map(Sphere::ball).collect();
        Necklace::stage0(Some(thread), balls, 0.0)
    }
}

/// Pencil angle of a point off the thread: `atan2(2 x_d, |x|^2 - 1)`, with
/// infinity on the page of angle 0. Level sets are the pencil spheres
/// `|x|^2 - 1 = 2 cot(theta) x_d` through the thread.
pub fn theta_trivial(p: &ExtPoint, dim: usize, tol: f64) -> Result<FiberValue, FibrationError> {
    match p {
        ExtPoint::Infinity(_) => Ok(FiberValue::new(0.0f64.atan2(1.0))),
        ExtPoint::Finite(c) => {
            debug_assert_eq!(c.len(), dim);
            let y = 2.0 * c[dim - 1];
            let x = vm::norm_sq(c) - 1.0;
            if x.abs() <= tol && y.abs() <= tol {
                return Err(FibrationError::OnThread);
            }
            Ok(FiberValue::new(y.atan2(x)))
        }
    }
}

/// Page angle of a point anywhere in the complement: reduce to the
/// fundamental domain, then evaluate the pencil angle. On the fundamental
/// domain this equals `theta_trivial` exactly; the two clauses agree on
/// each generator sphere because the inversion fixes it pointwise.
pub fn fiber_value(
    model: &TrivialModel,
    x: &ExtPoint,
    max_iter: usize,
    tol: f64,
) -> Result<FiberValue, FibrationError> {
    let (_, reduced) = reduce_to_domain(&model.generators, x, max_iter, tol).map_err(|e| {
        match e {
            GeomError::LimitProximity { prefix, .. } => FibrationError::LimitProximity { prefix },
            other => FibrationError::Geom(other),
        }
    })?;
    theta_trivial(&reduced, model.dim, tol)
}

/// Sampling request for one fiber.
#[derive(Debug, Clone)]
pub struct FiberSampleSpec {
    pub theta0: f64,
    pub depth: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub per_axis: usize,
    /// half-width of the accepted page slab, `2*pi / angular bins`
    pub delta: f64,
    /// knot exclusion tube radius = scale * max stage-depth bead radius
    /// (reference radius 0.1 when the model has no beads)
    pub knot_tube_scale: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl FiberSampleSpec {
    pub fn new(dim: usize, theta0: f64, depth: usize) -> Self {
        FiberSampleSpec {
            theta0,
            depth,
            lo: vec![-2.5; dim],
            hi: vec![2.5; dim],
            per_axis: 40,
            delta: 1e-2,
            knot_tube_scale: 0.5,
            max_iter: 512,
            tol: crate::conformal::DEFAULT_TOL,
        }
    }
}

/// Sample the stage-`depth` fiber over a regular grid: grid points outside
/// the stage beads, outside the knot tube, whose page angle lies within
/// `delta` of `theta0`. The stage-`m` fibration lives on the complement of
/// the stage-`m` necklace, so the excluded region shrinks as the depth
/// grows and the sampled fiber creeps toward the knot.
pub fn fiber_sample(
    model: &TrivialModel,
    spec: &FiberSampleSpec,
) -> Result<Vec<Vec<f64>>, FibrationError> {
    let dim = model.dim;
    assert_eq!(spec.lo.len(), dim);
    assert_eq!(spec.hi.len(), dim);
    let balls = model.stage_balls(spec.depth)?;
    let max_radius = balls.iter().map(Ball::radius).fold(0.0, f64::max);
    let tube = spec.knot_tube_scale * if model.k() == 0 { 0.1 } else { max_radius };
    let theta0 = FiberValue::new(spec.theta0);

    let mut out = Vec::new();
    let mut idx = vec![0usize; dim];
    let n = spec.per_axis;
    loop {
        let p: Vec<f64> = (0..dim)
            .map(|d| spec.lo[d] + (idx[d] as f64 + 0.5) / n as f64 * (spec.hi[d] - spec.lo[d]))
            .collect();
        let keep = model.thread_distance(&p) > tube
            && !balls.iter().any(|b| b.contains_point(&p, 0.0))
            && match fiber_value(model, &ExtPoint::finite(p.clone()), spec.max_iter, spec.tol) {
                Ok(v) => signed_delta(theta0, v).abs() < spec.delta,
                Err(_) => false,
            };
        if keep {
            out.push(p);
        }
        let mut d = 0;
        loop {
            if d == dim {
                break;
            }
            idx[d] += 1;
            if idx[d] < n {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == dim {
            break;
        }
    }
    Ok(out)
}

/// Symbolic monodromy record: the stage-`m` fiber is a sum of
/// `k(k-1)^m + 1` copies of the base fiber, so the direct-limit homology is
/// infinitely generated exactly in the dimensions where the base fiber has
/// nontrivial homology. No geometric return map is computed.
#[derive(Debug, Clone)]
pub struct MonodromyDescriptor {
    pub k: u64,
    pub fiber: AbelianDescriptor,
    pub infinitely_generated_dims: Vec<usize>,
}

pub fn monodromy_descriptor(fiber: &AbelianDescriptor, k: u64) -> MonodromyDescriptor {
    MonodromyDescriptor {
        k,
        fiber: fiber.clone(),
        infinitely_generated_dims: fiber.nontrivial_dims(),
    }
}

impl MonodromyDescriptor {
    /// Number of fiber summands at stage `m`.
    pub fn stage_copies(&self, m: u32) -> Option<u64> {
        (self.k - 1)
            .checked_pow(m)
            .and_then(|p| p.checked_mul(self.k))
            .and_then(|l| l.checked_add(1))
    }

    pub fn is_infinitely_generated(&self) -> bool {
        !self.infinitely_generated_dims.is_empty()
    }
}

impl fmt::Display for MonodromyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "fiber copies at stage m: k(k-1)^m + 1 with k = {}",
            self.k
        )?;
        if self.infinitely_generated_dims.is_empty() {
            writeln!(f, "infinitely generated: no")
        } else {
            for &d in &self.infinitely_generated_dims {
                writeln!(f, "infinitely generated in dimension {d}: yes")?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::invert_point;

    const TOL: f64 = 1e-9;

    #[test]
    fn theta_examples() {
        let p = ExtPoint::finite(vec![2.0, 0.0, 0.0]);
        assert_eq!(theta_trivial(&p, 3, TOL).unwrap().angle(), 0.0);

        let p = ExtPoint::finite(vec![0.0, 0.0, 1.0]);
        let v = theta_trivial(&p, 3, TOL).unwrap().angle();
        assert!((v - PI / 2.0).abs() < 1e-15);

        assert_eq!(theta_trivial(&ExtPoint::infinity(3), 3, TOL).unwrap().angle(), 0.0);

        let on_thread = ExtPoint::finite(vec![1.0, 0.0, 0.0]);
        assert!(matches!(
            theta_trivial(&on_thread, 3, TOL),
            Err(FibrationError::OnThread)
        ));

        // inside the unit disk of the hyperplane: the opposite page
        let p = ExtPoint::finite(vec![0.3, 0.0, 0.0]);
        let v = theta_trivial(&p, 3, TOL).unwrap().angle();
        assert!((v - PI).abs() < 1e-15);
    }

    #[test]
    fn theta_constant_on_pencil_spheres() {
        // the pencil sphere for theta0 has center (0,..,0, cot theta0) and
        // radius 1/|sin theta0|; its upper half carries the page theta0
        let theta0 = 1.0f64;
        let center = vec![0.0, 0.0, 1.0 / theta0.tan()];
        let radius = 1.0 / theta0.sin().abs();
        let mut max_spread = 0.0f64;
        let n = 1000;
        for i in 0..n {
            let a = TAU * i as f64 / n as f64;
            for &b in &[0.2f64, 0.7, 1.3] {
                let dir = [b.sin() * a.cos(), b.sin() * a.sin(), b.cos()];
                let p: Vec<f64> = center
                    .iter()
                    .zip(dir)
                    .map(|(c, d)| c + radius * d)
                    .collect();
                if p[2] <= 1e-6 {
                    continue; // lower half carries theta0 - pi
                }
                let v = theta_trivial(&ExtPoint::finite(p), 3, TOL).unwrap();
                max_spread = max_spread.max(signed_delta(FiberValue::new(theta0), v).abs());
            }
        }
        assert!(max_spread < 1e-9, "spread {max_spread}");
    }

    #[test]
    fn theta_monotone_along_meridian_circle() {
        // a small circle around the thread point (1,0,0) crosses every page
        // monotonically
        let rho = 0.4;
        let n = 720;
        let mut prev = None;
        for i in 0..=n {
            let t = TAU * i as f64 / n as f64;
            let p = ExtPoint::finite(vec![1.0 + rho * t.cos(), 0.0, rho * t.sin()]);
            let v = theta_trivial(&p, 3, TOL).unwrap();
            if let Some(pv) = prev {
                let d = signed_delta(pv, v);
                assert!(d > 0.0, "non-monotone at step {i}: {d}");
            }
            prev = Some(v);
        }
    }

    #[test]
    fn symmetric_model_is_orthogonal_and_fiber_matches_theta_on_domain() {
        let model = TrivialModel::symmetric(3, 3, 0.5).unwrap();
        for s in model.generators() {
            let defect = vm::norm_sq(s.center()) - 1.0 - s.radius() * s.radius();
            assert!(defect.abs() < 1e-12);
        }

        // far outside the beads: reduction is the identity and values match
        // bit for bit
        let x = ExtPoint::finite(vec![0.3, -0.4, 1.7]);
        let direct = theta_trivial(&x, 3, TOL).unwrap();
        let via_fibration = fiber_value(&model, &x, 64, TOL).unwrap();
        assert_eq!(direct.angle(), via_fibration.angle());
    }

    #[test]
    fn fiber_value_is_equivariant() {
        let model = TrivialModel::symmetric(3, 3, 0.5).unwrap();
        let points = [
            vec![0.2, 0.1, 0.8],
            vec![-0.5, 1.9, -0.3],
            vec![2.2, 0.4, 0.6],
        ];
        for p in points {
            let x = ExtPoint::finite(p);
            let base = fiber_value(&model, &x, 64, TOL).unwrap();
            for s in model.generators() {
                let moved = invert_point(s, &x);
                let v = fiber_value(&model, &moved, 64, TOL).unwrap();
                assert!(
                    signed_delta(base, v).abs() < 1e-9,
                    "equivariance broken: {} vs {}",
                    base.angle(),
                    v.angle()
                );
            }
        }
    }

    #[test]
    fn pencil_only_sample_is_the_outer_page() {
        let model = TrivialModel::pencil_only(3).unwrap();
        let mut spec = FiberSampleSpec::new(3, 0.0, 0);
        spec.per_axis = 25; // odd: cell centers hit the z = 0 page plane
        let cloud = fiber_sample(&model, &spec).unwrap();
        assert!(!cloud.is_empty());
        for p in &cloud {
            assert!(vm::norm(p) > 1.0, "point {p:?} inside the unit sphere");
            assert!(p[2].abs() < 0.2, "point {p:?} far from the page plane");
        }
    }

    #[test]
    fn deeper_fiber_samples_contain_shallower_ones() {
        let model = TrivialModel::symmetric(3, 3, 0.5).unwrap();
        let mut spec0 = FiberSampleSpec::new(3, 1.0, 0);
        spec0.per_axis = 20;
        let mut spec1 = spec0.clone();
        spec1.depth = 1;
        let cloud0 = fiber_sample(&model, &spec0).unwrap();
        let cloud1 = fiber_sample(&model, &spec1).unwrap();
        let set1: std::collections::HashSet<_> = cloud1
            .iter()
            .map(|p| p.iter().map(|x| x.to_bits()).collect::<Vec<_>>())
            .collect();
        let balls0 = model.stage_balls(0).unwrap();
        for p in &cloud0 {
            if balls0.iter().all(|b| !b.contains_point(p, 0.0)) {
                let key: Vec<_> = p.iter().map(|x| x.to_bits()).collect();
                assert!(set1.contains(&key));
            }
        }
        assert!(cloud1.len() >= cloud0.len());
    }

    #[test]
    fn monodromy_descriptor_examples() {
        let trefoil_fiber = AbelianDescriptor::in_dimension(1, 2, Vec::new()).unwrap();
        let d = monodromy_descriptor(&trefoil_fiber, 3);
        assert!(d.is_infinitely_generated());
        assert_eq!(d.infinitely_generated_dims, vec![1]);
        assert_eq!(d.stage_copies(1), Some(7));
        assert!(d.to_string().contains("dimension 1: yes"));

        let disk = AbelianDescriptor::zero();
        let d = monodromy_descriptor(&disk, 3);
        assert!(!d.is_infinitely_generated());
        assert!(d.to_string().contains("infinitely generated: no"));

        // wedge of two (n-1)-spheres, n = 5
        let brieskorn = AbelianDescriptor::in_dimension(4, 2, Vec::new()).unwrap();
        let d = monodromy_descriptor(&brieskorn, 3);
        assert_eq!(d.infinitely_generated_dims, vec![4]);
    }
}
