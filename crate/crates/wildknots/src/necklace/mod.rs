//! Beaded necklaces and the stage-by-stage inverting process.
//!
//! A stage-0 necklace is a closed thread with `k >= 3` disjoint round beads
//! strung on it. Inverting the necklace through each bead boundary sphere
//! replaces every bead by a shrunken copy of the rest of the necklace, so
//! stage `m` carries exactly `k(k-1)^m` beads, each named by a reduced word
//! of length `m+1` (its address). The intersection of the nested bead unions
//! is a Cantor set and the stage knots converge to a wild knot; this module
//! provides the data model, validation, bead enumeration, limit-set
//! approximation and per-stage statistics. Knot approximation, dimension
//! estimation and equivalence transport live in the submodules.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::conformal::{apply_word, invert_ball, Ball, GeomError, Sphere, Word};
use crate::vecmath as vm;

pub mod dimension;
pub mod equivalence;
pub mod knot;

pub use dimension::{dimension_estimate, DimensionEstimate};
pub use equivalence::{transport_equivalence, EquivalenceCertificate};
pub use knot::{knot_approx, polyline_is_simple, KnotApprox, PieceInfo};

#[derive(Debug, Error)]
pub enum NecklaceError {
    #[error("a necklace needs at least 3 beads, got {0}")]
    TooFewBeads(usize),
    #[error("beads {i} and {j} overlap (gap {gap:e} below tolerance {tol:e})")]
    OverlappingBeads {
        i: usize,
        j: usize,
        gap: f64,
        tol: f64,
    },
    #[error("operation requires a stage-{expected} necklace, got stage {got}")]
    WrongStage { expected: usize, got: usize },
    #[error("thread dimension {0} does not match bead dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid thread: {0}")]
    InvalidThread(String),
    #[error("geometric thread operations need a sampled thread in dimension 3")]
    ThreadRequired,
    #[error("bead {address} crosses the thread {count} times (expected 2)")]
    CrossingCount { address: Word, count: usize },
    #[error("sampling resolution insufficient: {0}")]
    RefinementRequired(String),
    #[error("construction fault: {0}")]
    ConstructionFault(String),
    #[error("partition sums do not bracket a root at depth {depth}")]
    NonBracketing { depth: usize },
    #[error("dimension estimate needs at least 2 depths")]
    NotEnoughDepths,
    #[error("bead bijection is not a permutation of 0..{0}")]
    BadBijection(usize),
    #[error("necklaces have different bead counts: {0} vs {1}")]
    BeadCountMismatch(usize, usize),
    #[error("cyclic bead order not preserved; first failing address {0}")]
    OrderMismatch(Word),
    #[error("nesting violated at address {address} (margin {margin:e})")]
    NestingViolation { address: Word, margin: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A closed polyline sample of the thread knot, with strictly increasing
/// curve parameters in `[0, 1)`. The last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreadSample {
    dim: usize,
    points: Vec<Vec<f64>>,
    params: Vec<f64>,
}

impl ThreadSample {
    pub fn new(points: Vec<Vec<f64>>, params: Option<Vec<f64>>) -> Result<Self, NecklaceError> {
        if points.len() < 3 {
            return Err(NecklaceError::InvalidThread(format!(
                "need at least 3 vertices, got {}",
                points.len()
            )));
        }
        let dim = points[0].len();
        if dim < 3 {
            return Err(NecklaceError::InvalidThread(format!(
                "ambient dimension {dim} below 3"
            )));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(NecklaceError::InvalidThread(
                "inconsistent vertex dimensions".into(),
            ));
        }
        let n = points.len();
        let params = match params {
            Some(t) => {
                if t.len() != n {
                    return Err(NecklaceError::InvalidThread(
                        "one parameter per vertex required".into(),
                    ));
                }
                if t[0] < 0.0 || t.last().copied().unwrap() >= 1.0 {
                    return Err(NecklaceError::InvalidThread(
                        "parameters must lie in [0, 1)".into(),
                    ));
                }
                if t.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(NecklaceError::InvalidThread(
                        "parameters must be strictly increasing".into(),
                    ));
                }
                t
            }
            None => (0..n).map(|i| i as f64 / n as f64).collect(),
        };
        for i in 0..n {
            let j = (i + 1) % n;
            if vm::dist_sq(&points[i], &points[j]) == 0.0 {
                return Err(NecklaceError::InvalidThread(format!(
                    "consecutive vertices {i} and {j} coincide"
                )));
            }
        }
        Ok(ThreadSample { dim, points, params })
    }

    /// The unit circle in the z = 0 plane of R^3, sampled uniformly.
    pub fn unit_circle(samples: usize) -> Self {
        let n = samples.max(8);
        let points = (0..n)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / n as f64;
                vec![a.cos(), a.sin(), 0.0]
            })
            .collect();
        ThreadSample::new(points, None).expect("uniform circle sample is a valid thread")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Parameter span of segment `i` (from vertex `i` to vertex `i+1`,
    /// cyclically).
    pub fn segment_span(&self, i: usize) -> f64 {
        let n = self.points.len();
        if i + 1 < n {
            self.params[i + 1] - self.params[i]
        } else {
            1.0 - self.params[n - 1] + self.params[0]
        }
    }

    /// Piecewise-linear interpolation at curve parameter `t` (mod 1).
    pub fn point_at(&self, t: f64) -> Vec<f64> {
        let t = t.rem_euclid(1.0);
        let n = self.points.len();
        // index of the last vertex with param <= t
        let i = match self
            .params
            .binary_search_by(|p| p.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(0) => n - 1,
            Err(i) => i - 1,
        };
        let span = self.segment_span(i);
        let local = if i == n - 1 || t >= self.params[i] {
            (t - self.params[i]).rem_euclid(1.0) / span
        } else {
            0.0
        };
        vm::lerp(&self.points[i], &self.points[(i + 1) % n], local)
    }

    /// Recorded sampling resolution: the longest segment.
    pub fn max_segment_len(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| vm::dist(&self.points[i], &self.points[(i + 1) % n]))
            .fold(0.0, f64::max)
    }

    /// Distance from `p` to the sampled curve.
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| vm::point_segment_dist(p, &self.points[i], &self.points[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Curve parameter of the point on the polyline nearest to `p`.
    pub fn nearest_param(&self, p: &[f64]) -> f64 {
        let n = self.points.len();
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..n {
            let a = &self.points[i];
            let b = &self.points[(i + 1) % n];
            let ab = vm::sub(b, a);
            let len2 = vm::norm_sq(&ab);
            let t = if len2 == 0.0 {
                0.0
            } else {
                (vm::dot(&vm::sub(p, a), &ab) / len2).clamp(0.0, 1.0)
            };
            let d = vm::dist(p, &vm::lerp(a, b, t));
            if d < best.0 {
                best = (d, (self.params[i] + t * self.segment_span(i)).rem_euclid(1.0));
            }
        }
        best.1
    }
}

/// A bead: a round ball named by its address. The address of a stage-`m`
/// bead has length `m+1`; dropping the last letter names the parent bead it
/// sits inside.
#[derive(Debug, Clone, PartialEq)]
pub struct Bead {
    pub ball: Ball,
    pub address: Word,
}

impl Bead {
    pub fn stage(&self) -> usize {
        self.address.len() - 1
    }

    pub fn parent_address(&self) -> Option<Word> {
        let p = self.address.parent()?;
        if p.is_empty() {
            None
        } else {
            Some(p)
        }
    }
}

/// One per-check entry of a validation report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub outcome: CheckOutcome,
    pub detail: String,
}

/// Validation never errors; failures are carried in the report.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.outcome != CheckOutcome::Fail)
    }
}

/// Per-stage summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct StageStats {
    pub stage: usize,
    pub count: u64,
    pub max_radius: f64,
    pub min_gap: f64,
}

/// A depth-`L` bead center standing in for the unique limit point inside it;
/// the bead radius bounds the distance to that point.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitPoint {
    pub center: Vec<f64>,
    pub radius: f64,
    pub address: Word,
}

/// A beaded necklace at some stage of the inverting process. The generators
/// are always the original stage-0 bead boundary spheres; beads carry their
/// own addresses. The thread is optional: without one the engine runs in
/// combinatorial mode and thread-dependent checks are skipped.
#[derive(Debug, Clone)]
pub struct Necklace {
    generators: Vec<Sphere>,
    thread: Option<ThreadSample>,
    beads: Vec<Bead>,
    stage: usize,
}

impl Necklace {
    /// Build a stage-0 necklace. Requires `k >= 3` beads, pairwise disjoint
    /// with margin `tol`; the thread, when present, must share the ambient
    /// dimension.
    pub fn stage0(
        thread: Option<ThreadSample>,
        balls: Vec<Ball>,
        tol: f64,
    ) -> Result<Self, NecklaceError> {
        let k = balls.len();
        if k < 3 {
            return Err(NecklaceError::TooFewBeads(k));
        }
        let dim = balls[0].dim();
        for b in &balls {
            if b.dim() != dim {
                return Err(NecklaceError::DimensionMismatch(dim, b.dim()));
            }
        }
        if let Some(t) = &thread {
            if t.dim() != dim {
                return Err(NecklaceError::DimensionMismatch(t.dim(), dim));
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                let gap = balls[i].gap(&balls[j]);
                if gap < tol {
                    return Err(NecklaceError::OverlappingBeads { i, j, gap, tol });
                }
            }
        }
        let generators = balls.iter().map(|b| b.boundary()).collect();
        let beads = balls
            .into_iter()
            .enumerate()
            .map(|(j, ball)| Bead {
                ball,
                address: Word::from_reduced(vec![(j + 1) as u32]),
            })
            .collect();
        Ok(Necklace {
            generators,
            thread,
            beads,
            stage: 0,
        })
    }

    /// The symmetric test configuration: unit circle thread in the z = 0
    /// plane of R^3 with `k` equal beads centered at equally spaced angles.
    pub fn symmetric_circle(
        k: usize,
        bead_radius: f64,
        samples: usize,
    ) -> Result<Self, NecklaceError> {
        let thread = ThreadSample::unit_circle(samples);
        let balls = (0..k)
            .map(|j| {
                let a = std::f64::consts::TAU * j as f64 / k as f64;
                Ball::new(vec![a.cos(), a.sin(), 0.0], bead_radius)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Necklace::stage0(Some(thread), balls, crate::conformal::DEFAULT_TOL)
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn beads(&self) -> &[Bead] {
        &self.beads
    }

    pub fn generators(&self) -> &[Sphere] {
        &self.generators
    }

    pub fn thread(&self) -> Option<&ThreadSample> {
        self.thread.as_ref()
    }

    pub fn max_radius(&self) -> f64 {
        self.beads
            .iter()
            .map(|b| b.ball.radius())
            .fold(0.0, f64::max)
    }

    /// Minimum gap between distinct beads of this stage (positive iff all
    /// disjoint). Grid-accelerated; exact.
    pub fn min_gap(&self) -> f64 {
        min_gap_of(&self.beads)
    }

    /// Check the stage-0 necklace conditions; see [`validate_balls`].
    /// Panics if called on a necklace past stage 0.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        assert_eq!(self.stage, 0, "validate applies to stage-0 necklaces");
        let balls: Vec<Ball> = self.beads.iter().map(|b| b.ball.clone()).collect();
        validate_balls(self.thread.as_ref(), &balls, tol)
    }

    /// One round of the inverting process: every generator inversion is
    /// applied to the previous-stage beads it does not own, so the bead with
    /// address `v` spawns the bead `j.v` with ball `I_j(ball(v))` for every
    /// `j` different from the first letter of `v`. Checks that each new ball
    /// sits strictly inside its parent (address prefix) up to `tol`.
    pub fn build_stage(&self, tol: f64) -> Result<Necklace, NecklaceError> {
        let k = self.k();
        let mut beads = Vec::with_capacity(k * (k - 1).pow(self.stage as u32 + 1));
        for j in 1..=k as u32 {
            let sphere = &self.generators[(j - 1) as usize];
            for old in &self.beads {
                if old.address.first() == Some(j) {
                    continue;
                }
                let ball = invert_ball(sphere, &old.ball)?;
                let mut letters = Vec::with_capacity(old.address.len() + 1);
                letters.push(j);
                letters.extend_from_slice(old.address.letters());
                let address = Word::from_reduced(letters);

                let parent_addr = address.parent().expect("stage >= 1 addresses have parents");
                let parent = self
                    .beads
                    .binary_search_by(|b| b.address.cmp(&parent_addr))
                    .map(|i| &self.beads[i])
                    .map_err(|_| {
                        NecklaceError::ConstructionFault(format!(
                            "parent bead {parent_addr} not found"
                        ))
                    })?;
                let margin = parent.ball.containment_margin(&ball);
                if margin < tol {
                    return Err(NecklaceError::ConstructionFault(format!(
                        "bead {address} leaves its parent (margin {margin:e})"
                    )));
                }
                beads.push(Bead { ball, address });
            }
        }
        debug_assert!(beads.windows(2).all(|w| w[0].address < w[1].address));
        Ok(Necklace {
            generators: self.generators.clone(),
            thread: self.thread.clone(),
            beads,
            stage: self.stage + 1,
        })
    }

    /// Stream every bead of stages `0..=depth` in address-lexicographic
    /// order (depth-first, parents before children) without materializing
    /// intermediate necklaces. Stage `m` contributes `k(k-1)^m` beads.
    pub fn enumerate_beads(&self, depth: usize) -> BeadStream<'_> {
        assert_eq!(self.stage, 0, "enumeration starts from a stage-0 necklace");
        let stack: Vec<Word> = (1..=self.k() as u32)
            .rev()
            .map(|j| Word::from_reduced(vec![j]))
            .collect();
        BeadStream {
            necklace: self,
            depth,
            stack,
        }
    }

    /// Like `enumerate_beads` but restricted to the subtree under one
    /// stage-0 bead; subtrees of distinct letters partition the stream, so
    /// they can be walked on independent lanes and concatenated in letter
    /// order without changing a single bit of the output.
    pub fn enumerate_subtree(&self, depth: usize, first_letter: u32) -> BeadStream<'_> {
        assert_eq!(self.stage, 0, "enumeration starts from a stage-0 necklace");
        assert!(first_letter >= 1 && first_letter as usize <= self.k());
        BeadStream {
            necklace: self,
            depth,
            stack: vec![Word::from_reduced(vec![first_letter])],
        }
    }

    /// Centers and radii of all depth-`L` beads; each center lies within its
    /// bead radius of a unique limit point.
    pub fn limit_points(&self, depth: usize) -> Result<Vec<LimitPoint>, NecklaceError> {
        assert_eq!(self.stage, 0, "limit points start from a stage-0 necklace");
        let mut current = self.clone();
        for _ in 0..depth {
            current = current.build_stage(0.0)?;
        }
        Ok(current
            .beads
            .iter()
            .map(|b| LimitPoint {
                center: b.ball.center().to_vec(),
                radius: b.ball.radius(),
                address: b.address.clone(),
            })
            .collect())
    }

    /// Per-stage statistics for stages `0..=depth`.
    pub fn stage_stats(&self, depth: usize) -> Result<Vec<StageStats>, NecklaceError> {
        assert_eq!(self.stage, 0, "statistics start from a stage-0 necklace");
        let mut out = Vec::with_capacity(depth + 1);
        let mut current = self.clone();
        loop {
            out.push(StageStats {
                stage: current.stage,
                count: current.beads.len() as u64,
                max_radius: current.max_radius(),
                min_gap: current.min_gap(),
            });
            if current.stage == depth {
                break;
            }
            current = current.build_stage(0.0)?;
        }
        Ok(out)
    }
}

/// Streaming depth-first enumeration over the bead tree.
pub struct BeadStream<'a> {
    necklace: &'a Necklace,
    depth: usize,
    stack: Vec<Word>,
}

impl Iterator for BeadStream<'_> {
    type Item = Result<Bead, NecklaceError>;

    fn next(&mut self) -> Option<Self::Item> {
        let address = self.stack.pop()?;
        let k = self.necklace.k() as u32;
        if address.len() < self.depth + 1 {
            for j in (1..=k).rev() {
                if let Some(child) = address.child(j) {
                    self.stack.push(child);
                }
            }
        }
        let parent = address.parent().unwrap_or_default();
        let base = self.necklace.beads[(address.last().unwrap() - 1) as usize]
            .ball
            .clone();
        match apply_word(&parent, &self.necklace.generators, &base) {
            Ok(ball) => Some(Ok(Bead { ball, address })),
            Err(e) => Some(Err(e.into())),
        }
    }
}

/// Check the stage-0 necklace conditions on a candidate configuration,
/// constructed or not:
/// (a) pairwise ball disjointness with margin `tol`;
/// (b) each ball center within `tol` of the thread;
/// (c) the thread crosses each ball boundary exactly twice (the
///     trivial-tangle proxy).
/// Thread checks are skipped in combinatorial mode. Never errors; failures
/// are carried in the report.
pub fn validate_balls(
    thread: Option<&ThreadSample>,
    balls: &[Ball],
    tol: f64,
) -> ValidationReport {
    let mut checks = Vec::new();

    let mut worst = f64::INFINITY;
    let mut worst_pair = (0usize, 0usize);
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            let gap = balls[i].gap(&balls[j]);
            if gap < worst {
                worst = gap;
                worst_pair = (i, j);
            }
        }
    }
    checks.push(CheckResult {
        name: "disjointness",
        outcome: if worst >= tol {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail
        },
        detail: format!(
            "min gap {:.6e} between beads {} and {}",
            worst, worst_pair.0, worst_pair.1
        ),
    });

    match thread {
        None => {
            checks.push(CheckResult {
                name: "centers-on-thread",
                outcome: CheckOutcome::Skipped,
                detail: "combinatorial mode (no thread)".into(),
            });
            checks.push(CheckResult {
                name: "trivial-tangle-crossings",
                outcome: CheckOutcome::Skipped,
                detail: "combinatorial mode (no thread)".into(),
            });
        }
        Some(thread) => {
            let mut max_off = 0.0f64;
            let mut off_bead = 0usize;
            for (j, ball) in balls.iter().enumerate() {
                let d = thread.distance_to(ball.center());
                if d > max_off {
                    max_off = d;
                    off_bead = j;
                }
            }
            checks.push(CheckResult {
                name: "centers-on-thread",
                outcome: if max_off <= tol {
                    CheckOutcome::Pass
                } else {
                    CheckOutcome::Fail
                },
                detail: format!("max center offset {:.6e} at bead {}", max_off, off_bead),
            });

            let mut outcome = CheckOutcome::Pass;
            let mut detail = String::from("every bead boundary crossed exactly twice");
            for (j, ball) in balls.iter().enumerate() {
                match knot::sphere_crossings(thread, &ball.boundary(), tol) {
                    Ok(cr) if cr.len() == 2 => {}
                    Ok(cr) => {
                        outcome = CheckOutcome::Fail;
                        detail =
                            format!("bead {} crossed {} times (expected 2)", j + 1, cr.len());
                        break;
                    }
                    Err(e) => {
                        outcome = CheckOutcome::Fail;
                        detail = format!("bead {}: {}", j + 1, e);
                        break;
                    }
                }
            }
            checks.push(CheckResult {
                name: "trivial-tangle-crossings",
                outcome,
                detail,
            });
        }
    }

    ValidationReport { checks }
}

/// Auto-placement helper: center a bead at each thread parameter with the
/// largest radius that passes validation, shrunk by a safety factor 0.9.
/// `reach` bounds the radius from above by `reach / 2`.
pub fn auto_place_beads(
    thread: &ThreadSample,
    params: &[f64],
    reach: f64,
    tol: f64,
) -> Result<Vec<Ball>, NecklaceError> {
    if params.len() < 3 {
        return Err(NecklaceError::TooFewBeads(params.len()));
    }
    let centers: Vec<Vec<f64>> = params.iter().map(|&t| thread.point_at(t)).collect();
    let mut min_pair = f64::INFINITY;
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            min_pair = min_pair.min(vm::dist(&centers[i], &centers[j]));
        }
    }
    let mut radius = 0.9 * (min_pair / 2.0).min(reach / 2.0);
    for _ in 0..40 {
        if radius < crate::conformal::MIN_RADIUS {
            break;
        }
        let balls: Vec<Ball> = centers
            .iter()
            .map(|c| Ball::new(c.clone(), radius))
            .collect::<Result<_, _>>()?;
        if validate_balls(Some(thread), &balls, tol).passed() {
            return Ok(balls);
        }
        radius *= 0.9;
    }
    Err(NecklaceError::ConstructionFault(
        "no bead radius passed validation".into(),
    ))
}

fn min_gap_of(beads: &[Bead]) -> f64 {
    let n = beads.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let dim = beads[0].ball.dim();
    let r_max = beads
        .iter()
        .map(|b| b.ball.radius())
        .fold(0.0f64, f64::max);

    // seed with lexicographically consecutive beads (likely siblings)
    let mut best = f64::INFINITY;
    for w in beads.windows(2) {
        best = best.min(w[0].ball.gap(&w[1].ball));
    }

    // exact grid sweep: any pair with a smaller gap has center distance
    // below best + 2 r_max, hence lands in neighboring cells
    let cell = best + 2.0 * r_max;
    if !cell.is_finite() || cell <= 0.0 {
        // beads already overlap; fall back to the seeded value
        return best;
    }
    let key = |c: &[f64]| -> Vec<i64> {
        c.iter().map(|x| (x / cell).floor() as i64).collect()
    };
    let mut grid: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, b) in beads.iter().enumerate() {
        grid.entry(key(b.ball.center())).or_default().push(i);
    }
    let mut neighbor = vec![0i64; dim];
    for (i, b) in beads.iter().enumerate() {
        let base = key(b.ball.center());
        // walk the 3^dim neighborhood
        let mut idx = vec![0usize; dim];
        loop {
            for (d, &off) in idx.iter().enumerate() {
                neighbor[d] = base[d] + off as i64 - 1;
            }
            if let Some(cellmates) = grid.get(&neighbor) {
                for &j in cellmates {
                    if j > i {
                        best = best.min(beads[i].ball.gap(&beads[j].ball));
                    }
                }
            }
            // odometer over {0,1,2}^dim
            let mut d = 0;
            loop {
                if d == dim {
                    break;
                }
                idx[d] += 1;
                if idx[d] < 3 {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == dim {
                break;
            }
        }
    }
    best
}
