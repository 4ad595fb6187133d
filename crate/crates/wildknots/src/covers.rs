//! Navigation of the q-fold cyclic branched cover of the trivial model.
//!
//! The cover is represented navigationally: a point of the cover is a base
//! point plus a sheet index mod `q`, and a path lifts by bumping the sheet
//! at every signed crossing of the cut page `theta = theta_cut`. Sheet
//! increments come from page-angle increments of the fibration, so crossing
//! detection is exact up to sampling; no global mesh is built, and the
//! limit set enters only as the set of address labels under which cover
//! ends accumulate.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::conformal::{invert_ball, Ball, ExtPoint, Word};
use crate::fibration::{fiber_value, signed_delta, FiberValue, FibrationError, TrivialModel};
use crate::vecmath as vm;

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("q must be at least 1")]
    BadQ,
    #[error("path point {index} is within {clearance:e} of the knot")]
    PathNearKnot { index: usize, clearance: f64 },
    #[error("page angle jump {delta:.4} on segment {segment} is too large; refine the path")]
    RefinementRequest { segment: usize, delta: f64 },
    #[error("point lies inside or touches a stage bead; pick a tame knot point")]
    PointInBeads,
    #[error("point projects ambiguously to the thread")]
    NoThreadProjection,
    #[error("meridian keeps linking other strands (winding {winding}) after {attempts} attempts")]
    MeridianLinking { winding: i64, attempts: u32 },
    #[error("empty path")]
    EmptyPath,
    #[error(transparent)]
    Fibration(#[from] FibrationError),
}

/// A point of the q-fold cover: base point plus sheet index mod q.
#[derive(Debug, Clone, PartialEq)]
pub struct SheetPoint {
    pub base: ExtPoint,
    pub sheet: u32,
}

/// A lifted path: one sheet per vertex and the signed cut crossings that
/// produced the sheet changes (segment index, sign).
#[derive(Debug, Clone)]
pub struct LiftedPath {
    pub vertices: Vec<SheetPoint>,
    pub crossings: Vec<(usize, i8)>,
}

impl LiftedPath {
    pub fn start_sheet(&self) -> u32 {
        self.vertices.first().map(|v| v.sheet).unwrap_or(0)
    }

    pub fn end_sheet(&self) -> u32 {
        self.vertices.last().map(|v| v.sheet).unwrap_or(0)
    }

    /// Net signed crossing count of the cut page.
    pub fn net_crossings(&self) -> i64 {
        self.crossings.iter().map(|&(_, s)| s as i64).sum()
    }
}

/// Branch verification record: the lifted meridian loop around a tame knot
/// point closes after exactly `closes_after` traversals.
#[derive(Debug, Clone)]
pub struct BranchReport {
    pub point: Vec<f64>,
    pub rho: f64,
    pub attempts: u32,
    pub segments: usize,
    pub winding: i64,
    pub sheet_shift: i64,
    pub closes_after: u32,
}

/// One row of the ends census: connected components of the cover over a
/// stage bead.
#[derive(Debug, Clone)]
pub struct EndsRow {
    pub address: Word,
    pub components: u32,
    pub decided: bool,
}

/// Configuration of a q-fold cyclic cover over the trivial model at a fixed
/// necklace depth, cut along the page `theta = theta_cut`.
#[derive(Debug, Clone)]
pub struct CoverConfig {
    q: u32,
    model: TrivialModel,
    depth: usize,
    theta_cut: FiberValue,
    max_iter: usize,
    tol: f64,
    knot_clearance: f64,
    stage_balls: Vec<Ball>,
}

impl CoverConfig {
    pub fn new(
        q: u32,
        model: TrivialModel,
        depth: usize,
        theta_cut: f64,
    ) -> Result<Self, CoverError> {
        if q < 1 {
            return Err(CoverError::BadQ);
        }
        let stage_balls = model.stage_balls(depth)?;
        let max_radius = stage_balls.iter().map(Ball::radius).fold(0.0, f64::max);
        let knot_clearance = 0.5 * if model.k() == 0 { 0.1 } else { max_radius };
        Ok(CoverConfig {
            q,
            model,
            depth,
            theta_cut: FiberValue::new(theta_cut),
            max_iter: 512,
            tol: crate::conformal::DEFAULT_TOL,
            knot_clearance,
            stage_balls,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn model(&self) -> &TrivialModel {
        &self.model
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn theta_cut(&self) -> FiberValue {
        self.theta_cut
    }

    pub fn knot_clearance(&self) -> f64 {
        self.knot_clearance
    }

    pub fn set_knot_clearance(&mut self, clearance: f64) {
        self.knot_clearance = clearance;
    }

    /// Deck transformation: shift the sheet by `g` mod q, base unchanged.
    /// The action has order exactly q.
    pub fn deck(&self, p: &SheetPoint, g: i64) -> SheetPoint {
        SheetPoint {
            base: p.base.clone(),
            sheet: (p.sheet as i64 + g).rem_euclid(self.q as i64) as u32,
        }
    }

    /// Lift a polyline path starting on `start_sheet`. The sheet bumps by
    /// +1 at each positive crossing of the cut page and -1 at each negative
    /// one; crossings are decided from the side of the cut each vertex lies
    /// on, so lifts concatenate additively. Segments must keep page-angle
    /// jumps below pi and the path must stay `knot_clearance` away from the
    /// knot.
    pub fn lift_path(
        &self,
        path: &[Vec<f64>],
        start_sheet: u32,
    ) -> Result<LiftedPath, CoverError> {
        self.lift_with_clearance(path, start_sheet, self.knot_clearance)
    }

    fn lift_with_clearance(
        &self,
        path: &[Vec<f64>],
        start_sheet: u32,
        clearance: f64,
    ) -> Result<LiftedPath, CoverError> {
        if path.is_empty() {
            return Err(CoverError::EmptyPath);
        }
        for (index, p) in path.iter().enumerate() {
            if self.model.thread_distance(p) < clearance {
                return Err(CoverError::PathNearKnot { index, clearance });
            }
        }
        for (index, w) in path.windows(2).enumerate() {
            let mid: Vec<f64> = w[0].iter().zip(&w[1]).map(|(a, b)| 0.5 * (a + b)).collect();
            if self.model.thread_distance(&mid) < clearance {
                return Err(CoverError::PathNearKnot { index, clearance });
            }
        }

        let thetas = path
            .iter()
            .map(|p| fiber_value(&self.model, &ExtPoint::finite(p.clone()), self.max_iter, self.tol))
            .collect::<Result<Vec<_>, _>>()?;

        let mut vertices = Vec::with_capacity(path.len());
        vertices.push(SheetPoint {
            base: ExtPoint::finite(path[0].clone()),
            sheet: start_sheet % self.q,
        });
        let mut crossings = Vec::new();
        let mut sheet = (start_sheet % self.q) as i64;
        for i in 0..path.len() - 1 {
            let d = signed_delta(thetas[i], thetas[i + 1]);
            if d.abs() >= PI - 1e-9 {
                return Err(CoverError::RefinementRequest {
                    segment: i,
                    delta: d.abs(),
                });
            }
            let sign = crossing_sign(thetas[i], thetas[i + 1], self.theta_cut);
            if sign != 0 {
                crossings.push((i, sign as i8));
                sheet += sign;
            }
            vertices.push(SheetPoint {
                base: ExtPoint::finite(path[i + 1].clone()),
                sheet: sheet.rem_euclid(self.q as i64) as u32,
            });
        }
        Ok(LiftedPath {
            vertices,
            crossings,
        })
    }

    /// Check the branch index at a tame knot point: build a small meridian
    /// circle around the knot at `t`, lift it, and confirm that the loop
    /// closes after exactly q traversals. The meridian radius starts at
    /// half the local bead gap and halves when the loop links other strands
    /// (at most 6 retries).
    pub fn verify_branch(&self, t: &[f64]) -> Result<BranchReport, CoverError> {
        let anchor = self
            .model
            .nearest_thread_point(t)
            .ok_or(CoverError::NoThreadProjection)?;
        let gap = self
            .stage_balls
            .iter()
            .map(|b| vm::dist(&anchor, b.center()) - b.radius())
            .fold(f64::INFINITY, f64::min);
        if gap <= 0.0 {
            return Err(CoverError::PointInBeads);
        }
        let dim = self.model.dim();
        let radial: Vec<f64> = anchor[..dim - 1].to_vec();

        let mut rho = 0.5 * gap.min(0.8);
        let mut segments = 256usize;
        let mut attempts = 0u32;
        loop {
            attempts += 1;
            let mut loop_pts: Vec<Vec<f64>> = Vec::with_capacity(segments + 1);
            for i in 0..=segments {
                let phi = TAU * i as f64 / segments as f64;
                let mut p: Vec<f64> = radial
                    .iter()
                    .map(|u| u * (1.0 + rho * phi.cos()))
                    .collect();
                p.push(rho * phi.sin());
                loop_pts.push(p);
            }
            // exact closure of the loop
            let first = loop_pts[0].clone();
            *loop_pts.last_mut().unwrap() = first;

            match self.lift_with_clearance(&loop_pts, 0, 0.5 * rho) {
                Err(CoverError::RefinementRequest { .. }) if segments < 4096 => {
                    segments *= 2;
                    continue;
                }
                Err(e) => return Err(e),
                Ok(lift) => {
                    let total: f64 = loop_pts
                        .windows(2)
                        .map(|w| {
                            let a = fiber_value(
                                &self.model,
                                &ExtPoint::finite(w[0].clone()),
                                self.max_iter,
                                self.tol,
                            )
                            .expect("lift already evaluated these points");
                            let b = fiber_value(
                                &self.model,
                                &ExtPoint::finite(w[1].clone()),
                                self.max_iter,
                                self.tol,
                            )
                            .expect("lift already evaluated these points");
                            signed_delta(a, b)
                        })
                        .sum();
                    let winding = (total / TAU).round() as i64;
                    if winding.abs() != 1 {
                        if attempts >= 6 {
                            return Err(CoverError::MeridianLinking { winding, attempts });
                        }
                        rho *= 0.5;
                        continue;
                    }
                    let sheet_shift = lift.net_crossings();
                    debug_assert_eq!(sheet_shift, winding);
                    let mut closes_after = self.q;
                    for t in 1..=self.q {
                        if (t as i64 * sheet_shift).rem_euclid(self.q as i64) == 0 {
                            closes_after = t;
                            break;
                        }
                    }
                    return Ok(BranchReport {
                        point: anchor,
                        rho,
                        attempts,
                        segments,
                        winding,
                        sheet_shift,
                        closes_after,
                    });
                }
            }
        }
    }

    /// Count the connected components of the cover over each stage bead.
    /// A deterministic sampling ring encircling the thread inside the bead
    /// detects whether the cut page meets the bead: each detected crossing
    /// glues every sheet `s` to `s + sign`, and components are counted on
    /// the resulting sheet-transition graph. Beads that cannot be sampled
    /// are flagged undecided.
    pub fn ends_census(&self) -> Result<Vec<EndsRow>, CoverError> {
        let gens = self.model.generators();
        let mut beads: Vec<(Word, Ball)> = gens
            .iter()
            .enumerate()
            .map(|(i, s)| (Word::from_reduced(vec![(i + 1) as u32]), s.ball()))
            .collect();
        for _ in 0..self.depth {
            let mut next = Vec::with_capacity(beads.len() * gens.len().saturating_sub(1));
            for (j, sphere) in gens.iter().enumerate() {
                let j = (j + 1) as u32;
                for (addr, ball) in &beads {
                    if addr.first() == Some(j) {
                        continue;
                    }
                    let mut letters = vec![j];
                    letters.extend_from_slice(addr.letters());
                    next.push((
                        Word::from_reduced(letters),
                        invert_ball(sphere, ball).map_err(FibrationError::from)?,
                    ));
                }
            }
            beads = next;
        }
        beads.sort_by(|a, b| a.0.cmp(&b.0));

        let mut rows = Vec::with_capacity(beads.len());
        for (address, ball) in beads {
            rows.push(self.census_row(address, &ball));
        }
        Ok(rows)
    }

    fn census_row(&self, address: Word, ball: &Ball) -> EndsRow {
        let undecided = |address: Word| EndsRow {
            address,
            components: self.q,
            decided: false,
        };
        let h = self.model.thread_distance(ball.center());
        if h >= ball.radius() {
            return undecided(address);
        }
        let Some(anchor) = self.model.nearest_thread_point(ball.center()) else {
            return undecided(address);
        };
        let rho = 0.5 * (ball.radius() - h);
        let dim = self.model.dim();
        let radial: Vec<f64> = anchor[..dim - 1].to_vec();

        let n = 64;
        let mut thetas = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let phi = TAU * i as f64 / n as f64;
            let mut p: Vec<f64> = radial
                .iter()
                .map(|u| u * (1.0 + rho * phi.cos()))
                .collect();
            p.push(rho * phi.sin());
            match fiber_value(&self.model, &ExtPoint::finite(p), self.max_iter, self.tol) {
                Ok(v) => thetas.push(v),
                Err(_) => return undecided(address),
            }
        }

        // sheet-transition graph on q nodes
        let mut parent: Vec<u32> = (0..self.q).collect();
        fn find(parent: &mut Vec<u32>, x: u32) -> u32 {
            if parent[x as usize] != x {
                let root = find(parent, parent[x as usize]);
                parent[x as usize] = root;
            }
            parent[x as usize]
        }
        for w in thetas.windows(2) {
            let d = signed_delta(w[0], w[1]);
            if d.abs() >= PI - 1e-9 {
                return undecided(address);
            }
            let sign = crossing_sign(w[0], w[1], self.theta_cut);
            if sign != 0 {
                for s in 0..self.q {
                    let t = (s as i64 + sign).rem_euclid(self.q as i64) as u32;
                    let (rs, rt) = (find(&mut parent, s), find(&mut parent, t));
                    if rs != rt {
                        parent[rs as usize] = rt;
                    }
                }
            }
        }
        let components = (0..self.q)
            .filter(|&s| find(&mut parent, s) == s)
            .count() as u32;
        EndsRow {
            address,
            components,
            decided: true,
        }
    }
}

/// Signed crossing of the cut along the short arc from `a` to `b`. Each
/// vertex is classified by its side of the cut (the cut itself belongs to
/// the nonnegative side); the sheet changes exactly when the side changes.
/// Classifying vertices, not segments, makes lift concatenation additive.
fn crossing_sign(a: FiberValue, b: FiberValue, cut: FiberValue) -> i64 {
    let alpha = signed_delta(cut, a);
    let beta = signed_delta(cut, b);
    if alpha < 0.0 && beta >= 0.0 && beta - alpha <= PI {
        1
    } else if alpha >= 0.0 && beta < 0.0 && alpha - beta <= PI {
        -1
    } else {
        0
    }
}
