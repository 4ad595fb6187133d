//! Stage-m knot approximation.
//!
//! The thread decomposes into `2k` pieces: free arcs outside all beads and
//! one arc inside each bead. Each stage replaces every deepest in-bead arc
//! by the image of the complementary thread under the bead's inversion
//! chain, stitched at the two boundary crossing points (no smoothing). The
//! arcs inside the deepest beads are kept as-is, so depth 0 returns the
//! thread itself.

use crate::conformal::{Sphere, Word};
use crate::vecmath as vm;

use super::{Necklace, NecklaceError, ThreadSample};

/// Consecutive vertices closer than this are merged when assembling the
/// polyline (exact duplicates at piece junctions).
const DEDUPE_EPS: f64 = 1e-13;

/// A transversal crossing of the thread with a sphere.
#[derive(Debug, Clone)]
pub struct Crossing {
    pub param: f64,
    pub point: Vec<f64>,
    pub entering: bool,
}

/// Transversal crossings of the sampled thread with a sphere, sorted by
/// curve parameter. Degenerate contacts (vertex on the sphere, tangency,
/// two crossings inside one segment) are refinement requests.
pub fn sphere_crossings(
    thread: &ThreadSample,
    sphere: &Sphere,
    tol: f64,
) -> Result<Vec<Crossing>, NecklaceError> {
    let n = thread.len();
    let c = sphere.center();
    let r = sphere.radius();
    let pts = thread.points();
    let dist: Vec<f64> = pts.iter().map(|p| vm::dist(p, c) - r).collect();

    for (i, &f) in dist.iter().enumerate() {
        if f.abs() <= tol {
            return Err(NecklaceError::RefinementRequired(format!(
                "thread vertex {i} lies on a bead boundary (offset {f:e})"
            )));
        }
    }

    let mut out = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let (fa, fb) = (dist[i], dist[j]);
        let a = &pts[i];
        let b = &pts[j];
        let ab = vm::sub(b, a);
        let qa = vm::norm_sq(&ab);
        let ac = vm::sub(a, c);
        let qb = 2.0 * vm::dot(&ac, &ab);
        let qc = vm::norm_sq(&ac) - r * r;

        if fa > 0.0 && fb > 0.0 {
            // both endpoints outside: the segment may still dip through
            if qa > 0.0 {
                let t_min = (-qb / (2.0 * qa)).clamp(0.0, 1.0);
                if t_min > 0.0 && t_min < 1.0 {
                    let d_min = vm::dist(&vm::lerp(a, b, t_min), c) - r;
                    if d_min < tol {
                        return Err(NecklaceError::RefinementRequired(format!(
                            "segment {i} grazes or dips through a bead boundary (closest approach {d_min:e})"
                        )));
                    }
                }
            }
            continue;
        }
        if fa < 0.0 && fb < 0.0 {
            continue;
        }
        // endpoints straddle: exactly one root in (0, 1)
        let disc = qb * qb - 4.0 * qa * qc;
        if disc <= 0.0 || qa == 0.0 {
            return Err(NecklaceError::RefinementRequired(format!(
                "cannot resolve crossing on segment {i}"
            )));
        }
        let sd = disc.sqrt();
        let entering = fa > 0.0;
        let t = if entering {
            (-qb - sd) / (2.0 * qa)
        } else {
            (-qb + sd) / (2.0 * qa)
        };
        let t = t.clamp(0.0, 1.0);
        out.push(Crossing {
            param: (thread.params()[i] + t * thread.segment_span(i)).rem_euclid(1.0),
            point: vm::lerp(a, b, t),
            entering,
        });
    }
    out.sort_by(|x, y| x.param.partial_cmp(&y.param).unwrap());
    Ok(out)
}

/// A maximal piece of the cut-open thread: either a free arc or the arc
/// inside the bead with the recorded letter. First and last points are the
/// bounding crossing points.
#[derive(Debug, Clone)]
struct BasePiece {
    arc: Option<u32>,
    points: Vec<Vec<f64>>,
}

/// Cut the thread at every bead boundary crossing.
fn base_pieces(neck: &Necklace, tol: f64) -> Result<Vec<BasePiece>, NecklaceError> {
    let thread = neck.thread().ok_or(NecklaceError::ThreadRequired)?;
    let k = neck.k();

    #[derive(Debug)]
    struct Event {
        param: f64,
        point: Vec<f64>,
        letter: u32,
        entering: bool,
    }

    let mut events: Vec<Event> = Vec::with_capacity(2 * k);
    for bead in neck.beads() {
        let crossings = sphere_crossings(thread, &bead.ball.boundary(), tol)?;
        if crossings.len() != 2 {
            return Err(NecklaceError::CrossingCount {
                address: bead.address.clone(),
                count: crossings.len(),
            });
        }
        if crossings[0].entering == crossings[1].entering {
            return Err(NecklaceError::RefinementRequired(format!(
                "bead {} has two {} crossings",
                bead.address,
                if crossings[0].entering { "entering" } else { "exiting" }
            )));
        }
        let letter = bead.address.first().unwrap();
        for cr in crossings {
            events.push(Event {
                param: cr.param,
                point: cr.point,
                letter,
                entering: cr.entering,
            });
        }
    }
    events.sort_by(|x, y| x.param.partial_cmp(&y.param).unwrap());

    // disjoint beads force strict alternation: enter j, exit j, enter j', ...
    for e in 0..events.len() {
        let cur = &events[e];
        let nxt = &events[(e + 1) % events.len()];
        let ok = if cur.entering {
            !nxt.entering && nxt.letter == cur.letter
        } else {
            nxt.entering
        };
        if !ok {
            return Err(NecklaceError::ConstructionFault(format!(
                "crossing events out of order near parameter {}",
                nxt.param
            )));
        }
    }

    let params = thread.params();
    let npts = thread.len();
    let mut pieces = Vec::with_capacity(2 * k);
    for e in 0..events.len() {
        let cur = &events[e];
        let next = &events[(e + 1) % events.len()];
        let mut points = vec![cur.point.clone()];
        // thread vertices with parameter strictly inside (cur, next), cyclically
        let mut idx = match params.binary_search_by(|p| p.partial_cmp(&cur.param).unwrap()) {
            Ok(i) => i + 1,
            Err(i) => i,
        };
        loop {
            let wrapped = idx % npts;
            let p = params[wrapped];
            let inside = if cur.param < next.param {
                p > cur.param && p < next.param
            } else {
                p > cur.param || p < next.param
            };
            if !inside {
                break;
            }
            points.push(thread.points()[wrapped].clone());
            idx += 1;
            if idx > 2 * npts {
                break; // full loop safety stop
            }
        }
        points.push(next.point.clone());
        pieces.push(BasePiece {
            arc: if cur.entering { Some(cur.letter) } else { None },
            points,
        });
    }
    Ok(pieces)
}

/// A piece of the working curve: a base piece traversed forward or
/// backward, mapped by the inversion chain of `word` (first letter
/// outermost).
#[derive(Debug, Clone)]
struct SymPiece {
    base: usize,
    flip: bool,
    word: Word,
}

/// One materialized piece of a stage-m knot.
#[derive(Debug, Clone)]
pub struct PieceInfo {
    /// inversion chain applied to the underlying thread piece
    pub word: Word,
    /// for in-bead arcs, the address of the bead the piece crosses
    pub bead: Option<Word>,
    /// vertex range in the assembled polyline
    pub start: usize,
    pub len: usize,
}

/// A closed polyline approximating the stage-m knot.
#[derive(Debug, Clone)]
pub struct KnotApprox {
    pub vertices: Vec<Vec<f64>>,
    pub closed: bool,
    pub pieces: Vec<PieceInfo>,
    /// largest junction mismatch swallowed while stitching
    pub max_stitch_gap: f64,
}

fn chain_point(word: &Word, gens: &[Sphere], p: &[f64]) -> Result<Vec<f64>, NecklaceError> {
    let mut cur = p.to_vec();
    for &l in word.letters().iter().rev() {
        let s = &gens[(l - 1) as usize];
        let d2 = vm::dist_sq(&cur, s.center());
        if d2 == 0.0 {
            return Err(NecklaceError::ConstructionFault(
                "thread point coincides with an inversion center".into(),
            ));
        }
        let f = s.radius() * s.radius() / d2;
        cur = s
            .center()
            .iter()
            .zip(&cur)
            .map(|(c, x)| c + f * (x - c))
            .collect();
    }
    Ok(cur)
}

/// Build the stage-`depth` knot as a closed polyline.
///
/// The curve is the union of the images of the free thread arcs under all
/// inversion chains of length at most `depth`, plus the images of the
/// original in-bead arcs inside the deepest beads. Crossing points are
/// matched by address and thread parameter; each piece keeps the inverted
/// image's own boundary crossing points, so junction mismatches stay at
/// floating-point scale and are reported in `max_stitch_gap`.
pub fn knot_approx(
    neck: &Necklace,
    depth: usize,
    tol: f64,
) -> Result<KnotApprox, NecklaceError> {
    if neck.stage() != 0 {
        return Err(NecklaceError::WrongStage {
            expected: 0,
            got: neck.stage(),
        });
    }
    let thread = neck.thread().ok_or(NecklaceError::ThreadRequired)?;
    if thread.dim() != 3 {
        return Err(NecklaceError::ThreadRequired);
    }

    let base = base_pieces(neck, tol)?;
    let m = base.len();
    let mut pieces: Vec<SymPiece> = (0..m)
        .map(|i| SymPiece {
            base: i,
            flip: false,
            word: Word::empty(),
        })
        .collect();

    for _stage in 1..=depth {
        let mut next = Vec::with_capacity(pieces.len() + pieces.len() * (m - 1));
        for piece in &pieces {
            match base[piece.base].arc {
                None => next.push(piece.clone()),
                Some(j) => {
                    // replace the arc by the image of the complementary
                    // thread; the traversal direction is fixed by which
                    // endpoint the stored arc starts at
                    let word = piece
                        .word
                        .child(j)
                        .expect("arc letter never repeats the chain tail");
                    if piece.flip {
                        for off in 1..m {
                            next.push(SymPiece {
                                base: (piece.base + off) % m,
                                flip: false,
                                word: word.clone(),
                            });
                        }
                    } else {
                        for off in (1..m).rev() {
                            next.push(SymPiece {
                                base: (piece.base + off) % m,
                                flip: true,
                                word: word.clone(),
                            });
                        }
                    }
                }
            }
        }
        pieces = next;
    }

    let gens = neck.generators();
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut infos: Vec<PieceInfo> = Vec::with_capacity(pieces.len());
    let mut max_stitch_gap = 0.0f64;

    for piece in &pieces {
        let bp = &base[piece.base];
        debug_assert_eq!(piece.flip, piece.word.len() % 2 == 1);
        let start = vertices.len();
        let mut first_of_piece = true;
        let index_iter: Box<dyn Iterator<Item = usize>> = if piece.flip {
            Box::new((0..bp.points.len()).rev())
        } else {
            Box::new(0..bp.points.len())
        };
        for i in index_iter {
            let img = chain_point(&piece.word, gens, &bp.points[i])?;
            if first_of_piece {
                if let Some(prev) = vertices.last() {
                    max_stitch_gap = max_stitch_gap.max(vm::dist(prev, &img));
                }
                first_of_piece = false;
            }
            match vertices.last() {
                Some(prev) if vm::dist(prev, &img) < DEDUPE_EPS => {}
                _ => vertices.push(img),
            }
        }
        infos.push(PieceInfo {
            word: piece.word.clone(),
            bead: base[piece.base]
                .arc
                .map(|j| piece.word.child(j).expect("reduced arc address")),
            start,
            len: vertices.len() - start,
        });
    }

    // close up: the walk returns to the first crossing point
    if vertices.len() > 1 {
        let gap = vm::dist(vertices.last().unwrap(), &vertices[0]);
        max_stitch_gap = max_stitch_gap.max(gap);
        if gap < DEDUPE_EPS {
            vertices.pop();
            if let Some(last) = infos.last_mut() {
                last.len = vertices.len() - last.start;
            }
        }
    }

    Ok(KnotApprox {
        vertices,
        closed: true,
        pieces: infos,
        max_stitch_gap,
    })
}

/// Check that no two non-adjacent segments of the polyline come within
/// `clearance` of each other (self-intersection test at sampling
/// resolution). Grid-accelerated, exact for the given clearance.
pub fn polyline_is_simple(vertices: &[Vec<f64>], closed: bool, clearance: f64) -> bool {
    let n = vertices.len();
    if n < 3 {
        return true;
    }
    let nseg = if closed { n } else { n - 1 };
    let seg = |i: usize| -> (&[f64], &[f64]) { (&vertices[i], &vertices[(i + 1) % n]) };

    let max_len = (0..nseg)
        .map(|i| {
            let (a, b) = seg(i);
            vm::dist(a, b)
        })
        .fold(0.0f64, f64::max);
    let cell = (max_len + clearance).max(1e-12);
    let dim = vertices[0].len();

    use std::collections::HashMap;
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let key_of = |p: &[f64]| -> Vec<i64> { p.iter().map(|x| (x / cell).floor() as i64).collect() };
    for i in 0..nseg {
        let (a, b) = seg(i);
        let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
        grid.entry(key_of(&mid)).or_default().push(i);
    }

    let adjacent = |i: usize, j: usize| -> bool {
        if !closed {
            i.abs_diff(j) <= 1
        } else {
            let d = i.abs_diff(j);
            d <= 1 || d == nseg - 1
        }
    };

    for i in 0..nseg {
        let (a0, a1) = seg(i);
        let mid: Vec<f64> = a0.iter().zip(a1).map(|(x, y)| 0.5 * (x + y)).collect();
        let base = key_of(&mid);
        // a segment pair within clearance has midpoints within
        // max_len + clearance, i.e. in neighboring cells
        let mut idx = vec![0usize; dim];
        loop {
            let probe: Vec<i64> = base
                .iter()
                .zip(&idx)
                .map(|(b, &o)| b + o as i64 - 1)
                .collect();
            if let Some(others) = grid.get(&probe) {
                for &j in others {
                    if j <= i || adjacent(i, j) {
                        continue;
                    }
                    let (b0, b1) = seg(j);
                    if vm::segment_segment_dist(a0, a1, b0, b1) < clearance {
                        return false;
                    }
                }
            }
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
    true
}

/// Largest distance from a vertex of `a` to the nearest vertex of `b`.
pub fn directed_vertex_hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .map(|p| {
            b.iter()
                .map(|q| vm::dist_sq(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0f64, f64::max)
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::necklace::Necklace;

    fn sym3() -> Necklace {
        Necklace::symmetric_circle(3, 0.5, 240).unwrap()
    }

    #[test]
    fn crossings_of_symmetric_beads() {
        let neck = sym3();
        let thread = neck.thread().unwrap();
        for bead in neck.beads() {
            let cr = sphere_crossings(thread, &bead.ball.boundary(), 1e-9).unwrap();
            assert_eq!(cr.len(), 2);
            assert_ne!(cr[0].entering, cr[1].entering);
            for c in &cr {
                let d = crate::vecmath::dist(&c.point, bead.ball.center());
                assert!((d - bead.ball.radius()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn depth_zero_returns_the_thread() {
        let neck = sym3();
        let k0 = knot_approx(&neck, 0, 1e-9).unwrap();
        assert!(k0.closed);
        assert_eq!(k0.pieces.len(), 6);
        // every original thread vertex appears
        let thread = neck.thread().unwrap();
        let h = directed_vertex_hausdorff(thread.points(), &k0.vertices);
        assert!(h < 1e-12);
        assert!(k0.max_stitch_gap < 1e-12);
    }

    #[test]
    fn stage_one_structure() {
        let neck = sym3();
        let k1 = knot_approx(&neck, 1, 1e-9).unwrap();
        // 3 free pieces survive, each replaced arc contributes 5 pieces
        assert_eq!(k1.pieces.len(), 3 + 3 * 5);
        assert!(k1.max_stitch_gap < 1e-9, "gap {}", k1.max_stitch_gap);

        // stitch points on the stage-0 bead boundaries: junctions where the
        // inversion chain changes between empty and length one
        let mut stitches = 0;
        let np = k1.pieces.len();
        for i in 0..np {
            let a = &k1.pieces[i];
            let b = &k1.pieces[(i + 1) % np];
            if (a.word.is_empty() && b.word.len() == 1)
                || (a.word.len() == 1 && b.word.is_empty())
            {
                stitches += 1;
            }
        }
        assert_eq!(stitches, 2 * 3);

        // the curve is closed and simple at sampling resolution
        assert!(polyline_is_simple(&k1.vertices, true, 1e-9));
    }

    #[test]
    fn consecutive_stages_agree_outside_beads() {
        let neck = sym3();
        let k1 = knot_approx(&neck, 1, 1e-9).unwrap();
        let k2 = knot_approx(&neck, 2, 1e-9).unwrap();

        // free-piece vertices of stage 1 persist verbatim in stage 2
        use std::collections::HashSet;
        let quantize = |p: &[f64]| -> (i64, i64, i64) {
            (
                (p[0] * 1e12).round() as i64,
                (p[1] * 1e12).round() as i64,
                (p[2] * 1e12).round() as i64,
            )
        };
        let v2: HashSet<_> = k2.vertices.iter().map(|p| quantize(p)).collect();
        for info in k1.pieces.iter().filter(|p| p.bead.is_none()) {
            for v in &k1.vertices[info.start..info.start + info.len] {
                assert!(v2.contains(&quantize(v)));
            }
        }

        // Hausdorff gap bounded by the stage-1 bead diameter
        let s1 = neck.build_stage(1e-9).unwrap();
        let bound = 2.0 * s1.max_radius();
        let h12 = directed_vertex_hausdorff(&k1.vertices, &k2.vertices)
            .max(directed_vertex_hausdorff(&k2.vertices, &k1.vertices));
        assert!(h12 <= bound, "h {h12} vs bound {bound}");
    }

    #[test]
    fn refinement_requested_on_coarse_sampling() {
        // beads centered mid-segment: the coarse polyline dips through the
        // small bead within a single segment, which cannot be resolved
        use crate::conformal::Ball;
        use crate::necklace::ThreadSample;
        let thread = ThreadSample::unit_circle(12);
        let balls: Vec<Ball> = (0..3)
            .map(|j| {
                let c = thread.point_at(1.0 / 24.0 + j as f64 / 3.0);
                Ball::new(c, 0.02).unwrap()
            })
            .collect();
        let neck = Necklace::stage0(Some(thread), balls, 1e-9).unwrap();
        let res = knot_approx(&neck, 1, 1e-9);
        assert!(matches!(res, Err(NecklaceError::RefinementRequired(_))));
    }
}
