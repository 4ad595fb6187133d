//! Conformal geometry of extended Euclidean d-space.
//!
//! Extended space is modelled as `R^d ∪ {∞}` with `d ≥ 3`. The primitive
//! transformation is the inversion through a round sphere, which swaps the
//! inside and outside of the sphere and fixes it pointwise. Reduced words in
//! the `k` inversion generators name group elements and, at the same time,
//! nested beads and limit points, so the word type here doubles as the
//! address type used everywhere else in the crate.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::vecmath as vm;

/// Spheres and balls with radius below this are rejected at construction.
pub const MIN_RADIUS: f64 = 1e-12;

/// Default tolerance for geometric predicates (point-in-ball, disjointness).
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("radius {0} is degenerate (must be finite and > {MIN_RADIUS:e})")]
    DegenerateRadius(f64),
    #[error("ambient dimension must be at least 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("inversion center lies inside or on the ball (|a-c|^2 - rho^2 = {delta:e})")]
    CenterInsideBall { delta: f64 },
    #[error("letter {letter} out of range 1..={k}")]
    LetterOutOfRange { letter: u32, k: u32 },
    #[error("word index {letter} exceeds the {gens} available generators")]
    MissingGenerator { letter: u32, gens: usize },
    #[error("point within numerical reach of the limit set after {steps} inversions (address prefix {prefix})")]
    LimitProximity { steps: usize, prefix: Word },
    #[error("cannot parse word from {0:?}")]
    WordParse(String),
}

/// A point of extended Euclidean space: finite coordinates or the point at
/// infinity of the one-point compactification. The infinity variant carries
/// the ambient dimension so that `dim` stays total.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtPoint {
    Finite(Vec<f64>),
    Infinity(usize),
}

impl ExtPoint {
    pub fn finite(coords: Vec<f64>) -> Self {
        ExtPoint::Finite(coords)
    }

    pub fn infinity(dim: usize) -> Self {
        ExtPoint::Infinity(dim)
    }

    pub fn dim(&self) -> usize {
        match self {
            ExtPoint::Finite(c) => c.len(),
            ExtPoint::Infinity(d) => *d,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtPoint::Infinity(_))
    }

    pub fn as_finite(&self) -> Option<&[f64]> {
        match self {
            ExtPoint::Finite(c) => Some(c),
            ExtPoint::Infinity(_) => None,
        }
    }

    /// Euclidean distance, infinite if exactly one point is at infinity and
    /// zero if both are.
    pub fn dist(&self, other: &ExtPoint) -> f64 {
        match (self, other) {
            (ExtPoint::Finite(a), ExtPoint::Finite(b)) => vm::dist(a, b),
            (ExtPoint::Infinity(_), ExtPoint::Infinity(_)) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

/// A round sphere of codimension one: the fixed-point set of an inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct Sphere {
    center: Vec<f64>,
    radius: f64,
}

/// A round closed ball; the beads of every necklace are balls.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Vec<f64>,
    radius: f64,
}

fn check_round(center: &[f64], radius: f64) -> Result<(), GeomError> {
    if center.len() < 3 {
        return Err(GeomError::DimensionTooSmall(center.len()));
    }
    if !radius.is_finite() || radius < MIN_RADIUS {
        return Err(GeomError::DegenerateRadius(radius));
    }
    Ok(())
}

impl Sphere {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self, GeomError> {
        check_round(&center, radius)?;
        Ok(Sphere { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// The closed ball bounded by this sphere.
    pub fn ball(&self) -> Ball {
        Ball {
            center: self.center.clone(),
            radius: self.radius,
        }
    }

    /// Strict interior test with tolerance: distance < radius - tol.
    /// The point at infinity is never inside (beads stay bounded).
    pub fn contains_inside(&self, x: &ExtPoint, tol: f64) -> bool {
        match x.as_finite() {
            None => false,
            Some(p) => vm::dist(p, &self.center) < self.radius - tol,
        }
    }
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self, GeomError> {
        check_round(&center, radius)?;
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn boundary(&self) -> Sphere {
        Sphere {
            center: self.center.clone(),
            radius: self.radius,
        }
    }

    /// Gap between two balls: positive iff disjoint with that margin.
    pub fn gap(&self, other: &Ball) -> f64 {
        vm::dist(&self.center, &other.center) - self.radius - other.radius
    }

    /// Margin by which `inner` sits inside `self` (positive iff strictly inside).
    pub fn containment_margin(&self, inner: &Ball) -> f64 {
        self.radius - vm::dist(&self.center, &inner.center) - inner.radius
    }

    pub fn contains_point(&self, p: &[f64], tol: f64) -> bool {
        vm::dist(p, &self.center) <= self.radius + tol
    }
}

/// Inversion of a point through a sphere.
///
/// Finite `x != center` maps to `c + r^2 (x - c)/|x - c|^2`; the center maps
/// to infinity and infinity to the center. The map is an involution fixing
/// the sphere pointwise.
pub fn invert_point(s: &Sphere, x: &ExtPoint) -> ExtPoint {
    match x {
        ExtPoint::Infinity(_) => ExtPoint::Finite(s.center.clone()),
        ExtPoint::Finite(p) => {
            debug_assert_eq!(p.len(), s.dim());
            let d2 = vm::dist_sq(p, &s.center);
            if d2 == 0.0 {
                return ExtPoint::Infinity(s.dim());
            }
            let f = s.radius * s.radius / d2;
            ExtPoint::Finite(
                s.center
                    .iter()
                    .zip(p)
                    .map(|(c, xi)| c + f * (xi - c))
                    .collect(),
            )
        }
    }
}

/// Image of a round ball under inversion, as a round ball.
///
/// Requires the inversion center strictly outside the ball, otherwise the
/// image is unbounded. With `a` the ball center, `rho` its radius, `c` the
/// sphere center, `r` its radius and `delta = |a-c|^2 - rho^2`:
/// `center' = c + r^2 (a-c)/delta`, `radius' = r^2 rho / delta`.
pub fn invert_ball(s: &Sphere, b: &Ball) -> Result<Ball, GeomError> {
    debug_assert_eq!(s.dim(), b.dim());
    let delta = vm::dist_sq(&b.center, &s.center) - b.radius * b.radius;
    if delta <= 0.0 {
        return Err(GeomError::CenterInsideBall { delta });
    }
    let f = s.radius * s.radius / delta;
    let center = s
        .center
        .iter()
        .zip(&b.center)
        .map(|(c, a)| c + f * (a - c))
        .collect();
    Ball::new(center, f * b.radius)
}

/// A reduced word in the `k` inversion generators.
///
/// Letters are 1-based generator indices; since every generator is an
/// involution, "reduced" means no two adjacent letters are equal. Words name
/// group elements and serve as addresses of nested beads: the lexicographic
/// order on letter sequences (derived `Ord`) is the enumeration order used
/// throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<u32>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    /// Reduce a raw letter sequence by cancelling adjacent equal letters
    /// until none remain; the result represents the same group element.
    pub fn reduce(raw: &[u32], k: u32) -> Result<Self, GeomError> {
        let mut letters: Vec<u32> = Vec::with_capacity(raw.len());
        for &l in raw {
            if l == 0 || l > k {
                return Err(GeomError::LetterOutOfRange { letter: l, k });
            }
            if letters.last() == Some(&l) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Ok(Word { letters })
    }

    /// Construct from letters that are already adjacent-distinct.
    pub fn from_reduced(letters: Vec<u32>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1]));
        debug_assert!(letters.iter().all(|&l| l > 0));
        Word { letters }
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<u32> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<u32> {
        self.letters.last().copied()
    }

    /// Append a letter; `None` if it would cancel with the last one.
    pub fn child(&self, letter: u32) -> Option<Word> {
        if self.letters.last() == Some(&letter) {
            return None;
        }
        let mut letters = self.letters.clone();
        letters.push(letter);
        Some(Word { letters })
    }

    /// Drop the last letter (the parent address of a bead).
    pub fn parent(&self) -> Option<Word> {
        if self.letters.is_empty() {
            return None;
        }
        Some(Word {
            letters: self.letters[..self.letters.len() - 1].to_vec(),
        })
    }

    pub fn concat(&self, other: &Word, k: u32) -> Result<Word, GeomError> {
        let mut raw = self.letters.clone();
        raw.extend_from_slice(&other.letters);
        Word::reduce(&raw, k)
    }

    /// Relabel letters through a permutation given 1-based:
    /// letter `i` becomes `sigma[i-1]`.
    pub fn relabel(&self, sigma: &[u32]) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|&l| sigma[(l - 1) as usize])
                .collect(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl FromStr for Word {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for part in s.split('.') {
            let l: u32 = part
                .parse()
                .map_err(|_| GeomError::WordParse(s.to_string()))?;
            if l == 0 {
                return Err(GeomError::WordParse(s.to_string()));
            }
            letters.push(l);
        }
        if letters.windows(2).any(|w| w[0] == w[1]) {
            return Err(GeomError::WordParse(s.to_string()));
        }
        Ok(Word { letters })
    }
}

/// Values that inversions act on.
pub trait Invert: Sized {
    fn invert_in(&self, s: &Sphere) -> Result<Self, GeomError>;
}

impl Invert for ExtPoint {
    fn invert_in(&self, s: &Sphere) -> Result<Self, GeomError> {
        Ok(invert_point(s, self))
    }
}

impl Invert for Ball {
    fn invert_in(&self, s: &Sphere) -> Result<Self, GeomError> {
        invert_ball(s, self)
    }
}

/// Apply the group element named by `w` to `x`.
///
/// The composition convention is fixed once and for all: the word read left
/// to right is a composite of inversions, so the first letter acts last
/// (outermost). Concretely `apply_word((1,2), x) = I_1(I_2(x))`, and the
/// bead with address `(j_1, ..., j_{m+1})` is
/// `apply_word((j_1, ..., j_m), B_{j_{m+1}})`. The empty word is the
/// identity.
pub fn apply_word<T: Invert + Clone>(w: &Word, gens: &[Sphere], x: &T) -> Result<T, GeomError> {
    let mut current = x.clone();
    for &letter in w.letters().iter().rev() {
        let idx = (letter - 1) as usize;
        if idx >= gens.len() {
            return Err(GeomError::MissingGenerator {
                letter,
                gens: gens.len(),
            });
        }
        current = current.invert_in(&gens[idx])?;
    }
    Ok(current)
}

/// Reduce a point to the fundamental domain `D` (the complement of the open
/// balls bounded by the generator spheres).
///
/// Repeatedly applies the inversion whose open ball contains the current
/// point. Returns the word applied, in application order, and the final
/// point in `D`; with the fixed convention `apply_word(word, gens, final)`
/// recovers the input. The word is automatically reduced because each
/// inversion moves the point out of the ball just used. If `max_iter`
/// inversions do not reach `D`, the point is within numerical reach of the
/// limit set and the partial word (an address prefix) is reported.
pub fn reduce_to_domain(
    gens: &[Sphere],
    x: &ExtPoint,
    max_iter: usize,
    tol: f64,
) -> Result<(Word, ExtPoint), GeomError> {
    let mut current = x.clone();
    let mut letters: Vec<u32> = Vec::new();
    loop {
        let inside = gens
            .iter()
            .position(|s| s.contains_inside(&current, tol));
        match inside {
            None => {
                return Ok((Word::from_reduced(letters), current));
            }
            Some(j) => {
                if letters.len() >= max_iter {
                    return Err(GeomError::LimitProximity {
                        steps: letters.len(),
                        prefix: Word::from_reduced(letters),
                    });
                }
                current = invert_point(&gens[j], &current);
                let letter = (j + 1) as u32;
                debug_assert_ne!(letters.last(), Some(&letter));
                letters.push(letter);
            }
        }
    }
}
