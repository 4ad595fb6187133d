//! Combinatorial equivalence transport between necklaces.
//!
//! An equivalence of necklaces restricts, stage by stage, to a relabeling of
//! bead addresses. Given a bijection of the stage-0 beads this verifies its
//! combinatorial shadow: the bijection must respect the cyclic order in
//! which the thread visits the beads (up to rotation and reflection, since
//! an ambient homeomorphism may reverse the thread), and the letterwise
//! relabeling must carry the nesting tree of one necklace onto the other at
//! every checked depth.

use std::collections::HashMap;

use crate::conformal::Word;

use super::{Necklace, NecklaceError};

/// The address-level shadow of an ambient equivalence.
#[derive(Debug, Clone)]
pub struct EquivalenceCertificate {
    /// letterwise relabeling: letter `i` maps to `letter_map[i-1]`
    pub letter_map: Vec<u32>,
    /// nesting verified for all addresses of length <= depth + 1
    pub depth: usize,
    pub orientation_reversed: bool,
    pub rotation: usize,
}

fn bead_order(neck: &Necklace) -> Vec<usize> {
    match neck.thread() {
        None => (0..neck.k()).collect(),
        Some(thread) => {
            let mut order: Vec<(f64, usize)> = neck
                .beads()
                .iter()
                .enumerate()
                .map(|(i, b)| (thread.nearest_param(b.ball.center()), i))
                .collect();
            order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            order.into_iter().map(|(_, i)| i).collect()
        }
    }
}

/// Match `seq` against rotations of `target`; returns the offset, or the
/// position of the first mismatch of the best attempt.
fn cyclic_match(seq: &[usize], target: &[usize]) -> Result<usize, usize> {
    let n = seq.len();
    let start = match target.iter().position(|&x| x == seq[0]) {
        Some(s) => s,
        None => return Err(0),
    };
    for i in 1..n {
        if target[(start + i) % n] != seq[i] {
            return Err(i);
        }
    }
    Ok(start)
}

/// Verify that a stage-0 bead bijection is the shadow of an equivalence and
/// return the induced address relabeling. `bead_bijection[i]` is the 0-based
/// index in `b` of the image of bead `i` of `a`.
pub fn transport_equivalence(
    a: &Necklace,
    b: &Necklace,
    bead_bijection: &[usize],
    depth: usize,
    tol: f64,
) -> Result<EquivalenceCertificate, NecklaceError> {
    if a.stage() != 0 {
        return Err(NecklaceError::WrongStage {
            expected: 0,
            got: a.stage(),
        });
    }
    if b.stage() != 0 {
        return Err(NecklaceError::WrongStage {
            expected: 0,
            got: b.stage(),
        });
    }
    let k = a.k();
    if b.k() != k {
        return Err(NecklaceError::BeadCountMismatch(k, b.k()));
    }
    let mut seen = vec![false; k];
    if bead_bijection.len() != k
        || bead_bijection.iter().any(|&i| {
            if i >= k || seen[i] {
                true
            } else {
                seen[i] = true;
                false
            }
        })
    {
        return Err(NecklaceError::BadBijection(k));
    }

    // cyclic order along the threads, up to rotation and reflection
    let order_a = bead_order(a);
    let order_b = bead_order(b);
    let mapped: Vec<usize> = order_a.iter().map(|&i| bead_bijection[i]).collect();
    let reversed: Vec<usize> = {
        let mut r = order_b.clone();
        r.reverse();
        r
    };
    let (orientation_reversed, rotation) = match cyclic_match(&mapped, &order_b) {
        Ok(rot) => (false, rot),
        Err(fwd_fail) => match cyclic_match(&mapped, &reversed) {
            Ok(rot) => (true, rot),
            Err(_) => {
                let bead = order_a[fwd_fail];
                return Err(NecklaceError::OrderMismatch(Word::from_reduced(vec![
                    (bead + 1) as u32,
                ])));
            }
        },
    };

    let sigma: Vec<u32> = bead_bijection.iter().map(|&i| (i + 1) as u32).collect();

    // nesting trees: relabeled addresses must exist in b and both trees must
    // nest with positive margin
    let mut balls_b = HashMap::new();
    for bead in b.enumerate_beads(depth) {
        let bead = bead?;
        balls_b.insert(bead.address.clone(), bead.ball);
    }
    for bead in a.enumerate_beads(depth) {
        let bead = bead?;
        let image_addr = bead.address.relabel(&sigma);
        let image = balls_b
            .get(&image_addr)
            .ok_or_else(|| NecklaceError::OrderMismatch(bead.address.clone()))?;
        if let Some(parent_addr) = bead.address.parent().filter(|p| !p.is_empty()) {
            let image_parent = balls_b
                .get(&parent_addr.relabel(&sigma))
                .expect("parents enumerate before children");
            let margin = image_parent.containment_margin(image);
            if margin <= tol {
                return Err(NecklaceError::NestingViolation {
                    address: image_addr,
                    margin,
                });
            }
        }
    }

    Ok(EquivalenceCertificate {
        letter_map: sigma,
        depth,
        orientation_reversed,
        rotation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::Ball;
    use crate::necklace::{Necklace, ThreadSample};

    fn rotated_sym3(offset: usize) -> Necklace {
        // same geometry as the symmetric configuration, bead list cycled
        let thread = ThreadSample::unit_circle(240);
        let balls: Vec<Ball> = (0..3)
            .map(|j| {
                let a = std::f64::consts::TAU * ((j + offset) % 3) as f64 / 3.0;
                Ball::new(vec![a.cos(), a.sin(), 0.0], 0.5).unwrap()
            })
            .collect();
        Necklace::stage0(Some(thread), balls, 1e-9).unwrap()
    }

    #[test]
    fn identity_is_accepted() {
        let neck = Necklace::symmetric_circle(3, 0.5, 240).unwrap();
        let cert = transport_equivalence(&neck, &neck, &[0, 1, 2], 4, 1e-12).unwrap();
        assert_eq!(cert.letter_map, vec![1, 2, 3]);
        assert!(!cert.orientation_reversed);
    }

    #[test]
    fn rotation_by_120_degrees_gives_cyclic_shift() {
        let a = Necklace::symmetric_circle(3, 0.5, 240).unwrap();
        let b = rotated_sym3(1);
        // bead j of a sits where bead j-1 of b sits: a's bead 0 at angle 0
        // is b's bead 2 (since b's bead j is at angle (j+1)*120)
        let cert = transport_equivalence(&a, &b, &[2, 0, 1], 4, 1e-12).unwrap();
        assert_eq!(cert.letter_map, vec![3, 1, 2]);
        assert!(!cert.orientation_reversed);
    }

    #[test]
    fn order_violation_is_refused() {
        // k = 4: swapping two adjacent beads is not a rotation/reflection
        let a = Necklace::symmetric_circle(4, 0.4, 240).unwrap();
        let res = transport_equivalence(&a, &a, &[1, 0, 2, 3], 3, 1e-12);
        assert!(matches!(res, Err(NecklaceError::OrderMismatch(_))));
    }

    #[test]
    fn reflection_is_orientation_consistent() {
        let a = Necklace::symmetric_circle(4, 0.4, 240).unwrap();
        // reversal of the cyclic order: bead j -> bead (4 - j) mod 4
        let cert = transport_equivalence(&a, &a, &[0, 3, 2, 1], 3, 1e-12).unwrap();
        assert!(cert.orientation_reversed);
    }

    #[test]
    fn bad_bijection_is_rejected() {
        let a = Necklace::symmetric_circle(3, 0.5, 240).unwrap();
        assert!(matches!(
            transport_equivalence(&a, &a, &[0, 0, 1], 2, 1e-12),
            Err(NecklaceError::BadBijection(3))
        ));
    }
}
