//! Symbolic algebra of the construction: group presentations with a
//! distinguished meridian, free products amalgamated over the meridian,
//! abelianization through integer Smith normal form, the stage-by-stage
//! summand census, and fiber-homology bookkeeping.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("presentation uses undeclared generator index {0}")]
    UndeclaredGenerator(i32),
    #[error("generator names must be unique, nonempty and free of '^'")]
    BadGeneratorNames,
    #[error("amalgamated sum needs at least one copy")]
    ZeroCopies,
    #[error("amalgamated sum needs a nonempty meridian")]
    EmptyMeridian,
    #[error("integer overflow during Smith normal form")]
    Overflow,
    #[error("census requires k >= 3, got {0}")]
    KTooSmall(u64),
    #[error("census counts overflow u64 at stage {0}")]
    CensusOverflow(u32),
    #[error("invariant factors must exceed 1 and each divide the next")]
    BadTorsionChain,
    #[error("the local-group hypothesis needs at least 2 generators, got {0}")]
    HypothesisViolation(usize),
    #[error("cannot parse presentation: {0}")]
    Parse(String),
}

/// A word over the generators of a presentation and their inverses, encoded
/// by signed 1-based indices: `+i` is the generator `i`, `-i` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord(pub Vec<i32>);

impl GroupWord {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Cancel adjacent `x x^-1` pairs until none remain.
    pub fn free_reduce(&self) -> GroupWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord(out)
    }

    /// Free reduction followed by trimming inverse pairs from both ends.
    pub fn cyclic_reduce(&self) -> GroupWord {
        let mut w = self.free_reduce().0;
        while w.len() >= 2 && w.first() == w.last().map(|&l| -l).as_ref() {
            w.pop();
            w.remove(0);
        }
        GroupWord(w)
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        GroupWord(w).free_reduce()
    }

    /// Exponent sum of each of the `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<i128> {
        let mut sums = vec![0i128; n];
        for &l in &self.0 {
            let idx = (l.unsigned_abs() as usize) - 1;
            sums[idx] += if l > 0 { 1 } else { -1 };
        }
        sums
    }

    /// Shift every index by `offset` (renaming into a disjoint copy).
    fn shift(&self, offset: i32) -> GroupWord {
        GroupWord(
            self.0
                .iter()
                .map(|&l| if l > 0 { l + offset } else { l - offset })
                .collect(),
        )
    }

    fn check_indices(&self, n: usize) -> Result<(), AlgebraError> {
        for &l in &self.0 {
            if l == 0 || l.unsigned_abs() as usize > n {
                return Err(AlgebraError::UndeclaredGenerator(l));
            }
        }
        Ok(())
    }
}

/// A finite group presentation with a distinguished meridian word. Relators
/// are stored cyclically reduced, the meridian freely reduced.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<GroupWord>,
    meridian: GroupWord,
}

impl Presentation {
    pub fn new(
        names: Vec<String>,
        relators: Vec<GroupWord>,
        meridian: GroupWord,
    ) -> Result<Self, AlgebraError> {
        if names.is_empty()
            || names
                .iter()
                .any(|n| n.is_empty() || n.contains('^') || n.contains(char::is_whitespace))
        {
            return Err(AlgebraError::BadGeneratorNames);
        }
        let mut seen = std::collections::HashSet::new();
        if !names.iter().all(|n| seen.insert(n.clone())) {
            return Err(AlgebraError::BadGeneratorNames);
        }
        let n = names.len();
        for r in &relators {
            r.check_indices(n)?;
        }
        meridian.check_indices(n)?;
        Ok(Presentation {
            names,
            relators: relators.iter().map(|r| r.cyclic_reduce()).collect(),
            meridian: meridian.free_reduce(),
        })
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[GroupWord] {
        &self.relators
    }

    pub fn meridian(&self) -> &GroupWord {
        &self.meridian
    }

    /// The free group of rank `n` with meridian the first generator.
    pub fn free(n: usize) -> Self {
        let names = (0..n).map(|i| format!("g{}", i + 1)).collect();
        Presentation::new(names, Vec::new(), GroupWord(vec![1])).expect("valid free presentation")
    }

    /// Trefoil knot group `<a, b | a b a b^-1 a^-1 b^-1>` with meridian `a`.
    pub fn trefoil() -> Self {
        Presentation::new(
            vec!["a".into(), "b".into()],
            vec![GroupWord(vec![1, 2, 1, -2, -1, -2])],
            GroupWord(vec![1]),
        )
        .expect("valid trefoil presentation")
    }

    /// Figure-eight knot group `<a, b | a b a^-1 b^-1 a b^-1 a^-1 b a b^-1>`
    /// (two-bridge normal form) with meridian `a`.
    pub fn figure_eight() -> Self {
        Presentation::new(
            vec!["a".into(), "b".into()],
            vec![GroupWord(vec![1, 2, -1, -2, 1, -2, -1, 2, 1, -2])],
            GroupWord(vec![1]),
        )
        .expect("valid figure-eight presentation")
    }

    /// Render a word of this presentation in letter-exponent notation.
    pub fn word_to_string(&self, w: &GroupWord) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < w.0.len() {
            let l = w.0[i];
            let mut run = 1;
            while i + run < w.0.len() && w.0[i + run] == l {
                run += 1;
            }
            let name = &self.names[(l.unsigned_abs() as usize) - 1];
            let exp = if l > 0 { run as i64 } else { -(run as i64) };
            if exp == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i += run;
        }
        parts.join(" ")
    }

    fn parse_word(&self, line: &str) -> Result<GroupWord, AlgebraError> {
        let index: HashMap<&str, i32> = self
            .names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), (i + 1) as i32))
            .collect();
        let mut letters = Vec::new();
        for token in line.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                None => (token, 1i64),
                Some((n, e)) => (
                    n,
                    e.parse::<i64>()
                        .map_err(|_| AlgebraError::Parse(format!("bad exponent in {token:?}")))?,
                ),
            };
            let &idx = index
                .get(name)
                .ok_or_else(|| AlgebraError::Parse(format!("unknown generator {name:?}")))?;
            let letter = if exp >= 0 { idx } else { -idx };
            for _ in 0..exp.unsigned_abs() {
                letters.push(letter);
            }
        }
        Ok(GroupWord(letters))
    }

    /// Emit the text format: one generator list line, one relator per line
    /// in letter-exponent notation, then the meridian line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.names.join(" "));
        out.push('\n');
        for r in &self.relators {
            out.push_str(&self.word_to_string(r));
            out.push('\n');
        }
        out.push_str(&self.word_to_string(&self.meridian));
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<Self, AlgebraError> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        if lines.len() < 2 {
            return Err(AlgebraError::Parse(
                "need a generator line and a meridian line".into(),
            ));
        }
        let names: Vec<String> = lines[0].split_whitespace().map(String::from).collect();
        let shell = Presentation::new(names.clone(), Vec::new(), GroupWord(vec![1]))?;
        let relators = lines[1..lines.len() - 1]
            .iter()
            .map(|l| shell.parse_word(l))
            .collect::<Result<Vec<_>, _>>()?;
        let meridian = shell.parse_word(lines[lines.len() - 1])?;
        Presentation::new(names, relators, meridian)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.word_to_string(r)).collect();
        write!(
            f,
            "< {} | {} >  meridian {}",
            self.names.join(", "),
            rels.join(", "),
            self.word_to_string(&self.meridian)
        )
    }
}

/// Free product of `copies` renamed copies of `g`, amalgamated over the
/// meridian: `copies - 1` extra relators identify the meridians of
/// consecutive copies. Generator count is `copies * |gens|`, relator count
/// `copies * |rels| + copies - 1`; the distinguished meridian is copy 1's.
pub fn amalgamated_sum(g: &Presentation, copies: usize) -> Result<Presentation, AlgebraError> {
    if copies == 0 {
        return Err(AlgebraError::ZeroCopies);
    }
    if g.meridian.is_empty() {
        return Err(AlgebraError::EmptyMeridian);
    }
    let n = g.generator_count();
    let mut names = Vec::with_capacity(copies * n);
    let mut relators = Vec::with_capacity(copies * g.relators.len() + copies - 1);
    for c in 0..copies {
        for name in &g.names {
            names.push(format!("{name}_{}", c + 1));
        }
        let offset = (c * n) as i32;
        for r in &g.relators {
            relators.push(r.shift(offset));
        }
    }
    for c in 0..copies - 1 {
        let mu_c = g.meridian.shift((c * n) as i32);
        let mu_next = g.meridian.shift(((c + 1) * n) as i32);
        relators.push(mu_c.concat(&mu_next.inverse()));
    }
    Presentation::new(names, relators, g.meridian.clone())
}

/// Direct-sum data of a finitely generated abelian group, one entry per
/// homology dimension: free rank and invariant torsion factors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbelianDescriptor {
    betti: Vec<u64>,
    torsion: Vec<Vec<u64>>,
}

impl AbelianDescriptor {
    pub fn new(betti: Vec<u64>, torsion: Vec<Vec<u64>>) -> Result<Self, AlgebraError> {
        for chain in &torsion {
            for w in chain.windows(2) {
                if w[1] % w[0] != 0 {
                    return Err(AlgebraError::BadTorsionChain);
                }
            }
            if chain.iter().any(|&f| f <= 1) {
                return Err(AlgebraError::BadTorsionChain);
            }
        }
        let mut d = AbelianDescriptor { betti, torsion };
        let dims = d.betti.len().max(d.torsion.len());
        d.betti.resize(dims, 0);
        d.torsion.resize(dims, Vec::new());
        Ok(d)
    }

    pub fn zero() -> Self {
        AbelianDescriptor::default()
    }

    /// Concentrated in a single dimension.
    pub fn in_dimension(dim: usize, betti: u64, torsion: Vec<u64>) -> Result<Self, AlgebraError> {
        let mut b = vec![0; dim + 1];
        let mut t = vec![Vec::new(); dim + 1];
        b[dim] = betti;
        t[dim] = torsion;
        AbelianDescriptor::new(b, t)
    }

    pub fn betti(&self, dim: usize) -> u64 {
        self.betti.get(dim).copied().unwrap_or(0)
    }

    pub fn torsion(&self, dim: usize) -> &[u64] {
        self.torsion.get(dim).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_dim(&self) -> usize {
        self.betti.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.betti.iter().all(|&b| b == 0) && self.torsion.iter().all(Vec::is_empty)
    }

    /// Dimensions carrying anything at all.
    pub fn nontrivial_dims(&self) -> Vec<usize> {
        (0..self.betti.len())
            .filter(|&d| self.betti[d] > 0 || !self.torsion[d].is_empty())
            .collect()
    }
}

mod snf {
    use super::AlgebraError;

    fn checked_sub_mul(
        target: &mut [i128],
        source: &[i128],
        q: i128,
    ) -> Result<(), AlgebraError> {
        for (t, &s) in target.iter_mut().zip(source) {
            let prod = q.checked_mul(s).ok_or(AlgebraError::Overflow)?;
            *t = t.checked_sub(prod).ok_or(AlgebraError::Overflow)?;
        }
        Ok(())
    }

    /// Quotient minimizing the remainder magnitude.
    fn rounded_div(a: i128, b: i128) -> i128 {
        let q = a / b;
        let r = a - q * b;
        if 2 * r.abs() > b.abs() {
            q + if (r > 0) == (b > 0) { 1 } else { -1 }
        } else {
            q
        }
    }

    /// Diagonal of the Smith normal form (nonnegative, each entry dividing
    /// the next, padded with zeros up to `min(rows, cols)`).
    pub fn smith_diagonal(mut m: Vec<Vec<i128>>) -> Result<Vec<i128>, AlgebraError> {
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let n = rows.min(cols);
        let mut diag = vec![0i128; n];

        'pivot: for k in 0..n {
            loop {
                let mut pivot: Option<(usize, usize)> = None;
                for i in k..rows {
                    for j in k..cols {
                        if m[i][j] != 0
                            && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                        {
                            pivot = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = pivot else { break 'pivot };
                m.swap(k, pi);
                for row in m.iter_mut() {
                    row.swap(k, pj);
                }

                let mut clean = true;
                for i in k + 1..rows {
                    if m[i][k] != 0 {
                        let q = rounded_div(m[i][k], m[k][k]);
                        if q != 0 {
                            let (head, tail) = m.split_at_mut(i);
                            checked_sub_mul(&mut tail[0], &head[k], q)?;
                        }
                        if m[i][k] != 0 {
                            clean = false;
                        }
                    }
                }
                for j in k + 1..cols {
                    if m[k][j] != 0 {
                        let q = rounded_div(m[k][j], m[k][k]);
                        if q != 0 {
                            for row in m.iter_mut() {
                                let prod = q.checked_mul(row[k]).ok_or(AlgebraError::Overflow)?;
                                row[j] = row[j].checked_sub(prod).ok_or(AlgebraError::Overflow)?;
                            }
                        }
                        if m[k][j] != 0 {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    continue;
                }

                // enforce divisibility of the remaining block by the pivot
                let p = m[k][k];
                let mut divisible = true;
                'scan: for i in k + 1..rows {
                    for j in k + 1..cols {
                        if m[i][j] % p != 0 {
                            let (head, tail) = m.split_at_mut(i);
                            checked_sub_mul(&mut head[k], &tail[0], -1)?;
                            divisible = false;
                            break 'scan;
                        }
                    }
                }
                if divisible {
                    diag[k] = p.abs();
                    break;
                }
            }
        }
        debug_assert!(diag
            .windows(2)
            .all(|w| w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0)));
        Ok(diag)
    }
}

pub use snf::smith_diagonal;

/// Abelianize a presentation: Smith normal form of the relator
/// exponent-sum matrix. Returns the dimension-1 part (free rank and
/// invariant factors of H1).
pub fn abelianization(p: &Presentation) -> Result<AbelianDescriptor, AlgebraError> {
    let n = p.generator_count();
    let matrix: Vec<Vec<i128>> = p.relators.iter().map(|r| r.exponent_sums(n)).collect();
    let diag = smith_diagonal(matrix)?;
    let rank = diag.iter().filter(|&&d| d != 0).count();
    let betti = (n - rank) as u64;
    let torsion: Vec<u64> = diag
        .iter()
        .filter(|&&d| d > 1)
        .map(|&d| d as u64)
        .collect();
    AbelianDescriptor::in_dimension(1, betti, torsion)
}

/// Prime-summand bookkeeping for the stage-`m` knot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageCensus {
    pub k: u64,
    pub stage: u32,
    /// beads at this stage: k (k-1)^m
    pub bead_count: u64,
    /// connected-sum factors of the stage knot
    pub summand_total: u64,
    /// factors carrying the original orientation (even inversion count)
    pub oriented: u64,
    /// mirrored factors (odd inversion count)
    pub mirrored: u64,
}

impl StageCensus {
    /// An alternative closed form `k^(m-1) + 1` for the stage-`m` summand
    /// total. It disagrees with the replacement recursion at every stage
    /// `m >= 1`; the recursion is authoritative and this value is exposed
    /// for comparison only.
    pub fn alternative_power_count(&self) -> Option<u64> {
        if self.stage == 0 {
            return None;
        }
        self.k
            .checked_pow(self.stage - 1)
            .and_then(|p| p.checked_add(1))
    }
}

fn bead_count(k: u64, stage: u32) -> Option<u64> {
    (k - 1).checked_pow(stage).and_then(|p| p.checked_mul(k))
}

/// Count the connected-sum factors of the stage-`m` knot: one new summand
/// per bead replaced, so `a_0 = 1` and `a_m = a_{m-1} + k(k-1)^{m-1}`. A
/// summand produced by a composite of `w` inversions is mirrored exactly
/// when `w` is odd.
pub fn summand_census(k: u64, m: u32) -> Result<StageCensus, AlgebraError> {
    if k < 3 {
        return Err(AlgebraError::KTooSmall(k));
    }
    let mut oriented: u64 = 1;
    let mut mirrored: u64 = 0;
    for stage in 1..=m {
        let added = bead_count(k, stage - 1).ok_or(AlgebraError::CensusOverflow(stage))?;
        if stage % 2 == 1 {
            mirrored = mirrored
                .checked_add(added)
                .ok_or(AlgebraError::CensusOverflow(stage))?;
        } else {
            oriented = oriented
                .checked_add(added)
                .ok_or(AlgebraError::CensusOverflow(stage))?;
        }
    }
    Ok(StageCensus {
        k,
        stage: m,
        bead_count: bead_count(k, m).ok_or(AlgebraError::CensusOverflow(m))?,
        summand_total: oriented + mirrored,
        oriented,
        mirrored,
    })
}

/// Homology of the stage-`m` fiber: every betti number and every torsion
/// factor of the base fiber repeats `k(k-1)^m + 1` times.
pub fn fiber_betti(
    fiber: &AbelianDescriptor,
    k: u64,
    m: u32,
) -> Result<AbelianDescriptor, AlgebraError> {
    let copies = bead_count(k, m)
        .and_then(|l| l.checked_add(1))
        .ok_or(AlgebraError::CensusOverflow(m))?;
    let dims = fiber.betti.len();
    let mut betti = Vec::with_capacity(dims);
    let mut torsion = Vec::with_capacity(dims);
    for d in 0..dims {
        betti.push(
            fiber.betti[d]
                .checked_mul(copies)
                .ok_or(AlgebraError::CensusOverflow(m))?,
        );
        let mut t: Vec<u64> = Vec::with_capacity(fiber.torsion[d].len() * copies as usize);
        for &f in &fiber.torsion[d] {
            t.extend(std::iter::repeat_n(f, copies as usize));
        }
        t.sort_unstable();
        torsion.push(t);
    }
    AbelianDescriptor::new(betti, torsion)
}

/// The local fundamental-group report at a wild point: the amalgamated sum
/// over all census summands, the generator-count lower bound it forces, and
/// the growth of that bound across stages.
#[derive(Debug, Clone)]
pub struct LocalGroupReport {
    pub presentation: Presentation,
    pub generator_lower_bound: u64,
    pub growth: Vec<(u32, u64)>,
}

/// Requires a group on at least two generators (fundamental group bigger
/// than the infinite cyclic group of a meridian); a single-generator
/// presentation is refused. The reported bound is not verified: deciding
/// the minimal generator number is undecidable in general.
pub fn wild_local_group(
    g: &Presentation,
    census: &StageCensus,
) -> Result<LocalGroupReport, AlgebraError> {
    if g.generator_count() < 2 {
        return Err(AlgebraError::HypothesisViolation(g.generator_count()));
    }
    let bound = census.summand_total;
    let presentation = amalgamated_sum(g, bound as usize)?;
    let growth = (0..=census.stage)
        .map(|s| summand_census(census.k, s).map(|c| (s, c.summand_total)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LocalGroupReport {
        presentation,
        generator_lower_bound: bound,
        growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_word_reduction() {
        let w = GroupWord(vec![1, 2, -2, -1, 3]).free_reduce();
        assert_eq!(w, GroupWord(vec![3]));
        let w = GroupWord(vec![-2, 1, 3, 2]).cyclic_reduce();
        assert_eq!(w, GroupWord(vec![1, 3]));
    }

    #[test]
    fn abelianization_of_free_group() {
        let f2 = Presentation::free(2);
        let h1 = abelianization(&f2).unwrap();
        assert_eq!(h1.betti(1), 2);
        assert!(h1.torsion(1).is_empty());
    }

    #[test]
    fn abelianization_of_knot_groups_is_z() {
        for p in [Presentation::trefoil(), Presentation::figure_eight()] {
            let h1 = abelianization(&p).unwrap();
            assert_eq!(h1.betti(1), 1);
            assert!(h1.torsion(1).is_empty());
        }
    }

    #[test]
    fn amalgamated_sum_counts() {
        let t = Presentation::trefoil();
        let two = amalgamated_sum(&t, 2).unwrap();
        assert_eq!(two.generator_count(), 4);
        assert_eq!(two.relators().len(), 3);

        let three = amalgamated_sum(&t, 3).unwrap();
        assert_eq!(three.generator_count(), 6);
        assert_eq!(three.relators().len(), 5);

        let one = amalgamated_sum(&t, 1).unwrap();
        assert_eq!(one.generator_count(), 2);
        assert_eq!(one.relators().len(), 1);
    }

    #[test]
    fn amalgamated_sums_of_knot_groups_stay_z() {
        for base in [Presentation::trefoil(), Presentation::figure_eight()] {
            for r in 2..=10 {
                let sum = amalgamated_sum(&base, r).unwrap();
                let h1 = abelianization(&sum).unwrap();
                assert_eq!(h1.betti(1), 1, "betti for r = {r}");
                assert!(h1.torsion(1).is_empty(), "torsion for r = {r}");
            }
        }
    }

    #[test]
    fn smith_diagonal_known_matrix() {
        let m = vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ];
        assert_eq!(smith_diagonal(m).unwrap(), vec![1, 3, 21, 0]);

        let empty: Vec<Vec<i128>> = Vec::new();
        assert_eq!(smith_diagonal(empty).unwrap(), Vec::<i128>::new());

        let torsion = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(smith_diagonal(torsion).unwrap(), vec![2, 2]);
    }

    #[test]
    fn census_examples() {
        let c = summand_census(3, 1).unwrap();
        assert_eq!(
            (c.summand_total, c.oriented, c.mirrored, c.bead_count),
            (4, 1, 3, 6)
        );
        let c = summand_census(3, 2).unwrap();
        assert_eq!(c.summand_total, 10);
        assert_eq!(c.oriented + c.mirrored, c.summand_total);
        let c = summand_census(4, 1).unwrap();
        assert_eq!(c.summand_total, 5);
        assert!(matches!(
            summand_census(2, 1),
            Err(AlgebraError::KTooSmall(2))
        ));
    }

    #[test]
    fn fiber_betti_examples() {
        let punctured_torus = AbelianDescriptor::in_dimension(1, 2, Vec::new()).unwrap();
        let st1 = fiber_betti(&punctured_torus, 3, 1).unwrap();
        assert_eq!(st1.betti(1), 14);

        let st0 = fiber_betti(&punctured_torus, 3, 0).unwrap();
        assert_eq!(st0.betti(1), 8); // multiplied by l_0 + 1 = 4

        let zero = AbelianDescriptor::zero();
        assert!(fiber_betti(&zero, 3, 4).unwrap().is_zero());

        let with_torsion = AbelianDescriptor::in_dimension(2, 1, vec![2, 4]).unwrap();
        let sum = fiber_betti(&with_torsion, 3, 0).unwrap();
        assert_eq!(sum.torsion(2), &[2, 2, 2, 2, 4, 4, 4, 4]);
    }

    #[test]
    fn wild_local_group_hypothesis() {
        let z = Presentation::new(vec!["t".into()], Vec::new(), GroupWord(vec![1])).unwrap();
        let census = summand_census(3, 2).unwrap();
        assert!(matches!(
            wild_local_group(&z, &census),
            Err(AlgebraError::HypothesisViolation(1))
        ));

        let report = wild_local_group(&Presentation::trefoil(), &census).unwrap();
        assert_eq!(report.generator_lower_bound, 10);
        assert_eq!(report.presentation.generator_count(), 20);
        // strictly increasing growth
        for w in report.growth.windows(2) {
            assert!(w[1].1 > w[0].1);
        }
    }

    #[test]
    fn presentation_text_roundtrip() {
        let t = Presentation::trefoil();
        let text = t.to_text();
        assert_eq!(text, "a b\na b a b^-1 a^-1 b^-1\na\n");
        let back = Presentation::from_text(&text).unwrap();
        assert_eq!(back, t);

        let f = Presentation::free(2);
        let back = Presentation::from_text(&f.to_text()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn descriptor_validates_chains() {
        assert!(AbelianDescriptor::in_dimension(1, 0, vec![2, 6]).is_ok());
        assert!(matches!(
            AbelianDescriptor::in_dimension(1, 0, vec![4, 6]),
            Err(AlgebraError::BadTorsionChain)
        ));
        assert!(matches!(
            AbelianDescriptor::in_dimension(1, 0, vec![1]),
            Err(AlgebraError::BadTorsionChain)
        ));
    }
}
