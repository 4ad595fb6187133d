//! Shared oracles for the integration suites. Everything here is an
//! independent route: none of these helpers call the implementation paths
//! they are used to check.
#![allow(dead_code)] // each test target uses its own subset


use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic well-spread directions on the unit 2-sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = std::f64::consts::TAU * (i as f64 / golden).fract();
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Least-squares sphere through sample points (3D): solves the linear model
/// `|p|^2 = 2 c . p + (r^2 - |c|^2)` via normal equations, with the data
/// centered for conditioning. Exact for exact sphere samples up to float
/// noise, and independent of any inversion formula.
pub fn fit_sphere(points: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let n = points.len() as f64;
    let mean: Vec<f64> = (0..3)
        .map(|d| points.iter().map(|p| p[d]).sum::<f64>() / n)
        .collect();
    let shifted: Vec<[f64; 3]> = points
        .iter()
        .map(|p| [p[0] - mean[0], p[1] - mean[1], p[2] - mean[2]])
        .collect();

    // unknowns: (cx, cy, cz, t) with t = r^2 - |c|^2 in shifted coordinates
    let mut a = [[0.0f64; 4]; 4];
    let mut b = [0.0f64; 4];
    for p in &shifted {
        let row = [2.0 * p[0], 2.0 * p[1], 2.0 * p[2], 1.0];
        let y = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        for i in 0..4 {
            for j in 0..4 {
                a[i][j] += row[i] * row[j];
            }
            b[i] += row[i] * y;
        }
    }
    // gaussian elimination with partial pivoting
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for j in col..4 {
                a[row][j] -= f * a[col][j];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 4];
    for row in (0..4).rev() {
        let mut s = b[row];
        for j in row + 1..4 {
            s -= a[row][j] * x[j];
        }
        x[row] = s / a[row][row];
    }
    let center_shifted = [x[0], x[1], x[2]];
    let r2 = x[3] + center_shifted.iter().map(|c| c * c).sum::<f64>();
    let center: Vec<f64> = (0..3).map(|d| center_shifted[d] + mean[d]).collect();
    (center, r2.max(0.0).sqrt())
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination over
/// arbitrary-precision integers, so intermediate minors never overflow.
pub fn bareiss_rank(m: Vec<Vec<i128>>) -> usize {
    use num_bigint::BigInt;
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut m: Vec<Vec<BigInt>> = m
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    let zero = BigInt::from(0);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let pivot = (row..rows).find(|&i| m[i][col] != zero);
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for i in row + 1..rows {
            for j in col + 1..cols {
                let num = &m[row][col] * &m[i][j] - &m[i][col] * &m[row][j];
                m[i][j] = num / &prev;
            }
            m[i][col] = zero.clone();
        }
        prev = m[row][col].clone();
        row += 1;
        rank += 1;
    }
    rank
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    // cofactor expansion; only used for tiny minors
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut det = 0i128;
    for (j, &head) in m[0].iter().enumerate() {
        if head == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let term = head.checked_mul(det_i128(&minor)).expect("minor overflow");
        det = if j % 2 == 0 { det + term } else { det - term };
    }
    det
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Invariant factors from the gcd of all i-by-i minors: the i-th factor is
/// `d_i / d_{i-1}`. Exponential in the size; meant for small matrices.
pub fn invariant_factors_by_minors(m: &[Vec<i128>]) -> Vec<i128> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let n = rows.min(cols);

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        if k > n {
            return out;
        }
        loop {
            out.push(idx.clone());
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] != i + n - k {
                    break;
                }
                if i == 0 {
                    return out;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    let mut factors = Vec::new();
    let mut prev = 1i128;
    for size in 1..=n {
        let mut g = 0i128;
        for rsel in combinations(rows, size) {
            for csel in combinations(cols, size) {
                let sub: Vec<Vec<i128>> = rsel
                    .iter()
                    .map(|&r| csel.iter().map(|&c| m[r][c]).collect())
                    .collect();
                g = gcd_i128(g, det_i128(&sub));
                if g == 1 {
                    break;
                }
            }
            if g == 1 {
                break;
            }
        }
        if g == 0 {
            break; // all larger minors vanish
        }
        factors.push(g / prev);
        prev = g;
    }
    factors
}

/// Grid box-counting dimension of a point cloud: occupied-cell counts over
/// a geometric ladder of box sizes, least-squares slope of log N against
/// log (1/eps).
pub fn box_counting_dimension(points: &[Vec<f64>], eps_max: f64, eps_min: f64, steps: usize) -> f64 {
    use std::collections::HashSet;
    let mut xs = Vec::with_capacity(steps);
    let mut ys = Vec::with_capacity(steps);
    for s in 0..steps {
        let t = s as f64 / (steps - 1) as f64;
        let eps = eps_max * (eps_min / eps_max).powf(t);
        let cells: HashSet<Vec<i64>> = points
            .iter()
            .map(|p| p.iter().map(|x| (x / eps).floor() as i64).collect())
            .collect();
        xs.push((1.0 / eps).ln());
        ys.push((cells.len() as f64).ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Symbolic replacement simulator for the summand census: rewrites the
/// necklace term tree stage by stage. Each unreplaced arc carries its bead
/// address and the orientation of the copy it lives in; replacing it
/// appends one prime summand with flipped orientation and spawns the child
/// arcs of the new copy. Counts emerge from the rewriting, not from a
/// closed formula.
pub fn census_by_replacement(k: u32, m: u32) -> (u64, u64, u64) {
    struct Arc {
        address: Vec<u32>,
        // orientation of the copy the arc lives in, relative to the
        // original knot; every replacement flips it once
        orientation: bool,
    }
    let mut oriented = 1u64; // the original knot itself
    let mut mirrored = 0u64;
    let mut arcs: Vec<Arc> = (1..=k)
        .map(|j| Arc {
            address: vec![j],
            orientation: true,
        })
        .collect();
    for _stage in 1..=m {
        let mut next = Vec::with_capacity(arcs.len() * (k as usize - 1));
        for arc in arcs {
            let new_orientation = !arc.orientation;
            if new_orientation {
                oriented += 1;
            } else {
                mirrored += 1;
            }
            let last = *arc.address.last().unwrap();
            for r in 1..=k {
                if r != last {
                    let mut address = arc.address.clone();
                    address.push(r);
                    next.push(Arc {
                        address,
                        orientation: new_orientation,
                    });
                }
            }
        }
        arcs = next;
    }
    (oriented + mirrored, oriented, mirrored)
}
