//! Exact small-scale integer linear algebra (n <= 4 throughout the crate).

/// Greatest common divisor of two non-negative integers.
pub(crate) fn gcd_u(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn gcd_i(a: i64, b: i64) -> i64 {
    gcd_u(a.unsigned_abs(), b.unsigned_abs()) as i64
}

pub(crate) fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, &x| gcd_i(acc, x))
}

/// Determinant of a square integer matrix, exact in i128.
pub(crate) fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut acc = 0i128;
            for j in 0..n {
                if m[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                acc += s * m[0][j] * det(&minor);
            }
            acc
        }
    }
}

#[cfg(test)]
pub(crate) fn det_i64(m: &[Vec<i64>]) -> i128 {
    let m128: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    det(&m128)
}

/// Rank of an integer matrix via fraction-free Gaussian elimination.
pub(crate) fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let pivot = (row..nrows).find(|&r| m[r][col] != 0);
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for r in 0..nrows {
            if r != row && m[r][col] != 0 {
                let a = m[row][col];
                let b = m[r][col];
                let g = gcd_i128(a, b);
                let (a, b) = (a / g, b / g);
                for c in 0..ncols {
                    m[r][c] = m[r][c] * a - m[row][c] * b;
                }
            }
        }
        row += 1;
        rank += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A non-zero integer vector orthogonal to all rows, when the rows have rank
/// exactly `ncols - 1`. Returned primitive, sign unnormalized.
pub(crate) fn null_vector(rows: &[Vec<i64>], ncols: usize) -> Option<Vec<i64>> {
    if rank(rows) + 1 != ncols {
        return None;
    }
    // Cofactor construction: take any (ncols-1) independent rows.
    let mut chosen: Vec<Vec<i128>> = Vec::new();
    for r in rows {
        let mut trial = chosen.clone();
        trial.push(r.iter().map(|&v| v as i128).collect());
        let as_i64: Vec<Vec<i64>> = trial
            .iter()
            .map(|rr| rr.iter().map(|&v| v as i64).collect())
            .collect();
        if rank(&as_i64) == trial.len() {
            chosen = trial;
        }
        if chosen.len() == ncols - 1 {
            break;
        }
    }
    if chosen.len() != ncols - 1 {
        return None;
    }
    let mut v = vec![0i128; ncols];
    for j in 0..ncols {
        let minor: Vec<Vec<i128>> = chosen
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let s = if j % 2 == 0 { 1 } else { -1 };
        v[j] = s * det(&minor);
    }
    if v.iter().all(|&x| x == 0) {
        return None;
    }
    let mut g = 0i128;
    for &x in &v {
        g = gcd_i128(g, x);
    }
    Some(v.iter().map(|&x| (x / g) as i64).collect())
}
