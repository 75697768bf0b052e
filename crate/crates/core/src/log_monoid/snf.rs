use serde::Serialize;

/// Dense integer matrix stored as rows.
pub type IntMatrix = Vec<Vec<i64>>;

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal, nonnegative,
/// each diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    pub diagonal: Vec<i64>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d != 0).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<i64> {
        self.diagonal.iter().copied().filter(|&d| d > 1).collect()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize) -> IntMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &IntMatrix, cols: usize) -> IntMatrix {
    (0..cols)
        .map(|j| a.iter().map(|r| r[j]).collect())
        .collect()
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// `row_i += k * row_j`
fn add_row(m: &mut IntMatrix, i: usize, j: usize, k: i64) {
    if k == 0 {
        return;
    }
    let src = m[j].clone();
    for (x, s) in m[i].iter_mut().zip(src) {
        *x += k * s;
    }
}

/// `col_i += k * col_j`
fn add_col(m: &mut IntMatrix, i: usize, j: usize, k: i64) {
    if k == 0 {
        return;
    }
    for row in m.iter_mut() {
        row[i] += k * row[j];
    }
}

/// Smith normal form of an `rows x cols` matrix.
pub fn smith(a: &IntMatrix, cols: usize) -> SmithForm {
    let rows = a.len();
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the remaining block
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| d[i][j] != 0)
                .min_by_key(|&(i, j)| d[i][j].abs());
            let Some((pi, pj)) = pivot else {
                break;
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t].div_euclid(p);
                add_row(&mut d, i, t, -q);
                add_row(&mut u, i, t, -q);
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = d[t][j].div_euclid(p);
                add_col(&mut d, j, t, -q);
                add_col(&mut v, j, t, -q);
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % p != 0));
            match bad {
                Some(i) => {
                    add_row(&mut d, t, i, 1);
                    add_row(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if t < rows && t < cols && d[t][t] < 0 {
            for x in d[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diagonal = (0..rows.min(cols)).map(|i| d[i][i]).collect();
    SmithForm { diagonal, u, v }
}

/// Hermite normal form (row style, upper triangular, positive pivots,
/// entries above each pivot reduced) of the row span of `a`, with zero rows
/// dropped.
pub fn hermite_basis(a: &IntMatrix, cols: usize) -> IntMatrix {
    let mut m: IntMatrix = a
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let mut top = 0;
    for col in 0..cols {
        loop {
            let pivot = (top..m.len())
                .filter(|&i| m[i][col] != 0)
                .min_by_key(|&i| m[i][col].abs());
            let Some(pi) = pivot else {
                break;
            };
            m.swap(top, pi);
            let p = m[top][col];
            let mut done = true;
            for i in top + 1..m.len() {
                let q = m[i][col].div_euclid(p);
                add_row(&mut m, i, top, -q);
                done &= m[i][col] == 0;
            }
            if done {
                if m[top][col] < 0 {
                    for x in m[top].iter_mut() {
                        *x = -*x;
                    }
                }
                let p = m[top][col];
                for i in 0..top {
                    let q = m[i][col].div_euclid(p);
                    add_row(&mut m, i, top, -q);
                }
                top += 1;
                break;
            }
        }
        if top == m.len() {
            break;
        }
    }
    m.truncate(top);
    m
}

/// Integer row vector `y` with `y * basis = x`, when `x` lies in the row
/// span of `basis` (rows linearly independent).
pub fn solve_in_lattice(basis: &IntMatrix, cols: usize, x: &[i64]) -> Option<Vec<i64>> {
    let s = smith(basis, cols);
    // basis = U^-1 D V^-1, so y U^-1 D = x V
    let xv: Vec<i64> = (0..cols)
        .map(|j| (0..cols).map(|k| x[k] * s.v[k][j]).sum())
        .collect();
    let mut z = vec![0i64; basis.len()];
    for (j, &val) in xv.iter().enumerate() {
        let dj = s.diagonal.get(j).copied().unwrap_or(0);
        if dj == 0 {
            if val != 0 {
                return None;
            }
        } else if val % dj != 0 {
            return None;
        } else {
            z[j] = val / dj;
        }
    }
    let y = (0..basis.len())
        .map(|j| (0..basis.len()).map(|k| z[k] * s.u[k][j]).sum())
        .collect();
    Some(y)
}
