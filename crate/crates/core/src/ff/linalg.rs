use super::field::{Fe, FiniteField};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Fe>>, ncols: usize, f: &FiniteField) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let k = rows[i][c];
                for j in 0..ncols {
                    let t = f.mul(k, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Canonical kernel basis: one vector per free column, with a 1 there and
/// zeros in the other free columns.
pub fn nullspace(rows: &[Vec<Fe>], ncols: usize, f: &FiniteField) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols, f);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(row[free]);
        }
        out.push(v);
    }
    out
}

pub fn rank(rows: &[Vec<Fe>], ncols: usize, f: &FiniteField) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols, f).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = make_field(5, 1).unwrap();
        let rows = vec![vec![1, 2, 3, 4], vec![2, 4, 1, 3], vec![3, 1, 4, 2]];
        let ker = nullspace(&rows, 4, &f);
        assert_eq!(ker.len() + rank(&rows, 4, &f), 4);
        for v in &ker {
            for r in &rows {
                let s = r.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(s, 0);
            }
        }
    }
}
