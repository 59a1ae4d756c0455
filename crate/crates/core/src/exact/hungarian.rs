//! O(n^3) shortest-augmenting-path assignment with row/column potentials.

/// Minimum-cost assignment of an `h x h` cost matrix given row-major.
///
/// `f64::INFINITY` marks a forbidden cell. Returns `row -> column` and the
/// number of augmentations, or `None` when no finite assignment exists.
pub fn assign(costs: &[f64], h: usize) -> Option<(Vec<usize>, usize)> {
    debug_assert_eq!(costs.len(), h * h);
    // 1-based arrays, column 0 is the virtual source.
    let mut u = vec![0.0_f64; h + 1];
    let mut v = vec![0.0_f64; h + 1];
    let mut p = vec![0usize; h + 1];
    let mut way = vec![0usize; h + 1];
    let mut steps = 0;
    for i in 1..=h {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; h + 1];
        let mut used = vec![false; h + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=h {
                if used[j] {
                    continue;
                }
                let c = costs[(i0 - 1) * h + (j - 1)];
                let cur = c - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if !delta.is_finite() {
                return None;
            }
            for j in 0..=h {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            steps += 1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; h];
    for j in 1..=h {
        row_to_col[p[j] - 1] = j - 1;
    }
    Some((row_to_col, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_anti_diagonal() {
        let (a, _) = assign(&[1.0, 2.0, 2.0, 1.0], 2).unwrap();
        assert_eq!(a, vec![0, 1]);
        let (a, _) = assign(&[3.0, 1.0, 1.0, 3.0], 2).unwrap();
        assert_eq!(a, vec![1, 0]);
    }

    #[test]
    fn forbidden_cells() {
        let inf = f64::INFINITY;
        let (a, _) = assign(&[inf, 5.0, 1.0, 1.0], 2).unwrap();
        assert_eq!(a, vec![1, 0]);
        assert!(assign(&[inf, inf, 1.0, 1.0], 2).is_none());
    }

    #[test]
    fn three_by_three() {
        let c = [4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0];
        let (a, _) = assign(&c, 3).unwrap();
        let cost: f64 = a.iter().enumerate().map(|(r, &col)| c[r * 3 + col]).sum();
        assert_eq!(cost, 5.0);
    }
}
