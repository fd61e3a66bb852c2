use serde::{Deserialize, Serialize};

/// Structure of an abelianized presentation: `Z^free_rank + sum Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Abelianization {
    pub free_rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<u64>,
}

impl Abelianization {
    /// Smith normal form of the relation matrix (`rows` relators, `n` generators).
    pub fn from_relation_matrix(rows: &[Vec<i64>], n: usize) -> Self {
        let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let m = a.len();
        let mut diag = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // Pivot: smallest nonzero magnitude in the remaining block.
            let mut piv = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j] != 0 && piv.is_none_or(|(pi, pj): (usize, usize)| a[i][j].abs() < a[pi][pj].abs()) {
                        piv = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = piv else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            loop {
                let p = a[t][t];
                let mut done = true;
                for i in t + 1..m {
                    let q = a[i][t] / p;
                    if q != 0 {
                        for j in t..n {
                            a[i][j] -= q * a[t][j];
                        }
                    }
                    if a[i][t] != 0 {
                        done = false;
                    }
                }
                for j in t + 1..n {
                    let q = a[t][j] / p;
                    if q != 0 {
                        for row in a.iter_mut().skip(t) {
                            row[j] -= q * row[t];
                        }
                    }
                    if a[t][j] != 0 {
                        done = false;
                    }
                }
                if done {
                    // Enforce divisibility of the remaining block.
                    let bad = (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
                    match bad {
                        Some((i, _)) => {
                            for j in t..n {
                                a[t][j] += a[i][j];
                            }
                        }
                        None => break,
                    }
                }
                // Move the smallest entry of row/column t to the pivot.
                let mut best = (a[t][t].abs(), t, t);
                for i in t..m {
                    if a[i][t] != 0 && (a[i][t].abs() < best.0 || best.0 == 0) {
                        best = (a[i][t].abs(), i, t);
                    }
                }
                for j in t..n {
                    if a[t][j] != 0 && (a[t][j].abs() < best.0 || best.0 == 0) {
                        best = (a[t][j].abs(), t, j);
                    }
                }
                a.swap(t, best.1);
                for row in a.iter_mut() {
                    row.swap(t, best.2);
                }
            }
            diag.push(a[t][t].unsigned_abs() as u64);
            t += 1;
        }
        let rank = diag.len();
        let mut torsion: Vec<u64> = diag.into_iter().filter(|&d| d > 1).collect();
        torsion.sort_unstable();
        Abelianization { free_rank: n - rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic() {
        let a = Abelianization::from_relation_matrix(&[vec![5]], 1);
        assert_eq!(a, Abelianization { free_rank: 0, torsion: vec![5] });
    }

    #[test]
    fn z2_times_z2() {
        let a = Abelianization::from_relation_matrix(&[vec![2, 0], vec![0, 2]], 2);
        assert_eq!(a.torsion, vec![2, 2]);
    }

    #[test]
    fn coprime_collapses() {
        let a = Abelianization::from_relation_matrix(&[vec![2, 0], vec![0, 3]], 2);
        assert_eq!(a.torsion, vec![6]);
    }

    #[test]
    fn free_part() {
        let a = Abelianization::from_relation_matrix(&[vec![1, -1]], 2);
        assert_eq!(a, Abelianization { free_rank: 1, torsion: vec![] });
    }
}
