//! Exact rank over Q(i).

use num_traits::Zero;

use crate::exactnum::GaussianRational;

/// Rank of the matrix whose rows are `rows`, by fraction-exact Gaussian
/// elimination.
pub fn exact_rank(rows: &[Vec<GaussianRational>]) -> usize {
    let mut m: Vec<Vec<GaussianRational>> = rows.to_vec();
    let ncols = m.iter().map(Vec::len).max().unwrap_or(0);
    for row in &mut m {
        row.resize(ncols, GaussianRational::zero());
    }
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].inv().expect("pivot is nonzero");
        let pivot_row: Vec<GaussianRational> = m[rank].iter().map(|x| x * &inv).collect();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &(&f * p);
            }
        }
        m[rank] = pivot_row;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(crate::exactnum::rat(re), crate::exactnum::rat(im))
    }

    #[test]
    fn ranks() {
        assert_eq!(exact_rank(&[]), 0);
        assert_eq!(exact_rank(&[vec![g(0, 0), g(0, 0)]]), 0);
        assert_eq!(
            exact_rank(&[vec![g(1, 0), g(0, 1)], vec![g(0, 1), g(-1, 0)]]),
            1
        );
        assert_eq!(
            exact_rank(&[vec![g(1, 0), g(0, 1)], vec![g(0, 1), g(1, 0)]]),
            2
        );
        assert_eq!(
            exact_rank(&[
                vec![g(1, 0), g(2, 0), g(3, 0)],
                vec![g(2, 0), g(4, 0), g(6, 0)],
                vec![g(0, 0), g(0, 0), g(1, 1)]
            ]),
            2
        );
    }
}
