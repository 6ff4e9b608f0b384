//! Minimum-cost assignment on a square cost matrix.
//!
//! Potential-based shortest augmenting path method, O(n^3). Used for the
//! Hungarian centroid match rate; an exhaustive permutation oracle checks
//! it in the test suite.

/// Dense square cost matrix, row-major.
pub(crate) struct CostMatrix {
    n: usize,
    cost: Vec<f64>,
}

impl CostMatrix {
    pub fn new(n: usize, cost: Vec<f64>) -> Self {
        assert_eq!(cost.len(), n * n, "cost matrix must be n x n");
        Self { n, cost }
    }

    #[inline]
    fn at(&self, row: usize, col: usize) -> f64 {
        self.cost[row * self.n + col]
    }
}

/// Returns the optimal column for each row. Empty input yields an empty
/// assignment.
pub(crate) fn solve(matrix: &CostMatrix) -> Vec<usize> {
    let n = matrix.n;
    if n == 0 {
        return Vec::new();
    }

    // 1-based arrays with column 0 as the virtual start of each
    // augmenting path; row_of[j] is the row matched to column j.
    let mut row_potential = vec![0.0f64; n + 1];
    let mut col_potential = vec![0.0f64; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut path_back = vec![0usize; n + 1];

    for row in 1..=n {
        row_of[0] = row;
        let mut j0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut visited = vec![false; n + 1];

        loop {
            visited[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;

            for j in 1..=n {
                if visited[j] {
                    continue;
                }
                let reduced = matrix.at(i0 - 1, j - 1) - row_potential[i0] - col_potential[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    path_back[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }

            for j in 0..=n {
                if visited[j] {
                    row_potential[row_of[j]] += delta;
                    col_potential[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }

            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }

        // Walk the alternating path back, flipping matches.
        loop {
            let j1 = path_back[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if row_of[j] > 0 {
            assignment[row_of[j] - 1] = j - 1;
        }
    }
    assignment
}
