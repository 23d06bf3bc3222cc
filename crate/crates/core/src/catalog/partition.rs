use std::fmt;

/// An integer partition with trailing zeros stripped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Returns `None` unless `parts` is weakly decreasing.
    pub fn new(parts: &[usize]) -> Option<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        let mut v = parts.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        Some(Self(v))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// The `i`-th part (zero past the end).
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn fits_box(&self, rows: usize, cols: usize) -> bool {
        self.len() <= rows && self.part(0) <= cols
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().enumerate().all(|(i, &p)| p <= self.0[i])
    }

    /// Complement inside a `rows x cols` box, rotated by 180 degrees.
    pub fn complement(&self, rows: usize, cols: usize) -> Partition {
        let parts: Vec<usize> = (0..rows).map(|i| cols - self.part(rows - 1 - i)).collect();
        Partition::new(&parts).expect("complement of a partition is a partition")
    }

    /// All partitions fitting in a `rows x cols` box, by size and then in
    /// reverse lexicographic order.
    pub fn all_in_box(rows: usize, cols: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        for size in 0..=rows * cols {
            out.extend(partitions_of(size, rows, cols));
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Partitions of `size` with at most `rows` parts each at most `cols`, in
/// reverse lexicographic order.
pub fn partitions_of(size: usize, rows: usize, cols: usize) -> Vec<Partition> {
    fn rec(left: usize, max: usize, rows: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if rows == 0 {
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            rec(left - p, p, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(size, cols, rows, &mut Vec::new(), &mut out);
    out
}

/// Littlewood-Richardson coefficient `c^nu_{lambda, mu}`: the number of
/// semistandard fillings of `nu / lambda` with content `mu` whose reverse
/// reading word is a lattice word.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if lambda.size() + mu.size() != nu.size() || !nu.contains(lambda) || !nu.contains(mu) {
        return 0;
    }
    // Cells in reverse reading order: rows top to bottom, right to left.
    let cells: Vec<(usize, usize)> = (0..nu.len())
        .flat_map(|r| (lambda.part(r)..nu.part(r)).rev().map(move |c| (r, c)))
        .collect();
    let rows = nu.len();
    let width = nu.part(0);
    let mut grid = vec![vec![0usize; width]; rows];
    let mut count = vec![0usize; mu.len() + 1];
    fn place(
        idx: usize,
        cells: &[(usize, usize)],
        lambda: &Partition,
        nu: &Partition,
        mu: &Partition,
        grid: &mut [Vec<usize>],
        count: &mut [usize],
    ) -> u64 {
        let Some(&(r, c)) = cells.get(idx) else {
            return 1;
        };
        // Values are 1-based letters; rows weakly increase to the right,
        // columns strictly increase downward.
        let right_cap = if c + 1 < nu.part(r) { grid[r][c + 1] } else { usize::MAX };
        let above_floor = if r > 0 && c >= lambda.part(r - 1) { grid[r - 1][c] } else { 0 };
        let mut total = 0;
        for v in (above_floor + 1)..=mu.len().min(right_cap) {
            if count[v] >= mu.part(v - 1) {
                continue;
            }
            if v > 1 && count[v] + 1 > count[v - 1] {
                continue;
            }
            count[v] += 1;
            grid[r][c] = v;
            total += place(idx + 1, cells, lambda, nu, mu, grid, count);
            grid[r][c] = 0;
            count[v] -= 1;
        }
        total
    }
    place(0, &cells, lambda, nu, mu, &mut grid, &mut count)
}
