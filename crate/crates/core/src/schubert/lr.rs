//! Littlewood–Richardson coefficients by direct tableau enumeration.

use super::SchubertError;

/// A weakly decreasing sequence of positive parts (zeros are dropped).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, SchubertError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(SchubertError::MalformedPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// `λ_i` for 1-based `i`, zero past the last part.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn num_parts(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, other: &Self) -> bool {
        other.0.len() <= self.0.len() && other.0.iter().zip(&self.0).all(|(a, b)| a <= b)
    }

    /// Every partition fitting in a `rows × cols` box, in lexicographic order.
    pub fn in_box(rows: usize, cols: usize) -> Vec<Self> {
        fn go(rows: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            out.push(Partition::new(cur.clone()).unwrap());
            if cur.len() == rows {
                return;
            }
            for part in 1..=max {
                cur.push(part);
                go(rows, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(rows, cols, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

/// Number of LR tableaux of skew shape `ν/λ` and content `μ`: semistandard
/// fillings whose reverse reading word (rows top to bottom, each read right
/// to left) is a lattice word.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if !nu.contains(lambda) || nu.size() != lambda.size() + mu.size() {
        return 0;
    }
    // cells in reverse reading order
    let cells: Vec<(usize, usize)> = (1..=nu.num_parts())
        .flat_map(|r| (lambda.part(r) + 1..=nu.part(r)).rev().map(move |c| (r, c)))
        .collect();
    let mut filler = Filler {
        lambda,
        nu,
        content: mu.parts(),
        cells: &cells,
        grid: vec![vec![0; nu.part(1) + 2]; nu.num_parts() + 1],
        used: vec![0; mu.num_parts() + 1],
    };
    filler.count(0)
}

struct Filler<'a> {
    lambda: &'a Partition,
    nu: &'a Partition,
    content: &'a [usize],
    cells: &'a [(usize, usize)],
    grid: Vec<Vec<usize>>,
    used: Vec<usize>,
}

impl Filler<'_> {
    fn count(&mut self, idx: usize) -> u64 {
        let Some(&(r, c)) = self.cells.get(idx) else {
            return 1;
        };
        let mut total = 0;
        for e in 1..=self.content.len() {
            if self.used[e] == self.content[e - 1] {
                continue;
            }
            // lattice: after placing e, #e ≤ #(e-1)
            if e > 1 && self.used[e] + 1 > self.used[e - 1] {
                continue;
            }
            // rows weakly increase left to right; the right neighbour is filled
            if c < self.nu.part(r) && e > self.grid[r][c + 1] {
                continue;
            }
            // columns strictly increase downwards
            if r > 1 && c > self.lambda.part(r - 1) && e <= self.grid[r - 1][c] {
                continue;
            }
            self.grid[r][c] = e;
            self.used[e] += 1;
            total += self.count(idx + 1);
            self.used[e] -= 1;
            self.grid[r][c] = 0;
        }
        total
    }
}
