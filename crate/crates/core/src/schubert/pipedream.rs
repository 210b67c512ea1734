//! Reduced pipe dreams (RC-graphs).
//!
//! A pipe dream for `w ∈ S_n` marks some cells `(i, j)` with `i + j ≤ n` as
//! crosses; every other cell is a pair of elbows. The pipe entering row `i`
//! from the left leaves through the top of column `w(i)`, and no two pipes
//! cross twice. Its weight is `∏ x_i` over the crosses.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::permutation::Permutation;
use crate::polyring::Monomial;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PipeDream {
    pub n: usize,
    /// Cross tiles as 1-based `(row, column)` pairs.
    pub crossings: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Copy)]
enum Entry {
    FromLeft,
    FromBelow,
}

struct Trace {
    exit_column: Vec<usize>,
    /// Pair of pipes meeting at each cross, as `(horizontal, vertical)`.
    meetings: Vec<(usize, usize)>,
}

impl PipeDream {
    /// `∏ x_row` over the cross tiles.
    pub fn weight(&self) -> Monomial {
        let mut e = vec![0u32; self.n];
        for &(i, _) in &self.crossings {
            e[i - 1] += 1;
        }
        Monomial::new(e)
    }

    fn trace(&self) -> Trace {
        let mut exit_column = Vec::with_capacity(self.n);
        let mut meetings = Vec::new();
        for start in 1..=self.n {
            let (mut row, mut col, mut entry) = (start, 1usize, Entry::FromLeft);
            while row > 0 {
                let cross = self.crossings.contains(&(row, col));
                match (cross, entry) {
                    (true, Entry::FromLeft) => {
                        meetings.push(((row, col), start, true));
                        col += 1;
                    }
                    (true, Entry::FromBelow) => {
                        meetings.push(((row, col), start, false));
                        row -= 1;
                    }
                    (false, Entry::FromLeft) => {
                        row -= 1;
                        entry = Entry::FromBelow;
                    }
                    (false, Entry::FromBelow) => {
                        col += 1;
                        entry = Entry::FromLeft;
                    }
                }
            }
            exit_column.push(col);
        }
        meetings.sort();
        let meetings = meetings
            .chunks(2)
            .map(|pair| match pair {
                [(_, a, true), (_, b, false)] | [(_, b, false), (_, a, true)] => (*a, *b),
                _ => panic!("cross tile not traversed by exactly two pipes"),
            })
            .collect();
        Trace {
            exit_column,
            meetings,
        }
    }

    /// The permutation realized by tracing the pipes.
    pub fn permutation(&self) -> Permutation {
        Permutation::new(self.trace().exit_column).expect("pipes exit through distinct columns")
    }

    /// True when no two pipes cross more than once.
    pub fn is_reduced(&self) -> bool {
        let mut seen = HashSet::new();
        self.trace()
            .meetings
            .into_iter()
            .all(|(a, b)| seen.insert((a.min(b), a.max(b))))
    }

    /// Renders the staircase with `+` for crosses and `.` for elbows.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.n {
            for j in 1..=self.n + 1 - i {
                out.push(if self.crossings.contains(&(i, j)) {
                    '+'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out
    }
}

/// Depth-first search over cells in reading order (rows top to bottom,
/// each row right to left). A cross at `(i, j)` contributes the letter
/// `s_{i+j-1}`, and the crosses read in this order multiply to `w`. A cross
/// is only placed when the running product stays a length-additive prefix
/// of `w`; any other cross would make two pipes meet a second time.
pub(super) fn enumerate(w: &Permutation) -> Vec<PipeDream> {
    let n = w.trimmed_rank();
    let target = w.trimmed().stabilize(n).expect("trimmed rank");
    let cells: Vec<(usize, usize)> = (1..n)
        .flat_map(|i| (1..=n - i).rev().map(move |j| (i, j)))
        .collect();
    let mut search = Search {
        n,
        target: target.clone(),
        target_length: target.length(),
        cells,
        chosen: Vec::new(),
        out: Vec::new(),
    };
    search.go(0, Permutation::identity(n), 0);
    search.out
}

struct Search {
    n: usize,
    target: Permutation,
    target_length: usize,
    cells: Vec<(usize, usize)>,
    chosen: Vec<(usize, usize)>,
    out: Vec<PipeDream>,
}

impl Search {
    fn go(&mut self, idx: usize, prefix: Permutation, len: usize) {
        if len == self.target_length {
            // prefix·x = w with ℓ additive and x of length 0: prefix = w
            self.out.push(PipeDream {
                n: self.n,
                crossings: self.chosen.iter().copied().collect(),
            });
            return;
        }
        if idx == self.cells.len() || self.cells.len() - idx < self.target_length - len {
            return;
        }
        let (i, j) = self.cells[idx];
        let a = i + j - 1;
        if prefix.apply(a) < prefix.apply(a + 1) {
            let next = prefix.right_multiply_simple(a).expect("a >= 1");
            // ℓ(next⁻¹ w) = ℓ(w) - ℓ(next)  ⟺  next is a prefix of w
            let rest = next.inverse().multiply(&self.target);
            if rest.length() == self.target_length - len - 1 {
                self.chosen.push((i, j));
                self.go(idx + 1, next, len + 1);
                self.chosen.pop();
            }
        }
        self.go(idx + 1, prefix, len);
    }
}
