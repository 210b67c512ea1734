//! Permutations in one-line notation, viewed as elements of `S_∞`.
//!
//! A [`Permutation`] stores a window `w(1), …, w(n)` and is understood to fix
//! every `i > n`. Equality, ordering and hashing all act on the window with
//! trailing fixed points trimmed, so `21`, `213` and `2134` are the same
//! element.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use thiserror::Error;

/// Default upper bound on permutation ranks handled by the Schubert kernel.
pub const DEFAULT_RANK_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("window {0:?} is not a rearrangement of 1..={len}", len = .0.len())]
    NotAPermutation(Vec<usize>),
    #[error("cannot stabilize a rank-{from} permutation into rank {to}")]
    StabilizeBelowRank { from: usize, to: usize },
    #[error("Lehmer code entry c_{index} = {value} exceeds the bound {bound}")]
    CodeOutOfRange {
        index: usize,
        value: usize,
        bound: usize,
    },
    #[error("transposition positions ({i}, {k}) must satisfy 1 <= i < k")]
    BadTransposition { i: usize, k: usize },
    #[error("rank {rank} exceeds the configured bound {bound}")]
    RankBound { rank: usize, bound: usize },
    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// An element of `S_∞` given by its one-line window.
#[derive(Clone)]
pub struct Permutation {
    window: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from a one-line window of values `1..=n`.
    pub fn new(window: Vec<usize>) -> Result<Self, PermutationError> {
        let n = window.len();
        let mut seen = vec![false; n + 1];
        for &v in &window {
            if v == 0 || v > n || seen[v] {
                return Err(PermutationError::NotAPermutation(window));
            }
            seen[v] = true;
        }
        Ok(Self { window })
    }

    pub(crate) fn from_window_unchecked(window: Vec<usize>) -> Self {
        debug_assert!(Self::new(window.clone()).is_ok());
        Self { window }
    }

    /// The identity of `S_n`.
    pub fn identity(n: usize) -> Self {
        Self {
            window: (1..=n).collect(),
        }
    }

    /// `w_∘ = (n, n-1, …, 1)`, the longest element of `S_n`.
    pub fn long_permutation(n: usize) -> Self {
        Self {
            window: (1..=n).rev().collect(),
        }
    }

    /// The simple transposition `s_i = (i, i+1)`.
    pub fn simple_transposition(i: usize) -> Result<Self, PermutationError> {
        if i == 0 {
            return Err(PermutationError::BadTransposition { i, k: i + 1 });
        }
        let mut window: Vec<usize> = (1..=i + 1).collect();
        window.swap(i - 1, i);
        Ok(Self { window })
    }

    /// The stored window, including any trailing fixed points.
    pub fn window(&self) -> &[usize] {
        &self.window
    }

    /// Ambient rank `n` of the stored window.
    pub fn rank(&self) -> usize {
        self.window.len()
    }

    /// Length of the window once trailing fixed points are dropped.
    ///
    /// The identity reports rank 1 so that it always has a printable window.
    pub fn trimmed_rank(&self) -> usize {
        let mut n = self.window.len();
        while n > 1 && self.window[n - 1] == n {
            n -= 1;
        }
        n.max(1)
    }

    /// The canonical window used for equality and display.
    pub fn trimmed_window(&self) -> &[usize] {
        if self.window.is_empty() {
            return &[];
        }
        &self.window[..self.trimmed_rank()]
    }

    pub fn trimmed(&self) -> Self {
        let mut window = self.trimmed_window().to_vec();
        if window.is_empty() {
            window.push(1);
        }
        Self { window }
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// `w(i)` for 1-based `i`, with `w(i) = i` beyond the window.
    pub fn apply(&self, i: usize) -> usize {
        self.window.get(i.wrapping_sub(1)).copied().unwrap_or(i)
    }

    /// Inversion count `ℓ(w)`.
    pub fn length(&self) -> usize {
        let w = &self.window;
        let mut inv = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    /// Positions `i` (1-based) with `w(i) > w(i+1)`.
    pub fn descents(&self) -> Vec<usize> {
        self.window
            .windows(2)
            .enumerate()
            .filter(|(_, pair)| pair[0] > pair[1])
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Positions `i < n` (1-based) with `w(i) < w(i+1)` inside the window.
    pub fn ascents(&self) -> Vec<usize> {
        self.window
            .windows(2)
            .enumerate()
            .filter(|(_, pair)| pair[0] < pair[1])
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn code(&self) -> LehmerCode {
        let w = &self.window;
        let entries = (0..w.len())
            .map(|i| w[i + 1..].iter().filter(|&&x| x < w[i]).count())
            .collect();
        LehmerCode { entries }
    }

    /// Appends fixed points so the window has length `rank`.
    pub fn stabilize(&self, rank: usize) -> Result<Self, PermutationError> {
        if rank < self.window.len() {
            return Err(PermutationError::StabilizeBelowRank {
                from: self.window.len(),
                to: rank,
            });
        }
        let mut window = self.window.clone();
        window.extend(self.window.len() + 1..=rank);
        Ok(Self { window })
    }

    fn stabilized_to(&self, rank: usize) -> Vec<usize> {
        let mut window = self.window.clone();
        window.extend(self.window.len() + 1..=rank.max(self.window.len()));
        window
    }

    /// Composition `(u·v)(i) = u(v(i))`, computed on a common rank.
    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.rank().max(other.rank());
        let window = (1..=n).map(|i| self.apply(other.apply(i))).collect();
        Self { window }
    }

    pub fn inverse(&self) -> Self {
        let mut window = vec![0; self.window.len()];
        for (i, &v) in self.window.iter().enumerate() {
            window[v - 1] = i + 1;
        }
        Self { window }
    }

    /// `w·t_{ik}`: swaps window positions `i` and `k`, stabilizing if `k`
    /// lies beyond the window.
    pub fn right_multiply_transposition(
        &self,
        i: usize,
        k: usize,
    ) -> Result<Self, PermutationError> {
        if i == 0 || i >= k {
            return Err(PermutationError::BadTransposition { i, k });
        }
        let mut window = self.stabilized_to(k);
        window.swap(i - 1, k - 1);
        Ok(Self { window })
    }

    /// `w·s_i`, i.e. swapping adjacent positions `i` and `i+1`.
    pub fn right_multiply_simple(&self, i: usize) -> Result<Self, PermutationError> {
        self.right_multiply_transposition(i, i + 1)
    }

    /// Every permutation of `S_n` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut window: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Self {
                window: window.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1))
                .rev()
                .find(|&i| window[i] < window[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| window[j] > window[i]).unwrap();
            window.swap(i, j);
            window[i + 1..].reverse();
        }
        out
    }

    /// One-line text: contiguous digits when every entry is below 10,
    /// comma-separated otherwise.
    pub fn to_one_line(&self) -> String {
        let w = self.trimmed_window();
        if w.iter().all(|&v| v <= 9) {
            w.iter().map(|v| v.to_string()).collect()
        } else {
            w.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed_window() == other.trimmed_window()
    }
}

impl Eq for Permutation {}

impl Hash for Permutation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.trimmed_window().hash(state);
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on trimmed one-line windows.
impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.trimmed_window().cmp(other.trimmed_window())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.to_one_line())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_one_line())
    }
}

impl FromStr for Permutation {
    type Err = PermutationError;

    /// Accepts `"1,4,2,3"` (any rank) or `"1423"` (ranks up to 9).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let input = s.trim();
        let parse_err = |reason: &str| PermutationError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        if input.is_empty() {
            return Err(parse_err("empty input"));
        }
        let window: Vec<usize> = if input.contains(',') {
            input
                .split(',')
                .map(|t| {
                    t.trim().parse::<usize>().map_err(|_| {
                        parse_err("expected a comma-separated list of positive integers")
                    })
                })
                .collect::<Result<_, _>>()?
        } else {
            input
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| parse_err("expected digits"))
                })
                .collect::<Result<_, _>>()?
        };
        Self::new(window).map_err(|e| parse_err(&e.to_string()))
    }
}

/// Lehmer code `c_i = #{j > i : w(j) < w(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LehmerCode {
    entries: Vec<usize>,
}

impl LehmerCode {
    /// Validates `c_i <= len - i` (1-based).
    pub fn new(entries: Vec<usize>) -> Result<Self, PermutationError> {
        let len = entries.len();
        for (idx, &value) in entries.iter().enumerate() {
            let bound = len - idx - 1;
            if value > bound {
                return Err(PermutationError::CodeOutOfRange {
                    index: idx + 1,
                    value,
                    bound,
                });
            }
        }
        Ok(Self { entries })
    }

    /// Pads `entries` with the fewest zeros that make it a valid code.
    pub fn padded(entries: &[usize]) -> Self {
        let len = entries
            .iter()
            .enumerate()
            .map(|(i, &c)| if c == 0 { 0 } else { i + 1 + c })
            .max()
            .unwrap_or(0)
            .max(entries.len())
            .max(1);
        let mut padded = entries.to_vec();
        padded.resize(len, 0);
        Self { entries: padded }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn sum(&self) -> usize {
        self.entries.iter().sum()
    }

    /// Inverse of [`Permutation::code`].
    pub fn to_permutation(&self) -> Permutation {
        let n = self.entries.len();
        let mut unused: Vec<usize> = (1..=n).collect();
        let window = self.entries.iter().map(|&c| unused.remove(c)).collect();
        Permutation::from_window_unchecked(window)
    }
}

/// Upper bound on the trimmed rank of permutations the kernel will process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankBound(pub usize);

impl Default for RankBound {
    fn default() -> Self {
        Self(DEFAULT_RANK_BOUND)
    }
}

impl RankBound {
    pub fn check(&self, w: &Permutation) -> Result<(), PermutationError> {
        self.check_rank(w.trimmed_rank())
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), PermutationError> {
        if rank > self.0 {
            Err(PermutationError::RankBound {
                rank,
                bound: self.0,
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn length_examples() {
        assert_eq!(p("123").length(), 0);
        assert_eq!(p("321").length(), 3);
        assert_eq!(p("1423").length(), 2);
    }

    #[test]
    fn descent_examples() {
        assert!(p("123").descents().is_empty());
        assert_eq!(p("321").descents(), vec![1, 2]);
        assert_eq!(p("132").descents(), vec![2]);
    }

    #[test]
    fn code_examples() {
        assert_eq!(p("321").code().entries(), &[2, 1, 0]);
        assert_eq!(p("123").code().entries(), &[0, 0, 0]);
        let c = LehmerCode::new(vec![0, 2, 0, 0]).unwrap();
        assert_eq!(c.to_permutation(), p("1423"));
    }

    #[test]
    fn code_bound_rejected() {
        assert!(matches!(
            LehmerCode::new(vec![0, 3, 0, 0]),
            Err(PermutationError::CodeOutOfRange {
                index: 2,
                value: 3,
                bound: 2
            })
        ));
        assert!(LehmerCode::new(vec![1]).is_err());
    }

    #[test]
    fn padded_code_is_minimal() {
        assert_eq!(LehmerCode::padded(&[0, 2]).entries(), &[0, 2, 0, 0]);
        assert_eq!(LehmerCode::padded(&[2]).to_permutation(), p("312"));
        assert_eq!(LehmerCode::padded(&[]).to_permutation(), p("1"));
    }

    #[test]
    fn group_operations() {
        assert!(p("213").multiply(&p("213")).is_identity());
        assert_eq!(Permutation::long_permutation(3), p("321"));
        assert_eq!(
            p("1324").right_multiply_transposition(2, 4).unwrap(),
            p("1423")
        );
        // auto-stabilize
        assert_eq!(p("21").multiply(&p("132")), p("231"));
        assert_eq!(
            p("21").right_multiply_transposition(2, 3).unwrap(),
            p("231")
        );
        assert!(p("21").right_multiply_transposition(2, 2).is_err());
    }

    #[test]
    fn stabilize_examples() {
        assert_eq!(p("21").stabilize(4).unwrap().window(), &[2, 1, 3, 4]);
        assert_eq!(p("132").stabilize(3).unwrap().window(), &[1, 3, 2]);
        assert_eq!(p("321").stabilize(6).unwrap().length(), 3);
        assert!(matches!(
            p("321").stabilize(2),
            Err(PermutationError::StabilizeBelowRank { from: 3, to: 2 })
        ));
    }

    #[test]
    fn equality_trims_fixed_points() {
        assert_eq!(p("21"), p("2134"));
        assert_eq!(p("1"), p("123"));
        assert_ne!(p("21"), p("132"));
        assert_eq!(p("2134").to_string(), "21");
        assert_eq!(Permutation::identity(4).to_string(), "1");
    }

    #[test]
    fn parse_forms() {
        assert_eq!(p("1,4,2,3"), p("1423"));
        let big: Permutation = "10,2,3,4,5,6,7,8,9,1".parse().unwrap();
        assert_eq!(big.to_string(), "10,2,3,4,5,6,7,8,9,1");
        assert!("1,1".parse::<Permutation>().is_err());
        assert!("13".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("1a".parse::<Permutation>().is_err());
    }

    #[test]
    fn enumerate_all() {
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(1), vec![p("1")]);
        let s3: Vec<String> = Permutation::all(3)
            .iter()
            .map(|w| w.window().iter().map(|v| v.to_string()).collect())
            .collect();
        assert_eq!(s3, ["123", "132", "213", "231", "312", "321"]);
    }

    #[test]
    fn rank_bound() {
        let b = RankBound(3);
        assert!(b.check(&p("3214")).is_ok());
        assert!(b.check(&p("1243")).is_err());
    }

    #[test]
    fn code_roundtrip_exhaustive() {
        for n in 1..=6 {
            for w in Permutation::all(n) {
                let c = w.code();
                assert_eq!(c.sum(), w.length());
                assert_eq!(
                    LehmerCode::new(c.entries().to_vec())
                        .unwrap()
                        .to_permutation(),
                    w
                );
                let d = w.descents();
                for i in 1..n {
                    assert_eq!(d.contains(&i), w.apply(i) > w.apply(i + 1));
                }
            }
        }
    }

    fn arb_perm() -> impl Strategy<Value = Permutation> {
        (1usize..=8)
            .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|w| Permutation::new(w).unwrap())
    }

    proptest! {
        #[test]
        fn stabilization_preserves_statistics(w in arb_perm(), extra in 0usize..5) {
            let s = w.stabilize(w.rank() + extra).unwrap();
            prop_assert_eq!(s.length(), w.length());
            prop_assert_eq!(s.descents(), w.descents());
            let mut c = w.code().entries().to_vec();
            c.resize(s.rank(), 0);
            prop_assert_eq!(s.code().entries().to_vec(), c);
            prop_assert_eq!(&s, &w);
        }

        #[test]
        fn inverse_is_two_sided(w in arb_perm()) {
            prop_assert!(w.multiply(&w.inverse()).is_identity());
            prop_assert_eq!(w.inverse().length(), w.length());
        }
    }
}
