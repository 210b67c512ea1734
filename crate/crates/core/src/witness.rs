//! Mod-p solution certificates for integer polynomial systems.
//!
//! A [`PolySystem`] is `f_1 = … = f_m = 0` over `x1, …, xs` with integer
//! coefficients. A [`ModPWitness`] is a prime `p` together with a point of
//! `F_p^s`; it is accepted when every `f_j` vanishes there mod `p`.
//! Exhaustive search and counting are capped by an explicit point budget so
//! that "too large to scan" is never reported as "no solution".

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::polyring::{mul_mod, pow_mod, reduce_mod, SparsePolynomial};

/// Default cap on the number of points scanned for a single prime.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("a polynomial system needs at least one polynomial")]
    EmptySystem,
    #[error("polynomial {index} uses x{uses} but the system has {num_vars} variables")]
    VariableOutOfRange {
        index: usize,
        uses: usize,
        num_vars: usize,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("point has {got} coordinates, system has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {value} is not a residue mod {prime}")]
    ResidueOutOfRange { value: u64, prime: u64 },
    #[error("scanning F_{prime}^{num_vars} exceeds the budget of {budget} points")]
    BudgetExceeded {
        prime: u64,
        num_vars: usize,
        budget: u64,
    },
}

/// Deterministic primality test (Miller–Rabin with a base set that is exact
/// for all 64-bit inputs).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pow_mod_u64(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolySystem {
    num_vars: usize,
    polynomials: Vec<SparsePolynomial>,
}

impl PolySystem {
    pub fn new(polynomials: Vec<SparsePolynomial>, num_vars: usize) -> Result<Self, WitnessError> {
        if polynomials.is_empty() {
            return Err(WitnessError::EmptySystem);
        }
        for (index, f) in polynomials.iter().enumerate() {
            if f.num_vars() > num_vars {
                return Err(WitnessError::VariableOutOfRange {
                    index,
                    uses: f.num_vars(),
                    num_vars,
                });
            }
        }
        Ok(Self {
            num_vars,
            polynomials,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn polynomials(&self) -> &[SparsePolynomial] {
        &self.polynomials
    }

    /// True iff every `f_j(point) ≡ 0 (mod p)`.
    pub fn verify(&self, cert: &ModPWitness) -> Result<bool, WitnessError> {
        if cert.point.len() != self.num_vars {
            return Err(WitnessError::DimensionMismatch {
                expected: self.num_vars,
                got: cert.point.len(),
            });
        }
        ModPWitness::new(cert.prime, cert.point.clone())?;
        Ok(self.reduce(cert.prime).vanishes_at(&cert.point))
    }

    fn reduce(&self, prime: u64) -> ReducedSystem {
        let modulus = BigInt::from(prime);
        let polys = self
            .polynomials
            .iter()
            .map(|f| {
                f.terms()
                    .filter_map(|(m, c)| {
                        let c = reduce_mod(c, &modulus);
                        (c != 0).then(|| {
                            let factors = m
                                .exponents()
                                .iter()
                                .enumerate()
                                .filter(|(_, &e)| e > 0)
                                .map(|(i, &e)| (i, e))
                                .collect();
                            (c, factors)
                        })
                    })
                    .collect()
            })
            .collect();
        ReducedSystem { prime, polys }
    }

    fn space_size(&self, prime: u64, budget: u64) -> Result<u64, WitnessError> {
        let exceeded = WitnessError::BudgetExceeded {
            prime,
            num_vars: self.num_vars,
            budget,
        };
        let exp = u32::try_from(self.num_vars).map_err(|_| exceeded.clone())?;
        match prime.checked_pow(exp) {
            Some(n) if n <= budget => Ok(n),
            _ => Err(exceeded),
        }
    }
}

impl<'de> Deserialize<'de> for PolySystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            num_vars: usize,
            polynomials: Vec<SparsePolynomial>,
        }
        let raw = Raw::deserialize(d)?;
        Self::new(raw.polynomials, raw.num_vars).map_err(serde::de::Error::custom)
    }
}

/// `(coefficient, [(variable index, exponent)])`
type ReducedTerm = (u64, Vec<(usize, u32)>);

/// Polynomials with coefficients reduced mod `prime`.
struct ReducedSystem {
    prime: u64,
    polys: Vec<Vec<ReducedTerm>>,
}

impl ReducedSystem {
    fn vanishes_at(&self, point: &[u64]) -> bool {
        let p = self.prime;
        self.polys.iter().all(|terms| {
            let mut total = 0u64;
            for (c, factors) in terms {
                let mut t = *c;
                for &(i, e) in factors {
                    t = mul_mod(t, pow_mod(point[i], e, p), p);
                }
                total = ((total as u128 + t as u128) % p as u128) as u64;
            }
            total == 0
        })
    }
}

/// A prime and a point of `F_p^s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModPWitness {
    prime: u64,
    point: Vec<u64>,
}

impl ModPWitness {
    /// Checks that `prime` is prime and every coordinate lies in `[0, prime)`.
    pub fn new(prime: u64, point: Vec<u64>) -> Result<Self, WitnessError> {
        if !is_prime(prime) {
            return Err(WitnessError::NotPrime(prime));
        }
        if let Some(&value) = point.iter().find(|&&v| v >= prime) {
            return Err(WitnessError::ResidueOutOfRange { value, prime });
        }
        Ok(Self { prime, point })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn point(&self) -> &[u64] {
        &self.point
    }
}

impl<'de> Deserialize<'de> for ModPWitness {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            prime: u64,
            point: Vec<u64>,
        }
        let raw = Raw::deserialize(d)?;
        Ok(Self {
            prime: raw.prime,
            point: raw.point,
        })
    }
}

/// Exhaustive scanner over `F_p^s` with a per-prime point budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scanner {
    budget: u64,
}

impl Default for Scanner {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Point number `index` in lexicographic order, `x1` most significant.
fn decode(mut index: u64, prime: u64, num_vars: usize) -> Vec<u64> {
    let mut point = vec![0; num_vars];
    for slot in point.iter_mut().rev() {
        *slot = index % prime;
        index /= prime;
    }
    point
}

impl Scanner {
    pub fn new(budget: u64) -> Self {
        Self { budget }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Scans `F_p^s` for each prime in order and returns the first point,
    /// in lexicographic order, at which the whole system vanishes.
    ///
    /// Primes whose space exceeds the budget are skipped; if one was skipped
    /// and nothing was found the result is `BudgetExceeded`, not `None`.
    pub fn search(
        &self,
        sys: &PolySystem,
        primes: &[u64],
    ) -> Result<Option<ModPWitness>, WitnessError> {
        if let Some(&bad) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(WitnessError::NotPrime(bad));
        }
        let mut skipped = None;
        for &prime in primes {
            let size = match sys.space_size(prime, self.budget) {
                Ok(size) => size,
                Err(e) => {
                    skipped.get_or_insert(e);
                    continue;
                }
            };
            let reduced = sys.reduce(prime);
            let found = (0..size)
                .into_par_iter()
                .map(|idx| decode(idx, prime, sys.num_vars))
                .find_first(|pt| reduced.vanishes_at(pt));
            if let Some(point) = found {
                let cert = ModPWitness { prime, point };
                assert!(
                    sys.verify(&cert)?,
                    "search produced a point the verifier rejects"
                );
                return Ok(Some(cert));
            }
        }
        match skipped {
            Some(e) => Err(e),
            None => Ok(None),
        }
    }

    /// Number of common zeros in `F_p^s`.
    pub fn count(&self, sys: &PolySystem, prime: u64) -> Result<u64, WitnessError> {
        if !is_prime(prime) {
            return Err(WitnessError::NotPrime(prime));
        }
        let size = sys.space_size(prime, self.budget)?;
        let reduced = sys.reduce(prime);
        Ok((0..size)
            .into_par_iter()
            .filter(|&idx| reduced.vanishes_at(&decode(idx, prime, sys.num_vars)))
            .count() as u64)
    }
}

/// [`PolySystem::verify`] as a free function.
pub fn verify_witness(sys: &PolySystem, cert: &ModPWitness) -> Result<bool, WitnessError> {
    sys.verify(cert)
}

pub fn search_witness(
    sys: &PolySystem,
    primes: &[u64],
) -> Result<Option<ModPWitness>, WitnessError> {
    Scanner::default().search(sys, primes)
}

pub fn count_solutions_mod_p(sys: &PolySystem, prime: u64) -> Result<u64, WitnessError> {
    Scanner::default().count(sys, prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn system(polys: &[&str], num_vars: usize) -> PolySystem {
        PolySystem::new(polys.iter().map(|s| s.parse().unwrap()).collect(), num_vars).unwrap()
    }

    fn cert(prime: u64, point: &[u64]) -> ModPWitness {
        ModPWitness::new(prime, point.to_vec()).unwrap()
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| {
            n >= 2
                && (2..)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn verify_examples() {
        assert!(system(&["x1 - 1"], 1).verify(&cert(5, &[1])).unwrap());
        assert!(system(&["x1^2 + 1"], 1).verify(&cert(2, &[1])).unwrap());
        assert!(!system(&["x1^2 + 1"], 1).verify(&cert(3, &[1])).unwrap());
    }

    #[test]
    fn verify_errors() {
        let sys = system(&["x1^2 + 1"], 1);
        assert_eq!(
            sys.verify(&ModPWitness {
                prime: 4,
                point: vec![1]
            }),
            Err(WitnessError::NotPrime(4))
        );
        assert_eq!(
            sys.verify(&cert(5, &[1, 2])),
            Err(WitnessError::DimensionMismatch {
                expected: 1,
                got: 2
            })
        );
        assert_eq!(
            ModPWitness::new(5, vec![5]),
            Err(WitnessError::ResidueOutOfRange { value: 5, prime: 5 })
        );
        assert_eq!(PolySystem::new(vec![], 2), Err(WitnessError::EmptySystem));
        assert!(matches!(
            PolySystem::new(vec!["x3".parse().unwrap()], 2),
            Err(WitnessError::VariableOutOfRange {
                index: 0,
                uses: 3,
                num_vars: 2
            })
        ));
    }

    #[test]
    fn search_examples() {
        let sys = system(&["x1^2 + 1"], 1);
        assert_eq!(search_witness(&sys, &[2]).unwrap(), Some(cert(2, &[1])));
        assert_eq!(search_witness(&sys, &[3]).unwrap(), None);
        assert_eq!(search_witness(&sys, &[3, 5]).unwrap(), Some(cert(5, &[2])));
        assert_eq!(
            search_witness(&system(&["1"], 0), &[2, 3, 5]).unwrap(),
            None
        );
        assert_eq!(search_witness(&sys, &[6]), Err(WitnessError::NotPrime(6)));
    }

    #[test]
    fn count_examples() {
        assert_eq!(
            count_solutions_mod_p(&system(&["x1^2 + 1"], 1), 5).unwrap(),
            2
        );
        assert_eq!(count_solutions_mod_p(&system(&["x1"], 1), 7).unwrap(), 1);
        assert_eq!(count_solutions_mod_p(&system(&["1"], 1), 7).unwrap(), 0);
        assert_eq!(count_solutions_mod_p(&system(&["0"], 2), 3).unwrap(), 9);
        assert_eq!(
            count_solutions_mod_p(&system(&["x1*x2 - 1", "x3"], 3), 7).unwrap(),
            6
        );
    }

    #[test]
    fn budget_is_distinct_from_none() {
        let sys = system(&["x1 + x2 + x3 + 1"], 3);
        let small = Scanner::new(100);
        assert!(matches!(
            small.count(&sys, 5),
            Err(WitnessError::BudgetExceeded { prime: 5, .. })
        ));
        assert_eq!(small.count(&sys, 3).unwrap(), 9);
        // found at p = 2 before the oversized prime is reached
        assert!(small.search(&sys, &[2, 7]).unwrap().is_some());
        let sat = system(&["x1^2 + x2^2 + x3^2 + 1", "x1"], 3);
        assert!(small.search(&sat, &[3]).unwrap().is_some());
        let unsat = system(&["x1^2 + 1", "x2"], 2);
        assert_eq!(small.search(&unsat, &[3]).unwrap(), None);
        assert!(matches!(
            small.search(&unsat, &[3, 11]),
            Err(WitnessError::BudgetExceeded { prime: 11, .. })
        ));
        let huge = Scanner::new(u64::MAX);
        assert!(matches!(
            huge.count(&system(&["x1"], 70), 2),
            Err(WitnessError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn json_forms() {
        let sys: PolySystem = serde_json::from_str(
            r#"{"num_vars": 1, "polynomials": [[{"exponents": [2], "coeff": "1"}, {"exponents": [], "coeff": "1"}]]}"#,
        )
        .unwrap();
        assert_eq!(sys, system(&["x1^2 + 1"], 1));
        let back: PolySystem = serde_json::from_str(&serde_json::to_string(&sys).unwrap()).unwrap();
        assert_eq!(back, sys);
        assert!(serde_json::from_str::<PolySystem>(
            r#"{"num_vars": 0, "polynomials": [[{"exponents": [1], "coeff": "1"}]]}"#
        )
        .is_err());
        let c: ModPWitness = serde_json::from_str(r#"{"prime": 2, "point": [1]}"#).unwrap();
        assert_eq!(c, cert(2, &[1]));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"prime":2,"point":[1]}"#
        );
    }

    fn arb_system() -> impl Strategy<Value = PolySystem> {
        let term = (prop::collection::vec(0u32..3, 0..3), -5i64..=5);
        let poly = prop::collection::vec(term, 1..4).prop_map(|ts| {
            SparsePolynomial::from_terms(ts.into_iter().map(|(e, c)| (crate::Monomial::new(e), c)))
        });
        prop::collection::vec(poly, 1..3).prop_map(|ps| PolySystem::new(ps, 2).unwrap())
    }

    proptest! {
        #[test]
        fn search_complete_and_sound(sys in arb_system(), prime in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let found = search_witness(&sys, &[prime]).unwrap();
            let count = count_solutions_mod_p(&sys, prime).unwrap();
            prop_assert_eq!(found.is_some(), count > 0);
            if let Some(c) = found {
                prop_assert!(sys.verify(&c).unwrap());
            }
        }

        #[test]
        fn verify_invariant_under_reorder_and_units(
            sys in arb_system(),
            prime in prop::sample::select(vec![2u64, 3, 5, 7]),
            a in 0u64..7, b in 0u64..7, unit in 1i64..50,
        ) {
            let c = cert(prime, &[a % prime, b % prime]);
            let base = sys.verify(&c).unwrap();
            let mut polys = sys.polynomials().to_vec();
            polys.reverse();
            if unit % prime as i64 != 0 {
                polys[0] = polys[0].scale(&BigInt::from(unit));
            }
            let other = PolySystem::new(polys, 2).unwrap();
            prop_assert_eq!(other.verify(&c).unwrap(), base);
        }

        #[test]
        fn counts_partition_by_first_coordinate(sys in arb_system(), prime in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let total = count_solutions_mod_p(&sys, prime).unwrap();
            let sliced: u64 = (0..prime)
                .map(|a| {
                    let mut polys = sys.polynomials().to_vec();
                    polys.push(&SparsePolynomial::variable(1) - &SparsePolynomial::constant(a));
                    count_solutions_mod_p(&PolySystem::new(polys, 2).unwrap(), prime).unwrap()
                })
                .sum();
            prop_assert_eq!(sliced, total);
        }
    }
}
