//! Schubert polynomials and Schubert structure constants.
//!
//! `Sch_{w∘} = x1^{n-1} x2^{n-2} ⋯ x_{n-1}` for the long permutation of
//! `S_n`, and `Sch_{w s_i} = ∂_i Sch_w` whenever `w(i) > w(i+1)`. Products
//! are expanded back into the Schubert basis by repeatedly peeling off the
//! lex-minimal monomial `x^α`, which is the leading monomial of exactly one
//! Schubert polynomial, namely the one whose Lehmer code is `α`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::permutation::{LehmerCode, Permutation, PermutationError, RankBound};
use crate::polyring::{DecimalInt, Monomial, SparsePolynomial};

mod lr;
mod pipedream;

pub use lr::{lr_coefficient, Partition};
pub use pipedream::PipeDream;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchubertError {
    #[error(transparent)]
    Permutation(#[from] PermutationError),
    #[error("expansion term {w} does not fit in ambient rank {ambient}")]
    AmbientRankExceeded { w: Permutation, ambient: usize },
    #[error("malformed partition {0:?}: parts must be weakly decreasing")]
    MalformedPartition(Vec<usize>),
    #[error("partition {partition:?} has more than {k} nonzero parts")]
    TooManyParts { partition: Vec<usize>, k: usize },
    #[error("position must be at least 1")]
    ZeroPosition,
}

/// Which descent the recursion follows when several are available.
///
/// For a target `v`, the last operator applied is `∂_i` where `i` is an
/// ascent of `v` (equivalently a descent of `v s_i`). The choice does not
/// change the result, but `SmallestFirst` keeps the intermediate
/// polynomials far smaller on Grassmannian targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DescentPolicy {
    LargestFirst,
    #[default]
    SmallestFirst,
}

/// Expansion `Σ c_w Sch_w` of a polynomial in the Schubert basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubertExpansion {
    ambient_rank: usize,
    terms: BTreeMap<Permutation, BigInt>,
    signed: bool,
}

impl SchubertExpansion {
    pub fn empty(ambient_rank: usize) -> Self {
        Self {
            ambient_rank,
            terms: BTreeMap::new(),
            signed: false,
        }
    }

    /// Builds an expansion from explicit terms; zero coefficients are dropped.
    pub fn from_terms<I: IntoIterator<Item = (Permutation, BigInt)>>(
        ambient_rank: usize,
        terms: I,
    ) -> Self {
        let mut e = Self::empty(ambient_rank);
        for (w, c) in terms {
            e.add(w, c);
        }
        e
    }

    fn add(&mut self, w: Permutation, c: BigInt) {
        let w = w.trimmed();
        let slot = self.terms.entry(w.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
        self.signed = self.terms.values().any(Signed::is_negative);
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// True when some coefficient is negative.
    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn coefficient(&self, w: &Permutation) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms ordered lexicographically by one-line notation.
    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ c_w Sch_w` as a polynomial.
    pub fn to_polynomial(
        &self,
        engine: &SchubertEngine,
    ) -> Result<SparsePolynomial, SchubertError> {
        let mut p = SparsePolynomial::zero();
        for (w, c) in &self.terms {
            p.add_scaled(&*engine.schubert_polynomial(w)?, c);
        }
        Ok(p)
    }
}

impl fmt::Display for SchubertExpansion {
    /// `Sch_231 + 2*Sch_1423`; the empty expansion prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if abs == BigInt::from(1) {
                write!(f, "Sch_{w}")?;
            } else {
                write!(f, "{abs}*Sch_{w}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ExpansionTermJson {
    w: Vec<usize>,
    coeff: DecimalInt,
}

#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    ambient_rank: usize,
    terms: Vec<ExpansionTermJson>,
    signed: bool,
}

impl Serialize for SchubertExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExpansionJson {
            ambient_rank: self.ambient_rank,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| ExpansionTermJson {
                    w: w.trimmed_window().to_vec(),
                    coeff: DecimalInt(c.clone()),
                })
                .collect(),
            signed: self.signed,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SchubertExpansion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ExpansionJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let w = Permutation::new(t.w).map_err(serde::de::Error::custom)?;
            terms.push((w, t.coeff.0));
        }
        let e = Self::from_terms(raw.ambient_rank, terms);
        if e.signed != raw.signed {
            return Err(serde::de::Error::custom(
                "`signed` flag disagrees with the coefficients",
            ));
        }
        Ok(e)
    }
}

/// Answer to `c^w_{u,v} > 0`, together with the full expansion of
/// `Sch_u · Sch_v` it was read from.
#[derive(Debug, Clone)]
pub struct PositivityCertificate {
    pub u: Permutation,
    pub v: Permutation,
    pub w: Permutation,
    pub coefficient: BigInt,
    pub expansion: Arc<SchubertExpansion>,
}

impl PositivityCertificate {
    pub fn is_positive(&self) -> bool {
        self.coefficient.is_positive()
    }

    /// Recombines the expansion and checks it against `Sch_u · Sch_v`.
    pub fn verify(&self, engine: &SchubertEngine) -> Result<bool, SchubertError> {
        let product =
            &*engine.schubert_polynomial(&self.u)? * &*engine.schubert_polynomial(&self.v)?;
        Ok(self.expansion.to_polynomial(engine)? == product
            && self.expansion.coefficient(&self.w) == self.coefficient)
    }
}

/// Shared state for Schubert computations: the rank bound, the descent
/// policy and memo tables for polynomials and products.
///
/// Caches are read-mostly; concurrent callers may race to fill the same
/// entry, in which case the first published value wins.
#[derive(Debug, Default)]
pub struct SchubertEngine {
    rank_bound: RankBound,
    policy: DescentPolicy,
    polys: RwLock<HashMap<Permutation, Arc<SparsePolynomial>>>,
    products: RwLock<HashMap<(Permutation, Permutation), Arc<SchubertExpansion>>>,
}

impl SchubertEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_rank_bound(bound: usize) -> Self {
        Self {
            rank_bound: RankBound(bound),
            ..Self::default()
        }
    }

    pub fn with_policy(mut self, policy: DescentPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn rank_bound(&self) -> RankBound {
        self.rank_bound
    }

    pub fn policy(&self) -> DescentPolicy {
        self.policy
    }

    fn cached(&self, w: &Permutation) -> Option<Arc<SparsePolynomial>> {
        self.polys.read().unwrap().get(w).cloned()
    }

    fn publish(&self, w: Permutation, p: SparsePolynomial) -> Arc<SparsePolynomial> {
        self.polys
            .write()
            .unwrap()
            .entry(w)
            .or_insert_with(|| Arc::new(p))
            .clone()
    }

    /// `Sch_w`, built down from the staircase monomial of `w`'s trimmed rank.
    pub fn schubert_polynomial(
        &self,
        w: &Permutation,
    ) -> Result<Arc<SparsePolynomial>, SchubertError> {
        self.rank_bound.check(w)?;
        let w = w.trimmed();
        if let Some(p) = self.cached(&w) {
            return Ok(p);
        }
        let n = w.trimmed_rank();
        let top = Permutation::long_permutation(n);

        // Walk up from w towards w∘ until something known is hit, then
        // come back down applying ∂_i.
        let mut steps = Vec::new();
        let mut cur = w.clone();
        let mut poly = loop {
            if let Some(p) = self.cached(&cur) {
                break p;
            }
            if cur == top {
                let staircase = Monomial::new((1..n as u32).rev().collect());
                break self.publish(cur.clone(), SparsePolynomial::monomial(staircase, 1));
            }
            let ascents = cur.stabilize(n)?.ascents();
            let i = match self.policy {
                DescentPolicy::LargestFirst => ascents.last(),
                DescentPolicy::SmallestFirst => ascents.first(),
            }
            .copied()
            .expect("only w∘ has no ascent in S_n");
            steps.push(i);
            cur = cur.right_multiply_simple(i)?;
        };
        for &i in steps.iter().rev() {
            cur = cur.right_multiply_simple(i)?;
            poly = self.publish(cur.trimmed(), poly.divided_difference(i));
        }
        debug_assert_eq!(cur, w);
        Ok(poly)
    }

    /// Schubert–Kostka number `[x^α] Sch_w`.
    pub fn schubert_kostka(
        &self,
        w: &Permutation,
        alpha: &Monomial,
    ) -> Result<BigInt, SchubertError> {
        Ok(self.schubert_polynomial(w)?.coefficient(alpha))
    }

    /// Expands `p` in the Schubert basis.
    ///
    /// Each homogeneous component is peeled in increasing degree: take the
    /// lex-minimal monomial `x^α`, let `w` be the permutation with code `α`,
    /// record its coefficient `c`, subtract `c·Sch_w`. The result is checked
    /// to recombine to `p` exactly.
    pub fn expand_in_schubert_basis(
        &self,
        p: &SparsePolynomial,
    ) -> Result<SchubertExpansion, SchubertError> {
        let mut expansion = SchubertExpansion::empty(1);
        for (_, component) in p.homogeneous_components() {
            let mut rest = component;
            while let Ok(m) = rest.lex_min_monomial() {
                let m = m.clone();
                let code: Vec<usize> = m.exponents().iter().map(|&e| e as usize).collect();
                let w = LehmerCode::padded(&code).to_permutation();
                let c = rest.coefficient(&m);
                let sch = self.schubert_polynomial(&w)?;
                rest.add_scaled(&sch, &-&c);
                assert!(
                    rest.lex_min_monomial().map_or(true, |next| *next > m),
                    "peeling Sch_{w} did not clear its leading monomial {m}"
                );
                expansion.ambient_rank = expansion.ambient_rank.max(w.trimmed_rank());
                expansion.add(w, c);
            }
        }
        assert_eq!(
            &expansion.to_polynomial(self)?,
            p,
            "Schubert expansion does not recombine to its input"
        );
        Ok(expansion)
    }

    /// Expansion of `Sch_u · Sch_v`, with ambient rank `n_u + n_v` on
    /// trimmed windows. Memoized.
    pub fn expand_product(
        &self,
        u: &Permutation,
        v: &Permutation,
    ) -> Result<Arc<SchubertExpansion>, SchubertError> {
        self.rank_bound.check(u)?;
        self.rank_bound.check(v)?;
        let (u, v) = (u.trimmed(), v.trimmed());
        let key = if u <= v { (u, v) } else { (v, u) };
        if let Some(e) = self.products.read().unwrap().get(&key) {
            return Ok(e.clone());
        }
        let ambient = key.0.trimmed_rank() + key.1.trimmed_rank();
        let product = &*self.schubert_polynomial(&key.0)? * &*self.schubert_polynomial(&key.1)?;
        let mut expansion = self.expand_in_schubert_basis(&product)?;
        if let Some((w, _)) = expansion.terms().find(|(w, _)| w.trimmed_rank() > ambient) {
            return Err(SchubertError::AmbientRankExceeded {
                w: w.clone(),
                ambient,
            });
        }
        expansion.ambient_rank = ambient;
        let e = Arc::new(expansion);
        Ok(self
            .products
            .write()
            .unwrap()
            .entry(key)
            .or_insert(e)
            .clone())
    }

    /// Schubert coefficient `c^w_{u,v}`.
    pub fn schubert_coefficient(
        &self,
        u: &Permutation,
        v: &Permutation,
        w: &Permutation,
    ) -> Result<BigInt, SchubertError> {
        self.rank_bound.check(w)?;
        if w.length() != u.length() + v.length() {
            self.rank_bound.check(u)?;
            self.rank_bound.check(v)?;
            return Ok(BigInt::zero());
        }
        Ok(self.expand_product(u, v)?.coefficient(w))
    }

    /// Decides `c^w_{u,v} > 0`; the certificate carries the full expansion.
    pub fn is_positive(
        &self,
        u: &Permutation,
        v: &Permutation,
        w: &Permutation,
    ) -> Result<PositivityCertificate, SchubertError> {
        self.rank_bound.check(w)?;
        let expansion = self.expand_product(u, v)?;
        Ok(PositivityCertificate {
            u: u.trimmed(),
            v: v.trimmed(),
            w: w.trimmed(),
            coefficient: expansion.coefficient(w),
            expansion,
        })
    }

    /// All reduced pipe dreams of `w`.
    pub fn pipe_dreams(&self, w: &Permutation) -> Result<Vec<PipeDream>, SchubertError> {
        self.rank_bound.check(w)?;
        Ok(pipedream::enumerate(w))
    }

    /// Monk's rule: `Sch_{s_r} · Sch_w = Σ Sch_{w t_{ik}}` over `i ≤ r < k`
    /// with `ℓ(w t_{ik}) = ℓ(w) + 1`.
    pub fn monk_multiply(
        &self,
        r: usize,
        w: &Permutation,
    ) -> Result<SchubertExpansion, SchubertError> {
        if r == 0 {
            return Err(SchubertError::ZeroPosition);
        }
        self.rank_bound.check(w)?;
        let n = w.trimmed_rank().max(r) + 1;
        self.rank_bound.check_rank(n)?;
        let w = w.trimmed().stabilize(n)?;
        let target = w.length() + 1;
        let mut out = SchubertExpansion::empty(n);
        for i in 1..=r {
            for k in r + 1..=n {
                let t = w.right_multiply_transposition(i, k)?;
                if t.length() == target {
                    out.add(t, BigInt::from(1));
                }
            }
        }
        Ok(out)
    }
}

/// The Grassmannian permutation with its only descent at `k` whose
/// Schubert polynomial is the Schur polynomial `s_λ(x1, …, xk)`.
///
/// `w(j) = λ_{k+1-j} + j` for `j ≤ k`, and the remaining values follow in
/// increasing order.
pub fn grassmannian_permutation(
    lambda: &Partition,
    k: usize,
) -> Result<Permutation, SchubertError> {
    let parts = lambda.parts();
    if parts.len() > k {
        return Err(SchubertError::TooManyParts {
            partition: parts.to_vec(),
            k,
        });
    }
    let n = k + parts.first().copied().unwrap_or(0);
    let part = |i: usize| parts.get(i - 1).copied().unwrap_or(0);
    let mut window: Vec<usize> = (1..=k).map(|j| part(k + 1 - j) + j).collect();
    let mut used = vec![false; n + 1];
    for &v in &window {
        used[v] = true;
    }
    window.extend((1..=n).filter(|&v| !used[v]));
    Ok(Permutation::new(window)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn poly(s: &str) -> SparsePolynomial {
        s.parse().unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn expansion(pairs: &[(&str, i64)]) -> Vec<(Permutation, BigInt)> {
        pairs
            .iter()
            .map(|(w, c)| (p(w), BigInt::from(*c)))
            .collect()
    }

    fn terms(e: &SchubertExpansion) -> Vec<(Permutation, BigInt)> {
        e.terms().map(|(w, c)| (w.clone(), c.clone())).collect()
    }

    #[test]
    fn polynomial_examples() {
        let eng = SchubertEngine::new();
        assert_eq!(
            *eng.schubert_polynomial(&p("123")).unwrap(),
            SparsePolynomial::one()
        );
        assert_eq!(
            *eng.schubert_polynomial(&p("321")).unwrap(),
            poly("x1^2*x2")
        );
        assert_eq!(
            *eng.schubert_polynomial(&p("132")).unwrap(),
            poly("x1 + x2")
        );
        assert_eq!(*eng.schubert_polynomial(&p("312")).unwrap(), poly("x1^2"));
        assert_eq!(
            *eng.schubert_polynomial(&p("1423")).unwrap(),
            poly("x1^2 + x1*x2 + x2^2")
        );
        assert_eq!(
            *eng.schubert_polynomial(&p("2143")).unwrap(),
            poly("x1^2 + x1*x2 + x1*x3")
        );
        // stable under embedding
        assert_eq!(
            eng.schubert_polynomial(&p("13245")).unwrap(),
            eng.schubert_polynomial(&p("132")).unwrap()
        );
    }

    #[test]
    fn kostka_examples() {
        let eng = SchubertEngine::new();
        let k = |w: &str, a: &[u32]| eng.schubert_kostka(&p(w), &mono(a)).unwrap();
        assert_eq!(k("321", &[2, 1]), BigInt::from(1));
        assert_eq!(k("132", &[1, 0]), BigInt::from(1));
        assert_eq!(k("132", &[2, 0]), BigInt::from(0));
    }

    #[test]
    fn rank_bound_enforced() {
        let eng = SchubertEngine::with_rank_bound(3);
        assert!(eng.schubert_polynomial(&p("321")).is_ok());
        assert!(matches!(
            eng.schubert_polynomial(&p("1432")),
            Err(SchubertError::Permutation(PermutationError::RankBound {
                rank: 4,
                bound: 3
            }))
        ));
        // trailing fixed points do not count
        assert!(eng.schubert_polynomial(&p("21345")).is_ok());
        assert!(eng.monk_multiply(3, &p("1")).is_err());
    }

    #[test]
    fn expansion_examples() {
        let eng = SchubertEngine::new();
        let e = eng.expand_in_schubert_basis(&poly("x1^2")).unwrap();
        assert_eq!(terms(&e), expansion(&[("312", 1)]));
        let e = eng
            .expand_in_schubert_basis(&poly("x1 + x2").pow(2))
            .unwrap();
        assert_eq!(terms(&e), expansion(&[("1423", 1), ("231", 1)]));
        assert!(!e.is_signed());
        let e = eng
            .expand_in_schubert_basis(&SparsePolynomial::zero())
            .unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn signed_and_inhomogeneous_expansion() {
        let eng = SchubertEngine::new();
        // x2 = Sch_132 - Sch_21
        let e = eng.expand_in_schubert_basis(&poly("x2")).unwrap();
        assert!(e.is_signed());
        assert_eq!(terms(&e), expansion(&[("132", 1), ("21", -1)]));
        let e = eng
            .expand_in_schubert_basis(&poly("3 + x1 + x1^2"))
            .unwrap();
        assert_eq!(terms(&e), expansion(&[("1", 3), ("21", 1), ("312", 1)]));
        assert_eq!(e.ambient_rank(), 3);
    }

    #[test]
    fn coefficient_examples() {
        let eng = SchubertEngine::new();
        let c = |u: &str, v: &str, w: &str| eng.schubert_coefficient(&p(u), &p(v), &p(w)).unwrap();
        assert_eq!(c("213", "213", "312"), BigInt::from(1));
        assert_eq!(c("132", "132", "231"), BigInt::from(1));
        assert_eq!(c("123", "1423", "1423"), BigInt::from(1));
        assert_eq!(c("213", "213", "231"), BigInt::from(0));
        assert_eq!(c("213", "213", "21"), BigInt::from(0));
    }

    #[test]
    fn positivity_examples() {
        let eng = SchubertEngine::new();
        let pos = |u: &str, v: &str, w: &str| eng.is_positive(&p(u), &p(v), &p(w)).unwrap();
        let cert = pos("213", "213", "312");
        assert!(cert.is_positive());
        assert!(cert.verify(&eng).unwrap());
        assert!(!pos("213", "213", "231").is_positive());
        assert!(pos("1", "2413", "2413").is_positive());
    }

    #[test]
    fn product_ambient_rank() {
        let eng = SchubertEngine::new();
        let e = eng.expand_product(&p("132"), &p("132")).unwrap();
        assert_eq!(e.ambient_rank(), 6);
        assert_eq!(terms(&e), expansion(&[("1423", 1), ("231", 1)]));
    }

    #[test]
    fn monk_examples() {
        let eng = SchubertEngine::new();
        assert_eq!(
            terms(&eng.monk_multiply(1, &p("1")).unwrap()),
            expansion(&[("213", 1)])
        );
        assert_eq!(
            terms(&eng.monk_multiply(1, &p("213")).unwrap()),
            expansion(&[("312", 1)])
        );
        assert_eq!(
            terms(&eng.monk_multiply(2, &p("1324")).unwrap()),
            expansion(&[("1423", 1), ("2314", 1)])
        );
        assert_eq!(
            eng.monk_multiply(0, &p("1")),
            Err(SchubertError::ZeroPosition)
        );
    }

    #[test]
    fn grassmannian_examples() {
        let g = |parts: &[usize], k| {
            grassmannian_permutation(&Partition::new(parts.to_vec()).unwrap(), k).unwrap()
        };
        assert_eq!(g(&[1], 1), p("21"));
        assert_eq!(g(&[1, 1], 2), p("231"));
        assert_eq!(g(&[2], 2), p("1423"));
        assert_eq!(g(&[], 3), p("1"));
        assert_eq!(g(&[2, 1], 2).descents(), vec![2]);
        assert!(matches!(
            grassmannian_permutation(&Partition::new(vec![1, 1, 1]).unwrap(), 2),
            Err(SchubertError::TooManyParts { k: 2, .. })
        ));
    }

    #[test]
    fn expansion_json() {
        let eng = SchubertEngine::new();
        let e = eng.expand_product(&p("132"), &p("132")).unwrap();
        let json = serde_json::to_string(&*e).unwrap();
        assert_eq!(
            json,
            r#"{"ambient_rank":6,"terms":[{"w":[1,4,2,3],"coeff":"1"},{"w":[2,3,1],"coeff":"1"}],"signed":false}"#
        );
        let back: SchubertExpansion = serde_json::from_str(&json).unwrap();
        assert_eq!(back, *e);
        let lying = r#"{"ambient_rank":2,"terms":[{"w":[2,1],"coeff":"-1"}],"signed":false}"#;
        assert!(serde_json::from_str::<SchubertExpansion>(lying).is_err());
        assert_eq!(e.to_string(), "Sch_1423 + Sch_231");
    }

    #[test]
    fn concurrent_cache_use() {
        let eng = SchubertEngine::new();
        let all = Permutation::all(4);
        std::thread::scope(|s| {
            for chunk in all.chunks(6) {
                let eng = &eng;
                s.spawn(move || {
                    for w in chunk {
                        eng.schubert_polynomial(w).unwrap();
                    }
                });
            }
        });
        let fresh = SchubertEngine::new();
        for w in &all {
            assert_eq!(
                eng.schubert_polynomial(w).unwrap(),
                fresh.schubert_polynomial(w).unwrap()
            );
        }
    }
}
