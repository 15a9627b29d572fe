//! The quantum exterior algebra on `m` generators as a confluent rewriting
//! system producing normal forms in the monomial basis `{v_S}`, plus a
//! diamond-lemma ambiguity checker.
//!
//! Generators are stored by position `1..=m` under the ordering
//! `v_1 = a_1, …, v_n = a_n, (v_{n+1} = u for odd m), v_{m+1-i} = b_i`.
//! The involution `i ↦ i' = m+1-i` pairs `a_i` with `b_i` and fixes `u`.
//!
//! Rewrite rules, applied leftmost-innermost:
//! - equal adjacent indices: squares vanish, except `u·u` which rewrites to
//!   a combination of `a_j b_j` pairs (odd `m` only);
//! - out-of-order adjacent pair: swap with factor `-q^2`, except the pairs
//!   `b_i a_i` which rewrite to `-a_i b_i` plus lower correction terms.
//!
//! Termination follows from the lexicographic word order; confluence is
//! checked mechanically by [`ambiguity_check`].

use crate::qcombinat;
use crate::ratfun::RatFun;
use itertools::Itertools;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtAlgError {
    #[error("generator index {index} out of range 1..={m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("monomial indices must be strictly increasing")]
    NotIncreasing,
    #[error("cannot combine elements over different m: {0} vs {1}")]
    MixedM(usize, usize),
}

/// Classification of a generator position for a given `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenClass {
    /// `a_i` with the contained lowering index `i` (position `i ≤ n`).
    A(usize),
    /// The middle generator `u` (odd `m` only).
    U,
    /// `b_i` with index `i` (position `m+1-i`).
    B(usize),
}

/// Classify position `1..=m`.
pub fn classify(m: usize, pos: usize) -> GenClass {
    let n = m / 2;
    if pos <= n {
        GenClass::A(pos)
    } else if m % 2 == 1 && pos == n + 1 {
        GenClass::U
    } else {
        GenClass::B(m + 1 - pos)
    }
}

/// The pairing involution `i ↦ m+1-i`.
pub fn prime(m: usize, pos: usize) -> usize {
    m + 1 - pos
}

/// A strictly increasing sequence of generator positions (the set `S`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtMonomial(Vec<usize>);

impl ExtMonomial {
    pub fn new(indices: Vec<usize>, m: usize) -> Result<Self, ExtAlgError> {
        for &i in &indices {
            if i < 1 || i > m {
                return Err(ExtAlgError::IndexOutOfRange { index: i, m });
            }
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(ExtAlgError::NotIncreasing);
        }
        Ok(ExtMonomial(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

impl std::fmt::Display for ExtMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v{{{}}}", self.0.iter().join(","))
    }
}

/// A normal-form linear combination of basis monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtElement {
    m: usize,
    terms: BTreeMap<ExtMonomial, RatFun>,
}

impl ExtElement {
    pub fn zero(m: usize) -> Self {
        ExtElement {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(m: usize) -> Self {
        ExtElement::monomial(m, ExtMonomial(Vec::new()), RatFun::one())
    }

    pub fn monomial(m: usize, mono: ExtMonomial, coeff: RatFun) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        ExtElement { m, terms }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtMonomial, &RatFun)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &ExtMonomial) -> RatFun {
        self.terms.get(mono).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExtAlgError> {
        if self.m != other.m {
            return Err(ExtAlgError::MixedM(self.m, other.m));
        }
        let mut terms = self.terms.clone();
        for (mono, c) in &other.terms {
            add_term(&mut terms, mono.clone(), c.clone());
        }
        Ok(ExtElement { m: self.m, terms })
    }

    pub fn scale(&self, c: &RatFun) -> Self {
        if c.is_zero() {
            return ExtElement::zero(self.m);
        }
        ExtElement {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(mono, v)| (mono.clone(), v * c))
                .collect(),
        }
    }

    /// True iff every stored monomial has the same degree `k`.
    pub fn homogeneous_of_degree(&self, k: usize) -> bool {
        self.terms.keys().all(|mono| mono.degree() == k)
    }
}

impl std::fmt::Display for ExtElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(mono, c)| {
                if c.is_one() {
                    mono.to_string()
                } else {
                    format!("({})*{}", c, mono)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn add_term(terms: &mut BTreeMap<ExtMonomial, RatFun>, mono: ExtMonomial, c: RatFun) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&mono) {
        Some(old) => {
            let s = &*old + &c;
            if s.is_zero() {
                terms.remove(&mono);
            } else {
                *old = s;
            }
        }
        None => {
            terms.insert(mono, c);
        }
    }
}

// ---------------------------------------------------------------------------
// Rewriting
// ---------------------------------------------------------------------------

fn minus_q2() -> RatFun {
    -RatFun::q_pow(2)
}

fn skein() -> RatFun {
    // q^2 - q^-2
    &RatFun::q_pow(2) - &RatFun::q_pow(-2)
}

/// Whether the adjacent pair `(x, y)` is reducible: repeated index or out
/// of order.
pub fn pair_reducible(x: usize, y: usize) -> bool {
    x >= y
}

/// The one-step rewrite of the adjacent pair `(x, y)`, as a list of
/// `(replacement subword, coefficient)`. Empty list means the pair rewrites
/// to zero.
fn rewrite_pair(m: usize, x: usize, y: usize) -> Vec<(Vec<usize>, RatFun)> {
    debug_assert!(pair_reducible(x, y));
    let n = m / 2;
    let odd = m % 2 == 1;
    if x == y {
        if odd && x == n + 1 {
            // u^2 = q * sum_{k=1..n} (-q^2)^{-k} (q^2 - q^-2) a_{n+1-k} b_{n+1-k}
            return (1..=n as i64)
                .map(|k| {
                    let i = n + 1 - k as usize;
                    let c = &(&RatFun::q() * &minus_q2().pow(-k)) * &skein();
                    (vec![i, prime(m, i)], c)
                })
                .collect();
        }
        return Vec::new(); // squares vanish
    }
    // x > y: out of order.
    if let (GenClass::B(i), GenClass::A(j)) = (classify(m, x), classify(m, y)) {
        if i == j {
            // b_i a_i = -a_i b_i - sum_{k=1..i-1} (-q^2)^{-k+1}(q^2-q^-2) a_{i-k} b_{i-k}
            let mut out = vec![(vec![y, x], -RatFun::one())];
            for k in 1..=(i as i64 - 1) {
                let j = i - k as usize;
                let c = -&(&minus_q2().pow(1 - k) * &skein());
                out.push((vec![j, prime(m, j)], c));
            }
            return out;
        }
    }
    vec![(vec![y, x], minus_q2())]
}

/// Index of the leftmost reducible adjacent pair, if any.
fn first_reducible(word: &[usize]) -> Option<usize> {
    (0..word.len().saturating_sub(1)).find(|&i| pair_reducible(word[i], word[i + 1]))
}

/// Apply the rewrite rule at position `i` of `word`, producing the
/// replacement linear combination of words.
fn apply_at(m: usize, word: &[usize], i: usize, coeff: &RatFun) -> Vec<(Vec<usize>, RatFun)> {
    rewrite_pair(m, word[i], word[i + 1])
        .into_iter()
        .map(|(sub, c)| {
            let mut w = Vec::with_capacity(word.len() + sub.len() - 2);
            w.extend_from_slice(&word[..i]);
            w.extend_from_slice(&sub);
            w.extend_from_slice(&word[i + 2..]);
            (w, coeff * &c)
        })
        .collect()
}

/// Fully normalize a linear combination of words.
fn normalize(m: usize, terms: Vec<(Vec<usize>, RatFun)>) -> ExtElement {
    let mut out: BTreeMap<ExtMonomial, RatFun> = BTreeMap::new();
    let mut stack = terms;
    while let Some((word, coeff)) = stack.pop() {
        if coeff.is_zero() {
            continue;
        }
        match first_reducible(&word) {
            None => add_term(&mut out, ExtMonomial(word), coeff),
            Some(i) => stack.extend(apply_at(m, &word, i, &coeff)),
        }
    }
    ExtElement { m, terms: out }
}

/// Normal form of the product `v_{w1} ⋯ v_{wd}`.
pub fn nf_word(m: usize, word: &[usize]) -> Result<ExtElement, ExtAlgError> {
    for &i in word {
        if i < 1 || i > m {
            return Err(ExtAlgError::IndexOutOfRange { index: i, m });
        }
    }
    Ok(normalize(m, vec![(word.to_vec(), RatFun::one())]))
}

/// Normal form of a general linear combination of words (positions may be
/// arbitrary within `1..=m`).
pub fn nf_lincomb(m: usize, terms: Vec<(Vec<usize>, RatFun)>) -> Result<ExtElement, ExtAlgError> {
    for (word, _) in &terms {
        for &i in word {
            if i < 1 || i > m {
                return Err(ExtAlgError::IndexOutOfRange { index: i, m });
            }
        }
    }
    Ok(normalize(m, terms))
}

/// Bilinear, associative product of two normal-form elements.
pub fn multiply(x: &ExtElement, y: &ExtElement) -> Result<ExtElement, ExtAlgError> {
    if x.m != y.m {
        return Err(ExtAlgError::MixedM(x.m, y.m));
    }
    let mut terms = Vec::new();
    for (mx, cx) in &x.terms {
        for (my, cy) in &y.terms {
            let mut word = mx.0.clone();
            word.extend_from_slice(&my.0);
            terms.push((word, cx * cy));
        }
    }
    Ok(normalize(x.m, terms))
}

/// All degree-`k` basis monomials (k-subsets of `1..=m` in lexicographic
/// order); empty for `k > m`.
pub fn basis(m: usize, k: usize) -> Vec<ExtMonomial> {
    (1..=m).combinations(k).map(ExtMonomial).collect()
}

// ---------------------------------------------------------------------------
// Diamond-lemma ambiguity check
// ---------------------------------------------------------------------------

/// One overlap ambiguity verdict: the length-3 word `(x, y, z)` where both
/// `(x,y)` and `(y,z)` are reducible, resolved in both orders.
#[derive(Debug, Clone, Serialize)]
pub struct Ambiguity {
    pub word: Vec<usize>,
    pub pass: bool,
    pub left_then_full: String,
    pub right_then_full: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmbiguityReport {
    pub m: usize,
    pub total: usize,
    pub failures: usize,
    pub entries: Vec<Ambiguity>,
}

/// Enumerate every length-3 word whose two adjacent pairs are both
/// reducible, reduce by both orders of first rule application followed by
/// full normalization, and compare.
pub fn ambiguity_check(m: usize) -> AmbiguityReport {
    let mut entries = Vec::new();
    for x in 1..=m {
        for y in 1..=m {
            for z in 1..=m {
                if !(pair_reducible(x, y) && pair_reducible(y, z)) {
                    continue;
                }
                let word = vec![x, y, z];
                let one = RatFun::one();
                let left = normalize(m, apply_at(m, &word, 0, &one));
                let right = normalize(m, apply_at(m, &word, 1, &one));
                entries.push(Ambiguity {
                    word,
                    pass: left == right,
                    left_then_full: left.to_string(),
                    right_then_full: right.to_string(),
                });
            }
        }
    }
    let total = entries.len();
    let failures = entries.iter().filter(|e| !e.pass).count();
    AmbiguityReport {
        m,
        total,
        failures,
        entries,
    }
}

// ---------------------------------------------------------------------------
// Equivalent (non-confluent) presentation check
// ---------------------------------------------------------------------------

/// The relations of the original presentation of the algebra, each written
/// as a linear combination of words that must normalize to zero. Covers the
/// `b_{i+1}a_{i+1}` recursion, the odd-middle relation, and the
/// quadratic-form relation for both parities.
pub fn original_presentation_relations(m: usize) -> Vec<(String, Vec<(Vec<usize>, RatFun)>)> {
    let n = m / 2;
    let odd = m % 2 == 1;
    let a = |i: usize| i; // position of a_i
    let b = |i: usize| prime(m, i); // position of b_i
    let mut rels: Vec<(String, Vec<(Vec<usize>, RatFun)>)> = Vec::new();
    // b_{i+1} a_{i+1} + a_{i+1} b_{i+1} + q^-2 b_i a_i + q^2 a_i b_i = 0, i < n
    for i in 1..n {
        rels.push((
            format!("pair_recursion_i={i}"),
            vec![
                (vec![b(i + 1), a(i + 1)], RatFun::one()),
                (vec![a(i + 1), b(i + 1)], RatFun::one()),
                (vec![b(i), a(i)], RatFun::q_pow(-2)),
                (vec![a(i), b(i)], RatFun::q_pow(2)),
            ],
        ));
    }
    if odd {
        let u = n + 1;
        if n >= 1 {
            // b_n a_n + q^4 a_n b_n + q^3 u^2 = 0
            rels.push((
                "middle_pair".to_string(),
                vec![
                    (vec![b(n), a(n)], RatFun::one()),
                    (vec![a(n), b(n)], RatFun::q_pow(4)),
                    (vec![u, u], RatFun::q_pow(3)),
                ],
            ));
        }
        // (-q^2)^n/(q+q^-1) u^2 + sum ((-q^2)^{i-1} a_i b_i - (-q^2)^{2n-i} b_i a_i) = 0
        let mut terms = vec![(
            vec![u, u],
            &minus_q2().pow(n as i64) / &qcombinat::two(1),
        )];
        for i in 1..=n {
            terms.push((vec![a(i), b(i)], minus_q2().pow(i as i64 - 1)));
            terms.push((vec![b(i), a(i)], -minus_q2().pow(2 * n as i64 - i as i64)));
        }
        rels.push(("quadratic_form_odd".to_string(), terms));
    } else if n >= 1 {
        // sum ((-q^2)^{i-1} a_i b_i + (-q^2)^{2n-i-1} b_i a_i) = 0
        let mut terms = Vec::new();
        for i in 1..=n {
            terms.push((vec![a(i), b(i)], minus_q2().pow(i as i64 - 1)));
            terms.push((vec![b(i), a(i)], minus_q2().pow(2 * n as i64 - i as i64 - 1)));
        }
        rels.push(("quadratic_form_even".to_string(), terms));
    }
    rels
}
