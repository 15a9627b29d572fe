//! The quantum orthogonal algebra acting on the vector representation `V`,
//! on tensor words of exterior powers, and on each exterior power `Λ^k`;
//! plus equivariance testing and exact hom-space dimension computation.
//!
//! Generator actions on `V` (basis `v_1 … v_m` = `a_1 … a_n, (u), b_n … b_1`):
//! - pair node `i < n`: `F_i a_i = a_{i+1}`, `E_i a_{i+1} = a_i`,
//!   `F_i b_{i+1} = b_i`, `E_i b_i = b_{i+1}`;
//! - odd `m`, short node `n`: `F_n a_n = u`, `F_n u = (q+q^-1) b_n`,
//!   `E_n u = (q+q^-1) a_n`, `E_n b_n = u`;
//! - even `m`, fork node `n`: `E_n b_n = a_{n-1}`, `E_n b_{n-1} = a_n`,
//!   `F_n a_{n-1} = b_n`, `F_n a_n = b_{n-1}` (the root `ε_{n-1}+ε_n`
//!   action — the unique choice compatible with the sl₂ relations, the
//!   diagram automorphism σ, and invariance of the trivial vector);
//! - `K_i` eigenvalues are fixed so that each `(E_i, F_i, K_i)` satisfies
//!   `E F - F E = (K - K^-1)/(q_i - q_i^-1)` with `q_i = q^2` on long-type
//!   nodes and `q_n = q` on the odd short node;
//! - σ is `-1` on every `v_i` for odd `m`, and swaps `a_n ↔ b_n` fixing the
//!   rest for even `m`.
//!
//! Degenerate small ranks: `m = 1` has only σ = -1; `m = 2` has `K^{±1}`
//! (eigenvalues `q^{±2}` on `a_1, b_1`) and σ swapping `a_1 ↔ b_1`.

use crate::extalg::{self, ExtMonomial};
use crate::matrix::{self, FieldScalar, SpMat};
use crate::qcombinat::qint;
use crate::ratfun::RatFun;
use num_rational::BigRational;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QRepError {
    #[error("m must be at least 1")]
    InvalidM,
    #[error("exterior power degree {k} out of range for m={m}")]
    DegreeOutOfRange { k: usize, m: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("word mismatch: {0}")]
    WordMismatch(String),
    #[error("problem size {size} exceeds the cap {cap}; raise --max-dim / OWEB_MAX_DIM to proceed")]
    TooLarge { size: usize, cap: usize },
}

/// Algebra generators. `E/F/K/Kinv` indices run over the Dynkin nodes
/// `1..=n`; `Sigma` is the extending involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    E(usize),
    F(usize),
    K(usize),
    Kinv(usize),
    Sigma,
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::E(i) => write!(f, "E_{i}"),
            Generator::F(i) => write!(f, "F_{i}"),
            Generator::K(i) => write!(f, "K_{i}"),
            Generator::Kinv(i) => write!(f, "K_{i}^-1"),
            Generator::Sigma => write!(f, "sigma"),
        }
    }
}

/// An integer weight in the ε-coordinate basis (length `n = floor(m/2)`).
pub type WeightVec = Vec<i64>;

/// A sparse matrix between tensor-word spaces, tagged with its source and
/// target words. A word is a sequence of labels `k` naming `Λ^k` factors;
/// label 0 is the unit and is dropped in canonical form; any label `> m`
/// makes the space zero-dimensional.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub mat: SpMat<RatFun>,
}

/// Canonical form of a word: drop label-0 factors.
pub fn canonical_word(word: &[usize]) -> Vec<usize> {
    word.iter().copied().filter(|&k| k != 0).collect()
}

impl LinearMap {
    pub fn new(source: Vec<usize>, target: Vec<usize>, mat: SpMat<RatFun>) -> Self {
        LinearMap {
            source,
            target,
            mat,
        }
    }

    pub fn nnz(&self) -> usize {
        self.mat.nnz()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero_matrix()
    }

    /// Composition `self` first, `then` second (diagram order).
    pub fn then(&self, then: &LinearMap) -> Result<LinearMap, QRepError> {
        if canonical_word(&self.target) != canonical_word(&then.source) {
            return Err(QRepError::WordMismatch(format!(
                "compose: target {:?} vs source {:?}",
                self.target, then.source
            )));
        }
        Ok(LinearMap {
            source: self.source.clone(),
            target: then.target.clone(),
            mat: then.mat.matmul(&self.mat),
        })
    }

    pub fn tensor(&self, other: &LinearMap) -> LinearMap {
        let mut source = self.source.clone();
        source.extend_from_slice(&other.source);
        let mut target = self.target.clone();
        target.extend_from_slice(&other.target);
        LinearMap {
            source,
            target,
            mat: self.mat.kron(&other.mat),
        }
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap, QRepError> {
        if canonical_word(&self.source) != canonical_word(&other.source)
            || canonical_word(&self.target) != canonical_word(&other.target)
        {
            return Err(QRepError::WordMismatch(format!(
                "sum: ({:?} -> {:?}) vs ({:?} -> {:?})",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(LinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            mat: self.mat.add(&other.mat),
        })
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap, QRepError> {
        self.add(&other.scale(&-RatFun::one()))
    }

    pub fn scale(&self, c: &RatFun) -> LinearMap {
        LinearMap {
            source: self.source.clone(),
            target: self.target.clone(),
            mat: self.mat.scale(c),
        }
    }

    /// Semantic equality: canonical words match and matrices agree.
    pub fn equals(&self, other: &LinearMap) -> bool {
        canonical_word(&self.source) == canonical_word(&other.source)
            && canonical_word(&self.target) == canonical_word(&other.target)
            && self.mat == other.mat
    }
}

/// For fixed `m`: bases of all `Λ^k`, the action matrices of every
/// generator on each `Λ^k`, and weight tables. Immutable after
/// construction.
pub struct RepContext {
    m: usize,
    n: usize,
    odd: bool,
    generators: Vec<Generator>,
    bases: Vec<Vec<ExtMonomial>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    /// `lambda_act[(g, k)]`: matrix of `g` on `Λ^k`.
    lambda_act: HashMap<(Generator, usize), SpMat<RatFun>>,
    /// `weights[k][i]`: weight of the i-th basis monomial of `Λ^k`.
    weights: Vec<Vec<WeightVec>>,
    /// `q_i` per node index (1-based; `q^2` long, `q` odd short node).
    node_q: Vec<RatFun>,
}

/// The deformation parameter attached to node `i`.
fn node_q_value(m: usize, i: usize) -> RatFun {
    let n = m / 2;
    if m % 2 == 1 && i == n {
        RatFun::q()
    } else {
        RatFun::q_pow(2)
    }
}

pub fn build_context(m: usize) -> Result<RepContext, QRepError> {
    if m < 1 {
        return Err(QRepError::InvalidM);
    }
    let n = m / 2;
    let odd = m % 2 == 1;

    let mut generators = Vec::new();
    if m >= 3 {
        for i in 1..=n {
            generators.extend([
                Generator::E(i),
                Generator::F(i),
                Generator::K(i),
                Generator::Kinv(i),
            ]);
        }
    } else if m == 2 {
        generators.extend([Generator::K(1), Generator::Kinv(1)]);
    }
    generators.push(Generator::Sigma);

    let bases: Vec<Vec<ExtMonomial>> = (0..=m).map(|k| extalg::basis(m, k)).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> = bases
        .iter()
        .map(|b| {
            b.iter()
                .enumerate()
                .map(|(i, mono)| (mono.indices().to_vec(), i))
                .collect()
        })
        .collect();

    // Weight of a single generator position.
    let pos_weight = |pos: usize| -> WeightVec {
        let mut w = vec![0i64; n];
        match extalg::classify(m, pos) {
            extalg::GenClass::A(i) => w[i - 1] = 1,
            extalg::GenClass::U => {}
            extalg::GenClass::B(i) => w[i - 1] = -1,
        }
        w
    };
    let weights: Vec<Vec<WeightVec>> = bases
        .iter()
        .map(|b| {
            b.iter()
                .map(|mono| {
                    let mut w = vec![0i64; n];
                    for &p in mono.indices() {
                        for (a, b) in w.iter_mut().zip(pos_weight(p)) {
                            *a += b;
                        }
                    }
                    w
                })
                .collect()
        })
        .collect();

    let node_q = (0..=n).map(|i| node_q_value(m, i.max(1))).collect();

    let mut ctx = RepContext {
        m,
        n,
        odd,
        generators,
        bases,
        index,
        lambda_act: HashMap::new(),
        weights,
        node_q,
    };
    ctx.build_v_actions();
    ctx.build_lambda_actions();
    Ok(ctx)
}

impl RepContext {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// `q_i` for node `i`.
    pub fn node_q(&self, i: usize) -> &RatFun {
        &self.node_q[i]
    }

    pub fn dim_lambda(&self, k: usize) -> usize {
        if k > self.m {
            0
        } else {
            self.bases[k].len()
        }
    }

    pub fn basis_of(&self, k: usize) -> &[ExtMonomial] {
        &self.bases[k]
    }

    pub fn index_of(&self, k: usize, mono: &ExtMonomial) -> usize {
        self.index[k][mono.indices()]
    }

    pub fn word_dim(&self, word: &[usize]) -> usize {
        word.iter().map(|&k| self.dim_lambda(k)).product()
    }

    pub fn weight_of(&self, k: usize, idx: usize) -> &WeightVec {
        &self.weights[k][idx]
    }

    fn set_act(&mut self, g: Generator, k: usize, mat: SpMat<RatFun>) {
        self.lambda_act.insert((g, k), mat);
    }

    /// Matrix of a generator on `Λ^k` (zero-size for `k > m`).
    pub fn act_on_lambda(&self, g: Generator, k: usize) -> SpMat<RatFun> {
        if k > self.m {
            return SpMat::zero(0, 0);
        }
        self.lambda_act[&(g, k)].clone()
    }

    /// Sparse column expansion of `g · v_pos` on `V` (1-based positions).
    fn v_column(&self, g: Generator, pos: usize) -> Vec<(usize, RatFun)> {
        self.lambda_act[&(g, 1)]
            .transpose()
            .row(pos - 1)
            .iter()
            .map(|(r, c)| (r + 1, c.clone()))
            .collect()
    }

    /// Diagonal eigenvalue of `K_i` (or its inverse) on `v_pos`.
    fn k_eig(&self, i: usize, inv: bool, pos: usize) -> RatFun {
        let g = if inv {
            Generator::Kinv(i)
        } else {
            Generator::K(i)
        };
        self.lambda_act[&(g, 1)].get(pos - 1, pos - 1)
    }

    fn build_v_actions(&mut self) {
        let (m, n, odd) = (self.m, self.n, self.odd);
        let dim = m;
        let one = RatFun::one;
        // Collect triplets (target-1, source-1, coeff) per generator.
        let mut trip: HashMap<Generator, Vec<(usize, usize, RatFun)>> = HashMap::new();
        let mut put = |g: Generator, t: usize, s: usize, c: RatFun| {
            trip.entry(g).or_default().push((t - 1, s - 1, c));
        };
        let b = |i: usize| m + 1 - i; // position of b_i

        if m >= 3 {
            // Pair nodes i < n.
            for i in 1..n {
                put(Generator::E(i), i, i + 1, one()); // a_{i+1} -> a_i
                put(Generator::E(i), b(i + 1), b(i), one()); // b_i -> b_{i+1}
                put(Generator::F(i), i + 1, i, one()); // a_i -> a_{i+1}
                put(Generator::F(i), b(i), b(i + 1), one()); // b_{i+1} -> b_i
            }
            if odd {
                // Short node n: a_n, u, b_n at positions n, n+1, n+2.
                let two = qint(2, 1);
                put(Generator::E(n), n, n + 1, two.clone()); // u -> [2] a_n
                put(Generator::E(n), n + 1, n + 2, one()); // b_n -> u
                put(Generator::F(n), n + 1, n, one()); // a_n -> u
                put(Generator::F(n), n + 2, n + 1, two); // u -> [2] b_n
            } else {
                // Fork node n (root ε_{n-1} + ε_n).
                put(Generator::E(n), n - 1, n + 1, one()); // b_n -> a_{n-1}
                put(Generator::E(n), n, n + 2, one()); // b_{n-1} -> a_n
                put(Generator::F(n), n + 1, n - 1, one()); // a_{n-1} -> b_n
                put(Generator::F(n), n + 2, n, one()); // a_n -> b_{n-1}
            }
        }
        // K eigenvalues: K_i v = q^{2 (alpha_i, wt v)} with the pairing
        // normalized so the sl2 relations hold (see module docs).
        if m >= 2 {
            for i in 1..=n {
                let alpha: Vec<i64> = {
                    let mut a = vec![0i64; n];
                    if m >= 3 && i == n {
                        if odd {
                            a[n - 1] = 1; // ε_n
                        } else {
                            a[n - 2] = 1; // ε_{n-1} + ε_n
                            a[n - 1] = 1;
                        }
                    } else if i < n || m == 2 {
                        a[i - 1] = 1; // ε_i - ε_{i+1}
                        if i < n {
                            a[i] = -1;
                        }
                    }
                    a
                };
                for pos in 1..=m {
                    let wt = {
                        let mut w = vec![0i64; n];
                        match extalg::classify(m, pos) {
                            extalg::GenClass::A(j) => w[j - 1] = 1,
                            extalg::GenClass::U => {}
                            extalg::GenClass::B(j) => w[j - 1] = -1,
                        }
                        w
                    };
                    let pairing: i64 = alpha.iter().zip(&wt).map(|(a, w)| a * w).sum();
                    let e = 2 * pairing;
                    if e != 0 {
                        put(Generator::K(i), pos, pos, RatFun::q_pow(e));
                        put(Generator::Kinv(i), pos, pos, RatFun::q_pow(-e));
                    } else {
                        put(Generator::K(i), pos, pos, one());
                        put(Generator::Kinv(i), pos, pos, one());
                    }
                }
            }
        }
        // Sigma.
        if odd {
            for pos in 1..=m {
                put(Generator::Sigma, pos, pos, -one());
            }
        } else {
            for pos in 1..=m {
                let t = if pos == n { n + 1 } else if pos == n + 1 { n } else { pos };
                put(Generator::Sigma, t, pos, one());
            }
        }
        for (g, t) in trip {
            self.set_act(g, 1, SpMat::from_triplets(dim, dim, t));
        }
        // Any generator with no entries on V would be the zero matrix;
        // all declared generators act nontrivially, so none are missing.
        for g in self.generators.clone() {
            self.lambda_act
                .entry((g, 1))
                .or_insert_with(|| SpMat::zero(dim, dim));
        }
    }

    fn build_lambda_actions(&mut self) {
        let m = self.m;
        for k in (0..=m).filter(|&k| k != 1) {
            for g in self.generators.clone() {
                let mat = self.compute_lambda_action(g, k);
                self.set_act(g, k, mat);
            }
        }
    }

    /// Lift a basis monomial of `Λ^k` to the tensor word, apply the
    /// iterated coproduct of `g`, and multiply back down to normal form.
    fn compute_lambda_action(&self, g: Generator, k: usize) -> SpMat<RatFun> {
        let dim = self.dim_lambda(k);
        let mut triplets = Vec::new();
        for (col, mono) in self.bases[k].iter().enumerate() {
            let word = mono.indices();
            match g {
                Generator::K(i) | Generator::Kinv(i) => {
                    let inv = matches!(g, Generator::Kinv(_));
                    let mut c = RatFun::one();
                    for &p in word {
                        c = &c * &self.k_eig(i, inv, p);
                    }
                    triplets.push((col, col, c));
                }
                Generator::Sigma => {
                    if self.odd {
                        let sign = if k % 2 == 0 {
                            RatFun::one()
                        } else {
                            -RatFun::one()
                        };
                        triplets.push((col, col, sign));
                    } else {
                        let n = self.n;
                        let image: Vec<usize> = word
                            .iter()
                            .map(|&p| {
                                if p == n {
                                    n + 1
                                } else if p == n + 1 {
                                    n
                                } else {
                                    p
                                }
                            })
                            .collect();
                        let e = extalg::nf_word(self.m, &image).expect("valid word");
                        for (t, c) in e.terms() {
                            triplets.push((self.index_of(k, t), col, c.clone()));
                        }
                    }
                }
                Generator::E(i) => {
                    // Δ-iterate: Σ_j K ⊗ … ⊗ K ⊗ E_(j) ⊗ 1 ⊗ … ⊗ 1
                    let mut pre = RatFun::one();
                    for j in 0..k {
                        for (t, c) in self.v_column(g, word[j]) {
                            let mut w = word.to_vec();
                            w[j] = t;
                            let e = extalg::nf_word(self.m, &w).expect("valid word");
                            let factor = &pre * &c;
                            for (tm, tc) in e.terms() {
                                triplets.push((self.index_of(k, tm), col, &factor * tc));
                            }
                        }
                        pre = &pre * &self.k_eig(i, false, word[j]);
                    }
                }
                Generator::F(i) => {
                    // Δ-iterate: Σ_j 1 ⊗ … ⊗ F_(j) ⊗ K^-1 ⊗ … ⊗ K^-1
                    for j in 0..k {
                        let mut post = RatFun::one();
                        for &p in &word[j + 1..] {
                            post = &post * &self.k_eig(i, true, p);
                        }
                        for (t, c) in self.v_column(g, word[j]) {
                            let mut w = word.to_vec();
                            w[j] = t;
                            let e = extalg::nf_word(self.m, &w).expect("valid word");
                            let factor = &post * &c;
                            for (tm, tc) in e.terms() {
                                triplets.push((self.index_of(k, tm), col, &factor * tc));
                            }
                        }
                    }
                }
            }
        }
        // Triplet entries for the transposed orientation: we pushed
        // (row, col, c) with row = target index.
        SpMat::from_triplets(dim, dim, triplets.into_iter().map(|(r, c, v)| (r, c, v)))
    }

    /// Matrix of a generator on a tensor word via the iterated coproduct.
    /// The leftmost factor is most significant in the mixed-radix index.
    pub fn act_on_word(&self, g: Generator, word: &[usize]) -> SpMat<RatFun> {
        let dim = self.word_dim(word);
        if word.is_empty() {
            // Counit: E, F -> 0; K, sigma -> 1.
            return match g {
                Generator::E(_) | Generator::F(_) => SpMat::zero(1, 1),
                _ => SpMat::identity(1),
            };
        }
        if dim == 0 {
            return SpMat::zero(0, 0);
        }
        match g {
            Generator::K(_) | Generator::Kinv(_) | Generator::Sigma => {
                let mut acc = SpMat::identity(1);
                for &k in word {
                    acc = acc.kron(&self.act_on_lambda(g, k));
                }
                acc
            }
            Generator::E(i) => {
                let mut total = SpMat::zero(dim, dim);
                for j in 0..word.len() {
                    let mut acc = SpMat::identity(1);
                    for (l, &k) in word.iter().enumerate() {
                        let factor = if l < j {
                            self.act_on_lambda(Generator::K(i), k)
                        } else if l == j {
                            self.act_on_lambda(g, k)
                        } else {
                            SpMat::identity(self.dim_lambda(k))
                        };
                        acc = acc.kron(&factor);
                    }
                    total = total.add(&acc);
                }
                total
            }
            Generator::F(i) => {
                let mut total = SpMat::zero(dim, dim);
                for j in 0..word.len() {
                    let mut acc = SpMat::identity(1);
                    for (l, &k) in word.iter().enumerate() {
                        let factor = if l > j {
                            self.act_on_lambda(Generator::Kinv(i), k)
                        } else if l == j {
                            self.act_on_lambda(g, k)
                        } else {
                            SpMat::identity(self.dim_lambda(k))
                        };
                        acc = acc.kron(&factor);
                    }
                    total = total.add(&acc);
                }
                total
            }
        }
    }

    /// Matrix of the antipode image `S(g)` on `Λ^k`:
    /// `S(E) = -K^-1 E`, `S(F) = -F K`, `S(K^{±1}) = K^{∓1}`, `S(σ) = σ`.
    pub fn antipode_on_lambda(&self, g: Generator, k: usize) -> SpMat<RatFun> {
        match g {
            Generator::E(i) => self
                .act_on_lambda(Generator::Kinv(i), k)
                .matmul(&self.act_on_lambda(g, k))
                .neg(),
            Generator::F(i) => self
                .act_on_lambda(g, k)
                .matmul(&self.act_on_lambda(Generator::K(i), k))
                .neg(),
            Generator::K(i) => self.act_on_lambda(Generator::Kinv(i), k),
            Generator::Kinv(i) => self.act_on_lambda(Generator::K(i), k),
            Generator::Sigma => self.act_on_lambda(g, k),
        }
    }

    /// Action of `g` on the dual space `(Λ^k)^*` in the dual basis:
    /// `ρ*(g) = ρ(S(g))ᵀ`.
    pub fn dual_act_on_lambda(&self, g: Generator, k: usize) -> SpMat<RatFun> {
        self.antipode_on_lambda(g, k).transpose()
    }

    /// Weight multiplicities of a tensor word.
    pub fn weight_multiplicities(&self, word: &[usize]) -> HashMap<WeightVec, usize> {
        let mut out: HashMap<WeightVec, usize> = HashMap::new();
        for idx in self.word_basis_weights(word) {
            *out.entry(idx).or_insert(0) += 1;
        }
        out
    }

    /// Weight of every basis vector of a word, in mixed-radix order.
    pub fn word_basis_weights(&self, word: &[usize]) -> Vec<WeightVec> {
        let mut acc: Vec<WeightVec> = vec![vec![0i64; self.n]];
        for &k in word {
            let mut next = Vec::with_capacity(acc.len() * self.dim_lambda(k));
            for w in &acc {
                for fw in &self.weights[k] {
                    let mut s = w.clone();
                    for (a, b) in s.iter_mut().zip(fw) {
                        *a += b;
                    }
                    next.push(s);
                }
            }
            acc = next;
        }
        acc
    }

    /// True iff `f` commutes with every generator, including σ, as exact
    /// matrix identities.
    pub fn equivariance_check(&self, f: &LinearMap) -> bool {
        let sd = self.word_dim(&f.source);
        let td = self.word_dim(&f.target);
        if f.mat.ncols() != sd || f.mat.nrows() != td {
            return false;
        }
        for &g in &self.generators {
            let gs = self.act_on_word(g, &f.source);
            let gt = self.act_on_word(g, &f.target);
            if f.mat.matmul(&gs) != gt.matmul(&f.mat) {
                return false;
            }
        }
        true
    }

    /// sl₂ relation `E_i F_i - F_i E_i = (K_i - K_i^-1)/(q_i - q_i^-1)` on
    /// `Λ^k`, for every node.
    pub fn sl2_check(&self, k: usize) -> bool {
        if self.m < 3 {
            return true; // no E/F generators
        }
        for i in 1..=self.n {
            let e = self.act_on_lambda(Generator::E(i), k);
            let f = self.act_on_lambda(Generator::F(i), k);
            let kk = self.act_on_lambda(Generator::K(i), k);
            let ki = self.act_on_lambda(Generator::Kinv(i), k);
            let qi = &self.node_q[i];
            let denom = qi - &qi.inv();
            let lhs = e.matmul(&f).sub(&f.matmul(&e));
            let rhs = kk.sub(&ki).scale(&denom.inv());
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// σ-conjugation: `σ X σ = σ(X)` where σ is the diagram automorphism —
    /// central for odd `m`; for even `m ≥ 4` it swaps nodes `n-1` and `n`;
    /// for `m = 2` it inverts `K`.
    pub fn sigma_conjugation_check(&self, k: usize) -> bool {
        let s = self.act_on_lambda(Generator::Sigma, k);
        if s.matmul(&s) != SpMat::identity(self.dim_lambda(k)) {
            return false;
        }
        let conj = |x: &SpMat<RatFun>| s.matmul(x).matmul(&s);
        if self.m == 2 {
            let kk = self.act_on_lambda(Generator::K(1), k);
            let ki = self.act_on_lambda(Generator::Kinv(1), k);
            return conj(&kk) == ki;
        }
        if self.m < 3 {
            return true;
        }
        let image = |i: usize| -> usize {
            if self.odd {
                i
            } else if i == self.n {
                self.n - 1
            } else if i == self.n - 1 {
                self.n
            } else {
                i
            }
        };
        for i in 1..=self.n {
            let j = image(i);
            for (gi, gj) in [
                (Generator::E(i), Generator::E(j)),
                (Generator::F(i), Generator::F(j)),
                (Generator::K(i), Generator::K(j)),
                (Generator::Kinv(i), Generator::Kinv(j)),
            ] {
                if conj(&self.act_on_lambda(gi, k)) != self.act_on_lambda(gj, k) {
                    return false;
                }
            }
        }
        true
    }

    /// Dimension over ℚ(q) of the space of equivariant maps
    /// `source → target`, via weight matching plus kernel computation of the
    /// stacked commutation constraints (fraction-free elimination).
    pub fn hom_dim(
        &self,
        source: &[usize],
        target: &[usize],
        max_entries: usize,
    ) -> Result<usize, QRepError> {
        let acts: Vec<(SpMat<RatFun>, SpMat<RatFun>)> = self
            .generators
            .iter()
            .filter(|g| !matches!(g, Generator::K(_) | Generator::Kinv(_)))
            .map(|&g| (self.act_on_word(g, source), self.act_on_word(g, target)))
            .collect();
        hom_dim_generic(
            self,
            source,
            target,
            &acts,
            max_entries,
        )
    }

    /// Same computation with every action matrix specialized at q = 1
    /// (the classical hom dimension; the weight constraint plays the role
    /// of the Cartan subalgebra).
    pub fn hom_dim_at_one(
        &self,
        source: &[usize],
        target: &[usize],
        max_entries: usize,
    ) -> Result<usize, QRepError> {
        let spec = |m: &SpMat<RatFun>| -> SpMat<BigRational> {
            m.map(|_, _, v| {
                v.eval_at_one()
                    .map_err(|_| ())
            })
            .expect("generator entries are regular at q=1")
        };
        let acts: Vec<(SpMat<BigRational>, SpMat<BigRational>)> = self
            .generators
            .iter()
            .filter(|g| !matches!(g, Generator::K(_) | Generator::Kinv(_)))
            .map(|&g| {
                (
                    spec(&self.act_on_word(g, source)),
                    spec(&self.act_on_word(g, target)),
                )
            })
            .collect();
        hom_dim_generic(self, source, target, &acts, max_entries)
    }
}

/// Shared weight-matching + kernel machinery for [`RepContext::hom_dim`]
/// and its q = 1 variant.
fn hom_dim_generic<T: FieldScalar>(
    ctx: &RepContext,
    source: &[usize],
    target: &[usize],
    acts: &[(SpMat<T>, SpMat<T>)],
    max_entries: usize,
) -> Result<usize, QRepError> {
    let sd = ctx.word_dim(source);
    let td = ctx.word_dim(target);
    if sd == 0 || td == 0 {
        return Ok(0);
    }
    let size = sd * td;
    if size > max_entries {
        return Err(QRepError::TooLarge {
            size,
            cap: max_entries,
        });
    }
    let sw = ctx.word_basis_weights(source);
    let tw = ctx.word_basis_weights(target);
    // Unknowns: entries f[t][s] with equal weights (the K/Cartan constraint).
    let mut unknown_idx: HashMap<(usize, usize), usize> = HashMap::new();
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    for t in 0..td {
        for s in 0..sd {
            if tw[t] == sw[s] {
                unknown_idx.insert((t, s), unknowns.len());
                unknowns.push((t, s));
            }
        }
    }
    if unknowns.is_empty() {
        return Ok(0);
    }
    // Constraint rows: for each generator g, (ρ_t(g) f - f ρ_s(g))[r][c] = 0.
    let mut rows: HashMap<(usize, usize, usize), HashMap<usize, T>> = HashMap::new();
    for (gidx, (a_s, a_t)) in acts.iter().enumerate() {
        for (&(t, s), &u) in &unknown_idx {
            // f[t][s] contributes A_t[r][t] to equation (r, s).
            for (r, j, v) in a_t.entries() {
                if j == t {
                    let e = rows.entry((gidx, r, s)).or_default();
                    let cur = e.remove(&u).unwrap_or_else(T::zero);
                    let nv = cur.add(v);
                    if !nv.is_zero() {
                        e.insert(u, nv);
                    }
                }
            }
            // f[t][s] contributes -A_s[s][c] to equation (t, c).
            for (j, c) in a_s.row(s) {
                let e = rows.entry((gidx, t, *j)).or_default();
                let cur = e.remove(&u).unwrap_or_else(T::zero);
                let nv = cur.sub(c);
                if !nv.is_zero() {
                    e.insert(u, nv);
                }
            }
        }
    }
    let mut dense: Vec<Vec<T>> = Vec::with_capacity(rows.len());
    for (_, row) in rows {
        if row.is_empty() {
            continue;
        }
        let mut r = vec![T::zero(); unknowns.len()];
        for (u, v) in row {
            r[u] = v;
        }
        dense.push(r);
    }
    let rank = matrix::rank(dense);
    Ok(unknowns.len() - rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(m: usize) -> RepContext {
        build_context(m).unwrap()
    }

    const CAP: usize = 65536;

    #[test]
    fn v_matrices_small_m() {
        // m=3: sigma = -1 on V
        let c = ctx(3);
        assert_eq!(
            c.act_on_lambda(Generator::Sigma, 1),
            SpMat::identity(3).neg()
        );
        // m=4: sigma swaps a_2 (pos 2) and b_2 (pos 3), fixes a_1, b_1
        let c4 = ctx(4);
        let s = c4.act_on_lambda(Generator::Sigma, 1);
        assert_eq!(s.get(0, 0), RatFun::one());
        assert_eq!(s.get(2, 1), RatFun::one());
        assert_eq!(s.get(1, 2), RatFun::one());
        assert_eq!(s.get(3, 3), RatFun::one());
        // m=2: K eigenvalues q^2, q^-2
        let c2 = ctx(2);
        let k = c2.act_on_lambda(Generator::K(1), 1);
        assert_eq!(k.get(0, 0), RatFun::q_pow(2));
        assert_eq!(k.get(1, 1), RatFun::q_pow(-2));
    }

    #[test]
    fn sl2_on_v_and_all_lambda() {
        for m in 1..=5 {
            let c = ctx(m);
            for k in 0..=m {
                assert!(c.sl2_check(k), "sl2 failed on m={m}, Λ^{k}");
            }
        }
    }

    #[test]
    fn sigma_conjugation_on_all_lambda() {
        for m in 1..=5 {
            let c = ctx(m);
            for k in 0..=m {
                assert!(c.sigma_conjugation_check(k), "sigma conj failed m={m}, k={k}");
            }
        }
    }

    #[test]
    fn lambda_top_is_determinant_module() {
        for m in 2..=5usize {
            let c = ctx(m);
            let s = c.act_on_lambda(Generator::Sigma, m);
            assert_eq!(s, SpMat::identity(1).neg(), "sigma on Λ^m, m={m}");
            // E, F act as zero on Λ^0 and Λ^m.
            if m >= 3 {
                for i in 1..=c.rank() {
                    for k in [0, m] {
                        assert!(c.act_on_lambda(Generator::E(i), k).is_zero_matrix());
                        assert!(c.act_on_lambda(Generator::F(i), k).is_zero_matrix());
                    }
                }
            }
        }
    }

    #[test]
    fn coproduct_coassociativity_on_words() {
        // Left-nested vs right-nested iteration agree: compare the action on
        // the word (1,1,1) computed via ((V⊗V)⊗V) and (V⊗(V⊗V)) groupings.
        for m in [2usize, 3, 4] {
            let c = ctx(m);
            for &g in c.generators() {
                let direct = c.act_on_word(g, &[1, 1, 1]);
                // Build (V⊗V) as a single "matrix algebra" factor by hand:
                // A(g on V⊗V) ⊗ 1 + K⊗K ⊗ E etc. — realized by computing
                // the word action of the nested pair and combining.
                let pair = c.act_on_word(g, &[1, 1]);
                let v = c.act_on_lambda(g, 1);
                let id_v = SpMat::identity(m);
                let id_pair = SpMat::identity(m * m);
                let nested = match g {
                    Generator::E(i) => {
                        let kk = c
                            .act_on_lambda(Generator::K(i), 1)
                            .kron(&c.act_on_lambda(Generator::K(i), 1));
                        pair.kron(&id_v).add(&kk.kron(&v))
                    }
                    Generator::F(i) => {
                        let kinv = c.act_on_lambda(Generator::Kinv(i), 1);
                        pair.kron(&kinv).add(&id_pair.kron(&v))
                    }
                    _ => pair.kron(&v),
                };
                assert_eq!(direct, nested, "coassociativity failed for {g} at m={m}");
            }
        }
    }

    #[test]
    fn lambda1_weights_and_multiplicities() {
        let c = ctx(3);
        let w = c.weight_multiplicities(&[1]);
        assert_eq!(w.len(), 3);
        assert_eq!(w[&vec![1i64]], 1);
        assert_eq!(w[&vec![0i64]], 1);
        assert_eq!(w[&vec![-1i64]], 1);
        // highest weight of Λ^k has multiplicity 1
        for m in 2..=5usize {
            let c = ctx(m);
            for k in 1..=(m / 2) {
                let w = c.weight_multiplicities(&[k]);
                let mut hw = vec![0i64; m / 2];
                for x in hw.iter_mut().take(k) {
                    *x = 1;
                }
                assert_eq!(w[&hw], 1, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn equivariance_identity_and_random_failure() {
        let c = ctx(3);
        let id = LinearMap::new(vec![1, 1], vec![1, 1], SpMat::identity(9));
        assert!(c.equivariance_check(&id));
        // A generic elementary matrix is not equivariant.
        let bad = LinearMap::new(
            vec![1, 1],
            vec![1, 1],
            SpMat::from_triplets(9, 9, [(0, 3, RatFun::one())]),
        );
        assert!(!c.equivariance_check(&bad));
    }

    #[test]
    fn hom_dims_match_pieri() {
        for m in 3..=5usize {
            let c = ctx(m);
            assert_eq!(c.hom_dim(&[1, 1], &[1, 1], CAP).unwrap(), 3, "End(V⊗V), m={m}");
            assert_eq!(c.hom_dim(&[1], &[1, 1], CAP).unwrap(), 0, "odd parity, m={m}");
            assert_eq!(c.hom_dim(&[], &[1, 1], CAP).unwrap(), 1, "trivial in V⊗V, m={m}");
            assert_eq!(c.hom_dim(&[], &[2], CAP).unwrap(), 0, "Hom(Λ^0, Λ^2), m={m}");
        }
        // m=3: Hom(Λ^m ⊗ Λ^m, Λ^2) = 0
        let c3 = ctx(3);
        assert_eq!(c3.hom_dim(&[3, 3], &[2], CAP).unwrap(), 0);
    }

    #[test]
    fn hom_dims_match_at_q_one() {
        for m in 2..=4usize {
            let c = ctx(m);
            for (s, t) in [
                (vec![1, 1], vec![1, 1]),
                (vec![], vec![1, 1]),
                (vec![1], vec![1]),
                (vec![1, 1], vec![2]),
                (vec![2], vec![1, 1]),
            ] {
                assert_eq!(
                    c.hom_dim(&s, &t, CAP).unwrap(),
                    c.hom_dim_at_one(&s, &t, CAP).unwrap(),
                    "m={m}, {s:?} -> {t:?}"
                );
            }
        }
    }

    #[test]
    fn hom_dim_size_cap() {
        let c = ctx(4);
        assert!(matches!(
            c.hom_dim(&[1, 1, 1], &[1, 1, 1], 10),
            Err(QRepError::TooLarge { .. })
        ));
    }

    #[test]
    fn invariants_of_four_strands() {
        // dim Hom(1, V^{⊗4}) = 3 for m ≥ 3 (double factorial (2·2-1)!!).
        for m in 3..=4usize {
            let c = ctx(m);
            assert_eq!(c.hom_dim(&[], &[1, 1, 1, 1], CAP).unwrap(), 3, "m={m}");
        }
    }

    #[test]
    fn degenerate_small_m_contexts() {
        let c1 = ctx(1);
        assert_eq!(c1.generators(), &[Generator::Sigma]);
        assert_eq!(
            c1.act_on_lambda(Generator::Sigma, 1),
            SpMat::identity(1).neg()
        );
        // m=1: End(V) is 1-dimensional, Hom(1, V⊗V) is 1-dimensional.
        assert_eq!(c1.hom_dim(&[1], &[1], CAP).unwrap(), 1);
        assert_eq!(c1.hom_dim(&[], &[1, 1], CAP).unwrap(), 1);
        // m=2: V⊗V = trivial ⊕ det ⊕ (weight ±2 irrep), pairwise distinct.
        let c2 = ctx(2);
        assert_eq!(c2.hom_dim(&[1, 1], &[1, 1], CAP).unwrap(), 3);
    }
}
