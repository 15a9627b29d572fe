//! The q = 1 layer: specialization of all matrices to exact rationals, the
//! symmetric-group antisymmetrizer on tensor powers of V, the clasp
//! (nested merge–split) morphism, and the checks tying the web category at
//! q = 1 to classical orthogonal invariant theory.

use crate::matrix::SpMat;
use crate::qrep::{LinearMap, RepContext};
use crate::weblang::{self, Evaluator, WebExpr};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("entry ({row},{col}) has a pole at q=1")]
    PoleAtOne { row: usize, col: usize },
    #[error("size cap exceeded: {size} cells > {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("evaluation failed: {0}")]
    Eval(String),
}

/// A morphism matrix over exact rationals, tagged with boundary words.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub mat: SpMat<BigRational>,
}

impl RationalMatrix {
    pub fn nnz(&self) -> usize {
        self.mat.nnz()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero_matrix()
    }
}

/// Entrywise evaluation at q = 1.  Errs on the first entry with a pole,
/// naming its position — this is the integrality check: every intertwiner
/// of the quantum theory must be regular at q = 1.
pub fn specialize(f: &LinearMap) -> Result<RationalMatrix, ClassicalError> {
    let mut triplets = Vec::with_capacity(f.mat.nnz());
    for (r, c, v) in f.mat.entries() {
        let value = v
            .eval_at_one()
            .map_err(|_| ClassicalError::PoleAtOne { row: r, col: c })?;
        if !value.is_zero() {
            triplets.push((r, c, value));
        }
    }
    Ok(RationalMatrix {
        source: f.source.clone(),
        target: f.target.clone(),
        mat: SpMat::from_triplets(f.mat.nrows(), f.mat.ncols(), triplets),
    })
}

// ---------------------------------------------------------------------------
// Permutations and the antisymmetrizer
// ---------------------------------------------------------------------------

/// All permutations of {0, …, k−1} with their signs.
fn signed_permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = vec![(Vec::new(), 1i64)];
    for n in 0..k {
        let mut next = Vec::with_capacity(out.len() * (n + 1));
        for (p, sign) in out {
            for pos in 0..=n {
                // inserting n at `pos` adds (n − pos) inversions
                let mut q = p.clone();
                q.insert(pos, n);
                let s = if (n - pos) % 2 == 0 { sign } else { -sign };
                next.push((q, s));
            }
        }
        out = next;
    }
    out
}

/// The permutation matrix of `w` acting on V^{⊗k} (dim d per factor):
/// the tensor factor at position `p` is sent to position `w[p]`.
fn perm_matrix(w: &[usize], d: usize, k: usize) -> SpMat<BigRational> {
    let dim = d.pow(k as u32);
    let mut triplets = Vec::with_capacity(dim);
    for src in 0..dim {
        // digits of src, most significant first (left tensor factor first)
        let mut digits = vec![0usize; k];
        let mut rem = src;
        for p in (0..k).rev() {
            digits[p] = rem % d;
            rem /= d;
        }
        let mut moved = vec![0usize; k];
        for p in 0..k {
            moved[w[p]] = digits[p];
        }
        let mut tgt = 0usize;
        for p in 0..k {
            tgt = tgt * d + moved[p];
        }
        triplets.push((tgt, src, BigRational::one()));
    }
    SpMat::from_triplets(dim, dim, triplets)
}

/// The flip v ⊗ w ↦ w ⊗ v on V ⊗ V.
pub fn flip(m: usize) -> SpMat<BigRational> {
    perm_matrix(&[1, 0], m, 2)
}

/// The idempotent antisymmetrizer (1/k!)·Σ_w sign(w)·w on V^{⊗k}.
pub fn antisymmetrizer(m: usize, k: usize, cap: usize) -> Result<RationalMatrix, ClassicalError> {
    let dim = m.checked_pow(k as u32).unwrap_or(usize::MAX);
    let cells = dim.saturating_mul(dim);
    if cells > cap {
        return Err(ClassicalError::TooLarge { size: cells, cap });
    }
    let mut acc = SpMat::zero(dim, dim);
    for (w, sign) in signed_permutations(k) {
        let p = perm_matrix(&w, m, k);
        acc = if sign > 0 { acc.add(&p) } else { acc.sub(&p) };
    }
    let factorial: BigRational = (1..=k as i64).map(|n| BigRational::from_integer(BigInt::from(n))).product();
    let inv = BigRational::one() / factorial;
    Ok(RationalMatrix {
        source: vec![1; k],
        target: vec![1; k],
        mat: acc.scale(&inv),
    })
}

// ---------------------------------------------------------------------------
// The clasp
// ---------------------------------------------------------------------------

/// Expression for the clasp on k thin strands: merge them pairwise from
/// the left up to a single strand of thickness k, then split back.  For
/// k > m this routes through the zero object and evaluates to 0.
pub fn clasp_expr(k: usize) -> WebExpr {
    if k <= 1 {
        return weblang::id(k);
    }
    let mut parts = Vec::new();
    for j in 1..k {
        let mut layer = vec![weblang::merge(j, 1)];
        layer.extend(std::iter::repeat_with(|| weblang::id(1)).take(k - 1 - j));
        parts.push(weblang::tensor(layer));
    }
    for j in (1..k).rev() {
        let mut layer = vec![weblang::split(j, 1)];
        layer.extend(std::iter::repeat_with(|| weblang::id(1)).take(k - 1 - j));
        parts.push(weblang::tensor(layer));
    }
    weblang::compose(parts)
}

/// The clasp as a matrix over ℚ(q).
pub fn clasp(ev: &Evaluator<'_>, k: usize) -> Result<LinearMap, ClassicalError> {
    ev.eval(&clasp_expr(k))
        .map_err(|e| ClassicalError::Eval(e.to_string()))
}

/// Verifies that the clasp at q = 1 equals the *unnormalized* signed
/// permutation sum Σ_w sign(w)·w = k!·antisymmetrizer.  (The merge–split
/// bigon contributes [2j]/[2] → j at q = 1, so the clasp squares to k!
/// times itself rather than being idempotent.)
pub fn claspvssym_check(
    ctx: &RepContext,
    k: usize,
    cap: usize,
) -> Result<bool, ClassicalError> {
    let m = ctx.m();
    let ev = Evaluator::new(ctx);
    let c = clasp(&ev, k)?;
    let cells = c.mat.nrows().saturating_mul(c.mat.ncols());
    if cells > cap {
        return Err(ClassicalError::TooLarge { size: cells, cap });
    }
    let spec = specialize(&c)?;
    let a = antisymmetrizer(m, k, cap)?;
    let factorial: BigRational = (1..=k as i64).map(|n| BigRational::from_integer(BigInt::from(n))).product();
    Ok(spec.mat == a.mat.scale(&factorial))
}

/// Double-coset recursion for the unnormalized antisymmetrizer
/// A_k = Σ_w sign(w)·w on V^{⊗k}:
///
///   A_{k+1} = A_k⊗id − (1/(k−1)!)·(A_k⊗id)·flip_{k,k+1}·(A_k⊗id)
///
/// with flip_{k,k+1} the transposition of the last two tensor factors.
pub fn doublecoset_recursion_check(
    m: usize,
    k: usize,
    cap: usize,
) -> Result<bool, ClassicalError> {
    assert!(k >= 1, "recursion needs k >= 1");
    let big = antisymmetrizer(m, k + 1, cap)?;
    let factorial_k1: BigRational = (1..=(k + 1) as i64).map(|n| BigRational::from_integer(BigInt::from(n))).product();
    let a_big = big.mat.scale(&factorial_k1); // A_{k+1}

    let small = antisymmetrizer(m, k, cap)?;
    let factorial_k: BigRational = (1..=k as i64).map(|n| BigRational::from_integer(BigInt::from(n))).product();
    let a_small = small.mat.scale(&factorial_k); // A_k
    let a_ext = a_small.kron(&SpMat::identity(m)); // A_k ⊗ id

    // transposition of tensor factors k−1 and k (0-based) among k+1
    let mut w: Vec<usize> = (0..k + 1).collect();
    w.swap(k - 1, k);
    let s_last = perm_matrix(&w, m, k + 1);

    let mid = a_ext.matmul(&s_last.matmul(&a_ext));
    let factorial_km1: BigRational = (1..k.max(1) as i64).map(|n| BigRational::from_integer(BigInt::from(n))).product();
    let inv = BigRational::one() / factorial_km1;
    let rhs = a_ext.sub(&mid.scale(&inv));
    Ok(a_big == rhs)
}

// ---------------------------------------------------------------------------
// Classical crossing
// ---------------------------------------------------------------------------

/// Verifies the q = 1 crossing identities:
///
/// 1. the braiding specializes to the flip v⊗w ↦ w⊗v;
/// 2. flip = id − split∘merge on V⊗V (the q = 1 crossing formula);
/// 3. for every k, flip∘H(k−1) = capcup − H(k+1) at q = 1, where H(j) is
///    the (k,k) → (1,1) ladder with horizontal bar j and capcup is the
///    disconnected cap-then-cup term (the classical crossing lemma,
///    obtained from the square relation whose coefficients become 1).
pub fn classical_crossing_check(ctx: &RepContext) -> Result<bool, ClassicalError> {
    let m = ctx.m();
    let ev = Evaluator::new(ctx);
    let flip_mat = flip(m);

    // (1) braiding at q=1 is the flip
    let braid = ev
        .eval(&weblang::cross_pos())
        .map_err(|e| ClassicalError::Eval(e.to_string()))?;
    if specialize(&braid)?.mat != flip_mat {
        return Ok(false);
    }

    // (2) flip = id − split∘merge
    let ms = ev
        .eval(&weblang::compose(vec![
            weblang::merge(1, 1),
            weblang::split(1, 1),
        ]))
        .map_err(|e| ClassicalError::Eval(e.to_string()))?;
    let id_vv = SpMat::<BigRational>::identity(m * m);
    if flip_mat != id_vv.sub(&specialize(&ms)?.mat) {
        return Ok(false);
    }

    // (3) flip∘H(k−1) = capcup − H(k+1) for k = 1..m
    for k in 1..=m {
        let h_lo = ev
            .eval(&h_bar(k, false))
            .map_err(|e| ClassicalError::Eval(e.to_string()))?;
        let h_hi = ev
            .eval(&h_bar(k, true))
            .map_err(|e| ClassicalError::Eval(e.to_string()))?;
        let capcup = ev
            .eval(&weblang::compose(vec![weblang::cap(k), weblang::cup(1)]))
            .map_err(|e| ClassicalError::Eval(e.to_string()))?;
        let lhs = flip_mat.matmul(&specialize(&h_lo)?.mat);
        let rhs = specialize(&capcup)?.mat.sub(&specialize(&h_hi)?.mat);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ladder (k,k) → (1,1) with bar k+1 (`high`) or k−1 (`low`); mirrors the
/// relation-suite construction.
fn h_bar(k: usize, high: bool) -> WebExpr {
    use weblang::{cap, compose, cup, id, merge, split, tensor};
    if high {
        let left = compose(vec![
            tensor(vec![cup(1), id(k)]),
            tensor(vec![id(1), merge(1, k)]),
        ]);
        let right = compose(vec![
            tensor(vec![split(1, k), id(k)]),
            tensor(vec![id(1), cap(k)]),
        ]);
        compose(vec![tensor(vec![left, id(k)]), tensor(vec![id(1), right])])
    } else {
        compose(vec![
            tensor(vec![split(1, k - 1), id(k)]),
            tensor(vec![id(1), id(k - 1), split(k - 1, 1)]),
            tensor(vec![id(1), cap(k - 1), id(1)]),
        ])
    }
}

/// Classical equivariance re-check: the specialized generator actions
/// commute with the specialized morphism in the same coproduct-twisted
/// sense as over ℚ(q) — i.e. the q = 1 image of every equivariance
/// identity still holds.  Returns false if any generator fails.
pub fn classical_equivariance_check(
    ctx: &RepContext,
    f: &LinearMap,
) -> Result<bool, ClassicalError> {
    for &g in ctx.generators() {
        let src = ctx.act_on_word(g, &f.source);
        let tgt = ctx.act_on_word(g, &f.target);
        let spec =
            |mat: &SpMat<crate::RatFun>| -> Result<SpMat<BigRational>, ClassicalError> {
                let mut triplets = Vec::with_capacity(mat.nnz());
                for (r, c, v) in mat.entries() {
                    let value = v
                        .eval_at_one()
                        .map_err(|_| ClassicalError::PoleAtOne { row: r, col: c })?;
                    if !value.is_zero() {
                        triplets.push((r, c, value));
                    }
                }
                Ok(SpMat::from_triplets(mat.nrows(), mat.ncols(), triplets))
            };
        let fs = specialize(f)?;
        if spec(&tgt)?.matmul(&fs.mat) != fs.mat.matmul(&spec(&src)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qrep::build_context;


    const CAP: usize = 1 << 22;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn antisymmetrizer_basics() {
        // a_1 = id
        let a1 = antisymmetrizer(3, 1, CAP).unwrap();
        assert_eq!(a1.mat, SpMat::identity(3));
        // a_2 = (id − flip)/2, idempotent, rank C(m,2)
        for m in 2..=4usize {
            let a2 = antisymmetrizer(m, 2, CAP).unwrap();
            let expected = SpMat::identity(m * m)
                .sub(&flip(m))
                .scale(&(rat(1) / rat(2)));
            assert_eq!(a2.mat, expected);
            assert_eq!(a2.mat.matmul(&a2.mat), a2.mat, "a_2 idempotent m={m}");
            let rank = crate::matrix::rank(a2.mat.to_dense());
            assert_eq!(rank, m * (m - 1) / 2);
        }
    }

    #[test]
    fn antisymmetrizer_idempotent_with_binomial_rank() {
        for m in 2..=3usize {
            for k in 1..=m {
                let a = antisymmetrizer(m, k, CAP).unwrap();
                assert_eq!(a.mat.matmul(&a.mat), a.mat, "m={m} k={k}");
                let rank = crate::matrix::rank(a.mat.to_dense());
                let binom = (0..k).fold(1usize, |acc, i| acc * (m - i) / (i + 1));
                assert_eq!(rank, binom, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn antisymmetrizer_vanishes_beyond_rank() {
        for m in 1..=3usize {
            let a = antisymmetrizer(m, m + 1, CAP).unwrap();
            assert!(a.is_zero(), "a_{} at m={m}", m + 1);
        }
    }

    #[test]
    fn braiding_specializes_to_flip() {
        for m in 1..=4usize {
            let ctx = build_context(m).unwrap();
            let ev = Evaluator::new(&ctx);
            let braid = ev.eval(&weblang::cross_pos()).unwrap();
            assert_eq!(specialize(&braid).unwrap().mat, flip(m), "m={m}");
        }
    }

    #[test]
    fn clasp_identity_and_zero_cases() {
        let ctx = build_context(3).unwrap();
        let ev = Evaluator::new(&ctx);
        // clasp(1) = id on V
        let c1 = clasp(&ev, 1).unwrap();
        assert_eq!(c1.mat, SpMat::identity(3));
        // clasp(m+1) routes through the zero object
        let c4 = clasp(&ev, 4).unwrap();
        assert!(c4.is_zero());
        assert_eq!(c4.mat.nrows(), 81);
    }

    #[test]
    fn clasp_specializes_to_signed_permutation_sum() {
        for m in 2..=4usize {
            for k in 2..=m.min(3) {
                assert!(
                    claspvssym_check(&build_context(m).unwrap(), k, CAP).unwrap(),
                    "m={m} k={k}"
                );
            }
        }
    }

    #[test]
    fn doublecoset_recursion_small() {
        assert!(doublecoset_recursion_check(3, 2, CAP).unwrap());
        assert!(doublecoset_recursion_check(2, 2, CAP).unwrap());
        assert!(doublecoset_recursion_check(4, 3, CAP).unwrap());
        assert!(doublecoset_recursion_check(3, 1, CAP).unwrap());
    }

    #[test]
    fn classical_crossing_small_ranks() {
        for m in 1..=4usize {
            let ctx = build_context(m).unwrap();
            assert!(classical_crossing_check(&ctx).unwrap(), "m={m}");
        }
    }

    #[test]
    fn specialization_is_total_on_intertwiners() {
        // integrality scan: every cached intertwiner is regular at q=1
        for m in 1..=4usize {
            let ctx = build_context(m).unwrap();
            let ev = Evaluator::new(&ctx);
            let mo = ev.morphisms();
            for k in 1..=m {
                specialize(&mo.cup(k)).unwrap();
                specialize(&mo.cap(k)).unwrap();
            }
            for i in 1..m {
                for j in 1..=(m - i) {
                    specialize(&mo.mul_map(i, j)).unwrap();
                    specialize(&mo.split(i, j)).unwrap();
                }
            }
            specialize(&mo.braiding(true)).unwrap();
            specialize(&mo.braiding(false)).unwrap();
        }
    }

    #[test]
    fn classical_equivariance_of_generators() {
        for m in 2..=3usize {
            let ctx = build_context(m).unwrap();
            let ev = Evaluator::new(&ctx);
            let mo = ev.morphisms();
            assert!(classical_equivariance_check(&ctx, &mo.mul_map(1, 1)).unwrap());
            assert!(classical_equivariance_check(&ctx, &mo.cup(1)).unwrap());
            assert!(classical_equivariance_check(&ctx, &mo.cap(1)).unwrap());
            assert!(classical_equivariance_check(&ctx, &mo.braiding(true)).unwrap());
        }
    }

    #[test]
    fn pole_detection() {
        // 1/(q−1) has a pole at q=1
        let bad: crate::RatFun = "1/(q-1)".parse().unwrap();
        let f = LinearMap::new(
            vec![1],
            vec![1],
            SpMat::from_triplets(1, 1, vec![(0, 0, bad)]),
        );
        match specialize(&f) {
            Err(ClassicalError::PoleAtOne { row: 0, col: 0 }) => {}
            other => panic!("expected pole error, got {other:?}"),
        }
    }
}
