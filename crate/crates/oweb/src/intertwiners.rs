//! Explicit matrices for every named morphism of the representation
//! category: multiplications `Λ^i⊗Λ^j → Λ^{i+j}`, their pivotal rotations
//! (splits), the duality maps `φ_1`, `ψ_k`, `φ_k`, cups `c_k`, caps `e_k`,
//! the braiding `β^{±1}`, and the quadrivalent vertex.
//!
//! All maps are memoized per context and constructed exactly over ℚ(q).
//! Dual spaces never appear as public objects: `c_1` is the explicit
//! invariant vector, `ψ_k` is the reshaped `c_k` matrix, `φ_k = ψ_k^{-1}`
//! by exact inversion, and `e_k(x⊗y)` reads off an entry of `φ_k`.

use crate::extalg::{self, prime, GenClass};
use crate::matrix::{self, SpMat};
use crate::qcombinat::{named_coefficient, qint, Coefficient};
use crate::qrep::{LinearMap, RepContext};
use crate::ratfun::RatFun;
use std::cell::RefCell;
use std::collections::HashMap;

/// Memoized morphism constructors for a fixed context.
pub struct Morphisms<'a> {
    ctx: &'a RepContext,
    mul: RefCell<HashMap<(usize, usize), LinearMap>>,
    split: RefCell<HashMap<(usize, usize), LinearMap>>,
    cup: RefCell<HashMap<usize, LinearMap>>,
    cap: RefCell<HashMap<usize, LinearMap>>,
    psi: RefCell<HashMap<usize, SpMat<RatFun>>>,
    phi: RefCell<HashMap<usize, SpMat<RatFun>>>,
    braid: RefCell<HashMap<bool, LinearMap>>,
    quad: RefCell<Option<LinearMap>>,
}

impl<'a> Morphisms<'a> {
    pub fn new(ctx: &'a RepContext) -> Self {
        Morphisms {
            ctx,
            mul: RefCell::new(HashMap::new()),
            split: RefCell::new(HashMap::new()),
            cup: RefCell::new(HashMap::new()),
            cap: RefCell::new(HashMap::new()),
            psi: RefCell::new(HashMap::new()),
            phi: RefCell::new(HashMap::new()),
            braid: RefCell::new(HashMap::new()),
            quad: RefCell::new(None),
        }
    }

    pub fn ctx(&self) -> &RepContext {
        self.ctx
    }

    /// Identity of `Λ^k` as a tagged map.
    pub fn id_map(&self, k: usize) -> LinearMap {
        LinearMap::new(vec![k], vec![k], SpMat::identity(self.ctx.dim_lambda(k)))
    }

    /// Identity of a whole word.
    pub fn id_word(&self, word: &[usize]) -> LinearMap {
        LinearMap::new(
            word.to_vec(),
            word.to_vec(),
            SpMat::identity(self.ctx.word_dim(word)),
        )
    }

    /// Multiplication `Λ^i ⊗ Λ^j → Λ^{i+j}`, `x⊗y ↦ xy` in normal form.
    /// The zero map when any label exceeds `m`.
    pub fn mul_map(&self, i: usize, j: usize) -> LinearMap {
        if let Some(f) = self.mul.borrow().get(&(i, j)) {
            return f.clone();
        }
        let ctx = self.ctx;
        let m = ctx.m();
        let (di, dj) = (ctx.dim_lambda(i), ctx.dim_lambda(j));
        let dt = ctx.dim_lambda(i + j);
        let mut triplets = Vec::new();
        if dt > 0 && di > 0 && dj > 0 {
            for (a, s) in ctx.basis_of(i).iter().enumerate() {
                for (b, t) in ctx.basis_of(j).iter().enumerate() {
                    let mut word: Vec<usize> = s.indices().to_vec();
                    word.extend_from_slice(t.indices());
                    let prod = extalg::nf_word(m, &word).expect("valid word");
                    for (mono, c) in prod.terms() {
                        triplets.push((ctx.index_of(i + j, mono), a * dj + b, c.clone()));
                    }
                }
            }
        }
        let f = LinearMap::new(
            vec![i, j],
            vec![i + j],
            SpMat::from_triplets(dt, di * dj, triplets),
        );
        self.mul.borrow_mut().insert((i, j), f.clone());
        f
    }

    /// `φ_1 : V → V^*` in the dual basis (rows index `v_p^*`):
    /// `a_i ↦ (−q²)^{i−1} b_i^*`, `b_i ↦ ±(−q²)^{m−1−i} a_i^*` and, for odd
    /// `m`, `u ↦ −(−q²)^{n−1}[2] u^*` — the extra sign on the `u`/`b`
    /// scalars appears only in the odd case. These are the unique scalars
    /// (up to global rescale, fixed by `a_1 ↦ b_1^*`) making `φ_1`
    /// equivariant for the dual action `ρ*(X) = ρ(S(X))ᵀ` with the
    /// sl₂-consistent `K` normalization used throughout.
    pub fn phi1(&self) -> SpMat<RatFun> {
        let m = self.ctx.m();
        let n = m / 2;
        let odd = m % 2 == 1;
        let mq2 = |e: i64| {
            let sign = if e % 2 == 0 {
                RatFun::one()
            } else {
                -RatFun::one()
            };
            &sign * &RatFun::q_pow(2 * e)
        };
        let mut triplets = Vec::new();
        for pos in 1..=m {
            let (target, coeff) = match extalg::classify(m, pos) {
                GenClass::A(i) => (prime(m, pos), mq2(i as i64 - 1)),
                GenClass::U => (pos, -(&mq2(n as i64 - 1) * &qint(2, 1))),
                GenClass::B(i) => {
                    let base = mq2(m as i64 - 1 - i as i64);
                    (prime(m, pos), if odd { -base } else { base })
                }
            };
            triplets.push((target - 1, pos - 1, coeff));
        }
        SpMat::from_triplets(m, m, triplets)
    }

    /// The invariant vector `c_1 = Σ_p (1/t_{p'}) v_p ⊗ v_{p'}` where `t`
    /// are the `φ_1` scalars: `c_1 = (id ⊗ φ_1^{-1}) ∘ coev`.
    fn c1(&self) -> LinearMap {
        let m = self.ctx.m();
        let inv = matrix::invert(&self.phi1()).expect("phi1 is invertible");
        let mut triplets = Vec::new();
        for (r, p, v) in inv.entries() {
            // coev sends 1 ↦ Σ_p v_p ⊗ v_p^*; φ_1^{-1}(v_p^*) = Σ_r inv[r,p] v_r.
            triplets.push((p * m + r, 0, v.clone()));
        }
        LinearMap::new(vec![], vec![1, 1], SpMat::from_triplets(m * m, 1, triplets))
    }

    /// Cup `c_k : Λ^0 → Λ^k ⊗ Λ^k`, built inductively:
    /// `c_k = ([2]/[2k]) · (m_{k−1,1} ⊗ m_{1,k−1}) ∘ (id⊗c_1⊗id) ∘ c_{k−1}`.
    pub fn cup(&self, k: usize) -> LinearMap {
        if let Some(f) = self.cup.borrow().get(&k) {
            return f.clone();
        }
        let ctx = self.ctx;
        let f = if k > ctx.m() {
            LinearMap::new(vec![], vec![k, k], SpMat::zero(0, 1))
        } else if k == 0 {
            LinearMap::new(vec![], vec![0, 0], SpMat::identity(1))
        } else if k == 1 {
            self.c1()
        } else {
            let prev = self.cup(k - 1);
            let insert = self
                .id_map(k - 1)
                .tensor(&self.c1())
                .tensor(&self.id_map(k - 1));
            let close = self.mul_map(k - 1, 1).tensor(&self.mul_map(1, k - 1));
            let coeff = &qint(2, 1) / &qint(2 * k as i64, 1);
            prev.then(&insert)
                .and_then(|x| x.then(&close))
                .expect("cup recursion words line up")
                .scale(&coeff)
        };
        self.cup.borrow_mut().insert(k, f.clone());
        f
    }

    /// `ψ_k : (Λ^k)^* → Λ^k` reshaped from `c_k`: `Ψ[z,x]` is the
    /// coefficient of `v_x ⊗ v_z` in `c_k`.
    pub fn psi(&self, k: usize) -> SpMat<RatFun> {
        if let Some(p) = self.psi.borrow().get(&k) {
            return p.clone();
        }
        let d = self.ctx.dim_lambda(k);
        let c = self.cup(k);
        let mut triplets = Vec::new();
        for (idx, _, v) in c.mat.entries() {
            let (x, z) = (idx / d, idx % d);
            triplets.push((z, x, v.clone()));
        }
        let p = SpMat::from_triplets(d, d, triplets);
        self.psi.borrow_mut().insert(k, p.clone());
        p
    }

    /// `φ_k = ψ_k^{-1}` by exact elimination. Singularity would contradict
    /// the duality structure, so it is treated as a fatal inconsistency.
    pub fn phi(&self, k: usize) -> SpMat<RatFun> {
        if let Some(p) = self.phi.borrow().get(&k) {
            return p.clone();
        }
        let p = matrix::invert(&self.psi(k))
            .unwrap_or_else(|| panic!("psi_{k} singular: duality structure inconsistent"));
        self.phi.borrow_mut().insert(k, p.clone());
        p
    }

    /// Cap `e_k : Λ^k ⊗ Λ^k → Λ^0`, `e_k(v_x ⊗ v_y) = φ_k[y, x]`
    /// (evaluation after `φ_k` on the first factor).
    pub fn cap(&self, k: usize) -> LinearMap {
        if let Some(f) = self.cap.borrow().get(&k) {
            return f.clone();
        }
        let d = self.ctx.dim_lambda(k);
        let f = if k > self.ctx.m() {
            LinearMap::new(vec![k, k], vec![], SpMat::zero(1, 0))
        } else {
            let phi = self.phi(k);
            let mut triplets = Vec::new();
            for (y, x, v) in phi.entries() {
                triplets.push((0, x * d + y, v.clone()));
            }
            LinearMap::new(vec![k, k], vec![], SpMat::from_triplets(1, d * d, triplets))
        };
        self.cap.borrow_mut().insert(k, f.clone());
        f
    }

    /// Split `Λ^{i+j} → Λ^i ⊗ Λ^j`: the 180° pivotal rotation of the
    /// multiplication `m_{j,i}`, realized by the cup/cap composite.
    pub fn split(&self, i: usize, j: usize) -> LinearMap {
        if let Some(f) = self.split.borrow().get(&(i, j)) {
            return f.clone();
        }
        let k = i + j;
        let f = if k > self.ctx.m() || i > self.ctx.m() || j > self.ctx.m() {
            LinearMap::new(
                vec![k],
                vec![i, j],
                SpMat::zero(
                    self.ctx.dim_lambda(i) * self.ctx.dim_lambda(j),
                    self.ctx.dim_lambda(k),
                ),
            )
        } else {
            // (id_i⊗id_j⊗cap(k)) ∘ (id_i⊗id_j⊗mul(j,i)⊗id_k)
            //   ∘ (id_i⊗cup(j)⊗id_i⊗id_k) ∘ (cup(i)⊗id_k)
            let idk = self.id_map(k);
            let step1 = self.cup(i).tensor(&idk);
            let step2 = self
                .id_map(i)
                .tensor(&self.cup(j))
                .tensor(&self.id_map(i))
                .tensor(&idk);
            let step3 = self
                .id_map(i)
                .tensor(&self.id_map(j))
                .tensor(&self.mul_map(j, i))
                .tensor(&idk);
            let step4 = self.id_map(i).tensor(&self.id_map(j)).tensor(&self.cap(k));
            let mut f = step1
                .then(&step2)
                .and_then(|x| x.then(&step3))
                .and_then(|x| x.then(&step4))
                .expect("split rotation words line up");
            f.source = vec![k];
            f.target = vec![i, j];
            f
        };
        self.split.borrow_mut().insert((i, j), f.clone());
        f
    }

    /// The opposite (counterclockwise) rotation of the same multiplication;
    /// pivotality demands it equal [`Morphisms::split`].
    pub fn split_other_rotation(&self, i: usize, j: usize) -> LinearMap {
        let k = i + j;
        if k > self.ctx.m() || i > self.ctx.m() || j > self.ctx.m() {
            return self.split(i, j);
        }
        // (cap(k)⊗id_i⊗id_j) ∘ (id_k⊗mul(j,i)⊗id_i⊗id_j)
        //   ∘ (id_k⊗id_j⊗cup(i)⊗id_j) ∘ (id_k⊗cup(j))
        let idk = self.id_map(k);
        let step1 = idk.tensor(&self.cup(j));
        let step2 = idk
            .tensor(&self.id_map(j))
            .tensor(&self.cup(i))
            .tensor(&self.id_map(j));
        let step3 = idk
            .tensor(&self.mul_map(j, i))
            .tensor(&self.id_map(i))
            .tensor(&self.id_map(j));
        let step4 = self.cap(k).tensor(&self.id_map(i)).tensor(&self.id_map(j));
        let mut f = step1
            .then(&step2)
            .and_then(|x| x.then(&step3))
            .and_then(|x| x.then(&step4))
            .expect("split rotation words line up");
        f.source = vec![k];
        f.target = vec![i, j];
        f
    }

    /// The braiding `β^{±1}` on `V ⊗ V`:
    /// `β^{±} = q^{±2}·id − split∘mul ∓ braid_cupcap_{±}·(cup∘cap)`
    /// with the regularized coefficients.
    pub fn braiding(&self, positive: bool) -> LinearMap {
        if let Some(f) = self.braid.borrow().get(&positive) {
            return f.clone();
        }
        let m = self.ctx.m() as i64;
        let id = self.id_word(&[1, 1]);
        let hbar = self
            .mul_map(1, 1)
            .then(&self.split(1, 1))
            .expect("mul-split on V⊗V");
        let cupcap = self
            .cap(1)
            .then(&self.cup(1))
            .expect("cap-cup on V⊗V");
        let name = if positive {
            Coefficient::BraidCupcapPos
        } else {
            Coefficient::BraidCupcapNeg
        };
        let coeff = named_coefficient(name, m, 0).expect("braid coefficient defined");
        let sign = if positive { 2 } else { -2 };
        let mut f = id
            .scale(&RatFun::q_pow(sign))
            .sub(&hbar)
            .expect("same words");
        let last = if positive {
            cupcap.scale(&-coeff)
        } else {
            cupcap.scale(&coeff)
        };
        f = f.add(&last).expect("same words");
        self.braid.borrow_mut().insert(positive, f.clone());
        f
    }

    /// Clockwise 90° rotation of an endomorphism of `Λ^a ⊗ Λ^a`:
    /// `(cap(a)⊗id⊗id) ∘ (id⊗f⊗id) ∘ (id⊗id⊗cup(a))`.
    pub fn rot90(&self, f: &LinearMap) -> LinearMap {
        assert_eq!(f.source, f.target, "rot90 expects an endomorphism");
        assert_eq!(f.source.len(), 2);
        assert_eq!(f.source[0], f.source[1]);
        let a = f.source[0];
        let ida = self.id_map(a);
        let step1 = ida.tensor(&ida).tensor(&self.cup(a));
        let step2 = ida.tensor(f).tensor(&ida);
        let step3 = self.cap(a).tensor(&ida).tensor(&ida);
        step1
            .then(&step2)
            .and_then(|x| x.then(&step3))
            .expect("rot90 words line up")
    }

    /// The quadrivalent vertex on `V ⊗ V`:
    /// `Q = split∘mul + quad(m)·(cup∘cap)`; by construction it must equal
    /// its own 90° rotation, which [`quad_vertex_rotation_invariant`]
    /// (and the relation suite) verify.
    pub fn quad_vertex(&self) -> LinearMap {
        if let Some(f) = self.quad.borrow().as_ref() {
            return f.clone();
        }
        let m = self.ctx.m() as i64;
        let hbar = self
            .mul_map(1, 1)
            .then(&self.split(1, 1))
            .expect("mul-split on V⊗V");
        let cupcap = self.cap(1).then(&self.cup(1)).expect("cap-cup on V⊗V");
        let quad = named_coefficient(Coefficient::Quad, m, 0).expect("quad coefficient");
        let f = hbar.add(&cupcap.scale(&quad)).expect("same words");
        *self.quad.borrow_mut() = Some(f.clone());
        f
    }

    /// `rot90(Q) = Q` — rotation invariance of the quadrivalent vertex.
    pub fn quad_vertex_rotation_invariant(&self) -> bool {
        let q = self.quad_vertex();
        self.rot90(&q).equals(&q)
    }

    /// Partial trace on the right: close the second strand of an
    /// endomorphism of `Λ^a ⊗ Λ^a` with a cup below and a cap above.
    pub fn partial_trace_right(&self, f: &LinearMap) -> LinearMap {
        assert_eq!(f.source, f.target);
        assert_eq!(f.source.len(), 2);
        let a = f.source[0];
        let ida = self.id_map(a);
        let step1 = ida.tensor(&self.cup(a));
        let step2 = f.tensor(&ida);
        let step3 = ida.tensor(&self.cap(a));
        step1
            .then(&step2)
            .and_then(|x| x.then(&step3))
            .expect("partial trace words line up")
    }

    /// Every cached intertwiner passes the equivariance check for this
    /// context (used by tests and the verification suite).
    pub fn equivariance_sweep(&self, max_k: usize) -> Vec<(String, bool)> {
        let m = self.ctx.m();
        let kmax = max_k.min(m);
        let mut out = Vec::new();
        for i in 0..=kmax {
            for j in 0..=(kmax - i) {
                out.push((
                    format!("mul({i},{j})"),
                    self.ctx.equivariance_check(&self.mul_map(i, j)),
                ));
                out.push((
                    format!("split({i},{j})"),
                    self.ctx.equivariance_check(&self.split(i, j)),
                ));
            }
        }
        for k in 0..=kmax {
            out.push((
                format!("cup({k})"),
                self.ctx.equivariance_check(&self.cup(k)),
            ));
            out.push((
                format!("cap({k})"),
                self.ctx.equivariance_check(&self.cap(k)),
            ));
            out.push((format!("psi({k})"), self.psi_equivariant(k)));
        }
        out.push((
            "braid_pos".into(),
            self.ctx.equivariance_check(&self.braiding(true)),
        ));
        out.push((
            "braid_neg".into(),
            self.ctx.equivariance_check(&self.braiding(false)),
        ));
        out.push((
            "quad".into(),
            self.ctx.equivariance_check(&self.quad_vertex()),
        ));
        out
    }

    /// `ψ_k` intertwines the dual action (via the antipode) with the
    /// regular action: `ψ_k ∘ ρ*(g) = ρ(g) ∘ ψ_k`.
    pub fn psi_equivariant(&self, k: usize) -> bool {
        let psi = self.psi(k);
        self.ctx.generators().iter().all(|&g| {
            let dual = self.ctx.dual_act_on_lambda(g, k);
            let reg = self.ctx.act_on_lambda(g, k);
            psi.matmul(&dual) == reg.matmul(&psi)
        })
    }
}
