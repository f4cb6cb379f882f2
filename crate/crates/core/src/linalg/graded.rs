//! Z2-graded spaces: the θ ungrading matrix, the graded permutation,
//! supertransposition, Koszul-signed leg embeddings, and the graded
//! component form of the RLL relation used as a cross-check oracle.
//!
//! Tensor-product bases are row-major: the pair `(α, β)` of a `d`-dimensional
//! space has index `α·d + β` (0-based), so the 9×9 layout reads
//! `11, 12, 13, 21, …, 33`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::error::{Error, Result};
use crate::kernel::{Field, Ring, RatExpr, Scalar};

/// Parities of the basis vectors of a graded space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    parities: Vec<u8>,
}

impl Grading {
    /// A grading from explicit 0/1 parities.
    pub fn new(parities: Vec<u8>) -> Result<Self> {
        if parities.is_empty() || parities.iter().any(|&p| p > 1) {
            return Err(Error::Invalid(format!("bad parity vector {parities:?}")));
        }
        Ok(Grading { parities })
    }

    /// The vector representation of osp(1|2): `v1, v3` even, `v2` odd.
    pub fn osp12() -> Self {
        Grading {
            parities: vec![0, 1, 0],
        }
    }

    /// A purely even space.
    pub fn even(dim: usize) -> Self {
        Grading {
            parities: vec![0; dim],
        }
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    /// Parity of basis vector `i` (0-based).
    pub fn parity(&self, i: usize) -> u8 {
        self.parities[i]
    }

    /// All parities.
    pub fn parities(&self) -> &[u8] {
        &self.parities
    }

    /// Parity of a multi-index of a tensor power, given row-major.
    pub fn tensor_parity(&self, index: usize, legs: usize) -> u8 {
        let d = self.dim();
        let mut x = index;
        let mut p = 0;
        for _ in 0..legs {
            p ^= self.parity(x % d);
            x /= d;
        }
        p
    }

    /// `η = diag((-1)^[a])`.
    pub fn eta<T: Field>(&self) -> Matrix<T> {
        Matrix::diagonal(self.parities.iter().map(|&p| sign::<T>(p)).collect())
    }
}

/// `(-1)^p` as a field element.
pub fn sign<T: Field>(p: u8) -> T {
    if p % 2 == 0 {
        T::one()
    } else {
        T::one().neg()
    }
}

fn signed<T: Field>(p: u8, v: &T) -> T {
    if p % 2 == 0 {
        v.clone()
    } else {
        v.neg()
    }
}

/// `θ_{αβ,α'β'} = (-1)^{[α][β]} δ_{αα'} δ_{ββ'}` on `V ⊗ V`.
pub fn theta_matrix<T: Field>(g: &Grading) -> Matrix<T> {
    let d = g.dim();
    Matrix::diagonal(
        (0..d * d)
            .map(|k| sign::<T>(g.parity(k / d) & g.parity(k % d)))
            .collect(),
    )
}

/// The graded permutation `P(v_α ⊗ v_β) = (-1)^{[α][β]} v_β ⊗ v_α`.
pub fn graded_permutation<T: Field>(g: &Grading) -> Matrix<T> {
    let d = g.dim();
    let mut p = Matrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            p.set(b * d + a, a * d + b, sign::<T>(g.parity(a) & g.parity(b)));
        }
    }
    p
}

/// Supertranspose `(A^{st})_{ab} = (-1)^{[a]([a]+[b])} A_{ba}`.
pub fn supertranspose<T: Field>(m: &Matrix<T>, g: &Grading) -> Matrix<T> {
    Matrix::from_fn(m.rows(), m.cols(), |a, b| {
        let (pa, pb) = (g.parity(a), g.parity(b));
        signed(pa & (pa ^ pb), m.get(b, a))
    })
}

/// Inverse supertranspose `A^{ist} = η A^{st} η`, so `(A^{st})^{ist} = A`.
pub fn inverse_supertranspose<T: Field>(m: &Matrix<T>, g: &Grading) -> Matrix<T> {
    let eta = g.eta::<T>();
    eta.mul(&supertranspose(m, g)).mul(&eta)
}

/// Supertranspose in one leg (1 or 2) of an operator on `V ⊗ V`.
pub fn partial_supertranspose<T: Field>(m: &Matrix<T>, g: &Grading, leg: usize) -> Result<Matrix<T>> {
    let d = g.dim();
    if m.rows() != d * d || !m.is_square() {
        return Err(Error::Invalid("partial supertranspose needs a dim² square matrix".into()));
    }
    if leg != 1 && leg != 2 {
        return Err(Error::BadLeg { leg, legs: 2 });
    }
    Ok(Matrix::from_fn(d * d, d * d, |i, j| {
        let (a, b, c, e) = (i / d, i % d, j / d, j % d);
        if leg == 1 {
            let (pa, pc) = (g.parity(a), g.parity(c));
            signed(pa & (pa ^ pc), m.get(c * d + b, a * d + e))
        } else {
            let (pb, pe) = (g.parity(b), g.parity(e));
            signed(pb & (pb ^ pe), m.get(a * d + e, c * d + b))
        }
    }))
}

/// Inverse of [`partial_supertranspose`] in the same leg.
pub fn partial_inverse_supertranspose<T: Field>(m: &Matrix<T>, g: &Grading, leg: usize) -> Result<Matrix<T>> {
    let d = g.dim();
    if m.rows() != d * d || !m.is_square() {
        return Err(Error::Invalid("partial supertranspose needs a dim² square matrix".into()));
    }
    if leg != 1 && leg != 2 {
        return Err(Error::BadLeg { leg, legs: 2 });
    }
    Ok(Matrix::from_fn(d * d, d * d, |i, j| {
        let (a, b, c, e) = (i / d, i % d, j / d, j % d);
        if leg == 1 {
            let (pa, pc) = (g.parity(a), g.parity(c));
            signed(pc & (pc ^ pa), m.get(c * d + b, a * d + e))
        } else {
            let (pb, pe) = (g.parity(b), g.parity(e));
            signed(pe & (pe ^ pb), m.get(a * d + e, c * d + b))
        }
    }))
}

/// Ungraded embedding of an operator on one tensor factor into `legs`
/// factors (plain Kronecker products with identities).
pub fn embed_leg<T: Field>(m: &Matrix<T>, leg: usize, legs: usize) -> Result<Matrix<T>> {
    if leg == 0 || leg > legs {
        return Err(Error::BadLeg { leg, legs });
    }
    let d = m.rows();
    let before = Matrix::<T>::identity(d.pow(leg as u32 - 1));
    let after = Matrix::<T>::identity(d.pow((legs - leg) as u32));
    Ok(before.kron(m).kron(&after))
}

/// Graded embedding of an operator on one factor: the entry `(a, b)` picks
/// up the Koszul sign `(-1)^{([a]+[b])·p}` where `p` is the total parity of
/// the basis vectors on the preceding factors.
pub fn graded_embed_leg<T: Field>(m: &Matrix<T>, g: &Grading, leg: usize, legs: usize) -> Result<Matrix<T>> {
    if leg == 0 || leg > legs {
        return Err(Error::BadLeg { leg, legs });
    }
    let d = g.dim();
    if m.rows() != d || !m.is_square() {
        return Err(Error::Invalid("operator dimension does not match grading".into()));
    }
    let nb = d.pow(leg as u32 - 1);
    let na = d.pow((legs - leg) as u32);
    let n = nb * d * na;
    let mut out = Matrix::zeros(n, n);
    for i in 0..nb {
        let pi = g.tensor_parity(i, leg - 1);
        for (a, b, v) in m.nonzero() {
            let p = pi & (g.parity(a) ^ g.parity(b));
            let v = signed(p, v);
            for k in 0..na {
                out.set((i * d + a) * na + k, (i * d + b) * na + k, v.clone());
            }
        }
    }
    Ok(out)
}

/// Embeds an operator on `V ⊗ V` into legs `(i, j)` of `V^{⊗3}`, `i < j`.
///
/// With `graded`, the `(1, 3)` embedding carries the Koszul sign
/// `(-1)^{([c]+[c'])[b]}` of moving the third-leg component past the middle
/// basis vector `b`; the `(1, 2)` and `(2, 3)` embeddings need none for
/// even operators.
pub fn embed_pair<T: Field>(m: &Matrix<T>, g: &Grading, legs: (usize, usize), graded: bool) -> Result<Matrix<T>> {
    let d = g.dim();
    if m.rows() != d * d || !m.is_square() {
        return Err(Error::Invalid("pair operator must be dim² square".into()));
    }
    let id = Matrix::<T>::identity(d);
    match legs {
        (1, 2) => Ok(m.kron(&id)),
        (2, 3) => Ok(id.kron(m)),
        (1, 3) => {
            let n = d * d * d;
            let mut out = Matrix::zeros(n, n);
            for (r, c, v) in m.nonzero() {
                let (a, cc) = (r / d, r % d);
                let (a2, cc2) = (c / d, c % d);
                for b in 0..d {
                    let p = if graded {
                        g.parity(b) & (g.parity(cc) ^ g.parity(cc2))
                    } else {
                        0
                    };
                    out.set((a * d + b) * d + cc, (a2 * d + b) * d + cc2, signed(p, v));
                }
            }
            Ok(out)
        }
        (i, j) => Err(Error::BadLeg {
            leg: if i >= 1 && i <= 3 { j } else { i },
            legs: 3,
        }),
    }
}

/// An operator-valued matrix: a `daux × daux` array of operators on a
/// `dq`-dimensional quantum space, stored as a `(daux·dq)²` matrix with
/// row-major index `(α, γ)` (auxiliary index first).
#[derive(Clone, Debug)]
pub struct BlockOperator<T> {
    /// Auxiliary-space grading.
    pub aux: Grading,
    /// Quantum-space grading.
    pub quantum: Grading,
    /// The full matrix.
    pub matrix: Matrix<T>,
}

impl<T: Field> BlockOperator<T> {
    /// The operator entry `A_{αα'}` as a `dq × dq` matrix.
    pub fn entry(&self, a: usize, a2: usize) -> Matrix<T> {
        let dq = self.quantum.dim();
        self.matrix.block(a * dq, a2 * dq, dq, dq)
    }

    /// Checks that every entry `A_{αα'}` is homogeneous of parity
    /// `[α] + [α']`.
    pub fn check_homogeneous(&self) -> Result<()> {
        let dq = self.quantum.dim();
        for (r, c, _) in self.matrix.nonzero() {
            let (a, g) = (r / dq, r % dq);
            let (a2, g2) = (c / dq, c % dq);
            let p = self.aux.parity(a) ^ self.aux.parity(a2) ^ self.quantum.parity(g) ^ self.quantum.parity(g2);
            if p != 0 {
                return Err(Error::Invalid(format!(
                    "entry ({}, {}) of the operator matrix has mixed parity",
                    a + 1,
                    a2 + 1
                )));
            }
        }
        Ok(())
    }
}

/// A random operator-valued matrix with homogeneous entries and small
/// integer coefficients, reproducible from the caller's generator.
pub fn random_homogeneous<C: Scalar, R: Rng>(
    rng: &mut R,
    aux: &Grading,
    quantum: &Grading,
    density: f64,
) -> BlockOperator<RatExpr<C>> {
    let (da, dq) = (aux.dim(), quantum.dim());
    let n = da * dq;
    let mut matrix = Matrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let p = aux.parity(r / dq) ^ aux.parity(c / dq) ^ quantum.parity(r % dq) ^ quantum.parity(c % dq);
            if p == 0 && rng.gen_bool(density) {
                matrix.set(r, c, RatExpr::constant(C::int(rng_int(rng))));
            }
        }
    }
    BlockOperator {
        aux: aux.clone(),
        quantum: quantum.clone(),
        matrix,
    }
}

fn rng_int<R: Rng>(rng: &mut R) -> i64 {
    let v = rng.gen_range(1..=5);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// A random even operator on `V ⊗ V` (weight-conserving sparsity), for
/// the component-form oracle.
pub fn random_even_pair<C: Scalar, R: Rng>(rng: &mut R, g: &Grading, density: f64) -> Matrix<RatExpr<C>> {
    let d = g.dim();
    let n = d * d;
    let mut m = Matrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            if g.tensor_parity(r, 2) == g.tensor_parity(c, 2) && rng.gen_bool(density) {
                m.set(r, c, RatExpr::constant(C::int(rng_int(rng))));
            }
        }
    }
    m
}

/// Both sides of the graded component equation
///
/// `R_{αβ,α''β''} A_{α''α'} B_{β''β'} (-1)^{[α']([β']+[β''])}
///   = B_{ββ''} A_{αα''} R_{α''β'',α'β'} (-1)^{[α]([β]+[β''])}`
///
/// evaluated with explicit sums and signs. Each side is returned as a
/// `(d²·dq)²` matrix with index `((α, β), γ)`; `R` acts on the auxiliary
/// pair and may be supplied separately for the two sides (as in the mixed
/// relation).
pub fn rll_component_sides<T: Field>(
    r_left: &Matrix<T>,
    r_right: &Matrix<T>,
    a: &BlockOperator<T>,
    b: &BlockOperator<T>,
) -> Result<(Matrix<T>, Matrix<T>)> {
    a.check_homogeneous()?;
    b.check_homogeneous()?;
    let g = &a.aux;
    let d = g.dim();
    let dq = a.quantum.dim();
    let n = d * d * dq;
    let entries_a: Vec<Vec<Matrix<T>>> = (0..d).map(|i| (0..d).map(|j| a.entry(i, j)).collect()).collect();
    let entries_b: Vec<Vec<Matrix<T>>> = (0..d).map(|i| (0..d).map(|j| b.entry(i, j)).collect()).collect();
    let mut lhs = Matrix::zeros(n, n);
    let mut rhs = Matrix::zeros(n, n);
    let place = |out: &mut Matrix<T>, row_pair: usize, col_pair: usize, op: &Matrix<T>| {
        for (i, j, v) in op.nonzero() {
            let cur = out.get(row_pair * dq + i, col_pair * dq + j).add(v);
            out.set(row_pair * dq + i, col_pair * dq + j, cur);
        }
    };
    let p = |i: usize| g.parity(i);
    for al in 0..d {
        for be in 0..d {
            for al1 in 0..d {
                for be1 in 0..d {
                    // LHS: Σ_{α''β''} R_{αβ,α''β''} A_{α''α'} B_{β''β'} sign
                    let mut acc = Matrix::<T>::zeros(dq, dq);
                    for al2 in 0..d {
                        for be2 in 0..d {
                            let rv = r_left.get(al * d + be, al2 * d + be2);
                            if rv.is_zero() {
                                continue;
                            }
                            let prod = entries_a[al2][al1].mul(&entries_b[be2][be1]);
                            let s = p(al1) & (p(be1) ^ p(be2));
                            acc = acc.add(&prod.scale(&signed(s, rv)));
                        }
                    }
                    place(&mut lhs, al * d + be, al1 * d + be1, &acc);
                    // RHS: Σ B_{ββ''} A_{αα''} R_{α''β'',α'β'} sign
                    let mut acc = Matrix::<T>::zeros(dq, dq);
                    for al2 in 0..d {
                        for be2 in 0..d {
                            let rv = r_right.get(al2 * d + be2, al1 * d + be1);
                            if rv.is_zero() {
                                continue;
                            }
                            let prod = entries_b[be][be2].mul(&entries_a[al][al2]);
                            let s = p(al) & (p(be) ^ p(be2));
                            acc = acc.add(&prod.scale(&signed(s, rv)));
                        }
                    }
                    place(&mut rhs, al * d + be, al1 * d + be1, &acc);
                }
            }
        }
    }
    Ok((lhs, rhs))
}

/// Both sides of the θ-conjugated equation `R L₁ θL₂θ = θL₂θ L₁ R` with
/// ordinary matrix products, where `L₁` acts on (aux1, quantum), `L₂` on
/// (aux2, quantum) and `θ` on (aux1, aux2).
pub fn rll_theta_sides<T: Field>(
    r_left: &Matrix<T>,
    r_right: &Matrix<T>,
    a: &BlockOperator<T>,
    b: &BlockOperator<T>,
) -> Result<(Matrix<T>, Matrix<T>)> {
    let g = &a.aux;
    let dq = a.quantum.dim();
    let idq = Matrix::<T>::identity(dq);
    let l1 = embed_aux1(&a.matrix, g.dim(), dq);
    let l2 = embed_aux2(&b.matrix, g.dim(), dq);
    let th = theta_matrix::<T>(g).kron(&idq);
    let tl2t = th.mul(&l2).mul(&th);
    let rl = r_left.kron(&idq);
    let rr = r_right.kron(&idq);
    Ok((rl.mul(&l1).mul(&tl2t), tl2t.mul(&l1).mul(&rr)))
}

/// Places an operator on (aux, quantum) onto (aux1, quantum) of
/// aux1 ⊗ aux2 ⊗ quantum (ungraded).
pub fn embed_aux1<T: Field>(l: &Matrix<T>, d: usize, dq: usize) -> Matrix<T> {
    let n = d * d * dq;
    let mut out = Matrix::zeros(n, n);
    for (r, c, v) in l.nonzero() {
        let (a, g) = (r / dq, r % dq);
        let (a2, g2) = (c / dq, c % dq);
        for b in 0..d {
            out.set((a * d + b) * dq + g, (a2 * d + b) * dq + g2, v.clone());
        }
    }
    out
}

/// Places an operator on (aux, quantum) onto (aux2, quantum) of
/// aux1 ⊗ aux2 ⊗ quantum (ungraded).
pub fn embed_aux2<T: Field>(l: &Matrix<T>, d: usize, dq: usize) -> Matrix<T> {
    let _ = dq;
    Matrix::<T>::identity(d).kron(l)
}
