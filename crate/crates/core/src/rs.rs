//! Level-zero L-operators in the evaluation representation and the super RS
//! relations they satisfy.
//!
//! With the quantum space carrying the vector representation at spectral
//! parameter `a`, both L-operators come from one rational matrix
//! `θ R(z/a) θ`. `L⁺` is its expansion in powers of `a/z`, `L⁻` its expansion
//! in powers of `z/a`. The θ conjugation moves the grading signs of the
//! quantum leg into the entries, so the operator entries multiply as
//! ordinary matrices. Every relation is written with ordinary
//! products on `aux1 ⊗ aux2 ⊗ quantum`. Its two sides are assembled as
//! coefficient grids in `(z, w)` and compared on the safe window.

use std::fmt;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{Ring, RatExpr, Scalar, Var};
use crate::linalg::{
    embed_aux1, embed_aux2, random_even_pair, random_homogeneous, rll_component_sides, rll_theta_sides, theta_matrix,
    BlockOperator, Grading, Matrix,
};
use crate::opgrid::{at_var, expand_matrix, invert, place, product, residual_report, OpGrid, OpSeries};
use crate::report::{CheckReport, FailingCell};
use crate::rmatrix::{permuted, rename_zw, RMatrix};

/// Report group name for RLL relations.
pub const SUITE: &str = "rll";

/// The sign of an L-operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    /// `L⁺`, expanded in powers of `a/z`.
    Plus,
    /// `L⁻`, expanded in powers of `z/a`.
    Minus,
}

impl Sign {
    /// Both signs.
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    /// `"+"` or `"-"`.
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    /// The expansion ratio of `L^±(var)`.
    pub fn ratio(self, var: Var) -> (Var, Var) {
        match self {
            Sign::Plus => (Var::A, var),
            Sign::Minus => (var, Var::A),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// An L-operator `L^±(z)` acting on `V ⊗ V(a)`, stored as a series whose
/// coefficients are `dim² × dim²` matrices with index `(aux, quantum)`.
#[derive(Clone, Debug)]
pub struct LOperator<C: Scalar> {
    /// Which expansion.
    pub sign: Sign,
    /// Grading of the auxiliary (and quantum) space.
    pub grading: Grading,
    /// The expansion in the spectral variable `z`.
    pub series: OpSeries<C>,
    /// The grid box the operator was built for.
    pub window: (i32, i32),
}

impl<C: Scalar> LOperator<C> {
    /// Dimension of the auxiliary space.
    pub fn dim(&self) -> usize {
        self.grading.dim()
    }

    /// The operator entry `L_{ij}` as a series of quantum-space matrices.
    pub fn entry(&self, i: usize, j: usize) -> OpSeries<C> {
        let d = self.dim();
        self.series.map_indexed(&|_, m| m.block(i * d, j * d, d, d))
    }

    /// The order-0 coefficient.
    pub fn order0(&self) -> Matrix<RatExpr<C>> {
        match self.series.get(0) {
            Some(Some(m)) => m.clone(),
            _ => Matrix::zeros(self.dim() * self.dim(), self.dim() * self.dim()),
        }
    }

    /// The series inverse `L^±(z)^{-1}`.
    pub fn inverse(&self) -> Result<OpSeries<C>> {
        invert(&self.series)
    }

    /// The series with spectral variable `var` in place of `z`.
    pub fn at(&self, var: Var) -> OpSeries<C> {
        at_var(&self.series, Var::Z, var)
    }
}

/// The rational matrix `θ R(z/a) θ` shared by both L-operators: entry
/// `((α, γ), (α', γ'))` is `(-1)^{[α][γ] + [α'][γ']} R_{αγ, α'γ'}(z/a)`.
pub fn l_matrix<C: Scalar>(r: &RMatrix<C>) -> Matrix<RatExpr<C>> {
    let th = theta_matrix::<RatExpr<C>>(&r.grading);
    th.mul(&rename_zw(&r.entries, Var::Z, Var::A)).mul(&th)
}

/// Builds `L^±(z)` from `R`, with coefficients known up to index
/// `window.1`.
pub fn build_l<C: Scalar>(sign: Sign, r: &RMatrix<C>, window: (i32, i32)) -> Result<LOperator<C>> {
    let series = expand_matrix(&l_matrix(r), sign.ratio(Var::Z), window.1)?;
    Ok(LOperator {
        sign,
        grading: r.grading.clone(),
        series,
        window,
    })
}

/// `L(z) L(z)^{-1} = 1` and `L(z)^{-1} L(z) = 1` on the known coefficients.
pub fn verify_l_inverse<C: Scalar>(l: &LOperator<C>) -> Result<CheckReport> {
    let start = Instant::now();
    let inv = l.inverse()?;
    let n = l.dim() * l.dim();
    let one = Matrix::<RatExpr<C>>::identity(n);
    let mut failing = Vec::new();
    let mut checked = 0;
    for prod in [l.series.mul(&inv)?, inv.mul(&l.series)?] {
        for k in prod.lo()..=prod.hi() {
            let c = match prod.get(k) {
                Some(Some(m)) => m.clone(),
                _ => Matrix::zeros(n, n),
            };
            let expect = if k == 0 { one.clone() } else { Matrix::zeros(n, n) };
            checked += n * n;
            failing.extend(c.diff_cells(&expect).into_iter().map(|(i, j)| FailingCell {
                m: k,
                n: 0,
                entry: i * n + j,
            }));
        }
    }
    let mut rep = CheckReport::from_cells(SUITE, &format!("L{}*L{}^-1", l.sign, l.sign), checked, failing);
    rep.elapsed_ms = start.elapsed().as_millis();
    Ok(rep)
}

/// One factor of an RLL product on `aux1 ⊗ aux2 ⊗ quantum`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `R(z/w) ⊗ 1`.
    R,
    /// `R₂₁(z/w) ⊗ 1 = P R(z/w) P ⊗ 1`.
    R21,
    /// `L^±₁(var)` (or its inverse), acting on aux1.
    L1(Sign, Var, bool),
    /// `θ L^±₂(var) θ` (or `θ L^±₂(var)^{-1} θ`), acting on aux2.
    L2(Sign, Var, bool),
}

/// An RLL-type relation `Π lhs = Π rhs`.
#[derive(Clone, Debug)]
pub struct RllRelation {
    /// Report name.
    pub name: String,
    /// Ordered factors of the left side.
    pub lhs: Vec<Factor>,
    /// Ordered factors of the right side.
    pub rhs: Vec<Factor>,
}

/// A same-sign or mixed pair for the defining relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignPair {
    /// `L⁺ L⁺`.
    PlusPlus,
    /// `L⁻ L⁻`.
    MinusMinus,
    /// `L⁺(z) L⁻(w)`.
    PlusMinus,
}

impl SignPair {
    /// All three pairs.
    pub const ALL: [SignPair; 3] = [SignPair::PlusPlus, SignPair::MinusMinus, SignPair::PlusMinus];

    fn signs(self) -> (Sign, Sign) {
        match self {
            SignPair::PlusPlus => (Sign::Plus, Sign::Plus),
            SignPair::MinusMinus => (Sign::Minus, Sign::Minus),
            SignPair::PlusMinus => (Sign::Plus, Sign::Minus),
        }
    }

    fn tag(self) -> &'static str {
        match self {
            SignPair::PlusPlus => "++",
            SignPair::MinusMinus => "--",
            SignPair::PlusMinus => "+-",
        }
    }
}

/// The defining relation `R L₁(z) θL₂(w)θ = θL₂(w)θ L₁(z) R` for a sign pair.
pub fn defining_relation(pair: SignPair) -> RllRelation {
    use Factor::*;
    let (s1, s2) = pair.signs();
    RllRelation {
        name: format!("rll{}", pair.tag()),
        lhs: vec![R, L1(s1, Var::Z, false), L2(s2, Var::W, false)],
        rhs: vec![L2(s2, Var::W, false), L1(s1, Var::Z, false), R],
    }
}

/// The nine families of consequences of the defining relations (twelve
/// sign instances), in the θ form with `L₂` at `z` and `L₁` at `w`.
pub fn consequence_relations() -> Vec<RllRelation> {
    use Factor::*;
    use Sign::*;
    let (z, w) = (Var::Z, Var::W);
    let rel = |name: String, lhs: Vec<Factor>, rhs: Vec<Factor>| RllRelation { name, lhs, rhs };
    let mut out = Vec::new();
    for s in Sign::BOTH {
        out.push(rel(
            format!("llr2{s}{s}"),
            vec![R21, L2(s, z, false), L1(s, w, false)],
            vec![L1(s, w, false), L2(s, z, false), R21],
        ));
    }
    for (name, a, b) in [("llr3", Plus, Minus), ("llr4", Minus, Plus)] {
        out.push(rel(
            name.to_string(),
            vec![R21, L2(a, z, false), L1(b, w, false)],
            vec![L1(b, w, false), L2(a, z, false), R21],
        ));
    }
    for s in Sign::BOTH {
        out.push(rel(
            format!("llr5{s}{s}"),
            vec![L2(s, z, true), L1(s, w, true), R21],
            vec![R21, L1(s, w, true), L2(s, z, true)],
        ));
    }
    for (name, a, b) in [("llr6", Plus, Minus), ("llr7", Minus, Plus)] {
        out.push(rel(
            name.to_string(),
            vec![L2(a, z, true), L1(b, w, true), R21],
            vec![R21, L1(b, w, true), L2(a, z, true)],
        ));
    }
    for s in Sign::BOTH {
        out.push(rel(
            format!("llr8{s}{s}"),
            vec![L1(s, w, true), R21, L2(s, z, false)],
            vec![L2(s, z, false), R21, L1(s, w, true)],
        ));
    }
    for (name, a, b) in [("llr9", Plus, Minus), ("llr10", Minus, Plus)] {
        out.push(rel(
            name.to_string(),
            vec![L1(b, w, true), R21, L2(a, z, false)],
            vec![L2(a, z, false), R21, L1(b, w, true)],
        ));
    }
    out
}

/// The expansion directions tried for the R factors, in order.
const R_DIRECTIONS: [(Var, Var); 2] = [(Var::W, Var::Z), (Var::Z, Var::W)];

fn ratio_name(r: (Var, Var)) -> String {
    format!("{}/{}", r.0, r.1)
}

/// Pre-expanded ingredients shared by all RLL checks.
pub struct RllContext<C: Scalar> {
    grading: Grading,
    window: (i32, i32),
    r: RMatrix<C>,
    l: [OpSeries<C>; 2],
    l_inv: [OpSeries<C>; 2],
}

impl<C: Scalar> RllContext<C> {
    /// Prepares the context from both L-operators (built from `r` on the
    /// same window).
    pub fn new(r: &RMatrix<C>, lp: &LOperator<C>, lm: &LOperator<C>) -> Result<Self> {
        if lp.window != lm.window {
            return Err(Error::Invalid("L-operators built on different windows".into()));
        }
        Ok(RllContext {
            grading: r.grading.clone(),
            window: lp.window,
            r: r.clone(),
            l: [lp.series.clone(), lm.series.clone()],
            l_inv: [lp.inverse()?, lm.inverse()?],
        })
    }

    fn idx(s: Sign) -> usize {
        match s {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    fn r_grid(&self, swapped: bool, dir: (Var, Var)) -> Result<OpGrid<C>> {
        let m = if swapped { permuted(&self.r) } else { self.r.entries.clone() };
        let s = expand_matrix(&m, dir, self.window.1)?;
        let idq = Matrix::<RatExpr<C>>::identity(self.grading.dim());
        place(&s, (Var::Z, Var::W), self.window, &|c| c.kron(&idq))
    }

    fn l_grid(&self, leg: usize, sign: Sign, var: Var, inverse: bool) -> Result<OpGrid<C>> {
        let i = Self::idx(sign);
        let base = if inverse { &self.l_inv[i] } else { &self.l[i] };
        let s = at_var(base, Var::Z, var);
        let d = self.grading.dim();
        let th = theta_matrix::<RatExpr<C>>(&self.grading).kron(&Matrix::identity(d));
        if leg == 1 {
            place(&s, (Var::Z, Var::W), self.window, &|c| embed_aux1(c, d, d))
        } else {
            place(&s, (Var::Z, Var::W), self.window, &|c| th.mul(&embed_aux2(c, d, d)).mul(&th))
        }
    }

    fn side(&self, factors: &[Factor], dir: (Var, Var)) -> Result<OpGrid<C>> {
        let grids = factors
            .iter()
            .map(|f| match *f {
                Factor::R => self.r_grid(false, dir),
                Factor::R21 => self.r_grid(true, dir),
                Factor::L1(s, v, inv) => self.l_grid(1, s, v, inv),
                Factor::L2(s, v, inv) => self.l_grid(2, s, v, inv),
            })
            .collect::<Result<Vec<_>>>()?;
        product(&grids)
    }

    /// Checks one relation. The R factors are expanded in `w/z` when that
    /// gives a nonempty safe window, otherwise in `z/w`; the direction used
    /// is recorded as a note.
    pub fn check(&self, rel: &RllRelation) -> CheckReport {
        let start = Instant::now();
        let n = self.grading.dim().pow(3);
        let mut last = None;
        for dir in R_DIRECTIONS {
            let residual = self
                .side(&rel.lhs, dir)
                .and_then(|l| self.side(&rel.rhs, dir).and_then(|r| l.sub(&r)));
            let mut rep = match residual {
                Ok(res) => residual_report(SUITE, &rel.name, &res, n * n),
                Err(e) => CheckReport::error(SUITE, &rel.name, &e),
            };
            rep.notes.push(format!("R expanded in powers of {}", ratio_name(dir)));
            rep.elapsed_ms = start.elapsed().as_millis();
            if rep.cells_checked > 0 {
                return rep;
            }
            last = Some(rep);
        }
        last.expect("at least one direction tried")
    }
}

/// Verifies the defining relation for one sign pair.
pub fn verify_rll<C: Scalar>(
    pair: SignPair,
    r: &RMatrix<C>,
    lp: &LOperator<C>,
    lm: &LOperator<C>,
) -> Result<CheckReport> {
    let ctx = RllContext::new(r, lp, lm)?;
    Ok(ctx.check(&defining_relation(pair)))
}

/// Verifies all consequence families.
pub fn verify_theta_consequences<C: Scalar>(
    r: &RMatrix<C>,
    lp: &LOperator<C>,
    lm: &LOperator<C>,
) -> Result<Vec<CheckReport>> {
    let ctx = RllContext::new(r, lp, lm)?;
    Ok(consequence_relations().par_iter().map(|rel| ctx.check(rel)).collect())
}

/// The graded component form and the θ form of the defining relations agree
/// coefficient by coefficient. Both sides are trilinear in the R, L₁ and L₂
/// coefficients, so equal residual grids follow from agreement on every
/// coefficient triple up to index `depth`.
pub fn verify_component_form<C: Scalar>(
    r: &RMatrix<C>,
    lp: &LOperator<C>,
    lm: &LOperator<C>,
    depth: i32,
) -> Result<CheckReport> {
    let start = Instant::now();
    let g = &r.grading;
    let rs = expand_matrix(&r.entries, (Var::W, Var::Z), depth)?;
    let coeffs = |s: &OpSeries<C>| -> Vec<Matrix<RatExpr<C>>> {
        s.coeffs().filter(|(k, _)| *k <= depth).map(|(_, m)| m.clone()).collect()
    };
    let r_coeffs = coeffs(&rs);
    let mut checked = 0;
    let mut failing = Vec::new();
    for (la, lb) in [(lp, lp), (lm, lm), (lp, lm)] {
        for a in coeffs(&la.series) {
            for b in coeffs(&lb.series) {
                let ba = BlockOperator {
                    aux: g.clone(),
                    quantum: g.clone(),
                    matrix: a.clone(),
                };
                let bb = BlockOperator {
                    aux: g.clone(),
                    quantum: g.clone(),
                    matrix: b,
                };
                for rk in &r_coeffs {
                    let (cl, cr) = rll_component_sides(rk, rk, &ba, &bb)?;
                    let (tl, tr) = rll_theta_sides(rk, rk, &ba, &bb)?;
                    let n = cl.cols();
                    checked += 2 * n * n;
                    for (i, j) in cl.diff_cells(&tl).into_iter().chain(cr.diff_cells(&tr)) {
                        failing.push(FailingCell { m: 0, n: 0, entry: i * n + j });
                    }
                }
            }
        }
    }
    let mut rep = CheckReport::from_cells(SUITE, "component=theta", checked, failing)
        .with_note(format!("all R, L coefficient triples up to index {depth}"));
    rep.elapsed_ms = start.elapsed().as_millis();
    Ok(rep)
}

/// The graded component form and the θ form agree on `samples` seeded
/// random instances: an even `R` on `V ⊗ V` and two operators with
/// homogeneous entries, alternating between a three- and a two-dimensional
/// graded quantum space.
pub fn verify_component_random<C: Scalar>(seed: u64, samples: usize) -> CheckReport {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(seed);
    let g = Grading::osp12();
    let quanta = [Grading::osp12(), Grading::new(vec![0, 1]).expect("valid grading")];
    let mut checked = 0;
    let mut failing = Vec::new();
    for i in 0..samples {
        let quantum = &quanta[i % quanta.len()];
        let rl = random_even_pair::<C, _>(&mut rng, &g, 0.5);
        let rr = random_even_pair::<C, _>(&mut rng, &g, 0.5);
        let a = random_homogeneous::<C, _>(&mut rng, &g, quantum, 0.4);
        let b = random_homogeneous::<C, _>(&mut rng, &g, quantum, 0.4);
        let sides = rll_component_sides(&rl, &rr, &a, &b).and_then(|c| Ok((c, rll_theta_sides(&rl, &rr, &a, &b)?)));
        let ((cl, cr), (tl, tr)) = match sides {
            Ok(x) => x,
            Err(e) => return CheckReport::error(SUITE, "component=theta(random)", &e),
        };
        let n = cl.cols();
        checked += 2 * n * n;
        for (r, c) in cl.diff_cells(&tl).into_iter().chain(cr.diff_cells(&tr)) {
            failing.push(FailingCell { m: i as i32, n: 0, entry: r * n + c });
        }
    }
    let mut rep = CheckReport::from_cells(SUITE, "component=theta(random)", checked, failing)
        .with_note(format!("{samples} random homogeneous instances, seed {seed}"));
    rep.elapsed_ms = start.elapsed().as_millis();
    rep
}

/// Every RLL check: the three defining relations, the twelve consequence
/// instances, both inverse checks and the component-form comparison.
pub fn verify_all<C: Scalar>(r: &RMatrix<C>, cutoff: i32) -> Vec<CheckReport> {
    let window = (-cutoff, cutoff);
    let built = build_l(Sign::Plus, r, window).and_then(|lp| Ok((lp, build_l(Sign::Minus, r, window)?)));
    let (lp, lm) = match built {
        Ok(x) => x,
        Err(e) => return vec![CheckReport::error(SUITE, "build_L", &e)],
    };
    let ctx = match RllContext::new(r, &lp, &lm) {
        Ok(c) => c,
        Err(e) => return vec![CheckReport::error(SUITE, "inverse", &e)],
    };
    let mut rels: Vec<RllRelation> = SignPair::ALL.iter().map(|p| defining_relation(*p)).collect();
    rels.extend(consequence_relations());
    let mut out: Vec<CheckReport> = rels.par_iter().map(|rel| ctx.check(rel)).collect();
    for l in [&lp, &lm] {
        out.push(verify_l_inverse(l).unwrap_or_else(|e| CheckReport::error(SUITE, "inverse", &e)));
    }
    out.push(
        verify_component_form(r, &lp, &lm, 2).unwrap_or_else(|e| CheckReport::error(SUITE, "component=theta", &e)),
    );
    out
}
