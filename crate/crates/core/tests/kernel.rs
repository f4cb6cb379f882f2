use std::collections::BTreeMap;

use proptest::prelude::*;
use qaffine::kernel::{
    convolve, delta_grid, expand, grid_mul_series, parse_ratexpr, ratexpr_equal, CellRef, CoeffGrid,
    LaurentSeries, MPoly, Mono, Ring, Var,
};
use qaffine::rmatrix::ENTRY_FORMULAS;
use qaffine::{Error, Poly, RatFn, Q};

const GRID: (Var, Var) = (Var::Z, Var::W);

fn r(text: &str) -> RatFn {
    parse_ratexpr(text).unwrap()
}

fn entry(name: &str) -> RatFn {
    r(ENTRY_FORMULAS.iter().find(|(n, _)| *n == name).unwrap().1)
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    let term = (-3i64..=3, -2i32..=2, -2i32..=2, -2i32..=2).prop_map(|(c, s, z, w)| {
        (Mono::from_pairs(&[(Var::S, s), (Var::Z, z), (Var::W, w)]), Q::from_integer(c.into()))
    });
    prop::collection::vec(term, 0..5).prop_map(MPoly::from_terms)
}

/// A rational function with spectral denominator `z − q^k w`.
fn ratfn_strategy() -> impl Strategy<Value = RatFn> {
    (poly_strategy(), -2i32..=2).prop_map(|(p, k)| {
        let den = &MPoly::var(Var::Z) - &MPoly::term(Q::from_integer(1.into()), Mono::from_pairs(&[(Var::S, 2 * k), (Var::W, 1)]));
        RatFn::new(p, den).unwrap()
    })
}

fn known(g: &CoeffGrid<RatFn>, m: i32, n: i32) -> Option<RatFn> {
    match g.get(m, n) {
        CellRef::Zero => Some(RatFn::zero()),
        CellRef::Value(v) => Some(v.clone()),
        CellRef::Unknown => None,
    }
}

/// Equal on every cell known in both grids; returns the number compared.
fn agree(a: &CoeffGrid<RatFn>, b: &CoeffGrid<RatFn>) -> usize {
    let (lo, hi) = a.window();
    let mut n_cmp = 0;
    for m in lo..=hi {
        for n in lo..=hi {
            if let (Some(x), Some(y)) = (known(a, m, n), known(b, m, n)) {
                assert!(ratexpr_equal(&x, &y), "cell ({m}, {n}): {x} vs {y}");
                n_cmp += 1;
            }
        }
    }
    n_cmp
}

#[test]
fn equality_examples() {
    assert!(ratexpr_equal(&r("(z^2 - w^2)/(z - w)"), &r("z + w")));
    assert!(ratexpr_equal(&r("s^2 - s^-2"), &r("q - q^-1")));
    let (a, d) = (entry("a"), entry("d"));
    assert!(ratexpr_equal(&a.mul(&d), &d.mul(&a)));
    assert!(!ratexpr_equal(&r("z + w"), &r("z - w")));
}

#[test]
fn geometric_series_examples() {
    let s = expand(&r("1/(1 - z/w)"), (Var::Z, Var::W), (0, 3)).unwrap();
    for n in 0..=3 {
        assert_eq!(s.get(n), Some(Some(&RatFn::one())), "order {n}");
    }
    let s = expand(&r("1/(z - w)"), (Var::W, Var::Z), (0, 2)).unwrap();
    for n in 0..=2 {
        assert_eq!(s.get(n).unwrap().unwrap(), &r("z^-1"), "order {n}");
    }
    let s = expand(&entry("a"), (Var::W, Var::Z), (0, 2)).unwrap();
    assert_eq!(s.coeffs().next().map(|(n, c)| (n, c.clone())), Some((0, r("q^-1"))));
}

#[test]
fn degenerate_ratio_is_not_expandable() {
    assert!(matches!(
        expand(&r("1/z"), (Var::Z, Var::Z), (0, 2)),
        Err(Error::NonExpandable(_))
    ));
}

#[test]
fn delta_grid_examples() {
    let d0 = delta_grid::<Q>(0, GRID, (-4, 4));
    for l in -4..=4 {
        assert_eq!(known(&d0, l, -l), Some(RatFn::one()));
        assert_eq!(known(&d0, l, 1 - l), Some(RatFn::zero()));
    }
    assert!(agree(&d0, &d0.clone().transpose_in_place()) > 0);
    let d1 = delta_grid::<Q>(1, GRID, (-4, 4));
    assert_eq!(known(&d1, 2, -2), Some(r("q^2")));
    assert_eq!(known(&d1, -3, 3), Some(r("q^-3")));
}

trait TransposeInPlace {
    fn transpose_in_place(self) -> Self;
}

impl TransposeInPlace for CoeffGrid<RatFn> {
    fn transpose_in_place(self) -> Self {
        let mut t = self.transpose();
        t.vars = GRID;
        t
    }
}

#[test]
fn grid_times_series_examples() {
    let w = (-4, 4);
    let d = delta_grid::<Q>(0, GRID, w);
    let one = LaurentSeries::from_coeffs((Var::W, Var::A), 0, 8, [(0, RatFn::one())].into());
    let same = grid_mul_series(&d, &one, false).unwrap();
    assert!(agree(&same, &d) > 0);
    let w_over_a = LaurentSeries::from_coeffs((Var::W, Var::A), 0, 8, [(1, RatFn::one())].into());
    let g = grid_mul_series(&d, &w_over_a, false).unwrap();
    for l in -3..=4 {
        assert_eq!(known(&g, l, -l + 1), Some(r("a^-1")), "cell ({l}, {})", 1 - l);
    }
}

#[test]
fn fully_truncated_product_has_empty_safe_window() {
    let w = (-2, 2);
    let d = delta_grid::<Q>(0, GRID, w);
    // A series known only at order 0 in a variable pair that slides off
    // the box leaves no cell determined.
    let s = LaurentSeries::from_coeffs((Var::Z, Var::W), -40, -40, BTreeMap::new());
    assert!(matches!(grid_mul_series(&d, &s, true), Err(Error::EmptySafeWindow(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn cross_multiplication_is_an_equivalence(f in ratfn_strategy(), k in poly_strategy(), l in poly_strategy()) {
        prop_assume!(!k.is_zero() && !l.is_zero());
        let g = RatFn::new_raw(f.num() * &k, f.den() * &k).unwrap();
        let h = RatFn::new_raw(g.num() * &l, g.den() * &l).unwrap();
        prop_assert!(ratexpr_equal(&f, &f));
        prop_assert_eq!(ratexpr_equal(&f, &g), ratexpr_equal(&g, &f));
        prop_assert!(ratexpr_equal(&f, &g) && ratexpr_equal(&g, &h) && ratexpr_equal(&f, &h));
    }

    #[test]
    fn expansion_is_a_ring_map(f in ratfn_strategy(), g in ratfn_strategy()) {
        let ratio = (Var::W, Var::Z);
        let window = (0, 5);
        let ef = expand(&f, ratio, window).unwrap();
        let eg = expand(&g, ratio, window).unwrap();
        let efg = expand(&f.mul(&g), ratio, window).unwrap();
        let prod = ef.mul(&eg).unwrap();
        let sum = ef.add(&eg).unwrap();
        let efpg = expand(&f.add(&g), ratio, window).unwrap();
        for n in -6..=5 {
            if let (Some(x), Some(y)) = (prod.get(n), efg.get(n)) {
                prop_assert_eq!(x.cloned().unwrap_or_else(RatFn::zero), y.cloned().unwrap_or_else(RatFn::zero), "order {}", n);
            }
            if let (Some(x), Some(y)) = (sum.get(n), efpg.get(n)) {
                prop_assert_eq!(x.cloned().unwrap_or_else(RatFn::zero), y.cloned().unwrap_or_else(RatFn::zero), "order {}", n);
            }
        }
    }

    #[test]
    fn delta_absorbs_monomials(k in -3i32..=3, e in -3i32..=3) {
        let w = (-5, 5);
        let d = delta_grid::<Q>(k, GRID, w);
        // δ(z/w q^k) z^e = δ(z/w q^k) (q^{-k} w)^e
        let fz = CoeffGrid::from_exact(GRID, w, [((e, 0), RatFn::one())].into());
        let fw = CoeffGrid::from_exact(GRID, w, [((0, e), RatFn::var_pow(Var::S, -2 * k * e))].into());
        let lhs = convolve(&d, &fz, &|a: &RatFn, b: &RatFn| a.mul(b)).unwrap();
        let rhs = convolve(&d, &fw, &|a: &RatFn, b: &RatFn| a.mul(b)).unwrap();
        prop_assert!(agree(&lhs, &rhs) > 0);
    }
}
