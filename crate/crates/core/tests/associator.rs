use std::sync::LazyLock;

use svzeta::associator::{
    build_z_numeric, build_z_symbolic, deligne_w, e1_prime, e1_prime_residual,
    fixed_point_residual, max_ball_norm, rational, Associator, SingleValued, NUMERIC_TARGET,
};
use svzeta::numerics::MzvEvaluator;
use svzeta::{Ball, Coeff, Composition, MzvExpr, Word};

static SYMBOLIC_Z: LazyLock<Associator<MzvExpr>> = LazyLock::new(|| build_z_symbolic(8));
static SYMBOLIC_W: LazyLock<Associator<MzvExpr>> =
    LazyLock::new(|| deligne_w(&SYMBOLIC_Z).unwrap());
static NUMERIC_Z: LazyLock<Associator<Ball>> =
    LazyLock::new(|| build_z_numeric(13, NUMERIC_TARGET).unwrap());
static NUMERIC_W: LazyLock<Associator<Ball>> = LazyLock::new(|| deligne_w(&NUMERIC_Z).unwrap());

fn comp(s: &str) -> Composition {
    s.parse().unwrap()
}

#[test]
fn symbolic_w_is_group_like_at_every_order() {
    for n in 1..=8 {
        let w = SYMBOLIC_W.series.truncated(n);
        assert!(w.is_group_like(), "order {n}");
    }
}

#[test]
fn symbolic_fixed_point_holds_exactly() {
    let r = fixed_point_residual(&SYMBOLIC_W, &SYMBOLIC_Z).unwrap();
    assert!(r.terms().all(|(_, c)| c.is_zero()));
}

#[test]
fn numeric_fixed_point_at_order_13() {
    let r = fixed_point_residual(&NUMERIC_W, &NUMERIC_Z).unwrap();
    let gap = r.max_norm(|b| b.mid.norm());
    assert!(gap < 1e-8, "gap {gap:e}");
}

#[test]
fn even_single_zetas_vanish() {
    for n in 1..=4 {
        let w = Word::from_bits(2 * n, 1 << (2 * n - 1));
        let sym = SYMBOLIC_W.coeff(&w).unwrap();
        assert!(sym.is_zero(), "{w}: {sym}");
        let b = NUMERIC_W.coeff(&w).unwrap();
        assert!(b.mid.norm() < 1e-8, "{w}: {b}");
    }
}

#[test]
fn odd_single_zetas_double() {
    let sv = SingleValued::from_parts(None, NUMERIC_W.clone());
    let ev = MzvEvaluator::new(1e-12);
    for n in 1..=5u32 {
        let c = Composition::new(vec![2 * n + 1]).unwrap();
        let ratio = sv.zeta_sv(&c).unwrap().numeric / ev.value(&c).unwrap().value;
        assert!((ratio - 2.0).abs() < 1e-8, "n = {n}: {ratio}");
    }
}

#[test]
fn zeta_sv_5_3() {
    let sv = SingleValued::from_parts(None, NUMERIC_W.clone());
    let ev = MzvEvaluator::new(1e-12);
    let rhs = vec![(rational(14, 1), vec![comp("3"), comp("5")])];
    let r = sv.verify_identity(&comp("5,3"), &rhs, &ev).unwrap();
    assert!(r.residual / r.rhs.abs() < 1e-8, "{r:?}");
}

#[test]
fn weight_13_identities() {
    let sv = SingleValued::from_parts(None, NUMERIC_W.clone());
    let ev = MzvEvaluator::new(1e-12);
    let z = |s: &str| comp(s);
    let cases = [
        (
            "5,3,5",
            vec![
                (rational(2, 1), vec![z("5,3,5")]),
                (rational(-22, 1), vec![z("5"), z("3,5")]),
                (rational(-120, 1), vec![z("5"), z("5"), z("3")]),
                (rational(-10, 1), vec![z("5"), z("8")]),
            ],
        ),
        (
            "3,7,3",
            vec![
                (rational(2, 1), vec![z("3,7,3")]),
                (rational(-2, 1), vec![z("3"), z("3,7")]),
                (rational(-28, 1), vec![z("3"), z("3"), z("7")]),
                (rational(-24, 1), vec![z("5"), z("3,5")]),
                (rational(-144, 1), vec![z("5"), z("5"), z("3")]),
                (rational(-12, 1), vec![z("5"), z("8")]),
            ],
        ),
    ];
    for (lhs, rhs) in cases {
        let r = sv.verify_identity(&comp(lhs), &rhs, &ev).unwrap();
        assert!(r.residual < 1e-5, "{lhs}: {r:?}");
    }
}

#[test]
fn e1_prime_symbolic_residual_vanishes() {
    let e1p = e1_prime(&SYMBOLIC_W).unwrap();
    let r = e1_prime_residual(&SYMBOLIC_Z, &e1p).unwrap();
    assert!(r.terms().all(|(_, c)| c.is_zero()));
}

#[test]
fn e1_prime_numeric_residual_is_small() {
    let z = build_z_numeric(10, NUMERIC_TARGET).unwrap();
    let w = deligne_w(&z).unwrap();
    let r = e1_prime_residual(&z, &e1_prime(&w).unwrap()).unwrap();
    let gap = r.max_norm(|b| b.mid.norm());
    assert!(gap < 1e-8, "gap {gap:e}");
    assert!(max_ball_norm(&w.series).is_finite());
}

#[test]
fn deligne_w_needs_z() {
    assert!(deligne_w(&SYMBOLIC_W).is_err());
}
