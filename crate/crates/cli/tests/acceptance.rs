//! One line per acceptance criterion. Run with `--nocapture` to see the report.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use svzeta::associator::{
    build_z_numeric, build_z_symbolic, deligne_w, e1_prime, e1_prime_residual,
    Associator, SingleValued, NUMERIC_TARGET,
};
use svzeta::fmodel::{dims, f_lyndon_words, hoffman_lyndon_words, sv_u, FExpr, FWord};
use svzeta::mzvsym::mzv_mul;
use svzeta::numerics::{mzv_value, MzvEvaluator};
use svzeta::polylog::{
    check_single_valued, complex_series, eval_sv_l, plain_path_difference, PathSpec,
};
use svzeta::series::{ihara_act, ihara_solve, random};
use svzeta::{Ball, Coeff, Composition, MzvExpr, Word};
use svzeta_cli::data::{identities, printed_tables, DIM_ROWS};
use svzeta_cli::suites::detours;

/// Criteria that cannot pass as stated; see the README.
const KNOWN_RED: &[&str] = &["11d"];

struct Line {
    id: &'static str,
    what: String,
    measured: String,
    ok: bool,
}

fn line(id: &'static str, what: impl Into<String>, measured: impl Into<String>, ok: bool) -> Line {
    Line {
        id,
        what: what.into(),
        measured: measured.into(),
        ok,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn comp(s: &str) -> Composition {
    s.parse().unwrap()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn sym(s: &str) -> MzvExpr {
    MzvExpr::symbol(w(s))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn numeric_w(order: usize) -> Associator<Ball> {
    deligne_w(&build_z_numeric(order, NUMERIC_TARGET).unwrap()).unwrap()
}

fn criterion_1() -> Vec<Line> {
    let (z, t) = timed(|| build_z_symbolic(3));
    let co = |s: &str| z.series.coeff(&w(s)).clone();
    let mut exact = co("0").is_zero() && co("1").is_zero();
    exact &= co("00").is_zero() && co("11").is_zero();
    exact &= co("10") == sym("10") && co("01") == sym("10").negated();
    // ζ(3)([e1,[e1,e0]] + [e0,[e0,e1]]), read off after ζ(1,2) → ζ(3)
    let weight3 = [("110", 1), ("101", -2), ("011", 1), ("001", 1), ("010", -2), ("100", 1)];
    let ev = MzvEvaluator::new(1e-13);
    let zeta3 = mzv_value(&comp("3"), 1e-13).unwrap().value;
    let mut worst = 0f64;
    for (s, k) in weight3 {
        let e = co(s);
        let folded = MzvExpr::from_terms(e.terms().map(|(x, r)| {
            let x = if *x == w("110") { w("100") } else { *x };
            (x, r.clone())
        }));
        exact &= folded == sym("100").scaled(&q(k));
        let (v, _) = ev.eval(&e).unwrap();
        worst = worst.max((v - k as f64 * zeta3).abs());
    }
    exact &= co("000").is_zero() && co("111").is_zero();
    let fast = t < Duration::from_secs(1);
    vec![line(
        "1",
        "symbolic Z at N=3 = 1 + z(2)[e1,e0] + z(3)([e1,[e1,e0]] + [e0,[e0,e1]]) exactly (< 1 s)",
        format!("exact={exact}, numeric weight-3 gap {worst:.1e}, {t:.2?}"),
        exact && worst < 1e-12 && fast,
    )]
}

fn criterion_2() -> Vec<Line> {
    let (wa, t) = timed(|| deligne_w(&build_z_symbolic(3)).unwrap());
    let coeff = wa.series.coeff(&w("10"));
    vec![line(
        "2",
        "zsv(2) is the zero symbol (< 1 s)",
        format!("coefficient of e1e0 = {coeff}, {t:.2?}"),
        coeff.is_zero() && t < Duration::from_secs(1),
    )]
}

fn criterion_3(w11: &Associator<Ball>) -> Vec<Line> {
    let sv = SingleValued::from_parts(None, w11.clone());
    let mut worst = 0f64;
    for n in 1..=5u32 {
        let cn = Composition::new(vec![2 * n + 1]).unwrap();
        let ratio = sv.zeta_sv(&cn).unwrap().numeric / mzv_value(&cn, 1e-12).unwrap().value;
        worst = worst.max((ratio - 2.0).abs());
    }
    vec![line(
        "3",
        "zsv(2n+1)/z(2n+1) = 2 within 1e-8, n=1..5, N=11",
        format!("max |ratio - 2| = {worst:.1e}"),
        worst < 1e-8,
    )]
}

fn identity_line(
    id: &'static str,
    lhs: &str,
    sv: &SingleValued,
    tolerance: f64,
    relative: bool,
) -> Line {
    let ev = MzvEvaluator::new(1e-12);
    let ident = identities()
        .unwrap()
        .into_iter()
        .find(|i| i.lhs == comp(lhs))
        .unwrap();
    let r = sv.verify_identity(&ident.lhs, &ident.rhs, &ev).unwrap();
    let measured = if relative { r.residual / r.rhs.abs() } else { r.residual };
    let kind = if relative { "relative" } else { "absolute" };
    line(
        id,
        format!("{} within {tolerance:e} {kind}, N={}", ident.describe(), sv.order()),
        format!("{measured:.1e}"),
        measured < tolerance,
    )
}

fn criterion_4(w11: &Associator<Ball>) -> Vec<Line> {
    let sv = SingleValued::from_parts(None, w11.clone());
    vec![identity_line("4", "5,3", &sv, 1e-8, true)]
}

fn criterion_5(w11: &Associator<Ball>, w13: &Associator<Ball>) -> Vec<Line> {
    let sv11 = SingleValued::from_parts(None, w11.clone());
    let sv13 = SingleValued::from_parts(None, w13.clone());
    vec![
        identity_line("5a", "3,5,3", &sv11, 1e-6, true),
        identity_line("5b", "5,3,5", &sv13, 1e-5, false),
        identity_line("5c", "3,7,3", &sv13, 1e-5, false),
    ]
}

/// Ordered sums of 2s and 3s.
fn count_23(n: usize) -> i64 {
    match n {
        0 => 1,
        1 => 0,
        _ => count_23(n - 2) + if n >= 3 { count_23(n - 3) } else { 0 },
    }
}

/// Multisets of the given generators (by weight) of total weight n, for n ≤ max.
fn multisets(weights: &[usize], max: usize) -> Vec<i64> {
    let mut ways = vec![0i64; max + 1];
    ways[0] = 1;
    for &g in weights {
        for n in g..=max {
            ways[n] += ways[n - g];
        }
    }
    ways
}

fn criterion_6() -> Vec<Line> {
    let ((table, printed), t) = timed(|| (dims(20).unwrap(), printed_tables().unwrap()));
    // enumeration oracles, independent of the generating functions
    let odd_generators: Vec<usize> = (1..=20u32)
        .filter(|n| n % 2 == 1)
        .flat_map(|n| vec![n as usize; f_lyndon_words(n).len()])
        .collect();
    let hsv = multisets(&odd_generators, 20);
    let brute = |row: &str, n: usize| -> i64 {
        match row {
            "dimH" => count_23(n),
            "dimL" => hoffman_lyndon_words(n as u32).len() as i64,
            "dimHsv" => hsv[n],
            "dimLsv" if n % 2 == 1 => f_lyndon_words(n as u32).len() as i64,
            _ => 0,
        }
    };
    let computed = |row: &str, n: usize| -> &BigInt {
        match row {
            "dimH" => &table.dim_h[n],
            "dimL" => &table.dim_l[n],
            "dimHsv" => &table.dim_hsv[n],
            _ => &table.dim_lsv[n],
        }
    };
    let mut mismatches = 0;
    let mut unconfirmed = 0;
    for row in DIM_ROWS {
        for n in 1..=20 {
            let value = computed(row, n);
            if *value != BigInt::from(printed.corrected(row, n).unwrap()) {
                mismatches += 1;
            }
            if *value != BigInt::from(brute(row, n)) {
                unconfirmed += 1;
            }
        }
    }
    let rows_ok = table.rows().iter().enumerate().all(|(i, r)| r[0] == BigInt::from(i + 1));
    let n_errata = printed.errata.len();
    let errata_ok = printed
        .errata
        .iter()
        .all(|e| e.printed != e.corrected && brute(&e.row, e.n) == e.corrected);
    vec![line(
        "6",
        "dims(20) equals both printed tables, all 5 rows, N <= 20 (< 1 s)",
        format!(
            "{mismatches} mismatches, {n_errata} printed cells corrected and confirmed by enumeration: {errata_ok}, {unconfirmed} cells disagree with enumeration, {t:.2?}"
        ),
        mismatches == 0 && unconfirmed == 0 && errata_ok && rows_ok && t < Duration::from_secs(1),
    )]
}

fn criterion_7() -> Vec<Line> {
    let ((table, counts), t) = timed(|| {
        let counts: Vec<usize> = (1..=20).map(|n| hoffman_lyndon_words(n).len()).collect();
        (dims(20).unwrap(), counts)
    });
    let bad = (1..=20)
        .filter(|&n| table.dim_l[n] != BigInt::from(counts[n - 1]))
        .count();
    vec![line(
        "7",
        "Lyndon words over {3<2} counted by l_n, n <= 20 (< 1 s)",
        format!("{bad} mismatches, {t:.2?}"),
        bad == 0 && t < Duration::from_secs(1),
    )]
}

fn fword(v: &[u32]) -> FWord {
    FWord::new(v.to_vec(), 0).unwrap()
}

fn twice(words: &[&[u32]]) -> FExpr {
    let mut e = FExpr::zero();
    for x in words {
        e.add_term(fword(x), q(2));
    }
    e
}

fn criterion_8() -> Vec<Line> {
    let (ok_forms, ok_rec, t) = {
        let start = Instant::now();
        let odd = [3u32, 5, 7, 9, 11];
        let mut forms = true;
        for &a in &odd {
            forms &= sv_u(&fword(&[a])) == twice(&[&[a]]);
            for &b in &odd {
                forms &= sv_u(&fword(&[a, b])) == twice(&[&[a, b], &[b, a]]);
                for &cc in &odd {
                    let expect = twice(&[&[a, b, cc], &[a, cc, b], &[cc, a, b], &[cc, b, a]]);
                    forms &= sv_u(&fword(&[a, b, cc])) == expect;
                }
            }
        }
        let mut rng = StdRng::seed_from_u64(8);
        let mut rec = 0;
        while rec < 100 {
            let len = rng.gen_range(2..=8);
            let word: Vec<u32> = (0..len).map(|_| 2 * rng.gen_range(1..=6) + 1).collect();
            if word.iter().sum::<u32>() > 25 {
                continue;
            }
            let (a, b) = (word[0], word[len - 1]);
            let lhs = sv_u(&fword(&word));
            let rhs = sv_u(&fword(&word[1..]))
                .prepend(a)
                .unwrap()
                .add(&sv_u(&fword(&word[..len - 1])).prepend(b).unwrap());
            if lhs != rhs {
                break;
            }
            rec += 1;
        }
        (forms, rec == 100, start.elapsed())
    };
    vec![line(
        "8",
        "sv closed forms for f_a, f_a f_b, f_a f_b f_c and the recursion on 100 random words of weight <= 25 (< 10 s)",
        format!("closed forms {ok_forms}, recursion {ok_rec}, {t:.2?}"),
        ok_forms && ok_rec && t < Duration::from_secs(10),
    )]
}

fn criterion_9() -> Vec<Line> {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(9);
    let (mut assoc, mut solve, mut group, mut antipode) = (0, 0, 0, 0);
    for i in 0..100 {
        let n = 1 + i % 6;
        let (f, g, h) = (
            random::unit_series(&mut rng, n),
            random::unit_series(&mut rng, n),
            random::unit_series(&mut rng, n),
        );
        let left = ihara_act(&ihara_act(&f, &g).unwrap(), &h).unwrap();
        let right = ihara_act(&f, &ihara_act(&g, &h).unwrap()).unwrap();
        assoc += usize::from(left == right);
        let x = ihara_solve(&g, &h).unwrap();
        solve += usize::from(ihara_act(&x, &g).unwrap() == h);
        let (a, b) = (random::group_like(&mut rng, n), random::group_like(&mut rng, n));
        group += usize::from(ihara_act(&a, &b).unwrap().is_group_like());
        antipode += usize::from(a.antipode() == a.inverse().unwrap());
    }
    let t = start.elapsed();
    vec![line(
        "9",
        "Ihara action associativity, solver round trip, group-likeness, antipode = inverse; 100 cases each, N <= 6 (< 1 min)",
        format!("{assoc}/{solve}/{group}/{antipode} of 100, {t:.2?}"),
        [assoc, solve, group, antipode] == [100; 4] && t < Duration::from_secs(60),
    )]
}

fn criterion_10() -> Vec<Line> {
    let mut symbolic_zero = true;
    for n in 1..=8 {
        let z = build_z_symbolic(n);
        let wa = deligne_w(&z).unwrap();
        let r = e1_prime_residual(&z, &e1_prime(&wa).unwrap()).unwrap();
        symbolic_zero &= r.terms().all(|(_, x)| x.is_zero());
    }
    let mut worst = 0f64;
    for n in 1..=10 {
        let z = build_z_numeric(n, NUMERIC_TARGET).unwrap();
        let wa = deligne_w(&z).unwrap();
        let r = e1_prime_residual(&z, &e1_prime(&wa).unwrap()).unwrap();
        worst = worst.max(r.max_norm(|b| b.mid.norm()));
    }
    vec![
        line(
            "10a",
            "e1' residual is the zero series, symbolic, N <= 8",
            format!("zero={symbolic_zero}"),
            symbolic_zero,
        ),
        line(
            "10b",
            "e1' residual max-norm < 1e-8, numeric, N <= 10",
            format!("{worst:.1e}"),
            worst < 1e-8,
        ),
    ]
}

fn criterion_11(w13: &Associator<Ball>) -> Vec<Line> {
    let w6 = complex_series(&w13.series.truncated(6));
    let w4 = w6.truncated(4);
    let points = [c(0.5, 0.5), c(-0.3, 0.7), c(1.5, -0.4)];
    let mut boundary = 0f64;
    for z in points {
        let f = eval_sv_l(z, &PathSpec::principal(z).unwrap(), &w4).unwrap();
        let e0 = f.coeff(&w("0")).unwrap() - 2.0 * z.norm().ln();
        let e1 = f.coeff(&w("1")).unwrap() + 2.0 * (c(1.0, 0.0) - z).norm().ln();
        boundary = boundary.max(e0.norm()).max(e1.norm());
    }
    let words: Vec<Word> = (1..=4).flat_map(Word::all_of_length).collect();
    let mut sv_gap = 0f64;
    let mut plain_jump = f64::INFINITY;
    for z in points {
        let straight = PathSpec::principal(z).unwrap();
        let (around0, around1) = detours(z).unwrap();
        let loops = [around0, around1];
        for detour in &loops {
            let mut jump = 0f64;
            for x in &words {
                sv_gap = sv_gap.max(check_single_valued(x, z, &straight, detour, &w4).unwrap());
                jump = jump.max(plain_path_difference(x, z, &straight, detour).unwrap());
            }
            plain_jump = plain_jump.min(jump);
        }
    }
    let limit = |eps: f64| {
        let z = c(1.0 - eps, 0.0);
        let f = eval_sv_l(z, &PathSpec::principal(z).unwrap(), &w6).unwrap();
        (2..=6)
            .flat_map(Word::all_of_length)
            .filter(Word::is_convergent)
            .map(|x| (f.coeff(&x).unwrap() - w6.coeff(&x)).norm())
            .fold(0.0, f64::max)
    };
    let (d6, d12) = (limit(1e-6), limit(1e-12));
    vec![
        line(
            "11a",
            "svL_e0 = log|z|^2 and svL_e1 = -log|1-z|^2 within 1e-9 at 3 points",
            format!("{boundary:.1e}"),
            boundary < 1e-9,
        ),
        line(
            "11b",
            "svL path independence < 1e-6, weight <= 4, loops around 0 and 1, 3 points",
            format!("{sv_gap:.1e}"),
            sv_gap < 1e-6,
        ),
        line(
            "11c",
            "plain L changes along the same loops (> 1e-3)",
            format!("smallest jump {plain_jump:.2e}"),
            plain_jump > 1e-3,
        ),
        line(
            "11d",
            "svL_w(1 - 1e-6) within 1e-4 of W_w, convergent w of weight <= 6",
            format!("{d6:.2e}; the gap is O(eps log^5 eps), unattainable at eps = 1e-6"),
            d6 < 1e-4,
        ),
        line(
            "11e",
            "svL_w(1 - 1e-12) within 1e-4 of W_w, convergent w of weight <= 6",
            format!("{d12:.2e}"),
            d12 < 1e-4,
        ),
    ]
}

fn criterion_12() -> Vec<Line> {
    let z2 = mzv_value(&comp("2"), 1e-12).unwrap();
    let gap2 = (z2.value - PI * PI / 6.0).abs();
    let ev = MzvEvaluator::new(1e-12);
    let mut rng = StdRng::seed_from_u64(12);
    let random_convergent = |rng: &mut StdRng, len: usize| {
        let inner = rng.gen_range(0..1u64 << (len - 2));
        Word::from_bits(len, (1 << (len - 1)) | (inner << 1))
    };
    let mut held = 0;
    let mut worst_ratio = 0f64;
    for _ in 0..50 {
        let lu = rng.gen_range(2..=8);
        let lv = rng.gen_range(2..=10 - lu);
        let (u, v) = (random_convergent(&mut rng, lu), random_convergent(&mut rng, lv));
        let (a, ea) = ev.eval(&MzvExpr::symbol(u)).unwrap();
        let (b, eb) = ev.eval(&MzvExpr::symbol(v)).unwrap();
        let (p, ep) = ev.eval(&mzv_mul(&MzvExpr::symbol(u), &MzvExpr::symbol(v))).unwrap();
        let bound = a.abs() * eb + b.abs() * ea + ea * eb + ep + 4.0 * f64::EPSILON * p.abs();
        let gap = (a * b - p).abs();
        worst_ratio = worst_ratio.max(gap / bound);
        held += usize::from(gap <= bound);
    }
    vec![
        line(
            "12a",
            "z(2) within 1e-10 of pi^2/6",
            format!("{gap2:.1e}"),
            gap2 < 1e-10,
        ),
        line(
            "12b",
            "z(u) z(v) = z(u sh v) within summed error bounds, 50 random pairs, weight <= 10",
            format!("{held}/50, worst gap/bound {worst_ratio:.2}"),
            held == 50,
        ),
    ]
}

#[test]
fn acceptance() {
    let (w11, t11) = timed(|| numeric_w(11));
    let (w13, t13) = timed(|| numeric_w(13));
    eprintln!("numeric W: N=11 in {t11:.2?}, N=13 in {t13:.2?}");
    let mut lines = Vec::new();
    lines.extend(criterion_1());
    lines.extend(criterion_2());
    lines.extend(criterion_3(&w11));
    lines.extend(criterion_4(&w11));
    lines.extend(criterion_5(&w11, &w13));
    lines.extend(criterion_6());
    lines.extend(criterion_7());
    lines.extend(criterion_8());
    lines.extend(criterion_9());
    lines.extend(criterion_10());
    lines.extend(criterion_11(&w13));
    lines.extend(criterion_12());
    for l in &lines {
        let tag = match (l.ok, KNOWN_RED.contains(&l.id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{tag:<12} {:<4} {}: {}", l.id, l.what, l.measured);
    }
    let unexpected: Vec<&str> = lines
        .iter()
        .filter(|l| !l.ok && !KNOWN_RED.contains(&l.id))
        .map(|l| l.id)
        .collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:?}");
}
