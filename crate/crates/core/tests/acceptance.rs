//! Acceptance criteria 1-10. Each test prints one `criterion N: PASS|FAIL` line to
//! the raw stderr handle, so the line is visible even when output is captured.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_integer::binomial;
use pbwsplit::charzero::{admissible_lattice, build_hw_module_q};
use pbwsplit::criterion::{check_condition2, g2_verify, G2Context};
use pbwsplit::field::{Field, PrimeField};
use pbwsplit::module::{Side, WeightModule};
use pbwsplit::multiindex::MultiIndex;
use pbwsplit::pbw::{
    check_dual_image, dual_basis_element, essential_basis, essential_set, j_map, Polynomial,
};
use pbwsplit::rootsys::{RootSystem, Weight};
use pbwsplit::tensorfilt::{induced_filtration, product_order_equality};
use pbwsplit::weylmod::{
    act, act_left, delta_apply, op_column, tensor_act, tensor_basis, weyl_module, HyperMonomial,
    TensorVec,
};

const CAP: u128 = 1_000_000;

fn verdict(
    n: u32,
    title: &str,
    ok: bool,
    elapsed: Duration,
    limit: Duration,
    detail: &str,
) -> bool {
    let in_time = elapsed <= limit;
    let pass = ok && in_time;
    let line = format!(
        "criterion {n}: {} {title} ({:.2} s of {} s{}) {detail}\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { ", over time" },
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    pass
}

fn g2() -> Arc<RootSystem> {
    Arc::new(RootSystem::from_label("G2").unwrap())
}

fn rs(label: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::from_label(label).unwrap())
}

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex(v.to_vec())
}

#[test]
fn criterion_01_g2_root_data() {
    let start = Instant::now();
    let r = RootSystem::from_label("G2").unwrap();
    let roots: Vec<Vec<i64>> = r
        .positive_roots()
        .iter()
        .map(|x| x.coords.clone())
        .collect();
    let expected = vec![
        vec![3, 2],
        vec![3, 1],
        vec![2, 1],
        vec![1, 1],
        vec![0, 1],
        vec![1, 0],
    ];
    let jacobi = r.chevalley().jacobi_holds();
    let ok = roots == expected && jacobi;
    let pass = verdict(
        1,
        "G2 root order and Jacobi identity",
        ok,
        start.elapsed(),
        Duration::from_secs(1),
        &format!("roots {roots:?}, jacobi {jacobi}"),
    );
    assert!(pass);
}

/// Weyl's formula for `G2` written out: `a omega_1 + b omega_2` has dimension
/// `(a+1)(b+1)(a+b+2)(a+2b+3)(a+3b+4)(2a+3b+5)/120`.
fn g2_weyl_dim(a: i64, b: i64) -> i64 {
    (a + 1) * (b + 1) * (a + b + 2) * (a + 2 * b + 3) * (a + 3 * b + 4) * (2 * a + 3 * b + 5) / 120
}

#[test]
fn criterion_02_dimensions() {
    let start = Instant::now();
    let r = g2();
    let mut ok = true;
    let mut detail = Vec::new();
    for (w, want) in [((1, 0), 7), ((0, 1), 14)] {
        let lambda = Weight(vec![w.0, w.1]);
        let q = build_hw_module_q(&r, &lambda).unwrap();
        let lat = admissible_lattice(&q).unwrap();
        let lattice_rank = lat.rank();
        let formula = g2_weyl_dim(w.0, w.1);
        ok &= formula == want
            && q.dim() as i64 == want
            && lattice_rank as i64 == want
            && r.weyl_dimension(&lambda) == want.into();
        detail.push(format!(
            "V{lambda}: built {} lattice rank {lattice_rank} formula {formula}",
            q.dim()
        ));
    }
    let pass = verdict(
        2,
        "dim V(omega1) = 7, dim V(omega2) = 14",
        ok,
        start.elapsed(),
        Duration::from_secs(5),
        &detail.join("; "),
    );
    assert!(pass);
}

/// The inequality table for `es(k omega_1 + l omega_2)`, enumerated directly.
fn g2_table(k: i64, l: i64) -> BTreeSet<Vec<u32>> {
    let bound = (k + 2 * l) as u32;
    let mut out = BTreeSet::new();
    let mut s = [0u32; 6];
    fn rec(i: usize, bound: u32, s: &mut [u32; 6], k: i64, l: i64, out: &mut BTreeSet<Vec<u32>>) {
        if i == 6 {
            let v: Vec<i64> = s.iter().map(|&x| x as i64).collect();
            let ok = v[4] <= l
                && v[5] <= k
                && v[1] + v[2] + v[5] <= k + l
                && v[2] + v[3] + v[5] <= k + l
                && v[3] + v[4] + v[5] <= k + l
                && v[0..5].iter().sum::<i64>() <= k + 2 * l
                && v[1..6].iter().sum::<i64>() <= k + 2 * l;
            if ok {
                out.insert(s.to_vec());
            }
            return;
        }
        for x in 0..=bound {
            s[i] = x;
            rec(i + 1, bound, s, k, l, out);
        }
        s[i] = 0;
    }
    rec(0, bound, &mut s, k, l, &mut out);
    out
}

fn small_g2_weights() -> Vec<(i64, i64)> {
    (0..=3)
        .flat_map(|k| (0..=3 - k).map(move |l| (k, l)))
        .collect()
}

#[test]
fn criterion_03_inequality_table() {
    let start = Instant::now();
    let r = g2();
    let mut ok = true;
    let mut mismatched = Vec::new();
    for (k, l) in small_g2_weights() {
        let q = build_hw_module_q(&r, &Weight(vec![k, l])).unwrap();
        let es: BTreeSet<Vec<u32>> = essential_set(q.module(), None)
            .iter()
            .map(|s| s.0.clone())
            .collect();
        let table = g2_table(k, l);
        if es != table {
            ok = false;
            mismatched.push(format!("({k},{l}): {} vs {}", es.len(), table.len()));
        }
    }
    let pass = verdict(
        3,
        "brute-force es(lambda) equals the inequality table for k+l <= 3",
        ok,
        start.elapsed(),
        Duration::from_secs(600),
        &format!("mismatches {mismatched:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_04_dual_image_shape() {
    let start = Instant::now();
    let r = g2();
    let mut ok = true;
    let mut checked = 0;
    let mut bad = Vec::new();
    for (k, l) in small_g2_weights() {
        let q = build_hw_module_q(&r, &Weight(vec![k, l])).unwrap();
        let ess = essential_basis(q.module(), None);
        for s in ess.set().iter() {
            let (_, c) = check_dual_image(q.module(), &ess, s).unwrap();
            checked += 1;
            if !c.holds() {
                ok = false;
                bad.push(format!("({k},{l}) {s}"));
            }
        }
    }
    let pass = verdict(
        4,
        "j(xi(s)) has coefficient 1 at s, support above s, no other essential index",
        ok,
        start.elapsed(),
        Duration::from_secs(600),
        &format!("{checked} indices, failures {bad:?}"),
    );
    assert!(pass);
}

fn j_of(m: &WeightModule<PrimeField>, s: &[u32]) -> Polynomial<PrimeField> {
    let ess = essential_basis(m, None);
    let xi = dual_basis_element(m, &ess, &mi(s)).unwrap();
    j_map(m, &xi, 2)
}

#[test]
fn criterion_05_g2_identities() {
    let start = Instant::now();
    let r = g2();
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [11u64, 13] {
        let f = PrimeField::new(p).unwrap();
        let w2 = weyl_module(&r, &Weight(vec![0, 1]), p).unwrap();
        let w1 = weyl_module(&r, &Weight(vec![1, 0]), p).unwrap();
        for (name, m, s) in [
            ("a1", &w2, [0, 0, 1, 0, 1, 0]),
            ("a2", &w2, [0, 1, 0, 0, 1, 0]),
            ("v'", &w1, [1, 0, 0, 0, 0, 1]),
        ] {
            let got = j_of(m.module(), &s);
            let want = Polynomial::monomial(f, &mi(&s), 1);
            ok &= got == want;
            detail.push(format!("p={p} j2({name}) = {}", got.render()));
        }
        let ann = G2Context::new(p).unwrap().annihilation();
        ok &= ann.verdict;
        detail.push(format!("p={p} annihilation {}", ann.verdict));
    }
    let pass = verdict(
        5,
        "j2(a1) = x3x5, j2(a2) = x2x5, j2(v') = x1x6 and six annihilations over F11, F13",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
        &detail.join("; "),
    );
    assert!(pass);
}

#[test]
fn criterion_06_coefficient() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [11u64, 13] {
        let step = G2Context::new(p).unwrap().coefficient();
        ok &= step.verdict;
        detail.push(format!(
            "p={p} residue {} integer {} agree {}",
            step.detail["coefficient_mod_p"],
            step.detail["integer_coefficient"],
            step.detail["expansions agree"]
        ));
    }
    let pass = verdict(
        6,
        "coefficient of x^(p-1) in E1^(p-1) x nonzero mod p, p = 11, 13",
        ok,
        start.elapsed(),
        Duration::from_secs(120),
        &detail.join("; "),
    );
    assert!(pass);
}

#[test]
fn criterion_07_g2_verify() {
    let mut ok = true;
    let mut detail = Vec::new();
    let mut slowest = Duration::ZERO;
    for p in [11u64, 13, 17] {
        let start = Instant::now();
        let a = g2_verify(p).unwrap();
        slowest = slowest.max(start.elapsed());
        let b = g2_verify(p).unwrap();
        let deterministic =
            serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap();
        ok &= a.overall && a.certified && deterministic;
        let failing: Vec<&str> = a
            .steps
            .iter()
            .filter(|s| !s.verdict)
            .map(|s| s.name.as_str())
            .collect();
        detail.push(format!(
            "p={p} overall {} deterministic {deterministic} failing {failing:?}",
            a.overall
        ));
    }
    let pass = verdict(
        7,
        "g2_verify passes for p = 11, 13, 17 with deterministic reports",
        ok,
        slowest,
        Duration::from_secs(300),
        &detail.join("; "),
    );
    assert!(pass);
}

fn tensor_eq(f: &PrimeField, a: &TensorVec<u64>, b: &TensorVec<u64>) -> bool {
    a.keys()
        .chain(b.keys())
        .all(|k| f.sub(a.get(k).unwrap_or(&0), b.get(k).unwrap_or(&0)) == 0)
}

fn norm_form_holds(m1: &WeightModule<PrimeField>, m2: &WeightModule<PrimeField>, p: u64) -> bool {
    let f = m1.field();
    let f0 = HyperMonomial::f0(m1.root_system().num_positive(), p);
    (0..m1.dim()).all(|x| {
        let fx = act(m1, &f0, &m1.unit(x));
        (0..m2.dim()).all(|y| {
            let lhs = act_left(
                m1,
                &f0,
                &tensor_act(m1, m2, &f0, &tensor_basis(x, y, 1)).unwrap(),
            );
            let fy = act(m2, &f0, &m2.unit(y));
            let mut rhs = TensorVec::new();
            for (i, u) in fx.iter().enumerate().filter(|(_, u)| **u != 0) {
                for (j, v) in fy.iter().enumerate().filter(|(_, v)| **v != 0) {
                    rhs.insert((i, j), f.mul(u, v));
                }
            }
            tensor_eq(f, &lhs, &rhs)
        })
    })
}

fn coassociative(m: &WeightModule<PrimeField>, n: usize) -> bool {
    let f = m.field();
    type T3 = std::collections::BTreeMap<(usize, usize, usize), u64>;
    let add = |out: &mut T3, k, v: u64| {
        let s = f.add(out.get(&k).unwrap_or(&0), &v);
        if s == 0 {
            out.remove(&k);
        } else {
            out.insert(k, s);
        }
    };
    let d = m.dim();
    for side in [Side::E, Side::F] {
        for root in 0..m.root_system().num_positive() {
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let (mut left, mut right) = (T3::new(), T3::new());
                        for j in 0..=n {
                            let inner =
                                delta_apply(m, m, side, root, n - j, &tensor_basis(a, b, 1));
                            for (c2, z) in op_column(m, side, root, j, c) {
                                for (&(a2, b2), y) in &inner {
                                    add(&mut left, (a2, b2, c2), f.mul(y, &z));
                                }
                            }
                            let inner =
                                delta_apply(m, m, side, root, n - j, &tensor_basis(b, c, 1));
                            for (a2, x) in op_column(m, side, root, j, a) {
                                for (&(b2, c2), y) in &inner {
                                    add(&mut right, (a2, b2, c2), f.mul(y, &x));
                                }
                            }
                        }
                        if left != right {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

fn divided_powers_multiply(m: &WeightModule<PrimeField>, p: u64) -> bool {
    let f = m.field();
    let top = 4;
    (0..m.root_system().num_positive()).all(|root| {
        [Side::E, Side::F].into_iter().all(|side| {
            (1..top).all(|a| {
                (1..top).all(|b| {
                    let c = (binomial(a + b, a) as u64) % p;
                    (0..m.dim()).all(|x| {
                        let e = m.unit(x);
                        let lhs = m.apply(side, root, a, &m.apply(side, root, b, &e));
                        let rhs: Vec<u64> = m
                            .apply(side, root, a + b, &e)
                            .iter()
                            .map(|y| f.mul(y, &c))
                            .collect();
                        lhs == rhs
                    })
                })
            })
        })
    })
}

#[test]
fn criterion_08_property_suites() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checks = 0;
    for (label, weights) in [
        ("A1", vec![vec![1], vec![2], vec![3]]),
        ("A2", vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
    ] {
        let r = rs(label);
        for p in [2u64, 3, 5] {
            let mods: Vec<_> = weights
                .iter()
                .map(|w| weyl_module(&r, &Weight(w.clone()), p).unwrap())
                .collect();
            for a in &mods {
                checks += 3;
                if !divided_powers_multiply(a.module(), p) {
                    failures.push(format!("divided powers {label} {} p={p}", a.lambda()));
                }
                if !coassociative(a.module(), 3) {
                    failures.push(format!("coassociativity {label} {} p={p}", a.lambda()));
                }
                for b in &mods {
                    if !norm_form_holds(a.module(), b.module(), p) {
                        failures.push(format!(
                            "norm form {label} {} {} p={p}",
                            a.lambda(),
                            b.lambda()
                        ));
                    }
                }
            }
        }
    }
    for (label, lambda, p) in [
        ("A1", vec![1], 2u64),
        ("A1", vec![2], 2),
        ("A1", vec![3], 3),
        ("A1", vec![2], 3),
        ("A2", vec![1, 0], 2),
        ("A2", vec![1, 1], 2),
    ] {
        let r = rs(label);
        let lambda = Weight(lambda);
        let m = weyl_module(&r, &lambda, p).unwrap();
        let rep =
            product_order_equality(m.module(), m.module(), r.depth(&lambda) as usize, CAP).unwrap();
        checks += 1;
        if !rep.equal {
            failures.push(format!("product order {label} {lambda} p={p}"));
        }
    }
    let ok = failures.is_empty();
    let pass = verdict(
        8,
        "norm form, coassociativity, divided powers, product-order equality",
        ok,
        start.elapsed(),
        Duration::from_secs(600),
        &format!("{checks} checks, failures {failures:?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_09_condition2_type_a() {
    let start = Instant::now();
    let mut detail = Vec::new();
    let mut ok = true;
    for (label, p) in [("A1", 2u64), ("A1", 3), ("A1", 5), ("A2", 2)] {
        let rep = check_condition2(&rs(label), p, CAP).unwrap();
        ok &= rep.verdict;
        detail.push(format!("{label} p={p} {}", rep.verdict));
    }
    let pass = verdict(
        9,
        "check_condition2 holds for A1 p = 2, 3, 5 and A2 p = 2",
        ok,
        start.elapsed(),
        Duration::from_secs(900),
        &detail.join("; "),
    );
    assert!(pass);
}

#[test]
fn criterion_10_mu_zero() {
    let start = Instant::now();
    let r = rs("A1");
    let v = weyl_module(&r, &Weight(vec![2]), 3).unwrap();
    let triv = weyl_module(&r, &Weight(vec![0]), 3).unwrap();
    let t = induced_filtration(v.module(), triv.module(), CAP).unwrap();
    let graded = t.graded();
    let ok = graded[0] == 3 && graded.iter().skip(1).all(|&d| d == 0);
    let pass = verdict(
        10,
        "V(2) (x) V(0) over F3 concentrates in degree 0",
        ok,
        start.elapsed(),
        Duration::from_secs(1),
        &format!("graded {graded:?}"),
    );
    assert!(pass);
}
