use std::cmp::Ordering;
use std::sync::Arc;

use num_integer::binomial;
use pbwsplit::charzero::build_hw_module_q;
use pbwsplit::field::{Field, PrimeField};
use pbwsplit::linalg::{rank, Matrix};
use pbwsplit::module::{Side, WeightModule};
use pbwsplit::multiindex::{MonomialOrder, MultiIndex};
use pbwsplit::pbw::{essential_basis, pbw_filtration, MonomialEvaluator};
use pbwsplit::rootsys::{RootSystem, Weight};
use pbwsplit::tensorfilt::{
    product_order_equality, GradedSubspace, InducedFiltration, TensorSpace,
};
use pbwsplit::weylmod::{
    act, act_left, delta_apply, op_column, tensor_act, tensor_basis, weyl_module, HyperMonomial,
    TensorVec,
};
use proptest::prelude::*;

const CAP: u128 = 1_000_000;

fn rs(label: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::from_label(label).unwrap())
}

fn multiindex(n: usize) -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(0u32..4, n).prop_map(MultiIndex)
}

fn order() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::RevLex), Just(MonomialOrder::LastIndex)]
}

proptest! {
    #[test]
    fn monomial_orders_are_total(o in order(), s in multiindex(6), t in multiindex(6), u in multiindex(6)) {
        prop_assert_eq!(o.compare(&s, &t), o.compare(&t, &s).reverse());
        prop_assert_eq!(o.compare(&s, &t) == Ordering::Equal, s == t);
        if o.compare(&s, &t) != Ordering::Greater && o.compare(&t, &u) != Ordering::Greater {
            prop_assert_ne!(o.compare(&s, &u), Ordering::Greater);
        }
        if s.degree() < t.degree() {
            prop_assert_eq!(o.compare(&s, &t), Ordering::Less);
        }
    }
}

/// Small dominant weights with modules of modest dimension.
fn small_case() -> impl Strategy<Value = (&'static str, Weight, u64)> {
    prop_oneof![
        (0i64..5, prop_oneof![Just(2u64), Just(3), Just(5)]).prop_map(|(a, p)| (
            "A1",
            Weight(vec![a]),
            p
        )),
        (0i64..3, 0i64..3, prop_oneof![Just(2u64), Just(3), Just(5)]).prop_map(|(a, b, p)| (
            "A2",
            Weight(vec![a, b]),
            p
        )),
        (0i64..2, 0i64..2, prop_oneof![Just(3u64), Just(5)]).prop_map(|(a, b, p)| (
            "B2",
            Weight(vec![a, b]),
            p
        )),
    ]
}

fn vec_eq<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> bool {
    a.iter().zip(b).all(|(x, y)| f.is_zero(&f.sub(x, y)))
}

fn tensor_eq<F: Field>(f: &F, a: &TensorVec<F::Elem>, b: &TensorVec<F::Elem>) -> bool {
    a.keys().chain(b.keys()).all(|k| {
        let x = a.get(k).cloned().unwrap_or_else(|| f.zero());
        let y = b.get(k).cloned().unwrap_or_else(|| f.zero());
        f.is_zero(&f.sub(&x, &y))
    })
}

fn scale_tensor<F: Field>(f: &F, v: &TensorVec<F::Elem>, c: &F::Elem) -> TensorVec<F::Elem> {
    v.iter()
        .map(|(k, x)| (*k, f.mul(x, c)))
        .filter(|(_, x)| !f.is_zero(x))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// `X^(a) X^(b) = C(a+b, a) X^(a+b)` on the module and, through the
    /// coproduct, on the tensor square.
    #[test]
    fn divided_powers_multiply((label, lambda, p) in small_case(), side_e in any::<bool>(), a in 1usize..4, b in 1usize..4, pick in any::<prop::sample::Index>()) {
        let r = rs(label);
        let m = weyl_module(&r, &lambda, p).unwrap();
        let f = *m.field();
        let module = m.module();
        let side = if side_e { Side::E } else { Side::F };
        let root = pick.index(r.num_positive());
        let c = f.from_i64((binomial(a + b, a) % p as usize) as i64);
        for x in 0..module.dim() {
            let e = module.unit(x);
            let lhs = module.apply(side, root, a, &module.apply(side, root, b, &e));
            let rhs: Vec<u64> = module.apply(side, root, a + b, &e).iter().map(|y| f.mul(y, &c)).collect();
            prop_assert!(vec_eq(&f, &lhs, &rhs));
        }
        if module.dim() <= 10 {
            for x in 0..module.dim() {
                for y in 0..module.dim() {
                    let v = tensor_basis(x, y, f.one());
                    let lhs = delta_apply(module, module, side, root, a, &delta_apply(module, module, side, root, b, &v));
                    let rhs = scale_tensor(&f, &delta_apply(module, module, side, root, a + b, &v), &c);
                    prop_assert!(tensor_eq(&f, &lhs, &rhs));
                }
            }
        }
    }
}

type Triple = std::collections::BTreeMap<(usize, usize, usize), u64>;

fn add3(f: &PrimeField, out: &mut Triple, k: (usize, usize, usize), v: u64) {
    let s = f.add(out.get(&k).unwrap_or(&0), &v);
    if s == 0 {
        out.remove(&k);
    } else {
        out.insert(k, s);
    }
}

/// `(Delta ⊗ 1) Delta X^(n)` and `(1 ⊗ Delta) Delta X^(n)` on `e_a ⊗ e_b ⊗ e_c`,
/// each computed from the pairwise coproduct.
fn coassoc_sides(
    m: &WeightModule<PrimeField>,
    side: Side,
    root: usize,
    n: usize,
    (a, b, c): (usize, usize, usize),
) -> (Triple, Triple) {
    let f = m.field();
    let mut left = Triple::new();
    let mut right = Triple::new();
    for j in 0..=n {
        let inner = delta_apply(m, m, side, root, n - j, &tensor_basis(a, b, f.one()));
        for (c2, z) in op_column(m, side, root, j, c) {
            for (&(a2, b2), y) in &inner {
                add3(f, &mut left, (a2, b2, c2), f.mul(y, &z));
            }
        }
        let inner = delta_apply(m, m, side, root, n - j, &tensor_basis(b, c, f.one()));
        for (a2, x) in op_column(m, side, root, j, a) {
            for (&(b2, c2), y) in &inner {
                add3(f, &mut right, (a2, b2, c2), f.mul(y, &x));
            }
        }
    }
    (left, right)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn coproduct_is_coassociative((label, lambda, p) in small_case(), side_e in any::<bool>(), n in 0usize..5, pick in any::<prop::sample::Index>(), basis in any::<(prop::sample::Index, prop::sample::Index, prop::sample::Index)>()) {
        let r = rs(label);
        let m = weyl_module(&r, &lambda, p).unwrap();
        let d = m.dim();
        let side = if side_e { Side::E } else { Side::F };
        let root = pick.index(r.num_positive());
        let abc = (basis.0.index(d), basis.1.index(d), basis.2.index(d));
        let (l, rr) = coassoc_sides(m.module(), side, root, n, abc);
        prop_assert_eq!(l, rr);
    }
}

/// `(F_0 ⊗ 1) Delta F_0 = F_0 ⊗ F_0` as operators on `V(lambda) ⊗ V(mu)`.
#[test]
#[allow(clippy::type_complexity)]
fn norm_form_identity() {
    let cases: &[(&str, &[(i64, i64)], &[u64])] = &[
        ("A1", &[(1, 0), (2, 0), (3, 0), (4, 0), (2, 0)], &[2, 3, 5]),
        ("A2", &[(1, 0), (1, 1), (2, 0), (1, 1), (2, 2)], &[2, 3, 5]),
    ];
    for &(label, weights, primes) in cases {
        let r = rs(label);
        let n = r.num_positive();
        for &p in primes {
            for pair in weights.windows(2) {
                let w =
                    |(a, b): (i64, i64)| Weight(if r.rank() == 1 { vec![a] } else { vec![a, b] });
                let m1 = weyl_module(&r, &w(pair[0]), p).unwrap();
                let m2 = weyl_module(&r, &w(pair[1]), p).unwrap();
                let f0 = HyperMonomial::f0(n, p);
                let (a1, a2) = (m1.module(), m2.module());
                for x in 0..m1.dim() {
                    let fx = act(a1, &f0, &a1.unit(x));
                    for y in 0..m2.dim() {
                        let lhs = act_left(
                            a1,
                            &f0,
                            &tensor_act(a1, a2, &f0, &tensor_basis(x, y, 1)).unwrap(),
                        );
                        let fy = act(a2, &f0, &a2.unit(y));
                        let mut rhs = TensorVec::new();
                        for (i, u) in fx.iter().enumerate().filter(|(_, u)| **u != 0) {
                            for (j, v) in fy.iter().enumerate().filter(|(_, v)| **v != 0) {
                                rhs.insert((i, j), a1.field().mul(u, v));
                            }
                        }
                        assert_eq!(lhs, rhs, "{label} p={p} {:?} basis ({x},{y})", pair);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, ..ProptestConfig::default() })]

    /// The essential vectors form a basis, so `|es(lambda)|` is the Weyl dimension.
    #[test]
    fn essential_vectors_form_a_basis((label, lambda, p) in small_case(), over_q in any::<bool>()) {
        let r = rs(label);
        let weyl = r.weyl_dimension(&lambda);
        if over_q {
            let q = build_hw_module_q(&r, &lambda).unwrap();
            let es = essential_basis(q.module(), None);
            prop_assert_eq!(num_bigint::BigInt::from(es.set().len()), weyl);
            let mut ev = MonomialEvaluator::new(q.module());
            let cols: Vec<_> = es.set().iter().map(|s| ev.eval_global(s)).collect();
            let mat = Matrix::from_columns(q.dim(), &cols, pbwsplit::field::Field::zero(q.module().field()));
            prop_assert_eq!(rank(q.module().field(), &mat), q.dim());
        } else {
            let m = weyl_module(&r, &lambda, p).unwrap();
            let es = essential_basis(m.module(), None);
            prop_assert_eq!(num_bigint::BigInt::from(es.set().len()), weyl);
            let mut ev = MonomialEvaluator::new(m.module());
            let cols: Vec<_> = es.set().iter().map(|s| ev.eval_global(s)).collect();
            let mat = Matrix::from_columns(m.dim(), &cols, 0u64);
            prop_assert_eq!(rank(m.field(), &mat), m.dim());
        }
    }

    /// Reduction mod `p` can only lower the dimension of each PBW level.
    #[test]
    fn char_p_levels_bounded_by_char_zero((label, lambda, p) in small_case()) {
        let r = rs(label);
        let q = pbw_filtration(build_hw_module_q(&r, &lambda).unwrap().module());
        let fp = pbw_filtration(weyl_module(&r, &lambda, p).unwrap().module());
        prop_assert_eq!(q.total(), fp.total());
        for n in 0..q.graded.len().max(fp.graded.len()) {
            prop_assert!(fp.level(n) <= q.level(n));
        }
    }

    /// `VV_0` is stable under every `Delta F_beta^(k)`; the levels increase and
    /// exhaust the tensor product.
    #[test]
    fn induced_filtration_is_delta_stable((label, lambda, p) in small_case(), mu_pick in 0usize..3) {
        let r = rs(label);
        let mu = Weight(if r.rank() == 1 { vec![mu_pick as i64] } else { vec![(mu_pick % 2) as i64, (mu_pick / 2) as i64] });
        let m1 = weyl_module(&r, &lambda, p).unwrap();
        let m2 = weyl_module(&r, &mu, p).unwrap();
        let space = TensorSpace::new(m1.module(), m2.module());
        let filt = InducedFiltration::compute(&space, CAP).unwrap();
        let mut prev = 0;
        for n in 0..filt.num_levels() {
            prop_assert!(filt.level_dim(n) >= prev);
            prev = filt.level_dim(n);
        }
        prop_assert_eq!(prev, space.dim());
        let mut vv0 = GradedSubspace::new(&space);
        for v in filt.basis(0) {
            vv0.insert(&v);
        }
        for v in filt.basis(0) {
            for b in 0..r.num_positive() {
                for k in 1..=m1.module().max_power(Side::F, b).max(m2.module().max_power(Side::F, b)) {
                    let w = delta_apply(m1.module(), m2.module(), Side::F, b, k, &v);
                    prop_assert!(vv0.contains(&w));
                }
            }
        }
    }
}

#[test]
fn product_orders_agree() {
    let cases: &[(&str, &[i64], u64)] = &[
        ("A1", &[1], 2),
        ("A1", &[2], 2),
        ("A1", &[2], 3),
        ("A1", &[3], 3),
        ("A2", &[1, 0], 2),
        ("A2", &[1, 1], 2),
    ];
    for &(label, lambda, p) in cases {
        let r = rs(label);
        let m = weyl_module(&r, &Weight(lambda.to_vec()), p).unwrap();
        let depth = r.depth(&Weight(lambda.to_vec())) as usize;
        let rep = product_order_equality(m.module(), m.module(), depth, CAP).unwrap();
        assert!(rep.equal, "{label} {lambda:?} p={p}: {:?}", rep.levels);
    }
}

/// For `p` beyond every structure constant, the essential set mod `p` is the
/// rational one.
#[test]
fn large_prime_essential_sets_match_rationals() {
    for (label, lambda) in [
        ("G2", vec![1, 0]),
        ("G2", vec![0, 1]),
        ("B2", vec![1, 1]),
        ("A2", vec![2, 1]),
    ] {
        let r = rs(label);
        let lambda = Weight(lambda);
        let q = essential_basis(build_hw_module_q(&r, &lambda).unwrap().module(), None);
        let m = essential_basis(weyl_module(&r, &lambda, 101).unwrap().module(), None);
        assert_eq!(q.set().as_set(), m.set().as_set(), "{label} {lambda}");
    }
}
