//! PBW filtration, essential multiindices, dual bases, the map `j` into `S(n)`
//! and the divided-power action of `E_beta` on `S(n)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{factorial, Field};
use crate::linalg::{inverse, EchelonBasis, Matrix};
use crate::module::{Side, WeightModule};
use crate::multiindex::{kostant_partitions, MonomialOrder, MultiIndex};
use crate::rootsys::{RootSystem, Weight};

pub use crate::multiindex::{order_compare, Ordered};

/// A set of essential multiindices, kept sorted by the total order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialSet {
    order: MonomialOrder,
    elements: Vec<MultiIndex>,
    #[serde(skip)]
    members: HashSet<MultiIndex>,
}

impl EssentialSet {
    pub fn new(elements: Vec<MultiIndex>) -> Self {
        Self::with_order(elements, MonomialOrder::default())
    }

    pub fn with_order(mut elements: Vec<MultiIndex>, order: MonomialOrder) -> Self {
        elements.sort_by(|a, b| order.compare(a, b));
        elements.dedup();
        let members = elements.iter().cloned().collect();
        EssentialSet {
            order,
            elements,
            members,
        }
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn contains(&self, s: &MultiIndex) -> bool {
        self.members.contains(s)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in increasing total order.
    pub fn iter(&self) -> impl Iterator<Item = &MultiIndex> {
        self.elements.iter()
    }

    pub fn of_degree(&self, d: u64) -> impl Iterator<Item = &MultiIndex> {
        self.elements.iter().filter(move |s| s.degree() == d)
    }

    /// Number of elements of each degree `0..=max`.
    pub fn graded_counts(&self) -> Vec<usize> {
        let max = self.elements.iter().map(|s| s.degree()).max().unwrap_or(0) as usize;
        let mut out = vec![0; max + 1];
        for s in &self.elements {
            out[s.degree() as usize] += 1;
        }
        out
    }

    pub fn as_set(&self) -> &HashSet<MultiIndex> {
        &self.members
    }
}

/// Dimensions of the levels of a filtration, indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationTable {
    /// `graded[n] = dim F_n / F_{n-1}`
    pub graded: Vec<usize>,
}

impl FiltrationTable {
    /// `dim F_n`.
    pub fn level(&self, n: usize) -> usize {
        self.graded.iter().take(n + 1).sum()
    }

    pub fn total(&self) -> usize {
        self.graded.iter().sum()
    }

    /// Largest degree with a nonzero graded piece.
    pub fn top_degree(&self) -> usize {
        self.graded.iter().rposition(|&d| d > 0).unwrap_or(0)
    }
}

/// Memoized evaluation of `F^s v_lambda` in a highest-weight module.
pub struct MonomialEvaluator<'a, F: Field> {
    m: &'a WeightModule<F>,
    memo: HashMap<(usize, Vec<u32>), Option<(usize, Vec<F::Elem>)>>,
}

impl<'a, F: Field> MonomialEvaluator<'a, F> {
    pub fn new(m: &'a WeightModule<F>) -> Self {
        MonomialEvaluator {
            m,
            memo: HashMap::new(),
        }
    }

    /// `F^s v` as `(weight index, local coordinates)`; `None` when it is zero for structural reasons.
    pub fn eval(&mut self, s: &MultiIndex) -> Option<(usize, Vec<F::Elem>)> {
        self.suffix(0, s.exps())
    }

    fn suffix(&mut self, k: usize, s: &[u32]) -> Option<(usize, Vec<F::Elem>)> {
        if k == s.len() {
            let hw = self
                .m
                .highest_vector_index()
                .expect("highest-weight module");
            let w = self.m.layout().weight_of_basis(hw);
            let mut v = vec![self.m.field().zero(); self.m.layout().dim_at(w)];
            v[hw - self.m.layout().range(w).start] = self.m.field().one();
            return Some((w, v));
        }
        if s[k] == 0 {
            return self.suffix(k + 1, s);
        }
        let key = (k, s[k..].to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let res = self.suffix(k + 1, s).and_then(|(w, x)| {
            let out = self.m.apply_local(Side::F, k, s[k] as usize, w, &x)?;
            (!out.1.iter().all(|v| self.m.field().is_zero(v))).then_some(out)
        });
        self.memo.insert(key, res.clone());
        res
    }

    /// `F^s v` as a global vector.
    pub fn eval_global(&mut self, s: &MultiIndex) -> Vec<F::Elem> {
        let mut out = vec![self.m.field().zero(); self.m.dim()];
        if let Some((w, x)) = self.eval(s) {
            let start = self.m.layout().range(w).start;
            for (i, v) in x.into_iter().enumerate() {
                out[start + i] = v;
            }
        }
        out
    }
}

/// Essential multiindices of a weight space and the matrix of their vectors.
#[derive(Clone, Debug)]
pub struct WeightEssentials<E> {
    pub indices: Vec<MultiIndex>,
    /// columns are `F^s v` for `s` in `indices`
    pub vectors: Matrix<E>,
    pub inverse: Matrix<E>,
}

/// Essential multiindices of `V(lambda)` with the data needed for dual bases.
#[derive(Clone, Debug)]
pub struct EssentialBasis<F: Field> {
    set: EssentialSet,
    per_weight: Vec<Option<WeightEssentials<F::Elem>>>,
    location: HashMap<MultiIndex, (usize, usize)>,
}

impl<F: Field> EssentialBasis<F> {
    pub fn set(&self) -> &EssentialSet {
        &self.set
    }

    pub fn weight_data(&self, w: usize) -> Option<&WeightEssentials<F::Elem>> {
        self.per_weight[w].as_ref()
    }

    /// `(weight index, position)` of an essential multiindex.
    pub fn locate(&self, s: &MultiIndex) -> Option<(usize, usize)> {
        self.location.get(s).copied()
    }
}

/// `lambda - mu` in simple-root coordinates for every weight `mu` of the module.
fn depth_vectors<F: Field>(m: &WeightModule<F>) -> Vec<Vec<i64>> {
    let rs = m.root_system();
    let top = m.highest_weight();
    (0..m.layout().num_weights())
        .map(|w| {
            rs.weight_to_root_coords(&top.sub(m.layout().weight(w)))
                .expect("weights lie in lambda - Q")
        })
        .collect()
}

pub fn essential_basis<F: Field>(
    m: &WeightModule<F>,
    up_to_degree: Option<u64>,
) -> EssentialBasis<F> {
    essential_basis_with(m, up_to_degree, MonomialOrder::default())
}

/// One sweep per weight space in the total order, keeping `s` whenever `F^s v`
/// is independent of the vectors of all smaller multiindices.
///
/// With `up_to_degree = Some(n)` only multiindices of degree at most `n` are considered.
pub fn essential_basis_with<F: Field>(
    m: &WeightModule<F>,
    up_to_degree: Option<u64>,
    order: MonomialOrder,
) -> EssentialBasis<F> {
    let f = m.field();
    let rs = m.root_system();
    let layout = m.layout();
    let kappas = depth_vectors(m);
    let mut eval = MonomialEvaluator::new(m);
    let mut all = Vec::new();
    let mut per_weight = Vec::with_capacity(layout.num_weights());
    let mut location = HashMap::new();
    for w in 0..layout.num_weights() {
        let d = layout.dim_at(w);
        let mut parts = kostant_partitions(rs, &kappas[w], None);
        if let Some(n) = up_to_degree {
            parts.retain(|s| s.degree() <= n);
        }
        parts.sort_by(|a, b| order.compare(a, b));
        let mut ech = EchelonBasis::new(f.clone(), d);
        let mut indices = Vec::new();
        let mut cols = Vec::new();
        for s in parts {
            if ech.is_full() {
                break;
            }
            let Some((tw, x)) = eval.eval(&s) else {
                continue;
            };
            debug_assert_eq!(tw, w);
            if ech.insert(x.clone()) {
                location.insert(s.clone(), (w, indices.len()));
                indices.push(s);
                cols.push(x);
            }
        }
        if indices.is_empty() {
            per_weight.push(None);
            continue;
        }
        let vectors = Matrix::from_columns(d, &cols, f.zero());
        let inv = if indices.len() == d {
            inverse(f, &vectors)
        } else {
            None
        };
        all.extend(indices.iter().cloned());
        per_weight.push(Some(WeightEssentials {
            indices,
            vectors,
            inverse: inv.unwrap_or_else(|| Matrix::from_vec(0, 0, Vec::new())),
        }));
    }
    EssentialBasis {
        set: EssentialSet::with_order(all, order),
        per_weight,
        location,
    }
}

pub fn essential_set<F: Field>(m: &WeightModule<F>, up_to_degree: Option<u64>) -> EssentialSet {
    essential_basis(m, up_to_degree).set
}

/// PBW filtration dimensions from the essential set (the essential vectors of
/// degree at most `n` form a basis of `V_n`).
pub fn pbw_filtration<F: Field>(m: &WeightModule<F>) -> FiltrationTable {
    FiltrationTable {
        graded: essential_set(m, None).graded_counts(),
    }
}

/// `dim span{F^s v : deg s <= n}` by direct rank computation over all multiindices.
pub fn pbw_level_bruteforce<F: Field>(m: &WeightModule<F>, n: u64) -> usize {
    let f = m.field();
    let rs = m.root_system();
    let kappas = depth_vectors(m);
    let mut eval = MonomialEvaluator::new(m);
    let mut total = 0;
    for (w, kappa) in kappas.iter().enumerate() {
        let mut ech = EchelonBasis::new(f.clone(), m.layout().dim_at(w));
        for s in kostant_partitions(rs, kappa, None) {
            if s.degree() > n {
                continue;
            }
            if let Some((_, x)) = eval.eval(&s) {
                ech.insert(x);
            }
        }
        total += ech.rank();
    }
    total
}

/// The seven G2 essential-set inequalities for `lambda = k omega_1 + l omega_2`; returns the
/// names of those that fail.
pub fn g2_table_violations(k: i64, l: i64, s: &MultiIndex) -> Vec<&'static str> {
    assert_eq!(s.len(), 6, "G2 multiindices have six entries");
    let t: Vec<i64> = s.exps().iter().map(|&x| x as i64).collect();
    let checks: [(&'static str, i64, i64); 7] = [
        ("s5 <= l", t[4], l),
        ("s6 <= k", t[5], k),
        ("s2+s3+s6 <= k+l", t[1] + t[2] + t[5], k + l),
        ("s3+s4+s6 <= k+l", t[2] + t[3] + t[5], k + l),
        ("s4+s5+s6 <= k+l", t[3] + t[4] + t[5], k + l),
        (
            "s1+s2+s3+s4+s5 <= k+2l",
            t[0] + t[1] + t[2] + t[3] + t[4],
            k + 2 * l,
        ),
        (
            "s2+s3+s4+s5+s6 <= k+2l",
            t[1] + t[2] + t[3] + t[4] + t[5],
            k + 2 * l,
        ),
    ];
    checks
        .iter()
        .filter(|(_, a, b)| a > b)
        .map(|(n, _, _)| *n)
        .collect()
}

pub fn g2_table_contains(k: i64, l: i64, s: &MultiIndex) -> bool {
    g2_table_violations(k, l, s).is_empty()
}

/// Every 6-tuple satisfying the G2 essential-set inequalities for `k omega_1 + l omega_2`.
pub fn g2_essential_table(rs: &RootSystem, k: u32, l: u32) -> Result<EssentialSet> {
    if !rs.is_g2() {
        return Err(Error::NotG2(rs.name()));
    }
    let (k, l) = (k as i64, l as i64);
    let mut out = Vec::new();
    let (a, b) = (k + l, k + 2 * l);
    for s6 in 0..=k {
        for s5 in 0..=l {
            for s4 in 0..=(a - s5 - s6) {
                for s3 in 0..=(a - s4 - s6) {
                    for s2 in 0..=(a - s3 - s6).min(b - s3 - s4 - s5 - s6) {
                        for s1 in 0..=(b - s2 - s3 - s4 - s5) {
                            out.push(MultiIndex(vec![
                                s1 as u32, s2 as u32, s3 as u32, s4 as u32, s5 as u32, s6 as u32,
                            ]));
                        }
                    }
                }
            }
        }
    }
    Ok(EssentialSet::new(out))
}

/// A polynomial in `S(n)`: monomials `x^t` with nonzero coefficients.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    field: F,
    n: usize,
    terms: BTreeMap<Vec<u32>, F::Elem>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: F, n: usize) -> Self {
        Polynomial {
            field,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: F, t: &MultiIndex, c: F::Elem) -> Self {
        let mut p = Self::zero(field, t.len());
        p.add_term(t, c);
        p
    }

    /// `x_{beta_k}`.
    pub fn variable(field: F, n: usize, k: usize) -> Self {
        let one = field.one();
        Self::monomial(field, &MultiIndex::unit(n, k), one)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, t: &MultiIndex, c: F::Elem) {
        assert_eq!(
            t.len(),
            self.n,
            "monomial has the wrong number of variables"
        );
        if self.field.is_zero(&c) {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(t.exps()) {
            Some(v) => {
                *v = f.add(v, &c);
                if f.is_zero(v) {
                    self.terms.remove(t.exps());
                }
            }
            None => {
                self.terms.insert(t.exps().to_vec(), c);
            }
        }
    }

    pub fn coefficient(&self, t: &MultiIndex) -> F::Elem {
        self.terms
            .get(t.exps())
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in decreasing total order.
    pub fn terms(&self) -> Vec<(MultiIndex, F::Elem)> {
        self.terms_in(MonomialOrder::default())
    }

    pub fn terms_in(&self, order: MonomialOrder) -> Vec<(MultiIndex, F::Elem)> {
        let mut v: Vec<(MultiIndex, F::Elem)> = self
            .terms
            .iter()
            .map(|(k, c)| (MultiIndex(k.clone()), c.clone()))
            .collect();
        v.sort_by(|a, b| order.compare(&b.0, &a.0));
        v
    }

    /// The largest monomial in the total order with its coefficient.
    pub fn leading_term(&self) -> Option<(MultiIndex, F::Elem)> {
        self.terms().into_iter().next()
    }

    /// The smallest monomial in the given order with its coefficient.
    pub fn trailing_term_in(&self, order: MonomialOrder) -> Option<(MultiIndex, F::Elem)> {
        self.terms_in(order).pop()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(&MultiIndex(t.clone()), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(self.field.clone(), self.n);
        for (t, v) in &self.terms {
            out.add_term(&MultiIndex(t.clone()), self.field.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f.clone(), self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let t = MultiIndex(a.iter().zip(b).map(|(i, j)| i + j).collect());
                out.add_term(&t, f.mul(x, y));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::monomial(
            self.field.clone(),
            &MultiIndex::zero(self.n),
            self.field.one(),
        );
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Converts coefficients into another field.
    pub fn map_field<G: Field>(&self, g: G, conv: impl Fn(&F::Elem) -> G::Elem) -> Polynomial<G> {
        let mut out = Polynomial::zero(g, self.n);
        for (t, c) in &self.terms {
            out.add_term(&MultiIndex(t.clone()), conv(c));
        }
        out
    }

    /// `x3*x5`, `2*x1^2*x6`; variables are numbered by root position starting at 1.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .iter()
            .map(|(t, c)| {
                let mono = render_monomial(t);
                if self.field.is_one(c) {
                    mono
                } else if mono == "1" {
                    self.field.render(c)
                } else {
                    format!("{}*{}", self.field.render(c), mono)
                }
            })
            .collect();
        parts.join(" + ")
    }
}

pub fn render_monomial(t: &MultiIndex) -> String {
    let factors: Vec<String> = t
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(k, &e)| {
            if e == 1 {
                format!("x{}", k + 1)
            } else {
                format!("x{}^{}", k + 1, e)
            }
        })
        .collect();
    if factors.is_empty() {
        "1".into()
    } else {
        factors.join("*")
    }
}

/// The functional dual to `F^s v` with respect to the essential basis, written in
/// the dual of the module's basis.
pub fn dual_basis_element<F: Field>(
    m: &WeightModule<F>,
    ess: &EssentialBasis<F>,
    s: &MultiIndex,
) -> Result<Vec<F::Elem>> {
    let (w, pos) = ess
        .locate(s)
        .ok_or_else(|| Error::NotEssential(s.to_string()))?;
    let data = ess.weight_data(w).expect("located weight has data");
    if data.inverse.rows() == 0 {
        return Err(Error::NotEssential(format!(
            "{s} (essential sweep was truncated)"
        )));
    }
    let f = m.field();
    let mut xi = vec![f.zero(); m.dim()];
    let start = m.layout().range(w).start;
    for c in 0..data.inverse.cols() {
        xi[start + c] = data.inverse.get(pos, c).clone();
    }
    Ok(xi)
}

/// `j^n(xi) = sum_{deg t = n} <xi, F^t v> x^t`.
pub fn j_map<F: Field>(m: &WeightModule<F>, xi: &[F::Elem], n: u64) -> Polynomial<F> {
    let f = m.field();
    let rs = m.root_system();
    let layout = m.layout();
    let kappas = depth_vectors(m);
    let mut eval = MonomialEvaluator::new(m);
    let mut out = Polynomial::zero(f.clone(), rs.num_positive());
    for w in 0..layout.num_weights() {
        let range = layout.range(w);
        let local = &xi[range];
        if local.iter().all(|x| f.is_zero(x)) {
            continue;
        }
        for t in kostant_partitions(rs, &kappas[w], Some(n)) {
            let Some((tw, x)) = eval.eval(&t) else {
                continue;
            };
            debug_assert_eq!(tw, w);
            let mut c = f.zero();
            for (a, b) in local.iter().zip(&x) {
                f.add_mul_assign(&mut c, a, b);
            }
            out.add_term(&t, c);
        }
    }
    out
}

/// Shape of `j^{deg s}(xi(s))`: coefficient 1 at `x^s`, support at `t >= s`, and
/// no essential multiindex other than `s` in the support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualImageCheck {
    pub s: MultiIndex,
    pub coefficient_one: bool,
    pub support_above: bool,
    pub unique_essential: bool,
}

impl DualImageCheck {
    pub fn holds(&self) -> bool {
        self.coefficient_one && self.support_above && self.unique_essential
    }
}

pub fn check_dual_image<F: Field>(
    m: &WeightModule<F>,
    ess: &EssentialBasis<F>,
    s: &MultiIndex,
) -> Result<(Polynomial<F>, DualImageCheck)> {
    let xi = dual_basis_element(m, ess, s)?;
    let poly = j_map(m, &xi, s.degree());
    let order = ess.set().order();
    let terms = poly.terms_in(order);
    let check = DualImageCheck {
        s: s.clone(),
        coefficient_one: m.field().is_one(&poly.coefficient(s)),
        support_above: terms
            .iter()
            .all(|(t, _)| order.compare(t, s) != std::cmp::Ordering::Less),
        unique_essential: terms.iter().all(|(t, _)| t == s || !ess.set().contains(t)),
    };
    Ok((poly, check))
}

/// Weight of the functional `xi` in the dual module when it is homogeneous.
pub fn dual_weight<F: Field>(m: &WeightModule<F>, xi: &[F::Elem]) -> Option<Weight> {
    let f = m.field();
    let layout = m.layout();
    let mut found = None;
    for w in 0..layout.num_weights() {
        if layout.range(w).any(|i| !f.is_zero(&xi[i])) {
            if found.is_some() {
                return None;
            }
            found = Some(layout.weight(w).neg());
        }
    }
    found
}

/// `ad(E_beta)^k / k!` restricted to `n = span{E_gamma}`, over the integers.
pub fn divided_ad_e(rs: &RootSystem, root: usize, k: u32) -> Matrix<BigInt> {
    let n = rs.num_positive();
    let ad = rs.chevalley().ad_e(root);
    let restricted = Matrix::from_vec(
        n,
        n,
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| BigInt::from(*ad.get(r, c)))
            .collect(),
    );
    let mut acc = Matrix::from_vec(
        n,
        n,
        (0..n * n)
            .map(|i| {
                if i / n == i % n {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            })
            .collect(),
    );
    for _ in 0..k {
        let mut next = Matrix::filled(n, n, BigInt::zero());
        for r in 0..n {
            for m in 0..n {
                let a = restricted.get(r, m);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let prod = a * acc.get(m, c);
                    *next.get_mut(r, c) += prod;
                }
            }
        }
        acc = next;
    }
    let fact = factorial(k as u64);
    acc.map(|x| {
        assert!(
            (x % &fact).is_zero(),
            "ad(E)^k/k! is integral in a Chevalley basis"
        );
        x / &fact
    })
}

/// `E_beta^(k) f` for `f` in `S(n)`: `ad(E_beta)^(k)` on the variables, extended by the
/// divided-power Leibniz rule `E^(k)(gh) = sum_{i+j=k} E^(i)(g) E^(j)(h)`.
pub fn sn_divided_action<F: Field>(
    rs: &RootSystem,
    root: usize,
    k: u32,
    poly: &Polynomial<F>,
) -> Polynomial<F> {
    let f = poly.field().clone();
    let n = rs.num_positive();
    if k == 0 {
        return poly.clone();
    }
    // linear action tables D_i[gamma] = E^(i) x_gamma as (delta, coefficient)
    let tables: Vec<Vec<Vec<(usize, F::Elem)>>> = (0..=k)
        .map(|i| {
            let m = divided_ad_e(rs, root, i);
            (0..n)
                .map(|g| {
                    (0..n)
                        .filter_map(|d| {
                            let c = f.from_bigint(m.get(d, g));
                            (!f.is_zero(&c)).then_some((d, c))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut out = Polynomial::zero(f.clone(), n);
    for (t, c) in &poly.terms {
        // dp[j] = sum over ways of spending j on the factors processed so far
        let mut dp: Vec<BTreeMap<Vec<u32>, F::Elem>> = vec![BTreeMap::new(); k as usize + 1];
        dp[0].insert(vec![0; n], c.clone());
        for (g, &e) in t.iter().enumerate() {
            for _ in 0..e {
                let mut next: Vec<BTreeMap<Vec<u32>, F::Elem>> =
                    vec![BTreeMap::new(); k as usize + 1];
                for (j, layer) in dp.iter().enumerate() {
                    for (mono, coef) in layer {
                        for i in 0..=(k as usize - j) {
                            for (d, a) in &tables[i][g] {
                                let mut m2 = mono.clone();
                                m2[*d] += 1;
                                let val = f.mul(coef, a);
                                let slot = next[j + i].entry(m2).or_insert_with(|| f.zero());
                                *slot = f.add(slot, &val);
                            }
                        }
                    }
                }
                for layer in next.iter_mut() {
                    layer.retain(|_, v| !f.is_zero(v));
                }
                dp = next;
            }
        }
        for (mono, coef) in std::mem::take(&mut dp[k as usize]) {
            out.add_term(&MultiIndex(mono), coef);
        }
    }
    out
}

/// The derivation `E_beta` applied to a polynomial (the `k = 1` case of [`sn_divided_action`]).
pub fn sn_derivation<F: Field>(
    rs: &RootSystem,
    root: usize,
    poly: &Polynomial<F>,
) -> Polynomial<F> {
    sn_divided_action(rs, root, 1, poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charzero::{admissible_lattice, build_hw_module_q};
    use crate::field::{PrimeField, Rationals};
    use std::sync::Arc;

    fn m(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    #[test]
    fn a1_chain_essentials() {
        let rs = Arc::new(RootSystem::from_label("A1").unwrap());
        let q = build_hw_module_q(&rs, &Weight(vec![4])).unwrap();
        let es = essential_set(q.module(), None);
        let expected: Vec<MultiIndex> = (0..=4).map(|i| m(&[i])).collect();
        assert_eq!(es.iter().cloned().collect::<Vec<_>>(), expected);
        let table = pbw_filtration(q.module());
        for n in 0..6 {
            assert_eq!(table.level(n), n.min(4) + 1);
        }
    }

    #[test]
    fn g2_fundamental_filtrations() {
        let rs = Arc::new(RootSystem::from_label("G2").unwrap());
        let q1 = build_hw_module_q(&rs, &Weight(vec![1, 0])).unwrap();
        assert_eq!(pbw_filtration(q1.module()).graded, vec![1, 5, 1]);
        let q2 = build_hw_module_q(&rs, &Weight(vec![0, 1])).unwrap();
        assert_eq!(pbw_filtration(q2.module()).graded, vec![1, 5, 8]);
        for n in 0..3 {
            assert_eq!(
                pbw_level_bruteforce(q1.module(), n),
                pbw_filtration(q1.module()).level(n as usize)
            );
        }
    }

    #[test]
    fn inequality_table_counts() {
        let rs = RootSystem::from_label("G2").unwrap();
        assert_eq!(g2_essential_table(&rs, 1, 0).unwrap().len(), 7);
        assert_eq!(g2_essential_table(&rs, 0, 1).unwrap().len(), 14);
        let a2 = RootSystem::from_label("A2").unwrap();
        assert!(matches!(
            g2_essential_table(&a2, 1, 0),
            Err(Error::NotG2(_))
        ));
        assert!(g2_table_contains(30, 10, &MultiIndex::constant(6, 10)));
        assert!(!g2_table_contains(0, 1, &m(&[0, 0, 0, 0, 2, 0])));
    }

    #[test]
    fn j_map_on_omega2_over_f11() {
        let rs = Arc::new(RootSystem::from_label("G2").unwrap());
        let lat =
            admissible_lattice(&build_hw_module_q(&rs, &Weight(vec![0, 1])).unwrap()).unwrap();
        let v = crate::weylmod::reduce_mod_p(&lat, 11).unwrap();
        let ess = essential_basis(v.module(), None);
        let a1 = dual_basis_element(v.module(), &ess, &m(&[0, 0, 1, 0, 1, 0])).unwrap();
        let a2 = dual_basis_element(v.module(), &ess, &m(&[0, 1, 0, 0, 1, 0])).unwrap();
        let f = PrimeField::new(11).unwrap();
        // both degree-2 monomials of each weight act nontrivially on v, so the
        // images carry a second term; the essential one has coefficient 1
        let mut want1 = Polynomial::monomial(f, &m(&[0, 0, 1, 0, 1, 0]), 1);
        want1.add_term(&m(&[0, 0, 0, 2, 0, 0]), 10);
        assert_eq!(j_map(v.module(), &a1, 2), want1);
        let mut want2 = Polynomial::monomial(f, &m(&[0, 1, 0, 0, 1, 0]), 1);
        want2.add_term(&m(&[0, 0, 1, 1, 0, 0]), 10);
        assert_eq!(j_map(v.module(), &a2, 2), want2);
        // weights -alpha_1 and 0
        assert_eq!(dual_weight(v.module(), &a1), Some(Weight(vec![-2, 1])));
        assert_eq!(dual_weight(v.module(), &a2), Some(Weight(vec![0, 0])));
        assert!(dual_basis_element(v.module(), &ess, &m(&[0, 0, 0, 0, 2, 0])).is_err());
    }

    #[test]
    fn sn_action_basics() {
        let rs = RootSystem::from_label("G2").unwrap();
        let q = Rationals;
        let a1 = rs.simple_position(0);
        let x5 = Polynomial::variable(q, 6, 4);
        let out = sn_divided_action(&rs, a1, 1, &x5);
        assert_eq!(out.len(), 1);
        let (t, c) = out.leading_term().unwrap();
        assert_eq!(t, m(&[0, 0, 0, 1, 0, 0]));
        assert!(c == Rationals.from_i64(1) || c == Rationals.from_i64(-1));
        assert_eq!(sn_divided_action(&rs, a1, 0, &x5), x5);
        // E^(2)(xy) = E^(2)x y + Ex Ey + x E^(2)y
        let x = Polynomial::variable(q, 6, 4);
        let y = Polynomial::variable(q, 6, 3);
        let lhs = sn_divided_action(&rs, a1, 2, &x.mul(&y));
        let rhs = sn_divided_action(&rs, a1, 2, &x)
            .mul(&y)
            .add(&sn_divided_action(&rs, a1, 1, &x).mul(&sn_divided_action(&rs, a1, 1, &y)))
            .add(&x.mul(&sn_divided_action(&rs, a1, 2, &y)));
        assert_eq!(lhs, rhs);
    }
}
