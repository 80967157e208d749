//! Finite checks behind the splitting criterion: condition (2) and the `v_0`
//! condition at small rank, and the step-by-step verification in type G2.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::charzero::build_hw_module_q;
use crate::error::{Error, Result};
use crate::field::{as_integer, factorial, Field, PrimeField, Rationals};
use crate::linalg::EchelonBasis;
use crate::module::{Side, WeightModule};
use crate::multiindex::{kostant_partitions, MonomialOrder, MultiIndex};
use crate::pbw::{
    check_dual_image, dual_basis_element, dual_weight, essential_basis_with, g2_essential_table,
    g2_table_violations, sn_derivation, sn_divided_action, EssentialBasis, MonomialEvaluator,
    Polynomial,
};
use crate::report::{input_hash, RunStats, SCHEMA_VERSION};
use crate::rootsys::{RootSystem, Weight};
use crate::tensorfilt::{InducedFiltration, TensorSpace};
use crate::weylmod::{
    act, delta_apply, dual_module, weyl_module_capped, HyperMonomial, TensorVec, WeylModuleP,
};

/// Smallest prime for which the G2 argument is claimed.
pub const G2_MIN_PRIME: u64 = 11;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub schema_version: u32,
    pub input_hash: String,
    pub type_label: String,
    pub p: u64,
    pub gamma: Weight,
    pub condition: String,
    pub verdict: bool,
    pub witness: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<RunStats>,
}

/// `gamma = 2(p-1) rho`.
pub fn gamma(rs: &RootSystem, p: u64) -> Weight {
    rs.rho().scale(2 * (p as i64 - 1))
}

fn f0_vector(m: &WeylModuleP) -> Vec<u64> {
    let n = m.module().root_system().num_positive();
    act(
        m.module(),
        &HyperMonomial::f0(n, m.p()),
        &m.module().unit(m.highest_vector()),
    )
}

fn criterion_hash(rs: &RootSystem, p: u64, condition: &str) -> String {
    input_hash(
        &json!({ "type": rs.name(), "cartan": rs.cartan().matrix, "p": p, "condition": condition }),
    )
}

/// Condition (2): `F_0 v ⊗ F_0 v` is not in `VV_{(p-1)N - 1}(gamma, gamma)`.
pub fn check_condition2(rs: &Arc<RootSystem>, p: u64, cap: u128) -> Result<CriterionReport> {
    PrimeField::new(p)?;
    let g = gamma(rs, p);
    let need = rs.weyl_dimension(&g);
    let need_sq = &need * &need;
    if need_sq > BigInt::from(cap) {
        return Err(Error::ResourceCap {
            what: format!("V({g}) ⊗ V({g})"),
            required: need_sq.to_u128().unwrap_or(u128::MAX),
            cap,
        });
    }
    let m = weyl_module_capped(rs, &g, p, cap)?;
    let x = f0_vector(&m);
    let f = *m.field();
    let mut u = TensorVec::new();
    for (a, ca) in x.iter().enumerate().filter(|(_, c)| !f.is_zero(c)) {
        for (b, cb) in x.iter().enumerate().filter(|(_, c)| !f.is_zero(c)) {
            u.insert((a, b), f.mul(ca, cb));
        }
    }
    let space = TensorSpace::new(m.module(), m.module());
    let filt = InducedFiltration::compute(&space, cap)?;
    let top = (p as usize - 1) * rs.num_positive();
    let below = filt.contains(top - 1, &u);
    let at_top = filt.contains(top, &u);
    let nonzero = !u.is_empty();
    let mut witness = BTreeMap::new();
    witness.insert("f0_v_nonzero".into(), json!(nonzero));
    witness.insert("top_degree".into(), json!(top));
    witness.insert("level_of_f0v_f0v".into(), json!(filt.level_of(&u)));
    witness.insert("in_vv_top".into(), json!(at_top));
    witness.insert("dim_vv_top_minus_1".into(), json!(filt.level_dim(top - 1)));
    witness.insert("dim_vv_top".into(), json!(filt.level_dim(top)));
    witness.insert("dim_tensor".into(), json!(space.dim()));
    witness.insert("induced_levels".into(), json!(filt.table().levels));
    Ok(CriterionReport {
        schema_version: SCHEMA_VERSION,
        input_hash: criterion_hash(rs, p, "condition2"),
        type_label: rs.name(),
        p,
        gamma: g,
        condition: "condition2".into(),
        verdict: nonzero && !below,
        witness,
        stats: None,
    })
}

/// Smallest `n` with `x` in `V_n` of a highest-weight module; `None` if `x` is
/// not in the module generated by the highest vector.
pub fn pbw_degree<F: Field>(m: &WeightModule<F>, x: &[F::Elem]) -> Option<u64> {
    let f = m.field();
    let layout = m.layout();
    let support: Vec<usize> = (0..layout.num_weights())
        .filter(|&w| layout.range(w).any(|i| !f.is_zero(&x[i])))
        .collect();
    match support.as_slice() {
        [] => Some(0),
        [w] => {
            let local = x[layout.range(*w)].to_vec();
            let rs = m.root_system();
            let kappa = rs.weight_to_root_coords(&m.highest_weight().sub(layout.weight(*w)))?;
            let mut parts = kostant_partitions(rs, &kappa, None);
            parts.sort_by_key(|s| s.degree());
            let mut eval = MonomialEvaluator::new(m);
            let mut ech = EchelonBasis::new(f.clone(), layout.dim_at(*w));
            let mut i = 0;
            while i < parts.len() {
                let d = parts[i].degree();
                while i < parts.len() && parts[i].degree() == d {
                    if let Some((_, y)) = eval.eval(&parts[i]) {
                        ech.insert(y);
                    }
                    i += 1;
                }
                if ech.contains(&local) {
                    return Some(d);
                }
            }
            None
        }
        _ => {
            // the filtration is weight-graded: take the maximum over components
            let mut best = 0;
            for w in support {
                let mut part = vec![f.zero(); x.len()];
                for i in layout.range(w) {
                    part[i] = x[i].clone();
                }
                best = best.max(pbw_degree(m, &part)?);
            }
            Some(best)
        }
    }
}

/// The `v_0` condition: `F_0 v_gamma` is not in `V_{(p-1)N - 1}(gamma)`.
pub fn check_v0(rs: &Arc<RootSystem>, p: u64, cap: u128) -> Result<CriterionReport> {
    PrimeField::new(p)?;
    let g = gamma(rs, p);
    let m = weyl_module_capped(rs, &g, p, cap)?;
    let x = f0_vector(&m);
    let nonzero = x.iter().any(|c| *c != 0);
    let top = (p - 1) * rs.num_positive() as u64;
    let degree = pbw_degree(m.module(), &x);
    let mut witness = BTreeMap::new();
    witness.insert("f0_v_nonzero".into(), json!(nonzero));
    witness.insert("top_degree".into(), json!(top));
    witness.insert("pbw_degree_of_f0v".into(), json!(degree));
    witness.insert("dim_v_gamma".into(), json!(m.dim()));
    Ok(CriterionReport {
        schema_version: SCHEMA_VERSION,
        input_hash: criterion_hash(rs, p, "v0"),
        type_label: rs.name(),
        p,
        gamma: g,
        condition: "v0".into(),
        verdict: nonzero && degree.is_some_and(|d| d >= top),
        witness,
        stats: None,
    })
}

/// One step of the G2 verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepVerdict {
    pub name: String,
    pub verdict: bool,
    pub detail: BTreeMap<String, Value>,
}

impl StepVerdict {
    fn new(name: &str) -> Self {
        StepVerdict {
            name: name.into(),
            verdict: true,
            detail: BTreeMap::new(),
        }
    }

    fn note(&mut self, key: &str, value: Value) {
        self.detail.insert(key.into(), value);
    }

    /// Records a sub-check and folds it into the verdict.
    fn require(&mut self, key: &str, ok: bool) {
        self.verdict &= ok;
        self.note(key, json!(ok));
    }

    fn failed(name: &str, err: &Error) -> Self {
        let mut s = StepVerdict::new(name);
        s.verdict = false;
        s.note("error", json!(err.to_string()));
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2Report {
    pub schema_version: u32,
    pub input_hash: String,
    pub p: u64,
    pub order: MonomialOrder,
    /// `p < 11`: data only, no certification
    pub exploration: bool,
    pub steps: Vec<StepVerdict>,
    pub overall: bool,
    pub certified: bool,
    /// `"certified"`, `"failed"` or `"exploration only"`
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<RunStats>,
}

/// Modules shared by the G2 steps: `V(omega_1)`, `V(omega_2)` over `F_p` with
/// their essential bases.
pub struct G2Context {
    p: u64,
    field: PrimeField,
    rs: Arc<RootSystem>,
    order: MonomialOrder,
    v1: Arc<WeylModuleP>,
    v2: Arc<WeylModuleP>,
    ess1: EssentialBasis<PrimeField>,
    ess2: EssentialBasis<PrimeField>,
}

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex(v.to_vec())
}

impl G2Context {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_order(p, MonomialOrder::default())
    }

    pub fn with_order(p: u64, order: MonomialOrder) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let rs = Arc::new(RootSystem::from_label("G2")?);
        let v1 = Arc::new(weyl_module_capped(&rs, &Weight(vec![1, 0]), p, 1_000)?);
        let v2 = Arc::new(weyl_module_capped(&rs, &Weight(vec![0, 1]), p, 1_000)?);
        let ess1 = essential_basis_with(v1.module(), None, order);
        let ess2 = essential_basis_with(v2.module(), None, order);
        Ok(G2Context {
            p,
            field,
            rs,
            order,
            v1,
            v2,
            ess1,
            ess2,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    /// Position of the root with the given simple-root coordinates.
    fn root(&self, coords: &[i64]) -> usize {
        self.rs.root_index(coords).expect("G2 root")
    }

    /// `a_1 = xi_{omega_2}(0,0,1,0,1,0)` and `a_2 = xi_{omega_2}(0,1,0,0,1,0)`.
    pub fn a_vectors(&self) -> Result<(Vec<u64>, Vec<u64>)> {
        let m = self.v2.module();
        Ok((
            dual_basis_element(m, &self.ess2, &mi(&[0, 0, 1, 0, 1, 0]))?,
            dual_basis_element(m, &self.ess2, &mi(&[0, 1, 0, 0, 1, 0]))?,
        ))
    }

    /// `v' = xi_{omega_1}(1,0,0,0,0,1)`.
    pub fn v_prime(&self) -> Result<Vec<u64>> {
        dual_basis_element(self.v1.module(), &self.ess1, &mi(&[1, 0, 0, 0, 0, 1]))
    }

    fn monomial(&self, s: &[u32]) -> Polynomial<PrimeField> {
        Polynomial::monomial(self.field, &mi(s), 1)
    }

    /// The six divided powers of `E` applied to `a_1 ⊗ a_2` in `H^0(omega_2)^{⊗2}`.
    pub fn annihilation(&self) -> StepVerdict {
        let mut step = StepVerdict::new("annihilation");
        let (a1, a2) = match self.a_vectors() {
            Ok(v) => v,
            Err(e) => return StepVerdict::failed("annihilation", &e),
        };
        let h = dual_module(self.v2.clone());
        let f = self.field;
        let mut t = TensorVec::new();
        for (i, x) in a1.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, y) in a2.iter().enumerate().filter(|(_, y)| **y != 0) {
                t.insert((i, j), f.mul(x, y));
            }
        }
        let base = self.v2.module();
        let w = dual_weight(base, &a1)
            .zip(dual_weight(base, &a2))
            .map(|(x, y)| x.add(&y));
        let theta = Weight(vec![3, 1]);
        let expected = theta.neg().add(&Weight(vec![1, 2]));
        step.note("weight", json!(w.as_ref().map(|w| w.to_string())));
        step.require(
            "weight_is_minus_theta_plus_omega1_plus_2omega2",
            w.as_ref() == Some(&expected),
        );
        let ops: [(&str, [i64; 2], usize); 6] = [
            ("E1^(4)", [1, 0], 4),
            ("E2^(2)", [0, 1], 2),
            ("E12^(3)", [1, 1], 3),
            ("E112^(4)", [2, 1], 4),
            ("E1112^(3)", [3, 1], 3),
            ("E11122^(2)", [3, 2], 2),
        ];
        let mut offending = Vec::new();
        for (name, coords, k) in ops {
            let r = delta_apply(h.module(), h.module(), Side::E, self.root(&coords), k, &t);
            step.require(&format!("{name} kills a1⊗a2"), r.is_empty());
            if !r.is_empty() {
                offending.push(name);
            }
        }
        step.note("offending", json!(offending));
        let e1 = delta_apply(h.module(), h.module(), Side::E, self.root(&[1, 0]), 1, &t);
        step.note("E1^(1) nonzero (informational)", json!(!e1.is_empty()));
        step
    }

    /// `j^2(a_1) = x_3 x_5` and `j^2(a_2) = x_2 x_5`, compared exactly.
    pub fn j_images(&self) -> StepVerdict {
        let mut step = StepVerdict::new("j_images");
        let m = self.v2.module();
        for (name, s, want) in [
            ("a1", [0, 0, 1, 0, 1, 0], "x3*x5"),
            ("a2", [0, 1, 0, 0, 1, 0], "x2*x5"),
        ] {
            match check_dual_image(m, &self.ess2, &mi(&s)) {
                Ok((poly, lemma)) => {
                    step.note(&format!("j2({name})"), json!(poly.render()));
                    step.note(&format!("j2({name}) expected"), json!(want));
                    step.note(
                        &format!("j2({name}) leading coefficient 1"),
                        json!(lemma.coefficient_one),
                    );
                    step.note(&format!("j2({name}) lemma shape"), json!(lemma.holds()));
                    step.require(&format!("j2({name}) matches"), poly == self.monomial(&s));
                }
                Err(e) => {
                    step.require(&format!("j2({name}) matches"), false);
                    step.note(&format!("j2({name}) error"), json!(e.to_string()));
                }
            }
        }
        step
    }

    /// `(p-1,0,0,0,0,p-1)` is the only essential index of degree `>= 2(p-1)` for
    /// `(p-1) omega_1`, and `j^2(v') = x_1 x_6`.
    pub fn highest_section(&self) -> StepVerdict {
        let mut step = StepVerdict::new("highest_section");
        let q = (self.p - 1) as u32;
        match g2_essential_table(&self.rs, q, 0) {
            Ok(table) => {
                let high: Vec<String> = table
                    .iter()
                    .filter(|s| s.degree() >= 2 * q as u64)
                    .map(|s| s.to_string())
                    .collect();
                step.note("essential indices of degree >= 2(p-1)", json!(high));
                step.require(
                    "unique_top_index",
                    high == vec![mi(&[q, 0, 0, 0, 0, q]).to_string()],
                );
            }
            Err(e) => step.require(&format!("table: {e}"), false),
        }
        match check_dual_image(self.v1.module(), &self.ess1, &mi(&[1, 0, 0, 0, 0, 1])) {
            Ok((poly, lemma)) => {
                step.note("j2(v')", json!(poly.render()));
                step.note("j2(v') expected", json!("x1*x6"));
                step.require("j2(v') leading coefficient 1", lemma.coefficient_one);
                step.require("j2(v') matches", poly == self.monomial(&[1, 0, 0, 0, 0, 1]));
            }
            Err(e) => {
                step.require("j2(v') matches", false);
                step.note("j2(v') error", json!(e.to_string()));
            }
        }
        step
    }

    /// `p-1 ∈ es(nu)` for `nu = (p-1)(omega_1 + 2 omega_2)` by the inequalities.
    pub fn essential_membership_nu(&self) -> StepVerdict {
        let mut step = StepVerdict::new("essential_membership_nu");
        let q = self.p as i64 - 1;
        let v = g2_table_violations(q, 2 * q, &MultiIndex::constant(6, q as u32));
        step.note("failing_inequalities", json!(v));
        step.require("p-1 in es(nu)", v.is_empty());
        step
    }

    /// `underline x = x1^(p-1) x2^(p-1) x3^(p-1) x5^(2(p-1)) x6^(p-1)`.
    pub fn underline_x<F: Field>(&self, field: F) -> Polynomial<F> {
        let q = (self.p - 1) as u32;
        let one = field.one();
        Polynomial::monomial(field, &mi(&[q, q, q, 0, 2 * q, q]), one)
    }

    /// Coefficient of `x^{p-1}` in `E_{alpha_1}^(p-1) underline x`, mod `p` and by a
    /// separate integer expansion through iterated derivations.
    pub fn coefficient(&self) -> StepVerdict {
        let mut step = StepVerdict::new("coefficient");
        let q = (self.p - 1) as u32;
        let a1 = self.root(&[1, 0]);
        let target = MultiIndex::constant(6, q);
        let image = sn_divided_action(&self.rs, a1, q, &self.underline_x(self.field));
        let residue = image.coefficient(&target);
        let mut poly = self.underline_x(Rationals);
        for _ in 0..q {
            poly = sn_derivation(&self.rs, a1, &poly);
        }
        let raw = as_integer(&poly.coefficient(&target)).expect("integer coefficients");
        let fact = factorial(q as u64);
        let divisible = (&raw % &fact).is_zero();
        let exact = &raw / &fact;
        let exact_residue = self.field.from_bigint(&exact);
        step.note("coefficient_mod_p", json!(residue));
        step.note("integer_coefficient", json!(exact.to_string()));
        step.note("integer_coefficient_mod_p", json!(exact_residue));
        step.require("integer expansion divisible by (p-1)!", divisible);
        step.require("expansions agree", exact_residue == residue);
        step.require("coefficient nonzero mod p", residue != 0);
        step
    }

    /// The three inputs of the last lemma.
    pub fn final_lemma(&self) -> StepVerdict {
        let mut step = StepVerdict::new("final_lemma");
        let q = self.p as i64 - 1;
        let v = g2_table_violations(3 * q, q, &MultiIndex::constant(6, q as u32));
        step.note("failing_inequalities_at_(p-1)theta", json!(v));
        step.require("p-1 in es((p-1)theta)", v.is_empty());
        let a1 = self.root(&[1, 0]);
        let pairing = self.rs.pairing(&Weight(vec![q, 0]), a1);
        step.note("<(p-1)omega1, alpha1^vee>", json!(pairing));
        step.require("F1^(p-1) v_(p-1)omega1 nonzero", pairing >= q);
        // nu = (p-1) theta - m alpha_1 with 0 <= m <= <(p-1) theta, alpha_1^vee>
        let top = Weight(vec![3 * q, q]);
        let nu = Weight(vec![q, 2 * q]);
        let diff = self.rs.weight_to_root_coords(&top.sub(&nu));
        let bound = self.rs.pairing(&top, a1);
        let on_string = matches!(diff.as_deref(), Some([m, 0]) if *m >= 0 && *m <= bound);
        step.note("(p-1)theta - nu in simple roots", json!(diff));
        step.require("nu on the alpha1-string through (p-1)theta", on_string);
        match nu_multiplicity_in_tensor_power(&self.rs, q as usize) {
            Ok(mult) => step.note(
                "dim of nu-weight space of V(theta)^(p-1) (informational)",
                json!(mult.to_string()),
            ),
            Err(e) => step.note("nu multiplicity error", json!(e.to_string())),
        }
        step
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }
}

/// Multiplicity of `(p-1)theta - (p-1)alpha_1` in `V(theta)^{⊗(p-1)}` from the weights
/// `theta - k alpha_1` of `V(theta)` in characteristic 0 (`theta` is restricted for `p >= 11`).
pub fn nu_multiplicity_in_tensor_power(rs: &Arc<RootSystem>, copies: usize) -> Result<BigInt> {
    let theta = Weight(vec![3, 1]);
    let m = build_hw_module_q(rs, &theta)?;
    let alpha1 = rs.simple_root_weight(0);
    let string: Vec<BigInt> = (0..=copies)
        .map(|k| {
            BigInt::from(
                m.module()
                    .layout()
                    .multiplicity(&theta.sub(&alpha1.scale(k as i64))),
            )
        })
        .collect();
    // coefficient of t^copies in (sum_k string[k] t^k)^copies
    let mut acc = vec![BigInt::zero(); copies + 1];
    acc[0] = BigInt::from(1);
    for _ in 0..copies {
        let mut next = vec![BigInt::zero(); copies + 1];
        for (i, a) in acc.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (k, c) in string.iter().enumerate() {
                if i + k <= copies {
                    next[i + k] += a * c;
                }
            }
        }
        acc = next;
    }
    Ok(acc[copies].clone())
}

pub fn g2_annihilation_check(p: u64) -> Result<StepVerdict> {
    Ok(G2Context::new(p)?.annihilation())
}

pub fn g2_highest_section_check(p: u64) -> Result<StepVerdict> {
    Ok(G2Context::new(p)?.highest_section())
}

pub fn g2_coefficient_check(p: u64) -> Result<StepVerdict> {
    let ctx = G2Context::new(p)?;
    let mut step = ctx.coefficient();
    let member = ctx.essential_membership_nu();
    step.require("p-1 in es(nu)", member.verdict);
    Ok(step)
}

pub fn g2_final_lemma_check(p: u64) -> Result<StepVerdict> {
    Ok(G2Context::new(p)?.final_lemma())
}

pub fn g2_verify(p: u64) -> Result<G2Report> {
    g2_verify_with(p, MonomialOrder::default())
}

pub fn g2_verify_with(p: u64, order: MonomialOrder) -> Result<G2Report> {
    let ctx = G2Context::with_order(p, order)?;
    let steps = vec![
        ctx.annihilation(),
        ctx.j_images(),
        ctx.highest_section(),
        ctx.essential_membership_nu(),
        ctx.coefficient(),
        ctx.final_lemma(),
    ];
    let overall = steps.iter().all(|s| s.verdict);
    let exploration = p < G2_MIN_PRIME;
    Ok(G2Report {
        schema_version: SCHEMA_VERSION,
        input_hash: input_hash(&json!({ "type": "G2", "p": p, "order": order.name() })),
        p,
        order,
        exploration,
        steps,
        overall,
        certified: overall && !exploration,
        status: g2_status(exploration, overall).into(),
        stats: None,
    })
}

fn g2_status(exploration: bool, overall: bool) -> &'static str {
    match (exploration, overall) {
        (true, _) => "exploration only",
        (false, true) => "certified",
        (false, false) => "failed",
    }
}

impl G2Report {
    pub fn step(&self, name: &str) -> Option<&StepVerdict> {
        self.steps.iter().find(|s| s.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_v0_holds() {
        let rs = Arc::new(RootSystem::from_label("A1").unwrap());
        for p in [2, 3, 5, 7] {
            let r = check_v0(&rs, p, 10_000).unwrap();
            assert!(r.verdict, "p = {p}");
            assert_eq!(r.witness["pbw_degree_of_f0v"], json!(p - 1));
        }
    }

    #[test]
    fn a1_condition2_small() {
        let rs = Arc::new(RootSystem::from_label("A1").unwrap());
        let r = check_condition2(&rs, 2, 10_000).unwrap();
        assert_eq!(r.gamma, Weight(vec![2]));
        assert_eq!(r.witness["dim_tensor"], json!(9));
        assert!(r.verdict);
    }

    #[test]
    fn cap_for_condition2() {
        let rs = Arc::new(RootSystem::from_label("A2").unwrap());
        assert!(matches!(
            check_condition2(&rs, 3, 1_000),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn nu_multiplicity_is_not_one() {
        let rs = Arc::new(RootSystem::from_label("G2").unwrap());
        // coefficient of t^2 in (1 + t + t^2 + t^3)^2
        assert_eq!(
            nu_multiplicity_in_tensor_power(&rs, 2).unwrap(),
            BigInt::from(3)
        );
    }

    #[test]
    fn final_lemma_and_membership_at_11() {
        let ctx = G2Context::new(11).unwrap();
        assert!(ctx.final_lemma().verdict);
        assert!(ctx.essential_membership_nu().verdict);
    }
}
