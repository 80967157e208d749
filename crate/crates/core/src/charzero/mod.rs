//! Simple highest-weight modules over Q and their admissible Z-forms.

pub(crate) mod construct;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{as_integer, Field, Rationals};
use crate::hnf::hnf_rows;
use crate::linalg::{identity, inverse, mat_mul, zeros, Matrix};
use crate::module::{divided_tower, GradedOp, Layout, Side, WeightModule};
use crate::rootsys::{RootSystem, Weight};

/// Default cap on `dim V(lambda)`.
pub const DEFAULT_DIM_CAP: u128 = 200_000;

type Q = BigRational;

/// `V(lambda)` over Q in the basis produced by the construction, with all
/// divided powers `E_beta^(k)`, `F_beta^(k)`.
#[derive(Clone, Debug)]
pub struct HwModuleQ {
    lambda: Weight,
    module: WeightModule<Rationals>,
    chosen: Vec<Vec<(usize, usize)>>,
}

impl HwModuleQ {
    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn module(&self) -> &WeightModule<Rationals> {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Index of the highest-weight vector `v_lambda` (always 0).
    pub fn highest_vector(&self) -> usize {
        0
    }
}

pub fn build_hw_module_q(rs: &Arc<RootSystem>, lambda: &Weight) -> Result<HwModuleQ> {
    build_hw_module_q_capped(rs, lambda, DEFAULT_DIM_CAP)
}

pub fn build_hw_module_q_capped(
    rs: &Arc<RootSystem>,
    lambda: &Weight,
    cap: u128,
) -> Result<HwModuleQ> {
    rs.check_dominant(lambda)?;
    check_cap(rs, lambda, cap)?;
    let c = construct::construct(rs, lambda);
    let expected = rs.weyl_dimension(lambda);
    assert_eq!(
        BigInt::from(c.layout.total_dim()),
        expected,
        "constructed module for {lambda} has the wrong dimension"
    );
    let (e, f) = construct::root_generators(rs, &c);
    let q = Rationals;
    let depth = rs.depth(lambda).max(0) as usize;
    let e_ops = e.iter().map(|x| divided_tower(&q, x, depth)).collect();
    let f_ops = f.iter().map(|x| divided_tower(&q, x, depth)).collect();
    let module = WeightModule::new(
        q,
        rs.clone(),
        Arc::new(c.layout),
        lambda.clone(),
        e_ops,
        f_ops,
    );
    Ok(HwModuleQ {
        lambda: lambda.clone(),
        module,
        chosen: c.chosen,
    })
}

pub(crate) fn check_cap(rs: &RootSystem, lambda: &Weight, cap: u128) -> Result<()> {
    let d = rs.weyl_dimension(lambda);
    match d.to_u128() {
        Some(x) if x <= cap => Ok(()),
        _ => Err(Error::ResourceCap {
            what: format!("V{lambda}"),
            required: d.to_u128().unwrap_or(u128::MAX),
            cap,
        }),
    }
}

/// Dense matrix of `X_beta^(k)` (`X = E` or `F`) on the whole module; `k = 0` gives the identity.
pub fn divided_power_matrix<F: Field>(
    m: &WeightModule<F>,
    side: Side,
    root: usize,
    k: usize,
) -> Matrix<F::Elem> {
    let f = m.field();
    if k == 0 {
        return identity(f, m.dim());
    }
    match m.op(side, root, k) {
        Some(op) => op.to_dense(f, m.layout()),
        None => zeros(f, m.dim(), m.dim()),
    }
}

/// Gram matrices of the contravariant form, one per weight, normalized by `<v, v> = 1`.
pub fn contravariant_form(m: &HwModuleQ) -> Vec<Matrix<Q>> {
    let q = Rationals;
    let module = &m.module;
    let rs = module.root_system();
    let layout = module.layout();
    let mut gram: Vec<Matrix<Q>> = Vec::with_capacity(layout.num_weights());
    gram.push(Matrix::from_vec(1, 1, vec![Q::one()]));
    for w in 1..layout.num_weights() {
        let d = layout.dim_at(w);
        let mut g = zeros(&q, d, d);
        for (k, &(i, u)) in m.chosen[w].iter().enumerate() {
            // <f_i u, b_l> = <u, e_i b_l>
            let (up, e_blk) = module
                .op(Side::E, rs.simple_position(i), 1)
                .and_then(|op| op.block(w))
                .expect("e_i is nonzero here");
            let prod = mat_mul(&q, &gram[*up], e_blk);
            for l in 0..d {
                g.set(k, l, prod.get(u, l).clone());
            }
        }
        gram.push(g);
    }
    gram
}

/// Checks `<F_beta u, v> = <u, E_beta v>` for every positive root and every pair of basis vectors,
/// together with symmetry and nondegeneracy of the form.
pub fn contravariant_form_consistent(m: &HwModuleQ) -> bool {
    let q = Rationals;
    let gram = contravariant_form(m);
    let module = &m.module;
    for g in &gram {
        if *g != g.transpose() || inverse(&q, g).is_none() {
            return false;
        }
    }
    for b in 0..module.root_system().num_positive() {
        let (Some(fop), Some(eop)) = (module.op(Side::F, b, 1), module.op(Side::E, b, 1)) else {
            continue;
        };
        for (src, blk) in fop.blocks().iter().enumerate() {
            let Some((tgt, fm)) = blk else { continue };
            // F^T G_tgt == G_src E|_{tgt -> src}
            let lhs = mat_mul(&q, &fm.transpose(), &gram[*tgt]);
            let rhs = match eop.block(*tgt) {
                Some((back, em)) if *back == src => mat_mul(&q, &gram[src], em),
                _ => zeros(&q, lhs.rows(), lhs.cols()),
            };
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// The Z-span of all `F^(s) v_lambda`, with the module written in a Z-basis of it.
#[derive(Clone, Debug)]
pub struct AdmissibleLattice {
    lambda: Weight,
    /// per weight: columns are lattice basis vectors in construction coordinates
    basis: Vec<Matrix<Q>>,
    module: WeightModule<Rationals>,
}

impl AdmissibleLattice {
    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn rank(&self) -> usize {
        self.module.dim()
    }

    /// Basis of the lattice inside weight space `w`, as columns in construction coordinates.
    pub fn basis(&self, w: usize) -> &Matrix<Q> {
        &self.basis[w]
    }

    /// The module in lattice coordinates; all operator entries are integers.
    pub fn module(&self) -> &WeightModule<Rationals> {
        &self.module
    }
}

/// Computes the lattice weight by weight as the Z-span of `F_beta^(k) L_{mu + k beta}`,
/// which equals the span of all `F^(s) v_lambda`.
pub fn admissible_lattice(m: &HwModuleQ) -> Result<AdmissibleLattice> {
    let q = Rationals;
    let module = &m.module;
    let rs = module.root_system();
    let layout = module.layout();
    let mut basis: Vec<Matrix<Q>> = Vec::with_capacity(layout.num_weights());
    basis.push(Matrix::from_vec(1, 1, vec![Q::one()]));
    for w in 1..layout.num_weights() {
        let d = layout.dim_at(w);
        let mut gens: Vec<Vec<Q>> = Vec::new();
        for b in 0..rs.num_positive() {
            for k in 1..=module.max_power(Side::F, b) {
                let op = module.op(Side::F, b, k).expect("k within range");
                let Some(src) = module.shifted_weight(Side::E, b, k, w) else {
                    continue;
                };
                let Some((tgt, blk)) = op.block(src) else {
                    continue;
                };
                debug_assert_eq!(*tgt, w);
                let img = mat_mul(&q, blk, &basis[src]);
                gens.extend((0..img.cols()).map(|c| img.column(c)));
            }
        }
        let den = gens.iter().flatten().fold(BigInt::one(), |acc, x| {
            num_integer::lcm(acc, x.denom().clone())
        });
        let scale = Q::from_integer(den.clone());
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|x| (x * &scale).to_integer()).collect())
            .collect();
        let h = hnf_rows(rows, d);
        if h.len() != d {
            return Err(Error::NotIntegral(format!(
                "lattice at weight {} has rank {} < {d}",
                layout.weight(w),
                h.len()
            )));
        }
        let cols: Vec<Vec<Q>> = h
            .into_iter()
            .map(|r| r.into_iter().map(|x| Q::new(x, den.clone())).collect())
            .collect();
        basis.push(Matrix::from_columns(d, &cols, Q::zero()));
    }

    let inverses: Vec<Matrix<Q>> = basis
        .iter()
        .map(|p| inverse(&q, p).expect("lattice basis is invertible"))
        .collect();
    let convert = |op: &GradedOp<Q>, what: &str| -> Result<GradedOp<Q>> {
        let mut out = GradedOp::zero(layout);
        for (src, blk) in op.blocks().iter().enumerate() {
            let Some((tgt, mm)) = blk else { continue };
            let conj = mat_mul(&q, &inverses[*tgt], &mat_mul(&q, mm, &basis[src]));
            if let Some(bad) = conj.data().iter().find(|x| as_integer(x).is_none()) {
                return Err(Error::NotIntegral(format!(
                    "{what} has entry {bad} in lattice coordinates"
                )));
            }
            out.set_block(src, *tgt, conj);
        }
        Ok(out.pruned(&q))
    };
    let mut e_ops = Vec::new();
    let mut f_ops = Vec::new();
    for b in 0..rs.num_positive() {
        for (side, sink) in [(Side::E, &mut e_ops), (Side::F, &mut f_ops)] {
            let tower = (1..=module.max_power(side, b))
                .map(|k| {
                    convert(
                        module.op(side, b, k).expect("in range"),
                        &format!("{side:?}_{b}^({k})"),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            sink.push(tower);
        }
    }
    let lat_module = WeightModule::new(
        q,
        rs.clone(),
        layout.clone(),
        m.lambda.clone(),
        e_ops,
        f_ops,
    );
    Ok(AdmissibleLattice {
        lambda: m.lambda.clone(),
        basis,
        module: lat_module,
    })
}

/// Layout helper shared with the cache: weights and multiplicities in order.
pub(crate) fn layout_entries(layout: &Layout) -> Vec<(Weight, usize)> {
    (0..layout.num_weights())
        .map(|w| (layout.weight(w).clone(), layout.dim_at(w)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_vec;

    fn rs(l: &str) -> Arc<RootSystem> {
        Arc::new(RootSystem::from_label(l).unwrap())
    }

    fn qi(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn a1_chain() {
        let a1 = rs("A1");
        let m = build_hw_module_q(&a1, &Weight(vec![2])).unwrap();
        assert_eq!(m.dim(), 3);
        let f2 = divided_power_matrix(m.module(), Side::F, 0, 2);
        let v = m.module().unit(0);
        let img = mat_vec(&Rationals, &f2, &v);
        assert!(img[0].is_zero() && img[1].is_zero() && !img[2].is_zero());
        let id = divided_power_matrix(m.module(), Side::F, 0, 0);
        assert_eq!(id, identity(&Rationals, 3));
        let lat = admissible_lattice(&m).unwrap();
        let lm = lat.module();
        // in lattice coordinates F^(i) v is the i-th basis vector
        let mut x = lm.unit(0);
        for i in 1..=2 {
            x = lm.apply(Side::F, 0, 1, &x);
            let mut expect = vec![qi(0); 3];
            expect[i] = qi(i as i64);
            assert_eq!(x, expect);
            x = lm.unit(i);
        }
    }

    #[test]
    fn g2_dimensions_and_strings() {
        let g2 = rs("G2");
        let m1 = build_hw_module_q(&g2, &Weight(vec![1, 0])).unwrap();
        assert_eq!(m1.dim(), 7);
        let m2 = build_hw_module_q(&g2, &Weight(vec![0, 1])).unwrap();
        assert_eq!(m2.dim(), 14);
        // <omega_2, alpha_1^vee> = 0 so F_{alpha_1} kills v
        let a1 = g2.simple_position(0);
        let v = m2.module().unit(0);
        assert!(m2
            .module()
            .apply(Side::F, a1, 1, &v)
            .iter()
            .all(|x| x.is_zero()));
        assert!(m2
            .module()
            .apply(Side::F, a1, 2, &v)
            .iter()
            .all(|x| x.is_zero()));
        assert!(contravariant_form_consistent(&m1));
        assert!(contravariant_form_consistent(&m2));
    }

    #[test]
    fn highest_vector_is_killed_by_e() {
        let g2 = rs("G2");
        let m = build_hw_module_q(&g2, &Weight(vec![1, 1])).unwrap();
        let v = m.module().unit(m.highest_vector());
        for b in 0..g2.num_positive() {
            assert!(m
                .module()
                .apply(Side::E, b, 1, &v)
                .iter()
                .all(|x| x.is_zero()));
        }
    }

    #[test]
    fn lattice_is_integral() {
        let g2 = rs("G2");
        for w in [vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0]] {
            let m = build_hw_module_q(&g2, &Weight(w.clone())).unwrap();
            let lat = admissible_lattice(&m).unwrap();
            assert_eq!(lat.rank(), m.dim());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g2 = rs("G2");
        let err = build_hw_module_q_capped(&g2, &Weight(vec![0, 1]), 10).unwrap_err();
        assert!(matches!(
            err,
            Error::ResourceCap {
                required: 14,
                cap: 10,
                ..
            }
        ));
        assert!(build_hw_module_q(&g2, &Weight(vec![-1, 0])).is_err());
    }
}
