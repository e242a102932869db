//! Algebraic model of pushing an object to an ambient one-parameter family:
//! the ambient object is the cone on multiplication by the degree-2
//! obstruction class, its Ext profile against the object is computed at
//! chain level, and an independent long-exact-sequence oracle predicts the
//! same profile purely from the Ext multiplication table.
//!
//! For a P-object with nonzero obstruction class the profile collapses to
//! one-dimensional pieces in degrees `0` and `2n+1` — the sphere profile —
//! and the comparison of the chain-level computation with the table-level
//! oracle is the central cross-validation of this module.

use std::collections::BTreeMap;

use crate::dgmodule::{cone, ModuleRef, Morphism};
use crate::error::{Error, Result};
use crate::hom::{cohomology_dims, ext_ring, hom_complex, ExtClass, ExtRing};

/// The modeled ambient object `C` with its triangle maps
/// `E[1] → C → E → E[2]`; the boundary is the chosen obstruction class.
pub struct AmbientModel {
    base: ModuleRef,
    witness: Morphism,
    pub module: ModuleRef,
    /// `E[1] → C`, closed.
    pub from_shifted: Morphism,
    /// `C → E`, closed; composing with `from_shifted` gives zero on the
    /// nose.
    pub to_base: Morphism,
}

impl AmbientModel {
    /// Build the ambient model from a closed degree-0 witness `E[-2] → E`
    /// (the zero morphism is allowed and models a vanishing obstruction).
    pub fn new(e: &ModuleRef, witness: &Morphism) -> Result<Self> {
        if witness.degree() != 0 {
            return Err(Error::Degree(
                "obstruction witness must be a degree-0 morphism from e[-2]".into(),
            ));
        }
        if !crate::dgmodule::module_eq(witness.source(), &e.shift(-2))
            || !crate::dgmodule::module_eq(witness.target(), e)
        {
            return Err(Error::InvalidMorphism(
                "obstruction witness must map e[-2] to e".into(),
            ));
        }
        if !witness.is_closed() {
            return Err(Error::NotClosed("obstruction witness must be closed".into()));
        }
        // φ = witness shifted to E → E[2]; C = Cone(φ)[-1] completes the
        // rotated triangle E[1] → C → E → E[2].
        let phi = witness.shift(2);
        let c = cone(&phi)?;
        let module = c.module.shift(-1);

        // Cone(φ) comes with E[2] → Cone(φ) and Cone(φ) → E[1]; shifting by
        // -1 gives the two triangle maps of C.
        let from_shifted = shift_morphism_onto(&c.from_target, -1, &module)?;
        let to_base = shift_morphism_from(&c.to_shifted_source, -1, &module, e)?;
        let through = to_base.compose(&from_shifted)?;
        assert!(through.is_zero(), "triangle maps must compose to zero");
        assert!(from_shifted.is_closed() && to_base.is_closed());
        Ok(AmbientModel {
            base: ModuleRef::clone(e),
            witness: witness.clone(),
            module,
            from_shifted,
            to_base,
        })
    }

    pub fn base(&self) -> &ModuleRef {
        &self.base
    }

    pub fn witness(&self) -> &Morphism {
        &self.witness
    }

    /// Graded dimensions of the modeled ambient Ext algebra, computed via
    /// adjunction as the cohomology of `Hom(C, E)`.
    pub fn ext_profile(&self) -> Result<BTreeMap<i64, usize>> {
        Ok(cohomology_dims(
            hom_complex(&self.module, &self.base)?.complex(),
        ))
    }
}

fn shift_morphism_onto(f: &Morphism, k: i64, target: &ModuleRef) -> Result<Morphism> {
    let s = f.shift(k);
    Morphism::new(&f.source().shift(k), target, s.degree(), s.entries().to_vec())
}

fn shift_morphism_from(
    f: &Morphism,
    k: i64,
    source: &ModuleRef,
    base: &ModuleRef,
) -> Result<Morphism> {
    let s = f.shift(k);
    // Target of the shifted projection is E[1][-1] = E.
    Morphism::new(source, base, s.degree(), s.entries().to_vec())
}

/// Predict the ambient profile from the Ext table alone: with `δ` the
/// Yoneda multiplication by the chosen degree-2 class, the long exact
/// sequence of the triangle gives
/// `dim at k = dim coker(δ: Ext^{k-2} → Ext^k) + dim ker(δ: Ext^{k-1} → Ext^{k+1})`.
pub fn les_oracle(ring: &ExtRing, class: &ExtClass) -> Result<BTreeMap<i64, usize>> {
    if class.degree != 2 {
        return Err(Error::Degree(format!(
            "obstruction class must have degree 2, got {}",
            class.degree
        )));
    }
    let dims = ring.dims().clone();
    let dim_at = |k: i64| dims.get(&k).copied().unwrap_or(0);
    let rank_from = |k: i64| -> usize {
        if dim_at(k) == 0 {
            0
        } else {
            ring.left_multiplication_matrix(class, k).rank()
        }
    };
    let mut out = BTreeMap::new();
    let lo = dims.keys().next().copied().unwrap_or(0);
    let hi = dims.keys().next_back().copied().unwrap_or(0);
    for k in lo..=hi + 2 {
        let coker = dim_at(k) - rank_from(k - 2);
        let kernel = dim_at(k - 1) - rank_from(k - 1);
        if coker + kernel > 0 {
            out.insert(k, coker + kernel);
        }
    }
    Ok(out)
}

/// Report comparing the chain-level ambient profile with the oracle and
/// deciding sphericality of the pushforward.
pub struct PushforwardReport {
    /// Number `n` read off from the P-shaped graded dimensions of the Ext
    /// ring (ring structure not required).
    pub n: usize,
    pub chain_profile: BTreeMap<i64, usize>,
    pub oracle_profile: BTreeMap<i64, usize>,
    pub profiles_agree: bool,
    /// True exactly when the chain-level profile is `{0: 1, 2n+1: 1}`.
    pub spherical: bool,
}

/// Build the ambient model for a module whose Ext dimensions look like a
/// projective space (ones in degrees `0, 2, ..., 2n`) and test whether the
/// modeled pushforward is spherical. The witness must be a closed degree-0
/// morphism `e[-2] → e`.
pub fn spherical_after_pushforward(
    e: &ModuleRef,
    witness: &Morphism,
) -> Result<PushforwardReport> {
    let ring = ext_ring(e)?;
    let dims = ring.dims().clone();
    let n = dims.len().saturating_sub(1);
    let p_shaped =
        n >= 1 && dims.len() == n + 1 && (0..=n).all(|k| dims.get(&(2 * k as i64)) == Some(&1));
    if !p_shaped {
        return Err(Error::Unsupported(format!(
            "Ext dimensions {dims:?} do not match any projective profile"
        )));
    }

    let ambient = AmbientModel::new(e, witness)?;
    let chain_profile = ambient.ext_profile()?;

    // Express the witness as a class to feed the table-level oracle.
    let as_endo = Morphism::new(e, e, 2, witness.entries().to_vec())?;
    let class = ring.class_of(&as_endo)?;
    let oracle_profile = les_oracle(&ring, &class)?;

    let mut sphere = BTreeMap::new();
    sphere.insert(0, 1);
    sphere.insert(2 * n as i64 + 1, 1);
    Ok(PushforwardReport {
        n,
        profiles_agree: chain_profile == oracle_profile,
        spherical: chain_profile == sphere,
        chain_profile,
        oracle_profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, BasisElement, GradedAlgebra};
    use crate::dgmodule::{mult_by_element, Morphism, SemifreeModule};
    use crate::field::FieldSpec;
    use crate::hom::module_cohomology_dims;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn dims(pairs: &[(i64, usize)]) -> BTreeMap<i64, usize> {
        pairs.iter().copied().collect()
    }

    fn model(n: usize) -> (ModuleRef, Morphism) {
        let a = GradedAlgebra::truncated_polynomial(n, 2, q()).unwrap();
        let e = SemifreeModule::free(&a, &[0]);
        let h = mult_by_element(&e, &AlgebraElement::basis(&a, 1)).unwrap();
        (e, h)
    }

    #[test]
    fn ambient_cohomology_for_the_p1_model() {
        let (e, h) = model(1);
        let ambient = AmbientModel::new(&e, &h).unwrap();
        assert_eq!(
            module_cohomology_dims(&ambient.module),
            dims(&[(-1, 1), (2, 1)])
        );
    }

    #[test]
    fn ambient_profile_is_spherical_for_projective_models() {
        for n in 1..=3usize {
            let (e, h) = model(n);
            let ambient = AmbientModel::new(&e, &h).unwrap();
            let profile = ambient.ext_profile().unwrap();
            assert_eq!(profile, dims(&[(0, 1), (2 * n as i64 + 1, 1)]));
        }
    }

    #[test]
    fn oracle_matches_chain_level_for_projective_models() {
        for n in 1..=3usize {
            let (e, h) = model(n);
            let report = spherical_after_pushforward(&e, &h).unwrap();
            assert_eq!(report.n, n);
            assert!(report.profiles_agree);
            assert!(report.spherical);
        }
    }

    #[test]
    fn zero_obstruction_splits() {
        let (e, _) = model(1);
        let zero = Morphism::zero(&e.shift(-2), &e, 0).unwrap();
        let report = spherical_after_pushforward(&e, &zero).unwrap();
        assert!(!report.spherical);
        assert!(report.profiles_agree);
        // Split case: the ambient Ext is Ext ⊕ Ext shifted by one.
        assert_eq!(
            report.chain_profile,
            dims(&[(0, 1), (1, 1), (2, 1), (3, 1)])
        );
    }

    fn two_generator_counterexample() -> (ModuleRef, Morphism) {
        // 1, a, b in degrees 0, 2, 4 with all products of a and b zero.
        let z = || q().zero();
        let o = || q().one();
        let basis = vec![
            BasisElement { name: "1".into(), degree: 0 },
            BasisElement { name: "a".into(), degree: 2 },
            BasisElement { name: "b".into(), degree: 4 },
        ];
        let table = vec![
            vec![vec![o(), z(), z()], vec![z(), o(), z()], vec![z(), z(), o()]],
            vec![vec![z(), o(), z()], vec![z(), z(), z()], vec![z(), z(), z()]],
            vec![vec![z(), z(), o()], vec![z(), z(), z()], vec![z(), z(), z()]],
        ];
        let alg = GradedAlgebra::from_table(q(), basis, 0, table, true).unwrap();
        let e = SemifreeModule::free(&alg, &[0]);
        let a = AlgebraElement::basis(&alg, 1);
        let h = mult_by_element(&e, &a).unwrap();
        (e, h)
    }

    #[test]
    fn ring_structure_failure_is_not_spherical() {
        let (e, h) = two_generator_counterexample();
        let report = spherical_after_pushforward(&e, &h).unwrap();
        assert_eq!(report.n, 2);
        assert!(report.profiles_agree);
        assert!(!report.spherical);
        assert_eq!(
            report.chain_profile,
            dims(&[(0, 1), (3, 1), (4, 1), (5, 1)])
        );
    }

    #[test]
    fn oracle_evaluates_the_multiplication_table_only() {
        // Truncated polynomial rings: {0: 1, 2n+1: 1}.
        for n in 1..=3usize {
            let (e, _) = model(n);
            let ring = ext_ring(&e).unwrap();
            let idx = ring.indices_in_degree(2);
            let hbar = ring
                .class_of(&ring.representative(idx[0]).clone())
                .unwrap();
            let predicted = les_oracle(&ring, &hbar).unwrap();
            assert_eq!(predicted, dims(&[(0, 1), (2 * n as i64 + 1, 1)]));
        }
        // Zero class doubles the shifted profile.
        let (e, _) = model(1);
        let ring = ext_ring(&e).unwrap();
        let zero = ExtClass { degree: 2, coeffs: vec![q().zero()] };
        let predicted = les_oracle(&ring, &zero).unwrap();
        assert_eq!(predicted, dims(&[(0, 1), (1, 1), (2, 1), (3, 1)]));
    }

    #[test]
    fn triangle_maps_are_exposed_and_exact() {
        let (e, h) = model(2);
        let ambient = AmbientModel::new(&e, &h).unwrap();
        assert!(ambient.from_shifted.is_closed());
        assert!(ambient.to_base.is_closed());
        // Degree-by-degree rank bookkeeping of the long exact sequence:
        // dim H^k(C) <= dim H^k(E[1]) + dim H^k(E).
        let hc = module_cohomology_dims(&ambient.module);
        let he1 = module_cohomology_dims(&e.shift(1));
        let he = module_cohomology_dims(&e);
        for (&k, &v) in &hc {
            let bound = he1.get(&k).copied().unwrap_or(0) + he.get(&k).copied().unwrap_or(0);
            assert!(v <= bound);
        }
    }
}
