//! Seeded verification sweeps over randomly constructed modules: invariance
//! of the Euler pairing under the P-twist, preservation of Ext dimensions
//! (full faithfulness at the dimension level), and a general construction
//! sweep re-checking the structural invariants of the toolbox.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use ptwist_core::algebra::GradedAlgebra;
use ptwist_core::dgmodule::{
    cone, direct_sum, tensor_with_complex, GradedComplex, ModuleRef, Morphism, SemifreeModule,
};
use ptwist_core::equiv::{euler_char, euler_pairing, is_quasi_iso, minimal_model};
use ptwist_core::error::Result;
use ptwist_core::hom::{cohomology_dims, ext_dims, ext_ring, module_cohomology_dims};
use ptwist_core::sampling::{random_module, sample_closed_morphism};
use ptwist_core::twist::{p_twist, TwistPlan};

pub struct SweepOutcome {
    pub samples: usize,
    pub failures: usize,
    pub details: Vec<String>,
}

impl SweepOutcome {
    fn new(samples: usize) -> Self {
        SweepOutcome {
            samples,
            failures: 0,
            details: Vec::new(),
        }
    }

    fn fail(&mut self, detail: String) {
        self.failures += 1;
        if self.details.len() < 8 {
            self.details.push(detail);
        }
    }
}

/// For seeded random `F`, check `χ(G, F) = χ(G, P_E(F))` for every `G` in
/// the pool.
pub fn euler_invariance_sweep(
    plan: &TwistPlan,
    pool: &[ModuleRef],
    samples: usize,
    max_generators: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SweepOutcome> {
    let algebra = plan.object().algebra();
    let mut out = SweepOutcome::new(samples);
    for s in 0..samples {
        let gens = rng.random_range(1..=max_generators.max(1));
        let f = random_module(algebra, gens, -2, 2, rng)?;
        let pf = p_twist(plan, &f)?;
        for (gi, g) in pool.iter().enumerate() {
            let lhs = euler_pairing(g, &f)?;
            let rhs = euler_pairing(g, &pf)?;
            if lhs != rhs {
                out.fail(format!(
                    "sample {s}, pool object {gi}: pairing {lhs} became {rhs} after the twist"
                ));
            }
        }
    }
    Ok(out)
}

/// For seeded random pairs `(F, G)`, check that the twist preserves all Ext
/// dimensions.
pub fn fully_faithful_sweep(
    plan: &TwistPlan,
    samples: usize,
    max_generators: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SweepOutcome> {
    let algebra = plan.object().algebra();
    let mut out = SweepOutcome::new(samples);
    for s in 0..samples {
        let f = random_module(algebra, rng.random_range(1..=max_generators.max(1)), -2, 2, rng)?;
        let g = random_module(algebra, rng.random_range(1..=max_generators.max(1)), -2, 2, rng)?;
        let lhs = ext_dims(&f, &g)?;
        let rhs = ext_dims(&p_twist(plan, &f)?, &p_twist(plan, &g)?)?;
        if lhs != rhs {
            out.fail(format!(
                "sample {s}: Ext dimensions {lhs:?} became {rhs:?} after the twist"
            ));
        }
    }
    Ok(out)
}

const POOL_CAP: usize = 12;

/// Seeded random constructions (cones, shifts, sums, tensors, twists) with
/// structural checks on each: square-zero is re-asserted by every
/// constructor, cones satisfy Euler additivity, shifts move cohomology,
/// sums add it, tensors with zero-differential complexes stack shifted
/// copies, minimal models come with verified witnesses and the right
/// generator count, and Yoneda composition is associative on samples.
pub fn invariant_sweep(
    algebra: &Arc<GradedAlgebra>,
    constructions: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SweepOutcome> {
    let e = SemifreeModule::free(algebra, &[0]);
    let plan = TwistPlan::for_p_object(&e).ok();
    let mut pool: Vec<ModuleRef> = vec![
        ModuleRef::clone(&e),
        SemifreeModule::free(algebra, &[0, 1]),
        SemifreeModule::free(algebra, &[-1]),
    ];
    let mut out = SweepOutcome::new(constructions);

    for step in 0..constructions {
        let m = pool[rng.random_range(0..pool.len())].clone();
        let n = pool[rng.random_range(0..pool.len())].clone();
        let built: Option<ModuleRef> = match rng.random_range(0..100u32) {
            // Cone of a random closed morphism + Euler additivity.
            0..30 => {
                let f = match sample_closed_morphism(&m, &n, rng)? {
                    Some(f) => f,
                    None => Morphism::zero(&m, &n, 0)?,
                };
                let c = cone(&f)?.module;
                if euler_char(&c) != euler_char(&n) - euler_char(&m) {
                    out.fail(format!("step {step}: cone Euler additivity failed"));
                }
                Some(c)
            }
            // Shift compatibility of cohomology.
            30..50 => {
                let k = rng.random_range(-3..=3i64);
                let s = m.shift(k);
                let base = module_cohomology_dims(&m);
                let shifted = module_cohomology_dims(&s);
                let ok = base.len() == shifted.len()
                    && shifted
                        .iter()
                        .all(|(&d, &v)| base.get(&(d + k)) == Some(&v));
                if !ok {
                    out.fail(format!("step {step}: shift moved cohomology incorrectly"));
                }
                Some(s)
            }
            // Direct sums add cohomology.
            50..62 => {
                let s = direct_sum(&[&m, &n])?;
                let (a, b, c) = (
                    module_cohomology_dims(&m),
                    module_cohomology_dims(&n),
                    module_cohomology_dims(&s),
                );
                let mut want = a.clone();
                for (&d, &v) in &b {
                    *want.entry(d).or_insert(0) += v;
                }
                if c != want {
                    out.fail(format!("step {step}: sum cohomology is not the sum"));
                }
                Some(s)
            }
            // Tensor with a zero-differential complex stacks shifted copies.
            62..72 => {
                let d1 = rng.random_range(-2..=2i64);
                let d2 = rng.random_range(-2..=2i64);
                let v = GradedComplex::with_zero_differential(algebra.field(), &[d1, d2]);
                let t = tensor_with_complex(&v, &m)?;
                let base = module_cohomology_dims(&m);
                let mut want = std::collections::BTreeMap::new();
                for d in [d1, d2] {
                    for (&k, &v) in &base {
                        *want.entry(k + d).or_insert(0) += v;
                    }
                }
                if module_cohomology_dims(&t) != want {
                    out.fail(format!("step {step}: tensor cohomology mismatch"));
                }
                Some(t)
            }
            // Twist by the plan object; the constructor asserts strictness.
            72..82 => match &plan {
                Some(plan) if m.rank() <= 4 => Some(p_twist(plan, &m)?),
                _ => Some(m.shift(1)),
            },
            // Minimal model: verified witnesses, cohomology preserved,
            // generator count matches the augmented complex.
            82..92 => {
                let res = minimal_model(&m)?;
                if module_cohomology_dims(&res.module) != module_cohomology_dims(&m) {
                    out.fail(format!("step {step}: reduction changed cohomology"));
                }
                if !is_quasi_iso(&res.to_minimal)?.verdict
                    || !is_quasi_iso(&res.from_minimal)?.verdict
                {
                    out.fail(format!("step {step}: unverified reduction witness"));
                }
                let aug = ptwist_core::equiv::augmentation_complex(&m);
                let count: usize = cohomology_dims(&aug).values().sum();
                if res.module.rank() != count {
                    out.fail(format!("step {step}: reduction size disagrees with count"));
                }
                Some(res.module)
            }
            // Yoneda associativity samples on a small pool object.
            _ => {
                if m.rank() <= 2 {
                    let ring = ext_ring(&m)?;
                    let t = ring.total_dim();
                    if t > 0 {
                        for _ in 0..3 {
                            let i = rng.random_range(0..t);
                            let j = rng.random_range(0..t);
                            let k = rng.random_range(0..t);
                            let ij = ring.representative(i).compose(ring.representative(j))?;
                            let lhs = ring.class_of(&ij.compose(ring.representative(k))?)?;
                            let jk = ring.representative(j).compose(ring.representative(k))?;
                            let rhs = ring.class_of(&ring.representative(i).compose(&jk)?)?;
                            if lhs != rhs {
                                out.fail(format!("step {step}: Yoneda associativity failed"));
                            }
                        }
                    }
                }
                None
            }
        };
        if let Some(b) = built {
            if b.rank() > 0 && b.rank() <= POOL_CAP {
                pool.push(b);
            }
        }
        if pool.len() > 24 {
            pool.drain(0..8);
        }
    }
    Ok(out)
}
