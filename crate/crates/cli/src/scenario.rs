//! Scenario files: a JSON schema describing a field, named algebras,
//! modules and morphisms (either literal or built by constructor
//! expressions), and a list of verification tasks with optional expectation
//! blocks.
//!
//! Parsing is strict (`deny_unknown_fields`); validation resolves every
//! name, materializes every object through the core constructors (which
//! re-check all invariants) and reports precise errors with a JSON-path
//! location and a stable error code. Random constructions draw from a
//! stream seeded by the scenario seed, consumed in sorted-name order for
//! definitions and in task order afterwards, so a scenario materializes
//! identically on every run.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use ptwist_core::algebra::{AlgebraElement, BasisElement, GradedAlgebra};
use ptwist_core::dgmodule::{
    cone, direct_sum, mult_by_element, Generator, ModuleRef, Morphism, SemifreeModule,
};
use ptwist_core::field::FieldSpec;
use ptwist_core::sampling::random_module;
use ptwist_core::twist::{double_twist, p_twist, spherical_twist, TwistPlan};

pub const SCHEMA_VERSION: u32 = 1;

/// Task name reserved for a future ambient-category extension; accepted by
/// the parser, rejected by validation.
pub const RESERVED_TASK: &str = "pushforward_intertwine";

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error [{code}]: {message}")]
    Parse { code: &'static str, message: String },
    #[error("validation error [{code}] at {location}: {message}")]
    Validation {
        code: &'static str,
        location: String,
        message: String,
    },
}

impl ScenarioError {
    pub fn exit_code(&self) -> u8 {
        match self {
            ScenarioError::Parse { .. } => 2,
            ScenarioError::Validation { .. } => 3,
        }
    }

    fn invalid(code: &'static str, location: &str, message: impl ToString) -> Self {
        ScenarioError::Validation {
            code,
            location: location.to_string(),
            message: message.to_string(),
        }
    }

    pub fn from_core(location: &str, err: ptwist_core::Error) -> Self {
        use ptwist_core::Error as E;
        let code = match &err {
            E::NotPrime(_) | E::ModulusRange(_) => "not_prime",
            E::Degree(_) => "invalid_degree",
            E::InvalidModule(_) => "invalid_module",
            E::InvalidMorphism(_) => "invalid_morphism",
            E::InvalidAlgebra(_) => "invalid_algebra",
            E::NotClosed(_) => "not_closed",
            E::NotCentral | E::NotHomogeneous => "bad_element",
            E::FieldMismatch => "field_mismatch",
            E::AlgebraMismatch => "algebra_mismatch",
            _ => "core",
        };
        ScenarioError::invalid(code, location, err)
    }
}

pub type SResult<T> = Result<T, ScenarioError>;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statement: Option<String>,
    pub field: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraExpr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleExpr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismExpr>,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Int(i64),
    Str(String),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: CoeffSpec,
    pub basis: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraExpr {
    TruncatedPolynomial { n: usize, degree: i64 },
    Spherical { degree: i64 },
    Product { factors: Vec<String> },
    Table(TableSpec),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub basis: Vec<(String, i64)>,
    pub unit: String,
    /// Products of non-unit basis pairs; omitted pairs are zero, products
    /// with the unit are implied.
    #[serde(default)]
    pub products: Vec<ProductSpec>,
    #[serde(default)]
    pub graded_commutative: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub left: String,
    pub right: String,
    pub terms: Vec<TermSpec>,
}

/// A module argument: a declared name or an inline constructor expression.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ModRef {
    Name(String),
    Inline(Box<ModuleExpr>),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleExpr {
    Free {
        algebra: String,
        degrees: Vec<i64>,
    },
    Literal {
        algebra: String,
        generators: Vec<(String, i64)>,
        #[serde(default)]
        differential: Vec<EntrySpec>,
    },
    Shift {
        of: ModRef,
        by: i64,
    },
    Cone {
        of: MorRef,
    },
    DirectSum {
        of: Vec<ModRef>,
    },
    Random {
        algebra: String,
        generators: usize,
        min_degree: i64,
        max_degree: i64,
    },
    SphericalTwist {
        twist_by: ModRef,
        apply_to: ModRef,
    },
    PTwist {
        twist_by: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<String>,
        apply_to: ModRef,
    },
    DoubleTwist {
        twist_by: ModRef,
        apply_to: ModRef,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    /// Generator whose differential (or image) is being described.
    pub from: String,
    /// Generator receiving the listed coefficient.
    pub to: String,
    pub terms: Vec<TermSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum MorRef {
    Name(String),
    Inline(Box<MorphismExpr>),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MorphismExpr {
    MultByElement { module: ModRef, element: Vec<TermSpec> },
    Zero { source: ModRef, target: ModRef, degree: i64 },
    Literal {
        source: ModRef,
        target: ModRef,
        degree: i64,
        #[serde(default)]
        entries: Vec<EntrySpec>,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DimsExpect {
    /// Degree → dimension; keys are decimal strings because the schema
    /// travels through tagged JSON.
    pub dims: BTreeMap<String, usize>,
}

impl DimsExpect {
    pub fn degrees(&self) -> Result<BTreeMap<i64, usize>, String> {
        let mut out = BTreeMap::new();
        for (k, &v) in &self.dims {
            let d: i64 = k
                .parse()
                .map_err(|_| format!("bad degree key `{k}` in expectation"))?;
            out.insert(d, v);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ValueExpect<T> {
    pub value: T,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyExpect {
    /// One of `p_object`, `spherical`, `both`, `neither`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    /// `ring_structure` or `dimension_mismatch`, for `neither`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MinimalExpect {
    pub generator_degrees: Vec<i64>,
    #[serde(default)]
    pub differential_is_zero: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeExpect {
    /// `found` or `obstructed`.
    pub outcome: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SphericalExpect {
    pub spherical: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FailuresExpect {
    pub failures: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "task", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskSpec {
    Classify {
        object: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<ClassifyExpect>,
    },
    ExtDims {
        source: ModRef,
        target: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<DimsExpect>,
    },
    CohomologyDims {
        object: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<DimsExpect>,
    },
    IsAcyclic {
        object: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<ValueExpect<bool>>,
    },
    EulerChar {
        object: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<ValueExpect<i64>>,
    },
    EulerPairing {
        left: ModRef,
        right: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<ValueExpect<i64>>,
    },
    MinimalModel {
        object: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        store: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<MinimalExpect>,
    },
    FindQuasiIso {
        source: ModRef,
        target: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        attempts: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<OutcomeExpect>,
    },
    SphericalTwist {
        twist_by: ModRef,
        apply_to: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        store: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<DimsExpect>,
    },
    PTwist {
        twist_by: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<String>,
        apply_to: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        store: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<DimsExpect>,
    },
    DoubleTwist {
        twist_by: ModRef,
        apply_to: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        store: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<DimsExpect>,
    },
    AmbientProfile {
        object: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<DimsExpect>,
    },
    LesOracle {
        object: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<DimsExpect>,
    },
    SphericalAfterPushforward {
        object: ModRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<SphericalExpect>,
    },
    EulerInvarianceSweep {
        twist_by: ModRef,
        pool: Vec<ModRef>,
        samples: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_generators: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<FailuresExpect>,
    },
    FullyFaithfulSweep {
        twist_by: ModRef,
        samples: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_generators: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<FailuresExpect>,
    },
    InvariantSweep {
        algebra: String,
        constructions: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<FailuresExpect>,
    },
    PushforwardIntertwine {},
}

impl TaskSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TaskSpec::Classify { .. } => "classify",
            TaskSpec::ExtDims { .. } => "ext_dims",
            TaskSpec::CohomologyDims { .. } => "cohomology_dims",
            TaskSpec::IsAcyclic { .. } => "is_acyclic",
            TaskSpec::EulerChar { .. } => "euler_char",
            TaskSpec::EulerPairing { .. } => "euler_pairing",
            TaskSpec::MinimalModel { .. } => "minimal_model",
            TaskSpec::FindQuasiIso { .. } => "find_quasi_iso",
            TaskSpec::SphericalTwist { .. } => "spherical_twist",
            TaskSpec::PTwist { .. } => "p_twist",
            TaskSpec::DoubleTwist { .. } => "double_twist",
            TaskSpec::AmbientProfile { .. } => "ambient_profile",
            TaskSpec::LesOracle { .. } => "les_oracle",
            TaskSpec::SphericalAfterPushforward { .. } => "spherical_after_pushforward",
            TaskSpec::EulerInvarianceSweep { .. } => "euler_invariance_sweep",
            TaskSpec::FullyFaithfulSweep { .. } => "fully_faithful_sweep",
            TaskSpec::InvariantSweep { .. } => "invariant_sweep",
            TaskSpec::PushforwardIntertwine {} => RESERVED_TASK,
        }
    }
}

/// Parse the JSON document without resolving names.
pub fn parse_scenario(text: &str) -> SResult<ScenarioDoc> {
    serde_json::from_str::<ScenarioDoc>(text).map_err(|e| {
        let msg = e.to_string();
        // The task enum is the only one whose variant list contains
        // `classify`, which lets us tell a bad task name apart from a bad
        // constructor expression.
        let code = if msg.contains("unknown variant") && msg.contains("`classify`") {
            "unknown_task"
        } else if msg.contains("unknown variant") {
            "unknown_expression"
        } else if msg.contains("unknown field") {
            "unknown_field"
        } else {
            "bad_json"
        };
        ScenarioError::Parse {
            code,
            message: format!("{msg} (line {}, column {})", e.line(), e.column()),
        }
    })
}

/// A fully materialized scenario: every named object is built and
/// validated, and the RNG for later random draws is positioned after the
/// definition-time draws.
pub struct Scenario {
    pub field: FieldSpec,
    pub seed: u64,
    pub warnings: Vec<String>,
    pub ws: Workspace,
}

/// Name-resolution context shared by materialization and the task runner:
/// holds every built object and the scenario RNG stream.
pub struct Workspace {
    doc: ScenarioDoc,
    pub field: FieldSpec,
    pub algebras: BTreeMap<String, Arc<GradedAlgebra>>,
    pub modules: BTreeMap<String, ModuleRef>,
    pub morphisms: BTreeMap<String, Morphism>,
    in_progress: BTreeSet<String>,
    pub rng: ChaCha8Rng,
}

impl Workspace {
    pub fn doc(&self) -> &ScenarioDoc {
        &self.doc
    }

    /// Register a task output under a fresh name.
    pub fn store_module(&mut self, name: &str, m: ModuleRef) {
        self.modules.insert(name.to_string(), m);
    }

    fn scalar(&self, c: &CoeffSpec, loc: &str) -> SResult<ptwist_core::Scalar> {
        match c {
            CoeffSpec::Int(n) => Ok(self.field.from_i64(*n)),
            CoeffSpec::Str(s) => self
                .field
                .scalar_from_str(s)
                .map_err(|e| ScenarioError::invalid("bad_scalar", loc, e)),
        }
    }

    fn element(
        &self,
        algebra: &Arc<GradedAlgebra>,
        terms: &[TermSpec],
        loc: &str,
    ) -> SResult<AlgebraElement> {
        let mut coeffs = vec![self.field.zero(); algebra.dim()];
        for t in terms {
            let idx = algebra.basis_index(&t.basis).ok_or_else(|| {
                ScenarioError::invalid(
                    "unresolved_reference",
                    loc,
                    format!("unknown algebra basis element `{}`", t.basis),
                )
            })?;
            coeffs[idx] = self
                .field
                .add(&coeffs[idx], &self.scalar(&t.coeff, loc)?);
        }
        AlgebraElement::from_coeffs(algebra, coeffs)
            .map_err(|e| ScenarioError::from_core(loc, e))
    }

    pub fn algebra(&mut self, name: &str) -> SResult<Arc<GradedAlgebra>> {
        if let Some(a) = self.algebras.get(name) {
            return Ok(Arc::clone(a));
        }
        let loc = format!("algebras.{name}");
        let expr = self
            .doc
            .algebras
            .get(name)
            .ok_or_else(|| {
                ScenarioError::invalid(
                    "unresolved_reference",
                    &loc,
                    format!("unknown algebra `{name}`"),
                )
            })?
            .clone();
        if !self.in_progress.insert(format!("a:{name}")) {
            return Err(ScenarioError::invalid("cycle", &loc, "cyclic definition"));
        }
        let built = self.build_algebra(&expr, &loc)?;
        self.in_progress.remove(&format!("a:{name}"));
        self.algebras.insert(name.to_string(), Arc::clone(&built));
        Ok(built)
    }

    fn build_algebra(&mut self, expr: &AlgebraExpr, loc: &str) -> SResult<Arc<GradedAlgebra>> {
        match expr {
            AlgebraExpr::TruncatedPolynomial { n, degree } => {
                GradedAlgebra::truncated_polynomial(*n, *degree, self.field)
                    .map_err(|e| ScenarioError::from_core(loc, e))
            }
            AlgebraExpr::Spherical { degree } => GradedAlgebra::spherical(*degree, self.field)
                .map_err(|e| ScenarioError::from_core(loc, e)),
            AlgebraExpr::Product { factors } => {
                if factors.len() != 2 {
                    return Err(ScenarioError::invalid(
                        "invalid_algebra",
                        loc,
                        "product takes exactly two factors",
                    ));
                }
                let a = self.algebra(&factors[0])?;
                let b = self.algebra(&factors[1])?;
                GradedAlgebra::product(&a, &b).map_err(|e| ScenarioError::from_core(loc, e))
            }
            AlgebraExpr::Table(spec) => self.build_table(spec, loc),
        }
    }

    fn build_table(&self, spec: &TableSpec, loc: &str) -> SResult<Arc<GradedAlgebra>> {
        let dim = spec.basis.len();
        let index: BTreeMap<&str, usize> = spec
            .basis
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.as_str(), i))
            .collect();
        let unit = *index.get(spec.unit.as_str()).ok_or_else(|| {
            ScenarioError::invalid(
                "unresolved_reference",
                loc,
                format!("unit `{}` is not a basis element", spec.unit),
            )
        })?;
        let mut table = vec![vec![vec![self.field.zero(); dim]; dim]; dim];
        for i in 0..dim {
            table[unit][i][i] = self.field.one();
            if i != unit {
                table[i][unit][i] = self.field.one();
            }
        }
        for p in &spec.products {
            let li = *index.get(p.left.as_str()).ok_or_else(|| {
                ScenarioError::invalid(
                    "unresolved_reference",
                    loc,
                    format!("unknown basis element `{}`", p.left),
                )
            })?;
            let ri = *index.get(p.right.as_str()).ok_or_else(|| {
                ScenarioError::invalid(
                    "unresolved_reference",
                    loc,
                    format!("unknown basis element `{}`", p.right),
                )
            })?;
            if li == unit || ri == unit {
                return Err(ScenarioError::invalid(
                    "invalid_algebra",
                    loc,
                    "products with the unit are implied and cannot be overridden",
                ));
            }
            let mut v = vec![self.field.zero(); dim];
            for t in &p.terms {
                let k = *index.get(t.basis.as_str()).ok_or_else(|| {
                    ScenarioError::invalid(
                        "unresolved_reference",
                        loc,
                        format!("unknown basis element `{}`", t.basis),
                    )
                })?;
                v[k] = self.field.add(&v[k], &self.scalar(&t.coeff, loc)?);
            }
            table[li][ri] = v;
        }
        let basis = spec
            .basis
            .iter()
            .map(|(name, degree)| BasisElement {
                name: name.clone(),
                degree: *degree,
            })
            .collect();
        GradedAlgebra::from_table(self.field, basis, unit, table, spec.graded_commutative)
            .map_err(|e| ScenarioError::from_core(loc, e))
    }

    pub fn module_by_name(&mut self, name: &str) -> SResult<ModuleRef> {
        if let Some(m) = self.modules.get(name) {
            return Ok(ModuleRef::clone(m));
        }
        let loc = format!("modules.{name}");
        let expr = self
            .doc
            .modules
            .get(name)
            .ok_or_else(|| {
                ScenarioError::invalid(
                    "unresolved_reference",
                    &loc,
                    format!("unknown module `{name}`"),
                )
            })?
            .clone();
        if !self.in_progress.insert(format!("m:{name}")) {
            return Err(ScenarioError::invalid("cycle", &loc, "cyclic definition"));
        }
        let built = self.build_module(&expr, &loc)?;
        self.in_progress.remove(&format!("m:{name}"));
        self.modules.insert(name.to_string(), ModuleRef::clone(&built));
        Ok(built)
    }

    pub fn module(&mut self, r: &ModRef, loc: &str) -> SResult<ModuleRef> {
        match r {
            ModRef::Name(n) => self.module_by_name(n),
            ModRef::Inline(e) => self.build_module(e, loc),
        }
    }

    fn build_module(&mut self, expr: &ModuleExpr, loc: &str) -> SResult<ModuleRef> {
        match expr {
            ModuleExpr::Free { algebra, degrees } => {
                let a = self.algebra(algebra)?;
                Ok(SemifreeModule::free(&a, degrees))
            }
            ModuleExpr::Literal {
                algebra,
                generators,
                differential,
            } => {
                let a = self.algebra(algebra)?;
                let gens: Vec<Generator> = generators
                    .iter()
                    .map(|(name, degree)| Generator {
                        name: name.clone(),
                        degree: *degree,
                    })
                    .collect();
                let index: BTreeMap<&str, usize> = generators
                    .iter()
                    .enumerate()
                    .map(|(i, (n, _))| (n.as_str(), i))
                    .collect();
                let r = gens.len();
                let mut diff = vec![AlgebraElement::zero(&a); r * r];
                for e in differential {
                    let j = *index.get(e.from.as_str()).ok_or_else(|| {
                        ScenarioError::invalid(
                            "unresolved_reference",
                            loc,
                            format!("unknown generator `{}`", e.from),
                        )
                    })?;
                    let i = *index.get(e.to.as_str()).ok_or_else(|| {
                        ScenarioError::invalid(
                            "unresolved_reference",
                            loc,
                            format!("unknown generator `{}`", e.to),
                        )
                    })?;
                    let elt = self.element(&a, &e.terms, loc)?;
                    diff[i * r + j] = diff[i * r + j]
                        .add(&elt)
                        .map_err(|er| ScenarioError::from_core(loc, er))?;
                }
                SemifreeModule::new(&a, gens, diff).map_err(|e| ScenarioError::from_core(loc, e))
            }
            ModuleExpr::Shift { of, by } => Ok(self.module(of, loc)?.shift(*by)),
            ModuleExpr::Cone { of } => {
                let f = self.morphism(of, loc)?;
                Ok(cone(&f)
                    .map_err(|e| ScenarioError::from_core(loc, e))?
                    .module)
            }
            ModuleExpr::DirectSum { of } => {
                let mods: Vec<ModuleRef> = of
                    .iter()
                    .map(|r| self.module(r, loc))
                    .collect::<SResult<_>>()?;
                let refs: Vec<&ModuleRef> = mods.iter().collect();
                direct_sum(&refs).map_err(|e| ScenarioError::from_core(loc, e))
            }
            ModuleExpr::Random {
                algebra,
                generators,
                min_degree,
                max_degree,
            } => {
                let a = self.algebra(algebra)?;
                let mut rng = self.rng.clone();
                let m = random_module(&a, *generators, *min_degree, *max_degree, &mut rng)
                    .map_err(|e| ScenarioError::from_core(loc, e))?;
                self.rng = rng;
                Ok(m)
            }
            ModuleExpr::SphericalTwist { twist_by, apply_to } => {
                let e = self.module(twist_by, loc)?;
                let f = self.module(apply_to, loc)?;
                spherical_twist(&e, &f).map_err(|er| ScenarioError::from_core(loc, er))
            }
            ModuleExpr::PTwist {
                twist_by,
                witness,
                apply_to,
            } => {
                let e = self.module(twist_by, loc)?;
                let f = self.module(apply_to, loc)?;
                let plan = self.plan(&e, witness.as_deref(), loc)?;
                p_twist(&plan, &f).map_err(|er| ScenarioError::from_core(loc, er))
            }
            ModuleExpr::DoubleTwist { twist_by, apply_to } => {
                let e = self.module(twist_by, loc)?;
                let f = self.module(apply_to, loc)?;
                double_twist(&e, &f).map_err(|er| ScenarioError::from_core(loc, er))
            }
        }
    }

    pub fn morphism_by_name(&mut self, name: &str) -> SResult<Morphism> {
        if let Some(f) = self.morphisms.get(name) {
            return Ok(f.clone());
        }
        let loc = format!("morphisms.{name}");
        let expr = self
            .doc
            .morphisms
            .get(name)
            .ok_or_else(|| {
                ScenarioError::invalid(
                    "unresolved_reference",
                    &loc,
                    format!("unknown morphism `{name}`"),
                )
            })?
            .clone();
        if !self.in_progress.insert(format!("f:{name}")) {
            return Err(ScenarioError::invalid("cycle", &loc, "cyclic definition"));
        }
        let built = self.build_morphism(&expr, &loc)?;
        self.in_progress.remove(&format!("f:{name}"));
        self.morphisms.insert(name.to_string(), built.clone());
        Ok(built)
    }

    pub fn morphism(&mut self, r: &MorRef, loc: &str) -> SResult<Morphism> {
        match r {
            MorRef::Name(n) => self.morphism_by_name(n),
            MorRef::Inline(e) => self.build_morphism(e, loc),
        }
    }

    fn build_morphism(&mut self, expr: &MorphismExpr, loc: &str) -> SResult<Morphism> {
        match expr {
            MorphismExpr::MultByElement { module, element } => {
                let m = self.module(module, loc)?;
                let a = self.element(m.algebra(), element, loc)?;
                mult_by_element(&m, &a).map_err(|e| ScenarioError::from_core(loc, e))
            }
            MorphismExpr::Zero {
                source,
                target,
                degree,
            } => {
                let s = self.module(source, loc)?;
                let t = self.module(target, loc)?;
                Morphism::zero(&s, &t, *degree).map_err(|e| ScenarioError::from_core(loc, e))
            }
            MorphismExpr::Literal {
                source,
                target,
                degree,
                entries,
            } => {
                let s = self.module(source, loc)?;
                let t = self.module(target, loc)?;
                let sidx: BTreeMap<&str, usize> = s
                    .generators()
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (g.name.as_str(), i))
                    .collect();
                let tidx: BTreeMap<&str, usize> = t
                    .generators()
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (g.name.as_str(), i))
                    .collect();
                let mut mat = vec![AlgebraElement::zero(s.algebra()); t.rank() * s.rank()];
                for e in entries {
                    let j = *sidx.get(e.from.as_str()).ok_or_else(|| {
                        ScenarioError::invalid(
                            "unresolved_reference",
                            loc,
                            format!("unknown source generator `{}`", e.from),
                        )
                    })?;
                    let i = *tidx.get(e.to.as_str()).ok_or_else(|| {
                        ScenarioError::invalid(
                            "unresolved_reference",
                            loc,
                            format!("unknown target generator `{}`", e.to),
                        )
                    })?;
                    let elt = self.element(s.algebra(), &e.terms, loc)?;
                    mat[i * s.rank() + j] = mat[i * s.rank() + j]
                        .add(&elt)
                        .map_err(|er| ScenarioError::from_core(loc, er))?;
                }
                Morphism::new(&s, &t, *degree, mat)
                    .map_err(|e| ScenarioError::from_core(loc, e))
            }
        }
    }

    /// Build a twist plan from a witness spec: `auto` (default) uses the
    /// classifier's witness, `zero` the zero morphism, anything else names
    /// a declared morphism `e[-2] → e`.
    pub fn plan(&mut self, e: &ModuleRef, witness: Option<&str>, loc: &str) -> SResult<TwistPlan> {
        match witness.unwrap_or("auto") {
            "auto" => TwistPlan::for_p_object(e).map_err(|er| ScenarioError::from_core(loc, er)),
            "zero" => {
                let z = Morphism::zero(&e.shift(-2), e, 0)
                    .map_err(|er| ScenarioError::from_core(loc, er))?;
                TwistPlan::new(e, z).map_err(|er| ScenarioError::from_core(loc, er))
            }
            name => {
                let f = self.morphism_by_name(name)?;
                TwistPlan::new(e, f).map_err(|er| ScenarioError::from_core(loc, er))
            }
        }
    }

    /// The witness morphism itself (for the degeneration tasks).
    pub fn witness_morphism(
        &mut self,
        e: &ModuleRef,
        witness: Option<&str>,
        loc: &str,
    ) -> SResult<Morphism> {
        Ok(self.plan(e, witness, loc)?.witness().clone())
    }
}

/// Validate and materialize a parsed document. `field_override` and
/// `seed_override` implement the CLI flags.
pub fn materialize(
    doc: ScenarioDoc,
    field_override: Option<FieldSpec>,
    seed_override: Option<u64>,
) -> SResult<Scenario> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(ScenarioError::invalid(
            "schema_version",
            "schema_version",
            format!(
                "unsupported schema version {}, expected {}",
                doc.schema_version, SCHEMA_VERSION
            ),
        ));
    }
    let field = match field_override {
        Some(f) => f,
        None => FieldSpec::from_str(&doc.field).map_err(|e| match e {
            ptwist_core::Error::NotPrime(_) | ptwist_core::Error::ModulusRange(_) => {
                ScenarioError::invalid("not_prime", "field", e)
            }
            other => ScenarioError::invalid("bad_field", "field", other),
        })?,
    };
    let seed = seed_override.unwrap_or(doc.seed);

    // Reserved and stored-name checks before any construction.
    let mut known: BTreeSet<String> = doc.modules.keys().cloned().collect();
    for (i, t) in doc.tasks.iter().enumerate() {
        if t.name() == RESERVED_TASK {
            return Err(ScenarioError::invalid(
                "reserved_task",
                &format!("tasks[{i}]"),
                "this task name is reserved for a future ambient-algebra extension",
            ));
        }
        let store = match t {
            TaskSpec::MinimalModel { store, .. }
            | TaskSpec::SphericalTwist { store, .. }
            | TaskSpec::PTwist { store, .. }
            | TaskSpec::DoubleTwist { store, .. } => store.clone(),
            _ => None,
        };
        if let Some(s) = store {
            if !known.insert(s.clone()) {
                return Err(ScenarioError::invalid(
                    "duplicate_name",
                    &format!("tasks[{i}].store"),
                    format!("name `{s}` is already defined"),
                ));
            }
        }
        let dims_expect = match t {
            TaskSpec::ExtDims { expect, .. }
            | TaskSpec::CohomologyDims { expect, .. }
            | TaskSpec::SphericalTwist { expect, .. }
            | TaskSpec::PTwist { expect, .. }
            | TaskSpec::DoubleTwist { expect, .. }
            | TaskSpec::AmbientProfile { expect, .. }
            | TaskSpec::LesOracle { expect, .. } => expect.as_ref(),
            _ => None,
        };
        if let Some(e) = dims_expect {
            e.degrees().map_err(|m| {
                ScenarioError::invalid("bad_degree", &format!("tasks[{i}].expect"), m)
            })?;
        }
    }

    let mut b = Workspace {
        doc: doc.clone(),
        field,
        algebras: BTreeMap::new(),
        modules: BTreeMap::new(),
        morphisms: BTreeMap::new(),
        in_progress: BTreeSet::new(),
        rng: ChaCha8Rng::seed_from_u64(seed),
    };

    let algebra_names: Vec<String> = doc.algebras.keys().cloned().collect();
    for name in algebra_names {
        b.algebra(&name)?;
    }
    let module_names: Vec<String> = doc.modules.keys().cloned().collect();
    for name in module_names {
        b.module_by_name(&name)?;
    }
    let morphism_names: Vec<String> = doc.morphisms.keys().cloned().collect();
    for name in morphism_names {
        b.morphism_by_name(&name)?;
    }

    // Characteristic guard: over a small prime field, degree spans of the
    // scenario can collapse binomial-type structure constants.
    let mut warnings = Vec::new();
    if let FieldSpec::Prime(p) = field {
        let mut span: i64 = 0;
        for a in b.algebras.values() {
            span = span.max(a.max_degree().abs());
        }
        for m in b.modules.values() {
            let degs: Vec<i64> = m.generators().iter().map(|g| g.degree).collect();
            if let (Some(lo), Some(hi)) = (degs.iter().min(), degs.iter().max()) {
                span = span.max(hi - lo);
            }
        }
        if (p as i64) <= 2 * span {
            warnings.push(format!(
                "characteristic {p} is small for the degrees involved (span {span}); \
                 structure constants may collapse"
            ));
        }
    }

    Ok(Scenario {
        field,
        seed,
        warnings,
        ws: b,
    })
}
