//! Semifree differential-graded modules over a graded algebra, morphisms
//! between them, and the elementary constructions: shift, cone, direct sum,
//! tensor with a complex of scalars, multiplication by a graded-central
//! element.
//!
//! All sign conventions live here:
//!
//! * Modules are left modules and the differential obeys the Koszul rule
//!   `d(a·x) = (-1)^{|a|} a·d(x)`; a morphism of degree `t` acts by
//!   `f(a·x) = (-1)^{t|a|} a·f(x)`.
//! * A module is presented by generators `g_j` and a matrix `D` with
//!   `d(g_j) = Σ_i D[i][j]·g_i`; each nonzero `D[i][j]` is homogeneous of
//!   degree `|g_j| + 1 - |g_i|`. The differential squares to zero in the
//!   signed sense below.
//! * A morphism `f` of degree `t` has matrix `F[i][j]` homogeneous of degree
//!   `|g_j| + t - |g_i|`, and composition of `f` (applied second) with `g`
//!   (applied first) has matrix
//!   `(f∘g)[k][j] = Σ_i (-1)^{t·|G[i][j]|} G[i][j]·F[k][i]`,
//!   which is what the action convention above forces. Over an
//!   even-concentrated algebra every sign is `+1` and this is the plain
//!   matrix product.
//! * The Hom differential is `∂f = d_N∘f - (-1)^{t} f∘d_M`; `d² = 0` is the
//!   statement `d∘d = 0` for `d` viewed as a degree-1 morphism.
//! * Shift: `M[k]^i = M^{i+k}`, so generator degrees drop by `k`. Writing
//!   `M[k] = s^k M` with an odd suspension `s` forces the differential
//!   entry `(i, j)` to pick up `(-1)^{k(1+|entry|)}`; over an
//!   even-concentrated algebra every entry has even degree and this is the
//!   familiar global `(-1)^k`. A degree-`t` morphism shifts entrywise by
//!   `(-1)^{k(t+|entry|)}`.
//! * Cone of a closed degree-0 morphism `f: M → N`: generators of `N`
//!   followed by generators of `M` shifted by one, with
//!   `d(n, m) = (d_N n + f m, d_{M[1]} m)`, so the triangle
//!   `M → N → Cone(f) → M[1]` holds on the nose; over an even-concentrated
//!   algebra the second block is the usual `-d_M`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{AlgebraElement, GradedAlgebra, Homogeneity};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// A finite free graded module with a square-zero degree `+1` differential.
#[derive(Clone, Debug, PartialEq)]
pub struct SemifreeModule {
    algebra: Arc<GradedAlgebra>,
    generators: Vec<Generator>,
    /// Row-major `r × r`; entry `(i, j)` is the coefficient of generator `i`
    /// in `d(generator j)`.
    diff: Vec<AlgebraElement>,
}

pub type ModuleRef = Arc<SemifreeModule>;

/// A matrix of algebra elements between two modules, of a fixed degree.
/// Closedness is a predicate, not an invariant; degree-homogeneity of the
/// entries is enforced at construction.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: ModuleRef,
    target: ModuleRef,
    degree: i64,
    /// Row-major `target.rank() × source.rank()`.
    entries: Vec<AlgebraElement>,
}

/// A finite complex of scalars: graded basis, square-zero differential of
/// degree `+1` given as a scalar matrix (`d(basis_p) = Σ_q D[q][p]·basis_q`).
#[derive(Clone, Debug, PartialEq)]
pub struct GradedComplex {
    field: FieldSpec,
    basis: Vec<Generator>,
    d: Matrix,
}

/// A mapping cone together with its canonical closed maps.
pub struct Cone {
    pub module: ModuleRef,
    /// `N → Cone(f)`.
    pub from_target: Morphism,
    /// `Cone(f) → M[1]`.
    pub to_shifted_source: Morphism,
}

fn required_entry_degree(src: &Generator, tgt: &Generator, t: i64) -> i64 {
    src.degree + t - tgt.degree
}

impl SemifreeModule {
    pub fn new(
        algebra: &Arc<GradedAlgebra>,
        generators: Vec<Generator>,
        diff: Vec<AlgebraElement>,
    ) -> Result<ModuleRef> {
        let r = generators.len();
        if diff.len() != r * r {
            return Err(Error::InvalidModule(format!(
                "differential must be {r}x{r}, got {} entries",
                diff.len()
            )));
        }
        let m = SemifreeModule {
            algebra: Arc::clone(algebra),
            generators,
            diff,
        };
        m.validate()?;
        Ok(Arc::new(m))
    }

    /// Free module with zero differential, one generator per listed degree.
    pub fn free(algebra: &Arc<GradedAlgebra>, degrees: &[i64]) -> ModuleRef {
        let generators = degrees
            .iter()
            .enumerate()
            .map(|(i, &degree)| Generator {
                name: format!("g{i}"),
                degree,
            })
            .collect();
        let diff = vec![AlgebraElement::zero(algebra); degrees.len() * degrees.len()];
        Arc::new(SemifreeModule {
            algebra: Arc::clone(algebra),
            generators,
            diff,
        })
    }

    pub fn zero_module(algebra: &Arc<GradedAlgebra>) -> ModuleRef {
        Self::free(algebra, &[])
    }

    fn validate(&self) -> Result<()> {
        let r = self.rank();
        {
            let mut names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
            names.sort_unstable();
            names.dedup();
            if names.len() != r {
                return Err(Error::InvalidModule("duplicate generator names".into()));
            }
        }
        for i in 0..r {
            for j in 0..r {
                let e = self.d_entry(i, j);
                if !Arc::ptr_eq(e.algebra(), &self.algebra) && **e.algebra() != *self.algebra {
                    return Err(Error::AlgebraMismatch);
                }
                match e.homogeneity() {
                    Homogeneity::Zero => {}
                    Homogeneity::Degree(d) => {
                        let want =
                            required_entry_degree(&self.generators[j], &self.generators[i], 1);
                        if d != want {
                            return Err(Error::InvalidModule(format!(
                                "differential entry d({})->{} has degree {} but needs {}",
                                self.generators[j].name, self.generators[i].name, d, want
                            )));
                        }
                    }
                    Homogeneity::Mixed => {
                        return Err(Error::InvalidModule(format!(
                            "differential entry d({})->{} is inhomogeneous",
                            self.generators[j].name, self.generators[i].name
                        )))
                    }
                }
            }
        }
        if !self.square_is_zero() {
            return Err(Error::InvalidModule(
                "differential does not square to zero".into(),
            ));
        }
        Ok(())
    }

    fn square_is_zero(&self) -> bool {
        let r = self.rank();
        let degs: Vec<i64> = self.generators.iter().map(|g| g.degree).collect();
        let sq = compose_entries(
            &self.algebra,
            &self.diff,
            1,
            r,
            &self.diff,
            1,
            r,
            r,
            &degs,
            &degs,
        );
        sq.iter().all(AlgebraElement::is_zero)
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn gen_degree(&self, i: usize) -> i64 {
        self.generators[i].degree
    }

    pub fn d_entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.diff[i * self.rank() + j]
    }

    pub fn differential_entries(&self) -> &[AlgebraElement] {
        &self.diff
    }

    pub fn same_algebra(&self, other: &SemifreeModule) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }

    /// `M[k]` with `M[k]^i = M^{i+k}`: generator degrees drop by `k`, and
    /// the differential entry `(i, j)` is scaled by `(-1)^{k(1+|entry|)}`
    /// (the suspension rule; a global `(-1)^k` in the even-concentrated
    /// case).
    pub fn shift(self: &ModuleRef, k: i64) -> ModuleRef {
        if k == 0 {
            return Arc::clone(self);
        }
        let field = self.algebra.field();
        let generators: Vec<Generator> = self
            .generators
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                degree: g.degree - k,
            })
            .collect();
        let r = self.rank();
        let mut diff = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                let entry_degree = self.generators[j].degree + 1 - self.generators[i].degree;
                let sign = field.sign(k * (1 + entry_degree));
                diff.push(self.d_entry(i, j).scale(&sign));
            }
        }
        Arc::new(SemifreeModule {
            algebra: Arc::clone(&self.algebra),
            generators,
            diff,
        })
    }

    /// Flatten to the underlying complex of scalars; basis elements are the
    /// pairs (algebra basis element, generator).
    pub fn to_scalar_complex(&self) -> GradedComplex {
        let alg = &self.algebra;
        let field = alg.field();
        let r = self.rank();
        let adim = alg.dim();
        let n = r * adim;
        let mut basis = Vec::with_capacity(n);
        for j in 0..r {
            for b in 0..adim {
                basis.push(Generator {
                    name: format!("{}.{}", alg.basis()[b].name, self.generators[j].name),
                    degree: alg.basis()[b].degree + self.generators[j].degree,
                });
            }
        }
        let idx = |j: usize, b: usize| j * adim + b;
        let mut d = Matrix::zeros(field, n, n);
        for j in 0..r {
            for b in 0..adim {
                // d(b·g_j) = (-1)^{|b|} Σ_i (b·D[i][j])·g_i
                let sign = field.sign(alg.basis()[b].degree);
                let belt = AlgebraElement::basis(alg, b);
                for i in 0..r {
                    let e = self.d_entry(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    let prod = belt.mul(e).expect("same algebra").scale(&sign);
                    for (c, coeff) in prod.coeffs().iter().enumerate() {
                        if !coeff.is_zero() {
                            let v = field.add(d.get(idx(i, c), idx(j, b)), coeff);
                            d.set(idx(i, c), idx(j, b), v);
                        }
                    }
                }
            }
        }
        GradedComplex::new(field, basis, d).expect("flattened complex is valid")
    }
}

impl fmt::Display for SemifreeModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", g.name, g.degree)?;
        }
        write!(f, "]")
    }
}

/// Signed matrix composition: `f` of degree `f_deg` applied after `g`.
/// `(f∘g)[k][j] = Σ_i (-1)^{f_deg·|G[i][j]|} G[i][j]·F[k][i]`, with the
/// degree of the `(i, j)` slot of `G` read off from the grading data, so
/// zero entries contribute nothing regardless of the sign.
#[allow(clippy::too_many_arguments)]
fn compose_entries(
    algebra: &Arc<GradedAlgebra>,
    f_entries: &[AlgebraElement],
    f_deg: i64,
    f_rows: usize,
    g_entries: &[AlgebraElement],
    g_deg: i64,
    g_rows: usize,
    g_cols: usize,
    g_src_degrees: &[i64],
    g_tgt_degrees: &[i64],
) -> Vec<AlgebraElement> {
    let field = algebra.field();
    let even = algebra.is_even_concentrated() || f_deg % 2 == 0;
    let mut out = vec![AlgebraElement::zero(algebra); f_rows * g_cols];
    for j in 0..g_cols {
        for i in 0..g_rows {
            let g = &g_entries[i * g_cols + j];
            if g.is_zero() {
                continue;
            }
            let sign = if even {
                field.one()
            } else {
                field.sign(f_deg * (g_src_degrees[j] + g_deg - g_tgt_degrees[i]))
            };
            for k in 0..f_rows {
                let f = &f_entries[k * g_rows + i];
                if f.is_zero() {
                    continue;
                }
                let term = g.mul(f).expect("same algebra").scale(&sign);
                out[k * g_cols + j] = out[k * g_cols + j].add(&term).expect("same algebra");
            }
        }
    }
    out
}

impl Morphism {
    pub fn new(
        source: &ModuleRef,
        target: &ModuleRef,
        degree: i64,
        entries: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if !source.same_algebra(target) {
            return Err(Error::AlgebraMismatch);
        }
        if entries.len() != target.rank() * source.rank() {
            return Err(Error::InvalidMorphism(format!(
                "matrix must be {}x{}, got {} entries",
                target.rank(),
                source.rank(),
                entries.len()
            )));
        }
        let m = Morphism {
            source: Arc::clone(source),
            target: Arc::clone(target),
            degree,
            entries,
        };
        for i in 0..m.target.rank() {
            for j in 0..m.source.rank() {
                match m.entry(i, j).homogeneity() {
                    Homogeneity::Zero => {}
                    Homogeneity::Degree(d) => {
                        let want = required_entry_degree(
                            &m.source.generators()[j],
                            &m.target.generators()[i],
                            degree,
                        );
                        if d != want {
                            return Err(Error::InvalidMorphism(format!(
                                "entry ({i}, {j}) has degree {d} but needs {want}"
                            )));
                        }
                    }
                    Homogeneity::Mixed => {
                        return Err(Error::InvalidMorphism(format!(
                            "entry ({i}, {j}) is inhomogeneous"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn zero(source: &ModuleRef, target: &ModuleRef, degree: i64) -> Result<Self> {
        let entries =
            vec![AlgebraElement::zero(source.algebra()); target.rank() * source.rank()];
        Self::new(source, target, degree, entries)
    }

    pub fn identity(m: &ModuleRef) -> Self {
        let r = m.rank();
        let mut entries = vec![AlgebraElement::zero(m.algebra()); r * r];
        for i in 0..r {
            entries[i * r + i] = AlgebraElement::unit(m.algebra());
        }
        Morphism {
            source: Arc::clone(m),
            target: Arc::clone(m),
            degree: 0,
            entries,
        }
    }

    pub fn source(&self) -> &ModuleRef {
        &self.source
    }

    pub fn target(&self) -> &ModuleRef {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.source.rank() + j]
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(AlgebraElement::is_zero)
    }

    /// `self ∘ other`, `other` applied first.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if !module_eq(&self.source, &other.target) {
            return Err(Error::InvalidMorphism(
                "composition mismatch: source of the outer map must be the target of the inner"
                    .into(),
            ));
        }
        let src_degs: Vec<i64> = other.source.generators().iter().map(|g| g.degree).collect();
        let mid_degs: Vec<i64> = other.target.generators().iter().map(|g| g.degree).collect();
        let entries = compose_entries(
            self.source.algebra(),
            &self.entries,
            self.degree,
            self.target.rank(),
            &other.entries,
            other.degree,
            other.target.rank(),
            other.source.rank(),
            &src_degs,
            &mid_degs,
        );
        Ok(Morphism {
            source: Arc::clone(&other.source),
            target: Arc::clone(&self.target),
            degree: self.degree + other.degree,
            entries,
        })
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        if !module_eq(&self.source, &other.source)
            || !module_eq(&self.target, &other.target)
            || self.degree != other.degree
        {
            return Err(Error::InvalidMorphism(
                "sum of morphisms needs equal sources, targets and degrees".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Morphism {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            degree: self.degree,
            entries,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Morphism {
        Morphism {
            source: Arc::clone(&self.source),
            target: Arc::clone(&self.target),
            degree: self.degree,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    fn as_degree_one(m: &ModuleRef) -> Morphism {
        Morphism {
            source: Arc::clone(m),
            target: Arc::clone(m),
            degree: 1,
            entries: m.differential_entries().to_vec(),
        }
    }

    /// Hom differential `∂f = d_N∘f - (-1)^{|f|} f∘d_M`.
    pub fn differential(&self) -> Morphism {
        let dn = Morphism::as_degree_one(&self.target);
        let dm = Morphism::as_degree_one(&self.source);
        let left = dn.compose(self).expect("degrees line up");
        let right = self.compose(&dm).expect("degrees line up");
        let sign = self
            .source
            .field()
            .sign(self.degree + 1); // subtract: scale by -(-1)^t
        left.add(&right.scale(&sign)).expect("same shape")
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    /// `f[k]: M[k] → N[k]`, with entry `(i, j)` scaled by
    /// `(-1)^{k(deg f + |entry|)}`.
    pub fn shift(&self, k: i64) -> Morphism {
        let field = self.source.field();
        let rt = self.target.rank();
        let rs = self.source.rank();
        let mut entries = Vec::with_capacity(rt * rs);
        for i in 0..rt {
            for j in 0..rs {
                let entry_degree = self.source.gen_degree(j) + self.degree
                    - self.target.gen_degree(i);
                let sign = field.sign(k * (self.degree + entry_degree));
                entries.push(self.entry(i, j).scale(&sign));
            }
        }
        Morphism {
            source: self.source.shift(k),
            target: self.target.shift(k),
            degree: self.degree,
            entries,
        }
    }

    /// Reinterpret a degree-`t` morphism `M → N` (`t` even) as the closed
    /// degree-0 morphism `M[-t] → N` with the same matrix.
    pub fn from_shifted_source(&self) -> Morphism {
        assert!(
            self.degree % 2 == 0,
            "only even-degree morphisms reinterpret without signs"
        );
        Morphism {
            source: self.source.shift(-self.degree),
            target: Arc::clone(&self.target),
            degree: 0,
            entries: self.entries.clone(),
        }
    }
}

pub fn module_eq(a: &ModuleRef, b: &ModuleRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Mapping cone of a closed degree-0 morphism.
pub fn cone(f: &Morphism) -> Result<Cone> {
    if f.degree() != 0 {
        return Err(Error::InvalidMorphism(format!(
            "cone needs a degree-0 morphism, got degree {}",
            f.degree()
        )));
    }
    if !f.is_closed() {
        return Err(Error::NotClosed("cone needs a closed morphism".into()));
    }
    let n = f.target();
    let m = f.source();
    let alg = n.algebra();
    let field = alg.field();
    let rn = n.rank();
    let rm = m.rank();
    let r = rn + rm;

    let mut generators = Vec::with_capacity(r);
    for g in n.generators() {
        generators.push(Generator {
            name: format!("n.{}", g.name),
            degree: g.degree,
        });
    }
    for g in m.generators() {
        generators.push(Generator {
            name: format!("m.{}", g.name),
            degree: g.degree - 1,
        });
    }

    let mut diff = vec![AlgebraElement::zero(alg); r * r];
    for i in 0..rn {
        for j in 0..rn {
            diff[i * r + j] = n.d_entry(i, j).clone();
        }
        for j in 0..rm {
            diff[i * r + (rn + j)] = f.entry(i, j).clone();
        }
    }
    // The lower-right block is the differential of M[1]: each entry is
    // scaled by (-1)^{1+|entry|}, which is the plain -d_M when the algebra
    // is even-concentrated.
    for i in 0..rm {
        for j in 0..rm {
            let entry_degree = m.gen_degree(j) + 1 - m.gen_degree(i);
            let sign = field.sign(1 + entry_degree);
            diff[(rn + i) * r + (rn + j)] = m.d_entry(i, j).scale(&sign);
        }
    }
    let module = SemifreeModule::new(alg, generators, diff)?;

    let mut incl = vec![AlgebraElement::zero(alg); r * rn];
    for i in 0..rn {
        incl[i * rn + i] = AlgebraElement::unit(alg);
    }
    let from_target = Morphism::new(n, &module, 0, incl)?;

    let m_shift = m.shift(1);
    let mut proj = vec![AlgebraElement::zero(alg); rm * r];
    for i in 0..rm {
        proj[i * r + (rn + i)] = AlgebraElement::unit(alg);
    }
    let to_shifted_source = Morphism::new(&module, &m_shift, 0, proj)?;

    debug_assert!(from_target.is_closed() && to_shifted_source.is_closed());
    Ok(Cone {
        module,
        from_target,
        to_shifted_source,
    })
}

/// Block-diagonal direct sum.
pub fn direct_sum(summands: &[&ModuleRef]) -> Result<ModuleRef> {
    if summands.is_empty() {
        return Err(Error::InvalidModule("empty direct sum".into()));
    }
    let alg = summands[0].algebra();
    if !summands.iter().all(|m| m.same_algebra(summands[0])) {
        return Err(Error::AlgebraMismatch);
    }
    let r: usize = summands.iter().map(|m| m.rank()).sum();
    let mut generators = Vec::with_capacity(r);
    for (s, m) in summands.iter().enumerate() {
        for g in m.generators() {
            generators.push(Generator {
                name: format!("s{s}.{}", g.name),
                degree: g.degree,
            });
        }
    }
    let mut diff = vec![AlgebraElement::zero(alg); r * r];
    let mut offset = 0;
    for m in summands {
        let rm = m.rank();
        for i in 0..rm {
            for j in 0..rm {
                diff[(offset + i) * r + (offset + j)] = m.d_entry(i, j).clone();
            }
        }
        offset += rm;
    }
    SemifreeModule::new(alg, generators, diff)
}

/// `V ⊗ M` for a complex of scalars `V`: generators are pairs, the
/// differential is `d_V ⊗ 1 + (-1)^{|v|} 1 ⊗ d_M`, where pushing a module
/// coefficient past a basis element of `V` costs the usual Koszul sign.
pub fn tensor_with_complex(v: &GradedComplex, m: &ModuleRef) -> Result<ModuleRef> {
    if v.field() != m.field() {
        return Err(Error::FieldMismatch);
    }
    let alg = m.algebra();
    let field = alg.field();
    let nv = v.dim();
    let rm = m.rank();
    let r = nv * rm;
    let mut generators = Vec::with_capacity(r);
    for p in 0..nv {
        for j in 0..rm {
            generators.push(Generator {
                name: format!("{}*{}", v.basis()[p].name, m.generators()[j].name),
                degree: v.basis()[p].degree + m.generators()[j].degree,
            });
        }
    }
    let idx = |p: usize, j: usize| p * rm + j;
    let mut diff = vec![AlgebraElement::zero(alg); r * r];
    for p in 0..nv {
        for j in 0..rm {
            // d_V ⊗ 1 part: scalar entries times the unit.
            for q in 0..nv {
                let c = v.differential().get(q, p);
                if !c.is_zero() {
                    let e = AlgebraElement::unit(alg).scale(c);
                    diff[idx(q, j) * r + idx(p, j)] =
                        diff[idx(q, j) * r + idx(p, j)].add(&e)?;
                }
            }
            // (-1)^{|e_p|} 1 ⊗ d_M part, with the coefficient of d(g_j)
            // moved past e_p.
            for i in 0..rm {
                let e = m.d_entry(i, j);
                if e.is_zero() {
                    continue;
                }
                let entry_deg = m.gen_degree(j) + 1 - m.gen_degree(i);
                let sign = field.sign(v.basis()[p].degree * (1 + entry_deg));
                diff[idx(p, i) * r + idx(p, j)] =
                    diff[idx(p, i) * r + idx(p, j)].add(&e.scale(&sign))?;
            }
        }
    }
    SemifreeModule::new(alg, generators, diff)
}

/// `φ ⊗ id_M` for a map of scalar complexes `φ: V → V'` (any degree);
/// produces a morphism `V⊗M → V'⊗M` assuming both tensors were built by
/// [`tensor_with_complex`].
pub fn complex_map_tensor_identity(
    phi: &Matrix,
    phi_degree: i64,
    src: &ModuleRef,
    tgt: &ModuleRef,
    m_rank: usize,
) -> Result<Morphism> {
    let alg = src.algebra();
    let nv_src = src.rank() / m_rank;
    let nv_tgt = tgt.rank() / m_rank;
    let mut entries = vec![AlgebraElement::zero(alg); tgt.rank() * src.rank()];
    for p in 0..nv_src {
        for q in 0..nv_tgt {
            let c = phi.get(q, p);
            if c.is_zero() {
                continue;
            }
            let e = AlgebraElement::unit(alg).scale(c);
            for j in 0..m_rank {
                entries[(q * m_rank + j) * src.rank() + (p * m_rank + j)] = e.clone();
            }
        }
    }
    Morphism::new(src, tgt, phi_degree, entries)
}

/// Multiplication by a homogeneous graded-central element, exposed as a
/// closed degree-0 morphism `M[-|a|] → M` with diagonal matrix `a`.
/// The zero element yields the zero endomorphism of `M` in degree 0.
pub fn mult_by_element(m: &ModuleRef, a: &AlgebraElement) -> Result<Morphism> {
    if !Arc::ptr_eq(a.algebra(), m.algebra()) && **a.algebra() != **m.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let d = match a.homogeneity() {
        Homogeneity::Zero => 0,
        Homogeneity::Degree(d) => d,
        Homogeneity::Mixed => return Err(Error::NotHomogeneous),
    };
    if !a.is_graded_central()? {
        return Err(Error::NotCentral);
    }
    let src = m.shift(-d);
    let r = m.rank();
    let mut entries = vec![AlgebraElement::zero(m.algebra()); r * r];
    for i in 0..r {
        entries[i * r + i] = a.clone();
    }
    let f = Morphism::new(&src, m, 0, entries)?;
    if !f.is_closed() {
        // Reachable only for odd central elements over algebras where odd
        // and even differential entries mix; the even case is closed by
        // centrality.
        return Err(Error::NotClosed(
            "multiplication by this element is not a chain map".into(),
        ));
    }
    Ok(f)
}

impl GradedComplex {
    pub fn new(field: FieldSpec, basis: Vec<Generator>, d: Matrix) -> Result<Self> {
        let n = basis.len();
        if d.rows() != n || d.cols() != n {
            return Err(Error::Dimension(format!(
                "differential must be {n}x{n}"
            )));
        }
        if d.field() != field {
            return Err(Error::FieldMismatch);
        }
        for p in 0..n {
            for q in 0..n {
                if !d.get(q, p).is_zero() && basis[q].degree != basis[p].degree + 1 {
                    return Err(Error::InvalidModule(format!(
                        "complex differential entry ({q}, {p}) violates degree +1"
                    )));
                }
            }
        }
        let sq = d.mul(&d)?;
        if !sq.is_zero() {
            return Err(Error::InvalidModule(
                "complex differential does not square to zero".into(),
            ));
        }
        Ok(GradedComplex { field, basis, d })
    }

    /// Complex with zero differential concentrated on the given degrees.
    pub fn with_zero_differential(field: FieldSpec, degrees: &[i64]) -> Self {
        let basis = degrees
            .iter()
            .enumerate()
            .map(|(i, &degree)| Generator {
                name: format!("v{i}"),
                degree,
            })
            .collect();
        let n = degrees.len();
        GradedComplex {
            field,
            basis,
            d: Matrix::zeros(field, n, n),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Generator] {
        &self.basis
    }

    pub fn differential(&self) -> &Matrix {
        &self.d
    }

    pub fn shift(&self, k: i64) -> GradedComplex {
        let basis = self
            .basis
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                degree: g.degree - k,
            })
            .collect();
        let sign = self.field.sign(k);
        let mut d = self.d.clone();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let v = self.field.mul(&sign, d.get(i, j));
                d.set(i, j, v);
            }
        }
        GradedComplex {
            field: self.field,
            basis,
            d,
        }
    }
}
