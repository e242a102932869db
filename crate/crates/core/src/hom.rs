//! Hom complexes, cohomology, Ext groups and Yoneda products, and the
//! classifiers that recognize objects whose Ext ring is the cohomology of a
//! complex projective space or of a sphere.
//!
//! The Hom complex of two semifree modules is a finite complex of scalars
//! with basis indexed by (source generator, target generator, algebra basis
//! element); because the modules are semifree its cohomology is derived Hom.
//! Ext classes are represented by chosen closed morphisms and compared by
//! coboundary membership, never by equality of representatives.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::AlgebraElement;
use crate::dgmodule::{module_eq, GradedComplex, Generator, ModuleRef, Morphism};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;

/// One basis element of a Hom complex: the map sending `source_gen` to
/// `algebra_basis · target_gen` and every other generator to zero.
#[derive(Clone, Debug)]
pub struct HomBasisElement {
    pub source_gen: usize,
    pub target_gen: usize,
    pub algebra_basis: usize,
    pub degree: i64,
}

/// The complex of all algebra-linear maps between two semifree modules.
pub struct HomComplex {
    source: ModuleRef,
    target: ModuleRef,
    basis: Vec<HomBasisElement>,
    by_degree: BTreeMap<i64, Vec<usize>>,
    complex: GradedComplex,
}

impl HomComplex {
    pub fn source(&self) -> &ModuleRef {
        &self.source
    }

    pub fn target(&self) -> &ModuleRef {
        &self.target
    }

    pub fn basis(&self) -> &[HomBasisElement] {
        &self.basis
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn dim_in_degree(&self, t: i64) -> usize {
        self.by_degree.get(&t).map_or(0, Vec::len)
    }

    /// Global basis indices of one degree block, in basis order.
    pub fn indices_in_degree(&self, t: i64) -> Vec<usize> {
        self.by_degree.get(&t).cloned().unwrap_or_default()
    }

    /// The morphism corresponding to one basis element.
    pub fn basis_morphism(&self, k: usize) -> Morphism {
        let b = &self.basis[k];
        let alg = self.source.algebra();
        let mut entries =
            vec![AlgebraElement::zero(alg); self.target.rank() * self.source.rank()];
        entries[b.target_gen * self.source.rank() + b.source_gen] =
            AlgebraElement::basis(alg, b.algebra_basis);
        Morphism::new(&self.source, &self.target, b.degree, entries)
            .expect("basis morphisms are homogeneous by construction")
    }

    /// Assemble a morphism of the given degree from block coordinates (one
    /// scalar per basis element of that degree, in basis order).
    pub fn morphism_from_coords(&self, degree: i64, coords: &[Scalar]) -> Result<Morphism> {
        let idxs = self.by_degree.get(&degree).cloned().unwrap_or_default();
        if idxs.len() != coords.len() {
            return Err(Error::Dimension(format!(
                "degree {degree} block has dimension {}, got {} coordinates",
                idxs.len(),
                coords.len()
            )));
        }
        let alg = self.source.algebra();
        let mut entries =
            vec![AlgebraElement::zero(alg); self.target.rank() * self.source.rank()];
        for (c, &k) in coords.iter().zip(&idxs) {
            if c.is_zero() {
                continue;
            }
            let b = &self.basis[k];
            let slot = b.target_gen * self.source.rank() + b.source_gen;
            let term = AlgebraElement::basis(alg, b.algebra_basis).scale(c);
            entries[slot] = entries[slot].add(&term)?;
        }
        Morphism::new(&self.source, &self.target, degree, entries)
    }

    /// Block coordinates of a morphism in its degree, in basis order.
    pub fn coords_of(&self, f: &Morphism) -> Result<Vec<Scalar>> {
        if !module_eq(f.source(), &self.source) || !module_eq(f.target(), &self.target) {
            return Err(Error::InvalidMorphism(
                "morphism does not live in this Hom complex".into(),
            ));
        }
        let idxs = self.by_degree.get(&f.degree()).cloned().unwrap_or_default();
        if idxs.is_empty() && !f.is_zero() {
            return Err(Error::InvalidMorphism(
                "nonzero morphism in an empty degree block".into(),
            ));
        }
        let mut coords = Vec::with_capacity(idxs.len());
        for &k in &idxs {
            let b = &self.basis[k];
            coords.push(f.entry(b.target_gen, b.source_gen).coeffs()[b.algebra_basis].clone());
        }
        Ok(coords)
    }

    /// Matrix of the Hom differential from the degree `t` block to the
    /// degree `t+1` block.
    pub fn block_matrix(&self, t: i64) -> Matrix {
        let field = self.complex.field();
        let cols = self.by_degree.get(&t).cloned().unwrap_or_default();
        let rows = self.by_degree.get(&(t + 1)).cloned().unwrap_or_default();
        let mut m = Matrix::zeros(field, rows.len(), cols.len());
        for (jj, &p) in cols.iter().enumerate() {
            for (ii, &q) in rows.iter().enumerate() {
                m.set(ii, jj, self.complex.differential().get(q, p).clone());
            }
        }
        m
    }

    /// Basis of the closed (cocycle) block in a given degree.
    pub fn closed_basis(&self, t: i64) -> Vec<Vec<Scalar>> {
        self.block_matrix(t).nullspace_basis()
    }
}

/// Build the Hom complex `Hom(m, n)`.
pub fn hom_complex(m: &ModuleRef, n: &ModuleRef) -> Result<HomComplex> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    let alg = m.algebra();
    let field = alg.field();
    let mut basis = Vec::new();
    for j in 0..m.rank() {
        for i in 0..n.rank() {
            for b in 0..alg.dim() {
                let degree = alg.basis()[b].degree + n.gen_degree(i) - m.gen_degree(j);
                basis.push(HomBasisElement {
                    source_gen: j,
                    target_gen: i,
                    algebra_basis: b,
                    degree,
                });
            }
        }
    }
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (k, b) in basis.iter().enumerate() {
        by_degree.entry(b.degree).or_default().push(k);
    }

    let names: Vec<Generator> = basis
        .iter()
        .enumerate()
        .map(|(k, b)| Generator {
            name: format!("w{k}"),
            degree: b.degree,
        })
        .collect();

    let shell = HomComplex {
        source: Arc::clone(m),
        target: Arc::clone(n),
        basis,
        by_degree,
        complex: GradedComplex::with_zero_differential(field, &[]),
    };

    let nb = shell.basis.len();
    let mut d = Matrix::zeros(field, nb, nb);
    for k in 0..nb {
        let f = shell.basis_morphism(k);
        let df = f.differential();
        // Expand ∂f over the Hom basis: entry (i', j') contributes its
        // algebra coefficients to the (j', i', -) slots.
        for jp in 0..m.rank() {
            for ip in 0..n.rank() {
                let e = df.entry(ip, jp);
                if e.is_zero() {
                    continue;
                }
                let base = (jp * n.rank() + ip) * alg.dim();
                for (c, coeff) in e.coeffs().iter().enumerate() {
                    if !coeff.is_zero() {
                        d.set(base + c, k, coeff.clone());
                    }
                }
            }
        }
    }

    let complex = GradedComplex::new(field, names, d)?;
    Ok(HomComplex {
        complex,
        ..shell
    })
}

/// Graded dimensions of the cohomology of a complex of scalars; degrees with
/// zero cohomology are omitted.
pub fn cohomology_dims(c: &GradedComplex) -> BTreeMap<i64, usize> {
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (k, b) in c.basis().iter().enumerate() {
        by_degree.entry(b.degree).or_default().push(k);
    }
    let block = |t: i64| -> Matrix {
        let cols = by_degree.get(&t).cloned().unwrap_or_default();
        let rows = by_degree.get(&(t + 1)).cloned().unwrap_or_default();
        let mut m = Matrix::zeros(c.field(), rows.len(), cols.len());
        for (jj, &p) in cols.iter().enumerate() {
            for (ii, &q) in rows.iter().enumerate() {
                m.set(ii, jj, c.differential().get(q, p).clone());
            }
        }
        m
    };
    let mut out = BTreeMap::new();
    for (&t, idxs) in &by_degree {
        let n_t = idxs.len();
        let rank_out = block(t).rank();
        let rank_in = block(t - 1).rank();
        let dim = n_t - rank_out - rank_in;
        if dim > 0 {
            out.insert(t, dim);
        }
    }
    out
}

/// Cohomology of the underlying complex of scalars of a module.
pub fn module_cohomology_dims(m: &ModuleRef) -> BTreeMap<i64, usize> {
    cohomology_dims(&m.to_scalar_complex())
}

/// Graded dimensions of `Ext(m, n)`.
pub fn ext_dims(m: &ModuleRef, n: &ModuleRef) -> Result<BTreeMap<i64, usize>> {
    Ok(cohomology_dims(hom_complex(m, n)?.complex()))
}

/// An Ext class written in the chosen basis of its degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtClass {
    pub degree: i64,
    pub coeffs: Vec<Scalar>,
}

impl ExtClass {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }
}

struct DegreeData {
    /// Chosen representative coordinates (columns, block coords).
    chosen: Vec<Vec<Scalar>>,
    /// Coboundary basis vectors (block coords).
    coboundaries: Vec<Vec<Scalar>>,
}

/// The Ext ring of a module: graded dimensions, chosen closed representative
/// morphisms, and the full Yoneda multiplication table on the chosen basis.
pub struct ExtRing {
    hom: HomComplex,
    dims: BTreeMap<i64, usize>,
    /// Global basis order: degrees ascending, then index within degree.
    degrees: Vec<i64>,
    reps: Vec<Morphism>,
    degree_data: BTreeMap<i64, DegreeData>,
    /// `table[i][j]` = global coefficient vector of `class(rep_i ∘ rep_j)`.
    table: Vec<Vec<Vec<Scalar>>>,
}

impl ExtRing {
    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.reps.len()
    }

    pub fn hom(&self) -> &HomComplex {
        &self.hom
    }

    pub fn basis_degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn representative(&self, global: usize) -> &Morphism {
        &self.reps[global]
    }

    /// Global indices of the chosen basis in one degree.
    pub fn indices_in_degree(&self, t: i64) -> Vec<usize> {
        self.degrees
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d == t)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn structure_constants(&self, i: usize, j: usize) -> &[Scalar] {
        &self.table[i][j]
    }

    /// Express the class of a closed morphism in the chosen basis, by
    /// solving against the chosen representatives and a coboundary basis.
    pub fn class_of(&self, f: &Morphism) -> Result<ExtClass> {
        if !f.is_closed() {
            return Err(Error::NotClosed(
                "only closed morphisms represent Ext classes".into(),
            ));
        }
        let t = f.degree();
        let v = self.hom.coords_of(f)?;
        let field = self.hom.complex().field();
        let empty = DegreeData {
            chosen: Vec::new(),
            coboundaries: Vec::new(),
        };
        let data = self.degree_data.get(&t).unwrap_or(&empty);
        let k = data.chosen.len();
        if v.is_empty() {
            return Ok(ExtClass {
                degree: t,
                coeffs: vec![],
            });
        }
        let n = v.len();
        let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(k + data.coboundaries.len());
        cols.extend(data.chosen.iter().cloned());
        cols.extend(data.coboundaries.iter().cloned());
        let mut m = Matrix::zeros(field, n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                m.set(i, j, c.clone());
            }
        }
        match m.solve(&v)? {
            Some(x) => Ok(ExtClass {
                degree: t,
                coeffs: x[..k].to_vec(),
            }),
            None => Err(Error::InvalidMorphism(
                "closed morphism is not expressible in the cocycle space".into(),
            )),
        }
    }

    /// Yoneda product: the class of `f ∘ g` (`g` applied first). Errors on
    /// non-closed representatives.
    pub fn yoneda_compose(&self, f: &Morphism, g: &Morphism) -> Result<ExtClass> {
        if !f.is_closed() || !g.is_closed() {
            return Err(Error::NotClosed(
                "Yoneda product needs closed representatives".into(),
            ));
        }
        self.class_of(&f.compose(g)?)
    }

    /// Matrix of left Yoneda multiplication by a class, from one degree to
    /// degree + class degree, read off from the structure-constant table.
    pub fn left_multiplication_matrix(&self, by: &ExtClass, from_degree: i64) -> Matrix {
        let field = self.hom.complex().field();
        let to_degree = from_degree + by.degree;
        let from_idx = self.indices_in_degree(from_degree);
        let to_idx = self.indices_in_degree(to_degree);
        let by_idx = self.indices_in_degree(by.degree);
        let mut m = Matrix::zeros(field, to_idx.len(), from_idx.len());
        for (jj, &j) in from_idx.iter().enumerate() {
            for (aa, &a) in by_idx.iter().enumerate() {
                if by.coeffs[aa].is_zero() {
                    continue;
                }
                let prod = &self.table[a][j];
                for (ii, &i) in to_idx.iter().enumerate() {
                    if prod[i].is_zero() {
                        continue;
                    }
                    let v = field.add(m.get(ii, jj), &field.mul(&by.coeffs[aa], &prod[i]));
                    m.set(ii, jj, v);
                }
            }
        }
        m
    }
}

/// Compute the Ext ring of a module: dimensions, representatives chosen as
/// the first cocycle basis completing a coboundary basis under the fixed
/// pivot order, and the full Yoneda table.
pub fn ext_ring(e: &ModuleRef) -> Result<ExtRing> {
    let hom = hom_complex(e, e)?;
    let field = hom.complex().field();

    let mut dims = BTreeMap::new();
    let mut degrees = Vec::new();
    let mut reps = Vec::new();
    let mut degree_data = BTreeMap::new();

    let all_degrees: Vec<i64> = hom.degrees().collect();
    for &t in &all_degrees {
        let n_t = hom.dim_in_degree(t);
        if n_t == 0 {
            continue;
        }
        // Coboundary basis: columns of the incoming block at its pivots.
        let d_in = hom.block_matrix(t - 1);
        let mut coboundaries = Vec::new();
        for p in d_in.column_space_pivots() {
            let col: Vec<Scalar> = (0..d_in.rows()).map(|i| d_in.get(i, p).clone()).collect();
            coboundaries.push(col);
        }
        // Extend by cocycles, first ones under the fixed order that grow the
        // rank.
        let cocycles = hom.closed_basis(t);
        let mut chosen: Vec<Vec<Scalar>> = Vec::new();
        let mut span = coboundaries.clone();
        let mut span_rank = {
            let m = columns_matrix(field, n_t, &span);
            m.rank()
        };
        for z in cocycles {
            let mut trial = span.clone();
            trial.push(z.clone());
            let r = columns_matrix(field, n_t, &trial).rank();
            if r > span_rank {
                span = trial;
                span_rank = r;
                chosen.push(z);
            }
        }
        if !chosen.is_empty() {
            dims.insert(t, chosen.len());
        }
        for z in &chosen {
            degrees.push(t);
            reps.push(hom.morphism_from_coords(t, z)?);
        }
        degree_data.insert(
            t,
            DegreeData {
                chosen,
                coboundaries,
            },
        );
    }

    let mut ring = ExtRing {
        hom,
        dims,
        degrees,
        reps,
        degree_data,
        table: Vec::new(),
    };

    let total = ring.reps.len();
    let mut table = vec![vec![vec![field.zero(); total]; total]; total];
    for i in 0..total {
        for j in 0..total {
            let prod = ring.reps[i].compose(&ring.reps[j])?;
            let class = ring.class_of(&prod)?;
            let target = ring.indices_in_degree(class.degree);
            for (kk, &k) in target.iter().enumerate() {
                table[i][j][k] = class.coeffs[kk].clone();
            }
        }
    }
    ring.table = table;
    Ok(ring)
}

fn columns_matrix(
    field: crate::field::FieldSpec,
    rows: usize,
    cols: &[Vec<Scalar>],
) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col.iter().enumerate() {
            m.set(i, j, c.clone());
        }
    }
    m
}

/// Why a module failed classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    DimensionMismatch,
    RingStructure,
}

/// Witness data for a recognized P-object.
#[derive(Clone, Debug)]
pub struct PObjectWitness {
    pub n: usize,
    /// Chosen closed degree-2 representative of the generator of `Ext²`.
    pub witness: Morphism,
}

/// Result of [`classify`]: a module can be a P-object, a spherical object,
/// both (exactly in the P¹ = S² overlap), or neither with a reason.
pub struct Classification {
    pub dims: BTreeMap<i64, usize>,
    pub p_object: Option<PObjectWitness>,
    pub spherical: Option<i64>,
    pub failure: Option<FailureReason>,
}

impl Classification {
    pub fn verdict(&self) -> String {
        match (&self.p_object, &self.spherical) {
            (Some(p), Some(d)) => format!("p_object({}) and spherical({})", p.n, d),
            (Some(p), None) => format!("p_object({})", p.n),
            (None, Some(d)) => format!("spherical({d})"),
            (None, None) => match self.failure {
                Some(FailureReason::RingStructure) => "neither (ring structure)".into(),
                _ => "neither (dimension mismatch)".into(),
            },
        }
    }
}

/// Decide whether the Ext ring of `e` is the cohomology ring of `P^n`
/// (dimensions one in degrees `0, 2, ..., 2n` and the degree-2 generator
/// has nonzero n-th power) or of a sphere (dimensions one in degrees 0 and
/// `d`). One-dimensionality of each graded piece makes checking the single
/// basis class sufficient.
pub fn classify(e: &ModuleRef) -> Result<Classification> {
    let ring = ext_ring(e)?;
    let dims = ring.dims().clone();

    let spherical = match dims.len() {
        2 => {
            let entries: Vec<(i64, usize)> = dims.iter().map(|(&d, &n)| (d, n)).collect();
            if entries[0] == (0, 1) && entries[1].1 == 1 && entries[1].0 >= 1 {
                Some(entries[1].0)
            } else {
                None
            }
        }
        _ => None,
    };

    // P-shape: dims exactly one in 0, 2, ..., 2n for some n >= 1.
    let p_shape: Option<usize> = {
        let n = dims.len().saturating_sub(1);
        if n >= 1
            && (0..=n).all(|k| dims.get(&(2 * k as i64)) == Some(&1))
            && dims.len() == n + 1
        {
            Some(n)
        } else {
            None
        }
    };

    let mut p_object = None;
    let mut failure = None;
    if let Some(n) = p_shape {
        let idx = ring.indices_in_degree(2);
        let hbar = ring.representative(idx[0]).clone();
        let mut power = hbar.clone();
        for _ in 1..n {
            power = hbar.compose(&power)?;
        }
        if !ring.class_of(&power)?.is_zero() {
            p_object = Some(PObjectWitness { n, witness: hbar });
        } else if spherical.is_none() {
            failure = Some(FailureReason::RingStructure);
        }
    } else if spherical.is_none() {
        failure = Some(FailureReason::DimensionMismatch);
    }

    Ok(Classification {
        dims,
        p_object,
        spherical,
        failure,
    })
}
