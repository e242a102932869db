//! Finite-dimensional graded algebras presented by a basis, degrees and a
//! structure-constant table, plus constructors for the model algebras used
//! throughout the crate: truncated polynomial rings `k[h]/(h^{n+1})` with
//! `|h|` even, "sphere cohomology" rings `k ⊕ k·e` with `e^2 = 0`, and
//! direct products.
//!
//! Validation is exhaustive: associativity on all basis triples, unit laws,
//! degree-additivity of every structure constant, and (when the algebra is
//! flagged graded-commutative) the Koszul commutation rule on all pairs.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

/// A graded algebra given by structure constants: `basis[i] * basis[j] =
/// Σ_k table[i][j][k] * basis[k]`. The unit is required to be a basis
/// element.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedAlgebra {
    field: FieldSpec,
    basis: Vec<BasisElement>,
    unit: usize,
    table: Vec<Vec<Vec<Scalar>>>,
    graded_commutative: bool,
    /// For direct products: the orthogonal central idempotents projecting
    /// onto each factor, as coefficient vectors. `None` for plain algebras.
    factor_idempotents: Option<Vec<Vec<Scalar>>>,
}

/// Element of a [`GradedAlgebra`]: a coefficient vector over the basis.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    algebra: Arc<GradedAlgebra>,
    coeffs: Vec<Scalar>,
}

/// Homogeneity status of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(i64),
    Mixed,
}

impl GradedAlgebra {
    /// Build and validate an algebra from an explicit multiplication table.
    pub fn from_table(
        field: FieldSpec,
        basis: Vec<BasisElement>,
        unit: usize,
        table: Vec<Vec<Vec<Scalar>>>,
        graded_commutative: bool,
    ) -> Result<Arc<Self>> {
        let alg = GradedAlgebra {
            field,
            basis,
            unit,
            table,
            graded_commutative,
            factor_idempotents: None,
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    /// `k[h]/(h^{n+1})` with `|h| = d`, `d` even. Basis `1, h, ..., h^n`.
    pub fn truncated_polynomial(n: usize, d: i64, field: FieldSpec) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("need n >= 1".into()));
        }
        if d <= 0 || d % 2 != 0 {
            return Err(Error::InvalidAlgebra(format!(
                "generator degree must be even and positive, got {d}"
            )));
        }
        let dim = n + 1;
        let basis = (0..dim)
            .map(|i| BasisElement {
                name: if i == 0 {
                    "1".to_string()
                } else if i == 1 {
                    "h".to_string()
                } else {
                    format!("h{i}")
                },
                degree: d * i as i64,
            })
            .collect();
        let mut table = vec![vec![vec![field.zero(); dim]; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                if i + j < dim {
                    table[i][j][i + j] = field.one();
                }
            }
        }
        let alg = GradedAlgebra {
            field,
            basis,
            unit: 0,
            table,
            graded_commutative: true,
            factor_idempotents: None,
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    /// `k ⊕ k·e` with `|e| = d >= 1` and `e^2 = 0`; the cohomology ring of a
    /// d-sphere. Graded-commutative for every `d` (forced when `d` is odd).
    pub fn spherical(d: i64, field: FieldSpec) -> Result<Arc<Self>> {
        if d < 1 {
            return Err(Error::InvalidAlgebra(format!(
                "sphere degree must be >= 1, got {d}"
            )));
        }
        let basis = vec![
            BasisElement {
                name: "1".to_string(),
                degree: 0,
            },
            BasisElement {
                name: "e".to_string(),
                degree: d,
            },
        ];
        let z = || field.zero();
        let o = || field.one();
        let table = vec![
            vec![vec![o(), z()], vec![z(), o()]],
            vec![vec![z(), o()], vec![z(), z()]],
        ];
        let alg = GradedAlgebra {
            field,
            basis,
            unit: 0,
            table,
            graded_commutative: true,
            factor_idempotents: None,
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    /// Direct product `a × b`. The basis is `1` (the sum of the two units),
    /// the non-unit basis of `a`, the idempotent of the second factor, and
    /// the non-unit basis of `b`; the two orthogonal idempotents are
    /// recorded.
    pub fn product(a: &Arc<GradedAlgebra>, b: &Arc<GradedAlgebra>) -> Result<Arc<Self>> {
        if a.field != b.field {
            return Err(Error::FieldMismatch);
        }
        let field = a.field;
        let dim = a.dim() + b.dim();

        // Basis of the product as pairs (x, y); index 0 is (1,1), then the
        // non-unit a-basis as (x, 0), then (0, 1_b), then non-unit b as (0, y).
        let mut pair_basis: Vec<(Vec<Scalar>, Vec<Scalar>)> = Vec::with_capacity(dim);
        let unit_vec = |alg: &GradedAlgebra| {
            let mut v = vec![field.zero(); alg.dim()];
            v[alg.unit] = field.one();
            v
        };
        let basis_vec = |alg: &GradedAlgebra, i: usize| {
            let mut v = vec![field.zero(); alg.dim()];
            v[i] = field.one();
            v
        };
        let mut names = Vec::with_capacity(dim);
        let mut degrees = Vec::with_capacity(dim);
        pair_basis.push((unit_vec(a), unit_vec(b)));
        names.push("1".to_string());
        degrees.push(0);
        for (i, be) in a.basis.iter().enumerate() {
            if i == a.unit {
                continue;
            }
            pair_basis.push((basis_vec(a, i), vec![field.zero(); b.dim()]));
            names.push(format!("l.{}", be.name));
            degrees.push(be.degree);
        }
        pair_basis.push((vec![field.zero(); a.dim()], unit_vec(b)));
        names.push("r.1".to_string());
        degrees.push(0);
        for (i, be) in b.basis.iter().enumerate() {
            if i == b.unit {
                continue;
            }
            pair_basis.push((vec![field.zero(); a.dim()], basis_vec(b, i)));
            names.push(format!("r.{}", be.name));
            degrees.push(be.degree);
        }

        // Express an arbitrary pair (u, v) in the product basis: the unit
        // coordinate is u's unit coordinate, the second idempotent gets
        // v_unit - u_unit, everything else is read off directly.
        let express = |u: &[Scalar], v: &[Scalar]| -> Vec<Scalar> {
            let mut out = vec![field.zero(); dim];
            out[0] = u[a.unit].clone();
            let mut k = 1;
            for i in 0..a.dim() {
                if i == a.unit {
                    continue;
                }
                out[k] = u[i].clone();
                k += 1;
            }
            out[k] = field.sub(&v[b.unit], &u[a.unit]);
            k += 1;
            for i in 0..b.dim() {
                if i == b.unit {
                    continue;
                }
                out[k] = v[i].clone();
                k += 1;
            }
            out
        };

        let mut table = vec![vec![vec![field.zero(); dim]; dim]; dim];
        for (i, (xu, xv)) in pair_basis.iter().enumerate() {
            for (j, (yu, yv)) in pair_basis.iter().enumerate() {
                let pu = a.mul_vectors(xu, yu);
                let pv = b.mul_vectors(xv, yv);
                table[i][j] = express(&pu, &pv);
            }
        }

        let e1 = express(&unit_vec(a), &vec![field.zero(); b.dim()]);
        let e2 = express(&vec![field.zero(); a.dim()], &unit_vec(b));

        let alg = GradedAlgebra {
            field,
            basis: names
                .into_iter()
                .zip(degrees)
                .map(|(name, degree)| BasisElement { name, degree })
                .collect(),
            unit: 0,
            table,
            graded_commutative: a.graded_commutative && b.graded_commutative,
            factor_idempotents: Some(vec![e1, e2]),
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    fn validate(&self) -> Result<()> {
        let dim = self.basis.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("empty basis".into()));
        }
        if self.unit >= dim {
            return Err(Error::InvalidAlgebra("unit index out of range".into()));
        }
        if self.table.len() != dim
            || self
                .table
                .iter()
                .any(|row| row.len() != dim || row.iter().any(|v| v.len() != dim))
        {
            return Err(Error::InvalidAlgebra(
                "structure-constant table has wrong shape".into(),
            ));
        }
        {
            let mut names: Vec<&str> = self.basis.iter().map(|b| b.name.as_str()).collect();
            names.sort_unstable();
            names.dedup();
            if names.len() != dim {
                return Err(Error::InvalidAlgebra("duplicate basis names".into()));
            }
        }
        for row in &self.table {
            for v in row {
                if !v.iter().all(|c| self.field.contains(c)) {
                    return Err(Error::FieldMismatch);
                }
            }
        }
        // Unit laws.
        for i in 0..dim {
            let left = &self.table[self.unit][i];
            let right = &self.table[i][self.unit];
            for k in 0..dim {
                let expect = if k == i {
                    self.field.one()
                } else {
                    self.field.zero()
                };
                if left[k] != expect || right[k] != expect {
                    return Err(Error::InvalidAlgebra(format!(
                        "unit law fails at basis element {}",
                        self.basis[i].name
                    )));
                }
            }
        }
        if self.basis[self.unit].degree != 0 {
            return Err(Error::InvalidAlgebra("unit must sit in degree 0".into()));
        }
        // Degree-additivity: b_i * b_j lands in degree |b_i| + |b_j|.
        for i in 0..dim {
            for j in 0..dim {
                let want = self.basis[i].degree + self.basis[j].degree;
                for k in 0..dim {
                    if !self.table[i][j][k].is_zero() && self.basis[k].degree != want {
                        return Err(Error::InvalidAlgebra(format!(
                            "product {}*{} has a component in degree {} instead of {}",
                            self.basis[i].name, self.basis[j].name, self.basis[k].degree, want
                        )));
                    }
                }
            }
        }
        // Associativity on all basis triples.
        for i in 0..dim {
            for j in 0..dim {
                let ij = self.table[i][j].clone();
                for k in 0..dim {
                    let ij_k = self.mul_vectors(&ij, &self.basis_vector(k));
                    let jk = self.table[j][k].clone();
                    let i_jk = self.mul_vectors(&self.basis_vector(i), &jk);
                    if ij_k != i_jk {
                        return Err(Error::InvalidAlgebra(format!(
                            "associativity fails on ({}, {}, {})",
                            self.basis[i].name, self.basis[j].name, self.basis[k].name
                        )));
                    }
                }
            }
        }
        if self.graded_commutative {
            for i in 0..dim {
                for j in 0..dim {
                    let ij = &self.table[i][j];
                    let ji = &self.table[j][i];
                    let sign = self
                        .field
                        .sign(self.basis[i].degree * self.basis[j].degree);
                    for k in 0..dim {
                        if ij[k] != self.field.mul(&sign, &ji[k]) {
                            return Err(Error::InvalidAlgebra(format!(
                                "graded commutativity fails on ({}, {})",
                                self.basis[i].name, self.basis[j].name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn is_graded_commutative(&self) -> bool {
        self.graded_commutative
    }

    /// True when every basis element has even degree; the sign-free fast
    /// path in module calculus applies.
    pub fn is_even_concentrated(&self) -> bool {
        self.basis.iter().all(|b| b.degree % 2 == 0)
    }

    pub fn max_degree(&self) -> i64 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// Idempotents recorded by [`GradedAlgebra::product`], if any.
    pub fn factor_idempotents(&self) -> Option<&[Vec<Scalar>]> {
        self.factor_idempotents.as_deref()
    }

    fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    /// Raw coefficient-vector product via the structure constants.
    pub fn mul_vectors(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = f.add(&out[k], &f.mul(&c, t));
                    }
                }
            }
        }
        out
    }
}

impl AlgebraElement {
    pub fn new(algebra: &Arc<GradedAlgebra>, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::Dimension(format!(
                "coefficient vector length {} does not match algebra dimension {}",
                coeffs.len(),
                algebra.dim()
            )));
        }
        if !coeffs.iter().all(|c| algebra.field.contains(c)) {
            return Err(Error::FieldMismatch);
        }
        Ok(Self {
            algebra: Arc::clone(algebra),
            coeffs,
        })
    }

    pub fn zero(algebra: &Arc<GradedAlgebra>) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            coeffs: vec![algebra.field.zero(); algebra.dim()],
        }
    }

    pub fn unit(algebra: &Arc<GradedAlgebra>) -> Self {
        Self::basis(algebra, algebra.unit)
    }

    pub fn basis(algebra: &Arc<GradedAlgebra>, i: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coeffs[i] = algebra.field.one();
        e
    }

    pub fn from_coeffs(algebra: &Arc<GradedAlgebra>, coeffs: Vec<Scalar>) -> Result<Self> {
        Self::new(algebra, coeffs)
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn same_algebra(&self, other: &AlgebraElement) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        let f = &self.algebra.field;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Ok(AlgebraElement {
            algebra: Arc::clone(&self.algebra),
            coeffs,
        })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&other.scale(&self.algebra.field.sign(1)))
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        let f = &self.algebra.field;
        AlgebraElement {
            algebra: Arc::clone(&self.algebra),
            coeffs: self.coeffs.iter().map(|x| f.mul(c, x)).collect(),
        }
    }

    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(AlgebraElement {
            algebra: Arc::clone(&self.algebra),
            coeffs: self.algebra.mul_vectors(&self.coeffs, &other.coeffs),
        })
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degree = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = self.algebra.basis[i].degree;
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 == d => {}
                Some(_) => return Homogeneity::Mixed,
            }
        }
        match degree {
            None => Homogeneity::Zero,
            Some(d) => Homogeneity::Degree(d),
        }
    }

    /// Degree of a homogeneous nonzero element.
    pub fn degree(&self) -> Result<i64> {
        match self.homogeneity() {
            Homogeneity::Degree(d) => Ok(d),
            Homogeneity::Zero => Err(Error::Degree("zero element has no degree".into())),
            Homogeneity::Mixed => Err(Error::NotHomogeneous),
        }
    }

    /// Graded centrality: `a·b = (-1)^{|a||b|} b·a` against every basis
    /// element. For elements of even degree this is ordinary centrality.
    pub fn is_graded_central(&self) -> Result<bool> {
        let d = match self.homogeneity() {
            Homogeneity::Zero => return Ok(true),
            Homogeneity::Degree(d) => d,
            Homogeneity::Mixed => return Err(Error::NotHomogeneous),
        };
        let f = &self.algebra.field;
        for i in 0..self.algebra.dim() {
            let b = AlgebraElement::basis(&self.algebra, i);
            let ab = self.mul(&b)?;
            let ba = b.mul(self)?;
            let sign = f.sign(d * self.algebra.basis[i].degree);
            if ab.coeffs != ba.scale(&sign).coeffs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the element is invertible, decided exactly via the rank of
    /// left multiplication.
    pub fn is_invertible(&self) -> bool {
        let dim = self.algebra.dim();
        let f = self.algebra.field;
        let mut m = Matrix::zeros(f, dim, dim);
        for j in 0..dim {
            let col = self
                .algebra
                .mul_vectors(&self.coeffs, &self.algebra.basis_vector(j));
            for (i, c) in col.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m.rank() == dim
    }

    /// Nilpotency test; in a finite-dimensional algebra an element is
    /// nilpotent iff its dim-th power vanishes.
    pub fn is_nilpotent(&self) -> bool {
        let mut p = self.clone();
        for _ in 1..=self.algebra.dim() {
            if p.is_zero() {
                return true;
            }
            p = p.mul(self).expect("same algebra");
        }
        p.is_zero()
    }

    /// Two-sided inverse, when it exists.
    pub fn inverse(&self) -> Result<AlgebraElement> {
        let dim = self.algebra.dim();
        let f = self.algebra.field;
        let mut m = Matrix::zeros(f, dim, dim);
        for j in 0..dim {
            let col = self
                .algebra
                .mul_vectors(&self.coeffs, &self.algebra.basis_vector(j));
            for (i, c) in col.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        let mut unit = vec![f.zero(); dim];
        unit[self.algebra.unit] = f.one();
        match m.solve(&unit)? {
            Some(x) => AlgebraElement::new(&self.algebra, x),
            None => Err(Error::DivisionByZero),
        }
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.coeffs == other.coeffs
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", c, self.algebra.basis[i].name)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
