//! Finite-dimensional basic algebras given by structure constants.
//!
//! An [`Algebra`] has a basis in which every element `b` satisfies
//! `e_l b e_r = b` for a unique pair of primitive idempotents (its left and
//! right vertex) and is either one of those idempotents or lies in the
//! radical. Path algebras modulo admissible ideals have such a basis, and so
//! does `A^e = A^op ⊗ A` with the tensor basis.

mod automorphism;
mod basis;
mod nakayama;
pub mod quiver;

use std::sync::Arc;

pub use automorphism::{verify_automorphism, Automorphism};
pub use basis::{compute_basis, DEFAULT_PATH_BOUND};
pub use nakayama::{check_self_injective, NakayamaData};
pub use quiver::{parse_algebra, AlgebraSpec, Arrow, Path, Quiver, Relation, RelationTerm};

use crate::field::{FieldSpec, Scalar};

/// Sparse coordinate vector.
pub type Sparse<F> = Vec<(usize, F)>;

#[derive(Clone, Debug)]
pub enum AlgebraKind<F> {
    /// `kQ/I` with its normal-form paths; trivial paths are empty.
    Quiver { spec: AlgebraSpec, paths: Vec<Path>, vertex_of_trivial: Vec<Option<usize>> },
    /// `A^op ⊗_k A`, basis element `u ⊗ v` at index `u * dim A + v`.
    Enveloping { base: Arc<Algebra<F>> },
}

#[derive(Clone, Debug)]
pub struct Algebra<F> {
    field: FieldSpec,
    labels: Vec<String>,
    mult: Vec<Vec<Sparse<F>>>,
    vertex_elements: Vec<usize>,
    left_vertex: Vec<usize>,
    right_vertex: Vec<usize>,
    radical: Vec<bool>,
    radical_generators: Vec<usize>,
    kind: AlgebraKind<F>,
}

impl<F: Scalar> Algebra<F> {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_elements.len()
    }

    pub fn label(&self, b: usize) -> &str {
        &self.labels[b]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self) -> &AlgebraKind<F> {
        &self.kind
    }

    pub fn quiver(&self) -> Option<&Quiver> {
        match &self.kind {
            AlgebraKind::Quiver { spec, .. } => Some(&spec.quiver),
            AlgebraKind::Enveloping { .. } => None,
        }
    }

    pub fn spec(&self) -> Option<&AlgebraSpec> {
        match &self.kind {
            AlgebraKind::Quiver { spec, .. } => Some(spec),
            AlgebraKind::Enveloping { .. } => None,
        }
    }

    /// For `A^e`, the algebra `A`.
    pub fn enveloping_base(&self) -> Option<&Arc<Algebra<F>>> {
        match &self.kind {
            AlgebraKind::Enveloping { base } => Some(base),
            AlgebraKind::Quiver { .. } => None,
        }
    }

    /// Structure constants of `b_i * b_j`.
    #[inline]
    pub fn mult(&self, i: usize, j: usize) -> &Sparse<F> {
        &self.mult[i][j]
    }

    /// Basis index of the idempotent of vertex `v`.
    pub fn vertex_element(&self, v: usize) -> usize {
        self.vertex_elements[v]
    }

    pub fn vertex_elements(&self) -> &[usize] {
        &self.vertex_elements
    }

    pub fn left_vertex(&self, b: usize) -> usize {
        self.left_vertex[b]
    }

    pub fn right_vertex(&self, b: usize) -> usize {
        self.right_vertex[b]
    }

    pub fn is_radical(&self, b: usize) -> bool {
        self.radical[b]
    }

    /// Basis elements generating the radical as a two-sided ideal.
    pub fn radical_generators(&self) -> &[usize] {
        &self.radical_generators
    }

    /// Basis of the indecomposable projective `e_v Λ`.
    pub fn projective_basis(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.left_vertex[b] == v).collect()
    }

    /// Basis of `Λ e_v`.
    pub fn left_projective_basis(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.right_vertex[b] == v).collect()
    }

    pub fn one(&self) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim()];
        for &e in &self.vertex_elements {
            v[e] = F::one();
        }
        v
    }

    pub fn basis_vector(&self, b: usize) -> Vec<F> {
        crate::linalg::unit_vector(self.dim(), b)
    }

    /// Product of two elements given in coordinates.
    pub fn multiply(&self, x: &[F], y: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                for (k, c) in &self.mult[i][j] {
                    out[*k] = out[*k].clone() + xi.clone() * yj.clone() * c.clone();
                }
            }
        }
        out
    }

    /// Checks associativity on all basis triples and the idempotent relations.
    pub fn check_structure(&self) -> Result<(), String> {
        let d = self.dim();
        for &e in &self.vertex_elements {
            for &f in &self.vertex_elements {
                let expect = if e == f { vec![(e, F::one())] } else { vec![] };
                if self.mult[e][f] != expect {
                    return Err(format!("idempotents {} and {} are not orthogonal", self.labels[e], self.labels[f]));
                }
            }
        }
        let one = self.one();
        for b in 0..d {
            let bv = self.basis_vector(b);
            if self.multiply(&one, &bv) != bv || self.multiply(&bv, &one) != bv {
                return Err(format!("idempotents do not sum to the unit on {}", self.labels[b]));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij = sparse_to_dense(&self.mult[i][j], d);
                for k in 0..d {
                    let left = self.multiply(&ij, &self.basis_vector(k));
                    let jk = sparse_to_dense(&self.mult[j][k], d);
                    let right = self.multiply(&self.basis_vector(i), &jk);
                    if left != right {
                        return Err(format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn from_parts(
        field: FieldSpec,
        labels: Vec<String>,
        mult: Vec<Vec<Sparse<F>>>,
        vertex_elements: Vec<usize>,
        left_vertex: Vec<usize>,
        right_vertex: Vec<usize>,
        radical: Vec<bool>,
        radical_generators: Vec<usize>,
        kind: AlgebraKind<F>,
    ) -> Self {
        Algebra { field, labels, mult, vertex_elements, left_vertex, right_vertex, radical, radical_generators, kind }
    }

    pub fn same_as(&self, other: &Algebra<F>) -> bool {
        std::ptr::eq(self, other) || (self.labels == other.labels && self.mult == other.mult)
    }
}

pub fn sparse_to_dense<F: Scalar>(s: &Sparse<F>, d: usize) -> Vec<F> {
    let mut v = vec![F::zero(); d];
    for (i, c) in s {
        v[*i] = v[*i].clone() + c.clone();
    }
    v
}

pub fn dense_to_sparse<F: Scalar>(v: &[F]) -> Sparse<F> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// The enveloping algebra `A^e = A^op ⊗_k A`, so that right `A^e`-modules are
/// `A`-bimodules: `m · (u ⊗ v) = u m v`.
pub fn enveloping<F: Scalar>(a: &Arc<Algebra<F>>) -> Algebra<F> {
    let d = a.dim();
    let k = a.num_vertices();
    let mut labels = Vec::with_capacity(d * d);
    let mut left_vertex = Vec::with_capacity(d * d);
    let mut right_vertex = Vec::with_capacity(d * d);
    let mut radical = Vec::with_capacity(d * d);
    for u in 0..d {
        for v in 0..d {
            labels.push(format!("{}⊗{}", a.label(u), a.label(v)));
            left_vertex.push(a.right_vertex(u) * k + a.left_vertex(v));
            right_vertex.push(a.left_vertex(u) * k + a.right_vertex(v));
            radical.push(a.is_radical(u) || a.is_radical(v));
        }
    }
    let mut mult = vec![vec![Vec::new(); d * d]; d * d];
    for u in 0..d {
        for v in 0..d {
            for u2 in 0..d {
                // (u ⊗ v)(u2 ⊗ v2) = (u2 u) ⊗ (v v2)
                let left = a.mult(u2, u);
                if left.is_empty() {
                    continue;
                }
                for v2 in 0..d {
                    let right = a.mult(v, v2);
                    if right.is_empty() {
                        continue;
                    }
                    let mut prod = Vec::with_capacity(left.len() * right.len());
                    for (x, cx) in left {
                        for (y, cy) in right {
                            prod.push((x * d + y, cx.clone() * cy.clone()));
                        }
                    }
                    prod.sort_by_key(|(i, _)| *i);
                    mult[u * d + v][u2 * d + v2] = prod;
                }
            }
        }
    }
    let vertex_elements = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| a.vertex_element(i) * d + a.vertex_element(j))
        .collect();
    let mut radical_generators = Vec::new();
    for &g in a.radical_generators() {
        for j in 0..k {
            radical_generators.push(g * d + a.vertex_element(j));
            radical_generators.push(a.vertex_element(j) * d + g);
        }
    }
    radical_generators.sort_unstable();
    Algebra::from_parts(
        a.field(),
        labels,
        mult,
        vertex_elements,
        left_vertex,
        right_vertex,
        radical,
        radical_generators,
        AlgebraKind::Enveloping { base: Arc::clone(a) },
    )
}

#[cfg(test)]
pub(crate) mod test_algebras {
    use super::*;

    pub fn parse<F: Scalar>(json: &str) -> Arc<Algebra<F>> {
        let spec = parse_algebra(json).unwrap();
        Arc::new(compute_basis(&spec, DEFAULT_PATH_BOUND).unwrap())
    }

    pub fn semisimple<F: Scalar>() -> Arc<Algebra<F>> {
        parse(&format!(r#"{{"field":{},"vertices":["1"],"arrows":[]}}"#, F::spec().characteristic()))
    }

    pub fn loop_algebra<F: Scalar>() -> Arc<Algebra<F>> {
        parse(&format!(
            r#"{{"field":{},"vertices":["1"],"arrows":[{{"name":"x","from":"1","to":"1"}}],
                "relations":[[{{"coeff":1,"path":["x","x"]}}]]}}"#,
            F::spec().characteristic()
        ))
    }

    /// Self-injective Nakayama algebra on the cyclic quiver with `n` vertices,
    /// modulo all paths of length `s`.
    pub fn nakayama_json(p: u32, n: usize, s: usize) -> String {
        let vertices: Vec<String> = (1..=n).map(|i| format!("\"{i}\"")).collect();
        let arrows: Vec<String> = (1..=n)
            .map(|i| format!(r#"{{"name":"a{i}","from":"{i}","to":"{}"}}"#, i % n + 1))
            .collect();
        let relations: Vec<String> = (1..=n)
            .map(|i| {
                let path: Vec<String> = (0..s).map(|k| format!("\"a{}\"", (i - 1 + k) % n + 1)).collect();
                format!(r#"[{{"coeff":1,"path":[{}]}}]"#, path.join(","))
            })
            .collect();
        format!(
            r#"{{"field":{p},"vertices":[{}],"arrows":[{}],"relations":[{}]}}"#,
            vertices.join(","),
            arrows.join(","),
            relations.join(",")
        )
    }

    pub fn nakayama<F: Scalar>(n: usize, s: usize) -> Arc<Algebra<F>> {
        parse(&nakayama_json(F::spec().characteristic(), n, s))
    }

    pub fn a2_hereditary<F: Scalar>() -> Arc<Algebra<F>> {
        parse(&format!(
            r#"{{"field":{},"vertices":["1","2"],"arrows":[{{"name":"a","from":"1","to":"2"}}]}}"#,
            F::spec().characteristic()
        ))
    }

    pub fn preprojective_a3<F: Scalar>() -> Arc<Algebra<F>> {
        parse(&format!(
            r#"{{"field":{},"vertices":["1","2","3"],
              "arrows":[{{"name":"a","from":"1","to":"2"}},{{"name":"as","from":"2","to":"1"}},
                        {{"name":"b","from":"2","to":"3"}},{{"name":"bs","from":"3","to":"2"}}],
              "relations":[[{{"coeff":1,"path":["a","as"]}}],
                           [{{"coeff":1,"path":["as","a"]}},{{"coeff":-1,"path":["b","bs"]}}],
                           [{{"coeff":1,"path":["bs","b"]}}]]}}"#,
            F::spec().characteristic()
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::test_algebras::*;
    use super::*;
    use crate::field::Fp;

    type F3 = Fp<3>;

    #[test]
    fn enveloping_dimensions() {
        let ss = semisimple::<F3>();
        assert_eq!(enveloping(&ss).dim(), 1);
        let l = loop_algebra::<F3>();
        assert_eq!(enveloping(&l).dim(), 4);
    }

    #[test]
    fn enveloping_of_nakayama_is_associative() {
        let a = nakayama::<F3>(2, 2);
        let ae = enveloping(&a);
        assert_eq!(ae.dim(), 16);
        assert_eq!(ae.num_vertices(), 4);
        ae.check_structure().unwrap();
    }
}
