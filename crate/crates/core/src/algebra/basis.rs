//! Normal-form basis of `kQ/I` by degree-truncated reduction.

use std::collections::HashMap;

use super::quiver::{AlgebraSpec, Path};
use super::{Algebra, AlgebraKind, Sparse};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{Echelon, Matrix};

pub const DEFAULT_PATH_BOUND: usize = 32;

/// Computes a basis and structure constants of `kQ/I`.
///
/// For `N = 2, 3, …` the ideal is truncated modulo paths of length `> N`;
/// once every path of length `N` lies in the truncated ideal, `J^N ⊆ I` up to
/// higher terms and the algebra is `kQ/(I + J^N)`. Normal forms are the paths
/// that are not leading terms, paths being ordered by length and then
/// lexicographically by arrow name.
pub fn compute_basis<F: Scalar>(spec: &AlgebraSpec, bound: usize) -> Result<Algebra<F>> {
    if F::spec() != spec.field {
        return Err(Error::Semantic(format!("algebra is over {} but the engine was instantiated over {}", spec.field, F::spec())));
    }
    let q = &spec.quiver;
    let mut found = None;
    for n in 2..=bound.max(2) {
        let paths = all_paths(spec, n);
        let index = path_index(&paths);
        let gens = ideal_generators::<F>(spec, n, &paths, &index);
        let rank = Matrix::from_rows(&gens, paths.len()).rank();
        let mut with_top = gens.clone();
        for p in paths.iter().filter(|p| p.len() == n) {
            with_top.push(crate::linalg::unit_vector(paths.len(), index[p]));
        }
        let top_rank = Matrix::from_rows(&with_top, paths.len()).rank();
        if top_rank == rank {
            found = Some((n, paths, index, with_top));
            break;
        }
    }
    let Some((_, paths, index, rows)) = found else {
        return Err(Error::NotFiniteDimensional { bound });
    };

    // Columns ordered largest path first so that pivots are leading terms.
    let order: Vec<usize> = (0..paths.len()).rev().collect();
    let col_of: Vec<usize> = {
        let mut v = vec![0; paths.len()];
        for (c, &p) in order.iter().enumerate() {
            v[p] = c;
        }
        v
    };
    let permuted: Vec<Vec<F>> = rows
        .iter()
        .map(|r| {
            let mut out = vec![F::zero(); r.len()];
            for (p, x) in r.iter().enumerate() {
                out[col_of[p]] = x.clone();
            }
            out
        })
        .collect();
    let ech = Echelon::new(&Matrix::from_rows(&permuted, paths.len()), false);
    let mut pivot_row: HashMap<usize, usize> = HashMap::new();
    for (r, &c) in ech.pivots.iter().enumerate() {
        pivot_row.insert(order[c], r);
    }

    let k = q.num_vertices();
    let normal: Vec<usize> = (0..paths.len()).filter(|p| !pivot_row.contains_key(p)).collect();
    let dim = k + normal.len();
    let mut basis_of_path: HashMap<usize, usize> = HashMap::new();
    for (i, &p) in normal.iter().enumerate() {
        basis_of_path.insert(p, k + i);
    }

    // Reduction of a nontrivial path (by index) to basis coordinates.
    let reduce = |p: usize| -> Sparse<F> {
        if let Some(&b) = basis_of_path.get(&p) {
            return vec![(b, F::one())];
        }
        let r = pivot_row[&p];
        let mut out = Vec::new();
        for &np in &normal {
            let c = ech.reduced.get(r, col_of[np]);
            if !c.is_zero() {
                out.push((basis_of_path[&np], -c.clone()));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        out
    };

    let mut labels: Vec<String> = q.vertices.iter().map(|v| format!("e{v}")).collect();
    let mut left_vertex: Vec<usize> = (0..k).collect();
    let mut right_vertex: Vec<usize> = (0..k).collect();
    let mut basis_paths: Vec<Path> = vec![Vec::new(); k];
    for &p in &normal {
        let path = &paths[p];
        let (s, t) = q.endpoints(path).expect("composable");
        labels.push(q.path_name(path));
        left_vertex.push(s);
        right_vertex.push(t);
        basis_paths.push(path.clone());
    }

    let mut mult = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            if right_vertex[i] != left_vertex[j] {
                continue;
            }
            mult[i][j] = match (i < k, j < k) {
                (true, true) => vec![(i, F::one())],
                (true, false) => vec![(j, F::one())],
                (false, true) => vec![(i, F::one())],
                (false, false) => {
                    let mut cat = basis_paths[i].clone();
                    cat.extend_from_slice(&basis_paths[j]);
                    match index.get(&cat) {
                        Some(&p) => reduce(p),
                        None => Vec::new(),
                    }
                }
            };
        }
    }

    let radical: Vec<bool> = (0..dim).map(|b| b >= k).collect();
    let radical_generators: Vec<usize> = (k..dim).filter(|&b| basis_paths[b].len() == 1).collect();
    let vertex_of_trivial = (0..dim).map(|b| (b < k).then_some(b)).collect();
    let alg = Algebra::from_parts(
        spec.field,
        labels,
        mult,
        (0..k).collect(),
        left_vertex,
        right_vertex,
        radical,
        radical_generators,
        AlgebraKind::Quiver { spec: spec.clone(), paths: basis_paths, vertex_of_trivial },
    );
    alg.check_structure().map_err(Error::Construction)?;
    Ok(alg)
}

/// Nontrivial paths of length `1..=n` in length-lex order.
fn all_paths(spec: &AlgebraSpec, n: usize) -> Vec<Path> {
    (1..=n).flat_map(|l| spec.quiver.paths_of_length(l)).collect()
}

fn path_index(paths: &[Path]) -> HashMap<Path, usize> {
    paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect()
}

/// Spanning set of the ideal modulo paths longer than `n`: all `u r v`.
fn ideal_generators<F: Scalar>(spec: &AlgebraSpec, n: usize, paths: &[Path], index: &HashMap<Path, usize>) -> Vec<Vec<F>> {
    let q = &spec.quiver;
    let mut out = Vec::new();
    for rel in &spec.relations {
        let (s, t) = q.endpoints(&rel.terms[0].path).expect("validated");
        let min_len = rel.terms.iter().map(|t| t.path.len()).min().unwrap_or(0);
        if min_len > n {
            continue;
        }
        let lefts: Vec<&[usize]> = std::iter::once(&[][..])
            .chain(paths.iter().filter(|p| q.endpoints(p).map(|e| e.1) == Some(s)).map(|p| p.as_slice()))
            .collect();
        let rights: Vec<&[usize]> = std::iter::once(&[][..])
            .chain(paths.iter().filter(|p| q.endpoints(p).map(|e| e.0) == Some(t)).map(|p| p.as_slice()))
            .collect();
        for u in &lefts {
            for v in &rights {
                if u.len() + min_len + v.len() > n {
                    continue;
                }
                let mut row = vec![F::zero(); paths.len()];
                for term in &rel.terms {
                    let mut p = u.to_vec();
                    p.extend_from_slice(&term.path);
                    p.extend_from_slice(v);
                    if let Some(&i) = index.get(&p) {
                        row[i] = row[i].clone() + F::from_i64(term.coeff);
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    out.push(row);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::test_algebras::*;
    use super::*;
    use crate::field::{Fp, Rational};

    type F3 = Fp<3>;
    type F5 = Fp<5>;

    #[test]
    fn loop_algebra_basis() {
        let a = loop_algebra::<F3>();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.labels(), &["e1".to_string(), "x".to_string()]);
    }

    #[test]
    fn nakayama_dimensions() {
        let a = nakayama::<F5>(2, 2);
        assert_eq!(a.labels(), &["e1", "e2", "a1", "a2"]);
        for n in 1..=3 {
            for s in 2..=4 {
                // n vertices, one path of each length < s from each vertex
                assert_eq!(nakayama::<F5>(n, s).dim(), n * s, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn preprojective_dimensions() {
        assert_eq!(preprojective_a3::<F5>().dim(), 10);
        let a2 = parse::<Rational>(
            r#"{"field":0,"vertices":["1","2"],
              "arrows":[{"name":"a","from":"1","to":"2"},{"name":"as","from":"2","to":"1"}],
              "relations":[[{"coeff":1,"path":["a","as"]}],[{"coeff":1,"path":["as","a"]}]]}"#,
        );
        assert_eq!(a2.dim(), 4);
    }

    #[test]
    fn free_loop_is_rejected() {
        let spec = crate::algebra::parse_algebra(r#"{"field":3,"vertices":["1"],"arrows":[{"name":"x","from":"1","to":"1"}]}"#).unwrap();
        assert!(matches!(compute_basis::<F3>(&spec, 8), Err(Error::NotFiniteDimensional { bound: 8 })));
    }

    #[test]
    fn commutativity_relation_reduces_to_smaller_path() {
        // two parallel paths identified: a*b = c*d
        let a = parse::<F5>(
            r#"{"field":5,"vertices":["1","2","3","4"],
              "arrows":[{"name":"a","from":"1","to":"2"},{"name":"b","from":"2","to":"4"},
                        {"name":"c","from":"1","to":"3"},{"name":"d","from":"3","to":"4"}],
              "relations":[[{"coeff":1,"path":["a","b"]},{"coeff":-1,"path":["c","d"]}]]}"#,
        );
        assert_eq!(a.dim(), 9);
        let ai = a.labels().iter().position(|l| l == "a").unwrap();
        let bi = a.labels().iter().position(|l| l == "b").unwrap();
        let ci = a.labels().iter().position(|l| l == "c").unwrap();
        let di = a.labels().iter().position(|l| l == "d").unwrap();
        assert_eq!(a.mult(ai, bi), a.mult(ci, di));
    }
}
