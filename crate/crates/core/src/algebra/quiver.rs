//! Quivers, relations and the JSON description format.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

/// A path is a sequence of arrow indices composed left to right.
pub type Path = Vec<usize>;

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.as_str(), i).is_some() {
                return Err(Error::Semantic(format!("duplicate vertex label {v:?}")));
            }
        }
        let mut names = HashMap::new();
        for a in &arrows {
            if names.insert(a.name.as_str(), ()).is_some() {
                return Err(Error::Semantic(format!("duplicate arrow name {:?}", a.name)));
            }
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::Semantic(format!("arrow {:?} has an undeclared endpoint", a.name)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Source and target of a nonempty path, or `None` if it is not composable.
    pub fn endpoints(&self, path: &[usize]) -> Option<(usize, usize)> {
        let first = self.arrows.get(*path.first()?)?;
        let mut at = first.target;
        for &a in &path[1..] {
            let arrow = self.arrows.get(a)?;
            if arrow.source != at {
                return None;
            }
            at = arrow.target;
        }
        Some((first.source, at))
    }

    pub fn path_name(&self, path: &[usize]) -> String {
        path.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }

    /// All paths of exactly `len >= 1` arrows, in length-lexicographic order
    /// on arrow names.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        let mut order: Vec<usize> = (0..self.arrows.len()).collect();
        order.sort_by(|&a, &b| self.arrows[a].name.cmp(&self.arrows[b].name));
        let mut current: Vec<Path> = order.iter().map(|&a| vec![a]).collect();
        for _ in 1..len {
            let mut next = Vec::new();
            for p in &current {
                let end = self.arrows[*p.last().unwrap()].target;
                for &a in &order {
                    if self.arrows[a].source == end {
                        let mut q = p.clone();
                        q.push(a);
                        next.push(q);
                    }
                }
            }
            current = next;
        }
        current
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTerm {
    pub coeff: i64,
    pub path: Path,
}

/// A linear combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<RelationTerm>,
}

/// Parsed, structurally validated algebra description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub field: FieldSpec,
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    field: u32,
    vertices: Vec<String>,
    arrows: Vec<RawArrow>,
    #[serde(default)]
    relations: Vec<Vec<RawTerm>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrow {
    name: String,
    from: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coeff: i64,
    path: Vec<String>,
}

/// Parses the JSON algebra format.
pub fn parse_algebra(text: &str) -> Result<AlgebraSpec> {
    let raw: RawAlgebra = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field = FieldSpec::from_characteristic(raw.field).ok_or(Error::UnsupportedField(raw.field))?;
    let index: HashMap<&str, usize> = raw.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut arrows = Vec::new();
    for a in &raw.arrows {
        let lookup = |v: &str| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| Error::Semantic(format!("arrow {:?} refers to unknown vertex {v:?}", a.name)))
        };
        arrows.push(Arrow { name: a.name.clone(), source: lookup(&a.from)?, target: lookup(&a.to)? });
    }
    let quiver = Quiver::new(raw.vertices.clone(), arrows)?;
    let mut relations = Vec::new();
    for (ri, r) in raw.relations.iter().enumerate() {
        if r.is_empty() {
            return Err(Error::Semantic(format!("relation {ri} has no terms")));
        }
        let mut terms = Vec::new();
        let mut ends = None;
        for t in r {
            let path = t
                .path
                .iter()
                .map(|n| quiver.arrow_index(n).ok_or_else(|| Error::Semantic(format!("relation {ri} uses unknown arrow {n:?}"))))
                .collect::<Result<Vec<_>>>()?;
            if path.len() < 2 {
                return Err(Error::NotAdmissible { index: ri, reason: format!("term of length {} (must be at least 2)", path.len()) });
            }
            let e = quiver
                .endpoints(&path)
                .ok_or_else(|| Error::Semantic(format!("relation {ri} contains a non-composable path {:?}", t.path)))?;
            match ends {
                None => ends = Some(e),
                Some(prev) if prev != e => {
                    return Err(Error::Semantic(format!("relation {ri} has non-parallel terms")));
                }
                _ => {}
            }
            terms.push(RelationTerm { coeff: t.coeff, path });
        }
        relations.push(Relation { terms });
    }
    Ok(AlgebraSpec { field, quiver, relations })
}

impl AlgebraSpec {
    /// Serializes back to the JSON input format.
    pub fn to_json(&self) -> serde_json::Value {
        let raw = RawAlgebra {
            field: self.field.characteristic(),
            vertices: self.quiver.vertices.clone(),
            arrows: self
                .quiver
                .arrows
                .iter()
                .map(|a| RawArrow {
                    name: a.name.clone(),
                    from: self.quiver.vertices[a.source].clone(),
                    to: self.quiver.vertices[a.target].clone(),
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.terms
                        .iter()
                        .map(|t| RawTerm {
                            coeff: t.coeff,
                            path: t.path.iter().map(|&a| self.quiver.arrows[a].name.clone()).collect(),
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_value(raw).expect("serializable")
    }

    /// A line-oriented dump of the parsed structure, used for golden files.
    pub fn token_dump(&self) -> String {
        let q = &self.quiver;
        let mut out = format!("field {}\n", self.field);
        for (i, v) in q.vertices.iter().enumerate() {
            out.push_str(&format!("vertex {i} {v}\n"));
        }
        for (i, a) in q.arrows.iter().enumerate() {
            out.push_str(&format!("arrow {i} {} {}->{}\n", a.name, q.vertices[a.source], q.vertices[a.target]));
        }
        for (i, r) in self.relations.iter().enumerate() {
            let (s, t) = q.endpoints(&r.terms[0].path).expect("validated");
            out.push_str(&format!("relation {i} {}->{}", q.vertices[s], q.vertices[t]));
            for term in &r.terms {
                out.push_str(&format!(" {:+}:{}", term.coeff, q.path_name(&term.path)));
            }
            out.push('\n');
        }
        out
    }
}
