//! Finite directed graphs and their path semilattice.
//!
//! Paths are stored range first: `edges[0]` is the first edge and its range
//! is the range of the path. Consecutive edges satisfy
//! `src(edges[i]) == rng(edges[i + 1])`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::validation::Validation;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub name: String,
    pub src: String,
    pub rng: String,
}

/// JSON form of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub rng: usize,
}

#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vidx: HashMap<String, usize>,
    eidx: HashMap<String, usize>,
    incoming: Vec<Vec<usize>>,
}

/// A finite path; a vertex is the path of length zero based at it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub base: usize,
    pub edges: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexClass {
    Source,
    Regular,
}

impl Path {
    pub fn vertex(v: usize) -> Self {
        Path { base: v, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn rg(&self) -> usize {
        self.base
    }

    /// First `n` edges, as a path with the same range.
    pub fn prefix(&self, n: usize) -> Path {
        Path { base: self.base, edges: self.edges[..n].to_vec() }
    }

    /// `self` is a prefix of `other`, i.e. `other = self · rest`.
    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.base == other.base
            && self.edges.len() <= other.edges.len()
            && other.edges[..self.edges.len()] == self.edges[..]
    }

    /// The remainder `rest` with `self = p · rest`, if `p` is a prefix.
    pub fn strip_prefix(&self, p: &Path, g: &Graph) -> Option<Path> {
        if !p.is_prefix_of(self) {
            return None;
        }
        Some(Path { base: g.path_sr(p), edges: self.edges[p.len()..].to_vec() })
    }
}

impl Graph {
    pub fn from_spec(spec: &GraphSpec) -> Result<Self> {
        validate_graph(spec).into_result()?;
        let vidx: HashMap<String, usize> =
            spec.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut eidx = HashMap::new();
        let mut incoming = vec![Vec::new(); spec.vertices.len()];
        for (i, e) in spec.edges.iter().enumerate() {
            let (src, rng) = (vidx[&e.src], vidx[&e.rng]);
            edges.push(Edge { name: e.name.clone(), src, rng });
            eidx.insert(e.name.clone(), i);
            incoming[rng].push(i);
        }
        Ok(Graph { vertices: spec.vertices.clone(), edges, vidx, eidx, incoming })
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    name: e.name.clone(),
                    src: self.vertices[e.src].clone(),
                    rng: self.vertices[e.rng].clone(),
                })
                .collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.vidx.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge(&self, name: &str) -> Result<usize> {
        self.eidx.get(name).copied().ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edges[e].name
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn src(&self, e: usize) -> usize {
        self.edges[e].src
    }

    pub fn rng(&self, e: usize) -> usize {
        self.edges[e].rng
    }

    /// The edges with range `v`, i.e. `vE^1`, in declaration order.
    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.incoming[v].len()
    }

    pub fn has_source(&self) -> bool {
        (0..self.num_vertices()).any(|v| self.in_degree(v) == 0)
    }

    pub fn path_sr(&self, p: &Path) -> usize {
        p.edges.last().map_or(p.base, |&e| self.src(e))
    }

    pub fn is_path(&self, p: &Path) -> bool {
        if p.base >= self.num_vertices() {
            return false;
        }
        let mut cur = p.base;
        for &e in &p.edges {
            if e >= self.num_edges() || self.rng(e) != cur {
                return false;
            }
            cur = self.src(e);
        }
        true
    }

    pub fn check_path(&self, p: &Path) -> Result<()> {
        if self.is_path(p) {
            Ok(())
        } else {
            Err(Error::NotAPath(self.path_str(p)))
        }
    }

    /// Builds a path from edge names; an empty list needs `base`.
    pub fn path_from_names<S: AsRef<str>>(&self, base: Option<&str>, names: &[S]) -> Result<Path> {
        let edges = names.iter().map(|n| self.edge(n.as_ref())).collect::<Result<Vec<_>>>()?;
        let base = match (base, edges.first()) {
            (Some(b), _) => self.vertex(b)?,
            (None, Some(&e)) => self.rng(e),
            (None, None) => return Err(Error::NotAPath("empty path without a vertex".into())),
        };
        let p = Path { base, edges };
        self.check_path(&p)?;
        Ok(p)
    }

    pub fn concat(&self, a: &Path, b: &Path) -> Result<Path> {
        if self.path_sr(a) != b.base {
            return Err(Error::NotAPath(format!(
                "cannot concatenate {} and {}",
                self.path_str(a),
                self.path_str(b)
            )));
        }
        let mut edges = a.edges.clone();
        edges.extend_from_slice(&b.edges);
        Ok(Path { base: a.base, edges })
    }

    pub fn path_str(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            return self.vertices.get(p.base).cloned().unwrap_or_else(|| "?".into());
        }
        let mut s = String::new();
        for (i, &e) in p.edges.iter().enumerate() {
            if i > 0 {
                s.push('.');
            }
            let _ = write!(s, "{}", self.edges.get(e).map_or("?", |x| x.name.as_str()));
        }
        s
    }

    pub fn path_names(&self, p: &Path) -> Vec<String> {
        p.edges.iter().map(|&e| self.edges[e].name.clone()).collect()
    }

    /// All paths `p·q` with `|q| <= n`, in length-then-lexicographic order.
    pub fn extensions(&self, p: &Path, n: usize) -> Vec<Path> {
        let mut out = vec![p.clone()];
        let mut frontier = vec![p.clone()];
        for _ in 0..n {
            let mut next = Vec::new();
            for q in &frontier {
                for &e in self.incoming(self.path_sr(q)) {
                    let mut r = q.clone();
                    r.edges.push(e);
                    next.push(r);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// All paths of length exactly `n` with range `v`.
    pub fn paths_of_length(&self, v: usize, n: usize) -> Vec<Path> {
        let mut frontier = vec![Path::vertex(v)];
        for _ in 0..n {
            let mut next = Vec::new();
            for q in &frontier {
                for &e in self.incoming(self.path_sr(q)) {
                    let mut r = q.clone();
                    r.edges.push(e);
                    next.push(r);
                }
            }
            frontier = next;
        }
        frontier
    }

    /// All paths of length at most `n`, grouped by range vertex.
    pub fn all_paths(&self, n: usize) -> Vec<Path> {
        (0..self.num_vertices()).flat_map(|v| self.extensions(&Path::vertex(v), n)).collect()
    }

    /// Vertices `rg(μ_1), …, rg(μ_n), sr(μ)`.
    pub fn base_vertices(&self, p: &Path) -> Vec<usize> {
        let mut out = vec![p.base];
        out.extend(p.edges.iter().map(|&e| self.src(e)));
        out
    }

    pub fn vertex_class(&self, v: usize) -> Result<VertexClass> {
        if v >= self.num_vertices() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(if self.in_degree(v) == 0 { VertexClass::Source } else { VertexClass::Regular })
    }

    /// Some base vertex receives at least two edges.
    pub fn has_entrance(&self, p: &Path) -> bool {
        self.base_vertices(p).into_iter().any(|v| self.in_degree(v) >= 2)
    }

    pub fn comparable(&self, a: &Path, b: &Path) -> Result<bool> {
        self.check_path(a)?;
        self.check_path(b)?;
        Ok(a.is_prefix_of(b) || b.is_prefix_of(a))
    }

    /// Whether every extension of `a` is comparable with a member of `f`.
    pub fn covers(&self, a: &Path, f: &[Path]) -> Result<bool> {
        Ok(self.cover_gap(a, f)?.is_none())
    }

    /// An extension of `a` comparable with no member of `f`, if one exists.
    ///
    /// Only extensions up to the longest member of `f` need checking: a
    /// terminal extension (of that length, or ending at a source) that is
    /// comparable with some member settles all its prefixes and extensions.
    pub fn cover_gap(&self, a: &Path, f: &[Path]) -> Result<Option<Path>> {
        self.check_path(a)?;
        for p in f {
            self.check_path(p)?;
            if !a.is_prefix_of(p) {
                return Err(Error::Invalid(format!(
                    "{} does not extend {}",
                    self.path_str(p),
                    self.path_str(a)
                )));
            }
        }
        let depth = f.iter().map(|p| p.len()).max().unwrap_or(a.len()) - a.len();
        let mut stack = vec![a.clone()];
        while let Some(x) = stack.pop() {
            if f.iter().any(|p| p.is_prefix_of(&x)) {
                continue;
            }
            let succ = self.incoming(self.path_sr(&x));
            if x.len() - a.len() >= depth || succ.is_empty() {
                if !f.iter().any(|p| x.is_prefix_of(p)) {
                    return Ok(Some(x));
                }
                continue;
            }
            for &e in succ.iter().rev() {
                let mut y = x.clone();
                y.edges.push(e);
                stack.push(y);
            }
        }
        Ok(None)
    }

    /// Reflexive-transitive closure of "there is an edge with range `x` and
    /// source `y`": `reach[x][y]` iff `xE^*y` is non-empty.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.num_vertices();
        let mut reach = vec![vec![false; n]; n];
        for (x, row) in reach.iter_mut().enumerate() {
            let mut stack = vec![x];
            row[x] = true;
            while let Some(y) = stack.pop() {
                for &e in self.incoming(y) {
                    let z = self.src(e);
                    if !row[z] {
                        row[z] = true;
                        stack.push(z);
                    }
                }
            }
        }
        reach
    }

    /// `plus[x][y]` iff there is a path of positive length from range `x` to source `y`.
    pub fn reachability_plus(&self) -> Vec<Vec<bool>> {
        let reach = self.reachability();
        let n = self.num_vertices();
        let mut plus = vec![vec![false; n]; n];
        for x in 0..n {
            for &e in self.incoming(x) {
                let z = self.src(e);
                for y in 0..n {
                    if reach[z][y] {
                        plus[x][y] = true;
                    }
                }
            }
        }
        plus
    }
}

pub fn validate_graph(spec: &GraphSpec) -> Validation {
    let mut report = Validation::new();
    if spec.vertices.is_empty() {
        report.push("vertex set is empty");
    }
    let mut seen = BTreeSet::new();
    for v in &spec.vertices {
        if !seen.insert(v.as_str()) {
            report.push(format!("duplicate vertex `{v}`"));
        }
    }
    let mut names = BTreeSet::new();
    for e in &spec.edges {
        if !names.insert(e.name.as_str()) {
            report.push(format!("duplicate edge `{}`", e.name));
        }
        for (role, v) in [("src", &e.src), ("rng", &e.rng)] {
            if !seen.contains(v.as_str()) {
                report.push(format!("edge `{}` has undeclared {role} `{v}`", e.name));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loops() -> Graph {
        Graph::from_spec(&GraphSpec {
            vertices: vec!["v".into()],
            edges: vec![
                EdgeSpec { name: "e".into(), src: "v".into(), rng: "v".into() },
                EdgeSpec { name: "f".into(), src: "v".into(), rng: "v".into() },
            ],
        })
        .unwrap()
    }

    fn spoke() -> Graph {
        Graph::from_spec(&GraphSpec {
            vertices: vec!["v".into(), "w".into()],
            edges: vec![
                EdgeSpec { name: "e".into(), src: "w".into(), rng: "v".into() },
                EdgeSpec { name: "f".into(), src: "w".into(), rng: "w".into() },
            ],
        })
        .unwrap()
    }

    #[test]
    fn validation_catches_bad_specs() {
        let bad = GraphSpec {
            vertices: vec!["v".into()],
            edges: vec![EdgeSpec { name: "e".into(), src: "x".into(), rng: "v".into() }],
        };
        let r = validate_graph(&bad);
        assert!(r.violations.iter().any(|m| m.contains("`e`")));
        let empty = GraphSpec { vertices: vec![], edges: vec![] };
        assert!(!validate_graph(&empty).is_ok());
        assert!(validate_graph(&loops().to_spec()).is_ok());
    }

    #[test]
    fn comparability() {
        let g = loops();
        let e = g.path_from_names(None, &["e"]).unwrap();
        let ef = g.path_from_names(None, &["e", "f"]).unwrap();
        let f = g.path_from_names(None, &["f"]).unwrap();
        let v = Path::vertex(0);
        assert!(g.comparable(&e, &ef).unwrap());
        assert!(!g.comparable(&e, &f).unwrap());
        assert!(g.comparable(&v, &e).unwrap());
    }

    #[test]
    fn covers_examples() {
        let g = loops();
        let v = Path::vertex(0);
        let e = g.path_from_names(None, &["e"]).unwrap();
        let f = g.path_from_names(None, &["f"]).unwrap();
        assert!(g.covers(&v, &[e.clone(), f.clone()]).unwrap());
        assert_eq!(g.cover_gap(&v, &[e]).unwrap(), Some(f));
        let src = Graph::from_spec(&GraphSpec { vertices: vec!["s".into()], edges: vec![] }).unwrap();
        // the vertex itself is an extension comparable with nothing in the empty set
        assert!(!src.covers(&Path::vertex(0), &[]).unwrap());
        assert!(src.covers(&Path::vertex(0), &[Path::vertex(0)]).unwrap());
    }

    #[test]
    fn classes_and_entrances() {
        let g = spoke();
        assert_eq!(g.vertex_class(1).unwrap(), VertexClass::Regular);
        let f = g.path_from_names(None, &["f"]).unwrap();
        assert!(!g.has_entrance(&f));
        let iso = Graph::from_spec(&GraphSpec { vertices: vec!["s".into()], edges: vec![] }).unwrap();
        assert_eq!(iso.vertex_class(0).unwrap(), VertexClass::Source);
        assert!(!iso.has_entrance(&Path::vertex(0)));
        let l = loops();
        assert!(l.has_entrance(&l.path_from_names(None, &["e"]).unwrap()));
    }
}
