//! Finite paths and eventually periodic infinite paths, in canonical form.

use crate::graph::{Graph, Path};
use crate::{Error, Result};

/// `prefix · period^∞`, or the finite path `prefix` when `period` is empty.
///
/// Canonical form: the period is primitive and the prefix is as short as
/// possible, so structural equality is equality of points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryPoint {
    pub base: usize,
    pub prefix: Vec<usize>,
    pub period: Vec<usize>,
}

impl BoundaryPoint {
    pub fn new(graph: &Graph, base: usize, prefix: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        let p = Path { base, edges: prefix };
        graph.check_path(&p)?;
        if !period.is_empty() {
            let cyc = Path { base: graph.rng(period[0]), edges: period.clone() };
            if !graph.is_path(&cyc) || graph.path_sr(&cyc) != cyc.base {
                return Err(Error::NotAPath("period is not a cycle".into()));
            }
            if graph.path_sr(&p) != cyc.base {
                return Err(Error::NotAPath("period does not start at the end of the prefix".into()));
            }
        }
        Ok(Self::canonical(base, p.edges, period))
    }

    pub fn finite(p: &Path) -> Self {
        BoundaryPoint { base: p.base, prefix: p.edges.clone(), period: Vec::new() }
    }

    fn canonical(base: usize, mut prefix: Vec<usize>, mut period: Vec<usize>) -> Self {
        if !period.is_empty() {
            let n = period.len();
            if let Some(d) = (1..=n).find(|&d| n % d == 0 && (0..n).all(|i| period[i] == period[i % d])) {
                period.truncate(d);
            }
            while let (Some(&a), Some(&b)) = (prefix.last(), period.last()) {
                if a != b {
                    break;
                }
                prefix.pop();
                period.rotate_right(1);
            }
        }
        BoundaryPoint { base, prefix, period }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn finite_len(&self) -> Option<usize> {
        self.is_finite().then_some(self.prefix.len())
    }

    pub fn pre(&self) -> usize {
        self.prefix.len()
    }

    pub fn per(&self) -> usize {
        self.period.len()
    }

    pub fn edge_at(&self, i: usize) -> Option<usize> {
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    /// Positions with equal keys have equal suffixes.
    pub fn key(&self, i: usize) -> usize {
        if i < self.prefix.len() || self.period.is_empty() {
            i
        } else {
            self.prefix.len() + (i - self.prefix.len()) % self.period.len()
        }
    }

    /// Number of distinct keys: an upper bound on the positions a walk must
    /// visit before suffixes repeat.
    pub fn key_count(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn vertex_at(&self, graph: &Graph, i: usize) -> usize {
        if i == 0 {
            self.base
        } else {
            graph.src(self.edge_at(i - 1).expect("position within the point"))
        }
    }

    /// The first `n` edges.
    pub fn take(&self, n: usize) -> Path {
        Path { base: self.base, edges: (0..n).map(|i| self.edge_at(i).expect("position within the point")).collect() }
    }

    /// The suffix after the first `n` edges.
    pub fn drop(&self, graph: &Graph, n: usize) -> BoundaryPoint {
        let base = self.vertex_at(graph, n);
        if self.is_finite() {
            return BoundaryPoint { base, prefix: self.prefix[n..].to_vec(), period: Vec::new() };
        }
        if n <= self.prefix.len() {
            return Self::canonical(base, self.prefix[n..].to_vec(), self.period.clone());
        }
        let mut period = self.period.clone();
        period.rotate_left((n - self.prefix.len()) % self.period.len());
        Self::canonical(base, Vec::new(), period)
    }

    pub fn prepend(&self, graph: &Graph, p: &Path) -> Result<BoundaryPoint> {
        if graph.path_sr(p) != self.base {
            return Err(Error::RangeMismatch(format!(
                "cannot prepend {} to a point at {}",
                graph.path_str(p),
                graph.vertex_name(self.base)
            )));
        }
        let mut prefix = p.edges.clone();
        prefix.extend_from_slice(&self.prefix);
        Ok(Self::canonical(p.base, prefix, self.period.clone()))
    }

    pub fn has_prefix(&self, p: &Path) -> bool {
        p.base == self.base
            && self.finite_len().is_none_or(|n| p.len() <= n)
            && p.edges.iter().enumerate().all(|(i, &e)| self.edge_at(i) == Some(e))
    }

    pub fn display(&self, graph: &Graph) -> String {
        let pre = graph.path_str(&Path { base: self.base, edges: self.prefix.clone() });
        if self.is_finite() {
            return pre;
        }
        let per: Vec<&str> = self.period.iter().map(|&e| graph.edge_name(e)).collect();
        let cyc = format!("({})^inf", per.join("."));
        if self.prefix.is_empty() {
            cyc
        } else {
            format!("{pre}.{cyc}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeSpec, GraphSpec};

    fn loops() -> Graph {
        Graph::from_spec(&GraphSpec {
            vertices: vec!["v".into()],
            edges: ["a", "b"]
                .iter()
                .map(|n| EdgeSpec { name: n.to_string(), src: "v".into(), rng: "v".into() })
                .collect(),
        })
        .unwrap()
    }

    #[test]
    fn canonical_forms_agree() {
        let g = loops();
        let x = BoundaryPoint::new(&g, 0, vec![0, 1], vec![0, 1, 0, 1]).unwrap();
        let y = BoundaryPoint::new(&g, 0, vec![], vec![0, 1]).unwrap();
        assert_eq!(x, y);
        let z = BoundaryPoint::new(&g, 0, vec![1, 0], vec![1, 0]).unwrap();
        assert!(z.prefix.is_empty());
        assert_eq!(z.period, vec![1, 0]);
        assert_eq!(z.drop(&g, 1), y);
        assert_eq!(z.drop(&g, 4), z);
        let w = BoundaryPoint::new(&g, 0, vec![1, 1], vec![0, 1]).unwrap();
        assert_eq!((w.prefix.clone(), w.period.clone()), (vec![1], vec![1, 0]));
        assert_eq!(y.prepend(&g, &Path { base: 0, edges: vec![1] }).unwrap(), z);
    }

    #[test]
    fn prefixes() {
        let g = loops();
        let z = BoundaryPoint::new(&g, 0, vec![1], vec![0]).unwrap();
        assert!(z.has_prefix(&Path { base: 0, edges: vec![1, 0, 0] }));
        assert!(!z.has_prefix(&Path { base: 0, edges: vec![0] }));
        assert_eq!(z.take(3).edges, vec![1, 0, 0]);
    }
}
