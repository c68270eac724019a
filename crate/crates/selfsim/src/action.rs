//! Self-similar actions: axioms, extension to paths and boundary points,
//! strongly fixed paths via the fixing automaton, kernels and the nucleus.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::boundary::BoundaryPoint;
use crate::graph::{Graph, Path};
use crate::groupoid::{validate_groupoid, Model, Verdict};
use crate::validation::Validation;
use crate::{Error, Result};

/// JSON form of the edge action and restriction maps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub edge_action: Vec<(String, String, String)>,
    pub restriction: Vec<(String, String, String)>,
}

#[derive(Clone, Debug)]
pub struct SelfSimilarAction {
    pub graph: Graph,
    pub model: Model,
    act: Vec<Option<usize>>,
    res: Vec<Option<usize>>,
    issues: Vec<String>,
}

/// Transitions `g -e-> g|_e` restricted to edges fixed by `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixingAutomaton {
    pub root: usize,
    pub nodes: Vec<usize>,
    pub transitions: Vec<(usize, usize, usize)>,
}

/// Pumping witness: `lead · cycle^k · exit` is a minimal strongly fixed
/// path for every `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PumpWitness {
    pub node: usize,
    pub lead: Path,
    pub cycle: Vec<usize>,
    pub exit: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalFixed {
    Finite(Vec<Path>),
    Infinite(PumpWitness),
}

impl PumpWitness {
    pub fn pumped(&self, k: usize) -> Path {
        let mut p = self.lead.clone();
        for _ in 0..k {
            p.edges.extend_from_slice(&self.cycle);
        }
        p.edges.extend_from_slice(&self.exit);
        p
    }
}

pub(crate) fn witness(op: &str, args: serde_json::Value) -> serde_json::Value {
    json!({ "op": op, "args": args })
}

impl SelfSimilarAction {
    /// Resolves names without checking the axioms; see [`validate_action`].
    pub fn build_unchecked(graph: Graph, model: Model, spec: &ActionSpec) -> Result<Self> {
        let ne = graph.num_edges();
        let n = model.len();
        let mut act = vec![None; n * ne];
        let mut res = vec![None; n * ne];
        let mut issues = Vec::new();
        for (g, e, f) in &spec.edge_action {
            let (gi, ei, fi) = (model.element(g)?, graph.edge(e)?, graph.edge(f)?);
            if model.src(gi) != graph.rng(ei) {
                issues.push(format!("edge action ({g}, {e}) given but sr({g}) != rg({e})"));
                continue;
            }
            if act[gi * ne + ei].replace(fi).is_some() {
                issues.push(format!("edge action ({g}, {e}) given twice"));
            }
        }
        for (g, e, h) in &spec.restriction {
            let (gi, ei, hi) = (model.element(g)?, graph.edge(e)?, model.element(h)?);
            if model.src(gi) != graph.rng(ei) {
                issues.push(format!("restriction ({g}, {e}) given but sr({g}) != rg({e})"));
                continue;
            }
            if res[gi * ne + ei].replace(hi).is_some() {
                issues.push(format!("restriction ({g}, {e}) given twice"));
            }
        }
        // units act trivially; missing unit entries are filled in
        for v in 0..graph.num_vertices() {
            let u = model.unit_at(v);
            for &e in graph.incoming(v) {
                act[u * ne + e].get_or_insert(e);
                res[u * ne + e].get_or_insert(model.unit_at(graph.src(e)));
            }
        }
        Ok(SelfSimilarAction { graph, model, act, res, issues })
    }

    /// Builds and validates; any violated axiom is an error.
    pub fn new(graph: Graph, model: Model, spec: &ActionSpec) -> Result<Self> {
        let a = Self::build_unchecked(graph, model, spec)?;
        let mut report = validate_groupoid(&a.model);
        report.extend(validate_action(&a));
        report.into_result()?;
        Ok(a)
    }

    pub fn to_spec(&self) -> ActionSpec {
        let ne = self.graph.num_edges();
        let mut spec = ActionSpec::default();
        for g in 0..self.model.len() {
            for e in 0..ne {
                let gn = self.model.name(g).to_string();
                let en = self.graph.edge_name(e).to_string();
                if let Some(f) = self.act[g * ne + e] {
                    spec.edge_action.push((gn.clone(), en.clone(), self.graph.edge_name(f).into()));
                }
                if let Some(h) = self.res[g * ne + e] {
                    spec.restriction.push((gn, en, self.model.name(h).into()));
                }
            }
        }
        spec
    }

    fn idx(&self, g: usize, e: usize) -> usize {
        g * self.graph.num_edges() + e
    }

    /// `g·e`; requires a validated action and `sr(g) = rg(e)`.
    pub fn edge_act(&self, g: usize, e: usize) -> usize {
        self.act[self.idx(g, e)].expect("edge action defined on a validated action")
    }

    /// `g|_e`; requires a validated action and `sr(g) = rg(e)`.
    pub fn edge_res(&self, g: usize, e: usize) -> usize {
        self.res[self.idx(g, e)].expect("restriction defined on a validated action")
    }

    fn check_range(&self, g: usize, v: usize) -> Result<()> {
        if self.model.src(g) != v {
            return Err(Error::RangeMismatch(format!(
                "sr({}) = {} but the path starts at {}",
                self.model.name(g),
                self.graph.vertex_name(self.model.src(g)),
                self.graph.vertex_name(v)
            )));
        }
        Ok(())
    }

    /// `(g·μ, g|_μ)` by the recursion `g(eμ) = (ge)(g|_e μ)`, `g|_{eμ} = (g|_e)|_μ`.
    pub fn act_and_restrict(&self, g: usize, mu: &Path) -> Result<(Path, usize)> {
        self.graph.check_path(mu)?;
        self.check_range(g, mu.base)?;
        let mut h = g;
        let mut out = Vec::with_capacity(mu.len());
        for &e in &mu.edges {
            out.push(self.edge_act(h, e));
            h = self.edge_res(h, e);
        }
        Ok((Path { base: self.model.rng(g), edges: out }, h))
    }

    pub fn act_path(&self, g: usize, mu: &Path) -> Result<Path> {
        Ok(self.act_and_restrict(g, mu)?.0)
    }

    pub fn restrict_path(&self, g: usize, mu: &Path) -> Result<usize> {
        Ok(self.act_and_restrict(g, mu)?.1)
    }

    /// `g·ξ` for a finite or eventually periodic point. The pair
    /// (restriction, suffix key) must repeat, which fixes the output period.
    pub fn act_boundary(&self, g: usize, xi: &BoundaryPoint) -> Result<BoundaryPoint> {
        self.check_range(g, xi.base)?;
        let rg = self.model.rng(g);
        if xi.is_finite() {
            let p = self.act_path(g, &xi.take(xi.pre()))?;
            return Ok(BoundaryPoint::finite(&p));
        }
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut out = Vec::new();
        let mut h = g;
        let mut i = 0;
        loop {
            if i >= xi.pre() {
                if let Some(&j) = seen.get(&(h, xi.key(i))) {
                    let period = out[j..].to_vec();
                    out.truncate(j);
                    return BoundaryPoint::new(&self.graph, rg, out, period);
                }
                seen.insert((h, xi.key(i)), i);
            }
            let e = xi.edge_at(i).unwrap();
            out.push(self.edge_act(h, e));
            h = self.edge_res(h, e);
            i += 1;
        }
    }

    /// `g·μ = μ` and `g|_μ` is a unit.
    pub fn strongly_fixes(&self, g: usize, mu: &Path) -> Result<bool> {
        let (p, h) = self.act_and_restrict(g, mu)?;
        Ok(p == *mu && self.model.is_unit(h))
    }

    pub fn fixes_path(&self, g: usize, mu: &Path) -> Result<bool> {
        Ok(self.act_path(g, mu)? == *mu)
    }

    /// Walks the fixing automaton along `ξ`. Returns `(fixed, strongly)`:
    /// whether `g` fixes `ξ`, and whether some prefix is strongly fixed.
    pub fn fix_status(&self, g: usize, xi: &BoundaryPoint) -> Result<(bool, bool)> {
        self.check_range(g, xi.base)?;
        if self.model.rng(g) != self.model.src(g) {
            return Ok((false, false));
        }
        let mut seen = BTreeSet::new();
        let mut h = g;
        let mut strongly = false;
        let mut i = 0;
        loop {
            strongly |= self.model.is_unit(h);
            if strongly {
                // units fix everything below them
                return Ok((true, true));
            }
            let Some(e) = xi.edge_at(i) else {
                return Ok((true, false));
            };
            if i >= xi.pre() && !seen.insert((h, xi.key(i))) {
                return Ok((true, false));
            }
            if self.edge_act(h, e) != e {
                return Ok((false, false));
            }
            h = self.edge_res(h, e);
            i += 1;
        }
    }

    pub fn fixes_point(&self, g: usize, xi: &BoundaryPoint) -> Result<bool> {
        Ok(self.fix_status(g, xi)?.0)
    }

    /// Whether `ξ` has a strongly `g`-fixed prefix.
    pub fn strongly_fixes_point(&self, g: usize, xi: &BoundaryPoint) -> Result<bool> {
        Ok(self.fix_status(g, xi)?.1)
    }

    pub fn fixing_automaton(&self, g: usize) -> FixingAutomaton {
        let mut nodes = vec![g];
        let mut seen = BTreeSet::from([g]);
        let mut transitions = Vec::new();
        let mut k = 0;
        while k < nodes.len() {
            let h = nodes[k];
            k += 1;
            for &e in self.graph.incoming(self.model.src(h)) {
                if self.edge_act(h, e) == e {
                    let t = self.edge_res(h, e);
                    transitions.push((h, e, t));
                    if seen.insert(t) {
                        nodes.push(t);
                    }
                }
            }
        }
        FixingAutomaton { root: g, nodes, transitions }
    }

    /// Non-unit part of the fixing automaton below `g`: transitions out of
    /// non-unit nodes reachable from `g` without passing through a unit.
    fn nonunit_part(&self, g: usize) -> (Vec<usize>, Vec<(usize, usize, usize)>) {
        let mut nodes = vec![g];
        let mut seen = BTreeSet::from([g]);
        let mut trans = Vec::new();
        let mut k = 0;
        while k < nodes.len() {
            let h = nodes[k];
            k += 1;
            for &e in self.graph.incoming(self.model.src(h)) {
                if self.edge_act(h, e) == e {
                    let t = self.edge_res(h, e);
                    trans.push((h, e, t));
                    if !self.model.is_unit(t) && seen.insert(t) {
                        nodes.push(t);
                    }
                }
            }
        }
        (nodes, trans)
    }

    /// Minimal strongly `g`-fixed paths are the label sequences of automaton
    /// runs that first hit a unit at their last step. The set is infinite
    /// exactly when a non-unit node on a cycle can still reach a unit.
    pub fn minimal_strongly_fixed(&self, g: usize) -> MinimalFixed {
        let v = self.model.src(g);
        if self.model.is_unit(g) {
            return MinimalFixed::Finite(vec![Path::vertex(v)]);
        }
        let (nodes, trans) = self.nonunit_part(g);
        let unit = |x: usize| self.model.is_unit(x);
        // nodes that can reach a unit
        let mut live: BTreeSet<usize> = trans.iter().filter(|t| unit(t.2)).map(|t| t.0).collect();
        loop {
            let before = live.len();
            for &(h, _, t) in &trans {
                if !unit(t) && live.contains(&t) {
                    live.insert(h);
                }
            }
            if live.len() == before {
                break;
            }
        }
        if !live.contains(&g) {
            return MinimalFixed::Finite(Vec::new());
        }
        let adj = |h: usize| trans.iter().filter(move |t| t.0 == h);
        if let Some((node, cycle)) = self.find_cycle(g, &live, &trans) {
            let lead = self.shortest(g, node, &trans, &live, false);
            let exit = self.shortest(node, usize::MAX, &trans, &live, true);
            let mut lead_path = Path::vertex(v);
            lead_path.edges = lead;
            return MinimalFixed::Infinite(PumpWitness { node, lead: lead_path, cycle, exit });
        }
        let _ = nodes;
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(g, Vec::new())];
        while let Some((h, labels)) = stack.pop() {
            for &(_, e, t) in adj(h) {
                let mut l = labels.clone();
                l.push(e);
                if unit(t) {
                    out.push(Path { base: v, edges: l });
                } else if live.contains(&t) {
                    stack.push((t, l));
                }
            }
        }
        out.sort_by(|a, b| (a.len(), &a.edges).cmp(&(b.len(), &b.edges)));
        MinimalFixed::Finite(out)
    }

    fn find_cycle(
        &self,
        g: usize,
        live: &BTreeSet<usize>,
        trans: &[(usize, usize, usize)],
    ) -> Option<(usize, Vec<usize>)> {
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        fn dfs(
            h: usize,
            live: &BTreeSet<usize>,
            trans: &[(usize, usize, usize)],
            color: &mut HashMap<usize, Color>,
            nodes: &mut Vec<usize>,
            labels: &mut Vec<usize>,
        ) -> Option<(usize, Vec<usize>)> {
            color.insert(h, Color::Gray);
            nodes.push(h);
            for &(_, e, t) in trans.iter().filter(|x| x.0 == h && live.contains(&x.2)) {
                match color.get(&t).copied().unwrap_or(Color::White) {
                    Color::Gray => {
                        let i = nodes.iter().position(|&x| x == t).unwrap();
                        let mut cyc = labels[i..].to_vec();
                        cyc.push(e);
                        return Some((t, cyc));
                    }
                    Color::White => {
                        labels.push(e);
                        if let Some(r) = dfs(t, live, trans, color, nodes, labels) {
                            return Some(r);
                        }
                        labels.pop();
                    }
                    Color::Black => {}
                }
            }
            color.insert(h, Color::Black);
            nodes.pop();
            None
        }
        dfs(g, live, trans, &mut HashMap::new(), &mut Vec::new(), &mut Vec::new())
    }

    /// Shortest label sequence from `from` to `to` through live nodes, or to
    /// the first unit when `to_unit`.
    fn shortest(
        &self,
        from: usize,
        to: usize,
        trans: &[(usize, usize, usize)],
        live: &BTreeSet<usize>,
        to_unit: bool,
    ) -> Vec<usize> {
        if !to_unit && from == to {
            return Vec::new();
        }
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(h) = queue.pop_front() {
            for &(_, e, t) in trans.iter().filter(|x| x.0 == h) {
                if to_unit && self.model.is_unit(t) {
                    let mut labels = vec![e];
                    let mut cur = h;
                    while cur != from {
                        let (p, l) = prev[&cur];
                        labels.push(l);
                        cur = p;
                    }
                    labels.reverse();
                    return labels;
                }
                if live.contains(&t) && seen.insert(t) {
                    prev.insert(t, (h, e));
                    if !to_unit && t == to {
                        let mut labels = Vec::new();
                        let mut cur = t;
                        while cur != from {
                            let (p, l) = prev[&cur];
                            labels.push(l);
                            cur = p;
                        }
                        labels.reverse();
                        return labels;
                    }
                    queue.push_back(t);
                }
            }
        }
        unreachable!("target reachable by construction")
    }

    /// Minimal strongly fixed paths of length at most `max_len`, read off the
    /// automaton (finite in both outcomes of [`Self::minimal_strongly_fixed`]).
    pub fn minimal_strongly_fixed_upto(&self, g: usize, max_len: usize) -> Vec<Path> {
        let v = self.model.src(g);
        if self.model.is_unit(g) {
            return vec![Path::vertex(v)];
        }
        let (_, trans) = self.nonunit_part(g);
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(g, Vec::new())];
        while let Some((h, labels)) = stack.pop() {
            if labels.len() >= max_len {
                continue;
            }
            for &(_, e, t) in trans.iter().filter(|x| x.0 == h) {
                let mut l = labels.clone();
                l.push(e);
                if self.model.is_unit(t) {
                    out.push(Path { base: v, edges: l });
                } else {
                    stack.push((t, l));
                }
            }
        }
        out.sort_by(|a, b| (a.len(), &a.edges).cmp(&(b.len(), &b.edges)));
        out
    }

    /// Elements `g|_μ` over all paths `μ`, in discovery order.
    pub fn restriction_closure(&self, g: usize) -> Vec<usize> {
        let mut nodes = vec![g];
        let mut seen = BTreeSet::from([g]);
        let mut k = 0;
        while k < nodes.len() {
            let h = nodes[k];
            k += 1;
            for &e in self.graph.incoming(self.model.src(h)) {
                let t = self.edge_res(h, e);
                if seen.insert(t) {
                    nodes.push(t);
                }
            }
        }
        nodes
    }

    /// `g` fixes every path in `sr(g)E^*`. Equivalent to every restriction
    /// `g|_μ` fixing its vertex and every edge at its source: if all paths
    /// are fixed then `g·(μe) = μ (g|_μ·e)` forces `g|_μ·e = e`, and the
    /// converse follows by induction on length.
    pub fn fixes_all_paths(&self, g: usize) -> bool {
        self.restriction_closure(g).into_iter().all(|h| {
            self.model.src(h) == self.model.rng(h)
                && self.graph.incoming(self.model.src(h)).iter().all(|&e| self.edge_act(h, e) == e)
        })
    }

    /// Kernel of the action: elements fixing every path.
    pub fn kernel_n(&self) -> Result<Vec<usize>> {
        if !self.model.is_explicit() {
            return Err(Error::RequiresExplicit);
        }
        Ok((0..self.model.len()).filter(|&g| self.fixes_all_paths(g)).collect())
    }

    /// Least fixed point of `K_{n+1} = E^0_sing ∪ {g regular : ge = e and
    /// g|_e ∈ K_n for all e}` starting from the units; sources are the
    /// singular vertices of a finite graph.
    pub fn tight_kernel_k(&self) -> Result<Vec<usize>> {
        if !self.model.is_explicit() {
            return Err(Error::RequiresExplicit);
        }
        let n = self.model.len();
        let mut k: Vec<bool> = (0..n).map(|g| self.model.is_unit(g)).collect();
        loop {
            let next: Vec<bool> = (0..n)
                .map(|g| {
                    let v = self.model.src(g);
                    let edges = self.graph.incoming(v);
                    if edges.is_empty() {
                        return self.model.is_unit(g);
                    }
                    edges.iter().all(|&e| self.edge_act(g, e) == e && k[self.edge_res(g, e)])
                })
                .collect();
            if next == k {
                break;
            }
            k = next;
        }
        Ok((0..n).filter(|&g| k[g]).collect())
    }

    /// Elements reachable from a directed cycle of the restriction digraph.
    pub fn nucleus(&self) -> Result<Vec<usize>> {
        if !self.model.is_explicit() {
            return Err(Error::RequiresExplicit);
        }
        if let Some(v) = (0..self.graph.num_vertices()).find(|&v| self.graph.in_degree(v) == 0) {
            return Err(Error::Invalid(format!(
                "nucleus needs a graph without sources; `{}` is a source",
                self.graph.vertex_name(v)
            )));
        }
        let n = self.model.len();
        let succ = |h: usize| -> Vec<usize> {
            self.graph.incoming(self.model.src(h)).iter().map(|&e| self.edge_res(h, e)).collect()
        };
        let on_cycle: Vec<usize> = (0..n)
            .filter(|&g| succ(g).into_iter().any(|t| self.restriction_closure(t).contains(&g)))
            .collect();
        let mut out = BTreeSet::new();
        for g in on_cycle {
            out.extend(self.restriction_closure(g));
        }
        Ok(out.into_iter().collect())
    }

    /// `{g|_μ : |μ| = depth}` over all `g`; equals the nucleus once `depth`
    /// reaches the number of elements.
    pub fn restrictions_at_depth(&self, depth: usize) -> Vec<usize> {
        let mut cur: BTreeSet<usize> = (0..self.model.len()).collect();
        for _ in 0..depth {
            cur = cur
                .iter()
                .flat_map(|&h| {
                    self.graph.incoming(self.model.src(h)).iter().map(move |&e| self.edge_res(h, e))
                })
                .collect();
        }
        cur.into_iter().collect()
    }

    /// No non-unit strongly fixes an edge.
    pub fn pseudo_free(&self) -> Verdict {
        let mut best: Option<(&str, &str, usize, usize)> = None;
        for g in (0..self.model.len()).filter(|&g| !self.model.is_unit(g)) {
            for &e in self.graph.incoming(self.model.src(g)) {
                if self.edge_act(g, e) == e && self.model.is_unit(self.edge_res(g, e)) {
                    let key = (self.model.name(g), self.graph.edge_name(e), g, e);
                    if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                        best = Some(key);
                    }
                }
            }
        }
        match best {
            Some((gn, en, _, _)) => Verdict::fails(
                witness("strongly_fixes", json!({ "g": gn, "path": [en] })),
                self.model.scope_note(),
            ),
            None => self.model.holds_verdict(),
        }
    }

    pub fn tightly_faithful(&self) -> Verdict {
        match self.tight_kernel_k() {
            Err(_) => Verdict::requires_explicit(self.model.scope_note()),
            Ok(k) => match k.iter().copied().filter(|&g| !self.model.is_unit(g)).min_by_key(|&g| self.model.name(g)) {
                Some(g) => Verdict::fails(
                    witness("tight_kernel_contains", json!({ "g": self.model.name(g) })),
                    self.model.scope_note(),
                ),
                None => Verdict::holds(self.model.scope_note()),
            },
        }
    }

    /// Kernel `N` is the unit space.
    pub fn faithful(&self) -> Verdict {
        let bad = (0..self.model.len())
            .filter(|&g| !self.model.is_unit(g) && self.fixes_all_paths(g))
            .min_by_key(|&g| self.model.name(g));
        match bad {
            Some(g) => Verdict::fails(
                witness("fixes_all_paths", json!({ "g": self.model.name(g) })),
                self.model.scope_note(),
            ),
            None => self.model.holds_verdict(),
        }
    }

    /// Wide, closed under products, inverses, conjugation and restriction.
    pub fn is_normal_section_closed(&self, set: &[usize]) -> Result<bool> {
        let inside: BTreeSet<usize> = set.iter().copied().collect();
        let m = &self.model;
        if (0..self.graph.num_vertices()).any(|v| !inside.contains(&m.unit_at(v))) {
            return Ok(false);
        }
        for &a in set {
            if !inside.contains(&m.inv(a)?) {
                return Ok(false);
            }
            for &b in set.iter().filter(|&&b| m.src(a) == m.rng(b)) {
                if !inside.contains(&m.mul(a, b)?) {
                    return Ok(false);
                }
            }
            for k in (0..m.len()).filter(|&k| m.src(k) == m.rng(a) && m.src(a) == m.rng(a)) {
                let c = m.mul(m.mul(k, a)?, m.inv(k)?)?;
                if !inside.contains(&c) {
                    return Ok(false);
                }
            }
            for &e in self.graph.incoming(m.src(a)) {
                if !inside.contains(&self.edge_res(a, e)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Checks the action axioms exhaustively on the finite data.
pub fn validate_action(a: &SelfSimilarAction) -> Validation {
    let mut report = Validation::new();
    for issue in &a.issues {
        report.push(issue.clone());
    }
    let (g_, m) = (&a.graph, &a.model);
    let n = m.len();
    let mut complete = true;
    for g in 0..n {
        let mut image = BTreeSet::new();
        for &e in g_.incoming(m.src(g)) {
            let (Some(f), Some(h)) = (a.act[a.idx(g, e)], a.res[a.idx(g, e)]) else {
                report.push(format!("({}, {}) lacks an edge action or restriction", m.name(g), g_.edge_name(e)));
                complete = false;
                continue;
            };
            if g_.rng(f) != m.rng(g) {
                report.push(format!("{}·{} = {} does not have range rg({})", m.name(g), g_.edge_name(e), g_.edge_name(f), m.name(g)));
            }
            image.insert(f);
            if m.src(h) != g_.src(e) {
                report.push(format!("sr({}|{}) != sr({})", m.name(g), g_.edge_name(e), g_.edge_name(e)));
            }
            if m.rng(h) != g_.src(f) {
                report.push(format!("rg({}|{}) != sr({}·{})", m.name(g), g_.edge_name(e), m.name(g), g_.edge_name(e)));
            }
            if m.is_unit(g) && (f != e || h != m.unit_at(g_.src(e))) {
                report.push(format!("unit {} does not act trivially on {}", m.name(g), g_.edge_name(e)));
            }
        }
        if image.len() != g_.incoming(m.src(g)).len() || g_.incoming(m.rng(g)).len() != image.len() {
            report.push(format!("{} is not a bijection sr(g)E^1 -> rg(g)E^1", m.name(g)));
        }
    }
    if !complete || !report.is_ok() || !m.is_explicit() || !validate_groupoid(m).is_ok() {
        return report;
    }
    for h in 0..n {
        for g in (0..n).filter(|&g| m.src(h) == m.rng(g)) {
            let hg = m.mul(h, g).unwrap();
            for &e in g_.incoming(m.src(g)) {
                let ge = a.edge_act(g, e);
                if a.edge_act(hg, e) != a.edge_act(h, ge) {
                    report.push(format!("({}{})·{} != {}·({}·{})", m.name(h), m.name(g), g_.edge_name(e), m.name(h), m.name(g), g_.edge_name(e)));
                }
                let rhs = m.mul(a.edge_res(h, ge), a.edge_res(g, e));
                if rhs.as_ref().ok() != Some(&a.edge_res(hg, e)) {
                    report.push(format!(
                        "cocycle law fails: ({} {})|{} != ({}|{})({}|{})",
                        m.name(h), m.name(g), g_.edge_name(e), m.name(h), g_.edge_name(ge), m.name(g), g_.edge_name(e)
                    ));
                }
            }
        }
    }
    if !report.is_ok() {
        return report;
    }
    // (g|_μ)^{-1} = g^{-1}|_{gμ}
    for g in 0..n {
        let gi = m.inv(g).unwrap();
        for mu in g_.extensions(&Path::vertex(m.src(g)), 3) {
            let (gmu, r) = a.act_and_restrict(g, &mu).unwrap();
            if m.inv(r).unwrap() != a.restrict_path(gi, &gmu).unwrap() {
                report.push(format!("(g|mu)^-1 != g^-1|g mu for g = {}, mu = {}", m.name(g), g_.path_str(&mu)));
            }
        }
    }
    report
}
