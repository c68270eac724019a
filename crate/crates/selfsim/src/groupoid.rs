//! Finite groupoids over the vertex set: explicit multiplication tables or
//! behavioral state sets, plus the tri-state verdict used by deciders.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::validation::Validation;
use crate::{Error, Result};

pub const BEHAVIORAL_SCOPE: &str =
    "behavioral model: capability flags are user assertions, not verified properties";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSpec {
    pub name: String,
    pub src: String,
    pub rng: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpec {
    pub name: String,
    pub src: String,
    pub rng: String,
    pub is_unit: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    #[serde(default)]
    pub unit_reflecting: bool,
    #[serde(default)]
    pub element_complete: bool,
    #[serde(default)]
    pub orbit_complete: bool,
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub elements: Vec<String>,
    pub mul: Vec<(String, String, String)>,
}

/// JSON form of a groupoid, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupoidSpec {
    Explicit {
        elements: Vec<ElementSpec>,
        units: IndexMap<String, String>,
        mul: Vec<(String, String, String)>,
        inv: IndexMap<String, String>,
    },
    /// One group per vertex; element names must be globally unique.
    Bundle { groups: IndexMap<String, GroupTable> },
    /// Transformation groupoid of a group acting on vertices by permutations.
    /// Element `(γ, v)` is named `γ@v`.
    Action { group: GroupTable, vertex_action: Vec<(String, String, String)> },
    Behavioral { states: Vec<StateSpec>, #[serde(default)] flags: Flags },
}

#[derive(Clone, Debug)]
pub enum Backend {
    Explicit { mul: Vec<Option<usize>>, inv: Vec<usize> },
    Behavioral(Flags),
}

/// A finite groupoid (explicit) or a finite state set standing in for one
/// (behavioral). Elements are indexed `0..len()`.
#[derive(Clone, Debug)]
pub struct Model {
    names: Vec<String>,
    src: Vec<usize>,
    rng: Vec<usize>,
    unit: Vec<bool>,
    units: Vec<usize>,
    index: HashMap<String, usize>,
    backend: Backend,
    issues: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    Holds,
    Fails,
    HoldsOnModel,
    RequiresExplicit,
}

/// A decider's answer. `Fails` always carries a replayable witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<serde_json::Value>,
    pub scope: String,
}

impl Verdict {
    pub fn holds(scope: impl Into<String>) -> Self {
        Verdict { status: Status::Holds, witness: None, scope: scope.into() }
    }

    pub fn fails(witness: serde_json::Value, scope: impl Into<String>) -> Self {
        Verdict { status: Status::Fails, witness: Some(witness), scope: scope.into() }
    }

    pub fn requires_explicit(scope: impl Into<String>) -> Self {
        Verdict { status: Status::RequiresExplicit, witness: None, scope: scope.into() }
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }
}

/// Equivalence classes of vertices, each sorted, classes ordered by least member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl Partition {
    pub fn related(&self, v: usize, w: usize) -> bool {
        self.class_of[v] == self.class_of[w]
    }

    /// Equivalence closure of `pairs` on `n` points.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        let classes: Vec<Vec<usize>> = groups.into_values().collect();
        let mut class_of = vec![0; n];
        for (i, c) in classes.iter().enumerate() {
            for &v in c {
                class_of[v] = i;
            }
        }
        Partition { classes, class_of }
    }
}

impl Model {
    pub fn from_spec(spec: &GroupoidSpec, graph: &Graph) -> Result<Self> {
        match spec {
            GroupoidSpec::Explicit { elements, units, mul, inv } => {
                Self::explicit(graph, elements, units, mul, inv)
            }
            GroupoidSpec::Bundle { groups } => from_group_bundle(graph, groups),
            GroupoidSpec::Action { group, vertex_action } => {
                from_group_action(graph, group, vertex_action)
            }
            GroupoidSpec::Behavioral { states, flags } => Self::behavioral(graph, states, *flags),
        }
    }

    fn skeleton(
        graph: &Graph,
        items: impl Iterator<Item = (String, String, String)>,
    ) -> Result<(Vec<String>, Vec<usize>, Vec<usize>, HashMap<String, usize>)> {
        let mut names = Vec::new();
        let mut src = Vec::new();
        let mut rng = Vec::new();
        let mut index = HashMap::new();
        for (name, s, r) in items {
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::Invalid(format!("duplicate element `{name}`")));
            }
            src.push(graph.vertex(&s)?);
            rng.push(graph.vertex(&r)?);
            names.push(name);
        }
        Ok((names, src, rng, index))
    }

    pub fn explicit(
        graph: &Graph,
        elements: &[ElementSpec],
        units: &IndexMap<String, String>,
        mul: &[(String, String, String)],
        inv: &IndexMap<String, String>,
    ) -> Result<Self> {
        let (names, src, rng, index) = Self::skeleton(
            graph,
            elements.iter().map(|e| (e.name.clone(), e.src.clone(), e.rng.clone())),
        )?;
        let n = names.len();
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownElement(s.into()));
        let mut issues = Vec::new();
        let mut unit_of = vec![usize::MAX; graph.num_vertices()];
        for (v, u) in units {
            unit_of[graph.vertex(v)?] = lookup(u)?;
        }
        for (v, &u) in unit_of.iter().enumerate() {
            if u == usize::MAX {
                return Err(Error::Invalid(format!("no unit for vertex `{}`", graph.vertex_name(v))));
            }
        }
        let mut unit = vec![false; n];
        for &u in &unit_of {
            unit[u] = true;
        }
        let mut table = vec![None; n * n];
        for (a, b, c) in mul {
            let (a, b, c) = (lookup(a)?, lookup(b)?, lookup(c)?);
            if table[a * n + b].replace(c).is_some_and(|old| old != c) {
                issues.push(format!("conflicting products for ({}, {})", names[a], names[b]));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for (a, b) in inv {
            inverse[lookup(a)?] = lookup(b)?;
        }
        for (g, &h) in inverse.iter().enumerate() {
            if h == usize::MAX {
                return Err(Error::Invalid(format!("no inverse for `{}`", names[g])));
            }
        }
        Ok(Model {
            names,
            src,
            rng,
            unit,
            units: unit_of,
            index,
            backend: Backend::Explicit { mul: table, inv: inverse },
            issues,
        })
    }

    pub fn behavioral(graph: &Graph, states: &[StateSpec], flags: Flags) -> Result<Self> {
        let (names, src, rng, index) = Self::skeleton(
            graph,
            states.iter().map(|s| (s.name.clone(), s.src.clone(), s.rng.clone())),
        )?;
        let unit: Vec<bool> = states.iter().map(|s| s.is_unit).collect();
        let mut units = vec![usize::MAX; graph.num_vertices()];
        let mut issues = Vec::new();
        for (i, s) in states.iter().enumerate() {
            if s.is_unit {
                if src[i] != rng[i] {
                    issues.push(format!("unit state `{}` has src != rng", s.name));
                } else if units[src[i]] != usize::MAX {
                    issues.push(format!(
                        "two unit states at vertex `{}`",
                        graph.vertex_name(src[i])
                    ));
                } else {
                    units[src[i]] = i;
                }
            }
        }
        for (v, &u) in units.iter().enumerate() {
            if u == usize::MAX {
                return Err(Error::Invalid(format!(
                    "no unit state for vertex `{}`",
                    graph.vertex_name(v)
                )));
            }
        }
        Ok(Model { names, src, rng, unit, units, index, backend: Backend::Behavioral(flags), issues })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn src(&self, g: usize) -> usize {
        self.src[g]
    }

    pub fn rng(&self, g: usize) -> usize {
        self.rng[g]
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.unit[g]
    }

    pub fn unit_at(&self, v: usize) -> usize {
        self.units[v]
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.backend, Backend::Explicit { .. })
    }

    /// Flags in force; an explicit groupoid satisfies all of them.
    pub fn flags(&self) -> Flags {
        match self.backend {
            Backend::Explicit { .. } => {
                Flags { unit_reflecting: true, element_complete: true, orbit_complete: true }
            }
            Backend::Behavioral(f) => f,
        }
    }

    pub fn mul(&self, g: usize, h: usize) -> Result<usize> {
        match &self.backend {
            Backend::Explicit { mul, .. } => {
                if self.src[g] != self.rng[h] {
                    return Err(Error::NotComposable(format!("{} · {}", self.names[g], self.names[h])));
                }
                mul[g * self.len() + h]
                    .ok_or_else(|| Error::Invalid(format!("product {}·{} missing", self.names[g], self.names[h])))
            }
            Backend::Behavioral(_) => Err(Error::RequiresExplicit),
        }
    }

    pub fn inv(&self, g: usize) -> Result<usize> {
        match &self.backend {
            Backend::Explicit { inv, .. } => Ok(inv[g]),
            Backend::Behavioral(_) => Err(Error::RequiresExplicit),
        }
    }

    /// Scope note attached to verdicts computed on this model.
    pub fn scope_note(&self) -> &'static str {
        if self.is_explicit() {
            "explicit groupoid"
        } else {
            BEHAVIORAL_SCOPE
        }
    }

    /// Status to report when a universally quantified check passed.
    pub fn holds_status(&self) -> Status {
        if self.flags().element_complete {
            Status::Holds
        } else {
            Status::HoldsOnModel
        }
    }

    pub fn holds_verdict(&self) -> Verdict {
        Verdict { status: self.holds_status(), witness: None, scope: self.scope_note().into() }
    }

    pub fn to_spec(&self, graph: &Graph) -> GroupoidSpec {
        let vname = |v: usize| graph.vertex_name(v).to_string();
        match &self.backend {
            Backend::Explicit { mul, inv } => {
                let n = self.len();
                let mut triples = Vec::new();
                for a in 0..n {
                    for b in 0..n {
                        if let Some(c) = mul[a * n + b] {
                            triples.push((self.names[a].clone(), self.names[b].clone(), self.names[c].clone()));
                        }
                    }
                }
                GroupoidSpec::Explicit {
                    elements: (0..n)
                        .map(|g| ElementSpec {
                            name: self.names[g].clone(),
                            src: vname(self.src[g]),
                            rng: vname(self.rng[g]),
                        })
                        .collect(),
                    units: self
                        .units
                        .iter()
                        .enumerate()
                        .map(|(v, &u)| (vname(v), self.names[u].clone()))
                        .collect(),
                    mul: triples,
                    inv: (0..n).map(|g| (self.names[g].clone(), self.names[inv[g]].clone())).collect(),
                }
            }
            Backend::Behavioral(flags) => GroupoidSpec::Behavioral {
                states: (0..self.len())
                    .map(|g| StateSpec {
                        name: self.names[g].clone(),
                        src: vname(self.src[g]),
                        rng: vname(self.rng[g]),
                        is_unit: self.unit[g],
                    })
                    .collect(),
                flags: *flags,
            },
        }
    }
}

/// Checks every groupoid law exhaustively; behavioral models only get the
/// structural checks.
pub fn validate_groupoid(m: &Model) -> Validation {
    let mut report = Validation::new();
    for issue in &m.issues {
        report.push(issue.clone());
    }
    let Backend::Explicit { mul, inv } = &m.backend else {
        return report;
    };
    let n = m.len();
    let name = |g: usize| m.names[g].as_str();
    for (v, &u) in m.units.iter().enumerate() {
        if m.src[u] != v || m.rng[u] != v {
            report.push(format!("unit `{}` does not sit at its vertex", name(u)));
        }
    }
    for g in 0..n {
        for h in 0..n {
            let composable = m.src[g] == m.rng[h];
            match (composable, mul[g * n + h]) {
                (true, None) => report.push(format!("missing product ({}, {})", name(g), name(h))),
                (false, Some(_)) => {
                    report.push(format!("product defined on non-composable ({}, {})", name(g), name(h)))
                }
                (true, Some(gh)) => {
                    if m.rng[gh] != m.rng[g] || m.src[gh] != m.src[h] {
                        report.push(format!("({}, {}) -> {} has wrong endpoints", name(g), name(h), name(gh)));
                    }
                }
                (false, None) => {}
            }
        }
    }
    if !report.is_ok() {
        return report;
    }
    let p = |a: usize, b: usize| mul[a * n + b].unwrap();
    for g in 0..n {
        let (l, r) = (m.units[m.rng[g]], m.units[m.src[g]]);
        if p(l, g) != g || p(g, r) != g {
            report.push(format!("units are not neutral for `{}`", name(g)));
        }
        let gi = inv[g];
        if m.src[gi] != m.rng[g] || m.rng[gi] != m.src[g] {
            report.push(format!("inverse of `{}` has wrong endpoints", name(g)));
            continue;
        }
        if p(gi, g) != r || p(g, gi) != l {
            report.push(format!("inverse law fails for `{}`", name(g)));
        }
    }
    for a in 0..n {
        for b in (0..n).filter(|&b| m.src[a] == m.rng[b]) {
            for c in (0..n).filter(|&c| m.src[b] == m.rng[c]) {
                if p(p(a, b), c) != p(a, p(b, c)) {
                    report.push(format!(
                        "associativity fails for ({}, {}, {})",
                        name(a),
                        name(b),
                        name(c)
                    ));
                }
            }
        }
    }
    report
}

pub(crate) fn check_group(table: &GroupTable) -> Result<(usize, Vec<Vec<usize>>)> {
    let k = table.elements.len();
    let idx: HashMap<&str, usize> =
        table.elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    if idx.len() != k || k == 0 {
        return Err(Error::Invalid("group elements must be distinct and non-empty".into()));
    }
    let get = |s: &str| idx.get(s).copied().ok_or_else(|| Error::UnknownElement(s.into()));
    let mut t = vec![vec![usize::MAX; k]; k];
    for (a, b, c) in &table.mul {
        t[get(a)?][get(b)?] = get(c)?;
    }
    if t.iter().flatten().any(|&x| x == usize::MAX) {
        return Err(Error::Invalid("group table is incomplete".into()));
    }
    let e = (0..k)
        .find(|&e| (0..k).all(|x| t[e][x] == x && t[x][e] == x))
        .ok_or_else(|| Error::Invalid("group table has no identity".into()))?;
    for a in 0..k {
        if !(0..k).any(|b| t[a][b] == e && t[b][a] == e) {
            return Err(Error::Invalid(format!("`{}` has no inverse", table.elements[a])));
        }
        for b in 0..k {
            for c in 0..k {
                if t[t[a][b]][c] != t[a][t[b][c]] {
                    return Err(Error::Invalid("group table is not associative".into()));
                }
            }
        }
    }
    Ok((e, t))
}

/// Group bundle: only isotropy arrows, one group per vertex.
pub fn from_group_bundle(graph: &Graph, groups: &IndexMap<String, GroupTable>) -> Result<Model> {
    let mut elements = Vec::new();
    let mut units = IndexMap::new();
    let mut mul = Vec::new();
    let mut inv = IndexMap::new();
    for v in graph.vertex_names() {
        let table = groups
            .get(v)
            .ok_or_else(|| Error::Invalid(format!("no group for vertex `{v}`")))?;
        let (e, t) = check_group(table)?;
        for x in &table.elements {
            elements.push(ElementSpec { name: x.clone(), src: v.clone(), rng: v.clone() });
        }
        units.insert(v.clone(), table.elements[e].clone());
        let k = table.elements.len();
        for a in 0..k {
            for b in 0..k {
                mul.push((table.elements[a].clone(), table.elements[b].clone(), table.elements[t[a][b]].clone()));
                if t[a][b] == e {
                    inv.insert(table.elements[a].clone(), table.elements[b].clone());
                }
            }
        }
    }
    for v in groups.keys() {
        graph.vertex(v)?;
    }
    Model::explicit(graph, &elements, &units, &mul, &inv)
}

/// Transformation groupoid `Γ × E^0`; `(γ, v)` has source `v` and range `γv`.
pub fn from_group_action(
    graph: &Graph,
    group: &GroupTable,
    vertex_action: &[(String, String, String)],
) -> Result<Model> {
    let (e, t) = check_group(group)?;
    let k = group.elements.len();
    let nv = graph.num_vertices();
    let gidx: HashMap<&str, usize> =
        group.elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut act = vec![vec![usize::MAX; nv]; k];
    for (g, v, w) in vertex_action {
        let gi = *gidx.get(g.as_str()).ok_or_else(|| Error::UnknownElement(g.clone()))?;
        act[gi][graph.vertex(v)?] = graph.vertex(w)?;
    }
    // unlisted pairs are fixed
    for row in act.iter_mut() {
        for (v, a) in row.iter_mut().enumerate() {
            if *a == usize::MAX {
                *a = v;
            }
        }
    }
    for (gi, row) in act.iter().enumerate() {
        let image: BTreeSet<usize> = row.iter().copied().collect();
        if image.len() != nv {
            return Err(Error::Invalid(format!("`{}` does not act by a permutation", group.elements[gi])));
        }
    }
    for a in 0..k {
        for b in 0..k {
            for v in 0..nv {
                if act[t[a][b]][v] != act[a][act[b][v]] {
                    return Err(Error::Invalid("vertex action is not a group action".into()));
                }
            }
        }
        if (0..nv).any(|v| act[e][v] != v) {
            return Err(Error::Invalid("identity acts nontrivially".into()));
        }
    }
    let name = |g: usize, v: usize| format!("{}@{}", group.elements[g], graph.vertex_name(v));
    let mut elements = Vec::new();
    let mut units = IndexMap::new();
    let mut mul = Vec::new();
    let mut inv = IndexMap::new();
    for g in 0..k {
        for v in 0..nv {
            elements.push(ElementSpec {
                name: name(g, v),
                src: graph.vertex_name(v).into(),
                rng: graph.vertex_name(act[g][v]).into(),
            });
            let gi = (0..k).find(|&h| t[h][g] == e).unwrap();
            inv.insert(name(g, v), name(gi, act[g][v]));
            // (γ, δw)(δ, w) = (γδ, w)
            for d in 0..k {
                for w in (0..nv).filter(|&w| act[d][w] == v) {
                    mul.push((name(g, v), name(d, w), name(t[g][d], w)));
                }
            }
        }
    }
    for v in 0..nv {
        units.insert(graph.vertex_name(v).to_string(), name(e, v));
    }
    Model::explicit(graph, &elements, &units, &mul, &inv)
}

/// `v ~ w` iff some element has source `w` and range `v`.
pub fn orbit_relation(m: &Model, nv: usize) -> Result<Partition> {
    if !m.flags().orbit_complete {
        return Err(Error::RequiresExplicit);
    }
    Ok(Partition::from_pairs(nv, (0..m.len()).map(|g| (m.src(g), m.rng(g)))))
}
