//! Deciders for Fin, Evr, Cyc, Sla, Rec, Min and Con, and the report that
//! combines them into groupoid and algebra verdicts.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{witness, MinimalFixed, SelfSimilarAction};
use crate::graph::Path;
use crate::groupoid::{orbit_relation, Partition, Status, Verdict};
use crate::io::path_json;
use crate::twist::{validate_twist, Twist};
use crate::Result;

fn by_name(a: &SelfSimilarAction) -> Vec<usize> {
    let mut v: Vec<usize> = (0..a.model.len()).collect();
    v.sort_by(|&x, &y| a.model.name(x).cmp(a.model.name(y)));
    v
}

/// Every element has finitely many minimal strongly fixed paths.
pub fn check_fin(a: &SelfSimilarAction) -> Verdict {
    for g in by_name(a) {
        if let MinimalFixed::Infinite(w) = a.minimal_strongly_fixed(g) {
            let mut wit = witness("minimal_strongly_fixed", json!({ "g": a.model.name(g) }));
            wit["pump"] = json!({
                "node": a.model.name(w.node),
                "lead": path_json(&a.graph, &w.lead),
                "cycle": w.cycle.iter().map(|&e| a.graph.edge_name(e)).collect::<Vec<_>>(),
                "exit": w.exit.iter().map(|&e| a.graph.edge_name(e)).collect::<Vec<_>>(),
            });
            return Verdict::fails(wit, a.model.scope_note());
        }
    }
    a.model.holds_verdict()
}

/// Every element fixing all paths strongly fixes some path.
pub fn check_evr(a: &SelfSimilarAction) -> Verdict {
    for g in by_name(a) {
        if a.fixes_all_paths(g) && !a.fixing_automaton(g).nodes.iter().any(|&h| a.model.is_unit(h)) {
            return Verdict::fails(witness("fixes_all_paths", json!({ "g": a.model.name(g) })), a.model.scope_note());
        }
    }
    a.model.holds_verdict()
}

/// Entrance-free walks are forced (each base vertex has one in-edge), so
/// from every vertex there is one candidate path per length. A walk longer
/// than `|E^0|` revisits a vertex and contains an entrance-free cycle of
/// length at most `|E^0|`, which is itself a witness; hence the bound.
pub fn entrance_free_g_cycle(a: &SelfSimilarAction, orbits: &Partition) -> Option<Path> {
    let g = &a.graph;
    let nv = g.num_vertices();
    let mut best: Option<Path> = None;
    for x0 in 0..nv {
        let mut p = Path::vertex(x0);
        let mut cur = x0;
        while p.len() < nv && g.in_degree(cur) == 1 {
            let e = g.incoming(cur)[0];
            p.edges.push(e);
            cur = g.src(e);
            if g.in_degree(cur) >= 2 {
                break;
            }
            if orbits.related(x0, cur) {
                let key = |q: &Path| (q.len(), g.path_names(q));
                if best.as_ref().is_none_or(|b| key(&p) < key(b)) {
                    best = Some(p.clone());
                }
                break;
            }
        }
    }
    best
}

/// Every g-cycle has an entrance.
pub fn check_cyc(a: &SelfSimilarAction) -> Verdict {
    let Ok(orbits) = orbit_relation(&a.model, a.graph.num_vertices()) else {
        return Verdict::requires_explicit(a.model.scope_note());
    };
    match entrance_free_g_cycle(a, &orbits) {
        Some(p) => Verdict::fails(
            witness("g_cycle_without_entrance", json!({ "path": path_json(&a.graph, &p) })),
            a.model.scope_note(),
        ),
        None => Verdict::holds(a.model.scope_note()),
    }
}

/// Shortest label path from `g` to a non-unit node of the restriction
/// digraph lying on a directed cycle, with that cycle.
fn deep_nonunit(a: &SelfSimilarAction, g: usize) -> Option<(Path, Path)> {
    let v = a.model.src(g);
    let mut prev: IndexMap<usize, Option<(usize, usize)>> = IndexMap::from([(g, None)]);
    let mut queue = VecDeque::from([g]);
    while let Some(h) = queue.pop_front() {
        for &e in a.graph.incoming(a.model.src(h)) {
            let t = a.edge_res(h, e);
            if !prev.contains_key(&t) {
                prev.insert(t, Some((h, e)));
                queue.push_back(t);
            }
        }
    }
    for (&h, _) in prev.iter() {
        if a.model.is_unit(h) {
            continue;
        }
        if let Some(cycle) = return_path(a, h) {
            let mut lead = Vec::new();
            let mut cur = h;
            while let Some(Some((p, e))) = prev.get(&cur) {
                lead.push(*e);
                cur = *p;
            }
            lead.reverse();
            return Some((Path { base: v, edges: lead }, cycle));
        }
    }
    None
}

/// Shortest non-empty label path from `h` back to `h`.
fn return_path(a: &SelfSimilarAction, h: usize) -> Option<Path> {
    let mut prev: IndexMap<usize, (usize, usize)> = IndexMap::new();
    let mut queue = VecDeque::from([h]);
    while let Some(x) = queue.pop_front() {
        for &e in a.graph.incoming(a.model.src(x)) {
            let t = a.edge_res(x, e);
            if t == h {
                let mut labels = vec![e];
                let mut cur = x;
                while cur != h {
                    let (p, l) = prev[&cur];
                    labels.push(l);
                    cur = p;
                }
                labels.reverse();
                return Some(Path { base: a.model.src(h), edges: labels });
            }
            if !prev.contains_key(&t) {
                prev.insert(t, (x, e));
                queue.push_back(t);
            }
        }
    }
    None
}

/// Elements fixing every path have slack: with all paths fixed, slack
/// means all restrictions at some depth are units, which fails exactly
/// when a non-unit restriction sits on a cycle of the restriction digraph.
pub fn check_sla(a: &SelfSimilarAction) -> Verdict {
    for g in by_name(a) {
        if !a.fixes_all_paths(g) {
            continue;
        }
        if let Some((lead, cycle)) = deep_nonunit(a, g) {
            return Verdict::fails(
                witness(
                    "restrict_path",
                    json!({
                        "g": a.model.name(g),
                        "lead": path_json(&a.graph, &lead),
                        "cycle": path_json(&a.graph, &cycle),
                    }),
                ),
                a.model.scope_note(),
            );
        }
    }
    a.model.holds_verdict()
}

/// Every vertex of a finite graph is a finite receiver, so Rec fails
/// exactly when some element fixes a path with non-unit restriction.
/// Non-empty witnesses are preferred over vertex witnesses.
pub fn check_rec(a: &SelfSimilarAction) -> Verdict {
    let order = by_name(a);
    let fail = |g: usize, p: &Path| {
        Verdict::fails(
            witness("restrict_path", json!({ "g": a.model.name(g), "path": path_json(&a.graph, p) })),
            a.model.scope_note(),
        )
    };
    for &g in &order {
        if let Some(p) = fixed_path_with_nonunit_restriction(a, g) {
            return fail(g, &p);
        }
    }
    for &g in &order {
        if !a.model.is_unit(g) && a.model.src(g) == a.model.rng(g) {
            return fail(g, &Path::vertex(a.model.src(g)));
        }
    }
    a.model.holds_verdict()
}

fn fixed_path_with_nonunit_restriction(a: &SelfSimilarAction, g: usize) -> Option<Path> {
    let v = a.model.src(g);
    if a.model.rng(g) != v {
        return None;
    }
    let mut seen = BTreeSet::from([g]);
    let mut queue = VecDeque::from([(g, Vec::new())]);
    while let Some((h, labels)) = queue.pop_front() {
        for &e in a.graph.incoming(a.model.src(h)) {
            if a.edge_act(h, e) != e {
                continue;
            }
            let t = a.edge_res(h, e);
            let mut l: Vec<usize> = labels.clone();
            l.push(e);
            if !a.model.is_unit(t) {
                return Some(Path { base: v, edges: l });
            }
            if seen.insert(t) {
                queue.push_back((t, l));
            }
        }
    }
    None
}

/// `v ≪ w`: some path from `v` ends at a vertex in the orbit of `w`.
pub fn ll_preorder(a: &SelfSimilarAction, v: usize, w: usize) -> Result<bool> {
    let orbits = orbit_relation(&a.model, a.graph.num_vertices())?;
    let reach = a.graph.reachability();
    Ok((0..a.graph.num_vertices()).any(|x| reach[v][x] && orbits.related(x, w)))
}

/// Smallest hereditary, saturated, G-invariant set containing `v`.
pub fn invariant_closure(a: &SelfSimilarAction, v: usize) -> Result<BTreeSet<usize>> {
    let g = &a.graph;
    let nv = g.num_vertices();
    let orbits = orbit_relation(&a.model, nv)?;
    let reach = g.reachability();
    let mut h: BTreeSet<usize> =
        (0..nv).filter(|&w| (0..nv).any(|x| reach[v][x] && orbits.related(x, w))).collect();
    loop {
        let add: Vec<usize> = (0..nv)
            .filter(|&w| !h.contains(&w) && g.in_degree(w) > 0 && g.incoming(w).iter().all(|&e| h.contains(&g.src(e))))
            .collect();
        if add.is_empty() {
            return Ok(h);
        }
        for w in add {
            h.extend(orbits.classes[orbits.class_of[w]].iter().copied());
        }
    }
}

pub fn is_hereditary(a: &SelfSimilarAction, set: &BTreeSet<usize>) -> bool {
    a.graph.edges().iter().all(|e| !set.contains(&e.rng) || set.contains(&e.src))
}

pub fn is_saturated(a: &SelfSimilarAction, set: &BTreeSet<usize>) -> bool {
    let g = &a.graph;
    (0..g.num_vertices())
        .all(|w| set.contains(&w) || g.in_degree(w) == 0 || !g.incoming(w).iter().all(|&e| set.contains(&g.src(e))))
}

pub fn is_g_invariant(a: &SelfSimilarAction, set: &BTreeSet<usize>) -> bool {
    (0..a.model.len()).all(|g| set.contains(&a.model.src(g)) == set.contains(&a.model.rng(g)))
}

/// No proper non-empty invariant vertex sets.
pub fn check_min(a: &SelfSimilarAction) -> Verdict {
    let nv = a.graph.num_vertices();
    for v in 0..nv {
        match invariant_closure(a, v) {
            Err(_) => return Verdict::requires_explicit(a.model.scope_note()),
            Ok(h) if h.len() < nv => {
                let mut wit = witness("invariant_closure", json!({ "vertex": a.graph.vertex_name(v) }));
                wit["closure"] = json!(h.iter().map(|&x| a.graph.vertex_name(x)).collect::<Vec<_>>());
                return Verdict::fails(wit, a.model.scope_note());
            }
            Ok(_) => {}
        }
    }
    Verdict::holds(a.model.scope_note())
}

/// Vertices lying on a g-cycle with an entrance: `x` and an entrance `y`
/// both sit on a non-empty walk `x₀ ⇝ x_n` with `x₀ ~ x_n`.
pub fn vertices_on_cycles_with_entrance(a: &SelfSimilarAction, orbits: &Partition) -> BTreeSet<usize> {
    let g = &a.graph;
    let nv = g.num_vertices();
    let r = g.reachability();
    let rp = g.reachability_plus();
    let entrances: Vec<usize> = (0..nv).filter(|&y| g.in_degree(y) >= 2).collect();
    let mut out = BTreeSet::new();
    for x in 0..nv {
        'found: for &y in &entrances {
            for x0 in 0..nv {
                for xn in (0..nv).filter(|&xn| orbits.related(x0, xn)) {
                    for (p, q) in [(x, y), (y, x)] {
                        if r[x0][p] && r[p][q] && r[q][xn] {
                            let trivial = x0 == p && p == q && q == xn;
                            if !trivial || rp[x][x] {
                                out.insert(x);
                                break 'found;
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every vertex reaches a g-cycle with an entrance.
pub fn check_con(a: &SelfSimilarAction) -> Verdict {
    let Ok(orbits) = orbit_relation(&a.model, a.graph.num_vertices()) else {
        return Verdict::requires_explicit(a.model.scope_note());
    };
    let b = vertices_on_cycles_with_entrance(a, &orbits);
    let r = a.graph.reachability();
    for v in 0..a.graph.num_vertices() {
        if !b.iter().any(|&x| r[v][x]) {
            return Verdict::fails(
                witness("reaches_cycle_with_entrance", json!({ "vertex": a.graph.vertex_name(v) })),
                a.model.scope_note(),
            );
        }
    }
    Verdict::holds(a.model.scope_note())
}

/// Contracting means a finite nucleus on a graph without sources; finite
/// models always have one, so only sources and missing products matter.
pub fn check_contracting(a: &SelfSimilarAction) -> Verdict {
    if !a.model.is_explicit() {
        return Verdict::requires_explicit(a.model.scope_note());
    }
    if let Some(v) = (0..a.graph.num_vertices()).find(|&v| a.graph.in_degree(v) == 0) {
        return Verdict::fails(
            witness("in_degree", json!({ "vertex": a.graph.vertex_name(v) })),
            "contracting actions are defined on graphs without sources",
        );
    }
    Verdict::holds(a.model.scope_note())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScopeMode {
    /// HoldsOnModel is passed through derived verdicts.
    #[default]
    Model,
    /// HoldsOnModel inputs make derived verdicts RequiresExplicit.
    Strict,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportEntry {
    pub status: Status,
    pub witness: Option<Value>,
    pub scope: String,
    pub citation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub name: Option<String>,
    pub notes: Vec<String>,
    pub conditions: IndexMap<String, ReportEntry>,
}

/// Conjunction: any Fails, else any RequiresExplicit, else any
/// HoldsOnModel, else Holds.
pub fn conjunction(inputs: &[&ReportEntry], mode: ScopeMode) -> (Status, Option<Value>, String) {
    if let Some(f) = inputs.iter().find(|e| e.status == Status::Fails) {
        return (Status::Fails, f.witness.clone(), f.scope.clone());
    }
    if let Some(r) = inputs.iter().find(|e| e.status == Status::RequiresExplicit) {
        return (Status::RequiresExplicit, None, r.scope.clone());
    }
    if let Some(m) = inputs.iter().find(|e| e.status == Status::HoldsOnModel) {
        let status = match mode {
            ScopeMode::Model => Status::HoldsOnModel,
            ScopeMode::Strict => Status::RequiresExplicit,
        };
        return (status, None, m.scope.clone());
    }
    (Status::Holds, None, inputs.first().map_or_else(String::new, |e| e.scope.clone()))
}

pub fn report(a: &SelfSimilarAction, twist: Option<&Twist>, mode: ScopeMode, name: Option<String>) -> Report {
    let mut c: IndexMap<String, ReportEntry> = IndexMap::new();
    let mut put = |key: &str, v: Verdict, citation: &str| {
        c.insert(
            key.to_string(),
            ReportEntry { status: v.status, witness: v.witness, scope: v.scope, citation: citation.into() },
        );
    };
    put("Fin", check_fin(a), "every element has finitely many minimal strongly fixed paths");
    put("Evr", check_evr(a), "every element fixing all paths strongly fixes some path");
    put("Cyc", check_cyc(a), "every g-cycle has an entrance");
    put("Sla", check_sla(a), "every element fixing all paths has slack");
    put("Rec", check_rec(a), "no element fixes a path with non-unit restriction (every vertex of a finite graph is a finite receiver)");
    put("Min", check_min(a), "no nontrivial hereditary, saturated, G-invariant vertex sets");
    put("Con", check_con(a), "every vertex is reachable from a g-cycle with an entrance");
    put("PseudoFree", a.pseudo_free(), "no non-unit strongly fixes an edge; equivalent to S(G,E) being E*-unitary");
    put("TightlyFaithful", a.tightly_faithful(), "the tight kernel is the unit space");
    put("Faithful", a.faithful(), "the kernel of the action is the unit space");
    put("Contracting", check_contracting(a), "finite nucleus on a graph without sources");

    let derived: [(&str, &[&str], &str); 13] = [
        ("Hausdorff", &["Fin"], "all four groupoids are Hausdorff iff Fin"),
        ("TopFreeTight", &["Evr", "Cyc"], "tight groupoids are topologically free iff Evr and Cyc"),
        ("TopFreeCore", &["Evr"], "core tight groupoids are topologically free iff Evr"),
        ("TopFreeUniversal", &["Evr", "Rec"], "universal groupoids are topologically free iff Evr and Rec"),
        ("EffectiveS", &["Cyc", "Sla"], "S(G,E) is effective iff Cyc and Sla"),
        (
            "EffectiveTight",
            &["Cyc", "Sla"],
            "tight groupoid is effective iff Cyc and Sla (the infinite-receiver clause is vacuous on finite graphs)",
        ),
        ("Simplicity", &["Evr", "Cyc", "Min"], "essential algebras are simple iff Evr, Cyc and Min"),
        ("PureInfiniteness", &["Evr", "Cyc", "Min", "Con"], "simple and locally contracting, hence purely infinite simple"),
        ("CartanTight", &["Fin", "Evr", "Cyc"], "diagonal is Cartan in the tight algebra iff Fin, Evr and Cyc"),
        ("CartanCore", &["Fin", "Evr"], "diagonal is Cartan in the core algebra iff Fin and Evr"),
        ("CartanToeplitz", &["Fin", "Evr", "Rec"], "diagonal is Cartan in the Toeplitz algebra iff Fin, Evr and Rec"),
        ("UniquenessO", &["Evr", "Cyc"], "the Cuntz-Pimsner algebra has the intersection property under Evr and Cyc"),
        ("UniquenessT", &["Evr", "Rec"], "the Toeplitz algebra has the intersection property under Evr and Rec"),
    ];
    for (key, inputs, cite) in derived {
        let ins: Vec<&ReportEntry> = inputs.iter().map(|k| &c[*k]).collect();
        let (status, witness, scope) = conjunction(&ins, mode);
        let entry = ReportEntry { status, witness, scope, citation: format!("{cite} [{}]", inputs.join(" & ")) };
        c.insert(key.to_string(), entry);
    }
    if let Some(t) = twist {
        let entry = match validate_twist(a, t) {
            Err(_) => ReportEntry {
                status: Status::RequiresExplicit,
                witness: None,
                scope: a.model.scope_note().into(),
                citation: "twist identities".into(),
            },
            Ok(v) => ReportEntry {
                status: if v.is_ok() { Status::Holds } else { Status::Fails },
                witness: (!v.is_ok()).then(|| witness("validate_twist", json!({ "violations": v.violations }))),
                scope: a.model.scope_note().into(),
                citation: "2-cocycle identity on G and the edge compatibility identity".into(),
            },
        };
        c.insert("TwistValid".into(), entry);
    }
    // strict mode also demotes on-model base verdicts
    if mode == ScopeMode::Strict {
        for e in c.values_mut() {
            if e.status == Status::HoldsOnModel {
                e.status = Status::RequiresExplicit;
            }
        }
    }
    let mut notes = vec![
        "finite graph: every vertex is a finite receiver and the infinite-receiver clauses are vacuous".to_string(),
    ];
    if !a.model.is_explicit() {
        notes.push(a.model.scope_note().to_string());
    }
    Report { name, notes, conditions: c }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(s, "system: {n}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        for (k, e) in &self.conditions {
            let _ = write!(s, "{k:<18} {:?}", e.status);
            if let Some(w) = &e.witness {
                let _ = write!(s, "  witness: {w}");
            }
            let _ = writeln!(s);
        }
        s
    }
}
