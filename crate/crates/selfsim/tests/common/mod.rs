#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use indexmap::IndexMap;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use selfsim::action::ActionSpec;
use selfsim::graph::{EdgeSpec, GraphSpec};
use selfsim::groupoid::{Flags, GroupTable, GroupoidSpec, StateSpec};
use selfsim::invsemi::{self, SemigroupElement};
use selfsim::io::SystemFile;
use selfsim::{BoundaryPoint, Path, SelfSimilarAction, System};

pub const FIXTURES: &[&str] = &[
    "four_loop_z2",
    "not_exel_pardo",
    "two_edges",
    "entrance_free_loop",
    "twisted_three_spoke",
    "swap_only",
    "flip_cycle",
    "rotation_z3",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> System {
    System::load(&fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn explicit_fixtures() -> Vec<(&'static str, System)> {
    FIXTURES.iter().map(|n| (*n, fixture(n))).filter(|(_, s)| s.action.model.is_explicit()).collect()
}

pub fn el(a: &SelfSimilarAction, name: &str) -> usize {
    a.model.element(name).unwrap()
}

pub fn path(a: &SelfSimilarAction, names: &[&str]) -> Path {
    a.graph.path_from_names(None, names).unwrap()
}

pub fn vpath(a: &SelfSimilarAction, v: &str) -> Path {
    Path::vertex(a.graph.vertex(v).unwrap())
}

pub fn point(a: &SelfSimilarAction, prefix: &[&str], period: &[&str]) -> BoundaryPoint {
    let ids = |xs: &[&str]| xs.iter().map(|n| a.graph.edge(n).unwrap()).collect::<Vec<_>>();
    let (p, q) = (ids(prefix), ids(period));
    let base = a.graph.rng(*p.first().or(q.first()).unwrap());
    BoundaryPoint::new(&a.graph, base, p, q).unwrap()
}

// ---------- brute-force oracles ----------

/// Edge-by-edge evaluation of `g` on a path: `(g·μ, g|_μ)`, or `None`
/// when `g` cannot act.
pub fn brute_act(a: &SelfSimilarAction, g: usize, mu: &Path) -> Option<(Vec<usize>, usize)> {
    if a.model.src(g) != mu.base {
        return None;
    }
    let mut h = g;
    let mut out = Vec::new();
    for &e in &mu.edges {
        out.push(a.edge_act(h, e));
        h = a.edge_res(h, e);
    }
    Some((out, h))
}

pub fn brute_strongly_fixes(a: &SelfSimilarAction, g: usize, mu: &Path) -> bool {
    match brute_act(a, g, mu) {
        Some((img, h)) => a.model.rng(g) == mu.base && img == mu.edges && a.model.is_unit(h),
        None => false,
    }
}

/// Minimal strongly fixed paths of length at most `max_len`. A minimal
/// one has every proper prefix fixed but not strongly fixed, so only such
/// prefixes are extended.
pub fn brute_minimal_fixed(a: &SelfSimilarAction, g: usize, max_len: usize) -> BTreeSet<Path> {
    let v = a.model.src(g);
    let mut out = BTreeSet::new();
    if a.model.rng(g) != v {
        return out;
    }
    let mut stack = vec![Path::vertex(v)];
    while let Some(p) = stack.pop() {
        if brute_strongly_fixes(a, g, &p) {
            out.insert(p);
            continue;
        }
        if p.len() == max_len || brute_act(a, g, &p).unwrap().0 != p.edges {
            continue;
        }
        for &e in a.graph.incoming(a.graph.path_sr(&p)) {
            let mut q = p.clone();
            q.edges.push(e);
            stack.push(q);
        }
    }
    out
}

pub fn brute_fixes_all_upto(a: &SelfSimilarAction, g: usize, n: usize) -> bool {
    a.model.src(g) == a.model.rng(g)
        && (0..=n).all(|k| {
            a.graph.paths_of_length(a.model.src(g), k).iter().all(|p| brute_act(a, g, p).unwrap().0 == p.edges)
        })
}

// ---------- structural oracles ----------

pub fn brute_orbits(a: &SelfSimilarAction) -> Vec<Vec<bool>> {
    let n = a.graph.num_vertices();
    let mut r = vec![vec![false; n]; n];
    for (v, row) in r.iter_mut().enumerate() {
        row[v] = true;
    }
    for g in 0..a.model.len() {
        let (s, t) = (a.model.src(g), a.model.rng(g));
        r[s][t] = true;
        r[t][s] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub fn entrance_free(a: &SelfSimilarAction, p: &Path) -> bool {
    let g = &a.graph;
    std::iter::once(p.base).chain(p.edges.iter().map(|&e| g.src(e))).all(|v| g.in_degree(v) <= 1)
}

pub fn is_hereditary(a: &SelfSimilarAction, h: &BTreeSet<usize>) -> bool {
    a.graph.edges().iter().all(|e| !h.contains(&e.rng) || h.contains(&e.src))
}

pub fn is_saturated(a: &SelfSimilarAction, h: &BTreeSet<usize>) -> bool {
    (0..a.graph.num_vertices()).all(|w| {
        let inc = a.graph.incoming(w);
        h.contains(&w) || inc.is_empty() || inc.iter().any(|&e| !h.contains(&a.graph.src(e)))
    })
}

pub fn is_invariant(h: &BTreeSet<usize>, orb: &[Vec<bool>]) -> bool {
    h.iter().all(|&v| (0..orb.len()).all(|w| !orb[v][w] || h.contains(&w)))
}

pub fn invariant_sets(a: &SelfSimilarAction) -> Vec<BTreeSet<usize>> {
    let n = a.graph.num_vertices();
    let orb = brute_orbits(a);
    (0u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect::<BTreeSet<usize>>())
        .filter(|h| is_hereditary(a, h) && is_saturated(a, h) && is_invariant(h, &orb))
        .collect()
}

/// E*-unitary by definition: no non-idempotent lies above a nonzero idempotent.
pub fn brute_estar_unitary(a: &SelfSimilarAction) -> bool {
    let idems: Vec<SemigroupElement> =
        a.graph.all_paths(2).iter().map(|p| SemigroupElement::idempotent(a, p)).collect();
    invsemi::enumerate(a, 1).iter().filter(|s| !s.is_idempotent(a)).all(|s| {
        idems.iter().all(|f| !invsemi::leq(a, f, s).unwrap())
    })
}


// ---------- random systems ----------

fn random_graph(rng: &mut StdRng, nv: usize, ne: usize) -> GraphSpec {
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let edges = (0..ne)
        .map(|i| EdgeSpec {
            name: format!("e{i}"),
            src: vertices[rng.gen_range(0..nv)].clone(),
            rng: vertices[rng.gen_range(0..nv)].clone(),
        })
        .collect();
    GraphSpec { vertices, edges }
}

fn incoming(g: &GraphSpec, v: &str) -> Vec<usize> {
    (0..g.edges.len()).filter(|&i| g.edges[i].rng == v).collect()
}

/// Random behavioral system: at most 3 vertices, 4 edges and 4 states.
pub fn random_behavioral(rng: &mut StdRng) -> SystemFile {
    loop {
        if let Some(f) = try_behavioral(rng) {
            if f.validate().is_ok() {
                return f;
            }
        }
    }
}

fn try_behavioral(rng: &mut StdRng) -> Option<SystemFile> {
    let nv = rng.gen_range(1..=3);
    let ne = rng.gen_range(1..=4);
    let graph = random_graph(rng, nv, ne);
    let mut states: Vec<StateSpec> = graph
        .vertices
        .iter()
        .map(|v| StateSpec { name: format!("1_{v}"), src: v.clone(), rng: v.clone(), is_unit: true })
        .collect();
    let extra = rng.gen_range(0..=(4 - nv));
    for i in 0..extra {
        let v = graph.vertices.choose(rng).unwrap().clone();
        let d = incoming(&graph, &v).len();
        let ws: Vec<&String> = graph.vertices.iter().filter(|w| incoming(&graph, w).len() == d).collect();
        let w = (*ws.choose(rng).unwrap()).clone();
        states.push(StateSpec { name: format!("g{i}"), src: v, rng: w, is_unit: false });
    }
    let mut spec = ActionSpec::default();
    for s in states.iter().filter(|s| !s.is_unit) {
        let from = incoming(&graph, &s.src);
        let mut to = incoming(&graph, &s.rng);
        to.shuffle(rng);
        for (&e, &f) in from.iter().zip(&to) {
            let (se, sf) = (&graph.edges[e].src, &graph.edges[f].src);
            let cands: Vec<&StateSpec> = states.iter().filter(|t| &t.src == se && &t.rng == sf).collect();
            let r = cands.choose(rng)?;
            spec.edge_action.push((s.name.clone(), graph.edges[e].name.clone(), graph.edges[f].name.clone()));
            spec.restriction.push((s.name.clone(), graph.edges[e].name.clone(), r.name.clone()));
        }
    }
    let flags = Flags { unit_reflecting: true, element_complete: false, orbit_complete: true };
    Some(SystemFile {
        graph,
        groupoid: GroupoidSpec::Behavioral { states, flags },
        action: spec,
        twist: None,
        metadata: None,
    })
}

/// Random explicit bundle of cyclic groups `Z_n` with `n·|E^0| ≤ 4`.
///
/// The generator `t_v` permutes `vE^1` by `π` (preserving sources, with
/// `π^n = id`) and has restrictions `r_e`; then `t^k·e = π^k e` and
/// `t^k|_e = Σ_{i<k} r_{π^i e}`, which is consistent iff each `π`-orbit
/// of length `L` has restriction sum divisible by `L`.
pub fn random_cyclic_bundle(rng: &mut StdRng) -> SystemFile {
    loop {
        let nv = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=(4 / nv));
        let ne = rng.gen_range(1..=4);
        let graph = random_graph(rng, nv, ne);
        let name = |k: usize, v: &str| format!("{k}_{v}");
        let mut perm: Vec<usize> = (0..ne).collect();
        let mut res = vec![0usize; ne];
        for v in &graph.vertices {
            let inc = incoming(&graph, v);
            for s in &graph.vertices {
                let mut cls: Vec<usize> = inc.iter().copied().filter(|&e| &graph.edges[e].src == s).collect();
                cls.shuffle(rng);
                // split into cycles whose lengths divide n
                let mut i = 0;
                while i < cls.len() {
                    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0 && i + d <= cls.len()).collect();
                    let l = *divisors.choose(rng).unwrap();
                    let cyc = &cls[i..i + l];
                    for j in 0..l {
                        perm[cyc[j]] = cyc[(j + 1) % l];
                        res[cyc[j]] = rng.gen_range(0..n);
                    }
                    let sum: usize = cyc.iter().map(|&e| res[e]).sum();
                    let fix = (l - sum % l) % l;
                    // l divides n, so reducing mod n keeps the sum's class mod l
                    res[cyc[0]] = (res[cyc[0]] + fix) % n;
                    i += l;
                }
            }
        }
        let mut groups = IndexMap::new();
        for v in &graph.vertices {
            let elements: Vec<String> = (0..n).map(|k| name(k, v)).collect();
            let mut mul = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    mul.push((name(a, v), name(b, v), name((a + b) % n, v)));
                }
            }
            groups.insert(v.clone(), GroupTable { elements, mul });
        }
        let mut spec = ActionSpec::default();
        for e in 0..ne {
            let (v, s) = (&graph.edges[e].rng, &graph.edges[e].src);
            let mut f = e;
            let mut acc = 0;
            for k in 1..n {
                acc = (acc + res[f]) % n;
                f = perm[f];
                spec.edge_action.push((name(k, v), graph.edges[e].name.clone(), graph.edges[f].name.clone()));
                spec.restriction.push((name(k, v), graph.edges[e].name.clone(), name(acc, s)));
            }
        }
        let file = SystemFile {
            graph,
            groupoid: GroupoidSpec::Bundle { groups },
            action: spec,
            twist: None,
            metadata: None,
        };
        if file.validate().is_ok() {
            return file;
        }
    }
}

/// Half behavioral, half explicit.
pub fn random_system(rng: &mut StdRng) -> System {
    let f = if rng.gen_bool(0.5) { random_behavioral(rng) } else { random_cyclic_bundle(rng) };
    System::from_file(f).expect("generated systems validate")
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random eventually periodic point: a backward walk of random length,
/// closed off at a random repeated vertex.
pub fn random_point(a: &SelfSimilarAction, rng: &mut StdRng) -> BoundaryPoint {
    let g = &a.graph;
    loop {
        let start = rng.gen_range(0..g.num_vertices());
        let len = rng.gen_range(1..=8);
        let mut verts = vec![start];
        let mut edges = Vec::new();
        let mut finite = false;
        for _ in 0..len {
            let inc = g.incoming(*verts.last().unwrap());
            if inc.is_empty() {
                finite = true;
                break;
            }
            let e = *inc.choose(rng).unwrap();
            edges.push(e);
            verts.push(g.src(e));
        }
        if finite {
            return BoundaryPoint::finite(&Path { base: start, edges });
        }
        let closing: Vec<(usize, usize)> = (0..verts.len())
            .flat_map(|i| (i + 1..verts.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| verts[i] == verts[j])
            .collect();
        if let Some(&(i, j)) = closing.choose(rng) {
            return BoundaryPoint::new(g, start, edges[..i].to_vec(), edges[i..j].to_vec()).unwrap();
        }
    }
}
