//! Germs `[α, g, β; βξ]` over eventually periodic boundary points:
//! equality, composition, classification, singular decompositions and the
//! (Hum) rank test.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero as _};
use rand::Rng;
use serde::Serialize;

use crate::action::SelfSimilarAction;
use crate::boundary::BoundaryPoint;
use crate::graph::Path;
use crate::groupoid::{check_group, GroupTable};
use crate::invsemi::{self, SemigroupElement};
use crate::{Error, Result};

/// `[α, g, β; βξ]`; `xi` is the tail after `β`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Germ {
    pub alpha: Path,
    pub g: usize,
    pub beta: Path,
    pub xi: BoundaryPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IsotropyCase {
    /// `|α| = |β|`
    A,
    /// `|β| > |α|`
    B,
    /// `|α| > |β|`
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GermClass {
    Unit,
    Isotropy(IsotropyCase),
    Moving,
}

impl Germ {
    pub fn new(a: &SelfSimilarAction, alpha: Path, g: usize, beta: Path, xi: BoundaryPoint) -> Result<Self> {
        SemigroupElement::triple(a, alpha.clone(), g, beta.clone())?;
        if xi.base != a.graph.path_sr(&beta) {
            return Err(Error::RangeMismatch("the point must start at the source of beta".into()));
        }
        Ok(Germ { alpha, g, beta, xi })
    }

    /// `[rg(x), rg(x), rg(x); x]`.
    pub fn unit(a: &SelfSimilarAction, x: &BoundaryPoint) -> Self {
        let v = x.base;
        Germ { alpha: Path::vertex(v), g: a.model.unit_at(v), beta: Path::vertex(v), xi: x.clone() }
    }

    pub fn triple(&self) -> SemigroupElement {
        SemigroupElement::Triple { alpha: self.alpha.clone(), g: self.g, beta: self.beta.clone() }
    }

    pub fn display(&self, a: &SelfSimilarAction) -> String {
        format!(
            "[{}, {}, {}; {}]",
            a.graph.path_str(&self.alpha),
            a.model.name(self.g),
            a.graph.path_str(&self.beta),
            self.source(a).display(&a.graph)
        )
    }

    /// `βξ`.
    pub fn source(&self, a: &SelfSimilarAction) -> BoundaryPoint {
        self.xi.prepend(&a.graph, &self.beta).expect("valid germ")
    }

    /// `α(g·ξ)`.
    pub fn range(&self, a: &SelfSimilarAction) -> Result<BoundaryPoint> {
        a.act_boundary(self.g, &self.xi)?.prepend(&a.graph, &self.alpha)
    }
}

pub fn germ_source(a: &SelfSimilarAction, x: &Germ) -> BoundaryPoint {
    x.source(a)
}

pub fn germ_range(a: &SelfSimilarAction, x: &Germ) -> Result<BoundaryPoint> {
    x.range(a)
}

/// Two representatives agree iff they share a lower bound
/// `(α(gβ'), g|_{β'}, ββ') = (γ(hδ'), h|_{δ'}, δδ')` below the common
/// source. Once the ranges `α(gβ')` and `γ(hδ')` differ they stay different,
/// and once the restrictions agree they stay equal, so the walk along the
/// point stops at the first repeated `(g|_{β'}, h|_{δ'}, phase)`.
pub fn germ_eq(a: &SelfSimilarAction, x: &Germ, y: &Germ) -> Result<bool> {
    let point = x.source(a);
    if point != y.source(a) {
        return Ok(false);
    }
    let lag = |z: &Germ| z.alpha.len() as i64 - z.beta.len() as i64;
    if lag(x) != lag(y) {
        return Ok(false);
    }
    let n0 = x.beta.len().max(y.beta.len());
    let lead = point.take(n0);
    let bx = lead.strip_prefix(&x.beta, &a.graph).expect("beta is a prefix of the source");
    let by = lead.strip_prefix(&y.beta, &a.graph).expect("beta is a prefix of the source");
    let (ox, mut gx) = a.act_and_restrict(x.g, &bx)?;
    let (oy, mut gy) = a.act_and_restrict(y.g, &by)?;
    if a.graph.concat(&x.alpha, &ox)? != a.graph.concat(&y.alpha, &oy)? {
        return Ok(false);
    }
    let mut seen = HashSet::new();
    let mut n = n0;
    loop {
        if gx == gy {
            return Ok(true);
        }
        let Some(e) = point.edge_at(n) else {
            return Ok(false);
        };
        if n >= point.pre() && !seen.insert((gx, gy, point.key(n))) {
            return Ok(false);
        }
        if a.edge_act(gx, e) != a.edge_act(gy, e) {
            return Ok(false);
        }
        gx = a.edge_res(gx, e);
        gy = a.edge_res(gy, e);
        n += 1;
    }
}

/// Product of composable germs via the semigroup product of representatives.
pub fn germ_compose(a: &SelfSimilarAction, x: &Germ, y: &Germ) -> Result<Germ> {
    let src_y = y.source(a);
    if x.source(a) != y.range(a)? {
        return Err(Error::NotComposable(format!("{} and {}", x.display(a), y.display(a))));
    }
    match invsemi::mul(a, &x.triple(), &y.triple())? {
        SemigroupElement::Triple { alpha, g, beta } => {
            let xi = src_y.drop(&a.graph, beta.len());
            Ok(Germ { alpha, g, beta, xi })
        }
        SemigroupElement::Zero => unreachable!("composable germs have comparable paths"),
    }
}

/// `[β, g⁻¹, α; α(g·ξ)]`.
pub fn germ_inv(a: &SelfSimilarAction, x: &Germ) -> Result<Germ> {
    Ok(Germ {
        alpha: x.beta.clone(),
        g: a.model.inv(x.g)?,
        beta: x.alpha.clone(),
        xi: a.act_boundary(x.g, &x.xi)?,
    })
}

pub fn classify(a: &SelfSimilarAction, x: &Germ) -> Result<GermClass> {
    if x.source(a) != x.range(a)? {
        return Ok(GermClass::Moving);
    }
    if x.alpha == x.beta && a.strongly_fixes_point(x.g, &x.xi)? {
        return Ok(GermClass::Unit);
    }
    Ok(GermClass::Isotropy(match x.alpha.len().cmp(&x.beta.len()) {
        std::cmp::Ordering::Equal => IsotropyCase::A,
        std::cmp::Ordering::Less => IsotropyCase::B,
        std::cmp::Ordering::Greater => IsotropyCase::C,
    }))
}

/// The infinite path `α₁α₂…` with `α₁ = α`, `g₁ = g⁻¹`,
/// `α_{n+1} = g_n·α_n`, `g_{n+1} = g_n|_{α_n}`. The pair `(g_n, α_n)`
/// ranges over a finite set, so the result is eventually periodic.
pub fn cycle_infinite_path(a: &SelfSimilarAction, g: usize, alpha: &Path) -> Result<BoundaryPoint> {
    a.graph.check_path(alpha)?;
    if alpha.is_empty() || a.model.rng(g) != alpha.base || a.model.src(g) != a.graph.path_sr(alpha) {
        return Err(Error::Invalid(format!(
            "{} is not a {}-cycle",
            a.graph.path_str(alpha),
            a.model.name(g)
        )));
    }
    let mut seen: Vec<(usize, Path)> = Vec::new();
    let mut h = a.model.inv(g)?;
    let mut cur = alpha.clone();
    loop {
        if let Some(j) = seen.iter().position(|s| s.0 == h && s.1 == cur) {
            let mut prefix = Vec::new();
            let mut period = Vec::new();
            for (i, (_, p)) in seen.iter().enumerate() {
                if i < j { &mut prefix } else { &mut period }.extend_from_slice(&p.edges);
            }
            return BoundaryPoint::new(&a.graph, alpha.base, prefix, period);
        }
        seen.push((h, cur.clone()));
        let (next, r) = a.act_and_restrict(h, &cur)?;
        h = r;
        cur = next;
    }
}

/// The germ lies in the groupoid of `S_00`: some `h` has `hβ = α` and
/// `g⁻¹(h|_β)` strongly fixes `ξ`.
pub fn in_core(a: &SelfSimilarAction, x: &Germ) -> Result<bool> {
    let gi = a.model.inv(x.g)?;
    for h in (0..a.model.len()).filter(|&h| a.model.src(h) == x.beta.base && a.model.rng(h) == x.alpha.base) {
        if x.alpha.len() != x.beta.len() {
            break;
        }
        let (img, r) = a.act_and_restrict(h, &x.beta)?;
        if img == x.alpha && a.strongly_fixes_point(a.model.mul(gi, r)?, &x.xi)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A singular decomposition `(μ_{<position}, g)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularDecomposition {
    pub position: usize,
    pub g: usize,
}

fn reaches_unit(a: &SelfSimilarAction, h: usize) -> bool {
    a.fixing_automaton(h).nodes.iter().any(|&n| a.model.is_unit(n))
}

/// `g` fixes the tail of `μ` after `position`, the tail is not strongly
/// fixed, and every prefix of the tail has a strongly fixed extension.
pub fn is_singular_decomposition(a: &SelfSimilarAction, mu: &BoundaryPoint, position: usize, g: usize) -> Result<bool> {
    if mu.is_finite() || a.model.src(g) != mu.vertex_at(&a.graph, position) {
        return Ok(false);
    }
    let tail = mu.drop(&a.graph, position);
    let (fixed, strongly) = a.fix_status(g, &tail)?;
    if !fixed || strongly {
        return Ok(false);
    }
    let mut seen = HashSet::new();
    let mut h = g;
    let mut i = 0;
    loop {
        if i >= tail.pre() && !seen.insert((h, tail.key(i))) {
            break;
        }
        if !reaches_unit(a, h) {
            return Ok(false);
        }
        h = a.edge_res(h, tail.edge_at(i).unwrap());
        i += 1;
    }
    Ok(true)
}

/// Decompositions at the same or different positions are equivalent iff
/// pushing the earlier one forward, the restrictions eventually coincide.
pub fn decompositions_equivalent(
    a: &SelfSimilarAction,
    mu: &BoundaryPoint,
    x: &SingularDecomposition,
    y: &SingularDecomposition,
) -> bool {
    let (first, second) = if x.position <= y.position { (x, y) } else { (y, x) };
    let (mut p, mut gx, mut gy) = (first.position, first.g, second.g);
    while p < second.position {
        gx = a.edge_res(gx, mu.edge_at(p).unwrap());
        p += 1;
    }
    let mut seen = HashSet::new();
    loop {
        if gx == gy {
            return true;
        }
        if p >= mu.pre() && !seen.insert((gx, gy, mu.key(p))) {
            return false;
        }
        let e = mu.edge_at(p).unwrap();
        gx = a.edge_res(gx, e);
        gy = a.edge_res(gy, e);
        p += 1;
    }
}

/// One representative per equivalence class, all at position `pre(μ)`.
///
/// Every class has representatives at all later positions, and the tails
/// at positions `pre + k·per` coincide, so restriction along one period
/// induces a bijection on the classes found at `pre`; hence position `pre`
/// meets every class. Finite points have none on a finite graph (their
/// sources would have to be infinite receivers).
pub fn singular_decompositions(a: &SelfSimilarAction, mu: &BoundaryPoint) -> Result<Vec<SingularDecomposition>> {
    if mu.is_finite() {
        return Ok(Vec::new());
    }
    let p = mu.pre();
    let v = mu.vertex_at(&a.graph, p);
    let mut classes: Vec<SingularDecomposition> = Vec::new();
    let mut names: Vec<usize> = (0..a.model.len()).filter(|&g| a.model.src(g) == v).collect();
    names.sort_by(|&x, &y| a.model.name(x).cmp(a.model.name(y)));
    for g in names {
        if !is_singular_decomposition(a, mu, p, g)? {
            continue;
        }
        let cand = SingularDecomposition { position: p, g };
        if !classes.iter().any(|c| decompositions_equivalent(a, mu, c, &cand)) {
            classes.push(cand);
        }
    }
    Ok(classes)
}

/// The isotropy over `μ` lying in the closure of the unit space:
/// `μ` itself plus `[α, g, α; μ]` per singular class.
pub fn xbar(a: &SelfSimilarAction, mu: &BoundaryPoint) -> Result<Vec<Germ>> {
    let mut out = vec![Germ::unit(a, mu)];
    for d in singular_decompositions(a, mu)? {
        let alpha = mu.take(d.position);
        out.push(Germ { alpha: alpha.clone(), g: d.g, beta: alpha, xi: mu.drop(&a.graph, d.position) });
    }
    Ok(out)
}

/// Random eventually periodic boundary point (or a finite one ending at a
/// source): a random backward walk until a vertex repeats.
pub fn sample_point(a: &SelfSimilarAction, rng: &mut impl Rng) -> BoundaryPoint {
    let g = &a.graph;
    let start = rng.gen_range(0..g.num_vertices());
    let mut verts = vec![start];
    let mut edges = Vec::new();
    loop {
        let cur = *verts.last().unwrap();
        let inc = g.incoming(cur);
        if inc.is_empty() {
            return BoundaryPoint::finite(&Path { base: start, edges });
        }
        let e = inc[rng.gen_range(0..inc.len())];
        edges.push(e);
        verts.push(g.src(e));
        let n = verts.len() - 1;
        if let Some(i) = verts[..n].iter().position(|&x| x == verts[n]) {
            return BoundaryPoint::new(g, start, edges[..i].to_vec(), edges[i..].to_vec())
                .expect("walk closes a cycle");
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NonHausdorffEntry {
    pub point: String,
    pub xbar_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonHausdorffReport {
    pub entries: Vec<NonHausdorffEntry>,
    /// `|nucleus|` when the action is contracting.
    pub nucleus_size: Option<usize>,
    /// Whether `|xbar(μ)| ≤ |nucleus|` on every sample.
    pub bound_holds: Option<bool>,
}

pub fn finitely_non_hausdorff_report(a: &SelfSimilarAction, samples: &[BoundaryPoint]) -> Result<NonHausdorffReport> {
    let mut entries = Vec::new();
    for mu in samples {
        entries.push(NonHausdorffEntry { point: mu.display(&a.graph), xbar_size: xbar(a, mu)?.len() });
    }
    let nucleus_size = a.nucleus().ok().map(|n| n.len());
    let bound_holds = nucleus_size.map(|n| entries.iter().all(|e| e.xbar_size <= n));
    Ok(NonHausdorffReport { entries, nucleus_size, bound_holds })
}

/// A finite group with a family of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupFamily {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    pub family: Vec<Vec<usize>>,
}

impl SubgroupFamily {
    pub fn new(group: &GroupTable, family: &[Vec<String>]) -> Result<Self> {
        let (identity, table) = check_group(group)?;
        let idx = |s: &String| {
            group.elements.iter().position(|x| x == s).ok_or_else(|| Error::UnknownElement(s.clone()))
        };
        if family.is_empty() {
            return Err(Error::Invalid("the family of subgroups is empty".into()));
        }
        let mut fam = Vec::new();
        for sub in family {
            let set: BTreeSet<usize> = sub.iter().map(idx).collect::<Result<_>>()?;
            if !set.contains(&identity) || set.iter().any(|&x| set.iter().any(|&y| !set.contains(&table[x][y]))) {
                return Err(Error::Invalid(format!("{sub:?} is not a subgroup")));
            }
            fam.push(set.into_iter().collect());
        }
        Ok(SubgroupFamily { elements: group.elements.clone(), table, identity, family: fam })
    }
}

/// Exact rank over `Q` by Gaussian elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for j in c..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// The coset-indicator operator has trivial kernel: rows `1_{γΓ}` over
/// `Γ` in the family and `γ` in the group span all functions.
pub fn hum_check(data: &SubgroupFamily) -> bool {
    let n = data.elements.len();
    let mut rows = Vec::new();
    for sub in &data.family {
        for g in 0..n {
            let mut row = vec![BigRational::from_integer(BigInt::from(0)); n];
            for &s in sub {
                row[data.table[g][s]] = BigRational::one();
            }
            rows.push(row);
        }
    }
    rank(&rows) == n
}

#[derive(Clone, Debug, Serialize)]
pub struct HumOutcome {
    pub group_size: usize,
    pub holds: Option<bool>,
    pub note: String,
}

/// Feeds the isotropy `xbar(μ)` as a group with the family consisting of
/// the whole group; refuses when the set is not closed under products.
pub fn hum_at_point(a: &SelfSimilarAction, mu: &BoundaryPoint) -> Result<HumOutcome> {
    let germs = xbar(a, mu)?;
    let n = germs.len();
    let find = |x: &Germ| -> Result<Option<usize>> {
        for (i, y) in germs.iter().enumerate() {
            if germ_eq(a, x, y)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    };
    let mut mul = Vec::new();
    for (i, x) in germs.iter().enumerate() {
        for (j, y) in germs.iter().enumerate() {
            match find(&germ_compose(a, x, y)?)? {
                Some(k) => mul.push((i.to_string(), j.to_string(), k.to_string())),
                None => {
                    return Ok(HumOutcome {
                        group_size: n,
                        holds: None,
                        note: "xbar is not closed under products; no group to test".into(),
                    })
                }
            }
        }
    }
    let table = GroupTable { elements: (0..n).map(|i| i.to_string()).collect(), mul };
    let fam = SubgroupFamily::new(&table, &[table.elements.clone()])?;
    Ok(HumOutcome {
        group_size: n,
        holds: Some(hum_check(&fam)),
        note: "family taken as the whole isotropy group".into(),
    })
}
