//! Element arithmetic in the inverse semigroup `S(G,E)` of triples
//! `(α, g, β)` plus zero.

use std::collections::{BTreeSet, VecDeque};

use crate::action::SelfSimilarAction;
use crate::graph::Path;
use crate::groupoid::Verdict;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemigroupElement {
    Zero,
    Triple { alpha: Path, g: usize, beta: Path },
}

pub use SemigroupElement::Zero;

impl SemigroupElement {
    /// Checks `sr(α) = rg(g)` and `sr(β) = sr(g)`.
    pub fn triple(a: &SelfSimilarAction, alpha: Path, g: usize, beta: Path) -> Result<Self> {
        a.graph.check_path(&alpha)?;
        a.graph.check_path(&beta)?;
        if g >= a.model.len() {
            return Err(Error::UnknownElement(g.to_string()));
        }
        if a.graph.path_sr(&alpha) != a.model.rng(g) || a.graph.path_sr(&beta) != a.model.src(g) {
            return Err(Error::RangeMismatch(format!(
                "({}, {}, {}) is not a triple",
                a.graph.path_str(&alpha),
                a.model.name(g),
                a.graph.path_str(&beta)
            )));
        }
        Ok(SemigroupElement::Triple { alpha, g, beta })
    }

    /// `f_μ = (μ, sr(μ), μ)`.
    pub fn idempotent(a: &SelfSimilarAction, mu: &Path) -> Self {
        let v = a.graph.path_sr(mu);
        SemigroupElement::Triple { alpha: mu.clone(), g: a.model.unit_at(v), beta: mu.clone() }
    }

    /// `(rg(g), g, sr(g))`.
    pub fn from_element(a: &SelfSimilarAction, g: usize) -> Self {
        SemigroupElement::Triple {
            alpha: Path::vertex(a.model.rng(g)),
            g,
            beta: Path::vertex(a.model.src(g)),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Zero)
    }

    pub fn is_idempotent(&self, a: &SelfSimilarAction) -> bool {
        match self {
            Zero => true,
            SemigroupElement::Triple { alpha, g, beta } => alpha == beta && a.model.is_unit(*g),
        }
    }

    pub fn display(&self, a: &SelfSimilarAction) -> String {
        match self {
            Zero => "0".into(),
            SemigroupElement::Triple { alpha, g, beta } => format!(
                "({}, {}, {})",
                a.graph.path_str(alpha),
                a.model.name(*g),
                a.graph.path_str(beta)
            ),
        }
    }
}

fn require_explicit(a: &SelfSimilarAction) -> Result<()> {
    if a.model.is_explicit() {
        Ok(())
    } else {
        Err(Error::RequiresExplicit)
    }
}

fn concat(a: &SelfSimilarAction, p: &Path, q: &Path) -> Path {
    a.graph.concat(p, q).expect("composable by construction")
}

/// `(α,g,β)(γ,h,δ)`:
/// `(α(gβ'), g|_{β'} h, δ)` if `γ = ββ'`;
/// `(α, g(h⁻¹|_{γ'})⁻¹, δ(h⁻¹γ'))` if `β = γγ'`; zero otherwise.
pub fn mul(a: &SelfSimilarAction, s: &SemigroupElement, t: &SemigroupElement) -> Result<SemigroupElement> {
    require_explicit(a)?;
    let (SemigroupElement::Triple { alpha, g, beta }, SemigroupElement::Triple { alpha: gamma, g: h, beta: delta }) = (s, t)
    else {
        return Ok(Zero);
    };
    let m = &a.model;
    if let Some(bp) = gamma.strip_prefix(beta, &a.graph) {
        let (gbp, r) = a.act_and_restrict(*g, &bp)?;
        return Ok(SemigroupElement::Triple { alpha: concat(a, alpha, &gbp), g: m.mul(r, *h)?, beta: delta.clone() });
    }
    if let Some(gp) = beta.strip_prefix(gamma, &a.graph) {
        let hi = m.inv(*h)?;
        let (hgp, r) = a.act_and_restrict(hi, &gp)?;
        return Ok(SemigroupElement::Triple {
            alpha: alpha.clone(),
            g: m.mul(*g, m.inv(r)?)?,
            beta: concat(a, delta, &hgp),
        });
    }
    Ok(Zero)
}

/// `(α,g,β)* = (β,g⁻¹,α)`.
pub fn star(a: &SelfSimilarAction, s: &SemigroupElement) -> Result<SemigroupElement> {
    require_explicit(a)?;
    Ok(match s {
        Zero => Zero,
        SemigroupElement::Triple { alpha, g, beta } => {
            SemigroupElement::Triple { alpha: beta.clone(), g: a.model.inv(*g)?, beta: alpha.clone() }
        }
    })
}

/// `s ≤ t` iff `β_s = β_t δ'`, `α_s = α_t (g_t·δ')` and `g_s = g_t|_{δ'}`.
pub fn leq(a: &SelfSimilarAction, s: &SemigroupElement, t: &SemigroupElement) -> Result<bool> {
    require_explicit(a)?;
    match (s, t) {
        (Zero, _) => Ok(true),
        (_, Zero) => Ok(false),
        (
            SemigroupElement::Triple { alpha: a_s, g: g_s, beta: b_s },
            SemigroupElement::Triple { alpha: a_t, g: g_t, beta: b_t },
        ) => {
            let Some(d) = b_s.strip_prefix(b_t, &a.graph) else {
                return Ok(false);
            };
            let (gd, r) = a.act_and_restrict(*g_t, &d)?;
            Ok(*a_s == concat(a, a_t, &gd) && *g_s == r)
        }
    }
}

/// `t f_γ t*`: `f_{α(gβ')}` if `γ = ββ'`, `f_α` if `β = γγ'`, zero otherwise.
pub fn conj_idem(a: &SelfSimilarAction, t: &SemigroupElement, gamma: &Path) -> Result<SemigroupElement> {
    require_explicit(a)?;
    a.graph.check_path(gamma)?;
    let SemigroupElement::Triple { alpha, g, beta } = t else {
        return Ok(Zero);
    };
    if let Some(bp) = gamma.strip_prefix(beta, &a.graph) {
        let p = concat(a, alpha, &a.act_path(*g, &bp)?);
        return Ok(SemigroupElement::idempotent(a, &p));
    }
    if beta.strip_prefix(gamma, &a.graph).is_some() {
        return Ok(SemigroupElement::idempotent(a, alpha));
    }
    Ok(Zero)
}

/// Whether `t f_μ t* · f_μ ≠ 0` for every extension `μ` of `γ`.
///
/// For `μ = ββ'` the product is nonzero iff `ββ'` and `α(gβ')` are
/// comparable; for `μ < β` iff `μ` and `α` are comparable. With `a = |α|`,
/// `b = |β|` and `β' ⊇ β₀`:
/// * `a = b` needs `α = β` and `g` fixing every extension of `β₀`;
/// * `a < b` needs `β = αβ*` and `gβ'` a prefix of `β*β'`;
/// * `a > b` needs `α = βα*` and `β'` a prefix of `α*(gβ')`.
///
/// The last two are checked over all `β'` at once by exploring states
/// `(g|_{β'}, pending edges)`, of which there are finitely many.
pub fn fixed_by(a: &SelfSimilarAction, t: &SemigroupElement, gamma: &Path) -> Result<bool> {
    require_explicit(a)?;
    a.graph.check_path(gamma)?;
    let SemigroupElement::Triple { alpha, g, beta } = t else {
        return Ok(false);
    };
    let graph = &a.graph;
    let beta0 = if let Some(rest) = gamma.strip_prefix(beta, graph) {
        rest
    } else if gamma.is_prefix_of(beta) {
        for i in gamma.len()..beta.len() {
            let p = beta.prefix(i);
            if graph.in_degree(graph.path_sr(&p)) != 1 || !(p.is_prefix_of(alpha) || alpha.is_prefix_of(&p)) {
                return Ok(false);
            }
        }
        Path::vertex(graph.path_sr(beta))
    } else {
        return Ok(false);
    };
    let (la, lb) = (alpha.len(), beta.len());
    if la == lb {
        if alpha != beta {
            return Ok(false);
        }
        let (img, r) = a.act_and_restrict(*g, &beta0)?;
        return Ok(img == beta0 && a.fixes_all_paths(r));
    }
    // Lag automaton: `pending` holds the edges the next outputs must match.
    let lagging_output = la < lb;
    let init: VecDeque<usize> = if lagging_output {
        match beta.strip_prefix(alpha, graph) {
            Some(p) => p.edges.into(),
            None => return Ok(false),
        }
    } else {
        match alpha.strip_prefix(beta, graph) {
            Some(p) => p.edges.into(),
            None => return Ok(false),
        }
    };
    let step = |h: usize, pending: &VecDeque<usize>, x: usize| -> Option<(usize, VecDeque<usize>)> {
        let y = a.edge_act(h, x);
        let mut q = pending.clone();
        let head = q.pop_front()?;
        if lagging_output {
            // output y must match the oldest pending input
            if y != head {
                return None;
            }
            q.push_back(x);
        } else {
            if x != head {
                return None;
            }
            q.push_back(y);
        }
        Some((a.edge_res(h, x), q))
    };
    let mut h = *g;
    let mut pending = init;
    for &x in &beta0.edges {
        match step(h, &pending, x) {
            Some((h2, q)) => {
                h = h2;
                pending = q;
            }
            None => return Ok(false),
        }
    }
    let mut seen = BTreeSet::from([(h, pending.clone())]);
    let mut queue = VecDeque::from([(h, pending)]);
    while let Some((h, q)) = queue.pop_front() {
        for &x in graph.incoming(a.model.src(h)) {
            match step(h, &q, x) {
                None => return Ok(false),
                Some(next) => {
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `|α| − |β|`.
pub fn length(s: &SemigroupElement) -> Result<i64> {
    match s {
        Zero => Err(Error::Invalid("the length cocycle is undefined at zero".into())),
        SemigroupElement::Triple { alpha, beta, .. } => Ok(alpha.len() as i64 - beta.len() as i64),
    }
}

pub fn in_s0(s: &SemigroupElement) -> bool {
    length(s).is_ok_and(|l| l == 0)
}

/// Some `h` has `hβ = α` and `h|_β = g`.
pub fn in_s00(a: &SelfSimilarAction, s: &SemigroupElement) -> Result<bool> {
    require_explicit(a)?;
    let SemigroupElement::Triple { alpha, g, beta } = s else {
        return Ok(true);
    };
    if alpha.len() != beta.len() {
        return Ok(false);
    }
    for h in (0..a.model.len()).filter(|&h| a.model.src(h) == beta.base && a.model.rng(h) == alpha.base) {
        let (img, r) = a.act_and_restrict(h, beta)?;
        if img == *alpha && r == *g {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `S(G,E)` is E*-unitary exactly when the action is pseudo-free.
pub fn estar_unitary(a: &SelfSimilarAction) -> Verdict {
    a.pseudo_free()
}

/// Every triple with `|α|, |β| ≤ n`, in a fixed order.
pub fn enumerate(a: &SelfSimilarAction, n: usize) -> Vec<SemigroupElement> {
    let paths = a.graph.all_paths(n);
    let mut out = Vec::new();
    for g in 0..a.model.len() {
        for alpha in paths.iter().filter(|p| a.graph.path_sr(p) == a.model.rng(g)) {
            for beta in paths.iter().filter(|p| a.graph.path_sr(p) == a.model.src(g)) {
                out.push(SemigroupElement::Triple { alpha: alpha.clone(), g, beta: beta.clone() });
            }
        }
    }
    out
}
