//! Exact `T`-valued twists `σ = (σ_G, σ_⋈)` and the induced 2-cocycle
//! `ω_σ` on `S(G,E)`. Phases are rationals mod 1, written additively.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::action::SelfSimilarAction;
use crate::graph::Path;
use crate::invsemi::{self, SemigroupElement};
use crate::validation::Validation;
use crate::{Error, Result};

/// `e^{2πi·θ}` with `θ ∈ [0, 1)` rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(Rational64);

impl Phase {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Parse("phase with zero denominator".into()));
        }
        Ok(Phase::reduce(Rational64::new(numer, denom)))
    }

    fn reduce(r: Rational64) -> Self {
        let f = r - r.floor();
        Phase(f)
    }

    pub fn zero() -> Self {
        Phase(Rational64::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn angle(&self) -> Rational64 {
        self.0
    }

    /// Complex conjugate, i.e. the inverse in `T`.
    pub fn conj(self) -> Self {
        -self
    }

    /// Floating-point value for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let t = 2.0 * std::f64::consts::PI * (*self.0.numer() as f64 / *self.0.denom() as f64);
        (t.cos(), t.sin())
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        Phase::reduce(self.0 + o.0)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, o: Phase) -> Phase {
        Phase::reduce(self.0 - o.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::reduce(-self.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Phase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad phase `{s}`, expected p/q"));
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
            None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
        };
        Phase::new(p, q)
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl One for Phase {
    fn one() -> Self {
        Phase::zero()
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    /// Multiplication in `T` is addition of angles.
    fn mul(self, o: Phase) -> Phase {
        self + o
    }
}

/// JSON form; omitted entries are `0/1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistSpec {
    #[serde(rename = "sigma_G", default)]
    pub sigma_g: Vec<(String, String, Phase)>,
    #[serde(default)]
    pub sigma_bowtie: Vec<(String, String, Phase)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twist {
    n: usize,
    ne: usize,
    sigma_g: Vec<Phase>,
    sigma_b: Vec<Phase>,
}

impl Twist {
    pub fn trivial(a: &SelfSimilarAction) -> Self {
        let (n, ne) = (a.model.len(), a.graph.num_edges());
        Twist { n, ne, sigma_g: vec![Phase::zero(); n * n], sigma_b: vec![Phase::zero(); n * ne] }
    }

    pub fn from_spec(a: &SelfSimilarAction, spec: &TwistSpec) -> Result<Self> {
        let mut t = Twist::trivial(a);
        let m = &a.model;
        for (g, h, p) in &spec.sigma_g {
            let (gi, hi) = (m.element(g)?, m.element(h)?);
            if m.src(gi) != m.rng(hi) {
                return Err(Error::NotComposable(format!("sigma_G({g}, {h})")));
            }
            t.sigma_g[gi * t.n + hi] = *p;
        }
        for (g, e, p) in &spec.sigma_bowtie {
            let (gi, ei) = (m.element(g)?, a.graph.edge(e)?);
            if m.src(gi) != a.graph.rng(ei) {
                return Err(Error::RangeMismatch(format!("sigma_bowtie({g}, {e})")));
            }
            t.sigma_b[gi * t.ne + ei] = *p;
        }
        Ok(t)
    }

    pub fn to_spec(&self, a: &SelfSimilarAction) -> TwistSpec {
        let mut spec = TwistSpec::default();
        for g in 0..self.n {
            for h in 0..self.n {
                if !self.sigma_g[g * self.n + h].is_zero() {
                    spec.sigma_g.push((a.model.name(g).into(), a.model.name(h).into(), self.sigma_g[g * self.n + h]));
                }
            }
            for e in 0..self.ne {
                if !self.sigma_b[g * self.ne + e].is_zero() {
                    spec.sigma_bowtie.push((a.model.name(g).into(), a.graph.edge_name(e).into(), self.sigma_b[g * self.ne + e]));
                }
            }
        }
        spec
    }

    pub fn sigma_g(&self, g: usize, h: usize) -> Phase {
        self.sigma_g[g * self.n + h]
    }

    pub fn sigma_bowtie(&self, g: usize, e: usize) -> Phase {
        self.sigma_b[g * self.ne + e]
    }
}

/// Checks the 2-cocycle identity and normalization of `σ_G`, the
/// normalization of `σ_⋈`, and
/// `σ_⋈(h,e) − σ_⋈(gh,e) + σ_⋈(g,he) = −σ_G(g|_{he}, h|_e) + σ_G(g,h)`.
pub fn validate_twist(a: &SelfSimilarAction, t: &Twist) -> Result<Validation> {
    let m = &a.model;
    if !m.is_explicit() {
        return Err(Error::RequiresExplicit);
    }
    let mut report = Validation::new();
    let n = m.len();
    let composable = |x: usize, y: usize| m.src(x) == m.rng(y);
    for x in 0..n {
        let (r, s) = (m.unit_at(m.rng(x)), m.unit_at(m.src(x)));
        if !t.sigma_g(r, x).is_zero() || !t.sigma_g(x, s).is_zero() {
            report.push(format!("sigma_G is not normalized at {}", m.name(x)));
        }
        for y in (0..n).filter(|&y| composable(x, y)) {
            let xy = m.mul(x, y)?;
            for z in (0..n).filter(|&z| composable(y, z)) {
                let yz = m.mul(y, z)?;
                if t.sigma_g(x, y) + t.sigma_g(xy, z) != t.sigma_g(y, z) + t.sigma_g(x, yz) {
                    report.push(format!(
                        "sigma_G cocycle identity fails at ({}, {}, {})",
                        m.name(x),
                        m.name(y),
                        m.name(z)
                    ));
                }
            }
        }
    }
    for e in 0..a.graph.num_edges() {
        let u = m.unit_at(a.graph.rng(e));
        if !t.sigma_bowtie(u, e).is_zero() {
            report.push(format!("sigma_bowtie({}, {}) is not 0", m.name(u), a.graph.edge_name(e)));
        }
    }
    for g in 0..n {
        for h in (0..n).filter(|&h| composable(g, h)) {
            let gh = m.mul(g, h)?;
            for &e in a.graph.incoming(m.src(h)) {
                let he = a.edge_act(h, e);
                let lhs = t.sigma_bowtie(h, e) - t.sigma_bowtie(gh, e) + t.sigma_bowtie(g, he);
                let rhs = -t.sigma_g(a.edge_res(g, he), a.edge_res(h, e)) + t.sigma_g(g, h);
                if lhs != rhs {
                    report.push(format!(
                        "edge identity fails at ({}, {}, {}): {} != {}",
                        m.name(g),
                        m.name(h),
                        a.graph.edge_name(e),
                        lhs,
                        rhs
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// `σ_⋈(h, eμ) = σ_⋈(h, e) + σ_⋈(h|_e, μ)`, zero on vertices.
pub fn extend_bowtie(a: &SelfSimilarAction, t: &Twist, g: usize, mu: &Path) -> Result<Phase> {
    a.graph.check_path(mu)?;
    if a.model.src(g) != mu.base {
        return Err(Error::RangeMismatch(format!(
            "sr({}) != rg({})",
            a.model.name(g),
            a.graph.path_str(mu)
        )));
    }
    let mut h = g;
    let mut acc = Phase::zero();
    for &e in &mu.edges {
        acc = acc + t.sigma_bowtie(h, e);
        h = a.edge_res(h, e);
    }
    Ok(acc)
}

/// `ω_σ(s,t)`: `σ_⋈(g,β') + σ_G(g|_{β'}, h)` if `γ = ββ'`;
/// `σ_G(g, (h⁻¹|_{γ'})⁻¹) + σ_⋈(h, h⁻¹γ')` if `β = γγ'`.
pub fn omega(a: &SelfSimilarAction, t: &Twist, s: &SemigroupElement, u: &SemigroupElement) -> Result<Phase> {
    let m = &a.model;
    if !m.is_explicit() {
        return Err(Error::RequiresExplicit);
    }
    let (SemigroupElement::Triple { g, beta, .. }, SemigroupElement::Triple { alpha: gamma, g: h, .. }) = (s, u) else {
        return Err(Error::Invalid("omega is undefined on zero products".into()));
    };
    if let Some(bp) = gamma.strip_prefix(beta, &a.graph) {
        let r = a.restrict_path(*g, &bp)?;
        return Ok(extend_bowtie(a, t, *g, &bp)? + t.sigma_g(r, *h));
    }
    if let Some(gp) = beta.strip_prefix(gamma, &a.graph) {
        let hi = m.inv(*h)?;
        let (hgp, r) = a.act_and_restrict(hi, &gp)?;
        return Ok(t.sigma_g(*g, m.inv(r)?) + extend_bowtie(a, t, *h, &hgp)?);
    }
    Err(Error::Invalid("omega is undefined on zero products".into()))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OmegaReport {
    pub bound: usize,
    pub elements: usize,
    pub triples_checked: usize,
    pub violations: Vec<String>,
}

impl OmegaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Brute-force check of `ω(s,t) + ω(r,st) = ω(r,s) + ω(rs,t)` over all
/// triples with `|α|, |β| ≤ bound` and `rst ≠ 0`, together with
/// `ω(s,s*) = ω(s*,s)`, `ω(e,f) = 0` on idempotents, `ω(s,e) = ω(e,s*) = 0`
/// when `s*s ≤ e`, and `ω(s,e) = ω(ses*, s)`.
pub fn verify_omega_cocycle(a: &SelfSimilarAction, t: &Twist, bound: usize) -> Result<OmegaReport> {
    let elems = invsemi::enumerate(a, bound);
    verify_omega_on(a, t, &elems, &elems, &elems, bound)
}

/// As [`verify_omega_cocycle`] with the triples drawn from the given lists.
pub fn verify_omega_on(
    a: &SelfSimilarAction,
    t: &Twist,
    rs: &[SemigroupElement],
    ss: &[SemigroupElement],
    ts: &[SemigroupElement],
    bound: usize,
) -> Result<OmegaReport> {
    let mut report = OmegaReport { bound, elements: ss.len(), ..Default::default() };
    let show = |x: &SemigroupElement| x.display(a);
    let comparable = |x: &SemigroupElement, y: &SemigroupElement| match (x, y) {
        (SemigroupElement::Triple { beta, .. }, SemigroupElement::Triple { alpha, .. }) => {
            beta.is_prefix_of(alpha) || alpha.is_prefix_of(beta)
        }
        _ => false,
    };
    for s in ss {
        let sst = invsemi::star(a, s)?;
        if omega(a, t, s, &sst)? != omega(a, t, &sst, s)? {
            report.violations.push(format!("omega(s,s*) != omega(s*,s) at s = {}", show(s)));
        }
        let sts = invsemi::mul(a, &sst, s)?;
        for e in ts.iter().filter(|e| e.is_idempotent(a)) {
            if !comparable(s, e) {
                continue;
            }
            let se = omega(a, t, s, e)?;
            if s.is_idempotent(a) && !se.is_zero() {
                report.violations.push(format!("omega(e,f) != 0 at ({}, {})", show(s), show(e)));
            }
            if invsemi::leq(a, &sts, e)? {
                let es = omega(a, t, e, &sst)?;
                if !se.is_zero() || !es.is_zero() {
                    report.violations.push(format!("omega(s,e) or omega(e,s*) != 0 at ({}, {})", show(s), show(e)));
                }
            }
            let ses = invsemi::mul(a, &invsemi::mul(a, s, e)?, &sst)?;
            if !ses.is_zero() && omega(a, t, &ses, s)? != se {
                report.violations.push(format!("omega(s,e) != omega(ses*,s) at ({}, {})", show(s), show(e)));
            }
        }
    }
    for r in rs {
        for s in ss.iter().filter(|s| comparable(r, s)) {
            let rsp = invsemi::mul(a, r, s)?;
            let w_rs = omega(a, t, r, s)?;
            for u in ts.iter().filter(|u| comparable(s, u) && comparable(&rsp, u)) {
                let su = invsemi::mul(a, s, u)?;
                if su.is_zero() {
                    continue;
                }
                let rsu = invsemi::mul(a, &rsp, u)?;
                if rsu.is_zero() {
                    continue;
                }
                report.triples_checked += 1;
                let lhs = omega(a, t, s, u)? + omega(a, t, r, &su)?;
                let rhs = w_rs + omega(a, t, &rsp, u)?;
                if lhs != rhs {
                    report.violations.push(format!(
                        "cocycle identity fails at ({}, {}, {}): {} != {}",
                        show(r),
                        show(s),
                        show(u),
                        lhs,
                        rhs
                    ));
                }
            }
        }
    }
    Ok(report)
}
