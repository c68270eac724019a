//! Algebraic laws: the inverse semigroup, the germ groupoid, phases and
//! the twisted cocycle.

mod common;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use selfsim::germ::{classify, germ_compose, germ_eq, germ_inv, Germ, GermClass};
use selfsim::invsemi::{self, conj_idem, fixed_by, leq, length, mul, star, SemigroupElement, Zero};
use selfsim::twist::{extend_bowtie, omega, validate_twist, verify_omega_cocycle, verify_omega_on, Phase, Twist, TwistSpec};
use selfsim::{BoundaryPoint, Path, SelfSimilarAction, System};

fn m(a: &SelfSimilarAction, s: &SemigroupElement, t: &SemigroupElement) -> SemigroupElement {
    mul(a, s, t).unwrap()
}

fn st(a: &SelfSimilarAction, s: &SemigroupElement) -> SemigroupElement {
    star(a, s).unwrap()
}

fn with_zero(mut v: Vec<SemigroupElement>) -> Vec<SemigroupElement> {
    v.push(Zero);
    v
}

fn random_bundles(seed: u64, n: usize) -> Vec<System> {
    let mut r = rng(seed);
    (0..n).map(|_| System::from_file(random_cyclic_bundle(&mut r)).unwrap()).collect()
}

fn explicit_systems(seed: u64, n: usize) -> Vec<(String, System)> {
    let mut out: Vec<(String, System)> = explicit_fixtures().into_iter().map(|(n, s)| (n.to_string(), s)).collect();
    out.extend(random_bundles(seed, n).into_iter().enumerate().map(|(i, s)| (format!("random #{i}"), s)));
    out
}

// ---------- inverse semigroup ----------

#[test]
fn associativity_is_exhaustive_at_bound_one() {
    for (label, s) in explicit_systems(1, 10) {
        let a = &s.action;
        let elems = with_zero(invsemi::enumerate(a, 1));
        for x in &elems {
            for y in &elems {
                let xy = m(a, x, y);
                for z in &elems {
                    assert_eq!(m(a, &xy, z), m(a, x, &m(a, y, z)), "{label}");
                }
            }
        }
    }
}

#[test]
fn regularity_and_star_at_bound_two() {
    for (label, s) in explicit_systems(2, 10) {
        let a = &s.action;
        let elems = with_zero(invsemi::enumerate(a, 2));
        for x in &elems {
            let xs = st(a, x);
            assert_eq!(m(a, &m(a, x, &xs), x), *x, "{label}: {}", x.display(a));
            assert_eq!(m(a, &m(a, &xs, x), &xs), xs, "{label}");
            assert_eq!(st(a, &xs), *x, "{label}");
            assert!(m(a, &xs, x).is_idempotent(a), "{label}");
        }
    }
}

#[test]
fn idempotents_commute_at_bound_three() {
    for (label, s) in explicit_systems(3, 6) {
        let a = &s.action;
        let idems: Vec<SemigroupElement> =
            a.graph.all_paths(3).iter().map(|p| SemigroupElement::idempotent(a, p)).collect();
        for e in &idems {
            assert_eq!(m(a, e, e), *e, "{label}");
            for f in &idems {
                assert_eq!(m(a, e, f), m(a, f, e), "{label}: {} {}", e.display(a), f.display(a));
            }
        }
    }
}

fn random_triple(a: &SelfSimilarAction, paths: &[Path], r: &mut StdRng) -> SemigroupElement {
    let g = r.gen_range(0..a.model.len());
    let pick = |v: usize, r: &mut StdRng| -> Path {
        let c: Vec<&Path> = paths.iter().filter(|p| a.graph.path_sr(p) == v).collect();
        (*c.choose(r).unwrap()).clone()
    };
    let alpha = pick(a.model.rng(g), r);
    let beta = pick(a.model.src(g), r);
    SemigroupElement::triple(a, alpha, g, beta).unwrap()
}

#[test]
fn semigroup_laws_randomized_at_bound_five() {
    let mut r = rng(5);
    for (label, s) in explicit_systems(5, 20) {
        let a = &s.action;
        let paths = a.graph.all_paths(5);
        for _ in 0..300 {
            let (x, y, z) = (random_triple(a, &paths, &mut r), random_triple(a, &paths, &mut r), random_triple(a, &paths, &mut r));
            let xy = m(a, &x, &y);
            assert_eq!(m(a, &xy, &z), m(a, &x, &m(a, &y, &z)), "{label}");
            assert_eq!(st(a, &xy), m(a, &st(a, &y), &st(a, &x)), "{label}");
            assert_eq!(m(a, &m(a, &x, &st(a, &x)), &x), x, "{label}");
            if !xy.is_zero() {
                assert_eq!(length(&xy).unwrap(), length(&x).unwrap() + length(&y).unwrap(), "{label}");
            }
        }
    }
}

#[test]
fn natural_order_matches_definition() {
    for (label, s) in explicit_systems(6, 8) {
        let a = &s.action;
        let elems = with_zero(invsemi::enumerate(a, 2));
        for x in &elems {
            let xsx = m(a, &st(a, x), x);
            for t in &elems {
                assert_eq!(leq(a, x, t).unwrap(), *x == m(a, t, &xsx), "{label}: {} <= {}", x.display(a), t.display(a));
            }
        }
    }
}

#[test]
fn conj_idem_is_a_product() {
    for (label, s) in explicit_systems(7, 8) {
        let a = &s.action;
        let paths = a.graph.all_paths(2);
        for t in with_zero(invsemi::enumerate(a, 2)) {
            for g in &paths {
                let f = SemigroupElement::idempotent(a, g);
                assert_eq!(conj_idem(a, &t, g).unwrap(), m(a, &m(a, &t, &f), &st(a, &t)), "{label}");
            }
        }
    }
}

/// Whether `t f_μ t* f_μ ≠ 0` for every `μ ≥ γ` with `|μ| ≤ |γ| + depth`.
fn brute_fixed_by(a: &SelfSimilarAction, t: &SemigroupElement, gamma: &Path, depth: usize) -> bool {
    a.graph.extensions(gamma, depth).iter().all(|mu| {
        let f = SemigroupElement::idempotent(a, mu);
        !m(a, &m(a, &conj_idem(a, t, mu).unwrap(), &f), &SemigroupElement::idempotent(a, mu)).is_zero()
    })
}

#[test]
fn fixed_by_matches_brute_extensions() {
    for (label, s) in explicit_systems(8, 12) {
        let a = &s.action;
        let ne = a.graph.num_edges().max(2);
        let depth = (3..=2 * a.model.len() + 4).take_while(|&d| ne.pow(d as u32) <= 4096).last().unwrap_or(3);
        let paths = a.graph.all_paths(1);
        for t in invsemi::enumerate(a, 2) {
            for g in &paths {
                let fast = fixed_by(a, &t, g).unwrap();
                let brute = brute_fixed_by(a, &t, g, depth);
                assert_eq!(fast, brute, "{label}: {} fixes {}", t.display(a), a.graph.path_str(g));
            }
        }
    }
}

#[test]
fn behavioral_products_require_an_explicit_model() {
    let s = fixture("not_exel_pardo");
    let a = &s.action;
    let x = SemigroupElement::from_element(a, 0);
    assert!(matches!(mul(a, &x, &x), Err(selfsim::Error::RequiresExplicit)));
}

// ---------- germ groupoid ----------

fn random_germ(a: &SelfSimilarAction, mu: &BoundaryPoint, r: &mut StdRng) -> Germ {
    let paths = a.graph.all_paths(2);
    let k = r.gen_range(0..=mu.finite_len().unwrap_or(usize::MAX).min(2));
    let beta = mu.take(k);
    let xi = mu.drop(&a.graph, k);
    let gs: Vec<usize> = (0..a.model.len()).filter(|&g| a.model.src(g) == xi.base).collect();
    let g = *gs.choose(r).unwrap();
    let alphas: Vec<&Path> = paths.iter().filter(|p| a.graph.path_sr(p) == a.model.rng(g)).collect();
    let alpha = (*alphas.choose(r).unwrap()).clone();
    Germ::new(a, alpha, g, beta, xi).unwrap()
}

/// Equality of germs by walking both representatives along the source.
fn brute_germ_eq(a: &SelfSimilarAction, x: &Germ, y: &Germ) -> bool {
    let p = x.source(a);
    if p != y.source(a) {
        return false;
    }
    let top = x.beta.len().max(y.beta.len()) + p.pre() + p.per().max(1) * (a.model.len().pow(2) + 2);
    let stop = p.finite_len().map_or(top, |l| l.min(top));
    (x.beta.len().max(y.beta.len())..=stop).any(|n| {
        let lead = p.take(n);
        let at = |z: &Germ| {
            let rest = lead.strip_prefix(&z.beta, &a.graph).unwrap();
            let (img, h) = brute_act(a, z.g, &rest).unwrap();
            let mut out = z.alpha.edges.clone();
            out.extend(img);
            (z.alpha.base, out, h)
        };
        at(x) == at(y)
    })
}

#[test]
fn germ_groupoid_laws() {
    let mut r = rng(0x9e);
    for (label, s) in explicit_systems(9, 20) {
        let a = &s.action;
        for _ in 0..25 {
            let mu = random_point(a, &mut r);
            let y = random_germ(a, &mu, &mut r);
            let x = random_germ(a, &y.range(a).unwrap(), &mut r);
            let eq = |p: &Germ, q: &Germ| germ_eq(a, p, q).unwrap();

            let yi = germ_inv(a, &y).unwrap();
            assert!(eq(&germ_inv(a, &yi).unwrap(), &y), "{label}");
            assert!(eq(&germ_compose(a, &y, &yi).unwrap(), &Germ::unit(a, &y.range(a).unwrap())), "{label}");
            assert!(eq(&germ_compose(a, &yi, &y).unwrap(), &Germ::unit(a, &y.source(a))), "{label}");

            let xy = germ_compose(a, &x, &y).unwrap();
            assert_eq!(xy.source(a), y.source(a), "{label}");
            assert_eq!(xy.range(a).unwrap(), x.range(a).unwrap(), "{label}");

            let w = random_germ(a, &x.range(a).unwrap(), &mut r);
            let left = germ_compose(a, &germ_compose(a, &w, &x).unwrap(), &y).unwrap();
            let right = germ_compose(a, &w, &xy).unwrap();
            assert!(eq(&left, &right), "{label}");

            let unit = Germ::unit(a, &y.source(a));
            let is_unit = classify(a, &y).unwrap() == GermClass::Unit;
            assert_eq!(is_unit, eq(&y, &unit), "{label}: {}", y.display(a));
        }
    }
}

#[test]
fn germ_equality_matches_brute_force() {
    let mut r = rng(0xee);
    for (label, s) in explicit_systems(10, 20) {
        let a = &s.action;
        for _ in 0..40 {
            let mu = random_point(a, &mut r);
            let x = random_germ(a, &mu, &mut r);
            let y = random_germ(a, &mu, &mut r);
            assert_eq!(germ_eq(a, &x, &y).unwrap(), brute_germ_eq(a, &x, &y), "{label}: {} vs {}", x.display(a), y.display(a));
            assert!(germ_eq(a, &x, &x).unwrap());
        }
    }
}

// ---------- phases ----------

fn phase() -> impl Strategy<Value = Phase> {
    (-50i64..50, 1i64..30).prop_map(|(p, q)| Phase::new(p, q).unwrap())
}

proptest! {
    #[test]
    fn phases_form_an_abelian_group(x in phase(), y in phase(), z in phase()) {
        prop_assert_eq!((x + y) + z, x + (y + z));
        prop_assert_eq!(x + y, y + x);
        prop_assert_eq!(x + Phase::zero(), x);
        prop_assert_eq!(x + x.conj(), Phase::zero());
        prop_assert_eq!(x - y, x + (-y));
        prop_assert!(x.angle() >= 0.into() && x.angle() < 1.into());
    }

    #[test]
    fn phase_text_round_trips(x in phase()) {
        prop_assert_eq!(x.to_string().parse::<Phase>().unwrap(), x);
        let (c, s) = x.to_complex();
        prop_assert!((c * c + s * s - 1.0).abs() < 1e-9);
    }
}

// ---------- twists ----------

#[test]
fn fixture_twists_validate() {
    for (label, s) in explicit_fixtures() {
        if let Some(t) = &s.twist {
            assert!(validate_twist(&s.action, t).unwrap().is_ok(), "{label}");
        }
        let trivial = Twist::trivial(&s.action);
        assert!(validate_twist(&s.action, &trivial).unwrap().is_ok(), "{label}");
    }
}

/// The compatibility identity checked directly from its definition.
fn brute_twist_ok(a: &SelfSimilarAction, t: &Twist) -> bool {
    let md = &a.model;
    let n = md.len();
    for g in 0..n {
        for h in (0..n).filter(|&h| md.src(g) == md.rng(h)) {
            let gh = md.mul(g, h).unwrap();
            for &e in a.graph.incoming(md.src(h)) {
                let he = a.edge_act(h, e);
                let lhs = t.sigma_bowtie(h, e) - t.sigma_bowtie(gh, e) + t.sigma_bowtie(g, he);
                let rhs = t.sigma_g(g, h) - t.sigma_g(a.edge_res(g, he), a.edge_res(h, e));
                if lhs != rhs {
                    return false;
                }
            }
            for k in (0..n).filter(|&k| md.src(h) == md.rng(k)) {
                let hk = md.mul(h, k).unwrap();
                if t.sigma_g(g, h) + t.sigma_g(gh, k) != t.sigma_g(h, k) + t.sigma_g(g, hk) {
                    return false;
                }
            }
        }
        if md.is_unit(g) {
            if a.graph.incoming(md.src(g)).iter().any(|&e| !t.sigma_bowtie(g, e).is_zero()) {
                return false;
            }
            for h in 0..n {
                if (md.src(g) == md.rng(h) && !t.sigma_g(g, h).is_zero())
                    || (md.src(h) == md.rng(g) && !t.sigma_g(h, g).is_zero())
                {
                    return false;
                }
            }
        }
    }
    true
}

fn random_twist(a: &SelfSimilarAction, r: &mut StdRng) -> Twist {
    let md = &a.model;
    let half = Phase::new(1, 2).unwrap();
    let mut spec = TwistSpec::default();
    for g in (0..md.len()).filter(|&g| !md.is_unit(g)) {
        for &e in a.graph.incoming(md.src(g)) {
            if r.gen_bool(0.3) {
                spec.sigma_bowtie.push((md.name(g).into(), a.graph.edge_name(e).into(), half));
            }
        }
    }
    Twist::from_spec(a, &spec).unwrap()
}

#[test]
fn twist_validation_matches_definition() {
    let mut r = rng(0x7a);
    let mut valid = 0;
    for (label, s) in explicit_systems(11, 30) {
        let a = &s.action;
        for _ in 0..10 {
            let t = random_twist(a, &mut r);
            let ok = validate_twist(a, &t).unwrap().is_ok();
            assert_eq!(ok, brute_twist_ok(a, &t), "{label}: {:?}", t.to_spec(a));
            valid += ok as usize;
        }
    }
    assert!(valid > 0);
}

#[test]
fn bowtie_extension_is_additive() {
    for (label, s) in explicit_fixtures() {
        let a = &s.action;
        let t = s.twist.clone().unwrap_or_else(|| Twist::trivial(a));
        for mu in a.graph.all_paths(2) {
            for nu in a.graph.all_paths(2).into_iter().filter(|nu| nu.base == a.graph.path_sr(&mu)) {
                let mn = a.graph.concat(&mu, &nu).unwrap();
                for g in (0..a.model.len()).filter(|&g| a.model.src(g) == mu.base) {
                    let h = a.restrict_path(g, &mu).unwrap();
                    assert_eq!(
                        extend_bowtie(a, &t, g, &mn).unwrap(),
                        extend_bowtie(a, &t, g, &mu).unwrap() + extend_bowtie(a, &t, h, &nu).unwrap(),
                        "{label}"
                    );
                }
            }
        }
    }
}

#[test]
fn omega_is_a_cocycle_on_the_twisted_fixture() {
    let s = fixture("twisted_three_spoke");
    let t = s.twist.clone().unwrap();
    let rep = verify_omega_cocycle(&s.action, &t, 3).unwrap();
    assert!(rep.passed(), "{:?}", rep.violations);
    assert!(rep.triples_checked > 0);
}

#[test]
fn omega_is_a_cocycle_for_valid_random_twists() {
    let mut r = rng(0x0c);
    let mut checked = 0;
    for (label, s) in explicit_systems(12, 30) {
        let a = &s.action;
        let t = random_twist(a, &mut r);
        if !validate_twist(a, &t).unwrap().is_ok() {
            continue;
        }
        let rep = verify_omega_cocycle(a, &t, 1).unwrap();
        assert!(rep.passed(), "{label}: {:?}", rep.violations);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn omega_sampled_at_bound_five() {
    let mut r = rng(0x55);
    for (label, s) in explicit_fixtures() {
        let a = &s.action;
        let t = s.twist.clone().unwrap_or_else(|| Twist::trivial(a));
        let paths = a.graph.all_paths(5);
        let sample = |r: &mut StdRng| -> Vec<SemigroupElement> { (0..40).map(|_| random_triple(a, &paths, r)).collect() };
        let (rs, ss, ts) = (sample(&mut r), sample(&mut r), sample(&mut r));
        let rep = verify_omega_on(a, &t, &rs, &ss, &ts, 5).unwrap();
        assert!(rep.passed(), "{label}: {:?}", rep.violations);
    }
}

#[test]
fn omega_rejects_zero_products() {
    let s = fixture("four_loop_z2");
    let a = &s.action;
    let t = Twist::trivial(a);
    let x = SemigroupElement::triple(a, path(a, &["e"]), el(a, "0"), path(a, &["e"])).unwrap();
    let y = SemigroupElement::triple(a, path(a, &["f"]), el(a, "0"), path(a, &["f"])).unwrap();
    assert!(omega(a, &t, &x, &y).is_err());
}

#[test]
fn conj_idem_by_the_inverse_undoes_the_first_case() {
    for (label, s) in explicit_systems(13, 8) {
        let a = &s.action;
        let paths = a.graph.all_paths(3);
        for t in invsemi::enumerate(a, 1) {
            let SemigroupElement::Triple { beta, .. } = &t else { unreachable!() };
            for gamma in paths.iter().filter(|g| beta.is_prefix_of(g)) {
                let SemigroupElement::Triple { alpha: img, .. } = conj_idem(a, &t, gamma).unwrap() else {
                    panic!("{label}: first case is never zero")
                };
                assert_eq!(conj_idem(a, &st(a, &t), &img).unwrap(), SemigroupElement::idempotent(a, gamma), "{label}");
            }
        }
    }
}
