//! Seeded property suites over the whole pipeline.
//!
//! Every suite runs at a fixed `(q, ℓ)` with its own RNG stream derived from
//! the seed, so results do not depend on suite order or thread count.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions;
use crate::error::Result;
use crate::families::{self, BhbParams};
use crate::field::{Elem, FieldCtx, TowerParams};
use crate::isotopy::{self, IsotopismTriple, Verdict};
use crate::linpoly::LinearizedMap;
use crate::presemifield::{from_planar_do, BilinearForm, DoPolynomial, Presemifield};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Parameter sets `(p, h, ℓ)` of the standard run.
pub const STANDARD_PARAMS: [(u32, u32, u32); 3] = [(3, 1, 3), (5, 1, 3), (3, 1, 5)];

/// Fields above this order only run the `p^{2n}` planarity scans on request.
const SCAN_ORDER_LIMIT: u32 = 15625;

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    /// skip parameter sets whose field needs more bits than this
    pub max_field_bits: Option<u32>,
    /// run the definitional `p^{2n}` checks everywhere
    pub slow_oracles: bool,
    /// random pairs for the conjugation identities
    pub pairs: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: DEFAULT_SEED,
            max_field_bits: None,
            slow_oracles: false,
            pairs: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub q: u64,
    pub ell: u32,
    pub passed: bool,
    pub checks: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

const SUITES: [&str; 6] = ["conjugation", "knuth", "transforms", "planar_do", "spread_set", "families"];

/// Bits needed to index `F_{p^n}`.
pub fn field_bits(p: u32, n: u32) -> u32 {
    let order = (p as u64).pow(n);
    64 - (order - 1).leading_zeros()
}

pub fn run(cfg: &SelftestConfig) -> SelftestReport {
    let mut suites = Vec::new();
    for &(p, h, ell) in &STANDARD_PARAMS {
        let q = (p as u64).pow(h);
        let bits = field_bits(p, 2 * h * ell);
        if let Some(max) = cfg.max_field_bits.filter(|&m| bits > m) {
            for name in SUITES {
                suites.push(SuiteResult {
                    name,
                    q,
                    ell,
                    passed: true,
                    checks: 0,
                    failures: Vec::new(),
                    skipped: Some(format!("field needs {bits} bits, limit {max}")),
                });
            }
            continue;
        }
        let ctx = match FieldCtx::new(TowerParams::new(p, h, ell), None) {
            Ok(c) => Arc::new(c),
            Err(e) => {
                for name in SUITES {
                    let mut s = Suite::new(name);
                    s.fail(format!("field construction: {e}"));
                    suites.push(s.finish(q, ell));
                }
                continue;
            }
        };
        for (k, name) in SUITES.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(((p as u64) << 40) | ((ell as u64) << 20) | k as u64);
            let mut s = Suite::new(name);
            let outcome = match *name {
                "conjugation" => conjugation(&ctx, &mut rng, cfg, &mut s),
                "knuth" => knuth(&ctx, &mut rng, &mut s),
                "transforms" => transforms(&ctx, &mut s),
                "planar_do" => planar_do(&ctx, &mut rng, cfg, &mut s),
                "spread_set" => spread_set(&ctx, &mut rng, &mut s),
                _ => family_gates(&ctx, &mut s),
            };
            if let Err(e) = outcome {
                s.fail(format!("error: {e}"));
            }
            suites.push(s.finish(q, ell));
        }
    }
    SelftestReport {
        seed: cfg.seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    }
}

struct Suite {
    name: &'static str,
    checks: u64,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        // the first few are enough to debug, and keep reports small
        if self.failures.len() < 10 {
            self.failures.push(msg);
        }
        if self.failures.len() == 10 {
            self.failures.push("further failures omitted".into());
        }
    }

    fn finish(self, q: u64, ell: u32) -> SuiteResult {
        SuiteResult {
            name: self.name,
            q,
            ell,
            passed: self.failures.is_empty(),
            checks: self.checks,
            failures: self.failures,
            skipped: None,
        }
    }
}

fn random_elem(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> Elem {
    ctx.elem(rng.gen_range(0..ctx.order()))
}

fn random_nonzero(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> Elem {
    ctx.elem(rng.gen_range(1..ctx.order()))
}

fn random_map(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> LinearizedMap {
    LinearizedMap::from_coeffs((0..ctx.n()).map(|_| random_elem(ctx, rng)).collect())
}

/// Absolute trace, computed as a sum of conjugates.
fn trace(ctx: &FieldCtx, a: Elem) -> Elem {
    (0..ctx.n()).fold(Elem::ZERO, |acc, k| ctx.add(acc, ctx.frob(a, k)))
}

/// `φ̄` is the adjoint of `φ` for `(x, y) ↦ Tr(xy)`, `conj` reverses
/// composition and commutes with inversion.
fn conjugation(ctx: &FieldCtx, rng: &mut ChaCha8Rng, cfg: &SelftestConfig, s: &mut Suite) -> Result<()> {
    for i in 0..cfg.pairs {
        let f = random_map(ctx, rng);
        let g = random_map(ctx, rng);
        let fb = f.conjugate(ctx);
        let gb = g.conjugate(ctx);
        s.check(f.compose(ctx, &g).conjugate(ctx) == gb.compose(ctx, &fb), || {
            format!("pair {i}: conj(f o g) != conj(g) o conj(f)")
        });
        s.check(fb.conjugate(ctx) == f, || format!("pair {i}: conj is not an involution"));
        let (x, y) = (random_elem(ctx, rng), random_elem(ctx, rng));
        s.check(
            trace(ctx, ctx.mul(x, f.eval(ctx, y))) == trace(ctx, ctx.mul(fb.eval(ctx, x), y)),
            || format!("pair {i}: Tr(x f(y)) != Tr(conj(f)(x) y)"),
        );
        if f.is_invertible(ctx) {
            let fi = f.invert(ctx)?;
            s.check(f.compose(ctx, &fi) == LinearizedMap::identity(ctx.n()), || {
                format!("pair {i}: f o f^-1 != id")
            });
            s.check(fi.conjugate(ctx) == fb.invert(ctx)?, || format!("pair {i}: conj(f^-1) != conj(f)^-1"));
        } else {
            s.check(!fb.is_invertible(ctx), || format!("pair {i}: f singular but conj(f) invertible"));
        }
    }
    Ok(())
}

/// The families and their `t*` versions: one commutative, one not.
fn test_presemifields(ctx: &Arc<FieldCtx>) -> Result<Vec<Presemifield>> {
    let p = families::lmptb(ctx)?;
    let beta = constructions::choose_beta_bar(ctx)?;
    let b = families::bhb(ctx, BhbParams { d: 2, beta })?;
    let pt = p.ts()?;
    let bt = b.ts()?;
    Ok(vec![p, b, pt, bt])
}

fn knuth(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng, s: &mut Suite) -> Result<()> {
    for sf in test_presemifields(ctx)? {
        let label = sf.label().to_string();
        s.check(sf.dual().dual().same_multiplication(&sf), || format!("{label}: (S*)* != S"));
        let t = sf.transpose()?;
        s.check(t.transpose()?.same_multiplication(&sf), || format!("{label}: (S^t)^t != S"));
        s.check(sf.ts()?.same_multiplication(&t.dual()), || format!("{label}: S^t* != (S^t)^*"));
        for _ in 0..50 {
            let (x, y, z) = (random_elem(ctx, rng), random_elem(ctx, rng), random_elem(ctx, rng));
            s.check(sf.dual().multiply(x, y) == sf.multiply(y, x), || format!("{label}: dual product"));
            // Tr(z (x•y)) = Tr(x (z •^t y))
            s.check(
                trace(ctx, ctx.mul(z, sf.multiply(x, y))) == trace(ctx, ctx.mul(x, t.multiply(z, y))),
                || format!("{label}: transpose product fails the trace identity"),
            );
        }
    }
    Ok(())
}

/// The three transforms applied to the explicit isotopisms re-verify, and a
/// broken triple stays broken under every transform.
fn transforms(ctx: &Arc<FieldCtx>, s: &mut Suite) -> Result<()> {
    let (t45, cor) = constructions::cor46_isotopism(ctx)?;
    let p = families::lmptb(ctx)?;
    let b = families::bhb(ctx, BhbParams { d: 2, beta: t45.beta_bar })?;
    let two = ctx.from_int(2);
    let mut broken = cor.clone();
    broken.l = broken.l.scale(ctx, two);

    for (good, t) in [(true, &cor), (false, &broken)] {
        let tag = if good { "triple" } else { "broken triple" };
        let expect = |v: &Verdict| v.is_verified() == good;
        let v = isotopy::verify_isotopism(&p, &b, t)?;
        s.check(expect(&v), || format!("{tag}: P -> B gave {}", v.as_str()));
        let d = isotopy::dual_transform(t);
        let v = isotopy::verify_isotopism(&p.dual(), &b.dual(), &d)?;
        s.check(expect(&v), || format!("{tag}: dual transform gave {}", v.as_str()));
        let tr = isotopy::transpose_transform(ctx, t)?;
        let v = isotopy::verify_isotopism(&p.transpose()?, &b.transpose()?, &tr)?;
        s.check(expect(&v), || format!("{tag}: transpose transform gave {}", v.as_str()));
        let ts = isotopy::ts_transform(ctx, t)?;
        let v = isotopy::verify_isotopism(&p.ts()?, &b.ts()?, &ts)?;
        s.check(expect(&v), || format!("{tag}: t* transform gave {}", v.as_str()));
        let back = isotopy::ts_transform_inverse(ctx, &ts)?;
        s.check((back.m == t.m) && (back.n == t.n) && (back.l == t.l), || {
            format!("{tag}: t* transform does not invert")
        });
    }
    // the construction's own t* triple maps back onto the verified one
    let back = isotopy::ts_transform_inverse(ctx, &t45.triple)?;
    s.check(back.m == cor.m && back.n == cor.n && back.l == cor.l, || {
        "t* triple does not map onto the commutative triple".into()
    });
    let inv = cor.inverse(ctx)?;
    let v = isotopy::verify_isotopism(&b, &p, &inv)?;
    s.check(v.is_verified(), || format!("inverse triple gave {}", v.as_str()));
    let round = cor.then(ctx, &inv);
    s.check(same_maps(&round, &IsotopismTriple::identity(ctx.n())), || {
        "triple followed by its inverse is not the identity".into()
    });
    Ok(())
}

fn same_maps(a: &IsotopismTriple, b: &IsotopismTriple) -> bool {
    a.m == b.m && a.n == b.n && a.l == b.l
}

fn random_do(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> Result<DoPolynomial> {
    let n = ctx.n();
    let mut form = BilinearForm::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        form.add_term(ctx, random_nonzero(ctx, rng), i, j);
    }
    DoPolynomial::new(ctx.clone(), form)
}

fn planar_do(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng, cfg: &SelftestConfig, s: &mut Suite) -> Result<()> {
    let scan = cfg.slow_oracles || ctx.order() <= SCAN_ORDER_LIMIT;
    let half = ctx.inv(ctx.from_int(2))?;
    for sf in test_presemifields(ctx)?.into_iter().take(2) {
        let label = sf.label().to_string();
        let f = sf.to_planar_do()?;
        s.check(f.is_planar(), || format!("{label}: f = x*x/2 not planar"));
        if scan {
            s.check(f.is_planar_by_scan(), || format!("{label}: planarity scan disagrees"));
        }
        s.check(from_planar_do(&f, true)?.same_multiplication(&sf), || {
            format!("{label}: S_f != S")
        });
        for _ in 0..100 {
            let x = random_elem(ctx, rng);
            s.check(f.eval(x) == ctx.mul(half, sf.multiply(x, x)), || {
                format!("{label}: f(x) != (x*x)/2")
            });
        }
    }
    let non_comm = test_presemifields(ctx)?.pop().expect("four presemifields");
    let err = non_comm.to_planar_do().err();
    s.check(err == Some(crate::Error::NotCommutative), || {
        "non-commutative t* version turned into a DO polynomial".into()
    });
    if ctx.order() <= 729 || cfg.slow_oracles {
        for k in 0..20 {
            let f = random_do(ctx, rng)?;
            let fast = f.is_planar();
            s.check(fast == f.is_planar_by_scan(), || format!("random DO {k}: planarity tests disagree"));
            let round = f.to_presemifield_unchecked().to_planar_do();
            s.check(round.map(|g| g.coeff() == f.coeff()).unwrap_or(false), || {
                format!("random DO {k}: round trip changed the coefficients")
            });
        }
        // x², always planar in odd characteristic
        let sq = DoPolynomial::monomial(ctx.clone(), 0, 0)?;
        s.check(sq.is_planar() && sq.is_planar_by_scan(), || "x^2 not planar".into());
    }
    Ok(())
}

fn spread_set(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng, s: &mut Suite) -> Result<()> {
    for sf in test_presemifields(ctx)? {
        let label = sf.label().to_string();
        let set = sf.spread_set();
        s.check(set.distinct_count() == ctx.order() as usize, || format!("{label}: spread maps collide"));
        for _ in 0..100 {
            let (a, b) = (random_elem(ctx, rng), random_elem(ctx, rng));
            let c = ctx.from_int(rng.gen_range(0..ctx.p() as i64));
            let lhs = sf.spread_map(ctx.add(ctx.mul(c, a), b));
            let rhs = sf.spread_map(a).scale(ctx, c).add(ctx, &sf.spread_map(b));
            s.check(lhs == rhs, || format!("{label}: phi_(ca+b) != c phi_a + phi_b"));
            s.check(set.lookup(&sf.spread_map(a)) == Some(a), || format!("{label}: lookup misses"));
            let x = random_elem(ctx, rng);
            s.check(set.map(a).eval(ctx, x) == sf.multiply(x, a), || format!("{label}: phi_a(x) != x*a"));
        }
        let nonzero = random_nonzero(ctx, rng);
        s.check(sf.spread_map(nonzero).is_invertible(ctx), || format!("{label}: singular spread map"));
    }
    Ok(())
}

fn family_gates(ctx: &Arc<FieldCtx>, s: &mut Suite) -> Result<()> {
    let p = families::lmptb(ctx)?;
    let beta = constructions::choose_beta_bar(ctx)?;
    let params = BhbParams { d: 2, beta };
    let b = families::bhb(ctx, params)?;
    for sf in [&p, &b] {
        let label = sf.label().to_string();
        s.check(sf.is_presemifield(), || format!("{label}: zero divisor"));
        s.check(sf.is_commutative(), || format!("{label}: not commutative"));
    }
    let eta = ctx.find_omega()?;
    s.check(families::lmptb_symplectic(ctx, eta)?.same_multiplication(&p.ts()?), || {
        "closed-form symplectic P differs from P^t*".into()
    });
    s.check(families::lmptb_symplectic_via_f(ctx)?.same_multiplication(&p.ts()?), || {
        "symplectic P through f differs from P^t*".into()
    });
    s.check(families::bhb_symplectic(ctx, params)?.same_multiplication(&b.ts()?), || {
        "closed-form symplectic B differs from B^t*".into()
    });
    s.check(families::bhb_transpose_formula(ctx, params)?.same_multiplication(&b.transpose()?), || {
        "closed-form transpose of B differs from B^t".into()
    });
    s.check(families::check_condition5(ctx, 2)?, || "condition on (ell, 2) fails".into());
    s.check(families::check_condition4(ctx, beta, 2)?, || "condition on beta fails".into());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits() {
        assert_eq!(field_bits(3, 6), 10);
        assert_eq!(field_bits(5, 6), 14);
        assert_eq!(field_bits(3, 10), 16);
        assert_eq!(field_bits(3, 2), 4);
    }

    #[test]
    fn oversize_suites_are_skipped() {
        let cfg = SelftestConfig {
            max_field_bits: Some(8),
            ..Default::default()
        };
        let r = run(&cfg);
        assert!(r.passed);
        assert_eq!(r.suites.len(), 18);
        assert!(r.suites.iter().all(|s| s.skipped.is_some() && s.checks == 0));
    }

    #[test]
    fn small_run_passes_and_repeats() {
        let cfg = SelftestConfig {
            max_field_bits: Some(10),
            pairs: 100,
            ..Default::default()
        };
        let a = run(&cfg);
        let failures: Vec<_> = a.suites.iter().flat_map(|s| s.failures.clone()).collect();
        assert!(a.passed, "{failures:?}");
        assert_eq!(a.suites.iter().filter(|s| s.skipped.is_none()).count(), 6);
        assert_eq!(a, run(&cfg));
    }
}
