//! The two families of commutative presemifields on `F_{q^{2ℓ}}`:
//!
//! - `B̄(q,ℓ,d,β)`:
//!   `x ⋆ y = xy^{q^ℓ} + x^{q^ℓ}y + [β(xy^{q^d} + x^{q^d}y) + β^{q^ℓ}(xy^{q^d} + x^{q^d}y)^{q^ℓ}]ω`
//! - `P(q,ℓ)`, `ℓ = 2k+1`:
//!   `x ∗ y = ½(xy + x^{q^ℓ}y^{q^ℓ}) + ¼G(xy^{q²} + x^{q²}y)`
//!
//! together with their symplectic versions written in the coordinates
//! `y = A + Bω` (resp. `y = A + (B^{q²} + B)η`). Every multiplication is
//! assembled symbolically as a bilinear p-polynomial; nothing is fitted from
//! sampled products.

use std::sync::Arc;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linpoly::LinearizedMap;
use crate::presemifield::{BilinearForm, Presemifield};

/// `B̄` parameters beyond the field: the exponent `d` and the nonsquare `β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BhbParams {
    pub d: u32,
    pub beta: Elem,
}

/// Lower bounds of the two sums in `G`.
///
/// As displayed, both sums start at 1. The symplectic multiplication, whose
/// `B` is built from `φ⁻¹`, carries the terms of both sums from index 0. Only
/// `FromZero` makes `P^{t*}` coincide with that multiplication; `Displayed`
/// gives a presemifield with the same `t*` spread set under a relabelling of
/// `y`, and `OddFromZero` is not a presemifield at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GSumBounds {
    Displayed,
    OddFromZero,
    FromZero,
}

/// The bounds used by [`lmptb`].
pub const G_SUM_BOUNDS: GSumBounds = GSumBounds::FromZero;

fn sign(ctx: &FieldCtx, e: i64) -> Elem {
    if e.rem_euclid(2) == 0 {
        Elem::ONE
    } else {
        ctx.from_int(-1)
    }
}

fn frob_q_map(ctx: &FieldCtx, k: i64) -> LinearizedMap {
    LinearizedMap::frobenius(ctx.n(), ctx.qexp(k))
}

fn half(ctx: &FieldCtx) -> Elem {
    ctx.inv(ctx.from_int(2)).expect("p is odd")
}

fn require_odd_ell(ctx: &FieldCtx) -> Result<u32> {
    let ell = ctx.ell();
    if ell % 2 == 0 || ell < 3 {
        return Err(Error::InvalidParams(format!("ell = {ell} must be odd and > 1")));
    }
    Ok((ell - 1) / 2)
}

// ---------------------------------------------------------------------------
// Conditions on d and β

/// First `a ≠ 0` (by index) with `a + a^{q^ℓ} = a + a^{q^d} = 0`.
pub fn condition5_witness(ctx: &FieldCtx, d: u32) -> Option<Elem> {
    let ell = ctx.ell() as i64;
    ctx.elements().skip(1).find(|&a| {
        let na = ctx.neg(a);
        ctx.frob_q(a, ell) == na && ctx.frob_q(a, d as i64) == na
    })
}

/// No nonzero `a` solves both equations. Computed by exhaustive scan and,
/// when `gcd(ℓ, d) = 1`, also by the parity of `ℓ + d`; a disagreement is
/// reported as a verification failure.
pub fn check_condition5(ctx: &FieldCtx, d: u32) -> Result<bool> {
    let exhaustive = condition5_witness(ctx, d).is_none();
    let ell = ctx.ell();
    if arith::gcd(ell as u128, d as u128) == 1 {
        let parity = (ell + d) % 2 == 1;
        if parity != exhaustive {
            return Err(Error::VerificationFailed(format!(
                "condition (a + a^(q^ell) = a + a^(q^d) = 0) scan gives {exhaustive}, parity rule gives {parity} at ell = {ell}, d = {d}"
            )));
        }
    }
    Ok(exhaustive)
}

/// `β^{(q^{2ℓ}-1)/gcd(q^ℓ+1, q^d+1)} ≠ 1`, evaluated literally.
pub fn check_condition4(ctx: &FieldCtx, beta: Elem, d: u32) -> Result<bool> {
    if beta.is_zero() {
        return Err(Error::ZeroInput);
    }
    let q = ctx.q();
    let ell = ctx.ell();
    let pw = |e: u32| {
        arith::checked_pow(q, e).ok_or_else(|| Error::PreconditionFailed(format!("q^{e} overflows")))
    };
    let g = arith::gcd(pw(ell)? + 1, pw(d)? + 1);
    let e = (ctx.order() as u128 - 1) / g;
    Ok(ctx.pow(beta, e as u64) != Elem::ONE)
}

/// `β = g^index` for the field's fixed generator `g`.
pub fn beta_from_index(ctx: &FieldCtx, index: u64) -> Elem {
    ctx.exp(index)
}

/// Least generator power that is a nonsquare: `g` itself.
pub fn default_beta(ctx: &FieldCtx) -> Elem {
    ctx.generator()
}

fn validate_bhb(ctx: &FieldCtx, params: &BhbParams) -> Result<()> {
    let ell = ctx.ell();
    let d = params.d;
    if d == 0 || d >= 2 * ell {
        return Err(Error::InvalidParams(format!("d = {d} must satisfy 0 < d < 2*ell")));
    }
    if arith::gcd(ell as u128, d as u128) != 1 {
        return Err(Error::InvalidParams(format!("gcd(ell, d) = gcd({ell}, {d}) must be 1")));
    }
    if !check_condition5(ctx, d)? {
        return Err(Error::InvalidParams(format!(
            "ell + d = {} is even: some a != 0 has a + a^(q^ell) = a + a^(q^d) = 0",
            ell + d
        )));
    }
    if params.beta.is_zero() || !check_condition4(ctx, params.beta, d)? {
        return Err(Error::InvalidParams(
            "beta must be a nonsquare of F_(q^(2 ell))".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// B̄(q, ℓ, d, β)

/// The commutative presemifield `B̄(q,ℓ,d,β)` with the canonical `ω`.
/// Fails with `InvalidParams` when `ℓ + d` is even, `gcd(ℓ,d) ≠ 1` or `β`
/// is a square; a construction that passes the gates but is not a
/// presemifield is reported as a verification failure.
pub fn bhb(ctx: &Arc<FieldCtx>, params: BhbParams) -> Result<Presemifield> {
    validate_bhb(ctx, &params)?;
    let omega = ctx.find_omega()?;
    let m = ctx.qexp(ctx.ell() as i64);
    let s = ctx.qexp(params.d as i64);
    let bw = ctx.mul(params.beta, omega);
    let bw2 = ctx.mul(ctx.frob(params.beta, m), omega);
    let mut form = BilinearForm::zero(ctx.n());
    form.add_term(ctx, Elem::ONE, 0, m)
        .add_term(ctx, Elem::ONE, m, 0)
        .add_term(ctx, bw, 0, s)
        .add_term(ctx, bw, s, 0)
        .add_term(ctx, bw2, m, m + s)
        .add_term(ctx, bw2, m + s, m);
    let label = format!("B({},{},{},beta=#{})", ctx.q(), ctx.ell(), params.d, params.beta.index());
    let s = Presemifield::new(ctx.clone(), form, label);
    if !s.is_presemifield() {
        return Err(Error::VerificationFailed(format!("{} is not a presemifield", s.label())));
    }
    Ok(s)
}

/// `A = (y + y^{q^ℓ})/2` as a map of `y`.
fn a_map(ctx: &FieldCtx) -> LinearizedMap {
    let n = ctx.n();
    LinearizedMap::identity(n)
        .add(ctx, &frob_q_map(ctx, ctx.ell() as i64))
        .scale(ctx, half(ctx))
}

/// `B = (y − y^{q^ℓ})/(2ω)` as a map of `y`.
fn b_map_omega(ctx: &FieldCtx, omega: Elem) -> Result<LinearizedMap> {
    let n = ctx.n();
    let c = ctx.inv(ctx.mul(ctx.from_int(2), omega))?;
    Ok(LinearizedMap::identity(n)
        .sub(ctx, &frob_q_map(ctx, ctx.ell() as i64))
        .scale(ctx, c))
}

/// `y = A + Bω` with `A, B ∈ F_{q^ℓ}`.
pub fn decompose_omega(ctx: &FieldCtx, omega: Elem, y: Elem) -> Result<(Elem, Elem)> {
    Ok((a_map(ctx).eval(ctx, y), b_map_omega(ctx, omega)?.eval(ctx, y)))
}

/// `B̄(q,ℓ,d,β)^{t*}` in closed form:
/// `x ⋆′ y = 2Ax^{q^ℓ} + 2(σβB)^{q^{2ℓ−d}} x^{q^{2ℓ−d}} + 2σβB x^{q^d}`, `y = A + Bω`.
pub fn bhb_symplectic(ctx: &Arc<FieldCtx>, params: BhbParams) -> Result<Presemifield> {
    validate_bhb(ctx, &params)?;
    let omega = ctx.find_omega()?;
    let sigma = ctx.mul(omega, omega);
    let n = ctx.n();
    let ell = ctx.ell() as i64;
    let d = params.d as i64;
    let two = ctx.from_int(2);
    let mut rows = vec![LinearizedMap::zero(n); n];
    let twice_a = a_map(ctx).scale(ctx, two);
    let sb = b_map_omega(ctx, omega)?.scale(ctx, ctx.mul(two, ctx.mul(sigma, params.beta)));
    let m = ctx.qexp(ell);
    rows[m] = rows[m].add(ctx, &twice_a);
    let s = ctx.qexp(d);
    rows[s] = rows[s].add(ctx, &sb);
    let t = ctx.qexp(2 * ell - d);
    rows[t] = rows[t].add(ctx, &frob_q_map(ctx, 2 * ell - d).compose(ctx, &sb));
    let label = format!(
        "B({},{},{},beta=#{})^t*",
        ctx.q(),
        ctx.ell(),
        params.d,
        params.beta.index()
    );
    Ok(Presemifield::from_rows(ctx.clone(), &rows, label))
}

/// The transpose of `B̄` in the displayed closed form
/// `(x + x^{q^ℓ})y^{q^ℓ} + (βω)^{q^{2ℓ−d}}(x^{q^{2ℓ−d}} − x^{q^{ℓ−d}})y^{q^{2ℓ−d}} + βω(x − x^{q^ℓ})y^{q^d}`.
pub fn bhb_transpose_formula(ctx: &Arc<FieldCtx>, params: BhbParams) -> Result<Presemifield> {
    validate_bhb(ctx, &params)?;
    let omega = ctx.find_omega()?;
    let ell = ctx.ell() as i64;
    let d = params.d as i64;
    let m = ctx.qexp(ell);
    let s = ctx.qexp(d);
    let e1 = ctx.qexp(2 * ell - d);
    let e2 = ctx.qexp(ell - d);
    let bw = ctx.mul(params.beta, omega);
    let c1 = ctx.frob(bw, e1);
    let mut form = BilinearForm::zero(ctx.n());
    form.add_term(ctx, Elem::ONE, 0, m)
        .add_term(ctx, Elem::ONE, m, m)
        .add_term(ctx, c1, e1, e1)
        .add_term(ctx, ctx.neg(c1), e2, e1)
        .add_term(ctx, bw, 0, s)
        .add_term(ctx, ctx.neg(bw), m, s);
    Ok(Presemifield::new(ctx.clone(), form, "B^t (closed form)"))
}

// ---------------------------------------------------------------------------
// P(q, ℓ)

/// `(x − x^{q^ℓ})^{q^t}`.
fn twisted_difference(ctx: &FieldCtx, t: i64) -> LinearizedMap {
    frob_q_map(ctx, t).sub(ctx, &frob_q_map(ctx, ctx.ell() as i64 + t))
}

/// `G(x) = Σ_{i}^{k} (−1)^i (x − x^{q^ℓ})^{q^{2i}} + Σ_{j}^{k−1} (−1)^{k+j} (x − x^{q^ℓ})^{q^{2j+1}}`.
pub fn g_map(ctx: &FieldCtx, bounds: GSumBounds) -> Result<LinearizedMap> {
    let k = require_odd_ell(ctx)? as i64;
    let (i0, j0) = match bounds {
        GSumBounds::Displayed => (1, 1),
        GSumBounds::OddFromZero => (1, 0),
        GSumBounds::FromZero => (0, 0),
    };
    let mut g = LinearizedMap::zero(ctx.n());
    for i in i0..=k {
        g = g.add(ctx, &twisted_difference(ctx, 2 * i).scale(ctx, sign(ctx, i)));
    }
    for j in j0..k {
        g = g.add(ctx, &twisted_difference(ctx, 2 * j + 1).scale(ctx, sign(ctx, k + j)));
    }
    Ok(g)
}

/// `P(q,ℓ)` with an explicit choice of the bounds in `G`.
pub fn lmptb_with(ctx: &Arc<FieldCtx>, bounds: GSumBounds) -> Result<Presemifield> {
    let g = g_map(ctx, bounds)?;
    let m = ctx.qexp(ctx.ell() as i64);
    let two_h = ctx.qexp(2);
    let hf = half(ctx);
    let quarter = ctx.mul(hf, hf);
    let mut base = BilinearForm::zero(ctx.n());
    base.add_term(ctx, hf, 0, 0).add_term(ctx, hf, m, m);
    let mut sym = BilinearForm::zero(ctx.n());
    sym.add_term(ctx, Elem::ONE, 0, two_h).add_term(ctx, Elem::ONE, two_h, 0);
    let form = base.add(ctx, &sym.apply(ctx, &g).scale(ctx, quarter));
    Ok(Presemifield::new(ctx.clone(), form, format!("P({},{})", ctx.q(), ctx.ell())))
}

/// The commutative semifield `P(q,ℓ)`.
pub fn lmptb(ctx: &Arc<FieldCtx>) -> Result<Presemifield> {
    lmptb_with(ctx, G_SUM_BOUNDS)
}

/// The three sums `α_y`, `β_y`, `γ_y` of the symplectic expansion, as maps of `y`.
fn lmptb_sums(ctx: &FieldCtx) -> Result<(LinearizedMap, LinearizedMap, LinearizedMap)> {
    let k = require_odd_ell(ctx)? as i64;
    let ell = ctx.ell() as i64;
    let n = ctx.n();
    let mut alpha = LinearizedMap::zero(n);
    for i in 1..ell {
        alpha = alpha.add(ctx, &frob_q_map(ctx, 2 * i).scale(ctx, sign(ctx, i + 1)));
    }
    let mut beta = LinearizedMap::zero(n);
    for j in 0..k {
        beta = beta.add(ctx, &frob_q_map(ctx, 2 * j + 1).scale(ctx, sign(ctx, k + j + 1)));
    }
    let mut gamma = LinearizedMap::zero(n);
    for t in (k + 1)..ell {
        gamma = gamma.add(ctx, &frob_q_map(ctx, 2 * t + 1).scale(ctx, sign(ctx, k + t)));
    }
    Ok((alpha, beta, gamma))
}

/// `g(y) = α_y + β_y + γ_y` as a map.
pub fn g_of_y_map(ctx: &FieldCtx) -> Result<LinearizedMap> {
    let (a, b, c) = lmptb_sums(ctx)?;
    Ok(a.add(ctx, &b).add(ctx, &c))
}

/// `f(y) = ¼(y − y^{q^ℓ} + g(y))` as a map.
pub fn f_of_y_map(ctx: &FieldCtx) -> Result<LinearizedMap> {
    let hf = half(ctx);
    Ok(twisted_difference(ctx, 0)
        .add(ctx, &g_of_y_map(ctx)?)
        .scale(ctx, ctx.mul(hf, hf)))
}

pub fn g_of_y(ctx: &FieldCtx, y: Elem) -> Result<Elem> {
    Ok(g_of_y_map(ctx)?.eval(ctx, y))
}

pub fn f_of_y(ctx: &FieldCtx, y: Elem) -> Result<Elem> {
    Ok(f_of_y_map(ctx)?.eval(ctx, y))
}

/// `γ ↦ γ + γ^{q²}` on `F_{q^ℓ}`.
pub fn phi_small_map(ctx: &FieldCtx) -> LinearizedMap {
    LinearizedMap::identity(ctx.n()).add(ctx, &frob_q_map(ctx, 2))
}

/// `z ↦ ½(Σ_{i=0}^{k} (−1)^i z^{q^{2i}} + Σ_{j=0}^{k−1} (−1)^{k+j+1} z^{q^{2j+1}})`.
pub fn phi_small_inv_map(ctx: &FieldCtx) -> Result<LinearizedMap> {
    let k = require_odd_ell(ctx)? as i64;
    let n = ctx.n();
    let mut acc = LinearizedMap::zero(n);
    for i in 0..=k {
        acc = acc.add(ctx, &frob_q_map(ctx, 2 * i).scale(ctx, sign(ctx, i)));
    }
    for j in 0..k {
        acc = acc.add(ctx, &frob_q_map(ctx, 2 * j + 1).scale(ctx, sign(ctx, k + j + 1)));
    }
    Ok(acc.scale(ctx, half(ctx)))
}

fn require_in_q_ell(ctx: &FieldCtx, x: Elem) -> Result<()> {
    let m = ctx.qexp(ctx.ell() as i64);
    if !ctx.in_subfield(x, m) {
        return Err(Error::NotInSubfield(ctx.subfield_order(m)));
    }
    Ok(())
}

pub fn phi_small(ctx: &FieldCtx, gamma: Elem) -> Result<Elem> {
    require_in_q_ell(ctx, gamma)?;
    Ok(phi_small_map(ctx).eval(ctx, gamma))
}

pub fn phi_small_inv(ctx: &FieldCtx, z: Elem) -> Result<Elem> {
    require_in_q_ell(ctx, z)?;
    Ok(phi_small_inv_map(ctx)?.eval(ctx, z))
}

/// `B = φ⁻¹((y − y^{q^ℓ})/(2η))` as a map of `y`.
fn b_map_eta(ctx: &FieldCtx, eta: Elem) -> Result<LinearizedMap> {
    Ok(phi_small_inv_map(ctx)?.compose(ctx, &b_map_omega(ctx, eta)?))
}

/// `B = (y − y^{q^ℓ} − α_y − β_y − γ_y)/(4η)`, the expanded closed form.
pub fn b_map_eta_expanded(ctx: &FieldCtx, eta: Elem) -> Result<LinearizedMap> {
    let four_eta = ctx.mul(ctx.from_int(4), eta);
    Ok(twisted_difference(ctx, 0)
        .sub(ctx, &g_of_y_map(ctx)?)
        .scale(ctx, ctx.inv(four_eta)?))
}

/// `y = A + (B^{q²} + B)η` with `A, B ∈ F_{q^ℓ}`.
pub fn decompose_lmptb(ctx: &FieldCtx, eta: Elem, y: Elem) -> Result<(Elem, Elem)> {
    Ok((a_map(ctx).eval(ctx, y), b_map_eta(ctx, eta)?.eval(ctx, y)))
}

fn check_eta(ctx: &FieldCtx, eta: Elem) -> Result<()> {
    if eta.is_zero() || ctx.frob(eta, ctx.h() as usize) != ctx.neg(eta) {
        return Err(Error::InvalidParams("eta must satisfy eta^q = -eta, eta != 0".into()));
    }
    Ok(())
}

/// `P(q,ℓ)^{t*}`: `x • y = Ax + B^{q²}ηx^{q²} + Bηx^{q^{2ℓ−2}}`, `y = A + (B^{q²}+B)η`.
pub fn lmptb_symplectic(ctx: &Arc<FieldCtx>, eta: Elem) -> Result<Presemifield> {
    require_odd_ell(ctx)?;
    check_eta(ctx, eta)?;
    let n = ctx.n();
    let ell = ctx.ell() as i64;
    let b = b_map_eta(ctx, eta)?;
    let eb = b.scale(ctx, eta);
    let mut rows = vec![LinearizedMap::zero(n); n];
    rows[0] = a_map(ctx);
    let i2 = ctx.qexp(2);
    rows[i2] = rows[i2].add(ctx, &frob_q_map(ctx, 2).compose(ctx, &b).scale(ctx, eta));
    let i3 = ctx.qexp(2 * ell - 2);
    rows[i3] = rows[i3].add(ctx, &eb);
    Ok(Presemifield::from_rows(
        ctx.clone(),
        &rows,
        format!("P({},{})^t*", ctx.q(), ctx.ell()),
    ))
}

/// `P(q,ℓ)^{t*}` through `f`: `x • y = ((y + y^{q^ℓ})/2)x + f(y)x^{q²} + f(y)^{q^{2ℓ−2}}x^{q^{2ℓ−2}}`.
pub fn lmptb_symplectic_via_f(ctx: &Arc<FieldCtx>) -> Result<Presemifield> {
    let n = ctx.n();
    let ell = ctx.ell() as i64;
    let f = f_of_y_map(ctx)?;
    let mut rows = vec![LinearizedMap::zero(n); n];
    rows[0] = a_map(ctx);
    let i2 = ctx.qexp(2);
    rows[i2] = rows[i2].add(ctx, &f);
    let i3 = ctx.qexp(2 * ell - 2);
    rows[i3] = rows[i3].add(ctx, &frob_q_map(ctx, 2 * ell - 2).compose(ctx, &f));
    Ok(Presemifield::from_rows(
        ctx.clone(),
        &rows,
        format!("P({},{})^t* (via f)", ctx.q(), ctx.ell()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::TowerParams;

    fn ctx(p: u32, h: u32, ell: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(TowerParams::new(p, h, ell), None).unwrap())
    }

    #[test]
    fn condition5_examples() {
        let c = ctx(3, 1, 3);
        assert!(check_condition5(&c, 2).unwrap());
        assert!(!check_condition5(&c, 1).unwrap());
        let w = condition5_witness(&c, 1).unwrap();
        assert!(c.in_subfield(w, 2));
        assert_eq!(c.frob(w, 1), c.neg(w));
        let c5 = ctx(3, 1, 5);
        assert!(check_condition5(&c5, 2).unwrap());
    }

    #[test]
    fn condition4_examples() {
        let c = ctx(3, 1, 3);
        let g = c.generator();
        assert!(check_condition4(&c, g, 2).unwrap());
        assert!(!check_condition4(&c, c.mul(g, g), 2).unwrap());
        assert_eq!(check_condition4(&c, Elem::ZERO, 2), Err(Error::ZeroInput));
    }

    #[test]
    fn bhb_gates() {
        let c = ctx(3, 1, 3);
        let g = c.generator();
        let s = bhb(&c, BhbParams { d: 2, beta: g }).unwrap();
        assert!(s.is_presemifield());
        assert!(s.is_commutative());
        assert!(matches!(bhb(&c, BhbParams { d: 1, beta: g }), Err(Error::InvalidParams(_))));
        assert!(matches!(
            bhb(&c, BhbParams { d: 2, beta: c.mul(g, g) }),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn bhb_commutes_exhaustively() {
        let c = ctx(3, 1, 3);
        let s = bhb(&c, BhbParams { d: 2, beta: c.generator() }).unwrap();
        assert!(s.is_commutative_exhaustive());
    }

    #[test]
    fn phi_small_round_trip() {
        for (p, ell) in [(3, 3), (3, 5)] {
            let c = ctx(p, 1, ell);
            let m = c.qexp(ell as i64);
            for g in c.elements().filter(|&x| c.in_subfield(x, m)) {
                let z = phi_small(&c, g).unwrap();
                assert_eq!(phi_small_inv(&c, z).unwrap(), g);
            }
            assert_eq!(phi_small(&c, Elem::ZERO).unwrap(), Elem::ZERO);
            let two = c.from_int(2);
            assert_eq!(phi_small(&c, two).unwrap(), c.from_int(4));
            assert_eq!(phi_small_inv(&c, c.from_int(4)).unwrap(), two);
        }
        let c = ctx(3, 1, 3);
        let outside = c.elements().find(|&x| !c.in_subfield(x, 3)).unwrap();
        assert!(matches!(phi_small(&c, outside), Err(Error::NotInSubfield(27))));
    }

    #[test]
    fn g_second_sum_is_empty_for_ell_3_verbatim() {
        let c = ctx(3, 1, 3);
        let g = g_map(&c, GSumBounds::Displayed).unwrap();
        // k = 1: G(x) = −(x − x^{q^3})^{q^2}
        let expected = twisted_difference(&c, 2).scale(&c, c.from_int(-1));
        assert_eq!(g, expected);
    }

    #[test]
    fn lmptb_is_commutative_semifield_at_3_3() {
        let c = ctx(3, 1, 3);
        let s = lmptb(&c).unwrap();
        assert!(s.is_commutative());
        assert!(s.is_presemifield());
        assert!(s.is_commutative_exhaustive());
    }

    #[test]
    fn decompositions_reconstruct() {
        let c = ctx(3, 1, 3);
        let omega = c.find_omega().unwrap();
        let m = c.qexp(3);
        for y in c.elements() {
            let (a, b) = decompose_omega(&c, omega, y).unwrap();
            assert!(c.in_subfield(a, m) && c.in_subfield(b, m));
            assert_eq!(c.add(a, c.mul(b, omega)), y);
            let (a2, b2) = decompose_lmptb(&c, omega, y).unwrap();
            assert!(c.in_subfield(a2, m) && c.in_subfield(b2, m));
            let rebuilt = c.add(a2, c.mul(c.add(c.frob_q(b2, 2), b2), omega));
            assert_eq!(rebuilt, y);
        }
        assert_eq!(decompose_omega(&c, omega, omega).unwrap(), (Elem::ZERO, Elem::ONE));
        let in_sub = c.elements().find(|&x| c.in_subfield(x, m) && !x.is_zero()).unwrap();
        assert_eq!(decompose_omega(&c, omega, in_sub).unwrap(), (in_sub, Elem::ZERO));
        assert_eq!(decompose_lmptb(&c, omega, in_sub).unwrap(), (in_sub, Elem::ZERO));
    }

    #[test]
    fn b_closed_form_matches_phi_inverse_route() {
        for (p, ell) in [(3, 3), (3, 5), (5, 3)] {
            let c = ctx(p, 1, ell);
            let omega = c.find_omega().unwrap();
            assert_eq!(b_map_eta(&c, omega).unwrap(), b_map_eta_expanded(&c, omega).unwrap());
        }
    }

    #[test]
    fn g_bounds_against_symplectic_gate() {
        for (p, ell) in [(3, 3), (3, 5)] {
            let c = ctx(p, 1, ell);
            let sym = lmptb_symplectic(&c, c.find_omega().unwrap()).unwrap();
            let displayed = lmptb_with(&c, GSumBounds::Displayed).unwrap();
            assert!(displayed.is_presemifield());
            let dts = displayed.ts().unwrap();
            assert!(!dts.same_multiplication(&sym));
            assert!(dts.spread_set().set_eq(&sym.spread_set()));
            let odd = lmptb_with(&c, GSumBounds::OddFromZero).unwrap();
            assert!(!odd.is_presemifield());
            let from_zero = lmptb_with(&c, GSumBounds::FromZero).unwrap();
            assert!(from_zero.ts().unwrap().same_multiplication(&sym));
        }
    }

    #[test]
    fn symplectic_forms_agree_and_ignore_eta_scaling() {
        let c = ctx(5, 1, 3);
        let omega = c.find_omega().unwrap();
        let sym = lmptb_symplectic(&c, omega).unwrap();
        assert!(sym.same_multiplication(&lmptb_symplectic_via_f(&c).unwrap()));
        let gq = c.subfield_generator(1).unwrap();
        for a in 1..4 {
            let eta = c.mul(c.pow(gq, a), omega);
            assert!(lmptb_symplectic(&c, eta).unwrap().same_multiplication(&sym));
        }
        assert!(matches!(lmptb_symplectic(&c, Elem::ONE), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn bhb_symplectic_gate_and_transpose_display() {
        let c = ctx(3, 1, 3);
        let bp = BhbParams { d: 2, beta: c.generator() };
        let b = bhb(&c, bp).unwrap();
        let t = bhb_transpose_formula(&c, bp).unwrap();
        assert!(b.transpose().unwrap().same_multiplication(&t));
        assert!(b.ts().unwrap().same_multiplication(&bhb_symplectic(&c, bp).unwrap()));
    }

    #[test]
    fn f_twist_identity_and_f_equals_b_twisted() {
        let c = ctx(3, 1, 3);
        let omega = c.find_omega().unwrap();
        let quarter = c.inv(c.from_int(4)).unwrap();
        for y in c.elements() {
            let f = f_of_y(&c, y).unwrap();
            let g = g_of_y(&c, y).unwrap();
            let rhs = c.mul(quarter, c.sub(c.sub(y, c.frob_q(y, 3)), g));
            assert_eq!(c.frob_q(f, 4), rhs);
            let (_, b) = decompose_lmptb(&c, omega, y).unwrap();
            assert_eq!(c.mul(c.frob_q(b, 2), omega), f);
        }
    }
}
