//! Isotopisms between presemifields.
//!
//! A triple `(M, N, L)` of additive bijections is an isotopism from
//! `(F, +, •)` to `(F, +, ⋆)` when `M(x) ⋆ N(y) = L(x • y)` for all `x, y`.
//! Verification goes through spread sets: the triple is an isotopism exactly
//! when `L ∘ φ_y ∘ M⁻¹ = φ′_{N(y)}` for every `y`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linpoly::LinearizedMap;
use crate::presemifield::{Presemifield, SpreadSet};

/// A failing pair. `x` is absent when the failure is a whole map
/// (no single product to point at, as in the strong-isotopy criterion).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub x: Option<Elem>,
    pub y: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Unverified,
    Verified,
    Refuted(Witness),
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }

    pub fn witness(&self) -> Option<Witness> {
        match self {
            Verdict::Refuted(w) => Some(*w),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Unverified => "unverified",
            Verdict::Verified => "verified",
            Verdict::Refuted(_) => "refuted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotopismTriple {
    pub m: LinearizedMap,
    pub n: LinearizedMap,
    pub l: LinearizedMap,
    pub source: String,
    pub target: String,
    pub status: Verdict,
}

impl IsotopismTriple {
    pub fn new(m: LinearizedMap, n: LinearizedMap, l: LinearizedMap) -> Self {
        IsotopismTriple {
            m,
            n,
            l,
            source: String::new(),
            target: String::new(),
            status: Verdict::Unverified,
        }
    }

    pub fn identity(n: usize) -> Self {
        let id = LinearizedMap::identity(n);
        Self::new(id.clone(), id.clone(), id)
    }

    pub fn between(mut self, source: &Presemifield, target: &Presemifield) -> Self {
        self.source = source.label().to_string();
        self.target = target.label().to_string();
        self
    }

    pub fn is_strong(&self) -> bool {
        self.m == self.n
    }

    /// `(M′M, N′N, L′L)`: first `self`, then `next`.
    pub fn then(&self, ctx: &FieldCtx, next: &IsotopismTriple) -> IsotopismTriple {
        IsotopismTriple {
            m: next.m.compose(ctx, &self.m),
            n: next.n.compose(ctx, &self.n),
            l: next.l.compose(ctx, &self.l),
            source: self.source.clone(),
            target: next.target.clone(),
            status: Verdict::Unverified,
        }
    }

    /// `(M⁻¹, N⁻¹, L⁻¹)` from the target back to the source.
    pub fn inverse(&self, ctx: &FieldCtx) -> Result<IsotopismTriple> {
        Ok(IsotopismTriple {
            m: self.m.invert(ctx)?,
            n: self.n.invert(ctx)?,
            l: self.l.invert(ctx)?,
            source: self.target.clone(),
            target: self.source.clone(),
            status: Verdict::Unverified,
        })
    }

    fn relabelled(&self, suffix: &str, m: LinearizedMap, n: LinearizedMap, l: LinearizedMap) -> Self {
        IsotopismTriple {
            m,
            n,
            l,
            source: format!("{}{suffix}", self.source),
            target: format!("{}{suffix}", self.target),
            status: Verdict::Unverified,
        }
    }
}

fn require_same_field(s1: &Presemifield, s2: &Presemifield) -> Result<()> {
    if s1.ctx().modulus() != s2.ctx().modulus() || s1.ctx().p() != s2.ctx().p() {
        return Err(Error::PreconditionFailed("presemifields live over different fields".into()));
    }
    Ok(())
}

fn first_failing_x(s1: &Presemifield, s2: &Presemifield, t: &IsotopismTriple, y: Elem) -> Option<Elem> {
    let ctx = &**s1.ctx();
    let ny = t.n.eval(ctx, y);
    ctx.elements_by_power().find(|&x| {
        s2.multiply(t.m.eval(ctx, x), ny) != t.l.eval(ctx, s1.multiply(x, y))
    })
}

/// Spread-set criterion: `L ∘ φ_y ∘ M⁻¹ = φ′_{N(y)}` for every `y`. A
/// refutation names the first failing `y` in generator-power order and the
/// first `x` (same order) with `M(x) ⋆ N(y) ≠ L(x • y)`.
pub fn verify_isotopism(s1: &Presemifield, s2: &Presemifield, t: &IsotopismTriple) -> Result<Verdict> {
    require_same_field(s1, s2)?;
    let ctx = &**s1.ctx();
    let m_inv = t.m.invert(ctx)?;
    t.n.invert(ctx)?;
    t.l.invert(ctx)?;
    let ys: Vec<Elem> = ctx.elements_by_power().collect();
    let bad = ys.par_iter().find_first(|&&y| {
        let lhs = t.l.compose(ctx, &s1.spread_map(y)).compose(ctx, &m_inv);
        lhs != s2.spread_map(t.n.eval(ctx, y))
    });
    Ok(match bad {
        None => Verdict::Verified,
        Some(&y) => Verdict::Refuted(Witness {
            x: first_failing_x(s1, s2, t, y),
            y,
        }),
    })
}

/// Definitional check over all `p^{2n}` pairs.
pub fn verify_isotopism_all_pairs(s1: &Presemifield, s2: &Presemifield, t: &IsotopismTriple) -> Result<Verdict> {
    require_same_field(s1, s2)?;
    let ctx = &**s1.ctx();
    t.m.invert(ctx)?;
    t.n.invert(ctx)?;
    t.l.invert(ctx)?;
    let m_tab = t.m.eval_table(ctx);
    let l_tab = t.l.eval_table(ctx);
    let ys: Vec<Elem> = ctx.elements_by_power().collect();
    let bad = ys.par_iter().find_first(|&&y| {
        // products as value tables: x ↦ x • y and z ↦ z ⋆ N(y)
        let left = s1.spread_map(y).eval_table(ctx);
        let right = s2.spread_map(t.n.eval(ctx, y)).eval_table(ctx);
        (0..left.len()).any(|x| right[m_tab[x].index() as usize] != l_tab[left[x].index() as usize])
    });
    Ok(match bad {
        None => Verdict::Verified,
        Some(&y) => Verdict::Refuted(Witness {
            x: first_failing_x(s1, s2, t, y),
            y,
        }),
    })
}

/// Verifies and records the verdict on the triple.
pub fn verify_in_place(s1: &Presemifield, s2: &Presemifield, t: &mut IsotopismTriple) -> Result<Verdict> {
    let v = verify_isotopism(s1, s2, t)?;
    t.status = v;
    t.source = s1.label().to_string();
    t.target = s2.label().to_string();
    Ok(v)
}

/// The `N` forced by `M` and `L`: `φ′_{N(y)} = L ∘ φ_y ∘ M⁻¹`, if every such
/// map lies in the target spread set. The induced correspondence is checked to
/// be additive on all of `F` before it is returned as a linearized map.
pub fn induce_n(
    s1: &Presemifield,
    s2: &Presemifield,
    m: &LinearizedMap,
    l: &LinearizedMap,
) -> Result<Option<LinearizedMap>> {
    require_same_field(s1, s2)?;
    let ctx = &**s1.ctx();
    let m_inv = m.invert(ctx)?;
    l.invert(ctx)?;
    let target = s2.spread_set();
    let order = ctx.order();
    let images: Option<Vec<Elem>> = (0..order)
        .into_par_iter()
        .map(|y| {
            let map = l.compose(ctx, &s1.spread_map(ctx.elem(y))).compose(ctx, &m_inv);
            target.lookup(&map)
        })
        .collect();
    let Some(images) = images else {
        return Ok(None);
    };
    let basis_values: Vec<Elem> = (0..ctx.n())
        .map(|j| images[ctx.basis(j).index() as usize])
        .collect();
    let n_map = LinearizedMap::from_basis_values(ctx, &basis_values);
    let additive = (0..order)
        .into_par_iter()
        .all(|y| n_map.eval(ctx, ctx.elem(y)) == images[y as usize]);
    if !additive || !n_map.is_invertible(ctx) {
        return Err(Error::VerificationFailed(
            "induced correspondence between spread sets is not an additive bijection".into(),
        ));
    }
    Ok(Some(n_map))
}

/// `(M, N, L) ↦ (N, M, L)` between the duals.
pub fn dual_transform(t: &IsotopismTriple) -> IsotopismTriple {
    t.relabelled("^*", t.n.clone(), t.m.clone(), t.l.clone())
}

/// `(M, N, L) ↦ (L̄⁻¹, N, M̄⁻¹)` between the transposes.
pub fn transpose_transform(ctx: &FieldCtx, t: &IsotopismTriple) -> Result<IsotopismTriple> {
    let m = t.l.conjugate(ctx).invert(ctx)?;
    let l = t.m.conjugate(ctx).invert(ctx)?;
    Ok(t.relabelled("^t", m, t.n.clone(), l))
}

/// `(M, N, L) ↦ (N, L̄⁻¹, M̄⁻¹)` between the `t*` versions: transpose, then dual.
pub fn ts_transform(ctx: &FieldCtx, t: &IsotopismTriple) -> Result<IsotopismTriple> {
    let tr = transpose_transform(ctx, t)?;
    let mut out = dual_transform(&tr);
    out.source = format!("{}^t*", t.source);
    out.target = format!("{}^t*", t.target);
    Ok(out)
}

/// Inverse of [`ts_transform`]: from `(M′, N′, L′)` between `S1^{t*}` and
/// `S2^{t*}` to `(M, N, L) = (conj(L′⁻¹), M′, conj(N′⁻¹))` between `S1` and `S2`.
pub fn ts_transform_inverse(ctx: &FieldCtx, t: &IsotopismTriple) -> Result<IsotopismTriple> {
    let m = t.l.invert(ctx)?.conjugate(ctx);
    let l = t.n.invert(ctx)?.conjugate(ctx);
    Ok(IsotopismTriple {
        m,
        n: t.m.clone(),
        l,
        source: t.source.trim_end_matches("^t*").to_string(),
        target: t.target.trim_end_matches("^t*").to_string(),
        status: Verdict::Unverified,
    })
}

/// Strong-isotopy criterion on the `t*` spread sets: `S2^{t*} = H S1^{t*} H̄`.
/// A refutation names the first `y` (generator-power order) whose
/// `H ∘ φ_y ∘ H̄` misses the target set.
pub fn strong_check(s1: &Presemifield, s2: &Presemifield, h: &LinearizedMap) -> Result<Verdict> {
    require_same_field(s1, s2)?;
    let ctx = &**s1.ctx();
    h.invert(ctx)?;
    let h_bar = h.conjugate(ctx);
    let t1 = s1.ts()?;
    let target = s2.ts()?.spread_set();
    let ys: Vec<Elem> = ctx.elements_by_power().collect();
    let bad = ys.par_iter().find_first(|&&y| {
        let map = h.compose(ctx, &t1.spread_map(y)).compose(ctx, &h_bar);
        !target.contains(&map)
    });
    Ok(match bad {
        None => Verdict::Verified,
        Some(&y) => Verdict::Refuted(Witness { x: None, y }),
    })
}

/// Orders of the left, middle and right nuclei.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NucleiReport {
    pub left: u64,
    pub middle: u64,
    pub right: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    /// `S ∘ φ ⊆ S`
    Middle,
    /// `φ ∘ S ⊆ S`
    Right,
}

/// Number of maps `φ` with `S ∘ φ ⊆ S` (middle) or `φ ∘ S ⊆ S` (right).
///
/// Any such `φ` equals `ψ₀⁻¹ ∘ ψ` (resp. `ψ ∘ ψ₀⁻¹`) for the fixed nonzero
/// `ψ₀ = φ_1` and some `ψ ∈ S`, so only `|S|` candidates are tested. `S` is an
/// `F_p`-space, hence testing the images of the basis maps suffices.
fn nucleus_count(ctx: &FieldCtx, set: &SpreadSet, side: Side) -> Result<u64> {
    let n = ctx.n();
    let psi0_inv = set.map(Elem::ONE).invert(ctx)?;
    let basis: Vec<LinearizedMap> = (0..n).map(|j| set.map(ctx.basis(j))).collect();
    let count = (0..ctx.order())
        .into_par_iter()
        .filter(|&y| {
            let psi = set.map(ctx.elem(y));
            let cand = match side {
                Side::Middle => psi0_inv.compose(ctx, &psi),
                Side::Right => psi.compose(ctx, &psi0_inv),
            };
            basis.iter().all(|b| {
                let c = match side {
                    Side::Middle => b.compose(ctx, &cand),
                    Side::Right => cand.compose(ctx, b),
                };
                set.contains(&c)
            })
        })
        .count() as u64;
    let p = ctx.p() as u64;
    let is_field_order = (0..=n as u32).any(|k| p.pow(k) == count && k > 0 && n as u32 % k == 0);
    if !is_field_order {
        return Err(Error::VerificationFailed(format!(
            "nucleus has {count} elements, not the order of a subfield"
        )));
    }
    Ok(count)
}

/// Middle and right nuclei from `S`, left nucleus from `S*`.
pub fn nuclei(s: &Presemifield) -> Result<NucleiReport> {
    if !s.is_presemifield() {
        return Err(Error::NotPresemifield);
    }
    let ctx = &**s.ctx();
    let set = s.spread_set();
    let dual = s.spread_set_dual();
    Ok(NucleiReport {
        left: nucleus_count(ctx, &dual, Side::Right)?,
        middle: nucleus_count(ctx, &set, Side::Middle)?,
        right: nucleus_count(ctx, &set, Side::Right)?,
    })
}

/// Every spread map is `F_{p^m}`-linear (checked on the basis maps, which
/// span the spread set).
pub fn spread_linear_over(s: &Presemifield, m: usize) -> bool {
    let ctx = s.ctx();
    (0..ctx.n()).all(|j| s.spread_map(ctx.basis(j)).is_linear_over(m))
}

/// The common companion exponent of `L` and `M` over `F_{p^m}` for a
/// verified triple between presemifields with `F_{p^m}`-linear spread maps.
/// `L` and `M` must be semilinear with the same companion automorphism; any
/// other outcome is reported as a verification failure.
pub fn semilinearity_constraint(
    s1: &Presemifield,
    s2: &Presemifield,
    t: &IsotopismTriple,
    m: usize,
) -> Result<usize> {
    if !spread_linear_over(s1, m) || !spread_linear_over(s2, m) {
        return Err(Error::PreconditionFailed(format!(
            "spread maps are not linear over F_(p^{m})"
        )));
    }
    let ctx = &**s1.ctx();
    let el = t.l.semilinear_type(ctx, m)?;
    let em = t.m.semilinear_type(ctx, m)?;
    match (el, em) {
        (Some(a), Some(b)) if a == b => Ok(a),
        _ => Err(Error::VerificationFailed(format!(
            "L and M are not semilinear with a common companion over F_(p^{m}): L {el:?}, M {em:?}"
        ))),
    }
}
