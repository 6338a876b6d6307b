//! Presemifields on `F_{p^n}` given by bilinear p-polynomials
//! `x • y = Σ a_ij x^{p^i} y^{p^j}`, their spread sets, the dual and
//! transpose operations, and the bridge to planar Dembowski-Ostrom
//! polynomials.
//!
//! The coefficient matrix is canonical: two presemifields have the same
//! multiplication map exactly when their matrices agree.

use std::io::{self, Write};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linpoly::LinearizedMap;

/// Coefficient matrix of a bilinear p-polynomial, row `i` = power `p^i` of
/// `x`, column `j` = power `p^j` of `y`. Indices are taken mod `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    n: usize,
    a: Vec<Elem>,
}

impl BilinearForm {
    pub fn zero(n: usize) -> Self {
        BilinearForm {
            n,
            a: vec![Elem::ZERO; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.a[(i % self.n) * self.n + j % self.n]
    }

    /// Adds `c · x^{p^i} y^{p^j}`.
    pub fn add_term(&mut self, ctx: &FieldCtx, c: Elem, i: usize, j: usize) -> &mut Self {
        let idx = (i % self.n) * self.n + j % self.n;
        self.a[idx] = ctx.add(self.a[idx], c);
        self
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Self) -> Self {
        BilinearForm {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(&x, &y)| ctx.add(x, y)).collect(),
        }
    }

    /// The form raised to the `p^k`-th power: `Σ a_ij^{p^k} x^{p^{i+k}} y^{p^{j+k}}`.
    pub fn frobenius(&self, ctx: &FieldCtx, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let c = self.get(i, j);
                if !c.is_zero() {
                    out.add_term(ctx, ctx.frob(c, k), i + k, j + k);
                }
            }
        }
        out
    }

    /// `λ · form`.
    pub fn scale(&self, ctx: &FieldCtx, lambda: Elem) -> Self {
        BilinearForm {
            n: self.n,
            a: self.a.iter().map(|&c| ctx.mul(lambda, c)).collect(),
        }
    }

    /// `G(form(x, y))` for a linearized map `G`.
    pub fn apply(&self, ctx: &FieldCtx, g: &LinearizedMap) -> Self {
        let mut out = Self::zero(self.n);
        for (r, &gr) in g.coeffs().iter().enumerate() {
            if !gr.is_zero() {
                out = out.add(ctx, &self.frobenius(ctx, r).scale(ctx, gr));
            }
        }
        out
    }

    /// Builds the form `Σ_i rows[i](y) x^{p^i}` from the `y`-linear coefficient functions.
    pub fn from_rows(rows: &[LinearizedMap]) -> Self {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.n(), n);
            a.extend_from_slice(row.coeffs());
        }
        BilinearForm { n, a }
    }
}

/// A bilinear multiplication on `F_{p^n}` that may or may not be a presemifield.
/// Validity is computed on demand and cached.
#[derive(Clone)]
pub struct Presemifield {
    ctx: Arc<FieldCtx>,
    form: BilinearForm,
    label: String,
    valid: OnceLock<bool>,
}

impl std::fmt::Debug for Presemifield {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presemifield")
            .field("label", &self.label)
            .field("n", &self.form.n)
            .finish()
    }
}

impl Presemifield {
    pub fn new(ctx: Arc<FieldCtx>, form: BilinearForm, label: impl Into<String>) -> Self {
        assert_eq!(form.n, ctx.n(), "form size must match the field degree");
        Presemifield {
            ctx,
            form,
            label: label.into(),
            valid: OnceLock::new(),
        }
    }

    pub fn from_rows(ctx: Arc<FieldCtx>, rows: &[LinearizedMap], label: impl Into<String>) -> Self {
        Self::new(ctx, BilinearForm::from_rows(rows), label)
    }

    /// The field multiplication `x • y = xy`.
    pub fn field_multiplication(ctx: Arc<FieldCtx>) -> Self {
        let mut form = BilinearForm::zero(ctx.n());
        form.add_term(&ctx, Elem::ONE, 0, 0);
        Self::new(ctx, form, "field")
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn n(&self) -> usize {
        self.form.n
    }

    /// Same multiplication map (canonical coefficient equality).
    pub fn same_multiplication(&self, other: &Presemifield) -> bool {
        self.form == other.form
    }

    /// `y ↦ coefficient of x^{p^i}`, a linearized map in `y`.
    pub fn row(&self, i: usize) -> LinearizedMap {
        let n = self.n();
        LinearizedMap::from_coeffs(self.form.a[i * n..(i + 1) * n].to_vec())
    }

    fn frobs(&self, x: Elem) -> Vec<Elem> {
        (0..self.n()).map(|k| self.ctx.frob(x, k)).collect()
    }

    pub fn multiply(&self, x: Elem, y: Elem) -> Elem {
        let ctx = &*self.ctx;
        let fx = self.frobs(x);
        let fy = self.frobs(y);
        let n = self.n();
        let mut acc = Elem::ZERO;
        for i in 0..n {
            let mut c = Elem::ZERO;
            for j in 0..n {
                let a = self.form.a[i * n + j];
                if !a.is_zero() {
                    c = ctx.add(c, ctx.mul(a, fy[j]));
                }
            }
            if !c.is_zero() {
                acc = ctx.add(acc, ctx.mul(c, fx[i]));
            }
        }
        acc
    }

    fn spread_coeffs(&self, y: Elem, out: &mut [Elem]) {
        let ctx = &*self.ctx;
        let n = self.n();
        let fy = self.frobs(y);
        for (i, slot) in out.iter_mut().enumerate() {
            let mut c = Elem::ZERO;
            for j in 0..n {
                let a = self.form.a[i * n + j];
                if !a.is_zero() {
                    c = ctx.add(c, ctx.mul(a, fy[j]));
                }
            }
            *slot = c;
        }
    }

    /// `φ_y : x ↦ x • y`.
    pub fn spread_map(&self, y: Elem) -> LinearizedMap {
        let mut c = vec![Elem::ZERO; self.n()];
        self.spread_coeffs(y, &mut c);
        LinearizedMap::from_coeffs(c)
    }

    /// `φ^x : y ↦ x • y`.
    pub fn dual_spread_map(&self, x: Elem) -> LinearizedMap {
        let ctx = &*self.ctx;
        let n = self.n();
        let fx = self.frobs(x);
        let coeffs = (0..n)
            .map(|j| {
                (0..n).fold(Elem::ZERO, |acc, i| {
                    let a = self.form.a[i * n + j];
                    if a.is_zero() {
                        acc
                    } else {
                        ctx.add(acc, ctx.mul(a, fx[i]))
                    }
                })
            })
            .collect();
        LinearizedMap::from_coeffs(coeffs)
    }

    /// `{φ_y}` indexed by `y`.
    pub fn spread_set(&self) -> SpreadSet {
        let n = self.n();
        let order = self.ctx.order() as usize;
        let mut maps = vec![Elem::ZERO; order * n];
        maps.par_chunks_mut(n).enumerate().for_each(|(y, out)| {
            self.spread_coeffs(self.ctx.elem(y as u32), out);
        });
        SpreadSet::from_flat(n, maps)
    }

    /// `{φ^x}` indexed by `x`: the spread set of the dual.
    pub fn spread_set_dual(&self) -> SpreadSet {
        self.dual().spread_set()
    }

    /// Every nonzero `φ_y` and every nonzero `φ^x` is invertible.
    pub fn is_presemifield(&self) -> bool {
        *self.valid.get_or_init(|| {
            let ctx = &*self.ctx;
            let left_ok = (1..ctx.order())
                .into_par_iter()
                .all(|y| self.spread_map(ctx.elem(y)).is_invertible(ctx));
            left_ok
                && (1..ctx.order())
                    .into_par_iter()
                    .all(|x| self.dual_spread_map(ctx.elem(x)).is_invertible(ctx))
        })
    }

    /// Exhaustive oracle for [`Self::is_presemifield`]: `x • y ≠ 0` whenever `x, y ≠ 0`.
    pub fn is_presemifield_by_scan(&self) -> bool {
        let order = self.ctx.order();
        (1..order).into_par_iter().all(|y| {
            let values = self.spread_map(self.ctx.elem(y)).eval_table(&self.ctx);
            values[1..].iter().all(|v| !v.is_zero())
        })
    }

    /// Symmetric coefficient matrix; for reduced forms this is equivalent
    /// to `x • y = y • x` for all `x, y`.
    pub fn is_commutative(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| self.form.get(i, j) == self.form.get(j, i)))
    }

    /// Definitive exhaustive commutativity check.
    pub fn is_commutative_exhaustive(&self) -> bool {
        let order = self.ctx.order();
        (0..order).into_par_iter().all(|y| {
            let y = self.ctx.elem(y);
            // x ↦ x • y against x ↦ y • x
            self.spread_map(y).eval_table(&self.ctx) == self.dual_spread_map(y).eval_table(&self.ctx)
        })
    }

    /// `x •* y = y • x`.
    pub fn dual(&self) -> Presemifield {
        let n = self.n();
        let mut form = BilinearForm::zero(n);
        for i in 0..n {
            for j in 0..n {
                form.a[j * n + i] = self.form.a[i * n + j];
            }
        }
        Presemifield::new(self.ctx.clone(), form, format!("{}^*", self.label))
    }

    /// The multiplication `x •^t y = φ̄_y(x)`, without the validity check.
    pub fn transpose_unchecked(&self) -> Presemifield {
        let ctx = &*self.ctx;
        let n = self.n();
        let mut form = BilinearForm::zero(n);
        for i in 0..n {
            let k = (n - i) % n;
            for j in 0..n {
                let c = self.form.a[i * n + j];
                if !c.is_zero() {
                    form.add_term(ctx, ctx.frob(c, k), k, j + k);
                }
            }
        }
        let mut t = Presemifield::new(self.ctx.clone(), form, format!("{}^t", self.label));
        if let Some(&v) = self.valid.get() {
            let _ = t.valid.set(v);
        }
        t.label = format!("{}^t", self.label);
        t
    }

    pub fn transpose(&self) -> Result<Presemifield> {
        if !self.is_presemifield() {
            return Err(Error::NotPresemifield);
        }
        Ok(self.transpose_unchecked())
    }

    /// The symplectic version `S^{t*}`: transpose, then dual.
    pub fn ts(&self) -> Result<Presemifield> {
        let t = self.transpose()?.dual();
        let label = format!("{}^t*", self.label);
        Ok(t.with_label(label))
    }

    /// `f(x) = ½ (x ⋆ x)`.
    pub fn to_planar_do(&self) -> Result<DoPolynomial> {
        if !self.is_commutative() {
            return Err(Error::NotCommutative);
        }
        let ctx = &*self.ctx;
        let half = ctx.inv(ctx.from_int(2))?;
        Ok(DoPolynomial {
            ctx: self.ctx.clone(),
            coeff: self.form.scale(ctx, half),
        })
    }

    /// Writes `x,y,x•y` index triples for every pair.
    pub fn write_table_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,y,product")?;
        for y in self.ctx.elements() {
            let phi = self.spread_map(y);
            for x in self.ctx.elements() {
                writeln!(w, "{},{},{}", x.index(), y.index(), phi.eval(&self.ctx, x).index())?;
            }
        }
        Ok(())
    }
}

/// The spread set `{φ_y : y ∈ F_{p^n}}` stored flat, with a sorted index
/// for set comparison and membership lookup.
#[derive(Clone, Debug)]
pub struct SpreadSet {
    n: usize,
    maps: Vec<Elem>,
    sorted: Vec<u32>,
}

impl SpreadSet {
    fn from_flat(n: usize, maps: Vec<Elem>) -> Self {
        let count = maps.len() / n;
        let mut sorted: Vec<u32> = (0..count as u32).collect();
        sorted.par_sort_unstable_by(|&a, &b| {
            maps[a as usize * n..(a as usize + 1) * n].cmp(&maps[b as usize * n..(b as usize + 1) * n])
        });
        SpreadSet { n, maps, sorted }
    }

    /// Builds a spread set from explicit maps, indexed by position.
    pub fn from_maps(maps: &[LinearizedMap]) -> Self {
        let n = maps.first().map_or(0, |m| m.n());
        let flat = maps.iter().flat_map(|m| m.coeffs().iter().copied()).collect();
        Self::from_flat(n, flat)
    }

    pub fn len(&self) -> usize {
        self.maps.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn coeffs(&self, index: Elem) -> &[Elem] {
        let i = index.index() as usize;
        &self.maps[i * self.n..(i + 1) * self.n]
    }

    pub fn map(&self, index: Elem) -> LinearizedMap {
        LinearizedMap::from_coeffs(self.coeffs(index).to_vec())
    }

    fn row(&self, i: u32) -> &[Elem] {
        &self.maps[i as usize * self.n..(i as usize + 1) * self.n]
    }

    /// The index `y` with `φ_y = map`, if the map belongs to the set.
    pub fn lookup(&self, map: &LinearizedMap) -> Option<Elem> {
        let target = map.coeffs();
        self.sorted
            .binary_search_by(|&i| self.row(i).cmp(target))
            .ok()
            .map(|pos| {
                // among duplicates return the least index
                let row = self.row(self.sorted[pos]);
                let mut best = self.sorted[pos];
                let mut lo = pos;
                while lo > 0 && self.row(self.sorted[lo - 1]) == row {
                    lo -= 1;
                    best = best.min(self.sorted[lo]);
                }
                let mut hi = pos + 1;
                while hi < self.sorted.len() && self.row(self.sorted[hi]) == row {
                    best = best.min(self.sorted[hi]);
                    hi += 1;
                }
                Elem::from_raw(best)
            })
    }

    pub fn contains(&self, map: &LinearizedMap) -> bool {
        self.lookup(map).is_some()
    }

    /// Number of distinct maps.
    pub fn distinct_count(&self) -> usize {
        if self.sorted.is_empty() {
            return 0;
        }
        1 + self
            .sorted
            .windows(2)
            .filter(|w| self.row(w[0]) != self.row(w[1]))
            .count()
    }

    /// Sorted distinct coefficient vectors.
    pub fn canonical(&self) -> Vec<LinearizedMap> {
        let mut out: Vec<LinearizedMap> = Vec::new();
        for &i in &self.sorted {
            let row = self.row(i);
            if out.last().map_or(true, |m| m.coeffs() != row) {
                out.push(LinearizedMap::from_coeffs(row.to_vec()));
            }
        }
        out
    }

    /// Equality as sets of maps.
    pub fn set_eq(&self, other: &SpreadSet) -> bool {
        if self.n != other.n {
            return false;
        }
        let dedup = |s: &SpreadSet| -> Vec<u32> {
            let mut v: Vec<u32> = Vec::with_capacity(s.sorted.len());
            for &i in &s.sorted {
                if v.last().map_or(true, |&l| s.row(l) != s.row(i)) {
                    v.push(i);
                }
            }
            v
        };
        let a = dedup(self);
        let b = dedup(other);
        a.len() == b.len() && a.iter().zip(&b).all(|(&x, &y)| self.row(x) == other.row(y))
    }
}

/// A Dembowski-Ostrom polynomial `f(x) = Σ c_ij x^{p^i + p^j}` with a
/// symmetric coefficient matrix.
#[derive(Clone, Debug)]
pub struct DoPolynomial {
    ctx: Arc<FieldCtx>,
    coeff: BilinearForm,
}

impl DoPolynomial {
    /// Symmetrizes an arbitrary coefficient matrix: off-diagonal pairs
    /// `c_ij, c_ji` are replaced by their mean.
    pub fn new(ctx: Arc<FieldCtx>, coeff: BilinearForm) -> Result<Self> {
        let n = ctx.n();
        if coeff.n() != n {
            return Err(Error::InvalidParams("DO coefficient matrix has wrong size".into()));
        }
        let half = ctx.inv(ctx.from_int(2))?;
        let mut sym = BilinearForm::zero(n);
        for i in 0..n {
            for j in 0..n {
                let c = if i == j {
                    coeff.get(i, i)
                } else {
                    ctx.mul(half, ctx.add(coeff.get(i, j), coeff.get(j, i)))
                };
                sym.a[i * n + j] = c;
            }
        }
        Ok(DoPolynomial { ctx, coeff: sym })
    }

    /// `f(x) = x^{p^i + p^j}`.
    pub fn monomial(ctx: Arc<FieldCtx>, i: usize, j: usize) -> Result<Self> {
        let mut form = BilinearForm::zero(ctx.n());
        form.add_term(&ctx, Elem::ONE, i, j);
        Self::new(ctx, form)
    }

    pub fn coeff(&self) -> &BilinearForm {
        &self.coeff
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let ctx = &*self.ctx;
        let n = ctx.n();
        let fx: Vec<Elem> = (0..n).map(|k| ctx.frob(x, k)).collect();
        let mut acc = Elem::ZERO;
        for i in 0..n {
            for j in 0..n {
                let c = self.coeff.get(i, j);
                if !c.is_zero() {
                    acc = ctx.add(acc, ctx.mul(c, ctx.mul(fx[i], fx[j])));
                }
            }
        }
        acc
    }

    /// `x ⋆ y = f(x + y) − f(x) − f(y)`, i.e. coefficients `c_ij + c_ji`.
    pub fn to_presemifield_unchecked(&self) -> Presemifield {
        let ctx = &*self.ctx;
        let n = ctx.n();
        let mut form = BilinearForm::zero(n);
        for i in 0..n {
            for j in 0..n {
                form.a[i * n + j] = ctx.add(self.coeff.get(i, j), self.coeff.get(j, i));
            }
        }
        Presemifield::new(self.ctx.clone(), form, "S_f")
    }

    /// Planarity through the associated presemifield: every nonzero
    /// spread map invertible.
    pub fn is_planar(&self) -> bool {
        self.to_presemifield_unchecked().is_presemifield()
    }

    /// Planarity by definition: `x ↦ f(x + a) − f(x) − f(a)` is a bijection
    /// for every `a ≠ 0`. Costs `p^{2n}` evaluations.
    pub fn is_planar_by_scan(&self) -> bool {
        let ctx = &*self.ctx;
        let order = ctx.order();
        let values: Vec<Elem> = ctx.elements().map(|x| self.eval(x)).collect();
        (1..order).into_par_iter().all(|a| {
            let a = ctx.elem(a);
            let fa = values[a.index() as usize];
            let mut seen = vec![false; order as usize];
            ctx.elements().all(|x| {
                let d = ctx.sub(ctx.sub(values[ctx.add(x, a).index() as usize], values[x.index() as usize]), fa);
                !std::mem::replace(&mut seen[d.index() as usize], true)
            })
        })
    }
}

/// `S_f` for a planar DO polynomial. With `check` set, planarity is
/// verified first.
pub fn from_planar_do(f: &DoPolynomial, check: bool) -> Result<Presemifield> {
    let s = f.to_presemifield_unchecked();
    if check && !s.is_presemifield() {
        return Err(Error::NotPlanar);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::TowerParams;

    fn ctx(p: u32, h: u32, ell: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(TowerParams::new(p, h, ell), None).unwrap())
    }

    fn twisted(c: &Arc<FieldCtx>, k: usize) -> Presemifield {
        let mut form = BilinearForm::zero(c.n());
        form.add_term(c, Elem::ONE, 0, k);
        Presemifield::new(c.clone(), form, format!("x y^(p^{k})"))
    }

    #[test]
    fn field_multiplication_matches_ctx() {
        let c = ctx(3, 1, 2);
        let f = Presemifield::field_multiplication(c.clone());
        for x in c.elements() {
            for y in c.elements().step_by(7) {
                assert_eq!(f.multiply(x, y), c.mul(x, y));
            }
        }
        assert!(f.is_presemifield() && f.is_presemifield_by_scan());
        assert!(f.is_commutative() && f.is_commutative_exhaustive());
    }

    #[test]
    fn twisted_fields() {
        let c = ctx(3, 1, 2);
        // x y^3 has no zero divisors; x y^3 + x^3 y vanishes on some nonzero pair
        let t = twisted(&c, 1);
        assert!(t.is_presemifield() && t.is_presemifield_by_scan());
        assert!(!t.is_commutative());
        let mut form = BilinearForm::zero(c.n());
        form.add_term(&c, Elem::ONE, 0, 1).add_term(&c, Elem::ONE, 1, 0);
        let s = Presemifield::new(c.clone(), form, "xy^3+x^3y");
        assert_eq!(s.is_presemifield(), s.is_presemifield_by_scan());
    }

    #[test]
    fn spread_maps_agree_with_products() {
        let c = ctx(3, 1, 3);
        let t = twisted(&c, 2);
        let set = t.spread_set();
        for y in c.elements().step_by(31) {
            let phi = t.spread_map(y);
            let dual = t.dual_spread_map(y);
            assert_eq!(set.map(y), phi);
            for x in c.elements().step_by(17) {
                assert_eq!(phi.eval(&c, x), t.multiply(x, y));
                assert_eq!(dual.eval(&c, x), t.multiply(y, x));
            }
        }
        assert_eq!(set.distinct_count(), 729);
        assert_eq!(set.lookup(&t.spread_map(c.elem(5))), Some(c.elem(5)));
    }

    #[test]
    fn knuth_operations_are_involutions() {
        let c = ctx(3, 1, 2);
        let t = twisted(&c, 1);
        assert!(t.dual().dual().same_multiplication(&t));
        let tt = t.transpose().unwrap();
        assert!(tt.transpose().unwrap().same_multiplication(&t));
        for y in c.elements() {
            assert_eq!(tt.spread_map(y), t.spread_map(y).conjugate(&c));
        }
        let zero = Presemifield::new(c.clone(), BilinearForm::zero(c.n()), "zero");
        assert_eq!(zero.transpose().unwrap_err(), Error::NotPresemifield);
    }

    #[test]
    fn field_is_self_transpose() {
        let c = ctx(5, 1, 2);
        let f = Presemifield::field_multiplication(c.clone());
        assert!(f.transpose().unwrap().same_multiplication(&f));
        assert!(f.ts().unwrap().same_multiplication(&f));
    }

    #[test]
    fn planar_do_round_trip() {
        let c = ctx(3, 1, 2);
        // x^2 is planar in odd characteristic
        let f = DoPolynomial::monomial(c.clone(), 0, 0).unwrap();
        assert!(f.is_planar() && f.is_planar_by_scan());
        let s = from_planar_do(&f, true).unwrap();
        let back = s.to_planar_do().unwrap();
        assert_eq!(back.coeff(), f.coeff());
        for x in c.elements() {
            assert_eq!(f.eval(x), c.mul(x, x));
        }
        // x^{1+p} over F_{p^4} is not planar (n / gcd(1, 4) is even)
        let g = DoPolynomial::monomial(c.clone(), 0, 1).unwrap();
        assert!(!g.is_planar());
        assert!(!g.is_planar_by_scan());
        assert_eq!(from_planar_do(&g, true).unwrap_err(), Error::NotPlanar);
        assert_eq!(twisted(&c, 1).to_planar_do().unwrap_err(), Error::NotCommutative);
    }

    #[test]
    fn spread_set_is_additive() {
        let c = ctx(3, 1, 3);
        let t = twisted(&c, 1);
        for (a, b) in [(3u32, 100u32), (728, 1), (400, 401)] {
            let (a, b) = (c.elem(a), c.elem(b));
            assert_eq!(t.spread_map(c.add(a, b)), t.spread_map(a).add(&c, &t.spread_map(b)));
        }
    }

    #[test]
    fn set_equality_ignores_indexing() {
        let c = ctx(3, 1, 2);
        let f = Presemifield::field_multiplication(c.clone());
        // x · (2y) has the same spread set as x · y
        let mut form = BilinearForm::zero(c.n());
        form.add_term(&c, c.from_int(2), 0, 0);
        let g = Presemifield::new(c.clone(), form, "2xy");
        assert!(!f.same_multiplication(&g));
        assert!(f.spread_set().set_eq(&g.spread_set()));
        // x y^3 reindexes y too, while x^3 y changes the maps themselves
        assert!(f.spread_set().set_eq(&twisted(&c, 1).spread_set()));
        let mut form = BilinearForm::zero(c.n());
        form.add_term(&c, Elem::ONE, 1, 0);
        let h = Presemifield::new(c.clone(), form, "x^3 y");
        assert!(!f.spread_set().set_eq(&h.spread_set()));
    }

    #[test]
    fn csv_dump_has_every_pair() {
        let c = ctx(3, 1, 2);
        let mut out = Vec::new();
        Presemifield::field_multiplication(c.clone()).write_table_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 1 + 81 * 81);
    }
}
