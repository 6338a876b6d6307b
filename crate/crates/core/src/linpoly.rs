//! Additive maps of `F_{p^n}` as reduced p-polynomials `Σ β_i x^{p^i}`.
//!
//! Reduced p-polynomials (exponents below `p^n`) are in bijection with the
//! `F_p`-linear endomorphisms of `F_{p^n}`, so coefficient equality is map
//! equality. Composition reads right to left: `compose(φ, ψ) = φ∘ψ`.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::matrix::FpMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearizedMap {
    coeffs: Vec<Elem>,
}

impl LinearizedMap {
    pub fn from_coeffs(coeffs: Vec<Elem>) -> Self {
        LinearizedMap { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        LinearizedMap {
            coeffs: vec![Elem::ZERO; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::monomial(n, Elem::ONE, 0)
    }

    /// `x ↦ c x^{p^k}`.
    pub fn monomial(n: usize, c: Elem, k: usize) -> Self {
        let mut m = Self::zero(n);
        m.coeffs[k % n] = c;
        m
    }

    /// Scalar map `t_λ : x ↦ λx`.
    pub fn scalar(n: usize, lambda: Elem) -> Self {
        Self::monomial(n, lambda, 0)
    }

    /// `x ↦ x^{p^k}`.
    pub fn frobenius(n: usize, k: usize) -> Self {
        Self::monomial(n, Elem::ONE, k)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs[k % self.coeffs.len()]
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `Some(λ)` when the map is `t_λ`.
    pub fn as_scalar(&self) -> Option<Elem> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then_some(self.coeffs[0])
    }

    /// True when every nonzero coefficient sits at an exponent `≡ 0 (mod m)`,
    /// i.e. the map is `F_{p^m}`-linear.
    pub fn is_linear_over(&self, m: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % m == 0 || c.is_zero())
    }

    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Elem::ZERO, |acc, (i, &c)| {
                if c.is_zero() {
                    acc
                } else {
                    ctx.add(acc, ctx.mul(c, ctx.frob(x, i)))
                }
            })
    }

    /// Values at every element in index order. Each value after the first
    /// costs one addition: `x = x' + basis(i)` where `i` is the lowest
    /// nonzero digit of `x`.
    pub fn eval_table(&self, ctx: &FieldCtx) -> Vec<Elem> {
        let p = ctx.p();
        let images: Vec<Elem> = (0..ctx.n()).map(|i| self.eval(ctx, ctx.basis(i))).collect();
        let mut out = Vec::with_capacity(ctx.order() as usize);
        out.push(Elem::ZERO);
        for idx in 1..ctx.order() {
            let (mut t, mut i, mut step) = (idx, 0, 1);
            while t % p == 0 {
                t /= p;
                i += 1;
                step *= p;
            }
            let prev = out[(idx - step) as usize];
            out.push(ctx.add(prev, images[i]));
        }
        out
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ctx.add(a, b))
            .collect();
        LinearizedMap { coeffs }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ctx.sub(a, b))
            .collect();
        LinearizedMap { coeffs }
    }

    /// `t_λ ∘ self`.
    pub fn scale(&self, ctx: &FieldCtx, lambda: Elem) -> Self {
        LinearizedMap {
            coeffs: self.coeffs.iter().map(|&c| ctx.mul(lambda, c)).collect(),
        }
    }

    /// `self ∘ other`: `Σ_{i,j} β_i γ_j^{p^i} x^{p^{i+j}}`.
    pub fn compose(&self, ctx: &FieldCtx, other: &Self) -> Self {
        let n = self.n();
        let mut out = vec![Elem::ZERO; n];
        for (i, &b) in self.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for (j, &g) in other.coeffs.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                out[k] = ctx.add(out[k], ctx.mul(b, ctx.frob(g, i)));
            }
        }
        LinearizedMap { coeffs: out }
    }

    /// `φ̄(x) = Σ β_i^{p^{n-i}} x^{p^{n-i}}`.
    pub fn conjugate(&self, ctx: &FieldCtx) -> Self {
        let n = self.n();
        let mut out = vec![Elem::ZERO; n];
        for (i, &b) in self.coeffs.iter().enumerate() {
            let k = (n - i) % n;
            out[k] = ctx.frob(b, k);
        }
        LinearizedMap { coeffs: out }
    }

    /// Column `j` holds the coordinates of `φ(x^j)`.
    pub fn as_matrix(&self, ctx: &FieldCtx) -> FpMatrix {
        let columns: Vec<Vec<u32>> = (0..self.n())
            .map(|j| ctx.coeffs(self.eval(ctx, ctx.basis(j))))
            .collect();
        FpMatrix::from_columns(ctx.p(), &columns)
    }

    /// The map whose matrix is `m` (columns are images of `x^j`).
    pub fn from_matrix(ctx: &FieldCtx, m: &FpMatrix) -> Result<Self> {
        let values = (0..m.dim())
            .map(|j| ctx.from_coeffs(&m.column(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_basis_values(ctx, &values))
    }

    /// The unique additive map with `x^j ↦ values[j]`.
    pub fn from_basis_values(ctx: &FieldCtx, values: &[Elem]) -> Self {
        LinearizedMap {
            coeffs: ctx.interpolate(values),
        }
    }

    pub fn is_invertible(&self, ctx: &FieldCtx) -> bool {
        self.as_matrix(ctx).is_invertible()
    }

    pub fn invert(&self, ctx: &FieldCtx) -> Result<Self> {
        let inv = self.as_matrix(ctx).inverse().ok_or(Error::Singular)?;
        Self::from_matrix(ctx, &inv)
    }

    /// Companion exponent `e` (mod `m`) of an `F_{p^m}`-semilinear map,
    /// i.e. `L(λx) = λ^{p^e} L(x)` for `λ ∈ F_{p^m}`, or `None` if the map
    /// is not semilinear over that subfield.
    ///
    /// Equivalently `L∘t_λ∘L⁻¹ = t_{λ^{p^e}}`. Testing one generator `λ` of
    /// `F_{p^m}^*` suffices: the conjugation `t ↦ L∘t∘L⁻¹` is multiplicative
    /// and additive, and every subfield element is a power of `λ`.
    pub fn semilinear_type(&self, ctx: &FieldCtx, m: usize) -> Result<Option<usize>> {
        let lambda = ctx.subfield_generator(m)?;
        let inv = self.invert(ctx)?;
        let n = self.n();
        let conj = self
            .compose(ctx, &Self::scalar(n, lambda))
            .compose(ctx, &inv);
        let Some(mu) = conj.as_scalar() else {
            return Ok(None);
        };
        Ok((0..m).find(|&e| ctx.frob(lambda, e) == mu))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::TowerParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> FieldCtx {
        FieldCtx::new(TowerParams::new(3, 1, 3), None).unwrap()
    }

    fn random_map(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> LinearizedMap {
        LinearizedMap::from_coeffs((0..ctx.n()).map(|_| ctx.elem(rng.gen_range(0..ctx.order()))).collect())
    }

    #[test]
    fn identity_and_zero() {
        let ctx = ctx();
        let id = LinearizedMap::identity(6);
        let zero = LinearizedMap::zero(6);
        for x in ctx.elements() {
            assert_eq!(id.eval(&ctx, x), x);
            assert_eq!(zero.eval(&ctx, x), Elem::ZERO);
        }
        assert_eq!(id.as_matrix(&ctx), FpMatrix::identity(3, 6));
        assert_eq!(zero.as_matrix(&ctx).rank(), 0);
    }

    #[test]
    fn eval_table_matches_eval() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let phi = random_map(&ctx, &mut rng);
            let table = phi.eval_table(&ctx);
            assert_eq!(table.len(), 729);
            assert!(ctx.elements().all(|x| table[x.index() as usize] == phi.eval(&ctx, x)));
        }
    }

    #[test]
    fn eval_is_additive() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = random_map(&ctx, &mut rng);
        for _ in 0..100 {
            let x = ctx.elem(rng.gen_range(0..729));
            let y = ctx.elem(rng.gen_range(0..729));
            assert_eq!(
                phi.eval(&ctx, ctx.add(x, y)),
                ctx.add(phi.eval(&ctx, x), phi.eval(&ctx, y))
            );
        }
    }

    #[test]
    fn composition_matches_pointwise_on_all_points() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let phi = random_map(&ctx, &mut rng);
            let psi = random_map(&ctx, &mut rng);
            let comp = phi.compose(&ctx, &psi);
            for x in ctx.elements() {
                assert_eq!(comp.eval(&ctx, x), phi.eval(&ctx, psi.eval(&ctx, x)));
            }
            assert_eq!(
                comp.as_matrix(&ctx),
                phi.as_matrix(&ctx).mul(&psi.as_matrix(&ctx))
            );
        }
        let id = LinearizedMap::identity(6);
        let phi = random_map(&ctx, &mut rng);
        assert_eq!(id.compose(&ctx, &phi), phi);
        let f = LinearizedMap::frobenius(6, 1);
        assert_eq!(f.compose(&ctx, &f), LinearizedMap::frobenius(6, 2));
    }

    #[test]
    fn compose_is_associative() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = random_map(&ctx, &mut rng);
            let b = random_map(&ctx, &mut rng);
            let c = random_map(&ctx, &mut rng);
            assert_eq!(
                a.compose(&ctx, &b).compose(&ctx, &c),
                a.compose(&ctx, &b.compose(&ctx, &c))
            );
        }
    }

    #[test]
    fn conjugate_basics() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let a = random_map(&ctx, &mut rng);
            let b = random_map(&ctx, &mut rng);
            assert_eq!(a.conjugate(&ctx).conjugate(&ctx), a);
            assert_eq!(
                a.add(&ctx, &b).conjugate(&ctx),
                a.conjugate(&ctx).add(&ctx, &b.conjugate(&ctx))
            );
        }
        let lambda = ctx.elem(100);
        let t = LinearizedMap::scalar(6, lambda);
        assert_eq!(t.conjugate(&ctx), t);
        let beta = ctx.elem(55);
        for i in 0..6 {
            let m = LinearizedMap::monomial(6, beta, i);
            let k = (6 - i) % 6;
            assert_eq!(m.conjugate(&ctx), LinearizedMap::monomial(6, ctx.frob(beta, k), k));
        }
    }

    #[test]
    fn inverse_examples() {
        let ctx = ctx();
        let id = LinearizedMap::identity(6);
        assert_eq!(id.invert(&ctx).unwrap(), id);
        assert_eq!(
            LinearizedMap::frobenius(6, 1).invert(&ctx).unwrap(),
            LinearizedMap::frobenius(6, 5)
        );
        let trace_like = LinearizedMap::identity(6).add(&ctx, &LinearizedMap::frobenius(6, 3));
        assert_eq!(trace_like.invert(&ctx), Err(Error::Singular));
    }

    #[test]
    fn inverse_composes_to_identity() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let id = LinearizedMap::identity(6);
        let mut seen = 0;
        while seen < 50 {
            let a = random_map(&ctx, &mut rng);
            if let Ok(inv) = a.invert(&ctx) {
                assert_eq!(a.compose(&ctx, &inv), id);
                assert_eq!(inv.compose(&ctx, &a), id);
                seen += 1;
            }
        }
    }

    #[test]
    fn semilinear_types() {
        let ctx = ctx();
        // F_{q^2}-linear: coefficients only at even exponents
        let lin = LinearizedMap::from_coeffs(vec![
            ctx.elem(5),
            Elem::ZERO,
            ctx.elem(9),
            Elem::ZERO,
            Elem::ZERO,
            Elem::ZERO,
        ]);
        if lin.is_invertible(&ctx) {
            assert_eq!(lin.semilinear_type(&ctx, 2).unwrap(), Some(0));
        }
        assert_eq!(LinearizedMap::frobenius(6, 1).semilinear_type(&ctx, 2).unwrap(), Some(1));
        let ctx9 = FieldCtx::new(TowerParams::new(3, 2, 3), None).unwrap();
        let n = ctx9.n();
        for k in 0..n {
            assert_eq!(
                LinearizedMap::frobenius(n, k).semilinear_type(&ctx9, 4).unwrap(),
                Some(k % 4)
            );
        }
        // x + g x^3 mixes companion exponents 0 and 1
        let mixed = LinearizedMap::identity(6).add(&ctx, &LinearizedMap::monomial(6, ctx.generator(), 1));
        if mixed.is_invertible(&ctx) {
            assert_eq!(mixed.semilinear_type(&ctx, 2).unwrap(), None);
        }
    }
}
