//! The ambient field `F_{p^n}`, `n = 2hℓ`, and its tower of subfields
//! `F_p ⊂ F_q ⊂ F_{q^2}`, `F_{q^ℓ} ⊂ F_{q^{2ℓ}}` with `q = p^h`.
//!
//! Elements live in a single extension `F_p[x]/(m)`. Subfields are not
//! separate types: membership is the Frobenius fixed-point test
//! `a^{p^k} = a`. All arithmetic is table driven (discrete log/exp tables,
//! split addition tables, one Frobenius table per exponent), which is why
//! the context carries a size bound.

use std::fmt;

use crate::arith;
use crate::error::{Error, Result};
use crate::fp_poly;

/// Default upper bound on `p^n`.
pub const DEFAULT_SIZE_BOUND: u64 = 1 << 20;

/// An element of `F_{p^n}`.
///
/// The wrapped integer is `Σ c_i p^i` for the coordinate vector `c` in the
/// polynomial basis `1, x, …, x^{n-1}`. The derived order is therefore the
/// lexicographic order on coefficient vectors read from `c_{n-1}` down to
/// `c_0`; every "least element" choice in this crate uses it.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// The integer encoding `Σ c_i p^i`.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn from_raw(index: u32) -> Elem {
        Elem(index)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Parameters of the tower. `n = 2hℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerParams {
    pub p: u32,
    pub h: u32,
    pub ell: u32,
    pub d: Option<u32>,
    pub size_bound: u64,
}

impl TowerParams {
    pub fn new(p: u32, h: u32, ell: u32) -> Self {
        TowerParams {
            p,
            h,
            ell,
            d: None,
            size_bound: DEFAULT_SIZE_BOUND,
        }
    }

    /// Builds parameters from `q = p^h`.
    pub fn from_q(q: u64, ell: u32) -> Result<Self> {
        let (p, h) = arith::prime_power(q).ok_or_else(|| {
            Error::InvalidParams(format!("q = {q} is not a prime power"))
        })?;
        if p == 2 {
            return Err(Error::NotOddPrime(p));
        }
        Ok(TowerParams::new(p, h, ell))
    }

    pub fn with_d(mut self, d: u32) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_size_bound(mut self, bound: u64) -> Self {
        self.size_bound = bound;
        self
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.h)
    }

    pub fn n(&self) -> u32 {
        2 * self.h * self.ell
    }

    /// `p^n`, or `None` if it does not fit in 64 bits.
    pub fn order(&self) -> Option<u64> {
        arith::checked_pow(self.p as u64, self.n()).and_then(|v| u64::try_from(v).ok())
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 2 || !arith::is_prime(self.p as u64) {
            return Err(Error::NotOddPrime(self.p));
        }
        if self.h == 0 {
            return Err(Error::InvalidParams("h must be positive".into()));
        }
        if self.ell < 2 {
            return Err(Error::InvalidParams(format!("ell = {} must exceed 1", self.ell)));
        }
        if let Some(d) = self.d {
            if d == 0 || d >= 2 * self.ell {
                return Err(Error::InvalidParams(format!(
                    "d = {d} must satisfy 0 < d < 2*ell = {}",
                    2 * self.ell
                )));
            }
            if arith::gcd(self.ell as u128, d as u128) != 1 {
                return Err(Error::InvalidParams(format!(
                    "gcd(ell, d) = gcd({}, {d}) must be 1",
                    self.ell
                )));
            }
            if (self.ell + d) % 2 == 0 {
                return Err(Error::InvalidParams(format!(
                    "ell + d = {} must be odd (no element a != 0 may satisfy a + a^(q^ell) = a + a^(q^d) = 0)",
                    self.ell + d
                )));
            }
        }
        match self.order() {
            Some(order) if order <= self.size_bound => Ok(()),
            order => Err(Error::SizeBoundExceeded {
                order: order.unwrap_or(u64::MAX),
                bound: self.size_bound,
            }),
        }
    }
}

/// A constructed field context. Immutable; share it behind an `Arc`.
pub struct FieldCtx {
    params: TowerParams,
    p: u32,
    n: usize,
    order: u32,
    modulus: Vec<u32>,
    generator: Elem,
    /// `exp[i] = g^i` for `i < 2(N-1)`, doubled so products need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    add_base: u32,
    add_tab: Vec<u32>,
    neg_tab: Vec<u32>,
    /// `frob_tab[k * N + a] = a^{p^k}`.
    frob_tab: Vec<u32>,
    /// Inverse of the Moore matrix `M[j][i] = (x^j)^{p^i}` for interpolation.
    moore_inv: Vec<Elem>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("h", &self.params.h)
            .field("ell", &self.params.ell)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

fn digits(mut code: u64, p: u32, n: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// Lexicographically least monic irreducible polynomial of degree `n` over `F_p`
/// (lower coefficients ordered by `Σ c_i p^i`).
pub fn least_irreducible(p: u32, n: usize) -> Vec<u32> {
    let count = (p as u64).pow(n as u32);
    for code in 0..count {
        let mut m = digits(code, p, n);
        if m[0] == 0 {
            continue;
        }
        m.push(1);
        if fp_poly::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    /// Builds the field. With no override the modulus is the least
    /// irreducible polynomial of degree `n`; the generator is the least
    /// element of multiplicative order `p^n - 1`.
    pub fn new(params: TowerParams, modulus_override: Option<&[u32]>) -> Result<FieldCtx> {
        params.validate()?;
        let p = params.p;
        let n = params.n() as usize;
        let order = params.order().expect("validated") as u32;

        let modulus = match modulus_override {
            Some(m) => {
                let m = fp_poly::trim(m.iter().map(|&c| c % p).collect());
                if m.len() != n + 1 {
                    return Err(Error::InvalidParams(format!(
                        "modulus must have degree {n}, got {}",
                        m.len() as isize - 1
                    )));
                }
                if !fp_poly::is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                // normalize to monic
                let lead_inv = arith::pow_mod(m[n] as u64, p as u64 - 2, p as u64);
                m.iter()
                    .map(|&c| (c as u64 * lead_inv % p as u64) as u32)
                    .collect()
            }
            None => least_irreducible(p, n),
        };

        let group = order as u64 - 1;
        let primes = arith::prime_divisors(group);
        let one = vec![1u32];
        let gen_poly = (2..order as u64)
            .map(|code| fp_poly::trim(digits(code, p, n)))
            .find(|g| {
                primes
                    .iter()
                    .all(|&r| fp_poly::powmod(g, group / r, &modulus, p) != one)
            })
            .expect("a finite field has a primitive element");
        let generator = Elem(encode(&gen_poly, p));

        let mut exp = vec![0u32; 2 * group as usize];
        let mut log = vec![0u32; order as usize];
        let mut cur = vec![1u32];
        for i in 0..group as usize {
            let mut c = cur.clone();
            c.resize(n, 0);
            let code = encode(&c, p);
            exp[i] = code;
            exp[i + group as usize] = code;
            log[code as usize] = i as u32;
            cur = fp_poly::mulmod(&cur, &gen_poly, &modulus, p);
        }

        let half_digits = n.div_ceil(2);
        let add_base = p.pow(half_digits as u32);
        let mut add_tab = vec![0u32; (add_base as usize) * (add_base as usize)];
        for a in 0..add_base {
            let da = digits(a as u64, p, half_digits);
            for b in 0..add_base {
                let db = digits(b as u64, p, half_digits);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add_tab[(a * add_base + b) as usize] = encode(&s, p);
            }
        }
        let neg_tab = (0..order)
            .map(|a| {
                let d: Vec<u32> = digits(a as u64, p, n).iter().map(|&c| (p - c) % p).collect();
                encode(&d, p)
            })
            .collect();

        let mut ctx = FieldCtx {
            params,
            p,
            n,
            order,
            modulus,
            generator,
            exp,
            log,
            add_base,
            add_tab,
            neg_tab,
            frob_tab: Vec::new(),
            moore_inv: Vec::new(),
        };

        let mut frob_tab = vec![0u32; n * order as usize];
        for k in 0..n {
            let pk = arith::pow_mod(p as u64, k as u64, group);
            for a in 1..order as usize {
                let l = ctx.log[a] as u64 * pk % group;
                frob_tab[k * order as usize + a] = ctx.exp[l as usize];
            }
        }
        ctx.frob_tab = frob_tab;

        let moore: Vec<Elem> = (0..n)
            .flat_map(|j| {
                let basis = ctx.basis(j);
                (0..n).map(move |i| (basis, i))
            })
            .map(|(b, i)| ctx.frob(b, i))
            .collect();
        ctx.moore_inv = ctx
            .invert_matrix(&moore, n)
            .expect("Moore matrix of a basis is invertible");
        Ok(ctx)
    }

    pub fn params(&self) -> &TowerParams {
        &self.params
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.params.h
    }

    pub fn ell(&self) -> u32 {
        self.params.ell
    }

    pub fn d(&self) -> Option<u32> {
        self.params.d
    }

    /// Degree `n` of the field over `F_p`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `p^n`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn q(&self) -> u64 {
        self.params.q()
    }

    /// Monic modulus, coefficients `c_0..=c_n`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// Frobenius index for the power `q^k` (k may be negative), reduced mod `n`.
    pub fn qexp(&self, k: i64) -> usize {
        (self.params.h as i64 * k).rem_euclid(self.n as i64) as usize
    }

    /// Basis element `x^j` of the polynomial basis.
    pub fn basis(&self, j: usize) -> Elem {
        Elem(self.p.pow(j as u32))
    }

    /// Element with the given integer encoding; panics when out of range.
    pub fn elem(&self, index: u32) -> Elem {
        assert!(index < self.order, "element index out of range");
        Elem(index)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.n || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParams(format!(
                "element needs at most {} coefficients in [0, {})",
                self.n, self.p
            )));
        }
        Ok(Elem(encode(coeffs, self.p)))
    }

    /// Little-endian coordinate vector of length `n`.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        digits(a.0 as u64, self.p, self.n)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(Elem)
    }

    /// `0, g^0, g^1, …, g^{N-2}`: the order used for reproducible witnesses.
    pub fn elements_by_power(&self) -> impl Iterator<Item = Elem> + '_ {
        std::iter::once(Elem::ZERO).chain((0..self.order as usize - 1).map(|i| Elem(self.exp[i])))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let base = self.add_base;
        let (ah, al) = (a.0 / base, a.0 % base);
        let (bh, bl) = (b.0 / base, b.0 % base);
        let lo = self.add_tab[(al * base + bl) as usize];
        let hi = self.add_tab[(ah * base + bh) as usize];
        Elem(hi * base + lo)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg_tab[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        let group = self.order - 1;
        let l = self.log[a.0 as usize];
        Ok(Elem(self.exp[((group - l) % group) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`, with `0^0 = 1`.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let group = self.order as u64 - 1;
        let l = self.log[a.0 as usize] as u64 * (e % group) % group;
        Elem(self.exp[l as usize])
    }

    /// `a^e` for a possibly negative exponent; `a` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            return Ok(self.pow(a, e as u64));
        }
        let group = self.order as i64 - 1;
        Ok(self.pow(self.inv(a)?, (-e).rem_euclid(group) as u64))
    }

    /// `a^{p^k}`, `k` reduced mod `n`.
    #[inline]
    pub fn frob(&self, a: Elem, k: usize) -> Elem {
        let k = k % self.n;
        Elem(self.frob_tab[k * self.order as usize + a.0 as usize])
    }

    /// `a^{q^k}`, `k` may be negative.
    #[inline]
    pub fn frob_q(&self, a: Elem, k: i64) -> Elem {
        self.frob(a, self.qexp(k))
    }

    /// Discrete log to the fixed generator.
    pub fn log(&self, a: Elem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.log[a.0 as usize] as u64)
    }

    /// `g^e`.
    pub fn exp(&self, e: u64) -> Elem {
        Elem(self.exp[(e % (self.order as u64 - 1)) as usize])
    }

    /// Square test in the whole field: `a^{(p^n-1)/2} = 1`.
    pub fn is_square(&self, a: Elem) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(self.pow(a, (self.order as u64 - 1) / 2) == Elem::ONE)
    }

    /// `a ∈ F_{p^m}` (requires `m | n`).
    pub fn in_subfield(&self, a: Elem, m: usize) -> bool {
        self.frob(a, m) == a
    }

    /// Order `p^m` of the subfield of degree `m`.
    pub fn subfield_order(&self, m: usize) -> u64 {
        (self.p as u64).pow(m as u32)
    }

    fn check_subfield_degree(&self, m: usize) -> Result<()> {
        if m == 0 || self.n % m != 0 {
            return Err(Error::PreconditionFailed(format!(
                "{m} does not divide the degree {}",
                self.n
            )));
        }
        Ok(())
    }

    /// A generator of `F_{p^m}^*`: `g^{(p^n-1)/(p^m-1)}`.
    pub fn subfield_generator(&self, m: usize) -> Result<Elem> {
        self.check_subfield_degree(m)?;
        let group = self.order as u64 - 1;
        Ok(self.exp(group / (self.subfield_order(m) - 1)))
    }

    /// Square test inside the subfield `F_{p^m}`: `a^{(p^m-1)/2} = 1`.
    pub fn is_square_in_subfield(&self, a: Elem, m: usize) -> Result<bool> {
        self.check_subfield_degree(m)?;
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        if !self.in_subfield(a, m) {
            return Err(Error::NotInSubfield(self.subfield_order(m)));
        }
        Ok(self.pow(a, (self.subfield_order(m) - 1) / 2) == Elem::ONE)
    }

    /// Square root of `a` inside `F_{p^m}` by Tonelli-Shanks. Of the two
    /// roots the one with the smaller index is returned.
    pub fn sqrt_in_subfield(&self, a: Elem, m: usize) -> Result<Elem> {
        self.check_subfield_degree(m)?;
        if !self.in_subfield(a, m) {
            return Err(Error::NotInSubfield(self.subfield_order(m)));
        }
        if a.is_zero() {
            return Ok(Elem::ZERO);
        }
        if !self.is_square_in_subfield(a, m)? {
            return Err(Error::NoSquareRoot);
        }
        let group = self.subfield_order(m) - 1;
        let mut s = 0u32;
        let mut t = group;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        // the subfield generator is a nonsquare there
        let z = self.subfield_generator(m)?;
        let mut c = self.pow(z, t);
        let mut x = self.pow(a, t.div_ceil(2));
        let mut b = self.pow(a, t);
        let mut e = s;
        while b != Elem::ONE {
            let mut i = 0u32;
            let mut bb = b;
            while bb != Elem::ONE {
                bb = self.mul(bb, bb);
                i += 1;
            }
            let mut f = c;
            for _ in 0..(e - i - 1) {
                f = self.mul(f, f);
            }
            x = self.mul(x, f);
            c = self.mul(f, f);
            b = self.mul(b, c);
            e = i;
        }
        let other = self.neg(x);
        Ok(x.min(other))
    }

    /// All nonzero `x` with `x^k = a`, in index order.
    pub fn solve_power_eq(&self, k: u64, a: Elem) -> Result<Vec<Elem>> {
        if a.is_zero() {
            return Err(Error::ZeroInput);
        }
        if k == 0 {
            return Err(Error::PreconditionFailed("exponent must be positive".into()));
        }
        let group = self.order as u64 - 1;
        let la = self.log(a)?;
        let (g, _) = arith::ext_gcd_mod(k % group, group);
        let g = if k % group == 0 { group } else { g };
        if la % g != 0 {
            return Ok(Vec::new());
        }
        let modulus = group / g;
        let t0 = if modulus == 1 {
            0
        } else {
            let (_, kinv) = arith::ext_gcd_mod((k / g) % modulus, modulus);
            ((la / g) as u128 * kinv as u128 % modulus as u128) as u64
        };
        let mut out: Vec<Elem> = (0..g).map(|i| self.exp(t0 + i * modulus)).collect();
        out.sort();
        Ok(out)
    }

    /// The least `ω` (by index) with `ω^q = -ω`, `ω ≠ 0`. For odd `ℓ` it
    /// also satisfies `ω^{q^ℓ} = -ω`, and `σ = ω²` is a nonsquare of `F_q`.
    pub fn find_omega(&self) -> Result<Elem> {
        if self.params.ell % 2 == 0 {
            return Err(Error::PreconditionFailed(format!(
                "ell = {} must be odd",
                self.params.ell
            )));
        }
        let h = self.params.h as usize;
        let omega = self
            .elements()
            .skip(1)
            .find(|&w| self.frob(w, h) == self.neg(w))
            .ok_or_else(|| Error::NoSuchElement("omega with omega^q = -omega".into()))?;
        let sigma = self.mul(omega, omega);
        if self.is_square_in_subfield(sigma, h)? {
            return Err(Error::VerificationFailed(
                "omega^2 is a square in F_q".into(),
            ));
        }
        Ok(omega)
    }

    /// Gauss-Jordan inversion of an `n×n` matrix over the whole field.
    pub(crate) fn invert_matrix(&self, m: &[Elem], n: usize) -> Option<Vec<Elem>> {
        let mut a = m.to_vec();
        let mut inv: Vec<Elem> = (0..n * n)
            .map(|k| if k / n == k % n { Elem::ONE } else { Elem::ZERO })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                    inv.swap(pivot * n + c, col * n + c);
                }
            }
            let pinv = self.inv(a[col * n + col]).ok()?;
            for c in 0..n {
                a[col * n + c] = self.mul(a[col * n + c], pinv);
                inv[col * n + c] = self.mul(inv[col * n + c], pinv);
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col];
                for c in 0..n {
                    a[r * n + c] = self.sub(a[r * n + c], self.mul(f, a[col * n + c]));
                    inv[r * n + c] = self.sub(inv[r * n + c], self.mul(f, inv[col * n + c]));
                }
            }
        }
        Some(inv)
    }

    /// Coefficients `β` of the unique p-polynomial with `Σ β_i (x^j)^{p^i} = values[j]`.
    pub(crate) fn interpolate(&self, values: &[Elem]) -> Vec<Elem> {
        let n = self.n;
        // β = (M^{-1}) v with M[j][i] = (x^j)^{p^i}
        (0..n)
            .map(|i| {
                (0..n).fold(Elem::ZERO, |acc, j| {
                    self.add(acc, self.mul(self.moore_inv[i * n + j], values[j]))
                })
            })
            .collect()
    }
}

/// `gcd(q^{2ℓ}-1, q^{ℓ+d}-1)` and `gcd(q^ℓ+1, q^d+1)`. For `ℓ + d` odd and
/// `gcd(ℓ, d) = 1` these must be `q-1` and `2`; anything else is reported as
/// a verification failure.
pub fn gcd_identities(q: u64, ell: u32, d: u32) -> Result<(u128, u128)> {
    if arith::gcd(ell as u128, d as u128) != 1 || (ell + d) % 2 == 0 {
        return Err(Error::PreconditionFailed(format!(
            "need gcd(ell, d) = 1 and ell + d odd, got ell = {ell}, d = {d}"
        )));
    }
    let pw = |e: u32| {
        arith::checked_pow(q, e)
            .ok_or_else(|| Error::PreconditionFailed(format!("q^{e} overflows")))
    };
    let g1 = arith::gcd(pw(2 * ell)? - 1, pw(ell + d)? - 1);
    let g2 = arith::gcd(pw(ell)? + 1, pw(d)? + 1);
    if g1 != q as u128 - 1 {
        return Err(Error::VerificationFailed(format!("gcd = {g1}, expected q - 1 = {}", q - 1)));
    }
    if g2 != 2 {
        return Err(Error::VerificationFailed(format!("gcd = {g2}, expected 2")));
    }
    Ok((g1, g2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f729() -> FieldCtx {
        FieldCtx::new(TowerParams::new(3, 1, 3), None).unwrap()
    }

    #[test]
    fn field_of_729() {
        let ctx = f729();
        assert_eq!(ctx.order(), 729);
        assert_eq!(ctx.n(), 6);
        assert!(fp_poly::is_irreducible(ctx.modulus(), 3));
    }

    #[test]
    fn reducible_override_rejected() {
        let err = FieldCtx::new(TowerParams::new(3, 1, 3), Some(&[1, 0, 0, 0, 0, 0, 1])).unwrap_err();
        assert_eq!(err, Error::ReducibleModulus(3));
    }

    #[test]
    fn x6_x_2_override_matches_irreducibility_oracle() {
        // x^6 + x + 2 over F_3: decide with trial division, then compare.
        let m = [2u32, 1, 0, 0, 0, 0, 1];
        let oracle = {
            let mut irreducible = true;
            'outer: for deg in 1..=3usize {
                for code in 0..3usize.pow(deg as u32) {
                    let mut f: Vec<u32> = (0..deg).map(|i| ((code / 3usize.pow(i as u32)) % 3) as u32).collect();
                    f.push(1);
                    if fp_poly::rem(&m, &f, 3).is_empty() {
                        irreducible = false;
                        break 'outer;
                    }
                }
            }
            irreducible
        };
        let res = FieldCtx::new(TowerParams::new(3, 1, 3), Some(&m));
        if oracle {
            assert!(res.is_ok());
        } else {
            assert_eq!(res.unwrap_err(), Error::ReducibleModulus(3));
        }
    }

    #[test]
    fn even_characteristic_rejected() {
        assert_eq!(
            FieldCtx::new(TowerParams::new(2, 1, 3), None).unwrap_err(),
            Error::NotOddPrime(2)
        );
        assert_eq!(
            FieldCtx::new(TowerParams::new(9, 1, 3), None).unwrap_err(),
            Error::NotOddPrime(9)
        );
    }

    #[test]
    fn size_bound_enforced() {
        let err = FieldCtx::new(TowerParams::new(3, 1, 3).with_size_bound(700), None).unwrap_err();
        assert!(matches!(err, Error::SizeBoundExceeded { order: 729, bound: 700 }));
    }

    #[test]
    fn lemma_gate_on_d() {
        assert!(TowerParams::new(3, 1, 3).with_d(1).validate().is_err());
        assert!(TowerParams::new(3, 1, 3).with_d(3).validate().is_err());
        assert!(TowerParams::new(3, 1, 3).with_d(2).validate().is_ok());
    }

    #[test]
    fn generator_has_full_order() {
        let ctx = f729();
        let g = ctx.generator();
        let mut x = Elem::ONE;
        for i in 1..728 {
            x = ctx.mul(x, g);
            assert_ne!(x, Elem::ONE, "order {i}");
        }
        assert_eq!(ctx.mul(x, g), Elem::ONE);
    }

    #[test]
    fn arithmetic_against_polynomial_oracle() {
        let ctx = f729();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let a = ctx.elem(rng.gen_range(0..729));
            let b = ctx.elem(rng.gen_range(0..729));
            let prod = fp_poly::mulmod(
                &fp_poly::trim(ctx.coeffs(a)),
                &fp_poly::trim(ctx.coeffs(b)),
                ctx.modulus(),
                3,
            );
            let mut prod = prod;
            prod.resize(6, 0);
            assert_eq!(ctx.coeffs(ctx.mul(a, b)), prod);
            let sum: Vec<u32> = ctx.coeffs(a).iter().zip(ctx.coeffs(b)).map(|(x, y)| (x + y) % 3).collect();
            assert_eq!(ctx.coeffs(ctx.add(a, b)), sum);
            assert_eq!(ctx.add(a, ctx.neg(a)), Elem::ZERO);
        }
    }

    #[test]
    fn frobenius_properties() {
        let ctx = f729();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = ctx.elem(rng.gen_range(0..729));
            let y = ctx.elem(rng.gen_range(0..729));
            assert_eq!(ctx.frob(x, 0), x);
            let (a, b) = (rng.gen_range(0..6), rng.gen_range(0..6));
            assert_eq!(ctx.frob(ctx.frob(x, a), b), ctx.frob(x, (a + b) % 6));
            assert_eq!(ctx.frob(x, 1), ctx.pow(x, 3));
            for k in 0..6 {
                assert_eq!(ctx.frob(ctx.mul(x, y), k), ctx.mul(ctx.frob(x, k), ctx.frob(y, k)));
                assert_eq!(ctx.frob(ctx.add(x, y), k), ctx.add(ctx.frob(x, k), ctx.frob(y, k)));
            }
        }
        for c in 0..3 {
            let x = ctx.from_int(c);
            assert_eq!(ctx.frob(x, 1), x);
        }
    }

    #[test]
    fn squares() {
        let ctx = f729();
        let g = ctx.generator();
        assert!(!ctx.is_square(g).unwrap());
        assert!(ctx.is_square(ctx.mul(g, g)).unwrap());
        assert_eq!(ctx.is_square(Elem::ZERO), Err(Error::ZeroInput));
        let nonsquares = ctx.elements().skip(1).filter(|&x| !ctx.is_square(x).unwrap()).count();
        assert_eq!(nonsquares, 364);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x = ctx.elem(rng.gen_range(1..729));
            let y = ctx.elem(rng.gen_range(1..729));
            let sx = ctx.is_square(x).unwrap();
            let sy = ctx.is_square(y).unwrap();
            assert_eq!(ctx.is_square(ctx.mul(x, y)).unwrap(), sx == sy);
        }
    }

    #[test]
    fn subfield_sizes() {
        for (p, h, ell) in [(3, 1, 3), (5, 1, 3), (3, 2, 3)] {
            let ctx = FieldCtx::new(TowerParams::new(p, h, ell), None).unwrap();
            let q = ctx.q();
            for k in [1u32, 2, ell] {
                let m = (h * k) as usize;
                let count = ctx.elements().filter(|&x| ctx.in_subfield(x, m)).count() as u64;
                assert_eq!(count, q.pow(k));
            }
        }
    }

    #[test]
    fn power_equation_matches_exhaustive_scan() {
        let ctx = f729();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in [1u64, 2, 3, 4, 7, 8, 13, 26, 28, 56, 364, 728, 1000] {
            for _ in 0..6 {
                let a = ctx.elem(rng.gen_range(1..729));
                let fast = ctx.solve_power_eq(k, a).unwrap();
                let scan: Vec<Elem> = ctx.elements().skip(1).filter(|&x| ctx.pow(x, k) == a).collect();
                assert_eq!(fast, scan, "k = {k}");
                let g = arith::gcd(k as u128, 728) as usize;
                assert!(fast.is_empty() || fast.len() == g);
            }
        }
        let a = ctx.elem(17);
        assert_eq!(ctx.solve_power_eq(1, a).unwrap(), vec![a]);
        assert_eq!(ctx.solve_power_eq(2, Elem::ZERO), Err(Error::ZeroInput));
    }

    #[test]
    fn omega_properties() {
        for (p, h, ell) in [(3, 1, 3), (5, 1, 3), (3, 2, 3), (7, 1, 3)] {
            let ctx = FieldCtx::new(TowerParams::new(p, h, ell), None).unwrap();
            let w = ctx.find_omega().unwrap();
            let hh = h as usize;
            assert_eq!(ctx.add(ctx.frob(w, hh), w), Elem::ZERO);
            assert_eq!(ctx.frob_q(w, ell as i64), ctx.neg(w));
            assert!(!ctx.in_subfield(w, hh));
            let sigma = ctx.mul(w, w);
            assert!(ctx.in_subfield(sigma, hh));
            assert!(!ctx.is_square_in_subfield(sigma, hh).unwrap());
        }
        let even = FieldCtx::new(TowerParams::new(3, 1, 2), None).unwrap();
        assert!(matches!(even.find_omega(), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn tonelli_shanks_roots() {
        let ctx = FieldCtx::new(TowerParams::new(5, 1, 3), None).unwrap();
        for x in ctx.elements().filter(|&x| ctx.in_subfield(x, 2)) {
            let sq = ctx.mul(x, x);
            let r = ctx.sqrt_in_subfield(sq, 2).unwrap();
            assert_eq!(ctx.mul(r, r), sq);
        }
    }

    #[test]
    fn gcd_identity_values() {
        assert_eq!(gcd_identities(3, 3, 2).unwrap(), (2, 2));
        assert_eq!(gcd_identities(5, 3, 2).unwrap(), (4, 2));
        assert!(matches!(gcd_identities(3, 3, 1), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn interpolation_recovers_frobenius() {
        let ctx = f729();
        let values: Vec<Elem> = (0..6).map(|j| ctx.frob(ctx.basis(j), 2)).collect();
        let beta = ctx.interpolate(&values);
        for (i, b) in beta.iter().enumerate() {
            assert_eq!(*b, if i == 2 { Elem::ONE } else { Elem::ZERO });
        }
    }
}
