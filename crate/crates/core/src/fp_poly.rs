//! Dense polynomials over a prime field, little-endian coefficient vectors.
//!
//! Only what field construction needs: reduction, gcd, and the Ben-Or
//! irreducibility test.

pub(crate) fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    crate::arith::pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let m = trim(m.to_vec());
    assert!(!m.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = r[dr] as u64 * lead_inv % p as u64;
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate() {
            let sub = c * mc as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut base = rem(a, m, p);
    let mut acc = rem(&[1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: `m` of degree `n` is irreducible iff `gcd(x^{p^k} - x, m) = 1`
/// for every `1 <= k <= n/2`.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let m = trim(m.to_vec());
    if m.len() < 2 {
        return false;
    }
    let n = m.len() - 1;
    let x = vec![0, 1];
    let mut r = rem(&x, &m, p);
    for _ in 1..=n / 2 {
        r = powmod(&r, p as u64, &m, p);
        let g = gcd(&sub(&r, &x, p), &m, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial division by every monic polynomial of degree 1..=n/2.
    fn irreducible_by_trial_division(m: &[u32], p: u32) -> bool {
        let n = m.len() - 1;
        for deg in 1..=n / 2 {
            let count = (p as usize).pow(deg as u32);
            for code in 0..count {
                let mut f = Vec::with_capacity(deg + 1);
                let mut c = code;
                for _ in 0..deg {
                    f.push((c % p as usize) as u32);
                    c /= p as usize;
                }
                f.push(1);
                if rem(m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn ben_or_agrees_with_trial_division_degree_4_over_f3() {
        for code in 0..81u32 {
            let mut m = Vec::new();
            let mut c = code;
            for _ in 0..4 {
                m.push(c % 3);
                c /= 3;
            }
            m.push(1);
            assert_eq!(is_irreducible(&m, 3), irreducible_by_trial_division(&m, 3), "{m:?}");
        }
    }

    #[test]
    fn x6_plus_1_is_reducible_over_f3() {
        // (x^2 + 1)^3
        assert!(!is_irreducible(&[1, 0, 0, 0, 0, 0, 1], 3));
    }

    #[test]
    fn gcd_of_coprime_is_unit() {
        let g = gcd(&[1, 1], &[2, 1], 3);
        assert_eq!(g.len(), 1);
    }
}
