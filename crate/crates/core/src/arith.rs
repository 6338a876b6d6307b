//! Integer helpers: gcd, primality, factorization, prime-power splitting.

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `q = p^h` with `p` prime, or returns `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let divs = prime_divisors(q);
    if divs.len() != 1 {
        return None;
    }
    let p = divs[0];
    let mut h = 0u32;
    let mut r = q;
    while r > 1 {
        r /= p;
        h += 1;
    }
    Some((p as u32, h))
}

/// `base^exp` in `u128`, `None` on overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u128> {
    (base as u128).checked_pow(exp)
}

/// `base^exp mod m`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m = m as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Extended Euclid: returns `(g, x)` with `a*x ≡ g (mod m)`.
pub fn ext_gcd_mod(a: u64, m: u64) -> (u64, u64) {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    let x = old_s.rem_euclid(m as i128) as u64;
    (old_r as u64, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(4), Some((2, 2)));
    }

    #[test]
    fn divisors_of_728() {
        assert_eq!(prime_divisors(728), vec![2, 7, 13]);
    }

    #[test]
    fn ext_gcd_inverse() {
        let (g, x) = ext_gcd_mod(3, 28);
        assert_eq!(g, 1);
        assert_eq!(3 * x % 28, 1);
        let (g, _) = ext_gcd_mod(4, 28);
        assert_eq!(g, 4);
    }
}
