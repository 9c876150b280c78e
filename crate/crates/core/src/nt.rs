//! Small integer number theory shared by the field and census code.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut k = 3u64;
    while k.saturating_mul(k) <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2u64;
    while k.saturating_mul(k) <= n {
        if n % k == 0 {
            out.push(k);
            while n % k == 0 {
                n /= k;
            }
        }
        k += if k == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// floor(sqrt(n)), exact.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let sq_le = |r: u64| r.checked_mul(r).is_some_and(|s| s <= n);
    let mut r = (n as f64).sqrt() as u64;
    while !sq_le(r) {
        r -= 1;
    }
    while sq_le(r + 1) {
        r += 1;
    }
    r
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// 2-adic valuation; `ord2(0)` is `u32::MAX`.
pub fn ord2(n: i64) -> u32 {
    if n == 0 {
        u32::MAX
    } else {
        n.unsigned_abs().trailing_zeros()
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Write q = p^m, if q is an odd prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 3 || q % 2 == 0 {
        return None;
    }
    let p = *prime_factors(q).first()?;
    let mut m = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}
