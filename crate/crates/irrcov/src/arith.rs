//! Small integer helpers shared across the crate.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as (prime, multiplicity) pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// p-adic valuation: largest e with p^e | n.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

pub fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Multiplicative order of u modulo m. Requires gcd(u, m) = 1.
pub fn mod_order(u: u64, m: u64) -> u64 {
    debug_assert_eq!(gcd(u, m), 1);
    if m == 1 {
        return 1;
    }
    // Start from the group order phi(m) and strip prime factors while the
    // power stays 1.
    let phi = euler_phi(m);
    let mut ord = phi;
    for (p, _) in factorize(phi) {
        while ord % p == 0 && mod_pow(u, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

pub fn euler_phi(n: u64) -> u64 {
    let mut out = n;
    for (p, _) in factorize(n) {
        out = out / p * (p - 1);
    }
    out
}
