//! Dense polynomials over F_p, just enough to pick and validate defining
//! polynomials for residue fields.

use super::prime_factors;

type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // p is prime: a^(p-2)
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let f = trim(f.to_vec());
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod_p(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        let shift = top - df;
        for (i, &fi) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * fi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&prod, f, p)
}

fn pow_mod(base: &[u64], mut e: u128, f: &[u64], p: u64) -> Poly {
    let mut acc = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(&b, &b, f, p);
        }
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Rabin's irreducibility test for a monic polynomial (little-endian coefficients).
pub fn is_irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let f: Poly = trim(f.iter().map(|c| c % p).collect());
    if f.len() < 2 {
        return false;
    }
    let d = f.len() - 1;
    let x = vec![0, 1];
    let q = p as u128;
    let x_qd = pow_mod(&x, q.pow(d as u32), &f, p);
    if sub(&x_qd, &rem(&x, &f, p), p) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_factors(d as u128) {
        let k = d / r as usize;
        let x_qk = pow_mod(&x, q.pow(k as u32), &f, p);
        let g = gcd(&sub(&x_qk, &x, p), &f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The lexicographically first monic primitive polynomial of degree `d` over F_p.
///
/// "Primitive" means the class of `x` generates the multiplicative group of
/// F_p[x]/(f); such an `f` is automatically irreducible. Coefficients are
/// little-endian with the leading 1 included.
pub fn find_primitive_poly(p: u64, d: usize) -> Vec<u64> {
    let order = (p as u128).pow(d as u32) - 1;
    let factors = prime_factors(order);
    let x = vec![0, 1];
    let mut low = vec![0u64; d];
    loop {
        // advance the base-p counter; constant term must be nonzero
        let mut i = 0;
        loop {
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
            assert!(i < d, "no primitive polynomial found for p={p}, d={d}");
        }
        if low[0] == 0 {
            continue;
        }
        let mut f = low.clone();
        f.push(1);
        let one = rem(&[1], &f, p);
        if pow_mod(&x, order, &f, p) != one {
            continue;
        }
        if factors
            .iter()
            .all(|&r| pow_mod(&x, order / r, &f, p) != one)
        {
            return f;
        }
    }
}
