//! Scalar arithmetic in Z/m.

use std::collections::BTreeMap;
use std::fmt;

/// Largest supported modulus; keeps every product of two residues inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd on non-negative integers: returns `(g, s, t)` with `s*a + t*b = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

#[inline]
pub fn reduce(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

#[inline]
pub fn add(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64, m: u64) -> u64 {
    (a * b) % m
}

#[inline]
pub fn neg(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

pub fn pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, m);
        }
        base = mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `a` is a unit.
pub fn inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = ext_gcd(a as i128, m as i128);
    (g == 1).then(|| reduce(s, m))
}

/// Signed power of a unit: `a^e` for any integer `e`.
pub fn pow_signed(a: u64, e: i64, m: u64) -> Option<u64> {
    if e >= 0 {
        Some(pow(a, e as u64, m))
    } else {
        inv(a, m).map(|ai| pow(ai, e.unsigned_abs(), m))
    }
}

/// A unit `u` with `u * a = gcd(a, m) (mod m)`.
pub fn normalizing_unit(a: u64, m: u64) -> u64 {
    debug_assert!(a != 0 && a < m);
    let g = gcd(a, m);
    let (a1, m1) = (a / g, m / g);
    let base = if m1 == 1 {
        1
    } else {
        inv(a1 % m1, m1).expect("coprime after dividing gcd")
    };
    let mut u = base;
    while gcd(u, m) != 1 {
        u += m1;
    }
    u % m
}

/// Prime factorisation as `(p, e)` pairs in increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// p-adic valuation of a nonzero residue.
pub fn valuation(mut a: u64, p: u64) -> u32 {
    let mut v = 0;
    while a != 0 && a.is_multiple_of(p) {
        a /= p;
        v += 1;
    }
    v
}

/// The CRT idempotent for the factor `q` of `m` (`q` coprime to `m/q`):
/// congruent to 1 mod `q` and to 0 mod `m/q`.
pub fn crt_idempotent(q: u64, m: u64) -> u64 {
    let r = m / q;
    if r == 1 {
        return 1 % m;
    }
    // r * (r^{-1} mod q)
    let ri = inv(r % q, q).expect("coprime CRT factors");
    mul(r % m, ri, m)
}

/// Order of a finite abelian group as a prime-exponent map; exact for any size.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(BTreeMap<u64, u32>);

impl Order {
    pub fn one() -> Self {
        Order(BTreeMap::new())
    }

    pub fn of(n: u64) -> Self {
        Order(factorize(n).into_iter().collect())
    }

    pub fn from_factors(factors: &[u64]) -> Self {
        factors
            .iter()
            .fold(Order::one(), |acc, &d| acc.mul(&Order::of(d)))
    }

    pub fn pow(&self, k: usize) -> Order {
        Order(
            self.0
                .iter()
                .map(|(&p, &e)| (p, e * k as u32))
                .filter(|&(_, e)| e > 0)
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Order) -> Order {
        let mut out = self.0.clone();
        for (&p, &e) in &other.0 {
            *out.entry(p).or_insert(0) += e;
        }
        Order(out)
    }

    /// Exact quotient, if `other` divides `self`.
    pub fn div(&self, other: &Order) -> Option<Order> {
        let mut out = self.0.clone();
        for (&p, &e) in &other.0 {
            let have = out.get(&p).copied().unwrap_or(0);
            if have < e {
                return None;
            }
            if have == e {
                out.remove(&p);
            } else {
                out.insert(p, have - e);
            }
        }
        Some(Order(out))
    }

    /// Quotient rounded toward the trivial group, prime by prime (a lower bound
    /// on `|A| / |B|`-type expressions when only orders are known).
    pub fn saturating_div(&self, other: &Order) -> Order {
        let mut out = BTreeMap::new();
        for (&p, &e) in &self.0 {
            let f = other.0.get(&p).copied().unwrap_or(0);
            if e > f {
                out.insert(p, e - f);
            }
        }
        Order(out)
    }

    pub fn divides(&self, other: &Order) -> bool {
        other.div(self).is_some()
    }

    pub fn as_u128(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for (&p, &e) in &self.0 {
            for _ in 0..e {
                acc = acc.checked_mul(p as u128)?;
            }
        }
        Some(acc)
    }

    pub fn log2(&self) -> f64 {
        self.0
            .iter()
            .map(|(&p, &e)| e as f64 * (p as f64).log2())
            .sum()
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_u128() {
            Some(n) => write!(f, "{n}"),
            None => {
                let parts: Vec<String> = self.0.iter().map(|(p, e)| format!("{p}^{e}")).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizing_unit_hits_gcd() {
        for m in 2..40u64 {
            for a in 1..m {
                let u = normalizing_unit(a, m);
                assert_eq!(gcd(u, m), 1);
                assert_eq!(mul(u, a, m), gcd(a, m));
            }
        }
    }

    #[test]
    fn idempotents() {
        let m = 12;
        for (p, e) in factorize(m) {
            let q = p.pow(e);
            let eps = crt_idempotent(q, m);
            assert_eq!(eps % q, 1 % q);
            assert_eq!(eps % (m / q), 0);
        }
    }

    #[test]
    fn order_arithmetic() {
        let a = Order::from_factors(&[2, 4]);
        assert_eq!(a.as_u128(), Some(8));
        assert_eq!(a.div(&Order::of(4)), Some(Order::of(2)));
        assert_eq!(Order::of(2).div(&Order::of(4)), None);
        assert_eq!(Order::of(2).saturating_div(&Order::of(4)), Order::one());
    }
}
