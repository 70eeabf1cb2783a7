//! Polynomial arithmetic over GF(2) on bit masks (bit i = coefficient of x^i).
//! Only what field construction needs: carryless products, remainders, gcds,
//! and the Rabin irreducibility test.

/// Degree of the mask polynomial; -1 for the zero polynomial.
pub fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Carryless product of two masks of degree < 32.
pub fn mul(a: u64, b: u64) -> u128 {
    let mut acc: u128 = 0;
    let mut b = b;
    while b != 0 {
        let i = b.trailing_zeros();
        acc ^= (a as u128) << i;
        b &= b - 1;
    }
    acc
}

/// Remainder of a modulo m (m != 0).
pub fn rem(mut a: u128, m: u64) -> u64 {
    let dm = degree(m);
    loop {
        let da = 127 - a.leading_zeros() as i32;
        if a == 0 || da < dm {
            return a as u64;
        }
        a ^= (m as u128) << (da - dm);
    }
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    rem(mul(a, b), m)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = rem(a as u128, b);
        a = b;
        b = r;
    }
    a
}

/// Distinct prime factors of m, by trial division (m < 2^63).
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Rabin test: p irreducible over GF(2) iff x^(2^n) = x mod p and
/// gcd(x^(2^(n/r)) - x, p) = 1 for every prime r | n.
pub fn is_irreducible(p: u64, n: u32) -> bool {
    const X: u64 = 0b10;
    if degree(p) != n as i32 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let checkpoints: Vec<u32> = prime_factors(n as u64)
        .iter()
        .map(|&r| n / r as u32)
        .collect();
    let mut h = X; // x^(2^j) mod p after j squarings
    for j in 1..=n {
        h = mulmod(h, h, p);
        if checkpoints.contains(&j) && gcd(h ^ X, p) != 1 {
            return false;
        }
    }
    h == X
}

/// Smallest irreducible polynomial of degree n, by ascending mask order.
pub fn smallest_irreducible(n: u32) -> u64 {
    let lo = 1u64 << n;
    // Constant term must be 1 (else divisible by x) and the number of terms
    // must be odd (else divisible by x + 1), which prunes most candidates.
    ((lo | 1)..(lo << 1))
        .step_by(2)
        .find(|&m| m.count_ones() % 2 == 1 && is_irreducible(m, n))
        .expect("an irreducible polynomial of every degree exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial-division irreducibility, as an independent oracle for Rabin.
    fn irreducible_naive(p: u64, n: u32) -> bool {
        if degree(p) != n as i32 {
            return false;
        }
        for d in 2..(1u64 << (n / 2 + 1)) {
            if degree(d) >= 1 && degree(d) <= (n / 2) as i32 && rem(p as u128, d) == 0 {
                return false;
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for n in 2..=12u32 {
            for m in (1u64 << n)..(1u64 << (n + 1)) {
                assert_eq!(
                    is_irreducible(m, n),
                    irreducible_naive(m, n),
                    "disagreement at mask {m:#x}"
                );
            }
        }
    }

    #[test]
    fn smallest_irreducible_known_values() {
        assert_eq!(smallest_irreducible(2), 0x7); // x^2+x+1
        assert_eq!(smallest_irreducible(3), 0xb); // x^3+x+1
        assert_eq!(smallest_irreducible(4), 0x13); // x^4+x+1
        assert_eq!(smallest_irreducible(8), 0x11b); // x^8+x^4+x^3+x+1
    }

    #[test]
    fn factors_of_mersenne_numbers() {
        assert_eq!(prime_factors(7), vec![7]);
        assert_eq!(prime_factors(15), vec![3, 5]);
        assert_eq!(prime_factors((1 << 11) - 1), vec![23, 89]);
        assert_eq!(prime_factors((1 << 28) - 1), vec![3, 5, 29, 43, 113, 127]);
    }
}
