//! Müller–Cohen–Matthews polynomials and the identity linking them to the
//! derivative of a Kasami power function.

use super::{kasami_exponent, PowerFunction, SweepCheck};
use crate::equations::gold_params;
use crate::gf2n::{Elem, FieldSpec};
use crate::Result;
use serde::Serialize;

/// The linearized sum `T_k(X) = X + X^2 + X^4 + ... + X^(2^(k-1))`.
///
/// `k` counts terms literally (it is not reduced mod `n`); at `k = n` the sum
/// coincides with the absolute trace. Panics if `k` is 0.
pub fn tk_eval(f: &FieldSpec, k: u32, x: Elem) -> Elem {
    assert!(k >= 1, "linearized sum needs at least one term");
    let mut acc = Elem::ZERO;
    let mut term = x;
    for _ in 0..k {
        acc ^= term;
        term = f.sq(term);
    }
    acc
}

/// The polynomial `f_(k, 2^k+1)(X) = T_k(X)^(2^k + 1) / X^(2^k)`, extended by
/// `0 -> 0` (the singularity is removable: `X` divides `T_k(X)`).
///
/// Panics if `k` is 0 or exceeds 63 (exponent width).
pub fn mcm_eval(f: &FieldSpec, k: u32, x: Elem) -> Elem {
    assert!(
        (1..=63).contains(&k),
        "exponent parameter out of range: {k}"
    );
    if x.is_zero() {
        return Elem::ZERO;
    }
    let q = 1i128 << k;
    let num = f
        .pow(tk_eval(f, k, x), q + 1)
        .expect("exponent is positive");
    let x_q = f.pow(x, q).expect("x is nonzero");
    f.mul(num, f.inv(x_q).expect("x is nonzero"))
}

/// Outcome of the exhaustive permutation check for `f_(k, 2^k+1)`.
///
/// The defining lemma asserts a permutation only for odd `k` with
/// `gcd(n, k) = 1`; outside that hypothesis the map is still evaluated and
/// the result reported, with `hypothesis_met` cleared so the caller knows the
/// lemma makes no claim about it.
#[derive(Clone, Debug, Serialize)]
pub struct McmPermutationReport {
    pub n: u32,
    pub k: u32,
    pub hypothesis_met: bool,
    pub image_size: u64,
    pub is_permutation: bool,
    /// A colliding input pair when the map is not injective.
    pub first_collision: Option<(Elem, Elem)>,
}

/// Exhaustively test whether `x -> f_(k, 2^k+1)(x)` permutes the field.
pub fn verify_mcm_permutation(f: &FieldSpec, k: u32) -> McmPermutationReport {
    let n = f.n();
    let hypothesis_met = k % 2 == 1 && crate::gf2n::gcd(n as u64, k as u64) == 1;
    let size = 1usize << n;
    // seen[image] = first preimage + 1 (0 = unseen).
    let mut seen = vec![0u32; size];
    let mut image_size = 0u64;
    let mut first_collision = None;
    for x in f.elements() {
        let y = mcm_eval(f, k, x);
        let slot = &mut seen[y.bits() as usize];
        if *slot == 0 {
            *slot = x.bits() + 1;
            image_size += 1;
        } else if first_collision.is_none() {
            first_collision = Some((Elem::from_bits(*slot - 1), x));
        }
    }
    McmPermutationReport {
        n,
        k,
        hypothesis_met,
        image_size,
        is_permutation: image_size == size as u64,
        first_collision,
    }
}

/// Exhaustively check `F(X) + F(X+1) + 1 = f_(k, 2^k+1)(X + X^2)` for the
/// Kasami map `F(X) = X^(2^(2k) - 2^k + 1)`. Errors if `gcd(k, n) != 1`.
pub fn verify_kasami_gold_identity(f: &FieldSpec, k: u32) -> Result<SweepCheck> {
    gold_params(f, k)?;
    let power = PowerFunction::new(*f, kasami_exponent(k));
    let table = power.value_table();
    let mut check = SweepCheck::new();
    for x in f.elements() {
        let lhs = table[x.bits() as usize] ^ table[(x ^ Elem::ONE).bits() as usize] ^ Elem::ONE;
        let rhs = mcm_eval(f, k, x ^ f.sq(x));
        check.record(lhs == rhs, x);
    }
    Ok(check)
}

/// Exhaustively check that `x -> F(x) + F(x+1)` is 2-to-1 for the Kasami map:
/// every output value is reached either 0 or 2 times. Counterexamples are the
/// offending output values. Errors if `gcd(k, n) != 1`.
pub fn verify_derivative_two_to_one(f: &FieldSpec, k: u32) -> Result<SweepCheck> {
    gold_params(f, k)?;
    let power = PowerFunction::new(*f, kasami_exponent(k));
    let table = power.value_table();
    let size = 1usize << f.n();
    let mut counts = vec![0u32; size];
    for x in 0..size {
        counts[(table[x] ^ table[x ^ 1]).bits() as usize] += 1;
    }
    let mut check = SweepCheck::new();
    for (b, &c) in counts.iter().enumerate() {
        check.record(c == 0 || c == 2, Elem::from_bits(b as u32));
    }
    Ok(check)
}
