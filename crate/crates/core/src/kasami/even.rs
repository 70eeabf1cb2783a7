//! Even-degree verification: the GF(4) subfield structure, the 3-to-1
//! behaviour of `x -> x^(q+1)`, and the checker for the incomplete
//! case analysis of the even-degree argument, which verifies what is
//! derivable and reports the rest as findings.

use super::{kasami_exponent, SweepCheck, COUNTEREXAMPLE_CAP};
use crate::equations::{gold_params, validate_u};
use crate::gf2n::{Elem, FieldSpec};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

/// The cubic-root-of-unity subfield {0, 1, ε, ε²} of an even-degree field,
/// with a distinguished unit ω′ and its inverse ϖ.
#[derive(Clone, Copy, Debug)]
pub struct Gf4Embedding {
    field: FieldSpec,
    /// ε with ε² + ε + 1 = 0; the smaller bit-mask of the two choices.
    pub epsilon: Elem,
    /// The subfield units {1, ε, ε²}.
    pub omegas: [Elem; 3],
    /// The chosen unit ω′.
    pub omega_prime: Elem,
    /// ϖ = 1/ω′.
    pub varpi: Elem,
}

impl Gf4Embedding {
    /// Errors with [`Error::ParityError`] in odd degree (no GF(4) subfield)
    /// and [`Error::InvalidOmega`] if `omega_prime` is not a subfield unit.
    pub fn new(f: &FieldSpec, omega_prime: Elem) -> Result<Gf4Embedding> {
        if !f.n().is_multiple_of(2) {
            return Err(Error::ParityError {
                n: f.n(),
                required: "even",
            });
        }
        let cofactor = (f.group_order() / 3) as i128;
        let e1 = f
            .pow(f.generator(), cofactor)
            .expect("generator is nonzero");
        let e2 = f.mul(e1, e1);
        let epsilon = if e1.bits() <= e2.bits() { e1 } else { e2 };
        debug_assert_eq!(f.mul(epsilon, epsilon) ^ epsilon ^ Elem::ONE, Elem::ZERO);
        let omegas = [Elem::ONE, epsilon, f.mul(epsilon, epsilon)];
        if !omegas.contains(&omega_prime) {
            return Err(Error::InvalidOmega { omega: omega_prime });
        }
        let varpi = f.inv(omega_prime)?;
        Ok(Gf4Embedding {
            field: *f,
            epsilon,
            omegas,
            omega_prime,
            varpi,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Whether `x` lies in the subfield {0, 1, ε, ε²}.
    pub fn in_gf4(&self, x: Elem) -> bool {
        x.is_zero() || x == Elem::ONE || x == self.omegas[1] || x == self.omegas[2]
    }
}

/// Check the three subfield facts the even-degree argument leans on:
///
/// 1. when 4 divides n, every unit of GF(4) has trace 0;
/// 2. when n ≡ 2 (mod 4), ε and ε² have trace 1 while Tr(1) = 0;
/// 3. for every odd k ≤ n (with q = 2^k): ω^(q-1) = ω, ω^q = ω²,
///    ω^(q+1) = 1 and ω^(q²) = ω for each unit ω.
///
/// Counterexamples are the offending units. Errors in odd degree.
pub fn verify_even_facts(f: &FieldSpec) -> Result<SweepCheck> {
    let emb = Gf4Embedding::new(f, Elem::ONE)?;
    let mut check = SweepCheck::new();
    if f.n().is_multiple_of(4) {
        for omega in emb.omegas {
            check.record(f.trace(omega) == 0, omega);
        }
    } else {
        check.record(f.trace(emb.omegas[1]) == 1, emb.omegas[1]);
        check.record(f.trace(emb.omegas[2]) == 1, emb.omegas[2]);
        check.record(f.trace(Elem::ONE) == 0, Elem::ONE);
    }
    let mut k = 1u32;
    while k <= f.n() {
        let q_minus_1 = (1i128 << k) - 1;
        for omega in emb.omegas {
            let pw = |e: i128| f.pow(omega, e).expect("omega is nonzero");
            let ok = pw(q_minus_1) == omega
                && f.frobenius(omega, k as i64) == f.mul(omega, omega)
                && pw(q_minus_1 + 2) == Elem::ONE
                && f.frobenius(omega, 2 * k as i64) == omega;
            check.record(ok, omega);
        }
        k += 2;
    }
    Ok(check)
}

/// Outcome of the exhaustive 3-to-1 check for `x -> x^(q+1)` on the nonzero
/// elements of an even-degree field.
#[derive(Clone, Debug, Serialize)]
pub struct ThreeToOneReport {
    pub n: u32,
    pub k: u32,
    pub image_size: u64,
    pub expected_image_size: u64,
    /// Every achieved image value has exactly three preimages.
    pub exact_three_preimages: bool,
    /// The image coincides with the set of nonzero cubes.
    pub image_is_cubes: bool,
    /// 3 divides the Kasami exponent `2^(2k) - 2^k + 1`.
    pub exponent_divisible_by_three: bool,
}

impl ThreeToOneReport {
    pub fn pass(&self) -> bool {
        self.image_size == self.expected_image_size
            && self.exact_three_preimages
            && self.image_is_cubes
            && self.exponent_divisible_by_three
    }
}

/// Exhaustively verify that `x -> x^(q+1)` maps the nonzero elements 3-to-1
/// onto the nonzero cubes, and that 3 divides the Kasami exponent.
/// Requires even degree and `gcd(k, n) = 1`.
pub fn verify_three_to_one_cubing(f: &FieldSpec, k: u32) -> Result<ThreeToOneReport> {
    if !f.n().is_multiple_of(2) {
        return Err(Error::ParityError {
            n: f.n(),
            required: "even",
        });
    }
    let p = gold_params(f, k)?;
    let size = 1usize << f.n();
    let mut counts = vec![0u32; size];
    for x in f.nonzero_elements() {
        let image = f.mul(f.frobenius(x, p.k as i64), x);
        counts[image.bits() as usize] += 1;
    }
    let image_size = counts.iter().filter(|&&c| c > 0).count() as u64;
    let exact_three_preimages = counts.iter().all(|&c| c == 0 || c == 3);

    let mut is_cube = vec![false; size];
    for y in f.nonzero_elements() {
        is_cube[f.pow(y, 3).expect("y is nonzero").bits() as usize] = true;
    }
    let image_is_cubes = counts
        .iter()
        .zip(is_cube.iter())
        .skip(1)
        .all(|(&c, &cube)| (c > 0) == cube);

    Ok(ThreeToOneReport {
        n: f.n(),
        k: p.k,
        image_size,
        expected_image_size: f.group_order() / 3,
        exact_three_preimages,
        image_is_cubes,
        exponent_divisible_by_three: kasami_exponent(p.k).is_multiple_of(3),
    })
}

/// What the case-analysis checker establishes for one parameter `u`:
/// the two-element target set S, the three branch verifications (one per
/// candidate value of `1/v^(1/(q-1))`), the claimed difference value `b`,
/// and whether the claimed solution pair of the ω = ω′ system is actually
/// found at that `b` by exhaustive search.
#[derive(Clone, Debug, Serialize)]
pub struct DiscussionReport {
    pub u: Elem,
    #[serde(rename = "S")]
    pub s: [Elem; 2],
    pub b_value: Elem,
    pub branch_results: [bool; 3],
    pub pair_found: bool,
}

impl DiscussionReport {
    pub fn branches_hold(&self) -> bool {
        self.branch_results.iter().all(|&b| b)
    }
}

/// Checker for the even-degree case analysis, amortizing the power tables
/// across many values of `u`.
pub struct DiscussionChecker {
    emb: Gf4Embedding,
    k: u32,
    q: u128,
    /// `q1[x] = x^(q+1)`, indexed by bit pattern.
    q1: Vec<Elem>,
    /// `q3[x] = x^(q³+1)`, indexed by bit pattern.
    q3: Vec<Elem>,
    /// Preimages of the 3-to-1 map `x -> x^(q+1)` on nonzero inputs.
    pre_counts: Vec<u8>,
    pre_slots: Vec<[Elem; 3]>,
}

impl DiscussionChecker {
    /// Requires even degree (hence odd k when `gcd(k, n) = 1`) and a
    /// subfield unit ω′. Degrees divisible by 6 are refused: the coset
    /// bookkeeping behind S presumes the GF(4) units label the three cube
    /// cosets, and they are cubes themselves at those degrees.
    pub fn new(f: &FieldSpec, k: u32, omega_prime: Elem) -> Result<DiscussionChecker> {
        let emb = Gf4Embedding::new(f, omega_prime)?;
        if f.n().is_multiple_of(6) {
            return Err(Error::CosetCollapse { n: f.n() });
        }
        let p = gold_params(f, k)?;
        let size = 1usize << f.n();
        let mut q1 = vec![Elem::ZERO; size];
        let mut q3 = vec![Elem::ZERO; size];
        let mut pre_counts = vec![0u8; size];
        let mut pre_slots = vec![[Elem::ZERO; 3]; size];
        for x in f.elements() {
            let i = x.bits() as usize;
            q1[i] = f.mul(f.frobenius(x, p.k as i64), x);
            q3[i] = f.mul(f.frobenius(x, 3 * p.k as i64), x);
            if !x.is_zero() {
                let slot = q1[i].bits() as usize;
                let held = pre_counts[slot] as usize;
                if held == 3 {
                    return Err(Error::UnexpectedRootCount {
                        a: q1[i],
                        count: held + 1,
                    });
                }
                pre_slots[slot][held] = x;
                pre_counts[slot] += 1;
            }
        }
        Ok(DiscussionChecker {
            emb,
            k: p.k,
            q: p.q,
            q1,
            q3,
            pre_counts,
            pre_slots,
        })
    }

    pub fn embedding(&self) -> &Gf4Embedding {
        &self.emb
    }

    fn q1_of(&self, x: Elem) -> Elem {
        self.q1[x.bits() as usize]
    }

    fn preimages(&self, t: Elem) -> &[Elem] {
        &self.pre_slots[t.bits() as usize][..self.pre_counts[t.bits() as usize] as usize]
    }

    /// Examine one parameter `u` outside GF(4).
    pub fn check_u(&self, u: Elem) -> Result<DiscussionReport> {
        let f = self.emb.field();
        validate_u(f, u)?;
        let k = self.k as i64;
        let eps = self.emb.epsilon;

        let w1 = u ^ f.frobenius(u, k);
        let s0 = f.mul(self.emb.varpi, f.inv(w1)?);
        let s = sorted_pair(
            f.mul(s0, self.q1_of(u ^ eps)),
            f.mul(s0, self.q1_of(u ^ Elem::ONE ^ eps)),
        );

        // One branch per candidate value w of 1/v^(1/(q-1)); each candidate
        // is g + g^q for a generator g, and each induces z^(q+1) = ϖ/w with
        // the two t-solutions g + ε and g + 1 + ε of t^q + t = w + 1.
        let generators = [u, f.inv(u)?, f.inv(u ^ Elem::ONE)?];
        let mut branch_results = [false; 3];
        for (i, &g) in generators.iter().enumerate() {
            let w = g ^ f.frobenius(g, k);
            let z_q1 = f.mul(self.emb.varpi, f.inv(w)?);
            let t1 = g ^ eps;
            let t2 = g ^ Elem::ONE ^ eps;
            let solves = |t: Elem| f.frobenius(t, k) ^ t == (w ^ Elem::ONE);
            let cands = sorted_pair(f.mul(z_q1, self.q1_of(t1)), f.mul(z_q1, self.q1_of(t2)));
            branch_results[i] = solves(t1) && solves(t2) && cands == s;
        }

        let b_value = self.b_formula(u);

        // The claimed pair of values { ω x^(q+1), ω y^(q+1) } for the
        // ω = ω′ system at b, up to ordering.
        let inv_w1 = f.inv(w1)?;
        let claimed_pair = sorted_pair(
            f.mul(self.q1_of(u ^ eps), inv_w1),
            f.mul(self.q1_of(u ^ Elem::ONE ^ eps), inv_w1),
        );
        let pair_found = self.find_pair(b_value, claimed_pair);

        Ok(DiscussionReport {
            u,
            s,
            b_value,
            branch_results,
            pair_found,
        })
    }

    /// `b = (u + u^(q³)) / (u + u^q)^(q² - q + 1)`.
    fn b_formula(&self, u: Elem) -> Elem {
        let f = self.emb.field();
        let k = self.k as i64;
        let num = u ^ f.frobenius(u, 3 * k);
        let den = f
            .pow(
                u ^ f.frobenius(u, k),
                (self.q * self.q - self.q + 1) as i128,
            )
            .expect("exponent is positive");
        f.mul(
            num,
            f.inv(den)
                .expect("u outside GF(2) keeps the denominator nonzero"),
        )
    }

    /// The b-formula evaluated with the parameter taken inside GF(4)\GF(2),
    /// the degenerate reading; it collapses to 1 because ε + ε^q = 1.
    pub fn gf4_reading_b(&self) -> Elem {
        self.b_formula(self.emb.epsilon)
    }

    /// Exhaustive search for a solution (ω, x, y) of the ω = ω′ system
    /// `ω x^(q+1) + ω y^(q+1) = 1`, `x^(q³+1) + y^(q³+1) = b` whose value
    /// pair { ω x^(q+1), ω y^(q+1) } equals `pair`.
    fn find_pair(&self, b: Elem, pair: [Elem; 2]) -> bool {
        let f = self.emb.field();
        for omega in self.emb.omegas {
            let step = f.inv(omega).expect("subfield units are nonzero");
            for x in f.nonzero_elements() {
                let xi = x.bits() as usize;
                let target = self.q1[xi] ^ step;
                if target.is_zero() {
                    continue;
                }
                for &y in self.preimages(target) {
                    if x.bits() < y.bits()
                        && self.q3[xi] ^ self.q3[y.bits() as usize] == b
                        && sorted_pair(f.mul(omega, self.q1[xi]), f.mul(omega, target)) == pair
                    {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// All difference values `b = x^(q³+1) + y^(q³+1)` achieved by solutions
    /// of the mixed system `ω x^(q+1) + ω′ y^(q+1) = 1` with ω ≠ ω′ and
    /// `x^(q+1) ≠ y^(q+1)` (pairs with equal (q+1)-powers collapse to b = 0).
    pub fn omega_mismatch_b_values(&self) -> BTreeSet<Elem> {
        let f = self.emb.field();
        let mut out = BTreeSet::new();
        for omega in self.emb.omegas {
            for omega2 in self.emb.omegas {
                if omega == omega2 {
                    continue;
                }
                let inv2 = f.inv(omega2).expect("subfield units are nonzero");
                for x in f.nonzero_elements() {
                    let xi = x.bits() as usize;
                    let target = f.mul(Elem::ONE ^ f.mul(omega, self.q1[xi]), inv2);
                    if target.is_zero() || target == self.q1[xi] {
                        continue;
                    }
                    for &y in self.preimages(target) {
                        out.insert(self.q3[xi] ^ self.q3[y.bits() as usize]);
                    }
                }
            }
        }
        out
    }
}

fn sorted_pair(a: Elem, b: Elem) -> [Elem; 2] {
    if a.bits() <= b.bits() {
        [a, b]
    } else {
        [b, a]
    }
}

/// One-shot version of [`DiscussionChecker::check_u`]; builds the power
/// tables for a single query.
pub fn even_discussion_check(
    f: &FieldSpec,
    k: u32,
    u: Elem,
    omega_prime: Elem,
) -> Result<DiscussionReport> {
    DiscussionChecker::new(f, k, omega_prime)?.check_u(u)
}

/// Aggregate of the case-analysis checks over every `u` outside GF(4),
/// together with the findings that are reported rather than asserted:
/// the degenerate GF(4) reading of the b-formula, and whether any claimed
/// `b` is also reached by a solution of the ω ≠ ω′ system.
#[derive(Clone, Debug, Serialize)]
pub struct DiscussionSweep {
    pub n: u32,
    pub k: u32,
    pub omega_prime: Elem,
    pub u_checked: u64,
    pub branch_failure_count: u64,
    pub branch_failures: Vec<Elem>,
    pub pair_missing_count: u64,
    pub pairs_missing: Vec<Elem>,
    /// Value of the b-formula under the degenerate GF(4) reading.
    pub gf4_reading_b: Elem,
    pub claimed_b_count: u64,
    pub mismatch_b_count: u64,
    /// Claimed b values also reached by ω ≠ ω′ solutions (expected empty).
    pub overlap_count: u64,
    pub overlap: Vec<Elem>,
}

impl DiscussionSweep {
    /// The assertable part: every branch of every checked `u` verified.
    pub fn branches_all_hold(&self) -> bool {
        self.branch_failure_count == 0
    }
}

/// Run [`DiscussionChecker::check_u`] over every `u` outside GF(4) and
/// collect the sweep-level findings.
pub fn discussion_sweep(f: &FieldSpec, k: u32, omega_prime: Elem) -> Result<DiscussionSweep> {
    let checker = DiscussionChecker::new(f, k, omega_prime)?;
    let mut sweep = DiscussionSweep {
        n: f.n(),
        k: checker.k,
        omega_prime,
        u_checked: 0,
        branch_failure_count: 0,
        branch_failures: Vec::new(),
        pair_missing_count: 0,
        pairs_missing: Vec::new(),
        gf4_reading_b: checker.gf4_reading_b(),
        claimed_b_count: 0,
        mismatch_b_count: 0,
        overlap_count: 0,
        overlap: Vec::new(),
    };
    let mut claimed = BTreeSet::new();
    for u in f.elements() {
        if checker.emb.in_gf4(u) {
            continue;
        }
        let report = checker.check_u(u)?;
        sweep.u_checked += 1;
        if !report.branches_hold() {
            sweep.branch_failure_count += 1;
            if sweep.branch_failures.len() < COUNTEREXAMPLE_CAP {
                sweep.branch_failures.push(u);
            }
        }
        if !report.pair_found {
            sweep.pair_missing_count += 1;
            if sweep.pairs_missing.len() < COUNTEREXAMPLE_CAP {
                sweep.pairs_missing.push(u);
            }
        }
        claimed.insert(report.b_value);
    }
    let mismatch = checker.omega_mismatch_b_values();
    sweep.claimed_b_count = claimed.len() as u64;
    sweep.mismatch_b_count = mismatch.len() as u64;
    for &b in claimed.intersection(&mismatch) {
        sweep.overlap_count += 1;
        if sweep.overlap.len() < COUNTEREXAMPLE_CAP {
            sweep.overlap.push(b);
        }
    }
    Ok(sweep)
}
