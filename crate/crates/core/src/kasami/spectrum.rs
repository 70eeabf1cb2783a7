//! Power functions `x -> x^d` and their differential spectra.

use crate::gf2n::{Elem, FieldSpec};
use crate::{Error, Result};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

/// A power function `F(x) = x^d` over a binary field.
#[derive(Clone, Copy, Debug)]
pub struct PowerFunction {
    field: FieldSpec,
    d: u64,
}

impl PowerFunction {
    /// Panics if `d` is zero (a constant map, outside the scope of
    /// differential analysis of power permutations and near-permutations).
    pub fn new(field: FieldSpec, d: u64) -> PowerFunction {
        assert!(d >= 1, "power function exponent must be positive");
        PowerFunction { field, d }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Evaluate `x^d`, with `0^d = 0` for the positive `d` enforced at
    /// construction.
    pub fn eval(&self, x: Elem) -> Elem {
        self.field
            .pow(x, self.d as i128)
            .expect("exponent is positive")
    }

    /// The full value table, indexed by the bit pattern of `x`.
    pub fn value_table(&self) -> Vec<Elem> {
        self.field.elements().map(|x| self.eval(x)).collect()
    }

    /// Count, for each output `b`, the solutions `x` of
    /// `F(x) + F(x + a) = b`. Errors with [`Error::ZeroDirection`] for
    /// `a = 0` (the derivative in direction zero is identically zero).
    pub fn derivative_spectrum(&self, a: Elem) -> Result<DifferentialSpectrum> {
        if a.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let table = self.value_table();
        Ok(self.spectrum_from_table(&table, a))
    }

    fn spectrum_from_table(&self, table: &[Elem], a: Elem) -> DifferentialSpectrum {
        let size = 1usize << self.field.n();
        let mut counts = vec![0u32; size];
        for x in 0..size {
            let b = table[x] ^ table[x ^ a.bits() as usize];
            counts[b.bits() as usize] += 1;
        }
        let delta = counts.iter().copied().max().unwrap_or(0);
        DifferentialSpectrum { a, counts, delta }
    }

    /// Differential uniformity measured on the single row `a = 1`.
    ///
    /// For a power function every derivative row is a scaled copy of the
    /// `a = 1` row (`F(ax) + F(ax + a) = a^d (x^d + (x+1)^d)` up to relabeling
    /// of `b`), so this one row already carries the full uniformity.
    pub fn differential_uniformity(&self) -> u32 {
        self.derivative_spectrum(Elem::ONE)
            .expect("direction 1 is nonzero")
            .delta
    }

    /// Differential uniformity measured over every nonzero direction, without
    /// relying on the power-map row symmetry. Costs `O(2^(2n))`.
    pub fn differential_uniformity_full(&self) -> u32 {
        let table = self.value_table();
        let size = 1usize << self.field.n();
        let mut counts = vec![0u32; size];
        let mut delta = 0;
        for a in 1..size {
            counts.fill(0);
            for x in 0..size {
                counts[(table[x] ^ table[x ^ a]).bits() as usize] += 1;
            }
            delta = delta.max(counts.iter().copied().max().unwrap_or(0));
        }
        delta
    }

    /// Almost perfect nonlinearity: differential uniformity exactly 2,
    /// measured on the `a = 1` row.
    pub fn is_apn(&self) -> bool {
        self.differential_uniformity() == 2
    }

    /// Almost perfect nonlinearity measured over the whole difference table.
    pub fn is_apn_full(&self) -> bool {
        self.differential_uniformity_full() == 2
    }
}

/// One row of a difference distribution table: for a fixed direction `a`,
/// `counts[b]` is the number of `x` with `F(x) + F(x + a) = b`.
#[derive(Clone, Debug)]
pub struct DifferentialSpectrum {
    pub a: Elem,
    pub counts: Vec<u32>,
    pub delta: u32,
}

impl DifferentialSpectrum {
    /// `(b, count)` pairs in increasing order of `b`, including zero counts.
    pub fn rows(&self) -> impl Iterator<Item = (Elem, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(b, &c)| (Elem::from_bits(b as u32), c))
    }
}

impl Serialize for DifferentialSpectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DifferentialSpectrum", 3)?;
        s.serialize_field("a", &self.a)?;
        s.serialize_field("delta", &self.delta)?;
        let row: Vec<(Elem, u32)> = self.rows().collect();
        s.serialize_field("row", &row)?;
        s.end()
    }
}
