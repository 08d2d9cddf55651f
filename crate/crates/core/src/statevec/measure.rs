use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{PureState, QubitLabel};
use crate::error::{Error, Result};

/// Outcome of a two-qubit Bell-basis measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellOutcome {
    /// (|00⟩ + |11⟩)/√2
    PhiPlus,
    /// (|01⟩ + |10⟩)/√2
    PsiPlus,
    /// (|00⟩ − |11⟩)/√2
    PhiMinus,
    /// (|01⟩ − |10⟩)/√2
    PsiMinus,
}

impl BellOutcome {
    /// Computational outcome after CNOT(x→y) then H(x).
    fn from_rotated_bits(x: u8, y: u8) -> Self {
        match (x, y) {
            (0, 0) => BellOutcome::PhiPlus,
            (0, 1) => BellOutcome::PsiPlus,
            (1, 0) => BellOutcome::PhiMinus,
            _ => BellOutcome::PsiMinus,
        }
    }
}

impl PureState {
    /// Born probabilities for the joint outcome on `targets`; outcome index
    /// is big-endian in target order.
    pub fn outcome_probabilities(&self, targets: &[QubitLabel]) -> Result<Vec<f64>> {
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::SameLabel(*t));
            }
        }
        let shifts = targets
            .iter()
            .map(|&t| self.shift(t))
            .collect::<Result<Vec<_>>>()?;
        let mut probs = vec![0.0; 1 << targets.len()];
        for (i, z) in self.amps.iter().enumerate() {
            probs[outcome_of(i, &shifts)] += z.norm_sqr();
        }
        Ok(probs)
    }

    /// Projective measurement of `targets` in the computational basis.
    ///
    /// Measured qubits stay in the returned state, collapsed onto the
    /// observed bits.
    pub fn measure_computational<R: Rng + ?Sized>(
        &self,
        targets: &[QubitLabel],
        rng: &mut R,
    ) -> Result<(Vec<u8>, PureState)> {
        let probs = self.outcome_probabilities(targets)?;
        let draw: f64 = rng.random();
        let mut acc = 0.0;
        let mut outcome = None;
        for (k, p) in probs.iter().enumerate() {
            if *p <= 0.0 {
                continue;
            }
            acc += p;
            outcome = Some(k);
            if draw < acc {
                break;
            }
        }
        let outcome = outcome.ok_or_else(|| Error::InvariantBreach("all outcomes have zero probability".into()))?;
        let shifts: Vec<usize> = targets.iter().map(|&t| self.shift(t)).collect::<Result<_>>()?;
        let scale = 1.0 / probs[outcome].sqrt();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if outcome_of(i, &shifts) == outcome {
                    z * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let k = targets.len();
        let bits = (0..k).map(|p| ((outcome >> (k - 1 - p)) & 1) as u8).collect();
        Ok((
            bits,
            PureState {
                labels: self.labels.clone(),
                amps,
            },
        ))
    }

    /// Bell-basis measurement of `pair`, via CNOT and Hadamard into the
    /// computational basis and back. The returned state holds the pair in
    /// the observed Bell state.
    pub fn measure_bell<R: Rng + ?Sized>(
        &self,
        pair: (QubitLabel, QubitLabel),
        rng: &mut R,
    ) -> Result<(BellOutcome, PureState)> {
        let (x, y) = pair;
        if x == y {
            return Err(Error::SameLabel(x));
        }
        let rotated = self.apply_cnot(x, y)?.apply_hadamard(x)?;
        let (bits, collapsed) = rotated.measure_computational(&[x, y], rng)?;
        let restored = collapsed.apply_hadamard(x)?.apply_cnot(x, y)?;
        Ok((BellOutcome::from_rotated_bits(bits[0], bits[1]), restored))
    }
}

fn outcome_of(index: usize, shifts: &[usize]) -> usize {
    shifts
        .iter()
        .fold(0usize, |acc, &s| (acc << 1) | ((index >> s) & 1))
}
