//! Dense state-vector engine for small registers of labeled qubits.
//!
//! Amplitudes are indexed big-endian by label order: the first label is the
//! most significant bit of the amplitude index. All operations leave the
//! input untouched and return a new state.

mod measure;
mod unitary;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use measure::BellOutcome;
pub use unitary::UnitaryMatrix;

/// Absolute tolerance for normalization, unitarity and state comparisons.
pub const TOLERANCE: f64 = 1e-10;

/// Largest register the engine accepts.
pub const MAX_QUBITS: usize = 8;

pub type Amplitude = Complex64;

/// Identity of a physical qubit in the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitLabel {
    /// Alice's carrier qubit.
    A,
    /// Bob's carrier qubit.
    B,
    /// Charlie's carrier qubit.
    C,
    /// Data qubit sent to Bob.
    Q1,
    /// Data qubit sent to Charlie.
    Q2,
    /// Bob's extra carrier qubit, kept from the split round.
    Bbar,
    /// Counterfeit qubit Bob sends to Charlie.
    Cf,
}

impl QubitLabel {
    pub const ALL: [QubitLabel; 7] = [
        QubitLabel::A,
        QubitLabel::B,
        QubitLabel::C,
        QubitLabel::Q1,
        QubitLabel::Q2,
        QubitLabel::Bbar,
        QubitLabel::Cf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QubitLabel::A => "a",
            QubitLabel::B => "b",
            QubitLabel::C => "c",
            QubitLabel::Q1 => "q1",
            QubitLabel::Q2 => "q2",
            QubitLabel::Bbar => "bbar",
            QubitLabel::Cf => "cf",
        }
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QubitLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        QubitLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown qubit label '{s}'"))
    }
}

fn check_bit(bit: u8) -> Result<()> {
    if bit > 1 {
        return Err(Error::InvalidBit(bit));
    }
    Ok(())
}

fn check_unique(labels: &[QubitLabel]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(*l));
        }
    }
    if labels.len() > MAX_QUBITS {
        return Err(Error::TooManyQubits(labels.len()));
    }
    Ok(())
}

/// A normalized pure state over an ordered list of labeled qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    labels: Vec<QubitLabel>,
    amps: Vec<Amplitude>,
}

impl PureState {
    /// Computational basis state with `bits[i]` on `labels[i]`.
    pub fn basis_state(labels: &[QubitLabel], bits: &[u8]) -> Result<Self> {
        check_unique(labels)?;
        if bits.len() != labels.len() {
            return Err(Error::LengthMismatch {
                expected: labels.len(),
                got: bits.len(),
            });
        }
        let mut index = 0usize;
        for &bit in bits {
            check_bit(bit)?;
            index = (index << 1) | bit as usize;
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << labels.len()];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            labels: labels.to_vec(),
            amps,
        })
    }

    /// Wraps raw amplitudes; rejects anything that is not a unit vector of
    /// the right length.
    pub fn from_amplitudes(labels: &[QubitLabel], amps: Vec<Amplitude>) -> Result<Self> {
        check_unique(labels)?;
        if amps.len() != 1 << labels.len() {
            return Err(Error::LengthMismatch {
                expected: 1 << labels.len(),
                got: amps.len(),
            });
        }
        let state = Self {
            labels: labels.to_vec(),
            amps,
        };
        let norm = state.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Builds a state from ket strings such as `"0110"`, one character per
    /// label, with real coefficients.
    pub fn from_kets(labels: &[QubitLabel], terms: &[(f64, &str)]) -> Result<Self> {
        check_unique(labels)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << labels.len()];
        for &(coef, ket) in terms {
            if ket.len() != labels.len() {
                return Err(Error::LengthMismatch {
                    expected: labels.len(),
                    got: ket.len(),
                });
            }
            let mut index = 0usize;
            for ch in ket.chars() {
                let bit = match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::InvalidBit(ch as u8)),
                };
                index = (index << 1) | bit;
            }
            amps[index] += coef;
        }
        Self::from_amplitudes(labels, amps)
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn contains(&self, label: QubitLabel) -> bool {
        self.labels.contains(&label)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    fn position(&self, label: QubitLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownLabel(label))
    }

    /// Bit offset of `label` inside an amplitude index.
    fn shift(&self, label: QubitLabel) -> Result<usize> {
        Ok(self.labels.len() - 1 - self.position(label)?)
    }

    /// Amplitude of the basis state given as one bit per label.
    pub fn amplitude(&self, bits: &[u8]) -> Result<Amplitude> {
        if bits.len() != self.labels.len() {
            return Err(Error::LengthMismatch {
                expected: self.labels.len(),
                got: bits.len(),
            });
        }
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
        Ok(self.amps[index])
    }

    /// `self ⊗ other`, labels concatenated in that order.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        if let Some(l) = other.labels.iter().find(|l| self.labels.contains(l)) {
            return Err(Error::OverlappingLabels(*l));
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        if labels.len() > MAX_QUBITS {
            return Err(Error::TooManyQubits(labels.len()));
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|x| other.amps.iter().map(move |y| x * y))
            .collect();
        Ok(PureState { labels, amps })
    }

    pub fn apply_hadamard(&self, target: QubitLabel) -> Result<PureState> {
        self.apply_unitary(&[target], &UnitaryMatrix::hadamard())
    }

    pub fn apply_x(&self, target: QubitLabel) -> Result<PureState> {
        let shift = self.shift(target)?;
        let mut out = self.clone();
        for i in 0..out.amps.len() {
            out.amps[i] = self.amps[i ^ (1 << shift)];
        }
        Ok(out)
    }

    pub fn apply_cnot(&self, control: QubitLabel, target: QubitLabel) -> Result<PureState> {
        if control == target {
            return Err(Error::SameLabel(control));
        }
        let cs = self.shift(control)?;
        let ts = self.shift(target)?;
        let mut out = self.clone();
        for i in 0..out.amps.len() {
            if (i >> cs) & 1 == 1 {
                out.amps[i] = self.amps[i ^ (1 << ts)];
            }
        }
        Ok(out)
    }

    /// Applies `u` to `targets`; the first target is the most significant
    /// bit of `u`'s row/column index.
    pub fn apply_unitary(&self, targets: &[QubitLabel], u: &UnitaryMatrix) -> Result<PureState> {
        if u.dim() != 1 << targets.len() {
            return Err(Error::DimensionMismatch {
                dim: u.dim(),
                targets: targets.len(),
            });
        }
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::SameLabel(*t));
            }
        }
        let shifts = targets
            .iter()
            .map(|&t| self.shift(t))
            .collect::<Result<Vec<_>>>()?;
        let k = targets.len();
        let target_mask: usize = shifts.iter().map(|s| 1 << s).sum();
        // Full index for base `b` (target bits cleared) and sub-index `j`.
        let spread = |base: usize, j: usize| -> usize {
            shifts.iter().enumerate().fold(base, |acc, (pos, &s)| {
                acc | (((j >> (k - 1 - pos)) & 1) << s)
            })
        };

        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let mut local = vec![Complex64::new(0.0, 0.0); u.dim()];
        for base in (0..self.amps.len()).filter(|i| i & target_mask == 0) {
            for (j, slot) in local.iter_mut().enumerate() {
                *slot = self.amps[spread(base, j)];
            }
            for row in 0..u.dim() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (col, v) in local.iter().enumerate() {
                    acc += u.entry(row, col) * v;
                }
                out[spread(base, row)] = acc;
            }
        }
        Ok(PureState {
            labels: self.labels.clone(),
            amps: out,
        })
    }

    /// Renames one qubit.
    pub fn relabel(&self, from: QubitLabel, to: QubitLabel) -> Result<PureState> {
        let pos = self.position(from)?;
        if from != to && self.contains(to) {
            return Err(Error::DuplicateLabel(to));
        }
        let mut out = self.clone();
        out.labels[pos] = to;
        Ok(out)
    }

    /// Same physical state with labels rearranged into `order`.
    pub fn reorder(&self, order: &[QubitLabel]) -> Result<PureState> {
        check_unique(order)?;
        if order.len() != self.labels.len() || order.iter().any(|l| !self.contains(*l)) {
            return Err(Error::LabelSetMismatch);
        }
        let n = order.len();
        let old_shifts = order
            .iter()
            .map(|&l| self.shift(l))
            .collect::<Result<Vec<_>>>()?;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (new_index, slot) in amps.iter_mut().enumerate() {
            let old_index = old_shifts.iter().enumerate().fold(0usize, |acc, (pos, &s)| {
                acc | (((new_index >> (n - 1 - pos)) & 1) << s)
            });
            *slot = self.amps[old_index];
        }
        Ok(PureState {
            labels: order.to_vec(),
            amps,
        })
    }

    /// Removes `target`, which must be in a product state with the rest of
    /// the register.
    pub fn discard(&self, target: QubitLabel) -> Result<PureState> {
        self.discard_group(&[target])
    }

    /// Removes several qubits at once. The group may be entangled
    /// internally but must be in a product state with everything else.
    pub fn discard_group(&self, targets: &[QubitLabel]) -> Result<PureState> {
        check_unique(targets)?;
        for &t in targets {
            self.position(t)?;
        }
        let kept: Vec<QubitLabel> = self
            .labels
            .iter()
            .copied()
            .filter(|l| !targets.contains(l))
            .collect();
        let mut order = kept.clone();
        order.extend_from_slice(targets);
        let arranged = self.reorder(&order)?;

        // Row r, column j: amplitude of |r⟩_kept |j⟩_targets.
        let width = 1usize << targets.len();
        let rows = arranged.amps.len() / width;
        let amps = &arranged.amps;
        let column = |j: usize| (0..rows).map(move |r| amps[r * width + j]);
        let col_norm = |j: usize| column(j).map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let pivot = (0..width)
            .max_by(|&x, &y| col_norm(x).total_cmp(&col_norm(y)))
            .expect("at least one column");
        let pivot_norm = col_norm(pivot);
        let rest: Vec<Complex64> = column(pivot).map(|z| z / pivot_norm).collect();

        let mut residual = 0.0f64;
        for j in 0..width {
            let coeff: Complex64 = rest.iter().zip(column(j)).map(|(r, z)| r.conj() * z).sum();
            for (r, z) in column(j).enumerate() {
                residual = residual.max((z - rest[r] * coeff).norm());
            }
        }
        if residual > TOLERANCE {
            return Err(Error::NotSeparable {
                label: targets[0],
                residual,
            });
        }
        Ok(PureState {
            labels: kept,
            amps: rest,
        })
    }

    /// Smallest ‖self − φ·other‖∞ over unit phases φ, after aligning
    /// `other` to this state's label order.
    ///
    /// The phase is fixed on this state's largest amplitude, which is within
    /// a factor of two of the true minimum and exact when the states agree.
    pub fn phase_deviation(&self, other: &PureState) -> Result<f64> {
        let other = other.reorder(&self.labels)?;
        let (pivot, _) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("state has at least one amplitude");
        let o = other.amps[pivot];
        let phase = if o.norm() > 0.0 {
            let ratio = self.amps[pivot] / o;
            ratio / ratio.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(x, y)| (x - phase * y).norm())
            .fold(0.0f64, f64::max))
    }

    pub fn equal_up_to_global_phase(&self, other: &PureState, tol: f64) -> Result<bool> {
        Ok(self.phase_deviation(other)? <= tol)
    }

    /// JSON debug dump: `{"labels": [...], "amps": [[re, im], ...]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct StateDump {
    labels: Vec<QubitLabel>,
    amps: Vec<[f64; 2]>,
}

impl Serialize for PureState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateDump {
            labels: self.labels.clone(),
            amps: self.amps.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let dump = StateDump::deserialize(deserializer)?;
        let amps = dump.amps.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        PureState::from_amplitudes(&dump.labels, amps).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.labels.len();
        let names: Vec<_> = self.labels.iter().map(|l| l.as_str()).collect();
        write!(f, "[{}]", names.join(","))?;
        let mut first = true;
        for (i, z) in self.amps.iter().enumerate() {
            if z.norm() <= TOLERANCE {
                continue;
            }
            let ket: String = (0..n)
                .map(|p| if (i >> (n - 1 - p)) & 1 == 1 { '1' } else { '0' })
                .collect();
            let sep = if first { " " } else { " + " };
            write!(f, "{sep}({:.4}{:+.4}i)|{ket}⟩", z.re, z.im)?;
            first = false;
        }
        Ok(())
    }
}

/// Two-qubit Bell-type states used as carriers and test fixtures.
pub mod bell {
    use super::{PureState, QubitLabel};
    use std::f64::consts::FRAC_1_SQRT_2 as R;

    /// (|00⟩ + |11⟩)/√2
    pub fn phi_plus(x: QubitLabel, y: QubitLabel) -> PureState {
        PureState::from_kets(&[x, y], &[(R, "00"), (R, "11")]).expect("valid")
    }

    /// (|00⟩ − |11⟩)/√2
    pub fn phi_minus(x: QubitLabel, y: QubitLabel) -> PureState {
        PureState::from_kets(&[x, y], &[(R, "00"), (-R, "11")]).expect("valid")
    }

    /// (|01⟩ + |10⟩)/√2
    pub fn psi_plus(x: QubitLabel, y: QubitLabel) -> PureState {
        PureState::from_kets(&[x, y], &[(R, "01"), (R, "10")]).expect("valid")
    }

    /// (|01⟩ − |10⟩)/√2
    pub fn psi_minus(x: QubitLabel, y: QubitLabel) -> PureState {
        PureState::from_kets(&[x, y], &[(R, "01"), (-R, "10")]).expect("valid")
    }

    /// (|0⟩ + |1⟩)/√2
    pub fn plus(x: QubitLabel) -> PureState {
        PureState::from_kets(&[x], &[(R, "0"), (R, "1")]).expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::bell::*;
    use super::*;
    use QubitLabel::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_state_encoding_is_big_endian() {
        let s = PureState::basis_state(&[Q1, Q2], &[0, 1]).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        let s = PureState::basis_state(&[A, B, C], &[1, 1, 1]).unwrap();
        assert_eq!(s.amplitudes()[7], c(1.0));
        let s = PureState::basis_state(&[A], &[0]).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0)]);
    }

    #[test]
    fn basis_state_errors() {
        assert_eq!(
            PureState::basis_state(&[A, A], &[0, 0]),
            Err(Error::DuplicateLabel(A))
        );
        assert_eq!(
            PureState::basis_state(&[A, B], &[0]),
            Err(Error::LengthMismatch { expected: 2, got: 1 })
        );
        assert_eq!(PureState::basis_state(&[A], &[2]), Err(Error::InvalidBit(2)));
    }

    #[test]
    fn tensor_concatenates_labels() {
        let s = PureState::basis_state(&[A], &[0])
            .unwrap()
            .tensor(&PureState::basis_state(&[B], &[1]).unwrap())
            .unwrap();
        assert_eq!(s, PureState::basis_state(&[A, B], &[0, 1]).unwrap());

        let s = phi_plus(A, B)
            .tensor(&PureState::basis_state(&[C], &[0]).unwrap())
            .unwrap();
        let expected = PureState::from_kets(&[A, B, C], &[(H, "000"), (H, "110")]).unwrap();
        assert_eq!(s.labels(), &[A, B, C]);
        assert!(s.phase_deviation(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn tensor_rejects_overlap() {
        let a = PureState::basis_state(&[A], &[0]).unwrap();
        assert_eq!(a.tensor(&a), Err(Error::OverlappingLabels(A)));
    }

    #[test]
    fn hadamard_on_zero() {
        let s = PureState::basis_state(&[A], &[0]).unwrap().apply_hadamard(A).unwrap();
        assert!(s.phase_deviation(&plus(A)).unwrap() < 1e-15);
        assert_eq!(
            PureState::basis_state(&[A], &[0]).unwrap().apply_hadamard(B),
            Err(Error::UnknownLabel(B))
        );
    }

    #[test]
    fn hadamard_pair_maps_psi_plus_to_phi_minus() {
        let s = psi_plus(A, Bbar).apply_hadamard(A).unwrap().apply_hadamard(Bbar).unwrap();
        assert!(s.phase_deviation(&phi_minus(A, Bbar)).unwrap() < 1e-15);
    }

    #[test]
    fn cnot_flips_target_on_control_one() {
        let s = PureState::basis_state(&[A, Q1], &[1, 0]).unwrap();
        let out = s.apply_cnot(A, Q1).unwrap();
        assert_eq!(out, PureState::basis_state(&[A, Q1], &[1, 1]).unwrap());
        assert_eq!(s.apply_cnot(A, A), Err(Error::SameLabel(A)));
        assert_eq!(s.apply_cnot(A, Q2), Err(Error::UnknownLabel(Q2)));
    }

    #[test]
    fn cnot_on_counterfeit_branch() {
        // (|0,1,0⟩ + |1,0,1⟩)/√2 over (b, c, cf), then C_c,cf.
        let s = PureState::from_kets(&[B, C, Cf], &[(H, "010"), (H, "101")]).unwrap();
        let out = s.apply_cnot(C, Cf).unwrap();
        let expected = psi_plus(B, C)
            .tensor(&PureState::basis_state(&[Cf], &[1]).unwrap())
            .unwrap();
        assert!(out.phase_deviation(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn apply_unitary_respects_target_order() {
        let s = PureState::basis_state(&[A, B], &[1, 0]).unwrap();
        // CNOT with b as the first (control) target does nothing here.
        let out = s.apply_unitary(&[B, A], &UnitaryMatrix::cnot()).unwrap();
        assert_eq!(out, s);
        let out = s.apply_unitary(&[A, B], &UnitaryMatrix::cnot()).unwrap();
        assert_eq!(out, PureState::basis_state(&[A, B], &[1, 1]).unwrap());
    }

    #[test]
    fn apply_unitary_dimension_mismatch() {
        let s = PureState::basis_state(&[A, B], &[0, 0]).unwrap();
        assert!(matches!(
            s.apply_unitary(&[A], &UnitaryMatrix::cnot()),
            Err(Error::DimensionMismatch { dim: 4, targets: 1 })
        ));
        assert_eq!(
            s.apply_unitary(&[A, A], &UnitaryMatrix::cnot()),
            Err(Error::SameLabel(A))
        );
    }

    #[test]
    fn discard_product_factor() {
        let s = PureState::basis_state(&[A, B], &[0, 1]).unwrap();
        assert_eq!(s.discard(B).unwrap(), PureState::basis_state(&[A], &[0]).unwrap());

        let s = phi_plus(A, Bbar)
            .tensor(&plus(Q2))
            .unwrap()
            .tensor(&phi_minus(B, C))
            .unwrap();
        let rest = s.discard(Q2).unwrap();
        let expected = phi_plus(A, Bbar).tensor(&phi_minus(B, C)).unwrap();
        assert_eq!(rest.labels(), &[A, Bbar, B, C]);
        assert!(rest.phase_deviation(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn discard_entangled_is_an_error() {
        let err = phi_plus(A, B).discard(B).unwrap_err();
        assert!(matches!(err, Error::NotSeparable { label: B, .. }));
        assert!(err.is_invariant_breach());
    }

    #[test]
    fn discard_group_allows_internal_entanglement() {
        let s = phi_plus(A, Bbar).tensor(&psi_plus(Q1, Q2)).unwrap();
        let rest = s.discard_group(&[Q1, Q2]).unwrap();
        assert!(rest.phase_deviation(&phi_plus(A, Bbar)).unwrap() < 1e-15);
        assert!(matches!(
            s.discard(Q1),
            Err(Error::NotSeparable { label: Q1, .. })
        ));
        assert_eq!(s.discard_group(&[Q1, C]), Err(Error::UnknownLabel(C)));
    }

    #[test]
    fn global_phase_comparison() {
        let zero = PureState::basis_state(&[A], &[0]).unwrap();
        let minus_zero = PureState::from_kets(&[A], &[(-1.0, "0")]).unwrap();
        let one = PureState::basis_state(&[A], &[1]).unwrap();
        assert!(zero.equal_up_to_global_phase(&minus_zero, 1e-10).unwrap());
        assert!(!zero.equal_up_to_global_phase(&one, 1e-10).unwrap());
        assert_eq!(
            zero.equal_up_to_global_phase(&PureState::basis_state(&[B], &[0]).unwrap(), 1e-10),
            Err(Error::LabelSetMismatch)
        );
    }

    #[test]
    fn comparison_canonicalizes_label_order() {
        let s = PureState::basis_state(&[A, B], &[0, 1]).unwrap();
        let t = PureState::basis_state(&[B, A], &[1, 0]).unwrap();
        assert!(s.equal_up_to_global_phase(&t, 1e-12).unwrap());
        assert_eq!(t.reorder(&[A, B]).unwrap(), s);
    }

    #[test]
    fn from_amplitudes_checks_norm() {
        assert!(matches!(
            PureState::from_amplitudes(&[A], vec![c(1.0), c(1.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            PureState::from_amplitudes(&[A], vec![c(f64::NAN), c(0.0)]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn nine_qubits_are_rejected() {
        let labels = [A, B, C, Q1, Q2, Bbar, Cf];
        let s = PureState::basis_state(&labels, &[0; 7]).unwrap();
        assert_eq!(s.num_qubits(), 7);
        assert!(PureState::basis_state(&[A, A, A, A, A, A, A, A, A], &[0; 9]).is_err());
    }

    #[test]
    fn json_dump_round_trips() {
        let s = psi_minus(B, C);
        let json = s.to_json();
        assert!(json.starts_with(r#"{"labels":["b","c"],"amps":[[0.0,0.0],"#));
        let back: PureState = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn relabel_keeps_amplitudes() {
        let s = phi_plus(A, Q1).relabel(Q1, Bbar).unwrap();
        assert_eq!(s.labels(), &[A, Bbar]);
        assert_eq!(s.amplitudes(), phi_plus(A, Q1).amplitudes());
        assert_eq!(phi_plus(A, Q1).relabel(Q1, A), Err(Error::DuplicateLabel(A)));
    }

    #[test]
    fn label_names_parse() {
        for l in QubitLabel::ALL {
            assert_eq!(l.as_str().parse::<QubitLabel>().unwrap(), l);
        }
        assert!("d".parse::<QubitLabel>().is_err());
    }
}
