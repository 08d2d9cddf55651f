//! Bob's entanglement-split cheat.
//!
//! In round 2 Bob intercepts Charlie's data qubit and applies a fixed
//! three-qubit permutation to (b, q1, q2). The shared GHZ-type carrier turns
//! into two EPR pairs: (a, b̄) with Alice, where b̄ is the old q1, and (b, c)
//! with Charlie. From then on Bob answers Alice as the legitimate receiver on
//! one pair, reads every data bit, and feeds Charlie counterfeit qubits
//! through the other pair. The carrier kind of both pairs depends on the
//! round-2 data bit, which Bob learns afterwards from the public comparison.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::detection::{self, ComparisonReport};
use crate::error::{Error, Result};
use crate::protocol::{
    alice_encode_even, alice_encode_odd, bob_decode_honest, charlie_decode_honest, check_bits,
    end_of_round_toggle, ensure_no_data_qubits, make_g, Parity, RoundKind, RoundRecord,
    Transcript,
};
use crate::seeds::{self, SimRng, Stream};
use crate::statevec::{bell, BellOutcome, PureState, QubitLabel, UnitaryMatrix, TOLERANCE};

use QubitLabel::{Bbar, Cf, A, B, C, Q1, Q2};

/// What Bob knows about the round-2 data bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Q2Knowledge {
    #[default]
    Unknown,
    Zero,
    One,
}

impl Q2Knowledge {
    pub fn bit(self) -> Option<u8> {
        match self {
            Q2Knowledge::Unknown => None,
            Q2Knowledge::Zero => Some(0),
            Q2Knowledge::One => Some(1),
        }
    }

    fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Q2Knowledge::Zero
        } else {
            Q2Knowledge::One
        }
    }
}

impl Serialize for Q2Knowledge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.bit() {
            None => s.serialize_str("unknown"),
            Some(b) => s.serialize_u8(b),
        }
    }
}

impl<'de> Deserialize<'de> for Q2Knowledge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Bit(u8),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Bit(0) => Ok(Q2Knowledge::Zero),
            Raw::Bit(1) => Ok(Q2Knowledge::One),
            Raw::Text(t) if t == "unknown" => Ok(Q2Knowledge::Unknown),
            _ => Err(serde::de::Error::custom("expected 0, 1 or \"unknown\"")),
        }
    }
}

/// Bob's bookkeeping, one entry per executed round (index 0 is round 1).
///
/// `d` holds the bit Bob read, `e` the bit he announces, `psi` the bit he
/// sent on to Charlie. Round 1 is played honestly; its entries all hold
/// Bob's honest measurement.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheatRecords {
    pub d: Vec<u8>,
    pub e: Vec<u8>,
    pub psi: Vec<u8>,
    #[serde(rename = "q2")]
    pub q2_knowledge: Q2Knowledge,
}

impl CheatRecords {
    fn set(&mut self, round: usize, d: u8, e: u8, psi: u8) {
        let k = round - 1;
        for v in [&mut self.d, &mut self.e, &mut self.psi] {
            if v.len() <= k {
                v.resize(k + 1, 0);
            }
        }
        self.d[k] = d;
        self.e[k] = e;
        self.psi[k] = psi;
    }

    /// (d, e, ψ) for 1-based `round`.
    pub fn round(&self, round: usize) -> Option<(u8, u8, u8)> {
        let k = round.checked_sub(1)?;
        Some((*self.d.get(k)?, *self.e.get(k)?, *self.psi.get(k)?))
    }
}

/// Basis images of the split permutation on (b, q1, q2), big-endian.
pub const SPLIT_TRUTH_TABLE: [(u8, u8); 8] = [
    (0b000, 0b000),
    (0b001, 0b110),
    (0b010, 0b111),
    (0b011, 0b001),
    (0b100, 0b100),
    (0b101, 0b010),
    (0b110, 0b011),
    (0b111, 0b101),
];

/// The 8×8 permutation Bob applies to (b, q1, q2) in the split round.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitUnitary(UnitaryMatrix);

impl SplitUnitary {
    pub fn new() -> Self {
        let mut image = [0usize; 8];
        for (input, output) in SPLIT_TRUTH_TABLE {
            image[input as usize] = output as usize;
        }
        Self(UnitaryMatrix::from_permutation(&image).expect("truth table is a bijection"))
    }

    pub fn matrix(&self) -> &UnitaryMatrix {
        &self.0
    }

    pub const TARGETS: [QubitLabel; 3] = [B, Q1, Q2];
}

impl Default for SplitUnitary {
    fn default() -> Self {
        Self::new()
    }
}

/// Which of the three EPR carriers (b, c) and (a, b̄) share.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitCarrier {
    /// (|00⟩+|11⟩)/√2 on both pairs.
    PhiPlus,
    /// (|00⟩−|11⟩)/√2 on both pairs.
    PhiMinus,
    /// (|01⟩+|10⟩)/√2 on both pairs.
    PsiPlus,
}

impl SplitCarrier {
    pub const ALL: [SplitCarrier; 3] = [
        SplitCarrier::PhiPlus,
        SplitCarrier::PhiMinus,
        SplitCarrier::PsiPlus,
    ];

    pub fn pair(self, x: QubitLabel, y: QubitLabel) -> PureState {
        match self {
            SplitCarrier::PhiPlus => bell::phi_plus(x, y),
            SplitCarrier::PhiMinus => bell::phi_minus(x, y),
            SplitCarrier::PsiPlus => bell::psi_plus(x, y),
        }
    }

    /// Both pairs, labels (a, b̄, b, c).
    pub fn state(self) -> PureState {
        self.pair(A, Bbar)
            .tensor(&self.pair(B, C))
            .expect("disjoint pairs")
    }

    /// Identifies a post-split carrier state, if it is one of the three.
    pub fn classify(state: &PureState) -> Option<SplitCarrier> {
        SplitCarrier::ALL.into_iter().find(|k| {
            state
                .equal_up_to_global_phase(&k.state(), TOLERANCE)
                .unwrap_or(false)
        })
    }

    /// Charlie reads the counterfeit bit inverted on the (|01⟩+|10⟩) pair.
    pub fn flips_resent_bit(self) -> bool {
        self == SplitCarrier::PsiPlus
    }
}

/// The state right after U on (b, q1, q2), before anything is discarded.
pub fn apply_split_unitary(state: &PureState) -> Result<PureState> {
    state.apply_unitary(&SplitUnitary::TARGETS, SplitUnitary::new().matrix())
}

/// Round-2 split: U on (b, q1, q2), discard q2, keep q1 as b̄.
pub fn execute_split(
    state: &PureState,
    round: RoundKind,
    records: &mut CheatRecords,
) -> Result<PureState> {
    if round.index() != 2 {
        return Err(Error::WrongRound {
            expected: "2".into(),
            got: round.index(),
        });
    }
    let split = apply_split_unitary(state)?
        .discard(Q2)?
        .relabel(Q1, Bbar)?;
    records.set(2, 0, 0, 0);
    Ok(split)
}

/// End-of-round Hadamards on a, b̄, b and c.
pub fn maintain_split_carriers(state: &PureState) -> Result<PureState> {
    ensure_no_data_qubits(state)?;
    state
        .apply_hadamard(A)?
        .apply_hadamard(Bbar)?
        .apply_hadamard(B)?
        .apply_hadamard(C)
}

/// Prepares the counterfeit |ψ⟩ on cf and entangles it with C_b,cf.
pub fn resend_bit(state: &PureState, psi: u8) -> Result<PureState> {
    if state.contains(Cf) {
        return Err(Error::OverlappingLabels(Cf));
    }
    state
        .tensor(&PureState::basis_state(&[Cf], &[psi])?)?
        .apply_cnot(B, Cf)
}

fn require_round(round: RoundKind, parity: Parity, min: usize) -> Result<()> {
    if round.parity() != parity || round.index() < min {
        let what = match parity {
            Parity::Odd => "odd",
            Parity::Even => "even",
        };
        return Err(Error::WrongRound {
            expected: format!("{what} round >= {min}"),
            got: round.index(),
        });
    }
    Ok(())
}

/// Odd-round interception: C_b̄,q1 C_b̄,q2 leaves (q1, q2) in |q q⟩, which
/// Bob measures and destroys. Records d = e = ψ = q.
pub fn intercept_odd<R: Rng + ?Sized>(
    state: &PureState,
    round: RoundKind,
    records: &mut CheatRecords,
    rng: &mut R,
) -> Result<(u8, PureState)> {
    require_round(round, Parity::Odd, 3)?;
    let (bits, collapsed) = state
        .apply_cnot(Bbar, Q1)?
        .apply_cnot(Bbar, Q2)?
        .measure_computational(&[Q1, Q2], rng)?;
    if bits[0] != bits[1] {
        return Err(Error::InvariantBreach(format!(
            "round {}: intercepted data pair read ({}, {})",
            round.index(),
            bits[0],
            bits[1]
        )));
    }
    let q = bits[0];
    records.set(round.index(), q, q, q);
    Ok((q, collapsed.discard_group(&[Q1, Q2])?))
}

/// Even-round interception: C_b̄,q1 then a Bell measurement of (q1, q2).
/// Only |0̄⟩ = Φ⁺ and |1̄⟩ = Ψ⁺ can occur; they read as 0 and 1. The read bit
/// d is split into (e, ψ) with e uniform and e ⊕ ψ = d.
pub fn intercept_even<R: Rng + ?Sized, S: Rng + ?Sized>(
    state: &PureState,
    round: RoundKind,
    records: &mut CheatRecords,
    rng: &mut R,
    split_rng: &mut S,
) -> Result<(u8, PureState)> {
    require_round(round, Parity::Even, 4)?;
    let (outcome, collapsed) = state.apply_cnot(Bbar, Q1)?.measure_bell((Q1, Q2), rng)?;
    let d = match outcome {
        BellOutcome::PhiPlus => 0,
        BellOutcome::PsiPlus => 1,
        other => {
            return Err(Error::InvariantBreach(format!(
                "round {}: Bell outcome {other:?} is impossible on split carriers",
                round.index()
            )))
        }
    };
    let e: u8 = split_rng.random_range(0..=1);
    records.set(round.index(), d, e, d ^ e);
    Ok((d, collapsed.discard_group(&[Q1, Q2])?))
}

/// Bob's post-protocol fix-up from publicly announced (index, Alice bit)
/// pairs.
///
/// The first announced even index ≥ 4 reveals q₂ = d ⊕ q at that index; when
/// q₂ = 1 every even-round d from round 4 on is flipped. An announced round 2
/// overwrites d₂ directly.
pub fn post_correction(
    records: &CheatRecords,
    announced: &[(usize, u8)],
) -> Result<(Vec<u8>, Q2Knowledge)> {
    let mut sorted = announced.to_vec();
    sorted.sort_unstable();
    let lookup = |i: usize| -> Result<u8> {
        records
            .d
            .get(i.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::Config(format!("announced index {i} outside 1..={}", records.d.len())))
    };

    for &(i, _) in &sorted {
        lookup(i)?;
    }

    let mut inferred: Option<u8> = None;
    for &(i, alice) in sorted.iter().filter(|(i, _)| *i >= 4 && i % 2 == 0) {
        let q2 = lookup(i)? ^ alice;
        match inferred {
            None => inferred = Some(q2),
            Some(first) if first != q2 => {
                return Err(Error::InvariantBreach(format!(
                    "announced round {i} implies q2 = {q2}, an earlier round implies {first}"
                )))
            }
            Some(_) => {}
        }
    }

    let mut recovered = records.d.clone();
    if inferred == Some(1) {
        for (k, bit) in recovered.iter_mut().enumerate() {
            let round = k + 1;
            if round >= 4 && round % 2 == 0 {
                *bit ^= 1;
            }
        }
    }
    if let Some(&(_, alice)) = sorted.iter().find(|(i, _)| *i == 2) {
        recovered[1] = alice;
    }
    let knowledge = inferred.map_or(Q2Knowledge::Unknown, Q2Knowledge::from_bit);
    Ok((recovered, knowledge))
}

/// Step-by-step session with a cheating Bob. Round 1 is honest, round 2
/// performs the split, later rounds intercept and resend.
#[derive(Debug, Clone)]
pub struct AttackedSession {
    state: PureState,
    next_round: usize,
    records: CheatRecords,
    rng: SimRng,
    split_rng: SimRng,
}

impl AttackedSession {
    pub fn new(seed: u64) -> Self {
        Self {
            state: make_g(),
            next_round: 1,
            records: CheatRecords::default(),
            rng: seeds::stream(seed, Stream::Measurement),
            split_rng: seeds::stream(seed, Stream::RecordSplit),
        }
    }

    /// Carrier state entering the next round: |G⟩ before round 1, |E⟩
    /// before round 2, two EPR pairs on (a, b̄) and (b, c) afterwards.
    pub fn carrier(&self) -> &PureState {
        &self.state
    }

    pub fn records(&self) -> &CheatRecords {
        &self.records
    }

    pub fn into_records(self) -> CheatRecords {
        self.records
    }

    pub fn next_round(&self) -> usize {
        self.next_round
    }

    pub fn run_round(&mut self, q: u8) -> Result<RoundRecord> {
        check_bits(&[q])?;
        let kind = RoundKind::new(self.next_round)?;
        let i = kind.index();
        let (bob, charlie, next) = match i {
            1 => {
                let encoded = alice_encode_odd(&self.state, q)?;
                let (bob, s) = bob_decode_honest(&encoded, kind, &mut self.rng)?;
                let (charlie, s) = charlie_decode_honest(&s, &mut self.rng)?;
                self.records.set(1, bob, bob, bob);
                (bob, charlie, end_of_round_toggle(&s)?)
            }
            2 => {
                let encoded = alice_encode_even(&self.state, q)?;
                let split = execute_split(&encoded, kind, &mut self.records)?;
                log::debug!("split carriers {}", split.to_json());
                let (charlie, s) = charlie_decode_honest(&resend_bit(&split, 0)?, &mut self.rng)?;
                (0, charlie, maintain_split_carriers(&s)?)
            }
            _ => {
                let s = if kind.is_odd() {
                    let encoded = alice_encode_odd(&self.state, q)?;
                    intercept_odd(&encoded, kind, &mut self.records, &mut self.rng)?.1
                } else {
                    let encoded = alice_encode_even(&self.state, q)?;
                    intercept_even(
                        &encoded,
                        kind,
                        &mut self.records,
                        &mut self.rng,
                        &mut self.split_rng,
                    )?
                    .1
                };
                let (_, e, psi) = self.records.round(i).expect("round recorded");
                let (charlie, s) = charlie_decode_honest(&resend_bit(&s, psi)?, &mut self.rng)?;
                (e, charlie, maintain_split_carriers(&s)?)
            }
        };
        self.state = next;
        self.next_round += 1;
        log::debug!("round {i} carrier {}", self.state.to_json());
        Ok(RoundRecord {
            i,
            kind: kind.parity(),
            q,
            bob,
            charlie,
        })
    }
}

/// Everything one attacked session produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackOutcome {
    pub transcript: Transcript,
    pub records: CheatRecords,
    pub comparison: ComparisonReport,
    pub recovered: Vec<u8>,
}

/// Runs an attacked session and compares the given rounds publicly.
pub fn run_attacked_session_with(
    bits: &[u8],
    compared: &BTreeSet<usize>,
    seed: u64,
) -> Result<AttackOutcome> {
    if bits.len() < 2 {
        return Err(Error::Config("an attacked session needs at least two rounds".into()));
    }
    check_bits(bits)?;
    let mut session = AttackedSession::new(seed);
    let rounds = bits
        .iter()
        .map(|&q| session.run_round(q))
        .collect::<Result<Vec<_>>>()?;
    let transcript = Transcript { rounds };
    let comparison = detection::compare(&transcript, compared)?;
    let mut records = session.into_records();
    let (recovered, knowledge) = post_correction(&records, &comparison.announcements())?;
    records.q2_knowledge = knowledge;
    Ok(AttackOutcome {
        transcript,
        records,
        comparison,
        recovered,
    })
}

/// Runs an attacked session with a Bernoulli(`compare_fraction`) public
/// comparison drawn from the session seed.
pub fn run_attacked_session(bits: &[u8], compare_fraction: f64, seed: u64) -> Result<AttackOutcome> {
    let mut rng = seeds::stream(seed, Stream::Comparison);
    let compared = detection::select_comparison(bits.len(), compare_fraction, &mut rng)?;
    run_attacked_session_with(bits, &compared, seed)
}
