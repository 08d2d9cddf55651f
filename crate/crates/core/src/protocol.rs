//! The honest three-party protocol on reusable GHZ-type carriers.
//!
//! Odd rounds use |G⟩ = (|000⟩+|111⟩)/√2 and deliver the data bit to both
//! Bob and Charlie. Even rounds use |E⟩, the even-parity superposition, and
//! split the bit so that Bob's and Charlie's results XOR to it. At the end of
//! every round each party applies H to its carrier qubit, which maps |G⟩ and
//! |E⟩ onto each other.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeds::{self, Stream};
use crate::statevec::{PureState, QubitLabel};

use QubitLabel::{A, B, C, Cf, Q1, Q2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// A 1-based round number together with its parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoundKind {
    index: usize,
}

impl RoundKind {
    pub fn new(index: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::Config("round numbers start at 1".into()));
        }
        Ok(Self { index })
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn parity(self) -> Parity {
        if self.index % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self.parity() == Parity::Odd
    }
}

/// One executed round as seen by the three parties.
///
/// `bob` is the bit Bob reports for the round; for an honest Bob this is his
/// measurement, for a cheating Bob it is his announced bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub i: usize,
    pub kind: Parity,
    pub q: u8,
    pub bob: u8,
    pub charlie: u8,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub rounds: Vec<RoundRecord>,
}

impl Transcript {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Record for 1-based round `i`.
    pub fn round(&self, i: usize) -> Option<&RoundRecord> {
        i.checked_sub(1).and_then(|k| self.rounds.get(k))
    }

    pub fn alice_bits(&self) -> Vec<u8> {
        self.rounds.iter().map(|r| r.q).collect()
    }
}

pub(crate) fn check_bits(bits: &[u8]) -> Result<()> {
    match bits.iter().find(|&&b| b > 1) {
        Some(&b) => Err(Error::InvalidBit(b)),
        None => Ok(()),
    }
}

/// (|000⟩ + |111⟩)/√2 on a, b, c.
pub fn make_g() -> PureState {
    PureState::from_kets(&[A, B, C], &[(FRAC_1_SQRT_2, "000"), (FRAC_1_SQRT_2, "111")])
        .expect("valid carrier")
}

/// (|000⟩ + |110⟩ + |101⟩ + |011⟩)/2 on a, b, c.
pub fn make_e() -> PureState {
    PureState::from_kets(
        &[A, B, C],
        &[(0.5, "000"), (0.5, "110"), (0.5, "101"), (0.5, "011")],
    )
    .expect("valid carrier")
}

/// |q q⟩ on (q1, q2).
pub fn odd_data_pair(q: u8) -> Result<PureState> {
    PureState::basis_state(&[Q1, Q2], &[q, q])
}

/// (|0,q⟩ + |1,1⊕q⟩)/√2 on (q1, q2).
pub fn even_data_pair(q: u8) -> Result<PureState> {
    check_bits(&[q])?;
    let k0 = format!("0{q}");
    let k1 = format!("1{}", 1 - q);
    PureState::from_kets(&[Q1, Q2], &[(FRAC_1_SQRT_2, &k0), (FRAC_1_SQRT_2, &k1)])
}

/// Appends |q q⟩ on (q1, q2) and applies C_a,q1 then C_a,q2.
pub fn alice_encode_odd(carrier: &PureState, q: u8) -> Result<PureState> {
    carrier
        .tensor(&odd_data_pair(q)?)?
        .apply_cnot(A, Q1)?
        .apply_cnot(A, Q2)
}

/// Appends (|0,q⟩+|1,1⊕q⟩)/√2 on (q1, q2) and applies C_a,q1.
pub fn alice_encode_even(carrier: &PureState, q: u8) -> Result<PureState> {
    carrier.tensor(&even_data_pair(q)?)?.apply_cnot(A, Q1)
}

/// Applies C_{carrier,data}, measures `data` and drops it from the state.
pub fn decode_with<R: Rng + ?Sized>(
    state: &PureState,
    carrier: QubitLabel,
    data: QubitLabel,
    rng: &mut R,
) -> Result<(u8, PureState)> {
    let (bits, collapsed) = state
        .apply_cnot(carrier, data)?
        .measure_computational(&[data], rng)?;
    Ok((bits[0], collapsed.discard(data)?))
}

/// Bob's side: C_b,q1 and a computational measurement of q1.
///
/// The same decode is used in both round kinds.
pub fn bob_decode_honest<R: Rng + ?Sized>(
    state: &PureState,
    kind: RoundKind,
    rng: &mut R,
) -> Result<(u8, PureState)> {
    let (bit, rest) = decode_with(state, B, Q1, rng)?;
    log::trace!("round {} bob decoded {bit}", kind.index());
    Ok((bit, rest))
}

/// Charlie's side: C_c,x and a measurement of x, where x is q2 or, when Bob
/// has substituted a counterfeit, cf.
pub fn charlie_decode_honest<R: Rng + ?Sized>(
    state: &PureState,
    rng: &mut R,
) -> Result<(u8, PureState)> {
    let data = if state.contains(Q2) {
        Q2
    } else if state.contains(Cf) {
        Cf
    } else {
        return Err(Error::UnknownLabel(Q2));
    };
    decode_with(state, C, data, rng)
}

pub(crate) fn ensure_no_data_qubits(state: &PureState) -> Result<()> {
    match [Q1, Q2, Cf].into_iter().find(|&l| state.contains(l)) {
        Some(l) => Err(Error::LeftoverDataQubit(l)),
        None => Ok(()),
    }
}

/// H on a, b and c.
pub fn end_of_round_toggle(state: &PureState) -> Result<PureState> {
    ensure_no_data_qubits(state)?;
    state.apply_hadamard(A)?.apply_hadamard(B)?.apply_hadamard(C)
}

/// Step-by-step honest session. Holds the carrier between rounds.
#[derive(Debug, Clone)]
pub struct HonestSession<R> {
    carrier: PureState,
    next_round: usize,
    rng: R,
}

impl<R: Rng> HonestSession<R> {
    pub fn new(rng: R) -> Self {
        Self {
            carrier: make_g(),
            next_round: 1,
            rng,
        }
    }

    /// The carrier entering the next round.
    pub fn carrier(&self) -> &PureState {
        &self.carrier
    }

    pub fn next_round(&self) -> RoundKind {
        RoundKind { index: self.next_round }
    }

    pub fn run_round(&mut self, q: u8) -> Result<RoundRecord> {
        check_bits(&[q])?;
        let kind = self.next_round();
        let encoded = match kind.parity() {
            Parity::Odd => alice_encode_odd(&self.carrier, q)?,
            Parity::Even => alice_encode_even(&self.carrier, q)?,
        };
        let (bob, state) = bob_decode_honest(&encoded, kind, &mut self.rng)?;
        let (charlie, state) = charlie_decode_honest(&state, &mut self.rng)?;
        self.carrier = end_of_round_toggle(&state)?;
        self.next_round += 1;
        log::debug!("round {} carrier {}", kind.index(), self.carrier.to_json());
        Ok(RoundRecord {
            i: kind.index(),
            kind: kind.parity(),
            q,
            bob,
            charlie,
        })
    }
}

/// Runs `bits.len()` honest rounds, starting with an odd round on |G⟩.
pub fn run_honest_session(bits: &[u8], seed: u64) -> Result<Transcript> {
    if bits.is_empty() {
        return Err(Error::Config("a session needs at least one round".into()));
    }
    check_bits(bits)?;
    let mut session = HonestSession::new(seeds::stream(seed, Stream::Measurement));
    let rounds = bits
        .iter()
        .map(|&q| session.run_round(q))
        .collect::<Result<Vec<_>>>()?;
    Ok(Transcript { rounds })
}
