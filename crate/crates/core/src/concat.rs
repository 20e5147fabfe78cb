//! Outer graph code concatenated with the inner GHZ erasure code.
//!
//! Decoding handles the announced erasure first (inner recovery), then runs
//! the outer syndrome decoder on what survives.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fp::{FpVector, Prime};
use crate::ghz::{Corruption, GhzLayout, Side, PURITY_THRESHOLD};
use crate::graph_code::{
    operator_label, single_qudit_errors, CodeGraph, DecoderUnitary, SyndromeTable,
};
use crate::pauli::PauliError;
use crate::statevec::StateVector;

/// Fidelity at or above which a trial counts as a success.
pub const SUCCESS_FIDELITY: f64 = 1.0 - 1e-9;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Blocking {
    /// All outer qubits go into one inner block of size `|Y|`.
    WholeRegister,
    /// Each outer qubit becomes message qubit `1` of its own `n`-qubit
    /// block; the other message qubits of the block start in `|0>`.
    PerQubit { n: usize },
}

/// One use of the channel.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ChannelEvent {
    /// Announced erasure: physical address and what happened there.
    pub erasure: Option<(usize, Corruption)>,
    /// Computational error on the physical register, before any decoding.
    pub physical: Option<PauliError>,
    /// Computational error on the outer codeword after inner recovery.
    pub outer: Option<PauliError>,
}

impl ChannelEvent {
    pub fn erasure_address(&self) -> Option<usize> {
        self.erasure.as_ref().map(|(a, _)| *a)
    }
}

/// What happened at each decoding stage.
#[derive(Clone, Debug)]
pub struct DecodeTrace {
    /// Erased address handed to the inner recovery of each block.
    pub inner_positions: Vec<usize>,
    /// Outer codeword recovered by the inner stage.
    pub recovered_outer: StateVector,
    pub syndrome: FpVector,
    /// Logical register before correction.
    pub residual: StateVector,
    pub correction: PauliError,
    pub correction_label: String,
    pub logical: StateVector,
}

#[derive(Clone, Debug)]
pub struct ConcatScheme {
    outer: CodeGraph,
    decoder: DecoderUnitary,
    table: SyndromeTable,
    inner: GhzLayout,
    blocking: Blocking,
}

impl ConcatScheme {
    /// `outer` must carry its syndrome vertices.
    pub fn new(outer: CodeGraph, blocking: Blocking) -> Result<Self> {
        if outer.modulus() != Prime::TWO {
            return Err(Error::QubitOnly {
                gate: "GHZ inner code",
                p: outer.modulus().get(),
            });
        }
        let inner = match blocking {
            Blocking::WholeRegister => GhzLayout::new(outer.output_count())?,
            Blocking::PerQubit { n } => GhzLayout::new(n)?,
        };
        let decoder = outer.decoder_unitary()?;
        let table = outer
            .build_syndrome_table(&single_qudit_errors(outer.modulus(), outer.output_count()))?;
        let scheme = ConcatScheme {
            outer,
            decoder,
            table,
            inner,
            blocking,
        };
        if Prime::TWO
            .checked_pow(scheme.physical_qubits())
            .is_none_or(|d| d > crate::statevec::MAX_AMPLITUDES)
        {
            return Err(Error::RegisterTooLarge(
                "concatenated register exceeds the amplitude limit",
            ));
        }
        Ok(scheme)
    }

    /// The one-qubit example: five-qubit graph code inside one 10-qubit
    /// GHZ block.
    pub fn five_qubit() -> Self {
        Self::new(
            CodeGraph::five_qubit_decoding_graph(),
            Blocking::WholeRegister,
        )
        .expect("static data")
    }

    pub fn outer(&self) -> &CodeGraph {
        &self.outer
    }

    pub fn inner(&self) -> &GhzLayout {
        &self.inner
    }

    pub fn table(&self) -> &SyndromeTable {
        &self.table
    }

    pub fn blocking(&self) -> Blocking {
        self.blocking
    }

    fn blocks(&self) -> usize {
        match self.blocking {
            Blocking::WholeRegister => 1,
            Blocking::PerQubit { .. } => self.outer.output_count(),
        }
    }

    fn block_size(&self) -> usize {
        self.inner.qubits()
    }

    pub fn physical_qubits(&self) -> usize {
        self.blocks() * self.block_size()
    }

    /// Address map of block `i` into the physical register.
    fn block_map(&self, i: usize) -> Vec<usize> {
        (0..self.block_size())
            .map(|a| i * self.block_size() + a)
            .collect()
    }

    /// Physical addresses of outer qubits before encoding.
    fn outer_inputs(&self) -> Vec<usize> {
        match self.blocking {
            Blocking::WholeRegister => self.inner.message_addresses(),
            Blocking::PerQubit { .. } => {
                (0..self.blocks()).map(|i| i * self.block_size()).collect()
            }
        }
    }

    pub fn encode(&self, logical: &StateVector) -> Result<StateVector> {
        let codeword = self.outer.encode(logical)?;
        self.encode_inner(&codeword)
    }

    /// Inner encoding of an outer codeword.
    pub fn encode_inner(&self, codeword: &StateVector) -> Result<StateVector> {
        if codeword.qudits() != self.outer.output_count() {
            return Err(Error::DimensionMismatch {
                expected: self.outer.output_count(),
                found: codeword.qudits(),
            });
        }
        let mut s = codeword.embed(&self.outer_inputs(), self.physical_qubits())?;
        let enc = self.inner.build_encoder();
        for i in 0..self.blocks() {
            enc.remapped(&self.block_map(i)).run(&mut s)?;
        }
        Ok(s)
    }

    /// Applies the erasure corruption and the physical error of `event`.
    pub fn apply_channel(&self, state: &mut StateVector, event: &ChannelEvent) -> Result<()> {
        if let Some((address, corruption)) = &event.erasure {
            corruption.apply(state, *address)?;
        }
        if let Some(e) = &event.physical {
            e.apply(state)?;
        }
        Ok(())
    }

    /// Inner recovery with the given erasure (if any). Blocks without an
    /// erasure are decoded as if their last ancilla had been erased, so a
    /// computational error on that ancilla is thrown away with it.
    pub fn recover_inner(
        &self,
        state: &StateVector,
        erasure: Option<usize>,
    ) -> Result<(Vec<usize>, StateVector)> {
        if state.qudits() != self.physical_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.physical_qubits(),
                found: state.qudits(),
            });
        }
        if let Some(a) = erasure {
            if a >= self.physical_qubits() {
                return Err(Error::IndexOutOfRange {
                    index: a,
                    len: self.physical_qubits(),
                });
            }
        }
        let size = self.block_size();
        let default = size - 1;
        let mut s = state.clone();
        let mut positions = Vec::with_capacity(self.blocks());
        let mut keep = Vec::with_capacity(self.outer.output_count());
        for i in 0..self.blocks() {
            let local = match erasure {
                Some(a) if a / size == i => a % size,
                _ => default,
            };
            let map = self.block_map(i);
            self.inner
                .build_decoder(local)?
                .remapped(&map)
                .run(&mut s)?;
            self.inner
                .build_recovery(local)?
                .remapped(&map)
                .run(&mut s)?;
            let survivors = match self.inner.side(local) {
                Side::Message => self.inner.ancilla_addresses(),
                Side::Ancilla => self.inner.message_addresses(),
            };
            match self.blocking {
                Blocking::WholeRegister => keep.extend(survivors.iter().map(|&a| map[a])),
                Blocking::PerQubit { .. } => keep.push(map[survivors[0]]),
            }
            positions.push(map[local]);
        }
        let sub = s.extract_subsystem(&keep)?;
        if sub.purity < PURITY_THRESHOLD {
            return Err(Error::RecoveryFailed { purity: sub.purity });
        }
        Ok((positions, sub.state))
    }

    /// Full decoding. Only the erasure address of `event` and its outer
    /// error are used; the rest of the event must already be in `state`.
    pub fn decode(&self, state: &StateVector, event: &ChannelEvent) -> Result<DecodeTrace> {
        let (inner_positions, recovered_outer) =
            self.recover_inner(state, event.erasure_address())?;
        let mut codeword = recovered_outer.clone();
        if let Some(e) = &event.outer {
            e.apply(&mut codeword)?;
        }
        let decoded = self.decoder.decode(&codeword)?;
        let row = self.table.lookup(&decoded.syndrome)?;
        let mut logical = decoded.logical.clone();
        row.correction.apply(&mut logical)?;
        Ok(DecodeTrace {
            inner_positions,
            recovered_outer,
            syndrome: decoded.syndrome,
            residual: decoded.logical,
            correction: row.correction.clone(),
            correction_label: operator_label(&row.correction, self.outer.syndrome_count()),
            logical,
        })
    }

    /// Encode, send through `event`, decode.
    pub fn run(&self, logical: &StateVector, event: &ChannelEvent) -> Result<DecodeTrace> {
        let mut s = self.encode(logical)?;
        self.apply_channel(&mut s, event)?;
        self.decode(&s, event)
    }

    /// Monte-Carlo estimate of the logical channel. Trial `t` draws from
    /// stream `t` of a generator seeded with `seed`, so results do not
    /// depend on evaluation order.
    pub fn effective_channel(
        &self,
        noise: NoiseModel,
        trials: usize,
        seed: u64,
    ) -> Result<ChannelEstimate> {
        if trials == 0 {
            return Err(Error::Unsupported("at least one trial is required"));
        }
        let mut est = ChannelEstimate {
            trials,
            ..ChannelEstimate::default()
        };
        let mut sum = 0.0;
        est.min_fidelity = 1.0;
        for t in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let logical = random_state(Prime::TWO, self.outer.input_count(), &mut rng)?;
            let (class, event) =
                noise.sample(self.physical_qubits(), self.outer.output_count(), &mut rng)?;
            let fidelity = match self.run(&logical, &event) {
                Ok(trace) => trace.logical.fidelity_up_to_phase(&logical)?,
                Err(_) => 0.0,
            };
            let failed = fidelity < SUCCESS_FIDELITY;
            sum += fidelity;
            est.min_fidelity = est.min_fidelity.min(fidelity);
            est.failures += usize::from(failed);
            match est.classes.iter_mut().find(|c| c.class == class) {
                Some(c) => {
                    c.trials += 1;
                    c.failures += usize::from(failed);
                }
                None => est.classes.push(ClassStats {
                    class,
                    trials: 1,
                    failures: usize::from(failed),
                }),
            }
        }
        est.mean_fidelity = sum / trials as f64;
        est.classes.sort_by(|a, b| a.class.cmp(&b.class));
        Ok(est)
    }
}

/// Random normalized state with Gaussian amplitudes.
pub fn random_state<R: Rng + ?Sized>(p: Prime, qudits: usize, rng: &mut R) -> Result<StateVector> {
    let dim = p
        .checked_pow(qudits)
        .ok_or(Error::RegisterTooLarge("too many qudits"))?;
    let amps = (0..dim)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    StateVector::from_amplitudes(p, qudits, amps)?.normalized()
}

/// Noise for [`ConcatScheme::effective_channel`]. Computational errors land
/// on the outer codeword after inner recovery.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NoiseModel {
    /// Nothing happens.
    Identity,
    /// One erasure at a uniform physical address with a Haar-random
    /// disturbance, plus a uniform `X`, `Y` or `Z` on a uniform outer qubit.
    ErasurePlusPauli,
    /// Uniform `X`, `Y` or `Z` on two distinct uniform outer qubits.
    TwoPaulis,
}

const PAULI_NAMES: [(&str, u32, u32); 3] = [("X", 1, 0), ("Y", 1, 1), ("Z", 0, 1)];

impl NoiseModel {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::Identity => "identity",
            NoiseModel::ErasurePlusPauli => "correctable",
            NoiseModel::TwoPaulis => "two-pauli",
        }
    }

    /// Draws an event and a short class name describing its shape.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        physical: usize,
        outer: usize,
        rng: &mut R,
    ) -> Result<(String, ChannelEvent)> {
        let two = Prime::TWO;
        match self {
            NoiseModel::Identity => Ok(("none".into(), ChannelEvent::default())),
            NoiseModel::ErasurePlusPauli => {
                let erased = rng.random_range(0..physical);
                let corruption = Corruption::RandomUnitary { seed: rng.random() };
                let q = rng.random_range(0..outer);
                let (name, b, s) = PAULI_NAMES[rng.random_range(0..3)];
                let event = ChannelEvent {
                    erasure: Some((erased, corruption)),
                    physical: None,
                    outer: Some(PauliError::single(two, outer, q, b, s)?),
                };
                Ok((format!("erasure+{name}"), event))
            }
            NoiseModel::TwoPaulis => {
                if outer < 2 {
                    return Err(Error::Unsupported(
                        "two-qubit noise needs at least two outer qubits",
                    ));
                }
                let first = rng.random_range(0..outer);
                let mut second = rng.random_range(0..outer - 1);
                if second >= first {
                    second += 1;
                }
                let (n1, b1, s1) = PAULI_NAMES[rng.random_range(0..3)];
                let (n2, b2, s2) = PAULI_NAMES[rng.random_range(0..3)];
                let e = PauliError::single(two, outer, first, b1, s1)?
                    .then(&PauliError::single(two, outer, second, b2, s2)?)?;
                let mut names = [n1, n2];
                names.sort_unstable();
                let event = ChannelEvent {
                    outer: Some(e),
                    ..ChannelEvent::default()
                };
                Ok((format!("{}+{}", names[0], names[1]), event))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassStats {
    pub class: String,
    pub trials: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChannelEstimate {
    pub trials: usize,
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    pub failures: usize,
    pub classes: Vec<ClassStats>,
}
