//! Pauli channels, noise-site attachment and error-realization sampling.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind, SiteKind};
use crate::error::{Result, TusqError};
use crate::pauli::Pauli;

const SUM_TOLERANCE: f64 = 1e-12;

/// Probabilities `(p_I, p_X, p_Y, p_Z)` of a phase-free Pauli channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliChannel {
    probs: [f64; 4],
}

impl PauliChannel {
    pub fn new(probs: [f64; 4]) -> Result<Self> {
        for &p in &probs {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(TusqError::InvalidProbability(p));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(TusqError::ChannelSum(sum));
        }
        Ok(PauliChannel { probs })
    }

    pub fn identity() -> Self {
        PauliChannel {
            probs: [1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    pub fn prob(&self, p: Pauli) -> f64 {
        self.probs[p as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.probs[0] == 1.0
    }

    /// The channel obtained by applying `self` and then `other`: a
    /// convolution over the phase-free Pauli product.
    pub fn compose(&self, other: &PauliChannel) -> PauliChannel {
        let mut probs = [0.0; 4];
        for a in Pauli::ALL {
            for b in Pauli::ALL {
                probs[(a * b) as usize] += self.prob(a) * other.prob(b);
            }
        }
        PauliChannel { probs }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Pauli {
        let u: f64 = rng.gen();
        let [pi, px, py, _] = self.probs;
        if u < pi {
            Pauli::I
        } else if u < pi + px {
            Pauli::X
        } else if u < pi + px + py {
            Pauli::Y
        } else if self.probs[3] > 0.0 {
            Pauli::Z
        } else {
            // Rounding left a sliver above p_I + p_X + p_Y; fall back to the
            // last Pauli with weight.
            [Pauli::Y, Pauli::X, Pauli::I]
                .into_iter()
                .find(|&p| self.prob(p) > 0.0)
                .unwrap_or(Pauli::I)
        }
    }
}

pub fn depolarizing_channel(p: f64) -> Result<PauliChannel> {
    check_probability(p)?;
    let q = p / 3.0;
    PauliChannel::new([1.0 - p, q, q, q])
}

pub fn measurement_flip_channel(p: f64) -> Result<PauliChannel> {
    check_probability(p)?;
    PauliChannel::new([1.0 - p, p, 0.0, 0.0])
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(TusqError::InvalidProbability(p))
    }
}

/// Gate duration and relaxation/dephasing times, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceParams {
    pub t: f64,
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
}

impl DecoherenceParams {
    pub fn validate(&self) -> Result<()> {
        let finite = self.t.is_finite() && self.t1.is_finite() && self.t2.is_finite();
        if !finite || self.t < 0.0 || self.t1 <= 0.0 || self.t2 <= 0.0 {
            return Err(TusqError::Decoherence(format!(
                "need t >= 0, T1 > 0, T2 > 0 (got t={}, T1={}, T2={})",
                self.t, self.t1, self.t2
            )));
        }
        if self.t2 > 2.0 * self.t1 {
            return Err(TusqError::Decoherence(format!(
                "T2={} exceeds 2*T1={}",
                self.t2,
                2.0 * self.t1
            )));
        }
        Ok(())
    }
}

/// Pauli-twirled approximation of amplitude and phase damping over one gate.
pub fn twirl_decoherence(d: &DecoherenceParams) -> Result<PauliChannel> {
    d.validate()?;
    let relax = 1.0 - (-d.t / d.t1).exp();
    let dephase = 1.0 - (-d.t / d.t2).exp();
    let px = relax / 4.0;
    let pz = dephase / 2.0 - relax / 4.0;
    if pz < -SUM_TOLERANCE {
        return Err(TusqError::Decoherence(format!(
            "t={}, T1={}, T2={} gives p_Z = {pz}",
            d.t, d.t1, d.t2
        )));
    }
    let pz = pz.max(0.0);
    PauliChannel::new([1.0 - 2.0 * px - pz, px, px, pz])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Applied after every unitary gate on each qubit it acts on.
    pub gate_noise: PauliChannel,
    /// Bit-flip probability before each MEASURE.
    pub meas_error_p: f64,
    pub decoherence: Option<DecoherenceParams>,
}

impl NoiseSpec {
    pub fn new(
        gate_error_p: f64,
        meas_error_p: f64,
        decoherence: Option<DecoherenceParams>,
    ) -> Result<Self> {
        let spec = NoiseSpec {
            gate_noise: depolarizing_channel(gate_error_p)?,
            meas_error_p,
            decoherence,
        };
        spec.gate_channel()?;
        spec.meas_channel()?;
        Ok(spec)
    }

    pub fn depolarizing(gate_error_p: f64, meas_error_p: f64) -> Result<Self> {
        NoiseSpec::new(gate_error_p, meas_error_p, None)
    }

    pub fn noiseless() -> Self {
        NoiseSpec {
            gate_noise: PauliChannel::identity(),
            meas_error_p: 0.0,
            decoherence: None,
        }
    }

    /// Gate channel with decoherence folded in.
    pub fn gate_channel(&self) -> Result<PauliChannel> {
        match &self.decoherence {
            Some(d) => Ok(self.gate_noise.compose(&twirl_decoherence(d)?)),
            None => Ok(self.gate_noise),
        }
    }

    pub fn meas_channel(&self) -> Result<PauliChannel> {
        measurement_flip_channel(self.meas_error_p)
    }
}

/// A circuit with noise sites and the channel resolved for each site.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyCircuit {
    pub circuit: Circuit,
    pub channels: Vec<PauliChannel>,
}

impl NoisyCircuit {
    pub fn n_sites(&self) -> usize {
        self.channels.len()
    }

    pub fn sample_er<R: Rng + ?Sized>(&self, rng: &mut R) -> ErrorRealization {
        sample_er(&self.channels, rng)
    }

    /// Expected number of non-identity sites per realization.
    pub fn expected_weight(&self) -> f64 {
        self.channels.iter().map(|c| 1.0 - c.prob(Pauli::I)).sum()
    }
}

/// Inserts a noise site after every unitary gate on each acted qubit and
/// before every MEASURE.
pub fn attach_noise(circuit: &Circuit, spec: &NoiseSpec) -> Result<NoisyCircuit> {
    if circuit.n_sites() > 0 {
        return Err(TusqError::AlreadyAnnotated);
    }
    let gate = spec.gate_channel()?;
    let meas = spec.meas_channel()?;
    let mut out = Circuit::new(circuit.n_qubits());
    let mut channels = Vec::new();
    for op in circuit.ops() {
        if op.kind == GateKind::Measure {
            out.push_site(op.qubits[0], SiteKind::Measurement);
            channels.push(meas);
            out.push(op.clone())?;
        } else {
            out.push(op.clone())?;
            for &q in &op.qubits {
                out.push_site(q, SiteKind::Gate);
                channels.push(gate);
            }
        }
    }
    Ok(NoisyCircuit {
        circuit: out,
        channels,
    })
}

/// One Pauli per noise site, packed two bits per site. Site 0 occupies the
/// most significant bits of the first word, so the derived ordering is the
/// site-major order `I < X < Y < Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorRealization {
    words: Vec<u64>,
    len: usize,
}

const SITES_PER_WORD: usize = 32;

impl ErrorRealization {
    pub fn identity(len: usize) -> Self {
        ErrorRealization {
            words: vec![0; len.div_ceil(SITES_PER_WORD)],
            len,
        }
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut er = ErrorRealization::identity(paulis.len());
        for (i, &p) in paulis.iter().enumerate() {
            er.set(i, p);
        }
        er
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn shift(site: usize) -> u32 {
        (62 - 2 * (site % SITES_PER_WORD)) as u32
    }

    pub fn get(&self, site: usize) -> Pauli {
        assert!(site < self.len);
        Pauli::from_bits((self.words[site / SITES_PER_WORD] >> Self::shift(site)) as u8)
    }

    pub fn set(&mut self, site: usize, p: Pauli) {
        assert!(site < self.len);
        let w = &mut self.words[site / SITES_PER_WORD];
        let s = Self::shift(site);
        *w = (*w & !(3u64 << s)) | ((p.bits() as u64) << s);
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    pub fn iter(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn hamming_weight(&self) -> usize {
        self.words
            .iter()
            .map(|&w| {
                let nonzero = (w | (w >> 1)) & 0x5555_5555_5555_5555;
                nonzero.count_ones() as usize
            })
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Length of the common prefix with `other`, in sites.
    pub fn common_prefix(&self, other: &ErrorRealization) -> usize {
        assert_eq!(self.len, other.len);
        for (i, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            let diff = a ^ b;
            if diff != 0 {
                let site = i * SITES_PER_WORD + diff.leading_zeros() as usize / 2;
                return site.min(self.len);
            }
        }
        self.len
    }

    /// Sites carrying a non-identity Pauli, ascending.
    pub fn support(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.iter().enumerate().filter(|(_, p)| !p.is_identity())
    }
}

impl fmt::Display for ErrorRealization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.iter() {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

pub fn sample_er<R: Rng + ?Sized>(channels: &[PauliChannel], rng: &mut R) -> ErrorRealization {
    let mut er = ErrorRealization::identity(channels.len());
    sample_er_into(channels, rng, &mut er);
    er
}

/// Overwrites `er` with a fresh draw, reusing its storage.
pub fn sample_er_into<R: Rng + ?Sized>(
    channels: &[PauliChannel],
    rng: &mut R,
    er: &mut ErrorRealization,
) {
    debug_assert_eq!(er.len(), channels.len());
    er.clear();
    for (i, ch) in channels.iter().enumerate() {
        let p = ch.sample(rng);
        if p != Pauli::I {
            er.set(i, p);
        }
    }
}
