use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sim::{Circuit, Gate, QuantumState};

/// Two-qubit entangling pattern between rotation layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Entangler {
    /// CNOT(q → q+1) for q = 0..n−2.
    #[default]
    LinearCnot,
    /// Linear chain plus CNOT(n−1 → 0).
    RingCnot,
    /// CZ(q, q+1) for q = 0..n−2.
    LinearCz,
    RingCz,
    None,
}

impl Entangler {
    pub fn name(self) -> &'static str {
        match self {
            Entangler::LinearCnot => "linear-cnot",
            Entangler::RingCnot => "ring-cnot",
            Entangler::LinearCz => "linear-cz",
            Entangler::RingCz => "ring-cz",
            Entangler::None => "none",
        }
    }

    /// `(control, target)` pairs in application order.
    fn pairs(self, n: usize) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = match self {
            Entangler::None => return Vec::new(),
            _ => (0..n.saturating_sub(1)).map(|q| (q, q + 1)).collect(),
        };
        if matches!(self, Entangler::RingCnot | Entangler::RingCz) && n > 2 {
            pairs.push((n - 1, 0));
        }
        pairs
    }

    fn is_cz(self) -> bool {
        matches!(self, Entangler::LinearCz | Entangler::RingCz)
    }
}

impl fmt::Display for Entangler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Entangler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Entangler::LinearCnot, Entangler::RingCnot, Entangler::LinearCz, Entangler::RingCz, Entangler::None]
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown entangler `{s}`")))
    }
}

/// Layered real-amplitude ansatz: one Ry on every qubit, then `layers`
/// blocks of [entanglers, Ry on every qubit]. Parameters are consumed
/// layer by layer, qubit 0 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzConfig {
    pub n_qubits: usize,
    pub layers: usize,
    pub entangler: Entangler,
}

impl AnsatzConfig {
    pub fn new(n_qubits: usize, layers: usize) -> Self {
        Self { n_qubits, layers, entangler: Entangler::default() }
    }

    /// Smallest depth whose parameter count covers the `2^n − 1` degrees of
    /// freedom of a real unit vector (3 layers for 4 qubits).
    pub fn default_layers(n_qubits: usize) -> usize {
        let dof = (1usize << n_qubits) - 1;
        dof.div_ceil(n_qubits).saturating_sub(1)
    }

    pub fn with_default_layers(n_qubits: usize) -> Self {
        Self::new(n_qubits, Self::default_layers(n_qubits))
    }

    pub fn with_entangler(mut self, entangler: Entangler) -> Self {
        self.entangler = entangler;
        self
    }

    pub fn parameter_count(&self) -> usize {
        self.n_qubits * (self.layers + 1)
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub(crate) fn check(&self, theta_len: usize) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::InvalidArgument("ansatz needs at least one qubit".into()));
        }
        if theta_len != self.parameter_count() {
            return Err(Error::DimensionMismatch { expected: self.parameter_count(), got: theta_len });
        }
        Ok(())
    }
}

/// Gate sequence `V(θ)`.
pub fn ansatz_circuit<T: Scalar>(config: &AnsatzConfig, theta: &[T]) -> Result<Circuit<T>> {
    config.check(theta.len())?;
    let n = config.n_qubits;
    let mut c = Circuit::new(n);
    let mut params = theta.iter();
    for layer in 0..=config.layers {
        if layer > 0 {
            for (a, b) in config.entangler.pairs(n) {
                let gate = if config.entangler.is_cz() { Gate::cz() } else { Gate::cnot() };
                c.push(gate, &[a, b])?;
            }
        }
        for q in 0..n {
            c.push(Gate::ry(*params.next().expect("length checked")), &[q])?;
        }
    }
    Ok(c)
}

/// `V(θ)|0…0⟩`.
pub fn ansatz_state<T: Scalar>(config: &AnsatzConfig, theta: &[T]) -> Result<QuantumState<T>> {
    ansatz_circuit(config, theta)?.prepare()
}

/// Real-arithmetic evaluation of `V(θ)|0…0⟩` for the optimiser's inner
/// loop. Agrees with [`ansatz_state`] (checked in tests).
pub(crate) fn ansatz_real<T: Scalar>(config: &AnsatzConfig, theta: &[T], out: &mut Vec<T>) {
    let n = config.n_qubits;
    let dim = 1usize << n;
    out.clear();
    out.resize(dim, T::zero());
    out[0] = T::one();
    let pairs = config.entangler.pairs(n);
    let half = T::lit(0.5);
    let mut params = theta.iter();
    for layer in 0..=config.layers {
        if layer > 0 {
            for &(a, b) in &pairs {
                if config.entangler.is_cz() {
                    for (i, v) in out.iter_mut().enumerate() {
                        if (i >> a) & 1 == 1 && (i >> b) & 1 == 1 {
                            *v = -*v;
                        }
                    }
                } else {
                    for i in 0..dim {
                        if (i >> a) & 1 == 1 && (i >> b) & 1 == 0 {
                            out.swap(i, i | 1 << b);
                        }
                    }
                }
            }
        }
        for q in 0..n {
            let angle = *params.next().expect("length checked") * half;
            let (s, c) = angle.sin_cos();
            let bit = 1usize << q;
            for i in 0..dim {
                if i & bit == 0 {
                    let (a0, a1) = (out[i], out[i | bit]);
                    out[i] = c * a0 - s * a1;
                    out[i | bit] = s * a0 + c * a1;
                }
            }
        }
    }
}
