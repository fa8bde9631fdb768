#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disent/descent.hpp"
#include "disent/disentangle.hpp"
#include "disent/rng.hpp"
#include "disent/tensor.hpp"

namespace disent {

/// Pure state of n qubits. Amplitudes are indexed with qubit 1 as the most
/// significant bit: amps[q1*2^(n-1) + q2*2^(n-2) + ... + qn].
struct QubitState {
    int n = 0;
    Vec amps;

    static QubitState from_amplitudes(int n, Vec amps);
    /// Haar-random pure state built from `random_state` amplitudes.
    static QubitState haar(int n, Rng& rng);
    long dim() const { return 1L << n; }
};

/// The state viewed as a three-leg tensor around bond i (1-based, pairing
/// qubits i and i+1): k groups (q_i, q_{i+1}) with q_i the high bit, a is the
/// left environment (qubits 1..i-1), b the right environment (i+2..n).
Tensor3 pair_tensor(const QubitState& psi, int bond);
Dims pair_dims(int n, int bond);

/// Applies a two-qubit gate at the bond: u rows are (q_i', q_{i+1}') grouped
/// as i*2+j, columns the old (q_i, q_{i+1}). Requires chi1 == chi2 == 2.
void apply_gate(QubitState& psi, int bond, const Disentangler& u);

/// Von Neumann entropy across every contiguous cut c|c+1 for c = 1..n-1.
std::vector<double> cut_entropies(const QubitState& psi);

enum class Parity { odd, even };
enum class SweepMethod { fast, descent, fast_then_descent };

SweepMethod parse_method(const std::string& name);
std::string method_name(SweepMethod m);

struct SweepSettings {
    SweepMethod method = SweepMethod::fast;
    long trials = 1;            // single-pass attempts per gate
    DescentConfig descent;      // per-gate descent budget

    SweepSettings() {
        descent.max_iters = 200;
        descent.restarts = 1;
    }
};

struct GateRecord {
    int bond = 0;
    double entropy_before = 0.0; // cut entropy at the bond before the gate
    double entropy_after = 0.0;
};

struct SweepRecord {
    long layer = 0;
    Parity parity = Parity::odd;
    std::vector<GateRecord> gates;
    std::vector<double> cuts;   // all cut entropies after the layer
    double residual = 0.0;      // max of cuts
    long gate_count = 0;
    long cumulative_gates = 0;
    double seconds = 0.0;
    double cumulative_seconds = 0.0;
};

/// Applies one layer of disentangling gates at every bond of the given parity
/// (ascending bond order, each gate applied before the next is computed).
/// Even layers require n >= 3.
SweepRecord sweep_layer(QubitState& psi, Parity parity, const SweepSettings& settings, Rng& rng);

/// Runs `layers` alternating sweeps starting with the odd bonds. Layer k in
/// the records carries k = 1..layers with cumulative gate and time totals.
std::vector<SweepRecord> disentangle_state(QubitState& psi, long layers,
                                           const SweepSettings& settings, Rng& rng);

} // namespace disent
