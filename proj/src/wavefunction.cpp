#include "disent/wavefunction.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "disent/entanglement.hpp"
#include "disent/generators.hpp"
#include "disent/linalg.hpp"

namespace disent {

namespace {

void check_qubits(int n) {
    if (n < 2 || n > 24)
        throw std::invalid_argument(fmt::format("qubit count {} outside [2, 24]", n));
}

void check_bond(int n, int bond) {
    if (bond < 1 || bond > n - 1)
        throw std::invalid_argument(fmt::format("bond {} outside [1, {}] for {} qubits", bond,
                                                n - 1, n));
}

double entropy_of_singulars(const RVec& s) {
    return von_neumann_entropy(SingularSpectrum::from_values(s));
}

// Exact zero-entropy gate for bonds whose tensor has a trivial environment on
// one side (chi3 == 1 or chi4 == 1), where the single-pass regimes do not
// apply. The full left singular basis of A viewed as k x (chi3*chi4) is
// rearranged so that Schmidt vector s of the bond cut lands in output slot
// (0, s) (trivial left environment) or (s, 0) (trivial right environment);
// the cut matrix after the gate then has a single nonzero row or column, so
// the cut entropy is exactly zero. Unitary by construction: a column
// permutation of the adjoint of a full unitary basis.
Disentangler schmidt_edge_gate(const Tensor3& a, const Dims& d) {
    const bool left_trivial = d.chi3 == 1 && d.chi4 <= d.chi2;
    const bool right_trivial = d.chi4 == 1 && d.chi3 <= d.chi1;
    if (!left_trivial && !right_trivial)
        throw std::domain_error(
            fmt::format("no edge-gate construction for dims ({}, {}, {}, {})", d.chi1, d.chi2,
                        d.chi3, d.chi4));

    const long k = d.k();
    const long r = d.chi3 * d.chi4; // number of Schmidt vectors of the k x (ab) view
    Eigen::JacobiSVD<Mat> svd(a.as_k_by_ab(), Eigen::ComputeFullU);
    const Mat& w = svd.matrixU(); // k x k, first r columns are the Schmidt vectors

    std::vector<bool> taken(static_cast<std::size_t>(k), false);
    Mat u(k, k);
    for (long s = 0; s < r; ++s) {
        const long row = left_trivial ? s : s * d.chi2;
        u.row(row) = w.col(s).adjoint();
        taken[static_cast<std::size_t>(row)] = true;
    }
    long next = r;
    for (long row = 0; row < k; ++row) {
        if (taken[static_cast<std::size_t>(row)]) continue;
        u.row(row) = w.col(next++).adjoint();
    }
    return {d.chi1, d.chi2, std::move(u)};
}

} // namespace

QubitState QubitState::from_amplitudes(int n, Vec amps) {
    check_qubits(n);
    if (amps.size() != (1L << n))
        throw std::invalid_argument(fmt::format("amplitude vector has {} entries, expected {}",
                                                amps.size(), 1L << n));
    if (!amps.allFinite()) throw std::invalid_argument("amplitudes contain non-finite values");
    const double nrm = amps.norm();
    if (std::abs(nrm - 1.0) > 1e-8)
        throw std::invalid_argument(fmt::format("state norm {} is not 1", nrm));
    amps /= nrm;
    return {n, std::move(amps)};
}

QubitState QubitState::haar(int n, Rng& rng) {
    return from_amplitudes(n, random_state(n, rng));
}

Dims pair_dims(int n, int bond) {
    check_qubits(n);
    check_bond(n, bond);
    return {2, 2, 1L << (bond - 1), 1L << (n - bond - 1)};
}

Tensor3 pair_tensor(const QubitState& psi, int bond) {
    const Dims d = pair_dims(psi.n, bond);
    Tensor3 t(4, d.chi3, d.chi4);
    const long stride = 4 * d.chi4; // amplitudes per left-environment value
    for (long a = 0; a < d.chi3; ++a)
        for (long k = 0; k < 4; ++k)
            for (long b = 0; b < d.chi4; ++b)
                t(k, a, b) = psi.amps(a * stride + k * d.chi4 + b);
    return t;
}

void apply_gate(QubitState& psi, int bond, const Disentangler& u) {
    const Dims d = pair_dims(psi.n, bond);
    if (u.chi1 != 2 || u.chi2 != 2)
        throw std::invalid_argument("two-qubit gates must have chi1 = chi2 = 2");
    const long stride = 4 * d.chi4;
    for (long a = 0; a < d.chi3; ++a) {
        Eigen::Map<RowMat> block(psi.amps.data() + a * stride, 4, d.chi4);
        block = (u.u * block).eval();
    }
}

std::vector<double> cut_entropies(const QubitState& psi) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(psi.n - 1));
    for (int c = 1; c < psi.n; ++c) {
        Eigen::Map<const RowMat> m(psi.amps.data(), 1L << c, 1L << (psi.n - c));
        out.push_back(entropy_of_singulars(singular_values(Mat(m))));
    }
    return out;
}

SweepMethod parse_method(const std::string& name) {
    if (name == "fast") return SweepMethod::fast;
    if (name == "descent") return SweepMethod::descent;
    if (name == "fast-then-descent") return SweepMethod::fast_then_descent;
    throw std::invalid_argument(fmt::format("unknown method '{}'", name));
}

std::string method_name(SweepMethod m) {
    switch (m) {
        case SweepMethod::fast: return "fast";
        case SweepMethod::descent: return "descent";
        case SweepMethod::fast_then_descent: return "fast-then-descent";
    }
    throw std::logic_error("unreachable");
}

SweepRecord sweep_layer(QubitState& psi, Parity parity, const SweepSettings& settings, Rng& rng) {
    check_qubits(psi.n);
    if (parity == Parity::even && psi.n < 3)
        throw std::invalid_argument("even sweeps need at least 3 qubits");

    const auto t0 = std::chrono::steady_clock::now();
    SweepRecord rec;
    rec.parity = parity;

    const auto fast_gate = [&](const Tensor3& t, const Dims& d) -> Disentangler {
        if (detail::pick_regime(d)) {
            DisentangleOptions opts;
            opts.trials = settings.trials;
            return disentangle_auto(t, d, opts, rng).u;
        }
        return schmidt_edge_gate(t, d);
    };

    const int first = parity == Parity::odd ? 1 : 2;
    for (int bond = first; bond <= psi.n - 1; bond += 2) {
        const Dims d = pair_dims(psi.n, bond);
        Tensor3 t = pair_tensor(psi, bond);

        Disentangler gate = Disentangler::identity(2, 2);
        switch (settings.method) {
            case SweepMethod::fast: gate = fast_gate(t, d); break;
            case SweepMethod::descent: {
                Mat u0 = random_unitary(4, rng);
                gate = {2, 2, riemannian_descent(t, d, u0, settings.descent).final_u};
                break;
            }
            case SweepMethod::fast_then_descent: {
                Mat u0 = fast_gate(t, d).u;
                gate = {2, 2, riemannian_descent(t, d, u0, settings.descent).final_u};
                break;
            }
        }

        GateRecord g;
        g.bond = bond;
        g.entropy_before = cut_entropy_of(Mat::Identity(4, 4), t, d);
        apply_gate(psi, bond, gate);
        g.entropy_after = cut_entropy_of(Mat::Identity(4, 4), pair_tensor(psi, bond), d);
        rec.gates.push_back(std::move(g));
    }

    rec.cuts = cut_entropies(psi);
    rec.residual = *std::max_element(rec.cuts.begin(), rec.cuts.end());
    rec.gate_count = static_cast<long>(rec.gates.size());
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::vector<SweepRecord> disentangle_state(QubitState& psi, long layers,
                                           const SweepSettings& settings, Rng& rng) {
    check_qubits(psi.n);
    if (layers < 1) throw std::invalid_argument("layer count must be at least 1");
    if (psi.n == 2 && layers > 1)
        throw std::invalid_argument("alternating sweeps need at least 3 qubits");

    std::vector<SweepRecord> records;
    records.reserve(static_cast<std::size_t>(layers));
    long gates = 0;
    double seconds = 0.0;
    for (long layer = 1; layer <= layers; ++layer) {
        const Parity parity = layer % 2 == 1 ? Parity::odd : Parity::even;
        SweepRecord rec = sweep_layer(psi, parity, settings, rng);
        rec.layer = layer;
        gates += rec.gate_count;
        seconds += rec.seconds;
        rec.cumulative_gates = gates;
        rec.cumulative_seconds = seconds;
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace disent
