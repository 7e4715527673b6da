// Copyright 2026 The spinmbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spinmbqc/protocols.h"

#include <cmath>
#include <numbers>

namespace spinmbqc {

namespace {

constexpr double kPi = std::numbers::pi;

double sign_of(int bits) {
    return (bits % 2 == 0) ? 1.0 : -1.0;
}

void check_data_leakage(const SpinRegister &reg, const LogicalLayout &data) {
    double leak = leakage_weight(reg, data);
    if (leak > 1e-10) {
        throw ProtocolError("input leakage " + std::to_string(leak) + " exceeds 1e-10");
    }
}

DotPair inner(DotPair left, DotPair right) {
    return {left.b, right.a};
}

}  // namespace

DenseOperator PauliFrame::matrix() const {
    DenseOperator out = DenseOperator::Identity(1, 1);
    DenseOperator x = pauli_matrix(PauliAxis::X);
    DenseOperator z = pauli_matrix(PauliAxis::Z);
    for (const auto &q : qubits) {
        DenseOperator m = DenseOperator::Identity(2, 2);
        if (q.x) {
            m = x * m;
        }
        if (q.z) {
            m = m * z;
        }
        out = kron(out, m);
    }
    return out;
}

std::string PauliFrame::str() const {
    std::string out;
    for (const auto &q : qubits) {
        out.push_back(q.x ? (q.z ? 'Y' : 'X') : (q.z ? 'Z' : 'I'));
    }
    return out;
}

const char *step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::Pulse:
            return "pulse";
        case StepKind::Measurement:
            return "measurement";
        case StepKind::Reinit:
            return "reinit";
    }
    return "?";
}

Executor::Executor(SpinRegister reg, Rng &rng, NoiseConfig noise)
    : reg_(std::move(reg)), rng_(rng), noise_(noise) {
}

void Executor::pulse(DotPair pair, double theta, int repeat_index) {
    double applied = theta;
    if (noise_.ej_max > 0) {
        double e = rng_.uniform(-noise_.ej_max, noise_.ej_max);
        applied = noise_.pulse_error == PulseErrorMode::Multiplicative ? theta * (1 + e) : theta + e * kPi;
    }
    reg_ = exchange_pulse(reg_, pair, applied);
    trace_.steps.push_back({StepKind::Pulse, pair, theta, std::nullopt, repeat_index});
    trace_.n_pulses++;
}

int Executor::measure(DotPair pair, PairMeasurement kind, int repeat_index) {
    double eps = 0;
    if (noise_.em_max > 0) {
        eps = rng_.uniform(-noise_.em_max, noise_.em_max);
    }
    double deflection = noise_.readout == ReadoutModel::Deflect ? eps : 0;
    OutcomeWeights w = outcome_weights(reg_, pair, kind, deflection);
    last_weights_ = w;
    if (w.w0 + w.w1 < 1e-14) {
        throw ProtocolError("degenerate support: both measurement records have zero weight");
    }
    int s;
    if (!forced_.empty()) {
        s = forced_.front();
        forced_.pop_front();
    } else {
        s = rng_.uniform() < w.p0() ? 0 : 1;
    }
    double p = s == 0 ? w.p0() : w.p1();
    trace_.path_probability *= p;
    if (p < 1e-24) {
        throw ZeroProbabilityBranch("forced record has zero probability", trace_.path_probability);
    }
    reg_ = apply_outcome(reg_, pair, kind, s, &rng_, deflection);
    int record = s;
    if (noise_.readout == ReadoutModel::RecordFlip && noise_.em_max > 0 && rng_.uniform() < std::abs(eps)) {
        record ^= 1;
    }
    trace_.steps.push_back({StepKind::Measurement, pair, std::nullopt, record, repeat_index});
    trace_.n_measurements++;
    return record;
}

void Executor::reinit(DotPair pair, int repeat_index) {
    reg_ = lock_singlet(reg_, pair);
    trace_.steps.push_back({StepKind::Reinit, pair, std::nullopt, std::nullopt, repeat_index});
}

void Executor::force_outcomes(std::vector<int> outcomes) {
    for (int s : outcomes) {
        require_bit(s, "force_outcomes");
        forced_.push_back(s);
    }
}

void run_hadamard(Executor &ex, DotPair data, DotPair ancilla) {
    ex.pulse(data, kPi / 2);
    ex.pulse(ancilla, kPi / 2);
    int s1 = ex.measure(inner(data, ancilla), PairMeasurement::ParityExact);
    int s2 = ex.measure(ancilla, PairMeasurement::SingletTriplet);
    ex.pulse(data, sign_of(s1 + s2) * kPi / 2);
    auto &t = ex.trace();
    t.outcomes = {s1, s2};
    t.frame = PauliFrame(1);
    t.frame.qubits[0].x = (s1 + s2) % 2;
}

ProtocolRun hadamard_protocol(const SpinRegister &reg, DotPair data, DotPair ancilla, const ProtocolOptions &options) {
    check_data_leakage(reg, LogicalLayout{{data}});
    Rng rng(options.seed);
    Executor ex(reg, rng);
    run_hadamard(ex, data, ancilla);
    return {ex.trace(), ex.state()};
}

void run_entangling_exact(Executor &ex, DotPair q1, DotPair ancilla, DotPair q2) {
    ex.pulse(q1, kPi / 2);
    int s1 = ex.measure(inner(q1, ancilla), PairMeasurement::ParityExact);
    ex.pulse(ancilla, sign_of(s1) * kPi / 2);
    int s2 = ex.measure(inner(ancilla, q2), PairMeasurement::ParityExact);
    ex.pulse(q1, sign_of(s2) * kPi / 2);
    int s3 = ex.measure(ancilla, PairMeasurement::SingletTriplet);
    auto &t = ex.trace();
    t.outcomes = {s1, s2, s3};
    t.frame = PauliFrame(2);
    t.frame.qubits[0].x = 1 - s2;
    // s3 = 0 is the singlet here; the Fig. 2(c) exponent uses singlet = 1.
    t.frame.qubits[1].x = 1 ^ s2 ^ s3;
}

ProtocolRun entangling_protocol_exact(
    const SpinRegister &reg, DotPair q1, DotPair ancilla, DotPair q2, const ProtocolOptions &options) {
    check_data_leakage(reg, LogicalLayout{{q1, q2}});
    Rng rng(options.seed);
    Executor ex(reg, rng);
    run_entangling_exact(ex, q1, ancilla, q2);
    return {ex.trace(), ex.state()};
}

void run_entangling_asym(Executor &ex, DotPair q1, DotPair ancilla, DotPair q2, const ProtocolOptions &options) {
    PairMeasurement kind = asym_measurement(options.asym_mode);
    auto &t = ex.trace();

    ex.pulse(q1, kPi / 2);
    int s1 = ex.measure(inner(q1, ancilla), kind);
    if (s1 == 1) {
        int repeat = 0;
        int r = 1;
        while (r == 1) {
            if (++repeat > options.repeat_cap) {
                throw ProtocolError("entangling repeat cap exceeded");
            }
            ex.pulse(q1, kPi, repeat);
            r = ex.measure(inner(q1, ancilla), kind, repeat);
        }
        t.entangling_repeats = repeat;
    }

    ex.pulse(ancilla, sign_of(s1) * kPi / 2);
    int s2 = 1;
    if (options.final_step == FinalStep::Measure) {
        s2 = ex.measure(inner(ancilla, q2), kind);
    } else {
        ex.reinit(inner(ancilla, q2));
    }
    ex.pulse(q1, sign_of(s1 + s2) * kPi / 2);

    int s3 = 1;
    int last = 1;
    if (options.final_step == FinalStep::Measure) {
        s3 = ex.measure(ancilla, kind);
        last = s3;
        if (s3 == 0) {
            ex.pulse(inner(ancilla, q2), kPi, 1);
            last = ex.measure(ancilla, kind, 1);
            t.disentangling_repeats = 1;
        }
    } else {
        ex.reinit(ancilla);
    }

    t.outcomes = {s1, s2, s3};
    t.frame = PauliFrame(2);
    t.frame.qubits[0].x = 1 - s2;
    t.frame.qubits[1].x = s2 == last ? 0 : 1;
}

ProtocolRun entangling_protocol_asym(
    const SpinRegister &reg, DotPair q1, DotPair ancilla, DotPair q2, const ProtocolOptions &options) {
    if (options.model != MeasurementModel::Asym) {
        throw std::invalid_argument("entangling_protocol_asym needs the asym measurement model");
    }
    check_data_leakage(reg, LogicalLayout{{q1, q2}});
    Rng rng(options.seed);
    Executor ex(reg, rng);
    run_entangling_asym(ex, q1, ancilla, q2, options);
    return {ex.trace(), ex.state()};
}

RepeatRequirement required_repeats(int s1, int s2, int s3) {
    require_bit(s1, "required_repeats");
    require_bit(s2, "required_repeats");
    require_bit(s3, "required_repeats");
    if (s2 == 0 && s3 == 0) {
        return {s1 == 1, std::nullopt};
    }
    static const bool disentangle[2][2][2] = {
        {{false, false}, {false, true}},
        {{false, true}, {false, true}},
    };
    return {s1 == 1, disentangle[s1][s2][s3]};
}

DenseOperator ideal_two_qubit_gate() {
    DenseOperator cnot = DenseOperator::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
    DenseOperator h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    DenseOperator hx = h * pauli_matrix(PauliAxis::X);
    return cnot * kron(hx, DenseOperator::Identity(2, 2)) * cnot;
}

StateVector expected_corrected_output(const StateVector &input, int s2, int s3) {
    require_bit(s2, "expected_corrected_output");
    require_bit(s3, "expected_corrected_output");
    if (input.size() != 4) {
        throw std::invalid_argument("expected_corrected_output: two-qubit input required");
    }
    PauliFrame f(2);
    f.qubits[0].x = 1 - s2;
    f.qubits[1].x = s2 == s3 ? 0 : 1;
    return f.matrix() * ideal_two_qubit_gate() * input;
}

StateVector bell_state(BellState b) {
    StateVector v = StateVector::Zero(4);
    double r = 1 / std::sqrt(2.0);
    switch (b) {
        case BellState::PsiPlus:
            v(0) = r;
            v(3) = r;
            break;
        case BellState::PsiMinus:
            v(0) = r;
            v(3) = -r;
            break;
        case BellState::PhiPlus:
            v(1) = r;
            v(2) = r;
            break;
        case BellState::PhiMinus:
            v(1) = r;
            v(2) = -r;
            break;
    }
    return v;
}

LogicalLayout hadamard_layout() {
    return {{{0, 1}, {2, 3}}};
}

LogicalLayout entangling_layout() {
    return {{{0, 1}, {2, 3}, {4, 5}}};
}

LogicalLayout entangling_data_layout() {
    return {{{0, 1}, {4, 5}}};
}

SpinRegister prepare_entangling_input(const StateVector &data) {
    if (data.size() != 4) {
        throw std::invalid_argument("prepare_entangling_input: two-qubit state required");
    }
    StateVector full = StateVector::Zero(8);
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 2; b++) {
            full(a * 4 + b) = data(a * 2 + b);
        }
    }
    return encode_logical(6, entangling_layout(), full);
}

SpinRegister prepare_hadamard_input(const StateVector &data) {
    if (data.size() != 2) {
        throw std::invalid_argument("prepare_hadamard_input: one-qubit state required");
    }
    StateVector plus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    return encode_logical(4, hadamard_layout(), kron(data, plus));
}

StateVector random_logical_state(size_t num_qubits, Rng &rng) {
    StateVector v(Eigen::Index{1} << num_qubits);
    for (Eigen::Index i = 0; i < v.size(); i++) {
        double r = std::sqrt(-2 * std::log(1 - rng.uniform()));
        double phi = 2 * kPi * rng.uniform();
        double re = r * std::cos(phi);
        double r2 = std::sqrt(-2 * std::log(1 - rng.uniform()));
        double phi2 = 2 * kPi * rng.uniform();
        v(i) = cplx(re, r2 * std::cos(phi2));
    }
    return v.normalized();
}

nlohmann::json trace_to_json(const ProtocolTrace &trace) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto &s : trace.steps) {
        nlohmann::json j;
        j["kind"] = step_kind_name(s.kind);
        j["dots"] = {s.dots.a, s.dots.b};
        j["angle"] = s.angle ? nlohmann::json(*s.angle) : nlohmann::json(nullptr);
        j["outcome"] = s.outcome ? nlohmann::json(*s.outcome) : nlohmann::json(nullptr);
        j["repeat_index"] = s.repeat_index;
        steps.push_back(j);
    }
    nlohmann::json frame = nlohmann::json::array();
    for (const auto &q : trace.frame.qubits) {
        frame.push_back({{"x", q.x}, {"z", q.z}});
    }
    return {
        {"steps", steps},
        {"outcomes", trace.outcomes},
        {"frame", frame},
        {"n_measurements", trace.n_measurements},
        {"n_pulses", trace.n_pulses},
        {"entangling_repeats", trace.entangling_repeats},
        {"disentangling_repeats", trace.disentangling_repeats},
    };
}

}  // namespace spinmbqc
