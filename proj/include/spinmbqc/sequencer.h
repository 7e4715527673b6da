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

#ifndef SPINMBQC_SEQUENCER_H
#define SPINMBQC_SEQUENCER_H

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinmbqc/pauli.h"

namespace spinmbqc {

struct SequenceError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class StepRole { AncillaInit, Joint, AncillaDisentangle };
const char *role_name(StepRole r);

/// One measurement. At most one position may hold the tunable observable W(theta);
/// that position carries X in `pauli`.
struct MeasurementStep {
    PauliString pauli;
    std::optional<size_t> pw_qubit;
    double pw_theta = 0;

    explicit MeasurementStep(PauliString p) : pauli(std::move(p)) {
    }
    size_t size() const {
        return pauli.size();
    }
    std::vector<size_t> support() const {
        return pauli.support();
    }
    DenseOperator observable() const;
    DenseOperator projector(int s) const;
    std::string str() const;
};

bool steps_commute(const MeasurementStep &a, const MeasurementStep &b);

struct MeasurementSequence {
    std::vector<MeasurementStep> steps;
    size_t ancilla = 0;

    /// Grammar: "IZI -> ZXI -> IZX -> IXI"; a tunable site is written W[theta].
    /// The ancilla is the single qubit touched by the first step.
    static MeasurementSequence parse(std::string_view text);
    static MeasurementSequence single_qubit(PauliAxis mu, PauliAxis nu, PauliAxis xi, PauliAxis zeta);

    size_t num_qubits() const {
        return steps.front().size();
    }
    size_t num_data() const {
        return num_qubits() - 1;
    }
    StepRole role(size_t k) const;
    bool acts_only_on_ancilla(size_t k) const;
    std::string str() const;
};

std::vector<int> parse_outcomes(std::string_view bits);

struct Violation {
    size_t step;  // 1-based index of the later step of the commuting pair
    std::string message;
};

/// Throws SequenceError when the step roles are out of order.
std::vector<Violation> validate_sequence(const MeasurementSequence &seq);

enum class GateStatus { Unitary, NonUnitary, Annihilating };
const char *status_name(GateStatus s);

struct CliffordLabel {
    std::string name;       // set member, "other-Clifford" or "non-Clifford"
    PauliString pauli{std::vector<PauliAxis>{PauliAxis::I}};
    bool in_paper_set = false;
};

struct DerivedGate {
    DenseOperator U;
    GateStatus status = GateStatus::Annihilating;
    std::optional<double> alpha;
    std::optional<cplx> beta;
    std::string label;
    std::optional<PauliString> label_pauli;
    /// U(s) = phase * correction * U(0...0).
    std::optional<PauliString> correction;

    bool unitary() const {
        return status == GateStatus::Unitary;
    }
};

/// Sequence I(mu) -> nu(xi) -> I(zeta), data qubit first, ancilla second.
DerivedGate derive_single_qubit_closed_form(
    PauliAxis mu, PauliAxis nu, PauliAxis xi, PauliAxis zeta, std::span<const int> outcomes);

DerivedGate derive_sequence_oracle(const MeasurementSequence &seq, std::span<const int> outcomes);

/// Throws std::invalid_argument on non-2x2 or non-unitary input.
CliffordLabel classify_clifford(const DenseOperator &u);

/// Names a 4x4 unitary as phase * P * C with C in {II, CNOT, CNOT10, CZ, SWAP}.
CliffordLabel classify_two_qubit(const DenseOperator &u);

/// Pauli string P with u = phase * P, if any.
std::optional<PauliString> identify_pauli(const DenseOperator &u, double tol = 1e-9);

std::set<std::string> enumerate_valid_single_qubit_gates();

/// The paper's seven single-qubit gates by name.
const std::vector<std::pair<std::string, DenseOperator>> &paper_clifford_set();

}  // namespace spinmbqc

#endif
