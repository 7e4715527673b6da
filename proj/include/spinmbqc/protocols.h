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

#ifndef SPINMBQC_PROTOCOLS_H
#define SPINMBQC_PROTOCOLS_H

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spinmbqc/spin_register.h"

namespace spinmbqc {

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A forced outcome with zero Born weight.
struct ZeroProbabilityBranch : ProtocolError {
    ZeroProbabilityBranch(const std::string &what, double p) : ProtocolError(what), probability(p) {
    }
    double probability;
};

struct QubitFrame {
    int x = 0;
    int z = 0;
    bool operator==(const QubitFrame &other) const = default;
};

struct PauliFrame {
    std::vector<QubitFrame> qubits;

    explicit PauliFrame(size_t n = 0) : qubits(n) {
    }
    /// Tensor product of X^x Z^z per qubit, qubit 0 most significant.
    DenseOperator matrix() const;
    std::string str() const;
    bool operator==(const PauliFrame &other) const = default;
};

enum class StepKind { Pulse, Measurement, Reinit };
const char *step_kind_name(StepKind k);

struct TraceStep {
    StepKind kind = StepKind::Pulse;
    DotPair dots;
    std::optional<double> angle;
    std::optional<int> outcome;
    int repeat_index = 0;
};

struct ProtocolTrace {
    std::vector<TraceStep> steps;
    std::vector<int> outcomes;
    int n_measurements = 0;
    int n_pulses = 0;
    int entangling_repeats = 0;
    int disentangling_repeats = 0;
    PauliFrame frame;
    /// Product of the Born probabilities of the realized records.
    double path_probability = 1;
};

enum class MeasurementModel { Exact, Asym };
enum class FinalStep { Measure, Reinit };
enum class ReadoutModel { Deflect, RecordFlip };
enum class PulseErrorMode { Multiplicative, Additive };

struct NoiseConfig {
    double ej_max = 0;
    double em_max = 0;
    ReadoutModel readout = ReadoutModel::Deflect;
    PulseErrorMode pulse_error = PulseErrorMode::Multiplicative;
};

struct ProtocolOptions {
    MeasurementModel model = MeasurementModel::Asym;
    AsymMode asym_mode = AsymMode::ProjectiveRenormalized;
    FinalStep final_step = FinalStep::Measure;
    uint64_t seed = 0;
    int repeat_cap = 64;
};

/// Applies pulses and measurements to a register, drawing randomness in a fixed order:
/// per pulse one error draw (only when ej_max > 0); per measurement one error draw
/// (only when em_max > 0), one record draw, then a flip draw under RecordFlip.
class Executor {
   public:
    Executor(SpinRegister reg, Rng &rng, NoiseConfig noise = {});

    void pulse(DotPair pair, double theta, int repeat_index = 0);
    int measure(DotPair pair, PairMeasurement kind, int repeat_index = 0);
    /// Decay re-initialisation of the pair into the singlet.
    void reinit(DotPair pair, int repeat_index = 0);

    /// Subsequent measurements take these records instead of sampling.
    void force_outcomes(std::vector<int> outcomes);
    /// Born weights seen by the most recent measurement.
    OutcomeWeights last_weights() const {
        return last_weights_;
    }

    const SpinRegister &state() const {
        return reg_;
    }
    ProtocolTrace &trace() {
        return trace_;
    }
    Rng &rng() {
        return rng_;
    }

   private:
    SpinRegister reg_;
    Rng &rng_;
    NoiseConfig noise_;
    ProtocolTrace trace_;
    std::deque<int> forced_;
    OutcomeWeights last_weights_;
};

struct ProtocolRun {
    ProtocolTrace trace;
    SpinRegister state;
};

/// Data (D1,D2)-style pair and ancilla pair; ancilla must hold |+>.
void run_hadamard(Executor &ex, DotPair data, DotPair ancilla);
ProtocolRun hadamard_protocol(const SpinRegister &reg, DotPair data, DotPair ancilla, const ProtocolOptions &options);

void run_entangling_exact(Executor &ex, DotPair q1, DotPair ancilla, DotPair q2);
ProtocolRun entangling_protocol_exact(
    const SpinRegister &reg, DotPair q1, DotPair ancilla, DotPair q2, const ProtocolOptions &options);

void run_entangling_asym(Executor &ex, DotPair q1, DotPair ancilla, DotPair q2, const ProtocolOptions &options);
ProtocolRun entangling_protocol_asym(
    const SpinRegister &reg, DotPair q1, DotPair ancilla, DotPair q2, const ProtocolOptions &options);

struct RepeatRequirement {
    bool entangling = false;
    std::optional<bool> disentangling;
    bool operator==(const RepeatRequirement &other) const = default;
};

/// Table I lookup.
RepeatRequirement required_repeats(int s1, int s2, int s3);

/// CNOT (HX x I) CNOT.
DenseOperator ideal_two_qubit_gate();
/// Reference output of the entangling gate with Pauli-x corrections X^{1-s2} x X^{|s2-s3|};
/// s3 = 1 means the ancilla was left in the singlet.
StateVector expected_corrected_output(const StateVector &input, int s2, int s3);

enum class BellState { PsiPlus, PsiMinus, PhiPlus, PhiMinus };
/// Psi = (|00> +- |11>)/sqrt2, Phi = (|01> +- |10>)/sqrt2.
StateVector bell_state(BellState b);

/// Standard layouts: Hadamard on (0,1)+(2,3); entangling on (0,1), (2,3), (4,5).
LogicalLayout hadamard_layout();
LogicalLayout entangling_layout();
LogicalLayout entangling_data_layout();
/// Register with the logical data state and the ancilla in |0> or |+>.
SpinRegister prepare_entangling_input(const StateVector &data);
SpinRegister prepare_hadamard_input(const StateVector &data);
StateVector random_logical_state(size_t num_qubits, Rng &rng);

nlohmann::json trace_to_json(const ProtocolTrace &trace);

}  // namespace spinmbqc

#endif
