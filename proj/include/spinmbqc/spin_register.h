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

#ifndef SPINMBQC_SPIN_REGISTER_H
#define SPINMBQC_SPIN_REGISTER_H

#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "spinmbqc/pauli.h"
#include "spinmbqc/rng.h"

namespace spinmbqc {

struct DotPair {
    int a = 0;
    int b = 1;
    bool operator==(const DotPair &other) const = default;
};

/// Spins of n dots; dot 0 is the most significant bit and bit 0 means spin up.
class SpinRegister {
   public:
    SpinRegister(int n_dots, StateVector amplitudes);
    static SpinRegister all_up(int n_dots);

    int num_dots() const {
        return n_dots_;
    }
    size_t dim() const {
        return static_cast<size_t>(amps_.size());
    }
    const StateVector &amplitudes() const {
        return amps_;
    }
    StateVector &mutable_amplitudes() {
        return amps_;
    }
    double norm() const {
        return amps_.norm();
    }
    void renormalize();
    void check_pair(DotPair p) const;

   private:
    int n_dots_;
    StateVector amps_;
};

enum class PairState { Singlet, Plus, PlusI, Phase };

struct PairInit {
    PairState kind = PairState::Singlet;
    double phi = 0;
};

/// Two-spin basis order (up-up, up-down, down-up, down-down) relative to (a, b).
using PairOperator = Eigen::Matrix4cd;
Eigen::Vector4cd pair_vector(PairInit init);
Eigen::Vector4cd singlet_vector();
Eigen::Vector4cd t0_vector();
PairOperator exchange_operator(double theta);

/// Dots not named in `pairs` start spin up.
SpinRegister init_register(int n_dots, const std::vector<std::pair<DotPair, PairInit>> &pairs);
/// Pairs (0,1), (2,3), ...
SpinRegister init_register(int n_dots, std::span<const PairInit> consecutive);

SpinRegister apply_pair_operator(const SpinRegister &reg, DotPair pair, const PairOperator &op);
SpinRegister exchange_pulse(const SpinRegister &reg, DotPair pair, double theta);

enum class AsymMode { ProjectiveRenormalized, ResetChannel };

enum class PairMeasurement {
    ParityExact,     // s=0 aligned, s=1 anti-aligned
    SingletTriplet,  // s=0 singlet, s=1 triplet
    ParityAsym,      // s=0 T+ or T-, s=1 singlet; T0 annihilated
    ParityAsymReset, // s=0 T+ or T-, s=1 S or T0 then reset to S
};

PairMeasurement asym_measurement(AsymMode mode);

struct OutcomeWeights {
    double w0 = 0;
    double w1 = 0;
    double p0() const {
        return w0 / (w0 + w1);
    }
    double p1() const {
        return w1 / (w0 + w1);
    }
};

/// Born weights of the two records. `deflection` mixes in the opposite projector:
/// K_s = P_s + deflection * P_{1-s}.
OutcomeWeights outcome_weights(const SpinRegister &reg, DotPair pair, PairMeasurement kind, double deflection = 0);

/// Post-measurement state for record s. `rng` is used only by the reset channel.
SpinRegister apply_outcome(
    const SpinRegister &reg, DotPair pair, PairMeasurement kind, int s, Rng *rng, double deflection = 0);

struct MeasureResult {
    int s = 0;
    SpinRegister state;
    double probability = 0;
};

/// Draws one uniform for the record (plus one for the reset channel's hidden collapse).
MeasureResult measure_pair(
    const SpinRegister &reg, DotPair pair, PairMeasurement kind, Rng &rng, double deflection = 0);
MeasureResult measure_parity_exact(const SpinRegister &reg, DotPair pair, Rng &rng);
MeasureResult measure_st(const SpinRegister &reg, DotPair pair, Rng &rng);
MeasureResult measure_parity_asym(const SpinRegister &reg, DotPair pair, Rng &rng, AsymMode mode);

/// Unrecorded {S, T0, T+, T-} collapse, then the pair is set to S.
SpinRegister reinit_singlet(const SpinRegister &reg, DotPair pair, Rng &rng);
/// Keeps only the pair's singlet component (decay re-initialisation).
SpinRegister lock_singlet(const SpinRegister &reg, DotPair pair);

struct LogicalLayout {
    std::vector<DotPair> qubits;
    void check(int n_dots) const;
};

struct LogicalState {
    StateVector amplitudes;  // normalized; dominant environment branch
    double leakage = 0;
    bool fully_leaked = false;
    /// 1 - (largest Schmidt weight) of logical qubits versus remaining dots.
    double environment_entanglement = 0;
    /// Logical amplitudes (rows) times environment basis states (columns), unnormalized.
    DenseOperator block;
};

LogicalState decode_logical(const SpinRegister &reg, const LogicalLayout &layout);
/// Weight outside span{S, T0} on any layout pair, summed directly.
double leakage_weight(const SpinRegister &reg, const LogicalLayout &layout);
/// Logical state with remaining dots spin up.
SpinRegister encode_logical(int n_dots, const LogicalLayout &layout, const StateVector &logical);

double state_fidelity(const StateVector &a, const StateVector &b);
/// Fidelity of the logical part with `target`, tracing out remaining dots; leakage excluded.
double logical_fidelity(const SpinRegister &reg, const LogicalLayout &layout, const StateVector &target);
/// Schmidt coefficients of the pair versus the rest, descending.
Eigen::VectorXd pair_schmidt_coefficients(const SpinRegister &reg, DotPair pair);
/// Von Neumann entropy in bits of logical qubit q of a pure logical state.
double reduced_entropy_bits(const StateVector &logical, size_t num_qubits, size_t q);

nlohmann::json register_to_json(const SpinRegister &reg);
SpinRegister register_from_json(const nlohmann::json &j);
nlohmann::json amplitudes_to_json(const StateVector &v);

}  // namespace spinmbqc

#endif
