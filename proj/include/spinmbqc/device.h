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

#ifndef SPINMBQC_DEVICE_H
#define SPINMBQC_DEVICE_H

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spinmbqc/protocols.h"

namespace spinmbqc {

enum class DeviceVariant { Ideal, Linear };

struct Sensor {
    std::string id;
    int dot = 0;
    bool operator==(const Sensor &other) const = default;
};

/// Six dots D1..D6 (indices 0..5) in a line.
struct DeviceLayout {
    DeviceVariant variant = DeviceVariant::Ideal;
    int n_dots = 6;
    std::vector<Sensor> sensors;

    static DeviceLayout ideal();
    static DeviceLayout linear();
    static DeviceLayout parse(const std::string &name);
    std::string name() const;
    /// First sensor (in preference order) coupled to either dot of the pair.
    std::optional<Sensor> sensor_for(DotPair pair) const;
};

enum class ProtocolName { Hadamard, EntangleExact, EntangleAsym };

struct ProtocolSpec {
    ProtocolName name = ProtocolName::EntangleAsym;
    AsymMode asym_mode = AsymMode::ProjectiveRenormalized;
    FinalStep final_step = FinalStep::Measure;

    static ProtocolSpec parse(const std::string &name);
    std::string str() const;
};

enum class OpKind { Pulse, ParityMeas, StMeas, Reinit, Repeat };

struct Condition {
    std::string outcome;
    int equals = 0;
    bool operator==(const Condition &other) const = default;
};

struct ScheduleStep {
    OpKind op = OpKind::Pulse;
    DotPair dots;
    double angle = 0;
    /// The applied angle is (-1)^(sum of these records) * angle.
    std::vector<std::string> sign_from;
    std::string sensor;
    /// Record label written by measurements; a reinit with a label locks it to 1.
    std::string record;
    /// Execute only if satisfied; for Repeat, the entry condition.
    std::optional<Condition> cond;
    /// Repeat: run body until this holds (checked after each pass).
    std::optional<Condition> until;
    std::vector<ScheduleStep> body;
    int cap = 0;
    /// Non-empty on SWAP pulses inserted by the compiler.
    std::string swap_chain;
    int repeat_index = 0;

    bool operator==(const ScheduleStep &other) const = default;
};

struct Schedule {
    ProtocolSpec protocol;
    std::string layout;
    std::vector<ScheduleStep> steps;
    /// Physical pairs of Q1, A, Q2 after the last step.
    std::vector<DotPair> output_qubits;

    bool operator==(const Schedule &other) const;
};

struct SwapChain {
    std::string label;
    std::vector<DotPair> pulses;
};

/// Throws std::invalid_argument for unsupported protocols or missing sensors.
Schedule compile(const ProtocolSpec &protocol, const DeviceLayout &layout);
/// SWAP pulses grouped by chain, in schedule order.
std::vector<SwapChain> swap_chains(const Schedule &s);
/// Pulses (outside SWAP chains) whose dots are not nearest neighbours.
std::vector<ScheduleStep> nonadjacent_pulses(const Schedule &s);

ProtocolRun simulate_schedule(const Schedule &schedule, const SpinRegister &reg, Rng &rng, NoiseConfig noise = {});

/// Max over seeds of 1 - fidelity between corrected schedule and abstract outputs.
double verify_equivalence(const ProtocolSpec &protocol, const DeviceLayout &layout, int n_seeds);

nlohmann::json schedule_to_json(const Schedule &s);
Schedule schedule_from_json(const nlohmann::json &j);

}  // namespace spinmbqc

#endif
