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

#ifndef SPINMBQC_NOISE_MC_H
#define SPINMBQC_NOISE_MC_H

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "spinmbqc/protocols.h"

namespace spinmbqc {

struct ErrorModel {
    double ej_max = 0;
    double em_max = 0;
    uint64_t seed = 0;
    AsymMode asym_mode = AsymMode::ProjectiveRenormalized;
    FinalStep final_step = FinalStep::Measure;
    ReadoutModel readout = ReadoutModel::Deflect;
    PulseErrorMode pulse_error = PulseErrorMode::Multiplicative;
    int repeat_cap = 64;

    /// Throws std::invalid_argument when a magnitude is outside [0, 0.5].
    void validate() const;
    NoiseConfig noise() const;
    ProtocolOptions options() const;
};

struct InputSpec {
    bool random = false;
    StateVector state;
    std::string name;

    /// "00", "01", "10", "11" or "random".
    static InputSpec parse(const std::string &text);
};

struct TrialResult {
    uint64_t trial_index = 0;
    int n_measurements = 0;
    double infidelity = 0;
    double leakage = 0;
    int entangling_repeats = 0;
    int disentangling_repeats = 0;
    std::vector<int> outcomes;
    bool failed = false;
    std::string error;

    bool operator==(const TrialResult &other) const = default;
};

TrialResult run_trial(const InputSpec &input, const ErrorModel &model, uint64_t trial_index);

enum class HistogramScale { Linear, Log10 };

struct Histogram {
    std::vector<double> bin_edges;
    std::vector<uint64_t> counts;
    HistogramScale scale = HistogramScale::Linear;
    /// Unbinned values, in trial order.
    std::vector<double> raw;

    uint64_t total() const;
};

std::vector<double> uniform_edges(double lo, double hi, size_t bins);
/// Log10 scale bins log10(value); values outside the edges land in the end bins.
Histogram make_histogram(std::span<const double> values, std::vector<double> edges, HistogramScale scale);

struct EnsembleSummary {
    uint64_t n_trials = 0;
    double mean_measurements = 0;
    double median_infidelity = 0;
    double median_leakage = 0;
    uint64_t failed_trials = 0;
};

struct EnsembleResult {
    std::vector<TrialResult> trials;
    Histogram measurements;
    Histogram infidelity;
    Histogram leakage;
    EnsembleSummary summary;
};

/// Deterministic in (n_trials, input, model) for any thread count.
EnsembleResult run_ensemble(uint64_t n_trials, const InputSpec &input, const ErrorModel &model, unsigned threads = 1);

/// Single exchange pulse of random angle on a random logical state; log10 infidelity histogram.
Histogram baseline_phase_gate(uint64_t n_trials, const ErrorModel &model);

double median(std::vector<double> values);

std::string histogram_csv(const Histogram &h);
/// Throws std::runtime_error on I/O failure.
void export_histogram(const Histogram &h, const std::filesystem::path &path);
std::string trials_csv(const std::vector<TrialResult> &trials);
nlohmann::json summary_to_json(const EnsembleSummary &s);

}  // namespace spinmbqc

#endif
