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

#include "spinmbqc/noise_mc.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <thread>

namespace spinmbqc {

namespace {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void ErrorModel::validate() const {
    if (!(ej_max >= 0 && ej_max <= 0.5)) {
        throw std::invalid_argument("ej-max must lie in [0, 0.5]");
    }
    if (!(em_max >= 0 && em_max <= 0.5)) {
        throw std::invalid_argument("em-max must lie in [0, 0.5]");
    }
    if (repeat_cap < 1) {
        throw std::invalid_argument("repeat cap must be positive");
    }
}

NoiseConfig ErrorModel::noise() const {
    return {ej_max, em_max, readout, pulse_error};
}

ProtocolOptions ErrorModel::options() const {
    ProtocolOptions o;
    o.model = MeasurementModel::Asym;
    o.asym_mode = asym_mode;
    o.final_step = final_step;
    o.seed = seed;
    o.repeat_cap = repeat_cap;
    return o;
}

InputSpec InputSpec::parse(const std::string &text) {
    InputSpec spec;
    spec.name = text;
    if (text == "random") {
        spec.random = true;
        return spec;
    }
    if (text.size() != 2 || (text[0] != '0' && text[0] != '1') || (text[1] != '0' && text[1] != '1')) {
        throw std::invalid_argument("input must be 00, 01, 10, 11 or random");
    }
    spec.state = StateVector::Zero(4);
    spec.state((text[0] - '0') * 2 + (text[1] - '0')) = 1;
    return spec;
}

TrialResult run_trial(const InputSpec &input, const ErrorModel &model, uint64_t trial_index) {
    model.validate();
    TrialResult out;
    out.trial_index = trial_index;
    Rng rng = Rng::for_trial(model.seed, trial_index);
    StateVector psi = input.random ? random_logical_state(2, rng) : input.state;
    try {
        Executor ex(prepare_entangling_input(psi), rng, model.noise());
        auto layout = entangling_layout();
        run_entangling_asym(ex, layout.qubits[0], layout.qubits[1], layout.qubits[2], model.options());
        const auto &t = ex.trace();
        out.n_measurements = t.n_measurements;
        out.entangling_repeats = t.entangling_repeats;
        out.disentangling_repeats = t.disentangling_repeats;
        out.outcomes = t.outcomes;
        StateVector target = t.frame.matrix() * ideal_two_qubit_gate() * psi;
        auto data = entangling_data_layout();
        out.leakage = leakage_weight(ex.state(), data);
        out.infidelity = std::clamp(1 - logical_fidelity(ex.state(), data, target), 0.0, 1.0);
    } catch (const std::exception &e) {
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

uint64_t Histogram::total() const {
    uint64_t t = 0;
    for (auto c : counts) {
        t += c;
    }
    return t;
}

std::vector<double> uniform_edges(double lo, double hi, size_t bins) {
    std::vector<double> e(bins + 1);
    for (size_t k = 0; k <= bins; k++) {
        e[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
    }
    return e;
}

Histogram make_histogram(std::span<const double> values, std::vector<double> edges, HistogramScale scale) {
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
        throw std::invalid_argument("histogram needs at least two sorted edges");
    }
    Histogram h;
    h.bin_edges = std::move(edges);
    h.scale = scale;
    h.counts.assign(h.bin_edges.size() - 1, 0);
    h.raw.assign(values.begin(), values.end());
    for (double v : values) {
        double x = v;
        if (scale == HistogramScale::Log10) {
            x = v > 0 ? std::log10(v) : -std::numeric_limits<double>::infinity();
        }
        auto it = std::upper_bound(h.bin_edges.begin(), h.bin_edges.end(), x);
        auto bin = static_cast<std::ptrdiff_t>(it - h.bin_edges.begin()) - 1;
        bin = std::clamp<std::ptrdiff_t>(bin, 0, static_cast<std::ptrdiff_t>(h.counts.size()) - 1);
        h.counts[bin]++;
    }
    return h;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1) {
        return hi;
    }
    double lo = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lo + hi);
}

EnsembleResult run_ensemble(uint64_t n_trials, const InputSpec &input, const ErrorModel &model, unsigned threads) {
    if (n_trials < 1) {
        throw std::invalid_argument("n_trials must be at least 1");
    }
    model.validate();
    EnsembleResult r;
    r.trials.resize(n_trials);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_trials)));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; w++) {
        pool.emplace_back([&, w] {
            for (uint64_t i = w; i < n_trials; i += threads) {
                r.trials[i] = run_trial(input, model, i);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }

    std::vector<double> counts;
    std::vector<double> infid;
    std::vector<double> leak;
    double sum = 0;
    for (const auto &t : r.trials) {
        if (t.failed) {
            r.summary.failed_trials++;
            continue;
        }
        counts.push_back(t.n_measurements);
        infid.push_back(t.infidelity);
        leak.push_back(t.leakage);
        sum += t.n_measurements;
    }
    r.summary.n_trials = n_trials;
    r.summary.mean_measurements = counts.empty() ? 0 : sum / static_cast<double>(counts.size());
    r.summary.median_infidelity = median(infid);
    r.summary.median_leakage = median(leak);
    r.measurements = make_histogram(counts, uniform_edges(0.5, model.repeat_cap + 3.5, model.repeat_cap + 3), HistogramScale::Linear);
    r.infidelity = make_histogram(infid, uniform_edges(-16, 0, 64), HistogramScale::Log10);
    r.leakage = make_histogram(leak, uniform_edges(-20, 0, 80), HistogramScale::Log10);
    return r;
}

Histogram baseline_phase_gate(uint64_t n_trials, const ErrorModel &model) {
    model.validate();
    std::vector<double> infid;
    infid.reserve(n_trials);
    LogicalLayout layout{{{0, 1}}};
    for (uint64_t i = 0; i < n_trials; i++) {
        Rng rng = Rng::for_trial(model.seed, i);
        StateVector psi = random_logical_state(1, rng);
        double theta = rng.uniform(0, 2 * std::numbers::pi);
        double e = model.ej_max > 0 ? rng.uniform(-model.ej_max, model.ej_max) : 0;
        double applied = model.pulse_error == PulseErrorMode::Multiplicative ? theta * (1 + e) : theta + e * std::numbers::pi;
        SpinRegister reg = encode_logical(2, layout, psi);
        StateVector ideal = decode_logical(exchange_pulse(reg, {0, 1}, theta), layout).amplitudes;
        double f = logical_fidelity(exchange_pulse(reg, {0, 1}, applied), layout, ideal);
        infid.push_back(std::clamp(1 - f, 0.0, 1.0));
    }
    return make_histogram(infid, uniform_edges(-16, 0, 64), HistogramScale::Log10);
}

std::string histogram_csv(const Histogram &h) {
    std::string out = "bin_lo,bin_hi,count\n";
    for (size_t k = 0; k < h.counts.size(); k++) {
        out += format17(h.bin_edges[k]) + "," + format17(h.bin_edges[k + 1]) + "," + std::to_string(h.counts[k]) + "\n";
    }
    return out;
}

void export_histogram(const Histogram &h, const std::filesystem::path &path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    f << histogram_csv(h);
    if (!f) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::string trials_csv(const std::vector<TrialResult> &trials) {
    std::string out = "trial,n_measurements,infidelity,leakage,entangling_repeats,disentangling_repeats,failed\n";
    for (const auto &t : trials) {
        out += std::to_string(t.trial_index) + "," + std::to_string(t.n_measurements) + "," + format17(t.infidelity) +
               "," + format17(t.leakage) + "," + std::to_string(t.entangling_repeats) + "," +
               std::to_string(t.disentangling_repeats) + "," + (t.failed ? "1" : "0") + "\n";
    }
    return out;
}

nlohmann::json summary_to_json(const EnsembleSummary &s) {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    return {
        {"n_trials", s.n_trials},
        {"mean_measurements", num(s.mean_measurements)},
        {"median_infidelity", num(s.median_infidelity)},
        {"median_leakage", num(s.median_leakage)},
        {"failed_trials", s.failed_trials},
    };
}

}  // namespace spinmbqc
