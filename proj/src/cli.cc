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

#include "spinmbqc/cli.h"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "spinmbqc/device.h"
#include "spinmbqc/sequencer.h"

namespace spinmbqc {

namespace {

enum class KeyType { UInt, Double, String, Bool };

const std::vector<std::pair<std::string, KeyType>> &key_table() {
    static const std::vector<std::pair<std::string, KeyType>> keys = {
        {"seed", KeyType::UInt},
        {"trials", KeyType::UInt},
        {"ej-max", KeyType::Double},
        {"em-max", KeyType::Double},
        {"asym-model", KeyType::String},
        {"final-step", KeyType::String},
        {"layout", KeyType::String},
        {"out", KeyType::String},
        {"protocol", KeyType::String},
        {"input", KeyType::String},
        {"readout-model", KeyType::String},
        {"pulse-error", KeyType::String},
        {"repeat-cap", KeyType::UInt},
        {"threads", KeyType::UInt},
        {"verify", KeyType::UInt},
        {"baseline", KeyType::Bool},
    };
    return keys;
}

KeyType key_type(const std::string &key) {
    for (const auto &[k, t] : key_table()) {
        if (k == key) {
            return t;
        }
    }
    throw ConfigError("unknown config key '" + key + "'");
}

bool type_matches(KeyType t, const nlohmann::json &v) {
    switch (t) {
        case KeyType::UInt:
            return v.is_number_unsigned() || (v.is_number_integer() && v.get<int64_t>() >= 0);
        case KeyType::Double:
            return v.is_number();
        case KeyType::String:
            return v.is_string();
        case KeyType::Bool:
            return v.is_boolean();
    }
    return false;
}

std::string choice(const RunConfig &c, const std::string &key, std::initializer_list<const char *> allowed) {
    std::string v = c.str(key);
    for (const char *a : allowed) {
        if (v == a) {
            return v;
        }
    }
    std::string msg = key + " must be one of";
    for (const char *a : allowed) {
        msg += std::string(" ") + a;
    }
    throw ConfigError(msg + ", got '" + v + "'");
}

ProtocolSpec protocol_spec(const RunConfig &c) {
    ProtocolSpec p;
    try {
        p = ProtocolSpec::parse(c.str("protocol"));
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    ErrorModel m = c.error_model();
    p.asym_mode = m.asym_mode;
    p.final_step = m.final_step;
    return p;
}

StateVector single_qubit_input(const std::string &name) {
    double r = 1 / std::sqrt(2.0);
    StateVector v(2);
    if (name == "0") {
        v << 1, 0;
    } else if (name == "1") {
        v << 0, 1;
    } else if (name == "+") {
        v << r, r;
    } else if (name == "-") {
        v << r, -r;
    } else {
        throw ConfigError("hadamard input must be 0, 1, +, - or random, got '" + name + "'");
    }
    return v;
}

DenseOperator hadamard_matrix() {
    DenseOperator h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

StateVector align_to(const StateVector &v, const StateVector &target) {
    cplx t = target.dot(v);
    if (std::abs(t) < 1e-300) {
        return v;
    }
    return v * (std::conj(t) / std::abs(t));
}

nlohmann::json matrix_json(const DenseOperator &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    f << text;
    if (!f) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

}  // namespace

RunConfig RunConfig::defaults() {
    RunConfig c;
    c.values = {
        {"seed", 0},
        {"trials", 10000},
        {"ej-max", 0.0},
        {"em-max", 0.0},
        {"asym-model", "renormalized"},
        {"final-step", "measure"},
        {"layout", "ideal"},
        {"out", ""},
        {"protocol", "entangle-asym"},
        {"input", "00"},
        {"readout-model", "deflect"},
        {"pulse-error", "multiplicative"},
        {"repeat-cap", 64},
        {"threads", 1},
        {"verify", 0},
        {"baseline", false},
    };
    return c;
}

const std::vector<std::string> &RunConfig::known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto &e : key_table()) {
            k.push_back(e.first);
        }
        return k;
    }();
    return keys;
}

void RunConfig::merge(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto &[key, v] : j.items()) {
        KeyType t = key_type(key);
        if (!type_matches(t, v)) {
            throw ConfigError("config key '" + key + "' has the wrong type");
        }
        values[key] = v;
    }
}

void RunConfig::merge_file(const std::filesystem::path &path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot read config file " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    merge(j);
}

void RunConfig::set_from_text(const std::string &key, const std::string &text) {
    KeyType t = key_type(key);
    try {
        size_t used = 0;
        switch (t) {
            case KeyType::UInt: {
                if (text.empty() || text[0] == '-') {
                    throw std::invalid_argument("negative");
                }
                uint64_t v = std::stoull(text, &used);
                if (used != text.size()) {
                    throw std::invalid_argument("trailing");
                }
                values[key] = v;
                return;
            }
            case KeyType::Double: {
                double v = std::stod(text, &used);
                if (used != text.size()) {
                    throw std::invalid_argument("trailing");
                }
                values[key] = v;
                return;
            }
            case KeyType::Bool:
                if (text != "true" && text != "false") {
                    throw std::invalid_argument("bool");
                }
                values[key] = text == "true";
                return;
            case KeyType::String:
                values[key] = text;
                return;
        }
    } catch (const std::logic_error &) {
        throw ConfigError("invalid value '" + text + "' for --" + key);
    }
}

uint64_t RunConfig::seed() const {
    return values.at("seed").get<uint64_t>();
}

uint64_t RunConfig::trials() const {
    return values.at("trials").get<uint64_t>();
}

unsigned RunConfig::threads() const {
    auto t = values.at("threads").get<uint64_t>();
    if (t < 1 || t > 1024) {
        throw ConfigError("threads must lie in [1, 1024]");
    }
    return static_cast<unsigned>(t);
}

std::string RunConfig::str(const std::string &key) const {
    return values.at(key).get<std::string>();
}

ErrorModel RunConfig::error_model() const {
    ErrorModel m;
    m.seed = seed();
    m.ej_max = values.at("ej-max").get<double>();
    m.em_max = values.at("em-max").get<double>();
    m.asym_mode = choice(*this, "asym-model", {"renormalized", "reset"}) == "reset" ? AsymMode::ResetChannel
                                                                                     : AsymMode::ProjectiveRenormalized;
    m.final_step = choice(*this, "final-step", {"measure", "reinit"}) == "reinit" ? FinalStep::Reinit
                                                                                  : FinalStep::Measure;
    m.readout = choice(*this, "readout-model", {"deflect", "flip"}) == "flip" ? ReadoutModel::RecordFlip
                                                                              : ReadoutModel::Deflect;
    m.pulse_error = choice(*this, "pulse-error", {"multiplicative", "additive"}) == "additive"
                        ? PulseErrorMode::Additive
                        : PulseErrorMode::Multiplicative;
    m.repeat_cap = static_cast<int>(std::min<uint64_t>(values.at("repeat-cap").get<uint64_t>(), 1u << 20));
    try {
        m.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    return m;
}

int cmd_validate(const std::string &sequence, std::ostream &out, std::ostream &err) {
    MeasurementSequence seq;
    try {
        seq = MeasurementSequence::parse(sequence);
    } catch (const std::invalid_argument &e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    }
    auto violations = validate_sequence(seq);
    if (violations.empty()) {
        out << "valid\n";
        return kExitOk;
    }
    for (const auto &v : violations) {
        out << "violation at step " << v.step << ": " << v.message << "\n";
    }
    return kExitRuntime;
}

int cmd_derive(const std::string &sequence, const std::string &outcomes, std::ostream &out, std::ostream &err) {
    MeasurementSequence seq;
    std::vector<int> s;
    try {
        seq = MeasurementSequence::parse(sequence);
        s = outcomes.empty() ? std::vector<int>(seq.steps.size(), 0) : parse_outcomes(outcomes);
    } catch (const std::invalid_argument &e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (s.size() != seq.steps.size()) {
        err << "parse error: " << s.size() << " outcomes for " << seq.steps.size() << " steps\n";
        return kExitUsage;
    }
    nlohmann::json report;
    report["sequence"] = seq.str();
    report["outcomes"] = s;
    auto violations = validate_sequence(seq);
    if (!violations.empty()) {
        nlohmann::json vs = nlohmann::json::array();
        for (const auto &v : violations) {
            vs.push_back({{"step", v.step}, {"message", v.message}});
        }
        report["valid"] = false;
        report["violations"] = vs;
        report["unitary"] = false;
        report["status"] = "invalid-sequence";
        report["label"] = "non-unitary";
        out << report.dump(2) << "\n";
        return kExitOk;
    }
    DerivedGate g = derive_sequence_oracle(seq, s);
    report["valid"] = true;
    report["unitary"] = g.unitary();
    report["status"] = status_name(g.status);
    report["U"] = matrix_json(g.U);
    report["label"] = g.label;
    report["label_pauli"] = g.label_pauli ? nlohmann::json(g.label_pauli->str()) : nlohmann::json(nullptr);
    report["correction"] = g.correction ? nlohmann::json(g.correction->str()) : nlohmann::json(nullptr);
    if (g.alpha) {
        report["alpha"] = *g.alpha;
    }
    if (g.beta) {
        report["beta"] = {g.beta->real(), g.beta->imag()};
    }
    out << report.dump(2) << "\n";
    return kExitOk;
}

int cmd_run(const RunConfig &config, std::ostream &out, std::ostream &) {
    ErrorModel model = config.error_model();
    ProtocolSpec spec = protocol_spec(config);
    std::string input = config.str("input");
    bool hadamard = spec.name == ProtocolName::Hadamard;
    if (hadamard && input == "00") {
        input = "0";
    }
    Rng rng = Rng::for_trial(model.seed, 0);
    StateVector psi;
    if (input == "random") {
        psi = random_logical_state(hadamard ? 1 : 2, rng);
    } else if (hadamard) {
        psi = single_qubit_input(input);
    } else {
        try {
            psi = InputSpec::parse(input).state;
        } catch (const std::invalid_argument &e) {
            throw ConfigError(e.what());
        }
    }

    SpinRegister reg = hadamard ? prepare_hadamard_input(psi) : prepare_entangling_input(psi);
    Executor ex(reg, rng, model.noise());
    LogicalLayout data;
    StateVector expected;
    if (hadamard) {
        auto q = hadamard_layout().qubits;
        run_hadamard(ex, q[0], q[1]);
        data = LogicalLayout{{q[0]}};
        expected = hadamard_matrix() * psi;
    } else {
        auto q = entangling_layout().qubits;
        if (spec.name == ProtocolName::EntangleExact) {
            run_entangling_exact(ex, q[0], q[1], q[2]);
        } else {
            run_entangling_asym(ex, q[0], q[1], q[2], model.options());
        }
        data = entangling_data_layout();
        expected = ideal_two_qubit_gate() * psi;
    }
    const auto &trace = ex.trace();
    StateVector raw = decode_logical(ex.state(), data).amplitudes;
    StateVector corrected = align_to(trace.frame.matrix() * raw, expected);

    nlohmann::json report;
    report["protocol"] = spec.str();
    report["input"] = input;
    report["seed"] = model.seed;
    report["trace"] = trace_to_json(trace);
    report["corrected_state"] = amplitudes_to_json(corrected);
    report["expected_state"] = amplitudes_to_json(expected);
    report["fidelity"] = state_fidelity(corrected, expected);
    report["leakage"] = leakage_weight(ex.state(), data);
    std::string text = report.dump(2) + "\n";
    out << text;
    if (!config.str("out").empty()) {
        write_file(config.str("out"), text);
    }
    return kExitOk;
}

int cmd_montecarlo(const RunConfig &config, std::ostream &out, std::ostream &) {
    ErrorModel model = config.error_model();
    InputSpec input;
    try {
        input = InputSpec::parse(config.str("input"));
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    std::filesystem::path dir = config.str("out");
    if (dir.empty()) {
        throw ConfigError("montecarlo needs --out <directory>");
    }
    uint64_t n = config.trials();
    if (n == 0) {
        throw ConfigError("trials must be positive");
    }
    std::filesystem::create_directories(dir);
    EnsembleResult r = run_ensemble(n, input, model, config.threads());
    export_histogram(r.measurements, dir / "measurements.csv");
    export_histogram(r.infidelity, dir / "infidelity.csv");
    export_histogram(r.leakage, dir / "leakage.csv");
    write_file(dir / "trials.csv", trials_csv(r.trials));
    nlohmann::json summary = summary_to_json(r.summary);
    if (config.values.at("baseline").get<bool>()) {
        Histogram b = baseline_phase_gate(n, model);
        export_histogram(b, dir / "baseline_infidelity.csv");
        summary["baseline_median_infidelity"] = median(b.raw);
    }
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    write_file(dir / "effective_config.json", config.values.dump(2) + "\n");
    out << summary.dump(2) << "\n";
    return r.summary.failed_trials ? kExitRuntime : kExitOk;
}

int cmd_compile(const RunConfig &config, std::ostream &out, std::ostream &err) {
    ProtocolSpec spec = protocol_spec(config);
    DeviceLayout layout;
    try {
        layout = DeviceLayout::parse(config.str("layout"));
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    Schedule sched;
    try {
        sched = compile(spec, layout);
    } catch (const std::invalid_argument &e) {
        err << "compile error: " << e.what() << "\n";
        return kExitUsage;
    }
    std::string text = schedule_to_json(sched).dump(2) + "\n";
    if (config.str("out").empty()) {
        out << text;
    } else {
        write_file(config.str("out"), text);
    }
    auto n = config.values.at("verify").get<uint64_t>();
    if (n > 0) {
        double dev = verify_equivalence(spec, layout, static_cast<int>(n));
        std::ostringstream line;
        line.precision(3);
        line << "max deviation " << std::scientific << dev << " over " << n << " seeds\n";
        (config.str("out").empty() ? err : out) << line.str();
        return dev <= 1e-10 ? kExitOk : kExitRuntime;
    }
    return kExitOk;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Measurement-based gates on spin qubits: derivation, simulation and compilation"};
    app.name("spinmbqc");
    app.require_subcommand(1);

    std::string sequence;
    std::string outcomes;
    auto *validate = app.add_subcommand("validate", "Check the commutation rule of a measurement sequence");
    validate->add_option("sequence", sequence, "Steps separated by ->, e.g. \"IZI -> ZXI -> IZX -> IXI\"")->required();
    auto *derive = app.add_subcommand("derive", "Derive the gate implemented by a measurement sequence");
    derive->add_option("sequence", sequence, "Steps separated by ->")->required();
    derive->add_option("--outcomes", outcomes, "Outcome bitstring, one bit per step (default all zero)");

    std::string config_path;
    std::map<std::string, std::string> flags;
    std::map<std::string, CLI::Option *> opts;
    auto add_config_flags = [&](CLI::App *sub, std::initializer_list<const char *> keys) {
        sub->add_option("--config", config_path, "JSON file with the same keys as the flags");
        for (const char *k : keys) {
            opts[std::string(sub->get_name()) + "/" + k] = sub->add_option(std::string("--") + k, flags[k]);
        }
    };
    auto *run = app.add_subcommand("run", "Run one seeded protocol instance");
    add_config_flags(run, {"protocol", "input", "seed", "ej-max", "em-max", "asym-model", "final-step", "readout-model",
                           "pulse-error", "repeat-cap", "out"});
    auto *mc = app.add_subcommand("montecarlo", "Monte Carlo ensemble with histogram output");
    add_config_flags(mc, {"input", "seed", "trials", "ej-max", "em-max", "asym-model", "final-step", "readout-model",
                          "pulse-error", "repeat-cap", "threads", "baseline", "out"});
    auto *comp = app.add_subcommand("compile", "Compile a protocol onto a six-dot layout");
    add_config_flags(comp, {"protocol", "layout", "asym-model", "final-step", "verify", "seed", "out"});
    for (auto *sub : {run, comp}) {
        sub->add_option("protocol_name", flags["positional-protocol"], "hadamard, entangle-exact or entangle-asym");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (validate->parsed()) {
            return cmd_validate(sequence, out, err);
        }
        if (derive->parsed()) {
            return cmd_derive(sequence, outcomes, out, err);
        }
        CLI::App *sub = run->parsed() ? run : mc->parsed() ? mc : comp;
        RunConfig config = RunConfig::defaults();
        if (!config_path.empty()) {
            config.merge_file(config_path);
        }
        for (const auto &[name, opt] : opts) {
            auto slash = name.find('/');
            if (name.substr(0, slash) == sub->get_name() && opt->count() > 0) {
                std::string key = name.substr(slash + 1);
                config.set_from_text(key, flags[key]);
            }
        }
        if (!flags["positional-protocol"].empty()) {
            config.values["protocol"] = flags["positional-protocol"];
        }
        if (sub == run) {
            return cmd_run(config, out, err);
        }
        if (sub == mc) {
            return cmd_montecarlo(config, out, err);
        }
        return cmd_compile(config, out, err);
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace spinmbqc
