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

#include "spinmbqc/device.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace spinmbqc {

namespace {

constexpr double kPi = std::numbers::pi;

const char *op_name(OpKind k) {
    switch (k) {
        case OpKind::Pulse:
            return "pulse";
        case OpKind::ParityMeas:
            return "parity_meas";
        case OpKind::StMeas:
            return "st_meas";
        case OpKind::Reinit:
            return "reinit";
        case OpKind::Repeat:
            return "repeat";
    }
    return "?";
}

OpKind op_from_name(const std::string &s) {
    for (auto k : {OpKind::Pulse, OpKind::ParityMeas, OpKind::StMeas, OpKind::Reinit, OpKind::Repeat}) {
        if (s == op_name(k)) {
            return k;
        }
    }
    throw std::invalid_argument("unknown schedule op '" + s + "'");
}

std::string dot_name(int d) {
    return "D" + std::to_string(d + 1);
}

// Lowers protocol operations addressed to logical dots onto physical positions.
class Builder {
   public:
    Builder(const DeviceLayout &layout, std::vector<ScheduleStep> &out) : layout_(layout), out_(&out) {
        for (int d = 0; d < layout.n_dots; d++) {
            pos_.push_back(d);
            at_.push_back(d);
        }
    }

    DotPair phys(DotPair logical) const {
        return {pos_[logical.a], pos_[logical.b]};
    }

    void pulse(DotPair logical, double angle, std::vector<std::string> sign_from = {},
               std::optional<Condition> cond = std::nullopt, int repeat_index = 0) {
        ScheduleStep s;
        s.op = OpKind::Pulse;
        s.dots = phys(logical);
        s.angle = angle;
        s.sign_from = std::move(sign_from);
        s.cond = std::move(cond);
        s.repeat_index = repeat_index;
        out_->push_back(std::move(s));
    }

    void measure(OpKind op, DotPair logical, std::string record, std::optional<Condition> cond = std::nullopt,
                 int repeat_index = 0) {
        ScheduleStep s;
        s.op = op;
        s.dots = phys(logical);
        auto sensor = layout_.sensor_for(s.dots);
        if (!sensor) {
            throw std::invalid_argument(
                "layout " + layout_.name() + " has no sensor coupled to " + dot_name(s.dots.a) + " or " +
                dot_name(s.dots.b));
        }
        s.sensor = sensor->id;
        s.record = std::move(record);
        s.cond = std::move(cond);
        s.repeat_index = repeat_index;
        out_->push_back(std::move(s));
    }

    void reinit(DotPair logical, std::string record = {}) {
        ScheduleStep s;
        s.op = OpKind::Reinit;
        s.dots = phys(logical);
        s.record = std::move(record);
        out_->push_back(std::move(s));
    }

    /// Exchanges the spins at positions i < j with nearest-neighbour pi pulses.
    void swap_chain(const std::string &label, const std::vector<std::pair<int, int>> &exchanges) {
        for (auto [i, j] : exchanges) {
            std::vector<int> seq;
            for (int p = i; p < j; p++) {
                seq.push_back(p);
            }
            for (int p = j - 2; p >= i; p--) {
                seq.push_back(p);
            }
            for (int p : seq) {
                ScheduleStep s;
                s.op = OpKind::Pulse;
                s.dots = {p, p + 1};
                s.angle = kPi;
                s.swap_chain = label;
                out_->push_back(std::move(s));
                std::swap(at_[p], at_[p + 1]);
                pos_[at_[p]] = p;
                pos_[at_[p + 1]] = p + 1;
            }
        }
    }

    void redirect(std::vector<ScheduleStep> &out) {
        out_ = &out;
    }

   private:
    const DeviceLayout &layout_;
    std::vector<ScheduleStep> *out_;
    std::vector<int> pos_;
    std::vector<int> at_;
};

const DotPair kQ1{0, 1};
const DotPair kA{2, 3};
const DotPair kQ2{4, 5};
const DotPair kFirst{1, 2};
const DotPair kSecond{3, 4};

const std::string kChain1 = "D1<->D3";
const std::string kChain2 = "D4<->D6";
const std::string kChain3 = "D1<->D3,D3<->D5,D3<->D4";

Condition eq(const std::string &label, int v) {
    return {label, v};
}

int lookup(const std::map<std::string, int> &records, const std::string &label) {
    auto it = records.find(label);
    if (it == records.end()) {
        throw ProtocolError("schedule condition references unmeasured outcome '" + label + "'");
    }
    return it->second;
}

bool holds(const std::map<std::string, int> &records, const std::optional<Condition> &c) {
    return !c || lookup(records, c->outcome) == c->equals;
}

struct ScheduleRunner {
    Executor &ex;
    PairMeasurement parity_kind;
    std::map<std::string, int> records;
    int entangling_repeats = 0;

    void run(const std::vector<ScheduleStep> &steps) {
        for (const auto &s : steps) {
            if (s.op == OpKind::Repeat) {
                if (!holds(records, s.cond)) {
                    continue;
                }
                int pass = 0;
                do {
                    if (++pass > s.cap) {
                        throw ProtocolError("schedule repeat cap exceeded");
                    }
                    run(s.body);
                    entangling_repeats = pass;
                } while (!holds(records, s.until));
                continue;
            }
            if (!holds(records, s.cond)) {
                continue;
            }
            switch (s.op) {
                case OpKind::Pulse: {
                    int parity = 0;
                    for (const auto &label : s.sign_from) {
                        parity += lookup(records, label);
                    }
                    ex.pulse(s.dots, (parity % 2 ? -1.0 : 1.0) * s.angle, s.repeat_index);
                    break;
                }
                case OpKind::ParityMeas:
                    records[s.record] = ex.measure(s.dots, parity_kind, s.repeat_index);
                    break;
                case OpKind::StMeas:
                    records[s.record] = ex.measure(s.dots, PairMeasurement::SingletTriplet, s.repeat_index);
                    break;
                case OpKind::Reinit:
                    ex.reinit(s.dots, s.repeat_index);
                    if (!s.record.empty()) {
                        records[s.record] = 1;
                    }
                    break;
                case OpKind::Repeat:
                    break;
            }
        }
    }
};

nlohmann::json cond_json(const std::optional<Condition> &c) {
    if (!c) {
        return nullptr;
    }
    return {{"outcome", c->outcome}, {"equals", c->equals}};
}

std::optional<Condition> cond_from(const nlohmann::json &j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return Condition{j.at("outcome").get<std::string>(), j.at("equals").get<int>()};
}

nlohmann::json step_json(const ScheduleStep &s) {
    nlohmann::json j;
    j["op"] = op_name(s.op);
    j["dots"] = {s.dots.a, s.dots.b};
    j["angle"] = s.angle;
    j["sensor"] = s.sensor.empty() ? nlohmann::json(nullptr) : nlohmann::json(s.sensor);
    j["cond"] = cond_json(s.cond);
    if (!s.sign_from.empty()) {
        j["sign_from"] = s.sign_from;
    }
    if (!s.record.empty()) {
        j["record"] = s.record;
    }
    if (s.until) {
        j["until"] = cond_json(s.until);
    }
    if (s.op == OpKind::Repeat) {
        nlohmann::json body = nlohmann::json::array();
        for (const auto &b : s.body) {
            body.push_back(step_json(b));
        }
        j["body"] = body;
        j["cap"] = s.cap;
    }
    if (!s.swap_chain.empty()) {
        j["swap_chain"] = s.swap_chain;
    }
    if (s.repeat_index) {
        j["repeat_index"] = s.repeat_index;
    }
    return j;
}

ScheduleStep step_from(const nlohmann::json &j) {
    ScheduleStep s;
    s.op = op_from_name(j.at("op").get<std::string>());
    auto d = j.at("dots");
    s.dots = {d.at(0).get<int>(), d.at(1).get<int>()};
    s.angle = j.value("angle", 0.0);
    if (j.contains("sensor") && !j["sensor"].is_null()) {
        s.sensor = j["sensor"].get<std::string>();
    }
    s.cond = cond_from(j.value("cond", nlohmann::json(nullptr)));
    s.sign_from = j.value("sign_from", std::vector<std::string>{});
    s.record = j.value("record", std::string{});
    s.until = cond_from(j.value("until", nlohmann::json(nullptr)));
    if (j.contains("body")) {
        for (const auto &b : j["body"]) {
            s.body.push_back(step_from(b));
        }
    }
    s.cap = j.value("cap", 0);
    s.swap_chain = j.value("swap_chain", std::string{});
    s.repeat_index = j.value("repeat_index", 0);
    return s;
}

}  // namespace

DeviceLayout DeviceLayout::ideal() {
    return {DeviceVariant::Ideal, 6, {{"M3", 2}, {"M4", 3}, {"M1", 0}, {"M2", 5}}};
}

DeviceLayout DeviceLayout::linear() {
    return {DeviceVariant::Linear, 6, {{"M1", 0}, {"M2", 5}}};
}

DeviceLayout DeviceLayout::parse(const std::string &name) {
    if (name == "ideal") {
        return ideal();
    }
    if (name == "linear") {
        return linear();
    }
    throw std::invalid_argument("layout must be ideal or linear, got '" + name + "'");
}

std::string DeviceLayout::name() const {
    return variant == DeviceVariant::Ideal ? "ideal" : "linear";
}

std::optional<Sensor> DeviceLayout::sensor_for(DotPair pair) const {
    for (const auto &s : sensors) {
        if (s.dot == pair.a || s.dot == pair.b) {
            return s;
        }
    }
    return std::nullopt;
}

ProtocolSpec ProtocolSpec::parse(const std::string &name) {
    ProtocolSpec p;
    if (name == "hadamard") {
        p.name = ProtocolName::Hadamard;
    } else if (name == "entangle-exact") {
        p.name = ProtocolName::EntangleExact;
    } else if (name == "entangle-asym") {
        p.name = ProtocolName::EntangleAsym;
    } else {
        throw std::invalid_argument("protocol must be hadamard, entangle-exact or entangle-asym, got '" + name + "'");
    }
    return p;
}

std::string ProtocolSpec::str() const {
    switch (name) {
        case ProtocolName::Hadamard:
            return "hadamard";
        case ProtocolName::EntangleExact:
            return "entangle-exact";
        case ProtocolName::EntangleAsym:
            return "entangle-asym";
    }
    return "?";
}

bool Schedule::operator==(const Schedule &other) const {
    return protocol.name == other.protocol.name && protocol.asym_mode == other.protocol.asym_mode &&
           protocol.final_step == other.protocol.final_step && layout == other.layout && steps == other.steps &&
           output_qubits == other.output_qubits;
}

Schedule compile(const ProtocolSpec &protocol, const DeviceLayout &layout) {
    if (protocol.name == ProtocolName::Hadamard) {
        throw std::invalid_argument("compile: the six-dot layouts target the two-qubit protocols only");
    }
    if (layout.n_dots != 6) {
        throw std::invalid_argument("compile: layout must have six dots");
    }
    Schedule sched;
    sched.protocol = protocol;
    sched.layout = layout.name();
    bool linear = layout.variant == DeviceVariant::Linear;
    bool asym = protocol.name == ProtocolName::EntangleAsym;
    bool reinit = asym && protocol.final_step == FinalStep::Reinit;
    Builder b(layout, sched.steps);

    if (linear) {
        b.swap_chain(kChain1, {{0, 2}});
    }
    b.pulse(kQ1, kPi / 2);
    b.measure(OpKind::ParityMeas, kFirst, "s1");
    if (asym) {
        ScheduleStep loop;
        loop.op = OpKind::Repeat;
        loop.cond = eq("s1", 1);
        loop.until = eq("r", 0);
        loop.cap = 64;
        b.redirect(loop.body);
        b.pulse(kQ1, kPi);
        b.measure(OpKind::ParityMeas, kFirst, "r");
        b.redirect(sched.steps);
        sched.steps.push_back(std::move(loop));
    }
    b.pulse(kA, kPi / 2, {"s1"});
    if (linear) {
        b.swap_chain(kChain2, {{3, 5}});
    }
    if (reinit) {
        b.reinit(kSecond, "s2");
    } else {
        b.measure(OpKind::ParityMeas, kSecond, "s2");
    }
    b.pulse(kQ1, kPi / 2, asym ? std::vector<std::string>{"s1", "s2"} : std::vector<std::string>{"s2"});
    if (linear) {
        b.swap_chain(kChain3, {{0, 2}, {2, 4}, {2, 3}});
    }
    if (reinit) {
        b.reinit(kA, "s3");
    } else if (asym) {
        b.measure(OpKind::ParityMeas, kA, "s3");
        b.pulse(kSecond, kPi, {}, eq("s3", 0), 1);
        b.measure(OpKind::ParityMeas, kA, "s3r", eq("s3", 0), 1);
    } else {
        b.measure(OpKind::StMeas, kA, "s3");
    }
    sched.output_qubits = {b.phys(kQ1), b.phys(kA), b.phys(kQ2)};
    return sched;
}

std::vector<SwapChain> swap_chains(const Schedule &s) {
    std::vector<SwapChain> out;
    for (const auto &step : s.steps) {
        if (step.swap_chain.empty()) {
            continue;
        }
        if (out.empty() || out.back().label != step.swap_chain || step.op != OpKind::Pulse) {
            out.push_back({step.swap_chain, {}});
        }
        out.back().pulses.push_back(step.dots);
    }
    return out;
}

std::vector<ScheduleStep> nonadjacent_pulses(const Schedule &s) {
    std::vector<ScheduleStep> out;
    std::function<void(const std::vector<ScheduleStep> &)> walk = [&](const std::vector<ScheduleStep> &steps) {
        for (const auto &step : steps) {
            if (step.op == OpKind::Repeat) {
                walk(step.body);
            } else if (step.op == OpKind::Pulse && std::abs(step.dots.a - step.dots.b) != 1) {
                out.push_back(step);
            }
        }
    };
    walk(s.steps);
    return out;
}

ProtocolRun simulate_schedule(const Schedule &schedule, const SpinRegister &reg, Rng &rng, NoiseConfig noise) {
    Executor ex(reg, rng, noise);
    PairMeasurement parity = schedule.protocol.name == ProtocolName::EntangleAsym
                                 ? asym_measurement(schedule.protocol.asym_mode)
                                 : PairMeasurement::ParityExact;
    ScheduleRunner runner{ex, parity, {}, 0};
    runner.run(schedule.steps);
    auto &t = ex.trace();
    if (schedule.steps.empty()) {
        return {t, ex.state()};
    }
    auto &rec = runner.records;
    int s1 = lookup(rec, "s1");
    int s2 = lookup(rec, "s2");
    int s3 = lookup(rec, "s3");
    t.outcomes = {s1, s2, s3};
    t.entangling_repeats = runner.entangling_repeats;
    t.frame = PauliFrame(2);
    t.frame.qubits[0].x = 1 - s2;
    if (schedule.protocol.name == ProtocolName::EntangleAsym) {
        int last = s3;
        if (rec.count("s3r")) {
            last = rec["s3r"];
            t.disentangling_repeats = 1;
        }
        t.frame.qubits[1].x = s2 == last ? 0 : 1;
    } else {
        t.frame.qubits[1].x = 1 ^ s2 ^ s3;
    }
    return {t, ex.state()};
}

double verify_equivalence(const ProtocolSpec &protocol, const DeviceLayout &layout, int n_seeds) {
    Schedule sched = compile(protocol, layout);
    ProtocolOptions opts;
    opts.model = protocol.name == ProtocolName::EntangleAsym ? MeasurementModel::Asym : MeasurementModel::Exact;
    opts.asym_mode = protocol.asym_mode;
    opts.final_step = protocol.final_step;
    double worst = 0;
    for (int seed = 0; seed < n_seeds; seed++) {
        Rng input_rng(splitmix64(static_cast<uint64_t>(seed) + 0x5EEDULL));
        StateVector psi = random_logical_state(2, input_rng);
        SpinRegister reg = prepare_entangling_input(psi);

        Rng abstract_rng(static_cast<uint64_t>(seed));
        Executor ex(reg, abstract_rng);
        auto q = entangling_layout().qubits;
        if (opts.model == MeasurementModel::Asym) {
            run_entangling_asym(ex, q[0], q[1], q[2], opts);
        } else {
            run_entangling_exact(ex, q[0], q[1], q[2]);
        }
        Rng schedule_rng(static_cast<uint64_t>(seed));
        ProtocolRun run = simulate_schedule(sched, reg, schedule_rng);

        const auto &ta = ex.trace();
        if (ta.outcomes != run.trace.outcomes || ta.n_measurements != run.trace.n_measurements) {
            return 1.0;
        }
        LogicalLayout out_layout{{sched.output_qubits[0], sched.output_qubits[2]}};
        StateVector a = ta.frame.matrix() * decode_logical(ex.state(), entangling_data_layout()).amplitudes;
        StateVector b = run.trace.frame.matrix() * decode_logical(run.state, out_layout).amplitudes;
        worst = std::max(worst, 1 - state_fidelity(a, b));
    }
    return worst;
}

nlohmann::json schedule_to_json(const Schedule &s) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto &step : s.steps) {
        steps.push_back(step_json(step));
    }
    nlohmann::json outq = nlohmann::json::array();
    for (auto p : s.output_qubits) {
        outq.push_back({p.a, p.b});
    }
    return {
        {"protocol", s.protocol.str()},
        {"asym_model", s.protocol.asym_mode == AsymMode::ProjectiveRenormalized ? "renormalized" : "reset"},
        {"final_step", s.protocol.final_step == FinalStep::Measure ? "measure" : "reinit"},
        {"layout", s.layout},
        {"output_qubits", outq},
        {"steps", steps},
    };
}

Schedule schedule_from_json(const nlohmann::json &j) {
    Schedule s;
    s.protocol = ProtocolSpec::parse(j.at("protocol").get<std::string>());
    auto model = j.value("asym_model", std::string("renormalized"));
    if (model != "renormalized" && model != "reset") {
        throw std::invalid_argument("asym_model must be renormalized or reset");
    }
    s.protocol.asym_mode = model == "reset" ? AsymMode::ResetChannel : AsymMode::ProjectiveRenormalized;
    auto fin = j.value("final_step", std::string("measure"));
    if (fin != "measure" && fin != "reinit") {
        throw std::invalid_argument("final_step must be measure or reinit");
    }
    s.protocol.final_step = fin == "reinit" ? FinalStep::Reinit : FinalStep::Measure;
    s.layout = j.at("layout").get<std::string>();
    for (const auto &p : j.value("output_qubits", nlohmann::json::array())) {
        s.output_qubits.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    }
    for (const auto &step : j.at("steps")) {
        s.steps.push_back(step_from(step));
    }
    return s;
}

}  // namespace spinmbqc
