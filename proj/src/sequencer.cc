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

#include "spinmbqc/sequencer.h"

#include <array>
#include <cctype>
#include <cmath>
#include <functional>

namespace spinmbqc {

namespace {

constexpr std::array<PauliAxis, 3> kXYZ = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
constexpr std::array<PauliAxis, 4> kIXYZ = {PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

MeasurementStep parse_step(std::string_view token) {
    std::vector<PauliAxis> axes;
    std::optional<size_t> pw_qubit;
    double theta = 0;
    for (size_t k = 0; k < token.size(); k++) {
        char c = token[k];
        if (c == 'W') {
            if (pw_qubit.has_value()) {
                throw SequenceError("at most one W site per step: '" + std::string(token) + "'");
            }
            auto close = token.find(']', k);
            if (k + 1 >= token.size() || token[k + 1] != '[' || close == std::string_view::npos) {
                throw SequenceError("W must be followed by [theta]: '" + std::string(token) + "'");
            }
            std::string number(token.substr(k + 2, close - k - 2));
            try {
                size_t used = 0;
                theta = std::stod(number, &used);
                if (used != number.size()) {
                    throw std::invalid_argument(number);
                }
            } catch (const std::exception &) {
                throw SequenceError("bad W angle: '" + number + "'");
            }
            pw_qubit = axes.size();
            axes.push_back(PauliAxis::X);
            k = close;
            continue;
        }
        try {
            axes.push_back(axis_from_char(c));
        } catch (const std::invalid_argument &e) {
            throw SequenceError(e.what());
        }
    }
    if (axes.empty()) {
        throw SequenceError("empty measurement step");
    }
    MeasurementStep step{PauliString(std::move(axes))};
    step.pw_qubit = pw_qubit;
    step.pw_theta = theta;
    if (step.pauli.is_identity()) {
        throw SequenceError("all-I step is not a measurement");
    }
    return step;
}

// Single-qubit observable of `step` restricted to qubit q.
DenseOperator local_observable(const MeasurementStep &step, size_t q) {
    if (step.pw_qubit == q) {
        return pw_observable(step.pw_theta);
    }
    return pauli_matrix(step.pauli[q]);
}

StateVector eigenvector(const DenseOperator &obs, int s) {
    DenseOperator p = 0.5 * (DenseOperator::Identity(2, 2) + (s == 0 ? 1.0 : -1.0) * obs);
    Eigen::Index col = p.col(0).norm() >= p.col(1).norm() ? 0 : 1;
    return p.col(col).normalized();
}

size_t insert_bit(size_t data_index, size_t bit, size_t pos, size_t n) {
    // Qubit 0 is the most significant bit; pos counts from the left.
    size_t shift = n - 1 - pos;
    size_t high = data_index >> shift;
    size_t low = data_index & ((size_t{1} << shift) - 1);
    return (((high << 1) | bit) << shift) | low;
}

DenseOperator contract_ancilla(
    const DenseOperator &pi, size_t ancilla, size_t n, const StateVector &fin, const StateVector &init) {
    size_t d = size_t{1} << (n - 1);
    DenseOperator u = DenseOperator::Zero(d, d);
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            cplx acc = 0;
            for (size_t a = 0; a < 2; a++) {
                for (size_t b = 0; b < 2; b++) {
                    acc += std::conj(fin(a)) * pi(insert_bit(r, a, ancilla, n), insert_bit(c, b, ancilla, n)) * init(b);
                }
            }
            u(r, c) = acc;
        }
    }
    return u;
}

void attach_label(DerivedGate &g) {
    if (g.status == GateStatus::Annihilating) {
        g.label = "annihilating";
        return;
    }
    if (g.status == GateStatus::NonUnitary) {
        g.label = "non-unitary";
        return;
    }
    if (g.U.rows() == 2) {
        auto c = classify_clifford(g.U);
        g.label = c.name;
        if (c.name != "non-Clifford") {
            g.label_pauli = c.pauli;
        }
    } else if (g.U.rows() == 4) {
        auto c = classify_two_qubit(g.U);
        g.label = c.name;
        if (c.name != "unnamed") {
            g.label_pauli = c.pauli;
        }
    } else {
        g.label = "unnamed";
    }
}

void normalize_and_flag(DerivedGate &g) {
    double scale2 = (g.U.adjoint() * g.U).trace().real() / static_cast<double>(g.U.rows());
    if (g.U.cwiseAbs().maxCoeff() < 1e-12 || scale2 <= 0) {
        g.status = GateStatus::Annihilating;
        return;
    }
    g.U /= std::sqrt(scale2);
    g.status = is_unitary(g.U, 1e-10) ? GateStatus::Unitary : GateStatus::NonUnitary;
}

void attach_correction(DerivedGate &g, const DerivedGate &zero) {
    if (g.unitary() && zero.unitary()) {
        g.correction = identify_pauli(g.U * zero.U.adjoint());
    }
}

struct Term {
    cplx c;
    PauliAxis data;
    PauliAxis anc;
};

Term multiply(const Term &x, const Term &y) {
    auto pd = pauli_product(x.data, y.data);
    auto pa = pauli_product(x.anc, y.anc);
    return {x.c * y.c * (pd.phase + pa.phase).value(), pd.axis, pa.axis};
}

// Tr_anc[Pi (I x sigma_kappa)] as coefficients (of I, of sigma_nu), without the 1/4 prefactor.
std::pair<cplx, cplx> symbolic_trace(
    PauliAxis mu, PauliAxis nu, PauliAxis xi, PauliAxis zeta, std::span<const int> s, PauliAxis kappa) {
    auto sign = [&](size_t k) { return s[k] == 0 ? 1.0 : -1.0; };
    std::array<std::array<Term, 2>, 3> factors = {{
        {Term{1, PauliAxis::I, PauliAxis::I}, Term{sign(0), PauliAxis::I, mu}},
        {Term{1, PauliAxis::I, PauliAxis::I}, Term{sign(1), nu, xi}},
        {Term{1, PauliAxis::I, PauliAxis::I}, Term{sign(2), PauliAxis::I, zeta}},
    }};
    cplx c_id = 0;
    cplx c_nu = 0;
    for (int mask = 0; mask < 8; mask++) {
        Term t = factors[2][(mask >> 2) & 1];
        t = multiply(t, factors[1][(mask >> 1) & 1]);
        t = multiply(t, factors[0][mask & 1]);
        t = multiply(t, Term{1, PauliAxis::I, kappa});
        if (t.anc != PauliAxis::I) {
            continue;
        }
        if (t.data == PauliAxis::I) {
            c_id += t.c;
        } else {
            c_nu += t.c;
        }
    }
    return {c_id, c_nu};
}

DerivedGate closed_form_impl(
    PauliAxis mu, PauliAxis nu, PauliAxis xi, PauliAxis zeta, std::span<const int> s) {
    for (auto a : {mu, nu, xi, zeta}) {
        if (a == PauliAxis::I) {
            throw std::invalid_argument("closed form needs mu, nu, xi, zeta in {X,Y,Z}");
        }
    }
    if (s.size() != 3) {
        throw std::invalid_argument("closed form needs three outcomes");
    }
    for (int b : s) {
        require_bit(b, "derive_single_qubit_closed_form");
    }
    DerivedGate g;
    auto [alpha, beta] = symbolic_trace(mu, nu, xi, zeta, s, PauliAxis::I);
    g.alpha = alpha.real();
    g.beta = beta;
    cplx c_id = alpha;
    cplx c_nu = beta;
    if (zeta == mu && s[0] != s[2]) {
        // Initial and final ancilla supports are orthogonal, so the plain trace vanishes.
        PauliAxis kappa = mu == PauliAxis::X ? PauliAxis::Y : PauliAxis::X;
        std::tie(c_id, c_nu) = symbolic_trace(mu, nu, xi, zeta, s, kappa);
    }
    double norm2 = std::norm(c_id) + std::norm(c_nu);
    if (norm2 < 1e-24) {
        g.U = DenseOperator::Zero(2, 2);
        g.status = GateStatus::Annihilating;
        return g;
    }
    g.U = (c_id * DenseOperator::Identity(2, 2) + c_nu * pauli_matrix(nu)) / std::sqrt(norm2);
    bool unitary = std::abs((c_id * std::conj(c_nu)).real()) <= 1e-12 * norm2;
    g.status = unitary ? GateStatus::Unitary : GateStatus::NonUnitary;
    return g;
}

DerivedGate oracle_impl(const MeasurementSequence &seq, std::span<const int> s) {
    if (s.size() != seq.steps.size()) {
        throw std::invalid_argument("outcome vector length must equal the number of steps");
    }
    for (int b : s) {
        require_bit(b, "derive_sequence_oracle");
    }
    size_t n = seq.num_qubits();
    if (n < 2 || n > 3) {
        throw std::invalid_argument("oracle supports one or two data qubits plus one ancilla");
    }
    DenseOperator pi = DenseOperator::Identity(size_t{1} << n, size_t{1} << n);
    for (size_t k = 0; k < seq.steps.size(); k++) {
        pi = seq.steps[k].projector(s[k]) * pi;
    }
    StateVector init = eigenvector(local_observable(seq.steps.front(), seq.ancilla), s.front());
    DerivedGate g;
    size_t last = seq.steps.size() - 1;
    if (seq.acts_only_on_ancilla(last) && last > 0) {
        StateVector fin = eigenvector(local_observable(seq.steps.back(), seq.ancilla), s.back());
        g.U = contract_ancilla(pi, seq.ancilla, n, fin, init);
        normalize_and_flag(g);
        return g;
    }
    // Ancilla never disentangled: one Kraus operator per ancilla basis state.
    DenseOperator best;
    int nonzero = 0;
    for (size_t b = 0; b < 2; b++) {
        StateVector fin = StateVector::Zero(2);
        fin(b) = 1;
        DenseOperator k = contract_ancilla(pi, seq.ancilla, n, fin, init);
        if (k.cwiseAbs().maxCoeff() >= 1e-12) {
            nonzero++;
            if (best.size() == 0 || k.norm() > best.norm()) {
                best = k;
            }
        }
    }
    if (nonzero == 0) {
        g.U = DenseOperator::Zero(size_t{1} << (n - 1), size_t{1} << (n - 1));
        g.status = GateStatus::Annihilating;
        return g;
    }
    g.U = best;
    normalize_and_flag(g);
    if (nonzero > 1 && g.status == GateStatus::Unitary) {
        g.status = GateStatus::NonUnitary;
    }
    return g;
}

DenseOperator hadamard() {
    DenseOperator h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

DenseOperator diag2(cplx a, cplx b) {
    DenseOperator m = DenseOperator::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

const std::vector<DenseOperator> &single_qubit_cliffords() {
    static const std::vector<DenseOperator> group = [] {
        std::vector<DenseOperator> out{DenseOperator::Identity(2, 2)};
        std::vector<DenseOperator> gens{hadamard(), diag2(1, cplx(0, 1))};
        for (size_t k = 0; k < out.size(); k++) {
            for (const auto &g : gens) {
                DenseOperator m = g * out[k];
                bool seen = false;
                for (const auto &o : out) {
                    if (phase_aligned_distance(o, m) < 1e-9) {
                        seen = true;
                        break;
                    }
                }
                if (!seen) {
                    out.push_back(m);
                }
            }
        }
        return out;
    }();
    return group;
}

}  // namespace

const char *role_name(StepRole r) {
    switch (r) {
        case StepRole::AncillaInit:
            return "ancilla-init";
        case StepRole::Joint:
            return "joint";
        case StepRole::AncillaDisentangle:
            return "ancilla-disentangle";
    }
    return "?";
}

const char *status_name(GateStatus s) {
    switch (s) {
        case GateStatus::Unitary:
            return "unitary";
        case GateStatus::NonUnitary:
            return "non-unitary";
        case GateStatus::Annihilating:
            return "annihilating";
    }
    return "?";
}

DenseOperator MeasurementStep::observable() const {
    DenseOperator out;
    for (size_t q = 0; q < size(); q++) {
        DenseOperator m = local_observable(*this, q);
        out = q == 0 ? m : kron(out, m);
    }
    return out;
}

DenseOperator MeasurementStep::projector(int s) const {
    require_bit(s, "MeasurementStep::projector");
    DenseOperator obs = observable();
    return 0.5 * (DenseOperator::Identity(obs.rows(), obs.cols()) + (s == 0 ? 1.0 : -1.0) * obs);
}

std::string MeasurementStep::str() const {
    std::string out;
    for (size_t q = 0; q < size(); q++) {
        if (pw_qubit == q) {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "W[%.17g]", pw_theta);
            out += buf;
        } else {
            out.push_back(axis_char(pauli[q]));
        }
    }
    return out;
}

bool steps_commute(const MeasurementStep &a, const MeasurementStep &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("steps_commute: length mismatch");
    }
    if (!a.pw_qubit && !b.pw_qubit) {
        return strings_commute(a.pauli, b.pauli);
    }
    DenseOperator oa = a.observable();
    DenseOperator ob = b.observable();
    return (oa * ob - ob * oa).cwiseAbs().maxCoeff() <= 1e-12;
}

MeasurementSequence MeasurementSequence::parse(std::string_view text) {
    MeasurementSequence seq;
    size_t pos = 0;
    while (true) {
        size_t arrow = text.find("->", pos);
        std::string_view token = trim(text.substr(pos, arrow == std::string_view::npos ? text.npos : arrow - pos));
        if (token.empty()) {
            throw SequenceError("empty measurement step in '" + std::string(text) + "'");
        }
        seq.steps.push_back(parse_step(token));
        if (arrow == std::string_view::npos) {
            break;
        }
        pos = arrow + 2;
    }
    if (seq.steps.size() < 2) {
        throw SequenceError("a sequence needs at least two steps");
    }
    for (const auto &step : seq.steps) {
        if (step.size() != seq.steps.front().size()) {
            throw SequenceError("all steps must have the same length");
        }
    }
    auto first = seq.steps.front().support();
    if (first.size() != 1) {
        throw SequenceError("the first step must act on the ancilla alone");
    }
    seq.ancilla = first.front();
    if (seq.num_qubits() < 2) {
        throw SequenceError("a sequence needs at least one data qubit");
    }
    return seq;
}

MeasurementSequence MeasurementSequence::single_qubit(PauliAxis mu, PauliAxis nu, PauliAxis xi, PauliAxis zeta) {
    MeasurementSequence seq;
    seq.ancilla = 1;
    seq.steps.emplace_back(PauliString({PauliAxis::I, mu}));
    seq.steps.emplace_back(PauliString({nu, xi}));
    seq.steps.emplace_back(PauliString({PauliAxis::I, zeta}));
    return seq;
}

bool MeasurementSequence::acts_only_on_ancilla(size_t k) const {
    auto sup = steps[k].support();
    return sup.size() == 1 && sup.front() == ancilla;
}

StepRole MeasurementSequence::role(size_t k) const {
    if (k == 0) {
        return StepRole::AncillaInit;
    }
    if (k + 1 == steps.size() && acts_only_on_ancilla(k)) {
        return StepRole::AncillaDisentangle;
    }
    return StepRole::Joint;
}

std::string MeasurementSequence::str() const {
    std::string out;
    for (size_t k = 0; k < steps.size(); k++) {
        if (k) {
            out += " -> ";
        }
        out += steps[k].str();
    }
    return out;
}

std::vector<int> parse_outcomes(std::string_view bits) {
    std::vector<int> out;
    for (char c : trim(bits)) {
        if (c != '0' && c != '1') {
            throw SequenceError("outcomes must be a bitstring, got '" + std::string(bits) + "'");
        }
        out.push_back(c - '0');
    }
    return out;
}

std::vector<Violation> validate_sequence(const MeasurementSequence &seq) {
    if (seq.steps.size() < 2 || !seq.acts_only_on_ancilla(0)) {
        throw SequenceError("malformed sequence: the first step must initialise the ancilla");
    }
    for (size_t k = 1; k < seq.steps.size(); k++) {
        auto sup = seq.steps[k].support();
        bool touches_ancilla = std::find(sup.begin(), sup.end(), seq.ancilla) != sup.end();
        if (!touches_ancilla) {
            throw SequenceError("malformed sequence: step " + std::to_string(k + 1) + " does not involve the ancilla");
        }
        if (k + 1 < seq.steps.size() && seq.acts_only_on_ancilla(k)) {
            throw SequenceError(
                "malformed sequence: ancilla-only step " + std::to_string(k + 1) + " before the end");
        }
    }
    std::vector<Violation> out;
    for (size_t k = 1; k < seq.steps.size(); k++) {
        if (steps_commute(seq.steps[k - 1], seq.steps[k])) {
            out.push_back(
                {k + 1, seq.steps[k - 1].str() + " and " + seq.steps[k].str() + " commute; data would be lost"});
        }
    }
    return out;
}

DerivedGate derive_single_qubit_closed_form(
    PauliAxis mu, PauliAxis nu, PauliAxis xi, PauliAxis zeta, std::span<const int> outcomes) {
    DerivedGate g = closed_form_impl(mu, nu, xi, zeta, outcomes);
    std::array<int, 3> zeros{0, 0, 0};
    attach_correction(g, closed_form_impl(mu, nu, xi, zeta, zeros));
    attach_label(g);
    return g;
}

DerivedGate derive_sequence_oracle(const MeasurementSequence &seq, std::span<const int> outcomes) {
    DerivedGate g = oracle_impl(seq, outcomes);
    std::vector<int> zeros(seq.steps.size(), 0);
    attach_correction(g, oracle_impl(seq, zeros));
    attach_label(g);
    return g;
}

const std::vector<std::pair<std::string, DenseOperator>> &paper_clifford_set() {
    static const std::vector<std::pair<std::string, DenseOperator>> set = [] {
        DenseOperator h = hadamard();
        DenseOperator x = pauli_matrix(PauliAxis::X);
        DenseOperator s = diag2(1, cplx(0, 1));
        DenseOperator sdg = diag2(1, cplx(0, -1));
        return std::vector<std::pair<std::string, DenseOperator>>{
            {"I", DenseOperator::Identity(2, 2)},
            {"S", s},
            {"S†", sdg},
            {"XH", x * h},
            {"HX", h * x},
            {"HSH", h * s * h},
            {"HS†H", h * sdg * h},
        };
    }();
    return set;
}

CliffordLabel classify_clifford(const DenseOperator &u) {
    if (u.rows() != 2 || u.cols() != 2) {
        throw std::invalid_argument("classify_clifford: expected a 2x2 operator");
    }
    if (!is_unitary(u, 1e-9)) {
        throw std::invalid_argument("classify_clifford: operator is not unitary");
    }
    for (auto p : kIXYZ) {
        DenseOperator pm = pauli_matrix(p);
        for (const auto &[name, c] : paper_clifford_set()) {
            if (phase_aligned_distance(u, pm * c) <= 1e-9) {
                return {name, PauliString({p}), true};
            }
        }
    }
    for (const auto &c : single_qubit_cliffords()) {
        if (phase_aligned_distance(u, c) <= 1e-9) {
            return {"other-Clifford", PauliString({PauliAxis::I}), false};
        }
    }
    return {"non-Clifford", PauliString({PauliAxis::I}), false};
}

CliffordLabel classify_two_qubit(const DenseOperator &u) {
    if (u.rows() != 4 || u.cols() != 4) {
        throw std::invalid_argument("classify_two_qubit: expected a 4x4 operator");
    }
    auto perm = [](std::array<int, 4> p) {
        DenseOperator m = DenseOperator::Zero(4, 4);
        for (int c = 0; c < 4; c++) {
            m(p[c], c) = 1;
        }
        return m;
    };
    DenseOperator cz = DenseOperator::Identity(4, 4);
    cz(3, 3) = -1;
    std::vector<std::pair<std::string, DenseOperator>> named = {
        {"II", DenseOperator::Identity(4, 4)},
        {"CNOT", perm({0, 1, 3, 2})},
        {"CNOT10", perm({0, 3, 2, 1})},
        {"CZ", cz},
        {"SWAP", perm({0, 2, 1, 3})},
    };
    for (const auto &[name, c] : named) {
        for (auto a : kIXYZ) {
            for (auto b : kIXYZ) {
                PauliString p({a, b});
                if (phase_aligned_distance(u, to_matrix(p) * c) <= 1e-9) {
                    return {name, p, false};
                }
            }
        }
    }
    return {"unnamed", PauliString::identity(2), false};
}

std::optional<PauliString> identify_pauli(const DenseOperator &u, double tol) {
    size_t n = 0;
    while ((Eigen::Index{1} << n) < u.rows()) {
        n++;
    }
    if ((Eigen::Index{1} << n) != u.rows() || u.rows() != u.cols()) {
        return std::nullopt;
    }
    std::vector<PauliAxis> axes(n, PauliAxis::I);
    size_t total = size_t{1} << (2 * n);
    for (size_t code = 0; code < total; code++) {
        for (size_t q = 0; q < n; q++) {
            axes[q] = static_cast<PauliAxis>((code >> (2 * (n - 1 - q))) & 3);
        }
        PauliString p(axes);
        if (phase_aligned_distance(u, to_matrix(p)) <= tol) {
            return p;
        }
    }
    return std::nullopt;
}

std::set<std::string> enumerate_valid_single_qubit_gates() {
    std::set<std::string> labels;
    for (auto mu : kXYZ) {
        for (auto nu : kXYZ) {
            for (auto xi : kXYZ) {
                for (auto zeta : kXYZ) {
                    auto seq = MeasurementSequence::single_qubit(mu, nu, xi, zeta);
                    for (int bits = 0; bits < 8; bits++) {
                        std::array<int, 3> s{(bits >> 2) & 1, (bits >> 1) & 1, bits & 1};
                        auto g = derive_sequence_oracle(seq, s);
                        if (g.unitary()) {
                            labels.insert(g.label);
                        }
                    }
                }
            }
        }
    }
    return labels;
}

}  // namespace spinmbqc
