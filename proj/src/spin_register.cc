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

#include "spinmbqc/spin_register.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinmbqc {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

size_t dot_mask(int n_dots, int dot) {
    return size_t{1} << (n_dots - 1 - dot);
}

template <typename F>
void for_each_pair_block(int n_dots, DotPair pair, F &&f) {
    size_t ma = dot_mask(n_dots, pair.a);
    size_t mb = dot_mask(n_dots, pair.b);
    size_t dim = size_t{1} << n_dots;
    for (size_t base = 0; base < dim; base++) {
        if (base & (ma | mb)) {
            continue;
        }
        std::array<size_t, 4> idx = {base, base | mb, base | ma, base | ma | mb};
        f(idx);
    }
}

PairOperator diag4(double a, double b, double c, double d) {
    PairOperator m = PairOperator::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    m(3, 3) = d;
    return m;
}

PairOperator singlet_projector() {
    Eigen::Vector4cd s = singlet_vector();
    return s * s.adjoint();
}

// Projectors (P0, P1) before any reset.
std::pair<PairOperator, PairOperator> projectors(PairMeasurement kind) {
    PairOperator aligned = diag4(1, 0, 0, 1);
    PairOperator anti = diag4(0, 1, 1, 0);
    PairOperator ps = singlet_projector();
    switch (kind) {
        case PairMeasurement::ParityExact:
        case PairMeasurement::ParityAsymReset:
            return {aligned, anti};
        case PairMeasurement::SingletTriplet:
            return {ps, PairOperator::Identity() - ps};
        case PairMeasurement::ParityAsym:
            return {aligned, ps};
    }
    throw std::logic_error("unknown measurement kind");
}

double weight_after(const SpinRegister &reg, DotPair pair, const PairOperator &op) {
    double w = 0;
    const auto &v = reg.amplitudes();
    for_each_pair_block(reg.num_dots(), pair, [&](const std::array<size_t, 4> &idx) {
        Eigen::Vector4cd x(v(idx[0]), v(idx[1]), v(idx[2]), v(idx[3]));
        w += (op * x).squaredNorm();
    });
    return w;
}

SpinRegister apply_unnormalized(const SpinRegister &reg, DotPair pair, const PairOperator &op) {
    StateVector out = reg.amplitudes();
    for_each_pair_block(reg.num_dots(), pair, [&](const std::array<size_t, 4> &idx) {
        Eigen::Vector4cd x(out(idx[0]), out(idx[1]), out(idx[2]), out(idx[3]));
        Eigen::Vector4cd y = op * x;
        for (int k = 0; k < 4; k++) {
            out(idx[k]) = y(k);
        }
    });
    SpinRegister r(reg.num_dots(), StateVector::Zero(out.size()));
    r.mutable_amplitudes() = out;
    return r;
}

SpinRegister apply_and_normalize(const SpinRegister &reg, DotPair pair, const PairOperator &op, const char *what) {
    SpinRegister r = apply_unnormalized(reg, pair, op);
    if (r.norm() < 1e-14) {
        throw std::runtime_error(std::string(what) + ": zero-probability branch");
    }
    r.renormalize();
    return r;
}

}  // namespace

SpinRegister::SpinRegister(int n_dots, StateVector amplitudes) : n_dots_(n_dots), amps_(std::move(amplitudes)) {
    if (n_dots < 1 || n_dots > 12) {
        throw std::invalid_argument("SpinRegister: n_dots must be in [1, 12]");
    }
    if (static_cast<size_t>(amps_.size()) != (size_t{1} << n_dots)) {
        throw std::invalid_argument("SpinRegister: amplitude count must be 2^n_dots");
    }
}

SpinRegister SpinRegister::all_up(int n_dots) {
    StateVector v = StateVector::Zero(Eigen::Index{1} << n_dots);
    v(0) = 1;
    return SpinRegister(n_dots, v);
}

void SpinRegister::renormalize() {
    double n = amps_.norm();
    if (n < 1e-300) {
        throw std::runtime_error("SpinRegister: cannot normalize a zero vector");
    }
    amps_ /= n;
}

void SpinRegister::check_pair(DotPair p) const {
    if (p.a < 0 || p.b < 0 || p.a >= n_dots_ || p.b >= n_dots_ || p.a == p.b) {
        throw std::invalid_argument(
            "invalid dot pair (" + std::to_string(p.a) + "," + std::to_string(p.b) + ") for " +
            std::to_string(n_dots_) + " dots");
    }
}

Eigen::Vector4cd singlet_vector() {
    return Eigen::Vector4cd(0, kInvSqrt2, -kInvSqrt2, 0);
}

Eigen::Vector4cd t0_vector() {
    return Eigen::Vector4cd(0, kInvSqrt2, kInvSqrt2, 0);
}

Eigen::Vector4cd pair_vector(PairInit init) {
    Eigen::Vector4cd s = singlet_vector();
    Eigen::Vector4cd t = t0_vector();
    switch (init.kind) {
        case PairState::Singlet:
            return s;
        case PairState::Plus:
            return (s + t) * kInvSqrt2;
        case PairState::PlusI:
            return (s + cplx(0, 1) * t) * kInvSqrt2;
        case PairState::Phase:
            return (s + std::polar(1.0, init.phi) * t) * kInvSqrt2;
    }
    throw std::logic_error("unknown pair state");
}

PairOperator exchange_operator(double theta) {
    return PairOperator::Identity() + (std::polar(1.0, theta) - 1.0) * singlet_projector();
}

SpinRegister init_register(int n_dots, const std::vector<std::pair<DotPair, PairInit>> &pairs) {
    SpinRegister reg = SpinRegister::all_up(n_dots);
    std::vector<bool> used(n_dots, false);
    for (const auto &[pair, init] : pairs) {
        reg.check_pair(pair);
        if (used[pair.a] || used[pair.b]) {
            throw std::invalid_argument("init_register: overlapping pairs");
        }
        used[pair.a] = used[pair.b] = true;
        // Pair currently up-up; map that basis state to the requested pair state.
        PairOperator op = PairOperator::Zero();
        op.col(0) = pair_vector(init);
        reg = apply_unnormalized(reg, pair, op);
    }
    return reg;
}

SpinRegister init_register(int n_dots, std::span<const PairInit> consecutive) {
    if (n_dots % 2 != 0 || consecutive.size() != static_cast<size_t>(n_dots / 2)) {
        throw std::invalid_argument("init_register: need an even dot count and one spec per pair");
    }
    std::vector<std::pair<DotPair, PairInit>> pairs;
    for (size_t k = 0; k < consecutive.size(); k++) {
        pairs.push_back({DotPair{static_cast<int>(2 * k), static_cast<int>(2 * k + 1)}, consecutive[k]});
    }
    return init_register(n_dots, pairs);
}

SpinRegister apply_pair_operator(const SpinRegister &reg, DotPair pair, const PairOperator &op) {
    reg.check_pair(pair);
    return apply_unnormalized(reg, pair, op);
}

SpinRegister exchange_pulse(const SpinRegister &reg, DotPair pair, double theta) {
    return apply_pair_operator(reg, pair, exchange_operator(theta));
}

PairMeasurement asym_measurement(AsymMode mode) {
    return mode == AsymMode::ProjectiveRenormalized ? PairMeasurement::ParityAsym : PairMeasurement::ParityAsymReset;
}

OutcomeWeights outcome_weights(const SpinRegister &reg, DotPair pair, PairMeasurement kind, double deflection) {
    reg.check_pair(pair);
    auto [p0, p1] = projectors(kind);
    double a = weight_after(reg, pair, p0);
    double b = weight_after(reg, pair, p1);
    double e2 = deflection * deflection;
    return {a + e2 * b, b + e2 * a};
}

SpinRegister apply_outcome(
    const SpinRegister &reg, DotPair pair, PairMeasurement kind, int s, Rng *rng, double deflection) {
    reg.check_pair(pair);
    require_bit(s, "apply_outcome");
    auto [p0, p1] = projectors(kind);
    PairOperator k = s == 0 ? PairOperator(p0 + deflection * p1) : PairOperator(p1 + deflection * p0);
    SpinRegister out = apply_and_normalize(reg, pair, k, "apply_outcome");
    if (kind == PairMeasurement::ParityAsymReset && s == 1) {
        if (rng == nullptr) {
            throw std::invalid_argument("apply_outcome: reset channel needs an rng");
        }
        out = reinit_singlet(out, pair, *rng);
    }
    return out;
}

MeasureResult measure_pair(const SpinRegister &reg, DotPair pair, PairMeasurement kind, Rng &rng, double deflection) {
    OutcomeWeights w = outcome_weights(reg, pair, kind, deflection);
    if (w.w0 + w.w1 < 1e-14) {
        throw std::runtime_error("degenerate support: both measurement records have zero weight");
    }
    double u = rng.uniform();
    int s = u < w.p0() ? 0 : 1;
    double p = s == 0 ? w.p0() : w.p1();
    return {s, apply_outcome(reg, pair, kind, s, &rng, deflection), p};
}

MeasureResult measure_parity_exact(const SpinRegister &reg, DotPair pair, Rng &rng) {
    return measure_pair(reg, pair, PairMeasurement::ParityExact, rng);
}

MeasureResult measure_st(const SpinRegister &reg, DotPair pair, Rng &rng) {
    return measure_pair(reg, pair, PairMeasurement::SingletTriplet, rng);
}

MeasureResult measure_parity_asym(const SpinRegister &reg, DotPair pair, Rng &rng, AsymMode mode) {
    return measure_pair(reg, pair, asym_measurement(mode), rng);
}

SpinRegister reinit_singlet(const SpinRegister &reg, DotPair pair, Rng &rng) {
    reg.check_pair(pair);
    std::array<Eigen::Vector4cd, 4> basis = {
        singlet_vector(), t0_vector(), Eigen::Vector4cd(1, 0, 0, 0), Eigen::Vector4cd(0, 0, 0, 1)};
    std::array<double, 4> w{};
    double total = 0;
    for (int k = 0; k < 4; k++) {
        w[k] = weight_after(reg, pair, basis[k] * basis[k].adjoint());
        total += w[k];
    }
    double u = rng.uniform() * total;
    int pick = 3;
    for (int k = 0; k < 4; k++) {
        if (w[k] > 0 && u < w[k]) {
            pick = k;
            break;
        }
        u -= w[k];
    }
    while (w[pick] <= 0) {
        pick--;
    }
    PairOperator op = singlet_vector() * basis[pick].adjoint();
    return apply_and_normalize(reg, pair, op, "reinit_singlet");
}

SpinRegister lock_singlet(const SpinRegister &reg, DotPair pair) {
    reg.check_pair(pair);
    return apply_and_normalize(reg, pair, singlet_projector(), "lock_singlet");
}

void LogicalLayout::check(int n_dots) const {
    std::vector<bool> used(n_dots, false);
    for (auto p : qubits) {
        if (p.a < 0 || p.b < 0 || p.a >= n_dots || p.b >= n_dots || p.a == p.b) {
            throw std::invalid_argument("LogicalLayout: invalid dot pair");
        }
        if (used[p.a] || used[p.b]) {
            throw std::invalid_argument("LogicalLayout: dots shared between qubits");
        }
        used[p.a] = used[p.b] = true;
    }
}

namespace {

std::vector<int> environment_dots(int n_dots, const LogicalLayout &layout) {
    std::vector<bool> used(n_dots, false);
    for (auto p : layout.qubits) {
        used[p.a] = used[p.b] = true;
    }
    std::vector<int> env;
    for (int d = 0; d < n_dots; d++) {
        if (!used[d]) {
            env.push_back(d);
        }
    }
    return env;
}

}  // namespace

double leakage_weight(const SpinRegister &reg, const LogicalLayout &layout) {
    layout.check(reg.num_dots());
    int n = reg.num_dots();
    double leak = 0;
    for (size_t i = 0; i < reg.dim(); i++) {
        for (auto p : layout.qubits) {
            bool ba = i & dot_mask(n, p.a);
            bool bb = i & dot_mask(n, p.b);
            if (ba == bb) {
                leak += std::norm(reg.amplitudes()(i));
                break;
            }
        }
    }
    return leak;
}

LogicalState decode_logical(const SpinRegister &reg, const LogicalLayout &layout) {
    layout.check(reg.num_dots());
    int n = reg.num_dots();
    size_t k = layout.qubits.size();
    auto env = environment_dots(n, layout);
    size_t dl = size_t{1} << k;
    size_t de = size_t{1} << env.size();
    LogicalState out;
    out.block = DenseOperator::Zero(dl, de);
    for (size_t i = 0; i < reg.dim(); i++) {
        cplx amp = reg.amplitudes()(i);
        if (amp == cplx(0)) {
            continue;
        }
        bool leaked = false;
        // Sign of the singlet overlap per qubit: +1 for up-down, -1 for down-up.
        std::vector<double> singlet_sign(k);
        for (size_t q = 0; q < k; q++) {
            bool ba = i & dot_mask(n, layout.qubits[q].a);
            bool bb = i & dot_mask(n, layout.qubits[q].b);
            if (ba == bb) {
                leaked = true;
                break;
            }
            singlet_sign[q] = ba ? -1.0 : 1.0;
        }
        if (leaked) {
            continue;
        }
        size_t e = 0;
        for (int d : env) {
            e = (e << 1) | ((i & dot_mask(n, d)) ? 1 : 0);
        }
        for (size_t l = 0; l < dl; l++) {
            double c = 1;
            for (size_t q = 0; q < k; q++) {
                bool t0 = (l >> (k - 1 - q)) & 1;
                c *= kInvSqrt2 * (t0 ? 1.0 : singlet_sign[q]);
            }
            out.block(l, e) += c * amp;
        }
    }
    out.leakage = leakage_weight(reg, layout);
    double total = out.block.squaredNorm();
    if (total < 1e-24) {
        out.fully_leaked = true;
        out.leakage = 1.0;
        out.amplitudes = StateVector::Zero(dl);
        return out;
    }
    Eigen::Index best = 0;
    out.block.colwise().squaredNorm().maxCoeff(&best);
    out.amplitudes = out.block.col(best).normalized();
    Eigen::JacobiSVD<DenseOperator> svd(out.block);
    auto sv = svd.singularValues();
    out.environment_entanglement = std::max(0.0, 1.0 - sv(0) * sv(0) / total);
    return out;
}

SpinRegister encode_logical(int n_dots, const LogicalLayout &layout, const StateVector &logical) {
    layout.check(n_dots);
    size_t k = layout.qubits.size();
    if (static_cast<size_t>(logical.size()) != (size_t{1} << k)) {
        throw std::invalid_argument("encode_logical: amplitude count must be 2^qubits");
    }
    StateVector out = StateVector::Zero(Eigen::Index{1} << n_dots);
    for (size_t l = 0; l < (size_t{1} << k); l++) {
        if (logical(l) == cplx(0)) {
            continue;
        }
        // Expand the product of S/T0 pair states over the four up-down patterns.
        for (size_t pattern = 0; pattern < (size_t{1} << k); pattern++) {
            size_t idx = 0;
            double c = 1;
            for (size_t q = 0; q < k; q++) {
                bool t0 = (l >> (k - 1 - q)) & 1;
                bool down_up = (pattern >> (k - 1 - q)) & 1;
                c *= kInvSqrt2 * ((down_up && !t0) ? -1.0 : 1.0);
                idx |= down_up ? dot_mask(n_dots, layout.qubits[q].a) : dot_mask(n_dots, layout.qubits[q].b);
            }
            out(idx) += c * logical(l);
        }
    }
    SpinRegister reg(n_dots, out);
    reg.renormalize();
    return reg;
}

double state_fidelity(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    }
    return std::norm(a.dot(b));
}

double logical_fidelity(const SpinRegister &reg, const LogicalLayout &layout, const StateVector &target) {
    LogicalState st = decode_logical(reg, layout);
    if (st.fully_leaked) {
        return 0.0;
    }
    if (target.size() != st.block.rows()) {
        throw std::invalid_argument("logical_fidelity: dimension mismatch");
    }
    double overlap = (target.adjoint() * st.block).squaredNorm();
    return overlap / (st.block.squaredNorm() * target.squaredNorm());
}

Eigen::VectorXd pair_schmidt_coefficients(const SpinRegister &reg, DotPair pair) {
    reg.check_pair(pair);
    int n = reg.num_dots();
    DenseOperator m = DenseOperator::Zero(4, Eigen::Index{1} << (n - 2));
    size_t ma = dot_mask(n, pair.a);
    size_t mb = dot_mask(n, pair.b);
    for (size_t i = 0; i < reg.dim(); i++) {
        int row = ((i & ma) ? 2 : 0) | ((i & mb) ? 1 : 0);
        size_t col = 0;
        for (int d = 0; d < n; d++) {
            if (d == pair.a || d == pair.b) {
                continue;
            }
            col = (col << 1) | ((i & dot_mask(n, d)) ? 1 : 0);
        }
        m(row, col) = reg.amplitudes()(i);
    }
    Eigen::JacobiSVD<DenseOperator> svd(m);
    return svd.singularValues();
}

double reduced_entropy_bits(const StateVector &logical, size_t num_qubits, size_t q) {
    if (static_cast<size_t>(logical.size()) != (size_t{1} << num_qubits) || q >= num_qubits) {
        throw std::invalid_argument("reduced_entropy_bits: bad dimensions");
    }
    DenseOperator m = DenseOperator::Zero(2, Eigen::Index{1} << (num_qubits - 1));
    for (size_t i = 0; i < static_cast<size_t>(logical.size()); i++) {
        size_t shift = num_qubits - 1 - q;
        size_t bit = (i >> shift) & 1;
        size_t rest = ((i >> (shift + 1)) << shift) | (i & ((size_t{1} << shift) - 1));
        m(bit, rest) = logical(i);
    }
    Eigen::JacobiSVD<DenseOperator> svd(m);
    double h = 0;
    double total = m.squaredNorm();
    for (Eigen::Index k = 0; k < svd.singularValues().size(); k++) {
        double p = svd.singularValues()(k) * svd.singularValues()(k) / total;
        if (p > 1e-300) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

nlohmann::json amplitudes_to_json(const StateVector &v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); i++) {
        out.push_back({v(i).real(), v(i).imag()});
    }
    return out;
}

nlohmann::json register_to_json(const SpinRegister &reg) {
    return amplitudes_to_json(reg.amplitudes());
}

SpinRegister register_from_json(const nlohmann::json &j) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument("register JSON must be a non-empty array of [re, im] pairs");
    }
    size_t n = 0;
    while ((size_t{1} << n) < j.size()) {
        n++;
    }
    if ((size_t{1} << n) != j.size()) {
        throw std::invalid_argument("register JSON length must be a power of two");
    }
    StateVector v(j.size());
    for (size_t i = 0; i < j.size(); i++) {
        const auto &e = j[i];
        if (!e.is_array() || e.size() != 2) {
            throw std::invalid_argument("register JSON entries must be [re, im]");
        }
        v(i) = cplx(e[0].get<double>(), e[1].get<double>());
    }
    return SpinRegister(static_cast<int>(n), v);
}

}  // namespace spinmbqc
