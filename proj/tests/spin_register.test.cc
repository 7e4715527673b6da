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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "spinmbqc/protocols.h"

using namespace spinmbqc;

namespace {

constexpr double kPi = std::numbers::pi;
const double kR = 1 / std::sqrt(2.0);

int bit(size_t index, int dot, int n) {
    return static_cast<int>((index >> (n - 1 - dot)) & 1);
}

SpinRegister pair_register(Eigen::Vector4cd v) {
    return SpinRegister(2, StateVector(v));
}

Eigen::Vector4cd t_plus() {
    return Eigen::Vector4cd(1, 0, 0, 0);
}

// Explicit amplitude sums over configurations of dots (a, b).
double aligned_weight(const SpinRegister &reg, DotPair p) {
    double w = 0;
    for (size_t i = 0; i < reg.dim(); i++) {
        if (bit(i, p.a, reg.num_dots()) == bit(i, p.b, reg.num_dots())) {
            w += std::norm(reg.amplitudes()(i));
        }
    }
    return w;
}

double singlet_weight(const SpinRegister &reg, DotPair p) {
    int n = reg.num_dots();
    double w = 0;
    for (size_t i = 0; i < reg.dim(); i++) {
        if (bit(i, p.a, n) == 0 && bit(i, p.b, n) == 1) {
            size_t j = i ^ (size_t{1} << (n - 1 - p.a)) ^ (size_t{1} << (n - 1 - p.b));
            w += std::norm((reg.amplitudes()(i) - reg.amplitudes()(j)) * kR);
        }
    }
    return w;
}

StateVector random_state(size_t dim, Rng &rng) {
    StateVector v(dim);
    for (size_t k = 0; k < dim; k++) {
        v(k) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    return v.normalized();
}

}  // namespace

TEST(spin_register, init_examples) {
    PairInit singlet{PairState::Singlet, 0};
    auto reg = init_register(2, std::vector<PairInit>{singlet});
    EXPECT_LT((reg.amplitudes() - StateVector(Eigen::Vector4cd(0, kR, -kR, 0))).norm(), 1e-15);

    reg = init_register(2, std::vector<PairInit>{{PairState::Plus, 0}});
    EXPECT_LT((reg.amplitudes() - StateVector(Eigen::Vector4cd(0, 1, 0, 0))).norm(), 1e-15);

    reg = init_register(2, std::vector<PairInit>{{PairState::Phase, kPi / 2}});
    Eigen::Vector4cd expected = (singlet_vector() + cplx(0, 1) * t0_vector()) * kR;
    EXPECT_LT((reg.amplitudes() - StateVector(expected)).norm(), 1e-15);

    EXPECT_THROW(init_register(4, {{DotPair{0, 1}, singlet}, {DotPair{1, 2}, singlet}}), std::invalid_argument);
    EXPECT_THROW(SpinRegister(2, StateVector::Zero(3)), std::invalid_argument);
}

TEST(spin_register, exchange_examples) {
    auto s = pair_register(singlet_vector());
    EXPECT_LT((exchange_pulse(s, {0, 1}, kPi).amplitudes() + s.amplitudes()).norm(), 1e-15);

    cplx a(0.6, 0.1);
    cplx b(0.3, -0.2);
    double theta = 0.77;
    auto reg = pair_register(a * singlet_vector() + b * t0_vector());
    Eigen::Vector4cd expected = std::polar(1.0, theta) * a * singlet_vector() + b * t0_vector();
    EXPECT_LT((exchange_pulse(reg, {0, 1}, theta).amplitudes() - StateVector(expected)).norm(), 1e-15);

    Rng rng(3);
    auto any = SpinRegister(4, random_state(16, rng));
    EXPECT_LT((exchange_pulse(any, {1, 2}, 0).amplitudes() - any.amplitudes()).norm(), 1e-15);
}

TEST(spin_register, exchange_pi_is_swap) {
    DenseOperator swap = DenseOperator::Zero(4, 4);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1;
    EXPECT_LT(phase_aligned_distance(DenseOperator(exchange_operator(kPi)), swap), 1e-15);
}

TEST(spin_register, parity_examples) {
    Rng rng(1);
    auto updown = pair_register(Eigen::Vector4cd(0, 1, 0, 0));
    auto r = measure_parity_exact(updown, {0, 1}, rng);
    EXPECT_EQ(r.s, 1);
    EXPECT_NEAR(r.probability, 1, 1e-15);
    EXPECT_LT((r.state.amplitudes() - updown.amplitudes()).norm(), 1e-15);

    EXPECT_EQ(measure_parity_exact(pair_register(t_plus()), {0, 1}, rng).s, 0);

    PairInit singlet{PairState::Singlet, 0};
    auto ss = init_register(4, std::vector<PairInit>{singlet, singlet});
    auto w = outcome_weights(ss, {1, 2}, PairMeasurement::ParityExact);
    EXPECT_NEAR(w.p0(), aligned_weight(ss, {1, 2}), 1e-15);
    EXPECT_NEAR(w.p0(), 0.5, 1e-15);
}

TEST(spin_register, singlet_triplet_examples) {
    Rng rng(2);
    auto r = measure_st(pair_register(singlet_vector()), {0, 1}, rng);
    EXPECT_EQ(r.s, 0);
    EXPECT_NEAR(r.probability, 1, 1e-15);
    auto w = outcome_weights(pair_register(Eigen::Vector4cd(0, 1, 0, 0)), {0, 1}, PairMeasurement::SingletTriplet);
    EXPECT_NEAR(w.p0(), 0.5, 1e-15);
    EXPECT_EQ(measure_st(pair_register(t_plus()), {0, 1}, rng).s, 1);
}

TEST(spin_register, asym_first_measurement_one_third) {
    Rng rng(11);
    for (int k = 0; k < 50; k++) {
        StateVector q = random_state(2, rng);
        SpinRegister reg = encode_logical(4, LogicalLayout{{{0, 1}, {2, 3}}},
                                          kron(DenseOperator(q), DenseOperator(StateVector(Eigen::Vector2cd(1, 0)))));
        reg = exchange_pulse(reg, {0, 1}, kPi / 2);
        auto w = outcome_weights(reg, {1, 2}, PairMeasurement::ParityAsym);
        double ws = singlet_weight(reg, {1, 2});
        double wt = aligned_weight(reg, {1, 2});
        EXPECT_NEAR(w.p1(), ws / (ws + wt), 1e-12);
        EXPECT_NEAR(w.p1(), 1.0 / 3, 1e-12);
    }
}

TEST(spin_register, asym_examples) {
    Rng rng(4);
    for (auto mode : {AsymMode::ProjectiveRenormalized, AsymMode::ResetChannel}) {
        auto r = measure_parity_asym(pair_register(t_plus()), {0, 1}, rng, mode);
        EXPECT_EQ(r.s, 0);
        EXPECT_NEAR(r.probability, 1, 1e-15);
    }
    EXPECT_THROW(measure_parity_asym(pair_register(t0_vector()), {0, 1}, rng, AsymMode::ProjectiveRenormalized),
                 std::runtime_error);
    auto r = measure_parity_asym(pair_register(t0_vector()), {0, 1}, rng, AsymMode::ResetChannel);
    EXPECT_EQ(r.s, 1);
    EXPECT_LT((r.state.amplitudes() - StateVector(singlet_vector())).norm(), 1e-15);
}

TEST(spin_register, reinit_examples) {
    Rng rng(5);
    // T+ on (0,1), dot 2 down.
    StateVector v = StateVector::Zero(8);
    v(1) = 1;
    auto r = reinit_singlet(SpinRegister(3, v), {0, 1}, rng);
    StateVector expected = StateVector::Zero(8);
    expected(0b011) = kR;
    expected(0b101) = -kR;
    EXPECT_LT((r.amplitudes() - expected).norm(), 1e-15);

    auto s = pair_register(singlet_vector());
    EXPECT_LT((reinit_singlet(s, {0, 1}, rng).amplitudes() - s.amplitudes()).norm(), 1e-15);

    // Dot 1 maximally entangled with dot 2: (|up up> + |down down>)/sqrt2 on (1,2), dot 0 up.
    StateVector e = StateVector::Zero(8);
    e(0b000) = kR;
    e(0b011) = kR;
    for (int seed = 0; seed < 20; seed++) {
        Rng g(seed);
        auto out = reinit_singlet(SpinRegister(3, e), {0, 1}, g);
        auto schmidt = pair_schmidt_coefficients(out, {0, 1});
        EXPECT_NEAR(schmidt(0), 1, 1e-12);
        EXPECT_NEAR(singlet_weight(out, {0, 1}), 1, 1e-12);
        EXPECT_NEAR(out.norm(), 1, 1e-12);
    }
}

TEST(spin_register, decode_examples) {
    PairInit singlet{PairState::Singlet, 0};
    auto ss = init_register(4, std::vector<PairInit>{singlet, singlet});
    LogicalLayout two{{{0, 1}, {2, 3}}};
    auto d = decode_logical(ss, two);
    EXPECT_LT((d.amplitudes - StateVector(Eigen::Vector4cd(1, 0, 0, 0))).norm(), 1e-15);
    EXPECT_NEAR(d.leakage, 0, 1e-15);

    EXPECT_NEAR(leakage_weight(pair_register(t_plus()), LogicalLayout{{{0, 1}}}), 1, 1e-15);
    EXPECT_TRUE(decode_logical(pair_register(t_plus()), LogicalLayout{{{0, 1}}}).fully_leaked);

    Eigen::VectorXcd s = singlet_vector();
    Eigen::VectorXcd t = t0_vector();
    StateVector bell = (kron(s, s) - kron(t, t)) * kR;
    d = decode_logical(SpinRegister(4, bell), two);
    EXPECT_GT(state_fidelity(d.amplitudes, bell_state(BellState::PsiMinus)), 1 - 1e-15);
    EXPECT_NEAR(d.leakage, 0, 1e-15);
}

TEST(spin_register, fidelity_examples) {
    StateVector zero(2), one(2), plus(2);
    zero << 1, 0;
    one << 0, 1;
    plus << kR, kR;
    EXPECT_NEAR(state_fidelity(plus, plus), 1, 1e-15);
    EXPECT_NEAR(state_fidelity(zero, one), 0, 1e-15);
    EXPECT_NEAR(state_fidelity(zero, plus), 0.5, 1e-15);
}

TEST(spin_register, measurement_properties) {
    Rng rng(9);
    const PairMeasurement kinds[] = {PairMeasurement::ParityExact, PairMeasurement::SingletTriplet};
    for (int k = 0; k < 100; k++) {
        SpinRegister reg(4, random_state(16, rng));
        for (auto kind : kinds) {
            auto w = outcome_weights(reg, {1, 2}, kind);
            EXPECT_NEAR(w.w0 + w.w1, 1, 1e-12);
            auto r = measure_pair(reg, {1, 2}, kind, rng);
            EXPECT_NEAR(r.state.norm(), 1, 1e-12);
            auto again = outcome_weights(r.state, {1, 2}, kind);
            EXPECT_NEAR(r.s == 0 ? again.p0() : again.p1(), 1, 1e-12);
        }
        auto pulsed = exchange_pulse(reg, {2, 3}, rng.uniform(0, 2 * kPi));
        EXPECT_NEAR(pulsed.norm(), 1, 1e-12);
        auto asym = measure_pair(reg, {0, 1}, PairMeasurement::ParityAsym, rng);
        EXPECT_NEAR(asym.state.norm(), 1, 1e-12);
    }
}

// The aligned record (s = 0) selects the XX = -1 eigenspace in the S = |0>, T0 = |1> encoding.
TEST(spin_register, logical_xx_equivalence) {
    Rng rng(13);
    LogicalLayout two{{{0, 1}, {2, 3}}};
    auto xx = PauliString::from_text("XX");
    for (int k = 0; k < 100; k++) {
        StateVector psi = random_state(4, rng);
        SpinRegister reg = encode_logical(4, two, psi);
        for (int s : {0, 1}) {
            auto w = outcome_weights(reg, {1, 2}, PairMeasurement::ParityExact);
            if ((s == 0 ? w.w0 : w.w1) < 1e-6) {
                continue;
            }
            SpinRegister post = apply_outcome(reg, {1, 2}, PairMeasurement::ParityExact, s, nullptr);
            StateVector projected = parity_projector(xx, 1 - s) * psi;
            EXPECT_NEAR(projected.squaredNorm(), s == 0 ? w.p0() : w.p1(), 1e-12);
            auto d = decode_logical(post, two);
            EXPECT_NEAR(d.leakage, 0, 1e-12);
            EXPECT_GT(state_fidelity(d.amplitudes, projected.normalized()), 1 - 1e-12);
        }
    }
}

TEST(spin_register, decode_norm_plus_leakage) {
    Rng rng(17);
    LogicalLayout two{{{0, 1}, {2, 3}}};
    for (int k = 0; k < 100; k++) {
        SpinRegister reg(4, random_state(16, rng));
        auto d = decode_logical(reg, two);
        double logical = d.block.squaredNorm();
        EXPECT_NEAR(logical + d.leakage, 1, 1e-12);
    }
}

TEST(spin_register, json_round_trip) {
    Rng rng(19);
    SpinRegister reg(3, random_state(8, rng));
    auto back = register_from_json(register_to_json(reg));
    EXPECT_EQ(back.num_dots(), 3);
    EXPECT_LT((back.amplitudes() - reg.amplitudes()).norm(), 1e-16);
    EXPECT_THROW(register_from_json(nlohmann::json::array({1, 2, 3})), std::invalid_argument);
}
