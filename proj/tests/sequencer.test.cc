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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

using namespace spinmbqc;

namespace {

const PauliAxis kXYZ[] = {PauliAxis::X, PauliAxis::Y, PauliAxis::Z};

DenseOperator mat2(cplx a, cplx b, cplx c, cplx d) {
    DenseOperator m(2, 2);
    m << a, b, c, d;
    return m;
}

DenseOperator hadamard() {
    return mat2(1, 1, 1, -1) / std::sqrt(2.0);
}

DenseOperator cnot() {
    DenseOperator m = DenseOperator::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

std::vector<int> bits3(int k) {
    return {(k >> 2) & 1, (k >> 1) & 1, k & 1};
}

// Independent oracle: explicit 4x4 projector product on data (x) ancilla,
// ancilla prepared in the mu eigenstate and read out in the zeta eigenbasis.
DenseOperator brute_force(PauliAxis mu, PauliAxis nu, PauliAxis xi, PauliAxis zeta, const std::vector<int> &s) {
    auto eig = [](PauliAxis a, int bit) {
        Eigen::SelfAdjointEigenSolver<DenseOperator> es(pauli_matrix(a));
        return StateVector(es.eigenvectors().col(bit == 0 ? 1 : 0));
    };
    DenseOperator joint = parity_projector(PauliString({nu, xi}), s[1]);
    StateVector in = eig(mu, s[0]);
    StateVector outv = eig(zeta, s[2]);
    DenseOperator id = DenseOperator::Identity(2, 2);
    return kron(id, outv.adjoint()) * joint * kron(id, in);
}

}  // namespace

TEST(sequencer, parse_grammar) {
    auto seq = MeasurementSequence::parse("IZI -> ZXI -> IZX -> IXI");
    EXPECT_EQ(seq.steps.size(), 4u);
    EXPECT_EQ(seq.ancilla, 1u);
    EXPECT_EQ(seq.str(), "IZI -> ZXI -> IZX -> IXI");
    EXPECT_THROW(MeasurementSequence::parse("IX ->"), SequenceError);
    EXPECT_THROW(MeasurementSequence::parse("IX"), SequenceError);
    EXPECT_THROW(MeasurementSequence::parse("IX -> ZXX"), SequenceError);
    EXPECT_THROW(MeasurementSequence::parse("ZX -> IX"), SequenceError);
    EXPECT_EQ(parse_outcomes("0110"), (std::vector<int>{0, 1, 1, 0}));
    EXPECT_THROW(parse_outcomes("012"), std::invalid_argument);
}

TEST(sequencer, validate_examples) {
    EXPECT_TRUE(validate_sequence(MeasurementSequence::parse("IX -> ZZ -> IX")).empty());
    EXPECT_TRUE(validate_sequence(MeasurementSequence::parse("IZI -> ZXI -> IZX -> IXI")).empty());
    auto v = validate_sequence(MeasurementSequence::parse("IX -> ZX"));
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].step, 2u);
}

TEST(sequencer, closed_form_examples) {
    std::vector<int> zeros{0, 0, 0};
    auto g = derive_single_qubit_closed_form(PauliAxis::Y, PauliAxis::Y, PauliAxis::X, PauliAxis::Z, zeros);
    ASSERT_TRUE(g.unitary());
    DenseOperator expected = (DenseOperator::Identity(2, 2) + cplx(0, 1) * pauli_matrix(PauliAxis::Y)) / std::sqrt(2.0);
    EXPECT_LT(phase_aligned_distance(g.U, expected), 1e-12);

    g = derive_single_qubit_closed_form(PauliAxis::X, PauliAxis::Z, PauliAxis::Z, PauliAxis::X, zeros);
    ASSERT_TRUE(g.unitary());
    EXPECT_NEAR(*g.alpha, 2, 1e-12);
    EXPECT_NEAR(std::abs(*g.beta), 0, 1e-12);
    EXPECT_LT(phase_aligned_distance(g.U, DenseOperator::Identity(2, 2)), 1e-12);

    g = derive_single_qubit_closed_form(PauliAxis::X, PauliAxis::Z, PauliAxis::X, PauliAxis::Z, zeros);
    EXPECT_FALSE(g.unitary());
}

TEST(sequencer, oracle_examples) {
    auto g = derive_sequence_oracle(MeasurementSequence::parse("IZI -> ZXI -> IZX -> IXI"), std::vector<int>(4, 0));
    ASSERT_TRUE(g.unitary());
    EXPECT_EQ(g.label, "CNOT");
    ASSERT_TRUE(g.label_pauli.has_value());
    DenseOperator corrected = to_matrix(*g.label_pauli) * g.U;
    EXPECT_LT(phase_aligned_distance(corrected, cnot()), 1e-10);

    g = derive_sequence_oracle(MeasurementSequence::parse("IY -> YX -> IZ"), std::vector<int>(3, 0));
    ASSERT_TRUE(g.unitary());
    EXPECT_EQ(g.label, "HX");
    EXPECT_LT(phase_aligned_distance(g.U, hadamard() * pauli_matrix(PauliAxis::X)), 1e-12);

    g = derive_sequence_oracle(MeasurementSequence::parse("IX -> ZX"), std::vector<int>(2, 0));
    EXPECT_FALSE(g.unitary());
}

TEST(sequencer, unitarity_iff_rule_all_tuples) {
    int unitary_tuples = 0;
    for (auto mu : kXYZ) {
        for (auto nu : kXYZ) {
            for (auto xi : kXYZ) {
                for (auto zeta : kXYZ) {
                    bool rule = mu != xi && xi != zeta;
                    bool all = true;
                    for (int k = 0; k < 8; k++) {
                        auto s = bits3(k);
                        auto g = derive_sequence_oracle(MeasurementSequence::single_qubit(mu, nu, xi, zeta), s);
                        EXPECT_EQ(g.unitary(), rule);
                        all = all && g.unitary();
                    }
                    unitary_tuples += all ? 1 : 0;
                }
            }
        }
    }
    EXPECT_EQ(unitary_tuples, 3 * 2 * 2 * 3);
}

TEST(sequencer, closed_form_matches_brute_force) {
    double worst = 0;
    for (auto mu : kXYZ) {
        for (auto nu : kXYZ) {
            for (auto xi : kXYZ) {
                for (auto zeta : kXYZ) {
                    if (mu == xi || xi == zeta) {
                        continue;
                    }
                    for (int k = 0; k < 8; k++) {
                        auto s = bits3(k);
                        auto g = derive_single_qubit_closed_form(mu, nu, xi, zeta, s);
                        ASSERT_TRUE(g.unitary());
                        DenseOperator ref = brute_force(mu, nu, xi, zeta, s);
                        cplx norm = std::sqrt((ref.adjoint() * ref).trace() / 2.0);
                        worst = std::max(worst, phase_aligned_distance(g.U, ref / std::abs(norm)));
                        auto o = derive_sequence_oracle(MeasurementSequence::single_qubit(mu, nu, xi, zeta), s);
                        worst = std::max(worst, phase_aligned_distance(g.U, o.U));
                    }
                }
            }
        }
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(sequencer, outcome_covariance) {
    for (auto mu : kXYZ) {
        for (auto nu : kXYZ) {
            for (auto xi : kXYZ) {
                for (auto zeta : kXYZ) {
                    if (mu == xi || xi == zeta) {
                        continue;
                    }
                    auto seq = MeasurementSequence::single_qubit(mu, nu, xi, zeta);
                    DenseOperator u0 = derive_sequence_oracle(seq, std::vector<int>{0, 0, 0}).U;
                    for (int k = 1; k < 8; k++) {
                        auto g = derive_sequence_oracle(seq, bits3(k));
                        ASSERT_TRUE(g.correction.has_value());
                        EXPECT_LT(phase_aligned_distance(g.U, to_matrix(*g.correction) * u0), 1e-12);
                    }
                }
            }
        }
    }
}

TEST(sequencer, clifford_set) {
    std::set<std::string> expected{"I", "S", "S†", "XH", "HX", "HSH", "HS†H"};
    EXPECT_EQ(enumerate_valid_single_qubit_gates(), expected);
    for (auto mu : kXYZ) {
        for (auto nu : kXYZ) {
            for (auto xi : kXYZ) {
                for (auto zeta : kXYZ) {
                    for (int k = 0; k < 8; k++) {
                        auto g = derive_single_qubit_closed_form(mu, nu, xi, zeta, bits3(k));
                        if (!g.unitary()) {
                            continue;
                        }
                        cplx b = *g.beta;
                        bool ok = std::abs(b) < 1e-12 || std::abs(b - cplx(0, 1)) < 1e-12 ||
                                  std::abs(b + cplx(0, 1)) < 1e-12;
                        EXPECT_TRUE(ok);
                    }
                }
            }
        }
    }
}

TEST(sequencer, classify_examples) {
    DenseOperator y = (DenseOperator::Identity(2, 2) + cplx(0, 1) * pauli_matrix(PauliAxis::Y)) / std::sqrt(2.0);
    EXPECT_EQ(classify_clifford(y).name, "HX");
    EXPECT_EQ(classify_clifford(mat2(1, 0, 0, cplx(0, 1))).name, "S");
    DenseOperator t = mat2(1, 0, 0, std::polar(1.0, std::numbers::pi / 4));
    EXPECT_EQ(classify_clifford(t).name, "non-Clifford");
    // pw rotation: the +-1 projector difference of the in-plane observable at pi/4 rotates about it.
    DenseOperator w = (DenseOperator::Identity(2, 2) + cplx(0, 1) * pw_observable(std::numbers::pi / 4)) / std::sqrt(2.0);
    EXPECT_EQ(classify_clifford(w).name, "non-Clifford");
    auto h = classify_clifford(hadamard());
    EXPECT_TRUE(h.name == "HX" || h.name == "XH");
    EXPECT_THROW(classify_clifford(DenseOperator::Identity(2, 2) * 2.0), std::invalid_argument);
}

TEST(sequencer, paper_set_is_clifford) {
    for (const auto &[name, u] : paper_clifford_set()) {
        auto c = classify_clifford(u);
        EXPECT_EQ(c.name, name);
        EXPECT_TRUE(c.in_paper_set);
        EXPECT_TRUE(c.pauli.is_identity());
    }
}

TEST(sequencer, two_qubit_sequences_unitary) {
    for (const char *text : {"IZI -> ZXI -> IZX -> IXI", "IXI -> ZZI -> IZX -> IZI", "IZI -> XXI -> IZZ -> IXI"}) {
        auto seq = MeasurementSequence::parse(text);
        if (!validate_sequence(seq).empty()) {
            continue;
        }
        for (int k = 0; k < 16; k++) {
            std::vector<int> s{(k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1};
            auto g = derive_sequence_oracle(seq, s);
            EXPECT_TRUE(g.unitary()) << text;
            EXPECT_TRUE(is_unitary(g.U, 1e-10)) << text;
        }
    }
}

TEST(sequencer, pw_step_parses) {
    auto seq = MeasurementSequence::parse("IX -> ZW[0.5] -> IZ");
    EXPECT_TRUE(seq.steps[1].pw_qubit.has_value());
    EXPECT_NEAR(seq.steps[1].pw_theta, 0.5, 1e-15);
    DenseOperator obs = seq.steps[1].observable();
    EXPECT_LT((obs - kron(pauli_matrix(PauliAxis::Z), pw_observable(0.5))).norm(), 1e-15);
}
