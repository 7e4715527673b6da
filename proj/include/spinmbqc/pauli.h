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

#ifndef SPINMBQC_PAULI_H
#define SPINMBQC_PAULI_H

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spinmbqc {

using cplx = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

enum class PauliAxis : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char axis_char(PauliAxis a);
PauliAxis axis_from_char(char c);

/// i^k with k taken modulo 4.
struct PhasePower {
    uint8_t k = 0;

    PhasePower() = default;
    explicit PhasePower(int power) : k(static_cast<uint8_t>(((power % 4) + 4) % 4)) {
    }
    cplx value() const;
    PhasePower operator+(PhasePower other) const {
        return PhasePower(k + other.k);
    }
    PhasePower operator-() const {
        return PhasePower(-static_cast<int>(k));
    }
    bool operator==(const PhasePower &other) const = default;
};

struct AxisProduct {
    PhasePower phase;
    PauliAxis axis;
    bool operator==(const AxisProduct &other) const = default;
};

/// sigma_a sigma_b = i^k sigma_c.
AxisProduct pauli_product(PauliAxis a, PauliAxis b);

class PauliString {
   public:
    explicit PauliString(std::vector<PauliAxis> axes);
    static PauliString from_text(std::string_view text);
    static PauliString identity(size_t n);

    size_t size() const {
        return axes_.size();
    }
    PauliAxis operator[](size_t k) const {
        return axes_[k];
    }
    const std::vector<PauliAxis> &axes() const {
        return axes_;
    }
    bool is_identity() const;
    /// Qubits carrying a non-identity axis.
    std::vector<size_t> support() const;
    std::string str() const;

    bool operator==(const PauliString &other) const = default;

   private:
    std::vector<PauliAxis> axes_;
};

bool strings_commute(const PauliString &p, const PauliString &q);

DenseOperator pauli_matrix(PauliAxis a);
/// Qubit 0 is the most significant tensor factor.
DenseOperator to_matrix(const PauliString &p);
DenseOperator kron(const DenseOperator &a, const DenseOperator &b);

DenseOperator parity_projector(const PauliString &nu, int s);
/// Projector of the in-plane observable e^{i theta Z/2} X e^{-i theta Z/2}.
DenseOperator pw_projector(double theta, int s);
/// The observable itself (eigenvalues +-1).
DenseOperator pw_observable(double theta);

bool is_unitary(const DenseOperator &u, double tol = 1e-12);
bool is_projector(const DenseOperator &p, double tol = 1e-12);

/// Phase e^{i phi} maximizing Re tr(a^dag e^{i phi} b); 1 when tr(a^dag b) vanishes.
cplx alignment_phase(const DenseOperator &a, const DenseOperator &b);
/// Max-norm of a - e^{i phi} b after phase alignment.
double phase_aligned_distance(const DenseOperator &a, const DenseOperator &b);

void require_bit(int s, const char *what);

}  // namespace spinmbqc

#endif
