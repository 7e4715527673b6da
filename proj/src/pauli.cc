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

#include "spinmbqc/pauli.h"

#include <algorithm>
#include <cmath>

namespace spinmbqc {

char axis_char(PauliAxis a) {
    return "IXYZ"[static_cast<int>(a)];
}

PauliAxis axis_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return PauliAxis::I;
        case 'X':
            return PauliAxis::X;
        case 'Y':
            return PauliAxis::Y;
        case 'Z':
            return PauliAxis::Z;
        default:
            throw std::invalid_argument(std::string("not a Pauli axis: '") + c + "'");
    }
}

cplx PhasePower::value() const {
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[k];
}

AxisProduct pauli_product(PauliAxis a, PauliAxis b) {
    auto ia = static_cast<int>(a);
    auto ib = static_cast<int>(b);
    auto c = static_cast<PauliAxis>(ia ^ ib);
    if (ia == 0 || ib == 0 || ia == ib) {
        return {PhasePower(0), c};
    }
    // X->Y->Z->X is the positive cycle.
    bool cyclic = (ib - ia + 3) % 3 == 1;
    return {PhasePower(cyclic ? 1 : 3), c};
}

PauliString::PauliString(std::vector<PauliAxis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) {
        throw std::invalid_argument("PauliString must have length >= 1");
    }
}

PauliString PauliString::from_text(std::string_view text) {
    std::vector<PauliAxis> axes;
    for (char c : text) {
        axes.push_back(axis_from_char(c));
    }
    return PauliString(std::move(axes));
}

PauliString PauliString::identity(size_t n) {
    return PauliString(std::vector<PauliAxis>(n, PauliAxis::I));
}

bool PauliString::is_identity() const {
    return std::all_of(axes_.begin(), axes_.end(), [](PauliAxis a) { return a == PauliAxis::I; });
}

std::vector<size_t> PauliString::support() const {
    std::vector<size_t> out;
    for (size_t k = 0; k < axes_.size(); k++) {
        if (axes_[k] != PauliAxis::I) {
            out.push_back(k);
        }
    }
    return out;
}

std::string PauliString::str() const {
    std::string out;
    for (auto a : axes_) {
        out.push_back(axis_char(a));
    }
    return out;
}

bool strings_commute(const PauliString &p, const PauliString &q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("strings_commute: length mismatch");
    }
    size_t clashes = 0;
    for (size_t k = 0; k < p.size(); k++) {
        if (p[k] != PauliAxis::I && q[k] != PauliAxis::I && p[k] != q[k]) {
            clashes++;
        }
    }
    return clashes % 2 == 0;
}

DenseOperator pauli_matrix(PauliAxis a) {
    DenseOperator m(2, 2);
    switch (a) {
        case PauliAxis::I:
            m << 1, 0, 0, 1;
            break;
        case PauliAxis::X:
            m << 0, 1, 1, 0;
            break;
        case PauliAxis::Y:
            m << 0, cplx(0, -1), cplx(0, 1), 0;
            break;
        case PauliAxis::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

DenseOperator kron(const DenseOperator &a, const DenseOperator &b) {
    DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

DenseOperator to_matrix(const PauliString &p) {
    DenseOperator out = pauli_matrix(p[0]);
    for (size_t k = 1; k < p.size(); k++) {
        out = kron(out, pauli_matrix(p[k]));
    }
    return out;
}

void require_bit(int s, const char *what) {
    if (s != 0 && s != 1) {
        throw std::invalid_argument(std::string(what) + ": outcome must be 0 or 1");
    }
}

DenseOperator parity_projector(const PauliString &nu, int s) {
    require_bit(s, "parity_projector");
    if (nu.is_identity()) {
        throw std::invalid_argument("parity_projector: all-I string is not a measurement");
    }
    DenseOperator m = to_matrix(nu);
    DenseOperator id = DenseOperator::Identity(m.rows(), m.cols());
    return 0.5 * (id + (s == 0 ? 1.0 : -1.0) * m);
}

DenseOperator pw_observable(double theta) {
    DenseOperator m(2, 2);
    m << 0, std::polar(1.0, theta), std::polar(1.0, -theta), 0;
    return m;
}

DenseOperator pw_projector(double theta, int s) {
    require_bit(s, "pw_projector");
    return 0.5 * (DenseOperator::Identity(2, 2) + (s == 0 ? 1.0 : -1.0) * pw_observable(theta));
}

bool is_unitary(const DenseOperator &u, double tol) {
    if (u.rows() != u.cols()) {
        return false;
    }
    DenseOperator d = u * u.adjoint() - DenseOperator::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

bool is_projector(const DenseOperator &p, double tol) {
    if (p.rows() != p.cols()) {
        return false;
    }
    double herm = (p - p.adjoint()).cwiseAbs().maxCoeff();
    double idem = (p * p - p).cwiseAbs().maxCoeff();
    return herm <= tol && idem <= tol;
}

cplx alignment_phase(const DenseOperator &a, const DenseOperator &b) {
    cplx t = (a.adjoint() * b).trace();
    if (std::abs(t) < 1e-300) {
        return 1.0;
    }
    return std::conj(t) / std::abs(t);
}

double phase_aligned_distance(const DenseOperator &a, const DenseOperator &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("phase_aligned_distance: shape mismatch");
    }
    return (a - alignment_phase(a, b) * b).cwiseAbs().maxCoeff();
}

}  // namespace spinmbqc
