#pragma once

// Random test data drawn from SplitMix64: elements, densities with prescribed
// ranks, Haar-like unitaries, trace-preserving isomorphisms and step elements.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "algebra.hpp"
#include "core_model.hpp"
#include "random.hpp"

namespace ncorlicz {

inline Matrix random_matrix(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
    return m;
}

inline Element random_element(const AlgebraRef& alg, SplitMix64& rng) {
    std::vector<Matrix> b;
    for (int d : alg->dims()) b.push_back(random_matrix(rng, d, d));
    return {alg, std::move(b)};
}

inline Element random_hermitian(const AlgebraRef& alg, SplitMix64& rng) {
    const Element x = random_element(alg, rng);
    return 0.5 * (x + x.adjoint());
}

/// Modified Gram-Schmidt on a complex Gaussian matrix.
inline Matrix random_unitary(SplitMix64& rng, Eigen::Index n) {
    Matrix m = random_matrix(rng, n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index j = 0; j < k; ++j) {
                const Complex c = m.col(j).dot(m.col(k));
                m.col(k) -= c * m.col(j);
            }
        m.col(k) /= m.col(k).norm();
    }
    return m;
}

inline Element random_unitary_element(const AlgebraRef& alg, SplitMix64& rng) {
    std::vector<Matrix> b;
    for (int d : alg->dims()) b.push_back(random_unitary(rng, d));
    return {alg, std::move(b)};
}

/// Density u diag(lambda) u^* with the given rank per block, lambda uniform on [0.1, 1].
inline Functional random_functional_with_ranks(const AlgebraRef& alg, SplitMix64& rng, const std::vector<int>& ranks) {
    std::vector<Matrix> b;
    for (std::size_t i = 0; i < alg->block_count(); ++i) {
        const int n = alg->dim(i);
        const Matrix u = random_unitary(rng, n);
        Matrix d = Matrix::Zero(n, n);
        for (int k = 0; k < ranks.at(i); ++k) d(k, k) = rng.uniform(0.1, 1.0);
        Matrix rho = u * d * u.adjoint();
        rho = (0.5 * (rho + rho.adjoint())).eval();
        b.push_back(std::move(rho));
    }
    return Functional(alg, std::move(b));
}

inline Functional random_faithful(const AlgebraRef& alg, SplitMix64& rng) {
    return random_functional_with_ranks(alg, rng, alg->dims());
}

/// Faithful state: random faithful density normalized to phi(1) = 1.
inline Functional random_faithful_state(const AlgebraRef& alg, SplitMix64& rng) {
    const Functional f = random_faithful(alg, rng);
    const double total = f(Element::identity(alg)).real();
    return Functional((1.0 / total) * f.density());
}

inline std::vector<int> random_ranks(const AlgebraRef& alg, SplitMix64& rng, bool allow_zero_total = false) {
    for (;;) {
        std::vector<int> r;
        int total = 0;
        for (int d : alg->dims()) {
            r.push_back(rng.integer(0, d));
            total += r.back();
        }
        if (total > 0 || allow_zero_total) return r;
    }
}

/// Step element with `pieces` cells on [0, 5) with dyadic endpoints; the last
/// cell may extend to +inf.
inline CoreElement random_core_element(const AlgebraRef& alg, SplitMix64& rng, int pieces, bool unbounded_tail = true) {
    std::vector<double> cuts;
    for (int k = 0; k <= pieces; ++k) cuts.push_back(std::round(rng.uniform(0.0, 5.0) * 64.0) / 64.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<CorePiece> ps;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const bool last = k + 2 == cuts.size();
        ps.push_back({random_element(alg, rng), cuts[k], last && unbounded_tail ? kInf : cuts[k + 1]});
    }
    if (ps.empty()) ps.push_back({random_element(alg, rng), cuts[0], kInf});
    return CoreElement(alg, std::move(ps));
}

inline CoreElement random_positive_core_element(const AlgebraRef& alg, SplitMix64& rng, int pieces) {
    const CoreElement x = random_core_element(alg, rng, pieces);
    return x.map_pieces([](const Element& e) { return e.adjoint() * e; });
}

} // namespace ncorlicz
