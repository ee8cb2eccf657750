#pragma once

// Dense complex linear algebra used by every other module: a deterministic
// cyclic Jacobi eigensolver for Hermitian matrices and functional calculus on
// top of it.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include "error.hpp"

namespace ncorlicz {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Relative tolerance below which eigenvalues are merged into one spectral projection.
inline constexpr double kClusterTol = 1e-9;
// Jacobi stops once the off-diagonal Frobenius mass is below this fraction of ||A||_F.
inline constexpr double kJacobiTol = 1e-13;
// Relative threshold below which a nonnegative eigenvalue counts as zero (support detection).
inline constexpr double kSupportTol = 1e-12;

struct HermitianEigen {
    Eigen::VectorXd values; // descending
    Matrix vectors;         // columns are orthonormal eigenvectors
};

inline double frobenius(const Matrix& a) { return a.norm(); }

inline double hermitian_defect(const Matrix& a) { return (a - a.adjoint()).norm(); }

/// Cyclic Jacobi for complex Hermitian matrices. Row-major sweep order over
/// pairs (p, q), p < q; each rotation first removes the phase of a_pq and then
/// applies the real Jacobi rotation. Deterministic for a given input.
inline HermitianEigen eigh(const Matrix& input, int max_sweeps = 100) {
    const Eigen::Index n = input.rows();
    if (input.cols() != n) throw ValidationError("eigh: matrix is not square");
    Matrix a = 0.5 * (input + input.adjoint());
    Matrix v = Matrix::Identity(n, n);
    const double scale = a.norm();

    auto off_mass = [&] {
        double s = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = 0; q < n; ++q)
                if (p != q) s += std::norm(a(p, q));
        return std::sqrt(s);
    };

    int sweep = 0;
    if (scale > 0.0) {
        for (; sweep < max_sweeps; ++sweep) {
            if (off_mass() <= kJacobiTol * scale) break;
            for (Eigen::Index p = 0; p < n - 1; ++p) {
                for (Eigen::Index q = p + 1; q < n; ++q) {
                    const double mag = std::abs(a(p, q));
                    if (mag == 0.0) continue;
                    const Complex e = a(p, q) / mag;
                    const double app = a(p, p).real();
                    const double aqq = a(q, q).real();
                    const double theta = (aqq - app) / (2.0 * mag);
                    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    // J = diag(1, conj(e)) * R: column p = (c, -s conj(e)), column q = (s, c conj(e)).
                    const Complex jqp = -s * std::conj(e);
                    const Complex jqq = c * std::conj(e);
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const Complex akp = a(k, p), akq = a(k, q);
                        a(k, p) = akp * c + akq * jqp;
                        a(k, q) = akp * s + akq * jqq;
                        const Complex vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = vkp * c + vkq * jqp;
                        v(k, q) = vkp * s + vkq * jqq;
                    }
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const Complex apk = a(p, k), aqk = a(q, k);
                        a(p, k) = c * apk + std::conj(jqp) * aqk;
                        a(q, k) = s * apk + std::conj(jqq) * aqk;
                    }
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    a(p, p) = a(p, p).real();
                    a(q, q) = a(q, q).real();
                }
            }
        }
        if (sweep == max_sweeps && off_mass() > kJacobiTol * scale)
            throw NumericError("eigh: Jacobi iteration did not converge");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return a(i, i).real() > a(j, j).real();
    });
    HermitianEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = a(order[k], order[k]).real();
        out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

/// Groups of (descending) eigenvalue indices whose values agree within
/// kClusterTol relative to the spectral radius.
struct Cluster {
    double value;
    std::vector<Eigen::Index> indices;
};

inline std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXd& values, double radius) {
    std::vector<Cluster> out;
    const double tol = kClusterTol * std::max(radius, 1.0e-300);
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (!out.empty() && std::abs(out.back().value - values(k)) <= tol) {
            auto& c = out.back();
            c.indices.push_back(k);
            double sum = 0.0;
            for (auto i : c.indices) sum += values(i);
            c.value = sum / static_cast<double>(c.indices.size());
        } else {
            out.push_back({values(k), {k}});
        }
    }
    return out;
}

inline Matrix cluster_projection(const HermitianEigen& eig, const Cluster& c) {
    const Eigen::Index n = eig.vectors.rows();
    Matrix p = Matrix::Zero(n, n);
    for (auto i : c.indices) p += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    return p;
}

/// f(A) = sum_k f(lambda_k) P_k over clustered eigenvalues. f may return a real
/// or a complex value; a NaN result marks f as undefined at that eigenvalue.
template <class F>
Matrix apply_function(const HermitianEigen& eig, F&& f) {
    const Eigen::Index n = eig.vectors.rows();
    Matrix out = Matrix::Zero(n, n);
    if (n == 0) return out;
    const double radius = std::max(std::abs(eig.values(0)), std::abs(eig.values(n - 1)));
    for (const auto& c : cluster_eigenvalues(eig.values, radius)) {
        const auto fv = f(c.value);
        Complex value;
        if constexpr (std::is_convertible_v<decltype(fv), double>) {
            value = Complex(static_cast<double>(fv), 0.0);
        } else {
            value = Complex(fv);
        }
        if (std::isnan(value.real()) || std::isnan(value.imag()))
            throw ValidationError("spectral calculus: function undefined at eigenvalue " +
                                  std::to_string(c.value));
        if (value == Complex(0.0, 0.0)) continue;
        out += value * cluster_projection(eig, c);
    }
    return out;
}

/// Nonnegative eigenvalues at or below kSupportTol times the largest one are
/// treated as exact zeros.
inline bool is_null_eigenvalue(double lambda, double largest) {
    return lambda <= kSupportTol * std::max(largest, 0.0);
}

} // namespace ncorlicz
