#pragma once

// Finite-dimensional W*-algebras N = M_{n_1} + ... + M_{n_k} with the trace
// tau(x) = sum_i c_i Tr(x_i). In finite dimension every normal weight is a
// positive functional and every operator is tau-measurable, so the algebra of
// measurable operators is N itself.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"

namespace ncorlicz {

class AlgebraDescriptor {
public:
    AlgebraDescriptor(std::vector<int> dims, std::vector<double> weights)
        : dims_(std::move(dims)), weights_(std::move(weights)) {
        if (dims_.empty()) throw ValidationError("algebra: at least one block is required");
        if (dims_.size() != weights_.size())
            throw ValidationError("algebra: " + std::to_string(dims_.size()) + " dims but " +
                                  std::to_string(weights_.size()) + " weights");
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            if (dims_[i] < 1)
                throw ValidationError("algebra: block " + std::to_string(i) + " has dim < 1");
            if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
                throw ValidationError("algebra: block " + std::to_string(i) +
                                      " weight must be positive and finite");
        }
    }

    std::size_t block_count() const { return dims_.size(); }
    int dim(std::size_t i) const { return dims_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<int>& dims() const { return dims_; }
    const std::vector<double>& weights() const { return weights_; }

    // tau(1) = sum_i c_i n_i
    double trace_of_identity() const {
        double s = 0.0;
        for (std::size_t i = 0; i < dims_.size(); ++i) s += weights_[i] * dims_[i];
        return s;
    }

    // Real dimension count of N as a complex vector space.
    int linear_dimension() const {
        int s = 0;
        for (int d : dims_) s += d * d;
        return s;
    }

    friend bool operator==(const AlgebraDescriptor& a, const AlgebraDescriptor& b) {
        return a.dims_ == b.dims_ && a.weights_ == b.weights_;
    }

private:
    std::vector<int> dims_;
    std::vector<double> weights_;
};

using AlgebraRef = std::shared_ptr<const AlgebraDescriptor>;

inline AlgebraRef make_algebra(std::vector<int> dims, std::vector<double> weights) {
    return std::make_shared<const AlgebraDescriptor>(std::move(dims), std::move(weights));
}

inline bool same_algebra(const AlgebraRef& a, const AlgebraRef& b) {
    return a == b || (a && b && *a == *b);
}

inline void require_same_algebra(const AlgebraRef& a, const AlgebraRef& b, const char* where) {
    if (!same_algebra(a, b)) throw ValidationError(std::string(where) + ": algebra mismatch");
}

/// Block matrix tuple (x_1, ..., x_k) with x_i of shape n_i x n_i.
class Element {
public:
    Element() = default;

    Element(AlgebraRef algebra, std::vector<Matrix> blocks)
        : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
        if (!algebra_) throw ValidationError("element: null algebra");
        if (blocks_.size() != algebra_->block_count())
            throw ValidationError("element: expected " + std::to_string(algebra_->block_count()) +
                                  " blocks, got " + std::to_string(blocks_.size()));
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            const auto n = algebra_->dim(i);
            if (blocks_[i].rows() != n || blocks_[i].cols() != n)
                throw ValidationError("element: block " + std::to_string(i) + " must be " +
                                      std::to_string(n) + "x" + std::to_string(n));
        }
    }

    static Element zero(const AlgebraRef& alg) {
        std::vector<Matrix> b;
        for (int d : alg->dims()) b.push_back(Matrix::Zero(d, d));
        return {alg, std::move(b)};
    }

    static Element identity(const AlgebraRef& alg) {
        std::vector<Matrix> b;
        for (int d : alg->dims()) b.push_back(Matrix::Identity(d, d));
        return {alg, std::move(b)};
    }

    static Element matrix_unit(const AlgebraRef& alg, std::size_t block, int row, int col) {
        Element e = zero(alg);
        e.blocks_[block](row, col) = 1.0;
        return e;
    }

    // All matrix units E^{(i)}_{jk}, block-major then row-major.
    static std::vector<Element> matrix_units(const AlgebraRef& alg) {
        std::vector<Element> out;
        for (std::size_t i = 0; i < alg->block_count(); ++i)
            for (int j = 0; j < alg->dim(i); ++j)
                for (int k = 0; k < alg->dim(i); ++k) out.push_back(matrix_unit(alg, i, j, k));
        return out;
    }

    const AlgebraRef& algebra() const { return algebra_; }
    std::size_t block_count() const { return blocks_.size(); }
    const Matrix& block(std::size_t i) const { return blocks_[i]; }
    const std::vector<Matrix>& blocks() const { return blocks_; }

    Element adjoint() const {
        std::vector<Matrix> b;
        b.reserve(blocks_.size());
        for (const auto& m : blocks_) b.push_back(m.adjoint());
        return {algebra_, std::move(b)};
    }

    // Unweighted Frobenius norm of the block tuple; used only for tolerances.
    double frobenius() const {
        double s = 0.0;
        for (const auto& m : blocks_) s += m.squaredNorm();
        return std::sqrt(s);
    }

    double operator_norm() const {
        double s = 0.0;
        for (const auto& m : blocks_) {
            if (m.size() == 0) continue;
            const auto eig = eigh(m.adjoint() * m);
            s = std::max(s, std::sqrt(std::max(eig.values(0), 0.0)));
        }
        return s;
    }

    bool is_zero() const {
        return std::all_of(blocks_.begin(), blocks_.end(),
                           [](const Matrix& m) { return m.isZero(0.0); });
    }

    template <class F>
    Element map_blocks(F&& f) const {
        std::vector<Matrix> b;
        b.reserve(blocks_.size());
        for (std::size_t i = 0; i < blocks_.size(); ++i) b.push_back(f(blocks_[i], i));
        return {algebra_, std::move(b)};
    }

    friend Element operator+(const Element& x, const Element& y) {
        require_same_algebra(x.algebra_, y.algebra_, "element +");
        return x.map_blocks([&](const Matrix& m, std::size_t i) -> Matrix { return m + y.blocks_[i]; });
    }
    friend Element operator-(const Element& x, const Element& y) {
        require_same_algebra(x.algebra_, y.algebra_, "element -");
        return x.map_blocks([&](const Matrix& m, std::size_t i) -> Matrix { return m - y.blocks_[i]; });
    }
    friend Element operator*(const Element& x, const Element& y) {
        require_same_algebra(x.algebra_, y.algebra_, "element *");
        return x.map_blocks([&](const Matrix& m, std::size_t i) -> Matrix { return m * y.blocks_[i]; });
    }
    friend Element operator*(Complex s, const Element& x) {
        return x.map_blocks([&](const Matrix& m, std::size_t) -> Matrix { return s * m; });
    }
    friend Element operator*(double s, const Element& x) { return Complex(s, 0.0) * x; }

private:
    AlgebraRef algebra_;
    std::vector<Matrix> blocks_;
};

inline Element block_diagonal(const AlgebraRef& alg, const std::vector<std::vector<double>>& diagonals) {
    std::vector<Matrix> b;
    for (std::size_t i = 0; i < alg->block_count(); ++i) {
        Matrix m = Matrix::Zero(alg->dim(i), alg->dim(i));
        for (int k = 0; k < alg->dim(i); ++k) m(k, k) = diagonals.at(i).at(static_cast<std::size_t>(k));
        b.push_back(std::move(m));
    }
    return {alg, std::move(b)};
}

inline Complex trace(const Element& x) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < x.block_count(); ++i) s += x.algebra()->weight(i) * x.block(i).trace();
    return s;
}

inline bool is_hermitian(const Element& x, double rel_tol = 1e-12) {
    double defect = 0.0;
    for (const auto& m : x.blocks()) defect += (m - m.adjoint()).squaredNorm();
    return std::sqrt(defect) <= rel_tol * x.frobenius();
}

/// Normal functional phi(x) = tau(rho x) = sum_i c_i Tr(rho_i x_i), stored by its
/// density with respect to the weighted trace.
class Functional {
public:
    Functional() = default;
    explicit Functional(Element density) : density_(std::move(density)) {}
    Functional(AlgebraRef alg, std::vector<Matrix> blocks) : density_(std::move(alg), std::move(blocks)) {}

    const AlgebraRef& algebra() const { return density_.algebra(); }
    const Element& density() const { return density_; }
    const Matrix& block(std::size_t i) const { return density_.block(i); }

    Complex operator()(const Element& x) const {
        require_same_algebra(algebra(), x.algebra(), "functional evaluation");
        Complex s = 0.0;
        for (std::size_t i = 0; i < x.block_count(); ++i)
            s += algebra()->weight(i) * (density_.block(i) * x.block(i)).trace();
        return s;
    }

    bool is_positive(double rel_tol = 1e-12) const {
        if (!is_hermitian(density_, 1e-12)) return false;
        for (const auto& m : density_.blocks()) {
            const auto eig = eigh(m);
            const double radius = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
            if (eig.values(eig.values.size() - 1) < -rel_tol * std::max(radius, 1.0)) return false;
        }
        return true;
    }

    bool is_faithful() const {
        if (!is_positive()) return false;
        double largest = 0.0;
        std::vector<double> mins;
        for (const auto& m : density_.blocks()) {
            const auto eig = eigh(m);
            largest = std::max(largest, eig.values(0));
            mins.push_back(eig.values(eig.values.size() - 1));
        }
        return std::all_of(mins.begin(), mins.end(),
                           [&](double l) { return !is_null_eigenvalue(l, largest); });
    }

    bool is_state(double tol = 1e-12) const {
        return is_positive() && std::abs((*this)(Element::identity(algebra())) - 1.0) <= tol;
    }

private:
    Element density_;
};

/// Hermitian element decomposed per block, plus the algebra-wide spectral
/// resolution x = sum_k lambda_k P_k over distinct (clustered) eigenvalues.
struct Spectrum {
    std::vector<HermitianEigen> blocks;
    std::vector<double> values;     // distinct eigenvalues across all blocks, descending
    std::vector<Element> projections;
};

inline void require_hermitian(const Element& x, const char* where) {
    if (!is_hermitian(x, 1e-12)) throw ValidationError(std::string(where) + ": input is not Hermitian");
}

inline Spectrum spectrum(const Element& x) {
    require_hermitian(x, "spectrum");
    Spectrum sp;
    double radius = 0.0;
    for (const auto& m : x.blocks()) {
        sp.blocks.push_back(eigh(m));
        const auto& v = sp.blocks.back().values;
        radius = std::max({radius, std::abs(v(0)), std::abs(v(v.size() - 1))});
    }
    struct Entry {
        double value;
        std::size_t block;
        Eigen::Index index;
    };
    std::vector<Entry> all;
    for (std::size_t i = 0; i < sp.blocks.size(); ++i)
        for (Eigen::Index k = 0; k < sp.blocks[i].values.size(); ++k) all.push_back({sp.blocks[i].values(k), i, k});
    std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.value > b.value; });
    const double tol = kClusterTol * std::max(radius, 1e-300);
    std::size_t start = 0;
    while (start < all.size()) {
        std::size_t end = start + 1;
        while (end < all.size() && std::abs(all[end].value - all[start].value) <= tol) ++end;
        double sum = 0.0;
        Element p = Element::zero(x.algebra());
        std::vector<Matrix> pb = p.blocks();
        for (std::size_t k = start; k < end; ++k) {
            sum += all[k].value;
            const auto& vec = sp.blocks[all[k].block].vectors.col(all[k].index);
            pb[all[k].block] += vec * vec.adjoint();
        }
        sp.values.push_back(sum / static_cast<double>(end - start));
        sp.projections.emplace_back(x.algebra(), std::move(pb));
        start = end;
    }
    return sp;
}

/// f(x) = sum_k f(lambda_k) P_k, blockwise. f may return double or Complex.
template <class F>
Element spectral_calculus(const Element& x, F&& f) {
    require_hermitian(x, "spectral_calculus");
    return x.map_blocks([&](const Matrix& m, std::size_t) -> Matrix { return apply_function(eigh(m), f); });
}

/// Right singular data of one block: x = sum_k sigma_k u_k v_k^*, with sigma_k = ||x v_k||
/// taken from the eigenvectors of x^*x (descending).
struct SingularData {
    Eigen::VectorXd sigma;
    Matrix right; // columns v_k
};

inline SingularData singular_data(const Matrix& x) {
    const auto eig = eigh(x.adjoint() * x);
    SingularData s{Eigen::VectorXd(eig.values.size()), eig.vectors};
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) s.sigma(k) = (x * eig.vectors.col(k)).norm();
    // Re-sort: sigma from ||x v_k|| can reorder entries that are equal up to rounding.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(s.sigma.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return s.sigma(a) > s.sigma(b); });
    SingularData out{Eigen::VectorXd(s.sigma.size()), Matrix(s.right.rows(), s.right.cols())};
    for (std::size_t k = 0; k < order.size(); ++k) {
        out.sigma(static_cast<Eigen::Index>(k)) = s.sigma(order[k]);
        out.right.col(static_cast<Eigen::Index>(k)) = s.right.col(order[k]);
    }
    return out;
}

struct Polar {
    Element v; // partial isometry, v^*v = supp|x|, vv^* = supp|x^*|
    Element a; // |x| = (x^*x)^{1/2}
};

inline Polar polar_decompose(const Element& x) {
    std::vector<Matrix> vb, ab;
    for (const auto& m : x.blocks()) {
        const auto sd = singular_data(m);
        const Eigen::Index n = m.rows();
        Matrix a = Matrix::Zero(n, n), v = Matrix::Zero(n, n);
        const double largest = n > 0 ? sd.sigma(0) : 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto col = sd.right.col(k);
            if (is_null_eigenvalue(sd.sigma(k), largest) || sd.sigma(k) == 0.0) continue;
            a += sd.sigma(k) * col * col.adjoint();
            v += (m * col / sd.sigma(k)) * col.adjoint();
        }
        vb.push_back(std::move(v));
        ab.push_back(std::move(a));
    }
    return {Element(x.algebra(), std::move(vb)), Element(x.algebra(), std::move(ab))};
}

inline Element absolute_value(const Element& x) { return polar_decompose(x).a; }

namespace detail {
inline Element support_of_density(const Element& rho, const char* where) {
    require_hermitian(rho, where);
    std::vector<HermitianEigen> eigs;
    double largest = 0.0, radius = 0.0;
    for (const auto& m : rho.blocks()) {
        eigs.push_back(eigh(m));
        const auto& v = eigs.back().values;
        largest = std::max(largest, v(0));
        radius = std::max({radius, std::abs(v(0)), std::abs(v(v.size() - 1))});
    }
    std::vector<Matrix> pb;
    for (const auto& eig : eigs) {
        const Eigen::Index n = eig.vectors.rows();
        if (eig.values(n - 1) < -1e-12 * std::max(radius, 1.0))
            throw ValidationError(std::string(where) + ": input is not positive (eigenvalue " +
                                  std::to_string(eig.values(n - 1)) + ")");
        Matrix p = Matrix::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k)
            if (!is_null_eigenvalue(eig.values(k), largest)) p += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
        pb.push_back(std::move(p));
    }
    return {rho.algebra(), std::move(pb)};
}
} // namespace detail

/// Smallest projection P with P x P = x, for positive x.
inline Element support_projection(const Element& x) { return detail::support_of_density(x, "support_projection"); }

/// Smallest projection P with phi(1 - P) = 0, for positive phi.
inline Element support_projection(const Functional& phi) {
    return detail::support_of_density(phi.density(), "support_projection");
}

struct FunctionalPolar {
    Element v;            // partial isometry with v^*v = supp(phi)
    Functional absolute;  // |phi|, so that phi(x) = |phi|(x v)
};

/// phi = tau(T .) with T = u|T|: then phi(x) = tau(|T| x u), so v = u and |phi| has density |T|.
inline FunctionalPolar functional_polar(const Functional& phi) {
    auto p = polar_decompose(phi.density());
    return {std::move(p.v), Functional(std::move(p.a))};
}

/// Trace norm ||phi|| = tau(|rho|).
inline double functional_norm(const Functional& phi) {
    double s = 0.0;
    for (std::size_t i = 0; i < phi.density().block_count(); ++i) {
        const auto sd = singular_data(phi.block(i));
        s += phi.algebra()->weight(i) * sd.sigma.sum();
    }
    return s;
}

/// Corner algebra supp(phi) N supp(phi) of a positive functional, realized as a
/// new descriptor by rotating every block into the eigenbasis of rho_i and
/// keeping the rank_i nonzero directions.
struct ReducedAlgebra {
    AlgebraRef algebra;
    Functional functional;               // faithful on `algebra`
    std::vector<std::size_t> source_block; // kept block -> original block index
    std::vector<Matrix> isometries;        // n_i x r_i, columns span supp(rho_i)

    // x |-> W^* x W on each kept block.
    Element restrict(const Element& x) const {
        std::vector<Matrix> b;
        for (std::size_t k = 0; k < source_block.size(); ++k)
            b.push_back(isometries[k].adjoint() * x.block(source_block[k]) * isometries[k]);
        return {algebra, std::move(b)};
    }

    // Inverse of restrict on the corner: y |-> W y W^*, zero on dropped blocks.
    Element extend(const Element& y, const AlgebraRef& original) const {
        Element out = Element::zero(original);
        std::vector<Matrix> b = out.blocks();
        for (std::size_t k = 0; k < source_block.size(); ++k)
            b[source_block[k]] = isometries[k] * y.block(k) * isometries[k].adjoint();
        return {original, std::move(b)};
    }
};

inline ReducedAlgebra reduce(const Functional& phi) {
    if (!phi.is_positive()) throw ValidationError("reduce: functional is not positive");
    std::vector<HermitianEigen> eigs;
    double largest = 0.0;
    for (const auto& m : phi.density().blocks()) {
        eigs.push_back(eigh(m));
        largest = std::max(largest, eigs.back().values(0));
    }
    ReducedAlgebra r;
    std::vector<int> dims;
    std::vector<double> weights;
    std::vector<Matrix> dens;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < eigs[i].values.size(); ++k)
            if (largest > 0.0 && !is_null_eigenvalue(eigs[i].values(k), largest)) keep.push_back(k);
        if (keep.empty()) continue;
        const auto rank = static_cast<Eigen::Index>(keep.size());
        Matrix w(eigs[i].vectors.rows(), rank);
        Matrix d = Matrix::Zero(rank, rank);
        for (Eigen::Index k = 0; k < rank; ++k) {
            w.col(k) = eigs[i].vectors.col(keep[static_cast<std::size_t>(k)]);
            d(k, k) = eigs[i].values(keep[static_cast<std::size_t>(k)]);
        }
        dims.push_back(static_cast<int>(rank));
        weights.push_back(phi.algebra()->weight(i));
        dens.push_back(std::move(d));
        r.source_block.push_back(i);
        r.isometries.push_back(std::move(w));
    }
    if (dims.empty()) throw ValidationError("reduce: functional is zero, corner algebra is empty");
    r.algebra = make_algebra(std::move(dims), std::move(weights));
    r.functional = Functional(r.algebra, std::move(dens));
    return r;
}

} // namespace ncorlicz
