#pragma once

// *-isomorphisms between finite-dimensional algebras and the isometries they
// induce on Orlicz spaces.
//
// Every *-isomorphism of direct sums of matrix blocks is a block permutation
// pi with dim_{pi(i)} = dim_i composed with unitary conjugation:
// s(x)_{pi(i)} = u_i x_i u_i^*. When it also preserves the trace
// (c_{pi(i)} = c_i) it lifts to the core slice by slice, commutes with the dual
// action, and preserves tau~; rearrangements and hence every Luxemburg norm are
// then unchanged.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core_model.hpp"
#include "sampling.hpp"
#include "trace_orlicz.hpp"

namespace ncorlicz {

class Isomorphism {
public:
    Isomorphism(AlgebraRef source, AlgebraRef target, std::vector<std::size_t> permutation, std::vector<Matrix> unitaries)
        : source_(std::move(source)), target_(std::move(target)), perm_(std::move(permutation)),
          unitaries_(std::move(unitaries)) {
        const std::size_t k = source_->block_count();
        if (target_->block_count() != k || perm_.size() != k || unitaries_.size() != k)
            throw ValidationError("isomorphism: block counts do not match");
        std::vector<bool> hit(k, false);
        for (std::size_t i = 0; i < k; ++i) {
            if (perm_[i] >= k || hit[perm_[i]]) throw ValidationError("isomorphism: permutation is not a bijection");
            hit[perm_[i]] = true;
            const int n = source_->dim(i);
            if (target_->dim(perm_[i]) != n)
                throw ValidationError("isomorphism: block " + std::to_string(i) + " dimension differs from its image");
            if (unitaries_[i].rows() != n || unitaries_[i].cols() != n)
                throw ValidationError("isomorphism: unitary " + std::to_string(i) + " has the wrong shape");
            if ((unitaries_[i].adjoint() * unitaries_[i] - Matrix::Identity(n, n)).norm() > 1e-10)
                throw ValidationError("isomorphism: matrix " + std::to_string(i) + " is not unitary");
        }
    }

    static Isomorphism identity(const AlgebraRef& alg) {
        std::vector<std::size_t> p(alg->block_count());
        std::iota(p.begin(), p.end(), std::size_t{0});
        std::vector<Matrix> u;
        for (int d : alg->dims()) u.push_back(Matrix::Identity(d, d));
        return {alg, alg, std::move(p), std::move(u)};
    }

    const AlgebraRef& source() const { return source_; }
    const AlgebraRef& target() const { return target_; }
    const std::vector<std::size_t>& permutation() const { return perm_; }
    const std::vector<Matrix>& unitaries() const { return unitaries_; }

    bool trace_preserving() const {
        for (std::size_t i = 0; i < perm_.size(); ++i)
            if (target_->weight(perm_[i]) != source_->weight(i)) return false;
        return true;
    }

    Element apply(const Element& x) const {
        require_same_algebra(source_, x.algebra(), "isomorphism apply");
        std::vector<Matrix> b(perm_.size());
        for (std::size_t i = 0; i < perm_.size(); ++i) b[perm_[i]] = unitaries_[i] * x.block(i) * unitaries_[i].adjoint();
        return {target_, std::move(b)};
    }

    Element operator()(const Element& x) const { return apply(x); }

private:
    AlgebraRef source_;
    AlgebraRef target_;
    std::vector<std::size_t> perm_;
    std::vector<Matrix> unitaries_;
};

/// second o first.
inline Isomorphism compose(const Isomorphism& second, const Isomorphism& first) {
    if (!same_algebra(first.target(), second.source())) throw ValidationError("compose: algebras do not chain");
    std::vector<std::size_t> p;
    std::vector<Matrix> u;
    for (std::size_t i = 0; i < first.permutation().size(); ++i) {
        const std::size_t mid = first.permutation()[i];
        p.push_back(second.permutation()[mid]);
        u.push_back(second.unitaries()[mid] * first.unitaries()[i]);
    }
    return {first.source(), second.target(), std::move(p), std::move(u)};
}

/// Random trace-preserving automorphism: blocks are permuted only among blocks of
/// equal dimension and weight.
inline Isomorphism random_isomorphism(const AlgebraRef& alg, SplitMix64& rng) {
    const std::size_t k = alg->block_count();
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    // Fisher-Yates restricted to compatible pairs.
    for (std::size_t i = k; i-- > 1;) {
        std::vector<std::size_t> ok;
        for (std::size_t j = 0; j <= i; ++j)
            if (alg->dim(j) == alg->dim(i) && alg->weight(j) == alg->weight(i)) ok.push_back(j);
        const std::size_t j = ok[static_cast<std::size_t>(rng.integer(0, static_cast<int>(ok.size()) - 1))];
        std::swap(perm[i], perm[j]);
    }
    std::vector<Matrix> u;
    for (int d : alg->dims()) u.push_back(random_unitary(rng, d));
    return {alg, alg, std::move(perm), std::move(u)};
}

/// s~: apply s on every cell; intervals and shifts untouched.
inline CoreElement lift_to_core(const Isomorphism& iso, const CoreElement& x) {
    if (!iso.trace_preserving())
        throw ValidationError("lift_to_core: isomorphism does not preserve the trace, tau~ covariance fails");
    require_same_algebra(iso.source(), x.algebra(), "lift_to_core");
    std::vector<CorePiece> ps;
    for (const auto& p : x.pieces()) ps.push_back({iso.apply(p.element), p.start, p.end});
    return CoreElement(iso.target(), std::move(ps), x.shifts());
}

/// Same step structure; values within `value_tol` and lengths within 1e-14, relative.
inline bool same_rearrangement(const RearrangementFunction& a, const RearrangementFunction& b, double value_tol = 1e-10) {
    if (a.steps().size() != b.steps().size()) return false;
    for (std::size_t j = 0; j < a.steps().size(); ++j) {
        const auto& s = a.steps()[j];
        const auto& t = b.steps()[j];
        if (std::abs(s.value - t.value) > value_tol * std::max(s.value, t.value)) return false;
        if (std::abs(s.length - t.length) > 1e-14 * std::max(s.length, t.length)) return false;
    }
    return true;
}

struct IsometryReport {
    bool pass = true;
    int samples = 0;
    double max_base_deviation = 0.0; // relative
    double max_core_deviation = 0.0; // relative
    bool rearrangements_equal = true;
    std::string witness;
};

inline constexpr double kIsometryTol = 1e-9;

inline double relative_gap(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b)});
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// For `samples` random base elements and step elements: ||s(x)||_Phi = ||x||_Phi,
/// ||s~(x)||_Phi = ||x||_Phi on the core, and mu(s(x)) = mu(x).
inline IsometryReport verify_isometry(const Isomorphism& iso, const OrliczFunction& phi, int samples, SplitMix64& rng) {
    if (!iso.trace_preserving()) throw ValidationError("verify_isometry: isomorphism does not preserve the trace");
    IsometryReport r;
    r.samples = samples;
    for (int n = 0; n < samples; ++n) {
        const Element x = random_element(iso.source(), rng);
        const Element y = iso.apply(x);
        const double d = relative_gap(luxemburg_norm(phi, x), luxemburg_norm(phi, y));
        r.max_base_deviation = std::max(r.max_base_deviation, d);
        const bool same = same_rearrangement(rearrangement(x), rearrangement(y));
        if (!same) r.rearrangements_equal = false;

        const CoreElement cx = random_core_element(iso.source(), rng, 3);
        const CoreElement cy = lift_to_core(iso, cx);
        const double dc = relative_gap(core_luxemburg_norm(phi, cx), core_luxemburg_norm(phi, cy));
        r.max_core_deviation = std::max(r.max_core_deviation, dc);
        if (!same_rearrangement(core_rearrangement(cx), core_rearrangement(cy))) r.rearrangements_equal = false;

        if ((d > kIsometryTol || dc > kIsometryTol || !r.rearrangements_equal) && r.witness.empty()) {
            std::ostringstream os;
            os << "sample " << n << ": base deviation " << d << ", core deviation " << dc
               << (r.rearrangements_equal ? "" : ", rearrangement changed");
            r.witness = os.str();
        }
    }
    r.pass = r.max_base_deviation <= kIsometryTol && r.max_core_deviation <= kIsometryTol && r.rearrangements_equal;
    return r;
}

} // namespace ncorlicz
