#pragma once

// Step-valued model of the standard core of a semifinite algebra (N, tau).
//
// With a trace as reference weight the modular flow is trivial, so the crossed
// product is N tensored with functions on R. Translation by s implements the dual
// action, and the generator of translations acts as multiplication by e^s.
// Unwinding the canonical trace against tau leaves the density e^{-s} ds:
//
//   tau~(x) = sum_k tau(x_k) (e^{-a_k} - e^{-b_k})   for x = sum_k x_k (x) 1_[a_k, b_k)
//
// and translating every interval by s multiplies each weight by e^{-s}, which
// is the scaling law tau~ o sigma~_s = e^{-s} tau~.
//
// Representation: interval endpoints are stored relative to an origin, and the
// origin is the sum of a multiset of applied shifts. A shift s followed by -s
// cancels in the multiset, so sigma~_s o sigma~_{-s} is the identity bit for bit,
// and translations never round the interval lengths. Left endpoints must be
// finite (the e^{-s} mass diverges at -inf); right endpoints may be +inf.
//
// Only finite step elements are represented. Density of this class in the full
// L_Phi of the core is not claimed for Phi without Delta_2.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "trace_orlicz.hpp"

namespace ncorlicz {

struct CorePiece {
    Element element;
    double start;           // finite, relative to the origin
    double end;             // > start, may be +inf
};

class CoreElement {
public:
    CoreElement() = default;

    CoreElement(AlgebraRef algebra, std::vector<CorePiece> pieces, std::vector<double> shifts = {})
        : algebra_(std::move(algebra)), pieces_(std::move(pieces)), shifts_(std::move(shifts)) {
        if (!algebra_) throw ValidationError("core element: null algebra");
        std::sort(shifts_.begin(), shifts_.end());
        for (const auto& p : pieces_) {
            require_same_algebra(algebra_, p.element.algebra(), "core element");
            if (!std::isfinite(p.start)) throw ValidationError("core element: left endpoint must be finite");
            if (std::isnan(p.end) || !(p.end > p.start))
                throw ValidationError("core element: interval must satisfy start < end");
        }
        std::stable_sort(pieces_.begin(), pieces_.end(),
                         [](const CorePiece& a, const CorePiece& b) { return a.start < b.start; });
        for (std::size_t k = 1; k < pieces_.size(); ++k)
            if (pieces_[k].start < pieces_[k - 1].end)
                throw ValidationError("core element: overlapping intervals [" + std::to_string(pieces_[k - 1].start) +
                                      ", " + std::to_string(pieces_[k - 1].end) + ") and [" +
                                      std::to_string(pieces_[k].start) + ", " + std::to_string(pieces_[k].end) + ")");
        pieces_.erase(std::remove_if(pieces_.begin(), pieces_.end(),
                                     [](const CorePiece& p) { return p.element.is_zero(); }),
                      pieces_.end());
    }

    static CoreElement zero(const AlgebraRef& alg) { return CoreElement(alg, {}); }

    const AlgebraRef& algebra() const { return algebra_; }
    const std::vector<CorePiece>& pieces() const { return pieces_; }
    const std::vector<double>& shifts() const { return shifts_; }
    bool is_zero() const { return pieces_.empty(); }

    double origin() const {
        double s = 0.0;
        for (double v : shifts_) s += v;
        return s;
    }

    double absolute_start(std::size_t k) const { return origin() + pieces_[k].start; }
    double absolute_end(std::size_t k) const { return origin() + pieces_[k].end; }

    /// Canonical-trace mass e^{-a} - e^{-b} of piece k.
    double weight(std::size_t k) const { return std::exp(-origin()) * local_weight(pieces_[k]); }

    /// Same data with the origin folded into the endpoints.
    CoreElement materialized() const {
        const double o = origin();
        std::vector<CorePiece> ps;
        for (const auto& p : pieces_) ps.push_back({p.element, p.start + o, p.end + o});
        return CoreElement(algebra_, std::move(ps));
    }

    template <class F>
    CoreElement map_pieces(F&& f) const {
        std::vector<CorePiece> ps;
        for (const auto& p : pieces_) ps.push_back({f(p.element), p.start, p.end});
        return CoreElement(algebra_, std::move(ps), shifts_);
    }

    CoreElement adjoint() const {
        return map_pieces([](const Element& e) { return e.adjoint(); });
    }

    CoreElement absolute() const {
        return map_pieces([](const Element& e) { return absolute_value(e); });
    }

    /// Translation of every interval by s.
    CoreElement translated(double s) const {
        if (s == 0.0) return *this;
        std::vector<double> sh = shifts_;
        const auto it = std::find(sh.begin(), sh.end(), -s);
        if (it != sh.end()) sh.erase(it);
        else sh.push_back(s);
        return CoreElement(algebra_, pieces_, std::move(sh));
    }

    static double local_weight(const CorePiece& p) {
        const double ea = std::exp(-p.start);
        if (p.end == kInf) return ea;
        return -ea * std::expm1(-(p.end - p.start));
    }

private:
    AlgebraRef algebra_;
    std::vector<CorePiece> pieces_;
    std::vector<double> shifts_;
};

/// x (x) 1_[0, inf), the slice carrying canonical-trace mass 1.
inline CoreElement embed(const Element& x) {
    return CoreElement(x.algebra(), {CorePiece{x, 0.0, kInf}});
}

namespace detail {

// Both operands expressed against the origin of `x`, then cut at every endpoint.
template <class Combine>
CoreElement combine_on_refinement(const CoreElement& x, const CoreElement& y, Combine&& combine) {
    require_same_algebra(x.algebra(), y.algebra(), "core arithmetic");
    const double offset = y.shifts() == x.shifts() ? 0.0 : y.origin() - x.origin();
    std::vector<CorePiece> ys;
    for (const auto& p : y.pieces()) ys.push_back({p.element, p.start + offset, p.end + offset});

    std::vector<double> cuts;
    for (const auto& p : x.pieces()) { cuts.push_back(p.start); cuts.push_back(p.end); }
    for (const auto& p : ys) { cuts.push_back(p.start); cuts.push_back(p.end); }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto covering = [](const std::vector<CorePiece>& ps, double a, double b) -> const Element* {
        for (const auto& p : ps)
            if (p.start <= a && b <= p.end) return &p.element;
        return nullptr;
    };
    const Element zero = Element::zero(x.algebra());
    std::vector<CorePiece> out;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        const double a = cuts[j], b = cuts[j + 1];
        if (!std::isfinite(a)) continue;
        const Element* ex = covering(x.pieces(), a, b);
        const Element* ey = covering(ys, a, b);
        if (!ex && !ey) continue;
        Element v = combine(ex ? *ex : zero, ey ? *ey : zero);
        if (!v.is_zero()) out.push_back({std::move(v), a, b});
    }
    return CoreElement(x.algebra(), std::move(out), x.shifts());
}

} // namespace detail

inline CoreElement operator+(const CoreElement& x, const CoreElement& y) {
    return detail::combine_on_refinement(x, y, [](const Element& a, const Element& b) { return a + b; });
}

inline CoreElement operator-(const CoreElement& x, const CoreElement& y) {
    return detail::combine_on_refinement(x, y, [](const Element& a, const Element& b) { return a - b; });
}

inline CoreElement operator*(const CoreElement& x, const CoreElement& y) {
    return detail::combine_on_refinement(x, y, [](const Element& a, const Element& b) { return a * b; });
}

inline CoreElement operator*(Complex s, const CoreElement& x) {
    return x.map_pieces([&](const Element& e) { return s * e; });
}

/// sigma~_s: translation of all intervals by +s.
inline CoreElement dual_action(double s, const CoreElement& x) { return x.translated(s); }

/// tau~ as a linear functional on the step class.
inline Complex canonical_trace_linear(const CoreElement& x) {
    Complex s = 0.0;
    for (const auto& p : x.pieces()) s += trace(p.element) * CoreElement::local_weight(p);
    return std::exp(-x.origin()) * s;
}

/// tau~(x) for x positive in every cell.
inline double canonical_trace(const CoreElement& x) {
    for (const auto& p : x.pieces())
        if (!Functional(p.element).is_positive())
            throw ValidationError("canonical_trace: element is not positive on every cell");
    return canonical_trace_linear(x).real();
}

/// Rearrangement of |x| against tau~: singular values of every piece with measure w_k c_i.
inline RearrangementFunction core_rearrangement(const CoreElement& x) {
    std::vector<WeightedValue> all;
    for (std::size_t k = 0; k < x.pieces().size(); ++k) {
        const auto vals = weighted_singular_values(x.pieces()[k].element, x.weight(k));
        all.insert(all.end(), vals.begin(), vals.end());
    }
    return merge_steps(std::move(all));
}

/// tau~(Phi(|x| / lambda)) = sum_k w_k tau(Phi(|x_k| / lambda)).
inline double core_modular(const OrliczFunction& phi, const CoreElement& x, double lambda) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.pieces().size(); ++k)
        s += mul_ext(x.weight(k), step_modular(phi, rearrangement(x.pieces()[k].element), lambda));
    return s;
}

inline NormResult core_luxemburg_report(const OrliczFunction& phi, const CoreElement& x, double tol = 1e-12) {
    return luxemburg_from_steps(phi, core_rearrangement(x), tol);
}

inline double core_luxemburg_norm(const OrliczFunction& phi, const CoreElement& x, double tol = 1e-12) {
    return core_luxemburg_report(phi, x, tol).norm;
}

/// exists lambda > 0 with tau~(Phi(lambda |x|)) < inf: holds on the whole step class,
/// since each cell has finite mass and Phi is finite near 0.
inline bool core_membership(const OrliczFunction& phi, const CoreElement& x) {
    if (x.is_zero()) return true;
    double top = 0.0;
    for (const auto& p : x.pieces()) top = std::max(top, p.element.operator_norm());
    const double xf = phi.finite_limit();
    const double lambda = xf == kInf ? 1.0 : xf / (2.0 * top);
    return core_modular(phi, x, 1.0 / lambda) < kInf;
}

} // namespace ncorlicz
