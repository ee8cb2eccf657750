#pragma once

// Scalar Young/Orlicz functions Phi: [0, inf) -> [0, inf], their
// Young-Birnbaum-Orlicz conjugates Phi^v(s) = sup_{x >= 0} (x s - Phi(x)),
// and numerical Delta_2 / N-function diagnostics.
//
// Extended reals: +inf is std::numeric_limits<double>::infinity(), inf + a = inf,
// and 0 * inf = 0 (see mul_ext). At the finiteness boundary x_f a function takes
// its left limit, so Phi_inf(1) = 0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace ncorlicz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Extended-real product honoring 0 * inf = 0.
inline double mul_ext(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}

enum class Family {
    Power,          // coef * t^p, p >= 1 ("power": coef 1, "scaled-power": coef 1/p)
    Threshold,      // 0 on [0, a], +inf beyond; a = 1 is the L_inf Young function
    Cosh1,          // cosh(t) - 1
    Exp1,           // e^t - 1
    Cosh1Conjugate, // s asinh(s) - sqrt(1 + s^2) + 1
    Exp1Conjugate,  // 0 on [0, 1], s ln s - s + 1 beyond
    Table,          // piecewise linear through points, linear or infinite tail
};

enum class Tail { Linear, Infinite };

struct TablePoint {
    double t;
    double value;
};

class OrliczFunction {
public:
    static OrliczFunction power(double p, double coef = 1.0) {
        if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("power: exponent must be finite and >= 1");
        if (!(coef > 0.0) || !std::isfinite(coef)) throw ValidationError("power: coefficient must be positive");
        OrliczFunction f(Family::Power);
        f.p_ = p;
        f.coef_ = coef;
        return f;
    }
    static OrliczFunction scaled_power(double p) { return power(p, 1.0 / p); }
    static OrliczFunction threshold(double a) {
        if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("threshold: level must be positive");
        OrliczFunction f(Family::Threshold);
        f.coef_ = a;
        return f;
    }
    static OrliczFunction linf() { return threshold(1.0); }
    static OrliczFunction cosh1() { return OrliczFunction(Family::Cosh1); }
    static OrliczFunction exp1() { return OrliczFunction(Family::Exp1); }
    static OrliczFunction cosh1_conjugate() { return OrliczFunction(Family::Cosh1Conjugate); }
    static OrliczFunction exp1_conjugate() { return OrliczFunction(Family::Exp1Conjugate); }

    /// Piecewise-linear function through `points` (t strictly increasing, first point (0, 0)).
    /// Rejects non-monotone or non-convex data, naming the offending triple.
    static OrliczFunction table(std::vector<TablePoint> points, Tail tail = Tail::Linear) {
        if (points.size() < 2) throw ValidationError("table: at least two points are required");
        for (const auto& pt : points)
            if (!std::isfinite(pt.t) || !std::isfinite(pt.value)) throw ValidationError("table: non-finite entry");
        if (points[0].t != 0.0 || points[0].value != 0.0) throw ValidationError("table: first point must be (0, 0)");
        std::vector<double> slopes;
        for (std::size_t j = 0; j + 1 < points.size(); ++j) {
            const double dt = points[j + 1].t - points[j].t;
            if (!(dt > 0.0)) throw ValidationError("table: t values must be strictly increasing");
            slopes.push_back((points[j + 1].value - points[j].value) / dt);
        }
        if (slopes[0] < 0.0) throw ValidationError("table: function must be nondecreasing");
        for (std::size_t j = 1; j < slopes.size(); ++j) {
            const double tol = 1e-12 * std::max({std::abs(slopes[j]), std::abs(slopes[j - 1]), 1.0});
            if (slopes[j] < slopes[j - 1] - tol) {
                std::ostringstream os;
                os << "table: not convex, witness triple t = (" << points[j - 1].t << ", " << points[j].t << ", "
                   << points[j + 1].t << ") with slopes " << slopes[j - 1] << " > " << slopes[j];
                throw ValidationError(os.str());
            }
        }
        OrliczFunction f(Family::Table);
        f.table_ = std::make_shared<const TableData>(TableData{std::move(points), std::move(slopes), tail});
        return f;
    }

    Family family() const { return family_; }
    double exponent() const { return p_; }
    double coefficient() const { return coef_; }
    const std::vector<TablePoint>& points() const { return table_->points; }
    Tail tail() const { return table_->tail; }

    std::string name() const {
        std::ostringstream os;
        switch (family_) {
        case Family::Power:
            if (coef_ == 1.0) os << "power(" << p_ << ")";
            else if (coef_ == 1.0 / p_) os << "scaled-power(" << p_ << ")";
            else os << coef_ << "*t^" << p_;
            break;
        case Family::Threshold:
            if (coef_ == 1.0) os << "linf";
            else os << "threshold(" << coef_ << ")";
            break;
        case Family::Cosh1: os << "cosh1"; break;
        case Family::Exp1: os << "exp1"; break;
        case Family::Cosh1Conjugate: os << "cosh1-conjugate"; break;
        case Family::Exp1Conjugate: os << "exp1-conjugate"; break;
        case Family::Table: os << "table(" << table_->points.size() << ")"; break;
        }
        return os.str();
    }

    double operator()(double t) const { return eval(t); }

    double eval(double t) const {
        if (std::isnan(t)) throw ValidationError("orlicz eval: argument is NaN");
        if (t < 0.0) throw ValidationError("orlicz eval: argument must be nonnegative, pass |t|");
        switch (family_) {
        case Family::Power: return t == kInf ? kInf : coef_ * std::pow(t, p_);
        case Family::Threshold: return t <= coef_ ? 0.0 : kInf;
        case Family::Cosh1:
            // cosh(t) - 1 = 2 sinh^2(t/2), stable near 0
            { const double s = std::sinh(0.5 * t); return 2.0 * s * s; }
        case Family::Exp1: return std::expm1(t);
        case Family::Cosh1Conjugate:
            if (t == kInf) return kInf;
            // sqrt(1 + t^2) - 1 = t^2 / (sqrt(1 + t^2) + 1) avoids cancellation near 0
            if (t < 1e-4) { const double t2 = t * t; return t2 / 2.0 - t2 * t2 / 24.0; }
            return t * std::asinh(t) - t * t / (std::sqrt(1.0 + t * t) + 1.0);
        case Family::Exp1Conjugate:
            if (t <= 1.0) return 0.0;
            if (t == kInf) return kInf;
            if (t < 1.05) {
                // (1 + d) log(1 + d) - d = sum_{n >= 2} (-1)^n d^n / (n (n - 1))
                const double d = t - 1.0;
                double term = d, sum = 0.0;
                for (int n = 2; n <= 16; ++n) {
                    term *= -d;
                    sum -= term / (n * (n - 1.0));
                }
                return sum;
            }
            return t * std::log(t) - t + 1.0;
        case Family::Table: return eval_table(t);
        }
        return kInf;
    }

    /// x_f = sup{t : Phi(t) < inf}; Phi(x_f) itself is finite (left continuity).
    double finite_limit() const {
        switch (family_) {
        case Family::Threshold: return coef_;
        case Family::Table: return table_->tail == Tail::Infinite ? table_->points.back().t : kInf;
        default: return kInf;
        }
    }

    /// With Phi(0) = 0, convexity and monotonicity enforced at construction,
    /// Young additionally means divergence along the ray.
    bool is_young() const {
        if (family_ != Family::Table) return true;
        return table_->tail == Tail::Infinite || table_->slopes.back() > 0.0;
    }

    /// Orlicz: Young, finite and continuous everywhere, and positive off 0.
    bool is_orlicz() const {
        switch (family_) {
        case Family::Threshold: return false;
        case Family::Exp1Conjugate: return false;
        case Family::Table: return is_young() && table_->tail == Tail::Linear && table_->slopes.front() > 0.0;
        default: return true;
        }
    }

    /// Known N-function status for closed forms; nullopt for tables.
    std::optional<bool> declared_n_function() const {
        switch (family_) {
        case Family::Power: return p_ > 1.0;
        case Family::Threshold: return false;
        case Family::Cosh1: return true;
        case Family::Exp1: return false;
        case Family::Cosh1Conjugate: return true;
        case Family::Exp1Conjugate: return true;
        case Family::Table: return std::nullopt;
        }
        return std::nullopt;
    }

    /// Known global Delta_2 status for closed forms; nullopt otherwise.
    std::optional<bool> declared_delta2_global() const {
        switch (family_) {
        case Family::Power: return true;
        case Family::Threshold: return false;
        case Family::Cosh1: return false;
        case Family::Exp1: return false;
        case Family::Cosh1Conjugate: return true;
        case Family::Exp1Conjugate: return false;
        case Family::Table: return std::nullopt;
        }
        return std::nullopt;
    }

    std::optional<bool> declared_delta2_local() const {
        switch (family_) {
        case Family::Power: return true;
        case Family::Cosh1: return false;
        case Family::Exp1: return false;
        case Family::Cosh1Conjugate: return true;
        case Family::Exp1Conjugate: return true;
        default: return std::nullopt;
        }
    }

private:
    struct TableData {
        std::vector<TablePoint> points;
        std::vector<double> slopes;
        Tail tail;
    };

    explicit OrliczFunction(Family f) : family_(f) {}

    double eval_table(double t) const {
        const auto& pts = table_->points;
        if (t >= pts.back().t) {
            if (t == pts.back().t) return pts.back().value;
            if (table_->tail == Tail::Infinite || t == kInf) return kInf;
            return pts.back().value + table_->slopes.back() * (t - pts.back().t);
        }
        const auto it = std::upper_bound(pts.begin(), pts.end(), t,
                                         [](double v, const TablePoint& p) { return v < p.t; });
        const auto j = static_cast<std::size_t>(it - pts.begin()) - 1;
        return pts[j].value + table_->slopes[j] * (t - pts[j].t);
    }

    Family family_;
    double p_ = 1.0;
    double coef_ = 1.0;
    std::shared_ptr<const TableData> table_;
};

// ---------------------------------------------------------------------------
// Conjugation

namespace detail {

// Exact conjugate of a convex piecewise-linear function. Its breakpoints are the
// divided differences m_j of the input: Phi^v(m_j) = m_j t_j - Phi(t_j).
inline OrliczFunction table_conjugate(const OrliczFunction& f) {
    const auto& pts = f.points();
    std::vector<double> slopes;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j)
        slopes.push_back((pts[j + 1].value - pts[j].value) / (pts[j + 1].t - pts[j].t));
    std::vector<TablePoint> out{{0.0, 0.0}};
    for (std::size_t j = 0; j < slopes.size(); ++j) {
        const double m = slopes[j];
        const double v = m * pts[j].t - pts[j].value;
        if (m <= out.back().t) {
            out.back().value = std::max(out.back().value, v);
            continue;
        }
        out.push_back({m, v});
    }
    if (f.tail() == Tail::Linear) {
        // Phi^v is finite exactly up to the tail slope.
        if (out.size() < 2) throw ValidationError("young_conjugate: table has zero tail slope (not Young)");
        return OrliczFunction::table(std::move(out), Tail::Infinite);
    }
    // Infinite tail at t_last: beyond the last slope Phi^v(s) = s t_last - Phi(t_last).
    const double s = out.back().t + 1.0;
    out.push_back({s, s * pts.back().t - pts.back().value});
    return OrliczFunction::table(std::move(out), Tail::Linear);
}

} // namespace detail

/// Closed-form conjugate for known families, exact piecewise-linear conjugate for tables.
inline OrliczFunction young_conjugate(const OrliczFunction& f) {
    if (!f.is_young()) throw ValidationError("young_conjugate: " + f.name() + " is not a Young function");
    switch (f.family()) {
    case Family::Power: {
        const double p = f.exponent(), a = f.coefficient();
        if (p == 1.0) return OrliczFunction::threshold(a);
        const double q = p / (p - 1.0);
        // sup_x (x s - a x^p) = (p - 1) a (s / (a p))^q
        return OrliczFunction::power(q, (p - 1.0) * a * std::pow(a * p, -q));
    }
    case Family::Threshold: return OrliczFunction::power(1.0, f.coefficient());
    case Family::Cosh1: return OrliczFunction::cosh1_conjugate();
    case Family::Exp1: return OrliczFunction::exp1_conjugate();
    case Family::Cosh1Conjugate: return OrliczFunction::cosh1();
    case Family::Exp1Conjugate: return OrliczFunction::exp1();
    case Family::Table: return detail::table_conjugate(f);
    }
    throw ValidationError("young_conjugate: unknown family");
}

struct ConjugateEstimate {
    double value;       // lower bound: attained x s - Phi(x)
    double error_bound; // sup - value <= error_bound
    double argmax;
};

inline constexpr int kConjugateNodesPerDecade = 512;

/// Numerical Legendre-Fenchel transform sup_{x >= 0} (x s - Phi(x)) for any
/// Young function given only by evaluation. The objective g is concave, so:
///   1. decade probes 10^k, k = -16..16, locate [10^{k-2}, 10^k] containing the maximizer;
///   2. a log-spaced grid (512 nodes per decade) on that bracket picks the best node j,
///      and concavity puts the maximizer in [x_{j-1}, x_{j+1}];
///   3. golden-section search shrinks that bracket [a, b].
/// Since Phi is nondecreasing, g <= b s - Phi(a) on [a, b], which gives error_bound.
template <class F>
ConjugateEstimate numerical_conjugate(const F& phi, double s) {
    if (std::isnan(s)) throw ValidationError("numerical_conjugate: NaN slope");
    s = std::abs(s);
    if (s == 0.0) return {0.0, 0.0, 0.0};
    auto g = [&](double x) {
        const double v = phi(x);
        return v == kInf ? -kInf : x * s - v;
    };

    int kmax = -16;
    double prev = 0.0; // g(0)
    double before = 0.0;
    bool fell = false;
    for (int k = -16; k <= 16; ++k) {
        const double gx = g(std::pow(10.0, k));
        kmax = k;
        if (gx < prev) { fell = true; break; }
        before = prev;
        prev = gx;
    }
    // Concave g with no increment over the last decade is constant from there on.
    if (!fell && prev == before) return {prev, 0.0, 1e15};
    if (!fell) return {kInf, 0.0, kInf};
    if (kmax == -16) {
        // Maximizer within [0, 1e-16]: g(x) <= x s there.
        return {0.0, 1e-16 * s, 0.0};
    }
    const double lo = kmax - 2 >= -16 ? std::pow(10.0, kmax - 2) : 0.0;
    const double hi = std::pow(10.0, kmax);

    std::vector<double> xs;
    if (lo == 0.0) xs.push_back(0.0);
    const double log_lo = std::log10(lo > 0.0 ? lo : 1e-16), log_hi = std::log10(hi);
    const int nodes = static_cast<int>(std::ceil((log_hi - log_lo) * kConjugateNodesPerDecade));
    for (int j = 0; j <= nodes; ++j) xs.push_back(std::pow(10.0, log_lo + (log_hi - log_lo) * j / nodes));

    std::size_t best = 0;
    double best_val = g(xs[0]);
    for (std::size_t j = 1; j < xs.size(); ++j) {
        const double v = g(xs[j]);
        if (v > best_val) { best_val = v; best = j; }
    }
    double a = best > 0 ? xs[best - 1] : 0.0;
    double b = best + 1 < xs.size() ? xs[best + 1] : xs[best];
    double arg = xs[best];

    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double gc = g(c), gd = g(d);
    for (int it = 0; it < 200 && (b - a) > 1e-16 * b; ++it) {
        if (gc >= gd) {
            b = d; d = c; gd = gc;
            c = b - inv_phi * (b - a); gc = g(c);
        } else {
            a = c; c = d; gc = gd;
            d = a + inv_phi * (b - a); gd = g(d);
        }
    }
    for (double cand : {a, c, d, b}) {
        const double v = g(cand);
        if (v > best_val) { best_val = v; arg = cand; }
    }
    const double pa = phi(a);
    const double upper = pa == kInf ? best_val : b * s - pa;
    return {best_val, std::max(0.0, upper - best_val), arg};
}

/// Numerical conjugate sampled at log-spaced slopes on [s_min, s_max] and returned
/// as a piecewise-linear table with linear tail.
template <class F>
OrliczFunction tabulate_conjugate(const F& phi, double s_min, double s_max,
                                  int nodes_per_decade = kConjugateNodesPerDecade) {
    if (!(s_min > 0.0) || !(s_max > s_min)) throw ValidationError("tabulate_conjugate: need 0 < s_min < s_max");
    std::vector<TablePoint> pts{{0.0, 0.0}};
    const double l0 = std::log10(s_min), l1 = std::log10(s_max);
    const int n = std::max(1, static_cast<int>(std::ceil((l1 - l0) * nodes_per_decade)));
    for (int j = 0; j <= n; ++j) {
        const double s = std::pow(10.0, l0 + (l1 - l0) * j / n);
        const auto est = numerical_conjugate(phi, s);
        if (!std::isfinite(est.value)) return OrliczFunction::table(std::move(pts), Tail::Infinite);
        pts.push_back({s, est.value});
    }
    return OrliczFunction::table(std::move(pts), Tail::Linear);
}

// ---------------------------------------------------------------------------
// Diagnostics

enum class Delta2Mode { Local, Global };

struct Delta2Verdict {
    bool holds = false;          // numerical verdict from the scan
    std::optional<bool> declared; // closed-form truth, if known
    double lambda = 0.0;         // sup of Phi(2x)/Phi(x) over the accepted range
    double x0 = 0.0;             // start of the accepted range (0 for global)
    double witness = 0.0;        // x with the worst ratio or the first violation
    std::string note;
};

/// Scans x on a geometric grid over [1e-6, 1e6] (32 nodes per decade). A point
/// violates Phi(2x) <= lambda Phi(x) when Phi(2x) > 0 = Phi(x) or Phi(2x) = inf > Phi(x).
/// The verdict requires no violation, lambda <= 1e8, and a ratio that has stopped growing
/// over the last decade. Local mode accepts the grid tail after the last violation.
inline Delta2Verdict check_delta2(const OrliczFunction& f, Delta2Mode mode) {
    Delta2Verdict v;
    v.declared = mode == Delta2Mode::Global ? f.declared_delta2_global() : f.declared_delta2_local();
    constexpr int per_decade = 32;
    std::vector<double> xs;
    // A finite-valued Phi that overflows binary64 is cut off there, since inf/inf carries no ratio.
    const bool finite_valued = f.finite_limit() == kInf;
    for (int j = -6 * per_decade; j <= 6 * per_decade; ++j) {
        const double x = std::pow(10.0, double(j) / per_decade);
        if (finite_valued && f(2.0 * x) == kInf) {
            v.note = "scan truncated at overflow; ";
            break;
        }
        xs.push_back(x);
    }

    std::vector<double> ratio(xs.size(), 0.0);
    std::vector<bool> bad(xs.size(), false);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double a = f(xs[j]), b = f(2.0 * xs[j]);
        if (b == 0.0) ratio[j] = 0.0;
        else if (a == kInf) ratio[j] = 1.0; // inf <= lambda inf
        else if (a == 0.0 || b == kInf) bad[j] = true;
        else ratio[j] = b / a;
    }
    std::size_t start = 0;
    if (mode == Delta2Mode::Local) {
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (bad[j]) start = j + 1;
        if (start >= xs.size()) {
            v.holds = false;
            v.witness = xs.back();
            v.note = "violations up to the end of the scanned range";
            return v;
        }
        v.x0 = xs[start];
    } else {
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (bad[j]) {
                v.holds = false;
                v.witness = xs[j];
                v.lambda = kInf;
                v.note = "infinite ratio Phi(2x)/Phi(x)";
                return v;
            }
    }
    double worst = 0.0;
    for (std::size_t j = start; j < xs.size(); ++j)
        if (ratio[j] > worst) { worst = ratio[j]; v.witness = xs[j]; }
    v.lambda = worst;
    const double last = ratio.back();
    const double decade_back = ratio[xs.size() - 1 - per_decade];
    const bool growing = xs.size() - 1 - per_decade >= start && last > decade_back * (1.0 + 1e-6);
    v.holds = worst <= 1e8 && !growing;
    v.note += v.holds ? "ratio bounded on the scanned range (numerical)" : "ratio unbounded or still growing (numerical)";
    return v;
}

/// Phi(x)/x -> 0 at 0 and -> inf at inf, probed at x = 10^{-k} and 10^{k}, k = 1..8,
/// with a monotone trend and a last-decade change of at least 0.1%.
inline bool check_n_function(const OrliczFunction& f) {
    if (f.finite_limit() != kInf) return false;
    std::vector<double> small, large;
    for (int k = 1; k <= 8; ++k) {
        const double xs = std::pow(10.0, -k), xl = std::pow(10.0, k);
        small.push_back(f(xs) / xs);
        large.push_back(f(xl) / xl);
    }
    for (std::size_t k = 1; k < small.size(); ++k) {
        if (small[k] > small[k - 1]) return false;
        if (large[k] < large[k - 1]) return false;
    }
    const bool to_zero = small.back() == 0.0 || small.back() <= small[small.size() - 2] * (1.0 - 1e-3);
    const bool to_inf = large.back() == kInf || large.back() >= large[large.size() - 2] * (1.0 + 1e-3);
    return to_zero && to_inf;
}

} // namespace ncorlicz
