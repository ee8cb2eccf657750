#pragma once

// Noncommutative Orlicz spaces L_Phi(N, tau) over a finite-dimensional algebra.
//
// For x in N the rearrangement mu(x) is a finite step function: the singular
// values of the blocks, each carrying tau-measure c_i per multiplicity. Every
// modular tau(Phi(|x|/lambda)) is then a finite sum over those steps, which is
// how all norms below are computed. In finite dimension tau-measurability is
// automatic and E_Phi = L_Phi.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "orlicz_function.hpp"

namespace ncorlicz {

struct Step {
    double value;  // > 0, strictly decreasing along the sequence
    double length; // tau-measure carried by this value
};

/// Right-continuous nonincreasing step function on [0, total_mass()), zero beyond.
class RearrangementFunction {
public:
    RearrangementFunction() = default;
    explicit RearrangementFunction(std::vector<Step> steps) : steps_(std::move(steps)) {}

    const std::vector<Step>& steps() const { return steps_; }
    bool empty() const { return steps_.empty(); }

    double total_mass() const {
        double s = 0.0;
        for (const auto& st : steps_) s += st.length;
        return s;
    }

    double operator()(double t) const {
        double start = 0.0;
        for (const auto& st : steps_) {
            if (t < start + st.length) return st.value;
            start += st.length;
        }
        return 0.0;
    }

    double sup() const { return steps_.empty() ? 0.0 : steps_.front().value; }

private:
    std::vector<Step> steps_;
};

/// Singular values (value, tau-measure) pairs, unmerged; zero singular values dropped.
struct WeightedValue {
    double value;
    double measure;
};

inline std::vector<WeightedValue> weighted_singular_values(const Element& x, double measure_scale = 1.0) {
    std::vector<WeightedValue> out;
    double largest = 0.0;
    std::vector<SingularData> sds;
    for (const auto& m : x.blocks()) {
        sds.push_back(singular_data(m));
        if (sds.back().sigma.size() > 0) largest = std::max(largest, sds.back().sigma(0));
    }
    for (std::size_t i = 0; i < sds.size(); ++i)
        for (Eigen::Index k = 0; k < sds[i].sigma.size(); ++k) {
            const double s = sds[i].sigma(k);
            if (s == 0.0 || is_null_eigenvalue(s, largest)) continue;
            out.push_back({s, measure_scale * x.algebra()->weight(i)});
        }
    return out;
}

/// Sort descending and merge values within kClusterTol (relative to the largest)
/// into single steps; the merged value is the measure-weighted mean.
inline RearrangementFunction merge_steps(std::vector<WeightedValue> values) {
    std::stable_sort(values.begin(), values.end(),
                     [](const WeightedValue& a, const WeightedValue& b) { return a.value > b.value; });
    std::vector<Step> steps;
    if (values.empty()) return RearrangementFunction{};
    const double tol = kClusterTol * values.front().value;
    std::size_t start = 0;
    while (start < values.size()) {
        std::size_t end = start + 1;
        while (end < values.size() && values[start].value - values[end].value <= tol) ++end;
        double mass = 0.0, moment = 0.0;
        for (std::size_t k = start; k < end; ++k) {
            mass += values[k].measure;
            moment += values[k].measure * values[k].value;
        }
        steps.push_back({moment / mass, mass});
        start = end;
    }
    return RearrangementFunction(std::move(steps));
}

inline RearrangementFunction rearrangement(const Element& x) { return merge_steps(weighted_singular_values(x)); }

/// sum_j l_j Phi(v_j / lambda), extended-real with 0 * inf = 0.
inline double step_modular(const OrliczFunction& phi, const RearrangementFunction& mu, double lambda) {
    double s = 0.0;
    for (const auto& st : mu.steps()) {
        s += mul_ext(st.length, phi(st.value / lambda));
        if (s == kInf) return kInf;
    }
    return s;
}

/// tau(Phi(|x|)) by spectral calculus on |x| (extended-real when Phi takes +inf).
inline double trace_of_function(const OrliczFunction& phi, const Element& x) {
    const Element a = absolute_value(x);
    bool finite = true;
    std::vector<HermitianEigen> eigs;
    for (const auto& m : a.blocks()) {
        eigs.push_back(eigh(m));
        for (Eigen::Index k = 0; k < eigs.back().values.size(); ++k)
            if (phi(std::max(eigs.back().values(k), 0.0)) == kInf) finite = false;
    }
    if (finite) {
        const Element fa = spectral_calculus(a, [&](double l) { return phi(std::max(l, 0.0)); });
        return trace(fa).real();
    }
    double s = 0.0;
    for (std::size_t i = 0; i < eigs.size(); ++i)
        for (Eigen::Index k = 0; k < eigs[i].values.size(); ++k)
            s += mul_ext(a.algebra()->weight(i), phi(std::max(eigs[i].values(k), 0.0)));
    return s;
}

struct FackKosaki {
    double integral; // int_0^inf Phi(mu_t(x)) dt as a step sum
    double spectral; // tau(Phi(|x|))
    double relative_gap;
};

inline FackKosaki fk_integral(const OrliczFunction& phi, const Element& x) {
    const auto mu = rearrangement(x);
    FackKosaki r{step_modular(phi, mu, 1.0), trace_of_function(phi, x), 0.0};
    if (r.integral == kInf || r.spectral == kInf) {
        r.relative_gap = r.integral == r.spectral ? 0.0 : kInf;
    } else {
        const double scale = std::max({std::abs(r.integral), std::abs(r.spectral), 1e-300});
        r.relative_gap = std::abs(r.integral - r.spectral) / scale;
    }
    return r;
}

struct NormResult {
    double norm = 0.0;
    int iterations = 0;
    double modular_at_norm = 0.0;
};

inline constexpr int kBisectionCap = 200;

/// inf{lambda > 0 : sum_j l_j Phi(v_j / lambda) <= 1} by bisection. The bracket
/// starts at the largest step value and is doubled or halved until it straddles
/// the level set; the returned value is the feasible end, so Phi-modular at
/// norm * (1 + tol) is <= 1 even when the infimum is not attained.
inline NormResult luxemburg_from_steps(const OrliczFunction& phi, const RearrangementFunction& mu, double tol = 1e-12) {
    if (!phi.is_young()) throw ValidationError("luxemburg_norm: " + phi.name() + " is not a Young function");
    if (!(tol > 0.0)) throw ValidationError("luxemburg_norm: tolerance must be positive");
    NormResult r;
    if (mu.empty()) return r;
    auto m = [&](double lambda) {
        ++r.iterations;
        if (r.iterations > kBisectionCap)
            throw NumericError("luxemburg_norm: bisection exceeded " + std::to_string(kBisectionCap) + " iterations");
        return step_modular(phi, mu, lambda);
    };
    double hi = mu.sup();
    while (m(hi) > 1.0) hi *= 2.0;
    double lo = hi;
    while (m(lo) <= 1.0) lo *= 0.5;
    if (lo == hi) lo = 0.5 * hi;
    while (hi - lo > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (m(mid) <= 1.0) hi = mid;
        else lo = mid;
    }
    r.norm = hi;
    r.modular_at_norm = step_modular(phi, mu, hi);
    return r;
}

inline NormResult luxemburg_report(const OrliczFunction& phi, const Element& x, double tol = 1e-12) {
    return luxemburg_from_steps(phi, rearrangement(x), tol);
}

inline double luxemburg_norm(const OrliczFunction& phi, const Element& x, double tol = 1e-12) {
    return luxemburg_report(phi, x, tol).norm;
}

/// Orlicz (Amemiya) norm inf_{k > 0} (1 + tau(Phi(k |x|))) / k. The objective is
/// unimodal in k (k times it is convex with positive value at 0), so a log-grid
/// scan followed by golden section locates the minimum. Equivalent to the
/// Luxemburg norm: ||x||_L <= ||x||_A <= 2 ||x||_L.
inline double amemiya_from_steps(const OrliczFunction& phi, const RearrangementFunction& mu) {
    if (!phi.is_young()) throw ValidationError("amemiya_norm: " + phi.name() + " is not a Young function");
    if (mu.empty()) return 0.0;
    auto f = [&](double logk) {
        const double k = std::exp(logk);
        const double m = step_modular(phi, mu, 1.0 / k);
        return m == kInf ? kInf : (1.0 + m) / k;
    };
    const double base = -std::log(mu.sup());
    constexpr int per_decade = 16;
    const double step = std::log(10.0) / per_decade;
    int best = 0;
    double best_val = kInf;
    for (int j = -10 * per_decade; j <= 10 * per_decade; ++j) {
        const double v = f(base + j * step);
        if (v < best_val) { best_val = v; best = j; }
    }
    if (best_val == kInf) throw NumericError("amemiya_norm: modular infinite on the whole scan");
    double a = base + (best - 1) * step, b = base + (best + 1) * step;
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        if (fc <= fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a); fd = f(d);
        }
    }
    return std::min({best_val, fc, fd});
}

inline double amemiya_norm(const OrliczFunction& phi, const Element& x) {
    return amemiya_from_steps(phi, rearrangement(x));
}

struct Membership {
    bool orlicz_class;   // tau(Phi(|x|)) < inf
    bool kunze_space;    // exists lambda > 0 with tau(Phi(lambda |x|)) < inf
    bool mtkr_space;     // tau(Phi(lambda |x|)) < inf for every lambda > 0
    double kunze_lambda; // a witness lambda for kunze_space
};

inline Membership membership(const OrliczFunction& phi, const Element& x) {
    if (!phi.is_young()) throw ValidationError("membership: " + phi.name() + " is not a Young function");
    const double xf = phi.finite_limit();
    const double top = x.operator_norm();
    Membership mb{};
    mb.orlicz_class = step_modular(phi, rearrangement(x), 1.0) < kInf;
    if (top == 0.0 || xf == kInf) {
        mb.kunze_space = true;
        mb.mtkr_space = true;
        mb.kunze_lambda = 1.0;
        return mb;
    }
    // Phi(lambda s) is finite exactly for lambda s <= x_f.
    mb.kunze_lambda = xf / (2.0 * top);
    mb.kunze_space = step_modular(phi, rearrangement(x), 1.0 / mb.kunze_lambda) < kInf;
    mb.mtkr_space = false;
    return mb;
}

/// Bilinear pairing tau(x y).
inline Complex dual_pairing(const Element& x, const Element& y) {
    require_same_algebra(x.algebra(), y.algebra(), "dual_pairing");
    return trace(x * y);
}

struct EGauge {
    double norm;
    std::string note;
};

/// Norm of x in E_Phi. Here N is finite-dimensional, N cap L_Phi = N is closed, and
/// hence E_Phi(N, tau) = L_Phi(N, tau) with the same norm.
inline EGauge e_space_gauge(const OrliczFunction& phi, const Element& x, double tol = 1e-12) {
    return {luxemburg_norm(phi, x, tol),
            "finite dimension: E_Phi(N,tau) = L_Phi(N,tau) = N as sets, distance to E_Phi is 0"};
}

/// CSV with columns t_start,t_end,value; LF line endings.
inline std::string rearrangement_csv(const RearrangementFunction& mu) {
    std::ostringstream os;
    os.precision(17);
    os << "t_start,t_end,value\n";
    double t = 0.0;
    for (const auto& st : mu.steps()) {
        os << t << ',' << t + st.length << ',' << st.value << '\n';
        t += st.length;
    }
    return os.str();
}

} // namespace ncorlicz
