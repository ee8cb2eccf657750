#pragma once

// Invariant battery run by `ncorlicz suite`. Each case draws its own generator
// from (seed, case id), so results do not depend on case order, and the report
// is sorted by id.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "functorial.hpp"
#include "io.hpp"
#include "modular.hpp"
#include "sampling.hpp"

namespace ncorlicz {

struct CaseResult {
    std::string id;
    bool pass = true;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    int samples = 0;
    std::string witness;
};

/// Registry of Orlicz functions exercised by the battery.
inline std::vector<OrliczFunction> registry() {
    return {OrliczFunction::power(1.0),
            OrliczFunction::power(1.5),
            OrliczFunction::power(2.0),
            OrliczFunction::power(3.0),
            OrliczFunction::scaled_power(2.0),
            OrliczFunction::linf(),
            OrliczFunction::cosh1(),
            OrliczFunction::exp1(),
            OrliczFunction::table({{0.0, 0.0}, {1.0, 0.5}, {2.0, 2.0}, {4.0, 7.0}})};
}

namespace detail {

class Tracker {
public:
    Tracker(std::string id, double tol) { r_.id = std::move(id); r_.tolerance = tol; }

    void deviation(double d, const std::string& where) {
        if (std::isnan(d)) d = kInf;
        if (d > r_.max_deviation) r_.max_deviation = d;
        if (d > r_.tolerance && r_.witness.empty()) r_.witness = where + ": deviation " + io::format_number(d);
    }

    void require(bool ok, const std::string& what) {
        if (!ok) {
            failed_ = true;
            if (r_.witness.empty()) r_.witness = what;
        }
    }

    void sample() { ++r_.samples; }

    CaseResult finish() {
        r_.pass = !failed_ && r_.max_deviation <= r_.tolerance;
        return r_;
    }

private:
    CaseResult r_;
    bool failed_ = false;
};

inline std::uint64_t case_seed(std::uint64_t seed, const std::string& id) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : id) { h ^= c; h *= 0x100000001b3ULL; }
    return seed * 0x9e3779b97f4a7c15ULL ^ h;
}

inline double rel(double a, double b) { return relative_gap(a, b); }

inline double matrix_gap(const Element& a, const Element& b) { return (a - b).frobenius(); }

inline std::string sample_tag(int n) { return "sample " + std::to_string(n); }

inline AlgebraRef mixed_algebra() { return make_algebra({2, 3}, {1.0, 0.5}); }

} // namespace detail

using SuiteCase = std::function<CaseResult(SplitMix64&, int)>;

inline std::vector<std::pair<std::string, SuiteCase>> suite_cases() {
    using detail::Tracker;
    using detail::sample_tag;
    std::vector<std::pair<std::string, SuiteCase>> cases;
    auto add = [&](std::string id, SuiteCase f) { cases.emplace_back(std::move(id), std::move(f)); };

    // ---------------------------------------------------------------- algebra
    add("algebra.trace_property", [](SplitMix64& rng, int n) {
        Tracker t("algebra.trace_property", 1e-12);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < n; ++k, t.sample()) {
            const Element x = random_element(alg, rng), y = random_element(alg, rng);
            t.deviation(std::abs(trace(x * y) - trace(y * x)) / (x.operator_norm() * y.operator_norm()), sample_tag(k));
        }
        return t.finish();
    });
    add("algebra.positivity_closure", [](SplitMix64& rng, int n) {
        Tracker t("algebra.positivity_closure", 1e-12);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < n; ++k, t.sample()) {
            const Element x = random_element(alg, rng);
            const Element p = x.adjoint() * x;
            const double nx = x.operator_norm();
            for (const auto& m : p.blocks())
                t.deviation(std::max(0.0, -eigh(m).values(m.rows() - 1)) / (nx * nx), sample_tag(k));
        }
        return t.finish();
    });
    add("algebra.polar_uniqueness", [](SplitMix64& rng, int n) {
        Tracker t("algebra.polar_uniqueness", 1e-9);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < n; ++k, t.sample()) {
            const Element x = random_element(alg, rng);
            const Polar pd = polar_decompose(x);
            const Element ainv = pd.a.map_blocks([](const Matrix& m, std::size_t) -> Matrix { return m.inverse(); });
            t.deviation(detail::matrix_gap(pd.v, x * ainv) / std::max(1.0, pd.v.frobenius()), sample_tag(k) + " v = x a^{-1}");
            t.deviation(detail::matrix_gap(pd.v.adjoint() * pd.v, Element::identity(alg)), sample_tag(k) + " v^* v = 1");
            t.deviation(detail::matrix_gap(pd.a * pd.a, x.adjoint() * x) / std::pow(x.operator_norm(), 2), sample_tag(k) + " a^2 = x^* x");
        }
        return t.finish();
    });
    add("algebra.faithful_trace", [](SplitMix64& rng, int n) {
        Tracker t("algebra.faithful_trace", 0.0);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < n; ++k, t.sample()) {
            const double scale = std::pow(10.0, -rng.integer(0, 12));
            const Element x = (k % 10 == 0 ? 0.0 : scale) * random_element(alg, rng);
            const double q = trace(x.adjoint() * x).real();
            t.require(q >= 0.0, sample_tag(k) + ": tau(x^* x) negative");
            if (q == 0.0) t.require(x.operator_norm() <= 1e-10, sample_tag(k) + ": tau(x^* x) = 0 for nonzero x");
        }
        return t.finish();
    });
    add("algebra.extended_arithmetic", [](SplitMix64& rng, int n) {
        Tracker t("algebra.extended_arithmetic", 0.0);
        t.require(mul_ext(0.0, kInf) == 0.0 && mul_ext(kInf, 0.0) == 0.0, "0 * inf != 0");
        const auto alg = make_algebra({3}, {1.0});
        const auto linf = OrliczFunction::linf();
        for (int k = 0; k < n; ++k, t.sample()) {
            // A contraction with a kernel: linf is 0 on its spectrum, the kernel adds 0 * Phi(0).
            Element x = random_element(alg, rng);
            x = (0.5 / x.operator_norm()) * x * block_diagonal(alg, {{1.0, 1.0, 0.0}});
            t.require(trace_of_function(linf, x) == 0.0, sample_tag(k) + ": tau(linf(|x|)) != 0 for a contraction");
            t.require(step_modular(linf, RearrangementFunction({{2.0, 0.0}}), 1.0) == 0.0, "zero-length infinite step");
        }
        return t.finish();
    });
    add("algebra.spectral_resolution", [](SplitMix64& rng, int n) {
        Tracker t("algebra.spectral_resolution", 1e-10);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < n; ++k, t.sample()) {
            const Element h = random_hermitian(alg, rng);
            const Spectrum sp = spectrum(h);
            Element sum = Element::zero(alg), ident = Element::zero(alg);
            for (std::size_t j = 0; j < sp.values.size(); ++j) {
                sum = sum + Complex(sp.values[j]) * sp.projections[j];
                ident = ident + sp.projections[j];
                t.deviation(detail::matrix_gap(sp.projections[j] * sp.projections[j], sp.projections[j]), sample_tag(k) + " P^2 = P");
            }
            t.deviation(detail::matrix_gap(sum, h) / h.operator_norm(), sample_tag(k) + " sum lambda P = x");
            t.deviation(detail::matrix_gap(ident, Element::identity(alg)), sample_tag(k) + " sum P = 1");
        }
        return t.finish();
    });

    // ---------------------------------------------------------------- modular
    add("modular.gns_dimension", [](SplitMix64& rng, int n) {
        Tracker t("modular.gns_dimension", 0.0);
        const auto alg = make_algebra({2, 3, 1}, {1.0, 0.5, 2.0});
        for (int k = 0; k < n; ++k, t.sample()) {
            const auto ranks = random_ranks(alg, rng);
            const Functional w = random_functional_with_ranks(alg, rng, ranks);
            std::size_t expect = 0;
            for (std::size_t i = 0; i < ranks.size(); ++i) expect += static_cast<std::size_t>(alg->dim(i) * ranks[i]);
            const auto g = gns(w);
            t.require(g.dimension == expect, sample_tag(k) + ": dimension " + std::to_string(g.dimension) +
                                                 " expected " + std::to_string(expect));
        }
        return t.finish();
    });
    add("modular.gns_representation", [](SplitMix64& rng, int n) {
        Tracker t("modular.gns_representation", 1e-10);
        const auto alg = make_algebra({2, 2}, {1.0, 0.5});
        for (int k = 0; k < std::max(1, n / 4); ++k, t.sample()) {
            const Functional w = random_functional_with_ranks(alg, rng, random_ranks(alg, rng));
            const auto g = gns(w);
            const Vector omega = g.cyclic_vector();
            const auto units = Element::matrix_units(alg);
            for (const auto& x : units) {
                t.deviation(std::abs(omega.dot(g.represent(x) * omega) - w(x)), sample_tag(k) + " <Omega, pi(x) Omega>");
                for (const auto& y : units)
                    t.deviation((g.represent(x * y) - g.represent(x) * g.represent(y)).norm(), sample_tag(k) + " pi(xy)");
                t.deviation((g.represent(x.adjoint()) - g.represent(x).adjoint()).norm(), sample_tag(k) + " pi(x^*)");
            }
            const auto d = static_cast<Eigen::Index>(g.dimension);
            t.deviation((g.represent(Element::identity(alg)) - Matrix::Identity(d, d)).norm(), sample_tag(k) + " pi(1)");
            // Cyclicity: the orbit pi(N) Omega spans the GNS space.
            Matrix orbit(d, static_cast<Eigen::Index>(units.size()));
            for (std::size_t j = 0; j < units.size(); ++j) orbit.col(static_cast<Eigen::Index>(j)) = g.represent(units[j]) * omega;
            Eigen::JacobiSVD<Matrix> svd(orbit);
            svd.setThreshold(1e-9);
            t.require(svd.rank() == d, sample_tag(k) + ": Omega is not cyclic");
        }
        return t.finish();
    });
    add("modular.standard_form", [](SplitMix64& rng, int n) {
        Tracker t("modular.standard_form", 1e-12);
        const auto alg = make_algebra({2, 3}, {1.0, 0.5});
        for (int k = 0; k < std::max(1, n / 4); ++k, t.sample()) {
            std::vector<Element> cone;
            for (int j = 0; j < 8; ++j) {
                const Element y = random_element(alg, rng);
                cone.push_back(y.adjoint() * y);
            }
            // Rank-one cone elements along the eigenvectors of a Hermitian probe.
            const Element h = random_hermitian(alg, rng);
            for (std::size_t i = 0; i < h.block_count(); ++i) {
                const auto eig = eigh(h.block(i));
                for (Eigen::Index c = 0; c < eig.vectors.cols(); ++c) {
                    std::vector<Matrix> b = Element::zero(alg).blocks();
                    b[i] = eig.vectors.col(c) * eig.vectors.col(c).adjoint();
                    cone.emplace_back(alg, std::move(b));
                }
            }
            for (const auto& xi : cone) {
                t.require(standard_form::in_cone(xi), sample_tag(k) + ": sampled cone element rejected");
                t.deviation(detail::matrix_gap(standard_form::conjugation(xi), xi), sample_tag(k) + " J xi = xi");
                for (const auto& z : cone)
                    t.deviation(std::max(0.0, -standard_form::inner(xi, z).real()) / (xi.frobenius() * z.frobenius()),
                                sample_tag(k) + " <xi, zeta> >= 0");
            }
            // The Hermitian probe is outside the cone unless positive, and some sampled
            // cone element then detects it.
            const bool positive = standard_form::in_cone(h);
            bool detected = false;
            for (const auto& z : cone)
                if (standard_form::inner(h, z).real() < -1e-12 * h.frobenius() * z.frobenius()) detected = true;
            t.require(positive != detected, sample_tag(k) + ": self-polarity violated");
            const Element x = random_element(alg, rng);
            t.deviation(detail::matrix_gap(standard_form::conjugation(standard_form::conjugation(x)), x), sample_tag(k) + " J^2 = 1");
        }
        return t.finish();
    });
    add("modular.vector_representative", [](SplitMix64& rng, int n) {
        Tracker t("modular.vector_representative", 1e-10);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const Functional phi = random_functional_with_ranks(alg, rng, random_ranks(alg, rng));
            const Element xi = standard_form::vector_representative(phi);
            for (const auto& x : Element::matrix_units(alg))
                t.deviation(std::abs(phi(x) - standard_form::inner(xi, x * xi)), sample_tag(k));
        }
        return t.finish();
    });
    add("modular.order_preservation", [](SplitMix64& rng, int n) {
        Tracker t("modular.order_preservation", 1e-10);
        const auto alg = make_algebra({3}, {1.0});
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const Matrix u = random_unitary(rng, 3);
            Eigen::VectorXd a(3), b(3);
            for (int j = 0; j < 3; ++j) {
                a(j) = rng.uniform(0.0, 1.0);
                b(j) = a(j) + rng.uniform(0.0, 1.0);
            }
            const Functional phi(alg, {Matrix(u * a.cast<Complex>().asDiagonal() * u.adjoint())});
            const Functional psi(alg, {Matrix(u * b.cast<Complex>().asDiagonal() * u.adjoint())});
            const Element diff = standard_form::vector_representative(psi) - standard_form::vector_representative(phi);
            for (int j = 0; j < 6; ++j) {
                const Element y = random_element(alg, rng);
                const Element z = y.adjoint() * y;
                t.deviation(std::max(0.0, -standard_form::inner(diff, z).real()) / z.frobenius(), sample_tag(k));
            }
        }
        return t.finish();
    });
    add("modular.modular_operator", [](SplitMix64& rng, int n) {
        Tracker t("modular.modular_operator", 1e-10);
        const auto alg = make_algebra({2, 2}, {1.0, 0.5});
        for (int k = 0; k < std::max(1, n / 4); ++k, t.sample()) {
            const Functional phi = random_faithful(alg, rng);
            const Element xi = standard_form::vector_representative(phi);
            const auto delta = relative_modular(phi, phi);
            t.deviation(detail::matrix_gap(delta.apply(xi), xi) / xi.frobenius(), sample_tag(k) + " Delta xi(phi) = xi(phi)");
            const Functional omega = random_functional_with_ranks(alg, rng, random_ranks(alg, rng));
            const Matrix m = relative_modular(phi, omega).matrix();
            t.deviation((m - m.adjoint()).norm() / m.norm(), sample_tag(k) + " Delta Hermitian");
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
            t.deviation(std::max(0.0, -es.eigenvalues().minCoeff()) / m.norm(), sample_tag(k) + " Delta >= 0");
        }
        return t.finish();
    });
    add("modular.flow_group_law", [](SplitMix64& rng, int n) {
        Tracker t("modular.flow_group_law", 1e-10);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const Functional phi = random_faithful(alg, rng);
            const Element x = random_element(alg, rng), y = random_element(alg, rng);
            const double s = rng.uniform(-3.0, 3.0), u = rng.uniform(-3.0, 3.0);
            const double nx = x.frobenius();
            t.deviation(detail::matrix_gap(modular_flow(phi, s, modular_flow(phi, u, x)), modular_flow(phi, s + u, x)) / nx, sample_tag(k) + " group law");
            t.deviation(detail::matrix_gap(modular_flow(phi, 0.0, x), x) / nx, sample_tag(k) + " sigma_0");
            t.deviation(detail::matrix_gap(modular_flow(phi, s, x * y), modular_flow(phi, s, x) * modular_flow(phi, s, y)) /
                            (nx * y.frobenius()), sample_tag(k) + " multiplicative");
            t.deviation(detail::matrix_gap(modular_flow(phi, s, x.adjoint()), modular_flow(phi, s, x).adjoint()) / nx, sample_tag(k) + " adjoint");
        }
        return t.finish();
    });
    add("modular.cocycle_unitarity", [](SplitMix64& rng, int n) {
        Tracker t("modular.cocycle_unitarity", 1e-10);
        const auto alg = make_algebra({3}, {1.0});
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const Functional phi = random_faithful(alg, rng), omega = random_faithful(alg, rng);
            const Element u = connes_cocycle(phi, omega, rng.uniform(-5.0, 5.0));
            t.deviation(detail::matrix_gap(u.adjoint() * u, Element::identity(alg)), sample_tag(k));
        }
        return t.finish();
    });
    add("modular.cocycle_chain_rule", [](SplitMix64& rng, int n) {
        Tracker t("modular.cocycle_chain_rule", 1e-10);
        const auto alg = make_algebra({3}, {1.0});
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const Functional phi = random_faithful(alg, rng), omega = random_faithful(alg, rng), psi = random_faithful(alg, rng);
            const double s = rng.uniform(-5.0, 5.0);
            t.deviation(detail::matrix_gap(connes_cocycle(phi, psi, s), connes_cocycle(phi, omega, s) * connes_cocycle(omega, psi, s)),
                        sample_tag(k));
        }
        return t.finish();
    });
    add("modular.cocycle_psi_independence", [](SplitMix64& rng, int n) {
        Tracker t("modular.cocycle_psi_independence", 1e-9);
        const auto alg = make_algebra({3}, {1.0});
        auto it_power = [](const Matrix& m, double s) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
            Eigen::VectorXcd d(es.eigenvalues().size());
            for (Eigen::Index j = 0; j < d.size(); ++j) d(j) = std::polar(1.0, s * std::log(es.eigenvalues()(j)));
            return Matrix(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint());
        };
        for (int k = 0; k < std::max(1, n / 4); ++k, t.sample()) {
            const Functional phi = random_faithful(alg, rng), omega = random_faithful(alg, rng), psi = random_faithful(alg, rng);
            const double s = rng.uniform(-3.0, 3.0);
            const Matrix lhs = it_power(relative_modular(phi, psi).matrix(), s) * it_power(relative_modular(omega, psi).matrix(), -s);
            const Element u = connes_cocycle(phi, omega, s);
            const Matrix rhs = standard_form::operator_matrix(alg, [&](const Element& xi) { return u * xi; });
            t.deviation((lhs - rhs).norm(), sample_tag(k));
        }
        return t.finish();
    });
    add("modular.boundary_condition", [](SplitMix64& rng, int n) {
        Tracker t("modular.boundary_condition", 1e-9);
        const auto alg = make_algebra({3}, {1.0});
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const Functional phi = random_faithful(alg, rng);
            const Functional psi = random_functional_with_ranks(alg, rng, random_ranks(alg, rng));
            t.deviation(boundary_residual(psi, phi, rn_quotient_sqrt(psi, phi)), sample_tag(k));
        }
        return t.finish();
    });

    // ---------------------------------------------------------------- orliczfn
    add("orliczfn.young_inequality", [](SplitMix64&, int) {
        Tracker t("orliczfn.young_inequality", 1e-9);
        for (const auto& phi : registry()) {
            const auto conj = young_conjugate(phi);
            for (int i = 0; i <= 200; ++i)
                for (int j = 0; j <= 200; ++j) {
                    const double x = 0.05 * i, y = 0.05 * j;
                    const double rhs = phi(x) + conj(y);
                    if (rhs == kInf) continue;
                    t.deviation(std::max(0.0, x * y - rhs), phi.name());
                }
            t.sample();
        }
        return t.finish();
    });
    add("orliczfn.biconjugation", [](SplitMix64&, int) {
        Tracker t("orliczfn.biconjugation", 1e-6);
        for (const auto& phi : registry()) {
            if (!check_n_function(phi)) continue;
            const auto conj = young_conjugate(phi);
            for (int j = 1; j <= 40; ++j) {
                const double x = 0.25 * j;
                t.deviation(detail::rel(numerical_conjugate(conj, x).value, phi(x)), phi.name() + " at " + io::format_number(x));
            }
            t.sample();
        }
        return t.finish();
    });
    add("orliczfn.conjugate_shape", [](SplitMix64& rng, int n) {
        Tracker t("orliczfn.conjugate_shape", 1e-9);
        for (const auto& phi : registry()) {
            const auto conj = young_conjugate(phi);
            t.require(conj(0.0) == 0.0, phi.name() + ": conjugate nonzero at 0");
            for (int k = 0; k < n; ++k) {
                const double a = rng.uniform(0.0, 10.0), b = rng.uniform(0.0, 10.0);
                const double lo = std::min(a, b), hi = std::max(a, b);
                const double fl = conj(lo), fh = conj(hi), fm = conj(0.5 * (lo + hi));
                t.require(fl <= fh, phi.name() + ": conjugate decreasing");
                if (fl == kInf || fh == kInf) continue;
                t.deviation(std::max(0.0, fm - 0.5 * (fl + fh)) / std::max(1.0, fh), phi.name() + ": midpoint convexity");
            }
            t.sample();
        }
        return t.finish();
    });
    add("orliczfn.closed_form_conjugate", [](SplitMix64&, int) {
        Tracker t("orliczfn.closed_form_conjugate", 1e-8);
        for (const auto& phi : registry()) {
            const auto conj = young_conjugate(phi);
            for (int j = -48; j <= 48; ++j) {
                const double s = std::pow(10.0, j / 16.0);
                const double exact = conj(s);
                const auto est = numerical_conjugate(phi, s);
                if (exact == kInf || est.value == kInf) {
                    t.require(exact == est.value, phi.name() + ": finiteness differs at " + io::format_number(s));
                    continue;
                }
                // Relative with an absolute floor of 1e-8 * s for values near 0.
                t.deviation(std::abs(est.value - exact) / std::max(std::abs(exact), s), phi.name() + " at " + io::format_number(s));
            }
            t.sample();
        }
        return t.finish();
    });
    add("orliczfn.delta2_declared", [](SplitMix64&, int) {
        Tracker t("orliczfn.delta2_declared", 0.0);
        for (const auto& phi : registry()) {
            for (auto mode : {Delta2Mode::Global, Delta2Mode::Local}) {
                const auto v = check_delta2(phi, mode);
                if (v.declared)
                    t.require(*v.declared == v.holds, phi.name() + ": scan disagrees with declared " +
                                                          (mode == Delta2Mode::Global ? "global" : "local") + " verdict");
            }
            t.sample();
        }
        const auto p2 = check_delta2(OrliczFunction::power(2.0), Delta2Mode::Global);
        t.require(std::abs(p2.lambda - 4.0) <= 1e-12, "power(2): lambda != 4");
        return t.finish();
    });
    add("orliczfn.n_function_declared", [](SplitMix64&, int) {
        Tracker t("orliczfn.n_function_declared", 0.0);
        for (const auto& phi : registry()) {
            if (const auto d = phi.declared_n_function())
                t.require(*d == check_n_function(phi), phi.name() + ": probe disagrees with declared N-function flag");
            t.sample();
        }
        return t.finish();
    });
    add("orliczfn.basic_shape", [](SplitMix64& rng, int n) {
        Tracker t("orliczfn.basic_shape", 1e-12);
        for (const auto& phi : registry()) {
            t.require(phi(0.0) == 0.0, phi.name() + ": Phi(0) != 0");
            for (int k = 0; k < n; ++k) {
                const double a = rng.uniform(0.0, 5.0), b = rng.uniform(0.0, 5.0);
                const double lo = std::min(a, b), hi = std::max(a, b);
                const double fl = phi(lo), fh = phi(hi), fm = phi(0.5 * (lo + hi));
                t.require(fl <= fh, phi.name() + ": decreasing");
                if (fh == kInf) continue;
                t.deviation(std::max(0.0, fm - 0.5 * (fl + fh)) / std::max(1.0, fh), phi.name() + ": midpoint convexity");
                if (phi.is_orlicz() && lo > 0.0) t.require(fl > 0.0, phi.name() + ": vanishes off 0");
            }
            t.sample();
        }
        return t.finish();
    });

    // ---------------------------------------------------------------- trace_orlicz
    add("trace_orlicz.rearrangement_mass", [](SplitMix64& rng, int n) {
        Tracker t("trace_orlicz.rearrangement_mass", 1e-12);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < n; ++k, t.sample()) {
            const auto ranks = random_ranks(alg, rng, true);
            const Element p = support_projection(random_functional_with_ranks(alg, rng, ranks));
            const Element x = random_element(alg, rng) * p;
            double expect = 0.0;
            for (std::size_t i = 0; i < ranks.size(); ++i) expect += alg->weight(i) * ranks[i];
            const auto mu = rearrangement(x);
            t.deviation(std::abs(mu.total_mass() - expect), sample_tag(k));
            for (std::size_t j = 1; j < mu.steps().size(); ++j)
                t.require(mu.steps()[j].value < mu.steps()[j - 1].value, sample_tag(k) + ": steps not strictly decreasing");
        }
        return t.finish();
    });
    add("trace_orlicz.norm_axioms", [](SplitMix64& rng, int n) {
        Tracker t("trace_orlicz.norm_axioms", 1e-9);
        const auto alg = detail::mixed_algebra();
        const auto reg = registry();
        for (int k = 0; k < n; ++k, t.sample()) {
            const Element x = random_element(alg, rng), y = random_element(alg, rng);
            const Complex alpha(rng.normal(), rng.normal());
            for (const auto& phi : reg) {
                const double nx = luxemburg_norm(phi, x), ny = luxemburg_norm(phi, y);
                t.deviation(std::max(0.0, luxemburg_norm(phi, x + y) - nx - ny) / (nx + ny), phi.name() + " triangle, " + sample_tag(k));
                t.deviation(detail::rel(luxemburg_norm(phi, alpha * x), std::abs(alpha) * nx), phi.name() + " homogeneity, " + sample_tag(k));
                t.require(nx > 0.0, phi.name() + ": norm of nonzero element is 0");
            }
        }
        for (const auto& phi : reg) t.require(luxemburg_norm(phi, Element::zero(alg)) == 0.0, phi.name() + ": ||0|| != 0");
        return t.finish();
    });
    add("trace_orlicz.p_norm_collapse", [](SplitMix64& rng, int n) {
        Tracker t("trace_orlicz.p_norm_collapse", 1e-9);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < n; ++k, t.sample()) {
            const Element x = random_element(alg, rng);
            for (double p : {1.0, 1.5, 2.0, 3.0}) {
                const auto a = absolute_value(x);
                const double tp = trace(spectral_calculus(a, [p](double l) { return std::pow(std::max(l, 0.0), p); })).real();
                t.deviation(detail::rel(luxemburg_norm(OrliczFunction::power(p), x), std::pow(tp, 1.0 / p)),
                            "p=" + io::format_number(p) + ", " + sample_tag(k));
            }
        }
        return t.finish();
    });
    add("trace_orlicz.linf_operator_norm", [](SplitMix64& rng, int n) {
        Tracker t("trace_orlicz.linf_operator_norm", 1e-9);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < n; ++k, t.sample()) {
            const Element x = random_element(alg, rng);
            t.deviation(detail::rel(luxemburg_norm(OrliczFunction::linf(), x), x.operator_norm()), sample_tag(k));
        }
        return t.finish();
    });
    add("trace_orlicz.symmetry", [](SplitMix64& rng, int n) {
        Tracker t("trace_orlicz.symmetry", 1e-10);
        const auto alg = detail::mixed_algebra();
        const auto reg = registry();
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const Element x = random_element(alg, rng);
            for (const auto& phi : reg) {
                const double nx = luxemburg_norm(phi, x);
                t.deviation(detail::rel(nx, luxemburg_norm(phi, x.adjoint())), phi.name() + " x^*, " + sample_tag(k));
                t.deviation(detail::rel(nx, luxemburg_norm(phi, absolute_value(x))), phi.name() + " |x|, " + sample_tag(k));
            }
        }
        return t.finish();
    });
    add("trace_orlicz.unitary_invariance", [](SplitMix64& rng, int n) {
        Tracker t("trace_orlicz.unitary_invariance", 1e-10);
        const auto alg = detail::mixed_algebra();
        const auto reg = registry();
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const Element x = random_element(alg, rng), u = random_unitary_element(alg, rng);
            for (const auto& phi : reg)
                t.deviation(detail::rel(luxemburg_norm(phi, x), luxemburg_norm(phi, u * x * u.adjoint())), phi.name() + ", " + sample_tag(k));
        }
        return t.finish();
    });
    add("trace_orlicz.fack_kosaki", [](SplitMix64& rng, int n) {
        Tracker t("trace_orlicz.fack_kosaki", 1e-10);
        const auto alg = detail::mixed_algebra();
        const auto reg = registry();
        for (int k = 0; k < n; ++k, t.sample()) {
            const Element x = (1.0 / rng.uniform(0.5, 4.0)) * random_element(alg, rng);
            for (const auto& phi : reg) t.deviation(fk_integral(phi, x).relative_gap, phi.name() + ", " + sample_tag(k));
        }
        return t.finish();
    });
    add("trace_orlicz.commutative_holder", [](SplitMix64& rng, int n) {
        // Sharp form: Luxemburg norm against the Amemiya norm of the conjugate.
        Tracker t("trace_orlicz.commutative_holder", 1e-9);
        const auto alg = make_algebra({4, 1}, {1.0, 0.5});
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            std::vector<double> a, b;
            for (int j = 0; j < 4; ++j) { a.push_back(rng.uniform(0.0, 2.0)); b.push_back(rng.uniform(0.0, 2.0)); }
            const Element x = block_diagonal(alg, {{a[0], a[1], a[2], a[3]}, {rng.uniform(0.0, 2.0)}});
            const Element y = block_diagonal(alg, {{b[0], b[1], b[2], b[3]}, {rng.uniform(0.0, 2.0)}});
            const double lhs = trace(x * y).real();
            for (const auto& phi : registry()) {
                if (!check_n_function(phi)) continue;
                const double rhs = luxemburg_norm(phi, x) * amemiya_norm(young_conjugate(phi), y);
                t.deviation(std::max(0.0, lhs - rhs - 1e-9) / std::max(1.0, lhs), phi.name() + ", " + sample_tag(k));
                const double dual = luxemburg_norm(phi, x) * luxemburg_norm(young_conjugate(phi), y);
                t.require(lhs <= 2.0 * dual + 1e-9, phi.name() + ": Luxemburg-Luxemburg bound with constant 2 failed");
            }
        }
        return t.finish();
    });
    add("trace_orlicz.membership", [](SplitMix64& rng, int n) {
        Tracker t("trace_orlicz.membership", 1e-12);
        const auto alg = detail::mixed_algebra();
        const auto linf = OrliczFunction::linf();
        for (int k = 0; k < n; ++k, t.sample()) {
            const Element x = rng.uniform(0.2, 3.0) * random_element(alg, rng);
            for (const auto& phi : registry()) {
                const auto m = membership(phi, x);
                if (phi.finite_limit() == kInf)
                    t.require(m.orlicz_class && m.kunze_space && m.mtkr_space, phi.name() + ": finite-valued but a flag fails");
                t.require(m.kunze_space, phi.name() + ": not in Kunze space");
                t.require(!m.mtkr_space || m.orlicz_class, phi.name() + ": flag ordering violated");
                t.deviation(detail::rel(e_space_gauge(phi, x).norm, luxemburg_norm(phi, x)), phi.name() + ": E gauge");
            }
            const auto m = membership(linf, x);
            t.require(m.orlicz_class == (x.operator_norm() <= 1.0), sample_tag(k) + ": linf Orlicz class flag");
        }
        return t.finish();
    });
    add("trace_orlicz.dual_pairing", [](SplitMix64& rng, int n) {
        Tracker t("trace_orlicz.dual_pairing", 1e-12);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < n; ++k, t.sample()) {
            const Element x = random_element(alg, rng), y = random_element(alg, rng);
            const double s = x.operator_norm() * y.operator_norm();
            t.deviation(std::abs(dual_pairing(x, y) - dual_pairing(y, x)) / s, sample_tag(k) + " symmetric");
            t.deviation(std::abs(dual_pairing(x, Element::identity(alg)) - trace(x)) / x.operator_norm(), sample_tag(k) + " identity");
        }
        return t.finish();
    });

    // ---------------------------------------------------------------- core_model
    add("core_model.scaling_law", [](SplitMix64& rng, int n) {
        Tracker t("core_model.scaling_law", 1e-14);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < std::max(1, n / 5); ++k, t.sample()) {
            const CoreElement x = random_positive_core_element(alg, rng, 3);
            const double base = canonical_trace(x);
            for (double s : {std::log(2.0), -std::log(2.0), 1.0, -1.0, 3.0}) {
                t.deviation(detail::rel(canonical_trace(dual_action(s, x)), std::exp(-s) * base), sample_tag(k));
                const CoreElement back = dual_action(-s, dual_action(s, x));
                t.require(back.shifts() == x.shifts(), sample_tag(k) + ": group law not exact");
            }
        }
        return t.finish();
    });
    add("core_model.traciality", [](SplitMix64& rng, int n) {
        Tracker t("core_model.traciality", 1e-10);
        const auto alg = detail::mixed_algebra();
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const CoreElement x = random_core_element(alg, rng, 3), y = random_core_element(alg, rng, 3);
            const double scale = std::sqrt(canonical_trace(x.adjoint() * x) * canonical_trace(y.adjoint() * y));
            t.deviation(std::abs(canonical_trace_linear(x * y) - canonical_trace_linear(y * x)) / std::max(scale, 1e-300), sample_tag(k));
            t.require(x.is_zero() || canonical_trace(x.adjoint() * x) > 0.0, sample_tag(k) + ": tau~ not faithful");
        }
        return t.finish();
    });
    add("core_model.dual_action_modular", [](SplitMix64& rng, int n) {
        Tracker t("core_model.dual_action_modular", 1e-13);
        const auto alg = detail::mixed_algebra();
        const auto reg = registry();
        for (int k = 0; k < std::max(1, n / 5); ++k, t.sample()) {
            const CoreElement x = random_core_element(alg, rng, 3);
            const double s = rng.uniform(-2.0, 2.0), lambda = rng.uniform(0.5, 20.0);
            for (const auto& phi : reg) {
                const double m0 = core_modular(phi, x, lambda), m1 = core_modular(phi, dual_action(s, x), lambda);
                if (m0 == kInf || m1 == kInf) {
                    t.require(m0 == m1, phi.name() + ": finiteness changed under the dual action");
                    continue;
                }
                t.deviation(detail::rel(m1, std::exp(-s) * m0), phi.name() + ", " + sample_tag(k));
            }
        }
        return t.finish();
    });
    add("core_model.embedding_isometry", [](SplitMix64& rng, int n) {
        Tracker t("core_model.embedding_isometry", 1e-10);
        const auto alg = detail::mixed_algebra();
        const auto reg = registry();
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const Element x = random_element(alg, rng);
            for (const auto& phi : reg)
                t.deviation(detail::rel(core_luxemburg_norm(phi, embed(x)), luxemburg_norm(phi, x)), phi.name() + ", " + sample_tag(k));
        }
        return t.finish();
    });
    add("core_model.refinement_associativity", [](SplitMix64& rng, int n) {
        Tracker t("core_model.refinement_associativity", 1e-12);
        const auto alg = detail::mixed_algebra();
        auto gap = [](const CoreElement& a, const CoreElement& b) {
            const CoreElement d = a - b;
            double worst = 0.0, scale = 1.0;
            for (const auto& p : d.pieces()) worst = std::max(worst, p.element.frobenius());
            for (const auto& p : a.pieces()) scale = std::max(scale, p.element.frobenius());
            return worst / scale;
        };
        for (int k = 0; k < std::max(1, n / 2); ++k, t.sample()) {
            const CoreElement x = random_core_element(alg, rng, 3), y = random_core_element(alg, rng, 3),
                              z = random_core_element(alg, rng, 3);
            t.deviation(gap((x * y) * z, x * (y * z)), sample_tag(k) + " product");
            t.deviation(gap((x + y) + z, x + (y + z)), sample_tag(k) + " sum");
        }
        return t.finish();
    });

    // ---------------------------------------------------------------- functorial
    add("functorial.functor_laws", [](SplitMix64& rng, int n) {
        Tracker t("functorial.functor_laws", 1e-12);
        const auto alg = make_algebra({2, 2, 3}, {1.0, 1.0, 0.5});
        for (int k = 0; k < n; ++k, t.sample()) {
            const Isomorphism s1 = random_isomorphism(alg, rng), s2 = random_isomorphism(alg, rng);
            const Element x = random_element(alg, rng), y = random_element(alg, rng);
            const double nx = x.frobenius();
            t.require(detail::matrix_gap(Isomorphism::identity(alg)(x), x) == 0.0, sample_tag(k) + ": identity moved x");
            t.deviation(detail::matrix_gap(compose(s2, s1)(x), s2(s1(x))) / nx, sample_tag(k) + " composition");
            t.deviation(detail::matrix_gap(s1(x * y), s1(x) * s1(y)) / (nx * y.frobenius()), sample_tag(k) + " multiplicative");
            t.deviation(detail::matrix_gap(s1(x.adjoint()), s1(x).adjoint()) / nx, sample_tag(k) + " adjoint");
            t.deviation(detail::matrix_gap(s1(Element::identity(alg)), Element::identity(alg)), sample_tag(k) + " unital");
        }
        return t.finish();
    });
    add("functorial.lift_covariance", [](SplitMix64& rng, int n) {
        Tracker t("functorial.lift_covariance", 1e-12);
        const auto alg = make_algebra({2, 2}, {1.0, 1.0});
        for (int k = 0; k < std::max(1, n / 5); ++k, t.sample()) {
            const Isomorphism s = random_isomorphism(alg, rng);
            const CoreElement x = random_positive_core_element(alg, rng, 3);
            const double shift = rng.uniform(-2.0, 2.0);
            const CoreElement a = lift_to_core(s, dual_action(shift, x)), b = dual_action(shift, lift_to_core(s, x));
            bool same = a.shifts() == b.shifts() && a.pieces().size() == b.pieces().size();
            for (std::size_t j = 0; same && j < a.pieces().size(); ++j)
                same = a.pieces()[j].start == b.pieces()[j].start && a.pieces()[j].end == b.pieces()[j].end &&
                       (a.pieces()[j].element.block(0) - b.pieces()[j].element.block(0)).norm() == 0.0;
            t.require(same, sample_tag(k) + ": lift does not commute with the dual action");
            t.deviation(detail::rel(canonical_trace(lift_to_core(s, x)), canonical_trace(x)), sample_tag(k) + " tau~");
        }
        const auto skew = make_algebra({2, 2}, {1.0, 2.0});
        bool rejected = false;
        try {
            lift_to_core(Isomorphism(skew, skew, {1, 0}, {Matrix::Identity(2, 2), Matrix::Identity(2, 2)}), embed(Element::identity(skew)));
        } catch (const ValidationError&) {
            rejected = true;
        }
        t.require(rejected, "non-trace-preserving isomorphism was lifted");
        return t.finish();
    });
    add("functorial.norm_isometry", [](SplitMix64& rng, int n) {
        Tracker t("functorial.norm_isometry", kIsometryTol);
        for (const auto& alg : {make_algebra({2, 2}, {1.0, 1.0}), make_algebra({2, 3, 2}, {1.0, 0.5, 1.0})}) {
            for (const auto& phi : registry()) {
                const Isomorphism s = random_isomorphism(alg, rng);
                const auto rep = verify_isometry(s, phi, std::max(1, n / 25), rng);
                t.deviation(std::max(rep.max_base_deviation, rep.max_core_deviation), phi.name() + ": " + rep.witness);
                t.require(rep.rearrangements_equal, phi.name() + ": rearrangement changed; " + rep.witness);
                t.sample();
            }
        }
        return t.finish();
    });

    std::sort(cases.begin(), cases.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return cases;
}

struct SuiteReport {
    std::vector<CaseResult> cases;
    bool pass = true;
};

/// Runs every case whose id starts with `filter` (all cases for an empty filter).
inline SuiteReport run_suite(std::uint64_t seed, int samples, const std::string& filter = "") {
    SuiteReport rep;
    for (const auto& [id, body] : suite_cases()) {
        if (id.rfind(filter, 0) != 0) continue;
        SplitMix64 rng(detail::case_seed(seed, id));
        CaseResult r = body(rng, samples);
        rep.pass = rep.pass && r.pass;
        rep.cases.push_back(std::move(r));
    }
    return rep;
}

} // namespace ncorlicz
