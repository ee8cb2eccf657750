#pragma once

// GNS representations, the Hilbert-Schmidt standard form, relative modular
// operators, modular flows and Connes cocycles on finite-dimensional algebras.
//
// Standard form: H = N with <xi, zeta> = tau(xi^* zeta), left action by
// multiplication, J xi = xi^*, cone = positive elements. A positive
// functional phi with density rho_phi is represented by xi(phi) = rho_phi^{1/2},
// and Delta_{phi,omega} xi = rho_phi xi rho_omega^{-1} with the inverse taken on
// supp(rho_omega). Powers rho^{it} vanish on ker(rho), so rho^{i 0} = supp(rho).

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"

namespace ncorlicz {

namespace detail {

// Largest eigenvalue over all blocks of a positive density.
inline double density_scale(const Element& rho) {
    double largest = 0.0;
    for (const auto& m : rho.blocks()) largest = std::max(largest, eigh(m).values(0));
    return largest;
}

// g(lambda) on the support of rho (global null threshold), 0 on its kernel.
template <class G>
Element density_function(const Element& rho, G&& g) {
    const double largest = density_scale(rho);
    return rho.map_blocks([&](const Matrix& m, std::size_t) -> Matrix {
        return apply_function(eigh(m), [&](double lambda) -> Complex {
            if (is_null_eigenvalue(lambda, largest)) return 0.0;
            return Complex(g(lambda));
        });
    });
}

inline void require_positive(const Functional& phi, const char* where) {
    if (!phi.is_positive()) throw ValidationError(std::string(where) + ": functional is not positive");
}

inline void require_faithful(const Functional& phi, const char* where, const char* hint = "") {
    if (!phi.is_faithful())
        throw ValidationError(std::string(where) + ": functional is not faithful" + hint);
}

} // namespace detail

/// rho^{it} with the kernel mapped to 0.
inline Element density_it(const Functional& phi, double t) {
    return detail::density_function(phi.density(), [t](double l) { return std::polar(1.0, t * std::log(l)); });
}

/// rho^{p} for real p on supp(rho) (p < 0 gives the Moore-Penrose power).
inline Element density_power(const Functional& phi, double p) {
    return detail::density_function(phi.density(), [p](double l) { return Complex(std::pow(l, p), 0.0); });
}

// ---------------------------------------------------------------------------
// GNS

struct GNSData {
    AlgebraRef algebra;
    Functional state;
    std::vector<Element> basis; // orthonormal in <a, b> = omega(a^* b), modulo the Gel'fand ideal
    std::size_t dimension = 0;

    /// Coordinates of [x]_omega.
    Vector embed(const Element& x) const {
        Vector v(static_cast<Eigen::Index>(dimension));
        for (std::size_t k = 0; k < dimension; ++k)
            v(static_cast<Eigen::Index>(k)) = state(basis[k].adjoint() * x);
        return v;
    }

    /// pi(x)_{kl} = <b_k, [x b_l]>.
    Matrix represent(const Element& x) const {
        const auto d = static_cast<Eigen::Index>(dimension);
        Matrix m(d, d);
        for (Eigen::Index k = 0; k < d; ++k)
            for (Eigen::Index l = 0; l < d; ++l)
                m(k, l) = state(basis[static_cast<std::size_t>(k)].adjoint() * x * basis[static_cast<std::size_t>(l)]);
        return m;
    }

    Vector cyclic_vector() const { return embed(Element::identity(algebra)); }
};

inline constexpr double kGnsPivotTol = 1e-11;

/// Gram-Schmidt over matrix units in the semi-inner product omega(a^* b); units whose
/// residual falls below the pivot threshold lie in the Gel'fand ideal and are dropped.
inline GNSData gns(const Functional& omega) {
    detail::require_positive(omega, "gns");
    const auto& alg = omega.algebra();
    double ref = 0.0;
    for (std::size_t i = 0; i < alg->block_count(); ++i)
        ref = std::max(ref, alg->weight(i) * eigh(omega.block(i)).values(0));
    if (!(ref > 0.0)) throw ValidationError("gns: functional is zero");

    GNSData g{alg, omega, {}, 0};
    auto inner = [&](const Element& a, const Element& b) { return omega(a.adjoint() * b); };
    for (const auto& unit : Element::matrix_units(alg)) {
        Element r = unit;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : g.basis) r = r - inner(b, r) * b;
        const double n2 = inner(r, r).real();
        if (n2 <= kGnsPivotTol * ref) continue;
        g.basis.push_back((1.0 / std::sqrt(n2)) * r);
    }
    g.dimension = g.basis.size();
    return g;
}

// ---------------------------------------------------------------------------
// Standard form

namespace standard_form {

inline Complex inner(const Element& xi, const Element& zeta) {
    require_same_algebra(xi.algebra(), zeta.algebra(), "standard_form::inner");
    Complex s = 0.0;
    for (std::size_t i = 0; i < xi.block_count(); ++i)
        s += xi.algebra()->weight(i) * (xi.block(i).adjoint() * zeta.block(i)).trace();
    return s;
}

inline Element conjugation(const Element& xi) { return xi.adjoint(); }

inline Element left_action(const Element& x, const Element& xi) { return x * xi; }

inline bool in_cone(const Element& xi, double rel_tol = 1e-12) {
    if (!is_hermitian(xi, 1e-12)) return false;
    const double scale = std::max(xi.frobenius(), 1e-300);
    for (const auto& m : xi.blocks())
        if (eigh(m).values(m.rows() - 1) < -rel_tol * scale) return false;
    return true;
}

/// xi(phi) = rho_phi^{1/2}, so that phi(x) = <xi(phi), x xi(phi)>.
inline Element vector_representative(const Functional& phi) {
    detail::require_positive(phi, "vector_representative");
    return density_power(phi, 0.5);
}

/// Orthonormal basis e^{(i)}_{jk} / sqrt(c_i) of H, in matrix-unit order.
inline std::vector<Element> orthonormal_basis(const AlgebraRef& alg) {
    std::vector<Element> out;
    for (std::size_t i = 0; i < alg->block_count(); ++i)
        for (int j = 0; j < alg->dim(i); ++j)
            for (int k = 0; k < alg->dim(i); ++k)
                out.push_back((1.0 / std::sqrt(alg->weight(i))) * Element::matrix_unit(alg, i, j, k));
    return out;
}

/// Matrix of a linear map H -> H in the orthonormal basis.
template <class Map>
Matrix operator_matrix(const AlgebraRef& alg, Map&& map) {
    const auto basis = orthonormal_basis(alg);
    const auto d = static_cast<Eigen::Index>(basis.size());
    Matrix m(d, d);
    for (Eigen::Index l = 0; l < d; ++l) {
        const Element image = map(basis[static_cast<std::size_t>(l)]);
        for (Eigen::Index k = 0; k < d; ++k) m(k, l) = inner(basis[static_cast<std::size_t>(k)], image);
    }
    return m;
}

} // namespace standard_form

// ---------------------------------------------------------------------------
// Relative modular operator

/// Delta_{phi,omega} = L_{rho_phi} R_{rho_omega}^{-1}, supported on supp(phi) H supp(omega).
class ModularOperator {
public:
    ModularOperator(Functional phi, Functional omega) : phi_(std::move(phi)), omega_(std::move(omega)) {
        require_same_algebra(phi_.algebra(), omega_.algebra(), "relative_modular");
        detail::require_positive(phi_, "relative_modular");
        detail::require_positive(omega_, "relative_modular");
        right_inverse_ = density_power(omega_, -1.0);
        left_support_ = support_projection(phi_);
        right_support_ = support_projection(omega_);
    }

    const Element& left_density() const { return phi_.density(); }
    const Element& right_pseudo_inverse() const { return right_inverse_; }
    const Element& left_support() const { return left_support_; }
    const Element& right_support() const { return right_support_; }

    Element apply(const Element& xi) const { return phi_.density() * xi * right_inverse_; }

    /// Delta^{it} xi = rho_phi^{it} xi rho_omega^{-it}.
    Element apply_it(double t, const Element& xi) const { return density_it(phi_, t) * xi * density_it(omega_, -t); }

    /// Projection onto the support subspace: xi |-> P_phi xi P_omega.
    Element support_project(const Element& xi) const { return left_support_ * xi * right_support_; }

    Matrix matrix() const {
        return standard_form::operator_matrix(phi_.algebra(), [&](const Element& xi) { return apply(xi); });
    }

private:
    Functional phi_;
    Functional omega_;
    Element right_inverse_;
    Element left_support_;
    Element right_support_;
};

inline ModularOperator relative_modular(const Functional& phi, const Functional& omega) {
    return ModularOperator(phi, omega);
}

/// sigma^phi_t(x) = rho^{it} x rho^{-it}.
inline Element modular_flow(const Functional& phi, double t, const Element& x) {
    detail::require_faithful(phi, "modular_flow", "; reduce to its support first");
    require_same_algebra(phi.algebra(), x.algebra(), "modular_flow");
    return density_it(phi, t) * x * density_it(phi, -t);
}

/// [D phi : D omega]_t = rho_phi^{it} rho_omega^{-it}.
inline Element connes_cocycle(const Functional& phi, const Functional& omega, double t) {
    require_same_algebra(phi.algebra(), omega.algebra(), "connes_cocycle");
    detail::require_positive(phi, "connes_cocycle");
    detail::require_faithful(omega, "connes_cocycle");
    return density_it(phi, t) * density_it(omega, -t);
}

/// h^{1/2} = rho_psi^{1/2} rho_phi^{-1/2}, square root of the Radon-Nikodym quotient
/// satisfying psi(x) = phi(h^{1/2 *} x h^{1/2}). Requires supp(psi) <= supp(phi).
inline Element rn_quotient_sqrt(const Functional& psi, const Functional& phi) {
    require_same_algebra(psi.algebra(), phi.algebra(), "rn_quotient_sqrt");
    detail::require_positive(psi, "rn_quotient_sqrt");
    detail::require_positive(phi, "rn_quotient_sqrt");
    const Element q = Element::identity(phi.algebra()) - support_projection(phi);
    const Element leak = q * psi.density() * q;
    const double scale = std::max(detail::density_scale(psi.density()), 1e-300);
    for (std::size_t i = 0; i < leak.block_count(); ++i) {
        const auto eig = eigh(leak.block(i));
        if (eig.values(0) > 1e-10 * scale) {
            std::ostringstream os;
            os << "rn_quotient_sqrt: supp(psi) is not below supp(phi); block " << i
               << " eigenvector [";
            for (Eigen::Index k = 0; k < eig.vectors.rows(); ++k)
                os << (k ? ", " : "") << eig.vectors(k, 0).real() << (eig.vectors(k, 0).imag() >= 0 ? "+" : "")
                   << eig.vectors(k, 0).imag() << "i";
            os << "] carries psi-mass " << eig.values(0) << " outside supp(phi)";
            throw ValidationError(os.str());
        }
    }
    return density_power(psi, 0.5) * density_power(phi, -0.5);
}

/// max over matrix units |psi(x) - phi(h^* x h)|.
inline double boundary_residual(const Functional& psi, const Functional& phi, const Element& h) {
    double worst = 0.0;
    for (const auto& x : Element::matrix_units(phi.algebra()))
        worst = std::max(worst, std::abs(psi(x) - phi(h.adjoint() * x * h)));
    return worst;
}

} // namespace ncorlicz
