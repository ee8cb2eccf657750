// Walk through the main objects on M_2 (+) M_1 with weights (1, 1/2).

#include <cstdio>

#include "ncorlicz/ncorlicz.hpp"

using namespace ncorlicz;

int main() {
    const auto alg = make_algebra({2, 1}, {1.0, 0.5});
    const Element x = block_diagonal(alg, {{1.0, 3.0}, {2.0}});

    std::printf("rearrangement of diag(1,3) + (2):\n");
    const auto mu = rearrangement(x);
    for (const auto& s : mu.steps()) std::printf("  value %g on length %g\n", s.value, s.length);

    for (const auto& phi : {OrliczFunction::power(1.0), OrliczFunction::power(2.0), OrliczFunction::linf(),
                            OrliczFunction::cosh1()}) {
        const auto r = luxemburg_report(phi, x);
        std::printf("||x||_%-12s = %.15g  (%d modular evaluations)\n", phi.name().c_str(), r.norm, r.iterations);
    }

    // The core slice x (x) 1_[0, inf) has the same norm; translating it by ln 2 halves tau~.
    const CoreElement cx = embed(x.adjoint() * x);
    std::printf("tau~(x^*x (x) 1_[0,inf)) = %.15g, after sigma~_{ln 2}: %.15g\n", canonical_trace(cx),
                canonical_trace(dual_action(std::log(2.0), cx)));

    const auto cosh1 = OrliczFunction::cosh1();
    const auto conj = young_conjugate(cosh1);
    const auto est = numerical_conjugate(cosh1, 2.0);
    std::printf("conjugate of cosh1 at 2: closed form %.15g, numerical %.15g (+%.1e)\n", conj(2.0), est.value,
                est.error_bound);

    SplitMix64 rng(7);
    const auto m3 = make_algebra({3}, {1.0});
    const Functional phi = random_faithful(m3, rng), omega = random_faithful(m3, rng);
    const Element u = connes_cocycle(phi, omega, 0.5);
    std::printf("||u^*u - 1|| for [D phi : D omega]_0.5 = %.3e\n", (u.adjoint() * u - Element::identity(m3)).frobenius());

    const Functional w = random_functional_with_ranks(alg, rng, {1, 1});
    std::printf("GNS dimension for ranks (1, 1): %zu\n", gns(w).dimension);
}
