#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ncorlicz/algebra.hpp"
#include "ncorlicz/sampling.hpp"

using namespace ncorlicz;

namespace {

Matrix diag(std::initializer_list<double> v) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) d(k++) = x;
    return d.cast<Complex>().asDiagonal();
}

double gap(const Element& a, const Element& b) { return (a - b).frobenius(); }

} // namespace

TEST(AlgebraDescriptor, TraceOfIdentity) {
    EXPECT_DOUBLE_EQ(make_algebra({2}, {1.0})->trace_of_identity(), 2.0);
    EXPECT_DOUBLE_EQ(make_algebra({2, 1}, {1.0, 2.0})->trace_of_identity(), 4.0);
    const auto a = make_algebra({3, 3}, {0.5, 0.5});
    // Elementwise oracle: sum of weighted diagonal entries of the identity.
    double s = 0.0;
    for (std::size_t i = 0; i < a->block_count(); ++i)
        for (int j = 0; j < a->dim(i); ++j) s += a->weight(i);
    EXPECT_DOUBLE_EQ(a->trace_of_identity(), s);
    EXPECT_DOUBLE_EQ(s, 3.0);
}

TEST(AlgebraDescriptor, RejectsInvalid) {
    EXPECT_THROW(make_algebra({}, {}), ValidationError);
    EXPECT_THROW(make_algebra({2}, {1.0, 1.0}), ValidationError);
    EXPECT_THROW(make_algebra({0}, {1.0}), ValidationError);
    EXPECT_THROW(make_algebra({2}, {0.0}), ValidationError);
    EXPECT_THROW(make_algebra({2}, {-1.0}), ValidationError);
    EXPECT_THROW(make_algebra({2}, {std::numeric_limits<double>::infinity()}), ValidationError);
}

TEST(Element, ShapeMismatchRejected) {
    const auto a = make_algebra({2, 1}, {1.0, 1.0});
    EXPECT_THROW(Element(a, {Matrix::Zero(2, 2)}), ValidationError);
    EXPECT_THROW(Element(a, {Matrix::Zero(2, 2), Matrix::Zero(2, 2)}), ValidationError);
    const auto b = make_algebra({2, 1}, {1.0, 2.0});
    EXPECT_THROW(Element::identity(a) + Element::identity(b), ValidationError);
}

TEST(Element, AdjointInvolutionAndProductRule) {
    SplitMix64 rng(1);
    const auto a = make_algebra({2, 3}, {1.0, 0.5});
    for (int k = 0; k < 20; ++k) {
        const Element x = random_element(a, rng), y = random_element(a, rng);
        EXPECT_EQ(gap(x.adjoint().adjoint(), x), 0.0);
        EXPECT_LE(gap((x * y).adjoint(), y.adjoint() * x.adjoint()), 1e-12 * x.frobenius() * y.frobenius());
    }
}

TEST(Trace, IdentityAndTraciality) {
    const auto a = make_algebra({2, 1}, {1.0, 2.0});
    EXPECT_NEAR(std::abs(trace(Element::identity(a)) - 4.0), 0.0, 1e-15);
    SplitMix64 rng(2);
    const auto b = make_algebra({2, 3}, {1.0, 0.5});
    for (int k = 0; k < 20; ++k) {
        const Element x = random_element(b, rng), y = random_element(b, rng), u = random_unitary_element(b, rng);
        EXPECT_LE(std::abs(trace(x * y) - trace(y * x)), 1e-12 * x.operator_norm() * y.operator_norm());
        EXPECT_LE(std::abs(trace(u * x * u.adjoint()) - trace(x)), 1e-12 * x.frobenius());
        // Direct oracle from the block entries.
        Complex s = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < x.block(i).rows(); ++j) s += b->weight(i) * x.block(i)(j, j);
        EXPECT_LE(std::abs(trace(x) - s), 1e-14 * std::abs(s) + 1e-15);
    }
}

TEST(Eigensolver, MatchesEigenOracle) {
    SplitMix64 rng(3);
    for (int n : {1, 2, 3, 5, 8}) {
        for (int k = 0; k < 10; ++k) {
            Matrix m = random_matrix(rng, n, n);
            m = (0.5 * (m + m.adjoint())).eval();
            const auto mine = eigh(m);
            Eigen::SelfAdjointEigenSolver<Matrix> ref(m);
            Eigen::VectorXd r = ref.eigenvalues().reverse();
            EXPECT_LE((mine.values - r).norm(), 1e-12 * m.norm()) << "n=" << n;
            const Matrix rec = mine.vectors * mine.values.cast<Complex>().asDiagonal() * mine.vectors.adjoint();
            EXPECT_LE((rec - m).norm(), 1e-12 * m.norm());
            EXPECT_LE((mine.vectors.adjoint() * mine.vectors - Matrix::Identity(n, n)).norm(), 1e-12);
        }
    }
}

TEST(Eigensolver, Deterministic) {
    SplitMix64 rng(4);
    Matrix m = random_matrix(rng, 4, 4);
    m = (m + m.adjoint()).eval();
    const auto a = eigh(m), b = eigh(m);
    EXPECT_EQ((a.vectors - b.vectors).norm(), 0.0);
    EXPECT_EQ((a.values - b.values).norm(), 0.0);
}

TEST(SpectralCalculus, Examples) {
    const auto a = make_algebra({2}, {1.0});
    const Element x(a, {diag({1.0, 4.0})});
    const Element r = spectral_calculus(x, [](double t) { return std::sqrt(t); });
    EXPECT_LE(gap(r, Element(a, {diag({1.0, 2.0})})), 1e-14);

    SplitMix64 rng(5);
    const auto b = make_algebra({2, 3}, {1.0, 0.5});
    for (int k = 0; k < 10; ++k) {
        const Element h = random_hermitian(b, rng);
        EXPECT_LE(gap(spectral_calculus(h, [](double t) { return t; }), h), 1e-10 * h.operator_norm());
        EXPECT_LE(gap(spectral_calculus(h, [](double t) { return t * t; }), h * h), 1e-10 * h.operator_norm() * h.operator_norm());
    }
}

TEST(SpectralCalculus, Errors) {
    const auto a = make_algebra({2}, {1.0});
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    EXPECT_THROW(spectral_calculus(Element(a, {m}), [](double t) { return t; }), ValidationError);
    const Element neg(a, {diag({-1.0, 2.0})});
    try {
        spectral_calculus(neg, [](double t) { return std::sqrt(t); });
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("-1"), std::string::npos) << e.what();
    }
}

TEST(Spectrum, ProjectionsResolveIdentity) {
    SplitMix64 rng(6);
    const auto b = make_algebra({2, 3}, {1.0, 0.5});
    const Element h = random_hermitian(b, rng);
    const Spectrum sp = spectrum(h);
    Element sum = Element::zero(b), rec = Element::zero(b);
    for (std::size_t k = 0; k < sp.values.size(); ++k) {
        const auto& p = sp.projections[k];
        EXPECT_LE(gap(p * p, p), 1e-12);
        EXPECT_LE(gap(p.adjoint(), p), 1e-12);
        sum = sum + p;
        rec = rec + Complex(sp.values[k]) * p;
    }
    EXPECT_LE(gap(sum, Element::identity(b)), 1e-12);
    EXPECT_LE(gap(rec, h), 1e-10 * h.operator_norm());
}

TEST(Spectrum, DegenerateEigenvaluesMerge) {
    const auto a = make_algebra({3, 1}, {1.0, 1.0});
    const Element x(a, {diag({2.0, 2.0 + 1e-12, 5.0}), diag({2.0})});
    const Spectrum sp = spectrum(x);
    ASSERT_EQ(sp.values.size(), 2u);
    EXPECT_NEAR(sp.values[0], 5.0, 1e-15);
    EXPECT_NEAR(trace(sp.projections[1]).real(), 3.0, 1e-12);
}

TEST(Polar, Examples) {
    const auto a = make_algebra({2}, {1.0});
    const Polar p = polar_decompose(Element(a, {diag({-2.0, 3.0})}));
    EXPECT_LE(gap(p.v, Element(a, {diag({-1.0, 1.0})})), 1e-14);
    EXPECT_LE(gap(p.a, Element(a, {diag({2.0, 3.0})})), 1e-14);

    const Polar z = polar_decompose(Element::zero(a));
    EXPECT_EQ(z.v.frobenius(), 0.0);
    EXPECT_EQ(z.a.frobenius(), 0.0);
}

TEST(Polar, RandomAgainstSvdOracle) {
    SplitMix64 rng(7);
    const auto a = make_algebra({3}, {1.0});
    for (int k = 0; k < 20; ++k) {
        const Element x = random_element(a, rng);
        const Polar p = polar_decompose(x);
        EXPECT_LE(gap(p.v * p.a, x), 1e-10 * x.frobenius());
        Eigen::JacobiSVD<Matrix> svd(x.block(0), Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Matrix v_ref = svd.matrixU() * svd.matrixV().adjoint();
        const Matrix a_ref = svd.matrixV() * svd.singularValues().cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
        EXPECT_LE((p.v.block(0) - v_ref).norm(), 1e-9);
        EXPECT_LE((p.a.block(0) - a_ref).norm(), 1e-10 * x.frobenius());
    }
}

TEST(Polar, RankDeficientSupports) {
    SplitMix64 rng(8);
    const auto a = make_algebra({3}, {1.0});
    Matrix x = random_matrix(rng, 3, 1) * random_matrix(rng, 1, 3);
    const Element e(a, {x});
    const Polar p = polar_decompose(e);
    EXPECT_LE(gap(p.v * p.a, e), 1e-10 * e.frobenius());
    EXPECT_LE(gap(p.v.adjoint() * p.v, support_projection(p.a)), 1e-10);
    EXPECT_LE(gap(p.v * p.v.adjoint(), support_projection(absolute_value(e.adjoint()))), 1e-10);
}

TEST(Support, Examples) {
    const auto a = make_algebra({2}, {1.0});
    EXPECT_LE(gap(support_projection(Element(a, {diag({0.0, 5.0})})), Element(a, {diag({0.0, 1.0})})), 1e-15);
    SplitMix64 rng(9);
    EXPECT_LE(gap(support_projection(random_faithful(a, rng)), Element::identity(a)), 1e-12);

    const auto b = make_algebra({3}, {1.0});
    const Matrix v = random_unitary(rng, 3).col(0);
    const Element p(b, {v * v.adjoint()});
    EXPECT_LE(gap(support_projection(Functional(p)), p), 1e-12);
    EXPECT_THROW(support_projection(Element(a, {diag({-1.0, 1.0})})), ValidationError);
}

TEST(Functional, EvaluationAndFlags) {
    const auto a = make_algebra({2, 1}, {1.0, 2.0});
    const Functional f(a, {diag({0.25, 0.25}), diag({0.25})});
    EXPECT_TRUE(f.is_positive());
    EXPECT_TRUE(f.is_faithful());
    EXPECT_TRUE(f.is_state());
    const Functional g(a, {diag({1.0, 0.0}), diag({0.0})});
    EXPECT_TRUE(g.is_positive());
    EXPECT_FALSE(g.is_faithful());
    const Functional h(a, {diag({1.0, -1.0}), diag({0.0})});
    EXPECT_FALSE(h.is_positive());
}

TEST(FunctionalPolar, Examples) {
    const auto a = make_algebra({2}, {1.0});
    SplitMix64 rng(10);
    const Functional pos = random_faithful(a, rng);
    const auto fp = functional_polar(pos);
    EXPECT_LE(gap(fp.v, support_projection(pos)), 1e-10);
    EXPECT_LE(gap(fp.absolute.density(), pos.density()), 1e-10);

    const auto fd = functional_polar(Functional(a, {diag({-1.0, 2.0})}));
    EXPECT_LE(gap(fd.absolute.density(), Element(a, {diag({1.0, 2.0})})), 1e-14);
    EXPECT_LE(gap(fd.v, Element(a, {diag({-1.0, 1.0})})), 1e-14);
}

TEST(FunctionalPolar, RandomNonHermitianDensity) {
    SplitMix64 rng(11);
    const auto a = make_algebra({2, 3}, {1.0, 0.5});
    for (int k = 0; k < 10; ++k) {
        const Functional phi(random_element(a, rng));
        const auto fp = functional_polar(phi);
        EXPECT_TRUE(fp.absolute.is_positive());
        for (const auto& x : Element::matrix_units(a)) EXPECT_LE(std::abs(phi(x) - fp.absolute(x * fp.v)), 1e-10);
        EXPECT_NEAR(functional_norm(fp.absolute), functional_norm(phi), 1e-10 * functional_norm(phi));
        EXPECT_LE(gap(fp.v.adjoint() * fp.v, support_projection(fp.absolute)), 1e-10);
        // Norm oracle: trace norm from singular values.
        double tn = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            Eigen::JacobiSVD<Matrix> svd(phi.block(i));
            tn += a->weight(i) * svd.singularValues().sum();
        }
        EXPECT_NEAR(functional_norm(phi), tn, 1e-12 * tn);
    }
}

TEST(Reduce, Examples) {
    SplitMix64 rng(12);
    const auto a = make_algebra({2, 1}, {1.0, 2.0});
    const Functional f = random_faithful(a, rng);
    const auto r = reduce(f);
    EXPECT_EQ(r.algebra->dims(), a->dims());
    EXPECT_EQ(r.algebra->weights(), a->weights());
    EXPECT_TRUE(r.functional.is_faithful());

    const auto m2 = make_algebra({2}, {1.0});
    const auto r1 = reduce(Functional(m2, {diag({1.0, 0.0})}));
    EXPECT_EQ(r1.algebra->dims(), std::vector<int>{1});
    EXPECT_TRUE(r1.functional.is_faithful());

    const auto m3 = make_algebra({3}, {1.0});
    const Functional rk2 = random_functional_with_ranks(m3, rng, {2});
    const auto r2 = reduce(rk2);
    EXPECT_EQ(r2.algebra->dims(), std::vector<int>{2});
    Eigen::SelfAdjointEigenSolver<Matrix> es(r2.functional.block(0));
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    // The restriction reproduces phi on the corner.
    const Element x = random_element(m3, rng);
    const Element p = support_projection(rk2);
    EXPECT_LE(std::abs(rk2(p * x * p) - r2.functional(r2.restrict(x))), 1e-12);
    EXPECT_LE(gap(r2.extend(r2.restrict(x), m3), p * x * p), 1e-12);

    EXPECT_THROW(reduce(Functional(Element::zero(m3))), ValidationError);
}
