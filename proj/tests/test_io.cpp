#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "ncorlicz/io.hpp"
#include "ncorlicz/trace_orlicz.hpp"

using namespace ncorlicz;

namespace {

std::string fixture(const char* name) { return std::string(NCORLICZ_FIXTURE_DIR) + "/" + name; }

std::string error_of(auto&& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Parse, MalformedJsonReportsByte) {
    const auto msg = error_of([] { io::parse("{\"blocks\": [", "inline"); });
    EXPECT_NE(msg.find("inline"), std::string::npos) << msg;
    EXPECT_NE(msg.find("byte"), std::string::npos) << msg;
}

TEST(Parse, NaNLiteralIsMalformed) {
    EXPECT_THROW(io::parse("{\"x\": NaN}", "inline"), InputError);
}

TEST(Parse, MissingFile) { EXPECT_THROW(io::read_file("/nonexistent/ncorlicz.json"), InputError); }

TEST(Parse, OverflowingLiteralIsInputError) {
    const auto msg = error_of([] { io::parse(R"({"blocks":[[[1e999]]]})", "inline"); });
    EXPECT_NE(msg.find("inline"), std::string::npos) << msg;
}

TEST(Readers, NonFiniteEntryRejectedWithPath) {
    io::json j;
    j["blocks"] = io::json::array({io::json::array({io::json::array({std::nan(""), 0.0}), io::json::array({0.0, 1.0})})});
    const auto msg = error_of([&] { io::element_from_json(j, nullptr); });
    EXPECT_NE(msg.find("NaN/Inf"), std::string::npos) << msg;
    EXPECT_NE(msg.find("element.blocks[0][0][0]"), std::string::npos) << msg;
}

TEST(Readers, ComplexAndRealEntries) {
    const auto j = io::parse(R"({"blocks":[[[[1,2],3],[0,[0,-1]]]]})", "inline");
    const Element x = io::element_from_json(j, nullptr);
    EXPECT_EQ(x.block(0)(0, 0), Complex(1, 2));
    EXPECT_EQ(x.block(0)(0, 1), Complex(3, 0));
    EXPECT_EQ(x.block(0)(1, 1), Complex(0, -1));
}

TEST(Readers, ShapeErrors) {
    EXPECT_THROW(io::element_from_json(io::parse(R"({"blocks":[[[1,2]]]})", "s"), nullptr), InputError);
    const auto alg = make_algebra({2}, {1.0});
    EXPECT_THROW(io::element_from_json(io::parse(R"({"blocks":[[[1]]]})", "s"), alg), InputError);
    EXPECT_THROW(io::element_from_json(io::parse(R"({"rows":[]})", "s"), alg), InputError);
}

TEST(Readers, AlgebraFixture) {
    const auto alg = io::algebra_from_json(io::parse_file(fixture("algebra_m2m1.json")));
    EXPECT_EQ(alg->dims(), (std::vector<int>{2, 1}));
    EXPECT_EQ(alg->weights(), (std::vector<double>{1.0, 0.5}));
    EXPECT_THROW(io::algebra_from_json(io::parse(R"({"blocks":[{"dim":2,"weight":-1}]})", "s")), InputError);
    EXPECT_THROW(io::algebra_from_json(io::parse(R"({"blocks":[{"dim":1.5}]})", "s")), InputError);
}

TEST(Readers, ElementFixtureRearrangement) {
    const auto alg = io::algebra_from_json(io::parse_file(fixture("algebra_m2m1.json")));
    const Element x = io::element_from_json(io::parse_file(fixture("element_m2m1.json")), alg);
    EXPECT_NEAR(fk_integral(OrliczFunction::power(1.0), x).integral, 5.0, 1e-13);
}

TEST(Readers, PhiFamilies) {
    EXPECT_EQ(io::phi_from_json(io::parse(R"({"family":"power","p":2})", "s")).name(), "power(2)");
    EXPECT_EQ(io::phi_from_json(io::parse(R"({"family":"threshold","a":2})", "s")).finite_limit(), 2.0);
    const auto t = io::phi_from_json(io::parse_file(fixture("phi_table.json")));
    EXPECT_DOUBLE_EQ(t(3.0), 4.5);
    const auto inf_tail = io::phi_from_json(io::parse(R"({"family":"table","points":[[0,0],[1,1]],"tail":"inf"})", "s"));
    EXPECT_EQ(inf_tail(2.0), kInf);
    EXPECT_THROW(io::phi_from_json(io::parse(R"({"family":"gamma"})", "s")), InputError);
    EXPECT_THROW(io::phi_from_json(io::parse(R"({"family":"power","p":0.5})", "s")), InputError);
    EXPECT_THROW(io::phi_from_json(io::parse(R"({"family":"table","points":[[0,0],[1,2],[2,3]]})", "s")), InputError);
}

TEST(Readers, PhiRoundTrip) {
    for (const auto& f : {OrliczFunction::power(1.5), OrliczFunction::scaled_power(2.0), OrliczFunction::linf(),
                          OrliczFunction::threshold(3.0), OrliczFunction::cosh1(), OrliczFunction::exp1_conjugate()}) {
        const auto back = io::phi_from_json(io::json::parse(io::phi_to_json(f).dump()));
        EXPECT_EQ(back.name(), f.name());
        EXPECT_DOUBLE_EQ(back(0.7), f(0.7));
    }
}

TEST(Readers, CoreFixtureAndInfEndpoint) {
    const auto alg = io::algebra_from_json(io::parse_file(fixture("algebra_m2m1.json")));
    const CoreElement x = io::core_from_json(io::parse_file(fixture("core_m2m1.json")), alg);
    ASSERT_EQ(x.pieces().size(), 2u);
    EXPECT_EQ(x.pieces()[1].end, kInf);
    const auto bad = io::parse(R"({"pieces":[{"interval":["-inf",0],"element":{"blocks":[[[1]]]}}]})", "s");
    EXPECT_THROW(io::core_from_json(bad, nullptr), InputError);
    const auto bad_token = io::parse(R"({"pieces":[{"interval":[0,"forever"],"element":{"blocks":[[[1]]]}}]})", "s");
    EXPECT_THROW(io::core_from_json(bad_token, nullptr), InputError);
}

TEST(Readers, IsomorphismFixture) {
    const auto iso = io::isomorphism_from_json(io::parse_file(fixture("iso_swap_m2m2.json")), nullptr);
    EXPECT_EQ(iso.permutation(), (std::vector<std::size_t>{1, 0}));
    EXPECT_TRUE(iso.trace_preserving());
    EXPECT_THROW(io::isomorphism_from_json(io::parse(R"({"permutation":[0],"unitaries":[[[2]]]})", "s"), nullptr),
                 InputError);
}

TEST(Shorthand, PhiNames) {
    EXPECT_EQ(io::phi_from_name("power2").name(), "power(2)");
    EXPECT_DOUBLE_EQ(io::phi_from_name("power1.5").exponent(), 1.5);
    EXPECT_EQ(io::phi_from_name("scaled-power2").name(), "scaled-power(2)");
    EXPECT_EQ(io::phi_from_name("linf").name(), "linf");
    EXPECT_THROW(io::phi_from_name("power"), InputError);
    EXPECT_THROW(io::phi_from_name("power2x"), InputError);
    EXPECT_THROW(io::phi_from_name("power0.5"), InputError);
    EXPECT_THROW(io::phi_from_name("gauss"), InputError);
}

TEST(Shorthand, Diag) {
    const auto b = io::blocks_from_diag("diag(3,4;2)");
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0].rows(), 2);
    EXPECT_EQ(b[0](1, 1), Complex(4, 0));
    EXPECT_EQ(b[1](0, 0), Complex(2, 0));
    EXPECT_THROW(io::blocks_from_diag("diag(3,x)"), InputError);
    EXPECT_THROW(io::blocks_from_diag("diag(3,inf)"), InputError);
    EXPECT_THROW(io::blocks_from_diag("3,4"), InputError);
}

TEST(Writers, FormatNumber) {
    EXPECT_EQ(io::format_number(5.0), "5.0");
    EXPECT_EQ(io::format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(io::format_number(1e300), "1.0000000000000001e+300");
    EXPECT_EQ(io::format_number(kInf), "\"inf\"");
    EXPECT_EQ(io::format_number(-kInf), "\"-inf\"");
    EXPECT_EQ(io::format_number(std::nan("")), "\"nan\"");
}

TEST(Writers, DumpKeepsOrderAndDigits) {
    io::ordered_json j;
    j["norm"] = 5.0;
    j["name"] = "x";
    j["list"] = {1.5, kInf};
    j["count"] = 3;
    EXPECT_EQ(io::dump(j), R"({"norm":5.0,"name":"x","list":[1.5,"inf"],"count":3})");
}

TEST(Writers, ElementRoundTrip) {
    const auto alg = make_algebra({2}, {1.0});
    Matrix m(2, 2);
    m << Complex(1, 2), Complex(0.1, 0), Complex(0, -3), Complex(4, 0);
    const Element x(alg, {m});
    const Element back = io::element_from_json(io::json::parse(io::dump(io::element_to_json(x))), alg);
    EXPECT_EQ(back.block(0), m);
}

TEST(Digest, StableFnv) {
    EXPECT_EQ(io::digest(""), "cbf29ce484222325");
    EXPECT_EQ(io::digest("a"), "af63dc4c8601ec8c");
}
