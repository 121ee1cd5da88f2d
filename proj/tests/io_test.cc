#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qdeconv/characterization.h"
#include "qdeconv/errors.h"
#include "qdeconv/format.h"
#include "qdeconv/observable_io.h"

namespace qdeconv {
namespace {

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(1e-20), "1e-20");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        EXPECT_EQ(*parse_double(format_double(x)), x);
    }
}

TEST(ParseDouble, Strict) {
    EXPECT_EQ(parse_double("+1.5"), 1.5);
    EXPECT_FALSE(parse_double("1.5x"));
    EXPECT_FALSE(parse_double(""));
    EXPECT_FALSE(parse_double("nan"));
    EXPECT_FALSE(parse_double("inf"));
}

TEST(ObservableText, ParsesAndRoundTripsBitExactly) {
    const std::string text = "# comment\nZZZ 1.0\n\nXIY -0.30000000000000004\n";
    const Observable o = parse_observable(text);
    EXPECT_EQ(o.num_qubits(), 3);
    EXPECT_EQ(o.r(), 2u);
    EXPECT_EQ(o.coefficient(PauliIndex::from_label("XIY")), -0.30000000000000004);
    const std::string out = format_observable(o);
    EXPECT_EQ(out, "XIY -0.30000000000000004\nZZZ 1\n");
    const Observable back = parse_observable(out);
    EXPECT_EQ(back.terms(), o.terms());
}

TEST(ObservableText, ErrorsCarryPositions) {
    try {
        parse_observable("ZZ 1\nZQ 2\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 2u);
    }
    try {
        parse_observable("ZZ 1\nZZZ 2\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 2u);
    }
    try {
        parse_observable("ZZ 1x\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_GT(e.column(), 1u);
    }
    EXPECT_THROW(parse_observable("ZZ 1\nZZ 2\n"), ParseError);
    EXPECT_THROW(parse_observable("ZZ\n"), ParseError);
}

TEST(MeasurementText, OptionalStdError) {
    const auto t = parse_measurements("Z 0.5 0.01\nX -0.25\n");
    EXPECT_EQ(t.at(PauliIndex::from_label("Z")).value, 0.5);
    EXPECT_EQ(t.at(PauliIndex::from_label("Z")).std_error, 0.01);
    EXPECT_EQ(t.at(PauliIndex::from_label("X")).std_error, 0.0);
    EXPECT_EQ(parse_measurements(format_measurements(t)).size(), 2u);
    EXPECT_THROW(parse_measurements("Z 0.5 -1\n"), Error);
}

TEST(CharacterizationReport, RoundTrip) {
    CharacterizedPtm c(2, CharacterizedPtm::Mode::kDiagonalOnly);
    c.set(PauliIndex::from_label("ZZ"), PauliIndex::from_label("ZZ"), {0.7, 0.01, 8192, 42});
    c.set(PauliIndex::from_label("XI"), PauliIndex::from_label("XI"), {0.9, 0.0, 0, 7});
    const std::string text = format_characterization_report(c);
    EXPECT_EQ(text, "j,k,estimate,std_error,shots,seed\nXI,XI,0.9,0,0,7\nZZ,ZZ,0.7,0.01,8192,42\n");
    const auto back = parse_characterization_report(text);
    EXPECT_EQ(back.mode(), CharacterizedPtm::Mode::kDiagonalOnly);
    EXPECT_EQ(format_characterization_report(back), text);
}

TEST(CharacterizationReport, RejectsMalformed) {
    EXPECT_THROW(parse_characterization_report("a,b\n"), ParseError);
    EXPECT_THROW(parse_characterization_report("j,k,estimate,std_error,shots,seed\nZ,Z,x,0,0,0\n"), ParseError);
    EXPECT_THROW(parse_characterization_report("j,k,estimate,std_error,shots,seed\nZ,X,0.1,0,0,0\n"), ParseError);
    EXPECT_THROW(
        parse_characterization_report("j,k,estimate,std_error,shots,seed\nZ,Z,0.1,0,0,0\nZ,Z,0.2,0,0,0\n"),
        ParseError);
}

}  // namespace
}  // namespace qdeconv
