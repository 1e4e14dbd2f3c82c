#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "wrearr/io.hpp"
#include "wrearr/random.hpp"

using namespace wrearr;

TEST(Json, OperatorRoundTrip) {
  random::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto alg = random::algebra(rng);
    const auto a = random::any_operator(rng, alg);
    const auto j = io::to_json(a);
    const auto b = io::operator_from_json(io::parse_json(j.dump()));
    EXPECT_EQ(a, b);
    EXPECT_EQ(io::to_json(b).dump(), j.dump());
  }
}

TEST(Json, WeightRoundTrip) {
  random::Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = random::weight(rng);
    EXPECT_EQ(io::weight_from_json(io::parse_json(io::to_json(w).dump())), w);
  }
}

TEST(Json, SchemaExamples) {
  const auto a = io::operator_from_json(io::parse_json(
      R"({"algebra":{"kind":"matrix","blocks":[1,2],"weights":[0.5,1]},"blocks":[[5],[4,0,0,4]]})"));
  EXPECT_EQ(a.algebra().dimension(), 3u);
  EXPECT_DOUBLE_EQ(a.algebra().trace_of_identity(), 2.5);
  const auto s = io::operator_from_json(
      io::parse_json(R"({"algebra":{"kind":"steps","bound":2},"step":{"breakpoints":[0,1,2],"values":[0,1]}})"));
  EXPECT_FALSE(s.is_matrix());
  EXPECT_TRUE(io::weight_from_json(io::parse_json(R"({"kind":"exp"})")).is_exponential());
  // weights default to 1
  const auto d = io::operator_from_json(io::parse_json(R"({"algebra":{"kind":"matrix","blocks":[2]},"blocks":[[1,0,0,1]]})"));
  EXPECT_EQ(d.algebra().trace_weights()[0], 1.0);
}

TEST(Json, MalformedTextReportsLineAndColumn) {
  try {
    (void)io::parse_json("{\n  \"kind\": \"exp\",\n  oops\n}", "w.json");
    FAIL();
  } catch (const io::parse_error& e) {
    EXPECT_NE(std::string(e.what()).find("w.json:3:"), std::string::npos) << e.what();
  }
}

TEST(Json, SchemaViolations) {
  EXPECT_THROW((void)io::operator_from_json(io::parse_json(R"({"blocks":[]})")), io::parse_error);
  EXPECT_THROW((void)io::operator_from_json(io::parse_json(R"({"algebra":{"kind":"tensor"}})")), io::parse_error);
  EXPECT_THROW((void)io::operator_from_json(io::parse_json(R"({"algebra":{"kind":"matrix","blocks":[2]},"blocks":[[1,2,3]]})")),
               validation_error);
  EXPECT_THROW((void)io::weight_from_json(io::parse_json(R"({"kind":"step","mu":{"breakpoints":[0,1,2],"values":[1,2]}})")),
               validation_error);
  EXPECT_THROW((void)io::read_json_file("/nonexistent/file.json"), io::parse_error);
}

TEST(Csv, Rows) {
  std::ostringstream os;
  io::write_csv(os, StepFunction({0, 1, 2, 3}, {3, 2, 1}));
  EXPECT_EQ(os.str(), "t_start,t_end,value\n0,1,3\n1,2,2\n2,3,1\n");
  std::ostringstream empty;
  io::write_csv(empty, StepFunction());
  EXPECT_EQ(empty.str(), "t_start,t_end,value\n");
}

TEST(Format, Numbers) {
  EXPECT_EQ(io::format_number(0.5), "0.5");
  EXPECT_EQ(io::format_number(inf), "inf");
  EXPECT_EQ(io::format_number(0.1), "0.1");
}
