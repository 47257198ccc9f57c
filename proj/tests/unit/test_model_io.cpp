#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "structsel/errors.hpp"
#include "structsel/model_io.hpp"

using namespace structsel;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(STRUCTSEL_FIXTURES) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string parse_error_of(const std::string& doc) {
  try {
    parse_system(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ModelIo, ParsesTheExampleFixture) {
  const StructuredSystem sys = parse_system(read_fixture("ten_state.json"));
  EXPECT_EQ(sys.n(), 10);
  EXPECT_EQ(sys.m(), 6);
  EXPECT_EQ(sys.a().nonzeros() + sys.b().nonzeros(), 26u);
  EXPECT_TRUE(sys.a().contains(0, 2));  // [1,3]: x3 -> x1
  EXPECT_EQ(sys.costs()[0], 10);
  EXPECT_EQ(sys.costs()[1], 1);
}

TEST(ModelIo, RoundTripsThroughSerialization) {
  const StructuredSystem sys = parse_system(read_fixture("ten_state.json"));
  EXPECT_EQ(parse_system(serialize_system(sys)), sys);

  std::vector<std::string> warnings;
  const auto sw = parse_switched_system(read_fixture("ten_state_switched.json"), &warnings);
  EXPECT_TRUE(warnings.empty());
  EXPECT_EQ(parse_switched_system(serialize_switched_system(sw)), sw);
}

TEST(ModelIo, RationalCostsStayExact) {
  const auto sys = parse_system(R"({"n":1,"m":2,"A":[],"B":[[1,1],[1,2]],"costs":["3/2", "4/6"]})");
  EXPECT_EQ(sys.costs()[0], Rational(3, 2));
  EXPECT_EQ(sys.costs()[1], Rational(2, 3));
}

TEST(ModelIo, RejectsOutOfRangeIndicesWithFieldContext) {
  const std::string msg = parse_error_of(R"({"n":2,"m":1,"A":[[1,2],[3,1]],"B":[[1,1]],"costs":[1]})");
  EXPECT_NE(msg.find("A[1]"), std::string::npos) << msg;
  EXPECT_NE(msg.find("row index 3"), std::string::npos) << msg;
}

TEST(ModelIo, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_system("{"), ParseError);
  EXPECT_THROW(parse_system(R"({"n":2,"A":[],"B":[],"costs":[]})"), ParseError);               // no m
  EXPECT_THROW(parse_system(R"({"n":1,"m":1,"A":[],"B":[[1,1]],"costs":[0.5]})"), ParseError);   // float
  EXPECT_THROW(parse_system(R"({"n":1,"m":1,"A":[],"B":[[1,1]],"costs":[-1]})"), ParseError);    // negative
  EXPECT_THROW(parse_system(R"({"n":1,"m":1,"A":[],"B":[[1,1]],"costs":[1,2]})"), ParseError);   // length
  EXPECT_THROW(parse_system(R"({"n":1,"m":1,"A":[[1,1],[1,1]],"B":[],"costs":[1]})"), ParseError);  // duplicate
  EXPECT_THROW(parse_system(R"({"n":1,"m":1,"A":[[1]],"B":[],"costs":[1]})"), ParseError);
}

TEST(ModelIo, SwitchedModesStripZeroColumns) {
  const std::string doc = R"({"n":2,"modes":[
      {"A":[[2,1]],"B":[[1,2]],"costs":[5,1]},
      {"A":[],"B":[[2,1]],"costs":[3]}]})";
  ASSERT_TRUE(is_switched_document(doc));
  std::vector<std::string> warnings;
  const auto sw = parse_switched_system(doc, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("mode 1"), std::string::npos);
  EXPECT_EQ(sw.mode(0).b.cols(), 1);
  EXPECT_EQ(sw.mode(0).source_columns, std::vector<int>{1});
  EXPECT_EQ(sw.mode(0).costs, std::vector<Rational>{1});
  EXPECT_EQ(sw.total_inputs(), 2);
}

TEST(ModelIo, SwitchedModeDimensionsMustAgree) {
  EXPECT_THROW(parse_switched_system(R"({"n":2,"modes":[{"n":3,"A":[],"B":[[1,1]],"costs":[1]}]})"), ParseError);
  EXPECT_THROW(parse_switched_system(R"({"n":2,"modes":[]})"), ParseError);
  EXPECT_FALSE(is_switched_document(R"({"n":2,"m":0,"A":[],"B":[],"costs":[]})"));
}
