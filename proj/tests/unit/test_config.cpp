#include <gtest/gtest.h>

#include <sstream>

#include "tagreuse/config.hpp"
#include "tagreuse/types.hpp"

using namespace tagreuse;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in);
}

}  // namespace

TEST(Config, SectionsCommentsAndQuotes) {
  const auto c = parse(
      "# run settings\n"
      "seed = 7\n"
      "predictors = \"mp, bll\"  # trailing comment\n"
      "[bll]\n"
      "d = 0.75\n"
      "[ folkrank ]\n"
      "weights=binary\n");
  EXPECT_EQ(c.get_uint("seed", 0), 7u);
  EXPECT_EQ(c.get_string("predictors", ""), "mp, bll");
  EXPECT_DOUBLE_EQ(c.get_double("bll.d", 0.5), 0.75);
  EXPECT_EQ(c.get_string("folkrank.weights", ""), "binary");
  EXPECT_EQ(c.entries().size(), 4u);
}

TEST(Config, FallbacksAndTypedErrors) {
  const auto c = parse("a = x\nb = 1.5\nflag = yes\n");
  EXPECT_EQ(c.get_int("missing", 3), 3);
  EXPECT_THROW(c.get_double("a", 0.0), ParamError);
  EXPECT_THROW(c.get_int("b", 0), ParamError);
  EXPECT_TRUE(c.get_bool("flag", false));
  EXPECT_THROW(c.get_bool("a", false), ParamError);
}

TEST(Config, MalformedLinesAreParseErrors) {
  try {
    parse("ok = 1\nnot an assignment\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("[open\n"), ParseError);
  EXPECT_THROW(parse(" = 3\n"), ParseError);
}

TEST(Config, AssignmentsAndMerge) {
  auto base = parse("bll.d = 0.5\nseed = 1\n");
  base.set_assignment("bll.d=0.9");
  EXPECT_DOUBLE_EQ(base.get_double("bll.d", 0), 0.9);
  EXPECT_THROW(base.set_assignment("novalue"), ParamError);
  EXPECT_THROW(base.set_assignment("=3"), ParamError);

  Config flags;
  flags.set("seed", "2");
  base.merge(flags);
  EXPECT_EQ(base.get_uint("seed", 0), 2u);
}

TEST(Config, SplitList) {
  EXPECT_EQ(split_list("mp, bll ,,bllac"), (std::vector<std::string>{"mp", "bll", "bllac"}));
  EXPECT_TRUE(split_list(" , ").empty());
}
