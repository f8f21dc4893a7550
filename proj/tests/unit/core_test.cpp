#include <gtest/gtest.h>

#include <sstream>

#include "advspec/core.hpp"

using namespace advspec;

TEST(EventLabel, ParsesReturnAbstraction) {
  EXPECT_EQ(parse_event("push:TRUE"), EventLabel::of("push", true));
  EXPECT_EQ(parse_event("isEmpty:FALSE"), EventLabel::of("isEmpty", false));
  EXPECT_EQ(parse_event("pop"), EventLabel::of("pop"));
  EXPECT_TRUE(parse_event("END").is_end);
  EXPECT_EQ(parse_event("<init>").action, "<init>");
}

TEST(EventLabel, RoundTripsThroughText) {
  for (auto s : {"a", "a:TRUE", "b:FALSE", "END", "<init>", "x.y-z$1"}) {
    EXPECT_EQ(parse_event(s).str(), s);
  }
}

TEST(EventLabel, BareAndAbstractedAreDistinct) {
  EXPECT_NE(EventLabel::of("get"), EventLabel::of("get", true));
  EXPECT_NE(EventLabel::of("get", false), EventLabel::of("get", true));
}

TEST(EventLabel, RejectsMalformed) {
  EXPECT_THROW(parse_event(""), ParseError);
  EXPECT_THROW(parse_event(":TRUE"), ParseError);
  EXPECT_THROW(parse_event("get:MAYBE"), ParseError);
  EXPECT_THROW(parse_event("ge t"), ParseError);
  try {
    parse_event("get:maybe");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("get:maybe"), std::string::npos);
  }
}

TEST(Purity, Heuristic) {
  EXPECT_TRUE(heuristic_purity("isEmpty"));
  EXPECT_TRUE(heuristic_purity("hasMoreTokens"));
  EXPECT_TRUE(heuristic_purity("is"));
  EXPECT_FALSE(heuristic_purity("issue"));
  EXPECT_FALSE(heuristic_purity("hash"));
  EXPECT_FALSE(heuristic_purity("push"));
}

TEST(Purity, ClosedUnderReturnAbstraction) {
  PuritySet p;
  p.add_action("isEmpty");
  EXPECT_TRUE(p.contains(EventLabel::of("isEmpty", true)));
  EXPECT_TRUE(p.contains(EventLabel::of("isEmpty", false)));
  EXPECT_TRUE(p.contains(EventLabel::of("isEmpty")));
  EXPECT_FALSE(p.contains(EventLabel::end()));
  EXPECT_THROW(p.add_action("END"), ConfigError);
}

TEST(Purity, DeclaredOverridesHeuristic) {
  std::vector<ActionDescriptor> alpha = {
      {"<init>", std::nullopt, true, false, 0},
      {"isDirty", false, false, true, 0},
      {"peek", true, false, false, 0},
      {"hasNext", std::nullopt, false, true, 0},
  };
  auto p = PuritySet::from_alphabet(alpha);
  EXPECT_FALSE(p.contains_action("isDirty"));
  EXPECT_TRUE(p.contains_action("peek"));
  EXPECT_TRUE(p.contains_action("hasNext"));
  EXPECT_FALSE(p.contains_action("<init>"));
}

TEST(Trace, EndOnlyLast) {
  EXPECT_NO_THROW(parse_trace("a b END"));
  EXPECT_NO_THROW(parse_trace("a b"));
  EXPECT_THROW(parse_trace("a END b"), ParseError);
  EXPECT_THROW(parse_trace("END END"), ParseError);
}

TEST(Trace, FileFormatRoundTrip) {
  std::vector<Trace> ts = {parse_trace("<init> push:TRUE pop END"), parse_trace("<init> END"),
                           parse_trace("a b")};
  std::stringstream ss;
  write_traces(ss, ts);
  EXPECT_EQ(read_traces(ss), ts);
}

TEST(Trace, ReaderSkipsCommentsAndReportsLine) {
  std::stringstream ss("# header\n\na b END\n  \nc :X END\n");
  try {
    read_traces(ss);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
  }
}

TEST(Trace, BodyAndAlphabet) {
  std::vector<Trace> ts = {parse_trace("b a END"), parse_trace("a c")};
  EXPECT_EQ(body(ts[0]).size(), 2u);
  auto alpha = alphabet_of(ts);
  ASSERT_EQ(alpha.size(), 3u);
  EXPECT_EQ(alpha[0].action, "a");
  EXPECT_EQ(alpha[2].action, "c");
}

TEST(Property, KindNamesRoundTrip) {
  for (auto k : kAllKinds) EXPECT_EQ(parse_kind(kind_name(k)), k);
  EXPECT_THROW(parse_kind("XX"), ParseError);
  TemporalProperty p{PropertyKind::NIF, EventLabel::of("isEmpty", true), EventLabel::of("get")};
  EXPECT_EQ(p.str(), "NIF isEmpty:TRUE get");
}

TEST(Trace, MissingFileIsConfigError) {
  EXPECT_THROW(read_trace_file("/nonexistent/path.traces"), ConfigError);
}
