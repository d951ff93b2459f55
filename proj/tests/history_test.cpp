#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mmcheck/history.hpp"
#include "mmcheck/simgen.hpp"

namespace mmcheck {
namespace {

ErrorKind parse_error(const std::string& text) {
  try {
    parse_history(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a parse error for:\n" << text;
  return ErrorKind::Syntax;
}

TEST(ParseHistory, EmptyDocument) {
  History h = parse_history("");
  EXPECT_EQ(h.n(), 0u);
  EXPECT_EQ(h.k(), 0u);
  EXPECT_TRUE(h.po().empty());
  EXPECT_TRUE(h.rf().empty());
  EXPECT_TRUE(h.dp().empty());
  EXPECT_EQ(parse_history("# only a comment\n\n").n(), 0u);
}

TEST(ParseHistory, UniqueWriterForcesRf) {
  History h = parse_history("thread T0\nwr x 1\nthread T1\nrd x 1\n");
  EXPECT_EQ(h.rf(), Relation(2, {{0, 1}}));
  EXPECT_TRUE(h.po().empty());
}

TEST(ParseHistory, DuplicateWriteValueRejected) {
  EXPECT_EQ(parse_error("thread T0\nwr x 1\nwr x 1\n"), ErrorKind::DuplicateValue);
  EXPECT_EQ(parse_error("init: x=0\nthread T0\nwr x 0\n"), ErrorKind::DuplicateValue);
}

TEST(ParseHistory, RepeatedReadValuesAllowed) {
  History h = parse_history("thread T0\nwr x 1\nrd x 1\nrd x 1\n");
  EXPECT_EQ(h.rf().size(), 2u);
}

TEST(ParseHistory, IdsFollowDocumentOrder) {
  History h = fixtures::sb();
  ASSERT_EQ(h.n(), 6u);
  EXPECT_TRUE(h.event(0).is_init);
  EXPECT_TRUE(h.event(1).is_init);
  EXPECT_EQ(h.ref(0), "init:0");
  EXPECT_EQ(h.ref(1), "init:1");
  EXPECT_EQ(h.ref(2), "T0:0");
  EXPECT_EQ(h.ref(5), "T1:1");
  EXPECT_EQ(h.k(), 4u);
}

TEST(ParseHistory, InitWritesPrecedeEverything) {
  History h = fixtures::sb();
  for (EventId init : {0u, 1u}) {
    for (EventId o = 2; o < h.n(); ++o) {
      EXPECT_TRUE(h.po().contains(init, o));
    }
  }
  EXPECT_FALSE(h.po().contains(2, 4));
  EXPECT_TRUE(h.po().contains(2, 3));
}

TEST(ParseHistory, SyntaxErrorsCarryLineNumbers) {
  try {
    parse_history("thread T0\nwr x 1\nbogus line\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Syntax);
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_EQ(parse_error("wr x 1\n"), ErrorKind::Syntax);
  EXPECT_EQ(parse_error("thread T0\nwr x\n"), ErrorKind::Syntax);
  EXPECT_EQ(parse_error("thread T0\nwr x -1\n"), ErrorKind::Syntax);
  EXPECT_EQ(parse_error("thread T0\nwr 9x 1\n"), ErrorKind::Syntax);
  EXPECT_EQ(parse_error("thread T0\nthread T0\n"), ErrorKind::Syntax);
  EXPECT_EQ(parse_error("thread init\n"), ErrorKind::Syntax);
  EXPECT_EQ(parse_error("thread T0\ninit: x=0\n"), ErrorKind::Syntax);
  EXPECT_EQ(parse_error("init: x=0\ninit: y=0\n"), ErrorKind::Syntax);
  EXPECT_EQ(parse_error("init: x=0 x=1\n"), ErrorKind::Syntax);
  EXPECT_EQ(parse_error("thread T0\nrd x 1\nrf T0:0 T0:1\n"), ErrorKind::Syntax);
}

TEST(ParseHistory, UnsourcedRead) {
  EXPECT_EQ(parse_error("thread T0\nrd x 1\n"), ErrorKind::UnsourcedRead);
  EXPECT_EQ(parse_error("thread T0\nwr y 1\nrd x 1\n"), ErrorKind::UnsourcedRead);
}

TEST(ParseHistory, ExplicitRf) {
  History h = parse_history("thread T0\nwr x 1\nthread T1\nrd x 1\nrf T0:0 -> T1:0\n");
  EXPECT_TRUE(h.rf_explicit());
  EXPECT_EQ(h.rf(), Relation(2, {{0, 1}}));
  // Missing coverage once any rf line is present.
  EXPECT_EQ(parse_error("thread T0\nwr x 1\nthread T1\nrd x 1\nrd x 1\nrf T0:0 -> T1:0\n"),
            ErrorKind::UnsourcedRead);
  // Wrong direction, wrong variable, wrong value, duplicate source.
  EXPECT_EQ(parse_error("thread T0\nwr x 1\nthread T1\nrd x 1\nrf T1:0 -> T0:0\n"), ErrorKind::AmbiguousRf);
  EXPECT_EQ(parse_error("thread T0\nwr y 1\nwr x 1\nthread T1\nrd x 1\nrf T0:0 -> T1:0\n"),
            ErrorKind::AmbiguousRf);
  EXPECT_EQ(parse_error("thread T0\nwr x 1\nwr x 2\nthread T1\nrd x 1\nrf T0:1 -> T1:0\n"),
            ErrorKind::AmbiguousRf);
  EXPECT_EQ(parse_error("thread T0\nwr x 1\nthread T1\nrd x 1\nrf T0:0 -> T1:0\nrf T0:0 -> T1:0\n"),
            ErrorKind::AmbiguousRf);
}

TEST(ParseHistory, DanglingReferences) {
  EXPECT_EQ(parse_error("thread T0\nwr x 1\nthread T1\nrd x 1\nrf T9:0 -> T1:0\n"), ErrorKind::DanglingRef);
  EXPECT_EQ(parse_error("thread T0\nwr x 1\nthread T1\nrd x 1\nrf T0:4 -> T1:0\n"), ErrorKind::DanglingRef);
  EXPECT_EQ(parse_error("init: x=0\nthread T0\nrd x 0\nwr x 1\ndp T0:0 -> T0:7\n"), ErrorKind::DanglingRef);
}

TEST(ParseHistory, DpMustStartAtReadAndFollowPo) {
  const std::string base = "init: x=0\nthread T0\nrd x 0\nwr x 1\nthread T1\nrd x 1\n";
  History ok = parse_history(base + "dp T0:0 -> T0:1\n");
  EXPECT_EQ(ok.dp().size(), 1u);
  EXPECT_EQ(parse_error(base + "dp T0:1 -> T0:0\n"), ErrorKind::InvalidDp);
  EXPECT_EQ(parse_error(base + "dp T0:0 -> T1:0\n"), ErrorKind::InvalidDp);
  EXPECT_EQ(parse_error("thread T0\nwr x 1\nrd x 1\ndp T0:0 -> T0:1\n"), ErrorKind::InvalidDp);
}

TEST(InferRf, NoReadsGivesEmptyRelation) {
  History h = parse_history("thread T0\nwr x 1\nwr y 2\n");
  EXPECT_TRUE(infer_rf(h).empty());
}

TEST(InferRf, InitIsOnlyCandidate) {
  History h = parse_history("init: x=0\nthread T0\nrd x 0\n");
  EXPECT_EQ(infer_rf(h), Relation(2, {{0, 1}}));
}

TEST(InferRf, MatchesByValue) {
  History h = parse_history("thread T0\nwr x 1\nthread T1\nwr x 2\nthread T2\nrd x 2\n");
  EXPECT_EQ(infer_rf(h), Relation(3, {{1, 2}}));
}

TEST(PoLoc, DifferentVariablesUnrelated) {
  History h = parse_history("thread T0\nwr x 1\nwr y 1\n");
  EXPECT_TRUE(po_loc(h, false).empty());
}

TEST(PoLoc, LoadLoadHazardDropsReadPairs) {
  History h = parse_history("thread T0\nwr x 1\nrd x 1\nrd x 1\n");
  EXPECT_TRUE(po_loc(h, false).contains(1, 2));
  EXPECT_FALSE(po_loc(h, true).contains(1, 2));
  EXPECT_TRUE(po_loc(h, true).contains(0, 2));
}

TEST(PoLoc, InitPrecedesAll) {
  History h = parse_history("init: x=0\nthread T0\nrd x 0\nwr x 1\n");
  EXPECT_EQ(po_loc(h, false), Relation(3, {{0, 1}, {0, 2}, {1, 2}}));
}

TEST(RestrictVar, GroupsByVariable) {
  History h = parse_history("thread T0\nwr x 1\nwr x 2\nwr y 1\n");
  Relation a(3, {{0, 1}, {0, 2}});
  auto fam = restrict_var(a, h);
  ASSERT_EQ(fam.size(), 2u);
  EXPECT_EQ(fam[0], Relation(3, {{0, 1}}));
  EXPECT_TRUE(fam[1].empty());
}

TEST(HistoryProperties, RandomCorpus) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    History h = random_history({}, seed);
    // po: irreflexive, and within a thread exactly the position order.
    for (const Event& a : h.events()) {
      EXPECT_FALSE(h.po().contains(a.id, a.id));
      for (const Event& b : h.events()) {
        if (a.thread == b.thread) {
          EXPECT_EQ(h.po().contains(a.id, b.id), a.pos < b.pos);
        }
      }
    }
    EXPECT_EQ(h.rf().size(), h.reads().size());
    EXPECT_EQ(infer_rf(h), h.rf());
    const std::string text = format_trace(h);
    EXPECT_EQ(format_trace(parse_history(text)), text) << text;
  }
}

}  // namespace
}  // namespace mmcheck
