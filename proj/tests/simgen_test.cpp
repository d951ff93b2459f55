#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mmcheck/simgen.hpp"
#include "mmcheck/solver.hpp"

namespace mmcheck {
namespace {

TEST(Simulate, SingleThreadReadsOwnWrites) {
  RandomProgram prog{1, 6, 1, 3};
  for (ModelName m : {ModelName::SC, ModelName::TSO, ModelName::PSO}) {
    History h = simulate(prog, m, 11);
    Value last = 0;
    for (EventId e = 0; e < h.n(); ++e) {
      const Event& ev = h.event(e);
      if (ev.is_init) {
        continue;
      }
      if (ev.kind == EventKind::Write) {
        last = ev.val;
      } else {
        EXPECT_EQ(ev.val, last);
      }
    }
  }
}

TEST(Simulate, RejectsRmo) {
  try {
    simulate(RandomProgram{}, ModelName::RMO, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownModel);
  }
}

TEST(Simulate, DeterministicPerSeed) {
  RandomProgram prog{3, 4, 2, 9};
  for (ModelName m : {ModelName::SC, ModelName::TSO, ModelName::PSO}) {
    EXPECT_EQ(format_trace(simulate(prog, m, 5)), format_trace(simulate(prog, m, 5)));
  }
}

TEST(Simulate, AcceptedByItsModel) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    RandomProgram prog{2 + seed % 2, 3, 2, seed};
    for (ModelName m : {ModelName::SC, ModelName::TSO, ModelName::PSO}) {
      History h = simulate(prog, m, seed * 7 + 1);
      EXPECT_TRUE(solve(h, ModelSpec::of(m)).consistent()) << to_string(m) << '\n' << format_trace(h);
    }
  }
}

TEST(Mutate, NeedsAnAlternativeWriter) {
  History h = parse_history("thread T0\nwr x 1\nthread T1\nrd x 1\n");
  try {
    mutate(h, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoAlternativeWriter);
  }
}

TEST(Mutate, RewiresExactlyOneRead) {
  History h = fixtures::sb();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    History m = mutate(h, seed);
    ASSERT_EQ(m.n(), h.n());
    std::size_t changed = 0;
    for (EventId r : h.reads()) {
      if (m.source_of(r) != h.source_of(r)) {
        ++changed;
        EXPECT_EQ(m.event(r).val, m.event(m.source_of(r)).val);
        EXPECT_EQ(m.event(r).var, h.event(r).var);
      }
    }
    EXPECT_EQ(changed, 1u);
    EXPECT_TRUE(m.rf_explicit());
    EXPECT_EQ(format_trace(mutate(h, seed)), format_trace(m));
  }
}

TEST(Mutate, SometimesBreaksConsistency) {
  // Message passing where T1 observes the flag and the data.
  History h = parse_history("init: x=0 y=0\nthread T0\nwr x 1\nwr y 1\nthread T1\nrd y 1\nrd x 1\n");
  ASSERT_TRUE(solve(h, ModelSpec::of(ModelName::SC)).consistent());
  std::size_t broken = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    broken += solve(mutate(h, seed), ModelSpec::of(ModelName::SC)).consistent() ? 0 : 1;
  }
  EXPECT_GE(broken, 1u);
}

TEST(RandomHistory, RespectsBounds) {
  RandomHistoryParams p;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    History h = random_history(p, seed);
    EXPECT_LE(h.n(), p.max_events);
    EXPECT_LE(h.k(), p.max_writes);
    EXPECT_LE(h.var_count(), p.max_vars);
    EXPECT_EQ(format_trace(h), format_trace(random_history(p, seed)));
  }
}

}  // namespace
}  // namespace mmcheck
