#include <random>
#include <set>

#include "doctest.h"
#include "rawset/naive_set.hpp"
#include "rawset/sim.hpp"
#include "support/runs.hpp"

using namespace rawset;
using namespace testsupport;

TEST_SUITE("naive_set") {

TEST_CASE("lookup requires a live add tag and no live remove-wins tag") {
  NaiveSet s;
  CHECK_FALSE(s.lookup(7));

  s.add(7, {1, 0});
  CHECK(s.lookup(7));  // one live add tag

  NaiveSet t;
  t.add(7, {2, 0});
  t.remove_wins(7, {1, 1});
  CHECK_FALSE(t.lookup(7));  // live remove-wins tag dominates the live add
}

TEST_CASE("add cancels the remove-wins tags it observed") {
  NaiveSet s;
  s.add(3, {1, 0});
  CHECK(s.lookup(3));
  CHECK(s.tombstones().empty());

  NaiveSet t;
  t.remove_wins(3, {1, 0});
  CHECK_FALSE(t.lookup(3));
  t.add(3, {2, 0});
  CHECK(t.lookup(3));
  CHECK(t.tombstones().contains({1, 0}));
}

TEST_CASE("an unobserved remove-wins tag beats a concurrent add") {
  NaiveSet base;
  NaiveSet p = base, q = base;
  p.remove_wins(5, {1, 0});
  q.add(5, {1, 1});
  NaiveSet z = NaiveSet::merge(p, q);
  CHECK_FALSE(z.lookup(5));  // q's add never saw p's tag, so it stays live
  CHECK_FALSE(NaiveSet::merge(q, p).lookup(5));
}

TEST_CASE("remove cancels observed add tags and requires presence") {
  NaiveSet s;
  s.add(4, {1, 0});
  CHECK(s.remove(4));
  CHECK(s.tombstones().contains({1, 0}));
  CHECK_FALSE(s.lookup(4));

  NaiveSet before = s;
  CHECK_FALSE(s.remove(4));  // rejected: not present
  CHECK(s == before);
}

TEST_CASE("a concurrent add survives a remove") {
  NaiveSet base;
  base.add(6, {1, 0});
  NaiveSet p = base, q = base;
  CHECK(p.remove(6));
  q.add(6, {1, 1});
  CHECK(NaiveSet::merge(p, q).lookup(6));
  CHECK(NaiveSet::merge(q, p).lookup(6));
}

TEST_CASE("remove-wins then add sequentially resurrects the element") {
  NaiveSet s;
  s.remove_wins(9, {1, 0});
  s.add(9, {2, 0});
  CHECK(s.lookup(9));

  NaiveSet t;
  t.add(9, {1, 0});
  t.remove_wins(9, {2, 0});
  CHECK_FALSE(t.lookup(9));
}

TEST_CASE("three-way concurrent removeWins, add, remove leaves the element absent") {
  const Element e = 7;
  Script script{
      ScriptStep::operation(0, OpKind::Add, e),
      ScriptStep::sync(0, 1),
      ScriptStep::sync(0, 2),
      ScriptStep::operation(0, OpKind::RemoveWins, e),
      ScriptStep::operation(1, OpKind::Add, e),
      ScriptStep::operation(2, OpKind::Remove, e),
      ScriptStep::sync(0, 1),
      ScriptStep::sync(0, 2),
      ScriptStep::sync(1, 2),
      ScriptStep::sync(1, 0),
      ScriptStep::sync(2, 0),
      ScriptStep::sync(2, 1),
  };
  auto run = replay_naive(3, script);
  REQUIRE(all_equal(run.states));
  CHECK_FALSE(run.states[0].lookup(e));
  CHECK_FALSE(member(run.history, e));  // declarative evaluation agrees
}

TEST_CASE("merge identity, idempotence, and per-key union") {
  NaiveSet s;
  s.add(1, {1, 0});
  s.remove_wins(2, {2, 0});
  CHECK(NaiveSet::merge(s, NaiveSet{}) == s);
  CHECK(NaiveSet::merge(NaiveSet{}, s) == s);
  CHECK(NaiveSet::merge(s, s) == s);

  NaiveSet p, q;
  p.add(1, {1, 0});
  q.add(2, {1, 1});
  NaiveSet z = NaiveSet::merge(p, q);
  CHECK(z.lookup(1));
  CHECK(z.lookup(2));
}

TEST_CASE("merge laws hold on randomized reachable triples") {
  std::mt19937_64 rng(101);
  with_reachable_triples<NaiveSet>(
      rng, 1500, [](std::uint32_t) { return NaiveSet{}; }, random_naive_op,
      [](const NaiveSet& x, const NaiveSet& y, const NaiveSet& z) {
        NaiveSet xy = NaiveSet::merge(x, y);
        REQUIRE(xy == NaiveSet::merge(y, x));
        REQUIRE(NaiveSet::merge(xy, z) == NaiveSet::merge(x, NaiveSet::merge(y, z)));
        REQUIRE(NaiveSet::merge(x, x) == x);
      });
}

TEST_CASE("merging an input again changes nothing") {
  std::mt19937_64 rng(202);
  with_reachable_triples<NaiveSet>(
      rng, 600, [](std::uint32_t) { return NaiveSet{}; }, random_naive_op,
      [](const NaiveSet& x, const NaiveSet& y, const NaiveSet&) {
        NaiveSet xy = NaiveSet::merge(x, y);
        REQUIRE(NaiveSet::merge(xy, x) == xy);
        REQUIRE(NaiveSet::merge(xy, y) == xy);
      });
}

TEST_CASE("single-replica sequences match an ordinary set") {
  std::mt19937_64 rng(303);
  for (int round = 0; round < 400; ++round) {
    NaiveSet s;
    VersionVector gen(1);
    std::set<Element> ref;
    for (int step = 0; step < 30; ++step) {
      Element e = rng() % 5;
      switch (rng() % 3) {
        case 0:
          s.add(e, fresh_id(0, gen));
          ref.insert(e);
          break;
        case 1:
          CHECK(s.remove(e) == (ref.count(e) > 0));
          ref.erase(e);
          break;
        default:
          s.remove_wins(e, fresh_id(0, gen));
          ref.erase(e);
          break;
      }
      REQUIRE(s.lookup(e) == (ref.count(e) > 0));
    }
    for (Element e = 0; e < 5; ++e) REQUIRE(s.lookup(e) == (ref.count(e) > 0));
    REQUIRE(live_set(s) == ref);
    REQUIRE(s.live_count() == ref.size());
  }
}

TEST_CASE("fully merged membership matches the declarative evaluation") {
  // Randomized multi-replica runs; remove respects its precondition,
  // remove-wins is unrestricted (it has none here).
  std::mt19937_64 rng(404);
  for (int hcase = 0; hcase < 10000; ++hcase) {
    std::uint32_t n = 2 + rng() % 2;
    std::vector<NaiveSet> reps(n);
    std::vector<VectorClock> clocks(n, VectorClock(n));
    std::vector<VersionVector> gens(n, VersionVector(n));
    History hist;
    Element alphabet = 1 + rng() % 4;
    std::uint32_t ops = 4 + rng() % 11;
    std::uint32_t made = 0, budget = ops * 8;
    while (made < ops && budget-- > 0) {
      ReplicaId r = static_cast<ReplicaId>(rng() % n);
      if (rng() % 4 == 0) {
        ReplicaId q = static_cast<ReplicaId>(rng() % (n - 1));
        if (q >= r) ++q;
        reps[q].merge_in(reps[r]);
        clocks[q].join(clocks[r]);
        continue;
      }
      Element e = rng() % alphabet;
      OpKind k = static_cast<OpKind>(rng() % 3);
      if (k == OpKind::Remove && !reps[r].lookup(e)) continue;
      clocks[r].tick(r);
      switch (k) {
        case OpKind::Add: reps[r].add(e, fresh_id(r, gens[r])); break;
        case OpKind::Remove: reps[r].remove(e); break;
        case OpKind::RemoveWins: reps[r].remove_wins(e, fresh_id(r, gens[r])); break;
      }
      hist.append(k, e, r, clocks[r]);
      ++made;
    }
    NaiveSet all = reps[0];
    for (std::uint32_t r = 1; r < n; ++r) all.merge_in(reps[r]);
    for (Element e = 0; e < alphabet; ++e)
      REQUIRE_MESSAGE(all.lookup(e) == member(hist, e), "case " << hcase << " element " << e);
  }
}

TEST_CASE("tombstones never shrink") {
  std::mt19937_64 rng(505);
  NaiveSet s, other;
  VersionVector gen(2), other_gen(2);
  std::size_t last = 0;
  for (int step = 0; step < 300; ++step) {
    switch (rng() % 4) {
      case 0: s.add(rng() % 4, fresh_id(0, gen)); break;
      case 1: s.remove(rng() % 4); break;
      case 2: s.remove_wins(rng() % 4, fresh_id(0, gen)); break;
      default:
        random_naive_op(other, rng, 1, other_gen);
        s.merge_in(other);
        break;
    }
    REQUIRE(s.tombstones().size() >= last);
    last = s.tombstones().size();
  }
}

}  // TEST_SUITE
