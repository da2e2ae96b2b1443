#include <map>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "roster/bnb.hpp"
#include "roster/generator.hpp"
#include "roster/scatter.hpp"

using namespace roster;

namespace {

RosterInstance small_instance(std::uint64_t seed, int employees = 3, int weeks = 1, int shift_types = 2) {
  GeneratorConfig cfg;
  cfg.employees = employees;
  cfg.weeks = weeks;
  cfg.shift_types = shift_types;
  return generate_instance(cfg, seed);
}

// Brute-force instances together with every feasible roster they admit.
struct Enumerated {
  RosterInstance instance;
  std::vector<Roster> rosters;
  double optimum = kInf;
};

const std::vector<Enumerated>& enumerated() {
  static const std::vector<Enumerated> cache = [] {
    std::vector<Enumerated> out;
    for (std::uint64_t seed = 0; out.size() < 6 && seed < 40; ++seed) {
      Enumerated e{small_instance(seed), {}, kInf};
      const auto bf = oracle::brute_force(e.instance, ObjectiveWeights{}, nullptr, -1, nullptr, &e.rosters);
      if (e.rosters.size() < 8) continue;
      e.optimum = bf.objective;
      out.push_back(std::move(e));
    }
    return out;
  }();
  return cache;
}

std::vector<int> column_sums(const Roster& x) {
  std::vector<int> sums(static_cast<std::size_t>(x.blocks() * x.shift_types()), 0);
  for (int e = 0; e < x.employees(); ++e) {
    for (int j = 0; j < x.blocks(); ++j) {
      for (int k = 0; k < x.shift_types(); ++k) sums[j * x.shift_types() + k] += x(e, j, k);
    }
  }
  return sums;
}

std::array<int, 3> cells(const Roster& x, int e, int d) {
  return {x.shift_at(e, 3 * d), x.shift_at(e, 3 * d + 1), x.shift_at(e, 3 * d + 2)};
}

// Subsets the generation rule must produce, by direct enumeration over all
// bitmasks: every pair, and for size t >= 3 exactly the sets that contain the
// t - 2 best members plus two others.
std::set<std::vector<int>> expected_subsets(const std::vector<bool>& is_new) {
  const int r = static_cast<int>(is_new.size());
  std::set<std::vector<int>> out;
  if (r < 2) return out;
  for (int mask = 0; mask < (1 << r); ++mask) {
    std::vector<int> members;
    for (int i = 0; i < r; ++i) {
      if (mask & (1 << i)) members.push_back(i);
    }
    const int t = static_cast<int>(members.size());
    if (t < 2) continue;
    bool prefix = true;
    for (int i = 0; i < t - 2; ++i) prefix = prefix && (mask & (1 << i));
    if (!prefix) continue;
    bool any_new = false;
    for (int i : members) any_new = any_new || is_new[i];
    if (any_new) out.insert(members);
  }
  return out;
}

Roster tiny_roster(std::mt19937_64& rng) {
  Roster x(2, 3, 1);
  for (int j = 0; j < 3; ++j) {
    if (rng() % 3 == 0) x.set(static_cast<int>(rng() % 2), j, 0, true);
  }
  return x;
}

SearchContext context_for(const RosterInstance& in) {
  SearchContext ctx;
  ctx.instance = &in;
  return ctx;
}

}  // namespace

TEST_CASE("refset insertion follows the replacement rule") {
  std::mt19937_64 rng(3);
  int cases = 0, duplicates_rejected = 0, replaced = 0, ties_rejected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int capacity = 1 + static_cast<int>(rng() % 5);
    RefSet refset(capacity);
    std::vector<std::pair<Roster, double>> model;  // naive reference
    for (int step = 0; step < 12; ++step, ++cases) {
      const Roster x = tiny_roster(rng);
      const double f = static_cast<double>(rng() % 8);
      bool duplicate = false;
      for (const auto& [r, v] : model) duplicate = duplicate || r == x;
      bool expect = false;
      if (duplicate) {
        ++duplicates_rejected;
      } else if (static_cast<int>(model.size()) < capacity) {
        expect = true;
      } else {
        double worst = -kInf;
        std::size_t worst_at = 0;
        for (std::size_t i = 0; i < model.size(); ++i) {
          if (model[i].second >= worst) {
            worst = model[i].second;
            worst_at = i;
          }
        }
        if (f < worst) {
          expect = true;
          ++replaced;
          model.erase(model.begin() + static_cast<long>(worst_at));
        } else if (f == worst) {
          ++ties_rejected;
        }
      }
      if (expect) model.emplace_back(x, f);
      CHECK(update_refset(refset, ScoredRoster{x, f}) == expect);

      REQUIRE(refset.size() == static_cast<int>(model.size()));
      std::vector<double> want;
      for (const auto& [r, v] : model) want.push_back(v);
      std::sort(want.begin(), want.end());
      CHECK(refset.objectives() == want);
      for (int i = 0; i < refset.size(); ++i) {
        for (int k = 0; k < i; ++k) CHECK_FALSE(refset.members()[i].roster == refset.members()[k].roster);
      }
    }
  }
  CHECK(cases >= 1000);
  CHECK(duplicates_rejected > 50);
  CHECK(replaced > 50);
  CHECK(ties_rejected > 20);
}

TEST_CASE("refset edge cases") {
  Roster a(1, 3, 1), b(1, 3, 1), c(1, 3, 1);
  b.set(0, 0, 0, true);
  c.set(0, 1, 0, true);
  RefSet r(2);
  CHECK(r.update(a, 5));
  CHECK(r.update(b, 3));
  CHECK_FALSE(r.update(b, 3));  // equal-objective duplicate
  CHECK_FALSE(r.update(c, 9));  // worse than every member
  CHECK_FALSE(r.update(c, 5));  // ties the worst
  CHECK(r.update(c, 4));        // evicts a
  CHECK(r.objectives() == std::vector<double>{3, 4});
  CHECK(r.members()[0].is_new);
  CHECK_THROWS_AS(RefSet(0), InvalidInputError);
}

TEST_CASE("diversify keeps the best distinct members") {
  std::vector<ScoredRoster> pool;
  for (int i = 0; i < 6; ++i) {
    Roster x(1, 6, 1);
    x.set(0, i, 0, true);
    pool.push_back({x, 10.0 - i});
  }
  RefSet r = diversify(pool, 5);
  CHECK(r.size() == 5);
  CHECK(r.objectives() == std::vector<double>{5, 6, 7, 8, 9});
  for (const auto& m : r.members()) CHECK(m.is_new);

  pool.resize(3);
  CHECK(diversify(pool, 5).size() == 3);
  pool.push_back(pool.front());
  CHECK(diversify(pool, 5).size() == 3);
  CHECK_THROWS_AS(diversify({}, 5), InvalidInputError);
}

TEST_CASE("subset generation matches direct enumeration") {
  std::mt19937_64 rng(17);
  int cases = 0;
  for (int trial = 0; trial < 1200; ++trial, ++cases) {
    const int r = static_cast<int>(rng() % 7);
    std::vector<RefSetMember> members;
    std::vector<bool> is_new;
    for (int i = 0; i < r; ++i) {
      Roster x(1, 8, 1);
      x.set(0, i, 0, true);
      members.push_back({x, static_cast<double>(i), true});
      is_new.push_back(rng() % 3 == 0);
    }
    // Old members are those that went through a generation round before the
    // new ones arrived.
    RefSet target(std::max(r, 1));
    for (int i = 0; i < r; ++i) {
      if (!is_new[i]) target.update(members[i].roster, members[i].objective);
    }
    generate_subsets(target);
    for (int i = 0; i < r; ++i) {
      if (is_new[i]) target.update(members[i].roster, members[i].objective);
    }
    REQUIRE(target.size() == r);
    for (int i = 0; i < r; ++i) REQUIRE(target.members()[i].is_new == is_new[i]);

    const auto got = generate_subsets(target);
    const std::set<std::vector<int>> got_set(got.begin(), got.end());
    CHECK(got_set.size() == got.size());
    CHECK(got_set == expected_subsets(is_new));
    for (const auto& m : target.members()) CHECK_FALSE(m.is_new);
    CHECK(generate_subsets(target).empty());
  }
  CHECK(cases >= 1000);
}

TEST_CASE("subset counts for a full set of five") {
  RefSet r(5);
  for (int i = 0; i < 5; ++i) {
    Roster x(1, 5, 1);
    x.set(0, i, 0, true);
    r.update(x, i);
  }
  const auto subsets = generate_subsets(r);
  std::map<std::size_t, int> by_size;
  for (const auto& s : subsets) ++by_size[s.size()];
  CHECK(by_size[2] == 10);
  CHECK(by_size[3] == 6);
  CHECK(by_size[4] == 3);
  CHECK(by_size[5] == 1);

  RefSet two(5);
  two.update(Roster(1, 1, 1), 1);
  Roster y(1, 1, 1);
  y.set(0, 0, 0, true);
  two.update(y, 2);
  CHECK(generate_subsets(two).size() == 1);

  RefSet one(5);
  one.update(y, 2);
  CHECK(generate_subsets(one).empty());
}

TEST_CASE("day swaps keep cover, feasibility and never worsen") {
  const auto& pool = enumerated();
  REQUIRE(pool.size() >= 3);
  std::mt19937_64 rng(5);
  int cases = 0, improved = 0;
  for (int trial = 0; trial < 1000; ++trial, ++cases) {
    const Enumerated& en = pool[trial % pool.size()];
    SearchContext ctx = context_for(en.instance);
    ctx.first_free_day = trial % 4 == 0 ? static_cast<int>(rng() % 7) : 0;
    const Roster& start = en.rosters[rng() % en.rosters.size()];
    const double f0 = ctx.evaluate(start);
    std::mt19937_64 local(rng());
    const ScoredRoster out = improve(ctx, ScoredRoster{start, f0}, 1 + static_cast<int>(rng() % 60), local);
    CHECK(column_sums(out.roster) == column_sums(start));
    CHECK(oracle::feasible(en.instance, out.roster));
    CHECK(out.objective <= f0);
    CHECK(out.objective == doctest::Approx(oracle::total(en.instance, out.roster, ctx.weights)).epsilon(1e-12));
    CHECK(out.objective >= en.optimum - 1e-9);
    for (int e = 0; e < en.instance.employees; ++e) {
      for (int d = 0; d < ctx.first_free_day; ++d) CHECK(cells(out.roster, e, d) == cells(start, e, d));
    }
    if (out.objective < f0) ++improved;
  }
  CHECK(cases >= 1000);
  CHECK(improved > 100);
}

TEST_CASE("improve leaves single-employee rosters alone") {
  const RosterInstance in = small_instance(2, 1, 1, 1);
  const SearchContext ctx = context_for(in);
  Roster x = Roster::empty_for(in);
  x.set(0, 0, 0, true);
  std::mt19937_64 rng(1);
  const ScoredRoster out = improve(ctx, ScoredRoster{x, 7.0}, 100, rng);
  CHECK(out.roster == x);
  CHECK(out.objective == 7.0);
}

TEST_CASE("offspring inherit unanimous days and are feasible") {
  const auto& pool = enumerated();
  std::mt19937_64 rng(11);
  int cases = 0, accepted = 0;
  for (int trial = 0; trial < 1200; ++trial, ++cases) {
    const Enumerated& en = pool[trial % pool.size()];
    const SearchContext ctx = context_for(en.instance);
    const int count = 2 + static_cast<int>(rng() % 3);
    std::vector<const Roster*> parents;
    for (int i = 0; i < count; ++i) parents.push_back(&en.rosters[rng() % en.rosters.size()]);
    std::mt19937_64 local(rng());
    const std::optional<Roster> child = combine(ctx, parents, local);
    if (!child) continue;
    ++accepted;
    CHECK(oracle::feasible(en.instance, *child));
    for (int e = 0; e < en.instance.employees; ++e) {
      for (int d = 0; d < en.instance.days(); ++d) {
        bool unanimous = true;
        for (const Roster* p : parents) unanimous = unanimous && cells(*p, e, d) == cells(*parents[0], e, d);
        if (unanimous) CHECK(cells(*child, e, d) == cells(*parents[0], e, d));
      }
    }
  }
  CHECK(cases >= 1000);
  CHECK(accepted > cases / 2);
}

TEST_CASE("combine on four-employee pools") {
  int combined = 0, accepted = 0;
  for (std::uint64_t seed = 0; seed < 12 && combined < 200; ++seed) {
    const RosterInstance in = small_instance(seed, 4, 1, 2);
    const BuiltModel built = build_milp(in, ObjectiveWeights{});
    BnbConfig cfg;
    cfg.node_limit = 300;
    BranchAndBound bnb(built.model, cfg);
    bnb.run();
    std::vector<Roster> rosters;
    for (const auto& s : bnb.pool().members()) rosters.push_back(extract_roster(built.map, s.x));
    if (rosters.size() < 2) continue;
    const SearchContext ctx = context_for(in);
    for (int t = 0; t < 25; ++t, ++combined) {
      std::mt19937_64 rng(seed * 1000 + t);
      std::vector<const Roster*> parents{&rosters[rng() % rosters.size()], &rosters[rng() % rosters.size()]};
      if (rosters.size() > 2) parents.push_back(&rosters[rng() % rosters.size()]);
      const auto child = combine(ctx, parents, rng);
      if (!child) continue;
      ++accepted;
      CHECK(oracle::feasible(in, *child));
    }
  }
  CHECK(combined >= 200);
  CHECK(accepted > 0);
}

TEST_CASE("identical parents reproduce themselves") {
  const Enumerated& en = enumerated().front();
  const SearchContext ctx = context_for(en.instance);
  for (std::size_t i = 0; i < std::min<std::size_t>(en.rosters.size(), 20); ++i) {
    std::mt19937_64 rng(i);
    const auto child = combine(ctx, {&en.rosters[i], &en.rosters[i]}, rng);
    REQUIRE(child);
    CHECK(*child == en.rosters[i]);
  }
}

TEST_CASE("a single disputed day goes either way") {
  // Find two feasible rosters that differ only on one day.
  for (const Enumerated& en : enumerated()) {
    const SearchContext ctx = context_for(en.instance);
    for (std::size_t a = 0; a < en.rosters.size(); ++a) {
      for (std::size_t b = a + 1; b < en.rosters.size(); ++b) {
        const Roster &p = en.rosters[a], &q = en.rosters[b];
        std::set<int> days;
        for (int e = 0; e < p.employees(); ++e) {
          for (int d = 0; d < en.instance.days(); ++d) {
            if (cells(p, e, d) != cells(q, e, d)) days.insert(d);
          }
        }
        if (days.size() != 1) continue;
        int as_p = 0, as_q = 0;
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
          std::mt19937_64 rng(seed);
          const auto child = combine(ctx, {&p, &q}, rng);
          REQUIRE(child);
          CHECK(oracle::feasible(en.instance, *child));
          as_p += *child == p;
          as_q += *child == q;
        }
        CHECK(as_p > 0);
        CHECK(as_q > 0);
        return;
      }
    }
  }
  FAIL("no pair of rosters differing on a single day");
}

TEST_CASE("scatter search terminates at the bound") {
  const Enumerated& en = enumerated().front();
  const SearchContext ctx = context_for(en.instance);
  std::vector<ScoredRoster> pool;
  for (const Roster& x : en.rosters) pool.push_back({x, ctx.evaluate(x)});
  const ScatterResult r = run_scatter_search(ctx, diversify(pool, 5), en.optimum, ScatterConfig{});
  CHECK(r.status == ScatterStatus::kGapReached);
  CHECK(r.trace.size() == 1);
  CHECK(r.trace.front().gap == 0.0);
  CHECK(r.best.objective == doctest::Approx(en.optimum));
}

TEST_CASE("an all-old reference set stagnates") {
  const Enumerated& en = enumerated().front();
  const SearchContext ctx = context_for(en.instance);
  RefSet refset(5);
  for (std::size_t i = 0; i < 4; ++i) refset.update(en.rosters[en.rosters.size() - 1 - i], ctx.evaluate(en.rosters[en.rosters.size() - 1 - i]));
  refset.mark_all_old();
  const ScatterResult r = run_scatter_search(ctx, refset, -kInf, ScatterConfig{});
  CHECK(r.status == ScatterStatus::kStagnated);
  CHECK(r.trace.size() == 1);
}

TEST_CASE("scatter search runs are monotone, feasible and replayable") {
  int reached = 0;
  for (const Enumerated& en : enumerated()) {
    const SearchContext ctx = context_for(en.instance);
    // Start from the five worst rosters to leave room for improvement.
    std::vector<ScoredRoster> all;
    for (const Roster& x : en.rosters) all.push_back({x, ctx.evaluate(x)});
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.objective > b.objective; });
    all.resize(5);
    ScatterConfig cfg;
    cfg.gap_target = 0.01;
    cfg.max_generations = 30;
    cfg.local_search.rng_seed = 9;
    std::vector<Roster> inserted;
    ScatterCallbacks cb;
    cb.on_improvement = [&](const ScoredRoster& s, double) { inserted.push_back(s.roster); };
    const ScatterResult r = run_scatter_search(ctx, diversify(all, 5), en.optimum, cfg, cb);
    for (std::size_t g = 1; g < r.trace.size(); ++g) {
      CHECK(r.trace[g].best <= r.trace[g - 1].best);
      CHECK(r.trace[g].generation == static_cast<int>(g));
      CHECK(r.trace[g].subsets > 0);
      CHECK(r.trace[g].subseeds.size() == static_cast<std::size_t>(r.trace[g].subsets));
    }
    for (const auto& m : r.refset.members()) CHECK(oracle::feasible(en.instance, m.roster));
    for (const Roster& x : inserted) CHECK(oracle::feasible(en.instance, x));
    CHECK(r.best.objective >= en.optimum - 1e-9);
    CHECK(r.best.objective == doctest::Approx(oracle::total(en.instance, r.best.roster, ctx.weights)));
    if (r.status == ScatterStatus::kGapReached) ++reached;

    const ScatterResult again = run_scatter_search(ctx, diversify(all, 5), en.optimum, cfg);
    REQUIRE(again.trace.size() == r.trace.size());
    for (std::size_t g = 0; g < r.trace.size(); ++g) {
      CHECK(again.trace[g].refset == r.trace[g].refset);
      CHECK(again.trace[g].subseeds == r.trace[g].subseeds);
    }
    CHECK(again.best.roster == r.best.roster);
  }
  CHECK(reached > 0);
}
