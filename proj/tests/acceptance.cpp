// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. A criterion fails if its check fails or it overruns its
// time limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "morphic/morphic.hpp"
#include "support/generators.hpp"
#include "support/properties.hpp"

namespace {

using namespace morphic;
using morphic::testing::Rng;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double limit_seconds;
  std::function<Outcome()> check;
};

const Morphism kThueMorse = Morphism::from_rules({{"a", "ab"}, {"b", "ba"}});
const Morphism kH = Morphism::from_rules({{"a", "ab"}, {"b", "aa"}});
const Morphism kFib = Morphism::from_rules({{"a", "ab"}, {"b", "a"}});
const Morphism kFib2 = Morphism::from_rules({{"a", "aba"}, {"b", "ab"}});

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::map<std::string, std::string> run_constants_script() {
  const std::string cmd = std::string(MORPHIC_PYTHON) + " " + MORPHIC_CHECK_CONSTANTS;
  std::map<std::string, std::string> values;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return values;
  char buf[256];
  while (fgets(buf, sizeof buf, pipe)) {
    std::istringstream line(buf);
    std::string name, arg, value;
    if (line >> name >> arg >> value) values[name + " " + arg] = value;
  }
  pclose(pipe);
  return values;
}

Outcome constants() {
  if (a_of_n(2) != 84) return fail("a_of_n(2) = " + std::to_string(a_of_n(2)));
  if (unity_order_bound(2) != 17) return fail("unity_order_bound(2) = " + std::to_string(unity_order_bound(2)));
  const auto reference = run_constants_script();
  if (reference.empty()) return fail("independent evaluation script produced no output");
  std::size_t compared = 0;
  for (unsigned n = 2; n <= 12; ++n) {
    const auto a = reference.find("a_of_n " + std::to_string(n));
    const auto p = reference.find("unity_order_bound " + std::to_string(n));
    if (a == reference.end() || p == reference.end()) return fail("script is missing n = " + std::to_string(n));
    if (a->second != std::to_string(a_of_n(n))) return fail("a_of_n(" + std::to_string(n) + ") differs");
    if (p->second != std::to_string(unity_order_bound(n))) {
      return fail("unity_order_bound(" + std::to_string(n) + ") differs");
    }
    compared += 2;
  }
  for (int m = 1; m <= 3; ++m) {
    const auto b = reference.find("bal_upper_bound_2 " + std::to_string(m));
    if (b == reference.end() || b->second != bal_upper_bound(2, m).str()) {
      return fail("bal_upper_bound(2, " + std::to_string(m) + ") differs");
    }
    ++compared;
  }
  return {true, "A(2)=84, p(2)=17; " + std::to_string(compared) + " values match the mpmath script"};
}

Outcome known_equal() {
  const auto v = decide_equality(kFib, kFib2, 0);
  if (!v.equal()) return fail("verdict NotEqual");
  const auto r = oracle::naive_equal_up_to(kFib, kFib2, 0, 1'000'000);
  if (r.mismatch()) return fail("oracle mismatch at " + std::to_string(r.position));
  return {true, "Equal; oracle clean to 10^6"};
}

Outcome known_unequal() {
  const auto v = decide_equality(kThueMorse, kH, 0);
  if (v.equal() || !v.mismatch) return fail("no mismatch reported");
  if (v.mismatch->position != 2) return fail("mismatch at " + v.mismatch->position.str());
  const auto r = oracle::naive_equal_up_to(kThueMorse, kH, 0, 1000);
  if (!r.mismatch() || r.position != 2 || r.left != v.mismatch->left || r.right != v.mismatch->right) {
    return fail("oracle disagrees");
  }
  return {true, "NotEqual at position 2, oracle agrees"};
}

Outcome corpus_agreement() {
  constexpr std::size_t kLimit = 200'000;
  const auto corpus = morphic::testing::build_corpus(600, 15);
  std::size_t equal = 0;
  std::size_t mismatch = 0;
  std::size_t balance = 0;
  std::size_t disagreements = 0;
  std::string first;
  for (const auto& c : corpus) {
    const auto v = decide_equality(c.g, c.h, c.x);
    const auto r = oracle::naive_equal_up_to(c.g, c.h, c.x, kLimit);
    bool agree = true;
    if (v.equal()) {
      ++equal;
      agree = !r.mismatch();
    } else if (v.reason == Verdict::Reason::PrefixMismatch) {
      ++mismatch;
      if (v.mismatch->position <= kLimit) {
        agree = r.mismatch() && v.mismatch->position == r.position && v.mismatch->left == r.left &&
                v.mismatch->right == r.right;
      }
    } else {
      ++balance;
    }
    if (!agree) {
      ++disagreements;
      if (first.empty()) first = c.g.to_string() + " | " + c.h.to_string();
    }
  }
  std::ostringstream d;
  d << corpus.size() << " pairs: " << equal << " Equal, " << mismatch << " PrefixMismatch, " << balance
    << " BalanceInfinite; " << disagreements << " disagreements";
  if (!first.empty()) d << " (first: " << first << ")";
  return {disagreements == 0 && corpus.size() >= 500, d.str()};
}

Outcome balance_oracle() {
  Rng rng(5);
  std::size_t finite = 0;
  for (int it = 0; it < 200; ++it) {
    const auto [t1, t2] = morphic::testing::random_balance_pair(rng, it);
    const bool expected = morphic::testing::vector_cycle_bal_finite(t1, t2);
    if (bal_finite(t1, t2) != expected) return fail("disagreement on pair " + std::to_string(it));
    finite += expected;
  }
  if (bal_finite(MorphismTower{kFib}, MorphismTower{kFib, kFib})) return fail("BAL(φ, φ²) reported finite");
  for (int it = 0; it < 50; ++it) {
    const auto t = morphic::testing::random_tower(rng, 2 + it % 2, 1 + it % 3, 3);
    if (!bal_finite(t, t)) return fail("BAL(t, t) reported infinite");
  }
  return {true, "200 pairs agree (" + std::to_string(finite) + " finite); φ/φ² infinite; 50 t/t finite"};
}

Outcome engine_oracle() {
  Rng rng(6);
  std::size_t mismatches = 0;
  EngineOptions no_memo;
  no_memo.memoize = false;
  for (int it = 0; it < 200; ++it) {
    const auto c = morphic::testing::random_engine_case(rng, it, 10'000);
    const Word w = stream_prefix(c.spec, 10'000);
    const auto expected = comparable_words(apply_tower(c.f1, w), apply_tower(c.f2, w));
    if (compare_images(c.spec, c.f1, c.f2) != expected) return fail("memoized run differs on case " + std::to_string(it));
    if (compare_images(c.spec, c.f1, c.f2, no_memo) != expected) {
      return fail("unmemoized run differs on case " + std::to_string(it));
    }
    mismatches += expected.kind == Comparability::Kind::Mismatch;
  }
  return {true, "200 specs agree with and without memo (" + std::to_string(mismatches) + " mismatches)"};
}

Outcome growth_and_spread() {
  Rng rng(7);
  for (int it = 0; it < 200; ++it) {
    const auto m = morphic::testing::random_primitive(rng, 2 + it % 3, 4);
    if (auto why = morphic::testing::check_growth_and_spread(m); !why.empty()) return fail(why);
  }
  return {true, "200 primitive morphisms"};
}

Outcome stabilization() {
  Rng rng(8);
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 2 + it % 3;
    const auto m = morphic::testing::random_growing(rng, n, 3);
    const Word w = morphic::testing::random_word(rng, n, 1 + it % 5);
    if (auto why = morphic::testing::check_stabilization(m, w); !why.empty()) return fail(why);
  }
  return {true, "100 growing morphisms, n in {2,3,4}"};
}

Outcome period_exhaustive() {
  std::size_t words = 0;
  for (std::size_t len = 1; len <= 12; ++len) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
      Word w(len);
      for (std::size_t i = 0; i < len; ++i) w[i] = static_cast<Letter>((bits >> i) & 1);
      if (period(w) != morphic::testing::period_by_scan(w)) return fail("differs on a word of length " + std::to_string(len));
      ++words;
    }
  }
  return {true, std::to_string(words) + " binary words"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "certified constants", 1, constants},
      {"AC2", "known-equal instance", 10, known_equal},
      {"AC3", "known-unequal instance", 10, known_unequal},
      {"AC4", "corpus agreement with oracle", 600, corpus_agreement},
      {"AC5", "balance vs vector-cycle oracle", 60, balance_oracle},
      {"AC6", "engine vs materialized comparison", 60, engine_oracle},
      {"AC7", "growth and alphabet spread", 60, growth_and_spread},
      {"AC8", "prefix/factor stabilization", 120, stabilization},
      {"AC9", "period exhaustive", 60, period_exhaustive},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.limit_seconds) o = fail("over time limit; " + o.detail);
    failures += !o.ok;
    std::printf("%s %s %s (%.2fs, limit %.0fs): %s\n", o.ok ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), secs,
                c.limit_seconds, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
