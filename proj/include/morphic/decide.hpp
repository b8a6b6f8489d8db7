#pragma once

// Equality of pure morphic words generated by primitive morphisms.
//
// For primitive g, h over n >= 2 letters with g^ω(x), h^ω(x) defined, put
// f1 = g^{2n-2} h^{2n-2} and f2 = h^{2n-2} g^{2n-2}. Then g^ω(x) = h^ω(x) iff
// BAL(f1, f2) is finite and f1(W), f2(W) are prefix-comparable for
// W = f1^{A(n)}(x), A(n) = ⌊9 n³ √(n ln n)⌋.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morphic/analysis.hpp"
#include "morphic/balance.hpp"
#include "morphic/certified.hpp"
#include "morphic/core.hpp"
#include "morphic/engine.hpp"
#include "morphic/oracle.hpp"

namespace morphic {

/// ⌊9 n³ √(n ln n)⌋
inline std::uint64_t a_of_n(unsigned n) {
  if (n < 2) throw PreconditionError({"A(n) is defined for n >= 2"});
  const BigInt v = certified::floor_of([n](mpfr_ptr out, mpfr_rnd_t rnd) {
    certified::sqrt_c_n_log_n(out, 1, n, rnd);
    mpfr_mul_ui(out, out, 9UL * n * n * n, rnd);
  });
  return v.convert_to<std::uint64_t>();
}

/// (f1, f2) = (g^{2n-2} h^{2n-2}, h^{2n-2} g^{2n-2}) as unmaterialized towers.
inline std::pair<MorphismTower, MorphismTower> build_f1_f2(const Morphism& g, const Morphism& h) {
  if (!(g.alphabet() == h.alphabet())) throw InputError("g and h are defined over different alphabets");
  const std::size_t n = g.alphabet().size();
  if (n < 2) throw PreconditionError({"the alphabet must have at least two letters"});
  const std::size_t e = 2 * n - 2;
  return {MorphismTower::repeat(g, e).then(MorphismTower::repeat(h, e)),
          MorphismTower::repeat(h, e).then(MorphismTower::repeat(g, e))};
}

/// The (gh, hg) pair whose fixed points agree iff those of g and h do.
inline std::pair<Morphism, Morphism> reduce_to_compositions(const Morphism& g, const Morphism& h, Letter x) {
  Morphism gh = compose(g, h);
  Morphism hg = compose(h, g);
  std::vector<std::string> failures;
  if (!omega_exists(gh, x)) failures.emplace_back("(gh)^ω(x) does not exist");
  if (!omega_exists(hg, x)) failures.emplace_back("(hg)^ω(x) does not exist");
  if (!failures.empty()) throw PreconditionError(std::move(failures));
  return {std::move(gh), std::move(hg)};
}

struct DecisionConfig {
  std::size_t overflow_cap = 1'000'000;
  BigRational a_multiplier = 1;
  std::size_t materialization_budget = kDefaultMaterializationBudget;
  bool locate_mismatch_on_balance_failure = false;
  std::size_t locate_budget = 200'000;
  bool memoize = true;
};

struct MismatchWitness {
  BigInt position;
  Letter left = 0;
  Letter right = 0;

  friend bool operator==(const MismatchWitness&, const MismatchWitness&) = default;
};

struct Diagnostics {
  std::size_t n = 0;
  std::uint64_t a_of_n = 0;
  std::uint64_t a_effective = 0;
  std::size_t f1_layers = 0;
  std::size_t f2_layers = 0;
  std::size_t word_layers = 0;
  bool identical_shortcut = false;
  std::optional<bool> balance_finite;
  std::uint64_t p_bound = 0;
  std::vector<std::optional<std::uint64_t>> balance_periods;  // per letter
  std::optional<BigInt> word_length;
  EngineStats engine;
  std::optional<BigInt> theoretical_overflow_cap;

  friend bool operator==(const Diagnostics& a, const Diagnostics& b) {
    return a.n == b.n && a.a_of_n == b.a_of_n && a.a_effective == b.a_effective && a.f1_layers == b.f1_layers &&
           a.f2_layers == b.f2_layers && a.word_layers == b.word_layers &&
           a.identical_shortcut == b.identical_shortcut && a.balance_finite == b.balance_finite &&
           a.p_bound == b.p_bound && a.balance_periods == b.balance_periods && a.word_length == b.word_length &&
           a.engine.memo_entries == b.engine.memo_entries && a.engine.distinct_states == b.engine.distinct_states &&
           a.engine.leaves_expanded == b.engine.leaves_expanded && a.engine.max_tail == b.engine.max_tail &&
           a.theoretical_overflow_cap == b.theoretical_overflow_cap;
  }
};

struct Verdict {
  enum class Outcome { Equal, NotEqual };
  enum class Reason { None, BalanceInfinite, PrefixMismatch };

  Outcome outcome = Outcome::Equal;
  Reason reason = Reason::None;
  /// Always set for PrefixMismatch; set for BalanceInfinite only when the
  /// optional oracle search found one.
  std::optional<MismatchWitness> mismatch;
  Diagnostics diagnostics;

  bool equal() const noexcept { return outcome == Outcome::Equal; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline std::uint64_t scaled_depth(std::uint64_t a, const BigRational& multiplier) {
  if (multiplier < 1) throw InputError("the multiplier must be at least 1");
  const BigInt num = numerator(multiplier) * a;
  const BigInt den = denominator(multiplier);
  BigInt q = num / den;
  if (q * den < num) ++q;
  return q.convert_to<std::uint64_t>();
}

inline void check_preconditions(const Morphism& g, const Morphism& h, Letter x) {
  if (!(g.alphabet() == h.alphabet())) throw InputError("g and h are defined over different alphabets");
  if (x >= g.size()) throw InputError("seed letter outside the alphabet");
  std::vector<std::string> failures;
  if (g.size() < 2) failures.emplace_back("the alphabet must have at least two letters");
  if (!is_primitive(g)) failures.emplace_back("g is not primitive");
  if (!is_primitive(h)) failures.emplace_back("h is not primitive");
  const std::string seed = g.alphabet().symbol(x);
  if (!omega_exists(g, x)) failures.emplace_back("g^ω(" + seed + ") does not exist");
  if (!omega_exists(h, x)) failures.emplace_back("h^ω(" + seed + ") does not exist");
  if (!failures.empty()) throw PreconditionError(std::move(failures));
}

inline Verdict decide_equality(const Morphism& g, const Morphism& h, Letter x, const DecisionConfig& cfg = {}) {
  check_preconditions(g, h, x);
  const auto n = static_cast<unsigned>(g.size());

  Verdict verdict;
  Diagnostics& diag = verdict.diagnostics;
  diag.n = n;
  diag.a_of_n = a_of_n(n);
  diag.a_effective = scaled_depth(diag.a_of_n, cfg.a_multiplier);

  if (g == h) {
    diag.identical_shortcut = true;
    return verdict;
  }

  auto [f1, f2] = build_f1_f2(g, h);
  diag.f1_layers = f1.size();
  diag.f2_layers = f2.size();

  const auto balance =
      analyze_balance(BalanceInstance::make(f1, f2), scaled_depth(unity_order_bound(n), cfg.a_multiplier));
  diag.balance_finite = balance.finite;
  diag.p_bound = balance.p_bound;
  for (const auto& lb : balance.letters) diag.balance_periods.push_back(lb.period);

  if (!balance.finite) {
    verdict.outcome = Verdict::Outcome::NotEqual;
    verdict.reason = Verdict::Reason::BalanceInfinite;
    if (cfg.locate_mismatch_on_balance_failure) {
      const auto report = oracle::naive_equal_up_to(g, h, x, cfg.locate_budget);
      if (report.mismatch()) verdict.mismatch = MismatchWitness{report.position, report.left, report.right};
    }
    return verdict;
  }

  BigInt m1 = 0;
  BigInt m2 = 0;
  for (const auto& v : image_length_row(f1)) m1 = std::max(m1, v);
  for (const auto& v : image_length_row(f2)) m2 = std::max(m2, v);
  diag.theoretical_overflow_cap = BigInt(diag.a_effective) * m1 * bal_upper_bound(n, std::max(m1, m2));

  const auto word = LayeredWordSpec::power(f1, diag.a_effective, x);
  diag.word_layers = word.depth();
  diag.word_length = spec_length(word);

  EngineOptions options;
  options.overflow_cap = cfg.overflow_cap;
  options.materialization_budget = cfg.materialization_budget;
  options.memoize = cfg.memoize;
  const auto cmp = compare_images(word, f1, f2, options, &diag.engine);
  switch (cmp.kind) {
    case Comparability::Kind::Comparable:
      break;
    case Comparability::Kind::Mismatch:
      verdict.outcome = Verdict::Outcome::NotEqual;
      verdict.reason = Verdict::Reason::PrefixMismatch;
      verdict.mismatch = MismatchWitness{cmp.position, cmp.left, cmp.right};
      break;
    case Comparability::Kind::CapExceeded:
      throw ResourceLimitError("overflow between the two image streams exceeded the cap of " +
                               std::to_string(cfg.overflow_cap) + " symbols at position " + cmp.position.str());
  }
  return verdict;
}

}  // namespace morphic
