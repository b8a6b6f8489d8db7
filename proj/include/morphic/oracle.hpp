#pragma once

// Brute-force reference implementations. Everything here materializes words
// directly with apply() and fails loudly when a budget is exceeded.

#include <cstddef>
#include <span>
#include <vector>

#include "morphic/analysis.hpp"
#include "morphic/core.hpp"
#include "morphic/engine.hpp"

namespace morphic::oracle {

inline constexpr std::size_t kDefaultBudget = 10'000'000;

struct OracleReport {
  enum class Kind { NoMismatchWithin, MismatchAt };

  Kind kind = Kind::NoMismatchWithin;
  std::size_t limit = 0;
  std::size_t position = 0;
  Letter left = 0;
  Letter right = 0;
  std::size_t examined = 0;

  bool mismatch() const noexcept { return kind == Kind::MismatchAt; }
};

/// Pref_L(m^ω(x)) by repeated application, truncating to L after each step.
inline Word omega_prefix(const Morphism& m, Letter x, std::size_t length, std::size_t budget = kDefaultBudget) {
  if (!omega_exists(m, x)) throw PreconditionError({"m^ω(x) does not exist for the requested seed"});
  if (length > budget) throw ResourceLimitError("oracle prefix length exceeds its budget");
  Word w{x};
  while (w.size() < length) {
    Word next;
    for (Letter a : w) {
      const Word& img = m.image(a);
      next.insert(next.end(), img.begin(), img.end());
      if (next.size() >= length) break;
    }
    w = std::move(next);
  }
  w.resize(std::min(w.size(), length));
  return w;
}

inline OracleReport naive_equal_up_to(const Morphism& g, const Morphism& h, Letter x, std::size_t length,
                                      std::size_t budget = kDefaultBudget) {
  if (!(g.alphabet() == h.alphabet())) throw InputError("oracle morphisms use different alphabets");
  const Word u = omega_prefix(g, x, length, budget);
  const Word v = omega_prefix(h, x, length, budget);
  OracleReport r;
  r.limit = length;
  for (std::size_t i = 0; i < length; ++i) {
    r.examined = i + 1;
    if (u[i] != v[i]) {
      r.kind = OracleReport::Kind::MismatchAt;
      r.position = i;
      r.left = u[i];
      r.right = v[i];
      return r;
    }
  }
  return r;
}

/// max over letters x and 0 <= k <= k_max of | |g g^k(x)| - |h g^k(x)| |,
/// tracking the Parikh vectors of g^k(x) column by column.
inline BigInt naive_bal(const MorphismTower& g, const MorphismTower& h, std::size_t k_max) {
  if (!(g.alphabet() == h.alphabet())) throw InputError("oracle towers use different alphabets");
  const std::size_t n = g.alphabet().size();
  const IncidenceMatrix mg = tower_matrix(g);
  const BigVector len_g = image_length_row(g);
  const BigVector len_h = image_length_row(h);
  BigInt best = 0;
  for (std::size_t x = 0; x < n; ++x) {
    BigVector v(n);
    v[x] = 1;
    for (std::size_t k = 0; k <= k_max; ++k) {
      const BigInt diff = abs(dot(len_g, v) - dot(len_h, v));
      if (diff > best) best = diff;
      v = mg * v;
    }
  }
  return best;
}

inline BigInt naive_bal(const Morphism& g, const Morphism& h, std::size_t k_max) {
  return naive_bal(MorphismTower{g}, MorphismTower{h}, k_max);
}

/// w ∈ COMP(g, h)
inline bool naive_comp_member(const Morphism& g, const Morphism& h, std::span<const Letter> w) {
  return comparable_words(g.apply(w), h.apply(w)).is_comparable();
}

/// g_{i_k}(… g_{i_1}(x) …) for seq = (i_1, …, i_k), each entry 1 or 2.
inline Word mixed_composition(std::span<const int> seq, const Morphism& g1, const Morphism& g2, Letter x,
                              std::size_t budget = kDefaultBudget) {
  Word w{x};
  for (int i : seq) {
    if (i != 1 && i != 2) throw InputError("mixed composition indices must be 1 or 2");
    const Morphism& m = i == 1 ? g1 : g2;
    if (tower_image_length(MorphismTower{m}, w) > budget) {
      throw ResourceLimitError("mixed composition exceeds the oracle budget");
    }
    w = m.apply(w);
  }
  return w;
}

}  // namespace morphic::oracle
