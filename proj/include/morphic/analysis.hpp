#pragma once

// Structural predicates on morphisms and small word-combinatorics utilities.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "morphic/core.hpp"

namespace morphic {

namespace detail {

using BoolMatrix = std::vector<std::vector<bool>>;

inline BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
  const std::size_t n = a.size();
  BoolMatrix c(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!a[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b[k][j]) c[i][j] = true;
      }
    }
  }
  return c;
}

/// reach[a][b]: b occurs in m^k(a) for some k >= 1.
inline BoolMatrix reachability(const Morphism& m) {
  const std::size_t n = m.size();
  BoolMatrix reach(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a) {
    for (Letter b : m.image(static_cast<Letter>(a))) reach[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }
  return reach;
}

/// Letters whose iterated images eventually become empty.
inline std::vector<bool> mortal_letters(const Morphism& m) {
  std::vector<bool> mortal(m.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t a = 0; a < m.size(); ++a) {
      if (mortal[a]) continue;
      const Word& img = m.image(static_cast<Letter>(a));
      if (std::all_of(img.begin(), img.end(), [&](Letter b) { return mortal[b]; })) {
        mortal[a] = true;
        changed = true;
      }
    }
  }
  return mortal;
}

}  // namespace detail

/// True iff some power m^k has every letter occurring in every m^k(a).
/// A nonnegative matrix is primitive iff its power at the Wielandt exponent
/// n^2 - 2n + 2 is positive.
inline bool is_primitive(const Morphism& m) {
  const std::size_t n = m.size();
  if (n == 0) return false;
  detail::BoolMatrix base(n, std::vector<bool>(n, false));
  for (std::size_t b = 0; b < n; ++b) {
    for (Letter a : m.image(static_cast<Letter>(b))) base[a][b] = true;
  }
  std::size_t k = n * n - 2 * n + 2;
  detail::BoolMatrix result;
  bool have_result = false;
  while (k > 0) {
    if (k & 1U) {
      result = have_result ? detail::bool_product(result, base) : base;
      have_result = true;
    }
    k >>= 1U;
    if (k > 0) base = detail::bool_product(base, base);
  }
  for (const auto& row : result) {
    for (bool v : row) {
      if (!v) return false;
    }
  }
  return true;
}

/// True iff |m^i(a)| -> infinity for every letter a. A letter grows iff it
/// reaches (in zero or more steps) a letter lying on a cycle whose strongly
/// connected component contains an image of length at least two.
inline bool is_growing(const Morphism& m) {
  if (m.is_erasing()) throw InputError("growth test is only supported for nonerasing morphisms");
  const std::size_t n = m.size();
  const auto reach = detail::reachability(m);
  std::vector<bool> expanding(n, false);
  for (std::size_t b = 0; b < n; ++b) {
    if (!reach[b][b]) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (reach[b][c] && reach[c][b] && m.image(static_cast<Letter>(c)).size() >= 2) {
        expanding[b] = true;
        break;
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    bool grows = expanding[a];
    for (std::size_t b = 0; b < n && !grows; ++b) grows = reach[a][b] && expanding[b];
    if (!grows) return false;
  }
  return true;
}

/// CYCLIC(m): letters occurring in their own image.
inline std::set<Letter> cyclic_letters(const Morphism& m) {
  std::set<Letter> out;
  for (std::size_t a = 0; a < m.size(); ++a) {
    const Word& img = m.image(static_cast<Letter>(a));
    if (std::find(img.begin(), img.end(), static_cast<Letter>(a)) != img.end()) out.insert(static_cast<Letter>(a));
  }
  return out;
}

/// m^ω(x) exists iff m(x) = x·u where u contains a letter that is not mortal;
/// then |m^k(x)| increases at every step.
inline bool omega_exists(const Morphism& m, Letter x) {
  if (x >= m.size()) throw InputError("seed letter outside the alphabet");
  const Word& img = m.image(x);
  if (img.size() < 2 || img.front() != x) return false;
  const auto mortal = detail::mortal_letters(m);
  return std::any_of(img.begin() + 1, img.end(), [&](Letter a) { return !mortal[a]; });
}

/// alph(w)
inline std::set<Letter> alph(std::span<const Letter> w) { return std::set<Letter>(w.begin(), w.end()); }

/// Pref_q(w); the whole word when it is shorter than q.
inline Word pref_q(std::span<const Letter> w, std::size_t q) {
  return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(std::min(q, w.size())));
}

/// Pref_q(m^ω(x)), expanded lazily.
inline Word pref_q(const Morphism& m, Letter x, std::size_t q) {
  if (!omega_exists(m, x)) throw PreconditionError({"the infinite word generated from the seed does not exist"});
  const auto mat = incidence_matrix(m);
  BigVector v(m.size());
  v[x] = 1;
  std::size_t k = 0;
  auto length = [&] {
    BigInt s = 0;
    for (const auto& c : v) s += c;
    return s;
  };
  while (length() < q) {
    v = mat * v;
    ++k;
  }
  const MorphismTower tower = k == 0 ? MorphismTower{Morphism::identity(m.alphabet())} : MorphismTower::repeat(m, k);
  TowerStream stream(tower, Word{x});
  Word out;
  while (out.size() < q) out.push_back(*stream.next());
  return out;
}

/// F_q(w): the set of length-q factors.
inline std::set<Word> factors_q(std::span<const Letter> w, std::size_t q) {
  if (q == 0) throw InputError("factor length must be positive");
  std::set<Word> out;
  for (std::size_t i = 0; i + q <= w.size(); ++i) out.emplace(w.begin() + i, w.begin() + i + q);
  return out;
}

/// PER(w): the least p with w[i + p] == w[i] wherever both exist. Equals
/// |w| minus the longest proper border, read off the failure function.
inline std::size_t period(std::span<const Letter> w) {
  if (w.empty()) throw InputError("the period of the empty word is undefined");
  std::vector<std::size_t> fail(w.size(), 0);
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::size_t k = fail[i - 1];
    while (k > 0 && w[i] != w[k]) k = fail[k - 1];
    if (w[i] == w[k]) ++k;
    fail[i] = k;
  }
  return w.size() - fail.back();
}

struct MorphismProfile {
  bool primitive = false;
  std::optional<bool> growing;  // unset for erasing morphisms
  std::set<Letter> cyclic;
  std::size_t max_image_length = 0;
  std::vector<Letter> omega_seeds;  // letters x with m^ω(x) defined
};

inline MorphismProfile profile(const Morphism& m) {
  MorphismProfile p;
  p.primitive = is_primitive(m);
  if (!m.is_erasing()) p.growing = is_growing(m);
  p.cyclic = cyclic_letters(m);
  p.max_image_length = m.max_image_length();
  for (std::size_t a = 0; a < m.size(); ++a) {
    if (omega_exists(m, static_cast<Letter>(a))) p.omega_seeds.push_back(static_cast<Letter>(a));
  }
  return p;
}

}  // namespace morphic
