#pragma once

// Alphabets, words, morphisms, composition towers and exact incidence-matrix
// arithmetic.
//
// Composition convention: a tower [g, h] denotes w -> g(h(w)). The last layer
// is applied to the argument first, exactly like function composition.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "morphic/errors.hpp"

namespace morphic {

using BigInt = boost::multiprecision::cpp_int;

/// Letters are indices into an Alphabet.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

inline constexpr std::size_t kMaxAlphabetSize = 256;
inline constexpr std::size_t kDefaultMaterializationBudget = 1'000'000;

/// Splits UTF-8 text into code points, each returned as its own string.
inline std::vector<std::string> split_symbols(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = 3;
    } else if (lead >= 0xC0) {
      len = 2;
    } else if (lead >= 0x80) {
      throw InputError("invalid UTF-8 lead byte in \"" + std::string(text) + "\"");
    }
    if (i + len > text.size()) {
      throw InputError("truncated UTF-8 sequence in \"" + std::string(text) + "\"");
    }
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw InputError("alphabet must have at least one symbol");
    if (symbols_.size() > kMaxAlphabetSize) {
      throw InputError("alphabet has more than 256 symbols");
    }
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].empty()) throw InputError("empty alphabet symbol");
      if (split_symbols(symbols_[i]).size() != 1) {
        throw InputError("alphabet symbol \"" + symbols_[i] + "\" is not a single character");
      }
      if (!index_.emplace(symbols_[i], static_cast<Letter>(i)).second) {
        throw InputError("duplicate alphabet symbol \"" + symbols_[i] + "\"");
      }
    }
  }

  /// Alphabet whose symbols are the characters of `letters`, in order.
  static Alphabet of(std::string_view letters) { return Alphabet(split_symbols(letters)); }

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::string& symbol(Letter a) const { return symbols_.at(a); }

  std::optional<Letter> find(std::string_view sym) const {
    auto it = index_.find(std::string(sym));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Letter letter(std::string_view sym) const {
    if (auto a = find(sym)) return *a;
    throw InputError("symbol \"" + std::string(sym) + "\" is not in the alphabet");
  }

  Word parse(std::string_view text) const {
    Word w;
    for (const auto& s : split_symbols(text)) w.push_back(letter(s));
    return w;
  }

  std::string render(std::span<const Letter> w) const {
    std::string out;
    for (Letter a : w) out += symbol(a);
    return out;
  }

  bool contains(std::span<const Letter> w) const {
    return std::all_of(w.begin(), w.end(), [&](Letter a) { return a < size(); });
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Letter> index_;
};

class Morphism {
 public:
  Morphism() = default;

  Morphism(Alphabet alphabet, std::vector<Word> images)
      : alphabet_(std::move(alphabet)), images_(std::move(images)) {
    if (images_.size() != alphabet_.size()) {
      throw InputError("morphism must define an image for every letter");
    }
    for (const auto& img : images_) {
      if (!alphabet_.contains(img)) throw InputError("morphism image uses a letter outside the alphabet");
    }
  }

  /// Builds a morphism from `letter -> image` rules; the alphabet is the
  /// ordered list of left-hand sides.
  static Morphism from_rules(std::initializer_list<std::pair<std::string_view, std::string_view>> rules) {
    return from_rules(std::vector<std::pair<std::string_view, std::string_view>>(rules));
  }

  static Morphism from_rules(const std::vector<std::pair<std::string_view, std::string_view>>& rules) {
    std::vector<std::string> lhs;
    for (const auto& [from, to] : rules) lhs.emplace_back(from);
    Alphabet alphabet(std::move(lhs));
    std::vector<Word> images;
    for (const auto& [from, to] : rules) images.push_back(alphabet.parse(to));
    return Morphism(std::move(alphabet), std::move(images));
  }

  static Morphism identity(const Alphabet& alphabet) {
    std::vector<Word> images;
    for (std::size_t a = 0; a < alphabet.size(); ++a) images.push_back(Word{static_cast<Letter>(a)});
    return Morphism(alphabet, std::move(images));
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return images_.size(); }
  const Word& image(Letter a) const { return images_.at(a); }
  const std::vector<Word>& images() const noexcept { return images_; }

  /// M_g: the longest letter image.
  std::size_t max_image_length() const {
    std::size_t m = 0;
    for (const auto& img : images_) m = std::max(m, img.size());
    return m;
  }

  /// The image of a word: concatenation of its letters' images.
  Word apply(std::span<const Letter> w) const {
    Word out;
    for (Letter a : w) {
      if (a >= size()) throw InputError("word letter outside the morphism's alphabet");
      out.insert(out.end(), images_[a].begin(), images_[a].end());
    }
    return out;
  }

  Word operator()(std::span<const Letter> w) const { return apply(w); }

  bool is_erasing() const {
    return std::any_of(images_.begin(), images_.end(), [](const Word& w) { return w.empty(); });
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t a = 0; a < size(); ++a) {
      if (a) out += ", ";
      out += alphabet_.symbol(static_cast<Letter>(a)) + "->" + alphabet_.render(images_[a]);
    }
    return out;
  }

  friend bool operator==(const Morphism& a, const Morphism& b) {
    return a.alphabet_ == b.alphabet_ && a.images_ == b.images_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Word> images_;
};

/// outer ∘ inner, materialized letter by letter.
inline Morphism compose(const Morphism& outer, const Morphism& inner) {
  if (!(outer.alphabet() == inner.alphabet())) throw InputError("cannot compose morphisms over different alphabets");
  std::vector<Word> images;
  images.reserve(inner.size());
  for (const auto& img : inner.images()) images.push_back(outer.apply(img));
  return Morphism(inner.alphabet(), std::move(images));
}

inline Morphism power(const Morphism& m, std::size_t k) {
  Morphism out = Morphism::identity(m.alphabet());
  for (std::size_t i = 0; i < k; ++i) out = compose(m, out);
  return out;
}

class MorphismTower {
 public:
  explicit MorphismTower(std::vector<Morphism> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw InputError("a morphism tower needs at least one layer");
    for (const auto& m : layers_) {
      if (!(m.alphabet() == layers_.front().alphabet())) {
        throw InputError("all tower layers must share one alphabet");
      }
    }
  }

  MorphismTower(std::initializer_list<Morphism> layers) : MorphismTower(std::vector<Morphism>(layers)) {}

  /// m^k as k stacked copies of m.
  static MorphismTower repeat(const Morphism& m, std::size_t k) {
    return MorphismTower(std::vector<Morphism>(k, m));
  }

  const std::vector<Morphism>& layers() const noexcept { return layers_; }
  const Alphabet& alphabet() const noexcept { return layers_.front().alphabet(); }
  std::size_t size() const noexcept { return layers_.size(); }

  /// The tower denoting this ∘ other.
  MorphismTower then(const MorphismTower& other) const {
    std::vector<Morphism> layers = layers_;
    layers.insert(layers.end(), other.layers_.begin(), other.layers_.end());
    return MorphismTower(std::move(layers));
  }

 private:
  std::vector<Morphism> layers_;
};

// ---------------------------------------------------------------------------
// Incidence matrices

using BigVector = std::vector<BigInt>;

class IncidenceMatrix {
 public:
  IncidenceMatrix() = default;
  explicit IncidenceMatrix(std::size_t n) : n_(n), entries_(n * n) {}

  static IncidenceMatrix identity(std::size_t n) {
    IncidenceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  BigInt& at(std::size_t row, std::size_t col) { return entries_[row * n_ + col]; }
  const BigInt& at(std::size_t row, std::size_t col) const { return entries_[row * n_ + col]; }

  friend IncidenceMatrix operator*(const IncidenceMatrix& a, const IncidenceMatrix& b) {
    if (a.n_ != b.n_) throw InputError("incidence matrix dimensions differ");
    IncidenceMatrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) {
      for (std::size_t k = 0; k < a.n_; ++k) {
        const BigInt& aik = a.at(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < a.n_; ++j) c.at(i, j) += aik * b.at(k, j);
      }
    }
    return c;
  }

  friend BigVector operator*(const IncidenceMatrix& a, const BigVector& v) {
    BigVector out(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) {
      for (std::size_t j = 0; j < a.n_; ++j) out[i] += a.at(i, j) * v[j];
    }
    return out;
  }

  /// Row vector times matrix.
  friend BigVector operator*(const BigVector& row, const IncidenceMatrix& a) {
    BigVector out(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) {
      if (row[i] == 0) continue;
      for (std::size_t j = 0; j < a.n_; ++j) out[j] += row[i] * a.at(i, j);
    }
    return out;
  }

  friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<BigInt> entries_;
};

/// Letter-occurrence counts of a word.
inline BigVector parikh(std::span<const Letter> w, std::size_t n) {
  BigVector v(n);
  for (Letter a : w) ++v.at(a);
  return v;
}

/// Entry (a, b) counts the occurrences of a in m(b).
inline IncidenceMatrix incidence_matrix(const Morphism& m) {
  IncidenceMatrix mat(m.size());
  for (std::size_t b = 0; b < m.size(); ++b) {
    for (Letter a : m.image(static_cast<Letter>(b))) ++mat.at(a, b);
  }
  return mat;
}

inline IncidenceMatrix tower_matrix(const MorphismTower& t) {
  IncidenceMatrix out = incidence_matrix(t.layers().front());
  for (std::size_t i = 1; i < t.size(); ++i) out = out * incidence_matrix(t.layers()[i]);
  return out;
}

inline IncidenceMatrix matrix_pow(IncidenceMatrix base, std::uint64_t k) {
  IncidenceMatrix result = IncidenceMatrix::identity(base.size());
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

/// Component b is |t(b)|, i.e. the column sums of the tower matrix.
inline BigVector image_length_row(const MorphismTower& t) {
  BigVector row(t.alphabet().size(), BigInt(1));
  for (const auto& layer : t.layers()) row = row * incidence_matrix(layer);
  return row;
}

inline BigVector image_length_row(const Morphism& m) { return image_length_row(MorphismTower{m}); }

inline BigInt dot(const BigVector& a, const BigVector& b) {
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// Tower evaluation

/// Exact length of t(w) without expanding it.
inline BigInt tower_image_length(const MorphismTower& t, std::span<const Letter> w) {
  return dot(image_length_row(t), parikh(w, t.alphabet().size()));
}

inline Word apply_tower(const MorphismTower& t, std::span<const Letter> w,
                        std::size_t budget = kDefaultMaterializationBudget) {
  if (!t.alphabet().contains(w)) throw InputError("word letter outside the tower's alphabet");
  const BigInt len = tower_image_length(t, w);
  if (len > budget) {
    throw ResourceLimitError("tower image has " + len.str() + " symbols, above the materialization budget of " +
                             std::to_string(budget));
  }
  Word cur(w.begin(), w.end());
  for (auto it = t.layers().rbegin(); it != t.layers().rend(); ++it) cur = it->apply(cur);
  return cur;
}

/// The single morphism a tower denotes, if its letter images fit the budget.
inline Morphism materialize(const MorphismTower& t, std::size_t budget = kDefaultMaterializationBudget) {
  BigInt total = 0;
  for (const auto& len : image_length_row(t)) total += len;
  if (total > budget) {
    throw ResourceLimitError("tower letter images total " + total.str() + " symbols, above the budget of " +
                             std::to_string(budget));
  }
  std::vector<Word> images;
  for (std::size_t a = 0; a < t.alphabet().size(); ++a) {
    images.push_back(apply_tower(t, Word{static_cast<Letter>(a)}, budget));
  }
  return Morphism(t.alphabet(), std::move(images));
}

/// Depth-first lazy expansion of a stack of morphisms applied to a start word.
/// Memory is proportional to the number of layers, not to the output length.
class TowerStream {
 public:
  /// `apply_order[0]` is applied to the start word first. The morphisms must
  /// outlive the stream.
  TowerStream(std::vector<const Morphism*> apply_order, Word start)
      : apply_order_(std::move(apply_order)), start_(std::move(start)) {
    stack_.push_back(Frame{nullptr, 0});
  }

  TowerStream(const MorphismTower& tower, Word start) : TowerStream(apply_order_of(tower), std::move(start)) {}

  std::optional<Letter> next() {
    while (!stack_.empty()) {
      Frame& top = stack_.back();
      const Word& word = top.word ? *top.word : start_;
      if (top.pos == word.size()) {
        stack_.pop_back();
        continue;
      }
      const Letter a = word[top.pos++];
      const std::size_t level = stack_.size() - 1;
      if (level == apply_order_.size()) return a;
      stack_.push_back(Frame{&apply_order_[level]->image(a), 0});
    }
    return std::nullopt;
  }

  static std::vector<const Morphism*> apply_order_of(const MorphismTower& tower) {
    std::vector<const Morphism*> order;
    for (auto it = tower.layers().rbegin(); it != tower.layers().rend(); ++it) order.push_back(&*it);
    return order;
  }

 private:
  struct Frame {
    const Word* word;  // nullptr stands for start_
    std::size_t pos;
  };

  std::vector<const Morphism*> apply_order_;
  Word start_;
  std::vector<Frame> stack_;
};

}  // namespace morphic
