#pragma once

// Lazy streaming of layered words and the memoized comparability check.
//
// A LayeredWordSpec denotes the finite word obtained by applying a (possibly
// very long) list of morphisms to a seed letter. compare_images decides
// whether f1(W) and f2(W) are prefix-comparable without enumerating W: the
// derivation tree of W is walked depth first, and the effect of a subtree
// (letter c expanded from level d) on the matcher state is a function of the
// incoming state only, so it is computed once per (c, d, state) and reused.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "morphic/core.hpp"

namespace morphic {

class LayeredWordSpec {
 public:
  /// `layers` are in composition order: the last one is applied to the seed
  /// first.
  LayeredWordSpec(Alphabet alphabet, std::vector<Morphism> layers, Letter seed)
      : alphabet_(std::move(alphabet)), layers_(std::move(layers)), seed_(seed) {
    if (seed_ >= alphabet_.size()) throw InputError("seed letter outside the alphabet");
    for (const auto& m : layers_) {
      if (!(m.alphabet() == alphabet_)) throw InputError("layer alphabet differs from the word's alphabet");
    }
  }

  /// t^k(seed), unrolled into base layers.
  static LayeredWordSpec power(const MorphismTower& t, std::size_t k, Letter seed) {
    std::vector<Morphism> layers;
    layers.reserve(t.size() * k);
    for (std::size_t i = 0; i < k; ++i) layers.insert(layers.end(), t.layers().begin(), t.layers().end());
    return LayeredWordSpec(t.alphabet(), std::move(layers), seed);
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<Morphism>& layers() const noexcept { return layers_; }
  Letter seed() const noexcept { return seed_; }
  std::size_t depth() const noexcept { return layers_.size(); }

  std::vector<const Morphism*> apply_order() const {
    std::vector<const Morphism*> order;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) order.push_back(&*it);
    return order;
  }

 private:
  Alphabet alphabet_;
  std::vector<Morphism> layers_;
  Letter seed_;
};

/// First min(L, |W|) letters of the denoted word.
inline Word stream_prefix(const LayeredWordSpec& spec, std::size_t length) {
  TowerStream stream(spec.apply_order(), Word{spec.seed()});
  Word out;
  while (out.size() < length) {
    auto a = stream.next();
    if (!a) break;
    out.push_back(*a);
  }
  return out;
}

inline BigInt spec_length(const LayeredWordSpec& spec) {
  BigVector row(spec.alphabet().size(), BigInt(1));
  for (const auto& layer : spec.layers()) row = row * incidence_matrix(layer);
  return row[spec.seed()];
}

enum class Side : std::uint8_t { Even, LeftAhead, RightAhead };

/// Unmatched surplus of the stream that is currently ahead.
struct OverflowState {
  Side side = Side::Even;
  Word tail;

  friend bool operator==(const OverflowState&, const OverflowState&) = default;
};

struct Comparability {
  enum class Kind { Comparable, Mismatch, CapExceeded };

  Kind kind = Kind::Comparable;
  BigInt position = 0;  // 0-based index of the first difference, or where the cap was hit
  Letter left = 0;
  Letter right = 0;

  static Comparability comparable() { return {}; }
  static Comparability mismatch(BigInt pos, Letter l, Letter r) { return {Kind::Mismatch, std::move(pos), l, r}; }
  static Comparability cap_exceeded(BigInt pos) { return {Kind::CapExceeded, std::move(pos), 0, 0}; }

  bool is_comparable() const noexcept { return kind == Kind::Comparable; }

  friend bool operator==(const Comparability&, const Comparability&) = default;
};

inline Comparability comparable_words(std::span<const Letter> u, std::span<const Letter> v) {
  const std::size_t n = std::min(u.size(), v.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] != v[i]) return Comparability::mismatch(i, u[i], v[i]);
  }
  return Comparability::comparable();
}

struct EngineOptions {
  std::size_t overflow_cap = 1'000'000;
  std::size_t materialization_budget = kDefaultMaterializationBudget;
  bool memoize = true;
};

struct EngineStats {
  std::size_t memo_entries = 0;
  std::size_t distinct_states = 0;
  std::size_t leaves_expanded = 0;
  std::size_t max_tail = 0;
};

namespace detail {

struct OverflowStateHash {
  std::size_t operator()(const OverflowState& s) const noexcept {
    std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(s.side);
    for (Letter a : s.tail) {
      h ^= a;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

class StateTable {
 public:
  StateTable() { intern(OverflowState{}); }

  std::uint32_t intern(OverflowState s) {
    auto [it, inserted] = ids_.try_emplace(std::move(s), static_cast<std::uint32_t>(states_.size()));
    if (inserted) states_.push_back(&it->first);
    return it->second;
  }

  const OverflowState& get(std::uint32_t id) const { return *states_[id]; }
  std::size_t size() const noexcept { return states_.size(); }

 private:
  std::unordered_map<OverflowState, std::uint32_t, OverflowStateHash> ids_;
  std::vector<const OverflowState*> states_;
};

/// A letter image fed to the matcher, either precomputed or expanded lazily.
class ImageSource {
 public:
  explicit ImageSource(const Word& word) : word_(&word) {}
  explicit ImageSource(TowerStream lazy) : lazy_(std::move(lazy)) {}

  std::optional<Letter> next() {
    if (word_) {
      if (pos_ == word_->size()) return std::nullopt;
      return (*word_)[pos_++];
    }
    return lazy_->next();
  }

 private:
  const Word* word_ = nullptr;
  std::size_t pos_ = 0;
  std::optional<TowerStream> lazy_;
};

/// Two-stream matcher working on one leaf of the derivation tree.
class LeafMatcher {
 public:
  enum class Event { None, Mismatch, Cap };

  LeafMatcher(const OverflowState& in, std::size_t cap) : side_(in.side), buf_(in.tail), cap_(cap) {}

  Event push(Side from, Letter a) {
    const Side other = from == Side::LeftAhead ? Side::RightAhead : Side::LeftAhead;
    auto& count = from == Side::LeftAhead ? left_count_ : right_count_;
    if (side_ == other) {
      const Letter expected = buf_[head_];
      if (a != expected) {
        event_from_ = from;
        event_count_ = count;
        mismatch_left_ = from == Side::LeftAhead ? a : expected;
        mismatch_right_ = from == Side::LeftAhead ? expected : a;
        return Event::Mismatch;
      }
      if (++head_ == buf_.size()) {
        buf_.clear();
        head_ = 0;
        side_ = Side::Even;
      }
    } else {
      buf_.push_back(a);
      side_ = from;
      if (buf_.size() - head_ > cap_) {
        event_from_ = other;
        event_count_ = other == Side::LeftAhead ? left_count_ : right_count_;
        return Event::Cap;
      }
    }
    ++count;
    return Event::None;
  }

  Side side() const noexcept { return side_; }
  std::size_t tail_size() const noexcept { return buf_.size() - head_; }

  OverflowState state() const {
    return OverflowState{side_, Word(buf_.begin() + static_cast<std::ptrdiff_t>(head_), buf_.end())};
  }

  /// Stream on whose index the event happened, and how many of its letters
  /// this leaf had pushed before it.
  Side event_stream() const noexcept { return event_from_; }
  std::size_t event_count() const noexcept { return event_count_; }
  Letter mismatch_left() const noexcept { return mismatch_left_; }
  Letter mismatch_right() const noexcept { return mismatch_right_; }

 private:
  Side side_;
  Word buf_;
  std::size_t head_ = 0;
  std::size_t cap_;
  std::size_t left_count_ = 0;
  std::size_t right_count_ = 0;
  Side event_from_ = Side::Even;
  std::size_t event_count_ = 0;
  Letter mismatch_left_ = 0;
  Letter mismatch_right_ = 0;
};

class ImageComparator {
 public:
  ImageComparator(const LayeredWordSpec& spec, const MorphismTower& f1, const MorphismTower& f2,
                  const EngineOptions& options)
      : spec_(spec), f1_(f1), f2_(f2), options_(options), order_(spec.apply_order()) {
    if (order_.size() >= (std::size_t{1} << 24)) throw ResourceLimitError("layered word has too many layers");
    const std::size_t n = spec.alphabet().size();
    for (const MorphismTower* t : {&f1_, &f2_}) {
      BigInt total = 0;
      for (const auto& len : image_length_row(*t)) total += len;
      auto& images = t == &f1_ ? left_images_ : right_images_;
      if (total <= options_.materialization_budget) {
        for (std::size_t a = 0; a < n; ++a) {
          images.push_back(apply_tower(*t, Word{static_cast<Letter>(a)}, options_.materialization_budget));
        }
      }
    }
    left_order_ = TowerStream::apply_order_of(f1_);
    right_order_ = TowerStream::apply_order_of(f2_);
  }

  Comparability run(EngineStats* stats) {
    const auto result = walk();
    if (stats) {
      stats->memo_entries = memo_.size();
      stats->distinct_states = states_.size();
      stats->leaves_expanded = leaves_;
      stats->max_tail = max_tail_;
    }
    return result;
  }

 private:
  struct Frame {
    Letter letter;
    std::uint32_t level;
    std::uint32_t state_in;
    std::size_t next_child;
  };

  static std::uint64_t key(Letter a, std::uint32_t level, std::uint32_t state) {
    return (static_cast<std::uint64_t>(state) << 32) | (static_cast<std::uint64_t>(level) << 8) | a;
  }

  Comparability walk() {
    const auto depth = static_cast<std::uint32_t>(order_.size());
    std::uint32_t cur = 0;
    if (depth == 0) {
      std::optional<Comparability> event;
      process_leaf(spec_.seed(), cur, event);
      return event ? *event : Comparability::comparable();
    }
    stack_.push_back(Frame{spec_.seed(), 0, cur, 0});
    while (!stack_.empty()) {
      Frame& top = stack_.back();
      const Word& kids = order_[top.level]->image(top.letter);
      if (top.next_child == kids.size()) {
        if (options_.memoize) memo_.emplace(key(top.letter, top.level, top.state_in), cur);
        stack_.pop_back();
        continue;
      }
      const Letter child = kids[top.next_child++];
      const std::uint32_t level = top.level + 1;
      if (options_.memoize) {
        auto it = memo_.find(key(child, level, cur));
        if (it != memo_.end()) {
          cur = it->second;
          continue;
        }
      }
      if (level == depth) {
        std::optional<Comparability> event;
        const std::uint32_t in = cur;
        cur = process_leaf(child, in, event);
        if (event) return *event;
        if (options_.memoize) memo_.emplace(key(child, level, in), cur);
        continue;
      }
      stack_.push_back(Frame{child, level, cur, 0});
    }
    return Comparability::comparable();
  }

  std::uint32_t process_leaf(Letter a, std::uint32_t state_in, std::optional<Comparability>& event) {
    ++leaves_;
    LeafMatcher matcher(states_.get(state_in), options_.overflow_cap);
    ImageSource left = left_images_.empty() ? ImageSource(TowerStream(left_order_, Word{a}))
                                            : ImageSource(left_images_[a]);
    ImageSource right = right_images_.empty() ? ImageSource(TowerStream(right_order_, Word{a}))
                                              : ImageSource(right_images_[a]);
    bool left_done = false;
    bool right_done = false;
    while (!(left_done && right_done)) {
      const bool take_left = !left_done && (right_done || matcher.side() != Side::LeftAhead);
      auto& src = take_left ? left : right;
      const auto letter = src.next();
      if (!letter) {
        (take_left ? left_done : right_done) = true;
        continue;
      }
      const auto ev = matcher.push(take_left ? Side::LeftAhead : Side::RightAhead, *letter);
      if (ev != LeafMatcher::Event::None) {
        const auto [left_pos, right_pos] = entry_positions();
        BigInt pos = (matcher.event_stream() == Side::LeftAhead ? left_pos : right_pos) + matcher.event_count();
        event = ev == LeafMatcher::Event::Mismatch
                    ? Comparability::mismatch(std::move(pos), matcher.mismatch_left(), matcher.mismatch_right())
                    : Comparability::cap_exceeded(std::move(pos));
        return state_in;
      }
    }
    max_tail_ = std::max(max_tail_, matcher.tail_size());
    return states_.intern(matcher.state());
  }

  /// Global positions in f1(W) and f2(W) where the current leaf's images start.
  std::pair<BigInt, BigInt> entry_positions() {
    build_length_tables();
    BigInt left = 0;
    BigInt right = 0;
    for (const auto& f : stack_) {
      const Word& kids = order_[f.level]->image(f.letter);
      for (std::size_t j = 0; j + 1 < f.next_child; ++j) {
        left += left_len_[f.level + 1][kids[j]];
        right += right_len_[f.level + 1][kids[j]];
      }
    }
    return {left, right};
  }

  void build_length_tables() {
    if (!left_len_.empty()) return;
    const std::size_t depth = order_.size();
    left_len_.assign(depth + 1, {});
    right_len_.assign(depth + 1, {});
    left_len_[depth] = image_length_row(f1_);
    right_len_[depth] = image_length_row(f2_);
    for (std::size_t level = depth; level-- > 0;) {
      const Morphism& m = *order_[level];
      left_len_[level].assign(m.size(), 0);
      right_len_[level].assign(m.size(), 0);
      for (std::size_t a = 0; a < m.size(); ++a) {
        for (Letter b : m.image(static_cast<Letter>(a))) {
          left_len_[level][a] += left_len_[level + 1][b];
          right_len_[level][a] += right_len_[level + 1][b];
        }
      }
    }
  }

  const LayeredWordSpec& spec_;
  const MorphismTower& f1_;
  const MorphismTower& f2_;
  EngineOptions options_;
  std::vector<const Morphism*> order_;
  std::vector<const Morphism*> left_order_;
  std::vector<const Morphism*> right_order_;
  std::vector<Word> left_images_;
  std::vector<Word> right_images_;
  StateTable states_;
  std::unordered_map<std::uint64_t, std::uint32_t> memo_;
  std::vector<Frame> stack_;
  std::vector<BigVector> left_len_;
  std::vector<BigVector> right_len_;
  std::size_t leaves_ = 0;
  std::size_t max_tail_ = 0;
};

}  // namespace detail

/// Decides whether f1(W) and f2(W) are prefix-comparable, W the word denoted
/// by `spec`. CapExceeded means the overflow budget was too small and says
/// nothing about the words.
inline Comparability compare_images(const LayeredWordSpec& spec, const MorphismTower& f1, const MorphismTower& f2,
                                    const EngineOptions& options = {}, EngineStats* stats = nullptr) {
  if (!(f1.alphabet() == spec.alphabet()) || !(f2.alphabet() == spec.alphabet())) {
    throw InputError("layered word and towers must share one alphabet");
  }
  std::size_t step = 0;
  for (const MorphismTower* t : {&f1, &f2}) {
    for (const auto& m : t->layers()) step = std::max(step, m.max_image_length());
  }
  if (options.overflow_cap < step) {
    throw InputError("overflow cap " + std::to_string(options.overflow_cap) +
                     " is below the longest single-step image length " + std::to_string(step));
  }
  detail::ImageComparator comparator(spec, f1, f2, options);
  return comparator.run(stats);
}

}  // namespace morphic
