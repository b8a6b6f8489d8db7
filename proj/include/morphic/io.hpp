#pragma once

// Input documents, plain-text rule files and structured verdict output.
//
// Structured document:
//   {"alphabet": ["a", "b"],
//    "g": {"a": "ab", "b": "ba"},
//    "h": {"a": "ab", "b": "aa"},          (optional for single-morphism commands)
//    "letter": "a",                         (optional unless the command needs it)
//    "config": {"overflow_cap": 1000000, "a_multiplier": "3/2",
//               "materialization_budget": 1000000}}   (optional)
//
// Rule file: one `a -> ab` rule per line; blank lines and `#` comments are
// ignored; the alphabet is the ordered list of left-hand sides.

#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "morphic/decide.hpp"

namespace morphic::io {

using nlohmann::json;

struct ProblemDocument {
  Alphabet alphabet;
  Morphism g;
  std::optional<Morphism> h;
  std::optional<Letter> letter;
  DecisionConfig config;

  const Morphism& require_h() const {
    if (!h) throw InputError("missing field \"h\": this command needs a second morphism");
    return *h;
  }

  Letter require_letter() const {
    if (!letter) throw InputError("missing field \"letter\": this command needs a seed letter");
    return *letter;
  }
};

inline BigRational parse_rational(std::string_view text) {
  const std::string s(text);
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const BigInt den(s.substr(slash + 1));
      if (den == 0) throw InputError("zero denominator");
      return BigRational(BigInt(s.substr(0, slash)), den);
    }
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
      const std::string frac = s.substr(dot + 1);
      BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
      const std::string whole = s.substr(0, dot).empty() ? "0" : s.substr(0, dot);
      return BigRational(BigInt(whole) * scale + (frac.empty() ? BigInt(0) : BigInt(frac)), scale);
    }
    return BigRational(BigInt(s));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("\"" + s + "\" is not a rational number");
  }
}

inline std::string rational_to_string(const BigRational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace detail {

inline std::size_t json_size(const json& j, std::string_view field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw InputError("field \"" + std::string(field) + "\" must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

inline Morphism morphism_from_json(const json& rules, const Alphabet& alphabet, std::string_view field) {
  if (!rules.is_object()) throw InputError("field \"" + std::string(field) + "\" must be an object of rules");
  std::vector<std::optional<Word>> images(alphabet.size());
  for (const auto& [sym, img] : rules.items()) {
    const auto a = alphabet.find(sym);
    if (!a) {
      throw InputError("field \"" + std::string(field) + "\": rule for unknown symbol \"" + sym + "\"");
    }
    if (!img.is_string()) {
      throw InputError("field \"" + std::string(field) + "." + sym + "\" must be a string");
    }
    Word w;
    for (const auto& s : split_symbols(img.get<std::string>())) {
      const auto b = alphabet.find(s);
      if (!b) {
        throw InputError("field \"" + std::string(field) + "." + sym + "\": unknown symbol \"" + s + "\"");
      }
      w.push_back(*b);
    }
    images[*a] = std::move(w);
  }
  std::vector<Word> total;
  for (std::size_t a = 0; a < images.size(); ++a) {
    if (!images[a]) {
      throw InputError("field \"" + std::string(field) + "\": no rule for symbol \"" +
                       alphabet.symbol(static_cast<Letter>(a)) + "\"");
    }
    total.push_back(std::move(*images[a]));
  }
  return Morphism(alphabet, std::move(total));
}

/// Parses JSON, rejecting duplicate keys (nlohmann keeps the last one
/// silently otherwise).
inline json parse_strict(std::string_view text) {
  std::vector<std::set<std::string>> seen;
  std::vector<std::string> last_key;
  std::string duplicate;
  auto callback = [&](int depth, json::parse_event_t event, json& parsed) {
    const auto d = static_cast<std::size_t>(depth);
    switch (event) {
      case json::parse_event_t::object_start:
        seen.emplace_back();
        break;
      case json::parse_event_t::object_end:
        seen.pop_back();
        break;
      case json::parse_event_t::key: {
        const auto k = parsed.get<std::string>();
        if (last_key.size() <= d) last_key.resize(d + 1);
        last_key[d] = k;
        if (!seen.back().insert(k).second && duplicate.empty()) {
          duplicate = d >= 2 ? "duplicate rule for \"" + k + "\" in field \"" + last_key[d - 1] + "\""
                             : "duplicate field \"" + k + "\"";
        }
        break;
      }
      default:
        break;
    }
    return true;
  };
  json j;
  try {
    j = json::parse(text.begin(), text.end(), callback);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
  if (!duplicate.empty()) throw InputError(duplicate);
  return j;
}

}  // namespace detail

inline ProblemDocument parse_document(std::string_view text) {
  const json j = detail::parse_strict(text);
  if (!j.is_object()) throw InputError("document must be a JSON object");
  static const std::set<std::string> known{"alphabet", "g", "h", "letter", "config"};
  for (const auto& [k, v] : j.items()) {
    if (!known.contains(k)) throw InputError("unknown field \"" + k + "\"");
  }
  if (!j.contains("alphabet")) throw InputError("missing field \"alphabet\"");
  if (!j.contains("g")) throw InputError("missing field \"g\"");
  const json& alpha = j.at("alphabet");
  if (!alpha.is_array()) throw InputError("field \"alphabet\" must be an array of single-character strings");
  std::vector<std::string> symbols;
  for (const auto& s : alpha) {
    if (!s.is_string()) throw InputError("field \"alphabet\" must contain strings");
    symbols.push_back(s.get<std::string>());
  }
  ProblemDocument doc{Alphabet(std::move(symbols)), {}, {}, {}, {}};
  doc.g = detail::morphism_from_json(j.at("g"), doc.alphabet, "g");
  if (j.contains("h")) doc.h = detail::morphism_from_json(j.at("h"), doc.alphabet, "h");
  if (j.contains("letter")) {
    const json& l = j.at("letter");
    if (!l.is_string()) throw InputError("field \"letter\" must be a string");
    const auto a = doc.alphabet.find(l.get<std::string>());
    if (!a) throw InputError("field \"letter\": symbol \"" + l.get<std::string>() + "\" is not declared");
    doc.letter = *a;
  }
  if (j.contains("config")) {
    const json& c = j.at("config");
    if (!c.is_object()) throw InputError("field \"config\" must be an object");
    for (const auto& [k, v] : c.items()) {
      if (k == "overflow_cap") {
        doc.config.overflow_cap = detail::json_size(v, "config.overflow_cap");
      } else if (k == "materialization_budget") {
        doc.config.materialization_budget = detail::json_size(v, "config.materialization_budget");
      } else if (k == "a_multiplier") {
        if (v.is_string()) {
          doc.config.a_multiplier = parse_rational(v.get<std::string>());
        } else if (v.is_number_integer()) {
          doc.config.a_multiplier = BigRational(v.get<long long>());
        } else if (v.is_number()) {
          doc.config.a_multiplier = parse_rational(v.dump());
        } else {
          throw InputError("field \"config.a_multiplier\" must be a number or a rational string");
        }
        if (doc.config.a_multiplier < 1) throw InputError("field \"config.a_multiplier\" must be at least 1");
      } else {
        throw InputError("unknown field \"config." + k + "\"");
      }
    }
  }
  return doc;
}

/// Parses a rule file. With `expected` set, the rules must cover exactly that
/// alphabet; otherwise the alphabet is the ordered list of left-hand sides.
inline Morphism parse_rules(std::string_view text, std::string_view source = "rules",
                            const std::optional<Alphabet>& expected = std::nullopt) {
  struct Rule {
    std::string lhs;
    std::string rhs;
    std::size_t line;
  };
  std::vector<Rule> rules;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  auto where = [&](std::size_t l) { return std::string(source) + ":" + std::to_string(l) + ": "; };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) throw InputError(where(lineno) + "expected a rule of the form `a -> ab`");
    Rule r{trim(line.substr(0, arrow)), trim(line.substr(arrow + 2)), lineno};
    if (split_symbols(r.lhs).size() != 1) {
      throw InputError(where(lineno) + "left-hand side must be a single symbol");
    }
    for (const auto& prev : rules) {
      if (prev.lhs == r.lhs) throw InputError(where(lineno) + "duplicate rule for \"" + r.lhs + "\"");
    }
    rules.push_back(std::move(r));
  }
  std::vector<std::string> lhs;
  for (const auto& r : rules) lhs.push_back(r.lhs);
  const Alphabet alphabet = expected ? *expected : Alphabet(lhs);
  if (rules.empty()) throw InputError(std::string(source) + ": no rules found");
  std::vector<std::optional<Word>> images(alphabet.size());
  for (const auto& r : rules) {
    const auto a = alphabet.find(r.lhs);
    if (!a) throw InputError(where(r.line) + "rule for unknown symbol \"" + r.lhs + "\"");
    Word w;
    for (const auto& s : split_symbols(r.rhs)) {
      if (s == " " || s == "\t") continue;
      const auto b = alphabet.find(s);
      if (!b) throw InputError(where(r.line) + "unknown symbol \"" + s + "\"");
      w.push_back(*b);
    }
    images[*a] = std::move(w);
  }
  std::vector<Word> total;
  for (std::size_t a = 0; a < images.size(); ++a) {
    if (!images[a]) {
      throw InputError(std::string(source) + ": no rule for symbol \"" + alphabet.symbol(static_cast<Letter>(a)) +
                       "\"");
    }
    total.push_back(std::move(*images[a]));
  }
  return Morphism(alphabet, std::move(total));
}

// ---------------------------------------------------------------------------
// Verdict serialization. Big integers are decimal strings.

inline std::string outcome_name(Verdict::Outcome o) { return o == Verdict::Outcome::Equal ? "Equal" : "NotEqual"; }

inline json reason_json(Verdict::Reason r) {
  switch (r) {
    case Verdict::Reason::BalanceInfinite:
      return "BalanceInfinite";
    case Verdict::Reason::PrefixMismatch:
      return "PrefixMismatch";
    case Verdict::Reason::None:
      break;
  }
  return nullptr;
}

template <class T>
json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, BigInt>) {
    return v->str();
  } else {
    return *v;
  }
}

inline json to_json(const Verdict& v, const Alphabet& alphabet) {
  const auto& d = v.diagnostics;
  json periods = json::array();
  for (const auto& p : d.balance_periods) periods.push_back(optional_json(p));
  json out{
      {"outcome", outcome_name(v.outcome)},
      {"reason", reason_json(v.reason)},
      {"mismatch", nullptr},
      {"diagnostics",
       {{"n", d.n},
        {"a_of_n", d.a_of_n},
        {"a_effective", d.a_effective},
        {"f1_layers", d.f1_layers},
        {"f2_layers", d.f2_layers},
        {"word_layers", d.word_layers},
        {"identical_shortcut", d.identical_shortcut},
        {"balance_finite", optional_json(d.balance_finite)},
        {"p_bound", d.p_bound},
        {"balance_periods", periods},
        {"word_length", optional_json(d.word_length)},
        {"memo_entries", d.engine.memo_entries},
        {"distinct_states", d.engine.distinct_states},
        {"leaves_expanded", d.engine.leaves_expanded},
        {"max_tail", d.engine.max_tail},
        {"theoretical_overflow_cap", optional_json(d.theoretical_overflow_cap)}}}};
  if (v.mismatch) {
    out["mismatch"] = {{"position", v.mismatch->position.str()},
                       {"left", alphabet.symbol(v.mismatch->left)},
                       {"right", alphabet.symbol(v.mismatch->right)}};
  }
  return out;
}

inline Verdict verdict_from_json(const json& j, const Alphabet& alphabet) {
  try {
    Verdict v;
    v.outcome = j.at("outcome").get<std::string>() == "Equal" ? Verdict::Outcome::Equal : Verdict::Outcome::NotEqual;
    const json& r = j.at("reason");
    if (r.is_null()) {
      v.reason = Verdict::Reason::None;
    } else {
      v.reason = r.get<std::string>() == "BalanceInfinite" ? Verdict::Reason::BalanceInfinite
                                                           : Verdict::Reason::PrefixMismatch;
    }
    if (!j.at("mismatch").is_null()) {
      const json& m = j.at("mismatch");
      v.mismatch = MismatchWitness{BigInt(m.at("position").get<std::string>()),
                                   alphabet.letter(m.at("left").get<std::string>()),
                                   alphabet.letter(m.at("right").get<std::string>())};
    }
    const json& d = j.at("diagnostics");
    auto& diag = v.diagnostics;
    diag.n = d.at("n").get<std::size_t>();
    diag.a_of_n = d.at("a_of_n").get<std::uint64_t>();
    diag.a_effective = d.at("a_effective").get<std::uint64_t>();
    diag.f1_layers = d.at("f1_layers").get<std::size_t>();
    diag.f2_layers = d.at("f2_layers").get<std::size_t>();
    diag.word_layers = d.at("word_layers").get<std::size_t>();
    diag.identical_shortcut = d.at("identical_shortcut").get<bool>();
    if (!d.at("balance_finite").is_null()) diag.balance_finite = d.at("balance_finite").get<bool>();
    diag.p_bound = d.at("p_bound").get<std::uint64_t>();
    for (const auto& p : d.at("balance_periods")) {
      diag.balance_periods.push_back(p.is_null() ? std::nullopt : std::optional(p.get<std::uint64_t>()));
    }
    if (!d.at("word_length").is_null()) diag.word_length = BigInt(d.at("word_length").get<std::string>());
    diag.engine.memo_entries = d.at("memo_entries").get<std::size_t>();
    diag.engine.distinct_states = d.at("distinct_states").get<std::size_t>();
    diag.engine.leaves_expanded = d.at("leaves_expanded").get<std::size_t>();
    diag.engine.max_tail = d.at("max_tail").get<std::size_t>();
    if (!d.at("theoretical_overflow_cap").is_null()) {
      diag.theoretical_overflow_cap = BigInt(d.at("theoretical_overflow_cap").get<std::string>());
    }
    return v;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed verdict document: ") + e.what());
  }
}

}  // namespace morphic::io
