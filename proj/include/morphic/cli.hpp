#pragma once

// Command-line front end. run() is the whole program minus main(), so tests
// can drive it with in-memory streams.
//
// Exit codes: 0 Equal / success, 1 NotEqual, 2 precondition failure,
// 3 resource limit, 4 input error.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "morphic/analysis.hpp"
#include "morphic/balance.hpp"
#include "morphic/decide.hpp"
#include "morphic/engine.hpp"
#include "morphic/io.hpp"
#include "morphic/oracle.hpp"

namespace morphic::cli {

enum ExitCode : int {
  kSuccess = 0,
  kNotEqual = 1,
  kPreconditionFailure = 2,
  kResourceLimit = 3,
  kInputError = 4,
};

struct InputOptions {
  std::string doc;
  std::string g_file;
  std::string h_file;
  std::string letter;
  std::string format = "text";
  std::optional<std::size_t> overflow_cap;
  std::optional<std::string> a_multiplier;
  std::optional<std::size_t> materialization_budget;
};

inline std::string read_file(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read \"" + path + "\"");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline io::ProblemDocument load(const InputOptions& opt) {
  io::ProblemDocument doc;
  if (!opt.doc.empty()) {
    if (!opt.g_file.empty() || !opt.h_file.empty()) throw InputError("use either --doc or --g/--h, not both");
    doc = io::parse_document(read_file(opt.doc));
  } else if (!opt.g_file.empty()) {
    doc.g = io::parse_rules(read_file(opt.g_file), opt.g_file);
    doc.alphabet = doc.g.alphabet();
    if (!opt.h_file.empty()) doc.h = io::parse_rules(read_file(opt.h_file), opt.h_file, doc.alphabet);
  } else {
    throw InputError("no input: pass --doc FILE or --g FILE");
  }
  if (!opt.letter.empty()) doc.letter = doc.alphabet.letter(opt.letter);
  if (opt.overflow_cap) doc.config.overflow_cap = *opt.overflow_cap;
  if (opt.materialization_budget) doc.config.materialization_budget = *opt.materialization_budget;
  if (opt.a_multiplier) {
    doc.config.a_multiplier = io::parse_rational(*opt.a_multiplier);
    if (doc.config.a_multiplier < 1) throw InputError("--a-multiplier must be at least 1");
  }
  return doc;
}

inline void add_input_options(CLI::App* cmd, InputOptions& opt, bool with_config) {
  // -h would collide with --h.
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--doc", opt.doc, "Structured problem document (JSON), or - for stdin");
  cmd->add_option("--g", opt.g_file, "Rule file for g (one `a -> ab` per line)");
  cmd->add_option("--h", opt.h_file, "Rule file for h");
  cmd->add_option("--letter", opt.letter, "Seed letter");
  cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  if (with_config) {
    cmd->add_option("--overflow-cap", opt.overflow_cap, "Largest tolerated overflow between the image streams");
    cmd->add_option("--a-multiplier", opt.a_multiplier, "Rational factor >= 1 enlarging the iteration depth and the period bound");
    cmd->add_option("--materialization-budget", opt.materialization_budget,
                    "Largest letter-image table built in memory");
  }
}

inline std::string letters_text(const Alphabet& alphabet, const std::set<Letter>& set) {
  std::string out;
  for (Letter a : set) {
    if (!out.empty()) out += " ";
    out += alphabet.symbol(a);
  }
  return out.empty() ? "(none)" : out;
}

inline int decide_command(const InputOptions& opt, bool locate, std::optional<std::size_t> locate_budget,
                          bool no_memo, std::ostream& out) {
  auto doc = load(opt);
  doc.config.locate_mismatch_on_balance_failure = locate;
  if (locate_budget) doc.config.locate_budget = *locate_budget;
  doc.config.memoize = !no_memo;
  const Verdict v = decide_equality(doc.g, doc.require_h(), doc.require_letter(), doc.config);
  if (opt.format == "json") {
    out << io::to_json(v, doc.alphabet).dump(2) << "\n";
  } else {
    const auto& d = v.diagnostics;
    out << "outcome: " << io::outcome_name(v.outcome) << "\n";
    if (v.reason != Verdict::Reason::None) out << "reason: " << io::reason_json(v.reason).get<std::string>() << "\n";
    if (v.mismatch) {
      out << "mismatch position: " << v.mismatch->position.str() << " (g^ω has '"
          << doc.alphabet.symbol(v.mismatch->left) << "', h^ω has '" << doc.alphabet.symbol(v.mismatch->right)
          << "')\n";
    }
    out << "n: " << d.n << "\n";
    out << "A(n): " << d.a_of_n << " (iterations used: " << d.a_effective << ")\n";
    if (d.identical_shortcut) {
      out << "g and h are identical\n";
      return kSuccess;
    }
    out << "tower layers: f1 " << d.f1_layers << ", f2 " << d.f2_layers;
    if (d.word_layers) out << ", word " << d.word_layers;
    out << "\n";
    if (d.balance_finite) out << "balance: " << (*d.balance_finite ? "finite" : "infinite") << "\n";
    if (d.word_length) out << "word length: " << d.word_length->str() << "\n";
    if (d.word_layers) {
      out << "memo entries: " << d.engine.memo_entries << ", distinct overflow states: " << d.engine.distinct_states
          << ", leaves expanded: " << d.engine.leaves_expanded << ", largest overflow: " << d.engine.max_tail << "\n";
    }
    if (d.theoretical_overflow_cap) out << "theoretical overflow cap: " << d.theoretical_overflow_cap->str() << "\n";
  }
  return v.equal() ? kSuccess : kNotEqual;
}

inline int balance_command(const InputOptions& opt, bool direct, std::ostream& out) {
  const auto doc = load(opt);
  const Morphism& h = doc.require_h();
  MorphismTower first{doc.g};
  MorphismTower second{h};
  if (!direct) std::tie(first, second) = build_f1_f2(doc.g, h);
  const auto n = static_cast<unsigned>(std::max<std::size_t>(doc.alphabet.size(), 2));
  const auto report = analyze_balance(BalanceInstance::make(first, second),
                                      scaled_depth(unity_order_bound(n), doc.config.a_multiplier));
  if (opt.format == "json") {
    nlohmann::json letters = nlohmann::json::array();
    for (const auto& lb : report.letters) {
      letters.push_back({{"letter", doc.alphabet.symbol(lb.letter)},
                         {"annihilator", lb.annihilator.to_string()},
                         {"transient", lb.transient},
                         {"periodic_part", lb.periodic_part.to_string()},
                         {"period", io::optional_json(lb.period)}});
    }
    out << nlohmann::json{{"towers", direct ? "g,h" : "f1,f2"},
                          {"p_bound", report.p_bound},
                          {"letters", letters},
                          {"finite", report.finite}}
                  .dump(2)
        << "\n";
  } else {
    out << "towers: " << (direct ? "g, h" : "f1 = g^(2n-2) h^(2n-2), f2 = h^(2n-2) g^(2n-2)") << "\n";
    out << "p bound: " << report.p_bound << "\n";
    for (const auto& lb : report.letters) {
      out << "letter " << doc.alphabet.symbol(lb.letter) << ": annihilator " << lb.annihilator.to_string()
          << "; transient " << lb.transient << "; periodic part " << lb.periodic_part.to_string() << "; period "
          << (lb.period ? std::to_string(*lb.period) : "none") << "\n";
    }
    out << "balance: " << (report.finite ? "finite" : "infinite") << "\n";
  }
  return kSuccess;
}

inline int analyze_command(const InputOptions& opt, std::ostream& out) {
  const auto doc = load(opt);
  std::vector<std::pair<std::string, const Morphism*>> targets{{"g", &doc.g}};
  if (doc.h) targets.emplace_back("h", &*doc.h);
  nlohmann::json all = nlohmann::json::object();
  for (const auto& [name, m] : targets) {
    const auto p = profile(*m);
    const auto mat = incidence_matrix(*m);
    std::set<Letter> seeds(p.omega_seeds.begin(), p.omega_seeds.end());
    if (opt.format == "json") {
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t i = 0; i < mat.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < mat.size(); ++j) row.push_back(mat.at(i, j).str());
        rows.push_back(row);
      }
      nlohmann::json cyclic = nlohmann::json::array();
      for (Letter a : p.cyclic) cyclic.push_back(doc.alphabet.symbol(a));
      nlohmann::json omega = nlohmann::json::array();
      for (Letter a : seeds) omega.push_back(doc.alphabet.symbol(a));
      all[name] = {{"primitive", p.primitive},
                   {"growing", io::optional_json(p.growing)},
                   {"cyclic_letters", cyclic},
                   {"max_image_length", p.max_image_length},
                   {"omega_seeds", omega},
                   {"incidence_matrix", rows}};
    } else {
      out << name << ": " << m->to_string() << "\n";
      out << "  primitive: " << (p.primitive ? "yes" : "no") << "\n";
      out << "  growing: " << (p.growing ? (*p.growing ? "yes" : "no") : "n/a (erasing)") << "\n";
      out << "  cyclic letters: " << letters_text(doc.alphabet, p.cyclic) << "\n";
      out << "  max image length: " << p.max_image_length << "\n";
      out << "  infinite word exists from: " << letters_text(doc.alphabet, seeds) << "\n";
      out << "  incidence matrix:\n";
      for (std::size_t i = 0; i < mat.size(); ++i) {
        out << "   ";
        for (std::size_t j = 0; j < mat.size(); ++j) out << " " << mat.at(i, j).str();
        out << "\n";
      }
    }
  }
  if (opt.format == "json") out << all.dump(2) << "\n";
  return kSuccess;
}

inline int stream_command(const InputOptions& opt, std::size_t length, std::ostream& out) {
  const auto doc = load(opt);
  const Letter x = doc.require_letter();
  out << doc.alphabet.render(pref_q(doc.g, x, length)) << "\n";
  return kSuccess;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide equality of infinite words generated by primitive morphisms", "morphic"};
  app.require_subcommand(1);

  InputOptions decide_opt;
  bool locate = false;
  std::optional<std::size_t> locate_budget;
  bool no_memo = false;
  auto* decide = app.add_subcommand("decide", "Decide whether g^ω(x) = h^ω(x)");
  add_input_options(decide, decide_opt, true);
  decide->add_flag("--locate", locate, "On a balance failure, search for a mismatch with the brute-force oracle");
  decide->add_option("--locate-budget", locate_budget, "Prefix length searched by --locate");
  decide->add_flag("--no-memo", no_memo, "Disable subtree memoization (slow; for cross-checks)");

  InputOptions balance_opt;
  bool direct = false;
  auto* balance = app.add_subcommand("balance", "Decide finiteness of BAL(f1, f2)");
  add_input_options(balance, balance_opt, false);
  balance->add_flag("--direct", direct, "Test BAL(g, h) instead of BAL(f1, f2)");

  InputOptions analyze_opt;
  auto* analyze = app.add_subcommand("analyze", "Structural properties of the morphisms");
  add_input_options(analyze, analyze_opt, false);

  std::string period_word;
  auto* period_cmd = app.add_subcommand("period", "Smallest period of a word");
  period_cmd->add_option("word", period_word, "The word")->required();

  InputOptions stream_opt;
  std::size_t stream_length = 0;
  auto* stream = app.add_subcommand("stream", "Print a prefix of g^ω(x)");
  add_input_options(stream, stream_opt, false);
  stream->add_option("--length", stream_length, "Number of symbols")->required();

  InputOptions oracle_opt;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force reference computations");
  oracle_cmd->require_subcommand(1);
  std::size_t oracle_length = 100'000;
  auto* o_equal = oracle_cmd->add_subcommand("equal", "Compare g^ω(x) and h^ω(x) letter by letter");
  add_input_options(o_equal, oracle_opt, false);
  o_equal->add_option("--length", oracle_length, "Prefix length to compare");
  std::size_t k_max = 20;
  auto* o_bal = oracle_cmd->add_subcommand("bal", "max | |g g^k(x)| - |h g^k(x)| | over k <= kmax");
  add_input_options(o_bal, oracle_opt, false);
  o_bal->add_option("--kmax", k_max, "Largest k");
  std::string comp_word;
  auto* o_comp = oracle_cmd->add_subcommand("comp", "Is the word in COMP(g, h)?");
  add_input_options(o_comp, oracle_opt, false);
  o_comp->add_option("--word", comp_word, "Word to test")->required();
  std::vector<int> mixed_seq;
  auto* o_mixed = oracle_cmd->add_subcommand("mixed", "Apply g1 = g and g2 = h in the given order to the seed");
  add_input_options(o_mixed, oracle_opt, false);
  o_mixed->add_option("--seq", mixed_seq, "Indices in application order, e.g. 1,2,1")->delimiter(',');

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (*decide) return decide_command(decide_opt, locate, locate_budget, no_memo, out);
    if (*balance) return balance_command(balance_opt, direct, out);
    if (*analyze) return analyze_command(analyze_opt, out);
    if (*period_cmd) {
      const Alphabet alphabet = [&] {
        std::vector<std::string> syms;
        for (auto& s : split_symbols(period_word)) {
          if (std::find(syms.begin(), syms.end(), s) == syms.end()) syms.push_back(s);
        }
        return Alphabet(std::move(syms));
      }();
      out << period(alphabet.parse(period_word)) << "\n";
      return kSuccess;
    }
    if (*stream) return stream_command(stream_opt, stream_length, out);
    if (*oracle_cmd) {
      const auto doc = load(oracle_opt);
      if (*o_equal) {
        const auto r = oracle::naive_equal_up_to(doc.g, doc.require_h(), doc.require_letter(), oracle_length);
        if (r.mismatch()) {
          out << "mismatch at " << r.position << " (g^ω has '" << doc.alphabet.symbol(r.left) << "', h^ω has '"
              << doc.alphabet.symbol(r.right) << "')\n";
          return kNotEqual;
        }
        out << "no mismatch within " << r.limit << "\n";
        return kSuccess;
      }
      if (*o_bal) {
        out << oracle::naive_bal(doc.g, doc.require_h(), k_max).str() << "\n";
        return kSuccess;
      }
      if (*o_comp) {
        const bool member = oracle::naive_comp_member(doc.g, doc.require_h(), doc.alphabet.parse(comp_word));
        out << (member ? "comparable" : "not comparable") << "\n";
        return kSuccess;
      }
      if (*o_mixed) {
        const Word w = oracle::mixed_composition(mixed_seq, doc.g, doc.require_h(), doc.require_letter());
        out << doc.alphabet.render(w) << "\n";
        return kSuccess;
      }
    }
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kPreconditionFailure;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace morphic::cli
