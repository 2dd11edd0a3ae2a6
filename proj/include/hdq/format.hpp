#pragma once

#include "hdq/automaton.hpp"
#include "hdq/error.hpp"

#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

// `.hdq` text format:
//
//   # comment
//   valuefn: LimSup            (Inf|Sup|LimInf|LimSup|DSum p/q|Sum|Avg|Reachability|Safety)
//   mode: infinite             (finite|infinite)
//   alphabet: a b
//   states: s0 s1              (optional; fixes state order)
//   initial: s0
//   s0 a 1 s1                  (<src> <letter> <weight> <dst>, weight integer or p/q)

namespace hdq {

namespace detail {

struct token
{
  std::string text;
  std::size_t column; // 1-based
};

inline std::vector<token> split_tokens(std::string_view line)
{
  std::vector<token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i >= line.size())
      break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

inline value_function parse_value_fn(const std::vector<token>& args, std::size_t line)
{
  if (args.empty())
    throw parse_error(line, 1, "valuefn needs a value");
  const std::string& name = args[0].text;
  auto expect_no_more = [&](std::size_t n) {
    if (args.size() > n)
      throw parse_error(line, args[n].column, "unexpected '" + args[n].text + "'");
  };
  static const std::map<std::string, value_kind, std::less<>> plain = {
      {"Inf", value_kind::inf},         {"Sup", value_kind::sup},
      {"LimInf", value_kind::lim_inf},  {"LimSup", value_kind::lim_sup},
      {"Sum", value_kind::sum},         {"Avg", value_kind::avg}};
  if (auto it = plain.find(name); it != plain.end()) {
    expect_no_more(1);
    return {it->second, std::nullopt, boolean_class::none};
  }
  if (name == "Reachability") {
    expect_no_more(1);
    return value_function::reachability();
  }
  if (name == "Safety") {
    expect_no_more(1);
    return value_function::safety();
  }
  if (name == "DSum") {
    if (args.size() < 2)
      throw parse_error(line, args[0].column, "bad discount: DSum needs p/q");
    expect_no_more(2);
    rational lambda;
    try {
      lambda = parse_rational(args[1].text);
    } catch (const std::invalid_argument& e) {
      throw parse_error(line, args[1].column, std::string("bad discount: ") + e.what());
    }
    if (lambda <= 0 || lambda >= 1)
      throw parse_error(line, args[1].column, "bad discount: need 0 < lambda < 1");
    return value_function::dsum(lambda);
  }
  throw parse_error(line, args[0].column, "unknown value function '" + name + "'");
}

} // namespace detail

/// Parses `.hdq` text. Throws parse_error (with line/column) for syntax and
/// name errors, validation_error for structural ones (non-total, sink shape).
inline automaton parse_automaton(std::istream& in)
{
  std::optional<value_function> vf;
  std::optional<word_mode> mode;
  std::vector<std::string> alphabet;
  bool have_alphabet = false;
  std::vector<std::string> states;
  std::map<std::string, state_id, std::less<>> state_ids;
  bool states_declared = false;
  std::optional<std::string> initial_name;
  std::size_t initial_line = 0;
  std::vector<transition> transitions;

  auto intern_state = [&](const detail::token& tok, std::size_t line) -> state_id {
    if (auto it = state_ids.find(tok.text); it != state_ids.end())
      return it->second;
    if (states_declared)
      throw parse_error(line, tok.column, "unknown state '" + tok.text + "'");
    auto id = static_cast<state_id>(states.size());
    states.push_back(tok.text);
    state_ids.emplace(tok.text, id);
    return id;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r')
      raw.pop_back();
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);

    auto colon = line.find(':');
    if (colon != std::string_view::npos) {
      auto key_tokens = detail::split_tokens(line.substr(0, colon));
      if (key_tokens.size() != 1)
        throw parse_error(line_no, 1, "malformed header line");
      const std::string& key = key_tokens[0].text;
      auto args = detail::split_tokens(line.substr(colon + 1));
      for (auto& a : args)
        a.column += colon + 1;

      if (key == "valuefn") {
        vf = detail::parse_value_fn(args, line_no);
      } else if (key == "mode") {
        if (args.size() != 1)
          throw parse_error(line_no, colon + 2, "mode needs exactly one value");
        if (args[0].text == "finite")
          mode = word_mode::finite;
        else if (args[0].text == "infinite")
          mode = word_mode::infinite;
        else
          throw parse_error(line_no, args[0].column, "unknown mode '" + args[0].text + "'");
      } else if (key == "alphabet") {
        if (args.empty())
          throw parse_error(line_no, colon + 2, "empty alphabet");
        for (const auto& a : args)
          alphabet.push_back(a.text);
        have_alphabet = true;
      } else if (key == "states") {
        if (!transitions.empty() || initial_name)
          throw parse_error(line_no, 1, "states: must precede initial and transitions");
        for (const auto& s : args)
          intern_state(s, line_no);
        states_declared = true;
      } else if (key == "initial") {
        if (args.size() != 1)
          throw parse_error(line_no, colon + 2, "initial needs exactly one state");
        initial_name = args[0].text;
        initial_line = line_no;
        intern_state(args[0], line_no);
      } else {
        throw parse_error(line_no, key_tokens[0].column, "unknown header '" + key + "'");
      }
      continue;
    }

    auto toks = detail::split_tokens(line);
    if (toks.empty())
      continue;
    if (toks.size() != 4)
      throw parse_error(line_no, toks[0].column,
                        "expected '<src> <letter> <weight> <dst>'");
    if (!have_alphabet)
      throw parse_error(line_no, toks[0].column, "transition before alphabet");
    transition t;
    t.source = intern_state(toks[0], line_no);
    auto letter = std::find(alphabet.begin(), alphabet.end(), toks[1].text);
    if (letter == alphabet.end())
      throw parse_error(line_no, toks[1].column, "unknown letter '" + toks[1].text + "'");
    t.letter = static_cast<letter_id>(letter - alphabet.begin());
    try {
      t.weight = parse_rational(toks[2].text);
    } catch (const std::invalid_argument& e) {
      throw parse_error(line_no, toks[2].column, std::string("bad weight: ") + e.what());
    }
    t.target = intern_state(toks[3], line_no);
    transitions.push_back(std::move(t));
  }

  if (!vf)
    throw parse_error(line_no + 1, 1, "missing 'valuefn:' header");
  if (!mode)
    throw parse_error(line_no + 1, 1, "missing 'mode:' header");
  if (!have_alphabet)
    throw parse_error(line_no + 1, 1, "missing 'alphabet:' header");
  if (!initial_name)
    throw parse_error(line_no + 1, 1, "missing 'initial:' header");
  (void)initial_line;

  state_id init = state_ids.at(*initial_name);
  return automaton(std::move(alphabet), std::move(states), init, std::move(transitions),
                   std::move(*vf), *mode);
}

inline automaton parse_automaton(std::string_view text)
{
  std::istringstream in{std::string(text)};
  return parse_automaton(in);
}

inline std::string serialize(const automaton& a)
{
  std::ostringstream out;
  out << "valuefn: " << a.value_fn().name() << '\n';
  out << "mode: " << to_string(a.mode()) << '\n';
  out << "alphabet:";
  for (const auto& s : a.alphabet())
    out << ' ' << s;
  out << "\nstates:";
  for (const auto& s : a.states())
    out << ' ' << s;
  out << "\ninitial: " << a.states()[a.initial()] << '\n';
  for (const auto& t : a.transitions())
    out << a.states()[t.source] << ' ' << a.alphabet()[t.letter] << ' '
        << to_string(t.weight) << ' ' << a.states()[t.target] << '\n';
  return out.str();
}

/// Parses a word literal `u(v)` (lasso u·v^ω) or `u` (finite word) against
/// the alphabet, matching the longest symbol at each point. Whitespace is
/// ignored.
inline lasso_word parse_lasso(std::string_view text, const std::vector<std::string>& alphabet)
{
  auto parse_letters = [&](std::string_view part, std::size_t offset) {
    std::vector<letter_id> out;
    std::size_t i = 0;
    while (i < part.size()) {
      if (std::isspace(static_cast<unsigned char>(part[i]))) {
        ++i;
        continue;
      }
      std::size_t best_len = 0;
      letter_id best = 0;
      for (std::size_t l = 0; l < alphabet.size(); ++l) {
        const auto& sym = alphabet[l];
        if (sym.size() > best_len && part.substr(i, sym.size()) == sym) {
          best_len = sym.size();
          best = static_cast<letter_id>(l);
        }
      }
      if (best_len == 0)
        throw parse_error(1, offset + i + 1, "unknown letter in word literal");
      out.push_back(best);
      i += best_len;
    }
    return out;
  };

  auto open = text.find('(');
  if (open == std::string_view::npos) {
    if (text.find(')') != std::string_view::npos)
      throw parse_error(1, text.find(')') + 1, "unbalanced ')' in word literal");
    return {parse_letters(text, 0), {}};
  }
  auto close = text.find(')', open);
  if (close == std::string_view::npos)
    throw parse_error(1, open + 1, "missing ')' in word literal");
  if (close + 1 != text.size())
    throw parse_error(1, close + 2, "trailing characters after ')'");
  lasso_word w;
  w.prefix = parse_letters(text.substr(0, open), 0);
  w.cycle = parse_letters(text.substr(open + 1, close - open - 1), open + 1);
  if (w.cycle.empty())
    throw parse_error(1, open + 1, "empty cycle '()' in word literal");
  return w;
}

inline std::string format_lasso(const lasso_word& w, const std::vector<std::string>& alphabet)
{
  std::string s;
  for (auto l : w.prefix)
    s += alphabet.at(l);
  if (!w.cycle.empty()) {
    s += '(';
    for (auto l : w.cycle)
      s += alphabet.at(l);
    s += ')';
  }
  return s;
}

} // namespace hdq
