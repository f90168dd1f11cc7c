#include "vlmc/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <set>

#include "vlmc/errors.hpp"

namespace vlmc::cli {

using nlohmann::json;

namespace {

[[noreturn]] void semantic(const std::string& pointer, const std::string& reason) {
  throw Error(ErrorCode::SemanticError, pointer + ": " + reason, pointer);
}

std::string escape_key(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

const json& field(const json& object, const std::string& pointer, const char* key) {
  const auto it = object.find(key);
  if (it == object.end()) semantic(pointer, std::string("missing field '") + key + "'");
  return *it;
}

void only_keys(const json& object, const std::string& pointer, std::set<std::string> allowed) {
  if (!object.is_object()) semantic(pointer, "expected an object");
  for (const auto& item : object.items()) {
    if (!allowed.count(item.key())) semantic(pointer + "/" + escape_key(item.key()), "unknown field");
  }
}

double number(const json& value, const std::string& pointer) {
  if (!value.is_number()) semantic(pointer, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) semantic(pointer, "expected a finite number");
  return x;
}

std::string string_value(const json& value, const std::string& pointer) {
  if (!value.is_string()) semantic(pointer, "expected a string");
  return value.get<std::string>();
}

std::variant<Geometric, Polynomial> parse_fallback(const json& spec, const std::string& pointer) {
  const std::string kind = string_value(field(spec, pointer, "tail"), pointer + "/tail");
  if (kind == "geometric") {
    only_keys(spec, pointer, {"tail", "p"});
    return Geometric{number(field(spec, pointer, "p"), pointer + "/p")};
  }
  if (kind == "polynomial") {
    only_keys(spec, pointer, {"tail", "c"});
    return Polynomial{number(field(spec, pointer, "c"), pointer + "/c")};
  }
  semantic(pointer + "/tail", "fallback must be 'geometric' or 'polynomial', got '" + kind + "'");
}

TailRule parse_tail(const json& spec, const std::string& pointer) {
  const std::string kind = string_value(field(spec, pointer, "tail"), pointer + "/tail");
  try {
    if (kind == "table") {
      const json& entries = field(spec, pointer, "entries");
      if (!entries.is_array()) semantic(pointer + "/entries", "expected an array");
      Table table;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        table.entries.push_back(number(entries[i], pointer + "/entries/" + std::to_string(i)));
      }
      table.fallback = parse_fallback(field(spec, pointer, "fallback"), pointer + "/fallback");
      return TailRule(std::move(table));
    }
    if (kind == "geometric" || kind == "polynomial") {
      const auto rule = parse_fallback(spec, pointer);
      if (const auto* g = std::get_if<Geometric>(&rule)) return TailRule(*g);
      return TailRule(std::get<Polynomial>(rule));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SemanticError) throw;
    semantic(pointer, e.what());
  }
  semantic(pointer + "/tail", "tail must be 'geometric', 'polynomial' or 'table', got '" + kind + "'");
}

PairRule parse_pair_rule(const json& spec, const std::string& pointer, const Alphabet& alphabet,
                         std::size_t run) {
  if (!spec.is_object()) semantic(pointer, "expected an object");
  json tail_spec = spec;
  tail_spec.erase("switch_weights");
  PairRule rule{parse_tail(tail_spec, pointer), std::vector<double>(alphabet.size(), 0.0)};
  const json& weights = field(spec, pointer, "switch_weights");
  const std::string wp = pointer + "/switch_weights";
  if (weights.is_string()) {
    if (weights.get<std::string>() != "uniform") semantic(wp, "expected 'uniform' or an object");
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      if (i != run) rule.switch_weights[i] = 1.0 / static_cast<double>(alphabet.size() - 1);
    }
    return rule;
  }
  if (!weights.is_object()) semantic(wp, "expected 'uniform' or an object");
  for (const auto& item : weights.items()) {
    const std::string lp = wp + "/" + escape_key(item.key());
    if (item.key().size() != 1 || !alphabet.contains(item.key()[0])) semantic(lp, "not a letter");
    const std::size_t letter = alphabet.index(item.key()[0]);
    if (letter == run) semantic(lp, "the run letter cannot be a switch target");
    rule.switch_weights[letter] = number(item.value(), lp);
  }
  return rule;
}

json emit_tail(const TailRule& rule) {
  json out;
  auto emit_fallback = [](const std::variant<Geometric, Polynomial>& f) {
    if (const auto* g = std::get_if<Geometric>(&f)) return json{{"tail", "geometric"}, {"p", g->p}};
    return json{{"tail", "polynomial"}, {"c", std::get<Polynomial>(f).c}};
  };
  if (const auto* g = std::get_if<Geometric>(&rule.kind())) return emit_fallback(*g);
  if (const auto* p = std::get_if<Polynomial>(&rule.kind())) return emit_fallback(*p);
  const auto& t = std::get<Table>(rule.kind());
  out["tail"] = "table";
  out["entries"] = t.entries;
  out["fallback"] = emit_fallback(t.fallback);
  return out;
}

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

ModelConfig parse_model_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::string where = location(text, e.byte);
    throw Error(ErrorCode::SyntaxError, where + ": malformed JSON", where);
  }
  only_keys(root, "", {"alphabet", "orientation", "tree", "q", "nullable", "init", "policy", "seed"});

  const json& letters = field(root, "", "alphabet");
  if (!letters.is_array()) semantic("/alphabet", "expected an array of one-letter strings");
  std::vector<char> symbols;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const std::string s = string_value(letters[i], "/alphabet/" + std::to_string(i));
    if (s.size() != 1) semantic("/alphabet/" + std::to_string(i), "letters are single characters");
    symbols.push_back(s[0]);
  }
  std::optional<Alphabet> alphabet;
  try {
    alphabet.emplace(symbols);
  } catch (const Error& e) {
    semantic("/alphabet", e.what());
  }

  if (string_value(field(root, "", "orientation"), "/orientation") != "left-growth") {
    semantic("/orientation", "words are written newest letter first; use \"left-growth\"");
  }

  bool nullable = false;
  if (const auto it = root.find("nullable"); it != root.end()) {
    if (!it->is_boolean()) semantic("/nullable", "expected true or false");
    nullable = it->get<bool>();
  }

  const json& tree = field(root, "", "tree");
  only_keys(tree, "/tree", {"explicit", "comb"});
  if (tree.size() != 1) semantic("/tree", "give exactly one of 'explicit' or 'comb'");
  const json& q = field(root, "", "q");
  only_keys(q, "/q", {"explicit", "comb"});
  if (q.size() != 1) semantic("/q", "give exactly one of 'explicit' or 'comb'");

  std::optional<ProbabilizedTree> model;
  if (tree.contains("explicit")) {
    const json& spec = tree["explicit"];
    only_keys(spec, "/tree/explicit", {"leaves"});
    const json& leaves = field(spec, "/tree/explicit", "leaves");
    if (!leaves.is_array()) semantic("/tree/explicit/leaves", "expected an array of words");
    std::vector<Word> words;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      words.push_back(string_value(leaves[i], "/tree/explicit/leaves/" + std::to_string(i)));
    }
    std::optional<ContextTree> context_tree;
    try {
      context_tree.emplace(ContextTree::make_explicit(*alphabet, words));
    } catch (const Error& e) {
      semantic("/tree/explicit/leaves", e.what());
    }
    if (!q.contains("explicit")) semantic("/q", "an explicit tree needs 'q.explicit'");
    const json& rows = q["explicit"];
    if (!rows.is_object()) semantic("/q/explicit", "expected an object");
    std::map<Word, std::vector<double>> table;
    for (const auto& item : rows.items()) {
      const std::string rp = "/q/explicit/" + escape_key(item.key());
      if (!item.value().is_array()) semantic(rp, "expected an array of probabilities");
      std::vector<double> row;
      for (std::size_t i = 0; i < item.value().size(); ++i) {
        row.push_back(number(item.value()[i], rp + "/" + std::to_string(i)));
      }
      table.emplace(item.key(), std::move(row));
    }
    try {
      model.emplace(ProbabilizedTree::explicit_model(std::move(*context_tree), std::move(table)));
    } catch (const Error& e) {
      const std::string where = e.witness().empty() ? "/q/explicit" : "/q/explicit/" + escape_key(e.witness());
      semantic(where, e.what());
    }
  } else {
    only_keys(tree["comb"], "/tree/comb", {});
    if (!q.contains("comb")) semantic("/q", "a comb tree needs 'q.comb'");
    const json& spec = q["comb"];
    if (!spec.is_object()) semantic("/q/comb", "expected an object");
    std::map<Word, PairRule> rules;
    const auto& a = *alphabet;
    for (const auto& item : spec.items()) {
      if (item.key() == "default") continue;
      const std::string rp = "/q/comb/" + escape_key(item.key());
      const Word& pair = item.key();
      if (pair.size() != 2 || pair[0] == pair[1] || !a.contains(pair[0]) || !a.contains(pair[1])) {
        semantic(rp, "keys are two distinct letters alpha beta (run letter first) or 'default'");
      }
      rules.emplace(pair, parse_pair_rule(item.value(), rp, a, a.index(pair[0])));
    }
    if (const auto it = spec.find("default"); it != spec.end()) {
      for (Letter x : a.symbols()) {
        for (Letter y : a.symbols()) {
          if (x != y && !rules.count(Word{x, y})) {
            rules.emplace(Word{x, y}, parse_pair_rule(*it, "/q/comb/default", a, a.index(x)));
          }
        }
      }
    }
    try {
      model.emplace(ProbabilizedTree::comb_model(a, std::move(rules), nullable));
    } catch (const Error& e) {
      const std::string where = e.witness().empty() ? "/q/comb" : "/q/comb/" + escape_key(e.witness());
      semantic(where, e.what());
    }
  }

  ModelConfig config{std::move(*model), std::nullopt, SeriesPolicy{}, std::nullopt};
  if (!nullable && !config.model.is_comb()) {
    if (const auto report = validate_non_null(config.model); !report.pass) {
      const auto& [context, letter] = report.zeros.front();
      semantic("/q/explicit/" + escape_key(context),
               std::string("zero probability for letter '") + letter + "'; set \"nullable\": true to allow it");
    }
  }

  if (const auto it = root.find("init"); it != root.end()) {
    const Word init = string_value(*it, "/init");
    try {
      if (init.empty() || config.model.tree().is_internal(init)) {
        semantic("/init", "the initial word must not be internal");
      }
      pref(config.model.tree(), init);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SemanticError) throw;
      semantic("/init", e.what());
    }
    config.init = init;
  }

  if (const auto it = root.find("policy"); it != root.end()) {
    only_keys(*it, "/policy", {"max_terms", "abs_tol", "divergence_threshold"});
    if (const auto m = it->find("max_terms"); m != it->end()) {
      if (!m->is_number_unsigned()) semantic("/policy/max_terms", "expected a positive integer");
      config.policy.max_terms = m->get<std::size_t>();
    }
    if (const auto t = it->find("abs_tol"); t != it->end()) {
      config.policy.abs_tol = number(*t, "/policy/abs_tol");
    }
    if (const auto d = it->find("divergence_threshold"); d != it->end()) {
      config.policy.divergence_threshold = number(*d, "/policy/divergence_threshold");
    }
    try {
      config.policy.validate();
    } catch (const Error& e) {
      semantic("/policy", e.what());
    }
  }

  if (const auto it = root.find("seed"); it != root.end()) {
    if (!it->is_number_unsigned()) semantic("/seed", "expected a non-negative integer");
    config.seed = it->get<std::uint64_t>();
  }
  return config;
}

std::string emit_model_config(const ModelConfig& config) {
  const ProbabilizedTree& model = config.model;
  const Alphabet& a = model.alphabet();
  json root;
  root["alphabet"] = json::array();
  for (Letter c : a.symbols()) root["alphabet"].push_back(std::string(1, c));
  root["orientation"] = "left-growth";
  root["nullable"] = model.nullable();
  if (model.is_comb()) {
    root["tree"] = {{"comb", json::object()}};
    json rules = json::object();
    for (const auto& [pair, rule] : model.rules()) {
      json spec = emit_tail(rule.persist);
      json weights = json::object();
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.symbol(i) != pair[0]) weights[std::string(1, a.symbol(i))] = rule.switch_weights[i];
      }
      spec["switch_weights"] = weights;
      rules[pair] = spec;
    }
    root["q"] = {{"comb", rules}};
  } else {
    root["tree"] = {{"explicit", {{"leaves", model.tree().leaves()}}}};
    json rows = json::object();
    for (const auto& [context, row] : model.table()) rows[context] = row;
    root["q"] = {{"explicit", rows}};
  }
  if (config.init) root["init"] = *config.init;
  root["policy"] = {{"max_terms", config.policy.max_terms},
                    {"abs_tol", config.policy.abs_tol},
                    {"divergence_threshold", config.policy.divergence_threshold}};
  if (config.seed) root["seed"] = *config.seed;
  return root.dump(2) + "\n";
}

std::string fingerprint(const ModelConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : emit_model_config(config)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace vlmc::cli
