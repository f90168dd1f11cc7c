#include "vlmc/context_tree.hpp"

#include <algorithm>

#include "vlmc/errors.hpp"

namespace vlmc {

const char* to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Internal: return "Internal";
    case NodeKind::Leaf: return "Leaf";
    case NodeKind::External: return "External";
  }
  return "?";
}

namespace {

// Length of the leading run of w[0].
std::size_t leading_run(std::string_view w) {
  std::size_t j = 1;
  while (j < w.size() && w[j] == w[0]) ++j;
  return j;
}

}  // namespace

ContextTree ContextTree::make_explicit(const Alphabet& alphabet, std::vector<Word> leaves,
                                       std::size_t leaf_budget) {
  if (leaves.empty()) {
    throw Error(ErrorCode::NotSaturated, "a context tree needs at least one leaf");
  }
  if (leaves.size() > leaf_budget) {
    throw Error(ErrorCode::LeafBudgetExceeded,
                std::to_string(leaves.size()) + " leaves exceed the budget of " +
                    std::to_string(leaf_budget));
  }
  for (const auto& leaf : leaves) {
    if (leaf.empty()) throw Error(ErrorCode::InvalidWord, "contexts are non-empty words");
    alphabet.validate(leaf);
  }

  // Prefix-freeness: after a plain lexicographic sort, a prefix sits right
  // before some word extending it.
  std::vector<Word> sorted = leaves;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (is_prefix(sorted[i - 1], sorted[i])) {
      throw Error(ErrorCode::NotAntichain,
                  "'" + sorted[i - 1] + "' is a prefix of '" + sorted[i] + "'",
                  sorted[i - 1] + "," + sorted[i]);
    }
  }

  ContextTree tree(Kind::Explicit, alphabet);
  tree.leaf_set_.insert(leaves.begin(), leaves.end());
  for (const auto& leaf : leaves) {
    tree.height_ = std::max(tree.height_, leaf.size());
    for (std::size_t len = 0; len < leaf.size(); ++len) {
      tree.internal_set_.insert(leaf.substr(0, len));
    }
  }
  for (const auto& node : tree.internal_set_) {
    for (Letter c : alphabet.symbols()) {
      const Word child = node + c;
      if (!tree.internal_set_.count(child) && !tree.leaf_set_.count(child)) {
        throw Error(ErrorCode::NotSaturated,
                    "internal node '" + node + "' misses child '" + child + "'", node);
      }
    }
  }
  tree.leaves_ = std::move(leaves);
  sort_canonical(tree.leaves_, alphabet);
  tree.internal_.assign(tree.internal_set_.begin(), tree.internal_set_.end());
  sort_canonical(tree.internal_, alphabet);
  return tree;
}

ContextTree ContextTree::make_comb(const Alphabet& alphabet) {
  return ContextTree(Kind::Comb, alphabet);
}

std::optional<std::size_t> ContextTree::height() const noexcept {
  if (is_comb()) return std::nullopt;
  return height_;
}

NodeKind ContextTree::classify(std::string_view w) const {
  alphabet_.validate(w);
  if (kind_ == Kind::Explicit) {
    const Word key(w);
    if (internal_set_.count(key)) return NodeKind::Internal;
    if (leaf_set_.count(key)) return NodeKind::Leaf;
    return NodeKind::External;
  }
  if (w.empty()) return NodeKind::Internal;
  const std::size_t run = leading_run(w);
  if (run == w.size()) return NodeKind::Internal;
  if (run + 1 == w.size()) return NodeKind::Leaf;
  return NodeKind::External;
}

std::vector<Word> ContextTree::contexts_of_length(std::size_t length) const {
  std::vector<Word> out;
  if (kind_ == Kind::Explicit) {
    for (const auto& leaf : leaves_) {
      if (leaf.size() == length) out.push_back(leaf);
    }
    return out;
  }
  if (length < 2) return out;
  for (Letter a : alphabet_.symbols()) {
    for (Letter b : alphabet_.symbols()) {
      if (a != b) out.push_back(Word(length - 1, a) + b);
    }
  }
  sort_canonical(out, alphabet_);
  return out;
}

ContextTree build_explicit_tree(const Alphabet& alphabet, std::vector<Word> leaves,
                                std::size_t leaf_budget) {
  return ContextTree::make_explicit(alphabet, std::move(leaves), leaf_budget);
}

NodeKind classify_word(const ContextTree& tree, std::string_view w) { return tree.classify(w); }

Word pref(const ContextTree& tree, std::string_view w) {
  const NodeKind kind = tree.classify(w);
  if (kind == NodeKind::Internal) {
    throw Error(ErrorCode::InternalWord, "'" + Word(w) + "' is internal, pref is undefined",
                Word(w));
  }
  if (kind == NodeKind::Leaf) return Word(w);
  if (tree.is_comb()) return Word(w.substr(0, leading_run(w) + 1));
  const std::size_t limit = std::min(w.size(), *tree.height());
  for (std::size_t len = 1; len <= limit; ++len) {
    if (tree.classify(w.substr(0, len)) == NodeKind::Leaf) return Word(w.substr(0, len));
  }
  throw Error(ErrorCode::NoContextPrefix, "no context prefixes '" + Word(w) + "'", Word(w));
}

AlphaLis alpha_lis(const ContextTree& tree, std::string_view w) {
  if (w.empty()) throw Error(ErrorCode::InvalidWord, "the empty word has no alpha-lis");
  tree.alphabet().validate(w);
  if (tree.is_comb()) {
    // Internal words of a comb are the single-letter runs, so the lis is the
    // trailing run, shortened by one when it covers all of w.
    std::size_t run = 1;
    while (run < w.size() && w[w.size() - 1 - run] == w.back()) ++run;
    if (run == w.size()) --run;
    const std::size_t alpha_at = w.size() - run - 1;
    return AlphaLis{w[alpha_at], Word(w.substr(alpha_at + 1)), Word(w.substr(0, alpha_at))};
  }
  const std::size_t max_internal = *tree.height() - 1;
  const std::size_t first = w.size() > max_internal ? w.size() - max_internal : 1;
  for (std::size_t i = std::max<std::size_t>(first, 1); i <= w.size(); ++i) {
    if (tree.is_internal(w.substr(i))) {
      return AlphaLis{w[i - 1], Word(w.substr(i)), Word(w.substr(0, i - 1))};
    }
  }
  throw Error(ErrorCode::InternalConsistency, "empty word not internal");
}

AlphaLisSet alpha_lis_set(const ContextTree& tree) {
  AlphaLisSet set;
  const auto& alphabet = tree.alphabet();
  if (tree.is_comb()) {
    for (Letter a : alphabet.symbols()) {
      for (Letter b : alphabet.symbols()) {
        if (a != b) set.members.push_back(Word{a, b});
      }
    }
  } else {
    std::unordered_set<Word> seen;
    for (const auto& leaf : tree.leaves()) {
      Word al = alpha_lis(tree, leaf).word();
      if (seen.insert(al).second) set.members.push_back(std::move(al));
    }
  }
  sort_canonical(set.members, alphabet);
  return set;
}

StabilityReport is_stable(const ContextTree& tree) {
  if (tree.is_comb()) return {};

  StabilityReport by_suffix;
  auto check_node = [&](const Word& node) {
    if (node.empty() || !by_suffix.stable) return;
    if (tree.classify(std::string_view(node).substr(1)) == NodeKind::External) {
      by_suffix.stable = false;
      by_suffix.witness = node;
    }
  };
  for (const auto& node : tree.internal_nodes()) check_node(node);
  for (const auto& leaf : tree.leaves()) check_node(leaf);

  bool contexts_non_internal = true;
  for (const auto& leaf : tree.leaves()) {
    for (Letter a : tree.alphabet().symbols()) {
      if (tree.is_internal(a + leaf)) contexts_non_internal = false;
    }
  }
  if (contexts_non_internal != by_suffix.stable) {
    throw Error(ErrorCode::InternalConsistency,
                "stability characterizations disagree on this tree");
  }
  return by_suffix;
}

}  // namespace vlmc
