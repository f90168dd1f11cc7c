#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "vlmc/context_tree.hpp"
#include "vlmc/model.hpp"
#include "vlmc/prw1d.hpp"

namespace fixture {

inline const std::vector<std::string> kNineLeaves{"10",   "010",  "110",  "0010", "0110",
                                                    "000",  "111",  "0111", "0011"};

inline vlmc::ProbabilizedTree explicit_model(const std::string& alphabet,
                                             const std::vector<std::string>& leaves,
                                             const oracle::Table& q) {
  return vlmc::ProbabilizedTree::explicit_model(
      vlmc::build_explicit_tree(vlmc::Alphabet(alphabet), leaves), {q.begin(), q.end()});
}

inline vlmc::ProbabilizedTree nine_leaf_model(const oracle::Table& q) {
  return explicit_model("01", kNineLeaves, q);
}

inline oracle::Table uniform_table(const std::vector<std::string>& leaves, std::size_t letters) {
  oracle::Table q;
  for (const auto& leaf : leaves) q[leaf] = std::vector<double>(letters, 1.0 / static_cast<double>(letters));
  return q;
}

inline vlmc::ProbabilizedTree double_comb(vlmc::TailRule up, vlmc::TailRule down) {
  return vlmc::DoubleCombModel(std::move(up), std::move(down)).vlmc();
}

}  // namespace fixture
