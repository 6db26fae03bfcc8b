#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qlve/common.hpp"

namespace qlve {

using Edge = std::pair<int, int>;

// Vertices are 0-based; edges are stored with first < second.
struct LabelledTree {
  int n = 1;
  std::vector<Edge> edges;
};

struct CiliatedTree {
  LabelledTree tree;
  std::vector<int> cilia;
};

struct MarkedTree {
  CiliatedTree ciliated;
  std::vector<Edge> markPairs;
};

struct Forest {
  int n = 1;
  std::vector<Edge> edges;
};

struct BkarWeights {
  int n = 0;
  std::vector<double> u;
  Eigen::MatrixXd w;
};

struct CombinConfig {
  int treeCap = 8;
  int forestCap = 6;
};

std::vector<int> prufer_encode(const LabelledTree& t);
LabelledTree prufer_decode(int n, const std::vector<int>& code);

// Yields every labelled tree on n vertices once, in lexicographic Prüfer order.
class TreeStream {
 public:
  explicit TreeStream(int n, const CombinConfig& cfg = {});
  std::optional<LabelledTree> next();
  std::uint64_t count() const;

 private:
  int n_;
  std::vector<int> code_;
  bool done_ = false;
};

std::vector<LabelledTree> enumerate_trees(int n, const CombinConfig& cfg = {});
std::vector<Forest> enumerate_forests(int n, const CombinConfig& cfg = {});

std::vector<int> tree_degrees(const LabelledTree& t);
std::vector<int> degrees(const MarkedTree& t);
bool is_tree(const LabelledTree& t);
bool is_forest(const Forest& f);

BkarWeights bkar_weights(const Forest& f, const std::vector<double>& u);
BkarWeights bkar_weights(const LabelledTree& t, const std::vector<double>& u);
double min_eigenvalue(const Eigen::MatrixXd& m);

Rational ciliated_sum(int n, int k);
Rational marked_sum(int n, int k, int q);
Rational ciliated_sum_brute(int n, int k);
Rational marked_sum_brute(int n, int k, int q);

struct CayleyResult {
  BigInt treeSum;
  BigInt compositionSide;
  bool equal;
};
CayleyResult cayley_sum(int n);

// Isomorphism classes of unlabelled trees with their labelled multiplicities.
struct TreeClass {
  LabelledTree representative;
  std::uint64_t labelledCount = 0;
};
std::vector<TreeClass> tree_classes(int n, const CombinConfig& cfg = {});
std::string canonical_form(const LabelledTree& t);

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k);

}  // namespace qlve
