#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ictal {

struct TreeNode {
  static constexpr std::int32_t kLeaf = -1;

  std::int32_t feature = kLeaf;  // kLeaf for leaves
  double threshold = 0.0;        // go left iff value <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::uint32_t negatives = 0;   // training samples reaching this node
  std::uint32_t positives = 0;

  bool is_leaf() const { return feature == kLeaf; }
  double positive_fraction() const {
    const auto n = negatives + positives;
    return n == 0 ? 0.0 : static_cast<double>(positives) / static_cast<double>(n);
  }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeParams {
  std::int32_t max_depth = -1;  // -1 = unlimited
  std::uint32_t min_samples_leaf = 1;
};

// Binary classification tree with axis-aligned threshold splits, grown
// greedily on Gini impurity. Node 0 is the root.
class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  // features: row-major n_samples x n_features. rows: training rows to use
  // (repeats allowed, e.g. for bootstrap samples).
  static DecisionTree fit(std::span<const double> features, std::size_t n_features,
                          std::span<const std::uint8_t> labels, std::span<const std::size_t> rows,
                          const TreeParams& params);

  // Leaf reached by a sample whose feature f is produced by value(f).
  const TreeNode& leaf_for(const std::function<double(std::size_t)>& value) const;
  template <typename ValueFn>
  const TreeNode& leaf(ValueFn&& value) const {
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
      const auto& n = nodes_[i];
      i = static_cast<std::size_t>(value(static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left : n.right);
    }
    return nodes_[i];
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

}  // namespace ictal
