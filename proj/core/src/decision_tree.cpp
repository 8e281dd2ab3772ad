#include "ictal/decision_tree.hpp"

#include <algorithm>
#include <numeric>

namespace ictal {
namespace {

__extension__ using i128 = __int128;

// Weighted Gini of a split, kept as the exact fraction num / den with
//   num / den = posL*negL/nL + posR*negR/nR
// (the common factor 2/n is dropped).
struct SplitScore {
  i128 num = 0;
  i128 den = 1;

  bool less_than(const SplitScore& o) const { return num * o.den < o.num * den; }
};

SplitScore score(std::uint64_t pos_l, std::uint64_t neg_l, std::uint64_t pos_r, std::uint64_t neg_r) {
  const i128 nl = pos_l + neg_l;
  const i128 nr = pos_r + neg_r;
  return {static_cast<i128>(pos_l) * neg_l * nr + static_cast<i128>(pos_r) * neg_r * nl, nl * nr};
}

struct Builder {
  std::span<const double> features;
  std::size_t n_features;
  std::span<const std::uint8_t> labels;
  TreeParams params;
  std::vector<TreeNode> nodes;
  std::vector<std::size_t> order;  // scratch

  double value(std::size_t row, std::size_t f) const { return features[row * n_features + f]; }

  std::int32_t grow(std::vector<std::size_t> rows, std::int32_t depth) {
    TreeNode node;
    for (auto r : rows) (labels[r] ? node.positives : node.negatives)++;
    const auto index = static_cast<std::int32_t>(nodes.size());
    nodes.push_back(node);

    const std::size_t n = rows.size();
    const bool pure = node.positives == 0 || node.negatives == 0;
    const bool depth_ok = params.max_depth < 0 || depth < params.max_depth;
    const std::size_t msl = std::max<std::uint32_t>(1, params.min_samples_leaf);
    if (pure || !depth_ok || n < 2 * msl) return index;

    bool found = false;
    SplitScore best;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;

    order = rows;
    for (std::size_t f = 0; f < n_features; ++f) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return value(a, f) < value(b, f); });
      std::uint64_t pos_l = 0, neg_l = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        (labels[order[i]] ? pos_l : neg_l)++;
        const double lo = value(order[i], f);
        const double hi = value(order[i + 1], f);
        if (!(lo < hi)) continue;
        const std::size_t n_left = i + 1;
        if (n_left < msl || n - n_left < msl) continue;
        const auto s = score(pos_l, neg_l, node.positives - pos_l, node.negatives - neg_l);
        // Ascending scan: strict improvement keeps the lowest feature and
        // the lowest threshold among ties.
        if (!found || s.less_than(best)) {
          found = true;
          best = s;
          best_feature = f;
          double mid = lo + (hi - lo) / 2;
          if (!(mid < hi)) mid = lo;
          best_threshold = mid;
        }
      }
    }
    if (!found) return index;

    std::vector<std::size_t> left, right;
    for (auto r : rows) (value(r, best_feature) <= best_threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    nodes[index].feature = static_cast<std::int32_t>(best_feature);
    nodes[index].threshold = best_threshold;
    const auto l = grow(std::move(left), depth + 1);
    nodes[index].left = l;
    const auto r = grow(std::move(right), depth + 1);
    nodes[index].right = r;
    return index;
  }
};

}  // namespace

DecisionTree DecisionTree::fit(std::span<const double> features, std::size_t n_features,
                               std::span<const std::uint8_t> labels, std::span<const std::size_t> rows,
                               const TreeParams& params) {
  Builder b{features, n_features, labels, params, {}, {}};
  b.grow(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
  return DecisionTree(std::move(b.nodes));
}

const TreeNode& DecisionTree::leaf_for(const std::function<double(std::size_t)>& value) const {
  return leaf(value);
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

}  // namespace ictal
