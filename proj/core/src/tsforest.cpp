#include "ictal/tsforest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ictal/error.hpp"
#include "ictal/parallel.hpp"

namespace ictal {
namespace {

constexpr std::string_view kModule = "tsforest";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

std::mt19937_64 tree_rng(std::uint64_t seed, std::size_t tree) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tree), 0x7f4a7c15u};
  return std::mt19937_64(seq);
}

std::vector<Interval> draw_intervals(std::mt19937_64& rng, std::size_t series_len, std::uint32_t count,
                                     std::uint32_t min_len) {
  std::vector<Interval> out(count);
  std::uniform_int_distribution<std::uint32_t> length_dist(min_len, static_cast<std::uint32_t>(series_len));
  for (auto& iv : out) {
    iv.length = length_dist(rng);
    std::uniform_int_distribution<std::uint32_t> start_dist(0, static_cast<std::uint32_t>(series_len) - iv.length);
    iv.start = start_dist(rng);
  }
  return out;
}

}  // namespace

std::uint32_t ForestParams::resolved_intervals(std::size_t series_len) const {
  if (intervals_per_tree != 0) return intervals_per_tree;
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::floor(std::sqrt(static_cast<double>(series_len)))));
}

std::vector<double> tree_features(const ForestTree& tree, const IntervalFeatureTable& table) {
  std::vector<double> out;
  out.reserve(tree.intervals.size() * kFeaturesPerInterval);
  for (const auto& iv : tree.intervals) {
    const auto f = table.features(iv);
    out.push_back(f.mean);
    out.push_back(f.stddev);
    out.push_back(f.slope);
  }
  return out;
}

ForestModel train_forest(const FeatureWindowSet& set, const ForestParams& params, Modality modality) {
  if (params.n_trees == 0 || params.min_interval_len == 0 || params.min_samples_leaf == 0) {
    fail(ErrorKind::Validation, "n_trees, min_interval_len and min_samples_leaf must be positive");
  }
  const std::size_t n = set.size();
  const std::size_t len = set.n_bins;
  std::uint64_t pos = 0;
  for (auto l : set.labels) pos += l ? 1 : 0;
  if (pos == 0 || pos == n) {
    fail(ErrorKind::NoPositiveClass, "training set needs both classes (" + std::to_string(pos) + " positive of " +
                                         std::to_string(n) + ")");
  }
  if (len < params.min_interval_len) {
    fail(ErrorKind::IntervalInfeasible, "series length " + std::to_string(len) + " is below the minimum interval length " +
                                            std::to_string(params.min_interval_len));
  }

  ForestModel model;
  model.params = params;
  model.params.intervals_per_tree = params.resolved_intervals(len);
  model.feature_length = len;
  model.modality = modality;
  model.train_positives = pos;
  model.train_negatives = n - pos;
  model.trees.resize(params.n_trees);

  const std::uint32_t k = model.params.intervals_per_tree;
  std::vector<std::mt19937_64> rngs;
  rngs.reserve(params.n_trees);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    rngs.push_back(tree_rng(params.seed, t));
    model.trees[t].intervals = draw_intervals(rngs.back(), len, k, params.min_interval_len);
  }

  // features[t] is n x (3k), row-major.
  const std::size_t width = k * kFeaturesPerInterval;
  std::vector<std::vector<double>> features(params.n_trees, std::vector<double>(n * width));
  parallel_for(n, params.threads, [&](std::size_t row) {
    const IntervalFeatureTable table(set.row(row));
    for (std::size_t t = 0; t < params.n_trees; ++t) {
      const auto f = tree_features(model.trees[t], table);
      std::copy(f.begin(), f.end(), features[t].begin() + static_cast<std::ptrdiff_t>(row * width));
    }
  });

  const TreeParams tree_params{params.max_depth, params.min_samples_leaf};
  parallel_for(params.n_trees, params.threads, [&](std::size_t t) {
    std::vector<std::size_t> rows(n);
    if (params.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (auto& r : rows) r = pick(rngs[t]);
      std::sort(rows.begin(), rows.end());
    } else {
      for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    }
    model.trees[t].tree = DecisionTree::fit(features[t], width, set.labels, rows, tree_params);
    features[t].clear();
    features[t].shrink_to_fit();
  });
  return model;
}

double predict(const ForestModel& model, std::span<const double> features) {
  if (features.size() != model.feature_length) {
    fail(ErrorKind::Shape, "feature row has length " + std::to_string(features.size()) + ", model expects " +
                               std::to_string(model.feature_length));
  }
  if (model.trees.empty()) fail(ErrorKind::Validation, "model has no trees");
  const IntervalFeatureTable table(features);
  double total = 0.0;
  for (const auto& t : model.trees) {
    const auto& leaf = t.tree.leaf([&](std::size_t f) {
      return table.feature(t.intervals[f / kFeaturesPerInterval], f % kFeaturesPerInterval);
    });
    total += leaf.positive_fraction();
  }
  return total / static_cast<double>(model.trees.size());
}

PredictionStream predict_stream(const ForestModel& model, const FeatureWindowSet& set, unsigned threads) {
  PredictionStream out;
  out.modality = model.modality;
  out.step_s = set.stride_s;
  out.entries.resize(set.size());
  parallel_for(set.size(), threads, [&](std::size_t i) {
    try {
      out.entries[i] = {set.start_times[i], predict(model, set.row(i))};
    } catch (const Error& e) {
      throw Error(e.kind(), kModule, "row " + std::to_string(i) + ": " + e.detail());
    }
  });
  validate_stream(out);
  return out;
}

}  // namespace ictal
