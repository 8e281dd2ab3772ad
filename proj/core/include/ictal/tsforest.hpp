#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ictal/decision_tree.hpp"
#include "ictal/interval_features.hpp"
#include "ictal/signal_io.hpp"
#include "ictal/spectral.hpp"

namespace ictal {

struct ForestParams {
  std::uint32_t n_trees = 100;
  // 0 selects max(1, floor(sqrt(series_len))).
  std::uint32_t intervals_per_tree = 0;
  std::uint32_t min_interval_len = 3;
  std::int32_t max_depth = -1;  // -1 = unlimited
  std::uint32_t min_samples_leaf = 1;
  // Per-tree bootstrap resampling of training rows. Off: interval choice is
  // the only source of randomness between trees.
  bool bootstrap = false;
  std::uint64_t seed = 0;
  // Training parallelism; the model does not depend on it.
  unsigned threads = 0;

  std::uint32_t resolved_intervals(std::size_t series_len) const;
};

struct ForestTree {
  std::vector<Interval> intervals;
  DecisionTree tree;  // feature 3*j+k = (mean, std, slope)[k] of intervals[j]
  friend bool operator==(const ForestTree&, const ForestTree&) = default;
};

struct ForestModel {
  ForestParams params;
  std::uint64_t feature_length = 0;
  Modality modality = Modality::Ecog;
  std::uint64_t train_positives = 0;
  std::uint64_t train_negatives = 0;
  std::vector<ForestTree> trees;

  std::size_t n_trees() const { return trees.size(); }
};

// Trees draw intervals from an RNG seeded by (params.seed, tree index), so
// the model is a pure function of (data, params) whatever the thread count.
ForestModel train_forest(const FeatureWindowSet& set, const ForestParams& params, Modality modality = Modality::Ecog);

// Mean over trees of the reached leaf's positive fraction.
double predict(const ForestModel& model, std::span<const double> features);

// One entry per row, keyed by the row's start time.
PredictionStream predict_stream(const ForestModel& model, const FeatureWindowSet& set, unsigned threads = 0);

// Interval features of one tree for one series (3 values per interval).
std::vector<double> tree_features(const ForestTree& tree, const IntervalFeatureTable& table);

// Versioned, CRC-32 checked binary; layout in docs/model_format.md.
constexpr std::uint32_t kModelFormatVersion = 1;
std::vector<std::uint8_t> serialize_model(const ForestModel& model);
ForestModel deserialize_model(std::span<const std::uint8_t> bytes);
void save_model(const ForestModel& model, const std::filesystem::path& path);
ForestModel load_model(const std::filesystem::path& path);

}  // namespace ictal
