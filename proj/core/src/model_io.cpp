#include <zlib.h>

#include <fstream>

#include "binary_io.hpp"
#include "ictal/error.hpp"
#include "ictal/tsforest.hpp"

namespace ictal {
namespace {

constexpr std::string_view kModule = "tsforest";
constexpr char kMagic[4] = {'I', 'C', 'T', 'F'};

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, kModule, msg); }

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const ForestModel& model) {
  detail::ByteWriter w;
  for (char c : kMagic) w.put<char>(c);
  w.put<std::uint32_t>(kModelFormatVersion);

  const auto& p = model.params;
  w.put<std::uint32_t>(p.n_trees);
  w.put<std::uint32_t>(p.intervals_per_tree);
  w.put<std::uint32_t>(p.min_interval_len);
  w.put<std::int32_t>(p.max_depth);
  w.put<std::uint32_t>(p.min_samples_leaf);
  w.put<std::uint8_t>(p.bootstrap ? 1 : 0);
  w.put<std::uint64_t>(p.seed);

  w.put<std::uint64_t>(model.feature_length);
  w.put_string(std::string(to_string(model.modality)));
  w.put<std::uint64_t>(model.train_positives);
  w.put<std::uint64_t>(model.train_negatives);

  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.trees.size()));
  for (const auto& t : model.trees) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.intervals.size()));
    for (const auto& iv : t.intervals) {
      w.put<std::uint32_t>(iv.start);
      w.put<std::uint32_t>(iv.length);
    }
    const auto& nodes = t.tree.nodes();
    w.put<std::uint32_t>(static_cast<std::uint32_t>(nodes.size()));
    for (const auto& n : nodes) {
      w.put<std::int32_t>(n.feature);
      w.put<double>(n.threshold);
      w.put<std::int32_t>(n.left);
      w.put<std::int32_t>(n.right);
      w.put<std::uint32_t>(n.negatives);
      w.put<std::uint32_t>(n.positives);
    }
  }
  w.put<std::uint32_t>(crc32_of(w.bytes()));
  return std::move(w.bytes());
}

ForestModel deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) fail(ErrorKind::Integrity, "model file is truncated (" + std::to_string(bytes.size()) + " bytes)");
  const auto body = bytes.first(bytes.size() - 4);
  detail::ByteReader trailer(bytes.last(4));
  if (trailer.get<std::uint32_t>() != crc32_of(body)) fail(ErrorKind::Integrity, "model checksum mismatch");

  detail::ByteReader r(body);
  for (char c : kMagic) {
    if (r.get<char>() != c) fail(ErrorKind::Integrity, "not a forest model file (bad magic)");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kModelFormatVersion) {
    fail(ErrorKind::IncompatibleModel, "model format version " + std::to_string(version) + " (this build reads " +
                                           std::to_string(kModelFormatVersion) + ")");
  }

  ForestModel m;
  auto& p = m.params;
  p.n_trees = r.get<std::uint32_t>();
  p.intervals_per_tree = r.get<std::uint32_t>();
  p.min_interval_len = r.get<std::uint32_t>();
  p.max_depth = r.get<std::int32_t>();
  p.min_samples_leaf = r.get<std::uint32_t>();
  p.bootstrap = r.get<std::uint8_t>() != 0;
  p.seed = r.get<std::uint64_t>();
  m.feature_length = r.get<std::uint64_t>();
  const auto modality = r.get_string(32);
  m.train_positives = r.get<std::uint64_t>();
  m.train_negatives = r.get<std::uint64_t>();
  if (!r.ok()) fail(ErrorKind::Integrity, "model header is truncated");
  try {
    m.modality = parse_modality(modality);
  } catch (const Error&) {
    fail(ErrorKind::Integrity, "unknown modality '" + modality + "' in model");
  }

  const auto n_trees = r.get<std::uint32_t>();
  if (!r.ok() || n_trees != p.n_trees) fail(ErrorKind::Integrity, "tree count does not match parameters");
  m.trees.reserve(n_trees);
  for (std::uint32_t t = 0; t < n_trees; ++t) {
    ForestTree tree;
    const auto n_iv = r.get<std::uint32_t>();
    if (!r.ok() || n_iv > r.remaining() / 8) fail(ErrorKind::Integrity, "interval table of tree " + std::to_string(t) + " is truncated");
    tree.intervals.resize(n_iv);
    for (auto& iv : tree.intervals) {
      iv.start = r.get<std::uint32_t>();
      iv.length = r.get<std::uint32_t>();
      if (!iv.valid_for(m.feature_length)) fail(ErrorKind::Integrity, "tree " + std::to_string(t) + " has an invalid interval");
    }
    const auto n_nodes = r.get<std::uint32_t>();
    if (!r.ok() || n_nodes == 0 || n_nodes > r.remaining() / 28) {
      fail(ErrorKind::Integrity, "node table of tree " + std::to_string(t) + " is truncated");
    }
    std::vector<TreeNode> nodes(n_nodes);
    for (auto& n : nodes) {
      n.feature = r.get<std::int32_t>();
      n.threshold = r.get<double>();
      n.left = r.get<std::int32_t>();
      n.right = r.get<std::int32_t>();
      n.negatives = r.get<std::uint32_t>();
      n.positives = r.get<std::uint32_t>();
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      if (n.is_leaf()) {
        if (n.negatives + n.positives == 0) fail(ErrorKind::Integrity, "empty leaf in tree " + std::to_string(t));
        continue;
      }
      const bool ok = n.feature >= 0 && static_cast<std::size_t>(n.feature) < n_iv * kFeaturesPerInterval &&
                      n.left > static_cast<std::int32_t>(i) && n.right > static_cast<std::int32_t>(i) &&
                      static_cast<std::size_t>(n.left) < nodes.size() && static_cast<std::size_t>(n.right) < nodes.size();
      if (!ok) fail(ErrorKind::Integrity, "malformed node " + std::to_string(i) + " in tree " + std::to_string(t));
    }
    tree.tree = DecisionTree(std::move(nodes));
    m.trees.push_back(std::move(tree));
  }
  if (!r.ok() || r.remaining() != 0) fail(ErrorKind::Integrity, "model body length mismatch");
  return m;
}

void save_model(const ForestModel& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

ForestModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace ictal
