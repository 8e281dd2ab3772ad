// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "corpus.hpp"
#include "ictal/error.hpp"
#include "ictal/events.hpp"
#include "ictal/fusion.hpp"
#include "ictal/interval_features.hpp"
#include "ictal/metrics.hpp"
#include "ictal/pipeline.hpp"
#include "ictal/spectral.hpp"
#include "ictal/synthgen.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ictal;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances and thresholds.
constexpr double kFftAbsTol = 1e-9;
constexpr double kParsevalRelTol = 1e-6;
constexpr double kFftBudgetS = 60.0;
constexpr double kFeatureTol = 1e-9;
constexpr double kAucTol = 1e-9;
constexpr double kMinRecall = 0.7;
constexpr double kMinAuc = 0.85;
constexpr double kClassifierBudgetS = 600.0;
constexpr double kMaxRawRecall = 0.2;
constexpr int kFusionSeeds = 10;
constexpr int kFusionMinPassing = 8;
constexpr double kMaxSecondsPer10s = 10.0;
constexpr double kRealTimeMargin = 10.0;
constexpr double kDecisionThreshold = 0.5;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void verdict(int n, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// --- 1 ----------------------------------------------------------------------

void fft_oracle() {
  const auto t0 = Clock::now();
  double worst_abs = 0.0, worst_parseval = 0.0;
  for (std::size_t n : {8, 120, 1024, 7200, 30000}) {
    for (std::uint64_t w = 0; w < 50; ++w) {
      std::mt19937_64 rng(n * 1000 + w);
      std::normal_distribution<double> g;
      std::vector<double> x(n);
      for (auto& v : x) v = g(rng);
      const auto got = fft_magnitude(x, SpectralOptions{false, 1});
      const auto want = oracle::dft_magnitude(x);
      for (std::size_t k = 0; k < want.size(); ++k) worst_abs = std::max(worst_abs, std::abs(got[k] - want[k]));
      long double time = 0, freq = 0;
      for (double v : x) time += static_cast<long double>(v) * v;
      for (std::size_t k = 0; k < got.size(); ++k) {
        const bool self_conjugate = k == 0 || (n % 2 == 0 && k == n / 2);
        freq += (self_conjugate ? 1.0L : 2.0L) * got[k] * got[k];
      }
      freq /= static_cast<long double>(n);
      worst_parseval = std::max(worst_parseval, static_cast<double>(std::abs(freq - time) / time));
    }
  }
  const double elapsed = seconds_since(t0);
  verdict(1, worst_abs <= kFftAbsTol && worst_parseval <= kParsevalRelTol && elapsed < kFftBudgetS,
          fmt("max abs err %.3g (tol %.0e), Parseval rel err %.3g (tol %.0e), %.1f s incl. oracle (budget %.0f s)",
              worst_abs, kFftAbsTol, worst_parseval, kParsevalRelTol, elapsed, kFftBudgetS));
}

// --- 2 ----------------------------------------------------------------------

void edf_round_trip() {
  ictal::test::TempDir dir;
  int round_trip_ok = 0;
  double worst_steps = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto c = corpus::random_recording(1000 + seed);
    const auto path = dir / "r.edf";
    write_edf(c.recording, c.range, path);
    const auto back = read_edf(path);
    const double step = (c.range.max - c.range.min) / 65535.0;
    double worst = 0.0;
    bool same_shape = back.size() == c.recording.size() && back.sample_rate_hz() == c.recording.sample_rate_hz() &&
                      back.start_time() == c.recording.start_time();
    for (std::size_t i = 0; same_shape && i < back.size(); ++i) {
      worst = std::max(worst, std::abs(static_cast<double>(back.samples()[i]) - c.recording.samples()[i]));
    }
    worst_steps = std::max(worst_steps, worst / step);
    if (same_shape && worst <= step) ++round_trip_ok;
  }

  int rejected = 0;
  int attempted = 0;
  for (std::size_t i = 0; attempted < 50; ++i) {
    const auto c = corpus::random_recording(2000 + i);
    auto bytes = encode_edf(c.recording, c.range);
    const auto corr = corpus::header_corruption(2024, i);
    if (bytes[corr.offset] == corr.value) continue;
    bytes[corr.offset] = corr.value;
    ++attempted;
    if (ictal::test::error_kind([&] { parse_edf(bytes); }) == ErrorKind::Format) ++rejected;
  }
  verdict(2, round_trip_ok == 100 && rejected == 50,
          fmt("%d/100 round trips within one step (worst %.3f steps), %d/50 corrupted headers rejected as format errors",
              round_trip_ok, worst_steps, rejected));
}

// --- 3 ----------------------------------------------------------------------

void feature_and_auc_oracles() {
  std::mt19937_64 rng(303);
  double worst_feature = 0.0;
  for (int c = 0; c < 200; ++c) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 15001)(rng);
    const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-2, 4)(rng));
    std::normal_distribution<double> g(std::uniform_real_distribution<double>(-1e3, 1e3)(rng), scale);
    std::vector<double> y(n);
    for (auto& v : y) v = g(rng);
    const auto start = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
    const auto len = std::uniform_int_distribution<std::size_t>(1, n - start)(rng);
    const auto got = IntervalFeatureTable(y).features({static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(len)});
    const auto want = oracle::line_fit(std::span<const double>(y).subspan(start, len));
    worst_feature = std::max({worst_feature, std::abs(got.mean - want.mean), std::abs(got.stddev - want.stddev),
                              std::abs(got.slope - want.slope)});
  }
  double worst_auc = 0.0;
  for (int c = 0; c < 200; ++c) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 2000)(rng);
    const int levels = std::uniform_int_distribution<int>(2, 1000)(rng);
    std::vector<double> s(n);
    std::vector<std::uint8_t> l(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::uniform_int_distribution<int>(0, levels)(rng) / static_cast<double>(levels);
      l[i] = rng() % 4 == 0 ? 1 : 0;
    }
    l[0] = 1;
    l[1] = 0;
    worst_auc = std::max(worst_auc, std::abs(rank_auc(s, l) - auc_check(s, l)));
  }
  verdict(3, worst_feature <= kFeatureTol && worst_auc <= kAucTol,
          fmt("interval features max err %.3g over 200 cases, |rank AUC - trapezoid AUC| max %.3g over 200 sets (tol %.0e)",
              worst_feature, worst_auc, kFeatureTol));
}

// --- 4 ----------------------------------------------------------------------

void postprocessing_oracles() {
  int iso_ok = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto c = corpus::random_binary(40000 + seed, ictal::test::kEpoch2024);
    if (remove_isolated(c.binary, c.stream) == oracle::remove_isolated(c.binary, c.stream.entries, c.stream.step_s)) {
      ++iso_ok;
    }
  }
  int ev_ok = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto c = corpus::random_events(50000 + seed, ictal::test::kEpoch2024);
    const auto got = event_metrics(c.predicted, c.truth);
    const auto want = oracle::overlap_counts(c.predicted, c.truth);
    if (got.n_detected == want.detected && got.n_false_positive_events == want.false_positive) ++ev_ok;
  }
  verdict(4, iso_ok == 1000 && ev_ok == 500,
          fmt("remove_isolated %d/1000 match the neighbour oracle, event_metrics %d/500 match the all-pairs oracle",
              iso_ok, ev_ok));
}

// --- 5, 6, 7 ------------------------------------------------------------------

// Two training animals (seeds base+1, base+2) and one held-out animal
// (base+3), all on the default synthetic configuration.
struct Split {
  SynthDataset train_a, train_b, test;
  std::vector<SeizureAnnotation> train_truth;
};

Split make_split(std::uint64_t base) {
  const auto cfg = [](std::uint64_t seed, const char* id) {
    SynthConfig c;
    c.seed = seed;
    c.animal_id = id;
    return c;
  };
  Split s{generate(cfg(base + 1, "a")), generate(cfg(base + 2, "b")), generate(cfg(base + 3, "t")), {}};
  for (const auto* d : {&s.train_a, &s.train_b}) {
    s.train_truth.insert(s.train_truth.end(), d->annotations.begin(), d->annotations.end());
  }
  return s;
}

TrainOptions train_options(std::uint64_t base, bool fft) {
  TrainOptions o;
  o.forest.seed = base;
  o.pipeline.use_fft = fft;
  return o;
}

FrameMetrics held_out_metrics(const PredictionStream& s, const std::vector<SeizureAnnotation>& truth) {
  const auto labels = label_stream(s, truth, kDefaultWindowSeconds);
  std::vector<double> p;
  for (const auto& e : s.entries) p.push_back(e.probability);
  return frame_metrics(p, labels, kDecisionThreshold);
}

void classifier_criteria() {
  const auto t0 = Clock::now();
  const auto split = make_split(0);
  const std::vector<SignalRecording> ecog = {split.train_a.ecog, split.train_b.ecog};

  const auto fft_opts = train_options(0, true);
  const auto model = train_modality(ecog, split.train_truth, fft_opts, Modality::Ecog);
  const auto stream = score_recording(model, split.test.ecog, fft_opts.pipeline);
  const auto m = held_out_metrics(stream, split.test.annotations);
  const double elapsed = seconds_since(t0);
  const double auc = m.auc.value_or(0.0);
  const double neg_frac = static_cast<double>(m.tn + m.fp) / static_cast<double>(m.total());
  verdict(5, m.recall >= kMinRecall && auc >= kMinAuc && elapsed < kClassifierBudgetS,
          fmt("held-out ECoG recall %.3f (min %.2f), AUC %.3f (min %.2f), %.1f%% negative windows, %.0f s (budget %.0f s)",
              m.recall, kMinRecall, auc, kMinAuc, 100.0 * neg_frac, elapsed, kClassifierBudgetS));

  const auto raw_opts = train_options(0, false);
  const auto raw_model = train_modality(ecog, split.train_truth, raw_opts, Modality::Ecog);
  const auto raw_stream = score_recording(raw_model, split.test.ecog, raw_opts.pipeline);
  const auto r = held_out_metrics(raw_stream, split.test.annotations);
  verdict(6, r.recall <= kMaxRawRecall,
          fmt("raw-window forest recall %.3f (max %.2f), AUC %.3f, accuracy %.3f", r.recall, kMaxRawRecall,
              r.auc.value_or(0.0), r.accuracy));
}

void fusion_trend() {
  int passing = 0;
  std::string detail;
  for (int k = 1; k <= kFusionSeeds; ++k) {
    const std::uint64_t base = 100 * static_cast<std::uint64_t>(k);
    const auto split = make_split(base);
    const auto o = train_options(base, true);
    const std::vector<SignalRecording> ecog = {split.train_a.ecog, split.train_b.ecog};
    const std::vector<SignalRecording> piezo = {split.train_a.piezo, split.train_b.piezo};
    const auto em = train_modality(ecog, split.train_truth, o, Modality::Ecog);
    const auto pm = train_modality(piezo, split.train_truth, o, Modality::Piezo);
    const auto es = score_recording(em, split.test.ecog, o.pipeline);
    const auto ps = score_recording(pm, split.test.piezo, o.pipeline);
    const FusionWeights w;
    const auto ep = fuse_streams(std::vector<PredictionStream>{es, ps}, w);
    const auto epv = fuse_streams(std::vector<PredictionStream>{es, ps, split.test.video}, w);

    const auto fp = [&](const PredictionStream& s) {
      return sweep(s, split.test.annotations, kDefaultWindowSeconds).selected;
    };
    const auto e = fp(es), f2 = fp(ep), f3 = fp(epv);
    const bool ok = f2.n_false_positive_events <= e.n_false_positive_events &&
                    f3.n_false_positive_events <= f2.n_false_positive_events;
    passing += ok ? 1 : 0;
    std::printf("  fusion seed base %3llu: FP ECoG %llu (thr %.3f, %llu/%llu) | E+P %llu (thr %.3f, %llu/%llu) | "
                "E+P+V %llu (thr %.3f, %llu/%llu) %s\n",
                static_cast<unsigned long long>(base), static_cast<unsigned long long>(e.n_false_positive_events),
                e.threshold, static_cast<unsigned long long>(e.n_true_detected),
                static_cast<unsigned long long>(e.n_true_events),
                static_cast<unsigned long long>(f2.n_false_positive_events), f2.threshold,
                static_cast<unsigned long long>(f2.n_true_detected), static_cast<unsigned long long>(f2.n_true_events),
                static_cast<unsigned long long>(f3.n_false_positive_events), f3.threshold,
                static_cast<unsigned long long>(f3.n_true_detected), static_cast<unsigned long long>(f3.n_true_events),
                ok ? "ok" : "not monotone");
    std::fflush(stdout);
  }
  verdict(7, passing >= kFusionMinPassing,
          fmt("%d/%d seeds with FP(E+P) <= FP(ECoG) and FP(E+P+V) <= FP(E+P) (need %d)", passing, kFusionSeeds,
              kFusionMinPassing));
}

// --- 8, 9 ---------------------------------------------------------------------

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  if (code != 0) std::printf("  ictal %s failed (%d): %s", args.empty() ? "" : args[0].c_str(), code, err.str().c_str());
  return code;
}

double field(const std::string& text, const std::string& key) {
  const auto p = text.find(key + "=");
  if (p == std::string::npos) return std::nan("");
  return std::stod(text.substr(p + key.size() + 1));
}

void real_time_factor() {
  ictal::test::TempDir dir;
  std::string out;
  const int code = cli({"--out-dir", dir.path().string(), "bench"}, &out);
  const double per10 = field(out, "seconds_per_10s");
  const double rtf = field(out, "real_time_factor");
  const bool ok = code == 0 && per10 < kMaxSecondsPer10s && rtf * kRealTimeMargin <= 1.0;
  verdict(8, ok,
          fmt("bench: %.4f s of processing per 10 s of ECoG+Piezo signal, real-time factor %.4f (margin %.0fx, need >= %.0fx)",
              per10, rtf, rtf > 0 ? 1.0 / rtf : 0.0, kRealTimeMargin));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool full_pipeline(const fs::path& d) {
  const auto D = d.string();
  const auto f = [&](const std::string& name) { return (d / name).string(); };
  bool ok = cli({"--out-dir", D, "--seed", "11", "synth", "--duration", "21600", "--seizures", "2"}) == 0;
  for (const std::string m : {"ecog", "piezo"}) {
    ok = ok && cli({"--out-dir", D, "--seed", "11", "train", "--modality", m, "--recording", f(m + ".edf"),
                    "--annotations", f("annotations.csv"), "--trees", "30"}) == 0;
    ok = ok && cli({"--out-dir", D, "predict", "--model", f("model_" + m + ".ictf"), "--recording", f(m + ".edf")}) == 0;
  }
  ok = ok && cli({"--out-dir", D, "fuse", "--ecog", f("predictions_ecog.csv"), "--piezo", f("predictions_piezo.csv"),
                  "--video", f("predictions_video.csv")}) == 0;
  ok = ok && cli({"--out-dir", D, "events", "--predictions", f("predictions_fused.csv"), "--sweep", "--annotations",
                  f("annotations.csv")}) == 0;
  ok = ok && cli({"--out-dir", D, "metrics", "--ecog", f("predictions_ecog.csv"), "--piezo", f("predictions_piezo.csv"),
                  "--video", f("predictions_video.csv"), "--fused", f("predictions_fused.csv"), "--annotations",
                  f("annotations.csv")}) == 0;
  return ok;
}

void determinism() {
  const std::vector<std::string> files = {"ecog.edf", "piezo.edf", "annotations.csv", "predictions_video.csv",
                                          "model_ecog.ictf", "model_piezo.ictf", "predictions_ecog.csv",
                                          "predictions_piezo.csv", "predictions_fused.csv", "events.csv", "report.txt",
                                          "metrics.csv"};
  ictal::test::TempDir dir;
  const auto run_dir = dir / "run";
  bool ok = full_pipeline(run_dir);
  std::vector<std::string> first;
  for (const auto& f : files) first.push_back(slurp(run_dir / f));
  fs::remove_all(run_dir);
  ok = full_pipeline(run_dir) && ok;
  int identical = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const bool same = !first[i].empty() && slurp(run_dir / files[i]) == first[i];
    if (same) ++identical;
    else std::printf("  %s differs between runs\n", files[i].c_str());
  }
  verdict(9, ok && identical == static_cast<int>(files.size()),
          fmt("%d/%zu output files byte-identical across two full CLI runs (synth, train, predict, fuse, events, metrics)",
              identical, files.size()));
}

void guarded(std::initializer_list<int> criteria, const std::function<void()>& fn) {
  const int before = failures;
  try {
    fn();
  } catch (const std::exception& e) {
    failures = before;
    for (int n : criteria) verdict(n, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  guarded({1}, fft_oracle);
  guarded({2}, edf_round_trip);
  guarded({3}, feature_and_auc_oracles);
  guarded({4}, postprocessing_oracles);
  guarded({5, 6}, classifier_criteria);
  guarded({7}, fusion_trend);
  guarded({8}, real_time_factor);
  guarded({9}, determinism);
  std::printf("acceptance: %d failing criteria, %.0f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
