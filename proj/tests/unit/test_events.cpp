#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "ictal/error.hpp"
#include "ictal/events.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ictal;
using ictal::test::at;
using ictal::test::error_kind;
using ictal::test::kEpoch2024;

namespace {

PredictionStream grid(std::vector<double> probs, std::int64_t first = 0) {
  PredictionStream s;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    s.entries.push_back({at(kEpoch2024 + first + 10 * static_cast<std::int64_t>(i)), probs[i]});
  }
  return s;
}

PredictionStream at_times(const std::vector<std::pair<std::int64_t, double>>& rows) {
  PredictionStream s;
  for (const auto& [t, p] : rows) s.entries.push_back({at(kEpoch2024 + t), p});
  return s;
}

std::vector<std::uint8_t> bits(std::initializer_list<int> v) {
  std::vector<std::uint8_t> out;
  for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
  return out;
}

}  // namespace

TEST_CASE("binarize") {
  const auto s = grid({0.2, 0.8});
  CHECK(binarize(s, 0.5) == bits({0, 1}));
  CHECK(binarize(s, 0.0) == bits({1, 1}));
  CHECK(binarize(s, std::nextafter(0.8, 1.0)) == bits({0, 0}));
  CHECK(binarize(s, 0.8) == bits({0, 1}));
  CHECK(error_kind([&] { binarize(s, 1.5); }) == ErrorKind::Validation);
}

TEST_CASE("isolated positives") {
  const auto s6 = grid({0, 0, 0, 0, 0, 0});
  CHECK(remove_isolated(bits({0, 1, 0, 1, 1, 0}), s6) == bits({0, 0, 0, 1, 1, 0}));
  const auto s3 = grid({0, 0, 0});
  CHECK(remove_isolated(bits({1, 0, 0}), s3) == bits({0, 0, 0}));
  CHECK(remove_isolated(bits({0, 0, 1}), s3) == bits({0, 0, 0}));
  // A timestamp gap breaks adjacency.
  const auto gapped = at_times({{0, 0}, {10, 0}, {30, 0}});
  CHECK(remove_isolated(bits({0, 1, 1}), gapped) == bits({0, 0, 0}));
  CHECK(error_kind([&] { remove_isolated(bits({1, 1}), s3); }) == ErrorKind::Shape);
}

TEST_CASE("isolated positives match the neighbour oracle") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto c = corpus::random_binary(seed, kEpoch2024);
    const auto want = oracle::remove_isolated(c.binary, c.stream.entries, c.stream.step_s);
    INFO("seed " << seed);
    CHECK(remove_isolated(c.binary, c.stream) == want);
  }
}

TEST_CASE("grouping runs into events") {
  const auto s = at_times({{100, 0.7}, {110, 0.8}, {120, 0.9}, {200, 0.1}});
  const auto e = group_events(bits({1, 1, 1, 0}), s, 60);
  REQUIRE(e.size() == 1);
  CHECK(e[0].start_time == at(kEpoch2024 + 100));
  CHECK(e[0].duration_s == 80);
  CHECK(e[0].end_time() == at(kEpoch2024 + 180));
  CHECK(e[0].confidence == doctest::Approx(0.8).epsilon(1e-12));

  const auto split = at_times({{100, 0.9}, {130, 0.9}});
  CHECK(group_events(bits({1, 1}), split, 60).size() == 2);
  CHECK(group_events(bits({0, 0}), split, 60).empty());
}

TEST_CASE("detect_events pipeline") {
  const auto s = grid({0.9, 0.1, 0.8, 0.7, 0.1, 0.95, 0.2});
  const auto e = detect_events(s, 0.5, 60);
  REQUIRE(e.size() == 1);
  CHECK(e[0].start_time == at(kEpoch2024 + 20));
  CHECK(e[0].duration_s == 70);
  CHECK(e[0].confidence == doctest::Approx(0.75));
}

TEST_CASE("sweep picks the highest all-detecting threshold") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> noise(0.0, 0.6);
  std::vector<double> probs(600);
  for (auto& p : probs) p = noise(rng);
  std::vector<SeizureAnnotation> truth;
  for (std::int64_t start : {1000, 2500, 4700}) {
    truth.push_back({"rat", at(kEpoch2024 + start), 40});
    probs[static_cast<std::size_t>(start / 10 - 1)] = 0.9;
    probs[static_cast<std::size_t>(start / 10)] = 0.9;
  }
  const auto out = sweep(grid(probs), truth, 60, 2);
  CHECK(out.selected.threshold > 0.6);
  CHECK(out.selected.threshold <= 0.9);
  CHECK(out.selected.n_true_detected == 3);
  CHECK(out.selected.n_false_positive_events == 0);
  CHECK(out.results.front().threshold == 1.0);
  CHECK(out.results.back().threshold == 0.0);
  for (std::size_t i = 1; i < out.results.size(); ++i) CHECK(out.results[i].threshold < out.results[i - 1].threshold);
  const auto again = sweep(grid(probs), truth, 60, 1);
  CHECK(again.selected == out.selected);
}

TEST_CASE("sweep edge cases") {
  const std::vector<SeizureAnnotation> truth = {{"rat", at(kEpoch2024 + 30), 20}};
  const auto constant = grid({0.4, 0.4, 0.4, 0.4, 0.4, 0.4});
  const auto out = sweep(constant, truth, 60);
  CHECK(out.results.size() == 3);
  CHECK(out.selected.threshold == 0.4);
  CHECK(out.selected.detects_all());

  // Nothing reaches the truth: most detections first, then fewest false
  // positives, then the highest threshold.
  const auto far = grid({0.9, 0.9, 0.1, 0.1}, 1000);
  const auto miss = sweep(far, truth, 60);
  CHECK(miss.selected.n_true_detected == 0);
  CHECK(miss.selected.n_false_positive_events == 0);
  CHECK(miss.selected.threshold == 1.0);

  CHECK(error_kind([&] { sweep(PredictionStream{}, truth, 60); }) == ErrorKind::EmptyStream);
  CHECK(error_kind([&] { sweep(constant, {}, 60); }) == ErrorKind::Validation);
}

TEST_CASE("report files") {
  ictal::test::TempDir dir;
  const std::vector<SeizureEvent> events = {{at(kEpoch2024 + 500), 70, 0.8125},
                                            {at(kEpoch2024 + 100), 80, 1.0 / 3.0}};
  const SweepResult sr{0.75, 2, 1, 3, 2};
  report(events, sr, dir.path());
  const auto back = read_events_csv(dir / "events.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[0] == events[1]);
  CHECK(back[1] == events[0]);
  const auto text = read_text_file(dir / "report.txt", "test");
  CHECK(text.find("events: 2") != std::string::npos);
  CHECK(text.find("threshold=0.75") != std::string::npos);

  report({}, std::nullopt, dir / "empty");
  CHECK(read_events_csv(dir / "empty" / "events.csv").empty());
  CHECK(read_text_file(dir / "empty" / "report.txt", "test").find("events: 0") != std::string::npos);

  CHECK(error_kind([] { parse_events_csv("start,dur\n"); }) == ErrorKind::Format);
  CHECK(error_kind([] { parse_events_csv("start_time,duration_s,confidence\n2024-01-01T00:00:00Z,0,0.5\n"); }) ==
        ErrorKind::Format);
}
