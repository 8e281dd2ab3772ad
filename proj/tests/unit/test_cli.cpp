#include <doctest.h>

#ifdef ICTAL_HAVE_CLI

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "ictal/signal_io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result ictal_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ictal::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// synth -> train (ecog, piezo) -> predict -> fuse -> events --sweep -> metrics
void run_pipeline(const fs::path& d) {
  const auto D = d.string();
  const auto s = [&](const char* f) { return (d / f).string(); };
  auto r = ictal_run({"--out-dir", D, "--seed", "3", "synth", "--duration", "3600", "--seizures", "1"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  for (const char* m : {"ecog", "piezo"}) {
    r = ictal_run({"--out-dir", D, "--threads", "2", "train", "--modality", m, "--recording", s(m == std::string("ecog") ? "ecog.edf" : "piezo.edf"),
                   "--annotations", s("annotations.csv"), "--trees", "8"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    r = ictal_run({"--out-dir", D, "predict", "--model", (d / ("model_" + std::string(m) + ".ictf")).string(),
                   "--recording", (d / (std::string(m) + ".edf")).string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
  }
  r = ictal_run({"--out-dir", D, "fuse", "--ecog", s("predictions_ecog.csv"), "--piezo", s("predictions_piezo.csv"),
                 "--video", s("predictions_video.csv")});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  r = ictal_run({"--out-dir", D, "events", "--predictions", s("predictions_fused.csv"), "--sweep", "--annotations",
                 s("annotations.csv")});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  r = ictal_run({"--out-dir", D, "metrics", "--ecog", s("predictions_ecog.csv"), "--fused", s("predictions_fused.csv"),
                 "--annotations", s("annotations.csv")});
  REQUIRE_MESSAGE(r.code == 0, r.err);
}

}  // namespace

TEST_CASE("cli end to end") {
  ictal::test::TempDir dir;
  run_pipeline(dir.path());
  for (const char* f : {"ecog.edf", "piezo.edf", "annotations.csv", "predictions_video.csv", "model_ecog.ictf",
                        "model_piezo.ictf", "predictions_ecog.csv", "predictions_piezo.csv", "predictions_fused.csv",
                        "events.csv", "report.txt", "metrics.csv", "synth.manifest", "train_ecog.manifest",
                        "events.manifest"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  const auto report = slurp(dir / "report.txt");
  CHECK(report.find("config_hash: ") != std::string::npos);
  CHECK(report.find("sweep: threshold=") != std::string::npos);
  CHECK(report.find("detected=1/1") != std::string::npos);
  const auto manifest = slurp(dir / "events.manifest");
  CHECK(report.find(manifest.substr(12, 8)) != std::string::npos);
  CHECK(ictal::read_prediction_stream(dir / "predictions_fused.csv", ictal::Modality::Fused).size() > 300);

  SUBCASE("rerun is byte identical") {
    ictal::test::TempDir again;
    run_pipeline(again.path());
    for (const char* f : {"predictions_ecog.csv", "predictions_piezo.csv", "predictions_fused.csv", "events.csv",
                          "model_ecog.ictf", "metrics.csv"}) {
      CHECK_MESSAGE(slurp(dir / f) == slurp(again / f), f);
    }
  }
  SUBCASE("model applied to the wrong modality") {
    const auto r = ictal_run({"--out-dir", dir.path().string(), "predict", "--model", (dir / "model_piezo.ictf").string(),
                              "--recording", (dir / "ecog.edf").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("shape") != std::string::npos);
  }
  SUBCASE("fixed threshold") {
    const auto r = ictal_run({"--out-dir", (dir / "fixed").string(), "events", "--predictions",
                              (dir / "predictions_ecog.csv").string(), "--modality", "ecog", "--threshold", "0.5"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "fixed" / "report.txt"));
  }
}

TEST_CASE("cli usage errors") {
  ictal::test::TempDir dir;
  CHECK(ictal_run({}).code == 1);
  CHECK(ictal_run({"frobnicate"}).code == 1);
  CHECK(ictal_run({"train", "--modality", "ecog"}).code == 1);
  CHECK(ictal_run({"train", "--modality", "video", "--recording", "/nonexistent", "--annotations", "/nonexistent"}).code ==
        1);
  CHECK(ictal_run({"synth", "--video-flip", "2"}).code == 1);
  const auto dummy = (dir / "p.csv").string();
  {
    std::ofstream f(dummy);
    f << "timestamp,probability\n2024-01-01T00:00:00Z,0.5\n";
  }
  CHECK(ictal_run({"events", "--predictions", dummy, "--threshold", "0.5", "--sweep"}).code == 1);
  CHECK(ictal_run({"--help"}).code == 0);
}

TEST_CASE("cli data errors") {
  ictal::test::TempDir dir;
  const auto bad = (dir / "bad.csv").string();
  {
    std::ofstream f(bad);
    f << "timestamp,probability\n2024-01-01T00:00:00Z,1.5\n";
  }
  const auto r = ictal_run({"--out-dir", dir.path().string(), "events", "--predictions", bad, "--threshold", "0.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(ictal_run({"--out-dir", dir.path().string(), "synth", "--duration", "300", "--seizures", "4"}).code == 2);
}

TEST_CASE("cli config file") {
  ictal::test::TempDir dir;
  const auto cfg = (dir / "run.toml").string();
  {
    std::ofstream f(cfg);
    f << "seed = 8\nout-dir = \"" << (dir / "a").string() << "\"\n[synth]\nduration = 1800\nseizures = 1\n";
  }
  auto r = ictal_run({"--config", cfg, "synth"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  r = ictal_run({"--seed", "8", "--out-dir", (dir / "b").string(), "synth", "--duration", "1800", "--seizures", "1"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(slurp(dir / "a" / "ecog.edf") == slurp(dir / "b" / "ecog.edf"));
  CHECK(slurp(dir / "a" / "synth.manifest") == slurp(dir / "b" / "synth.manifest"));
}

TEST_CASE("cli bench on synthetic data") {
  ictal::test::TempDir dir;
  const auto r = ictal_run({"--out-dir", dir.path().string(), "bench", "--duration", "1800", "--trees", "5"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.find("real_time_factor=") != std::string::npos);
  CHECK(fs::exists(dir / "bench.txt"));
}

#endif
