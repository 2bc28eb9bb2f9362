#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "rgm/cli.hpp"
#include "rgm/io.hpp"

using namespace rgm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir(const std::string& name) {
    path = fs::temp_directory_path() / name;
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& sub = "") const {
    return sub.empty() ? path.string() : (path / sub).string();
  }
};

json tiny_train_config() {
  json j;
  j["schedule"] = {{"kind", "d"}, {"steps", 4}, {"data_shape", {1, 2, 1}}};
  j["algorithm"] = "relaxed";
  j["prior"] = {{"kind", "kld"}, {"r1_gamma", 0.05}, {"disc_hidden", 8}};
  j["lambda"] = 1.0;
  j["lr_g"] = 1e-4;
  j["lr_d"] = 1e-4;
  j["batch_size"] = 32;
  j["iterations"] = 5;
  j["seed"] = 21;
  j["log_every"] = 1;
  j["generator"] = {{"z_dim", 2}, {"hidden", 8}, {"depth", 3}};
  j["dataset"] = {{"type", "gmm8"}, {"n", 256}, {"seed", 77}};
  return j;
}

}  // namespace

TEST_CASE("format_double round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, 2.0, -1e-300, 3.141592653589793,
                   123456789.123456789, 5e-324}) {
    double back = 0.0;
    std::sscanf(format_double(v).c_str(), "%lf", &back);
    CHECK(back == v);
  }
}

TEST_CASE("samples CSV round-trips and carries provenance") {
  TempDir dir("rgm_csv_test");
  Rng rng(1);
  Tensor s = gaussian_matrix(7, 3, rng);
  write_samples_csv(dir.str("s.csv"), s, "deadbeef", 42);
  std::string text = read_text_file(dir.str("s.csv"));
  CHECK(text.find("# config_hash=deadbeef seed=42") == 0);
  Tensor back = read_samples_csv(dir.str("s.csv"));
  CHECK(back == s);
}

TEST_CASE("config hash is stable and sensitive") {
  json a = tiny_train_config();
  json b = tiny_train_config();
  CHECK(config_hash(a) == config_hash(b));
  b["seed"] = 22;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("shape parsing") {
  DataShape d2 = cli::parse_shape("2");
  CHECK(d2.dim() == 2);
  DataShape img = cli::parse_shape("16x16x3");
  CHECK(img.h == 16);
  CHECK(img.c == 3);
  CHECK_THROWS_AS(cli::parse_shape("ax2"), std::exception);
}

TEST_CASE("schedule command: valid dump and usage errors through argv") {
  const char* ok[] = {"rgm", "schedule", "--kind", "d", "--steps", "4",
                      "--shape", "2"};
  CHECK(cli::run(8, ok) == cli::kExitOk);

  const char* bad_kind[] = {"rgm", "schedule", "--kind", "warp", "--steps", "4",
                            "--shape", "2"};
  CHECK(cli::run(8, bad_kind) == cli::kExitUsage);

  const char* bad_shape[] = {"rgm", "schedule", "--kind", "sr", "--steps", "7",
                             "--shape", "15x15x1"};
  CHECK(cli::run(8, bad_shape) == cli::kExitUsage);
}

TEST_CASE("train/sample/eval pipeline produces files and reproduces bit-exactly") {
  TempDir dir("rgm_pipeline_test");
  write_text_file(dir.str("cfg.json"), tiny_train_config().dump());

  cli::TrainOptions t1{.config_path = dir.str("cfg.json"),
                       .out_dir = dir.str("run1")};
  cli::TrainOptions t2{.config_path = dir.str("cfg.json"),
                       .out_dir = dir.str("run2")};
  CHECK(cli::cmd_train(t1) == cli::kExitOk);
  CHECK(cli::cmd_train(t2) == cli::kExitOk);
  CHECK(fs::exists(dir.str("run1/checkpoint.json")));
  CHECK(fs::exists(dir.str("run1/metrics.csv")));
  CHECK(fs::exists(dir.str("run1/run.json")));
  CHECK(read_text_file(dir.str("run1/metrics.csv")) ==
        read_text_file(dir.str("run2/metrics.csv")));
  CHECK(read_text_file(dir.str("run1/checkpoint.json")) ==
        read_text_file(dir.str("run2/checkpoint.json")));

  cli::SampleOptions s1{.ckpt_path = dir.str("run1/checkpoint.json"),
                        .n = 64,
                        .out_dir = dir.str("samp1"),
                        .seed = 5};
  cli::SampleOptions s2 = s1;
  s2.out_dir = dir.str("samp2");
  CHECK(cli::cmd_sample(s1) == cli::kExitOk);
  CHECK(cli::cmd_sample(s2) == cli::kExitOk);
  CHECK(read_text_file(dir.str("samp1/samples.csv")) ==
        read_text_file(dir.str("samp2/samples.csv")));

  cli::EvalOptions e{.samples_path = dir.str("samp1/samples.csv"),
                     .reference_path = dir.str("samp1/samples.csv"),
                     .out_dir = dir.str("eval")};
  CHECK(cli::cmd_eval(e) == cli::kExitOk);
  json ev = parse_json_file(dir.str("eval/eval.json"));
  CHECK(std::abs(ev.at("energy_distance").get<double>()) <= 1e-12);
}

TEST_CASE("sample with a missing checkpoint exits with the IO code") {
  cli::SampleOptions s{.ckpt_path = "/nonexistent/ckpt.json",
                       .n = 4,
                       .out_dir = "/tmp/rgm_nowhere",
                       .seed = 1};
  try {
    cli::cmd_sample(s);
    CHECK(false);
  } catch (...) {
    CHECK(cli::exit_code_for_current_exception() == cli::kExitIo);
  }
}

TEST_CASE("train resume through the CLI continues the stream") {
  TempDir dir("rgm_resume_test");
  json cfg = tiny_train_config();
  write_text_file(dir.str("cfg.json"), cfg.dump());
  cli::TrainOptions full{.config_path = dir.str("cfg.json"),
                         .out_dir = dir.str("full")};
  CHECK(cli::cmd_train(full) == cli::kExitOk);

  json half = cfg;
  half["iterations"] = 2;
  write_text_file(dir.str("half.json"), half.dump());
  cli::TrainOptions first{.config_path = dir.str("half.json"),
                          .out_dir = dir.str("part1")};
  CHECK(cli::cmd_train(first) == cli::kExitOk);
  cli::TrainOptions second{.config_path = dir.str("cfg.json"),
                           .out_dir = dir.str("part2"),
                           .resume_from = dir.str("part1/checkpoint.json")};
  CHECK(cli::cmd_train(second) == cli::kExitOk);

  Checkpoint a = load_checkpoint(dir.str("full/checkpoint.json"));
  Checkpoint b = load_checkpoint(dir.str("part2/checkpoint.json"));
  CHECK(a.gen == b.gen);
  CHECK(a == b);
}

TEST_CASE("numerical abort surfaces exit code 4") {
  TempDir dir("rgm_abort_test");
  json cfg = tiny_train_config();
  cfg["lr_g"] = 1e160;
  cfg["iterations"] = 12;
  write_text_file(dir.str("cfg.json"), cfg.dump());
  cli::TrainOptions t{.config_path = dir.str("cfg.json"),
                      .out_dir = dir.str("run")};
  CHECK(cli::cmd_train(t) == cli::kExitNumerical);
}
