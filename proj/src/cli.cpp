#include "rgm/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rgm/sampling.hpp"

namespace rgm::cli {
namespace fs = std::filesystem;

json dataset_config_to_json(const DatasetConfig& c) {
  json j;
  j["type"] = c.type;
  j["n"] = c.n;
  j["seed"] = c.seed;
  if (c.type == "gmm8") {
    j["radius"] = c.gmm.radius;
    j["std"] = c.gmm.component_std;
    j["standardize"] = c.gmm.standardize;
  } else {
    j["size"] = c.images.size;
    j["channels"] = c.images.channels;
    j["family"] = to_string(c.images.family);
    j["image_seed"] = c.images.seed;
  }
  return j;
}

DatasetConfig dataset_config_from_json(const json& j) {
  DatasetConfig c;
  c.type = j.value("type", c.type);
  c.n = j.value("n", c.n);
  c.seed = j.value("seed", c.seed);
  if (c.type == "gmm8") {
    c.gmm.radius = j.value("radius", c.gmm.radius);
    c.gmm.component_std = j.value("std", c.gmm.component_std);
    c.gmm.standardize = j.value("standardize", c.gmm.standardize);
  } else if (c.type == "toy_images") {
    c.images.size = j.value("size", c.images.size);
    c.images.channels = j.value("channels", c.images.channels);
    c.images.family =
        toy_family_from_string(j.value("family", std::string("blobs")));
    c.images.seed = j.value("image_seed", c.images.seed);
  } else {
    throw InvalidArgument("dataset type must be gmm8 or toy_images");
  }
  return c;
}

Tensor build_dataset(const DatasetConfig& c) {
  if (c.type == "gmm8") {
    Rng rng(c.seed);
    return sample_gmm8(c.n, c.gmm, rng);
  }
  return make_toy_images(c.images, c.n);
}

DataShape parse_shape(const std::string& s) {
  std::vector<std::size_t> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find('x', pos);
    std::string tok = s.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos);
    if (tok.empty()) throw InvalidArgument("bad shape: " + s);
    parts.push_back(std::stoul(tok));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (parts.size() == 1) return DataShape{1, parts[0], 1};
  if (parts.size() == 2) return DataShape{parts[0], parts[1], 1};
  if (parts.size() == 3) return DataShape{parts[0], parts[1], parts[2]};
  throw InvalidArgument("shape needs 1-3 components: " + s);
}

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

json schedule_table(const DegradationSchedule& s) {
  json rows = json::array();
  for (int k = 0; k <= s.total_steps; ++k) {
    const StepOperator& op = s.steps[static_cast<std::size_t>(k)];
    json row;
    row["k"] = k;
    row["a_k"] = op.gain;
    row["j_k"] = op.level;
    row["sigma_k"] = op.noise_std;
    row["dim"] = op.dim();
    row["decomposable"] = k == 0 ? true : decompose(s, k).valid;
    rows.push_back(row);
  }
  return rows;
}

void write_image_samples_json(const std::string& path, const Tensor& samples,
                              const DataShape& shape, const std::string& hash,
                              std::uint64_t seed) {
  json j;
  j["shape"] = {shape.h, shape.w, shape.c};
  j["config_hash"] = hash;
  j["seed"] = seed;
  json rows = json::array();
  std::size_t d = samples.batch_cols();
  for (std::size_t i = 0; i < samples.batch_rows(); ++i)
    rows.push_back(std::vector<double>(samples.data() + i * d,
                                       samples.data() + (i + 1) * d));
  j["samples"] = rows;
  write_text_file(path, j.dump());
}

}  // namespace

int cmd_schedule(const ScheduleOptions& o) {
  ScheduleKind kind = schedule_kind_from_string(o.kind);
  DataShape shape = parse_shape(o.shape);
  DegradationSchedule s = build_schedule(kind, o.steps, shape);
  json table = schedule_table(s);
  std::string text = table.dump(1);
  std::cout << text << "\n";
  if (!o.out_path.empty()) write_text_file(o.out_path, text);
  return kExitOk;
}

int cmd_train(const TrainOptions& o) {
  json file = parse_json_file(o.config_path);
  TrainConfig cfg = train_config_from_json(file);
  if (o.seed) cfg.seed = *o.seed;
  DatasetConfig dcfg = file.contains("dataset")
                           ? dataset_config_from_json(file.at("dataset"))
                           : DatasetConfig{};
  Tensor dataset = build_dataset(dcfg);

  ensure_dir(o.out_dir);
  RunRecord rec;
  if (!o.resume_from.empty()) {
    Checkpoint from = load_checkpoint(o.resume_from);
    rec = train_resume(cfg, dataset, from);
  } else {
    rec = train(cfg, dataset);
  }

  // Hash covers both the trainer config and the dataset spec.
  json full = rec.config;
  full["dataset"] = dataset_config_to_json(dcfg);
  std::string hash = config_hash(full);

  save_checkpoint(rec.final_checkpoint, join(o.out_dir, "checkpoint.json"));

  std::ostringstream csv;
  csv << "# config_hash=" << hash << " seed=" << cfg.seed << "\n";
  csv << "iteration,loss_g,loss_d_or_prior,fidelity\n";
  for (const auto& p : rec.points)
    csv << p.iteration << "," << format_double(p.loss_g) << ","
        << format_double(p.loss_d_or_prior) << "," << format_double(p.fidelity)
        << "\n";
  write_text_file(join(o.out_dir, "metrics.csv"), csv.str());

  json run;
  run["config"] = full;
  run["config_hash"] = hash;
  run["seed"] = cfg.seed;
  run["iterations_done"] = rec.final_checkpoint.step;
  run["aborted"] = rec.aborted;
  run["abort_reason"] = rec.abort_reason;
  run["checkpoint"] = "checkpoint.json";
  run["metrics"] = "metrics.csv";
  write_text_file(join(o.out_dir, "run.json"), run.dump(1));

  if (rec.aborted) {
    std::cerr << "training aborted: " << rec.abort_reason << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_sample(const SampleOptions& o) {
  Checkpoint ckpt = load_checkpoint(o.ckpt_path);
  DegradationSchedule s = ckpt.schedule.build();
  Rng rng(o.seed);
  SampleResult res = generate(ckpt.gen, ckpt.gen_cfg, s, o.n, rng);

  ensure_dir(o.out_dir);
  json prov = {{"checkpoint", o.ckpt_path},
               {"seed", o.seed},
               {"n", o.n},
               {"nfe", res.nfe}};
  std::string hash = config_hash(prov);
  if (s.data_shape.h > 1)
    write_image_samples_json(join(o.out_dir, "samples.json"), res.samples,
                             s.data_shape, hash, o.seed);
  else
    write_samples_csv(join(o.out_dir, "samples.csv"), res.samples, hash, o.seed);
  prov["config_hash"] = hash;
  write_text_file(join(o.out_dir, "sample_info.json"), prov.dump(1));
  return kExitOk;
}

SolverConfig default_solver_config(TaskKind kind, double sigma, int factor) {
  SolverConfig c;
  switch (kind) {
    case TaskKind::Denoise: {
      double rel = sigma / 2.0;  // data range is [-1, 1]
      if (rel <= 15.0 / 255.0) {
        c = {.repeats = 10, .lambda = 0.01, .alpha = 0.2, .depth = 1};
      } else if (rel <= 30.0 / 255.0) {
        c = {.repeats = 20, .lambda = 5.0, .alpha = 0.1, .depth = 1};
      } else {
        c = {.repeats = 10, .lambda = 5.0, .alpha = 0.1, .depth = 1};
      }
      break;
    }
    case TaskKind::SuperResolve:
      if (factor <= 2)
        c = {.repeats = 5, .lambda = 0.2, .alpha = 0.2, .depth = 1};
      else
        c = {.repeats = 10, .lambda = 0.1, .alpha = 0.2, .depth = 1};
      break;
    case TaskKind::Colorize:
      c = {.repeats = 20, .lambda = 5.0, .alpha = 0.5, .depth = 2};
      break;
  }
  return c;
}

int cmd_invert(const InvertOptions& o) {
  Checkpoint ckpt = load_checkpoint(o.ckpt_path);
  DegradationSchedule s = ckpt.schedule.build();
  if (s.data_shape.h <= 1)
    throw InvalidState("invert: checkpoint was not trained on image data");

  TaskKind kind = task_kind_from_string(o.task);
  ToyImageSpec spec;
  spec.size = s.data_shape.h;
  spec.channels = s.data_shape.c;
  spec.family = toy_family_from_string(o.family);
  spec.seed = o.image_seed;
  Tensor gts = make_toy_images(spec, o.n);

  SolverConfig solver = default_solver_config(kind, o.sigma, o.factor);
  if (o.repeats) solver.repeats = *o.repeats;
  if (o.prox_lambda) solver.lambda = *o.prox_lambda;
  if (o.alpha) solver.alpha = *o.alpha;
  if (o.depth) solver.depth = *o.depth;

  Rng rng(o.seed);
  const double peak = 2.0;

  ensure_dir(o.out_dir);
  std::ostringstream csv;
  json prov = {{"checkpoint", o.ckpt_path}, {"task", o.task},
               {"sigma", o.sigma},          {"factor", o.factor},
               {"n", o.n},                  {"family", o.family},
               {"image_seed", o.image_seed}, {"seed", o.seed},
               {"repeats", solver.repeats}, {"lambda", solver.lambda},
               {"alpha", solver.alpha},     {"depth", solver.depth}};
  std::string hash = config_hash(prov);
  csv << "# config_hash=" << hash << " seed=" << o.seed << "\n";
  csv << "index,psnr_input,psnr_baseline,psnr_rgm,ssim_baseline,ssim_rgm\n";

  json recs = json::array();
  double mean_base = 0, mean_rgm = 0, mean_input = 0;
  for (std::size_t i = 0; i < o.n; ++i) {
    Tensor gt = Tensor::vector(std::vector<double>(
        gts.data() + i * gts.batch_cols(),
        gts.data() + (i + 1) * gts.batch_cols()));
    InverseTask task;
    switch (kind) {
      case TaskKind::Denoise:
        task = make_denoise(gt, s.data_shape, o.sigma, rng);
        break;
      case TaskKind::SuperResolve:
        task = make_sr(gt, s.data_shape, o.factor);
        break;
      case TaskKind::Colorize:
        task = make_colorize(gt, s.data_shape);
        break;
    }
    Tensor baseline = baseline_reconstruct(task);
    Tensor recon = solve(task, ckpt.gen, ckpt.gen_cfg, s, solver, rng);

    double p_in = kind == TaskKind::Denoise ? psnr(task.y, gt, peak)
                                            : psnr(baseline, gt, peak);
    double p_base = psnr(baseline, gt, peak);
    double p_rgm = psnr(recon, gt, peak);
    double s_base = ssim(baseline, gt, peak);
    double s_rgm = ssim(recon, gt, peak);
    mean_input += p_in;
    mean_base += p_base;
    mean_rgm += p_rgm;
    csv << i << "," << format_double(p_in) << "," << format_double(p_base)
        << "," << format_double(p_rgm) << "," << format_double(s_base) << ","
        << format_double(s_rgm) << "\n";

    json rec;
    rec["y"] = task.y.v;
    rec["baseline"] = baseline.v;
    rec["rgm"] = recon.v;
    rec["ground_truth"] = gt.v;
    recs.push_back(std::move(rec));
  }
  write_text_file(join(o.out_dir, "inverse_metrics.csv"), csv.str());

  json summary;
  summary["provenance"] = prov;
  summary["config_hash"] = hash;
  summary["mean_psnr_input"] = mean_input / static_cast<double>(o.n);
  summary["mean_psnr_baseline"] = mean_base / static_cast<double>(o.n);
  summary["mean_psnr_rgm"] = mean_rgm / static_cast<double>(o.n);
  write_text_file(join(o.out_dir, "inverse_summary.json"), summary.dump(1));

  json dump;
  dump["shape"] = {s.data_shape.h, s.data_shape.w, s.data_shape.c};
  dump["config_hash"] = hash;
  dump["images"] = std::move(recs);
  write_text_file(join(o.out_dir, "reconstructions.json"), dump.dump());
  return kExitOk;
}

int cmd_eval(const EvalOptions& o) {
  Tensor samples = read_samples_csv(o.samples_path);
  Tensor reference = read_samples_csv(o.reference_path);
  double ed = energy_distance(samples, reference);

  json out;
  json prov = {{"samples", o.samples_path}, {"reference", o.reference_path}};
  out["provenance"] = prov;
  out["config_hash"] = config_hash(prov);
  out["energy_distance"] = ed;
  if (samples.batch_cols() == 2) {
    Gmm8Spec spec;
    spec.radius = o.gmm_radius;
    spec.component_std = o.gmm_std;
    spec.standardize = o.gmm_standardize;
    ModeCoverage mc = mode_coverage(samples, spec);
    out["mode_coverage"] = {{"covered", mc.covered},
                            {"fractions", mc.fractions}};
  }
  ensure_dir(o.out_dir);
  write_text_file(join(o.out_dir, "eval.json"), out.dump(1));
  std::cout << out.dump(1) << "\n";
  return kExitOk;
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedSchedule& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const InvalidState& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const VersionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"restoration-based generative modeling toolkit"};
  app.require_subcommand(1);

  ScheduleOptions so;
  auto* sched = app.add_subcommand("schedule", "inspect a degradation schedule");
  sched->add_option("--kind", so.kind, "d | sr-naive | sr");
  sched->add_option("--steps", so.steps, "total forward steps T");
  sched->add_option("--shape", so.shape, "data shape, e.g. 2 or 16x16x1");
  sched->add_option("--out", so.out_path, "also write the table here");

  TrainOptions to;
  auto* tr = app.add_subcommand("train", "train a model from a config file");
  tr->add_option("--config", to.config_path, "config JSON")->required();
  tr->add_option("--out", to.out_dir, "output directory")->required();
  std::uint64_t seed_val = 0;
  auto* seed_opt = tr->add_option("--seed", seed_val, "override config seed");
  tr->add_option("--resume", to.resume_from, "resume from checkpoint");

  SampleOptions po;
  auto* sa = app.add_subcommand("sample", "generate from a checkpoint");
  sa->add_option("--ckpt", po.ckpt_path, "checkpoint JSON")->required();
  sa->add_option("--n", po.n, "number of samples");
  sa->add_option("--out", po.out_dir, "output directory")->required();
  sa->add_option("--seed", po.seed, "sampling seed");

  InvertOptions io_;
  auto* iv = app.add_subcommand("invert", "solve inverse problems");
  iv->add_option("--ckpt", io_.ckpt_path, "checkpoint JSON")->required();
  iv->add_option("--task", io_.task, "denoise | sr | color");
  iv->add_option("--sigma", io_.sigma, "observation noise std (data units)");
  iv->add_option("--factor", io_.factor, "SR block factor");
  iv->add_option("--n", io_.n, "number of test images");
  iv->add_option("--family", io_.family, "toy image family");
  iv->add_option("--image-seed", io_.image_seed, "test image seed");
  iv->add_option("--out", io_.out_dir, "output directory")->required();
  iv->add_option("--seed", io_.seed, "solver seed");
  int m_val = 0;
  double l_val = 0, a_val = 0;
  int k_val = 0;
  auto* mo = iv->add_option("--repeats", m_val, "outer repeats M");
  auto* lo = iv->add_option("--prox-lambda", l_val, "prox weight lambda");
  auto* ao = iv->add_option("--alpha", a_val, "update rate alpha");
  auto* ko = iv->add_option("--depth", k_val, "inner depth K");

  EvalOptions eo;
  auto* ev = app.add_subcommand("eval", "score samples against a reference");
  ev->add_option("--samples", eo.samples_path, "samples CSV")->required();
  ev->add_option("--reference", eo.reference_path, "reference CSV")->required();
  ev->add_option("--out", eo.out_dir, "output directory")->required();
  ev->add_option("--gmm-radius", eo.gmm_radius, "mixture circle radius");
  ev->add_option("--gmm-std", eo.gmm_std, "mixture component std");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sched->parsed()) return cmd_schedule(so);
    if (tr->parsed()) {
      if (seed_opt->count()) to.seed = seed_val;
      return cmd_train(to);
    }
    if (sa->parsed()) return cmd_sample(po);
    if (iv->parsed()) {
      if (mo->count()) io_.repeats = m_val;
      if (lo->count()) io_.prox_lambda = l_val;
      if (ao->count()) io_.alpha = a_val;
      if (ko->count()) io_.depth = k_val;
      return cmd_invert(io_);
    }
    if (ev->parsed()) return cmd_eval(eo);
  } catch (...) {
    return exit_code_for_current_exception();
  }
  return kExitUsage;
}

}  // namespace rgm::cli
