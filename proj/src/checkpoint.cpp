#include "rgm/checkpoint.hpp"

#include "rgm/io.hpp"

namespace rgm {
namespace {

json shape_to_json(const DataShape& s) {
  return json::array({s.h, s.w, s.c});
}

DataShape shape_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw CorruptFile("bad data shape");
  return DataShape{j[0].get<std::size_t>(), j[1].get<std::size_t>(),
                   j[2].get<std::size_t>()};
}

json descriptor_to_json(const ScheduleDescriptor& d) {
  return {{"kind", to_string(d.kind)},
          {"steps", d.total_steps},
          {"data_shape", shape_to_json(d.shape)},
          {"beta_min", d.beta.beta_min},
          {"beta_max", d.beta.beta_max}};
}

ScheduleDescriptor descriptor_from_json(const json& j) {
  ScheduleDescriptor d;
  d.kind = schedule_kind_from_string(j.at("kind").get<std::string>());
  d.total_steps = j.at("steps").get<int>();
  d.shape = shape_from_json(j.at("data_shape"));
  d.beta.beta_min = j.at("beta_min").get<double>();
  d.beta.beta_max = j.at("beta_max").get<double>();
  return d;
}

json gen_cfg_to_json(const GeneratorConfig& c) {
  return {{"data_dim", c.data_dim},
          {"z_dim", c.z_dim},
          {"encoding", c.encoding == StepEncoding::ScalarOverT ? "scalar" : "onehot"},
          {"hidden", c.hidden},
          {"depth", c.depth}};
}

GeneratorConfig gen_cfg_from_json(const json& j) {
  GeneratorConfig c;
  c.data_dim = j.at("data_dim").get<std::size_t>();
  c.z_dim = j.at("z_dim").get<std::size_t>();
  c.encoding = j.at("encoding").get<std::string>() == "onehot"
                   ? StepEncoding::OneHot
                   : StepEncoding::ScalarOverT;
  c.hidden = j.at("hidden").get<std::size_t>();
  c.depth = j.at("depth").get<std::size_t>();
  return c;
}

json rng_to_json(const RngSnapshot& r) {
  json words = json::array();
  for (auto w : r.words) words.push_back(u64_to_hex(w));
  return {{"seed", r.seed}, {"words", words}, {"draws", r.draws}};
}

RngSnapshot rng_from_json(const json& j) {
  RngSnapshot r;
  r.seed = j.at("seed").get<std::uint64_t>();
  auto words = j.at("words");
  for (std::size_t i = 0; i < 4; ++i)
    r.words[i] = u64_from_hex(words.at(i).get<std::string>());
  r.draws = j.at("draws").get<std::uint64_t>();
  return r;
}

}  // namespace

bool operator==(const Checkpoint& a, const Checkpoint& b) {
  auto opt_eq = [](const auto& x, const auto& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x.has_value() || *x == *y;
  };
  bool resume_eq = a.resume.has_value() == b.resume.has_value();
  if (resume_eq && a.resume) {
    auto adam_eq = [](const MlpAdam& x, const MlpAdam& y) {
      if (x.w.size() != y.w.size()) return false;
      for (std::size_t i = 0; i < x.w.size(); ++i) {
        if (!(x.w[i].m == y.w[i].m && x.w[i].v == y.w[i].v && x.w[i].t == y.w[i].t))
          return false;
        if (!(x.b[i].m == y.b[i].m && x.b[i].v == y.b[i].v && x.b[i].t == y.b[i].t))
          return false;
      }
      return true;
    };
    resume_eq = adam_eq(a.resume->gen_opt, b.resume->gen_opt) &&
                a.resume->rng == b.resume->rng &&
                a.resume->disc_opt.has_value() == b.resume->disc_opt.has_value() &&
                (!a.resume->disc_opt ||
                 adam_eq(*a.resume->disc_opt, *b.resume->disc_opt)) &&
                a.resume->dswd_opt.has_value() == b.resume->dswd_opt.has_value() &&
                (!a.resume->dswd_opt ||
                 adam_eq(*a.resume->dswd_opt, *b.resume->dswd_opt));
  }
  return a.version == b.version && a.schedule == b.schedule &&
         a.algorithm == b.algorithm && a.prior == b.prior &&
         a.gen_cfg == b.gen_cfg && a.gen == b.gen && opt_eq(a.disc, b.disc) &&
         opt_eq(a.dswd_sampler, b.dswd_sampler) && a.step == b.step &&
         a.seed == b.seed && resume_eq;
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
  json j;
  j["version"] = c.version;
  j["schedule"] = descriptor_to_json(c.schedule);
  j["algorithm"] = c.algorithm;
  j["prior"] = c.prior;
  j["generator_config"] = gen_cfg_to_json(c.gen_cfg);
  j["generator"] = mlp_to_json(c.gen);
  if (c.disc) j["discriminator"] = mlp_to_json(*c.disc);
  if (c.dswd_sampler) j["dswd_sampler"] = mlp_to_json(*c.dswd_sampler);
  j["step"] = c.step;
  j["seed"] = c.seed;
  if (c.resume) {
    json r;
    r["gen_opt"] = mlp_adam_to_json(c.resume->gen_opt);
    if (c.resume->disc_opt) r["disc_opt"] = mlp_adam_to_json(*c.resume->disc_opt);
    if (c.resume->dswd_opt) r["dswd_opt"] = mlp_adam_to_json(*c.resume->dswd_opt);
    r["rng"] = rng_to_json(c.resume->rng);
    j["resume"] = std::move(r);
  }
  write_text_file(path, j.dump(1));
}

Checkpoint load_checkpoint(const std::string& path) {
  json j = parse_json_file(path);
  try {
    int version = j.at("version").get<int>();
    if (version != kCheckpointVersion)
      throw VersionMismatch("unsupported checkpoint version " +
                            std::to_string(version));
    Checkpoint c;
    c.version = version;
    c.schedule = descriptor_from_json(j.at("schedule"));
    c.algorithm = j.at("algorithm").get<std::string>();
    c.prior = j.at("prior").get<std::string>();
    c.gen_cfg = gen_cfg_from_json(j.at("generator_config"));
    c.gen = mlp_from_json(j.at("generator"));
    if (j.contains("discriminator"))
      c.disc = mlp_from_json(j.at("discriminator"));
    if (j.contains("dswd_sampler"))
      c.dswd_sampler = mlp_from_json(j.at("dswd_sampler"));
    c.step = j.at("step").get<std::uint64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("resume")) {
      const json& r = j.at("resume");
      ResumeState rs;
      rs.gen_opt = mlp_adam_from_json(r.at("gen_opt"));
      if (r.contains("disc_opt"))
        rs.disc_opt = mlp_adam_from_json(r.at("disc_opt"));
      if (r.contains("dswd_opt"))
        rs.dswd_opt = mlp_adam_from_json(r.at("dswd_opt"));
      rs.rng = rng_from_json(r.at("rng"));
      c.resume = std::move(rs);
    }
    return c;
  } catch (const VersionMismatch&) {
    throw;
  } catch (const json::exception& e) {
    throw CorruptFile(std::string("checkpoint missing fields: ") + e.what());
  }
}

}  // namespace rgm
