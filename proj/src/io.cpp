#include "rgm/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rgm/errors.hpp"

namespace rgm {

json tensor_to_json(const Tensor& t) {
  json j;
  j["shape"] = t.shape;
  j["values"] = t.v;
  return j;
}

Tensor tensor_from_json(const json& j) {
  Tensor t;
  t.shape = j.at("shape").get<std::vector<std::size_t>>();
  t.v = j.at("values").get<std::vector<double>>();
  std::size_t n = 1;
  for (auto d : t.shape) n *= d;
  if (n != t.v.size()) throw CorruptFile("tensor: shape does not match values");
  return t;
}

json mlp_to_json(const MlpParams& p) {
  json layers = json::array();
  for (const auto& l : p.layers)
    layers.push_back({{"w", tensor_to_json(l.w)}, {"b", tensor_to_json(l.b)}});
  return {{"layers", layers}};
}

MlpParams mlp_from_json(const json& j) {
  MlpParams p;
  for (const auto& lj : j.at("layers")) {
    MlpParams::Layer l;
    l.w = tensor_from_json(lj.at("w"));
    l.b = tensor_from_json(lj.at("b"));
    p.layers.push_back(std::move(l));
  }
  return p;
}

json adam_state_to_json(const AdamState& s) {
  return {{"m", tensor_to_json(s.m)},    {"v", tensor_to_json(s.v)},
          {"t", s.t},                    {"lr", s.cfg.lr},
          {"beta1", s.cfg.beta1},        {"beta2", s.cfg.beta2},
          {"eps", s.cfg.eps}};
}

AdamState adam_state_from_json(const json& j) {
  AdamState s;
  s.m = tensor_from_json(j.at("m"));
  s.v = tensor_from_json(j.at("v"));
  s.t = j.at("t").get<std::uint64_t>();
  s.cfg.lr = j.at("lr").get<double>();
  s.cfg.beta1 = j.at("beta1").get<double>();
  s.cfg.beta2 = j.at("beta2").get<double>();
  s.cfg.eps = j.at("eps").get<double>();
  return s;
}

json mlp_adam_to_json(const MlpAdam& a) {
  json w = json::array(), b = json::array();
  for (const auto& s : a.w) w.push_back(adam_state_to_json(s));
  for (const auto& s : a.b) b.push_back(adam_state_to_json(s));
  return {{"w", w}, {"b", b}};
}

MlpAdam mlp_adam_from_json(const json& j) {
  MlpAdam a;
  for (const auto& s : j.at("w")) a.w.push_back(adam_state_from_json(s));
  for (const auto& s : j.at("b")) a.b.push_back(adam_state_from_json(s));
  return a;
}

std::string u64_to_hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::uint64_t u64_from_hex(const std::string& s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || p != s.data() + s.size())
    throw CorruptFile("bad hex value: " + s);
  return v;
}

std::string config_hash(const json& config) {
  std::string dump = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return u64_to_hex(h);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << content;
  if (!f) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json parse_json_file(const std::string& path) {
  std::string text = read_text_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw CorruptFile("not valid JSON: " + path);
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shorter form when it round-trips exactly.
  char shorter[40];
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

void write_samples_csv(const std::string& path, const Tensor& samples,
                       const std::string& hash, std::uint64_t seed) {
  std::ostringstream out;
  out << "# config_hash=" << hash << " seed=" << seed << "\n";
  std::size_t cols = samples.batch_cols();
  for (std::size_t j = 0; j < cols; ++j)
    out << (j ? "," : "") << "x" << j;
  out << "\n";
  for (std::size_t i = 0; i < samples.batch_rows(); ++i) {
    const double* row = samples.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (j) out << ",";
      out << format_double(row[j]);
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

Tensor read_samples_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<double> values;
  std::size_t cols = 0, rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!line.empty() && (std::isalpha(static_cast<unsigned char>(line[0]))))
      continue;  // header row
    std::size_t c = 0;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t next = line.find(',', pos);
      std::string tok = line.substr(
          pos, next == std::string::npos ? std::string::npos : next - pos);
      if (!tok.empty()) {
        values.push_back(std::stod(tok));
        ++c;
      }
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (c == 0) continue;
    if (cols == 0) cols = c;
    if (c != cols) throw CorruptFile("ragged CSV: " + path);
    ++rows;
  }
  if (rows == 0) throw CorruptFile("no data rows in: " + path);
  Tensor t = Tensor::matrix(rows, cols);
  t.v = std::move(values);
  return t;
}

}  // namespace rgm
