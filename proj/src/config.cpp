// SPDX-License-Identifier: Apache-2.0

#include "maxrom/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "maxrom/pod.hpp"

namespace maxrom {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

class KeyValues {
 public:
  explicit KeyValues(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw std::invalid_argument("config: empty key");
      if (!values_.emplace(key, value).second)
        throw std::invalid_argument("config: duplicate key '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string take(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end())
      throw std::invalid_argument("config: missing required key '" + key + "'");
    consumed_.insert(key);
    return it->second;
  }

  std::string take_or(const std::string& key, const std::string& fallback) {
    return has(key) ? take(key) : fallback;
  }

  /// Keys beginning with `prefix`, in map order.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
      if (k.rfind(prefix, 0) == 0) out.push_back(k);
    return out;
  }

  void reject_unknown() const {
    for (const auto& [k, v] : values_)
      if (!consumed_.count(k))
        throw std::invalid_argument("config: unknown key '" + k + "'");
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
};

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key + "': bad number '" + s + "'");
  }
}

long long to_int(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("config: key '" + key + "': bad integer '" + s + "'");
  }
}

}  // namespace

double ExperimentConfig::period() const { return 2.0 * kPi / omega; }

double ExperimentConfig::resolve_dt(double cfl_dt) const {
  if (!dt_auto) {
    if (!(dt > 0.0) || dt > cfl_dt)
      throw std::invalid_argument("config: time.dt violates the CFL bound " +
                                  std::to_string(cfl_dt));
    return dt;
  }
  const double per = period();
  std::size_t steps = std::max<std::size_t>(
      nt, static_cast<std::size_t>(std::ceil(per / (0.9 * cfl_dt))));
  return per / static_cast<double>(steps);
}

MaterialMap ExperimentConfig::materials_for(std::span<const double> mu) const {
  MaterialMap map;
  for (const auto& [tag, spec] : materials) {
    Material m;
    m.nu_r = spec.nu;
    if (spec.eps_param >= 0) {
      if (static_cast<std::size_t>(spec.eps_param) >= mu.size())
        throw std::invalid_argument("material tag " + std::to_string(tag) +
                                    ": parameter index out of range");
      m.eps_r = mu[spec.eps_param];
    } else {
      m.eps_r = spec.eps;
    }
    map[tag] = m;
  }
  return map;
}

std::string ExperimentConfig::hash() const {
  // canonical rendering, FNV-1a 64
  char buf[256];
  std::string canon;
  auto add = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    canon += buf;
    canon += '\n';
  };
  add("mesh %.17g %d %d", half_width, resolution, order);
  for (const auto& inc : inclusions)
    add("inc %d %.17g %d", static_cast<int>(inc.shape), inc.radius, inc.tag);
  for (const auto& [tag, m] : materials)
    add("mat %d %.17g %d %.17g", tag, m.eps, m.eps_param, m.nu);
  add("drive %.17g %.17g", omega, amplitude);
  add("time %.17g %d %.17g", dt, dt_auto ? 1 : 0, periods);
  for (const auto& r : param_ranges) add("range %.17g %.17g %zu", r.lo, r.hi, r.count);
  add("nt %zu", nt);
  add("pod %zu %zu", pod_k, pod_nbasis);
  add("cae %zu %llu %.17g %.17g %.17g %zu %zu %zu %zu", cae_n,
      static_cast<unsigned long long>(cae_seed), cae_lambda, cae_eta0, cae_alpha,
      cae_batch, cae_max_epochs, cae_patience, cae_width);
  add("csi %.17g", csi_delta);
  for (const auto& p : test_parameters) {
    canon += "test";
    for (double v : p) {
      std::snprintf(buf, sizeof(buf), " %.17g", v);
      canon += buf;
    }
    canon += '\n';
  }
  add("ttimes %d %zu", test_times_train ? 1 : 0, test_times.size());
  for (double v : test_times) add("tt %.17g", v);

  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const std::string& text) {
  KeyValues kv(text);
  ExperimentConfig cfg;

  cfg.half_width = to_double(kv.take("mesh.half_width"), "mesh.half_width");
  cfg.resolution = static_cast<int>(to_int(kv.take("mesh.resolution"), "mesh.resolution"));
  cfg.order = static_cast<int>(to_int(kv.take_or("mesh.order", "1"), "mesh.order"));

  if (kv.has("mesh.inclusions")) {
    for (const std::string& part : split(kv.take("mesh.inclusions"), ';')) {
      const auto fields = split(part, ':');
      if (fields.size() != 3)
        throw std::invalid_argument("config: mesh.inclusions entries are shape:radius:tag");
      Inclusion inc;
      if (fields[0] == "disk")
        inc.shape = InclusionShape::Disk;
      else if (fields[0] == "square")
        inc.shape = InclusionShape::Square;
      else
        throw std::invalid_argument("config: unknown inclusion shape '" + fields[0] + "'");
      inc.radius = to_double(fields[1], "mesh.inclusions");
      inc.tag = static_cast<int>(to_int(fields[2], "mesh.inclusions"));
      cfg.inclusions.push_back(inc);
    }
  }

  for (const std::string& key : kv.keys_with_prefix("material.")) {
    const auto parts = split(key, '.');
    if (parts.size() != 3) throw std::invalid_argument("config: bad material key " + key);
    const int tag = static_cast<int>(to_int(parts[1], key));
    auto& spec = cfg.materials[tag];
    const std::string value = kv.take(key);
    if (parts[2] == "epsilon") {
      if (value.rfind("param:", 0) == 0) {
        spec.eps_param = static_cast<int>(to_int(value.substr(6), key));
      } else {
        spec.eps = to_double(value, key);
      }
    } else if (parts[2] == "nu") {
      spec.nu = to_double(value, key);
    } else {
      throw std::invalid_argument("config: unknown material field '" + parts[2] + "'");
    }
  }

  cfg.omega = to_double(kv.take("drive.omega"), "drive.omega");
  cfg.amplitude = to_double(kv.take_or("drive.amplitude", "1.0"), "drive.amplitude");
  const std::string dt_str = kv.take_or("time.dt", "auto");
  if (dt_str == "auto") {
    cfg.dt_auto = true;
  } else {
    cfg.dt_auto = false;
    cfg.dt = to_double(dt_str, "time.dt");
  }
  cfg.periods = to_double(kv.take("time.periods"), "time.periods");

  for (std::size_t d = 0;; ++d) {
    const std::string key = "sampling.param." + std::to_string(d);
    if (!kv.has(key)) break;
    std::stringstream ss(kv.take(key));
    ParamRange r;
    long long count = 0;
    if (!(ss >> r.lo >> r.hi >> count) || count < 1)
      throw std::invalid_argument("config: key '" + key + "' wants 'lo hi count'");
    r.count = static_cast<std::size_t>(count);
    cfg.param_ranges.push_back(r);
  }
  if (cfg.param_ranges.empty())
    throw std::invalid_argument("config: at least sampling.param.0 is required");

  cfg.nt = static_cast<std::size_t>(to_int(kv.take("sampling.nt"), "sampling.nt"));
  cfg.pod_k = static_cast<std::size_t>(to_int(kv.take("pod.k"), "pod.k"));
  cfg.pod_nbasis = static_cast<std::size_t>(to_int(kv.take("pod.nbasis"), "pod.nbasis"));
  cfg.cae_n = static_cast<std::size_t>(to_int(kv.take("cae.n"), "cae.n"));
  cfg.cae_seed = static_cast<std::uint64_t>(to_int(kv.take("cae.seed"), "cae.seed"));
  cfg.cae_lambda = to_double(kv.take_or("cae.lambda", "0.8"), "cae.lambda");
  cfg.cae_eta0 = to_double(kv.take_or("cae.eta0", "1e-4"), "cae.eta0");
  cfg.cae_alpha = to_double(kv.take_or("cae.alpha", "0.05"), "cae.alpha");
  cfg.cae_batch = static_cast<std::size_t>(to_int(kv.take_or("cae.batch", "50"), "cae.batch"));
  cfg.cae_max_epochs =
      static_cast<std::size_t>(to_int(kv.take_or("cae.max_epochs", "5000"), "cae.max_epochs"));
  cfg.cae_patience =
      static_cast<std::size_t>(to_int(kv.take_or("cae.patience", "500"), "cae.patience"));
  cfg.cae_width = static_cast<std::size_t>(to_int(kv.take_or("cae.width", "8"), "cae.width"));
  cfg.csi_delta = to_double(kv.take_or("csi.delta", "1e-4"), "csi.delta");

  if (kv.has("test.parameters")) {
    for (const std::string& vec : split(kv.take("test.parameters"), ';')) {
      std::vector<double> p;
      for (const std::string& comp : split(vec, ','))
        p.push_back(to_double(comp, "test.parameters"));
      if (p.size() != cfg.param_ranges.size())
        throw std::invalid_argument("config: test parameter dimension mismatch");
      cfg.test_parameters.push_back(std::move(p));
    }
  }
  const std::string tt = kv.take_or("test.times", "train");
  if (tt == "train") {
    cfg.test_times_train = true;
  } else {
    cfg.test_times_train = false;
    for (const std::string& v : split(tt, ',')) cfg.test_times.push_back(to_double(v, "test.times"));
  }

  cfg.workdir = kv.take("paths.workdir");
  cfg.threads =
      static_cast<int>(to_int(kv.take_or("pipeline.threads", "0"), "pipeline.threads"));

  kv.reject_unknown();

  // cross-field validation
  if (!(cfg.half_width > 0.0)) throw std::invalid_argument("config: mesh.half_width > 0");
  if (!(cfg.omega > 0.0)) throw std::invalid_argument("config: drive.omega > 0");
  if (!(cfg.periods > 0.0)) throw std::invalid_argument("config: time.periods > 0");
  if (cfg.nt == 0) throw std::invalid_argument("config: sampling.nt > 0");
  if (!cfg.materials.count(kVacuumTag))
    throw std::invalid_argument("config: material.0 (vacuum tag) must be defined");
  for (const auto& inc : cfg.inclusions)
    if (!cfg.materials.count(inc.tag))
      throw std::invalid_argument("config: inclusion tag " + std::to_string(inc.tag) +
                                  " has no material");
  for (const auto& [tag, spec] : cfg.materials)
    if (spec.eps_param >= 0 &&
        static_cast<std::size_t>(spec.eps_param) >= cfg.param_ranges.size())
      throw std::invalid_argument("config: material parameter index out of range");
  for (const auto& p : cfg.test_parameters)
    for (std::size_t d = 0; d < p.size(); ++d)
      if (p[d] < cfg.param_ranges[d].lo || p[d] > cfg.param_ranges[d].hi)
        throw std::invalid_argument(
            "config: test parameter outside the training range in dimension " +
            std::to_string(d));
  if (!is_perfect_square(cfg.pod_nbasis))
    throw std::invalid_argument("config: pod.nbasis must be a perfect square");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace maxrom
