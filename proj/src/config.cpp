#include "kerncollab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kerncollab/sparse.hpp"

namespace kerncollab {

Policy policy_from_string(const std::string& name) {
  if (name == "CEPE" || name == "cepe") return Policy::CEPE;
  if (name == "SCEPE" || name == "scepe" || name == "s-cepe")
    return Policy::SCEPE;
  if (name == "IGPUCB" || name == "igp-ucb" || name == "igpucb")
    return Policy::IGPUCB;
  if (name == "GPEI" || name == "gp-ei" || name == "gpei") return Policy::GPEI;
  if (name == "GPPI" || name == "gp-pi" || name == "gppi") return Policy::GPPI;
  throw std::invalid_argument("unknown policy '" + name +
                              "' (expected CEPE, SCEPE, IGPUCB, GPEI, GPPI)");
}

std::string policy_name(Policy p) {
  switch (p) {
    case Policy::CEPE: return "CEPE";
    case Policy::SCEPE: return "SCEPE";
    case Policy::IGPUCB: return "IGPUCB";
    case Policy::GPEI: return "GPEI";
    case Policy::GPPI: return "GPPI";
  }
  return "?";
}

void ExperimentConfig::apply_paper_scale() {
  clients_K = 50;
  horizon_T = 2000;
  grid_per_dim = 30;
}

void ExperimentConfig::validate() const {
  if (horizon_T < 1)
    throw std::invalid_argument("config: T must be >= 1");
  if (clients_K < 1)
    throw std::invalid_argument("config: K must be >= 1");
  if (grid_per_dim < 1)
    throw std::invalid_argument("config: grid_per_dim must be >= 1");
  if (!(lambda > 0.0))
    throw std::invalid_argument("config: lambda must be positive");
  if (noise_var < 0.0)
    throw std::invalid_argument("config: noise_var must be >= 0");
  if (bound_B < 0.0 || noise_R < 0.0)
    throw std::invalid_argument("config: B and R must be >= 0");
  if (!(delta0 > 0.0 && delta0 < 1.0))
    throw std::invalid_argument("config: delta0 must lie in (0, 1)");
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("config: kappa must lie in (0, 1)");
  if (!(schedule_c > 0.0))
    throw std::invalid_argument("config: schedule_c must be positive");
  if (n_T < 0.0)
    throw std::invalid_argument("config: n_T must be >= 0 (0 = theorem schedule)");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("config: epsilon must lie in (0, 1)");
  if (mc_runs < 1)
    throw std::invalid_argument("config: mc_runs must be >= 1");
  kernel.validate();
}

double ExperimentConfig::resolved_q0() const {
  return q0 >= 0.0 ? q0 : default_q0(epsilon, horizon_T, clients_K, delta0);
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + v +
                                "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw std::invalid_argument("config key '" + key + "': bad integer '" + v +
                                "'");
  }
}

}  // namespace

void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "policy") cfg.policy = policy_from_string(value);
  else if (key == "T") cfg.horizon_T = to_long(key, value);
  else if (key == "K") cfg.clients_K = static_cast<int>(to_long(key, value));
  else if (key == "seed") cfg.seed = static_cast<uint64_t>(std::stoull(value));
  else if (key == "grid_per_dim")
    cfg.grid_per_dim = static_cast<int>(to_long(key, value));
  else if (key == "benchmark") {
    if (value == "branin" || value == "Branin")
      cfg.benchmark = BenchmarkBase::Branin;
    else if (value == "sobester" || value == "Sobester")
      cfg.benchmark = BenchmarkBase::Sobester;
    else
      throw std::invalid_argument("config: benchmark must be branin|sobester");
  } else if (key == "kernel") {
    if (value == "se" || value == "SE")
      cfg.kernel.family = KernelFamily::SquaredExponential;
    else if (value == "matern" || value == "Matern")
      cfg.kernel.family = KernelFamily::Matern;
    else
      throw std::invalid_argument("config: kernel must be se|matern");
  } else if (key == "lengthscale")
    cfg.kernel.lengthscale = to_double(key, value);
  else if (key == "nu") cfg.kernel.nu = to_double(key, value);
  else if (key == "lambda") cfg.lambda = to_double(key, value);
  else if (key == "noise_var") cfg.noise_var = to_double(key, value);
  else if (key == "B") cfg.bound_B = to_double(key, value);
  else if (key == "R") cfg.noise_R = to_double(key, value);
  else if (key == "delta0") cfg.delta0 = to_double(key, value);
  else if (key == "kappa") cfg.kappa = to_double(key, value);
  else if (key == "schedule_c") cfg.schedule_c = to_double(key, value);
  else if (key == "n_T") cfg.n_T = to_double(key, value);
  else if (key == "epsilon") cfg.epsilon = to_double(key, value);
  else if (key == "q0") cfg.q0 = to_double(key, value);
  else if (key == "mc_runs") cfg.mc_runs = static_cast<int>(to_long(key, value));
  else if (key == "out") cfg.out_dir = value;
  else if (key == "paper_scale") {
    if (value == "true" || value == "1") cfg.apply_paper_scale();
    else if (value != "false" && value != "0")
      throw std::invalid_argument("config: paper_scale must be true|false");
  } else
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  bool saw_seed = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // section header
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "seed") saw_seed = true;
    apply_override(cfg, key, value);
  }
  if (!saw_seed) {
    uint64_t s = 0;
    if (env_seed(s)) cfg.seed = s;
  }
  return cfg;
}

bool env_seed(uint64_t& out) {
  const char* v = std::getenv("KERNCOLLAB_SEED");
  if (v == nullptr || *v == '\0') return false;
  out = std::strtoull(v, nullptr, 10);
  return true;
}

std::string config_summary(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "policy=" << policy_name(cfg.policy) << " T=" << cfg.horizon_T
     << " K=" << cfg.clients_K << " seed=" << cfg.seed << " grid="
     << cfg.grid_per_dim << "x" << cfg.grid_per_dim << " benchmark="
     << (cfg.benchmark == BenchmarkBase::Branin ? "branin" : "sobester")
     << " lambda=" << cfg.lambda << " noise_var=" << cfg.noise_var
     << " n_T=" << cfg.n_T << " q0=" << cfg.q0 << " mc_runs=" << cfg.mc_runs;
  return os.str();
}

}  // namespace kerncollab
