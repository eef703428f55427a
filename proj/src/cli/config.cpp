#include "lapmor/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "lapmor/errors.hpp"
#include "lapmor/models.hpp"

namespace lapmor::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  is.imbue(std::locale::classic());
  double d;
  if (!(is >> d) || !is.eof()) {
    is.clear();
    std::string rest;
    if (!(is >> rest).fail() || !is.eof()) throw ConfigError(key + ": '" + v + "' is not a number");
  }
  return d;
}

long long to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != static_cast<double>(static_cast<long long>(d))) throw ConfigError(key + ": '" + v + "' is not an integer");
  return static_cast<long long>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": '" + v + "' is not a boolean");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model", "bs.n_h", "bs.s_max", "bs.strike", "heston.n_s", "heston.n_v", "heston.s_max",
      "heston.v_max", "heston.strike", "heston.active", "advection.n_h", "box.lower", "box.upper",
      "xi.kind", "xi.per_dim", "xi.count", "seed", "window.t0", "window.Lambda", "window.samples",
      "tol", "tol_pod", "quad.tol", "profile.tol", "profile.validate", "sigma.source", "contour.a1",
      "contour.a2", "contour.c", "contour.N", "greedy.max_iterations", "algorithm", "stepper",
      "stepper.dt", "classical.stride", "classical.max_size", "classical.training", "compare.nr",
      "compare.reps", "compare.test_count", "online.mu", "online.t", "online.artifact", "sigma.z",
      "sigma.audit", "sigma.audit_per_dim", "svd.kind", "svd.mu_count", "svd.T", "svd.dt",
      "svd.stepper"};
  return keys;
}

int heston_index(const std::string& name) {
  static const std::vector<std::string> names = {"sigma", "r_d", "kappa", "eta", "rho"};
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ConfigError("heston.active: unknown parameter '" + name + "'");
  return static_cast<int>(it - names.begin());
}

}  // namespace

KeyValues KeyValues::parse(const std::string& text) {
  KeyValues kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv.map_[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
  const auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValues::canonical() const {
  std::string out;
  for (const auto& [k, v] : map_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::PodGreedy: return "pod-greedy";
    case Algorithm::LocalGreedy: return "local-greedy";
    case Algorithm::PlainPod: return "plain-pod";
  }
  return "?";
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(to_double("list", item));
  return out;
}

Complex parse_complex(const std::string& text) {
  // Accepts "a", "a+bi", "a-bi", "bi".
  std::string s;
  for (char ch : text)
    if (ch != ' ') s += ch;
  if (s.empty()) throw ConfigError("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {to_double("complex", s), 0.0};
  s.pop_back();
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  if (cut == std::string::npos) return {0.0, to_double("complex", s.empty() || s == "+" || s == "-" ? s + "1" : s)};
  std::string im = s.substr(cut);
  if (im == "+" || im == "-") im += "1";
  return {to_double("complex", s.substr(0, cut)), to_double("complex", im)};
}

ExperimentConfig ExperimentConfig::from_settings(const KeyValues& kv, bool paper_scale) {
  for (const auto& [k, v] : kv.map())
    if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");
  ExperimentConfig c;
  c.raw = kv;
  c.paper_scale = paper_scale;
  auto str = [&](const char* k, std::string d) { return kv.get(k).value_or(d); };
  auto num = [&](const char* k, double d) { auto v = kv.get(k); return v ? to_double(k, *v) : d; };
  auto integer = [&](const char* k, long long d) { auto v = kv.get(k); return v ? to_int(k, *v) : d; };
  auto opt = [&](const char* k) -> std::optional<double> {
    auto v = kv.get(k);
    if (!v) return std::nullopt;
    return to_double(k, *v);
  };

  c.model = str("model", "black-scholes");
  c.seed = static_cast<std::uint64_t>(integer("seed", 1));
  ParameterBox default_box;
  std::vector<int> default_lattice;
  if (c.model == "black-scholes") {
    c.n_h = integer("bs.n_h", paper_scale ? 1000 : 200);
    c.s_max = num("bs.s_max", 200.0);
    c.strike = num("bs.strike", 100.0);
    if (c.n_h < 3) throw ConfigError("bs.n_h must be at least 3");
    default_box = ParameterBox((Vec(2) << 0.05, 0.001).finished(), (Vec(2) << 0.25, 0.02).finished());
    default_lattice = paper_scale ? std::vector<int>{20, 20} : std::vector<int>{10, 10};
    c.t0 = paper_scale ? 0.1 : 1.0;
    c.Lambda = 10.0;
    c.dt = paper_scale ? 1e-4 : 1e-3;
  } else if (c.model == "heston") {
    c.n_s = integer("heston.n_s", paper_scale ? 100 : 40);
    c.n_v = integer("heston.n_v", paper_scale ? 100 : 20);
    c.s_max = num("heston.s_max", 800.0);
    c.v_max = num("heston.v_max", 5.0);
    c.strike = num("heston.strike", 100.0);
    if (auto a = kv.get("heston.active")) {
      c.heston_active.clear();
      for (const auto& name : split(*a, ',')) c.heston_active.push_back(heston_index(name));
      if (c.heston_active.empty()) throw ConfigError("heston.active is empty");
    }
    if (c.n_s < 3 || c.n_v < 3) throw ConfigError("heston grid needs at least 3 points per direction");
    default_box = heston_box(c.heston_active);
    const int per = c.heston_active.size() > 2 ? (paper_scale ? 5 : 3) : (paper_scale ? 15 : 5);
    default_lattice.assign(c.heston_active.size(), per);
    c.t0 = 0.5;
    c.Lambda = 2.0;
    c.dt = paper_scale ? 1e-4 : 1e-3;
  } else if (c.model == "advection") {
    c.n_h = integer("advection.n_h", 1000);
    if (c.n_h < 2) throw ConfigError("advection.n_h must be at least 2");
    default_box = ParameterBox(Vec::Constant(1, 0.1), Vec::Constant(1, 1.0));
    c.xi_kind = "random";
    c.xi_count = paper_scale ? 100 : 20;
    c.t0 = 0.25;
    c.Lambda = 2.0;
    c.dt = 1e-3;
    c.stepper = "backward-euler";
  } else {
    throw ConfigError("unknown model '" + c.model + "'");
  }

  if (kv.has("box.lower") || kv.has("box.upper")) {
    const auto lo = parse_list(str("box.lower", ""));
    const auto hi = parse_list(str("box.upper", ""));
    if (lo.size() != static_cast<std::size_t>(default_box.dim()) || hi.size() != lo.size())
      throw ConfigError("box.lower/box.upper must both have " + std::to_string(default_box.dim()) + " entries");
    c.box = ParameterBox(Eigen::Map<const Vec>(lo.data(), static_cast<Index>(lo.size())),
                         Eigen::Map<const Vec>(hi.data(), static_cast<Index>(hi.size())));
  } else {
    c.box = default_box;
  }

  c.xi_kind = str("xi.kind", c.xi_kind);
  if (c.xi_kind != "lattice" && c.xi_kind != "random") throw ConfigError("xi.kind must be lattice or random");
  c.xi_per_dim = default_lattice.empty() ? std::vector<int>(static_cast<std::size_t>(c.box.dim()), 10) : default_lattice;
  if (auto v = kv.get("xi.per_dim")) {
    const auto l = parse_list(*v);
    c.xi_per_dim.clear();
    for (double d : l) c.xi_per_dim.push_back(static_cast<int>(d));
    if (c.xi_per_dim.size() == 1) c.xi_per_dim.assign(static_cast<std::size_t>(c.box.dim()), c.xi_per_dim[0]);
    if (c.xi_per_dim.size() != static_cast<std::size_t>(c.box.dim()))
      throw ConfigError("xi.per_dim must have one entry per parameter");
    for (int n : c.xi_per_dim)
      if (n < 1) throw ConfigError("xi.per_dim entries must be positive");
  }
  c.xi_count = static_cast<std::size_t>(integer("xi.count", static_cast<long long>(c.xi_count)));
  if (c.xi_count < 1) throw ConfigError("xi.count must be positive");

  c.t0 = num("window.t0", c.t0);
  c.Lambda = num("window.Lambda", c.Lambda);
  if (!(c.t0 > 0.0) || !(c.Lambda > 1.0)) throw ConfigError("window needs t0 > 0 and Lambda > 1");
  c.time_samples = static_cast<int>(integer("window.samples", 10));
  if (c.time_samples < 2) throw ConfigError("window.samples must be at least 2");

  c.tol = num("tol", c.tol);
  c.tol_pod = num("tol_pod", c.tol_pod);
  c.quad_tol = num("quad.tol", c.quad_tol);
  c.profile_tol = num("profile.tol", c.profile_tol);
  if (!(c.tol > 0.0) || !(c.quad_tol > 0.0) || !(c.profile_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (!(c.tol_pod > 0.0 && c.tol_pod < 1.0)) throw ConfigError("tol_pod must lie in (0, 1)");
  if (auto v = kv.get("profile.validate")) c.validate_profile = to_bool("profile.validate", *v);
  c.sigma_source = str("sigma.source", "optimized");
  if (c.sigma_source != "optimized" && c.sigma_source != "exact")
    throw ConfigError("sigma.source must be optimized or exact");
  c.a1 = opt("contour.a1");
  c.a2 = opt("contour.a2");
  // The source pole at z = 0 sits at distance |a1| from the real s-axis once
  // a2 ≥ a1², which cuts the node count on the short paper-scale window.
  if (!c.a2 && paper_scale && c.model == "black-scholes") c.a2 = 1.0;
  c.c = opt("contour.c");
  if (auto v = kv.get("contour.N")) c.nodes = static_cast<int>(to_int("contour.N", *v));
  if (c.a1 && !(*c.a1 < 0.0)) throw ConfigError("contour.a1 must be negative");
  if (c.a2 && !(*c.a2 > 0.0)) throw ConfigError("contour.a2 must be positive");
  if (c.c && !(*c.c > 0.0)) throw ConfigError("contour.c must be positive");
  if (c.nodes && *c.nodes < 2) throw ConfigError("contour.N must be at least 2");
  c.max_iterations = static_cast<int>(integer("greedy.max_iterations", 100));

  const std::string alg = str("algorithm", "pod-greedy");
  if (alg == "pod-greedy") c.algorithm = Algorithm::PodGreedy;
  else if (alg == "local-greedy") c.algorithm = Algorithm::LocalGreedy;
  else if (alg == "plain-pod") c.algorithm = Algorithm::PlainPod;
  else throw ConfigError("algorithm must be pod-greedy, local-greedy or plain-pod");

  c.stepper = str("stepper", c.stepper);
  if (stepper_from_string(c.stepper) == Stepper::ForwardEuler)
    throw ConfigError("stepper must be implicit (crank-nicolson or backward-euler)");
  c.dt = num("stepper.dt", c.dt);
  if (!(c.dt > 0.0)) throw ConfigError("stepper.dt must be positive");
  c.classical_stride = integer("classical.stride", c.classical_stride);
  c.classical_max = integer("classical.max_size", c.classical_max);
  c.classical_training = static_cast<std::size_t>(integer("classical.training", 0));
  if (c.classical_stride < 1 || c.classical_max < 1) throw ConfigError("classical settings must be positive");
  if (auto v = kv.get("compare.nr")) {
    for (double d : parse_list(*v)) {
      if (d < 1) throw ConfigError("compare.nr entries must be positive");
      c.nr_list.push_back(static_cast<Index>(d));
    }
  }
  c.reps = static_cast<int>(integer("compare.reps", paper_scale ? 100 : 5));
  c.test_count = static_cast<std::size_t>(integer("compare.test_count", 5));
  if (c.reps < 1 || c.test_count < 1) throw ConfigError("compare.reps and compare.test_count must be positive");

  if (auto v = kv.get("online.mu")) {
    for (const auto& item : split(*v, ';')) {
      const auto l = parse_list(item);
      Parameter mu = Eigen::Map<const Vec>(l.data(), static_cast<Index>(l.size()));
      if (mu.size() != c.box.dim()) throw ConfigError("online.mu has wrong length");
      c.online_mu.push_back(mu);
    }
  }
  if (auto v = kv.get("online.t")) c.online_t = parse_list(*v);
  c.artifact = str("online.artifact", "");

  if (auto v = kv.get("sigma.z"))
    for (const auto& item : split(*v, ';')) c.sigma_z.push_back(parse_complex(item));
  if (auto v = kv.get("sigma.audit")) c.sigma_audit = to_bool("sigma.audit", *v);
  c.sigma_audit_per_dim = c.xi_per_dim;
  if (auto v = kv.get("sigma.audit_per_dim")) {
    c.sigma_audit_per_dim.clear();
    for (double d : parse_list(*v)) c.sigma_audit_per_dim.push_back(static_cast<int>(d));
    if (c.sigma_audit_per_dim.size() == 1)
      c.sigma_audit_per_dim.assign(static_cast<std::size_t>(c.box.dim()), c.sigma_audit_per_dim[0]);
  }

  c.svd_kind = str("svd.kind", "advection");
  if (c.svd_kind != "advection" && c.svd_kind != "heaviside") throw ConfigError("svd.kind must be advection or heaviside");
  c.svd_mu_count = static_cast<int>(integer("svd.mu_count", c.svd_kind == "heaviside" ? 50 : 20));
  c.svd_T = num("svd.T", 0.5);
  c.svd_dt = num("svd.dt", 1e-3);
  c.svd_stepper = str("svd.stepper", "backward-euler");
  stepper_from_string(c.svd_stepper);
  if (c.svd_mu_count < 1 || !(c.svd_T > 0.0) || !(c.svd_dt > 0.0)) throw ConfigError("svd settings must be positive");
  return c;
}

}  // namespace lapmor::cli
