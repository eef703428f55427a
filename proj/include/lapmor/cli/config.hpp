#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lapmor/types.hpp"

namespace lapmor::cli {

/// Flat `key = value` settings; `#` starts a comment.
class KeyValues {
 public:
  static KeyValues parse(const std::string& text);
  static KeyValues load(const std::string& path);

  void set(const std::string& key, const std::string& value) { map_[key] = value; }
  bool has(const std::string& key) const { return map_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& map() const { return map_; }

  /// Canonical "key=value\n" listing sorted by key.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> map_;
};

std::uint64_t fnv1a(const std::string& s);

enum class Algorithm { PodGreedy, LocalGreedy, PlainPod };

/// Validated experiment settings. Everything is checked in `from_settings`
/// so commands never start on bad input.
struct ExperimentConfig {
  KeyValues raw;
  bool paper_scale = false;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = ".";

  std::string model = "black-scholes";
  Index n_h = 200;
  double s_max = 200.0;
  double strike = 100.0;
  Index n_s = 40;
  Index n_v = 20;
  double v_max = 5.0;
  std::vector<int> heston_active = {2, 3};

  ParameterBox box;
  std::string xi_kind = "lattice";
  std::vector<int> xi_per_dim;
  std::size_t xi_count = 100;

  double t0 = 1.0;
  double Lambda = 10.0;
  int time_samples = 10;

  double tol = 1e-3;
  double tol_pod = 1e-14;
  double quad_tol = 5e-6;
  double profile_tol = 1e-6;
  bool validate_profile = true;
  std::string sigma_source = "optimized";
  std::optional<double> a1, a2, c;
  std::optional<int> nodes;
  int max_iterations = 100;
  Algorithm algorithm = Algorithm::PodGreedy;

  std::string stepper = "crank-nicolson";
  double dt = 1e-3;
  Index classical_stride = 10;
  Index classical_max = 60;
  std::size_t classical_training = 0;  // 0: use Ξ
  std::vector<Index> nr_list;
  int reps = 5;
  std::size_t test_count = 5;  // μ samples for online timing

  std::vector<Parameter> online_mu;
  std::vector<double> online_t;
  std::string artifact;

  std::vector<Complex> sigma_z;
  bool sigma_audit = true;
  std::vector<int> sigma_audit_per_dim;

  std::string svd_kind = "advection";
  int svd_mu_count = 20;
  double svd_T = 0.5;
  double svd_dt = 1e-3;
  std::string svd_stepper = "backward-euler";

  static ExperimentConfig from_settings(const KeyValues& kv, bool paper_scale);
  std::uint64_t hash() const { return fnv1a(raw.canonical()); }
};

std::string to_string(Algorithm a);
std::vector<double> parse_list(const std::string& s);
Complex parse_complex(const std::string& s);

}  // namespace lapmor::cli
