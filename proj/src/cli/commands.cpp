#include "lapmor/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "lapmor/artifact.hpp"
#include "lapmor/cli/csv.hpp"
#include "lapmor/contour.hpp"
#include "lapmor/errors.hpp"
#include "lapmor/fom_laplace.hpp"
#include "lapmor/models.hpp"
#include "lapmor/sigma.hpp"
#include "parallel.hpp"

namespace lapmor::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string out_path(const ExperimentConfig& cfg, const std::string& file) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / file).string();
}

std::vector<std::string> mu_columns(const std::string& prefix, Index p) {
  std::vector<std::string> cols;
  for (Index k = 0; k < p; ++k) cols.push_back(prefix + std::to_string(k + 1));
  return cols;
}

void append_mu(std::vector<Cell>& row, const Parameter& mu) {
  for (Index k = 0; k < mu.size(); ++k) row.emplace_back(mu[k]);
}

TimeWindow window_of(const ExperimentConfig& cfg) { return {cfg.t0, cfg.Lambda}; }

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Artifact metadata carries the settings so `online` can rebuild the model.
void store_config(const ExperimentConfig& cfg, std::map<std::string, std::string>& meta) {
  for (const auto& [k, v] : cfg.raw.map()) meta["config." + k] = v;
  meta["config_paper_scale"] = cfg.paper_scale ? "1" : "0";
  meta["config_hash"] = format_hash(cfg.hash());
}

ExperimentConfig restore_config(const std::map<std::string, std::string>& meta, const ExperimentConfig& cli) {
  KeyValues kv;
  for (const auto& [k, v] : meta)
    if (k.rfind("config.", 0) == 0) kv.set(k.substr(7), v);
  // Online query settings come from the invoking config.
  for (const char* k : {"online.mu", "online.t", "online.artifact"})
    if (auto v = cli.raw.get(k)) kv.set(k, *v);
  const auto it = meta.find("config_paper_scale");
  ExperimentConfig cfg = ExperimentConfig::from_settings(kv, it != meta.end() && it->second == "1");
  cfg.out_dir = cli.out_dir;
  cfg.threads = cli.threads;
  return cfg;
}

ReducedBasis plain_pod_basis(const Setup& s, double tol_pod) {
  const Index per = s.ctx.grid.size();
  CMat pool(s.model.dim(), per * static_cast<Index>(s.xi.size()));
  for (std::size_t i = 0; i < s.xi.size(); ++i) {
    const auto snaps = solve_nodes(s.model, s.ctx.grid, s.xi[i]);
    for (Index j = 0; j < per; ++j) pool.col(static_cast<Index>(i) * per + j) = snaps[static_cast<std::size_t>(j)].uhat;
  }
  return pod(pool, tol_pod);
}

struct LaplaceOffline {
  ReducedBasis basis;  // empty for the local greedy
  LocalBases local;
  std::vector<std::pair<Index, GreedyLog>> logs;  // (node or −1, log)
  Index stored = 0;
  double seconds = 0.0;
};

LaplaceOffline run_offline(const ExperimentConfig& cfg, const Setup& s) {
  LaplaceOffline out;
  GreedyOptions gopts;
  gopts.max_iterations = cfg.max_iterations;
  const auto start = Clock::now();
  const Parameter& mu_1 = s.xi[0];
  switch (cfg.algorithm) {
    case Algorithm::PodGreedy: {
      auto r = greedy_pod(s.model, s.ctx, s.xi, cfg.tol, cfg.tol_pod, mu_1, gopts);
      out.basis = std::move(r.basis);
      out.logs.emplace_back(-1, std::move(r.log));
      out.stored = out.basis.size();
      break;
    }
    case Algorithm::LocalGreedy: {
      out.local = greedy_local_all(s.model, s.ctx, s.xi, cfg.tol, mu_1, gopts);
      for (std::size_t j = 0; j < out.local.logs.size(); ++j)
        out.logs.emplace_back(static_cast<Index>(j), out.local.logs[j]);
      out.stored = out.local.stored_snapshots();
      break;
    }
    case Algorithm::PlainPod:
      out.basis = plain_pod_basis(s, cfg.tol_pod);
      out.stored = static_cast<Index>(s.xi.size()) * s.ctx.grid.size();
      break;
  }
  out.seconds = seconds_since(start);
  return out;
}

CsvTable greedy_log_table(const std::vector<std::pair<Index, GreedyLog>>& logs, Index p) {
  CsvTable t(concat(concat({"node", "iteration"}, mu_columns("mu_", p)),
                    {"max_estimate", "n_r", "stored_snapshots", "wall_seconds"}));
  for (const auto& [node, log] : logs) {
    for (const auto& st : log.steps) {
      std::vector<Cell> row{static_cast<long long>(node), static_cast<long long>(st.iteration)};
      append_mu(row, st.mu);
      row.emplace_back(st.max_estimate);
      row.emplace_back(static_cast<long long>(st.n_r));
      row.emplace_back(static_cast<long long>(st.stored_snapshots));
      row.emplace_back(st.wall_seconds);
      t.add_row(std::move(row));
    }
  }
  return t;
}

std::vector<Index> default_sizes(Index max_size) {
  std::vector<Index> out;
  const Index step = std::max<Index>(1, max_size / 12);
  for (Index k = 1; k < max_size; k += step) out.push_back(k);
  out.push_back(max_size);
  return out;
}

TruthSet stepper_truth(const DiscretizedModel& model, const ParameterGrid& xi, Stepper stepper,
                       double dt, const std::vector<double>& times) {
  TruthSet truth;
  truth.times = times;
  truth.solutions.resize(xi.size());
  const double t_end = *std::max_element(times.begin(), times.end());
  detail::parallel_for(static_cast<Index>(xi.size()), [&](Index i) {
    const auto traj = step_reference(model, xi[static_cast<std::size_t>(i)], stepper, dt, t_end, 1);
    truth.solutions[static_cast<std::size_t>(i)] = sample_trajectory(traj, times);
  });
  return truth;
}

std::vector<double> singular_values(const CMat& m) {
  Eigen::BDCSVD<CMat> svd(m);
  const Vec s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::vector<double> singular_values(const Mat& m) {
  Eigen::BDCSVD<Mat> svd(m);
  const Vec s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = n == 1 ? a : a + (b - a) * k / (n - 1);
  return v;
}

}  // namespace

DiscretizedModel build_model(const ExperimentConfig& cfg) {
  if (cfg.model == "black-scholes") return black_scholes(cfg.n_h, cfg.s_max, cfg.strike);
  if (cfg.model == "heston") {
    HestonOptions o;
    o.n_s = cfg.n_s;
    o.n_v = cfg.n_v;
    o.s_max = cfg.s_max;
    o.v_max = cfg.v_max;
    o.strike = cfg.strike;
    o.active = cfg.heston_active;
    o.box = cfg.box;
    return heston(o);
  }
  if (cfg.model == "advection") return advection(cfg.n_h);
  throw ConfigError("unknown model '" + cfg.model + "'");
}

ParameterGrid build_training_set(const ExperimentConfig& cfg) {
  if (cfg.xi_kind == "random") return ParameterGrid::random(cfg.box, cfg.xi_count, cfg.seed);
  return ParameterGrid::lattice(cfg.box, cfg.xi_per_dim);
}

QuadratureGrid build_quadrature(const ExperimentConfig& cfg, const DiscretizedModel& model) {
  const TimeWindow window = window_of(cfg);
  const auto probe = model.default_probe();
  ParabolicContour contour = default_contour(model, probe);
  if (cfg.a1 || cfg.a2) contour = ParabolicContour(cfg.a1.value_or(contour.a1), cfg.a2.value_or(contour.a2));

  double c = 0.0;
  if (cfg.c) {
    c = *cfg.c;
  } else if (model.contour_hint.c) {
    c = *model.contour_hint.c;
  } else {
    const TruncationOptions topts;
    const double bound = estimate_transform_bound(model, contour, probe,
                                                  {topts.c_max / 4, topts.c_max / 2, topts.c_max});
    c = choose_truncation(contour, window.t0, bound, cfg.quad_tol, topts);
  }

  int n = 0;
  if (cfg.nodes) {
    n = *cfg.nodes;
  } else if (model.contour_hint.nodes) {
    n = *model.contour_hint.nodes;
  } else {
    const auto times = window.sample(3);
    n = choose_node_count(model, contour, model.reference_mu, times, cfg.quad_tol, c).N;
  }
  return build_grid(contour, c, n);
}

Setup prepare(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  Setup s;
  s.model = build_model(cfg);
  s.xi = build_training_set(cfg);
  s.ctx.window = window_of(cfg);
  QuadratureGrid grid = build_quadrature(cfg, s.model);
  if (cfg.sigma_source == "exact") {
    const auto lbs = exact_sigma_lower_bounds(s.model.op(), grid, s.xi);
    s.ctx.sigma_lb = lbs.per_node;
    s.ctx.source = SigmaSource::Exact;
    s.eigenproblems = lbs.eigenproblem_count;
  } else if (cfg.validate_profile) {
    const auto outcome = construct_profile(s.model, grid, cfg.box, s.ctx.window, cfg.profile_tol);
    grid = outcome.grid;
    s.ctx.sigma_lb = outcome.check.lbs.per_node;
    s.ctx.source = SigmaSource::Optimized;
    s.profile_rounds = outcome.rounds;
    s.profile_bound = outcome.check.err_bound;
    s.eigenproblems = outcome.check.lbs.eigenproblem_count;
  } else {
    const auto lbs = compute_sigma_lower_bounds(s.model.op(), grid, cfg.box);
    s.ctx.sigma_lb = lbs.per_node;
    s.ctx.source = SigmaSource::Optimized;
    s.eigenproblems = lbs.eigenproblem_count;
  }
  s.ctx.grid = grid;
  s.ctx.validate();
  s.seconds = seconds_since(start);
  return s;
}

int cmd_offline(const ExperimentConfig& cfg) {
  const Setup s = prepare(cfg);
  LaplaceOffline off;
  try {
    off = run_offline(cfg, s);
  } catch (const GreedyStall& e) {
    greedy_log_table({{-1, e.log()}}, s.model.param_dim()).write(out_path(cfg, "offline_log.csv"), cfg.hash());
    throw;
  }
  CsvTable log = greedy_log_table(off.logs, s.model.param_dim());
  log.add_meta("model", cfg.model);
  log.add_meta("algorithm", to_string(cfg.algorithm));
  log.add_meta("contour", format_real(s.ctx.grid.contour.a1) + "," + format_real(s.ctx.grid.contour.a2) +
                              "," + format_real(s.ctx.grid.c) + "," + std::to_string(s.ctx.grid.N));
  log.add_meta("profile_rounds", std::to_string(s.profile_rounds));
  log.write(out_path(cfg, "offline_log.csv"), cfg.hash());

  OfflineArtifact art;
  store_config(cfg, art.meta);
  art.meta["algorithm"] = to_string(cfg.algorithm);
  art.grid = s.ctx.grid;
  art.window = s.ctx.window;
  art.sigma_lb = s.ctx.sigma_lb;
  if (cfg.algorithm == Algorithm::LocalGreedy) {
    art.local_bases = off.local.per_node;
    art.local_models = off.local.models;
  } else {
    art.basis = off.basis;
    art.reduced = galerkin_project(s.model, off.basis);
  }
  save_artifact(out_path(cfg, "offline.lmor"), art);
  std::cout << "offline: stored " << off.stored << " snapshots in " << format_real(off.seconds) << " s\n";
  return 0;
}

int cmd_online(const ExperimentConfig& cli) {
  const std::string path = cli.artifact.empty() ? out_path(cli, "offline.lmor") : cli.artifact;
  OfflineArtifact art = load_artifact(path);
  const ExperimentConfig cfg = restore_config(art.meta, cli);
  const DiscretizedModel model = build_model(cfg);

  const std::vector<double> times = cfg.online_t.empty() ? art.window.sample(cfg.time_samples) : cfg.online_t;
  for (double t : times) art.window.check(t);
  std::vector<Parameter> mus = cfg.online_mu;
  if (mus.empty()) mus.push_back(cfg.box.center());
  for (const auto& mu : mus) model.op().check_parameter(mu);

  const bool local = !art.local_bases.empty();
  LocalBases lb;
  if (local) {
    lb.per_node = art.local_bases;
    lb.models = art.local_models;
    for (auto& m : lb.models) m.attach(model);
  } else {
    art.reduced.attach(model);
  }

  CsvTable sol({"case", "t", "index", "value"});
  CsvTable timing(concat(concat({"case"}, mu_columns("mu_", model.param_dim())),
                         {"n_times", "n_r", "reduced_seconds", "lift_seconds", "reduced_ops", "lift_ops"}));
  for (std::size_t m = 0; m < mus.size(); ++m) {
    OnlineCounters cnt;
    Mat u;
    double t_red = 0.0, t_lift = 0.0;
    Index n_r = 0;
    if (local) {
      const auto start = Clock::now();
      u = online_solve_local(lb, art.grid, mus[m], times);
      t_red = seconds_since(start);
      n_r = lb.max_size();
    } else {
      auto start = Clock::now();
      const auto beta = online_coefficients(art.reduced, art.grid, mus[m], &cnt);
      t_red = seconds_since(start);
      start = Clock::now();
      u = lift(art.basis, art.grid, beta, times, &cnt);
      t_lift = seconds_since(start);
      n_r = art.basis.size();
    }
    for (std::size_t k = 0; k < times.size(); ++k)
      for (Index i = 0; i < u.rows(); ++i)
        sol.add_row({static_cast<long long>(m), times[k], static_cast<long long>(i), u(i, static_cast<Index>(k))});
    std::vector<Cell> row{static_cast<long long>(m)};
    append_mu(row, mus[m]);
    row.emplace_back(static_cast<long long>(times.size()));
    row.emplace_back(static_cast<long long>(n_r));
    row.emplace_back(t_red);
    row.emplace_back(t_lift);
    row.emplace_back(static_cast<long long>(cnt.reduced_ops));
    row.emplace_back(static_cast<long long>(cnt.lift_ops));
    timing.add_row(std::move(row));
  }
  sol.write(out_path(cfg, "online_solution.csv"), cfg.hash());
  timing.write(out_path(cfg, "online_timing.csv"), cfg.hash());
  return 0;
}

int cmd_compare(const ExperimentConfig& cfg) {
  const Setup s = prepare(cfg);
  const auto times = s.ctx.window.sample(cfg.time_samples);
  const LaplaceOffline off = run_offline(cfg, s);
  const TruthSet truth = compute_truth(s.model, s.ctx.grid, s.xi, times);

  ClassicalOptions copts;
  copts.stepper = stepper_from_string(cfg.stepper);
  copts.dt = cfg.dt;
  copts.t_end = s.ctx.window.t_end();
  copts.stride = cfg.classical_stride;
  copts.max_size = cfg.classical_max;
  copts.tol_pod = cfg.tol_pod;
  copts.greedy = cfg.model == "black-scholes";
  const ParameterGrid training =
      cfg.classical_training ? ParameterGrid::random(cfg.box, cfg.classical_training, cfg.seed + 7) : s.xi;
  auto start = Clock::now();
  const ClassicalRom classical = build_classical_rom(s.model, training, copts);
  const double classical_seconds = seconds_since(start);
  const TruthSet step_truth = stepper_truth(s.model, s.xi, copts.stepper, copts.dt, times);

  const bool local = cfg.algorithm == Algorithm::LocalGreedy;
  const Index laplace_max = local ? off.local.max_size() : off.basis.size();
  const Index classical_max = classical.basis.cols();
  std::vector<Index> sizes = cfg.nr_list.empty() ? default_sizes(std::max(laplace_max, classical_max)) : cfg.nr_list;

  const ParameterGrid tests = ParameterGrid::random(cfg.box, cfg.test_count, cfg.seed + 1);
  CsvTable table({"n_r", "e_r_laplace", "e_r_classical", "time_laplace", "time_classical", "ratio",
                  "offline_seconds_laplace", "offline_seconds_classical", "stored_laplace",
                  "stored_classical"});
  for (Index k : sizes) {
    std::vector<Cell> row{static_cast<long long>(k)};
    double t_lap = std::nan(""), t_cls = std::nan("");
    if (k <= laplace_max) {
      std::function<Mat(const Parameter&)> solve;
      ReducedBasis basis;
      ReducedModel red;
      LocalBases lb;
      if (local) {
        lb = off.local.truncated(s.model, k);
        solve = [&](const Parameter& mu) { return online_solve_local(lb, s.ctx.grid, mu, times); };
      } else {
        basis = off.basis.truncated(k);
        red = galerkin_project(s.model, basis);
        solve = [&](const Parameter& mu) { return online_solve(red, basis, s.ctx.grid, mu, times); };
      }
      row.emplace_back(reduction_error(truth, s.xi, solve));
      std::vector<double> reps;
      for (int r = 0; r < cfg.reps; ++r) {
        const auto t = Clock::now();
        for (const auto& mu : tests.points) solve(mu);
        reps.push_back(seconds_since(t) / static_cast<double>(tests.size()));
      }
      t_lap = median(reps);
    } else {
      row.emplace_back(std::string());
    }
    if (k <= classical_max) {
      const ClassicalRom rom = truncate_classical(s.model, classical, k);
      auto solve = [&](const Parameter& mu) { return classical_online(rom, s.model, mu, times); };
      row.emplace_back(reduction_error(step_truth, s.xi, solve));
      std::vector<double> reps;
      for (int r = 0; r < cfg.reps; ++r) {
        const auto t = Clock::now();
        for (const auto& mu : tests.points) solve(mu);
        reps.push_back(seconds_since(t) / static_cast<double>(tests.size()));
      }
      t_cls = median(reps);
    } else {
      row.emplace_back(std::string());
    }
    auto cell = [](double v) -> Cell { return std::isnan(v) ? Cell(std::string()) : Cell(v); };
    row.push_back(cell(t_lap));
    row.push_back(cell(t_cls));
    row.push_back(cell(t_cls / t_lap));
    row.emplace_back(off.seconds + s.seconds);
    row.emplace_back(classical_seconds);
    row.emplace_back(static_cast<long long>(off.stored));
    row.emplace_back(static_cast<long long>(classical_max));
    table.add_row(std::move(row));
  }
  table.add_meta("model", cfg.model);
  table.add_meta("algorithm", to_string(cfg.algorithm));
  table.add_meta("stepper", cfg.stepper);
  table.add_meta("reps", std::to_string(cfg.reps));
  table.write(out_path(cfg, "compare.csv"), cfg.hash());
  return 0;
}

int cmd_sigma_lb(const ExperimentConfig& cfg) {
  const DiscretizedModel model = build_model(cfg);
  std::vector<Complex> zs = cfg.sigma_z;
  if (zs.empty()) {
    const QuadratureGrid grid = build_quadrature(cfg, model);
    for (Index j = 0; j < grid.size(); ++j)
      if (grid.xi[j] >= 0.0) zs.push_back(grid.z[j]);
  }
  const Index p = model.param_dim();
  const ParameterGrid audit =
      cfg.sigma_audit ? ParameterGrid::lattice(cfg.box, cfg.sigma_audit_per_dim) : ParameterGrid{};
  CsvTable table(concat(concat(concat({"z_re", "z_im", "sigma_gs"}, mu_columns("argmin_", p)),
                               {"n_ep", "seconds", "sigma_grid"}),
                        mu_columns("grid_argmin_", p)));
  const auto starts = default_starts(cfg.box);
  for (const Complex z : zs) {
    const auto start = Clock::now();
    const SigmaResult r = sigma_lb_optimize(model.op(), z, cfg.box, starts);
    const double secs = seconds_since(start);
    std::vector<Cell> row{z.real(), z.imag(), r.sigma};
    append_mu(row, r.argmin_mu);
    row.emplace_back(static_cast<long long>(r.eigenproblem_count));
    row.emplace_back(secs);
    if (cfg.sigma_audit) {
      Vec vals(static_cast<Index>(audit.size()));
      detail::parallel_for(vals.size(), [&](Index i) {
        vals[i] = shifted_sigma_min(model.op(), z, audit[static_cast<std::size_t>(i)]).sigma;
      });
      Index best = 0;
      row.emplace_back(vals.minCoeff(&best));
      append_mu(row, audit[static_cast<std::size_t>(best)]);
    } else {
      row.emplace_back(std::string());
      for (Index k = 0; k < p; ++k) row.emplace_back(std::string());
    }
    table.add_row(std::move(row));
  }
  table.add_meta("model", cfg.model);
  table.write(out_path(cfg, "sigma_lb.csv"), cfg.hash());
  return 0;
}

int cmd_svd_study(const ExperimentConfig& cfg) {
  const auto mus = linspace(cfg.box.lower[0], cfg.box.upper[0], cfg.svd_mu_count);
  const Index steps = static_cast<Index>(std::llround(cfg.svd_T / cfg.svd_dt));
  std::vector<double> sv_time, sv_laplace;
  if (cfg.svd_kind == "advection") {
    if (cfg.model != "advection") throw ConfigError("svd.kind = advection needs model = advection");
    const DiscretizedModel model = build_model(cfg);
    const QuadratureGrid grid = build_quadrature(cfg, model);
    const Stepper stepper = stepper_from_string(cfg.svd_stepper);
    const Index nt = steps + 1;
    Mat time_snaps(model.dim(), nt * static_cast<Index>(mus.size()));
    CMat lap_snaps(model.dim(), grid.size() * static_cast<Index>(mus.size()));
    for (std::size_t m = 0; m < mus.size(); ++m) {
      const Parameter mu = Vec::Constant(1, mus[m]);
      const auto traj = step_reference(model, mu, stepper, cfg.svd_dt, cfg.svd_T, 1);
      time_snaps.middleCols(static_cast<Index>(m) * nt, nt) = traj.states.leftCols(nt);
      const auto snaps = solve_nodes(model, grid, mu);
      for (Index j = 0; j < grid.size(); ++j)
        lap_snaps.col(static_cast<Index>(m) * grid.size() + j) = snaps[static_cast<std::size_t>(j)].uhat;
    }
    sv_time = singular_values(time_snaps);
    sv_laplace = singular_values(lap_snaps);
  } else {
    const Index n = cfg.model == "advection" ? cfg.n_h : 1000;
    const Vec x = Vec::LinSpaced(n, 1.0 / static_cast<double>(n), 1.0);
    const DiscretizedModel adv = advection(n);
    const QuadratureGrid grid = build_quadrature(cfg, adv);
    std::vector<double> ts;
    for (Index k = 0; k <= steps; ++k) ts.push_back(static_cast<double>(k) * cfg.svd_dt);
    std::vector<Complex> zs(grid.z.data(), grid.z.data() + grid.z.size());
    const auto h = heaviside_snapshot_matrices(mus, ts, zs, x);
    sv_time = singular_values(h.time_domain);
    sv_laplace = singular_values(h.laplace_domain);
  }
  CsvTable table({"index", "sv_time", "sv_time_rel", "sv_laplace", "sv_laplace_rel"});
  const std::size_t rows = std::max(sv_time.size(), sv_laplace.size());
  auto cell = [](const std::vector<double>& v, std::size_t i, bool rel) -> Cell {
    if (i >= v.size()) return std::string();
    return rel ? v[i] / v[0] : v[i];
  };
  for (std::size_t i = 0; i < rows; ++i)
    table.add_row({static_cast<long long>(i + 1), cell(sv_time, i, false), cell(sv_time, i, true),
                   cell(sv_laplace, i, false), cell(sv_laplace, i, true)});
  table.add_meta("svd_kind", cfg.svd_kind);
  table.add_meta("stepper", cfg.svd_stepper);
  table.write(out_path(cfg, "svd_study.csv"), cfg.hash());
  return 0;
}

int run_command(const std::string& name, const ExperimentConfig& cfg) {
  try {
    if (name == "offline") return cmd_offline(cfg);
    if (name == "online") return cmd_online(cfg);
    if (name == "compare") return cmd_compare(cfg);
    if (name == "sigma-lb") return cmd_sigma_lb(cfg);
    if (name == "svd-study") return cmd_svd_study(cfg);
    throw ConfigError("unknown command '" + name + "'");
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const WindowViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lapmor::cli
