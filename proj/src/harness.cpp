#include "fracheat/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <variant>

#include "fracheat/acceptance.hpp"
#include "fracheat/error.hpp"
#include "fracheat/interp.hpp"
#include "fracheat/phi.hpp"
#include "fracheat/semigroup.hpp"
#include "fracheat/solver.hpp"
#include "fracheat/zygmund.hpp"

namespace fracheat::harness {

namespace {

namespace fs = std::filesystem;
using gridfn::GridFunction;
using zygmund::Flavor;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct KindName {
  Kind kind;
  const char* name;
};
constexpr KindName kKinds[] = {
    {Kind::norms, "norms"},           {Kind::semigroup_rates, "semigroup-rates"},
    {Kind::kernel_check, "kernel-check"}, {Kind::interp_check, "interp-check"},
    {Kind::hardy_check, "hardy-check"}, {Kind::solve, "solve"},
    {Kind::threshold, "threshold"},   {Kind::acceptance, "acceptance"},
};

// ---- parameter access -----------------------------------------------------

// Numbers, or the strings "inf" / "-inf" (JSON has no infinity).
double as_number(const Json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    if (s == "-inf") return -kInf;
  }
  fail(ErrorCode::invalid_argument, "parameter '" + key + "' must be a number");
}

double num(const Json& p, const std::string& key, double def) {
  return p.contains(key) ? as_number(p.at(key), key) : def;
}

int integer(const Json& p, const std::string& key, int def) {
  if (!p.contains(key)) return def;
  const auto& v = p.at(key);
  require(v.is_number_integer(), "parameter '" + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const Json& p, const std::string& key, const std::string& def) {
  if (!p.contains(key)) return def;
  require(p.at(key).is_string(), "parameter '" + key + "' must be a string");
  return p.at(key).get<std::string>();
}

void allow_keys(const Json& p, std::initializer_list<const char*> keys, const std::string& where) {
  require(p.is_object(), where + " must be a JSON object");
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : p.items())
    require(ok.count(k) > 0, "unknown parameter '" + k + "' in " + where);
}

constexpr const char* kSolveKeys[] = {
    "theta", "p", "T", "n_time", "grading", "epsilon", "max_iter", "divergence_cap",
    "tolerance", "regime", "max_leakage", "center_stride"};

solver::SolveConfig solve_config(const Json& p) {
  solver::SolveConfig c;
  c.theta = num(p, "theta", c.theta);
  c.p = num(p, "p", c.p);
  c.T = num(p, "T", c.T);
  c.n_time = integer(p, "n_time", c.n_time);
  c.grading = num(p, "grading", c.grading);
  c.epsilon = num(p, "epsilon", c.epsilon);
  c.max_iter = integer(p, "max_iter", c.max_iter);
  c.divergence_cap = num(p, "divergence_cap", c.divergence_cap);
  c.tolerance = num(p, "tolerance", c.tolerance);
  c.regime = solver::regime_from_string(text(p, "regime", solver::to_string(c.regime)));
  c.max_leakage = num(p, "max_leakage", c.max_leakage);
  c.center_stride = integer(p, "center_stride", c.center_stride);
  return c;
}

GridFunction profile_function(const ExperimentConfig& cfg, const Json& prof) {
  require(prof.is_object(), "'profile' must be a JSON object");
  if (text(prof, "kind", "") == "delta") {
    // unit mass in the cell at the origin
    std::vector<double> v(cfg.grid.size(), 0.0);
    std::size_t idx = 0;
    for (int d = 0; d < cfg.grid.dim; ++d)
      idx = idx * cfg.grid.points_per_axis + cfg.grid.points_per_axis / 2;
    v[idx] = num(prof, "scale", 1.0) / cfg.grid.cell_measure();
    return GridFunction(cfg.grid, std::move(v), "delta");
  }
  GridFunction f = gridfn::sample_profile(cfg.grid, profile_from_json(prof, cfg.grid.dim));
  if (prof.contains("ball_radius"))
    f = gridfn::restrict_to_ball(f, {0.0, 0.0, 0.0}, num(prof, "ball_radius", kInf));
  return f;
}

// ---- CSV ------------------------------------------------------------------

using Cell = std::variant<double, long long, std::string>;

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string format_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return quote(std::get<std::string>(c));
}

// Every row starts with the full parameter tuple of the experiment.
class Csv {
 public:
  Csv(const ExperimentConfig& cfg, const std::string& table, std::vector<std::string> columns,
      std::vector<std::string>& files)
      : path_(fs::path(cfg.output_dir) / (table + ".csv")) {
    out_.open(path_, std::ios::binary | std::ios::trunc);
    require(out_.good(), "cannot write " + path_.string(), ErrorCode::io_error);
    files.push_back(path_.string());
    prefix_ = {cfg.name,
               to_string(cfg.kind),
               (long long)cfg.grid.dim,
               cfg.grid.half_width,
               (long long)cfg.grid.points_per_axis,
               (long long)cfg.seed,
               cfg.params.dump()};
    out_ << "# schema=fracheat-v1\n";
    std::vector<std::string> head = {"experiment", "kind", "dim", "L", "M", "seed", "params"};
    head.insert(head.end(), columns.begin(), columns.end());
    for (std::size_t i = 0; i < head.size(); ++i) out_ << (i ? "," : "") << head[i];
    out_ << "\n";
    width_ = columns.size();
  }

  void row(const std::vector<Cell>& cells) {
    require(cells.size() == width_, "CSV row width mismatch", ErrorCode::internal);
    bool first = true;
    for (const auto& c : prefix_) {
      out_ << (first ? "" : ",") << format_cell(c);
      first = false;
    }
    for (const auto& c : cells) out_ << "," << format_cell(c);
    out_ << "\n";
  }

 private:
  fs::path path_;
  std::ofstream out_;
  std::vector<Cell> prefix_;
  std::size_t width_ = 0;
};

// JSON cannot hold inf/nan; those become strings.
Json jnum(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

struct Ctx {
  const ExperimentConfig& cfg;
  Json results = Json::object();
  bool passed = true;
  std::vector<std::string> files;
};

// ---- kinds ----------------------------------------------------------------

void run_norms(Ctx& c) {
  const Json& p = c.cfg.params;
  allow_keys(p, {"profile", "norms", "ordering"}, "norms parameters");
  require(p.contains("profile"), "norms needs a 'profile'");
  const GridFunction f = profile_function(c.cfg, p.at("profile"));
  Csv csv(c.cfg, "norms", {"flavor", "q", "alpha", "rho", "value", "global"}, c.files);
  Json list = Json::array();
  for (const auto& n : p.value("norms", Json::array())) {
    allow_keys(n, {"q", "alpha", "flavor", "rho"}, "norm entry");
    zygmund::NormSpec spec{num(n, "q", 1.0), num(n, "alpha", 0.0),
                           zygmund::flavor_from_string(text(n, "flavor", "strong")),
                           num(n, "rho", kInf)};
    double value = 0.0;
    bool global = true;
    if (std::isinf(spec.rho)) {
      value = zygmund::norm(f, spec);
    } else {
      const auto rep = zygmund::ul_norm(f, spec);
      value = rep.value;
      global = rep.global;
    }
    csv.row({zygmund::to_string(spec.flavor), spec.q, spec.alpha, spec.rho, value,
             (long long)global});
    list.push_back({{"flavor", zygmund::to_string(spec.flavor)},
                    {"q", jnum(spec.q)},
                    {"alpha", spec.alpha},
                    {"rho", jnum(spec.rho)},
                    {"value", jnum(value)}});
  }
  c.results["norms"] = list;
  Json order = Json::array();
  for (const auto& o : p.value("ordering", Json::array())) {
    allow_keys(o, {"q", "alpha"}, "ordering entry");
    const auto rep = zygmund::norm_ordering_report(f, num(o, "q", 1.0), num(o, "alpha", 0.0));
    order.push_back({{"q", num(o, "q", 1.0)},
                     {"alpha", num(o, "alpha", 0.0)},
                     {"strong", jnum(rep.strong)},
                     {"frak", jnum(rep.frak)},
                     {"weak", jnum(rep.weak)},
                     {"holds", rep.holds}});
    c.passed = c.passed && rep.holds;
  }
  c.results["ordering"] = order;
}

void run_rates(Ctx& c) {
  const Json& p = c.cfg.params;
  allow_keys(p,
             {"source", "theta", "r", "alpha", "source_flavor", "q", "beta", "flavor", "t_min",
              "t_max", "n_t", "max_leakage", "tolerance", "log_tolerance"},
             "semigroup-rates parameters");
  require(p.contains("source"), "semigroup-rates needs a 'source' profile");
  const GridFunction f = profile_function(c.cfg, p.at("source"));
  semigroup::RateProbeSpec spec;
  spec.r = num(p, "r", 1.0);
  spec.alpha = num(p, "alpha", 0.0);
  spec.source_flavor = zygmund::flavor_from_string(text(p, "source_flavor", "frak"));
  spec.q = num(p, "q", 2.0);
  spec.beta = num(p, "beta", 0.0);
  spec.flavor = zygmund::flavor_from_string(text(p, "flavor", "strong"));
  const double theta = num(p, "theta", 1.0);
  const auto times = semigroup::geometric_times(num(p, "t_min", 0.5), num(p, "t_max", 5.0),
                                                integer(p, "n_t", 9));
  const auto res = semigroup::smoothing_rate_probe(f, theta, spec, times,
                                                   {num(p, "max_leakage", 1e-8)});
  Csv csv(c.cfg, "rates", {"t", "norm"}, c.files);
  for (const auto& s : res.samples) csv.row({s.t, s.y});
  const double tol = num(p, "tolerance", 0.05), log_tol = num(p, "log_tolerance", 0.25);
  bool ok = std::abs(res.fit.power_exponent - res.predicted_a) <= tol;
  if (res.fit.with_log) ok = ok && std::abs(res.fit.log_exponent - res.predicted_b) <= log_tol;
  c.passed = ok;
  c.results = {{"power_exponent", res.fit.power_exponent},
               {"log_exponent", res.fit.log_exponent},
               {"intercept", res.fit.intercept},
               {"residual", res.fit.residual},
               {"with_log", res.fit.with_log},
               {"predicted_a", res.predicted_a},
               {"predicted_b", res.predicted_b},
               {"residual_flagged", res.residual_flagged},
               {"within_tolerance", ok}};
}

void run_kernel(Ctx& c) {
  const Json& p = c.cfg.params;
  allow_keys(p, {"theta", "times", "max_leakage", "stability"}, "kernel-check parameters");
  const double theta = num(p, "theta", 1.0);
  std::vector<double> times;
  for (const auto& t : p.value("times", Json::array({1.0}))) times.push_back(as_number(t, "times"));
  require(!times.empty(), "kernel-check needs at least one time");
  Csv csv(c.cfg, "kernel", {"t", "c_lower", "c_upper", "min_kernel"}, c.files);
  double lo_min = kInf, lo_max = 0.0, up_min = kInf, up_max = 0.0;
  for (double t : times) {
    const auto rep =
        semigroup::kernel_bound_fit({theta, t}, c.cfg.grid, {num(p, "max_leakage", 1e-8)});
    csv.row({t, rep.c_lower, rep.c_upper, rep.min_kernel});
    lo_min = std::min(lo_min, rep.c_lower);
    lo_max = std::max(lo_max, rep.c_lower);
    up_min = std::min(up_min, rep.c_upper);
    up_max = std::max(up_max, rep.c_upper);
  }
  const double stability = num(p, "stability", 1.2);
  c.passed = lo_min > 0.0 && std::isfinite(up_max) && lo_max <= stability * lo_min &&
             up_max <= stability * up_min;
  c.results = {{"c_lower_min", jnum(lo_min)},
               {"c_lower_max", jnum(lo_max)},
               {"c_upper_min", jnum(up_min)},
               {"c_upper_max", jnum(up_max)}};
}

rearrange::StepProfile random_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = 1 + static_cast<int>(rng() % 40);
  std::vector<double> bp{0.0}, vals;
  double v = std::pow(10.0, -1.0 + 3.0 * u(rng));
  for (int i = 0; i < k; ++i) {
    bp.push_back(bp.back() + std::pow(10.0, -4.0 + 5.0 * u(rng)));
    vals.push_back(v);
    v *= 0.05 + 0.9 * u(rng);
  }
  return rearrange::StepProfile(bp, vals, bp.back() * (1.0 + 2.0 * u(rng)));
}

void run_interp(Ctx& c) {
  const Json& p = c.cfg.params;
  allow_keys(p, {"q0", "q1", "q", "alpha", "family", "count", "profile", "factor"},
             "interp-check parameters");
  const std::string fam = text(p, "family", "frak_log");
  require(fam == "frak_log" || fam == "plain_lebesgue",
          "family must be 'frak_log' or 'plain_lebesgue'");
  const auto family = fam == "frak_log" ? interp::SpaceFamily::frak_log
                                        : interp::SpaceFamily::plain_lebesgue;
  const auto pair = interp::make_pair(num(p, "q0", 1.5), num(p, "q1", 3.0), num(p, "q", 2.0),
                                      num(p, "alpha", 0.0), family);
  std::mt19937_64 rng(c.cfg.seed);
  std::vector<rearrange::StepProfile> cases;
  for (int i = 0; i < integer(p, "count", 100); ++i) cases.push_back(random_profile(rng));
  if (p.contains("profile"))
    cases.push_back(rearrange::rearrangement(profile_function(c.cfg, p.at("profile"))));

  Csv csv(c.cfg, "interp", {"case", "lhs", "rhs", "holds"}, c.files);
  const double factor = num(p, "factor", 4.0);
  int failures = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    double lhs, rhs;
    bool holds;
    if (family == interp::SpaceFamily::frak_log) {
      const auto rep = interp::interp_embedding_check(cases[i], pair);
      lhs = rep.lhs;
      rhs = rep.rhs;
      holds = rep.holds;
    } else {
      // two-sided equivalence with the weak Lebesgue norm
      lhs = zygmund::norm(cases[i], {pair.q, 0.0, Flavor::weak});
      rhs = interp::interpolation_norm_upper(cases[i], pair);
      holds = rhs <= factor * lhs && lhs <= factor * rhs;
    }
    csv.row({(long long)i, lhs, rhs, (long long)holds});
    failures += !holds;
    if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
  }
  c.passed = failures == 0;
  c.results = {{"cases", cases.size()},
               {"failures", failures},
               {"kappa", pair.kappa},
               {"max_lhs_over_rhs", worst}};
}

std::function<double(double)> hardy_weight(const Json& w, const std::string& name) {
  allow_keys(w, {"power", "log"}, "Hardy weight " + name);
  const double a = num(w, "power", 0.0), b = num(w, "log", 0.0);
  return [a, b](double t) { return std::pow(t, a) * std::pow(zygmund::phi_recip(t), b); };
}

void run_hardy(Ctx& c) {
  const Json& p = c.cfg.params;
  allow_keys(p, {"direction", "a", "b", "q", "U", "V", "cells", "count"},
             "hardy-check parameters");
  const std::string dir = text(p, "direction", "lower");
  require(dir == "lower" || dir == "upper", "direction must be 'lower' or 'upper'");
  require(p.contains("U") && p.contains("V"), "hardy-check needs weights 'U' and 'V'");
  interp::HardyWeights w{dir == "lower" ? interp::HardyDirection::lower_limit
                                        : interp::HardyDirection::upper_limit,
                         num(p, "a", 0.0),
                         num(p, "b", kInf),
                         hardy_weight(p.at("U"), "U"),
                         hardy_weight(p.at("V"), "V"),
                         num(p, "q", 2.0)};
  const auto grid = interp::HardyGrid::graded(w.a, w.b, integer(p, "cells", 240));
  std::mt19937_64 rng(c.cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Csv csv(c.cfg, "hardy", {"case", "lhs", "rhs", "B", "B_refined", "verdict"}, c.files);
  int failures = 0;
  double B = 0.0;
  for (int i = 0; i < integer(p, "count", 100); ++i) {
    std::vector<double> f(grid.cells());
    for (auto& x : f) x = u(rng) < 0.3 ? 0.0 : std::exp(12.0 * u(rng) - 6.0);
    const auto rep = interp::hardy_check(w, grid, f);
    const char* verdict = rep.verdict == interp::HardyVerdict::ok          ? "ok"
                          : rep.verdict == interp::HardyVerdict::violated ? "violated"
                                                                           : "unverifiable";
    csv.row({(long long)i, rep.lhs, rep.rhs, rep.B, rep.B_refined, std::string(verdict)});
    failures += !rep.bound_ok;
    B = rep.B;
  }
  c.passed = failures == 0;
  c.results = {{"B", jnum(B)}, {"failures", failures}};
}

Json iteration_json(const solver::IterationReport& r) {
  return {{"verdict", solver::to_string(r.verdict)},
          {"iterations", r.iterations},
          {"final_ratio", r.ratios.empty() ? Json(nullptr) : jnum(r.ratios.back())},
          {"gauge", jnum(r.gauge)},
          {"within_epsilon", r.within_epsilon},
          {"source_norm", jnum(r.source_norm)},
          {"solution_norm", jnum(r.solution_norm)},
          {"bound_constant", jnum(r.bound_constant)},
          {"global_metric", r.global_metric},
          {"diagnostic", r.diagnostic}};
}

void run_solve(Ctx& c) {
  const Json& p = c.cfg.params;
  std::vector<const char*> keys(std::begin(kSolveKeys), std::end(kSolveKeys));
  keys.insert(keys.end(), {"profile", "lambda", "expect"});
  for (const auto& [k, v] : p.items())
    require(std::find(keys.begin(), keys.end(), k) != keys.end(),
            "unknown parameter '" + k + "' in solve parameters");
  require(p.contains("profile"), "solve needs a 'profile'");
  const auto cfg = solve_config(p);
  const GridFunction mu = num(p, "lambda", 1.0) * profile_function(c.cfg, p.at("profile"));
  const auto res = solver::picard_iterate(mu, cfg);
  const auto& r = res.report;
  Csv csv(c.cfg, "iterations", {"k", "distance", "ratio"}, c.files);
  for (std::size_t k = 0; k < r.distances.size(); ++k)
    csv.row({(long long)(k + 1), r.distances[k], k == 0 ? std::numeric_limits<double>::quiet_NaN() : r.ratios[k - 1]});
  c.results = iteration_json(r);
  if (p.contains("expect")) c.passed = text(p, "expect", "") == solver::to_string(r.verdict);
}

void run_threshold(Ctx& c) {
  const Json& p = c.cfg.params;
  std::vector<const char*> keys(std::begin(kSolveKeys), std::end(kSolveKeys));
  keys.insert(keys.end(), {"profile", "lambda_lo", "lambda_hi", "max_widen", "sweep"});
  for (const auto& [k, v] : p.items())
    require(std::find(keys.begin(), keys.end(), k) != keys.end(),
            "unknown parameter '" + k + "' in threshold parameters");
  require(p.contains("profile"), "threshold needs a 'profile'");
  const auto cfg = solve_config(p);
  const GridFunction mu = profile_function(c.cfg, p.at("profile"));
  const auto thr = solver::threshold_bisect(mu, cfg, num(p, "lambda_lo", 0.25),
                                            num(p, "lambda_hi", 2.0), integer(p, "max_widen", 8));
  Csv csv(c.cfg, "threshold", {"phase", "lambda", "verdict"}, c.files);
  for (std::size_t i = 0; i < thr.lambdas.size(); ++i)
    csv.row({std::string("bisect"), thr.lambdas[i], std::string(solver::to_string(thr.verdicts[i]))});
  c.results = {{"lambda_lo", jnum(thr.lambda_lo)},
               {"lambda_hi", jnum(thr.lambda_hi)},
               {"evaluations", thr.evaluations}};
  c.passed = thr.lambda_lo > 0.0;
  if (p.contains("sweep")) {
    std::vector<double> lambdas;
    for (const auto& l : p.at("sweep")) lambdas.push_back(as_number(l, "sweep"));
    const auto sw = solver::verdict_sweep(mu, cfg, lambdas);
    for (std::size_t i = 0; i < sw.lambdas.size(); ++i)
      csv.row({std::string("sweep"), sw.lambdas[i], std::string(solver::to_string(sw.verdicts[i]))});
    c.results["monotone"] = sw.monotone;
    c.passed = c.passed && sw.monotone;
  }
}

void run_acceptance(Ctx& c) {
  const Json& p = c.cfg.params;
  allow_keys(p, {"criteria"}, "acceptance parameters");
  std::vector<int> ids;
  if (p.contains("criteria")) {
    for (const auto& v : p.at("criteria")) {
      require(v.is_number_integer(), "criteria must be integers");
      ids.push_back(v.get<int>());
    }
  } else {
    for (int i = 1; i <= acceptance::kCriteria; ++i) ids.push_back(i);
  }
  Csv csv(c.cfg, "acceptance", {"id", "title", "status", "seconds", "detail"}, c.files);
  Json items = Json::array();
  for (int id : ids) {
    const auto r = acceptance::run_criterion(id, c.cfg.seed);
    const char* status = !r.applicable ? "n/a" : (r.passed ? "pass" : "fail");
    csv.row({(long long)id, r.title, std::string(status), r.seconds, r.detail});
    Json values = Json::object();
    for (const auto& [k, v] : r.values) values[k] = jnum(v);
    items.push_back({{"id", id},
                     {"title", r.title},
                     {"status", status},
                     {"passed", r.passed},
                     {"detail", r.detail},
                     {"values", values}});
    c.passed = c.passed && r.passed;
  }
  c.results["criteria"] = items;
}

}  // namespace

const char* to_string(Kind k) {
  for (const auto& e : kKinds)
    if (e.kind == k) return e.name;
  return "unknown";
}

Kind kind_from_string(const std::string& name) {
  for (const auto& e : kKinds)
    if (name == e.name) return e.kind;
  fail(ErrorCode::invalid_argument, "unknown experiment kind '" + name + "'");
}

gridfn::SingularProfileSpec profile_from_json(const Json& j, int dim) {
  allow_keys(j, {"kind", "theta", "p", "scale", "exponent", "support_radius", "ball_radius"},
             "profile");
  using gridfn::ProfileKind;
  const std::string kind = text(j, "kind", "constant");
  gridfn::SingularProfileSpec s;
  if (kind == "critical") s.kind = ProfileKind::critical;
  else if (kind == "supercritical") s.kind = ProfileKind::supercritical;
  else if (kind == "power") s.kind = ProfileKind::power;
  else if (kind == "indicator") s.kind = ProfileKind::indicator;
  else if (kind == "constant") s.kind = ProfileKind::constant;
  else fail(ErrorCode::invalid_argument, "unknown profile kind '" + kind + "'");
  s.theta = num(j, "theta", 1.0);
  // p defaults to the critical exponent for the critical profile
  const double pstar = dim > s.theta ? dim / (dim - s.theta) : 2.0;
  s.p = num(j, "p", s.kind == ProfileKind::critical ? pstar : 2.0);
  s.scale = num(j, "scale", 1.0);
  s.exponent = num(j, "exponent", 0.0);
  s.support_radius = num(j, "support_radius", kInf);
  gridfn::validate(s, dim);
  return s;
}

ExperimentConfig parse_config(const Json& doc) {
  allow_keys(doc, {"name", "kind", "grid", "params", "seed", "output_dir"}, "configuration");
  ExperimentConfig cfg;
  require(doc.contains("kind"), "configuration needs a 'kind'");
  cfg.kind = kind_from_string(text(doc, "kind", ""));
  cfg.name = text(doc, "name", to_string(cfg.kind));
  if (doc.contains("grid")) {
    const Json& g = doc.at("grid");
    allow_keys(g, {"dim", "half_width", "points_per_axis"}, "grid");
    cfg.grid = gridfn::make_grid(integer(g, "dim", cfg.grid.dim),
                                 num(g, "half_width", cfg.grid.half_width),
                                 integer(g, "points_per_axis", cfg.grid.points_per_axis));
  }
  if (doc.contains("params")) {
    require(doc.at("params").is_object(), "'params' must be a JSON object");
    cfg.params = doc.at("params");
  }
  if (doc.contains("seed")) {
    require(doc.at("seed").is_number_unsigned() || doc.at("seed").is_number_integer(),
            "'seed' must be a non-negative integer");
    require(doc.at("seed").get<long long>() >= 0, "'seed' must be a non-negative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  cfg.output_dir = text(doc, "output_dir", cfg.output_dir);
  return cfg;
}

RunOutcome run(const ExperimentConfig& cfg) {
  RunOutcome out;
  Ctx c{cfg, Json::object(), true, {}};
  try {
    fs::create_directories(cfg.output_dir);
    switch (cfg.kind) {
      case Kind::norms: run_norms(c); break;
      case Kind::semigroup_rates: run_rates(c); break;
      case Kind::kernel_check: run_kernel(c); break;
      case Kind::interp_check: run_interp(c); break;
      case Kind::hardy_check: run_hardy(c); break;
      case Kind::solve: run_solve(c); break;
      case Kind::threshold: run_threshold(c); break;
      case Kind::acceptance: run_acceptance(c); break;
    }
  } catch (const Error& e) {
    out.exit_code = 1;
    out.message = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 1;
    out.message = std::string("error: ") + e.what();
  }
  out.files = c.files;
  if (out.exit_code == 0) {
    out.exit_code = c.passed ? 0 : 2;
    out.message = c.passed ? "ok" : "assertion failure";
  }
  out.summary = {{"name", cfg.name},
                 {"kind", to_string(cfg.kind)},
                 {"grid",
                  {{"dim", cfg.grid.dim},
                   {"half_width", cfg.grid.half_width},
                   {"points_per_axis", cfg.grid.points_per_axis}}},
                 {"seed", cfg.seed},
                 {"params", cfg.params},
                 {"exit_code", out.exit_code},
                 {"passed", out.exit_code == 0},
                 {"message", out.message},
                 {"results", c.results}};
  if (out.exit_code != 1) {
    const fs::path path = fs::path(cfg.output_dir) / "summary.json";
    std::ofstream js(path, std::ios::binary | std::ios::trunc);
    if (js.good()) {
      js << out.summary.dump(2) << "\n";
      out.files.push_back(path.string());
    }
  }
  out.summary["files"] = out.files;
  return out;
}

RunOutcome run_document(const std::string& config_json, const std::string& overrides_json) {
  try {
    Json doc = config_json.empty() ? Json::object() : Json::parse(config_json);
    if (!overrides_json.empty()) doc.merge_patch(Json::parse(overrides_json));
    return run(parse_config(doc));
  } catch (const std::exception& e) {
    RunOutcome out;
    out.exit_code = 1;
    out.message = e.what();
    out.summary = {{"exit_code", 1}, {"passed", false}, {"message", out.message}};
    return out;
  }
}

}  // namespace fracheat::harness
