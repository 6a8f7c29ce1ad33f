#include "fracheat/interp.hpp"

#include <algorithm>
#include <cmath>

#include "fracheat/error.hpp"

namespace fracheat::interp {

using zygmund::Flavor;
using zygmund::NormSpec;

void validate(const InterpPairSpec& p) {
  require(p.q0 >= 1.0 && p.q0 < p.q && p.q < p.q1 && std::isfinite(p.q1),
          "interpolation pair needs 1 <= q0 < q < q1 < infinity");
  require(p.kappa > 0.0 && p.kappa < 1.0, "kappa must lie in (0, 1)");
  require(p.alpha >= 0.0, "alpha must be >= 0");
  const double rel = 1.0 / p.q - ((1.0 - p.kappa) / p.q0 + p.kappa / p.q1);
  require(std::abs(rel) <= 1e-12, "exponents violate 1/q = (1 - kappa)/q0 + kappa/q1");
}

InterpPairSpec make_pair(double q0, double q1, double q, double alpha, SpaceFamily family) {
  InterpPairSpec p{q0, q1, q, 0.0, alpha, family};
  p.kappa = (1.0 / q0 - 1.0 / q) / (1.0 / q0 - 1.0 / q1);
  validate(p);
  return p;
}

NormSpec endpoint_norm(const InterpPairSpec& p, int which) {
  const double qi = which == 0 ? p.q0 : p.q1;
  if (p.family == SpaceFamily::plain_lebesgue) return {qi, 0.0, Flavor::strong};
  return {qi, p.alpha * qi / p.q, Flavor::frak};
}

KTable::KTable(const StepProfile& prof, const InterpPairSpec& pair, const KOptions& opts) {
  validate(pair);
  const NormSpec x0 = endpoint_norm(pair, 0), x1 = endpoint_norm(pair, 1);
  x0_full_ = zygmund::norm(prof, x0);
  x1_full_ = zygmund::norm(prof, x1);
  const auto& v = prof.values();
  const std::size_t K = v.size();
  // Number of steps above tau, for tau on a log grid plus both ends.
  std::vector<std::size_t> heads{K, 0};
  if (K > 0) {
    const double lo = v.back(), hi = v.front();
    const int n = std::max(2, opts.tau_points);
    for (int k = 0; k < n; ++k) {
      const double tau = lo * std::pow(hi / lo, double(k) / (n - 1));
      const auto it = std::lower_bound(v.begin(), v.end(), tau, std::greater<>());
      heads.push_back(static_cast<std::size_t>(it - v.begin()));
    }
  }
  std::sort(heads.begin(), heads.end());
  heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
  for (std::size_t k : heads) {
    n0_.push_back(k == 0 ? 0.0 : k == K ? x0_full_ : zygmund::norm(prof.head(k), x0));
    n1_.push_back(k == K ? 0.0 : k == 0 ? x1_full_ : zygmund::norm(prof.tail(k), x1));
  }
}

double KTable::k_upper(double lambda) const {
  require(lambda > 0.0, "K-functional needs lambda > 0");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n0_.size(); ++i) best = std::min(best, n0_[i] + lambda * n1_[i]);
  return best;
}

double k_functional_upper(const StepProfile& f, double lambda, const InterpPairSpec& pair,
                          const KOptions& opts) {
  return KTable(f, pair, opts).k_upper(lambda);
}

double k_functional_upper(const GridFunction& f, double lambda, const InterpPairSpec& pair,
                          const KOptions& opts) {
  return k_functional_upper(rearrange::rearrangement(f), lambda, pair, opts);
}

namespace {

// lambda(s) = s^{1/q0 - 1/q1} over the profile's measure range, plus extra.
std::vector<double> lambda_grid(const StepProfile& f, const InterpPairSpec& p, int n,
                                std::vector<double> extra_s) {
  const double e = 1.0 / p.q0 - 1.0 / p.q1;
  const double s_lo = f.breakpoints()[1] / 4.0, s_hi = f.support_measure() * 4.0;
  std::vector<double> lam;
  for (int k = 0; k < n; ++k)
    lam.push_back(std::pow(s_lo * std::pow(s_hi / s_lo, double(k) / (n - 1)), e));
  for (double s : extra_s)
    if (s > 0.0) lam.push_back(std::pow(s, e));
  return lam;
}

double sup_term(const KTable& table, const std::vector<double>& lambdas, double kappa) {
  double best = 0.0;
  for (double lam : lambdas) best = std::max(best, std::pow(lam, -kappa) * table.k_upper(lam));
  return best;
}

}  // namespace

double interpolation_norm_upper(const StepProfile& f, const InterpPairSpec& pair,
                                const KOptions& opts) {
  validate(pair);
  if (f.empty()) return 0.0;
  const KTable table(f, pair, opts);
  return sup_term(table, lambda_grid(f, pair, opts.lambda_points, {}), pair.kappa);
}

EmbeddingReport interp_embedding_check(const StepProfile& f, const InterpPairSpec& pair,
                                       const KOptions& opts) {
  validate(pair);
  require(pair.family == SpaceFamily::frak_log, "embedding check needs the frak_log family");
  EmbeddingReport rep;
  if (f.empty()) {
    rep.holds = true;
    return rep;
  }
  const auto lhs = zygmund::sup_norm_with_argmax(f, {pair.q, pair.alpha, Flavor::weak});
  rep.lhs = lhs.value;
  const KTable table(f, pair, opts);
  rep.sup_term = sup_term(table, lambda_grid(f, pair, opts.lambda_points, {lhs.s}), pair.kappa);
  rep.rhs = std::pow(2.0, 1.0 / pair.q0) * rep.sup_term;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-9);
  return rep;
}

EmbeddingReport interp_embedding_check(const GridFunction& f, const InterpPairSpec& pair,
                                       const KOptions& opts) {
  return interp_embedding_check(rearrange::rearrangement(f), pair, opts);
}

}  // namespace fracheat::interp
