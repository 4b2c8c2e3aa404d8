#include "cliquemc/analytics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cliquemc {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

double choose2(double x) { return x * (x - 1.0) / 2.0; }
}  // namespace

double log_choose(double n, double k) {
  if (k < 0 || n < 0 || k > n) return kNegInf;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_expected_census(int n, int k, int q, int r) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("log_expected_census: bad (n,k)");
  if (q < 0 || q > n || r < 0 || r > std::min(q, k))
    throw std::invalid_argument("log_expected_census: require 0 <= r <= min(q,k) <= q <= n");
  return log_choose(k, r) + log_choose(n - k, q - r) + kLn2 * (choose2(r) - choose2(q));
}

MomentTable moment_table(int n, int k, int max_q, int max_r) {
  MomentTable t;
  t.n = n;
  t.k = k;
  t.max_q = max_q;
  t.max_r = max_r;
  t.log_e.assign(static_cast<std::size_t>(max_q + 1) * (max_r + 1), kNegInf);
  for (int q = 0; q <= max_q; ++q)
    for (int r = 0; r <= std::min({max_r, q, k}); ++r)
      t.log_e[static_cast<std::size_t>(q) * (max_r + 1) + r] = log_expected_census(n, k, q, r);
  return t;
}

double asymptotic_exponent(double alpha, double rho, double gamma) {
  return kLn2 * (rho - rho * rho / 2.0 - (1.0 - alpha) * gamma + gamma * gamma / 2.0);
}

GatewayMoment log_gateway_first_moment(int n, int k, int q, int p, int u) {
  if (p > q) throw std::invalid_argument("log_gateway_first_moment: require p <= q");
  const int w = 2 * p - q - u;  // witness subset size
  if (w < 0) return {kNegInf, false};
  std::vector<double> terms;
  for (int r = 0; r <= u; ++r) {
    double t = log_choose(k, r) + log_choose(n - k, p - r) + log_choose(n - p, q - p) +
               log_choose(p - r, w) - kLn2 * (choose2(p) - choose2(r) + (q - p) * w);
    if (t != kNegInf) terms.push_back(t);
  }
  double v = log_sum_exp(terms);
  return {v, v != kNegInf};
}

double bd_stationary_log_ratio(const GibbsWeightContext& ctx, double eta, int n, int p,
                               int q) {
  if (eta <= 0.0 || eta >= 1.0) throw std::invalid_argument("bd_stationary_log_ratio: eta in (0,1)");
  if (p < 0 || p > q) throw std::invalid_argument("bd_stationary_log_ratio: require 0 <= p <= q");
  const int ceiling = static_cast<int>(std::floor((1.0 - eta) * std::log2(static_cast<double>(n))));
  if (q > ceiling)
    throw std::invalid_argument("bd_stationary_log_ratio: q beyond the walk ceiling");
  return (q - p) * std::log(20.0) + std::lgamma(q + 1.0) - std::lgamma(p + 1.0) +
         kLn2 * (choose2(q) - choose2(p)) - (q - p) * std::log(static_cast<double>(n)) +
         ctx.beta * (ctx.h[p] - ctx.h[q]);
}

double st_2d_log_stationary(int n, const TemperatureLadder& ladder,
                            const HamiltonianSpec& h, double eta, int s, int j) {
  if (eta <= 0.0 || eta >= 1.0) throw std::invalid_argument("st_2d_log_stationary: eta in (0,1)");
  if (!is_monotone(h)) throw std::invalid_argument("st_2d_log_stationary: monotone h required");
  const int ceiling = static_cast<int>(std::floor((1.0 - eta) * std::log2(static_cast<double>(n))));
  if (s < 0 || s > ceiling)
    throw std::invalid_argument("st_2d_log_stationary: s beyond the walk ceiling");
  if (j < 0 || j > ladder.m()) throw std::invalid_argument("st_2d_log_stationary: bad temperature");
  return -ladder.log_z_hat[j] + s * std::log(static_cast<double>(n)) - s * std::log(20.0) -
         std::lgamma(s + 1.0) - kLn2 * choose2(s) + ladder.beta[j] * h[s];
}

std::vector<double> st_2d_stationary_table(int n, const TemperatureLadder& ladder,
                                           const HamiltonianSpec& h, double eta) {
  const int ceiling = static_cast<int>(std::floor((1.0 - eta) * std::log2(static_cast<double>(n))));
  const int cols = ladder.m() + 1;
  std::vector<double> logs(static_cast<std::size_t>(ceiling + 1) * cols);
  for (int s = 0; s <= ceiling; ++s)
    for (int j = 0; j < cols; ++j)
      logs[static_cast<std::size_t>(s) * cols + j] = st_2d_log_stationary(n, ladder, h, eta, s, j);
  double z = log_sum_exp(logs);
  for (auto& v : logs) v = std::exp(v - z);
  return logs;
}

}  // namespace cliquemc
