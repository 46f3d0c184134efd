#include "kolmonet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kolmonet/errors.hpp"

namespace kolmonet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog10E = std::log10(std::numbers::e);
const double kLog10Two = std::log10(2.0);

double lg(double x) { return std::log10(x); }

// log10(10^a + 10^b), tolerating -inf operands.
double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log10(1.0 + std::pow(10.0, lo - hi));
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

struct McLpLogs {
  double big_c, c1, c2, c_final;
};

McLpLogs mc_lp_logs(const RegularityParams& P) {
  P.validate();
  const double k = P.kappa, T = P.T, eta = P.eta, p = P.p;
  const double iota = std::max(k, 1.0);
  const double tmax = std::max(T, 1.0);
  const double root = std::max(1.0, std::sqrt(2.0 * std::max(1.0, 2.0 * k - 1.0) * k));

  McLpLogs L{};
  const double inner_c = k * T + std::max(1.0, std::sqrt(2.0 * (p * iota - 1.0) * k)) * std::sqrt(T);
  L.big_c = k * k * T * kLog10E + std::max(0.0, k - 1.0) * kLog10Two +
            log_add(lg(eta), k * lg(inner_c));

  const double e = k + iota - 1.0;
  const double bracket =
      log_add(log_add(0.0, lg(5.0 * eta) + e * kLog10Two),
              lg(5.0) + (k + iota) * lg(4.0 * iota) + e * kLog10Two);
  L.c1 = 2.0 * lg(iota) + iota * kLog10Two + lg(k + 1.0) + 2.0 * iota * lg(root) +
         (3.0 * iota * iota + 0.5) * T * kLog10E + (k + iota + 1.5) * lg(tmax) +
         lg(std::max(2.0 * k * (k + 1.0), 1.0)) + bracket;

  L.c2 = -0.5 * kLog10Two + 1.5 * lg(k) + k * k * T * kLog10E + iota * kLog10Two +
         (k + 0.5) * lg(tmax) + log_add(lg(eta + 1.0), k * lg(k + root));

  const double alt = lg(8.0 * k * std::sqrt(p - 1.0)) + log_add(0.0, L.big_c);
  L.c_final = std::max(log_add(L.c1, L.c2), alt);
  return L;
}

double dnn_c1_log(const RegularityParams& P) {
  const double k = P.kappa;
  const double base = 2.0 * P.p * std::max(P.eta, k) * std::max(P.T, 1.0) * std::max(k, 1.0);
  return (2.0 * k + 3.0) * (lg(base) + lg(1.0 + std::sqrt(2.0 * k))) + lg(k) +
         (2.0 * k + 3.0) * k * P.T * kLog10E + (2.0 * k + 4.0) * kLog10Two + k * lg(3.0);
}

double dnn_c2_log(const RegularityParams& P) {
  const double k = P.kappa;
  return 57.0 * kLog10Two + 8.0 * lg(std::max(k, 1.0)) +
         8.0 * lg(std::max(std::pow(P.T, -k / 2.0), 1.0));
}

double exp_n(const RegularityParams& P) {
  const double k = P.kappa;
  return k * (k + 4.0) + std::max(P.eta, k * (2.0 * k + 1.0));
}
double exp_m(const RegularityParams& P) {
  const double k = P.kappa;
  return k + std::max(P.eta, k * k);
}
double exp_delta(const RegularityParams& P) {
  const double k = P.kappa;
  return (2.0 * k + 3.0) * std::max(P.eta, k) + k * k + (7.0 * k + 1.0) / 2.0;
}

// log10 of d^a / sqrt(n); -inf when n is infinite.
double term_log(double a, std::size_t d, double n) {
  if (std::isinf(n)) return -kInf;
  return a * lg(static_cast<double>(d)) - 0.5 * lg(n);
}

double mass_log(double mass, double p) { return lg(std::max(1.0, mass)) / p; }

}  // namespace

void RegularityParams::validate() const {
  require(T > 0.0, "T must be positive");
  require(kappa > 0.0, "kappa must be positive");
  require(eta >= 1.0, "eta must be at least 1");
  require(p >= 2.0, "p must be at least 2");
}

void Budget::validate() const {
  require(N >= 1, "budget needs N >= 1");
  require(M >= 1, "budget needs M >= 1");
  require(delta > 0.0 && delta <= 1.0, "budget needs delta in (0, 1]");
}

double Magnitude::value() const {
  if (log10 > std::log10(std::numeric_limits<double>::max())) return kInf;
  return std::pow(10.0, log10);
}

Magnitude Magnitude::of(double v) { return Magnitude{std::log10(v)}; }

double gaussian_moment_bound(double p, double cov_trace) {
  require(cov_trace >= 0.0, "covariance trace must be nonnegative");
  return std::sqrt(std::max(1.0, p - 1.0) * cov_trace);
}

double apriori_sde_bound(double x_norm, double C, double c, double T, double beta_sup) {
  return (x_norm + C * T + beta_sup) * std::exp(c * T);
}

double varpi(double q, double trace_bstar_b) {
  require(trace_bstar_b >= 0.0, "trace must be nonnegative");
  return std::max(1.0, std::sqrt(std::max(1.0, q - 1.0) * trace_bstar_b));
}

double euler_moment_bound(double q, double x_norm, double C, double c, double T,
                          double trace_bbstar) {
  return (x_norm + C * T + std::sqrt(std::max(1.0, q - 1.0) * T * trace_bbstar)) *
         std::exp(c * T);
}

double interp_error_bound(double p, double h, double trace_bbstar) {
  require(h >= 0.0 && trace_bbstar >= 0.0, "step and trace must be nonnegative");
  return 0.5 * std::sqrt(std::max(1.0, p - 1.0) * h * trace_bbstar);
}

double weak_error_bound(const WeakErrorParams& w, double xi_norm, double f1_at_0_norm,
                        double h) {
  require(w.p >= 2.0, "weak error bound needs p >= 2");
  require(w.q > 1.0 && w.q <= 2.0, "weak error bound needs q in (1, 2]");
  require(std::abs(1.0 / w.p + 1.0 / w.q - 1.0) <= 1e-12, "q must be conjugate to p");
  require(h >= 0.0, "step must be nonnegative");
  require(w.T > 0.0, "T must be positive");

  const double s0 = w.vs0, s1 = w.vs1, s2 = w.vs2, ell = w.ell;
  const double m1 = std::max(s1, 1.0);
  const double pert = w.eps2 * (1.0 + std::pow(xi_norm, s2));
  const double lead = pert + w.eps0 + w.eps1 + h + std::sqrt(h);
  if (lead == 0.0) return 0.0;

  const double rate = std::max(s0, 1.0) * w.L1 + 1.0 - 1.0 / w.p +
                      ell * std::max(w.L1, w.c) + m1 * w.c;
  const double vp = varpi(std::max({s0, ell * w.q, w.p * s1, w.p}), w.trace_bstar_b);
  const double power = std::max(s0, ell + m1);
  const double tpow = std::max(s0, ell + m1 + 1.0 / w.p);
  const double lip = std::max(w.L0, 1.0) * std::max(w.L1, 1.0) * std::pow(2.0, std::max(ell - 1.0, 0.0));
  const double inner = xi_norm + pert + 2.0 * std::max({f1_at_0_norm, w.C, 1.0});
  const double tail = std::max(w.C, 1.0) + 5.0 * std::max({w.C, w.c, 1.0}) * std::pow(inner, power);
  return lead * std::exp(rate * w.T) * std::pow(vp, power) *
         std::pow(std::max(w.T, 1.0), tpow) * lip * tail;
}

McLpConstants mc_lp_constants(const RegularityParams& params) {
  const McLpLogs L = mc_lp_logs(params);
  McLpConstants c{Magnitude{L.big_c}.value(), Magnitude{L.c1}.value(), Magnitude{L.c2}.value(),
                  Magnitude{L.c_final}.value()};
  // Redo the final maximum on the values so it holds exactly in floating point.
  if (std::isfinite(c.c_final)) {
    const double alt = 8.0 * params.kappa * (1.0 + c.big_c) * std::sqrt(params.p - 1.0);
    c.c_final = std::max(c.c1 + c.c2, alt);
  }
  return c;
}

Magnitude mc_lp_error_bound_log(const RegularityParams& params, std::size_t d, double N,
                                double M, double mass) {
  require(d >= 1 && N >= 1.0 && M >= 1.0, "need d, N, M >= 1");
  const McLpLogs L = mc_lp_logs(params);
  const double terms = log_add(term_log(exp_n(params), d, N), term_log(exp_m(params), d, M));
  return Magnitude{L.c_final + terms + mass_log(mass, params.p)};
}

double mc_lp_error_bound(const RegularityParams& params, std::size_t d, double N, double M,
                         double mass) {
  const Magnitude m = mc_lp_error_bound_log(params, d, N, M, mass);
  return m.log10 == -kInf ? 0.0 : m.value();
}

double frak_D(double eps, double q) {
  require(eps > 0.0, "eps must be positive");
  require(q > 2.0, "q must exceed 2");
  return (720.0 * q / (q - 2.0)) * (std::log2(1.0 / eps) + q + 1.0) - 504.0;
}

double growth_g(double x_norm, double C, double c, double tau, double max_partial_sum_norm) {
  return (x_norm + C * tau + max_partial_sum_norm) * std::exp(c * tau);
}

double euler_emulation_error_bound(double eps, std::size_t d, double q, double g_n,
                                   double g_n1) {
  require(eps >= 0.0, "eps must be nonnegative");
  return eps * (2.0 * std::sqrt(static_cast<double>(d)) + std::pow(g_n, q) + std::pow(g_n1, q));
}

double euler_emulation_growth_bound(std::size_t d, double g_n, double g_n1) {
  return 6.0 * std::sqrt(static_cast<double>(d)) + 2.0 * (g_n * g_n + g_n1 * g_n1);
}

double euler_emulation_size_bound(std::size_t N, std::size_t d, double eps, double q,
                                  std::size_t drift_length, std::size_t drift_params) {
  const double L = static_cast<double>(drift_length);
  const double P = static_cast<double>(drift_params);
  const double inner = 24.0 + 6.0 * L + (4.0 + P) * (4.0 + P);
  const double bracket = 2.0 * (L - 1.0) + frak_D(eps, q) + inner * inner;
  return 4.5 * std::pow(static_cast<double>(N), 6) * std::pow(static_cast<double>(d), 16) *
         bracket * bracket;
}

double aux_h(double r, double x_norm, double C, double c, double T, double max_w_norm) {
  return 1.0 + std::pow(x_norm + C * T + max_w_norm, r) * std::exp(r * c * T);
}

double mc_sum_error_bound(double eps, std::size_t d, double alpha, double cc, std::size_t M,
                          std::span<const double> h2, std::span<const double> h3) {
  require(M >= 1 && h2.size() == M && h3.size() == M, "need M values of h2 and h3");
  require(eps >= 0.0 && alpha >= 0.0 && cc >= 0.0, "eps, alpha, cc must be nonnegative");
  const double dd = static_cast<double>(d);
  double sum = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    sum += (1.0 + 2.0 * std::pow(dd, alpha / 2.0) * std::pow(6.0, alpha) * std::pow(h2[m], alpha)) *
           h3[m];
  }
  return 2.0 * eps * cc * std::sqrt(dd) / static_cast<double>(M) * sum;
}

double mc_sum_size_bound(std::size_t M, std::size_t N, std::size_t d, double eps, double q,
                         std::size_t init_params, std::size_t drift_length,
                         std::size_t drift_params) {
  const double Md = static_cast<double>(M);
  const double L = static_cast<double>(drift_length);
  const double P = static_cast<double>(drift_params);
  const double inner = 24.0 + 6.0 * L + (4.0 + P) * (4.0 + P);
  const double bracket = 2.0 * L + frak_D(eps, q) + inner * inner;
  return 2.0 * Md * Md * static_cast<double>(init_params) +
         9.0 * Md * Md * std::pow(static_cast<double>(N), 6) *
             std::pow(static_cast<double>(d), 16) * bracket * bracket;
}

double gronwall_moment_bound(double r, double q, double c, double C, double cm,
                             double mart_qr_norm, double mass) {
  require(r > 0.0 && q > 0.0, "r and q must be positive");
  require(q * r > 1.0, "need q r > 1");
  const double qr = q * r;
  return 2.0 * std::exp(r * c) * std::max(std::pow(2.0, 1.0 / q - 1.0), 1.0) *
         std::pow(cm + C + qr / (qr - 1.0) * mart_qr_norm, r) *
         std::max(1.0, std::pow(mass, 1.0 / q));
}

double gronwall_mixed_moment_bound(double p, double alpha, double c, double C, double cm,
                                   double mart_norm, double mass) {
  require(p > 1.0 && alpha >= 0.0, "need p > 1 and alpha >= 0");
  const double Q = std::max(4.0 * p * alpha, 6.0 * p);
  return std::pow(cm + C + Q / (Q - 1.0) * mart_norm, 2.0 * alpha + 3.0) *
         std::pow(2.0, alpha + 1.0) * std::exp((2.0 * alpha + 3.0) * c) *
         std::max(1.0, std::pow(mass, 1.0 / p));
}

DnnConstants dnn_constants(const RegularityParams& params) {
  const McLpLogs L = mc_lp_logs(params);
  const double l1 = dnn_c1_log(params), l2 = dnn_c2_log(params);
  const double k = params.kappa;
  const double c2 = std::ldexp(std::pow(std::max(k, 1.0), 8.0) *
                                   std::pow(std::max(std::pow(params.T, -k / 2.0), 1.0), 8.0),
                               57);
  return {Magnitude{l1}.value(), c2, mc_lp_constants(params).c_final, l1, l2, L.c_final};
}

Magnitude dnn_error_bound_log(const RegularityParams& params, std::size_t d, double N, double M,
                              double delta, double mass) {
  require(d >= 1 && N >= 1.0 && M >= 1.0, "need d, N, M >= 1");
  require(delta >= 0.0 && delta <= 1.0, "delta must lie in [0, 1]");
  const DnnConstants k = dnn_constants(params);
  const double dl = delta > 0.0 ? lg(delta) + exp_delta(params) * lg(static_cast<double>(d)) : -kInf;
  const double terms = log_add(log_add(term_log(exp_n(params), d, N),
                                       term_log(exp_m(params), d, M)), dl);
  return Magnitude{std::max(k.log10_c1, k.log10_c3) + mass_log(mass, params.p) + terms};
}

double dnn_error_bound(const RegularityParams& params, std::size_t d, double N, double M,
                       double delta, double mass) {
  const Magnitude m = dnn_error_bound_log(params, d, N, M, delta, mass);
  return m.log10 == -kInf ? 0.0 : m.value();
}

Magnitude dnn_param_bound_log(const RegularityParams& params, std::size_t d, double N, double M,
                              double delta) {
  params.validate();
  require(d >= 1 && N >= 1.0 && M >= 1.0, "need d, N, M >= 1");
  require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
  const double k = params.kappa;
  return Magnitude{dnn_c2_log(params) + 2.0 * lg(M) + (6.0 + 4.0 * k) * lg(N) +
                   2.0 * lg(std::log2(1.0 / delta) + 1.0) +
                   (16.0 + 8.0 * k) * lg(static_cast<double>(d))};
}

double dnn_param_bound(const RegularityParams& params, std::size_t d, double N, double M,
                       double delta) {
  return dnn_param_bound_log(params, d, N, M, delta).value();
}

BudgetPlan plan_budget(const RegularityParams& params, std::size_t d, double eps) {
  params.validate();
  require(d >= 1, "d must be positive");
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
  const double k = params.kappa, eta = params.eta;
  const DnnConstants K = dnn_constants(params);
  // One constant serves both the error and the size estimate.
  const double lc = std::max({K.log10_c1, K.log10_c2, K.log10_c3});
  const double a = lg(3.0) + lc + lg(eta);
  const double ld = lg(static_cast<double>(d));
  const double le = lg(eps);

  const double en = 2.0 * k * (k + 4.0) + 2.0 * std::max(eta, k * (2.0 * k + 1.0)) + 2.0 * eta;
  const double em = 2.0 * k + 2.0 * std::max(eta, k * k) + 2.0 * eta;
  const double edelta = 2.0 * (k + 2.0) * std::max(eta, k) + k * k + (7.0 * k + 1.0) / 2.0;

  BudgetPlan plan{};
  const double log_n = 2.0 * a - 2.0 * le + en * ld;
  const double log_m = 2.0 * a - 2.0 * le + em * ld;
  plan.log10_delta = std::min(0.0, -a + le - edelta * ld);
  plan.delta = std::pow(10.0, plan.log10_delta);

  auto ceil_magnitude = [](double lg10) {
    if (lg10 < 15.0) return Magnitude{std::log10(std::max(1.0, std::ceil(std::pow(10.0, lg10))))};
    return Magnitude{lg10};
  };
  plan.N = ceil_magnitude(log_n);
  plan.M = ceil_magnitude(log_m);

  plan.cost_exponent = 18.0 + 12.0 * k + 4.0 * std::max(eta, k * k) + 4.0 * eta + en * (6.0 + 4.0 * k);
  const double c2 = std::max(0.0, a / kLog10Two) + 1.0 / std::numbers::ln2 +
                    edelta / std::numbers::ln2;
  plan.cost_constant = Magnitude{lc + (8.0 + 4.0 * k) * kLog10Two + (16.0 + 8.0 * k) * a +
                                 2.0 * lg(c2 + 1.0)};
  plan.cost = Magnitude{plan.cost_constant.log10 - (18.0 + 8.0 * k) * le + plan.cost_exponent * ld};
  plan.log10_constant = lc;

  // Integers are reported only when they fit comfortably in 64 bits.
  constexpr double kMaxLog = 18.0;
  if (plan.N.log10 < kMaxLog && plan.M.log10 < kMaxLog && plan.delta > 0.0) {
    plan.budget = Budget{static_cast<std::size_t>(std::llround(plan.N.value())),
                         static_cast<std::size_t>(std::llround(plan.M.value())), plan.delta};
  }
  return plan;
}

LebesgueEta lebesgue_eta(double T, double kappa, double p, double alpha, double beta) {
  require(T > 0.0 && kappa > 0.0, "T and kappa must be positive");
  require(p >= 2.0, "p must be at least 2");
  require(beta > alpha, "need beta > alpha");
  const double q = std::max(p, 2.0);
  const double m = std::max({6.0 * kappa, 2.0 * kappa + 2.0, 3.0});
  const double box = std::max({1.0, std::pow(std::abs(alpha), 2.0 * m),
                               std::pow(std::abs(beta), 2.0 * m)});
  const double eta = m + std::pow(std::max(1.0, T), 1.0 / q) * box;
  const double scale = std::pow(std::max(T, 1.0), 1.0 / q - 1.0 / p);
  return {q, eta, scale};
}

double corollary_kappa(double kappa) { return std::max(3.0 * kappa, kappa + 1.0); }
double laplace_kappa(double kappa) { return std::max(3.0 * kappa, 2.0 * (kappa + 1.0)); }

}  // namespace kolmonet
