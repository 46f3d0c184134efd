#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace kolmonet {

/// Regularity constants of a problem family: horizon T, growth exponent
/// kappa, moment constant eta and integrability exponent p.
struct RegularityParams {
  double T = 1.0;
  double kappa = 1.0;
  double eta = 1.0;
  double p = 2.0;

  /// Throws DomainError unless T > 0, kappa > 0, eta >= 1 and p >= 2.
  void validate() const;
};

/// Euler step count, Monte Carlo sample count and product accuracy.
struct Budget {
  std::size_t N = 1;
  std::size_t M = 1;
  double delta = 1.0;

  void validate() const;
};

/// A positive quantity that may be far outside the double range. `value` is
/// +inf when log10 exceeds the representable range.
struct Magnitude {
  double log10;
  double value() const;
  static Magnitude of(double v);
};

// Moments of Gaussian variables and SDE solutions.

/// sqrt(max{1, p-1} * trace).
double gaussian_moment_bound(double p, double cov_trace);
/// (|x| + C T + beta_sup) e^{c T}.
double apriori_sde_bound(double x_norm, double C, double c, double T, double beta_sup);
/// max{1, sqrt(max{1, q-1} * trace)}.
double varpi(double q, double trace_bstar_b);
/// Moment bound for the interpolated Euler scheme:
/// (|x| + C T + sqrt(max{1, q-1} T trace)) e^{c T}.
double euler_moment_bound(double q, double x_norm, double C, double c, double T,
                          double trace_bbstar);
/// 0.5 sqrt(max{1, p-1} h trace).
double interp_error_bound(double p, double h, double trace_bbstar);

// Weak error of the perturbed Euler scheme.

struct WeakErrorParams {
  double T = 1.0;
  double p = 2.0;
  double q = 2.0;
  double eps0 = 0.0, eps1 = 0.0, eps2 = 0.0;
  double vs0 = 0.0, vs1 = 0.0, vs2 = 0.0;  // growth exponents of the perturbations
  double ell = 0.0;                         // local Lipschitz exponent of the test function
  double L0 = 1.0, L1 = 1.0;                // Lipschitz constants
  double C = 0.0, c = 0.0;                  // |g1(x)| <= C + c |x|
  double trace_bstar_b = 0.0;
};

/// Requires p >= 2 and q in (1, 2] with 1/p + 1/q = 1.
double weak_error_bound(const WeakErrorParams& w, double xi_norm, double f1_at_0_norm,
                        double h);

// Monte Carlo Euler L^p error.

struct McLpConstants {
  double big_c;   // moment constant C
  double c1;
  double c2;
  double c_final; // max{c1 + c2, 8 kappa (1 + C) sqrt(p - 1)}
};

McLpConstants mc_lp_constants(const RegularityParams& params);
Magnitude mc_lp_error_bound_log(const RegularityParams& params, std::size_t d, double N,
                                double M, double mass);
/// Pass +inf for N or M to drop the corresponding term.
double mc_lp_error_bound(const RegularityParams& params, std::size_t d, double N, double M,
                         double mass);

// Euler emulation and Monte Carlo sums.

/// [720 q / (q - 2)] [log2(1/eps) + q + 1] - 504, for q > 2.
double frak_D(double eps, double q);
/// [|x| + C tau_n + max_{m <= n} |y_1 + ... + y_m|] e^{c tau_n}.
double growth_g(double x_norm, double C, double c, double tau, double max_partial_sum_norm);
/// eps [2 sqrt(d) + g_n^q + g_{n+1}^q].
double euler_emulation_error_bound(double eps, std::size_t d, double q, double g_n,
                                   double g_n1);
/// 6 sqrt(d) + 2 (g_n^2 + g_{n+1}^2).
double euler_emulation_growth_bound(std::size_t d, double g_n, double g_n1);
/// (9/2) N^6 d^16 [2(L - 1) + D + (24 + 6 L + (4 + P)^2)^2]^2 for a drift network
/// of length L and parameter count P.
double euler_emulation_size_bound(std::size_t N, std::size_t d, double eps, double q,
                                  std::size_t drift_length, std::size_t drift_params);
/// 1 + [|x| + C T + max_n |W_n|]^r e^{r c T}.
double aux_h(double r, double x_norm, double C, double c, double T, double max_w_norm);
/// (2 eps cc sqrt(d) / M) sum_m [1 + 2 d^{alpha/2} 6^alpha h2_m^alpha] h3_m.
double mc_sum_error_bound(double eps, std::size_t d, double alpha, double cc, std::size_t M,
                          std::span<const double> h2, std::span<const double> h3);
/// 2 M^2 P(g) + 9 M^2 N^6 d^16 [2 L(f) + D + (24 + 6 L(f) + (4 + P(f))^2)^2]^2.
double mc_sum_size_bound(std::size_t M, std::size_t N, std::size_t d, double eps, double q,
                         std::size_t init_params, std::size_t drift_length,
                         std::size_t drift_params);

// Moment integrals of the Gronwall-type auxiliary functions.

/// 2 e^{r c} max{2^{1/q - 1}, 1} [cm + C + qr/(qr - 1) mart]^r max{1, mass^{1/q}},
/// for 1 < q r.
double gronwall_moment_bound(double r, double q, double c, double C, double cm,
                             double mart_qr_norm, double mass);
/// [cm + C + Q/(Q - 1) mart]^{2 alpha + 3} 2^{alpha + 1} e^{(2 alpha + 3) c} max{1, mass^{1/p}},
/// with Q = max{4 p alpha, 6 p}.
double gronwall_mixed_moment_bound(double p, double alpha, double c, double C, double cm,
                                   double mart_norm, double mass);

// Network approximation error and size.

struct DnnConstants {
  double c1;       // error constant of the product-accuracy term
  double c2;       // size constant
  double c3;       // Monte Carlo Euler constant (McLpConstants::c_final)
  double log10_c1;
  double log10_c2;
  double log10_c3;
};

DnnConstants dnn_constants(const RegularityParams& params);
Magnitude dnn_error_bound_log(const RegularityParams& params, std::size_t d, double N, double M,
                              double delta, double mass);
double dnn_error_bound(const RegularityParams& params, std::size_t d, double N, double M,
                       double delta, double mass);
Magnitude dnn_param_bound_log(const RegularityParams& params, std::size_t d, double N, double M,
                              double delta);
double dnn_param_bound(const RegularityParams& params, std::size_t d, double N, double M,
                       double delta);

// Budget planning.

struct BudgetPlan {
  Magnitude N;                  // Euler steps
  Magnitude M;                  // Monte Carlo samples
  double delta;                 // product accuracy (may underflow to 0; see log10_delta)
  double log10_delta;
  double cost_exponent;         // exponent c of d in the cost bound
  Magnitude cost;               // cc eps^{-(18 + 8 kappa)} d^c
  Magnitude cost_constant;      // cc
  double log10_constant;        // log10 of the single constant used by the plan
  /// The plan as integers, when N and M fit in 64 bits.
  std::optional<Budget> budget;
};

BudgetPlan plan_budget(const RegularityParams& params, std::size_t d, double eps);

// Measure-dependent constants.

struct LebesgueEta {
  double q;
  double eta;
  double delta_scale;  // delta(eps) = eps * delta_scale
};

LebesgueEta lebesgue_eta(double T, double kappa, double p, double alpha, double beta);

/// Growth exponent used by the general corollary: max{3 kappa, kappa + 1}.
double corollary_kappa(double kappa);
/// Growth exponent used by the Laplace specialization: max{3 kappa, 2 (kappa + 1)}.
double laplace_kappa(double kappa);

}  // namespace kolmonet
