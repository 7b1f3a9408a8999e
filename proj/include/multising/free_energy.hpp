/* Free-energy functions of the multiple sums: the 1-d semigroup formula,
 * the directional N^d formula, the general rank-count form, the exact
 * finite-volume log moment generating function, and the beta-derivative.
 *
 * Series are truncated with certified geometric tails; every result carries
 * the truncation depth and the tail bound. */
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "multising/errors.hpp"
#include "multising/rational.hpp"
#include "multising/semigroup.hpp"
#include "multising/summation.hpp"
#include "multising/transfer.hpp"

namespace multising {

struct FreeEnergyResult {
  double value = 0.0;
  double r = 0.0;
  double beta = 0.0;
  long long truncation_K = 0;
  std::optional<double> tail_bound;  // certified |value - limit| when known
  bool tolerance_met = true;
  std::optional<std::vector<double>> terms;  // per-k series contributions
  std::optional<Rational> constant_C;        // directional series constant
  std::optional<Rational> bonds_per_site_;   // coupling terms per box site
};

namespace detail {

// Everything the series and its beta-derivative need at one (beta, h).
// All expressions are arranged so no two same-sign magnitudes are
// subtracted: the eigenvalue ratio uses rho = 1 - 2 root/(cosh h + root),
// its derivative the exact identity drho = -droot (1+rho)/(cosh h + root),
// and the overlap comes from the kernel eigenvector whose components share
// a sign for the given h.
struct TransferAnalytics {
  double beta, h;
  double lp, dlp;
  double rho, drho;
  double ov, dov;
  double c, dc;  // c = 2 cosh(h)/ov - 1
  double log_ov, log_lp;
  double cosh2h;
};

inline TransferAnalytics make_analytics(double beta, double h) {
  TransferAnalytics t;
  t.beta = beta;
  t.h = h;
  const double sh = std::sinh(h);
  const double ch = std::cosh(h);
  const double em4 = std::max(std::exp(-4.0 * beta), 1e-300);
  const double root = std::sqrt(sh * sh + em4);
  const double eb = std::exp(beta);
  const double droot = -2.0 * em4 / root;
  t.lp = eb * (ch + root);
  t.dlp = t.lp + eb * droot;
  t.rho = 1.0 - 2.0 * root / (ch + root);
  t.drho = -droot * (1.0 + t.rho) / (ch + root);
  t.cosh2h = 2.0 * ch;

  double a, b, da, db;
  if (h >= 0.0) {
    a = -eb * (sh + root);
    b = -std::exp(-beta);
    da = a - eb * droot;
    db = -b;
  } else {
    a = -std::exp(-beta);
    b = eb * (sh - root);
    da = -a;
    db = b - eb * droot;
  }
  const double vh = std::exp(0.5 * h);
  const double vmh = std::exp(-0.5 * h);
  const double vw = vh * a + vmh * b;
  const double dvw = vh * da + vmh * db;
  const double n2 = a * a + b * b;
  const double dn2 = 2.0 * (a * da + b * db);
  t.ov = vw * vw / n2;
  t.dov = (2.0 * vw * dvw - t.ov * dn2) / n2;
  t.c = t.cosh2h / t.ov - 1.0;
  t.dc = -t.cosh2h * t.dov / (t.ov * t.ov);
  t.log_ov = std::log(t.ov);
  t.log_lp = std::log(t.lp);
  return t;
}

struct SeriesEval {
  double sum = 0.0;
  long long K = 0;
  double tail = 0.0;
  bool met = true;
  std::vector<double> terms;
};

constexpr long long kSeriesHardCap = 100000;

// Weighted log series over the scalar semigroup of the ordering direction:
//   sum_k (1/l_k - 1/l_{k+1}) * g_k,   g_k = log(1 + c rho^k)
// (or its beta-derivative). kappa multiplies terms and tail alike.
//
// Tail certificates. With x = |c| |rho|^{K+1} < 1/2 the log factor is
// monotone beyond K, so |tail| <= kappa * (1/l_{K+1}) * (-log(1-x)); for the
// derivative, |g'_k| <= (|c'||rho|^k + |c| k |rho|^{k-1} |rho'|)/(1-x) and
// k |rho|^{k-1} <= |rho|^K * k gives a weighted-rank bound. When x >= 1/2
// a coarse linear-growth bound applies: |g_k| <= A + B k follows from
// g_k = log Z(k+1) - log ov - k log lp together with 2^{k+1} e^{-|b|k-|h|(k+1)}
// <= Z(k+1) <= 2^{k+1} e^{|b|k+|h|(k+1)} and |d log Z / d beta| <= k. The
// weighted rank sums are exact: sum_{k>K} w_k = 1/l_{K+1} and
// sum_{k>K} k w_k = (K+1)/l_{K+1} + (gamma - sum_{k<=K+1} 1/l_k).
inline SeriesEval g_series(const std::vector<long long>& dir_gens,
                           const TransferAnalytics& ta, double kappa,
                           double gamma_d, double tol, bool derivative,
                           long long fixed_K, bool keep_terms) {
  SeriesEval out;
  std::vector<std::uint64_t> els = first_scalar_elements(dir_gens, 128);
  NeumaierSum acc;
  double prefix_recip = 1.0;  // sum of 1/l_t for t <= k+1, updated in loop
  double pow_prev = 1.0;      // rho^{k-1}
  const double abs_rho = std::fabs(ta.rho);
  const double abs_c = std::fabs(ta.c);

  const double coarse_A = derivative
                              ? std::fabs(ta.dov / ta.ov)
                              : std::log(2.0) + std::fabs(ta.h) +
                                    std::fabs(ta.log_ov);
  const double coarse_B = derivative
                              ? 1.0 + std::fabs(ta.dlp / ta.lp)
                              : std::log(2.0) + std::fabs(ta.beta) +
                                    std::fabs(ta.h) + std::fabs(ta.log_lp);

  for (long long k = 1;; ++k) {
    if (els.size() < static_cast<std::size_t>(k) + 1) {
      std::vector<std::uint64_t> more =
          first_scalar_elements(dir_gens, els.size() * 2 + 2);
      if (more.size() <= els.size()) {
        // elements beyond the exact range: remaining weights are below
        // 1/l_K ~ 2.5e-19, close the series with the coarse bound
        out.K = k - 1;
        double s0 = 1.0 / static_cast<double>(els.back());
        double s1 = static_cast<double>(k) * s0 +
                    std::max(0.0, gamma_d - prefix_recip);
        out.tail = kappa * (coarse_A * s0 + coarse_B * s1);
        out.met = out.tail <= tol;
        break;
      }
      els = std::move(more);
    }
    const double recip_k = 1.0 / static_cast<double>(els[k - 1]);
    const double recip_next = 1.0 / static_cast<double>(els[k]);
    prefix_recip += recip_next;
    const double w = recip_k - recip_next;
    const double pw = pow_prev * ta.rho;  // rho^k
    double g;
    if (!derivative) {
      g = std::log1p(ta.c * pw);
    } else {
      g = (ta.dc * pw + ta.c * static_cast<double>(k) * pow_prev * ta.drho) /
          (1.0 + ta.c * pw);
    }
    const double term = kappa * w * g;
    acc.add(term);
    if (keep_terms) out.terms.push_back(term);
    pow_prev = pw;

    const double s0 = recip_next;
    const double s1 = static_cast<double>(k + 1) * recip_next +
                      std::max(0.0, gamma_d - prefix_recip);
    const double x = abs_c * std::pow(abs_rho, static_cast<double>(k + 1));
    double tail;
    if (x < 0.5) {
      if (!derivative) {
        tail = kappa * s0 * (-std::log1p(-x));
      } else {
        tail = kappa *
               (std::fabs(ta.dc) * std::pow(abs_rho, static_cast<double>(k + 1)) *
                    s0 +
                abs_c * std::fabs(ta.drho) *
                    std::pow(abs_rho, static_cast<double>(k)) * s1) /
               (1.0 - x);
      }
    } else {
      tail = kappa * (coarse_A * s0 + coarse_B * s1);
    }
    out.K = k;
    out.tail = tail;
    if (fixed_K > 0) {
      if (k >= fixed_K) {
        out.met = true;
        break;
      }
    } else if (tail <= tol) {
      out.met = true;
      break;
    } else if (k >= kSeriesHardCap) {
      out.met = false;  // best effort; the tail bound still holds
      break;
    }
  }
  out.sum = acc.value();
  return out;
}

inline void check_tol(double tol) {
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
}

inline FreeEnergyResult evaluate_series_form(
    double r, double beta, const std::vector<long long>& dir_gens, double tol,
    long long fixed_K, bool keep_terms) {
  const double h = field_from_bias(r);
  const Rational gamma_exact = gamma_value(dir_gens);
  const double kappa = gamma_exact.inverse().to_double();
  const TransferAnalytics ta = make_analytics(beta, h);
  const SeriesEval g = g_series(dir_gens, ta, kappa, gamma_exact.to_double(),
                                tol, false, fixed_K, keep_terms);
  FreeEnergyResult res;
  res.r = r;
  res.beta = beta;
  res.truncation_K = g.K;
  res.tail_bound = g.tail;
  res.tolerance_met = g.met;
  if (keep_terms) res.terms = g.terms;
  const double closed = 0.5 * (1.0 + kappa) * std::log(r * (1.0 - r)) +
                        kappa * ta.log_ov + ta.log_lp;
  res.value = closed + g.sum;
  return res;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// public surface

// One-dimensional semigroup free energy (normalized per lattice site, which
// equals the per-coupling normalization in one dimension).
inline FreeEnergyResult free_energy_1d(double r, double beta,
                                       const std::vector<long long>& gens,
                                       double tol, long long fixed_K = 0,
                                       bool keep_terms = false) {
  detail::check_tol(tol);
  if (gens.empty()) throw ConfigError("at least one generator required");
  scalar_spec(gens);  // validates coprimality / degeneracy
  return detail::evaluate_series_form(r, beta, gens, tol, fixed_K, keep_terms);
}

// Directional free energy on N^d, normalized per coupling term. The
// reported constant_C is the exact rational series constant of the
// closed-form expression; bonds_per_site converts to the per-site value
// (finite_mgf converges to value * bonds_per_site).
inline FreeEnergyResult free_energy_directional(double r, double beta,
                                                const SemigroupSpec& spec,
                                                int j, double tol,
                                                long long fixed_K = 0,
                                                bool keep_terms = false) {
  detail::check_tol(tol);
  detail::require_ordered_direction(spec, j);
  std::vector<long long> dir = direction_generators(spec, j);
  FreeEnergyResult res =
      detail::evaluate_series_form(r, beta, dir, tol, fixed_K, keep_terms);
  res.constant_C = directional_constant(spec, j);
  res.bonds_per_site_ = bonds_per_site(spec, j);
  return res;
}

// Analytic d/dbeta of the series form (term-wise differentiation; the
// differentiated series converges uniformly on compact beta ranges).
inline double free_energy_derivative(double r, double beta,
                                     const std::vector<long long>& gens,
                                     double tol) {
  detail::check_tol(tol);
  if (gens.empty()) throw ConfigError("at least one generator required");
  scalar_spec(gens);
  const double h = field_from_bias(r);
  const Rational gamma_exact = gamma_value(gens);
  const double kappa = gamma_exact.inverse().to_double();
  const detail::TransferAnalytics ta = detail::make_analytics(beta, h);
  const detail::SeriesEval g = detail::g_series(
      gens, ta, kappa, gamma_exact.to_double(), tol, true, 0, false);
  return kappa * ta.dov / ta.ov + ta.dlp / ta.lp + g.sum;
}

inline double free_energy_derivative(double r, double beta,
                                     const SemigroupSpec& spec, int j,
                                     double tol) {
  detail::require_ordered_direction(spec, j);
  return free_energy_derivative(r, beta, direction_generators(spec, j), tol);
}

// General d-fold weighted sum with per-cell rank counts. Partial sum up to
// K_cap in every coordinate; no tail certificate is available for this form.
inline FreeEnergyResult free_energy_general(double r, double beta,
                                            const SemigroupSpec& spec, int j,
                                            int K_cap) {
  if (K_cap < 1) throw ConfigError("K_cap must be >= 1");
  field_from_bias(r);  // validates r
  const int d = spec.d;
  std::vector<std::vector<double>> weights(d);
  for (int s = 0; s < d; ++s) {
    std::vector<std::uint64_t> els = first_scalar_elements(
        direction_generators(spec, s + 1), static_cast<std::size_t>(K_cap) + 1);
    for (std::size_t m = 1; m <= static_cast<std::size_t>(K_cap); ++m) {
      if (m > els.size()) break;
      double rk = 1.0 / static_cast<double>(els[m - 1]);
      double rn = (m < els.size()) ? 1.0 / static_cast<double>(els[m]) : 0.0;
      weights[s].push_back(rk - rn);
    }
  }
  const double density = density_K_over_J(spec).to_double();
  std::vector<double> phi_cache;  // by rank count b
  auto phi = [&](long long b) {
    if (phi_cache.size() <= static_cast<std::size_t>(b))
      phi_cache.resize(static_cast<std::size_t>(b) + 1,
                       std::numeric_limits<double>::quiet_NaN());
    double& slot = phi_cache[static_cast<std::size_t>(b)];
    if (std::isnan(slot)) slot = chain_log_expectation(r, beta, b + 1);
    return slot;
  };
  NeumaierSum acc;
  std::vector<int> cell(d, 1);
  auto loop = [&](auto&& self, int s, double wprod) -> void {
    if (s == d) {
      long long b = b_count(spec, j, cell);
      acc.add(wprod * phi(b));
      return;
    }
    for (int m = 1; m <= static_cast<int>(weights[s].size()); ++m) {
      cell[s] = m;
      self(self, s + 1, wprod * weights[s][m - 1]);
    }
    cell[s] = 1;
  };
  loop(loop, 0, density);
  FreeEnergyResult res;
  res.r = r;
  res.beta = beta;
  res.value = acc.value();
  res.truncation_K = K_cap;
  res.tolerance_met = false;  // partial sum by construction
  return res;
}

// Exact finite-volume log moment generating function per box site,
// evaluated through the chain-length census (no enumeration, no sampling).
inline double finite_mgf(double r, double beta, const SemigroupSpec& spec,
                         const Box& box, int j) {
  std::map<long long, long long> census = chain_length_census(box, spec, j);
  NeumaierSum acc;
  for (auto& [len, cnt] : census)
    acc.add(static_cast<double>(cnt) * chain_log_expectation(r, beta, len + 1));
  long double volume = 1.0L;
  for (long long n : box) volume *= static_cast<long double>(n);
  return static_cast<double>(acc.value() / static_cast<double>(volume));
}

}  // namespace multising
