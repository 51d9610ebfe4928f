#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qpv/bound_report.hpp"
#include "qpv/interval.hpp"
#include "qpv/prime_engine.hpp"
#include "qpv/q_classifier.hpp"

namespace qpv {

/// Forbidden residues for n in the sieve of the integers 8n +- 1: one class
/// (8n +- 1 = 0) for ordinary odd p, three for p = 7, 13 (mod 24), where
/// (8n +- 1)^2 + (8n +- 1) + 1 = 0 adds two more; none for p = 2.
struct SieveProblem {
    QSign sign = QSign::Plus;

    static unsigned rho(std::uint64_t p);
};

/// max{0, t log(t/K) - t + K}.
double psi1(double K, double t);
Interval psi1(const Interval& K, const Interval& t);

/// 1 - exp(-psi1(B, v/u)); requires v >= u >= 2 and B > 0.
double psi0(double v, double u, double B);
Interval psi0(const Interval& v, const Interval& u, const Interval& B);

/// B(z) = (1/log z) sum_{p <= z} rho(p) log p / p.
Interval B_exact(const PrimeEngine& engine, std::uint64_t z, const SieveProblem& problem = {});
/// V(z) = prod_{p <= z} (1 - rho(p)/p).
Interval V_exact(const PrimeEngine& engine, std::uint64_t z, const SieveProblem& problem = {});

/// 1.23274 / (log z)^(3/2), valid for log z > 40 (Domain error otherwise).
Interval V_bound(double log_z);
double B_cap();

/// (x + x^(2/u)) V / psi0(v, u, B); empty when psi0 cannot be bounded away
/// from zero (the bound is vacuous).
std::optional<Interval> lemma21_rhs(double x, double u, double v, const Interval& V, const Interval& B);

/// |S(x, Omega, y)|: the n in [1, x] avoiding the forbidden classes of every
/// prime p <= y. Residues are found by testing every n mod p directly.
/// Capacity error beyond x <= 10^8, y <= 10^4.
std::uint64_t enumerate_sifted(std::uint64_t x, std::uint64_t y, QSign sign);

/// |psi(z;24,l) - z/8| / z against the applicable c_i tier (Indeterminate by
/// policy below z = 10^10).
BoundReport pnt_ap_error(const PrimeEngine& engine, std::uint64_t z, unsigned l);
/// |f(z;24,l) - z/8| < 1.745 sqrt z with f = psi (or theta).
BoundReport pnt_ap_sqrt_error(const PrimeEngine& engine, std::uint64_t z, unsigned l, bool use_theta = false);
BoundReport pnt_ap_error(const ClassStatistics& stats, unsigned l);
BoundReport pnt_ap_sqrt_error(const ClassStatistics& stats, unsigned l, bool use_theta = false);

/// c_3 (1/log z - 1/(625R) + log(625R) - log log z), for e^60 <= z < e^(625R).
Interval error_integral_mid(double log_z);
/// 3.6e-7 (1/log z + 1/(2 log^2 z)), for z >= e^(625R).
Interval error_integral_tail(double log_z);
/// Gauss-Kronrod quadrature of the integrands behind the two closed forms.
double error_integral_mid_quadrature(double log_z);
double error_integral_tail_quadrature(double log_z);

/// Constant-only inequalities of the error budget, evaluated in interval arithmetic.
std::vector<BoundReport> lemma32_error_budget();
/// Desk-scale sums at z (default 10^8): psi values, sum log p/p, Mertens
/// residuals, higher-order Euler terms and the product trend.
std::vector<BoundReport> lemma32_desk_checks(const PrimeEngine& engine, std::uint64_t z = 100000000);

/// exp(2/C + 18.55764 / (log C)^(1/2)) < 2.
BoundReport tail_check(double log_C);

/// The sieve-bound constant chain ending in the tail check, published
/// constants side by side with the recomputed ones.
std::vector<BoundReport> theorem2_chain();

/// Reports named `name` or `name-*`; all of them for an empty name.
/// InvalidArgument when nothing matches.
std::vector<BoundReport> select_reports(const std::vector<BoundReport>& reports, std::string_view name);

}  // namespace qpv
