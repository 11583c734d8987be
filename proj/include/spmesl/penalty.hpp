#pragma once
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace spmesl {

enum class PenaltyKind { Universal, UnionBound, ProbabilisticBound, Fixed };

std::string_view to_string(PenaltyKind kind) noexcept;
/// Accepts the CLI spellings `univ`, `ub`, `pb`, `fixed`.
PenaltyKind parse_penalty_kind(std::string_view s);

/// A resolved penalty level lambda0 and how it was obtained.
struct PenaltySpec
{
    PenaltyKind kind = PenaltyKind::Fixed;
    std::size_t n = 0;
    std::size_t p = 0;
    double A = 1.0;
    double value = 0.0;
    std::optional<double> k_solution;
    /// Set when a union-bound level is requested with A == 1, outside the
    /// A > 1 range the consistency theory covers.
    bool boundary_A = false;
};

/// Standard normal CDF.
double normal_cdf(double z) noexcept;

/// Standard normal quantile (Wichura's AS 241, PPND16) followed by one
/// Newton step against normal_cdf. Throws DomainError unless 0 < t < 1.
double normal_quantile(double t);

/// L_n(t) = Phi^{-1}(1 - t) / sqrt(n).
double normal_tail_level(double n, double t);

/// sqrt(2 log(p - 1) / n) by default; with `log_p` set, sqrt(2 log(p) / n).
PenaltySpec lambda_universal(std::size_t n, std::size_t p, bool log_p = false);

/// A sqrt(4 log(p) / n). A == 1 is accepted and flagged via boundary_A.
PenaltySpec lambda_union_bound(std::size_t n, std::size_t p, double A = 1.0);

/// Residual of the fixed point k = L_1^4(k/p) + 2 L_1^2(k/p).
///
/// Some renderings of this equation write the residual as
/// k - L_1^4 + 2 L_1^2; that form has no root near the published
/// k = 23.4748 at p = 1000, so the minus-minus form is used.
double k_residual(double k, std::size_t p);

/// Bisection for the root of k_residual on [1e-6, p/2].
/// Throws NoBracket or NonConvergence (after `max_iter` halvings).
double solve_k(std::size_t p, double tol = 1e-10, std::size_t max_iter = 200);

/// A * L_n(k/p) with k from solve_k. Requires 1 < A <= sqrt(2).
PenaltySpec lambda_probabilistic(std::size_t n, std::size_t p, double A = 1.4142135623730951);

PenaltySpec lambda_fixed(std::size_t n, std::size_t p, double lambda0);

/// Dispatch on kind with the default A for that kind when `A` is empty.
PenaltySpec resolve_penalty(PenaltyKind kind, std::size_t n, std::size_t p,
                            std::optional<double> A = std::nullopt,
                            std::optional<double> lambda0 = std::nullopt);

} // namespace spmesl
