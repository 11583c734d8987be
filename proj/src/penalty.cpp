#include <spmesl/penalty.hpp>
#include <spmesl/errors.hpp>

#include <cmath>
#include <numbers>

namespace spmesl {

std::string_view to_string(PenaltyKind kind) noexcept
{
    switch (kind) {
    case PenaltyKind::Universal: return "univ";
    case PenaltyKind::UnionBound: return "ub";
    case PenaltyKind::ProbabilisticBound: return "pb";
    case PenaltyKind::Fixed: return "fixed";
    }
    return "fixed";
}

PenaltyKind parse_penalty_kind(std::string_view s)
{
    if (s == "univ") return PenaltyKind::Universal;
    if (s == "ub") return PenaltyKind::UnionBound;
    if (s == "pb") return PenaltyKind::ProbabilisticBound;
    if (s == "fixed") return PenaltyKind::Fixed;
    throw DomainError("unknown penalty rule '" + std::string(s) + "' (expected univ|ub|pb|fixed)");
}

double normal_cdf(double z) noexcept
{
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

namespace {

double poly(const double* c, int degree, double x)
{
    double r = c[degree];
    for (int i = degree - 1; i >= 0; --i)
        r = r * x + c[i];
    return r;
}

// Wichura, Algorithm AS 241 (PPND16), relative accuracy about 1e-16.
double ppnd16(double t)
{
    static constexpr double a[] = {3.3871328727963666080e0, 1.3314166789178437745e2,
                                   1.9715909503065514427e3, 1.3731693765509461125e4,
                                   4.5921953931549871457e4, 6.7265770927008700853e4,
                                   3.3430575583588128105e4, 2.5090809287301226727e3};
    static constexpr double b[] = {1.0,
                                   4.2313330701600911252e1, 6.8718700749205790830e2,
                                   5.3941960214247511077e3, 2.1213794301586595867e4,
                                   3.9307895800092710610e4, 2.8729085735721942674e4,
                                   5.2264952788528545610e3};
    static constexpr double c[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                   5.76949722146069140550e0, 3.64784832476320460504e0,
                                   1.27045825245236838258e0, 2.41780725177450611770e-1,
                                   2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[] = {1.0,
                                   2.05319162663775882187e0, 1.67638483018380384940e0,
                                   6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                   1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                   1.05075007164441684324e-9};
    static constexpr double e[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                   1.78482653991729133580e0, 2.96560571828504891230e-1,
                                   2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                   2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[] = {1.0,
                                   5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                   1.48753612908506148525e-2, 7.86869131145613259100e-4,
                                   1.84631831751005468180e-5, 1.42151175831644588870e-7,
                                   2.04426310338993978564e-15};

    const double q = t - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(a, 7, r) / poly(b, 7, r);
    }
    double r = q < 0.0 ? t : 1.0 - t;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        z = poly(c, 7, r) / poly(d, 7, r);
    } else {
        r -= 5.0;
        z = poly(e, 7, r) / poly(f, 7, r);
    }
    return q < 0.0 ? -z : z;
}

} // namespace

double normal_quantile(double t)
{
    if (!(t > 0.0 && t < 1.0))
        throw DomainError("normal_quantile requires 0 < t < 1, got " + std::to_string(t));
    double z = ppnd16(t);
    // Newton polish; skipped in the far tails where the density underflows.
    const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    if (density > 1e-300) {
        const double step = (normal_cdf(z) - t) / density;
        if (std::abs(step) < 1e-6 * (1.0 + std::abs(z)))
            z -= step;
    }
    return z;
}

double normal_tail_level(double n, double t)
{
    return normal_quantile(1.0 - t) / std::sqrt(n);
}

PenaltySpec lambda_universal(std::size_t n, std::size_t p, bool log_p)
{
    if (n < 1)
        throw DomainError("lambda_universal requires n >= 1");
    if (p < 3)
        throw DomainError("lambda_universal requires p >= 3, got " + std::to_string(p));
    const double m = log_p ? static_cast<double>(p) : static_cast<double>(p - 1);
    PenaltySpec s;
    s.kind = PenaltyKind::Universal;
    s.n = n;
    s.p = p;
    s.A = 1.0;
    s.value = std::sqrt(2.0 * std::log(m) / static_cast<double>(n));
    return s;
}

PenaltySpec lambda_union_bound(std::size_t n, std::size_t p, double A)
{
    if (n < 1)
        throw DomainError("lambda_union_bound requires n >= 1");
    if (p < 2)
        throw DomainError("lambda_union_bound requires p >= 2, got " + std::to_string(p));
    if (!(A > 0.0))
        throw DomainError("lambda_union_bound requires A > 0");
    if (A < 1.0)
        throw DomainError("lambda_union_bound requires A >= 1, got " + std::to_string(A));
    PenaltySpec s;
    s.kind = PenaltyKind::UnionBound;
    s.n = n;
    s.p = p;
    s.A = A;
    s.boundary_A = (A == 1.0);
    s.value = A * std::sqrt(4.0 * std::log(static_cast<double>(p)) / static_cast<double>(n));
    return s;
}

double k_residual(double k, std::size_t p)
{
    const double L = normal_quantile(1.0 - k / static_cast<double>(p));
    const double L2 = L * L;
    return k - L2 * L2 - 2.0 * L2;
}

double solve_k(std::size_t p, double tol, std::size_t max_iter)
{
    if (p < 10)
        throw DomainError("solve_k requires p >= 10, got " + std::to_string(p));
    if (!(tol > 0.0))
        throw DomainError("solve_k requires tol > 0");

    double lo = 1e-6;
    double hi = static_cast<double>(p) / 2.0;
    double f_lo = k_residual(lo, p);
    const double f_hi = k_residual(hi, p);
    if (std::signbit(f_lo) == std::signbit(f_hi))
        throw NoBracket("k residual does not change sign on [1e-6, p/2] for p = " +
                        std::to_string(p));

    for (std::size_t it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = k_residual(mid, p);
        if (std::abs(f_mid) < tol)
            return mid;
        if (mid == lo || mid == hi)
            break;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    throw NonConvergence("bisection for k did not reach |residual| < tol for p = " +
                             std::to_string(p),
                         max_iter);
}

PenaltySpec lambda_probabilistic(std::size_t n, std::size_t p, double A)
{
    if (n < 1)
        throw DomainError("lambda_probabilistic requires n >= 1");
    if (!(A > 1.0 && A <= std::numbers::sqrt2))
        throw DomainError("lambda_probabilistic requires 1 < A <= sqrt(2), got " +
                          std::to_string(A));
    const double k = solve_k(p);
    PenaltySpec s;
    s.kind = PenaltyKind::ProbabilisticBound;
    s.n = n;
    s.p = p;
    s.A = A;
    s.k_solution = k;
    s.value = A * normal_tail_level(static_cast<double>(n), k / static_cast<double>(p));
    return s;
}

PenaltySpec lambda_fixed(std::size_t n, std::size_t p, double lambda0)
{
    if (!(lambda0 >= 0.0) || !std::isfinite(lambda0))
        throw DomainError("fixed lambda0 must be a finite nonnegative number");
    PenaltySpec s;
    s.kind = PenaltyKind::Fixed;
    s.n = n;
    s.p = p;
    s.A = 1.0;
    s.value = lambda0;
    return s;
}

PenaltySpec resolve_penalty(PenaltyKind kind, std::size_t n, std::size_t p,
                            std::optional<double> A, std::optional<double> lambda0)
{
    switch (kind) {
    case PenaltyKind::Universal:
        return lambda_universal(n, p);
    case PenaltyKind::UnionBound:
        return lambda_union_bound(n, p, A.value_or(1.0));
    case PenaltyKind::ProbabilisticBound:
        return lambda_probabilistic(n, p, A.value_or(std::numbers::sqrt2));
    case PenaltyKind::Fixed:
        if (!lambda0)
            throw DomainError("rule 'fixed' requires lambda0");
        return lambda_fixed(n, p, *lambda0);
    }
    throw DomainError("unknown penalty kind");
}

} // namespace spmesl
