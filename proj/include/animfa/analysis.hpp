#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "animfa/connectivity.hpp"
#include "animfa/core.hpp"
#include "animfa/model.hpp"
#include "animfa/responses.hpp"

namespace animfa {

/// Link densities at the disease-free equilibrium:
///   z_ij = xi f_cr(0) / (zeta f_br(0) + xi f_cr(0)).
/// Off-support entries are 0.
inline Matrix dfe_link_densities(const ModelParameters& params, const ResponseSet& responses)
{
    const std::size_t n = params.size();
    if (responses.size() != n)
        throw Error("dfe_link_densities: responses and parameters disagree on n");
    Matrix z(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!params.linked(i, j))
                continue;
            const double br = params.zeta()(i, j) * eval_response(responses.breaking(i, j), 0.0, 0.0, 0.0);
            const double cr = params.xi()(i, j) * eval_response(responses.creation(i, j), 0.0, 0.0, 0.0);
            if (!(br + cr > 0.0))
                throw Error("degenerate response at origin for pair " + pair_name(i, j) +
                            ": breaking and creation both vanish, the equilibrium link density is not unique");
            z(i, j) = cr / (br + cr);
        }
    }
    return z;
}

/// F_ij = beta_ij z_ij^DFE / delta_i
inline Matrix next_generation_matrix(const ModelParameters& params, const Matrix& z_dfe)
{
    const std::size_t n = params.size();
    Matrix f(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            f(i, j) = params.beta()(i, j) * z_dfe(i, j) / params.delta()[i];
    return f;
}

inline Matrix next_generation_matrix(const ModelParameters& params, const ResponseSet& responses)
{
    return next_generation_matrix(params, dfe_link_densities(params, responses));
}

struct PerronOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 100000;
};

namespace detail {

/// Perron root of an irreducible nonnegative block. Iterates with A + I,
/// which is primitive, so the iteration converges even for periodic
/// patterns such as ((0,2),(1,0)). Stops on the Collatz-Wielandt bracket
///   min_i (Ax)_i / x_i <= rho(A) <= max_i (Ax)_i / x_i.
inline double perron_root_irreducible(const Matrix& a, const PerronOptions& opt)
{
    const std::size_t n = a.size();
    std::vector<double> x(n, 1.0), ax(n);
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                s += a(i, j) * x[j];
            ax[i] = s;
            const double r = s / x[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        const double tol = std::max(opt.tolerance, 8.0 * std::numeric_limits<double>::epsilon() * hi);
        if (hi - lo <= tol)
            return 0.5 * (lo + hi);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += ax[i];
            scale = std::max(scale, x[i]);
        }
        for (auto& v : x)
            v /= scale;
    }
    std::ostringstream os;
    os << "spectral_radius: no convergence after " << opt.max_iterations << " iterations (n=" << n
       << ", bracket [" << lo << ", " << hi << "])";
    throw Error(os.str());
}

} // namespace detail

/// Spectral radius of a nonnegative matrix. Reducible matrices are split
/// into strongly connected components and the largest component root wins.
inline double spectral_radius(const Matrix& a, const PerronOptions& opt = {})
{
    const std::size_t n = a.size();
    if (n == 0)
        throw Error("spectral_radius: empty matrix");
    for (double v : a.data())
        if (!(std::isfinite(v) && v >= 0.0))
            throw Error("spectral_radius: matrix must be finite and nonnegative");

    std::size_t count = 0;
    const auto comp = strong_components(a, &count);
    double rho = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<std::size_t> nodes;
        for (std::size_t i = 0; i < n; ++i)
            if (comp[i] == c)
                nodes.push_back(i);
        if (nodes.size() == 1) {
            rho = std::max(rho, a(nodes[0], nodes[0]));
            continue;
        }
        Matrix block(nodes.size());
        for (std::size_t r = 0; r < nodes.size(); ++r)
            for (std::size_t s = 0; s < nodes.size(); ++s)
                block(r, s) = a(nodes[r], nodes[s]);
        rho = std::max(rho, detail::perron_root_irreducible(block, opt));
    }
    return rho;
}

struct NgmResult {
    Matrix z_dfe;
    Matrix f;
    double r0 = 0.0;
};

inline NgmResult basic_reproduction_number(const ModelParameters& params, const ResponseSet& responses)
{
    NgmResult r;
    r.z_dfe = dfe_link_densities(params, responses);
    r.f = next_generation_matrix(params, r.z_dfe);
    r.r0 = spectral_radius(r.f);
    return r;
}

/// Closed form for fully homogeneous rates and responses:
///   R0 = n (beta / delta) xi f_cr(0) / (zeta f_br(0) + xi f_cr(0)).
inline double homogeneous_r0(std::size_t n, double beta, double delta, double zeta, double xi, double f_br0,
                             double f_cr0)
{
    if (n == 0 || !(delta > 0.0) || !(beta >= 0.0) || !(zeta > 0.0) || !(xi > 0.0))
        throw Error("homogeneous_r0: need n >= 1, delta, zeta, xi > 0 and beta >= 0");
    if (!(f_br0 >= 0.0 && f_cr0 >= 0.0))
        throw Error("homogeneous_r0: responses at the origin must be >= 0");
    const double den = zeta * f_br0 + xi * f_cr0;
    if (!(den > 0.0))
        throw Error("degenerate response at origin: breaking and creation both vanish");
    return static_cast<double>(n) * (beta / delta) * (xi * f_cr0 / den);
}

/// Sufficient condition for an endemic equilibrium: the smallest row sum or
/// the smallest column sum of F exceeds 1.
struct EndemicCondition {
    double min_row_sum = 0.0;
    double min_col_sum = 0.0;
    bool holds = false;
};

inline EndemicCondition endemic_existence_condition(const Matrix& f)
{
    const std::size_t n = f.size();
    EndemicCondition c;
    c.min_row_sum = c.min_col_sum = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += f(i, j);
            col += f(j, i);
        }
        c.min_row_sum = std::min(c.min_row_sum, row);
        c.min_col_sum = std::min(c.min_col_sum, col);
    }
    c.holds = c.min_row_sum > 1.0 || c.min_col_sum > 1.0;
    return c;
}

// ---------------------------------------------------------------------------

enum class EquilibriumKind { disease_free, endemic, not_found };

inline const char* to_string(EquilibriumKind k)
{
    switch (k) {
    case EquilibriumKind::disease_free: return "DFE";
    case EquilibriumKind::endemic: return "Endemic";
    case EquilibriumKind::not_found: return "NotFound";
    }
    return "?";
}

struct EquilibriumOptions {
    double start = 0.5;
    double damping = 0.5;
    double update_tolerance = 1e-12;
    std::size_t max_iterations = 100000;
    double positivity_threshold = 1e-8;
    double residual_tolerance = 1e-9;
};

struct EquilibriumResult {
    std::vector<double> y_star;
    Matrix z_star;
    double residual = 0.0;
    std::size_t iterations = 0;
    EquilibriumKind kind = EquilibriumKind::not_found;
};

/// Link densities that balance breaking and creation at prevalence y.
inline Matrix equilibrium_link_densities(const std::vector<double>& y, const ModelParameters& params,
                                         const ResponseSet& responses)
{
    const std::size_t n = params.size();
    const double ybar = global_prevalence(y);
    Matrix z(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!params.linked(i, j))
                continue;
            const double br = params.zeta()(i, j) * eval_response(responses.breaking(i, j), y[i], y[j], ybar);
            const double cr = params.xi()(i, j) * eval_response(responses.creation(i, j), y[i], y[j], ybar);
            if (!(br + cr > 0.0))
                throw Error("equilibrium link density undefined at pair " + pair_name(i, j) +
                            ": breaking and creation both vanish");
            z(i, j) = cr / (br + cr);
        }
    return z;
}

/// Damped fixed-point iteration on y_i <- s_i / (delta_i + s_i), where
/// s_i = sum_j beta_ij y_j z*_ij(y) and z* balances the link dynamics.
/// Reports whatever equilibrium the iteration reaches from `start`; no
/// uniqueness is implied. Seasonal modulation is ignored (m = 1).
inline EquilibriumResult solve_endemic_equilibrium(const ModelParameters& params, const ResponseSet& responses,
                                                   const EquilibriumOptions& opt = {})
{
    if (!responses.all_continuous())
        throw Error("solve_endemic_equilibrium: discontinuous (threshold) responses are not supported; "
                    "use a smooth threshold instead");
    const std::size_t n = params.size();
    const ResponseSet steady = responses.with_modulation(modulation::Identity{});

    EquilibriumResult r;
    std::vector<double> y(n, opt.start), next(n);
    bool converged = false;
    for (r.iterations = 0; r.iterations < opt.max_iterations && !converged; ++r.iterations) {
        const Matrix z = equilibrium_link_densities(y, params, steady);
        double update = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                s += params.beta()(i, j) * y[j] * z(i, j);
            const double g = s / (params.delta()[i] + s);
            next[i] = y[i] + opt.damping * (g - y[i]);
            update = std::max(update, std::abs(next[i] - y[i]));
        }
        y.swap(next);
        converged = update < opt.update_tolerance;
    }

    r.z_star = equilibrium_link_densities(y, params, steady);
    r.residual = max_norm(derivative(State(y, r.z_star), 0.0, params, steady));
    const double y_min = *std::min_element(y.begin(), y.end());
    const double y_max = *std::max_element(y.begin(), y.end());
    if (y_max < opt.positivity_threshold)
        r.kind = EquilibriumKind::disease_free;
    else if (y_min > opt.positivity_threshold && r.residual < opt.residual_tolerance)
        r.kind = EquilibriumKind::endemic;
    else
        r.kind = EquilibriumKind::not_found;
    r.y_star = std::move(y);
    return r;
}

} // namespace animfa
