#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <sstream>
#include <vector>

#include "animfa/connectivity.hpp"
#include "animfa/core.hpp"
#include "animfa/responses.hpp"

namespace animfa {

/// Rates of the multigroup adaptive SIS system. Row i of beta is the
/// receiving community. Immutable once constructed.
class ModelParameters {
public:
    ModelParameters(std::vector<double> delta, Matrix beta, Matrix zeta, Matrix xi, Mask support)
        : delta_(std::move(delta)), beta_(std::move(beta)), zeta_(std::move(zeta)), xi_(std::move(xi)),
          support_(std::move(support))
    {
        validate();
    }

    /// All pairs supported.
    ModelParameters(std::vector<double> delta, Matrix beta, Matrix zeta, Matrix xi)
        : delta_(std::move(delta)), beta_(std::move(beta)), zeta_(std::move(zeta)), xi_(std::move(xi)),
          support_(full_mask(delta_.size()))
    {
        validate();
    }

    /// Homogeneous rates on the complete support.
    static ModelParameters homogeneous(std::size_t n, double delta, double beta, double zeta, double xi)
    {
        return ModelParameters(std::vector<double>(n, delta), Matrix(n, beta), Matrix(n, zeta), Matrix(n, xi));
    }

    std::size_t size() const noexcept { return delta_.size(); }
    const std::vector<double>& delta() const noexcept { return delta_; }
    const Matrix& beta() const noexcept { return beta_; }
    const Matrix& zeta() const noexcept { return zeta_; }
    const Matrix& xi() const noexcept { return xi_; }
    const Mask& support() const noexcept { return support_; }
    bool linked(std::size_t i, std::size_t j) const { return support_(i, j) != 0; }

private:
    void validate()
    {
        const std::size_t n = delta_.size();
        if (n == 0)
            throw Error("model parameters: n must be positive");
        if (beta_.size() != n || zeta_.size() != n || xi_.size() != n || support_.size() != n)
            throw Error("model parameters: all matrices must be " + std::to_string(n) + "x" + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (!(std::isfinite(delta_[i]) && delta_[i] > 0.0))
                throw Error("model parameters: delta_" + std::to_string(i + 1) + " must be > 0");
            support_(i, i) = 1;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double b = beta_(i, j);
                if (!(std::isfinite(b) && b >= 0.0))
                    throw Error("model parameters: beta" + pair_name(i, j) + " must be finite and >= 0");
                if (!linked(i, j)) {
                    if (b != 0.0)
                        throw Error("model parameters: beta" + pair_name(i, j) + " is nonzero off the support");
                    continue;
                }
                if (!(std::isfinite(zeta_(i, j)) && zeta_(i, j) > 0.0))
                    throw Error("model parameters: zeta" + pair_name(i, j) + " must be > 0");
                if (!(std::isfinite(xi_(i, j)) && xi_(i, j) > 0.0))
                    throw Error("model parameters: xi" + pair_name(i, j) + " must be > 0");
            }
        }
        if (!is_strongly_connected(beta_))
            throw Error("model parameters: infection-rate matrix is reducible (community graph not strongly connected)");
    }

    std::vector<double> delta_;
    Matrix beta_;
    Matrix zeta_;
    Matrix xi_;
    Mask support_;
};

/// Point (y, z) of the dynamical system.
struct State {
    std::vector<double> y;
    Matrix z;

    State() = default;
    State(std::vector<double> y_, Matrix z_) : y(std::move(y_)), z(std::move(z_)) {}
    State(std::size_t n, double y0, double z0) : y(n, y0), z(n, z0) {}

    std::size_t size() const noexcept { return y.size(); }
};

struct StateDerivative {
    std::vector<double> dy;
    Matrix dz;

    StateDerivative() = default;
    explicit StateDerivative(std::size_t n) : dy(n, 0.0), dz(n, 0.0) {}
};

/// Mean prevalence over all communities.
inline double global_prevalence(std::span<const double> y)
{
    if (y.empty())
        throw Error("global_prevalence: empty prevalence vector");
    return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
}

namespace detail {

[[noreturn]] inline void non_finite_response(const char* which, std::size_t i, std::size_t j, double y_i, double y_j,
                                             double ybar, double value)
{
    std::ostringstream os;
    os << which << " response at " << pair_name(i, j) << " returned " << value << " for y_i=" << y_i
       << " y_j=" << y_j << " ybar=" << ybar;
    throw Error(os.str());
}

} // namespace detail

/// Right-hand side of the system, written into `out` (resized as needed).
///
///   dy_i/dt  = -delta_i y_i + (1 - y_i) sum_j m(t) beta_ij y_j z_ij
///   dz_ij/dt = -zeta_ij z_ij f_br,ij(y_i, y_j, ybar) + xi_ij (1 - z_ij) f_cr,ij(y_i, y_j, ybar)
///
/// Off-support link densities have zero derivative.
inline void derivative_into(const State& state, double t, const ModelParameters& params,
                            const ResponseSet& responses, StateDerivative& out)
{
    const std::size_t n = params.size();
    if (state.y.size() != n || state.z.size() != n || responses.size() != n)
        throw Error("derivative: state, parameters and responses disagree on n");
    if (out.dy.size() != n || out.dz.size() != n)
        out = StateDerivative(n);

    const double m = eval_modulation(responses.modulation(), t);
    const double ybar = global_prevalence(state.y);
    const auto& y = state.y;

    for (std::size_t i = 0; i < n; ++i) {
        double force = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            force += params.beta()(i, j) * m * y[j] * state.z(i, j);
        out.dy[i] = -params.delta()[i] * y[i] + (1.0 - y[i]) * force;
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!params.linked(i, j)) {
                out.dz(i, j) = 0.0;
                continue;
            }
            const double br = eval_response(responses.breaking(i, j), y[i], y[j], ybar);
            if (!std::isfinite(br))
                detail::non_finite_response("breaking", i, j, y[i], y[j], ybar, br);
            const double cr = eval_response(responses.creation(i, j), y[i], y[j], ybar);
            if (!std::isfinite(cr))
                detail::non_finite_response("creation", i, j, y[i], y[j], ybar, cr);
            const double z = state.z(i, j);
            out.dz(i, j) = -params.zeta()(i, j) * z * br + params.xi()(i, j) * (1.0 - z) * cr;
        }
    }
}

inline StateDerivative derivative(const State& state, double t, const ModelParameters& params,
                                  const ResponseSet& responses)
{
    StateDerivative out(params.size());
    derivative_into(state, t, params, responses, out);
    return out;
}

/// Max-norm of a derivative over y and the supported z entries.
inline double max_norm(const StateDerivative& d)
{
    double r = 0.0;
    for (double v : d.dy)
        r = std::max(r, std::abs(v));
    for (double v : d.dz.data())
        r = std::max(r, std::abs(v));
    return r;
}

} // namespace animfa
