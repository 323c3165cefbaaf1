#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "animfa/core.hpp"
#include "animfa/model.hpp"
#include "animfa/responses.hpp"

namespace animfa {

enum class Method { forward_euler, runge_kutta4 };

struct SimulationConfig {
    double dt = 0.01;
    double t_end = 100.0;
    Method method = Method::forward_euler;
    /// Project every component onto [0,1] after each step.
    bool clamp = true;
    /// Record every k-th step (the final step is always recorded).
    std::size_t sample_stride = 1;
    bool record_z = true;
};

struct Trace {
    std::vector<double> times;
    std::vector<std::vector<double>> y_series;
    std::vector<Matrix> z_series; // empty when z was not recorded
    std::vector<double> ybar_series;
    Mask support;
    /// Largest distance outside [0,1] over every step; with clamping this is
    /// measured before projection.
    double max_excursion = 0.0;

    std::size_t samples() const noexcept { return times.size(); }
    std::size_t communities() const noexcept { return y_series.empty() ? support.size() : y_series.front().size(); }
    bool has_z() const noexcept { return !z_series.empty(); }
};

namespace detail {

inline void check_initial(const State& s, std::size_t n)
{
    if (s.y.size() != n || s.z.size() != n)
        throw Error("integrate: initial state has the wrong dimension");
    auto in_box = [](double v) { return v >= 0.0 && v <= 1.0; };
    for (double v : s.y)
        if (!in_box(v))
            throw Error("integrate: initial prevalence outside [0,1]");
    for (double v : s.z.data())
        if (!in_box(v))
            throw Error("integrate: initial link density outside [0,1]");
}

/// out = base + h * k
inline void step_state(const State& base, double h, const StateDerivative& k, State& out)
{
    for (std::size_t i = 0; i < base.y.size(); ++i)
        out.y[i] = base.y[i] + h * k.dy[i];
    const auto& bz = base.z.data();
    const auto& kz = k.dz.data();
    auto& oz = out.z.data();
    for (std::size_t m = 0; m < bz.size(); ++m)
        oz[m] = bz[m] + h * kz[m];
}

inline double excursion(const std::vector<double>& v)
{
    double e = 0.0;
    for (double x : v)
        e = std::max({e, -x, x - 1.0});
    return e;
}

inline double project(std::vector<double>& v)
{
    double excursion = 0.0;
    for (auto& x : v) {
        if (x < 0.0) {
            excursion = std::max(excursion, -x);
            x = 0.0;
        } else if (x > 1.0) {
            excursion = std::max(excursion, x - 1.0);
            x = 1.0;
        }
    }
    return excursion;
}

inline void check_finite(const State& s, double t)
{
    auto bad = [](double v) { return !std::isfinite(v); };
    if (std::any_of(s.y.begin(), s.y.end(), bad) || std::any_of(s.z.data().begin(), s.z.data().end(), bad)) {
        std::ostringstream os;
        os << "integrate: state diverged (non-finite) at t=" << t;
        throw Error(os.str());
    }
}

inline void record(Trace& trace, const State& s, double t, bool with_z)
{
    trace.times.push_back(t);
    trace.y_series.push_back(s.y);
    trace.ybar_series.push_back(global_prevalence(s.y));
    if (with_z)
        trace.z_series.push_back(s.z);
}

} // namespace detail

/// Fixed-step integration from t = 0 to config.t_end. Step k is taken at
/// t = k * dt; deterministic given its inputs.
inline Trace integrate(const State& initial, const ModelParameters& params, const ResponseSet& responses,
                       const SimulationConfig& config)
{
    const std::size_t n = params.size();
    if (!(config.dt > 0.0) || !(config.t_end > 0.0) || !(config.dt < config.t_end))
        throw Error("integrate: need 0 < dt < t_end");
    if (config.sample_stride == 0)
        throw Error("integrate: sample_stride must be >= 1");
    if (responses.size() != n)
        throw Error("integrate: responses and parameters disagree on n");
    detail::check_initial(initial, n);

    const auto steps = static_cast<std::size_t>(std::llround(config.t_end / config.dt));
    Trace trace;
    trace.support = params.support();
    const std::size_t expected = steps / config.sample_stride + 2;
    trace.times.reserve(expected);
    trace.y_series.reserve(expected);
    trace.ybar_series.reserve(expected);

    State x = initial;
    State tmp = initial;
    StateDerivative k1(n), k2(n), k3(n), k4(n);
    const double dt = config.dt;

    detail::record(trace, x, 0.0, config.record_z);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (config.method == Method::forward_euler) {
            derivative_into(x, t, params, responses, k1);
            detail::step_state(x, dt, k1, x);
        } else {
            derivative_into(x, t, params, responses, k1);
            detail::step_state(x, 0.5 * dt, k1, tmp);
            derivative_into(tmp, t + 0.5 * dt, params, responses, k2);
            detail::step_state(x, 0.5 * dt, k2, tmp);
            derivative_into(tmp, t + 0.5 * dt, params, responses, k3);
            detail::step_state(x, dt, k3, tmp);
            derivative_into(tmp, t + dt, params, responses, k4);
            const double h = dt / 6.0;
            for (std::size_t i = 0; i < n; ++i)
                x.y[i] += h * (k1.dy[i] + 2.0 * k2.dy[i] + 2.0 * k3.dy[i] + k4.dy[i]);
            auto& z = x.z.data();
            for (std::size_t m = 0; m < z.size(); ++m)
                z[m] += h * (k1.dz.data()[m] + 2.0 * k2.dz.data()[m] + 2.0 * k3.dz.data()[m] + k4.dz.data()[m]);
        }
        const double t_next = static_cast<double>(k + 1) * dt;
        detail::check_finite(x, t_next);
        if (config.clamp) {
            trace.max_excursion = std::max(trace.max_excursion, detail::project(x.y));
            trace.max_excursion = std::max(trace.max_excursion, detail::project(x.z.data()));
        } else {
            trace.max_excursion =
                std::max({trace.max_excursion, detail::excursion(x.y), detail::excursion(x.z.data())});
        }
        if ((k + 1) % config.sample_stride == 0 || k + 1 == steps)
            detail::record(trace, x, t_next, config.record_z);
    }
    return trace;
}

// ---------------------------------------------------------------------------
// Metrics

/// Largest prevalence over every sample and community.
inline double peak_prevalence(const Trace& trace)
{
    if (trace.y_series.empty())
        throw Error("peak_prevalence: empty trace");
    double peak = 0.0;
    for (const auto& y : trace.y_series)
        for (double v : y)
            peak = std::max(peak, v);
    return peak;
}

struct SteadyState {
    double ybar_inf = 0.0;
    bool converged = false;
};

/// Mean of the global prevalence over the trailing `window`. Converged when
/// the finite-difference slope stays below 1e-6 throughout that window.
inline SteadyState steady_state_prevalence(const Trace& trace, double window, double slope_tolerance = 1e-6)
{
    if (trace.samples() < 2)
        throw Error("steady_state_prevalence: trace needs at least two samples");
    const double t_end = trace.times.back();
    const double span = t_end - trace.times.front();
    if (!(window > 0.0) || 2.0 * window > span * (1.0 + 1e-12))
        throw Error("steady_state_prevalence: window must be positive and at most half the trace span");

    // Samples in the half-open window (t_end - window, t_end]; the small slack
    // keeps a sample that sits exactly on the left edge out despite rounding.
    const double step = span / static_cast<double>(trace.samples() - 1);
    const double left = t_end - window + 0.5 * step * 1e-6;
    std::size_t first = trace.samples() - 1;
    while (first > 0 && trace.times[first - 1] > left)
        --first;

    SteadyState s;
    double sum = 0.0;
    for (std::size_t k = first; k < trace.samples(); ++k)
        sum += trace.ybar_series[k];
    s.ybar_inf = sum / static_cast<double>(trace.samples() - first);

    double slope = 0.0;
    for (std::size_t k = std::max<std::size_t>(first, 1); k < trace.samples(); ++k) {
        const double dt = trace.times[k] - trace.times[k - 1];
        if (dt > 0.0)
            slope = std::max(slope, std::abs(trace.ybar_series[k] - trace.ybar_series[k - 1]) / dt);
    }
    s.converged = slope < slope_tolerance;
    return s;
}

struct LimitCycle {
    double period = 0.0;
    double amplitude = 0.0;
    std::size_t n_peaks = 0;
};

struct CycleDetection {
    double min_amplitude = 1e-3;
    double max_interval_cv = 0.05;
    std::size_t min_peaks = 3;
};

/// Periodic regime in the global prevalence after discarding the leading
/// `transient_fraction` of the time span. Requires at least three strict
/// local maxima, a peak-to-trough amplitude above 1e-3, and inter-peak
/// intervals with coefficient of variation below 0.05.
inline std::optional<LimitCycle> detect_limit_cycle(const Trace& trace, double transient_fraction = 0.5,
                                               const CycleDetection& gates = {})
{
    if (trace.samples() < 3)
        return std::nullopt;
    const double t0 = trace.times.front();
    const double cut = t0 + transient_fraction * (trace.times.back() - t0);
    std::size_t first = 0;
    while (first < trace.samples() && trace.times[first] < cut)
        ++first;
    if (trace.samples() - first < 3)
        return std::nullopt;

    const auto& v = trace.ybar_series;
    const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(first), v.end());
    const double amplitude = *hi - *lo;
    if (!(amplitude > gates.min_amplitude))
        return std::nullopt;

    std::vector<double> peaks;
    for (std::size_t k = first + 1; k + 1 < trace.samples(); ++k)
        if (v[k] > v[k - 1] && v[k] > v[k + 1])
            peaks.push_back(trace.times[k]);
    if (peaks.size() < gates.min_peaks)
        return std::nullopt;

    std::vector<double> intervals(peaks.size() - 1);
    for (std::size_t k = 1; k < peaks.size(); ++k)
        intervals[k - 1] = peaks[k] - peaks[k - 1];
    double mean = 0.0;
    for (double d : intervals)
        mean += d;
    mean /= static_cast<double>(intervals.size());
    double var = 0.0;
    for (double d : intervals)
        var += (d - mean) * (d - mean);
    var /= static_cast<double>(intervals.size());
    if (!(mean > 0.0) || std::sqrt(var) / mean >= gates.max_interval_cv)
        return std::nullopt;

    return LimitCycle{mean, amplitude, peaks.size()};
}

struct Metrics {
    double y_p = 0.0;
    double ybar_inf = 0.0;
    bool converged = false;
    std::optional<LimitCycle> cycle;
};

inline Metrics compute_metrics(const Trace& trace, double window, double transient_fraction = 0.5)
{
    Metrics m;
    m.y_p = peak_prevalence(trace);
    const auto s = steady_state_prevalence(trace, window);
    m.ybar_inf = s.ybar_inf;
    m.converged = s.converged;
    m.cycle = detect_limit_cycle(trace, transient_fraction);
    return m;
}

} // namespace animfa
