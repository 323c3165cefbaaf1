#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>

#include "animfa/core.hpp"

namespace animfa {

/// Which prevalence a threshold response looks at.
enum class Argument { local, neighbor, global }; // y_i, y_j, ybar

/// at_most: 1{x <= a} (closed at a). above: 1{x > a}. The pair sums to 1.
enum class Direction { at_most, above };

namespace response {

struct Constant {
    double value = 0.0;
};

/// y_i^p * y_j^q
struct Product {
    int p = 1;
    int q = 1;
};

/// 1 - y_i^p * y_j^q
struct OneMinusProduct {
    int p = 1;
    int q = 1;
};

struct Threshold {
    Argument argument = Argument::local;
    double a = 0.5;
    Direction direction = Direction::above;
};

/// C^1 replacement for Threshold built from smooth_indicator().
struct SmoothThreshold {
    Argument argument = Argument::local;
    double a = 0.5;
    int k = 2;
    Direction direction = Direction::above;
};

/// c * y_i^p y_j^q, or (1/c) * y_i^p y_j^q when `inverse` is set.
struct ScaledProduct {
    double c = 1.0;
    bool inverse = false;
    int p = 1;
    int q = 1;
};

/// c * y_i^p y_j^q + (1 - c) * ybar^global_exponent
struct LocalGlobalBlend {
    double c = 1.0;
    int p = 1;
    int q = 1;
    int global_exponent = 2;
};

} // namespace response

using ResponseSpec = std::variant<response::Constant, response::Product, response::OneMinusProduct,
                                  response::Threshold, response::SmoothThreshold, response::ScaledProduct,
                                  response::LocalGlobalBlend>;

namespace detail {

inline double ipow(double x, int e) noexcept
{
    double r = 1.0;
    for (int k = 0; k < e; ++k)
        r *= x;
    return r;
}

inline double select(Argument arg, double y_i, double y_j, double ybar) noexcept
{
    switch (arg) {
    case Argument::local: return y_i;
    case Argument::neighbor: return y_j;
    case Argument::global: return ybar;
    }
    return y_i;
}

inline void require(bool ok, const std::string& what)
{
    if (!ok)
        throw Error("invalid response: " + what);
}

inline void check_exponents(int p, int q)
{
    require(p >= 0 && q >= 0, "exponents must be non-negative, got p=" + std::to_string(p) + " q=" +
                                  std::to_string(q));
}

} // namespace detail

/// Smooth approximation of the indicator of [a, 1]:
///   f(x) = 1 / (1 + (x^(ln 2 / ln a) - 1)^k),   k even.
/// f(a) = 1/2, f(1) = 1, and f(0) = 0 by continuous extension.
inline double smooth_indicator(double x, double a, int k)
{
    if (!(a > 0.0 && a < 1.0))
        throw Error("smooth_indicator: threshold a must lie in (0,1), got " + std::to_string(a));
    if (k < 2 || k % 2 != 0)
        throw Error("smooth_indicator: k must be an even integer >= 2, got " + std::to_string(k));
    if (x <= 0.0)
        return 0.0;
    const double exponent = std::log(2.0) / std::log(a);
    const double base = std::pow(x, exponent) - 1.0;
    return 1.0 / (1.0 + detail::ipow(base, k));
}

/// Throws Error when a spec's parameters fall outside its family's domain.
inline void validate(const ResponseSpec& spec)
{
    using namespace response;
    std::visit(
        [](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Constant>) {
                detail::require(std::isfinite(s.value) && s.value >= 0.0, "constant must be finite and >= 0");
            } else if constexpr (std::is_same_v<S, Product> || std::is_same_v<S, OneMinusProduct>) {
                detail::check_exponents(s.p, s.q);
            } else if constexpr (std::is_same_v<S, Threshold>) {
                detail::require(s.a > 0.0 && s.a < 1.0, "threshold a must lie in (0,1)");
            } else if constexpr (std::is_same_v<S, SmoothThreshold>) {
                detail::require(s.a > 0.0 && s.a < 1.0, "smooth threshold a must lie in (0,1)");
                detail::require(s.k >= 2 && s.k % 2 == 0, "smooth threshold k must be even and >= 2");
            } else if constexpr (std::is_same_v<S, ScaledProduct>) {
                detail::require(std::isfinite(s.c) && s.c > 0.0, "scaled product c must be > 0");
                detail::check_exponents(s.p, s.q);
            } else if constexpr (std::is_same_v<S, LocalGlobalBlend>) {
                detail::require(s.c >= 0.0 && s.c <= 1.0, "blend c must lie in [0,1]");
                detail::check_exponents(s.p, s.q);
                detail::require(s.global_exponent >= 0, "blend global exponent must be >= 0");
            }
        },
        spec);
}

inline double eval_response(const ResponseSpec& spec, double y_i, double y_j, double ybar)
{
    using namespace response;
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Constant>) {
                return s.value;
            } else if constexpr (std::is_same_v<S, Product>) {
                return detail::ipow(y_i, s.p) * detail::ipow(y_j, s.q);
            } else if constexpr (std::is_same_v<S, OneMinusProduct>) {
                return 1.0 - detail::ipow(y_i, s.p) * detail::ipow(y_j, s.q);
            } else if constexpr (std::is_same_v<S, Threshold>) {
                const double x = detail::select(s.argument, y_i, y_j, ybar);
                const bool at_most = x <= s.a;
                return (s.direction == Direction::at_most) == at_most ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<S, SmoothThreshold>) {
                const double f = smooth_indicator(detail::select(s.argument, y_i, y_j, ybar), s.a, s.k);
                return s.direction == Direction::above ? f : 1.0 - f;
            } else if constexpr (std::is_same_v<S, ScaledProduct>) {
                const double scale = s.inverse ? 1.0 / s.c : s.c;
                return scale * detail::ipow(y_i, s.p) * detail::ipow(y_j, s.q);
            } else {
                return s.c * detail::ipow(y_i, s.p) * detail::ipow(y_j, s.q) +
                       (1.0 - s.c) * detail::ipow(ybar, s.global_exponent);
            }
        },
        spec);
}

inline bool is_continuous(const ResponseSpec& spec) noexcept
{
    return !std::holds_alternative<response::Threshold>(spec);
}

/// Family parameter `c`, when the family has one.
inline bool has_balance(const ResponseSpec& spec) noexcept
{
    return std::holds_alternative<response::ScaledProduct>(spec) ||
           std::holds_alternative<response::LocalGlobalBlend>(spec);
}

inline void set_balance(ResponseSpec& spec, double c)
{
    if (auto* s = std::get_if<response::ScaledProduct>(&spec))
        s->c = c;
    else if (auto* b = std::get_if<response::LocalGlobalBlend>(&spec))
        b->c = c;
}

// ---------------------------------------------------------------------------
// Time modulation of the infection rates

namespace modulation {
struct Identity {};
/// sin^2(pi t / T)
struct SineSquared {
    double period = 1.0;
};
/// 1 on [0, T/2), 0 on [T/2, T), repeated.
struct BlockWave {
    double period = 1.0;
};
/// Period average of the two waves above.
struct ConstantHalf {};
} // namespace modulation

using TimeModulation =
    std::variant<modulation::Identity, modulation::SineSquared, modulation::BlockWave, modulation::ConstantHalf>;

/// Raw square wave 4 floor(t/T) - 2 floor(2t/T) + 1, with values in {+1, -1}.
inline double block_wave_raw(double t, double period)
{
    return 4.0 * std::floor(t / period) - 2.0 * std::floor(2.0 * t / period) + 1.0;
}

inline void validate(const TimeModulation& m)
{
    std::visit(
        [](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, modulation::SineSquared> || std::is_same_v<S, modulation::BlockWave>) {
                if (!(std::isfinite(s.period) && s.period > 0.0))
                    throw Error("modulation period must be > 0, got " + std::to_string(s.period));
            }
        },
        m);
}

/// Modulation value in [0,1]. The phase is reduced with fmod (exact), so the
/// periodic variants satisfy m(t) == m(t + T) whenever t + T is representable.
inline double eval_modulation(const TimeModulation& m, double t)
{
    return std::visit(
        [t](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, modulation::Identity>) {
                return 1.0;
            } else if constexpr (std::is_same_v<S, modulation::ConstantHalf>) {
                return 0.5;
            } else if constexpr (std::is_same_v<S, modulation::SineSquared>) {
                const double phase = std::fmod(t, s.period);
                const double v = std::sin(std::numbers::pi * phase / s.period);
                return v * v;
            } else {
                const double phase = std::fmod(t, s.period);
                return phase < 0.5 * s.period ? 1.0 : 0.0;
            }
        },
        m);
}

/// Period of the modulation, or 0 for the constant ones.
inline double modulation_period(const TimeModulation& m) noexcept
{
    if (const auto* s = std::get_if<modulation::SineSquared>(&m))
        return s->period;
    if (const auto* b = std::get_if<modulation::BlockWave>(&m))
        return b->period;
    return 0.0;
}

inline void set_period(TimeModulation& m, double period)
{
    if (auto* s = std::get_if<modulation::SineSquared>(&m))
        s->period = period;
    else if (auto* b = std::get_if<modulation::BlockWave>(&m))
        b->period = period;
    else
        throw Error("cannot set a period on a non-periodic modulation");
    validate(m);
}

// ---------------------------------------------------------------------------

/// Breaking and creation responses for every ordered pair, plus the scalar
/// modulation applied to the whole infection-rate matrix.
class ResponseSet {
public:
    ResponseSet(SquareMatrix<ResponseSpec> breaking, SquareMatrix<ResponseSpec> creation,
                TimeModulation modulation = modulation::Identity{})
        : breaking_(std::move(breaking)), creation_(std::move(creation)), modulation_(modulation)
    {
        if (breaking_.size() == 0 || breaking_.size() != creation_.size())
            throw Error("response set: breaking and creation matrices must be non-empty and equally sized");
        for (const auto& s : breaking_.data())
            validate(s);
        for (const auto& s : creation_.data())
            validate(s);
        validate(modulation_);
    }

    /// Same response on every diagonal pair and another on every off-diagonal pair.
    static ResponseSet uniform(std::size_t n, const ResponseSpec& breaking_within,
                               const ResponseSpec& breaking_between, const ResponseSpec& creation_within,
                               const ResponseSpec& creation_between, TimeModulation modulation = modulation::Identity{})
    {
        SquareMatrix<ResponseSpec> br(n, breaking_between);
        SquareMatrix<ResponseSpec> cr(n, creation_between);
        for (std::size_t i = 0; i < n; ++i) {
            br(i, i) = breaking_within;
            cr(i, i) = creation_within;
        }
        return ResponseSet(std::move(br), std::move(cr), modulation);
    }

    std::size_t size() const noexcept { return breaking_.size(); }
    const SquareMatrix<ResponseSpec>& breaking() const noexcept { return breaking_; }
    const SquareMatrix<ResponseSpec>& creation() const noexcept { return creation_; }
    const TimeModulation& modulation() const noexcept { return modulation_; }

    const ResponseSpec& breaking(std::size_t i, std::size_t j) const { return breaking_(i, j); }
    const ResponseSpec& creation(std::size_t i, std::size_t j) const { return creation_(i, j); }

    bool all_continuous() const noexcept
    {
        for (std::size_t k = 0; k < breaking_.data().size(); ++k)
            if (!is_continuous(breaking_.data()[k]) || !is_continuous(creation_.data()[k]))
                return false;
        return true;
    }

    ResponseSet with_modulation(TimeModulation m) const { return ResponseSet(breaking_, creation_, m); }

    /// Copy with every c-parameterised response set to `c`.
    ResponseSet with_balance(double c) const
    {
        auto br = breaking_;
        auto cr = creation_;
        for (auto& s : br.data())
            set_balance(s, c);
        for (auto& s : cr.data())
            set_balance(s, c);
        return ResponseSet(std::move(br), std::move(cr), modulation_);
    }

private:
    SquareMatrix<ResponseSpec> breaking_;
    SquareMatrix<ResponseSpec> creation_;
    TimeModulation modulation_;
};

} // namespace animfa
