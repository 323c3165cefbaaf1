#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "animfa/connectivity.hpp"
#include "animfa/core.hpp"
#include "animfa/model.hpp"
#include "animfa/rng.hpp"

namespace animfa {

namespace topology {
struct Complete {
    std::size_t n = 2;
};
/// Node 1 (index 0) is the hub.
struct Star {
    std::size_t n = 2;
};
/// Each node linked to its two nearest neighbours.
struct Cycle {
    std::size_t n = 3;
};
/// Two cliques on n/2 nodes joined by one edge between nodes n/2 and n/2 + 1 (1-based).
struct Barbell {
    std::size_t n = 4;
};
/// m0-clique seed, then n - m0 nodes attached preferentially with m edges each.
struct BarabasiAlbert {
    std::size_t n = 4;
    std::size_t m0 = 2;
    std::size_t m = 1;
};
struct Custom {
    Mask mask;
};
} // namespace topology

using TopologyKind = std::variant<topology::Complete, topology::Star, topology::Cycle, topology::Barbell,
                                  topology::BarabasiAlbert, topology::Custom>;

struct TopologySpec {
    TopologyKind kind;
    std::uint64_t seed = 0;
};

namespace detail {

inline void link(Mask& m, std::size_t a, std::size_t b)
{
    m(a, b) = 1;
    m(b, a) = 1;
}

inline Mask empty_graph(std::size_t n)
{
    if (n < 2)
        throw Error("topology: n must be >= 2, got " + std::to_string(n));
    Mask m(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

inline Mask barabasi_albert(const topology::BarabasiAlbert& ba, std::uint64_t seed)
{
    if (!(ba.m >= 1 && ba.m <= ba.m0 && ba.m0 < ba.n))
        throw Error("topology: Barabasi-Albert requires 1 <= m <= m0 < n, got n=" + std::to_string(ba.n) +
                    " m0=" + std::to_string(ba.m0) + " m=" + std::to_string(ba.m));
    Mask g = empty_graph(ba.n);
    // Every edge endpoint once; sampling an entry is sampling proportional to degree.
    std::vector<std::size_t> endpoints;
    for (std::size_t a = 0; a < ba.m0; ++a)
        for (std::size_t b = a + 1; b < ba.m0; ++b) {
            link(g, a, b);
            endpoints.push_back(a);
            endpoints.push_back(b);
        }
    Rng rng(seed);
    std::vector<std::size_t> targets;
    for (std::size_t v = ba.m0; v < ba.n; ++v) {
        targets.clear();
        while (targets.size() < ba.m) {
            // A single-node seed has no edges yet; fall back to uniform choice.
            const std::size_t t = endpoints.empty() ? rng.index(v) : endpoints[rng.index(endpoints.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        for (std::size_t t : targets) {
            link(g, v, t);
            endpoints.push_back(v);
            endpoints.push_back(t);
        }
    }
    return g;
}

} // namespace detail

/// Support mask of the community graph; diagonal always set.
inline Mask build_topology(const TopologySpec& spec)
{
    using namespace topology;
    Mask g = std::visit(
        [&](const auto& k) -> Mask {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Complete>) {
                detail::empty_graph(k.n);
                return full_mask(k.n);
            } else if constexpr (std::is_same_v<K, Star>) {
                Mask m = detail::empty_graph(k.n);
                for (std::size_t v = 1; v < k.n; ++v)
                    detail::link(m, 0, v);
                return m;
            } else if constexpr (std::is_same_v<K, Cycle>) {
                if (k.n < 3)
                    throw Error("topology: cycle needs n >= 3");
                Mask m = detail::empty_graph(k.n);
                for (std::size_t v = 0; v < k.n; ++v)
                    detail::link(m, v, (v + 1) % k.n);
                return m;
            } else if constexpr (std::is_same_v<K, Barbell>) {
                if (k.n % 2 != 0 || k.n < 4)
                    throw Error("topology: Barbell needs an even n >= 4, got " + std::to_string(k.n));
                Mask m = detail::empty_graph(k.n);
                const std::size_t h = k.n / 2;
                for (std::size_t a = 0; a < k.n; ++a)
                    for (std::size_t b = a + 1; b < k.n; ++b)
                        if ((a < h) == (b < h))
                            detail::link(m, a, b);
                detail::link(m, h - 1, h);
                return m;
            } else if constexpr (std::is_same_v<K, BarabasiAlbert>) {
                return detail::barabasi_albert(k, spec.seed);
            } else {
                Mask m = k.mask;
                if (m.size() == 0)
                    throw Error("topology: custom mask is empty");
                for (std::size_t i = 0; i < m.size(); ++i)
                    m(i, i) = 1;
                for (std::size_t i = 0; i < m.size(); ++i)
                    for (std::size_t j = 0; j < m.size(); ++j)
                        if (m(i, j))
                            m(i, j) = 1;
                return m;
            }
        },
        spec.kind);
    if (!is_strongly_connected(g))
        throw Error("topology: community graph is not strongly connected");
    return g;
}

/// Number of undirected off-diagonal edges, assuming a symmetric pattern.
inline std::size_t undirected_edge_count(const Mask& m)
{
    std::size_t count = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (m(i, j) || m(j, i))
                ++count;
    return count;
}

// ---------------------------------------------------------------------------

struct PointMass {
    double value = 1.0;
};
struct Uniform {
    double a = 0.0;
    double b = 1.0;
};
using Distribution = std::variant<PointMass, Uniform>;

struct ParameterDistribution {
    Distribution delta = PointMass{1.0};
    Distribution beta = PointMass{1.0};
    Distribution zeta = PointMass{1.0};
    Distribution xi = PointMass{1.0};
};

namespace detail {

inline void check_positive(const Distribution& d, const char* name)
{
    const bool ok = std::visit(
        [](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, PointMass>)
                return std::isfinite(v.value) && v.value > 0.0;
            else
                return std::isfinite(v.a) && std::isfinite(v.b) && v.a >= 0.0 && v.a <= v.b && v.b > 0.0;
        },
        d);
    if (!ok)
        throw Error(std::string("distribution for ") + name +
                    ": need a finite point mass > 0 or Uniform(a, b) with 0 <= a <= b, b > 0");
}

/// Draws from `d`, redrawing exact zeros so rates stay strictly positive.
inline double draw_positive(const Distribution& d, Rng& rng)
{
    if (const auto* p = std::get_if<PointMass>(&d))
        return p->value;
    const auto& u = std::get<Uniform>(d);
    double v;
    do {
        v = rng.uniform(u.a, u.b);
    } while (v == 0.0);
    return v;
}

} // namespace detail

/// Independent draws per node and per supported ordered pair. Draw order is
/// fixed: delta_1..delta_n, then beta, zeta, xi each row-major over the support.
inline ModelParameters sample_parameters(const ParameterDistribution& dists, const Mask& support, std::uint64_t seed)
{
    detail::check_positive(dists.delta, "delta");
    detail::check_positive(dists.beta, "beta");
    detail::check_positive(dists.zeta, "zeta");
    detail::check_positive(dists.xi, "xi");

    const std::size_t n = support.size();
    Rng rng(seed);
    std::vector<double> delta(n);
    for (auto& d : delta)
        d = detail::draw_positive(dists.delta, rng);

    auto fill = [&](const Distribution& d) {
        Matrix m(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (support(i, j) || i == j)
                    m(i, j) = detail::draw_positive(d, rng);
        return m;
    };
    Matrix beta = fill(dists.beta);
    Matrix zeta = fill(dists.zeta);
    Matrix xi = fill(dists.xi);
    return ModelParameters(std::move(delta), std::move(beta), std::move(zeta), std::move(xi), support);
}

} // namespace animfa
