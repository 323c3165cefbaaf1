#include "catch_amalgamated.hpp"

#include <algorithm>
#include <vector>

#include "animfa/graph.hpp"

using namespace animfa;
using namespace animfa::topology;

namespace {

std::size_t degree(const Mask& m, std::size_t v)
{
    std::size_t d = 0;
    for (std::size_t u = 0; u < m.size(); ++u)
        d += (u != v && m(v, u)) ? 1 : 0;
    return d;
}

bool symmetric(const Mask& m)
{
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m(i, j) != m(j, i))
                return false;
    return true;
}

} // namespace

TEST_CASE("deterministic topologies", "[graph]")
{
    const Mask k3 = build_topology({Complete{3}});
    CHECK(k3 == full_mask(3));

    const Mask star = build_topology({Star{4}});
    CHECK(undirected_edge_count(star) == 3);
    CHECK(degree(star, 0) == 3);
    for (std::size_t v = 1; v < 4; ++v)
        CHECK(degree(star, v) == 1);

    const Mask bar = build_topology({Barbell{12}});
    CHECK(undirected_edge_count(bar) == 31);
    CHECK(bar(5, 6) == 1);
    CHECK(bar(0, 6) == 0);
    CHECK(symmetric(bar));

    const Mask cyc = build_topology({Cycle{5}});
    CHECK(undirected_edge_count(cyc) == 5);
    CHECK(cyc(4, 0) == 1);

    for (const Mask* m : {&k3, &star, &bar, &cyc})
        for (std::size_t i = 0; i < m->size(); ++i)
            CHECK((*m)(i, i) == 1);
}

TEST_CASE("topology errors", "[graph][errors]")
{
    CHECK_THROWS_AS(build_topology({Complete{1}}), Error);
    CHECK_THROWS_AS(build_topology({Barbell{7}}), Error);
    CHECK_THROWS_AS(build_topology({BarabasiAlbert{10, 2, 3}}), Error);
    CHECK_THROWS_AS(build_topology({BarabasiAlbert{3, 3, 2}}), Error);
    CHECK_THROWS_AS(build_topology({Cycle{2}}), Error);

    Mask split(4, 0);
    split(0, 1) = split(1, 0) = split(2, 3) = split(3, 2) = 1;
    CHECK_THROWS_WITH(build_topology({Custom{split}}), Catch::Matchers::ContainsSubstring("strongly connected"));
}

TEST_CASE("strong connectivity", "[graph]")
{
    Mask ring(3, 0);
    ring(0, 1) = ring(1, 2) = ring(2, 0) = 1;
    CHECK(is_strongly_connected(ring));

    Mask path = ring;
    path(2, 0) = 0;
    CHECK_FALSE(is_strongly_connected(path));
    std::size_t count = 0;
    strong_components(path, &count);
    CHECK(count == 3);

    // Self loops do not connect anything.
    Mask loops(2, 0);
    loops(0, 0) = loops(1, 1) = 1;
    CHECK_FALSE(is_strongly_connected(loops));
    CHECK(is_strongly_connected(Mask(1, 0)));
}

TEST_CASE("Barabasi-Albert edge count and connectivity", "[graph][property]")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 5 + seed % 60;
        const std::size_t m0 = 2 + seed % 4;
        const std::size_t m = 1 + seed % m0;
        const Mask g = build_topology({BarabasiAlbert{n, m0, m}, seed});
        CHECK(undirected_edge_count(g) == m0 * (m0 - 1) / 2 + m * (n - m0));
        CHECK(symmetric(g));
        CHECK(is_strongly_connected(g));
        for (std::size_t v = m0; v < n; ++v)
            CHECK(degree(g, v) >= m);
    }
}

TEST_CASE("Barabasi-Albert grows hubs", "[graph][property]")
{
    // Mean maximum degree over seeds should grow clearly with n.
    auto mean_max_degree = [](std::size_t n) {
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const Mask g = build_topology({BarabasiAlbert{n, 3, 2}, seed});
            std::size_t best = 0;
            for (std::size_t v = 0; v < n; ++v)
                best = std::max(best, degree(g, v));
            sum += static_cast<double>(best);
        }
        return sum / 40.0;
    };
    const double small = mean_max_degree(50);
    const double large = mean_max_degree(800);
    CHECK(large > 2.0 * small);
}

TEST_CASE("Barabasi-Albert is seed-deterministic", "[graph]")
{
    const TopologySpec spec{BarabasiAlbert{50, 3, 2}, 99};
    CHECK(build_topology(spec) == build_topology(spec));
    CHECK_FALSE(build_topology(spec) == build_topology({BarabasiAlbert{50, 3, 2}, 100}));
}

TEST_CASE("parameter sampling", "[graph]")
{
    const Mask support = build_topology({Star{5}});

    SECTION("degenerate uniform is exact")
    {
        ParameterDistribution d;
        d.beta = Uniform{1.0, 1.0};
        const auto p = sample_parameters(d, support, 1);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                CHECK(p.beta()(i, j) == (support(i, j) ? 1.0 : 0.0));
    }

    SECTION("same seed, same draw")
    {
        ParameterDistribution d{Uniform{0, 1}, Uniform{0, 1}, Uniform{0, 2}, Uniform{0, 1}};
        const auto a = sample_parameters(d, support, 42);
        const auto b = sample_parameters(d, support, 42);
        CHECK(a.delta() == b.delta());
        CHECK(a.beta() == b.beta());
        CHECK(a.zeta() == b.zeta());
        CHECK(a.xi() == b.xi());
        const auto c = sample_parameters(d, support, 43);
        CHECK_FALSE(a.beta() == c.beta());
    }

    SECTION("delta draws come first from the seeded stream")
    {
        ParameterDistribution d{Uniform{0, 1}, Uniform{0, 1}, Uniform{0, 1}, Uniform{0, 1}};
        const auto p = sample_parameters(d, support, 7);
        Rng rng(7);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(p.delta()[i] == rng.uniform(0.0, 1.0));
        CHECK(p.beta()(0, 0) == rng.uniform(0.0, 1.0));
    }

    SECTION("off-support rates are zero")
    {
        ParameterDistribution d{Uniform{0, 1}, Uniform{0, 1}, Uniform{0, 1}, Uniform{0, 1}};
        const auto p = sample_parameters(d, support, 3);
        CHECK(p.beta()(1, 2) == 0.0);
        CHECK(p.zeta()(1, 2) == 0.0);
        CHECK(p.beta()(0, 3) > 0.0);
    }

    SECTION("invalid distributions")
    {
        ParameterDistribution d;
        d.delta = Uniform{0.0, 0.0};
        CHECK_THROWS_AS(sample_parameters(d, support, 1), Error);
        d.delta = PointMass{-1.0};
        CHECK_THROWS_AS(sample_parameters(d, support, 1), Error);
        d.delta = Uniform{2.0, 1.0};
        CHECK_THROWS_AS(sample_parameters(d, support, 1), Error);
    }
}

TEST_CASE("uniform sampling has the right mean", "[graph][property]")
{
    ParameterDistribution d;
    d.beta = Uniform{0.0, 1.0};
    const auto p = sample_parameters(d, full_mask(100), 2024);
    double sum = 0.0;
    for (double v : p.beta().data()) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        sum += v;
    }
    CHECK(std::abs(sum / 1e4 - 0.5) < 0.02);
}

TEST_CASE("random number streams", "[rng]")
{
    CHECK(derive_seed(5, 0) != derive_seed(5, 1));
    CHECK(derive_seed(5, 0) != derive_seed(6, 0));
    CHECK(derive_seed(5, 3) == derive_seed(5, 3));

    Rng a(1), b(1);
    for (int k = 0; k < 100; ++k)
        CHECK(a.next() == b.next());

    Rng r(9);
    std::vector<int> hits(7, 0);
    for (int k = 0; k < 7000; ++k)
        ++hits[r.index(7)];
    for (int h : hits)
        CHECK(h > 800);
}
