#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"

#include "foldcast/dual.hpp"
#include "foldcast/models/smoothing.hpp"
#include "foldcast/optimize.hpp"
#include "oracles.hpp"

using namespace foldcast;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Lets the compiler drop the unreachable low-arity instantiations.
template <class T>
void require_arity(std::span<const T> p, std::size_t n) {
    if (p.size() != n) throw ConfigError("objective arity");
}

}  // namespace

TEST_CASE("dual arithmetic carries exact derivatives") {
    const auto x = Dual<2>::variable(3.0, 0);
    const auto y = Dual<2>::variable(2.0, 1);
    const auto f = x * x * y + 1.0 / y - x;
    CHECK(f.value() == 9.0 * 2.0 + 0.5 - 3.0);
    CHECK(f.tangent(0) == 2.0 * 3.0 * 2.0 - 1.0);
    CHECK(f.tangent(1) == 9.0 - 0.25);

    const auto g = log(x) + exp(y) + sqrt(x);
    CHECK_THAT(g.tangent(0), WithinRel(1.0 / 3.0 + 0.5 / std::sqrt(3.0), 1e-15));
    CHECK_THAT(g.tangent(1), WithinRel(std::exp(2.0), 1e-15));
}

TEST_CASE("grad of a quadratic") {
    auto f = []<class T>(std::span<const T> p) { return p[0] * p[0]; };
    const auto r = grad(f, std::vector<double>{3.0});
    CHECK(r.value == 9.0);
    CHECK(r.gradient == std::vector<double>{6.0});
}

TEST_CASE("grad of a constant is zero") {
    auto f = []<class T>(std::span<const T>) { return T(4.0); };
    const auto r = grad(f, std::vector<double>{1.0, -2.0, 0.5});
    CHECK(r.value == 4.0);
    CHECK(r.gradient == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("grad is linear") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    auto f = []<class T>(std::span<const T> p) {
        require_arity(p, 3);
        using std::log;
        return p[0] * p[1] + log(p[2]) * p[0];
    };
    auto g = []<class T>(std::span<const T> p) {
        require_arity(p, 3);
        using std::exp;
        return exp(p[1]) - p[2] * p[2] * p[0];
    };
    for (int i = 0; i < 50; ++i) {
        const double a = u(rng), b = u(rng);
        const std::vector<double> x{u(rng), u(rng), u(rng)};
        auto h = [&]<class T>(std::span<const T> p) { return a * f(p) + b * g(p); };
        const auto gh = grad(h, x);
        const auto gf = grad(f, x);
        const auto gg = grad(g, x);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK_THAT(gh.gradient[k], WithinAbs(a * gf.gradient[k] + b * gg.gradient[k], 1e-10));
        }
    }
}

TEST_CASE("grad rejects too many parameters and non-finite values") {
    auto f = []<class T>(std::span<const T> p) { return p[0]; };
    CHECK_THROWS_AS(grad(f, std::vector<double>(7, 1.0)), ConfigError);
    auto bad = []<class T>(std::span<const T> p) {
        require_arity(p, 2);
        using std::log;
        return log(p[1]) + p[0];
    };
    CHECK_THROWS_AS(grad(bad, std::vector<double>{1.0, -1.0}), EvaluationError);
    // At zero the derivative blows up too, which pins down the parameter.
    try {
        grad(bad, std::vector<double>{1.0, 0.0});
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(e.parameter_index() == 1);
    }
}

TEST_CASE("Holt-Winters SSE gradient matches central differences") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> interior(0.05, 0.95);
    for (int i = 0; i < 20; ++i) {
        const auto y = oracle::positive_seasonal(rng, 48, 12);
        const auto init = models::initial_state(models::SmoothingKind::HoltWinters, y, 12);
        auto sse = [&]<class T>(std::span<const T> p) {
            require_arity(p, 3);
            return models::sse_objective<T>(models::SmoothingKind::HoltWinters, {p[0], p[1], p[2]}, init, y);
        };
        const std::vector<double> x{interior(rng), interior(rng), interior(rng)};
        const auto g = grad(sse, x);
        for (std::size_t k = 0; k < 3; ++k) {
            auto up = x, down = x;
            up[k] += 1e-6;
            down[k] -= 1e-6;
            const double fd = (sse(std::span<const double>(up)) - sse(std::span<const double>(down))) / 2e-6;
            CHECK_THAT(g.gradient[k], WithinRel(fd, 1e-4));
        }
    }
}

TEST_CASE("minimize finds a 1-d optimum") {
    auto f = []<class T>(std::span<const T> p) { return (p[0] - 0.3) * (p[0] - 0.3); };
    const auto m = minimize(f, {0.5}, std::vector<Bound>{{0.0, 1.0}});
    CHECK_THAT(m.params[0], WithinAbs(0.3, 1e-4));
    CHECK(m.converged);
}

TEST_CASE("minimize does not move away from an optimum") {
    auto f = []<class T>(std::span<const T> p) { return (p[0] - 0.3) * (p[0] - 0.3) + 2.0; };
    const auto m = minimize(f, {0.3}, std::vector<Bound>{{0.0, 1.0}});
    CHECK(m.value == 2.0);
    CHECK(m.params[0] == 0.3);
}

TEST_CASE("minimize respects bounds and never increases the objective") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double c0 = u(rng), c1 = u(rng);
        auto f = [&]<class T>(std::span<const T> p) {
            require_arity(p, 2);
            return (p[0] - c0) * (p[0] - c0) + 3.0 * (p[1] - c1) * (p[1] - c1) + p[0] * p[1];
        };
        const std::vector<Bound> bounds{{-1.0, 1.0}, {0.0, 2.0}};
        const std::vector<double> init{0.0, 1.0};
        const double start = f(std::span<const double>(init));
        const auto m = minimize(f, init, bounds);
        CHECK(m.value <= start);
        CHECK(m.params[0] >= -1.0);
        CHECK(m.params[0] <= 1.0);
        CHECK(m.params[1] >= 0.0);
        CHECK(m.params[1] <= 2.0);
    }
}

TEST_CASE("minimize validates its input and detects divergence") {
    auto f = []<class T>(std::span<const T> p) { return p[0]; };
    CHECK_THROWS_AS(minimize(f, {2.0}, std::vector<Bound>{{0.0, 1.0}}), ConfigError);
    CHECK_THROWS_AS(minimize(f, {0.5, 0.5}, std::vector<Bound>{{0.0, 1.0}}), ConfigError);
    auto down = []<class T>(std::span<const T> p) { return -1e6 * p[0]; };
    CHECK_THROWS_AS(minimize(down, {0.0}, std::vector<Bound>{{0.0, 1e9}}), DivergenceError);
}

TEST_CASE("Holt SSE fit improves on the 0.5 start for most seeds") {
    int improved = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> y(60);
        for (std::size_t t = 0; t < y.size(); ++t) y[t] = 10.0 + 0.5 * static_cast<double>(t) + noise(rng);
        const auto init = models::initial_state(models::SmoothingKind::Holt, y, 1);
        auto sse = [&]<class T>(std::span<const T> p) {
            require_arity(p, 2);
            return models::sse_objective<T>(models::SmoothingKind::Holt, {p[0], p[1], T(0.0)}, init, y);
        };
        const std::vector<double> start{0.5, 0.5};
        const double at_start = sse(std::span<const double>(start));
        const auto fit = models::fit_smoothing(models::SmoothingKind::Holt, y, 1);
        if (fit.sse < at_start) ++improved;
    }
    CHECK(improved >= 95);
}
