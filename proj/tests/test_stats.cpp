#include <doctest.h>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "namefreq/stats.hpp"
#include "support.hpp"

using namespace namefreq;

TEST_CASE("average ranks") {
    CHECK(rank_average_ties(std::vector<double>{10, 20, 20, 30}) == std::vector<double>{1, 2.5, 2.5, 4});
    CHECK(rank_average_ties(std::vector<double>{-3, 0.5, 2, 9, 11}) == std::vector<double>{1, 2, 3, 4, 5});
    CHECK(rank_average_ties(std::vector<double>{4, 4, 4, 4}) == std::vector<double>{2.5, 2.5, 2.5, 2.5});
    CHECK_THROWS_AS(rank_average_ties(std::vector<double>{}), StatsError);

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> small(0, 6);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> xs(1 + t % 17);
        for (auto& x : xs) x = small(rng);
        CHECK(rank_average_ties(xs) == oracle::ranks(xs));
    }
}

TEST_CASE("pearson") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y, z;
    for (double v : x) {
        y.push_back(2 * v + 1);
        z.push_back(-v);
    }
    CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson(x, z) == doctest::Approx(-1.0).epsilon(1e-15));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    std::vector<double> a(100), b(100);
    for (int i = 0; i < 100; ++i) {
        a[i] = nd(rng);
        b[i] = 0.4 * a[i] + nd(rng);
    }
    CHECK(std::fabs(pearson(a, b) - oracle::pearson(a, b)) < 1e-12);

    CHECK_THROWS_AS(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), StatsError);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), StatsError);
}

TEST_CASE("spearman basics") {
    const auto r = spearman(std::vector<double>{1, 2, 3}, std::vector<double>{10, 20, 30});
    CHECK(r.rho == 1.0);
    CHECK(r.n == 3);
    const auto s = spearman(std::vector<double>{1, 2, 3, 4, 5, 6}, std::vector<double>{6, 5, 4, 3, 2, 1});
    CHECK(s.rho == -1.0);
    CHECK_THROWS_AS(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}), StatsError);
    CHECK_THROWS_AS(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{5, 5, 5}), StatsError);
}

TEST_CASE("spearman matches rank oracle on tied samples") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> len(3, 60);
    std::uniform_int_distribution<int> level(0, 9);
    int checked = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = len(rng);
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = level(rng);
            y[i] = level(rng) + 0.5 * x[i];
        }
        if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
            std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; }))
            continue;
        CHECK(std::fabs(spearman(x, y).rho - oracle::spearman(x, y)) < 1e-12);
        ++checked;
    }
    CHECK(checked > 950);
}

TEST_CASE("exact p-values for small n") {
    std::mt19937_64 rng(77);
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y{1, 2, 3, 4, 5};
    do {
        const auto r = spearman(x, y);
        CHECK(r.method == PValueMethod::ExactPermutation);
        CHECK(r.p_two_tailed == oracle::permutation_p(x, y));
    } while (std::next_permutation(y.begin(), y.end()));

    // with ties
    const std::vector<double> tx{1, 1, 2, 3, 3, 4};
    const std::vector<double> ty{2, 1, 1, 5, 4, 4};
    CHECK(spearman(tx, ty).p_two_tailed == doctest::Approx(oracle::permutation_p(tx, ty)).epsilon(1e-15));
}

TEST_CASE("spearman properties") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 100; ++t) {
        const int n = 12 + t;
        std::vector<double> x(n), y(n), fx(n), gy(n), neg(n);
        for (int i = 0; i < n; ++i) {
            x[i] = nd(rng);
            y[i] = x[i] + nd(rng);
            fx[i] = std::exp(x[i]);          // increasing transform
            gy[i] = y[i] * y[i] * y[i] + y[i];
            neg[i] = -std::exp(y[i]);        // decreasing transform
        }
        const auto r = spearman(x, y);
        CHECK(spearman(fx, gy).rho == doctest::Approx(r.rho).epsilon(1e-14));
        CHECK(spearman(y, x).rho == doctest::Approx(r.rho).epsilon(1e-14));
        CHECK(spearman(x, neg).rho == doctest::Approx(-r.rho).epsilon(1e-14));
        CHECK(std::isfinite(r.log10_p));
    }
}

TEST_CASE("log10 p stays finite far below double range") {
    std::vector<double> x, y;
    for (int i = 0; i < 5000; ++i) {
        x.push_back(i);
        y.push_back(i + (i % 3 == 0 ? 2.5 : 0.0));
    }
    const auto r = spearman(x, y);
    REQUIRE(r.rho < 1.0);
    CHECK(std::isfinite(r.log10_p));
    CHECK(r.log10_p < -300);
    CHECK(format_p_value(r.p_two_tailed, r.log10_p).rfind("p < 1e-", 0) == 0);

    std::vector<double> mono;
    for (int i = 0; i < 50; ++i) mono.push_back(i * i);
    const auto perfect = spearman(std::vector<double>(x.begin(), x.begin() + 50), mono);
    CHECK(perfect.rho == 1.0);
    CHECK(perfect.log10_p == doctest::Approx((std::log(2.0) - std::lgamma(51.0)) / std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("t-tail agrees with boost") {
    for (double df : {1.0, 3.0, 10.0, 48.0, 198.0, 3755.0}) {
        for (double t : {0.0, 0.3, 1.0, 2.5, 6.0, 15.0}) {
            boost::math::students_t dist(df);
            const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
            if (p < 1e-300) continue;
            CHECK(log10_student_t_two_tailed(t, df) == doctest::Approx(std::log10(p)).epsilon(1e-10));
        }
    }
}

TEST_CASE("incomplete beta agrees with boost") {
    for (double a : {0.5, 1.0, 4.0, 24.0, 99.0}) {
        for (double b : {0.5, 2.0, 30.0}) {
            for (double x : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999}) {
                const double ref = boost::math::ibeta(a, b, x);
                if (ref < 1e-300) continue;
                CHECK(log_incomplete_beta(x, a, b) == doctest::Approx(std::log(ref)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("median") {
    CHECK(median(std::vector<double>{7}) == 7);
    CHECK(median(std::vector<double>{9, 3, 7}) == 7);
    CHECK(median(std::vector<double>{8, 2, 6, 4}) == 5);
    CHECK(median(std::vector<double>{219, 274, 1191}) == 274);
    CHECK_THROWS_AS(median(std::vector<double>{}), StatsError);
}
