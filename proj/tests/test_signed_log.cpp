#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "barytope/rng.hpp"
#include "barytope/signed_log.hpp"

using bary::RngStream;
using bary::SignedLog;
using bary::signedlog_sum;

TEST_SUITE("signed_log") {

TEST_CASE("sum of small positives matches plain arithmetic") {
    std::vector<SignedLog> v{SignedLog::from_double(2.0), SignedLog::from_double(3.0)};
    const SignedLog s = signedlog_sum(v);
    CHECK(s.sign == 1);
    CHECK(s.logmag == doctest::Approx(std::log(5.0)).epsilon(1e-14));
}

TEST_CASE("exact cancellation snaps to the zero element") {
    std::vector<SignedLog> v{SignedLog::from_double(7.0), SignedLog::from_double(-7.0)};
    const SignedLog s = signedlog_sum(v);
    CHECK(s.sign == 0);
    CHECK(std::isinf(s.logmag));
    CHECK(s.to_double() == 0.0);
}

TEST_CASE("huge magnitudes subtract to the long-double reference") {
    // exp(700) - exp(699) = exp(700) (1 - e^{-1})
    std::vector<SignedLog> v{SignedLog::make(1, 700.0), SignedLog::make(-1, 699.0)};
    const SignedLog s = signedlog_sum(v);
    CHECK(s.sign == 1);
    const double expected = 700.0 + std::log(1.0 - std::exp(-1.0));
    CHECK(s.logmag == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("empty input gives the zero element") {
    const SignedLog s = signedlog_sum(std::vector<SignedLog>{});
    CHECK(s.is_zero());
}

TEST_CASE("pairwise ops agree with extended precision across the dynamic range") {
    RngStream rng(11, 0);
    for (int rep = 0; rep < 2000; ++rep) {
        const double la = rng.next_uniform(-650.0, 650.0);
        const double lb = rng.next_uniform(-650.0, 650.0);
        const int sa = rng.next_double() < 0.5 ? -1 : 1;
        const int sb = rng.next_double() < 0.5 ? -1 : 1;
        const SignedLog a = SignedLog::make(sa, la);
        const SignedLog b = SignedLog::make(sb, lb);

        const long double va = sa * std::exp(static_cast<long double>(la) / 3.0);
        const long double vb = sb * std::exp(static_cast<long double>(lb) / 3.0);
        // Work at one third of the exponent so long double can hold values.
        const SignedLog a3 = SignedLog::make(sa, la / 3.0);
        const SignedLog b3 = SignedLog::make(sb, lb / 3.0);

        const SignedLog prod = a3 * b3;
        const long double vprod = va * vb;
        CHECK(prod.sign == (vprod > 0 ? 1 : vprod < 0 ? -1 : 0));
        if (prod.sign != 0)
            CHECK(static_cast<double>(std::fabs(
                      prod.logmag - static_cast<double>(std::log(std::fabs(vprod))))) <
                  1e-12 * std::max(1.0, std::fabs(prod.logmag)));

        const SignedLog sum = a3 + b3;
        const long double vsum = va + vb;
        if (sum.sign != 0) {
            CHECK(sum.sign == (vsum > 0 ? 1 : -1));
            CHECK(static_cast<double>(std::fabs(
                      sum.logmag - static_cast<double>(std::log(std::fabs(vsum))))) <
                  1e-10 * std::max(1.0, std::fabs(sum.logmag)));
        }
        (void)a;
        (void)b;
    }
}

TEST_CASE("summation is permutation stable to 1e-10 relative log magnitude") {
    RngStream rng(3, 5);
    std::vector<SignedLog> v;
    for (int i = 0; i < 1000; ++i) {
        const double lm = rng.next_uniform(-300.0, 300.0);
        v.push_back(SignedLog::make(rng.next_double() < 0.5 ? -1 : 1, lm));
    }
    const SignedLog base = signedlog_sum(v);
    for (int rep = 0; rep < 10; ++rep) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.next_below(i)]);
        const SignedLog s = signedlog_sum(v);
        REQUIRE(s.sign == base.sign);
        CHECK(std::fabs(s.logmag - base.logmag) <=
              1e-10 * std::max(1.0, std::fabs(base.logmag)));
    }
}

TEST_CASE("near-cancellation below relative 1e-14 reports indeterminate zero") {
    const SignedLog a = SignedLog::make(1, 100.0);
    const SignedLog b = SignedLog::make(-1, 100.0 + 1e-16);
    CHECK((a + b).is_zero());
}

} // TEST_SUITE
