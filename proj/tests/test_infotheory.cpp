#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "alphaeta/errors.hpp"
#include "alphaeta/infotheory.hpp"
#include "oracles.hpp"

using namespace alphaeta;

namespace {
const ChannelParams kPaper{4096, 40000.0, 0.1};
ChannelParams toy_params() { return ChannelParams::for_sigma(16, 1.5); }
} // namespace

TEST_CASE("posterior normalization and validation") {
    Posterior p({1.0, 3.0}, "x");
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(0.75));
    double sum = 0.0;
    for (double v : p.probs()) sum += v;
    CHECK(std::fabs(sum - 1.0) < 1e-12);
    CHECK_THROWS_AS(Posterior({-0.1, 1.1}, "x"), std::invalid_argument);
    CHECK_THROWS_AS(Posterior({0.0, 0.0}, "x"), std::invalid_argument);
    CHECK_THROWS_AS(Posterior({}, "x"), std::invalid_argument);
}

TEST_CASE("entropy basics") {
    CHECK(entropy_bits(std::vector<double>(4096, 1.0 / 4096)) == doctest::Approx(12.0).epsilon(1e-12));
    std::vector<double> point(16, 0.0);
    point[3] = 1.0;
    CHECK(entropy_bits(point) == 0.0);
    CHECK(entropy_bits({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-15));
    // uniform maximizes entropy over a fixed support
    CHECK(entropy_bits({0.7, 0.1, 0.1, 0.1}) < 2.0);
}

TEST_CASE("symbol posterior is a point mass when noise vanishes") {
    ChannelParams p{4096, 1e12, 1.0};
    const Posterior post = symbol_posterior(2048.3, p);
    CHECK(post[2048] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(entropy_bits(post) < 1e-6);
}

TEST_CASE("symbol posterior symmetry around the measurement") {
    const Posterior post = symbol_posterior(2048.0, kPaper);
    for (int d = 1; d < 30; ++d)
        CHECK(post[static_cast<std::size_t>(2048 + d)] ==
              doctest::Approx(post[static_cast<std::size_t>(2048 - d)]).epsilon(1e-12));
}

TEST_CASE("symbol posterior matches the unwrapped gaussian integral") {
    const double sigma = kPaper.sigma();
    const Posterior post = symbol_posterior(2048.0, kPaper);
    for (int m = 2048 - static_cast<int>(6 * sigma); m <= 2048 + static_cast<int>(6 * sigma); ++m) {
        const double expected = oracle::simpson(
            [&](double x) { return oracle::gauss_pdf(x, 2048.0, sigma); },
            m - 0.5, m + 0.5, 400);
        CHECK(post[static_cast<std::size_t>(m)] == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("windowed entropy equals the full posterior entropy") {
    Philox rng(41, 0);
    for (double sigma : {4.0, 5.1537113195, 16.0}) {
        const ChannelParams p = ChannelParams::for_sigma(4096, sigma);
        for (int i = 0; i < 20; ++i) {
            const double j = rng.next_uniform(0.0, 4096.0);
            CHECK(symbol_posterior_entropy(j, p) ==
                  doctest::Approx(entropy_bits(symbol_posterior(j, p))).epsilon(1e-12));
        }
    }
    // windows crossing the wrap point
    const ChannelParams p = ChannelParams::for_sigma(4096, 8.0);
    for (double j : {0.25, 4095.75, 1.0, 4090.0})
        CHECK(symbol_posterior_entropy(j, p) ==
              doctest::Approx(entropy_bits(symbol_posterior(j, p))).epsilon(1e-12));
}

TEST_CASE("closed-form information gain reproduces the worked numbers") {
    CHECK(info_gain_closed_form(kPaper) == doctest::Approx(7.5873).epsilon(2e-5));
    CHECK(info_gain_approx(kPaper) == doctest::Approx(7.5829).epsilon(2e-5));

    const InfoReport r = key_rate_and_unicity(kPaper, 4400);
    CHECK(r.h0 == doctest::Approx(12.0));
    CHECK(r.h0 - r.h1 == doctest::Approx(r.gain_per_symbol).epsilon(1e-12));
    CHECK(r.key_gain_per_symbol == doctest::Approx(6.5873).epsilon(2e-5));
    CHECK(r.unicity_n0 == doctest::Approx(667.95).epsilon(1e-4));
    CHECK(r.alpha == doctest::Approx(126.4911).epsilon(1e-6));

    // alpha = 300 regime quoted for the attack bound
    ChannelParams a300{4096, 22500.0, 1.0};
    CHECK(a300.alpha() == doctest::Approx(300.0).epsilon(1e-12));
    CHECK(key_rate_and_unicity(a300, 10).key_gain_per_symbol ==
          doctest::Approx(7.8332).epsilon(2e-5));
}

TEST_CASE("key rate clamps at zero and unicity scales linearly") {
    // eta N small enough that the closed form goes negative
    ChannelParams weak{16, 0.05, 1.0};
    const InfoReport r = key_rate_and_unicity(weak, 64);
    CHECK(r.key_gain_per_symbol == 0.0);
    CHECK(std::isinf(r.unicity_n0));

    const InfoReport l1 = key_rate_and_unicity(kPaper, 4400);
    const InfoReport l2 = key_rate_and_unicity(kPaper, 8800);
    CHECK(l2.unicity_n0 == doctest::Approx(2.0 * l1.unicity_n0).epsilon(1e-12));
    CHECK_THROWS_AS(key_rate_and_unicity(kPaper, 0), std::invalid_argument);
}

TEST_CASE("monte-carlo gain agrees with the closed form") {
    const MonteCarloGain mc = mc_info_gain(kPaper, 20000, 7);
    const double closed = info_gain_closed_form(kPaper);
    CHECK(std::fabs(mc.mean_gain - closed) / closed < 0.01);
    CHECK(mc.trials == 20000);
}

TEST_CASE("bob analytic error rate is the gaussian tail") {
    // sigma = M/16: P(|dev| > M/4) = 2 Qbar(4), wrapping negligible
    const ChannelParams p = ChannelParams::for_sigma(4096, 256.0);
    CHECK(bob_ber_analytic(p) == doctest::Approx(6.3342e-5).epsilon(1e-3));
    // and via direct quadrature of the implemented density
    const double quad = 1.0 - oracle::wrapped_gauss_mass(-1024.0, 1024.0, 256.0, 4096);
    CHECK(bob_ber_analytic(p) == doctest::Approx(quad).epsilon(1e-6));
}

TEST_CASE("eve analytic error approaches one half under heavy noise") {
    const ChannelParams p = ChannelParams::for_sigma(16, 200.0);
    CHECK(eve_ber_analytic(p) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("monte-carlo error rates straddle their analytic predictions") {
    const ChannelParams p = ChannelParams::for_sigma(64, 4.0);
    const BerEstimate ber =
        ber_curves(p, SecretKey::from_hex("b5ad", 16), maximal_taps(16), 200000, 13);
    CHECK(std::fabs(ber.bob_ber - ber.bob_analytic) < 4.0 * ber.bob_stderr + 1e-9);
    CHECK(std::fabs(ber.eve_ber - ber.eve_analytic) < 4.0 * ber.eve_stderr + 1e-9);
    CHECK(ber.eve_ber > 10.0 * ber.bob_ber); // the keyless decoder is far worse
}

TEST_CASE("additive cipher leaks nothing without plaintext") {
    CHECK(additive_key_mutual_info(8, maximal_taps(8), 8) == 0.0);
    CHECK(additive_key_mutual_info(4, {4, 3}, 12) == 0.0);
    CHECK_THROWS_AS(additive_key_mutual_info(16, maximal_taps(16), 24, 1000), InfeasibleSizeError);
}

TEST_CASE("alpha-eta leaks key information even for one symbol") {
    EnumSystem sys{8, maximal_taps(8), toy_params(), MessageModel::unknown()};
    const double i1 = exact_key_mutual_info(sys, 1, 64);
    CHECK(i1 > 0.01);
}

TEST_CASE("dsr with zero sigma hides the key and conveys exactly one bit") {
    EnumSystem sys{8, maximal_taps(8), ChannelParams::for_sigma(16, 1.0, true, true),
                   MessageModel::unknown()};
    CHECK(exact_key_mutual_info(sys, 1, 64) == 0.0);
    CHECK(exact_key_mutual_info(sys, 2, 64) == 0.0);
    CHECK(exact_symbol_mutual_info(sys.params, 64) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mutual information is monotone in symbols and below the per-symbol cap") {
    EnumSystem sys{8, maximal_taps(8), toy_params(), MessageModel::unknown()};
    const double i1 = exact_key_mutual_info(sys, 1, 48);
    const double i2 = exact_key_mutual_info(sys, 2, 48);
    const double i3 = exact_key_mutual_info(sys, 3, 48);
    CHECK(i2 >= i1 - 1e-12);
    CHECK(i3 >= i2 - 1e-12);
    const double cap = info_gain_closed_form(sys.params);
    CHECK(i1 <= 1.0 * cap + 1e-6);
    CHECK(i2 <= 2.0 * cap + 1e-6);
    CHECK(i3 <= std::min(8.0, 3.0 * cap) + 1e-6);
}

TEST_CASE("known plaintext dominates unknown plaintext") {
    EnumSystem unknown{8, maximal_taps(8), toy_params(), MessageModel::unknown()};
    EnumSystem known = unknown;
    known.message = MessageModel::known({0, 0, 0});
    for (int n : {1, 2}) {
        const double iu = exact_key_mutual_info(unknown, n, 48);
        const double ik = exact_key_mutual_info(known, n, 48);
        CHECK(ik >= iu - 1e-9);
    }
}

TEST_CASE("enumeration budget guard") {
    EnumSystem sys{16, maximal_taps(16), toy_params(), MessageModel::unknown()};
    CHECK_THROWS_AS(exact_key_mutual_info(sys, 3, 256), InfeasibleSizeError);
    CHECK_THROWS_AS(exact_key_mutual_info(sys, 1, 64, 100), InfeasibleSizeError);
}
