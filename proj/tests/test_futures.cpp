#include <doctest.h>

#include "ccbs/futures.hpp"
#include "oracles.hpp"

using namespace ccbs;
using oracle::rel_err;

namespace {

// deterministic Vasicek path integral int_u^T r dv started from r at t
double ode_integral(double t, double r, double u, double T, const VasicekParams& p) {
    return oracle::quad([&](double v) {
        const double e = std::exp(-p.b * (v - t));
        return r * e + p.a / p.b * (1.0 - e);
    }, u, T);
}

MarketModel still_model() {
    MarketModel m = reference_model();
    m.domestic.sigma = m.foreign.sigma = m.sigma_q = 0.0;
    m.spreads.alpha_d = 0.006;
    m.spreads.alpha_f = 0.001;
    return m;
}

std::vector<PathGrid> paths_to(double horizon, std::vector<double> required, Measure measure, std::size_t n) {
    SimConfig c;
    c.n_paths = n;
    c.seed = 4242;
    c.measure = measure;
    c.steps_per_year = 2;
    required.push_back(horizon);
    return simulate_paths(c, make_grid(horizon, 2, required), reference_model());
}

}  // namespace

TEST_SUITE_BEGIN("futures");

TEST_CASE("settlement identities hold exactly") {
    CHECK(oracle::settlement_identities(500, 3));
}

TEST_CASE("degenerate diffusion gives deterministic compounding") {
    const MarketModel m = still_model();
    const auto period = AccrualPeriod::make(0.5, 1.0);
    const double fd = aonia_futures(0.1, 0.03, 1.0, period, m).value;
    CHECK(rel_err(std::log1p(0.5 * fd), ode_integral(0.1, 0.03, 0.5, 1.0, m.domestic)) <= 1e-12);
    const double ff = sofr_futures(0.1, 0.01, 1.0, period, m).value;
    CHECK(rel_err(std::log1p(0.5 * ff), ode_integral(0.1, 0.01, 0.5, 1.0, m.foreign)) <= 1e-12);
    const double fq = currency_futures(0.0, 0.03, 0.01, 1.4, 2.0, m).value;
    const double drift = ode_integral(0.0, 0.03, 0.0, 2.0, m.domestic) -
                         ode_integral(0.0, 0.01, 0.0, 2.0, m.foreign) + 0.005 * 2.0;
    CHECK(rel_err(fq, 1.4 * std::exp(drift)) <= 1e-12);
}

TEST_CASE("currency futures collapses to spot at maturity") {
    const MarketModel m = reference_model();
    CHECK(currency_futures(2.0, 0.05, -0.01, 1.37, 2.0, m).value == 1.37);
}

TEST_CASE("convexity adjustments match quadrature") {
    const MarketModel m = reference_model();
    const auto period = AccrualPeriod::make(0.5, 1.0);
    const auto th = theta_adjustments(0.0, period, m);
    CHECK(rel_err(th.theta_d, oracle::forward_accrual_drift_quad(0.0, 0.5, 1.0, m.domestic)) <= 1e-12);
    CHECK(rel_err(th.theta_f, oracle::forward_accrual_drift_quad(0.0, 0.5, 1.0, m.foreign)) <= 1e-12);
    MarketModel z = m;
    z.domestic = {0.0, 5.0, 0.0};
    z.foreign = {0.0, 5.0, 0.0};
    const auto t0 = theta_adjustments(0.2, period, z);
    CHECK(t0.theta_d == 0.0);
    CHECK(t0.theta_f == 0.0);
}

TEST_CASE("pre-period and in-period adjustments splice at U") {
    const MarketModel m = reference_model();
    const auto period = AccrualPeriod::make(0.5, 1.0);
    const auto pre = theta_adjustments(0.5 - 1e-9, period, m);
    const auto in = theta_adjustments(0.5, period, m, 0.0, 0.0);
    CHECK(std::abs(pre.theta_d - in.theta_d) < 1e-9);
    CHECK(std::abs(pre.theta_f - in.theta_f) < 1e-9);
    CHECK(std::abs(pre.theta_q - in.theta_q) < 1e-9);
    const double f_pre = aonia_futures(0.5 - 1e-9, 0.02, 1.0, period, m).value;
    const double f_in = aonia_futures(0.5, 0.02, 1.0, period, m).value;
    CHECK(std::abs(f_pre - f_in) < 1e-8);
    CHECK_THROWS_AS(theta_adjustments(0.7, period, m), StateError);
    CHECK_THROWS_AS(aonia_futures(0.7, 0.02, kNaN, period, m), StateError);
}

TEST_CASE("market variables round-trip through the futures prices") {
    CHECK(oracle::inversion_roundtrip(2000, 11) < 1e-10);
    const MarketModel m = reference_model();
    const auto period = AccrualPeriod::make(0.5, 1.0);
    const auto fd = aonia_futures(1.0, 0.02, 1.01, period, m);
    const auto ff = sofr_futures(1.0, 0.02, 1.01, period, m);
    const auto fq = currency_futures(1.0, 0.02, 0.02, 1.5, 1.0, m);
    CHECK_THROWS_AS(invert_market_vars(fd, ff, fq, 1.0, period, m, 0.01, 0.01), NumericError);
}

TEST_CASE("simulated state round-trips at t = 0.25") {
    const MarketModel m = reference_model();
    const auto period = AccrualPeriod::make(0.5, 1.0);
    const auto paths = paths_to(0.25, {}, Measure::domestic, 200);
    double worst = 0.0;
    for (const auto& p : paths) {
        const std::size_t k = p.index_of(0.25);
        const auto fd = aonia_futures(0.25, p.r_d[k], 1.0, period, m);
        const auto ff = sofr_futures(0.25, p.r_f[k], 1.0, period, m);
        const auto fq = currency_futures(0.25, p.r_d[k], p.r_f[k], p.q[k], 1.0, m);
        worst = std::max(worst, rel_err(invert_market_vars(fd, ff, fq, 0.25, period, m).q, p.q[k]));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("zeta ratios differ by one") {
    const auto p = reference_model().domestic;
    const auto period = AccrualPeriod::make(0.5, 1.0);
    for (double t : {0.0, 0.2, 0.49}) {
        const auto z = zeta_ratios(t, 0.3, period, p);
        CHECK(std::abs(z.plain - z.tilde - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(zeta_ratios(0.5, 0.3, period, p), DomainError);
}

TEST_CASE("futures prices are risk-neutral expectations") {
    const MarketModel m = reference_model();
    {
        const auto paths = paths_to(0.5, {}, Measure::domestic, 100000);
        std::vector<double> s(paths.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::exp(paths[i].int_r_d.back());
        const double fd = aonia_futures(0.0, m.r_d0, 1.0, AccrualPeriod::make(0.0, 0.5), m).value;
        CHECK(oracle::within(summarize(s), 1.0 + 0.5 * fd, 3.0));
    }
    {
        const auto paths = paths_to(1.0, {0.5}, Measure::foreign, 100000);
        std::vector<double> s(paths.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto& p = paths[i];
            s[i] = std::exp(p.int_r_f.back() - p.int_r_f[p.index_of(0.5)]);
        }
        const double ff = sofr_futures(0.0, m.r_f0, 1.0, AccrualPeriod::make(0.5, 1.0), m).value;
        CHECK(oracle::within(summarize(s), 1.0 + 0.5 * ff, 3.0));
    }
    {
        const auto paths = paths_to(3.0, {}, Measure::domestic, 100000);
        std::vector<double> s(paths.size());
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = paths[i].q.back();
        CHECK(oracle::within(summarize(s), currency_futures(0.0, m.r_d0, m.r_f0, m.q0, 3.0, m).value, 3.0));
    }
}

TEST_CASE("futures gains have zero drift under the domestic measure") {
    const auto a = oracle::futures_martingale(20000, 1.0, 52, 99);
    CHECK(oracle::within(a.d_fd, 0.0, 3.0));
    CHECK(oracle::within(a.d_ffq, 0.0, 3.0));
    CHECK(oracle::within(a.d_fq, 0.0, 3.0));
}

TEST_CASE("domain checks") {
    const MarketModel m = reference_model();
    CHECK_THROWS_AS(AccrualPeriod::make(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(aonia_futures(1.5, 0.02, 1.0, AccrualPeriod::make(0.5, 1.0), m), DomainError);
    CHECK_THROWS_AS(currency_futures(0.0, 0.02, 0.02, -1.0, 1.0, m), DomainError);
}

TEST_SUITE_END();
