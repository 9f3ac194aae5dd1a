#include <doctest.h>

#include "ccbs/hedging.hpp"
#include "oracles.hpp"

using namespace ccbs;
using oracle::rel_err;

namespace {

double component_value(Component c, const State& x, const Dates& d, double kappa, const MarketModel& m) {
    if (c == Component::principal) return price_principal_exchange(x, d.S, d.T, m);
    const auto leg = price_interest_leg(x, d, kappa, m);
    return c == Component::domestic_leg ? leg.x_d : leg.x_f;
}

// central differences of the price composed with the state diffusion loadings
PsiVector psi_fd(Component c, const State& x, const Dates& d, double kappa, const MarketModel& m) {
    const double h = 1e-5;
    auto bump = [&](double State::*f, double by) {
        State y = x;
        y.*f += by;
        return component_value(c, y, d, kappa, m);
    };
    const double hq = h * x.q;
    return {m.domestic.sigma * (bump(&State::r_d, h) - bump(&State::r_d, -h)) / (2 * h),
            m.foreign.sigma * (bump(&State::r_f, h) - bump(&State::r_f, -h)) / (2 * h),
            m.sigma_q * x.q * (bump(&State::q, hq) - bump(&State::q, -hq)) / (2 * hq)};
}

double psi_gap(const PsiVector& a, const PsiVector& b) {
    const double scale = std::max({std::abs(b.psi1), std::abs(b.psi2), std::abs(b.psi3)});
    return std::max({std::abs(a.psi1 - b.psi1), std::abs(a.psi2 - b.psi2), std::abs(a.psi3 - b.psi3)}) / scale;
}

}  // namespace

TEST_SUITE_BEGIN("hedging");

TEST_CASE("pipeline agrees with the per-regime closed forms") {
    CHECK(oracle::pipeline_vs_closed_form(1000, 23) < 1e-10);
}

TEST_CASE("loadings match finite differences") {
    const MarketModel m = reference_model();
    const Dates d = oracle::test_dates();
    oracle::Lcg rng(8);
    double worst = 0.0;
    for (auto r : {oracle::Regime::pre_s, oracle::Regime::s_to_u, oracle::Regime::in_period})
        for (Component c : {Component::domestic_leg, Component::foreign_leg, Component::principal})
            for (int i = 0; i < 50; ++i) {
                const State x = oracle::random_state(rng, r, d);
                const double kappa = rng.uni(-0.01, 0.01);
                worst = std::max(worst, psi_gap(psi_component(c, x, d, kappa, m), psi_fd(c, x, d, kappa, m)));
            }
    CHECK(worst < 1e-6);
    const State x = oracle::random_state(rng, oracle::Regime::pre_s, d);
    const auto a = psi_component(Component::foreign_leg, x, d, 1e-3, m);
    const auto b = psi_component(Component::domestic_leg, x, d, 1e-3, m);
    const auto net = psi_interest(x, d, 1e-3, m);
    CHECK(std::abs(net.psi1 - (a.psi1 - b.psi1)) == 0.0);
    CHECK(rel_err(psi_principal(x, d.S, d.T, m).psi3, psi_component(Component::principal, x, d, 0.0, m).psi3) <= 1e-15);
}

TEST_CASE("structural zeros") {
    const MarketModel m = reference_model();
    const Dates d = oracle::test_dates();
    oracle::Lcg rng(9);
    for (int i = 0; i < 20; ++i) {
        const State x = oracle::random_state(rng, oracle::Regime::in_period, d);
        const auto p = psi_component(Component::domestic_leg, x, d, 5e-4, m);
        CHECK(p.psi2 == 0.0);
        CHECK(p.psi3 == 0.0);
        const State y = oracle::random_state(rng, oracle::Regime::s_to_u, d);
        const auto h = hedge_closed_form(Component::domestic_leg, y, d, 5e-4, m);
        CHECK(h.phi_f == 0.0);
        CHECK(h.phi_q == 0.0);
    }
    MarketModel z = m;
    z.domestic.sigma = z.foreign.sigma = z.sigma_q = 0.0;
    for (auto r : {oracle::Regime::pre_s, oracle::Regime::s_to_u, oracle::Regime::in_period}) {
        const State x = oracle::random_state(rng, r, d);
        for (Component c : {Component::domestic_leg, Component::foreign_leg, Component::principal}) {
            const auto p = psi_component(c, x, d, 1e-3, z);
            CHECK(p.psi1 == 0.0);
            CHECK(p.psi2 == 0.0);
            CHECK(p.psi3 == 0.0);
        }
    }
}

TEST_CASE("principal exposure after the start") {
    const MarketModel m = reference_model();
    const Dates d = oracle::test_dates();
    oracle::Lcg rng(10);
    const State x = oracle::random_state(rng, oracle::Regime::s_to_u, d);
    const auto p = psi_principal(x, d.S, d.T, m);
    const double want = -lambda_factor(x.t, d.T, m.spreads) * collateral_discount(x.t, d.T, m.spreads) *
                        m.foreign.sigma * affine_n(x.t, d.T, m.foreign.b) * x.q * zcb_price(x.t, x.r_f, d.T, m.foreign);
    CHECK(rel_err(p.psi2, want) <= 1e-12);
    State e = x;
    e.t = d.T;
    e.int_d = e.int_f = 0.01;
    const auto pe = psi_principal(e, d.S, d.T, m);
    CHECK(pe.psi1 == 0.0);
    CHECK(rel_err(pe.psi3, m.sigma_q * e.q) <= 1e-15);
}

TEST_CASE("futures positions reproduce the loadings") {
    oracle::Lcg rng(12);
    CHECK(phi_from_psi({}, {1.0, 2.0, {0.3, 0.2, 0.5}}).phi_d == 0.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const PsiVector psi{rng.uni(-1, 1), rng.uni(-1, 1), rng.uni(-1, 1)};
        const FuturesVols nu{rng.uni(0.1, 1), rng.uni(0.1, 1), {rng.uni(-1, 1), rng.uni(-1, 1), rng.uni(0.1, 1)}};
        const auto h = phi_from_psi(psi, nu);
        worst = std::max({worst, std::abs(h.phi_d * nu.nu_d + h.phi_q * nu.nu_q[0] - psi.psi1),
                          std::abs(h.phi_f * nu.nu_fq + h.phi_q * nu.nu_q[1] - psi.psi2),
                          std::abs(h.phi_q * nu.nu_q[2] - psi.psi3)});
    }
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(phi_from_psi({1, 1, 1}, {0.0, 1.0, {0, 0, 1}}), NumericError);
}

TEST_CASE("in-period leg positions") {
    const MarketModel m = reference_model();
    const Dates d = oracle::test_dates();
    const auto period = AccrualPeriod::make(d.U, d.T);
    const double delta = d.T - d.U;
    oracle::Lcg rng(13);
    for (int i = 0; i < 100; ++i) {
        const State x = oracle::random_state(rng, oracle::Regime::in_period, d);
        const double kappa = rng.uni(-0.01, 0.01);
        const auto leg = price_interest_leg(x, d, kappa, m);
        const double xd1 = collateral_discount(x.t, d.T, m.spreads) * x.q_s * std::exp(x.int_d);
        const double fd = aonia_futures(x.t, x.r_d, std::exp(x.int_d), period, m).value;
        const auto hd = hedge_pipeline(Component::domestic_leg, x, d, kappa, m);
        CHECK(rel_err(hd.phi_d, (xd1 - leg.x_d) * delta / (1.0 + delta * fd)) <= 1e-10);
        const double fq = currency_futures(x.t, x.r_d, x.r_f, x.q, d.T, m).value;
        const auto hf = hedge_pipeline(Component::foreign_leg, x, d, kappa, m);
        CHECK(rel_err(hf.phi_q, leg.x_f / fq) <= 1e-10);
    }
}

TEST_CASE("rate futures lose their volatility at settlement") {
    const MarketModel m = reference_model();
    const Dates d = oracle::test_dates();
    State x;
    x.t = d.T;
    x.q_s = 1.5;
    x.int_d = x.int_f = 0.01;
    CHECK_THROWS_AS(hedge_pipeline(Component::foreign_leg, x, d, 0.0, m), NumericError);
}

TEST_CASE("swap hedge aggregates per-period positions") {
    MarketModel m = reference_model();
    const CcbsSpec s = oracle::reference_contract(-4.37e-4);
    const auto x = SwapState::initial(m, s);
    const auto h = hedge_ccbs(x, s, m, 1.0);
    REQUIRE(h.phi_d.size() == 6);
    const auto last = s.dates(5);
    const State xs = x.period_state(5);
    const auto a = hedge_pipeline(Component::foreign_leg, xs, last, s.kappa, m);
    const auto b = hedge_pipeline(Component::domestic_leg, xs, last, s.kappa, m);
    const auto c = hedge_pipeline(Component::principal, xs, last, s.kappa, m);
    CHECK(rel_err(h.phi_q[5], s.notional_f * (a.phi_q - b.phi_q + c.phi_q)) <= 1e-9);
    CHECK(rel_err(h.value, price_ccbs(x, s, m).total) <= 1e-15);
    CHECK(h.collateral == -m.spreads.beta * h.value);

    m.spreads.beta = 1.0;
    CHECK(hedge_ccbs(x, s, m, 1.3).phi0 == 0.0);
    m.spreads.beta = 0.0;
    CHECK(rel_err(hedge_ccbs(x, s, m, 1.3).phi0, h.value / 1.3) <= 1e-12);

    SwapState e = x;
    e.t = s.maturity();
    const auto z = hedge_ccbs(e, s, m);
    CHECK(z.value == 0.0);
    for (std::size_t j = 0; j < 6; ++j) {
        CHECK(z.phi_d[j] == 0.0);
        CHECK(z.phi_f[j] == 0.0);
        CHECK(z.phi_q[j] == 0.0);
    }
}

TEST_SUITE_END();
