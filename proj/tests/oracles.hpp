#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "ccbs/hedging.hpp"
#include "ccbs/pricing.hpp"
#include "ccbs/simulation.hpp"

namespace oracle {

using namespace ccbs;

template <class F>
double quad(F f, double a, double b) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15);
}

inline double n_of(double v, double u, double b) { return (1.0 - std::exp(-b * (u - v))) / b; }

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// m(t,u) = int_t^u (s^2/2 n^2 - a n)
inline double m_quad(double t, double u, const VasicekParams& p) {
    return quad([&](double v) {
        const double n = n_of(v, u, p.b);
        return 0.5 * p.sigma * p.sigma * n * n - p.a * n;
    }, t, u);
}

inline double N_quad(double t, double s, double u, const VasicekParams& p) {
    return quad([&](double v) {
        const double ns = n_of(v, s, p.b);
        return p.sigma * p.sigma * ns * (ns - n_of(v, u, p.b));
    }, t, s);
}

inline double gamma_log_quad(double t, double s, double e, const MarketModel& m) {
    return quad([&](double v) {
        const double d = n_of(v, s, m.domestic.b) - n_of(v, e, m.domestic.b);
        return m.domestic.sigma * d *
               (m.sigma_q * m.corr.rho13 - m.foreign.sigma * n_of(v, s, m.foreign.b) * m.corr.rho12);
    }, t, s);
}

inline double accrual_drift_quad(double t, double u, const VasicekParams& p) {
    return quad([&](double v) {
        const double n = n_of(v, u, p.b);
        return p.a * n + 0.5 * p.sigma * p.sigma * n * n;
    }, t, u);
}

inline double forward_accrual_drift_quad(double t, double U, double T, const VasicekParams& p) {
    const double pre = quad([&](double v) {
        const double n = n_of(v, T, p.b) - n_of(v, U, p.b);
        return p.a * n + 0.5 * p.sigma * p.sigma * n * n;
    }, t, U);
    return pre + accrual_drift_quad(U, T, p);
}

inline double cq_quad(double t, double T, const MarketModel& m) {
    return quad([&](double v) {
        const double n = n_of(v, T, m.domestic.b);
        const double nh = n_of(v, T, m.foreign.b);
        return m.domestic.sigma * n *
               (m.domestic.sigma * n - m.foreign.sigma * nh * m.corr.rho12 + m.sigma_q * m.corr.rho13);
    }, t, T);
}

// largest relative error of every closed-form integral against quadrature over a parameter grid
inline double integrals_vs_quadrature() {
    double worst = 0.0;
    auto upd = [&](double got, double want) { worst = std::max(worst, rel_err(got, want)); };
    MarketModel m = reference_model();
    for (double b : {5.0, 1.0, 0.05, 1e-7}) {
        m.domestic.b = b;
        m.foreign.b = 2.0 * b;
        m.domestic.a = 0.03 * b + 0.01;
        m.foreign.a = 0.01 * b + 0.005;
        for (auto [t, s, u] : {std::array<double, 3>{0.0, 0.5, 1.0}, {0.2, 1.0, 3.0}, {0.0, 2.5, 3.0}}) {
            upd(affine_coeffs(t, u, m.domestic).m, m_quad(t, u, m.domestic));
            upd(affine_coeffs(t, u, m.foreign).m, m_quad(t, u, m.foreign));
            upd(convexity_N(t, s, u, m.domestic), N_quad(t, s, u, m.domestic));
            upd(std::log(gamma_factor(t, s, u, m)), gamma_log_quad(t, s, u, m));
            upd(accrual_drift(t, u, m.domestic), accrual_drift_quad(t, u, m.domestic));
            upd(forward_accrual_drift(t, s, u, m.foreign), forward_accrual_drift_quad(t, s, u, m.foreign));
            upd(currency_convexity(t, u, m), cq_quad(t, u, m));
        }
    }
    return worst;
}

struct Lcg {
    std::mt19937_64 g;
    explicit Lcg(std::uint64_t seed) : g(seed) {}
    double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
};

// forward-start period: S = 0.5, U = 1, T = 1.5
inline Dates test_dates() { return {0.5, 1.0, 1.5}; }

enum class Regime { pre_s, s_to_u, in_period };

inline State random_state(Lcg& rng, Regime r, const Dates& d) {
    State x;
    switch (r) {
        case Regime::pre_s: x.t = rng.uni(0.0, d.S * 0.999); break;
        case Regime::s_to_u: x.t = rng.uni(d.S, d.U * 0.999); break;
        case Regime::in_period: x.t = rng.uni(d.U, d.T * 0.999); break;
    }
    x.r_d = rng.uni(-0.02, 0.08);
    x.r_f = rng.uni(-0.02, 0.08);
    x.q = rng.uni(0.8, 2.2);
    if (x.t >= d.S) x.q_s = rng.uni(0.8, 2.2);
    if (x.t >= d.U) {
        x.int_d = (x.t - d.U) * rng.uni(-0.02, 0.08);
        x.int_f = (x.t - d.U) * rng.uni(-0.02, 0.08);
    }
    return x;
}

// largest relative error of (r_d, r_f, q) recovered from the three futures prices
inline double inversion_roundtrip(std::size_t n, std::uint64_t seed) {
    const MarketModel m = reference_model();
    const Dates d = test_dates();
    const auto period = AccrualPeriod::make(d.U, d.T);
    Lcg rng(seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const State x = random_state(rng, i % 2 ? Regime::pre_s : Regime::in_period, d);
        const double ad = std::isnan(x.int_d) ? 1.0 : std::exp(x.int_d);
        const double af = std::isnan(x.int_f) ? 1.0 : std::exp(x.int_f);
        const auto fd = aonia_futures(x.t, x.r_d, ad, period, m);
        const auto ff = sofr_futures(x.t, x.r_f, af, period, m);
        const auto fq = currency_futures(x.t, x.r_d, x.r_f, x.q, d.T, m);
        const auto v = invert_market_vars(fd, ff, fq, x.t, period, m, x.int_d, x.int_f);
        worst = std::max({worst, std::abs(v.r_d - x.r_d) / std::max(std::abs(x.r_d), 1e-2),
                          std::abs(v.r_f - x.r_f) / std::max(std::abs(x.r_f), 1e-2), rel_err(v.q, x.q)});
    }
    return worst;
}

inline double hedge_rel(const FuturesHedge& a, const FuturesHedge& b) {
    const double scale = std::max({std::abs(b.phi_d), std::abs(b.phi_f), std::abs(b.phi_q), 1e-12});
    return std::max({std::abs(a.phi_d - b.phi_d), std::abs(a.phi_f - b.phi_f), std::abs(a.phi_q - b.phi_q)}) / scale;
}

// largest relative gap between the psi->phi pipeline and the per-regime closed forms
inline double pipeline_vs_closed_form(std::size_t n_per_regime, std::uint64_t seed) {
    const MarketModel m = reference_model();
    const Dates d = test_dates();
    Lcg rng(seed);
    double worst = 0.0;
    for (Regime r : {Regime::pre_s, Regime::s_to_u, Regime::in_period})
        for (Component c : {Component::domestic_leg, Component::foreign_leg, Component::principal})
            for (std::size_t i = 0; i < n_per_regime; ++i) {
                const State x = random_state(rng, r, d);
                const double kappa = rng.uni(-0.01, 0.01);
                worst = std::max(worst, hedge_rel(hedge_pipeline(c, x, d, kappa, m),
                                                  hedge_closed_form(c, x, d, kappa, m)));
            }
    return worst;
}

inline CcbsSpec reference_contract(double kappa = 0.0) { return CcbsSpec::regular(0.0, 6, 0.5, kappa, 1e7); }

inline double fair_spread_zero_price() {
    double worst = 0.0;
    for (double start : {0.0, 1.0}) {
        const MarketModel m = reference_model();
        CcbsSpec s = CcbsSpec::regular(start, 6, 0.5, 0.0, 1e7);
        const SwapState x = SwapState::initial(m, s);
        const auto q = fair_spread(x, s, m);
        const double scale = std::abs(price_ccbs(x, s, m).interest());
        s.kappa = q.value;
        worst = std::max(worst, std::abs(price_ccbs(x, s, m).total) / scale);
    }
    return worst;
}

// totals at three strikes must be collinear
inline double kappa_affinity() {
    const MarketModel m = reference_model();
    double worst = 0.0;
    for (double start : {0.0, 1.0}) {
        const double k[3] = {-0.003, 0.0005, 0.004};
        double p[3];
        for (int i = 0; i < 3; ++i) {
            const CcbsSpec s = CcbsSpec::regular(start, 6, 0.5, k[i], 1e7);
            p[i] = price_ccbs(SwapState::initial(m, s), s, m).total;
        }
        const double interp = p[0] + (p[2] - p[0]) * (k[1] - k[0]) / (k[2] - k[0]);
        worst = std::max(worst, std::abs(p[1] - interp) / std::max({std::abs(p[0]), std::abs(p[1]), std::abs(p[2])}));
    }
    return worst;
}

inline double collateral_neutrality() {
    const CcbsSpec s = reference_contract(-4e-4);
    MarketModel m = reference_model();
    m.spreads.alpha_h = 0.013;
    m.spreads.alpha_c = 0.013;
    m.spreads.beta = 0.0;
    const double base = price_ccbs(SwapState::initial(m, s), s, m).total;
    double worst = 0.0;
    for (double beta : {0.5, 1.0}) {
        m.spreads.beta = beta;
        worst = std::max(worst, rel_err(price_ccbs(SwapState::initial(m, s), s, m).total, base));
    }
    return worst;
}

// F^d_T = R^d(U,T), F^f_T = R^f(U,T), F^q_T = Q_T exactly at settlement
inline bool settlement_identities(std::size_t n, std::uint64_t seed) {
    const MarketModel m = reference_model();
    const auto period = AccrualPeriod::make(0.5, 1.0);
    Lcg rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double acc_d = std::exp(rng.uni(-0.01, 0.04)), acc_f = std::exp(rng.uni(-0.01, 0.04));
        const double q = rng.uni(0.8, 2.2);
        const double rd = (acc_d - 1.0) / period.delta(), rf = (acc_f - 1.0) / period.delta();
        if (aonia_futures(1.0, rng.uni(-0.1, 0.1), acc_d, period, m).value != rd) return false;
        if (sofr_futures(1.0, rng.uni(-0.1, 0.1), acc_f, period, m).value != rf) return false;
        if (currency_futures(1.0, rng.uni(-0.1, 0.1), rng.uni(-0.1, 0.1), q, 1.0, m).value != q) return false;
    }
    return true;
}

struct MartingaleAudit {
    SimResult d_fd, d_ffq, d_fq;  // mean increments over the horizon
};

// Increments of F^d, F^{f,q} (sum of Q dF^f on the grid) and F^q from 0 to horizon, averaged over paths.
inline MartingaleAudit futures_martingale(std::size_t n_paths, double horizon, int steps_per_year, std::uint64_t seed) {
    const MarketModel m = reference_model();
    const auto period = AccrualPeriod::make(0.5, 1.0);
    SimConfig c;
    c.n_paths = n_paths;
    c.seed = seed;
    c.steps_per_year = steps_per_year;
    const auto grid = make_grid(horizon, steps_per_year, {period.start_u});
    const auto paths = simulate_paths(c, grid, m);
    std::vector<double> a(n_paths), b(n_paths), e(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        const auto& p = paths[i];
        const std::size_t iu = p.index_of(period.start_u);
        auto fut = [&](std::size_t k) {
            const double t = p.times[k];
            const double acc_d = t >= period.start_u ? std::exp(p.int_r_d[k] - p.int_r_d[iu]) : 1.0;
            const double acc_f = t >= period.start_u ? std::exp(p.int_r_f[k] - p.int_r_f[iu]) : 1.0;
            return std::array<double, 3>{aonia_futures(t, p.r_d[k], acc_d, period, m).value,
                                         sofr_futures(t, p.r_f[k], acc_f, period, m).value,
                                         currency_futures(t, p.r_d[k], p.r_f[k], p.q[k], period.end_t, m).value};
        };
        auto prev = fut(0);
        const auto first = prev;
        double gain_fq = 0.0;
        for (std::size_t k = 1; k < p.times.size(); ++k) {
            const auto cur = fut(k);
            gain_fq += p.q[k] * (cur[1] - prev[1]);
            prev = cur;
        }
        a[i] = prev[0] - first[0];
        b[i] = gain_fq;
        e[i] = prev[2] - first[2];
    }
    return {summarize(a), summarize(b), summarize(e)};
}

inline bool within(const SimResult& r, double target, double k) {
    return std::abs(r.estimate - target) <= k * r.std_error;
}

// simulate_paths with one worker and with eight; compare every stored double bit for bit
inline bool seed_determinism(std::size_t n_paths) {
    const MarketModel m = reference_model();
    SimConfig c;
    c.n_paths = n_paths;
    c.seed = 77;
    const auto grid = make_grid(3.0, 52, {0.5, 1.0});
    c.threads = 1;
    const auto a = simulate_paths(c, grid, m);
    c.threads = 8;
    const auto b = simulate_paths(c, grid, m);
    for (std::size_t i = 0; i < n_paths; ++i)
        if (a[i].r_d != b[i].r_d || a[i].r_f != b[i].r_f || a[i].q != b[i].q || a[i].int_r_d != b[i].int_r_d ||
            a[i].int_r_f != b[i].int_r_f || a[i].deflator != b[i].deflator)
            return false;
    const auto spec = reference_contract();
    c.threads = 1;
    const auto r1 = mc_price(ccbs_claim(spec, ClaimPart::total), 3.0, c, m, spec.tenor);
    c.threads = 8;
    const auto r8 = mc_price(ccbs_claim(spec, ClaimPart::total), 3.0, c, m, spec.tenor);
    return r1.estimate == r8.estimate && r1.std_error == r8.std_error;
}

}  // namespace oracle
