#include "ccbs/pricing.hpp"

#include <algorithm>
#include <cmath>

#include "frame.hpp"

namespace ccbs {

LegPrice price_interest_leg(const State& state, const Dates& dates, double kappa, const MarketModel& model) {
    const detail::LegFrame leg(state.t, dates.S, dates.U, dates.T, model);
    const auto v = leg.values(state, kappa);
    return {v.xf1 - v.xf2, v.xd1 - v.xd2};
}

double price_principal_exchange(const State& state, double S, double T, const MarketModel& model) {
    if (!(S < T)) throw DomainError("principal exchange needs S < T");
    // the accrual start does not enter the principal; the leg accumulators are dummies
    const double U = S;
    State x = state;
    if (x.t >= U) {
        if (!std::isfinite(x.int_d)) x.int_d = 0.0;
        if (!std::isfinite(x.int_f)) x.int_f = 0.0;
    }
    const detail::LegFrame leg(state.t, S, U, T, model);
    const auto v = leg.values(x, 0.0);
    return v.xp1 - v.xp2;
}

void CcbsSpec::validate() const {
    if (tenor.size() < 2) throw ConfigError("tenor needs at least two dates");
    for (std::size_t i = 0; i < tenor.size(); ++i) {
        if (!std::isfinite(tenor[i])) throw ConfigError("tenor dates must be finite");
        if (i > 0 && !(tenor[i] > tenor[i - 1])) throw ConfigError("tenor dates must increase strictly");
    }
    if (tenor.front() < 0.0) throw ConfigError("tenor must start at t >= 0");
    if (!(notional_f > 0.0) || !std::isfinite(notional_f)) throw ConfigError("notional_f must be > 0");
    if (!std::isfinite(kappa)) throw ConfigError("kappa must be finite");
    if (!std::isnan(q_at_inception) && !(q_at_inception > 0.0)) throw ConfigError("q_at_inception must be > 0");
}

CcbsSpec CcbsSpec::regular(double start, std::size_t periods, double step, double kappa, double notional_f) {
    CcbsSpec s;
    for (std::size_t j = 0; j <= periods; ++j) s.tenor.push_back(start + step * static_cast<double>(j));
    s.kappa = kappa;
    s.notional_f = notional_f;
    return s;
}

SwapState SwapState::initial(const MarketModel& model, const CcbsSpec& spec) {
    SwapState x;
    x.t = 0.0;
    x.r_d = model.r_d0;
    x.r_f = model.r_f0;
    x.q = model.q0;
    x.int_d.assign(spec.periods(), 0.0);
    x.int_f.assign(spec.periods(), 0.0);
    if (spec.start() == 0.0) x.q_s = model.q0;
    return x;
}

State SwapState::period_state(std::size_t j) const {
    State s;
    s.t = t;
    s.r_d = r_d;
    s.r_f = r_f;
    s.q = q;
    s.q_s = q_s;
    if (j < int_d.size()) s.int_d = int_d[j];
    if (j < int_f.size()) s.int_f = int_f[j];
    return s;
}

double PriceBreakdown::interest() const {
    double s = 0.0;
    for (std::size_t j = 0; j < x_f.size(); ++j) s += x_f[j] - x_d[j];
    return s;
}

PriceBreakdown price_ccbs(const SwapState& state, const CcbsSpec& spec, const MarketModel& model) {
    spec.validate();
    SwapState x = state;
    if (std::isnan(x.q_s)) x.q_s = spec.q_at_inception;
    if (x.t >= spec.maturity()) {
        PriceBreakdown out;
        out.x_f.assign(spec.periods(), 0.0);
        out.x_d.assign(spec.periods(), 0.0);
        return out;
    }
    const detail::SwapFrame frame(x.t, spec, model);
    return frame.price(x);
}

SpreadQuote fair_spread(const SwapState& state, const CcbsSpec& spec, const MarketModel& model) {
    if (!(state.t <= spec.start())) throw DomainError("fair spread is quoted for t <= T0");
    CcbsSpec s0 = spec;
    s0.kappa = 0.0;
    const auto p = price_ccbs(state, s0, model);
    SpreadQuote q{};
    for (std::size_t j = 0; j < p.x_f.size(); ++j) {
        q.i_f += p.x_f[j];
        q.i_d += p.x_d[j];
    }
    q.i_p = p.principal;
    q.k_d = p.kappa_coeff;
    if (!(q.k_d > 0.0)) throw NumericError("spread annuity K^d is not positive");
    q.value = (q.i_f - q.i_d + q.i_p) / q.k_d;
    return q;
}

double swaption_payoff(double v, Side side) {
    return side == Side::payer ? std::max(v, 0.0) : std::max(-v, 0.0);
}

}  // namespace ccbs
