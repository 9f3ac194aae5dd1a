#include "ccbs/hedging.hpp"

#include <cmath>

#include "frame.hpp"

namespace ccbs {

namespace {

State with_dummy_acc(State x, double U) {
    if (x.t >= U) {
        if (!std::isfinite(x.int_d)) x.int_d = 0.0;
        if (!std::isfinite(x.int_f)) x.int_f = 0.0;
    }
    return x;
}

}  // namespace

PsiVector psi_component(Component c, const State& state, const Dates& dates, double kappa,
                        const MarketModel& model) {
    const detail::LegFrame leg(state.t, dates.S, dates.U, dates.T, model);
    return leg.psi(c, state, kappa);
}

PsiVector psi_interest(const State& state, const Dates& dates, double kappa, const MarketModel& model) {
    const detail::LegFrame leg(state.t, dates.S, dates.U, dates.T, model);
    const auto f = leg.psi(Component::foreign_leg, state, kappa);
    const auto d = leg.psi(Component::domestic_leg, state, kappa);
    return {f.psi1 - d.psi1, f.psi2 - d.psi2, f.psi3 - d.psi3};
}

PsiVector psi_principal(const State& state, double S, double T, const MarketModel& model) {
    if (!(S < T)) throw DomainError("principal exchange needs S < T");
    const detail::LegFrame leg(state.t, S, S, T, model);
    return leg.psi(Component::principal, with_dummy_acc(state, S), 0.0);
}

FuturesHedge phi_from_psi(const PsiVector& psi, const FuturesVols& nus) {
    if (nus.nu_q[2] == 0.0 || nus.nu_fq == 0.0 || nus.nu_d == 0.0)
        throw NumericError("futures volatility matrix is singular");
    FuturesHedge h;
    h.phi_q = psi.psi3 / nus.nu_q[2];
    h.phi_f = (psi.psi2 - h.phi_q * nus.nu_q[1]) / nus.nu_fq;
    h.phi_d = (psi.psi1 - h.phi_q * nus.nu_q[0]) / nus.nu_d;
    return h;
}

FuturesVols period_futures_vols(const State& state, const Dates& dates, const MarketModel& model) {
    const detail::LegFrame leg(state.t, dates.S, dates.U, dates.T, model);
    return leg.vols(state);
}

FuturesHedge hedge_pipeline(Component c, const State& state, const Dates& dates, double kappa,
                            const MarketModel& model) {
    const detail::LegFrame leg(state.t, dates.S, dates.U, dates.T, model);
    return phi_from_psi(leg.psi(c, state, kappa), leg.vols(state));
}

FuturesHedge hedge_closed_form(Component c, const State& state, const Dates& dates, double kappa,
                               const MarketModel& model) {
    const detail::LegFrame leg(state.t, dates.S, dates.U, dates.T, model);
    return leg.closed_form(c, state, kappa);
}

HedgePosition hedge_ccbs(const SwapState& state, const CcbsSpec& spec, const MarketModel& model, double bank_h) {
    spec.validate();
    SwapState x = state;
    if (std::isnan(x.q_s)) x.q_s = spec.q_at_inception;
    if (x.t >= spec.maturity()) {
        HedgePosition h;
        h.phi_d.assign(spec.periods(), 0.0);
        h.phi_f.assign(spec.periods(), 0.0);
        h.phi_q.assign(spec.periods(), 0.0);
        return h;
    }
    const detail::SwapFrame frame(x.t, spec, model);
    return frame.hedge(x, bank_h);
}

}  // namespace ccbs
