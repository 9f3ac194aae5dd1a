#include "ccbs/futures.hpp"

#include <algorithm>
#include <cmath>

#include "frame.hpp"

namespace ccbs {

AccrualPeriod AccrualPeriod::make(double u, double t) {
    if (!(u < t)) throw DomainError("accrual period needs start < end");
    return {u, t};
}

namespace {

State rate_state(double t, double r_d, double r_f, double q, double realized_d, double realized_f,
                 const AccrualPeriod& p) {
    State x;
    x.t = t;
    x.r_d = r_d;
    x.r_f = r_f;
    x.q = q;
    if (t >= p.start_u) {
        if (!(realized_d > 0.0) || !(realized_f > 0.0))
            throw StateError("realized accumulator exp(int_U^t r) is required once t >= U");
        x.int_d = std::log(realized_d);
        x.int_f = std::log(realized_f);
    }
    return x;
}

void check_period(double t, const AccrualPeriod& p) {
    if (!(p.start_u < p.end_t)) throw DomainError("accrual period needs start < end");
    if (!(t >= 0.0 && t <= p.end_t)) throw DomainError("futures valuation time must lie in [0, T]");
}

}  // namespace

FuturesQuote aonia_futures(double t, double r_d, double realized, const AccrualPeriod& period,
                           const MarketModel& model) {
    check_period(t, period);
    const detail::LegFrame leg(t, std::min(t, period.start_u), period.start_u, period.end_t, model);
    const auto fu = leg.futures(rate_state(t, r_d, 0.0, 1.0, realized, 1.0, period));
    FuturesQuote q;
    q.kind = FuturesKind::aonia;
    q.value = t == period.end_t ? (realized - 1.0) / period.delta() : fu.fd;
    q.vol_loadings = {fu.nu_d, 0.0, 0.0};
    return q;
}

FuturesQuote sofr_futures(double t, double r_f, double realized, const AccrualPeriod& period,
                          const MarketModel& model, double q) {
    check_period(t, period);
    const detail::LegFrame leg(t, std::min(t, period.start_u), period.start_u, period.end_t, model);
    const auto fu = leg.futures(rate_state(t, 0.0, r_f, 1.0, 1.0, realized, period));
    FuturesQuote out;
    out.kind = FuturesKind::sofr;
    out.value = t == period.end_t ? (realized - 1.0) / period.delta() : fu.ff;
    out.vol_loadings = {0.0, fu.nu_f, 0.0};
    if (std::isfinite(q)) out.nu_fq = q * fu.nu_f;
    return out;
}

FuturesQuote currency_futures(double t, double r_d, double r_f, double q, double maturity, const MarketModel& model) {
    if (!(q > 0.0)) throw DomainError("exchange rate must be > 0");
    if (!(t <= maturity)) throw DomainError("currency futures valuation time is past maturity");
    const auto c = affine_coeffs(t, maturity, model.domestic);
    const auto h = affine_coeffs(t, maturity, model.foreign);
    FuturesQuote out;
    out.kind = FuturesKind::currency;
    out.value = q * lambda_factor(t, maturity, model.spreads) *
                std::exp(h.m - h.n * r_f - c.m + c.n * r_d + currency_convexity(t, maturity, model));
    out.vol_loadings = {model.domestic.sigma * c.n * out.value, -model.foreign.sigma * h.n * out.value,
                        model.sigma_q * out.value};
    return out;
}

ThetaAdjustments theta_adjustments(double t, const AccrualPeriod& period, const MarketModel& model, double int_d,
                                   double int_f) {
    check_period(t, period);
    const double T = period.end_t;
    ThetaAdjustments th{};
    if (t < period.start_u) {
        th.theta_d = forward_accrual_drift(t, period.start_u, T, model.domestic);
        th.theta_f = forward_accrual_drift(t, period.start_u, T, model.foreign);
    } else {
        if (!std::isfinite(int_d) || !std::isfinite(int_f))
            throw StateError("in-period adjustments need the realized integrals over [U,t]");
        th.theta_d = int_d + accrual_drift(t, T, model.domestic);
        th.theta_f = int_f + accrual_drift(t, T, model.foreign);
    }
    th.theta_q = affine_coeffs(t, T, model.domestic).m - affine_coeffs(t, T, model.foreign).m -
                 model.spreads.int_lambda_q(t, T) - currency_convexity(t, T, model);
    return th;
}

MarketVars invert_market_vars(const FuturesQuote& fd, const FuturesQuote& ff, const FuturesQuote& fq, double t,
                              const AccrualPeriod& period, const MarketModel& model, double int_d, double int_f) {
    check_period(t, period);
    if (!(t < period.end_t)) throw NumericError("market-variable inversion is singular at the period end");
    const double delta = period.delta();
    if (!(1.0 + delta * fd.value > 0.0) || !(1.0 + delta * ff.value > 0.0))
        throw DomainError("rate futures must satisfy 1 + delta F > 0");
    if (!(fq.value > 0.0)) throw DomainError("currency futures price must be > 0");
    const auto th = theta_adjustments(t, period, model, int_d, int_f);
    const double T = period.end_t;
    const double nT = affine_n(t, T, model.domestic.b);
    const double nhT = affine_n(t, T, model.foreign.b);
    double gd = nT, gf = nhT;
    if (t < period.start_u) {
        gd -= affine_n(t, period.start_u, model.domestic.b);
        gf -= affine_n(t, period.start_u, model.foreign.b);
    }
    if (gd == 0.0 || gf == 0.0) throw NumericError("market-variable inversion is singular (zero zeta denominator)");
    MarketVars v{};
    v.r_d = (std::log1p(delta * fd.value) - th.theta_d) / gd;
    v.r_f = (std::log1p(delta * ff.value) - th.theta_f) / gf;
    v.q = fq.value * std::exp(th.theta_q - nT * v.r_d + nhT * v.r_f);
    return v;
}

ZetaRatios zeta_ratios(double t, double S, const AccrualPeriod& period, const VasicekParams& p) {
    if (!(t < period.start_u)) throw DomainError("zeta ratios are defined for t < U");
    const double nU = affine_n(t, period.start_u, p.b);
    const double nT = affine_n(t, period.end_t, p.b);
    const double nS = t <= S ? affine_n(t, S, p.b) : 0.0;
    const double d = nT - nU;
    return {nS / d, nU / d, nT / d};
}

}  // namespace ccbs
