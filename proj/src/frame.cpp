#include "frame.hpp"

#include <cmath>

namespace ccbs::detail {

namespace {

PsiVector load(double x, double l1, double l2, double l3) { return {x * l1, x * l2, x * l3}; }

PsiVector operator-(const PsiVector& a, const PsiVector& b) {
    return {a.psi1 - b.psi1, a.psi2 - b.psi2, a.psi3 - b.psi3};
}

}  // namespace

LegFrame::LegFrame(double t_, double S_, double U_, double T_, const MarketModel& model)
    : t(t_), S(S_), U(U_), T(T_), delta(T_ - U_), model_(&model) {
    if (!(S <= U && U < T)) throw DomainError("accrual dates must satisfy S <= U < T");
    if (!(t <= T)) throw DomainError("time is past the period end");
    const auto& d = model.domestic;
    const auto& f = model.foreign;
    const auto& sp = model.spreads;

    cT_ = affine_coeffs(t, T, d);
    hT_ = affine_coeffs(t, T, f);
    A_ = collateral_discount(t, T, sp);
    lam_t_ = lambda_factor(t, T, sp);
    cq_ = currency_convexity(t, T, model);
    drift_d_ = accrual_drift(t, T, d);
    drift_f_ = accrual_drift(t, T, f);
    if (t < U) {
        cU_ = affine_coeffs(t, U, d);
        hU_ = affine_coeffs(t, U, f);
        n_ut_ = cT_.n - cU_.n;
        nh_ut_ = hT_.n - hU_.n;
        theta_d_ = forward_accrual_drift(t, U, T, d);
        theta_f_ = forward_accrual_drift(t, U, T, f);
    }
    if (t < S) {
        cS_ = affine_coeffs(t, S, d);
        hS_ = affine_coeffs(t, S, f);
        lam_s_ = lambda_factor(t, S, sp);
        N_su_ = convexity_N(t, S, U, d);
        N_st_ = convexity_N(t, S, T, d);
        G_su_ = gamma_factor(t, S, U, model);
        G_st_ = gamma_factor(t, S, T, model);
    }
}

Regime LegFrame::regime() const {
    if (t < S) return Regime::pre_s;
    if (t < U) return Regime::s_to_u;
    return Regime::in_period;
}

void LegFrame::require_q_s(const State& x) const {
    if (!(x.q_s > 0.0)) throw StateError("Q at the swap start is required once t >= S");
}

void LegFrame::require_acc(const State& x) const {
    if (!std::isfinite(x.int_d) || !std::isfinite(x.int_f))
        throw StateError("realized accumulators over [U,t] are required once t >= U");
}

LegValues LegFrame::values(const State& x, double kappa) const {
    LegValues v{};
    const double kt = 1.0 - kappa * delta;
    const double bT = std::exp(cT_.m - cT_.n * x.r_d);
    const double bhT = std::exp(hT_.m - hT_.n * x.r_f);
    const double fq_part = A_ * lam_t_ * x.q;

    v.xf2 = fq_part * bhT;
    if (t < U) {
        v.xf1 = fq_part * std::exp(hU_.m - hU_.n * x.r_f);
    } else {
        require_acc(x);
        v.xf1 = fq_part * std::exp(x.int_f);
    }

    v.xp1 = fq_part * bhT;
    switch (regime()) {
        case Regime::pre_s: {
            const double bS = std::exp(cS_.m - cS_.n * x.r_d);
            const double bU = std::exp(cU_.m - cU_.n * x.r_d);
            const double bhS = std::exp(hS_.m - hS_.n * x.r_f);
            const double b_su = bU / bS * std::exp(N_su_);
            const double b_st = bT / bS * std::exp(N_st_);
            const double ups = A_ * lam_s_ * x.q * bhS;
            v.xd1 = ups * G_su_ * b_su;
            v.xd2_unit = ups * G_st_ * b_st;
            v.xp2 = v.xd2_unit;
            break;
        }
        case Regime::s_to_u:
            require_q_s(x);
            v.xd1 = A_ * x.q_s * std::exp(cU_.m - cU_.n * x.r_d);
            v.xd2_unit = A_ * x.q_s * bT;
            v.xp2 = v.xd2_unit;
            break;
        case Regime::in_period:
            require_q_s(x);
            require_acc(x);
            v.xd1 = A_ * x.q_s * std::exp(x.int_d);
            v.xd2_unit = A_ * x.q_s * bT;
            v.xp2 = v.xd2_unit;
            break;
    }
    v.xd2 = kt * v.xd2_unit;
    return v;
}

LegFutures LegFrame::futures(const State& x) const {
    const auto& d = model_->domestic;
    const auto& f = model_->foreign;
    LegFutures r{};
    double gd, gf, ld, lf;
    if (t < U) {
        ld = n_ut_ * x.r_d + theta_d_;
        lf = nh_ut_ * x.r_f + theta_f_;
        gd = n_ut_;
        gf = nh_ut_;
    } else {
        require_acc(x);
        ld = x.int_d + cT_.n * x.r_d + drift_d_;
        lf = x.int_f + hT_.n * x.r_f + drift_f_;
        gd = cT_.n;
        gf = hT_.n;
    }
    const double ed = std::exp(ld), ef = std::exp(lf);
    r.fd = std::expm1(ld) / delta;
    r.ff = std::expm1(lf) / delta;
    r.nu_d = ed / delta * gd * d.sigma;
    r.nu_f = ef / delta * gf * f.sigma;
    r.fq = x.q * lam_t_ * std::exp(hT_.m - hT_.n * x.r_f - cT_.m + cT_.n * x.r_d + cq_);
    r.nu_q = {d.sigma * cT_.n * r.fq, -f.sigma * hT_.n * r.fq, model_->sigma_q * r.fq};
    return r;
}

FuturesVols LegFrame::vols(const State& x) const {
    const auto fu = futures(x);
    return {fu.nu_d, x.q * fu.nu_f, fu.nu_q};
}

PsiVector LegFrame::psi(Component c, const State& x, double kappa) const {
    const auto v = values(x, kappa);
    const double s = model_->domestic.sigma;
    const double sh = model_->foreign.sigma;
    const double sq = model_->sigma_q;
    switch (c) {
        case Component::foreign_leg:
            if (t < U) return load(v.xf1, 0.0, -hU_.n * sh, sq) - load(v.xf2, 0.0, -hT_.n * sh, sq);
            return load(v.xf1, 0.0, 0.0, sq) - load(v.xf2, 0.0, -hT_.n * sh, sq);
        case Component::domestic_leg:
            switch (regime()) {
                case Regime::pre_s:
                    return load(v.xd1, -(cU_.n - cS_.n) * s, -hS_.n * sh, sq) -
                           load(v.xd2, -(cT_.n - cS_.n) * s, -hS_.n * sh, sq);
                case Regime::s_to_u:
                    return load(v.xd1, -cU_.n * s, 0.0, 0.0) - load(v.xd2, -cT_.n * s, 0.0, 0.0);
                case Regime::in_period:
                    return load(v.xd2, cT_.n * s, 0.0, 0.0);
            }
            break;
        case Component::principal:
            if (regime() == Regime::pre_s)
                return load(v.xp1, 0.0, -hT_.n * sh, sq) - load(v.xp2, -(cT_.n - cS_.n) * s, -hS_.n * sh, sq);
            return load(v.xp1, 0.0, -hT_.n * sh, sq) - load(v.xp2, -cT_.n * s, 0.0, 0.0);
    }
    return {};
}

FuturesHedge LegFrame::closed_form(Component c, const State& x, double kappa) const {
    const auto v = values(x, kappa);
    const auto fu = futures(x);
    const double kd = delta / (1.0 + delta * fu.fd);
    const double kf = delta / (1.0 + delta * fu.ff);
    FuturesHedge h;
    switch (c) {
        case Component::foreign_leg: {
            const double xf = v.xf1 - v.xf2;
            const double z = t < U ? cT_.n / n_ut_ : 1.0;
            h.phi_d = -xf * z * kd;
            h.phi_f = v.xf1 / x.q * kf;
            h.phi_q = xf / fu.fq;
            break;
        }
        case Component::domestic_leg:
            switch (regime()) {
                case Regime::pre_s: {
                    const double zh = cS_.n / n_ut_, zt = cU_.n / n_ut_, z = cT_.n / n_ut_;
                    const double zhf = hS_.n / nh_ut_, zf = hT_.n / nh_ut_;
                    const double xd = v.xd1 - v.xd2;
                    h.phi_d = ((zh - zt - z) * v.xd1 + (2.0 * z - zh) * v.xd2) * kd;
                    h.phi_f = xd / x.q * (zf - zhf) * kf;
                    h.phi_q = xd / fu.fq;
                    break;
                }
                case Regime::s_to_u: {
                    const double zt = cU_.n / n_ut_, z = cT_.n / n_ut_;
                    h.phi_d = (-zt * v.xd1 + z * v.xd2) * kd;
                    break;
                }
                case Regime::in_period:
                    h.phi_d = v.xd2 * kd;
                    break;
            }
            break;
        case Component::principal: {
            const double xp = v.xp1 - v.xp2;
            switch (regime()) {
                case Regime::pre_s: {
                    const double zh = cS_.n / n_ut_, z = cT_.n / n_ut_;
                    const double zhf = hS_.n / nh_ut_, zf = hT_.n / nh_ut_;
                    h.phi_d = (-z * v.xp1 + (2.0 * z - zh) * v.xp2) * kd;
                    h.phi_f = v.xp2 / x.q * (zhf - zf) * kf;
                    h.phi_q = xp / fu.fq;
                    break;
                }
                case Regime::s_to_u:
                    h.phi_d = -xp * (cT_.n / n_ut_) * kd;
                    h.phi_q = v.xp1 / fu.fq;
                    break;
                case Regime::in_period:
                    h.phi_d = -xp * kd;
                    h.phi_q = v.xp1 / fu.fq;
                    break;
            }
            break;
        }
    }
    return h;
}

SwapFrame::SwapFrame(double t_, const CcbsSpec& spec, const MarketModel& model)
    : t(t_), spec_(&spec), model_(&model) {
    const std::size_t n = spec.periods();
    first_ = n;
    for (std::size_t j = 0; j < n; ++j) {
        if (spec.tenor[j + 1] >= t) {
            first_ = j;
            break;
        }
    }
    for (std::size_t j = first_; j < n; ++j) {
        const Dates d = spec.dates(j);
        legs_.emplace_back(t, d.S, d.U, d.T, model);
    }
}

PriceBreakdown SwapFrame::price(const SwapState& x) const {
    const std::size_t n = spec_->periods();
    const double pf = spec_->notional_f;
    PriceBreakdown out;
    out.x_f.assign(n, 0.0);
    out.x_d.assign(n, 0.0);
    for (std::size_t i = 0; i < legs_.size(); ++i) {
        const auto& leg = legs_[i];
        if (!(leg.T > t)) continue;
        const std::size_t j = first_ + i;
        const auto v = leg.values(x.period_state(j), spec_->kappa);
        out.x_f[j] = pf * (v.xf1 - v.xf2);
        out.x_d[j] = pf * (v.xd1 - v.xd2);
        out.kappa_coeff += pf * leg.delta * v.xd2_unit;
        if (j + 1 == n) out.principal = pf * (v.xp1 - v.xp2);
    }
    out.total = out.principal;
    for (std::size_t j = 0; j < n; ++j) out.total += out.x_f[j] - out.x_d[j];
    return out;
}

HedgePosition SwapFrame::hedge(const SwapState& x, double bank_h) const {
    const std::size_t n = spec_->periods();
    HedgePosition h;
    h.phi_d.assign(n, 0.0);
    h.phi_f.assign(n, 0.0);
    h.phi_q.assign(n, 0.0);
    for (std::size_t i = 0; i < legs_.size(); ++i) {
        const auto& leg = legs_[i];
        if (!(leg.T > t)) continue;
        const std::size_t j = first_ + i;
        const State s = x.period_state(j);
        const double k = spec_->kappa;
        PsiVector p = leg.psi(Component::foreign_leg, s, k) - leg.psi(Component::domestic_leg, s, k);
        if (j + 1 == n) {
            const PsiVector pp = leg.psi(Component::principal, s, k);
            p = {p.psi1 + pp.psi1, p.psi2 + pp.psi2, p.psi3 + pp.psi3};
        }
        const auto phi = phi_from_psi(p, leg.vols(s));
        h.phi_d[j] = spec_->notional_f * phi.phi_d;
        h.phi_f[j] = spec_->notional_f * phi.phi_f;
        h.phi_q[j] = spec_->notional_f * phi.phi_q;
    }
    h.value = price(x).total;
    const double beta = model_->spreads.beta;
    h.phi0 = (1.0 - beta) * h.value / bank_h;
    h.collateral = -beta * h.value;
    return h;
}

void SwapFrame::futures(const SwapState& x, std::vector<LegFutures>& out) const {
    out.resize(spec_->periods());
    for (std::size_t i = 0; i < legs_.size(); ++i) out[first_ + i] = legs_[i].futures(x.period_state(first_ + i));
}

}  // namespace ccbs::detail
