#pragma once

#include <array>
#include <vector>

#include "ccbs/hedging.hpp"
#include "ccbs/model.hpp"
#include "ccbs/pricing.hpp"

namespace ccbs::detail {

enum class Regime { pre_s, s_to_u, in_period };

struct LegValues {
    double xf1, xf2;    // foreign leg = xf1 - xf2
    double xd1, xd2;    // domestic leg = xd1 - xd2
    double xd2_unit;    // xd2 at kappa = 0
    double xp1, xp2;    // principal = xp1 - xp2
};

struct LegFutures {
    double fd, ff, fq;
    double nu_d, nu_f;
    std::array<double, 3> nu_q;
};

// Deterministic pieces of one accrual period [U,T] of a swap starting at S, frozen at time t.
class LegFrame {
public:
    LegFrame(double t, double S, double U, double T, const MarketModel& model);

    double t, S, U, T, delta;
    Regime regime() const;
    bool foreign_pre_u() const { return t < U; }

    LegValues values(const State& x, double kappa) const;
    LegFutures futures(const State& x) const;
    FuturesVols vols(const State& x) const;
    PsiVector psi(Component c, const State& x, double kappa) const;
    FuturesHedge closed_form(Component c, const State& x, double kappa) const;

    // log(1 + delta F) = a_d + b_d r_d (+ int_d in-period); same for the foreign rate
    double log_fd_const() const { return t < U ? theta_d_ : drift_d_; }
    double log_fd_slope() const { return t < U ? n_ut_ : cT_.n; }

private:
    const MarketModel* model_;
    AffineCoeffs cS_{}, cU_{}, cT_{};
    AffineCoeffs hS_{}, hU_{}, hT_{};
    double n_ut_ = 0.0, nh_ut_ = 0.0;
    double N_su_ = 0.0, N_st_ = 0.0, G_su_ = 1.0, G_st_ = 1.0;
    double A_ = 1.0, lam_t_ = 1.0, lam_s_ = 1.0, cq_ = 0.0;
    double theta_d_ = 0.0, theta_f_ = 0.0;  // pre-U log compounding constants
    double drift_d_ = 0.0, drift_f_ = 0.0;  // in-period accrual drift over [t,T]

    void require_q_s(const State& x) const;
    void require_acc(const State& x) const;
};

class SwapFrame {
public:
    SwapFrame(double t, const CcbsSpec& spec, const MarketModel& model);

    double t;
    const std::vector<LegFrame>& legs() const { return legs_; }
    std::size_t first_leg() const { return first_; }  // legs_[i] is period first_ + i

    PriceBreakdown price(const SwapState& x) const;
    HedgePosition hedge(const SwapState& x, double bank_h) const;
    // futures of every period with T_j >= t; out[j] for period j, untouched otherwise
    void futures(const SwapState& x, std::vector<LegFutures>& out) const;

private:
    const CcbsSpec* spec_;
    const MarketModel* model_;
    std::size_t first_ = 0;
    std::vector<LegFrame> legs_;
};

}  // namespace ccbs::detail
