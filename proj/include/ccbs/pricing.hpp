#pragma once

#include <vector>

#include "ccbs/futures.hpp"
#include "ccbs/model.hpp"

namespace ccbs {

// Observables of one accrual period at time t. q_s is Q at the swap start (needed from S on);
// int_d, int_f are int_U^t r du (needed from U on).
struct State {
    double t = 0.0;
    double r_d = 0.0;
    double r_f = 0.0;
    double q = 1.0;
    double q_s = kNaN;
    double int_d = kNaN;
    double int_f = kNaN;
};

struct Dates {
    double S;
    double U;
    double T;
};

// Unit foreign notional; the domestic leg carries Q_S, i.e. P^d = Q_S P^f.
struct LegPrice {
    double x_f;
    double x_d;
};

LegPrice price_interest_leg(const State& state, const Dates& dates, double kappa, const MarketModel& model);
double price_principal_exchange(const State& state, double S, double T, const MarketModel& model);

struct CcbsSpec {
    std::vector<double> tenor;  // T_0 < T_1 < ... < T_n
    double kappa = 0.0;         // decimal per year
    double notional_f = 1.0;    // USD
    double q_at_inception = kNaN;

    std::size_t periods() const { return tenor.empty() ? 0 : tenor.size() - 1; }
    double start() const { return tenor.front(); }
    double maturity() const { return tenor.back(); }
    double delta(std::size_t j) const { return tenor[j + 1] - tenor[j]; }
    Dates dates(std::size_t j) const { return {tenor.front(), tenor[j], tenor[j + 1]}; }
    void validate() const;

    static CcbsSpec regular(double start, std::size_t periods, double step, double kappa, double notional_f);
};

// Swap-level observables; int_d[j], int_f[j] hold int_{T_j}^{t} r du for the period in progress.
struct SwapState {
    double t = 0.0;
    double r_d = 0.0;
    double r_f = 0.0;
    double q = 1.0;
    double q_s = kNaN;
    std::vector<double> int_d;
    std::vector<double> int_f;

    static SwapState initial(const MarketModel& model, const CcbsSpec& spec);
    State period_state(std::size_t j) const;
};

struct PriceBreakdown {
    std::vector<double> x_f;  // per period, AUD
    std::vector<double> x_d;  // per period, AUD, at the contract spread
    double principal = 0.0;
    double total = 0.0;
    double kappa_coeff = 0.0;  // K^d: d total / d kappa = -K^d

    double interest() const;
};

PriceBreakdown price_ccbs(const SwapState& state, const CcbsSpec& spec, const MarketModel& model);

struct SpreadQuote {
    double value;
    double i_f;
    double i_d;
    double i_p;
    double k_d;
};

SpreadQuote fair_spread(const SwapState& state, const CcbsSpec& spec, const MarketModel& model);

enum class Side { payer, receiver };
double swaption_payoff(double ccbs_value_at_t0, Side side);

}  // namespace ccbs
