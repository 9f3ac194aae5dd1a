#pragma once

#include <array>
#include <limits>

#include "ccbs/model.hpp"

namespace ccbs {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct AccrualPeriod {
    double start_u = 0.0;
    double end_t = 0.0;

    double delta() const { return end_t - start_u; }
    static AccrualPeriod make(double u, double t);
};

enum class FuturesKind { aonia, sofr, currency };

struct FuturesQuote {
    FuturesKind kind = FuturesKind::aonia;
    double value = 0.0;                        // futures rate, or AUD per USD
    std::array<double, 3> vol_loadings{};      // onto (Z1, Z2, Z3)
    double nu_fq = kNaN;                       // Q * nu^f, SOFR only and only when Q is supplied
};

// realized = exp(int_U^t r du); required once t >= U
FuturesQuote aonia_futures(double t, double r_d, double realized, const AccrualPeriod& period,
                           const MarketModel& model);
FuturesQuote sofr_futures(double t, double r_f, double realized, const AccrualPeriod& period,
                          const MarketModel& model, double q = kNaN);
FuturesQuote currency_futures(double t, double r_d, double r_f, double q, double maturity,
                              const MarketModel& model);

struct ThetaAdjustments {
    double theta_d;
    double theta_f;
    double theta_q;
};

// int_d, int_f are int_U^t r du, required for t >= U
ThetaAdjustments theta_adjustments(double t, const AccrualPeriod& period, const MarketModel& model,
                                   double int_d = kNaN, double int_f = kNaN);

struct MarketVars {
    double r_d;
    double r_f;
    double q;
};

// fq must be the currency futures maturing at the period end
MarketVars invert_market_vars(const FuturesQuote& fd, const FuturesQuote& ff, const FuturesQuote& fq, double t,
                              const AccrualPeriod& period, const MarketModel& model, double int_d = kNaN,
                              double int_f = kNaN);

// zeta ratios n(t,S)/n(t,U,T), n(t,U)/n(t,U,T), n(t,T)/n(t,U,T) for t < U
struct ZetaRatios {
    double hat;
    double tilde;
    double plain;
};
ZetaRatios zeta_ratios(double t, double S, const AccrualPeriod& period, const VasicekParams& p);

}  // namespace ccbs
