#pragma once

#include <array>
#include <vector>

#include "ccbs/pricing.hpp"

namespace ccbs {

// loadings of dX (undiscounted) onto (Z1, Z2, Z3)
struct PsiVector {
    double psi1 = 0.0;
    double psi2 = 0.0;
    double psi3 = 0.0;
};

enum class Component { domestic_leg, foreign_leg, principal };

// interest exchange of one period from the long side: foreign leg minus domestic leg
PsiVector psi_interest(const State& state, const Dates& dates, double kappa, const MarketModel& model);
PsiVector psi_principal(const State& state, double S, double T, const MarketModel& model);
PsiVector psi_component(Component c, const State& state, const Dates& dates, double kappa,
                        const MarketModel& model);

struct FuturesVols {
    double nu_d = 0.0;                 // AONIA, on Z1
    double nu_fq = 0.0;                // Q * nu^f, on Z2
    std::array<double, 3> nu_q{};      // currency futures
};

struct FuturesHedge {
    double phi_d = 0.0;
    double phi_f = 0.0;
    double phi_q = 0.0;
};

FuturesHedge phi_from_psi(const PsiVector& psi, const FuturesVols& nus);

// futures vols of the instruments attached to the period (AONIA/SOFR on [U,T], currency futures at T)
FuturesVols period_futures_vols(const State& state, const Dates& dates, const MarketModel& model);

// psi -> phi with the period's instruments
FuturesHedge hedge_pipeline(Component c, const State& state, const Dates& dates, double kappa,
                            const MarketModel& model);

// direct per-regime formulas in prices and zeta ratios
FuturesHedge hedge_closed_form(Component c, const State& state, const Dates& dates, double kappa,
                               const MarketModel& model);

struct HedgePosition {
    double phi0 = 0.0;
    std::vector<double> phi_d;  // per period contract
    std::vector<double> phi_f;
    std::vector<double> phi_q;
    double collateral = 0.0;
    double value = 0.0;
};

// bank_h = B^h_t, the hedge-funding account value
HedgePosition hedge_ccbs(const SwapState& state, const CcbsSpec& spec, const MarketModel& model,
                         double bank_h = 1.0);

}  // namespace ccbs
