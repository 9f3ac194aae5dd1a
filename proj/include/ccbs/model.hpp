#pragma once

#include <vector>

#include "ccbs/errors.hpp"

namespace ccbs {

// dr = (a - b r) dt + sigma dZ
struct VasicekParams {
    double a = 0.0;
    double b = 1.0;
    double sigma = 0.0;
};

struct CorrelationSet {
    double rho12 = 0.0;
    double rho13 = 0.0;
    double rho23 = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 1.0;

    // rejects correlation triples that are not positive semidefinite
    static CorrelationSet make(double rho12, double rho13, double rho23);
};

// Right-continuous step function: values[0] on (-inf, knots[0]), values[i] on [knots[i-1], knots[i]),
// values.back() on [knots.back(), inf).
class PiecewiseConstant {
public:
    PiecewiseConstant() : values_{0.0} {}
    PiecewiseConstant(double c) : values_{c} {}  // NOLINT: constants convert implicitly
    PiecewiseConstant(std::vector<double> knots, std::vector<double> values);

    double operator()(double t) const;
    double integral(double t, double u) const;

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

struct SpreadCurves {
    PiecewiseConstant alpha_h;
    PiecewiseConstant alpha_c;
    PiecewiseConstant alpha_d;
    PiecewiseConstant alpha_f;
    double beta = 1.0;

    double alpha_beta(double t) const { return (1.0 - beta) * alpha_h(t) + beta * alpha_c(t); }
    double int_alpha_beta(double t, double u) const {
        return (1.0 - beta) * alpha_h.integral(t, u) + beta * alpha_c.integral(t, u);
    }
    double lambda_q(double t) const { return alpha_d(t) - alpha_f(t); }
    double int_lambda_q(double t, double u) const { return alpha_d.integral(t, u) - alpha_f.integral(t, u); }
};

struct MarketModel {
    VasicekParams domestic;
    VasicekParams foreign;  // a is the foreign-measure drift level
    double sigma_q = 0.0;
    CorrelationSet corr;
    SpreadCurves spreads;
    double r_d0 = 0.0;
    double r_f0 = 0.0;
    double q0 = 1.0;

    // drift level of r^f under the domestic measure
    double c_hat() const { return foreign.a - foreign.sigma * sigma_q * corr.rho23; }
    void validate() const;
};

// The model of the numerical study: a=0.15, b=5, s=0.01 (AUD); a^=0.05, b^=5, s^=0.01 (USD); s~=0.1,
// rho23=rho13=0.1, rho12=0.3, r0=2% both, Q0=1.5, alpha^beta=2%, alpha_d=alpha_f.
MarketModel reference_model();

struct AffineCoeffs {
    double m;
    double n;
};

double affine_n(double t, double u, double b);
AffineCoeffs affine_coeffs(double t, double u, const VasicekParams& p);
double zcb_price(double t, double x, double u, const VasicekParams& p);
double convexity_N(double t, double s, double u, const VasicekParams& p);
double forward_bond_price(double t, double x, double s, double u, const VasicekParams& p);
double gamma_factor(double t, double s, double end, const MarketModel& model);
double lambda_factor(double t, double u, const SpreadCurves& spreads);
double collateral_discount(double t, double u, const SpreadCurves& spreads);

// int_t^u (a n(v,u) + s^2/2 n(v,u)^2) dv, the log-compounding drift of a running accrual
double accrual_drift(double t, double u, const VasicekParams& p);

// int_t^U (a n(v,U,T) + s^2/2 n(v,U,T)^2) dv + accrual_drift(U,T), with n(v,U,T) = n(v,T) - n(v,U)
double forward_accrual_drift(double t, double U, double T, const VasicekParams& p);

// c_Q(t,T) of the currency futures price
double currency_convexity(double t, double T, const MarketModel& model);

}  // namespace ccbs
