#include "ccbs/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "expint.hpp"

namespace ccbs {

using detail::ExpPoly;
using detail::n_poly;

namespace {

void require_order(double t, double u, const char* what) {
    if (!(t <= u)) throw DomainError(std::string(what) + ": requires t <= u (t=" + std::to_string(t) +
                                     ", u=" + std::to_string(u) + ")");
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

CorrelationSet CorrelationSet::make(double rho12, double rho13, double rho23) {
    for (double r : {rho12, rho13, rho23})
        if (!(r >= -1.0 && r <= 1.0)) throw DomainError("correlations must lie in [-1, 1]");
    if (std::abs(rho12) >= 1.0) throw DomainError("|rho12| must be < 1");
    CorrelationSet c;
    c.rho12 = rho12;
    c.rho13 = rho13;
    c.rho23 = rho23;
    c.alpha1 = rho13;
    c.alpha2 = (rho23 - rho12 * rho13) / std::sqrt(1.0 - rho12 * rho12);
    double a3sq = 1.0 - rho13 * rho13 - c.alpha2 * c.alpha2;
    if (a3sq < -1e-14) throw DomainError("correlation matrix is not positive semidefinite");
    c.alpha3 = std::sqrt(std::max(a3sq, 0.0));
    return c;
}

PiecewiseConstant::PiecewiseConstant(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (values_.size() != knots_.size() + 1) throw DomainError("step function needs one more value than knots");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i] > knots_[i - 1])) throw DomainError("step function knots must increase strictly");
    for (double v : values_) require_finite(v, "spread value");
    for (double k : knots_) require_finite(k, "spread knot");
}

double PiecewiseConstant::operator()(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    return values_[static_cast<std::size_t>(it - knots_.begin())];
}

double PiecewiseConstant::integral(double t, double u) const {
    if (u < t) return -integral(u, t);
    double s = 0.0, lo = t;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin());
    while (i < knots_.size() && knots_[i] < u) {
        s += values_[i] * (knots_[i] - lo);
        lo = knots_[i];
        ++i;
    }
    return s + values_[i] * (u - lo);
}

void MarketModel::validate() const {
    for (const auto* p : {&domestic, &foreign}) {
        require_finite(p->a, "a");
        require_finite(p->b, "b");
        require_finite(p->sigma, "sigma");
        if (!(p->b > 0.0)) throw DomainError("mean-reversion speed b must be > 0");
        if (!(p->sigma >= 0.0)) throw DomainError("sigma must be >= 0");
    }
    if (!(sigma_q >= 0.0) || !std::isfinite(sigma_q)) throw DomainError("sigma_q must be finite and >= 0");
    (void)CorrelationSet::make(corr.rho12, corr.rho13, corr.rho23);
    if (!(spreads.beta >= 0.0) || !std::isfinite(spreads.beta)) throw DomainError("beta must be finite and >= 0");
    require_finite(r_d0, "r_d0");
    require_finite(r_f0, "r_f0");
    if (!(q0 > 0.0) || !std::isfinite(q0)) throw DomainError("q0 must be > 0");
}

MarketModel reference_model() {
    MarketModel m;
    m.domestic = {0.15, 5.0, 0.01};
    m.foreign = {0.05, 5.0, 0.01};
    m.sigma_q = 0.10;
    m.corr = CorrelationSet::make(0.3, 0.1, 0.1);
    m.spreads.alpha_h = 0.02;
    m.spreads.alpha_c = 0.02;
    m.spreads.alpha_d = 0.0;
    m.spreads.alpha_f = 0.0;
    m.spreads.beta = 1.0;
    m.r_d0 = 0.02;
    m.r_f0 = 0.02;
    m.q0 = 1.5;
    return m;
}

double affine_n(double t, double u, double b) {
    require_order(t, u, "affine_n");
    const double tau = u - t;
    const double x = b * tau;
    if (std::abs(x) < 1e-6) return tau * (1.0 - x / 2.0 + x * x / 6.0);
    return -std::expm1(-x) / b;
}

AffineCoeffs affine_coeffs(double t, double u, const VasicekParams& p) {
    require_order(t, u, "affine_coeffs");
    const double tau = u - t;
    if (tau == 0.0) return {0.0, 0.0};
    const ExpPoly n = n_poly(p.b, 0.0, tau);
    const double m = 0.5 * p.sigma * p.sigma * (n * n).integrate(tau) - p.a * n.integrate(tau);
    return {m, affine_n(t, u, p.b)};
}

double zcb_price(double t, double x, double u, const VasicekParams& p) {
    const auto c = affine_coeffs(t, u, p);
    return std::exp(c.m - c.n * x);
}

double convexity_N(double t, double s, double u, const VasicekParams& p) {
    require_order(t, s, "convexity_N");
    require_order(s, u, "convexity_N");
    const double tau = s - t;
    if (tau == 0.0 || u == s) return 0.0;
    const ExpPoly ns = n_poly(p.b, 0.0, tau);
    const ExpPoly nu = n_poly(p.b, u - s, tau);
    return p.sigma * p.sigma * (ns * (ns - nu)).integrate(tau);
}

double forward_bond_price(double t, double x, double s, double u, const VasicekParams& p) {
    require_order(t, s, "forward_bond_price");
    require_order(s, u, "forward_bond_price");
    const auto cs = affine_coeffs(t, s, p);
    const auto cu = affine_coeffs(t, u, p);
    return std::exp(cu.m - cs.m - (cu.n - cs.n) * x + convexity_N(t, s, u, p));
}

double gamma_factor(double t, double s, double end, const MarketModel& model) {
    require_order(t, s, "gamma_factor");
    require_order(s, end, "gamma_factor");
    const double tau = s - t;
    if (tau == 0.0 || end == s) return 1.0;
    const auto& d = model.domestic;
    const auto& f = model.foreign;
    const ExpPoly ns = n_poly(d.b, 0.0, tau);
    const ExpPoly ne = n_poly(d.b, end - s, tau);
    const ExpPoly nhs = n_poly(f.b, 0.0, tau);
    const ExpPoly inner =
        ExpPoly::constant(model.sigma_q * model.corr.rho13) - f.sigma * model.corr.rho12 * nhs;
    return std::exp(d.sigma * ((ns - ne) * inner).integrate(tau));
}

double lambda_factor(double t, double u, const SpreadCurves& spreads) {
    require_order(t, u, "lambda_factor");
    return std::exp(spreads.int_lambda_q(t, u));
}

double collateral_discount(double t, double u, const SpreadCurves& spreads) {
    require_order(t, u, "collateral_discount");
    return std::exp(-spreads.int_alpha_beta(t, u));
}

double accrual_drift(double t, double u, const VasicekParams& p) {
    require_order(t, u, "accrual_drift");
    const double tau = u - t;
    if (tau == 0.0) return 0.0;
    const ExpPoly n = n_poly(p.b, 0.0, tau);
    return (p.a * n + 0.5 * p.sigma * p.sigma * (n * n)).integrate(tau);
}

double forward_accrual_drift(double t, double U, double T, const VasicekParams& p) {
    require_order(t, U, "forward_accrual_drift");
    require_order(U, T, "forward_accrual_drift");
    const double tau = U - t;
    double s = accrual_drift(U, T, p);
    if (tau == 0.0) return s;
    const ExpPoly nut = n_poly(p.b, T - U, tau) - n_poly(p.b, 0.0, tau);
    return s + (p.a * nut + 0.5 * p.sigma * p.sigma * (nut * nut)).integrate(tau);
}

double currency_convexity(double t, double T, const MarketModel& model) {
    require_order(t, T, "currency_convexity");
    const double tau = T - t;
    if (tau == 0.0) return 0.0;
    const auto& d = model.domestic;
    const auto& f = model.foreign;
    const ExpPoly n = n_poly(d.b, 0.0, tau);
    const ExpPoly nh = n_poly(f.b, 0.0, tau);
    const ExpPoly inner = d.sigma * n - f.sigma * model.corr.rho12 * nh +
                          ExpPoly::constant(model.sigma_q * model.corr.rho13);
    return d.sigma * (n * inner).integrate(tau);
}

}  // namespace ccbs
