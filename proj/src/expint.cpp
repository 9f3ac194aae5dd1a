#include "expint.hpp"

#include <cmath>

namespace ccbs::detail {

namespace {
constexpr double kTaylorCut = 0.05;
constexpr int kTaylorTerms = 10;

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}
}  // namespace

ExpPoly ExpPoly::constant(double c) {
    ExpPoly e;
    e.add({c, 0, 0.0});
    return e;
}

ExpPoly ExpPoly::monomial(double c, int p) {
    ExpPoly e;
    e.add({c, p, 0.0});
    return e;
}

ExpPoly ExpPoly::exponential(double c, double k) {
    ExpPoly e;
    e.add({c, 0, k});
    return e;
}

void ExpPoly::add(Term t) {
    if (t.c == 0.0) return;
    for (auto& e : terms_) {
        if (e.p == t.p && e.k == t.k) {
            e.c += t.c;
            return;
        }
    }
    terms_.push_back(t);
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
    for (const auto& t : o.terms_) add(t);
    return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) {
    for (const auto& t : o.terms_) add({-t.c, t.p, t.k});
    return *this;
}

ExpPoly& ExpPoly::operator*=(double s) {
    for (auto& t : terms_) t.c *= s;
    return *this;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
    ExpPoly r;
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) r.add({x.c * y.c, x.p + y.p, x.k + y.k});
    return r;
}

double ExpPoly::integrate(double tau) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.c * integral_xp_exp(t.p, t.k, tau);
    return s;
}

double ExpPoly::eval(double x) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.c * std::pow(x, t.p) * std::exp(-t.k * x);
    return s;
}

double integral_xp_exp(int p, double k, double tau) {
    if (tau <= 0.0) return 0.0;
    const int s = p + 1;
    if (k == 0.0) return std::pow(tau, s) / s;
    const double x = k * tau;
    if (x <= s + 10.0) {
        // lower incomplete gamma series, all terms positive
        double term = 1.0 / s, sum = term;
        for (int j = 1; j < 400; ++j) {
            term *= x / (s + j);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return std::pow(tau, s) * std::exp(-x) * sum;
    }
    double term = 1.0, partial = 1.0, fact = 1.0;
    for (int j = 1; j <= p; ++j) {
        term *= x / j;
        partial += term;
        fact *= j;
    }
    return fact / std::pow(k, s) * (1.0 - std::exp(-x) * partial);
}

ExpPoly n_poly(double b, double d, double tau_max) {
    ExpPoly r;
    if (b * (tau_max + d) >= kTaylorCut) {
        r += ExpPoly::constant(1.0 / b);
        r -= ExpPoly::exponential(std::exp(-b * d) / b, b);
        return r;
    }
    // n(y) = sum_j (-1)^{j+1} b^{j-1} y^j / j!, y = x + d, expanded in powers of x
    double coef = 1.0;  // (-1)^{j+1} b^{j-1} / j!
    for (int j = 1; j <= kTaylorTerms; ++j) {
        if (j > 1) coef *= -b / j;
        for (int p = 0; p <= j; ++p) {
            const double c = coef * binom(j, p) * std::pow(d, j - p);
            r += ExpPoly::monomial(c, p);
        }
    }
    return r;
}

}  // namespace ccbs::detail
