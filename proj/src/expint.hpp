#pragma once

#include <vector>

namespace ccbs::detail {

// Sum of c * x^p * exp(-k x) terms, integrated exactly over [0, tau].
class ExpPoly {
public:
    struct Term {
        double c;
        int p;
        double k;
    };

    ExpPoly() = default;
    static ExpPoly constant(double c);
    static ExpPoly monomial(double c, int p);
    static ExpPoly exponential(double c, double k);

    ExpPoly& operator+=(const ExpPoly& o);
    ExpPoly& operator-=(const ExpPoly& o);
    ExpPoly& operator*=(double s);
    friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
    friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
    friend ExpPoly operator*(ExpPoly a, double s) { return a *= s; }
    friend ExpPoly operator*(double s, ExpPoly a) { return a *= s; }
    friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);

    double integrate(double tau) const;
    double eval(double x) const;
    const std::vector<Term>& terms() const { return terms_; }

private:
    void add(Term t);
    std::vector<Term> terms_;
};

// int_0^tau x^p e^{-k x} dx, stable for every k >= 0
double integral_xp_exp(int p, double k, double tau);

// n(v, s + d) = (1 - e^{-b(s + d - v)})/b as a function of x = s - v on [0, tau_max].
// Falls back to a Taylor polynomial in x when b (tau_max + d) is small.
ExpPoly n_poly(double b, double d, double tau_max);

}  // namespace ccbs::detail
