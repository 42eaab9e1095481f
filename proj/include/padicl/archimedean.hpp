#pragma once

#include <stdexcept>

#include "padicl/padic.hpp"

namespace padicl {

enum class BesselMethod { automatic, series, quadrature, asymptotic };

struct BesselEval {
    int order = 0;  // 0 or 1
    BesselMethod method = BesselMethod::automatic;
    double series_max = 2.0;        // series for x <= series_max
    double asymptotic_min = 25.0;   // asymptotic expansion for x >= asymptotic_min
};

// K_order(x) for x > 0, order in {0, 1}
double bessel_K(int order, double x);
double bessel_K(const BesselEval& how, double x);

// x^2 y'' + x y' - (x^2 + order^2) y with 8th order central differences (h = min(0.02 x, 0.04)),
// divided by the largest of the three terms
double bessel_ode_residual(int order, double x);

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
};

// int_0^inf K0(x) x^(2s) dx, s > -1/4
QuadResult mellin_K0(double s);
double mellin_K0_closed(double s);  // 2^(2s-1) Gamma(s+1/2)^2

// complex place, x in C^*
double complex_whittaker_W1(double abs_x);  // (2/pi) |x|^2 K0(4 pi |x|)
double complex_whittaker_W(double abs_x);   // (2 pi)^-2 W1
// integral of W1(diag(x,1)) |x|_C^(s-1/2) d^x x over C^*, d^x x = dr/r dtheta
QuadResult complex_zeta_integral(double s);
// 4 (2 pi)^-(2s+1) Gamma(s+1/2)^2
double complex_L(double s);

// real place, discrete series of weight 2
constexpr double kRealWhittakerConst = 2.0;
double real_whittaker(double t, double c = kRealWhittakerConst);
// int_0^inf W(t) t^(s-1/2) d^x t
QuadResult real_zeta_integral(double s, double c = kRealWhittakerConst);
// c (2 pi)^-(s+1/2) Gamma(s+1/2)
double real_zeta_closed(double s, double c = kRealWhittakerConst);

}  // namespace padicl
