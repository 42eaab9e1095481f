#include "padicl/archimedean.hpp"

#include <cmath>
#include <functional>

namespace padicl {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

double K_series(int order, double x) {
    double y = x * x / 4, l = std::log(x / 2);
    if (order == 0) {
        double I0 = 0, S = 0, t = 1, H = 0;
        for (int k = 0; k < 60; ++k) {
            if (k > 0) {
                t *= y / (static_cast<double>(k) * k);
                H += 1.0 / k;
            }
            I0 += t;
            S += H * t;
            if (t < 1e-18 * I0) break;
        }
        return -(l + kEulerGamma) * I0 + S;
    }
    // t_k = y^k / (k! (k+1)!), psi(k+1) = -gamma + H_k
    double I1 = 0, S = 0, t = 1, Hk = 0, Hk1 = 1;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            t *= y / (static_cast<double>(k) * (k + 1));
            Hk += 1.0 / k;
            Hk1 += 1.0 / (k + 1);
        }
        I1 += t;
        S += (Hk + Hk1 - 2 * kEulerGamma) * t;
        if (t < 1e-18 * I1) break;
    }
    I1 *= x / 2;
    return 1 / x + l * I1 - x / 4 * S;
}

// K_v(x) = int_0^inf exp(-x cosh t) cosh(v t) dt, trapezoid on the even integrand
double K_quadrature(int order, double x) {
    const double h = 0.05;
    double T = 2 * std::asinh(std::sqrt(50.0 / (2 * x))) + 1.0;
    double s = 0.5;
    for (int i = 1; i * h <= T; ++i) {
        double t = i * h, sh = std::sinh(t / 2);
        s += std::exp(-2 * x * sh * sh) * (order ? std::cosh(t) : 1.0);
    }
    return s * h * std::exp(-x);
}

double K_asymptotic(int order, double x) {
    double mu = 4.0 * order * order;
    double term = 1, sum = 1, prev = 1;
    for (int k = 1; k < 200; ++k) {
        double j = 2 * k - 1;
        term *= (mu - j * j) / (k * 8 * x);
        if (std::abs(term) > std::abs(prev)) break;
        sum += term;
        prev = term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(M_PI / (2 * x)) * std::exp(-x) * sum;
}

// trapezoid in u on [a, b] at steps h and 2h
QuadResult log_trapezoid(const std::function<double(double)>& g, double a, double b, double h) {
    int n = static_cast<int>(std::ceil((b - a) / h));
    if (n % 2) ++n;
    h = (b - a) / n;
    double fine = 0, coarse = 0;
    for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 0.5 : 1.0;
        double v = g(a + i * h);
        fine += w * v;
        if (i % 2 == 0) coarse += ((i == 0 || i == n) ? 0.5 : 1.0) * v;
    }
    fine *= h;
    coarse *= 2 * h;
    // endpoint magnitudes bound the truncated window
    double tail = std::abs(g(a)) + std::abs(g(b));
    return {fine, std::abs(fine - coarse) + tail};
}

}  // namespace

double bessel_K(const BesselEval& how, double x) {
    if (!(x > 0)) throw DomainError("bessel_K: x must be positive");
    if (how.order != 0 && how.order != 1) throw DomainError("bessel_K: order must be 0 or 1");
    switch (how.method) {
        case BesselMethod::series: return K_series(how.order, x);
        case BesselMethod::quadrature: return K_quadrature(how.order, x);
        case BesselMethod::asymptotic: return K_asymptotic(how.order, x);
        case BesselMethod::automatic: break;
    }
    if (x <= how.series_max) return K_series(how.order, x);
    if (x >= how.asymptotic_min) return K_asymptotic(how.order, x);
    return K_quadrature(how.order, x);
}

double bessel_K(int order, double x) { return bessel_K(BesselEval{order}, x); }

double bessel_ode_residual(int order, double x) {
    static const double d1[] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
    static const double d2[] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72,
                                8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};
    double h = std::min(0.02 * x, 0.04), y1 = 0, y2 = 0;
    for (int i = 0; i < 9; ++i) {
        double v = bessel_K(order, x + (i - 4) * h);
        y1 += d1[i] * v;
        y2 += d2[i] * v;
    }
    y1 /= h;
    y2 /= h * h;
    double y = bessel_K(order, x);
    double a = x * x * y2, b = x * y1, c = (x * x + order * order) * y;
    return std::abs(a + b - c) / std::max({std::abs(a), std::abs(b), std::abs(c)});
}

QuadResult mellin_K0(double s) {
    if (!(s > -0.25)) throw DomainError("mellin_K0: needs s > -1/4");
    double k = 2 * s + 1;
    auto g = [k](double u) { return bessel_K(0, std::exp(u)) * std::exp(k * u); };
    return log_trapezoid(g, -50.0 / k - 5, std::log(80.0), 1.0 / 64);
}

double mellin_K0_closed(double s) {
    double G = std::tgamma(s + 0.5);
    return std::pow(2.0, 2 * s - 1) * G * G;
}

double complex_whittaker_W1(double r) { return 2 / M_PI * r * r * bessel_K(0, 4 * M_PI * r); }

double complex_whittaker_W(double r) { return complex_whittaker_W1(r) / (4 * M_PI * M_PI); }

QuadResult complex_zeta_integral(double s) {
    if (!(s > -0.25)) throw DomainError("complex_zeta_integral: needs s > -1/4");
    // over theta: 2 pi; in u = log r the integrand is W1(e^u) e^((2s-1)u)
    double k = 2 * s - 1;
    auto g = [k](double u) { return 2 * M_PI * complex_whittaker_W1(std::exp(u)) * std::exp(k * u); };
    return log_trapezoid(g, -50.0 / (k + 2) - 5, std::log(80.0 / (4 * M_PI)), 1.0 / 64);
}

double complex_L(double s) {
    double G = std::tgamma(s + 0.5);
    return 4 * std::pow(2 * M_PI, -(2 * s + 1)) * G * G;
}

double real_whittaker(double t, double c) {
    if (!(t > 0)) throw DomainError("real_whittaker: t must be positive");
    return c * t * std::exp(-2 * M_PI * t);
}

QuadResult real_zeta_integral(double s, double c) {
    if (!(s > -0.5)) throw DomainError("real_zeta_integral: needs s > -1/2");
    double k = s - 0.5;
    auto g = [k, c](double u) { return real_whittaker(std::exp(u), c) * std::exp(k * u); };
    return log_trapezoid(g, -46.0 / (s + 0.5) - 5, std::log(20.0), 1.0 / 64);
}

double real_zeta_closed(double s, double c) {
    return c * std::pow(2 * M_PI, -(s + 0.5)) * std::tgamma(s + 0.5);
}

}  // namespace padicl
