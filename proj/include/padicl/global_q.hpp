#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padicl/archimedean.hpp"
#include "padicl/local_dist.hpp"

namespace padicl {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, integral minimal model
struct EllipticCurve {
    std::array<int64_t, 5> a{};  // a1, a2, a3, a4, a6
    int64_t N = 0;               // conductor (input)
    int w = 1;                   // root number (input)
    std::string label;

    BigInt discriminant() const;
    json to_json() const;
};

EllipticCurve curve_11a();
// "a1,a2,a3,a4,a6" on the first non-comment line
EllipticCurve load_curve_file(const std::string& path, int64_t N, int w);

enum class Reduction { good, split, nonsplit, additive };
std::string to_string(Reduction r);

// p + 1 - #E(F_p), counted by enumeration; good reduction only
int64_t point_count_ap(const EllipticCurve& E, int64_t p);
Reduction reduction_type(const EllipticCurve& E, int64_t p);

struct CoeffTable {
    int64_t N = 0;
    int w = 1;
    std::vector<int64_t> a;  // a[n] for 1 <= n <= n_max, a[0] = 0
    int64_t n_max() const { return static_cast<int64_t>(a.size()) - 1; }
    int64_t at(int64_t n) const { return a.at(n); }
};

// all a_n from the prime values by the Hecke recursion and multiplicativity
CoeffTable extend_coeffs(const std::map<int64_t, int64_t>& prime_ap, int64_t N, int w, int64_t n_max);
CoeffTable coeffs_from_curve(const EllipticCurve& E, int64_t n_max);
// CSV "n,a_n" with a header "# N=<conductor> w=<sign>"; prime entries are enough
CoeffTable load_coeff_file(const std::string& path, int64_t n_max);

// (alpha1, alpha2) with alpha2 the p-adically non-unit root; (1, p) split, (-1, -p) non-split
LocalRep alpha_pair(int64_t a_p, int p, Reduction red);

// Dirichlet character modulo D given by its values
struct DirichletChar {
    int64_t D = 1;
    std::vector<cplx> v;  // v[n mod D], 0 at non-units
    cplx operator()(int64_t n) const { return v[((n % D) + D) % D]; }
    cplx gauss_sum() const;  // sum chi(a) e(a/D)
    bool is_trivial() const { return D == 1; }
};
DirichletChar trivial_dirichlet();
// chi(a) = e(k/M) where the local character takes u to e(-k/M): chi_p(u) = chi(u)^-1 on units
DirichletChar dirichlet_of_local(const MultChar& chi_p);

struct Estimate {
    cplx value;
    double err = 0.0;
};

// L(E, chi, 1) by the smoothed series with root number w chi(N) tau(chi)^2 / D
Estimate L_finite_smoothed(const CoeffTable& c, const DirichletChar& chi, double t = 1.0);

// Data for the measure mu_pi on G_p = Z_p^x at finite level.
struct GlobalContext {
    CoeffTable coeffs;
    int p = 2;
    Reduction red = Reduction::good;
    LocalRep rep;
    double c_inf = kRealWhittakerConst;
    int64_t n_trunc = 5000;
};
GlobalContext make_context(const CoeffTable& coeffs, int p, Reduction red, int64_t n_trunc = 5000);
GlobalContext make_context(const EllipticCurve& E, int p, int64_t n_trunc = 5000);

// Lambda(z) = sum a_n e(nz) / n for Im z > 0
Estimate eichler(const GlobalContext& g, cplx z);
// boundary value at the cusp r, via Gamma_0(N) and the Fricke involution
Estimate eichler_cusp(const GlobalContext& g, const Rational& r);
// with the Euler factor at p removed from the coefficients
Estimate eichler_depleted_cusp(const GlobalContext& g, const Rational& r);

enum class MeasureMethod { series, quadrature };

// mu_pi of {gamma in G_p : gamma = a mod p^m}; m = 0 gives the total mass
Estimate measure_coset(const GlobalContext& g, int64_t a, int m,
                       MeasureMethod method = MeasureMethod::series);

// sum over zeta = +-n p^k of mu_p(zeta U) W^p(zeta x) for k in [k_lo, k_hi], n <= n_use
Estimate phi_eval(const GlobalContext& g, const CompactOpen& U, double x, int k_lo, int k_hi,
                  int64_t n_use);

struct FiniteLevelMeasure {
    int p = 2;
    int m = 0;
    std::map<int64_t, cplx> values;
    double err = 0.0;
    json to_json() const;
};
FiniteLevelMeasure measure_level(const GlobalContext& g, int m);

struct CompatReport {
    int m = 0;
    double max_abs_diff = 0.0;
    double err = 0.0;
    bool ok = false;
};
CompatReport compatibility(const GlobalContext& g, int m);

// sum chi(a) mu(a, m) over (Z/p^m)^x
Estimate integrate_char_global(const GlobalContext& g, const DirichletChar& chi);

struct InterpolationReport {
    cplx lhs, rhs;          // for chi
    cplx lhs1, rhs1;        // for the trivial character
    double discrepancy = 0;  // |(lhs/lhs1) / (rhs/rhs1) - 1|
    double err = 0;
    cplx constant;           // lhs1 / rhs1, the archimedean constant
    json to_json() const;
};
// chi_p: even local character of conductor p^m; the matching Dirichlet character is derived
InterpolationReport interpolation_check(const GlobalContext& g, const MultChar& chi_p);

// l = log_p of the cyclotomic character on Z_p^x
PadicNum cyclotomic_log(const LocalFieldSpec& F, int64_t a);

struct LpValue {
    std::optional<cplx> complex_value;  // only at s = 0
    double err = 0.0;
    // in units of the total-mass normalizer, when the level-m values are rational multiples of it
    std::optional<PadicNum> padic;
    cplx unit;
};
// Riemann sum of exp_p(s l(a)) against the level-m measure
LpValue Lp_value(const GlobalContext& g, const Rational& s, int m);

struct DerivativeReport {
    double Lp0_abs = 0, noise = 0;
    bool vanishes = false;
    std::optional<bool> padic_zero;
    std::optional<int> divided_difference_valuation;
    int order_lower_bound = 0;
    int n_expected = 0;
    json to_json() const;
};
DerivativeReport derivative_order_report(const GlobalContext& g, int m, int n_expected);

json lp_report(const GlobalContext& g, int m, const Rational& s);

}  // namespace padicl
