#pragma once

#include <optional>
#include <vector>

#include "padicl/characters.hpp"
#include "padicl/cyclo.hpp"

namespace padicl {

struct PoleError : DomainError {
    using DomainError::DomainError;
};

enum class RepKind { spherical, special };

// Tamely ramified pi_{alpha1, alpha2}; in the special case alpha2 = q alpha1.
// alpha1 is the p-adic unit root when the representation is ordinary.
struct LocalRep {
    LocalFieldSpec F;
    cplx alpha1{1.0, 0.0}, alpha2{1.0, 0.0};
    RepKind kind = RepKind::spherical;
    // exact data when available; a and nu may be exact while the alphas are not
    std::optional<Rational> alpha1_x, alpha2_x, a_x, nu_x;

    static LocalRep from_alphas(const LocalFieldSpec& F, const Rational& a1, const Rational& a2,
                                RepKind kind);
    static LocalRep from_alphas(const LocalFieldSpec& F, cplx a1, cplx a2, RepKind kind);
    // roots of X^2 - a X + q nu; alpha1 is the root taken to be the p-adic unit, for complex
    // conjugate roots the one with positive imaginary part
    static LocalRep from_a_nu(const LocalFieldSpec& F, const Rational& a, const Rational& nu);
    // special pair alpha1 = u, alpha2 = q u
    static LocalRep steinberg(const LocalFieldSpec& F, const Rational& u = 1);

    double q() const { return static_cast<double>(F.q()); }
    cplx a() const { return alpha1 + alpha2; }
    cplx nu() const { return alpha1 * alpha2 / q(); }
    // mu = psi(x) beta^ord(x) dx with beta = alpha1 / nu = q / alpha2
    cplx beta() const { return q() / alpha2; }
    std::optional<Rational> beta_exact() const;
    json to_json() const;
};

bool is_ordinary(const LocalRep& rep);

// a U^(n) (n >= 0, U^(0) = U) or a + p^n O
struct Coset {
    PadicNum a;
    int n = 0;
    bool additive = false;
};

struct CompactOpen {
    LocalFieldSpec F;
    std::vector<Coset> cosets;

    static CompactOpen units(const LocalFieldSpec& F);
    static CompactOpen single(const PadicNum& a, int n, bool additive = false);
    // additive cosets avoiding 0 rewritten multiplicatively
    CompactOpen normalized() const;
    bool disjoint() const;
    // split every multiplicative coset into its U^(n+1)-cosets, until all have level >= n
    CompactOpen refined(int n) const;
    // merge complete families of children back into parents; sorted
    CompactOpen canonical() const;
};

struct LocalDist {
    LocalRep rep;
};

cplx mu_eval(const LocalDist& mu, const CompactOpen& S);
cplx mu_eval(const LocalDist& mu, const Coset& c);
// exact value; needs beta rational
Cyclo mu_eval_exact(const LocalDist& mu, const CompactOpen& S);

// L(s, pi x chi), chi unramified with chi(p) = X
cplx local_L(const LocalRep& rep, cplx X, cplx s);
cplx local_L(const LocalRep& rep, const MultChar& chi, cplx s);
std::optional<Rational> local_L_half_exact(const LocalRep& rep, const MultChar& chi);

// e(alpha1, alpha2, chi), continued across the removable singularities
cplx euler_factor(const LocalRep& rep, const MultChar& chi);
cplx euler_factor(const LocalRep& rep, cplx X, int f = 0);
// exact for rational alphas and chi(p)
Rational euler_factor_exact(const LocalRep& rep, const MultChar& chi);

struct IntegralResult {
    cplx value;
    double tail_bound = 0.0;
    int n_max = 0;
};
// integral of chi against mu over F^*, summed annulus by annulus
IntegralResult integrate_char(const LocalDist& mu, const MultChar& chi, double tol = 1e-12);
// exact left side for ramified chi with rational chi(p) and beta
Cyclo integrate_char_exact(const LocalDist& mu, const MultChar& chi);

struct Prop27Report {
    cplx lhs, rhs;
    double abs_err = 0.0, rel_err = 0.0, tail_bound = 0.0;
    bool exact = false;
    bool exact_equal = false;
    json to_json() const;
};
// integral versus e * tau * L(1/2)
Prop27Report prop27_check(const LocalRep& rep, const MultChar& chi, double tol = 1e-12);

// W_H(diag(a, 1)) for H = U^(n), defined as mu(a H)
cplx whittaker_WH(const LocalDist& mu, int n, const PadicNum& a);
Cyclo whittaker_WH_exact(const LocalDist& mu, int n, const PadicNum& a);

// f = sum c_j 1_{a_j U^(n)}
struct StepFn {
    std::vector<std::pair<Coset, Rational>> terms;
};
struct Prop29cReport {
    Cyclo lhs, rhs;
    bool equal = false;
};
// integral of f against mu versus [U:H] times the U^(n+1)-Riemann sum of f W_H d^x x
Prop29cReport prop29c_check(const LocalDist& mu, const StepFn& f, int n);

// product distribution over the primes above p
cplx semilocal_mu(const std::vector<LocalDist>& mus, const std::vector<CompactOpen>& S);

}  // namespace padicl
