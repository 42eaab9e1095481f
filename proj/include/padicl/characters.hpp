#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "padicl/cyclo.hpp"
#include "padicl/padic.hpp"

namespace padicl {

using cplx = std::complex<double>;

struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InconsistentCharacter : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// e(x) = exp(2 pi i x)
cplx e2pi(double x);
cplx e2pi(const Rational& x);

// psi(x) = e(frac Tr x); trivial on O, nontrivial on p^-1
struct AddChar {
    LocalFieldSpec F;
};
cplx psi_eval(const AddChar& psi, const PadicNum& x);
Rational psi_exponent(const AddChar& psi, const PadicNum& x);

// Quasi-character of F^*. On units it is read off a table indexed by residues mod p^level
// (entry k means e(k/M); -1 marks non-units), at the uniformizer it takes a free value.
struct MultChar {
    LocalFieldSpec F;
    int level = 0;
    int64_t M = 1;
    std::vector<int64_t> table;
    cplx at_pi{1.0, 0.0};
    std::optional<Rational> at_pi_exact;
    int cond_exp = 0;

    // exponent k with chi(u) = e(k/M) for a unit given by residue coefficients
    int64_t unit_exponent(const std::vector<BigInt>& coeffs) const;
    cplx unit_value(const std::vector<BigInt>& coeffs) const;
    cplx operator()(const PadicNum& x) const;
    json to_json() const;
};

// validates multiplicativity on U/U^(level) and computes the conductor
MultChar make_char(const LocalFieldSpec& F, int level, int64_t M, std::vector<int64_t> table,
                   cplx at_pi = 1.0, std::optional<Rational> at_pi_exact = Rational(1));
int conductor(const MultChar& chi);

MultChar with_at_pi(MultChar chi, cplx at_pi, std::optional<Rational> exact = std::nullopt);
MultChar unramified_character(const LocalFieldSpec& F, cplx at_pi,
                              std::optional<Rational> exact = std::nullopt);
// every character of U/U^(level), extended by chi(p) = 1
std::vector<MultChar> all_characters(const LocalFieldSpec& F, int level);
std::vector<MultChar> primitive_characters(const LocalFieldSpec& F, int f);
// quadratic character of the residue field (odd p)
MultChar legendre_character(const LocalFieldSpec& F);

cplx gauss_sum(const MultChar& chi, const AddChar& psi);
// exact value in Q(zeta); needs an exact rational chi(p)
Cyclo gauss_sum_exact(const MultChar& chi);

// closed form of the integral of chi * psi over F^* against dx
cplx lemma24_value(const MultChar& chi, const AddChar& psi);

// Function on F^* constant on the cosets p^k (u + p^step O). value(k, i) is its value at
// p^k * u_i where u_i runs over the unit residues mod p^step (unit_residues order).
// Below k_min the integral of each annulus is known to vanish. |g(p^k u)| <= scale * growth^k
// for k > 0 gives the tail certificate.
struct CosetStepFn {
    LocalFieldSpec F;
    int step = 1;
    int k_min = -1;
    std::function<cplx(int k, int64_t unit_idx)> value;
    double growth = 1.0;
    double scale = 1.0;
    // if set, g(p^k u_i) = value(0, i) * radial^k; the oracle then scales by (radial / q)^k directly
    std::optional<cplx> radial;
};
struct AnnulusResult {
    cplx value;
    double tail_bound = 0.0;
    int n_max = 0;
};
// integral of psi * g dx over k_min <= ord <= n_max, with a bound on the omitted tail
AnnulusResult annulus_integral_oracle(const CosetStepFn& g, int n_max);
// smallest n_max whose tail bound is below target
int annulus_depth(const CosetStepFn& g, double target);
CosetStepFn character_integrand(const MultChar& chi);

// unit residues mod p^n as coefficient vectors, in increasing flat index
std::vector<std::vector<BigInt>> unit_residues(const LocalFieldSpec& F, int n);

}  // namespace padicl
