#pragma once

#include <complex>
#include <vector>

#include "padicl/padic.hpp"

namespace padicl {

// Element of Q(zeta_L), stored as sum c_k zeta_L^k (k mod L). Equality is decided
// after reduction modulo the L-th cyclotomic polynomial.
class Cyclo {
public:
    explicit Cyclo(int64_t L = 1);
    static Cyclo root(int64_t L, int64_t k);
    static Cyclo rational(const Rational& r, int64_t L = 1);

    int64_t order() const { return L_; }
    Cyclo lift(int64_t L2) const;

    Cyclo operator+(const Cyclo& o) const;
    Cyclo operator-(const Cyclo& o) const;
    Cyclo operator*(const Cyclo& o) const;
    Cyclo operator*(const Rational& r) const;
    Cyclo& operator+=(const Cyclo& o) { return *this = *this + o; }
    Cyclo conj() const;

    void add_root(int64_t k, const Rational& c);  // += c zeta_L^k

    std::vector<Rational> reduced() const;
    bool is_zero() const;
    bool operator==(const Cyclo& o) const { return (*this - o).is_zero(); }
    std::complex<double> to_complex() const;
    // the value if the element is rational; throws otherwise
    Rational as_rational() const;

private:
    int64_t L_;
    std::vector<Rational> c_;
};

std::vector<BigInt> cyclotomic_poly(int64_t L);
int64_t lcm64(int64_t a, int64_t b);

}  // namespace padicl
