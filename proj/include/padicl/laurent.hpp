#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>

#include "padicl/padic.hpp"

namespace padicl {

// Laurent polynomial in two symbols alpha, nu with integer coefficients.
class Laurent {
public:
    Laurent() = default;
    Laurent(int64_t c) { if (c) t_[{0, 0}] = c; }
    static Laurent mono(int i, int j, const BigInt& c = 1);
    static Laurent alpha(int i = 1) { return mono(i, 0); }
    static Laurent nu(int j = 1) { return mono(0, j); }

    Laurent operator+(const Laurent& o) const;
    Laurent operator-(const Laurent& o) const;
    Laurent operator-() const;
    Laurent operator*(const Laurent& o) const;
    // division by a monomial only
    Laurent operator/(const Laurent& o) const;
    Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
    Laurent& operator-=(const Laurent& o) { return *this = *this - o; }
    bool operator==(const Laurent& o) const { return t_ == o.t_; }
    bool operator!=(const Laurent& o) const { return !(*this == o); }

    bool is_zero() const { return t_.empty(); }
    bool is_monomial() const { return t_.size() == 1; }
    Laurent pow(int k) const;
    std::string str() const;
    const std::map<std::pair<int, int>, BigInt>& terms() const { return t_; }

    std::complex<double> eval(std::complex<double> a, std::complex<double> n) const;
    Rational eval(const Rational& a, const Rational& n) const;

private:
    std::map<std::pair<int, int>, BigInt> t_;
};

}  // namespace padicl
