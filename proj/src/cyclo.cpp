#include "padicl/cyclo.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace padicl {

int64_t lcm64(int64_t a, int64_t b) { return a / std::gcd(a, b) * b; }

static std::vector<BigInt> cyclotomic_uncached(int64_t L) {
    // x^L - 1 divided by Phi_d for every proper divisor d
    std::vector<BigInt> num(L + 1, 0);
    num[0] = -1;
    num[L] = 1;
    for (int64_t d = 1; d < L; ++d) {
        if (L % d) continue;
        auto den = cyclotomic_poly(d);
        int64_t dn = static_cast<int64_t>(den.size()) - 1;
        int64_t top = static_cast<int64_t>(num.size()) - 1;
        std::vector<BigInt> qt(top - dn + 1, 0);
        for (int64_t i = top; i >= dn; --i) {
            BigInt c = num[i];
            qt[i - dn] = c;
            for (int64_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
        }
        num = qt;
    }
    return num;
}

std::vector<BigInt> cyclotomic_poly(int64_t L) {
    static std::mutex mu;
    static std::map<int64_t, std::vector<BigInt>> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(L);
        if (it != cache.end()) return it->second;
    }
    auto r = cyclotomic_uncached(L);
    std::lock_guard<std::mutex> lk(mu);
    cache.emplace(L, r);
    return r;
}

Cyclo::Cyclo(int64_t L) : L_(L), c_(L, 0) {
    if (L < 1) throw DomainError("Cyclo: order must be positive");
}

Cyclo Cyclo::root(int64_t L, int64_t k) {
    Cyclo z(L);
    z.c_[((k % L) + L) % L] = 1;
    return z;
}

Cyclo Cyclo::rational(const Rational& r, int64_t L) {
    Cyclo z(L);
    z.c_[0] = r;
    return z;
}

Cyclo Cyclo::lift(int64_t L2) const {
    if (L2 % L_) throw DomainError("Cyclo::lift: order does not divide");
    Cyclo z(L2);
    int64_t m = L2 / L_;
    for (int64_t k = 0; k < L_; ++k) z.c_[k * m] = c_[k];
    return z;
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
    int64_t L = lcm64(L_, o.L_);
    Cyclo a = lift(L), b = o.lift(L);
    for (int64_t k = 0; k < L; ++k) a.c_[k] += b.c_[k];
    return a;
}

Cyclo Cyclo::operator-(const Cyclo& o) const { return *this + o * Rational(-1); }

Cyclo Cyclo::operator*(const Cyclo& o) const {
    int64_t L = lcm64(L_, o.L_);
    Cyclo a = lift(L), b = o.lift(L), r(L);
    for (int64_t i = 0; i < L; ++i) {
        if (a.c_[i] == 0) continue;
        for (int64_t j = 0; j < L; ++j) {
            if (b.c_[j] == 0) continue;
            r.c_[(i + j) % L] += a.c_[i] * b.c_[j];
        }
    }
    return r;
}

Cyclo Cyclo::operator*(const Rational& r) const {
    Cyclo a = *this;
    for (auto& x : a.c_) x *= r;
    return a;
}

Cyclo Cyclo::conj() const {
    Cyclo a(L_);
    for (int64_t k = 0; k < L_; ++k) a.c_[(L_ - k) % L_] = c_[k];
    return a;
}

void Cyclo::add_root(int64_t k, const Rational& c) { c_[((k % L_) + L_) % L_] += c; }

std::vector<Rational> Cyclo::reduced() const {
    auto phi = cyclotomic_poly(L_);
    size_t d = phi.size() - 1;
    std::vector<Rational> r = c_;
    for (size_t i = r.size(); i-- > d;) {
        if (r[i] == 0) continue;
        Rational c = r[i];
        for (size_t j = 0; j <= d; ++j) r[i - d + j] -= c * Rational(phi[j]);
    }
    r.resize(d);
    return r;
}

bool Cyclo::is_zero() const {
    for (auto& x : reduced())
        if (x != 0) return false;
    return true;
}

std::complex<double> Cyclo::to_complex() const {
    std::complex<double> s = 0;
    for (int64_t k = 0; k < L_; ++k) {
        if (c_[k] == 0) continue;
        double ang = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(L_);
        s += static_cast<double>(c_[k]) * std::polar(1.0, ang);
    }
    return s;
}

Rational Cyclo::as_rational() const {
    auto r = reduced();
    for (size_t i = 1; i < r.size(); ++i)
        if (r[i] != 0) throw DomainError("Cyclo: element is not rational");
    return r.empty() ? Rational(0) : r[0];
}

}  // namespace padicl
