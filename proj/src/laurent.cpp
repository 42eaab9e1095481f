#include "padicl/laurent.hpp"

#include <sstream>

namespace padicl {

namespace {

template <class T>
T ipow_any(const T& x, int k) {
    T r = T(1), b = x;
    bool neg = k < 0;
    unsigned n = neg ? -k : k;
    while (n) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return neg ? T(1) / r : r;
}

}  // namespace

Laurent Laurent::mono(int i, int j, const BigInt& c) {
    Laurent r;
    if (c != 0) r.t_[{i, j}] = c;
    return r;
}

Laurent Laurent::operator+(const Laurent& o) const {
    Laurent r = *this;
    for (auto& [k, c] : o.t_) {
        auto& x = r.t_[k];
        x += c;
        if (x == 0) r.t_.erase(k);
    }
    return r;
}

Laurent Laurent::operator-() const {
    Laurent r = *this;
    for (auto& kv : r.t_) kv.second = -kv.second;
    return r;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::operator*(const Laurent& o) const {
    Laurent r;
    for (auto& [k1, c1] : t_)
        for (auto& [k2, c2] : o.t_) {
            std::pair<int, int> k{k1.first + k2.first, k1.second + k2.second};
            auto& x = r.t_[k];
            x += c1 * c2;
            if (x == 0) r.t_.erase(k);
        }
    return r;
}

Laurent Laurent::operator/(const Laurent& o) const {
    if (!o.is_monomial()) throw DomainError("Laurent: division by a non-monomial");
    auto [k, c] = *o.t_.begin();
    Laurent r;
    for (auto& [k1, c1] : t_) {
        if (c1 % c != 0) throw DomainError("Laurent: coefficient not divisible");
        r.t_[{k1.first - k.first, k1.second - k.second}] = c1 / c;
    }
    return r;
}

Laurent Laurent::pow(int k) const {
    if (k >= 0) return ipow_any(*this, k);
    if (!is_monomial()) throw DomainError("Laurent: negative power of a non-monomial");
    auto [e, c] = *t_.begin();
    if (c != 1 && c != -1) throw DomainError("Laurent: negative power with non-unit coefficient");
    BigInt cc = (c == -1 && (k % 2)) ? BigInt(-1) : BigInt(1);
    return mono(e.first * k, e.second * k, cc);
}

std::string Laurent::str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : t_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        BigInt a = c < 0 ? BigInt(-c) : c;
        bool unit = k.first == 0 && k.second == 0;
        if (a != 1 || unit) os << a;
        if (k.first) os << (a != 1 ? "*" : "") << "alpha^" << k.first;
        if (k.second) os << ((a != 1 || k.first) ? "*" : "") << "nu^" << k.second;
    }
    return os.str();
}

std::complex<double> Laurent::eval(std::complex<double> a, std::complex<double> n) const {
    std::complex<double> s = 0;
    for (auto& [k, c] : t_) s += static_cast<double>(c) * std::pow(a, k.first) * std::pow(n, k.second);
    return s;
}

Rational Laurent::eval(const Rational& a, const Rational& n) const {
    Rational s = 0;
    for (auto& [k, c] : t_) s += Rational(c) * ipow_any(a, k.first) * ipow_any(n, k.second);
    return s;
}

}  // namespace padicl
