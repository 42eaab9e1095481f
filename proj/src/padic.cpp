#include "padicl/padic.hpp"

#include <algorithm>
#include <sstream>

namespace padicl {

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

BigInt ipow(int64_t base, int e) {
    BigInt r = 1, b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

int64_t ipow64(int64_t base, int e) {
    int64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > INT64_MAX / std::max<int64_t>(base, 1)) throw std::overflow_error("ipow64 overflow");
        r *= base;
    }
    return r;
}

int vp(const BigInt& x, int p) {
    if (x == 0) return PadicNum::INF;
    BigInt y = x;
    int k = 0;
    while (y % p == 0) {
        y /= p;
        ++k;
    }
    return k;
}

int vp(const Rational& x, int p) {
    if (x == 0) return PadicNum::INF;
    return vp(BigInt(numerator(x)), p) - vp(BigInt(denominator(x)), p);
}

BigInt mod_pos(const BigInt& x, const BigInt& m) {
    BigInt r = x % m;
    if (r < 0) r += m;
    return r;
}

BigInt inv_mod(const BigInt& a, const BigInt& m) {
    BigInt r0 = m, r1 = mod_pos(a, m), s0 = 0, s1 = 1;
    while (r1 != 0) {
        BigInt qq = r0 / r1;
        BigInt t = r0 - qq * r1;
        r0 = r1;
        r1 = t;
        t = s0 - qq * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) throw DomainError("inv_mod: not invertible");
    return mod_pos(s0, m);
}

// ---- polynomials over F_p (int64, low degree first) ----
namespace {

using Poly = std::vector<int64_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int64_t inv_modp(int64_t a, int64_t p) {
    return static_cast<int64_t>(inv_mod(BigInt(a), BigInt(p)));
}

Poly pmod(Poly a, const Poly& m, int64_t p) {
    trim(a);
    Poly mm = m;
    trim(mm);
    int64_t lead_inv = inv_modp(mm.back(), p);
    while (a.size() >= mm.size()) {
        int64_t c = a.back() * lead_inv % p;
        size_t sh = a.size() - mm.size();
        for (size_t i = 0; i < mm.size(); ++i) a[sh + i] = ((a[sh + i] - c * mm[i]) % p + p) % p;
        trim(a);
    }
    return a;
}

Poly pmul(const Poly& a, const Poly& b, int64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    trim(r);
    return r;
}

Poly psub(Poly a, const Poly& b, int64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
    trim(a);
    return a;
}

Poly pgcd(Poly a, Poly b, int64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = pmod(a, b, p);
        a = b;
        b = r;
    }
    return a;
}

Poly ppowmod(Poly base, BigInt e, const Poly& m, int64_t p) {
    Poly r{1};
    base = pmod(base, m, p);
    while (e > 0) {
        if (e & 1) r = pmod(pmul(r, base, p), m, p);
        base = pmod(pmul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

bool irreducible(const Poly& g, int64_t p) {
    int f = static_cast<int>(g.size()) - 1;
    if (f <= 1) return true;
    for (int i = 1; i <= f / 2; ++i) {
        Poly xp = ppowmod(Poly{0, 1}, ipow(p, i), g, p);
        Poly d = pgcd(g, psub(xp, Poly{0, 1}, p), p);
        if (d.size() > 1) return false;
    }
    return true;
}

// inverse of a modulo g over F_p via extended Euclid
Poly pinv(const Poly& a, const Poly& g, int64_t p) {
    Poly r0 = g, r1 = pmod(a, g, p), s0{}, s1{1};
    if (r1.empty()) throw DomainError("inverse of zero");
    while (!r1.empty()) {
        // q = r0 / r1
        Poly qq;
        Poly rem = r0;
        trim(rem);
        int64_t li = inv_modp(r1.back(), p);
        qq.assign(rem.size() >= r1.size() ? rem.size() - r1.size() + 1 : 1, 0);
        while (rem.size() >= r1.size()) {
            int64_t c = rem.back() * li % p;
            size_t sh = rem.size() - r1.size();
            qq[sh] = c;
            for (size_t i = 0; i < r1.size(); ++i) rem[sh + i] = ((rem[sh + i] - c * r1[i]) % p + p) % p;
            trim(rem);
        }
        trim(qq);
        Poly s2 = psub(s0, pmul(qq, s1, p), p);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    if (r0.size() != 1) throw DomainError("polynomial not invertible");
    int64_t c = inv_modp(r0[0], p);
    for (auto& x : s0) x = x * c % p;
    return s0;
}

}  // namespace

json LocalFieldSpec::to_json() const {
    return json{{"p", p}, {"f", f}, {"N", N}, {"modulus", modulus}};
}

LocalFieldSpec field(int p, int f_res, int precision) {
    if (!is_prime(p)) throw DomainError("field: p=" + std::to_string(p) + " is not prime");
    if (f_res < 1) throw DomainError("field: residue degree must be >= 1");
    if (precision < 1) throw DomainError("field: precision must be >= 1");
    LocalFieldSpec F;
    F.p = p;
    F.f = f_res;
    F.N = precision;
    int64_t count = ipow64(p, f_res);
    for (int64_t idx = 0; idx < count; ++idx) {
        Poly g(f_res + 1, 0);
        int64_t t = idx;
        for (int i = 0; i < f_res; ++i) {
            g[i] = t % p;
            t /= p;
        }
        g[f_res] = 1;
        if (irreducible(g, p)) {
            F.modulus = g;
            break;
        }
    }
    if (F.modulus.empty()) throw std::logic_error("no irreducible polynomial found");
    // power sums of the roots of the lifted modulus (Newton's identities)
    std::vector<BigInt> s(f_res, 0);
    s[0] = f_res;
    for (int k = 1; k < f_res; ++k) {
        BigInt acc = BigInt(k) * F.modulus[f_res - k];
        for (int i = 1; i < k; ++i) acc += BigInt(F.modulus[f_res - i]) * s[k - i];
        s[k] = -acc;
    }
    F.traces = s;
    return F;
}

std::vector<BigInt> polymulmod(const LocalFieldSpec& F, const std::vector<BigInt>& a,
                               const std::vector<BigInt>& b, const BigInt& m) {
    int f = F.f;
    std::vector<BigInt> r(2 * f - 1, 0);
    for (int i = 0; i < f; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < f; ++j) r[i + j] += a[i] * b[j];
    }
    for (int i = 2 * f - 2; i >= f; --i) {
        if (r[i] == 0) continue;
        BigInt c = r[i];
        r[i] = 0;
        for (int j = 0; j < f; ++j) r[i - f + j] -= c * F.modulus[j];
    }
    r.resize(f);
    for (auto& x : r) x = mod_pos(x, m);
    return r;
}

// ---- PadicNum ----

PadicNum PadicNum::make(std::shared_ptr<const LocalFieldSpec> F, std::vector<BigInt> c, int v,
                        int rel_digits) {
    PadicNum x;
    x.F_ = std::move(F);
    if (rel_digits <= 0) throw PrecisionError("all tracked digits lost");
    BigInt m = ipow(x.F_->p, rel_digits);
    int s = INF;
    for (auto& ci : c) {
        ci = mod_pos(ci, m);
        if (ci != 0) s = std::min(s, vp(ci, x.F_->p));
    }
    if (s == INF) {
        x.zero_ = true;
        x.u_.assign(x.F_->f, 0);
        return x;
    }
    BigInt ps = ipow(x.F_->p, s);
    for (auto& ci : c) ci /= ps;
    x.zero_ = false;
    x.v_ = v + s;
    x.prec_ = std::min(rel_digits - s, x.F_->N);
    BigInt m2 = ipow(x.F_->p, x.prec_);
    for (auto& ci : c) ci = mod_pos(ci, m2);
    x.u_ = std::move(c);
    return x;
}

PadicNum PadicNum::zero(const LocalFieldSpec& F) {
    PadicNum x;
    x.F_ = std::make_shared<const LocalFieldSpec>(F);
    x.zero_ = true;
    x.u_.assign(F.f, 0);
    return x;
}

PadicNum PadicNum::from_int(const LocalFieldSpec& F, const BigInt& n) {
    return from_rational(F, Rational(n));
}

PadicNum PadicNum::from_rational(const LocalFieldSpec& F, const Rational& r) {
    auto sp = std::make_shared<const LocalFieldSpec>(F);
    if (r == 0) {
        PadicNum z = zero(F);
        z.F_ = sp;
        return z;
    }
    BigInt num = numerator(r), den = denominator(r);
    int v = vp(num, F.p) - vp(den, F.p);
    BigInt pn = ipow(F.p, std::abs(vp(num, F.p))), pd = ipow(F.p, vp(den, F.p));
    num /= pn;
    den /= pd;
    BigInt m = ipow(F.p, F.N);
    BigInt u = mod_pos(num * inv_mod(den, m), m);
    std::vector<BigInt> c(F.f, 0);
    c[0] = u;
    return make(sp, c, v, F.N);
}

PadicNum PadicNum::from_coeffs(const LocalFieldSpec& F, std::vector<BigInt> c, int shift,
                               int abs_digits) {
    if (static_cast<int>(c.size()) > F.f) throw DomainError("from_coeffs: too many coefficients");
    c.resize(F.f, 0);
    auto sp = std::make_shared<const LocalFieldSpec>(F);
    // relative digits: known mod p^abs_digits, capped so the unit part keeps at most N digits
    int s = INF;
    for (auto& ci : c)
        if (ci != 0) s = std::min(s, vp(ci, F.p));
    if (s == INF || (abs_digits != INT_MAX && s >= abs_digits)) {
        PadicNum z = zero(F);
        z.F_ = sp;
        return z;
    }
    int rel = abs_digits == INT_MAX ? s + F.N : std::min(abs_digits, s + F.N);
    return make(sp, c, shift, rel);
}

void PadicNum::check_same(const PadicNum& o) const {
    if (!F_ || !o.F_) throw DomainError("uninitialized PadicNum");
    if (F_ != o.F_ && *F_ != *o.F_) throw DomainError("field mismatch");
}

PadicNum PadicNum::operator-() const {
    if (zero_) return *this;
    std::vector<BigInt> c = u_;
    for (auto& x : c) x = -x;
    return make(F_, c, v_, prec_);
}

PadicNum PadicNum::operator+(const PadicNum& o) const {
    check_same(o);
    if (zero_) return o;
    if (o.zero_) return *this;
    int v = std::min(v_, o.v_);
    int ap = std::min(v_ + prec_, o.v_ + o.prec_);
    BigInt sa = ipow(F_->p, v_ - v), sb = ipow(F_->p, o.v_ - v);
    std::vector<BigInt> c(F_->f);
    for (int i = 0; i < F_->f; ++i) c[i] = u_[i] * sa + o.u_[i] * sb;
    return make(F_, c, v, ap - v);
}

PadicNum PadicNum::operator-(const PadicNum& o) const { return *this + (-o); }

PadicNum PadicNum::operator*(const PadicNum& o) const {
    check_same(o);
    if (zero_) return *this;
    if (o.zero_) return o;
    int rp = std::min(prec_, o.prec_);
    auto c = polymulmod(*F_, u_, o.u_, ipow(F_->p, rp));
    return make(F_, c, v_ + o.v_, rp);
}

PadicNum PadicNum::inv() const {
    if (zero_) throw DomainError("inversion of zero");
    int64_t p = F_->p;
    Poly a(F_->f);
    for (int i = 0; i < F_->f; ++i) a[i] = static_cast<int64_t>(u_[i] % p);
    Poly g(F_->modulus.begin(), F_->modulus.end());
    Poly ai = pinv(a, g, p);
    std::vector<BigInt> x(F_->f, 0);
    for (size_t i = 0; i < ai.size(); ++i) x[i] = ai[i];
    // Newton iteration x <- x(2 - a x)
    int k = 1;
    while (k < prec_) {
        k = std::min(2 * k, prec_);
        BigInt m = ipow(p, k);
        auto ax = polymulmod(*F_, u_, x, m);
        for (auto& c : ax) c = -c;
        ax[0] += 2;
        x = polymulmod(*F_, x, ax, m);
    }
    return make(F_, x, -v_, prec_);
}

PadicNum PadicNum::operator/(const PadicNum& o) const { return *this * o.inv(); }

PadicNum PadicNum::pow(int64_t e) const {
    if (e < 0) return inv().pow(-e);
    PadicNum r = from_int(*F_, 1);
    r.F_ = F_;
    PadicNum b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

PadicNum PadicNum::shift(int k) const {
    if (zero_) return *this;
    PadicNum r = *this;
    r.v_ += k;
    return r;
}

bool PadicNum::operator==(const PadicNum& o) const {
    check_same(o);
    if (zero_ || o.zero_) return zero_ && o.zero_;
    if (v_ != o.v_) return false;
    BigInt m = ipow(F_->p, std::min(prec_, o.prec_));
    for (int i = 0; i < F_->f; ++i)
        if (mod_pos(u_[i] - o.u_[i], m) != 0) return false;
    return true;
}

Rational PadicNum::abs() const {
    if (zero_) return 0;
    BigInt q = F_->q();
    BigInt qq = ipow(static_cast<int64_t>(F_->q()), std::abs(v_));
    return v_ >= 0 ? Rational(1, qq) : Rational(qq);
}

Rational PadicNum::trace_approx() const {
    if (zero_) return 0;
    BigInt T = 0;
    for (int i = 0; i < F_->f; ++i) T += u_[i] * F_->traces[i];
    if (v_ >= 0) return Rational(T * ipow(F_->p, v_));
    return Rational(T, ipow(F_->p, -v_));
}

Rational PadicNum::frac_trace() const {
    if (zero_ || v_ >= 0) return 0;
    if (prec_ < -v_) throw PrecisionError("frac_trace: x mod O not determined at this precision");
    BigInt T = 0;
    for (int i = 0; i < F_->f; ++i) T += u_[i] * F_->traces[i];
    BigInt den = ipow(F_->p, -v_);
    return Rational(mod_pos(T, den), den);
}

std::vector<BigInt> PadicNum::residue_coeffs(int n) const {
    std::vector<BigInt> c(F_->f, 0);
    if (n <= 0 || zero_) return c;
    if (v_ < 0) throw DomainError("residue_coeffs: element is not integral");
    if (v_ >= n) return c;
    if (v_ + prec_ < n) throw PrecisionError("residue_coeffs: insufficient precision");
    BigInt m = ipow(F_->p, n), s = ipow(F_->p, v_);
    for (int i = 0; i < F_->f; ++i) c[i] = mod_pos(u_[i] * s, m);
    return c;
}

PadicNum PadicNum::reduce_mod(int r) const {
    if (zero_ || v_ >= r) {
        PadicNum z = *this;
        z.zero_ = true;
        z.u_.assign(F_->f, 0);
        return z;
    }
    if (v_ + prec_ < r) throw PrecisionError("reduce_mod: insufficient precision");
    BigInt m = ipow(F_->p, r - v_);
    std::vector<BigInt> c(F_->f);
    for (int i = 0; i < F_->f; ++i) c[i] = mod_pos(u_[i], m);
    return make(F_, c, v_, F_->N);
}

std::string PadicNum::str() const {
    if (zero_) return "0";
    std::ostringstream os;
    os << F_->p << "^" << v_ << " * (";
    bool first = true;
    for (int i = 0; i < F_->f; ++i) {
        if (u_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << u_[i];
        if (i == 1) os << "*t";
        if (i > 1) os << "*t^" << i;
    }
    os << ")";
    return os.str();
}

json PadicNum::to_json() const {
    json c = json::array();
    for (auto& x : u_) c.push_back(x.str());
    json j{{"p", F_->p}, {"f", F_->f}, {"coeffs", c}};
    if (zero_) {
        j["v"] = nullptr;
    } else {
        j["v"] = v_;
        j["prec"] = prec_;
    }
    return j;
}

PadicNum PadicNum::from_json(const LocalFieldSpec& F, const json& j) {
    if (j.at("p").get<int>() != F.p || j.at("f").get<int>() != F.f)
        throw DomainError("from_json: field mismatch");
    if (j.at("v").is_null()) return zero(F);
    std::vector<BigInt> c;
    for (auto& s : j.at("coeffs")) c.emplace_back(BigInt(s.get<std::string>()));
    int v = j.at("v").get<int>();
    int prec = j.contains("prec") ? j.at("prec").get<int>() : F.N;
    return make(std::make_shared<const LocalFieldSpec>(F), c, v, prec);
}

ResidueReps residue_reps(const LocalFieldSpec& F, int n) {
    if (n < 0) throw DomainError("residue_reps: negative level");
    if (n > F.N) throw PrecisionError("residue_reps: n exceeds precision");
    ResidueReps out;
    int64_t count = ipow64(F.q(), n);
    for (int64_t idx = 0; idx < count; ++idx) {
        auto c = residue_from_index(F, idx, n);
        bool unit = false;
        for (auto& x : c)
            if (x % F.p != 0) unit = true;
        PadicNum x = PadicNum::from_coeffs(F, c);
        out.all.push_back(x);
        if (unit) out.units.push_back(x);
    }
    return out;
}

int64_t residue_index(const LocalFieldSpec& F, const std::vector<BigInt>& c, int n) {
    int64_t pn = ipow64(F.p, n);
    int64_t idx = 0, mul = 1;
    for (int i = 0; i < F.f; ++i) {
        idx += static_cast<int64_t>(mod_pos(c[i], pn)) * mul;
        mul *= pn;
    }
    return idx;
}

std::vector<BigInt> residue_from_index(const LocalFieldSpec& F, int64_t idx, int n) {
    int64_t pn = ipow64(F.p, n);
    std::vector<BigInt> c(F.f);
    for (int i = 0; i < F.f; ++i) {
        c[i] = idx % pn;
        idx /= pn;
    }
    return c;
}

int64_t residue_index(const PadicNum& x, int n) {
    return residue_index(x.field(), x.residue_coeffs(n), n);
}

PadicNum teichmuller(const PadicNum& u) {
    if (!u.is_unit()) throw DomainError("teichmuller: input must be a unit");
    const LocalFieldSpec& F = u.field();
    auto c = u.residue_coeffs(1);
    PadicNum y = PadicNum::from_coeffs(F, c);
    int64_t q = F.q();
    for (int i = 0; i < F.N; ++i) y = y.pow(q);
    return y;
}

PadicNum log_p(const PadicNum& u) {
    if (!u.is_unit()) throw DomainError("log_p: input must be a unit");
    const LocalFieldSpec& F = u.field();
    int W = u.rel_prec();
    PadicNum z = u / teichmuller(u) - PadicNum::from_int(F, 1);
    if (z.is_zero()) return PadicNum::zero(F);
    int p = F.p;
    // z = p * w with w integral
    std::vector<BigInt> w(F.f);
    BigInt s = ipow(p, z.valuation() - 1);
    BigInt mW = ipow(p, W);
    for (int i = 0; i < F.f; ++i) w[i] = mod_pos(z.unit()[i] * s, mW);
    std::vector<BigInt> acc(F.f, 0), wk(F.f, 0);
    wk[0] = 1;
    for (int k = 1; k < 2 * W + 12; ++k) {
        wk = polymulmod(F, wk, w, mW);
        int e = k - vp(BigInt(k), p);
        if (e >= W) continue;
        BigInt kp = BigInt(k) / ipow(p, vp(BigInt(k), p));
        BigInt coef = ipow(p, e) * inv_mod(kp, mW);
        if (k % 2 == 0) coef = -coef;
        for (int i = 0; i < F.f; ++i) acc[i] = mod_pos(acc[i] + coef * wk[i], mW);
    }
    return PadicNum::from_coeffs(F, acc, 0, W);
}

PadicNum exp_p(const PadicNum& x) {
    const LocalFieldSpec& F = x.field();
    if (x.is_zero()) return PadicNum::from_int(F, 1);
    int p = F.p, v = x.valuation();
    if (static_cast<int64_t>(p - 1) * v <= 1)
        throw DomainError("exp_p: argument outside the convergence domain");
    int W = std::min(F.N, x.abs_prec());
    BigInt mW = ipow(p, W);
    std::vector<BigInt> ux(F.f);
    for (int i = 0; i < F.f; ++i) ux[i] = mod_pos(x.unit()[i], mW);
    std::vector<BigInt> acc(F.f, 0), uk(F.f, 0);
    acc[0] = 1;
    uk[0] = 1;
    BigInt fact_unit = 1;
    int vfact = 0;
    for (int k = 1;; ++k) {
        // lower bound of every later exponent: k v - (k-1)/(p-1)
        if (static_cast<double>(k) * v - static_cast<double>(k - 1) / (p - 1) >= W + 1) break;
        uk = polymulmod(F, uk, ux, mW);
        BigInt kk = k;
        int vk = vp(kk, p);
        vfact += vk;
        fact_unit = mod_pos(fact_unit * (kk / ipow(p, vk)), mW);
        int e = k * v - vfact;
        if (e >= W) continue;
        BigInt coef = ipow(p, e) * inv_mod(fact_unit, mW);
        for (int i = 0; i < F.f; ++i) acc[i] = mod_pos(acc[i] + coef * uk[i], mW);
    }
    return PadicNum::from_coeffs(F, acc, 0, W);
}

int eps_p(int p) { return p == 2 ? 2 : 1; }

}  // namespace padicl
