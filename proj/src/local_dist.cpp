#include "padicl/local_dist.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace padicl {

namespace {

constexpr double kTol = 1e-12;

bool close(cplx a, cplx b) { return std::abs(a - b) <= kTol * std::max({1.0, std::abs(a), std::abs(b)}); }

cplx to_c(const Rational& r) { return {static_cast<double>(r), 0.0}; }

Rational rpow(const Rational& x, int k) {
    Rational r = 1;
    for (int i = 0; i < std::abs(k); ++i) r *= x;
    return k < 0 ? Rational(1) / r : r;
}

std::string rstr(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// multiplicative coset a U^(n) as (ord a, n, residue index of the unit part mod p^n)
struct Key {
    int v = 0;
    int n = 0;
    int64_t idx = 0;
    auto operator<=>(const Key&) const = default;
};

Key key_of(const Coset& c) {
    if (c.additive) throw DomainError("CompactOpen: coset is additive");
    if (c.a.is_zero()) throw DomainError("CompactOpen: multiplicative coset of 0");
    if (c.n < 0) throw DomainError("CompactOpen: negative level");
    Key k{c.a.valuation(), c.n, 0};
    if (c.n > 0) {
        const auto& F = c.a.field();
        k.idx = residue_index(F, c.a.shift(-k.v).residue_coeffs(c.n), c.n);
    }
    return k;
}

Coset coset_of(const LocalFieldSpec& F, const Key& k) {
    std::vector<BigInt> c(F.f, 0);
    if (k.n == 0) c[0] = 1;
    else c = residue_from_index(F, k.idx, k.n);
    return Coset{PadicNum::from_coeffs(F, c).shift(k.v), k.n, false};
}

int64_t reduce_idx(const LocalFieldSpec& F, int64_t idx, int from, int to) {
    if (to == 0) return 0;
    auto c = residue_from_index(F, idx, from);
    BigInt m = ipow(F.p, to);
    for (auto& x : c) x = mod_pos(x, m);
    return residue_index(F, c, to);
}

std::vector<Key> children(const LocalFieldSpec& F, const Key& k) {
    std::vector<Key> out;
    if (k.n == 0) {
        for (auto& u : unit_residues(F, 1)) out.push_back({k.v, 1, residue_index(F, u, 1)});
        return out;
    }
    auto base = residue_from_index(F, k.idx, k.n);
    BigInt pn = ipow(F.p, k.n);
    int64_t qq = F.q();
    for (int64_t s = 0; s < qq; ++s) {
        auto t = residue_from_index(F, s, 1);
        std::vector<BigInt> c(F.f);
        for (int i = 0; i < F.f; ++i) c[i] = base[i] + pn * t[i];
        out.push_back({k.v, k.n + 1, residue_index(F, c, k.n + 1)});
    }
    return out;
}

bool keys_meet(const LocalFieldSpec& F, const Key& a, const Key& b) {
    if (a.v != b.v) return false;
    int m = std::min(a.n, b.n);
    return reduce_idx(F, a.idx, a.n, m) == reduce_idx(F, b.idx, b.n, m);
}

bool zero_ball(const Coset& c) { return c.additive && (c.a.is_zero() || c.a.valuation() >= c.n); }

Coset normalize(const Coset& c) {
    if (!c.additive || zero_ball(c)) return c;
    int v = c.a.valuation();
    return Coset{c.a, c.n - v, false};
}

// index [U : U^(n)]
Rational unit_index(const LocalFieldSpec& F, int n) {
    if (n == 0) return 1;
    return Rational(ipow(F.q(), n - 1) * (F.q() - 1));
}

bool beta_is_one(const LocalRep& rep) {
    if (auto b = rep.beta_exact()) return *b == 1;
    return close(rep.beta(), 1.0);
}

// psi(a) as a root of unity
Cyclo psi_exact(const PadicNum& a) {
    Rational t = a.frac_trace();
    BigInt num = boost::multiprecision::numerator(t), den = boost::multiprecision::denominator(t);
    return Cyclo::root(static_cast<int64_t>(den), static_cast<int64_t>(num));
}

Cyclo mu_coset_exact(const LocalRep& rep, const Coset& c0) {
    Coset c = normalize(c0);
    const auto& F = c.a.field();
    Rational q(F.q());
    if (zero_ball(c)) {
        if (!beta_is_one(rep)) throw DomainError("mu_eval: 0 lies in S but alpha1 != nu");
        return Cyclo::rational(c.n >= 0 ? rpow(q, -c.n) : Rational(0));
    }
    auto beta = rep.beta_exact();
    if (!beta) throw DomainError("mu_eval_exact: beta is not rational");
    int v = c.a.valuation();
    if (c.n == 0) {
        Rational s = 0;
        if (v >= 0) s += rpow(q, -v);
        if (v + 1 >= 0) s -= rpow(q, -v - 1);
        return Cyclo::rational(rpow(*beta, v) * s);
    }
    if (c.n + v < 0) return Cyclo::rational(0);
    return psi_exact(c.a) * (rpow(*beta, v) * rpow(q, -(c.n + v)));
}

}  // namespace

// ---- LocalRep ----

LocalRep LocalRep::from_alphas(const LocalFieldSpec& F, const Rational& a1, const Rational& a2,
                               RepKind kind) {
    if (a1 == 0 || a2 == 0) throw DomainError("LocalRep: alphas must be nonzero");
    Rational q(F.q());
    if (kind == RepKind::special) {
        if (a1 == q * a2) throw DomainError("LocalRep: reversed special pair, expected alpha2 = q alpha1");
        if (a2 != q * a1) throw DomainError("LocalRep: special kind needs alpha2 = q alpha1");
    } else if (a2 == q * a1 || a1 == q * a2) {
        throw DomainError("LocalRep: alpha1/alpha2 = q^{+-1} is the special case");
    }
    LocalRep r;
    r.F = F;
    r.kind = kind;
    r.alpha1 = to_c(a1);
    r.alpha2 = to_c(a2);
    r.alpha1_x = a1;
    r.alpha2_x = a2;
    r.a_x = a1 + a2;
    r.nu_x = a1 * a2 / q;
    return r;
}

LocalRep LocalRep::from_alphas(const LocalFieldSpec& F, cplx a1, cplx a2, RepKind kind) {
    if (a1 == 0.0 || a2 == 0.0) throw DomainError("LocalRep: alphas must be nonzero");
    double q = static_cast<double>(F.q());
    if (kind == RepKind::special) {
        if (close(a1, q * a2)) throw DomainError("LocalRep: reversed special pair, expected alpha2 = q alpha1");
        if (!close(a2, q * a1)) throw DomainError("LocalRep: special kind needs alpha2 = q alpha1");
    } else if (close(a2, q * a1) || close(a1, q * a2)) {
        throw DomainError("LocalRep: alpha1/alpha2 = q^{+-1} is the special case");
    }
    LocalRep r;
    r.F = F;
    r.kind = kind;
    r.alpha1 = a1;
    r.alpha2 = a2;
    return r;
}

LocalRep LocalRep::from_a_nu(const LocalFieldSpec& F, const Rational& a, const Rational& nu) {
    if (nu == 0) throw DomainError("LocalRep: nu must be nonzero");
    Rational q(F.q());
    Rational disc = a * a - 4 * q * nu;
    // rational roots: pick them exactly
    if (disc >= 0) {
        BigInt n = boost::multiprecision::numerator(disc), d = boost::multiprecision::denominator(disc);
        BigInt sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
        if (sn * sn == n && sd * sd == d) {
            Rational s(sn, sd);
            Rational r1 = (a + s) / 2, r2 = (a - s) / 2;
            if (r1 == 0 || r2 == 0) throw DomainError("LocalRep: a root vanishes");
            if (r2 == q * r1) return from_alphas(F, r1, r2, RepKind::special);
            if (r1 == q * r2) return from_alphas(F, r2, r1, RepKind::special);
            // the p-adic unit root first when there is one
            if (vp(r1, F.p) != 0 && vp(r2, F.p) == 0) std::swap(r1, r2);
            LocalRep rep = from_alphas(F, r1, r2, RepKind::spherical);
            return rep;
        }
    }
    double ad = static_cast<double>(a), dd = static_cast<double>(disc);
    cplx s = dd >= 0 ? cplx(std::sqrt(dd), 0.0) : cplx(0.0, std::sqrt(-dd));
    LocalRep rep = from_alphas(F, (ad + s) / 2.0, (ad - s) / 2.0, RepKind::spherical);
    rep.a_x = a;
    rep.nu_x = nu;
    return rep;
}

LocalRep LocalRep::steinberg(const LocalFieldSpec& F, const Rational& u) {
    return from_alphas(F, u, Rational(F.q()) * u, RepKind::special);
}

std::optional<Rational> LocalRep::beta_exact() const {
    if (!alpha2_x) return std::nullopt;
    return Rational(F.q()) / *alpha2_x;
}

json LocalRep::to_json() const {
    auto cj = [](cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; };
    json j{{"field", F.to_json()},
           {"kind", kind == RepKind::special ? "special" : "spherical"},
           {"alpha1", cj(alpha1)},
           {"alpha2", cj(alpha2)},
           {"a", cj(a())},
           {"nu", cj(nu())}};
    if (alpha1_x) j["alpha1"]["exact"] = rstr(*alpha1_x);
    if (alpha2_x) j["alpha2"]["exact"] = rstr(*alpha2_x);
    if (a_x) j["a"]["exact"] = rstr(*a_x);
    if (nu_x) j["nu"]["exact"] = rstr(*nu_x);
    return j;
}

bool is_ordinary(const LocalRep& rep) {
    if (!rep.a_x || !rep.nu_x) throw DomainError("is_ordinary: a and nu must be exact to certify");
    int p = rep.F.p;
    return *rep.a_x != 0 && vp(*rep.a_x, p) == 0 && vp(*rep.nu_x, p) == 0;
}

// ---- compact opens ----

CompactOpen CompactOpen::units(const LocalFieldSpec& F) {
    return CompactOpen{F, {Coset{PadicNum::from_int(F, 1), 0, false}}};
}

CompactOpen CompactOpen::single(const PadicNum& a, int n, bool additive) {
    return CompactOpen{a.field(), {Coset{a, n, additive}}};
}

CompactOpen CompactOpen::normalized() const {
    CompactOpen r{F, {}};
    for (auto& c : cosets) r.cosets.push_back(normalize(c));
    return r;
}

bool CompactOpen::disjoint() const {
    auto S = normalized();
    std::vector<int> zero_levels;
    std::vector<Key> keys;
    for (auto& c : S.cosets) {
        if (zero_ball(c)) zero_levels.push_back(c.n);
        else keys.push_back(key_of(c));
    }
    if (zero_levels.size() > 1) return false;
    for (size_t i = 0; i < keys.size(); ++i) {
        for (int z : zero_levels)
            if (keys[i].v >= z) return false;
        for (size_t j = i + 1; j < keys.size(); ++j)
            if (keys_meet(F, keys[i], keys[j])) return false;
    }
    return true;
}

CompactOpen CompactOpen::refined(int n) const {
    CompactOpen r{F, {}};
    for (auto& c : normalized().cosets) {
        if (zero_ball(c)) {
            r.cosets.push_back(c);
            continue;
        }
        std::vector<Key> todo{key_of(c)};
        while (!todo.empty()) {
            Key k = todo.back();
            todo.pop_back();
            if (k.n >= n) {
                r.cosets.push_back(coset_of(F, k));
                continue;
            }
            for (auto& ch : children(F, k)) todo.push_back(ch);
        }
    }
    return r;
}

CompactOpen CompactOpen::canonical() const {
    if (!disjoint()) throw DomainError("CompactOpen: cosets are not disjoint");
    CompactOpen r{F, {}};
    std::set<Key> keys;
    for (auto& c : normalized().cosets) {
        if (zero_ball(c)) r.cosets.push_back(c);
        else keys.insert(key_of(c));
    }
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<Key, std::vector<Key>> groups;
        for (auto& k : keys)
            if (k.n > 0) groups[Key{k.v, k.n - 1, reduce_idx(F, k.idx, k.n, k.n - 1)}].push_back(k);
        for (auto& [parent, kids] : groups) {
            if (kids.size() != children(F, parent).size()) continue;
            for (auto& k : kids) keys.erase(k);
            keys.insert(parent);
            changed = true;
        }
    }
    for (auto& k : keys) r.cosets.push_back(coset_of(F, k));
    return r;
}

// ---- the distribution ----

cplx mu_eval(const LocalDist& mu, const Coset& c0) {
    Coset c = normalize(c0);
    const auto& F = c.a.field();
    double q = static_cast<double>(F.q());
    if (zero_ball(c)) {
        if (!beta_is_one(mu.rep)) throw DomainError("mu_eval: 0 lies in S but alpha1 != nu");
        return c.n >= 0 ? std::pow(q, -c.n) : 0.0;
    }
    cplx beta = mu.rep.beta();
    int v = c.a.valuation();
    if (c.n == 0) {
        double s = 0;
        if (v >= 0) s += std::pow(q, -v);
        if (v + 1 >= 0) s -= std::pow(q, -v - 1);
        return std::pow(beta, v) * s;
    }
    if (c.n + v < 0) return 0.0;
    return std::pow(beta, v) * psi_eval(AddChar{F}, c.a) * std::pow(q, -(c.n + v));
}

cplx mu_eval(const LocalDist& mu, const CompactOpen& S) {
    cplx s = 0;
    for (auto& c : S.cosets) s += mu_eval(mu, c);
    return s;
}

Cyclo mu_eval_exact(const LocalDist& mu, const CompactOpen& S) {
    Cyclo s(1);
    for (auto& c : S.cosets) s += mu_coset_exact(mu.rep, c);
    return s;
}

// ---- L and Euler factors ----

cplx local_L(const LocalRep& rep, cplx X, cplx s) {
    cplx t = X * std::pow(cplx(rep.q()), -(s + 0.5));
    cplx d = 1.0 - rep.alpha1 * t;
    if (rep.kind == RepKind::spherical) d *= 1.0 - rep.alpha2 * t;
    if (std::abs(d) < kTol) throw PoleError("local_L: pole");
    return 1.0 / d;
}

cplx local_L(const LocalRep& rep, const MultChar& chi, cplx s) {
    if (chi.cond_exp > 0) return 1.0;
    return local_L(rep, chi.at_pi, s);
}

std::optional<Rational> local_L_half_exact(const LocalRep& rep, const MultChar& chi) {
    if (chi.cond_exp > 0) return Rational(1);
    if (!chi.at_pi_exact || !rep.alpha1_x || !rep.alpha2_x) return std::nullopt;
    Rational q(rep.F.q()), t = *chi.at_pi_exact / q;
    Rational d = 1 - *rep.alpha1_x * t;
    if (rep.kind == RepKind::spherical) d *= 1 - *rep.alpha2_x * t;
    if (d == 0) throw PoleError("local_L: pole");
    return 1 / d;
}

cplx euler_factor(const LocalRep& rep, cplx X, int f) {
    double q = rep.q();
    cplx a1 = rep.alpha1, a2 = rep.alpha2;
    if (f > 0) return std::pow(a2 / q, f);
    if (X == 0.0) throw DomainError("euler_factor: chi(p) = 0");
    cplx den = 1.0 - X / a2;
    cplx n1 = 1.0 - a1 * X / q, n2 = 1.0 - a2 / (q * X), n3 = 1.0 - a2 * X / q;
    bool special = rep.kind == RepKind::special;
    // (1 - alpha1 X / q) = (1 - X / alpha2) when nu = 1, and (1 - alpha2 X / q) = (1 - X / alpha2)
    // when alpha2^2 = q; cancel so the value is continuous through X = alpha2
    if (close(rep.nu(), 1.0)) return special ? n2 : n2 * n3;
    if (!special && close(a2 * a2, q)) return n1 * n2;
    if (std::abs(den) < kTol) throw PoleError("euler_factor: pole at chi(p) = alpha2");
    return special ? n1 * n2 / den : n1 * n2 * n3 / den;
}

cplx euler_factor(const LocalRep& rep, const MultChar& chi) {
    return euler_factor(rep, chi.at_pi, chi.cond_exp);
}

Rational euler_factor_exact(const LocalRep& rep, const MultChar& chi) {
    if (!rep.alpha1_x || !rep.alpha2_x) throw DomainError("euler_factor_exact: alphas are not rational");
    Rational q(rep.F.q()), a1 = *rep.alpha1_x, a2 = *rep.alpha2_x;
    if (chi.cond_exp > 0) return rpow(a2 / q, chi.cond_exp);
    if (!chi.at_pi_exact) throw DomainError("euler_factor_exact: chi(p) is not exact");
    Rational X = *chi.at_pi_exact;
    Rational den = 1 - X / a2;
    Rational n1 = 1 - a1 * X / q, n2 = 1 - a2 / (q * X), n3 = 1 - a2 * X / q;
    bool special = rep.kind == RepKind::special;
    if (*rep.nu_x == 1) return special ? n2 : Rational(n2 * n3);
    if (!special && a2 * a2 == q) return n1 * n2;
    if (den == 0) throw PoleError("euler_factor: pole at chi(p) = alpha2");
    Rational num = special ? Rational(n1 * n2) : Rational(n1 * n2 * n3);
    return num / den;
}

// ---- integrals ----

IntegralResult integrate_char(const LocalDist& mu, const MultChar& chi, double tol) {
    cplx beta = mu.rep.beta();
    if (chi.cond_exp == 0 && std::abs(chi.at_pi) >= std::abs(mu.rep.alpha2))
        throw DivergenceError("integrate_char: |chi(p)| >= |alpha2|");
    CosetStepFn g = character_integrand(chi);
    g.radial = *g.radial * beta;
    g.growth = std::abs(chi.at_pi * beta);
    int n = annulus_depth(g, tol / 10);
    auto r = annulus_integral_oracle(g, n);
    return {r.value, r.tail_bound, r.n_max};
}

Cyclo integrate_char_exact(const LocalDist& mu, const MultChar& chi) {
    int f = chi.cond_exp;
    if (f == 0) throw DomainError("integrate_char_exact: chi must be ramified");
    if (!chi.at_pi_exact) throw DomainError("integrate_char_exact: chi(p) is not exact");
    auto beta = mu.rep.beta_exact();
    if (!beta) throw DomainError("integrate_char_exact: beta is not rational");
    const auto& F = chi.F;
    int s = f + 1;
    Rational q(F.q()), X = *chi.at_pi_exact;
    int64_t ps = ipow64(F.p, s);
    int64_t L = lcm64(chi.M, ps);
    Cyclo total(L);
    // cosets p^k u U^(s); for k < -s each coset has measure 0, for k >= 0 psi is trivial and the
    // sum of chi over U/U^(s) vanishes, k = 0 and k = -s are kept as explicit checks
    auto units = unit_residues(F, s);
    for (int k = -s; k <= 0; ++k) {
        Rational coef = rpow(X * *beta, k) * rpow(q, -(s + k));
        for (auto& u : units) {
            PadicNum a = PadicNum::from_coeffs(F, u).shift(k);
            Rational t = a.frac_trace();
            int64_t num = static_cast<int64_t>(boost::multiprecision::numerator(t));
            int64_t den = static_cast<int64_t>(boost::multiprecision::denominator(t));
            total.add_root(chi.unit_exponent(u) * (L / chi.M) + num * (L / den), coef);
        }
    }
    return total;
}

json Prop27Report::to_json() const {
    return json{{"lhs", {{"re", lhs.real()}, {"im", lhs.imag()}}},
                {"rhs", {{"re", rhs.real()}, {"im", rhs.imag()}}},
                {"abs_err", abs_err},
                {"rel_err", rel_err},
                {"tail_bound", tail_bound},
                {"exact", exact},
                {"exact_equal", exact_equal}};
}

Prop27Report prop27_check(const LocalRep& rep, const MultChar& chi, double tol) {
    if (rep.F != chi.F) throw DomainError("prop27_check: field mismatch");
    Prop27Report r;
    LocalDist mu{rep};
    auto I = integrate_char(mu, chi, tol);
    r.lhs = I.value;
    r.tail_bound = I.tail_bound;
    cplx e = euler_factor(rep, chi);
    cplx tau = chi.cond_exp > 0 ? gauss_sum(chi, AddChar{chi.F}) : cplx(1.0);
    try {
        r.rhs = e * tau * local_L(rep, chi, 0.5);
    } catch (const PoleError&) {
        // L has a pole exactly where a numerator factor of e vanishes; use the cancelled product
        cplx X = chi.at_pi, a2 = rep.alpha2;
        r.rhs = (1.0 - a2 / (rep.q() * X)) / (1.0 - X / a2);
    }
    r.abs_err = std::abs(r.lhs - r.rhs);
    r.rel_err = r.abs_err / std::max(std::abs(r.rhs), 1e-300);
    if (chi.cond_exp > 0 && chi.at_pi_exact && rep.alpha2_x) {
        r.exact = true;
        Cyclo lhs = integrate_char_exact(mu, chi);
        Cyclo rhs = gauss_sum_exact(chi) * (euler_factor_exact(rep, chi) * *local_L_half_exact(rep, chi));
        r.exact_equal = lhs == rhs;
    }
    return r;
}

// ---- Whittaker values ----

cplx whittaker_WH(const LocalDist& mu, int n, const PadicNum& a) { return mu_eval(mu, Coset{a, n, false}); }

Cyclo whittaker_WH_exact(const LocalDist& mu, int n, const PadicNum& a) {
    return mu_coset_exact(mu.rep, Coset{a, n, false});
}

Prop29cReport prop29c_check(const LocalDist& mu, const StepFn& f, int n) {
    Prop29cReport r{Cyclo(1), Cyclo(1), false};
    if (f.terms.empty()) {
        r.equal = true;
        return r;
    }
    const auto& F = f.terms.front().first.a.field();
    Rational idx_H = unit_index(F, n), vol_fine = 1 / unit_index(F, n + 1);
    for (auto& [c0, coef] : f.terms) {
        Coset c = normalize(c0);
        if (zero_ball(c) || c.n > n) throw DomainError("prop29c_check: f is not invariant under U^(n)");
        CompactOpen piece{F, {c}};
        r.lhs += mu_eval_exact(mu, piece) * coef;
        for (auto& x : piece.refined(n + 1).cosets)
            r.rhs += whittaker_WH_exact(mu, n, x.a) * (coef * idx_H * vol_fine);
    }
    r.equal = r.lhs == r.rhs;
    return r;
}

cplx semilocal_mu(const std::vector<LocalDist>& mus, const std::vector<CompactOpen>& S) {
    if (mus.size() != S.size()) throw DomainError("semilocal_mu: arity mismatch");
    cplx p = 1.0;
    for (size_t i = 0; i < mus.size(); ++i) p *= mu_eval(mus[i], S[i]);
    return p;
}

}  // namespace padicl
