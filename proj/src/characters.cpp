#include "padicl/characters.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace padicl {

namespace {

using Vec = std::vector<int64_t>;

int64_t mod64(int64_t a, int64_t m) {
    a %= m;
    return a < 0 ? a + m : a;
}

// residues of O/p^n as small integer coefficient vectors
struct ResidueRing {
    const LocalFieldSpec& F;
    int n;
    int64_t m;
    ResidueRing(const LocalFieldSpec& F_, int n_) : F(F_), n(n_), m(ipow64(F_.p, n_)) {}

    int64_t size() const { return ipow64(m, F.f); }
    Vec coeffs(int64_t idx) const {
        Vec c(F.f);
        for (int i = 0; i < F.f; ++i) {
            c[i] = idx % m;
            idx /= m;
        }
        return c;
    }
    int64_t index(const Vec& c) const {
        int64_t idx = 0, mul = 1;
        for (int i = 0; i < F.f; ++i) {
            idx += mod64(c[i], m) * mul;
            mul *= m;
        }
        return idx;
    }
    bool is_unit(const Vec& c) const {
        for (auto x : c)
            if (x % F.p != 0) return true;
        return false;
    }
    Vec mul(const Vec& a, const Vec& b) const {
        int f = F.f;
        std::vector<__int128> r(2 * f - 1, 0);
        for (int i = 0; i < f; ++i)
            for (int j = 0; j < f; ++j) r[i + j] = (r[i + j] + static_cast<__int128>(a[i]) * b[j]) % m;
        for (int i = 2 * f - 2; i >= f; --i) {
            __int128 c = r[i];
            r[i] = 0;
            for (int j = 0; j < f; ++j) r[i - f + j] = (r[i - f + j] - c * F.modulus[j]) % m;
        }
        Vec out(f);
        for (int i = 0; i < f; ++i) out[i] = mod64(static_cast<int64_t>(r[i]), m);
        return out;
    }
    int64_t trace(const Vec& c) const {
        __int128 t = 0;
        for (int i = 0; i < F.f; ++i) t = (t + static_cast<__int128>(c[i]) * static_cast<int64_t>(F.traces[i] % m)) % m;
        return mod64(static_cast<int64_t>(t), m);
    }
};

Vec to_small(const std::vector<BigInt>& c) {
    Vec v(c.size());
    for (size_t i = 0; i < c.size(); ++i) v[i] = static_cast<int64_t>(c[i]);
    return v;
}

std::vector<int64_t> prime_factors(int64_t n) {
    std::vector<int64_t> out;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) out.push_back(n);
    return out;
}

// discrete log on F_q^*, indexed by residue index mod p
std::vector<int64_t> residue_dlog(const LocalFieldSpec& F) {
    ResidueRing R(F, 1);
    int64_t q = F.q();
    auto pf = prime_factors(q - 1);
    auto pw = [&](Vec x, int64_t e) {
        Vec r(F.f, 0);
        r[0] = 1;
        while (e) {
            if (e & 1) r = R.mul(r, x);
            x = R.mul(x, x);
            e >>= 1;
        }
        return r;
    };
    Vec one(F.f, 0);
    one[0] = 1;
    for (int64_t gi = 1; gi < q; ++gi) {
        Vec g = R.coeffs(gi);
        bool gen = true;
        for (auto r : pf)
            if (pw(g, (q - 1) / r) == one) gen = false;
        if (!gen) continue;
        std::vector<int64_t> dl(q, -1);
        Vec x = one;
        for (int64_t k = 0; k < q - 1; ++k) {
            dl[R.index(x)] = k;
            x = R.mul(x, g);
        }
        return dl;
    }
    throw std::logic_error("no generator of the residue field found");
}

int compute_conductor(const LocalFieldSpec& F, int level, const std::vector<int64_t>& table) {
    if (level == 0) return 0;
    ResidueRing R(F, level);
    for (int c = 0; c <= level; ++c) {
        int64_t pc = ipow64(F.p, c);
        bool trivial = true;
        for (int64_t idx = 0; idx < R.size() && trivial; ++idx) {
            Vec v = R.coeffs(idx);
            if (!R.is_unit(v)) continue;
            if (c > 0) {
                bool in_sub = mod64(v[0] - 1, pc) == 0;
                for (int i = 1; i < F.f; ++i)
                    if (v[i] % pc != 0) in_sub = false;
                if (!in_sub) continue;
            }
            if (table[idx] != 0) trivial = false;
        }
        if (trivial) return c;
    }
    return level;
}

}  // namespace

cplx e2pi(double x) {
    x -= std::floor(x);
    return std::polar(1.0, 2.0 * M_PI * x);
}

cplx e2pi(const Rational& x) {
    BigInt n = numerator(x), d = denominator(x);
    BigInt r = mod_pos(n, d);
    // reduce first so the double conversion is exact enough
    return e2pi(static_cast<double>(r) / static_cast<double>(d));
}

Rational psi_exponent(const AddChar& psi, const PadicNum& x) {
    if (x.field() != psi.F) throw DomainError("psi_eval: field mismatch");
    return x.frac_trace();
}

cplx psi_eval(const AddChar& psi, const PadicNum& x) { return e2pi(psi_exponent(psi, x)); }

int64_t MultChar::unit_exponent(const std::vector<BigInt>& coeffs) const {
    if (level == 0) return table.at(0);
    int64_t idx = residue_index(F, coeffs, level);
    int64_t k = table.at(idx);
    if (k < 0) throw DomainError("MultChar: argument is not a unit");
    return k;
}

cplx MultChar::unit_value(const std::vector<BigInt>& coeffs) const {
    return e2pi(static_cast<double>(unit_exponent(coeffs)) / static_cast<double>(M));
}

cplx MultChar::operator()(const PadicNum& x) const {
    if (x.is_zero()) throw DomainError("MultChar: chi(0) is undefined");
    int v = x.valuation();
    PadicNum u = x.shift(-v);
    cplx val = level == 0 ? e2pi(static_cast<double>(table.at(0)) / M)
                          : unit_value(u.residue_coeffs(level));
    return val * std::pow(at_pi, v);
}

json MultChar::to_json() const {
    json j{{"p", F.p},     {"f_res", F.f}, {"cond_exp", cond_exp},
           {"level", level}, {"M", M},     {"table", table},
           {"at_pi", {{"re", at_pi.real()}, {"im", at_pi.imag()}}}};
    if (at_pi_exact) {
        std::ostringstream os;
        os << *at_pi_exact;
        j["at_pi"]["exact"] = os.str();
    }
    return j;
}

MultChar make_char(const LocalFieldSpec& F, int level, int64_t M, std::vector<int64_t> table,
                   cplx at_pi, std::optional<Rational> at_pi_exact) {
    if (level < 0) throw DomainError("make_char: negative level");
    if (M < 1) throw DomainError("make_char: M must be positive");
    if (at_pi == 0.0) throw DomainError("make_char: chi(p) must be nonzero");
    if (at_pi_exact && *at_pi_exact == 0) throw DomainError("make_char: chi(p) must be nonzero");
    ResidueRing R(F, level);
    if (static_cast<int64_t>(table.size()) != R.size())
        throw InconsistentCharacter("make_char: table size does not match the level");
    std::vector<int64_t> units;
    for (int64_t i = 0; i < R.size(); ++i) {
        bool unit = level == 0 || R.is_unit(R.coeffs(i));
        if (unit) {
            if (table[i] < 0) throw InconsistentCharacter("make_char: missing value on a unit");
            table[i] = mod64(table[i], M);
            units.push_back(i);
        } else {
            table[i] = -1;
        }
    }
    if (level == 0) {
        if (table[0] != 0) throw InconsistentCharacter("make_char: nontrivial value on U/U");
    } else {
        for (auto a : units) {
            Vec ca = R.coeffs(a);
            for (auto b : units) {
                if (b < a) continue;
                int64_t ab = R.index(R.mul(ca, R.coeffs(b)));
                if (mod64(table[a] + table[b] - table[ab], M) != 0)
                    throw InconsistentCharacter("make_char: table is not multiplicative");
            }
        }
    }
    MultChar chi;
    chi.F = F;
    chi.level = level;
    chi.M = M;
    chi.table = std::move(table);
    chi.at_pi = at_pi_exact ? cplx(static_cast<double>(*at_pi_exact), 0.0) : at_pi;
    chi.at_pi_exact = at_pi_exact;
    chi.cond_exp = compute_conductor(F, level, chi.table);
    return chi;
}

int conductor(const MultChar& chi) {
    // re-derive from the table so a hand-edited character is caught
    ResidueRing R(chi.F, chi.level);
    for (int64_t a = 0; a < R.size() && chi.level > 0; ++a) {
        Vec ca = R.coeffs(a);
        if (!R.is_unit(ca)) continue;
        for (int64_t b = a; b < R.size(); ++b) {
            Vec cb = R.coeffs(b);
            if (!R.is_unit(cb)) continue;
            int64_t ab = R.index(R.mul(ca, cb));
            if (mod64(chi.table[a] + chi.table[b] - chi.table[ab], chi.M) != 0)
                throw InconsistentCharacter("conductor: table is not multiplicative");
        }
    }
    return compute_conductor(chi.F, chi.level, chi.table);
}

MultChar with_at_pi(MultChar chi, cplx at_pi, std::optional<Rational> exact) {
    if (exact) {
        if (*exact == 0) throw DomainError("with_at_pi: chi(p) must be nonzero");
        chi.at_pi = static_cast<double>(*exact);
    } else {
        if (at_pi == 0.0) throw DomainError("with_at_pi: chi(p) must be nonzero");
        chi.at_pi = at_pi;
    }
    chi.at_pi_exact = exact;
    return chi;
}

MultChar unramified_character(const LocalFieldSpec& F, cplx at_pi, std::optional<Rational> exact) {
    auto chi = make_char(F, 0, 1, {0});
    return with_at_pi(chi, at_pi, exact);
}

std::vector<MultChar> all_characters(const LocalFieldSpec& F, int level) {
    if (level < 0) throw DomainError("all_characters: negative level");
    if (level == 0) return {make_char(F, 0, 1, {0})};
    ResidueRing R(F, level);
    std::vector<MultChar> out;
    if (F.p == 2) {
        if (F.f != 1) throw DomainError("all_characters: p = 2 is supported only for Q_2");
        int64_t m = R.m;
        if (level == 1) return {make_char(F, 1, 1, {-1, 0})};
        // (Z/2^l)^* = {+-1} x <5>
        int64_t ord5 = level >= 3 ? ipow64(2, level - 2) : 1;
        int64_t M = std::max<int64_t>(2, ord5);
        std::vector<int64_t> eps(m, -1), e5(m, -1);
        int64_t x = 1;
        for (int64_t e = 0; e < ord5; ++e) {
            eps[x] = 0;
            e5[x] = e;
            eps[m - x] = 1;
            e5[m - x] = e;
            x = x * 5 % m;
        }
        for (int64_t s = 0; s < 2; ++s)
            for (int64_t t = 0; t < ord5; ++t) {
                std::vector<int64_t> tab(m, -1);
                for (int64_t r = 1; r < m; r += 2)
                    tab[r] = mod64(s * eps[r] * (M / 2) + t * e5[r] * (M / ord5), M);
                out.push_back(make_char(F, level, M, tab));
            }
        return out;
    }
    int64_t q = F.q();
    int64_t pl1 = ipow64(F.p, level - 1);
    int64_t M = (q - 1) * pl1;
    auto dl = residue_dlog(F);
    ResidueRing R1(F, 1), Rl1(F, level - 1);
    // L(u) = log_p(u) / p mod p^(level-1), an isomorphism U^(1)/U^(level) -> O/p^(level-1)
    std::vector<int64_t> dlog(R.size(), -1);
    std::vector<Vec> Lu(R.size());
    auto Fw = field(F.p, F.f, level + 2);
    for (int64_t i = 0; i < R.size(); ++i) {
        Vec c = R.coeffs(i);
        if (!R.is_unit(c)) continue;
        Vec c1(F.f);
        for (int k = 0; k < F.f; ++k) c1[k] = c[k] % F.p;
        dlog[i] = dl[R1.index(c1)];
        if (level > 1) {
            std::vector<BigInt> cb(c.begin(), c.end());
            auto lg = log_p(PadicNum::from_coeffs(Fw, cb)).shift(-1);
            Lu[i] = to_small(lg.residue_coeffs(level - 1));
        } else {
            Lu[i] = Vec(F.f, 0);
        }
    }
    for (int64_t j = 0; j < q - 1; ++j)
        for (int64_t bi = 0; bi < Rl1.size(); ++bi) {
            Vec b = Rl1.coeffs(bi);
            std::vector<int64_t> tab(R.size(), -1);
            for (int64_t i = 0; i < R.size(); ++i) {
                if (dlog[i] < 0) continue;
                int64_t T = level > 1 ? Rl1.trace(Rl1.mul(b, Lu[i])) : 0;
                tab[i] = mod64(j * dlog[i] % (q - 1) * pl1 + (q - 1) * T, M);
            }
            out.push_back(make_char(F, level, M, tab));
        }
    return out;
}

std::vector<MultChar> primitive_characters(const LocalFieldSpec& F, int f) {
    std::vector<MultChar> out;
    for (auto& chi : all_characters(F, f))
        if (chi.cond_exp == f) out.push_back(chi);
    return out;
}

MultChar legendre_character(const LocalFieldSpec& F) {
    if (F.p == 2) throw DomainError("legendre_character: p must be odd");
    int64_t q = F.q();
    auto dl = residue_dlog(F);
    std::vector<int64_t> tab(q, -1);
    for (int64_t i = 1; i < q; ++i)
        if (dl[i] >= 0) tab[i] = dl[i] % 2;
    // parity of the discrete log with M = 2
    return make_char(F, 1, 2, tab);
}

cplx gauss_sum(const MultChar& chi, const AddChar& psi) {
    if (psi.F != chi.F) throw DomainError("gauss_sum: field mismatch");
    int f = chi.cond_exp;
    if (f == 0) return 1.0;
    ResidueRing R(chi.F, f);
    cplx s = 0;
    for (int64_t i = 0; i < R.size(); ++i) {
        Vec c = R.coeffs(i);
        if (!R.is_unit(c)) continue;
        std::vector<BigInt> cb(c.begin(), c.end());
        double ex = static_cast<double>(chi.unit_exponent(cb)) / static_cast<double>(chi.M) +
                    static_cast<double>(R.trace(c)) / static_cast<double>(R.m);
        s += e2pi(ex);
    }
    return s * std::pow(chi.at_pi, -f);
}

Cyclo gauss_sum_exact(const MultChar& chi) {
    if (!chi.at_pi_exact) throw DomainError("gauss_sum_exact: chi(p) is not exact");
    int f = chi.cond_exp;
    if (f == 0) return Cyclo::rational(1);
    ResidueRing R(chi.F, f);
    int64_t L = lcm64(chi.M, R.m);
    Cyclo s(L);
    for (int64_t i = 0; i < R.size(); ++i) {
        Vec c = R.coeffs(i);
        if (!R.is_unit(c)) continue;
        std::vector<BigInt> cb(c.begin(), c.end());
        s.add_root(chi.unit_exponent(cb) * (L / chi.M) + R.trace(c) * (L / R.m), 1);
    }
    Rational a = *chi.at_pi_exact;
    Rational scale = 1;
    for (int k = 0; k < f; ++k) scale /= a;
    return s * scale;
}

cplx lemma24_value(const MultChar& chi, const AddChar& psi) {
    if (chi.cond_exp > 0) return gauss_sum(chi, psi);
    cplx X = chi.at_pi;
    double q = static_cast<double>(chi.F.q());
    if (std::abs(X) >= q) throw DivergenceError("lemma24_value: |chi(p)| >= q, the integral diverges");
    return (1.0 - 1.0 / X) / (1.0 - X / q);
}

std::vector<std::vector<BigInt>> unit_residues(const LocalFieldSpec& F, int n) {
    ResidueRing R(F, n);
    std::vector<std::vector<BigInt>> out;
    for (int64_t i = 0; i < R.size(); ++i) {
        Vec c = R.coeffs(i);
        if (!R.is_unit(c)) continue;
        out.emplace_back(c.begin(), c.end());
    }
    return out;
}

AnnulusResult annulus_integral_oracle(const CosetStepFn& g, int n_max) {
    double q = static_cast<double>(g.F.q());
    if (g.step < 1) throw DomainError("annulus_integral_oracle: step must be >= 1");
    if (g.k_min < -g.step)
        throw DomainError("annulus_integral_oracle: cosets too coarse to resolve psi below -step");
    if (g.growth >= q)
        throw DivergenceError("annulus_integral_oracle: no convergence certificate (growth >= q)");
    ResidueRing R(g.F, g.step);
    std::vector<int64_t> tr;
    for (int64_t i = 0; i < R.size(); ++i) {
        Vec c = R.coeffs(i);
        if (R.is_unit(c)) tr.push_back(R.trace(c));
    }
    cplx total = 0;
    for (int k = g.k_min; k <= n_max; ++k) {
        cplx ann = 0;
        for (int64_t i = 0; i < static_cast<int64_t>(tr.size()); ++i) {
            cplx ps = 1.0;
            if (k < 0) {
                // psi(p^k u) = e(Tr(u) mod p^-k / p^-k)
                int64_t d = ipow64(g.F.p, -k);
                ps = e2pi(static_cast<double>(tr[i] % d) / static_cast<double>(d));
            }
            ann += ps * g.value(g.radial ? 0 : k, i);
        }
        if (g.radial) total += ann * std::pow(*g.radial / q, k) * std::pow(q, -g.step);
        else total += ann * std::pow(q, -(k + g.step));
    }
    AnnulusResult r;
    r.value = total;
    r.n_max = n_max;
    double ratio = g.growth / q;
    r.tail_bound = g.scale * (1.0 - 1.0 / q) * std::pow(ratio, n_max + 1) / (1.0 - ratio);
    return r;
}

int annulus_depth(const CosetStepFn& g, double target) {
    double q = static_cast<double>(g.F.q());
    if (g.growth >= q) throw DivergenceError("annulus_depth: growth >= q");
    double ratio = g.growth / q;
    int n = 0;
    while (g.scale * (1.0 - 1.0 / q) * std::pow(ratio, n + 1) / (1.0 - ratio) >= target) {
        ++n;
        if (n > 100000) throw DivergenceError("annulus_depth: tail does not reach the target");
    }
    return n;
}

CosetStepFn character_integrand(const MultChar& chi) {
    CosetStepFn g;
    g.F = chi.F;
    // one level finer than needed, so the first vanishing annulus is computed explicitly
    g.step = std::max(chi.cond_exp, 1) + 1;
    g.k_min = -g.step;
    auto units = unit_residues(chi.F, g.step);
    std::vector<cplx> vals;
    for (auto& u : units) vals.push_back(chi.unit_value(u));
    cplx X = chi.at_pi;
    g.value = [vals](int, int64_t i) { return vals[i]; };
    g.radial = X;
    g.growth = std::abs(X);
    g.scale = 1.0;
    return g;
}

}  // namespace padicl
