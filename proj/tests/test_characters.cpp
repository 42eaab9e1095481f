#include <doctest.h>

#include <random>
#include <set>

#include "padicl/characters.hpp"

using namespace padicl;

namespace {

int legendre_symbol(int64_t a, int64_t p) {
    a %= p;
    if (a == 0) return 0;
    int64_t r = 1, b = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r == 1 ? 1 : -1;
}

}  // namespace

TEST_CASE("cyclotomic arithmetic") {
    CHECK(cyclotomic_poly(1) == std::vector<BigInt>{-1, 1});
    CHECK(cyclotomic_poly(6) == std::vector<BigInt>{1, -1, 1});
    CHECK(cyclotomic_poly(12) == std::vector<BigInt>{1, 0, -1, 0, 1});
    // 1 + z + ... + z^4 = 0 for a primitive fifth root
    Cyclo s(5);
    for (int k = 0; k < 5; ++k) s.add_root(k, 1);
    CHECK(s.is_zero());
    // (z8 + z8^-1)^2 = 2
    Cyclo r = Cyclo::root(8, 1) + Cyclo::root(8, -1);
    CHECK((r * r).as_rational() == 2);
    CHECK(Cyclo::root(4, 1) * Cyclo::root(6, 1) == Cyclo::root(12, 5));
    CHECK_THROWS_AS(Cyclo::root(3, 1).as_rational(), DomainError);
}

TEST_CASE("additive character") {
    auto F = field(5, 1, 10);
    AddChar psi{F};
    auto z = psi_eval(psi, PadicNum::from_rational(F, Rational(1, 5)));
    CHECK(std::abs(z - std::polar(1.0, 2 * M_PI / 5)) < 1e-14);
    CHECK(std::abs(psi_eval(psi, PadicNum::from_int(F, 3)) - 1.0) < 1e-15);
    // every element of O is in the kernel
    for (auto& x : residue_reps(F, 2).all) CHECK(psi_exponent(psi, x) == 0);

    auto K = field(3, 2, 6);
    AddChar psiK{K};
    bool nontrivial = false;
    for (auto& u : residue_reps(K, 1).all)
        if (psi_exponent(psiK, u.shift(-1)) != 0) nontrivial = true;
    CHECK(nontrivial);

    std::mt19937_64 g(5);
    for (int it = 0; it < 50; ++it) {
        Rational a(static_cast<int64_t>(g() % 10000) - 5000, 125), b(static_cast<int64_t>(g() % 10000) - 5000, 25);
        auto x = PadicNum::from_rational(F, a), y = PadicNum::from_rational(F, b);
        CHECK(std::abs(psi_eval(psi, x + y) - psi_eval(psi, x) * psi_eval(psi, y)) < 1e-12);
    }
    auto tiny = PadicNum::from_coeffs(F, {BigInt(1)}, -12, 3);
    CHECK_THROWS_AS(psi_eval(psi, tiny), PrecisionError);
}

TEST_CASE("conductors") {
    auto F = field(5, 1, 10);
    CHECK(conductor(make_char(F, 0, 1, {0})) == 0);
    CHECK(conductor(make_char(F, 2, 1, std::vector<int64_t>(25, 0))) == 0);
    auto leg = legendre_character(F);
    CHECK(leg.cond_exp == 1);
    for (int a = 1; a < 5; ++a)
        CHECK(std::abs(leg.unit_value({BigInt(a)}) - static_cast<double>(legendre_symbol(a, 5))) < 1e-14);

    // order-5 characters on (Z/25)^*: k(u) = dlog_2(u) mod 5 with 2 a generator mod 25
    std::vector<int64_t> dl(25, -1);
    int64_t x = 1;
    for (int k = 0; k < 20; ++k) {
        dl[x] = k;
        x = x * 2 % 25;
    }
    for (int64_t t = 1; t < 5; ++t) {
        std::vector<int64_t> tab(25, -1);
        for (int u = 1; u < 25; ++u)
            if (u % 5) tab[u] = t * dl[u] % 5;
        auto chi = make_char(F, 2, 5, tab);
        CHECK(chi.cond_exp == 2);
    }
    // a character that is not multiplicative is rejected
    std::vector<int64_t> bad(5, 0);
    bad[0] = -1;
    bad[2] = 1;
    CHECK_THROWS_AS(make_char(F, 1, 4, bad), InconsistentCharacter);
}

TEST_CASE("character enumeration counts and multiplicativity") {
    for (auto F : {field(3, 1, 8), field(5, 1, 8), field(3, 2, 8), field(2, 1, 8)}) {
        int64_t q = F.q();
        for (int l = 0; l <= (q > 5 ? 2 : 3); ++l) {
            auto chars = all_characters(F, l);
            int64_t expect = l == 0 ? 1 : (q - 1) * ipow64(q, l - 1);
            if (F.p == 2 && l >= 1) expect = ipow64(2, l - 1);
            CHECK(static_cast<int64_t>(chars.size()) == expect);
            // distinct tables
            std::set<std::vector<int64_t>> seen;
            for (auto& c : chars) {
                std::vector<int64_t> key = c.table;
                for (auto& k : key)
                    if (k >= 0) k = k * (1000000 / c.M);
                seen.insert(key);
            }
            CHECK(seen.size() == chars.size());
        }
    }
    // chi(xy) = chi(x) chi(y) on random elements of F^*
    auto F = field(5, 1, 10);
    std::mt19937_64 g(9);
    auto chars = all_characters(F, 2);
    for (int it = 0; it < 100; ++it) {
        auto chi = with_at_pi(chars[g() % chars.size()], cplx(0.3, 1.1));
        auto rx = [&] {
            int64_t n = static_cast<int64_t>(g() % 100000) + 1;
            if (n % 5 == 0) n += 1;
            int sh = static_cast<int>(g() % 5) - 2;
            return PadicNum::from_int(F, n).shift(sh);
        };
        auto a = rx(), b = rx();
        CHECK(std::abs(chi(a * b) - chi(a) * chi(b)) < 1e-12);
    }
}

TEST_CASE("Gauss sums") {
    auto F = field(5, 1, 10);
    AddChar psi{F};
    auto leg = legendre_character(F);
    // direct sum of (a/5) e(a/5)
    cplx direct = 0;
    for (int a = 1; a < 5; ++a) direct += static_cast<double>(legendre_symbol(a, 5)) * std::polar(1.0, 2 * M_PI * a / 5);
    CHECK(std::abs(gauss_sum(leg, psi) - direct) < 1e-12);
    CHECK(std::abs(gauss_sum(leg, psi) - std::sqrt(5.0)) < 1e-12);
    auto ex = gauss_sum_exact(leg);
    CHECK((ex * ex).as_rational() == 5);
    CHECK(std::abs(gauss_sum(unramified_character(F, 3.0), psi) - 1.0) < 1e-15);

    // chi(p) enters as chi(p)^-f
    auto leg2 = with_at_pi(leg, 0.0, Rational(2));
    CHECK(std::abs(gauss_sum(leg2, psi) - std::sqrt(5.0) / 2.0) < 1e-12);

    for (auto Fx : {field(3, 1, 8), field(5, 1, 8), field(3, 2, 6)}) {
        AddChar px{Fx};
        double q = static_cast<double>(Fx.q());
        for (int f = 1; f <= 2; ++f)
            for (auto& chi : primitive_characters(Fx, f)) {
                CHECK(std::abs(std::abs(gauss_sum(chi, px)) - std::pow(q, f / 2.0)) < 1e-9);
                // tau * conj(tau) = q^f exactly
                auto t = gauss_sum_exact(chi);
                CHECK((t * t.conj()).as_rational() == Rational(ipow(Fx.p, Fx.f * f)));
            }
    }
}

TEST_CASE("character integral closed form against the annulus oracle") {
    auto F = field(5, 1, 10);
    AddChar psi{F};
    auto chi = unramified_character(F, 2.0, Rational(2));
    CHECK(std::abs(lemma24_value(chi, psi) - 5.0 / 6.0) < 1e-14);
    auto g = character_integrand(chi);
    int n = annulus_depth(g, 1e-12);
    auto r = annulus_integral_oracle(g, n);
    CHECK(r.tail_bound < 1e-12);
    CHECK(std::abs(r.value - 5.0 / 6.0) < 1e-10);

    auto leg = legendre_character(F);
    auto rl = annulus_integral_oracle(character_integrand(leg), 40);
    CHECK(std::abs(rl.value - std::sqrt(5.0)) < 1e-10);

    CHECK_THROWS_AS(lemma24_value(unramified_character(F, 5.0), psi), DivergenceError);
    CHECK_THROWS_AS(annulus_integral_oracle(character_integrand(unramified_character(F, 6.0)), 10),
                    DivergenceError);

    // |chi(p)| close to q needs a few hundred annuli; chi(p)^k alone would overflow
    auto F9 = field(3, 2, 6);
    auto near = with_at_pi(primitive_characters(F9, 2)[3], cplx(-7.36, -3.75));
    auto gn = character_integrand(near);
    auto rn = annulus_integral_oracle(gn, annulus_depth(gn, 1e-13));
    CHECK(rn.n_max > 340);
    CHECK(std::abs(rn.value / lemma24_value(near, AddChar{F9}) - 1.0) < 1e-8);

    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> U(0, 1);
    for (auto Fx : {field(2, 1, 8), field(3, 1, 8), field(3, 2, 6), field(5, 1, 8)}) {
        AddChar px{Fx};
        double q = static_cast<double>(Fx.q());
        for (int f = 0; f <= 2; ++f) {
            auto prim = primitive_characters(Fx, f);
            if (prim.empty()) continue;
            for (int it = 0; it < 3; ++it) {
                cplx X = std::polar(0.05 + 0.8 * q * U(gen), 2 * M_PI * U(gen));
                auto c = with_at_pi(prim[gen() % prim.size()], X);
                auto gi = character_integrand(c);
                auto res = annulus_integral_oracle(gi, annulus_depth(gi, 1e-12));
                cplx cf = lemma24_value(c, px);
                CHECK(std::abs(res.value - cf) / std::abs(cf) < 1e-8);
            }
        }
    }
}
