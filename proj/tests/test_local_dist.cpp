#include <doctest.h>

#include <random>

#include "padicl/local_dist.hpp"

using namespace padicl;

namespace {

// brute force: psi(x) beta^v dx over a(1 + p^n O), summed over cosets of O
cplx mu_brute(const LocalRep& rep, const PadicNum& a, int n) {
    const auto& F = a.field();
    int v = a.valuation();
    int w = v + n;  // a p^n O = p^w O
    double q = static_cast<double>(F.q());
    if (w < 0) {
        cplx s = 0;
        for (auto& r : residue_reps(F, -w).all) s += psi_eval(AddChar{F}, a + r.shift(w));
        return s * std::pow(rep.beta(), v);
    }
    return psi_eval(AddChar{F}, a) * std::pow(q, -w) * std::pow(rep.beta(), v);
}

}  // namespace

TEST_CASE("representations and ordinarity") {
    auto F = field(5, 1, 12);
    auto st = LocalRep::steinberg(F);
    CHECK(st.kind == RepKind::special);
    CHECK(*st.a_x == 6);
    CHECK(*st.nu_x == 1);
    CHECK(is_ordinary(st));
    // a^2 = nu (q+1)^2 characterizes the special case
    CHECK(*st.a_x * *st.a_x == *st.nu_x * 36);
    CHECK_THROWS_AS(LocalRep::from_alphas(F, Rational(5), Rational(1), RepKind::special), DomainError);
    CHECK_THROWS_AS(LocalRep::from_alphas(F, Rational(1), Rational(5), RepKind::spherical), DomainError);

    auto good = LocalRep::from_a_nu(F, 1, 1);
    CHECK(is_ordinary(good));
    CHECK(std::abs(good.alpha1 + good.alpha2 - 1.0) < 1e-14);
    CHECK(std::abs(good.alpha1 * good.alpha2 - 5.0) < 1e-13);
    CHECK(good.alpha1.imag() > 0);
    CHECK_FALSE(is_ordinary(LocalRep::from_a_nu(F, 0, 1)));
    CHECK_FALSE(is_ordinary(LocalRep::from_a_nu(F, 5, 1)));
    auto num = LocalRep::from_alphas(F, cplx(1.5, 0.2), cplx(2.0, 0.0), RepKind::spherical);
    CHECK_THROWS_AS(is_ordinary(num), DomainError);

    // rational roots: the unit root goes first
    auto split = LocalRep::from_a_nu(F, 7, 2);
    CHECK(*split.alpha1_x == 2);
    CHECK(*split.alpha2_x == 5);
    CHECK(LocalRep::from_a_nu(F, 6, 1).kind == RepKind::special);
}

TEST_CASE("mu on cosets") {
    auto F = field(5, 1, 12);
    double q = 5;
    LocalDist mu{LocalRep::from_alphas(F, Rational(2), Rational(15, 2), RepKind::spherical)};
    cplx beta = mu.rep.beta();
    CHECK(std::abs(mu_eval(mu, CompactOpen::units(F)) - (1 - 1 / q)) < 1e-15);
    auto pinv = PadicNum::from_rational(F, Rational(1, 5));
    CHECK(std::abs(mu_eval(mu, CompactOpen::single(pinv, 0)) + 1.0 / beta) < 1e-14);
    CHECK(mu_eval(mu, CompactOpen::single(pinv.shift(-1), 0)) == 0.0);
    CHECK(mu_eval_exact(mu, CompactOpen::units(F)).as_rational() == Rational(4, 5));

    std::mt19937_64 g(11);
    for (int it = 0; it < 200; ++it) {
        int v = static_cast<int>(g() % 5) - 3, n = static_cast<int>(g() % 3);
        Rational u(static_cast<int64_t>(g() % 600) + 1, 1);
        if (boost::multiprecision::numerator(u) % 5 == 0) u += 1;
        auto a = PadicNum::from_rational(F, u).shift(v);
        cplx val = mu_eval(mu, Coset{a, n, false});
        if (n == 0) {
            // aU = p^v O minus p^(v+1) O
            cplx ref = 0;
            for (auto& w : residue_reps(F, 1).units) ref += mu_brute(mu.rep, w.shift(v), 1);
            CHECK(std::abs(val - ref) < 1e-12);
        } else {
            CHECK(std::abs(val - mu_brute(mu.rep, a, n)) < 1e-12);
        }
    }
}

TEST_CASE("finite additivity and canonical form") {
    auto F = field(3, 1, 12);
    LocalDist mu{LocalRep::steinberg(F, Rational(2))};
    std::mt19937_64 g(3);
    for (int it = 0; it < 60; ++it) {
        int v = static_cast<int>(g() % 4) - 2, n = static_cast<int>(g() % 3);
        auto a = PadicNum::from_int(F, static_cast<int64_t>(g() % 80) * 3 + 1 + g() % 2).shift(v);
        auto S = CompactOpen::single(a, n);
        int lvl = n + 1 + static_cast<int>(g() % 2);
        auto R = S.refined(lvl);
        CHECK(R.disjoint());
        CHECK(mu_eval_exact(mu, R) == mu_eval_exact(mu, S));
        CHECK(std::abs(mu_eval(mu, R) - mu_eval(mu, S)) < 1e-12);
        auto C = R.canonical();
        REQUIRE(C.cosets.size() == 1);
        CHECK(C.cosets[0].n == n);
        CHECK(C.cosets[0].a.valuation() == v);
    }
    // U = U^(1) cosets, merged back
    auto R = CompactOpen::units(F).refined(2);
    CHECK(R.cosets.size() == 6);
    CHECK(R.canonical().cosets.size() == 1);
    // overlapping cosets
    CompactOpen bad{F, {Coset{PadicNum::from_int(F, 1), 0}, Coset{PadicNum::from_int(F, 4), 1}}};
    CHECK_FALSE(bad.disjoint());
    CHECK_THROWS_AS(bad.canonical(), DomainError);
    // additive ball avoiding 0 is a multiplicative coset
    auto ball = CompactOpen::single(PadicNum::from_int(F, 2), 2, true);
    CHECK(mu_eval_exact(mu, ball) == mu_eval_exact(mu, CompactOpen::single(PadicNum::from_int(F, 2), 2)));
    // the ball p O needs alpha1 = nu
    auto zb = CompactOpen::single(PadicNum::from_int(F, 3), 1, true);
    CHECK_THROWS_AS(mu_eval(mu, zb), DomainError);
    LocalDist flat{LocalRep::from_alphas(F, Rational(1, 2), Rational(3), RepKind::spherical)};
    CHECK(std::abs(flat.rep.beta() - 1.0) < 1e-15);
    CHECK(mu_eval_exact(flat, zb).as_rational() == Rational(1, 3));
    // p O = p^2 O plus the two cosets of pU
    CompactOpen split{F, {Coset{PadicNum::from_int(F, 0), 2, true}, Coset{PadicNum::from_int(F, 3), 0}}};
    CHECK(split.disjoint());
    CHECK(mu_eval_exact(flat, split) == mu_eval_exact(flat, zb));
}

TEST_CASE("local L-factors") {
    auto F = field(5, 1, 10);
    auto st = LocalRep::steinberg(F);
    CHECK(std::abs(local_L(st, 1.0, 0.5) - 1.25) < 1e-14);
    CHECK(*local_L_half_exact(st, unramified_character(F, 1.0, Rational(1))) == Rational(5, 4));
    auto sph = LocalRep::from_alphas(F, Rational(2), Rational(5, 2), RepKind::spherical);
    // q^(-s-1/2) = 1/alpha1 at X = 1: s = log_5(2) - 1/2
    double s = std::log(2.0) / std::log(5.0) - 0.5;
    CHECK_THROWS_AS(local_L(sph, 1.0, s), PoleError);
    for (auto& chi : primitive_characters(F, 1)) CHECK(local_L(sph, chi, 0.5) == 1.0);
}

TEST_CASE("Euler factors") {
    auto F5 = field(5, 1, 10);
    auto one = unramified_character(F5, 1.0, Rational(1));
    CHECK(euler_factor_exact(LocalRep::steinberg(F5), one) == 0);
    CHECK(euler_factor(LocalRep::steinberg(F5), one) == 0.0);
    CHECK(euler_factor_exact(LocalRep::steinberg(F5, -1), one) == 2);
    auto good = LocalRep::from_a_nu(F5, 1, 1);
    cplx expect = std::pow(1.0 - 1.0 / good.alpha1, 2);
    CHECK(std::abs(euler_factor(good, 1.0) - expect) < 1e-13);
    // ramified: (alpha2 / q)^f
    auto sph = LocalRep::from_alphas(F5, Rational(3), Rational(10), RepKind::spherical);
    for (auto& chi : primitive_characters(F5, 2)) CHECK(euler_factor_exact(sph, chi) == 4);

    // continuity at X = q/alpha_i, and at X = alpha2 when removable
    std::vector<std::pair<LocalRep, cplx>> pts;
    pts.push_back({sph, 5.0 / 3.0});
    pts.push_back({sph, 0.5});
    pts.push_back({LocalRep::steinberg(F5, 2), 2.5});
    auto nu1 = LocalRep::from_alphas(F5, Rational(2), Rational(5, 2), RepKind::spherical);
    pts.push_back({nu1, 2.5});
    for (auto& [rep, X0] : pts) {
        cplx v0 = euler_factor(rep, X0);
        for (double h : {1e-3, 1e-5, 1e-7}) {
            CHECK(std::abs(euler_factor(rep, X0 + h) - v0) < 1e-6 + 10 * h);
            CHECK(std::abs(euler_factor(rep, X0 + cplx(0, h)) - v0) < 1e-6 + 10 * h);
        }
    }
    // a genuine pole at X = alpha2
    CHECK_THROWS_AS(euler_factor(sph, 10.0), PoleError);
}

TEST_CASE("exceptional zero equivalence over ordinary reps with nu = 1") {
    for (int p : {3, 5, 7}) {
        auto F = field(p, 1, 8);
        auto one = unramified_character(F, 1.0, Rational(1));
        for (int a = -30; a <= 30; ++a) {
            if (a % p == 0) continue;
            LocalRep rep = LocalRep::from_a_nu(F, a, 1);
            REQUIRE(is_ordinary(rep));
            bool zero = rep.alpha1_x ? euler_factor_exact(rep, one) == 0
                                     : std::abs(euler_factor(rep, one)) < 1e-12;
            bool steinberg = rep.kind == RepKind::special && rep.alpha1_x && *rep.alpha1_x == 1;
            CHECK(zero == steinberg);
        }
    }
    // with nu != 1 a spherical rep can also have e(1) = 0
    auto F = field(5, 1, 8);
    auto rep = LocalRep::from_alphas(F, Rational(2), Rational(5), RepKind::spherical);
    CHECK(is_ordinary(rep));
    CHECK(euler_factor_exact(rep, unramified_character(F, 1.0, Rational(1))) == 0);
}

TEST_CASE("integral of chi against mu, ramified, exact") {
    for (auto [p, fr] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {3, 2}}) {
        auto F = field(p, fr, 8);
        Rational q(F.q());
        std::vector<LocalRep> reps{LocalRep::steinberg(F), LocalRep::steinberg(F, -1),
                                   LocalRep::from_alphas(F, Rational(2), q * 3, RepKind::spherical)};
        for (int f : {1, 2}) {
            auto chars = primitive_characters(F, f);
            size_t stride = std::max<size_t>(1, chars.size() / 6);
            for (size_t i = 0; i < chars.size(); i += stride) {
                auto chi = with_at_pi(chars[i], 2.0, Rational(2));
                for (auto& rep : reps) {
                    auto r = prop27_check(rep, chi);
                    CHECK(r.exact);
                    CHECK(r.exact_equal);
                    CHECK(r.rel_err < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("integral of chi against mu, unramified") {
    std::mt19937_64 g(27);
    std::uniform_real_distribution<double> U(0, 1);
    for (int p : {2, 3, 5}) {
        auto F = field(p, 1, 8);
        double q = static_cast<double>(p);
        for (int it = 0; it < 10; ++it) {
            cplx a1 = std::polar(0.5 + U(g), 6.28 * U(g));
            cplx a2 = std::polar(1.5 + 2 * U(g), 6.28 * U(g));
            auto rep = (it % 2) ? LocalRep::from_alphas(F, a1, a2, RepKind::spherical)
                                : LocalRep::from_alphas(F, a1, q * a1, RepKind::special);
            cplx X = std::polar(std::abs(rep.alpha2) * (0.1 + 0.8 * U(g)), 6.28 * U(g));
            auto r = prop27_check(rep, unramified_character(F, X));
            CHECK(r.rel_err < 1e-9);
            CHECK(r.tail_bound < 1e-12);
        }
    }
    // at and near X = q / alpha1 (pole of L, zero of e)
    auto F = field(5, 1, 8);
    auto rep = LocalRep::from_alphas(F, Rational(2), Rational(7), RepKind::spherical);
    for (double h : {0.0, 1e-4, 1e-7}) {
        auto r = prop27_check(rep, unramified_character(F, 2.5 + h));
        CHECK(r.rel_err < 1e-8);
    }
    CHECK_THROWS_AS(integrate_char(LocalDist{rep}, unramified_character(F, 7.0)), DivergenceError);
}

TEST_CASE("Whittaker values") {
    auto F = field(5, 1, 10);
    LocalDist mu{LocalRep::from_alphas(F, Rational(3), Rational(10), RepKind::spherical)};
    CHECK(whittaker_WH_exact(mu, 0, PadicNum::from_int(F, 1)).as_rational() == Rational(4, 5));
    // W_H(a h) = W_H(a)
    std::mt19937_64 g(9);
    for (int it = 0; it < 40; ++it) {
        int n = 1 + static_cast<int>(g() % 2);
        auto a = PadicNum::from_int(F, static_cast<int64_t>(g() % 100) * 5 + 1 + g() % 4).shift(-2 + static_cast<int>(g() % 3));
        auto h = PadicNum::from_int(F, 1) + PadicNum::from_int(F, static_cast<int64_t>(g() % 50)).shift(n);
        CHECK(whittaker_WH_exact(mu, n, a) == whittaker_WH_exact(mu, n, a * h));
    }
    StepFn f{{{Coset{PadicNum::from_rational(F, Rational(2, 5)), 2}, Rational(1)}}};
    auto r = prop29c_check(mu, f, 2);
    CHECK(r.equal);
    CHECK_FALSE(r.lhs.is_zero());
    StepFn h;
    for (int it = 0; it < 8; ++it)
        h.terms.push_back({Coset{PadicNum::from_int(F, 1 + static_cast<int64_t>(it) * 5).shift(it % 3 - 2), 1 + it % 2},
                           Rational(static_cast<int64_t>(it) - 3, 7)});
    CHECK(prop29c_check(mu, h, 2).equal);
    StepFn coarse{{{Coset{PadicNum::from_int(F, 1), 3}, Rational(1)}}};
    CHECK_THROWS_AS(prop29c_check(mu, coarse, 2), DomainError);
}

TEST_CASE("semilocal product") {
    auto F3 = field(3, 1, 8), F5 = field(5, 1, 8);
    LocalDist m3{LocalRep::steinberg(F3)}, m5{LocalRep::from_alphas(F5, Rational(2), Rational(15), RepKind::spherical)};
    auto S3 = CompactOpen::single(PadicNum::from_rational(F3, Rational(2, 9)), 2);
    auto S5 = CompactOpen::single(PadicNum::from_rational(F5, Rational(1, 5)), 1);
    CHECK(semilocal_mu({m3}, {S3}) == mu_eval(m3, S3));
    cplx prod = semilocal_mu({m3, m5}, {S3, S5});
    CHECK(std::abs(prod - mu_eval(m3, S3) * mu_eval(m5, S5)) < 1e-15);
    CHECK(std::abs(semilocal_mu({m3, m5}, {S3, S5.refined(3)}) - prod) < 1e-13);
    CHECK_THROWS_AS(semilocal_mu({m3, m5}, {S3}), DomainError);
}
