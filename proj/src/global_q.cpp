#include "padicl/global_q.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace padicl {

namespace {

constexpr double kEps = 2.220446049250313e-16;
const cplx kI{0.0, 1.0};

int64_t pmod(int64_t a, int64_t m) { return ((a % m) + m) % m; }

int64_t inv_mod64(int64_t a, int64_t m) {
    int64_t g = m, x = 0, x1 = 1, r = pmod(a, m);
    while (r) {
        int64_t q = g / r;
        std::tie(g, r) = std::make_pair(r, g - q * r);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) throw DomainError("inv_mod: not invertible");
    return pmod(x, m);
}

// representative in (-m/2, m/2]
int64_t balanced(int64_t a, int64_t m) {
    a = pmod(a, m);
    return a > m / 2 ? a - m : a;
}

std::vector<int64_t> smallest_prime_factor(int64_t n) {
    std::vector<int64_t> spf(n + 1, 0);
    for (int64_t i = 2; i <= n; ++i)
        if (spf[i] == 0)
            for (int64_t j = i; j <= n; j += i)
                if (spf[j] == 0) spf[j] = i;
    return spf;
}

// p + 1 - #E(F_p) including the point at infinity; valid for singular reductions too
int64_t count_ap(const EllipticCurve& E, int64_t p) {
    auto r = [p](int64_t x) { return pmod(x, p); };
    int64_t a1 = r(E.a[0]), a2 = r(E.a[1]), a3 = r(E.a[2]), a4 = r(E.a[3]), a6 = r(E.a[4]);
    int64_t affine = 0;
    if (p == 2) {
        for (int64_t x = 0; x < 2; ++x)
            for (int64_t y = 0; y < 2; ++y)
                if (r(y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6)) == 0) ++affine;
        return p + 1 - (affine + 1);
    }
    std::vector<int> leg(p, -1);
    leg[0] = 0;
    for (int64_t y = 1; y < p; ++y) leg[y * y % p] = 1;
    int64_t s = 0;
    for (int64_t x = 0; x < p; ++x) {
        int64_t A = (a1 * x + a3) % p;
        int64_t B = (((x + a2) * x % p + a4) * x % p + a6) % p;
        s += leg[(A * A + 4 * B) % p];
    }
    return -s;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, ',')) out.push_back(trim(t));
    return out;
}

int64_t parse_int(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DomainError("cannot parse " + what + ": '" + s + "'");
    }
}

// best rational approximation with bounded denominator, if close enough
std::optional<Rational> recognize(double x, int64_t max_den = 1000000, double tol = 1e-8) {
    if (!std::isfinite(x)) return std::nullopt;
    double y = x;
    BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 60; ++it) {
        double fl = std::floor(y);
        BigInt a = static_cast<int64_t>(fl);
        BigInt h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1, h1 = h2, k0 = k1, k1 = k2;
        Rational r(h1, k1);
        if (std::abs(static_cast<double>(r) - x) <= tol * std::max(1.0, std::abs(x))) return r;
        double frac = y - fl;
        if (frac < 1e-300) break;
        y = 1 / frac;
    }
    return std::nullopt;
}

cplx cj(const json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }
json jc(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// sum over n > N of n r^n
double tail_n_rn(int64_t N, double r) {
    if (r >= 1) return INFINITY;
    double rn = std::pow(r, static_cast<double>(N + 1));
    return rn * ((N + 1) / (1 - r) + r / ((1 - r) * (1 - r)));
}

}  // namespace

// ---- curves ----

BigInt EllipticCurve::discriminant() const {
    BigInt a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
    BigInt b2 = a1 * a1 + 4 * a2, b4 = 2 * a4 + a1 * a3, b6 = a3 * a3 + 4 * a6;
    BigInt b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

json EllipticCurve::to_json() const {
    return json{{"label", label}, {"ainvs", a}, {"N", N}, {"w", w}, {"discriminant", discriminant().str()}};
}

EllipticCurve curve_11a() { return EllipticCurve{{0, -1, 1, -10, -20}, 11, 1, "11a"}; }

EllipticCurve load_curve_file(const std::string& path, int64_t N, int w) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open curve file " + path);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto f = split_csv(line);
        if (f.size() != 5) throw DomainError("curve file: expected a1,a2,a3,a4,a6");
        EllipticCurve E;
        for (int i = 0; i < 5; ++i) E.a[i] = parse_int(f[i], "a-invariant");
        E.N = N;
        E.w = w;
        E.label = path;
        if (E.discriminant() == 0) throw DomainError("curve file: singular curve");
        return E;
    }
    throw DomainError("curve file: no coefficients");
}

std::string to_string(Reduction r) {
    switch (r) {
        case Reduction::good: return "good";
        case Reduction::split: return "split";
        case Reduction::nonsplit: return "nonsplit";
        case Reduction::additive: return "additive";
    }
    return "?";
}

int64_t point_count_ap(const EllipticCurve& E, int64_t p) {
    if (!is_prime(p)) throw DomainError("point_count_ap: not a prime");
    if (E.discriminant() % p == 0) throw DomainError("point_count_ap: bad reduction");
    return count_ap(E, p);
}

Reduction reduction_type(const EllipticCurve& E, int64_t p) {
    if (E.discriminant() % p != 0) return Reduction::good;
    int64_t a = count_ap(E, p);
    if (a == 1) return Reduction::split;
    if (a == -1) return Reduction::nonsplit;
    return Reduction::additive;
}

// ---- coefficients ----

CoeffTable extend_coeffs(const std::map<int64_t, int64_t>& prime_ap, int64_t N, int w, int64_t n_max) {
    CoeffTable t;
    t.N = N;
    t.w = w;
    t.a.assign(n_max + 1, 0);
    if (n_max >= 1) t.a[1] = 1;
    auto spf = smallest_prime_factor(n_max);
    for (int64_t n = 2; n <= n_max; ++n) {
        int64_t p = spf[n], m = n, pe = 1;
        while (m % p == 0) m /= p, pe *= p;
        if (m > 1) {
            t.a[n] = t.a[pe] * t.a[m];
            continue;
        }
        // n = p^e
        auto it = prime_ap.find(p);
        if (it == prime_ap.end()) throw DomainError("extend_coeffs: missing a_p for p = " + std::to_string(p));
        int64_t ap = it->second;
        if (n == p) t.a[n] = ap;
        else if (N % p == 0) t.a[n] = ap * t.a[n / p];
        else t.a[n] = ap * t.a[n / p] - p * t.a[n / p / p];
    }
    return t;
}

CoeffTable coeffs_from_curve(const EllipticCurve& E, int64_t n_max) {
    std::map<int64_t, int64_t> ap;
    auto spf = smallest_prime_factor(n_max);
    for (int64_t p = 2; p <= n_max; ++p)
        if (spf[p] == p) ap[p] = count_ap(E, p);
    return extend_coeffs(ap, E.N, E.w, n_max);
}

CoeffTable load_coeff_file(const std::string& path, int64_t n_max) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open coefficient file " + path);
    std::string line;
    int64_t N = 0;
    int w = 0;
    std::map<int64_t, int64_t> all;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::stringstream ss(line.substr(1));
            std::string tok;
            while (ss >> tok) {
                if (tok.rfind("N=", 0) == 0) N = parse_int(tok.substr(2), "N");
                if (tok.rfind("w=", 0) == 0) w = static_cast<int>(parse_int(tok.substr(2), "w"));
            }
            continue;
        }
        auto f = split_csv(line);
        if (f.size() != 2) throw DomainError("coefficient file: expected n,a_n");
        all[parse_int(f[0], "n")] = parse_int(f[1], "a_n");
    }
    if (N <= 0 || (w != 1 && w != -1)) throw DomainError("coefficient file: header '# N=<conductor> w=<sign>' missing");
    std::map<int64_t, int64_t> primes;
    for (auto& [n, a] : all)
        if (n >= 2 && is_prime(n)) primes[n] = a;
    CoeffTable t = extend_coeffs(primes, N, w, n_max);
    for (auto& [n, a] : all)
        if (n >= 1 && n <= n_max && t.a[n] != a)
            throw DomainError("coefficient file: a_" + std::to_string(n) + " is not multiplicative");
    return t;
}

LocalRep alpha_pair(int64_t a_p, int p, Reduction red) {
    auto F = field(p, 1, 20);
    switch (red) {
        case Reduction::split: return LocalRep::steinberg(F, 1);
        case Reduction::nonsplit: return LocalRep::steinberg(F, -1);
        case Reduction::additive: throw DomainError("alpha_pair: additive reduction is not supported");
        case Reduction::good: break;
    }
    if (a_p % p == 0) throw DomainError("alpha_pair: not ordinary (p | a_p)");
    return LocalRep::from_a_nu(F, Rational(a_p), Rational(1));
}

// ---- Dirichlet characters ----

cplx DirichletChar::gauss_sum() const {
    cplx s = 0;
    for (int64_t a = 0; a < D; ++a) s += v[a] * e2pi(Rational(a, D));
    return s;
}

DirichletChar trivial_dirichlet() { return DirichletChar{1, {1.0}}; }

DirichletChar dirichlet_of_local(const MultChar& chi_p) {
    if (chi_p.F.f != 1) throw DomainError("dirichlet_of_local: needs F = Q_p");
    int64_t p = chi_p.F.p, D = ipow64(p, chi_p.cond_exp);
    DirichletChar chi{D, std::vector<cplx>(D, 0.0)};
    if (D == 1) {
        chi.v[0] = 1.0;
        return chi;
    }
    for (int64_t a = 1; a < D; ++a)
        if (a % p) chi.v[a] = std::conj(chi_p(PadicNum::from_int(chi_p.F, a)));
    return chi;
}

// ---- L-values ----

Estimate L_finite_smoothed(const CoeffTable& c, const DirichletChar& chi, double t) {
    if (!(t > 0)) throw DomainError("L_finite_smoothed: t must be positive");
    if (std::gcd(chi.D, c.N) != 1) throw DomainError("L_finite_smoothed: conductor of chi must be prime to N");
    double D = static_cast<double>(chi.D);
    double scale = 2 * M_PI / (D * std::sqrt(static_cast<double>(c.N)));
    cplx tau = chi.gauss_sum();
    cplx eps = static_cast<double>(c.w) * chi(c.N) * tau * tau / D;
    double r1 = std::exp(-scale * t), r2 = std::exp(-scale / t);
    cplx s = 0;
    double sabs = 0;
    int64_t n_max = c.n_max();
    for (int64_t n = 1; n <= n_max; ++n) {
        cplx x = chi(n);
        if (x == 0.0 || c.a[n] == 0) continue;
        double an = static_cast<double>(c.a[n]) / n;
        cplx term = an * (x * std::exp(-scale * n * t) + eps * std::conj(x) * std::exp(-scale * n / t));
        s += term;
        sabs += std::abs(term);
    }
    // |a_n| / n <= 2
    double tail = 2 * (std::pow(r1, n_max + 1.0) / (1 - r1) + std::pow(r2, n_max + 1.0) / (1 - r2));
    return {s, tail + n_max * kEps * sabs};
}

// ---- the measure ----

GlobalContext make_context(const CoeffTable& coeffs, int p, Reduction red, int64_t n_trunc) {
    if (!is_prime(p)) throw DomainError("make_context: p must be prime");
    if (coeffs.n_max() < n_trunc) throw DomainError("make_context: coefficient table shorter than n_trunc");
    if (coeffs.n_max() < static_cast<int64_t>(p) * p) throw DomainError("make_context: table must reach p^2");
    GlobalContext g;
    g.coeffs = coeffs;
    g.p = p;
    g.red = red;
    g.rep = alpha_pair(coeffs.at(p), p, red);
    g.n_trunc = n_trunc;
    return g;
}

GlobalContext make_context(const EllipticCurve& E, int p, int64_t n_trunc) {
    auto c = coeffs_from_curve(E, std::max<int64_t>(n_trunc, static_cast<int64_t>(p) * p));
    return make_context(c, p, reduction_type(E, p), n_trunc);
}

Estimate eichler(const GlobalContext& g, cplx z) {
    double y = z.imag();
    if (!(y > 0)) throw DomainError("eichler: needs Im z > 0");
    double x = z.real() - std::floor(z.real());
    cplx s = 0;
    double sabs = 0;
    for (int64_t n = 1; n <= g.n_trunc; ++n) {
        int64_t a = g.coeffs.a[n];
        if (a == 0) continue;
        double mag = static_cast<double>(a) / n * std::exp(-2 * M_PI * n * y);
        if (std::abs(mag) < 1e-300) break;
        double ang = 2 * M_PI * (n * x - std::floor(n * x));
        s += mag * cplx(std::cos(ang), std::sin(ang));
        sabs += std::abs(mag);
    }
    double r = std::exp(-2 * M_PI * y);
    double tail = 2 * std::pow(r, g.n_trunc + 1.0) / (1 - r);
    return {s, tail + g.n_trunc * kEps * sabs};
}

Estimate eichler_cusp(const GlobalContext& g, const Rational& r) {
    int64_t N = g.coeffs.N;
    BigInt bn = boost::multiprecision::numerator(r), dn = boost::multiprecision::denominator(r);
    int64_t d = static_cast<int64_t>(dn), b = static_cast<int64_t>(bn);
    b = pmod(b, d);
    auto at = [&](cplx z) { return eichler(g, z); };
    auto comb = [](std::initializer_list<std::pair<double, Estimate>> xs) {
        Estimate e{0.0, 0.0};
        for (auto& [c, x] : xs) {
            e.value += c * x.value;
            e.err += std::abs(c) * x.err;
        }
        return e;
    };
    // Lambda(0) = (1 + w) Lambda(i / sqrt N) from the Fricke involution
    auto at_zero = [&]() {
        auto e = at(cplx(0, 1 / std::sqrt(static_cast<double>(N))));
        return comb({{1.0 + g.coeffs.w, e}});
    };
    if (d == 1) return at_zero();
    if (std::gcd(d, N) == 1) {
        // gamma = (A b; Nc d) in Gamma_0(N) maps 0 to b/d
        int64_t c = balanced(-inv_mod64(pmod(b * N, d), d), d);
        int64_t A = static_cast<int64_t>((1 + static_cast<__int128>(b) * N * c) / d);
        double C = static_cast<double>(N * c);
        cplx z0(-static_cast<double>(d) / C, 1 / std::abs(C));
        cplx gz = (static_cast<double>(A) * z0 + static_cast<double>(b)) / (C * z0 + static_cast<double>(d));
        return comb({{1.0, at_zero()}, {-1.0, at(z0)}, {1.0, at(gz)}});
    }
    if (d % N == 0) {
        // gamma = (b B; d D) maps infinity to b/d
        int64_t D = balanced(inv_mod64(b, d), d);
        int64_t B = static_cast<int64_t>((static_cast<__int128>(b) * D - 1) / d);
        double dd = static_cast<double>(d);
        cplx z0(-static_cast<double>(D) / dd, 1 / dd);
        cplx gz = (static_cast<double>(b) * z0 + static_cast<double>(B)) / (dd * z0 + static_cast<double>(D));
        return comb({{-1.0, at(z0)}, {1.0, at(gz)}});
    }
    throw DomainError("eichler_cusp: cusp class not handled (gcd(d, N) must be 1 or N)");
}

Estimate eichler_depleted_cusp(const GlobalContext& g, const Rational& r) {
    double p = g.p;
    double ap = static_cast<double>(g.coeffs.at(g.p));
    Estimate e = eichler_cusp(g, r);
    Estimate e1 = eichler_cusp(g, r * g.p);
    Estimate out{e.value - ap / p * e1.value, e.err + std::abs(ap / p) * e1.err};
    if (g.red == Reduction::good) {
        Estimate e2 = eichler_cusp(g, r * g.p * g.p);
        out.value += e2.value / p;
        out.err += e2.err / p;
    }
    return out;
}

namespace {

Estimate measure_series(const GlobalContext& g, int64_t a, int m) {
    double p = g.p;
    cplx beta = g.rep.beta();
    double k0 = g.c_inf / (2 * M_PI);
    Estimate L0 = eichler_depleted_cusp(g, 0);
    if (m == 0) {
        cplx f = (1 - 1 / p) / (1.0 - beta / p) - 1.0 / beta;
        return {k0 * 2.0 * L0.value * f, k0 * 2 * L0.err * std::abs(f)};
    }
    int64_t pm = ipow64(g.p, m);
    if (pmod(a, g.p) == 0) throw DomainError("measure_coset: a must be prime to p");
    // reciprocity sends x_p to the class of x_p^-1
    int64_t ai = inv_mod64(a, pm);
    cplx s = 0;
    double err = 0;
    for (int k = -m; k <= -1; ++k) {
        cplx coef = std::pow(beta, k) * std::pow(p, -(m + k));
        Rational r(ai, ipow64(g.p, -k));
        Estimate x = eichler_depleted_cusp(g, r), y = eichler_depleted_cusp(g, -r);
        s += coef * (x.value + y.value);
        err += std::abs(coef) * (x.err + y.err);
    }
    cplx geo = std::pow(p, -m) / (1.0 - beta / p);
    s += 2.0 * L0.value * geo;
    err += 2 * L0.err * std::abs(geo);
    return {k0 * s, k0 * (err + 16 * kEps * std::abs(s))};
}

// the idele integral, k < 0 by quadrature of the zeta-sum, k >= 0 through L(E, 1)
Estimate measure_quadrature(const GlobalContext& g, int64_t a, int m) {
    auto F = g.rep.F;
    LocalDist mu{g.rep};
    double p = g.p;
    CompactOpen U = m == 0 ? CompactOpen::units(F)
                           : CompactOpen::single(PadicNum::from_int(F, inv_mod64(a, ipow64(g.p, m))), m);
    int k_lo = m == 0 ? -1 : -m;
    double pm = std::pow(p, -k_lo);
    double x_lo = 30 * pm / (2 * M_PI * g.n_trunc), x_hi = 40 * pm / (2 * M_PI);
    double u0 = std::log(x_lo), u1 = std::log(x_hi);
    int n = static_cast<int>(std::ceil((u1 - u0) / 0.01));
    if (n % 2) ++n;
    double h = (u1 - u0) / n;
    cplx fine = 0, coarse = 0;
    double tails = 0;
    for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 0.5 : 1.0;
        auto v = phi_eval(g, U, std::exp(u0 + i * h), k_lo, -1, g.n_trunc);
        fine += w * v.value;
        if (i % 2 == 0) coarse += w * v.value;
        tails += w * v.err;
        if (i == 0 || i == n) tails += std::abs(v.value) / h;  // window cut
    }
    fine *= h;
    coarse *= 2 * h;
    double err = std::abs(fine - coarse) + tails * h;

    // k >= 0: every zeta = +-n p^k contributes mu_p(p^k U) (c / 2 pi) Lambda^(p)(0)
    Estimate Lc = L_finite_smoothed(g.coeffs, trivial_dirichlet(), 1.1);
    double ap = static_cast<double>(g.coeffs.at(g.p));
    double dep = 1 - ap / p + (g.red == Reduction::good ? 1 / p : 0.0);
    cplx msum = 0;
    cplx ratio = g.rep.beta() / p;
    int K = static_cast<int>(std::ceil(40 / -std::log10(std::abs(ratio))));
    for (int k = 0; k <= K; ++k) {
        CompactOpen Uk = U;
        for (auto& c : Uk.cosets) c.a = c.a.shift(k);
        msum += mu_eval(mu, Uk);
    }
    double k0 = g.c_inf / (2 * M_PI);
    cplx pos = k0 * 2.0 * Lc.value * dep * msum;
    err += k0 * 2 * Lc.err * std::abs(dep * msum) + 1e-14 * std::abs(pos);
    return {fine + pos, err};
}

}  // namespace

Estimate measure_coset(const GlobalContext& g, int64_t a, int m, MeasureMethod method) {
    if (m < 0) throw DomainError("measure_coset: negative level");
    return method == MeasureMethod::series ? measure_series(g, a, m) : measure_quadrature(g, a, m);
}

Estimate phi_eval(const GlobalContext& g, const CompactOpen& U, double x, int k_lo, int k_hi, int64_t n_use) {
    if (!(x > 0)) throw DomainError("phi_eval: x_inf must be positive");
    if (n_use > g.coeffs.n_max()) throw DomainError("phi_eval: not enough coefficients");
    LocalDist mu{g.rep};
    const auto& F = U.F;
    int vmin = INT_MAX;
    for (auto& c : U.cosets) vmin = std::min(vmin, c.a.valuation());
    cplx total = 0;
    double tail = 0;
    for (int k = k_lo; k <= k_hi; ++k) {
        double pk = std::pow(static_cast<double>(g.p), k);
        double r = std::exp(-2 * M_PI * pk * x);
        if (r == 0) continue;
        int R = std::max(0, -(k + vmin));
        int64_t mod = ipow64(g.p, R);
        for (int sgn : {1, -1}) {
            std::map<int64_t, cplx> cache;
            double mmax = 0;
            auto mu_of = [&](int64_t n) {
                int64_t key = n % mod;
                auto it = cache.find(key);
                if (it != cache.end()) return it->second;
                CompactOpen Z = U;
                auto zeta = PadicNum::from_int(F, sgn * n).shift(k);
                for (auto& c : Z.cosets) c.a = c.a * zeta;
                cplx v = mu_eval(mu, Z);
                mmax = std::max(mmax, std::abs(v));
                cache.emplace(key, v);
                return v;
            };
            cplx s = 0;
            double rn = 1;
            for (int64_t n = 1; n <= n_use; ++n) {
                rn *= r;
                if (rn < 1e-300) break;
                if (n % g.p == 0 || g.coeffs.a[n] == 0) continue;
                // (a_n / n) * c |zeta| x e^{-2 pi |zeta| x} with |zeta| = n p^k
                s += mu_of(n) * (static_cast<double>(g.coeffs.a[n]) * g.c_inf * pk * x * rn);
            }
            total += s;
            if (mmax == 0) mmax = std::abs(mu_of(1));
            tail += mmax * g.c_inf * pk * x * 2 * tail_n_rn(n_use, r);
        }
    }
    return {total, tail};
}

json FiniteLevelMeasure::to_json() const {
    json v = json::object();
    for (auto& [a, z] : values) v[std::to_string(a)] = jc(z);
    return json{{"p", p}, {"m", m}, {"values", v}, {"error_estimate", err}};
}

FiniteLevelMeasure measure_level(const GlobalContext& g, int m) {
    FiniteLevelMeasure M{g.p, m, {}, 0.0};
    if (m == 0) {
        auto e = measure_coset(g, 1, 0);
        M.values[0] = e.value;
        M.err = e.err;
        return M;
    }
    int64_t pm = ipow64(g.p, m);
    for (int64_t a = 1; a < pm; ++a) {
        if (a % g.p == 0) continue;
        auto e = measure_coset(g, a, m);
        M.values[a] = e.value;
        M.err += e.err;
    }
    return M;
}

CompatReport compatibility(const GlobalContext& g, int m) {
    auto lo = measure_level(g, m), hi = measure_level(g, m + 1);
    CompatReport r;
    r.m = m;
    r.err = lo.err + hi.err;
    int64_t pm = ipow64(g.p, m);
    for (auto& [a, v] : lo.values) {
        cplx s = 0;
        for (auto& [b, w] : hi.values)
            if (m == 0 || b % pm == a) s += w;
        r.max_abs_diff = std::max(r.max_abs_diff, std::abs(s - v));
    }
    r.ok = r.max_abs_diff <= r.err;
    return r;
}

Estimate integrate_char_global(const GlobalContext& g, const DirichletChar& chi) {
    if (chi.is_trivial()) return measure_coset(g, 1, 0);
    int m = 0;
    for (int64_t D = chi.D; D > 1; D /= g.p) {
        if (D % g.p) throw DomainError("integrate_char_global: modulus must be a power of p");
        ++m;
    }
    Estimate s{0.0, 0.0};
    for (int64_t a = 1; a < chi.D; ++a) {
        if (a % g.p == 0) continue;
        auto e = measure_coset(g, a, m);
        s.value += chi(a) * e.value;
        s.err += std::abs(chi(a)) * e.err;
    }
    return s;
}

json InterpolationReport::to_json() const {
    return json{{"lhs", jc(lhs)}, {"rhs", jc(rhs)}, {"lhs_trivial", jc(lhs1)}, {"rhs_trivial", jc(rhs1)},
                {"discrepancy", discrepancy}, {"error_estimate", err}, {"archimedean_constant", jc(constant)}};
}

InterpolationReport interpolation_check(const GlobalContext& g, const MultChar& chi_p) {
    if (chi_p.F.p != g.p || chi_p.F.f != 1) throw DomainError("interpolation_check: character must live on Q_p");
    auto chi = dirichlet_of_local(chi_p);
    // W_inf is even in y, so mu is symmetric under a -> -a and kills odd characters
    if (std::abs(chi(-1) - 1.0) > 1e-12) throw DomainError("interpolation_check: odd characters are not supported");
    auto one = unramified_character(g.rep.F, 1.0, Rational(1));
    InterpolationReport r;
    auto L = integrate_char_global(g, chi), L1 = measure_coset(g, 1, 0);
    r.lhs = L.value;
    r.lhs1 = L1.value;
    auto Lc = L_finite_smoothed(g.coeffs, chi), L0 = L_finite_smoothed(g.coeffs, trivial_dirichlet());
    cplx tau = chi_p.cond_exp > 0 ? gauss_sum(chi_p, AddChar{chi_p.F}) : cplx(1.0);
    r.rhs = tau * euler_factor(g.rep, chi_p) * Lc.value;
    r.rhs1 = euler_factor(g.rep, one) * L0.value;
    r.constant = r.lhs1 / r.rhs1;
    cplx q = (r.lhs / r.lhs1) / (r.rhs / r.rhs1);
    r.discrepancy = std::abs(q - 1.0);
    r.err = L.err / std::abs(r.lhs) + L1.err / std::abs(r.lhs1) + Lc.err / std::abs(Lc.value) +
            L0.err / std::abs(L0.value);
    return r;
}

// ---- the p-adic L-function ----

PadicNum cyclotomic_log(const LocalFieldSpec& F, int64_t a) {
    if (a % F.p == 0) throw DomainError("cyclotomic_log: a must be prime to p");
    return log_p(PadicNum::from_int(F, a));
}

LpValue Lp_value(const GlobalContext& g, const Rational& s, int m) {
    if (m < 1) throw DomainError("Lp_value: level must be >= 1");
    auto F = field(g.p, 1, 20);
    if (s != 0 && vp(s, g.p) < 0) throw DomainError("Lp_value: exp_p(s l) does not converge for this s");
    auto M = measure_level(g, m);
    LpValue out;
    out.err = M.err;
    out.unit = g.c_inf / M_PI * eichler_cusp(g, 0).value;
    cplx tot = 0;
    for (auto& [a, v] : M.values) tot += v;
    if (s == 0) out.complex_value = tot;
    PadicNum acc = PadicNum::zero(F);
    bool rational = std::abs(out.unit) > 0;
    PadicNum sp = PadicNum::from_rational(F, s);
    for (auto& [a, v] : M.values) {
        if (!rational) break;
        cplx r = v / out.unit;
        auto q = std::abs(r.imag()) < 1e-9 ? recognize(r.real()) : std::nullopt;
        if (!q) {
            rational = false;
            break;
        }
        PadicNum w = s == 0 ? PadicNum::from_int(F, 1) : exp_p(sp * cyclotomic_log(F, a));
        acc = acc + w * PadicNum::from_rational(F, *q);
    }
    if (rational) out.padic = acc;
    else if (s != 0) throw DomainError("Lp_value: level-m values are not rational multiples of the normalizer");
    return out;
}

json DerivativeReport::to_json() const {
    json j{{"Lp0_abs", Lp0_abs}, {"noise_floor", noise}, {"vanishes", vanishes},
           {"order_lower_bound", order_lower_bound}, {"n_expected", n_expected}};
    if (padic_zero) j["padic_Lp0_zero"] = *padic_zero;
    if (divided_difference_valuation) j["divided_difference_valuation"] = *divided_difference_valuation;
    return j;
}

DerivativeReport derivative_order_report(const GlobalContext& g, int m, int n_expected) {
    DerivativeReport r;
    r.n_expected = n_expected;
    auto L0 = Lp_value(g, 0, m);
    r.Lp0_abs = std::abs(*L0.complex_value);
    r.noise = L0.err;
    r.vanishes = r.Lp0_abs < 10 * r.noise;
    if (L0.padic) {
        r.padic_zero = L0.padic->is_zero() || L0.padic->valuation() >= L0.padic->abs_prec();
        auto L1 = Lp_value(g, Rational(g.p), m);
        PadicNum dd = (*L1.padic - *L0.padic) / PadicNum::from_int(L0.padic->field(), g.p);
        if (!dd.is_zero()) r.divided_difference_valuation = dd.valuation();
    }
    r.order_lower_bound = r.vanishes ? 1 : 0;
    return r;
}

json lp_report(const GlobalContext& g, int m, const Rational& s) {
    auto one = unramified_character(g.rep.F, 1.0, Rational(1));
    auto M = measure_level(g, m);
    json j{{"p", g.p},
           {"reduction", to_string(g.red)},
           {"alpha", {{"alpha1", jc(g.rep.alpha1)}, {"alpha2", jc(g.rep.alpha2)}}},
           {"euler_factor_at_1", jc(euler_factor(g.rep, one))},
           {"measure", M.to_json()},
           {"n_trunc", g.n_trunc}};
    if (g.rep.alpha1_x) {
        std::ostringstream os;
        os << euler_factor_exact(g.rep, one);
        j["euler_factor_at_1"]["exact"] = os.str();
    }
    auto L = Lp_value(g, s, m);
    if (L.complex_value) j["Lp0"] = jc(*L.complex_value);
    if (L.padic) j["Lp_padic"] = L.padic->to_json();
    j["s"] = boost::lexical_cast<std::string>(s);
    j["error_estimate"] = L.err;
    return j;
}

}  // namespace padicl
