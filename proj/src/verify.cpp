#include "padicl/verify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "padicl/archimedean.hpp"
#include "padicl/characters.hpp"
#include "padicl/global_q.hpp"
#include "padicl/lattice.hpp"
#include "padicl/local_dist.hpp"

namespace padicl {

// ---- config ----

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        auto k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (k.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        c.kv[k] = v;
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

double Config::real(const std::string& key, double def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size() || !std::isfinite(v)) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + it->second + "'");
    }
}

int64_t Config::integer(const std::string& key, int64_t def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    try {
        size_t pos = 0;
        long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + key + ": '" + it->second + "'");
    }
}

// ---- cases ----

std::string to_string(CaseStatus s) {
    switch (s) {
        case CaseStatus::pass: return "pass";
        case CaseStatus::fail: return "fail";
        case CaseStatus::skipped: return "skipped-precondition";
    }
    return "?";
}

void VerifyCase::settle(double err) {
    error = err;
    status = (std::isfinite(err) && err <= tolerance) ? CaseStatus::pass : CaseStatus::fail;
}

json VerifyCase::to_json() const {
    json j{{"module", module}, {"case", id},          {"params", params}, {"relation", relation},
           {"tolerance", tolerance}, {"status", to_string(status)}, {"error", error}};
    if (!detail.is_null()) j["detail"] = detail;
    return j;
}

namespace {

using Suite = std::function<std::vector<VerifyCase>(const Config&, std::mt19937_64&)>;

json jc(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

VerifyCase make_case(const std::string& suite, std::string id, json params, std::string relation, double tol) {
    VerifyCase c;
    c.module = suite.substr(0, suite.find('.'));
    c.id = suite.substr(suite.find('.') + 1) + "/" + id;
    c.params = std::move(params);
    c.relation = std::move(relation);
    c.tolerance = tol;
    return c;
}

double tol_of(const Config& cfg, const std::string& suite, double def) {
    double t = cfg.real("tol." + suite, def);
    if (t < 0) throw ConfigError("negative tolerance for " + suite);
    return t;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// -- padic_core --

std::vector<VerifyCase> padic_axioms(const Config&, std::mt19937_64&) {
    std::vector<VerifyCase> out;
    for (auto [p, f] : std::vector<std::pair<int, int>>{{5, 1}, {3, 2}, {2, 1}}) {
        auto F = field(p, f, 6);
        int depth = f == 1 ? (p == 2 ? 3 : 2) : 1;
        auto R = residue_reps(F, depth);
        size_t bad_comm = 0, bad_assoc = 0, bad_dist = 0, bad_sub = 0, bad_inv = 0, bad_ultra = 0, bad_log = 0;
        auto pi = PadicNum::from_int(F, p);
        for (auto& a : R.all)
            for (auto& b : R.all) {
                auto x = a + pi.pow(2) * b, y = b - a * pi;
                if (x * y != y * x || x + y != y + x) ++bad_comm;
                if ((x * y) * a != x * (y * a)) ++bad_assoc;
                if (x * (y + a) != x * y + x * a) ++bad_dist;
                if ((x + y) - y != x) ++bad_sub;
                if (!(x + y).is_zero() && (x + y).valuation() < std::min(x.valuation(), y.valuation())) ++bad_ultra;
                if (x.is_unit() && (x * x.inv() != PadicNum::from_int(F, 1))) ++bad_inv;
            }
        for (auto& a : R.units)
            for (auto& b : R.units)
                if (log_p(a * b) != log_p(a) + log_p(b)) ++bad_log;
        json params{{"p", p}, {"f", f}, {"residues_mod_p^", depth}};
        std::string s = "padic_core.axioms";
        auto add = [&](const std::string& id, const std::string& rel, size_t bad) {
            auto c = make_case(s, id + "/q" + std::to_string(F.q()), params, rel, 0);
            c.settle(static_cast<double>(bad));
            out.push_back(c);
        };
        add("commutativity", "xy = yx, x + y = y + x over all residue pairs", bad_comm);
        add("associativity", "(xy)a = x(ya)", bad_assoc);
        add("distributivity", "x(y + a) = xy + xa", bad_dist);
        add("subtraction", "(x + y) - y = x", bad_sub);
        add("inverse", "x x^-1 = 1 on units", bad_inv);
        add("ultrametric", "ord(x + y) >= min(ord x, ord y)", bad_ultra);
        add("log_hom", "log(ab) = log a + log b on units", bad_log);
    }
    return out;
}

// -- char_gauss --

std::vector<VerifyCase> char_orthogonality(const Config&, std::mt19937_64&) {
    std::vector<VerifyCase> out;
    for (auto F : {field(3, 1, 8), field(5, 1, 8), field(3, 2, 6), field(2, 1, 8)}) {
        int level = F.p == 2 ? 3 : 2;
        auto chars = all_characters(F, level);
        auto units = residue_reps(F, level).units;
        double bad_sum = 0;
        size_t bad_mult = 0;
        for (auto& chi : chars) {
            cplx s = 0;
            for (auto& u : units) s += chi(u);
            double expect = chi.cond_exp == 0 ? static_cast<double>(units.size()) : 0.0;
            bad_sum = std::max(bad_sum, std::abs(s - expect));
            for (size_t i = 0; i < units.size(); ++i)
                for (size_t j = 0; j < units.size(); ++j)
                    if (std::abs(chi(units[i] * units[j]) - chi(units[i]) * chi(units[j])) > 1e-12) ++bad_mult;
        }
        json params{{"q", F.q()}, {"level", level}};
        auto c1 = make_case("char_gauss.orthogonality", "count/q" + std::to_string(F.q()), params,
                            "#characters of U/U^(level) = #units", 0);
        c1.settle(std::abs(static_cast<double>(chars.size()) - static_cast<double>(units.size())));
        auto c2 = make_case("char_gauss.orthogonality", "sum/q" + std::to_string(F.q()), params,
                            "sum over units of chi = [chi = 1] #units", 1e-9);
        c2.settle(bad_sum);
        auto c3 = make_case("char_gauss.orthogonality", "multiplicative/q" + std::to_string(F.q()), params,
                            "chi(uv) = chi(u) chi(v)", 0);
        c3.settle(static_cast<double>(bad_mult));
        out.insert(out.end(), {c1, c2, c3});
    }
    return out;
}

std::vector<VerifyCase> gauss_abs(const Config& cfg, std::mt19937_64&) {
    double tol = tol_of(cfg, "char_gauss.gauss_abs", 1e-9);
    std::vector<VerifyCase> out;
    for (auto F : {field(3, 1, 8), field(5, 1, 8)}) {
        AddChar psi{F};
        for (int f : {1, 2}) {
            auto chars = primitive_characters(F, f);
            for (size_t i = 0; i < chars.size(); ++i) {
                auto c = make_case("char_gauss.gauss_abs", "p" + std::to_string(F.p) + "/f" + std::to_string(f) + "/" + std::to_string(i),
                                   json{{"p", F.p}, {"f", f}, {"char", chars[i].to_json()}}, "|tau(chi)| = q^(f/2)", tol);
                double t = std::abs(gauss_sum(chars[i], psi));
                c.settle(std::abs(t - std::pow(static_cast<double>(F.q()), f / 2.0)));
                out.push_back(c);
            }
        }
    }
    return out;
}

std::vector<VerifyCase> lemma24(const Config& cfg, std::mt19937_64& gen) {
    double tol = tol_of(cfg, "char_gauss.lemma24", 1e-8);
    int n = static_cast<int>(cfg.integer("lemma24.samples", 50));
    std::uniform_real_distribution<double> U(0, 1);
    std::vector<LocalFieldSpec> fields{field(2, 1, 8), field(3, 1, 8), field(5, 1, 8), field(3, 2, 6)};
    std::vector<VerifyCase> out;
    for (int i = 0; i < n; ++i) {
        auto F = fields[gen() % fields.size()];
        int f = static_cast<int>(gen() % 3);
        auto prim = primitive_characters(F, f);
        while (prim.empty()) prim = primitive_characters(F, f = static_cast<int>(gen() % 3));
        double q = static_cast<double>(F.q());
        cplx X = std::polar(q * (0.02 + 0.93 * U(gen)), 2 * M_PI * U(gen));
        auto chi = with_at_pi(prim[gen() % prim.size()], X);
        auto c = make_case("char_gauss.lemma24", std::to_string(i),
                           json{{"q", F.q()}, {"f", f}, {"chi_pi", jc(X)}, {"char", chi.to_json()}},
                           "closed form = annulus-truncated integral (relative)", tol);
        auto g = character_integrand(chi);
        auto res = annulus_integral_oracle(g, annulus_depth(g, 1e-13));
        cplx cf = lemma24_value(chi, AddChar{F});
        c.detail = json{{"closed", jc(cf)}, {"oracle", jc(res.value)}, {"tail_bound", res.tail_bound}};
        c.settle(std::abs(res.value - cf) / std::abs(cf));
        out.push_back(c);
    }
    return out;
}

// -- local_dist --

std::vector<VerifyCase> prop27(const Config& cfg, std::mt19937_64& gen) {
    double tol = tol_of(cfg, "local_dist.prop27", 1e-8);
    std::vector<VerifyCase> out;
    // ramified: exact equality in Q(zeta)
    for (auto [p, fr] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {3, 2}}) {
        auto F = field(p, fr, 8);
        Rational q(F.q());
        std::vector<std::pair<std::string, LocalRep>> reps{
            {"steinberg+", LocalRep::steinberg(F)},
            {"steinberg-", LocalRep::steinberg(F, -1)},
            {"spherical(2,3q)", LocalRep::from_alphas(F, Rational(2), q * 3, RepKind::spherical)}};
        for (int f : {1, 2}) {
            auto chars = primitive_characters(F, f);
            size_t stride = std::max<size_t>(1, chars.size() / 4);
            for (size_t i = 0; i < chars.size(); i += stride) {
                auto chi = with_at_pi(chars[i], 2.0, Rational(2));
                for (auto& [name, rep] : reps) {
                    auto c = make_case("local_dist.prop27",
                                       "exact/q" + std::to_string(F.q()) + "/f" + std::to_string(f) + "/" + name + "/" + std::to_string(i),
                                       json{{"rep", rep.to_json()}, {"char", chi.to_json()}},
                                       "integral = e tau L(1/2), exact", 0);
                    auto r = prop27_check(rep, chi);
                    c.detail = r.to_json();
                    c.settle(r.exact && r.exact_equal ? 0.0 : 1.0);
                    out.push_back(c);
                }
            }
        }
    }
    // unramified sweep
    std::uniform_real_distribution<double> U(0, 1);
    int ps[] = {2, 3, 5};
    for (int i = 0; i < 40; ++i) {
        int p = ps[i % 3];
        auto F = field(p, 1, 8);
        double q = p;
        LocalRep rep;
        cplx X;
        std::string kind;
        if (i % 5 == 4) {
            // at and next to X = q / alpha1 where e vanishes and L has a pole
            bool special = (i / 5) % 2;
            rep = special ? LocalRep::from_alphas(F, Rational(2), Rational(2 * p), RepKind::special)
                          : LocalRep::from_alphas(F, Rational(2), Rational(2 * p + 1), RepKind::spherical);
            double h = (i / 10) % 2 ? 1e-7 : ((i / 20) ? 0.0 : 1e-4);
            X = q / 2 + h;
            kind = special ? "special-near-pole" : "spherical-near-pole";
        } else if (i % 2) {
            cplx a1 = std::polar(0.5 + U(gen), 2 * M_PI * U(gen));
            cplx a2 = std::polar(1.5 + 2 * U(gen), 2 * M_PI * U(gen));
            if (std::abs(a2 - q * a1) < 1e-3 || std::abs(a1 - q * a2) < 1e-3) a2 *= 1.1;
            rep = LocalRep::from_alphas(F, a1, a2, RepKind::spherical);
            X = std::polar(std::abs(rep.alpha2) * (0.05 + 0.85 * U(gen)), 2 * M_PI * U(gen));
            kind = "spherical";
        } else {
            cplx a1 = std::polar(0.5 + U(gen), 2 * M_PI * U(gen));
            rep = LocalRep::from_alphas(F, a1, q * a1, RepKind::special);
            X = std::polar(std::abs(rep.alpha2) * (0.05 + 0.85 * U(gen)), 2 * M_PI * U(gen));
            kind = "special";
        }
        auto c = make_case("local_dist.prop27", "unramified/" + std::to_string(i),
                           json{{"rep", rep.to_json()}, {"X", jc(X)}, {"kind", kind}},
                           "integral = e L(1/2) (relative)", tol);
        auto r = prop27_check(rep, unramified_character(F, X));
        c.detail = r.to_json();
        c.settle(r.rel_err);
        out.push_back(c);
    }
    return out;
}

// -- bt_lattice --

std::vector<VerifyCase> rho_suite(const Config& cfg, std::mt19937_64&) {
    int radius = static_cast<int>(cfg.integer("rho.radius", 5));
    std::vector<VerifyCase> out;
    for (int q : {2, 3}) {
        auto t0 = std::chrono::steady_clock::now();
        RhoFn<Laurent> rho{Laurent::alpha(), Laurent::nu(), q};
        auto r = harmonic_check(rho, radius);
        double secs = seconds_since(t0);
        json params{{"q", q}, {"radius", radius}};
        json detail{{"vertices", r.vertices}, {"T_ok", r.T_ok}, {"R_ok", r.R_ok},
                    {"R_inverse_ok", r.R_inverse_ok}, {"seconds", secs}};
        auto cT = make_case("bt_lattice.rho", "T/q" + std::to_string(q), params, "T rho = a rho, symbolic", 0);
        cT.detail = detail;
        cT.settle(static_cast<double>(r.vertices - r.T_ok));
        auto cR = make_case("bt_lattice.rho", "R/q" + std::to_string(q), params, "R rho = nu rho, symbolic", 0);
        cR.detail = detail;
        cR.detail["holds_instead"] = "R rho = nu^-1 rho at every vertex: " + std::to_string(r.R_inverse_ok == r.vertices);
        cR.settle(static_cast<double>(r.vertices - r.R_ok));
        out.push_back(cT);
        out.push_back(cR);
    }
    return out;
}

std::vector<VerifyCase> free_basis_suite(const Config&, std::mt19937_64&) {
    std::vector<VerifyCase> out;
    for (int q : {2, 3}) {
        auto b = free_basis(q, 4);
        for (auto& L : b.layers) {
            size_t expect = L.n == 0 ? 1 : static_cast<size_t>((q + 1) * ipow64(q, L.n - 1));
            json params{{"q", q}, {"n", L.n}};
            json detail{{"X", L.X_size}, {"C", L.C_size}, {"rank", L.rank}, {"expected", expect},
                        {"leftover_in_lower_layers", L.leftover_in_lower_layers}};
            auto c1 = make_case("bt_lattice.free_basis", "size/q" + std::to_string(q) + "/n" + std::to_string(L.n),
                                params, "|X_n,0| = (q+1) q^(n-1)", 0);
            c1.detail = detail;
            c1.settle(std::abs(static_cast<double>(L.X_size) - static_cast<double>(expect)));
            auto c2 = make_case("bt_lattice.free_basis", "rank/q" + std::to_string(q) + "/n" + std::to_string(L.n),
                                params, "X_n,0 has full rank modulo layers below n", 0);
            c2.detail = detail;
            c2.settle(L.rank == expect && L.leftover_in_lower_layers ? 0.0 : 1.0);
            out.push_back(c1);
            out.push_back(c2);
        }
    }
    return out;
}

// deterministic pseudo-random rational function on vertices
Rational hashed(const Lattice& v, uint64_t salt) {
    uint64_t h = salt * 0x9E3779B97F4A7C15ULL;
    for (int64_t x : {int64_t(v.m1), int64_t(v.m2), int64_t(v.e), v.num})
        h ^= static_cast<uint64_t>(x) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return Rational(static_cast<int64_t>(h % 11) - 5, static_cast<int64_t>(h / 11 % 3) + 1);
}

std::vector<VerifyCase> delta_suite(const Config& cfg, std::mt19937_64& g) {
    int n = static_cast<int>(cfg.integer("delta.samples", 100));
    std::vector<VerifyCase> out;
    for (int q : {2, 3}) {
        auto ball = graph_ball(Lattice::v0(q), 4);
        size_t bad_adj = 0, bad_comp = 0;
        for (int it = 0; it < n; ++it) {
            uint64_t s1 = g(), s2 = g();
            auto r1 = [s1](const Lattice& v) { return hashed(v, s1); };
            auto r2 = [s2](const Lattice& v) { return hashed(v, s2); };
            VertexFn<Rational> phi;
            for (int k = 0; k < 5; ++k)
                phi.add(ball[g() % ball.size()],
                        Rational(static_cast<int64_t>(g() % 19) - 9, static_cast<int64_t>(g() % 4) + 1));
            EdgeFn<Rational> c;
            for (int k = 0; k < 5; ++k) {
                auto v = ball[g() % ball.size()];
                auto outs = v.neighbors_out();
                c.add(Edge{v, outs[g() % outs.size()]}, Rational(static_cast<int64_t>(g() % 9) - 4));
            }
            if (pairing(delta_tilde(r1, c), phi) != pairing(c, delta_tilde_up(r1, phi))) ++bad_adj;

            auto lhs = delta_tilde(r1, delta_tilde_up(r2, phi));
            VertexFn<Rational> rho1phi;
            for (auto& [v, s] : phi.support()) rho1phi.add(v, r1(v) * s);
            auto both = hecke_T(rho1phi) + hecke_TR(rho1phi);
            auto r12 = [&](const Lattice& v) { return r1(v) * r2(v); };
            VertexFn<Rational> rhs;
            for (auto& [v, s] : phi.support())
                rhs.add(v, (hecke_T_at<Rational>(r12, v) + hecke_TR_at<Rational>(r12, v)) * s);
            for (auto& [v, s] : both.support()) rhs.add(v, Rational(0) - r2(v) * s);
            if (!(lhs == rhs)) ++bad_comp;
        }
        json params{{"q", q}, {"samples", n}, {"ball_radius", 4}};
        auto a = make_case("bt_lattice.delta", "adjoint/q" + std::to_string(q), params,
                           "<delta~_rho c, phi> = <c, delta~^rho phi>, exact", 0);
        a.settle(static_cast<double>(bad_adj));
        auto b = make_case("bt_lattice.delta", "composite/q" + std::to_string(q), params,
                           "delta~_rho1 delta~^rho2 = (T + TR)(rho1 rho2) - rho2 (T + TR) rho1, exact", 0);
        b.settle(static_cast<double>(bad_comp));
        out.push_back(a);
        out.push_back(b);
    }
    return out;
}

// -- archimedean --

std::vector<VerifyCase> mellin_suite(const Config& cfg, std::mt19937_64&) {
    double tol = tol_of(cfg, "archimedean.mellin", 1e-6);
    std::vector<VerifyCase> out;
    for (double s : {0.25, 0.5, 1.0, 1.5, 2.0}) {
        auto c = make_case("archimedean.mellin", "s=" + std::to_string(s).substr(0, 4), json{{"s", s}},
                           "int K0(x) x^(2s) dx = 2^(2s-1) Gamma(s+1/2)^2", tol);
        auto r = mellin_K0(s);
        c.detail = json{{"quadrature", r.value}, {"closed", mellin_K0_closed(s)}, {"err_est", r.err_est}};
        c.settle(std::abs(r.value - mellin_K0_closed(s)));
        out.push_back(c);
    }
    return out;
}

std::vector<VerifyCase> complex_zeta_suite(const Config& cfg, std::mt19937_64&) {
    double tol = tol_of(cfg, "archimedean.complex_zeta", 1e-6);
    std::vector<VerifyCase> out;
    for (double s : {0.5, 1.0, 2.0}) {
        auto c = make_case("archimedean.complex_zeta", "s=" + std::to_string(s).substr(0, 3), json{{"s", s}},
                           "Z(W1, s) = (2 pi)^2 L_v(s) (relative)", tol);
        auto r = complex_zeta_integral(s);
        double target = 4 * M_PI * M_PI * complex_L(s);
        c.detail = json{{"quadrature", r.value}, {"target", target}, {"ratio", r.value / target},
                        {"ratio_to_L_over_4", r.value / (complex_L(s) / 4)}};
        c.settle(std::abs(r.value / target - 1));
        out.push_back(c);
    }
    return out;
}

std::vector<VerifyCase> bessel_ode_suite(const Config& cfg, std::mt19937_64&) {
    double tol = tol_of(cfg, "archimedean.bessel_ode", 1e-8);
    std::vector<VerifyCase> out;
    for (int order : {0, 1}) {
        double worst = 0, at = 0;
        int pts = 0;
        for (double x = 0.05; x <= 30; x *= 1.05, ++pts) {
            double r = bessel_ode_residual(order, x);
            if (r > worst) worst = r, at = x;
        }
        auto c = make_case("archimedean.bessel_ode", "K" + std::to_string(order),
                           json{{"order", order}, {"grid", "0.05 * 1.05^k up to 30"}, {"points", pts}},
                           "relative residual of x^2 y'' + x y' - (x^2 + order^2) y", tol);
        c.detail = json{{"worst_x", at}};
        c.settle(worst);
        out.push_back(c);
    }
    return out;
}

// -- global_q --

const CoeffTable& coeffs_11a() {
    static const CoeffTable c = coeffs_from_curve(curve_11a(), 30000);
    return c;
}

GlobalContext ctx_11a(int p, int64_t n_trunc) {
    return make_context(coeffs_11a(), p, reduction_type(curve_11a(), p), n_trunc);
}

std::vector<VerifyCase> exceptional_zero_suite(const Config& cfg, std::mt19937_64&) {
    int64_t n = cfg.integer("lp.trunc", 5000);
    int m = static_cast<int>(cfg.integer("lp.level", 1));
    double factor = cfg.real("tol.global_q.exceptional_zero", 10.0);
    auto t0 = std::chrono::steady_clock::now();
    auto g = ctx_11a(11, n);
    std::vector<VerifyCase> out;
    auto one = unramified_character(g.rep.F, 1.0, Rational(1));
    auto e = make_case("global_q.exceptional_zero", "euler_factor", json{{"curve", "11a"}, {"p", 11}},
                       "e(pi_11, 1) = 0 exactly", 0);
    Rational ef = euler_factor_exact(g.rep, one);
    e.detail = json{{"value", boost::lexical_cast<std::string>(ef)}};
    e.settle(ef == 0 ? 0.0 : 1.0);
    out.push_back(e);
    auto L = Lp_value(g, 0, m);
    auto c = make_case("global_q.exceptional_zero", "Lp0", json{{"curve", "11a"}, {"p", 11}, {"level", m}, {"n_trunc", n}},
                       "|L_p(0)| / reported error < " + std::to_string(factor).substr(0, 4), factor);
    c.detail = json{{"Lp0", jc(*L.complex_value)}, {"error_estimate", L.err}, {"seconds", seconds_since(t0)}};
    if (L.padic) c.detail["padic"] = L.padic->str();
    c.settle(std::abs(*L.complex_value) / L.err);
    out.push_back(c);
    auto rep = derivative_order_report(g, m, 1);
    auto d = make_case("global_q.exceptional_zero", "order", json{{"n_expected", 1}},
                       "order of vanishing >= number of split primes (1)", 0);
    d.detail = rep.to_json();
    d.settle(rep.order_lower_bound >= 1 ? 0.0 : 1.0);
    out.push_back(d);
    return out;
}

std::vector<VerifyCase> interpolation_suite(const Config& cfg, std::mt19937_64&) {
    double tol = tol_of(cfg, "global_q.interpolation", 5e-3);
    auto g = ctx_11a(5, cfg.integer("lp.trunc", 5000));
    auto r = interpolation_check(g, legendre_character(g.rep.F));
    auto c = make_case("global_q.interpolation", "p5/legendre", json{{"curve", "11a"}, {"p", 5}, {"chi", "(./5)"}},
                       "LHS(chi)/LHS(1) = tau e(pi,chi) L(E,chi,1) / (e(pi,1) L(E,1))", tol);
    c.detail = r.to_json();
    c.settle(r.discrepancy);
    return {c};
}

std::vector<VerifyCase> lstab_suite(const Config& cfg, std::mt19937_64&) {
    double tol = tol_of(cfg, "global_q.l_stability", 1e-6);
    std::vector<VerifyCase> out;
    auto& c = coeffs_11a();
    std::vector<double> ts{0.8, 0.9, 1.0, 1.1, 1.25};
    auto L1 = L_finite_smoothed(c, trivial_dirichlet(), 1.0).value;
    double spread = 0;
    json vals = json::array();
    for (double t : ts) {
        auto v = L_finite_smoothed(c, trivial_dirichlet(), t).value;
        vals.push_back(v.real());
        spread = std::max(spread, std::abs(v - L1));
    }
    auto a = make_case("global_q.l_stability", "L(E,1)/spread", json{{"t", ts}}, "max_t |L_t - L_1|", tol);
    a.detail = json{{"values", vals}};
    a.settle(spread);
    auto b = make_case("global_q.l_stability", "L(E,1)/reference", json{{"reference", 0.2538419}},
                       "|L(E,1) - 0.2538419|", 1e-6);
    b.settle(std::abs(L1 - 0.2538419));
    out.push_back(a);
    out.push_back(b);
    auto chi = dirichlet_of_local(legendre_character(field(5, 1, 20)));
    auto x = L_finite_smoothed(c, chi, 0.8).value, y = L_finite_smoothed(c, chi, 1.25).value;
    auto d = make_case("global_q.l_stability", "L(E,chi5,1)/spread", json{{"t", {0.8, 1.25}}}, "|L_0.8 - L_1.25|", tol);
    d.detail = json{{"value", jc(x)}};
    d.settle(std::abs(x - y));
    out.push_back(d);
    return out;
}

std::vector<VerifyCase> compat_suite(const Config& cfg, std::mt19937_64&) {
    int64_t n = cfg.integer("lp.trunc", 5000);
    std::vector<VerifyCase> out;
    for (int p : {5, 11}) {
        auto g = ctx_11a(p, n);
        for (int m : {0, 1, 2}) {
            auto r = compatibility(g, m);
            auto c = make_case("global_q.compatibility", "p" + std::to_string(p) + "/m" + std::to_string(m),
                               json{{"curve", "11a"}, {"p", p}, {"m", m}, {"n_trunc", n}},
                               "sum of level m+1 values over each level m class, within the reported error", r.err);
            c.detail = json{{"max_abs_diff", r.max_abs_diff}, {"reported_error", r.err}};
            c.settle(r.max_abs_diff);
            out.push_back(c);
        }
    }
    return out;
}

std::vector<VerifyCase> oracle_suite(const Config&, std::mt19937_64&) {
    std::vector<VerifyCase> out;
    for (auto [p, n] : std::vector<std::pair<int, int64_t>>{{11, 5000}, {5, 25000}}) {
        auto g = ctx_11a(p, n);
        for (int64_t a : {1, 2}) {
            auto s = measure_coset(g, a, 1), q = measure_coset(g, a, 1, MeasureMethod::quadrature);
            auto c = make_case("global_q.oracle", "p" + std::to_string(p) + "/a" + std::to_string(a),
                               json{{"p", p}, {"a", a}, {"m", 1}, {"n_trunc", n}},
                               "cusp series = quadrature of the zeta-sum", s.err + q.err);
            c.detail = json{{"series", jc(s.value)}, {"quadrature", jc(q.value)}};
            c.settle(std::abs(s.value - q.value));
            out.push_back(c);
        }
    }
    return out;
}

const std::vector<std::pair<std::string, Suite>>& registry() {
    static const std::vector<std::pair<std::string, Suite>> r{
        {"padic_core.axioms", padic_axioms},
        {"char_gauss.orthogonality", char_orthogonality},
        {"char_gauss.gauss_abs", gauss_abs},
        {"char_gauss.lemma24", lemma24},
        {"local_dist.prop27", prop27},
        {"bt_lattice.rho", rho_suite},
        {"bt_lattice.free_basis", free_basis_suite},
        {"bt_lattice.delta", delta_suite},
        {"archimedean.mellin", mellin_suite},
        {"archimedean.complex_zeta", complex_zeta_suite},
        {"archimedean.bessel_ode", bessel_ode_suite},
        {"global_q.exceptional_zero", exceptional_zero_suite},
        {"global_q.interpolation", interpolation_suite},
        {"global_q.l_stability", lstab_suite},
        {"global_q.compatibility", compat_suite},
        {"global_q.oracle", oracle_suite},
    };
    return r;
}

// FNV-1a, stable across platforms
uint64_t fnv(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return h;
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> n;
    for (auto& [k, _] : registry()) n.push_back(k);
    return n;
}

std::vector<VerifyCase> run_suite(const std::string& name, const Config& cfg) {
    for (auto& [k, fn] : registry())
        if (k == name) {
            std::mt19937_64 gen(cfg.seed() ^ fnv(name));
            return fn(cfg, gen);
        }
    throw ConfigError("unknown suite " + name);
}

size_t Campaign::passed() const {
    return std::count_if(cases.begin(), cases.end(), [](auto& c) { return c.status == CaseStatus::pass; });
}
size_t Campaign::failed() const {
    return std::count_if(cases.begin(), cases.end(), [](auto& c) { return c.status == CaseStatus::fail; });
}
size_t Campaign::skipped() const {
    return std::count_if(cases.begin(), cases.end(), [](auto& c) { return c.status == CaseStatus::skipped; });
}

json Campaign::to_json() const {
    json cs = json::array();
    for (auto& c : cases) cs.push_back(c.to_json());
    return json{{"schema", 1},
                {"seed", seed},
                {"threads", threads},
                {"summary", {{"total", cases.size()}, {"pass", passed()}, {"fail", failed()}, {"skipped", skipped()}}},
                {"cases", cs}};
}

std::string Campaign::table() const {
    std::ostringstream os;
    os << std::left << std::setw(14) << "module" << std::setw(44) << "case" << std::setw(8) << "status"
       << std::setw(13) << "error" << "tolerance\n";
    for (auto& c : cases) {
        os << std::setw(14) << c.module << std::setw(44) << c.id << std::setw(8)
           << (c.status == CaseStatus::skipped ? "skip" : to_string(c.status)) << std::setw(13) << std::setprecision(3)
           << c.error << c.tolerance << "\n";
    }
    os << cases.size() << " cases: " << passed() << " pass, " << failed() << " fail, " << skipped() << " skipped\n";
    return os.str();
}

Campaign run_campaign(const Config& cfg, const std::vector<std::string>& only) {
    std::vector<std::string> chosen;
    for (auto& n : suite_names()) {
        bool take = only.empty();
        for (auto& o : only)
            if (n == o || n.rfind(o + ".", 0) == 0) take = true;
        if (take) chosen.push_back(n);
    }
    for (auto& o : only)
        if (std::none_of(chosen.begin(), chosen.end(), [&](auto& n) { return n == o || n.rfind(o + ".", 0) == 0; }))
            throw ConfigError("--only: no suite matches '" + o + "'");
    Campaign camp;
    camp.seed = cfg.seed();
    camp.threads = std::max(1, cfg.threads());
    // validate tolerances up front so a bad value is a config error, not a crash mid-run
    for (auto& [k, v] : cfg.kv)
        if (k.rfind("tol.", 0) == 0 && cfg.real(k, 0) < 0) throw ConfigError("negative tolerance " + k);

    std::vector<std::vector<VerifyCase>> results(chosen.size());
    std::vector<std::exception_ptr> errors(chosen.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t i; (i = next++) < chosen.size();) {
            try {
                results[i] = run_suite(chosen[i], cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < camp.threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (size_t i = 0; i < chosen.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        camp.cases.insert(camp.cases.end(), results[i].begin(), results[i].end());
    }
    return camp;
}

}  // namespace padicl
