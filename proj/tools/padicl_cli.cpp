#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>

#include "padicl/archimedean.hpp"
#include "padicl/characters.hpp"
#include "padicl/global_q.hpp"
#include "padicl/lattice.hpp"
#include "padicl/local_dist.hpp"
#include "padicl/verify.hpp"

using namespace padicl;

namespace {

json jc(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

Rational parse_rational(const std::string& s) {
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw ConfigError("not a rational number: '" + s + "'");
    }
}

// "re" or "re,im"
cplx parse_complex(const std::string& s) {
    auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(s), 0.0};
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ConfigError("not a complex number: '" + s + "'");
    }
}

struct CharOpts {
    int p = 5, f = 1, cond = 1;
    std::string which = "0";
    std::string chi_pi = "1";

    void add(CLI::App* app) {
        app->add_option("--p", p, "residue characteristic")->check(CLI::PositiveNumber);
        app->add_option("--f", f, "residue degree")->check(CLI::Range(1, 4));
        app->add_option("--cond", cond, "conductor exponent")->check(CLI::Range(0, 4));
        app->add_option("--char", which, "'legendre' or an index into the primitive characters");
        app->add_option("--chi-pi", chi_pi, "chi(p) as 're' or 're,im'; rationals stay exact");
    }

    MultChar build(const LocalFieldSpec& F) const {
        std::optional<Rational> exact;
        if (chi_pi.find(',') == std::string::npos && chi_pi.find('.') == std::string::npos) exact = parse_rational(chi_pi);
        cplx X = exact ? cplx(static_cast<double>(*exact), 0.0) : parse_complex(chi_pi);
        if (cond == 0) return unramified_character(F, X, exact);
        if (which == "legendre") {
            if (cond != 1) throw ConfigError("--char legendre needs --cond 1");
            return with_at_pi(legendre_character(F), X, exact);
        }
        auto prim = primitive_characters(F, cond);
        size_t idx = 0;
        try {
            idx = std::stoul(which);
        } catch (const std::exception&) {
            throw ConfigError("--char: expected 'legendre' or an index");
        }
        if (idx >= prim.size())
            throw ConfigError("--char: index out of range (" + std::to_string(prim.size()) + " characters)");
        return with_at_pi(prim[idx], X, exact);
    }
};

struct RepOpts {
    std::string a1 = "1", a2 = "", kind = "special";

    void add(CLI::App* app) {
        app->add_option("--alpha1", a1, "first parameter (rational)");
        app->add_option("--alpha2", a2, "second parameter (rational); default q alpha1 for special");
        app->add_option("--kind", kind, "spherical or special")->check(CLI::IsMember({"spherical", "special"}));
    }

    LocalRep build(const LocalFieldSpec& F) const {
        Rational x1 = parse_rational(a1);
        Rational x2 = a2.empty() ? x1 * F.q() : parse_rational(a2);
        return LocalRep::from_alphas(F, x1, x2, kind == "special" ? RepKind::special : RepKind::spherical);
    }
};

void emit(const json& j, const std::string& out) {
    json k = j;
    k["schema"] = 1;
    if (out.empty()) {
        std::cout << k.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw ConfigError("cannot write " + out);
    f << k.dump(2) << "\n";
}

GlobalContext lp_context(const std::string& curve, const std::string& curve_file, const std::string& coeff_file,
                         int64_t N, int w, int p, int64_t trunc) {
    int64_t need = std::max<int64_t>(trunc, static_cast<int64_t>(p) * p);
    if (!coeff_file.empty()) {
        auto c = load_coeff_file(coeff_file, need);
        if (c.N % p == 0 && (c.N / p) % p == 0) throw ConfigError("additive reduction at p is not supported");
        Reduction red = c.N % p != 0 ? Reduction::good : (c.at(p) == 1 ? Reduction::split : Reduction::nonsplit);
        return make_context(c, p, red, trunc);
    }
    EllipticCurve E;
    if (!curve_file.empty()) {
        if (N <= 0) throw ConfigError("--curve-file needs --N");
        E = load_curve_file(curve_file, N, w);
    } else if (curve == "11a") {
        E = curve_11a();
    } else {
        throw ConfigError("unknown curve '" + curve + "' (built in: 11a)");
    }
    return make_context(E, p, trunc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic L-function toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out;
    app.add_option("--out", out, "write JSON here instead of stdout");

    auto* gauss = app.add_subcommand("gauss", "Gauss sum of a local character");
    CharOpts gopt;
    gopt.add(gauss);

    auto* l24 = app.add_subcommand("lemma24", "integral of chi psi over F^*: closed form and annulus oracle");
    CharOpts lopt;
    lopt.add(l24);
    double l24_tol = 1e-12;
    l24->add_option("--tail", l24_tol, "oracle tail target");

    auto* euler = app.add_subcommand("euler", "Euler factor e(alpha1, alpha2, chi)");
    CharOpts eopt;
    RepOpts erep;
    eopt.add(euler);
    erep.add(euler);

    auto* p27 = app.add_subcommand("prop27", "integral of chi against mu versus e tau L(1/2)");
    CharOpts popt;
    RepOpts prep;
    popt.add(p27);
    prep.add(p27);

    auto* tree = app.add_subcommand("tree", "ball in the Bruhat-Tits tree or graph");
    int tq = 2, tr = 2;
    std::string temit = "json";
    bool tgraph = false;
    tree->add_option("--q", tq, "residue field size (prime)")->check(CLI::PositiveNumber);
    tree->add_option("--radius", tr, "radius")->check(CLI::Range(0, 8));
    tree->add_option("--emit", temit, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    tree->add_flag("--graph", tgraph, "lattices instead of homothety classes");

    auto* arch = app.add_subcommand("arch", "archimedean identities");
    std::string ident = "mellin";
    std::vector<double> svals{0.5, 1.0, 2.0};
    arch->add_option("--identity", ident, "mellin, complex-zeta, real-zeta or bessel")
        ->check(CLI::IsMember({"mellin", "complex-zeta", "real-zeta", "bessel"}));
    arch->add_option("--s", svals, "evaluation points");

    auto* lp = app.add_subcommand("lp", "finite-level measure and p-adic L-value of an elliptic curve");
    std::string curve = "11a", curve_file, coeff_file, s_str = "0";
    int lp_p = 11, level = 1, w = 1;
    int64_t trunc = 5000, cN = 0;
    lp->add_option("--curve", curve, "built-in curve label");
    lp->add_option("--curve-file", curve_file, "file with a1,a2,a3,a4,a6");
    lp->add_option("--coeffs", coeff_file, "CSV n,a_n with header '# N=.. w=..'");
    lp->add_option("--N", cN, "conductor for --curve-file");
    lp->add_option("--w", w, "root number for --curve-file")->check(CLI::IsMember({-1, 1}));
    lp->add_option("--p", lp_p, "prime")->check(CLI::PositiveNumber);
    lp->add_option("--level", level, "level m >= 1")->check(CLI::Range(1, 4));
    lp->add_option("--s", s_str, "point s (rational, p-integral)");
    lp->add_option("--trunc", trunc, "coefficients used")->check(CLI::Range(100, 200000));

    auto* ver = app.add_subcommand("verify", "verification campaign");
    std::string cfg_path;
    std::vector<std::string> only;
    std::string seed_s, threads_s;
    bool table = false;
    ver->add_option("--config", cfg_path, "key = value config file");
    ver->add_option("--only", only, "suite or module to run (repeatable)");
    ver->add_option("--seed", seed_s, "random seed");
    ver->add_option("--threads", threads_s, "parallel suites");
    ver->add_flag("--table", table, "print a human-readable table on stderr");
    ver->add_flag_callback("--list", [] {
        for (auto& n : suite_names()) std::cout << n << "\n";
        std::exit(0);
    }, "list suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gauss) {
            auto F = field(gopt.p, gopt.f, 12);
            auto chi = gopt.build(F);
            cplx t = gauss_sum(chi, AddChar{F});
            json j{{"char", chi.to_json()}, {"tau_re", t.real()}, {"tau_im", t.imag()}, {"abs", std::abs(t)},
                   {"q_pow_half_f", std::pow(static_cast<double>(F.q()), chi.cond_exp / 2.0)}};
            if (chi.at_pi_exact) {
                auto t = gauss_sum_exact(chi);
                j["abs_squared_exact"] = boost::lexical_cast<std::string>((t * t.conj()).as_rational());
            }
            emit(j, out);
        } else if (*l24) {
            auto F = field(lopt.p, lopt.f, 12);
            auto chi = lopt.build(F);
            cplx cf = lemma24_value(chi, AddChar{F});
            auto g = character_integrand(chi);
            auto r = annulus_integral_oracle(g, annulus_depth(g, l24_tol));
            emit(json{{"char", chi.to_json()}, {"closed_form", jc(cf)}, {"oracle", jc(r.value)},
                      {"oracle_tail_bound", r.tail_bound}, {"annuli", r.n_max},
                      {"rel_err", std::abs(cf - r.value) / std::abs(cf)}},
                 out);
        } else if (*euler) {
            auto F = field(eopt.p, eopt.f, 12);
            auto chi = eopt.build(F);
            auto rep = erep.build(F);
            json j{{"rep", rep.to_json()}, {"char", chi.to_json()}, {"e", jc(euler_factor(rep, chi))}};
            if (rep.alpha1_x && chi.at_pi_exact) j["exact"] = boost::lexical_cast<std::string>(euler_factor_exact(rep, chi));
            emit(j, out);
        } else if (*p27) {
            auto F = field(popt.p, popt.f, 12);
            auto chi = popt.build(F);
            auto rep = prep.build(F);
            auto r = prop27_check(rep, chi);
            emit(json{{"rep", rep.to_json()}, {"char", chi.to_json()}, {"report", r.to_json()}}, out);
        } else if (*tree) {
            if (!is_prime(tq)) throw ConfigError("--q must be prime");
            auto vs = tgraph ? graph_ball(Lattice::v0(tq), tr) : tree_ball(Lattice::v0(tq), tr);
            if (temit == "dot") {
                auto dot = to_dot(vs, !tgraph);
                if (out.empty()) std::cout << dot;
                else std::ofstream(out) << dot;
            } else {
                std::set<Lattice> in(vs.begin(), vs.end());
                json verts = json::array(), edges = json::array();
                std::set<std::pair<Lattice, Lattice>> seen;
                for (auto& v : in) {
                    verts.push_back(json{{"id", v.str()}, {"height", v.height()}, {"lattice", v.to_json()}});
                    for (auto& w : v.neighbors_out()) {
                        Lattice t = tgraph ? w : w.project();
                        if (!in.count(t)) continue;
                        std::pair<Lattice, Lattice> key = tgraph ? std::make_pair(v, t) : std::make_pair(std::min(v, t), std::max(v, t));
                        if (seen.insert(key).second) edges.push_back({v.str(), t.str()});
                    }
                }
                emit(json{{"q", tq}, {"radius", tr}, {"kind", tgraph ? "graph" : "tree"}, {"vertices", verts},
                          {"edges", edges}},
                     out);
            }
        } else if (*arch) {
            json rows = json::array();
            for (double s : svals) {
                if (ident == "mellin") {
                    auto r = mellin_K0(s);
                    rows.push_back({{"s", s}, {"quadrature", r.value}, {"err_est", r.err_est},
                                    {"closed", mellin_K0_closed(s)}});
                } else if (ident == "complex-zeta") {
                    auto r = complex_zeta_integral(s);
                    rows.push_back({{"s", s}, {"quadrature", r.value}, {"err_est", r.err_est},
                                    {"L_v", complex_L(s)}, {"ratio_to_L_v", r.value / complex_L(s)},
                                    {"ratio_to_(2pi)^2_L_v", r.value / (4 * M_PI * M_PI * complex_L(s))}});
                } else if (ident == "real-zeta") {
                    auto r = real_zeta_integral(s);
                    rows.push_back({{"s", s}, {"quadrature", r.value}, {"err_est", r.err_est},
                                    {"closed", real_zeta_closed(s)}});
                } else {
                    rows.push_back({{"x", s}, {"K0", bessel_K(0, s)}, {"K1", bessel_K(1, s)},
                                    {"residual_K0", bessel_ode_residual(0, s)},
                                    {"residual_K1", bessel_ode_residual(1, s)}});
                }
            }
            emit(json{{"identity", ident}, {"rows", rows}}, out);
        } else if (*lp) {
            auto g = lp_context(curve, curve_file, coeff_file, cN, w, lp_p, trunc);
            Rational s = parse_rational(s_str);
            json j = lp_report(g, level, s);
            j["curve"] = coeff_file.empty() ? (curve_file.empty() ? curve : curve_file) : coeff_file;
            j["level"] = level;
            if (s == 0) {
                auto d = derivative_order_report(g, level, g.red == Reduction::split ? 1 : 0);
                j["exceptional"] = g.red == Reduction::split;
                j["vanishes"] = d.vanishes;
                j["derivative_report"] = d.to_json();
            }
            emit(j, out);
        } else if (*ver) {
            Config cfg = cfg_path.empty() ? Config{} : Config::load(cfg_path);
            if (!seed_s.empty()) cfg.set("seed", seed_s);
            if (!threads_s.empty()) cfg.set("threads", threads_s);
            if (cfg.threads() < 1) throw ConfigError("threads must be >= 1");
            auto camp = run_campaign(cfg, only);
            if (table) std::cerr << camp.table();
            emit(camp.to_json(), out);
            return camp.all_pass() ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const DivergenceError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
