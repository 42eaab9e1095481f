#include "padicl/lattice.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace padicl {

namespace {

// p^k must stay well inside int64
void guard_exponent(int p, int k) {
    double bits = k * std::log2(static_cast<double>(p));
    if (bits > 61) throw DomainError("Lattice: coordinates exceed the supported range");
}

// ord_p of a rational (INT_MAX for zero)
int ordr(const Rational& x, int p) { return x == 0 ? INT_MAX : vp(x, p); }

struct Mat2 {
    Rational a, b, c, d;
};

Rational ppow(int p, int k) { return k >= 0 ? Rational(ipow(p, k)) : Rational(1, ipow(p, -k)); }

Mat2 basis_matrix(const Lattice& v) { return {ppow(v.p, v.m1), v.u(), 0, ppow(v.p, v.m2)}; }

}  // namespace

Lattice Lattice::make(int p, int m1, int m2, const Rational& u) {
    if (!is_prime(p)) throw DomainError("Lattice: p must be prime");
    Lattice L;
    L.p = p;
    L.m1 = m1;
    L.m2 = m2;
    int k = ordr(u, p);
    if (k >= m1) return L;
    int e = std::max(0, -k);
    guard_exponent(p, m1 + e);
    BigInt M = ipow(p, m1 + e);
    Rational up = u * ppow(p, e);
    BigInt n = numerator(up), d = denominator(up);
    BigInt r = mod_pos(n * inv_mod(mod_pos(d, M), M), M);
    L.e = e;
    L.num = static_cast<int64_t>(r);
    return L;
}

Rational Lattice::u() const { return Rational(num) / ppow(p, e); }

Lattice Lattice::scale(int k) const { return make(p, m1 + k, m2 + k, u() * ppow(p, k)); }

std::vector<Lattice> Lattice::neighbors_in() const {
    std::vector<Lattice> out;
    out.reserve(p + 1);
    Rational uu = u();
    // span of the first basis vector mod p L, then the lines through u-vector + i * first
    out.push_back(make(p, m1, m2 + 1, uu * p));
    for (int i = 0; i < p; ++i) out.push_back(make(p, m1 + 1, m2, uu + Rational(i) * ppow(p, m1)));
    return out;
}

std::vector<Lattice> Lattice::neighbors_out() const {
    auto s = neighbors_in();
    for (auto& x : s) x = x.scale(-1);
    return s;
}

Lattice Lattice::act(const UpperTri& g) const {
    if (g.a == 0 || g.d == 0) throw DomainError("Lattice::act: singular matrix");
    int oa = vp(g.a, p), od = vp(g.d, p);
    Rational unit_d = g.d / ppow(p, od);
    Rational un = (g.a * u() + g.b * ppow(p, m2)) / unit_d;
    return make(p, m1 + oa, m2 + od, un);
}

std::pair<int, int> Lattice::elementary_divisors() const {
    int e1 = std::min(m1, m2);
    int ou = ordr(u(), p);
    if (ou != INT_MAX) e1 = std::min(e1, ou);
    return {e1, m1 + m2 - e1};
}

std::string Lattice::str() const {
    std::ostringstream os;
    os << "(" << m1 << "," << m2 << ",";
    if (e == 0) os << num;
    else os << num << "/" << p << "^" << e;
    os << ")";
    return os.str();
}

json Lattice::to_json() const {
    return json{{"p", p}, {"m1", m1}, {"m2", m2}, {"u_num", num}, {"u_exp", e}, {"height", height()}};
}

int tree_distance(const Lattice& x, const Lattice& y) {
    if (x.p != y.p) throw DomainError("tree_distance: different primes");
    int p = x.p;
    Mat2 A = basis_matrix(x), B = basis_matrix(y);
    // A^-1 B for upper triangular A
    Rational ia = 1 / A.a, id = 1 / A.d;
    Rational c11 = ia * B.a;
    Rational c12 = ia * B.b - ia * A.b * id * B.d;
    Rational c22 = id * B.d;
    int mn = std::min({ordr(c11, p), ordr(c12, p), ordr(c22, p)});
    int det = ordr(c11, p) + ordr(c22, p);
    return det - 2 * mn;
}

int height_by_distance(const Lattice& v) {
    int n = std::abs(v.m1) + std::abs(v.m2) + v.e + 4;
    int h = n - tree_distance(v, Lattice::vn(v.p, n));
    // further out along the same ray must agree
    if (n + 1 - tree_distance(v, Lattice::vn(v.p, n + 1)) != h)
        throw std::logic_error("height_by_distance: ray did not stabilise");
    return h;
}

std::vector<Lattice> graph_ball(const Lattice& centre, int r) {
    std::map<Lattice, int> dist{{centre, 0}};
    std::deque<Lattice> qu{centre};
    while (!qu.empty()) {
        Lattice v = qu.front();
        qu.pop_front();
        int d = dist[v];
        if (d == r) continue;
        auto add = [&](const Lattice& w) {
            if (dist.emplace(w, d + 1).second) qu.push_back(w);
        };
        for (auto& w : v.neighbors_in()) add(w);
        for (auto& w : v.neighbors_out()) add(w);
    }
    std::vector<Lattice> out;
    for (auto& kv : dist) out.push_back(kv.first);
    return out;
}

std::vector<Lattice> tree_ball(const Lattice& centre, int r) {
    Lattice c = centre.project();
    std::map<Lattice, int> dist{{c, 0}};
    std::deque<Lattice> qu{c};
    while (!qu.empty()) {
        Lattice v = qu.front();
        qu.pop_front();
        int d = dist[v];
        if (d == r) continue;
        for (auto& w : v.neighbors_in()) {
            Lattice pw = w.project();
            if (dist.emplace(pw, d + 1).second) qu.push_back(pw);
        }
    }
    std::vector<Lattice> out;
    for (auto& kv : dist) out.push_back(kv.first);
    return out;
}

HarmonicReport harmonic_check(const RhoFn<Laurent>& rho, int radius) {
    HarmonicReport rep;
    Laurent a = rho.a();
    for (auto& v : graph_ball(Lattice::v0(rho.q), radius)) {
        ++rep.vertices;
        Laurent rv = rho(v);
        if (hecke_T_at<Laurent>(rho, v) == a * rv) ++rep.T_ok;
        Laurent Rv = hecke_R_at<Laurent>(rho, v);
        if (Rv == rho.nu * rv) ++rep.R_ok;
        if (Rv * rho.nu == rv) ++rep.R_inverse_ok;
    }
    return rep;
}

Edge ball_to_edge(int p, const Rational& a, int n) {
    // g v0 and g v1 with g = (p^n a; 0 1)
    Lattice sup = Lattice::make(p, n, 0, a);
    Lattice sub = Lattice::make(p, n, 1, a * p);
    return Edge{sub, sup};
}

Edge ball_to_edge(const PadicNum& a, int n) {
    const auto& F = a.field();
    if (F.f != 1) throw DomainError("ball_to_edge: only Q_p is supported");
    if (a.is_zero()) return ball_to_edge(F.p, 0, n);
    if (a.abs_prec() < n) throw PrecisionError("ball_to_edge: centre not known modulo p^n");
    Rational r = Rational(a.unit()[0]) * (a.valuation() >= 0 ? Rational(ipow(F.p, a.valuation()))
                                                              : Rational(1, ipow(F.p, -a.valuation())));
    return ball_to_edge(F.p, r, n);
}

namespace {

// distance comparison along the ray towards an end
bool ray_closer_to_t(const Edge& e, const Lattice& far) {
    int dO = tree_distance(far, e.o()), dT = tree_distance(far, e.t());
    return dO == dT + 1;
}

}  // namespace

bool end_in_edge(const Edge& e, const Rational& x) {
    int p = e.sub.p;
    int K = std::abs(e.sub.m1) + std::abs(e.sub.m2) + std::abs(e.sup.m1) + std::abs(e.sup.m2) + e.sub.e +
            e.sup.e + (x == 0 ? 0 : std::abs(vp(x, p))) + 6;
    // <(p^K, 0), (x, 1)> converges to the end x
    return ray_closer_to_t(e, Lattice::make(p, K, 0, x));
}

bool infinity_in_edge(const Edge& e) {
    int K = std::abs(e.sub.m1) + std::abs(e.sub.m2) + std::abs(e.sup.m1) + std::abs(e.sup.m2) + e.sub.e +
            e.sup.e + 6;
    return ray_closer_to_t(e, Lattice::vn(e.sub.p, K));
}

std::pair<int, int> layer_of(const Lattice& v) {
    auto [e1, e2] = v.elementary_divisors();
    return {e2 - e1, e2};
}

size_t rank_bareiss(std::vector<std::vector<BigInt>> m) {
    size_t rows = m.size();
    if (!rows) return 0;
    size_t cols = m[0].size();
    size_t r = 0;
    BigInt prev = 1;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (size_t i = r + 1; i < rows; ++i) {
            for (size_t j = c + 1; j < cols; ++j) m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
            m[i][c] = 0;
        }
        prev = m[r][c];
        ++r;
    }
    return r;
}

FreeBasis free_basis(int q, int n_max) {
    if (n_max < 0) throw DomainError("free_basis: n_max must be >= 0");
    if (n_max > 6 || ipow64(q, n_max) > 2000) throw DomainError("free_basis: resource limit exceeded");
    FreeBasis fb;
    fb.q = q;
    Lattice v0 = Lattice::v0(q);
    fb.C.push_back({v0});
    fb.V.push_back({v0});
    for (int n = 1; n <= n_max; ++n) {
        std::vector<Lattice> Cn, Vn;
        for (auto& c : fb.C[n - 1]) {
            std::vector<Lattice> ch;
            for (auto& s : c.neighbors_out())
                if (layer_of(s) == std::pair<int, int>{n, 0}) ch.push_back(s);
            std::sort(ch.begin(), ch.end());
            size_t expect = n == 1 ? static_cast<size_t>(q + 1) : static_cast<size_t>(q);
            if (ch.size() != expect) throw std::logic_error("free_basis: unexpected child count");
            Cn.insert(Cn.end(), ch.begin(), ch.end());
            if (n == 1) Vn.assign(ch.begin(), ch.begin() + q);
            else Vn.insert(Vn.end(), ch.begin(), ch.begin() + (q - 1));
        }
        std::sort(Cn.begin(), Cn.end());
        fb.C.push_back(Cn);
        fb.V.push_back(Vn);
    }
    for (int n = 0; n <= n_max; ++n) {
        FreeLayer L;
        L.n = n;
        std::map<Lattice, size_t> col;
        for (auto& c : fb.C[n]) col.emplace(c, col.size());
        L.C_size = col.size();
        std::vector<std::vector<BigInt>> mat;
        for (int i = 0; i <= n; ++i)
            for (auto& v : fb.V[i]) {
                VertexFn<Rational> phi;
                phi.add(v, 1);
                for (int k = 0; k < n - i; ++k) phi = hecke_T(phi);
                std::vector<BigInt> row(col.size(), 0);
                for (auto& [w, s] : phi.support()) {
                    auto it = col.find(w);
                    if (it != col.end()) {
                        row[it->second] = numerator(s);
                    } else if (layer_of(w).first >= n) {
                        L.leftover_in_lower_layers = false;
                    }
                }
                mat.push_back(row);
            }
        L.X_size = mat.size();
        L.rank = rank_bareiss(mat);
        fb.layers.push_back(L);
    }
    return fb;
}

ImDeltaReport im_delta_rank(int q, int radius) {
    auto ball = graph_ball(Lattice::v0(q), radius);
    std::map<Lattice, int> idx;
    for (auto& v : ball) idx.emplace(v, static_cast<int>(idx.size()));
    const int64_t P = 1000000007;
    // sparse elimination: pivot row per leading column
    std::map<int, std::map<int, int64_t>> pivots;
    ImDeltaReport rep;
    rep.vertices = ball.size();
    for (auto& v : ball)
        for (auto& w : v.neighbors_out()) {
            auto it = idx.find(w);
            if (it == idx.end()) continue;
            ++rep.edges;
            // delta(1_e) = 1_t - 1_o
            std::map<int, int64_t> row{{it->second, 1}, {idx[v], P - 1}};
            while (!row.empty()) {
                auto [lead, val] = *row.begin();
                auto pv = pivots.find(lead);
                if (pv == pivots.end()) {
                    // normalise so the leading coefficient is 1
                    int64_t inv = static_cast<int64_t>(inv_mod(BigInt(val), BigInt(P)));
                    for (auto& kv : row) kv.second = kv.second * inv % P;
                    pivots.emplace(lead, std::move(row));
                    ++rep.rank;
                    break;
                }
                for (auto& [c, x] : pv->second) {
                    int64_t nv = (row[c] - val * x % P + P) % P;
                    if (nv == 0) row.erase(c);
                    else row[c] = nv;
                }
            }
        }
    return rep;
}

std::string to_dot(const std::vector<Lattice>& vertices, bool tree) {
    std::set<Lattice> vs(vertices.begin(), vertices.end());
    std::ostringstream os;
    os << (tree ? "graph" : "digraph") << " bt {\n";
    for (auto& v : vs) os << "  \"" << v.str() << "\" [label=\"" << v.str() << " h=" << v.height() << "\"];\n";
    std::set<std::pair<Lattice, Lattice>> seen;
    for (auto& v : vs)
        for (auto& w : v.neighbors_out()) {
            Lattice t = tree ? w.project() : w;
            if (!vs.count(t)) continue;
            if (tree) {
                auto key = std::minmax(v, t);
                if (!seen.insert({key.first, key.second}).second) continue;
                os << "  \"" << v.str() << "\" -- \"" << t.str() << "\";\n";
            } else {
                os << "  \"" << v.str() << "\" -> \"" << t.str() << "\";\n";
            }
        }
    os << "}\n";
    return os.str();
}

}  // namespace padicl
