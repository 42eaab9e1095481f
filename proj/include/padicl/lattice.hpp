#pragma once

#include <complex>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "padicl/laurent.hpp"
#include "padicl/padic.hpp"

namespace padicl {

// Upper triangular matrix (a b; 0 d) over Q, read p-adically.
struct UpperTri {
    Rational a = 1, b = 0, d = 1;
};

// Lattice O (p^m1, 0) + O (u, p^m2) in Q_p^2 with u = num / p^e taken mod p^m1.
// Only q = p (residue degree one) is supported.
struct Lattice {
    int p = 2;
    int m1 = 0, m2 = 0;
    int e = 0;
    int64_t num = 0;

    static Lattice make(int p, int m1, int m2, const Rational& u);
    static Lattice v0(int p) { return make(p, 0, 0, 0); }
    // O + p^n O
    static Lattice vn(int p, int n) { return make(p, 0, n, 0); }

    Rational u() const;
    Lattice scale(int k) const;  // p^k * L
    // index-q sublattices (origins of edges ending here) and superlattices
    std::vector<Lattice> neighbors_in() const;
    std::vector<Lattice> neighbors_out() const;
    Lattice act(const UpperTri& g) const;

    int height() const { return m2 - m1; }
    int ord_e1() const { return -m1; }
    // representative of the homothety class
    Lattice project() const { return scale(-std::min(m1, m2)); }
    // elementary divisor exponents relative to O^2
    std::pair<int, int> elementary_divisors() const;

    auto operator<=>(const Lattice&) const = default;
    std::string str() const;
    json to_json() const;
};

// o(e) = sub, t(e) = sup, [sup : sub] = q
struct Edge {
    Lattice sub, sup;
    const Lattice& o() const { return sub; }
    const Lattice& t() const { return sup; }
    auto operator<=>(const Edge&) const = default;
    std::string str() const { return sub.str() + "->" + sup.str(); }
};

// distance between homothety classes in the tree
int tree_distance(const Lattice& a, const Lattice& b);
// h = n - d(v, v_n) for n far along the ray to infinity
int height_by_distance(const Lattice& v);

// vertices of the directed graph within undirected distance r of the centre
std::vector<Lattice> graph_ball(const Lattice& centre, int r);
// homothety classes within tree distance r
std::vector<Lattice> tree_ball(const Lattice& centre, int r);

// ---- scalars ----

inline bool scalar_is_zero(const Rational& x) { return x == 0; }
inline bool scalar_is_zero(const std::complex<double>& x) { return x == 0.0; }
inline bool scalar_is_zero(const Laurent& x) { return x.is_zero(); }
inline bool scalar_is_zero(const BigInt& x) { return x == 0; }
inline std::string scalar_str(const Rational& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}
inline std::string scalar_str(const Laurent& x) { return x.str(); }
inline std::string scalar_str(const std::complex<double>& x) {
    std::ostringstream os;
    os.precision(17);
    os << x.real() << (x.imag() < 0 ? "" : "+") << x.imag() << "i";
    return os.str();
}

inline Rational spow(const Rational& x, int k) {
    Rational r = 1;
    for (int i = 0; i < std::abs(k); ++i) r *= x;
    return k < 0 ? Rational(1) / r : r;
}
inline std::complex<double> spow(const std::complex<double>& x, int k) { return std::pow(x, k); }
inline Laurent spow(const Laurent& x, int k) { return x.pow(k); }

// finitely supported function on vertices or edges
template <class K, class S>
class FnFinSupp {
public:
    using map_type = std::map<K, S>;
    void add(const K& k, const S& s) {
        if (scalar_is_zero(s)) return;
        auto it = m_.find(k);
        if (it == m_.end()) {
            m_.emplace(k, s);
            return;
        }
        it->second = it->second + s;
        if (scalar_is_zero(it->second)) m_.erase(it);
    }
    S at(const K& k) const {
        auto it = m_.find(k);
        return it == m_.end() ? S(0) : it->second;
    }
    const map_type& support() const { return m_; }
    size_t size() const { return m_.size(); }
    bool is_zero() const { return m_.empty(); }
    FnFinSupp operator+(const FnFinSupp& o) const {
        FnFinSupp r = *this;
        for (auto& [k, s] : o.m_) r.add(k, s);
        return r;
    }
    FnFinSupp operator-(const FnFinSupp& o) const {
        FnFinSupp r = *this;
        for (auto& [k, s] : o.m_) r.add(k, S(0) - s);
        return r;
    }
    FnFinSupp operator*(const S& c) const {
        FnFinSupp r;
        for (auto& [k, s] : m_) r.add(k, s * c);
        return r;
    }
    bool operator==(const FnFinSupp& o) const { return (*this - o).is_zero(); }
    json to_json() const {
        json j = json::array();
        for (auto& [k, s] : m_) j.push_back({{"key", k.str()}, {"value", scalar_str(s)}});
        return j;
    }

private:
    map_type m_;
};

template <class S>
using VertexFn = FnFinSupp<Lattice, S>;
template <class S>
using EdgeFn = FnFinSupp<Edge, S>;

// ---- Hecke operators ----

// (T phi)(v) = sum of phi over the sublattices of v
template <class S>
VertexFn<S> hecke_T(const VertexFn<S>& phi) {
    VertexFn<S> r;
    for (auto& [w, s] : phi.support())
        for (auto& v : w.neighbors_out()) r.add(v, s);
    return r;
}
// (R phi)(v) = phi(p^-1 v)
template <class S>
VertexFn<S> hecke_R(const VertexFn<S>& phi, int power = 1) {
    VertexFn<S> r;
    for (auto& [w, s] : phi.support()) r.add(w.scale(power), s);
    return r;
}
// (T R phi)(v) = sum of phi over the superlattices of v
template <class S>
VertexFn<S> hecke_TR(const VertexFn<S>& phi) {
    VertexFn<S> r;
    for (auto& [w, s] : phi.support())
        for (auto& v : w.neighbors_in()) r.add(v, s);
    return r;
}
// value of T phi / R phi at one vertex, for any function phi
template <class S, class Fn>
S hecke_T_at(const Fn& phi, const Lattice& v) {
    S s(0);
    for (auto& w : v.neighbors_in()) s = s + phi(w);
    return s;
}
template <class S, class Fn>
S hecke_TR_at(const Fn& phi, const Lattice& v) {
    S s(0);
    for (auto& w : v.neighbors_out()) s = s + phi(w);
    return s;
}
template <class S, class Fn>
S hecke_R_at(const Fn& phi, const Lattice& v) {
    return phi(v.scale(-1));
}

template <class K, class S, class Fn>
S pairing(const FnFinSupp<K, S>& phi, const Fn& other) {
    S s(0);
    for (auto& [k, x] : phi.support()) s = s + x * other(k);
    return s;
}
template <class K, class S>
S pairing(const FnFinSupp<K, S>& a, const FnFinSupp<K, S>& b) {
    return pairing(a, [&](const K& k) { return b.at(k); });
}

// (g phi)(v) = phi(g^-1 v)
template <class S>
VertexFn<S> transport(const UpperTri& g, const VertexFn<S>& phi) {
    VertexFn<S> r;
    for (auto& [w, s] : phi.support()) r.add(w.act(g), s);
    return r;
}

// ---- harmonic function rho = alpha^h nu^(-ord_v e1) ----

template <class S>
struct RhoFn {
    S alpha, nu;
    int q = 2;
    S a() const { return alpha + S(q) * nu / alpha; }
    S operator()(const Lattice& v) const { return spow(alpha, v.height()) * spow(nu, -v.ord_e1()); }
};

struct HarmonicReport {
    size_t vertices = 0;
    size_t T_ok = 0;
    size_t R_ok = 0;
    // vertices where R rho = nu^-1 rho holds instead
    size_t R_inverse_ok = 0;
};
HarmonicReport harmonic_check(const RhoFn<Laurent>& rho, int radius);

// ---- delta maps ----

template <class S, class Rho>
VertexFn<S> delta_tilde(const Rho& rho, const EdgeFn<S>& c) {
    VertexFn<S> r;
    for (auto& [e, s] : c.support()) {
        r.add(e.t(), rho(e.o()) * s);
        r.add(e.o(), S(0) - rho(e.t()) * s);
    }
    return r;
}

template <class S, class Rho>
EdgeFn<S> delta_tilde_up(const Rho& rho, const VertexFn<S>& phi) {
    std::set<Edge> edges;
    for (auto& [w, s] : phi.support()) {
        for (auto& t : w.neighbors_out()) edges.insert(Edge{w, t});
        for (auto& o : w.neighbors_in()) edges.insert(Edge{o, w});
    }
    EdgeFn<S> r;
    for (auto& e : edges) r.add(e, rho(e.o()) * phi.at(e.t()) - rho(e.t()) * phi.at(e.o()));
    return r;
}

// ---- balls of P^1 and edges ----

// a + p^n O
struct BallQp {
    Rational a;
    int n = 0;
    bool contains_zero(int p) const { return a == 0 || vp(a, p) >= n; }
};
// canonical lift g e_0 with g = (p^n a; 0 1), e_0 the inclusion O + pO -> O^2
Edge ball_to_edge(int p, const Rational& a, int n);
Edge ball_to_edge(const PadicNum& a, int n);
// end x of P^1 (x finite) lies in U(e)
bool end_in_edge(const Edge& e, const Rational& x);
bool infinity_in_edge(const Edge& e);

// psi_0 then delta~_rho on sum c_B 1_B, as a vertex function.
template <class S>
VertexFn<S> delta_alpha_nu(const RhoFn<S>& rho, const std::vector<std::pair<BallQp, S>>& f) {
    VertexFn<S> r;
    int p = rho.q;
    for (auto& [B, c] : f) {
        S w;
        if (B.contains_zero(p)) {
            if (!(rho.alpha == rho.nu))
                throw DomainError("delta_alpha_nu: ball contains 0 and alpha != nu");
            w = c;
        } else {
            w = c * spow(rho.alpha / rho.nu, vp(B.a, p));
        }
        Edge e = ball_to_edge(p, B.a, B.n);
        r.add(e.t(), rho(e.o()) * w);
        r.add(e.o(), S(0) - rho(e.t()) * w);
    }
    return r;
}

// ---- free basis of C_c(V~) over R[T, R^{+-1}] ----

struct FreeLayer {
    int n = 0;
    size_t X_size = 0;
    size_t C_size = 0;
    size_t rank = 0;
    bool leftover_in_lower_layers = true;
};
struct FreeBasis {
    int q = 2;
    std::vector<std::vector<Lattice>> C, V;
    std::vector<FreeLayer> layers;
};
// (n, j) with v in R^j C_n
std::pair<int, int> layer_of(const Lattice& v);
FreeBasis free_basis(int q, int n_max);

// rank of the span of delta(1_e) for edges inside the radius-r ball (mod a large prime)
struct ImDeltaReport {
    size_t vertices = 0, edges = 0, rank = 0;
};
ImDeltaReport im_delta_rank(int q, int radius);

std::string to_dot(const std::vector<Lattice>& vertices, bool tree);

size_t rank_bareiss(std::vector<std::vector<BigInt>> m);

}  // namespace padicl
