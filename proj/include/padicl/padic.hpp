#pragma once

#include <climits>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace padicl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using json = nlohmann::json;

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

bool is_prime(int64_t n);
BigInt ipow(int64_t base, int e);
int64_t ipow64(int64_t base, int e);
// p-adic valuation of a nonzero integer / rational
int vp(const BigInt& x, int p);
int vp(const Rational& x, int p);
// representative of x in [0, m)
BigInt mod_pos(const BigInt& x, const BigInt& m);
BigInt inv_mod(const BigInt& a, const BigInt& m);

// Unramified extension of Q_p of degree f, elements kept to relative precision N.
struct LocalFieldSpec {
    int p = 0;
    int f = 1;
    int N = 0;
    std::vector<int64_t> modulus;  // monic, size f+1, low degree first
    std::vector<BigInt> traces;    // Tr(t^i) for i < f

    int64_t q() const { return ipow64(p, f); }
    bool operator==(const LocalFieldSpec& o) const {
        return p == o.p && f == o.f && N == o.N && modulus == o.modulus;
    }
    bool operator!=(const LocalFieldSpec& o) const { return !(*this == o); }
    json to_json() const;
};

// Lowest monic irreducible of degree f_res over F_p in lexicographic order
// (coefficients compared from the constant term upward).
LocalFieldSpec field(int p, int f_res, int precision);

class PadicNum {
public:
    static constexpr int INF = INT_MAX;

    PadicNum() = default;
    static PadicNum zero(const LocalFieldSpec& F);
    static PadicNum from_int(const LocalFieldSpec& F, const BigInt& n);
    static PadicNum from_rational(const LocalFieldSpec& F, const Rational& r);
    // p^shift * sum c_i t^i, the coefficients known modulo p^abs_digits
    // (absolute precision shift + abs_digits; clipped to N relative digits).
    static PadicNum from_coeffs(const LocalFieldSpec& F, std::vector<BigInt> c, int shift = 0,
                                int abs_digits = INT_MAX);
    static PadicNum from_json(const LocalFieldSpec& F, const json& j);

    const LocalFieldSpec& field() const { return *F_; }
    bool is_zero() const { return zero_; }
    int valuation() const { return zero_ ? INF : v_; }
    int rel_prec() const { return zero_ ? INF : prec_; }
    // ord + rel_prec; INF for exact zero
    int abs_prec() const { return zero_ ? INF : v_ + prec_; }
    const std::vector<BigInt>& unit() const { return u_; }

    PadicNum operator-() const;
    PadicNum operator+(const PadicNum& o) const;
    PadicNum operator-(const PadicNum& o) const;
    PadicNum operator*(const PadicNum& o) const;
    PadicNum operator/(const PadicNum& o) const;
    PadicNum inv() const;
    PadicNum pow(int64_t e) const;
    PadicNum shift(int k) const;  // multiply by p^k

    // equality to the common precision of both operands
    bool operator==(const PadicNum& o) const;
    bool operator!=(const PadicNum& o) const { return !(*this == o); }

    Rational abs() const;  // q^{-ord}; 0 for zero
    // Tr to Q_p: returns p^valuation * integer as a rational (exact on known digits)
    Rational trace_approx() const;
    // fractional part of Tr(x) in [0,1), exact; throws PrecisionError if x mod O is not determined
    Rational frac_trace() const;

    // x mod p^n as coefficients in [0, p^n) (requires x integral, abs_prec >= n)
    std::vector<BigInt> residue_coeffs(int n) const;
    // canonical representative of x mod p^r O (exact zero if x in p^r O)
    PadicNum reduce_mod(int r) const;
    bool is_integral() const { return zero_ || v_ >= 0; }
    bool is_unit() const { return !zero_ && v_ == 0; }

    std::string str() const;
    json to_json() const;

private:
    std::shared_ptr<const LocalFieldSpec> F_;
    bool zero_ = true;
    int v_ = 0;
    int prec_ = 0;
    std::vector<BigInt> u_;

    static PadicNum make(std::shared_ptr<const LocalFieldSpec> F, std::vector<BigInt> c, int v,
                         int rel_digits);
    void check_same(const PadicNum& o) const;
    friend PadicNum teichmuller(const PadicNum&);
};

// helpers on polynomials over Z/p^k modulo the field modulus
std::vector<BigInt> polymulmod(const LocalFieldSpec& F, const std::vector<BigInt>& a,
                               const std::vector<BigInt>& b, const BigInt& m);

struct ResidueReps {
    std::vector<PadicNum> all;
    std::vector<PadicNum> units;
};
// coset representatives of O/p^n and U/U^(n); requires n <= precision
ResidueReps residue_reps(const LocalFieldSpec& F, int n);

// flat index of a residue coefficient vector mod p^n: sum c_i (p^n)^i
int64_t residue_index(const LocalFieldSpec& F, const std::vector<BigInt>& c, int n);
std::vector<BigInt> residue_from_index(const LocalFieldSpec& F, int64_t idx, int n);
int64_t residue_index(const PadicNum& x, int n);

PadicNum teichmuller(const PadicNum& u);
// Iwasawa logarithm on units (log p = 0 extension is not needed here: input must be a unit)
PadicNum log_p(const PadicNum& u);
// requires ord(x) > 1/(p-1)
PadicNum exp_p(const PadicNum& x);

// cyclotomic branch l = log_p on Z_p^x, image in p^eps Z_p
int eps_p(int p);

}  // namespace padicl
