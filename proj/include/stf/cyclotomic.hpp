#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "stf/rational.hpp"

namespace stf {

// Element of Q(zeta_n), stored in the power basis 1, z, ..., z^{phi(n)-1}
// reduced modulo the n-th cyclotomic polynomial. Operands with different n
// are lifted to the lcm before combining.
class Cyc {
public:
    Cyc();
    Cyc(const Q& q);  // NOLINT: rationals embed implicitly
    Cyc(long v);      // NOLINT

    static Cyc root_of_unity(long n, long k);  // e^{2 pi i k / n}
    static Cyc exp_turns(const Q& t);          // e^{2 pi i t}
    static Cyc imag_unit();

    long conductor() const { return n_; }
    const std::vector<Q>& coefficients() const { return c_; }

    Cyc operator-() const;
    Cyc& operator+=(const Cyc& o);
    Cyc& operator-=(const Cyc& o);
    Cyc& operator*=(const Cyc& o);
    Cyc& operator/=(const Cyc& o);
    friend Cyc operator+(Cyc a, const Cyc& b) { return a += b; }
    friend Cyc operator-(Cyc a, const Cyc& b) { return a -= b; }
    friend Cyc operator*(Cyc a, const Cyc& b) { return a *= b; }
    friend Cyc operator/(Cyc a, const Cyc& b) { return a /= b; }
    friend bool operator==(const Cyc& a, const Cyc& b);
    friend bool operator!=(const Cyc& a, const Cyc& b) { return !(a == b); }

    Cyc conj() const;
    Cyc inverse() const;
    bool is_zero() const;
    bool is_rational() const;
    Q rational() const;  // throws unless is_rational()
    std::complex<double> to_complex() const;

    // same element over the smallest conductor; used for canonical printing
    Cyc minimized() const;
    // "a + b*z12^3 + ..." with z<n> = e^{2 pi i/n}
    std::string str() const;

private:
    Cyc(long n, std::vector<Q> c);
    Cyc lifted(long m) const;

    long n_;
    std::vector<Q> c_;
};

long euler_phi(long n);
// integer coefficients of the n-th cyclotomic polynomial, constant term first
const std::vector<long>& cyclotomic_polynomial(long n);

// A value that is exact when possible, always carrying a floating shadow.
class Value {
public:
    Value() : numeric_(0.0) { exact_ = Cyc(); }
    Value(const Cyc& c) : exact_(c), numeric_(c.to_complex()) {}  // NOLINT
    Value(const Q& q) : Value(Cyc(q)) {}                          // NOLINT
    Value(long v) : Value(Cyc(v)) {}                              // NOLINT
    static Value numeric(std::complex<double> z) {
        Value v;
        v.exact_.reset();
        v.numeric_ = z;
        return v;
    }

    bool is_exact() const { return exact_.has_value(); }
    const std::optional<Cyc>& exact() const { return exact_; }
    std::complex<double> numeric() const { return numeric_; }

    Value operator-() const;
    Value& operator+=(const Value& o);
    Value& operator-=(const Value& o);
    Value& operator*=(const Value& o);
    Value& operator/=(const Value& o);
    friend Value operator+(Value a, const Value& b) { return a += b; }
    friend Value operator-(Value a, const Value& b) { return a -= b; }
    friend Value operator*(Value a, const Value& b) { return a *= b; }
    friend Value operator/(Value a, const Value& b) { return a /= b; }
    Value conj() const;

    bool is_zero(double tol = 0.0) const;
    // exact equality when both exact, otherwise |a-b| <= tol
    bool close_to(const Value& o, double tol) const;
    std::string str() const;

private:
    std::optional<Cyc> exact_;
    std::complex<double> numeric_;
};

}  // namespace stf
