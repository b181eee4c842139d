#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace stf {

using Q = mpq_class;
using QVec = std::vector<Q>;
using QMat = std::vector<QVec>;  // row-major

Q parse_rational(const std::string& s);  // "p", "p/q", "-p/q"
inline Q frac(long num, long den) {
    Q q(num, den);
    q.canonicalize();
    return q;
}
std::string to_string(const Q& q);
std::string to_string(const QVec& v);

QVec operator+(const QVec& a, const QVec& b);
QVec operator-(const QVec& a, const QVec& b);
QVec operator-(const QVec& a);
QVec operator*(const Q& c, const QVec& a);
bool is_zero(const QVec& v);

// lexicographic comparison, used for deterministic root ordering
struct QVecLess {
    bool operator()(const QVec& a, const QVec& b) const;
};

QMat identity(int n);
QMat mat_mul(const QMat& a, const QMat& b);
QVec mat_vec(const QMat& a, const QVec& v);
QMat transpose(const QMat& a);
Q det(QMat a);
int rank(QMat a);
// throws std::domain_error when singular
QMat inverse(const QMat& a);
QVec solve(const QMat& a, const QVec& b);

long gcd_l(long a, long b);
long lcm_l(long a, long b);

}  // namespace stf
