#include "stf/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace stf {

Q parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational");
    std::string t = s;
    if (t[0] == '+') t = t.substr(1);
    for (char c : t)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
            throw std::invalid_argument("bad rational '" + s + "'");
    Q q;
    if (q.set_str(t, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Q& q) { return q.get_str(); }

std::string to_string(const QVec& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += v[i].get_str();
    }
    return out + "]";
}

QVec operator+(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

QVec operator-(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

QVec operator-(const QVec& a) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

QVec operator*(const Q& c, const QVec& a) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

bool is_zero(const QVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

bool QVecLess::operator()(const QVec& a, const QVec& b) const {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return a.size() < b.size();
}

QMat identity(int n) {
    QMat m(n, QVec(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QMat mat_mul(const QMat& a, const QMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMat r(n, QVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

QVec mat_vec(const QMat& a, const QVec& v) {
    QVec r(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
    return r;
}

QMat transpose(const QMat& a) {
    if (a.empty()) return {};
    QMat r(a[0].size(), QVec(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
    return r;
}

Q det(QMat a) {
    size_t n = a.size();
    Q d = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Q f = a[r][c] / a[c][c];
            for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return d;
}

int rank(QMat a) {
    int rk = 0;
    size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (size_t c = 0; c < cols && rk < static_cast<int>(rows); ++c) {
        size_t p = rk;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[rk]);
        for (size_t r = 0; r < rows; ++r) {
            if (r == static_cast<size_t>(rk) || a[r][c] == 0) continue;
            Q f = a[r][c] / a[rk][c];
            for (size_t j = c; j < cols; ++j) a[r][j] -= f * a[rk][j];
        }
        ++rk;
    }
    return rk;
}

QMat inverse(const QMat& a) {
    size_t n = a.size();
    QMat m(n, QVec(2 * n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
        m[i][n + i] = 1;
    }
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) throw std::domain_error("singular matrix");
        std::swap(m[p], m[c]);
        Q inv = 1 / m[c][c];
        for (size_t j = 0; j < 2 * n; ++j) m[c][j] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Q f = m[r][c];
            for (size_t j = 0; j < 2 * n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    QMat r(n, QVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) r[i][j] = m[i][n + j];
    return r;
}

QVec solve(const QMat& a, const QVec& b) { return mat_vec(inverse(a), b); }

long gcd_l(long a, long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long lcm_l(long a, long b) { return a / gcd_l(a, b) * b; }

}  // namespace stf
