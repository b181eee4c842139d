#include "stf/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace stf {

long euler_phi(long n) {
    long r = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}

namespace {

std::vector<long> poly_divexact(std::vector<long> num, const std::vector<long>& den) {
    // den monic
    int dn = static_cast<int>(den.size()) - 1;
    int nn = static_cast<int>(num.size()) - 1;
    std::vector<long> q(nn - dn + 1, 0);
    for (int i = nn; i >= dn; --i) {
        long c = num[i];
        q[i - dn] = c;
        if (c == 0) continue;
        for (int j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    return q;
}

// reduce a polynomial (any degree) modulo the monic Phi_n
std::vector<Q> reduce_mod(std::vector<Q> p, long n) {
    const auto& phi = cyclotomic_polynomial(n);
    int d = static_cast<int>(phi.size()) - 1;
    for (int i = static_cast<int>(p.size()) - 1; i >= d; --i) {
        if (p[i] == 0) continue;
        Q c = p[i];
        for (int j = 0; j <= d; ++j)
            if (phi[j]) p[i - d + j] -= c * phi[j];
    }
    p.resize(d, Q(0));
    return p;
}

}  // namespace

const std::vector<long>& cyclotomic_polynomial(long n) {
    static std::mutex mu;
    static std::map<long, std::vector<long>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<long> p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d) continue;
        auto jt = cache.find(d);
        std::vector<long> pd;
        if (jt == cache.end()) {
            // compute recursively without holding a dangling reference
            std::vector<long> q(d + 1, 0);
            q[0] = -1;
            q[d] = 1;
            for (long e = 1; e < d; ++e)
                if (d % e == 0) q = poly_divexact(q, cache.at(e));
            cache[d] = q;
            pd = q;
        } else {
            pd = jt->second;
        }
        p = poly_divexact(p, pd);
    }
    return cache[n] = p;
}

Cyc::Cyc() : n_(1), c_{Q(0)} {}
Cyc::Cyc(const Q& q) : n_(1), c_{q} {}
Cyc::Cyc(long v) : n_(1), c_{Q(v)} {}
Cyc::Cyc(long n, std::vector<Q> c) : n_(n), c_(std::move(c)) {}

Cyc Cyc::root_of_unity(long n, long k) {
    if (n <= 0) throw std::invalid_argument("root_of_unity: n must be positive");
    k %= n;
    if (k < 0) k += n;
    long g = gcd_l(n, k);
    if (k == 0) return Cyc(1);
    n /= g;
    k /= g;
    std::vector<Q> p(k + 1, Q(0));
    p[k] = 1;
    return Cyc(n, reduce_mod(std::move(p), n));
}

Cyc Cyc::exp_turns(const Q& t) {
    Q r = t;
    mpz_class num = r.get_num(), den = r.get_den();
    if (!den.fits_slong_p()) throw std::overflow_error("exp_turns: denominator too large");
    long n = den.get_si();
    mpz_class k = num % den;
    return root_of_unity(n, k.get_si());
}

Cyc Cyc::imag_unit() { return root_of_unity(4, 1); }

Cyc Cyc::lifted(long m) const {
    if (m == n_) return *this;
    long step = m / n_;
    std::vector<Q> p(static_cast<size_t>((c_.size() - 1) * step + 1), Q(0));
    for (size_t j = 0; j < c_.size(); ++j) p[j * step] = c_[j];
    return Cyc(m, reduce_mod(std::move(p), m));
}

Cyc Cyc::operator-() const {
    Cyc r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Cyc& Cyc::operator+=(const Cyc& o) {
    long m = lcm_l(n_, o.n_);
    Cyc a = lifted(m), b = o.lifted(m);
    for (size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
    return *this = std::move(a);
}

Cyc& Cyc::operator-=(const Cyc& o) { return *this += -o; }

Cyc& Cyc::operator*=(const Cyc& o) {
    if (o.n_ == 1) {
        for (auto& x : c_) x *= o.c_[0];
        return *this;
    }
    if (n_ == 1) {
        Q s = c_[0];
        *this = o;
        for (auto& x : c_) x *= s;
        return *this;
    }
    long m = lcm_l(n_, o.n_);
    Cyc a = lifted(m), b = o.lifted(m);
    std::vector<Q> p(a.c_.size() + b.c_.size() - 1, Q(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j)
            if (b.c_[j] != 0) p[i + j] += a.c_[i] * b.c_[j];
    }
    return *this = Cyc(m, reduce_mod(std::move(p), m));
}

Cyc Cyc::inverse() const {
    if (is_zero()) throw std::domain_error("Cyc: division by zero");
    if (n_ == 1) return Cyc(Q(1) / c_[0]);
    size_t d = c_.size();
    // column j of the multiplication matrix is this * z^j
    QMat m(d, QVec(d, 0));
    for (size_t j = 0; j < d; ++j) {
        std::vector<Q> p(d + j, Q(0));
        for (size_t i = 0; i < d; ++i) p[i + j] = c_[i];
        auto r = reduce_mod(std::move(p), n_);
        for (size_t i = 0; i < d; ++i) m[i][j] = r[i];
    }
    QVec e(d, 0);
    e[0] = 1;
    return Cyc(n_, solve(m, e));
}

Cyc& Cyc::operator/=(const Cyc& o) { return *this *= o.inverse(); }

bool operator==(const Cyc& a, const Cyc& b) {
    long m = lcm_l(a.n_, b.n_);
    Cyc x = a.lifted(m), y = b.lifted(m);
    return x.c_ == y.c_;
}

Cyc Cyc::conj() const {
    if (n_ == 1) return *this;
    std::vector<Q> p(n_, Q(0));
    for (size_t j = 0; j < c_.size(); ++j) p[(n_ - static_cast<long>(j)) % n_] += c_[j];
    return Cyc(n_, reduce_mod(std::move(p), n_));
}

bool Cyc::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool Cyc::is_rational() const {
    for (size_t j = 1; j < c_.size(); ++j)
        if (c_[j] != 0) return false;
    return true;
}

Q Cyc::rational() const {
    if (!is_rational()) throw std::domain_error("Cyc: not rational");
    return c_[0];
}

std::complex<double> Cyc::to_complex() const {
    long double re = 0, im = 0;
    const long double tau = 6.283185307179586476925286766559L;
    for (size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        long double c = c_[j].get_d();
        long double a = tau * static_cast<long double>(j) / static_cast<long double>(n_);
        re += c * std::cos(a);
        im += c * std::sin(a);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

Cyc Cyc::minimized() const {
    if (n_ == 1 || is_rational()) return Cyc(c_[0]);
    for (long d = 1; d < n_; ++d) {
        if (n_ % d) continue;
        long fd = euler_phi(d);
        long step = n_ / d;
        size_t rows = c_.size();
        // columns: images of z_d^j in Q(z_n), last column the target
        QMat a(rows, QVec(fd + 1, 0));
        for (long j = 0; j < fd; ++j) {
            auto img = Cyc::root_of_unity(n_, j * step).lifted(n_);
            for (size_t i = 0; i < rows; ++i) a[i][j] = img.c_[i];
        }
        for (size_t i = 0; i < rows; ++i) a[i][fd] = c_[i];
        QMat coeffs(rows, QVec(fd, 0));
        for (size_t i = 0; i < rows; ++i)
            for (long j = 0; j < fd; ++j) coeffs[i][j] = a[i][j];
        if (rank(a) != rank(coeffs)) continue;
        // consistent: solve by elimination
        std::vector<size_t> piv;
        QMat m = a;
        size_t r = 0;
        for (long c = 0; c < fd && r < rows; ++c) {
            size_t p = r;
            while (p < rows && m[p][c] == 0) ++p;
            if (p == rows) continue;
            std::swap(m[p], m[r]);
            Q inv = 1 / m[r][c];
            for (auto& x : m[r]) x *= inv;
            for (size_t k = 0; k < rows; ++k) {
                if (k == r || m[k][c] == 0) continue;
                Q f = m[k][c];
                for (long j = 0; j <= fd; ++j) m[k][j] -= f * m[r][j];
            }
            piv.push_back(static_cast<size_t>(c));
            ++r;
        }
        std::vector<Q> x(fd, Q(0));
        for (size_t k = 0; k < piv.size(); ++k) x[piv[k]] = m[k][fd];
        return Cyc(d, std::move(x));
    }
    return *this;
}

std::string Cyc::str() const {
    Cyc m = minimized();
    std::ostringstream os;
    bool first = true;
    for (size_t j = 0; j < m.c_.size(); ++j) {
        if (m.c_[j] == 0) continue;
        Q c = m.c_[j];
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        Q a = abs(c);
        if (j == 0) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str() << "*";
            os << "z" << m.n_;
            if (j > 1) os << "^" << j;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

Value Value::operator-() const {
    Value r = *this;
    if (r.exact_) r.exact_ = -*r.exact_;
    r.numeric_ = -r.numeric_;
    return r;
}

Value& Value::operator+=(const Value& o) {
    if (exact_ && o.exact_) {
        *exact_ += *o.exact_;
        numeric_ = exact_->to_complex();
    } else {
        exact_.reset();
        numeric_ += o.numeric_;
    }
    return *this;
}

Value& Value::operator-=(const Value& o) { return *this += -o; }

Value& Value::operator*=(const Value& o) {
    if (exact_ && o.exact_) {
        *exact_ *= *o.exact_;
        numeric_ = exact_->to_complex();
    } else {
        exact_.reset();
        numeric_ *= o.numeric_;
    }
    return *this;
}

Value& Value::operator/=(const Value& o) {
    if (exact_ && o.exact_) {
        *exact_ /= *o.exact_;
        numeric_ = exact_->to_complex();
    } else {
        exact_.reset();
        numeric_ /= o.numeric_;
    }
    return *this;
}

Value Value::conj() const {
    Value r = *this;
    if (r.exact_) r.exact_ = r.exact_->conj();
    r.numeric_ = std::conj(r.numeric_);
    return r;
}

bool Value::is_zero(double tol) const {
    if (exact_) return exact_->is_zero();
    return std::abs(numeric_) <= tol;
}

bool Value::close_to(const Value& o, double tol) const {
    if (exact_ && o.exact_) return *exact_ == *o.exact_;
    return std::abs(numeric_ - o.numeric_) <= tol;
}

std::string Value::str() const {
    std::ostringstream os;
    os.precision(15);
    if (exact_) return exact_->str();
    os << numeric_.real();
    if (numeric_.imag() != 0) os << (numeric_.imag() < 0 ? "-" : "+") << std::abs(numeric_.imag()) << "i";
    return os.str();
}

}  // namespace stf
