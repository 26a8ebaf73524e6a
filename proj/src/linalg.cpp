#include "spoofkit/linalg.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "spoofkit/errors.hpp"

namespace spoofkit {

namespace {

constexpr double kPivotTol = 1e-12;

void require(bool ok, const std::string& what) {
    if (!ok) throw DimensionError(what);
}

std::string dims(const Mat& m) {
    return std::to_string(m.rows) + "x" + std::to_string(m.cols);
}

} // namespace

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Mat Mat::diag(const Vec& d) {
    Mat m(d.dim(), d.dim());
    for (std::size_t i = 0; i < d.dim(); ++i) m.at(i, i) = d[i];
    return m;
}

Mat Mat::scaled_identity(std::size_t n, double s) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = s;
    return m;
}

Mat Mat::from_rows(std::size_t r, std::size_t c, std::initializer_list<double> entries) {
    require(entries.size() == r * c, "from_rows: entry count " + std::to_string(entries.size()) +
                                         " does not fill " + std::to_string(r) + "x" + std::to_string(c));
    Mat m(r, c);
    std::size_t i = 0;
    for (double v : entries) m.e[i++] = v;
    return m;
}

bool operator==(const Vec& a, const Vec& b) { return a.e == b.e; }
bool operator==(const Mat& a, const Mat& b) { return a.rows == b.rows && a.cols == b.cols && a.e == b.e; }

Vec operator+(const Vec& a, const Vec& b) {
    require(a.dim() == b.dim(), "vec add: dims " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    Vec r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    require(a.dim() == b.dim(), "vec sub: dims " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    Vec r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec operator*(double s, const Vec& v) {
    Vec r(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) r[i] = s * v[i];
    return r;
}

Vec operator-(const Vec& v) { return -1.0 * v; }

Mat operator+(const Mat& a, const Mat& b) {
    require(a.rows == b.rows && a.cols == b.cols, "mat add: dims " + dims(a) + " vs " + dims(b));
    Mat r(a.rows, a.cols);
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
}

Mat operator-(const Mat& a, const Mat& b) {
    require(a.rows == b.rows && a.cols == b.cols, "mat sub: dims " + dims(a) + " vs " + dims(b));
    Mat r(a.rows, a.cols);
    for (std::size_t i = 0; i < a.e.size(); ++i) r.e[i] = a.e[i] - b.e[i];
    return r;
}

Mat operator*(double s, const Mat& m) {
    Mat r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.e.size(); ++i) r.e[i] = s * m.e[i];
    return r;
}

Mat operator*(const Mat& a, const Mat& b) {
    require(a.cols == b.rows, "mat mul: dims " + dims(a) + " vs " + dims(b));
    Mat r(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    }
    return r;
}

Vec operator*(const Mat& m, const Vec& v) {
    require(m.cols == v.dim(), "mat-vec mul: dims " + dims(m) + " vs " + std::to_string(v.dim()));
    Vec r(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += m.at(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

Mat transpose(const Mat& m) {
    Mat r(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r.at(j, i) = m.at(i, j);
    return r;
}

Mat mat_inv(const Mat& m) {
    require(m.rows == m.cols, "mat_inv: matrix must be square, got " + dims(m));
    const std::size_t n = m.rows;
    Mat a = m;
    Mat inv = Mat::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(a.at(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double cand = std::fabs(a.at(r, col));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best < kPivotTol)
            throw SingularMatrixError("mat_inv: pivot " + std::to_string(best) + " below 1e-12 at column " +
                                      std::to_string(col));
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a.at(pivot, j), a.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        }
        const double p = a.at(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a.at(col, j) /= p;
            inv.at(col, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a.at(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a.at(r, j) -= f * a.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

double l1_norm(const Vec& v) {
    double s = 0.0;
    for (double x : v.e) s += std::fabs(x);
    return s;
}

double l2_norm_sq(const Vec& v) {
    double s = 0.0;
    for (double x : v.e) s += x * x;
    return s;
}

double linf_norm(const Vec& v) {
    double s = 0.0;
    for (double x : v.e) s = std::max(s, std::fabs(x));
    return s;
}

Mat symmetrize(const Mat& m) {
    require(m.rows == m.cols, "symmetrize: matrix must be square, got " + dims(m));
    Mat r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r.at(i, j) = 0.5 * (m.at(i, j) + m.at(j, i));
    return r;
}

double min_eig_sym2(const Mat& m) {
    require(m.rows == 2 && m.cols == 2, "min_eig_sym2: need 2x2, got " + dims(m));
    const double tr = m.at(0, 0) + m.at(1, 1);
    const double det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return 0.5 * (tr - disc);
}

Mat chol_psd(const Mat& m) {
    require(m.rows == m.cols, "chol_psd: matrix must be square, got " + dims(m));
    const std::size_t n = m.rows;
    Mat l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m.at(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k);
        if (d < -1e-9)
            throw SingularMatrixError("chol_psd: matrix is not positive semidefinite (diagonal residual " +
                                      std::to_string(d) + ")");
        if (d < kPivotTol) {
            // Semidefinite direction: leave the column zero.
            l.at(j, j) = 0.0;
            continue;
        }
        const double ljj = std::sqrt(d);
        l.at(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
            l.at(i, j) = s / ljj;
        }
    }
    return l;
}

bool all_finite(const Mat& m) {
    for (double x : m.e)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const Vec& v) {
    for (double x : v.e)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace spoofkit
