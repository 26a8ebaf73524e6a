#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace spoofkit {

// Dense column vector.
struct Vec {
    std::vector<double> e;

    Vec() = default;
    explicit Vec(std::size_t n, double fill = 0.0) : e(n, fill) {}
    Vec(std::initializer_list<double> init) : e(init) {}

    std::size_t dim() const { return e.size(); }
    double& operator[](std::size_t i) { return e[i]; }
    double operator[](std::size_t i) const { return e[i]; }

    static Vec zeros(std::size_t n) { return Vec(n); }
};

// Dense row-major matrix.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> e;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), e(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return e[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return e[r * cols + c]; }

    static Mat identity(std::size_t n);
    static Mat zeros(std::size_t r, std::size_t c) { return Mat(r, c); }
    static Mat diag(const Vec& d);
    // Row-major entries; throws DimensionError if the count does not match.
    static Mat from_rows(std::size_t r, std::size_t c, std::initializer_list<double> entries);
    static Mat scaled_identity(std::size_t n, double s);
};

bool operator==(const Vec& a, const Vec& b);
bool operator==(const Mat& a, const Mat& b);

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& v);
Vec operator-(const Vec& v);

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& m);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& m, const Vec& v);

Mat transpose(const Mat& m);

// Inverse by Gauss-Jordan elimination with partial pivoting.
// Throws SingularMatrixError when the best available pivot is below 1e-12.
Mat mat_inv(const Mat& m);

double l1_norm(const Vec& v);
double l2_norm_sq(const Vec& v);
double linf_norm(const Vec& v);

// (M + M^T)/2; used to keep covariance updates symmetric.
Mat symmetrize(const Mat& m);

// Smallest eigenvalue of a symmetric 2x2 matrix, closed form.
double min_eig_sym2(const Mat& m);

// Lower-triangular L with L L^T = M for symmetric positive semidefinite M.
// Pivots below 1e-12 are treated as exact zeros so PSD-singular inputs work.
Mat chol_psd(const Mat& m);

bool all_finite(const Mat& m);
bool all_finite(const Vec& v);

} // namespace spoofkit
