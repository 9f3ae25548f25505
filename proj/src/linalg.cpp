#include "epiclust/linalg.hpp"

#include "epiclust/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace epiclust {

namespace {

constexpr double symmetry_tolerance = 1e-12;

double off_diagonal_norm(const Matrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) {
                sum += a(i, j) * a(i, j);
            }
        }
    }
    return std::sqrt(sum);
}

double frobenius_norm(const Matrix& a) {
    double sum = 0.0;
    for (double v : a.data()) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

// Zeroes a(p, q) with the rotation J^T A J, J = [c s; -s c] on (p, q).
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
    const double apq = a(p, q);
    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    double t = 0.0;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const std::size_t n = a.rows();

    for (std::size_t k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (std::size_t k = 0; k < n; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

} // namespace

SymmetricMatrix::SymmetricMatrix(Matrix entries) : entries_{std::move(entries)} {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw std::invalid_argument("SymmetricMatrix: needs a non-empty square matrix");
    }
    const std::size_t n = entries_.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double diff = std::abs(entries_(i, j) - entries_(j, i));
            if (!(diff < symmetry_tolerance)) {
                throw std::invalid_argument("SymmetricMatrix: entries (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") and (" + std::to_string(j) + "," +
                                            std::to_string(i) + ") differ");
            }
            entries_(j, i) = entries_(i, j);
        }
    }
}

EigenDecomposition jacobi_eigh(const SymmetricMatrix& input, double tol, int max_sweeps) {
    Matrix a = input.entries();
    const std::size_t n = a.rows();
    Matrix v = Matrix::identity(n);

    const double threshold = tol * frobenius_norm(a);
    int sweeps = 0;
    double off = off_diagonal_norm(a);
    while (off > threshold) {
        if (sweeps == max_sweeps) {
            throw ConvergenceError("jacobi_eigh: no convergence after " + std::to_string(max_sweeps) +
                                   " sweeps, off-diagonal norm " + std::to_string(off));
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) != 0.0) {
                    rotate(a, v, p, q);
                }
            }
        }
        ++sweeps;
        off = off_diagonal_norm(a);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&a](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

    EigenDecomposition out;
    out.sweeps = sweeps;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.eigenvalues[j] = a(src, src);
        // Sign convention: the largest-magnitude component is positive.
        std::size_t pivot = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (std::abs(v(i, src)) > std::abs(v(pivot, src))) {
                pivot = i;
            }
        }
        const double sign = v(pivot, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, j) = sign * v(i, src);
        }
    }
    return out;
}

} // namespace epiclust
