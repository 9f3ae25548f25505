#pragma once

#include "epiclust/matrix.hpp"

#include <cstddef>
#include <vector>

namespace epiclust {

/// Square matrix whose entries are symmetric to within 1e-12.
class SymmetricMatrix {
public:
    /// Throws std::invalid_argument if `entries` is not square or not symmetric.
    explicit SymmetricMatrix(Matrix entries);

    std::size_t order() const noexcept { return entries_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
    const Matrix& entries() const noexcept { return entries_; }

private:
    Matrix entries_;
};

struct EigenDecomposition {
    /// Ascending.
    std::vector<double> eigenvalues;
    /// Column j is the unit eigenvector of eigenvalues[j].
    Matrix eigenvectors;
    int sweeps = 0;
};

/// Cyclic Jacobi eigensolver. Stops once the off-diagonal Frobenius norm drops
/// below `tol` times the Frobenius norm of the input; throws ConvergenceError
/// (with the residual) if that does not happen within `max_sweeps`.
EigenDecomposition jacobi_eigh(const SymmetricMatrix& a, double tol = 1e-12, int max_sweeps = 100);

} // namespace epiclust
