#pragma once

// Square banded matrix with LAPACK band storage, factorised once by
// dgbtrf (LU with partial pivoting) and reused for many right-hand sides.

#include <lapacke.h>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "interface_lab/errors.hpp"

namespace interface_lab {

class BandedMatrix {
public:
    BandedMatrix(std::size_t n, int lower, int upper)
        : n_(n), kl_(lower), ku_(upper), ldab_(2 * lower + upper + 1), ab_(n * static_cast<std::size_t>(ldab_), 0.0) {}

    std::size_t size() const noexcept { return n_; }

    /// Entry (i, j); |i - j| must lie inside the band.
    double& at(std::size_t i, std::size_t j) {
        const auto offset = static_cast<std::ptrdiff_t>(kl_ + ku_) + static_cast<std::ptrdiff_t>(i) -
                            static_cast<std::ptrdiff_t>(j);
        if (offset < kl_ || offset >= ldab_) throw std::out_of_range("banded entry outside the band");
        return ab_[j * static_cast<std::size_t>(ldab_) + static_cast<std::size_t>(offset)];
    }

    void factorize() {
        pivots_.assign(n_, 0);
        const lapack_int n = static_cast<lapack_int>(n_);
        const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl_, ku_, ab_.data(), ldab_, pivots_.data());
        if (info > 0) throw SingularSystemError("banded system is singular at pivot " + std::to_string(info));
        if (info < 0) throw std::invalid_argument("dgbtrf: bad argument " + std::to_string(-info));
        factored_ = true;
    }

    /// Overwrites rhs with the solution of A x = rhs.
    void solve_in_place(std::span<double> rhs) const {
        if (!factored_) throw std::logic_error("BandedMatrix::solve_in_place before factorize");
        const lapack_int n = static_cast<lapack_int>(n_);
        const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl_, ku_, 1, ab_.data(), ldab_,
                                               pivots_.data(), rhs.data(), n);
        if (info != 0) throw std::invalid_argument("dgbtrs: bad argument " + std::to_string(-info));
    }

private:
    std::size_t n_;
    int kl_;
    int ku_;
    int ldab_;
    std::vector<double> ab_;
    std::vector<lapack_int> pivots_;
    bool factored_ = false;
};

}  // namespace interface_lab
