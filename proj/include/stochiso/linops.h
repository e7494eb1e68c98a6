// Copyright 2026 The stochiso Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STOCHISO_LINOPS_H
#define STOCHISO_LINOPS_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace stochiso {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Relative cutoff below which eigen/singular values count as zero.
inline constexpr double kRankRelTol = 1e-9;
/// Asymmetry accepted (relative to max(1, |A|_max)) before a matrix is rejected as non-Hermitian.
inline constexpr double kHermitianIngestTol = 1e-9;
/// Tolerance on P^2 = P and on the {0,1} spectrum of a projector.
inline constexpr double kProjectorTol = 1e-9;

/// Dense row-major complex matrix.
class ComplexMat {
   public:
    ComplexMat() = default;
    ComplexMat(size_t rows, size_t cols);
    ComplexMat(size_t rows, size_t cols, std::vector<cplx> entries);

    static ComplexMat identity(size_t n);
    static ComplexMat from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
    static ComplexMat from_columns(std::span<const CVector> columns, size_t rows);
    static ComplexMat diag(std::span<const double> values);

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    bool is_square() const {
        return rows_ == cols_;
    }

    cplx &operator()(size_t r, size_t c) {
        return data_[r * cols_ + c];
    }
    const cplx &operator()(size_t r, size_t c) const {
        return data_[r * cols_ + c];
    }
    const std::vector<cplx> &entries() const {
        return data_;
    }

    CVector col(size_t c) const;
    void set_col(size_t c, const CVector &v);
    /// Columns [first, first + count) as a new matrix.
    ComplexMat col_block(size_t first, size_t count) const;
    /// Horizontal concatenation; row counts must agree.
    ComplexMat hcat(const ComplexMat &right) const;

    ComplexMat adjoint() const;
    ComplexMat transpose() const;
    ComplexMat conj() const;

    cplx trace() const;
    double max_abs() const;
    double frobenius_norm() const;
    bool all_finite() const;

    ComplexMat &operator+=(const ComplexMat &o);
    ComplexMat &operator-=(const ComplexMat &o);
    ComplexMat &operator*=(cplx s);

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMat operator+(ComplexMat a, const ComplexMat &b);
ComplexMat operator-(ComplexMat a, const ComplexMat &b);
ComplexMat operator*(const ComplexMat &a, const ComplexMat &b);
ComplexMat operator*(cplx s, ComplexMat a);
CVector operator*(const ComplexMat &a, const CVector &x);

double max_abs_diff(const ComplexMat &a, const ComplexMat &b);
ComplexMat kron(const ComplexMat &a, const ComplexMat &b);

/// <x|y>, conjugate-linear in the first argument.
cplx inner(const CVector &x, const CVector &y);
double norm(const CVector &x);
CVector normalized(CVector x);
/// |x><y|
ComplexMat outer(const CVector &x, const CVector &y);
/// Projector onto the ray of x (x need not be normalized).
ComplexMat ray_projector(const CVector &x);
CVector basis_vector(size_t dim, size_t index);

/// Complex Hermitian operator. Construction symmetrizes the input after
/// rejecting anything further than kHermitianIngestTol from Hermitian.
class HermOp {
   public:
    HermOp() = default;
    explicit HermOp(const ComplexMat &m, double tol = kHermitianIngestTol);

    static HermOp zero(size_t dim);
    static HermOp identity(size_t dim);
    static HermOp diag(std::span<const double> values);
    /// The pure state |x><x|/<x|x>.
    static HermOp pure(const CVector &x);

    size_t dim() const {
        return m_.rows();
    }
    const ComplexMat &mat() const {
        return m_;
    }
    double trace() const {
        return m_.trace().real();
    }

    HermOp operator+(const HermOp &o) const;
    HermOp operator-(const HermOp &o) const;
    HermOp operator*(double s) const;

   private:
    struct Trusted {};
    HermOp(ComplexMat m, Trusted) : m_(std::move(m)) {
    }

    ComplexMat m_;
};

/// Orthogonal projector, carried together with an orthonormal basis of its range.
class Projector {
   public:
    Projector() = default;
    /// Validates idempotence and spectrum; throws NotProjector otherwise.
    explicit Projector(const HermOp &p);

    /// Q Q* for a matrix Q with orthonormal columns (not re-checked).
    static Projector from_basis(ComplexMat orthonormal_columns);
    static Projector zero(size_t dim);
    static Projector identity(size_t dim);

    size_t dim() const {
        return op_.dim();
    }
    size_t rank() const {
        return basis_.cols();
    }
    const HermOp &op() const {
        return op_;
    }
    const ComplexMat &mat() const {
        return op_.mat();
    }
    /// d x rank, orthonormal columns spanning the range.
    const ComplexMat &basis() const {
        return basis_;
    }

    Projector complement() const;

   private:
    HermOp op_;
    ComplexMat basis_;
};

struct EigenSystem {
    /// Descending.
    std::vector<double> values;
    /// Orthonormal eigenvectors, column j belongs to values[j].
    ComplexMat vectors;
};

/// Zero-threshold for a spectrum whose largest absolute value is `largest`.
double rank_threshold(double largest);

/// Cyclic complex Jacobi eigensolver.
EigenSystem herm_eig(const HermOp &a);

/// Sum of absolute eigenvalues.
double trace_norm(const HermOp &a);

/// (a+, a-) with a = a+ - a-, both positive semidefinite with orthogonal ranges.
std::pair<HermOp, HermOp> pos_neg_parts(const HermOp &a);

/// Projector onto the range of a positive semidefinite operator.
Projector support_proj(const HermOp &a);

/// Projector onto the span of the union of the ranges.
Projector subspace_join(std::span<const Projector> ps);

/// Greedy pivoted Gram-Schmidt: returns `basis` extended by the directions of
/// `candidates` (columns) whose residual exceeds rel_tol times the largest
/// candidate norm. `basis` must have orthonormal columns (it may have none).
ComplexMat extend_orthonormal(const ComplexMat &basis, const ComplexMat &candidates, double rel_tol = kRankRelTol);

}  // namespace stochiso

#endif
