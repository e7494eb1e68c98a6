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

#ifndef STOCHISO_CHANNEL_H
#define STOCHISO_CHANNEL_H

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "stochiso/linops.h"

namespace stochiso {

/// Dense row-major real matrix.
class RealMat {
   public:
    RealMat() = default;
    RealMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    }
    RealMat(size_t rows, size_t cols, std::vector<double> entries);

    static RealMat identity(size_t n);

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    double &operator()(size_t r, size_t c) {
        return data_[r * cols_ + c];
    }
    double operator()(size_t r, size_t c) const {
        return data_[r * cols_ + c];
    }
    const std::vector<double> &entries() const {
        return data_;
    }

    RealMat transpose() const;
    RealMat scaled(double s) const;
    double max_abs() const;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<double> data_;
};

RealMat operator*(const RealMat &a, const RealMat &b);
std::vector<double> operator*(const RealMat &a, std::span<const double> x);
double max_abs_diff(const RealMat &a, const RealMat &b);

/// Hilbert-Schmidt orthonormal basis of the d x d Hermitian matrices.
///
/// Order: E_00 .. E_{d-1,d-1}, then for each pair i < j (lexicographic) the
/// symmetric element (E_ij + E_ji)/sqrt2 followed by the antisymmetric
/// element (-i E_ij + i E_ji)/sqrt2. Every serialized channel matrix uses
/// this order.
class HermBasis {
   public:
    explicit HermBasis(size_t d);

    size_t dim() const {
        return d_;
    }
    size_t size() const {
        return d_ * d_;
    }
    const std::vector<HermOp> &elements() const {
        return elements_;
    }
    const HermOp &operator[](size_t a) const {
        return elements_[a];
    }

    /// tr[B_a A] for every a.
    std::vector<double> coords(const HermOp &a) const;
    HermOp from_coords(std::span<const double> c) const;

   private:
    size_t d_;
    std::vector<HermOp> elements_;
};

HermBasis herm_basis(size_t d);

/// Real-linear map between Hermitian operator spaces, stored over the
/// canonical bases: mat[a][b] = tr[B~_a T(B_b)].
class ChannelMatrix {
   public:
    ChannelMatrix(size_t dim_in, size_t dim_out, RealMat mat);

    static ChannelMatrix identity(size_t d);
    /// Tabulates `action` on the input basis. The action must return Hermitian matrices.
    static ChannelMatrix from_action(size_t dim_in, size_t dim_out,
                                     const std::function<ComplexMat(const ComplexMat &)> &action);

    size_t dim_in() const {
        return dim_in_;
    }
    size_t dim_out() const {
        return dim_out_;
    }
    const RealMat &mat() const {
        return mat_;
    }

   private:
    size_t dim_in_;
    size_t dim_out_;
    RealMat mat_;
};

enum class Kind { Unitary, Antiunitary };

std::string_view kind_name(Kind kind);

/// A unitary (rho -> v rho v*) or antiunitary (rho -> v rho^T v*) isometric
/// embedding. The transpose is taken in the standard basis.
class IsometryComponent {
   public:
    /// Throws NotIsometric unless v*v = I to 1e-9.
    IsometryComponent(Kind kind, ComplexMat v);

    Kind kind() const {
        return kind_;
    }
    const ComplexMat &v() const {
        return v_;
    }
    size_t dim_in() const {
        return v_.cols();
    }
    size_t dim_out() const {
        return v_.rows();
    }

    /// Complex-linear action on arbitrary d x d matrices.
    ComplexMat act(const ComplexMat &x) const;
    /// Projector onto the range of v.
    ComplexMat range_projector() const;

   private:
    Kind kind_;
    ComplexMat v_;
};

struct WeightedComponent {
    double weight;
    IsometryComponent component;
};

/// Convex combination of isometric embeddings with mutually orthogonal ranges.
class MixedIsometryForm {
   public:
    /// Throws WeightsNotNormalized, RangesNotOrthogonal or DimMismatch.
    MixedIsometryForm(size_t dim_in, size_t dim_out, std::vector<WeightedComponent> components);

    size_t dim_in() const {
        return dim_in_;
    }
    size_t dim_out() const {
        return dim_out_;
    }
    const std::vector<WeightedComponent> &components() const {
        return components_;
    }
    size_t size() const {
        return components_.size();
    }

    /// Projector onto the complement of all component ranges.
    ComplexMat unused_projector() const;

   private:
    size_t dim_in_;
    size_t dim_out_;
    std::vector<WeightedComponent> components_;
};

ChannelMatrix from_form(const MixedIsometryForm &form);

HermOp apply(const ChannelMatrix &r, const HermOp &rho);
/// The unique complex-linear extension: T(A1) + i T(A2) for A = A1 + i A2.
ComplexMat apply_complex(const ChannelMatrix &r, const ComplexMat &a);

ChannelMatrix dual(const ChannelMatrix &r);
/// r2 after r1.
ChannelMatrix compose(const ChannelMatrix &r2, const ChannelMatrix &r1);

/// Sum_ij T(E_ij) (x) E_ij, output factor first.
HermOp choi(const ChannelMatrix &r);

/// Left inverse of from_form(form) on its range, completed to a stochastic
/// map on the whole output space: mass outside every component range is
/// sent to the maximally mixed input state.
ChannelMatrix reversal(const MixedIsometryForm &form);

/// Sum_k sqrt(w_k) T_k(tau); preserves the Frobenius norm.
ComplexMat hs_lift(const MixedIsometryForm &form, const ComplexMat &tau);

/// Sum_k T_k(a) without weights.
HermOp jordan_lift(const MixedIsometryForm &form, const HermOp &a);

/// Remixes the components listed in `block` (equal weight, equal kind) as
/// v'_k = Sum_l gamma_kl v_l. The channel is unchanged.
MixedIsometryForm gauge_transform(const MixedIsometryForm &form, const ComplexMat &gamma,
                                  std::span<const size_t> block);

ChannelMatrix unitary_channel(const ComplexMat &u);
ChannelMatrix transpose_channel(size_t d);

}  // namespace stochiso

#endif
