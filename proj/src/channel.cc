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

#include "stochiso/channel.h"

#include <cmath>
#include <set>
#include <string>

#include "stochiso/errors.h"

namespace stochiso {

namespace {

constexpr double kIsometryTol = 1e-9;
constexpr double kWeightSumTol = 1e-10;
constexpr double kGammaUnitaryTol = 1e-10;
constexpr double kEqualWeightTol = 1e-12;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

// ---------------------------------------------------------------------------
// RealMat

RealMat::RealMat(size_t rows, size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw Error(ErrorCode::DimMismatch, "entry count does not match shape");
    }
}

RealMat RealMat::identity(size_t n) {
    RealMat m(n, n);
    for (size_t i = 0; i < n; i++) {
        m(i, i) = 1;
    }
    return m;
}

RealMat RealMat::transpose() const {
    RealMat m(cols_, rows_);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < cols_; c++) {
            m(c, r) = (*this)(r, c);
        }
    }
    return m;
}

RealMat RealMat::scaled(double s) const {
    RealMat m = *this;
    for (auto &x : m.data_) {
        x *= s;
    }
    return m;
}

double RealMat::max_abs() const {
    double m = 0;
    for (double x : data_) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

RealMat operator*(const RealMat &a, const RealMat &b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimMismatch, "real matrix product: inner dimensions differ");
    }
    RealMat m(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); i++) {
        for (size_t k = 0; k < a.cols(); k++) {
            double aik = a(i, k);
            if (aik == 0) {
                continue;
            }
            for (size_t j = 0; j < b.cols(); j++) {
                m(i, j) += aik * b(k, j);
            }
        }
    }
    return m;
}

std::vector<double> operator*(const RealMat &a, std::span<const double> x) {
    if (a.cols() != x.size()) {
        throw Error(ErrorCode::DimMismatch, "real matrix-vector product: length mismatch");
    }
    std::vector<double> y(a.rows());
    for (size_t i = 0; i < a.rows(); i++) {
        double s = 0;
        for (size_t j = 0; j < a.cols(); j++) {
            s += a(i, j) * x[j];
        }
        y[i] = s;
    }
    return y;
}

double max_abs_diff(const RealMat &a, const RealMat &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimMismatch, "max_abs_diff: shapes differ");
    }
    double m = 0;
    for (size_t i = 0; i < a.entries().size(); i++) {
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return m;
}

// ---------------------------------------------------------------------------
// HermBasis

HermBasis::HermBasis(size_t d) : d_(d) {
    if (d == 0) {
        throw Error(ErrorCode::InvalidArgument, "basis dimension must be at least 1");
    }
    elements_.reserve(d * d);
    for (size_t i = 0; i < d; i++) {
        ComplexMat e(d, d);
        e(i, i) = 1;
        elements_.emplace_back(e);
    }
    for (size_t i = 0; i < d; i++) {
        for (size_t j = i + 1; j < d; j++) {
            ComplexMat s(d, d);
            s(i, j) = kInvSqrt2;
            s(j, i) = kInvSqrt2;
            elements_.emplace_back(s);
            ComplexMat a(d, d);
            a(i, j) = cplx(0, -kInvSqrt2);
            a(j, i) = cplx(0, kInvSqrt2);
            elements_.emplace_back(a);
        }
    }
}

std::vector<double> HermBasis::coords(const HermOp &a) const {
    if (a.dim() != d_) {
        throw Error(ErrorCode::DimMismatch, "coords: operator dimension differs from basis dimension");
    }
    const double sqrt2 = std::sqrt(2.0);
    std::vector<double> c(d_ * d_);
    size_t k = 0;
    for (size_t i = 0; i < d_; i++) {
        c[k++] = a.mat()(i, i).real();
    }
    for (size_t i = 0; i < d_; i++) {
        for (size_t j = i + 1; j < d_; j++) {
            cplx x = a.mat()(i, j);
            c[k++] = sqrt2 * x.real();
            c[k++] = -sqrt2 * x.imag();
        }
    }
    return c;
}

HermOp HermBasis::from_coords(std::span<const double> c) const {
    if (c.size() != d_ * d_) {
        throw Error(ErrorCode::DimMismatch, "from_coords: coordinate count differs from d^2");
    }
    ComplexMat m(d_, d_);
    size_t k = 0;
    for (size_t i = 0; i < d_; i++) {
        m(i, i) = c[k++];
    }
    for (size_t i = 0; i < d_; i++) {
        for (size_t j = i + 1; j < d_; j++) {
            double s = c[k++];
            double a = c[k++];
            m(i, j) = cplx(s, -a) * kInvSqrt2;
            m(j, i) = std::conj(m(i, j));
        }
    }
    return HermOp(m);
}

HermBasis herm_basis(size_t d) {
    return HermBasis(d);
}

// ---------------------------------------------------------------------------
// ChannelMatrix

ChannelMatrix::ChannelMatrix(size_t dim_in, size_t dim_out, RealMat mat)
    : dim_in_(dim_in), dim_out_(dim_out), mat_(std::move(mat)) {
    if (dim_in == 0 || dim_out == 0) {
        throw Error(ErrorCode::InvalidArgument, "channel dimensions must be positive");
    }
    if (mat_.rows() != dim_out * dim_out || mat_.cols() != dim_in * dim_in) {
        throw Error(ErrorCode::DimMismatch, "channel matrix must be dim_out^2 x dim_in^2");
    }
    for (double x : mat_.entries()) {
        if (!std::isfinite(x)) {
            throw Error(ErrorCode::InvalidArgument, "channel matrix has a non-finite entry");
        }
    }
}

ChannelMatrix ChannelMatrix::identity(size_t d) {
    return ChannelMatrix(d, d, RealMat::identity(d * d));
}

ChannelMatrix ChannelMatrix::from_action(size_t dim_in, size_t dim_out,
                                         const std::function<ComplexMat(const ComplexMat &)> &action) {
    HermBasis in(dim_in);
    HermBasis out(dim_out);
    RealMat m(dim_out * dim_out, dim_in * dim_in);
    for (size_t b = 0; b < in.size(); b++) {
        std::vector<double> c = out.coords(HermOp(action(in[b].mat())));
        for (size_t a = 0; a < c.size(); a++) {
            m(a, b) = c[a];
        }
    }
    return ChannelMatrix(dim_in, dim_out, std::move(m));
}

// ---------------------------------------------------------------------------
// Components and forms

std::string_view kind_name(Kind kind) {
    return kind == Kind::Unitary ? "unitary" : "antiunitary";
}

IsometryComponent::IsometryComponent(Kind kind, ComplexMat v) : kind_(kind), v_(std::move(v)) {
    if (v_.rows() == 0 || v_.cols() == 0 || v_.rows() < v_.cols()) {
        throw Error(ErrorCode::NotIsometric, "isometry must be a tall non-empty matrix");
    }
    double defect = max_abs_diff(v_.adjoint() * v_, ComplexMat::identity(v_.cols()));
    if (defect > kIsometryTol) {
        throw Error(ErrorCode::NotIsometric, "|v*v - I|_max = " + std::to_string(defect));
    }
}

ComplexMat IsometryComponent::act(const ComplexMat &x) const {
    if (x.rows() != dim_in() || x.cols() != dim_in()) {
        throw Error(ErrorCode::DimMismatch, "component input has the wrong dimension");
    }
    const ComplexMat &in = kind_ == Kind::Unitary ? x : x.transpose();
    return v_ * in * v_.adjoint();
}

ComplexMat IsometryComponent::range_projector() const {
    return v_ * v_.adjoint();
}

MixedIsometryForm::MixedIsometryForm(size_t dim_in, size_t dim_out, std::vector<WeightedComponent> components)
    : dim_in_(dim_in), dim_out_(dim_out), components_(std::move(components)) {
    if (components_.empty()) {
        throw Error(ErrorCode::WeightsNotNormalized, "form has no components");
    }
    double total = 0;
    for (const auto &c : components_) {
        if (c.component.dim_in() != dim_in || c.component.dim_out() != dim_out) {
            throw Error(ErrorCode::DimMismatch, "component shape differs from form dimensions");
        }
        if (!(c.weight > 0 && c.weight <= 1 + kWeightSumTol)) {
            throw Error(ErrorCode::WeightsNotNormalized, "weight " + std::to_string(c.weight) + " outside (0,1]");
        }
        total += c.weight;
    }
    if (std::abs(total - 1) > kWeightSumTol) {
        throw Error(ErrorCode::WeightsNotNormalized, "weights sum to " + std::to_string(total));
    }
    for (size_t k = 0; k < components_.size(); k++) {
        for (size_t l = k + 1; l < components_.size(); l++) {
            double overlap = (components_[k].component.v().adjoint() * components_[l].component.v()).max_abs();
            if (overlap > kIsometryTol) {
                throw Error(ErrorCode::RangesNotOrthogonal,
                            "components " + std::to_string(k) + " and " + std::to_string(l) + " overlap by " +
                                std::to_string(overlap));
            }
        }
    }
}

ComplexMat MixedIsometryForm::unused_projector() const {
    ComplexMat p = ComplexMat::identity(dim_out_);
    for (const auto &c : components_) {
        p -= c.component.range_projector();
    }
    return p;
}

// ---------------------------------------------------------------------------
// Operations

ChannelMatrix from_form(const MixedIsometryForm &form) {
    return ChannelMatrix::from_action(form.dim_in(), form.dim_out(), [&](const ComplexMat &x) {
        ComplexMat y(form.dim_out(), form.dim_out());
        for (const auto &c : form.components()) {
            y += cplx(c.weight) * c.component.act(x);
        }
        return y;
    });
}

HermOp apply(const ChannelMatrix &r, const HermOp &rho) {
    if (rho.dim() != r.dim_in()) {
        throw Error(ErrorCode::DimMismatch, "state dimension " + std::to_string(rho.dim()) +
                                                " differs from channel input dimension " +
                                                std::to_string(r.dim_in()));
    }
    std::vector<double> c = HermBasis(r.dim_in()).coords(rho);
    return HermBasis(r.dim_out()).from_coords(r.mat() * std::span<const double>(c));
}

ComplexMat apply_complex(const ChannelMatrix &r, const ComplexMat &a) {
    ComplexMat ad = a.adjoint();
    HermOp re(cplx(0.5) * (a + ad));
    HermOp im(cplx(0, -0.5) * (a - ad));
    return apply(r, re).mat() + cplx(0, 1) * apply(r, im).mat();
}

ChannelMatrix dual(const ChannelMatrix &r) {
    return ChannelMatrix(r.dim_out(), r.dim_in(), r.mat().transpose());
}

ChannelMatrix compose(const ChannelMatrix &r2, const ChannelMatrix &r1) {
    if (r1.dim_out() != r2.dim_in()) {
        throw Error(ErrorCode::DimMismatch, "compose: output of the first map does not feed the second");
    }
    return ChannelMatrix(r1.dim_in(), r2.dim_out(), r2.mat() * r1.mat());
}

HermOp choi(const ChannelMatrix &r) {
    size_t d = r.dim_in();
    size_t dt = r.dim_out();
    ComplexMat c(dt * d, dt * d);
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            ComplexMat eij(d, d);
            eij(i, j) = 1;
            c += kron(apply_complex(r, eij), eij);
        }
    }
    return HermOp(c);
}

ChannelMatrix reversal(const MixedIsometryForm &form) {
    size_t d = form.dim_in();
    ComplexMat p0 = form.unused_projector();
    return ChannelMatrix::from_action(form.dim_out(), d, [&](const ComplexMat &x) {
        ComplexMat y(d, d);
        for (const auto &c : form.components()) {
            const ComplexMat &v = c.component.v();
            ComplexMat back = v.adjoint() * x * v;
            y += c.component.kind() == Kind::Unitary ? back : back.transpose();
        }
        cplx lost = (p0 * x * p0).trace();
        for (size_t i = 0; i < d; i++) {
            y(i, i) += lost / static_cast<double>(d);
        }
        return y;
    });
}

ComplexMat hs_lift(const MixedIsometryForm &form, const ComplexMat &tau) {
    if (tau.rows() != form.dim_in() || tau.cols() != form.dim_in()) {
        throw Error(ErrorCode::DimMismatch, "hs_lift: argument must be dim_in x dim_in");
    }
    ComplexMat y(form.dim_out(), form.dim_out());
    for (const auto &c : form.components()) {
        y += cplx(std::sqrt(c.weight)) * c.component.act(tau);
    }
    return y;
}

HermOp jordan_lift(const MixedIsometryForm &form, const HermOp &a) {
    if (a.dim() != form.dim_in()) {
        throw Error(ErrorCode::DimMismatch, "jordan_lift: argument must be dim_in x dim_in");
    }
    ComplexMat y(form.dim_out(), form.dim_out());
    for (const auto &c : form.components()) {
        y += c.component.act(a.mat());
    }
    return HermOp(y);
}

MixedIsometryForm gauge_transform(const MixedIsometryForm &form, const ComplexMat &gamma,
                                  std::span<const size_t> block) {
    size_t m = block.size();
    if (m == 0 || gamma.rows() != m || gamma.cols() != m) {
        throw Error(ErrorCode::DimMismatch, "gamma must be m x m for a block of m components");
    }
    std::set<size_t> seen;
    for (size_t idx : block) {
        if (idx >= form.size() || !seen.insert(idx).second) {
            throw Error(ErrorCode::InvalidArgument, "block indices must be distinct component indices");
        }
    }
    const auto &first = form.components()[block[0]];
    for (size_t idx : block) {
        const auto &c = form.components()[idx];
        if (c.component.kind() != first.component.kind() || std::abs(c.weight - first.weight) > kEqualWeightTol) {
            throw Error(ErrorCode::BlockNotHomogeneous, "gauge block mixes weights or kinds");
        }
    }
    double defect = max_abs_diff(gamma.adjoint() * gamma, ComplexMat::identity(m));
    if (defect > kGammaUnitaryTol) {
        throw Error(ErrorCode::GammaNotUnitary, "|gamma* gamma - I|_max = " + std::to_string(defect));
    }

    std::vector<WeightedComponent> out = form.components();
    for (size_t k = 0; k < m; k++) {
        ComplexMat v(form.dim_out(), form.dim_in());
        for (size_t l = 0; l < m; l++) {
            v += gamma(k, l) * form.components()[block[l]].component.v();
        }
        out[block[k]] = WeightedComponent{first.weight, IsometryComponent(first.component.kind(), std::move(v))};
    }
    return MixedIsometryForm(form.dim_in(), form.dim_out(), std::move(out));
}

ChannelMatrix unitary_channel(const ComplexMat &u) {
    IsometryComponent c(Kind::Unitary, u);
    return ChannelMatrix::from_action(c.dim_in(), c.dim_out(), [&](const ComplexMat &x) { return c.act(x); });
}

ChannelMatrix transpose_channel(size_t d) {
    return ChannelMatrix::from_action(d, d, [](const ComplexMat &x) { return x.transpose(); });
}

}  // namespace stochiso
