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

#include "stochiso/linops.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stochiso/errors.h"

namespace stochiso {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiRelTol = 1e-12;
// Eigenvalues closer than this (relative to the spectral radius) form one cluster.
constexpr double kDegenerateRelTol = 1e-10;

void require_same_shape(const ComplexMat &a, const ComplexMat &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimMismatch,
                    std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                        std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
}

double offdiag_frobenius(const ComplexMat &a) {
    double s = 0;
    for (size_t i = 0; i < a.rows(); i++) {
        for (size_t j = 0; j < a.cols(); j++) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

// Rotates the first entry with non-negligible magnitude onto the positive real axis.
void normalize_phase(CVector &v) {
    double scale = 0;
    for (const auto &x : v) {
        scale = std::max(scale, std::abs(x));
    }
    for (const auto &x : v) {
        if (std::abs(x) > 1e-10 * scale) {
            cplx phase = std::conj(x) / std::abs(x);
            for (auto &y : v) {
                y *= phase;
            }
            return;
        }
    }
}

void orthonormalize_block(std::vector<CVector> &vs) {
    for (size_t i = 0; i < vs.size(); i++) {
        for (int pass = 0; pass < 2; pass++) {
            for (size_t j = 0; j < i; j++) {
                cplx c = inner(vs[j], vs[i]);
                for (size_t k = 0; k < vs[i].size(); k++) {
                    vs[i][k] -= c * vs[j][k];
                }
            }
        }
        vs[i] = normalized(std::move(vs[i]));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMat

ComplexMat::ComplexMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
}

ComplexMat::ComplexMat(size_t rows, size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw Error(ErrorCode::DimMismatch, "entry count does not match shape");
    }
}

ComplexMat ComplexMat::identity(size_t n) {
    ComplexMat m(n, n);
    for (size_t i = 0; i < n; i++) {
        m(i, i) = 1;
    }
    return m;
}

ComplexMat ComplexMat::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    size_t r = rows.size();
    size_t c = r ? rows.begin()->size() : 0;
    std::vector<cplx> data;
    data.reserve(r * c);
    for (const auto &row : rows) {
        if (row.size() != c) {
            throw Error(ErrorCode::DimMismatch, "ragged rows");
        }
        data.insert(data.end(), row.begin(), row.end());
    }
    return ComplexMat(r, c, std::move(data));
}

ComplexMat ComplexMat::from_columns(std::span<const CVector> columns, size_t rows) {
    ComplexMat m(rows, columns.size());
    for (size_t j = 0; j < columns.size(); j++) {
        m.set_col(j, columns[j]);
    }
    return m;
}

ComplexMat ComplexMat::diag(std::span<const double> values) {
    ComplexMat m(values.size(), values.size());
    for (size_t i = 0; i < values.size(); i++) {
        m(i, i) = values[i];
    }
    return m;
}

CVector ComplexMat::col(size_t c) const {
    CVector v(rows_);
    for (size_t r = 0; r < rows_; r++) {
        v[r] = (*this)(r, c);
    }
    return v;
}

void ComplexMat::set_col(size_t c, const CVector &v) {
    if (v.size() != rows_) {
        throw Error(ErrorCode::DimMismatch, "column length does not match row count");
    }
    for (size_t r = 0; r < rows_; r++) {
        (*this)(r, c) = v[r];
    }
}

ComplexMat ComplexMat::col_block(size_t first, size_t count) const {
    ComplexMat m(rows_, count);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < count; c++) {
            m(r, c) = (*this)(r, first + c);
        }
    }
    return m;
}

ComplexMat ComplexMat::hcat(const ComplexMat &right) const {
    if (cols_ == 0) {
        return right;
    }
    if (right.cols_ == 0) {
        return *this;
    }
    if (rows_ != right.rows_) {
        throw Error(ErrorCode::DimMismatch, "hcat: row counts differ");
    }
    ComplexMat m(rows_, cols_ + right.cols_);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < cols_; c++) {
            m(r, c) = (*this)(r, c);
        }
        for (size_t c = 0; c < right.cols_; c++) {
            m(r, cols_ + c) = right(r, c);
        }
    }
    return m;
}

ComplexMat ComplexMat::adjoint() const {
    ComplexMat m(cols_, rows_);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < cols_; c++) {
            m(c, r) = std::conj((*this)(r, c));
        }
    }
    return m;
}

ComplexMat ComplexMat::transpose() const {
    ComplexMat m(cols_, rows_);
    for (size_t r = 0; r < rows_; r++) {
        for (size_t c = 0; c < cols_; c++) {
            m(c, r) = (*this)(r, c);
        }
    }
    return m;
}

ComplexMat ComplexMat::conj() const {
    ComplexMat m = *this;
    for (auto &x : m.data_) {
        x = std::conj(x);
    }
    return m;
}

cplx ComplexMat::trace() const {
    cplx t = 0;
    for (size_t i = 0; i < std::min(rows_, cols_); i++) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMat::max_abs() const {
    double m = 0;
    for (const auto &x : data_) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double ComplexMat::frobenius_norm() const {
    double s = 0;
    for (const auto &x : data_) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

bool ComplexMat::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx &x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

ComplexMat &ComplexMat::operator+=(const ComplexMat &o) {
    require_same_shape(*this, o, "operator+");
    for (size_t i = 0; i < data_.size(); i++) {
        data_[i] += o.data_[i];
    }
    return *this;
}

ComplexMat &ComplexMat::operator-=(const ComplexMat &o) {
    require_same_shape(*this, o, "operator-");
    for (size_t i = 0; i < data_.size(); i++) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

ComplexMat &ComplexMat::operator*=(cplx s) {
    for (auto &x : data_) {
        x *= s;
    }
    return *this;
}

ComplexMat operator+(ComplexMat a, const ComplexMat &b) {
    a += b;
    return a;
}

ComplexMat operator-(ComplexMat a, const ComplexMat &b) {
    a -= b;
    return a;
}

ComplexMat operator*(const ComplexMat &a, const ComplexMat &b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimMismatch, "matrix product: inner dimensions differ");
    }
    ComplexMat m(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); i++) {
        for (size_t k = 0; k < a.cols(); k++) {
            cplx aik = a(i, k);
            if (aik == cplx(0)) {
                continue;
            }
            for (size_t j = 0; j < b.cols(); j++) {
                m(i, j) += aik * b(k, j);
            }
        }
    }
    return m;
}

ComplexMat operator*(cplx s, ComplexMat a) {
    a *= s;
    return a;
}

CVector operator*(const ComplexMat &a, const CVector &x) {
    if (a.cols() != x.size()) {
        throw Error(ErrorCode::DimMismatch, "matrix-vector product: length mismatch");
    }
    CVector y(a.rows());
    for (size_t i = 0; i < a.rows(); i++) {
        cplx s = 0;
        for (size_t j = 0; j < a.cols(); j++) {
            s += a(i, j) * x[j];
        }
        y[i] = s;
    }
    return y;
}

double max_abs_diff(const ComplexMat &a, const ComplexMat &b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0;
    for (size_t i = 0; i < a.entries().size(); i++) {
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return m;
}

ComplexMat kron(const ComplexMat &a, const ComplexMat &b) {
    ComplexMat m(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i = 0; i < a.rows(); i++) {
        for (size_t j = 0; j < a.cols(); j++) {
            for (size_t k = 0; k < b.rows(); k++) {
                for (size_t l = 0; l < b.cols(); l++) {
                    m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return m;
}

cplx inner(const CVector &x, const CVector &y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DimMismatch, "inner product: length mismatch");
    }
    cplx s = 0;
    for (size_t i = 0; i < x.size(); i++) {
        s += std::conj(x[i]) * y[i];
    }
    return s;
}

double norm(const CVector &x) {
    double s = 0;
    for (const auto &v : x) {
        s += std::norm(v);
    }
    return std::sqrt(s);
}

CVector normalized(CVector x) {
    double n = norm(x);
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "cannot normalize the zero vector");
    }
    for (auto &v : x) {
        v /= n;
    }
    return x;
}

ComplexMat outer(const CVector &x, const CVector &y) {
    ComplexMat m(x.size(), y.size());
    for (size_t i = 0; i < x.size(); i++) {
        for (size_t j = 0; j < y.size(); j++) {
            m(i, j) = x[i] * std::conj(y[j]);
        }
    }
    return m;
}

ComplexMat ray_projector(const CVector &x) {
    CVector u = normalized(x);
    return outer(u, u);
}

CVector basis_vector(size_t dim, size_t index) {
    CVector e(dim);
    e.at(index) = 1;
    return e;
}

// ---------------------------------------------------------------------------
// HermOp

HermOp::HermOp(const ComplexMat &m, double tol) {
    if (!m.is_square() || m.rows() == 0) {
        throw Error(ErrorCode::DimMismatch, "Hermitian operator must be square and non-empty");
    }
    if (!m.all_finite()) {
        throw Error(ErrorCode::InvalidArgument, "non-finite entry");
    }
    double asym = max_abs_diff(m, m.adjoint());
    if (asym > tol * std::max(1.0, m.max_abs())) {
        throw Error(ErrorCode::NotHermitian, "asymmetry " + std::to_string(asym));
    }
    size_t n = m.rows();
    m_ = ComplexMat(n, n);
    for (size_t i = 0; i < n; i++) {
        m_(i, i) = m(i, i).real();
        for (size_t j = i + 1; j < n; j++) {
            cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m_(i, j) = v;
            m_(j, i) = std::conj(v);
        }
    }
}

HermOp HermOp::zero(size_t dim) {
    return HermOp(ComplexMat(dim, dim), Trusted{});
}

HermOp HermOp::identity(size_t dim) {
    return HermOp(ComplexMat::identity(dim), Trusted{});
}

HermOp HermOp::diag(std::span<const double> values) {
    return HermOp(ComplexMat::diag(values), Trusted{});
}

HermOp HermOp::pure(const CVector &x) {
    return HermOp(ray_projector(x));
}

HermOp HermOp::operator+(const HermOp &o) const {
    return HermOp(m_ + o.m_, Trusted{});
}

HermOp HermOp::operator-(const HermOp &o) const {
    return HermOp(m_ - o.m_, Trusted{});
}

HermOp HermOp::operator*(double s) const {
    return HermOp(cplx(s) * m_, Trusted{});
}

// ---------------------------------------------------------------------------
// Projector

Projector::Projector(const HermOp &p) : op_(p) {
    double idem = max_abs_diff(p.mat() * p.mat(), p.mat());
    if (idem > kProjectorTol) {
        throw Error(ErrorCode::NotProjector, "|P^2 - P|_max = " + std::to_string(idem));
    }
    EigenSystem es = herm_eig(p);
    std::vector<CVector> cols;
    for (size_t j = 0; j < es.values.size(); j++) {
        double v = es.values[j];
        if (std::abs(v) > kProjectorTol && std::abs(v - 1) > kProjectorTol) {
            throw Error(ErrorCode::NotProjector, "eigenvalue " + std::to_string(v) + " not in {0,1}");
        }
        if (v > 0.5) {
            cols.push_back(es.vectors.col(j));
        }
    }
    basis_ = ComplexMat::from_columns(cols, p.dim());
    if (static_cast<size_t>(std::lround(p.trace())) != basis_.cols()) {
        throw Error(ErrorCode::NotProjector, "trace does not match rank");
    }
}

Projector Projector::from_basis(ComplexMat orthonormal_columns) {
    Projector p;
    p.op_ = HermOp(orthonormal_columns * orthonormal_columns.adjoint());
    p.basis_ = std::move(orthonormal_columns);
    return p;
}

Projector Projector::zero(size_t dim) {
    return from_basis(ComplexMat(dim, 0));
}

Projector Projector::identity(size_t dim) {
    return from_basis(ComplexMat::identity(dim));
}

Projector Projector::complement() const {
    ComplexMat full = ComplexMat::identity(dim());
    return from_basis(extend_orthonormal(basis_, full, kRankRelTol).col_block(rank(), dim() - rank()));
}

// ---------------------------------------------------------------------------
// Spectral routines

double rank_threshold(double largest) {
    return kRankRelTol * std::max(largest, 1e-12);
}

EigenSystem herm_eig(const HermOp &herm) {
    ComplexMat a = herm.mat();
    size_t n = a.rows();
    ComplexMat v = ComplexMat::identity(n);
    double target = kJacobiRelTol * a.frobenius_norm();

    bool converged = false;
    for (int sweep = 0; sweep <= kMaxJacobiSweeps; sweep++) {
        if (offdiag_frobenius(a) <= target) {
            converged = true;
            break;
        }
        if (sweep == kMaxJacobiSweeps) {
            break;
        }
        for (size_t p = 0; p + 1 < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                cplx apq = a(p, q);
                double r = std::abs(apq);
                if (r == 0) {
                    continue;
                }
                // Phase the (p,q) block real, then apply a real symmetric rotation.
                cplx phase = std::conj(apq) / r;
                double tau = (a(q, q).real() - a(p, p).real()) / (2 * r);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t);
                double s = t * c;
                cplx jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;

                for (size_t k = 0; k < n; k++) {
                    cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (size_t k = 0; k < n; k++) {
                    cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                for (size_t k = 0; k < n; k++) {
                    cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
    if (!converged) {
        throw Error(ErrorCode::NoConvergence,
                    "off-diagonal norm " + std::to_string(offdiag_frobenius(a)) + " after " +
                        std::to_string(kMaxJacobiSweeps) + " sweeps");
    }

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t i, size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigenSystem es;
    es.values.reserve(n);
    std::vector<CVector> vecs;
    double radius = 0;
    for (size_t i : order) {
        es.values.push_back(a(i, i).real());
        vecs.push_back(v.col(i));
        radius = std::max(radius, std::abs(a(i, i).real()));
    }

    double gap = kDegenerateRelTol * std::max(radius, 1e-300);
    for (size_t start = 0; start < n;) {
        size_t end = start + 1;
        while (end < n && es.values[end - 1] - es.values[end] <= gap) {
            end++;
        }
        if (end - start > 1) {
            std::vector<CVector> block(vecs.begin() + start, vecs.begin() + end);
            orthonormalize_block(block);
            std::copy(block.begin(), block.end(), vecs.begin() + start);
        }
        start = end;
    }
    for (auto &x : vecs) {
        normalize_phase(x);
    }
    es.vectors = ComplexMat::from_columns(vecs, n);
    return es;
}

double trace_norm(const HermOp &a) {
    double s = 0;
    for (double v : herm_eig(a).values) {
        s += std::abs(v);
    }
    return s;
}

std::pair<HermOp, HermOp> pos_neg_parts(const HermOp &a) {
    EigenSystem es = herm_eig(a);
    size_t n = a.dim();
    ComplexMat pos(n, n), neg(n, n);
    for (size_t j = 0; j < n; j++) {
        CVector x = es.vectors.col(j);
        double v = es.values[j];
        if (v > 0) {
            pos += cplx(v) * outer(x, x);
        } else if (v < 0) {
            neg += cplx(-v) * outer(x, x);
        }
    }
    return {HermOp(pos), HermOp(neg)};
}

Projector support_proj(const HermOp &a) {
    EigenSystem es = herm_eig(a);
    double lo = es.values.back();
    if (lo < -1e-9) {
        throw Error(ErrorCode::NotPositive, "minimum eigenvalue " + std::to_string(lo));
    }
    double largest = std::max(std::abs(es.values.front()), std::abs(lo));
    double thr = rank_threshold(largest);
    std::vector<CVector> cols;
    for (size_t j = 0; j < es.values.size(); j++) {
        if (es.values[j] > thr) {
            cols.push_back(es.vectors.col(j));
        }
    }
    return Projector::from_basis(ComplexMat::from_columns(cols, a.dim()));
}

Projector subspace_join(std::span<const Projector> ps) {
    if (ps.empty()) {
        throw Error(ErrorCode::InvalidArgument, "subspace_join of an empty family");
    }
    size_t dim = ps.front().dim();
    ComplexMat stacked(dim, 0);
    for (const auto &p : ps) {
        if (p.dim() != dim) {
            throw Error(ErrorCode::DimMismatch, "subspace_join: projectors act on different spaces");
        }
        stacked = stacked.hcat(p.basis());
    }
    return Projector::from_basis(extend_orthonormal(ComplexMat(dim, 0), stacked, kRankRelTol));
}

ComplexMat extend_orthonormal(const ComplexMat &basis, const ComplexMat &candidates, double rel_tol) {
    size_t n = candidates.rows();
    if (basis.rows() != n && basis.cols() > 0) {
        throw Error(ErrorCode::DimMismatch, "extend_orthonormal: row counts differ");
    }
    std::vector<CVector> q;
    for (size_t j = 0; j < basis.cols(); j++) {
        q.push_back(basis.col(j));
    }
    auto project_out = [&](CVector &x) {
        for (int pass = 0; pass < 2; pass++) {
            for (const auto &b : q) {
                cplx c = inner(b, x);
                for (size_t k = 0; k < n; k++) {
                    x[k] -= c * b[k];
                }
            }
        }
    };

    std::vector<CVector> resid;
    double scale = 0;
    for (size_t j = 0; j < candidates.cols(); j++) {
        resid.push_back(candidates.col(j));
        scale = std::max(scale, norm(resid.back()));
        project_out(resid.back());
    }
    double thr = rel_tol * std::max(scale, 1e-300);

    while (q.size() < n && !resid.empty()) {
        size_t best = 0;
        double best_norm = -1;
        for (size_t j = 0; j < resid.size(); j++) {
            double r = norm(resid[j]);
            if (r > best_norm) {
                best_norm = r;
                best = j;
            }
        }
        if (best_norm <= thr) {
            break;
        }
        CVector x = std::move(resid[best]);
        resid.erase(resid.begin() + static_cast<std::ptrdiff_t>(best));
        project_out(x);
        if (norm(x) <= thr) {
            continue;
        }
        x = normalized(std::move(x));
        for (auto &r : resid) {
            cplx c = inner(x, r);
            for (size_t k = 0; k < n; k++) {
                r[k] -= c * x[k];
            }
        }
        q.push_back(std::move(x));
    }
    return ComplexMat::from_columns(q, n);
}

}  // namespace stochiso
