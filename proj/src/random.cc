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

#include "stochiso/random.h"

#include <cmath>

#include "stochiso/errors.h"

namespace stochiso {

CVector gaussian_vector(Rng &rng, size_t dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(dim);
    for (auto &x : v) {
        double re = normal(rng);
        double im = normal(rng);
        x = cplx(re, im);
    }
    return v;
}

CVector haar_vector(Rng &rng, size_t dim) {
    for (;;) {
        CVector v = gaussian_vector(rng, dim);
        if (norm(v) > 1e-12) {
            return normalized(std::move(v));
        }
    }
}

ComplexMat haar_unitary(Rng &rng, size_t n) {
    // Modified Gram-Schmidt leaves R with a positive real diagonal, which is
    // exactly the phase normalization that makes Q Haar distributed.
    std::vector<CVector> cols;
    cols.reserve(n);
    while (cols.size() < n) {
        CVector x = gaussian_vector(rng, n);
        for (int pass = 0; pass < 2; pass++) {
            for (const auto &q : cols) {
                cplx c = inner(q, x);
                for (size_t k = 0; k < n; k++) {
                    x[k] -= c * q[k];
                }
            }
        }
        if (norm(x) < 1e-8) {
            continue;
        }
        cols.push_back(normalized(std::move(x)));
    }
    return ComplexMat::from_columns(cols, n);
}

HermOp random_hermitian(Rng &rng, size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMat m(n, n);
    for (size_t i = 0; i < n; i++) {
        m(i, i) = normal(rng);
        for (size_t j = i + 1; j < n; j++) {
            double re = normal(rng);
            double im = normal(rng);
            m(i, j) = cplx(re, im) / std::sqrt(2.0);
            m(j, i) = std::conj(m(i, j));
        }
    }
    return HermOp(m);
}

HermOp random_state(Rng &rng, size_t n, size_t rank) {
    if (rank == 0 || rank > n) {
        throw Error(ErrorCode::InvalidArgument, "random_state: rank out of range");
    }
    ComplexMat g(n, rank);
    for (size_t j = 0; j < rank; j++) {
        g.set_col(j, gaussian_vector(rng, n));
    }
    ComplexMat rho = g * g.adjoint();
    rho *= 1.0 / rho.trace().real();
    return HermOp(rho);
}

CVector ProbeStream::next_orthogonal_to(const CVector &phi) {
    if (dim_ < 2) {
        throw Error(ErrorCode::DimOne, "no vector is orthogonal to a state on C^1");
    }
    CVector u = normalized(phi);
    for (;;) {
        CVector x = next();
        cplx c = inner(u, x);
        for (size_t k = 0; k < dim_; k++) {
            x[k] -= c * u[k];
        }
        if (norm(x) > 1e-6) {
            return normalized(std::move(x));
        }
    }
}

}  // namespace stochiso
