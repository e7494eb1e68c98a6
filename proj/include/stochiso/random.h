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

#ifndef STOCHISO_RANDOM_H
#define STOCHISO_RANDOM_H

#include <cstdint>
#include <random>

#include "stochiso/linops.h"

namespace stochiso {

using Rng = std::mt19937_64;

/// Vector of i.i.d. standard complex Gaussians.
CVector gaussian_vector(Rng &rng, size_t dim);

/// Uniformly (Haar) distributed unit vector.
CVector haar_vector(Rng &rng, size_t dim);

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// R's diagonal absorbed into Q.
ComplexMat haar_unitary(Rng &rng, size_t n);

/// Random Hermitian matrix with Gaussian entries.
HermOp random_hermitian(Rng &rng, size_t n);

/// Random positive semidefinite operator of the given rank, trace normalized to 1.
HermOp random_state(Rng &rng, size_t n, size_t rank);

/// Deterministic sequence of Haar-random probe vectors drawn from one seed.
/// Every consumer pulls from the same stream in order, so a pipeline run is a
/// pure function of its seed.
class ProbeStream {
   public:
    ProbeStream(uint64_t seed, size_t dim) : rng_(seed), dim_(dim) {
    }

    CVector next() {
        used_++;
        return haar_vector(rng_, dim_);
    }
    /// A unit vector orthogonal to `phi`, drawn from the stream.
    CVector next_orthogonal_to(const CVector &phi);

    size_t dim() const {
        return dim_;
    }
    size_t used() const {
        return used_;
    }

   private:
    Rng rng_;
    size_t dim_;
    size_t used_ = 0;
};

}  // namespace stochiso

#endif
