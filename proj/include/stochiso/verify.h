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

#ifndef STOCHISO_VERIFY_H
#define STOCHISO_VERIFY_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stochiso/channel.h"
#include "stochiso/errors.h"
#include "stochiso/random.h"

namespace stochiso {

/// max(16, 4 d) probes.
size_t default_probe_count(size_t dim_in);

struct CheckResult {
    bool ok;
    double residual;
};

struct PositivityResult {
    bool ok;
    /// Smallest eigenvalue seen over all probe outputs.
    double worst_min_eig;
};

/// A pair of orthogonal pure input states (psi is empty on C^1, where no
/// orthogonal partner exists).
struct ProbePair {
    CVector phi;
    CVector psi;
};

struct IsometryProbeResult {
    bool ok;
    /// max(orthogonality_defect, dual_support_residual)
    double worst_defect;
    /// max |T(P_phi) T(P_psi)|_max over the pairs.
    double orthogonality_defect;
    /// max |T*(supp T(P_phi)) - P_phi|_max over the pairs.
    double dual_support_residual;
    /// The pair that produced worst_defect.
    ProbePair worst_pair;
    size_t pairs_used;
};

struct CpResult {
    bool ok;
    double min_choi_eig;
    /// Normalized Choi eigenvector of the most negative eigenvalue, present when !ok.
    std::optional<CVector> witness;
    /// <w| (T (x) id)(|Theta><Theta|) |w> for the maximally entangled Theta;
    /// negative whenever a witness is present.
    double witness_expectation;
};

struct FingerprintEntry {
    double weight;
    size_t multiplicity;
};

/// Distinct nonzero eigenvalues (descending) and their multiplicities,
/// shared by the images of all pure states.
struct SpectralFingerprint {
    std::vector<FingerprintEntry> entries;

    double total() const;
};

/// Raised when a map fails the orthogonality / dual-support probes; carries
/// the offending probe pair.
class NotAnIsometryError : public Error {
   public:
    NotAnIsometryError(const std::string &message, ProbePair pair, double defect, std::string stage = {})
        : Error(ErrorCode::NotAnIsometry, message, std::move(stage)), pair_(std::move(pair)), defect_(defect) {
    }
    const ProbePair &pair() const {
        return pair_;
    }
    double defect() const {
        return defect_;
    }

   private:
    ProbePair pair_;
    double defect_;
};

/// residual = |T*(I) - I|_max.
CheckResult is_trace_preserving(const ChannelMatrix &r, double tol);

/// Minimum output eigenvalue over seeded Haar-random pure inputs. A passing
/// result is evidence, not a certificate.
PositivityResult positivity_probe(const ChannelMatrix &r, size_t n_probes, uint64_t seed, double tol = 1e-9);
PositivityResult positivity_probe(const ChannelMatrix &r, size_t n_probes, ProbeStream &probes, double tol = 1e-9);

IsometryProbeResult isometry_probe(const ChannelMatrix &r, size_t n_pairs, uint64_t seed, double tol = 1e-8);
IsometryProbeResult isometry_probe(const ChannelMatrix &r, size_t n_pairs, ProbeStream &probes, double tol = 1e-8);
IsometryProbeResult isometry_probe_pairs(const ChannelMatrix &r, std::span<const ProbePair> pairs, double tol = 1e-8);

/// Choi-matrix test, with a negative-expectation witness on failure.
CpResult is_completely_positive(const ChannelMatrix &r, double tol = 1e-9);

/// Groups a descending spectrum into (value, multiplicity) clusters, ignoring
/// values below the rank threshold. Neighbours closer than rel_gap (relative)
/// share a cluster.
std::vector<FingerprintEntry> cluster_spectrum(std::span<const double> descending, double rel_gap);

/// Throws FingerprintMismatch if the probes disagree or the weights do not
/// sum to one within sum_tol.
SpectralFingerprint mixing_fingerprint(const ChannelMatrix &r, size_t n_probes, uint64_t seed,
                                       double rel_gap = 1e-6, double sum_tol = 1e-8);
SpectralFingerprint mixing_fingerprint(const ChannelMatrix &r, size_t n_probes, ProbeStream &probes,
                                       double rel_gap = 1e-6, double sum_tol = 1e-8);

struct VerifyOptions {
    /// 0 selects default_probe_count(dim_in).
    size_t probes = 0;
    uint64_t seed = 0;
    /// Tolerance for trace preservation, positivity and the isometry probes.
    double tol = 1e-8;
    double cp_tol = 1e-9;
    double cluster_rel_gap = 1e-6;
};

struct VerifyReport {
    CheckResult trace_preserving;
    PositivityResult positive_on_probes;
    /// ok + worst orthogonality defect.
    CheckResult isometry_on_probes;
    CheckResult dual_support;
    ProbePair worst_pair;
    CpResult completely_positive;
    bool pure_on_probes;
    std::optional<SpectralFingerprint> fingerprint;
    size_t probes_used;
    uint64_t seed;
    double tol;

    bool stochastic() const {
        return trace_preserving.ok && positive_on_probes.ok;
    }
    bool isometry() const {
        return isometry_on_probes.ok && dual_support.ok;
    }
};

/// Runs every predicate. Probe vectors for all stages come from one stream
/// seeded with options.seed.
VerifyReport verify_channel(const ChannelMatrix &r, const VerifyOptions &options);

}  // namespace stochiso

#endif
