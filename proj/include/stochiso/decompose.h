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

#ifndef STOCHISO_DECOMPOSE_H
#define STOCHISO_DECOMPOSE_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochiso/channel.h"
#include "stochiso/random.h"
#include "stochiso/verify.h"

namespace stochiso {

struct DecomposeOptions {
    uint64_t seed = 0;
    /// Probe count for the entry checks and the fingerprint; 0 selects default_probe_count.
    size_t probes = 0;

    double trace_tol = 1e-8;
    double positivity_tol = 1e-9;
    double isometry_tol = 1e-8;
    double cluster_rel_gap = 1e-6;
    double fingerprint_sum_tol = 1e-8;
    double block_tol = 1e-8;
    double mixing_tol = 1e-8;
    /// Eigenvalues of the split operator must lie this close to +-i.
    double split_window = 1e-4;
    double orthogonality_tol = 1e-9;
    double transport_tol = 1e-8;
    double extraction_tol = 1e-7;
    double reconstruction_tol = 1e-8;

    /// Joins stop once the rank has sat at its target for this many probes.
    size_t stable_probes = 3;
    /// Joins give up after probe_cap_factor * d * (output dim) probes.
    size_t probe_cap_factor = 8;
    /// Probes with |<phi0|psi>| below this are tilted towards phi0.
    double min_overlap = 1e-2;
};

/// The band-restricted channel rho -> (w m)^-1 Q* T(rho) Q, in an orthonormal
/// frame Q of the band. Pure states go to (1/m) x (rank-m projector).
struct MixingChannel {
    ChannelMatrix base;
    size_t m;
    /// dim_out(T) x (m d), orthonormal columns.
    ComplexMat frame;
    double invariant_residual;
};

struct BandProjections {
    std::vector<Projector> bands;
    Projector p0;
    /// max over basis inputs of |T(rho) - sum_nu P_nu T(rho) P_nu|_max
    double block_residual;
    double orthogonality_residual;
};

/// Linear / antilinear split of a mixing channel, in the channel's own frame.
struct LaSplit {
    Projector p_l;
    Projector p_a;
    size_t m_l;
    size_t m_a;
    /// The reference probe phi0 (input space).
    CVector phi0;
    /// Orthonormal eigenbasis of Pi_phi0 adapted to the split: m_l columns, then m_a.
    ComplexMat adapted_l;
    ComplexMat adapted_a;
    /// max distance of an eigenvalue of the split operator from its +-i target
    double split_residual;
    double orthogonality_residual;
};

struct RailProjections {
    std::vector<Projector> rails;
    double orthogonality_residual;
    /// max |Gram - I|_max of the transported bases
    double transport_residual;
};

struct ExtractedComponent {
    IsometryComponent component;
    double residual;
};

struct BandReport {
    double weight;
    size_t multiplicity;
    Projector band;
    size_t m_l;
    size_t m_a;
    /// Full output space projectors.
    Projector p_l;
    Projector p_a;
    std::vector<Projector> rails;
    std::vector<Kind> rail_kinds;
    double mixing_residual;
    double split_residual;
    double rail_orthogonality_residual;
    double transport_residual;
};

struct DecompositionReport {
    SpectralFingerprint fingerprint;
    std::vector<BandReport> bands;
    Projector p0;
    double trace_residual;
    double isometry_defect;
    double block_residual;
    double band_orthogonality_residual;
    std::vector<double> extraction_residuals;
    double reconstruction_error;
    size_t probes_used;
    uint64_t seed;
    std::string p0_completion_note;
    std::vector<std::string> notes;
};

struct Decomposition {
    MixedIsometryForm form;
    DecompositionReport report;
};

/// Band projectors P_nu (joined probe eigenspaces) and their complement p0.
/// Throws RankNotStabilized.
BandProjections band_projections(const ChannelMatrix &r, const SpectralFingerprint &fp, ProbeStream &probes,
                                 const DecomposeOptions &opt);

/// Throws MixingInvariantViolated if a probe image is not (1/m) x projector.
MixingChannel mixing_channel(const ChannelMatrix &r, const Projector &band, double weight, size_t m,
                             ProbeStream &probes, const DecomposeOptions &opt);

/// Projector onto the support of the image of P_x under an m-mixing channel.
Projector mixing_support(const ChannelMatrix &mixing, size_t m, const CVector &x);

/// Needs d >= 2 (DimOne otherwise). Throws SpectralSplitDegenerate, RankNotStabilized.
LaSplit la_split(const MixingChannel &mix, ProbeStream &probes, const DecomposeOptions &opt);

/// Rails of a kind-homogeneous m-mixing channel. `adapted` holds an orthonormal
/// basis of the support of the image of P_phi0 (m columns).
RailProjections rail_projections(const ChannelMatrix &kind_channel, size_t m, const CVector &phi0,
                                 const ComplexMat &adapted, ProbeStream &probes, const DecomposeOptions &opt);

/// Reads off v for a pure channel. When `expected` is set and d >= 2 the
/// detected kind must agree (KindMismatch otherwise). Residual is checked
/// against opt.extraction_tol.
ExtractedComponent extract_pure(const ChannelMatrix &t, std::optional<Kind> expected, ProbeStream &probes,
                                const DecomposeOptions &opt);

/// Multiplies v by the phase making the first nonzero entry of column 0 real positive.
ComplexMat canonical_phase(const ComplexMat &v);

/// Full pipeline. Throws NotStochastic / NotAnIsometryError on bad input and
/// stage-tagged errors from the later steps.
Decomposition decompose(const ChannelMatrix &r, const DecomposeOptions &opt = {});

}  // namespace stochiso

#endif
