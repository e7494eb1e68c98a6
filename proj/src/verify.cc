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

#include "stochiso/verify.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace stochiso {

size_t default_probe_count(size_t dim_in) {
    return std::max<size_t>(16, 4 * dim_in);
}

double SpectralFingerprint::total() const {
    double t = 0;
    for (const auto &e : entries) {
        t += e.weight * (double)e.multiplicity;
    }
    return t;
}

CheckResult is_trace_preserving(const ChannelMatrix &r, double tol) {
    HermOp id_in = apply(dual(r), HermOp::identity(r.dim_out()));
    double residual = max_abs_diff(id_in.mat(), ComplexMat::identity(r.dim_in()));
    return {residual <= tol, residual};
}

PositivityResult positivity_probe(const ChannelMatrix &r, size_t n_probes, ProbeStream &probes, double tol) {
    if (n_probes == 0) {
        throw Error(ErrorCode::InvalidArgument, "positivity_probe needs at least one probe");
    }
    double worst = INFINITY;
    for (size_t k = 0; k < n_probes; k++) {
        EigenSystem es = herm_eig(apply(r, HermOp::pure(probes.next())));
        worst = std::min(worst, es.values.back());
    }
    return {worst >= -tol, worst};
}

PositivityResult positivity_probe(const ChannelMatrix &r, size_t n_probes, uint64_t seed, double tol) {
    ProbeStream probes(seed, r.dim_in());
    return positivity_probe(r, n_probes, probes, tol);
}

IsometryProbeResult isometry_probe_pairs(const ChannelMatrix &r, std::span<const ProbePair> pairs, double tol) {
    IsometryProbeResult res{true, 0, 0, 0, {}, pairs.size()};
    double worst = -1;
    ChannelMatrix rd = dual(r);
    for (const auto &pair : pairs) {
        HermOp out_phi = apply(r, HermOp::pure(pair.phi));
        double ortho = 0;
        if (!pair.psi.empty()) {
            HermOp out_psi = apply(r, HermOp::pure(pair.psi));
            ortho = (out_phi.mat() * out_psi.mat()).max_abs();
        }
        // Dual-support test: T*(supp T(P_phi)) must give back P_phi.
        double support = 0;
        try {
            Projector pi = support_proj(out_phi);
            support = max_abs_diff(apply(rd, pi.op()).mat(), HermOp::pure(pair.phi).mat());
        } catch (const Error &e) {
            if (e.code() != ErrorCode::NotPositive) {
                throw;
            }
            support = INFINITY;
        }
        res.orthogonality_defect = std::max(res.orthogonality_defect, ortho);
        res.dual_support_residual = std::max(res.dual_support_residual, support);
        double d = std::max(ortho, support);
        if (d > worst) {
            worst = d;
            res.worst_pair = pair;
        }
    }
    res.worst_defect = std::max(worst, 0.0);
    res.ok = res.worst_defect <= tol;
    return res;
}

IsometryProbeResult isometry_probe(const ChannelMatrix &r, size_t n_pairs, ProbeStream &probes, double tol) {
    std::vector<ProbePair> pairs;
    pairs.reserve(n_pairs);
    for (size_t k = 0; k < n_pairs; k++) {
        CVector phi = probes.next();
        CVector psi = probes.dim() >= 2 ? probes.next_orthogonal_to(phi) : CVector{};
        pairs.push_back({std::move(phi), std::move(psi)});
    }
    return isometry_probe_pairs(r, pairs, tol);
}

IsometryProbeResult isometry_probe(const ChannelMatrix &r, size_t n_pairs, uint64_t seed, double tol) {
    ProbeStream probes(seed, r.dim_in());
    return isometry_probe(r, n_pairs, probes, tol);
}

CpResult is_completely_positive(const ChannelMatrix &r, double tol) {
    HermOp c = choi(r);
    EigenSystem es = herm_eig(c);
    CpResult res{true, es.values.back(), std::nullopt, 0};
    res.ok = res.min_choi_eig >= -tol;
    if (!res.ok) {
        CVector w = es.vectors.col(es.vectors.cols() - 1);
        // <w|(T (x) id)(|Theta><Theta|)|w> with Theta = sum_i e_i (x) e_i / sqrt(d).
        res.witness_expectation = inner(w, c.mat() * w).real() / (double)r.dim_in();
        res.witness = std::move(w);
    }
    return res;
}

std::vector<FingerprintEntry> cluster_spectrum(std::span<const double> descending, double rel_gap) {
    std::vector<FingerprintEntry> out;
    if (descending.empty()) {
        return out;
    }
    double cut = rank_threshold(std::max(std::abs(descending.front()), std::abs(descending.back())));
    double sum = 0;
    double prev = 0;
    for (double v : descending) {
        if (v <= cut) {
            break;
        }
        if (!out.empty() && prev - v <= rel_gap * prev) {
            out.back().multiplicity++;
            sum += v;
        } else {
            if (!out.empty()) {
                out.back().weight = sum / (double)out.back().multiplicity;
            }
            out.push_back({v, 1});
            sum = v;
        }
        prev = v;
    }
    out.back().weight = sum / (double)out.back().multiplicity;
    return out;
}

SpectralFingerprint mixing_fingerprint(const ChannelMatrix &r, size_t n_probes, ProbeStream &probes, double rel_gap,
                                       double sum_tol) {
    if (n_probes == 0) {
        throw Error(ErrorCode::InvalidArgument, "mixing_fingerprint needs at least one probe");
    }
    std::vector<FingerprintEntry> ref;
    std::vector<double> sums;
    for (size_t k = 0; k < n_probes; k++) {
        EigenSystem es = herm_eig(apply(r, HermOp::pure(probes.next())));
        std::vector<FingerprintEntry> fp = cluster_spectrum(es.values, rel_gap);
        if (k == 0) {
            ref = fp;
            sums.assign(ref.size(), 0);
        } else {
            bool same = fp.size() == ref.size();
            for (size_t j = 0; same && j < fp.size(); j++) {
                double w = std::max(fp[j].weight, ref[j].weight);
                same = fp[j].multiplicity == ref[j].multiplicity && std::abs(fp[j].weight - ref[j].weight) <= rel_gap * w;
            }
            if (!same) {
                throw Error(ErrorCode::FingerprintMismatch,
                            "probe " + std::to_string(k) + " has a different eigenvalue pattern", "fingerprint");
            }
        }
        for (size_t j = 0; j < fp.size(); j++) {
            sums[j] += fp[j].weight;
        }
    }
    SpectralFingerprint out;
    for (size_t j = 0; j < ref.size(); j++) {
        out.entries.push_back({sums[j] / (double)n_probes, ref[j].multiplicity});
    }
    double total = out.total();
    if (std::abs(total - 1) > sum_tol) {
        throw Error(ErrorCode::FingerprintMismatch,
                    "weights times multiplicities sum to " + std::to_string(total) + ", not 1", "fingerprint");
    }
    return out;
}

SpectralFingerprint mixing_fingerprint(const ChannelMatrix &r, size_t n_probes, uint64_t seed, double rel_gap,
                                       double sum_tol) {
    ProbeStream probes(seed, r.dim_in());
    return mixing_fingerprint(r, n_probes, probes, rel_gap, sum_tol);
}

VerifyReport verify_channel(const ChannelMatrix &r, const VerifyOptions &options) {
    size_t n = options.probes ? options.probes : default_probe_count(r.dim_in());
    ProbeStream probes(options.seed, r.dim_in());

    VerifyReport rep{};
    rep.seed = options.seed;
    rep.tol = options.tol;
    rep.trace_preserving = is_trace_preserving(r, options.tol);
    rep.positive_on_probes = positivity_probe(r, n, probes, options.tol);

    IsometryProbeResult iso = isometry_probe(r, n, probes, options.tol);
    rep.isometry_on_probes = {iso.orthogonality_defect <= options.tol, iso.orthogonality_defect};
    rep.dual_support = {iso.dual_support_residual <= options.tol, iso.dual_support_residual};
    rep.worst_pair = iso.worst_pair;

    rep.completely_positive = is_completely_positive(r, options.cp_tol);

    rep.pure_on_probes = true;
    for (size_t k = 0; k < n; k++) {
        EigenSystem es = herm_eig(apply(r, HermOp::pure(probes.next())));
        double rest = 0;
        for (size_t j = 1; j < es.values.size(); j++) {
            rest = std::max(rest, std::abs(es.values[j]));
        }
        if (std::abs(es.values[0] - 1) > options.tol || rest > options.tol) {
            rep.pure_on_probes = false;
        }
    }

    if (rep.stochastic() && rep.isometry()) {
        try {
            rep.fingerprint = mixing_fingerprint(r, n, probes, options.cluster_rel_gap, options.tol);
        } catch (const Error &e) {
            if (e.code() != ErrorCode::FingerprintMismatch) {
                throw;
            }
        }
    }
    rep.probes_used = probes.used();
    return rep;
}

}  // namespace stochiso
