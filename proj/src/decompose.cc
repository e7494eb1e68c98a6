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

#include "stochiso/decompose.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace stochiso {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const cplx kI(0, 1);

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

ComplexMat top_vectors(const HermOp &x, size_t m) {
    return herm_eig(x).vectors.col_block(0, m);
}

/// Grows an orthonormal basis towards a target rank and tracks how long the
/// rank has sat there.
struct RankJoin {
    ComplexMat basis;
    size_t target;
    size_t stable = 0;
    const char *stage;

    void add(const ComplexMat &candidates) {
        if (candidates.cols() > 0) {
            basis = extend_orthonormal(basis, candidates);
        }
        if (basis.cols() > target) {
            throw Error(ErrorCode::RankNotStabilized,
                        "rank " + std::to_string(basis.cols()) + " exceeds " + std::to_string(target), stage);
        }
        stable = basis.cols() == target ? stable + 1 : 0;
    }
};

bool all_stable(const std::vector<RankJoin> &joins, size_t needed) {
    return std::all_of(joins.begin(), joins.end(), [&](const RankJoin &j) { return j.stable >= needed; });
}

void check_cap(size_t used, size_t cap, const std::vector<RankJoin> &joins) {
    if (used < cap) {
        return;
    }
    std::string ranks;
    for (const auto &j : joins) {
        ranks += (ranks.empty() ? "" : ", ") + std::to_string(j.basis.cols()) + "/" + std::to_string(j.target);
    }
    throw Error(ErrorCode::RankNotStabilized, "no stable rank after " + std::to_string(cap) + " probes (" + ranks + ")",
                joins.front().stage);
}

/// A probe with enough overlap with phi0 to transport along.
CVector tilted_probe(ProbeStream &probes, const CVector &phi0, double min_overlap) {
    CVector psi = probes.next();
    cplx ov = inner(phi0, psi);
    if (std::abs(ov) >= min_overlap) {
        return psi;
    }
    cplx phase = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1);
    for (size_t k = 0; k < psi.size(); k++) {
        psi[k] += min_overlap * phase * phi0[k];
    }
    return normalized(std::move(psi));
}

double cross_overlap(const ComplexMat &a, const ComplexMat &b) {
    if (a.cols() == 0 || b.cols() == 0) {
        return 0;
    }
    return (a.adjoint() * b).max_abs();
}

/// rho -> scale * Q* T(rho) Q as a channel on the frame Q.
ChannelMatrix compress(const ChannelMatrix &t, const ComplexMat &q, double scale) {
    ComplexMat qa = q.adjoint();
    return ChannelMatrix::from_action(t.dim_in(), q.cols(), [&](const ComplexMat &x) {
        return cplx(scale) * (qa * apply_complex(t, x) * q);
    });
}

}  // namespace

ComplexMat canonical_phase(const ComplexMat &v) {
    if (v.cols() == 0) {
        return v;
    }
    double top = 0;
    for (size_t r = 0; r < v.rows(); r++) {
        top = std::max(top, std::abs(v(r, 0)));
    }
    for (size_t r = 0; r < v.rows(); r++) {
        double a = std::abs(v(r, 0));
        if (a > 1e-9 * top) {
            return (std::conj(v(r, 0)) / a) * v;
        }
    }
    return v;
}

BandProjections band_projections(const ChannelMatrix &r, const SpectralFingerprint &fp, ProbeStream &probes,
                                 const DecomposeOptions &opt) {
    size_t d = r.dim_in();
    size_t n = r.dim_out();
    const char *stage = "band_projections";
    if (fp.entries.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty fingerprint", stage);
    }

    std::vector<RankJoin> joins;
    size_t total = 0;
    for (const auto &e : fp.entries) {
        joins.push_back({ComplexMat(n, 0), e.multiplicity * d, 0, stage});
        total += e.multiplicity;
    }
    if (total * d > n) {
        throw Error(ErrorCode::RankNotStabilized, "fingerprint needs more output dimensions than exist", stage);
    }

    size_t cap = opt.probe_cap_factor * d * n;
    for (size_t used = 0; !all_stable(joins, opt.stable_probes); used++) {
        check_cap(used, cap, joins);
        EigenSystem es = herm_eig(apply(r, HermOp::pure(probes.next())));
        size_t j = 0;
        for (size_t nu = 0; nu < joins.size(); nu++) {
            const auto &e = fp.entries[nu];
            for (size_t k = 0; k < e.multiplicity; k++, j++) {
                if (std::abs(es.values[j] - e.weight) > opt.cluster_rel_gap * e.weight) {
                    throw Error(ErrorCode::FingerprintMismatch,
                                "probe eigenvalue " + fmt(es.values[j]) + " does not match band weight " + fmt(e.weight),
                                stage);
                }
            }
            joins[nu].add(es.vectors.col_block(j - e.multiplicity, e.multiplicity));
        }
    }

    BandProjections out;
    out.orthogonality_residual = 0;
    ComplexMat all(n, 0);
    for (size_t a = 0; a < joins.size(); a++) {
        for (size_t b = a + 1; b < joins.size(); b++) {
            out.orthogonality_residual =
                std::max(out.orthogonality_residual, cross_overlap(joins[a].basis, joins[b].basis));
        }
        out.bands.push_back(Projector::from_basis(joins[a].basis));
        all = all.hcat(joins[a].basis);
    }
    if (out.orthogonality_residual > opt.orthogonality_tol) {
        throw Error(ErrorCode::RankNotStabilized, "band subspaces overlap by " + fmt(out.orthogonality_residual),
                    stage);
    }
    out.p0 = Projector::from_basis(all).complement();

    out.block_residual = 0;
    HermBasis basis(d);
    for (const auto &b : basis.elements()) {
        ComplexMat y = apply(r, b).mat();
        ComplexMat z(n, n);
        for (const auto &p : out.bands) {
            z += p.mat() * y * p.mat();
        }
        out.block_residual = std::max(out.block_residual, max_abs_diff(y, z));
    }
    if (out.block_residual > opt.block_tol) {
        throw Error(ErrorCode::RankNotStabilized,
                    "outputs are not block diagonal over the bands (residual " + fmt(out.block_residual) + ")", stage);
    }
    return out;
}

Projector mixing_support(const ChannelMatrix &mixing, size_t m, const CVector &x) {
    return Projector::from_basis(top_vectors(apply(mixing, HermOp::pure(x)), m));
}

MixingChannel mixing_channel(const ChannelMatrix &r, const Projector &band, double weight, size_t m,
                             ProbeStream &probes, const DecomposeOptions &opt) {
    size_t d = r.dim_in();
    const char *stage = "mixing_channel";
    if (band.rank() != m * d) {
        throw Error(ErrorCode::MixingInvariantViolated,
                    "band rank " + std::to_string(band.rank()) + " is not m*d = " + std::to_string(m * d), stage);
    }
    MixingChannel mix{compress(r, band.basis(), 1.0 / (weight * (double)m)), m, band.basis(), 0};

    size_t checks = std::max<size_t>(2, opt.stable_probes) + d;
    for (size_t k = 0; k < checks; k++) {
        EigenSystem es = herm_eig(apply(mix.base, HermOp::pure(probes.next())));
        for (size_t j = 0; j < es.values.size(); j++) {
            double want = j < m ? 1.0 / (double)m : 0.0;
            mix.invariant_residual = std::max(mix.invariant_residual, std::abs(es.values[j] - want));
        }
    }
    if (mix.invariant_residual > opt.mixing_tol) {
        throw Error(ErrorCode::MixingInvariantViolated,
                    "probe image is not (1/m) x projector (residual " + fmt(mix.invariant_residual) + ")", stage);
    }
    return mix;
}

LaSplit la_split(const MixingChannel &mix, ProbeStream &probes, const DecomposeOptions &opt) {
    const ChannelMatrix &t = mix.base;
    size_t d = t.dim_in();
    size_t nk = t.dim_out();
    size_t m = mix.m;
    const char *stage = "la_split";
    if (d < 2) {
        throw Error(ErrorCode::DimOne, "no orthogonal probe pair exists on C^1", stage);
    }

    CVector phi1 = probes.next();
    CVector phi2 = probes.next_orthogonal_to(phi1);
    CVector plus_i(d), plus(d);
    for (size_t k = 0; k < d; k++) {
        plus_i[k] = (phi1[k] + kI * phi2[k]) * kInvSqrt2;
        plus[k] = (phi1[k] + phi2[k]) * kInvSqrt2;
    }
    Projector pi1 = mixing_support(t, m, phi1);
    ComplexMat u = cplx(4) * pi1.mat() * mixing_support(t, m, plus_i).mat() * mixing_support(t, m, phi2).mat() *
                   mixing_support(t, m, plus).mat() * pi1.mat();

    // On the range of Pi_phi1, u is unitary with spectrum in {+i, -i}.
    ComplexMat q1 = pi1.basis();
    ComplexMat ut = q1.adjoint() * u * q1;
    ComplexMat h = cplx(0, -1) * ut;
    ComplexMat hs = cplx(0.5) * (h + h.adjoint());
    EigenSystem es = herm_eig(HermOp(hs));
    ComplexMat w = es.vectors;
    ComplexMat diag = w.adjoint() * ut * w;

    LaSplit out;
    out.split_residual = 0;
    std::vector<CVector> cols_l, cols_a;
    for (size_t j = 0; j < m; j++) {
        cplx lam = diag(j, j);
        // u = -i on unitary-generated directions, +i on antiunitary ones.
        bool linear = lam.imag() < 0;
        cplx target = linear ? cplx(0, -1) : cplx(0, 1);
        out.split_residual = std::max(out.split_residual, std::abs(lam - target));
        for (size_t k = 0; k < m; k++) {
            if (k != j) {
                out.split_residual = std::max(out.split_residual, std::abs(diag(j, k)));
            }
        }
        (linear ? cols_l : cols_a).push_back(q1 * w.col(j));
    }
    if (out.split_residual > opt.split_window) {
        throw Error(ErrorCode::SpectralSplitDegenerate,
                    "split operator eigenvalue off +-i by " + fmt(out.split_residual), stage);
    }
    out.m_l = cols_l.size();
    out.m_a = cols_a.size();
    out.phi0 = phi1;
    out.adapted_l = ComplexMat::from_columns(cols_l, nk);
    out.adapted_a = ComplexMat::from_columns(cols_a, nk);

    std::vector<RankJoin> joins{{ComplexMat(nk, 0), out.m_l * d, 0, stage},
                                {ComplexMat(nk, 0), out.m_a * d, 0, stage}};
    joins[0].add(out.adapted_l);
    joins[1].add(out.adapted_a);
    size_t cap = opt.probe_cap_factor * d * nk;
    for (size_t used = 0; !all_stable(joins, opt.stable_probes); used++) {
        check_cap(used, cap, joins);
        CVector psi = tilted_probe(probes, phi1, opt.min_overlap);
        double ov = std::abs(inner(phi1, psi));
        ComplexMat pi_psi = cplx(1.0 / ov) * mixing_support(t, m, psi).mat();
        joins[0].add(pi_psi * out.adapted_l);
        joins[1].add(pi_psi * out.adapted_a);
    }
    out.orthogonality_residual = cross_overlap(joins[0].basis, joins[1].basis);
    if (out.orthogonality_residual > opt.orthogonality_tol) {
        throw Error(ErrorCode::SpectralSplitDegenerate,
                    "linear and antilinear parts overlap by " + fmt(out.orthogonality_residual), stage);
    }
    out.p_l = Projector::from_basis(joins[0].basis);
    out.p_a = Projector::from_basis(joins[1].basis);
    return out;
}

RailProjections rail_projections(const ChannelMatrix &kind_channel, size_t m, const CVector &phi0,
                                 const ComplexMat &adapted, ProbeStream &probes, const DecomposeOptions &opt) {
    size_t d = kind_channel.dim_in();
    size_t nk = kind_channel.dim_out();
    const char *stage = "rail_projections";
    RailProjections out{{}, 0, 0};
    if (m == 1) {
        out.rails.push_back(Projector::identity(nk));
        return out;
    }
    if (adapted.cols() != m || adapted.rows() != nk) {
        throw Error(ErrorCode::DimMismatch, "adapted basis has the wrong shape", stage);
    }

    std::vector<RankJoin> joins;
    for (size_t k = 0; k < m; k++) {
        joins.push_back({ComplexMat(nk, 0), d, 0, stage});
        joins.back().add(adapted.col_block(k, 1));
    }
    size_t cap = opt.probe_cap_factor * d * nk;
    for (size_t used = 0; !all_stable(joins, opt.stable_probes); used++) {
        check_cap(used, cap, joins);
        CVector psi = tilted_probe(probes, phi0, opt.min_overlap);
        double ov = std::abs(inner(phi0, psi));
        ComplexMat moved = cplx(1.0 / ov) * (mixing_support(kind_channel, m, psi).mat() * adapted);
        out.transport_residual =
            std::max(out.transport_residual, max_abs_diff(moved.adjoint() * moved, ComplexMat::identity(m)));
        for (size_t k = 0; k < m; k++) {
            joins[k].add(moved.col_block(k, 1));
        }
    }
    if (out.transport_residual > opt.transport_tol) {
        throw Error(ErrorCode::RankNotStabilized,
                    "transported basis is not orthonormal (residual " + fmt(out.transport_residual) + ")", stage);
    }
    for (size_t a = 0; a < m; a++) {
        for (size_t b = a + 1; b < m; b++) {
            out.orthogonality_residual =
                std::max(out.orthogonality_residual, cross_overlap(joins[a].basis, joins[b].basis));
        }
        out.rails.push_back(Projector::from_basis(joins[a].basis));
    }
    if (out.orthogonality_residual > opt.orthogonality_tol) {
        throw Error(ErrorCode::RankNotStabilized, "rails overlap by " + fmt(out.orthogonality_residual), stage);
    }
    return out;
}

ExtractedComponent extract_pure(const ChannelMatrix &t, std::optional<Kind> expected, ProbeStream &probes,
                                const DecomposeOptions &opt) {
    size_t d = t.dim_in();
    size_t n = t.dim_out();
    const char *stage = "extract_pure";
    auto top = [&](const CVector &x) { return herm_eig(apply(t, HermOp::pure(x))).vectors.col(0); };

    std::vector<CVector> cols(d);
    cols[0] = top(basis_vector(d, 0));
    std::optional<Kind> detected;
    for (size_t i = 1; i < d; i++) {
        CVector g = top(basis_vector(d, i));
        CVector sum(d), twist(d);
        sum[0] = twist[0] = kInvSqrt2;
        sum[i] = kInvSqrt2;
        twist[i] = kI * kInvSqrt2;

        CVector h = top(sum);
        cplx c = inner(g, h) / inner(cols[0], h);
        c /= std::abs(c);
        for (auto &x : g) {
            x *= c;
        }
        cols[i] = g;

        CVector hk = top(twist);
        CVector lin(n), anti(n);
        for (size_t k = 0; k < n; k++) {
            lin[k] = cols[0][k] + kI * g[k];
            anti[k] = cols[0][k] - kI * g[k];
        }
        double su = std::norm(inner(normalized(lin), hk));
        double sa = std::norm(inner(normalized(anti), hk));
        Kind here = su > sa ? Kind::Unitary : Kind::Antiunitary;
        if (detected && *detected != here) {
            throw Error(ErrorCode::KindMismatch, "phase tests disagree between columns", stage);
        }
        detected = here;
    }
    if (expected && detected && *expected != *detected) {
        throw Error(ErrorCode::KindMismatch,
                    "phase test found " + std::string(kind_name(*detected)) + ", split said " +
                        std::string(kind_name(*expected)),
                    stage);
    }
    Kind kind = detected.value_or(expected.value_or(Kind::Unitary));

    ComplexMat v = canonical_phase(ComplexMat::from_columns(cols, n));
    ExtractedComponent out{IsometryComponent(kind, v), 0};

    MixedIsometryForm single(d, n, {{1.0, out.component}});
    out.residual = max_abs_diff(from_form(single).mat(), t.mat());
    for (size_t k = 0; k < opt.stable_probes; k++) {
        HermOp rho = HermOp::pure(probes.next());
        out.residual = std::max(out.residual, max_abs_diff(apply(t, rho).mat(), out.component.act(rho.mat())));
    }
    if (out.residual > opt.extraction_tol) {
        throw Error(ErrorCode::ExtractionResidualTooLarge, "residual " + fmt(out.residual), stage);
    }
    return out;
}

Decomposition decompose(const ChannelMatrix &r, const DecomposeOptions &opt) {
    size_t d = r.dim_in();
    size_t n = r.dim_out();
    size_t nprobe = opt.probes ? opt.probes : default_probe_count(d);
    ProbeStream probes(opt.seed, d);

    DecompositionReport rep{};
    rep.seed = opt.seed;
    rep.p0_completion_note =
        "reversal sends mass outside every component range to the maximally mixed input state; "
        "any stochastic completion agrees on the image of the channel";

    CheckResult tp = is_trace_preserving(r, opt.trace_tol);
    rep.trace_residual = tp.residual;
    if (!tp.ok) {
        throw Error(ErrorCode::NotStochastic, "not trace preserving (residual " + fmt(tp.residual) + ")",
                    "trace_preservation");
    }
    PositivityResult pos = positivity_probe(r, nprobe, probes, opt.positivity_tol);
    if (!pos.ok) {
        throw Error(ErrorCode::NotStochastic, "probe image has eigenvalue " + fmt(pos.worst_min_eig), "positivity");
    }
    IsometryProbeResult iso = isometry_probe(r, nprobe, probes, opt.isometry_tol);
    rep.isometry_defect = iso.worst_defect;
    if (!iso.ok) {
        throw NotAnIsometryError("probe pair defect " + fmt(iso.worst_defect), iso.worst_pair, iso.worst_defect,
                                 "isometry_probe");
    }

    rep.fingerprint = mixing_fingerprint(r, nprobe, probes, opt.cluster_rel_gap, opt.fingerprint_sum_tol);
    BandProjections bands = band_projections(r, rep.fingerprint, probes, opt);
    rep.p0 = bands.p0;
    rep.block_residual = bands.block_residual;
    rep.band_orthogonality_residual = bands.orthogonality_residual;

    double total = rep.fingerprint.total();
    std::vector<WeightedComponent> comps;

    for (size_t nu = 0; nu < bands.bands.size(); nu++) {
        const auto &entry = rep.fingerprint.entries[nu];
        const Projector &band = bands.bands[nu];
        double weight = entry.weight / total;
        BandReport br{entry.weight, entry.multiplicity, band, 0, 0, {}, {}, {}, {}, 0, 0, 0, 0};

        if (d == 1) {
            // Both actions agree on C^1: each direction of the band is its own component.
            br.m_l = entry.multiplicity;
            br.p_l = band;
            br.p_a = Projector::zero(n);
            for (size_t k = 0; k < band.rank(); k++) {
                ComplexMat v = canonical_phase(band.basis().col_block(k, 1));
                br.rails.push_back(Projector::from_basis(v));
                br.rail_kinds.push_back(Kind::Unitary);
                comps.push_back({weight, IsometryComponent(Kind::Unitary, v)});
                rep.extraction_residuals.push_back(0);
            }
            rep.bands.push_back(std::move(br));
            continue;
        }

        MixingChannel mix = mixing_channel(r, band, entry.weight, entry.multiplicity, probes, opt);
        br.mixing_residual = mix.invariant_residual;
        LaSplit split = la_split(mix, probes, opt);
        br.m_l = split.m_l;
        br.m_a = split.m_a;
        br.split_residual = split.split_residual;
        br.p_l = Projector::from_basis(mix.frame * split.p_l.basis());
        br.p_a = Projector::from_basis(mix.frame * split.p_a.basis());

        for (Kind kind : {Kind::Unitary, Kind::Antiunitary}) {
            bool lin = kind == Kind::Unitary;
            size_t mk = lin ? split.m_l : split.m_a;
            if (mk == 0) {
                continue;
            }
            const ComplexMat &qk = (lin ? split.p_l : split.p_a).basis();
            ChannelMatrix kc = compress(mix.base, qk, (double)entry.multiplicity / (double)mk);
            ComplexMat adapted = qk.adjoint() * (lin ? split.adapted_l : split.adapted_a);
            RailProjections rails = rail_projections(kc, mk, split.phi0, adapted, probes, opt);
            br.rail_orthogonality_residual = std::max(br.rail_orthogonality_residual, rails.orthogonality_residual);
            br.transport_residual = std::max(br.transport_residual, rails.transport_residual);

            for (const auto &rail : rails.rails) {
                ChannelMatrix tk = compress(kc, rail.basis(), (double)mk);
                ExtractedComponent ext = extract_pure(tk, kind, probes, opt);
                ComplexMat embed = mix.frame * qk * rail.basis();
                ComplexMat v = canonical_phase(embed * ext.component.v());
                br.rails.push_back(Projector::from_basis(embed));
                br.rail_kinds.push_back(kind);
                comps.push_back({weight, IsometryComponent(kind, v)});
                rep.extraction_residuals.push_back(ext.residual);
            }
        }
        rep.bands.push_back(std::move(br));
    }
    if (d == 1) {
        rep.notes.push_back("input dimension 1: unitary and antiunitary actions coincide; components reported as unitary");
    }

    MixedIsometryForm form(d, n, std::move(comps));
    rep.reconstruction_error = max_abs_diff(from_form(form).mat(), r.mat());
    rep.probes_used = probes.used();
    if (rep.reconstruction_error > opt.reconstruction_tol) {
        throw Error(ErrorCode::ReconstructionFailed, "reconstruction error " + fmt(rep.reconstruction_error),
                    "reconstruction");
    }
    return {std::move(form), std::move(rep)};
}

}  // namespace stochiso
