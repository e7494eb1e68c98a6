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

#include <gtest/gtest.h>

#include <cmath>

#include "stochiso/generate.h"
#include "test_util.h"

using namespace stochiso;
using stochiso::testing::depolarizing;
using stochiso::testing::pauli_x_mixture;
using stochiso::testing::weight_classes;

namespace {

ChannelMatrix scaled(const ChannelMatrix &r, double s) {
    return ChannelMatrix(r.dim_in(), r.dim_out(), r.mat().scaled(s));
}

bool all_unitary(const MixedIsometryForm &f) {
    for (const auto &c : f.components()) {
        if (c.component.kind() != Kind::Unitary) {
            return false;
        }
    }
    return true;
}

// Sum_ij T(E_ij) (x) E_ij built with dense Kronecker products.
ComplexMat oracle_choi(const ChannelMatrix &r) {
    size_t d = r.dim_in();
    ComplexMat c(r.dim_out() * d, r.dim_out() * d);
    for (size_t i = 0; i < d; i++) {
        for (size_t j = 0; j < d; j++) {
            ComplexMat e(d, d);
            e(i, j) = 1;
            c += kron(apply_complex(r, e), e);
        }
    }
    return c;
}

}  // namespace

TEST(is_trace_preserving, examples) {
    CheckResult id = is_trace_preserving(ChannelMatrix::identity(3), 1e-8);
    ASSERT_TRUE(id.ok);
    ASSERT_EQ(id.residual, 0);

    CheckResult s = is_trace_preserving(scaled(ChannelMatrix::identity(2), 0.9), 1e-8);
    ASSERT_FALSE(s.ok);
    ASSERT_NEAR(s.residual, 0.1, 1e-15);

    ASSERT_TRUE(is_trace_preserving(depolarizing(3), 1e-12).ok);
    ASSERT_TRUE(is_trace_preserving(transpose_channel(4), 1e-12).ok);
}

TEST(positivity_probe, examples) {
    PositivityResult neg = positivity_probe(scaled(ChannelMatrix::identity(2), -1), 16, uint64_t{0});
    ASSERT_FALSE(neg.ok);
    ASSERT_NEAR(neg.worst_min_eig, -1, 1e-12);

    PositivityResult t = positivity_probe(transpose_channel(3), 16, uint64_t{0});
    ASSERT_TRUE(t.ok);
    ASSERT_GE(t.worst_min_eig, -1e-12);

    ASSERT_THROW(positivity_probe(transpose_channel(2), 0, uint64_t{0}), Error);
}

TEST(isometry_probe, pauli_x_mixture_pair) {
    ProbePair pair{basis_vector(2, 0), basis_vector(2, 1)};
    IsometryProbeResult res = isometry_probe_pairs(pauli_x_mixture(), std::span<const ProbePair>(&pair, 1));
    ASSERT_FALSE(res.ok);
    // T(P0) = T(P1) = I/2.
    ASSERT_NEAR(res.orthogonality_defect, 0.25, 1e-15);
    ASSERT_EQ(res.worst_pair.phi, pair.phi);
    ASSERT_EQ(res.worst_pair.psi, pair.psi);
}

TEST(isometry_probe, depolarizing) {
    for (size_t d = 2; d <= 4; d++) {
        IsometryProbeResult res = isometry_probe(depolarizing(d), 8, uint64_t{3});
        ASSERT_FALSE(res.ok);
        ASSERT_NEAR(res.orthogonality_defect, 1.0 / (double)(d * d), 1e-14);
        ASSERT_GT(res.dual_support_residual, 1e-3);
        ASSERT_EQ(res.pairs_used, 8u);
    }
}

TEST(isometry_probe, dual_support_criterion) {
    for (const auto &inst : standard_corpus()) {
        IsometryProbeResult res = isometry_probe(from_form(generate_form(inst.spec)), 16, inst.spec.seed);
        ASSERT_TRUE(res.ok) << inst.name;
        ASSERT_LE(res.dual_support_residual, 1e-8) << inst.name;
        ASSERT_LE(res.orthogonality_defect, 1e-8) << inst.name;
    }
    ASSERT_GT(isometry_probe(pauli_x_mixture(), 16, uint64_t{1}).dual_support_residual, 1e-3);
    ASSERT_GT(isometry_probe(depolarizing(2), 16, uint64_t{1}).dual_support_residual, 1e-3);
}

TEST(isometry_probe, dim_one_has_no_partner) {
    IsometryProbeResult res = isometry_probe(ChannelMatrix::identity(1), 4, uint64_t{0});
    ASSERT_TRUE(res.ok);
    ASSERT_TRUE(res.worst_pair.psi.empty());
}

TEST(is_completely_positive, examples) {
    CpResult id = is_completely_positive(ChannelMatrix::identity(2));
    ASSERT_TRUE(id.ok);
    ASSERT_FALSE(id.witness.has_value());

    CpResult t = is_completely_positive(transpose_channel(2));
    ASSERT_FALSE(t.ok);
    ASSERT_NEAR(t.min_choi_eig, -1, 1e-12);
    ASSERT_TRUE(t.witness.has_value());
    const CVector &w = *t.witness;
    ASSERT_NEAR(norm(w), 1, 1e-14);
    // Singlet-type: antisymmetric under swapping the tensor factors.
    ASSERT_NEAR(std::abs(w[0]), 0, 1e-12);
    ASSERT_NEAR(std::abs(w[3]), 0, 1e-12);
    ASSERT_NEAR(std::abs(w[1] + w[2]), 0, 1e-12);
    double expect = inner(w, oracle_choi(transpose_channel(2)) * w).real() / 2;
    ASSERT_NEAR(expect, -0.5, 1e-12);
    ASSERT_NEAR(t.witness_expectation, expect, 1e-14);
}

TEST(is_completely_positive, choi_matches_oracle) {
    for (const auto &inst : standard_corpus()) {
        ChannelMatrix r = from_form(generate_form(inst.spec));
        ASSERT_LT(max_abs_diff(choi(r).mat(), oracle_choi(r)), 1e-12) << inst.name;
    }
}

TEST(is_completely_positive, exactly_the_unitary_forms) {
    for (const auto &inst : standard_corpus()) {
        MixedIsometryForm f = generate_form(inst.spec);
        CpResult cp = is_completely_positive(from_form(f));
        bool want = all_unitary(f) || f.dim_in() == 1;
        ASSERT_EQ(cp.ok, want) << inst.name;
        if (!cp.ok) {
            ASSERT_LT(cp.witness_expectation, -1e-9) << inst.name;
        }
    }
}

TEST(cluster_spectrum, examples) {
    std::vector<double> a{0.5, 0.5, 0};
    auto ca = cluster_spectrum(a, 1e-6);
    ASSERT_EQ(ca.size(), 1u);
    ASSERT_EQ(ca[0].weight, 0.5);
    ASSERT_EQ(ca[0].multiplicity, 2u);

    std::vector<double> b{0.7, 0.3, 1e-14, -1e-14};
    auto cb = cluster_spectrum(b, 1e-6);
    ASSERT_EQ(cb.size(), 2u);
    ASSERT_EQ(cb[1].weight, 0.3);

    std::vector<double> c{0.5, 0.5 - 1e-9, 0.25, 0.25};
    auto cc = cluster_spectrum(c, 1e-6);
    ASSERT_EQ(cc.size(), 2u);
    ASSERT_EQ(cc[0].multiplicity, 2u);
    ASSERT_EQ(cc[1].multiplicity, 2u);
}

TEST(mixing_fingerprint, examples) {
    SpectralFingerprint one = mixing_fingerprint(ChannelMatrix::identity(3), 16, uint64_t{0});
    ASSERT_EQ(one.entries.size(), 1u);
    ASSERT_NEAR(one.entries[0].weight, 1, 1e-12);
    ASSERT_EQ(one.entries[0].multiplicity, 1u);

    GenSpec s;
    s.dim_in = 2;
    s.dim_out = 4;
    s.weights = {0.5, 0.5};
    s.kinds = {Kind::Unitary, Kind::Antiunitary};
    SpectralFingerprint half = mixing_fingerprint(from_form(generate_form(s)), 16, uint64_t{0});
    ASSERT_EQ(half.entries.size(), 1u);
    ASSERT_NEAR(half.entries[0].weight, 0.5, 1e-12);
    ASSERT_EQ(half.entries[0].multiplicity, 2u);

    s.weights = {0.7, 0.3};
    SpectralFingerprint split = mixing_fingerprint(from_form(generate_form(s)), 16, uint64_t{0});
    ASSERT_EQ(split.entries.size(), 2u);
    ASSERT_NEAR(split.entries[0].weight, 0.7, 1e-12);
    ASSERT_NEAR(split.entries[1].weight, 0.3, 1e-12);
    ASSERT_NEAR(split.total(), 1, 1e-12);
}

TEST(mixing_fingerprint, matches_generator_weights) {
    for (const auto &inst : standard_corpus()) {
        MixedIsometryForm f = generate_form(inst.spec);
        SpectralFingerprint fp = mixing_fingerprint(from_form(f), 16, inst.spec.seed);
        auto classes = weight_classes(f, 1e-12);
        ASSERT_EQ(fp.entries.size(), classes.size()) << inst.name;
        for (size_t k = 0; k < classes.size(); k++) {
            ASSERT_NEAR(fp.entries[k].weight, classes[k].weight, 1e-10) << inst.name;
            ASSERT_EQ(fp.entries[k].multiplicity, classes[k].unitary + classes[k].antiunitary) << inst.name;
        }
    }
}

TEST(mixing_fingerprint, mismatch) {
    try {
        mixing_fingerprint(scaled(ChannelMatrix::identity(2), 0.9), 4, uint64_t{0});
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.code(), ErrorCode::FingerprintMismatch);
        ASSERT_EQ(e.stage(), "fingerprint");
    }
    // Depolarizing on C^2 gives the consistent pattern (1/2, 2) with total 1,
    // so only the isometry probe rejects it.
    SpectralFingerprint dep = mixing_fingerprint(depolarizing(2), 4, uint64_t{0});
    ASSERT_EQ(dep.entries[0].multiplicity, 2u);
}

TEST(verify_channel, reports) {
    VerifyOptions opt;
    VerifyReport id = verify_channel(ChannelMatrix::identity(2), opt);
    ASSERT_TRUE(id.stochastic());
    ASSERT_TRUE(id.isometry());
    ASSERT_TRUE(id.completely_positive.ok);
    ASSERT_TRUE(id.pure_on_probes);
    ASSERT_TRUE(id.fingerprint.has_value());
    // positivity, isometry pairs (two each), purity, fingerprint
    ASSERT_EQ(id.probes_used, 16u * 5);

    VerifyReport t = verify_channel(transpose_channel(2), opt);
    ASSERT_TRUE(t.stochastic());
    ASSERT_TRUE(t.isometry());
    ASSERT_FALSE(t.completely_positive.ok);

    VerifyReport dep = verify_channel(depolarizing(2), opt);
    ASSERT_TRUE(dep.stochastic());
    ASSERT_FALSE(dep.isometry());
    ASSERT_FALSE(dep.pure_on_probes);
    ASSERT_FALSE(dep.fingerprint.has_value());

    VerifyReport s = verify_channel(scaled(ChannelMatrix::identity(2), 0.9), opt);
    ASSERT_FALSE(s.stochastic());
}

TEST(verify_channel, deterministic_in_seed) {
    VerifyOptions opt;
    opt.seed = 42;
    ChannelMatrix r = pauli_x_mixture();
    VerifyReport a = verify_channel(r, opt), b = verify_channel(r, opt);
    ASSERT_EQ(a.worst_pair.phi, b.worst_pair.phi);
    ASSERT_EQ(a.isometry_on_probes.residual, b.isometry_on_probes.residual);
}
