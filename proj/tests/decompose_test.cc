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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "stochiso/generate.h"
#include "test_util.h"

using namespace stochiso;
using stochiso::testing::effective_kind;
using stochiso::testing::pauli_x_mixture;
using stochiso::testing::weight_classes;

namespace {

ErrorCode code_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

MixedIsometryForm gen(size_t d, size_t out, std::vector<double> w, std::vector<Kind> k, uint64_t seed,
                      bool mix = false) {
    GenSpec s;
    s.dim_in = d;
    s.dim_out = out;
    s.weights = std::move(w);
    s.kinds = std::move(k);
    s.seed = seed;
    s.mix_output = mix;
    return generate_form(s);
}

const Kind U = Kind::Unitary;
const Kind A = Kind::Antiunitary;

// Runs the pipeline up to the mixing channel of band `band`.
struct Stages {
    ProbeStream probes;
    SpectralFingerprint fp;
    BandProjections bp;

    Stages(const ChannelMatrix &r, const DecomposeOptions &opt) : probes(opt.seed, r.dim_in()) {
        fp = mixing_fingerprint(r, default_probe_count(r.dim_in()), probes);
        bp = band_projections(r, fp, probes, opt);
    }

    MixingChannel mixing(const ChannelMatrix &r, size_t band, const DecomposeOptions &opt) {
        return mixing_channel(r, bp.bands[band], fp.entries[band].weight, fp.entries[band].multiplicity, probes, opt);
    }
};

ComplexMat sum_ranges(const MixedIsometryForm &f, const std::vector<size_t> &which) {
    ComplexMat p(f.dim_out(), f.dim_out());
    for (size_t k : which) {
        p += f.components()[k].component.range_projector();
    }
    return p;
}

}  // namespace

TEST(decompose, identity) {
    Decomposition d = decompose(ChannelMatrix::identity(3));
    ASSERT_EQ(d.form.size(), 1u);
    const auto &c = d.form.components()[0];
    ASSERT_NEAR(c.weight, 1, 1e-12);
    ASSERT_EQ(c.component.kind(), Kind::Unitary);
    ASSERT_LT(max_abs_diff(c.component.v(), ComplexMat::identity(3)), 1e-9);
    ASSERT_LE(d.report.reconstruction_error, 1e-12);
    ASSERT_EQ(d.report.p0.rank(), 0u);
}

TEST(decompose, transpose) {
    Decomposition d = decompose(transpose_channel(2));
    ASSERT_EQ(d.form.size(), 1u);
    const auto &c = d.form.components()[0];
    ASSERT_EQ(c.component.kind(), Kind::Antiunitary);
    ASSERT_LT(max_abs_diff(c.component.v(), ComplexMat::identity(2)), 1e-9);
    ASSERT_EQ(d.report.bands[0].m_a, 1u);
    ASSERT_EQ(d.report.bands[0].m_l, 0u);
}

TEST(decompose, seventy_thirty_round_trip) {
    MixedIsometryForm f = gen(2, 4, {0.7, 0.3}, {U, A}, 3);
    ChannelMatrix r = from_form(f);
    Decomposition d = decompose(r);
    ASSERT_EQ(d.form.size(), 2u);
    ASSERT_NEAR(d.form.components()[0].weight, 0.7, 1e-9);
    ASSERT_EQ(d.form.components()[0].component.kind(), Kind::Unitary);
    ASSERT_NEAR(d.form.components()[1].weight, 0.3, 1e-9);
    ASSERT_EQ(d.form.components()[1].component.kind(), Kind::Antiunitary);
    ASSERT_LT(max_abs_diff(from_form(d.form).mat(), r.mat()), 1e-8);
    // Unique band, unique rail: v is pinned down up to a phase.
    for (size_t k = 0; k < 2; k++) {
        ASSERT_LT(max_abs_diff(d.form.components()[k].component.v(), canonical_phase(f.components()[k].component.v())),
                  1e-8);
    }
}

TEST(decompose, corpus_subset) {
    auto corpus = standard_corpus();
    for (size_t i = 0; i < corpus.size(); i += 3) {
        MixedIsometryForm f = generate_form(corpus[i].spec);
        ChannelMatrix r = from_form(f);
        DecomposeOptions opt;
        opt.seed = corpus[i].spec.seed;
        Decomposition d = decompose(r, opt);
        ASSERT_LE(max_abs_diff(from_form(d.form).mat(), r.mat()), 1e-8) << corpus[i].name;

        // Same weight classes with the same kind counts, after identifying kinds on C^1.
        std::vector<WeightedComponent> eff;
        for (const auto &c : f.components()) {
            eff.push_back({c.weight, IsometryComponent(effective_kind(c.component.kind(), f.dim_in()), c.component.v())});
        }
        auto want = weight_classes(MixedIsometryForm(f.dim_in(), f.dim_out(), eff), 1e-9);
        auto got = weight_classes(d.form, 1e-9);
        ASSERT_EQ(want.size(), got.size()) << corpus[i].name;
        for (size_t k = 0; k < want.size(); k++) {
            ASSERT_NEAR(want[k].weight, got[k].weight, 1e-9) << corpus[i].name;
            ASSERT_EQ(want[k].unitary, got[k].unitary) << corpus[i].name;
            ASSERT_EQ(want[k].antiunitary, got[k].antiunitary) << corpus[i].name;
        }
    }
}

TEST(decompose, deterministic) {
    ChannelMatrix r = from_form(gen(3, 9, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {U, A, U}, 8, true));
    DecomposeOptions opt;
    opt.seed = 17;
    Decomposition a = decompose(r, opt), b = decompose(r, opt);
    ASSERT_EQ(a.form.size(), b.form.size());
    for (size_t k = 0; k < a.form.size(); k++) {
        ASSERT_EQ(a.form.components()[k].component.v().entries(), b.form.components()[k].component.v().entries());
    }
    ASSERT_EQ(a.report.probes_used, b.report.probes_used);
}

TEST(decompose, dim_one) {
    MixedIsometryForm f = gen(1, 3, {0.5, 0.3, 0.2}, {U, A, U}, 4, true);
    Decomposition d = decompose(from_form(f));
    ASSERT_EQ(d.form.size(), 3u);
    for (size_t k = 0; k < 3; k++) {
        ASSERT_EQ(d.form.components()[k].component.kind(), Kind::Unitary);
        ASSERT_NEAR(d.form.components()[k].weight, f.components()[k].weight, 1e-12);
    }
    ASSERT_FALSE(d.report.notes.empty());
    ASSERT_LE(d.report.reconstruction_error, 1e-12);
}

TEST(decompose, rejects_pauli_x_mixture) {
    try {
        decompose(pauli_x_mixture());
        FAIL();
    } catch (const NotAnIsometryError &e) {
        ASSERT_EQ(e.stage(), "isometry_probe");
        ASSERT_GT(e.defect(), 1e-3);
        ASSERT_EQ(e.pair().phi.size(), 2u);
        ASSERT_NEAR(std::abs(inner(e.pair().phi, e.pair().psi)), 0, 1e-12);
    }
}

TEST(decompose, rejects_non_stochastic) {
    ChannelMatrix s(2, 2, RealMat::identity(4).scaled(0.9));
    try {
        decompose(s);
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.code(), ErrorCode::NotStochastic);
        ASSERT_EQ(e.stage(), "trace_preservation");
    }
    // Trace preserving but not positive: rho -> rho + tr(rho Z) X.
    ChannelMatrix bad = ChannelMatrix::from_action(2, 2, [](const ComplexMat &x) {
        cplx z = x(0, 0) - x(1, 1);
        return x + z * ComplexMat::from_rows({{0, 1}, {1, 0}});
    });
    try {
        decompose(bad);
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.code(), ErrorCode::NotStochastic);
        ASSERT_EQ(e.stage(), "positivity");
    }
}

TEST(band_projections, match_generator_ranges) {
    MixedIsometryForm f = gen(2, 5, {0.7, 0.3}, {U, A}, 6, true);
    ChannelMatrix r = from_form(f);
    Stages st(r, {});
    ASSERT_EQ(st.bp.bands.size(), 2u);
    ASSERT_LT(max_abs_diff(st.bp.bands[0].mat(), f.components()[0].component.range_projector()), 1e-9);
    ASSERT_LT(max_abs_diff(st.bp.bands[1].mat(), f.components()[1].component.range_projector()), 1e-9);
    ASSERT_LT(max_abs_diff(st.bp.p0.mat(), f.unused_projector()), 1e-9);
    ASSERT_LE(st.bp.block_residual, 1e-8);
}

TEST(band_projections, equal_weights_merge) {
    MixedIsometryForm f = gen(2, 5, {0.5, 0.5}, {U, A}, 7, true);
    Stages st(from_form(f), {});
    ASSERT_EQ(st.bp.bands.size(), 1u);
    ASSERT_EQ(st.bp.bands[0].rank(), 4u);
    ASSERT_EQ(st.bp.p0.rank(), 1u);
    ASSERT_LT(max_abs_diff(st.bp.bands[0].mat(), sum_ranges(f, {0, 1})), 1e-9);
}

TEST(mixing_channel, pure_states_to_scaled_projectors) {
    MixedIsometryForm f = gen(3, 9, {0.25, 0.25, 0.5}, {U, U, A}, 9, true);
    ChannelMatrix r = from_form(f);
    Stages st(r, {});
    ASSERT_EQ(st.fp.entries[1].multiplicity, 2u);
    MixingChannel mix = st.mixing(r, 1, {});
    ASSERT_EQ(mix.m, 2u);
    ASSERT_LE(mix.invariant_residual, 1e-8);
    Rng rng(1);
    for (int k = 0; k < 10; k++) {
        CVector x = haar_vector(rng, 3);
        EigenSystem es = herm_eig(apply(mix.base, HermOp::pure(x)));
        ASSERT_NEAR(es.values[0], 0.5, 1e-10);
        ASSERT_NEAR(es.values[1], 0.5, 1e-10);
        ASSERT_NEAR(es.values[2], 0, 1e-10);
        ASSERT_EQ(mixing_support(mix.base, 2, x).rank(), 2u);
    }
}

TEST(la_split, mixed_kinds) {
    MixedIsometryForm f = gen(2, 5, {0.5, 0.5}, {U, A}, 10, true);
    ChannelMatrix r = from_form(f);
    Stages st(r, {});
    MixingChannel mix = st.mixing(r, 0, {});
    LaSplit ls = la_split(mix, st.probes, {});
    ASSERT_EQ(ls.m_l, 1u);
    ASSERT_EQ(ls.m_a, 1u);
    ASSERT_LE(ls.split_residual, 1e-4);
    ASSERT_LE(ls.orthogonality_residual, 1e-9);
    // Back in the output space, P_L is the range of the unitary component.
    ComplexMat pl = mix.frame * ls.p_l.mat() * mix.frame.adjoint();
    ASSERT_LT(max_abs_diff(pl, f.components()[0].component.range_projector()), 1e-8);
}

TEST(la_split, kinds_alone) {
    for (Kind k : {U, A}) {
        MixedIsometryForm f = gen(3, 6, {0.5, 0.5}, {k, k}, 11, true);
        ChannelMatrix r = from_form(f);
        Stages st(r, {});
        MixingChannel mix = st.mixing(r, 0, {});
        LaSplit ls = la_split(mix, st.probes, {});
        ASSERT_EQ(ls.m_l, k == U ? 2u : 0u);
        ASSERT_EQ(ls.m_a, k == A ? 2u : 0u);
    }
}

TEST(la_split, dim_one) {
    MixedIsometryForm f = gen(1, 2, {0.5, 0.5}, {U, U}, 12);
    ChannelMatrix r = from_form(f);
    Stages st(r, {});
    MixingChannel mix = st.mixing(r, 0, {});
    ASSERT_EQ(code_of([&] { la_split(mix, st.probes, {}); }), ErrorCode::DimOne);
}

TEST(rails, commute_with_probe_images) {
    MixedIsometryForm f = gen(2, 8, {0.25, 0.25, 0.25, 0.25}, {U, U, A, U}, 13, true);
    ChannelMatrix r = from_form(f);
    Decomposition d = decompose(r);
    ASSERT_EQ(d.report.bands.size(), 1u);
    const BandReport &b = d.report.bands[0];
    ASSERT_EQ(b.m_l, 3u);
    ASSERT_EQ(b.m_a, 1u);
    ASSERT_EQ(b.rails.size(), 4u);
    ASSERT_LE(b.transport_residual, 1e-8);
    ASSERT_LE(b.rail_orthogonality_residual, 1e-9);
    ComplexMat total(8, 8);
    for (const auto &p : b.rails) {
        ASSERT_EQ(p.rank(), 2u);
        total += p.mat();
    }
    ASSERT_LT(max_abs_diff(total, b.band.mat()), 1e-8);
    Rng rng(2);
    for (int k = 0; k < 10; k++) {
        ComplexMat img = apply(r, HermOp::pure(haar_vector(rng, 2))).mat();
        for (const auto &p : b.rails) {
            ASSERT_LT(max_abs_diff(p.mat() * img, img * p.mat()), 1e-8);
        }
    }
    // The unitary rails span exactly the unitary ranges.
    ASSERT_LT(max_abs_diff(b.p_l.mat(), sum_ranges(f, {0, 1, 3})), 1e-8);
}

TEST(extract_pure, examples) {
    Rng rng(3);
    ComplexMat u = haar_unitary(rng, 3);
    ProbeStream probes(0, 3);
    ExtractedComponent e = extract_pure(unitary_channel(u), Kind::Unitary, probes, {});
    ASSERT_EQ(e.component.kind(), Kind::Unitary);
    ASSERT_LT(max_abs_diff(e.component.v(), canonical_phase(u)), 1e-9);
    ASSERT_LE(e.residual, 1e-7);

    MixedIsometryForm anti(3, 3, {{1, IsometryComponent(Kind::Antiunitary, u)}});
    ExtractedComponent ea = extract_pure(from_form(anti), std::nullopt, probes, {});
    ASSERT_EQ(ea.component.kind(), Kind::Antiunitary);
    ASSERT_LT(max_abs_diff(ea.component.v(), canonical_phase(u)), 1e-9);

    ASSERT_EQ(code_of([&] { extract_pure(from_form(anti), Kind::Unitary, probes, {}); }), ErrorCode::KindMismatch);
}

TEST(canonical_phase, first_entry_real_positive) {
    ComplexMat v = ComplexMat::from_rows({{0, 1}, {cplx(0, 2), 0}});
    ComplexMat c = canonical_phase(v);
    ASSERT_NEAR(c(1, 0).real(), 2, 1e-15);
    ASSERT_NEAR(c(1, 0).imag(), 0, 1e-15);
    ASSERT_NEAR(c(0, 1).imag(), -1, 1e-15);
    ASSERT_LT(max_abs_diff(canonical_phase(c), c), 1e-15);
}
