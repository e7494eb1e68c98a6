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

#include "stochiso/generate.h"

#include <algorithm>
#include <cmath>

#include "stochiso/errors.h"
#include "stochiso/random.h"

namespace stochiso {

Kind parse_kind(const std::string &s) {
    if (s == "u" || s == "unitary") {
        return Kind::Unitary;
    }
    if (s == "a" || s == "antiunitary") {
        return Kind::Antiunitary;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown kind '" + s + "'");
}

MixedIsometryForm generate_form(const GenSpec &spec) {
    size_t k = spec.weights.size();
    if (k == 0 || spec.kinds.size() != k) {
        throw Error(ErrorCode::InvalidArgument, "need one kind per weight and at least one component", "gen");
    }
    if (spec.dim_in == 0) {
        throw Error(ErrorCode::InvalidArgument, "dim_in must be positive", "gen");
    }
    double sum = 0;
    for (double w : spec.weights) {
        if (!(w > 0 && w <= 1)) {
            throw Error(ErrorCode::InvalidArgument, "weights must lie in (0, 1]", "gen");
        }
        sum += w;
    }
    if (std::abs(sum - 1) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "weights must sum to 1", "gen");
    }
    if (spec.dim_out < k * spec.dim_in) {
        throw Error(ErrorCode::DimensionInsufficient,
                    "dim_out " + std::to_string(spec.dim_out) + " < components * dim_in = " +
                        std::to_string(k * spec.dim_in),
                    "gen");
    }

    Rng rng(spec.seed);
    size_t d = spec.dim_in;
    std::vector<ComplexMat> vs;
    for (size_t c = 0; c < k; c++) {
        ComplexMat u = haar_unitary(rng, d);
        ComplexMat v(spec.dim_out, d);
        for (size_t i = 0; i < d; i++) {
            for (size_t j = 0; j < d; j++) {
                v(c * d + i, j) = u(i, j);
            }
        }
        vs.push_back(std::move(v));
    }
    if (spec.mix_output) {
        ComplexMat w = haar_unitary(rng, spec.dim_out);
        for (auto &v : vs) {
            v = w * v;
        }
    }
    std::vector<WeightedComponent> comps;
    for (size_t c = 0; c < k; c++) {
        comps.push_back({spec.weights[c], IsometryComponent(spec.kinds[c], std::move(vs[c]))});
    }
    return MixedIsometryForm(d, spec.dim_out, std::move(comps));
}

std::vector<CorpusInstance> standard_corpus() {
    const double third = 1.0 / 3.0;
    const std::vector<std::vector<double>> patterns{
        {1.0}, {0.5, 0.5}, {0.7, 0.3}, {third, third, third}, {0.5, 0.25, 0.25}, {0.6, 0.3, 0.1}, {0.4, 0.4, 0.2},
    };
    std::vector<CorpusInstance> out;
    Rng kind_rng(20261016);
    for (size_t i = 0; i < 50; i++) {
        GenSpec s;
        s.weights = patterns[i % patterns.size()];
        s.dim_in = 1 + (i / patterns.size() + i) % 4;
        size_t k = s.weights.size();
        s.dim_out = std::min<size_t>(16, k * s.dim_in + i % 3);
        // Modes 0 and 1 give all-unitary / all-antiunitary forms; the rest mix.
        switch (i % 5) {
            case 0:
                s.kinds.assign(k, Kind::Unitary);
                break;
            case 1:
                s.kinds.assign(k, Kind::Antiunitary);
                break;
            default:
                for (size_t c = 0; c < k; c++) {
                    s.kinds.push_back(kind_rng() & 1 ? Kind::Antiunitary : Kind::Unitary);
                }
        }
        s.seed = 1000 + i;
        s.mix_output = i % 2 == 1;
        std::string name = "c" + std::to_string(i) + "_d" + std::to_string(s.dim_in) + "_n" +
                           std::to_string(s.dim_out) + "_";
        for (Kind kd : s.kinds) {
            name += kd == Kind::Unitary ? 'u' : 'a';
        }
        out.push_back({std::move(name), std::move(s)});
    }
    return out;
}

}  // namespace stochiso
