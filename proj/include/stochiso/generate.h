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

#ifndef STOCHISO_GENERATE_H
#define STOCHISO_GENERATE_H

#include <cstdint>
#include <string>
#include <vector>

#include "stochiso/channel.h"

namespace stochiso {

struct GenSpec {
    size_t dim_in = 1;
    size_t dim_out = 1;
    std::vector<double> weights;
    std::vector<Kind> kinds;
    uint64_t seed = 0;
    /// Rotate every range by one shared Haar unitary on the output space, so
    /// the ranges are no longer coordinate blocks.
    bool mix_output = false;
};

/// Component k gets a Haar-random unitary placed in output coordinates
/// [k d, (k+1) d). Throws InvalidArgument for bad weights/kinds and
/// DimensionInsufficient if the blocks do not fit.
MixedIsometryForm generate_form(const GenSpec &spec);

struct CorpusInstance {
    std::string name;
    GenSpec spec;
};

/// The fixed 50-instance test corpus: input dims 1..4, output dims <= 16,
/// 1..3 components, several weight patterns with exact repeats.
std::vector<CorpusInstance> standard_corpus();

/// Parses "u"/"a"/"unitary"/"antiunitary".
Kind parse_kind(const std::string &s);

}  // namespace stochiso

#endif
