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

#ifndef STOCHISO_SERIALIZE_H
#define STOCHISO_SERIALIZE_H

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "stochiso/channel.h"
#include "stochiso/decompose.h"
#include "stochiso/verify.h"

namespace stochiso {

using Json = nlohmann::ordered_json;

/// Canonical text: two-space indentation, keys in insertion order, floats
/// with 17 significant digits, short numeric arrays (matrix rows, [re, im]
/// pairs) on one line, trailing newline. dump_canonical(parse_json(s)) == s
/// for every s this function produced.
std::string dump_canonical(const Json &j);

/// Throws ParseError.
Json parse_json(std::string_view text);

/// One of the two channel representations.
struct ChannelFile {
    std::optional<ChannelMatrix> superoperator;
    std::optional<MixedIsometryForm> form;

    /// The superoperator, converting the form if needed.
    ChannelMatrix channel() const;
};

Json channel_json(const ChannelMatrix &r);
Json form_json(const MixedIsometryForm &f);
ChannelFile channel_file_from_json(const Json &j);
ChannelFile parse_channel_file(std::string_view text);

Json state_json(const HermOp &rho);
/// Checks Hermitian, unit trace and positivity to 1e-9 (ParseError otherwise).
HermOp parse_state_file(std::string_view text);

Json complex_json(cplx z);
Json complex_matrix_json(const ComplexMat &m);
Json probe_pair_json(const ProbePair &p);
Json fingerprint_json(const SpectralFingerprint &fp);
Json verify_report_json(const VerifyReport &rep);
Json decomposition_report_json(const DecompositionReport &rep);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace stochiso

#endif
