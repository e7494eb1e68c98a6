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

#ifndef STOCHISO_ERRORS_H
#define STOCHISO_ERRORS_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace stochiso {

enum class ErrorCode {
    NoConvergence,
    NotHermitian,
    NotPositive,
    NotProjector,
    DimMismatch,
    InvalidArgument,
    WeightsNotNormalized,
    RangesNotOrthogonal,
    NotIsometric,
    BlockNotHomogeneous,
    GammaNotUnitary,
    FingerprintMismatch,
    RankNotStabilized,
    MixingInvariantViolated,
    SpectralSplitDegenerate,
    DimOne,
    KindMismatch,
    ExtractionResidualTooLarge,
    ReconstructionFailed,
    NotStochastic,
    NotAnIsometry,
    DimensionInsufficient,
    ParseError,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library. `stage()` names the pipeline stage
/// that raised it (empty outside the decomposition pipeline).
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message, std::string stage = {})
        : std::runtime_error(format(code, message, stage)), code_(code), stage_(std::move(stage)) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }
    const std::string &stage() const noexcept {
        return stage_;
    }

   private:
    static std::string format(ErrorCode code, const std::string &message, const std::string &stage) {
        std::string out(error_code_name(code));
        if (!stage.empty()) {
            out += " [" + stage + "]";
        }
        out += ": " + message;
        return out;
    }

    ErrorCode code_;
    std::string stage_;
};

inline std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NoConvergence:
            return "NoConvergence";
        case ErrorCode::NotHermitian:
            return "NotHermitian";
        case ErrorCode::NotPositive:
            return "NotPositive";
        case ErrorCode::NotProjector:
            return "NotProjector";
        case ErrorCode::DimMismatch:
            return "DimMismatch";
        case ErrorCode::InvalidArgument:
            return "InvalidArgument";
        case ErrorCode::WeightsNotNormalized:
            return "WeightsNotNormalized";
        case ErrorCode::RangesNotOrthogonal:
            return "RangesNotOrthogonal";
        case ErrorCode::NotIsometric:
            return "NotIsometric";
        case ErrorCode::BlockNotHomogeneous:
            return "BlockNotHomogeneous";
        case ErrorCode::GammaNotUnitary:
            return "GammaNotUnitary";
        case ErrorCode::FingerprintMismatch:
            return "FingerprintMismatch";
        case ErrorCode::RankNotStabilized:
            return "RankNotStabilized";
        case ErrorCode::MixingInvariantViolated:
            return "MixingInvariantViolated";
        case ErrorCode::SpectralSplitDegenerate:
            return "SpectralSplitDegenerate";
        case ErrorCode::DimOne:
            return "DimOne";
        case ErrorCode::KindMismatch:
            return "KindMismatch";
        case ErrorCode::ExtractionResidualTooLarge:
            return "ExtractionResidualTooLarge";
        case ErrorCode::ReconstructionFailed:
            return "ReconstructionFailed";
        case ErrorCode::NotStochastic:
            return "NotStochastic";
        case ErrorCode::NotAnIsometry:
            return "NotAnIsometry";
        case ErrorCode::DimensionInsufficient:
            return "DimensionInsufficient";
        case ErrorCode::ParseError:
            return "ParseError";
    }
    return "Unknown";
}

}  // namespace stochiso

#endif
