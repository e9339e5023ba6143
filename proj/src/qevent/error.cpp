// Copyright 2026 The qevent Authors
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

#include "qevent/error.hpp"

namespace qevent {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DuplicateLabel: return "DuplicateLabel";
        case ErrorCode::MissingLabel: return "MissingLabel";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonUnitVector: return "NonUnitVector";
        case ErrorCode::LabelCollision: return "LabelCollision";
        case ErrorCode::UnknownEvent: return "UnknownEvent";
        case ErrorCode::DuplicateEvent: return "DuplicateEvent";
        case ErrorCode::InvalidCut: return "InvalidCut";
        case ErrorCode::OverlappingBackwardLinks: return "OverlappingBackwardLinks";
        case ErrorCode::NotExhaustive: return "NotExhaustive";
        case ErrorCode::ProbabilityOverflow: return "ProbabilityOverflow";
        case ErrorCode::ZeroProbabilityEvent: return "ZeroProbabilityEvent";
        case ErrorCode::LinkAlreadyEstablished: return "LinkAlreadyEstablished";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::NoMatch: return "NoMatch";
        case ErrorCode::PartitionNotUnity: return "PartitionNotUnity";
        case ErrorCode::ZeroNormBranch: return "ZeroNormBranch";
    }
    return "Unknown";
}

}  // namespace qevent
