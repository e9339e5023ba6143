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

#ifndef QEVENT_ERROR_HPP
#define QEVENT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qevent {

// Numeric values are part of the C API (qev_status) and must not be reordered.
enum class ErrorCode : int {
    InvalidArgument = 1,
    DuplicateLabel = 2,
    MissingLabel = 3,
    DimensionMismatch = 4,
    NonUnitVector = 5,
    LabelCollision = 6,
    UnknownEvent = 7,
    DuplicateEvent = 8,
    InvalidCut = 9,
    OverlappingBackwardLinks = 10,
    NotExhaustive = 11,
    ProbabilityOverflow = 12,
    ZeroProbabilityEvent = 13,
    LinkAlreadyEstablished = 14,
    Parse = 15,
    NoMatch = 16,
    PartitionNotUnity = 17,
    ZeroNormBranch = 18,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Thrown by sample_extension when an alternative set does not sum to one.
class NotExhaustiveError : public Error {
public:
    NotExhaustiveError(double sum, const std::string& what)
        : Error(ErrorCode::NotExhaustive, what), sum_(sum) {}

    double probability_sum() const noexcept { return sum_; }

private:
    double sum_;
};

}  // namespace qevent

#endif  // QEVENT_ERROR_HPP
