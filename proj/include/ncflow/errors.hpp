// Copyright 2026 The ncflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NCFLOW_ERRORS_HPP
#define NCFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncflow {

enum class ErrorKind {
    InvalidInput,
    InvalidParams,
    SpectrumOutOfDomain,
    MetricDegenerate,
    PositivityLost,
    StepUnderflow,
    InsufficientData,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::SpectrumOutOfDomain: return "SpectrumOutOfDomain";
    case ErrorKind::MetricDegenerate: return "MetricDegenerate";
    case ErrorKind::PositivityLost: return "PositivityLost";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::InsufficientData: return "InsufficientData";
    }
    return "Unknown";
}

// Every library failure is reported through this one exception type; callers
// branch on kind() rather than on a class hierarchy.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace ncflow

#endif
