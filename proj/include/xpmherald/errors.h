// Copyright 2026 The xpmherald Authors
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

#ifndef XPMHERALD_ERRORS_H
#define XPMHERALD_ERRORS_H

#include <stdexcept>
#include <string>

namespace xpmh {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An occupation number does not fit under a mode's Fock cutoff.
struct CutoffError : Error {
    using Error::Error;
};

/// A truncated state cannot meet the requested tail tolerance.
struct TruncationError : Error {
    TruncationError(const std::string &what, double achieved_tail)
        : Error(what), achieved_tail(achieved_tail) {
    }
    double achieved_tail;
};

/// Conditioning on an event of probability zero.
struct ConditioningError : Error {
    using Error::Error;
};

/// Two states with different mode registers were combined.
struct ModeMismatchError : Error {
    using Error::Error;
};

/// Invalid parameters, e.g. a non-transparent interferometer where heralding is required.
struct ConfigurationError : Error {
    using Error::Error;
};

}  // namespace xpmh

#endif
