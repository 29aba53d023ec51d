// Copyright 2026 The uavsec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UAVSEC_ERRORS_HPP
#define UAVSEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace uavsec {

/// Invalid experiment or deployment configuration (bad bounds, unknown key,
/// unit violation).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Quotas cannot seat every UT (sum of quotas < N).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two nodes share a position, so a path-loss gain is undefined.
class DegenerateGeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eavesdropper channel matrix is rank deficient.
class SingularProjectorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Receiver channel lies entirely in the eavesdropper span; nulling leaves
/// no gain toward the receiver.
class ZeroProjectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A group with a single member has no relays to broadcast to.
class NoRelaysError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// An iterative algorithm hit its iteration cap.
class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Broken internal invariant (structure coverage, quota overflow, cycle).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace uavsec

#endif  // UAVSEC_ERRORS_HPP
