// Copyright 2026 The fednormec Authors
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

#ifndef FEDNORMEC_ERRORS_HPP_
#define FEDNORMEC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fednormec {

// Bad argument to a library operation (non-finite entries, out-of-range
// indices, invalid probabilities, ...).
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A problem instance violates its own contract (e.g. non-PSD curvature).
class InvalidProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Config file could not be parsed or failed validation. `path` points at the
// offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, std::string reason)
      : std::runtime_error(path + ": " + reason),
        path_(std::move(path)),
        reason_(std::move(reason)) {}
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

// A local update produced a non-finite iterate. Surfaced, never clipped.
class DivergedLocalUpdateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A corollary schedule's side condition cannot be met; the message names the
// violated condition.
class ScheduleInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fednormec

#endif  // FEDNORMEC_ERRORS_HPP_
