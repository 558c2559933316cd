// Copyright 2026 The tabaug Authors.
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

#ifndef TABAUG_ERROR_H_
#define TABAUG_ERROR_H_

#include <stdexcept>
#include <string>

namespace tabaug {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unusable input data (tables, dataset files, templates).
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration, detected before any source call is issued.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tabaug

#endif  // TABAUG_ERROR_H_
