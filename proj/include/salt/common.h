// Copyright (c) 2026 The salt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SALT_COMMON_H_
#define SALT_COMMON_H_

#include <stdexcept>
#include <string>

namespace salt {

// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed arguments that violate a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Configures the default logger from the SALT_LOG environment variable
// (trace|debug|info|warn|error|off). Safe to call more than once.
void InitLogging();

}  // namespace salt

#endif  // SALT_COMMON_H_
