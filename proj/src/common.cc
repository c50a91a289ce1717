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

#include "salt/common.h"

#include <cstdlib>

#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace salt {

void InitLogging() {
  static const bool initialized = [] {
    auto logger = spdlog::stderr_color_mt("salt");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%L %H:%M:%S] %v");
    spdlog::set_level(spdlog::level::info);
    if (const char* env = std::getenv("SALT_LOG"); env != nullptr) {
      spdlog::set_level(spdlog::level::from_str(env));
    }
    return true;
  }();
  (void)initialized;
}

}  // namespace salt
