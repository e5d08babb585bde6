/*
 * Copyright 2026 The hecredit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HECREDIT_COMMON_LOG_H_
#define HECREDIT_COMMON_LOG_H_

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>

namespace hecredit::log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kOff = 4 };

// Process-wide threshold. Defaults to kInfo, or to the value of the
// HECREDIT_LOG environment variable (debug|info|warn|error|off).
void SetLevel(Level level);
Level GetLevel();

using Field = std::pair<std::string_view, std::string>;

// Emits one line of key=value pairs to stdout:
//   ts=2026-10-19T10:00:00.123Z level=info component=broker event=connect ...
// Values containing spaces or quotes are quoted.
void Emit(Level level, std::string_view component, std::string_view event,
          std::initializer_list<Field> fields = {});

inline void Info(std::string_view component, std::string_view event,
                 std::initializer_list<Field> fields = {}) {
  Emit(Level::kInfo, component, event, fields);
}
inline void Warn(std::string_view component, std::string_view event,
                 std::initializer_list<Field> fields = {}) {
  Emit(Level::kWarn, component, event, fields);
}
inline void Debug(std::string_view component, std::string_view event,
                  std::initializer_list<Field> fields = {}) {
  Emit(Level::kDebug, component, event, fields);
}

}  // namespace hecredit::log

#endif  // HECREDIT_COMMON_LOG_H_
