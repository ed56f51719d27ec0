// Copyright 2026 The unfoldwl Authors
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

#ifndef UNFOLDWL_JSON_UTIL_H_
#define UNFOLDWL_JSON_UTIL_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "unfoldwl/graph.h"

namespace unfoldwl {

using Json = nlohmann::json;

// Integers that fit in int64 are plain JSON numbers, larger ones are decimal
// strings.
Json BigIntToJson(const BigInt& value);
absl::StatusOr<BigInt> BigIntFromJson(const Json& value);

// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string RationalToString(const Rational& value);
absl::StatusOr<Rational> ParseRational(std::string_view text);

absl::StatusOr<Json> ParseJson(std::string_view document);

}  // namespace unfoldwl

#endif  // UNFOLDWL_JSON_UTIL_H_
