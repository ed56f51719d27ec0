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

#include "unfoldwl/json_util.h"

#include <cstdint>
#include <limits>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace unfoldwl {
namespace {

bool IsDecimalInteger(std::string_view text) {
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    text.remove_prefix(1);
  }
  if (text.empty()) return false;
  for (char c : text) {
    if (!absl::ascii_isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Json BigIntToJson(const BigInt& value) {
  if (value >= std::numeric_limits<std::int64_t>::min() &&
      value <= std::numeric_limits<std::int64_t>::max()) {
    return Json(static_cast<std::int64_t>(value));
  }
  return Json(value.str());
}

absl::StatusOr<BigInt> BigIntFromJson(const Json& value) {
  if (value.is_number_unsigned()) {
    return BigInt(value.get<std::uint64_t>());
  }
  if (value.is_number_integer()) {
    return BigInt(value.get<std::int64_t>());
  }
  if (value.is_string()) {
    const auto& text = value.get_ref<const std::string&>();
    if (!IsDecimalInteger(text)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a decimal integer: \"", text, "\""));
    }
    return BigInt(text.front() == '+' ? text.substr(1) : text);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("expected an integer, got ", value.dump()));
}

std::string RationalToString(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return absl::StrCat(num.str(), "/", den.str());
}

absl::StatusOr<Rational> ParseRational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!IsDecimalInteger(num) || !IsDecimalInteger(den) ||
      den.front() == '-' || den.front() == '+') {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed rational: \"", std::string(text), "\""));
  }
  BigInt n(std::string(num.front() == '+' ? num.substr(1) : num));
  BigInt d{std::string(den)};
  if (d == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("zero denominator: \"", std::string(text), "\""));
  }
  return Rational(n, d);
}

absl::StatusOr<Json> ParseJson(std::string_view document) {
  Json parsed = Json::parse(document, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) {
    return absl::InvalidArgumentError("JSON parse error");
  }
  return parsed;
}

}  // namespace unfoldwl
