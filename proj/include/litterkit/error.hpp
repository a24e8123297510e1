// Copyright 2026 The LitterKit Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace litterkit
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed annotation or detection text. `offset()` is the byte position
/// reported by the JSON reader, or 0 when the problem is structural.
class ParseError : public Error
{
public:
  ParseError(const std::string & message, std::size_t offset)
  : Error(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset)
  {
  }
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// A reference to an id that does not exist.
class IntegrityError : public Error
{
public:
  IntegrityError(const std::string & what_kind, std::int64_t id, const std::string & context)
  : Error(context + ": unknown " + what_kind + " id " + std::to_string(id)), id_(id)
  {
  }
  std::int64_t id() const noexcept { return id_; }

private:
  std::int64_t id_;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

}  // namespace litterkit
