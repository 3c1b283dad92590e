/*
 * Copyright 2026 The fairweigh Authors.
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

#ifndef FAIRWEIGH_CSV_H_
#define FAIRWEIGH_CSV_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fairweigh::csv {

// Streaming RFC-4180 reader: comma separated, CRLF or LF line endings,
// double-quoted fields may contain commas, line breaks and "" escapes.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next record, or nullopt at end of input. Throws fairweigh::Error on an
  // unterminated quoted field.
  std::optional<std::vector<std::string>> Next();

  // 1-based line number where the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

// Quotes a field when it contains a comma, quote or line break.
std::string Escape(std::string_view field);

void WriteRow(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace fairweigh::csv

#endif  // FAIRWEIGH_CSV_H_
