// Copyright 2026 The Balderdash Simulation Authors
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

#include <gtest/gtest.h>

#include <random>

#include "core/csv.hpp"
#include "core/errors.hpp"

namespace balderdash {
namespace {

TEST(CsvField, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
  EXPECT_EQ(csv_field(""), "");
}

TEST(CsvRow, JoinsWithCommas) { EXPECT_EQ(csv_row({"a", "b,c", ""}), "a,\"b,c\","); }

TEST(ParseCsv, HandlesQuotesAndCrlf) {
  const auto rows = parse_csv("a,\"b,\"\"c\"\"\"\r\n1,2\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b,\"c\""}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"1", "2"}));
}

TEST(ParseCsv, UnterminatedQuoteThrows) {
  EXPECT_THROW(parse_csv("a,\"open\n"), ValidationError);
}

TEST(ParseCsv, RoundTripsRandomRows) {
  std::mt19937_64 gen(17);
  const std::string alphabet = "ab ,\"\n'x";
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::vector<std::string>> rows(1 + gen() % 4);
    const std::size_t width = 1 + gen() % 4;
    std::string text;
    for (auto& row : rows) {
      row.resize(width);
      for (auto& field : row) {
        const std::size_t length = gen() % 6;
        for (std::size_t i = 0; i < length; ++i) field += alphabet[gen() % alphabet.size()];
      }
      // A lone empty field would read back as an empty line.
      if (width == 1 && row[0].empty()) row[0] = "x";
      text += csv_row(row) + "\n";
    }
    EXPECT_EQ(parse_csv(text), rows) << text;
  }
}

TEST(FormatReal, ShortestWithIntegralSuffix) {
  EXPECT_EQ(format_real(1.0), "1.0");
  EXPECT_EQ(format_real(0.0), "0.0");
  EXPECT_EQ(format_real(-1.0), "-1.0");
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(format_real(0.1 + 0.2), "0.30000000000000004");
}

}  // namespace
}  // namespace balderdash
