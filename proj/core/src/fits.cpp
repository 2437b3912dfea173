// Copyright 2026 The xami-tools Authors. All Rights Reserved.
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

#include "xami/fits.hpp"

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xami/error.hpp"

namespace xami {
namespace {

constexpr std::size_t kBlockSize = 2880;
constexpr std::size_t kCardSize = 80;

struct Card {
  std::string keyword;
  std::string value;  // raw value field, comment stripped, trimmed
  bool has_value = false;
  std::size_t offset = 0;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && s[b] == ' ') ++b;
  while (e > b && s[e - 1] == ' ') --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(FitsErrorKind kind, std::size_t offset, const std::string& msg) {
  throw FitsError(kind, offset, "FITS: " + msg + " (byte offset " + std::to_string(offset) + ")");
}

Card parse_card(std::span<const std::byte> raw, std::size_t offset) {
  std::string text(kCardSize, ' ');
  for (std::size_t i = 0; i < kCardSize; ++i) {
    const auto ch = static_cast<unsigned char>(raw[i]);
    if (ch < 0x20 || ch > 0x7e)
      fail(FitsErrorKind::kMalformedCard, offset + i, "non-ASCII byte in header card");
    text[i] = static_cast<char>(ch);
  }
  Card card;
  card.offset = offset;
  card.keyword = trim(std::string_view(text).substr(0, 8));
  for (char ch : card.keyword) {
    if (!(std::isupper(static_cast<unsigned char>(ch)) || std::isdigit(static_cast<unsigned char>(ch)) ||
          ch == '-' || ch == '_')) {
      fail(FitsErrorKind::kMalformedCard, offset, "invalid keyword '" + card.keyword + "'");
    }
  }
  if (text.compare(8, 2, "= ") != 0) return card;
  if (card.keyword == "COMMENT" || card.keyword == "HISTORY" || card.keyword.empty()) return card;

  card.has_value = true;
  std::string_view field = std::string_view(text).substr(10);
  std::string value;
  std::size_t i = 0;
  while (i < field.size() && field[i] == ' ') ++i;
  if (i < field.size() && field[i] == '\'') {
    // Quoted string; '' escapes a quote.
    ++i;
    bool closed = false;
    while (i < field.size()) {
      if (field[i] == '\'') {
        if (i + 1 < field.size() && field[i + 1] == '\'') {
          value.push_back('\'');
          i += 2;
          continue;
        }
        closed = true;
        break;
      }
      value.push_back(field[i++]);
    }
    if (!closed)
      fail(FitsErrorKind::kMalformedCard, offset, "unterminated string in card " + card.keyword);
    card.value = "'" + trim(value) + "'";
  } else {
    const auto slash = field.find('/', i);
    card.value = trim(field.substr(i, slash == std::string_view::npos ? std::string_view::npos : slash - i));
  }
  return card;
}

std::int64_t card_int(const Card& card) {
  const std::string& s = card.value;
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    fail(FitsErrorKind::kMalformedCard, card.offset,
         "card " + card.keyword + " has non-integer value '" + s + "'");
  }
  if (pos != s.size())
    fail(FitsErrorKind::kMalformedCard, card.offset,
         "card " + card.keyword + " has non-integer value '" + s + "'");
  return v;
}

double card_real(const Card& card) {
  std::string s = card.value;
  for (auto& ch : s)
    if (ch == 'D' || ch == 'd') ch = 'E';
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail(FitsErrorKind::kMalformedCard, card.offset,
         "card " + card.keyword + " has non-numeric value '" + card.value + "'");
  }
  if (pos != s.size())
    fail(FitsErrorKind::kMalformedCard, card.offset,
         "card " + card.keyword + " has non-numeric value '" + card.value + "'");
  return v;
}

std::uint64_t load_be(const std::byte* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v = (v << 8) | std::to_integer<std::uint64_t>(p[i]);
  return v;
}

double decode_pixel(const std::byte* p, int bitpix) {
  switch (bitpix) {
    case 8:
      return static_cast<double>(std::to_integer<std::uint8_t>(p[0]));
    case 16:
      return static_cast<double>(static_cast<std::int16_t>(load_be(p, 2)));
    case 32:
      return static_cast<double>(static_cast<std::int32_t>(load_be(p, 4)));
    case -32:
      return static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(load_be(p, 4))));
    case -64:
      return std::bit_cast<double>(load_be(p, 8));
    default:
      return 0.0;
  }
}

}  // namespace

PixelGrid read_fits(std::span<const std::byte> bytes) {
  if (bytes.size() < kCardSize)
    fail(FitsErrorKind::kNotFits, 0, "stream shorter than one header card");

  std::map<std::string, Card> cards;
  std::size_t offset = 0;
  bool saw_end = false;
  while (!saw_end) {
    if (offset + kBlockSize > bytes.size())
      fail(FitsErrorKind::kTruncatedHeader, offset, "header ends before END card");
    for (std::size_t c = 0; c < kBlockSize / kCardSize; ++c) {
      const std::size_t at = offset + c * kCardSize;
      Card card = parse_card(bytes.subspan(at, kCardSize), at);
      if (at == 0) {
        if (card.keyword != "SIMPLE" || !card.has_value)
          fail(FitsErrorKind::kNotFits, 0, "first card is not SIMPLE");
        if (card.value != "T")
          fail(FitsErrorKind::kNotFits, 0, "SIMPLE is not T");
      }
      if (card.keyword == "END") {
        saw_end = true;
        break;
      }
      if (card.has_value) cards.try_emplace(card.keyword, std::move(card));
    }
    offset += kBlockSize;
  }
  const std::size_t data_offset = offset;

  auto require = [&](const char* key) -> const Card& {
    auto it = cards.find(key);
    if (it == cards.end())
      fail(FitsErrorKind::kMissingKeyword, 0, std::string("missing required keyword ") + key);
    return it->second;
  };

  const Card& bitpix_card = require("BITPIX");
  const auto bitpix = static_cast<int>(card_int(bitpix_card));
  if (bitpix != 8 && bitpix != 16 && bitpix != 32 && bitpix != -32 && bitpix != -64)
    fail(FitsErrorKind::kUnsupportedBitpix, bitpix_card.offset,
         "unsupported BITPIX = " + std::to_string(bitpix));

  const Card& naxis_card = require("NAXIS");
  const auto naxis = card_int(naxis_card);
  if (naxis != 2)
    fail(FitsErrorKind::kUnsupportedNaxis, naxis_card.offset,
         "NAXIS = " + std::to_string(naxis) + ", only 2-D images are supported");

  const Card& n1_card = require("NAXIS1");
  const Card& n2_card = require("NAXIS2");
  const auto n1 = card_int(n1_card);
  const auto n2 = card_int(n2_card);
  if (n1 < 1) fail(FitsErrorKind::kMalformedCard, n1_card.offset, "NAXIS1 must be >= 1");
  if (n2 < 1) fail(FitsErrorKind::kMalformedCard, n2_card.offset, "NAXIS2 must be >= 1");

  double bscale = 1.0, bzero = 0.0;
  if (auto it = cards.find("BSCALE"); it != cards.end()) bscale = card_real(it->second);
  if (auto it = cards.find("BZERO"); it != cards.end()) bzero = card_real(it->second);

  const auto width = static_cast<std::size_t>(n1);
  const auto height = static_cast<std::size_t>(n2);
  const std::size_t pixel_bytes = static_cast<std::size_t>(bitpix < 0 ? -bitpix : bitpix) / 8;
  const std::size_t need = width * height * pixel_bytes;
  if (bytes.size() < data_offset + need) {
    fail(FitsErrorKind::kTruncatedData, bytes.size(),
         "data unit truncated: need " + std::to_string(need) + " bytes, have " +
             std::to_string(bytes.size() > data_offset ? bytes.size() - data_offset : 0));
  }

  std::vector<double> values(width * height);
  const std::byte* p = bytes.data() + data_offset;
  const bool scaled = bscale != 1.0 || bzero != 0.0;
  for (std::size_t i = 0; i < values.size(); ++i, p += pixel_bytes) {
    const double raw = decode_pixel(p, bitpix);
    values[i] = scaled ? bzero + bscale * raw : raw;
  }

  PixelGrid grid(width, height, std::move(values));
  replace_non_finite(grid);
  return grid;
}

PixelGrid read_fits_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_fits(std::as_bytes(std::span(raw)));
}

}  // namespace xami
