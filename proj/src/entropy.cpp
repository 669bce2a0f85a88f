#include "dct3d/entropy.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "dct3d/errors.hpp"

namespace dct3d {
namespace {

constexpr std::array<std::uint8_t, 16> kDcLuminanceCounts = {0, 1, 5, 1, 1, 1, 1, 1,
                                                             1, 0, 0, 0, 0, 0, 0, 0};
constexpr std::array<std::uint8_t, 12> kDcLuminanceSymbols = {0, 1, 2, 3, 4,  5,
                                                              6, 7, 8, 9, 10, 11};
constexpr std::array<std::uint8_t, 16> kAcLuminanceCounts = {0, 2, 1, 3, 3, 2, 4, 3,
                                                             5, 5, 4, 4, 0, 0, 1, 125};
constexpr std::array<std::uint8_t, 162> kAcLuminanceSymbols = {
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61,
    0x07, 0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xA1, 0x08, 0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52,
    0xD1, 0xF0, 0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0A, 0x16, 0x17, 0x18, 0x19, 0x1A, 0x25,
    0x26, 0x27, 0x28, 0x29, 0x2A, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44, 0x45,
    0x46, 0x47, 0x48, 0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5A, 0x63, 0x64,
    0x65, 0x66, 0x67, 0x68, 0x69, 0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7A, 0x83,
    0x84, 0x85, 0x86, 0x87, 0x88, 0x89, 0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99,
    0x9A, 0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6,
    0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5, 0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2, 0xD3,
    0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2, 0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8,
    0xE9, 0xEA, 0xF1, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8, 0xF9, 0xFA};

constexpr int kMaxCodeLength = 16;

// Canonical code assignment: codes of each length are consecutive, and
// moving to the next length shifts the running code left by one.
std::vector<Codeword> canonical_codes(std::span<const std::uint8_t, 16> counts,
                                      std::size_t symbol_count) {
  std::vector<Codeword> codes;
  std::uint32_t code = 0;
  for (int len = 1; len <= kMaxCodeLength; ++len) {
    for (int i = 0; i < counts[len - 1]; ++i) codes.push_back({code++, len});
    code <<= 1;
  }
  if (codes.size() != symbol_count) {
    fail(ErrorKind::kInvalidArgument, "Huffman length counts do not match symbol count");
  }
  return codes;
}

template <typename Map>
void check_prefix_free(const Map& table, const char* name) {
  std::vector<std::string> words;
  for (const auto& [symbol, code] : table) words.push_back(code.to_string());
  std::sort(words.begin(), words.end());
  for (std::size_t i = 1; i < words.size(); ++i) {
    if (words[i].starts_with(words[i - 1])) {
      fail(ErrorKind::kInvalidArgument, std::string(name) + " table is not prefix-free: '" +
                                            words[i - 1] + "' prefixes '" + words[i] + "'");
    }
  }
}

std::string run_category_label(int run, int cat) {
  return std::to_string(run) + "/" + std::to_string(cat);
}

}  // namespace

std::string Codeword::to_string() const {
  std::string s;
  for (int i = length - 1; i >= 0; --i) s.push_back(((bits >> i) & 1u) ? '1' : '0');
  return s;
}

Codeword Codeword::from_string(std::string_view bit_text) {
  require(bit_text.size() <= 32, "codeword longer than 32 bits");
  Codeword c{0, static_cast<int>(bit_text.size())};
  for (char ch : bit_text) {
    require(ch == '0' || ch == '1', "codeword text must contain only 0 and 1");
    c.bits = (c.bits << 1) | (ch == '1' ? 1u : 0u);
  }
  return c;
}

void BitWriter::put_bit(bool bit) {
  if (bit_count_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count_ % 8));
  ++bit_count_;
}

void BitWriter::put(Codeword c) {
  for (int i = c.length - 1; i >= 0; --i) put_bit((c.bits >> i) & 1u);
}

void BitWriter::pad_to_byte() {
  while (bit_count_ % 8 != 0) put_bit(true);
}

std::string BitWriter::bit_string() const {
  std::string s;
  s.reserve(bit_count_);
  for (std::uint64_t i = 0; i < bit_count_; ++i) {
    s.push_back((bytes_[i / 8] & (0x80u >> (i % 8))) ? '1' : '0');
  }
  return s;
}

BitReader::BitReader(std::span<const std::uint8_t> data)
    : BitReader(data, static_cast<std::uint64_t>(data.size()) * 8) {}

BitReader::BitReader(std::span<const std::uint8_t> data, std::uint64_t bit_limit)
    : data_(data), limit_(bit_limit) {
  require(bit_limit <= static_cast<std::uint64_t>(data.size()) * 8,
          "bit limit exceeds buffer length");
}

bool BitReader::read_bit() {
  if (pos_ >= limit_) fail(ErrorKind::kTruncatedStream, "bit stream exhausted");
  const bool bit = data_[pos_ / 8] & (0x80u >> (pos_ % 8));
  ++pos_;
  return bit;
}

std::uint32_t BitReader::read_bits(int count) {
  std::uint32_t v = 0;
  for (int i = 0; i < count; ++i) v = (v << 1) | (read_bit() ? 1u : 0u);
  return v;
}

HuffmanTables::HuffmanTables(std::map<int, Codeword> dc, std::map<RunCategory, Codeword> ac)
    : dc_(std::move(dc)), ac_(std::move(ac)) {
  for (int cat = 0; cat <= kDcMaxCategory; ++cat) {
    require(dc_.contains(cat), "DC table lacks category " + std::to_string(cat));
  }
  for (int run = 0; run <= kMaxRunPerSymbol; ++run) {
    for (int cat = 1; cat <= kAcMaxCategory; ++cat) {
      require(ac_.contains({run, cat}), "AC table lacks " + run_category_label(run, cat));
    }
  }
  require(ac_.contains({0, 0}), "AC table lacks EOB");
  require(ac_.contains({15, 0}), "AC table lacks ZRL");
  for (const auto& [cat, code] : dc_) {
    require(code.length >= 1 && code.length <= kMaxCodeLength, "DC codeword length out of range");
  }
  for (const auto& [rc, code] : ac_) {
    require(code.length >= 1 && code.length <= kMaxCodeLength, "AC codeword length out of range");
  }
  check_prefix_free(dc_, "DC");
  check_prefix_free(ac_, "AC");
  for (const auto& [cat, code] : dc_) dc_lookup_.emplace(key(code), cat);
  for (const auto& [rc, code] : ac_) ac_lookup_.emplace(key(code), rc.first * 16 + rc.second);
}

HuffmanTables HuffmanTables::from_length_counts(std::span<const std::uint8_t, 16> dc_counts,
                                                std::span<const std::uint8_t> dc_symbols,
                                                std::span<const std::uint8_t, 16> ac_counts,
                                                std::span<const std::uint8_t> ac_symbols) {
  const auto dc_codes = canonical_codes(dc_counts, dc_symbols.size());
  const auto ac_codes = canonical_codes(ac_counts, ac_symbols.size());
  std::map<int, Codeword> dc;
  std::map<RunCategory, Codeword> ac;
  for (std::size_t i = 0; i < dc_codes.size(); ++i) dc.emplace(dc_symbols[i], dc_codes[i]);
  for (std::size_t i = 0; i < ac_codes.size(); ++i) {
    ac.emplace(RunCategory{ac_symbols[i] >> 4, ac_symbols[i] & 0x0F}, ac_codes[i]);
  }
  return HuffmanTables(std::move(dc), std::move(ac));
}

const HuffmanTables& HuffmanTables::jpeg_luminance() {
  static const HuffmanTables tables =
      from_length_counts(kDcLuminanceCounts, kDcLuminanceSymbols, kAcLuminanceCounts,
                         kAcLuminanceSymbols);
  return tables;
}

const Codeword& HuffmanTables::dc(int category) const {
  auto it = dc_.find(category);
  if (it == dc_.end()) {
    fail(ErrorKind::kRange, "DC category " + std::to_string(category) + " not in table");
  }
  return it->second;
}

const Codeword& HuffmanTables::ac(int run, int category) const {
  auto it = ac_.find({run, category});
  if (it == ac_.end()) {
    fail(ErrorKind::kRange, "AC symbol " + run_category_label(run, category) + " not in table");
  }
  return it->second;
}

int HuffmanTables::decode_symbol(BitReader& in,
                                 const std::unordered_map<std::uint64_t, int>& lookup,
                                 const char* table_name) {
  Codeword c;
  while (c.length < kMaxCodeLength) {
    c.bits = (c.bits << 1) | (in.read_bit() ? 1u : 0u);
    ++c.length;
    if (auto it = lookup.find(key(c)); it != lookup.end()) return it->second;
  }
  fail(ErrorKind::kCorruptStream,
       std::string("no ") + table_name + " codeword matches '" + c.to_string() + "'");
}

int HuffmanTables::decode_dc(BitReader& in) const { return decode_symbol(in, dc_lookup_, "DC"); }

HuffmanTables::RunCategory HuffmanTables::decode_ac(BitReader& in) const {
  const int symbol = decode_symbol(in, ac_lookup_, "AC");
  return {symbol / 16, symbol % 16};
}

std::string HuffmanTables::dump() const {
  std::ostringstream out;
  for (const auto& [cat, code] : dc_) out << "DC " << cat << ' ' << code.to_string() << '\n';
  for (const auto& [rc, code] : ac_) {
    out << "AC " << run_category_label(rc.first, rc.second) << ' ' << code.to_string();
    if (rc == RunCategory{0, 0}) out << " EOB";
    if (rc == RunCategory{15, 0}) out << " ZRL";
    out << '\n';
  }
  return out.str();
}

std::size_t TokenStream::covered_length() const {
  std::size_t len = 1;
  for (const auto& t : ac_tokens) len += static_cast<std::size_t>(t.run) + 1;
  return len;
}

int category(std::int32_t v, int max_category) {
  std::uint32_t mag = static_cast<std::uint32_t>(std::abs(static_cast<std::int64_t>(v)));
  int bits = 0;
  while (mag) {
    ++bits;
    mag >>= 1;
  }
  if (bits > max_category) {
    fail(ErrorKind::kRange, "value " + std::to_string(v) + " needs category " +
                                std::to_string(bits) + ", table covers up to " +
                                std::to_string(max_category));
  }
  return bits;
}

Codeword magnitude_bits(std::int32_t v) {
  require(v != 0, "zero has no magnitude bits");
  const int cat = category(v, 31);
  const std::uint32_t mask = (cat == 32) ? 0xFFFFFFFFu : ((1u << cat) - 1u);
  const std::uint32_t bits =
      v > 0 ? static_cast<std::uint32_t>(v) : (~static_cast<std::uint32_t>(-v)) & mask;
  return {bits, cat};
}

std::int32_t magnitude_value(std::uint32_t bits, int category) {
  if (category == 0) return 0;
  const std::uint32_t top = 1u << (category - 1);
  if (bits & top) return static_cast<std::int32_t>(bits);
  return static_cast<std::int32_t>(bits) - static_cast<std::int32_t>((1u << category) - 1u);
}

TokenStream tokenize(std::span<const std::int32_t> v) {
  require(!v.empty(), "cannot tokenize an empty block");
  TokenStream t;
  t.dc_value = v[0];
  int run = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] == 0) {
      ++run;
    } else {
      t.ac_tokens.push_back({run, v[i]});
      run = 0;
    }
  }
  t.terminated = run > 0;
  return t;
}

std::vector<std::int32_t> detokenize(const TokenStream& t, std::size_t block_len) {
  require(t.covered_length() <= block_len, "tokens cover more coefficients than the block holds");
  std::vector<std::int32_t> out(block_len, 0);
  out[0] = t.dc_value;
  std::size_t pos = 1;
  for (const auto& tok : t.ac_tokens) {
    pos += static_cast<std::size_t>(tok.run);
    out[pos++] = tok.value;
  }
  return out;
}

void encode_block(const TokenStream& tokens, const HuffmanTables& tables, std::size_t block_len,
                  BitWriter& out) {
  const int dc_cat = category(tokens.dc_value, kDcMaxCategory);
  std::vector<int> ac_cats;
  ac_cats.reserve(tokens.ac_tokens.size());
  for (const auto& tok : tokens.ac_tokens) {
    require(tok.value != 0 && tok.run >= 0, "AC tokens need a nonzero value and run >= 0");
    ac_cats.push_back(category(tok.value, kAcMaxCategory));
  }
  const std::size_t covered = tokens.covered_length();
  require(covered <= block_len, "tokens cover more coefficients than the block holds");
  require(tokens.terminated == (covered < block_len),
          "terminated flag must be set exactly when trailing zeros were cut");

  out.put(tables.dc(dc_cat));
  if (dc_cat > 0) out.put(magnitude_bits(tokens.dc_value));
  for (std::size_t i = 0; i < tokens.ac_tokens.size(); ++i) {
    const auto& tok = tokens.ac_tokens[i];
    int run = tok.run;
    while (run > kMaxRunPerSymbol) {
      out.put(tables.zrl());
      run -= kZrlZeros;
    }
    out.put(tables.ac(run, ac_cats[i]));
    out.put(magnitude_bits(tok.value));
  }
  if (tokens.terminated) out.put(tables.eob());
}

TokenStream decode_block(BitReader& in, const HuffmanTables& tables, std::size_t block_len) {
  require(block_len >= 1, "block length must be >= 1");
  TokenStream t;
  const int dc_cat = tables.decode_dc(in);
  t.dc_value = magnitude_value(in.read_bits(dc_cat), dc_cat);

  std::size_t pos = 1;
  int pending_zeros = 0;
  while (pos < block_len) {
    const auto [run, cat] = tables.decode_ac(in);
    if (cat == 0) {
      if (run == 0) {
        if (pending_zeros) fail(ErrorKind::kCorruptStream, "ZRL directly followed by EOB");
        t.terminated = true;
        return t;
      }
      // ZRL
      pending_zeros += kZrlZeros;
      pos += kZrlZeros;
      if (pos >= block_len) fail(ErrorKind::kCorruptStream, "zero run overflows the block");
      continue;
    }
    pos += static_cast<std::size_t>(run);
    if (pos >= block_len) fail(ErrorKind::kCorruptStream, "coefficients overflow the block");
    t.ac_tokens.push_back({pending_zeros + run, magnitude_value(in.read_bits(cat), cat)});
    pending_zeros = 0;
    ++pos;
  }
  return t;
}

}  // namespace dct3d
