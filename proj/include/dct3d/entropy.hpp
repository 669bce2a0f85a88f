#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dct3d/errors.hpp"

namespace dct3d {

/// Up to 32 bits, written most-significant bit first.
struct Codeword {
  std::uint32_t bits = 0;
  int length = 0;

  std::string to_string() const;
  static Codeword from_string(std::string_view bit_text);
  bool operator==(const Codeword&) const = default;
};

class BitWriter {
 public:
  void put(Codeword c);
  void put_bit(bool bit);
  /// Pads with 1-bits up to the next byte boundary.
  void pad_to_byte();

  std::uint64_t bit_count() const noexcept { return bit_count_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<std::uint8_t> take_bytes() { return std::move(bytes_); }
  /// Written bits as a '0'/'1' string, for inspection.
  std::string bit_string() const;

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bit_count_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> data);
  BitReader(std::span<const std::uint8_t> data, std::uint64_t bit_limit);

  bool read_bit();
  std::uint32_t read_bits(int count);

  std::uint64_t position() const noexcept { return pos_; }
  std::uint64_t remaining() const noexcept { return limit_ - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::uint64_t limit_;
  std::uint64_t pos_ = 0;
};

inline constexpr int kDcMaxCategory = 11;
inline constexpr int kAcMaxCategory = 10;
inline constexpr int kMaxRunPerSymbol = 15;
inline constexpr int kZrlZeros = 16;

/// Huffman code set: DC categories 0..11, AC (run, category) symbols for
/// runs 0..15 and categories 1..10, plus EOB (0,0) and ZRL (15,0).
class HuffmanTables {
 public:
  using RunCategory = std::pair<int, int>;

  /// Validates coverage and prefix-freedom of both tables.
  HuffmanTables(std::map<int, Codeword> dc, std::map<RunCategory, Codeword> ac);

  /// Canonical codes from a code-length histogram (counts of 1..16-bit
  /// codes) and the symbol list, as tables are stored in JPEG files.
  static HuffmanTables from_length_counts(std::span<const std::uint8_t, 16> dc_counts,
                                          std::span<const std::uint8_t> dc_symbols,
                                          std::span<const std::uint8_t, 16> ac_counts,
                                          std::span<const std::uint8_t> ac_symbols);

  /// The JPEG baseline luminance DC and AC tables.
  static const HuffmanTables& jpeg_luminance();

  const Codeword& dc(int category) const;
  const Codeword& ac(int run, int category) const;
  const Codeword& eob() const { return ac(0, 0); }
  const Codeword& zrl() const { return ac(15, 0); }

  // Returns the category / (run, category) whose codeword starts at the
  // reader position, consuming it.
  int decode_dc(BitReader& in) const;
  RunCategory decode_ac(BitReader& in) const;

  /// One codeword per line: "DC <cat> <bits>", "AC <run>/<cat> <bits>",
  /// with EOB and ZRL labelled.
  std::string dump() const;

 private:
  static std::uint64_t key(const Codeword& c) {
    return (static_cast<std::uint64_t>(c.length) << 32) | c.bits;
  }
  static int decode_symbol(BitReader& in, const std::unordered_map<std::uint64_t, int>& lookup,
                           const char* table_name);

  std::map<int, Codeword> dc_;
  std::map<RunCategory, Codeword> ac_;
  std::unordered_map<std::uint64_t, int> dc_lookup_;
  std::unordered_map<std::uint64_t, int> ac_lookup_;  // value = run * 16 + category
};

struct AcToken {
  /// Zeros preceding `value`. May exceed 15; the coder splits long runs with ZRL.
  int run = 0;
  std::int32_t value = 0;
  bool operator==(const AcToken&) const = default;
};

struct TokenStream {
  std::int32_t dc_value = 0;
  std::vector<AcToken> ac_tokens;
  /// Trailing zeros were cut; an EOB follows the last token.
  bool terminated = false;

  /// Number of coefficients covered by the tokens (DC included).
  std::size_t covered_length() const;
  bool operator==(const TokenStream&) const = default;
};

/// Minimal b with |v| <= 2^b - 1. Throws a range error when b > max_category.
int category(std::int32_t v, int max_category = kDcMaxCategory);

/// Magnitude field of length category(v): plain binary for v > 0, the
/// one's complement of |v| for v < 0 (leading 0 marks a negative value).
Codeword magnitude_bits(std::int32_t v);
std::int32_t magnitude_value(std::uint32_t bits, int category);

TokenStream tokenize(std::span<const std::int32_t> v);
std::vector<std::int32_t> detokenize(const TokenStream& t, std::size_t block_len);

/// Appends the block's codewords. The stream is validated before anything
/// is written: values beyond table coverage raise a range error, and
/// `terminated` must hold exactly when the tokens cover fewer than
/// block_len coefficients.
void encode_block(const TokenStream& tokens, const HuffmanTables& tables, std::size_t block_len,
                  BitWriter& out);

TokenStream decode_block(BitReader& in, const HuffmanTables& tables, std::size_t block_len);

}  // namespace dct3d
