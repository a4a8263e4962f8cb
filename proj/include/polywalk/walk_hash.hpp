#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "polywalk/field.hpp"
#include "polywalk/systems.hpp"

namespace polywalk {

// Parameters of the input-driven polynomial walk: 2^r permutation members
// sharing one shape and modulus, plus a fixed starting vector.
class HashParams {
public:
  HashParams(std::vector<TriangularSystem> members, std::uint32_t r,
             std::vector<FieldElement> w0);

  const Prime& prime() const { return members_.front().prime(); }
  std::uint32_t m() const { return members_.front().m(); }
  std::uint32_t r() const { return r_; }
  const std::vector<TriangularSystem>& members() const { return members_; }
  const std::vector<FieldElement>& w0() const { return w0_; }
  // Bit width of one serialized coordinate (bit length of p).
  unsigned coord_bits() const { return members_.front().prime().bit_width(); }

private:
  std::vector<TriangularSystem> members_;
  std::uint32_t r_;
  std::vector<FieldElement> w0_;
};

struct Digest {
  std::vector<FieldElement> coords;  // w_J
  std::string bits;                  // fixed-width big-endian serialization
};

// Left-pads with zeros until the length is a multiple of r (at most r-1
// added).  Rejects input that is empty after padding: it produces no blocks.
std::string pad_input(std::string_view bits, std::uint32_t r);

// Splits a padded string into r-bit blocks, each read MSB-first.
std::vector<std::uint32_t> split_blocks(std::string_view padded, std::uint32_t r);

// w_j = F_{block_j}(w_{j-1}); returns w_J with its serialization.
Digest walk_hash(const HashParams& params, std::string_view bits);

// Each coordinate as a width-bit big-endian field, concatenated; requires
// every value to fit in `width` bits.
std::string serialize_state(std::span<const FieldElement> w, unsigned width);
std::vector<FieldElement> parse_state(std::string_view bits, const Prime& p,
                                      std::uint32_t count, unsigned width);

// Hex digits expanded MSB-first, four bits each.
std::string bits_from_hex(std::string_view hex);
// Bit string packed into hex, left-padded with zeros to a whole nibble.
std::string hex_from_bits(std::string_view bits);

}  // namespace polywalk
