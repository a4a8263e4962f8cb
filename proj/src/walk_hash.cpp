#include "polywalk/walk_hash.hpp"

#include <stdexcept>

namespace polywalk {

HashParams::HashParams(std::vector<TriangularSystem> members, std::uint32_t r,
                       std::vector<FieldElement> w0)
    : members_(std::move(members)), r_(r), w0_(std::move(w0)) {
  if (r_ < 1 || r_ > 20) throw std::invalid_argument("HashParams: r must be in [1, 20]");
  if (members_.size() != (std::size_t(1) << r_))
    throw std::invalid_argument("HashParams: need exactly 2^r members");
  const TriangularSystem& head = members_.front();
  for (const TriangularSystem& s : members_) {
    if (!(s.shape == head.shape) || s.prime().value() != head.prime().value())
      throw std::invalid_argument("HashParams: members must share shape and modulus");
    ValidationReport rep = validate(s);
    if (!rep.ok())
      throw std::invalid_argument("HashParams: member fails validation:\n" + rep.to_string());
    if (!is_permutation(s).is_permutation)
      throw std::invalid_argument("HashParams: member is not a permutation of F_p^{m+1}");
  }
  if (w0_.size() != head.dim())
    throw std::invalid_argument("HashParams: w0 must have m+1 coordinates");
  for (const FieldElement& x : w0_)
    if (x.modulus() != head.prime().value())
      throw std::invalid_argument("HashParams: w0 modulus mismatch");
}

namespace {

void check_bits(std::string_view bits) {
  for (char c : bits)
    if (c != '0' && c != '1')
      throw std::invalid_argument("bit string: only characters '0' and '1' are allowed");
}

}  // namespace

std::string pad_input(std::string_view bits, std::uint32_t r) {
  if (r < 1) throw std::invalid_argument("pad_input: r must be >= 1");
  check_bits(bits);
  const std::size_t rem = bits.size() % r;
  const std::size_t zeros = rem == 0 ? 0 : r - rem;
  std::string padded(zeros, '0');
  padded += bits;
  if (padded.empty())
    throw std::invalid_argument("pad_input: empty input produces no blocks");
  return padded;
}

std::vector<std::uint32_t> split_blocks(std::string_view padded, std::uint32_t r) {
  if (r < 1 || r > 20) throw std::invalid_argument("split_blocks: r must be in [1, 20]");
  check_bits(padded);
  if (padded.size() % r != 0)
    throw std::invalid_argument("split_blocks: length must be a multiple of r");
  std::vector<std::uint32_t> blocks;
  blocks.reserve(padded.size() / r);
  for (std::size_t i = 0; i < padded.size(); i += r) {
    std::uint32_t v = 0;
    for (std::size_t j = 0; j < r; ++j) v = (v << 1) | static_cast<std::uint32_t>(padded[i + j] - '0');
    blocks.push_back(v);
  }
  return blocks;
}

Digest walk_hash(const HashParams& params, std::string_view bits) {
  const std::vector<std::uint32_t> blocks = split_blocks(pad_input(bits, params.r()), params.r());
  const std::uint32_t d = params.m() + 1;
  std::vector<std::uint64_t> cur(d), next(d);
  for (std::uint32_t j = 0; j < d; ++j) cur[j] = params.w0()[j].value();
  for (std::uint32_t block : blocks) {
    params.members()[block].apply(cur, next);
    std::swap(cur, next);
  }
  Digest digest;
  digest.coords.reserve(d);
  for (std::uint32_t j = 0; j < d; ++j) digest.coords.emplace_back(cur[j], params.prime());
  digest.bits = serialize_state(digest.coords, params.coord_bits());
  return digest;
}

std::string serialize_state(std::span<const FieldElement> w, unsigned width) {
  if (width == 0 || width > 63)
    throw std::invalid_argument("serialize_state: width must be in [1, 63]");
  std::string out;
  out.reserve(w.size() * width);
  for (const FieldElement& x : w) {
    if (x.value() >> width)
      throw std::invalid_argument("serialize_state: width too small for residue");
    for (unsigned b = width; b-- > 0;) out += ((x.value() >> b) & 1) ? '1' : '0';
  }
  return out;
}

std::vector<FieldElement> parse_state(std::string_view bits, const Prime& p,
                                      std::uint32_t count, unsigned width) {
  check_bits(bits);
  if (bits.size() != static_cast<std::size_t>(count) * width)
    throw std::invalid_argument("parse_state: unexpected length");
  std::vector<FieldElement> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint64_t v = 0;
    for (unsigned b = 0; b < width; ++b)
      v = (v << 1) | static_cast<std::uint64_t>(bits[i * width + b] - '0');
    if (v >= p.value()) throw std::invalid_argument("parse_state: residue out of range");
    out.emplace_back(v, p);
  }
  return out;
}

std::string bits_from_hex(std::string_view hex) {
  std::string bits;
  bits.reserve(hex.size() * 4);
  for (char c : hex) {
    unsigned v;
    if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a') + 10;
    else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A') + 10;
    else throw std::invalid_argument("bits_from_hex: invalid hex digit");
    for (unsigned b = 4; b-- > 0;) bits += ((v >> b) & 1) ? '1' : '0';
  }
  return bits;
}

std::string hex_from_bits(std::string_view bits) {
  check_bits(bits);
  const std::size_t rem = bits.size() % 4;
  std::string padded(rem == 0 ? 0 : 4 - rem, '0');
  padded += bits;
  std::string hex;
  hex.reserve(padded.size() / 4);
  for (std::size_t i = 0; i < padded.size(); i += 4) {
    unsigned v = 0;
    for (std::size_t j = 0; j < 4; ++j) v = (v << 1) | static_cast<unsigned>(padded[i + j] - '0');
    hex += "0123456789abcdef"[v];
  }
  return hex;
}

}  // namespace polywalk
