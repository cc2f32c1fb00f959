#include "crashmod/bigint.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "crashmod/errors.hpp"

namespace crashmod {

std::size_t bit_length(const Bigint& n) {
  if (n == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

std::size_t byte_length(const Bigint& n) { return (bit_length(n) + 7) / 8; }

Bigint pow2(std::size_t k) {
  Bigint r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
  return r;
}

std::string to_hex(const Bigint& n) {
  if (n < 0) throw ValueRange("to_hex: negative value");
  return n.get_str(16);
}

Bigint from_hex(const std::string& text) {
  std::string_view s(text);
  if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
  }
  if (s.empty()) throw ParseError("from_hex: empty input");
  for (char ch : s) {
    if (!std::isxdigit(static_cast<unsigned char>(ch))) {
      throw ParseError("from_hex: invalid digit '" + std::string(1, ch) + "'");
    }
  }
  Bigint r;
  if (mpz_set_str(r.get_mpz_t(), std::string(s).c_str(), 16) != 0) {
    throw ParseError("from_hex: unparsable input");
  }
  return r;
}

namespace {

// order: 1 = most significant byte first, -1 = least significant first.
std::vector<std::uint8_t> export_bytes(const Bigint& n, std::size_t len,
                                       int order) {
  if (n < 0) throw ValueRange("byte export: negative value");
  std::size_t need = byte_length(n);
  if (need > len) {
    throw ValueRange("byte export: value needs " + std::to_string(need) +
                     " bytes, got " + std::to_string(len));
  }
  std::vector<std::uint8_t> out(len, 0);
  if (n == 0) return out;
  std::size_t written = 0;
  std::vector<std::uint8_t> raw(need);
  mpz_export(raw.data(), &written, order, 1, 0, 0, n.get_mpz_t());
  if (order == 1) {
    std::copy(raw.begin(), raw.begin() + written, out.end() - written);
  } else {
    std::copy(raw.begin(), raw.begin() + written, out.begin());
  }
  return out;
}

Bigint import_bytes(std::span<const std::uint8_t> bytes, int order) {
  Bigint r;
  if (bytes.empty()) return r;
  mpz_import(r.get_mpz_t(), bytes.size(), order, 1, 0, 0, bytes.data());
  return r;
}

}  // namespace

std::vector<std::uint8_t> to_bytes_be(const Bigint& n, std::size_t len) {
  return export_bytes(n, len, 1);
}

std::vector<std::uint8_t> to_bytes_le(const Bigint& n, std::size_t len) {
  return export_bytes(n, len, -1);
}

Bigint from_bytes_be(std::span<const std::uint8_t> bytes) {
  return import_bytes(bytes, 1);
}

Bigint from_bytes_le(std::span<const std::uint8_t> bytes) {
  return import_bytes(bytes, -1);
}

std::uint64_t to_u64(const Bigint& n) {
  if (n < 0 || bit_length(n) > 64) {
    throw ValueRange("to_u64: value out of range");
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

}  // namespace crashmod
