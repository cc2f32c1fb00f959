#include "crashmod/protocols.hpp"

#include <algorithm>

#include "crashmod/errors.hpp"
#include "crashmod/ntheory.hpp"

namespace crashmod {

std::vector<std::uint8_t> bytemix(std::span<const std::uint8_t> data) {
  // front half (which takes the extra byte for odd lengths) interleaved
  // with the back half: f0 b0 f1 b1 ...
  std::size_t n = data.size();
  std::size_t front = (n + 1) / 2;
  std::vector<std::uint8_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < front; ++i) {
    out.push_back(data[i]);
    if (front + i < n) out.push_back(data[front + i]);
  }
  return out;
}

std::vector<std::uint8_t> byteunmix(std::span<const std::uint8_t> data) {
  std::size_t n = data.size();
  std::size_t front = (n + 1) / 2;
  std::vector<std::uint8_t> out(n);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < front; ++i) {
    out[i] = data[pos++];
    if (front + i < n) out[front + i] = data[pos++];
  }
  return out;
}

WiprParams WiprParams::scaled(std::size_t n_bits) {
  WiprParams p;
  p.modulus_bits = n_bits;
  std::size_t msg_bits = n_bits - 8;
  auto to_bytes = [](std::size_t bits) { return bits - bits % 8; };
  p.challenge_bits = std::min<std::size_t>(80, std::max<std::size_t>(8, to_bytes(msg_bits / 2)));
  p.uid_bits = std::min<std::size_t>(
      16, std::max<std::size_t>(8, to_bytes((msg_bits - p.challenge_bits) / 2)));
  p.surplus_bits = p.challenge_bits;
  p.validate();
  return p;
}

void WiprParams::validate() const {
  if (modulus_bits < 32 || modulus_bits % 8 != 0) {
    throw Precondition("WiprParams: modulus_bits must be a multiple of 8, >= 32");
  }
  if (challenge_bits == 0 || challenge_bits % 8 != 0 || uid_bits == 0 ||
      uid_bits % 8 != 0) {
    throw Precondition("WiprParams: field sizes must be positive byte multiples");
  }
  if (challenge_bits + uid_bits + 8 > modulus_bits ||
      tag_random_bits() < 8 || tag_random_bits() % 8 != 0) {
    throw Precondition("WiprParams: fields do not fit the message layout");
  }
}

namespace {

void require_len(std::span<const std::uint8_t> field, std::size_t want,
                 const char* what) {
  if (field.size() != want) {
    throw FormatError(std::string(what) + ": expected " +
                      std::to_string(want) + " bytes, got " +
                      std::to_string(field.size()));
  }
}

std::vector<std::uint8_t> to_vec(std::span<const std::uint8_t> s) {
  return std::vector<std::uint8_t>(s.begin(), s.end());
}

}  // namespace

WiprMessage wipr_build_message(std::span<const std::uint8_t> challenge,
                               std::span<const std::uint8_t> uid,
                               const WiprParams& params, SeededRng& rng) {
  params.validate();
  require_len(challenge, params.challenge_bits / 8, "wipr challenge");
  require_len(uid, params.uid_bits / 8, "wipr uid");
  WiprMessage msg;
  msg.fields.scheme = Scheme::Wipr;
  msg.fields.challenge = to_vec(challenge);
  msg.fields.tag_random = rng.bytes(params.tag_random_bits() / 8);
  msg.fields.uid = to_vec(uid);

  std::vector<std::uint8_t> plain;
  plain.reserve(params.message_bytes());
  plain.insert(plain.end(), challenge.begin(), challenge.end());
  plain.insert(plain.end(), msg.fields.tag_random.begin(),
               msg.fields.tag_random.end());
  plain.insert(plain.end(), uid.begin(), uid.end());
  msg.mixed = bytemix(plain);
  msg.value = from_bytes_be(msg.mixed);
  return msg;
}

Ciphertext wipr_encrypt_message(const Bigint& m, const Bigint& n,
                                const WiprParams& params, SeededRng& rng) {
  Bigint r = rng.nbits(params.modulus_bits + params.surplus_bits);
  return Ciphertext{Scheme::Wipr, m * m + r * n};
}

Ciphertext wipr_respond(std::span<const std::uint8_t> challenge,
                        std::span<const std::uint8_t> uid, const Bigint& n,
                        const WiprParams& params, SeededRng& rng) {
  WiprMessage msg = wipr_build_message(challenge, uid, params, rng);
  return wipr_encrypt_message(msg.value, n, params, rng);
}

std::optional<FormattedMessage> wipr_extract(
    const Bigint& value, std::span<const std::uint8_t> challenge,
    const WiprParams& params) {
  std::size_t len = params.message_bytes();
  if (byte_length(value) > len) return std::nullopt;
  std::vector<std::uint8_t> plain = byteunmix(to_bytes_be(value, len));

  std::size_t cl = params.challenge_bits / 8;
  std::size_t rl = params.tag_random_bits() / 8;
  std::size_t ul = params.uid_bits / 8;
  if (!std::equal(plain.begin(), plain.begin() + cl, challenge.begin(),
                  challenge.end())) {
    return std::nullopt;
  }
  FormattedMessage out;
  out.scheme = Scheme::Wipr;
  out.challenge.assign(plain.begin(), plain.begin() + cl);
  out.tag_random.assign(plain.begin() + cl, plain.begin() + cl + rl);
  out.uid.assign(plain.begin() + cl + rl, plain.begin() + cl + rl + ul);
  return out;
}

std::vector<FormattedMessage> wipr_match_roots(
    const RootSet& roots, std::span<const std::uint8_t> challenge,
    const WiprParams& params) {
  std::vector<FormattedMessage> out;
  for (const Bigint& r : roots.roots) {
    if (auto msg = wipr_extract(r, challenge, params)) {
      out.push_back(std::move(*msg));
    }
  }
  return out;
}

std::optional<FormattedMessage> wipr_verify(
    const Ciphertext& ct, const RabinKeyPair& key,
    std::span<const std::uint8_t> challenge, const WiprParams& params) {
  if (ct.scheme != Scheme::Wipr) {
    throw Precondition("wipr_verify: ciphertext scheme mismatch");
  }
  params.validate();
  require_len(challenge, params.challenge_bits / 8, "wipr challenge");
  RootSet roots = decrypt(ct.value % key.n, key);
  auto matches = wipr_match_roots(roots, challenge, params);
  if (matches.empty()) return std::nullopt;
  if (matches.size() > 1) {
    throw AmbiguousMatch("wipr_verify: multiple roots parse as valid replies");
  }
  return matches.front();
}

RamonParams RamonParams::scaled(std::size_t n_bits) {
  RamonParams p;
  p.modulus_bits = n_bits;
  std::size_t nbytes = n_bits / 8;
  auto clamp = [](std::size_t v, std::size_t lo, std::size_t hi) {
    return std::max(lo, std::min(hi, v));
  };
  p.challenge_bytes = clamp(nbytes / 8, 1, 10);
  p.random_bytes = clamp(nbytes / 8, 1, 10);
  p.uid_bytes = clamp(nbytes / 8, 1, 8);
  p.validate();
  return p;
}

std::size_t RamonParams::filler_bytes() const {
  // challenge + random + TLV(2 + uid) + checksum(2) + zero terminator(1)
  std::size_t used =
      challenge_bytes + random_bytes + 2 + uid_bytes + 2 + 1;
  if (message_bytes() < used) {
    throw Precondition("RamonParams: fields do not fit the message layout");
  }
  return message_bytes() - used;
}

void RamonParams::validate() const {
  if (modulus_bits < 64 || modulus_bits % 8 != 0) {
    throw Precondition("RamonParams: modulus_bits must be a multiple of 8, >= 64");
  }
  if (challenge_bytes == 0 || random_bytes == 0 || uid_bytes == 0 ||
      uid_bytes > 255) {
    throw Precondition("RamonParams: field sizes must be positive (uid <= 255)");
  }
  (void)filler_bytes();  // throws when the layout overflows
}

std::uint16_t ones_complement_sum(std::span<const std::uint8_t> bytes) {
  std::uint32_t acc = 0;
  for (std::uint8_t b : bytes) {
    acc += b;
    acc = (acc & 0xFFFF) + (acc >> 16);  // end-around carry
  }
  return static_cast<std::uint16_t>(acc);
}

namespace {

constexpr std::uint8_t kUidTlvType = 0x55;

}  // namespace

Bigint RamonMessage::value() const { return from_bytes_le(bytes); }

RamonMessage ramon_format(std::span<const std::uint8_t> challenge,
                          std::span<const std::uint8_t> uid,
                          const RamonParams& params, SeededRng& rng) {
  params.validate();
  require_len(challenge, params.challenge_bytes, "ramon challenge");
  require_len(uid, params.uid_bytes, "ramon uid");

  RamonMessage msg;
  msg.challenge = to_vec(challenge);
  msg.tag_random = rng.bytes(params.random_bytes);
  msg.uid = to_vec(uid);

  std::vector<std::uint8_t>& out = msg.bytes;
  out.reserve(params.message_bytes());
  out.insert(out.end(), msg.challenge.begin(), msg.challenge.end());
  out.insert(out.end(), msg.tag_random.begin(), msg.tag_random.end());
  out.push_back(kUidTlvType);
  out.push_back(static_cast<std::uint8_t>(params.uid_bytes));
  out.insert(out.end(), uid.begin(), uid.end());
  out.insert(out.end(), params.filler_bytes(), 0);
  msg.checksum = ones_complement_sum(out);
  out.push_back(static_cast<std::uint8_t>(msg.checksum));
  out.push_back(static_cast<std::uint8_t>(msg.checksum >> 8));
  out.push_back(0);  // top byte stays clear, so value() < N
  return msg;
}

std::optional<RamonMessage> parse_ramon(std::span<const std::uint8_t> bytes,
                                        const RamonParams& params) {
  params.validate();
  if (bytes.size() != params.message_bytes()) return std::nullopt;
  if (bytes.back() != 0) return std::nullopt;

  std::size_t cs_off = bytes.size() - 3;
  std::uint16_t stored = static_cast<std::uint16_t>(bytes[cs_off]) |
                         static_cast<std::uint16_t>(bytes[cs_off + 1]) << 8;
  if (stored != ones_complement_sum(bytes.first(cs_off))) return std::nullopt;

  std::size_t pos = params.challenge_bytes + params.random_bytes;
  if (bytes[pos] != kUidTlvType) return std::nullopt;
  if (bytes[pos + 1] != params.uid_bytes) return std::nullopt;
  for (std::size_t i = pos + 2 + params.uid_bytes; i < cs_off; ++i) {
    if (bytes[i] != 0) return std::nullopt;  // filler must be zero
  }

  RamonMessage msg;
  msg.challenge.assign(bytes.begin(), bytes.begin() + params.challenge_bytes);
  msg.tag_random.assign(bytes.begin() + params.challenge_bytes,
                        bytes.begin() + pos);
  msg.uid.assign(bytes.begin() + pos + 2,
                 bytes.begin() + pos + 2 + params.uid_bytes);
  msg.checksum = stored;
  msg.bytes = to_vec(bytes);
  return msg;
}

RabinKeyPair ramon_modulus(std::size_t bits, SeededRng& rng) {
  if (bits < 32 || bits % 4 != 0) {
    throw ValueRange("ramon_modulus: bits must be >= 32 and divisible by 4");
  }
  std::size_t half = bits / 2;
  Bigint r = pow2(half);
  constexpr unsigned kMaxAttempts = 200'000;
  for (unsigned attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Bigint p = gen_blum_prime(half, rng);
    // q is forced: N = p*q == 1 (mod 2^half) has the unique odd solution
    // q == p^-1 below 2^half; it just has to be a suitable prime.
    Bigint q = mod_inverse(p, r);
    if (bit_length(q) != half) continue;
    if (q % 4 != 3) continue;
    if (q == p) continue;
    Bigint n = p * q;
    if (bit_length(n) != bits) continue;
    if (!is_probable_prime(q)) continue;
    return RabinKeyPair::from_primes(std::move(p), std::move(q));
  }
  throw GenerationFailed("ramon_modulus: no structured modulus found");
}

Ciphertext ramon_encrypt(const Bigint& m, const Bigint& n) {
  if (m < 0 || m >= n) throw ValueRange("ramon_encrypt: message must lie in [0, N)");
  return Ciphertext{Scheme::Ramon, mont_reduce(m, m, n)};
}

Ciphertext ramon_encrypt_with_r(const Bigint& m, const Bigint& modulus,
                                std::size_t r_bits) {
  if (modulus < 3 || mpz_even_p(modulus.get_mpz_t())) {
    throw InvalidModulus("ramon_encrypt_with_r: modulus must be odd and >= 3");
  }
  Bigint v = m % modulus;
  Bigint rinv = mod_inverse(pow2(r_bits) % modulus, modulus);
  return Ciphertext{Scheme::Ramon, (v * v % modulus) * rinv % modulus};
}

Bigint ramon_unblind(const Ciphertext& ct, const Bigint& n) {
  if (ct.scheme != Scheme::Ramon) {
    throw Precondition("ramon_unblind: ciphertext scheme mismatch");
  }
  return (ct.value * pow2(bit_length(n))) % n;
}

std::optional<FormattedMessage> ramon_extract(
    const Bigint& value, std::span<const std::uint8_t> challenge,
    const RamonParams& params) {
  if (byte_length(value) > params.message_bytes()) return std::nullopt;
  auto msg = parse_ramon(to_bytes_le(value, params.message_bytes()), params);
  if (!msg) return std::nullopt;
  if (!std::equal(msg->challenge.begin(), msg->challenge.end(),
                  challenge.begin(), challenge.end())) {
    return std::nullopt;
  }
  FormattedMessage out;
  out.scheme = Scheme::Ramon;
  out.challenge = std::move(msg->challenge);
  out.tag_random = std::move(msg->tag_random);
  out.uid = std::move(msg->uid);
  return out;
}

std::vector<FormattedMessage> ramon_match_roots(
    const RootSet& roots, std::span<const std::uint8_t> challenge,
    const RamonParams& params) {
  std::vector<FormattedMessage> out;
  for (const Bigint& r : roots.roots) {
    if (auto msg = ramon_extract(r, challenge, params)) {
      out.push_back(std::move(*msg));
    }
  }
  return out;
}

std::optional<FormattedMessage> ramon_verify(
    const Ciphertext& ct, const RabinKeyPair& key,
    std::span<const std::uint8_t> challenge, const RamonParams& params) {
  if (ct.scheme != Scheme::Ramon) {
    throw Precondition("ramon_verify: ciphertext scheme mismatch");
  }
  params.validate();
  require_len(challenge, params.challenge_bytes, "ramon challenge");
  Bigint c = ramon_unblind(ct, key.n);
  RootSet roots = decrypt(c, key);
  auto matches = ramon_match_roots(roots, challenge, params);
  if (matches.empty()) return std::nullopt;
  if (matches.size() > 1) {
    throw AmbiguousMatch("ramon_verify: multiple roots parse as valid replies");
  }
  return matches.front();
}

}  // namespace crashmod
