#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "indexcode/error.hpp"
#include "indexcode/field.hpp"
#include "indexcode/instance.hpp"
#include "indexcode/lincode.hpp"

namespace indexcode {

using Symbol = std::uint8_t;

/// Read-only window onto a message vector that only exposes one user's side
/// information. Reading anything else marks the view as violated and yields 0,
/// so a decoder that peeks at unknown messages fails verification.
class SideView {
 public:
  SideView(const Symbol* x, int m, UserMask allowed, bool* violation)
      : x_(x), m_(m), allowed_(allowed), violation_(violation) {}

  int m() const noexcept { return m_; }

  // 1-based message index.
  Symbol operator()(int j) const {
    if (j < 1 || j > m_ || !((allowed_ >> (j - 1)) & 1u)) {
      *violation_ = true;
      return 0;
    }
    return x_[j - 1];
  }

  bool knows(int j) const noexcept { return j >= 1 && j <= m_ && ((allowed_ >> (j - 1)) & 1u); }

  // Messages offset+1 .. offset+count, renumbered from 1.
  SideView block(int offset, int count) const {
    return SideView(x_ + offset, count, (allowed_ >> offset) & full_mask(count), violation_);
  }

 private:
  const Symbol* x_;
  int m_;
  UserMask allowed_;
  bool* violation_;
};

using Encoder = std::function<void(std::span<const Symbol> x, std::span<Symbol> z)>;
using Decoder = std::function<Symbol(std::span<const Symbol> codeword, const SideView& side)>;

inline constexpr int kMaxCodewordLength = 64;

/// Any encoder from alphabet^m to alphabet^r, optionally with one decoder per
/// user. The alphabet is a FieldSpec so linear and composed codes can use
/// field addition on symbols.
struct GeneralCode {
  std::string name;
  int m = 0;
  int r = 0;
  FieldSpec alphabet = field_make(2);
  Encoder encoder;
  std::vector<Decoder> decoders;

  bool has_decoders() const { return m == 0 || decoders.size() == static_cast<std::size_t>(m); }
  Rate rate() const { return Rate::of(r, 1); }
};

inline std::vector<Symbol> encode(const GeneralCode& code, std::span<const Symbol> x) {
  if (x.size() != static_cast<std::size_t>(code.m)) {
    throw AlphabetMismatch("message vector has " + std::to_string(x.size()) + " symbols, code expects " +
                           std::to_string(code.m));
  }
  for (Symbol s : x) {
    if (s >= code.alphabet.q()) {
      throw AlphabetMismatch("symbol " + std::to_string(s) + " outside GF(" + std::to_string(code.alphabet.q()) + ")");
    }
  }
  std::vector<Symbol> z(static_cast<std::size_t>(code.r));
  if (code.r > 0) code.encoder(x, z);
  return z;
}

// ---------------------------------------------------------------------------
// Reports

enum class VerifyMode { confusability, decoders };

inline const char* to_string(VerifyMode m) { return m == VerifyMode::confusability ? "confusability" : "decoders"; }

struct UserStatus {
  int user = 0;
  bool pass = true;
  // Confusability: two vectors agreeing on A_i, differing at i, same codeword.
  // Decoders: witness_a is the vector the decoder got wrong.
  std::vector<Symbol> witness_a;
  std::vector<Symbol> witness_b;
  std::string note;
};

struct VerificationReport {
  VerifyMode mode = VerifyMode::confusability;
  bool sampled = false;
  std::uint64_t seed = 0;
  std::uint64_t messages_checked = 0;
  std::vector<UserStatus> users;

  bool all_pass() const {
    return std::all_of(users.begin(), users.end(), [](const UserStatus& u) { return u.pass; });
  }
  std::vector<int> failing_users() const {
    std::vector<int> out;
    for (const auto& u : users) {
      if (!u.pass) out.push_back(u.user);
    }
    return out;
  }
};

inline constexpr int kEnumerationLog2Budget = 26;
inline constexpr int kTruthTableLog2Budget = 24;
inline constexpr std::uint64_t kDefaultSampleSeed = 0x1D5EED;

namespace detail {

// q^e, or nullopt past 2^limit_log2.
inline std::optional<std::uint64_t> bounded_power(int q, int e, int limit_log2) {
  std::uint64_t v = 1;
  const std::uint64_t limit = std::uint64_t{1} << limit_log2;
  for (int k = 0; k < e; ++k) {
    v *= static_cast<std::uint64_t>(q);
    if (v > limit) return std::nullopt;
  }
  return v;
}

inline std::vector<Symbol> digits_of(std::uint64_t index, int m, int q) {
  std::vector<Symbol> x(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    x[static_cast<std::size_t>(j)] = static_cast<Symbol>(index % static_cast<std::uint64_t>(q));
    index /= static_cast<std::uint64_t>(q);
  }
  return x;
}

/// Reflected q-ary Gray code over m digits, digit 0 least significant.
/// Consecutive ranks differ in exactly one digit.
class GrayWalker {
 public:
  GrayWalker(int m, int q, std::uint64_t start) : m_(m), q_(q), rank_(start), digits_(digits_of(start, m, q)) {
    gray_.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) refresh(k);
  }

  std::span<const Symbol> word() const { return gray_; }
  std::uint64_t rank() const noexcept { return rank_; }

  // Advances to the next rank; returns the changed position.
  int next() {
    ++rank_;
    int carry = 0;
    while (carry < m_) {
      auto& d = digits_[static_cast<std::size_t>(carry)];
      if (++d < q_) break;
      d = 0;
      ++carry;
    }
    int changed = -1;
    for (int k = 0; k <= carry && k < m_; ++k) {
      const Symbol before = gray_[static_cast<std::size_t>(k)];
      refresh(k);
      if (gray_[static_cast<std::size_t>(k)] != before) changed = k;
    }
    return changed;
  }

 private:
  // Digit k is reflected when the number formed by the digits above it is odd.
  void refresh(int k) {
    std::uint64_t high_parity = 0;
    if (q_ % 2 == 0) {
      high_parity = k + 1 < m_ ? digits_[static_cast<std::size_t>(k + 1)] & 1u : 0;
    } else {
      for (int j = k + 1; j < m_; ++j) high_parity += digits_[static_cast<std::size_t>(j)];
      high_parity &= 1u;
    }
    const Symbol d = digits_[static_cast<std::size_t>(k)];
    gray_[static_cast<std::size_t>(k)] = high_parity ? static_cast<Symbol>(q_ - 1 - d) : d;
  }

  int m_;
  int q_;
  std::uint64_t rank_;
  std::vector<Symbol> digits_;
  std::vector<Symbol> gray_;
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs body(chunk) for chunk in [0, chunks) on up to `threads` workers.
template <class Body>
void parallel_chunks(std::size_t chunks, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (threads == 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = cursor++; c < chunks; c = cursor++) body(c);
    });
  }
}

}  // namespace detail

/// Universal decodability check: user i can decode iff no two message vectors
/// agree on A_i, differ at i, and share a codeword.
///
/// All codewords are tabulated once (in Gray order); then for each user the
/// message space is walked grouped by the side-information assignment, and
/// within a group codewords are bucketed by the requested symbol. Requires
/// q^m <= 2^26.
inline VerificationReport verify_confusability(const Instance& inst, const GeneralCode& code, unsigned threads = 0) {
  if (code.m != inst.m()) throw DimensionMismatch("code and instance user counts differ");
  const int q = code.alphabet.q();
  const auto space = detail::bounded_power(q, code.m, kEnumerationLog2Budget);
  if (!space) throw BudgetExceeded("q^m exceeds the 2^26 enumeration budget", 0);
  const auto codeword_space = detail::bounded_power(q, code.r, 32);
  if (!codeword_space) throw BudgetExceeded("codeword alphabet too large to index", 0);

  // Packed codeword index per message index.
  std::vector<std::uint32_t> table(*space);
  {
    detail::GrayWalker walk(code.m, q, 0);
    std::array<Symbol, kMaxCodewordLength> z{};
    std::vector<std::uint64_t> weight(static_cast<std::size_t>(code.m));
    std::uint64_t w = 1;
    for (auto& wt : weight) {
      wt = w;
      w *= static_cast<std::uint64_t>(q);
    }
    for (std::uint64_t n = 0; n < *space; ++n) {
      if (n) walk.next();
      const auto x = walk.word();
      std::uint64_t index = 0;
      for (int j = 0; j < code.m; ++j) index += x[static_cast<std::size_t>(j)] * weight[static_cast<std::size_t>(j)];
      if (code.r) code.encoder(x, std::span<Symbol>(z.data(), static_cast<std::size_t>(code.r)));
      std::uint32_t packed = 0;
      for (int k = code.r - 1; k >= 0; --k) packed = packed * static_cast<std::uint32_t>(q) + z[static_cast<std::size_t>(k)];
      table[index] = packed;
    }
  }

  VerificationReport report;
  report.mode = VerifyMode::confusability;
  report.messages_checked = *space;
  report.users.resize(static_cast<std::size_t>(code.m));

  detail::parallel_chunks(static_cast<std::size_t>(code.m), detail::resolve_threads(threads), [&](std::size_t chunk) {
    const int user = static_cast<int>(chunk) + 1;
    UserStatus& status = report.users[chunk];
    status.user = user;
    std::vector<std::uint64_t> weight(static_cast<std::size_t>(code.m));
    std::uint64_t w = 1;
    for (auto& wt : weight) {
      wt = w;
      w *= static_cast<std::uint64_t>(q);
    }
    // Inner digits: the requested message plus its interference. Outer digits:
    // the side information.
    std::vector<int> inner;
    std::vector<int> outer;
    for (int j = 1; j <= code.m; ++j) (inst.knows(user, j) ? outer : inner).push_back(j - 1);

    const bool dense = *codeword_space <= (std::uint64_t{1} << 20);
    std::vector<std::uint32_t> stamp(dense ? *codeword_space : 0, 0);
    std::vector<std::uint64_t> first(dense ? *codeword_space : 0);
    std::unordered_map<std::uint32_t, std::uint64_t> sparse;

    std::vector<Symbol> outer_digits(outer.size(), 0);
    std::vector<Symbol> inner_digits(inner.size(), 0);
    const std::size_t self_pos = static_cast<std::size_t>(
        std::find(inner.begin(), inner.end(), user - 1) - inner.begin());
    std::uint64_t outer_base = 0;
    std::uint32_t group = 0;
    for (;;) {
      ++group;
      sparse.clear();
      std::uint64_t offset = 0;
      std::fill(inner_digits.begin(), inner_digits.end(), Symbol{0});
      for (;;) {
        const std::uint64_t index = outer_base + offset;
        const std::uint32_t cw = table[index];
        const Symbol xi = inner_digits[self_pos];
        std::optional<std::uint64_t> clash;
        if (dense) {
          if (stamp[cw] != group) {
            stamp[cw] = group;
            first[cw] = index;
          } else if (detail::digits_of(first[cw], code.m, q)[static_cast<std::size_t>(user - 1)] != xi) {
            clash = first[cw];
          }
        } else {
          auto [it, inserted] = sparse.emplace(cw, index);
          if (!inserted && detail::digits_of(it->second, code.m, q)[static_cast<std::size_t>(user - 1)] != xi) {
            clash = it->second;
          }
        }
        if (clash) {
          status.pass = false;
          status.witness_a = detail::digits_of(*clash, code.m, q);
          status.witness_b = detail::digits_of(index, code.m, q);
          return;
        }
        // Odometer over the inner digits.
        std::size_t k = 0;
        for (; k < inner.size(); ++k) {
          const std::uint64_t wt = weight[static_cast<std::size_t>(inner[k])];
          if (++inner_digits[k] < q) {
            offset += wt;
            break;
          }
          inner_digits[k] = 0;
          offset -= wt * static_cast<std::uint64_t>(q - 1);
        }
        if (k == inner.size()) break;
      }
      std::size_t k = 0;
      for (; k < outer.size(); ++k) {
        const std::uint64_t wt = weight[static_cast<std::size_t>(outer[k])];
        if (++outer_digits[k] < q) {
          outer_base += wt;
          break;
        }
        outer_digits[k] = 0;
        outer_base -= wt * static_cast<std::uint64_t>(q - 1);
      }
      if (k == outer.size()) break;
    }
  });
  return report;
}

inline constexpr std::uint64_t kSampleChunk = std::uint64_t{1} << 16;

namespace detail {

// Sample stream: chunk c of kSampleChunk vectors comes from mt19937_64 seeded
// with seed + c, so any chunk can be regenerated on its own.
inline void sample_vector(std::mt19937_64& rng, int q, std::span<Symbol> x) {
  std::uniform_int_distribution<int> symbol(0, q - 1);
  for (auto& s : x) s = static_cast<Symbol>(symbol(rng));
}

}  // namespace detail

/// Calls fn(x) on the first `count` vectors of the sample stream for `seed`,
/// the same vectors sampled-mode verify_decoders checks.
template <class Fn>
void for_each_sample(int m, int q, std::uint64_t count, std::uint64_t seed, Fn&& fn) {
  std::vector<Symbol> x(static_cast<std::size_t>(m));
  for (std::uint64_t chunk = 0; chunk * kSampleChunk < count; ++chunk) {
    std::mt19937_64 rng(seed + chunk);
    const std::uint64_t end = std::min(count, (chunk + 1) * kSampleChunk);
    for (std::uint64_t pos = chunk * kSampleChunk; pos < end; ++pos) {
      detail::sample_vector(rng, q, x);
      fn(std::span<const Symbol>(x));
    }
  }
}

struct DecoderCheckOptions {
  // 0 selects exhaustive mode; it then requires q^m <= 2^26.
  std::uint64_t samples = 0;
  std::uint64_t seed = kDefaultSampleSeed;
  unsigned threads = 0;
};

/// Runs every user's decoder on every (or every sampled) message vector and
/// compares against the requested symbol. Exhaustive mode walks the message
/// space in Gray order; sampled mode draws vectors from a fixed-seed stream
/// split into fixed-size chunks, so results do not depend on thread count.
inline VerificationReport verify_decoders(const Instance& inst, const GeneralCode& code,
                                          const DecoderCheckOptions& opts = {}) {
  if (code.m != inst.m()) throw DimensionMismatch("code and instance user counts differ");
  if (!code.has_decoders()) throw Error("code '" + code.name + "' has no decoders");
  const int q = code.alphabet.q();
  const bool sampled = opts.samples > 0;
  std::uint64_t total = opts.samples;
  if (!sampled) {
    const auto space = detail::bounded_power(q, code.m, kEnumerationLog2Budget);
    if (!space) throw BudgetExceeded("q^m exceeds the 2^26 enumeration budget; pass a sample count", 0);
    total = *space;
  }

  VerificationReport report;
  report.mode = VerifyMode::decoders;
  report.sampled = sampled;
  report.seed = sampled ? opts.seed : 0;
  report.messages_checked = total;
  report.users.resize(static_cast<std::size_t>(code.m));
  for (int i = 1; i <= code.m; ++i) report.users[static_cast<std::size_t>(i - 1)].user = i;

  constexpr std::uint64_t kChunk = kSampleChunk;
  const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  // Earliest failing position per user.
  std::vector<std::uint64_t> fail_at(static_cast<std::size_t>(code.m), UINT64_MAX);
  std::mutex merge;

  std::vector<UserMask> side(static_cast<std::size_t>(code.m));
  for (int i = 1; i <= code.m; ++i) side[static_cast<std::size_t>(i - 1)] = inst.side_mask(i);

  detail::parallel_chunks(chunks, detail::resolve_threads(opts.threads), [&](std::size_t chunk) {
    const std::uint64_t begin = chunk * kChunk;
    const std::uint64_t end = std::min(total, begin + kChunk);
    std::vector<Symbol> x(static_cast<std::size_t>(code.m));
    std::array<Symbol, kMaxCodewordLength> z{};
    const std::span<Symbol> zs(z.data(), static_cast<std::size_t>(code.r));
    std::vector<std::uint64_t> local_fail(static_cast<std::size_t>(code.m), UINT64_MAX);
    std::vector<std::vector<Symbol>> local_witness(static_cast<std::size_t>(code.m));
    std::vector<std::string> local_note(static_cast<std::size_t>(code.m));

    std::optional<detail::GrayWalker> walk;
    std::mt19937_64 rng(opts.seed + chunk);
    if (!sampled) walk.emplace(code.m, q, begin);

    for (std::uint64_t pos = begin; pos < end; ++pos) {
      if (sampled) {
        detail::sample_vector(rng, q, x);
      } else {
        if (pos != begin) walk->next();
        const auto w = walk->word();
        std::copy(w.begin(), w.end(), x.begin());
      }
      if (code.r) code.encoder(x, zs);
      for (int i = 0; i < code.m; ++i) {
        if (local_fail[static_cast<std::size_t>(i)] != UINT64_MAX) continue;
        bool violation = false;
        const SideView view(x.data(), code.m, side[static_cast<std::size_t>(i)], &violation);
        const Symbol got = code.decoders[static_cast<std::size_t>(i)](zs, view);
        if (violation || got != x[static_cast<std::size_t>(i)]) {
          local_fail[static_cast<std::size_t>(i)] = pos;
          local_witness[static_cast<std::size_t>(i)] = x;
          local_note[static_cast<std::size_t>(i)] =
              violation ? "decoder read a message outside its side information"
                        : "decoded " + std::to_string(got) + ", expected " + std::to_string(x[static_cast<std::size_t>(i)]);
        }
      }
    }
    std::lock_guard lock(merge);
    for (std::size_t i = 0; i < local_fail.size(); ++i) {
      if (local_fail[i] < fail_at[i]) {
        fail_at[i] = local_fail[i];
        report.users[i].pass = false;
        report.users[i].witness_a = std::move(local_witness[i]);
        report.users[i].note = std::move(local_note[i]);
      }
    }
  });
  return report;
}

// ---------------------------------------------------------------------------
// Constructions

enum class ComposeMode { noway, twoway };

/// The zero-user, zero-length code; neutral for noway composition.
inline GeneralCode empty_code(FieldSpec alphabet) {
  GeneralCode c;
  c.name = "empty";
  c.alphabet = alphabet;
  c.encoder = [](std::span<const Symbol>, std::span<Symbol>) {};
  return c;
}

/// Noway: concatenated codewords, r = r_a + r_b. Twoway: symbol-wise field
/// sum of the two codewords, r = r_a = r_b; each side's decoder first rebuilds
/// the other block's codeword from side information and subtracts it.
inline GeneralCode compose_codes(const GeneralCode& a, const GeneralCode& b, ComposeMode mode) {
  if (!(a.alphabet == b.alphabet)) throw AlphabetMismatch("composed codes must share an alphabet");
  if (a.m + b.m > kMaxUsers) throw IndexOutOfRange("composed code exceeds " + std::to_string(kMaxUsers) + " users");
  const FieldSpec f = a.alphabet;
  GeneralCode out;
  out.alphabet = f;
  out.m = a.m + b.m;
  const int ma = a.m;
  const int mb = b.m;
  const int ra = a.r;
  const int rb = b.r;
  auto enc_a = a.encoder;
  auto enc_b = b.encoder;

  if (mode == ComposeMode::noway) {
    if (ra + rb > kMaxCodewordLength) throw LengthMismatch("composed codeword too long");
    out.name = a.name + "|" + b.name;
    out.r = ra + rb;
    out.encoder = [=](std::span<const Symbol> x, std::span<Symbol> z) {
      if (ra) enc_a(x.first(static_cast<std::size_t>(ma)), z.first(static_cast<std::size_t>(ra)));
      if (rb) enc_b(x.subspan(static_cast<std::size_t>(ma)), z.subspan(static_cast<std::size_t>(ra)));
    };
    if (a.has_decoders() && b.has_decoders()) {
      for (int i = 0; i < ma; ++i) {
        out.decoders.push_back([dec = a.decoders[static_cast<std::size_t>(i)], ma, ra](std::span<const Symbol> z,
                                                                                      const SideView& side) {
          return dec(z.first(static_cast<std::size_t>(ra)), side.block(0, ma));
        });
      }
      for (int i = 0; i < mb; ++i) {
        out.decoders.push_back([dec = b.decoders[static_cast<std::size_t>(i)], ma, mb, ra](std::span<const Symbol> z,
                                                                                          const SideView& side) {
          return dec(z.subspan(static_cast<std::size_t>(ra)), side.block(ma, mb));
        });
      }
    }
    return out;
  }

  if (ra != rb) {
    throw LengthMismatch("twoway composition needs equal codeword lengths, got " + std::to_string(ra) + " and " +
                         std::to_string(rb));
  }
  out.name = a.name + "+" + b.name;
  out.r = ra;
  out.encoder = [=](std::span<const Symbol> x, std::span<Symbol> z) {
    std::array<Symbol, kMaxCodewordLength> zb{};
    if (ra == 0) return;
    enc_a(x.first(static_cast<std::size_t>(ma)), z);
    enc_b(x.subspan(static_cast<std::size_t>(ma)), std::span<Symbol>(zb.data(), static_cast<std::size_t>(rb)));
    for (int k = 0; k < ra; ++k) {
      z[static_cast<std::size_t>(k)] = f.add_raw(z[static_cast<std::size_t>(k)], zb[static_cast<std::size_t>(k)]);
    }
  };
  if (a.has_decoders() && b.has_decoders()) {
    // Strip the other block's contribution, then delegate.
    auto strip = [f, r = ra](std::span<const Symbol> z, const Encoder& other, const SideView& other_side, int other_m,
                             std::array<Symbol, kMaxCodewordLength>& own) {
      std::array<Symbol, kMaxUsers> xo{};
      for (int j = 1; j <= other_m; ++j) xo[static_cast<std::size_t>(j - 1)] = other_side(j);
      std::array<Symbol, kMaxCodewordLength> zo{};
      if (r) {
        other(std::span<const Symbol>(xo.data(), static_cast<std::size_t>(other_m)),
              std::span<Symbol>(zo.data(), static_cast<std::size_t>(r)));
      }
      for (int k = 0; k < r; ++k) {
        own[static_cast<std::size_t>(k)] =
            f.add_raw(z[static_cast<std::size_t>(k)], f.neg_raw(zo[static_cast<std::size_t>(k)]));
      }
    };
    for (int i = 0; i < ma; ++i) {
      out.decoders.push_back([dec = a.decoders[static_cast<std::size_t>(i)], enc_b, strip, ma, mb, ra](
                                 std::span<const Symbol> z, const SideView& side) {
        std::array<Symbol, kMaxCodewordLength> own{};
        strip(z, enc_b, side.block(ma, mb), mb, own);
        return dec(std::span<const Symbol>(own.data(), static_cast<std::size_t>(ra)), side.block(0, ma));
      });
    }
    for (int i = 0; i < mb; ++i) {
      out.decoders.push_back([dec = b.decoders[static_cast<std::size_t>(i)], enc_a, strip, ma, mb, ra](
                                 std::span<const Symbol> z, const SideView& side) {
        std::array<Symbol, kMaxCodewordLength> own{};
        strip(z, enc_a, side.block(0, ma), ma, own);
        return dec(std::span<const Symbol>(own.data(), static_cast<std::size_t>(ra)), side.block(ma, mb));
      });
    }
  }
  return out;
}

/// Wraps a scalar (t = 1) linear code as a general code. When an instance is
/// given and the code is decodable for it, a linear decoder is synthesised
/// for every user: a functional w with w.H_j = 0 on B_i and w.H_i = 1, so
/// x_i = w.z - sum over A_i of (w.H_j) x_j.
inline GeneralCode general_from_linear(const LinearCode& code, std::string name, const Instance* inst = nullptr) {
  if (code.t() != 1) throw DimensionMismatch("only scalar (t = 1) linear codes can be wrapped as general codes");
  if (code.length() > static_cast<std::size_t>(kMaxCodewordLength)) throw LengthMismatch("codeword too long");
  const FieldSpec f = code.field();
  const Matrix& h = code.matrix();
  const int m = code.m();
  const int r = static_cast<int>(code.length());
  // Column-major raw copy for the hot encoder loop.
  auto cols = std::make_shared<std::vector<Symbol>>(static_cast<std::size_t>(m * r));
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < r; ++k) {
      (*cols)[static_cast<std::size_t>(j * r + k)] = h.at(static_cast<std::size_t>(k), static_cast<std::size_t>(j)).value;
    }
  }
  GeneralCode out;
  out.name = std::move(name);
  out.m = m;
  out.r = r;
  out.alphabet = f;
  out.encoder = [f, cols, m, r](std::span<const Symbol> x, std::span<Symbol> z) {
    std::fill(z.begin(), z.end(), Symbol{0});
    for (int j = 0; j < m; ++j) {
      const Symbol xj = x[static_cast<std::size_t>(j)];
      if (!xj) continue;
      const Symbol* col = cols->data() + static_cast<std::ptrdiff_t>(j * r);
      for (int k = 0; k < r; ++k) {
        z[static_cast<std::size_t>(k)] = f.add_raw(z[static_cast<std::size_t>(k)], f.mul_raw(col[k], xj));
      }
    }
  };
  if (!inst) return out;
  if (inst->m() != m) throw DimensionMismatch("code and instance user counts differ");

  std::vector<Decoder> decoders;
  for (int i = 1; i <= m; ++i) {
    UserSet cols_used = inst->interfering(i);
    cols_used.push_back(i);
    std::sort(cols_used.begin(), cols_used.end());
    // Solve w^T [H_B | H_i] = (0, ..., 0, 1) in the column order of cols_used.
    Matrix system = transpose(column_block(h, cols_used, 1));
    std::vector<FieldElem> rhs(cols_used.size(), f.zero());
    rhs[static_cast<std::size_t>(std::find(cols_used.begin(), cols_used.end(), i) - cols_used.begin())] = f.one();
    const auto w = solve(system, rhs);
    if (!w) return out;  // not decodable: leave the code without decoders
    std::vector<Symbol> wz(static_cast<std::size_t>(r));
    for (int k = 0; k < r; ++k) wz[static_cast<std::size_t>(k)] = (*w)[static_cast<std::size_t>(k)].value;
    std::vector<std::pair<int, Symbol>> side_coeff;
    for (int j : inst->side_info(i)) {
      Symbol c = 0;
      for (int k = 0; k < r; ++k) {
        c = f.add_raw(c, f.mul_raw(wz[static_cast<std::size_t>(k)], h.at(static_cast<std::size_t>(k), static_cast<std::size_t>(j - 1)).value));
      }
      if (c) side_coeff.emplace_back(j, c);
    }
    decoders.push_back([f, wz, side_coeff](std::span<const Symbol> z, const SideView& side) {
      Symbol acc = 0;
      for (std::size_t k = 0; k < wz.size(); ++k) acc = f.add_raw(acc, f.mul_raw(wz[k], z[k]));
      for (const auto& [j, c] : side_coeff) acc = f.add_raw(acc, f.neg_raw(f.mul_raw(c, side(j))));
      return acc;
    });
  }
  out.decoders = std::move(decoders);
  return out;
}

// ---------------------------------------------------------------------------
// Truth tables: header "m r q", then q^m codeword lines in message-index
// order, where index = sum_j x_j q^(j-1).

inline GeneralCode general_from_table(std::string name, int m, int r, FieldSpec alphabet, std::vector<Symbol> table) {
  const int q = alphabet.q();
  const auto rows = detail::bounded_power(q, m, kTruthTableLog2Budget);
  if (!rows) throw BudgetExceeded("truth tables are limited to q^m <= 2^24 rows", 0);
  if (r < 0 || r > kMaxCodewordLength) throw LengthMismatch("codeword length out of range");
  if (table.size() != *rows * static_cast<std::uint64_t>(r)) throw DimensionMismatch("truth table has the wrong size");
  for (Symbol s : table) {
    if (s >= q) throw AlphabetMismatch("truth table symbol outside the alphabet");
  }
  auto shared = std::make_shared<const std::vector<Symbol>>(std::move(table));
  GeneralCode out;
  out.name = std::move(name);
  out.m = m;
  out.r = r;
  out.alphabet = alphabet;
  out.encoder = [shared, q, r, m](std::span<const Symbol> x, std::span<Symbol> z) {
    std::uint64_t index = 0;
    for (int j = m - 1; j >= 0; --j) index = index * static_cast<std::uint64_t>(q) + x[static_cast<std::size_t>(j)];
    const auto row = static_cast<std::ptrdiff_t>(index * static_cast<std::uint64_t>(r));
    std::copy(shared->begin() + row, shared->begin() + row + r, z.begin());
  };
  return out;
}

inline GeneralCode parse_truth_table(std::istream& in, std::string name) {
  int m = 0;
  int r = 0;
  int q = 0;
  if (!(in >> m >> r >> q) || m < 0 || r < 0) throw ParseError("truth table header must be 'm r q'");
  const FieldSpec f = field_make(q);
  const auto rows = detail::bounded_power(q, m, kTruthTableLog2Budget);
  if (!rows) throw BudgetExceeded("truth tables are limited to q^m <= 2^24 rows", 0);
  std::vector<Symbol> table;
  table.reserve(*rows * static_cast<std::uint64_t>(r));
  for (std::uint64_t row = 0; row < *rows; ++row) {
    for (int k = 0; k < r; ++k) {
      int v = 0;
      if (!(in >> v)) throw ParseError("truth table truncated at row " + std::to_string(row));
      if (v < 0 || v >= q) throw AlphabetMismatch("truth table symbol outside the alphabet");
      table.push_back(static_cast<Symbol>(v));
    }
  }
  return general_from_table(std::move(name), m, r, f, std::move(table));
}

inline GeneralCode load_truth_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open truth table '" + path + "'");
  return parse_truth_table(in, path);
}

inline void write_truth_table(std::ostream& out, const GeneralCode& code) {
  const int q = code.alphabet.q();
  const auto rows = detail::bounded_power(q, code.m, kTruthTableLog2Budget);
  if (!rows) throw BudgetExceeded("truth tables are limited to q^m <= 2^24 rows", 0);
  out << code.m << ' ' << code.r << ' ' << q << '\n';
  for (std::uint64_t row = 0; row < *rows; ++row) {
    const auto z = encode(code, detail::digits_of(row, code.m, q));
    for (int k = 0; k < code.r; ++k) {
      if (k) out << ' ';
      out << static_cast<int>(z[static_cast<std::size_t>(k)]);
    }
    out << '\n';
  }
}

}  // namespace indexcode
