#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "btpair/keys.hpp"
#include "btpair/octets.hpp"

namespace btpair {

/// Group elements, exponents and moduli. Products are formed in 128 bits.
using DhInt = std::uint64_t;

inline DhInt mulmod(DhInt a, DhInt b, DhInt m) {
  return static_cast<DhInt>(static_cast<unsigned __int128>(a) * b % m);
}

/// Square-and-multiply. Throws if modulus < 2.
inline DhInt modexp(DhInt base, DhInt exponent, DhInt modulus) {
  if (modulus < 2) throw std::invalid_argument("modexp: modulus must be >= 2");
  DhInt result = 1;
  base %= modulus;
  while (exponent != 0) {
    if (exponent & 1) result = mulmod(result, base, modulus);
    base = mulmod(base, base, modulus);
    exponent >>= 1;
  }
  return result;
}

/// Deterministic Miller-Rabin; the base set is exact for all 64-bit n.
inline bool is_prime(DhInt n) {
  if (n < 2) return false;
  for (DhInt small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  DhInt d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (DhInt a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    DhInt x = modexp(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

// Pollard-Brent; n must be composite and odd.
inline DhInt find_factor(DhInt n) {
  for (DhInt c = 1;; ++c) {
    auto f = [&](DhInt x) { return (mulmod(x, x, n) + c) % n; };
    DhInt y = 2, x = 2, g = 1, q = 1, ys = 2;
    const DhInt m = 128;
    for (DhInt r = 1; g == 1; r <<= 1) {
      x = y;
      for (DhInt i = 0; i < r; ++i) y = f(y);
      for (DhInt k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (DhInt i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void collect_prime_factors(DhInt n, std::vector<DhInt>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  DhInt d = find_factor(n);
  collect_prime_factors(d, out);
  collect_prime_factors(n / d, out);
}

}  // namespace detail

/// Distinct prime factors, ascending.
inline std::vector<DhInt> prime_factors(DhInt n) {
  std::vector<DhInt> out;
  for (DhInt small = 2; small < 64 && n > 1; ++small) {
    if (n % small == 0) {
      out.push_back(small);
      while (n % small == 0) n /= small;
    }
  }
  detail::collect_prime_factors(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// True iff alpha generates the full multiplicative group mod p. Decided by
/// the order test alpha^((p-1)/q) != 1 for every prime q | p-1, so it scales
/// past desk-size p. Throws if p is not prime.
inline bool is_primitive_root(DhInt alpha, DhInt p) {
  if (!is_prime(p)) throw std::invalid_argument("is_primitive_root: " + std::to_string(p) + " is not prime");
  alpha %= p;
  if (alpha == 0) return false;
  if (p == 2) return alpha == 1;
  for (DhInt q : prime_factors(p - 1)) {
    if (modexp(alpha, (p - 1) / q, p) == 1) return false;
  }
  return true;
}

inline DhInt smallest_primitive_root(DhInt p) {
  for (DhInt g = 1; g < p; ++g) {
    if (is_primitive_root(g, p)) return g;
  }
  throw std::logic_error("no primitive root found");
}

/// Public group (p, alpha). Validated on construction.
class DhParams {
 public:
  DhParams(DhInt p, DhInt alpha) : p_(p), alpha_(alpha) {
    if (!is_prime(p)) throw std::invalid_argument("dh-p " + std::to_string(p) + " is not prime");
    if (alpha < 2 || alpha > p - 1 || !is_primitive_root(alpha, p)) {
      throw std::invalid_argument("dh-alpha " + std::to_string(alpha) + " is not a primitive root of " +
                                  std::to_string(p));
    }
  }

  DhInt p() const { return p_; }
  DhInt alpha() const { return alpha_; }

  friend bool operator==(const DhParams&, const DhParams&) = default;

 private:
  DhInt p_;
  DhInt alpha_;
};

struct DhKeyPair {
  DhInt r_private;
  DhInt s_public;
};

/// S = alpha^r mod p for a private exponent r in [1, p-1].
inline DhKeyPair dh_keypair(const DhParams& params, DhInt r) {
  if (r < 1 || r > params.p() - 1) throw std::out_of_range("dh private exponent outside [1, p-1]");
  return {r, modexp(params.alpha(), r, params.p())};
}

/// K = peer_public^r mod p.
inline DhInt dh_shared(const DhParams& params, DhInt peer_public, DhInt r) {
  if (peer_public < 1 || peer_public > params.p() - 1) {
    throw std::out_of_range("dh peer public value outside [1, p-1]");
  }
  return modexp(peer_public, r, params.p());
}

/// 128-bit key from the shared value: H(0x05 || k_be16 || p_be16).
inline SessionKey session_key_from_shared(DhInt k, const DhParams& params) {
  if (k > params.p() - 1) throw std::out_of_range("shared value outside [0, p-1]");
  return SessionKey(tagged_hash(KeyTag::kSession, ByteWriter().put_be(k, 16).put_be(params.p(), 16)));
}

}  // namespace btpair
