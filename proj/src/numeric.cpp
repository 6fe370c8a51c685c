#include "kronrank/numeric.hpp"

#include <algorithm>

#include "kronrank/error.hpp"

namespace kronrank {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  const BigInt b = binomial(n, k);
  if (b > cap) return cap + 1;
  return b.convert_to<std::uint64_t>();
}

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  if (m < 4) return true;
  if (m % 2 == 0) return false;
  for (std::uint64_t d = 3; d <= m / d; d += 2)
    if (m % d == 0) return false;
  return true;
}

std::uint64_t largest_prime_leq(std::uint64_t m) {
  if (m < 2) throw InvalidArgument("largest_prime_leq: argument must be at least 2");
  while (!is_prime(m)) --m;
  return m;
}

}  // namespace kronrank
