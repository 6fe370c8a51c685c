#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace kronrank {

using BigInt = boost::multiprecision::cpp_int;

// Exact binomial coefficient C(n, k); zero when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

// C(n, k), or cap + 1 when it exceeds cap.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap);

bool is_prime(std::uint64_t m);

// Largest prime <= m, by trial division. Throws InvalidArgument for m < 2.
std::uint64_t largest_prime_leq(std::uint64_t m);

}  // namespace kronrank
