// SPDX-License-Identifier: Apache-2.0
#include "idel/numcore/rng.hpp"

#include "idel/errors.hpp"

namespace idel::num {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : stream) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(seed) ^ h);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw ContractError("rng: index over empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

std::vector<double> Rng::normals(std::size_t n) {
  std::vector<double> out(n);
  for (auto& v : out) v = normal();
  return out;
}

}  // namespace idel::num
