#include "exo/rng.hpp"

#include "exo/errors.hpp"

namespace exo {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t s = splitmix64(root);
  for (std::uint64_t t : tags) {
    s = splitmix64(s ^ splitmix64(t + 0x632BE59BD9B4E019ULL));
  }
  return s;
}

std::uint64_t tag(std::string_view name) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double uniform01(Rng& rng) noexcept { return to_unit_interval(rng()); }

std::size_t sample_categorical(std::span<const double> probs, Rng& rng) {
  if (probs.empty()) throw InvalidInput("sample_categorical: empty distribution");
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = i;
    acc += probs[i];
    if (u < acc) return i;
  }
  return last_positive;
}

}  // namespace exo
