#include "kljn/rng.hpp"

namespace kljn {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t master_seed, const StreamId& id) noexcept {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ static_cast<std::uint64_t>(id.purpose));
  h = mix64(h ^ id.bit);
  h = mix64(h ^ (static_cast<std::uint64_t>(id.party) << 8 |
                 static_cast<std::uint64_t>(id.role)));
  return h;
}

Engine make_engine(std::uint64_t master_seed, const StreamId& id) {
  return Engine(derive_key(master_seed, id));
}

}  // namespace kljn
