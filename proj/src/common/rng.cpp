#include "darepair/common/rng.hpp"

#include "darepair/common/hash.hpp"

namespace darepair {

uint64_t sub_seed(uint64_t master, std::string_view tag) {
  uint64_t h = fnv1a(&master, sizeof(master));
  h = fnv1a(tag, h);
  return h;
}

uint64_t sub_seed(uint64_t master, std::string_view tag_a, std::string_view tag_b) {
  uint64_t h = fnv1a(&master, sizeof(master));
  h = fnv1a(tag_a, h);
  h = fnv1a("\x1f", h);
  h = fnv1a(tag_b, h);
  return h;
}

}  // namespace darepair
