#pragma once

#include <algorithm>
#include <numeric>

namespace v2x::detail {

template <class Key>
std::vector<RelayNode> top_by(std::span<const RelayNode> pool, std::size_t count, Key key) {
  require_count(pool, count);
  std::vector<double> keys;
  keys.reserve(pool.size());
  for (const auto& r : pool) keys.push_back(key(r));
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] > keys[b];
    return pool[a].id < pool[b].id;
  });
  std::vector<RelayNode> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(pool[idx[i]]);
  return out;
}

}  // namespace v2x::detail
