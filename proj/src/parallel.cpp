#include "heavytail/parallel.hpp"

#include <omp.h>

namespace heavytail::par {

Engine substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Engine{std::mt19937_64(seq)};
}

std::size_t chunk_count(std::size_t count) noexcept {
  return (count + kChunkSize - 1) / kChunkSize;
}

std::span<double> scratch(std::size_t n) {
  thread_local std::vector<double> buffer;
  if (buffer.size() < n) buffer.resize(n);
  return {buffer.data(), n};
}

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace heavytail::par
