#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <span>
#include <vector>

namespace heavytail {

// Serial is the reference path; Parallel distributes chunks over OpenMP
// threads. Both produce bit-identical output for the same seed.
enum class Execution { Serial, Parallel };

namespace par {

// Draws per chunk. Chunk k of a batch is generated from substream(seed, k),
// so results depend on (seed, count) only, never on the thread count.
inline constexpr std::size_t kChunkSize = 16384;

// Per-substream generator state. The normal distribution caches its second
// polar-method variate, so it lives alongside the bit generator.
struct Engine {
  std::mt19937_64 bits;
  std::normal_distribution<double> normal{0.0, 1.0};
  std::uniform_real_distribution<double> uniform{0.0, 1.0};

  double gaussian() { return normal(bits); }
  // Uniform on the open interval (0, 1).
  double open_uniform() {
    double u = 0.0;
    do {
      u = uniform(bits);
    } while (u <= 0.0);
    return u;
  }
};

Engine substream(std::uint64_t seed, std::uint64_t index);

std::size_t chunk_count(std::size_t count) noexcept;

// Per-thread working storage of at least n doubles. Valid until the next call
// on the same thread.
std::span<double> scratch(std::size_t n);

void set_thread_count(int threads);
int max_threads() noexcept;

// Fills `out` (count rows of `dim` doubles, row-major) by calling
// draw(engine, row) once per row. The first exception thrown by any draw is
// rethrown after the parallel region.
template <class DrawFn>
void fill_rows(std::span<double> out, std::size_t dim, std::uint64_t seed,
               Execution exec, DrawFn&& draw) {
  const std::size_t count = dim == 0 ? 0 : out.size() / dim;
  const auto chunks = static_cast<std::int64_t>(chunk_count(count));

  auto run_chunk = [&](std::int64_t c) {
    Engine engine = substream(seed, static_cast<std::uint64_t>(c));
    const std::size_t begin = static_cast<std::size_t>(c) * kChunkSize;
    const std::size_t end = std::min(count, begin + kChunkSize);
    for (std::size_t i = begin; i < end; ++i) {
      draw(engine, out.subspan(i * dim, dim));
    }
  };

  if (exec == Execution::Serial) {
    for (std::int64_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < chunks; ++c) {
    try {
      run_chunk(c);
    } catch (...) {
#pragma omp critical(heavytail_fill_rows_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace par
}  // namespace heavytail
