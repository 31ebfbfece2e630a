#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace hopfdeg {

// Worker count used by all parallel loops. Results never depend on it: work is
// split into fixed chunks and partial results are combined in chunk order.
void set_num_threads(int n);
int num_threads();

// Invokes body(begin, end, chunk_index) for consecutive chunks of [0, n).
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         std::size_t chunk = 256) {
  parallel_chunks(n, chunk, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t i = b; i < e; ++i) body(i);
  });
}

// Deterministic reduction: each chunk is summed left to right, then the
// chunk totals are summed in index order.
template <class Term>
double chunked_sum(std::size_t n, std::size_t chunk, Term&& term) {
  if (n == 0) return 0.0;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(nchunks, 0.0);
  parallel_chunks(n, chunk, [&](std::size_t b, std::size_t e, std::size_t c) {
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) acc += term(i);
    partial[c] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace hopfdeg
