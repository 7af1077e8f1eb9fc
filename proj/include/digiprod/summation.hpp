#pragma once

// Compensated accumulation and a deterministic block-parallel map/reduce.
// Block boundaries depend only on the index range, never on the thread
// count, and partial results are combined in a fixed binary tree, so every
// reduction is bit-reproducible regardless of scheduling.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace digiprod {

using cplx = std::complex<double>;

/// Neumaier (improved Kahan-Babuska) running sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double x) : sum_(x) {}

  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  void add(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Componentwise compensated sum of complex values.
class CompensatedComplexSum {
 public:
  void add(cplx z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void add(const CompensatedComplexSum& other) noexcept {
    re_.add(other.re_);
    im_.add(other.im_);
  }
  CompensatedComplexSum& operator+=(cplx z) noexcept {
    add(z);
    return *this;
  }
  cplx value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// Half-open index range [lo, hi).
struct IndexRange {
  std::uint64_t lo;
  std::uint64_t hi;
};

inline constexpr std::uint64_t default_block_size = std::uint64_t{1} << 16;

/// Cuts [lo, hi) into blocks of at most block_size indices; every cut point
/// is a block boundary.
inline std::vector<IndexRange> plan_blocks(std::uint64_t lo, std::uint64_t hi,
                                           const std::vector<std::uint64_t>& cuts,
                                           std::uint64_t block_size = default_block_size) {
  std::vector<std::uint64_t> edges{lo};
  for (auto c : cuts)
    if (c > lo && c < hi) edges.push_back(c);
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<IndexRange> blocks;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    for (std::uint64_t a = edges[i]; a < edges[i + 1]; a += block_size)
      blocks.push_back({a, std::min(edges[i + 1], a + block_size)});
  return blocks;
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Applies fn to every block. Results are stored by block index, so their
/// order never depends on which worker handled which block.
template <class Fn>
auto map_blocks(const std::vector<IndexRange>& blocks, unsigned threads, Fn fn)
    -> std::vector<decltype(fn(blocks.front()))> {
  using R = decltype(fn(blocks.front()));
  std::vector<R> results(blocks.size());
  const unsigned workers =
      std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(blocks.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < blocks.size(); ++i) results[i] = fn(blocks[i]);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < blocks.size(); i = next++) {
      try {
        results[i] = fn(blocks[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// Pairwise reduction with a shape fixed by the number of items.
template <class T, class Combine>
T tree_reduce(std::vector<T> items, Combine combine, T identity = T{}) {
  if (items.empty()) return identity;
  while (items.size() > 1) {
    std::vector<T> next;
    next.reserve((items.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < items.size(); i += 2) next.push_back(combine(items[i], items[i + 1]));
    if (items.size() % 2 == 1) next.push_back(items.back());
    items = std::move(next);
  }
  return items.front();
}

}  // namespace digiprod
