#include "vmdg/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace vmdg {
namespace {

std::atomic<int> g_override{0};

int env_worker_count() {
  static const int count = [] {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("VM_RKDG_THREADS")) {
      try {
        const int cap = std::stoi(env);
        if (cap >= 1) return std::min(cap, hw);
      } catch (...) {
      }
    }
    return hw;
  }();
  return count;
}

}  // namespace

int worker_count() {
  const int o = g_override.load();
  return o > 0 ? o : env_worker_count();
}

void set_worker_count(int n) { g_override.store(std::max(n, 0)); }

void parallel_for(std::ptrdiff_t n,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body) {
  if (n <= 0) return;
  const std::ptrdiff_t workers =
      std::min<std::ptrdiff_t>(worker_count(), std::max<std::ptrdiff_t>(1, n / 16));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::ptrdiff_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> threads;
  threads.reserve(static_cast<std::size_t>(workers - 1));
  for (std::ptrdiff_t w = 1; w < workers; ++w) {
    const std::ptrdiff_t b = w * chunk;
    const std::ptrdiff_t e = std::min(n, b + chunk);
    if (b < e) threads.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min(n, chunk));
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 32;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace vmdg
