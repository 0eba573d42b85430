#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace wrcomm::bench {

struct TimingStats {
  int reps = 0;
  double median_ms = 0, p95_ms = 0, min_ms = 0, max_ms = 0;
};

inline TimingStats summarize(std::vector<double> samples_ms) {
  TimingStats t;
  t.reps = static_cast<int>(samples_ms.size());
  if (samples_ms.empty()) return t;
  std::sort(samples_ms.begin(), samples_ms.end());
  const size_t n = samples_ms.size();
  t.min_ms = samples_ms.front();
  t.max_ms = samples_ms.back();
  t.median_ms = (n % 2) ? samples_ms[n / 2]
                        : 0.5 * (samples_ms[n / 2 - 1] + samples_ms[n / 2]);
  size_t i95 = static_cast<size_t>((n * 95 + 99) / 100);  // ceil(0.95 n)
  if (i95 == 0) i95 = 1;
  t.p95_ms = samples_ms[i95 - 1];
  return t;
}

/// Wall-times `reps` invocations of fn (reps = 0 yields an empty table row).
template <typename F>
TimingStats time_op(int reps, F&& fn) {
  std::vector<double> ms;
  ms.reserve(reps > 0 ? reps : 0);
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return summarize(std::move(ms));
}

inline std::string csv_header() {
  return "op,signature,reps,median_ms,p95_ms,min_ms,max_ms";
}

inline std::string csv_row(const std::string& op, const std::string& sig,
                           const TimingStats& t) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s,\"%s\",%d,%.3f,%.3f,%.3f,%.3f",
                op.c_str(), sig.c_str(), t.reps, t.median_ms, t.p95_ms,
                t.min_ms, t.max_ms);
  return buf;
}

}  // namespace wrcomm::bench
