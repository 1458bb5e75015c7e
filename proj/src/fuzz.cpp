#include "curv4/parallel.hpp"
#include "curv4/pinching.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <random>

namespace curv4 {

namespace {

constexpr std::uint64_t kChunk = 1u << 14;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Tally {
  FuzzSummary s;
  const FuzzOptions* opt;

  void add(const PinchReport& r, std::size_t slot) {
    if (r.margin < -opt->violation_tol) {
      ++s.violations;
      ++s.violations_by_check[slot];
    }
    if (r.margin < opt->near_equality) ++s.near_equality_hits;
    s.worst_margin = std::min(s.worst_margin, r.margin);
  }
};

FuzzSummary run_chunk(std::uint64_t chunk, std::uint64_t trials, std::uint64_t seed,
                      const FuzzOptions& opt) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(chunk)));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tally t{{}, &opt};
  t.s.trials = trials;
  t.s.worst_margin = std::numeric_limits<double>::infinity();
  for (std::uint64_t n = 0; n < trials; ++n) {
    double a = u(rng), b = u(rng), c = u(rng);
    const double mean = (a + b + c) / 3.0;
    const auto spec = Spectrum3<double>::sorted(a - mean, b - mean, c - mean);
    const auto [p21a, p21b] = check_prop21(spec);
    t.add(p21a, 0);
    t.add(p21b, 1);

    const SymBilinear4<double> ric0 = random_traceless_symmetric(rng);
    const auto [p22a, p22b] = check_prop22(ric0, 1);
    t.add(p22a, 2);
    t.add(p22b, 3);

    Block3<double>::Matrix w{};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i; j < 3; ++j) w[i][j] = w[j][i] = u(rng);
    const double shift = (w[0][0] + w[1][1] + w[2][2]) / 3.0;
    for (std::size_t i = 0; i < 3; ++i) w[i][i] -= shift;
    t.add(check_remark14(ric0, Block3<double>(w, Duality::self_dual, BlockKind::weyl), 1), 4);
  }
  return t.s;
}

}  // namespace

FuzzSummary fuzz_inequalities(std::uint64_t trials, std::uint64_t seed, const FuzzOptions& options) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "fuzz needs at least one trial");
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<FuzzSummary> parts(chunks);
  parallel_for(chunks, worker_count(options.threads), [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const std::uint64_t n = std::min<std::uint64_t>(kChunk, trials - c * kChunk);
      parts[c] = run_chunk(c, n, seed, options);
    }
  });
  FuzzSummary total;
  total.seed = seed;
  total.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    total.trials += p.trials;
    total.violations += p.violations;
    total.near_equality_hits += p.near_equality_hits;
    total.worst_margin = std::min(total.worst_margin, p.worst_margin);
    for (std::size_t k = 0; k < p.violations_by_check.size(); ++k)
      total.violations_by_check[k] += p.violations_by_check[k];
  }
  return total;
}

}  // namespace curv4
