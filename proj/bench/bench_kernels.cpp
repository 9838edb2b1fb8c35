// Serial reference kernels against their OpenMP counterparts.
#include <chrono>
#include <cstdio>
#include <functional>

#include "sloworbit/kernels.hpp"
#include "sloworbit/spectral.hpp"
#include "sloworbit/zoo.hpp"

using namespace sloworbit;

namespace {

double seconds(const std::function<void()>& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, const std::function<void(Exec)>& f) {
  const double s = seconds([&] { f(Exec::Serial); });
  const double p = seconds([&] { f(Exec::Parallel); });
  std::printf("%-34s serial %9.4f s   parallel %9.4f s   speedup %5.2fx\n", name, s, p, s / p);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", worker_count());
  const auto shift = build_shift_model(400.0, 4000);
  const auto zab = build_zabczyk_model(20);
  const CVector xs = smooth_bump(*shift.grid(), 200.0, 50.0, shift.norm_spec);
  const CVector xz = CVector::Ones(static_cast<Eigen::Index>(zab.grid()->n()));

  row("weak_orbit shift 2000 steps", [&](Exec e) { weak_orbit(*shift.evaluator, xs, xs, 2000, 0.1, e); });
  row("weak_orbit zabczyk(20) 400 steps", [&](Exec e) { weak_orbit(*zab.evaluator, xz, xz, 400, 0.1, e); });
  row("orbit_norms zabczyk(20) 400 steps",
      [&](Exec e) { orbit_norms(*zab.evaluator, xz, zab.norm_spec, 400, 0.1, e); });
  row("operator_norms zabczyk(20) 100 steps", [&](Exec e) { operator_norms(*zab.evaluator, 100, 0.1, e); });
  std::vector<double> betas;
  for (int i = 0; i < 64; ++i) betas.push_back(-2.0 + 4.0 * i / 63.0);
  row("resolvent_norms shift 64 betas", [&](Exec e) {
    std::vector<bool> sing;
    resolvent_norms(shift.generator(), 0.1, betas, sing, kResolventSentinel, e);
  });
  return 0;
}
