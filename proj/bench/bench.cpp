// Serial reference vs OpenMP kernels: KL table precompute, batched products
// and the Frobenius sweep. Prints wall times and checks that both agree.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "cellkit/demazure.hpp"
#include "cellkit/hecke.hpp"

using namespace cellkit;

namespace {

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-34s serial %8.3f s  parallel %8.3f s  speedup %5.2f  %s\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int radius = argc > 1 ? std::atoi(argv[1]) : 10;
  std::printf("threads: %d, radius: %d\n", omp_get_max_threads(), radius);
  bool ok = true;

  const GroupDescriptor desc{Family::AffineA, 4};
  {
    Group g1(desc), g2(desc);
    KLTable t1(g1), t2(g2);
    double s = seconds([&] { t1.precompute_serial(radius); });
    double p = seconds([&] { t2.precompute_parallel(radius); });
    const bool same = t1.column_count() == t2.column_count();
    ok = ok && same;
    row("KL precompute affA 4", s, p, same);
  }

  {
    Group g1(desc), g2(desc);
    Hecke h1(g1), h2(g2);
    const auto b1 = g1.ball(radius - 2);
    const auto b2 = g2.ball(radius - 2);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, b1.size() - 1);
    std::vector<std::pair<ElementId, ElementId>> p1, p2;
    for (int i = 0; i < 400; ++i) {
      const std::size_t a = pick(rng), b = pick(rng);
      p1.emplace_back(b1[a], b1[b]);
      p2.emplace_back(b2[a], b2[b]);
    }
    std::vector<HeckeElt> r1, r2;
    double s = seconds([&] { r1 = h1.mult_batch_serial(p1); });
    double p = seconds([&] { r2 = h2.mult_batch_parallel(p2); });
    bool same = r1.size() == r2.size();
    for (std::size_t i = 0; same && i < r1.size(); ++i) {
      const auto x = r1[i].sorted(g1), y = r2[i].sorted(g2);
      same = x.size() == y.size();
      for (std::size_t j = 0; same && j < x.size(); ++j)
        same = g1.format(x[j].first) == g2.format(y[j].first) && x[j].second == y[j].second;
    }
    ok = ok && same;
    row("400 products in ball(r-2) affA 4", s, p, same);
  }

  {
    Report rs, rp;
    double s = seconds([&] { rs = frobenius_check({1}, 3, 5, false); });
    double p = seconds([&] { rp = frobenius_check({1}, 3, 5, true); });
    bool same = rs.properties.size() == rp.properties.size();
    for (std::size_t i = 0; same && i < rs.properties.size(); ++i)
      same = rs.properties[i].instances == rp.properties[i].instances &&
             rs.properties[i].failures.size() == rp.properties[i].failures.size();
    ok = ok && same && rs.ok();
    row("Frobenius sweep {1}, n=3, deg 5", s, p, same);
  }
  return ok ? 0 : 1;
}
