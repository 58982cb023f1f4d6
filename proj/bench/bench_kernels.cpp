// Serial reference versus OpenMP kernels on catalog nets.

#include <chrono>
#include <cstdio>
#include <functional>

#include "extenlab/kernels.hpp"
#include "extenlab/map.hpp"
#include "extenlab/space.hpp"

using namespace extenlab;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

void row(const char* kernel, const char* input, double serial, double parallel) {
  std::printf("%-16s %-22s %10.4f %10.4f %7.2fx\n", kernel, input, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads %d\n", kernels::thread_count());
  std::printf("%-16s %-22s %10s %10s %8s\n", "kernel", "input", "serial s", "parallel s", "speedup");
  for (const auto& [name, k] : {std::pair{"sine", 8}, std::pair{"comb", 8}, std::pair{"disk", 7}}) {
    const auto space = make_space(name, Dyadic(k));
    char input[64];
    std::snprintf(input, sizeof input, "%s 2^-%d (%zu pts)", name, k, space->size());
    const double scale = 2 * space->net.resolution();
    row("adjacency", input, best_of(1, [&] { kernels::serial::epsilon_adjacency(space->net, scale); }),
        best_of(3, [&] { kernels::parallel::epsilon_adjacency(space->net, scale); }));
  }

  const MapFamily fam = example_family("comb", Dyadic(8));
  const MapSample f = fam.member(5);
  const MapSample g = fam.limit;
  char input[64];
  std::snprintf(input, sizeof input, "comb phi_5 (%zu pts)", f.size());
  row("modulus scan", input, best_of(3, [&] { kernels::serial::modulus_scan(*f.domain, f.view(), f.modulus, 0.0); }),
      best_of(3, [&] { kernels::parallel::modulus_scan(*f.domain, f.view(), f.modulus, 0.0); }));
  row("sup distance", input, best_of(20, [&] { kernels::serial::sup_distance(f.view(), g.view()); }),
      best_of(20, [&] { kernels::parallel::sup_distance(f.view(), g.view()); }));
  return 0;
}
