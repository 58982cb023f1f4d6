#pragma once

// Data-parallel kernels behind the metric core. Every kernel has a serial
// reference in `serial::` (straightforward all-pairs loops, kept for the
// test suite and the benchmark) and an OpenMP version in `parallel::` that
// the library calls. Both return identical results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "extenlab/modulus.hpp"
#include "extenlab/net.hpp"

namespace extenlab::kernels {

struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> targets;  // sorted within each row
};

/// Worst modulus violation found by a pair scan.
struct ModulusScan {
  double excess = -1.0;  // max of d(f(z),f(z')) - omega(d(z,z')) - slack; <= 0 means pass
  std::size_t a = 0, b = 0;
  std::size_t pairs_examined = 0;
};

struct ValueView {
  std::span<const double> values;  // row-major, one row per domain point
  std::size_t dimension;
  const Metric* metric;            // codomain metric (coordinate based)
  std::span<const double> row(std::size_t i) const { return values.subspan(i * dimension, dimension); }
};

namespace serial {
Adjacency epsilon_adjacency(const Net& net, double scale);
ModulusScan modulus_scan(const Net& domain, const ValueView& f, const Modulus& omega, double slack);
double sup_distance(const ValueView& f, const ValueView& g);
}  // namespace serial

namespace parallel {
Adjacency epsilon_adjacency(const Net& net, double scale);
/// Prunes pairs farther apart than the radius where omega + slack already
/// dominates the diameter of the value set; exact, not approximate.
ModulusScan modulus_scan(const Net& domain, const ValueView& f, const Modulus& omega, double slack);
double sup_distance(const ValueView& f, const ValueView& g);
}  // namespace parallel

int thread_count();

}  // namespace extenlab::kernels
