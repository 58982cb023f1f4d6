#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extenlab/kernels.hpp"
#include "extenlab/modulus.hpp"
#include "extenlab/net.hpp"
#include "extenlab/space.hpp"

namespace extenlab {

/// A continuous map sampled on a domain net, with a declared modulus.
struct MapSample {
  std::shared_ptr<const Net> domain;
  SpacePtr codomain;
  std::vector<double> values;  // row-major, codomain dimension per domain point
  Modulus modulus;

  std::size_t size() const { return domain ? domain->size() : 0; }
  std::size_t dimension() const { return codomain->net.dimension(); }
  std::span<const double> value(std::size_t i) const { return {values.data() + i * dimension(), dimension()}; }
  std::span<double> value(std::size_t i) { return {values.data() + i * dimension(), dimension()}; }
  double value_distance(std::size_t i, std::size_t j) const;
  kernels::ValueView view() const { return {values, dimension(), &codomain->net.metric()}; }
};

/// Nets are the same domain when shared or equal point for point.
bool same_net(const Net& a, const Net& b);
bool same_codomain(const AnnotatedSpace& a, const AnnotatedSpace& b);

/// Net-restricted sup distance; throws domain_mismatch.
double sup_distance(const MapSample& f, const MapSample& g);

/// [value, value + (omega_f + omega_g)(eps)], eps the domain resolution.
struct SupBound {
  double value;
  double upper;
};
SupBound sup_distance_bound(const MapSample& f, const MapSample& g);

bool check_modulus(const MapSample& f, double slack);
kernels::ModulusScan modulus_scan(const MapSample& f, double slack);
/// Largest distance from a value to the nearest codomain net point.
double codomain_gap(const MapSample& f);
/// Diameter of the value set (exact below 4096 points, else the bounding box diagonal).
double value_diameter(const MapSample& f);

MapSample restrict(const MapSample& f, const SpacePair& pair);
MapSample constant_map(std::shared_ptr<const Net> domain, SpacePtr codomain, std::span<const double> value);
/// The map sending each domain net point to its own coordinates in `codomain`.
MapSample inclusion_map(std::shared_ptr<const Net> domain, SpacePtr codomain);

// --- example families --------------------------------------------------------

/// A sequence phi_n -> phi of maps on pair.Z.
struct MapFamily {
  std::string name;
  SpacePair pair;
  SpacePtr codomain;
  std::size_t n_max = 0;  // truncation bound for n
  std::function<MapSample(std::size_t)> member_fn;
  MapSample limit;

  /// Throws beyond_truncation for n outside 1..n_max.
  MapSample member(std::size_t n) const;
};

/// Family names: pathcomp (= sine-eclosed), sine-eopen, comb, ndagger-eopen,
/// ndagger-eclosed, hawaii. `blocks` sets the opc size for ndagger-eclosed.
MapFamily example_family(const std::string& name, Dyadic resolution, std::size_t blocks = 12);
std::vector<std::string> family_names();

/// Explicit extension of phi_n (or of the limit when n is empty) to pair.Y.
/// Throws refused for instances that do not extend.
MapSample explicit_extension(const MapFamily& family, std::optional<std::size_t> n);

// --- extension operators -----------------------------------------------------

/// Dugundji-style extension of f on pair.Z to pair.Y through the named
/// retraction of the codomain. Z values are copied exactly.
MapSample dugundji_extend(const SpacePair& pair, const MapSample& f, const std::string& retraction);

/// Per-point Dugundji averages before retraction, with a mask of the points
/// whose average lies in the retraction's domain.
struct PartialExtension {
  std::vector<double> values;  // retracted where ok, raw average elsewhere
  std::vector<char> ok;
  double lipschitz = 0.0;      // declared constant on the ok points
};
PartialExtension dugundji_partial(const SpacePair& pair, const MapSample& f, const std::string& retraction);

/// Extension relative to a base map on Y: r(base + D(f - base|Z)).
MapSample dugundji_extend_relative(const SpacePair& pair, const MapSample& f, const MapSample& base,
                                   const std::string& retraction);

/// Urysohn function on a net: 1 on z, 0 off v, Lipschitz 2/d(z, Y \ v).
MapSample urysohn(std::shared_ptr<const Net> y, std::span<const std::size_t> z, std::span<const std::size_t> v);

// --- homotopies --------------------------------------------------------------

/// A map on base x time grid, index = time_index * |base| + base_index.
struct Homotopy {
  std::shared_ptr<const Net> base;
  Dyadic step;
  MapSample map;
  double slice_lipschitz = 0.0;
  double time_lipschitz = 0.0;

  std::size_t time_count() const { return (std::size_t{1} << step.exponent()) + 1; }
  double time(std::size_t k) const { return static_cast<double>(k) * step.value(); }
  std::size_t nearest_time(double t) const;
  MapSample slice(std::size_t k) const;
  std::span<const double> value(std::size_t k, std::size_t y) const { return map.value(k * base->size() + y); }
};

enum class HomotopyMode { straight_line, geodesic_circle };

/// Homotopy from f to g; slice 0 is f and the last slice is g exactly.
Homotopy homotopy_between(const MapSample& f, const MapSample& g, HomotopyMode mode, Dyadic step = Dyadic(6));
HomotopyMode default_mode(const AnnotatedSpace& codomain);

/// psi_{f(y)}(y) on closure(V), phibar elsewhere. `closure` lists Y indices
/// in the order of psi's base net.
MapSample glue_homotopy_extension(const SpacePair& pair, std::span<const std::size_t> closure, const MapSample& phibar,
                                  const Homotopy& psi, const MapSample& f, double tolerance = 1e-12);

/// Largest delta with which small_diameter_extend promises diameter < target.
double delta_for(const AnnotatedSpace& codomain, double target);

MapSample small_diameter_extend(const SpacePair& pair, const MapSample& f, double target);

/// Contraction of V (a subspace of x) to V's point p rel p, values within target of p.
Homotopy cone_contraction(const SpacePtr& x, const SpacePtr& v, std::size_t p, double target);

/// Homotopy phi0 ~ phi1 fixing their coincidence set, all slices target-close.
Homotopy equiconnect_homotopy(const MapSample& phi0, const MapSample& phi1, double target, Dyadic step = Dyadic(6));

// --- winding ------------------------------------------------------------------

/// Signed turns of a closed planar loop (flat x,y pairs) around `center`.
/// Throws loop_too_coarse when a step reaches pi.
int winding_number(std::span<const double> loop, std::span<const double> center);
/// Largest angular step of the loop around center.
double max_angular_step(std::span<const double> loop, std::span<const double> center);

}  // namespace extenlab
