#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "extenlab/dyadic.hpp"
#include "extenlab/net.hpp"

namespace extenlab {

/// Clopen structure of a compact space at finite resolution.
///
/// Net points are partitioned into atoms; every clopen set of the true
/// space is a union of atoms. A tail lists atoms accumulating (in order) at
/// a limit atom: a clopen set holds the limit atom iff it holds a cofinal
/// part of the tail. At a truncation the cofinal part is judged by the last
/// tail atom that meets the set in question.
struct ClopenStructure {
  struct Tail {
    std::size_t limit_atom;
    std::vector<std::size_t> atoms;
    friend bool operator==(const Tail&, const Tail&) = default;
  };

  std::vector<std::size_t> atom_of;  // per net point
  std::size_t atom_count = 0;
  std::vector<Tail> tails;

  static ClopenStructure connected(std::size_t points);
  static ClopenStructure discrete(std::size_t points);

  /// Does a clopen set C exist with C ∩ Z = trace? (Z, trace: net indices.)
  bool trace_is_clopen(std::span<const std::size_t> z, std::span<const std::size_t> trace) const;
  /// Is the set itself (net indices) a union of atoms respecting the tail rule?
  bool accepts(std::span<const std::size_t> set) const;
  /// Net indices of the given atoms, sorted.
  std::vector<std::size_t> points_of(std::span<const std::size_t> atoms) const;
  ClopenStructure restricted(std::span<const std::size_t> indices) const;

  friend bool operator==(const ClopenStructure&, const ClopenStructure&) = default;
};

/// U_n = V_n minus (V_1 u ... u V_{n-1}) on sets of atom ids. Throws
/// invalid_argument unless the clopen oracle accepts every V_n.
std::vector<std::vector<std::size_t>> disjointify(const ClopenStructure& clopen,
                                                  const std::vector<std::vector<std::size_t>>& atom_sets);

/// Retraction of an ambient neighbourhood U onto the space.
struct Retraction {
  enum class Kind { clamp_interval, clamp_disk, radial, collapse };

  std::string name;
  Kind kind = Kind::clamp_interval;
  std::vector<double> center;      // disk / radial
  double radius = 1.0;             // disk / circle radius
  double lo = 0.0, hi = 1.0;       // clamp_interval range; radial annulus lo < |x-c| < hi
  double reach = 1.0;              // clamp kinds: U = points within `reach` of the space
  int circle = 0;                  // collapse: the surviving circle C_k

  bool in_domain(std::span<const double> p) const;
  /// Throws extension_failure outside U.
  void apply(std::span<const double> p, std::span<double> out) const;
  /// Lipschitz constant of the retraction on U.
  double lipschitz() const;

  friend bool operator==(const Retraction&, const Retraction&) = default;
};

/// Catalog reference: enough to rebuild a catalog space bit-for-bit.
struct CatalogRef {
  std::string name;
  std::map<std::string, double> parameters;
  Dyadic resolution;
  friend bool operator==(const CatalogRef&, const CatalogRef&) = default;
};

/// A compact metric space at resolution ε with exact structural annotations.
struct AnnotatedSpace {
  std::string name;
  std::optional<CatalogRef> catalog;  // unset for constructed or user-supplied spaces
  Net net;
  std::vector<std::size_t> path_components;  // component id per net point, ids 0..k-1
  std::vector<std::string> component_names;
  double connectivity_threshold = 1.0;  // components are 2ε-connected for ε <= this
  ClopenStructure clopen;
  std::vector<Retraction> retractions;
  std::map<std::string, std::size_t> basepoints;
  std::vector<int> circle_index;  // earring only: circle of each point, 0 at the tangency point
  bool convex = false;            // interval and disk: straight-line homotopies stay inside

  std::size_t size() const { return net.size(); }
  double resolution() const { return net.resolution(); }
  std::size_t component_count() const { return component_names.size(); }
  const Retraction* find_retraction(std::string_view name) const;
  /// Component id of the net point within `tolerance` of p, if unique.
  std::optional<std::size_t> component_of_value(std::span<const double> p, double tolerance) const;
  std::optional<std::size_t> index_of(std::span<const double> p, double tolerance = 0.0) const;
};

using SpacePtr = std::shared_ptr<const AnnotatedSpace>;

/// Every violated AnnotatedSpace invariant, empty when all hold.
std::vector<std::string> check_space_invariants(const AnnotatedSpace& space);

/// Space pair (Y, Z): Z is a set of Y's net indices with its induced net.
struct SpacePair {
  SpacePtr y;
  std::vector<std::size_t> z;  // sorted Y indices
  std::shared_ptr<const Net> z_net;

  static SpacePair make(SpacePtr y, std::vector<std::size_t> z);
  std::shared_ptr<const Net> y_net() const { return {y, &y->net}; }
  std::size_t z_position(std::size_t y_index) const;  // position in z, or npos
  bool contains(std::size_t y_index) const { return z_position(y_index) != npos; }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// --- catalog ---------------------------------------------------------------

/// Catalog names: point, two-point, interval, circle, disk, ndagger, sine,
/// comb, earring. Parameters: interval{ndagger: 0|1}; disk{cx, cy, radius,
/// earring: 0|1}.
SpacePtr make_space(const std::string& name, Dyadic resolution, const std::map<std::string, double>& parameters = {});
SpacePtr make_space(const CatalogRef& ref);
std::vector<std::string> catalog_names();

/// Catalog pairs: interval-ndagger ([0,1], N), sine-ndagger (sine, N×{0}),
/// earring-disk (disk of radius 1 at (1,0), earring), interval-endpoints.
SpacePair make_pair(const std::string& name, Dyadic resolution);

/// Truncation index for N = {0} ∪ {1/n}: the largest n kept at resolution ε.
std::size_t ndagger_cutoff(Dyadic resolution);
/// Largest n whose 1/n is kept as a resolved (exact, isolated) feature.
std::size_t resolved_cutoff(Dyadic resolution);
/// Earring circles kept at resolution ε.
std::size_t earring_cutoff(Dyadic resolution);

// --- constructors ----------------------------------------------------------

struct ProductFactor {
  enum class Kind { interval, ndagger };
  Kind kind = Kind::interval;
  Dyadic step{};  // interval grid step
};

/// Product net with the max metric; index = factor_index * |A| + a_index.
Net product_net(const Net& a, const Net& factor);
/// Product with the max metric; net index = factor_index * |A| + a_index.
SpacePtr product(const SpacePtr& a, const SpacePtr& factor);
SpacePtr product_with(const SpacePtr& a, ProductFactor factor);
/// Quotient of A × [0,1] collapsing A × {1}; levels at A's resolution.
/// Net index = level * |A| + a_index for levels below the apex; apex last.
SpacePtr cone(const SpacePtr& a);
std::size_t cone_levels(const AnnotatedSpace& cone_space);  // levels including apex

struct OpcResult {
  SpacePtr space;
  std::vector<std::vector<std::size_t>> block_indices;  // per input space: its net points in the union
  std::size_t infinity;                                  // index of the added point
};
/// One-point compactification of a disjoint union, block n rescaled to
/// diameter <= 2^-(n+3) and placed within 2^-n of the point at infinity.
OpcResult opc_disjoint_union(std::span<const SpacePtr> blocks);
/// Pair version: Z = union of the block Z's plus the point at infinity.
struct OpcPair {
  SpacePair pair;
  OpcResult layout;
};
OpcPair opc_pair(std::span<const SpacePair> blocks);

/// Cone pair with the spiked base over basepoint p (a net index of V).
SpacePair spiked_base_pair(const SpacePtr& v, std::size_t p);

/// Sub-space on the given net indices (sorted on output).
SpacePtr subspace(const SpacePtr& y, std::span<const std::size_t> indices, const std::string& name = {});

/// Collapse retraction r_k of the earring: fixes C_k, sends the rest to 0.
Retraction collapse_retraction(const AnnotatedSpace& earring, int k);

}  // namespace extenlab
