#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "extenlab/map.hpp"
#include "extenlab/space.hpp"

namespace extenlab {

/// An explicit extension of phi to Y.
struct PositiveCertificate {
  MapSample extension;
  double tolerance = 0.0;
};

/// z1, z2 joined inside one path component of Y while phi separates their
/// images into different path components of X. Indices are Y indices.
struct PathComponentCertificate {
  std::size_t z1 = 0, z2 = 0;
  std::vector<std::size_t> y_path;
  std::array<std::size_t, 2> x_labels{};
};

/// phi^{-1}(1/k) = trace, and no clopen subset of Y has that trace on Z.
struct ClopenCertificate {
  std::size_t k = 1;
  std::vector<std::size_t> trace;
};

/// Half-space style predicate on codomain coordinates.
struct Region {
  enum class Op { le, ge, abs_ge };
  std::size_t axis = 0;
  Op op = Op::le;
  double threshold = 0.0;

  bool contains(std::span<const double> p) const;
  friend bool operator==(const Region&, const Region&) = default;
};

/// Every chain in X from phi(a_j) to phi(b_j) crosses the region, a_j, b_j -> z0,
/// and phi(z0) stays `separation` away from the region.
struct MandatoryCrossingCertificate {
  std::vector<std::pair<std::size_t, std::size_t>> brackets;
  Region region;
  std::size_t z0 = 0;
  double separation = 0.0;
};

/// A loop in Z that bounds a disk in Y (the rings shrink it to a point) and
/// whose image winds around a retract of X.
struct WindingCertificate {
  std::vector<std::size_t> loop;
  std::vector<std::vector<double>> rings;  // flat planar points, ring 0 = loop, last ring constant
  std::string retraction;                  // "collapse-k"
  int expected = 0;
};

using Certificate = std::variant<PositiveCertificate, PathComponentCertificate, ClopenCertificate,
                                 MandatoryCrossingCertificate, WindingCertificate>;

/// "positive", "path-component", "clopen", "mandatory-crossing", "winding".
std::string certificate_kind(const Certificate& cert);

enum class VerdictStatus { verified, refuted, invalid_certificate, inconsistent_input };
std::string to_string(VerdictStatus status);

struct TraceEntry {
  std::string check;
  bool passed = false;
  std::string detail;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::verified;
  std::string kind;
  std::vector<TraceEntry> trace;
  double epsilon = 0.0;
  double margin = 0.0;
};

Verdict check_certificate(const SpacePair& pair, const MapSample& phi, const Certificate& cert);

/// The obstruction for a non-extendible member (n set) or limit of a family.
/// `variant` picks between the two obstructions available for the sine
/// limit: "crossing" (default) or "path-component". Throws refused otherwise.
Certificate build_negative_certificate(const MapFamily& family, std::optional<std::size_t> n,
                                       const std::string& variant = {});

/// The positive certificate wrapping explicit_extension.
Certificate build_positive_certificate(const MapFamily& family, std::optional<std::size_t> n);

/// Net points of X within `radius` of p that are kept by the mask.
std::vector<std::size_t> anchors_near(const Net& x, std::span<const double> p, double radius,
                                      std::span<const char> keep);

/// True when no chain of the `scale`-graph of X inside `keep` joins an anchor
/// of a to an anchor of b.
bool chain_separated(const Net& x, double scale, std::span<const char> keep, std::span<const double> a,
                     std::span<const double> b);

/// Fan of concentric rings contracting a planar loop to `center`, with radial
/// spacing chosen so that every witness edge is at most `edge`.
std::vector<std::vector<double>> ring_witness(std::span<const double> loop, std::span<const double> center,
                                              double edge);

}  // namespace extenlab
