#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "extenlab/certificates.hpp"
#include "extenlab/examples.hpp"
#include "extenlab/map.hpp"
#include "extenlab/space.hpp"

namespace extenlab::io {

using json = nlohmann::ordered_json;

json to_json(const Net& net);
Net net_from_json(const json& j);

json to_json(const Modulus& m);
Modulus modulus_from_json(const json& j);

/// Catalog spaces serialize as {name, parameters, resolution}; all others
/// explicitly as {name, net, path_components, clopen_atoms, retractions, ...}.
json to_json(const AnnotatedSpace& space);
/// Explicit spaces are checked against the AnnotatedSpace invariants.
SpacePtr space_from_json(const json& j);

json to_json(const SpacePair& pair);
SpacePair pair_from_json(const json& j);

/// Full map file: {domain: {space} | {pair, on: "z"}, codomain, values, modulus}.
json map_to_json(const MapSample& f, const json& domain_ref, const AnnotatedSpace& codomain);
MapSample map_from_json(const json& j);

/// A problem: phi on pair.Z into a codomain.
struct Problem {
  SpacePair pair;
  MapSample phi;
};
json to_json(const Problem& problem);
Problem problem_from_json(const json& j);

/// Certificates carry their maps without domain or codomain: those are the
/// problem's Y and X.
json to_json(const Certificate& cert);
Certificate certificate_from_json(const json& j, const Problem& problem);

json to_json(const Verdict& verdict);

json to_json(const Report& report, bool timings = false);
std::string report_text(const Report& report, bool timings = false);
std::string report_csv(const Report& report);

/// Static sketch of a planar space's net with map values overlaid.
struct Overlay {
  const MapSample* map;
  std::string color;
};
std::string svg_sketch(const AnnotatedSpace& space, const std::vector<Overlay>& overlays, const std::string& title);

/// Reads and parses a JSON file; throws parse_error. Relative paths that do not
/// exist are also looked up under $EXTENLAB_DATA_DIR.
json read_json_file(const std::filesystem::path& path);
std::filesystem::path resolve_data_path(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace extenlab::io
