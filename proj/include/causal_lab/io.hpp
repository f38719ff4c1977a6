#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "causal_lab/duality.hpp"
#include "causal_lab/surfaces.hpp"

namespace clab::io {

using json = nlohmann::json;

/// {"n", "seed", "dim", "coords": [[t, x...]], "edges": [[i, j]]} with edges
/// the covering relation; "past_boundary"/"future_boundary" id lists when set.
json causet_to_json(const causet::Causet& c);
/// Throws ParseError on malformed input, CycleDetected on cyclic edges.
causet::Causet causet_from_json(const json& j);

/// n x n 0/1 matrix of the strict order, row i listing the successors of i.
std::string relation_csv(const causet::Causet& c);

json ids_to_json(const BitSet& s);
BitSet ids_from_json(const json& j, std::size_t n);

json diamond_to_json(const causet::DiamondSpec& d);

/// {"sites", "dim_log", "rows": [hex...]}.
json algebra_to_json(const duality::AlgebraBasis& a);
duality::AlgebraBasis algebra_from_json(const json& j);

json pauli_to_json(const duality::PauliString& s);

/// Header "k,y0[,y1,y2],tau", one row per grid point.
std::string surface_csv(const continuum::SurfaceFunction& tau);

std::string read_file(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace clab::io
