#include "causal_lab/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "causal_lab/errors.hpp"

namespace clab::io {

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

json ids_to_json(const BitSet& s) {
  json out = json::array();
  s.for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

BitSet ids_from_json(const json& j, std::size_t n) {
  if (!j.is_array()) fail(ErrorCode::ParseError, "point set must be an array of ids");
  BitSet out(n);
  for (const json& v : j) {
    if (!v.is_number_unsigned()) fail(ErrorCode::ParseError, "point ids must be non-negative integers");
    const auto i = v.get<std::size_t>();
    if (i >= n) fail(ErrorCode::ParseError, "point id " + std::to_string(i) + " out of range");
    out.set(i);
  }
  return out;
}

json causet_to_json(const causet::Causet& c) {
  json out;
  out["n"] = c.size();
  out["seed"] = c.seed();
  out["dim"] = c.dim();
  json coords = json::array();
  for (const auto& e : c.coords()) {
    json row = json::array({e.t});
    for (int k = 0; k < c.dim(); ++k) row.push_back(e.x[static_cast<std::size_t>(k)]);
    coords.push_back(std::move(row));
  }
  out["coords"] = std::move(coords);
  json edges = json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    c.hasse().row(i).for_each([&](std::size_t j) { edges.push_back({i, j}); });
  }
  out["edges"] = std::move(edges);
  if (c.past_boundary().any() || c.future_boundary().any()) {
    out["past_boundary"] = ids_to_json(c.past_boundary());
    out["future_boundary"] = ids_to_json(c.future_boundary());
  }
  return out;
}

causet::Causet causet_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "causet must be a JSON object");
  const auto n = field<std::size_t>(j, "n");
  const int dim = j.contains("dim") ? field<int>(j, "dim") : 0;
  const auto seed = j.contains("seed") ? field<std::uint64_t>(j, "seed") : 0;
  if (dim < 0 || dim > continuum::kMaxSpatialDim) fail(ErrorCode::ParseError, "dim must lie in 0..3");

  std::vector<continuum::Event> coords;
  if (j.contains("coords") && !j.at("coords").empty()) {
    const auto rows = field<std::vector<std::vector<double>>>(j, "coords");
    if (rows.size() != n) fail(ErrorCode::ParseError, "coords must have one row per point");
    for (const auto& r : rows) {
      if (r.size() != static_cast<std::size_t>(dim) + 1) fail(ErrorCode::ParseError, "coordinate row has wrong length");
      continuum::Event e;
      e.t = r[0];
      for (int k = 0; k < dim; ++k) e.x[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k) + 1];
      coords.push_back(e);
    }
  }

  BitMatrix raw(n);
  for (const auto& edge : field<std::vector<std::vector<std::size_t>>>(j, "edges")) {
    if (edge.size() != 2 || edge[0] >= n || edge[1] >= n) fail(ErrorCode::ParseError, "edge must be a pair of ids < n");
    if (edge[0] == edge[1]) fail(ErrorCode::CycleDetected, "self-loop on " + std::to_string(edge[0]));
    raw.set(edge[0], edge[1]);
  }
  causet::Causet c = causet::Causet::from_relation(raw, std::move(coords), dim, seed);
  if (j.contains("past_boundary") || j.contains("future_boundary")) {
    c.set_boundary(j.contains("past_boundary") ? ids_from_json(j.at("past_boundary"), n) : BitSet(n),
                   j.contains("future_boundary") ? ids_from_json(j.at("future_boundary"), n) : BitSet(n));
  }
  return c;
}

std::string relation_csv(const causet::Causet& c) {
  std::string out;
  const std::size_t n = c.size();
  out.reserve(n * (2 * n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) out += ',';
      out += c.precedes(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

json diamond_to_json(const causet::DiamondSpec& d) {
  return {{"slice", ids_to_json(d.slice.points)}, {"base", ids_to_json(d.base)}, {"span", ids_to_json(d.span)}};
}

json algebra_to_json(const duality::AlgebraBasis& a) {
  json rows = json::array();
  for (const BitSet& r : a.rows()) rows.push_back(duality::to_hex(r));
  return {{"sites", a.sites()}, {"dim_log", a.dim_log()}, {"rows", std::move(rows)}};
}

duality::AlgebraBasis algebra_from_json(const json& j) {
  const auto n = field<std::size_t>(j, "sites");
  std::vector<BitSet> rows;
  for (const auto& hex : field<std::vector<std::string>>(j, "rows")) rows.push_back(duality::from_hex(hex, 2 * n));
  return duality::AlgebraBasis::span(n, rows);
}

json pauli_to_json(const duality::PauliString& s) {
  return {{"label", s.label()}, {"hex", duality::to_hex(s.bits)}};
}

std::string surface_csv(const continuum::SurfaceFunction& tau) {
  const continuum::SpatialGrid& g = tau.grid();
  std::ostringstream out;
  out.precision(17);
  out << 'k';
  for (int a = 0; a < g.dim; ++a) out << ",y" << a;
  out << ",tau\n";
  for (std::size_t k = 0; k < g.size(); ++k) {
    const continuum::Spatial y = g.point(k);
    out << k;
    for (int a = 0; a < g.dim; ++a) out << ',' << y[static_cast<std::size_t>(a)];
    out << ',' << tau.at(k) << '\n';
  }
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) fail(ErrorCode::InvalidArgument, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::InvalidArgument, "cannot rename onto " + path.string() + ": " + ec.message());
}

}  // namespace clab::io
