#include "polywalk/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace polywalk {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

MultiPoly poly_from_terms(const json& terms, const Prime& p, std::uint32_t arity,
                          const char* what) {
  if (!terms.is_array()) throw ParseError(std::string(what) + ": expected a term array");
  MultiPoly f(p, arity);
  for (const json& t : terms) {
    const auto exps = field<std::vector<std::uint32_t>>(t, "exps");
    if (exps.size() != arity)
      throw ParseError(std::string(what) + ": exps must have m+1 entries");
    f.add_term(Monomial{exps}, field<std::int64_t>(t, "coeff"));
  }
  return f;
}

TriangularSystem system_from_json(const json& j, const Prime& p, const ShapeMatrix& shape) {
  const std::uint32_t m = shape.m();
  const json& g = j.contains("G") ? j.at("G") : json::array();
  const json& h = j.contains("H") ? j.at("H") : json::array();
  if (!g.is_array() || g.size() != m) throw ParseError("G: expected m per-level term lists");
  if (!h.is_array() || h.size() != m) throw ParseError("H: expected m per-level term lists");
  std::vector<MultiPoly> G, H;
  for (std::uint32_t i = 0; i < m; ++i) {
    G.push_back(poly_from_terms(g.at(i), p, m + 1, "G"));
    H.push_back(poly_from_terms(h.at(i), p, m + 1, "H"));
  }
  const FieldElement gm = FieldElement::from_signed(field<std::int64_t>(j, "gm"), p);
  const FieldElement hm = FieldElement::from_signed(field<std::int64_t>(j, "hm"), p);
  return TriangularSystem(shape, std::move(G), std::move(H), gm, hm);
}

std::pair<Prime, ShapeMatrix> header_from_json(const json& j) {
  const std::uint64_t pv = field<std::uint64_t>(j, "p");
  if (!is_prime_u64(pv)) throw ParseError("p: " + std::to_string(pv) + " is not prime");
  const Prime p(pv);
  const std::uint32_t m = field<std::uint32_t>(j, "m");
  if (m < 1) throw ParseError("m: must be >= 1");
  const auto s = field<std::vector<std::uint32_t>>(j, "S");
  if (s.size() != static_cast<std::size_t>(m + 1) * (m + 1))
    throw ParseError("S: expected (m+1)^2 row-major entries");
  try {
    return {p, ShapeMatrix(m, s)};
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("S: ") + e.what());
  }
}

SystemFamily family_from_json(const json& j) {
  const auto [p, shape] = header_from_json(j);
  if (!j.contains("systems") || !j.at("systems").is_array() || j.at("systems").empty())
    throw ParseError("systems: expected a nonempty array");

  std::vector<TriangularSystem> members;
  std::string report_text;
  for (std::size_t idx = 0; idx < j.at("systems").size(); ++idx) {
    TriangularSystem sys = system_from_json(j.at("systems").at(idx), p, shape);
    const ValidationReport report = validate(sys);
    if (!report.ok()) {
      report_text += "system " + std::to_string(idx) + ":\n" + report.to_string() + "\n";
    }
    members.push_back(std::move(sys));
  }
  if (!report_text.empty())
    throw ValidationFailure(report_text, "file contains systems outside the class:\n" + report_text);

  Schedule schedule = Schedule::constant();
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    if (s.is_string() && s.get<std::string>() == "constant") {
      schedule = Schedule::constant();
    } else if (s.is_string() && s.get<std::string>() == "cyclic") {
      schedule = Schedule::cyclic();
    } else if (s.is_array()) {
      auto steps = s.get<std::vector<std::size_t>>();
      for (std::size_t i : steps)
        if (i >= members.size()) throw ParseError("schedule: member index out of range");
      schedule = Schedule::explicit_list(std::move(steps));
    } else {
      throw ParseError("schedule: expected \"constant\", \"cyclic\" or an index list");
    }
  }
  return SystemFamily(std::move(members), std::move(schedule));
}

HashParams hash_params_from_json(const json& j) {
  const auto [p, shape] = header_from_json(j);
  const std::uint32_t r = field<std::uint32_t>(j, "r");
  if (r < 1 || r > 20) throw ParseError("r: must be in [1, 20]");
  if (!j.contains("members") || !j.at("members").is_array())
    throw ParseError("members: expected an array of 2^r systems");
  if (j.at("members").size() != (std::size_t(1) << r))
    throw ParseError("members: expected exactly 2^r entries");

  std::vector<TriangularSystem> members;
  std::string report_text;
  for (std::size_t idx = 0; idx < j.at("members").size(); ++idx) {
    TriangularSystem sys = system_from_json(j.at("members").at(idx), p, shape);
    const ValidationReport report = validate(sys);
    if (!report.ok())
      report_text += "member " + std::to_string(idx) + ":\n" + report.to_string() + "\n";
    members.push_back(std::move(sys));
  }
  if (!report_text.empty())
    throw ValidationFailure(report_text, "file contains systems outside the class:\n" + report_text);

  const auto w0_raw = field<std::vector<std::int64_t>>(j, "w0");
  if (w0_raw.size() != shape.dim()) throw ParseError("w0: expected m+1 coordinates");
  std::vector<FieldElement> w0;
  for (std::int64_t v : w0_raw) w0.push_back(FieldElement::from_signed(v, p));

  try {
    return HashParams(std::move(members), r, std::move(w0));
  } catch (const std::invalid_argument& e) {
    throw ValidationFailure(e.what(), e.what());
  }
}

}  // namespace

SystemFamily load_family(const std::string& path) { return family_from_json(parse_file(path)); }

SystemFamily load_family_from_text(const std::string& text) {
  return family_from_json(parse_text(text));
}

HashParams load_hash_params(const std::string& path) {
  return hash_params_from_json(parse_file(path));
}

HashParams load_hash_params_from_text(const std::string& text) {
  return hash_params_from_json(parse_text(text));
}

}  // namespace polywalk
