#include "cstar/system_spec.hpp"

#include <fstream>
#include <sstream>

#include "cstar/error.hpp"

namespace cstar {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ValidationError, what); }
[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) malformed(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

cplx entry_from_json(const json& e, const std::string& where) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  malformed(where + ": entry must be a number or [re, im]");
}

CMatrix matrix_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) malformed(where + ": matrix must be a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) malformed(where + ": ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entry_from_json(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

Algebra parse_algebra(const json& j) {
  const json& blocks = field(j, "blocks", "algebra");
  if (!blocks.is_array() || blocks.empty()) malformed("algebra.blocks must be a non-empty array");
  std::vector<Eigen::Index> dims;
  for (const auto& b : blocks) {
    if (!b.is_number_integer() || b.get<long long>() < 1) invalid("algebra: block dimensions must be positive");
    dims.push_back(b.get<Eigen::Index>());
  }
  return Algebra(dims);
}

State parse_state(const Algebra& alg, const json& j) {
  if (!j.is_object()) malformed("state must be an object");
  if (j.contains("tracial")) return State::tracial(alg);
  std::vector<CMatrix> densities;
  if (j.contains("probabilities")) {
    const json& p = j.at("probabilities");
    if (!p.is_array() || p.size() != alg.num_blocks()) invalid("state: one probability per block expected");
    for (std::size_t b = 0; b < p.size(); ++b) {
      const Eigen::Index d = alg.block_dims()[b];
      if (d != 1) invalid("state: probabilities require a diagonal algebra");
      densities.push_back(CMatrix::Constant(1, 1, entry_from_json(p[b], "state.probabilities")));
    }
  } else {
    const json& ds = field(j, "densities", "state");
    if (!ds.is_array() || ds.size() != alg.num_blocks()) invalid("state: one density per block expected");
    for (std::size_t b = 0; b < ds.size(); ++b) {
      CMatrix rho = matrix_at(ds[b], "state.densities[" + std::to_string(b) + "]");
      const Eigen::Index d = alg.block_dims()[b];
      if (rho.rows() != d || rho.cols() != d) invalid("state: density " + std::to_string(b) + " has the wrong size");
      densities.push_back(std::move(rho));
    }
  }
  try {
    return State(alg, densities);
  } catch (const Error& e) {
    invalid(std::string("state: ") + e.what());
  }
}

UcpMap parse_dynamics(const Algebra& alg, const json& j, const std::string& where, double tol) {
  if (!j.is_object()) malformed(where + " must be an object");
  const auto build = [&]() -> LinearMap {
    if (j.contains("kraus")) {
      if (alg.num_blocks() != 1) invalid(where + ": kraus input requires a single-block algebra");
      std::vector<CMatrix> ks;
      for (const auto& k : j.at("kraus")) {
        ks.push_back(matrix_at(k, where + ".kraus"));
        const Eigen::Index d = alg.block_dims()[0];
        if (ks.back().rows() != d || ks.back().cols() != d) invalid(where + ": Kraus operator has the wrong size");
      }
      if (ks.empty()) invalid(where + ": empty Kraus list");
      return map_from_kraus(alg, ks);
    }
    if (j.contains("superop")) {
      const CMatrix s = matrix_at(j.at("superop"), where + ".superop");
      if (s.rows() != alg.total_dim() || s.cols() != alg.total_dim()) invalid(where + ": superop has the wrong size");
      return LinearMap{alg, s};
    }
    if (j.contains("stochastic")) {
      const CMatrix p = matrix_at(j.at("stochastic"), where + ".stochastic");
      if (alg != Algebra::diagonal(p.rows())) invalid(where + ": stochastic input requires a matching diagonal algebra");
      if (p.imag().cwiseAbs().maxCoeff() > 0.0) invalid(where + ": stochastic matrix must be real");
      return map_from_stochastic(p.real());
    }
    malformed(where + ": expected one of kraus, superop, stochastic");
  };
  const LinearMap m = build();
  try {
    return verify_ucp(m, std::max(tol, 1e-9));
  } catch (const Error& e) {
    invalid(where + ": " + e.what());
  }
}

}  // namespace

SystemSpec parse_system_json(const json& j) {
  if (!j.is_object()) malformed("top level must be an object");
  const json& version = field(j, "version", "spec");
  if (!version.is_number_integer() || version.get<int>() != 1) invalid("version: only version 1 is supported");

  double tol = kDefaultTol;
  if (j.contains("tolerance")) {
    if (!j.at("tolerance").is_number() || j.at("tolerance").get<double>() <= 0.0) invalid("tolerance must be positive");
    tol = j.at("tolerance").get<double>();
  }
  const Algebra alg = parse_algebra(field(j, "algebra", "spec"));
  State state = parse_state(alg, field(j, "state", "spec"));
  UcpMap phi = parse_dynamics(alg, field(j, "dynamics", "spec"), "dynamics", tol);

  SystemSpec spec{j.value("name", std::string{}), alg, std::move(phi), std::move(state), std::nullopt, tol, 0};
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0))
      invalid("seed must be a non-negative integer");
    spec.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("section")) spec.section = parse_dynamics(alg, j.at("section"), "section", tol);

  const Check inv = check_invariance(spec.phi, spec.state, std::max(tol, 1e-9));
  if (!inv.pass()) invalid("state is not invariant under the dynamics (residual " + std::to_string(inv.residual) + ")");
  return spec;
}

SystemSpec parse_system_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed("byte " + std::to_string(e.byte) + ": " + e.what());
  }
  try {
    return parse_system_json(j);
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

SystemSpec parse_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_text(buf.str());
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const cplx z = m(r, c);
      if (z.imag() == 0.0) {
        row.push_back(z.real());
      } else {
        row.push_back(json::array({z.real(), z.imag()}));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) { return matrix_at(j, "matrix"); }

json system_to_json(const std::string& name, const UcpMap& phi, const State& state,
                    const std::optional<UcpMap>& section) {
  const Algebra& alg = phi.algebra();
  json j;
  j["version"] = 1;
  j["name"] = name;
  j["algebra"]["blocks"] = alg.block_dims();
  json ds = json::array();
  for (const auto& rho : state.densities()) ds.push_back(matrix_to_json(rho));
  j["state"]["densities"] = ds;
  j["dynamics"]["superop"] = matrix_to_json(phi.superop());
  if (section) j["section"]["superop"] = matrix_to_json(section->superop());
  j["tolerance"] = kDefaultTol;
  j["seed"] = std::uint64_t{0};
  return j;
}

}  // namespace cstar
