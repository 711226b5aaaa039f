#include "dlab/json_io.hpp"

#include "dlab/states.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>

namespace dlab::json_io {

using nlohmann::json;
using qmat::cxd;
using qmat::Matrix;
using qmat::validation_error;

namespace {

json matrix_to_parts(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"re", re}, {"im", im}};
}

Matrix matrix_from_parts(const json& j) {
  const auto& re = j.at("re");
  const size_t rows = re.size();
  if (rows == 0) throw validation_error("state json: empty matrix");
  const size_t cols = re[0].size();
  Matrix m(rows, cols);
  const json* im = j.contains("im") ? &j.at("im") : nullptr;
  for (size_t i = 0; i < rows; ++i)
    for (size_t c = 0; c < cols; ++c)
      m(i, c) = cxd(re[i][c].get<double>(),
                    im ? (*im)[i][c].get<double>() : 0.0);
  return m;
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw validation_error("state spec: cannot parse number '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

json state_to_json(const DensityMatrix& rho) {
  json j = matrix_to_parts(rho.matrix());
  j["dims"] = rho.dims();
  j["label"] = rho.label();
  return j;
}

DensityMatrix state_from_json(const json& j) {
  std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  std::string label = j.value("label", "");
  return DensityMatrix(dims, matrix_from_parts(j), label);
}

DensityMatrix parse_state_spec(const std::string& spec) {
  std::string name = spec, args;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  }
  if (name == "singlet") return states::singlet().projector();
  if (name == "mfs") return states::mfs_state();
  if (name == "cc") return states::cc_pair();
  if (name == "w") return states::w_state().projector();
  if (name == "bell") {
    auto v = split_numbers(args);
    if (v.size() != 4) throw validation_error("bell spec needs 4 weights");
    return states::bell_mixture({{v[0], v[1], v[2], v[3]}});
  }
  if (name == "iso") {
    auto v = split_numbers(args);
    if (v.size() != 2) throw validation_error("iso spec needs lambda,d");
    return states::isotropic(v[0], static_cast<int>(v[1]));
  }
  if (name == "ghz") {
    auto v = split_numbers(args);
    if (v.size() == 1)
      return states::ghz(int(v[0]), int(v[0])).projector();
    if (v.size() == 2)
      return states::ghz(int(v[0]), int(v[1])).projector();
    throw validation_error("ghz spec needs n or n,local_dim");
  }
  if (name == "aharonov") {
    auto v = split_numbers(args);
    if (v.size() != 1) throw validation_error("aharonov spec needs n");
    return states::aharonov(int(v[0])).projector();
  }
  if (name == "acin") {
    auto v = split_numbers(args);
    if (v.size() != 5) throw validation_error("acin spec needs a,b,c,d,e");
    states::AcinParams p;
    p.a = v[0];
    p.b = v[1];
    p.c = v[2];
    p.d = v[3];
    p.e = v[4];
    return states::acin_state(p).projector();
  }
  if (name == "bb84") {
    auto v = split_numbers(args);
    if (v.size() != 4) throw validation_error("bb84 spec needs 4 weights");
    return states::bb84_mixture({{v[0], v[1], v[2], v[3]}});
  }
  if (name == "sausage") {
    auto v = split_numbers(args);
    if (v.size() != 9) throw validation_error("sausage spec needs 9 weights");
    std::array<double, 9> q;
    std::copy(v.begin(), v.end(), q.begin());
    return states::sausage_mixture(q);
  }
  if (name == "random") {
    auto v = split_numbers(args);
    if (v.empty() || v.size() > 2)
      throw validation_error("random spec needs seed[,stream]");
    return states::random_state(
        {2, 2}, {static_cast<std::uint64_t>(v[0]),
                 v.size() > 1 ? static_cast<std::uint64_t>(v[1]) : 0});
  }
  // otherwise: a state file
  std::ifstream in(spec);
  if (!in) throw validation_error("unknown state '" + spec + "' (and no such file)");
  json j;
  in >> j;
  return state_from_json(j);
}

clocc::CloccProtocol protocol_from_json(const json& j, const std::vector<int>& dims) {
  clocc::CloccProtocol proto;
  const json* steps = &j;
  if (j.is_object()) {
    if (j.contains("parties"))
      for (auto it = j.at("parties").begin(); it != j.at("parties").end(); ++it)
        proto.parties[it.key()] = it.value().get<std::vector<int>>();
    steps = &j.at("steps");
  }
  if (proto.parties.empty()) {
    // default: one party per factor, labelled A, B, C, ...
    for (size_t f = 0; f < dims.size(); ++f)
      proto.parties[std::string(1, char('A' + f))] = {static_cast<int>(f)};
  }
  for (const auto& s : *steps) {
    std::string kind = s.at("kind").get<std::string>();
    if (kind == "dephase") {
      clocc::DephaseStep step;
      step.party = s.at("party").get<std::string>();
      step.factors = s.at("factors").get<std::vector<int>>();
      if (s.contains("basis")) {
        step.basis = matrix_from_parts(s.at("basis"));
      } else {
        if (step.factors.size() != 1 || dims.at(step.factors[0]) != 2)
          throw validation_error(
              "protocol json: angle form needs a single qubit factor");
        measure::BlochBasis bb{s.value("theta", 0.0), s.value("phi", 0.0)};
        step.basis = bb.to_local(0).vectors;
      }
      proto.steps.push_back(step);
    } else if (kind == "unitary") {
      clocc::LocalUnitaryStep step;
      step.party = s.at("party").get<std::string>();
      step.factors = s.at("factors").get<std::vector<int>>();
      step.unitary = matrix_from_parts(s.at("matrix"));
      proto.steps.push_back(step);
    } else if (kind == "send") {
      clocc::SendStep step;
      step.from = s.at("from").get<std::string>();
      step.to = s.at("to").get<std::string>();
      step.factors = s.at("factors").get<std::vector<int>>();
      proto.steps.push_back(step);
    } else {
      throw validation_error("protocol json: unknown step kind '" + kind + "'");
    }
  }
  return proto;
}

json report_to_json(const deficits::DeficitReport& report) {
  json j;
  j["quantity"] = deficits::quantity_name(report.quantity);
  j["value"] = report.value;
  switch (report.provenance) {
    case deficits::Provenance::Exact: j["provenance"] = "exact"; break;
    case deficits::Provenance::Optimizer: j["provenance"] = "optimizer"; break;
    case deficits::Provenance::Bound: j["provenance"] = "bound"; break;
  }
  j["converged"] = report.diagnostics.converged;
  j["diagnostics"] = {{"evaluations", report.diagnostics.evaluations},
                      {"refined_below_grid", report.diagnostics.refined_below_grid}};
  if (!report.argmax_bases.empty()) {
    json bases = json::array();
    for (const auto& b : report.argmax_bases) {
      json jb = matrix_to_parts(b.vectors);
      jb["factor"] = b.factor;
      if (b.vectors.rows() == 2) {
        auto bb = measure::bloch_angles_of(b.vectors);
        jb["theta"] = bb.theta;
        jb["phi"] = bb.phi;
      }
      bases.push_back(std::move(jb));
    }
    j["argmax_bases"] = std::move(bases);
  }
  if (!report.diagnostics.optima_angles.empty())
    j["optima_angles"] = report.diagnostics.optima_angles;
  if (!report.companions.empty()) j["companions"] = report.companions;
  return j;
}

json ledger_to_json(const clocc::EntropyLedger& ledger) {
  json steps = json::array();
  for (const auto& e : ledger.entries)
    steps.push_back({{"step", e.description},
                     {"entropy_after", e.entropy_after},
                     {"delta_S", e.delta_S},
                     {"auto_inserted", e.auto_inserted}});
  json ownership;
  for (const auto& [party, fs] : ledger.final_ownership) ownership[party] = fs;
  return json{{"initial_entropy", ledger.initial_entropy},
              {"steps", std::move(steps)},
              {"total_delta_S", ledger.total_delta()},
              {"final_ownership", std::move(ownership)},
              {"final_local_entropies", ledger.final_local_entropies},
              {"localized_information", ledger.localized_information}};
}

}  // namespace dlab::json_io
