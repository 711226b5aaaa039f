#pragma once

#include "dlab/clocc.hpp"
#include "dlab/deficits.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>

// JSON wire formats used by the CLI: state files {dims, re, im, label},
// protocol files (step records), and DeficitReport emission.

namespace dlab::json_io {

using qmat::DensityMatrix;

nlohmann::json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const nlohmann::json& j);

/// Named state specs accepted by the CLI: singlet, mfs, cc,
/// bell:p1,p2,p3,p4, iso:lambda,d, ghz:n, w, aharonov:n, acin:a,b,c,d,e,
/// bb84:q1,q2,q3,q4, sausage:q1,...,q9, random:seed[,stream]. Anything else
/// is treated as a path to a JSON state file.
DensityMatrix parse_state_spec(const std::string& spec);

/// Protocol files: either a JSON array of step records or an object
/// {"parties": {...}, "steps": [...]}. Step records are
/// {"kind":"dephase","party":..,"factors":[..],"theta":..,"phi":..} (or an
/// explicit "basis" matrix), {"kind":"unitary",...,"matrix":{re,im}}, and
/// {"kind":"send","from":..,"to":..,"factors":[..]}.
clocc::CloccProtocol protocol_from_json(const nlohmann::json& j,
                                        const std::vector<int>& dims);

nlohmann::json report_to_json(const deficits::DeficitReport& report);
nlohmann::json ledger_to_json(const clocc::EntropyLedger& ledger);

}  // namespace dlab::json_io
